// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include "airgap/air_gap_element.hpp"
#include "airgap/error.hpp"
#include "airgap/fem.hpp"
#include "oracles.hpp"

using namespace airgap;
using oracle::kPi;

namespace
{

InterfaceRing Ring(std::size_t n, double radius, double theta0 = 0.0)
{
  InterfaceRing r;
  r.radius = radius;
  r.theta0 = theta0;
  for (std::size_t p = 0; p < n; p++)
  {
    r.node_indices.push_back(static_cast<Index>(p));
  }
  return r;
}

struct Fixture
{
  AirGapGeometry geometry{0.05, 0.04, 1.0 / kMu0, 0.1};
  InterfaceRing st, rt;
  AirGapOperator op;

  Fixture(std::size_t n_st, std::size_t n_rt, InterfaceCorrection c = InterfaceCorrection::Off,
          double th_st = 0.0, double th_rt = 0.0)
    : st(Ring(n_st, 0.05, th_st)), rt(Ring(n_rt, 0.04, th_rt)),
      op(geometry, st, rt, AirGapOperator::AllCommonOrders(st, rt), c)
  {
  }

  std::vector<double> Apply(const std::vector<double> &u) const
  {
    const std::size_t ns = op.StatorSize();
    std::vector<double> g(u.size());
    op.ApplyRing(std::span(u).first(ns), std::span(u).subspan(ns), std::span(g).first(ns),
                 std::span(g).subspan(ns));
    return g;
  }
};

double MaxAbs(const Eigen::MatrixXd &A)
{
  return A.cwiseAbs().maxCoeff();
}

oracle::DenseOperatorSpec SpecOf(const Fixture &f)
{
  oracle::DenseOperatorSpec s;
  s.geometry = f.geometry;
  s.n_st = f.op.StatorSize();
  s.n_rt = f.op.RotorSize();
  s.theta0_st = f.st.theta0;
  s.theta0_rt = f.rt.theta0;
  s.orders = f.op.Harmonics().Orders();
  s.sint = f.op.Correction() == InterfaceCorrection::Exact;
  s.alpha = f.op.Motion().alpha;
  s.gamma_skew = f.op.Motion().gamma_skew;
  s.eps = f.op.Motion().eps;
  return s;
}

}  // namespace

TEST_CASE("T and G blocks")
{
  const AirGapGeometry g{0.05, 0.04, 1.0, 1.0};
  const Block2 G = GBlock(1, g);
  CHECK(G[0][0] == doctest::Approx(-25.0).epsilon(1e-14));
  CHECK(G[0][1] == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(G[1][0] == doctest::Approx(-25.0).epsilon(1e-14));
  CHECK(G[1][1] == doctest::Approx(25.0).epsilon(1e-14));
  const Block2 T = TBlock(2, 1.25);
  CHECK(T[0][0] == doctest::Approx(1.5625));
  CHECK(T[0][1] == doctest::Approx(0.64));
  CHECK(T[1][0] == 1.0);
  CHECK_THROWS_AS(TBlock(0, 1.25), Error);
  CHECK_THROWS_AS(TBlock(1, 1.0), Error);
  CHECK_THROWS_AS(GBlock(1, AirGapGeometry{0.04, 0.05, 1.0, 1.0}), Error);
}

TEST_CASE("Dirichlet-to-Neumann block")
{
  const AirGapGeometry g{2.0, 1.0, 1.0, 1.0};
  const Block2 S = ScaledDtnBlock(1, g);
  const double k = 2.0 * kPi / 1.5;
  CHECK(S[0][0] == doctest::Approx(2.5 * k).epsilon(1e-13));
  CHECK(S[0][1] == doctest::Approx(-2.0 * k).epsilon(1e-13));
  CHECK(S[1][0] == doctest::Approx(-2.0 * k).epsilon(1e-13));
  CHECK(S[1][1] == doctest::Approx(2.5 * k).epsilon(1e-13));

  // Unscaled block equals G T^{-1} from the raw blocks.
  const AirGapGeometry h{0.05, 0.04, 3.0, 1.0};
  for (int l : {1, 2, 5, 11})
  {
    const Block2 T = TBlock(l, h.Xi()), G = GBlock(l, h), D = DtnBlock(l, h);
    Eigen::Matrix2d Te, Ge;
    Te << T[0][0], T[0][1], T[1][0], T[1][1];
    Ge << G[0][0], G[0][1], G[1][0], G[1][1];
    const Eigen::Matrix2d De = Ge * Te.inverse();
    for (int i = 0; i < 2; i++)
    {
      for (int j = 0; j < 2; j++)
      {
        CHECK(D[i][j] == doctest::Approx(De(i, j)).epsilon(1e-11));
      }
    }
    // Eigenvalues of the scaled block: 2 pi nu0 l (x^l + x^-l -+ 2)/(x^l - x^-l) > 0.
    const Block2 Sc = ScaledDtnBlock(l, h);
    const double xl = std::pow(h.Xi(), l), xm = 1.0 / xl;
    const double e1 = 2.0 * kPi * h.nu0 * l * (xl + xm - 2.0) / (xl - xm);
    const double e2 = 2.0 * kPi * h.nu0 * l * (xl + xm + 2.0) / (xl - xm);
    CHECK(Sc[0][0] + Sc[0][1] == doctest::Approx(e1).epsilon(1e-10));
    CHECK(Sc[0][0] - Sc[0][1] == doctest::Approx(e2).epsilon(1e-10));
    CHECK(e1 > 0.0);
  }

  // Large orders decouple without overflow.
  const Block2 big = ScaledDtnBlock(4000, AirGapGeometry{2.0, 1.0, 1.0, 1.0});
  CHECK(std::isfinite(big[0][0]));
  CHECK(std::abs(big[0][1] / big[0][0]) < 1e-300);
  const Block2 mid = ScaledDtnBlock(20, AirGapGeometry{2.0, 1.0, 1.0, 1.0});
  const double x20 = std::pow(2.0, 20);
  CHECK(std::abs(mid[0][1] / mid[0][0]) == doctest::Approx(2.0 / (x20 + 1.0 / x20)));
}

TEST_CASE("rotation and skew factors")
{
  const HarmonicSet set({1, 2});
  const auto r0 = RotationFactors(set, 0.0);
  CHECK(r0[0] == Complex(1.0));
  const auto r2pi = RotationFactors(HarmonicSet::Range(1, 20), 2.0 * kPi);
  for (const auto &f : r2pi)
  {
    CHECK(std::abs(f - 1.0) < 1e-15);
  }
  const auto rq = RotationFactors(set, kPi / 2);
  CHECK(std::abs(rq[0] - Complex(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(rq[1] + 1.0) < 1e-15);

  CHECK(SkewFactors(set, 0.0)[0] == 1.0);
  CHECK(SkewFactors(set, kPi / 3)[1] == doctest::Approx(3.0 * std::sqrt(3.0) / (2.0 * kPi)));
  CHECK(std::abs(SkewFactors(HarmonicSet({4}), kPi / 2)[0]) < 1e-15);
  CHECK(SkewFactors(HarmonicSet({3}), 1e-9)[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("eccentric blocks")
{
  const AirGapGeometry g{0.05, 0.04, 1.0, 1.0};
  const HarmonicSet set = HarmonicSet::Range(1, 6);

  SUBCASE("concentric limit")
  {
    const auto e = MakeEccentricBlocks(set, g, 0.0);
    for (std::size_t i = 0; i < set.Size(); i++)
    {
      const Block2 T = TBlock(set[i], g.Xi());
      const Block2 G = GBlock(set[i], g);
      for (int r = 0; r < 2; r++)
      {
        for (int c = 0; c < 2; c++)
        {
          CHECK(e.T.Diag(i)[r][c] == Complex(T[r][c]));
          CHECK(e.G.Diag(i)[r][c] == Complex(G[r][c]));
        }
      }
    }
    const Eigen::MatrixXcd D = e.T.Dense();
    for (Eigen::Index i = 0; i + 2 < D.rows(); i += 2)
    {
      CHECK(D.block(i, i + 2, 2, 2).norm() == 0.0);
      CHECK(D.block(i + 2, i, 2, 2).norm() == 0.0);
    }
  }

  SUBCASE("potential row substitution")
  {
    // c_rt,2 = a_2 + 3 eps a_3 + b_2 - 1 eps b_1 for real eps.
    const auto e = MakeEccentricBlocks(set, g, 0.01);
    std::vector<Complex> x(12, 0.0), y(12);
    x[2] = 0.3;   // a_2
    x[4] = -0.7;  // a_3
    x[3] = 0.25;  // b_2
    x[1] = 1.5;   // b_1
    e.T.Mult(x, y);
    CHECK(std::abs(y[3] - Complex(0.3 + 3 * 0.01 * -0.7 + 0.25 - 0.01 * 1.5)) < 1e-15);
  }

  SUBCASE("dense oracle")
  {
    const Complex eps = std::polar(0.03, 0.4);
    const auto d = oracle::EccentricDense(set.Orders(), g, eps);
    const auto e = MakeEccentricBlocks(set, g, eps);
    CHECK((e.T.Dense() - (d.T0 + d.T1)).norm() <= 1e-14 * d.T0.norm());
    CHECK((e.G.Dense() - (d.G0 + d.G1)).norm() <= 1e-14 * d.G0.norm());
  }
}

TEST_CASE("first-order eccentricity against the shifted-circle oracle")
{
  const AirGapGeometry g{0.05, 0.04, 1.0, 1.0};
  const std::vector<int> orders = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  // Band-limited coefficients in the interior of the set so that spectrum-edge truncation
  // does not pollute the comparison.
  std::vector<Complex> a(orders.size(), 0.0), b(orders.size(), 0.0);
  std::mt19937_64 rng(7);
  auto rc = oracle::RandomComplex(8, rng);
  for (int i = 2; i < 6; i++)
  {
    a[i] = rc[i];
    b[i] = rc[i + 2];
  }
  const HarmonicSet set(orders);
  std::vector<double> err_c, err_h;
  const std::vector<double> magnitudes = {1e-2, 1e-3, 1e-4};
  for (double m : magnitudes)
  {
    const Complex eps = std::polar(m, 0.7);
    const auto exact = oracle::ShiftedCircle(orders, a, b, g.rho_rt, g.nu0, eps, 256);
    const auto e = MakeEccentricBlocks(set, g, eps);
    std::vector<Complex> x(2 * orders.size()), yt(x.size()), yg(x.size());
    for (std::size_t i = 0; i < orders.size(); i++)
    {
      x[2 * i] = a[i];
      x[2 * i + 1] = b[i];
    }
    e.T.Mult(x, yt);
    e.G.Mult(x, yg);
    double ec = 0.0, eh = 0.0;
    for (std::size_t i = 0; i < orders.size(); i++)
    {
      ec = std::max(ec, std::abs(yt[2 * i + 1] - exact.c_rt[i]));
      eh = std::max(eh, std::abs(yg[2 * i + 1] - exact.h_rt[i]));
    }
    err_c.push_back(ec);
    err_h.push_back(eh);
  }
  for (const auto *err : {&err_c, &err_h})
  {
    const double s1 = std::log10((*err)[0] / (*err)[1]);
    const double s2 = std::log10((*err)[1] / (*err)[2]);
    CHECK(s1 == doctest::Approx(2.0).epsilon(0.1));
    CHECK(s2 == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("linearized eccentric coupling")
{
  const AirGapGeometry g{0.05, 0.04, 2.0, 1.0};
  const HarmonicSet set = HarmonicSet::Range(1, 9);
  const Complex eps = std::polar(0.02, -1.1);
  const Eigen::MatrixXcd B = LinearizedEccentricDtn(set, g, eps).Dense();
  const Eigen::MatrixXcd Bo = oracle::LinearizedDtnDense(set.Orders(), g, eps);
  CHECK((B - Bo).norm() <= 1e-12 * Bo.norm());
  CHECK((B - B.adjoint()).norm() <= 1e-13 * B.norm());
  const Eigen::MatrixXcd B0 = LinearizedEccentricDtn(set, g, 0.0).Dense();
  for (std::size_t i = 0; i < set.Size(); i++)
  {
    const Block2 S = ScaledDtnBlock(set[i], g);
    CHECK(B0(2 * i, 2 * i) == Complex(S[0][0]));
    CHECK(B0(2 * i + 1, 2 * i) == Complex(S[1][0]));
  }
}

TEST_CASE("block-tridiagonal solve")
{
  std::mt19937_64 rng(3);
  BlockTridiagonal A(7);
  for (std::size_t i = 0; i < 7; i++)
  {
    auto v = oracle::RandomComplex(12, rng);
    A.Diag(i) = {{{v[0] + 6.0, v[1]}, {v[2], v[3] + 6.0}}};
    if (i + 1 < 7)
    {
      A.Upper(i) = {{{v[4], v[5]}, {v[6], v[7]}}};
      A.Lower(i) = {{{v[8], v[9]}, {v[10], v[11]}}};
    }
  }
  const auto b = oracle::RandomComplex(14, rng);
  std::vector<Complex> x(14);
  A.Solve(b, x);
  const Eigen::VectorXcd xe =
      A.Dense().partialPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(b.data(), 14));
  for (int i = 0; i < 14; i++)
  {
    CHECK(std::abs(x[i] - xe(i)) < 1e-12);
  }
}

TEST_CASE("apply matches the dense oracle")
{
  struct State
  {
    double alpha, gskew;
    Complex eps;
  };
  for (auto corr : {InterfaceCorrection::Off, InterfaceCorrection::Exact})
  {
    for (const State s : {State{0, 0, 0.0}, State{0.3, 0, 0.0}, State{0, 0.2, 0.0},
                          State{0.1, 0.1, std::polar(0.01, 0.7)}})
    {
      Fixture f(32, 32, corr, 0.013, -0.4);
      f.op.SetMotion({s.alpha, s.gskew, s.eps});
      const Eigen::MatrixXd K = f.op.AssembleDense();
      const Eigen::MatrixXd Ko = oracle::DenseKag(SpecOf(f));
      CHECK(MaxAbs(K - Ko) <= 1e-12 * MaxAbs(Ko));
      std::mt19937_64 rng(11);
      const auto u = oracle::RandomVector(64, rng);
      const auto g = f.Apply(u);
      const Eigen::VectorXd go = Ko * Eigen::Map<const Eigen::VectorXd>(u.data(), 64);
      CHECK((Eigen::Map<const Eigen::VectorXd>(g.data(), 64) - go).norm() <= 1e-12 * go.norm());
    }
  }
  // Unequal ring sizes.
  Fixture f(40, 24, InterfaceCorrection::Exact, 0.1, 0.2);
  f.op.SetMotion({0.5, 0.05, 0.0});
  const Eigen::MatrixXd K = f.op.AssembleDense();
  CHECK(MaxAbs(K - oracle::DenseKag(SpecOf(f))) <= 1e-12 * MaxAbs(K));
  CHECK(MaxAbs(K - K.transpose()) <= 1e-12 * MaxAbs(K));
}

TEST_CASE("symmetry and semidefiniteness")
{
  for (double alpha : {0.0, 0.77, 3.0})
  {
    for (double gskew : {0.0, 0.13})
    {
      Fixture f(64, 64, InterfaceCorrection::Exact, 0.0, 0.02);
      f.op.SetMotion({alpha, gskew, 0.0});
      const Eigen::MatrixXd K = f.op.AssembleDense();
      const double norm = MaxAbs(K);
      CHECK(MaxAbs(K - K.transpose()) <= 1e-12 * norm);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (K + K.transpose()));
      CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("linearity, zero input, realness")
{
  Fixture f(32, 48, InterfaceCorrection::Exact);
  f.op.SetMotion({0.4, 0.1, std::polar(0.02, 1.0)});
  std::mt19937_64 rng(5);
  const auto u = oracle::RandomVector(80, rng), v = oracle::RandomVector(80, rng);
  std::vector<double> w(80);
  for (int i = 0; i < 80; i++)
  {
    w[i] = 2.5 * u[i] - 0.75 * v[i];
  }
  const auto gu = f.Apply(u), gv = f.Apply(v), gw = f.Apply(w);
  double scale = 0.0, err = 0.0;
  for (int i = 0; i < 80; i++)
  {
    scale = std::max(scale, std::abs(gw[i]));
    err = std::max(err, std::abs(gw[i] - (2.5 * gu[i] - 0.75 * gv[i])));
  }
  CHECK(err <= 1e-13 * scale);
  const auto g0 = f.Apply(std::vector<double>(80, 0.0));
  for (double x : g0)
  {
    CHECK(x == 0.0);
  }
  for (int k = 0; k < 20; k++)
  {
    const auto r = oracle::RandomVector(80, rng);
    CHECK(f.op.RealnessResidue(std::span(r).first(32), std::span(r).subspan(32)) <= 1e-13);
  }
}

TEST_CASE("single-harmonic gap field")
{
  // a_3 = 1, b_3 = 0: boundary data and surface currents from the closed-form field.
  const std::size_t n = 48;
  Fixture f(n, n);
  const auto &g = f.geometry;
  const int l = 3;
  std::vector<double> u(2 * n), expected(2 * n);
  auto A = [&](double r, double th) { return 2.0 * std::pow(r / g.rho_rt, l) * std::cos(l * th); };
  auto dAdr = [&](double r, double th)
  { return 2.0 * l / r * std::pow(r / g.rho_rt, l) * std::cos(l * th); };
  for (std::size_t p = 0; p < n; p++)
  {
    const double th = 2.0 * kPi * double(p) / double(n);
    u[p] = A(g.r_st, th);
    u[n + p] = A(g.rho_rt, th);
    // Nodal arc length times H = -nu0 dA/dr, stator sign -1, rotor +1.
    expected[p] = (2.0 * kPi * g.r_st / n) * g.nu0 * dAdr(g.r_st, th);
    expected[n + p] = -(2.0 * kPi * g.rho_rt / n) * g.nu0 * dAdr(g.rho_rt, th);
  }
  const auto out = f.Apply(u);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < 2 * n; i++)
  {
    err = std::max(err, std::abs(out[i] - expected[i]));
    scale = std::max(scale, std::abs(expected[i]));
  }
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("energy identity")
{
  const std::size_t n = 40;
  Fixture f(n, n);
  const auto &g = f.geometry;
  const double xi = g.Xi();
  const std::vector<std::pair<int, std::pair<Complex, Complex>>> fields = {
      {2, {Complex(0.3, -0.2), Complex(0.1, 0.5)}}, {7, {Complex(-1.0, 0.4), Complex(0.2, 0.0)}}};
  std::vector<double> u(2 * n, 0.0);
  double energy = 0.0;
  for (const auto &[l, ab] : fields)
  {
    const auto [a, b] = ab;
    for (std::size_t p = 0; p < n; p++)
    {
      const double th = 2.0 * kPi * double(p) / double(n);
      const Complex e = std::polar(1.0, -l * th);
      u[p] += 2.0 * std::real((a * std::pow(xi, l) + b * std::pow(xi, -l)) * e);
      u[n + p] += 2.0 * std::real((a + b) * e);
    }
    // nu0 int |grad A|^2 = 4 pi nu0 l (|a|^2 (xi^2l - 1) + |b|^2 (1 - xi^-2l)).
    energy += 4.0 * kPi * g.nu0 * l *
              (std::norm(a) * (std::pow(xi, 2 * l) - 1.0) + std::norm(b) * (1.0 - std::pow(xi, -2 * l)));
  }
  const auto gu = f.Apply(u);
  double uKu = 0.0;
  for (std::size_t i = 0; i < 2 * n; i++)
  {
    uKu += u[i] * gu[i];
  }
  CHECK(uKu == doctest::Approx(energy).epsilon(1e-8));
}

TEST_CASE("unselected harmonics are annihilated")
{
  const std::size_t n = 32;
  const AirGapGeometry geometry{0.05, 0.04, 1.0 / kMu0, 1.0};
  AirGapOperator op(geometry, Ring(n, 0.05), Ring(n, 0.04), HarmonicSet({1, 2, 3, 5}),
                    InterfaceCorrection::Exact);
  op.SetMotion({0.2, 0.1, std::polar(0.01, 0.3)});
  std::vector<double> us(n), ur(n), gs(n), gr(n);
  for (std::size_t p = 0; p < n; p++)
  {
    const double th = 2.0 * kPi * double(p) / double(n);
    us[p] = 1.0 + std::cos(4 * th) + 0.5 * std::sin(9 * th) + ((p % 2) ? -1.0 : 1.0);
    ur[p] = -2.0 + std::sin(7 * th + 0.2) + 0.3 * std::cos(15 * th);
  }
  op.ApplyRing(us, ur, gs, gr);
  // Zero up to FFT round-off relative to the operator scale.
  const double scale = geometry.nu0;
  for (std::size_t p = 0; p < n; p++)
  {
    CHECK(std::abs(gs[p]) <= 1e-14 * scale);
    CHECK(std::abs(gr[p]) <= 1e-14 * scale);
  }
}

TEST_CASE("rotation equivariance")
{
  const std::size_t n = 36;
  Fixture f(n, n, InterfaceCorrection::Exact, 0.0, 0.05);
  std::mt19937_64 rng(9);
  const auto u = oracle::RandomVector(2 * n, rng);
  const auto g0 = f.Apply(u);
  for (int k : {1, 5, 13})
  {
    f.op.SetMotion({2.0 * kPi * k / double(n), 0.0, 0.0});
    // A rotor rotated by k nodes presents node p where node p + k used to be.
    std::vector<double> shifted(u);
    for (std::size_t p = 0; p < n; p++)
    {
      shifted[n + (p + k) % n] = u[n + p];
    }
    const auto gk = f.Apply(u);
    f.op.SetMotion({});
    const auto gs = f.Apply(shifted);
    double err = 0.0, scale = 0.0;
    for (std::size_t p = 0; p < n; p++)
    {
      scale = std::max(scale, std::abs(gs[p]));
      err = std::max(err, std::abs(gk[p] - gs[p]));
      err = std::max(err, std::abs(gk[n + p] - gs[n + (p + k) % n]));
    }
    CHECK(err <= 1e-11 * scale);
  }
  (void)g0;
}

TEST_CASE("eccentric operator at eps = 0 is the concentric operator")
{
  Fixture f(32, 32, InterfaceCorrection::Exact);
  std::mt19937_64 rng(2);
  const auto u = oracle::RandomVector(64, rng);
  const auto g0 = f.Apply(u);
  f.op.SetMotion({0.0, 0.0, std::polar(0.05, 0.3)});
  f.op.SetMotion({0.0, 0.0, 0.0});
  CHECK(f.Apply(u) == g0);
}

TEST_CASE("skew limits")
{
  Fixture f(32, 32, InterfaceCorrection::Exact);
  const Eigen::MatrixXd K0 = f.op.AssembleDense();
  f.op.SetMotion({0.0, 1e-8, 0.0});
  const Eigen::MatrixXd K1 = f.op.AssembleDense();
  CHECK(MaxAbs(K1 - K0) <= 1e-12 * MaxAbs(K0));
  const double gamma = 2.0 * kPi / 5.0;
  CHECK(std::abs(SkewFactors(HarmonicSet({5}), gamma)[0]) <= 1e-15);
}

TEST_CASE("approximate inverse")
{
  for (const MotionState m : {MotionState{}, MotionState{0.3, 0.05, std::polar(0.015, 2.0)}})
  {
    Fixture f(40, 32, InterfaceCorrection::Exact, 0.1, 0.0);
    f.op.SetMotion(m);
    std::mt19937_64 rng(4);
    const auto v = oracle::RandomVector(72, rng);
    const auto g = f.Apply(v);
    std::vector<double> w(72);
    f.op.ApplyApproximateInverseRing(std::span(g).first(40), std::span(g).subspan(40),
                                     std::span(w).first(40), std::span(w).subspan(40));
    // Projection of v onto the selected harmonics.
    std::vector<double> pv(72);
    const HarmonicSet &set = f.op.Harmonics();
    for (int side = 0; side < 2; side++)
    {
      const std::size_t n = side == 0 ? 40 : 32, off = side == 0 ? 0 : 40;
      const double th0 = side == 0 ? 0.1 : 0.0;
      std::vector<double> part(v.begin() + off, v.begin() + off + n);
      const auto c = oracle::DirectDft(part, th0);
      for (std::size_t p = 0; p < n; p++)
      {
        const double th = th0 + 2.0 * kPi * double(p) / double(n);
        double s = 0.0;
        for (int l : set.Orders())
        {
          s += 2.0 * std::real(c[l - 1] * std::polar(1.0, -l * th));
        }
        pv[off + p] = s;
      }
    }
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < 72; i++)
    {
      err = std::max(err, std::abs(w[i] - pv[i]));
      scale = std::max(scale, std::abs(pv[i]));
    }
    CHECK(err <= 1e-10 * scale);
    std::vector<double> z(72);
    const std::vector<double> zero(72, 0.0);
    f.op.ApplyApproximateInverseRing(std::span(zero).first(40), std::span(zero).subspan(40),
                                     std::span(z).first(40), std::span(z).subspan(40));
    CHECK(*std::max_element(z.begin(), z.end()) == 0.0);
  }
}

TEST_CASE("operator contract errors")
{
  const AirGapGeometry g{0.05, 0.04, 1.0, 1.0};
  CHECK_THROWS_AS(AirGapOperator(g, Ring(32, 0.05), Ring(32, 0.04), HarmonicSet({1, 16})), Error);
  CHECK_THROWS_AS(AirGapOperator(g, Ring(32, 0.06), Ring(32, 0.04), HarmonicSet({1})), Error);
  AirGapOperator op(g, Ring(300, 0.05), Ring(300, 0.04), HarmonicSet({1, 2}));
  CHECK_THROWS_AS(op.AssembleDense(), Error);
  CHECK_THROWS_AS(op.SetMotion({0.0, 0.0, 0.25}), Error);
  CHECK(ValidateMotion({0.0, 0.0, 0.1}));
  CHECK_FALSE(ValidateMotion({0.0, 0.0, 0.01}));
  std::vector<double> bad(10), out(300);
  CHECK_THROWS_AS(op.ApplyRing(bad, out, out, out), Error);
  try
  {
    HarmonicSet({0, 1});
    FAIL("expected error");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::Configuration);
  }
}
