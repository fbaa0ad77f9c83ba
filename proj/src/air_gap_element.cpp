// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include "airgap/air_gap_element.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <fftw3.h>
#include "airgap/error.hpp"
#include "airgap/fem.hpp"

namespace airgap
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <typename T>
Mat2<T> Zero2()
{
  return {{{T(0), T(0)}, {T(0), T(0)}}};
}

CBlock2 Mul(const CBlock2 &A, const CBlock2 &B)
{
  CBlock2 C = Zero2<Complex>();
  for (int i = 0; i < 2; i++)
  {
    for (int j = 0; j < 2; j++)
    {
      C[i][j] = A[i][0] * B[0][j] + A[i][1] * B[1][j];
    }
  }
  return C;
}

CBlock2 Sub(const CBlock2 &A, const CBlock2 &B)
{
  CBlock2 C;
  for (int i = 0; i < 2; i++)
  {
    for (int j = 0; j < 2; j++)
    {
      C[i][j] = A[i][j] - B[i][j];
    }
  }
  return C;
}

CBlock2 Inverse(const CBlock2 &A)
{
  const Complex det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  const double scale = std::max({std::abs(A[0][0]), std::abs(A[0][1]), std::abs(A[1][0]),
                                 std::abs(A[1][1])});
  if (!(std::abs(det) > 1e-300) || !(std::abs(det) > 1e-14 * scale * scale))
  {
    Throw(ErrorCode::Internal, "singular 2x2 block");
  }
  return {{{A[1][1] / det, -A[0][1] / det}, {-A[1][0] / det, A[0][0] / det}}};
}

std::array<Complex, 2> Apply2(const CBlock2 &A, Complex x0, Complex x1)
{
  return {A[0][0] * x0 + A[0][1] * x1, A[1][0] * x0 + A[1][1] * x1};
}

CBlock2 ToComplex(const Block2 &A)
{
  return {{{A[0][0], A[0][1]}, {A[1][0], A[1][1]}}};
}

}  // namespace

void AirGapGeometry::Validate() const
{
  if (!(rho_rt > 0.0) || !std::isfinite(rho_rt))
  {
    Throw(ErrorCode::InvalidGeometry, "rotor interface radius must be positive");
  }
  if (!(r_st > rho_rt) || !std::isfinite(r_st))
  {
    Throw(ErrorCode::InvalidGeometry, "air-gap radius ratio xi = r_st/rho_rt must exceed 1");
  }
  if (!(nu0 > 0.0) || !(ell_z > 0.0))
  {
    Throw(ErrorCode::InvalidGeometry, "nu0 and ell_z must be positive");
  }
}

MotionState MotionState::FromEccentricity(double alpha, double gamma_skew, double d_ecc,
                                          double gamma_ecc, double rho_rt)
{
  return {alpha, gamma_skew, std::polar(d_ecc / rho_rt, gamma_ecc)};
}

bool ValidateMotion(const MotionState &state)
{
  if (!std::isfinite(state.alpha) || !std::isfinite(state.gamma_skew) ||
      !std::isfinite(std::abs(state.eps)))
  {
    Throw(ErrorCode::Validation, "non-finite motion state");
  }
  if (std::abs(state.eps) > kEpsLimit)
  {
    Throw(ErrorCode::Validation, "relative eccentricity |eps| = " +
                                     std::to_string(std::abs(state.eps)) +
                                     " exceeds the first-order model limit 0.2");
  }
  return std::abs(state.eps) > kEpsWarn;
}

Block2 TBlock(int lambda, double xi)
{
  if (!(xi > 1.0))
  {
    Throw(ErrorCode::InvalidGeometry, "xi must exceed 1");
  }
  if (lambda < 1)
  {
    Throw(ErrorCode::InvalidArgument, "harmonic order must be positive");
  }
  return {{{std::pow(xi, lambda), std::pow(xi, -lambda)}, {1.0, 1.0}}};
}

Block2 GBlock(int lambda, const AirGapGeometry &g)
{
  g.Validate();
  if (lambda < 1)
  {
    Throw(ErrorCode::InvalidArgument, "harmonic order must be positive");
  }
  const double xi = g.Xi(), s = g.nu0 * lambda;
  return {{{-s * std::pow(xi, lambda) / g.r_st, s * std::pow(xi, -lambda) / g.r_st},
           {-s / g.rho_rt, s / g.rho_rt}}};
}

namespace
{

// q = xi^-l and den = 1 - q^2 give overflow-free T^{-1} = [[q, -q^2], [-q, 1]] / den.
struct Ratio
{
  double q, den;
};

Ratio RatioFor(int lambda, double xi)
{
  const double q = std::exp(-lambda * std::log(xi));
  return {q, -std::expm1(-2.0 * lambda * std::log(xi))};
}

}  // namespace

Block2 DtnBlock(int lambda, const AirGapGeometry &g)
{
  g.Validate();
  if (lambda < 1)
  {
    Throw(ErrorCode::InvalidArgument, "harmonic order must be positive");
  }
  const auto [q, den] = RatioFor(lambda, g.Xi());
  const double s = g.nu0 * lambda / den;
  return {{{-s * (1.0 + q * q) / g.r_st, s * 2.0 * q / g.r_st},
           {-s * 2.0 * q / g.rho_rt, s * (1.0 + q * q) / g.rho_rt}}};
}

Block2 ScaledDtnBlock(int lambda, const AirGapGeometry &g)
{
  const Block2 D = DtnBlock(lambda, g);
  const double ms = -kTwoPi * g.r_st, mr = kTwoPi * g.rho_rt;
  Block2 S = {{{ms * D[0][0], ms * D[0][1]}, {mr * D[1][0], mr * D[1][1]}}};
  // Exact symmetry; both off-diagonals equal -2 pi nu0 l csch(l ln xi) analytically.
  const double off = 0.5 * (S[0][1] + S[1][0]);
  S[0][1] = S[1][0] = off;
  return S;
}

std::vector<Complex> RotationFactors(const HarmonicSet &set, double alpha)
{
  std::vector<Complex> r;
  r.reserve(set.Size());
  // Reduce alpha first so whole turns map exactly onto unit factors.
  const double a = std::remainder(alpha, kTwoPi);
  for (int l : set.Orders())
  {
    r.push_back(std::polar(1.0, std::remainder(l * a, kTwoPi)));
  }
  return r;
}

std::vector<double> SkewFactors(const HarmonicSet &set, double gamma_skew)
{
  std::vector<double> s;
  s.reserve(set.Size());
  for (int l : set.Orders())
  {
    const double x = 0.5 * l * gamma_skew;
    s.push_back(std::abs(2.0 * x) < 1e-6 ? 1.0 - x * x / 6.0 : std::sin(x) / x);
  }
  return s;
}

BlockTridiagonal::BlockTridiagonal(std::size_t size)
  : diag_(size, Zero2<Complex>()), upper_(size > 0 ? size - 1 : 0, Zero2<Complex>()),
    lower_(size > 0 ? size - 1 : 0, Zero2<Complex>())
{
}

void BlockTridiagonal::Mult(std::span<const Complex> x, std::span<Complex> y) const
{
  const std::size_t n = Size();
  if (x.size() != 2 * n || y.size() != 2 * n)
  {
    Throw(ErrorCode::Internal, "block-tridiagonal dimension mismatch");
  }
  for (std::size_t i = 0; i < n; i++)
  {
    auto v = Apply2(diag_[i], x[2 * i], x[2 * i + 1]);
    if (i + 1 < n)
    {
      const auto u = Apply2(upper_[i], x[2 * i + 2], x[2 * i + 3]);
      v[0] += u[0];
      v[1] += u[1];
    }
    if (i > 0)
    {
      const auto w = Apply2(lower_[i - 1], x[2 * i - 2], x[2 * i - 1]);
      v[0] += w[0];
      v[1] += w[1];
    }
    y[2 * i] = v[0];
    y[2 * i + 1] = v[1];
  }
}

void BlockTridiagonal::Solve(std::span<const Complex> b, std::span<Complex> x) const
{
  const std::size_t n = Size();
  if (b.size() != 2 * n || x.size() != 2 * n)
  {
    Throw(ErrorCode::Internal, "block-tridiagonal dimension mismatch");
  }
  if (n == 0)
  {
    return;
  }
  std::vector<CBlock2> c(n);
  std::vector<std::array<Complex, 2>> d(n);
  CBlock2 inv = Inverse(diag_[0]);
  if (n > 1)
  {
    c[0] = Mul(inv, upper_[0]);
  }
  d[0] = Apply2(inv, b[0], b[1]);
  for (std::size_t i = 1; i < n; i++)
  {
    inv = Inverse(Sub(diag_[i], Mul(lower_[i - 1], c[i - 1])));
    if (i + 1 < n)
    {
      c[i] = Mul(inv, upper_[i]);
    }
    const auto l = Apply2(lower_[i - 1], d[i - 1][0], d[i - 1][1]);
    d[i] = Apply2(inv, b[2 * i] - l[0], b[2 * i + 1] - l[1]);
  }
  x[2 * n - 2] = d[n - 1][0];
  x[2 * n - 1] = d[n - 1][1];
  for (std::size_t i = n - 1; i-- > 0;)
  {
    const auto u = Apply2(c[i], x[2 * i + 2], x[2 * i + 3]);
    x[2 * i] = d[i][0] - u[0];
    x[2 * i + 1] = d[i][1] - u[1];
  }
}

Eigen::MatrixXcd BlockTridiagonal::Dense() const
{
  const auto n = static_cast<Eigen::Index>(Size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    for (int r = 0; r < 2; r++)
    {
      for (int s = 0; s < 2; s++)
      {
        A(2 * i + r, 2 * i + s) = diag_[i][r][s];
        if (i + 1 < n)
        {
          A(2 * i + r, 2 * i + 2 + s) = upper_[i][r][s];
          A(2 * i + 2 + r, 2 * i + s) = lower_[i][r][s];
        }
      }
    }
  }
  return A;
}

EccentricBlocks MakeEccentricBlocks(const HarmonicSet &set, const AirGapGeometry &g,
                                    Complex eps)
{
  g.Validate();
  const std::size_t n = set.Size();
  EccentricBlocks out{BlockTridiagonal(n), BlockTridiagonal(n)};
  for (std::size_t i = 0; i < n; i++)
  {
    out.T.Diag(i) = ToComplex(TBlock(set[i], g.Xi()));
    out.G.Diag(i) = ToComplex(GBlock(set[i], g));
    if (i + 1 < n && set[i + 1] == set[i] + 1)
    {
      const double l = set[i];
      // Row l couples to a_{l+1}; row l+1 couples to b_l.
      out.T.Upper(i)[1][0] = (l + 1.0) * std::conj(eps);
      out.G.Upper(i)[1][0] = -g.nu0 * l * (l + 1.0) * std::conj(eps) / g.rho_rt;
      out.T.Lower(i)[1][1] = -l * eps;
      out.G.Lower(i)[1][1] = -g.nu0 * (l + 1.0) * l * eps / g.rho_rt;
    }
  }
  return out;
}

BlockTridiagonal LinearizedEccentricDtn(const HarmonicSet &set, const AirGapGeometry &g,
                                        Complex eps)
{
  g.Validate();
  const std::size_t n = set.Size();
  const double xi = g.Xi();
  const double ms = -kTwoPi * g.r_st, mr = kTwoPi * g.rho_rt;
  BlockTridiagonal B(n);

  // Rotor column of the unscaled block G_l T_l^{-1}.
  auto rotor_column = [&](int l) -> std::array<double, 2>
  {
    const auto [q, den] = RatioFor(l, xi);
    const double s = g.nu0 * l / den;
    return {s * 2.0 * q / g.r_st, s * (1.0 + q * q) / g.rho_rt};
  };
  // Block M v r^T for a column vector v (per side) and a row r of T^{-1}.
  auto outer = [&](std::array<Complex, 2> v, std::array<double, 2> row)
  {
    CBlock2 b;
    for (int s = 0; s < 2; s++)
    {
      b[0][s] = ms * v[0] * row[s];
      b[1][s] = mr * v[1] * row[s];
    }
    return b;
  };

  for (std::size_t i = 0; i < n; i++)
  {
    B.Diag(i) = ToComplex(ScaledDtnBlock(set[i], g));
    if (i + 1 >= n || set[i + 1] != set[i] + 1 || eps == Complex(0.0))
    {
      continue;
    }
    const double l = set[i];
    const auto col_l = rotor_column(set[i]);
    const auto col_next = rotor_column(set[i + 1]);
    const auto [q_next, den_next] = RatioFor(set[i + 1], xi);
    const auto [q_l, den_l] = RatioFor(set[i], xi);

    // Row l through a_{l+1}: (G1 - D0 T1) column, then first row of T_{l+1}^{-1}.
    const Complex ca = (l + 1.0) * std::conj(eps);
    const std::array<Complex, 2> v_up = {-col_l[0] * ca,
                                         -g.nu0 * l * ca / g.rho_rt - col_l[1] * ca};
    B.Upper(i) = outer(v_up, {q_next / den_next, -q_next * q_next / den_next});

    // Row l+1 through b_l: second row of T_l^{-1}.
    const Complex cb = -l * eps;
    const std::array<Complex, 2> v_lo = {-col_next[0] * cb,
                                         g.nu0 * (l + 1.0) * cb / g.rho_rt - col_next[1] * cb};
    B.Lower(i) = outer(v_lo, {-q_l / den_l, 1.0 / den_l});
  }
  return B;
}

AirGapOperator::AirGapOperator(AirGapGeometry geometry, InterfaceRing stator_ring,
                               InterfaceRing rotor_ring, HarmonicSet harmonics,
                               InterfaceCorrection correction)
  : geometry_(geometry), stator_ring_(std::move(stator_ring)),
    rotor_ring_(std::move(rotor_ring)), harmonics_(std::move(harmonics)),
    correction_(correction)
{
  geometry_.Validate();
  if (std::abs(stator_ring_.radius - geometry_.r_st) > 1e-9 * geometry_.r_st ||
      std::abs(rotor_ring_.radius - geometry_.rho_rt) > 1e-9 * geometry_.rho_rt)
  {
    Throw(ErrorCode::Configuration, "interface ring radii do not match the air-gap geometry");
  }
  harmonics_.Validate(std::min(LambdaMax(stator_ring_.Size()), LambdaMax(rotor_ring_.Size())));
  stator_fft_ = RingTransform(stator_ring_.Size(), stator_ring_.theta0);
  rotor_fft_ = RingTransform(rotor_ring_.Size(), rotor_ring_.theta0);
  for (int l : harmonics_.Orders())
  {
    const bool on = correction_ == InterfaceCorrection::Exact;
    sint_st_.push_back(on ? InterfaceCorrectionFactor(l, stator_ring_.Size()) : 1.0);
    sint_rt_.push_back(on ? InterfaceCorrectionFactor(l, rotor_ring_.Size()) : 1.0);
  }
  Rebuild();
}

HarmonicSet AirGapOperator::AllCommonOrders(const InterfaceRing &stator,
                                            const InterfaceRing &rotor)
{
  return HarmonicSet::Range(1, std::min(LambdaMax(stator.Size()), LambdaMax(rotor.Size())));
}

void AirGapOperator::SetMotion(const MotionState &state)
{
  ValidateMotion(state);
  if (state == motion_)
  {
    return;
  }
  motion_ = state;
  Rebuild();
}

void AirGapOperator::Rebuild()
{
  rotation_ = RotationFactors(harmonics_, motion_.alpha);
  skew_ = SkewFactors(harmonics_, motion_.gamma_skew);
  coupling_ = LinearizedEccentricDtn(harmonics_, geometry_, motion_.eps);
}

void AirGapOperator::Gather(std::span<const double> u_st, std::span<const double> u_rt,
                            std::vector<Complex> &x) const
{
  if (u_st.size() != StatorSize() || u_rt.size() != RotorSize())
  {
    Throw(ErrorCode::Internal, "ring vector size does not match the air-gap operator");
  }
  std::vector<Complex> c_st(static_cast<std::size_t>(LambdaMax(StatorSize())));
  std::vector<Complex> c_rt(static_cast<std::size_t>(LambdaMax(RotorSize())));
  stator_fft_.AnalyzeCoefficients(u_st, c_st);
  rotor_fft_.AnalyzeCoefficients(u_rt, c_rt);
  x.resize(2 * harmonics_.Size());
  for (std::size_t i = 0; i < harmonics_.Size(); i++)
  {
    const auto k = static_cast<std::size_t>(harmonics_[i] - 1);
    x[2 * i] = sint_st_[i] * c_st[k];
    x[2 * i + 1] = rotation_[i] * (skew_[i] * sint_rt_[i]) * c_rt[k];
  }
}

void AirGapOperator::Scatter(std::vector<Complex> &y, std::span<double> g_st,
                             std::span<double> g_rt, bool inverse) const
{
  std::vector<Complex> c_st(static_cast<std::size_t>(LambdaMax(StatorSize())), Complex(0.0));
  std::vector<Complex> c_rt(static_cast<std::size_t>(LambdaMax(RotorSize())), Complex(0.0));
  const double n_st = static_cast<double>(StatorSize());
  const double n_rt = static_cast<double>(RotorSize());
  for (std::size_t i = 0; i < harmonics_.Size(); i++)
  {
    const auto k = static_cast<std::size_t>(harmonics_[i] - 1);
    if (inverse)
    {
      c_st[k] = y[2 * i] / sint_st_[i];
      c_rt[k] = std::conj(rotation_[i]) * y[2 * i + 1] / (sint_rt_[i] * skew_[i]);
    }
    else
    {
      c_st[k] = sint_st_[i] * y[2 * i] / n_st;
      c_rt[k] = std::conj(rotation_[i]) * (skew_[i] * sint_rt_[i] / n_rt) * y[2 * i + 1];
    }
  }
  stator_fft_.SynthesizeCoefficients(c_st, g_st);
  rotor_fft_.SynthesizeCoefficients(c_rt, g_rt);
}

void AirGapOperator::ApplyRing(std::span<const double> u_st, std::span<const double> u_rt,
                               std::span<double> g_st, std::span<double> g_rt) const
{
  if (g_st.size() != StatorSize() || g_rt.size() != RotorSize())
  {
    Throw(ErrorCode::Internal, "ring vector size does not match the air-gap operator");
  }
  std::vector<Complex> x, y(2 * harmonics_.Size());
  Gather(u_st, u_rt, x);
  coupling_.Mult(x, y);
  Scatter(y, g_st, g_rt, false);
}

void AirGapOperator::Apply(std::span<const double> u_st, std::span<const double> u_rt,
                           std::span<double> g_st, std::span<double> g_rt) const
{
  if (u_st.size() != g_st.size() || u_rt.size() != g_rt.size())
  {
    Throw(ErrorCode::Internal, "subdomain vector size mismatch");
  }
  std::vector<double> us(StatorSize()), ur(RotorSize()), gs(StatorSize()), gr(RotorSize());
  Restrict(u_st, stator_ring_, us);
  Restrict(u_rt, rotor_ring_, ur);
  ApplyRing(us, ur, gs, gr);
  Prolongate(gs, stator_ring_, g_st);
  Prolongate(gr, rotor_ring_, g_rt);
}

void AirGapOperator::ApplyApproximateInverseRing(std::span<const double> g_st,
                                                 std::span<const double> g_rt,
                                                 std::span<double> u_st, std::span<double> u_rt,
                                                 std::span<const double> shift_st,
                                                 std::span<const double> shift_rt) const
{
  if (g_st.size() != StatorSize() || g_rt.size() != RotorSize() ||
      u_st.size() != StatorSize() || u_rt.size() != RotorSize())
  {
    Throw(ErrorCode::Internal, "ring vector size does not match the air-gap operator");
  }
  const bool shifted = !shift_st.empty() || !shift_rt.empty();
  if (shifted && (shift_st.size() != harmonics_.Size() || shift_rt.size() != harmonics_.Size()))
  {
    Throw(ErrorCode::Internal, "ring shift size does not match the harmonic set");
  }
  constexpr double kSkewFloor = 0.1;
  std::vector<Complex> h_st(static_cast<std::size_t>(LambdaMax(StatorSize())));
  std::vector<Complex> h_rt(static_cast<std::size_t>(LambdaMax(RotorSize())));
  stator_fft_.AnalyzeCoefficients(g_st, h_st);
  rotor_fft_.AnalyzeCoefficients(g_rt, h_rt);
  const double n_st = static_cast<double>(StatorSize());
  const double n_rt = static_cast<double>(RotorSize());
  std::vector<Complex> y(2 * harmonics_.Size()), x(2 * harmonics_.Size());
  std::vector<double> skew(skew_);
  for (auto &s : skew)
  {
    s = std::abs(s) < kSkewFloor ? (s < 0.0 ? -kSkewFloor : kSkewFloor) : s;
  }
  for (std::size_t i = 0; i < harmonics_.Size(); i++)
  {
    const auto k = static_cast<std::size_t>(harmonics_[i] - 1);
    y[2 * i] = n_st * h_st[k] / sint_st_[i];
    y[2 * i + 1] = rotation_[i] * n_rt * h_rt[k] / (sint_rt_[i] * skew[i]);
  }
  if (shifted)
  {
    // In gap-frame unknowns the shift reads n sigma / |w|^2 with w the side's weighting.
    BlockTridiagonal B = coupling_;
    for (std::size_t i = 0; i < harmonics_.Size(); i++)
    {
      const double w_st = sint_st_[i], w_rt = sint_rt_[i] * skew[i];
      B.Diag(i)[0][0] += n_st * shift_st[i] / (w_st * w_st);
      B.Diag(i)[1][1] += n_rt * shift_rt[i] / (w_rt * w_rt);
    }
    B.Solve(y, x);
  }
  else
  {
    coupling_.Solve(y, x);
  }
  std::vector<Complex> c_st(h_st.size(), Complex(0.0)), c_rt(h_rt.size(), Complex(0.0));
  for (std::size_t i = 0; i < harmonics_.Size(); i++)
  {
    const auto k = static_cast<std::size_t>(harmonics_[i] - 1);
    c_st[k] = x[2 * i] / sint_st_[i];
    c_rt[k] = std::conj(rotation_[i]) * x[2 * i + 1] / (sint_rt_[i] * skew[i]);
  }
  stator_fft_.SynthesizeCoefficients(c_st, u_st);
  rotor_fft_.SynthesizeCoefficients(c_rt, u_rt);
}

void AirGapOperator::ApplyApproximateInverse(std::span<const double> g_st,
                                             std::span<const double> g_rt,
                                             std::span<double> u_st,
                                             std::span<double> u_rt) const
{
  std::vector<double> gs(StatorSize()), gr(RotorSize()), us(StatorSize()), ur(RotorSize());
  Restrict(g_st, stator_ring_, gs);
  Restrict(g_rt, rotor_ring_, gr);
  ApplyApproximateInverseRing(gs, gr, us, ur);
  Prolongate(us, stator_ring_, u_st);
  Prolongate(ur, rotor_ring_, u_rt);
}

void AirGapOperator::GapFrameCoefficients(std::span<const double> u_st,
                                          std::span<const double> u_rt,
                                          std::vector<Complex> &c_st,
                                          std::vector<Complex> &c_rt) const
{
  std::vector<Complex> x;
  Gather(u_st, u_rt, x);
  c_st.resize(harmonics_.Size());
  c_rt.resize(harmonics_.Size());
  for (std::size_t i = 0; i < harmonics_.Size(); i++)
  {
    c_st[i] = x[2 * i];
    c_rt[i] = x[2 * i + 1];
  }
}

namespace
{

// Unnormalized complex DFT: sign -1 gives sum_p z_p exp(-j 2 pi k p/n), +1 the conjugate kernel.
std::vector<Complex> ComplexDft(const std::vector<Complex> &z, int sign)
{
  std::vector<Complex> in(z), out(z.size());
  static std::mutex m;
  fftw_plan plan;
  {
    std::lock_guard lock(m);
    plan = fftw_plan_dft_1d(static_cast<int>(z.size()), reinterpret_cast<fftw_complex *>(in.data()),
                            reinterpret_cast<fftw_complex *>(out.data()),
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(m);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

double AirGapOperator::RealnessResidue(std::span<const double> u_st,
                                       std::span<const double> u_rt) const
{
  if (u_st.size() != StatorSize() || u_rt.size() != RotorSize())
  {
    Throw(ErrorCode::Internal, "ring vector size does not match the air-gap operator");
  }
  const std::size_t L = harmonics_.Size();
  const std::size_t n_st = StatorSize(), n_rt = RotorSize();
  const auto W_st = ComplexDft(std::vector<Complex>(u_st.begin(), u_st.end()), +1);
  const auto W_rt = ComplexDft(std::vector<Complex>(u_rt.begin(), u_rt.end()), +1);

  // Positive orders l read bins l, negative orders -l read bins n-l.
  std::vector<Complex> xp(2 * L), xm(2 * L), yp(2 * L), ym(2 * L);
  for (std::size_t i = 0; i < L; i++)
  {
    const int l = harmonics_[i];
    const auto ls = static_cast<std::size_t>(l);
    const Complex ph_st = std::polar(1.0, l * stator_ring_.theta0);
    const Complex ph_rt = std::polar(1.0, l * rotor_ring_.theta0);
    xp[2 * i] = sint_st_[i] * ph_st * W_st[ls] / double(n_st);
    xp[2 * i + 1] = rotation_[i] * skew_[i] * sint_rt_[i] * ph_rt * W_rt[ls] / double(n_rt);
    xm[2 * i] = sint_st_[i] * std::conj(ph_st) * W_st[n_st - ls] / double(n_st);
    xm[2 * i + 1] = std::conj(rotation_[i]) * skew_[i] * sint_rt_[i] * std::conj(ph_rt) *
                    W_rt[n_rt - ls] / double(n_rt);
  }
  coupling_.Mult(xp, yp);
  // Negative orders see the complex-conjugate coupling.
  for (auto &v : xm)
  {
    v = std::conj(v);
  }
  coupling_.Mult(xm, ym);
  for (auto &v : ym)
  {
    v = std::conj(v);
  }

  std::vector<Complex> Y_st(n_st, Complex(0.0)), Y_rt(n_rt, Complex(0.0));
  for (std::size_t i = 0; i < L; i++)
  {
    const int l = harmonics_[i];
    const auto ls = static_cast<std::size_t>(l);
    const Complex ph_st = std::polar(1.0, -l * stator_ring_.theta0);
    const Complex ph_rt = std::polar(1.0, -l * rotor_ring_.theta0);
    Y_st[ls] = ph_st * sint_st_[i] * yp[2 * i] / double(n_st);
    Y_st[n_st - ls] = std::conj(ph_st) * sint_st_[i] * ym[2 * i] / double(n_st);
    Y_rt[ls] = ph_rt * std::conj(rotation_[i]) * skew_[i] * sint_rt_[i] * yp[2 * i + 1] /
               double(n_rt);
    Y_rt[n_rt - ls] = std::conj(ph_rt) * rotation_[i] * skew_[i] * sint_rt_[i] *
                      ym[2 * i + 1] / double(n_rt);
  }
  const auto g_st = ComplexDft(Y_st, -1);
  const auto g_rt = ComplexDft(Y_rt, -1);
  double max_re = 0.0, max_im = 0.0;
  for (const auto *g : {&g_st, &g_rt})
  {
    for (const Complex &v : *g)
    {
      max_re = std::max(max_re, std::abs(v.real()));
      max_im = std::max(max_im, std::abs(v.imag()));
    }
  }
  return max_re > 0.0 ? max_im / max_re : max_im;
}

Eigen::MatrixXd AirGapOperator::AssembleDense() const
{
  const std::size_t n_st = StatorSize(), n_rt = RotorSize(), n = n_st + n_rt;
  if (n > kMaxDenseSize)
  {
    Throw(ErrorCode::InvalidArgument, "dense air-gap assembly is limited to " +
                                          std::to_string(kMaxDenseSize) + " ring nodes");
  }
  Eigen::MatrixXd K(n, n);
  std::vector<double> u(n, 0.0), g(n);
  for (std::size_t j = 0; j < n; j++)
  {
    u[j] = 1.0;
    ApplyRing(std::span(u).first(n_st), std::span(u).subspan(n_st),
              std::span(g).first(n_st), std::span(g).subspan(n_st));
    for (std::size_t i = 0; i < n; i++)
    {
      K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[i];
    }
    u[j] = 0.0;
  }
  return K;
}

}  // namespace airgap
