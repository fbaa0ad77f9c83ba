// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

// Direct evaluations of the defining formulas for the verify suite. Nothing here calls into
// the transform-based operator path.

#ifndef AIRGAP_SRC_REFERENCE_HPP
#define AIRGAP_SRC_REFERENCE_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>
#include <Eigen/Dense>
#include "airgap/air_gap_element.hpp"
#include "airgap/mesh.hpp"

namespace airgap::reference
{

using airgap::Complex;
constexpr double kPi = std::numbers::pi;

// c_l = (1/n) sum_p f_p exp(j l theta_p) for l = 1..l_max, O(n^2).
inline std::vector<Complex> DirectDft(const std::vector<double> &f, double theta0)
{
  const std::size_t n = f.size();
  const int lmax = static_cast<int>((n - 1) / 2);
  std::vector<Complex> c(static_cast<std::size_t>(lmax));
  for (int l = 1; l <= lmax; l++)
  {
    Complex s = 0.0;
    for (std::size_t p = 0; p < n; p++)
    {
      const double th = theta0 + 2.0 * kPi * double(p) / double(n);
      s += f[p] * std::polar(1.0, l * th);
    }
    c[static_cast<std::size_t>(l - 1)] = s / double(n);
  }
  return c;
}

inline std::vector<double> RandomVector(std::size_t n, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto &x : v)
  {
    x = d(rng);
  }
  return v;
}

inline std::vector<Complex> RandomComplex(std::size_t n, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Complex> v(n);
  for (auto &x : v)
  {
    x = {d(rng), d(rng)};
  }
  return v;
}

inline double sinc(double x)
{
  return x == 0.0 ? 1.0 : std::sin(x) / x;
}

// Dense T_eps and G_eps over orders 1..L in unknown ordering [a_1, b_1, a_2, b_2, ...] and
// row ordering [st_1, rt_1, ...]; eps = 0 gives the concentric T and G.
struct DenseBlocks
{
  Eigen::MatrixXcd T0, G0, T1, G1;
};

inline DenseBlocks EccentricDense(const std::vector<int> &orders, const airgap::AirGapGeometry &g,
                                  Complex eps)
{
  const auto L = static_cast<Eigen::Index>(orders.size());
  DenseBlocks d{Eigen::MatrixXcd::Zero(2 * L, 2 * L), Eigen::MatrixXcd::Zero(2 * L, 2 * L),
                Eigen::MatrixXcd::Zero(2 * L, 2 * L), Eigen::MatrixXcd::Zero(2 * L, 2 * L)};
  const double xi = g.r_st / g.rho_rt;
  auto pos = [&](int l) -> Eigen::Index
  {
    for (Eigen::Index i = 0; i < L; i++)
    {
      if (orders[static_cast<std::size_t>(i)] == l)
      {
        return i;
      }
    }
    return -1;
  };
  for (Eigen::Index i = 0; i < L; i++)
  {
    const int l = orders[static_cast<std::size_t>(i)];
    const double s = g.nu0 * l;
    d.T0(2 * i, 2 * i) = std::pow(xi, l);
    d.T0(2 * i, 2 * i + 1) = std::pow(xi, -l);
    d.T0(2 * i + 1, 2 * i) = 1.0;
    d.T0(2 * i + 1, 2 * i + 1) = 1.0;
    d.G0(2 * i, 2 * i) = -s * std::pow(xi, l) / g.r_st;
    d.G0(2 * i, 2 * i + 1) = s * std::pow(xi, -l) / g.r_st;
    d.G0(2 * i + 1, 2 * i) = -s / g.rho_rt;
    d.G0(2 * i + 1, 2 * i + 1) = s / g.rho_rt;
    // Rotor potential: +(l+1) conj(eps) a_{l+1} - (l-1) eps b_{l-1}.
    // Rotor field: (nu0 l/rho) [-(l+1) conj(eps) a_{l+1} - (l-1) eps b_{l-1}].
    if (const auto j = pos(l + 1); j >= 0)
    {
      d.T1(2 * i + 1, 2 * j) = (l + 1.0) * std::conj(eps);
      d.G1(2 * i + 1, 2 * j) = -s / g.rho_rt * (l + 1.0) * std::conj(eps);
    }
    if (const auto j = pos(l - 1); j >= 0)
    {
      d.T1(2 * i + 1, 2 * j + 1) = -(l - 1.0) * eps;
      d.G1(2 * i + 1, 2 * j + 1) = -s / g.rho_rt * (l - 1.0) * eps;
    }
  }
  return d;
}

// First-order scaled DtN 2 pi diag(-r_st, rho) [G0 T0^-1 + (G1 - G0 T0^-1 T1) T0^-1].
inline Eigen::MatrixXcd LinearizedDtnDense(const std::vector<int> &orders,
                                           const airgap::AirGapGeometry &g, Complex eps)
{
  const auto d = EccentricDense(orders, g, eps);
  const Eigen::MatrixXcd T0inv = d.T0.inverse();
  const Eigen::MatrixXcd D0 = d.G0 * T0inv;
  Eigen::MatrixXcd B = D0 + (d.G1 - D0 * d.T1) * T0inv;
  for (Eigen::Index i = 0; i < B.rows(); i++)
  {
    B.row(i) *= (i % 2 == 0) ? -2.0 * kPi * g.r_st : 2.0 * kPi * g.rho_rt;
  }
  return B;
}

struct DenseOperatorSpec
{
  airgap::AirGapGeometry geometry;
  std::size_t n_st = 0, n_rt = 0;
  double theta0_st = 0.0, theta0_rt = 0.0;
  std::vector<int> orders;
  bool sint = false;
  double alpha = 0.0, gamma_skew = 0.0;
  Complex eps = 0.0;
};

// K_ag = 2 Re{V B W}: W analyzes (with S_int, rotation and skew on the rotor side), B is the
// scaled coupling, V synthesizes nodal surface currents. Ordering [stator; rotor].
inline Eigen::MatrixXd DenseKag(const DenseOperatorSpec &s)
{
  const auto L = static_cast<Eigen::Index>(s.orders.size());
  const auto ns = static_cast<Eigen::Index>(s.n_st), nr = static_cast<Eigen::Index>(s.n_rt);
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(2 * L, ns + nr);
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(ns + nr, 2 * L);
  for (Eigen::Index i = 0; i < L; i++)
  {
    const int l = s.orders[static_cast<std::size_t>(i)];
    const double sst = s.sint ? std::pow(sinc(l * kPi / double(ns)), 2) : 1.0;
    const double srt = s.sint ? std::pow(sinc(l * kPi / double(nr)), 2) : 1.0;
    const double skew = sinc(0.5 * l * s.gamma_skew);
    const Complex rot = std::polar(1.0, l * s.alpha);
    for (Eigen::Index p = 0; p < ns; p++)
    {
      const double th = s.theta0_st + 2.0 * kPi * double(p) / double(ns);
      W(2 * i, p) = sst * std::polar(1.0, l * th) / double(ns);
      V(p, 2 * i) = sst * std::polar(1.0, -l * th) / double(ns);
    }
    for (Eigen::Index p = 0; p < nr; p++)
    {
      const double th = s.theta0_rt + 2.0 * kPi * double(p) / double(nr);
      W(2 * i + 1, ns + p) = rot * skew * srt * std::polar(1.0, l * th) / double(nr);
      V(ns + p, 2 * i + 1) = std::conj(rot) * skew * srt * std::polar(1.0, -l * th) / double(nr);
    }
  }
  const Eigen::MatrixXcd B = LinearizedDtnDense(s.orders, s.geometry, s.eps);
  return 2.0 * (V * B * W).real();
}

// Exact gap potential about the stator center,
//   A(z) = sum_l 2 Re{a_l conj(z)^l / rho^l + b_l rho^l / z^l},
// sampled on the rotor circle displaced by delta = eps rho, at rotor-frame angles psi_p.
// Returns the half-spectrum of the samples in psi and of H = -nu0 dA/d(rho').
struct ShiftedCircleData
{
  std::vector<Complex> c_rt, h_rt;
};

inline ShiftedCircleData ShiftedCircle(const std::vector<int> &orders,
                                       const std::vector<Complex> &a,
                                       const std::vector<Complex> &b, double rho, double nu0,
                                       Complex eps, std::size_t n_samples)
{
  const Complex delta = eps * rho;
  std::vector<double> A(n_samples), H(n_samples);
  for (std::size_t p = 0; p < n_samples; p++)
  {
    const double psi = 2.0 * kPi * double(p) / double(n_samples);
    const Complex e = std::polar(1.0, psi);
    const Complex z = delta + rho * e;
    double v = 0.0, dv = 0.0;
    for (std::size_t i = 0; i < orders.size(); i++)
    {
      const int l = orders[i];
      const Complex zc = std::conj(z) / rho, zr = z / rho;
      v += 2.0 * std::real(a[i] * std::pow(zc, l) + b[i] * std::pow(zr, -l));
      // d/d(rho') along e: conj(z) gains conj(e), z gains e.
      dv += 2.0 * std::real(a[i] * double(l) * std::pow(zc, l - 1) * std::conj(e) / rho -
                            b[i] * double(l) * std::pow(zr, -l - 1) * e / rho);
    }
    A[p] = v;
    H[p] = -nu0 * dv;
  }
  return {DirectDft(A, 0.0), DirectDft(H, 0.0)};
}

// Closed-form Laplace solution on R_in < r < R_out with A(R_in) = 0, A(R_out) = cos(p theta).
inline double AnnulusSolution(double r, double theta, int p, double r_in, double r_out)
{
  const double num = std::pow(r, p) - std::pow(r_in, 2 * p) * std::pow(r, -p);
  const double den = std::pow(r_out, p) - std::pow(r_in, 2 * p) * std::pow(r_out, -p);
  return num / den * std::cos(p * theta);
}

// Gap field A = sum 2 Re{(a x^l + b x^-l) exp(-j l theta)}, x = r/rho, with
// B_r = (1/r) dA/dtheta and B_theta = -dA/dr, evaluated term by term.
struct GapFieldValue
{
  double A = 0.0, br = 0.0, bt = 0.0;
};

inline GapFieldValue GapField(const std::vector<int> &orders, const std::vector<Complex> &a,
                              const std::vector<Complex> &b, double rho, double r, double theta)
{
  GapFieldValue v;
  const double x = r / rho;
  for (std::size_t i = 0; i < orders.size(); i++)
  {
    const int l = orders[i];
    const Complex e = std::polar(1.0, -l * theta);
    const Complex up = a[i] * std::pow(x, l), dn = b[i] * std::pow(x, -l);
    v.A += 2.0 * std::real((up + dn) * e);
    v.br += 2.0 * std::real(Complex(0.0, -l) * (up + dn) * e) / r;
    v.bt -= 2.0 * std::real(double(l) / r * (up - dn) * e);
  }
  return v;
}

// Maxwell-stress torque nu0 l_z r^2 int B_r B_theta dtheta and pull
// l_z int (nu0/2) (B_r + j B_theta)^2 exp(j theta) r dtheta on the circle of radius r.
struct StressResult
{
  double torque = 0.0;
  Complex force = 0.0;
};

inline StressResult MaxwellStress(const std::vector<int> &orders, const std::vector<Complex> &a,
                                  const std::vector<Complex> &b, double rho, double nu0,
                                  double ell_z, double r, int n_quad)
{
  StressResult s;
  const double h = 2.0 * kPi / n_quad;
  for (int q = 0; q < n_quad; q++)
  {
    const double th = q * h;
    const auto f = GapField(orders, a, b, rho, r, th);
    s.torque += nu0 * ell_z * r * r * f.br * f.bt * h;
    const Complex B(f.br, f.bt);
    s.force += ell_z * 0.5 * nu0 * B * B * std::polar(1.0, th) * r * h;
  }
  return s;
}

// L2 norm of (u_h - exact) over a P1 mesh with a 7-point degree-5 triangle rule.
template <typename F>
double L2Error(const airgap::Mesh &mesh, const std::vector<double> &u, F exact)
{
  static const double w[7] = {0.225,
                              0.132394152788506,
                              0.132394152788506,
                              0.132394152788506,
                              0.125939180544827,
                              0.125939180544827,
                              0.125939180544827};
  static const double l1[7] = {1.0 / 3.0, 0.059715871789770, 0.470142064105115,
                               0.470142064105115, 0.797426985353087, 0.101286507323456,
                               0.101286507323456};
  static const double l2[7] = {1.0 / 3.0, 0.470142064105115, 0.059715871789770,
                               0.470142064105115, 0.101286507323456, 0.797426985353087,
                               0.101286507323456};
  double s = 0.0;
  const auto &X = mesh.Nodes();
  for (std::size_t t = 0; t < mesh.NumTriangles(); t++)
  {
    const auto &tri = mesh.Triangles()[t];
    const double area = mesh.TriangleArea(t);
    for (int q = 0; q < 7; q++)
    {
      const double b0 = l1[q], b1 = l2[q], b2 = 1.0 - b0 - b1;
      const double x = b0 * X[tri[0]].x + b1 * X[tri[1]].x + b2 * X[tri[2]].x;
      const double y = b0 * X[tri[0]].y + b1 * X[tri[1]].y + b2 * X[tri[2]].y;
      const double uh = b0 * u[tri[0]] + b1 * u[tri[1]] + b2 * u[tri[2]];
      const double d = uh - exact(x, y);
      s += w[q] * area * d * d;
    }
  }
  return std::sqrt(s);
}

}  // namespace airgap::reference

#endif  // AIRGAP_SRC_REFERENCE_HPP
