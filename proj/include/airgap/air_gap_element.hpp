// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_AIR_GAP_ELEMENT_HPP
#define AIRGAP_AIR_GAP_ELEMENT_HPP

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <vector>
#include <Eigen/Core>
#include "airgap/harmonics.hpp"
#include "airgap/mesh.hpp"

namespace airgap
{

inline constexpr double kMu0 = 4e-7 * std::numbers::pi;

struct AirGapGeometry
{
  double r_st = 0.0;    // stator interface radius (m)
  double rho_rt = 0.0;  // rotor interface radius (m)
  double nu0 = 1.0 / kMu0;
  double ell_z = 1.0;   // axial length (m)

  double Xi() const { return r_st / rho_rt; }

  // rho_rt > 0, xi > 1, nu0 > 0, ell_z > 0.
  void Validate() const;
};

struct MotionState
{
  double alpha = 0.0;       // rotor rotation angle (rad)
  double gamma_skew = 0.0;  // rotor skew angle (rad)
  Complex eps{0.0};         // (d_ecc / rho_rt) exp(j gamma_ecc)

  static MotionState FromEccentricity(double alpha, double gamma_skew, double d_ecc,
                                      double gamma_ecc, double rho_rt);

  bool operator==(const MotionState &) const = default;
};

// First-order eccentricity model limits.
inline constexpr double kEpsLimit = 0.2;
inline constexpr double kEpsWarn = 0.05;

// Throws above kEpsLimit; returns true when |eps| exceeds kEpsWarn.
bool ValidateMotion(const MotionState &state);

template <typename T>
using Mat2 = std::array<std::array<T, 2>, 2>;
using Block2 = Mat2<double>;
using CBlock2 = Mat2<Complex>;

// [[xi^l, xi^-l], [1, 1]]: (a_l, b_l) -> (c_st, c_rt).
Block2 TBlock(int lambda, double xi);
// nu0 l [[-xi^l/r_st, xi^-l/r_st], [-1/rho_rt, 1/rho_rt]]: (a_l, b_l) -> (H_st, H_rt) with
// H = -nu0 dA/dr.
Block2 GBlock(int lambda, const AirGapGeometry &geometry);
// G_l T_l^{-1}: (c_st, c_rt) -> (H_st, H_rt).
Block2 DtnBlock(int lambda, const AirGapGeometry &geometry);
// 2 pi diag(-r_st, rho_rt) G_l T_l^{-1}, i.e. 2 pi nu0 l [[coth, -csch], [-csch, coth]] of
// l ln(xi). Maps boundary coefficients to n-scaled nodal surface-current coefficients;
// symmetric positive definite.
Block2 ScaledDtnBlock(int lambda, const AirGapGeometry &geometry);

// exp(j l alpha): rotor-frame coefficients to stator frame.
std::vector<Complex> RotationFactors(const HarmonicSet &set, double alpha);
// (2/(l gamma)) sin(l gamma / 2), series-evaluated near zero.
std::vector<double> SkewFactors(const HarmonicSet &set, double gamma_skew);

//
// Block-tridiagonal complex matrix over the positions of a harmonic set, with 2x2 blocks in
// (stator, rotor) sides. Off-diagonal blocks couple only orders differing by one.
//
class BlockTridiagonal
{
public:
  BlockTridiagonal() = default;
  explicit BlockTridiagonal(std::size_t size);

  std::size_t Size() const { return diag_.size(); }
  CBlock2 &Diag(std::size_t i) { return diag_[i]; }
  const CBlock2 &Diag(std::size_t i) const { return diag_[i]; }
  // Coupling of position i to i+1 (upper) and of i+1 to i (lower).
  CBlock2 &Upper(std::size_t i) { return upper_[i]; }
  const CBlock2 &Upper(std::size_t i) const { return upper_[i]; }
  CBlock2 &Lower(std::size_t i) { return lower_[i]; }
  const CBlock2 &Lower(std::size_t i) const { return lower_[i]; }

  // y = A x with x, y interleaved as [st_0, rt_0, st_1, rt_1, ...].
  void Mult(std::span<const Complex> x, std::span<Complex> y) const;
  // Block Thomas elimination, no pivoting.
  void Solve(std::span<const Complex> b, std::span<Complex> x) const;

  Eigen::MatrixXcd Dense() const;

private:
  std::vector<CBlock2> diag_, upper_, lower_;
};

// Eccentric T_eps and G_eps: stator rows as in T and G; rotor rows gain
//   potential: +(l+1) conj(eps) a_{l+1} - (l-1) eps b_{l-1}
//   field:     (nu0 l / rho_rt) [-(l+1) conj(eps) a_{l+1} - (l-1) eps b_{l-1}]
// Couplings to orders outside the set are dropped. Unknowns interleaved as [a_0, b_0, ...].
struct EccentricBlocks
{
  BlockTridiagonal T;
  BlockTridiagonal G;
};

EccentricBlocks MakeEccentricBlocks(const HarmonicSet &set, const AirGapGeometry &geometry,
                                    Complex eps);

// First-order expansion in eps of 2 pi diag(-r_st, rho_rt) G_eps T_eps^{-1}. Hermitian,
// block-tridiagonal; equal to the block-diagonal ScaledDtnBlock set at eps = 0.
BlockTridiagonal LinearizedEccentricDtn(const HarmonicSet &set, const AirGapGeometry &geometry,
                                        Complex eps);

//
// Spectral air-gap element coupling the stator ring (radius r_st) and the rotor ring
// (radius rho_rt). Applies
//
//   K_ag = Q^T F^{-1} S_int X^T R_a S_skew D_eps S_skew R_-a X S_int F Q
//
// matrix-free in O(n log n). The per-order blocks depend only on the geometry and the
// motion state and are rebuilt by SetMotion. Concurrent const calls are safe; SetMotion
// requires exclusive access.
//
class AirGapOperator
{
public:
  AirGapOperator(AirGapGeometry geometry, InterfaceRing stator_ring, InterfaceRing rotor_ring,
                 HarmonicSet harmonics, InterfaceCorrection correction = InterfaceCorrection::Off);

  // Default harmonic set: all orders common to both rings.
  static HarmonicSet AllCommonOrders(const InterfaceRing &stator, const InterfaceRing &rotor);

  void SetMotion(const MotionState &state);
  const MotionState &Motion() const { return motion_; }

  const AirGapGeometry &Geometry() const { return geometry_; }
  const HarmonicSet &Harmonics() const { return harmonics_; }
  const InterfaceRing &StatorRing() const { return stator_ring_; }
  const InterfaceRing &RotorRing() const { return rotor_ring_; }
  InterfaceCorrection Correction() const { return correction_; }
  std::size_t StatorSize() const { return stator_ring_.Size(); }
  std::size_t RotorSize() const { return rotor_ring_.Size(); }

  // Ring-level application: ring potentials to nodal surface currents.
  void ApplyRing(std::span<const double> u_st, std::span<const double> u_rt,
                 std::span<double> g_st, std::span<double> g_rt) const;

  // Subdomain-level application (restrict, ApplyRing, prolongate). Outputs are overwritten
  // and are zero away from the rings.
  void Apply(std::span<const double> u_st, std::span<const double> u_rt, std::span<double> g_st,
             std::span<double> g_rt) const;

  // Inverse of ApplyRing on the selected-harmonic subspace; other content maps to zero.
  // Optional shifts (one per harmonic-set position) add a circulant ring stiffness with
  // symbol shift_l on each side, i.e. invert K_ag + S instead of K_ag.
  void ApplyApproximateInverseRing(std::span<const double> g_st, std::span<const double> g_rt,
                                   std::span<double> u_st, std::span<double> u_rt,
                                   std::span<const double> shift_st = {},
                                   std::span<const double> shift_rt = {}) const;
  void ApplyApproximateInverse(std::span<const double> g_st, std::span<const double> g_rt,
                               std::span<double> u_st, std::span<double> u_rt) const;

  // Boundary coefficients over the harmonic set as seen across the gap: stator side after
  // S_int, rotor side after S_int, rotation (to the stator frame) and skew.
  void GapFrameCoefficients(std::span<const double> u_st, std::span<const double> u_rt,
                            std::vector<Complex> &c_st, std::vector<Complex> &c_rt) const;

  // Runs the same coupling through full (positive and negative order) complex transforms
  // and returns max |Im| / max |Re| of the synthesized surface currents before realization.
  double RealnessResidue(std::span<const double> u_st, std::span<const double> u_rt) const;

  // Ring-level dense matrix by unit-vector probing, ordering [stator ring; rotor ring].
  // Desk scale only: n_st + n_rt <= kMaxDenseSize.
  static constexpr std::size_t kMaxDenseSize = 512;
  Eigen::MatrixXd AssembleDense() const;

  // Current per-order coupling in the gap frame (without rotation/skew).
  const BlockTridiagonal &Coupling() const { return coupling_; }

private:
  void Rebuild();
  // Ring coefficients (S_int applied) of both sides over the harmonic set.
  void Gather(std::span<const double> u_st, std::span<const double> u_rt,
              std::vector<Complex> &x) const;
  void Scatter(std::vector<Complex> &y, std::span<double> g_st, std::span<double> g_rt,
               bool inverse) const;

  AirGapGeometry geometry_;
  InterfaceRing stator_ring_, rotor_ring_;
  HarmonicSet harmonics_;
  InterfaceCorrection correction_;
  MotionState motion_;

  RingTransform stator_fft_, rotor_fft_;
  std::vector<double> sint_st_, sint_rt_;  // per position in the harmonic set
  std::vector<Complex> rotation_;
  std::vector<double> skew_;
  BlockTridiagonal coupling_;
};

}  // namespace airgap

#endif  // AIRGAP_AIR_GAP_ELEMENT_HPP
