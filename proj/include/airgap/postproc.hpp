// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_POSTPROC_HPP
#define AIRGAP_POSTPROC_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>
#include "airgap/air_gap_element.hpp"

namespace airgap
{

struct ForceTorqueSample
{
  double t = 0.0;          // s
  double alpha = 0.0;      // rad
  double d_ecc = 0.0;      // m
  double gamma_ecc = 0.0;  // rad
  double torque = 0.0;     // N m
  double fx = 0.0;         // N
  double fy = 0.0;         // N
  int iterations = 0;
};

//
// Gap field coefficients in the stator frame:
//
//   A(r, theta) = sum_l 2 Re{(a_l x^l + b_l x^-l) exp(-j l theta)},  x = r / rho_rt.
//
struct GapCoefficients
{
  HarmonicSet set;
  std::vector<Complex> a, b;
};

// Inverts T (or T_eps when eps != 0) for gap-frame boundary coefficients over the set.
GapCoefficients SolveGapCoefficients(std::span<const Complex> c_st, std::span<const Complex> c_rt,
                                     const HarmonicSet &set, const AirGapGeometry &geometry,
                                     Complex eps = 0.0);

// Gap coefficients of ring potentials at the operator's current motion state.
GapCoefficients ComputeGapCoefficients(const AirGapOperator &op, std::span<const double> u_st,
                                       std::span<const double> u_rt);

struct Flux
{
  double br = 0.0;
  double btheta = 0.0;
};

// Domain error for r outside [rho_rt, r_st].
double ReconstructPotential(const GapCoefficients &c, const AirGapGeometry &g, double r,
                            double theta);
// B_r = (1/r) dA/dtheta, B_theta = -dA/dr.
Flux ReconstructFlux(const GapCoefficients &c, const AirGapGeometry &g, double r, double theta);

// -8 pi nu0 l_z sum l^2 Im{conj(a_l) b_l}, counterclockwise positive.
double TorqueHarmonic(const GapCoefficients &c, const AirGapGeometry &g);
// nu0 l_z r_c^2 integral of B_r B_theta, trapezoidal. Defaults: r_c = sqrt(r_st rho_rt),
// n_quad = 8 max(set).
double TorqueQuadrature(const GapCoefficients &c, const AirGapGeometry &g, double r_c = 0.0,
                        int n_quad = 0);

// F_x + j F_y from the adjacent-order series.
Complex UmpForce(const GapCoefficients &c, const AirGapGeometry &g);
// l_z integral of (nu0/2) (B_r + j B_theta)^2 exp(j theta) r dtheta, trapezoidal.
Complex UmpQuadrature(const GapCoefficients &c, const AirGapGeometry &g, double r = 0.0,
                      int n_quad = 0);

inline constexpr const char *kCsvHeader = "t,alpha,d_ecc,gamma_ecc,torque,fx,fy,iterations";

// Optional provenance is written as a leading '#' comment line.
void WriteCsv(const std::vector<ForceTorqueSample> &samples, const std::filesystem::path &path,
              const std::string &provenance = "");
std::vector<ForceTorqueSample> ReadCsv(const std::filesystem::path &path);

void WriteVtk(const Mesh &mesh, std::span<const double> az, const std::filesystem::path &path,
              const std::string &title = "airgap");

}  // namespace airgap

#endif  // AIRGAP_POSTPROC_HPP
