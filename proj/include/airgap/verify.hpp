// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_VERIFY_HPP
#define AIRGAP_VERIFY_HPP

#include <string>
#include <utility>
#include <vector>
#include "airgap/config.hpp"

namespace airgap
{

struct CheckResult
{
  std::string name;
  bool passed = false;
  // Measured values, in order; entries named "limit*" hold the pass thresholds.
  std::vector<std::pair<std::string, double>> measured;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport
{
  std::vector<CheckResult> checks;
  bool Passed() const;
};

//
// Oracle suite: dense equivalence, symmetry and semidefiniteness, realness, annulus
// convergence, eccentricity order and edge truncation, torque and pull agreement, skew limits,
// rotation invariance, preconditioning, apply-time scaling, and a solve of the configured
// model. The air-gap geometry and interface correction of the configuration parametrize the
// operator checks; the configured model itself is assembled and solved once.
//
VerifyReport RunVerification(const SimulationConfig &config);

}  // namespace airgap

#endif  // AIRGAP_VERIFY_HPP
