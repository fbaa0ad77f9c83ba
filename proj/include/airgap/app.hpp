// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_APP_HPP
#define AIRGAP_APP_HPP

#include <filesystem>
#include <optional>
#include <string>
#include "airgap/config.hpp"

namespace airgap
{

std::string Version();

// Command-line overrides of the configured output settings.
struct RunOptions
{
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> snapshot_every;
};

// Provenance line written into every output: "airgap <version> config <hash>".
std::string Provenance(const SimulationConfig &config);

// Writes stator.mesh and rotor.mesh into the output directory. Returns a JSON summary.
std::string RunGenerate(const SimulationConfig &config, const RunOptions &options = {});

// Static: one CSV row and one VTK file of the merged model at its physical position.
// Transient: one CSV row per step (t = 0 included) and VTK snapshots every k steps when
// k > 0. Returns a JSON summary.
std::string RunSolve(const SimulationConfig &config, const RunOptions &options = {});

struct VerifyOutcome
{
  std::string json;
  bool passed = false;
};

VerifyOutcome RunVerify(const SimulationConfig &config);

}  // namespace airgap

#endif  // AIRGAP_APP_HPP
