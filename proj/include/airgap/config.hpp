// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_CONFIG_HPP
#define AIRGAP_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>
#include "airgap/air_gap_element.hpp"
#include "airgap/fem.hpp"
#include "airgap/mesh.hpp"
#include "airgap/solver.hpp"

namespace airgap
{

// Prescribed boundary value value + amplitude cos(order theta - phase) on a node set.
struct DirichletSpec
{
  std::string set;
  double value = 0.0;
  double amplitude = 0.0;
  int order = 0;
  double phase = 0.0;
};

struct SubdomainConfig
{
  std::filesystem::path mesh;          // used when no generator is given
  std::optional<MachineSpec> generator;
  std::string ring_set;
  std::vector<DirichletSpec> dirichlet;
};

enum class SolveMode
{
  Static,
  Transient
};

struct SimulationConfig
{
  SubdomainConfig stator, rotor;
  MaterialTable materials;
  AirGapGeometry airgap;
  std::vector<int> harmonics;  // empty selects all common orders
  InterfaceCorrection sint = InterfaceCorrection::Exact;

  double gamma_skew = 0.0;
  std::vector<MotionSample> motion{MotionSample{}};
  SlewLimits slew;

  SolveMode mode = SolveMode::Static;
  SolverOptions solver;
  double dt = 0.0;
  double t_end = 0.0;
  double theta = 1.0;
  InitialCondition initial = InitialCondition::Static;

  std::filesystem::path output_dir = "out";
  std::string csv_name = "forces.csv";
  std::string vtk_prefix = "field";
  int snapshot_every = 0;

  // Canonical serialization of the parsed document and its FNV-1a hash.
  std::string canonical;
  std::uint64_t hash = 0;
};

// Parses a JSON document. Relative mesh paths resolve against base_dir. Key, type and range
// problems throw a configuration error naming the dotted key; validation then checks the
// cross-field invariants (gap ordering, Dirichlet presence, eccentricity bounds).
SimulationConfig ParseConfig(const std::string &text, const std::filesystem::path &base_dir = {});
SimulationConfig LoadConfig(const std::filesystem::path &path);

void ValidateConfig(const SimulationConfig &config);

// Desk-scale eight-pole magnetic bearing with a prescribed translation through the center.
std::string DefaultConfigText();

std::string HashString(std::uint64_t hash);

}  // namespace airgap

#endif  // AIRGAP_CONFIG_HPP
