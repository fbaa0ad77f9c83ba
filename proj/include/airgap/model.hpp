// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_MODEL_HPP
#define AIRGAP_MODEL_HPP

#include <memory>
#include "airgap/config.hpp"
#include "airgap/solver.hpp"

namespace airgap
{

struct MeshPair
{
  std::shared_ptr<const Mesh> stator, rotor;
};

// Generated or loaded meshes of both subdomains.
MeshPair BuildMeshes(const SimulationConfig &config);

struct Model
{
  MeshPair meshes;
  std::unique_ptr<CoupledSystem> system;
  MotionProfile profile;
};

// Assembles both subdomains, extracts the rings and builds the air-gap operator at the
// initial motion state. Throws configuration errors for rings and harmonic sets that do not
// fit the meshes.
Model BuildModel(const SimulationConfig &config);

// Stator and rotor merged into one mesh with the rotor placed at its physical position
// (rotation alpha about its own center, then displaced by d_ecc exp(j gamma_ecc)).
Mesh PhysicalMesh(const Mesh &stator, const Mesh &rotor, const MotionSample &motion);

}  // namespace airgap

#endif  // AIRGAP_MODEL_HPP
