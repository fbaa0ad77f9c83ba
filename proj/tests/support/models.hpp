// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

// Small coupled models assembled directly from the library building blocks.

#ifndef AIRGAP_TESTS_MODELS_HPP
#define AIRGAP_TESTS_MODELS_HPP

#include <cmath>
#include <memory>
#include "airgap/fem.hpp"
#include "airgap/mesh.hpp"
#include "airgap/solver.hpp"

namespace model
{

using namespace airgap;

// Rotor annulus [r_in, rho], gap [rho, r_st], stator annulus [r_st, r_out], all nu0.
struct AnnulusGeometry
{
  double r_in = 0.02, rho = 0.04, r_st = 0.045, r_out = 0.06;
};

struct AnnulusModel
{
  std::shared_ptr<const Mesh> stator, rotor;
  std::unique_ptr<CoupledSystem> system;
};

// outer(theta) prescribes the stator outer boundary; the rotor inner boundary is held at
// inner_value.
template <typename F>
AnnulusModel BuildAnnulus(const AnnulusGeometry &g, int n, int layers_rt, int layers_st,
                          F outer, double inner_value = 0.0,
                          InterfaceCorrection corr = InterfaceCorrection::Off,
                          double nu = 1.0 / kMu0, double sigma = 0.0)
{
  AnnulusModel m;
  m.rotor = std::make_shared<const Mesh>(GenerateAnnulus(g.r_in, g.rho, n, layers_rt, 1));
  m.stator = std::make_shared<const Mesh>(GenerateAnnulus(g.r_st, g.r_out, n, layers_st, 2));
  MaterialTable mat{{1, {nu, sigma, 0.0}}, {2, {nu, sigma, 0.0}}};
  std::vector<DirichletValue> ds, dr;
  for (Index v : m.stator->Set("outer"))
  {
    const auto &p = m.stator->Nodes()[v];
    ds.push_back({v, outer(std::atan2(p.y, p.x))});
  }
  for (Index v : m.rotor->Set("inner"))
  {
    dr.push_back({v, inner_value});
  }
  auto ring_st = ExtractRing(*m.stator, "inner", g.r_st);
  auto ring_rt = ExtractRing(*m.rotor, "outer", g.rho);
  FeSubdomain st = MakeSubdomain(m.stator, mat, ring_st, DirichletSet(ds));
  FeSubdomain rt = MakeSubdomain(m.rotor, mat, ring_rt, DirichletSet(dr));
  AirGapOperator op({g.r_st, g.rho, 1.0 / kMu0, 1.0}, ring_st, ring_rt,
                    AirGapOperator::AllCommonOrders(ring_st, ring_rt), corr);
  m.system = std::make_unique<CoupledSystem>(std::move(st), std::move(rt), std::move(op));
  return m;
}

}  // namespace model

#endif  // AIRGAP_TESTS_MODELS_HPP
