// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include "airgap/model.hpp"

#include <cmath>
#include <string>
#include "airgap/error.hpp"

namespace airgap
{

namespace
{

std::shared_ptr<const Mesh> MakeMesh(const SubdomainConfig &s, const char *key)
{
  try
  {
    if (s.generator)
    {
      return std::make_shared<const Mesh>(GenerateMachine(*s.generator));
    }
    return std::make_shared<const Mesh>(LoadMesh(s.mesh));
  }
  catch (const Error &e)
  {
    throw Error(e.code(), std::string("config key '") + key + (s.generator ? ".generator" : ".mesh") +
                            "': " + e.what());
  }
}

DirichletSet MakeDirichlet(const Mesh &mesh, const std::vector<DirichletSpec> &specs,
                           const char *key)
{
  std::vector<DirichletValue> values;
  for (std::size_t i = 0; i < specs.size(); i++)
  {
    const auto &d = specs[i];
    if (!mesh.HasSet(d.set))
    {
      Throw(ErrorCode::Configuration, std::string("config key '") + key + ".dirichlet[" +
                                        std::to_string(i) + "].set': mesh has no node set '" +
                                        d.set + "'");
    }
    for (Index v : mesh.Set(d.set))
    {
      const auto &p = mesh.Nodes()[static_cast<std::size_t>(v)];
      const double th = std::atan2(p.y, p.x);
      values.push_back({v, d.value + d.amplitude * std::cos(d.order * th - d.phase)});
    }
  }
  return DirichletSet(std::move(values));
}

InterfaceRing MakeRing(const Mesh &mesh, const std::string &set, double radius, const char *key)
{
  try
  {
    return ExtractRing(mesh, set, radius);
  }
  catch (const Error &e)
  {
    throw Error(e.code(), std::string("config key '") + key + ".ring_set': " + e.what());
  }
}

}  // namespace

MeshPair BuildMeshes(const SimulationConfig &config)
{
  return {MakeMesh(config.stator, "stator"), MakeMesh(config.rotor, "rotor")};
}

Model BuildModel(const SimulationConfig &config)
{
  Model m;
  m.meshes = BuildMeshes(config);
  const auto &g = config.airgap;
  InterfaceRing ring_st = MakeRing(*m.meshes.stator, config.stator.ring_set, g.r_st, "stator");
  InterfaceRing ring_rt = MakeRing(*m.meshes.rotor, config.rotor.ring_set, g.rho_rt, "rotor");
  FeSubdomain st = MakeSubdomain(m.meshes.stator, config.materials, ring_st,
                                 MakeDirichlet(*m.meshes.stator, config.stator.dirichlet, "stator"));
  FeSubdomain rt = MakeSubdomain(m.meshes.rotor, config.materials, ring_rt,
                                 MakeDirichlet(*m.meshes.rotor, config.rotor.dirichlet, "rotor"));
  HarmonicSet set;
  try
  {
    set = config.harmonics.empty() ? AirGapOperator::AllCommonOrders(ring_st, ring_rt)
                                   : HarmonicSet(config.harmonics);
    set.Validate(std::min(LambdaMax(ring_st.Size()), LambdaMax(ring_rt.Size())));
  }
  catch (const Error &e)
  {
    throw Error(e.code(), std::string("config key 'airgap.harmonics': ") + e.what());
  }
  m.profile = MotionProfile(config.motion, config.gamma_skew, config.slew);
  AirGapOperator op(g, ring_st, ring_rt, set, config.sint);
  op.SetMotion(m.profile.StateAt(0.0, g.rho_rt));
  m.system = std::make_unique<CoupledSystem>(std::move(st), std::move(rt), std::move(op));
  return m;
}

Mesh PhysicalMesh(const Mesh &stator, const Mesh &rotor, const MotionSample &motion)
{
  std::vector<Point2> nodes = stator.Nodes();
  std::vector<std::array<Index, 3>> tris = stator.Triangles();
  std::vector<int> tags = stator.RegionTags();
  const auto offset = static_cast<Index>(nodes.size());
  const double c = std::cos(motion.alpha), s = std::sin(motion.alpha);
  const double dx = motion.d_ecc * std::cos(motion.gamma_ecc);
  const double dy = motion.d_ecc * std::sin(motion.gamma_ecc);
  for (const auto &p : rotor.Nodes())
  {
    nodes.push_back({c * p.x - s * p.y + dx, s * p.x + c * p.y + dy});
  }
  for (const auto &t : rotor.Triangles())
  {
    tris.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
  }
  tags.insert(tags.end(), rotor.RegionTags().begin(), rotor.RegionTags().end());
  Mesh::NodeSets sets;
  for (const auto &[name, idx] : stator.Sets())
  {
    sets["stator." + name] = idx;
  }
  for (const auto &[name, idx] : rotor.Sets())
  {
    auto &v = sets["rotor." + name];
    for (Index i : idx)
    {
      v.push_back(i + offset);
    }
  }
  return Mesh(std::move(nodes), std::move(tris), std::move(tags), std::move(sets));
}

}  // namespace airgap
