// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include "airgap/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include "airgap/error.hpp"
#include "airgap/model.hpp"
#include "airgap/postproc.hpp"
#include "airgap/verify.hpp"
#include "json.hpp"

#ifndef AIRGAP_VERSION_STRING
#define AIRGAP_VERSION_STRING "0.0.0"
#endif

namespace airgap
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

fs::path OutputDir(const SimulationConfig &config, const RunOptions &options)
{
  fs::path dir = options.out_dir ? *options.out_dir : config.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
  {
    Throw(ErrorCode::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
  }
  return dir;
}

std::string SnapshotName(const std::string &prefix, int step)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%06d.vtk", step);
  return prefix + buf;
}

std::vector<double> Concat(std::span<const double> u)
{
  return {u.begin(), u.end()};
}

json SampleJson(const ForceTorqueSample &s)
{
  return {{"t", s.t},
          {"torque", s.torque},
          {"fx", s.fx},
          {"fy", s.fy},
          {"force_angle_deg", std::atan2(s.fy, s.fx) * 180.0 / std::numbers::pi},
          {"iterations", s.iterations}};
}

}  // namespace

std::string Version()
{
  return AIRGAP_VERSION_STRING;
}

std::string Provenance(const SimulationConfig &config)
{
  return "airgap " + Version() + " config " + HashString(config.hash);
}

std::string RunGenerate(const SimulationConfig &config, const RunOptions &options)
{
  const MeshPair meshes = BuildMeshes(config);
  const fs::path dir = OutputDir(config, options);
  json out = {{"command", "generate"}, {"provenance", Provenance(config)}};
  for (const auto &[name, mesh] : {std::pair{"stator", meshes.stator}, std::pair{"rotor", meshes.rotor}})
  {
    const fs::path path = dir / (std::string(name) + ".mesh");
    SaveMesh(*mesh, path);
    out[name] = {{"path", path.string()},
                 {"nodes", mesh->NumNodes()},
                 {"triangles", mesh->NumTriangles()},
                 {"checksum", HashString(mesh->Checksum())}};
  }
  return out.dump(2);
}

std::string RunSolve(const SimulationConfig &config, const RunOptions &options)
{
  ValidateConfig(config);
  Model model = BuildModel(config);
  CoupledSystem &system = *model.system;
  const fs::path dir = OutputDir(config, options);
  const std::string provenance = Provenance(config);
  const int every = options.snapshot_every ? *options.snapshot_every : config.snapshot_every;
  if (every < 0)
  {
    Throw(ErrorCode::Validation, "snapshot interval must be non-negative");
  }
  const fs::path csv = dir / config.csv_name;
  json out = {{"command", "solve"}, {"provenance", provenance}, {"csv", csv.string()}};
  std::vector<std::string> vtk;
  auto snapshot = [&](const std::string &file, double t, std::span<const double> u)
  {
    const Mesh merged = PhysicalMesh(*model.meshes.stator, *model.meshes.rotor, model.profile.At(t));
    const fs::path path = dir / file;
    WriteVtk(merged, Concat(u), path, provenance + " t " + std::to_string(t));
    vtk.push_back(path.string());
  };

  if (config.mode == SolveMode::Static)
  {
    const auto r = SolveStatic(system, config.solver);
    const auto s = EvaluateSample(system, r.u, 0.0, model.profile.At(0.0), r.stats.iterations);
    WriteCsv({s}, csv, provenance);
    snapshot(config.vtk_prefix + ".vtk", 0.0, r.u);
    out["mode"] = "static";
    out["result"] = SampleJson(s);
  }
  else
  {
    TransientOptions t;
    t.dt = config.dt;
    t.t_end = config.t_end;
    t.theta = config.theta;
    t.initial = config.initial;
    t.solver = config.solver;
    if (every > 0)
    {
      t.on_step = [&](int step, double time, std::span<const double> u)
      {
        if (step % every == 0)
        {
          snapshot(SnapshotName(config.vtk_prefix, step), time, u);
        }
      };
    }
    const auto r = SolveTransient(system, model.profile, t);
    WriteCsv(r.samples, csv, provenance);
    auto constant = [](const std::vector<std::uint64_t> &v)
    { return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end(); };
    int max_it = 0;
    for (const auto &s : r.samples)
    {
      max_it = std::max(max_it, s.iterations);
    }
    out["mode"] = "transient";
    out["steps"] = r.samples.size();
    out["max_iterations"] = max_it;
    out["meshes_unchanged"] = constant(r.stator_checksums) && constant(r.rotor_checksums);
    out["final"] = SampleJson(r.samples.back());
  }
  out["vtk"] = vtk;
  return out.dump(2);
}

VerifyOutcome RunVerify(const SimulationConfig &config)
{
  const VerifyReport report = RunVerification(config);
  json checks = json::array();
  for (const auto &c : report.checks)
  {
    json measured = json::object();
    for (const auto &[k, v] : c.measured)
    {
      measured[k] = v;
    }
    json entry = {{"name", c.name}, {"passed", c.passed}, {"seconds", c.seconds}, {"measured", measured}};
    if (!c.detail.empty())
    {
      entry["detail"] = c.detail;
    }
    checks.push_back(std::move(entry));
  }
  const json out = {{"command", "verify"},
                    {"provenance", Provenance(config)},
                    {"passed", report.Passed()},
                    {"checks", checks}};
  return {out.dump(2), report.Passed()};
}

}  // namespace airgap
