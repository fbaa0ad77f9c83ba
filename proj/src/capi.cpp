// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include "airgap/airgap.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include "airgap/air_gap_element.hpp"
#include "airgap/app.hpp"
#include "airgap/config.hpp"
#include "airgap/error.hpp"
#include "airgap/mesh.hpp"

struct ag_config
{
  airgap::SimulationConfig value;
};

struct ag_mesh
{
  airgap::Mesh value;
};

struct ag_operator
{
  airgap::AirGapOperator value;
};

static_assert(static_cast<int>(airgap::ErrorCode::InvalidArgument) == AG_ERR_INVALID_ARGUMENT);
static_assert(static_cast<int>(airgap::ErrorCode::Solver) == AG_ERR_SOLVER);
static_assert(static_cast<int>(airgap::ErrorCode::Internal) == AG_ERR_INTERNAL);

namespace
{

thread_local std::string last_error;

ag_status Fail(ag_status s, const char *what)
{
  last_error = what;
  return s;
}

template <typename F>
ag_status Guard(F &&f)
{
  try
  {
    f();
    return AG_OK;
  }
  catch (const airgap::Error &e)
  {
    return Fail(static_cast<ag_status>(e.code()), e.what());
  }
  catch (const std::bad_alloc &)
  {
    return Fail(AG_ERR_INTERNAL, "out of memory");
  }
  catch (const std::exception &e)
  {
    return Fail(AG_ERR_INTERNAL, e.what());
  }
  catch (...)
  {
    return Fail(AG_ERR_INTERNAL, "unknown error");
  }
}

void Require(bool ok, const char *what)
{
  if (!ok)
  {
    airgap::Throw(airgap::ErrorCode::InvalidArgument, what);
  }
}

char *Duplicate(const std::string &s)
{
  char *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (!p)
  {
    throw std::bad_alloc();
  }
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

airgap::RunOptions ToOptions(const ag_run_options *o)
{
  airgap::RunOptions r;
  if (o && o->out_dir)
  {
    r.out_dir = o->out_dir;
  }
  if (o && o->snapshot_every >= 0)
  {
    r.snapshot_every = o->snapshot_every;
  }
  return r;
}

airgap::InterfaceRing Ring(std::size_t n, double radius, double theta0)
{
  airgap::InterfaceRing r;
  r.radius = radius;
  r.theta0 = theta0;
  for (std::size_t p = 0; p < n; p++)
  {
    r.node_indices.push_back(static_cast<airgap::Index>(p));
  }
  return r;
}

}  // namespace

extern "C" {

const char *ag_version(void)
{
  static const std::string v = airgap::Version();
  return v.c_str();
}

const char *ag_status_string(ag_status status)
{
  switch (status)
  {
  case AG_OK: return "ok";
  case AG_ERR_INVALID_ARGUMENT: return "invalid argument";
  case AG_ERR_INVALID_GEOMETRY: return "invalid geometry";
  case AG_ERR_INVALID_SPEC: return "invalid spec";
  case AG_ERR_PARSE: return "parse error";
  case AG_ERR_VALIDATION: return "validation error";
  case AG_ERR_CONFIGURATION: return "configuration error";
  case AG_ERR_UNSUPPORTED_GRID: return "unsupported grid";
  case AG_ERR_DOMAIN: return "domain error";
  case AG_ERR_SOLVER: return "solver failure";
  case AG_ERR_IO: return "i/o error";
  case AG_ERR_VERIFICATION: return "verification failure";
  case AG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char *ag_last_error(void)
{
  return last_error.c_str();
}

void ag_string_free(char *s)
{
  std::free(s);
}

ag_status ag_config_load(const char *path, ag_config **out)
{
  return Guard(
    [&]
    {
      Require(path && out, "null argument");
      *out = new ag_config{airgap::LoadConfig(path)};
    });
}

ag_status ag_config_parse(const char *text, const char *base_dir, ag_config **out)
{
  return Guard(
    [&]
    {
      Require(text && out, "null argument");
      *out = new ag_config{airgap::ParseConfig(text, base_dir ? base_dir : "")};
    });
}

ag_status ag_config_default(ag_config **out)
{
  return Guard(
    [&]
    {
      Require(out != nullptr, "null argument");
      *out = new ag_config{airgap::ParseConfig(airgap::DefaultConfigText())};
    });
}

ag_status ag_config_default_text(char **out)
{
  return Guard(
    [&]
    {
      Require(out != nullptr, "null argument");
      *out = Duplicate(airgap::DefaultConfigText());
    });
}

ag_status ag_config_hash(const ag_config *config, uint64_t *out)
{
  return Guard(
    [&]
    {
      Require(config && out, "null argument");
      *out = config->value.hash;
    });
}

void ag_config_free(ag_config *config)
{
  delete config;
}

ag_status ag_run_generate(const ag_config *config, const ag_run_options *options,
                          char **summary_json)
{
  return Guard(
    [&]
    {
      Require(config && summary_json, "null argument");
      *summary_json = Duplicate(airgap::RunGenerate(config->value, ToOptions(options)));
    });
}

ag_status ag_run_solve(const ag_config *config, const ag_run_options *options, char **summary_json)
{
  return Guard(
    [&]
    {
      Require(config && summary_json, "null argument");
      *summary_json = Duplicate(airgap::RunSolve(config->value, ToOptions(options)));
    });
}

ag_status ag_run_verify(const ag_config *config, char **report_json)
{
  bool passed = false;
  const ag_status s = Guard(
    [&]
    {
      Require(config && report_json, "null argument");
      const auto r = airgap::RunVerify(config->value);
      *report_json = Duplicate(r.json);
      passed = r.passed;
    });
  if (s == AG_OK && !passed)
  {
    return Fail(AG_ERR_VERIFICATION, "one or more verification checks failed");
  }
  return s;
}

ag_status ag_mesh_generate_annulus(double r_inner, double r_outer, int n_boundary, int n_layers,
                                   int region_tag, ag_mesh **out)
{
  return Guard(
    [&]
    {
      Require(out != nullptr, "null argument");
      *out = new ag_mesh{airgap::GenerateAnnulus(r_inner, r_outer, n_boundary, n_layers, region_tag)};
    });
}

ag_status ag_mesh_load(const char *path, ag_mesh **out)
{
  return Guard(
    [&]
    {
      Require(path && out, "null argument");
      *out = new ag_mesh{airgap::LoadMesh(path)};
    });
}

ag_status ag_mesh_save(const ag_mesh *mesh, const char *path)
{
  return Guard(
    [&]
    {
      Require(mesh && path, "null argument");
      airgap::SaveMesh(mesh->value, path);
    });
}

size_t ag_mesh_num_nodes(const ag_mesh *mesh)
{
  return mesh ? mesh->value.NumNodes() : 0;
}

size_t ag_mesh_num_triangles(const ag_mesh *mesh)
{
  return mesh ? mesh->value.NumTriangles() : 0;
}

double ag_mesh_total_area(const ag_mesh *mesh)
{
  return mesh ? mesh->value.TotalArea() : 0.0;
}

uint64_t ag_mesh_checksum(const ag_mesh *mesh)
{
  return mesh ? mesh->value.Checksum() : 0;
}

void ag_mesh_free(ag_mesh *mesh)
{
  delete mesh;
}

ag_status ag_operator_create(const ag_operator_spec *spec, ag_operator **out)
{
  return Guard(
    [&]
    {
      Require(spec && out, "null argument");
      Require(spec->orders || spec->n_orders == 0, "null harmonic order list");
      const airgap::AirGapGeometry g{spec->r_st, spec->rho_rt, spec->nu0, spec->ell_z};
      const auto st = Ring(spec->n_st, spec->r_st, spec->theta0_st);
      const auto rt = Ring(spec->n_rt, spec->rho_rt, spec->theta0_rt);
      const airgap::HarmonicSet set =
        spec->orders ? airgap::HarmonicSet(std::vector<int>(spec->orders, spec->orders + spec->n_orders))
                     : airgap::AirGapOperator::AllCommonOrders(st, rt);
      const auto corr = spec->interface_correction ? airgap::InterfaceCorrection::Exact
                                                   : airgap::InterfaceCorrection::Off;
      *out = new ag_operator{airgap::AirGapOperator(g, st, rt, set, corr)};
    });
}

ag_status ag_operator_set_motion(ag_operator *op, double alpha, double gamma_skew, double eps_re,
                                 double eps_im)
{
  return Guard(
    [&]
    {
      Require(op != nullptr, "null argument");
      op->value.SetMotion({alpha, gamma_skew, airgap::Complex(eps_re, eps_im)});
    });
}

ag_status ag_operator_apply(const ag_operator *op, const double *u, double *g)
{
  return Guard(
    [&]
    {
      Require(op && u && g, "null argument");
      const std::size_t ns = op->value.StatorSize(), nr = op->value.RotorSize();
      op->value.ApplyRing({u, ns}, {u + ns, nr}, {g, ns}, {g + ns, nr});
    });
}

size_t ag_operator_size(const ag_operator *op)
{
  return op ? op->value.StatorSize() + op->value.RotorSize() : 0;
}

size_t ag_operator_num_harmonics(const ag_operator *op)
{
  return op ? op->value.Harmonics().Size() : 0;
}

void ag_operator_free(ag_operator *op)
{
  delete op;
}

}  // extern "C"
