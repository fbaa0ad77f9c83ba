// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include "airgap/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include "json.hpp"
#include "airgap/error.hpp"

namespace airgap
{

namespace
{

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

// A JSON value together with its dotted key path for diagnostics.
class Node
{
public:
  Node(const json &value, std::string path) : value_(value), path_(std::move(path)) {}

  const json &Value() const { return value_; }
  const std::string &Path() const { return path_; }

  [[noreturn]] void Fail(const std::string &what) const
  {
    Throw(ErrorCode::Configuration,
          "config key '" + (path_.empty() ? std::string("<root>") : path_) + "': " + what);
  }

  bool Has(const std::string &key) const { return value_.contains(key); }

  Node operator[](const std::string &key) const
  {
    if (!value_.is_object())
    {
      Fail("expected an object");
    }
    if (!value_.contains(key))
    {
      Node(value_, Join(key)).Fail("missing required key");
    }
    return Node(value_.at(key), Join(key));
  }

  Node At(std::size_t i) const
  {
    return Node(value_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  // Rejects keys outside the allowed list (catches misspellings).
  void Allow(std::initializer_list<const char *> keys) const
  {
    if (!value_.is_object())
    {
      Fail("expected an object");
    }
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto &item : value_.items())
    {
      if (!ok.count(item.key()))
      {
        Node(item.value(), Join(item.key())).Fail("unknown key");
      }
    }
  }

  double Number() const
  {
    if (!value_.is_number())
    {
      Fail("expected a number");
    }
    const double v = value_.get<double>();
    if (!std::isfinite(v))
    {
      Fail("expected a finite number");
    }
    return v;
  }

  int Integer() const
  {
    if (!value_.is_number_integer())
    {
      Fail("expected an integer");
    }
    const auto v = value_.get<long long>();
    if (v < -(1LL << 30) || v > (1LL << 30))
    {
      Fail("integer out of range");
    }
    return static_cast<int>(v);
  }

  std::string String() const
  {
    if (!value_.is_string())
    {
      Fail("expected a string");
    }
    return value_.get<std::string>();
  }

  bool Bool() const
  {
    if (!value_.is_boolean())
    {
      Fail("expected true or false");
    }
    return value_.get<bool>();
  }

  std::size_t Size() const
  {
    if (!value_.is_array())
    {
      Fail("expected an array");
    }
    return value_.size();
  }

  double Number(const std::string &key, double fallback) const
  {
    return Has(key) ? (*this)[key].Number() : fallback;
  }
  int Integer(const std::string &key, int fallback) const
  {
    return Has(key) ? (*this)[key].Integer() : fallback;
  }
  std::string String(const std::string &key, const std::string &fallback) const
  {
    return Has(key) ? (*this)[key].String() : fallback;
  }

  double Positive(const std::string &key) const
  {
    const Node n = (*this)[key];
    const double v = n.Number();
    if (!(v > 0.0))
    {
      n.Fail("must be positive");
    }
    return v;
  }

private:
  std::string Join(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

  const json &value_;
  std::string path_;
};

std::uint64_t Fnv1a(const std::string &s)
{
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s)
  {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

AngularSector ParseSector(const Node &n)
{
  n.Allow({"begin", "end", "tag"});
  return {n["begin"].Number(), n["end"].Number(), n["tag"].Integer()};
}

// count evenly spaced poles of angular width pole_arc centred at offset + 2 pi k/count; the
// slot between two poles is split into two coil halves, coil_tag + 2k on the counterclockwise
// side of pole k and coil_tag + 2k + 1 on its clockwise side.
std::vector<AngularSector> ExpandPoles(const Node &n)
{
  n.Allow({"count", "offset", "pole_arc", "pole_tag", "coil_tag"});
  const int count = n["count"].Integer();
  if (count < 2)
  {
    n["count"].Fail("needs at least 2 poles");
  }
  const double offset = n["offset"].Number();
  const double arc = n.Positive("pole_arc");
  const double pitch = 2.0 * kPi / count;
  if (!(arc < pitch))
  {
    n["pole_arc"].Fail("pole arc must be smaller than the pole pitch");
  }
  const int pole_tag = n["pole_tag"].Integer();
  const int coil_tag = n["coil_tag"].Integer();
  std::vector<AngularSector> s;
  for (int k = 0; k < count; k++)
  {
    const double c = offset + k * pitch;
    s.push_back({c - 0.5 * arc, c + 0.5 * arc, pole_tag});
    s.push_back({c + 0.5 * arc, c + 0.5 * pitch, coil_tag + 2 * k});
    s.push_back({c - 0.5 * pitch, c - 0.5 * arc, coil_tag + 2 * k + 1});
  }
  return s;
}

MachineSpec ParseGenerator(const Node &n)
{
  const std::string type = n.String("type", "machine");
  MachineSpec spec;
  if (type == "annulus")
  {
    n.Allow({"type", "r_inner", "r_outer", "n_boundary", "n_layers", "tag"});
    spec.r_inner = n["r_inner"].Number();
    spec.n_boundary = n["n_boundary"].Integer();
    spec.bands.push_back({n["r_outer"].Number(), n["n_layers"].Integer(), n.Integer("tag", 0), {}});
    return spec;
  }
  if (type != "machine")
  {
    n["type"].Fail("expected 'annulus' or 'machine'");
  }
  n.Allow({"type", "r_inner", "n_boundary", "bands"});
  spec.r_inner = n["r_inner"].Number();
  spec.n_boundary = n["n_boundary"].Integer();
  const Node bands = n["bands"];
  for (std::size_t i = 0; i < bands.Size(); i++)
  {
    const Node b = bands.At(i);
    b.Allow({"r_outer", "n_layers", "tag", "sectors", "poles"});
    RadialBand band{b["r_outer"].Number(), b["n_layers"].Integer(), b.Integer("tag", 0), {}};
    if (b.Has("sectors"))
    {
      const Node s = b["sectors"];
      for (std::size_t k = 0; k < s.Size(); k++)
      {
        band.sectors.push_back(ParseSector(s.At(k)));
      }
    }
    if (b.Has("poles"))
    {
      const auto p = ExpandPoles(b["poles"]);
      band.sectors.insert(band.sectors.end(), p.begin(), p.end());
    }
    spec.bands.push_back(std::move(band));
  }
  return spec;
}

SubdomainConfig ParseSubdomain(const Node &n, const std::filesystem::path &base_dir)
{
  n.Allow({"mesh", "generator", "ring_set", "dirichlet"});
  SubdomainConfig s;
  if (n.Has("generator") == n.Has("mesh"))
  {
    n.Fail("give exactly one of 'mesh' or 'generator'");
  }
  if (n.Has("mesh"))
  {
    std::filesystem::path p = n["mesh"].String();
    s.mesh = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  else
  {
    s.generator = ParseGenerator(n["generator"]);
  }
  s.ring_set = n["ring_set"].String();
  const Node d = n["dirichlet"];
  for (std::size_t i = 0; i < d.Size(); i++)
  {
    const Node e = d.At(i);
    e.Allow({"set", "value", "amplitude", "order", "phase"});
    DirichletSpec spec;
    spec.set = e["set"].String();
    spec.value = e.Number("value", 0.0);
    spec.amplitude = e.Number("amplitude", 0.0);
    spec.order = e.Integer("order", 0);
    spec.phase = e.Number("phase", 0.0);
    if (spec.order < 0)
    {
      e["order"].Fail("must be non-negative");
    }
    s.dirichlet.push_back(spec);
  }
  return s;
}

MaterialTable ParseMaterials(const Node &n)
{
  MaterialTable table;
  for (std::size_t i = 0; i < n.Size(); i++)
  {
    const Node m = n.At(i);
    m.Allow({"tag", "nu", "mu_r", "sigma", "current_density"});
    Material mat;
    if (m.Has("nu") == m.Has("mu_r"))
    {
      m.Fail("give exactly one of 'nu' or 'mu_r'");
    }
    mat.nu = m.Has("nu") ? m.Positive("nu") : 1.0 / (kMu0 * m.Positive("mu_r"));
    mat.sigma = m.Number("sigma", 0.0);
    if (mat.sigma < 0.0)
    {
      m["sigma"].Fail("must be non-negative");
    }
    mat.current_density = m.Number("current_density", 0.0);
    const int tag = m["tag"].Integer();
    if (!table.emplace(tag, mat).second)
    {
      m["tag"].Fail("duplicate material tag " + std::to_string(tag));
    }
  }
  return table;
}

void ParseAirgap(const Node &n, SimulationConfig &c)
{
  n.Allow({"r_st", "rho_rt", "nu0", "ell_z", "harmonics", "sint"});
  c.airgap.r_st = n.Positive("r_st");
  c.airgap.rho_rt = n.Positive("rho_rt");
  c.airgap.nu0 = n.Has("nu0") ? n.Positive("nu0") : 1.0 / kMu0;
  c.airgap.ell_z = n.Has("ell_z") ? n.Positive("ell_z") : 1.0;
  if (n.Has("harmonics"))
  {
    const Node h = n["harmonics"];
    if (h.Value().is_string())
    {
      if (h.String() != "auto")
      {
        h.Fail("expected 'auto', a list of orders or {\"max\": n}");
      }
    }
    else if (h.Value().is_object())
    {
      h.Allow({"max"});
      const int mx = h["max"].Integer();
      if (mx < 1)
      {
        h["max"].Fail("must be at least 1");
      }
      for (int l = 1; l <= mx; l++)
      {
        c.harmonics.push_back(l);
      }
    }
    else
    {
      for (std::size_t i = 0; i < h.Size(); i++)
      {
        const int l = h.At(i).Integer();
        if (l < 1)
        {
          h.At(i).Fail("harmonic orders must be positive");
        }
        c.harmonics.push_back(l);
      }
      if (c.harmonics.empty())
      {
        h.Fail("harmonic set must not be empty");
      }
    }
  }
  const std::string sint = n.String("sint", "exact");
  if (sint == "exact")
  {
    c.sint = InterfaceCorrection::Exact;
  }
  else if (sint == "off")
  {
    c.sint = InterfaceCorrection::Off;
  }
  else
  {
    n["sint"].Fail("expected 'exact' or 'off'");
  }
}

void ParseMotion(const Node &n, SimulationConfig &c)
{
  n.Allow({"gamma_skew", "samples", "slew"});
  c.gamma_skew = n.Number("gamma_skew", 0.0);
  if (n.Has("samples"))
  {
    const Node s = n["samples"];
    c.motion.clear();
    for (std::size_t i = 0; i < s.Size(); i++)
    {
      const Node e = s.At(i);
      e.Allow({"t", "alpha", "d_ecc", "gamma_ecc"});
      MotionSample m;
      m.t = e["t"].Number();
      m.alpha = e.Number("alpha", 0.0);
      m.d_ecc = e.Number("d_ecc", 0.0);
      m.gamma_ecc = e.Number("gamma_ecc", 0.0);
      if (m.d_ecc < 0.0)
      {
        e["d_ecc"].Fail("must be non-negative");
      }
      c.motion.push_back(m);
    }
    if (c.motion.empty())
    {
      s.Fail("needs at least one sample");
    }
  }
  if (n.Has("slew"))
  {
    const Node s = n["slew"];
    s.Allow({"alpha", "ecc"});
    if (s.Has("alpha"))
    {
      c.slew.alpha = s.Positive("alpha");
    }
    if (s.Has("ecc"))
    {
      c.slew.ecc = s.Positive("ecc");
    }
  }
}

void ParseSolver(const Node &n, SimulationConfig &c)
{
  n.Allow({"mode", "tol", "max_iterations", "gs_sweeps", "fe_block", "precondition", "dt", "t_end",
           "theta", "initial"});
  const std::string mode = n.String("mode", "static");
  if (mode == "static")
  {
    c.mode = SolveMode::Static;
  }
  else if (mode == "transient")
  {
    c.mode = SolveMode::Transient;
  }
  else
  {
    n["mode"].Fail("expected 'static' or 'transient'");
  }
  c.solver.tol = n.Has("tol") ? n.Positive("tol") : 1e-10;
  c.solver.max_iterations = n.Integer("max_iterations", 0);
  if (c.solver.max_iterations < 0)
  {
    n["max_iterations"].Fail("must be non-negative (0 selects 10 x dimension)");
  }
  c.solver.gs_sweeps = n.Integer("gs_sweeps", 2);
  if (c.solver.gs_sweeps < 1)
  {
    n["gs_sweeps"].Fail("must be at least 1");
  }
  const std::string fe = n.String("fe_block", "gauss_seidel");
  if (fe == "gauss_seidel")
  {
    c.solver.fe_block = FeBlockSolver::GaussSeidel;
  }
  else if (fe == "cholesky")
  {
    c.solver.fe_block = FeBlockSolver::Cholesky;
  }
  else
  {
    n["fe_block"].Fail("expected 'gauss_seidel' or 'cholesky'");
  }
  c.solver.precondition = n.Has("precondition") ? n["precondition"].Bool() : true;
  c.theta = n.Number("theta", 1.0);
  if (!(c.theta > 0.0 && c.theta <= 1.0))
  {
    n["theta"].Fail("must lie in (0, 1]");
  }
  const std::string init = n.String("initial", "static");
  if (init == "static")
  {
    c.initial = InitialCondition::Static;
  }
  else if (init == "zero")
  {
    c.initial = InitialCondition::Zero;
  }
  else
  {
    n["initial"].Fail("expected 'static' or 'zero'");
  }
  if (c.mode == SolveMode::Transient)
  {
    c.dt = n.Positive("dt");
    c.t_end = n.Positive("t_end");
  }
}

void ParseOutput(const Node &n, SimulationConfig &c, const std::filesystem::path &base_dir)
{
  n.Allow({"dir", "csv", "vtk_prefix", "snapshot_every"});
  if (n.Has("dir"))
  {
    std::filesystem::path p = n["dir"].String();
    c.output_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  c.csv_name = n.String("csv", c.csv_name);
  c.vtk_prefix = n.String("vtk_prefix", c.vtk_prefix);
  c.snapshot_every = n.Integer("snapshot_every", 0);
  if (c.snapshot_every < 0)
  {
    n["snapshot_every"].Fail("must be non-negative");
  }
}

json DefaultConfigJson()
{
  const double J = 5e6;
  // Pole 0 at 22.5 degrees carries the full excitation, its two neighbours return half each.
  const double pole_current[8] = {1.0, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0, -0.5};
  json materials = json::array();
  materials.push_back({{"tag", 1}, {"mu_r", 1000.0}});  // rotor iron, laminated
  materials.push_back({{"tag", 2}, {"mu_r", 1000.0}});  // stator iron, laminated
  materials.push_back({{"tag", 3}, {"mu_r", 1.0}});     // air
  for (int k = 0; k < 8; k++)
  {
    materials.push_back({{"tag", 100 + 2 * k}, {"mu_r", 1.0}, {"current_density", J * pole_current[k]}});
    materials.push_back({{"tag", 101 + 2 * k}, {"mu_r", 1.0}, {"current_density", -J * pole_current[k]}});
  }
  json cfg = {
    {"stator",
     {{"generator",
       {{"type", "machine"},
        {"r_inner", 0.021},
        {"n_boundary", 128},
        {"bands",
         {{{"r_outer", 0.022}, {"n_layers", 1}, {"tag", 3}},
          {{"r_outer", 0.032},
           {"n_layers", 6},
           {"tag", 3},
           {"poles",
            {{"count", 8},
             {"offset", kPi / 8.0},
             {"pole_arc", kPi / 8.0},
             {"pole_tag", 2},
             {"coil_tag", 100}}}},
          {{"r_outer", 0.040}, {"n_layers", 4}, {"tag", 2}}}}}},
      {"ring_set", "inner"},
      {"dirichlet", {{{"set", "outer"}, {"value", 0.0}}}}}},
    {"rotor",
     {{"generator",
       {{"type", "annulus"},
        {"r_inner", 0.010},
        {"r_outer", 0.020},
        {"n_boundary", 128},
        {"n_layers", 8},
        {"tag", 1}}},
      {"ring_set", "outer"},
      {"dirichlet", {{{"set", "inner"}, {"value", 0.0}}}}}},
    {"materials", materials},
    {"airgap",
     {{"r_st", 0.021}, {"rho_rt", 0.020}, {"ell_z", 0.05}, {"harmonics", {{"max", 24}}},
      {"sint", "exact"}}},
    {"motion",
     {{"gamma_skew", 0.0},
      {"samples",
       {{{"t", 0.0}, {"alpha", 0.0}, {"d_ecc", 5e-4}, {"gamma_ecc", 9.0 * kPi / 8.0}},
        {{"t", 0.02}, {"alpha", kPi / 4.0}, {"d_ecc", 5e-4}, {"gamma_ecc", kPi / 8.0}}}}}},
    {"solver",
     {{"mode", "transient"},
      {"tol", 1e-10},
      {"gs_sweeps", 2},
      {"fe_block", "gauss_seidel"},
      {"dt", 5e-4},
      {"t_end", 0.02},
      {"theta", 1.0},
      {"initial", "static"}}},
    {"output", {{"dir", "out"}, {"csv", "forces.csv"}, {"vtk_prefix", "field"}, {"snapshot_every", 0}}}};
  return cfg;
}

}  // namespace

SimulationConfig ParseConfig(const std::string &text, const std::filesystem::path &base_dir)
{
  json doc;
  try
  {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  }
  catch (const json::parse_error &e)
  {
    Throw(ErrorCode::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  const Node root(doc, "");
  root.Allow({"stator", "rotor", "materials", "airgap", "motion", "solver", "output"});
  SimulationConfig c;
  c.stator = ParseSubdomain(root["stator"], base_dir);
  c.rotor = ParseSubdomain(root["rotor"], base_dir);
  c.materials = ParseMaterials(root["materials"]);
  ParseAirgap(root["airgap"], c);
  if (root.Has("motion"))
  {
    ParseMotion(root["motion"], c);
  }
  if (root.Has("solver"))
  {
    ParseSolver(root["solver"], c);
  }
  if (root.Has("output"))
  {
    ParseOutput(root["output"], c, base_dir);
  }
  c.canonical = doc.dump();
  c.hash = Fnv1a(c.canonical);
  ValidateConfig(c);
  return c;
}

SimulationConfig LoadConfig(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    Throw(ErrorCode::Io, "cannot open config file '" + path.string() + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str(), path.parent_path());
}

void ValidateConfig(const SimulationConfig &c)
{
  if (!(c.airgap.r_st > c.airgap.rho_rt))
  {
    Throw(ErrorCode::Validation, "config key 'airgap': r_st must exceed rho_rt (xi = r_st/rho_rt > 1)");
  }
  if (c.stator.dirichlet.empty())
  {
    Throw(ErrorCode::Validation, "config key 'stator.dirichlet': at least one constraint is required");
  }
  if (c.rotor.dirichlet.empty())
  {
    Throw(ErrorCode::Validation, "config key 'rotor.dirichlet': at least one constraint is required");
  }
  for (std::size_t i = 0; i < c.motion.size(); i++)
  {
    const double e = c.motion[i].d_ecc / c.airgap.rho_rt;
    if (e > kEpsLimit)
    {
      Throw(ErrorCode::Validation, "config key 'motion.samples[" + std::to_string(i) +
                                      "].d_ecc': relative eccentricity exceeds the first-order model limit");
    }
    if (c.motion[i].d_ecc >= c.airgap.r_st - c.airgap.rho_rt)
    {
      Throw(ErrorCode::Validation, "config key 'motion.samples[" + std::to_string(i) +
                                      "].d_ecc': rotor would touch the stator");
    }
  }
  MotionProfile(c.motion, c.gamma_skew, c.slew);
}

std::string DefaultConfigText()
{
  return DefaultConfigJson().dump(2) + "\n";
}

std::string HashString(std::uint64_t hash)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace airgap
