// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include "airgap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include "airgap/error.hpp"

namespace airgap
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double NormalizeAngle(double a)
{
  a = std::fmod(a, kTwoPi);
  if (a < 0.0)
  {
    a += kTwoPi;
  }
  return a;
}

void HashBytes(std::uint64_t &h, const void *data, std::size_t size)
{
  const auto *bytes = static_cast<const unsigned char *>(data);
  for (std::size_t i = 0; i < size; i++)
  {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
}

void CheckMinimumDistance(const std::vector<Point2> &nodes, double tol)
{
  if (nodes.size() < 2)
  {
    return;
  }
  std::vector<Index> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return nodes[a].x < nodes[b].x; });
  for (std::size_t i = 0; i < order.size(); i++)
  {
    const Point2 &p = nodes[order[i]];
    for (std::size_t j = i + 1; j < order.size(); j++)
    {
      const Point2 &q = nodes[order[j]];
      if (q.x - p.x >= tol)
      {
        break;
      }
      if (std::hypot(q.x - p.x, q.y - p.y) < tol)
      {
        Throw(ErrorCode::Validation, "nodes " + std::to_string(order[i]) + " and " +
                                         std::to_string(order[j]) +
                                         " are closer than the geometric tolerance");
      }
    }
  }
}

}  // namespace

Mesh::Mesh(std::vector<Point2> nodes, std::vector<std::array<Index, 3>> triangles,
           std::vector<int> region_tags, NodeSets node_sets, double node_tolerance)
  : nodes_(std::move(nodes)), triangles_(std::move(triangles)),
    region_tags_(std::move(region_tags)), node_sets_(std::move(node_sets))
{
  if (region_tags_.size() != triangles_.size())
  {
    Throw(ErrorCode::Validation, "region tag count does not match triangle count");
  }
  const auto n = static_cast<Index>(nodes_.size());
  double extent = 0.0;
  for (const auto &p : nodes_)
  {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
    {
      Throw(ErrorCode::Validation, "non-finite node coordinate");
    }
    extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  }
  for (std::size_t t = 0; t < triangles_.size(); t++)
  {
    for (Index v : triangles_[t])
    {
      if (v < 0 || v >= n)
      {
        Throw(ErrorCode::Validation,
              "triangle " + std::to_string(t) + " references node out of range");
      }
    }
    if (!(TriangleArea(t) > 0.0))
    {
      Throw(ErrorCode::Validation,
            "triangle " + std::to_string(t) + " has non-positive signed area");
    }
  }
  for (const auto &[name, set] : node_sets_)
  {
    for (Index v : set)
    {
      if (v < 0 || v >= n)
      {
        Throw(ErrorCode::Validation, "node set '" + name + "' index out of range");
      }
    }
  }
  CheckMinimumDistance(nodes_, node_tolerance > 0.0 ? node_tolerance : 1e-12 * extent);
}

const std::vector<Index> &Mesh::Set(const std::string &name) const
{
  auto it = node_sets_.find(name);
  if (it == node_sets_.end())
  {
    Throw(ErrorCode::Configuration, "mesh has no node set '" + name + "'");
  }
  return it->second;
}

double Mesh::TriangleArea(std::size_t t) const
{
  const auto &[i, j, k] = triangles_[t];
  const Point2 &a = nodes_[i], &b = nodes_[j], &c = nodes_[k];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::TotalArea() const
{
  double area = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); t++)
  {
    area += TriangleArea(t);
  }
  return area;
}

std::uint64_t Mesh::Checksum() const
{
  std::uint64_t h = 14695981039346656037ULL;
  HashBytes(h, nodes_.data(), nodes_.size() * sizeof(Point2));
  HashBytes(h, triangles_.data(), triangles_.size() * sizeof(triangles_[0]));
  HashBytes(h, region_tags_.data(), region_tags_.size() * sizeof(int));
  for (const auto &[name, set] : node_sets_)
  {
    HashBytes(h, name.data(), name.size());
    HashBytes(h, set.data(), set.size() * sizeof(Index));
  }
  return h;
}

double InterfaceRing::Angle(std::size_t p) const
{
  return theta0 + kTwoPi * static_cast<double>(p) / static_cast<double>(Size());
}

Mesh GenerateAnnulus(double r_inner, double r_outer, int n_boundary, int n_layers,
                     int region_tag)
{
  MachineSpec spec;
  spec.r_inner = r_inner;
  spec.n_boundary = n_boundary;
  spec.bands.push_back({r_outer, n_layers, region_tag, {}});
  return GenerateMachine(spec);
}

Mesh GenerateMachine(const MachineSpec &spec)
{
  const int n = spec.n_boundary;
  if (!(spec.r_inner > 0.0))
  {
    Throw(ErrorCode::InvalidGeometry, "inner radius must be positive");
  }
  if (n < 4 || n % 2 != 0)
  {
    Throw(ErrorCode::InvalidSpec, "n_boundary must be even and at least 4");
  }
  if (spec.bands.empty())
  {
    Throw(ErrorCode::InvalidSpec, "machine spec needs at least one radial band");
  }

  // Radii of all node rings, inner to outer.
  std::vector<double> radii = {spec.r_inner};
  for (std::size_t b = 0; b < spec.bands.size(); b++)
  {
    const RadialBand &band = spec.bands[b];
    const double r0 = radii.back();
    if (!(band.r_outer > r0))
    {
      Throw(ErrorCode::InvalidGeometry, "band " + std::to_string(b) +
                                            ": radii must be strictly increasing");
    }
    if (band.n_layers < 1)
    {
      Throw(ErrorCode::InvalidSpec, "band " + std::to_string(b) + ": n_layers must be >= 1");
    }
    for (int l = 1; l <= band.n_layers; l++)
    {
      radii.push_back(l == band.n_layers ? band.r_outer
                                         : r0 + (band.r_outer - r0) * l / band.n_layers);
    }

    // Sector overlap check on the band's angular intervals.
    std::vector<std::pair<double, double>> spans;
    for (const auto &s : band.sectors)
    {
      double len = NormalizeAngle(s.end - s.begin);
      if (len == 0.0 && s.end != s.begin)
      {
        len = kTwoPi;
      }
      if (!(len > 0.0))
      {
        Throw(ErrorCode::InvalidSpec, "band " + std::to_string(b) + ": empty sector");
      }
      const double a = NormalizeAngle(s.begin);
      if (a + len > kTwoPi)
      {
        spans.emplace_back(a, kTwoPi);
        spans.emplace_back(0.0, a + len - kTwoPi);
      }
      else
      {
        spans.emplace_back(a, a + len);
      }
    }
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); i++)
    {
      if (spans[i].first < spans[i - 1].second - 1e-12)
      {
        Throw(ErrorCode::InvalidSpec, "band " + std::to_string(b) + ": overlapping sectors");
      }
    }
  }

  const auto rings = static_cast<Index>(radii.size());
  std::vector<Point2> nodes;
  nodes.reserve(static_cast<std::size_t>(rings) * n);
  for (Index k = 0; k < rings; k++)
  {
    for (int p = 0; p < n; p++)
    {
      const double th = kTwoPi * p / n;
      nodes.push_back({radii[k] * std::cos(th), radii[k] * std::sin(th)});
    }
  }

  auto node = [n](Index ring, int p) { return ring * n + (p % n); };
  auto tag_of = [&](std::size_t band, double angle)
  {
    const RadialBand &b = spec.bands[band];
    for (const auto &s : b.sectors)
    {
      double len = NormalizeAngle(s.end - s.begin);
      if (len == 0.0)
      {
        len = kTwoPi;
      }
      if (NormalizeAngle(angle - s.begin) < len)
      {
        return s.tag;
      }
    }
    return b.default_tag;
  };

  std::vector<std::array<Index, 3>> triangles;
  std::vector<int> tags;
  Index ring = 0;
  for (std::size_t b = 0; b < spec.bands.size(); b++)
  {
    for (int l = 0; l < spec.bands[b].n_layers; l++, ring++)
    {
      for (int p = 0; p < n; p++)
      {
        const Index a = node(ring, p), c = node(ring, p + 1);
        const Index d = node(ring + 1, p), e = node(ring + 1, p + 1);
        const int tag = tag_of(b, kTwoPi * (p + 0.5) / n);
        triangles.push_back({a, e, c});
        triangles.push_back({a, d, e});
        tags.push_back(tag);
        tags.push_back(tag);
      }
    }
  }

  Mesh::NodeSets sets;
  auto &inner = sets["inner"];
  auto &outer = sets["outer"];
  for (int p = 0; p < n; p++)
  {
    inner.push_back(node(0, p));
    outer.push_back(node(rings - 1, p));
  }
  return Mesh(std::move(nodes), std::move(triangles), std::move(tags), std::move(sets));
}

std::string FormatMesh(const Mesh &mesh)
{
  std::ostringstream os;
  os << std::setprecision(17);
  os << "nodes " << mesh.NumNodes() << "\n";
  for (const auto &p : mesh.Nodes())
  {
    os << p.x << " " << p.y << "\n";
  }
  os << "triangles " << mesh.NumTriangles() << "\n";
  for (std::size_t t = 0; t < mesh.NumTriangles(); t++)
  {
    const auto &tri = mesh.Triangles()[t];
    os << tri[0] << " " << tri[1] << " " << tri[2] << " " << mesh.RegionTags()[t] << "\n";
  }
  for (const auto &[name, set] : mesh.Sets())
  {
    os << "nodeset " << name << " " << set.size() << "\n";
    for (std::size_t i = 0; i < set.size(); i++)
    {
      os << set[i] << (i + 1 == set.size() ? "\n" : " ");
    }
  }
  return os.str();
}

namespace
{

class LineReader
{
public:
  explicit LineReader(const std::string &text) : is_(text) {}

  // Next non-empty line; false at end of input.
  bool Next(std::istringstream &line)
  {
    std::string s;
    while (std::getline(is_, s))
    {
      number_++;
      if (s.find_first_not_of(" \t\r") != std::string::npos)
      {
        line.clear();
        line.str(s);
        return true;
      }
    }
    return false;
  }

  [[noreturn]] void Fail(const std::string &what, ErrorCode code = ErrorCode::Parse) const
  {
    Throw(code, "line " + std::to_string(number_) + ": " + what);
  }

  std::size_t Number() const { return number_; }

private:
  std::istringstream is_;
  std::size_t number_ = 0;
};

std::size_t ReadHeader(LineReader &reader, const std::string &keyword)
{
  std::istringstream line;
  if (!reader.Next(line))
  {
    reader.Fail("missing '" + keyword + "' header");
  }
  std::string word;
  long long count = -1;
  if (!(line >> word >> count) || word != keyword || count < 0)
  {
    reader.Fail("malformed '" + keyword + "' header");
  }
  return static_cast<std::size_t>(count);
}

}  // namespace

Mesh ParseMesh(const std::string &text)
{
  LineReader reader(text);
  std::istringstream line;

  const std::size_t num_nodes = ReadHeader(reader, "nodes");
  std::vector<Point2> nodes(num_nodes);
  for (auto &p : nodes)
  {
    if (!reader.Next(line) || !(line >> p.x >> p.y))
    {
      reader.Fail("expected node coordinates 'x y'");
    }
  }

  const std::size_t num_tris = ReadHeader(reader, "triangles");
  std::vector<std::array<Index, 3>> tris(num_tris);
  std::vector<int> tags(num_tris);
  for (std::size_t t = 0; t < num_tris; t++)
  {
    long long v[3];
    if (!reader.Next(line) || !(line >> v[0] >> v[1] >> v[2] >> tags[t]))
    {
      reader.Fail("expected triangle 'i j k tag'");
    }
    for (int i = 0; i < 3; i++)
    {
      if (v[i] < 0 || v[i] >= static_cast<long long>(num_nodes))
      {
        reader.Fail("triangle node index " + std::to_string(v[i]) + " out of range");
      }
      tris[t][i] = static_cast<Index>(v[i]);
    }
    const Point2 &a = nodes[tris[t][0]], &b = nodes[tris[t][1]], &c = nodes[tris[t][2]];
    if (!((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y) > 0.0))
    {
      reader.Fail("triangle has non-positive signed area (clockwise or degenerate)",
                  ErrorCode::Validation);
    }
  }

  Mesh::NodeSets sets;
  while (reader.Next(line))
  {
    std::string word, name;
    long long count = -1;
    if (!(line >> word >> name >> count) || word != "nodeset" || count < 0)
    {
      reader.Fail("malformed 'nodeset' header");
    }
    auto &set = sets[name];
    while (static_cast<long long>(set.size()) < count)
    {
      if (!reader.Next(line))
      {
        reader.Fail("node set '" + name + "' truncated");
      }
      long long v;
      while (line >> v)
      {
        if (v < 0 || v >= static_cast<long long>(num_nodes))
        {
          reader.Fail("node set index " + std::to_string(v) + " out of range");
        }
        set.push_back(static_cast<Index>(v));
      }
    }
    if (static_cast<long long>(set.size()) != count)
    {
      reader.Fail("node set '" + name + "' has too many entries");
    }
  }
  return Mesh(std::move(nodes), std::move(tris), std::move(tags), std::move(sets));
}

Mesh LoadMesh(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    Throw(ErrorCode::Io, "cannot open mesh file '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  try
  {
    return ParseMesh(ss.str());
  }
  catch (const Error &e)
  {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void SaveMesh(const Mesh &mesh, const std::filesystem::path &path)
{
  std::ofstream out(path);
  if (!out)
  {
    Throw(ErrorCode::Io, "cannot write mesh file '" + path.string() + "'");
  }
  out << FormatMesh(mesh);
  if (!out)
  {
    Throw(ErrorCode::Io, "write failed for '" + path.string() + "'");
  }
}

InterfaceRing ExtractRing(const Mesh &mesh, const std::string &node_set,
                          double expected_radius, double tol)
{
  if (!(expected_radius > 0.0))
  {
    Throw(ErrorCode::InvalidGeometry, "ring radius must be positive");
  }
  if (tol <= 0.0)
  {
    tol = kRingRelativeTolerance * expected_radius;
  }
  const auto &set = mesh.Set(node_set);
  const std::size_t n = set.size();
  if (n < 4 || n % 2 != 0)
  {
    Throw(ErrorCode::UnsupportedGrid,
          "ring '" + node_set + "' must have an even node count of at least 4");
  }

  std::vector<std::pair<double, Index>> by_angle;
  by_angle.reserve(n);
  for (Index v : set)
  {
    const Point2 &p = mesh.Nodes()[v];
    const double r = std::hypot(p.x, p.y);
    if (std::abs(r - expected_radius) > tol)
    {
      Throw(ErrorCode::UnsupportedGrid, "ring '" + node_set + "': node " + std::to_string(v) +
                                            " is off the circle of radius " +
                                            std::to_string(expected_radius));
    }
    by_angle.emplace_back(NormalizeAngle(std::atan2(p.y, p.x)), v);
  }
  std::sort(by_angle.begin(), by_angle.end());

  InterfaceRing ring;
  ring.radius = expected_radius;
  ring.theta0 = by_angle.front().first;
  const double step = kTwoPi / static_cast<double>(n);
  // Nodes just below 2 pi may have sorted last although they belong at theta0 ~ 0.
  if (kTwoPi - by_angle.back().first < 0.5 * step &&
      kTwoPi - by_angle.back().first < by_angle.front().first)
  {
    std::rotate(by_angle.rbegin(), by_angle.rbegin() + 1, by_angle.rend());
    ring.theta0 = by_angle.front().first - kTwoPi;
  }
  const double angle_tol = tol / expected_radius;
  for (std::size_t p = 0; p < n; p++)
  {
    double expected = ring.theta0 + step * static_cast<double>(p);
    double diff = std::remainder(by_angle[p].first - expected, kTwoPi);
    if (std::abs(diff) > angle_tol)
    {
      Throw(ErrorCode::UnsupportedGrid, "ring '" + node_set +
                                            "' is not equidistant (non-equispaced rings are "
                                            "not supported)");
    }
    ring.node_indices.push_back(by_angle[p].second);
  }
  return ring;
}

}  // namespace airgap
