// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_MESH_HPP
#define AIRGAP_MESH_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace airgap
{

using Index = std::int32_t;

struct Point2
{
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2 &) const = default;
};

//
// Linear triangular mesh of one subdomain. Immutable after construction; the constructor
// validates index ranges, counterclockwise orientation and the minimum node distance.
//
class Mesh
{
public:
  using NodeSets = std::map<std::string, std::vector<Index>>;

  Mesh() = default;
  Mesh(std::vector<Point2> nodes, std::vector<std::array<Index, 3>> triangles,
       std::vector<int> region_tags, NodeSets node_sets, double node_tolerance = 0.0);

  const std::vector<Point2> &Nodes() const { return nodes_; }
  const std::vector<std::array<Index, 3>> &Triangles() const { return triangles_; }
  const std::vector<int> &RegionTags() const { return region_tags_; }
  const NodeSets &Sets() const { return node_sets_; }
  const std::vector<Index> &Set(const std::string &name) const;
  bool HasSet(const std::string &name) const { return node_sets_.count(name) > 0; }

  std::size_t NumNodes() const { return nodes_.size(); }
  std::size_t NumTriangles() const { return triangles_.size(); }

  // Signed area of triangle t (positive for counterclockwise vertices).
  double TriangleArea(std::size_t t) const;
  double TotalArea() const;

  // FNV-1a hash over coordinates, connectivity, tags and node sets.
  std::uint64_t Checksum() const;

  bool operator==(const Mesh &) const = default;

private:
  std::vector<Point2> nodes_;
  std::vector<std::array<Index, 3>> triangles_;
  std::vector<int> region_tags_;
  NodeSets node_sets_;
};

// Ordered equidistant circle of interface nodes.
struct InterfaceRing
{
  std::vector<Index> node_indices;  // counterclockwise
  double radius = 0.0;
  double theta0 = 0.0;              // angle of node 0

  std::size_t Size() const { return node_indices.size(); }
  double Angle(std::size_t p) const;
};

// Structured annulus with n_layers radial layers; node sets "inner" and "outer" with node 0
// of each ring at angle 0.
Mesh GenerateAnnulus(double r_inner, double r_outer, int n_boundary, int n_layers,
                     int region_tag);

struct AngularSector
{
  double begin = 0.0;  // rad, [begin, end) taken modulo 2 pi, counterclockwise
  double end = 0.0;
  int tag = 0;
};

struct RadialBand
{
  double r_outer = 0.0;
  int n_layers = 1;
  int default_tag = 0;
  std::vector<AngularSector> sectors;
};

struct MachineSpec
{
  double r_inner = 0.0;
  int n_boundary = 0;
  std::vector<RadialBand> bands;  // inner to outer
};

// Annular mesh whose triangles are tagged by radial band and angular sector (centroid rule).
// Uncovered angles of a band take its default tag.
Mesh GenerateMachine(const MachineSpec &spec);

Mesh LoadMesh(const std::filesystem::path &path);
void SaveMesh(const Mesh &mesh, const std::filesystem::path &path);
Mesh ParseMesh(const std::string &text);
std::string FormatMesh(const Mesh &mesh);

// Default geometric tolerance relative to the ring radius.
inline constexpr double kRingRelativeTolerance = 1e-9;

// tol <= 0 selects kRingRelativeTolerance * expected_radius.
InterfaceRing ExtractRing(const Mesh &mesh, const std::string &node_set,
                          double expected_radius, double tol = 0.0);

}  // namespace airgap

#endif  // AIRGAP_MESH_HPP
