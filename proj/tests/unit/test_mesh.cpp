// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <doctest.h>
#include "airgap/error.hpp"
#include "airgap/mesh.hpp"

using namespace airgap;

namespace
{

constexpr double kPi = std::numbers::pi;

// Area of the inscribed polygonal annulus with n equal segments.
double PolygonAnnulusArea(double r_in, double r_out, int n)
{
  return 0.5 * n * std::sin(2.0 * kPi / n) * (r_out * r_out - r_in * r_in);
}

ErrorCode CodeOf(auto &&f)
{
  try
  {
    f();
  }
  catch (const Error &e)
  {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("annulus generator counts and ring placement")
{
  const Mesh m = GenerateAnnulus(1.0, 2.0, 8, 1, 0);
  CHECK(m.NumNodes() == 16);
  CHECK(m.NumTriangles() == 16);
  CHECK(m.Set("inner").size() == 8);
  CHECK(m.Set("outer").size() == 8);
  for (const char *name : {"inner", "outer"})
  {
    const auto &set = m.Set(name);
    for (std::size_t p = 0; p < set.size(); p++)
    {
      const auto &q = m.Nodes()[static_cast<std::size_t>(set[p])];
      double th = std::atan2(q.y, q.x);
      if (th < -1e-14)
      {
        th += 2.0 * kPi;
      }
      CHECK(std::abs(th - 2.0 * kPi * double(p) / 8.0) <= 1e-12);
    }
  }
  for (std::size_t t = 0; t < m.NumTriangles(); t++)
  {
    CHECK(m.TriangleArea(t) > 0.0);
  }
}

TEST_CASE("annulus area equals the polygonal annulus area")
{
  for (int n : {8, 32, 128})
  {
    for (int layers : {1, 3, 7})
    {
      const Mesh m = GenerateAnnulus(0.02, 0.045, n, layers, 1);
      const double exact = PolygonAnnulusArea(0.02, 0.045, n);
      CHECK(std::abs(m.TotalArea() - exact) <= 1e-10 * exact);
    }
  }
}

TEST_CASE("degenerate annulus is rejected")
{
  CHECK(CodeOf([] { GenerateAnnulus(1.0, 1.0, 8, 1, 0); }) == ErrorCode::InvalidGeometry);
  CHECK(CodeOf([] { GenerateAnnulus(2.0, 1.0, 8, 1, 0); }) == ErrorCode::InvalidGeometry);
  CHECK(CodeOf([] { GenerateAnnulus(1.0, 2.0, 7, 1, 0); }) == ErrorCode::InvalidSpec);
  CHECK(CodeOf([] { GenerateAnnulus(1.0, 2.0, 8, 0, 0); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("machine generator")
{
  SUBCASE("no sectors reduces to the annulus")
  {
    MachineSpec spec{1.0, 8, {RadialBand{2.0, 1, 0, {}}}};
    CHECK(GenerateMachine(spec) == GenerateAnnulus(1.0, 2.0, 8, 1, 0));
  }
  SUBCASE("alternating sectors split the area evenly")
  {
    RadialBand band{2.0, 4, 1, {}};
    for (int k = 0; k < 8; k += 2)
    {
      band.sectors.push_back({k * kPi / 4.0, (k + 1) * kPi / 4.0, 7});
    }
    const Mesh m = GenerateMachine({1.0, 64, {band}});
    std::map<int, double> area;
    for (std::size_t t = 0; t < m.NumTriangles(); t++)
    {
      area[m.RegionTags()[t]] += m.TriangleArea(t);
    }
    REQUIRE(area.size() == 2);
    CHECK(std::abs(area[1] - area[7]) <= 1e-12 * m.TotalArea());
  }
  SUBCASE("overlapping sectors are rejected")
  {
    RadialBand band{2.0, 1, 0, {{0.0, 1.0, 1}, {0.5, 2.0, 2}}};
    CHECK(CodeOf([&] { GenerateMachine({1.0, 8, {band}}); }) == ErrorCode::InvalidSpec);
  }
  SUBCASE("radii must increase")
  {
    MachineSpec spec{1.0, 8, {RadialBand{2.0, 1, 0, {}}, RadialBand{1.5, 1, 0, {}}}};
    CHECK(CodeOf([&] { GenerateMachine(spec); }) == ErrorCode::InvalidGeometry);
  }
}

TEST_CASE("mesh text round trip")
{
  const Mesh m = GenerateAnnulus(1.0, 2.0, 8, 1, 0);
  CHECK(ParseMesh(FormatMesh(m)) == m);

  const Mesh fine = GenerateAnnulus(0.0123456789, 0.0456789123, 30, 3, 4);
  const auto path = std::filesystem::temp_directory_path() / "airgap_test_mesh.txt";
  SaveMesh(fine, path);
  const Mesh loaded = LoadMesh(path);
  std::filesystem::remove(path);
  CHECK(loaded == fine);
  CHECK(loaded.Checksum() == fine.Checksum());
}

TEST_CASE("mesh parse errors")
{
  SUBCASE("triangle index out of range names the line")
  {
    const std::string text = "nodes 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 3 0\n";
    try
    {
      ParseMesh(text);
      FAIL("expected a parse error");
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::Parse);
      CHECK(std::string(e.what()).find("line 6") != std::string::npos);
    }
  }
  SUBCASE("clockwise triangle fails validation")
  {
    const std::string text = "nodes 3\n0 0\n1 0\n0 1\ntriangles 1\n0 2 1 0\n";
    try
    {
      ParseMesh(text);
      FAIL("expected a validation error");
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::Validation);
      CHECK(std::string(e.what()).find("line 6") != std::string::npos);
    }
  }
  SUBCASE("malformed header")
  {
    CHECK(CodeOf([] { ParseMesh("vertices 3\n"); }) == ErrorCode::Parse);
  }
}

TEST_CASE("ring extraction")
{
  const Mesh m = GenerateAnnulus(1.0, 2.0, 8, 1, 0);
  SUBCASE("outer ring")
  {
    const InterfaceRing r = ExtractRing(m, "outer", 2.0);
    CHECK(r.Size() == 8);
    CHECK(r.theta0 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r.radius == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r.node_indices == m.Set("outer"));
  }
  SUBCASE("radial perturbation beyond tolerance")
  {
    auto nodes = m.Nodes();
    const Index v = m.Set("outer")[3];
    const double tol = 1e-9 * 2.0;
    auto &q = nodes[static_cast<std::size_t>(v)];
    const double s = 1.0 + 10.0 * tol / 2.0;
    q = {q.x * s, q.y * s};
    const Mesh bad(nodes, m.Triangles(), m.RegionTags(), m.Sets());
    CHECK(CodeOf([&] { ExtractRing(bad, "outer", 2.0); }) == ErrorCode::UnsupportedGrid);
  }
  SUBCASE("rotated ring records theta0")
  {
    auto nodes = m.Nodes();
    const double c = std::cos(kPi / 8.0), s = std::sin(kPi / 8.0);
    for (auto &q : nodes)
    {
      q = {c * q.x - s * q.y, s * q.x + c * q.y};
    }
    const Mesh rot(nodes, m.Triangles(), m.RegionTags(), m.Sets());
    const InterfaceRing r = ExtractRing(rot, "outer", 2.0);
    CHECK(r.theta0 == doctest::Approx(kPi / 8.0).epsilon(1e-12));
    CHECK(r.node_indices == m.Set("outer"));
  }
  SUBCASE("non-equidistant spacing")
  {
    auto nodes = m.Nodes();
    const Index v = m.Set("outer")[2];
    auto &q = nodes[static_cast<std::size_t>(v)];
    const double a = 2.0 * kPi * 2.0 / 8.0 + 0.05;
    q = {2.0 * std::cos(a), 2.0 * std::sin(a)};
    const Mesh bad(nodes, m.Triangles(), m.RegionTags(), m.Sets());
    CHECK(CodeOf([&] { ExtractRing(bad, "outer", 2.0); }) == ErrorCode::UnsupportedGrid);
  }
  SUBCASE("missing set")
  {
    CHECK(CodeOf([&] { ExtractRing(m, "gap", 2.0); }) == ErrorCode::Configuration);
  }
}
