// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>
#include <random>
#include <Eigen/Dense>
#include <doctest.h>
#include "airgap/error.hpp"
#include "airgap/fem.hpp"
#include "oracles.hpp"

using namespace airgap;

namespace
{

Mesh UnitTriangle()
{
  return Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {0}, {});
}

// Unit square split along the diagonal (1,0)-(0,1).
Mesh UnitSquare()
{
  return Mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 3}, {1, 2, 3}}, {0, 0}, {});
}

Eigen::MatrixXd Dense(const SparseMatrix &A)
{
  const auto n = static_cast<Eigen::Index>(A.Size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    for (Eigen::Index j = 0; j < n; j++)
    {
      D(i, j) = A(static_cast<Index>(i), static_cast<Index>(j));
    }
  }
  return D;
}

// Solves the constrained system densely.
std::vector<double> SolveDense(const ConstrainedSystem &sys, std::span<const double> b)
{
  const auto rhs = sys.Rhs(b);
  const Eigen::VectorXd x =
    Dense(sys.Matrix()).ldlt().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size()));
  return {x.data(), x.data() + x.size()};
}

}  // namespace

TEST_CASE("element matrices of the unit right triangle")
{
  const Mesh m = UnitTriangle();
  const Eigen::MatrixXd K = Dense(AssembleStiffness(m, {{0, {1.0, 0.0, 0.0}}}));
  Eigen::MatrixXd Ke(3, 3);
  Ke << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  CHECK((K - 0.5 * Ke).norm() <= 1e-15);

  const Eigen::MatrixXd M = Dense(AssembleMass(m, {{0, {1.0, 1.0, 0.0}}}));
  Eigen::MatrixXd Me(3, 3);
  Me << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  CHECK((M - Me / 24.0).norm() <= 1e-15);

  const auto f = AssembleLoad(m, {{0, {1.0, 0.0, 3.0}}});
  for (double v : f)
  {
    CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("two-triangle square by hand assembly")
{
  const Mesh m = UnitSquare();
  const Eigen::MatrixXd K = Dense(AssembleStiffness(m, {{0, {2.0, 0.0, 0.0}}}));
  // Triangle (0,1,3) is the unit right triangle; (1,2,3) is its point reflection.
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(4, 4);
  const int t1[3] = {0, 1, 3}, t2[3] = {2, 3, 1};
  const double ke[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
  for (int a = 0; a < 3; a++)
  {
    for (int b = 0; b < 3; b++)
    {
      H(t1[a], t1[b]) += 2.0 * ke[a][b];
      H(t2[a], t2[b]) += 2.0 * ke[a][b];
    }
  }
  CHECK((K - H).norm() <= 1e-14);
}

TEST_CASE("assembly invariants on an annulus")
{
  const Mesh m = GenerateAnnulus(0.02, 0.04, 32, 4, 1);
  const MaterialTable mat{{1, {1.0 / 4e-7, 1.0, 2.0}}};
  const SparseMatrix K = AssembleStiffness(m, mat);
  const SparseMatrix M = AssembleMass(m, mat);
  const auto f = AssembleLoad(m, mat);

  CHECK(K.SymmetryError() <= 1e-14);
  CHECK(M.SymmetryError() <= 1e-14);
  for (double v : K.Values())
  {
    CHECK(v != 0.0);
  }

  std::vector<double> one(K.Size(), 1.0), y(K.Size());
  K.Mult(one, y);
  double kmax = 0.0;
  for (double v : K.Values())
  {
    kmax = std::max(kmax, std::abs(v));
  }
  for (double v : y)
  {
    CHECK(std::abs(v) <= 1e-12 * kmax);
  }

  double msum = 0.0, fsum = 0.0;
  for (double v : M.Values())
  {
    msum += v;
  }
  for (double v : f)
  {
    fsum += v;
  }
  CHECK(std::abs(msum - m.TotalArea()) <= 1e-10 * m.TotalArea());
  CHECK(std::abs(fsum - 2.0 * m.TotalArea()) <= 1e-10 * 2.0 * m.TotalArea());

  CHECK(AssembleStiffness(m, mat) == K);
  const SparseMatrix M0 = AssembleMass(m, {{1, {1.0, 0.0, 0.0}}});
  for (double v : M0.Values())
  {
    CHECK(v == 0.0);
  }
  const auto f0 = AssembleLoad(m, {{1, {1.0, 0.0, 0.0}}});
  for (double v : f0)
  {
    CHECK(v == 0.0);
  }
}

TEST_CASE("missing material tag")
{
  const Mesh m = GenerateAnnulus(1.0, 2.0, 8, 1, 3);
  try
  {
    AssembleStiffness(m, {{1, {1.0, 0.0, 0.0}}});
    FAIL("expected a configuration error");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::Configuration);
  }
}

TEST_CASE("Dirichlet elimination")
{
  const Mesh m = GenerateAnnulus(1.0, 2.0, 16, 3, 0);
  const MaterialTable mat{{0, {1.0, 0.0, 0.0}}};
  const SparseMatrix K = AssembleStiffness(m, mat);
  const std::vector<double> zero(K.Size(), 0.0);

  SUBCASE("all nodes constrained")
  {
    std::vector<DirichletValue> all;
    for (std::size_t i = 0; i < m.NumNodes(); i++)
    {
      all.push_back({static_cast<Index>(i), 0.75});
    }
    const auto u = SolveDense(ConstrainedSystem(K, DirichletSet(all)), zero);
    for (double v : u)
    {
      CHECK(v == 0.75);
    }
  }
  SUBCASE("no constraints leaves the system unchanged")
  {
    const ConstrainedSystem sys(K, DirichletSet{});
    CHECK(sys.Matrix() == K);
  }
  SUBCASE("conflicting duplicates")
  {
    try
    {
      DirichletSet({{0, 1.0}, {0, 2.0}});
      FAIL("expected a configuration error");
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::Configuration);
    }
    CHECK(DirichletSet({{0, 1.0}, {0, 1.0}}).Size() == 1);
  }
  SUBCASE("constrained operator is symmetric positive definite")
  {
    std::vector<DirichletValue> outer;
    for (Index v : m.Set("outer"))
    {
      outer.push_back({v, 0.0});
    }
    const ConstrainedSystem sys(K, DirichletSet(outer));
    CHECK(sys.Matrix().SymmetryError() <= 1e-14);
    const Eigen::VectorXd ev = Dense(sys.Matrix()).selfadjointView<Eigen::Lower>().eigenvalues();
    CHECK(ev.minCoeff() > 0.0);
  }
  SUBCASE("patch test reproduces a linear field")
  {
    const double a = 0.3, b = -1.7, c = 0.2;
    std::vector<DirichletValue> bc;
    for (const char *name : {"inner", "outer"})
    {
      for (Index v : m.Set(name))
      {
        const auto &q = m.Nodes()[static_cast<std::size_t>(v)];
        bc.push_back({v, a * q.x + b * q.y + c});
      }
    }
    const auto u = SolveDense(ConstrainedSystem(K, DirichletSet(bc)), zero);
    for (std::size_t i = 0; i < m.NumNodes(); i++)
    {
      const auto &q = m.Nodes()[i];
      CHECK(std::abs(u[i] - (a * q.x + b * q.y + c)) <= 1e-12);
    }
  }
}

TEST_CASE("two-triangle strip with opposite end values")
{
  // Nodes 0,3 at x = 0 (u = 0) and 1,2 at x = 1 (u = 1) of the unit square; add a midpoint
  // column by using a 2x1 strip.
  const Mesh m({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}},
               {{0, 1, 3}, {1, 4, 3}, {1, 2, 4}, {2, 5, 4}}, {0, 0, 0, 0}, {});
  const SparseMatrix K = AssembleStiffness(m, {{0, {1.0, 0.0, 0.0}}});
  const DirichletSet bc({{0, 0.0}, {3, 0.0}, {2, 1.0}, {5, 1.0}});
  const auto u = SolveDense(ConstrainedSystem(K, bc), std::vector<double>(6, 0.0));
  CHECK(u[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(u[4] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("subdomain assembly rejects constraints on ring nodes")
{
  auto mesh = std::make_shared<const Mesh>(GenerateAnnulus(1.0, 2.0, 8, 2, 0));
  const MaterialTable mat{{0, {1.0, 0.0, 0.0}}};
  const InterfaceRing ring = ExtractRing(*mesh, "outer", 2.0);
  try
  {
    MakeSubdomain(mesh, mat, ring, DirichletSet({{mesh->Set("outer")[0], 0.0}}));
    FAIL("expected a configuration error");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::Configuration);
  }
}

TEST_CASE("ring restriction and prolongation")
{
  const Mesh m = GenerateAnnulus(1.0, 2.0, 8, 2, 0);
  const InterfaceRing ring = ExtractRing(m, "outer", 2.0);
  std::mt19937_64 rng(7);
  const auto g = oracle::RandomVector(ring.Size(), rng);
  CHECK(Restrict(Prolongate(g, ring, m.NumNodes()), ring) == g);

  std::vector<double> e(m.NumNodes(), 0.0);
  e[static_cast<std::size_t>(ring.node_indices[5])] = 1.0;
  const auto r = Restrict(e, ring);
  for (std::size_t p = 0; p < r.size(); p++)
  {
    CHECK(r[p] == (p == 5 ? 1.0 : 0.0));
  }
  std::fill(e.begin(), e.end(), 0.0);
  e[static_cast<std::size_t>(m.Set("inner")[0])] = 1.0;
  for (double v : Restrict(e, ring))
  {
    CHECK(v == 0.0);
  }
  InterfaceRing bad = ring;
  bad.node_indices[0] = static_cast<Index>(m.NumNodes());
  std::vector<double> out(bad.Size());
  try
  {
    Restrict(e, bad, out);
    FAIL("expected an internal error");
  }
  catch (const Error &err)
  {
    CHECK(err.code() == ErrorCode::Internal);
  }
}
