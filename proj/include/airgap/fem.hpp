// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_FEM_HPP
#define AIRGAP_FEM_HPP

#include <map>
#include <memory>
#include <span>
#include <vector>
#include "airgap/mesh.hpp"

namespace airgap
{

//
// Compressed sparse row matrix. Built from triplets with a fixed summation order so that
// repeated assembly is bit-identical; explicit zeros are dropped.
//
class SparseMatrix
{
public:
  struct Triplet
  {
    Index row, col;
    double value;
  };

  SparseMatrix() = default;
  SparseMatrix(std::size_t size, std::vector<Triplet> triplets);

  std::size_t Size() const { return size_; }
  std::size_t NumNonZeros() const { return values_.size(); }

  const std::vector<std::size_t> &RowPtr() const { return row_ptr_; }
  const std::vector<Index> &ColIdx() const { return col_idx_; }
  const std::vector<double> &Values() const { return values_; }

  double operator()(Index i, Index j) const;

  // y = A x
  void Mult(std::span<const double> x, std::span<double> y) const;
  // y += a A x
  void AddMult(std::span<const double> x, std::span<double> y, double a = 1.0) const;

  // a A + b B over the union pattern.
  static SparseMatrix Combine(double a, const SparseMatrix &A, double b, const SparseMatrix &B);

  std::vector<double> Diagonal() const;

  // Max |A_ij - A_ji| relative to max |A_ij|.
  double SymmetryError() const;

  bool operator==(const SparseMatrix &) const = default;

private:
  std::size_t size_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

struct Material
{
  double nu = 0.0;               // reluctivity (m/H)
  double sigma = 0.0;            // conductivity (S/m)
  double current_density = 0.0;  // applied J_z (A/m^2)
};

using MaterialTable = std::map<int, Material>;

SparseMatrix AssembleStiffness(const Mesh &mesh, const MaterialTable &materials);
SparseMatrix AssembleMass(const Mesh &mesh, const MaterialTable &materials);
std::vector<double> AssembleLoad(const Mesh &mesh, const MaterialTable &materials);

struct DirichletValue
{
  Index node;
  double value;
};

// Sorted, duplicate-free constraint set. Duplicates with equal values merge; conflicting
// values throw a configuration error.
class DirichletSet
{
public:
  DirichletSet() = default;
  explicit DirichletSet(std::vector<DirichletValue> values);

  const std::vector<DirichletValue> &Values() const { return values_; }
  bool Empty() const { return values_.empty(); }
  std::size_t Size() const { return values_.size(); }
  bool Contains(Index node) const;

private:
  std::vector<DirichletValue> values_;
};

//
// Symmetric elimination of Dirichlet constraints: constrained rows and columns of the
// matrix are replaced by the identity, and right-hand sides are lifted by the constrained
// columns so that prescribed values are reproduced exactly.
//
class ConstrainedSystem
{
public:
  ConstrainedSystem() = default;
  ConstrainedSystem(const SparseMatrix &A, const DirichletSet &bc);

  const SparseMatrix &Matrix() const { return matrix_; }
  const DirichletSet &Constraints() const { return bc_; }

  // b - A_{:,D} u_D on free rows, u_D on constrained rows.
  std::vector<double> Rhs(std::span<const double> b) const;

private:
  SparseMatrix matrix_;
  SparseMatrix lift_;  // constrained columns restricted to free rows
  DirichletSet bc_;
};

//
// One FE model part (stator or rotor) with its assembled matrices, load, Dirichlet data and
// the interface ring towards the air gap.
//
struct FeSubdomain
{
  std::shared_ptr<const Mesh> mesh;
  SparseMatrix K;
  SparseMatrix M;
  std::vector<double> f;
  DirichletSet dirichlet;
  InterfaceRing ring;

  std::size_t Size() const { return f.size(); }
};

// Assembles K, M, f and validates that no constraint sits on a ring node.
FeSubdomain MakeSubdomain(std::shared_ptr<const Mesh> mesh, const MaterialTable &materials,
                          InterfaceRing ring, DirichletSet dirichlet);

ConstrainedSystem ApplyDirichlet(const FeSubdomain &sub);

// Ring selection Q and its transpose.
void Restrict(std::span<const double> u, const InterfaceRing &ring, std::span<double> ring_u);
void Prolongate(std::span<const double> ring_g, const InterfaceRing &ring,
                std::span<double> g);
std::vector<double> Restrict(std::span<const double> u, const InterfaceRing &ring);
std::vector<double> Prolongate(std::span<const double> ring_g, const InterfaceRing &ring,
                               std::size_t size);

}  // namespace airgap

#endif  // AIRGAP_FEM_HPP
