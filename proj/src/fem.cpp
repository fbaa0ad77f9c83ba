// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include "airgap/fem.hpp"

#include <algorithm>
#include <cmath>
#include "airgap/error.hpp"

namespace airgap
{

SparseMatrix::SparseMatrix(std::size_t size, std::vector<Triplet> triplets) : size_(size)
{
  // Stable sort keeps the insertion order of duplicates, which fixes the summation order.
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet &a, const Triplet &b)
                   { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  row_ptr_.assign(size + 1, 0);
  for (std::size_t k = 0; k < triplets.size();)
  {
    const Triplet &t = triplets[k];
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= size ||
        static_cast<std::size_t>(t.col) >= size)
    {
      Throw(ErrorCode::Internal, "sparse triplet out of range");
    }
    double sum = 0.0;
    std::size_t m = k;
    for (; m < triplets.size() && triplets[m].row == t.row && triplets[m].col == t.col; m++)
    {
      sum += triplets[m].value;
    }
    if (sum != 0.0)
    {
      col_idx_.push_back(t.col);
      values_.push_back(sum);
      row_ptr_[t.row + 1]++;
    }
    k = m;
  }
  for (std::size_t i = 0; i < size; i++)
  {
    row_ptr_[i + 1] += row_ptr_[i];
  }
}

double SparseMatrix::operator()(Index i, Index j) const
{
  auto begin = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  auto end = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  auto it = std::lower_bound(begin, end, j);
  return (it != end && *it == j) ? values_[static_cast<std::size_t>(it - col_idx_.begin())]
                                 : 0.0;
}

void SparseMatrix::Mult(std::span<const double> x, std::span<double> y) const
{
  std::fill(y.begin(), y.end(), 0.0);
  AddMult(x, y, 1.0);
}

void SparseMatrix::AddMult(std::span<const double> x, std::span<double> y, double a) const
{
  if (x.size() != size_ || y.size() != size_)
  {
    Throw(ErrorCode::Internal, "sparse matrix-vector dimension mismatch");
  }
  for (std::size_t i = 0; i < size_; i++)
  {
    double sum = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; k++)
    {
      sum += values_[k] * x[col_idx_[k]];
    }
    y[i] += a * sum;
  }
}

SparseMatrix SparseMatrix::Combine(double a, const SparseMatrix &A, double b,
                                   const SparseMatrix &B)
{
  if (A.size_ != B.size_)
  {
    Throw(ErrorCode::Internal, "sparse combine dimension mismatch");
  }
  std::vector<Triplet> t;
  t.reserve(A.NumNonZeros() + B.NumNonZeros());
  for (std::size_t i = 0; i < A.size_; i++)
  {
    for (std::size_t k = A.row_ptr_[i]; k < A.row_ptr_[i + 1]; k++)
    {
      t.push_back({static_cast<Index>(i), A.col_idx_[k], a * A.values_[k]});
    }
    for (std::size_t k = B.row_ptr_[i]; k < B.row_ptr_[i + 1]; k++)
    {
      t.push_back({static_cast<Index>(i), B.col_idx_[k], b * B.values_[k]});
    }
  }
  return SparseMatrix(A.size_, std::move(t));
}

std::vector<double> SparseMatrix::Diagonal() const
{
  std::vector<double> d(size_);
  for (std::size_t i = 0; i < size_; i++)
  {
    d[i] = (*this)(static_cast<Index>(i), static_cast<Index>(i));
  }
  return d;
}

double SparseMatrix::SymmetryError() const
{
  double max_entry = 0.0, max_diff = 0.0;
  for (std::size_t i = 0; i < size_; i++)
  {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; k++)
    {
      max_entry = std::max(max_entry, std::abs(values_[k]));
      max_diff = std::max(max_diff,
                          std::abs(values_[k] - (*this)(col_idx_[k], static_cast<Index>(i))));
    }
  }
  return max_entry > 0.0 ? max_diff / max_entry : 0.0;
}

namespace
{

const Material &Lookup(const MaterialTable &materials, int tag)
{
  auto it = materials.find(tag);
  if (it == materials.end())
  {
    Throw(ErrorCode::Configuration, "no material for region tag " + std::to_string(tag));
  }
  return it->second;
}

// Constant gradients of the three hat functions, scaled by twice the area.
std::array<std::array<double, 2>, 3> HatGradients(const Mesh &mesh, std::size_t t)
{
  const auto &tri = mesh.Triangles()[t];
  const Point2 &a = mesh.Nodes()[tri[0]], &b = mesh.Nodes()[tri[1]], &c = mesh.Nodes()[tri[2]];
  return {{{b.y - c.y, c.x - b.x}, {c.y - a.y, a.x - c.x}, {a.y - b.y, b.x - a.x}}};
}

}  // namespace

SparseMatrix AssembleStiffness(const Mesh &mesh, const MaterialTable &materials)
{
  std::vector<SparseMatrix::Triplet> t;
  t.reserve(9 * mesh.NumTriangles());
  for (std::size_t e = 0; e < mesh.NumTriangles(); e++)
  {
    const double nu = Lookup(materials, mesh.RegionTags()[e]).nu;
    const double area = mesh.TriangleArea(e);
    const auto grad = HatGradients(mesh, e);
    const auto &tri = mesh.Triangles()[e];
    for (int i = 0; i < 3; i++)
    {
      for (int j = 0; j < 3; j++)
      {
        const double g = grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1];
        t.push_back({tri[i], tri[j], nu * g / (4.0 * area)});
      }
    }
  }
  return SparseMatrix(mesh.NumNodes(), std::move(t));
}

SparseMatrix AssembleMass(const Mesh &mesh, const MaterialTable &materials)
{
  std::vector<SparseMatrix::Triplet> t;
  for (std::size_t e = 0; e < mesh.NumTriangles(); e++)
  {
    const double sigma = Lookup(materials, mesh.RegionTags()[e]).sigma;
    if (sigma == 0.0)
    {
      continue;
    }
    const double area = mesh.TriangleArea(e);
    const auto &tri = mesh.Triangles()[e];
    for (int i = 0; i < 3; i++)
    {
      for (int j = 0; j < 3; j++)
      {
        t.push_back({tri[i], tri[j], sigma * area * (i == j ? 2.0 : 1.0) / 12.0});
      }
    }
  }
  return SparseMatrix(mesh.NumNodes(), std::move(t));
}

std::vector<double> AssembleLoad(const Mesh &mesh, const MaterialTable &materials)
{
  std::vector<double> f(mesh.NumNodes(), 0.0);
  for (std::size_t e = 0; e < mesh.NumTriangles(); e++)
  {
    const double J = Lookup(materials, mesh.RegionTags()[e]).current_density;
    const double share = J * mesh.TriangleArea(e) / 3.0;
    for (Index v : mesh.Triangles()[e])
    {
      f[v] += share;
    }
  }
  return f;
}

DirichletSet::DirichletSet(std::vector<DirichletValue> values)
{
  std::stable_sort(values.begin(), values.end(),
                   [](const DirichletValue &a, const DirichletValue &b) { return a.node < b.node; });
  for (const auto &v : values)
  {
    if (!values_.empty() && values_.back().node == v.node)
    {
      if (values_.back().value != v.value)
      {
        Throw(ErrorCode::Configuration,
              "conflicting Dirichlet values at node " + std::to_string(v.node));
      }
      continue;
    }
    values_.push_back(v);
  }
}

bool DirichletSet::Contains(Index node) const
{
  return std::binary_search(values_.begin(), values_.end(), DirichletValue{node, 0.0},
                            [](const DirichletValue &a, const DirichletValue &b)
                            { return a.node < b.node; });
}

ConstrainedSystem::ConstrainedSystem(const SparseMatrix &A, const DirichletSet &bc) : bc_(bc)
{
  const std::size_t n = A.Size();
  std::vector<char> fixed(n, 0);
  for (const auto &v : bc.Values())
  {
    if (v.node < 0 || static_cast<std::size_t>(v.node) >= n)
    {
      Throw(ErrorCode::Configuration, "Dirichlet node " + std::to_string(v.node) +
                                          " does not exist");
    }
    fixed[v.node] = 1;
  }
  std::vector<SparseMatrix::Triplet> kept, lifted;
  for (std::size_t i = 0; i < n; i++)
  {
    const auto row = static_cast<Index>(i);
    if (fixed[i])
    {
      kept.push_back({row, row, 1.0});
      continue;
    }
    for (std::size_t k = A.RowPtr()[i]; k < A.RowPtr()[i + 1]; k++)
    {
      const Index col = A.ColIdx()[k];
      (fixed[col] ? lifted : kept).push_back({row, col, A.Values()[k]});
    }
  }
  matrix_ = SparseMatrix(n, std::move(kept));
  lift_ = SparseMatrix(n, std::move(lifted));
}

std::vector<double> ConstrainedSystem::Rhs(std::span<const double> b) const
{
  const std::size_t n = matrix_.Size();
  if (b.size() != n)
  {
    Throw(ErrorCode::Internal, "right-hand side dimension mismatch");
  }
  std::vector<double> ud(n, 0.0), rhs(b.begin(), b.end());
  for (const auto &v : bc_.Values())
  {
    ud[v.node] = v.value;
  }
  lift_.AddMult(ud, rhs, -1.0);
  for (const auto &v : bc_.Values())
  {
    rhs[v.node] = v.value;
  }
  return rhs;
}

FeSubdomain MakeSubdomain(std::shared_ptr<const Mesh> mesh, const MaterialTable &materials,
                          InterfaceRing ring, DirichletSet dirichlet)
{
  for (Index v : ring.node_indices)
  {
    if (v < 0 || static_cast<std::size_t>(v) >= mesh->NumNodes())
    {
      Throw(ErrorCode::Internal, "ring index out of range");
    }
    if (dirichlet.Contains(v))
    {
      Throw(ErrorCode::Configuration, "Dirichlet constraint on interface ring node " +
                                          std::to_string(v) + " is not supported");
    }
  }
  for (const auto &v : dirichlet.Values())
  {
    if (v.node < 0 || static_cast<std::size_t>(v.node) >= mesh->NumNodes())
    {
      Throw(ErrorCode::Configuration, "Dirichlet node " + std::to_string(v.node) +
                                          " does not exist");
    }
  }
  FeSubdomain sub;
  sub.K = AssembleStiffness(*mesh, materials);
  sub.M = AssembleMass(*mesh, materials);
  sub.f = AssembleLoad(*mesh, materials);
  sub.mesh = std::move(mesh);
  sub.dirichlet = std::move(dirichlet);
  sub.ring = std::move(ring);
  return sub;
}

ConstrainedSystem ApplyDirichlet(const FeSubdomain &sub)
{
  return ConstrainedSystem(sub.K, sub.dirichlet);
}

void Restrict(std::span<const double> u, const InterfaceRing &ring, std::span<double> ring_u)
{
  if (ring_u.size() != ring.Size())
  {
    Throw(ErrorCode::Internal, "ring vector size mismatch");
  }
  for (std::size_t p = 0; p < ring.Size(); p++)
  {
    const auto v = static_cast<std::size_t>(ring.node_indices[p]);
    if (v >= u.size())
    {
      Throw(ErrorCode::Internal, "ring index out of range");
    }
    ring_u[p] = u[v];
  }
}

void Prolongate(std::span<const double> ring_g, const InterfaceRing &ring, std::span<double> g)
{
  if (ring_g.size() != ring.Size())
  {
    Throw(ErrorCode::Internal, "ring vector size mismatch");
  }
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t p = 0; p < ring.Size(); p++)
  {
    const auto v = static_cast<std::size_t>(ring.node_indices[p]);
    if (v >= g.size())
    {
      Throw(ErrorCode::Internal, "ring index out of range");
    }
    g[v] = ring_g[p];
  }
}

std::vector<double> Restrict(std::span<const double> u, const InterfaceRing &ring)
{
  std::vector<double> r(ring.Size());
  Restrict(u, ring, r);
  return r;
}

std::vector<double> Prolongate(std::span<const double> ring_g, const InterfaceRing &ring,
                               std::size_t size)
{
  std::vector<double> g(size);
  Prolongate(ring_g, ring, g);
  return g;
}

}  // namespace airgap
