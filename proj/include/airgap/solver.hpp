// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_SOLVER_HPP
#define AIRGAP_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>
#include "airgap/air_gap_element.hpp"
#include "airgap/fem.hpp"
#include "airgap/harmonics.hpp"
#include "airgap/postproc.hpp"

namespace airgap
{

using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

struct SolveStats
{
  int iterations = 0;
  std::vector<double> residual_history;  // ||r_k|| / ||b||, k = 0..iterations
  double wall_time = 0.0;                // s
  bool converged = false;
};

struct PcgOptions
{
  double tol = 1e-10;
  int max_iterations = 0;  // 0 selects 10 * dimension
  // Called after every iteration with the iteration index and relative residual.
  std::function<void(int, double)> on_iterate;
};

// Preconditioned conjugate gradients; x holds the initial guess on entry. An empty
// preconditioner runs plain CG. Breakdown (p^T A p <= 0) throws a solver error.
SolveStats Pcg(const LinearMap &A, const LinearMap &Minv, std::span<const double> b,
               std::span<double> x, const PcgOptions &options = {});

//
// Coupled stator/rotor system (beta M + K + K_ag) u = f with the unknowns ordered
// [u_st; u_rt]. Dirichlet constraints are eliminated symmetrically per subdomain; ring
// nodes are never constrained, so K_ag needs no lifting.
//
class CoupledSystem
{
public:
  CoupledSystem(FeSubdomain stator, FeSubdomain rotor, AirGapOperator op, double beta = 0.0);

  std::size_t Size() const { return stator_.Size() + rotor_.Size(); }
  std::size_t StatorSize() const { return stator_.Size(); }
  std::size_t RotorSize() const { return rotor_.Size(); }

  double Beta() const { return beta_; }
  void SetBeta(double beta);

  const FeSubdomain &Stator() const { return stator_; }
  const FeSubdomain &Rotor() const { return rotor_; }
  const ConstrainedSystem &StatorSystem() const { return stator_sys_; }
  const ConstrainedSystem &RotorSystem() const { return rotor_sys_; }
  AirGapOperator &Operator() { return op_; }
  const AirGapOperator &Operator() const { return op_; }

  // y = A v for the constrained operator.
  void Apply(std::span<const double> v, std::span<double> y) const;
  LinearMap AsMap() const;

  // Constrained right-hand side of a full load vector b = [b_st; b_rt].
  std::vector<double> Rhs(std::span<const double> b) const;
  // Assembled load [f_st; f_rt].
  std::vector<double> Load() const;

  // y = (beta_x M + K + K_ag) v without constraints (time-stepping right-hand sides).
  void ApplyUnconstrained(double beta_x, std::span<const double> v, std::span<double> y) const;

  // Ring potentials of a combined vector.
  std::vector<double> StatorRing(std::span<const double> u) const;
  std::vector<double> RotorRing(std::span<const double> u) const;

private:
  void Rebuild();

  FeSubdomain stator_, rotor_;
  AirGapOperator op_;
  double beta_ = 0.0;
  ConstrainedSystem stator_sys_, rotor_sys_;
};

enum class FeBlockSolver
{
  GaussSeidel,  // symmetric Gauss-Seidel sweeps
  Cholesky      // sparse LDL^T of each side's interior block
};

struct PreconditionerOptions
{
  FeBlockSolver fe_block = FeBlockSolver::GaussSeidel;
  int gs_sweeps = 2;
  // Fold a circulant fit of the FE ring stiffness into the ring inverse.
  bool ring_stiffness = true;
};

//
// Additive Schwarz preconditioner: an FE block solve on the unknowns away from the rings,
// the air-gap approximate inverse on ring harmonics in the set, and a per-order circulant
// scaling of the remaining ring content (order 0, Nyquist, unselected orders).
//
class SchwarzPreconditioner
{
public:
  explicit SchwarzPreconditioner(const CoupledSystem &system,
                                 const PreconditionerOptions &options = {});
  ~SchwarzPreconditioner();
  SchwarzPreconditioner(const SchwarzPreconditioner &) = delete;
  SchwarzPreconditioner &operator=(const SchwarzPreconditioner &) = delete;

  void Apply(std::span<const double> r, std::span<double> z) const;
  LinearMap AsMap() const;

  const std::vector<char> &RingMask() const { return ring_mask_; }

private:
  struct Factor;
  // Circulant symbol a0 + 2 a1 cos(2 pi l / n) of one ring block.
  struct RingSymbol
  {
    double a0 = 0.0, a1 = 0.0;
    std::size_t n = 0;
    double At(double l) const;
  };

  void GaussSeidel(const SparseMatrix &A, std::size_t offset, std::span<const double> r,
                   std::span<double> z) const;
  void Complement(const RingTransform &fft, const RingSymbol &sym, std::span<const double> g,
                  std::span<double> u) const;

  const CoupledSystem &system_;
  PreconditionerOptions options_;
  std::vector<char> ring_mask_;  // combined layout
  std::unique_ptr<Factor> factor_st_, factor_rt_;
  RingSymbol sym_st_, sym_rt_;
  std::vector<double> shift_st_, shift_rt_;
  RingTransform fft_st_, fft_rt_;
};

struct StaticResult
{
  std::vector<double> u;
  SolveStats stats;
};

struct SolverOptions
{
  double tol = 1e-10;
  int max_iterations = 0;
  int gs_sweeps = 2;
  FeBlockSolver fe_block = FeBlockSolver::GaussSeidel;
  bool precondition = true;
};

// Solves (K + K_ag) u = f at the current beta (normally 0) and motion state. Non-convergence
// throws a solver error with the final residual.
StaticResult SolveStatic(CoupledSystem &system, const SolverOptions &options = {},
                         std::span<const double> initial = {});

struct MotionSample
{
  double t = 0.0;
  double alpha = 0.0;      // rad
  double d_ecc = 0.0;      // m
  double gamma_ecc = 0.0;  // rad
};

struct SlewLimits
{
  double alpha = std::numeric_limits<double>::infinity();  // max |delta alpha| per interval
  double ecc = std::numeric_limits<double>::infinity();    // max |delta (d e^{j gamma})| (m)
};

//
// Prescribed rotor motion: rotation angle linear in t, eccentricity linear in its
// Cartesian form d_ecc exp(j gamma_ecc). Held constant outside the sample range.
//
class MotionProfile
{
public:
  MotionProfile() : MotionProfile({MotionSample{}}, 0.0) {}
  MotionProfile(std::vector<MotionSample> samples, double gamma_skew, SlewLimits limits = {});

  MotionSample At(double t) const;
  MotionState StateAt(double t, double rho_rt) const;
  double GammaSkew() const { return gamma_skew_; }
  const std::vector<MotionSample> &Samples() const { return samples_; }

private:
  std::vector<MotionSample> samples_;
  double gamma_skew_ = 0.0;
};

enum class InitialCondition
{
  Static,  // static solution at the initial motion state
  Zero
};

struct TransientOptions
{
  double dt = 0.0;
  double t_end = 0.0;
  double theta = 1.0;
  InitialCondition initial = InitialCondition::Static;
  SolverOptions solver;
  // Called after each accepted step (step 0 is the initial state).
  std::function<void(int step, double t, std::span<const double> u)> on_step;
};

struct TransientResult
{
  std::vector<ForceTorqueSample> samples;  // one per step including t = 0
  std::vector<SolveStats> stats;
  std::vector<double> u;                   // final state
  std::vector<std::uint64_t> stator_checksums, rotor_checksums;
};

ForceTorqueSample EvaluateSample(const CoupledSystem &system, std::span<const double> u, double t,
                                 const MotionSample &motion, int iterations);

// theta-method with beta = 1/(theta dt); each step warm-starts from the previous solution.
// Non-convergence throws a solver error naming the step.
TransientResult SolveTransient(CoupledSystem &system, const MotionProfile &profile,
                               const TransientOptions &options);

}  // namespace airgap

#endif  // AIRGAP_SOLVER_HPP
