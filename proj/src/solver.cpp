// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include "airgap/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <Eigen/SparseCholesky>
#include "airgap/error.hpp"

namespace airgap
{

namespace
{

double Dot(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); i++)
  {
    s += a[i] * b[i];
  }
  return s;
}

std::string Sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

SolveStats Pcg(const LinearMap &A, const LinearMap &Minv, std::span<const double> b,
               std::span<double> x, const PcgOptions &options)
{
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  if (x.size() != n)
  {
    Throw(ErrorCode::Internal, "PCG dimension mismatch");
  }
  SolveStats stats;
  const int maxit = options.max_iterations > 0 ? options.max_iterations : 10 * int(n);
  auto finish = [&]
  {
    stats.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return stats;
  };

  const double bnorm = std::sqrt(Dot(b, b));
  if (bnorm == 0.0)
  {
    std::fill(x.begin(), x.end(), 0.0);
    stats.residual_history.push_back(0.0);
    stats.converged = true;
    return finish();
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  A(x, q);
  for (std::size_t i = 0; i < n; i++)
  {
    r[i] = b[i] - q[i];
  }
  double rel = std::sqrt(Dot(r, r)) / bnorm;
  stats.residual_history.push_back(rel);
  if (rel <= options.tol)
  {
    stats.converged = true;
    return finish();
  }
  auto precondition = [&]
  {
    if (Minv)
    {
      Minv(r, z);
    }
    else
    {
      std::copy(r.begin(), r.end(), z.begin());
    }
  };
  precondition();
  p = z;
  double rz = Dot(r, z);
  if (!(rz > 0.0))
  {
    Throw(ErrorCode::Solver, "PCG breakdown: preconditioner is not positive definite");
  }
  for (int k = 1; k <= maxit; k++)
  {
    A(p, q);
    const double pq = Dot(p, q);
    if (!(pq > 0.0))
    {
      Throw(ErrorCode::Solver,
            "PCG breakdown at iteration " + std::to_string(k) + ": p^T A p = " + Sci(pq) +
                " <= 0; the system is not positive definite (check the air-gap sign "
                "convention and that both subdomains carry a Dirichlet constraint)");
    }
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; i++)
    {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rel = std::sqrt(Dot(r, r)) / bnorm;
    stats.residual_history.push_back(rel);
    stats.iterations = k;
    if (options.on_iterate)
    {
      options.on_iterate(k, rel);
    }
    if (rel <= options.tol)
    {
      stats.converged = true;
      break;
    }
    precondition();
    const double rz_next = Dot(r, z);
    if (!(rz_next > 0.0))
    {
      Throw(ErrorCode::Solver, "PCG breakdown: preconditioner is not positive definite");
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; i++)
    {
      p[i] = z[i] + beta * p[i];
    }
  }
  return finish();
}

CoupledSystem::CoupledSystem(FeSubdomain stator, FeSubdomain rotor, AirGapOperator op,
                             double beta)
  : stator_(std::move(stator)), rotor_(std::move(rotor)), op_(std::move(op)), beta_(beta)
{
  if (stator_.dirichlet.Empty() || rotor_.dirichlet.Empty())
  {
    Throw(ErrorCode::Configuration,
          std::string(stator_.dirichlet.Empty() ? "stator" : "rotor") +
              " subdomain needs at least one Dirichlet constraint (order-0 potential is not "
              "coupled through the air gap)");
  }
  if (stator_.ring.node_indices != op_.StatorRing().node_indices ||
      rotor_.ring.node_indices != op_.RotorRing().node_indices)
  {
    Throw(ErrorCode::Configuration, "air-gap operator rings do not match the subdomain rings");
  }
  double total = 0.0, scale = 0.0;
  for (double v : rotor_.f)
  {
    total += v;
    scale += std::abs(v);
  }
  if (std::abs(total) > 1e-9 * scale)
  {
    Throw(ErrorCode::Configuration, "nonzero total rotor current " + Sci(total) +
                                        " A (circuit coupling is not supported)");
  }
  Rebuild();
}

void CoupledSystem::SetBeta(double beta)
{
  if (!(beta >= 0.0) || !std::isfinite(beta))
  {
    Throw(ErrorCode::InvalidArgument, "time-integration factor must be finite and >= 0");
  }
  if (beta != beta_)
  {
    beta_ = beta;
    Rebuild();
  }
}

void CoupledSystem::Rebuild()
{
  stator_sys_ = ConstrainedSystem(SparseMatrix::Combine(beta_, stator_.M, 1.0, stator_.K),
                                  stator_.dirichlet);
  rotor_sys_ = ConstrainedSystem(SparseMatrix::Combine(beta_, rotor_.M, 1.0, rotor_.K),
                                 rotor_.dirichlet);
}

void CoupledSystem::Apply(std::span<const double> v, std::span<double> y) const
{
  if (v.size() != Size() || y.size() != Size())
  {
    Throw(ErrorCode::Internal, "coupled system dimension mismatch");
  }
  const std::size_t ns = StatorSize();
  auto vs = v.first(ns), vr = v.subspan(ns);
  auto ys = y.first(ns), yr = y.subspan(ns);
  op_.Apply(vs, vr, ys, yr);
  stator_sys_.Matrix().AddMult(vs, ys);
  rotor_sys_.Matrix().AddMult(vr, yr);
}

LinearMap CoupledSystem::AsMap() const
{
  return [this](std::span<const double> v, std::span<double> y) { Apply(v, y); };
}

void CoupledSystem::ApplyUnconstrained(double beta_x, std::span<const double> v,
                                       std::span<double> y) const
{
  if (v.size() != Size() || y.size() != Size())
  {
    Throw(ErrorCode::Internal, "coupled system dimension mismatch");
  }
  const std::size_t ns = StatorSize();
  auto vs = v.first(ns), vr = v.subspan(ns);
  auto ys = y.first(ns), yr = y.subspan(ns);
  op_.Apply(vs, vr, ys, yr);
  stator_.K.AddMult(vs, ys);
  rotor_.K.AddMult(vr, yr);
  if (beta_x != 0.0)
  {
    stator_.M.AddMult(vs, ys, beta_x);
    rotor_.M.AddMult(vr, yr, beta_x);
  }
}

std::vector<double> CoupledSystem::Rhs(std::span<const double> b) const
{
  if (b.size() != Size())
  {
    Throw(ErrorCode::Internal, "right-hand side dimension mismatch");
  }
  auto rs = stator_sys_.Rhs(b.first(StatorSize()));
  auto rr = rotor_sys_.Rhs(b.subspan(StatorSize()));
  rs.insert(rs.end(), rr.begin(), rr.end());
  return rs;
}

std::vector<double> CoupledSystem::Load() const
{
  std::vector<double> f(stator_.f);
  f.insert(f.end(), rotor_.f.begin(), rotor_.f.end());
  return f;
}

std::vector<double> CoupledSystem::StatorRing(std::span<const double> u) const
{
  return Restrict(u.first(StatorSize()), stator_.ring);
}

std::vector<double> CoupledSystem::RotorRing(std::span<const double> u) const
{
  return Restrict(u.subspan(StatorSize()), rotor_.ring);
}

struct SchwarzPreconditioner::Factor
{
  std::vector<Index> interior;  // local index of each factored unknown
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

double SchwarzPreconditioner::RingSymbol::At(double l) const
{
  const double s = a0 + 2.0 * a1 * std::cos(2.0 * std::numbers::pi * l / double(n));
  return std::max(s, 0.25 * a0);
}

SchwarzPreconditioner::SchwarzPreconditioner(const CoupledSystem &system,
                                             const PreconditionerOptions &options)
  : system_(system), options_(options), ring_mask_(system.Size(), 0)
{
  if (options.fe_block == FeBlockSolver::GaussSeidel && options.gs_sweeps < 1)
  {
    Throw(ErrorCode::Configuration, "Gauss-Seidel sweep count must be at least 1");
  }
  const std::size_t ns = system.StatorSize();
  const auto &ring_st = system.Stator().ring;
  const auto &ring_rt = system.Rotor().ring;
  for (Index v : ring_st.node_indices)
  {
    ring_mask_[static_cast<std::size_t>(v)] = 1;
  }
  for (Index v : ring_rt.node_indices)
  {
    ring_mask_[ns + static_cast<std::size_t>(v)] = 1;
  }

  auto fit = [](const SparseMatrix &A, const InterfaceRing &ring)
  {
    RingSymbol sym;
    sym.n = ring.Size();
    for (std::size_t p = 0; p < sym.n; p++)
    {
      const Index v = ring.node_indices[p], w = ring.node_indices[(p + 1) % sym.n];
      sym.a0 += A(v, v);
      sym.a1 += A(v, w);
    }
    sym.a0 /= double(sym.n);
    sym.a1 /= double(sym.n);
    if (!(sym.a0 > 0.0))
    {
      Throw(ErrorCode::Solver, "non-positive ring diagonal; the system is not positive definite");
    }
    return sym;
  };
  sym_st_ = fit(system.StatorSystem().Matrix(), ring_st);
  sym_rt_ = fit(system.RotorSystem().Matrix(), ring_rt);
  fft_st_ = RingTransform(ring_st.Size(), ring_st.theta0);
  fft_rt_ = RingTransform(ring_rt.Size(), ring_rt.theta0);

  if (options.fe_block == FeBlockSolver::Cholesky)
  {
    auto factor = [](const SparseMatrix &A, const std::vector<char> &mask, std::size_t offset)
    {
      auto f = std::make_unique<Factor>();
      const std::size_t n = A.Size();
      std::vector<Index> pos(n, -1);
      for (std::size_t i = 0; i < n; i++)
      {
        if (!mask[offset + i])
        {
          pos[i] = static_cast<Index>(f->interior.size());
          f->interior.push_back(static_cast<Index>(i));
        }
      }
      std::vector<Eigen::Triplet<double>> trip;
      const auto &rp = A.RowPtr();
      const auto &ci = A.ColIdx();
      const auto &va = A.Values();
      for (std::size_t i = 0; i < n; i++)
      {
        if (pos[i] < 0)
        {
          continue;
        }
        for (std::size_t k = rp[i]; k < rp[i + 1]; k++)
        {
          const Index j = pos[static_cast<std::size_t>(ci[k])];
          if (j >= 0)
          {
            trip.emplace_back(pos[i], j, va[k]);
          }
        }
      }
      const auto m = static_cast<Eigen::Index>(f->interior.size());
      Eigen::SparseMatrix<double> S(m, m);
      S.setFromTriplets(trip.begin(), trip.end());
      f->ldlt.compute(S);
      if (f->ldlt.info() != Eigen::Success || (f->ldlt.vectorD().array() <= 0.0).any())
      {
        Throw(ErrorCode::Solver, "interior FE block is not positive definite");
      }
      return f;
    };
    factor_st_ = factor(system.StatorSystem().Matrix(), ring_mask_, 0);
    factor_rt_ = factor(system.RotorSystem().Matrix(), ring_mask_, ns);
  }
  if (options.ring_stiffness)
  {
    for (int l : system.Operator().Harmonics().Orders())
    {
      shift_st_.push_back(sym_st_.At(l));
      shift_rt_.push_back(sym_rt_.At(l));
    }
  }
}

SchwarzPreconditioner::~SchwarzPreconditioner() = default;

void SchwarzPreconditioner::GaussSeidel(const SparseMatrix &A, std::size_t offset,
                                        std::span<const double> r, std::span<double> z) const
{
  const std::size_t n = A.Size();
  const auto &rp = A.RowPtr();
  const auto &ci = A.ColIdx();
  const auto &va = A.Values();
  auto relax = [&](std::size_t i)
  {
    if (ring_mask_[offset + i])
    {
      return;
    }
    double s = r[i], d = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; k++)
    {
      const auto j = static_cast<std::size_t>(ci[k]);
      if (j == i)
      {
        d = va[k];
      }
      else if (!ring_mask_[offset + j])
      {
        s -= va[k] * z[j];
      }
    }
    z[i] = s / d;
  };
  std::fill(z.begin(), z.end(), 0.0);
  for (int s = 0; s < options_.gs_sweeps; s++)
  {
    for (std::size_t i = 0; i < n; i++)
    {
      relax(i);
    }
    for (std::size_t i = n; i-- > 0;)
    {
      relax(i);
    }
  }
}

// Ring content outside the selected harmonics, scaled order by order with the FE symbol.
void SchwarzPreconditioner::Complement(const RingTransform &fft, const RingSymbol &sym,
                                       std::span<const double> g, std::span<double> u) const
{
  const std::size_t n = g.size();
  std::vector<Complex> c(static_cast<std::size_t>(LambdaMax(n)));
  fft.AnalyzeCoefficients(g, c);
  for (int l : system_.Operator().Harmonics().Orders())
  {
    c[static_cast<std::size_t>(l - 1)] = 0.0;
  }
  double mean = 0.0, nyq = 0.0;
  for (std::size_t p = 0; p < n; p++)
  {
    mean += g[p];
    nyq += (p % 2 == 0) ? g[p] : -g[p];
  }
  mean /= double(n);
  nyq = (n % 2 == 0) ? nyq / double(n) : 0.0;
  for (std::size_t i = 0; i < c.size(); i++)
  {
    c[i] /= sym.At(double(i + 1));
  }
  std::vector<double> v(n);
  fft.SynthesizeCoefficients(c, v);
  const double m0 = mean / sym.At(0.0), mn = nyq / sym.At(0.5 * double(n));
  for (std::size_t p = 0; p < n; p++)
  {
    u[p] += v[p] + m0 + ((p % 2 == 0) ? mn : -mn);
  }
}

void SchwarzPreconditioner::Apply(std::span<const double> r, std::span<double> z) const
{
  const std::size_t n = system_.Size(), ns = system_.StatorSize();
  if (r.size() != n || z.size() != n)
  {
    Throw(ErrorCode::Internal, "preconditioner dimension mismatch");
  }
  if (options_.fe_block == FeBlockSolver::Cholesky)
  {
    std::fill(z.begin(), z.end(), 0.0);
    auto solve = [](const Factor &f, std::span<const double> rr, std::span<double> zz)
    {
      Eigen::VectorXd b(static_cast<Eigen::Index>(f.interior.size()));
      for (std::size_t i = 0; i < f.interior.size(); i++)
      {
        b[static_cast<Eigen::Index>(i)] = rr[static_cast<std::size_t>(f.interior[i])];
      }
      const Eigen::VectorXd x = f.ldlt.solve(b);
      for (std::size_t i = 0; i < f.interior.size(); i++)
      {
        zz[static_cast<std::size_t>(f.interior[i])] = x[static_cast<Eigen::Index>(i)];
      }
    };
    solve(*factor_st_, r.first(ns), z.first(ns));
    solve(*factor_rt_, r.subspan(ns), z.subspan(ns));
  }
  else
  {
    GaussSeidel(system_.StatorSystem().Matrix(), 0, r.first(ns), z.first(ns));
    GaussSeidel(system_.RotorSystem().Matrix(), ns, r.subspan(ns), z.subspan(ns));
  }

  const AirGapOperator &op = system_.Operator();
  const auto &ring_st = system_.Stator().ring;
  const auto &ring_rt = system_.Rotor().ring;
  const auto g_st = Restrict(r.first(ns), ring_st);
  const auto g_rt = Restrict(r.subspan(ns), ring_rt);
  std::vector<double> u_st(g_st.size()), u_rt(g_rt.size());
  op.ApplyApproximateInverseRing(g_st, g_rt, u_st, u_rt, shift_st_, shift_rt_);
  Complement(fft_st_, sym_st_, g_st, u_st);
  Complement(fft_rt_, sym_rt_, g_rt, u_rt);

  for (std::size_t p = 0; p < u_st.size(); p++)
  {
    z[static_cast<std::size_t>(ring_st.node_indices[p])] += u_st[p];
  }
  for (std::size_t p = 0; p < u_rt.size(); p++)
  {
    z[ns + static_cast<std::size_t>(ring_rt.node_indices[p])] += u_rt[p];
  }
}

LinearMap SchwarzPreconditioner::AsMap() const
{
  return [this](std::span<const double> r, std::span<double> z) { Apply(r, z); };
}

namespace
{

SolveStats SolveConstrained(const CoupledSystem &system, std::span<const double> rhs,
                            std::span<double> u, const SolverOptions &options)
{
  PcgOptions pcg;
  pcg.tol = options.tol;
  pcg.max_iterations = options.max_iterations;
  if (options.precondition)
  {
    SchwarzPreconditioner pre(system, {options.fe_block, options.gs_sweeps, true});
    return Pcg(system.AsMap(), pre.AsMap(), rhs, u, pcg);
  }
  return Pcg(system.AsMap(), {}, rhs, u, pcg);
}

// Start vector with prescribed Dirichlet values; free entries from init (or zero).
std::vector<double> StartVector(const CoupledSystem &system, std::span<const double> init)
{
  std::vector<double> u(system.Size(), 0.0);
  if (!init.empty())
  {
    if (init.size() != u.size())
    {
      Throw(ErrorCode::InvalidArgument, "initial guess dimension mismatch");
    }
    std::copy(init.begin(), init.end(), u.begin());
  }
  for (const auto &v : system.Stator().dirichlet.Values())
  {
    u[static_cast<std::size_t>(v.node)] = v.value;
  }
  for (const auto &v : system.Rotor().dirichlet.Values())
  {
    u[system.StatorSize() + static_cast<std::size_t>(v.node)] = v.value;
  }
  return u;
}

}  // namespace

StaticResult SolveStatic(CoupledSystem &system, const SolverOptions &options,
                         std::span<const double> initial)
{
  StaticResult res;
  const auto rhs = system.Rhs(system.Load());
  res.u = StartVector(system, initial);
  res.stats = SolveConstrained(system, rhs, res.u, options);
  if (!res.stats.converged)
  {
    Throw(ErrorCode::Solver, "static solve did not converge in " +
                                 std::to_string(res.stats.iterations) + " iterations (residual " +
                                 Sci(res.stats.residual_history.back()) + ")");
  }
  return res;
}

MotionProfile::MotionProfile(std::vector<MotionSample> samples, double gamma_skew,
                             SlewLimits limits)
  : samples_(std::move(samples)), gamma_skew_(gamma_skew)
{
  if (samples_.empty())
  {
    Throw(ErrorCode::Validation, "motion profile needs at least one sample");
  }
  if (!std::isfinite(gamma_skew))
  {
    Throw(ErrorCode::Validation, "non-finite skew angle");
  }
  for (std::size_t i = 0; i < samples_.size(); i++)
  {
    const auto &s = samples_[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.alpha) || !std::isfinite(s.d_ecc) ||
        !std::isfinite(s.gamma_ecc) || s.d_ecc < 0.0)
    {
      Throw(ErrorCode::Validation, "motion sample " + std::to_string(i) + " is invalid");
    }
    if (i == 0)
    {
      continue;
    }
    const auto &p = samples_[i - 1];
    if (!(s.t > p.t))
    {
      Throw(ErrorCode::Validation, "motion sample times must be strictly increasing (sample " +
                                       std::to_string(i) + ")");
    }
    const Complex e0 = std::polar(p.d_ecc, p.gamma_ecc), e1 = std::polar(s.d_ecc, s.gamma_ecc);
    if (std::abs(s.alpha - p.alpha) > limits.alpha || std::abs(e1 - e0) > limits.ecc)
    {
      Throw(ErrorCode::Validation, "motion jump between samples " + std::to_string(i - 1) +
                                       " and " + std::to_string(i) + " exceeds the slew bound");
    }
  }
}

MotionSample MotionProfile::At(double t) const
{
  if (t <= samples_.front().t)
  {
    MotionSample s = samples_.front();
    s.t = t;
    return s;
  }
  if (t >= samples_.back().t)
  {
    MotionSample s = samples_.back();
    s.t = t;
    return s;
  }
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                   [](double v, const MotionSample &s) { return v < s.t; });
  const MotionSample &b = *it, &a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  const Complex e = (1.0 - w) * std::polar(a.d_ecc, a.gamma_ecc) +
                    w * std::polar(b.d_ecc, b.gamma_ecc);
  MotionSample s;
  s.t = t;
  s.alpha = (1.0 - w) * a.alpha + w * b.alpha;
  s.d_ecc = std::abs(e);
  // Keep the sampled direction through the center.
  s.gamma_ecc = s.d_ecc > 0.0 ? std::arg(e) : (1.0 - w) * a.gamma_ecc + w * b.gamma_ecc;
  return s;
}

MotionState MotionProfile::StateAt(double t, double rho_rt) const
{
  const MotionSample s = At(t);
  return MotionState::FromEccentricity(s.alpha, gamma_skew_, s.d_ecc, s.gamma_ecc, rho_rt);
}

ForceTorqueSample EvaluateSample(const CoupledSystem &system, std::span<const double> u, double t,
                                 const MotionSample &motion, int iterations)
{
  const auto coeffs = ComputeGapCoefficients(system.Operator(), system.StatorRing(u),
                                             system.RotorRing(u));
  const auto &g = system.Operator().Geometry();
  const Complex F = UmpForce(coeffs, g);
  ForceTorqueSample s;
  s.t = t;
  s.alpha = motion.alpha;
  s.d_ecc = motion.d_ecc;
  s.gamma_ecc = motion.gamma_ecc;
  s.torque = TorqueHarmonic(coeffs, g);
  s.fx = F.real();
  s.fy = F.imag();
  s.iterations = iterations;
  return s;
}

TransientResult SolveTransient(CoupledSystem &system, const MotionProfile &profile,
                               const TransientOptions &options)
{
  if (!(options.dt > 0.0) || !std::isfinite(options.dt))
  {
    Throw(ErrorCode::Validation, "time step must be positive");
  }
  if (!(options.theta > 0.0 && options.theta <= 1.0))
  {
    Throw(ErrorCode::Validation, "theta must lie in (0, 1]");
  }
  if (!(options.t_end >= 0.0))
  {
    Throw(ErrorCode::Validation, "end time must be non-negative");
  }
  const double rho = system.Operator().Geometry().rho_rt;
  const int steps = static_cast<int>(std::llround(options.t_end / options.dt));
  const double theta = options.theta;
  const double beta = 1.0 / (theta * options.dt);

  TransientResult res;
  auto record = [&](int step, double t, const MotionSample &m, const SolveStats &stats)
  {
    res.samples.push_back(EvaluateSample(system, res.u, t, m, stats.iterations));
    res.stats.push_back(stats);
    res.stator_checksums.push_back(system.Stator().mesh->Checksum());
    res.rotor_checksums.push_back(system.Rotor().mesh->Checksum());
    if (options.on_step)
    {
      options.on_step(step, t, res.u);
    }
  };

  // Initial state.
  MotionSample m = profile.At(0.0);
  system.Operator().SetMotion(profile.StateAt(0.0, rho));
  SolveStats initial_stats;
  if (options.initial == InitialCondition::Static)
  {
    system.SetBeta(0.0);
    auto st = SolveStatic(system, options.solver);
    res.u = std::move(st.u);
    initial_stats = st.stats;
  }
  else
  {
    res.u = StartVector(system, {});
    initial_stats.converged = true;
  }
  record(0, 0.0, m, initial_stats);

  system.SetBeta(beta);
  const auto f = system.Load();
  std::vector<double> b(system.Size()), y(system.Size());
  for (int k = 1; k <= steps; k++)
  {
    const double t = k * options.dt;
    // b = f + beta M u^k - ((1 - theta)/theta) (K_k u^k - f), K_k including the gap.
    system.ApplyUnconstrained(beta, res.u, b);
    system.ApplyUnconstrained(0.0, res.u, y);
    const double w = (1.0 - theta) / theta;
    for (std::size_t i = 0; i < b.size(); i++)
    {
      b[i] = f[i] + (b[i] - y[i]) - w * (y[i] - f[i]);
    }
    m = profile.At(t);
    system.Operator().SetMotion(profile.StateAt(t, rho));
    const auto rhs = system.Rhs(b);
    const SolveStats stats = SolveConstrained(system, rhs, res.u, options.solver);
    if (!stats.converged)
    {
      Throw(ErrorCode::Solver, "step " + std::to_string(k) + " (t = " + Sci(t) +
                                   " s): PCG did not converge, residual " +
                                   Sci(stats.residual_history.back()));
    }
    record(k, t, m, stats);
  }
  return res;
}

}  // namespace airgap
