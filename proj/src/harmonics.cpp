// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include "airgap/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <fftw3.h>
#include "airgap/error.hpp"

namespace airgap
{

namespace
{

// FFTW planning is not thread safe; execution with the new-array interface is.
std::mutex &PlannerMutex()
{
  static std::mutex m;
  return m;
}

}  // namespace

HarmonicSet::HarmonicSet(std::vector<int> orders) : orders_(std::move(orders))
{
  std::sort(orders_.begin(), orders_.end());
  if (orders_.empty())
  {
    Throw(ErrorCode::Configuration, "harmonic set must not be empty");
  }
  if (orders_.front() < 1)
  {
    Throw(ErrorCode::Configuration, "harmonic orders must be positive (order 0 is excluded)");
  }
  if (std::adjacent_find(orders_.begin(), orders_.end()) != orders_.end())
  {
    Throw(ErrorCode::Configuration, "duplicate harmonic order");
  }
}

HarmonicSet HarmonicSet::Range(int first, int last)
{
  std::vector<int> o;
  for (int l = first; l <= last; l++)
  {
    o.push_back(l);
  }
  return HarmonicSet(std::move(o));
}

int HarmonicSet::Find(int lambda) const
{
  auto it = std::lower_bound(orders_.begin(), orders_.end(), lambda);
  return (it != orders_.end() && *it == lambda) ? static_cast<int>(it - orders_.begin()) : -1;
}

void HarmonicSet::Validate(int lambda_max) const
{
  if (orders_.empty() || orders_.back() > lambda_max)
  {
    Throw(ErrorCode::Configuration, "harmonic order " +
                                        std::to_string(orders_.empty() ? 0 : orders_.back()) +
                                        " exceeds lambda_max = " + std::to_string(lambda_max));
  }
}

struct RingTransform::Plans
{
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(std::size_t n)
  {
    std::lock_guard lock(PlannerMutex());
    const int size = static_cast<int>(n);
    double *real = fftw_alloc_real(n);
    fftw_complex *cplx = fftw_alloc_complex(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_r2c_1d(size, real, cplx, flags);
    backward = fftw_plan_dft_c2r_1d(size, cplx, real, flags);
    fftw_free(real);
    fftw_free(cplx);
    if (!forward || !backward)
    {
      Throw(ErrorCode::Internal, "FFTW planning failed");
    }
  }

  ~Plans()
  {
    std::lock_guard lock(PlannerMutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  Plans(const Plans &) = delete;
  Plans &operator=(const Plans &) = delete;
};

RingTransform::RingTransform(std::size_t n, double theta0)
  : n_(n), theta0_(theta0), plans_(std::make_shared<Plans>(n))
{
  if (n < 4)
  {
    Throw(ErrorCode::UnsupportedGrid, "ring transforms need at least 4 nodes");
  }
  phase_.resize(n / 2 + 1);
  for (std::size_t l = 0; l < phase_.size(); l++)
  {
    phase_[l] = std::polar(1.0, static_cast<double>(l) * theta0);
  }
}

void RingTransform::AnalyzeCoefficients(std::span<const double> samples,
                                        std::span<Complex> out) const
{
  if (samples.size() != n_ || out.size() != static_cast<std::size_t>(LambdaMax(n_)))
  {
    Throw(ErrorCode::Internal, "ring transform length mismatch");
  }
  std::vector<Complex> X(n_ / 2 + 1);
  // X_k = sum_p f_p exp(-j 2 pi k p / n); c_l = exp(j l theta0) conj(X_l) / n.
  fftw_execute_dft_r2c(plans_->forward, const_cast<double *>(samples.data()),
                       reinterpret_cast<fftw_complex *>(X.data()));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t l = 1; l <= out.size(); l++)
  {
    out[l - 1] = phase_[l] * std::conj(X[l]) * scale;
  }
}

void RingTransform::SynthesizeCoefficients(std::span<const Complex> coeffs,
                                           std::span<double> samples) const
{
  if (samples.size() != n_ || coeffs.size() > static_cast<std::size_t>(LambdaMax(n_)))
  {
    Throw(ErrorCode::Internal, "ring transform length mismatch");
  }
  // c2r evaluates f_p = sum_k Y_k exp(+j 2 pi k p / n) with Y_{n-k} = conj(Y_k).
  std::vector<Complex> Y(n_ / 2 + 1, Complex(0.0));
  for (std::size_t l = 1; l <= coeffs.size(); l++)
  {
    Y[l] = std::conj(coeffs[l - 1] * std::conj(phase_[l]));
  }
  fftw_execute_dft_c2r(plans_->backward, reinterpret_cast<fftw_complex *>(Y.data()),
                       samples.data());
}

HarmonicSpectrum RingTransform::Analyze(std::span<const double> samples) const
{
  if (samples.size() != n_)
  {
    Throw(ErrorCode::Internal, "sample count does not match ring size");
  }
  HarmonicSpectrum s;
  s.n = n_;
  s.theta0 = theta0_;
  s.coeffs.resize(static_cast<std::size_t>(LambdaMax(n_)));
  AnalyzeCoefficients(samples, s.coeffs);
  double mean = 0.0, alt = 0.0;
  for (std::size_t p = 0; p < n_; p++)
  {
    mean += samples[p];
    alt += (p % 2 == 0) ? samples[p] : -samples[p];
  }
  s.c0 = mean / static_cast<double>(n_);
  s.nyquist = (n_ % 2 == 0) ? alt / static_cast<double>(n_) : 0.0;
  return s;
}

void RingTransform::Synthesize(const HarmonicSpectrum &spectrum, std::span<double> samples) const
{
  if (spectrum.n != n_)
  {
    Throw(ErrorCode::Internal, "spectrum ring size mismatch");
  }
  SynthesizeCoefficients(spectrum.coeffs, samples);
  for (std::size_t p = 0; p < n_; p++)
  {
    samples[p] += spectrum.c0 + ((p % 2 == 0) ? spectrum.nyquist : -spectrum.nyquist);
  }
}

HarmonicSpectrum Analyze(std::span<const double> samples, const InterfaceRing &ring)
{
  return RingTransform(ring.Size(), ring.theta0).Analyze(samples);
}

std::vector<double> Synthesize(const HarmonicSpectrum &spectrum, const InterfaceRing &ring)
{
  if (spectrum.n != ring.Size())
  {
    Throw(ErrorCode::Internal, "spectrum ring size mismatch");
  }
  std::vector<double> out(ring.Size());
  RingTransform(ring.Size(), ring.theta0).Synthesize(spectrum, out);
  return out;
}

std::vector<Complex> Select(const HarmonicSpectrum &spectrum, const HarmonicSet &set)
{
  set.Validate(spectrum.LambdaMax());
  std::vector<Complex> out;
  out.reserve(set.Size());
  for (int l : set.Orders())
  {
    out.push_back(spectrum.At(l));
  }
  return out;
}

HarmonicSpectrum Embed(std::span<const Complex> reduced, const HarmonicSet &set, std::size_t n,
                       double theta0)
{
  HarmonicSpectrum s;
  s.n = n;
  s.theta0 = theta0;
  s.coeffs.assign(static_cast<std::size_t>(LambdaMax(n)), Complex(0.0));
  set.Validate(s.LambdaMax());
  if (reduced.size() != set.Size())
  {
    Throw(ErrorCode::Internal, "reduced coefficient count does not match harmonic set");
  }
  for (std::size_t i = 0; i < set.Size(); i++)
  {
    s.coeffs[static_cast<std::size_t>(set[i] - 1)] = reduced[i];
  }
  return s;
}

double InterfaceCorrectionFactor(int lambda, std::size_t n)
{
  const double x = std::numbers::pi * lambda / static_cast<double>(n);
  if (std::abs(x) < 1e-6)
  {
    const double s = 1.0 - x * x / 6.0;
    return s * s;
  }
  const double s = std::sin(x) / x;
  return s * s;
}

}  // namespace airgap
