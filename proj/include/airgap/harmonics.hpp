// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_HARMONICS_HPP
#define AIRGAP_HARMONICS_HPP

#include <complex>
#include <memory>
#include <span>
#include <vector>
#include "airgap/mesh.hpp"

namespace airgap
{

using Complex = std::complex<double>;

//
// Half-spectrum of a real field sampled on an equidistant ring of n nodes:
//
//   field(theta) = c0 + sum_{l=1}^{l_max} 2 Re{c_l exp(-j l theta)} + nyquist (-1)^p,
//
// with theta absolute (ring offset theta0 already compensated) and l_max = floor((n-1)/2).
// The Nyquist amplitude (even n only) is ring-relative and never coupled through the gap;
// it is kept so that synthesis inverts analysis exactly.
//
struct HarmonicSpectrum
{
  std::size_t n = 0;
  double theta0 = 0.0;
  double c0 = 0.0;
  double nyquist = 0.0;
  std::vector<Complex> coeffs;  // coeffs[l - 1] = c_l

  int LambdaMax() const { return static_cast<int>(coeffs.size()); }
  Complex At(int lambda) const { return coeffs.at(static_cast<std::size_t>(lambda - 1)); }
};

inline int LambdaMax(std::size_t n)
{
  return n == 0 ? 0 : static_cast<int>((n - 1) / 2);
}

// Sorted, duplicate-free positive harmonic orders.
class HarmonicSet
{
public:
  HarmonicSet() = default;
  explicit HarmonicSet(std::vector<int> orders);

  static HarmonicSet Range(int first, int last);

  const std::vector<int> &Orders() const { return orders_; }
  std::size_t Size() const { return orders_.size(); }
  int Max() const { return orders_.back(); }
  int operator[](std::size_t i) const { return orders_[i]; }

  // Position of order lambda, or -1.
  int Find(int lambda) const;

  // Throws a configuration error if an order exceeds lambda_max.
  void Validate(int lambda_max) const;

  bool operator==(const HarmonicSet &) const = default;

private:
  std::vector<int> orders_;
};

//
// FFT plan pair (real-to-complex and back) for one ring size. Planning happens once in the
// constructor; Analyze/Synthesize are const and may run concurrently.
//
class RingTransform
{
public:
  RingTransform() = default;
  RingTransform(std::size_t n, double theta0);

  std::size_t Size() const { return n_; }
  double Theta0() const { return theta0_; }

  HarmonicSpectrum Analyze(std::span<const double> samples) const;
  void Synthesize(const HarmonicSpectrum &spectrum, std::span<double> samples) const;

  // Positive-order coefficients only: out[l-1] = c_l for l = 1..l_max.
  void AnalyzeCoefficients(std::span<const double> samples, std::span<Complex> out) const;
  // Samples of sum_l 2 Re{c_l exp(-j l theta_p)} (zero mean and Nyquist).
  void SynthesizeCoefficients(std::span<const Complex> coeffs, std::span<double> samples) const;

private:
  struct Plans;
  std::size_t n_ = 0;
  double theta0_ = 0.0;
  std::shared_ptr<const Plans> plans_;
  std::vector<Complex> phase_;  // exp(j l theta0), l = 0..n/2
};

HarmonicSpectrum Analyze(std::span<const double> samples, const InterfaceRing &ring);
std::vector<double> Synthesize(const HarmonicSpectrum &spectrum, const InterfaceRing &ring);

// Keeps the orders of the set; embed zero-fills the rest (orthogonal projection onto set).
std::vector<Complex> Select(const HarmonicSpectrum &spectrum, const HarmonicSet &set);
HarmonicSpectrum Embed(std::span<const Complex> reduced, const HarmonicSet &set,
                       std::size_t n, double theta0);

enum class InterfaceCorrection
{
  Off,
  Exact
};

// Attenuation of order lambda when the piecewise-linear ring trace of n equal segments is
// integrated against exp(j lambda theta): [sin(lambda pi/n) / (lambda pi/n)]^2.
double InterfaceCorrectionFactor(int lambda, std::size_t n);

}  // namespace airgap

#endif  // AIRGAP_HARMONICS_HPP
