// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>
#include <doctest.h>
#include "airgap/error.hpp"
#include "airgap/harmonics.hpp"
#include "oracles.hpp"

using namespace airgap;

namespace
{

constexpr double kPi = std::numbers::pi;

InterfaceRing Ring(std::size_t n, double theta0)
{
  InterfaceRing r;
  r.radius = 1.0;
  r.theta0 = theta0;
  for (std::size_t p = 0; p < n; p++)
  {
    r.node_indices.push_back(static_cast<Index>(p));
  }
  return r;
}

// Closed-form integral of the hat centred at 0 with support [-h, h] against exp(j l theta),
// normalised by the hat's own integral h.
double HatProjection(int l, std::size_t n)
{
  const double h = 2.0 * kPi / double(n);
  // int_{-h}^{h} (1 - |t|/h) cos(l t) dt = 2 (1 - cos(l h)) / (l^2 h)
  return 2.0 * (1.0 - std::cos(l * h)) / (double(l) * l * h) / h;
}

}  // namespace

TEST_CASE("constant and cosine samples")
{
  const auto c = Analyze(std::vector<double>{1, 1, 1, 1}, Ring(4, 0.0));
  CHECK(c.c0 == doctest::Approx(1.0));
  REQUIRE(c.LambdaMax() == 1);
  CHECK(std::abs(c.At(1)) <= 1e-15);

  const auto s = Analyze(std::vector<double>{1, 0, -1, 0}, Ring(4, 0.0));
  CHECK(std::abs(s.c0) <= 1e-15);
  CHECK(std::abs(s.At(1) - 0.5) <= 1e-15);

  HarmonicSpectrum only{8, 0.0, 0.0, 0.0, {0.5, 0.0, 0.0}};
  const auto v = Synthesize(only, Ring(8, 0.0));
  for (std::size_t p = 0; p < 8; p++)
  {
    CHECK(std::abs(v[p] - std::cos(2.0 * kPi * double(p) / 8.0)) <= 1e-15);
  }
}

TEST_CASE("ring offset is compensated")
{
  // Samples of cos(theta) at theta_p = pi/2 + 2 pi p/4.
  const InterfaceRing ring = Ring(4, kPi / 2.0);
  std::vector<double> f(4);
  for (std::size_t p = 0; p < 4; p++)
  {
    f[p] = std::cos(ring.Angle(p));
  }
  const auto c = Analyze(f, ring);
  const auto ref = oracle::DirectDft(f, ring.theta0);
  CHECK(std::abs(c.At(1) - ref[0]) <= 1e-15);
  CHECK(std::abs(c.At(1) - 0.5) <= 1e-15);
  const auto back = Synthesize(c, ring);
  for (std::size_t p = 0; p < 4; p++)
  {
    CHECK(std::abs(back[p] - f[p]) <= 1e-15);
  }
}

TEST_CASE("FFT route agrees with the direct DFT")
{
  std::mt19937_64 rng(11);
  for (std::size_t n : {4u, 8u, 12u, 16u, 30u, 31u})
  {
    for (double theta0 : {0.0, 0.3, kPi / 8.0})
    {
      const InterfaceRing ring = Ring(n, theta0);
      const auto f = oracle::RandomVector(n, rng);
      const auto c = Analyze(f, ring);
      const auto ref = oracle::DirectDft(f, theta0);
      REQUIRE(c.coeffs.size() == ref.size());
      for (std::size_t i = 0; i < ref.size(); i++)
      {
        CHECK(std::abs(c.coeffs[i] - ref[i]) <= 1e-12);
      }
      double mean = 0.0, energy = 0.0;
      for (double v : f)
      {
        mean += v / double(n);
        energy += v * v / double(n);
      }
      CHECK(std::abs(c.c0 - mean) <= 1e-15);

      // Parseval, with the Nyquist term for even n.
      double parseval = c.c0 * c.c0 + c.nyquist * c.nyquist;
      for (const auto &x : c.coeffs)
      {
        parseval += 2.0 * std::norm(x);
      }
      CHECK(std::abs(parseval - energy) <= 1e-12);

      const auto back = Synthesize(c, ring);
      for (std::size_t p = 0; p < n; p++)
      {
        CHECK(std::abs(back[p] - f[p]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("select and embed")
{
  std::mt19937_64 rng(5);
  const InterfaceRing ring = Ring(16, 0.0);
  const auto c = Analyze(oracle::RandomVector(16, rng), ring);

  const HarmonicSet all = HarmonicSet::Range(1, LambdaMax(16));
  const auto full = Embed(Select(c, all), all, 16, 0.0);
  CHECK(full.coeffs == c.coeffs);

  const HarmonicSet one({1});
  const auto kept = Embed(Select(c, one), one, 16, 0.0);
  CHECK(kept.At(1) == c.At(1));
  for (int l = 2; l <= kept.LambdaMax(); l++)
  {
    CHECK(kept.At(l) == Complex(0.0));
  }

  const HarmonicSet common = HarmonicSet::Range(1, std::min(LambdaMax(32), LambdaMax(16)));
  CHECK(common.Size() == 7);
  common.Validate(LambdaMax(16));

  try
  {
    HarmonicSet::Range(1, 8).Validate(LambdaMax(16));
    FAIL("expected a configuration error");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::Configuration);
  }
}

TEST_CASE("harmonic set contract")
{
  CHECK(HarmonicSet({3, 1, 2}).Orders() == std::vector<int>{1, 2, 3});
  CHECK(HarmonicSet({4, 2}).Find(4) == 1);
  CHECK(HarmonicSet({4, 2}).Find(3) == -1);
  for (auto bad : {std::vector<int>{}, std::vector<int>{0, 1}, std::vector<int>{2, 2}})
  {
    try
    {
      HarmonicSet s(bad);
      FAIL("expected a configuration error");
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::Configuration);
    }
  }
}

TEST_CASE("interface correction factor")
{
  for (std::size_t n : {4u, 8u, 32u, 100u})
  {
    for (int l = 1; l < int(n) / 2; l++)
    {
      CHECK(std::abs(InterfaceCorrectionFactor(l, n) - HatProjection(l, n)) <= 1e-10);
      CHECK(InterfaceCorrectionFactor(-l, n) == doctest::Approx(InterfaceCorrectionFactor(l, n)));
      if (l > 1)
      {
        CHECK(InterfaceCorrectionFactor(l, n) < InterfaceCorrectionFactor(l - 1, n));
      }
    }
  }
  CHECK(std::abs(InterfaceCorrectionFactor(3, 1u << 20) - 1.0) <= 1e-10);
}
