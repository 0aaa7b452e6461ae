#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "catmap/arith.hpp"
#include "catmap/hilbert.hpp"

namespace catmap {

struct McSample {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

/// Draws per substream chunk. Part of the output contract: changing it
/// changes every seeded sample.
inline constexpr std::size_t kMcChunk = 4096;

/// tr(U) for Haar-random U in SU(2): 2w for a uniform point (w, x, y, z) on S^3.
double sample_su2_trace(std::mt19937_64& rng);

/// The generator for substream (seed, nu, chunk).
std::mt19937_64 substream(std::uint64_t seed, i64 nu, std::uint64_t chunk);

/// `count` draws of X = sum_nu weight(nu) tr(U_nu), independent U_nu. Chunked
/// over OpenMP threads; the result does not depend on the thread count.
McSample sample_weighted_traces(const std::map<i64, double>& weights, std::size_t count, std::uint64_t seed);

/// X_f with weights f#(nu) over the attained levels. Throws NotRealValued.
McSample sample_Xf(const TrigPolynomial& f, const QuadraticForm& q, std::size_t count, std::uint64_t seed);

/// Plain tr(U) draws (a single level).
McSample sample_su2_traces(std::size_t count, std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov statistic. Throws EmptySample.
double ks_distance(std::span<const double> a, std::span<const double> b);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;  // values outside [lo, hi] are clamped into the end bins
};

Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi);

struct SampleMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0, m4 = 0.0, m6 = 0.0;   // raw moments
  double skewness = 0.0;
  double se_mean = 0.0, se_m2 = 0.0, se_m4 = 0.0;
};

SampleMoments sample_moments(std::span<const double> values);

namespace serial {
McSample sample_weighted_traces(const std::map<i64, double>& weights, std::size_t count, std::uint64_t seed);
}  // namespace serial

}  // namespace catmap
