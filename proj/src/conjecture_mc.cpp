#include "catmap/conjecture_mc.hpp"

#include <algorithm>
#include <cmath>

#include "catmap/error.hpp"
#include "catmap/stats.hpp"

namespace catmap {

double sample_su2_trace(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  double w = 0.0, r2 = 0.0;
  do {
    w = normal(rng);
    const double x = normal(rng), y = normal(rng), z = normal(rng);
    r2 = w * w + x * x + y * y + z * z;
  } while (r2 == 0.0);
  return 2.0 * w / std::sqrt(r2);
}

std::mt19937_64 substream(std::uint64_t seed, i64 nu, std::uint64_t chunk) {
  const auto unu = static_cast<std::uint64_t>(nu);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(unu), static_cast<std::uint32_t>(unu >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

namespace {

void fill_chunk(const std::map<i64, double>& weights, std::uint64_t seed, std::size_t chunk, std::vector<double>& out) {
  const std::size_t begin = chunk * kMcChunk;
  const std::size_t end = std::min(out.size(), begin + kMcChunk);
  for (const auto& [nu, w] : weights) {
    auto rng = substream(seed, nu, chunk);
    for (std::size_t i = begin; i < end; ++i) out[i] += w * sample_su2_trace(rng);
  }
}

McSample make_sample(std::size_t count, std::uint64_t seed) {
  McSample s;
  s.values.assign(count, 0.0);
  s.seed = seed;
  s.count = count;
  return s;
}

}  // namespace

McSample sample_weighted_traces(const std::map<i64, double>& weights, std::size_t count, std::uint64_t seed) {
  McSample s = make_sample(count, seed);
  const auto chunks = static_cast<std::int64_t>((count + kMcChunk - 1) / kMcChunk);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) fill_chunk(weights, seed, static_cast<std::size_t>(c), s.values);
  return s;
}

namespace serial {

McSample sample_weighted_traces(const std::map<i64, double>& weights, std::size_t count, std::uint64_t seed) {
  McSample s = make_sample(count, seed);
  for (std::size_t c = 0; c * kMcChunk < count; ++c) fill_chunk(weights, seed, c, s.values);
  return s;
}

}  // namespace serial

McSample sample_Xf(const TrigPolynomial& f, const QuadraticForm& q, std::size_t count, std::uint64_t seed) {
  if (!f.is_real_valued()) throw Error(ErrorKind::NotRealValued, "observable has f^(-n) != conj f^(n)");
  std::map<i64, double> weights;
  for (const auto& [nu, s] : attained_levels(f, q))
    if (s != cplx{}) weights[nu] = s.real();
  return sample_weighted_traces(weights, count, seed);
}

McSample sample_su2_traces(std::size_t count, std::uint64_t seed) {
  return sample_weighted_traces({{1, 1.0}}, count, seed);
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySample, "KS distance needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return worst;
}

Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
  if (bins == 0 || !(hi > lo)) throw Error(ErrorKind::InvalidArgument, "histogram needs bins > 0 and hi > lo");
  Histogram h{lo, hi, std::vector<std::size_t>(bins, 0)};
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    const double pos = std::floor((v - lo) / width);
    const auto idx = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++h.counts[idx];
  }
  return h;
}

SampleMoments sample_moments(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptySample, "no values");
  SampleMoments m;
  m.count = values.size();
  double m1 = 0.0, m3 = 0.0, m8 = 0.0;
  for (double v : values) {
    const double v2 = v * v;
    m1 += v;
    m.m2 += v2;
    m3 += v2 * v;
    m.m4 += v2 * v2;
    m.m6 += v2 * v2 * v2;
    m8 += v2 * v2 * v2 * v2;
  }
  const double n = static_cast<double>(values.size());
  m1 /= n;
  m.m2 /= n;
  m3 /= n;
  m.m4 /= n;
  m.m6 /= n;
  m8 /= n;
  m.mean = m1;
  const double var = m.m2 - m1 * m1;
  m.skewness = var > 0 ? (m3 - 3 * m1 * var - m1 * m1 * m1) / std::pow(var, 1.5) : 0.0;
  m.se_mean = std::sqrt(std::max(var, 0.0) / n);
  m.se_m2 = std::sqrt(std::max(m.m4 - m.m2 * m.m2, 0.0) / n);
  m.se_m4 = std::sqrt(std::max(m8 - m.m4 * m.m4, 0.0) / n);
  return m;
}

}  // namespace catmap
