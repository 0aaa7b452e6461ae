#include <doctest.h>

#include <numeric>

#include "catmap/conjecture_mc.hpp"
#include "catmap/error.hpp"

using namespace catmap;

namespace {

const CatMap A0 = validate_cat_map(3, 2, 4, 3);

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("Kolmogorov-Smirnov distance") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{4.0, 5.0};
  const std::vector<double> c{0.5, 1.5, 2.5, 3.5};
  CHECK(ks_distance(a, a) == 0.0);
  CHECK(ks_distance(a, b) == 1.0);
  CHECK(ks_distance(b, a) == 1.0);
  // After 1.0: 1/3 vs 1/4 ... largest gap 0.25 at x = 0.5.
  CHECK(ks_distance(a, c) == doctest::Approx(0.25));
  const std::vector<double> empty;
  CHECK(kind_of([&] { ks_distance(empty, a); }) == ErrorKind::EmptySample);
  // Ties are handled as steps, not interleaved.
  const std::vector<double> t1{0.0, 0.0, 1.0};
  const std::vector<double> t2{0.0, 1.0, 1.0};
  CHECK(ks_distance(t1, t2) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("SU(2) trace samples") {
  const auto s = sample_su2_traces(200000, 7);
  CHECK(s.values.size() == 200000);
  CHECK(s.count == 200000);
  for (double x : s.values) {
    CHECK(x >= -2.0);
    CHECK(x <= 2.0);
  }
  const auto m = sample_moments(s.values);
  // Catalan moments 1, 2, 5 with room for sampling error.
  CHECK(std::abs(m.mean) < 5.0 * m.se_mean);
  CHECK(std::abs(m.m2 - 1.0) < 5.0 * m.se_m2);
  CHECK(std::abs(m.m4 - 2.0) < 5.0 * m.se_m4);
  CHECK(std::abs(m.m6 - 5.0) < 0.1);
  CHECK(std::abs(m.skewness) < 0.02);

  // A single draw from a fresh generator.
  std::mt19937_64 rng(1);
  const double x = sample_su2_trace(rng);
  CHECK(std::abs(x) <= 2.0);
}

TEST_CASE("seeded determinism and the serial twin") {
  const std::map<i64, double> w{{2, -2.0}, {4, 0.5}, {-4, 1.0}};
  const auto a = sample_weighted_traces(w, 10001, 42);
  const auto b = sample_weighted_traces(w, 10001, 42);
  const auto c = serial::sample_weighted_traces(w, 10001, 42);
  const auto d = sample_weighted_traces(w, 10001, 43);
  CHECK(a.values == b.values);
  CHECK(a.values == c.values);
  CHECK(a.values != d.values);
  // A prefix of a longer run is the shorter run.
  const auto e = sample_weighted_traces(w, 5000, 42);
  CHECK(std::equal(e.values.begin(), e.values.end(), a.values.begin()));

  // Levels draw from independent substreams.
  auto s1 = substream(42, 2, 0);
  auto s2 = substream(42, 4, 0);
  auto s3 = substream(42, 2, 1);
  const auto v1 = s1();
  CHECK(v1 != s2());
  CHECK(v1 != s3());
}

TEST_CASE("X_f samples") {
  TrigPolynomial f0;
  f0.add({1, 1}, 1.0);
  f0.add({-1, -1}, 1.0);
  const auto q = frequency_form(A0);
  const auto s = sample_Xf(f0, q, 100000, 3);
  const auto m = sample_moments(s.values);
  CHECK(std::abs(m.m2 - 4.0) < 5.0 * m.se_m2);
  CHECK(std::abs(m.m4 - 32.0) < 5.0 * m.se_m4);
  // f0 has one level with weight -2: X = -2 tr(U).
  const auto t = sample_weighted_traces({{2, -2.0}}, 100000, 3);
  CHECK(s.values == t.values);

  TrigPolynomial one;
  one.add({0, 0}, 1.0);
  for (double x : sample_Xf(one, q, 100, 1).values) CHECK(x == 0.0);

  TrigPolynomial bad;
  bad.add({1, 0}, {0.0, 1.0});
  CHECK(kind_of([&] { sample_Xf(bad, q, 10, 1); }) == ErrorKind::NotRealValued);
}

TEST_CASE("moments and histograms") {
  const std::vector<double> v{-1.0, 1.0, -1.0, 1.0};
  const auto m = sample_moments(v);
  CHECK(m.count == 4);
  CHECK(m.mean == 0.0);
  CHECK(m.m2 == 1.0);
  CHECK(m.m4 == 1.0);
  CHECK(m.m6 == 1.0);
  CHECK(m.skewness == 0.0);
  const std::vector<double> skew{0.0, 0.0, 0.0, 3.0};
  CHECK(sample_moments(skew).skewness > 0.0);

  const std::vector<double> h{-5.0, 0.1, 0.2, 0.9, 5.0};
  const auto hist = histogram(h, 2, 0.0, 1.0);
  REQUIRE(hist.counts.size() == 2);
  CHECK(hist.counts[0] == 3);
  CHECK(hist.counts[1] == 2);
  CHECK(std::accumulate(hist.counts.begin(), hist.counts.end(), std::size_t{0}) == h.size());
}
