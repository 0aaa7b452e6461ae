#include <doctest.h>

#include <random>

#include "catmap/error.hpp"
#include "catmap/stats.hpp"
#include "oracles.hpp"

using namespace catmap;

namespace {

const CatMap A0 = validate_cat_map(3, 2, 4, 3);
const QuadraticForm Q0 = frequency_form(A0);

TrigPolynomial f0() {
  TrigPolynomial f;
  f.add({1, 1}, 1.0);
  f.add({-1, -1}, 1.0);
  return f;
}

TrigPolynomial cosine(Freq n, cplx c) {
  TrigPolynomial f;
  f.add(n, c);
  f.add(-n, std::conj(c));
  return f;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

StateVector random_state(std::mt19937_64& rng, i64 N) {
  std::normal_distribution<double> g;
  StateVector v(N);
  for (i64 q = 0; q < N; ++q) v[q] = {g(rng), g(rng)};
  return normalized(v);
}

}  // namespace

TEST_CASE("f sharp and predictions") {
  const auto f = f0();
  CHECK(std::abs(f_sharp(f, Q0, 2) - cplx(-2.0, 0.0)) < 1e-15);
  CHECK(std::abs(f_sharp(f, Q0, 4)) == 0.0);
  const auto lv = attained_levels(f, Q0);
  REQUIRE(lv.size() == 1);
  CHECK(lv.begin()->first == 2);
  const auto p = predictions(f, Q0);
  CHECK(p.variance == doctest::Approx(4.0));
  CHECK(p.fourth == doctest::Approx(32.0));

  // Parity weights: (2, 1) is even, (1, 1) odd; both lie on different levels.
  TrigPolynomial g = cosine({2, 1}, 0.5);
  CHECK(std::abs(f_sharp(g, Q0, Q0({2, 1})) - cplx(1.0, 0.0)) < 1e-15);
  CHECK(predictions(g, Q0).variance == doctest::Approx(1.0));

  // (1, 1) and (1, -1) share level 2; their signed coefficients add.
  TrigPolynomial h = f0();
  h.add({1, -1}, 0.25);
  h.add({-1, 1}, 0.25);
  CHECK(std::abs(f_sharp(h, Q0, 2) - cplx(-2.5, 0.0)) < 1e-15);

  TrigPolynomial one;
  one.add({0, 0}, 1.0);
  CHECK(attained_levels(one, Q0).empty());
  CHECK(predictions(one, Q0).variance == 0.0);
}

TEST_CASE("support threshold") {
  const auto th = support_threshold(f0(), Q0, 5);
  CHECK(th.admissible());
  CHECK(th.max_abs_level == 2);
  CHECK(th.conservative);
  // Q(1, 2) = 14 vanishes mod 7.
  CHECK_FALSE(support_threshold(cosine({1, 2}, 1.0), Q0, 7).admissible());
  // Levels 2 and 16 collide mod 7.
  TrigPolynomial lv16 = f0();
  lv16.add({0, 2}, 1.0);
  lv16.add({0, -2}, 1.0);
  CHECK(support_threshold(lv16, Q0, 7).admissible());
  CHECK_FALSE(support_threshold(lv16, Q0, 7).distinct_mod_n);
  CHECK_FALSE(support_threshold(lv16, Q0, 7).conservative);
}

TEST_CASE("normalized matrix elements at N = 13") {
  const auto ctx = build_hecke_context(A0, 13);
  const auto basis = eigenbasis(ctx);
  const auto r = normalized_elements(f0(), basis, Q0, ctx);
  REQUIRE(r.F.size() == 13);
  REQUIRE(r.V.count(2) == 1);
  double total = 0.0;
  for (std::size_t j = 0; j < r.F.size(); ++j) {
    CHECK(std::abs(r.F[j] + 2.0 * r.V.at(2)[j]) < 1e-9);
    total += r.F[j];
  }
  CHECK(std::abs(total) < 1e-9);
  CHECK(r.max_imag < 1e-9);
  CHECK(r.rewrite_residual < 1e-9);
  // Exact inert value of the second moment.
  CHECK(std::abs(r.moments.m2 - 4.0 * 13.0 / 14.0) < 1e-9);
  CHECK(r.prediction.variance == doctest::Approx(4.0));
  CHECK(r.scaled_variance_error() == doctest::Approx((4.0 * 13.0 / 14.0 - 4.0) * 13.0));

  TrigPolynomial one;
  one.add({0, 0}, 3.0);
  for (double x : normalized_elements(one, basis, Q0, ctx).F) CHECK(x == 0.0);

  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 3; ++rep) {
    const auto f = oracle::random_real_poly(rng, 2);
    const auto par = normalized_elements(f, basis, Q0, ctx);
    const auto ser = serial::normalized_elements(f, basis, Q0, ctx);
    CHECK(par.F == ser.F);
    CHECK(par.rewrite_residual < 1e-8);
    // Direct Op_N evaluation.
    const auto op = op_from_poly(f, 13);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const cplx direct = std::sqrt(13.0) * (inner(op.apply(basis.vectors[j]), basis.vectors[j]) - f.coeff({0, 0}));
      CHECK(std::abs(direct.real() - par.F[j]) < 1e-9);
    }
  }
}

TEST_CASE("normalized_elements error paths") {
  const auto ctx = build_hecke_context(A0, 7);
  const auto basis = eigenbasis(ctx);
  TrigPolynomial g;
  g.add({1, 0}, {0.0, 1.0});
  CHECK(kind_of([&] { normalized_elements(g, basis, Q0, ctx); }) == ErrorKind::NotRealValued);
  CHECK(kind_of([&] { normalized_elements(cosine({1, 2}, 1.0), basis, Q0, ctx); }) == ErrorKind::ThresholdTooSmall);

  // A generic state sees different values on two representatives of a level.
  std::mt19937_64 rng(4);
  CHECK(kind_of([&] { v_nu(2, random_state(rng, 7), Q0, 1); }) == ErrorKind::RepresentativeMismatch);
  CHECK(v_nu(1, basis.vectors[0], Q0, 3) == 0.0);
}

TEST_CASE("inert variance chain") {
  for (i64 N : {5, 13}) {
    const auto ctx = build_hecke_context(A0, N);
    REQUIRE(ctx.split == SplitType::Inert);
    const auto basis = eigenbasis(ctx);
    const double c = static_cast<double>(ctx.order());
    const double n = static_cast<double>(N);
    std::mt19937_64 rng(static_cast<unsigned>(N));
    for (const auto& f : {f0(), oracle::random_real_poly(rng, 2)}) {
      const auto r = normalized_elements(f, basis, Q0, ctx);
      const auto levels = attained_levels(f, Q0);
      double eig = 0.0, count = 0.0, trace = 0.0;
      for (const auto& [mu, fm] : levels)
        for (const auto& [nu, fn] : levels) {
          const Freq a = level_set(Q0, mu, f.radius()).front();
          const Freq b = level_set(Q0, nu, f.radius()).front();
          const double w = (fm * std::conj(fn)).real();
          eig += w * eigen_pair_sum(a, b, basis).real();
          count += w * n / c * static_cast<double>(count_transporters(a, b, ctx));
          trace += w * static_cast<double>(parity_sign(a) * parity_sign(b)) * pair_trace(a, b, ctx).real();
        }
      CHECK(std::abs(r.moments.m2 - eig) < 1e-9);
      CHECK(std::abs(eig - count) < 1e-9);
      CHECK(std::abs(count - trace) < 1e-9);
    }
  }
}

TEST_CASE("quadruple counts and exponential sums") {
  SUBCASE("serial and parallel agree") {
    const auto ctx = build_hecke_context(A0, 11);
    for (i64 C : {0, 1, 5}) {
      CHECK(sol_count({1, 1}, {1, 1}, {1, 1}, {1, 1}, C, ctx) == serial::sol_count({1, 1}, {1, 1}, {1, 1}, {1, 1}, C, ctx));
      CHECK(sol_count({1, 1}, {1, 1}, {0, 1}, {0, 1}, C, ctx) == serial::sol_count({1, 1}, {1, 1}, {0, 1}, {0, 1}, C, ctx));
    }
    for (i64 t : {1, 6})
      CHECK(exp_sum_fourth({1, 1}, {1, -1}, {0, 1}, {0, 1}, t, ctx) ==
            serial::exp_sum_fourth({1, 1}, {1, -1}, {0, 1}, {0, 1}, t, ctx));
  }

  SUBCASE("leading terms") {
    for (i64 N : {11, 19}) {
      const auto ctx = build_hecke_context(A0, N);
      const double c = static_cast<double>(ctx.order());
      const auto all = static_cast<double>(sol_count({1, 1}, {1, 1}, {1, 1}, {1, 1}, 0, ctx));
      const auto pat = static_cast<double>(sol_count({1, 1}, {1, 1}, {0, 1}, {0, 1}, 0, ctx));
      CHECK(std::abs(all - 2.0 * c * c) <= 30.0 * c);
      CHECK(std::abs(pat - c * c) <= 30.0 * c);
    }
  }

  SUBCASE("calibration at N = 11 and inert agreement") {
    const std::vector<Quadruple> probes{{{1, 1}, {1, 1}, {1, 1}, {1, 1}},
                                        {{1, 1}, {1, -1}, {0, 1}, {0, 1}},
                                        {{1, 0}, {1, 1}, {2, 1}, {1, 1}},
                                        {{1, 1}, {1, 0}, {1, 1}, {1, 0}}};
    const auto ctx = build_hecke_context(A0, 11);
    const auto cal = calibrate_t(ctx, eigenbasis(ctx), probes);
    CHECK(cal.p == 1);
    CHECK(cal.q == 2);
    CHECK(cal.t == rational_mod(1, 2, 11));
    CHECK(cal.residual < 1e-9);
    for (i64 N : {13, 19}) {
      const auto c = build_hecke_context(A0, N);
      const auto b = eigenbasis(c);
      for (const auto& p : probes)
        CHECK(std::abs(exp_sum_fourth(p.k, p.l, p.m, p.n, rational_mod(1, 2, N), c) - eigen_quad_sum(p.k, p.l, p.m, p.n, b)) <
              1e-9);
    }
  }
}

TEST_CASE("generic variance") {
  CHECK(generic_variance(f0(), A0) == doctest::Approx(2.0));
  // (1, 1) A = (7, 5): one orbit, both odd parity.
  TrigPolynomial f = f0();
  f.add({7, 5}, 1.0);
  f.add({-7, -5}, 1.0);
  CHECK(generic_variance(f, A0) == doctest::Approx(8.0));
  CHECK(predictions(f, Q0).variance == doctest::Approx(16.0));
  CHECK(generic_variance(cosine({2, 1}, {0.3, 0.4}), A0) == doctest::Approx(0.5));

  // Moving the support by A leaves the value unchanged.
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    const auto g = oracle::random_real_poly(rng, 2, false);
    TrigPolynomial moved;
    for (const auto& [n, v] : g.coeffs()) moved.add(times(n, A0.matrix()), v);
    CHECK(generic_variance(g, A0) == doctest::Approx(generic_variance(moved, A0)));
  }
}

TEST_CASE("the L operator and the bilinear form") {
  TrigPolynomial one;
  one.add({0, 0}, 1.0);
  CHECK(apply_L(one, Q0).coeffs().empty());
  const auto lf = apply_L(f0(), Q0);
  CHECK(std::abs(lf.coeff({1, 1}) - 2.0) < 1e-15);
  CHECK(std::abs(lf.coeff({-1, -1}) - 2.0) < 1e-15);

  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = oracle::random_real_poly(rng, 2);
    const auto g = oracle::random_real_poly(rng, 2);
    CHECK(bilinear_B(f, g, Q0) == doctest::Approx(bilinear_B(g, f, Q0)));
    CHECK(bilinear_B(f, f, Q0) >= 0.0);
    CHECK(bilinear_B(f, f, Q0) == doctest::Approx(predictions(f, Q0).variance));
    CHECK(std::abs(bilinear_B(apply_L(f, Q0), g, Q0) - bilinear_B(f, apply_L(g, Q0), Q0)) < 1e-10);
  }
}
