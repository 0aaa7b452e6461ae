#include <doctest.h>

#include <random>

#include "catmap/error.hpp"
#include "catmap/heckebasis.hpp"
#include "catmap/jacobi.hpp"
#include "oracles.hpp"

using namespace catmap;

namespace {

const CatMap A0 = validate_cat_map(3, 2, 4, 3);

std::vector<Freq> box(i64 r) {
  std::vector<Freq> out;
  for (i64 a = -r; a <= r; ++a)
    for (i64 b = -r; b <= r; ++b) out.push_back({a, b});
  return out;
}

double egorov_residual(const LinearOperator& U, const Mat2& B, i64 N, i64 radius) {
  double worst = 0.0;
  const auto Uh = U.adjoint();
  for (Freq n : box(radius)) worst = std::max(worst, max_abs_diff(Uh * translation(n, N) * U, translation(times(n, B), N)));
  return worst;
}

// |<x, y>| = 1 for unit-scaled operators equal up to a phase.
double phase_distance(const LinearOperator& x, const LinearOperator& y) {
  cplx overlap{};
  for (std::size_t i = 0; i < x.data().size(); ++i) overlap += std::conj(x.data()[i]) * y.data()[i];
  const cplx phase = overlap / std::abs(overlap);
  return max_abs_diff(phase * x, y);
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

}  // namespace

TEST_CASE("Jacobi eigensolver") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (i64 n : {1, 2, 5, 12}) {
    LinearOperator h(n);
    for (i64 r = 0; r < n; ++r) {
      h(r, r) = g(rng);
      for (i64 c = r + 1; c < n; ++c) {
        h(r, c) = {g(rng), g(rng)};
        h(c, r) = std::conj(h(r, c));
      }
    }
    const auto e = jacobi_eigh(h);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    LinearOperator d(n);
    for (i64 j = 0; j < n; ++j) d(j, j) = e.values[static_cast<std::size_t>(j)];
    CHECK(max_abs_diff(e.vectors * d * e.vectors.adjoint(), h) < 1e-12);
    CHECK(max_abs_diff(e.vectors * e.vectors.adjoint(), LinearOperator::identity(n)) < 1e-12);
  }
}

TEST_CASE("hecke_operator intertwines translations") {
  CHECK(phase_distance(hecke_operator(Mat2::identity(), 5), LinearOperator::identity(5)) < 1e-12);
  for (i64 N : {5, 7, 11, 13}) {
    const auto ctx = build_hecke_context(A0, N);
    for (const auto& B : ctx.images) {
      const auto U = hecke_operator(B, N);
      CHECK(max_abs_diff(U * U.adjoint(), LinearOperator::identity(N)) < 1e-12);
      CHECK(egorov_residual(U, B, N, 2) < 1e-9);
    }
  }
  // The cat map itself is a valid B.
  CHECK(egorov_residual(hecke_operator(A0.matrix(), 7), A0.matrix(), 7, 2) < 1e-9);
}

TEST_CASE("hecke_operator multiplicativity up to phase") {
  const auto ctx = build_hecke_context(A0, 5);
  for (const auto& B1 : ctx.images)
    for (const auto& B2 : ctx.images) {
      const auto prod = hecke_operator(B1, 5) * hecke_operator(B2, 5);
      CHECK(phase_distance(prod, hecke_operator(mul_mod(B1, B2, 10), 5)) < 1e-12);
    }
}

TEST_CASE("hecke_operator rejects invalid input") {
  CHECK(kind_of([] { hecke_operator(Mat2{2, 1, 1, 1}, 5); }) == ErrorKind::NoIntertwiner);
  CHECK(kind_of([] { hecke_operator(Mat2{3, 0, 0, 3}, 5); }) == ErrorKind::NoIntertwiner);
  CHECK(kind_of([] { hecke_operator(Mat2::identity(), 9); }) == ErrorKind::NonUnique);
}

TEST_CASE("eigenbasis at small primes") {
  const std::vector<Freq> probes{{1, 1}, {1, 0}, {0, 1}, {2, -1}};
  for (i64 N : {5, 7, 11, 13, 17, 19, 23}) {
    const auto ctx = build_hecke_context(A0, N);
    const auto basis = eigenbasis(ctx);
    CHECK(basis.size() == static_cast<std::size_t>(N));
    CHECK(orthonormality_residual(basis) < 1e-9);
    CHECK(eigen_residual(basis) < 1e-9);
    CHECK(hecke_invariance_residual(basis, ctx, probes) < 1e-9);
    CHECK(basis.flagged_pair.has_value() == (ctx.split == SplitType::Split));
    if (basis.flagged_pair) CHECK(basis.labels[basis.flagged_pair->first] == static_cast<int>(ctx.order() / 2));

    // Every vector is an eigenvector of every Hecke operator, not just U(g).
    for (const auto& B : ctx.images) {
      const auto U = hecke_operator(B, N);
      for (const auto& psi : basis.vectors) {
        const auto u = U.apply(psi);
        const cplx lam = inner(u, psi);
        StateVector r = u;
        for (i64 q = 0; q < N; ++q) r[q] -= lam * psi[q];
        CHECK(std::sqrt(std::real(inner(r, r))) < 1e-9);
      }
    }

    // Sum of diagonal matrix elements is the trace of T(n).
    cplx total{};
    for (cplx z : matrix_elements({1, 1}, basis)) total += z;
    CHECK(std::abs(total) < 1e-9);

    // D is diagonal in the basis, except inside the flagged block.
    for (Freq n : {Freq{1, 1}, Freq{1, 0}}) {
      const auto D = average_D(n, ctx);
      double off = 0.0, block = 0.0;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto Dpsi = D.apply(basis.vectors[i]);
        for (std::size_t j = 0; j < basis.size(); ++j) {
          if (i == j) continue;
          const double v = std::abs(inner(Dpsi, basis.vectors[j]));
          if (basis.is_flagged(i) && basis.is_flagged(j))
            block = std::max(block, v);
          else
            off = std::max(off, v);
        }
      }
      CHECK(off < 1e-9);
      CHECK(block * std::sqrt(static_cast<double>(N)) <= 5.0);
    }
  }
}

TEST_CASE("matrix elements") {
  const auto ctx = build_hecke_context(A0, 7);
  const auto basis = eigenbasis(ctx);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto& psi = basis.vectors[j];
    CHECK(std::abs(matrix_element({0, 0}, psi) - 1.0) < 1e-12);
    for (Freq n : box(2)) {
      CHECK(std::abs(matrix_element(-n, psi) - std::conj(matrix_element(n, psi))) < 1e-12);
      // Phase blindness.
      StateVector rotated = psi;
      rotated *= std::polar(1.0, u(rng));
      CHECK(std::abs(matrix_element(n, rotated) - matrix_element(n, psi)) < 1e-12);
    }
    for (const auto& B : ctx.images)
      CHECK(std::abs(matrix_element({1, 1}, psi) - matrix_element(times_mod({1, 1}, B, 14), psi)) < 1e-9);
  }
  for (Freq n : box(2)) {
    const auto par = matrix_elements(n, basis);
    const auto ser = serial::matrix_elements(n, basis);
    for (std::size_t j = 0; j < par.size(); ++j) CHECK(par[j] == ser[j]);
  }
}
