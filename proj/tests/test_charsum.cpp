#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "catmap/charsum.hpp"
#include "catmap/error.hpp"
#include "oracles.hpp"

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

// The defining sum, evaluated directly from the character table.
cplx direct_charsum(Freq n, const DirichletCharacter& chi, const SplitDiagonalization& sd) {
  const i64 N = sd.N;
  const Freq m = times_mod(n, sd.M, 2 * N);
  cplx acc{};
  for (i64 q = 0; q < N; ++q)
    acc += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m.n2 * q) / static_cast<double>(N)) *
           chi(q + m.n1) * std::conj(chi(q));
  return std::polar(1.0, std::numbers::pi * static_cast<double>(m.n1 * m.n2) / static_cast<double>(N)) * acc /
         static_cast<double>(N - 1);
}

}  // namespace

TEST_CASE("diagonalization mod 2N") {
  for (i64 N : {7, 17, 23, 31, 41}) {
    const auto sd = diagonalize_mod(A0, N);
    const i64 M2 = 2 * N;
    const Mat2 A = A0.matrix();
    CHECK(mul_mod(A, sd.M, M2) == mul_mod(sd.M, sd.Dg, M2));
    CHECK(det_mod(sd.M, M2) == 1);
    CHECK(sd.Dg.b == 0);
    CHECK(sd.Dg.c == 0);
    CHECK(sd.M.a % 2 == 1);
    CHECK(sd.M.d % 2 == 1);
    CHECK(sd.M.b % 2 == 0);
    CHECK(sd.M.c % 2 == 0);
  }
  CHECK(kind_of([] { diagonalize_mod(A0, 5); }) == ErrorKind::NotSplit);
  CHECK(kind_of([] { diagonalize_mod(A0, 9); }) == ErrorKind::BadPrime);
}

TEST_CASE("Dirichlet characters") {
  const DirichletCharacter triv(7, 0);
  CHECK(triv.is_trivial());
  CHECK(triv(0) == cplx(0.0, 0.0));
  CHECK(std::abs(triv(3) - 1.0) < 1e-15);
  const DirichletCharacter quad(7, 3);
  CHECK(quad.is_quadratic());
  for (i64 u = 1; u < 7; ++u) CHECK(std::abs(quad(u) - static_cast<double>(legendre(u, 7))) < 1e-12);

  for (i64 N : {7, 17})
    for (i64 k = 0; k < N - 1; ++k) {
      const DirichletCharacter chi(N, k);
      for (i64 u = 1; u < N; ++u)
        for (i64 v = 1; v < N; ++v) CHECK(std::abs(chi(u * v) - chi(u) * chi(v)) < 1e-12);
    }
  CHECK(kind_of([] { charsum_matrix_element({1, 1}, DirichletCharacter(7, 0), diagonalize_mod(A0, 7)); }) ==
        ErrorKind::TrivialCharacter);
}

TEST_CASE("character-sum matrix elements") {
  for (i64 N : {7, 17, 23}) {
    const auto sd = diagonalize_mod(A0, N);
    for (i64 k = 1; k < N - 1; ++k) {
      const DirichletCharacter chi(N, k);
      CHECK(std::abs(charsum_matrix_element({0, 0}, chi, sd) - 1.0) < 1e-12);
      for (Freq n : {Freq{1, 1}, Freq{1, 0}, Freq{2, -1}}) {
        const cplx v = charsum_matrix_element(n, chi, sd);
        CHECK(std::abs(v - direct_charsum(n, chi, sd)) < 1e-12);
        // Trivial bound on a sum of N - 1 unimodular terms over N - 1.
        CHECK(std::abs(v) <= 1.0 + 1e-12);
        // The same value through the state.
        const auto psi = charsum_state(chi, sd);
        CHECK(std::abs(std::real(inner(psi, psi)) - 1.0) < 1e-12);
        CHECK(std::abs(translation_element(n, psi) - v) < 1e-12);
      }
    }
    const auto par = charsum_matrix_elements({1, 1}, sd);
    const auto ser = serial::charsum_matrix_elements({1, 1}, sd);
    REQUIRE(par.size() == static_cast<std::size_t>(N - 2));
    for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
  }
}

TEST_CASE("cross validation against the eigenbasis") {
  for (i64 N : {7, 17, 23, 31}) {
    const auto ctx = build_hecke_context(A0, N);
    const auto basis = eigenbasis(ctx);
    const auto sd = diagonalize_mod(A0, N);
    for (Freq n : {Freq{1, 1}, Freq{1, 0}}) {
      const auto cv = cross_validate(n, basis, sd);
      CHECK(cv.characters == static_cast<std::size_t>(N - 2));
      CHECK(cv.by_label < 1e-8);
      CHECK(cv.by_multiset < 1e-8);
      CHECK(cv.leftovers.size() == 2);
    }
    // Labels do not depend on which primitive root builds the table.
    std::vector<cplx> a = charsum_matrix_elements({1, 1}, sd);
    for (i64 r = 2; r < N; ++r) {
      if (pow_mod(r, (N - 1) / 2, N) == 1) continue;
      bool primitive = true;
      for (i64 e = 1; e < N - 1; ++e)
        if (pow_mod(r, e, N) == 1) primitive = false;
      if (!primitive || r == primitive_root(N)) continue;
      auto b = charsum_matrix_elements({1, 1}, sd, r);
      const auto cmp = [](cplx x, cplx y) { return std::pair(x.real(), x.imag()) < std::pair(y.real(), y.imag()); };
      std::sort(a.begin(), a.end(), cmp);
      std::sort(b.begin(), b.end(), cmp);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
      break;
    }
  }
}

TEST_CASE("canonical pair") {
  for (i64 N : {7, 17}) {
    const auto ctx = build_hecke_context(A0, N);
    const auto sd = diagonalize_mod(A0, N);
    const auto raw = eigenbasis(ctx);
    const auto can = canonicalize(raw, sd);
    CHECK(can.choice == BasisChoice::Canonical);
    CHECK(orthonormality_residual(can) < 1e-9);
    CHECK(eigen_residual(can) < 1e-9);
    const auto [p0, p1] = canonical_pair(sd);
    REQUIRE(can.flagged_pair.has_value());
    CHECK(std::abs(std::real(inner(p0, p0)) - 1.0) < 1e-12);
    CHECK(std::abs(std::real(inner(p1, p1)) - 1.0) < 1e-12);
    CHECK(std::abs(inner(p0, p1)) < 1e-12);
    // Vectors outside the pair are untouched.
    for (std::size_t j = 0; j < raw.size(); ++j)
      if (!raw.is_flagged(j))
        for (i64 q = 0; q < N; ++q) CHECK(can.vectors[j][q] == raw.vectors[j][q]);
  }
  const auto inert = eigenbasis(build_hecke_context(A0, 5));
  CHECK(kind_of([&] { canonicalize(inert, diagonalize_mod(A0, 7)); }) == ErrorKind::NotSplit);
}
