#include "catmap/charsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "catmap/error.hpp"

namespace catmap {

namespace {

// Column eigenvector of A for eigenvalue lambda, mod N.
Freq eigenvector(const Mat2& A, i64 lambda, i64 N) {
  if (reduce(A.b, N) != 0) return {reduce(A.b, N), reduce(lambda - A.a, N)};
  if (reduce(A.c, N) != 0) return {reduce(lambda - A.d, N), reduce(A.c, N)};
  return reduce(lambda - A.a, N) == 0 ? Freq{1, 0} : Freq{0, 1};
}

i64 lift(i64 r, i64 N, i64 parity) { return crt(reduce(r, N), N, parity, 2); }

}  // namespace

SplitDiagonalization diagonalize_mod(const CatMap& m, i64 N) {
  if (split_type(m, N) != SplitType::Split) {
    std::ostringstream os;
    os << "N=" << N << " is inert for disc=" << m.disc();
    throw Error(ErrorKind::NotSplit, os.str());
  }
  const auto s = sqrt_mod(reduce(m.disc(), N), N);
  const i64 half = *inv_mod(2, N);
  const i64 l1 = mul_mod(m.trace() + *s, half, N);
  const i64 l2 = mul_mod(m.trace() - *s, half, N);
  const Mat2& A = m.matrix();
  const Freq v1 = eigenvector(A, l1, N);
  Freq v2 = eigenvector(A, l2, N);
  const i64 det = reduce(mul_mod(v1.n1, v2.n2, N) - mul_mod(v2.n1, v1.n2, N), N);
  const i64 det_inv = *inv_mod(det, N);
  v2 = {mul_mod(v2.n1, det_inv, N), mul_mod(v2.n2, det_inv, N)};

  SplitDiagonalization sd;
  sd.N = N;
  sd.M = {lift(v1.n1, N, 1), lift(v2.n1, N, 0), lift(v1.n2, N, 0), lift(v2.n2, N, 1)};
  sd.Dg = {lift(l1, N, 1), 0, 0, lift(l2, N, 1)};
  const i64 md = 2 * N;
  if (mul_mod(A, sd.M, md) != mul_mod(sd.M, sd.Dg, md) || det_mod(sd.M, md) != 1)
    throw Error(ErrorKind::IdentityViolation, "A M != M Dg or det M != 1 mod 2N");
  return sd;
}

DirichletCharacter::DirichletCharacter(i64 N, i64 k, std::optional<i64> root)
    : N_(N), k_(reduce(k, N - 1)), root_(root.value_or(primitive_root(N))), table_(static_cast<std::size_t>(N)) {
  if (!is_prime(N) || N < 3) throw Error(ErrorKind::BadPrime, "character modulus must be an odd prime");
  const RootsOfUnity roots(N - 1);
  i64 u = 1;
  for (i64 j = 0; j < N - 1; ++j) {
    if (j > 0 && u == 1) throw Error(ErrorKind::InvalidArgument, "not a primitive root");
    table_[static_cast<std::size_t>(u)] = roots[mul_mod(k_, j, N - 1)];
    u = mul_mod(u, root_, N);
  }
}

cplx charsum_matrix_element(Freq n, const DirichletCharacter& chi, const SplitDiagonalization& sd) {
  if (chi.is_trivial()) throw Error(ErrorKind::TrivialCharacter, "the trivial character is covered by the operator route");
  const i64 N = sd.N;
  const i64 md = 2 * N;
  const Freq mm = times_mod(n, sd.M, md);
  const RootsOfUnity roots(md);
  cplx acc{};
  for (i64 q = 1; q < N; ++q) acc += roots[mul_mod(2 * mm.n2, q, md)] * chi(q + mm.n1) * std::conj(chi(q));
  return roots[mul_mod(mm.n1, mm.n2, md)] * acc / static_cast<double>(N - 1);
}

std::vector<cplx> charsum_matrix_elements(Freq n, const SplitDiagonalization& sd, std::optional<i64> root) {
  const i64 r = root.value_or(primitive_root(sd.N));
  const i64 count = sd.N - 2;
  std::vector<cplx> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
  for (i64 k = 1; k <= count; ++k)
    out[static_cast<std::size_t>(k - 1)] = charsum_matrix_element(n, DirichletCharacter(sd.N, k, r), sd);
  return out;
}

namespace serial {

std::vector<cplx> charsum_matrix_elements(Freq n, const SplitDiagonalization& sd, std::optional<i64> root) {
  const i64 r = root.value_or(primitive_root(sd.N));
  std::vector<cplx> out;
  for (i64 k = 1; k <= sd.N - 2; ++k) out.push_back(charsum_matrix_element(n, DirichletCharacter(sd.N, k, r), sd));
  return out;
}

}  // namespace serial

StateVector charsum_state(const DirichletCharacter& chi, const SplitDiagonalization& sd) {
  const i64 N = sd.N;
  StateVector c(chi.table());
  c *= std::sqrt(static_cast<double>(N) / static_cast<double>(N - 1));
  return hecke_operator(sd.M, N).apply(c);
}

int character_label(const DirichletCharacter& chi, const SplitDiagonalization& sd, const HeckeEigenbasis& basis) {
  const StateVector psi = charsum_state(chi, sd);
  const StateVector u = basis.generator_operator.apply(psi);
  return basis.label_of(inner(u, psi));
}

std::pair<StateVector, StateVector> canonical_pair(const SplitDiagonalization& sd) {
  const i64 N = sd.N;
  const LinearOperator U = hecke_operator(sd.M, N);
  StateVector delta(N), rest(N);
  delta[0] = std::sqrt(static_cast<double>(N));
  const double w = std::sqrt(static_cast<double>(N) / static_cast<double>(N - 1));
  for (i64 q = 1; q < N; ++q) rest[q] = w;
  return {U.apply(delta), U.apply(rest)};
}

HeckeEigenbasis canonicalize(HeckeEigenbasis basis, const SplitDiagonalization& sd, double tol) {
  if (!basis.flagged_pair) throw Error(ErrorKind::NotSplit, "basis has no flagged pair");
  auto [psi1, psi2] = canonical_pair(sd);
  const auto [i, j] = *basis.flagged_pair;
  const cplx lambda = basis.eigenvalues[i];
  for (const StateVector* psi : {&psi1, &psi2}) {
    StateVector r = basis.generator_operator.apply(*psi);
    for (i64 q = 0; q < r.dim(); ++q) r[q] -= lambda * (*psi)[q];
    if (std::sqrt(std::real(inner(r, r))) > tol)
      throw Error(ErrorKind::IdentityViolation, "canonical pair is not in the doubled eigenspace");
  }
  basis.vectors[i] = std::move(psi1);
  basis.vectors[j] = std::move(psi2);
  basis.choice = BasisChoice::Canonical;
  return basis;
}

CrossValidation cross_validate(Freq n, const HeckeEigenbasis& basis, const SplitDiagonalization& sd,
                               std::optional<i64> root) {
  const i64 N = sd.N;
  const i64 r = root.value_or(primitive_root(N));
  const auto values = charsum_matrix_elements(n, sd, r);
  const auto elements = matrix_elements(n, basis);

  CrossValidation cv;
  cv.characters = values.size();
  std::vector<cplx> plain;
  for (std::size_t j = 0; j < elements.size(); ++j) {
    if (basis.is_flagged(j))
      cv.leftovers.push_back(elements[j]);
    else
      plain.push_back(elements[j]);
  }
  for (i64 k = 1; k <= N - 2; ++k) {
    const DirichletCharacter chi(N, k, r);
    const int label = character_label(chi, sd, basis);
    cv.labels.push_back(label);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < elements.size(); ++j)
      if (!basis.is_flagged(j) && basis.labels[j] == label)
        best = std::abs(values[static_cast<std::size_t>(k - 1)] - elements[j]);
    cv.by_label = std::max(cv.by_label, best);
  }

  auto sorted = values;
  const auto by_value = [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
  std::sort(sorted.begin(), sorted.end(), by_value);
  std::sort(plain.begin(), plain.end(), by_value);
  if (sorted.size() != plain.size()) {
    cv.by_multiset = std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t j = 0; j < sorted.size(); ++j) cv.by_multiset = std::max(cv.by_multiset, std::abs(sorted[j] - plain[j]));
  }
  return cv;
}

}  // namespace catmap
