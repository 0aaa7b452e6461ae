#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "catmap/arith.hpp"
#include "catmap/heckebasis.hpp"
#include "catmap/hilbert.hpp"

namespace catmap {

/// A = M Dg M^{-1} (mod 2N) with det M = 1, M = I (mod 2), Dg diagonal.
struct SplitDiagonalization {
  i64 N = 0;
  Mat2 M;
  Mat2 Dg;
};

/// Throws NotSplit for inert N, BadPrime/Ramified as split_type does.
SplitDiagonalization diagonalize_mod(const CatMap& m, i64 N);

/// chi_k(r^j) = e(k j / (N - 1)) for a primitive root r; chi(0) = 0.
class DirichletCharacter {
 public:
  /// Uses the smallest primitive root unless `root` is given.
  DirichletCharacter(i64 N, i64 k, std::optional<i64> root = std::nullopt);

  i64 modulus() const noexcept { return N_; }
  i64 exponent() const noexcept { return k_; }
  i64 root() const noexcept { return root_; }
  bool is_trivial() const noexcept { return k_ == 0; }
  bool is_quadratic() const noexcept { return 2 * k_ == N_ - 1; }
  cplx operator()(i64 u) const { return table_[static_cast<std::size_t>(reduce(u, N_))]; }
  const std::vector<cplx>& table() const noexcept { return table_; }

 private:
  i64 N_;
  i64 k_;
  i64 root_;
  std::vector<cplx> table_;
};

/// e^{i pi m1 m2 / N} (1/(N-1)) sum_Q e(m2 Q / N) chi(Q + m1) conj(chi(Q)),
/// (m1, m2) = n M mod 2N. Throws TrivialCharacter.
cplx charsum_matrix_element(Freq n, const DirichletCharacter& chi, const SplitDiagonalization& sd);

/// Values for every nontrivial character k = 1 .. N-2, parallel over k.
std::vector<cplx> charsum_matrix_elements(Freq n, const SplitDiagonalization& sd,
                                          std::optional<i64> root = std::nullopt);

/// sqrt(N/(N-1)) U(M) chi, the Hecke eigenfunction attached to chi.
StateVector charsum_state(const DirichletCharacter& chi, const SplitDiagonalization& sd);

/// Label of charsum_state(chi) in the basis's convention.
int character_label(const DirichletCharacter& chi, const SplitDiagonalization& sd, const HeckeEigenbasis& basis);

/// sqrt(N) U(M) delta_0 and sqrt(N/(N-1)) U(M) (1 - delta_0).
std::pair<StateVector, StateVector> canonical_pair(const SplitDiagonalization& sd);

/// Replaces the flagged pair by canonical_pair(sd). Throws NotSplit when the
/// basis has no flagged pair and IdentityViolation when the canonical pair
/// is not an eigenvector pair of the generator.
HeckeEigenbasis canonicalize(HeckeEigenbasis basis, const SplitDiagonalization& sd, double tol = 1e-9);

struct CrossValidation {
  std::size_t characters = 0;   // nontrivial characters compared
  double by_label = 0.0;        // max |charsum - eigenbasis| matching by label
  double by_multiset = 0.0;     // max gap after sorting both value lists
  std::vector<int> labels;      // label of each character k = 1 .. N-2
  std::vector<cplx> leftovers;  // eigenbasis values with no character
};

/// Compares the character-sum values at n against <T(n) psi_j, psi_j>.
CrossValidation cross_validate(Freq n, const HeckeEigenbasis& basis, const SplitDiagonalization& sd,
                               std::optional<i64> root = std::nullopt);

namespace serial {
std::vector<cplx> charsum_matrix_elements(Freq n, const SplitDiagonalization& sd,
                                          std::optional<i64> root = std::nullopt);
}  // namespace serial

}  // namespace catmap
