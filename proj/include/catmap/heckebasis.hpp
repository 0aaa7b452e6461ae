#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "catmap/arith.hpp"
#include "catmap/hilbert.hpp"

namespace catmap {

/// The quantization U_N(B) of B in SL(2, Z/2N), B = I (mod 2), as the unitary
/// intertwiner U^dagger T(n) U = T(n B). Fixed only up to a global phase.
/// Throws NoIntertwiner for an invalid B, NonUnique for composite N.
LinearOperator hecke_operator(const Mat2& B, i64 N);

enum class BasisChoice { Raw, Canonical };
const char* to_string(BasisChoice c) noexcept;

/// Orthonormal joint eigenbasis of the Hecke operators.
struct HeckeEigenbasis {
  i64 N = 0;
  std::size_t group_order = 0;
  std::vector<StateVector> vectors;   // normalized: <psi, psi> = 1
  std::vector<int> labels;            // character exponent k, chi(g) = e(k / |C|)
  std::vector<cplx> eigenvalues;      // of U(iota(g)) on each vector
  std::optional<std::pair<std::size_t, std::size_t>> flagged_pair;  // split case only
  BasisChoice choice = BasisChoice::Raw;

  LinearOperator generator_operator;  // U(iota(g)) with the phase used for labels
  double grid_offset = 0.0;           // eigenvalue angles sit on grid_offset + 2 pi k / |C|
  int label_shift = 0;

  std::size_t size() const noexcept { return vectors.size(); }
  bool is_flagged(std::size_t j) const noexcept {
    return flagged_pair && (flagged_pair->first == j || flagged_pair->second == j);
  }
  /// Character exponent for an eigenvalue of generator_operator.
  int label_of(cplx eigenvalue) const;
};

/// Diagonalizes U(iota(g)) for the context's generator g. Throws
/// DegeneracyUnresolved when the eigenvalue multiplicities differ from the
/// predicted pattern (all simple when inert; one double when split).
HeckeEigenbasis eigenbasis(const HeckeContext& ctx);

/// <T(n) psi, psi>.
cplx matrix_element(Freq n, const StateVector& psi);

/// <T(n) psi_j, psi_j> for every basis vector; parallel over j.
std::vector<cplx> matrix_elements(Freq n, const HeckeEigenbasis& basis);

/// Residuals used by the acceptance and unit suites.
double orthonormality_residual(const HeckeEigenbasis& basis);
double hecke_invariance_residual(const HeckeEigenbasis& basis, const HeckeContext& ctx, const std::vector<Freq>& probes);
double eigen_residual(const HeckeEigenbasis& basis);

namespace serial {
std::vector<cplx> matrix_elements(Freq n, const HeckeEigenbasis& basis);
}  // namespace serial

}  // namespace catmap
