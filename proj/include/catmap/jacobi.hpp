#pragma once

#include <vector>

#include "catmap/hilbert.hpp"

namespace catmap {

struct HermitianEigen {
  std::vector<double> values;   // ascending
  LinearOperator vectors;       // column j is the unit eigenvector for values[j]
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Only the upper
/// triangle's Hermitian-symmetrized content is used.
HermitianEigen jacobi_eigh(LinearOperator h, double tol = 1e-15, int max_sweeps = 60);

}  // namespace catmap
