#include "catmap/heckebasis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "catmap/error.hpp"
#include "catmap/jacobi.hpp"

namespace catmap {

namespace {

constexpr i64 kZero = -1;  // marks a vanishing entry in an exponent row

// Multiplies the row vector e(ex[P] / 2N) on the right by T(v), v in [0, 2N)^2.
std::vector<i64> right_translate(const std::vector<i64>& ex, Freq v, i64 N) {
  const i64 md = 2 * N;
  std::vector<i64> out(ex.size(), kZero);
  for (i64 p = 0; p < N; ++p) {
    const i64 e = ex[static_cast<std::size_t>(p)];
    if (e == kZero) continue;
    const i64 phase = reduce(mul_mod(v.n1, v.n2, md) + mul_mod(2 * v.n2, p, md), md);
    out[static_cast<std::size_t>(reduce(p + v.n1, N))] = reduce(e + phase, md);
  }
  return out;
}

}  // namespace

LinearOperator hecke_operator(const Mat2& B, i64 N) {
  if (N < 3 || N % 2 == 0) throw Error(ErrorKind::NoIntertwiner, "N must be odd and at least 3");
  if (!is_prime(N)) throw Error(ErrorKind::NonUnique, std::to_string(N) + " is not prime");
  const i64 md = 2 * N;
  const Mat2 b = reduce(B, md);
  std::ostringstream name;
  name << b;
  if (b.a % 2 != 1 || b.d % 2 != 1 || b.b % 2 != 0 || b.c % 2 != 0)
    throw Error(ErrorKind::NoIntertwiner, name.str() + " is not congruent to I mod 2");
  if (det_mod(b, md) != 1) throw Error(ErrorKind::NoIntertwiner, "det " + name.str() + " != 1 mod 2N");

  // Rows of U satisfy U[Q+1, :] = U[Q, :] T(e1 B) and U[0, :] T(e2 B) = U[0, :].
  const Freq s{b.a, b.b};  // e1 B
  const Freq r{b.c, b.d};  // e2 B
  std::vector<i64> row(static_cast<std::size_t>(N), kZero);
  if (reduce(r.n1, N) != 0) {
    i64 e = 0;
    i64 p = 0;
    for (i64 k = 0; k < N; ++k) {
      row[static_cast<std::size_t>(p)] = e;
      e = reduce(e + mul_mod(r.n1, r.n2, md) + mul_mod(2 * r.n2, p, md), md);
      p = reduce(p + r.n1, N);
    }
    if (e != 0) throw Error(ErrorKind::NoIntertwiner, "fixed vector of T(e2 B) does not close up");
  } else {
    int hits = 0;
    for (i64 q = 0; q < N; ++q) {
      if (reduce(mul_mod(r.n1, r.n2, md) + mul_mod(2 * r.n2, q, md), md) == 0) {
        row[static_cast<std::size_t>(q)] = 0;
        ++hits;
      }
    }
    if (hits == 0) throw Error(ErrorKind::NoIntertwiner, "T(e2 B) has no fixed vector");
    if (hits > 1) throw Error(ErrorKind::NonUnique, "T(e2 B) has a degenerate fixed space");
  }

  const RootsOfUnity roots(md);
  const auto support = static_cast<double>(std::count_if(row.begin(), row.end(), [](i64 e) { return e != kZero; }));
  const double scale = 1.0 / std::sqrt(support);
  LinearOperator U(N);
  std::vector<i64> cur = row;
  for (i64 q = 0; q < N; ++q) {
    for (i64 p = 0; p < N; ++p) {
      const i64 e = cur[static_cast<std::size_t>(p)];
      if (e != kZero) U(q, p) = scale * roots[e];
    }
    cur = right_translate(cur, s, N);
  }
  if (cur != row) throw Error(ErrorKind::NoIntertwiner, "T(e1 B)^N does not fix the first row");
  return U;
}

const char* to_string(BasisChoice c) noexcept { return c == BasisChoice::Canonical ? "canonical" : "raw"; }

int HeckeEigenbasis::label_of(cplx eigenvalue) const {
  const auto order = static_cast<double>(group_order);
  const double k = std::round((std::arg(eigenvalue) - grid_offset) * order / (2.0 * std::numbers::pi));
  return static_cast<int>(reduce(static_cast<i64>(k) + label_shift, static_cast<i64>(group_order)));
}

namespace {

std::vector<cplx> column(const LinearOperator& v, i64 j) {
  std::vector<cplx> out(static_cast<std::size_t>(v.dim()));
  for (i64 k = 0; k < v.dim(); ++k) out[static_cast<std::size_t>(k)] = v(k, j);
  return out;
}

// Euclidean <x, U x> for a unit vector x.
cplx rayleigh(const LinearOperator& U, const std::vector<cplx>& x) {
  const i64 n = U.dim();
  cplx acc{};
  for (i64 r = 0; r < n; ++r) {
    cplx ux{};
    for (i64 c = 0; c < n; ++c) ux += U(r, c) * x[static_cast<std::size_t>(c)];
    acc += std::conj(x[static_cast<std::size_t>(r)]) * ux;
  }
  return acc;
}

}  // namespace

HeckeEigenbasis eigenbasis(const HeckeContext& ctx) {
  const i64 N = ctx.N;
  const std::size_t order = ctx.order();
  LinearOperator U = hecke_operator(ctx.generator_image(), N);
  const LinearOperator Uh = U.adjoint();

  // Stage 1: Hermitian part (U + U^+) / 2.
  LinearOperator herm = 0.5 * (U + Uh);
  HermitianEigen stage1 = jacobi_eigh(herm);

  // Stage 2: split clusters of the Hermitian part with the anti-Hermitian part.
  constexpr double kClusterTol = 1e-6;
  const LinearOperator anti = cplx(0.0, -0.5) * (U - Uh);
  LinearOperator V = stage1.vectors;
  for (i64 start = 0; start < N;) {
    i64 end = start + 1;
    while (end < N && stage1.values[static_cast<std::size_t>(end)] - stage1.values[static_cast<std::size_t>(end - 1)] < kClusterTol)
      ++end;
    const i64 size = end - start;
    if (size > 1) {
      LinearOperator sub(size);
      for (i64 i = 0; i < size; ++i) {
        const auto vi = column(V, start + i);
        for (i64 j = 0; j < size; ++j) {
          const auto vj = column(V, start + j);
          cplx acc{};
          for (i64 r = 0; r < N; ++r) {
            cplx av{};
            for (i64 c = 0; c < N; ++c) av += anti(r, c) * vj[static_cast<std::size_t>(c)];
            acc += std::conj(vi[static_cast<std::size_t>(r)]) * av;
          }
          sub(i, j) = acc;
        }
      }
      const HermitianEigen inner_eig = jacobi_eigh(sub);
      LinearOperator rotated(N);
      for (i64 r = 0; r < N; ++r)
        for (i64 j = 0; j < size; ++j) {
          cplx acc{};
          for (i64 i = 0; i < size; ++i) acc += V(r, start + i) * inner_eig.vectors(i, j);
          rotated(r, j) = acc;
        }
      for (i64 r = 0; r < N; ++r)
        for (i64 j = 0; j < size; ++j) V(r, start + j) = rotated(r, j);
    }
    start = end;
  }

  // Eigenvalues sit on a rotated grid of |C|-th roots of unity.
  std::vector<cplx> lambda(static_cast<std::size_t>(N));
  for (i64 j = 0; j < N; ++j) lambda[static_cast<std::size_t>(j)] = rayleigh(U, column(V, j));
  cplx grid{};
  for (const auto& l : lambda) grid += std::pow(l / std::abs(l), static_cast<double>(order));
  grid /= std::abs(grid);
  for (const auto& l : lambda) {
    if (std::abs(std::pow(l / std::abs(l), static_cast<double>(order)) - grid) > 1e-6)
      throw Error(ErrorKind::DegeneracyUnresolved, "eigenvalues are not on a grid of |C|-th roots of unity");
  }

  HeckeEigenbasis basis;
  basis.N = N;
  basis.group_order = order;
  basis.grid_offset = std::arg(grid) / static_cast<double>(order);
  basis.label_shift = 0;

  std::vector<int> raw_labels(static_cast<std::size_t>(N));
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t j = 0; j < raw_labels.size(); ++j) {
    raw_labels[j] = basis.label_of(lambda[j]);
    by_label[raw_labels[j]].push_back(j);
  }
  std::optional<int> doubled;
  for (const auto& [k, idx] : by_label) {
    if (idx.size() == 1) continue;
    if (idx.size() > 2 || ctx.split == SplitType::Inert || doubled) {
      std::ostringstream msg;
      msg << "eigenvalue cluster of size " << idx.size() << " at label " << k << " (" << to_string(ctx.split)
          << ", N=" << N << ")";
      throw Error(ErrorKind::DegeneracyUnresolved, msg.str());
    }
    doubled = k;
  }
  if (ctx.split == SplitType::Split) {
    if (!doubled) throw Error(ErrorKind::DegeneracyUnresolved, "split prime without a doubled eigenvalue");
    // The doubled eigenvalue belongs to the quadratic character.
    basis.label_shift = static_cast<int>(order / 2) - *doubled;
  }

  std::vector<std::size_t> perm(static_cast<std::size_t>(N));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> labels(raw_labels.size());
  for (std::size_t j = 0; j < labels.size(); ++j)
    labels[j] = static_cast<int>(reduce(raw_labels[j] + basis.label_shift, static_cast<i64>(order)));
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) { return labels[x] < labels[y]; });

  const double root_n = std::sqrt(static_cast<double>(N));
  for (std::size_t pos = 0; pos < perm.size(); ++pos) {
    const std::size_t j = perm[pos];
    StateVector psi(N);
    for (i64 r = 0; r < N; ++r) psi[r] = root_n * V(r, static_cast<i64>(j));
    basis.vectors.push_back(std::move(psi));
    basis.labels.push_back(labels[j]);
    basis.eigenvalues.push_back(lambda[j]);
    if (pos > 0 && ctx.split == SplitType::Split && basis.labels[pos] == basis.labels[pos - 1])
      basis.flagged_pair = std::make_pair(pos - 1, pos);
  }
  basis.generator_operator = std::move(U);
  return basis;
}

cplx matrix_element(Freq n, const StateVector& psi) { return translation_element(n, psi); }

std::vector<cplx> matrix_elements(Freq n, const HeckeEigenbasis& basis) {
  const RootsOfUnity roots(2 * basis.N);
  const auto count = static_cast<i64>(basis.size());
  std::vector<cplx> out(basis.size());
#pragma omp parallel for schedule(static)
  for (i64 j = 0; j < count; ++j)
    out[static_cast<std::size_t>(j)] = translation_element(n, basis.vectors[static_cast<std::size_t>(j)], roots);
  return out;
}

namespace serial {

std::vector<cplx> matrix_elements(Freq n, const HeckeEigenbasis& basis) {
  std::vector<cplx> out;
  out.reserve(basis.size());
  for (const auto& psi : basis.vectors) out.push_back(translation_element(n, psi));
  return out;
}

}  // namespace serial

double orthonormality_residual(const HeckeEigenbasis& basis) {
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      const cplx expected = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(inner(basis.vectors[i], basis.vectors[j]) - expected));
    }
  return worst;
}

double hecke_invariance_residual(const HeckeEigenbasis& basis, const HeckeContext& ctx, const std::vector<Freq>& probes) {
  double worst = 0.0;
  for (const Freq& n : probes) {
    const auto base = matrix_elements(n, basis);
    for (const auto& B : ctx.images) {
      const auto moved = matrix_elements(times_mod(n, B, ctx.modulus()), basis);
      for (std::size_t j = 0; j < base.size(); ++j) worst = std::max(worst, std::abs(base[j] - moved[j]));
    }
  }
  return worst;
}

double eigen_residual(const HeckeEigenbasis& basis) {
  double worst = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    StateVector r = basis.generator_operator.apply(basis.vectors[j]);
    for (i64 q = 0; q < r.dim(); ++q) r[q] -= basis.eigenvalues[j] * basis.vectors[j][q];
    worst = std::max(worst, std::sqrt(std::real(inner(r, r))));
  }
  return worst;
}

}  // namespace catmap
