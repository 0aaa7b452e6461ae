#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "catmap/arith.hpp"
#include "catmap/modular.hpp"

namespace catmap {

using cplx = std::complex<double>;

/// e(k / order) for k in [0, order), tabulated.
class RootsOfUnity {
 public:
  explicit RootsOfUnity(i64 order);
  cplx operator[](i64 k) const noexcept { return table_[static_cast<std::size_t>(reduce(k, order_))]; }
  i64 order() const noexcept { return order_; }

 private:
  i64 order_;
  std::vector<cplx> table_;
};

/// An element of L^2(Z/N) indexed by Q = 0..N-1. The inner product carries a
/// 1/N weight, so a unit state has Euclidean norm sqrt(N).
class StateVector {
 public:
  explicit StateVector(i64 N) : amp_(static_cast<std::size_t>(N)) {}
  explicit StateVector(std::vector<cplx> amplitudes) : amp_(std::move(amplitudes)) {}

  i64 dim() const noexcept { return static_cast<i64>(amp_.size()); }
  cplx& operator[](i64 q) { return amp_[static_cast<std::size_t>(q)]; }
  const cplx& operator[](i64 q) const { return amp_[static_cast<std::size_t>(q)]; }
  std::span<const cplx> amplitudes() const noexcept { return amp_; }
  std::span<cplx> amplitudes() noexcept { return amp_; }

  StateVector& operator*=(cplx s);

 private:
  std::vector<cplx> amp_;
};

/// <phi, psi> = (1/N) sum_Q phi(Q) conj(psi(Q)).
cplx inner(const StateVector& phi, const StateVector& psi);
/// Rescales to <psi, psi> = 1.
StateVector normalized(StateVector psi);

/// Dense N x N complex matrix, row-major.
class LinearOperator {
 public:
  LinearOperator() = default;
  explicit LinearOperator(i64 N) : n_(N), a_(static_cast<std::size_t>(N * N)) {}
  static LinearOperator identity(i64 N);

  i64 dim() const noexcept { return n_; }
  cplx& operator()(i64 r, i64 c) { return a_[static_cast<std::size_t>(r * n_ + c)]; }
  const cplx& operator()(i64 r, i64 c) const { return a_[static_cast<std::size_t>(r * n_ + c)]; }
  std::span<const cplx> data() const noexcept { return a_; }
  std::span<cplx> data() noexcept { return a_; }

  LinearOperator adjoint() const;
  cplx trace() const;
  StateVector apply(const StateVector& v) const;

  LinearOperator& operator+=(const LinearOperator& o);
  LinearOperator& operator-=(const LinearOperator& o);
  LinearOperator& operator*=(cplx s);

 private:
  i64 n_ = 0;
  std::vector<cplx> a_;
};

LinearOperator operator+(LinearOperator x, const LinearOperator& y);
LinearOperator operator-(LinearOperator x, const LinearOperator& y);
LinearOperator operator*(cplx s, LinearOperator x);
/// Matrix product; rows are distributed over OpenMP threads.
LinearOperator operator*(const LinearOperator& x, const LinearOperator& y);

double max_abs(const LinearOperator& x);
double max_abs_diff(const LinearOperator& x, const LinearOperator& y);
/// tr(X Y^dagger) without forming the product.
cplx trace_with_adjoint(const LinearOperator& x, const LinearOperator& y);

/// A real or complex trigonometric polynomial f(x) = sum f^(n) e(n . x).
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  explicit TrigPolynomial(std::map<Freq, cplx> coeffs);

  /// Adds `value` to the coefficient at n.
  void add(Freq n, cplx value);
  cplx coeff(Freq n) const;
  const std::map<Freq, cplx>& coeffs() const noexcept { return coeffs_; }
  /// Largest max(|n1|, |n2|) over the support; 0 for constants.
  i64 radius() const noexcept;
  /// f^(-n) == conj(f^(n)) for every n in the support.
  bool is_real_valued(double tol = 1e-12) const;
  /// (f + conj(f(-.))) / 2 on the Fourier side: the real part of f.
  TrigPolynomial symmetrized() const;
  /// f minus its mean f^(0).
  TrigPolynomial centered() const;

 private:
  std::map<Freq, cplx> coeffs_;
};

/// T_N(n): (T(n) psi)(Q) = e^{i pi n1 n2 / N} e(n2 Q / N) psi(Q + n1).
LinearOperator translation(Freq n, i64 N);
/// O(N) application of T(n).
StateVector apply_translation(Freq n, const StateVector& psi);
/// <T(n) psi, psi> in O(N) with exact integer phase bookkeeping.
cplx translation_element(Freq n, const StateVector& psi);
cplx translation_element(Freq n, const StateVector& psi, const RootsOfUnity& roots);

/// Op_N(f) = sum f^(n) T(n).
LinearOperator op_from_poly(const TrigPolynomial& f, i64 N);

/// D(n) = (1/|C|) sum_{beta in C(2N)} T(n iota(beta)).
LinearOperator average_D(Freq n, const HeckeContext& ctx);

/// tr(D(m) D(n)^dagger).
cplx pair_trace(Freq m, Freq n, const HeckeContext& ctx);
/// tr(D(k) D(l)^dagger D(m) D(n)^dagger).
cplx quad_trace(Freq k, Freq l, Freq m, Freq n, const HeckeContext& ctx);

/// Computes tr(T(n B1) T(m B2)^dagger) directly and checks it against
/// (-1)^{m1 m2 + n1 n2} N when n B1 = m B2 (mod N), 0 otherwise. Throws
/// IdentityViolation on disagreement beyond `tol`.
cplx trace_identity(Freq n, Freq m, const Mat2& B1, const Mat2& B2, i64 N, double tol = 1e-9);

/// Write-once cache of D(n) keyed by n mod 2N; safe for concurrent use.
class AveragedTranslationCache {
 public:
  explicit AveragedTranslationCache(const HeckeContext& ctx) : ctx_(&ctx) {}
  std::shared_ptr<const LinearOperator> get(Freq n);

 private:
  const HeckeContext* ctx_;
  std::mutex mutex_;
  std::map<Freq, std::shared_ptr<const LinearOperator>> cache_;
};

namespace serial {
LinearOperator multiply(const LinearOperator& x, const LinearOperator& y);
LinearOperator average_D(Freq n, const HeckeContext& ctx);
}  // namespace serial

}  // namespace catmap
