#include "catmap/hilbert.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "catmap/error.hpp"

namespace catmap {

RootsOfUnity::RootsOfUnity(i64 order) : order_(order), table_(static_cast<std::size_t>(order)) {
  for (i64 k = 0; k < order; ++k)
    table_[static_cast<std::size_t>(k)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order));
}

StateVector& StateVector::operator*=(cplx s) {
  for (auto& z : amp_) z *= s;
  return *this;
}

cplx inner(const StateVector& phi, const StateVector& psi) {
  if (phi.dim() != psi.dim()) throw Error(ErrorKind::InvalidArgument, "inner: dimension mismatch");
  cplx acc{};
  for (i64 q = 0; q < phi.dim(); ++q) acc += phi[q] * std::conj(psi[q]);
  return acc / static_cast<double>(phi.dim());
}

StateVector normalized(StateVector psi) {
  const double nrm = std::sqrt(std::real(inner(psi, psi)));
  if (nrm == 0.0) throw Error(ErrorKind::InvalidArgument, "cannot normalize the zero state");
  psi *= 1.0 / nrm;
  return psi;
}

LinearOperator LinearOperator::identity(i64 N) {
  LinearOperator out(N);
  for (i64 i = 0; i < N; ++i) out(i, i) = 1.0;
  return out;
}

LinearOperator LinearOperator::adjoint() const {
  LinearOperator out(n_);
  for (i64 r = 0; r < n_; ++r)
    for (i64 c = 0; c < n_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

cplx LinearOperator::trace() const {
  cplx acc{};
  for (i64 i = 0; i < n_; ++i) acc += (*this)(i, i);
  return acc;
}

StateVector LinearOperator::apply(const StateVector& v) const {
  if (v.dim() != n_) throw Error(ErrorKind::InvalidArgument, "apply: dimension mismatch");
  StateVector out(n_);
  for (i64 r = 0; r < n_; ++r) {
    cplx acc{};
    for (i64 c = 0; c < n_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

LinearOperator& LinearOperator::operator+=(const LinearOperator& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

LinearOperator& LinearOperator::operator-=(const LinearOperator& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

LinearOperator& LinearOperator::operator*=(cplx s) {
  for (auto& z : a_) z *= s;
  return *this;
}

LinearOperator operator+(LinearOperator x, const LinearOperator& y) { return x += y; }
LinearOperator operator-(LinearOperator x, const LinearOperator& y) { return x -= y; }
LinearOperator operator*(cplx s, LinearOperator x) { return x *= s; }

LinearOperator operator*(const LinearOperator& x, const LinearOperator& y) {
  const i64 n = x.dim();
  LinearOperator out(n);
  const cplx* xa = x.data().data();
  const cplx* ya = y.data().data();
  cplx* oa = out.data().data();
#pragma omp parallel for schedule(static)
  for (i64 r = 0; r < n; ++r) {
    for (i64 k = 0; k < n; ++k) {
      const cplx s = xa[r * n + k];
      if (s == cplx{}) continue;
      for (i64 c = 0; c < n; ++c) oa[r * n + c] += s * ya[k * n + c];
    }
  }
  return out;
}

namespace serial {

LinearOperator multiply(const LinearOperator& x, const LinearOperator& y) {
  const i64 n = x.dim();
  LinearOperator out(n);
  for (i64 r = 0; r < n; ++r)
    for (i64 k = 0; k < n; ++k) {
      const cplx s = x(r, k);
      if (s == cplx{}) continue;
      for (i64 c = 0; c < n; ++c) out(r, c) += s * y(k, c);
    }
  return out;
}

}  // namespace serial

double max_abs(const LinearOperator& x) {
  double m = 0.0;
  for (const auto& z : x.data()) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_diff(const LinearOperator& x, const LinearOperator& y) {
  if (x.dim() != y.dim()) throw Error(ErrorKind::InvalidArgument, "max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < x.data().size(); ++i) m = std::max(m, std::abs(x.data()[i] - y.data()[i]));
  return m;
}

cplx trace_with_adjoint(const LinearOperator& x, const LinearOperator& y) {
  cplx acc{};
  for (std::size_t i = 0; i < x.data().size(); ++i) acc += x.data()[i] * std::conj(y.data()[i]);
  return acc;
}

TrigPolynomial::TrigPolynomial(std::map<Freq, cplx> coeffs) : coeffs_(std::move(coeffs)) {}

void TrigPolynomial::add(Freq n, cplx value) { coeffs_[n] += value; }

cplx TrigPolynomial::coeff(Freq n) const {
  const auto it = coeffs_.find(n);
  return it == coeffs_.end() ? cplx{} : it->second;
}

i64 TrigPolynomial::radius() const noexcept {
  i64 r = 0;
  for (const auto& [n, v] : coeffs_) r = std::max(r, n.radius());
  return r;
}

bool TrigPolynomial::is_real_valued(double tol) const {
  for (const auto& [n, v] : coeffs_)
    if (std::abs(coeff(-n) - std::conj(v)) > tol) return false;
  return true;
}

TrigPolynomial TrigPolynomial::symmetrized() const {
  std::map<Freq, cplx> out;
  for (const auto& [n, v] : coeffs_) {
    out[n] += 0.5 * v;
    out[-n] += 0.5 * std::conj(v);
  }
  return TrigPolynomial(std::move(out));
}

TrigPolynomial TrigPolynomial::centered() const {
  auto out = coeffs_;
  out.erase(Freq{0, 0});
  return TrigPolynomial(std::move(out));
}

namespace {

// Row Q of T(n), for n reduced into [0, 2N)^2, has its single nonzero entry
// in column (Q + n1) mod N with value e(E / 2N), E = n1 n2 + 2 n2 Q mod 2N.
inline i64 phase_index(Freq n2N, i64 q, i64 N) noexcept {
  const i64 md = 2 * N;
  return reduce(mul_mod(n2N.n1, n2N.n2, md) + mul_mod(2 * n2N.n2, q, md), md);
}

}  // namespace

LinearOperator translation(Freq n, i64 N) {
  const Freq r = reduce(n, 2 * N);
  const RootsOfUnity roots(2 * N);
  LinearOperator out(N);
  for (i64 q = 0; q < N; ++q) out(q, reduce(q + r.n1, N)) = roots[phase_index(r, q, N)];
  return out;
}

StateVector apply_translation(Freq n, const StateVector& psi) {
  const i64 N = psi.dim();
  const Freq r = reduce(n, 2 * N);
  const RootsOfUnity roots(2 * N);
  StateVector out(N);
  for (i64 q = 0; q < N; ++q) out[q] = roots[phase_index(r, q, N)] * psi[reduce(q + r.n1, N)];
  return out;
}

cplx translation_element(Freq n, const StateVector& psi, const RootsOfUnity& roots) {
  const i64 N = psi.dim();
  const Freq r = reduce(n, 2 * N);
  cplx acc{};
  for (i64 q = 0; q < N; ++q) acc += roots[phase_index(r, q, N)] * psi[reduce(q + r.n1, N)] * std::conj(psi[q]);
  return acc / static_cast<double>(N);
}

cplx translation_element(Freq n, const StateVector& psi) {
  return translation_element(n, psi, RootsOfUnity(2 * psi.dim()));
}

LinearOperator op_from_poly(const TrigPolynomial& f, i64 N) {
  const RootsOfUnity roots(2 * N);
  LinearOperator out(N);
  for (const auto& [n, v] : f.coeffs()) {
    const Freq r = reduce(n, 2 * N);
    for (i64 q = 0; q < N; ++q) out(q, reduce(q + r.n1, N)) += v * roots[phase_index(r, q, N)];
  }
  return out;
}

namespace {

std::vector<Freq> orbit_mod_2n(Freq n, const HeckeContext& ctx) {
  std::vector<Freq> out;
  out.reserve(ctx.images.size());
  for (const auto& B : ctx.images) out.push_back(times_mod(n, B, ctx.modulus()));
  return out;
}

}  // namespace

LinearOperator average_D(Freq n, const HeckeContext& ctx) {
  const i64 N = ctx.N;
  const auto orbit = orbit_mod_2n(n, ctx);
  const RootsOfUnity roots(2 * N);
  const double w = 1.0 / static_cast<double>(orbit.size());
  LinearOperator out(N);
  cplx* oa = out.data().data();
#pragma omp parallel for schedule(static)
  for (i64 q = 0; q < N; ++q)
    for (const Freq& v : orbit) oa[q * N + reduce(q + v.n1, N)] += roots[phase_index(v, q, N)];
  out *= w;
  return out;
}

namespace serial {

LinearOperator average_D(Freq n, const HeckeContext& ctx) {
  const i64 N = ctx.N;
  const auto orbit = orbit_mod_2n(n, ctx);
  const RootsOfUnity roots(2 * N);
  LinearOperator out(N);
  for (const Freq& v : orbit)
    for (i64 q = 0; q < N; ++q) out(q, reduce(q + v.n1, N)) += roots[phase_index(v, q, N)];
  out *= 1.0 / static_cast<double>(orbit.size());
  return out;
}

}  // namespace serial

cplx pair_trace(Freq m, Freq n, const HeckeContext& ctx) {
  return trace_with_adjoint(average_D(m, ctx), average_D(n, ctx));
}

cplx quad_trace(Freq k, Freq l, Freq m, Freq n, const HeckeContext& ctx) {
  const auto Dk = average_D(k, ctx);
  const auto Dl = average_D(l, ctx);
  const auto Dm = average_D(m, ctx);
  const auto Dn = average_D(n, ctx);
  // tr(Dk Dl^+ Dm Dn^+) = tr((Dk Dl^+) (Dn Dm^+)^+)
  return trace_with_adjoint(Dk * Dl.adjoint(), Dn * Dm.adjoint());
}

cplx trace_identity(Freq n, Freq m, const Mat2& B1, const Mat2& B2, i64 N, double tol) {
  const i64 md = 2 * N;
  const Freq v = times_mod(n, B1, md);
  const Freq w = times_mod(m, B2, md);
  const RootsOfUnity roots(md);
  cplx direct{};
  if (reduce(v.n1 - w.n1, N) == 0)
    for (i64 q = 0; q < N; ++q) direct += roots[phase_index(v, q, N) - phase_index(w, q, N)];

  const bool congruent = reduce(v.n1 - w.n1, N) == 0 && reduce(v.n2 - w.n2, N) == 0;
  const cplx expected = congruent ? cplx(static_cast<double>(parity_sign(m) * parity_sign(n) * N), 0.0) : cplx{};
  if (std::abs(direct - expected) > tol) {
    std::ostringstream msg;
    msg << "tr(T(nB1) T(mB2)^+) = " << direct << ", expected " << expected << " for n=" << n << " m=" << m;
    throw Error(ErrorKind::IdentityViolation, msg.str());
  }
  return direct;
}

std::shared_ptr<const LinearOperator> AveragedTranslationCache::get(Freq n) {
  const Freq key = reduce(n, ctx_->modulus());
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto built = std::make_shared<const LinearOperator>(average_D(key, *ctx_));
  std::lock_guard lock(mutex_);
  // First writer wins; later builds of the same key are discarded.
  return cache_.emplace(key, std::move(built)).first->second;
}

}  // namespace catmap
