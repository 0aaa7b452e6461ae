#include "catmap/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "catmap/error.hpp"

namespace catmap {

namespace {

double off_diagonal_norm2(const LinearOperator& a) {
  double s = 0.0;
  for (i64 r = 0; r < a.dim(); ++r)
    for (i64 c = r + 1; c < a.dim(); ++c) s += std::norm(a(r, c));
  return 2.0 * s;
}

double frobenius2(const LinearOperator& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::norm(z);
  return s;
}

}  // namespace

HermitianEigen jacobi_eigh(LinearOperator a, double tol, int max_sweeps) {
  const i64 n = a.dim();
  for (i64 r = 0; r < n; ++r) {
    a(r, r) = a(r, r).real();
    for (i64 c = r + 1; c < n; ++c) {
      const cplx h = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = h;
      a(c, r) = std::conj(h);
    }
  }
  LinearOperator v = LinearOperator::identity(n);
  const double scale2 = std::max(frobenius2(a), 1e-300);
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm2(a) <= tol * tol * scale2) break;
    for (i64 p = 0; p < n - 1; ++p) {
      for (i64 q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip rotations that cannot change the diagonal in floating point.
        if (sweep > 3 && std::abs(app) + 100.0 * g == std::abs(app) && std::abs(aqq) + 100.0 * g == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        // Dephase a_pq to the real value g, then apply the real rotation.
        const cplx u = apq / g;
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Unitary V on the (p, q) plane: Vpp = c, Vpq = s, Vqp = -s conj(u), Vqq = c conj(u).
        const cplx vpp = c, vpq = s, vqp = -s * std::conj(u), vqq = c * std::conj(u);
        for (i64 k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * vpp + akq * vqp;
          a(k, q) = akp * vpq + akq * vqq;
        }
        for (i64 k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
          a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
        for (i64 k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * vpp + vkq * vqp;
          v(k, q) = vkp * vpq + vkq * vqq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_diagonal_norm2(a) > 1e4 * tol * tol * scale2)
    throw Error(ErrorKind::DegeneracyUnresolved, "Jacobi iteration did not converge");

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(static_cast<i64>(i), static_cast<i64>(i)).real() <
                                                              a(static_cast<i64>(j), static_cast<i64>(j)).real(); });
  HermitianEigen out{{}, LinearOperator(n), sweep};
  out.values.reserve(static_cast<std::size_t>(n));
  for (i64 j = 0; j < n; ++j) {
    const auto src = static_cast<i64>(order[static_cast<std::size_t>(j)]);
    out.values.push_back(a(src, src).real());
    for (i64 k = 0; k < n; ++k) out.vectors(k, j) = v(k, src);
  }
  return out;
}

}  // namespace catmap
