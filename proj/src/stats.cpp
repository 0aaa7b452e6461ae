#include "catmap/stats.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <set>
#include <sstream>

#include "catmap/error.hpp"

namespace catmap {

cplx f_sharp(const TrigPolynomial& f, const QuadraticForm& q, i64 nu) {
  cplx acc{};
  for (const auto& [n, v] : f.coeffs())
    if (q(n) == nu) acc += static_cast<double>(parity_sign(n)) * v;
  return acc;
}

std::map<i64, cplx> attained_levels(const TrigPolynomial& f, const QuadraticForm& q) {
  std::map<i64, cplx> out;
  for (const auto& [n, v] : f.coeffs()) {
    if (n.is_zero()) continue;
    out[q(n)] += static_cast<double>(parity_sign(n)) * v;
  }
  return out;
}

SupportThreshold support_threshold(const TrigPolynomial& f, const QuadraticForm& q, i64 N) {
  SupportThreshold th;
  std::set<i64> residues;
  const auto levels = attained_levels(f, q);
  for (const auto& [nu, _] : levels) {
    th.max_abs_level = std::max(th.max_abs_level, nu < 0 ? -nu : nu);
    if (reduce(nu, N) == 0) th.units_mod_n = false;
    if (!residues.insert(reduce(nu, N)).second) th.distinct_mod_n = false;
  }
  th.conservative = N > 2 * th.max_abs_level;
  return th;
}

cplx v_of(Freq n, const StateVector& psi) {
  return std::sqrt(static_cast<double>(psi.dim())) * static_cast<double>(parity_sign(n)) * translation_element(n, psi);
}

namespace {

cplx v_of(Freq n, const StateVector& psi, const RootsOfUnity& roots) {
  return std::sqrt(static_cast<double>(psi.dim())) * static_cast<double>(parity_sign(n)) *
         translation_element(n, psi, roots);
}

std::string describe_mismatch(i64 nu, Freq a, Freq b, cplx va, cplx vb) {
  std::ostringstream os;
  os << "V_" << nu << " differs between representatives " << a << " (" << va << ") and " << b << " (" << vb << ")";
  return os.str();
}

}  // namespace

double v_nu(i64 nu, const StateVector& psi, const QuadraticForm& q, i64 radius, double tol) {
  const auto reps = level_set(q, nu, radius);
  if (reps.empty()) return 0.0;
  const RootsOfUnity roots(2 * psi.dim());
  const cplx v = v_of(reps[0], psi, roots);
  if (reps.size() > 1 && reduce(nu, psi.dim()) != 0) {
    const cplx w = v_of(reps[1], psi, roots);
    if (std::abs(v - w) > tol) throw Error(ErrorKind::RepresentativeMismatch, describe_mismatch(nu, reps[0], reps[1], v, w));
  }
  if (std::abs(v.imag()) > tol) {
    std::ostringstream os;
    os << "V_" << nu << " has imaginary part " << v.imag();
    throw Error(ErrorKind::IdentityViolation, os.str());
  }
  return v.real();
}

Predictions predictions(const TrigPolynomial& f, const QuadraticForm& q) {
  Predictions p;
  for (const auto& [nu, s] : attained_levels(f, q)) {
    const double a2 = std::norm(s);
    p.variance += a2;
    p.fourth += 2.0 * a2 * a2;
  }
  return p;
}

Moments empirical_moments(std::span<const double> values) {
  Moments m;
  if (values.empty()) return m;
  for (double x : values) {
    const double x2 = x * x;
    m.m2 += x2;
    m.m4 += x2 * x2;
  }
  m.m2 /= static_cast<double>(values.size());
  m.m4 /= static_cast<double>(values.size());
  return m;
}

Moments empirical_moments(const SpectralReport& report) { return empirical_moments(report.F); }

namespace {

struct Level {
  i64 nu;
  double fsharp;
  Freq first;
  std::optional<Freq> second;
};

struct Prepared {
  std::vector<std::pair<Freq, cplx>> terms;  // support minus the origin
  std::vector<Level> levels;
  SpectralReport report;
};

Prepared prepare(const TrigPolynomial& f, const HeckeEigenbasis& basis, const QuadraticForm& q,
                 const HeckeContext& ctx, double tol, i64 search_radius) {
  if (!f.is_real_valued(tol)) throw Error(ErrorKind::NotRealValued, "observable has f^(-n) != conj f^(n)");
  Prepared p;
  auto& r = p.report;
  r.N = ctx.N;
  r.split = ctx.split;
  r.choice = basis.choice;
  r.labels = basis.labels;
  r.threshold = support_threshold(f, q, ctx.N);
  if (!r.threshold.admissible()) {
    std::ostringstream os;
    os << "some attained level Q(n) is divisible by N=" << ctx.N;
    throw Error(ErrorKind::ThresholdTooSmall, os.str());
  }
  for (const auto& [n, v] : f.coeffs())
    if (!n.is_zero()) p.terms.emplace_back(n, v);
  const i64 radius = std::max(search_radius, f.radius());
  for (const auto& [nu, s] : attained_levels(f, q)) {
    const auto reps = level_set(q, nu, radius);
    Level lv{nu, s.real(), reps.at(0), std::nullopt};
    if (reps.size() > 1) lv.second = reps[1];
    p.levels.push_back(lv);
    r.f_sharp[nu] = s.real();
    r.V[nu].assign(basis.size(), 0.0);
  }
  r.F.assign(basis.size(), 0.0);
  r.flagged.assign(basis.size(), false);
  for (std::size_t j = 0; j < basis.size(); ++j) r.flagged[j] = basis.is_flagged(j);
  r.prediction = predictions(f, q);
  return p;
}

struct RowResult {
  double F = 0.0;
  double imag = 0.0;
  double residual = 0.0;
  std::vector<double> V;
};

RowResult compute_row(const Prepared& p, const StateVector& psi, const RootsOfUnity& roots, double tol) {
  const double sqrtN = std::sqrt(static_cast<double>(psi.dim()));
  RowResult row;
  cplx direct{};
  for (const auto& [n, v] : p.terms) direct += v * translation_element(n, psi, roots);
  direct *= sqrtN;
  cplx rewrite{};
  row.V.reserve(p.levels.size());
  for (const auto& lv : p.levels) {
    const cplx v = v_of(lv.first, psi, roots);
    if (lv.second) {
      const cplx w = v_of(*lv.second, psi, roots);
      if (std::abs(v - w) > tol)
        throw Error(ErrorKind::RepresentativeMismatch, describe_mismatch(lv.nu, lv.first, *lv.second, v, w));
    }
    rewrite += lv.fsharp * v;
    row.V.push_back(v.real());
  }
  row.F = direct.real();
  row.imag = std::abs(direct.imag());
  row.residual = std::abs(direct - rewrite);
  return row;
}

void finish(Prepared& p, std::vector<RowResult>& rows, double tol) {
  auto& r = p.report;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    r.F[j] = rows[j].F;
    r.max_imag = std::max(r.max_imag, rows[j].imag);
    r.rewrite_residual = std::max(r.rewrite_residual, rows[j].residual);
    for (std::size_t k = 0; k < p.levels.size(); ++k) r.V[p.levels[k].nu][j] = rows[j].V[k];
  }
  if (r.max_imag > tol) {
    std::ostringstream os;
    os << "max |Im F_j| = " << r.max_imag;
    throw Error(ErrorKind::IdentityViolation, os.str());
  }
  if (r.rewrite_residual > tol) {
    std::ostringstream os;
    os << "level-set rewrite off by " << r.rewrite_residual;
    throw Error(ErrorKind::IdentityViolation, os.str());
  }
  r.moments = empirical_moments(r.F);
}

}  // namespace

SpectralReport normalized_elements(const TrigPolynomial& f, const HeckeEigenbasis& basis, const QuadraticForm& q,
                                   const HeckeContext& ctx, double tol, i64 radius) {
  Prepared p = prepare(f, basis, q, ctx, tol, radius);
  const RootsOfUnity roots(2 * ctx.N);
  const auto count = static_cast<i64>(basis.size());
  std::vector<RowResult> rows(basis.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (i64 j = 0; j < count; ++j) {
    try {
      rows[static_cast<std::size_t>(j)] = compute_row(p, basis.vectors[static_cast<std::size_t>(j)], roots, tol);
    } catch (...) {
#pragma omp critical(catmap_stats_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  finish(p, rows, tol);
  return std::move(p.report);
}

namespace serial {

SpectralReport normalized_elements(const TrigPolynomial& f, const HeckeEigenbasis& basis, const QuadraticForm& q,
                                   const HeckeContext& ctx, double tol, i64 radius) {
  Prepared p = prepare(f, basis, q, ctx, tol, radius);
  const RootsOfUnity roots(2 * ctx.N);
  std::vector<RowResult> rows;
  rows.reserve(basis.size());
  for (const auto& psi : basis.vectors) rows.push_back(compute_row(p, psi, roots, tol));
  finish(p, rows, tol);
  return std::move(p.report);
}

}  // namespace serial

std::size_t count_transporters(Freq m, Freq n, const HeckeContext& ctx) {
  const Freq target = reduce(n, ctx.N);
  return static_cast<std::size_t>(std::count_if(ctx.images_mod_n.begin(), ctx.images_mod_n.end(),
                                                [&](const Mat2& B) { return times_mod(m, B, ctx.N) == target; }));
}

cplx eigen_pair_sum(Freq m, Freq n, const HeckeEigenbasis& basis) {
  const RootsOfUnity roots(2 * basis.N);
  cplx acc{};
  for (const auto& psi : basis.vectors) acc += v_of(m, psi, roots) * std::conj(v_of(n, psi, roots));
  return acc / static_cast<double>(basis.N);
}

cplx eigen_quad_sum(Freq k, Freq l, Freq m, Freq n, const HeckeEigenbasis& basis) {
  const RootsOfUnity roots(2 * basis.N);
  cplx acc{};
  for (const auto& psi : basis.vectors)
    acc += v_of(k, psi, roots) * std::conj(v_of(l, psi, roots)) * v_of(m, psi, roots) *
           std::conj(v_of(n, psi, roots));
  return acc / static_cast<double>(basis.N);
}

namespace {

// Orbit data for the quadruple enumerations, everything reduced mod N.
struct QuadTables {
  i64 N;
  Freq k;
  std::vector<Freq> lB, mB, nB;
  std::vector<std::vector<std::size_t>> by_nB;  // bucket n B4 -> indices

  QuadTables(Freq k0, Freq l, Freq m, Freq n, const HeckeContext& ctx, bool buckets) : N(ctx.N), k(reduce(k0, ctx.N)) {
    for (const auto& B : ctx.images_mod_n) {
      lB.push_back(times_mod(l, B, N));
      mB.push_back(times_mod(m, B, N));
      nB.push_back(times_mod(n, B, N));
    }
    if (buckets) {
      by_nB.resize(static_cast<std::size_t>(N * N));
      for (std::size_t i = 0; i < nB.size(); ++i) by_nB[static_cast<std::size_t>(nB[i].n1 * N + nB[i].n2)].push_back(i);
    }
  }

  // omega(k, -l B2) + omega(m B3, -n B4) mod N.
  i64 phase(std::size_t i2, std::size_t i3, std::size_t i4) const noexcept {
    const Freq& a = lB[i2];
    const Freq& b = mB[i3];
    const Freq& c = nB[i4];
    const i64 w1 = reduce(mul_mod(k.n2, a.n1, N) - mul_mod(k.n1, a.n2, N), N);
    const i64 w2 = reduce(mul_mod(b.n2, c.n1, N) - mul_mod(b.n1, c.n2, N), N);
    return reduce(w1 + w2, N);
  }

  Freq residual(std::size_t i2, std::size_t i3) const noexcept {
    return {reduce(k.n1 - lB[i2].n1 + mB[i3].n1, N), reduce(k.n2 - lB[i2].n2 + mB[i3].n2, N)};
  }
};

}  // namespace

std::size_t sol_count(Freq k, Freq l, Freq m, Freq n, i64 C, const HeckeContext& ctx) {
  const QuadTables tab(k, l, m, n, ctx, true);
  const i64 target = reduce(-C, ctx.N);
  const auto order = static_cast<i64>(ctx.order());
  std::size_t count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
  for (i64 i2 = 0; i2 < order; ++i2)
    for (std::size_t i3 = 0; i3 < ctx.order(); ++i3) {
      const Freq r = tab.residual(static_cast<std::size_t>(i2), i3);
      for (std::size_t i4 : tab.by_nB[static_cast<std::size_t>(r.n1 * ctx.N + r.n2)])
        if (tab.phase(static_cast<std::size_t>(i2), i3, i4) == target) ++count;
    }
  return count * ctx.order();
}

cplx exp_sum_fourth(Freq k, Freq l, Freq m, Freq n, i64 t, const HeckeContext& ctx) {
  const QuadTables tab(k, l, m, n, ctx, true);
  const RootsOfUnity roots(ctx.N);
  const i64 tt = reduce(t, ctx.N);
  const auto order = static_cast<i64>(ctx.order());
  std::vector<cplx> partial(ctx.order());
#pragma omp parallel for schedule(static)
  for (i64 i2 = 0; i2 < order; ++i2) {
    cplx acc{};
    for (std::size_t i3 = 0; i3 < ctx.order(); ++i3) {
      const Freq r = tab.residual(static_cast<std::size_t>(i2), i3);
      for (std::size_t i4 : tab.by_nB[static_cast<std::size_t>(r.n1 * ctx.N + r.n2)])
        acc += roots[mul_mod(tt, tab.phase(static_cast<std::size_t>(i2), i3, i4), ctx.N)];
    }
    partial[static_cast<std::size_t>(i2)] = acc;
  }
  const cplx total = std::accumulate(partial.begin(), partial.end(), cplx{});
  const double c = static_cast<double>(ctx.order());
  const double NN = static_cast<double>(ctx.N);
  return total * (NN * NN / (c * c * c));
}

namespace serial {

std::size_t sol_count(Freq k, Freq l, Freq m, Freq n, i64 C, const HeckeContext& ctx) {
  const QuadTables tab(k, l, m, n, ctx, false);
  const i64 target = reduce(-C, ctx.N);
  std::size_t count = 0;
  for (std::size_t i2 = 0; i2 < ctx.order(); ++i2)
    for (std::size_t i3 = 0; i3 < ctx.order(); ++i3) {
      const Freq r = tab.residual(i2, i3);
      for (std::size_t i4 = 0; i4 < ctx.order(); ++i4)
        if (tab.nB[i4] == r && tab.phase(i2, i3, i4) == target) ++count;
    }
  return count * ctx.order();
}

cplx exp_sum_fourth(Freq k, Freq l, Freq m, Freq n, i64 t, const HeckeContext& ctx) {
  const QuadTables tab(k, l, m, n, ctx, false);
  const RootsOfUnity roots(ctx.N);
  const i64 tt = reduce(t, ctx.N);
  cplx total{};
  for (std::size_t i2 = 0; i2 < ctx.order(); ++i2) {
    cplx acc{};
    for (std::size_t i3 = 0; i3 < ctx.order(); ++i3) {
      const Freq r = tab.residual(i2, i3);
      for (std::size_t i4 = 0; i4 < ctx.order(); ++i4)
        if (tab.nB[i4] == r) acc += roots[mul_mod(tt, tab.phase(i2, i3, i4), ctx.N)];
    }
    total += acc;
  }
  const double c = static_cast<double>(ctx.order());
  const double NN = static_cast<double>(ctx.N);
  return total * (NN * NN / (c * c * c));
}

}  // namespace serial

i64 rational_mod(i64 p, i64 q, i64 N) {
  const auto qi = inv_mod(q, N);
  if (!qi) throw Error(ErrorKind::InvalidArgument, "denominator is not a unit mod N");
  return mul_mod(p, *qi, N);
}

Calibration calibrate_t(const HeckeContext& ctx, const HeckeEigenbasis& basis, const std::vector<Quadruple>& probes) {
  const i64 N = ctx.N;
  std::vector<cplx> target;
  for (const auto& p : probes) target.push_back(eigen_quad_sum(p.k, p.l, p.m, p.n, basis));
  std::vector<double> err(static_cast<std::size_t>(N), 0.0);
  for (i64 t = 0; t < N; ++t)
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const auto& p = probes[i];
      err[static_cast<std::size_t>(t)] =
          std::max(err[static_cast<std::size_t>(t)], std::abs(exp_sum_fourth(p.k, p.l, p.m, p.n, t, ctx) - target[i]));
    }
  Calibration cal;
  cal.N = N;
  cal.residual = *std::min_element(err.begin(), err.end());
  for (i64 t = 0; t < N; ++t)
    if (err[static_cast<std::size_t>(t)] <= cal.residual + 1e-9) cal.ties.push_back(t);

  // Smallest height max(|p|, q), then positive p, then smaller q.
  const auto pick = [&]() {
    for (i64 h = 1; h < N; ++h)
      for (i64 sgn : {1, -1})
        for (i64 q = 1; q <= h; ++q)
          for (i64 a = 0; a <= h; ++a) {
            if (std::max(a, q) != h || std::gcd(a, q) != 1 || (a == 0 && sgn < 0)) continue;
            const i64 t = rational_mod(sgn * a, q, N);
            if (std::find(cal.ties.begin(), cal.ties.end(), t) == cal.ties.end()) continue;
            cal.t = t;
            cal.p = sgn * a;
            cal.q = q;
            return;
          }
    cal.t = cal.p = cal.ties.front();
    cal.q = 1;
  };
  pick();
  return cal;
}

double generic_variance(const TrigPolynomial& f, const CatMap& m) {
  std::map<Freq, cplx> rest;
  for (const auto& [n, v] : f.coeffs())
    if (!n.is_zero()) rest.emplace(n, v);
  const i64 R = f.radius();
  const Mat2 A = m.matrix();
  const Mat2 Ainv{A.d, -A.b, -A.c, A.a};
  const auto norm2 = [](Freq n) {
    return static_cast<double>(n.n1) * static_cast<double>(n.n1) + static_cast<double>(n.n2) * static_cast<double>(n.n2);
  };
  const double box2 = 2.0 * static_cast<double>(R) * static_cast<double>(R);

  double total = 0.0;
  while (!rest.empty()) {
    const Freq start = rest.begin()->first;
    cplx acc = static_cast<double>(parity_sign(start)) * rest.begin()->second;
    rest.erase(rest.begin());
    for (const Mat2& step : {A, Ainv}) {
      // |n A^k|^2 is convex in k, so once it grows past the box it never returns.
      Freq cur = start;
      double prev = norm2(cur);
      for (int it = 0; it < 10000; ++it) {
        cur = times(cur, step);
        const double now = norm2(cur);
        if (auto hit = rest.find(cur); hit != rest.end()) {
          acc += static_cast<double>(parity_sign(cur)) * hit->second;
          rest.erase(hit);
        }
        if (now > prev && now > box2) break;
        prev = now;
      }
    }
    total += std::norm(acc);
  }
  return total;
}

TrigPolynomial apply_L(const TrigPolynomial& f, const QuadraticForm& q) {
  TrigPolynomial out;
  for (const auto& [n, v] : f.coeffs()) {
    const i64 nu = q(n);
    if (nu != 0) out.add(n, static_cast<double>(nu) * v);
  }
  return out;
}

double bilinear_B(const TrigPolynomial& f, const TrigPolynomial& g, const QuadraticForm& q) {
  const auto fl = attained_levels(f, q);
  const auto gl = attained_levels(g, q);
  double acc = 0.0;
  for (const auto& [nu, s] : fl)
    if (auto it = gl.find(nu); it != gl.end()) acc += (s * it->second).real();
  return acc;
}

}  // namespace catmap
