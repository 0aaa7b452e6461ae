#include "catmap/arith.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "catmap/error.hpp"

namespace catmap {

CatMap validate_cat_map(i64 a, i64 b, i64 c, i64 d) {
  const Mat2 m{a, b, c, d};
  std::ostringstream name;
  name << m;
  if (m.det() != 1) throw Error(ErrorKind::DetNotOne, "det " + name.str() + " = " + std::to_string(m.det()));
  const i64 t = m.trace();
  if (t <= 2 && t >= -2) throw Error(ErrorKind::NotHyperbolic, "|trace| <= 2 for " + name.str());
  if (reduce(a, 2) != 1 || reduce(d, 2) != 1 || reduce(b, 2) != 0 || reduce(c, 2) != 0)
    throw Error(ErrorKind::ParityViolation, name.str() + " is not congruent to I mod 2");
  const i64 disc = checked_add(checked_mul(t, t), -4);
  if (disc <= 0 || is_perfect_square(disc))
    throw Error(ErrorKind::NotHyperbolic, "discriminant of " + name.str() + " is a square");
  return CatMap(m, t, disc);
}

i64 QuadraticForm::operator()(Freq n) const {
  const i64 xx = checked_mul(checked_mul(n.n1, n.n1), qxx);
  const i64 xy = checked_mul(checked_mul(n.n1, n.n2), qxy);
  const i64 yy = checked_mul(checked_mul(n.n2, n.n2), qyy);
  return checked_add(checked_add(xx, xy), yy);
}

i64 QuadraticForm::eval_mod(Freq n, i64 modulus) const noexcept {
  const i64 x = reduce(n.n1, modulus);
  const i64 y = reduce(n.n2, modulus);
  const i64 xx = mul_mod(mul_mod(x, x, modulus), qxx, modulus);
  const i64 xy = mul_mod(mul_mod(x, y, modulus), qxy, modulus);
  const i64 yy = mul_mod(mul_mod(y, y, modulus), qyy, modulus);
  return reduce(xx + xy + yy, modulus);
}

QuadraticForm quadratic_form(const CatMap& m) { return {m.c(), checked_add(m.d(), -m.a()), -m.b()}; }

QuadraticForm frequency_form(const CatMap& m) { return {-m.b(), checked_add(m.a(), -m.d()), m.c()}; }

OrderElement multiply(const OrderElement& u, const OrderElement& v) {
  if (u.modulus != v.modulus || u.trace != v.trace)
    throw Error(ErrorKind::InvalidArgument, "multiply: elements from different rings");
  const i64 md = u.modulus;
  const i64 yy = mul_mod(u.y, v.y, md);
  const i64 x = reduce(mul_mod(u.x, v.x, md) - yy, md);
  const i64 y = reduce(mul_mod(u.x, v.y, md) + mul_mod(u.y, v.x, md) + mul_mod(yy, u.trace, md), md);
  return {x, y, md, u.trace};
}

i64 norm(const OrderElement& e) noexcept {
  const i64 md = e.modulus;
  return reduce(mul_mod(e.x, e.x, md) + mul_mod(mul_mod(e.x, e.y, md), e.trace, md) + mul_mod(e.y, e.y, md), md);
}

Mat2 iota(const OrderElement& e, const CatMap& m) noexcept {
  const i64 md = e.modulus;
  const Mat2& A = m.matrix();
  return {reduce(e.x + mul_mod(e.y, A.a, md), md), mul_mod(e.y, A.b, md), mul_mod(e.y, A.c, md),
          reduce(e.x + mul_mod(e.y, A.d, md), md)};
}

const char* to_string(SplitType s) noexcept { return s == SplitType::Split ? "split" : "inert"; }

namespace {

void require_odd_prime(i64 N) {
  if (N < 3 || !is_prime(N)) throw Error(ErrorKind::BadPrime, std::to_string(N) + " is not an odd prime");
}

}  // namespace

SplitType split_type(const CatMap& m, i64 N) {
  require_odd_prime(N);
  const int l = legendre(m.disc(), N);
  if (l == 0) throw Error(ErrorKind::Ramified, std::to_string(N) + " divides the discriminant");
  return l == 1 ? SplitType::Split : SplitType::Inert;
}

std::size_t element_order(const OrderElement& e) {
  const OrderElement one{1, 0, e.modulus, e.trace};
  OrderElement cur = e;
  std::size_t k = 1;
  const auto bound = static_cast<std::size_t>(e.modulus * e.modulus);
  while (!(cur == one)) {
    cur = multiply(cur, e);
    if (++k > bound) throw Error(ErrorKind::IdentityViolation, "element is not a unit");
  }
  return k;
}

namespace {

OrderElement power(OrderElement base, std::size_t exp) {
  OrderElement result{1, 0, base.modulus, base.trace};
  while (exp > 0) {
    if (exp & 1U) result = multiply(result, base);
    base = multiply(base, base);
    exp >>= 1U;
  }
  return result;
}

}  // namespace

HeckeContext build_hecke_context(const CatMap& m, i64 N) {
  if (N % 2 == 0 || N < 3 || !is_prime(N))
    throw Error(ErrorKind::BadPrime, std::to_string(N) + " is not an odd prime");
  if (m.disc() % N == 0) throw Error(ErrorKind::BadPrime, std::to_string(N) + " divides the discriminant");
  if (m.c() % N == 0) throw Error(ErrorKind::BadPrime, std::to_string(N) + " divides c");

  HeckeContext ctx{N, m, split_type(m, N), {}, 0, {}, {}};
  const i64 md = 2 * N;
  for (i64 x = 1; x < md; x += 2) {
    for (i64 y = 0; y < md; y += 2) {
      const OrderElement e{x, y, md, reduce(m.trace(), md)};
      if (norm(e) == 1) ctx.elements.push_back(e);
    }
  }
  const auto expected = static_cast<std::size_t>(N - legendre(m.disc(), N));
  if (ctx.elements.size() != expected)
    throw Error(ErrorKind::IdentityViolation, "|C(2N)| = " + std::to_string(ctx.elements.size()) +
                                                  ", expected " + std::to_string(expected));

  // The group is cyclic; test candidates in a seeded random order.
  const std::size_t n = ctx.elements.size();
  const auto factors = distinct_prime_factors(static_cast<i64>(n));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(static_cast<std::uint64_t>(N) * 0x9E3779B97F4A7C15ULL);
  std::shuffle(order.begin(), order.end(), rng);
  const OrderElement one{1, 0, md, reduce(m.trace(), md)};
  bool found = false;
  for (std::size_t idx : order) {
    const auto& e = ctx.elements[idx];
    if (!(power(e, n) == one)) throw Error(ErrorKind::IdentityViolation, "element order does not divide |C|");
    bool generates = true;
    for (i64 p : factors) {
      if (power(e, n / static_cast<std::size_t>(p)) == one) {
        generates = false;
        break;
      }
    }
    if (generates) {
      ctx.generator = idx;
      found = true;
      break;
    }
  }
  if (!found) throw Error(ErrorKind::IdentityViolation, "C(2N) has no generator; arithmetic is inconsistent");

  ctx.images.reserve(n);
  ctx.images_mod_n.reserve(n);
  for (const auto& e : ctx.elements) {
    ctx.images.push_back(iota(e, m));
    ctx.images_mod_n.push_back(reduce(ctx.images.back(), N));
  }
  return ctx;
}

std::vector<Freq> level_set(const QuadraticForm& q, i64 nu, i64 radius) {
  std::vector<Freq> out;
  for (i64 x = -radius; x <= radius; ++x)
    for (i64 y = -radius; y <= radius; ++y)
      if (q({x, y}) == nu) out.push_back({x, y});
  return out;
}

std::optional<Mat2> transporter(Freq m, Freq n, const HeckeContext& ctx) {
  const Freq target = reduce(m, ctx.N);
  for (const auto& B : ctx.images_mod_n)
    if (times_mod(n, B, ctx.N) == target) return B;
  return std::nullopt;
}

}  // namespace catmap
