#include "catmap/modular.hpp"

#include <cmath>
#include <string>

#include "catmap/error.hpp"

namespace catmap {

i64 pow_mod(i64 base, std::uint64_t exp, i64 m) noexcept {
  i64 result = 1 % m;
  i64 b = reduce(base, m);
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, b, m);
    b = mul_mod(b, b, m);
    exp >>= 1U;
  }
  return result;
}

std::optional<i64> inv_mod(i64 a, i64 m) noexcept {
  i64 old_r = reduce(a, m), r = m;
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 q = old_r / r;
    i64 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  return reduce(old_s, m);
}

i64 crt(i64 r1, i64 m1, i64 r2, i64 m2) {
  const auto inv = inv_mod(m1, m2);
  if (!inv) throw Error(ErrorKind::InvalidArgument, "crt: moduli not coprime");
  // x = r1 + m1 * k with k = (r2 - r1) / m1 mod m2
  const i64 k = mul_mod(reduce(r2 - r1, m2), *inv, m2);
  return reduce(reduce(r1, m1) + m1 * k, m1 * m2);
}

bool is_prime(i64 n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (i64 d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<i64> distinct_prime_factors(i64 n) {
  std::vector<i64> out;
  if (n < 0) n = -n;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<i64> primes_in(i64 lo, i64 hi) {
  std::vector<i64> out;
  for (i64 n = lo < 2 ? 2 : lo; n <= hi; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

int legendre(i64 a, i64 p) noexcept {
  const i64 r = pow_mod(a, static_cast<std::uint64_t>((p - 1) / 2), p);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

std::optional<i64> sqrt_mod(i64 a, i64 p) noexcept {
  a = reduce(a, p);
  if (a == 0) return 0;
  if (legendre(a, p) != 1) return std::nullopt;
  // Primes here are small; a linear scan is exact and cheap.
  for (i64 x = 1; x < p; ++x)
    if (mul_mod(x, x, p) == a) return x;
  return std::nullopt;
}

i64 primitive_root(i64 p) {
  if (!is_prime(p)) throw Error(ErrorKind::BadPrime, "primitive_root: " + std::to_string(p) + " is not prime");
  if (p == 2) return 1;
  const auto factors = distinct_prime_factors(p - 1);
  for (i64 g = 2; g < p; ++g) {
    bool ok = true;
    for (i64 q : factors) {
      if (pow_mod(g, static_cast<std::uint64_t>((p - 1) / q), p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error(ErrorKind::IdentityViolation, "no primitive root found mod " + std::to_string(p));
}

bool is_perfect_square(i64 n) noexcept {
  if (n < 0) return false;
  auto r = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

i64 checked_add(i64 a, i64 b) {
  i64 out;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorKind::InvalidArgument, "integer overflow in addition");
  return out;
}

i64 checked_mul(i64 a, i64 b) {
  i64 out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorKind::InvalidArgument, "integer overflow in multiplication");
  return out;
}

std::ostream& operator<<(std::ostream& os, const Freq& n) { return os << '(' << n.n1 << ',' << n.n2 << ')'; }

i64 omega(Freq m, Freq n) { return checked_add(checked_mul(m.n1, n.n2), -checked_mul(m.n2, n.n1)); }

i64 Mat2::det() const { return checked_add(checked_mul(a, d), -checked_mul(b, c)); }

std::ostream& operator<<(std::ostream& os, const Mat2& m) {
  return os << "[[" << m.a << ',' << m.b << "],[" << m.c << ',' << m.d << "]]";
}

Mat2 reduce(const Mat2& m, i64 modulus) noexcept {
  return {reduce(m.a, modulus), reduce(m.b, modulus), reduce(m.c, modulus), reduce(m.d, modulus)};
}

Mat2 mul_mod(const Mat2& x, const Mat2& y, i64 modulus) noexcept {
  const auto mm = [modulus](i64 p, i64 q) { return mul_mod(p, q, modulus); };
  return {reduce(mm(x.a, y.a) + mm(x.b, y.c), modulus), reduce(mm(x.a, y.b) + mm(x.b, y.d), modulus),
          reduce(mm(x.c, y.a) + mm(x.d, y.c), modulus), reduce(mm(x.c, y.b) + mm(x.d, y.d), modulus)};
}

i64 det_mod(const Mat2& m, i64 modulus) noexcept {
  return reduce(mul_mod(m.a, m.d, modulus) - mul_mod(m.b, m.c, modulus), modulus);
}

std::optional<Mat2> inv_mod(const Mat2& m, i64 modulus) noexcept {
  const auto inv_det = inv_mod(det_mod(m, modulus), modulus);
  if (!inv_det) return std::nullopt;
  const i64 k = *inv_det;
  return Mat2{mul_mod(m.d, k, modulus), mul_mod(-m.b, k, modulus), mul_mod(-m.c, k, modulus),
              mul_mod(m.a, k, modulus)};
}

Freq times(Freq n, const Mat2& m) {
  return {checked_add(checked_mul(n.n1, m.a), checked_mul(n.n2, m.c)),
          checked_add(checked_mul(n.n1, m.b), checked_mul(n.n2, m.d))};
}

Freq times_mod(Freq n, const Mat2& m, i64 modulus) noexcept {
  return {reduce(mul_mod(n.n1, m.a, modulus) + mul_mod(n.n2, m.c, modulus), modulus),
          reduce(mul_mod(n.n1, m.b, modulus) + mul_mod(n.n2, m.d, modulus), modulus)};
}

}  // namespace catmap
