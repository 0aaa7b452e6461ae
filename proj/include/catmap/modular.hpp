#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace catmap {

using i64 = std::int64_t;

// Least non-negative residue of x modulo m (m > 0).
constexpr i64 reduce(i64 x, i64 m) noexcept {
  const i64 r = x % m;
  return r < 0 ? r + m : r;
}

constexpr i64 mul_mod(i64 a, i64 b, i64 m) noexcept {
  const __int128 p = static_cast<__int128>(reduce(a, m)) * reduce(b, m);
  return static_cast<i64>(p % m);
}

i64 pow_mod(i64 base, std::uint64_t exp, i64 m) noexcept;

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<i64> inv_mod(i64 a, i64 m) noexcept;

/// Chinese remainder lift: the x in [0, m1*m2) with x = r1 (m1), x = r2 (m2).
/// Requires coprime moduli.
i64 crt(i64 r1, i64 m1, i64 r2, i64 m2);

bool is_prime(i64 n) noexcept;
std::vector<i64> distinct_prime_factors(i64 n);
std::vector<i64> primes_in(i64 lo, i64 hi);

/// Legendre symbol (a/p) for an odd prime p.
int legendre(i64 a, i64 p) noexcept;

/// Some square root of a modulo an odd prime p, if a is a square.
std::optional<i64> sqrt_mod(i64 a, i64 p) noexcept;

/// Smallest primitive root modulo the prime p.
i64 primitive_root(i64 p);

bool is_perfect_square(i64 n) noexcept;

// Checked integer arithmetic; throws Error{InvalidArgument} on overflow.
i64 checked_add(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);

/// A frequency (lattice point) n = (n1, n2) in Z^2, acted on from the right by
/// 2x2 matrices: n B is the row vector times B.
struct Freq {
  i64 n1 = 0;
  i64 n2 = 0;

  friend constexpr auto operator<=>(const Freq&, const Freq&) = default;
  friend constexpr Freq operator+(Freq u, Freq v) noexcept { return {u.n1 + v.n1, u.n2 + v.n2}; }
  friend constexpr Freq operator-(Freq u, Freq v) noexcept { return {u.n1 - v.n1, u.n2 - v.n2}; }
  friend constexpr Freq operator-(Freq u) noexcept { return {-u.n1, -u.n2}; }

  constexpr bool is_zero() const noexcept { return n1 == 0 && n2 == 0; }
  constexpr i64 radius() const noexcept {
    const i64 a = n1 < 0 ? -n1 : n1;
    const i64 b = n2 < 0 ? -n2 : n2;
    return a > b ? a : b;
  }
};

std::ostream& operator<<(std::ostream& os, const Freq& n);

/// (-1)^{n1 n2}.
constexpr int parity_sign(Freq n) noexcept { return ((n.n1 & 1) && (n.n2 & 1)) ? -1 : 1; }

/// Symplectic form omega(m, n) = m1 n2 - m2 n1.
i64 omega(Freq m, Freq n);

constexpr Freq reduce(Freq n, i64 m) noexcept { return {reduce(n.n1, m), reduce(n.n2, m)}; }

/// Integer 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  i64 a = 1, b = 0, c = 0, d = 1;

  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;

  static constexpr Mat2 identity() noexcept { return {}; }
  i64 det() const;
  i64 trace() const { return checked_add(a, d); }
};

std::ostream& operator<<(std::ostream& os, const Mat2& m);

Mat2 reduce(const Mat2& m, i64 modulus) noexcept;
Mat2 mul_mod(const Mat2& x, const Mat2& y, i64 modulus) noexcept;
i64 det_mod(const Mat2& m, i64 modulus) noexcept;
/// Inverse modulo `modulus`; nullopt when the determinant is not a unit.
std::optional<Mat2> inv_mod(const Mat2& m, i64 modulus) noexcept;

/// Row vector times matrix, exact (overflow checked).
Freq times(Freq n, const Mat2& m);
/// Row vector times matrix, reduced into [0, modulus)^2.
Freq times_mod(Freq n, const Mat2& m, i64 modulus) noexcept;

}  // namespace catmap
