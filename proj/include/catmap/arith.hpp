#pragma once

#include <optional>
#include <vector>

#include "catmap/modular.hpp"

namespace catmap {

/// A hyperbolic cat map A = [[a, b], [c, d]] in SL(2, Z) with A = I (mod 2).
/// Only constructible through validate_cat_map.
class CatMap {
 public:
  i64 a() const noexcept { return m_.a; }
  i64 b() const noexcept { return m_.b; }
  i64 c() const noexcept { return m_.c; }
  i64 d() const noexcept { return m_.d; }
  i64 trace() const noexcept { return trace_; }
  /// Discriminant t^2 - 4 of the characteristic polynomial.
  i64 disc() const noexcept { return disc_; }
  const Mat2& matrix() const noexcept { return m_; }

  friend CatMap validate_cat_map(i64 a, i64 b, i64 c, i64 d);

 private:
  CatMap(Mat2 m, i64 t, i64 disc) : m_(m), trace_(t), disc_(disc) {}
  Mat2 m_;
  i64 trace_;
  i64 disc_;
};

/// Throws DetNotOne, NotHyperbolic or ParityViolation.
CatMap validate_cat_map(i64 a, i64 b, i64 c, i64 d);

/// Q(x, y) = qxx x^2 + qxy x y + qyy y^2.
struct QuadraticForm {
  i64 qxx = 0;
  i64 qxy = 0;
  i64 qyy = 0;

  i64 operator()(Freq n) const;
  /// Q(n) mod `modulus`, without overflow for any n.
  i64 eval_mod(Freq n, i64 modulus) const noexcept;
};

/// Q(x, y) = c x^2 + (d - a) x y - b y^2, the norm form; preserved by
/// column vectors n -> A n.
QuadraticForm quadratic_form(const CatMap& m);

/// Q(-y, x) = -b x^2 + (a - d) x y + c y^2, preserved by row vectors
/// n -> n A. Frequencies move this way, so level sets, f#, V_nu and the
/// transporters all use this form.
QuadraticForm frequency_form(const CatMap& m);

/// x + y alpha in Z[alpha] / modulus, where alpha^2 = trace * alpha - 1.
struct OrderElement {
  i64 x = 1;
  i64 y = 0;
  i64 modulus = 2;
  i64 trace = 0;

  friend bool operator==(const OrderElement&, const OrderElement&) = default;
};

OrderElement multiply(const OrderElement& u, const OrderElement& v);
/// x^2 + t x y + y^2 mod the element's modulus.
i64 norm(const OrderElement& e) noexcept;
/// Matrix of multiplication by e on the ideal Z[c, alpha - a]: x I + y A.
Mat2 iota(const OrderElement& e, const CatMap& m) noexcept;

enum class SplitType { Split, Inert };

const char* to_string(SplitType s) noexcept;

/// Split iff disc is a nonzero square mod N. Throws BadPrime for non-odd-prime
/// N and Ramified when N divides disc.
SplitType split_type(const CatMap& m, i64 N);

/// The Hecke group C(2N): units of Z[alpha]/2N of norm 1 that are 1 mod 2,
/// with a generator and their images in SL(2, Z/2N).
struct HeckeContext {
  i64 N = 0;
  CatMap catmap;
  SplitType split = SplitType::Inert;
  std::vector<OrderElement> elements;
  std::size_t generator = 0;
  std::vector<Mat2> images;        // iota(beta) mod 2N
  std::vector<Mat2> images_mod_n;  // iota(beta) mod N

  i64 modulus() const noexcept { return 2 * N; }
  std::size_t order() const noexcept { return elements.size(); }
  const OrderElement& generator_element() const { return elements.at(generator); }
  const Mat2& generator_image() const { return images.at(generator); }
};

/// Throws BadPrime when N is even, composite, or divides disc or c.
HeckeContext build_hecke_context(const CatMap& m, i64 N);

/// Multiplicative order of e (which must be a unit); brute force.
std::size_t element_order(const OrderElement& e);

/// All n with max(|n1|, |n2|) <= radius and Q(n) = nu, lexicographic.
std::vector<Freq> level_set(const QuadraticForm& q, i64 nu, i64 radius);

/// Some image B (reduced mod N) with m = n B (mod N), if any.
std::optional<Mat2> transporter(Freq m, Freq n, const HeckeContext& ctx);

}  // namespace catmap
