#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catmap/arith.hpp"
#include "catmap/heckebasis.hpp"
#include "catmap/hilbert.hpp"

namespace catmap {

/// f#(nu) = sum over Q(n) = nu of (-1)^{n1 n2} f^(n).
cplx f_sharp(const TrigPolynomial& f, const QuadraticForm& q, i64 nu);

/// nu -> f#(nu) for every nonzero level attained by Q on the support of f.
std::map<i64, cplx> attained_levels(const TrigPolynomial& f, const QuadraticForm& q);

/// When the level-set rewrite of F_j is valid at N.
struct SupportThreshold {
  i64 max_abs_level = 0;         // max |Q(n)| over the support
  bool units_mod_n = true;       // every attained nu != 0 is nonzero mod N
  bool distinct_mod_n = true;    // attained levels stay distinct mod N
  bool conservative = true;      // N > 2 max |Q(n)|

  bool admissible() const noexcept { return units_mod_n; }
};

SupportThreshold support_threshold(const TrigPolynomial& f, const QuadraticForm& q, i64 N);

/// V_nu(psi) from the lexicographically first n in the radius box with
/// Q(n) = nu; 0 when there is none. The second representative, if any, is
/// evaluated too and must agree to `tol` (RepresentativeMismatch otherwise,
/// provided nu is a unit mod N).
double v_nu(i64 nu, const StateVector& psi, const QuadraticForm& q, i64 radius, double tol = 1e-8);

/// sqrt(N) (-1)^{n1 n2} <T(n) psi, psi> for a fixed representative n.
cplx v_of(Freq n, const StateVector& psi);

struct Predictions {
  double variance = 0.0;  // sum |f#(nu)|^2
  double fourth = 0.0;    // 2 sum |f#(nu)|^4
};

Predictions predictions(const TrigPolynomial& f, const QuadraticForm& q);

struct Moments {
  double m2 = 0.0;
  double m4 = 0.0;
};

Moments empirical_moments(std::span<const double> values);

struct SpectralReport {
  i64 N = 0;
  std::string observable;
  SplitType split = SplitType::Inert;
  BasisChoice choice = BasisChoice::Raw;
  std::vector<int> labels;
  std::vector<bool> flagged;
  std::vector<double> F;
  std::map<i64, double> f_sharp;             // real parts; f is real
  std::map<i64, std::vector<double>> V;      // per attained nu, per j
  double max_imag = 0.0;                     // max |Im F_j| before discarding
  double rewrite_residual = 0.0;             // max |F_j - sum f# V_nu|
  SupportThreshold threshold;
  Moments moments;
  Predictions prediction;

  double scaled_variance_error() const { return (moments.m2 - prediction.variance) * static_cast<double>(N); }
  double scaled_fourth_error() const {
    return (moments.m4 - prediction.fourth) * std::sqrt(static_cast<double>(N));
  }
};

Moments empirical_moments(const SpectralReport& report);

/// F_j = sqrt(N) (<Op(f) psi_j, psi_j> - f^(0)) for every basis vector, with
/// the level-set rewrite as a cross-check. Parallel over j. Representatives
/// of each level are searched in the box of max(radius, f.radius()).
/// Throws NotRealValued, ThresholdTooSmall, and IdentityViolation when the
/// rewrite or reality checks fail beyond `tol`.
SpectralReport normalized_elements(const TrigPolynomial& f, const HeckeEigenbasis& basis, const QuadraticForm& q,
                                   const HeckeContext& ctx, double tol = 1e-8, i64 radius = 0);

/// #{beta in C(2N) : n = m iota(beta) (mod N)}.
std::size_t count_transporters(Freq m, Freq n, const HeckeContext& ctx);

/// (1/N) sum_j V_m(psi_j) conj(V_n(psi_j)) with the given representatives.
cplx eigen_pair_sum(Freq m, Freq n, const HeckeEigenbasis& basis);
/// (1/N) sum_j V_k conj(V_l) V_m conj(V_n).
cplx eigen_quad_sum(Freq k, Freq l, Freq m, Freq n, const HeckeEigenbasis& basis);

/// Number of (B1, .., B4) in C(2N)^4 with
///   k B1 - l B2 + m B3 - n B4 = 0 (mod N),
///   omega(k B1, -l B2) + omega(m B3, -n B4) = -C (mod N).
/// Computed as |C| times the count with B1 = I.
std::size_t sol_count(Freq k, Freq l, Freq m, Freq n, i64 C, const HeckeContext& ctx);

/// (N^2 / |C|^4) sum over solutions of the linear constraint of
/// e(t (omega(k B1, -l B2) + omega(m B3, -n B4)) / N).
cplx exp_sum_fourth(Freq k, Freq l, Freq m, Freq n, i64 t, const HeckeContext& ctx);

struct Quadruple {
  Freq k, l, m, n;
};

/// Result of fitting t in exp_sum_fourth to the eigenbasis quadruple sums.
struct Calibration {
  i64 N = 0;
  i64 t = 0;               // residue mod N
  i64 p = 0, q = 1;        // t = p / q (mod N), smallest height among ties
  double residual = 0.0;   // max |exp_sum_fourth - eigen_quad_sum| over the probes
  std::vector<i64> ties;   // every residue within 1e-9 of the best residual
};

Calibration calibrate_t(const HeckeContext& ctx, const HeckeEigenbasis& basis, const std::vector<Quadruple>& probes);

/// p / q reduced mod N.
i64 rational_mod(i64 p, i64 q, i64 N);

/// Variance of a generic (non-Hecke) system: the support minus 0 is split
/// into orbits of n -> n A, and the signed coefficient sums of the classes
/// contribute their squared moduli.
double generic_variance(const TrigPolynomial& f, const CatMap& m);

/// Fourier-side multiplication by Q(n).
TrigPolynomial apply_L(const TrigPolynomial& f, const QuadraticForm& q);
/// sum over nu != 0 of f#(nu) g#(nu).
double bilinear_B(const TrigPolynomial& f, const TrigPolynomial& g, const QuadraticForm& q);

namespace serial {
SpectralReport normalized_elements(const TrigPolynomial& f, const HeckeEigenbasis& basis, const QuadraticForm& q,
                                   const HeckeContext& ctx, double tol = 1e-8, i64 radius = 0);
/// Naive triple loop over (B2, B3, B4).
std::size_t sol_count(Freq k, Freq l, Freq m, Freq n, i64 C, const HeckeContext& ctx);
cplx exp_sum_fourth(Freq k, Freq l, Freq m, Freq n, i64 t, const HeckeContext& ctx);
}  // namespace serial

}  // namespace catmap
