#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catmap/arith.hpp"
#include "catmap/hilbert.hpp"

namespace catmap::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kInvariant = 3, kIo = 4 };

struct RunConfig {
  std::array<i64, 4> matrix{3, 2, 4, 3};
  std::optional<i64> prime;
  std::optional<std::pair<i64, i64>> primes;
  std::string obs;            // empty: the built-in 2 cos(2 pi (x + y))
  i64 radius = 0;             // 0: support radius of the observable
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::string basis = "auto";  // auto | canonical | raw
  std::string out;             // empty: stdout
  std::string format = "csv";  // csv | json
  double tol = 1e-8;
  bool symmetrize = false;
  std::string fj;              // F_j values for mc comparison
  bool allow_large = false;    // lift the N <= 61 cap on quadruple enumerations
};

/// JSON array of {n1, n2, re, im}. Throws Io for unreadable files,
/// InvalidArgument for malformed content, NotRealValued unless `symmetrize`.
TrigPolynomial read_observable(const std::string& path, bool symmetrize);
/// f(x) = 2 cos(2 pi (x1 + x2)).
TrigPolynomial default_observable();

/// "LO..HI".
std::pair<i64, i64> parse_prime_range(const std::string& text);

/// Reads numbers from a plain list or from the F column of an analyze CSV.
std::vector<double> read_values(const std::string& path);

int cmd_analyze(const RunConfig& cfg, std::ostream& out);
int cmd_scan(const RunConfig& cfg, std::ostream& out);
int cmd_mc(const RunConfig& cfg, std::ostream& out);
int cmd_oracle(const RunConfig& cfg, std::ostream& out);

/// Full command line (without argv[0]); errors go to `err` and become exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 12 significant digits.
std::string fmt(double v);

}  // namespace catmap::cli
