#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "catmap/charsum.hpp"
#include "catmap/conjecture_mc.hpp"
#include "catmap/error.hpp"
#include "catmap/heckebasis.hpp"
#include "catmap/parallel.hpp"
#include "catmap/stats.hpp"

namespace catmap::cli {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(fmt(v).c_str(), nullptr);
}

std::string freq_text(Freq n) {
  std::ostringstream os;
  os << '(' << n.n1 << ' ' << n.n2 << ')';
  return os.str();
}

using Cell = std::variant<std::string, i64, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string csv() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) os << ',';
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>)
                os << fmt(v);
              else
                os << v;
            },
            row[c]);
      }
      os << '\n';
    }
    return os.str();
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < row.size(); ++c)
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>)
                obj[columns[c]] = num(v);
              else
                obj[columns[c]] = v;
            },
            row[c]);
      arr.push_back(std::move(obj));
    }
    return arr;
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
  f << content;
  if (!f) throw Error(ErrorKind::Io, "write failed for " + path);
}

// With --out P, writes P.json and P.csv; otherwise prints the requested format.
void emit(const RunConfig& cfg, const json& doc, const std::string& csv, std::ostream& out) {
  if (!cfg.out.empty()) {
    write_file(cfg.out + ".json", doc.dump(2) + "\n");
    write_file(cfg.out + ".csv", csv);
    out << cfg.out << ".json\n" << cfg.out << ".csv\n";
    return;
  }
  if (cfg.format == "json")
    out << doc.dump(2) << '\n';
  else
    out << csv;
}

CatMap catmap_of(const RunConfig& cfg) {
  const auto& m = cfg.matrix;
  return validate_cat_map(m[0], m[1], m[2], m[3]);
}

TrigPolynomial observable_of(const RunConfig& cfg) {
  return cfg.obs.empty() ? default_observable() : read_observable(cfg.obs, cfg.symmetrize);
}

std::string observable_id(const RunConfig& cfg) { return cfg.obs.empty() ? "builtin:2cos(2pi(x+y))" : cfg.obs; }

HeckeEigenbasis basis_for(const RunConfig& cfg, const HeckeContext& ctx) {
  HeckeEigenbasis basis = eigenbasis(ctx);
  const bool canonical = ctx.split == SplitType::Split && (cfg.basis == "auto" || cfg.basis == "canonical");
  if (canonical) basis = canonicalize(std::move(basis), diagonalize_mod(ctx.catmap, ctx.N));
  return basis;
}

json moment_json(double value, double prediction, double scaled) {
  return json{{"value", num(value)}, {"prediction", num(prediction)}, {"scaled_error", num(scaled)}};
}

bool admissible_prime(const CatMap& m, const QuadraticForm& q, const TrigPolynomial& f, i64 N) {
  if (N < 3 || !is_prime(N)) return false;
  if (reduce(m.disc(), N) == 0 || reduce(m.c(), N) == 0) return false;
  return support_threshold(f, q, N).admissible();
}

}  // namespace

TrigPolynomial default_observable() {
  TrigPolynomial f;
  f.add({1, 1}, 1.0);
  f.add({-1, -1}, 1.0);
  return f;
}

TrigPolynomial read_observable(const std::string& path, bool symmetrize) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read observable file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, "observable file " + path + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::InvalidArgument, "observable file must hold a JSON array");
  TrigPolynomial f;
  try {
    for (const auto& rec : doc) {
      const Freq n{rec.at("n1").get<i64>(), rec.at("n2").get<i64>()};
      const double re = rec.value("re", 0.0);
      const double im = rec.value("im", 0.0);
      f.add(n, {re, im});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, "observable record: " + std::string(e.what()));
  }
  if (!f.is_real_valued()) {
    if (!symmetrize) throw Error(ErrorKind::NotRealValued, "f^(-n) != conj f^(n) in " + path + " (see --symmetrize)");
    f = f.symmetrized();
  }
  return f;
}

std::pair<i64, i64> parse_prime_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw Error(ErrorKind::InvalidArgument, "prime range must look like LO..HI");
  try {
    std::size_t used_lo = 0, used_hi = 0;
    const std::string lo_text = text.substr(0, dots), hi_text = text.substr(dots + 2);
    const i64 lo = std::stoll(lo_text, &used_lo);
    const i64 hi = std::stoll(hi_text, &used_hi);
    if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw std::invalid_argument("trailing text");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidArgument, "bad prime range '" + text + "'");
  }
}

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::vector<double> out;
  std::string line;
  std::optional<std::size_t> column;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (first) {
      first = false;
      for (std::size_t c = 0; c < cells.size(); ++c)
        if (cells[c] == "F") column = c;
      if (column) continue;
    }
    const std::size_t c = column.value_or(0);
    if (c >= cells.size()) throw Error(ErrorKind::InvalidArgument, "short row in " + path);
    try {
      out.push_back(std::stod(cells[c]));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "not a number in " + path + ": " + cells[c]);
    }
  }
  return out;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.prime) throw Error(ErrorKind::InvalidArgument, "analyze needs --prime");
  const CatMap m = catmap_of(cfg);
  const QuadraticForm q = frequency_form(m);
  const TrigPolynomial f = observable_of(cfg);
  const HeckeContext ctx = build_hecke_context(m, *cfg.prime);
  const HeckeEigenbasis basis = basis_for(cfg, ctx);
  const SpectralReport r = normalized_elements(f, basis, q, ctx, cfg.tol, cfg.radius);

  json doc;
  doc["N"] = r.N;
  doc["matrix"] = cfg.matrix;
  doc["split"] = to_string(r.split);
  doc["basis"] = to_string(r.choice);
  doc["observable"] = observable_id(cfg);
  doc["group_order"] = ctx.order();
  json fs = json::array();
  for (const auto& [nu, v] : r.f_sharp) fs.push_back({{"nu", nu}, {"f_sharp", num(v)}});
  doc["f_sharp"] = fs;
  doc["threshold"] = {{"max_abs_level", r.threshold.max_abs_level},
                      {"levels_nonzero_mod_N", r.threshold.units_mod_n},
                      {"levels_distinct_mod_N", r.threshold.distinct_mod_n},
                      {"N_above_twice_max_level", r.threshold.conservative}};
  doc["moments"] = {{"m2", moment_json(r.moments.m2, r.prediction.variance, r.scaled_variance_error())},
                    {"m4", moment_json(r.moments.m4, r.prediction.fourth, r.scaled_fourth_error())}};
  doc["scaling"] = {{"m2", "(m2 - prediction) * N"}, {"m4", "(m4 - prediction) * sqrt(N)"}};
  doc["checks"] = {{"max_imag_F", num(r.max_imag)},
                   {"rewrite_residual", num(r.rewrite_residual)},
                   {"orthonormality", num(orthonormality_residual(basis))}};

  Table t;
  t.columns = {"j", "label", "flagged", "F"};
  for (const auto& [nu, _] : r.V) t.columns.push_back("V_" + std::to_string(nu));
  json rows = json::array();
  for (std::size_t j = 0; j < r.F.size(); ++j) {
    std::vector<Cell> row{static_cast<i64>(j), static_cast<i64>(r.labels[j]), static_cast<i64>(r.flagged[j]), r.F[j]};
    json jr{{"j", j}, {"label", r.labels[j]}, {"flagged", static_cast<bool>(r.flagged[j])}, {"F", num(r.F[j])}};
    json vs = json::object();
    for (const auto& [nu, vals] : r.V) {
      row.emplace_back(vals[j]);
      vs[std::to_string(nu)] = num(vals[j]);
    }
    jr["V"] = vs;
    rows.push_back(std::move(jr));
    t.rows.push_back(std::move(row));
  }
  doc["rows"] = rows;
  emit(cfg, doc, t.csv(), out);
  return kOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.primes) throw Error(ErrorKind::InvalidArgument, "scan needs --primes LO..HI");
  const CatMap m = catmap_of(cfg);
  const QuadraticForm q = frequency_form(m);
  const TrigPolynomial f = observable_of(cfg);
  std::vector<i64> primes;
  for (i64 N : primes_in(cfg.primes->first, cfg.primes->second))
    if (admissible_prime(m, q, f, N)) primes.push_back(N);
  if (primes.empty()) throw Error(ErrorKind::InvalidArgument, "no admissible prime in the range");

  const McSample mc = sample_Xf(f, q, cfg.samples, cfg.seed);
  std::vector<SpectralReport> reports(primes.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(primes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      const HeckeContext ctx = build_hecke_context(m, primes[static_cast<std::size_t>(i)]);
      reports[static_cast<std::size_t>(i)] = normalized_elements(f, basis_for(cfg, ctx), q, ctx, cfg.tol, cfg.radius);
    } catch (...) {
#pragma omp critical(catmap_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  Table t;
  t.columns = {"N",     "split",  "basis",           "m2", "pred_variance", "scaled_err_m2",
               "m4",    "pred_fourth", "scaled_err_m4", "ks"};
  std::vector<double> pooled;
  for (const auto& r : reports) {
    const double ks = ks_distance(r.F, mc.values);
    pooled.insert(pooled.end(), r.F.begin(), r.F.end());
    t.rows.push_back({r.N, std::string(to_string(r.split)), std::string(to_string(r.choice)), r.moments.m2,
                      r.prediction.variance, r.scaled_variance_error(), r.moments.m4, r.prediction.fourth,
                      r.scaled_fourth_error(), ks});
  }
  json doc;
  doc["matrix"] = cfg.matrix;
  doc["observable"] = observable_id(cfg);
  doc["samples"] = cfg.samples;
  doc["seed"] = cfg.seed;
  doc["scaling"] = {{"m2", "(m2 - prediction) * N"}, {"m4", "(m4 - prediction) * sqrt(N)"}};
  doc["rows"] = t.to_json();
  doc["pooled_ks"] = num(ks_distance(pooled, mc.values));
  emit(cfg, doc, t.csv(), out);
  return kOk;
}

int cmd_mc(const RunConfig& cfg, std::ostream& out) {
  const CatMap m = catmap_of(cfg);
  const QuadraticForm q = frequency_form(m);
  const TrigPolynomial f = observable_of(cfg);
  const McSample mc = sample_Xf(f, q, cfg.samples, cfg.seed);
  const SampleMoments sm = sample_moments(mc.values);
  const Predictions pred = predictions(f, q);

  double bound = 0.0;
  for (const auto& [nu, s] : attained_levels(f, q)) bound += 2.0 * std::abs(s);
  if (bound == 0.0) bound = 1.0;
  const Histogram h = histogram(mc.values, 40, -bound, bound);

  json doc;
  doc["matrix"] = cfg.matrix;
  doc["observable"] = observable_id(cfg);
  doc["samples"] = mc.count;
  doc["seed"] = mc.seed;
  doc["mean"] = {{"value", num(sm.mean)}, {"prediction", 0.0}, {"stderr", num(sm.se_mean)}};
  doc["m2"] = {{"value", num(sm.m2)}, {"prediction", num(pred.variance)}, {"stderr", num(sm.se_m2)}};
  doc["m4"] = {{"value", num(sm.m4)}, {"prediction", num(pred.fourth)}, {"stderr", num(sm.se_m4)}};
  doc["skewness"] = num(sm.skewness);
  doc["histogram"] = {{"lo", num(h.lo)}, {"hi", num(h.hi)}, {"counts", h.counts}};
  if (!cfg.fj.empty()) {
    const auto values = read_values(cfg.fj);
    doc["fj"] = {{"path", cfg.fj}, {"count", values.size()}, {"ks", num(ks_distance(values, mc.values))}};
  }
  Table t;
  t.columns = {"i", "x"};
  for (std::size_t i = 0; i < mc.values.size(); ++i) t.rows.push_back({static_cast<i64>(i), mc.values[i]});
  emit(cfg, doc, t.csv(), out);
  return kOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.prime) throw Error(ErrorKind::InvalidArgument, "oracle needs --prime");
  const i64 N = *cfg.prime;
  if (N > 61 && !cfg.allow_large)
    throw Error(ErrorKind::InvalidArgument, "quadruple enumerations are capped at N <= 61 (see --allow-large)");
  const CatMap m = catmap_of(cfg);
  const QuadraticForm q = frequency_form(m);
  const TrigPolynomial f = observable_of(cfg);
  const HeckeContext ctx = build_hecke_context(m, N);
  const HeckeEigenbasis basis = basis_for(cfg, ctx);
  const double C = static_cast<double>(ctx.order());

  Table t;
  t.columns = {"quantity", "value_re", "value_im", "reference", "abs_diff"};
  const auto add = [&](const std::string& name, cplx value, double reference) {
    t.rows.push_back({name, value.real(), value.imag(), reference, std::abs(value - reference)});
  };

  // Pair identities over the observable's support plus two fixed probes.
  std::vector<Freq> probes;
  for (const auto& [n, v] : f.coeffs())
    if (!n.is_zero()) probes.push_back(n);
  for (Freq extra : {Freq{1, 0}, Freq{0, 1}})
    if (std::find(probes.begin(), probes.end(), extra) == probes.end()) probes.push_back(extra);
  for (Freq a : probes)
    for (Freq b : probes) {
      const std::string tag = "pair" + freq_text(a) + freq_text(b);
      const double sign = static_cast<double>(parity_sign(a) * parity_sign(b));
      const double counted = static_cast<double>(N) / C * static_cast<double>(count_transporters(a, b, ctx));
      add(tag + ".eigen_sum", eigen_pair_sum(a, b, basis), counted);
      add(tag + ".signed_trace", sign * pair_trace(a, b, ctx), counted);
    }

  const std::vector<std::pair<Quadruple, double>> quads = {
      {{{1, 1}, {1, 1}, {1, 1}, {1, 1}}, 2.0},
      {{{1, 1}, {1, 1}, {1, 0}, {1, 0}}, 1.0},
      {{{1, 1}, {1, 0}, {1, 1}, {1, 0}}, 1.0},
      {{{1, 1}, {1, 0}, {1, 0}, {1, 1}}, 1.0},
      {{{1, 1}, {1, 0}, {0, 1}, {1, -1}}, 0.0},
  };
  std::vector<Quadruple> calib;
  for (const auto& [qd, _] : quads) calib.push_back(qd);
  const Calibration cal = calibrate_t(ctx, basis, calib);
  for (const auto& [qd, predicted] : quads) {
    const std::string tag = "quad" + freq_text(qd.k) + freq_text(qd.l) + freq_text(qd.m) + freq_text(qd.n);
    const cplx eig = eigen_quad_sum(qd.k, qd.l, qd.m, qd.n, basis);
    const double sign =
        static_cast<double>(parity_sign(qd.k) * parity_sign(qd.l) * parity_sign(qd.m) * parity_sign(qd.n));
    add(tag + ".eigen_sum", eig, predicted);
    add(tag + ".signed_trace", sign * static_cast<double>(N) * quad_trace(qd.k, qd.l, qd.m, qd.n, ctx), eig.real());
    add(tag + ".exp_sum_calibrated_t", exp_sum_fourth(qd.k, qd.l, qd.m, qd.n, cal.t, ctx), eig.real());
    const double lead = predicted == 2.0 ? 2.0 * C * C : predicted == 1.0 ? C * C : 0.0;
    add(tag + ".sol_count_C0", static_cast<double>(sol_count(qd.k, qd.l, qd.m, qd.n, 0, ctx)), lead);
    add(tag + ".sol_count_C1", static_cast<double>(sol_count(qd.k, qd.l, qd.m, qd.n, 1, ctx)), 0.0);
  }
  add("calibration.t_mod_N", static_cast<double>(cal.t), static_cast<double>(rational_mod(cal.p, cal.q, N)));
  add("calibration.residual", cal.residual, 0.0);

  const Predictions pred = predictions(f, q);
  add("variance.generic", generic_variance(f, m), pred.variance);

  if (ctx.split == SplitType::Split) {
    const SplitDiagonalization sd = diagonalize_mod(m, N);
    double worst = 0.0;
    for (Freq n : probes) worst = std::max(worst, cross_validate(n, basis, sd).by_multiset);
    add("charsum.multiset_gap", worst, 0.0);
  }

  json doc;
  doc["N"] = N;
  doc["matrix"] = cfg.matrix;
  doc["split"] = to_string(ctx.split);
  doc["basis"] = to_string(basis.choice);
  doc["group_order"] = ctx.order();
  doc["calibration"] = {{"t", cal.t}, {"p", cal.p}, {"q", cal.q}, {"residual", num(cal.residual)}, {"ties", cal.ties}};
  doc["rows"] = t.to_json();
  emit(cfg, doc, t.csv(), out);
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix-element statistics for quantized cat maps"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<i64> matrix;
  std::string range;
  std::optional<i64> prime;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--matrix", matrix, "a,b,c,d")->delimiter(',')->expected(4);
    sub->add_option("--obs", cfg.obs, "observable JSON file");
    sub->add_option("--radius", cfg.radius, "level-set search radius");
    sub->add_option("--samples", cfg.samples, "Monte-Carlo draws");
    sub->add_option("--seed", cfg.seed, "Monte-Carlo seed");
    sub->add_option("--basis", cfg.basis, "split-pair basis")->check(CLI::IsMember({"auto", "canonical", "raw"}));
    sub->add_option("--out", cfg.out, "output stem: writes STEM.json and STEM.csv");
    sub->add_option("--format", cfg.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol", cfg.tol, "identity tolerance");
    sub->add_flag("--symmetrize", cfg.symmetrize, "replace f by its real part");
  };
  auto* analyze = app.add_subcommand("analyze", "normalized matrix elements at one prime");
  auto* scan = app.add_subcommand("scan", "moments and KS over a prime range");
  auto* mc = app.add_subcommand("mc", "Monte-Carlo draws of the conjectured limit");
  auto* oracle = app.add_subcommand("oracle", "trace and counting identities at a small prime");
  for (auto* sub : {analyze, scan, mc, oracle}) common(sub);
  for (auto* sub : {analyze, oracle}) sub->add_option("--prime", prime, "odd prime N");
  scan->add_option("--primes", range, "LO..HI")->required();
  mc->add_option("--fj", cfg.fj, "F_j values to compare against");
  oracle->add_flag("--allow-large", cfg.allow_large, "allow N > 61");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (!matrix.empty()) std::copy(matrix.begin(), matrix.end(), cfg.matrix.begin());
    cfg.prime = prime;
    if (!range.empty()) cfg.primes = parse_prime_range(range);
    configure_threads();
    if (*analyze) return cmd_analyze(cfg, out);
    if (*scan) return cmd_scan(cfg, out);
    if (*mc) return cmd_mc(cfg, out);
    return cmd_oracle(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.category()) {
      case ErrorCategory::Validation: return kValidation;
      case ErrorCategory::Invariant: return kInvariant;
      case ErrorCategory::Io: return kIo;
    }
    return kInvariant;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvariant;
  }
}

}  // namespace catmap::cli
