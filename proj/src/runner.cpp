#include "ntlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ntlab/arith_tables.hpp"
#include "ntlab/error_terms.hpp"
#include "ntlab/inequality.hpp"
#include "ntlab/moments.hpp"
#include "ntlab/parallel.hpp"
#include "ntlab/table_cache.hpp"
#include "ntlab/voronoi.hpp"
#include "ntlab/zeta_line.hpp"

namespace ntlab {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

int exit_status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::OutOfRange:
    case ErrorKind::Coverage:
    case ErrorKind::ConfigParse: return kExitConfig;
    case ErrorKind::ResourceLimit:
    case ErrorKind::Overflow: return kExitResource;
    case ErrorKind::FitFailure:
    case ErrorKind::QuadratureFailure:
    case ErrorKind::CacheInvalid:
    case ErrorKind::AssertionFailed: return kExitAssertion;
  }
  return kExitAssertion;
}

std::uint64_t table_limit_for(std::uint64_t need, bool tau) {
  need = std::max<std::uint64_t>(need, 1);
  const std::uint64_t grain = (need <= 65536 || tau) ? 1024 : 65536;
  const std::uint64_t rounded = (need + grain - 1) / grain * grain;
  if (tau) return std::max(need, std::min(rounded, TableBudget{}.max_tau_limit));
  return rounded;
}

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string cache_dir = ".ntlab-cache";
  std::string output = "ntlab-out";
  unsigned threads = 0;
  bool record_runtime = false;
};

std::string format_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_cell(v[i]);
    return s;
  }
  return v.dump();
}

// Appends JSON lines and CSV rows for one stream of reports.
class Reporter {
 public:
  Reporter(const fs::path& dir, const std::string& stem, std::vector<std::string> columns, std::ostream& out)
      : jsonl_(dir / (stem + ".jsonl")), csv_(dir / (stem + ".csv")), columns_(std::move(columns)), out_(out) {
    fs::create_directories(dir);
  }

  void emit(const Json& row, const std::string& label) {
    append(jsonl_, row.dump() + "\n");
    if (!fs::exists(csv_)) {
      std::string header;
      for (std::size_t i = 0; i < columns_.size(); ++i) header += (i ? "," : "") + columns_[i];
      append(csv_, header + "\n");
    }
    std::string line;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      const auto it = row.find(columns_[i]);
      line += (i ? "," : "") + (it == row.end() ? std::string() : format_cell(*it));
    }
    append(csv_, line + "\n");
    out_ << label << ' ' << row.dump() << '\n';
  }

  void error_record(const Json& row) { append(jsonl_, row.dump() + "\n"); }

  const fs::path& jsonl_path() const { return jsonl_; }

 private:
  static void append(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::app);
    f << text;
    if (!f) fail(ErrorKind::ResourceLimit, "cannot append to " + path.string());
  }

  fs::path jsonl_;
  fs::path csv_;
  std::vector<std::string> columns_;
  std::ostream& out_;
};

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  Json elapsed() const {
    if (!enabled_) return nullptr;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

bool is_integer(double v) { return std::isfinite(v) && v >= 0.0 && v == std::floor(v) && v < 9.0e15; }

const std::vector<std::string> kMomentColumns{"kind", "T",     "U",    "k",        "moment",
                                              "main_term", "ratio", "coeffs", "seed", "runtime_s"};

Json moment_json(const MomentReport& r, const std::vector<double>& coeffs, std::uint64_t seed, const Json& runtime) {
  Json j;
  j["kind"] = r.kind;
  j["T"] = r.T;
  j["U"] = r.U;
  j["k"] = r.k;
  j["moment"] = r.moment;
  j["main_term"] = r.main_term;
  j["ratio"] = optional_json(r.ratio);
  j["coeffs"] = coeffs;
  j["seed"] = seed;
  j["runtime_s"] = runtime;
  return j;
}

struct Context {
  Globals g;
  fs::path output_dir;
  std::string run_id;
  std::ostream& out;
  std::ostream& err;

  std::string stem(const std::string& name) const { return run_id + "_" + name; }

  CachedTable table(ArithKind kind, std::uint64_t need) const {
    return load_or_build_table(g.cache_dir, kind, table_limit_for(need, kind == ArithKind::RamanujanTau));
  }
};

// ---- subcommands ----------------------------------------------------------

struct SieveOpts {
  std::string kind = "d";
  std::uint64_t limit = 0;
};

void run_sieve(const SieveOpts& o, Context& c) {
  const ArithKind kind = parse_arith_kind(o.kind);
  require(o.limit >= 1, ErrorKind::InvalidArgument, "--limit must be >= 1");
  if (kind == ArithKind::RamanujanTau)
    require(o.limit <= TableBudget{}.max_tau_limit, ErrorKind::ResourceLimit, "tau tables are limited to 200000");
  Stopwatch sw(c.g.record_runtime);
  const auto cached = load_or_build_table(c.g.cache_dir, kind, o.limit);
  std::uint64_t checksum = 0;
  for (std::uint64_t n = 1; n <= cached.table.limit(); ++n)
    checksum = checksum * 1099511628211ULL + static_cast<std::uint64_t>(cached.table.value(n));
  Reporter rep(c.output_dir, c.stem("sieve"), {"kind", "limit", "from_cache", "checksum", "cache_file", "runtime_s"},
               c.out);
  Json j;
  j["kind"] = std::string(to_string(kind));
  j["limit"] = o.limit;
  j["from_cache"] = cached.from_cache;
  j["checksum"] = checksum;
  j["cache_file"] = table_cache_path(c.g.cache_dir, kind, o.limit).string();
  j["runtime_s"] = sw.elapsed();
  rep.emit(j, "[sieve]");
}

struct DeltaOpts {
  std::string kind = "delta";
  std::vector<double> x;
};

void run_delta(const DeltaOpts& o, Context& c) {
  const ErrorTermKind kind = parse_error_term_kind(o.kind);
  double x_max = 0.0;
  for (double x : o.x) {
    require(std::isfinite(x) && x >= 0.0, ErrorKind::InvalidArgument, "--x values must be >= 0");
    x_max = std::max(x_max, x);
  }
  const double scale = kind == ErrorTermKind::AlternatingDeltaStar ? 4.0 : 1.0;
  const auto need = static_cast<std::uint64_t>(std::floor(scale * x_max)) + 1;
  if (kind == ErrorTermKind::CuspA)
    require(need <= TableBudget{}.max_tau_limit, ErrorKind::ResourceLimit, "cusp evaluation limited to x <= 200000");
  const auto cached = c.table(source_table(kind), need);
  const SummatoryIndex index(cached.table);
  Reporter rep(c.output_dir, c.stem("delta"), {"kind", "x", "value", "combination"}, c.out);
  for (double x : o.x) {
    Json j;
    j["kind"] = std::string(to_string(kind));
    j["x"] = x;
    if (kind == ErrorTermKind::AlternatingDeltaStar) {
      const auto v = delta_star(x, index);
      require(std::abs(v.combination - v.direct) <= 1e-9 * std::max(1.0, std::abs(v.direct)),
              ErrorKind::AssertionFailed, "Delta* combination and direct form disagree");
      j["value"] = v.direct;
      j["combination"] = v.combination;
    } else {
      j["value"] = error_term(kind, x, index);
      j["combination"] = nullptr;
    }
    rep.emit(j, "[delta]");
  }
}

struct CurveOpts {
  double t_min = 0.0;
  double t_max = 0.0;
  QuadratureConfig q;
};

void run_e_curve(const CurveOpts& o, Context& c) {
  o.q.validate();
  require(o.t_min >= 0.0 && o.t_min < o.t_max, ErrorKind::InvalidArgument, "need 0 <= --t-min < --t-max");
  require(o.t_max <= o.q.max_t, ErrorKind::OutOfRange, "--t-max exceeds --max-t");
  Stopwatch sw(c.g.record_runtime);
  const auto cached = load_or_build_e_curve(c.g.cache_dir, o.t_min, o.t_max, o.q);
  Reporter rep(c.output_dir, c.stem("e-curve"),
               {"t_min", "t_max", "points", "half_step_discrepancy", "from_cache", "e_at_t_max", "cache_file",
                "runtime_s"},
               c.out);
  Json j;
  j["t_min"] = o.t_min;
  j["t_max"] = o.t_max;
  j["points"] = cached.curve.t_grid().size();
  const double disc = cached.curve.half_step_discrepancy();
  j["half_step_discrepancy"] = std::isnan(disc) ? Json(nullptr) : Json(disc);
  j["from_cache"] = cached.from_cache;
  j["e_at_t_max"] = cached.curve.e_values().back();
  j["cache_file"] = e_curve_cache_path(c.g.cache_dir, o.t_min, o.t_max, o.q).string();
  j["runtime_s"] = sw.elapsed();
  rep.emit(j, "[e-curve]");
}

struct MomentOpts {
  std::string kind = "delta";
  double T = 0.0;
  std::vector<double> U;
  int k = 2;
  std::size_t omega_samples = 0;
  double step = 0.0;
};

void run_moment(const MomentOpts& o, Context& c) {
  require(o.k == 2 || o.k == 4, ErrorKind::InvalidArgument, "--k must be 2 or 4");
  require(o.T >= 1.0 && std::isfinite(o.T), ErrorKind::InvalidArgument, "--T must be >= 1");
  require(!o.U.empty(), ErrorKind::InvalidArgument, "at least one --U is needed");
  const bool zeta = o.kind == "e";
  require(zeta || o.kind == "delta" || o.kind == "circle" || o.kind == "cusp", ErrorKind::InvalidArgument,
          "--kind must be delta, circle, cusp or e");
  double u_max = 0.0;
  for (double u : o.U) {
    require(u >= 0.0 && std::isfinite(u), ErrorKind::InvalidArgument, "--U values must be >= 0");
    if (!zeta) require(is_integer(u), ErrorKind::InvalidArgument, "--U must be an integer for discrete sums");
    u_max = std::max(u_max, u);
  }
  if (!zeta) require(is_integer(o.T), ErrorKind::InvalidArgument, "--T must be an integer for discrete sums");
  if (o.k == 4) require(o.kind == "delta" || zeta, ErrorKind::InvalidArgument, "--k 4 is available for delta and e");
  if (o.omega_samples > 0) {
    require(o.kind == "delta" || zeta, ErrorKind::InvalidArgument, "omega probes are available for delta and e");
    require(o.omega_samples >= 1000, ErrorKind::InvalidArgument, "--omega-samples must be >= 1000");
    for (double u : o.U)
      require(u >= 1.0 && u < std::sqrt(o.T), ErrorKind::InvalidArgument, "omega probes need 1 <= U < sqrt(T)");
  }
  if (o.k == 4) require(u_max <= o.T, ErrorKind::InvalidArgument, "fourth-moment probes need G <= T");
  const auto T = static_cast<std::uint64_t>(o.T);
  const auto need = static_cast<std::uint64_t>(2.0 * o.T + u_max) + 2;
  if (o.kind == "cusp")
    require(need <= TableBudget{}.max_tau_limit, ErrorKind::ResourceLimit, "cusp moments limited to 2T + U <= 200000");

  Reporter rep(c.output_dir, c.stem("moment"), kMomentColumns, c.out);
  auto emit = [&](const MomentReport& r, const std::vector<double>& coeffs, const Stopwatch& sw) {
    for (const auto& w : r.warnings) c.err << "warning: " << w << '\n';
    rep.emit(moment_json(r, coeffs, c.g.seed, sw.elapsed()), "[moment]");
  };

  if (zeta) {
    QuadratureConfig q;
    const double lo = o.k == 4 ? o.T - u_max : o.T;
    require(2.0 * o.T + u_max <= q.max_t, ErrorKind::OutOfRange, "E moments limited to 2T + U <= 1e6");
    const auto cached = load_or_build_e_curve(c.g.cache_dir, lo, 2.0 * o.T + u_max, q);
    if (o.omega_samples > 0) {
      Reporter orep(c.output_dir, c.stem("moment-omega"), {"kind", "T", "U", "samples", "seed", "omega"}, c.out);
      for (double u : o.U) {
        Json j{{"kind", "e"}, {"T", o.T}, {"U", u}, {"samples", o.omega_samples}, {"seed", c.g.seed}};
        j["omega"] = omega_probe_e(o.T, u, o.omega_samples, c.g.seed, cached.curve);
        orep.emit(j, "[omega]");
      }
      return;
    }
    for (double u : o.U) {
      Stopwatch sw(c.g.record_runtime);
      const auto r = o.k == 4 ? fourth_moment_probe_e(o.T, u, cached.curve, o.step)
                              : e_diff_sq_integral(o.T, u, cached.curve, o.step);
      emit(r, {}, sw);
    }
    return;
  }

  const ArithKind table_kind = o.kind == "delta"    ? ArithKind::Divisor
                               : o.kind == "circle" ? ArithKind::TwoSquares
                                                    : ArithKind::RamanujanTau;
  const auto cached = c.table(table_kind, need);
  const SummatoryIndex index(cached.table);

  if (o.omega_samples > 0) {
    Reporter orep(c.output_dir, c.stem("moment-omega"), {"kind", "T", "U", "samples", "seed", "omega"}, c.out);
    for (double u : o.U) {
      Json j{{"kind", "delta"}, {"T", o.T}, {"U", u}, {"samples", o.omega_samples}, {"seed", c.g.seed}};
      j["omega"] = omega_probe_delta(T, static_cast<std::uint64_t>(u), o.omega_samples, c.g.seed, index);
      orep.emit(j, "[omega]");
    }
    return;
  }

  std::vector<std::uint64_t> us;
  for (double u : o.U) us.push_back(static_cast<std::uint64_t>(u));
  const bool all_positive = std::all_of(us.begin(), us.end(), [](std::uint64_t u) { return u > 0; });

  if (o.k == 4) {
    for (auto g : us) {
      Stopwatch sw(c.g.record_runtime);
      emit(fourth_moment_probe_delta(T, g, index), {}, sw);
    }
    return;
  }
  if (o.kind == "delta" && us.size() >= 6 && all_positive) {
    Stopwatch sw(c.g.record_runtime);
    const auto fit = delta_moment_fit(T, us, index);
    for (const auto& r : fit.points) emit(r, fit.coeffs, sw);
    return;
  }
  if (o.kind == "circle" && us.size() >= 3 && all_positive) {
    Stopwatch sw(c.g.record_runtime);
    const auto fit = circle_moment_fit(T, us, index);
    for (const auto& r : fit.points) emit(r, fit.coeffs, sw);
    require(fit.leading > 0.0, ErrorKind::AssertionFailed, "circle fit: A1 must be positive");
    return;
  }
  for (auto u : us) {
    Stopwatch sw(c.g.record_runtime);
    const auto r = o.kind == "delta"    ? delta_diff_sq_sum(T, u, index)
                   : o.kind == "circle" ? circle_diff_sq_integral(T, u, index)
                                        : cusp_diff_sq_integral(T, u, index);
    emit(r, {}, sw);
  }
}

struct JutilaOpts {
  std::uint64_t T = 0;
  std::uint64_t H = 0;  // 0: H = T
  std::vector<std::uint64_t> U;
  double terms_factor = 1.0;
};

void run_jutila(const JutilaOpts& o, Context& c) {
  require(o.T >= 1, ErrorKind::InvalidArgument, "--T must be >= 1");
  require(!o.U.empty(), ErrorKind::InvalidArgument, "at least one --U is needed");
  require(o.terms_factor > 0.0, ErrorKind::InvalidArgument, "--terms-factor must be positive");
  const std::uint64_t H = o.H == 0 ? o.T : o.H;
  const std::uint64_t u_max = *std::max_element(o.U.begin(), o.U.end());
  const auto terms = static_cast<std::uint64_t>(o.terms_factor * static_cast<double>(o.T) / 2.0);
  const auto cached = c.table(ArithKind::Divisor, std::max(o.T + H + u_max + 1, terms));
  const SummatoryIndex index(cached.table);
  Reporter rep(c.output_dir, c.stem("jutila"), {"T", "H", "U", "lhs", "rhs", "ratio", "rhs_terms", "runtime_s"}, c.out);
  for (auto u : o.U) {
    Stopwatch sw(c.g.record_runtime);
    const auto r = jutila_identity_check(o.T, H, u, index, o.terms_factor);
    Json j;
    j["T"] = o.T;
    j["H"] = H;
    j["U"] = u;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["ratio"] = r.rhs == 0.0 ? Json(nullptr) : Json(r.ratio());
    j["rhs_terms"] = r.rhs_terms;
    j["runtime_s"] = sw.elapsed();
    rep.emit(j, "[jutila]");
  }
}

struct VoronoiOpts {
  std::string kind = "delta";
  std::vector<std::uint64_t> N{100, 1000, 10000};
  std::size_t samples = 1000;
  double lo = 1e5;
  double hi = 2e5;
};

void run_voronoi(const VoronoiOpts& o, Context& c) {
  const ErrorTermKind kind = parse_error_term_kind(o.kind);
  require(!o.N.empty(), ErrorKind::InvalidArgument, "at least one --N is needed");
  require(o.samples >= 1, ErrorKind::InvalidArgument, "--samples must be >= 1");
  require(o.lo >= 1.0 && o.lo < o.hi, ErrorKind::InvalidArgument, "need 1 <= --lo < --hi");
  const std::uint64_t n_max = *std::max_element(o.N.begin(), o.N.end());
  const double scale = kind == ErrorTermKind::AlternatingDeltaStar ? 4.0 : 1.0;
  const auto need = std::max<std::uint64_t>(n_max, static_cast<std::uint64_t>(scale * o.hi) + 1);
  if (kind == ErrorTermKind::CuspA)
    require(need <= TableBudget{}.max_tau_limit, ErrorKind::ResourceLimit, "cusp series limited to 200000 terms");
  const auto cached = c.table(source_table(kind), need);
  const SummatoryIndex index(cached.table);
  const VoronoiSeries series(kind, cached.table, n_max);
  const auto xs = half_integer_samples(o.samples, o.lo, o.hi, c.g.seed);
  const auto study = truncation_study(series, index, o.N, xs);
  Reporter rep(c.output_dir, c.stem("voronoi-check"), {"kind", "N", "rms_error", "slope", "samples", "seed"}, c.out);
  for (std::size_t i = 0; i < study.n_terms.size(); ++i) {
    Json j;
    j["kind"] = std::string(to_string(kind));
    j["N"] = study.n_terms[i];
    j["rms_error"] = study.rms_error[i];
    j["slope"] = study.n_terms.size() >= 2 ? Json(study.slope) : Json(nullptr);
    j["samples"] = o.samples;
    j["seed"] = c.g.seed;
    rep.emit(j, "[voronoi-check]");
  }
}

struct QuadOpts {
  std::uint64_t N = 0;
  unsigned k = 2;
  double delta = 0.0;
  bool brute_force_check = false;
};

void run_quadruples(const QuadOpts& o, Context& c) {
  require(o.N >= 1 && o.k >= 2 && o.delta >= 0.0, ErrorKind::InvalidArgument, "need --N >= 1, --k >= 2, --delta >= 0");
  require(o.N <= kQuadrupleMaxN, ErrorKind::ResourceLimit, "--N is limited to 120");
  const auto r = count_close_quadruples(o.N, o.k, o.delta);
  const double n = static_cast<double>(o.N);
  require(static_cast<double>(r.count) <= n * n * n * n, ErrorKind::AssertionFailed, "count exceeds N^4");
  if (o.k == 2)
    require(r.count >= 2 * o.N * o.N - o.N, ErrorKind::AssertionFailed, "count below the diagonal 2N^2 - N");
  if (o.brute_force_check)
    require(count_close_quadruples_brute(o.N, o.k, o.delta) == r.count, ErrorKind::AssertionFailed,
            "count disagrees with the direct N^4 loop");
  Reporter rep(c.output_dir, c.stem("quadruples"), {"N", "k", "delta", "count", "bound_scale"}, c.out);
  Json j;
  j["N"] = r.N;
  j["k"] = r.k;
  j["delta"] = r.delta;
  j["count"] = r.count;
  j["bound_scale"] = r.bound_scale;
  rep.emit(j, "[quadruples]");
}

struct LargeOpts {
  double T = 0.0;
  double V = 3.0;
  int k = 2;
  double A = 1.0;
  double step = 0.05;
};

void run_large_values(const LargeOpts& o, Context& c) {
  require(o.T > 1.0 && o.V > 0.0 && o.A > 0.0, ErrorKind::InvalidArgument, "need --T > 1, --V > 0, --A > 0");
  require(o.k >= 1 && o.k <= 4, ErrorKind::InvalidArgument, "--k must be 1..4");
  require(o.step > 0.0 && o.step <= 0.1, ErrorKind::InvalidArgument, "--step must lie in (0, 0.1]");
  QuadratureConfig q;
  const auto [lo, hi] = large_value_curve_range(o.T, o.V, o.A);
  require(lo >= 0.0 && hi <= q.max_t, ErrorKind::OutOfRange, "[T/3 - 2G, 3T + 2G] must lie in [0, 1e6]");
  Stopwatch sw(c.g.record_runtime);
  const auto peaks = scan_peaks(o.T, o.V, o.step, q);
  const auto cached = load_or_build_e_curve(c.g.cache_dir, lo, hi, q);
  const auto r = theorem3_report(peaks, o.k, o.A, cached.curve);
  Reporter rep(c.output_dir, c.stem("large-values"),
               {"T", "V", "k", "A", "G", "R", "rhs", "implied_constant", "runtime_s"}, c.out);
  Json j;
  j["T"] = r.T;
  j["V"] = r.V;
  j["k"] = r.k;
  j["A"] = r.A;
  j["G"] = r.G;
  j["R"] = r.R;
  j["rhs"] = r.rhs;
  j["implied_constant"] = r.implied_constant;
  j["runtime_s"] = sw.elapsed();
  rep.emit(j, "[large-values]");
}

struct FitOpts {
  std::string kind = "d";
  double lo = 1e4;
  double hi = 1e6;
  std::size_t points = 12;
};

void run_fit_summatory(const FitOpts& o, Context& c) {
  const ArithKind kind = parse_arith_kind(o.kind);
  require(o.lo >= 1.0 && o.lo < o.hi, ErrorKind::InvalidArgument, "need 1 <= --lo < --hi");
  require(o.points >= 6, ErrorKind::InvalidArgument, "--points must be >= 6");
  const auto need = static_cast<std::uint64_t>(std::floor(o.hi));
  if (kind == ArithKind::RamanujanTau)
    require(need <= TableBudget{}.max_tau_limit, ErrorKind::ResourceLimit, "tau fits limited to x <= 200000");
  const auto cached = c.table(kind, need);
  const auto fit = fit_summatory(cached.table, geometric_grid(o.lo, o.hi, o.points));
  Reporter rep(c.output_dir, c.stem("fit-summatory"),
               {"kind", "degree", "leading_coeff", "reference_coeff", "relative_error", "constant_coeff",
                "constant_reference", "normalised_spread", "coeffs"},
               c.out);
  Json j;
  j["kind"] = std::string(to_string(kind));
  j["degree"] = fit.degree;
  j["leading_coeff"] = fit.leading_coeff;
  j["reference_coeff"] = optional_json(fit.reference_coeff);
  j["relative_error"] = std::isnan(fit.relative_error) ? Json(nullptr) : Json(fit.relative_error);
  j["constant_coeff"] = optional_json(fit.constant_coeff);
  j["constant_reference"] = optional_json(fit.constant_reference);
  j["normalised_spread"] = fit.normalised_spread;
  j["coeffs"] = fit.coeffs;
  rep.emit(j, "[fit-summatory]");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments on divisor, circle and zeta mean values", "ntlab"};
  app.set_config("--config", "", "TOML or INI file with option values; command-line flags take precedence");
  app.require_subcommand(1, 1);

  Globals g;
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--cache-dir", g.cache_dir, "Directory for table and E-curve caches")
      ->envname("NTLAB_CACHE_DIR")
      ->capture_default_str();
  app.add_option("--output", g.output, "Directory for JSON-lines reports and CSV ledgers")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: all cores)")->capture_default_str();
  app.add_flag("--record-runtime", g.record_runtime, "Fill the runtime_s field (otherwise left empty)");

  SieveOpts sieve_o;
  auto* sieve = app.add_subcommand("sieve", "Build or load a table of d(n), r(n) or tau(n)");
  sieve->add_option("--kind", sieve_o.kind, "d, r or tau")->check(CLI::IsMember({"d", "r", "tau"}))->capture_default_str();
  sieve->add_option("--limit", sieve_o.limit, "Largest n")->required();

  DeltaOpts delta_o;
  auto* delta_cmd = app.add_subcommand("delta", "Evaluate Delta, Delta*, P or A at given points");
  delta_cmd->add_option("--kind", delta_o.kind, "delta, delta-star, circle or cusp")
      ->check(CLI::IsMember({"delta", "delta-star", "circle", "cusp"}))
      ->capture_default_str();
  delta_cmd->add_option("--x", delta_o.x, "Arguments")->delimiter(',')->required();

  CurveOpts curve_o;
  auto* curve = app.add_subcommand("e-curve", "Build or load the E(T) curve");
  curve->add_option("--t-min", curve_o.t_min, "Grid start")->capture_default_str();
  curve->add_option("--t-max", curve_o.t_max, "Grid end")->required();
  curve->add_option("--step", curve_o.q.step, "Panel width (capped at 0.25)")->capture_default_str();
  curve->add_option("--tolerance", curve_o.q.tolerance, "Half-step tolerance per unit length")->capture_default_str();
  curve->add_option("--rs-order", curve_o.q.rs_correction_order, "Riemann-Siegel corrections (0..2)")
      ->capture_default_str();
  curve->add_option("--cutoff", curve_o.q.small_t_cutoff, "Euler-Maclaurin below this t")->capture_default_str();

  MomentOpts moment_o;
  auto* moment = app.add_subcommand("moment", "Short-interval moments of Delta, P, A or E");
  moment->add_option("--kind", moment_o.kind, "delta, circle, cusp or e")
      ->check(CLI::IsMember({"delta", "circle", "cusp", "e"}))
      ->capture_default_str();
  moment->add_option("--T", moment_o.T, "Interval start; the range is [T, 2T]")->required();
  moment->add_option("--U", moment_o.U, "Shifts (G for --k 4); six or more fit the cubic for delta")->delimiter(',')->required();
  moment->add_option("--k", moment_o.k, "Exponent, 2 or 4")->capture_default_str();
  moment->add_option("--omega-samples", moment_o.omega_samples, "Run the omega probe with this many samples")
      ->capture_default_str();
  moment->add_option("--step", moment_o.step, "Trapezoid step for E (0: curve spacing)")->capture_default_str();

  JutilaOpts jutila_o;
  auto* jutila = app.add_subcommand("jutila", "Both sides of the divisor mean-square identity");
  jutila->add_option("--T", jutila_o.T, "Interval start")->required();
  jutila->add_option("--H", jutila_o.H, "Interval length (0: H = T)")->capture_default_str();
  jutila->add_option("--U", jutila_o.U, "Shifts")->delimiter(',')->required();
  jutila->add_option("--terms-factor", jutila_o.terms_factor, "Sum n up to this multiple of T/(2U)")
      ->capture_default_str();

  VoronoiOpts vor_o;
  auto* vor = app.add_subcommand("voronoi-check", "RMS truncation error of the Voronoi series");
  vor->add_option("--kind", vor_o.kind, "delta, delta-star, circle or cusp")
      ->check(CLI::IsMember({"delta", "delta-star", "circle", "cusp"}))
      ->capture_default_str();
  vor->add_option("--N", vor_o.N, "Truncation points")->delimiter(',')->capture_default_str();
  vor->add_option("--samples", vor_o.samples, "Random half-integer sample points")->capture_default_str();
  vor->add_option("--lo", vor_o.lo, "Sample range start")->capture_default_str();
  vor->add_option("--hi", vor_o.hi, "Sample range end")->capture_default_str();

  QuadOpts quad_o;
  auto* quad = app.add_subcommand("quadruples", "Count near-equal sums of two k-th roots");
  quad->add_option("--N", quad_o.N, "n ranges over (N, 2N]")->required();
  quad->add_option("--k", quad_o.k, "Root order")->capture_default_str();
  quad->add_option("--delta", quad_o.delta, "Closeness, relative to N^{1/k}")->capture_default_str();
  quad->add_flag("--brute-force-check", quad_o.brute_force_check, "Also run the N^4 loop and compare");

  LargeOpts large_o;
  auto* large = app.add_subcommand("large-values", "Large values of |zeta| against E-difference moments");
  large->add_option("--T", large_o.T, "Peaks are sought in [T, 2T]")->required();
  large->add_option("--V", large_o.V, "Threshold for |zeta|")->capture_default_str();
  large->add_option("--k", large_o.k, "Moment exponent 1..4")->capture_default_str();
  large->add_option("--A", large_o.A, "G = A (V / log T)^2")->capture_default_str();
  large->add_option("--step", large_o.step, "Scan step")->capture_default_str();

  FitOpts fit_o;
  auto* fit = app.add_subcommand("fit-summatory", "Fit the asymptotics of sum d^2, r^2 or tau^2");
  fit->add_option("--kind", fit_o.kind, "d, r or tau")->check(CLI::IsMember({"d", "r", "tau"}))->capture_default_str();
  fit->add_option("--lo", fit_o.lo, "Smallest x")->capture_default_str();
  fit->add_option("--hi", fit_o.hi, "Largest x")->capture_default_str();
  fit->add_option("--points", fit_o.points, "Geometric grid size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string canonical = sub->get_name() + "\n" + sub->config_to_str(true, false) + "seed=" + std::to_string(g.seed);
  char id[20];
  std::snprintf(id, sizeof id, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  Context ctx{g, fs::path(g.output), id, out, err};

  const std::map<std::string, std::function<void()>> commands{
      {"sieve", [&] { run_sieve(sieve_o, ctx); }},
      {"delta", [&] { run_delta(delta_o, ctx); }},
      {"e-curve", [&] { run_e_curve(curve_o, ctx); }},
      {"moment", [&] { run_moment(moment_o, ctx); }},
      {"jutila", [&] { run_jutila(jutila_o, ctx); }},
      {"voronoi-check", [&] { run_voronoi(vor_o, ctx); }},
      {"quadruples", [&] { run_quadruples(quad_o, ctx); }},
      {"large-values", [&] { run_large_values(large_o, ctx); }},
      {"fit-summatory", [&] { run_fit_summatory(fit_o, ctx); }},
  };

  auto record = [&](const std::string& kind, const std::string& message, int status) {
    err << "error [" << kind << "]: " << message << '\n';
    try {
      fs::create_directories(ctx.output_dir);
      std::ofstream f(ctx.output_dir / (ctx.stem(sub->get_name()) + ".jsonl"), std::ios::app);
      f << Json{{"error", kind}, {"message", message}, {"exit_status", status}, {"seed", g.seed}}.dump() << '\n';
    } catch (...) {
    }
    return status;
  };

  try {
    set_thread_count(g.threads);
    commands.at(sub->get_name())();
  } catch (const Error& e) {
    return record(std::string(to_string(e.kind())), e.what(), exit_status_for(e.kind()));
  } catch (const std::bad_alloc&) {
    return record("resource-limit", "out of memory", kExitResource);
  } catch (const fs::filesystem_error& e) {
    return record("resource-limit", e.what(), kExitResource);
  } catch (const std::exception& e) {
    return record("internal", e.what(), kExitAssertion);
  }
  return kExitOk;
}

}  // namespace ntlab
