#pragma once

// Subcommand implementations for the ffkit tool. Each command writes its
// primary output to `out` (stdout when empty) plus `<out>.manifest.json`,
// and returns the process exit code. Errors propagate as ffkit::Error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <ffkit/drive_io.hpp>
#include <ffkit/export.hpp>
#include <ffkit/ffkit.hpp>

namespace ffkit::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericalError = 3 };

// ---------------------------------------------------------------- files

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return ss.str();
}

struct Manifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  json parameters = json::object();
};

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ValidationError("write failed for '" + path + "'");
}

/// Primary output to `path` (or stdout) and, for files, the manifest next to it.
inline void emit(const std::string& path, const std::string& content, const Manifest& m) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  write_text(path, content);
  json inputs = json::array();
  for (const auto& p : m.inputs) inputs.push_back({{"path", p}, {"sha256", sha256_hex(read_file(p))}});
  json manifest = {{"subcommand", m.subcommand},
                   {"tool_version", kToolVersion},
                   {"inputs", inputs},
                   {"parameters", m.parameters},
                   {"outputs", json::array({{{"path", path}, {"sha256", sha256_hex(content)}}})}};
  write_text(path + ".manifest.json", manifest.dump(2) + "\n");
}

inline bool wants_json(const std::string& path, const std::string& format) {
  if (format == "json") return true;
  if (format == "csv") return false;
  if (!format.empty()) throw ValidationError("--format must be 'csv' or 'json'");
  return std::filesystem::path(path).extension() == ".json";
}

// ---------------------------------------------------------------- common

inline Axis parse_axis(const std::string& s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  throw ValidationError("--axis must be x, y or z");
}

struct DriveOptions {
  std::string drive_file;
  std::optional<int> periods;   // repeat count (piecewise, sampled) or period count (harmonics)
  std::optional<double> time;   // total duration, us
  std::size_t steps_per_period = kDefaultStepsPerPeriod;
  unsigned threads = 1;

  void echo(json& p) const {
    if (periods) p["periods"] = *periods;
    if (time) p["time_us"] = *time;
    p["steps_per_period"] = steps_per_period;
  }
};

struct LoadedDrive {
  DriveSpec spec;
  TimeGrid grid;
};

inline DriveSpec with_periods(const DriveSpec& spec, int periods) {
  if (periods < 1) throw ValidationError("--periods must be a positive integer");
  if (auto h = std::get_if<HarmonicSeries>(&spec)) {
    HarmonicSeries out = *h;
    out.periods = periods;
    return out;
  }
  return repeat(spec, periods);
}

inline LoadedDrive load_drive(const DriveOptions& o) {
  if (o.periods && o.time) throw ValidationError("--periods and --time are mutually exclusive");
  if (o.steps_per_period < 1) throw ValidationError("--steps-per-period must be positive");
  DriveSpec spec = parse_drive_file(read_file(o.drive_file));
  std::optional<double> total;
  if (o.periods) spec = with_periods(spec, *o.periods);
  if (o.time) {
    if (!(*o.time > 0.0)) throw ValidationError("--time must be positive");
    if (const auto* p = std::get_if<PiecewiseConstant>(&spec)) {
      spec = truncate(*p, *o.time);
    } else if (std::holds_alternative<Sampled>(spec) && *o.time > duration(spec) * (1.0 + 1e-12)) {
      throw DurationMismatchError("--time exceeds the sampled drive duration");
    }
    total = *o.time;
  }
  TimeGrid grid = make_grid(spec, o.steps_per_period, total);
  return {std::move(spec), grid};
}

// ---------------------------------------------------------------- ff

struct FfOptions {
  DriveOptions drive;
  std::string axis = "z";
  double fmin = 0.0, fmax = 3.0, df = 0.01;
  std::string out, format;
};

inline int cmd_ff(const FfOptions& o) {
  const Axis axis = parse_axis(o.axis);
  const auto fgrid = frequency_grid(o.fmin, o.fmax, o.df);
  const auto d = load_drive(o.drive);
  const auto rot = rotation_trace(d.spec, d.grid, axis);
  const auto s = sweep(rot, fgrid, o.drive.threads);
  Manifest m{"ff", {o.drive.drive_file}};
  o.drive.echo(m.parameters);
  m.parameters["axis"] = o.axis;
  m.parameters["fmin_mhz"] = o.fmin;
  m.parameters["fmax_mhz"] = o.fmax;
  m.parameters["df_mhz"] = o.df;
  emit(o.out, wants_json(o.out, o.format) ? sweep_json(s).dump(2) + "\n" : sweep_csv(s), m);
  return kOk;
}

// ---------------------------------------------------------------- curve

struct CurveOptions {
  DriveOptions drive;
  std::string axis = "z";
  double f = 0.0;
  std::vector<double> phis{0.0};
  std::string out;
};

/// One curve per phase; with several phases the files are `<stem>_phi<deg><ext>`.
inline int cmd_curve(const CurveOptions& o) {
  const Axis axis = parse_axis(o.axis);
  if (!(o.f >= 0.0) || !std::isfinite(o.f)) throw ValidationError("--f must be a non-negative frequency");
  if (o.phis.empty()) throw ValidationError("--phi needs at least one value");
  for (double phi : o.phis)
    if (!std::isfinite(phi)) throw ValidationError("--phi must be finite");
  const auto d = load_drive(o.drive);
  const auto rot = rotation_trace(d.spec, d.grid, axis);
  for (double phi : o.phis) {
    // phi is periodic; reduce so 360 and 0 give identical bytes
    double p = std::fmod(phi, 360.0);
    if (p < 0.0) p += 360.0;
    const auto curve = space_curve(rot, o.f, p);
    std::string path = o.out;
    if (!path.empty() && o.phis.size() > 1) {
      const std::filesystem::path fp(path);
      path = (fp.parent_path() / (fp.stem().string() + "_phi" + text::format_double(phi) + fp.extension().string()))
                 .string();
    }
    Manifest m{"curve", {o.drive.drive_file}};
    o.drive.echo(m.parameters);
    m.parameters["axis"] = o.axis;
    m.parameters["f_mhz"] = o.f;
    m.parameters["phi_deg"] = phi;
    emit(path, curve_csv(curve), m);
  }
  return kOk;
}

// ---------------------------------------------------------------- magnus

struct MagnusOptions {
  DriveOptions drive;
  std::string axis = "z";
  int order = 3;
  std::string method = "auto";  // auto: quadrature up to order 3, taylor above
  std::string out;
};

inline std::string magnus_table(const MagnusSeries& s) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k <= s.order(); ++k) idx.push_back(k);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return norm(s[a]) > norm(s[b]); });
  std::ostringstream ss;
  ss << std::setw(3) << "k" << std::setw(15) << "|A_k|/T^k" << std::setw(15) << "ax" << std::setw(15) << "ay"
     << std::setw(15) << "az" << "\n";
  ss << std::scientific << std::setprecision(4);
  for (auto k : idx) {
    const auto& a = s[k];
    ss << std::setw(3) << k << std::setw(15) << s.scaled_norm(k) << std::setw(15) << a.x << std::setw(15) << a.y
       << std::setw(15) << a.z << "\n";
  }
  return ss.str();
}

inline int cmd_magnus(const MagnusOptions& o, std::ostream& table = std::cout) {
  const Axis axis = parse_axis(o.axis);
  if (o.order < 1) throw ValidationError("--order must be at least 1");
  if (o.method != "auto" && o.method != "quadrature" && o.method != "taylor")
    throw ValidationError("--method must be auto, quadrature or taylor");
  const auto d = load_drive(o.drive);
  const auto rot = rotation_trace(d.spec, d.grid, axis);
  const bool quad = o.method == "quadrature" || (o.method == "auto" && o.order <= 3);
  const auto s = quad ? magnus_quadrature(rot, o.order) : magnus_taylor(rot, o.order);
  Manifest m{"magnus", {o.drive.drive_file}};
  o.drive.echo(m.parameters);
  m.parameters["axis"] = o.axis;
  m.parameters["order"] = o.order;
  m.parameters["method"] = quad ? "quadrature" : "taylor";
  emit(o.out, magnus_json(s).dump(2) + "\n", m);
  if (!o.out.empty()) table << magnus_table(s);
  return kOk;
}

// ---------------------------------------------------------------- controls

struct ControlsOptions {
  DriveOptions drive;
  std::string axis = "z";
  double min_gain = 0.25;
  double fmax = 0.0;  // 0: ten base harmonics
  std::size_t points_per_harmonic = 200;
  std::string out;
};

inline int cmd_controls(const ControlsOptions& o, std::ostream& report = std::cout) {
  const Axis axis = parse_axis(o.axis);
  if (!(o.min_gain > 0.0 && o.min_gain < 1.0)) throw ValidationError("--min-gain must be in (0, 1)");
  if (o.points_per_harmonic < 4) throw ValidationError("--points-per-harmonic must be at least 4");
  const auto d = load_drive(o.drive);
  const double f_base = 1.0 / natural_period(d.spec);
  const double fmax = o.fmax > 0.0 ? o.fmax : 10.0 * f_base;
  const auto rot = rotation_trace(d.spec, d.grid, axis);
  const auto s = sweep(rot, frequency_grid(0.0, fmax, f_base / static_cast<double>(o.points_per_harmonic)),
                       o.drive.threads);
  PeakOptions po;
  po.min_gain = o.min_gain;
  po.base_freq = f_base;
  const auto peaks = find_peaks(s, po, &rot);

  json sols = json::array();
  for (const auto& p : peaks) sols.push_back(solution_json(p));
  json doc = {{"axis", o.axis}, {"total_time_us", rot.total_time()}, {"base_freq_mhz", f_base}, {"solutions", sols}};
  bool controllable = true;
  try {
    const auto [a, b] = select_two_axis(peaks);
    doc["two_axis"] = json::array({solution_json(a), solution_json(b)});
  } catch (const ControllabilityError&) {
    controllable = false;
    doc["two_axis"] = nullptr;
  }
  doc["controllable"] = controllable;

  Manifest m{"controls", {o.drive.drive_file}};
  o.drive.echo(m.parameters);
  m.parameters["axis"] = o.axis;
  m.parameters["min_gain"] = o.min_gain;
  m.parameters["fmax_mhz"] = fmax;
  emit(o.out, doc.dump(2) + "\n", m);

  if (!controllable) std::cerr << "warning: no two-axis control pair (all qualifying peaks share one axis)\n";
  if (!o.out.empty()) {
    report << std::setw(4) << "rank" << std::setw(12) << "f_MHz" << std::setw(6) << "axis" << std::setw(10) << "gain"
           << std::setw(12) << "phase_deg" << std::setw(6) << "n" << std::setw(9) << "purity" << "\n";
    report << std::fixed;
    for (std::size_t r = 0; r < peaks.size(); ++r) {
      const auto& p = peaks[r];
      report << std::setw(4) << r + 1 << std::setw(12) << std::setprecision(5) << p.frequency << std::setw(6)
             << axis_name(p.axis) << std::setw(10) << std::setprecision(4) << p.gain << std::setw(12)
             << std::setprecision(2) << p.phase_deg << std::setw(6) << p.harmonic_index << std::setw(9)
             << std::setprecision(3) << p.purity << "\n";
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- optimize

struct OptimizeOptions {
  std::string config_file;
  unsigned threads = 1;
  std::string out;
};

inline int cmd_optimize(const OptimizeOptions& o) {
  OptimizerConfig cfg = parse_optimizer_config(read_file(o.config_file));
  cfg.threads = o.threads;
  const auto r = optimize(cfg);
  Manifest m{"optimize", {o.config_file}};
  emit(o.out, optimizer_json(r, cfg).dump(2) + "\n", m);
  if (!r.converged) std::cerr << "note: objective " << r.objective << " above convergence threshold\n";
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyCase {
  Axis axis = Axis::z;
  double f = 0.0, phi_deg = 0.0, delta_beta = 0.0;
};

/// Cases file: `kind = cases` then `case = f_MHz, phi_deg, delta_beta_rad_per_us[, axis]` lines.
inline std::vector<VerifyCase> parse_cases_file(std::string_view content) {
  const auto entries = text::parse_entries(content);
  if (detail::kind_of(entries) != "cases")
    throw ParseError(detail::single(entries, "kind").line, "kind", "expected kind = cases");
  detail::check_keys(entries, {"kind", "case"});
  std::vector<VerifyCase> out;
  for (const auto& e : entries) {
    if (e.key != "case") continue;
    const auto parts = text::split_list(e.value);
    if (parts.size() != 3 && parts.size() != 4) throw ParseError(e.line, "case", "expected f, phi, delta_beta[, axis]");
    VerifyCase c{Axis::z, text::parse_double(parts[0], e), text::parse_double(parts[1], e),
                 text::parse_double(parts[2], e)};
    if (parts.size() == 4) {
      try {
        c.axis = parse_axis(std::string(parts[3]));
      } catch (const ValidationError&) {
        throw ParseError(e.line, "case.axis", "expected x, y or z");
      }
    }
    if (!(c.f >= 0.0)) throw ParseError(e.line, "case.f", "frequency must be non-negative");
    out.push_back(c);
  }
  if (out.empty()) throw ParseError(entries.back().line, "case", "no cases");
  return out;
}

/// Random cases at delta_beta T = 0.01 with f in [0, 5 / T_period] and phi in [0, 360).
inline std::vector<VerifyCase> random_cases(std::size_t n, std::uint64_t seed, double t_total, double f_base) {
  std::mt19937_64 rng(seed);
  auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<VerifyCase> out(n);
  for (auto& c : out) {
    c.f = 5.0 * f_base * u();
    c.phi_deg = 360.0 * u();
    c.delta_beta = 0.01 / t_total;
  }
  return out;
}

struct VerifyOptions {
  DriveOptions drive;
  std::string cases_file;
  std::optional<std::size_t> random;
  std::uint64_t seed = 0;
  std::string out;
};

inline int cmd_verify(const VerifyOptions& o) {
  if (o.cases_file.empty() == !o.random) throw ValidationError("give exactly one of --cases or --random");
  const auto d = load_drive(o.drive);
  const double T = d.grid.total();
  const auto cases = o.random ? random_cases(*o.random, o.seed, T, 1.0 / natural_period(d.spec))
                              : parse_cases_file(read_file(o.cases_file));
  for (const auto& c : cases)
    if (std::abs(c.delta_beta) * T > 0.1) throw ValidationError("verify: |delta_beta| T must not exceed 0.1 rad");

  const auto samples = sample_envelope(d.spec, d.grid);
  const auto trace = propagate_samples(samples, d.grid);
  std::array<std::optional<RotationTrace>, 3> rots;
  for (const auto& c : cases)
    if (!rots[index(c.axis)]) rots[index(c.axis)] = rotation_trace(trace, c.axis);

  std::vector<double> residuals(cases.size());
  parallel_for(cases.size(), o.drive.threads, [&](std::size_t k) {
    const auto& c = cases[k];
    const PerturbationSpec p{c.axis, c.delta_beta, c.f, c.phi_deg};
    const PauliVec a = realized_rotation(simulate_full(samples, p, d.grid));
    const PauliVec pred = predicted_endpoint(filter_function(*rots[index(c.axis)], c.f), T, c.phi_deg) * c.delta_beta;
    residuals[k] = norm(a - pred);
  });

  json rows = json::array();
  bool all = true;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    const double x = c.delta_beta * T;
    const double bound = 2.0 * x * x;
    const bool pass = residuals[k] <= bound;
    all = all && pass;
    rows.push_back({{"drive", o.drive.drive_file},
                    {"axis", std::string(1, axis_name(c.axis))},
                    {"f", c.f},
                    {"phi", c.phi_deg},
                    {"delta_beta", c.delta_beta},
                    {"residual", residuals[k]},
                    {"bound", bound},
                    {"pass", pass}});
  }
  json doc = {{"total_time_us", T}, {"all_pass", all}, {"cases", rows}};
  Manifest m{"verify", {o.drive.drive_file}};
  if (!o.cases_file.empty()) m.inputs.push_back(o.cases_file);
  o.drive.echo(m.parameters);
  if (o.random) {
    m.parameters["random"] = *o.random;
    m.parameters["seed"] = o.seed;
  }
  emit(o.out, doc.dump(2) + "\n", m);
  return all ? kOk : kNumericalError;
}

}  // namespace ffkit::cli
