#pragma once

// Drive and optimizer files.
//
//   kind = piecewise           kind = harmonics          kind = sampled
//   segment = 0.4, 0, 0        base_freq = 0.6           dt = 0.001
//   segment = 0.5, 3.14, 0     periods = 5               sample = 0, 0
//                              term = 1, -10.2, 0        sample = 0.1, 0
//
// segment = duration_us, omega_i_rad_per_us, omega_q_rad_per_us
// term    = harmonic_index, amp_i_rad_per_us, amp_q_rad_per_us (cosine terms)
// sample  = omega_i_rad_per_us, omega_q_rad_per_us (cell centred, spacing dt us)
// base_freq in MHz. Values carry no unit suffixes.
//
//   kind = optimize
//   harmonics = 1, 3, 5
//   order = 6
//   parameterization = spherical   # or raw
//   max_evals = 20000              # per restart
//   restarts = 5
//   seed = 1
//   base_freq = 1                  # optional, MHz
//   weights = 1, 1, 1, 1, 1, 1     # optional
//   steps_per_period = 2000        # optional
//   init_lo = -8, -1.5708, -3.1416 # optional, amplitudes in units of pi/T
//   init_hi = 8, 1.5708, 3.1416    # optional

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "drive.hpp"
#include "errors.hpp"
#include "optimizer.hpp"
#include "text_format.hpp"

namespace ffkit {

namespace detail {

inline void check_keys(const std::vector<text::Entry>& entries, const std::set<std::string>& allowed) {
  for (const auto& e : entries)
    if (!allowed.count(e.key)) throw ParseError(e.line, e.key, "unknown field");
}

inline const text::Entry& single(const std::vector<text::Entry>& entries, const std::string& key) {
  const text::Entry* found = nullptr;
  for (const auto& e : entries) {
    if (e.key != key) continue;
    if (found) throw ParseError(e.line, key, "field given more than once");
    found = &e;
  }
  if (!found) throw ParseError(entries.empty() ? 0 : entries.back().line, key, "missing required field");
  return *found;
}

inline const text::Entry* optional_single(const std::vector<text::Entry>& entries, const std::string& key) {
  for (const auto& e : entries)
    if (e.key == key) return &single(entries, key);
  return nullptr;
}

inline std::string kind_of(const std::vector<text::Entry>& entries) {
  if (entries.empty()) throw ParseError(0, "kind", "empty file");
  return single(entries, "kind").value;
}

}  // namespace detail

inline DriveSpec parse_drive_file(std::string_view text_in) {
  const auto entries = text::parse_entries(text_in);
  const std::string kind = detail::kind_of(entries);
  DriveSpec spec;
  if (kind == "piecewise") {
    detail::check_keys(entries, {"kind", "segment"});
    PiecewiseConstant p;
    for (const auto& e : entries) {
      if (e.key != "segment") continue;
      const auto v = text::parse_doubles(e, 3);
      if (!(v[0] > 0.0)) throw ParseError(e.line, "segment.duration", "duration must be positive");
      p.segments.push_back({v[0], v[1], v[2]});
    }
    spec = p;
  } else if (kind == "harmonics") {
    detail::check_keys(entries, {"kind", "base_freq", "periods", "term"});
    HarmonicSeries h;
    const auto& bf = detail::single(entries, "base_freq");
    h.base_freq = text::parse_double(bf.value, bf);
    if (!(h.base_freq > 0.0)) throw ParseError(bf.line, "base_freq", "must be positive");
    const auto& pe = detail::single(entries, "periods");
    const auto periods = text::parse_int(pe.value, pe);
    if (periods < 1) throw ParseError(pe.line, "periods", "must be a positive integer");
    h.periods = static_cast<int>(periods);
    std::set<int> seen;
    for (const auto& e : entries) {
      if (e.key != "term") continue;
      const auto parts = text::split_list(e.value);
      if (parts.size() != 3) throw ParseError(e.line, "term", "expected 3 values");
      const auto n = text::parse_int(parts[0], e);
      if (n < 1) throw ParseError(e.line, "term.index", "harmonic index must be >= 1");
      if (!seen.insert(static_cast<int>(n)).second) throw ParseError(e.line, "term.index", "duplicate harmonic index");
      h.terms.push_back({static_cast<int>(n), text::parse_double(parts[1], e), text::parse_double(parts[2], e)});
    }
    spec = h;
  } else if (kind == "sampled") {
    detail::check_keys(entries, {"kind", "dt", "sample"});
    Sampled s;
    const auto& dt = detail::single(entries, "dt");
    s.dt = text::parse_double(dt.value, dt);
    if (!(s.dt > 0.0)) throw ParseError(dt.line, "dt", "must be positive");
    for (const auto& e : entries) {
      if (e.key != "sample") continue;
      const auto v = text::parse_doubles(e, 2);
      s.samples.push_back({v[0], v[1]});
    }
    spec = s;
  } else {
    throw ParseError(detail::single(entries, "kind").line, "kind",
                     "unknown kind '" + kind + "' (expected piecewise, harmonics or sampled)");
  }
  validate(spec);
  return spec;
}

inline std::string serialize_drive(const DriveSpec& spec) {
  using text::format_double;
  std::string out;
  if (const auto* p = std::get_if<PiecewiseConstant>(&spec)) {
    out += "kind = piecewise\n";
    for (const auto& s : p->segments)
      out += "segment = " + format_double(s.duration) + ", " + format_double(s.omega_i) + ", " + format_double(s.omega_q) + "\n";
  } else if (const auto* h = std::get_if<HarmonicSeries>(&spec)) {
    out += "kind = harmonics\n";
    out += "base_freq = " + format_double(h->base_freq) + "\n";
    out += "periods = " + std::to_string(h->periods) + "\n";
    for (const auto& t : h->terms)
      out += "term = " + std::to_string(t.n) + ", " + format_double(t.amp_i) + ", " + format_double(t.amp_q) + "\n";
  } else {
    const auto& s = std::get<Sampled>(spec);
    out += "kind = sampled\n";
    out += "dt = " + format_double(s.dt) + "\n";
    for (const auto& e : s.samples) out += "sample = " + format_double(e.omega_i) + ", " + format_double(e.omega_q) + "\n";
  }
  return out;
}

inline OptimizerConfig parse_optimizer_config(std::string_view text_in) {
  const auto entries = text::parse_entries(text_in);
  const std::string kind = detail::kind_of(entries);
  if (kind != "optimize")
    throw ParseError(detail::single(entries, "kind").line, "kind", "expected kind = optimize, got '" + kind + "'");
  detail::check_keys(entries, {"kind", "harmonics", "order", "parameterization", "max_evals", "restarts", "seed",
                               "base_freq", "weights", "steps_per_period", "init_lo", "init_hi"});
  OptimizerConfig c;
  const auto& h = detail::single(entries, "harmonics");
  c.harmonics.clear();
  for (auto part : text::split_list(h.value)) c.harmonics.push_back(static_cast<int>(text::parse_int(part, h)));
  const auto& k = detail::single(entries, "order");
  c.order = static_cast<int>(text::parse_int(k.value, k));
  if (const auto* e = detail::optional_single(entries, "parameterization")) {
    if (e->value == "spherical")
      c.parameterization = Parameterization::spherical;
    else if (e->value == "raw")
      c.parameterization = Parameterization::raw;
    else
      throw ParseError(e->line, e->key, "expected 'raw' or 'spherical'");
  }
  auto read_count = [&](const char* key, auto& field) {
    if (const auto* e = detail::optional_single(entries, key)) {
      const auto v = text::parse_int(e->value, *e);
      if (v < 0) throw ParseError(e->line, e->key, "must be non-negative");
      field = static_cast<std::remove_reference_t<decltype(field)>>(v);
    }
  };
  read_count("max_evals", c.max_evals);
  read_count("restarts", c.restarts);
  read_count("seed", c.seed);
  read_count("steps_per_period", c.steps_per_period);
  if (const auto* e = detail::optional_single(entries, "base_freq")) c.base_freq = text::parse_double(e->value, *e);
  if (const auto* e = detail::optional_single(entries, "weights")) c.weights = text::parse_doubles(*e);
  if (const auto* e = detail::optional_single(entries, "init_lo")) c.init_lo = text::parse_doubles(*e);
  if (const auto* e = detail::optional_single(entries, "init_hi")) c.init_hi = text::parse_doubles(*e);
  c.validate();
  return c;
}

}  // namespace ffkit
