#pragma once

// Plot-ready CSV/JSON writers and the PSD table reader.
//
// Sweep CSV: f_MHz, re_fx, im_fx, re_fy, im_fy, re_fz, im_fz, abs_fx, abs_fy,
//   abs_fz, abs_total, phase_fx_deg, phase_fy_deg, phase_fz_deg
//   (phase is nan in CSV and null in JSON where |F| is below the phase floor).
// Curve CSV: t_us, x, y, z.
// PSD CSV: f_MHz, s_value (optional header line, '#' comments).

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "control.hpp"
#include "errors.hpp"
#include "filter_function.hpp"
#include "geometric.hpp"
#include "magnus.hpp"
#include "optimizer.hpp"
#include "text_format.hpp"

namespace ffkit {

using json = nlohmann::ordered_json;

namespace detail {
inline double phase_or_nan(const cplx& v) {
  if (std::abs(v) < kPhaseMagnitudeFloor) return std::numeric_limits<double>::quiet_NaN();
  return phase_deg(v);
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline void append_row(std::string& out, std::initializer_list<double> cols) {
  bool first = true;
  for (double c : cols) {
    if (!first) out += ',';
    first = false;
    out += std::isnan(c) ? std::string("nan") : text::format_double(c);
  }
  out += '\n';
}
}  // namespace detail

inline const char* const kSweepColumns =
    "f_MHz,re_fx,im_fx,re_fy,im_fy,re_fz,im_fz,abs_fx,abs_fy,abs_fz,abs_total,phase_fx_deg,phase_fy_deg,phase_fz_deg";

inline std::string sweep_csv(const FilterFunctionSweep& s) {
  std::string out = std::string(kSweepColumns) + "\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& v = s.values[k];
    detail::append_row(out, {s.frequencies[k], v.x.real(), v.x.imag(), v.y.real(), v.y.imag(), v.z.real(), v.z.imag(),
                             std::abs(v.x), std::abs(v.y), std::abs(v.z), norm(v), detail::phase_or_nan(v.x),
                             detail::phase_or_nan(v.y), detail::phase_or_nan(v.z)});
  }
  return out;
}

inline json sweep_json(const FilterFunctionSweep& s) {
  json rows = json::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& v = s.values[k];
    rows.push_back({{"f_MHz", s.frequencies[k]},
                    {"re_fx", v.x.real()},
                    {"im_fx", v.x.imag()},
                    {"re_fy", v.y.real()},
                    {"im_fy", v.y.imag()},
                    {"re_fz", v.z.real()},
                    {"im_fz", v.z.imag()},
                    {"abs_fx", std::abs(v.x)},
                    {"abs_fy", std::abs(v.y)},
                    {"abs_fz", std::abs(v.z)},
                    {"abs_total", norm(v)},
                    {"phase_fx_deg", detail::number_or_null(detail::phase_or_nan(v.x))},
                    {"phase_fy_deg", detail::number_or_null(detail::phase_or_nan(v.y))},
                    {"phase_fz_deg", detail::number_or_null(detail::phase_or_nan(v.z))}});
  }
  return {{"axis", std::string(1, axis_name(s.axis))}, {"total_time_us", s.total_time}, {"rows", rows}};
}

inline std::string curve_csv(const SpaceCurve& c) {
  std::string out = "t_us,x,y,z\n";
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    const auto& p = c.points[k];
    detail::append_row(out, {c.grid.t(k), p.x, p.y, p.z});
  }
  return out;
}

inline json magnus_json(const MagnusSeries& s) {
  json orders = json::array();
  for (std::size_t k = 1; k <= s.order(); ++k) {
    const auto& a = s[k];
    orders.push_back({{"k", k}, {"ax", a.x}, {"ay", a.y}, {"az", a.z}, {"norm", norm(a)}, {"scaled_norm", s.scaled_norm(k)}});
  }
  return {{"axis", std::string(1, axis_name(s.axis))},
          {"total_time_us", s.time},
          {"method", s.method == MagnusMethod::quadrature ? "quadrature" : "taylor"},
          {"orders", orders}};
}

inline json solution_json(const ControlSolution& s) {
  return {{"frequency_mhz", s.frequency}, {"phase_deg", s.phase_deg},        {"axis", std::string(1, axis_name(s.axis))},
          {"gain", s.gain},               {"harmonic_index", s.harmonic_index}, {"purity", s.purity}};
}

inline json optimizer_json(const OptimizerResult& r, const OptimizerConfig& cfg) {
  json norms = json::array();
  for (std::size_t k = 0; k < r.scaled_norms.size(); ++k)
    norms.push_back({{"k", k + 1}, {"scaled_norm", r.scaled_norms[k]}, {"weight", cfg.weight(static_cast<int>(k + 1))}});
  json terms = json::array();
  for (const auto& t : r.drive.terms) terms.push_back({{"n", t.n}, {"amp_i", t.amp_i}, {"amp_q", t.amp_q}});
  return {{"parameterization", cfg.parameterization == Parameterization::spherical ? "spherical" : "raw"},
          {"harmonics", cfg.harmonics},
          {"order", cfg.order},
          {"seed", cfg.seed},
          {"restarts", cfg.restarts},
          {"max_evals_per_restart", cfg.max_evals},
          {"params", r.params},
          {"objective", r.objective},
          {"converged", r.converged},
          {"evaluations", r.evaluations},
          {"best_restart", r.best_restart},
          {"magnus_norms", norms},
          {"drive", {{"base_freq", r.drive.base_freq}, {"periods", r.drive.periods}, {"terms", terms}}}};
}

/// Two-column CSV: f_MHz, s_value. A first line that is not numeric is taken as a header.
inline PsdTable parse_psd_csv(std::string_view text_in) {
  PsdTable t;
  std::size_t pos = 0, line_no = 0;
  bool header_allowed = true;
  while (pos < text_in.size()) {
    const auto nl = text_in.find('\n', pos);
    std::string_view line = text_in.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text_in.size() : nl + 1;
    ++line_no;
    if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto parts = text::split_list(line);
    if (parts.size() != 2) throw ParseError(line_no, "", "expected two columns f_MHz, s_value");
    const text::Entry at{line_no, "psd", std::string(line)};
    double f = 0.0;
    try {
      f = text::parse_double(parts[0], at);
    } catch (const ParseError&) {
      if (!header_allowed) throw;
      header_allowed = false;
      continue;
    }
    header_allowed = false;
    t.f.push_back(f);
    t.s.push_back(text::parse_double(parts[1], at));
  }
  t.validate();
  return t;
}

}  // namespace ffkit
