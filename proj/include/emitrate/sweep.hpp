// Copyright 2026 The emitrate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "emitrate/cavity.hpp"
#include "emitrate/dynamics.hpp"
#include "emitrate/errors.hpp"
#include "emitrate/mirror.hpp"
#include "emitrate/parallel.hpp"

namespace emitrate {

enum class Target { mirror, cavity, subwavelength, optical, lindblad, validate, figure };
enum class Scale { linear, log };
enum class MethodSel { closed, quadrature, series, limit, all };
enum class Axis { distance, reflection };
enum class DistanceUnits { k0d, d_over_lambda };

enum class FigureId {
  mirror_dielectric,
  mirror_plasmonic,
  subwl_dielectric_vs_r,
  subwl_dielectric_vs_d,
  subwl_plasmonic_vs_r,
  subwl_plasmonic_vs_d,
};

namespace detail {

template <class E>
struct EnumName {
  E value;
  std::string_view name;
};

inline constexpr EnumName<Target> target_names[] = {
    {Target::mirror, "mirror"},   {Target::cavity, "cavity"},     {Target::subwavelength, "subwavelength"},
    {Target::optical, "optical"}, {Target::lindblad, "lindblad"}, {Target::validate, "validate"},
    {Target::figure, "figure"},
};
inline constexpr EnumName<Scale> scale_names[] = {{Scale::linear, "linear"}, {Scale::log, "log"}};
inline constexpr EnumName<MethodSel> method_names[] = {
    {MethodSel::closed, "closed"}, {MethodSel::quadrature, "quadrature"}, {MethodSel::series, "series"},
    {MethodSel::limit, "limit"},   {MethodSel::all, "all"},
};
inline constexpr EnumName<Axis> axis_names[] = {{Axis::distance, "distance"}, {Axis::reflection, "reflection"}};
inline constexpr EnumName<DistanceUnits> unit_names[] = {{DistanceUnits::k0d, "k0d"},
                                                         {DistanceUnits::d_over_lambda, "d_over_lambda"}};
inline constexpr EnumName<FigureId> figure_names[] = {
    {FigureId::mirror_dielectric, "mirror_dielectric"},
    {FigureId::mirror_plasmonic, "mirror_plasmonic"},
    {FigureId::subwl_dielectric_vs_r, "subwl_dielectric_vs_r"},
    {FigureId::subwl_dielectric_vs_d, "subwl_dielectric_vs_d"},
    {FigureId::subwl_plasmonic_vs_r, "subwl_plasmonic_vs_r"},
    {FigureId::subwl_plasmonic_vs_d, "subwl_plasmonic_vs_d"},
};

template <class E, std::size_t N>
std::string_view name_of(const EnumName<E> (&table)[N], E v) {
  for (const auto& e : table) {
    if (e.value == v) return e.name;
  }
  return "unknown";
}

template <class E, std::size_t N>
E parse_enum(const EnumName<E> (&table)[N], std::string_view text, std::string_view what) {
  for (const auto& e : table) {
    if (e.name == text) return e.value;
  }
  std::string choices;
  for (const auto& e : table) {
    if (!choices.empty()) choices += ", ";
    choices += e.name;
  }
  throw ConfigError(std::string(what) + ": unknown value '" + std::string(text) + "' (expected one of " + choices +
                    ")");
}

}  // namespace detail

inline std::string_view to_string(Target v) { return detail::name_of(detail::target_names, v); }
inline std::string_view to_string(Scale v) { return detail::name_of(detail::scale_names, v); }
inline std::string_view to_string(MethodSel v) { return detail::name_of(detail::method_names, v); }
inline std::string_view to_string(Axis v) { return detail::name_of(detail::axis_names, v); }
inline std::string_view to_string(DistanceUnits v) { return detail::name_of(detail::unit_names, v); }
inline std::string_view to_string(FigureId v) { return detail::name_of(detail::figure_names, v); }

inline Target parse_target(std::string_view s) { return detail::parse_enum(detail::target_names, s, "target"); }
inline MethodSel parse_method(std::string_view s) { return detail::parse_enum(detail::method_names, s, "method"); }
inline Axis parse_axis(std::string_view s) { return detail::parse_enum(detail::axis_names, s, "axis"); }
inline DistanceUnits parse_units(std::string_view s) { return detail::parse_enum(detail::unit_names, s, "units"); }
inline FigureId parse_figure(std::string_view s) { return detail::parse_enum(detail::figure_names, s, "figure"); }

/// Shortest decimal text that parses back to the same double; "nan" for NaN.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + ": not a finite number: '" + std::string(s) + "'");
  }
  return v;
}

template <class Int>
Int parse_integer(std::string_view s, std::string_view what) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string(what) + ": not an integer: '" + std::string(s) + "'");
  }
  return v;
}

/// Sample range start:stop:count[:log].
struct Range {
  double start = 0.0;
  double stop = 1.0;
  std::int64_t count = 2;
  Scale scale = Scale::linear;

  bool operator==(const Range&) const = default;

  std::vector<double> points() const {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(count - 1);
      out[static_cast<std::size_t>(i)] =
          scale == Scale::log ? std::exp(std::log(start) + u * (std::log(stop) - std::log(start)))
                              : start + u * (stop - start);
    }
    // Pin the end points exactly.
    out.front() = start;
    out.back() = stop;
    return out;
  }
};

inline Range parse_range(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  for (;;) {
    const auto colon = text.find(':', pos);
    parts.push_back(text.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (parts.size() != 3 && parts.size() != 4) {
    throw ConfigError("grid: expected start:stop:count[:log], got '" + std::string(text) + "'");
  }
  Range r;
  r.start = parse_double(parts[0], "grid start");
  r.stop = parse_double(parts[1], "grid stop");
  r.count = parse_integer<std::int64_t>(parts[2], "grid count");
  if (parts.size() == 4) r.scale = detail::parse_enum(detail::scale_names, parts[3], "grid scale");
  return r;
}

inline std::string format_range(const Range& r) {
  std::string s = format_double(r.start) + ":" + format_double(r.stop) + ":" + std::to_string(r.count);
  if (r.scale == Scale::log) s += ":log";
  return s;
}

/// Everything a run of the command-line tool depends on.
struct SweepConfig {
  Target target = Target::mirror;
  std::optional<double> r;
  std::optional<double> k0d;
  std::optional<double> d_over_lambda;
  std::optional<Range> grid;
  Axis axis = Axis::distance;
  std::optional<DistanceUnits> units;
  MethodSel method = MethodSel::all;
  double tol = 1e-10;
  std::int64_t n_traj = 1000;
  std::uint64_t seed = 1;
  std::string out;
  bool quick = false;
  double g = 1.0;
  double kappa = 20.0;
  double gamma = 1.0;
  std::optional<double> gamma_cav;
  double dt = 0.0;
  int fock = 5;
  std::optional<FigureId> figure;

  bool operator==(const SweepConfig&) const = default;
};

/// Applies one key = value assignment.
inline void set_config_value(SweepConfig& c, std::string_view key, std::string_view value) {
  auto flag = [&](std::string_view v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
  };
  if (key == "target") c.target = parse_target(value);
  else if (key == "r") c.r = parse_double(value, key);
  else if (key == "k0d") c.k0d = parse_double(value, key);
  else if (key == "d_over_lambda") c.d_over_lambda = parse_double(value, key);
  else if (key == "grid") c.grid = parse_range(value);
  else if (key == "axis") c.axis = parse_axis(value);
  else if (key == "units") c.units = parse_units(value);
  else if (key == "method") c.method = parse_method(value);
  else if (key == "tol") c.tol = parse_double(value, key);
  else if (key == "n_traj") c.n_traj = parse_integer<std::int64_t>(value, key);
  else if (key == "seed") c.seed = parse_integer<std::uint64_t>(value, key);
  else if (key == "out") c.out = std::string(value);
  else if (key == "quick") c.quick = flag(value);
  else if (key == "g") c.g = parse_double(value, key);
  else if (key == "kappa") c.kappa = parse_double(value, key);
  else if (key == "gamma") c.gamma = parse_double(value, key);
  else if (key == "gamma_cav") c.gamma_cav = parse_double(value, key);
  else if (key == "dt") c.dt = parse_double(value, key);
  else if (key == "fock") c.fock = parse_integer<int>(value, key);
  else if (key == "figure") c.figure = parse_figure(value);
  else throw ConfigError("unknown key '" + std::string(key) + "'");
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Parses key = value lines; '#' starts a comment.
inline SweepConfig parse_config(std::string_view text, SweepConfig base = {}) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      set_config_value(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

inline SweepConfig load_config(const std::filesystem::path& path, SweepConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

/// Every field, one per line, in a form parse_config reads back unchanged.
inline std::string dump_config(const SweepConfig& c) {
  std::string s;
  auto line = [&](std::string_view k, const std::string& v) {
    s += k;
    s += " = ";
    s += v;
    s += '\n';
  };
  line("target", std::string(to_string(c.target)));
  if (c.figure) line("figure", std::string(to_string(*c.figure)));
  if (c.r) line("r", format_double(*c.r));
  if (c.k0d) line("k0d", format_double(*c.k0d));
  if (c.d_over_lambda) line("d_over_lambda", format_double(*c.d_over_lambda));
  if (c.grid) line("grid", format_range(*c.grid));
  line("axis", std::string(to_string(c.axis)));
  if (c.units) line("units", std::string(to_string(*c.units)));
  line("method", std::string(to_string(c.method)));
  line("tol", format_double(c.tol));
  line("n_traj", std::to_string(c.n_traj));
  line("seed", std::to_string(c.seed));
  if (!c.out.empty()) line("out", c.out);
  line("quick", c.quick ? "true" : "false");
  line("g", format_double(c.g));
  line("kappa", format_double(c.kappa));
  line("gamma", format_double(c.gamma));
  if (c.gamma_cav) line("gamma_cav", format_double(*c.gamma_cav));
  line("dt", format_double(c.dt));
  line("fock", std::to_string(c.fock));
  return s;
}

inline bool is_cavity_family(Target t) {
  return t == Target::cavity || t == Target::subwavelength || t == Target::optical;
}

inline DistanceUnits effective_units(const SweepConfig& c) {
  if (c.units) return *c.units;
  return c.target == Target::mirror ? DistanceUnits::d_over_lambda : DistanceUnits::k0d;
}

inline double to_k0d(double distance, DistanceUnits u) {
  return u == DistanceUnits::k0d ? distance : 2.0 * std::numbers::pi * distance;
}

/// Default grid for the target and axis when none was given.
inline std::optional<Range> default_grid(const SweepConfig& c) {
  const std::int64_t n = c.quick ? 11 : 0;
  auto pick = [n](std::int64_t full) { return n ? n : full; };
  if (c.target == Target::lindblad) return Range{0.0, 10.0, pick(101), Scale::linear};
  if (c.axis == Axis::reflection) {
    if (c.target == Target::mirror) return Range{-1.0, 1.0, pick(41), Scale::linear};
    return Range{-0.95, 0.95, pick(39), Scale::linear};
  }
  if (c.k0d || c.d_over_lambda) return std::nullopt;
  const auto u = effective_units(c);
  const double scale = u == DistanceUnits::k0d ? 1.0 : 0.5 / std::numbers::pi;
  switch (c.target) {
    case Target::mirror:
      return Range{0.01 * (u == DistanceUnits::k0d ? 2.0 * std::numbers::pi : 1.0),
                   3.0 * (u == DistanceUnits::k0d ? 2.0 * std::numbers::pi : 1.0), pick(300), Scale::linear};
    case Target::cavity: return Range{1e-3 * scale, 10.0 * scale, pick(100), Scale::log};
    case Target::subwavelength: return Range{1e-3 * scale, 0.5 * scale, pick(60), Scale::log};
    case Target::optical:
      return Range{20.0 * std::numbers::pi * scale, 50.0 * std::numbers::pi * scale, pick(31), Scale::linear};
    default: return std::nullopt;
  }
}

inline double default_reflection(Target t) {
  switch (t) {
    case Target::mirror: return -1.0;
    case Target::subwavelength: return 0.9;
    case Target::optical: return 0.8;
    default: return 0.9;
  }
}

/// Adiabatic single-rate estimate gamma + 4 g^2 / kappa (gamma alone without a cavity).
inline double adiabatic_rate(double g, double kappa, double gamma) {
  return kappa > 0.0 ? gamma + 4.0 * g * g / kappa : gamma;
}

/// Checks the config; throws ConfigError.
inline void validate_config(const SweepConfig& c) {
  if (!(c.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (c.n_traj < 1) throw ConfigError("n_traj must be >= 1");
  if (c.fock < 1) throw ConfigError("fock must be >= 1");
  if (!(c.dt >= 0.0)) throw ConfigError("dt must be >= 0");
  if (c.grid) {
    const auto& g = *c.grid;
    if (g.count < 2) throw ConfigError("grid count must be >= 2");
    if (!(g.stop > g.start)) throw ConfigError("grid stop must be > start");
    if (g.scale == Scale::log && !(g.start > 0.0)) throw ConfigError("log grid needs start > 0");
    if (g.count > 1000000) throw ConfigError("grid count must be <= 1000000");
  }
  if (c.k0d && c.d_over_lambda) throw ConfigError("give either k0d or d_over_lambda, not both");
  if (c.k0d && !(*c.k0d >= 0.0)) throw ConfigError("k0d must be >= 0");
  if (c.d_over_lambda && !(*c.d_over_lambda >= 0.0)) throw ConfigError("d_over_lambda must be >= 0");
  if (c.r && !(std::abs(*c.r) <= 1.0)) throw ConfigError("r must lie in [-1, 1]");
  if (c.target == Target::mirror) {
    if (c.method == MethodSel::series || c.method == MethodSel::limit) {
      throw ConfigError("mirror target supports methods closed, quadrature, all");
    }
  } else if (is_cavity_family(c.target)) {
    if (c.method == MethodSel::closed) throw ConfigError("cavity targets support methods quadrature, series, limit, all");
  }
  if (c.target == Target::lindblad) {
    if (!std::isfinite(c.g) || !(c.kappa >= 0.0) || !(c.gamma >= 0.0)) {
      throw ConfigError("lindblad needs finite g, kappa >= 0, gamma >= 0");
    }
    if (c.gamma_cav && !(*c.gamma_cav >= 0.0)) throw ConfigError("gamma_cav must be >= 0");
    if (c.grid && !(c.grid->start >= 0.0)) throw ConfigError("lindblad time grid must start at >= 0");
  }
  if ((c.target == Target::mirror || is_cavity_family(c.target)) && c.axis == Axis::reflection && c.grid) {
    if (c.grid->start < -1.0 || c.grid->stop > 1.0) throw ConfigError("reflection grid must lie in [-1, 1]");
  }
  if ((c.target == Target::mirror || is_cavity_family(c.target)) && c.axis == Axis::distance && c.grid &&
      !(c.grid->start >= 0.0)) {
    throw ConfigError("distance grid must start at >= 0");
  }
  if (c.target == Target::figure && !c.figure) throw ConfigError("figure target needs a figure id");
}

struct SweepSummary {
  std::size_t rows = 0;
  std::size_t failed_cells = 0;  // NonConvergence or TailTooLarge
};

namespace detail {

inline std::string join_status(const std::vector<std::string>& reasons) {
  if (reasons.empty()) return "ok";
  std::string s;
  for (const auto& r : reasons) {
    if (!s.empty()) s += ';';
    s += r;
  }
  return s;
}

struct CellOutcome {
  std::string row;
  bool failed = false;
};

/// (distance column in d/lambda0, k0d, reflection) for each grid point.
struct SweepPoint {
  double d_over_lambda;
  double k0d;
  double r;
};

inline std::vector<SweepPoint> sweep_points(const SweepConfig& c) {
  const auto u = effective_units(c);
  const double r_fixed = c.r.value_or(default_reflection(c.target));
  double k_fixed = 0.0;
  if (c.k0d) k_fixed = *c.k0d;
  else if (c.d_over_lambda) k_fixed = to_k0d(*c.d_over_lambda, DistanceUnits::d_over_lambda);
  else if (c.axis == Axis::reflection) k_fixed = c.target == Target::mirror ? 0.01 : 1e-3;

  const auto grid = c.grid ? c.grid : default_grid(c);
  std::vector<SweepPoint> pts;
  if (!grid) {
    pts.push_back({k_fixed / (2.0 * std::numbers::pi), k_fixed, r_fixed});
    return pts;
  }
  for (double v : grid->points()) {
    if (c.axis == Axis::reflection) {
      pts.push_back({k_fixed / (2.0 * std::numbers::pi), k_fixed, v});
    } else {
      const double k = to_k0d(v, u);
      const double dl = u == DistanceUnits::d_over_lambda ? v : v / (2.0 * std::numbers::pi);
      pts.push_back({dl, k, r_fixed});
    }
  }
  return pts;
}

inline bool wants(MethodSel sel, MethodSel m) { return sel == MethodSel::all || sel == m; }

inline CellOutcome mirror_cell(const SweepConfig& c, const SweepPoint& p) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double closed = nan, quad = nan, err = nan;
  std::vector<std::string> reasons;
  bool failed = false;
  if (wants(c.method, MethodSel::closed)) {
    try {
      const auto res = gamma_mirror_closed(p.r, p.k0d);
      closed = res.ratio;
      err = res.err_estimate;
    } catch (const InvalidParams&) {
      reasons.push_back("closed_invalid_params");
    }
  }
  if (wants(c.method, MethodSel::quadrature)) {
    try {
      const auto res = gamma_mirror_quadrature(p.r, p.k0d, c.tol);
      quad = res.ratio;
      err = std::isnan(err) ? res.err_estimate : err + res.err_estimate;
    } catch (const NonConvergence&) {
      reasons.push_back("quadrature_nonconvergence");
      failed = true;
    } catch (const InvalidParams&) {
      reasons.push_back("quadrature_invalid_params");
    }
  }
  const double diff = std::abs(closed - quad);
  std::string row = format_double(p.d_over_lambda) + ',' + format_double(p.k0d) + ',' + format_double(p.r) + ',' +
                    format_double(closed) + ',' + format_double(quad) + ',' + format_double(diff) + ',' +
                    format_double(err) + ',' + join_status(reasons);
  return {std::move(row), failed};
}

inline CellOutcome cavity_cell(const SweepConfig& c, const SweepPoint& p) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double quad = nan, series = nan, lim = nan, err = nan;
  std::vector<std::string> reasons;
  bool failed = false;
  auto add_err = [&](double e) { err = std::isnan(err) ? e : std::max(err, e); };

  std::optional<CavitySpec> spec;
  const bool need_spec = wants(c.method, MethodSel::quadrature) || wants(c.method, MethodSel::series);
  if (need_spec) {
    try {
      spec.emplace(p.r, p.k0d);
    } catch (const DegenerateMirror&) {
      reasons.push_back("degenerate_mirror");
    } catch (const InvalidParams&) {
      reasons.push_back("invalid_params");
    }
  }
  if (spec && wants(c.method, MethodSel::quadrature)) {
    try {
      CavityQuadratureOptions opt;
      opt.tol = c.tol;
      const auto res = gamma_cavity_quadrature(*spec, opt);
      quad = res.ratio;
      add_err(res.err_estimate);
    } catch (const NonConvergence&) {
      reasons.push_back("quadrature_nonconvergence");
      failed = true;
    }
  }
  if (spec && wants(c.method, MethodSel::series)) {
    try {
      const auto res = gamma_cavity_series(*spec);
      series = res.ratio;
      add_err(res.err_estimate);
    } catch (const TailTooLarge&) {
      reasons.push_back("series_tail_too_large");
      failed = true;
    }
  }
  if (wants(c.method, MethodSel::limit)) {
    try {
      const auto res = c.target == Target::optical ? gamma_optical_asymptote(p.r) : gamma_subwavelength_2nd(p.r, p.k0d);
      lim = res.ratio;
      if (!spec || c.method == MethodSel::limit) add_err(res.err_estimate);
      if (c.target != Target::optical && p.k0d > subwavelength_soft_limit) reasons.push_back("limit_beyond_subwavelength");
    } catch (const DegenerateMirror&) {
      reasons.push_back("limit_degenerate_mirror");
    }
  }
  std::string row = format_double(p.k0d) + ',' + format_double(p.r) + ',' + format_double(quad) + ',' +
                    format_double(series) + ',' + format_double(lim) + ',' + format_double(err) + ',' +
                    join_status(reasons);
  return {std::move(row), failed};
}

}  // namespace detail

inline std::string csv_header(Target t) {
  switch (t) {
    case Target::mirror: return "d_over_lambda0,k0d,re_r,ratio_closed,ratio_quadrature,abs_diff,err_estimate,status";
    case Target::cavity:
    case Target::subwavelength:
      return "k0d,r_mir,ratio_quadrature,ratio_series,ratio_limit_2nd,err_estimate,status";
    case Target::optical: return "k0d,r_mir,ratio_quadrature,ratio_series,ratio_optical_limit,err_estimate,status";
    case Target::lindblad: return "t,pop_jc,pop_single_rate,pop_jump_mean,pop_jump_stderr";
    default: return {};
  }
}

/// Evaluates the sweep and writes the CSV (header plus one row per grid
/// point, in grid order). Cells are computed in parallel.
inline SweepSummary run_sweep(const SweepConfig& c, std::ostream& out) {
  validate_config(c);
  SweepSummary summary;
  out << csv_header(c.target) << '\n';

  if (c.target == Target::lindblad) {
    const auto grid = c.grid ? *c.grid : *default_grid(c);
    const auto ts = grid.points();
    const ModelParams params{c.g, c.kappa, c.gamma};
    const double gamma_cav = c.gamma_cav.value_or(adiabatic_rate(c.g, c.kappa, c.gamma));
    DiscrepancyOptions dopt;
    dopt.dt = c.dt;
    dopt.fock_cutoff = c.fock;
    const auto disc = model_discrepancy(params, gamma_cav, ts, dopt);
    Matrix2 excited = Matrix2::Zero();
    excited(1, 1) = 1.0;
    const auto ens = unravel_jumps(gamma_cav, excited, static_cast<std::size_t>(c.n_traj), c.seed, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      out << format_double(ts[i]) << ',' << format_double(disc.pop_jc[i]) << ',' << format_double(disc.pop_single[i])
          << ',' << format_double(ens.excited_population[i]) << ',' << format_double(ens.excited_stderr[i]) << '\n';
    }
    summary.rows = ts.size();
    return summary;
  }

  if (c.target != Target::mirror && !is_cavity_family(c.target)) {
    throw ConfigError("run_sweep: target " + std::string(to_string(c.target)) + " is not a sweep");
  }
  const auto pts = detail::sweep_points(c);
  std::vector<detail::CellOutcome> cells(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    cells[i] = c.target == Target::mirror ? detail::mirror_cell(c, pts[i]) : detail::cavity_cell(c, pts[i]);
  });
  for (const auto& cell : cells) {
    out << cell.row << '\n';
    if (cell.failed) ++summary.failed_cells;
  }
  summary.rows = cells.size();
  return summary;
}

/// One curve of a figure: the sweep that produces it and its file name.
struct FigureCurve {
  std::string file;
  std::string parameter;  // "r" or "k0d"
  double value;
  SweepConfig config;
};

inline std::vector<FigureCurve> figure_curves(FigureId id, bool quick = false) {
  std::vector<FigureCurve> curves;
  auto tag = [](double v) {
    std::string s = format_double(v);
    std::replace(s.begin(), s.end(), '-', 'm');
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
  };
  const std::string name(to_string(id));
  auto mirror_curve = [&](double r) {
    SweepConfig c;
    c.target = Target::mirror;
    c.r = r;
    c.units = DistanceUnits::d_over_lambda;
    c.grid = Range{0.01, 2.0, quick ? 21 : 200, Scale::linear};
    curves.push_back({name + "_r" + tag(r) + ".csv", "r", r, c});
  };
  auto vs_r_curve = [&](double k, double r0, double r1) {
    SweepConfig c;
    c.target = Target::subwavelength;
    c.axis = Axis::reflection;
    c.k0d = k;
    c.method = MethodSel::all;
    c.grid = Range{r0, r1, quick ? 11 : 41, Scale::linear};
    curves.push_back({name + "_k0d" + tag(k) + ".csv", "k0d", k, c});
  };
  auto vs_d_curve = [&](double r) {
    SweepConfig c;
    c.target = Target::subwavelength;
    c.r = r;
    c.units = DistanceUnits::k0d;
    c.method = MethodSel::all;
    c.grid = Range{1e-3, 0.5, quick ? 11 : 60, Scale::log};
    curves.push_back({name + "_r" + tag(r) + ".csv", "r", r, c});
  };
  switch (id) {
    case FigureId::mirror_dielectric:
      for (double r : {-1.0, -0.75, -0.5, -0.25}) mirror_curve(r);
      break;
    case FigureId::mirror_plasmonic:
      for (double r : {0.25, 0.5, 0.75, 1.0}) mirror_curve(r);
      break;
    case FigureId::subwl_dielectric_vs_r:
      for (double k : {0.001, 0.01, 0.05}) vs_r_curve(k, -1.0, 0.0);
      break;
    case FigureId::subwl_plasmonic_vs_r:
      for (double k : {0.001, 0.01, 0.05}) vs_r_curve(k, 0.0, 0.95);
      break;
    case FigureId::subwl_dielectric_vs_d:
      for (double r : {-0.5, -0.8, -0.9, -0.95}) vs_d_curve(r);
      break;
    case FigureId::subwl_plasmonic_vs_d:
      for (double r : {0.5, 0.8, 0.9, 0.95}) vs_d_curve(r);
      break;
  }
  return curves;
}

/// Writes one CSV per curve and <id>_manifest.csv into outdir.
inline SweepSummary reproduce_figure(FigureId id, const std::filesystem::path& outdir, bool quick = false) {
  std::filesystem::create_directories(outdir);
  SweepSummary total;
  const auto curves = figure_curves(id, quick);
  std::ofstream manifest(outdir / (std::string(to_string(id)) + "_manifest.csv"));
  manifest << "file,target,parameter,value,grid\n";
  for (const auto& curve : curves) {
    std::ofstream f(outdir / curve.file);
    if (!f) throw ConfigError("cannot write " + (outdir / curve.file).string());
    const auto s = run_sweep(curve.config, f);
    total.rows += s.rows;
    total.failed_cells += s.failed_cells;
    manifest << curve.file << ',' << to_string(curve.config.target) << ',' << curve.parameter << ','
             << format_double(curve.value) << ',' << format_range(*curve.config.grid) << '\n';
  }
  return total;
}

}  // namespace emitrate
