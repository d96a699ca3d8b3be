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

// Command-line front end: rate sweeps, figure data, master-equation
// comparisons and the self-validation suite.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "emitrate/emitrate.hpp"

namespace {

namespace fs = std::filesystem;
using namespace emitrate;

enum Exit { ok = 0, validation_failed = 1, config_error = 2, numerical_failure = 3 };

struct Flags {
  std::map<std::string, std::string> values;  // config key -> flag text
  std::string config_file;
  std::string figure_id;
  bool quick = false;
  bool dump = false;
  bool fault = false;
};

void add_sweep_options(CLI::App* sub, Flags& f) {
  auto opt = [&](const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(flag, [&f, key](const std::string& v) { f.values[key] = v; }, help);
  };
  opt("--r", "r", "Reflection rate (real part for the mirror)");
  opt("--k0d", "k0d", "Fixed distance as k0 d");
  opt("--d-over-lambda", "d_over_lambda", "Fixed distance as d / lambda0");
  opt("--grid", "grid", "Sweep range start:stop:count[:log]");
  opt("--axis", "axis", "Swept quantity: distance or reflection");
  opt("--units", "units", "Units of a distance grid: k0d or d_over_lambda");
  opt("--method", "method", "closed, quadrature, series, limit or all");
  opt("--tol", "tol", "Relative quadrature tolerance");
}

void add_dynamics_options(CLI::App* sub, Flags& f) {
  auto opt = [&](const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(flag, [&f, key](const std::string& v) { f.values[key] = v; }, help);
  };
  opt("--grid", "grid", "Sample times start:stop:count");
  opt("--g", "g", "Atom-cavity coupling");
  opt("--kappa", "kappa", "Cavity decay rate");
  opt("--gamma", "gamma", "Atomic decay rate");
  opt("--gamma-cav", "gamma_cav", "Single-rate model decay rate (default gamma + 4 g^2 / kappa)");
  opt("--dt", "dt", "Integrator step (0 picks one)");
  opt("--fock", "fock", "Photon-number cutoff");
  opt("--n-traj", "n_traj", "Number of quantum-jump trajectories");
  opt("--seed", "seed", "RNG seed");
}

void add_common_options(CLI::App* sub, Flags& f) {
  sub->add_option_function<std::string>("--out", [&f](const std::string& v) { f.values["out"] = v; },
                                        "Output file (directory for figure)");
  sub->add_option("--config", f.config_file, "key = value config file; flags override it");
  sub->add_flag("--quick", f.quick, "Smaller grids and ensembles");
  sub->add_flag("--dump-config", f.dump, "Print the effective config and exit");
}

fs::path default_dir() {
  if (const char* env = std::getenv("EMITRATE_OUT_DIR"); env && *env) return env;
  return ".";
}

SweepConfig build_config(Target target, const Flags& f) {
  SweepConfig cfg;
  if (!f.config_file.empty()) cfg = load_config(f.config_file);
  cfg.target = target;
  for (const auto& [key, value] : f.values) set_config_value(cfg, key, value);
  if (f.quick) cfg.quick = true;
  if (!f.figure_id.empty()) cfg.figure = parse_figure(f.figure_id);
  validate_config(cfg);
  return cfg;
}

int run_sweep_command(const SweepConfig& cfg) {
  const fs::path path = cfg.out.empty() ? default_dir() / (std::string(to_string(cfg.target)) + ".csv") : fs::path(cfg.out);
  std::ostringstream csv;
  SweepSummary s;
  try {
    s = run_sweep(cfg, csv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const StepTooLarge& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const InvalidParams& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "cannot write " << path.string() << '\n';
    return config_error;
  }
  file << csv.str();
  std::cout << "wrote " << s.rows << " rows to " << path.string();
  if (cfg.target == Target::lindblad) std::cout << " (seed " << cfg.seed << ")";
  std::cout << '\n';
  if (s.failed_cells > 0) {
    std::cerr << s.failed_cells << " cells did not converge (marked nan)\n";
    return numerical_failure;
  }
  return ok;
}

int run_figure_command(const SweepConfig& cfg) {
  const fs::path dir = cfg.out.empty() ? default_dir() : fs::path(cfg.out);
  SweepSummary s;
  try {
    s = reproduce_figure(*cfg.figure, dir, cfg.quick);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  }
  for (const auto& c : figure_curves(*cfg.figure, cfg.quick)) std::cout << (dir / c.file).string() << '\n';
  std::cout << (dir / (std::string(to_string(*cfg.figure)) + "_manifest.csv")).string() << '\n';
  if (s.failed_cells > 0) {
    std::cerr << s.failed_cells << " cells did not converge (marked nan)\n";
    return numerical_failure;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spontaneous decay rates near mirrors and in planar cavities"};
  app.require_subcommand(1);
  Flags flags;

  std::map<CLI::App*, Target> targets;
  auto sweep = [&](const char* name, Target t, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    add_sweep_options(sub, flags);
    add_common_options(sub, flags);
    targets[sub] = t;
    return sub;
  };
  sweep("mirror", Target::mirror, "Emitter in front of one mirror");
  sweep("cavity", Target::cavity, "Emitter centred in a two-mirror cavity");
  sweep("subwavelength", Target::subwavelength, "Cavity with k0 d << 1 (adds second-order limit)");
  sweep("optical", Target::optical, "Cavity with k0 d >> 1 (adds optical asymptote)");

  auto* lind = app.add_subcommand("lindblad", "Jaynes-Cummings versus single-rate master equation");
  add_dynamics_options(lind, flags);
  add_common_options(lind, flags);
  targets[lind] = Target::lindblad;

  auto* fig = app.add_subcommand("figure", "Write the curves of one published figure");
  fig->add_option("id", flags.figure_id, "Figure id")->required();
  add_common_options(fig, flags);
  targets[fig] = Target::figure;

  auto* val = app.add_subcommand("validate", "Run the self-validation suite");
  val->add_flag("--quick", flags.quick, "Reduced suite");
  val->add_flag("--inject-kernel-fault", flags.fault, "Perturb f_kernel by 1e-3 in the checked routes");
  targets[val] = Target::validate;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  const Target target = targets.at(app.get_subcommands().front());
  if (target == Target::validate) {
    ValidationOptions opt;
    opt.quick = flags.quick;
    opt.kernel_fault = flags.fault ? 1e-3 : 0.0;
    const bool passed = print_report(run_validation(opt), std::cout);
    return passed ? ok : validation_failed;
  }

  SweepConfig cfg;
  try {
    cfg = build_config(target, flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  }
  if (flags.dump) {
    std::cout << dump_config(cfg);
    return ok;
  }
  if (target == Target::figure) return run_figure_command(cfg);
  return run_sweep_command(cfg);
}
