// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the library only through the C API.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nclaplace/nclaplace.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNonConvergence = 2;

struct RunConfig {
  std::string surface = "sphere";
  std::vector<double> axes;
  int N = 100;
  std::vector<int> N_list;
  std::string beta = "auto";
  std::string strategy = "auto";
  int count = 9;
  int K = -1;
  double epsilon = 1e-12;
  double gap = 0.0;
  int max_iterations = 4000;
  std::string grid_offset = "paper";
  std::string out = ".";
  std::string format = "both";
  std::string matrix_format = "both";
  std::string function = "1";
  std::string dump_coords;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Handles {
  nclap_surface* surface = nullptr;
  nclap_operator* op = nullptr;
  nclap_spectrum* spectrum = nullptr;
  nclap_reference* reference = nullptr;
  nclap_convergence* convergence = nullptr;
  nclap_axioms* axioms = nullptr;
  ~Handles() {
    nclap_axioms_destroy(axioms);
    nclap_convergence_destroy(convergence);
    nclap_reference_destroy(reference);
    nclap_spectrum_destroy(spectrum);
    nclap_operator_destroy(op);
    nclap_surface_destroy(surface);
  }
};

std::vector<double> parse_axes(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--axes expects comma-separated numbers, got '" + text + "'");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--N-list expects comma-separated integers, got '" + text + "'");
    }
  }
  return out;
}

// Fields present in a JSON config file fill in anything not given on the
// command line.
void apply_config_file(const std::string& path, RunConfig& cfg, const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  auto given = [&](const char* flag) { return cmd.count(flag) > 0; };
  try {
    if (j.contains("surface") && !given("--surface")) {
      if (j["surface"].is_object()) {
        cfg.surface = j["surface"].value("kind", cfg.surface);
        if (j["surface"].contains("semi_axes") && !given("--axes"))
          cfg.axes = j["surface"]["semi_axes"].get<std::vector<double>>();
      } else {
        cfg.surface = j["surface"].get<std::string>();
      }
    }
    if (j.contains("kind") && !given("--surface")) cfg.surface = j["kind"].get<std::string>();
    if (j.contains("semi_axes") && !given("--axes")) cfg.axes = j["semi_axes"].get<std::vector<double>>();
    if (j.contains("N") && !given("--N")) cfg.N = j["N"].get<int>();
    if (j.contains("N_list") && !given("--N-list")) cfg.N_list = j["N_list"].get<std::vector<int>>();
    if (j.contains("beta") && !given("--beta"))
      cfg.beta = j["beta"].is_string() ? j["beta"].get<std::string>() : std::to_string(j["beta"].get<double>());
    if (j.contains("strategy") && !given("--strategy")) cfg.strategy = j["strategy"].get<std::string>();
    if (j.contains("count") && !given("--count")) cfg.count = j["count"].get<int>();
    if (j.contains("K") && !given("--K")) cfg.K = j["K"].get<int>();
    if (j.contains("epsilon") && !given("--epsilon")) cfg.epsilon = j["epsilon"].get<double>();
    if (j.contains("grid_offset") && !given("--grid-offset")) cfg.grid_offset = j["grid_offset"].get<std::string>();
    if (j.contains("out") && !given("--out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("format") && !given("--format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("function") && !given("--function")) cfg.function = j["function"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

double resolve_beta(const std::string& text) {
  if (text == "auto") return 0.0;
  try {
    std::size_t used = 0;
    const double b = std::stod(text, &used);
    if (used != text.size() || !(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument(text);
    return b;
  } catch (const std::exception&) {
    throw ConfigError("--beta must be 'auto' or a positive number, got '" + text + "'");
  }
}

nclap_strategy resolve_strategy(const std::string& s) {
  if (s == "auto") return NCLAP_STRATEGY_AUTO;
  if (s == "dense") return NCLAP_STRATEGY_DENSE;
  if (s == "blocks") return NCLAP_STRATEGY_BLOCKS;
  if (s == "iterative") return NCLAP_STRATEGY_ITERATIVE;
  throw ConfigError("--strategy must be auto, dense, blocks or iterative");
}

nclap_format resolve_format(const std::string& f) {
  if (f == "json") return NCLAP_FORMAT_JSON;
  if (f == "csv") return NCLAP_FORMAT_CSV;
  if (f == "both") return NCLAP_FORMAT_BOTH;
  throw ConfigError("--format must be json, csv or both");
}

const char* strategy_name(nclap_strategy s) {
  switch (s) {
    case NCLAP_STRATEGY_DENSE:
      return "dense";
    case NCLAP_STRATEGY_BLOCKS:
      return "blocks";
    case NCLAP_STRATEGY_ITERATIVE:
      return "iterative";
    default:
      return "auto";
  }
}

// Library failures: non-convergence maps to 2, everything else to 1.
int report_failure(nclap_status st, const char* what) {
  std::cerr << "error: " << what << ": " << nclap_status_string(st) << ": " << nclap_last_error() << '\n';
  return st == NCLAP_ERR_CONVERGENCE ? kExitNonConvergence : kExitConfig;
}

nclap_grid_config grid_config(const RunConfig& cfg, int N) {
  nclap_grid_config g;
  nclap_grid_config_default(&g);
  g.N = N;
  g.beta = resolve_beta(cfg.beta);
  if (cfg.grid_offset == "paper")
    g.offset = NCLAP_GRID_PAPER;
  else if (cfg.grid_offset == "symmetric")
    g.offset = NCLAP_GRID_SYMMETRIC;
  else
    throw ConfigError("--grid-offset must be paper or symmetric");
  g.epsilon = cfg.epsilon;
  return g;
}

nclap_spectrum_options spectrum_options(const RunConfig& cfg) {
  nclap_spectrum_options o;
  nclap_spectrum_options_default(&o);
  o.strategy = resolve_strategy(cfg.strategy);
  o.count = cfg.count;
  o.max_offset = cfg.K;
  o.cluster_gap = cfg.gap;
  o.max_iterations = cfg.max_iterations;
  return o;
}

nclap_status make_surface(const RunConfig& cfg, nclap_surface** out) {
  return nclap_surface_create(cfg.surface.c_str(), cfg.axes.empty() ? nullptr : cfg.axes.data(), cfg.axes.size(),
                              out);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

void print_clusters(const nclap_spectrum* sp, const nclap_reference* ref) {
  std::vector<std::pair<double, int>> refc;
  if (ref) {
    const double tol = 1e-6;
    const std::size_t n = nclap_reference_cluster_count(ref, tol);
    for (std::size_t i = 0; i < n; ++i) {
      double v;
      int m;
      nclap_reference_cluster(ref, tol, i, &v, &m);
      refc.emplace_back(v, m);
    }
  }
  std::printf("%-8s %-22s %-5s", "cluster", "mean", "mult");
  if (ref) std::printf(" %-22s %-12s %-5s", "reference", "delta", "ref_mult");
  std::printf("\n");
  const std::size_t n = nclap_spectrum_cluster_count(sp);
  for (std::size_t i = 0; i < n; ++i) {
    double mean;
    int mult;
    nclap_spectrum_cluster(sp, i, &mean, &mult);
    std::printf("%-8zu %-22.15g %-5d", i, mean, mult);
    if (!refc.empty()) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < refc.size(); ++k)
        if (std::abs(refc[k].first - mean) < std::abs(refc[best].first - mean)) best = k;
      std::printf(" %-22.15g %-12.3e %-5d", refc[best].first, mean - refc[best].first, refc[best].second);
    }
    std::printf("\n");
  }
}

int cmd_spectrum(const RunConfig& cfg) {
  Handles h;
  const nclap_format format = resolve_format(cfg.format);
  const nclap_grid_config g = grid_config(cfg, cfg.N);
  const nclap_spectrum_options o = spectrum_options(cfg);
  nclap_status st = make_surface(cfg, &h.surface);
  if (st != NCLAP_OK) return report_failure(st, "surface");
  st = nclap_operator_create(h.surface, &g, &h.op);
  if (st != NCLAP_OK) return report_failure(st, "operator assembly");
  st = nclap_spectrum_compute(h.op, &o, &h.spectrum);
  if (st != NCLAP_OK && !(st == NCLAP_ERR_CONVERGENCE && h.spectrum)) return report_failure(st, "spectrum");
  const nclap_status solve_status = st;

  ensure_dir(cfg.out);
  const std::string stem = cfg.out + "/spectrum";
  if (nclap_status w = nclap_spectrum_write(h.spectrum, stem.c_str(), format); w != NCLAP_OK)
    return report_failure(w, "writing report");
  if (!cfg.dump_coords.empty()) {
    if (nclap_status w = nclap_operator_dump(h.op, cfg.dump_coords.c_str(), NCLAP_MATRIX_BOTH); w != NCLAP_OK)
      return report_failure(w, "writing coordinate matrices");
  }

  nclap_spectrum_info info;
  nclap_spectrum_info_get(h.spectrum, &info);
  std::printf("surface %s  N %d  beta %.15g  hbar %.15g  strategy %s  K %d\n", nclap_surface_name(h.surface), info.N,
              info.beta, info.hbar, strategy_name(info.strategy), info.max_offset);
  if (nclap_reference_auto(h.surface, cfg.count, &h.reference) != NCLAP_OK) h.reference = nullptr;
  std::printf("eigenvalues:");
  for (std::size_t i = 0; i < nclap_spectrum_size(h.spectrum); ++i) {
    nclap_eigenpair e;
    nclap_spectrum_get(h.spectrum, i, &e);
    std::printf(" %.15g%s", e.value, e.converged ? "" : "(unconverged)");
  }
  std::printf("\n");
  print_clusters(h.spectrum, h.reference);
  if (info.imaginary_leakage > 0.0) std::printf("max |Im lambda| %.3e\n", info.imaginary_leakage);
  if (solve_status == NCLAP_ERR_CONVERGENCE) return report_failure(solve_status, "spectrum (partial report written)");
  return kExitOk;
}

std::vector<int> n_list(const RunConfig& cfg, std::vector<int> fallback) {
  return cfg.N_list.empty() ? fallback : cfg.N_list;
}

int cmd_converge(const RunConfig& cfg) {
  if (cfg.N_list.size() < 2) throw ConfigError("converge needs --N-list with at least two values");
  Handles h;
  const nclap_grid_config g = grid_config(cfg, cfg.N_list.front());
  const nclap_spectrum_options o = spectrum_options(cfg);
  nclap_status st = make_surface(cfg, &h.surface);
  if (st != NCLAP_OK) return report_failure(st, "surface");
  st = nclap_convergence_run(h.surface, cfg.N_list.data(), cfg.N_list.size(), &g, &o, nullptr, &h.convergence);
  if (st != NCLAP_OK && !(st == NCLAP_ERR_CONVERGENCE && h.convergence)) return report_failure(st, "convergence");
  const nclap_status solve_status = st;
  ensure_dir(cfg.out);
  if (nclap_status w = nclap_convergence_write(h.convergence, cfg.out.c_str()); w != NCLAP_OK)
    return report_failure(w, "writing convergence table");
  std::printf("%-6s %-10s %-8s %-22s %-22s %-12s %s\n", "N", "hbar", "cluster", "lambda", "reference", "abs_error",
              "order");
  for (std::size_t i = 0; i < nclap_convergence_size(h.convergence); ++i) {
    nclap_convergence_row r;
    nclap_convergence_get(h.convergence, i, &r);
    std::printf("%-6d %-10.4g %-8d %-22.15g %-22.15g %-12.3e ", r.N, r.hbar, r.cluster, r.lambda, r.reference,
                r.abs_error);
    if (std::isnan(r.fitted_order))
      std::printf("-\n");
    else
      std::printf("%.3f\n", r.fitted_order);
  }
  if (solve_status == NCLAP_ERR_CONVERGENCE) return report_failure(solve_status, "convergence (partial table written)");
  return kExitOk;
}

int cmd_axioms(const RunConfig& cfg) {
  Handles h;
  const std::vector<int> Ns = n_list(cfg, {50, 100, 200});
  const nclap_grid_config g = grid_config(cfg, Ns.front());
  nclap_status st = make_surface(cfg, &h.surface);
  if (st != NCLAP_OK) return report_failure(st, "surface");
  st = nclap_axioms_run(h.surface, Ns.data(), Ns.size(), &g, &h.axioms);
  if (st != NCLAP_OK) return report_failure(st, "axioms");
  ensure_dir(cfg.out);
  if (nclap_status w = nclap_axioms_write(h.axioms, (cfg.out + "/axioms.csv").c_str()); w != NCLAP_OK)
    return report_failure(w, "writing axiom table");
  static const char* names = "xyz";
  std::printf("%-6s %-6s %-14s %-14s %-12s\n", "N", "pair", "product", "bracket", "norm_bound");
  for (std::size_t i = 0; i < nclap_axioms_size(h.axioms); ++i) {
    nclap_axiom_row r;
    nclap_axioms_get(h.axioms, i, &r);
    std::printf("%-6d %c,%c    %-14.6e %-14.6e %-12.6g\n", r.N, names[r.i], names[r.j], r.product_defect,
                r.bracket_defect, r.norm_bound);
  }
  for (std::size_t i = 0; i < nclap_axioms_trace_size(h.axioms); ++i) {
    nclap_trace_result t;
    nclap_axioms_trace_get(h.axioms, i, &t);
    std::printf("trace N %-6d 2 pi hbar Tr(I) %.15g  area %.15g  |diff| %.3e\n", t.N, t.trace, t.integral,
                t.abs_error);
  }
  return kExitOk;
}

int cmd_trace(const RunConfig& cfg) {
  Handles h;
  nclap_status st = make_surface(cfg, &h.surface);
  if (st != NCLAP_OK) return report_failure(st, "surface");
  const std::vector<int> Ns = n_list(cfg, {cfg.N});
  std::printf("%-6s %-10s %-22s %-22s %-12s\n", "N", "function", "trace", "integral", "abs_error");
  for (int N : Ns) {
    const nclap_grid_config g = grid_config(cfg, N);
    nclap_trace_result t;
    st = nclap_trace(h.surface, &g, cfg.function.c_str(), &t);
    if (st != NCLAP_OK) return report_failure(st, "trace");
    std::printf("%-6d %-10s %-22.15g %-22.15g %-12.3e\n", t.N, cfg.function.c_str(), t.trace, t.integral, t.abs_error);
  }
  return kExitOk;
}

int cmd_dump(const RunConfig& cfg) {
  Handles h;
  nclap_matrix_format mf;
  if (cfg.matrix_format == "json")
    mf = NCLAP_MATRIX_JSON;
  else if (cfg.matrix_format == "binary")
    mf = NCLAP_MATRIX_BINARY;
  else if (cfg.matrix_format == "both")
    mf = NCLAP_MATRIX_BOTH;
  else
    throw ConfigError("--matrix-format must be json, binary or both");
  const nclap_grid_config g = grid_config(cfg, cfg.N);
  nclap_status st = make_surface(cfg, &h.surface);
  if (st != NCLAP_OK) return report_failure(st, "surface");
  st = nclap_operator_create(h.surface, &g, &h.op);
  if (st != NCLAP_OK) return report_failure(st, "operator assembly");
  st = nclap_operator_dump(h.op, cfg.out.c_str(), mf);
  if (st != NCLAP_OK) return report_failure(st, "dump");
  std::printf("wrote X, Y, Z, gamma for N %d (hbar %.15g) to %s\n", nclap_operator_size(h.op),
              nclap_operator_hbar(h.op), cfg.out.c_str());
  return kExitOk;
}

struct Flags {
  std::string axes;
  std::string n_list;
  std::string config;
};

void add_common(CLI::App* cmd, RunConfig& cfg, Flags& flags) {
  cmd->add_option("--surface", cfg.surface, "sphere | spheroid | ellipsoid");
  cmd->add_option("--axes", flags.axes, "semi-axes, comma separated (e.g. 1,2,3)");
  cmd->add_option("--N", cfg.N, "matrix size")->check(CLI::PositiveNumber);
  cmd->add_option("--N-list", flags.n_list, "comma-separated matrix sizes");
  cmd->add_option("--beta", cfg.beta, "auto or a positive number (hbar = (b-a) beta / N)");
  cmd->add_option("--epsilon", cfg.epsilon, "relative cutoff for inverting gamma");
  cmd->add_option("--grid-offset", cfg.grid_offset, "paper | symmetric");
  cmd->add_option("--out", cfg.out, "output directory");
  cmd->add_option("--config", flags.config, "JSON run configuration; command-line flags take precedence");
}

void add_solver(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--strategy", cfg.strategy, "auto | dense | blocks | iterative");
  cmd->add_option("--count", cfg.count, "number of eigenvalues")->check(CLI::PositiveNumber);
  cmd->add_option("--K", cfg.K, "largest offset block (default adaptive)");
  cmd->add_option("--gap", cfg.gap, "cluster gap (default 10 hbar)");
  cmd->add_option("--max-iterations", cfg.max_iterations, "iteration budget of the iterative solver")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", cfg.format, "json | csv | both");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of the matrix-regularized Laplacian on axisymmetric surfaces"};
  app.require_subcommand(1);
  RunConfig cfg;
  Flags flags;

  auto* spectrum = app.add_subcommand("spectrum", "low-lying spectrum of the noncommutative Laplacian");
  add_common(spectrum, cfg, flags);
  add_solver(spectrum, cfg);
  spectrum->add_option("--dump-coords", cfg.dump_coords, "also write X, Y, Z, gamma into this directory");

  auto* converge = app.add_subcommand("converge", "eigenvalue errors against the classical reference over N");
  add_common(converge, cfg, flags);
  add_solver(converge, cfg);

  auto* axioms = app.add_subcommand("axioms", "product and bracket defects of the quantization map");
  add_common(axioms, cfg, flags);

  auto* trace = app.add_subcommand("trace", "quantized trace against the classical integral");
  add_common(trace, cfg, flags);
  trace->add_option("--function", cfg.function, "1 | z | z2 | x2 | xy");

  auto* dump = app.add_subcommand("dump-coords", "write the coordinate and metric matrices");
  add_common(dump, cfg, flags);
  dump->add_option("--matrix-format", cfg.matrix_format, "json | binary | both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (!flags.config.empty()) apply_config_file(flags.config, cfg, *cmd);
    if (!flags.axes.empty()) cfg.axes = parse_axes(flags.axes);
    if (!flags.n_list.empty()) cfg.N_list = parse_ints(flags.n_list);
    if (cmd == spectrum) return cmd_spectrum(cfg);
    if (cmd == converge) return cmd_converge(cfg);
    if (cmd == axioms) return cmd_axioms(cfg);
    if (cmd == trace) return cmd_trace(cfg);
    if (cmd == dump) return cmd_dump(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
