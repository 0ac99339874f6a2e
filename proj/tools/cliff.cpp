// cliff: spectral analysis of CMC Clifford tori from the command line.
//
// Exit codes: 0 success, 2 bad arguments, 3 I/O failure,
//             4 eigensolver non-convergence, 5 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cliff/report.hpp"
#include "cliff/spectra.hpp"

namespace {

using cliff::Rational;
using cliff::report::ConfigError;
using cliff::report::Format;
using cliff::report::RunConfig;

enum ExitCode : int {
  kOk = 0,
  kBadArguments = 2,
  kIoFailure = 3,
  kNoConvergence = 4,
  kVerifyFailed = 5,
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int m = 2;
  int j = 1;
  std::vector<std::string> r2;
  std::string rmin = "0.1";
  std::string rmax = "0.95";
  int samples = 200;
  int max_level = 8;
  std::string threshold = "0";
  std::string format;
  std::string out;
  int grid = 256;
  int modes = 9;
  bool rmin_given = false;
  bool rmax_given = false;
};

Rational parse_rational(const std::string& field, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

int threads_from_env() {
  const char* raw = std::getenv("CLIFF_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  try {
    std::size_t used = 0;
    const int n = std::stoi(raw, &used);
    if (used != std::string(raw).size() || n < 1) throw std::invalid_argument("");
    return n;
  } catch (const std::exception&) {
    throw ConfigError("CLIFF_THREADS", "must be a positive integer");
  }
}

Format parse_format(const std::string& text, Format fallback) {
  if (text.empty()) return fallback;
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  if (text == "svg") return Format::Svg;
  throw ConfigError("format", "expected csv, json or svg");
}

void emit(const Options& opts, const std::string& text) {
  if (opts.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(opts.out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + opts.out + "' for writing");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing '" + opts.out + "'");
}

std::string json_text(const cliff::report::Json& json) { return json.dump() + "\n"; }

cliff::TorusParams torus(const Options& opts) {
  if (opts.r2.size() != 1) throw ConfigError("r2", "exactly one --r2 value is required");
  try {
    return cliff::TorusParams::make(opts.m, opts.j, parse_rational("r2", opts.r2.front()));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(opts.j < 1 || opts.j >= opts.m ? "j" : "r2", e.what());
  }
}

RunConfig run_config(const Options& opts) {
  RunConfig config;
  config.m = opts.m;
  config.j = opts.j;
  config.r_min = parse_rational("rmin", opts.rmin);
  config.r_max = parse_rational("rmax", opts.rmax);
  config.samples = opts.samples;
  for (const auto& text : opts.r2) config.r_sq_values.push_back(parse_rational("r2", text));
  config.out_path = opts.out;
  config.grid = opts.grid;
  config.modes = opts.modes;
  config.threads = threads_from_env();
  config.validate();
  return config;
}

int cmd_index(const Options& opts) {
  emit(opts, json_text(cliff::report::index_json(torus(opts))));
  return kOk;
}

int cmd_spectrum(const Options& opts) {
  const auto spectrum = cliff::jacobi_eigenvalues_below(torus(opts), parse_rational("threshold", opts.threshold));
  const Format format = parse_format(opts.format, Format::Json);
  if (format == Format::Svg) throw ConfigError("format", "spectrum supports csv or json");
  emit(opts, format == Format::Csv ? cliff::report::spectrum_csv(spectrum)
                                   : json_text(cliff::report::spectrum_json(spectrum)));
  return kOk;
}

int cmd_instants(const Options& opts) {
  if (opts.j < 1 || opts.j >= opts.m) throw ConfigError("j", "must satisfy 1 <= j < m");
  std::vector<cliff::DegeneracyInstant> instants;
  if (opts.rmin_given || opts.rmax_given) {
    const Rational lo = parse_rational("rmin", opts.rmin);
    const Rational hi = parse_rational("rmax", opts.rmax);
    if (lo.sign() <= 0 || hi >= Rational(1) || hi < lo) throw ConfigError("rmin", "need 0 < rmin <= rmax < 1");
    instants = cliff::degeneracy_instants(opts.m, opts.j, lo * lo, hi * hi);
  } else {
    if (opts.max_level < 3) throw ConfigError("max-level", "must be >= 3");
    instants = cliff::degeneracy_instants_to_level(opts.m, opts.j, opts.max_level);
  }
  const Format format = parse_format(opts.format, Format::Csv);
  if (format == Format::Svg) throw ConfigError("format", "instants supports csv or json");
  emit(opts, format == Format::Csv ? cliff::report::instants_csv(instants)
                                   : json_text(cliff::report::instants_json(opts.m, opts.j, instants)));
  return kOk;
}

int cmd_diagram(const Options& opts) {
  const RunConfig config = run_config(opts);
  const Format format = parse_format(opts.format, Format::Csv);
  if (format == Format::Json) throw ConfigError("format", "diagram supports csv or svg");
  const auto rows = cliff::report::diagram_rows(config);
  emit(opts, format == Format::Csv ? cliff::report::diagram_csv(rows) : cliff::report::diagram_svg(config, rows));
  return kOk;
}

int cmd_verify(const Options& opts) {
  const auto outcome = cliff::report::verify(run_config(opts));
  emit(opts, outcome.report.dump(2) + "\n");
  if (outcome.solver_failed) return kNoConvergence;
  return outcome.passed ? kOk : kVerifyFailed;
}

int cmd_geometry(const Options& opts) {
  emit(opts, json_text(cliff::report::geometry_json(torus(opts))));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Jacobi spectra, Morse indices and bifurcation instants of CMC Clifford tori"};
  app.require_subcommand(1);
  Options opts;

  const auto add_dims = [&](CLI::App* cmd) {
    cmd->add_option("--m", opts.m, "Hypersurface dimension (ambient sphere is S^{m+1})");
    cmd->add_option("--j", opts.j, "Dimension of the first sphere factor, 1 <= j < m");
  };
  const auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--format", opts.format, "Output format: csv, json or svg");
    cmd->add_option("--out", opts.out, "Output path (default: standard output)");
  };

  auto* index = app.add_subcommand("index", "Strong/weak Morse index, nullity and classification");
  add_dims(index);
  index->add_option("--r2", opts.r2, "Squared radius as num/den or decimal")->required();
  index->add_option("--out", opts.out, "Output path");

  auto* spectrum = app.add_subcommand("spectrum", "Jacobi eigenvalues up to a threshold");
  add_dims(spectrum);
  spectrum->add_option("--r2", opts.r2, "Squared radius")->required();
  spectrum->add_option("--threshold", opts.threshold, "Largest eigenvalue to report (default 0)");
  add_output(spectrum);

  auto* instants = app.add_subcommand("instants", "Degeneracy instants r_i and s_l");
  add_dims(instants);
  instants->add_option("--max-level", opts.max_level, "Largest level i, l (>= 3)");
  auto* rmin_i = instants->add_option("--rmin", opts.rmin, "Restrict to r >= rmin");
  auto* rmax_i = instants->add_option("--rmax", opts.rmax, "Restrict to r <= rmax");
  add_output(instants);

  auto* diagram = app.add_subcommand("diagram", "Index staircase over a radius window");
  add_dims(diagram);
  diagram->add_option("--rmin", opts.rmin, "Smallest radius r");
  diagram->add_option("--rmax", opts.rmax, "Largest radius r");
  diagram->add_option("--samples", opts.samples, "Number of uniform samples in r");
  diagram->add_option("--r2", opts.r2, "Explicit squared radii instead of a window");
  add_output(diagram);

  auto* verify = app.add_subcommand("verify", "Cross-check identities and the finite-difference spectrum");
  add_dims(verify);
  verify->add_option("--grid", opts.grid, "Fine grid size N (coarse grid is N/2)");
  verify->add_option("--modes", opts.modes, "Number of smallest eigenvalues to compare");
  verify->add_option("--r2", opts.r2, "Squared radii to check");
  verify->add_option("--out", opts.out, "Output path");

  auto* geometry = app.add_subcommand("geometry", "Curvatures, Lagrange multiplier and orbit data");
  add_dims(geometry);
  geometry->add_option("--r2", opts.r2, "Squared radius")->required();
  geometry->add_option("--out", opts.out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadArguments;
  }
  opts.rmin_given = rmin_i->count() > 0;
  opts.rmax_given = rmax_i->count() > 0;

  try {
    if (index->parsed()) return cmd_index(opts);
    if (spectrum->parsed()) return cmd_spectrum(opts);
    if (instants->parsed()) return cmd_instants(opts);
    if (diagram->parsed()) return cmd_diagram(opts);
    if (verify->parsed()) return cmd_verify(opts);
    if (geometry->parsed()) return cmd_geometry(opts);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const cliff::fd::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  }
  return kBadArguments;
}
