#pragma once

// Report builders behind the `cliff` command-line tool.  Each function turns
// module results into a stable text artifact (JSON with fixed key order, CSV
// with a fixed header, or a self-contained SVG).  Nothing here computes a
// number that the spectral, geometry or oracle modules do not provide.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliff/fd_oracle.hpp"
#include "cliff/spectra.hpp"

namespace cliff::report {

using Json = nlohmann::ordered_json;

enum class Format { Csv, Json, Svg };

/// Invalid run configuration; `field` names the offending option.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  int m = 2;
  int j = 1;
  // Radius window (r, not r^2) sampled uniformly with `samples` points ...
  Rational r_min{1, 10};
  Rational r_max{19, 20};
  int samples = 200;
  // ... unless explicit r^2 values are given.
  std::vector<Rational> r_sq_values;
  Format format = Format::Csv;
  std::string out_path;  // empty: standard output
  int grid = 256;        // fine verification grid; the coarse one is grid/2
  int modes = 9;
  int threads = 1;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// "rigid" or "bifurcation:<jump>".
std::string classification_text(const Classification& c);

/// 12 significant digits, shortest form ("%.12g").
std::string format_real(double value);
/// The double nearest to format_real(value); keeps JSON output stable.
double round_real(double value);

Json index_json(const TorusParams& params);

Json spectrum_json(const JacobiSpectrum& spectrum);
std::string spectrum_csv(const JacobiSpectrum& spectrum);

Json instants_json(int m, int j, const std::vector<DegeneracyInstant>& instants);
std::string instants_csv(const std::vector<DegeneracyInstant>& instants);

Json geometry_json(const TorusParams& params);

struct DiagramRow {
  double r = 0.0;
  Rational r_sq;
  IndexReport index;
  double lagrange_multiplier = 0.0;
  std::string classification;
  std::optional<DegeneracyInstant> instant;
};

/// Sample rows plus one row per exact instant inside the window, sorted by
/// r^2 with duplicates merged.  Rows are evaluated on `config.threads`
/// workers and assembled in a fixed order.
std::vector<DiagramRow> diagram_rows(const RunConfig& config);
std::string diagram_csv(const std::vector<DiagramRow>& rows);
std::string diagram_svg(const RunConfig& config, const std::vector<DiagramRow>& rows);

struct VerifyOutcome {
  Json report;
  bool passed = true;
  bool solver_failed = false;
};

/// Cross-module identity checks for (m, j), plus the finite-difference and
/// lattice comparisons when (m, j) = (2, 1).
VerifyOutcome verify(const RunConfig& config);

}  // namespace cliff::report
