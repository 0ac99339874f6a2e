#include "cliff/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "cliff/geometry.hpp"

namespace cliff::report {

namespace {

const char* kind_text(InstantKind kind) { return kind == InstantKind::RType ? "r" : "s"; }

std::string contributors_text(const JacobiEigen& entry) {
  std::string out;
  for (const auto& [i, l] : entry.contributors) {
    if (!out.empty()) out += ';';
    out += std::to_string(i) + ':' + std::to_string(l);
  }
  return out;
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  if (m < 2) throw ConfigError("m", "must be >= 2");
  if (j < 1 || j >= m) throw ConfigError("j", "must satisfy 1 <= j < m");
  const Rational one(1);
  if (r_sq_values.empty()) {
    if (r_min.sign() <= 0 || r_min >= one) throw ConfigError("rmin", "must lie in (0, 1)");
    if (r_max.sign() <= 0 || r_max >= one) throw ConfigError("rmax", "must lie in (0, 1)");
    if (r_max < r_min) throw ConfigError("rmax", "must be >= rmin");
    if (samples < 1) throw ConfigError("samples", "must be >= 1");
    if (samples == 1 && r_min != r_max) throw ConfigError("samples", "must be >= 2 for a range");
  }
  for (const auto& r2 : r_sq_values) {
    if (r2.sign() <= 0 || r2 >= one) throw ConfigError("r2", "must lie in (0, 1), got " + r2.str());
  }
  if (grid < 16) throw ConfigError("grid", "must be >= 16 (coarse grid is grid/2 >= 8)");
  if (modes < 1) throw ConfigError("modes", "must be >= 1");
  if (threads < 1) throw ConfigError("threads", "must be >= 1");
}

std::string classification_text(const Classification& c) {
  if (c.verdict == Verdict::LocallyRigid) return "rigid";
  return "bifurcation:" + std::to_string(c.jump);
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round_real(double value) { return std::stod(format_real(value)); }

// ---------------------------------------------------------------------------

Json index_json(const TorusParams& params) {
  const IndexReport index = morse_index(params);
  Json out;
  out["strong"] = index.strong_index;
  out["weak"] = index.weak_index;
  out["nullity"] = index.nullity;
  out["degenerate"] = index.degenerate;
  out["classification"] = classification_text(classify(params));
  return out;
}

Json spectrum_json(const JacobiSpectrum& spectrum) {
  Json out;
  out["m"] = spectrum.params.m;
  out["j"] = spectrum.params.j;
  out["r2"] = spectrum.params.r_sq.str();
  out["threshold"] = spectrum.threshold.str();
  out["potential"] = potential(spectrum.params).str();
  Json entries = Json::array();
  for (const auto& entry : spectrum.entries) {
    Json row;
    row["value"] = entry.value.str();
    row["approx"] = round_real(entry.value.to_double());
    row["multiplicity"] = entry.multiplicity;
    Json pairs = Json::array();
    for (const auto& [i, l] : entry.contributors) pairs.push_back({i, l});
    row["contributors"] = std::move(pairs);
    entries.push_back(std::move(row));
  }
  out["entries"] = std::move(entries);
  return out;
}

std::string spectrum_csv(const JacobiSpectrum& spectrum) {
  std::ostringstream os;
  os << "value,approx,multiplicity,contributors\n";
  for (const auto& entry : spectrum.entries) {
    os << entry.value.str() << ',' << format_real(entry.value.to_double()) << ',' << entry.multiplicity
       << ',' << contributors_text(entry) << '\n';
  }
  return os.str();
}

Json instants_json(int m, int j, const std::vector<DegeneracyInstant>& instants) {
  Json out;
  out["m"] = m;
  out["j"] = j;
  Json rows = Json::array();
  for (const auto& instant : instants) {
    Json row;
    row["kind"] = kind_text(instant.kind);
    row["level"] = instant.level;
    row["r_sq"] = instant.r_sq.str();
    row["r"] = round_real(std::sqrt(instant.r_sq.to_double()));
    row["jump"] = instant.jump;
    rows.push_back(std::move(row));
  }
  out["instants"] = std::move(rows);
  return out;
}

std::string instants_csv(const std::vector<DegeneracyInstant>& instants) {
  std::ostringstream os;
  os << "kind,level,r_sq,r,jump\n";
  for (const auto& instant : instants) {
    os << kind_text(instant.kind) << ',' << instant.level << ',' << instant.r_sq.str() << ','
       << format_real(std::sqrt(instant.r_sq.to_double())) << ',' << instant.jump << '\n';
  }
  return os.str();
}

Json geometry_json(const TorusParams& params) {
  const geometry::CurvatureData data = geometry::curvature_data(params);
  const geometry::OrbitData orbit = geometry::orbit_data(params.m, params.j);
  const double v = potential(params).to_double();
  Json out;
  out["m"] = params.m;
  out["j"] = params.j;
  out["r2"] = params.r_sq.str();
  out["r"] = round_real(std::sqrt(params.r_sq.to_double()));
  out["principal_curvatures"] = Json::array({
      Json{{"value", round_real(data.first.value)}, {"count", data.first.count}},
      Json{{"value", round_real(data.second.value)}, {"count", data.second.count}},
  });
  out["mean_curvature"] = round_real(data.mean_curvature);
  out["second_fundamental_norm_sq"] = round_real(data.second_fundamental_norm_sq);
  out["lagrange_multiplier"] = round_real(data.lagrange_multiplier);
  out["lambda_derivative"] = round_real(geometry::lambda_derivative(params));
  out["potential"] = potential(params).str();
  out["potential_identity_error"] = round_real(std::abs(params.m + data.second_fundamental_norm_sq - v));
  out["orbit_dimension"] = orbit.orbit_dimension;
  out["stabilizer"] = orbit.stabilizer_description;
  return out;
}

// ---------------------------------------------------------------------------
// Bifurcation diagram

namespace {

struct DiagramPoint {
  Rational r_sq;
  std::optional<Rational> r;  // exact radius for grid samples
  std::optional<DegeneracyInstant> instant;
};

std::vector<DiagramPoint> diagram_points(const RunConfig& config) {
  std::vector<DiagramPoint> points;
  Rational lo;
  Rational hi;
  if (!config.r_sq_values.empty()) {
    for (const auto& r2 : config.r_sq_values) points.push_back({r2, std::nullopt, std::nullopt});
    lo = *std::min_element(config.r_sq_values.begin(), config.r_sq_values.end());
    hi = *std::max_element(config.r_sq_values.begin(), config.r_sq_values.end());
  } else {
    const int n = config.samples;
    for (int k = 0; k < n; ++k) {
      const Rational r = n == 1 ? config.r_min
                                : config.r_min + (config.r_max - config.r_min) * Rational(k) / Rational(n - 1);
      points.push_back({r * r, r, std::nullopt});
    }
    lo = config.r_min * config.r_min;
    hi = config.r_max * config.r_max;
  }
  // Instants are injected so the grid never aliases a jump.
  for (const auto& instant : degeneracy_instants(config.m, config.j, lo, hi)) {
    points.push_back({instant.r_sq, std::nullopt, instant});
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const DiagramPoint& a, const DiagramPoint& b) { return a.r_sq < b.r_sq; });
  std::vector<DiagramPoint> merged;
  for (auto& point : points) {
    if (!merged.empty() && merged.back().r_sq == point.r_sq) {
      if (point.instant) merged.back().instant = point.instant;
      if (point.r) merged.back().r = point.r;
      continue;
    }
    merged.push_back(std::move(point));
  }
  return merged;
}

DiagramRow evaluate(int m, int j, const DiagramPoint& point) {
  const TorusParams params = TorusParams::make(m, j, point.r_sq);
  DiagramRow row;
  row.r_sq = point.r_sq;
  row.r = point.r ? point.r->to_double() : std::sqrt(point.r_sq.to_double());
  row.index = morse_index(params);
  row.lagrange_multiplier = geometry::curvature_data(params).lagrange_multiplier;
  row.classification = classification_text(classify(params));
  row.instant = point.instant;
  return row;
}

}  // namespace

std::vector<DiagramRow> diagram_rows(const RunConfig& config) {
  config.validate();
  const std::vector<DiagramPoint> points = diagram_points(config);
  std::vector<DiagramRow> rows(points.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      rows[i] = evaluate(config.m, config.j, points[i]);
    }
  };
  const int threads = std::max(1, std::min<int>(config.threads, static_cast<int>(points.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

std::string diagram_csv(const std::vector<DiagramRow>& rows) {
  std::ostringstream os;
  os << "r,r_sq,strong,weak,nullity,lambda,class\n";
  for (const auto& row : rows) {
    os << format_real(row.r) << ',' << row.r_sq.str() << ',' << row.index.strong_index << ','
       << row.index.weak_index << ',' << row.index.nullity << ',' << format_real(row.lagrange_multiplier)
       << ',' << row.classification << '\n';
  }
  return os.str();
}

std::string diagram_svg(const RunConfig& config, const std::vector<DiagramRow>& rows) {
  constexpr double kWidth = 800.0;
  constexpr double kHeight = 500.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 30.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 60.0;

  double r_lo = rows.empty() ? 0.0 : rows.front().r;
  double r_hi = rows.empty() ? 1.0 : rows.back().r;
  if (r_hi <= r_lo) {
    r_lo -= 0.01;
    r_hi += 0.01;
  }
  std::int64_t top_index = 1;
  for (const auto& row : rows) top_index = std::max(top_index, row.index.strong_index);
  const double y_max = static_cast<double>(top_index) + 1.0;

  const auto x_of = [&](double r) { return kLeft + (r - r_lo) / (r_hi - r_lo) * (kWidth - kLeft - kRight); };
  const auto y_of = [&](double idx) { return kHeight - kBottom - idx / y_max * (kHeight - kTop - kBottom); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << "Strong Morse index of S^" << config.j << "(r) x S^" << config.m - config.j
     << "(sqrt(1-r^2)) in S^" << config.m + 1 << "</text>\n";

  // Axes with ticks.
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << fixed(kLeft, 2) << "\" y1=\"" << fixed(y_of(0), 2) << "\" x2=\"" << fixed(kWidth - kRight, 2)
     << "\" y2=\"" << fixed(y_of(0), 2) << "\"/>\n";
  os << "<line x1=\"" << fixed(kLeft, 2) << "\" y1=\"" << fixed(y_of(0), 2) << "\" x2=\"" << fixed(kLeft, 2)
     << "\" y2=\"" << fixed(y_of(y_max), 2) << "\"/>\n";
  os << "</g>\n";
  constexpr int kXTicks = 5;
  for (int t = 0; t <= kXTicks; ++t) {
    const double r = r_lo + (r_hi - r_lo) * t / kXTicks;
    os << "<text x=\"" << fixed(x_of(r), 2) << "\" y=\"" << fixed(y_of(0) + 18, 2)
       << "\" text-anchor=\"middle\">" << fixed(r, 3) << "</text>\n";
  }
  const std::int64_t y_step = std::max<std::int64_t>(1, top_index / 8);
  for (std::int64_t idx = 0; idx <= top_index; idx += y_step) {
    os << "<text x=\"" << fixed(kLeft - 8, 2) << "\" y=\"" << fixed(y_of(static_cast<double>(idx)) + 4, 2)
       << "\" text-anchor=\"end\">" << idx << "</text>\n";
  }
  os << "<text x=\"" << fixed((kLeft + kWidth - kRight) / 2, 2) << "\" y=\"" << fixed(kHeight - 15, 2)
     << "\" text-anchor=\"middle\">r</text>\n";
  os << "<text x=\"18\" y=\"" << fixed((kTop + kHeight - kBottom) / 2, 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << fixed((kTop + kHeight - kBottom) / 2, 2)
     << ")\">strong index</text>\n";

  // Degeneracy instants.
  for (const auto& row : rows) {
    if (!row.instant) continue;
    const double x = x_of(row.r);
    os << "<line x1=\"" << fixed(x, 2) << "\" y1=\"" << fixed(y_of(0), 2) << "\" x2=\"" << fixed(x, 2) << "\" y2=\""
       << fixed(y_of(y_max), 2) << "\" stroke=\"#c0392b\" stroke-dasharray=\"4 3\"/>\n";
    os << "<text x=\"" << fixed(x + 3, 2) << "\" y=\"" << fixed(y_of(y_max) + 12, 2) << "\" fill=\"#c0392b\">"
       << kind_text(row.instant->kind) << row.instant->level << "</text>\n";
  }

  // Staircase: hold each sampled index until the next sample.
  if (!rows.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#1f4e9a\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double y = y_of(static_cast<double>(rows[i].index.strong_index));
      os << fixed(x_of(rows[i].r), 2) << ',' << fixed(y, 2);
      if (i + 1 < rows.size()) os << ' ' << fixed(x_of(rows[i + 1].r), 2) << ',' << fixed(y, 2) << ' ';
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Verification

namespace {

std::vector<Rational> verify_samples(const RunConfig& config) {
  if (!config.r_sq_values.empty()) return config.r_sq_values;
  std::vector<Rational> out;
  for (int k = 1; k < 20; ++k) out.emplace_back(k, 20);
  return out;
}

Json check(const std::string& name, bool passed) {
  Json out;
  out["name"] = name;
  out["passed"] = passed;
  return out;
}

bool spectra_mirror(const JacobiSpectrum& a, const JacobiSpectrum& b) {
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t e = 0; e < a.entries.size(); ++e) {
    const auto& x = a.entries[e];
    const auto& y = b.entries[e];
    if (x.value != y.value || x.multiplicity != y.multiplicity) return false;
    std::vector<std::pair<int, int>> swapped;
    for (const auto& [i, l] : y.contributors) swapped.emplace_back(l, i);
    std::sort(swapped.begin(), swapped.end());
    if (swapped != x.contributors) return false;
  }
  return true;
}

}  // namespace

VerifyOutcome verify(const RunConfig& config) {
  config.validate();
  const int m = config.m;
  const int j = config.j;
  const std::vector<Rational> samples = verify_samples(config);
  VerifyOutcome outcome;
  Json checks = Json::array();
  const auto record = [&](Json entry) {
    outcome.passed = outcome.passed && entry["passed"].get<bool>();
    checks.push_back(std::move(entry));
  };

  {
    double potential_err = 0.0;
    double multiplier_err = 0.0;
    for (const auto& r2 : samples) {
      const TorusParams params = TorusParams::make(m, j, r2);
      const auto data = geometry::curvature_data(params);
      potential_err = std::max(potential_err,
                               std::abs(m + data.second_fundamental_norm_sq - potential(params).to_double()));
      multiplier_err = std::max(multiplier_err, std::abs(data.lagrange_multiplier - m * data.mean_curvature));
    }
    Json a = check("potential_identity", potential_err <= 1e-12);
    a["max_error"] = potential_err;
    a["tolerance"] = 1e-12;
    record(std::move(a));
    Json b = check("lagrange_equals_m_times_mean_curvature", multiplier_err <= 1e-12);
    b["max_error"] = multiplier_err;
    b["tolerance"] = 1e-12;
    record(std::move(b));
  }

  {
    constexpr double kStep = 1e-5;
    bool positive = true;
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double r = std::sqrt(0.05 + 0.9 * k / 1000.0);
      const double analytic = geometry::lambda_derivative(m, j, r);
      positive = positive && analytic > 0.0;
      const double fd = (geometry::lagrange_multiplier(m, j, r + kStep) -
                         geometry::lagrange_multiplier(m, j, r - kStep)) / (2 * kStep);
      worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
    }
    Json c = check("lambda_derivative", positive && worst <= 1e-6);
    c["positive"] = positive;
    c["max_relative_error"] = worst;
    c["tolerance"] = 1e-6;
    c["r2_window"] = Json::array({"1/20", "19/20"});
    record(std::move(c));
  }

  {
    bool ok = true;
    const Rational threshold(10);
    for (const auto& r2 : samples) {
      const TorusParams params = TorusParams::make(m, j, r2);
      const TorusParams mirror = params.swapped();
      ok = ok && spectra_mirror(jacobi_eigenvalues_below(params, threshold),
                                jacobi_eigenvalues_below(mirror, threshold));
      ok = ok && morse_index(params) == morse_index(mirror);
    }
    auto forward = degeneracy_instants_to_level(m, j, 8);
    auto backward = degeneracy_instants_to_level(m, m - j, 8);
    ok = ok && forward.size() == backward.size();
    for (std::size_t i = 0; ok && i < forward.size(); ++i) {
      const auto& f = forward[i];
      const auto& b = backward[backward.size() - 1 - i];
      ok = f.kind != b.kind && f.level == b.level && f.jump == b.jump && f.r_sq == Rational(1) - b.r_sq;
    }
    Json s = check("factor_swap_symmetry", ok);
    s["threshold"] = threshold.str();
    record(std::move(s));
  }

  {
    bool ok = true;
    const std::int64_t orbit = orbit_dimension(m, j);
    std::vector<Rational> points = samples;
    for (const auto& instant : degeneracy_instants_to_level(m, j, 6)) points.push_back(instant.r_sq);
    for (const auto& r2 : points) {
      const TorusParams params = TorusParams::make(m, j, r2);
      const IndexReport index = morse_index(params);
      const Classification verdict = classify(params);
      const bool rigid = verdict.verdict == Verdict::LocallyRigid;
      ok = ok && index.strong_index == index.weak_index + 1;
      ok = ok && (rigid ? index.nullity == orbit : index.nullity == orbit + verdict.jump);
      ok = ok && index.degenerate == !rigid;
    }
    Json n = check("nullity_matches_orbit_dimension", ok);
    n["orbit_dimension"] = orbit;
    record(std::move(n));
  }

  if (m == 2 && j == 1) {
    const std::vector<Rational> fd_points =
        config.r_sq_values.empty() ? std::vector<Rational>{Rational(1, 4), Rational(1, 2), Rational(3, 4)}
                                   : config.r_sq_values;
    bool lattice_ok = true;
    for (const auto& r2 : fd_points) {
      const auto exact = jacobi_eigenvalues_below(TorusParams::make(2, 1, r2), Rational(10));
      const auto lattice = fd::lattice_oracle(r2, Rational(10));
      lattice_ok = lattice_ok && exact.entries.size() == lattice.size();
      for (std::size_t e = 0; lattice_ok && e < lattice.size(); ++e) {
        lattice_ok = exact.entries[e].value == lattice[e].value &&
                     exact.entries[e].multiplicity == lattice[e].multiplicity;
      }
    }
    record(check("lattice_oracle_agreement", lattice_ok));

    for (const auto& r2 : fd_points) {
      Json c;
      try {
        const fd::SpectrumComparison cmp = fd::compare(r2.to_double(), config.modes, config.grid / 2, config.grid);
        const bool ok = cmp.max_relative_error <= 1e-3 && cmp.convergence_order >= 1.8 &&
                        cmp.convergence_order <= 2.2;
        c = check("finite_difference_spectrum", ok);
        c["r2"] = r2.str();
        c["grid"] = cmp.n_fine;
        c["modes"] = config.modes;
        c["max_relative_error"] = cmp.max_relative_error;
        c["convergence_order"] = cmp.convergence_order;
        c["cluster_tolerance"] = cmp.cluster_tolerance;
        Json sizes = Json::array();
        for (const auto& cl : fd::cluster(cmp.numerical, cmp.cluster_tolerance)) sizes.push_back(cl.size);
        c["cluster_sizes"] = std::move(sizes);
      } catch (const fd::ConvergenceError& e) {
        outcome.solver_failed = true;
        c = check("finite_difference_spectrum", false);
        c["r2"] = r2.str();
        c["error"] = e.what();
        c["worst_residual"] = e.worst_residual();
      }
      record(std::move(c));
    }
  }

  outcome.report["m"] = m;
  outcome.report["j"] = j;
  outcome.report["checks"] = std::move(checks);
  outcome.report["passed"] = outcome.passed;
  return outcome;
}

}  // namespace cliff::report
