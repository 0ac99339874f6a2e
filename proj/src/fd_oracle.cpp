#include "cliff/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "cliff/spectra.hpp"

namespace cliff::fd {

double SparseSymmetric::asymmetry() const {
  std::map<std::pair<std::int64_t, std::int64_t>, double> summed;
  for (const auto& t : entries) summed[{t.row, t.col}] += t.value;
  double worst = 0.0;
  for (const auto& [key, value] : summed) {
    auto mirror = summed.find({key.second, key.first});
    const double other = mirror == summed.end() ? 0.0 : mirror->second;
    worst = std::max(worst, std::abs(value - other));
  }
  return worst;
}

std::vector<double> SparseSymmetric::apply(const std::vector<double>& x) const {
  if (static_cast<std::int64_t>(x.size()) != dimension) throw std::invalid_argument("dimension mismatch");
  std::vector<double> y(x.size(), 0.0);
  for (const auto& t : entries) y[t.row] += t.value * x[t.col];
  return y;
}

double FlatTorusGrid::spacing() const { return 2.0 * std::numbers::pi / n; }

void FlatTorusGrid::validate() const {
  if (n < 8) throw std::invalid_argument("flat torus grid needs n >= 8");
  if (!(r_sq > 0.0 && r_sq < 1.0)) throw std::invalid_argument("flat torus grid needs 0 < r^2 < 1");
}

SparseSymmetric assemble(const FlatTorusGrid& grid) {
  grid.validate();
  const int n = grid.n;
  const double h2 = grid.spacing() * grid.spacing();
  const double wx = 1.0 / (grid.r_sq * h2);
  const double wy = 1.0 / ((1.0 - grid.r_sq) * h2);

  SparseSymmetric op;
  op.dimension = static_cast<std::int64_t>(n) * n;
  op.entries.reserve(static_cast<std::size_t>(op.dimension) * 5);
  const auto index = [n](int a, int b) {
    return static_cast<std::int64_t>((a + n) % n) * n + (b + n) % n;
  };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const std::int64_t row = index(a, b);
      op.entries.push_back({row, row, 2.0 * wx + 2.0 * wy});
      op.entries.push_back({row, index(a - 1, b), -wx});
      op.entries.push_back({row, index(a + 1, b), -wx});
      op.entries.push_back({row, index(a, b - 1), -wy});
      op.entries.push_back({row, index(a, b + 1), -wy});
    }
  }
  return op;
}

std::vector<LatticeLevel> lattice_oracle(const Rational& r_sq, const Rational& threshold) {
  const Rational one(1);
  if (r_sq.sign() <= 0 || r_sq >= one) throw std::invalid_argument("lattice oracle needs 0 < r^2 < 1");
  const Rational co_sq = one - r_sq;
  const Rational shift = one / r_sq + one / co_sq;

  std::map<Rational, std::int64_t> levels;
  for (long p = 0;; ++p) {
    const Rational first = Rational(p * p) / r_sq - shift;
    if (first > threshold) break;
    for (long q = 0;; ++q) {
      const Rational value = first + Rational(q * q) / co_sq;
      if (value > threshold) break;
      levels[value] += (p == 0 ? 1 : 2) * (q == 0 ? 1 : 2);
    }
  }
  std::vector<LatticeLevel> out;
  out.reserve(levels.size());
  for (auto& [value, mult] : levels) out.push_back({value, mult});
  return out;
}

std::vector<LatticeLevel> lattice_oracle(double r_sq, double threshold) {
  return lattice_oracle(Rational::from_double(r_sq), Rational::from_double(threshold));
}

double relative_error(double numerical, double analytic, double potential) {
  const double diff = std::abs(numerical - analytic);
  return analytic == 0.0 ? diff / std::abs(potential) : diff / std::abs(analytic);
}

namespace {

std::vector<double> analytic_smallest(const TorusParams& params, int k) {
  Rational threshold(1);
  for (;;) {
    const JacobiSpectrum spectrum = jacobi_eigenvalues_below(params, threshold);
    if (spectrum.total_multiplicity() >= k) {
      std::vector<double> out;
      for (const auto& entry : spectrum.entries) {
        for (std::int64_t c = 0; c < entry.multiplicity && static_cast<int>(out.size()) < k; ++c) {
          out.push_back(entry.value.to_double());
        }
      }
      return out;
    }
    threshold *= Rational(2);
  }
}

std::vector<double> discrete_jacobi(double r_sq, int n, int k, double potential,
                                    const EigenSolverOptions& options) {
  const SparseSymmetric op = assemble(FlatTorusGrid{n, r_sq});
  std::vector<double> values = lanczos_smallest(op, k, options).values;
  for (double& v : values) v -= potential;
  return values;
}

double max_abs_error(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

SpectrumComparison compare(double r_sq, int k, int n_coarse, int n_fine, const EigenSolverOptions& options) {
  FlatTorusGrid{n_coarse, r_sq}.validate();
  if (n_fine < 2 * n_coarse) throw std::invalid_argument("compare needs n_fine >= 2 n_coarse");
  if (k < 1) throw std::invalid_argument("compare needs k >= 1");

  const TorusParams params = TorusParams::make(2, 1, Rational::from_double(r_sq));
  const double v = potential(params).to_double();

  SpectrumComparison out;
  out.n_coarse = n_coarse;
  out.n_fine = n_fine;
  out.analytic = analytic_smallest(params, k);
  out.numerical_coarse = discrete_jacobi(r_sq, n_coarse, k, v, options);
  out.numerical = discrete_jacobi(r_sq, n_fine, k, v, options);

  for (int i = 0; i < k; ++i) {
    out.max_relative_error =
        std::max(out.max_relative_error, relative_error(out.numerical[i], out.analytic[i], v));
  }
  const double ratio = static_cast<double>(n_fine) / n_coarse;
  const double err_coarse = max_abs_error(out.numerical_coarse, out.analytic);
  const double err_fine = max_abs_error(out.numerical, out.analytic);
  out.convergence_order = std::log(err_coarse / err_fine) / std::log(ratio);
  // Second-order stencil: e_coarse ~ ratio^2 e_fine.
  out.estimated_error = max_abs_error(out.numerical_coarse, out.numerical) / (ratio * ratio - 1.0);
  out.cluster_tolerance = 10.0 * out.estimated_error;
  return out;
}

std::vector<Cluster> cluster(const std::vector<double>& ascending, double gap) {
  std::vector<Cluster> out;
  std::vector<double> sums;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    if (i == 0 || ascending[i] - ascending[i - 1] > gap) {
      out.push_back({0.0, 0});
      sums.push_back(0.0);
    }
    out.back().size += 1;
    sums.back() += ascending[i];
  }
  for (std::size_t c = 0; c < out.size(); ++c) out[c].center = sums[c] / out[c].size;
  return out;
}

}  // namespace cliff::fd
