#include "cliff/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace cliff {

namespace {

// Instants are enumerated one by one; a window hugging 0 or 1 would ask for
// an unbounded number of them.
constexpr std::int64_t kMaxInstantLevel = 10'000'000;

Rational rat(std::int64_t v) { return Rational(static_cast<long>(v)); }

// Smallest level k >= 3 with (k-2)(k+shift) >= bound, found from the root of
// the quadratic and corrected exactly.
int first_level_reaching(const Rational& bound, int shift) {
  const auto value = [shift](std::int64_t k) { return (k - 2) * (k + shift); };
  const double b = std::max(0.0, bound.to_double());
  const double c = static_cast<double>(shift);
  // k^2 + (shift-2) k - 2 shift - b = 0
  const double disc = (c - 2) * (c - 2) + 4.0 * (2.0 * c + b);
  double estimate = (-(c - 2) + std::sqrt(disc)) / 2.0;
  if (!(estimate < static_cast<double>(kMaxInstantLevel))) {
    throw std::length_error("degeneracy window reaches too close to r^2 = 0 or 1");
  }
  std::int64_t k = std::max<std::int64_t>(3, static_cast<std::int64_t>(estimate) - 2);
  while (k > 3 && rat(value(k - 1)) >= bound) --k;
  while (rat(value(k)) < bound) ++k;
  return static_cast<int>(k);
}

// Solves (k-2)(k+shift) == target for an integer k >= 3.
std::optional<int> level_hitting(const Rational& target, int shift) {
  if (!target.is_integer() || target.sign() <= 0) return std::nullopt;
  const mpz_class t = target.raw().get_num();
  // k = (2 - shift + sqrt((shift+2)^2 + 4 t)) / 2
  const mpz_class disc = mpz_class((shift + 2) * (shift + 2)) + 4 * t;
  if (mpz_perfect_square_p(disc.get_mpz_t()) == 0) return std::nullopt;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
  mpz_class twice_k = 2 - shift + root;
  if (mpz_odd_p(twice_k.get_mpz_t()) != 0) return std::nullopt;
  mpz_class k = twice_k / 2;
  if (k < 3 || !k.fits_sint_p()) return std::nullopt;
  return static_cast<int>(k.get_si());
}

}  // namespace

// ---------------------------------------------------------------------------

void validate_dimensions(int m, int j) {
  if (j < 1 || j >= m) {
    throw std::invalid_argument("torus dimensions need 1 <= j < m, got m=" + std::to_string(m) +
                                ", j=" + std::to_string(j));
  }
}

void validate(const TorusParams& params) {
  validate_dimensions(params.m, params.j);
  if (params.r_sq.sign() <= 0 || params.r_sq >= Rational(1)) {
    throw std::invalid_argument("r^2 must lie in (0, 1), got " + params.r_sq.str());
  }
}

TorusParams TorusParams::make(int m, int j, Rational r_sq) {
  TorusParams params{m, j, std::move(r_sq)};
  validate(params);
  return params;
}

TorusParams TorusParams::swapped() const { return TorusParams{m, m - j, Rational(1) - r_sq}; }

std::int64_t JacobiSpectrum::total_multiplicity() const {
  std::int64_t total = 0;
  for (const auto& e : entries) total += e.multiplicity;
  return total;
}

// ---------------------------------------------------------------------------

std::int64_t beta(int i, int j) {
  if (i < 3) throw std::domain_error("beta_i needs i >= 3, got " + std::to_string(i));
  if (j < 1) throw std::domain_error("beta_i needs j >= 1, got " + std::to_string(j));
  return static_cast<std::int64_t>(i - 2) * (j + i - 1);
}

std::int64_t gamma(int l, int j, int m) {
  if (l < 3) throw std::domain_error("gamma_l needs l >= 3, got " + std::to_string(l));
  if (j < 1 || j >= m) throw std::domain_error("gamma_l needs 1 <= j < m");
  return static_cast<std::int64_t>(l - 2) * (m - j + l - 1);
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 result = 1;
  for (std::int64_t t = 1; t <= k; ++t) {
    // result * (n - k + t) / t stays integral at every step
    result = result * (n - k + t) / t;
    if (result > std::numeric_limits<std::int64_t>::max()) {
      throw std::overflow_error("binomial coefficient overflows 63 bits");
    }
  }
  return static_cast<std::int64_t>(result);
}

Rational sphere_eigenvalue(int n, int level, const Rational& radius_sq) {
  if (n < 1) throw std::domain_error("sphere dimension must be >= 1");
  if (level < 1) throw std::domain_error("sphere level must be >= 1");
  if (radius_sq.sign() <= 0) throw std::domain_error("sphere radius^2 must be positive");
  const std::int64_t degree = level - 1;
  return rat(degree * (n + degree - 1)) / radius_sq;
}

std::int64_t sphere_multiplicity(int n, int level) {
  if (n < 1) throw std::domain_error("sphere dimension must be >= 1");
  if (level < 1) throw std::domain_error("sphere level must be >= 1");
  if (level == 1) return 1;
  if (level == 2) return n + 1;
  return binomial(n + level - 1, level - 1) - binomial(n + level - 3, level - 3);
}

SphereEigen sphere_eigen(int n, int level, const Rational& radius_sq) {
  return SphereEigen{level, sphere_eigenvalue(n, level, radius_sq), sphere_multiplicity(n, level)};
}

Rational potential(const TorusParams& params) {
  validate(params);
  const Rational one(1);
  return Rational(params.j) / params.r_sq + Rational(params.m - params.j) / (one - params.r_sq);
}

// ---------------------------------------------------------------------------

JacobiSpectrum jacobi_eigenvalues_below(const TorusParams& params, const Rational& threshold) {
  validate(params);
  const int first_dim = params.j;
  const int second_dim = params.m - params.j;
  const Rational first_sq = params.r_sq;
  const Rational second_sq = Rational(1) - params.r_sq;
  const Rational shifted = threshold + potential(params);

  // sigma_i and rho_l are strictly increasing, so both loops stop at the
  // first level that overshoots.
  std::map<Rational, JacobiEigen> levels;
  for (int i = 1;; ++i) {
    const Rational sigma = sphere_eigenvalue(first_dim, i, first_sq);
    if (sigma > shifted) break;
    const std::int64_t sigma_mult = sphere_multiplicity(first_dim, i);
    for (int l = 1;; ++l) {
      const Rational total = sigma + sphere_eigenvalue(second_dim, l, second_sq);
      if (total > shifted) break;
      auto& entry = levels[total];
      entry.multiplicity += sigma_mult * sphere_multiplicity(second_dim, l);
      entry.contributors.emplace_back(i, l);
    }
  }

  JacobiSpectrum spectrum{params, threshold, {}};
  spectrum.entries.reserve(levels.size());
  const Rational shift = potential(params);
  for (auto& [sum, entry] : levels) {
    entry.value = sum - shift;
    std::sort(entry.contributors.begin(), entry.contributors.end());
    spectrum.entries.push_back(std::move(entry));
  }
  return spectrum;
}

std::int64_t orbit_dimension(int m, int j) {
  validate_dimensions(m, j);
  return static_cast<std::int64_t>(j + 1) * (m - j + 1);
}

IndexReport morse_index(const TorusParams& params) {
  const JacobiSpectrum spectrum = jacobi_eigenvalues_below(params, Rational(0));
  IndexReport report;
  for (const auto& entry : spectrum.entries) {
    if (entry.value.sign() < 0) {
      report.strong_index += entry.multiplicity;
    } else {
      report.nullity += entry.multiplicity;
    }
  }
  // Constant functions carry the only eigenvalue whose eigenfunctions do not
  // have zero mean.
  report.weak_index = report.strong_index - 1;
  report.degenerate = report.nullity > orbit_dimension(params.m, params.j);
  return report;
}

// ---------------------------------------------------------------------------

Rational r_instant_sq(int i, int m, int j) {
  validate_dimensions(m, j);
  const Rational b = rat(beta(i, j));
  return b / (Rational(m - j) + b);
}

Rational s_instant_sq(int l, int m, int j) {
  validate_dimensions(m, j);
  return Rational(j) / (Rational(j) + rat(gamma(l, j, m)));
}

namespace {

DegeneracyInstant make_r_instant(int i, int m, int j) {
  return {InstantKind::RType, i, r_instant_sq(i, m, j), sphere_multiplicity(j, i)};
}

DegeneracyInstant make_s_instant(int l, int m, int j) {
  return {InstantKind::SType, l, s_instant_sq(l, m, j), sphere_multiplicity(m - j, l)};
}

void sort_by_radius(std::vector<DegeneracyInstant>& instants) {
  std::sort(instants.begin(), instants.end(),
            [](const DegeneracyInstant& a, const DegeneracyInstant& b) { return a.r_sq < b.r_sq; });
}

}  // namespace

std::vector<DegeneracyInstant> degeneracy_instants(int m, int j, const Rational& r_sq_min,
                                                   const Rational& r_sq_max) {
  validate_dimensions(m, j);
  const Rational one(1);
  if (r_sq_min.sign() <= 0 || r_sq_max >= one || r_sq_max < r_sq_min) {
    throw std::invalid_argument("instant window needs 0 < r_sq_min <= r_sq_max < 1");
  }
  std::vector<DegeneracyInstant> out;

  // r_i^2 in [lo, hi]  <=>  beta_i in [lo (m-j)/(1-lo), hi (m-j)/(1-hi)]
  const Rational codim(m - j);
  const Rational beta_lo = r_sq_min * codim / (one - r_sq_min);
  const Rational beta_hi = r_sq_max * codim / (one - r_sq_max);
  const int i_last = first_level_reaching(beta_hi, j - 1);
  for (int i = first_level_reaching(beta_lo, j - 1); i <= i_last; ++i) {
    if (rat(beta(i, j)) > beta_hi) break;
    out.push_back(make_r_instant(i, m, j));
  }

  // s_l^2 in [lo, hi]  <=>  gamma_l in [j (1-hi)/hi, j (1-lo)/lo]
  const Rational gamma_lo = Rational(j) * (one - r_sq_max) / r_sq_max;
  const Rational gamma_hi = Rational(j) * (one - r_sq_min) / r_sq_min;
  const int l_last = first_level_reaching(gamma_hi, m - j - 1);
  for (int l = first_level_reaching(gamma_lo, m - j - 1); l <= l_last; ++l) {
    if (rat(gamma(l, j, m)) > gamma_hi) break;
    out.push_back(make_s_instant(l, m, j));
  }

  sort_by_radius(out);
  return out;
}

std::vector<DegeneracyInstant> degeneracy_instants_to_level(int m, int j, int max_level) {
  validate_dimensions(m, j);
  if (max_level < 3) throw std::invalid_argument("max level must be >= 3");
  std::vector<DegeneracyInstant> out;
  for (int k = 3; k <= max_level; ++k) {
    out.push_back(make_r_instant(k, m, j));
    out.push_back(make_s_instant(k, m, j));
  }
  sort_by_radius(out);
  return out;
}

std::vector<DegeneracyInstant> instants_at(const TorusParams& params) {
  validate(params);
  const Rational one(1);
  const int m = params.m;
  const int j = params.j;
  std::vector<DegeneracyInstant> out;
  // The s-instants lie in (0, j/(m+2)] and the r-instants in [(j+2)/(m+2), 1),
  // so at most one of the two branches can fire.
  if (auto l = level_hitting(Rational(j) * (one - params.r_sq) / params.r_sq, m - j - 1)) {
    out.push_back(make_s_instant(*l, m, j));
  }
  if (auto i = level_hitting(params.r_sq * Rational(m - j) / (one - params.r_sq), j - 1)) {
    out.push_back(make_r_instant(*i, m, j));
  }
  return out;
}

Rational theta(int l, const TorusParams& params) {
  validate(params);
  const Rational& r2 = params.r_sq;
  const Rational j(params.j);
  return (r2 * (j + rat(gamma(l, params.j, params.m))) - j) / (r2 * (Rational(1) - r2));
}

Rational kappa(int i, const TorusParams& params) {
  validate(params);
  const Rational& r2 = params.r_sq;
  const Rational b = rat(beta(i, params.j));
  return (b - r2 * (Rational(params.m - params.j) + b)) / (r2 * (Rational(1) - r2));
}

Classification classify(const TorusParams& params) {
  Classification verdict;
  for (const auto& instant : instants_at(params)) {
    verdict.verdict = Verdict::BifurcationInstant;
    verdict.jump += instant.jump;
  }
  return verdict;
}

}  // namespace cliff
