#pragma once

// Exact Jacobi spectrum of the constant-mean-curvature Clifford tori
//
//   x_r : S^j x S^{m-j} -> S^{m+1},   (p, q) |-> (r p, sqrt(1 - r^2) q),
//
// together with the Morse index, nullity, degeneracy instants and the
// rigidity/bifurcation verdict derived from it.
//
// Everything here is a rational function of r^2, so all values are exact.
// The Jacobi operator is J = -Delta - V(r) with the constant potential
// V(r) = j/r^2 + (m-j)/(1-r^2); its eigenvalues are sigma_i + rho_l - V(r),
// where sigma_i and rho_l run over the Laplace spectra of the two sphere
// factors.  Sphere levels are 1-based: sigma_1 = rho_1 = 0.

#include <cstdint>
#include <utility>
#include <vector>

#include "cliff/rational.hpp"

namespace cliff {

/// Parameters (m, j, r^2) of the Clifford torus S^j(r) x S^{m-j}(sqrt(1-r^2)).
struct TorusParams {
  int m = 2;
  int j = 1;
  Rational r_sq{1, 2};

  /// Validated construction; throws std::invalid_argument unless
  /// 1 <= j < m and 0 < r_sq < 1.
  static TorusParams make(int m, int j, Rational r_sq);

  /// Parameters of the same torus with the two factors swapped:
  /// (m, m-j, 1-r^2).
  [[nodiscard]] TorusParams swapped() const;
};

void validate(const TorusParams& params);
void validate_dimensions(int m, int j);

struct SphereEigen {
  int level = 1;
  Rational value;
  std::int64_t multiplicity = 1;
};

struct JacobiEigen {
  Rational value;
  std::int64_t multiplicity = 0;
  /// Level pairs (i, l) with sigma_i + rho_l - V == value, ascending.
  std::vector<std::pair<int, int>> contributors;
};

struct JacobiSpectrum {
  TorusParams params;
  Rational threshold;
  /// Every eigenvalue <= threshold, strictly ascending, no duplicates.
  std::vector<JacobiEigen> entries;

  [[nodiscard]] std::int64_t total_multiplicity() const;
};

struct IndexReport {
  std::int64_t strong_index = 0;
  std::int64_t weak_index = 0;
  std::int64_t nullity = 0;
  bool degenerate = false;

  friend bool operator==(const IndexReport&, const IndexReport&) = default;
};

enum class InstantKind {
  RType,  // r_i: sigma_i + rho_1 crosses V, the index grows through it
  SType,  // s_l: sigma_1 + rho_l crosses V, the index drops through it
};

struct DegeneracyInstant {
  InstantKind kind = InstantKind::RType;
  int level = 3;
  Rational r_sq;
  std::int64_t jump = 0;

  friend bool operator==(const DegeneracyInstant&, const DegeneracyInstant&) = default;
};

enum class Verdict { LocallyRigid, BifurcationInstant };

struct Classification {
  Verdict verdict = Verdict::LocallyRigid;
  std::int64_t jump = 0;  // nonzero only for BifurcationInstant

  friend bool operator==(const Classification&, const Classification&) = default;
};

// ---------------------------------------------------------------------------
// Sequences and sphere spectra

/// (i-2)(j+i-1).  Throws std::domain_error for i < 3 or j < 1.
std::int64_t beta(int i, int j);
/// (l-2)(m-j+l-1).  Throws std::domain_error for l < 3 or j outside [1, m).
std::int64_t gamma(int l, int j, int m);

/// Binomial coefficient C(n, k); zero when k < 0 or k > n.  Throws
/// std::overflow_error if the result does not fit in 63 bits.
std::int64_t binomial(std::int64_t n, std::int64_t k);

/// level-th Laplace eigenvalue (1-based) of the round n-sphere with squared
/// radius radius_sq: (level-1)(n+level-2)/radius_sq.
Rational sphere_eigenvalue(int n, int level, const Rational& radius_sq);
/// Dimension of the level-th eigenspace on S^n (spherical harmonics of
/// degree level-1).
std::int64_t sphere_multiplicity(int n, int level);
SphereEigen sphere_eigen(int n, int level, const Rational& radius_sq);

/// V(r) = j/r^2 + (m-j)/(1-r^2).
Rational potential(const TorusParams& params);

// ---------------------------------------------------------------------------
// Spectrum and indices

/// All distinct Jacobi eigenvalues <= threshold with aggregated multiplicity.
JacobiSpectrum jacobi_eigenvalues_below(const TorusParams& params, const Rational& threshold);

IndexReport morse_index(const TorusParams& params);

/// (j+1)(m-j+1) = m + 1 + j(m-j): the nullity at nondegenerate radii.
std::int64_t orbit_dimension(int m, int j);

// ---------------------------------------------------------------------------
// Degeneracy instants

/// r_i^2 = beta_i / (m - j + beta_i).
Rational r_instant_sq(int i, int m, int j);
/// s_l^2 = j / (j + gamma_l).
Rational s_instant_sq(int l, int m, int j);

/// Every instant with r_sq_min <= r^2 <= r_sq_max, sorted ascending in r^2.
/// Requires 0 < r_sq_min <= r_sq_max < 1.
std::vector<DegeneracyInstant> degeneracy_instants(int m, int j, const Rational& r_sq_min,
                                                   const Rational& r_sq_max);
/// Every r_i and s_l with 3 <= i, l <= max_level, sorted ascending in r^2.
std::vector<DegeneracyInstant> degeneracy_instants_to_level(int m, int j, int max_level);

/// The instant at exactly params.r_sq, if any.
std::vector<DegeneracyInstant> instants_at(const TorusParams& params);

/// theta_l = (r^2 (j + gamma_l) - j) / (r^2 (1 - r^2)); equals sigma_1 + rho_l - V.
Rational theta(int l, const TorusParams& params);
/// kappa_i = (beta_i - r^2 (m - j + beta_i)) / (r^2 (1 - r^2)); equals sigma_i + rho_1 - V.
Rational kappa(int i, const TorusParams& params);

Classification classify(const TorusParams& params);

}  // namespace cliff
