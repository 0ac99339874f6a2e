#pragma once

// Independent numerical check of the analytic Jacobi spectrum for the flat
// Clifford torus S^1(r) x S^1(sqrt(1-r^2)) in S^3 (m = 2, j = 1).
//
// Two routes, neither of which touches the sphere-level formulas:
//  * a periodic 5-point finite-difference Laplacian solved with the Lanczos
//    eigensolver, and
//  * a direct enumeration of the lattice p^2/r^2 + q^2/(1-r^2) - V.

#include <cstdint>
#include <vector>

#include "cliff/eigensolver.hpp"
#include "cliff/rational.hpp"
#include "cliff/sparse.hpp"

namespace cliff::fd {

struct FlatTorusGrid {
  int n = 64;          // points per axis, periodic
  double r_sq = 0.5;   // squared radius of the first circle

  [[nodiscard]] double spacing() const;
  /// Throws std::invalid_argument unless n >= 8 and 0 < r_sq < 1.
  void validate() const;
};

/// -Laplacian of the flat product metric, periodic 5-point stencil with axis
/// weights 1/(r^2 h^2) and 1/((1-r^2) h^2).  Unknown (a, b) sits at a*n + b.
SparseSymmetric assemble(const FlatTorusGrid& grid);

struct LatticeLevel {
  Rational value;
  std::int64_t multiplicity = 0;

  friend bool operator==(const LatticeLevel&, const LatticeLevel&) = default;
};

/// Distinct values p^2/r^2 + q^2/(1-r^2) - V <= threshold over integer (p, q),
/// with V = 1/r^2 + 1/(1-r^2).  Ascending.
std::vector<LatticeLevel> lattice_oracle(const Rational& r_sq, const Rational& threshold);
/// Same, with the doubles converted exactly to rationals.
std::vector<LatticeLevel> lattice_oracle(double r_sq, double threshold);

struct SpectrumComparison {
  std::vector<double> analytic;
  std::vector<double> numerical;         // fine grid
  std::vector<double> numerical_coarse;  // coarse grid
  double max_relative_error = 0.0;       // fine grid
  double convergence_order = 0.0;
  /// Richardson estimate of the fine-grid discretization error.
  double estimated_error = 0.0;
  /// Cluster gap used for multiplicity counting: 10 x estimated_error.
  double cluster_tolerance = 0.0;
  int n_coarse = 0;
  int n_fine = 0;
};

/// Relative error with zero targets measured against the potential instead:
/// |num - ana| / |ana|, or |num - ana| / V when ana == 0.
double relative_error(double numerical, double analytic, double potential);

/// Compares the k smallest Jacobi eigenvalues (discrete Laplacian minus V)
/// on two grids with the exact spectrum.  Requires n_fine >= 2 n_coarse.
/// Propagates ConvergenceError from the eigensolver.
SpectrumComparison compare(double r_sq, int k, int n_coarse, int n_fine,
                           const EigenSolverOptions& options = {});

struct Cluster {
  double center = 0.0;
  int size = 0;
};

/// Groups ascending values whose consecutive gaps are <= gap.
std::vector<Cluster> cluster(const std::vector<double>& ascending, double gap);

}  // namespace cliff::fd
