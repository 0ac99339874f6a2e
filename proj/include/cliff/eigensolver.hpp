#pragma once

// Smallest eigenvalues of a large sparse symmetric matrix.
//
// Block Lanczos with full reorthogonalization, run on a Chebyshev-filtered
// copy of the operator so that the low end of the spectrum is amplified.
// Ritz pairs are extracted by Rayleigh-Ritz against the unfiltered matrix and
// accepted only when every requested pair satisfies |A v - theta v| <= tol |v|.
// Unconverged pairs trigger an explicit restart from the current Ritz block.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliff/sparse.hpp"

namespace cliff::fd {

struct EigenSolverOptions {
  double tolerance = 1e-8;
  int max_restarts = 200;
  int filter_degree = 80;
  /// Krylov blocks generated per restart cycle beyond the starting block.
  int block_steps = 2;
  /// Extra block columns beyond k; covers clusters straddling the k-th value.
  int guard_vectors = 7;
  std::uint64_t seed = 0x5eed;
};

struct EigenSolveResult {
  std::vector<double> values;     // ascending
  std::vector<double> residuals;  // |A v - theta v| for unit v
  int restarts = 0;
  std::int64_t matvecs = 0;  // single-vector products
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double worst_residual, int restarts)
      : std::runtime_error(what), worst_residual_(worst_residual), restarts_(restarts) {}
  [[nodiscard]] double worst_residual() const { return worst_residual_; }
  [[nodiscard]] int restarts() const { return restarts_; }

 private:
  double worst_residual_;
  int restarts_;
};

/// Throws std::invalid_argument for k outside [1, dimension) and
/// ConvergenceError when the restart budget runs out.
EigenSolveResult lanczos_smallest(const SparseSymmetric& op, int k, const EigenSolverOptions& options = {});

/// The k smallest eigenvalues, ascending.
std::vector<double> smallest_eigenvalues(const SparseSymmetric& op, int k);

}  // namespace cliff::fd
