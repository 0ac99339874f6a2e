#pragma once

// Extrinsic geometry of the Clifford embedding
//   (p, q) |-> (r p, sqrt(1 - r^2) q) in S^{m+1} subset R^{m+2}.
// Values are real; they cross-check the exact spectral potential.

#include <span>
#include <string>
#include <vector>

#include "cliff/spectra.hpp"

namespace cliff::geometry {

inline constexpr double kUnitTolerance = 1e-12;

struct EmbeddedPoint {
  std::vector<double> coordinates;  // m + 2 entries, unit norm
};

struct PrincipalCurvature {
  double value = 0.0;
  int count = 0;
};

struct CurvatureData {
  PrincipalCurvature first;   // tangent to S^j(r)
  PrincipalCurvature second;  // tangent to S^{m-j}(sqrt(1-r^2))
  double mean_curvature = 0.0;
  double second_fundamental_norm_sq = 0.0;
  double lagrange_multiplier = 0.0;
};

struct OrbitData {
  int orbit_dimension = 0;
  std::string stabilizer_description;
};

/// Throws std::invalid_argument unless |p| = |q| = 1 (within kUnitTolerance)
/// and the dimensions are j+1 and m-j+1.
EmbeddedPoint embed(const TorusParams& params, std::span<const double> p, std::span<const double> q);

CurvatureData curvature_data(const TorusParams& params);

// Real-radius forms, used for sampling and finite differences.  r in (0, 1).
double mean_curvature(int m, int j, double r);
double lagrange_multiplier(int m, int j, double r);
double lambda_derivative(int m, int j, double r);

/// d lambda / dr = ((m-2j) r^2 + j) / (r^2 (1-r^2)^{3/2}); positive on (0, 1).
double lambda_derivative(const TorusParams& params);

OrbitData orbit_data(int m, int j);

}  // namespace cliff::geometry
