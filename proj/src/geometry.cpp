#include "cliff/geometry.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cliff::geometry {

namespace {

double norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

void check_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("radius must lie in (0, 1)");
}

}  // namespace

EmbeddedPoint embed(const TorusParams& params, std::span<const double> p, std::span<const double> q) {
  validate(params);
  if (p.size() != static_cast<std::size_t>(params.j + 1) ||
      q.size() != static_cast<std::size_t>(params.m - params.j + 1)) {
    throw std::invalid_argument("embed: p must have j+1 and q must have m-j+1 coordinates");
  }
  if (std::abs(norm(p) - 1.0) > kUnitTolerance || std::abs(norm(q) - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("embed: p and q must be unit vectors");
  }
  const double r2 = params.r_sq.to_double();
  const double a = std::sqrt(r2);
  const double b = std::sqrt(1.0 - r2);
  EmbeddedPoint point;
  point.coordinates.reserve(p.size() + q.size());
  for (double x : p) point.coordinates.push_back(a * x);
  for (double x : q) point.coordinates.push_back(b * x);
  return point;
}

CurvatureData curvature_data(const TorusParams& params) {
  validate(params);
  const int m = params.m;
  const int j = params.j;
  const double r2 = params.r_sq.to_double();
  const double r = std::sqrt(r2);
  const double c = std::sqrt(1.0 - r2);

  CurvatureData data;
  data.first = {c / r, j};
  data.second = {-r / c, m - j};
  data.mean_curvature = (m * r2 - j) / (m * r * c);
  data.lagrange_multiplier = (m * r2 - j) / (r * c);
  data.second_fundamental_norm_sq = j * (1.0 - r2) / r2 + (m - j) * r2 / (1.0 - r2);
  return data;
}

double mean_curvature(int m, int j, double r) {
  validate_dimensions(m, j);
  check_radius(r);
  return (m * r * r - j) / (m * r * std::sqrt(1.0 - r * r));
}

double lagrange_multiplier(int m, int j, double r) {
  validate_dimensions(m, j);
  check_radius(r);
  return (m * r * r - j) / (r * std::sqrt(1.0 - r * r));
}

double lambda_derivative(int m, int j, double r) {
  validate_dimensions(m, j);
  check_radius(r);
  const double r2 = r * r;
  return ((m - 2 * j) * r2 + j) / (r2 * std::pow(1.0 - r2, 1.5));
}

double lambda_derivative(const TorusParams& params) {
  validate(params);
  return lambda_derivative(params.m, params.j, std::sqrt(params.r_sq.to_double()));
}

OrbitData orbit_data(int m, int j) {
  return {static_cast<int>(orbit_dimension(m, j)), "SO(j+1)xSO(m-j+1)"};
}

}  // namespace cliff::geometry
