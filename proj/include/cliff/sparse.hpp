#pragma once

#include <cstdint>
#include <vector>

namespace cliff::fd {

struct Triplet {
  std::int64_t row = 0;
  std::int64_t col = 0;
  double value = 0.0;
};

/// Square symmetric matrix in coordinate format.  Duplicate coordinates are
/// summed when the matrix is used.
struct SparseSymmetric {
  std::int64_t dimension = 0;
  std::vector<Triplet> entries;

  /// Largest |A(r,c) - A(c,r)| over the stored pattern (duplicates summed).
  [[nodiscard]] double asymmetry() const;
  /// y = A x.
  [[nodiscard]] std::vector<double> apply(const std::vector<double>& x) const;
};

}  // namespace cliff::fd
