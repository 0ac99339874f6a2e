#include "cliff/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cliff::fd {

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Csr = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

Csr to_csr(const SparseSymmetric& op) {
  std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
  triplets.reserve(op.entries.size());
  for (const auto& t : op.entries) {
    if (t.row < 0 || t.col < 0 || t.row >= op.dimension || t.col >= op.dimension) {
      throw std::invalid_argument("sparse entry outside the matrix");
    }
    triplets.emplace_back(t.row, t.col, t.value);
  }
  Csr a(op.dimension, op.dimension);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

struct SpectrumBounds {
  double lower = 0.0;
  double upper = 0.0;
};

SpectrumBounds gershgorin(const Csr& a) {
  SpectrumBounds bounds{std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity()};
  for (std::int64_t row = 0; row < a.outerSize(); ++row) {
    double center = 0.0;
    double radius = 0.0;
    for (Csr::InnerIterator it(a, row); it; ++it) {
      if (it.col() == row) {
        center += it.value();
      } else {
        radius += std::abs(it.value());
      }
    }
    bounds.lower = std::min(bounds.lower, center - radius);
    bounds.upper = std::max(bounds.upper, center + radius);
  }
  return bounds;
}

using RowBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Operator {
 public:
  explicit Operator(const SparseSymmetric& op) : a_(to_csr(op)) {}

  Matrix apply(const Matrix& x) {
    matvecs_ += x.cols();
    return a_ * x;
  }

  // out = alpha (A x - shift x) - beta prev, one fused pass over the rows.
  // Blocks are row-major so each stencil entry reads one contiguous row.
  void shifted_step(const RowBlock& x, const RowBlock& prev, double shift, double alpha, double beta,
                    RowBlock& out) {
    matvecs_ += x.cols();
    switch (x.cols()) {
      case 8: return fixed_step<8>(x, prev, shift, alpha, beta, out);
      case 12: return fixed_step<12>(x, prev, shift, alpha, beta, out);
      case 16: return fixed_step<16>(x, prev, shift, alpha, beta, out);
      case 20: return fixed_step<20>(x, prev, shift, alpha, beta, out);
      case 24: return fixed_step<24>(x, prev, shift, alpha, beta, out);
      case 28: return fixed_step<28>(x, prev, shift, alpha, beta, out);
      case 32: return fixed_step<32>(x, prev, shift, alpha, beta, out);
      default: break;
    }
    const std::int64_t width = x.cols();
    const auto* outer = a_.outerIndexPtr();
    const auto* inner = a_.innerIndexPtr();
    const double* values = a_.valuePtr();
    for (std::int64_t row = 0; row < a_.outerSize(); ++row) {
      for (std::int64_t c = 0; c < width; ++c) {
        double acc = -shift * x(row, c);
        for (std::int64_t p = outer[row]; p < outer[row + 1]; ++p) acc += values[p] * x(inner[p], c);
        out(row, c) = alpha * acc - beta * prev(row, c);
      }
    }
  }

  [[nodiscard]] const Csr& matrix() const { return a_; }
  [[nodiscard]] std::int64_t matvecs() const { return matvecs_; }

 private:
  template <int W>
  void fixed_step(const RowBlock& x, const RowBlock& prev, double shift, double alpha, double beta,
                  RowBlock& out) const {
    const auto* outer = a_.outerIndexPtr();
    const auto* inner = a_.innerIndexPtr();
    const double* values = a_.valuePtr();
    const double* xd = x.data();
    const double* pd = prev.data();
    double* od = out.data();
    for (std::int64_t row = 0; row < a_.outerSize(); ++row) {
      double acc[W];
      const double* xrow = xd + row * W;
      for (int c = 0; c < W; ++c) acc[c] = -shift * xrow[c];
      for (std::int64_t p = outer[row]; p < outer[row + 1]; ++p) {
        const double v = values[p];
        const double* src = xd + inner[p] * W;
        for (int c = 0; c < W; ++c) acc[c] += v * src[c];
      }
      const double* prow = pd + row * W;
      double* dst = od + row * W;
      for (int c = 0; c < W; ++c) dst[c] = alpha * acc[c] - beta * prow[c];
    }
  }

  Csr a_;
  std::int64_t matvecs_ = 0;
};

// Scaled Chebyshev filter damping [cut, upper] and amplifying everything
// below cut; `anchor` (< cut) is mapped to magnitude ~1 to avoid overflow.
Matrix chebyshev_filter(Operator& a, const Matrix& x, int degree, double cut, double upper,
                        double anchor) {
  const double half_width = (upper - cut) / 2.0;
  const double center = (upper + cut) / 2.0;
  double sigma = half_width / (anchor - center);
  const double sigma1 = sigma;

  RowBlock prev = x;
  RowBlock cur(x.rows(), x.cols());
  RowBlock next(x.rows(), x.cols());
  a.shifted_step(prev, prev, center, sigma1 / half_width, 0.0, cur);
  for (int step = 2; step <= degree; ++step) {
    const double sigma_next = 1.0 / (2.0 / sigma1 - sigma);
    a.shifted_step(cur, prev, center, 2.0 * sigma_next / half_width, sigma * sigma_next, next);
    std::swap(prev, cur);
    std::swap(cur, next);
    sigma = sigma_next;
  }
  return cur;
}

class Basis {
 public:
  Basis(std::int64_t rows, std::int64_t capacity, std::mt19937_64& rng)
      : v_(rows, capacity), rng_(rng) {}

  [[nodiscard]] std::int64_t size() const { return used_; }
  [[nodiscard]] auto columns() const { return v_.leftCols(used_); }

  // Orthogonalizes the block against the basis (two block Gram-Schmidt
  // passes), then orthonormalizes it column by column.  Columns that
  // collapse are replaced by random directions so the basis keeps its width.
  void append(Matrix block) {
    const Vector original_norms = block.colwise().norm().transpose();
    for (int pass = 0; pass < 2 && used_ > 0; ++pass) {
      block -= columns() * (columns().transpose() * block);
    }
    const std::int64_t first_new = used_;
    for (Eigen::Index c = 0; c < block.cols(); ++c) {
      if (used_ >= v_.cols()) return;
      Vector col = block.col(c);
      for (int pass = 0; pass < 2 && used_ > first_new; ++pass) {
        const auto fresh = v_.middleCols(first_new, used_ - first_new);
        col -= fresh * (fresh.transpose() * col);
      }
      int retries = 0;
      while (!(col.norm() > 1e-10 * original_norms[c])) {
        if (++retries > 5) throw ConvergenceError("could not extend Krylov basis", 0.0, 0);
        col = random_vector();
        const double before = col.norm();
        orthogonalize(col);
        if (col.norm() > 1e-10 * before) break;
      }
      v_.col(used_++) = col / col.norm();
    }
  }

 private:
  void orthogonalize(Vector& col) const {
    for (int pass = 0; pass < 2 && used_ > 0; ++pass) {
      col -= columns() * (columns().transpose() * col);
    }
  }

  Vector random_vector() {
    std::normal_distribution<double> normal;
    Vector out(v_.rows());
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal(rng_);
    return out;
  }

  Matrix v_;
  std::int64_t used_ = 0;
  std::mt19937_64& rng_;
};

EigenSolveResult dense_fallback(const Csr& a, int k) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(Matrix(a.toDense()));
  EigenSolveResult result;
  for (int i = 0; i < k; ++i) {
    result.values.push_back(solver.eigenvalues()[i]);
    const Vector v = solver.eigenvectors().col(i);
    result.residuals.push_back((a * v - solver.eigenvalues()[i] * v).norm());
  }
  return result;
}

}  // namespace

EigenSolveResult lanczos_smallest(const SparseSymmetric& op, int k, const EigenSolverOptions& options) {
  const std::int64_t n = op.dimension;
  if (k < 1 || k >= n) throw std::invalid_argument("requested eigenvalue count must be in [1, dimension)");
  if (options.filter_degree < 1 || options.block_steps < 1) {
    throw std::invalid_argument("filter degree and block steps must be positive");
  }

  Operator a(op);
  // Multiples of 4 hit the unrolled block kernels.
  const std::int64_t padded = (k + std::max(options.guard_vectors, 1) + 3) / 4 * 4;
  const std::int64_t width = std::min<std::int64_t>(padded, n);
  if (2 * width > n) return dense_fallback(a.matrix(), k);
  const std::int64_t steps = std::min<std::int64_t>(options.block_steps, n / width - 1);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Matrix block(n, width);
  for (Eigen::Index c = 0; c < block.cols(); ++c)
    for (Eigen::Index r = 0; r < block.rows(); ++r) block(r, c) = normal(rng);

  const SpectrumBounds bounds = gershgorin(a.matrix());
  const double scale = std::max(std::abs(bounds.lower), std::abs(bounds.upper));
  bool filtered = false;
  double cut = bounds.upper;
  double anchor = bounds.lower;

  EigenSolveResult result;
  double worst = std::numeric_limits<double>::infinity();
  for (int cycle = 0; cycle <= options.max_restarts; ++cycle) {
    Basis basis(n, (steps + 1) * width, rng);
    basis.append(block);
    for (std::int64_t s = 0; s < steps; ++s) {
      const Matrix last = basis.columns().rightCols(width);
      basis.append(filtered ? chebyshev_filter(a, last, options.filter_degree, cut, bounds.upper, anchor)
                            : a.apply(last));
    }

    const Matrix v = basis.columns();
    const Matrix av = a.apply(v);
    Matrix projected = v.transpose() * av;
    projected = 0.5 * (projected + projected.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> ritz(projected);
    const Matrix z = ritz.eigenvectors().leftCols(width);
    const Vector theta = ritz.eigenvalues().head(width);
    block = v * z;
    const Matrix residual = av * z - block * theta.asDiagonal();

    result.values.assign(theta.data(), theta.data() + k);
    result.residuals.resize(k);
    worst = 0.0;
    for (int i = 0; i < k; ++i) {
      result.residuals[i] = residual.col(i).norm() / block.col(i).norm();
      worst = std::max(worst, result.residuals[i]);
    }
    result.restarts = cycle;
    result.matvecs = a.matvecs();
    if (worst <= options.tolerance) return result;

    // Damp everything above the widest retained Ritz value next cycle.
    filtered = true;
    anchor = theta[0];
    cut = theta[width - 1];
    if (bounds.upper - cut <= 1e-12 * scale) cut = 0.5 * (theta[k - 1] + bounds.upper);
    if (anchor >= cut) anchor = cut - 1e-3 * (bounds.upper - cut);
  }

  std::ostringstream msg;
  msg << "Lanczos did not converge after " << options.max_restarts << " restarts; worst residual "
      << worst << " > " << options.tolerance;
  throw ConvergenceError(msg.str(), worst, options.max_restarts);
}

std::vector<double> smallest_eigenvalues(const SparseSymmetric& op, int k) {
  return lanczos_smallest(op, k).values;
}

}  // namespace cliff::fd
