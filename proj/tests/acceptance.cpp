// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cliff/fd_oracle.hpp"
#include "cliff/geometry.hpp"
#include "cliff/spectra.hpp"

using namespace cliff;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

void expect(Outcome& o, bool condition, const std::string& what) {
  if (condition || !o.passed) {
    o.passed = o.passed && condition;
    return;
  }
  o.passed = false;
  o.detail = what;
}

void for_each_dims(const std::function<void(int, int)>& body) {
  for (int m = 2; m <= 6; ++m)
    for (int j = 1; j < m; ++j) body(m, j);
}

Rational q(long n, long d = 1) { return Rational(n, d); }

Rational random_in(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  std::uniform_int_distribution<long> num(1, 99990);
  return lo + (hi - lo) * Rational(num(rng), 99991);
}

// Level k with k-th harmonic eigenvalue ratio hitting the target, found by
// scanning: (k-2)(n+k-1) == target.
std::optional<int> level_hitting(int n, const Rational& target) {
  for (int k = 3;; ++k) {
    const Rational value((k - 2L) * (n + k - 1L));
    if (value == target) return k;
    if (value > target) return std::nullopt;
  }
}

// Jump at r^2 computed from scratch: the nullity excess over the orbit.
std::int64_t oracle_jump(int m, int j, const Rational& r_sq) {
  const Rational one(1);
  std::int64_t jump = 0;
  const auto harmonic = [](int n, int level) {
    // dim of degree-(level-1) harmonics on S^n: C(n+d, n) - C(n+d-2, n)
    const auto choose = [](long a, long b) {
      if (b < 0 || a < b) return 0.0L;
      long double c = 1;
      for (long t = 1; t <= b; ++t) c = c * (a - b + t) / t;
      return c;
    };
    const long d = level - 1;
    return static_cast<std::int64_t>(std::llround(choose(n + d, n) - choose(n + d - 2, n)));
  };
  if (auto i = level_hitting(j, Rational(m - j) * r_sq / (one - r_sq))) jump += harmonic(j, *i);
  if (auto l = level_hitting(m - j, Rational(j) * (one - r_sq) / r_sq)) jump += harmonic(m - j, *l);
  return jump;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::optional<std::string> run_cli(const std::string& args, const std::string& env) {
  const fs::path out = fs::temp_directory_path() / ("cliff_acceptance_" + std::to_string(::getpid()) + ".out");
  const std::string cmd = env + " '" CLIFF_CLI_PATH "' " + args + " --out '" + out.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return std::nullopt;
  std::string text = slurp(out);
  fs::remove(out);
  return text;
}

Outcome strong_index_at_minimal_radius() {
  Outcome o;
  for_each_dims([&](int m, int j) {
    const auto idx = morse_index(TorusParams::make(m, j, q(j, m)));
    expect(o, idx.strong_index == m + 3, "m=" + std::to_string(m) + " j=" + std::to_string(j));
  });
  return o;
}

Outcome weak_index_between_innermost_instants() {
  Outcome o;
  for_each_dims([&](int m, int j) {
    const Rational lo(j, m + 2), hi(j + 2, m + 2);
    for (int k = 1; k <= 20; ++k) {
      const Rational r_sq = lo + (hi - lo) * q(k, 21);
      expect(o, morse_index(TorusParams::make(m, j, r_sq)).weak_index == m + 2, "r^2=" + r_sq.str());
    }
  });
  return o;
}

Outcome degeneracy_exactly_at_instants() {
  Outcome o;
  std::mt19937_64 rng(2024);
  for_each_dims([&](int m, int j) {
    const std::int64_t orbit = static_cast<std::int64_t>(j + 1) * (m - j + 1);
    const auto instants = degeneracy_instants_to_level(m, j, 8);
    for (const auto& inst : instants) {
      const auto idx = morse_index(TorusParams::make(m, j, inst.r_sq));
      const std::int64_t jump = oracle_jump(m, j, inst.r_sq);
      expect(o, jump > 0 && inst.jump == jump, "jump at " + inst.r_sq.str());
      expect(o, idx.degenerate, "not degenerate at " + inst.r_sq.str());
      expect(o, idx.nullity == orbit + jump, "nullity at " + inst.r_sq.str());
    }
    // Expected instant count through level 8: six of each kind.
    expect(o, instants.size() == 12, "instant count");
    int sampled = 0;
    while (sampled < 200) {
      const Rational r_sq = random_in(rng, q(1, 100), q(99, 100));
      if (oracle_jump(m, j, r_sq) != 0) continue;
      ++sampled;
      const auto idx = morse_index(TorusParams::make(m, j, r_sq));
      expect(o, !idx.degenerate && idx.nullity == orbit, "degenerate at " + r_sq.str());
    }
  });
  return o;
}

Outcome index_jumps_across_instants() {
  Outcome o;
  for_each_dims([&](int m, int j) {
    const auto all = degeneracy_instants_to_level(m, j, 9);
    for (std::size_t k = 0; k < all.size(); ++k) {
      const auto& inst = all[k];
      if (inst.level > 8) continue;
      const Rational prev = k == 0 ? q(0) : all[k - 1].r_sq;
      const Rational next = k + 1 == all.size() ? q(1) : all[k + 1].r_sq;
      const Rational below = inst.r_sq - (inst.r_sq - prev) / 2;
      const Rational above = inst.r_sq + (next - inst.r_sq) / 2;
      const std::int64_t diff = morse_index(TorusParams::make(m, j, above)).strong_index -
                                morse_index(TorusParams::make(m, j, below)).strong_index;
      const std::int64_t jump = oracle_jump(m, j, inst.r_sq);
      const std::int64_t want = inst.kind == InstantKind::RType ? jump : -jump;
      expect(o, diff == want, "across " + inst.r_sq.str());
    }
  });
  return o;
}

Outcome spectrum_matches_lattice() {
  Outcome o;
  std::mt19937_64 rng(77);
  for (int t = 0; t < 50; ++t) {
    const Rational r_sq = random_in(rng, q(0), q(1));
    const auto params = TorusParams::make(2, 1, r_sq);
    const Rational v = potential(params);
    for (const Rational& threshold : {-v, q(-1), q(0), q(5, 2), q(10)}) {
      const auto spectrum = jacobi_eigenvalues_below(params, threshold);
      const auto lattice = fd::lattice_oracle(r_sq, threshold);
      bool same = spectrum.entries.size() == lattice.size();
      for (std::size_t e = 0; same && e < lattice.size(); ++e)
        same = spectrum.entries[e].value == lattice[e].value &&
               spectrum.entries[e].multiplicity == lattice[e].multiplicity;
      expect(o, same, "r^2=" + r_sq.str() + " threshold=" + threshold.str());
    }
  }
  return o;
}

Outcome finite_difference_spectrum() {
  Outcome o;
  std::ostringstream detail;
  for (const Rational& r_sq : {q(1, 4), q(1, 2), q(3, 4)}) {
    try {
      const auto cmp = fd::compare(r_sq.to_double(), 9, 128, 256);
      detail << "r^2=" << r_sq << " err=" << cmp.max_relative_error << " order=" << cmp.convergence_order << "; ";
      expect(o, cmp.max_relative_error <= 1e-3, "relative error at " + r_sq.str());
      expect(o, cmp.convergence_order >= 1.8 && cmp.convergence_order <= 2.2, "order at " + r_sq.str());
    } catch (const fd::ConvergenceError& e) {
      expect(o, false, std::string("no convergence: ") + e.what());
    }
  }
  if (o.passed) o.detail = detail.str();
  return o;
}

Outcome geometry_identities() {
  Outcome o;
  std::mt19937_64 rng(31);
  for (int draw = 0; draw < 100; ++draw) {
    const int m = 2 + static_cast<int>(rng() % 5);
    const int j = 1 + static_cast<int>(rng() % (m - 1));
    const Rational r_sq = random_in(rng, q(1, 20), q(19, 20));
    const auto params = TorusParams::make(m, j, r_sq);
    const auto c = geometry::curvature_data(params);
    expect(o, std::abs(m + c.second_fundamental_norm_sq - potential(params).to_double()) <= 1e-12,
           "potential identity at " + r_sq.str());
    expect(o, std::abs(c.lagrange_multiplier - m * c.mean_curvature) <= 1e-12, "lambda = mH at " + r_sq.str());
    const double r = std::sqrt(r_sq.to_double());
    const double h = 1e-5;
    const double d = geometry::lambda_derivative(m, j, r);
    const double fd =
        (geometry::lagrange_multiplier(m, j, r + h) - geometry::lagrange_multiplier(m, j, r - h)) / (2 * h);
    expect(o, d > 0.0, "lambda' sign at " + r_sq.str());
    expect(o, std::abs(d - fd) <= 1e-6 * std::abs(d), "lambda' at " + r_sq.str());
  }
  return o;
}

Outcome factor_swap_symmetry() {
  Outcome o;
  std::mt19937_64 rng(5);
  for_each_dims([&](int m, int j) {
    for (int t = 0; t < 20; ++t) {
      const auto params = TorusParams::make(m, j, random_in(rng, q(0), q(1)));
      const auto mirror = TorusParams::make(m, m - j, q(1) - params.r_sq);
      const auto a = jacobi_eigenvalues_below(params, q(10));
      const auto b = jacobi_eigenvalues_below(mirror, q(10));
      bool same = a.entries.size() == b.entries.size();
      for (std::size_t e = 0; same && e < a.entries.size(); ++e)
        same = a.entries[e].value == b.entries[e].value && a.entries[e].multiplicity == b.entries[e].multiplicity;
      expect(o, same, "spectrum at " + params.r_sq.str());
      expect(o, morse_index(params) == morse_index(mirror), "index at " + params.r_sq.str());
    }
    const auto fwd = degeneracy_instants_to_level(m, j, 8);
    const auto bwd = degeneracy_instants_to_level(m, m - j, 8);
    std::map<Rational, std::int64_t> left, right;
    for (const auto& inst : fwd) left[inst.r_sq] = inst.jump;
    for (const auto& inst : bwd) right[q(1) - inst.r_sq] = inst.jump;
    expect(o, left == right, "instants m=" + std::to_string(m) + " j=" + std::to_string(j));
  });
  return o;
}

Outcome diagram_is_deterministic() {
  Outcome o;
  for (const char* format : {"csv", "svg"}) {
    const std::string args = std::string("diagram --m 4 --j 1 --samples 400 --format ") + format;
    const auto first = run_cli(args, "CLIFF_THREADS=1");
    expect(o, first.has_value() && !first->empty(), std::string("cli failed for ") + format);
    if (!first) continue;
    for (const char* env : {"CLIFF_THREADS=8", "CLIFF_THREADS=1", "CLIFF_THREADS=8"}) {
      const auto again = run_cli(args, env);
      expect(o, again == first, std::string(format) + " differs under " + env);
    }
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "strong index is m+3 at r^2 = j/m", 1.0, strong_index_at_minimal_radius},
      {2, "weak index is m+2 between s_3 and r_3", 5.0, weak_index_between_innermost_instants},
      {3, "degenerate exactly at instants, nullity = orbit + jump", 30.0, degeneracy_exactly_at_instants},
      {4, "strong index jumps by -jump at s_l and +jump at r_i", 30.0, index_jumps_across_instants},
      {5, "exact spectrum equals the lattice oracle", 0.0, spectrum_matches_lattice},
      {6, "finite-difference spectrum within 1e-3, order near 2", 60.0, finite_difference_spectrum},
      {7, "curvature identities and lambda' checks", 0.0, geometry_identities},
      {8, "factor swap symmetry", 0.0, factor_swap_symmetry},
      {9, "diagram output independent of CLIFF_THREADS", 0.0, diagram_is_deterministic},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = c.run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0.0 && seconds > c.budget_seconds) {
      outcome.passed = false;
      outcome.detail = "over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget";
    }
    all = all && outcome.passed;
    std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", outcome.passed ? "PASS" : "FAIL", c.id, c.name, seconds,
                outcome.detail.empty() ? "" : " -- ", outcome.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
