#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "cliff/fd_oracle.hpp"
#include "cliff/spectra.hpp"

using namespace cliff;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

TorusParams torus(int m, int j, Rational r_sq) { return TorusParams::make(m, j, std::move(r_sq)); }

// Harmonic polynomials of degree d on R^{n+1}: count monomials of degree d
// and d-2 by direct enumeration.
std::int64_t count_monomials(int vars, int degree) {
  if (degree < 0) return 0;
  if (vars == 1) return 1;
  std::int64_t total = 0;
  for (int e = 0; e <= degree; ++e) total += count_monomials(vars - 1, degree - e);
  return total;
}

std::int64_t harmonic_dimension(int n, int degree) {
  return count_monomials(n + 1, degree) - count_monomials(n + 1, degree - 2);
}

// Eigenvalue of -Delta on S^n(radius) from the degree of the harmonic.
Rational laplace_value(int n, int degree, const Rational& radius_sq) {
  return Rational(static_cast<long>(degree) * (degree + n - 1)) / radius_sq;
}

// Every Jacobi eigenvalue <= threshold by scanning a fixed square of
// degree pairs, independent of any level cutoff logic.
std::map<Rational, std::int64_t> brute_spectrum(const TorusParams& p, const Rational& threshold, int box) {
  const Rational s_sq = Rational(1) - p.r_sq;
  const Rational v = Rational(p.j) / p.r_sq + Rational(p.m - p.j) / s_sq;
  std::map<Rational, std::int64_t> out;
  for (int a = 0; a < box; ++a) {
    for (int b = 0; b < box; ++b) {
      const Rational value = laplace_value(p.j, a, p.r_sq) + laplace_value(p.m - p.j, b, s_sq) - v;
      if (value <= threshold) out[value] += harmonic_dimension(p.j, a) * harmonic_dimension(p.m - p.j, b);
    }
  }
  return out;
}

std::map<Rational, std::int64_t> as_map(const JacobiSpectrum& s) {
  std::map<Rational, std::int64_t> out;
  for (const auto& e : s.entries) out[e.value] = e.multiplicity;
  return out;
}

// Random rational strictly inside (lo, hi).
Rational random_between(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  std::uniform_int_distribution<long> num(1, 9999);
  return lo + (hi - lo) * Rational(num(rng), 10000);
}

bool is_instant(int m, int j, const Rational& r_sq) {
  for (const auto& inst : degeneracy_instants_to_level(m, j, 40))
    if (inst.r_sq == r_sq) return true;
  return false;
}

void for_each_dims(int max_m, const std::function<void(int, int)>& body) {
  for (int m = 2; m <= max_m; ++m)
    for (int j = 1; j < m; ++j) body(m, j);
}

}  // namespace

TEST_CASE("beta and gamma") {
  CHECK(beta(3, 1) == 3);
  CHECK(beta(4, 1) == 8);
  CHECK(gamma(3, 1, 2) == 3);
  CHECK(beta(5, 2) == 18);
  CHECK(gamma(4, 2, 5) == 12);
  CHECK_THROWS_AS(beta(2, 1), std::domain_error);
  CHECK_THROWS_AS(gamma(1, 1, 2), std::domain_error);
  CHECK_THROWS_AS(gamma(3, 2, 2), std::domain_error);
  for (int j = 1; j <= 6; ++j)
    for (int i = 3; i < 40; ++i) {
      CHECK(beta(i + 1, j) > beta(i, j));
      CHECK(beta(i, j) == static_cast<std::int64_t>(i - 2) * (j + i - 1));
    }
}

TEST_CASE("sphere eigenvalues") {
  CHECK(sphere_eigenvalue(1, 2, q(1, 4)) == q(4));
  CHECK(sphere_eigenvalue(2, 3, q(1)) == q(6));
  CHECK(sphere_eigenvalue(3, 1, q(1, 7)) == q(0));
  CHECK_THROWS(sphere_eigenvalue(2, 2, q(0)));
  CHECK_THROWS(sphere_eigenvalue(2, 0, q(1)));
  for (int n = 1; n <= 6; ++n)
    for (int level = 1; level <= 12; ++level)
      CHECK(sphere_eigenvalue(n, level, q(2, 3)) == laplace_value(n, level - 1, q(2, 3)));
}

TEST_CASE("sphere multiplicities match harmonic polynomial counts") {
  CHECK(sphere_multiplicity(1, 1) == 1);
  CHECK(sphere_multiplicity(1, 2) == 2);
  CHECK(sphere_multiplicity(2, 2) == 3);
  CHECK(sphere_multiplicity(2, 3) == 5);
  CHECK(sphere_multiplicity(3, 2) == 4);
  for (int n = 1; n <= 6; ++n)
    for (int level = 1; level <= 14; ++level) CHECK(sphere_multiplicity(n, level) == harmonic_dimension(n, level - 1));
}

TEST_CASE("potential") {
  CHECK(potential(torus(2, 1, q(1, 2))) == q(4));
  CHECK(potential(torus(2, 1, q(1, 4))) == q(16, 3));
  for_each_dims(6, [](int m, int j) { CHECK(potential(torus(m, j, q(j, m))) == q(2 * m)); });
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(TorusParams::make(2, 1, q(0)), std::invalid_argument);
  CHECK_THROWS_AS(TorusParams::make(2, 1, q(1)), std::invalid_argument);
  CHECK_THROWS_AS(TorusParams::make(2, 1, q(-1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(TorusParams::make(2, 2, q(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(TorusParams::make(2, 0, q(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(morse_index(TorusParams{3, 1, q(2)}), std::invalid_argument);
  const auto p = torus(5, 2, q(1, 3)).swapped();
  CHECK(p.m == 5);
  CHECK(p.j == 3);
  CHECK(p.r_sq == q(2, 3));
}

TEST_CASE("spectrum examples") {
  SUBCASE("r^2 = 1/4") {
    const auto s = jacobi_eigenvalues_below(torus(2, 1, q(1, 4)), q(0));
    REQUIRE(s.entries.size() == 4);
    CHECK(s.entries[0].value == q(-16, 3));
    CHECK(s.entries[0].multiplicity == 1);
    CHECK(s.entries[1].value == q(-4));
    CHECK(s.entries[1].multiplicity == 2);
    CHECK(s.entries[2].value == q(-4, 3));
    CHECK(s.entries[2].multiplicity == 2);
    CHECK(s.entries[3].value == q(0));
    CHECK(s.entries[3].multiplicity == 6);
  }
  SUBCASE("r^2 = 1/2") {
    const auto s = jacobi_eigenvalues_below(torus(2, 1, q(1, 2)), q(0));
    REQUIRE(s.entries.size() == 3);
    CHECK(s.entries[0].value == q(-4));
    CHECK(s.entries[1].value == q(-2));
    CHECK(s.entries[1].multiplicity == 4);
    CHECK(s.entries[2].value == q(0));
    CHECK(s.entries[2].multiplicity == 4);
    const std::vector<std::pair<int, int>> contributors{{1, 2}, {2, 1}};
    CHECK(s.entries[1].contributors == contributors);
  }
  SUBCASE("below the bottom") {
    const auto p = torus(2, 1, q(1, 2));
    CHECK(jacobi_eigenvalues_below(p, q(-5)).entries.empty());
    CHECK(jacobi_eigenvalues_below(p, -potential(p)).total_multiplicity() == 1);
  }
}

TEST_CASE("morse index examples") {
  CHECK(morse_index(torus(2, 1, q(1, 2))) == IndexReport{5, 4, 4, false});
  CHECK(morse_index(torus(2, 1, q(49, 100))).weak_index == 4);
  CHECK(morse_index(torus(2, 1, q(1, 4))) == IndexReport{5, 4, 6, true});
  CHECK(orbit_dimension(2, 1) == 4);
  CHECK(orbit_dimension(4, 2) == 9);
}

TEST_CASE("instant examples") {
  const auto inst = degeneracy_instants_to_level(2, 1, 4);
  REQUIRE(inst.size() == 4);
  CHECK(inst[0] == DegeneracyInstant{InstantKind::SType, 4, q(1, 9), 2});
  CHECK(inst[1] == DegeneracyInstant{InstantKind::SType, 3, q(1, 4), 2});
  CHECK(inst[2] == DegeneracyInstant{InstantKind::RType, 3, q(3, 4), 2});
  CHECK(inst[3] == DegeneracyInstant{InstantKind::RType, 4, q(8, 9), 2});
  CHECK_THROWS(degeneracy_instants_to_level(2, 1, 2));
  for_each_dims(6, [](int m, int j) {
    CHECK(r_instant_sq(3, m, j) == q(j + 2, m + 2));
    CHECK(s_instant_sq(3, m, j) == q(j, m + 2));
  });
}

TEST_CASE("instants in a window") {
  const auto all = degeneracy_instants_to_level(3, 1, 30);
  const auto window = degeneracy_instants(3, 1, q(1, 50), q(9, 10));
  for (const auto& inst : window) {
    CHECK(inst.r_sq >= q(1, 50));
    CHECK(inst.r_sq <= q(9, 10));
    CHECK(std::find(all.begin(), all.end(), inst) != all.end());
  }
  for (const auto& inst : all)
    if (inst.r_sq >= q(1, 50) && inst.r_sq <= q(9, 10))
      CHECK(std::find(window.begin(), window.end(), inst) != window.end());
  CHECK(std::is_sorted(window.begin(), window.end(), [](const auto& a, const auto& b) { return a.r_sq < b.r_sq; }));
  CHECK_THROWS(degeneracy_instants(3, 1, q(0), q(1, 2)));
  CHECK_THROWS(degeneracy_instants(3, 1, q(1, 2), q(1, 3)));
}

TEST_CASE("instants_at") {
  CHECK(instants_at(torus(2, 1, q(1, 4))).size() == 1);
  CHECK(instants_at(torus(2, 1, q(8, 9))).front().level == 4);
  CHECK(instants_at(torus(2, 1, q(1, 2))).empty());
  const auto far = r_instant_sq(5000, 4, 1);
  const auto hit = instants_at(torus(4, 1, far));
  REQUIRE(hit.size() == 1);
  CHECK(hit.front().level == 5000);
}

TEST_CASE("theta and kappa") {
  CHECK(theta(3, torus(2, 1, q(1, 2))) == q(4));
  CHECK(theta(3, torus(2, 1, q(1, 4))) == q(0));
  CHECK(kappa(3, torus(2, 1, q(1, 2))) == q(4));
  CHECK(kappa(3, torus(2, 1, q(3, 4))) == q(0));
  std::mt19937_64 rng(11);
  for_each_dims(5, [&](int m, int j) {
    for (int t = 0; t < 10; ++t) {
      const auto p = torus(m, j, random_between(rng, q(0), q(1)));
      const Rational v = potential(p);
      for (int level = 3; level < 8; ++level) {
        CHECK(theta(level, p) == sphere_eigenvalue(m - j, level, Rational(1) - p.r_sq) - v);
        CHECK(kappa(level, p) == sphere_eigenvalue(j, level, p.r_sq) - v);
        CHECK(theta(level + 1, p) > theta(level, p));
      }
    }
  });
}

TEST_CASE("classification examples") {
  CHECK(classify(torus(2, 1, q(1, 2))) == Classification{Verdict::LocallyRigid, 0});
  CHECK(classify(torus(2, 1, q(1, 4))) == Classification{Verdict::BifurcationInstant, 2});
  CHECK(classify(torus(4, 2, q(2, 3))) == Classification{Verdict::BifurcationInstant, 5});
  const auto idx = morse_index(torus(4, 2, q(2, 3)));
  CHECK(idx.nullity - orbit_dimension(4, 2) == 5);
}

TEST_CASE("brute-force oracle agreement") {
  std::mt19937_64 rng(3);
  for_each_dims(5, [&](int m, int j) {
    for (int t = 0; t < 6; ++t) {
      const auto p = torus(m, j, random_between(rng, q(1, 20), q(19, 20)));
      for (const Rational& threshold : {q(0), q(10), q(50)}) {
        const auto got = jacobi_eigenvalues_below(p, threshold);
        // Degree 40 already sits above 1600 - V, far past any threshold here.
        CHECK(as_map(got) == brute_spectrum(p, threshold, 40));
        CHECK(got.threshold == threshold);
      }
    }
  });
  // Instants too, where the kernel is enlarged.
  for (const auto& inst : degeneracy_instants_to_level(3, 2, 6)) {
    const auto p = torus(3, 2, inst.r_sq);
    CHECK(as_map(jacobi_eigenvalues_below(p, q(5))) == brute_spectrum(p, q(5), 40));
  }
}

TEST_CASE("agreement with the flat lattice on the 2-torus") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto p = torus(2, 1, random_between(rng, q(0), q(1)));
    const auto spectrum = jacobi_eigenvalues_below(p, q(10));
    const auto lattice = fd::lattice_oracle(p.r_sq, q(10));
    REQUIRE(spectrum.entries.size() == lattice.size());
    for (std::size_t k = 0; k < lattice.size(); ++k) {
      CHECK(spectrum.entries[k].value == lattice[k].value);
      CHECK(spectrum.entries[k].multiplicity == lattice[k].multiplicity);
    }
  }
}

TEST_CASE("index invariants") {
  std::mt19937_64 rng(17);
  for_each_dims(6, [&](int m, int j) {
    for (int t = 0; t < 25; ++t) {
      const auto p = torus(m, j, random_between(rng, q(1, 100), q(99, 100)));
      const auto idx = morse_index(p);
      CHECK(idx.strong_index == idx.weak_index + 1);
      CHECK(idx.nullity >= orbit_dimension(m, j));
      CHECK(idx.degenerate == is_instant(m, j, p.r_sq));
      CHECK(idx.degenerate == (idx.nullity > orbit_dimension(m, j)));
      CHECK(idx.strong_index >= m + 3);
      const auto c = classify(p);
      CHECK((c.verdict == Verdict::BifurcationInstant) == idx.degenerate);
      CHECK(c.jump == idx.nullity - orbit_dimension(m, j));
    }
  });
}

TEST_CASE("instant jumps equal the nullity excess") {
  for_each_dims(6, [](int m, int j) {
    for (const auto& inst : degeneracy_instants_to_level(m, j, 8)) {
      const auto p = torus(m, j, inst.r_sq);
      const auto idx = morse_index(p);
      CHECK(idx.nullity == orbit_dimension(m, j) + inst.jump);
      const std::int64_t expected = inst.kind == InstantKind::RType ? sphere_multiplicity(j, inst.level)
                                                                    : sphere_multiplicity(m - j, inst.level);
      CHECK(inst.jump == expected);
      CHECK(instants_at(p) == std::vector<DegeneracyInstant>{inst});
    }
  });
}

TEST_CASE("staircase across instants") {
  for_each_dims(5, [](int m, int j) {
    // Neighbours come from one level further so no unlisted instant sits in between.
    const auto inst = degeneracy_instants_to_level(m, j, 8);
    for (std::size_t k = 1; k + 1 < inst.size(); ++k) {
      if (inst[k].level > 7) continue;
      const Rational below = (inst[k - 1].r_sq + inst[k].r_sq) / 2;
      const Rational above = (inst[k].r_sq + inst[k + 1].r_sq) / 2;
      const auto diff =
          morse_index(torus(m, j, above)).strong_index - morse_index(torus(m, j, below)).strong_index;
      CHECK(diff == (inst[k].kind == InstantKind::RType ? inst[k].jump : -inst[k].jump));
    }
  });
}

TEST_CASE("weak index is m+2 between the innermost instants") {
  for_each_dims(6, [](int m, int j) {
    const Rational lo = s_instant_sq(3, m, j), hi = r_instant_sq(3, m, j);
    for (int k = 1; k < 10; ++k) CHECK(morse_index(torus(m, j, lo + (hi - lo) * q(k, 10))).weak_index == m + 2);
    CHECK(morse_index(torus(m, j, q(j, m))).strong_index == m + 3);
  });
}

TEST_CASE("factor swap symmetry") {
  std::mt19937_64 rng(23);
  for_each_dims(6, [&](int m, int j) {
    for (int t = 0; t < 5; ++t) {
      const auto p = torus(m, j, random_between(rng, q(0), q(1)));
      const auto a = jacobi_eigenvalues_below(p, q(10));
      const auto b = jacobi_eigenvalues_below(p.swapped(), q(10));
      CHECK(as_map(a) == as_map(b));
      CHECK(morse_index(p) == morse_index(p.swapped()));
    }
    const auto own = degeneracy_instants_to_level(m, j, 8);
    const auto mirrored = degeneracy_instants_to_level(m, m - j, 8);
    REQUIRE(own.size() == mirrored.size());
    for (std::size_t k = 0; k < own.size(); ++k) {
      const auto& b = mirrored[own.size() - 1 - k];
      CHECK(b.r_sq == Rational(1) - own[k].r_sq);
      CHECK(b.level == own[k].level);
      CHECK(b.jump == own[k].jump);
      CHECK(b.kind != own[k].kind);
    }
  });
}
