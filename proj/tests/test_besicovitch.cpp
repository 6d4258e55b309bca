#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "doctest.h"
#include "substdim/besicovitch.hpp"
#include "substdim/errors.hpp"
#include "substdim/types.hpp"

using namespace substdim;

namespace {

Substitution period_doubling() { return parse_substitution("0 -> 01; 1 -> 00"); }
Substitution thue_morse() { return parse_substitution("0 -> 01; 1 -> 10"); }
Substitution constant_image() { return parse_substitution("0 -> 01; 1 -> 01"); }

}  // namespace

TEST_CASE("sample_orbit: distinct offsets, consistent track") {
  const OrbitSample s = sample_orbit(period_doubling(), 32, 2048);
  CHECK(s.count() == 32);
  CHECK(s.radius == 2048);
  CHECK(s.track.size() == 3 * 2048);
  CHECK_FALSE(s.truncated);
  std::set<std::size_t> seen(s.offsets.begin(), s.offsets.end());
  CHECK(seen.size() == s.count());
  for (std::size_t t : s.offsets) CHECK(t < s.radius);
}

TEST_CASE("sample_orbit: finite subshift truncates to the period") {
  const OrbitSample s = sample_orbit(constant_image(), 32, 2048);
  CHECK(s.truncated);
  CHECK(s.count() == 2);
}

TEST_CASE("d_delta: identity, symmetry, range") {
  const OrbitSample s = sample_orbit(period_doubling(), 16, 2048);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(d_delta_estimate(s, i, i, 1.0).value == 0.0);
    for (std::size_t j = 0; j < 4; ++j) {
      const double dij = d_delta_estimate(s, i, j, 1.0).value;
      CHECK(dij == d_delta_estimate(s, j, i, 1.0).value);
      CHECK(dij >= 0.0);
      CHECK(dij <= 1.0);
    }
  }
}

TEST_CASE("d_delta: triangle inequality is exact at fixed window") {
  const OrbitSample s = sample_orbit(period_doubling(), 12, 2048);
  for (std::size_t i = 0; i < s.count(); ++i)
    for (std::size_t j = 0; j < s.count(); ++j)
      for (std::size_t k = 0; k < s.count(); ++k) {
        const double dij = d_delta_estimate(s, i, j, 1.0).value;
        const double djk = d_delta_estimate(s, j, k, 1.0).value;
        const double dik = d_delta_estimate(s, i, k, 1.0).value;
        REQUIRE(dik <= dij + djk + 1e-12);
      }
}

TEST_CASE("d_delta: decreasing delta can only grow the estimate") {
  const OrbitSample s = sample_orbit(thue_morse(), 8, 4096);
  for (std::size_t i = 0; i < s.count(); ++i)
    for (std::size_t j = i + 1; j < s.count(); ++j) {
      const double d10 = d_delta_estimate(s, i, j, 1.0).value;
      const double d05 = d_delta_estimate(s, i, j, 0.5).value;
      const double d025 = d_delta_estimate(s, i, j, 0.25).value;
      // Edge positions are dropped for delta < 1, so allow a small slack.
      REQUIRE(d05 >= d10 - 0.01);
      REQUIRE(d025 >= d05 - 0.01);
    }
}

TEST_CASE("d_B: identity, symmetry, dominated by Hamming density") {
  const OrbitSample s = sample_orbit(period_doubling(), 8, 4096);
  for (std::size_t i = 0; i < s.count(); ++i) {
    CHECK(d_B_estimate(s, i, i) == 0.0);
    for (std::size_t j = i + 1; j < s.count(); ++j) {
      const double db = d_B_estimate(s, i, j);
      CHECK(db == d_B_estimate(s, j, i));
      CHECK(db >= 0.0);
      // d_beta(x, y) <= 1 pointwise and vanishes where the windows agree far
      // out; the Birkhoff average can exceed the plain Hamming density, but
      // the scaled D_delta lower bound must stay below it.
      const double d05 = d_delta_estimate(s, i, j, 0.5).value;
      REQUIRE(0.5 * d05 <= db + 2.0 / 4096.0 + 0.01);
    }
  }
}

TEST_CASE("shift moves distances by at most 2/n") {
  // Offsets are consecutive, so (i+1, j+1) is the shifted pair of (i, j).
  const OrbitSample s = sample_orbit(thue_morse(), 24, 4096);
  const double tol = 2.0 / 4096.0 + 1e-12;
  for (std::size_t i = 0; i + 1 < s.count(); ++i)
    for (std::size_t j = i + 1; j + 1 < s.count(); ++j) {
      const double d = d_delta_estimate(s, i, j, 1.0).value;
      const double dshift = d_delta_estimate(s, i + 1, j + 1, 1.0).value;
      REQUIRE(std::abs(d - dshift) <= tol);
    }
}

TEST_CASE("pairwise_d1: deterministic across thread counts") {
  const OrbitSample s = sample_orbit(period_doubling(), 24, 4096);
  const DistanceMatrix one = pairwise_d1(s, 1);
  const DistanceMatrix four = pairwise_d1(s, 4);
  REQUIRE(one.full == four.full);
  REQUIRE(one.half == four.half);
}

TEST_CASE("pairwise_d1: symmetric with zero diagonal") {
  const OrbitSample s = sample_orbit(period_doubling(), 16, 2048);
  const DistanceMatrix m = pairwise_d1(s, 0);
  for (std::size_t i = 0; i < m.count; ++i) {
    CHECK(m.at(i, i) == 0.0);
    for (std::size_t j = 0; j < m.count; ++j) CHECK(m.at(i, j) == m.at(j, i));
  }
}

TEST_CASE("sep_table: counts decrease as nu grows, greedy sets are maximal") {
  const OrbitSample s = sample_orbit(period_doubling(), 64, 8192);
  const DistanceMatrix m = pairwise_d1(s, 0);
  const auto grid = geometric_nu_grid(0.5, 0.01, std::pow(2.0, -0.5));
  const SeparationTable t = sep_table(m, grid);
  REQUIRE(t.counts.size() == t.nu_grid.size());
  for (std::size_t i = 0; i + 1 < t.nu_grid.size(); ++i) {
    REQUIRE(t.nu_grid[i] > t.nu_grid[i + 1]);
    REQUIRE(t.counts[i] <= t.counts[i + 1]);
  }
  CHECK(t.counts.front() >= 1);
  CHECK(t.counts.back() <= s.count());
}

TEST_CASE("geometric_nu_grid: strictly decreasing, spans the range") {
  const auto grid = geometric_nu_grid(0.5, 0.01, std::pow(2.0, -0.5));
  REQUIRE(grid.size() >= 5);
  CHECK(grid.front() == 0.5);
  CHECK(grid.back() >= 0.01);
  CHECK(grid.back() * std::pow(2.0, -0.5) < 0.01);
}

TEST_CASE("empirical_ac: period doubling slope near 1 at reduced scale") {
  EmpiricalConfig cfg;
  cfg.window_radius = 1 << 13;
  cfg.sample_count = 128;
  const DimensionFit fit = empirical_ac(period_doubling(), cfg);
  CHECK(fit.slope > 0.6);
  CHECK(fit.slope < 1.4);
  CHECK(fit.r_squared > 0.9);
}

TEST_CASE("empirical_ac: finite subshift gives slope 0") {
  EmpiricalConfig cfg;
  cfg.window_radius = 1 << 12;
  cfg.sample_count = 64;
  const DimensionFit fit = empirical_ac(constant_image(), cfg);
  CHECK(fit.sample_truncated);
  CHECK(std::abs(fit.slope) < 0.05);
}

TEST_CASE("ifs_checks: contraction sandwich holds on samples") {
  const OrbitSample s = sample_orbit(period_doubling(), 32, 8192);
  const IfsCheckReport r = ifs_checks(period_doubling(), s);
  CHECK(r.pieces == 2);
  CHECK(r.contraction_pairs > 0);
  CHECK(r.contraction_violations == 0);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("ifs_checks: finite subshift flagged degenerate") {
  const OrbitSample s = sample_orbit(constant_image(), 32, 4096);
  const IfsCheckReport r = ifs_checks(constant_image(), s);
  CHECK(r.degenerate);
}
