#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "wavetrans/modes.hpp"

using namespace wavetrans;

TEST_SUITE_BEGIN("modes");

TEST_CASE("propagating mode counts at the simulation frequencies") {
  const WaveguideConfig cfg = fixtures::paper_config();
  CHECK(num_propagating(cfg.omega_o, cfg) == 40);
  CHECK(num_propagating(2.0 * cfg.omega_o, cfg) == 81);
  CHECK(num_propagating(3.0 * cfg.omega_o, cfg) == 121);
  CHECK(num_propagating(0.5 * cfg.omega_o, cfg) == 20);
}

TEST_CASE("standing-wave configurations are rejected") {
  WaveguideConfig cfg = fixtures::paper_config();
  cfg.depth = 20.0 * cfg.wavelength();  // kX/pi = 40 exactly
  CHECK_THROWS_AS(num_propagating(cfg.omega_o, cfg), Error);
  try {
    num_propagating(cfg.omega_o, cfg);
  } catch (const Error& e) {
    CHECK(e.code() == errc::degenerate_cutoff);
  }
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("config invariants") {
  WaveguideConfig cfg = fixtures::paper_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 2.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = fixtures::paper_config();
  cfg.eps = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("dispersion identity beta^2 + (pi j / X)^2 = k^2") {
  const WaveguideConfig cfg = fixtures::paper_config();
  for (double factor : {0.5, 1.0, 2.0, 3.0}) {
    const ModeBasis basis = mode_basis(factor * cfg.omega_o, cfg);
    CHECK(basis.count == num_propagating(factor * cfg.omega_o, cfg));
    for (int j = 1; j <= basis.count; ++j) {
      const double transverse = kPi * j / cfg.depth;
      const double lhs = basis.beta_at(j) * basis.beta_at(j) + transverse * transverse;
      CHECK(lhs == doctest::Approx(basis.k * basis.k).epsilon(1e-12));
    }
  }
}

TEST_CASE("frozen wavenumber at the last propagating mode") {
  // Independent 40-digit evaluation of the dispersion relation at j = 40.
  const ModeBasis basis = fixtures::paper_basis();
  CHECK(basis.beta_at(40) == doctest::Approx(0.7174732635172792).epsilon(1e-14));
  CHECK(basis.beta_at(1) == doctest::Approx(4.187519418764468).epsilon(1e-14));
}

TEST_CASE("mode ordering and slowness bounds") {
  const ModeBasis basis = fixtures::paper_basis();
  for (int j = 1; j < basis.count; ++j) {
    CHECK(basis.beta_at(j) > basis.beta_at(j + 1));
    CHECK(basis.slowness_at(j) < basis.slowness_at(j + 1));
  }
  for (int j = 1; j <= basis.count; ++j)
    CHECK(basis.slowness_at(j) >= 1.0 / 1500.0);
  // First mode travels at nearly the reference speed when N >> 1.
  CHECK(1.0 / basis.slowness_at(1) == doctest::Approx(1500.0).epsilon(1e-3));
}

TEST_CASE("eigenfunction boundary values and peak") {
  const WaveguideConfig cfg = fixtures::paper_config();
  for (int j : {1, 7, 40}) {
    CHECK(eigenfunction(j, 0.0, cfg) == 0.0);
    CHECK(std::abs(eigenfunction(j, cfg.depth, cfg)) < 1e-12);
  }
  CHECK(eigenfunction(1, cfg.depth / 2.0, cfg) ==
        doctest::Approx(std::sqrt(2.0 / cfg.depth)).epsilon(1e-14));
  CHECK_THROWS_AS(eigenfunction(1, -0.1, cfg), Error);
  CHECK_THROWS_AS(eigenfunction(1, cfg.depth + 0.1, cfg), Error);
  CHECK_THROWS_AS(eigenfunction(0, 1.0, cfg), Error);
}

TEST_CASE("basis invariants hold across randomized configurations") {
  // Hand-rolled generator over valid waveguide geometries and frequencies.
  std::uint64_t state = 0x9E3779B97F4A7C15ULL;
  auto uniform = [&state](double lo, double hi) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return lo + (hi - lo) * double(state >> 11) * 0x1.0p-53;
  };
  int tested = 0;
  for (int trial = 0; trial < 200; ++trial) {
    WaveguideConfig cfg;
    cfg.c_o = uniform(300.0, 6000.0);
    cfg.omega_o = uniform(200.0, 40000.0);
    cfg.depth = uniform(2.0, 80.0);
    cfg.ell = uniform(0.2, 10.0);
    const double mode_parameter = cfg.omega_o * cfg.depth / (kPi * cfg.c_o);
    if (mode_parameter < 1.2) continue;  // needs at least one propagating mode
    if (std::abs(mode_parameter - std::round(mode_parameter)) < 1e-6) continue;
    ++tested;
    const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
    CHECK(basis.count == num_propagating(cfg.omega_o, cfg));
    CHECK(basis.count == static_cast<int>(std::floor(mode_parameter)));
    for (int j = 1; j <= basis.count; ++j) {
      const double transverse = kPi * j / cfg.depth;
      CHECK(basis.beta_at(j) * basis.beta_at(j) + transverse * transverse ==
            doctest::Approx(basis.k * basis.k).epsilon(1e-12));
      CHECK(basis.slowness_at(j) >= 1.0 / cfg.c_o);
      if (j > 1) CHECK(basis.beta_at(j) < basis.beta_at(j - 1));
      if (j > 1) CHECK(basis.slowness_at(j) > basis.slowness_at(j - 1));
    }
  }
  CHECK(tested > 100);
}

TEST_CASE("orthonormality under composite quadrature") {
  const WaveguideConfig cfg = fixtures::paper_config();
  const ModeBasis basis = fixtures::paper_basis();
  const int n_points = 20 * basis.count;  // >= 20 N points
  double worst = 0.0;
  for (int j : {1, 2, 13, 39, 40}) {
    for (int q : {1, 2, 13, 39, 40}) {
      const double value = oracles::integrate(
          [&](double x) { return basis.phi(j, x) * basis.phi(q, x); }, 0.0, cfg.depth,
          1e-13);
      const double expected = (j == q) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(value - expected));
      // Composite Simpson on the fixed grid, per the stated point budget.
      double acc = 0.0;
      const double dx = cfg.depth / n_points;
      auto node = [&](int i) { return cfg.depth * i / n_points; };
      for (int i = 0; i < n_points; i += 2) {
        const double x0 = node(i), x1 = node(i + 1), x2 = node(i + 2);
        acc += dx / 3.0 *
               (basis.phi(j, x0) * basis.phi(q, x0) +
                4.0 * basis.phi(j, x1) * basis.phi(q, x1) +
                basis.phi(j, x2) * basis.phi(q, x2));
      }
      CHECK(std::abs(acc - expected) < 1e-8);
    }
  }
  CHECK(worst < 1e-10);
}

TEST_SUITE_END();
