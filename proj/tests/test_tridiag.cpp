#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "wavetrans/rng.hpp"
#include "wavetrans/tridiag.hpp"

using namespace wavetrans;

TEST_SUITE_BEGIN("tridiag");

namespace {

// Family of nearest-neighbor coupling models in the long-correlation regime
// (transverse Gaussian, white in range), sized so that N modes propagate.
Mat family_gamma(int n, double koell_over_n) {
  WaveguideConfig cfg = fixtures::paper_config();
  cfg.depth = (n + 0.3) * cfg.wavelength() / 2.0;
  cfg.ell = koell_over_n * n / cfg.k_o();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  return gamma_medium_range_white(basis, cfg.ell);
}

}  // namespace

TEST_CASE("two-mode closed form") {
  Mat gamma(2, 2);
  gamma << -0.8, 0.8, 0.8, -0.8;
  const double k_o = 4.0;
  const TridiagonalModel model = build_upsilon(gamma, k_o);
  CHECK(model.off_diag(0) == doctest::Approx(0.2));
  CHECK(model.diag(0) == doctest::Approx(-0.2));
  CHECK(model.lambda(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(model.lambda(1) == doctest::Approx(-0.4));
}

TEST_CASE("null vector and machine-exact zero eigenvalue") {
  for (int n : {10, 40}) {
    const TridiagonalModel model = build_upsilon(family_gamma(n, 1.0), 4.0);
    CHECK(std::abs(model.lambda(0)) < 64 * std::numeric_limits<double>::epsilon() * model.norm);
    const Vec flat = Vec::Constant(n, 1.0 / std::sqrt(double(n)));
    CHECK((model.vectors.col(0) - flat).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("diagonal magnitudes grow toward the cutoff modes") {
  double previous = 0.0;
  for (int n : {10, 20, 40, 80}) {
    const TridiagonalModel model = build_upsilon(family_gamma(n, 0.5), 4.0);
    const double growth = model.diag(n - 1) / model.diag(0);
    CHECK(growth > 1.0);
    CHECK(growth > previous);  // profile steepens with N
    previous = growth;
  }
}

TEST_CASE("spectrum scales linearly with the coupling") {
  const Mat gamma = family_gamma(20, 1.0);
  const TridiagonalModel base = build_upsilon(gamma, 4.0);
  const TridiagonalModel scaled = build_upsilon(Mat(3.0 * gamma), 4.0);
  for (int r = 0; r < 20; ++r) {
    CHECK(scaled.lambda(r) == doctest::Approx(3.0 * base.lambda(r)).epsilon(1e-10));
  }
  CHECK((scaled.vectors - base.vectors).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("trailing-block eigenvalues interlace the full spectrum") {
  const TridiagonalModel model = build_upsilon(family_gamma(40, 1.0), 4.0);
  const int n = model.n, m = 5;
  Mat block = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    block(i, i) = model.diag(n - m + i);
    if (i + 1 < m) {
      block(i, i + 1) = model.off_diag(n - m + i);
      block(i + 1, i) = model.off_diag(n - m + i);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(block);
  const Vec mu = solver.eigenvalues().reverse();  // decreasing, like model.lambda
  for (int i = 0; i < m; ++i) {
    CHECK(mu(i) <= model.lambda(i) + 1e-10 * model.norm);
    CHECK(mu(i) >= model.lambda(n - m + i) - 1e-10 * model.norm);
  }
}

TEST_CASE("one-dimensional null space for any connected coupling") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 12;
    Mat gamma = Mat::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
      const double c = 0.1 + std::abs(rng.next_gaussian());
      gamma(i, i + 1) = c;
      gamma(i + 1, i) = c;
    }
    const TridiagonalModel model = build_upsilon(gamma, 1.0);
    CHECK(model.lambda(1) < -1e-10 * model.norm);
  }
}

TEST_CASE("proposition report passes at the simulation sizes") {
  const double k_o = fixtures::paper_config().k_o();
  for (double ratio : {0.5, 1.0}) {
    const PropositionReport report = verify_proposition(
        [&](int n) { return family_gamma(n, ratio); }, k_o, {10, 20, 40, 80});
    CHECK(report.structural_ok);
    CHECK(report.norm_slope == doctest::Approx(2.0).epsilon(0.15));
    CHECK(report.slope_ok);
    CHECK(report.tail_sweep_ok);
    CHECK(report.tail_constant <= 1.0);
    CHECK(report.all_pass);
    MESSAGE("ratio ", ratio, ": slope ", report.norm_slope, ", tail C ",
            report.tail_constant);
  }
}

TEST_CASE("tail mass of the fastest eigenvector is negligible") {
  // delta -> 0 extreme of the cut-off bound: the largest-|lambda| eigenvector
  // carries essentially no mass in the first half of the rows.
  const TridiagonalModel model = build_upsilon(family_gamma(80, 1.0), 4.0);
  const int j_fast = model.n - 1;
  double tail = 0.0;
  for (int q = 0; q < model.n / 2; ++q)
    tail += model.vectors(q, j_fast) * model.vectors(q, j_fast);
  CHECK(tail < 1e-4);
}

TEST_SUITE_END();
