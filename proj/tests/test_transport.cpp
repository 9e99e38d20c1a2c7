#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "wavetrans/transport.hpp"

using namespace wavetrans;

TEST_SUITE_BEGIN("transport");

namespace {

ScatteringModel single_mode_model() {
  WaveguideConfig cfg = fixtures::paper_config();
  cfg.depth = 0.8 * cfg.wavelength();  // kX/pi = 1.6 -> N = 1
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  Mat coupling = Mat::Constant(1, 1, 0.25);
  return make_scattering_model(basis, coupling);
}

}  // namespace

TEST_CASE("kernel at the origin is the identity") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 1.0);
  const CMat kernel = kernel_hat(model, 0.0, 0.0);
  CHECK((kernel - CMat::Identity(model.size(), model.size())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("deep range reaches equipartition") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 1.0);
  const double z = 100.0 * model.equipartition_distance();
  const CMat kernel = kernel_hat(model, 0.0, z);
  const double uniform = 1.0 / model.size();
  CHECK((kernel.cwiseAbs() - Mat::Constant(model.size(), model.size(), uniform))
            .cwiseAbs()
            .maxCoeff() < 1e-6);
}

TEST_CASE("spectral bound on the distance to equipartition") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Boundary, 3.0);
  const int n = model.size();
  const double l_eq = model.equipartition_distance();
  const Mat uniform = Mat::Constant(n, n, 1.0 / n);
  for (double factor : {0.1, 1.0, 10.0}) {
    const double z = factor * l_eq;
    const Mat kernel = kernel_hat(model, 0.0, z).real();
    const double distance = (kernel - uniform).cwiseAbs().maxCoeff();
    CHECK(distance <= std::exp(-z / l_eq) + 1e-12);
  }
}

TEST_CASE("kernel magnitudes stay within [0, 1] off the axis") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 3.0);
  const double h = 0.5 / (model.basis.beta_prime.maxCoeff() *
                          model.equipartition_distance());
  const CMat kernel = kernel_hat(model, h, 2.0 * model.equipartition_distance());
  CHECK(kernel.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
}

TEST_CASE("semigroup property in range") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 1.0);
  const double l_eq = model.equipartition_distance();
  const double h = 0.35 / (model.basis.beta_prime.maxCoeff() * l_eq);
  const CMat k1 = kernel_hat(model, h, 0.4 * l_eq);
  const CMat k2 = kernel_hat(model, h, 1.1 * l_eq);
  const CMat joint = kernel_hat(model, h, 1.5 * l_eq);
  CHECK((k2 * k1 - joint).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("eigendecomposition route agrees with Pade expm") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Boundary, 1.0);
  const double l_eq = model.equipartition_distance();
  const double h = 1.0 / (model.basis.beta_prime.maxCoeff() * l_eq);
  CMat generator = model.gamma.cast<Complex>();
  for (int j = 0; j < model.size(); ++j)
    generator(j, j) += Complex(0.0, h * model.basis.beta_prime(j));
  const CMat via_pade = expm(generator * (0.7 * l_eq));
  const CMat via_eigen = kernel_hat(model, h, 0.7 * l_eq);
  CHECK((via_pade - via_eigen).cwiseAbs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(kernel_hat(model, 0.0, -1.0), Error);
}

TEST_CASE("perturbed spectrum at h = 0 is the exact spectrum") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 1.0);
  const PerturbedSpectrum spec = perturbed_spectrum(model, 0.0);
  for (int j = 0; j < model.size(); ++j) {
    CHECK(spec.lambda(j).real() == model.spectrum.lambda(j));
    CHECK(spec.lambda(j).imag() == 0.0);
    CHECK((spec.u.col(j) - model.spectrum.u.col(j).cast<Complex>()).cwiseAbs().maxCoeff() ==
          0.0);
  }
  // The imaginary part is the drift h u_j' B' u_j by definition.
  const double h = 0.123;
  const PerturbedSpectrum moved = perturbed_spectrum(model, h);
  for (int j = 0; j < model.size(); ++j) {
    const Vec u = model.spectrum.u.col(j);
    const double drift = u.dot(model.basis.beta_prime.asDiagonal() * u);
    CHECK(moved.lambda(j).imag() == doctest::Approx(h * drift).epsilon(1e-14));
  }
}

TEST_CASE("first-order eigenvalue error scales as h^2") {
  for (auto kind : {FluctuationKind::Medium, FluctuationKind::Boundary}) {
    const ScatteringModel model = fixtures::paper_model(kind, 1.0);
    // Stay inside the perturbation radius of the closest eigenvalue pair.
    double min_gap = std::numeric_limits<double>::infinity();
    for (int r = 1; r < model.size(); ++r)
      min_gap = std::min(min_gap, model.spectrum.lambda(r - 1) - model.spectrum.lambda(r));
    const double h0 = 0.2 * min_gap / model.basis.beta_prime.maxCoeff();
    auto total_error = [&](double h) {
      const PerturbedSpectrum pred = perturbed_spectrum(model, h);
      CMat generator = model.gamma.cast<Complex>();
      for (int j = 0; j < model.size(); ++j)
        generator(j, j) += Complex(0.0, h * model.basis.beta_prime(j));
      Eigen::ComplexEigenSolver<CMat> solver(generator);
      REQUIRE(solver.info() == Eigen::Success);
      CVec exact = solver.eigenvalues();
      std::vector<bool> used(model.size(), false);
      double acc = 0.0;
      for (int j = 0; j < model.size(); ++j) {
        int best = -1;
        double best_d = 1e300;
        for (int m = 0; m < model.size(); ++m) {
          if (used[m]) continue;
          const double d = std::abs(exact(m) - pred.lambda(j));
          if (d < best_d) {
            best_d = d;
            best = m;
          }
        }
        used[best] = true;
        acc += best_d;
      }
      return acc;
    };
    const double ratio = total_error(h0) / total_error(h0 / 2.0);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
  }
}

TEST_CASE("perturbative kernel: spectral identity at h = 0 and scalar case") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 1.0);
  const double z = 0.8 * model.equipartition_distance();
  const CMat exact = kernel_hat(model, 0.0, z);
  const CMat approx = kernel_hat_perturbative(model, 0.0, z);
  CHECK((exact - approx).cwiseAbs().maxCoeff() < 1e-10);

  const ScatteringModel scalar = single_mode_model();
  const double h = 3.0;
  const CMat k = kernel_hat_perturbative(scalar, h, 2.0);
  const Complex expected =
      std::exp(Complex(scalar.spectrum.lambda(0) * 2.0,
                       h * scalar.basis.beta_prime(0) * 2.0));
  CHECK(std::abs(k(0, 0) - expected) < 1e-14);
}

TEST_CASE("perturbative kernel stays within 10% over the window") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 1.0);
  const double z = 0.5 * model.equipartition_distance();
  // Perturbative regime: window small against the coupling strength.
  const double window = 0.03 * model.gamma.norm() / model.basis.beta_prime.norm();
  double worst = 0.0;
  for (int i = -4; i <= 4; ++i) {
    const double h = window * i / 4.0;
    const CMat exact = kernel_hat(model, h, z);
    const CMat approx = kernel_hat_perturbative(model, h, z);
    worst = std::max(worst, (exact - approx).norm() / exact.norm());
  }
  CHECK(worst < 0.10);
}

TEST_CASE("transport speeds: exact first speed, bound, dispersion growth") {
  double reference_dispersion = 0.0;
  for (double ellf : {1.0, 5.0}) {
    const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, ellf);
    const Vec v = transport_speeds(model);
    const double v1_expected = model.size() / model.basis.beta_prime.sum();
    CHECK(v(0) * model.basis.beta_prime.sum() ==
          doctest::Approx(double(model.size())).epsilon(1e-12));
    CHECK(v(0) == doctest::Approx(v1_expected).epsilon(1e-12));
    double dispersion = 0.0;
    for (int r = 0; r < model.size(); ++r) {
      CHECK(v(r) <= 1500.0 + 1e-9);
      dispersion = std::max(dispersion, std::abs(v(r) - 1.0 / model.basis.beta_prime(r)) *
                                            model.basis.beta_prime(r));
    }
    if (ellf == 1.0)
      reference_dispersion = dispersion;
    else
      CHECK(dispersion > reference_dispersion);  // grows with ell
  }
}

TEST_CASE("perturbation diagnostics") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 1.0);
  const double window = 0.1 * model.basis.omega * 0.05 * 0.05;
  const PerturbationDiagnostics diag = perturbation_diagnostics(model, window);
  CHECK(diag.h_grid.size() == 33);
  CHECK(diag.max_rel_error(16) == 0.0);  // center of the symmetric grid is h = 0
  CHECK(diag.perturbative_regime);
  // Ratios scale as 1/H: an enormous window loses the perturbative regime.
  const PerturbationDiagnostics wide = perturbation_diagnostics(model, window * 1e9);
  CHECK_FALSE(wide.perturbative_regime);
  for (int j = 0; j < model.size(); ++j)
    CHECK(wide.ratio(j) == doctest::Approx(diag.ratio(j) / 1e9).epsilon(1e-12));
}

TEST_CASE("diagnostic ratios track the (omega_o/H) k_o ell estimate") {
  // Medium fluctuations: |Gamma_jj| / (H beta'_j) should sit within a modest
  // constant of (omega_o / H) * k_o * ell across the interior modes.
  const WaveguideConfig cfg = fixtures::paper_config();
  for (double ellf : {1.0, 3.0}) {
    const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, ellf);
    const double window = 0.2 * cfg.omega_o;
    const PerturbationDiagnostics diag = perturbation_diagnostics(model, window, 5);
    const double estimate = (cfg.omega_o / window) * cfg.k_o() * ellf * cfg.wavelength();
    for (int j = 4; j < model.size() - 4; ++j) {
      const double factor = diag.ratio(j) / estimate;
      CHECK(factor > 0.05);
      CHECK(factor < 20.0);
    }
  }
}

TEST_SUITE_END();
