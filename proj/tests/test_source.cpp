#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "wavetrans/source.hpp"

using namespace wavetrans;

TEST_SUITE_BEGIN("source");

namespace {

SeparableSource point_delta(double x0) {
  SeparableSource src;
  src.xi.kind = CrossRangeProfile::Kind::Point;
  src.xi.x0 = x0;
  src.zeta.kind = RangeProfile::Kind::Delta;
  return src;
}

// Scattering-free model on the paper basis (all couplings zero).
ScatteringModel free_model() {
  const ModeBasis basis = fixtures::paper_basis();
  return make_scattering_model(basis, Mat(Mat::Zero(basis.count, basis.count)));
}

}  // namespace

TEST_CASE("point source spectrum samples the eigenfunctions") {
  const WaveguideConfig cfg = fixtures::paper_config();
  const ModeBasis basis = fixtures::paper_basis();
  const double x_star = 0.37 * cfg.depth;
  const SourceSpectrum spectrum = source_spectrum(point_delta(x_star), basis);
  for (int l = 1; l <= basis.count; ++l) {
    const double phi = eigenfunction(l, x_star, cfg);
    CHECK(spectrum.xi_sq(l - 1) == doctest::Approx(phi * phi).epsilon(1e-14));
  }
  for (double beta : {0.3, 1.0, 4.0}) CHECK(spectrum.zeta_sq(beta) == 1.0);
}

TEST_CASE("Gaussian cross-range coefficients match adaptive quadrature") {
  const WaveguideConfig cfg = fixtures::paper_config();
  const ModeBasis basis = fixtures::paper_basis();
  SeparableSource src;
  src.xi.kind = CrossRangeProfile::Kind::Gaussian;
  src.xi.x0 = cfg.depth / 4.0;
  src.xi.sigma = cfg.depth / 30.0;
  src.validate(cfg);
  const SourceSpectrum spectrum = source_spectrum(src, basis);
  const double norm = 1.0 / (std::sqrt(2.0 * kPi) * src.xi.sigma);
  double worst = 0.0, scale = 0.0;
  for (int l = 1; l <= basis.count; ++l) {
    const double oracle = oracles::integrate(
        [&](double x) {
          const double u = (x - src.xi.x0) / src.xi.sigma;
          return norm * std::exp(-0.5 * u * u) * basis.phi(l, x);
        },
        0.0, cfg.depth, 1e-14);
    worst = std::max(worst, std::abs(spectrum.xi_sq(l - 1) - oracle * oracle));
    scale = std::max(scale, oracle * oracle);
  }
  CHECK(worst / scale < 1e-8);
}

TEST_CASE("Gaussian range profile and support validation") {
  const WaveguideConfig cfg = fixtures::paper_config();
  SeparableSource src = point_delta(cfg.depth / 4.0);
  src.zeta.kind = RangeProfile::Kind::Gaussian;
  src.zeta.width = 0.4;
  const SourceSpectrum spectrum = source_spectrum(src, fixtures::paper_basis());
  for (double beta : {0.5, 2.0})
    CHECK(spectrum.zeta_sq(beta) == doctest::Approx(std::exp(-beta * beta * 0.16)));

  SeparableSource bad;
  bad.xi.kind = CrossRangeProfile::Kind::Gaussian;
  bad.xi.x0 = cfg.depth / 20.0;
  bad.xi.sigma = cfg.depth / 10.0;  // 3 sigma pokes outside
  CHECK_THROWS_AS(bad.validate(cfg), Error);
}

TEST_CASE("data vector: identity range, two code paths, linearity") {
  const WaveguideConfig cfg = fixtures::paper_config();
  const ModeBasis basis = fixtures::paper_basis();
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 1.0);
  const ApertureCoupling aperture = full_aperture(basis);
  const SourceSpectrum spectrum = source_spectrum(point_delta(0.31 * cfg.depth), basis);

  SUBCASE("Z = 0 with full aperture keeps the diagonal kernel terms only") {
    const Vec m = forward_data_vector(spectrum, model, aperture, 0.0);
    for (int j = 0; j < basis.count; ++j) {
      const double expected = spectrum.xi_sq(j) / (basis.beta(j) * basis.beta(j));
      CHECK(m(j) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("sum form and vector form agree") {
    const ApertureCoupling partial = aperture_coupling(0.1 * cfg.depth, cfg.depth, basis);
    for (double z : {0.0, 0.03, 0.4}) {
      const Vec a = forward_data_vector(spectrum, model, partial, z);
      const Vec b = forward_data_vector_direct(spectrum, model, partial, z);
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
    }
  }

  SUBCASE("linear in the source power") {
    SourceSpectrum doubled = spectrum;
    doubled.xi_sq *= 2.0;
    const Vec m1 = forward_data_vector(spectrum, model, aperture, 0.2);
    const Vec m2 = forward_data_vector(doubled, model, aperture, 0.2);
    CHECK((m2 - 2.0 * m1).cwiseAbs().maxCoeff() < 1e-14 * m1.cwiseAbs().maxCoeff());
  }

  SUBCASE("single-mode excitation keeps one term") {
    SourceSpectrum mono = spectrum;
    mono.xi_sq.setZero();
    mono.xi_sq(4) = 3.7;  // l = 5 only
    const Vec m = forward_data_vector(mono, model, aperture, 0.0);
    for (int j = 0; j < basis.count; ++j) {
      const double expected = (j == 4) ? 3.7 / (basis.beta(4) * basis.beta(4)) : 0.0;
      CHECK(m(j) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("equipartition limit collapses to the weighted average") {
    const double z = 100.0 * model.equipartition_distance();
    const Vec m = forward_data_vector(spectrum, model, aperture, z);
    const double weighted =
        spectrum.xi_sq.cwiseQuotient(basis.beta).sum() / basis.count;
    for (int q = 0; q < basis.count; ++q) {
      const double expected = weighted * spectrum.zeta_sq(basis.beta(q)) / basis.beta(q);
      CHECK(std::abs(m(q) - expected) < 1e-4 * expected);
    }
  }
}

TEST_CASE("free propagation puts one pulse per mode at its travel time") {
  const WaveguideConfig cfg = fixtures::paper_config();
  const ScatteringModel model = free_model();
  const ApertureCoupling aperture = full_aperture(model.basis);
  const SourceSpectrum spectrum = source_spectrum(point_delta(0.31 * cfg.depth), model.basis);
  const double z = 30.0;
  const double spread =
      z * (model.basis.beta_prime.maxCoeff() - model.basis.beta_prime.minCoeff());
  const double window_h = 60.0 / spread;
  const Vec tau = default_tau_grid(model, z, window_h, 2048);
  const TraceSet traces = forward_crosscorr(spectrum, model, aperture, z, window_h, tau);
  for (int j : {1, 10, 25, 40}) {
    int peak = 0;
    traces.c.col(j - 1).maxCoeff(&peak);
    const double expected = model.basis.slowness_at(j) * z;
    CHECK(std::abs(traces.tau(peak) - expected) < 2.5 / window_h);
  }
  // Quadrature lobes stay tiny against the peak.
  CHECK(traces.c.minCoeff() > -1e-6 * traces.c.maxCoeff());
}

TEST_CASE("trace integral reproduces the data vector") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 1.0);
  const ApertureCoupling aperture = full_aperture(model.basis);
  const SourceSpectrum spectrum =
      source_spectrum(point_delta(0.31 * model.basis.depth), model.basis);
  const double z = 0.25 * model.equipartition_distance();
  const double spread =
      z * (model.basis.beta_prime.maxCoeff() - model.basis.beta_prime.minCoeff());
  const double window_h = 40.0 / spread;
  const Vec tau = default_tau_grid(model, z, window_h, 1024);
  const TraceSet traces = forward_crosscorr(spectrum, model, aperture, z, window_h, tau);
  const Vec m = forward_data_vector(spectrum, model, aperture, z);
  const double d_tau = tau(1) - tau(0);
  for (int j = 0; j < model.size(); ++j) {
    double integral = 0.0;
    for (int t = 0; t + 1 < tau.size(); ++t)
      integral += 0.5 * (traces.c(t, j) + traces.c(t + 1, j)) * d_tau;
    CHECK(integral == doctest::Approx(m(j)).epsilon(0.01));
  }
}

TEST_CASE("perturbative traces: peak agreement, late-range collapse, zero range") {
  const ScatteringModel model = fixtures::paper_model(FluctuationKind::Medium, 1.0);
  const ApertureCoupling aperture = full_aperture(model.basis);
  const SourceSpectrum spectrum =
      source_spectrum(point_delta(0.31 * model.basis.depth), model.basis);
  const double l_eq = model.equipartition_distance();

  SUBCASE("pulse peak times match the exact forward map") {
    // H inside the perturbative window (H << ||Gamma|| / beta') while long
    // enough ranges separate the mode arrivals.
    const double z = l_eq;
    const double window_h = 0.25 * model.basis.omega;
    const Vec tau = default_tau_grid(model, z, window_h, 2048);
    const TraceSet exact = forward_crosscorr(spectrum, model, aperture, z, window_h, tau);
    const TraceSet approx =
        forward_crosscorr_perturbative(spectrum, model, aperture, z, window_h, tau);
    for (int j : {1, 15, 40}) {
      int p_exact = 0, p_approx = 0;
      exact.c.col(j - 1).maxCoeff(&p_exact);
      approx.c.col(j - 1).maxCoeff(&p_approx);
      CHECK(std::abs(exact.tau(p_exact) - approx.tau(p_approx)) < 0.25 / window_h);
    }
  }

  SUBCASE("beyond the equipartition distance every mode peaks at Z/V_1") {
    const double z = 12.0 * l_eq;
    const Vec speeds = transport_speeds(model);
    const double window_h = 3000.0 / (z / speeds(0));
    const Vec tau = default_tau_grid(model, z, window_h, 2048);
    const TraceSet traces =
        forward_crosscorr_perturbative(spectrum, model, aperture, z, window_h, tau);
    for (int j : {1, 20, 40}) {
      int peak = 0;
      traces.c.col(j - 1).maxCoeff(&peak);
      CHECK(std::abs(traces.tau(peak) - z / speeds(0)) < 3.0 / window_h);
    }
  }

  SUBCASE("zero range reproduces the initial energies") {
    const double window_h = 2000.0;
    const Vec tau = Vec::LinSpaced(801, -8.0 / window_h, 8.0 / window_h);
    const TraceSet traces =
        forward_crosscorr_perturbative(spectrum, model, aperture, 0.0, window_h, tau);
    const Vec m0 = forward_data_vector(spectrum, model, aperture, 0.0);
    const double d_tau = tau(1) - tau(0);
    for (int j = 0; j < model.size(); ++j) {
      double integral = 0.0;
      for (int t = 0; t + 1 < tau.size(); ++t)
        integral += 0.5 * (traces.c(t, j) + traces.c(t + 1, j)) * d_tau;
      CHECK(integral == doctest::Approx(m0(j)).epsilon(1e-6));
    }
  }
}

TEST_SUITE_END();
