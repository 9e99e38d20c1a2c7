#include "wavetrans/source.hpp"

#include <cmath>

namespace wavetrans {

void SeparableSource::validate(const WaveguideConfig& config) const {
  const double x_depth = config.depth;
  switch (xi.kind) {
    case CrossRangeProfile::Kind::Point:
      require(xi.x0 >= 0.0 && xi.x0 <= x_depth, errc::out_of_domain,
              "point source outside [0, X]");
      break;
    case CrossRangeProfile::Kind::Gaussian:
      require(xi.sigma > 0.0, errc::unsupported_profile, "Gaussian xi needs sigma > 0");
      require(3.0 * xi.sigma < std::min(xi.x0, x_depth - xi.x0), errc::out_of_domain,
              "Gaussian xi essential support must lie inside (0, X)");
      break;
    case CrossRangeProfile::Kind::Tabulated:
      require(xi.xs.size() == xi.values.size() && xi.xs.size() >= 2, errc::unsupported_profile,
              "tabulated xi needs matching xs/values arrays");
      require(xi.xs.front() >= 0.0 && xi.xs.back() <= x_depth, errc::out_of_domain,
              "tabulated xi support outside [0, X]");
      break;
  }
  if (zeta.kind == RangeProfile::Kind::Gaussian)
    require(zeta.width > 0.0, errc::unsupported_profile, "Gaussian zeta needs width > 0");
  if (zeta.kind == RangeProfile::Kind::Tabulated)
    require(zeta.zs.size() == zeta.values.size() && zeta.zs.size() >= 2,
            errc::unsupported_profile, "tabulated zeta needs matching zs/values arrays");
}

namespace {

// Trapezoid of f against phi_l over a tabulated grid.
double tabulated_coefficient(const std::vector<double>& xs, const std::vector<double>& vals,
                             int l, double depth) {
  double acc = 0.0;
  for (size_t i = 1; i < xs.size(); ++i) {
    const double f0 = vals[i - 1] * std::sin(kPi * l * xs[i - 1] / depth);
    const double f1 = vals[i] * std::sin(kPi * l * xs[i] / depth);
    acc += 0.5 * (f0 + f1) * (xs[i] - xs[i - 1]);
  }
  return std::sqrt(2.0 / depth) * acc;
}

}  // namespace

SourceSpectrum source_spectrum(const SeparableSource& source, const ModeBasis& basis) {
  const int n = basis.count;
  const double depth = basis.depth;
  SourceSpectrum out;
  out.xi_sq.resize(n);
  for (int l = 1; l <= n; ++l) {
    double coeff;
    switch (source.xi.kind) {
      case CrossRangeProfile::Kind::Point:
        coeff = std::sqrt(2.0 / depth) * std::sin(kPi * l * source.xi.x0 / depth);
        break;
      case CrossRangeProfile::Kind::Gaussian:
        // Gaussian against the sine basis; tails outside [0, X] are negligible
        // under the 3-sigma support requirement.
        coeff = std::sqrt(2.0 / depth) * std::sin(kPi * l * source.xi.x0 / depth) *
                std::exp(-0.5 * std::pow(kPi * l * source.xi.sigma / depth, 2));
        break;
      case CrossRangeProfile::Kind::Tabulated:
        coeff = tabulated_coefficient(source.xi.xs, source.xi.values, l, depth);
        break;
      default:
        fail(errc::unsupported_profile, "unknown cross-range profile");
    }
    out.xi_sq(l - 1) = coeff * coeff;
  }
  switch (source.zeta.kind) {
    case RangeProfile::Kind::Delta:
      out.zeta_sq = [](double) { return 1.0; };
      break;
    case RangeProfile::Kind::Gaussian: {
      const double s = source.zeta.width;
      out.zeta_sq = [s](double beta) { return std::exp(-beta * beta * s * s); };
      break;
    }
    case RangeProfile::Kind::Tabulated: {
      const auto zs = source.zeta.zs;
      const auto vals = source.zeta.values;
      out.zeta_sq = [zs, vals](double beta) {
        Complex acc(0.0, 0.0);
        for (size_t i = 1; i < zs.size(); ++i) {
          const Complex f0 = vals[i - 1] * std::exp(Complex(0.0, -beta * zs[i - 1]));
          const Complex f1 = vals[i] * std::exp(Complex(0.0, -beta * zs[i]));
          acc += 0.5 * (f0 + f1) * (zs[i] - zs[i - 1]);
        }
        return std::norm(acc);
      };
      break;
    }
    default:
      fail(errc::unsupported_profile, "unknown range profile");
  }
  return out;
}

namespace {

void check_shapes(const SourceSpectrum& spectrum, const ScatteringModel& model,
                  const ApertureCoupling& aperture, double z) {
  require(z >= 0.0, errc::out_of_domain, "range Z must be nonnegative");
  require(spectrum.xi_sq.size() == model.size(), errc::dimension_mismatch,
          "source spectrum and scattering model disagree on N");
  require(aperture.q.rows() == model.size(), errc::dimension_mismatch,
          "aperture coupling and scattering model disagree on N");
}

Vec zeta_over_beta(const SourceSpectrum& spectrum, const ModeBasis& basis) {
  Vec v(basis.count);
  for (int q = 0; q < basis.count; ++q)
    v(q) = spectrum.zeta_sq(basis.beta(q)) / basis.beta(q);
  return v;
}

}  // namespace

Vec forward_data_vector(const SourceSpectrum& spectrum, const ScatteringModel& model,
                        const ApertureCoupling& aperture, double z) {
  check_shapes(spectrum, model, aperture, z);
  const Vec scale = (model.spectrum.lambda.array() * z).exp();
  const Vec xi_over_beta = spectrum.xi_sq.cwiseQuotient(model.basis.beta);
  const Vec propagated =
      model.spectrum.u * (scale.asDiagonal() * (model.spectrum.u.transpose() * xi_over_beta));
  return aperture.q_squared * zeta_over_beta(spectrum, model.basis).cwiseProduct(propagated);
}

Vec forward_data_vector_direct(const SourceSpectrum& spectrum, const ScatteringModel& model,
                               const ApertureCoupling& aperture, double z) {
  check_shapes(spectrum, model, aperture, z);
  const int n = model.size();
  const Vec scale = (model.spectrum.lambda.array() * z).exp();
  const Mat kernel = model.spectrum.u * scale.asDiagonal() * model.spectrum.u.transpose();
  Vec m = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int q = 0; q < n; ++q) {
      for (int l = 0; l < n; ++l) {
        acc += aperture.q_squared(j, q) * spectrum.rho_sq(l + 1, model.basis.beta(q)) /
               (model.basis.beta(l) * model.basis.beta(q)) * kernel(q, l);
      }
    }
    m(j) = acc;
  }
  return m;
}

double psi_window(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * kPi); }
double psi_window_hat(double u) { return std::exp(-0.5 * u * u); }

Vec default_tau_grid(const ScatteringModel& model, double z, double window_h, int n) {
  const Vec speeds = transport_speeds(model);
  double tau_min = z * model.basis.beta_prime.minCoeff();
  double tau_max = z * model.basis.beta_prime.maxCoeff();
  for (int r = 0; r < speeds.size(); ++r) {
    tau_min = std::min(tau_min, z / speeds(r));
    tau_max = std::max(tau_max, z / speeds(r));
  }
  const double margin = 8.0 / window_h;
  return Vec::LinSpaced(n, tau_min - margin, tau_max + margin);
}

TraceSet forward_crosscorr(const SourceSpectrum& spectrum, const ScatteringModel& model,
                           const ApertureCoupling& aperture, double z, double window_h,
                           const Vec& tau_grid, int n_h) {
  check_shapes(spectrum, model, aperture, z);
  require(window_h > 0.0, errc::config_invalid, "window bandwidth H must be positive");
  const double h_span = 6.0 * window_h;
  if (n_h <= 0) {
    // The h spacing sets the period of the reconstructed traces; keep the
    // images outside the requested tau window and resolve psi_hat.
    const double tau_span =
        tau_grid.maxCoeff() - tau_grid.minCoeff() + 16.0 / window_h;
    const double dh_max = std::min(window_h / 8.0, 2.0 * kPi / (1.05 * tau_span));
    n_h = 2 * static_cast<int>(std::ceil(h_span / dh_max)) + 1;
  }
  require(n_h >= 2, errc::grid_too_coarse, "need at least two h samples");
  const double dh = 2.0 * h_span / (n_h - 1);
  require(dh <= window_h / 8.0, errc::grid_too_coarse,
          "h grid spacing exceeds H/8; increase n_h");

  const int n = model.size();
  const Vec xi_over_beta = spectrum.xi_sq.cwiseQuotient(model.basis.beta);
  const Vec zb = zeta_over_beta(spectrum, model.basis);

  // W_j(h) = [QQ diag(zeta_sq/beta) K(h) B^{-1} xi_sq]_j, then inverse transform in h.
  CMat w(n_h, n);
  for (int i = 0; i < n_h; ++i) {
    const double h = -h_span + i * dh;
    const CMat kernel = kernel_hat(model, h, z);
    const CVec inner = kernel * xi_over_beta.cast<Complex>();
    const CVec weighted = zb.cast<Complex>().cwiseProduct(inner);
    w.row(i) = (psi_window_hat(h / window_h) *
                (aperture.q_squared.cast<Complex>() * weighted))
                   .transpose();
  }

  TraceSet out;
  out.tau = tau_grid;
  out.c.resize(tau_grid.size(), n);
  const double trapezoid_scale = dh / (2.0 * kPi);
  for (int t = 0; t < tau_grid.size(); ++t) {
    CVec acc = CVec::Zero(n);
    for (int i = 0; i < n_h; ++i) {
      const double h = -h_span + i * dh;
      const double weight = (i == 0 || i == n_h - 1) ? 0.5 : 1.0;
      acc += weight * std::exp(Complex(0.0, -h * tau_grid(t))) * w.row(i).transpose();
    }
    out.c.row(t) = (trapezoid_scale * acc).real().transpose();
  }
  return out;
}

TraceSet forward_crosscorr_perturbative(const SourceSpectrum& spectrum,
                                        const ScatteringModel& model,
                                        const ApertureCoupling& aperture, double z,
                                        double window_h, const Vec& tau_grid) {
  check_shapes(spectrum, model, aperture, z);
  require(!model.spectrum.near_degenerate, errc::degenerate_spectrum,
          "perturbative traces need distinct eigenvalues");
  const int n = model.size();
  const Vec speeds = transport_speeds(model);
  const Vec xi_over_beta = spectrum.xi_sq.cwiseQuotient(model.basis.beta);
  const Vec zb = zeta_over_beta(spectrum, model.basis);

  // weight(j, r) = sum_{q,l} Q^2_jq zeta_sq(beta_q)/beta_q u_qr u_lr xi_sq_l/beta_l
  Mat weights(n, n);
  for (int r = 0; r < n; ++r) {
    const Vec u_r = model.spectrum.u.col(r);
    const double source_part = u_r.dot(xi_over_beta);
    weights.col(r) = (aperture.q_squared * zb.cwiseProduct(u_r)) * source_part;
  }

  TraceSet out;
  out.tau = tau_grid;
  out.c = Mat::Zero(tau_grid.size(), n);
  for (int t = 0; t < tau_grid.size(); ++t) {
    for (int r = 0; r < n; ++r) {
      const double pulse = window_h *
                           psi_window(window_h * (tau_grid(t) - z / speeds(r))) *
                           std::exp(model.spectrum.lambda(r) * z);
      if (pulse == 0.0) continue;
      out.c.row(t) += pulse * weights.col(r).transpose();
    }
  }
  return out;
}

}  // namespace wavetrans
