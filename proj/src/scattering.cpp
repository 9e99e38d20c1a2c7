#include "wavetrans/scattering.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace wavetrans {

double ScatteringModel::equipartition_distance() const {
  const double lambda2 = spectrum.lambda(1);
  require(lambda2 < 0.0, errc::equipartition_undefined, "lambda_2 is not negative");
  return 1.0 / std::abs(lambda2);
}

SpectrumTable::SpectrumTable(std::vector<double> args, std::vector<double> values)
    : args_(std::move(args)), values_(std::move(values)) {
  require(args_.size() == values_.size() && args_.size() >= 2, errc::config_invalid,
          "spectrum table needs matching arg/value arrays of size >= 2");
  for (size_t i = 1; i < args_.size(); ++i)
    require(args_[i] > args_[i - 1], errc::config_invalid, "table arguments must increase");
  for (double v : values_)
    require(v >= 0.0, errc::negative_spectrum, "tabulated spectrum has a negative value");
}

double SpectrumTable::operator()(double arg) const {
  if (empty() || arg < args_.front() || arg > args_.back()) return 0.0;
  const auto it = std::upper_bound(args_.begin(), args_.end(), arg);
  if (it == args_.begin()) return values_.front();
  const size_t hi = static_cast<size_t>(it - args_.begin());
  if (hi == args_.size()) return values_.back();
  const double t = (arg - args_[hi - 1]) / (args_[hi] - args_[hi - 1]);
  return (1.0 - t) * values_[hi - 1] + t * values_[hi];
}

namespace {

void check_ell(const ModeBasis& basis, double ell) {
  require(ell > 0.0, errc::invalid_correlation_length, "ell must be positive");
  require(basis.count >= 2, errc::too_few_modes, "need at least two propagating modes");
  (void)basis;
}

}  // namespace

Mat gamma_medium_gaussian(const ModeBasis& basis, double ell) {
  check_ell(basis, ell);
  if (ell > basis.depth / 4.0)
    std::fprintf(stderr,
                 "wavetrans: medium coupling closed form assumes ell << X "
                 "(ell = %g, X = %g)\n",
                 ell, basis.depth);
  const int n = basis.count;
  const double k = basis.k;
  const double x_depth = basis.depth;
  const double kl2 = (k * ell) * (k * ell);
  Mat g(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const double dj = static_cast<double>(a - b);
      const double sj = static_cast<double>(a + b + 2);
      const double dbeta = basis.beta(a) - basis.beta(b);
      const double value = (kPi / x_depth) * ell * ell * k * k * k * k /
                           (basis.beta(a) * basis.beta(b)) *
                           std::exp(-0.5 * ell * ell * dbeta * dbeta) *
                           (std::exp(-0.5 * kl2 * dj * dj / (n * double(n))) +
                            std::exp(-0.5 * kl2 * sj * sj / (n * double(n))));
      g(a, b) = value;
      g(b, a) = value;
    }
  }
  return g;
}

Mat gamma_boundary_gaussian(const ModeBasis& basis, double ell) {
  check_ell(basis, ell);
  const int n = basis.count;
  const double x4 = std::pow(basis.depth, 4);
  const double front = std::pow(kPi, 4) * std::sqrt(2.0 * kPi) * ell / x4;
  Mat g(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const double jq = static_cast<double>((a + 1) * (b + 1));
      const double dbeta = basis.beta(a) - basis.beta(b);
      const double value = front * jq * jq / (basis.beta(a) * basis.beta(b)) *
                           std::exp(-0.5 * ell * ell * dbeta * dbeta);
      g(a, b) = value;
      g(b, a) = value;
    }
  }
  return g;
}

Mat gamma_medium_range_white(const ModeBasis& basis, double ell) {
  check_ell(basis, ell);
  const int n = basis.count;
  const double k = basis.k;
  const double kl2 = (k * ell) * (k * ell);
  Mat g(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const double dj = static_cast<double>(a - b);
      const double sj = static_cast<double>(a + b + 2);
      const double value = (kPi / basis.depth) * ell * ell * k * k * k * k /
                           (basis.beta(a) * basis.beta(b)) *
                           (std::exp(-0.5 * kl2 * dj * dj / (n * double(n))) +
                            std::exp(-0.5 * kl2 * sj * sj / (n * double(n))));
      g(a, b) = value;
      g(b, a) = value;
    }
  }
  return g;
}

Mat gamma_general(const ModeBasis& basis, double ell, const FluctuationSpectra& spectra) {
  check_ell(basis, ell);
  const int n = basis.count;
  const double k = basis.k;
  const double x_depth = basis.depth;
  const double x4 = std::pow(x_depth, 4);
  Mat g = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const int j = a + 1, q = b + 1;
      const double kappa = ell * (basis.beta(a) - basis.beta(b));
      double value = 0.0;
      double boundary = 0.0;
      if (spectra.boundary_bottom) boundary += spectra.boundary_bottom(kappa);
      if (spectra.boundary_top) boundary += spectra.boundary_top(kappa);
      require(boundary >= 0.0, errc::negative_spectrum, "boundary spectrum is negative");
      if (boundary != 0.0) {
        const double jq = static_cast<double>(j * q);
        value += std::pow(kPi, 4) * ell * jq * jq / (basis.beta(a) * basis.beta(b) * x4) * boundary;
      }
      double rnu_jq = 0.0;
      if (spectra.rnu_jq) {
        rnu_jq = spectra.rnu_jq(j, q, kappa);
      } else if (spectra.rnu) {
        // Stationarity reduction: the sin-product autocorrelation collapses to
        // the medium spectrum sampled at the transverse wavenumbers k*ell*(j-q)/N
        // and k*ell*(j+q)/N. The 2*ell/X prefactor keeps the Gaussian case
        // consistent with the closed-form medium model.
        const double kt1 = k * ell * (j - q) / double(n);
        const double kt2 = k * ell * (j + q) / double(n);
        rnu_jq = (2.0 * ell / x_depth) * (spectra.rnu(kt1, kappa) + spectra.rnu(kt2, kappa));
      }
      require(rnu_jq >= 0.0, errc::negative_spectrum, "medium spectrum is negative");
      value += k * k * k * k * ell / (4.0 * basis.beta(a) * basis.beta(b)) * rnu_jq;
      g(a, b) = value;
      g(b, a) = value;
    }
  }
  return g;
}

Mat assemble_gamma(const Mat& gamma_c) {
  const int n = static_cast<int>(gamma_c.rows());
  require(gamma_c.cols() == n, errc::dimension_mismatch, "gamma_c must be square");
  Mat g = gamma_c;
  for (int j = 0; j < n; ++j) {
    g(j, j) = 0.0;
    g(j, j) = -g.row(j).sum();
  }
  return g;
}

Vec mean_free_paths(const Mat& gamma_c) {
  const int n = static_cast<int>(gamma_c.rows());
  Vec s(n);
  for (int j = 0; j < n; ++j) {
    const double row = gamma_c.row(j).sum();
    s(j) = row > 0.0 ? 2.0 / row : std::numeric_limits<double>::infinity();
  }
  return s;
}

Spectrum spectral_decomposition(const Mat& gamma) {
  const int n = static_cast<int>(gamma.rows());
  Eigen::SelfAdjointEigenSolver<Mat> solver(gamma);
  require(solver.info() == Eigen::Success, errc::eigensolve_failure,
          "symmetric eigensolver failed");
  Spectrum spec;
  spec.lambda = solver.eigenvalues().reverse();
  spec.u = solver.eigenvectors().rowwise().reverse();
  // Null vector of the zero-row-sum generator is exactly (1,...,1)/sqrt(N);
  // snap to it when the computed vector agrees (i.e. the null space is simple).
  const Vec flat = Vec::Constant(n, 1.0 / std::sqrt(double(n)));
  if (std::abs(std::abs(spec.u.col(0).dot(flat)) - 1.0) < 1e-8) spec.u.col(0) = flat;
  for (int r = 1; r < n; ++r) {
    int imax = 0;
    spec.u.col(r).cwiseAbs().maxCoeff(&imax);
    if (spec.u(imax, r) < 0.0) spec.u.col(r) = -spec.u.col(r);
  }
  const double scale = spec.lambda.cwiseAbs().maxCoeff();
  double min_gap = std::numeric_limits<double>::infinity();
  for (int r = 1; r < n; ++r)
    min_gap = std::min(min_gap, std::abs(spec.lambda(r - 1) - spec.lambda(r)));
  spec.near_degenerate = (n > 1) && (min_gap < 1e-10 * scale);
  return spec;
}

ScatteringModel make_scattering_model(const ModeBasis& basis, const Mat& gamma_c) {
  ScatteringModel model;
  model.basis = basis;
  model.gamma_c = gamma_c;
  model.gamma = assemble_gamma(gamma_c);
  model.spectrum = spectral_decomposition(model.gamma);
  model.mean_free_paths = mean_free_paths(gamma_c);
  return model;
}

ScatteringModel make_scattering_model(const ModeBasis& basis, FluctuationKind kind, double ell) {
  switch (kind) {
    case FluctuationKind::Medium:
      return make_scattering_model(basis, gamma_medium_gaussian(basis, ell));
    case FluctuationKind::Boundary:
      return make_scattering_model(basis, gamma_boundary_gaussian(basis, ell));
    case FluctuationKind::Both:
      return make_scattering_model(
          basis, gamma_medium_gaussian(basis, ell) + gamma_boundary_gaussian(basis, ell));
  }
  fail(errc::config_invalid, "unknown fluctuation kind");
}

namespace {

// Antiderivative piece of int phi_j phi_q dx: x for m = 0, else (X/(pi m)) sin(pi m x / X).
double sine_primitive(int m, double x, double depth) {
  if (m == 0) return x;
  return depth / (kPi * m) * std::sin(kPi * m * x / depth);
}

}  // namespace

ApertureCoupling aperture_coupling(double lo, double hi, const ModeBasis& basis) {
  require(hi > lo, errc::empty_aperture, "aperture upper end must exceed lower end");
  require(lo >= 0.0 && hi <= basis.depth, errc::out_of_domain, "aperture outside [0, X]");
  const int n = basis.count;
  ApertureCoupling ap;
  ap.lo = lo;
  ap.hi = hi;
  ap.q.resize(n, n);
  const bool full = (lo == 0.0 && hi == basis.depth);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      double value;
      if (full) {
        value = (a == b) ? 1.0 : 0.0;  // orthonormality, exact
      } else {
        const int j = a + 1, q = b + 1;
        value = (sine_primitive(j - q, hi, basis.depth) - sine_primitive(j - q, lo, basis.depth) -
                 sine_primitive(j + q, hi, basis.depth) + sine_primitive(j + q, lo, basis.depth)) /
                basis.depth;
      }
      ap.q(a, b) = value;
      ap.q(b, a) = value;
    }
  }
  ap.q_squared = ap.q.cwiseProduct(ap.q);
  ap.diagonally_dominant = true;
  for (int j = 0; j < n && ap.diagonally_dominant; ++j) {
    const double off = ap.q.row(j).cwiseAbs().sum() - std::abs(ap.q(j, j));
    if (off >= std::abs(ap.q(j, j))) ap.diagonally_dominant = false;
  }
  return ap;
}

ApertureCoupling full_aperture(const ModeBasis& basis) {
  return aperture_coupling(0.0, basis.depth, basis);
}

}  // namespace wavetrans
