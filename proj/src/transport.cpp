#include "wavetrans/transport.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace wavetrans {

namespace {

CMat drift_plus_gamma(const ScatteringModel& model, double h) {
  const int n = model.size();
  CMat a = model.gamma.cast<Complex>();
  for (int j = 0; j < n; ++j) a(j, j) += Complex(0.0, h * model.basis.beta_prime(j));
  return a;
}

}  // namespace

CMat expm(const CMat& a) {
  require(a.allFinite(), errc::expm_failure, "matrix exponential of non-finite input");
  const int n = static_cast<int>(a.rows());
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
  const CMat as = a / std::pow(2.0, squarings);

  // [6/6] Pade approximant.
  static const double c[7] = {1.0,       1.0 / 2.0,   5.0 / 44.0,  1.0 / 66.0,
                              1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
  const CMat a2 = as * as;
  CMat even = c[0] * CMat::Identity(n, n) + c[2] * a2;
  CMat odd = c[1] * CMat::Identity(n, n) + c[3] * a2;
  const CMat a4 = a2 * a2;
  even += c[4] * a4;
  odd += c[5] * a4;
  const CMat a6 = a4 * a2;
  even += c[6] * a6;
  const CMat odd_full = as * odd;
  CMat result = (even - odd_full).partialPivLu().solve(even + odd_full);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

CMat kernel_hat(const ScatteringModel& model, double h, double z) {
  require(z >= 0.0, errc::out_of_domain, "range Z must be nonnegative");
  const int n = model.size();
  if (h == 0.0) {
    // Real spectral route: e^{Gamma Z} from the stored decomposition.
    const Vec scale = (model.spectrum.lambda.array() * z).exp();
    Mat real = model.spectrum.u * scale.asDiagonal() * model.spectrum.u.transpose();
    return real.cast<Complex>();
  }
  const CMat a = drift_plus_gamma(model, h);
  require(a.allFinite(), errc::expm_failure, "non-finite kernel input");
  if (n > 256) return expm(a * z);
  Eigen::ComplexEigenSolver<CMat> solver(a);
  if (solver.info() != Eigen::Success) return expm(a * z);
  const CMat v = solver.eigenvectors();
  const CVec w = solver.eigenvalues();
  const CVec ez = (w.array() * z).exp();
  return v * ez.asDiagonal() * v.partialPivLu().solve(CMat::Identity(n, n));
}

PerturbedSpectrum perturbed_spectrum(const ScatteringModel& model, double h) {
  require(!model.spectrum.near_degenerate, errc::degenerate_spectrum,
          "first-order perturbation needs distinct eigenvalues");
  const int n = model.size();
  const Mat& u = model.spectrum.u;
  const Vec& lambda = model.spectrum.lambda;
  const Vec bp = model.basis.beta_prime;
  const Mat ubu = u.transpose() * bp.asDiagonal() * u;  // u_q' B' u_j at (q, j)

  PerturbedSpectrum out;
  out.h = h;
  out.lambda.resize(n);
  out.u.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.lambda(j) = Complex(lambda(j), h * ubu(j, j));
    CVec col = u.col(j).cast<Complex>();
    for (int q = 0; q < n; ++q) {
      if (q == j) continue;
      col += Complex(0.0, h) * (ubu(q, j) / (lambda(j) - lambda(q))) * u.col(q).cast<Complex>();
    }
    out.u.col(j) = col;
  }
  return out;
}

CMat kernel_hat_perturbative(const ScatteringModel& model, double h, double z) {
  require(!model.spectrum.near_degenerate, errc::degenerate_spectrum,
          "spectral form needs distinct eigenvalues");
  require(z >= 0.0, errc::out_of_domain, "range Z must be nonnegative");
  const int n = model.size();
  const Mat& u = model.spectrum.u;
  const Vec bp = model.basis.beta_prime;
  CMat out = CMat::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    const double drift = u.col(r).dot(bp.asDiagonal() * u.col(r));
    const Complex factor = std::exp(Complex(model.spectrum.lambda(r) * z, h * drift * z));
    out.noalias() += factor * (u.col(r) * u.col(r).transpose()).cast<Complex>();
  }
  return out;
}

Vec transport_speeds(const ScatteringModel& model) {
  const int n = model.size();
  const Mat& u = model.spectrum.u;
  const Vec bp = model.basis.beta_prime;
  Vec v(n);
  for (int r = 0; r < n; ++r) v(r) = 1.0 / u.col(r).dot(bp.asDiagonal() * u.col(r));
  return v;
}

PerturbationDiagnostics perturbation_diagnostics(const ScatteringModel& model, double window_h,
                                                 int n_points) {
  require(window_h > 0.0, errc::config_invalid, "H must be positive");
  const int n = model.size();
  PerturbationDiagnostics diag;
  diag.ratio.resize(n);
  for (int j = 0; j < n; ++j)
    diag.ratio(j) = std::abs(model.gamma(j, j)) / (window_h * model.basis.beta_prime(j));
  diag.perturbative_regime =
      model.gamma.norm() > window_h * model.basis.beta_prime.norm();

  if (n_points < 3 || n_points % 2 == 0) n_points = 33;
  diag.h_grid.resize(n_points);
  diag.max_rel_error.resize(n_points);
  diag.per_mode_error = Vec::Zero(n);
  for (int i = 0; i < n_points; ++i) {
    const double h = -window_h + 2.0 * window_h * i / (n_points - 1);
    diag.h_grid(i) = h;
    if (h == 0.0) {
      diag.max_rel_error(i) = 0.0;
      continue;
    }
    const PerturbedSpectrum pred = perturbed_spectrum(model, h);
    Eigen::ComplexEigenSolver<CMat> solver(drift_plus_gamma(model, h));
    require(solver.info() == Eigen::Success, errc::eigensolve_failure,
            "complex eigensolver failed");
    CVec exact = solver.eigenvalues();
    // Greedy nearest matching of exact eigenvalues to the predictions.
    std::vector<bool> used(n, false);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int m = 0; m < n; ++m) {
        if (used[m]) continue;
        const double d = std::abs(exact(m) - pred.lambda(j));
        if (d < best_dist) {
          best_dist = d;
          best = m;
        }
      }
      used[best] = true;
      const double denom = std::max(std::abs(exact(best)), 1e-300);
      const double rel = best_dist / denom;
      diag.per_mode_error(j) = std::max(diag.per_mode_error(j), rel);
      worst = std::max(worst, rel);
    }
    diag.max_rel_error(i) = worst;
  }
  diag.worst_rel_error = diag.max_rel_error.maxCoeff();
  return diag;
}

}  // namespace wavetrans
