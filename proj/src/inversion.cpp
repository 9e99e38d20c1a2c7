#include "wavetrans/inversion.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace wavetrans {

double peak_time(const Vec& tau, const Vec& trace) {
  require(tau.size() == trace.size() && tau.size() >= 3, errc::dimension_mismatch,
          "trace and tau grids disagree");
  int best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  const double floor_value = trace.maxCoeff() * 0.05;
  for (int i = 1; i + 1 < trace.size(); ++i) {
    if (trace(i) >= trace(i - 1) && trace(i) > trace(i + 1) && trace(i) > floor_value) {
      if (trace(i) > best_value) {  // strict: ties keep the earlier peak
        best_value = trace(i);
        best = i;
      }
    }
  }
  require(best >= 0, errc::no_peaks, "no interior peak above 5% prominence");
  // Quadratic interpolation through the three samples around the maximum.
  const double y0 = trace(best - 1), y1 = trace(best), y2 = trace(best + 1);
  const double denom = y0 - 2.0 * y1 + y2;
  double shift = 0.0;
  if (denom < 0.0) shift = 0.5 * (y0 - y2) / denom;
  shift = std::clamp(shift, -0.5, 0.5);
  const double dt = tau(best + 1) - tau(best);
  return tau(best) + shift * dt;
}

namespace {

// Flat reference excitation: peak times depend on the spectrum of Gamma,
// not on the actual source, so the search model fixes |rho|^2 = 1.
SourceSpectrum reference_spectrum(const ScatteringModel& model) {
  SourceSpectrum ref;
  ref.xi_sq = Vec::Ones(model.size());
  ref.zeta_sq = [](double) { return 1.0; };
  return ref;
}

struct PeakData {
  std::vector<int> modes;   // included mode indices (0-based)
  Vec peak_times;           // per included mode
  Vec weights;              // trace peak energies
};

PeakData measured_peaks(const TraceSet& traces) {
  const int n = static_cast<int>(traces.c.cols());
  Vec energy(n);
  for (int j = 0; j < n; ++j) energy(j) = traces.c.col(j).maxCoeff();
  const double floor_energy = 0.01 * energy.maxCoeff();
  PeakData data;
  std::vector<double> times, weights;
  for (int j = 0; j < n; ++j) {
    if (energy(j) < floor_energy) continue;  // unreliable weak mode
    data.modes.push_back(j);
    times.push_back(peak_time(traces.tau, traces.c.col(j)));
    weights.push_back(energy(j));
  }
  require(!data.modes.empty(), errc::no_peaks, "every mode is below the energy floor");
  data.peak_times = Eigen::Map<Vec>(times.data(), times.size());
  data.weights = Eigen::Map<Vec>(weights.data(), weights.size());
  return data;
}

double misfit_at(const PeakData& data, const ScatteringModel& model,
                 const ApertureCoupling& aperture, double window_h, double z) {
  const SourceSpectrum ref = reference_spectrum(model);
  const Vec tau_grid = default_tau_grid(model, z, window_h);
  const TraceSet predicted =
      forward_crosscorr_perturbative(ref, model, aperture, z, window_h, tau_grid);
  double acc = 0.0;
  for (int k = 0; k < static_cast<int>(data.modes.size()); ++k) {
    const double model_peak = peak_time(predicted.tau, predicted.c.col(data.modes[k]));
    const double diff = data.peak_times(k) - model_peak;
    acc += data.weights(k) * diff * diff;
  }
  return acc;
}

}  // namespace

RangeEstimate estimate_range(const TraceSet& traces, const ScatteringModel& model,
                             const ApertureCoupling& aperture, double window_h,
                             const Vec& z_grid) {
  require(z_grid.size() >= 2, errc::config_invalid, "search grid needs >= 2 points");
  const PeakData data = measured_peaks(traces);
  RangeEstimate est;
  est.grid = z_grid;
  est.misfit.resize(z_grid.size());
  for (int i = 0; i < z_grid.size(); ++i)
    est.misfit(i) = misfit_at(data, model, aperture, window_h, z_grid(i));
  int best = 0;
  est.misfit.minCoeff(&best);
  est.z_hat = z_grid(best);
  est.at_boundary = (best == 0 || best == z_grid.size() - 1);
  return est;
}

RangeEstimate estimate_range_joint(const TraceSet& traces,
                                   const std::function<ScatteringModel(double)>& model_of_ell,
                                   const ApertureCoupling& aperture, double window_h,
                                   const Vec& z_grid, const Vec& ell_grid) {
  require(ell_grid.size() >= 1, errc::config_invalid, "ell grid is empty");
  RangeEstimate best;
  double best_misfit = std::numeric_limits<double>::infinity();
  for (int e = 0; e < ell_grid.size(); ++e) {
    const ScatteringModel model = model_of_ell(ell_grid(e));
    RangeEstimate est = estimate_range(traces, model, aperture, window_h, z_grid);
    const double value = est.misfit.minCoeff();
    if (value < best_misfit) {
      best_misfit = value;
      est.ell_hat = ell_grid(e);
      best = est;
    }
  }
  return best;
}

namespace {

void check_data(const Vec& m, const ScatteringModel& model, const ApertureCoupling& aperture) {
  require(m.size() == model.size(), errc::dimension_mismatch, "data vector length != N");
  require(aperture.q.rows() == model.size(), errc::dimension_mismatch,
          "aperture size != N");
  for (int j = 0; j < model.size(); ++j) {
    const double off =
        aperture.q_squared.row(j).cwiseAbs().sum() - std::abs(aperture.q_squared(j, j));
    require(off < std::abs(aperture.q_squared(j, j)), errc::ill_conditioned_aperture,
            "QQ is not strictly diagonally dominant");
  }
}

}  // namespace

RangeProfileEstimate invert_range_profile(const Vec& m, const Vec& xi_sq,
                                          const ScatteringModel& model,
                                          const ApertureCoupling& aperture, double z) {
  check_data(m, model, aperture);
  require(xi_sq.size() == model.size(), errc::dimension_mismatch, "xi_sq length != N");
  require(z >= 0.0, errc::out_of_domain, "range Z must be nonnegative");
  const int n = model.size();
  const Vec scale = (model.spectrum.lambda.array() * z).exp();
  const Vec eta = model.spectrum.u *
                  (scale.asDiagonal() *
                   (model.spectrum.u.transpose() * xi_sq.cwiseQuotient(model.basis.beta)));
  const Vec qm = aperture.q_squared.partialPivLu().solve(m);

  RangeProfileEstimate est;
  est.eta = eta;
  est.zeta_sq = Vec::Zero(n);
  est.withheld.assign(n, false);
  const double eta_floor = 1e-12 * eta.cwiseAbs().maxCoeff();
  for (int j = 0; j < n; ++j) {
    if (std::abs(eta(j)) <= eta_floor) {
      est.withheld[j] = true;  // NearZeroEta: estimate withheld for this index
      continue;
    }
    est.zeta_sq(j) = model.basis.beta(j) * qm(j) / eta(j);
  }
  return est;
}

XiAutocorrelation autocorrelation_xi(const Vec& xi_sq, int cutoff, const Vec& x_grid,
                                     double depth) {
  require(cutoff >= 1 && cutoff <= xi_sq.size(), errc::config_invalid,
          "cutoff J outside 1..N");
  XiAutocorrelation out;
  out.x_grid = x_grid;
  out.r.resize(x_grid.size());
  for (int i = 0; i < x_grid.size(); ++i) {
    double acc = 0.0;
    for (int j = 1; j <= cutoff; ++j)
      acc += xi_sq(j - 1) * std::cos(kPi * j * x_grid(i) / depth);
    out.r(i) = 2.0 * acc;
  }
  int i_min = 1;
  double v_min = std::numeric_limits<double>::infinity();
  for (int i = 1; i + 1 < x_grid.size(); ++i) {
    if (out.r(i) < v_min) {
      v_min = out.r(i);
      i_min = i;
    }
  }
  out.x_min_location = x_grid(i_min);
  out.x_candidates = {out.x_min_location / 2.0, depth - out.x_min_location / 2.0};
  return out;
}

namespace {

// Nearest-barrier prominences of the interior local minima of r, relative to
// r(0). Returns (index, prominence) sorted by descending prominence.
std::vector<std::pair<int, double>> minima_prominence(const Vec& r) {
  std::vector<std::pair<int, double>> out;
  const double scale = std::abs(r(0)) > 0.0 ? std::abs(r(0)) : 1.0;
  for (int i = 1; i + 1 < r.size(); ++i) {
    if (!(r(i) < r(i - 1) && r(i) <= r(i + 1))) continue;
    double left_barrier = r(i);
    for (int k = i - 1; k >= 0; --k) {
      left_barrier = std::max(left_barrier, r(k));
      if (k > 0 && r(k) > r(k - 1) && r(k) >= r(k + 1)) break;  // nearest max
    }
    double right_barrier = r(i);
    for (int k = i + 1; k < r.size(); ++k) {
      right_barrier = std::max(right_barrier, r(k));
      if (k + 1 < r.size() && r(k) > r(k + 1) && r(k) >= r(k - 1)) break;
    }
    out.emplace_back(i, (std::min(left_barrier, right_barrier) - r(i)) / scale);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace

CrossRangeEstimate invert_crossrange(const Vec& m, const ScatteringModel& model,
                                     const ApertureCoupling& aperture, double z, int cutoff,
                                     double amplification_cap, int n_x_grid) {
  check_data(m, model, aperture);
  require(z >= 0.0, errc::out_of_domain, "range Z must be nonnegative");
  const int n = model.size();
  require(cutoff >= 1 && cutoff <= n, errc::config_invalid, "cutoff J outside 1..N");

  CrossRangeEstimate est;
  est.cutoff = cutoff;
  est.amplification = std::exp(std::abs(model.spectrum.lambda(cutoff - 1)) * z);
  require(est.amplification <= amplification_cap, errc::cutoff_too_aggressive,
          "e^{|lambda_J| Z} = " + std::to_string(est.amplification) + " exceeds the cap " +
              std::to_string(amplification_cap));

  const Vec qm = aperture.q_squared.partialPivLu().solve(m);
  const Vec bqm = model.basis.beta.cwiseProduct(qm);
  Vec x_j = Vec::Zero(n);
  for (int r = 0; r < cutoff; ++r) {
    const double coeff = std::exp(std::abs(model.spectrum.lambda(r)) * z) *
                         model.spectrum.u.col(r).dot(bqm);
    x_j += coeff * model.spectrum.u.col(r);
  }

  est.xi_sq = model.basis.beta.cwiseProduct(x_j);
  est.clipped.assign(n, false);
  for (int j = 0; j < n; ++j) {
    if (est.xi_sq(j) < 0.0) {
      est.xi_sq(j) = 0.0;  // squared magnitudes: minimal feasible projection
      est.clipped[j] = true;
    }
  }
  est.error_bound.resize(n);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int q = cutoff; q < n; ++q) acc += model.spectrum.u(j, q) * model.spectrum.u(j, q);
    est.error_bound(j) = std::sqrt(acc);
  }

  est.x_grid = Vec::LinSpaced(n_x_grid, 0.0, model.basis.depth);
  const XiAutocorrelation acorr =
      autocorrelation_xi(est.xi_sq, cutoff, est.x_grid, model.basis.depth);
  est.r_xi = acorr.r;
  est.x_min_location = acorr.x_min_location;
  est.x_candidates = acorr.x_candidates;

  // Good when a single dominant dip exists: most prominent interior minimum
  // reaches 0.1 of R(0) and at least doubles the runner-up.
  const auto proms = minima_prominence(est.r_xi);
  const double top = proms.empty() ? 0.0 : proms[0].second;
  const double second = proms.size() > 1 ? proms[1].second : 0.0;
  est.quality = (top >= 0.1 && top >= 2.0 * second) ? EstimateQuality::Good
                                                    : EstimateQuality::Poor;
  if (!proms.empty()) {
    est.x_min_location = est.x_grid(proms[0].first);
    est.x_candidates = {est.x_min_location / 2.0,
                        model.basis.depth - est.x_min_location / 2.0};
  }
  return est;
}

Vec autocorrelation_zeta(const Vec& zeta_sq, const ModeBasis& basis, const Vec& z_grid) {
  require(basis.count >= 8, errc::too_few_modes,
          "beta_j must sample (0, k): need N >= 8");
  require(zeta_sq.size() == basis.count, errc::dimension_mismatch, "zeta_sq length != N");
  // beta_j decreases with j; integrate over increasing beta. The samples only
  // reach down to beta_N > 0, so the [0, beta_N) slab is closed with a
  // midpoint panel carrying the lowest sample; without it the recovered
  // widths are badly biased.
  const double beta_low = basis.beta(basis.count - 1);
  const double f_low = zeta_sq(basis.count - 1);
  Vec out(z_grid.size());
  for (int i = 0; i < z_grid.size(); ++i) {
    double acc = f_low * std::cos(0.5 * beta_low * z_grid(i)) * beta_low;
    for (int j = 0; j + 1 < basis.count; ++j) {
      const double b_hi = basis.beta(j);
      const double b_lo = basis.beta(j + 1);
      const double f_hi = zeta_sq(j) * std::cos(b_hi * z_grid(i));
      const double f_lo = zeta_sq(j + 1) * std::cos(b_lo * z_grid(i));
      acc += 0.5 * (f_hi + f_lo) * (b_hi - b_lo);
    }
    out(i) = acc / kPi;
  }
  return out;
}

std::vector<double> band_grid(double omega_lo, double omega_hi, double step) {
  require(step > 0.0 && omega_hi > omega_lo, errc::config_invalid, "bad band parameters");
  const int count = static_cast<int>(std::round((omega_hi - omega_lo) / step));
  require(count >= 1, errc::config_invalid, "band contains no sub-bands");
  std::vector<double> omegas(count);
  for (int j = 1; j <= count; ++j) omegas[j - 1] = omega_lo + j * step;
  return omegas;
}

Vec wideband_theta(const std::vector<double>& band_omegas, const WaveguideConfig& config,
                   const std::function<double(int)>& sin_sq_profile) {
  Vec theta(band_omegas.size());
  for (std::size_t i = 0; i < band_omegas.size(); ++i) {
    const ModeBasis basis = mode_basis(band_omegas[i], config);
    double acc = 0.0;
    for (int q = 1; q <= basis.count; ++q) acc += sin_sq_profile(q) / basis.beta_at(q);
    theta(i) = acc / basis.count;
  }
  return theta;
}

WidebandSystem wideband_solve(const std::vector<double>& band_omegas, const Vec& theta,
                              const WaveguideConfig& config, const Vec& x_grid) {
  const int m = static_cast<int>(band_omegas.size());
  require(m >= 1, errc::config_invalid, "no sub-bands");
  require(theta.size() == m, errc::dimension_mismatch, "theta length != band count");
  for (int i = 1; i < m; ++i)
    require(band_omegas[i] > band_omegas[i - 1], errc::config_invalid,
            "bands must increase");

  WidebandSystem sys;
  sys.band_omegas = band_omegas;
  std::vector<ModeBasis> bases;
  bases.reserve(m);
  for (double omega : band_omegas) bases.push_back(mode_basis(omega, config));
  const int n_max = bases.back().count;

  sys.b = Mat::Zero(m, n_max);
  sys.rhs.resize(m);
  for (int i = 0; i < m; ++i) {
    require(bases[i].count <= n_max, errc::dimension_mismatch,
            "mode counts must be nondecreasing across bands");
    for (int q = 0; q < bases[i].count; ++q) sys.b(i, q) = 1.0 / bases[i].beta(q);
    sys.rhs(i) = bases[i].count * theta(i);
  }
  sys.rank = numerical_rank(sys.b);

  const NnlsResult solution = nnls(sys.b, sys.rhs, 10 * n_max);
  sys.gamma = solution.x;
  sys.nnls_iterations = solution.iterations;

  sys.x_grid = x_grid;
  sys.objective.resize(x_grid.size());
  for (int i = 0; i < x_grid.size(); ++i) {
    double acc = 0.0;
    for (int j = 1; j <= n_max; ++j) {
      const double s = std::sin(kPi * j * x_grid(i) / config.depth);
      const double diff = s * s - sys.gamma(j - 1);
      acc += diff * diff;
    }
    sys.objective(i) = std::sqrt(acc);
  }

  for (int i = 1; i + 1 < sys.objective.size(); ++i)
    if (sys.objective(i) < sys.objective(i - 1) && sys.objective(i) <= sys.objective(i + 1))
      sys.minima.push_back(i);
  std::sort(sys.minima.begin(), sys.minima.end(),
            [&](int a, int b) { return sys.objective(a) < sys.objective(b); });

  const double lo = sys.objective.minCoeff();
  const double hi = sys.objective.maxCoeff();
  const double near_level = lo + 0.1 * (hi - lo);
  for (int idx : sys.minima)
    if (sys.objective(idx) <= near_level) ++sys.near_minimal_count;
  sys.ambiguous = sys.near_minimal_count > 2;
  return sys;
}

}  // namespace wavetrans
