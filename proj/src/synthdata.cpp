#include "wavetrans/synthdata.hpp"

#include <algorithm>
#include <cmath>

#include "wavetrans/fft.hpp"
#include "wavetrans/rng.hpp"
#include "wavetrans/threads.hpp"

namespace wavetrans {

double Rng::next_gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  cached_ = r * std::sin(2.0 * kPi * u2);
  has_cached_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

double ProcessingWindows::bandwidth(double omega_o) const {
  if (bandwidth_override > 0.0) return bandwidth_override;
  return omega_o * std::pow(eps, alpha);
}

double ProcessingWindows::lag_spacing(double omega_o) const {
  const double d_omega = 2.0 * kPi * bandwidth(omega_o) / n_freq;
  return d_omega / (eps * eps);
}

double ProcessingWindows::effective_h(double omega_o) const {
  if (window_h > 0.0) return window_h;
  return 1.25 * lag_spacing(omega_o);
}

void ProcessingWindows::validate(double omega_o) const {
  require(eps > 0.0 && eps < 1.0, errc::config_invalid, "eps must lie in (0,1)");
  require(alpha > 1.0 && alpha < 2.0, errc::config_invalid, "alpha must lie in (1,2)");
  require(n_freq >= 1 && (n_freq & (n_freq - 1)) == 0, errc::config_invalid,
          "n_freq must be a power of two");
  require(max_lag >= 0 && max_lag < n_freq, errc::lag_out_of_range,
          "lag grid exceeds the frequency grid span");
  require(bandwidth(omega_o) > 0.0, errc::config_invalid, "bandwidth must be positive");
  const double ht = effective_h(omega_o) * duration;
  require(ht > 50.0, errc::config_invalid,
          "H*T = " + std::to_string(ht) + " violates H*T >> 1 (need > 50)");
}

namespace {

// Per-mode kernel-weighted source terms K_j(h): the h-transform of the
// expected time-resolved trace, shared by the forward map and the generator.
CVec trace_weights(const SourceSpectrum& spectrum, const ScatteringModel& model,
                   const ApertureCoupling& aperture, double z, double h) {
  const Vec xi_over_beta = spectrum.xi_sq.cwiseQuotient(model.basis.beta);
  Vec zb(model.size());
  for (int q = 0; q < model.size(); ++q)
    zb(q) = spectrum.zeta_sq(model.basis.beta(q)) / model.basis.beta(q);
  const CMat kernel = kernel_hat(model, h, z);
  const CVec inner = kernel * xi_over_beta.cast<Complex>();
  return aperture.q_squared.cast<Complex>() * zb.cast<Complex>().cwiseProduct(inner);
}

}  // namespace

SynthModel prepare_synthesis(const SourceSpectrum& spectrum, const ScatteringModel& model,
                             const ApertureCoupling& aperture, double z,
                             const ProcessingWindows& windows) {
  windows.validate(model.basis.omega);
  // Single-band processing assumes the propagating-mode count is constant
  // across the pulse band.
  const double half_band = kPi * windows.bandwidth(model.basis.omega);
  for (double edge : {model.basis.omega - half_band, model.basis.omega + half_band}) {
    const int n_edge = static_cast<int>(
        std::floor(edge * model.basis.depth / (kPi * model.basis.c_o)));
    require(n_edge == model.basis.count, errc::config_invalid,
            "mode count changes across the band; narrow B or move omega_o");
  }
  const int m = windows.n_freq;
  const int n = model.size();
  SynthModel sm;
  sm.n_modes = n;
  sm.n_freq = m;
  sm.omega_o = model.basis.omega;
  sm.d_omega = 2.0 * kPi * windows.bandwidth(sm.omega_o) / m;
  sm.d_tau = windows.eps * windows.eps * 2.0 * kPi / (m * sm.d_omega);

  // Place the arrival window inside the periodic span.
  const Vec speeds = transport_speeds(model);
  double first_arrival = z * model.basis.beta_prime.minCoeff();
  for (int r = 0; r < n; ++r) first_arrival = std::min(first_arrival, z / speeds(r));
  const double span = m * sm.d_tau;
  sm.tau_origin = first_arrival - span / 8.0;

  // Profiles: inverse DFT of the phase-shifted kernel weights, clipped at 0.
  // The ballistic part of the kernel does not decay in h, so a Gaussian
  // guard taper at a quarter of the Nyquist lag suppresses the truncation
  // ringing that would otherwise clip into spurious mass. On the processed
  // lag grid (|h| <= max_lag * d_h << h_max) the taper perturbs the second
  // moments by well under a percent.
  const double d_h = sm.d_omega / (windows.eps * windows.eps);
  const double h_guard = windows.guard_h > 0.0 ? windows.guard_h : (m / 2) * d_h / 4.0;
  std::vector<CVec> weights(m / 2 + 1);
  parallel_for(weights.size(), [&](std::size_t p) {
    weights[p] = trace_weights(spectrum, model, aperture, z, p * d_h);
  });

  const double kappa = 1.0 / (2.0 * kPi * windows.eps * windows.eps);
  sm.amplitude.resize(m, n);
  std::vector<std::complex<double>> buf(m);
  for (int j = 0; j < n; ++j) {
    for (int p = 0; p <= m / 2; ++p) {
      const double h = p * d_h;
      const double guard = m > 1 ? std::exp(-0.5 * (h / h_guard) * (h / h_guard)) : 1.0;
      Complex value = guard * weights[p](j) * std::exp(Complex(0.0, -h * sm.tau_origin));
      if (p == m / 2 && m > 1) value = Complex(value.real(), 0.0);  // Nyquist
      buf[p] = value;
      if (p > 0 && p < m / 2) buf[m - p] = std::conj(value);
    }
    fft_radix2(buf, -1);
    for (int i = 0; i < m; ++i) {
      const double profile = std::max(buf[i].real() / (m * sm.d_tau), 0.0);
      sm.amplitude(i, j) = std::sqrt(profile * kappa);
    }
  }
  return sm;
}

CMat synthesize_realization(const SynthModel& sm, std::uint64_t seed, int realization) {
  CMat dhat(sm.n_freq, sm.n_modes);
  std::vector<std::complex<double>> buf(sm.n_freq);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < sm.n_modes; ++j) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(realization),
                             static_cast<std::uint64_t>(j) + 1);
    for (int i = 0; i < sm.n_freq; ++i) {
      const double re = rng.next_gaussian();
      const double im = rng.next_gaussian();
      buf[i] = sm.amplitude(i, j) * inv_sqrt2 * Complex(re, im);
    }
    fft_radix2(buf, +1);
    for (int i = 0; i < sm.n_freq; ++i) dhat(i, j) = sm.d_tau * buf[i];
  }
  return dhat;
}

SyntheticEnsemble synthesize_ensemble(const SourceSpectrum& spectrum,
                                      const ScatteringModel& model,
                                      const ApertureCoupling& aperture, double z,
                                      const ProcessingWindows& windows, std::uint64_t seed,
                                      int n_realizations) {
  require(n_realizations >= 1, errc::config_invalid, "need at least one realization");
  const SynthModel sm = prepare_synthesis(spectrum, model, aperture, z, windows);
  SyntheticEnsemble ensemble;
  ensemble.seed = seed;
  ensemble.omega_o = sm.omega_o;
  ensemble.d_omega = sm.d_omega;
  ensemble.tau_origin = sm.tau_origin;
  ensemble.d_tau = sm.d_tau;
  ensemble.dhat.resize(n_realizations);
  parallel_for(static_cast<std::size_t>(n_realizations), [&](std::size_t r) {
    ensemble.dhat[r] = synthesize_realization(sm, seed, static_cast<int>(r));
  });
  return ensemble;
}

CVec project_modes(const Vec& xs, const CVec& field, const ModeBasis& basis) {
  require(xs.size() == field.size() && xs.size() >= 2, errc::dimension_mismatch,
          "grid and field sample counts differ");
  double max_spacing = 0.0;
  for (int i = 1; i < xs.size(); ++i) {
    require(xs(i) > xs(i - 1), errc::config_invalid, "aperture grid must increase");
    max_spacing = std::max(max_spacing, xs(i) - xs(i - 1));
  }
  require(max_spacing <= basis.depth / (2.0 * basis.count), errc::grid_too_coarse,
          "aperture grid must resolve phi_N with >= 4 points per oscillation");
  CVec out(basis.count);
  for (int j = 1; j <= basis.count; ++j) {
    Complex acc(0.0, 0.0);
    for (int i = 1; i < xs.size(); ++i) {
      const Complex f0 = field(i - 1) * basis.phi(j, xs(i - 1));
      const Complex f1 = field(i) * basis.phi(j, xs(i));
      acc += 0.5 * (f0 + f1) * (xs(i) - xs(i - 1));
    }
    out(j - 1) = acc;
  }
  return out;
}

namespace {

struct CorrGeometry {
  int m = 0, n = 0, lags = 0;
  double d_omega = 0.0, d_h = 0.0, h_window = 0.0;
};

CorrGeometry corr_geometry(const CMat& dhat, const ProcessingWindows& windows, double omega_o) {
  windows.validate(omega_o);
  CorrGeometry g;
  g.m = static_cast<int>(dhat.rows());
  g.n = static_cast<int>(dhat.cols());
  require(g.m == windows.n_freq, errc::dimension_mismatch,
          "dhat row count must equal windows.n_freq");
  g.lags = windows.max_lag;
  require(g.lags < g.m, errc::lag_out_of_range, "lag grid exceeds frequency span");
  g.d_omega = 2.0 * kPi * windows.bandwidth(omega_o) / g.m;
  g.d_h = g.d_omega / (windows.eps * windows.eps);
  g.h_window = windows.effective_h(omega_o);
  return g;
}

// Shared inverse transform: lag data -> C_j(tau) on an absolute tau grid.
void lag_to_traces(const CorrGeometry& g, const CMat& chat_nonneg, double tau_origin,
                   int n_tau, CrossCorrOutput& out) {
  const double span = g.m * (2.0 * kPi / (g.m * g.d_h));
  out.tau = Vec::LinSpaced(n_tau, tau_origin, tau_origin + span);
  out.c.resize(n_tau, g.n);
  for (int t = 0; t < n_tau; ++t) {
    const double rel = out.tau(t) - tau_origin;
    CVec acc = chat_nonneg.row(0).transpose();  // l = 0 term
    for (int l = 1; l <= g.lags; ++l) {
      const Complex phase = std::exp(Complex(0.0, -l * g.d_h * rel));
      acc += phase * chat_nonneg.row(l).transpose() +
             std::conj(phase) * chat_nonneg.row(l).transpose().conjugate();
    }
    out.c.row(t) = (g.d_h / (2.0 * kPi)) * acc.real().transpose();
  }
  out.h.resize(2 * g.lags + 1);
  for (int l = -g.lags; l <= g.lags; ++l) out.h(l + g.lags) = l * g.d_h;
}

void fill_symmetric_chat(const CorrGeometry& g, const CMat& chat_nonneg, CrossCorrOutput& out) {
  out.chat.resize(2 * g.lags + 1, g.n);
  for (int l = -g.lags; l <= g.lags; ++l) {
    if (l >= 0)
      out.chat.row(l + g.lags) = chat_nonneg.row(l);
    else
      out.chat.row(l + g.lags) = chat_nonneg.row(-l).conjugate();
  }
}

}  // namespace

CrossCorrOutput crosscorrelate(const CMat& dhat, const ProcessingWindows& windows,
                               double omega_o, double tau_origin, int n_tau) {
  const CorrGeometry g = corr_geometry(dhat, windows, omega_o);
  CMat chat(g.lags + 1, g.n);
  for (int l = 0; l <= g.lags; ++l) {
    const double taper = psi_window_hat(l * g.d_h / g.h_window);
    for (int j = 0; j < g.n; ++j) {
      Complex acc(0.0, 0.0);
      for (int nn = 0; nn < g.m; ++nn) {
        const int shifted = (nn - l + g.m) % g.m;
        acc += dhat(nn, j) * std::conj(dhat(shifted, j));
      }
      chat(l, j) = taper * g.d_omega * acc;
    }
  }
  CrossCorrOutput out;
  fill_symmetric_chat(g, chat, out);
  lag_to_traces(g, chat, tau_origin, n_tau, out);
  return out;
}

CrossCorrOutput crosscorrelate_time_domain(const CMat& dhat, const ProcessingWindows& windows,
                                           double omega_o, double tau_origin, int n_tau) {
  const CorrGeometry g = corr_geometry(dhat, windows, omega_o);
  const double d_tau = 2.0 * kPi / (g.m * g.d_h);
  const double eps_sq = windows.eps * windows.eps;

  // |D_j(t)|^2 on the conjugate time grid.
  Mat intensity(g.m, g.n);
  std::vector<std::complex<double>> buf(g.m);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.m; ++i) buf[i] = dhat(i, j);
    fft_radix2(buf, -1);
    for (int i = 0; i < g.m; ++i)
      intensity(i, j) = std::norm(g.d_omega / (2.0 * kPi) * buf[i]);
  }

  CrossCorrOutput out;
  const double span = g.m * d_tau;
  out.tau = Vec::LinSpaced(n_tau, tau_origin, tau_origin + span);
  out.c.resize(n_tau, g.n);
  const double d_s = d_tau / eps_sq;
  for (int t = 0; t < n_tau; ++t) {
    const double rel = out.tau(t) - tau_origin;
    Vec acc = Vec::Zero(g.n);
    for (int m = 0; m < g.m; ++m) {
      const double w = psi_window(g.h_window * (rel - m * d_tau));
      if (w == 0.0) continue;
      acc += w * intensity.row(m).transpose();
    }
    out.c.row(t) = (2.0 * kPi * g.h_window * d_s * acc).transpose();
  }

  // Lag data from the same intensities (the Parseval-dual expression).
  CMat chat(g.lags + 1, g.n);
  for (int l = 0; l <= g.lags; ++l) {
    const double taper = psi_window_hat(l * g.d_h / g.h_window);
    for (int j = 0; j < g.n; ++j) {
      Complex acc(0.0, 0.0);
      for (int m = 0; m < g.m; ++m)
        acc += intensity(m, j) * std::exp(Complex(0.0, l * g.d_h * m * d_tau));
      chat(l, j) = 2.0 * kPi * taper * d_s * acc;
    }
  }
  fill_symmetric_chat(g, chat, out);
  return out;
}

SelfAveragingReport self_averaging_report(const SourceSpectrum& spectrum,
                                          const ScatteringModel& model,
                                          const ApertureCoupling& aperture, double z,
                                          const ProcessingWindows& base,
                                          const std::vector<double>& bandwidth_factors,
                                          std::uint64_t seed, int n_realizations) {
  require(bandwidth_factors.size() >= 3, errc::config_invalid,
          "bandwidth sweep needs at least 3 settings");
  const double omega_o = model.basis.omega;
  const double b0 = base.bandwidth(omega_o);
  SelfAveragingReport report;

  // The sweep varies only the bandwidth: the generator's anti-ringing scale
  // is pinned to the smallest band's value so the surrogate's physical
  // decorrelation structure stays fixed across the sweep.
  double smallest = bandwidth_factors[0];
  for (double f : bandwidth_factors) smallest = std::min(smallest, f);
  const double guard =
      base.guard_h > 0.0
          ? base.guard_h
          : 0.25 * kPi * b0 * smallest / (base.eps * base.eps);

  for (std::size_t s = 0; s < bandwidth_factors.size(); ++s) {
    ProcessingWindows windows = base;
    windows.bandwidth_override = b0 * bandwidth_factors[s];
    windows.guard_h = guard;
    const SynthModel sm = prepare_synthesis(spectrum, model, aperture, z, windows);

    const int n_tau = 256;
    const int n = sm.n_modes;
    // Streaming first and second moments of C_j(tau) across realizations.
    std::vector<Mat> partial_sum, partial_sq;
    const int n_blocks = 16;
    partial_sum.assign(n_blocks, Mat::Zero(n_tau, n));
    partial_sq.assign(n_blocks, Mat::Zero(n_tau, n));
    parallel_for(static_cast<std::size_t>(n_blocks), [&](std::size_t blk) {
      for (int r = static_cast<int>(blk); r < n_realizations; r += n_blocks) {
        const CMat dhat = synthesize_realization(sm, seed + s, r);
        const CrossCorrOutput cc =
            crosscorrelate(dhat, windows, omega_o, sm.tau_origin, n_tau);
        partial_sum[blk] += cc.c;
        partial_sq[blk] += cc.c.cwiseProduct(cc.c);
      }
    });
    Mat sum = Mat::Zero(n_tau, n), sum_sq = Mat::Zero(n_tau, n);
    for (int blk = 0; blk < n_blocks; ++blk) {
      sum += partial_sum[blk];
      sum_sq += partial_sq[blk];
    }
    const Mat mean = sum / n_realizations;
    const Mat var =
        (sum_sq - sum.cwiseProduct(sum) / n_realizations) / std::max(1, n_realizations - 1);

    std::vector<double> ratios(n);
    for (int j = 0; j < n; ++j) {
      int peak = 0;
      mean.col(j).maxCoeff(&peak);
      const double mu = mean(peak, j);
      ratios[j] = var(peak, j) / (mu * mu);
    }
    std::nth_element(ratios.begin(), ratios.begin() + n / 2, ratios.end());
    report.rows.push_back({windows.bandwidth_override / omega_o, ratios[n / 2]});
  }

  // Log-log least squares slope of var/mean^2 against B.
  const std::size_t count = report.rows.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : report.rows) {
    const double x = std::log(row.bandwidth_ratio);
    const double y = std::log(row.var_over_mean_sq);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  report.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return report;
}

}  // namespace wavetrans
