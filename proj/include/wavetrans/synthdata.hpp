#pragma once

#include <cstdint>
#include <vector>

#include "wavetrans/source.hpp"

namespace wavetrans {

/// Bandwidth, recording, and correlation-window parameters of the data
/// processing chain. Scaled-time units throughout (the eps^-2 range scaling
/// is already folded out, matching the rest of the library).
struct ProcessingWindows {
  double eps = 0.05;
  double alpha = 1.5;              // B = omega_o * eps^alpha unless overridden
  double bandwidth_override = 0.0; // explicit B (rad/s); 0 keeps the scaling law
  double t_o = 0.0;                // recording window center; tau-grid origin
  double duration = 1.0;           // scaled recording duration T
  double window_h = 0.0;           // H (rad/s); 0 derives 1.25 * lag spacing
  double guard_h = 0.0;            // generator anti-ringing scale; 0 -> Nyquist/4
  int n_freq = 1024;               // frequency samples across the band (power of two)
  int max_lag = 10;                // lag grid: |eps^2 h| <= max_lag grid steps

  double bandwidth(double omega_o) const;
  double lag_spacing(double omega_o) const;  // Delta h = Delta omega / eps^2
  double effective_h(double omega_o) const;
  void validate(double omega_o) const;       // 1 < alpha < 2, H*T > 50, ...
};

/// Precomputed second-moment factorization for the synthetic generator:
/// per-mode scaled-time intensity profiles whose square root shapes the
/// white noise, plus the grid geometry shared with crosscorrelate.
struct SynthModel {
  int n_modes = 0;
  int n_freq = 0;
  double omega_o = 0.0;
  double d_omega = 0.0;
  double tau_origin = 0.0;  // absolute scaled time of grid index 0
  double d_tau = 0.0;
  Mat amplitude;            // (n_freq, N): sqrt of the clipped intensity profile
};

SynthModel prepare_synthesis(const SourceSpectrum& spectrum, const ScatteringModel& model,
                             const ApertureCoupling& aperture, double z,
                             const ProcessingWindows& windows);

/// One realization of the mode-projected data D_hat(omega_n, j).
/// Substreams are keyed by (seed, realization, mode): any subset of
/// realizations can be generated independently and reproducibly.
CMat synthesize_realization(const SynthModel& sm, std::uint64_t seed, int realization);

struct SyntheticEnsemble {
  std::uint64_t seed = 0;
  double omega_o = 0.0, d_omega = 0.0;
  double tau_origin = 0.0, d_tau = 0.0;
  std::vector<CMat> dhat;  // per realization, (n_freq, N)
};

SyntheticEnsemble synthesize_ensemble(const SourceSpectrum& spectrum,
                                      const ScatteringModel& model,
                                      const ApertureCoupling& aperture, double z,
                                      const ProcessingWindows& windows, std::uint64_t seed,
                                      int n_realizations);

/// Projection of cross-range field samples onto the mode basis by composite
/// trapezoid over the supplied (sorted) aperture grid.
/// Throws GridTooCoarse unless spacing <= X/(2N).
CVec project_modes(const Vec& xs, const CVec& field, const ModeBasis& basis);

struct CrossCorrOutput {
  Vec h;     // lag frequencies h_l, l = -L..L
  CMat chat; // (2L+1, N) lag cross-correlations
  Vec tau;   // absolute scaled-time grid
  Mat c;     // (n_tau, N) time-resolved traces
};

/// Frequency-domain route (lag products under the psi_hat window) plus the
/// inverse transform to C_j(tau).
CrossCorrOutput crosscorrelate(const CMat& dhat, const ProcessingWindows& windows,
                               double omega_o, double tau_origin, int n_tau = 512);

/// Independent time-domain route: |D_j(t)|^2 smoothed by the psi window.
/// Related to the frequency route by the discrete Parseval identity.
CrossCorrOutput crosscorrelate_time_domain(const CMat& dhat, const ProcessingWindows& windows,
                                           double omega_o, double tau_origin, int n_tau = 512);

struct SelfAveragingRow {
  double bandwidth_ratio = 0.0;   // B / omega_o
  double var_over_mean_sq = 0.0;  // median over modes at the trace peak
};

struct SelfAveragingReport {
  std::vector<SelfAveragingRow> rows;
  double slope = 0.0;  // log-log slope of var/mean^2 against B
};

/// Ensemble statistics across a bandwidth sweep (>= 3 settings).
SelfAveragingReport self_averaging_report(const SourceSpectrum& spectrum,
                                          const ScatteringModel& model,
                                          const ApertureCoupling& aperture, double z,
                                          const ProcessingWindows& base,
                                          const std::vector<double>& bandwidth_factors,
                                          std::uint64_t seed, int n_realizations);

}  // namespace wavetrans
