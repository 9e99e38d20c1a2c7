#pragma once

#include "wavetrans/scattering.hpp"

namespace wavetrans {

enum class KernelMethod { ExactExpm, PerturbativeSpectral };

/// Frequency-domain transport kernel e^{(i h B' + Gamma) Z} for the scaled
/// range Z. Default method is a dense complex eigendecomposition; the Pade
/// scaling-and-squaring expm below serves as fallback and cross-check.
CMat kernel_hat(const ScatteringModel& model, double h, double z);

/// Matrix exponential by [6/6] Pade with scaling and squaring.
CMat expm(const CMat& a);

/// First-order spectral perturbation of (i h B' + Gamma).
struct PerturbedSpectrum {
  double h = 0.0;
  CVec lambda;   // lambda_j + i h u_j' B' u_j
  CMat u;        // u_j + i h sum_{q != j} (u_q' B' u_j / (lambda_j - lambda_q)) u_q
};

PerturbedSpectrum perturbed_spectrum(const ScatteringModel& model, double h);

/// Spectral approximation sum_j exp((lambda_j + i h u_j' B' u_j) Z) u_j u_j'.
CMat kernel_hat_perturbative(const ScatteringModel& model, double h, double z);

/// Transport speeds V_r = 1 / (u_r' B' u_r); V_1 = N / sum_q beta'_q exactly.
Vec transport_speeds(const ScatteringModel& model);

/// Appendix-style perturbation diagnostics: per-mode ratios |Gamma_jj|/(H beta'_j)
/// and eigenvalue errors of the first-order formula on an h-grid in [-H, H].
struct PerturbationDiagnostics {
  Vec ratio;                  // per mode
  Vec h_grid;
  Vec max_rel_error;          // per h, max over modes; exactly 0 at h = 0
  Vec per_mode_error;         // per mode, max over the h grid
  double worst_rel_error = 0.0;
  bool perturbative_regime = false;  // ||Gamma||_F > H ||B'||_F
};

PerturbationDiagnostics perturbation_diagnostics(const ScatteringModel& model, double window_h,
                                                 int n_points = 33);

}  // namespace wavetrans
