#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wavetrans/transport.hpp"

namespace wavetrans {

/// Cross-range profile xi(x), supported in [0, X].
struct CrossRangeProfile {
  enum class Kind { Point, Gaussian, Tabulated };
  Kind kind = Kind::Point;
  double x0 = 0.0;     // point location / Gaussian center
  double sigma = 0.0;  // Gaussian standard deviation
  std::vector<double> xs, values;  // tabulated samples
};

/// Range profile zeta(z), centered at z = 0.
struct RangeProfile {
  enum class Kind { Delta, Gaussian, Tabulated };
  Kind kind = Kind::Delta;
  double width = 0.0;  // Gaussian standard deviation s
  std::vector<double> zs, values;
};

struct SeparableSource {
  CrossRangeProfile xi;
  RangeProfile zeta;
  /// Support checks; Gaussian profiles require 3*sigma inside (0, X).
  void validate(const WaveguideConfig& config) const;
};

/// Fourier data of a separable source against the mode basis:
/// xi_sq[l-1] = |xi_hat_l|^2 and zeta_sq(beta) = |zeta_hat(beta)|^2.
struct SourceSpectrum {
  Vec xi_sq;
  std::function<double(double)> zeta_sq;
  double rho_sq(int l, double beta) const { return xi_sq(l - 1) * zeta_sq(beta); }
};

SourceSpectrum source_spectrum(const SeparableSource& source, const ModeBasis& basis);

/// Processed data vector M (Eq.-of-motion units with the pulse prefactor
/// ||f||^2/4B divided out): M = QQ diag(zeta_sq/beta) e^{Gamma Z} B^{-1} xi_sq.
Vec forward_data_vector(const SourceSpectrum& spectrum, const ScatteringModel& model,
                        const ApertureCoupling& aperture, double z);

/// Elementwise double-sum route to the same vector; kept as an independent
/// code path for cross-checks.
Vec forward_data_vector_direct(const SourceSpectrum& spectrum, const ScatteringModel& model,
                               const ApertureCoupling& aperture, double z);

/// Time-resolved expected cross-correlation traces C_j(tau), j = 1..N.
struct TraceSet {
  Vec tau;
  Mat c;  // (n_tau, N)
};

/// Gaussian processing window: psi(t) = exp(-t^2/2)/sqrt(2 pi), psi_hat(u) = exp(-u^2/2).
double psi_window(double t);
double psi_window_hat(double u);

/// tau grid bracketing every mode arrival with an 8/H margin.
Vec default_tau_grid(const ScatteringModel& model, double z, double window_h, int n = 512);

/// Exact forward traces: trapezoid h-integral over |h| <= 6H of
/// psi_hat(h/H) [e^{(ihB'+Gamma)Z}] phased by e^{-ih tau}.
/// n_h <= 0 picks the grid automatically from the tau window; an explicit
/// n_h whose spacing exceeds H/8 raises GridTooCoarse.
TraceSet forward_crosscorr(const SourceSpectrum& spectrum, const ScatteringModel& model,
                           const ApertureCoupling& aperture, double z, double window_h,
                           const Vec& tau_grid, int n_h = 0);

/// Perturbative traces: superposition of N pulses at tau = Z/V_r with
/// exponentially decaying weights.
TraceSet forward_crosscorr_perturbative(const SourceSpectrum& spectrum,
                                        const ScatteringModel& model,
                                        const ApertureCoupling& aperture, double z,
                                        double window_h, const Vec& tau_grid);

enum class Provenance { ModelGenerated, Synthetic };

/// Per-mode energy data consumed by the inversion suite.
struct EnergyDataset {
  Vec m;
  std::optional<TraceSet> traces;
  double z = 0.0;
  Provenance provenance = Provenance::ModelGenerated;
};

}  // namespace wavetrans
