#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "wavetrans/nnls.hpp"
#include "wavetrans/source.hpp"

namespace wavetrans {

/// Peak time of a sampled trace: quadratic interpolation around the
/// discrete maximum, ties broken toward earlier tau.
/// Throws NoPeaks when no interior peak reaches 5% prominence.
double peak_time(const Vec& tau, const Vec& trace);

struct RangeEstimate {
  double z_hat = 0.0;
  Vec grid;
  Vec misfit;
  bool at_boundary = false;
  std::optional<double> ell_hat;  // set by the joint (Z, ell) search
};

/// Range from arrival times: grid argmin of the energy-weighted peak-time
/// misfit against the perturbative model with a flat reference excitation.
/// Modes whose trace energy is below 1% of the strongest are excluded.
RangeEstimate estimate_range(const TraceSet& traces, const ScatteringModel& model,
                             const ApertureCoupling& aperture, double window_h,
                             const Vec& z_grid);

/// Joint (Z, ell) scan; ell_hat is model-dependent (many autocorrelations
/// produce the same coupling matrix).
RangeEstimate estimate_range_joint(const TraceSet& traces,
                                   const std::function<ScatteringModel(double)>& model_of_ell,
                                   const ApertureCoupling& aperture, double window_h,
                                   const Vec& z_grid, const Vec& ell_grid);

struct RangeProfileEstimate {
  Vec zeta_sq;                 // |zeta_hat(beta_j)|^2; valid where !withheld
  std::vector<bool> withheld;  // NearZeroEta entries
  Vec eta;
};

/// Case 1: invert for the range profile when xi is known.
/// Throws IllConditionedAperture unless QQ is strictly diagonally dominant.
RangeProfileEstimate invert_range_profile(const Vec& m, const Vec& xi_sq,
                                          const ScatteringModel& model,
                                          const ApertureCoupling& aperture, double z);

enum class EstimateQuality { Good, Poor };

struct CrossRangeEstimate {
  int cutoff = 0;              // J
  Vec xi_sq;                   // clipped at zero
  std::vector<bool> clipped;
  Vec error_bound;             // per-index bound sqrt(sum_{q>J} u_jq^2)
  double amplification = 0.0;  // e^{|lambda_J| Z}
  Vec x_grid;
  Vec r_xi;                    // reconstructed autocorrelation (J terms)
  double x_min_location = 0.0;
  std::pair<double, double> x_candidates{0.0, 0.0};
  EstimateQuality quality = EstimateQuality::Poor;
};

/// Case 2: spectral cut-off recovery of |xi_hat|^2 assuming zeta ~ delta.
/// Throws CutoffTooAggressive when e^{|lambda_J| Z} exceeds the cap
/// (pass +inf to override).
CrossRangeEstimate invert_crossrange(const Vec& m, const ScatteringModel& model,
                                     const ApertureCoupling& aperture, double z, int cutoff,
                                     double amplification_cap = 10.0, int n_x_grid = 1001);

struct XiAutocorrelation {
  Vec x_grid;
  Vec r;
  double x_min_location = 0.0;
  std::pair<double, double> x_candidates{0.0, 0.0};
};

/// R_xi(x) = 2 sum_{j<=J} |xi_hat_j|^2 cos(pi j x / X), with the interior
/// minimum and the reflection-ambiguous center candidates {x_m/2, X - x_m/2}.
XiAutocorrelation autocorrelation_xi(const Vec& xi_sq, int cutoff, const Vec& x_grid,
                                     double depth);

/// R_zeta(z) by trapezoid over the beta_j samples (needs N >= 8).
Vec autocorrelation_zeta(const Vec& zeta_sq, const ModeBasis& basis, const Vec& z_grid);

struct WidebandSystem {
  std::vector<double> band_omegas;
  Mat b;             // M x N_M system matrix
  Vec rhs;           // N_j theta_j
  int rank = 0;
  Vec gamma;         // NNLS solution, >= 0
  int nnls_iterations = 0;
  Vec x_grid;
  Vec objective;     // Obj(x) = ||sin^2 profile - gamma||
  std::vector<int> minima;        // interior minima, sorted by objective value
  int near_minimal_count = 0;     // basins within 10% of the objective range
  bool ambiguous = false;         // > 2 near-minimal basins
};

/// Sub-band center frequencies omega_j = lo + j * step, j = 1..M
/// (left-exclusive / right-inclusive).
std::vector<double> band_grid(double omega_lo, double omega_hi, double step);

/// Equipartition weighted averages theta_j in sin^2 units for a given
/// cross-range power profile s_q = (X/2) |xi_hat_q|^2.
Vec wideband_theta(const std::vector<double>& band_omegas, const WaveguideConfig& config,
                   const std::function<double(int)>& sin_sq_profile);

WidebandSystem wideband_solve(const std::vector<double>& band_omegas, const Vec& theta,
                              const WaveguideConfig& config, const Vec& x_grid);

}  // namespace wavetrans
