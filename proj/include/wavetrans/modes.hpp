#pragma once

#include "wavetrans/types.hpp"

namespace wavetrans {

enum class FluctuationKind { Medium, Boundary, Both };

/// Physical and asymptotic parameters of the perturbed waveguide.
/// Units are SI throughout: lengths in m, speeds in m/s, omega in rad/s.
struct WaveguideConfig {
  double c_o = 1500.0;    // reference sound speed
  double omega_o = 0.0;   // central angular frequency
  double depth = 0.0;     // waveguide depth X
  double ell = 0.0;       // fluctuation correlation length
  double eps = 0.05;      // asymptotic amplitude scale, 0 < eps < 1
  double alpha = 1.5;     // bandwidth exponent, 1 < alpha < 2
  FluctuationKind kind = FluctuationKind::Medium;
  double eps_c = 1.0;     // medium amplitude, relative to eps
  double eps_B = 0.0;     // bottom boundary amplitude
  double eps_T = 0.0;     // top boundary amplitude

  double wavelength() const { return 2.0 * kPi * c_o / omega_o; }
  double wavenumber(double omega) const { return omega / c_o; }
  double k_o() const { return omega_o / c_o; }

  /// Throws Error(config_invalid) on violated invariants and
  /// Error(degenerate_cutoff) when kX/pi sits on an integer at omega_o.
  void validate() const;
};

/// Ideal-waveguide mode basis at a fixed frequency.
/// Mode indices are 1-based at every interface; storage is 0-based.
struct ModeBasis {
  double omega = 0.0;
  double k = 0.0;        // omega / c_o
  double depth = 0.0;    // X, carried for eigenfunction evaluation
  double c_o = 0.0;
  int count = 0;         // N, number of propagating modes
  Vec beta;              // wavenumbers beta_j, strictly decreasing
  Vec beta_prime;        // group slownesses k/(c_o beta_j), strictly increasing

  double beta_at(int j) const { return beta(check_index(j)); }
  double slowness_at(int j) const { return beta_prime(check_index(j)); }

  /// phi_j(x) = sqrt(2/X) sin(pi j x / X); valid for any j >= 1 (also evanescent).
  double phi(int j, double x) const;

private:
  int check_index(int j) const;
};

/// N(omega) = floor(omega X / (pi c_o)). Throws degenerate_cutoff when
/// kX/pi is within 1e-9 (relative) of an integer: standing-wave setup.
int num_propagating(double omega, const WaveguideConfig& config);

ModeBasis mode_basis(double omega, const WaveguideConfig& config);

/// Free-function form of ModeBasis::phi with domain check on x.
double eigenfunction(int j, double x, const WaveguideConfig& config);

}  // namespace wavetrans
