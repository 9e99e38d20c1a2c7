#include "wavetrans/modes.hpp"

#include <cmath>

namespace wavetrans {

const char* errc_name(errc code) {
  switch (code) {
    case errc::ok: return "ok";
    case errc::degenerate_cutoff: return "DegenerateCutoff";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::invalid_correlation_length: return "InvalidCorrelationLength";
    case errc::negative_spectrum: return "NegativeSpectrum";
    case errc::eigensolve_failure: return "EigensolveFailure";
    case errc::equipartition_undefined: return "EquipartitionUndefined";
    case errc::empty_aperture: return "EmptyAperture";
    case errc::expm_failure: return "ExpmFailure";
    case errc::degenerate_spectrum: return "DegenerateSpectrum";
    case errc::unsupported_profile: return "UnsupportedProfile";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::grid_too_coarse: return "GridTooCoarse";
    case errc::lag_out_of_range: return "LagOutOfRange";
    case errc::no_peaks: return "NoPeaks";
    case errc::ill_conditioned_aperture: return "IllConditionedAperture";
    case errc::cutoff_too_aggressive: return "CutoffTooAggressive";
    case errc::too_few_modes: return "TooFewModes";
    case errc::nnls_nonconvergence: return "NNLSNonConvergence";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::numeric_failure: return "NumericFailure";
    case errc::unknown_figure: return "UnknownFigure";
  }
  return "unknown";
}

void WaveguideConfig::validate() const {
  require(c_o > 0.0, errc::config_invalid, "c_o must be positive");
  require(omega_o > 0.0, errc::config_invalid, "omega_o must be positive");
  require(depth > 0.0, errc::config_invalid, "depth X must be positive");
  require(ell > 0.0, errc::config_invalid, "correlation length ell must be positive");
  require(eps > 0.0 && eps < 1.0, errc::config_invalid, "eps must lie in (0,1)");
  require(alpha > 1.0 && alpha < 2.0, errc::config_invalid, "alpha must lie in (1,2)");
  num_propagating(omega_o, *this);  // rejects standing-wave configurations
}

namespace {

// kX/pi with the standing-wave guard shared by num_propagating / mode_basis.
double mode_parameter(double omega, const WaveguideConfig& config) {
  require(omega > 0.0, errc::config_invalid, "omega must be positive");
  const double t = omega * config.depth / (kPi * config.c_o);
  const double nearest = std::round(t);
  if (nearest >= 1.0 && std::abs(t - nearest) <= 1e-9 * t)
    fail(errc::degenerate_cutoff,
         "kX/pi = " + std::to_string(t) + " is within 1e-9 of an integer");
  return t;
}

}  // namespace

int num_propagating(double omega, const WaveguideConfig& config) {
  const int n = static_cast<int>(std::floor(mode_parameter(omega, config)));
  require(n >= 1, errc::config_invalid, "no propagating modes at this frequency");
  return n;
}

ModeBasis mode_basis(double omega, const WaveguideConfig& config) {
  ModeBasis basis;
  basis.omega = omega;
  basis.k = config.wavenumber(omega);
  basis.depth = config.depth;
  basis.c_o = config.c_o;
  basis.count = num_propagating(omega, config);
  basis.beta.resize(basis.count);
  basis.beta_prime.resize(basis.count);
  for (int j = 1; j <= basis.count; ++j) {
    const double transverse = kPi * j / config.depth;
    const double b = std::sqrt(std::abs(basis.k * basis.k - transverse * transverse));
    basis.beta(j - 1) = b;
    basis.beta_prime(j - 1) = basis.k / (config.c_o * b);
  }
  return basis;
}

int ModeBasis::check_index(int j) const {
  require(j >= 1 && j <= count, errc::out_of_domain,
          "mode index " + std::to_string(j) + " outside 1.." + std::to_string(count));
  return j - 1;
}

double ModeBasis::phi(int j, double x) const {
  require(j >= 1, errc::out_of_domain, "mode index must be >= 1");
  require(x >= 0.0 && x <= depth, errc::out_of_domain, "cross-range x outside [0, X]");
  return std::sqrt(2.0 / depth) * std::sin(kPi * j * x / depth);
}

double eigenfunction(int j, double x, const WaveguideConfig& config) {
  require(j >= 1, errc::out_of_domain, "mode index must be >= 1");
  require(x >= 0.0 && x <= config.depth, errc::out_of_domain, "cross-range x outside [0, X]");
  return std::sqrt(2.0 / config.depth) * std::sin(kPi * j * x / config.depth);
}

}  // namespace wavetrans
