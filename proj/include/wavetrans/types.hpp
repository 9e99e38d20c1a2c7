#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace wavetrans {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class errc {
  ok = 0,
  degenerate_cutoff,
  out_of_domain,
  invalid_correlation_length,
  negative_spectrum,
  eigensolve_failure,
  equipartition_undefined,
  empty_aperture,
  expm_failure,
  degenerate_spectrum,
  unsupported_profile,
  dimension_mismatch,
  grid_too_coarse,
  lag_out_of_range,
  no_peaks,
  ill_conditioned_aperture,
  cutoff_too_aggressive,
  too_few_modes,
  nnls_nonconvergence,
  config_invalid,
  numeric_failure,
  unknown_figure,
};

const char* errc_name(errc code);

/// Library error: a stable code plus a human-readable message.
class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace wavetrans
