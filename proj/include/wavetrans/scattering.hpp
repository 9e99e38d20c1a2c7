#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wavetrans/modes.hpp"

namespace wavetrans {

/// Spectral decomposition of the zero-row-sum generator Gamma.
/// Eigenvalues sorted decreasing (lambda[0] = 0); eigenvectors are the
/// columns of u, each sign-fixed so its largest-magnitude entry is positive,
/// and u.col(0) is snapped to the exact null vector (1,...,1)/sqrt(N).
struct Spectrum {
  Vec lambda;
  Mat u;
  bool near_degenerate = false;  // min eigenvalue gap < 1e-10 * ||Gamma||
};

/// Mode-coupling model: generator, nonnegative coupling (with diagonal),
/// spectrum, mean free paths.
struct ScatteringModel {
  ModeBasis basis;
  Mat gamma;             // symmetric, off-diagonal >= 0, zero row sums (1/m)
  Mat gamma_c;           // Gamma^(c), entrywise >= 0 including diagonal (1/m)
  Spectrum spectrum;
  Vec mean_free_paths;   // S_j (m); +inf where a row of gamma_c sums to zero

  int size() const { return static_cast<int>(gamma.rows()); }
  /// 1/|lambda_2| (m). Throws EquipartitionUndefined when lambda_2 == 0.
  double equipartition_distance() const;
};

/// Tabulated nonnegative spectrum with linear interpolation, zero outside
/// the table range. Arguments must be strictly increasing.
class SpectrumTable {
public:
  SpectrumTable() = default;
  SpectrumTable(std::vector<double> args, std::vector<double> values);
  double operator()(double arg) const;
  bool empty() const { return args_.empty(); }

private:
  std::vector<double> args_, values_;
};

/// Power spectra of the boundary and medium fluctuations feeding the
/// general coupling formula. Spectra are callables (a SpectrumTable works
/// directly). For the medium, either supply rnu_jq (arguments: mode indices
/// j, q and the scaled wavenumber ell*(beta_j - beta_q)) or the two-argument
/// spectrum rnu(kappa_transverse, kappa_range); the stationarity reduction
/// is applied to the latter.
struct FluctuationSpectra {
  std::function<double(double)> boundary_bottom;   // R_B at ell*(beta_j - beta_q)
  std::function<double(double)> boundary_top;      // R_T
  std::function<double(double, double)> rnu;       // medium, 2-argument
  std::function<double(int, int, double)> rnu_jq;  // overrides rnu when set
};

/// Off-diagonal and diagonal entries of Gamma^(c) for the Gaussian random
/// medium (valid for ell << X): entries at (j,q) including j = q.
Mat gamma_medium_gaussian(const ModeBasis& basis, double ell);

/// Gaussian random top boundary, exact closed form.
Mat gamma_boundary_gaussian(const ModeBasis& basis, double ell);

/// Medium fluctuations white in range with Gaussian transverse correlation:
/// the k_o*ell = O(N) regime used by the tridiagonal analysis.
Mat gamma_medium_range_white(const ModeBasis& basis, double ell);

/// General Gamma^(c) from tabulated spectra (full matrix including diagonal).
Mat gamma_general(const ModeBasis& basis, double ell, const FluctuationSpectra& spectra);

/// Zero-row-sum generator from the nonnegative coupling matrix: the
/// off-diagonal of gamma_c is kept, the diagonal is set to minus the
/// off-diagonal row sum.
Mat assemble_gamma(const Mat& gamma_c);

/// S_j = 2 / sum_q gamma_c(j,q); +inf sentinel where the row sum vanishes.
Vec mean_free_paths(const Mat& gamma_c);

Spectrum spectral_decomposition(const Mat& gamma);

ScatteringModel make_scattering_model(const ModeBasis& basis, FluctuationKind kind, double ell);
ScatteringModel make_scattering_model(const ModeBasis& basis, const Mat& gamma_c);

/// Array aperture coupling over [lo, hi] (closed-form sine-product integrals).
struct ApertureCoupling {
  double lo = 0.0, hi = 0.0;
  Mat q;                          // Q_jq, symmetric; identity at full aperture
  Mat q_squared;                  // entrywise Q_jq^2
  bool diagonally_dominant = false;
};

ApertureCoupling aperture_coupling(double lo, double hi, const ModeBasis& basis);
ApertureCoupling full_aperture(const ModeBasis& basis);

}  // namespace wavetrans
