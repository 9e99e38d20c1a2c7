#pragma once

#include <functional>
#include <vector>

#include "wavetrans/scattering.hpp"

namespace wavetrans {

/// Nearest-neighbor coupling model: Upsilon = Gamma/k_o with non-neighbor
/// transfer zeroed and the diagonal rebuilt so every row sums to zero.
struct TridiagonalModel {
  int n = 0;
  Vec diag;      // Upsilon_jj (negative except for trivial rows)
  Vec off_diag;  // Upsilon_{j,j+1}, size n-1
  Vec lambda;    // decreasing, lambda(0) = 0 up to roundoff
  Mat vectors;   // columns, same sign convention as spectral_decomposition
  double norm = 0.0;  // spectral norm = |lambda_min|
};

TridiagonalModel build_upsilon(const Mat& gamma_medium, double k_o);

/// Per-model checks of the spectral properties (orthonormality, sign,
/// one-dimensional null space, near-cutoff magnitudes, tail mass).
struct TridiagChecks {
  bool orthonormal = false;        // max |V'V - I| < 1e-10
  bool nonpositive = false;        // lambda_j <= tol
  bool null_dim_one = false;       // lambda_2 < -1e-10 ||Upsilon||
  Vec top_magnitude_over_n_sq;     // |lambda_j| / N^2 for the last 4 (N-j <= 3)
  std::vector<double> deltas;      // N/|lambda_j| for eigenpairs below the threshold
  std::vector<double> tail_masses; // sum_{q<=J} v_qj^2 for those eigenpairs
};

TridiagChecks check_tridiagonal(const TridiagonalModel& model, int cutoff_j,
                                double delta_threshold = 0.1);

/// Norm-growth and tail-mass report across an N sweep of the model family
/// (gamma_family(N) must return the medium coupling matrix at that N).
struct PropositionReport {
  struct Row {
    int n = 0;
    TridiagChecks checks;
    double norm = 0.0;
    double diag_growth = 0.0;  // Upsilon_NN / Upsilon_11
  };
  std::vector<Row> rows;
  double norm_slope = 0.0;       // log ||Upsilon|| vs log N
  bool slope_ok = false;         // within 2 +- 0.3
  double tail_constant = 0.0;    // max tail/delta^2 over all large eigenpairs
  bool tail_sweep_ok = false;    // constant non-increasing across a factor-4 delta split
  bool structural_ok = false;    // per-N checks 1, 2, 4
  bool all_pass = false;
};

PropositionReport verify_proposition(const std::function<Mat(int)>& gamma_family, double k_o,
                                     const std::vector<int>& n_sweep,
                                     double delta_threshold = 0.1);

}  // namespace wavetrans
