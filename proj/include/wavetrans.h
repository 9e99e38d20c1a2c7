/* wavetrans C API: incoherent wave-energy transport in random acoustic
 * waveguides and inversion of mode-energy data for source properties.
 *
 * Handles are opaque; every function returns a wt_status (0 on success)
 * unless documented otherwise. On failure wt_last_error() describes the
 * problem for the calling thread. Mode indices are 1-based.
 */
#ifndef WAVETRANS_H
#define WAVETRANS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wt_status {
  WT_OK = 0,
  WT_ERR_CONFIG = 2,   /* invalid configuration / arguments */
  WT_ERR_NUMERIC = 3,  /* numeric failure in a solver */
  WT_ERR_NULL = 4,     /* null handle or output pointer */
  WT_ERR_DOMAIN = 5,   /* argument outside its domain */
  WT_ERR_SIZE = 6      /* output buffer too small */
} wt_status;

typedef struct wt_waveguide wt_waveguide;
typedef struct wt_mode_basis wt_mode_basis;
typedef struct wt_scattering wt_scattering;

typedef enum wt_fluctuation {
  WT_FLUCTUATION_MEDIUM = 0,
  WT_FLUCTUATION_BOUNDARY = 1,
  WT_FLUCTUATION_BOTH = 2
} wt_fluctuation;

const char* wt_version(void);
/* Message for the most recent failure on this thread ("" when none). */
const char* wt_last_error(void);

/* ---- experiment runner (the CLI surface) ----
 * Runs the JSON-configured task; returns 0, 2 (config error) or 3
 * (numeric error), matching the CLI exit codes. out_dir may be NULL to
 * use the config's output_dir; seed < 0 keeps the config seed; figure_id
 * may be NULL or one of fig2|fig3|fig4|fig5|fig6|lambda_pert. */
int wt_run(const char* config_path, const char* out_dir, long long seed,
           const char* figure_id);

/* ---- waveguide and mode basis ---- */
wt_waveguide* wt_waveguide_create(double c_o, double omega_o, double depth, double ell,
                                  double eps, double alpha, wt_fluctuation kind);
void wt_waveguide_free(wt_waveguide* w);

wt_status wt_num_propagating(const wt_waveguide* w, double omega, int* count_out);
/* phi_j(x) = sqrt(2/X) sin(pi j x / X). */
wt_status wt_eigenfunction(const wt_waveguide* w, int mode, double x, double* value_out);

wt_mode_basis* wt_mode_basis_create(const wt_waveguide* w, double omega);
void wt_mode_basis_free(wt_mode_basis* basis);
wt_status wt_mode_basis_count(const wt_mode_basis* basis, int* count_out);
wt_status wt_mode_basis_wavenumbers(const wt_mode_basis* basis, double* beta_out, size_t len);
wt_status wt_mode_basis_slownesses(const wt_mode_basis* basis, double* slowness_out,
                                   size_t len);

/* ---- scattering model ---- */
wt_scattering* wt_scattering_create(const wt_mode_basis* basis, wt_fluctuation kind,
                                    double ell);
void wt_scattering_free(wt_scattering* model);
wt_status wt_scattering_size(const wt_scattering* model, int* n_out);
/* Row-major N x N generator (zero row sums). */
wt_status wt_scattering_gamma(const wt_scattering* model, double* gamma_out, size_t len);
/* Eigenvalues sorted decreasing; lambda_1 = 0. */
wt_status wt_scattering_eigenvalues(const wt_scattering* model, double* lambda_out,
                                    size_t len);
wt_status wt_scattering_mean_free_paths(const wt_scattering* model, double* s_out,
                                        size_t len);
wt_status wt_scattering_equipartition_distance(const wt_scattering* model, double* leq_out);
/* Transport speeds V_r (m/s), sorted by eigenvalue index. */
wt_status wt_transport_speeds(const wt_scattering* model, double* v_out, size_t len);
/* e^{Gamma Z}, row-major. */
wt_status wt_transport_kernel(const wt_scattering* model, double z, double* kernel_out,
                              size_t len);

/* ---- forward map and cross-range inversion ----
 * xi_sq: |xi_hat_l|^2 (length N); zeta_sq_at_beta: |zeta_hat(beta_q)|^2
 * (length N); aperture [a_lo, a_hi] within [0, X]. */
wt_status wt_forward_data_vector(const wt_scattering* model, double a_lo, double a_hi,
                                 const double* xi_sq, const double* zeta_sq_at_beta,
                                 double z, double* m_out, size_t len);
/* Spectral cut-off recovery of |xi_hat|^2 from the data vector m.
 * bounds_out may be NULL; pass cap <= 0 for the default amplification cap 10. */
wt_status wt_invert_crossrange(const wt_scattering* model, double a_lo, double a_hi,
                               const double* m, double z, int cutoff, double cap,
                               double* xi_sq_out, double* bounds_out, size_t len);

#ifdef __cplusplus
}
#endif

#endif /* WAVETRANS_H */
