#include "wavetrans.h"

#include <cstring>
#include <string>

#include "wavetrans/experiment.hpp"
#include "wavetrans/inversion.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

wt_status map_code(wavetrans::errc code) {
  using wavetrans::errc;
  switch (code) {
    case errc::config_invalid:
    case errc::unknown_figure:
    case errc::invalid_correlation_length:
    case errc::dimension_mismatch:
      return WT_ERR_CONFIG;
    case errc::out_of_domain:
    case errc::empty_aperture:
    case errc::lag_out_of_range:
    case errc::too_few_modes:
      return WT_ERR_DOMAIN;
    default:
      return WT_ERR_NUMERIC;
  }
}

template <typename Fn>
wt_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const wavetrans::Error& e) {
    set_error(e.what());
    return map_code(e.code());
  } catch (const std::exception& e) {
    set_error(e.what());
    return WT_ERR_NUMERIC;
  }
}

wavetrans::FluctuationKind to_kind(wt_fluctuation kind) {
  switch (kind) {
    case WT_FLUCTUATION_BOUNDARY: return wavetrans::FluctuationKind::Boundary;
    case WT_FLUCTUATION_BOTH: return wavetrans::FluctuationKind::Both;
    default: return wavetrans::FluctuationKind::Medium;
  }
}

wt_status copy_vector(const wavetrans::Vec& v, double* out, size_t len) {
  if (out == nullptr) {
    set_error("null output pointer");
    return WT_ERR_NULL;
  }
  if (len < static_cast<size_t>(v.size())) {
    set_error("output buffer holds " + std::to_string(len) + " of " +
              std::to_string(v.size()) + " values");
    return WT_ERR_SIZE;
  }
  std::memcpy(out, v.data(), sizeof(double) * v.size());
  return WT_OK;
}

}  // namespace

struct wt_waveguide {
  wavetrans::WaveguideConfig config;
};

struct wt_mode_basis {
  wavetrans::ModeBasis basis;
};

struct wt_scattering {
  wavetrans::ScatteringModel model;
};

extern "C" {

const char* wt_version(void) { return wavetrans::kVersion; }

const char* wt_last_error(void) { return g_last_error.c_str(); }

int wt_run(const char* config_path, const char* out_dir, long long seed,
           const char* figure_id) {
  if (config_path == nullptr) {
    set_error("null config path");
    return WT_ERR_CONFIG;
  }
  return wavetrans::run_experiment(config_path, out_dir ? out_dir : "", seed,
                                   figure_id ? figure_id : "");
}

wt_waveguide* wt_waveguide_create(double c_o, double omega_o, double depth, double ell,
                                  double eps, double alpha, wt_fluctuation kind) {
  wt_waveguide* handle = nullptr;
  guarded([&]() -> wt_status {
    wavetrans::WaveguideConfig config;
    config.c_o = c_o;
    config.omega_o = omega_o;
    config.depth = depth;
    config.ell = ell;
    config.eps = eps;
    config.alpha = alpha;
    config.kind = to_kind(kind);
    config.validate();
    handle = new wt_waveguide{config};
    return WT_OK;
  });
  return handle;
}

void wt_waveguide_free(wt_waveguide* w) { delete w; }

wt_status wt_num_propagating(const wt_waveguide* w, double omega, int* count_out) {
  if (w == nullptr || count_out == nullptr) {
    set_error("null argument");
    return WT_ERR_NULL;
  }
  return guarded([&]() -> wt_status {
    *count_out = wavetrans::num_propagating(omega, w->config);
    return WT_OK;
  });
}

wt_status wt_eigenfunction(const wt_waveguide* w, int mode, double x, double* value_out) {
  if (w == nullptr || value_out == nullptr) {
    set_error("null argument");
    return WT_ERR_NULL;
  }
  return guarded([&]() -> wt_status {
    *value_out = wavetrans::eigenfunction(mode, x, w->config);
    return WT_OK;
  });
}

wt_mode_basis* wt_mode_basis_create(const wt_waveguide* w, double omega) {
  if (w == nullptr) {
    set_error("null waveguide");
    return nullptr;
  }
  wt_mode_basis* handle = nullptr;
  guarded([&]() -> wt_status {
    handle = new wt_mode_basis{wavetrans::mode_basis(omega, w->config)};
    return WT_OK;
  });
  return handle;
}

void wt_mode_basis_free(wt_mode_basis* basis) { delete basis; }

wt_status wt_mode_basis_count(const wt_mode_basis* basis, int* count_out) {
  if (basis == nullptr || count_out == nullptr) {
    set_error("null argument");
    return WT_ERR_NULL;
  }
  *count_out = basis->basis.count;
  return WT_OK;
}

wt_status wt_mode_basis_wavenumbers(const wt_mode_basis* basis, double* beta_out,
                                    size_t len) {
  if (basis == nullptr) {
    set_error("null basis");
    return WT_ERR_NULL;
  }
  return copy_vector(basis->basis.beta, beta_out, len);
}

wt_status wt_mode_basis_slownesses(const wt_mode_basis* basis, double* slowness_out,
                                   size_t len) {
  if (basis == nullptr) {
    set_error("null basis");
    return WT_ERR_NULL;
  }
  return copy_vector(basis->basis.beta_prime, slowness_out, len);
}

wt_scattering* wt_scattering_create(const wt_mode_basis* basis, wt_fluctuation kind,
                                    double ell) {
  if (basis == nullptr) {
    set_error("null basis");
    return nullptr;
  }
  wt_scattering* handle = nullptr;
  guarded([&]() -> wt_status {
    handle = new wt_scattering{
        wavetrans::make_scattering_model(basis->basis, to_kind(kind), ell)};
    return WT_OK;
  });
  return handle;
}

void wt_scattering_free(wt_scattering* model) { delete model; }

wt_status wt_scattering_size(const wt_scattering* model, int* n_out) {
  if (model == nullptr || n_out == nullptr) {
    set_error("null argument");
    return WT_ERR_NULL;
  }
  *n_out = model->model.size();
  return WT_OK;
}

wt_status wt_scattering_gamma(const wt_scattering* model, double* gamma_out, size_t len) {
  if (model == nullptr) {
    set_error("null model");
    return WT_ERR_NULL;
  }
  const int n = model->model.size();
  if (gamma_out == nullptr) {
    set_error("null output pointer");
    return WT_ERR_NULL;
  }
  if (len < static_cast<size_t>(n) * n) {
    set_error("buffer too small for N*N gamma");
    return WT_ERR_SIZE;
  }
  for (int j = 0; j < n; ++j)
    for (int q = 0; q < n; ++q) gamma_out[j * n + q] = model->model.gamma(j, q);
  return WT_OK;
}

wt_status wt_scattering_eigenvalues(const wt_scattering* model, double* lambda_out,
                                    size_t len) {
  if (model == nullptr) {
    set_error("null model");
    return WT_ERR_NULL;
  }
  return copy_vector(model->model.spectrum.lambda, lambda_out, len);
}

wt_status wt_scattering_mean_free_paths(const wt_scattering* model, double* s_out,
                                        size_t len) {
  if (model == nullptr) {
    set_error("null model");
    return WT_ERR_NULL;
  }
  return copy_vector(model->model.mean_free_paths, s_out, len);
}

wt_status wt_scattering_equipartition_distance(const wt_scattering* model, double* leq_out) {
  if (model == nullptr || leq_out == nullptr) {
    set_error("null argument");
    return WT_ERR_NULL;
  }
  return guarded([&]() -> wt_status {
    *leq_out = model->model.equipartition_distance();
    return WT_OK;
  });
}

wt_status wt_transport_speeds(const wt_scattering* model, double* v_out, size_t len) {
  if (model == nullptr) {
    set_error("null model");
    return WT_ERR_NULL;
  }
  return guarded([&]() -> wt_status {
    return copy_vector(wavetrans::transport_speeds(model->model), v_out, len);
  });
}

wt_status wt_transport_kernel(const wt_scattering* model, double z, double* kernel_out,
                              size_t len) {
  if (model == nullptr || kernel_out == nullptr) {
    set_error("null argument");
    return WT_ERR_NULL;
  }
  return guarded([&]() -> wt_status {
    const int n = model->model.size();
    if (len < static_cast<size_t>(n) * n) {
      set_error("buffer too small for N*N kernel");
      return WT_ERR_SIZE;
    }
    const wavetrans::CMat kernel = wavetrans::kernel_hat(model->model, 0.0, z);
    for (int j = 0; j < n; ++j)
      for (int q = 0; q < n; ++q) kernel_out[j * n + q] = kernel(j, q).real();
    return WT_OK;
  });
}

wt_status wt_forward_data_vector(const wt_scattering* model, double a_lo, double a_hi,
                                 const double* xi_sq, const double* zeta_sq_at_beta,
                                 double z, double* m_out, size_t len) {
  if (model == nullptr || xi_sq == nullptr || zeta_sq_at_beta == nullptr ||
      m_out == nullptr) {
    set_error("null argument");
    return WT_ERR_NULL;
  }
  return guarded([&]() -> wt_status {
    const int n = model->model.size();
    const wavetrans::ApertureCoupling aperture =
        wavetrans::aperture_coupling(a_lo, a_hi, model->model.basis);
    wavetrans::SourceSpectrum spectrum;
    spectrum.xi_sq = Eigen::Map<const wavetrans::Vec>(xi_sq, n);
    // Bind the per-mode |zeta_hat|^2 samples to the basis wavenumbers.
    std::vector<double> zeta(zeta_sq_at_beta, zeta_sq_at_beta + n);
    const wavetrans::Vec beta = model->model.basis.beta;
    spectrum.zeta_sq = [zeta, beta](double b) {
      for (int q = 0; q < beta.size(); ++q)
        if (b == beta(q)) return zeta[q];
      return zeta.back();
    };
    return copy_vector(
        wavetrans::forward_data_vector(spectrum, model->model, aperture, z), m_out, len);
  });
}

wt_status wt_invert_crossrange(const wt_scattering* model, double a_lo, double a_hi,
                               const double* m, double z, int cutoff, double cap,
                               double* xi_sq_out, double* bounds_out, size_t len) {
  if (model == nullptr || m == nullptr || xi_sq_out == nullptr) {
    set_error("null argument");
    return WT_ERR_NULL;
  }
  return guarded([&]() -> wt_status {
    const int n = model->model.size();
    const wavetrans::ApertureCoupling aperture =
        wavetrans::aperture_coupling(a_lo, a_hi, model->model.basis);
    const wavetrans::Vec data = Eigen::Map<const wavetrans::Vec>(m, n);
    const double amplification_cap = cap > 0.0 ? cap : 10.0;
    const wavetrans::CrossRangeEstimate est = wavetrans::invert_crossrange(
        data, model->model, aperture, z, cutoff, amplification_cap);
    const wt_status status = copy_vector(est.xi_sq, xi_sq_out, len);
    if (status != WT_OK) return status;
    if (bounds_out != nullptr) return copy_vector(est.error_bound, bounds_out, len);
    return WT_OK;
  });
}

}  // extern "C"
