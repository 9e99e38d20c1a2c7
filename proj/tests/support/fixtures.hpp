// Shared test fixture: the simulation setup used throughout the paper-scale
// checks (c_o = 1500 m/s, 1 kHz center, X = 20.3 wavelengths, N = 40).
#pragma once

#include "wavetrans/scattering.hpp"

namespace fixtures {

inline wavetrans::WaveguideConfig paper_config(double ell_in_lambda = 1.0) {
  wavetrans::WaveguideConfig cfg;
  cfg.c_o = 1500.0;
  cfg.omega_o = 2.0 * wavetrans::kPi * 1000.0;
  cfg.depth = 20.3 * cfg.wavelength();
  cfg.ell = ell_in_lambda * cfg.wavelength();
  return cfg;
}

inline wavetrans::ModeBasis paper_basis(double omega_factor = 1.0) {
  const wavetrans::WaveguideConfig cfg = paper_config();
  return wavetrans::mode_basis(omega_factor * cfg.omega_o, cfg);
}

inline wavetrans::ScatteringModel paper_model(wavetrans::FluctuationKind kind,
                                              double ell_in_lambda) {
  const wavetrans::WaveguideConfig cfg = paper_config(ell_in_lambda);
  return wavetrans::make_scattering_model(wavetrans::mode_basis(cfg.omega_o, cfg), kind,
                                          cfg.ell);
}

}  // namespace fixtures
