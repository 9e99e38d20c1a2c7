#include "wavetrans/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "wavetrans/csv.hpp"
#include "wavetrans/inversion.hpp"
#include "wavetrans/svg.hpp"
#include "wavetrans/synthdata.hpp"
#include "wavetrans/tridiag.hpp"

namespace wavetrans {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Experiment {
  json config;
  std::string task;
  fs::path out_dir;
  std::uint64_t seed = 0;
  std::string provenance;

  WaveguideConfig waveguide() const;
  double length(const json& block, const char* plain, const char* in_lambda,
                double fallback) const;
  std::vector<double> ell_list() const;
  FluctuationKind kind() const;
  SeparableSource source(const WaveguideConfig& cfg) const;
  ProcessingWindows processing() const;
  std::pair<double, double> aperture_interval(const WaveguideConfig& cfg) const;

  std::string path(const std::string& name) const { return (out_dir / name).string(); }
  CsvWriter csv(const std::string& name) const { return CsvWriter(path(name), provenance); }
};

double require_number(const json& j, const std::string& field) {
  require(j.contains(field) && j[field].is_number(), errc::config_invalid,
          "missing or non-numeric field '" + field + "'");
  return j[field].get<double>();
}

WaveguideConfig Experiment::waveguide() const {
  require(config.contains("waveguide") && config["waveguide"].is_object(),
          errc::config_invalid, "missing 'waveguide' block");
  const json& w = config["waveguide"];
  WaveguideConfig cfg;
  cfg.c_o = w.value("c_o", 1500.0);
  if (w.contains("omega_o"))
    cfg.omega_o = require_number(w, "omega_o");
  else
    cfg.omega_o = 2.0 * kPi * cfg.c_o / require_number(w, "lambda_o");
  const double lambda = cfg.wavelength();
  cfg.depth = w.contains("X") ? require_number(w, "X")
                              : lambda * require_number(w, "X_in_lambda");
  cfg.ell = w.contains("ell") ? require_number(w, "ell")
                              : lambda * w.value("ell_in_lambda", 1.0);
  cfg.eps = w.value("eps", 0.05);
  cfg.alpha = w.value("alpha", 1.5);
  const std::string kind_name = w.value("fluctuation", "medium");
  if (kind_name == "medium")
    cfg.kind = FluctuationKind::Medium;
  else if (kind_name == "boundary")
    cfg.kind = FluctuationKind::Boundary;
  else if (kind_name == "both")
    cfg.kind = FluctuationKind::Both;
  else
    fail(errc::config_invalid, "waveguide.fluctuation must be medium|boundary|both");
  cfg.validate();
  return cfg;
}

std::vector<double> Experiment::ell_list() const {
  const WaveguideConfig cfg = waveguide();
  std::vector<double> out;
  if (config.contains("scattering") && config["scattering"].contains("ell_in_lambda")) {
    for (const auto& v : config["scattering"]["ell_in_lambda"])
      out.push_back(v.get<double>() * cfg.wavelength());
  } else {
    out.push_back(cfg.ell);
  }
  return out;
}

FluctuationKind Experiment::kind() const {
  if (config.contains("scattering") && config["scattering"].contains("kind")) {
    const std::string name = config["scattering"]["kind"].get<std::string>();
    if (name == "medium") return FluctuationKind::Medium;
    if (name == "boundary") return FluctuationKind::Boundary;
    if (name == "both") return FluctuationKind::Both;
    fail(errc::config_invalid, "scattering.kind must be medium|boundary|both");
  }
  return waveguide().kind;
}

SeparableSource Experiment::source(const WaveguideConfig& cfg) const {
  SeparableSource src;
  src.xi.kind = CrossRangeProfile::Kind::Point;
  src.xi.x0 = cfg.depth / 2.0;
  if (config.contains("source")) {
    const json& s = config["source"];
    if (s.contains("xi")) {
      const json& xi = s["xi"];
      const std::string kind_name = xi.value("kind", "point");
      if (kind_name == "point") {
        src.xi.kind = CrossRangeProfile::Kind::Point;
      } else if (kind_name == "gaussian") {
        src.xi.kind = CrossRangeProfile::Kind::Gaussian;
        src.xi.sigma = xi.contains("sigma") ? require_number(xi, "sigma")
                                            : cfg.depth * require_number(xi, "sigma_in_X");
      } else if (kind_name == "tabulated") {
        src.xi.kind = CrossRangeProfile::Kind::Tabulated;
        src.xi.xs = xi["xs"].get<std::vector<double>>();
        src.xi.values = xi["values"].get<std::vector<double>>();
      } else {
        fail(errc::config_invalid, "source.xi.kind must be point|gaussian|tabulated");
      }
      if (xi.contains("x0"))
        src.xi.x0 = require_number(xi, "x0");
      else if (xi.contains("x0_in_X"))
        src.xi.x0 = cfg.depth * require_number(xi, "x0_in_X");
    }
    if (s.contains("zeta")) {
      const json& zeta = s["zeta"];
      const std::string kind_name = zeta.value("kind", "delta");
      if (kind_name == "delta") {
        src.zeta.kind = RangeProfile::Kind::Delta;
      } else if (kind_name == "gaussian") {
        src.zeta.kind = RangeProfile::Kind::Gaussian;
        src.zeta.width = require_number(zeta, "width");
      } else {
        fail(errc::config_invalid, "source.zeta.kind must be delta|gaussian");
      }
    }
  }
  src.validate(cfg);
  return src;
}

ProcessingWindows Experiment::processing() const {
  ProcessingWindows w;
  if (config.contains("processing")) {
    const json& p = config["processing"];
    w.eps = p.value("eps", w.eps);
    w.alpha = p.value("alpha", w.alpha);
    w.bandwidth_override = p.value("bandwidth", 0.0);
    w.window_h = p.value("H", 0.0);
    w.duration = p.value("T", w.duration);
    w.n_freq = p.value("n_freq", w.n_freq);
    w.max_lag = p.value("max_lag", w.max_lag);
  }
  return w;
}

std::pair<double, double> Experiment::aperture_interval(const WaveguideConfig& cfg) const {
  if (config.contains("aperture") && !config["aperture"].value("full", false)) {
    const json& a = config["aperture"];
    return {require_number(a, "lo"), require_number(a, "hi")};
  }
  return {0.0, cfg.depth};
}

// Z specification: absolute "Z" or "Z_in_Leq" relative to the model.
double resolve_range(const json& block, const ScatteringModel& model, double fallback) {
  if (block.contains("Z")) return block["Z"].get<double>();
  if (block.contains("Z_in_Leq"))
    return block["Z_in_Leq"].get<double>() * model.equipartition_distance();
  return fallback;
}

void write_model_files(const Experiment& ex, const ScatteringModel& model,
                       const std::string& suffix) {
  const int n = model.size();
  {
    CsvWriter out = ex.csv("gamma" + suffix + ".csv");
    out.header({"j", "q", "value"});
    for (int j = 1; j <= n; ++j)
      for (int q = 1; q <= n; ++q)
        out.row({double(j), double(q), model.gamma(j - 1, q - 1)});
  }
  {
    CsvWriter out = ex.csv("spectrum" + suffix + ".csv");
    out.header({"r", "lambda_r"});
    for (int r = 1; r <= n; ++r) out.row({double(r), model.spectrum.lambda(r - 1)});
  }
  {
    CsvWriter out = ex.csv("u" + suffix + ".csv");
    std::vector<std::string> names = {"j"};
    for (int r = 1; r <= n; ++r) names.push_back("u_" + std::to_string(r));
    out.header(names);
    for (int j = 0; j < n; ++j) {
      std::vector<double> row = {double(j + 1)};
      for (int r = 0; r < n; ++r) row.push_back(model.spectrum.u(j, r));
      out.row(row);
    }
  }
  {
    CsvWriter out = ex.csv("mfp" + suffix + ".csv");
    out.header({"j", "S_j", "inv_abs_lambda_j"});
    for (int j = 1; j <= n; ++j) {
      const double inv_lambda =
          j >= 2 ? 1.0 / std::abs(model.spectrum.lambda(j - 1)) : 0.0;
      out.row({double(j), model.mean_free_paths(j - 1), inv_lambda});
    }
  }
}

std::string kind_tag(FluctuationKind kind) {
  return kind == FluctuationKind::Medium ? "medium"
         : kind == FluctuationKind::Boundary ? "boundary"
                                             : "both";
}

int task_gamma(const Experiment& ex) {
  const WaveguideConfig cfg = ex.waveguide();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  for (double ell : ex.ell_list()) {
    const ScatteringModel model = make_scattering_model(basis, ex.kind(), ell);
    const std::string suffix =
        ex.ell_list().size() > 1 ? "_ell" + format_double(ell / cfg.wavelength()) : "";
    write_model_files(ex, model, suffix);
    std::cout << "gamma: " << kind_tag(ex.kind()) << " ell=" << format_double(ell)
              << " N=" << model.size()
              << " Leq=" << format_double(model.equipartition_distance()) << "\n";
  }
  return 0;
}

int task_speeds(const Experiment& ex, const std::vector<double>& ells) {
  const WaveguideConfig cfg = ex.waveguide();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  for (double ell : ells) {
    const ScatteringModel medium = make_scattering_model(basis, FluctuationKind::Medium, ell);
    const ScatteringModel boundary =
        make_scattering_model(basis, FluctuationKind::Boundary, ell);
    const Vec v_medium = transport_speeds(medium);
    const Vec v_boundary = transport_speeds(boundary);
    const std::string suffix = "_ell" + format_double(ell / cfg.wavelength());
    CsvWriter out = ex.csv("speeds" + suffix + ".csv");
    out.header({"mode", "V_random_medium_over_co", "V_random_boundary_over_co",
                "V_ideal_over_co"});
    std::vector<double> xs;
    SvgSeries sm{"medium", {}}, sb{"boundary", {}}, si{"ideal", {}};
    for (int r = 0; r < basis.count; ++r) {
      const double ideal = 1.0 / (basis.beta_prime(r) * cfg.c_o);
      out.row({double(r + 1), v_medium(r) / cfg.c_o, v_boundary(r) / cfg.c_o, ideal});
      xs.push_back(r + 1);
      sm.y.push_back(v_medium(r) / cfg.c_o);
      sb.y.push_back(v_boundary(r) / cfg.c_o);
      si.y.push_back(ideal);
    }
    svg_line_plot(ex.path("speeds" + suffix + ".svg"),
                  "transport speeds / c_o, ell=" + format_double(ell / cfg.wavelength()) +
                      " lambda",
                  xs, {sm, sb, si});
    std::cout << "speeds: ell=" << format_double(ell) << " V1(medium)="
              << format_double(v_medium(0)) << " m/s\n";
  }
  return 0;
}

void write_traces(const Experiment& ex, const std::string& name, const TraceSet& traces) {
  CsvWriter out = ex.csv(name);
  std::vector<std::string> names = {"tau"};
  for (int j = 1; j <= traces.c.cols(); ++j) names.push_back("C_" + std::to_string(j));
  out.header(names);
  for (int t = 0; t < traces.tau.size(); ++t) {
    std::vector<double> row = {traces.tau(t)};
    for (int j = 0; j < traces.c.cols(); ++j) row.push_back(traces.c(t, j));
    out.row(row);
  }
}

int task_forward(const Experiment& ex) {
  const WaveguideConfig cfg = ex.waveguide();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  const ScatteringModel model = make_scattering_model(basis, ex.kind(), ex.ell_list()[0]);
  const auto [lo, hi] = ex.aperture_interval(cfg);
  const ApertureCoupling aperture = aperture_coupling(lo, hi, basis);
  const SourceSpectrum spectrum = source_spectrum(ex.source(cfg), basis);

  const json block = ex.config.value("forward", json::object());
  const double z = resolve_range(block, model, model.equipartition_distance() / 10.0);
  const double spread =
      std::max(z * (basis.beta_prime.maxCoeff() - basis.beta_prime.minCoeff()), 1e-12);
  const double window_h = block.value("H", 24.0 / spread);
  const int n_tau = block.value("n_tau", 512);

  const TraceSet traces = forward_crosscorr(spectrum, model, aperture, z, window_h,
                                            default_tau_grid(model, z, window_h, n_tau));
  write_traces(ex, "traces.csv", traces);
  const Vec m = forward_data_vector(spectrum, model, aperture, z);
  CsvWriter out = ex.csv("m.csv");
  out.header({"j", "M_j"});
  for (int j = 0; j < m.size(); ++j) out.row({double(j + 1), m(j)});
  std::cout << "forward: Z=" << format_double(z) << " H=" << format_double(window_h)
            << " sum(M)=" << format_double(m.sum()) << "\n";
  return 0;
}

int task_synthesize(const Experiment& ex) {
  const WaveguideConfig cfg = ex.waveguide();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  const ScatteringModel model = make_scattering_model(basis, ex.kind(), ex.ell_list()[0]);
  const auto [lo, hi] = ex.aperture_interval(cfg);
  const ApertureCoupling aperture = aperture_coupling(lo, hi, basis);
  const SourceSpectrum spectrum = source_spectrum(ex.source(cfg), basis);
  const ProcessingWindows windows = ex.processing();

  const json block = ex.config.value("synthesize", json::object());
  const double z = resolve_range(block, model, model.equipartition_distance() / 10.0);
  const int n_real = block.value("n_realizations", 8);

  const SyntheticEnsemble ensemble =
      synthesize_ensemble(spectrum, model, aperture, z, windows, ex.seed, n_real);
  {
    CsvWriter out = ex.csv("ensemble.csv");
    out.header({"realization", "freq_index", "mode", "re", "im"});
    for (int r = 0; r < n_real; ++r)
      for (int i = 0; i < ensemble.dhat[r].rows(); ++i)
        for (int j = 0; j < ensemble.dhat[r].cols(); ++j)
          out.row({double(r), double(i), double(j + 1), ensemble.dhat[r](i, j).real(),
                   ensemble.dhat[r](i, j).imag()});
  }
  // Ensemble-mean traces next to the forward model on the same lag geometry.
  Mat mean;
  Vec tau;
  for (int r = 0; r < n_real; ++r) {
    const CrossCorrOutput cc =
        crosscorrelate(ensemble.dhat[r], windows, cfg.omega_o, ensemble.tau_origin);
    if (r == 0) {
      mean = cc.c;
      tau = cc.tau;
    } else {
      mean += cc.c;
    }
  }
  mean /= n_real;
  TraceSet mean_traces{tau, mean};
  write_traces(ex, "synth_traces.csv", mean_traces);
  std::cout << "synthesize: n=" << n_real << " Z=" << format_double(z)
            << " seed=" << ex.seed << "\n";
  return 0;
}

int task_selfavg(const Experiment& ex) {
  const WaveguideConfig cfg = ex.waveguide();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  const ScatteringModel model = make_scattering_model(basis, ex.kind(), ex.ell_list()[0]);
  const auto [lo, hi] = ex.aperture_interval(cfg);
  const ApertureCoupling aperture = aperture_coupling(lo, hi, basis);
  const SourceSpectrum spectrum = source_spectrum(ex.source(cfg), basis);
  const ProcessingWindows windows = ex.processing();

  const json block = ex.config.value("selfavg", json::object());
  const double z = resolve_range(block, model, model.equipartition_distance() / 10.0);
  std::vector<double> factors = block.value("factors", std::vector<double>{1.0, 2.0, 4.0});
  const int n_real = block.value("n_realizations", 400);

  const SelfAveragingReport report = self_averaging_report(
      spectrum, model, aperture, z, windows, factors, ex.seed, n_real);
  CsvWriter out = ex.csv("selfavg.csv");
  out.header({"B_over_omega_o", "var_over_mean_sq"});
  for (const auto& row : report.rows) out.row({row.bandwidth_ratio, row.var_over_mean_sq});
  std::cout << "selfavg: slope=" << format_double(report.slope) << " (expected ~ -1)\n";
  return 0;
}

int task_invert_range(const Experiment& ex) {
  const WaveguideConfig cfg = ex.waveguide();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  const ScatteringModel model = make_scattering_model(basis, ex.kind(), ex.ell_list()[0]);
  const auto [lo, hi] = ex.aperture_interval(cfg);
  const ApertureCoupling aperture = aperture_coupling(lo, hi, basis);
  const SourceSpectrum spectrum = source_spectrum(ex.source(cfg), basis);

  const json block = ex.config.value("inversion", json::object());
  const double z_true = resolve_range(block, model, model.equipartition_distance() / 10.0);
  const double spread =
      std::max(z_true * (basis.beta_prime.maxCoeff() - basis.beta_prime.minCoeff()), 1e-12);
  const double window_h = block.value("H", 24.0 / spread);

  // Arrival-time range search on model-generated traces.
  const TraceSet traces = forward_crosscorr(spectrum, model, aperture, z_true, window_h,
                                            default_tau_grid(model, z_true, window_h));
  const int n_grid = block.value("n_grid", 41);
  const Vec z_grid = Vec::LinSpaced(n_grid, 0.5 * z_true, 1.5 * z_true);
  const RangeEstimate est = estimate_range(traces, model, aperture, window_h, z_grid);
  {
    CsvWriter out = ex.csv("misfit.csv");
    out.header({"Z", "misfit"});
    for (int i = 0; i < z_grid.size(); ++i) out.row({est.grid(i), est.misfit(i)});
  }

  // Case 1: range-profile recovery with the cross-range profile known.
  const Vec m = forward_data_vector(spectrum, model, aperture, z_true);
  const RangeProfileEstimate zeta =
      invert_range_profile(m, spectrum.xi_sq, model, aperture, z_true);
  {
    CsvWriter out = ex.csv("zeta_est.csv");
    out.header({"j", "beta_j", "zeta_sq_true", "zeta_sq_est", "withheld"});
    for (int j = 0; j < model.size(); ++j)
      out.row({double(j + 1), basis.beta(j), spectrum.zeta_sq(basis.beta(j)),
               zeta.zeta_sq(j), double(zeta.withheld[j])});
  }
  std::cout << "invert-range: Z_true=" << format_double(z_true)
            << " Z_hat=" << format_double(est.z_hat)
            << (est.at_boundary ? " (AtBoundary)" : "") << "\n";
  return 0;
}

int task_invert_crossrange(const Experiment& ex) {
  const WaveguideConfig cfg = ex.waveguide();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  const ScatteringModel model = make_scattering_model(basis, ex.kind(), ex.ell_list()[0]);
  const auto [lo, hi] = ex.aperture_interval(cfg);
  const ApertureCoupling aperture = aperture_coupling(lo, hi, basis);
  const SourceSpectrum spectrum = source_spectrum(ex.source(cfg), basis);

  const json block = ex.config.value("inversion", json::object());
  const double z = resolve_range(block, model, model.equipartition_distance() / 40.0);
  const int cutoff = block.value("J", std::min(30, model.size()));
  const double cap = block.value("amplification_cap", 10.0);

  const Vec m = forward_data_vector(spectrum, model, aperture, z);
  const CrossRangeEstimate est = invert_crossrange(m, model, aperture, z, cutoff, cap);
  {
    CsvWriter out = ex.csv("xi_est.csv");
    out.header({"j", "xi_sq_true", "xi_sq_est", "error_bound", "clipped"});
    for (int j = 0; j < model.size(); ++j)
      out.row({double(j + 1), spectrum.xi_sq(j), est.xi_sq(j), est.error_bound(j),
               double(est.clipped[j])});
  }
  {
    CsvWriter out = ex.csv("rxi.csv");
    out.header({"x", "R_xi"});
    for (int i = 0; i < est.x_grid.size(); ++i) out.row({est.x_grid(i), est.r_xi(i)});
  }
  std::cout << "invert-crossrange: J=" << cutoff << " Z=" << format_double(z)
            << " quality=" << (est.quality == EstimateQuality::Good ? "Good" : "Poor")
            << " x_candidates={" << format_double(est.x_candidates.first) << ", "
            << format_double(est.x_candidates.second) << "}\n";
  return 0;
}

int task_wideband(const Experiment& ex) {
  const WaveguideConfig cfg = ex.waveguide();
  const json block = ex.config.value("wideband", json::object());
  const double x0 = block.contains("x0") ? block["x0"].get<double>()
                                         : cfg.depth * block.value("x0_in_X", 1.0 / kPi);
  const int n_x = block.value("n_x_grid", 512);
  std::vector<std::pair<double, double>> band_specs;
  if (block.contains("bands")) {
    for (const auto& b : block["bands"])
      band_specs.emplace_back(b[0].get<double>(), b[1].get<double>());
  } else {
    band_specs = {{1.0, 2.0}, {1.0, 3.0}, {0.5, 3.0}};
  }
  const double step = block.value("step", 0.02);

  CsvWriter ranks = ex.csv("ranks.csv");
  ranks.header({"band_lo", "band_hi", "rows", "cols", "rank"});
  const Vec x_grid = Vec::LinSpaced(n_x, 0.0, cfg.depth);
  int panel = 0;
  for (const auto& [b_lo, b_hi] : band_specs) {
    const auto omegas = band_grid(b_lo * cfg.omega_o, b_hi * cfg.omega_o, step * cfg.omega_o);
    const Vec theta = wideband_theta(omegas, cfg, [&](int q) {
      const double s = std::sin(kPi * q * x0 / cfg.depth);
      return s * s;
    });
    const WidebandSystem sys = wideband_solve(omegas, theta, cfg, x_grid);
    ranks.row({b_lo, b_hi, double(sys.b.rows()), double(sys.b.cols()), double(sys.rank)});
    const std::string suffix = "_band" + std::to_string(++panel);
    {
      CsvWriter out = ex.csv("obj" + suffix + ".csv");
      out.header({"x", "objective"});
      for (int i = 0; i < x_grid.size(); ++i) out.row({x_grid(i), sys.objective(i)});
    }
    {
      CsvWriter out = ex.csv("gamma_sol" + suffix + ".csv");
      out.header({"j", "gamma_j"});
      for (int j = 0; j < sys.gamma.size(); ++j) out.row({double(j + 1), sys.gamma(j)});
    }
    {
      CsvWriter out = ex.csv("minima" + suffix + ".csv");
      out.header({"x", "objective"});
      for (int idx : sys.minima) out.row({x_grid(idx), sys.objective(idx)});
    }
    std::vector<double> xs(x_grid.data(), x_grid.data() + x_grid.size());
    SvgSeries obj{"Obj", std::vector<double>(sys.objective.data(),
                                             sys.objective.data() + sys.objective.size())};
    svg_line_plot(ex.path("obj" + suffix + ".svg"),
                  "objective, band (" + format_double(b_lo) + "," + format_double(b_hi) +
                      ") omega_o",
                  xs, {obj});
    std::cout << "wideband: band (" << b_lo << "," << b_hi << ") shape " << sys.b.rows()
              << "x" << sys.b.cols() << " rank " << sys.rank
              << (sys.ambiguous ? " ambiguous" : "") << "\n";
  }
  return 0;
}

int task_tridiag(const Experiment& ex) {
  const WaveguideConfig cfg = ex.waveguide();
  const json block = ex.config.value("tridiag", json::object());
  std::vector<int> sweep = block.value("Ns", std::vector<int>{10, 20, 40, 80});
  std::vector<double> ratios = block.value("koell_over_N", std::vector<double>{0.5, 1.0});
  const double k_o = cfg.k_o();

  CsvWriter out = ex.csv("tridiag_report.csv");
  out.header({"koell_over_N", "N", "orthonormal", "nonpositive", "null_dim_one", "norm",
              "norm_slope", "tail_constant", "all_pass"});
  bool all = true;
  for (double ratio : ratios) {
    if (ratio < 0.1 || ratio > 10.0)
      std::cerr << "wavetrans: nearest-neighbor model assumes k_o*ell = O(N); "
                   "k_o*ell/N = "
                << ratio << "\n";
    auto family = [&](int n) {
      WaveguideConfig local = cfg;
      local.depth = (n + 0.3) * cfg.wavelength() / 2.0;
      local.ell = ratio * n / k_o;
      const ModeBasis basis = mode_basis(cfg.omega_o, local);
      return gamma_medium_range_white(basis, local.ell);
    };
    const PropositionReport report = verify_proposition(family, k_o, sweep);
    for (const auto& row : report.rows)
      out.row({ratio, double(row.n), double(row.checks.orthonormal),
               double(row.checks.nonpositive), double(row.checks.null_dim_one), row.norm,
               report.norm_slope, report.tail_constant, double(report.all_pass)});
    all = all && report.all_pass;
    std::cout << "tridiag: koell/N=" << format_double(ratio)
              << " slope=" << format_double(report.norm_slope)
              << " pass=" << (report.all_pass ? "yes" : "no") << "\n";
  }
  return all ? 0 : 3;
}

int task_spectrum(const Experiment& ex) { return task_gamma(ex); }

// ---- figure reproductions ----

int figure_u_and_scales(const Experiment& ex, FluctuationKind kind, const std::string& tag) {
  const WaveguideConfig cfg = ex.waveguide();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  int panel = 0;
  for (double ellf : {1.0, 3.0, 5.0}) {
    const double ell = ellf * cfg.wavelength();
    const ScatteringModel model = make_scattering_model(basis, kind, ell);
    const std::string suffix = "_ell" + format_double(ellf);
    write_model_files(ex, model, suffix);
    svg_heatmap(ex.path(tag + "_u" + suffix + ".svg"),
                "|U|, " + kind_tag(kind) + ", ell=" + format_double(ellf) + " lambda",
                model.spectrum.u.cwiseAbs());
    std::vector<double> xs;
    SvgSeries mfp{"S_j", {}}, inv{"1/|lambda_j|", {}};
    for (int j = 0; j < model.size(); ++j) {
      xs.push_back(j + 1);
      mfp.y.push_back(model.mean_free_paths(j));
      // the j = 1 slot repeats 1/|lambda_2|: the null eigenvalue has no scale
      inv.y.push_back(1.0 / std::abs(model.spectrum.lambda(std::max(j, 1))));
    }
    svg_line_plot(ex.path(tag + "_scales" + suffix + ".svg"),
                  "scattering mean free paths and 1/|lambda_j|", xs, {mfp, inv}, true);
    ++panel;
  }
  std::cout << tag << ": " << panel << " panels written\n";
  return 0;
}

int figure_inversion(const Experiment& ex) {
  const WaveguideConfig cfg = ex.waveguide();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  const ScatteringModel model =
      make_scattering_model(basis, FluctuationKind::Medium, cfg.wavelength());
  const ApertureCoupling aperture = full_aperture(basis);
  const double l_eq = model.equipartition_distance();

  int panel = 0;
  for (double sigma_frac : {1.0 / 30.0, 1.0 / 15.0}) {
    SeparableSource src;
    src.xi.kind = CrossRangeProfile::Kind::Gaussian;
    src.xi.x0 = cfg.depth / 4.0;
    src.xi.sigma = cfg.depth * sigma_frac;
    src.validate(cfg);
    const SourceSpectrum spectrum = source_spectrum(src, basis);
    const std::string side = (panel == 0) ? "_narrow" : "_wide";

    CsvWriter est_csv = ex.csv("fig5_estimates" + side + ".csv");
    est_csv.header({"j", "xi_sq_true", "xi_sq_J30", "xi_sq_J7", "bound_J30", "bound_J7"});
    CsvWriter rxi_csv = ex.csv("fig5_rxi" + side + ".csv");
    rxi_csv.header({"x", "R_true", "R_J30", "R_J7"});

    const Vec m30 = forward_data_vector(spectrum, model, aperture, l_eq / 40.0);
    const Vec m7 = forward_data_vector(spectrum, model, aperture, l_eq / 10.0);
    const CrossRangeEstimate e30 = invert_crossrange(m30, model, aperture, l_eq / 40.0, 30);
    const CrossRangeEstimate e7 = invert_crossrange(m7, model, aperture, l_eq / 10.0, 7);
    for (int j = 0; j < model.size(); ++j)
      est_csv.row({double(j + 1), spectrum.xi_sq(j), e30.xi_sq(j), e7.xi_sq(j),
                   e30.error_bound(j), e7.error_bound(j)});
    const XiAutocorrelation truth =
        autocorrelation_xi(spectrum.xi_sq, model.size(), e30.x_grid, cfg.depth);
    for (int i = 0; i < e30.x_grid.size(); ++i)
      rxi_csv.row({e30.x_grid(i), truth.r(i), e30.r_xi(i), e7.r_xi(i)});
    std::cout << "fig5" << side << ": J=30 "
              << (e30.quality == EstimateQuality::Good ? "Good" : "Poor") << ", J=7 "
              << (e7.quality == EstimateQuality::Good ? "Good" : "Poor") << "\n";
    ++panel;
  }
  return 0;
}

int figure_lambda_pert(const Experiment& ex) {
  const WaveguideConfig cfg = ex.waveguide();
  const ModeBasis basis = mode_basis(cfg.omega_o, cfg);
  const double window_h = 0.1 * cfg.omega_o * cfg.eps * cfg.eps;
  CsvWriter out = ex.csv("lambda_pert.csv");
  out.header({"mode", "rel_error_medium", "rel_error_boundary"});
  const ScatteringModel medium =
      make_scattering_model(basis, FluctuationKind::Medium, cfg.wavelength());
  const ScatteringModel boundary =
      make_scattering_model(basis, FluctuationKind::Boundary, cfg.wavelength());
  const PerturbationDiagnostics dm = perturbation_diagnostics(medium, window_h);
  const PerturbationDiagnostics db = perturbation_diagnostics(boundary, window_h);
  std::vector<double> xs;
  SvgSeries sm{"medium", {}}, sb{"boundary", {}};
  for (int j = 0; j < basis.count; ++j) {
    out.row({double(j + 1), dm.per_mode_error(j), db.per_mode_error(j)});
    xs.push_back(j + 1);
    sm.y.push_back(dm.per_mode_error(j));
    sb.y.push_back(db.per_mode_error(j));
  }
  svg_line_plot(ex.path("lambda_pert.svg"), "eigenvalue perturbation relative error", xs,
                {sm, sb}, true);
  std::cout << "lambda_pert: H=" << format_double(window_h)
            << " worst(medium)=" << format_double(dm.worst_rel_error) << "\n";
  return 0;
}

int reproduce_figure(const Experiment& ex, const std::string& figure) {
  if (figure == "fig2") return figure_u_and_scales(ex, FluctuationKind::Medium, "fig2");
  if (figure == "fig3") return figure_u_and_scales(ex, FluctuationKind::Boundary, "fig3");
  if (figure == "fig4") {
    const double lambda = ex.waveguide().wavelength();
    return task_speeds(ex, {lambda, 3.0 * lambda, 5.0 * lambda});
  }
  if (figure == "fig5") return figure_inversion(ex);
  if (figure == "fig6") return task_wideband(ex);
  if (figure == "lambda_pert") return figure_lambda_pert(ex);
  fail(errc::unknown_figure, "unknown figure id '" + figure + "'");
}

int dispatch(const Experiment& ex, const std::string& figure) {
  if (!figure.empty()) return reproduce_figure(ex, figure);
  if (ex.task == "Gamma") return task_gamma(ex);
  if (ex.task == "Spectrum") return task_spectrum(ex);
  if (ex.task == "Speeds") return task_speeds(ex, ex.ell_list());
  if (ex.task == "Forward") return task_forward(ex);
  if (ex.task == "Synthesize") return task_synthesize(ex);
  if (ex.task == "SelfAvg") return task_selfavg(ex);
  if (ex.task == "InvertRange") return task_invert_range(ex);
  if (ex.task == "InvertCrossrange") return task_invert_crossrange(ex);
  if (ex.task == "Wideband") return task_wideband(ex);
  if (ex.task == "Tridiag") return task_tridiag(ex);
  fail(errc::config_invalid,
       "unknown task '" + ex.task +
           "' (expected Gamma|Spectrum|Speeds|Forward|Synthesize|SelfAvg|InvertRange|"
           "InvertCrossrange|Wideband|Tridiag)");
}

int run_impl(const std::string& config_text, const std::string& out_dir_override,
             long long seed_override, const std::string& figure_id,
             std::string* error_message) {
  try {
    Experiment ex;
    ex.config = json::parse(config_text, nullptr, true, true);
    require(ex.config.is_object(), errc::config_invalid, "config root must be an object");
    ex.task = ex.config.value("task", figure_id.empty() ? "" : "Gamma");
    require(!ex.task.empty() || !figure_id.empty(), errc::config_invalid,
            "missing 'task' field");
    ex.out_dir = out_dir_override.empty() ? ex.config.value("output_dir", "out")
                                          : out_dir_override;
    ex.seed = seed_override >= 0 ? static_cast<std::uint64_t>(seed_override)
                                 : ex.config.value("seed", 0ULL);
    std::error_code fs_error;
    fs::create_directories(ex.out_dir, fs_error);
    require(!fs_error, errc::config_invalid,
            "cannot create output directory " + ex.out_dir.string());
    json canonical = ex.config;
    canonical["seed"] = ex.seed;
    ex.provenance = std::string("wavetrans ") + kVersion + ", config=" +
                    std::to_string(fnv1a_hash(canonical.dump())) + ", seed=" +
                    std::to_string(ex.seed);
    return dispatch(ex, figure_id);
  } catch (const json::exception& e) {
    if (error_message) *error_message = std::string("config parse error: ") + e.what();
    std::cerr << "config parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    if (error_message) *error_message = e.what();
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case errc::config_invalid:
      case errc::unknown_figure:
      case errc::degenerate_cutoff:
      case errc::out_of_domain:
      case errc::empty_aperture:
      case errc::invalid_correlation_length:
      case errc::unsupported_profile:
        return 2;  // rejected configuration
      default:
        return 3;  // numeric failure
    }
  } catch (const std::exception& e) {
    if (error_message) *error_message = e.what();
    std::cerr << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int run_experiment(const std::string& config_path, const std::string& out_dir_override,
                   long long seed_override, const std::string& figure_id) {
  std::ifstream in(config_path);
  if (!in.good()) {
    std::cerr << "cannot open config file " << config_path << "\n";
    return 2;
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return run_impl(text, out_dir_override, seed_override, figure_id, nullptr);
}

int run_experiment_json(const std::string& config_json, const std::string& out_dir_override,
                        long long seed_override, const std::string& figure_id,
                        std::string* error_message) {
  return run_impl(config_json, out_dir_override, seed_override, figure_id, error_message);
}

}  // namespace wavetrans
