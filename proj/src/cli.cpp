#include "tfloc/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "tfloc/ginibre.hpp"
#include "tfloc/parallel.hpp"

namespace tfloc::cli {

using io::json;

namespace {

namespace fs = std::filesystem;

json plane_json(const PlaneGrid& g) {
  json j;
  j["nx"] = g.nx();
  j["nxi"] = g.nxi();
  j["dx"] = g.dx();
  j["dxi"] = g.dxi();
  j["x0"] = g.x0();
  j["xi0"] = g.xi0();
  return j;
}

json run_header(const ExperimentConfig& cfg, const Run& r) {
  json j;
  j["window"] = r.setup.window.label();
  j["domain"] = cfg.domain_kind;
  j["dimension"] = r.dec.dimension;
  j["dt"] = r.setup.window.grid().dt();
  j["plane"] = plane_json(r.setup.mask.grid());
  return j;
}

json warnings_json(const Diagnostics& d) {
  json w = json::array();
  for (const auto& s : d.warnings) w.push_back(s);
  return w;
}

Run run_config(const ExperimentConfig& cfg, std::ostream& log) {
  Setup s = make_setup(cfg.window, cfg.domain, 1.0, cfg.resolution);
  log << "dimension " << s.window.grid().size() << ", plane " << s.mask.grid().nx() << "x" << s.mask.grid().nxi()
      << ", measure " << measure(s.mask) << "\n";
  for (const auto& w : s.diag.warnings) log << "warning: " << w << "\n";
  return run(std::move(s));
}

void write_json(const fs::path& path, const json& j) { io::write_atomic(path, io::dump_json(j)); }

double bilinear(const PlaneField& f, PlanePoint p) {
  const PlaneGrid& g = f.grid();
  const double u = (p.x - g.x0()) / g.dx();
  const double w = (p.xi - g.xi0()) / g.dxi();
  const auto at = [&](long j, long k) -> double {
    if (j < 0 || k < 0 || j >= static_cast<long>(g.nx()) || k >= static_cast<long>(g.nxi())) return 0.0;
    return f.at(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
  };
  const long j0 = static_cast<long>(std::floor(u));
  const long k0 = static_cast<long>(std::floor(w));
  const double a = u - static_cast<double>(j0), b = w - static_cast<double>(k0);
  return (1 - a) * (1 - b) * at(j0, k0) + a * (1 - b) * at(j0 + 1, k0) + (1 - a) * b * at(j0, k0 + 1) +
         a * b * at(j0 + 1, k0 + 1);
}

std::string key(double v) { return io::format_double(v); }

}  // namespace

void cmd_spectrum(const ExperimentConfig& cfg, std::ostream& log) {
  const Run r = run_config(cfg, log);
  io::CsvTable csv({"k", "lambda", "residual"});
  for (std::size_t k = 0; k < r.dec.size(); ++k)
    csv.row().cell(k + 1).cell(r.dec.eigenvalues[k]).cell(r.dec.residuals[k]);

  const double mes = measure(r.setup.mask);
  const double per = perimeter(r.setup.mask);
  const TracePair tp = trace_pair(r.op, r.setup.theta, &r.dec);
  json rep = run_header(cfg, r);
  rep["measure"] = mes;
  rep["perimeter"] = per;
  rep["mstar"] = r.setup.mstar;
  rep["a_omega"] = r.dec.a_omega;
  rep["trace"] = {{"trace1", tp.trace1},
                  {"trace1_defect", tp.trace1 - mes},
                  {"trace2", tp.trace2},
                  {"rhs2", tp.rhs2},
                  {"trace2_defect", tp.trace2 - tp.rhs2}};
  rep["count_above_half"] = count_above(r.dec, 0.5);
  json counts = json::array();
  for (double d : cfg.deltas) {
    json c;
    c["delta"] = d;
    const std::size_t n = count_above(r.dec, 1.0 - d);
    c["count_above_1_minus_delta"] = n;
    c["defect"] = std::abs(static_cast<double>(n) - mes);
    if (d > 0.0 && d < 1.0)
      c["bound"] = eigen_count_bound(d, r.setup.mstar, per);
    else
      c["bound"] = nullptr;
    counts.push_back(c);
  }
  rep["counts"] = counts;
  rep["e_omega"] = eigen_tail(r.dec, mes);
  rep["gap_at_cut"] = r.dec.gap_at_cut;
  rep["basis_dependent"] = r.dec.gap_at_cut < kDegenerateGap;
  rep["max_eigenvalue"] = r.dec.eigenvalues.front();
  rep["min_eigenvalue"] = r.dec.eigenvalues.back();
  rep["warnings"] = warnings_json(r.setup.diag);

  io::write_atomic(cfg.outputs / "spectrum.csv", csv.str());
  write_json(cfg.outputs / "report.json", rep);
  log << "count_above(0.5) = " << count_above(r.dec, 0.5) << ", measure " << mes << "\n";
}

void cmd_accspec(const ExperimentConfig& cfg, std::ostream& log) {
  const Run r = run_config(cfg, log);
  const ErrorReport e = report(r, cfg.deltas, cfg.norms);
  const PlaneField ind = indicator_field(r.setup.mask);

  io::write_atomic(cfg.outputs / "rho.csv", io::field_csv(r.rho.field).str());
  io::write_atomic(cfg.outputs / "mollified.csv", io::field_csv(r.mollified).str());
  io::write_atomic(cfg.outputs / "rho.pgm", io::encode_pgm(io::field_to_graymap(r.rho.field)));
  write_json(cfg.outputs / "rho.pgm.json", io::graymap_sidecar(r.rho.field.grid(), 0.0, 1.0, 65535));

  json errors = io::to_json(e);
  errors["weak_l2_note"] = e.weak_l2_applicable ? "" : "mstar * perimeter < 1: weak-L2 bound not applicable";
  errors["warnings"] = warnings_json(r.setup.diag);
  write_json(cfg.outputs / "errors.json", errors);

  const CrossSection& cs = cfg.cross_section;
  io::CsvTable line({"s", "x", "xi", "rho", "indicator", "mollified"});
  const double len = std::hypot(cs.to.x - cs.from.x, cs.to.xi - cs.from.xi);
  for (std::size_t i = 0; i < cs.samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(cs.samples - 1);
    const PlanePoint p{cs.from.x + t * (cs.to.x - cs.from.x), cs.from.xi + t * (cs.to.xi - cs.from.xi)};
    line.row().cell(t * len).cell(p.x).cell(p.xi).cell(bilinear(r.rho.field, p)).cell(bilinear(ind, p));
    line.cell(bilinear(r.mollified, p));
  }
  io::write_atomic(cfg.outputs / "cross_section.csv", line.str());
  if (r.rho.basis_dependent) log << "warning: gap_at_cut below " << kDegenerateGap << ", rho is basis-dependent\n";
  log << "l1_normalized " << e.l1_normalized << ", bound " << e.bound_indicator << "\n";
}

void cmd_dilate(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.radii.empty()) throw ConfigError("dilate: dilation.radii is empty");
  const auto rows = dilation_sweep(cfg.domain, cfg.window, cfg.radii, cfg.resolution, cfg.deltas);
  std::vector<std::string> header{"R",     "status",       "dimension", "measure",   "perimeter", "mstar",
                                  "l1_rescaled", "l1_normalized", "E", "eqC_ratio", "a_omega",
                                  "count_above_half", "gap_at_cut"};
  for (double d : cfg.deltas) header.push_back("weak_l2_" + key(d));
  io::CsvTable csv(header);
  for (const SweepRow& row : rows) {
    csv.row().cell(row.factor).cell(row.skipped ? "skipped" : "ok").cell(row.dimension);
    if (row.skipped) {
      log << "warning: R = " << row.factor << " skipped: " << row.note << "\n";
      for (std::size_t i = 3; i < header.size(); ++i) csv.cell("");
      continue;
    }
    csv.cell(row.measure).cell(row.perimeter).cell(row.mstar).cell(row.l1_rescaled).cell(row.l1_normalized);
    csv.cell(row.e_omega).cell(row.eqc_ratio).cell(row.a_omega).cell(row.count_half).cell(row.gap_at_cut);
    for (double d : cfg.deltas) csv.cell(row.weak_l2_constants.at(d));
    log << "R = " << row.factor << ": l1_rescaled " << row.l1_rescaled << ", E " << row.e_omega << "\n";
  }
  io::write_atomic(cfg.outputs / "sweep.csv", csv.str());
}

void cmd_recover(const ExperimentConfig& cfg, std::ostream& log) {
  const Run r = run_config(cfg, log);
  const DomainMask rec = recover_domain(r.rho);
  const double sd = symmetric_difference(r.setup.mask, rec);
  const double mes = measure(r.setup.mask);
  const double per = perimeter(r.setup.mask);
  io::write_atomic(cfg.outputs / "recovered.pgm", io::encode_pgm(io::mask_to_graymap(rec)));
  json side = io::graymap_sidecar(rec.grid(), 0.0, 1.0, 255);
  side["descriptor"] = "raster";
  write_json(cfg.outputs / "recovered.pgm.json", side);
  json j;
  j["symdiff"] = sd;
  j["measure"] = mes;
  j["recovered_measure"] = measure(rec);
  j["perimeter"] = per;
  j["mstar"] = r.setup.mstar;
  j["ratio"] = sd / (r.setup.mstar * per);
  j["symdiff_over_measure"] = sd / mes;
  j["gap_at_cut"] = r.rho.gap_at_cut;
  j["plane"] = plane_json(rec.grid());
  write_json(cfg.outputs / "recovery.json", j);
  log << "symdiff " << sd << ", ratio " << sd / (r.setup.mstar * per) << "\n";
}

void cmd_oracle_check(const ExperimentConfig& cfg, std::ostream& log) {
  const auto* d = std::get_if<DiskShape>(&cfg.domain.shape);
  if (cfg.window.kind != WindowKind::gaussian || cfg.window.width != 1.0)
    throw ConfigError("oracle-check: requires a gaussian window of width 1");
  if (!d || d->center.x != 0.0 || d->center.xi != 0.0)
    throw ConfigError("oracle-check: requires a disk centered at the origin");
  const Run r = run_config(cfg, log);
  const double radius = d->radius;
  const double area = std::numbers::pi * radius * radius;
  const PlaneGrid& plane = r.setup.mask.grid();

  constexpr double eig_tol = 1e-2, field_tol = 2e-2, overlap_tol = 0.99;
  constexpr std::size_t overlap_modes = 6;
  const auto checked = static_cast<std::size_t>(std::floor(2.0 * area + 1e-9));
  const std::size_t rows = std::min(r.dec.size(), std::max(checked, overlap_modes));
  std::vector<std::string> failures;

  std::vector<Window> hermite;
  for (std::size_t k = 0; k < rows; ++k)
    hermite.push_back(hermite_window(r.setup.window.grid(), static_cast<unsigned>(k)));
  const double dt = r.setup.window.grid().dt();
  const auto overlap = [&](std::size_t i, std::size_t j) {
    return std::abs(inner(r.dec.eigenvector(i), hermite[j].samples(), dt));
  };

  io::CsvTable csv({"k", "lambda_numeric", "lambda_oracle", "abs_err", "spectrogram_sup_err", "hermite_overlap"});
  double max_err = 0.0;
  for (std::size_t k = 0; k < rows; ++k) {
    const double num = r.dec.eigenvalues[k];
    const double ora = oracle_eigenvalue(k + 1, radius);
    const double err = std::abs(num - ora);
    const PlaneField sp = eigen_spectrogram(r.setup.window, r.dec.eigenvector(k), plane);
    double sup = 0.0;
    for (std::size_t j = 0; j < plane.nx(); ++j)
      for (std::size_t m = 0; m < plane.nxi(); ++m)
        sup = std::max(sup, std::abs(sp.at(j, m) - oracle_spectrogram(k, plane.point(j, m))));
    const double ov = overlap(k, k);
    csv.row().cell(k + 1).cell(num).cell(ora).cell(err).cell(sup).cell(ov);
    if (k < checked) {
      max_err = std::max(max_err, err);
      if (err >= eig_tol) failures.push_back("row k=" + std::to_string(k + 1) + ": eigenvalue error " + io::format_double(err));
    }
    if (k < overlap_modes && ov < overlap_tol)
      failures.push_back("row k=" + std::to_string(k + 1) + ": hermite overlap " + io::format_double(ov));
  }

  // The numeric cut uses the discrete measure; the oracle is evaluated with the same number of modes.
  double rho_sup = 0.0;
  for (std::size_t j = 0; j < plane.nx(); ++j)
    for (std::size_t m = 0; m < plane.nxi(); ++m)
      rho_sup = std::max(rho_sup, std::abs(r.rho.field.at(j, m) - oracle_accspec_modes(r.rho.a_omega, plane.point(j, m))));
  if (rho_sup >= field_tol) failures.push_back("accumulated spectrogram sup error " + io::format_double(rho_sup));

  const std::size_t om = std::min(overlap_modes, rows);
  std::vector<std::string> oheader{"k"};
  for (std::size_t j = 0; j < om; ++j) oheader.push_back("hermite_" + std::to_string(j));
  io::CsvTable ocsv(oheader);
  log << "hermite overlap |<h_k, H_j>|:\n";
  for (std::size_t i = 0; i < om; ++i) {
    ocsv.row().cell(i + 1);
    std::ostringstream line;
    line << "  k=" << i + 1 << ":";
    for (std::size_t j = 0; j < om; ++j) {
      const double ov = overlap(i, j);
      ocsv.cell(ov);
      line << " " << std::fixed << std::setprecision(5) << ov;
    }
    log << line.str() << "\n";
  }

  json j;
  j["radius"] = radius;
  j["area"] = area;
  j["measure"] = measure(r.setup.mask);
  j["a_omega_numeric"] = r.rho.a_omega;
  j["a_omega_oracle"] = static_cast<std::size_t>(std::ceil(area - 1e-9));
  j["checked_modes"] = checked;
  j["max_eigenvalue_error"] = max_err;
  j["rho_sup_error"] = rho_sup;
  j["tolerances"] = {{"eigenvalue", eig_tol}, {"field", field_tol}, {"overlap", overlap_tol}};
  j["failures"] = failures;
  j["passed"] = failures.empty();
  io::write_atomic(cfg.outputs / "oracle_vs_numeric.csv", csv.str());
  io::write_atomic(cfg.outputs / "hermite_overlap.csv", ocsv.str());
  write_json(cfg.outputs / "oracle_check.json", j);
  log << "max eigenvalue error " << max_err << ", rho sup error " << rho_sup << "\n";
  if (!failures.empty()) throw OracleBreach("oracle tolerance exceeded: " + failures.front());
}

int main(int argc, char** argv) {
  CLI::App app{"Time-frequency localization operators: spectra, accumulated spectrograms and error bounds"};
  app.require_subcommand(1);
  std::string config;
  std::string out;
  unsigned threads = 1;
  std::size_t cap = 0;
  app.add_option("--config", config, "TOML or JSON experiment config")->required();
  app.add_option("--out", out, "output directory (overrides the config)");
  app.add_option("--threads", threads, "worker threads, 0 for all cores")->capture_default_str();
  app.add_option("--cap", cap, "maximum signal dimension (overrides the config)");
  app.fallthrough();

  using Command = void (*)(const ExperimentConfig&, std::ostream&);
  const std::vector<std::pair<std::string, Command>> commands{{"spectrum", cmd_spectrum},
                                                             {"accspec", cmd_accspec},
                                                             {"dilate", cmd_dilate},
                                                             {"recover", cmd_recover},
                                                             {"oracle-check", cmd_oracle_check}};
  const std::vector<std::string> help{"eigenvalues and trace identities", "accumulated spectrogram and error report",
                                      "dilation sweep", "domain recovery from rho > 1/2",
                                      "compare against the Gaussian/disk closed forms"};
  for (std::size_t i = 0; i < commands.size(); ++i) app.add_subcommand(commands[i].first, help[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    ExperimentConfig cfg = load_config(config);
    if (!out.empty()) cfg.outputs = out;
    if (cap) cfg.resolution.cap = cap;
    set_thread_count(threads);
    for (const auto& [name, fn] : commands)
      if (app.got_subcommand(name)) fn(cfg, std::cerr);
    return ok;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return solver_failure;
  } catch (const OracleBreach& e) {
    std::cerr << e.what() << "\n";
    return oracle_breach;
  } catch (const Error& e) {
    // Every other library error traces back to parameters the config chose.
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
}

}  // namespace tfloc::cli
