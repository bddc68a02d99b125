// Copyright 2026 The wgqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// wgqed: command-line front end for the waveguide scattering toolkit.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wgqed/emission.hpp"
#include "wgqed/error.hpp"
#include "wgqed/fitting.hpp"
#include "wgqed/io/config.hpp"
#include "wgqed/io/csv.hpp"
#include "wgqed/io/svg.hpp"
#include "wgqed/parallel.hpp"
#include "wgqed/scattering.hpp"
#include "wgqed/units.hpp"
#include "wgqed/waveguide.hpp"

namespace fs = std::filesystem;
using namespace wgqed;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_numerical = 3;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::vector<std::string> data;
  std::string white_light;
};

std::string num(double v) { return io::format_number(v); }


std::vector<double> to_rad(const std::vector<double>& ghz) {
  std::vector<double> out(ghz.size());
  std::transform(ghz.begin(), ghz.end(), out.begin(), units::ghz_to_rad_per_ns);
  return out;
}

// "spectrum.csv" for a lone default scenario, "spectrum_<name>.csv" otherwise.
fs::path output_file(const Options& opt, const std::string& stem,
                     const io::Scenario& sc, bool named, const char* ext) {
  return fs::path(opt.out) / (named ? stem + "_" + sc.name + ext : stem + ext);
}

io::RunConfig load(const Options& opt) {
  io::RunConfig cfg = io::load_config(opt.config);
  if (opt.seed) {
    cfg.seed = *opt.seed;
    if (cfg.fit) cfg.fit->seed = *opt.seed;
  }
  fs::create_directories(opt.out);
  return cfg;
}

int cmd_spectrum(const Options& opt) {
  const io::RunConfig cfg = load(opt);
  const auto grid_ghz = cfg.require_detuning().values();
  const auto grid = to_rad(grid_ghz);
  const auto scenarios = cfg.effective_scenarios();
  const bool named = !cfg.scenarios.empty();

  std::vector<io::PlotSeries> series;
  for (const auto& sc : scenarios) {
    const auto result =
        transmission_spectrum(cfg.system(sc), grid, cfg.n_sd_samples, cfg.seed);
    const std::vector<std::string> header{"detuning_GHz", "T_over_T0"};
    const std::vector<std::vector<double>> cols{grid_ghz, result.intensity};
    io::write_columns(output_file(opt, "spectrum", sc, named, ".csv"), header, cols);
    std::cout << sc.name << ": dip = " << num(result.dip) << ", fwhm_GHz = "
              << (result.fwhm ? num(units::rad_per_ns_to_ghz(*result.fwhm)) : "unresolved")
              << '\n';
    series.push_back({sc.name, grid_ghz, result.intensity, false});
  }
  io::write_svg(fs::path(opt.out) / "spectrum.svg",
                {"Transmission", "laser detuning (GHz)", "T / T0"}, series);
  return exit_ok;
}

int run_pl(const Options& opt, const io::RunConfig& cfg) {
  if (!cfg.pump) throw InputError("config: missing key 'pump'");
  const auto tau = cfg.require_tau().values();
  const bool named = !cfg.scenarios.empty();
  std::vector<io::PlotSeries> series;
  for (const auto& sc : cfg.effective_scenarios()) {
    const auto emitters = cfg.select(sc);
    const auto r = pl_g2(emitters, *cfg.pump, tau);
    const std::vector<std::string> header{"tau_ns", "g2"};
    const std::vector<std::vector<double>> cols{r.tau, r.g2};
    io::write_columns(output_file(opt, "g2", sc, named, ".csv"), header, cols);
    std::cout << sc.name << ": g2(0) = " << num(r.g2_zero) << '\n';
    series.push_back({sc.name, r.tau, r.g2, false});
  }
  io::write_svg(fs::path(opt.out) / "g2.svg",
                {"Photoluminescence g2", "tau (ns)", "g2"}, series);
  return exit_ok;
}

int cmd_g2(const Options& opt, bool force_pl) {
  const io::RunConfig cfg = load(opt);
  if (force_pl || cfg.g2_mode == io::G2Mode::pl) return run_pl(opt, cfg);

  const auto tau = cfg.require_tau().values();
  const bool named = !cfg.scenarios.empty();
  std::vector<io::PlotSeries> series;
  for (const auto& sc : cfg.effective_scenarios()) {
    const ScatteringSystem system = cfg.system(sc);
    const double detuning = cfg.laser_detuning_ghz
                                ? units::ghz_to_rad_per_ns(*cfg.laser_detuning_ghz)
                                : resonant_detuning(system);
    const auto r = g2_transmitted(system, detuning, tau, cfg.n_sd_samples, cfg.seed,
                                  cfg.g2_averaging);
    const std::vector<std::string> header{"tau_ns", "g2"};
    const std::vector<std::vector<double>> cols{r.tau, r.g2};
    io::write_columns(output_file(opt, "g2", sc, named, ".csv"), header, cols);
    std::cout << sc.name << ": g2(0) = " << num(r.g2_zero)
              << ", T/T0 = " << num(r.mean_intensity) << '\n';
    series.push_back({sc.name, r.tau, r.g2, false});
  }
  io::write_svg(fs::path(opt.out) / "g2.svg",
                {"Transmitted g2", "tau (ns)", "g2"}, series);
  return exit_ok;
}

int cmd_saturate(const Options& opt) {
  io::RunConfig cfg = load(opt);
  const auto flux = cfg.require_flux_grid().values();
  cfg.flux = flux.front();  // the sweep sets the drive
  const bool named = !cfg.scenarios.empty();
  const double eta = cfg.geometry.coupling_efficiency;
  std::vector<io::PlotSeries> series;
  for (const auto& sc : cfg.effective_scenarios()) {
    ScatteringSystem system = cfg.system(sc);
    const std::optional<double> detuning =
        cfg.laser_detuning_ghz
            ? std::optional<double>(units::ghz_to_rad_per_ns(*cfg.laser_detuning_ghz))
            : std::nullopt;
    const auto curve = saturation_curve(system, flux, detuning, cfg.n_sd_samples, cfg.seed);
    std::vector<double> power(flux.size());
    for (std::size_t k = 0; k < flux.size(); ++k)
      power[k] = flux_to_power(flux[k], cfg.wavelength_nm) / eta;
    const std::vector<std::string> header{"flux_per_ns", "power_uW", "dip"};
    const std::vector<std::vector<double>> cols{curve.flux, power, curve.dip};
    io::write_columns(output_file(opt, "saturation", sc, named, ".csv"), header, cols);
    std::cout << sc.name << ": critical_flux_per_ns = "
              << (curve.critical_flux ? num(*curve.critical_flux) : "absent");
    if (curve.critical_flux)
      std::cout << " (" << num(flux_to_power(*curve.critical_flux, cfg.wavelength_nm) / eta)
                << " uW)";
    std::cout << '\n';
    series.push_back({sc.name, curve.flux, curve.dip, false});
  }
  io::PlotSpec spec{"Saturation", "flux (photons/ns)", "1 - T / T0"};
  spec.log_x = std::all_of(flux.begin(), flux.end(), [](double f) { return f > 0.0; });
  io::write_svg(fs::path(opt.out) / "saturation.svg", spec, series);
  return exit_ok;
}

void write_chain(const fs::path& path, const FitResult& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  std::vector<std::string> header{"sample"};
  for (FitParameter p : r.free_parameters) header.emplace_back(parameter_name(p));
  header.emplace_back("log_likelihood");
  io::CsvWriter w(out, header);
  std::vector<double> row(header.size());
  for (std::size_t s = 0; s < r.chain.samples.size(); ++s) {
    row[0] = static_cast<double>(s);
    std::copy(r.chain.samples[s].begin(), r.chain.samples[s].end(), row.begin() + 1);
    row.back() = r.chain.log_target[s];
    w.row(row);
  }
}

void write_posterior(const fs::path& path, const FitResult& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  const std::vector<std::string> header{"parameter", "mean", "sd", "p16", "p84", "map"};
  io::CsvWriter w(out, header);
  for (const auto& s : r.summary) {
    const std::vector<std::string> row{std::string(parameter_name(s.parameter)),
                                       num(s.mean), num(s.sd), num(s.p16),
                                       num(s.p84), num(s.map)};
    w.row(row);
  }
}

FitResult fit_one(const MeasuredSpectrum& data, FitConfig config,
                  const fs::path& chain, const fs::path& posterior,
                  const std::string& label) {
  // Start the line center at the strongest feature of the data.
  if (config.spec(FitParameter::center).free) {
    const double level = [&] {
      std::vector<double> y = data.t_over_t0;
      std::nth_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(y.size() / 2), y.end());
      return y[y.size() / 2];
    }();
    std::size_t k = 0;
    for (std::size_t i = 1; i < data.size(); ++i)
      if (std::abs(data.t_over_t0[i] - level) > std::abs(data.t_over_t0[k] - level)) k = i;
    const auto& spec = config.spec(FitParameter::center);
    config.initial.center_ghz = std::clamp(data.detuning_ghz[k], spec.lower, spec.upper);
  }
  const FitResult r = mh_fit(data, config, Execution::parallel);
  write_chain(chain, r);
  write_posterior(posterior, r);
  std::cout << label << ": acceptance_rate = " << num(r.chain.acceptance_rate) << '\n';
  for (const auto& s : r.summary)
    std::cout << "  " << parameter_name(s.parameter) << " = " << num(s.mean) << " ["
              << num(s.p16) << ", " << num(s.p84) << "]\n";
  return r;
}

int cmd_fit(const Options& opt) {
  const io::RunConfig cfg = load(opt);
  if (!cfg.fit) throw InputError("config: missing key 'fit'");
  if (opt.data.empty() || opt.data.size() > 2)
    throw InputError("fit takes one or two --data files");

  std::vector<MeasuredSpectrum> data;
  for (const auto& d : opt.data) data.push_back(io::read_measured_spectrum(d));
  const fs::path out(opt.out);
  std::vector<io::PlotSeries> series;
  std::vector<FitResult> fits;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string suffix = data.size() == 1 ? "" : "_dot" + std::to_string(i + 1);
    const std::string label = data.size() == 1 ? "fit" : "dot" + std::to_string(i + 1);
    fits.push_back(fit_one(data[i], *cfg.fit, out / ("chain" + suffix + ".csv"),
                           out / ("posterior" + suffix + ".csv"), label));
    series.push_back({label + " data", data[i].detuning_ghz, data[i].t_over_t0, true});
    series.push_back({label + " MAP",
                      data[i].detuning_ghz,
                      model_transmission(fits.back().map_estimate, cfg.fit->model,
                                         data[i].detuning_ghz, Execution::parallel),
                      false});
  }
  if (fits.size() == 2) {
    const auto& grid = data[1].detuning_ghz;
    const auto pair = predict_two_dot(fits[0].map_estimate, fits[1].map_estimate,
                                      cfg.fit->model, grid, cfg.decay);
    const std::vector<std::string> header{"detuning_GHz", "T_over_T0"};
    const std::vector<std::vector<double>> cols{grid, pair.intensity};
    io::write_columns(out / "two_dot_prediction.csv", header, cols);
    std::cout << "two-dot prediction: dip = " << num(pair.dip) << '\n';
    series.push_back({"two-dot prediction", grid, pair.intensity, false});
  }
  io::write_svg(out / "fit.svg", {"Fit", "laser detuning (GHz)", "T / T0"}, series);
  return exit_ok;
}

int cmd_waveguide(const Options& opt) {
  const io::RunConfig cfg = load(opt);
  WaveguideGeometry g = cfg.geometry;
  const std::vector<std::string> header{"quantity", "value"};
  std::vector<std::vector<std::string>> rows;

  if (!opt.white_light.empty()) {
    const auto fringes = fringe_analysis(io::read_white_light(opt.white_light));
    g.group_index = group_index(g.wavelength_nm, g.length_um, fringes.period_nm);
    g.reflectivity = fringes.reflectivity;
    rows.push_back({"fringe_period_nm", num(fringes.period_nm)});
    rows.push_back({"fringe_visibility", num(fringes.visibility)});
    rows.push_back({"fringe_periods", num(fringes.n_periods)});
  }
  rows.push_back({"group_index", num(g.group_index)});
  rows.push_back({"reflectivity", num(g.reflectivity)});
  if (cfg.flux) {
    // The configured flux is already the guided flux (coupling applied).
    const double n = mean_photon_number(1.0, *cfg.flux, g.length_um, g.group_index,
                                        g.reflectivity);
    rows.push_back({"flux_per_ns", num(*cfg.flux)});
    rows.push_back({"mean_photon_number", num(n)});
  }

  std::ofstream out(fs::path(opt.out) / "waveguide.csv", std::ios::binary);
  if (!out) throw InputError("cannot write waveguide.csv");
  io::CsvWriter w(out, header);
  for (const auto& r : rows) {
    w.row(r);
    std::cout << r[0] << " = " << r[1] << '\n';
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent scattering from quantum emitters in a waveguide"};
  app.require_subcommand(1);
  Options opt;
  auto common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    sub->add_option("--seed", opt.seed, "override the configured seed");
    sub->add_option("--threads", opt.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  };
  auto* spectrum = app.add_subcommand("spectrum", "transmission spectrum T/T0");
  auto* g2 = app.add_subcommand("g2", "second-order correlation g2(tau)");
  auto* saturate = app.add_subcommand("saturate", "resonant dip versus drive flux");
  auto* fit = app.add_subcommand("fit", "MCMC fit of measured spectra");
  auto* pl = app.add_subcommand("pl-g2", "photoluminescence g2 under incoherent pumping");
  auto* wg = app.add_subcommand("waveguide", "group index, reflectivity and photon number");
  for (auto* sub : {spectrum, g2, saturate, fit, pl, wg}) common(sub);
  fit->add_option("--data", opt.data, "measured spectrum CSV (one per dot, at most two)")
      ->required()->check(CLI::ExistingFile);
  wg->add_option("--white-light", opt.white_light, "white-light transmission CSV")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    set_thread_count(opt.threads);
    if (spectrum->parsed()) return cmd_spectrum(opt);
    if (g2->parsed()) return cmd_g2(opt, false);
    if (pl->parsed()) return cmd_g2(opt, true);
    if (saturate->parsed()) return cmd_saturate(opt);
    if (fit->parsed()) return cmd_fit(opt);
    if (wg->parsed()) return cmd_waveguide(opt);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numerical;
  }
  return exit_input;
}
