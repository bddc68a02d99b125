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

#include "wgqed/io/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "wgqed/error.hpp"
#include "wgqed/units.hpp"

namespace wgqed::io {

namespace {

using nlohmann::json;

// A JSON object whose keys must all be consumed; leftovers are unknown keys.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InputError("config: '" + path_ + "' must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const std::string& path() const { return path_; }
  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& raw(const std::string& key) {
    if (!j_.contains(key)) throw InputError("config: missing key '" + key_path(key) + "'");
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw InputError("config: '" + key_path(key) + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InputError("config: '" + key_path(key) + "' must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }
  std::optional<double> maybe_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }
  double positive(const std::string& key) {
    const double v = number(key);
    if (!(v > 0.0)) throw InputError("config: '" + key_path(key) + "' must be positive");
    return v;
  }
  double non_negative(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const double v = number(key);
    if (!(v >= 0.0)) throw InputError("config: '" + key_path(key) + "' must be >= 0");
    return v;
  }
  long long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer())
      throw InputError("config: '" + key_path(key) + "' must be an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long fallback) {
    return has(key) ? integer(key) : fallback;
  }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw InputError("config: '" + key_path(key) + "' must be true/false");
    return v.get<bool>();
  }
  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw InputError("config: '" + key_path(key) + "' must be a string");
    return v.get<std::string>();
  }
  Section child(const std::string& key) { return Section(raw(key), key_path(key)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw InputError("config: unknown key '" + key_path(it.key()) + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

GridSpec parse_grid(Section s) {
  GridSpec g;
  if (s.has("values")) {
    const json& v = s.raw("values");
    const std::string where = s.key_path("values");
    if (!v.is_array() || v.empty())
      throw InputError("config: '" + where + "' must be a non-empty array");
    for (const auto& x : v) {
      if (!x.is_number()) throw InputError("config: '" + where + "' must hold numbers");
      g.explicit_values.push_back(x.get<double>());
    }
  } else {
    g.start = s.number("start");
    g.stop = s.number("stop");
    const long long n = s.integer("count");
    if (n < 1 || n > 1000000)
      throw InputError("config: '" + s.key_path("count") + "' must lie in [1, 1e6]");
    g.count = static_cast<int>(n);
    g.log = s.boolean("log", false);
    if (g.log && !(g.start > 0.0 && g.stop > 0.0))
      throw InputError("config: log grid '" + s.key_path("start") + "' needs positive bounds");
    if (g.count > 1 && !(g.stop > g.start))
      throw InputError("config: '" + s.key_path("stop") + "' must exceed start");
  }
  s.finish();
  return g;
}

EmitterParams parse_emitter(Section s) {
  EmitterParams e;
  e.delta0 = units::ghz_to_rad_per_ns(s.number("delta0_ghz", 0.0));
  e.gamma_tot = s.has("gamma_tot_per_ns") ? s.positive("gamma_tot_per_ns") : 1.0;
  e.gamma_d = s.non_negative("gamma_d_per_ns", 0.0);
  e.beta = s.number("beta");
  e.sigma_sd = units::ghz_to_rad_per_ns(s.non_negative("sigma_sd_ghz", 0.0));
  e.phase = s.number("phase", 0.0);
  s.finish();
  try {
    e.validate();
  } catch (const InputError& err) {
    throw InputError("config: " + s.path() + ": " + err.what());
  }
  return e;
}

FanoPrefactor parse_prefactor(const std::string& v, const std::string& where) {
  if (v == "as_printed") return FanoPrefactor::as_printed;
  if (v == "unit_modulus") return FanoPrefactor::unit_modulus;
  throw InputError("config: '" + where + "' must be as_printed or unit_modulus");
}

void parse_waveguide(Section s, RunConfig& cfg) {
  const bool has_z = s.has("z_re") || s.has("z_im");
  if (has_z && s.has("zeta"))
    throw InputError("config: '" + s.key_path("zeta") + "' conflicts with z_re/z_im");
  if (s.has("zeta")) {
    cfg.fano = WaveguideFano::from_zeta(s.number("zeta"));
  } else if (has_z) {
    const Complex z(s.number("z_re", 1.0), s.number("z_im", 0.0));
    if (!(std::abs(z) > 0.0)) throw InputError("config: '" + s.key_path("z_re") + "': z must be non-zero");
    cfg.fano = WaveguideFano::from_z(z);
  }
  if (s.has("prefactor"))
    cfg.prefactor = parse_prefactor(s.string("prefactor"), s.key_path("prefactor"));
  auto& g = cfg.geometry;
  g.length_um = s.number("length_um", g.length_um);
  g.wavelength_nm = s.number("wavelength_nm", g.wavelength_nm);
  g.group_index = s.number("group_index", g.group_index);
  g.reflectivity = s.number("reflectivity", g.reflectivity);
  g.coupling_efficiency = s.number("coupling_efficiency", g.coupling_efficiency);
  s.finish();
  try {
    g.validate();
  } catch (const InputError& err) {
    throw InputError("config: waveguide: " + std::string(err.what()));
  }
  cfg.wavelength_nm = g.wavelength_nm;
}

void parse_drive(Section s, RunConfig& cfg) {
  int given = 0;
  for (const char* k : {"flux_per_ns", "flux_over_gamma", "power_uw"}) given += s.has(k);
  if (given > 1)
    throw InputError("config: 'drive' takes only one of flux_per_ns, flux_over_gamma, power_uw");
  if (s.has("wavelength_nm")) cfg.wavelength_nm = s.positive("wavelength_nm");
  if (s.has("flux_per_ns")) {
    cfg.flux = s.positive("flux_per_ns");
  } else if (s.has("flux_over_gamma")) {
    const double gamma = cfg.emitters.empty() ? 1.0 : cfg.emitters.front().gamma_tot;
    cfg.flux = s.positive("flux_over_gamma") * gamma;
  } else if (s.has("power_uw")) {
    cfg.flux = cfg.geometry.coupling_efficiency *
               power_to_flux(s.positive("power_uw"), cfg.wavelength_nm);
  }
  s.finish();
}

void parse_grids(Section s, RunConfig& cfg) {
  if (s.has("detuning_ghz")) cfg.detuning_ghz = parse_grid(s.child("detuning_ghz"));
  if (s.has("tau_ns")) cfg.tau_ns = parse_grid(s.child("tau_ns"));
  if (s.has("flux_per_ns")) cfg.flux_per_ns = parse_grid(s.child("flux_per_ns"));
  s.finish();
}

void parse_sampling(Section s, RunConfig& cfg) {
  const long long n = s.integer("n_sd_samples", cfg.n_sd_samples);
  if (n < 1 || n > 1000000)
    throw InputError("config: '" + s.key_path("n_sd_samples") + "' must lie in [1, 1e6]");
  cfg.n_sd_samples = static_cast<int>(n);
  const long long seed = s.integer("seed", static_cast<long long>(cfg.seed));
  if (seed < 0) throw InputError("config: '" + s.key_path("seed") + "' must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);
  s.finish();
}

void parse_g2(Section s, RunConfig& cfg) {
  if (s.has("mode")) {
    const std::string m = s.string("mode");
    if (m == "transmitted") cfg.g2_mode = G2Mode::transmitted;
    else if (m == "pl") cfg.g2_mode = G2Mode::pl;
    else throw InputError("config: 'g2.mode' must be transmitted or pl");
  }
  if (s.has("averaging")) {
    const std::string a = s.string("averaging");
    if (a == "detector") cfg.g2_averaging = G2Averaging::detector;
    else if (a == "per_sample") cfg.g2_averaging = G2Averaging::per_sample;
    else throw InputError("config: 'g2.averaging' must be detector or per_sample");
  }
  cfg.laser_detuning_ghz = s.maybe_number("laser_detuning_ghz");
  s.finish();
}

PumpParams parse_pump(Section s) {
  PumpParams p;
  p.pump_rate = s.positive("pump_rate_per_ns");
  p.distinguishable = s.boolean("distinguishable", false);
  if (s.has("detector_phases")) {
    const json& v = s.raw("detector_phases");
    if (!v.is_array()) throw InputError("config: 'pump.detector_phases' must be an array");
    for (const auto& x : v) {
      if (!x.is_number()) throw InputError("config: 'pump.detector_phases' must hold numbers");
      p.detector_phases.push_back(x.get<double>());
    }
  }
  s.finish();
  return p;
}

FitConfig parse_fit(Section s, const RunConfig& cfg) {
  FitConfig f;
  f.chain_length = static_cast<int>(s.integer("chain_length", f.chain_length));
  f.burn_in = static_cast<int>(s.integer("burn_in", f.burn_in));
  f.seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<long long>(cfg.seed)));
  f.model.n_sd_samples = static_cast<int>(s.integer("n_sd_samples", cfg.n_sd_samples));
  f.model.sd_seed = static_cast<std::uint64_t>(s.integer("sd_seed", static_cast<long long>(f.model.sd_seed)));
  f.model.gamma_tot = s.has("gamma_tot_per_ns")
                          ? s.positive("gamma_tot_per_ns")
                          : (cfg.emitters.empty() ? 1.0 : cfg.emitters.front().gamma_tot);
  if (s.has("flux_per_ns")) f.model.flux = s.positive("flux_per_ns");
  else if (cfg.flux) f.model.flux = *cfg.flux;
  else f.model.flux = 0.01 * f.model.gamma_tot;
  f.model.prefactor = cfg.prefactor;
  f.initial.z = cfg.fano.z();

  if (s.has("parameters")) {
    Section params = s.child("parameters");
    for (FitParameter p : all_fit_parameters) {
      const std::string name(parameter_name(p));
      if (!params.has(name)) continue;
      Section ps = params.child(name);
      auto& spec = f.spec(p);
      if (ps.has("initial")) f.initial.set(p, ps.number("initial"));
      spec.free = ps.boolean("free", spec.free);
      spec.lower = ps.number("lower", spec.lower);
      spec.upper = ps.number("upper", spec.upper);
      spec.step = ps.number("step", spec.step);
      ps.finish();
    }
    params.finish();
  }
  s.finish();
  try {
    f.validate();
  } catch (const InputError& err) {
    throw InputError("config: fit: " + std::string(err.what()));
  }
  return f;
}

}  // namespace

std::vector<double> GridSpec::values() const {
  if (!explicit_values.empty()) return explicit_values;
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    out[static_cast<std::size_t>(k)] =
        log ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
            : start + t * (stop - start);
  }
  return out;
}

std::vector<Scenario> RunConfig::effective_scenarios() const {
  if (!scenarios.empty()) return scenarios;
  Scenario all{"all", {}};
  for (int i = 0; i < static_cast<int>(emitters.size()); ++i) all.emitters.push_back(i);
  return {all};
}

std::vector<EmitterParams> RunConfig::select(const Scenario& scenario) const {
  std::vector<EmitterParams> out;
  for (int i : scenario.emitters) out.push_back(emitters.at(static_cast<std::size_t>(i)));
  return out;
}

ScatteringSystem RunConfig::system(const Scenario& scenario) const {
  ScatteringSystem s;
  s.emitters = select(scenario);
  s.fano = fano;
  s.decay = decay;
  s.prefactor = prefactor;
  // Without emitters the flux only normalises itself away.
  s.flux = s.emitters.empty() && !flux ? 1.0 : require_flux();
  return s;
}

const GridSpec& RunConfig::require_detuning() const {
  if (!detuning_ghz) throw InputError("config: missing key 'grids.detuning_ghz'");
  return *detuning_ghz;
}
const GridSpec& RunConfig::require_tau() const {
  if (!tau_ns) throw InputError("config: missing key 'grids.tau_ns'");
  return *tau_ns;
}
const GridSpec& RunConfig::require_flux_grid() const {
  if (!flux_per_ns) throw InputError("config: missing key 'grids.flux_per_ns'");
  return *flux_per_ns;
}
double RunConfig::require_flux() const {
  if (!flux) throw InputError("config: missing key 'drive' (flux_per_ns, flux_over_gamma or power_uw)");
  return *flux;
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config: malformed JSON: ") + e.what());
  }
  Section root(doc, "");
  RunConfig cfg;

  if (root.has("emitters")) {
    const json& list = root.raw("emitters");
    if (!list.is_array()) throw InputError("config: 'emitters' must be an array");
    if (static_cast<int>(list.size()) > max_emitters)
      throw InputError("config: 'emitters' holds more than " + std::to_string(max_emitters));
    for (std::size_t i = 0; i < list.size(); ++i)
      cfg.emitters.push_back(parse_emitter(Section(list[i], "emitters[" + std::to_string(i) + "]")));
  }
  if (root.has("waveguide")) parse_waveguide(root.child("waveguide"), cfg);
  if (root.has("decay")) {
    const std::string d = root.string("decay");
    if (d == "independent") cfg.decay = DecayLayout::independent;
    else if (d == "collective") cfg.decay = DecayLayout::collective;
    else throw InputError("config: 'decay' must be independent or collective");
  }
  if (root.has("drive")) parse_drive(root.child("drive"), cfg);
  if (root.has("grids")) parse_grids(root.child("grids"), cfg);
  if (root.has("sampling")) parse_sampling(root.child("sampling"), cfg);
  if (root.has("g2")) parse_g2(root.child("g2"), cfg);
  if (root.has("pump")) cfg.pump = parse_pump(root.child("pump"));
  if (root.has("fit")) cfg.fit = parse_fit(root.child("fit"), cfg);
  if (root.has("scenarios")) {
    const json& list = root.raw("scenarios");
    if (!list.is_array()) throw InputError("config: 'scenarios' must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Section s(list[i], "scenarios[" + std::to_string(i) + "]");
      Scenario sc;
      sc.name = s.string("name");
      if (sc.name.empty() || sc.name.find_first_of("/\\ ") != std::string::npos)
        throw InputError("config: '" + s.key_path("name") + "' must be a plain word");
      const json& idx = s.raw("emitters");
      if (!idx.is_array()) throw InputError("config: '" + s.key_path("emitters") + "' must be an array");
      for (const auto& v : idx) {
        if (!v.is_number_integer() || v.get<long long>() < 0 ||
            v.get<long long>() >= static_cast<long long>(cfg.emitters.size()))
          throw InputError("config: '" + s.key_path("emitters") + "' has an invalid index");
        sc.emitters.push_back(v.get<int>());
      }
      s.finish();
      cfg.scenarios.push_back(std::move(sc));
    }
  }
  root.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace wgqed::io
