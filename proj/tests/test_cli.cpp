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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "wgqed/io/csv.hpp"

namespace fs = std::filesystem;

#ifndef WGQED_CLI_PATH
#error "WGQED_CLI_PATH must name the command-line binary"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

class Workspace {
 public:
  explicit Workspace(const std::string& name)
      : root_(fs::temp_directory_path() / ("wgqed_cli_" + name)) {
    fs::remove_all(root_);
    fs::create_directories(root_ / "out");
  }
  ~Workspace() { fs::remove_all(root_); }

  fs::path file(const std::string& name, const std::string& text) const {
    const fs::path p = root_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
  fs::path out() const { return root_ / "out"; }
  fs::path path(const std::string& name) const { return root_ / name; }

  Run run(const std::string& args) const {
    const fs::path so = root_ / "stdout.txt", se = root_ / "stderr.txt";
    const std::string cmd = std::string("\"") + WGQED_CLI_PATH + "\" " + args + " >\"" +
                            so.string() + "\" 2>\"" + se.string() + "\"";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(so);
    r.err = slurp(se);
    return r;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

 private:
  fs::path root_;
};

const char* single_dot = R"({
  "emitters": [{"beta": 0.5}],
  "drive": {"flux_over_gamma": 0.0001},
  "grids": {
    "detuning_ghz": {"start": -0.5, "stop": 0.5, "count": 21},
    "tau_ns": {"start": 0, "stop": 30, "count": 7},
    "flux_per_ns": {"start": 0.001, "stop": 1000, "count": 7, "log": true}
  },
  "sampling": {"n_sd_samples": 1}
})";

}  // namespace

TEST_CASE("spectrum writes csv and svg") {
  Workspace w("spectrum");
  const auto cfg = w.file("c.json", single_dot);
  const Run r = w.run("spectrum --config \"" + cfg.string() + "\" --out \"" + w.out().string() + "\"");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("dip = ") != std::string::npos);
  const auto t = wgqed::io::read_csv_file(w.out() / "spectrum.csv");
  REQUIRE(t.header.size() == 2);
  CHECK(t.header[0] == "detuning_GHz");
  CHECK(t.header[1] == "T_over_T0");
  REQUIRE(t.rows.size() == 21);
  // resonant point of an ideal beta = 1/2 dot
  CHECK(std::stod(t.rows[10][1]) == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(fs::exists(w.out() / "spectrum.svg"));
}

TEST_CASE("no emitters gives a flat spectrum") {
  Workspace w("empty");
  const auto cfg = w.file("c.json", R"({
    "emitters": [],
    "grids": {"detuning_ghz": {"start": -1, "stop": 1, "count": 5}}
  })");
  const Run r = w.run("spectrum --config \"" + cfg.string() + "\" --out \"" + w.out().string() + "\"");
  REQUIRE(r.code == 0);
  const auto t = wgqed::io::read_csv_file(w.out() / "spectrum.csv");
  REQUIRE(t.rows.size() == 5);
  for (const auto& row : t.rows) CHECK(std::stod(row[1]) == 1.0);
}

TEST_CASE("input errors exit with code 2") {
  Workspace w("errors");
  const std::string out = " --out \"" + w.out().string() + "\"";

  const auto no_grid = w.file("nogrid.json", R"({"emitters": [{"beta": 0.5}], "drive": {"flux_per_ns": 0.001}})");
  Run r = w.run("spectrum --config \"" + no_grid.string() + "\"" + out);
  CHECK(r.code == 2);
  CHECK(r.err.find("grids.detuning_ghz") != std::string::npos);

  const auto unknown = w.file("unknown.json", R"({"emitters": [{"beta": 0.5, "betta": 1}]})");
  r = w.run("spectrum --config \"" + unknown.string() + "\"" + out);
  CHECK(r.code == 2);
  CHECK(r.err.find("betta") != std::string::npos);

  const auto good = w.file("good.json", R"({"emitters": [{"beta": 0.1}], "fit": {"chain_length": 200, "burn_in": 50}})");
  const auto data = w.file("bad.csv", "detuning_GHz,T_over_T0\n0,1\n2,0.9\n1,1\n3,1\n");
  r = w.run("fit --config \"" + good.string() + "\" --data \"" + data.string() + "\"" + out);
  CHECK(r.code == 2);
  CHECK(r.err.find("monotone") != std::string::npos);

  r = w.run("spectrum --config \"" + w.path("missing.json").string() + "\"");
  CHECK(r.code == 2);
  r = w.run("frobnicate");
  CHECK(r.code == 2);
}

TEST_CASE("g2 and saturation subcommands") {
  Workspace w("g2");
  const auto cfg = w.file("c.json", single_dot);
  const std::string common = " --config \"" + cfg.string() + "\" --out \"" + w.out().string() + "\"";
  Run r = w.run("g2" + common);
  REQUIRE(r.code == 0);
  const auto g = wgqed::io::read_csv_file(w.out() / "g2.csv");
  REQUIRE(g.rows.size() == 7);
  CHECK(g.header[0] == "tau_ns");
  CHECK(std::stod(g.rows.back()[1]) == doctest::Approx(1.0).epsilon(0.05));

  r = w.run("saturate" + common);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("critical_flux_per_ns = ") != std::string::npos);
  CHECK(r.out.find("absent") == std::string::npos);
  const auto s = wgqed::io::read_csv_file(w.out() / "saturation.csv");
  CHECK(s.header == std::vector<std::string>{"flux_per_ns", "power_uW", "dip"});
  REQUIRE(s.rows.size() == 7);
  for (std::size_t k = 1; k < s.rows.size(); ++k)
    CHECK(std::stod(s.rows[k][2]) <= std::stod(s.rows[k - 1][2]) + 1e-12);

  const auto one_flux = w.file("one.json", R"({
    "emitters": [{"beta": 0.5}],
    "grids": {"flux_per_ns": {"values": [0.001]}},
    "sampling": {"n_sd_samples": 1}
  })");
  r = w.run("saturate --config \"" + one_flux.string() + "\" --out \"" + w.out().string() + "\"");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("absent") != std::string::npos);
}

TEST_CASE("fit output is reproducible") {
  Workspace w("fit");
  std::ostringstream csv;
  csv << "detuning_GHz,T_over_T0\n";
  for (int k = 0; k <= 40; ++k) {
    const double x = -1.0 + 0.05 * k;
    const double t = 1.0 - 0.4 / (1.0 + x * x / 0.01) + 0.01 * ((k * 37) % 7 - 3) / 3.0;
    csv << x << ',' << t << '\n';
  }
  const auto data = w.file("d.csv", csv.str());
  const auto cfg = w.file("c.json", R"({
    "fit": {"chain_length": 300, "burn_in": 100, "n_sd_samples": 2, "flux_per_ns": 0.01,
            "parameters": {"z_re": {"free": false, "initial": 1.0}}}
  })");
  const std::string args = "fit --config \"" + cfg.string() + "\" --data \"" + data.string() +
                           "\" --out \"" + w.out().string() + "\"";
  Run r = w.run(args);
  REQUIRE(r.code == 0);
  const std::string first = Workspace::slurp(w.out() / "chain.csv");
  const auto post = wgqed::io::read_csv_file(w.out() / "posterior.csv");
  CHECK(post.header == std::vector<std::string>{"parameter", "mean", "sd", "p16", "p84", "map"});
  CHECK(post.rows.size() == 3);
  CHECK(fs::exists(w.out() / "fit.svg"));

  r = w.run(args);
  REQUIRE(r.code == 0);
  CHECK(Workspace::slurp(w.out() / "chain.csv") == first);

  r = w.run(args + " --seed 99");
  REQUIRE(r.code == 0);
  CHECK(Workspace::slurp(w.out() / "chain.csv") != first);

  r = w.run("fit --config \"" + cfg.string() + "\" --data \"" + data.string() + "\" --data \"" +
            data.string() + "\" --out \"" + w.out().string() + "\"");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(w.out() / "chain_dot1.csv"));
  CHECK(fs::exists(w.out() / "posterior_dot2.csv"));
  CHECK(fs::exists(w.out() / "two_dot_prediction.csv"));
}

TEST_CASE("pl-g2 and waveguide subcommands") {
  Workspace w("pl");
  const auto cfg = w.file("c.json", R"({
    "emitters": [{"beta": 0.5}],
    "pump": {"pump_rate_per_ns": 0.01},
    "grids": {"tau_ns": {"values": [0, 1, 20]}},
    "waveguide": {"length_um": 15, "wavelength_nm": 917, "group_index": 7.5, "reflectivity": 0.17},
    "drive": {"power_uw": 1.0}
  })");
  const std::string common = " --config \"" + cfg.string() + "\" --out \"" + w.out().string() + "\"";
  Run r = w.run("pl-g2" + common);
  REQUIRE(r.code == 0);
  const auto g = wgqed::io::read_csv_file(w.out() / "g2.csv");
  CHECK(std::abs(std::stod(g.rows[0][1])) < 1e-6);

  r = w.run("waveguide" + common);
  REQUIRE(r.code == 0);
  const auto t = wgqed::io::read_csv_file(w.out() / "waveguide.csv");
  bool found = false;
  for (const auto& row : t.rows)
    if (row[0] == "mean_photon_number") {
      found = true;
      // 1 uW at 917 nm is about 4616 photons/ns
      CHECK(std::stod(row[1]) == doctest::Approx(4616.4 * 15 * 7.5 / (299792.458 * 0.83)).epsilon(1e-3));
    }
  CHECK(found);
}
