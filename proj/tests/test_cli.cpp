// Copyright 2026 The quditpea Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "quditpea/cli.hpp"

using namespace quditpea;
using namespace quditpea::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = QUDITPEA_SOURCE_DIR;
const std::string kTool = QUDITPEA_TOOL_PATH;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("quditpea_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_tool(const std::string& args) {
    const std::string cmd = "\"" + kTool + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kMinimal = R"({
  "d": 3,
  "unitary": {"phases": "0, 0.351 pi, 1.045 pi"},
  "seed": 5
})";

}  // namespace

TEST_CASE("phase literals") {
    CHECK(parse_phase_literal("0") == 0.0);
    CHECK(std::abs(parse_phase_literal("1.25") - 1.25) < 1e-15);
    CHECK(std::abs(parse_phase_literal("0.351 pi") - 0.351 * kPi) < 1e-15);
    CHECK(std::abs(parse_phase_literal("2/3 pi") - 2 * kPi / 3) < 1e-15);
    CHECK(std::abs(parse_phase_literal("4/3pi") - 4 * kPi / 3) < 1e-15);
    CHECK(std::abs(parse_phase_literal("pi") - kPi) < 1e-15);
    CHECK(std::abs(parse_phase_literal("-pi") + kPi) < 1e-15);
    CHECK(std::abs(parse_phase_literal("2*pi") - 2 * kPi) < 1e-15);
    CHECK(std::abs(parse_phase_literal(" 1.045 π ") - 1.045 * kPi) < 1e-15);
    CHECK_THROWS(parse_phase_literal(""));
    CHECK_THROWS(parse_phase_literal("pie"));
    CHECK_THROWS(parse_phase_literal("1/0 pi"));
    CHECK_THROWS(parse_phase_literal("abc"));
    const auto list = parse_phase_list("0, 2/3 pi, 4/3 pi");
    REQUIRE(list.size() == 3);
    CHECK(std::abs(list[2] - 4 * kPi / 3) < 1e-15);
}

TEST_CASE("bundled configs") {
    const auto u1 = parse_config(kSource / "configs/u1.json", Mode::Photonic);
    CHECK(u1.d == 3);
    REQUIRE(u1.phases.size() == 3);
    CHECK(std::abs(u1.phases[1] - 2 * kPi / 3) < 1e-15);
    CHECK(std::abs(u1.phases[2] - 4 * kPi / 3) < 1e-15);
    CHECK(u1.drive_auto);

    const auto u2 = parse_config(kSource / "configs/u2.json", Mode::Ideal);
    REQUIRE(u2.phases.size() == 3);
    CHECK(std::abs(u2.phases[1] - 0.351 * kPi) < 1e-15);
    CHECK(std::abs(u2.phases[2] - 1.045 * kPi) < 1e-15);

    const auto it = parse_config(kSource / "configs/iterate_u.json", Mode::Iterate);
    CHECK(it.n_digits == 2);
    CHECK(it.eigenstate == 1);

    const auto cv = parse_config(kSource / "configs/curves.json", Mode::Curves);
    CHECK(cv.resolution == 361);
}

TEST_CASE("config validation names key and line") {
    const char* missing_d = R"({
  "unitary": {"phases": "0, 0.351 pi, 1.045 pi"}
})";
    try {
        (void)parse_config_text(missing_d, Mode::Ideal, "x.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'d'") != std::string::npos);
        CHECK(e.line() >= 1);
    }

    const char* unknown = R"({
  "d": 3,
  "unitary": {"phases": "0, 0, 0"},
  "geometry": {
    "bin_spacing_freq": 54,
    "bin_spacing": 54
  }
})";
    try {
        (void)parse_config_text(unknown, Mode::Photonic, "y.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 6);
        CHECK(e.key() == "geometry.bin_spacing");
        const std::string what = e.what();
        CHECK(what.find("y.json:6") != std::string::npos);
        CHECK(what.find("bin_spacing") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config_text(R"({"d": 3, "unitary": {"phases": "0, 1"}})", Mode::Ideal),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"d": 3, "unitary": {"phases": "0, x, 1"}})", Mode::Ideal),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"d": 3})", Mode::Ideal), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"d": 3, "unitary": {"phases": "0,0,0"}})", Mode::Iterate),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("{\"d\": 3,", Mode::Ideal), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"mode": "fit", "d": 3})", Mode::Curves), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"d": 3, "unitary": {"phases": "0,0,0"}, "geometry": {"daughter_spacing": 0.01}})",
                                      Mode::Photonic),
                    ConfigError);
}

TEST_CASE("config hash tracks semantic fields only") {
    const auto base = parse_config_text(kMinimal, Mode::Photonic);
    const std::string h = config_hash(base);
    CHECK(h.size() == 16);

    auto same = base;
    same.seed = 99;
    same.output_dir = "/elsewhere";
    same.format = OutputFormat::Json;
    CHECK(config_hash(same) == h);

    auto phase = base;
    phase.phases[1] += 1e-9;
    CHECK(config_hash(phase) != h);
    auto flux = base;
    flux.detector.flux *= 2;
    CHECK(config_hash(flux) != h);
    auto geo = base;
    geo.geometry.dispersion = 3.0;
    CHECK(config_hash(geo) != h);
    auto mode = base;
    mode.mode = Mode::Ideal;
    CHECK(config_hash(mode) != h);
}

TEST_CASE("count CSV parsing") {
    const auto t = parse_count_csv("# comment\neigenstate,proj0,proj1,proj2\n0,10,2,3\n1,0,5,0\n");
    CHECK(t.header.size() == 4);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == std::vector<double>{10, 2, 3});
    CHECK(t.integral);
    CHECK_FALSE(parse_count_csv("eigenstate,a,b\n0,0.5,0.5\n").integral);

    CHECK_THROWS_AS(parse_count_csv("x,proj0,proj1\n0,1,2\n"), CsvError);
    CHECK_THROWS_AS(parse_count_csv("eigenstate,proj0,proj1\n1,1,2\n"), CsvError);
    CHECK_THROWS_AS(parse_count_csv("eigenstate,proj0,proj1\n0,1\n"), CsvError);
    CHECK_THROWS_AS(parse_count_csv("eigenstate,proj0,proj1\n0,1,-2\n"), CsvError);
    CHECK_THROWS_AS(parse_count_csv("eigenstate,proj0,proj1\n"), CsvError);
    try {
        (void)parse_count_csv("eigenstate,proj0,proj1\n0,1,2\n1,x,2\n");
        FAIL("expected CsvError");
    } catch (const CsvError& e) {
        CHECK(e.line() == 3);
    }
    CHECK(format_float(1.0 / 3) == "0.333333333333");
    CHECK(format_float(0.0) == "0");
}

TEST_CASE("execute: ideal reproduces the identity pattern") {
    auto cfg = parse_config(kSource / "configs/u1.json", Mode::Ideal);
    const auto r = execute(cfg);
    REQUIRE(r.artifacts.size() == 1);
    const auto& text = r.artifacts[0].content;
    CHECK(text.find("# quditpea ideal") == 0);
    CHECK(text.find("# seed=1") != std::string::npos);
    CHECK(text.find("# config_hash=" + config_hash(cfg)) != std::string::npos);
    CHECK(text.find("\n0,0,1,") != std::string::npos);
    CHECK(text.find(",0\n") != std::string::npos);
}

TEST_CASE("execute: fit of the published second-unitary rows") {
    RunConfig cfg;
    cfg.mode = Mode::Fit;
    cfg.input_path = (kSource / "data/table1_u2.csv").string();
    cfg.true_phases = parse_phase_list("0, 0.351 pi, 1.045 pi");
    const auto r = execute(cfg);
    REQUIRE(r.artifacts.size() == 1);
    const auto t = parse_count_csv(r.artifacts[0].content);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.header[2] == "phi_hat_over_pi");
    CHECK(std::abs(t.rows[0][1] - 1.859) < 0.01);
    CHECK(std::abs(t.rows[1][1] - 0.377) < 0.01);
    CHECK(std::abs(t.rows[2][1] - 1.045) < 0.01);
}

TEST_CASE("execute: photonic output round-trips into fit") {
    auto cfg = parse_config(kSource / "configs/u2.json", Mode::Photonic);
    cfg.seed = 7;
    const auto r = execute(cfg);
    const auto dir = scratch("roundtrip");
    write_artifacts(dir, r.artifacts);
    const auto counts = parse_count_csv(slurp(dir / "photonic_counts.csv"));
    CHECK(counts.integral);
    CHECK(counts.rows.size() == 3);

    RunConfig fit = cfg;
    fit.mode = Mode::Fit;
    fit.input_path = (dir / "photonic_counts.csv").string();
    const auto f = execute(fit);
    const auto t = parse_count_csv(f.artifacts[0].content);
    CHECK(std::abs(t.rows[1][1] - 0.351) < 0.01);
    CHECK(std::abs(t.rows[2][1] - 1.045) < 0.01);

    // The normalized table carries standard-error columns; it is not a d-column row table.
    fit.input_path = (dir / "photonic_normalized.csv").string();
    CHECK_THROWS(execute(fit));
    fs::remove_all(dir);
}

TEST_CASE("execute: iterate and curves") {
    const auto it = execute(parse_config(kSource / "configs/iterate_u.json", Mode::Iterate));
    CHECK(it.artifacts[0].content.find("# digits=1 2") != std::string::npos);
    auto cv = parse_config(kSource / "configs/curves.json", Mode::Curves);
    cv.format = OutputFormat::Json;
    const auto c = execute(cv);
    CHECK(c.artifacts[0].filename == "curves.json");
    CHECK(c.artifacts[0].content.find("\"config_hash\"") != std::string::npos);
}

TEST_CASE("write_artifacts leaves only finished files") {
    const auto dir = scratch("write");
    write_artifacts(dir, {{"a.csv", "1\n"}, {"b.csv", "2\n"}});
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        ++n;
        CHECK(entry.path().extension() != ".partial");
    }
    CHECK(n == 2);
    CHECK(slurp(dir / "b.csv") == "2\n");
    std::ofstream(dir / "blocker") << "";
    CHECK_THROWS(write_artifacts(dir / "blocker" / "sub", {{"c.csv", "3\n"}}));
    fs::remove_all(dir);
}

TEST_CASE("output directory precedence") {
    RunConfig cfg;
    CHECK(resolve_output_dir(cfg, "cli") == fs::path("cli"));
    cfg.output_dir = "conf";
    CHECK(resolve_output_dir(cfg, std::nullopt) == fs::path("conf"));
    CHECK(resolve_output_dir(cfg, "cli") == fs::path("cli"));
}

TEST_CASE("tool: seeded photonic runs are byte-identical") {
    const auto a = scratch("seed_a");
    const auto b = scratch("seed_b");
    const std::string config = (kSource / "configs/u2.json").string();
    REQUIRE(run_tool("photonic --config \"" + config + "\" --seed 7 --output \"" + a.string() + "\"") == 0);
    REQUIRE(run_tool("photonic --config \"" + config + "\" --seed 7 --output \"" + b.string() + "\"") == 0);
    for (const char* name : {"photonic_counts.csv", "photonic_normalized.csv"}) {
        const auto x = slurp(a / name);
        CHECK_FALSE(x.empty());
        CHECK(x == slurp(b / name));
    }
    CHECK(slurp(a / "photonic_counts.csv").find("# seed=7") != std::string::npos);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("tool: exit codes") {
    const auto dir = scratch("exit");
    std::ofstream(dir / "bad.json") << "{\n  \"d\": 3,\n  \"colour\": 1\n}\n";
    CHECK(run_tool("ideal --config \"" + (dir / "bad.json").string() + "\" --output \"" + dir.string() + "\"") == 2);
    std::ofstream(dir / "bad.csv") << "eigenstate,proj0\n0,1\n";
    CHECK(run_tool("fit --input \"" + (dir / "bad.csv").string() + "\" --output \"" + dir.string() + "\"") == 2);
    CHECK(run_tool("fit --input \"" + (kSource / "data/table1_u1.csv").string() + "\" --output \"" +
                   dir.string() + "\"") == 0);
    CHECK(fs::exists(dir / "fit.csv"));
    CHECK(run_tool("bogus") != 0);
    for (const auto& entry : fs::directory_iterator(dir)) CHECK(entry.path().extension() != ".partial");
    fs::remove_all(dir);
}
