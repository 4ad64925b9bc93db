// SPDX-License-Identifier: Apache-2.0
//
// dualrobust: dual-robust ISAC transmit beamforming
// Copyright (C) 2026 The dualrobust authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "dualrobust/harness.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dualrobust;
using Catch::Approx;
namespace fs = std::filesystem;

namespace
{
    const std::string default_config = std::string(DUALROBUST_SOURCE_DIR) + "/configs/default.json";

    fs::path scratch(const std::string &name)
    {
        const fs::path p = fs::temp_directory_path() / ("dualrobust_tests_" + name);
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }

    int cli(std::vector<std::string> args)
    {
        args.insert(args.begin(), "dualrobust");
        std::vector<const char *> argv;
        for (const auto &a : args)
            argv.push_back(a.c_str());
        return run_cli(int(argv.size()), argv.data());
    }

    std::vector<std::string> lines(const std::string &text)
    {
        std::vector<std::string> out;
        std::istringstream is(text);
        for (std::string l; std::getline(is, l);)
            out.push_back(l);
        return out;
    }
}

TEST_CASE("config parsing", "[harness]")
{
    const SystemConfig c = parse_config(R"({"varpi": 0.3, "rho": 0.7, "user_angles_deg": [10, 20]})");
    CHECK(c.varpi == 0.3);
    CHECK(c.rho == 0.7);
    CHECK(c.user_angles_deg.size() == 2);
    CHECK(c.num_antennas == 8);

    CHECK_THROWS_AS(parse_config(R"({"no_such_key": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"rho": 2.0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"num_antennas": -3})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"num_antennas": 2.5})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config round trip", "[harness]")
{
    SystemConfig c;
    c.varpi = 0.125;
    c.rician_k_factor = 4.0;
    c.power_grid_dbm = {21.0, 23.0};
    const SystemConfig back = parse_config(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK(back.rician_k_factor.value() == 4.0);

    const SystemConfig shipped = load_config(default_config);
    CHECK(config_to_json(shipped) == config_to_json(SystemConfig{}));
}

TEST_CASE("scenarios are reproducible", "[harness]")
{
    const SystemConfig c;
    const Scenario a = make_scenario(c, 42), b = make_scenario(c, 42), d = make_scenario(c, 43);
    REQUIRE(a.distances_m.size() == c.user_angles_deg.size());
    CHECK(a.distances_m == b.distances_m);
    CHECK(a.distances_m != d.distances_m);
    for (double x : a.distances_m)
    {
        CHECK(x >= c.distance_min_m);
        CHECK(x <= c.distance_max_m);
    }
    for (arma::uword k = 0; k < a.instance.num_users(); ++k)
    {
        CHECK(arma::approx_equal(a.instance.channels.estimates[k], b.instance.channels.estimates[k], "absdiff", 0.0));
        CHECK(a.instance.channels.radii[k] == Approx(c.varpi * arma::norm(a.instance.channels.estimates[k])));
        CHECK(a.instance.channels.noise_powers[k] == Approx(1e-11));
    }
    REQUIRE(a.instance.targets.size() == 2);
    CHECK(a.instance.targets[0].width() == Approx(deg_to_rad(6.0)));
}

TEST_CASE("method names", "[harness]")
{
    for (Method m : all_methods)
        CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_method("magic"), ConfigError);
}

TEST_CASE("SVM rows do not depend on rho", "[harness]")
{
    SystemConfig c;
    c.report_samples = 500;
    c.rho_grid = {0.2, 0.6, 0.9};
    SweepOptions o;
    o.methods = {Method::Svm};
    o.seeds = {1, 2};
    const SweepResult r = sweep_rho(c, o);
    CHECK(r.runs.size() == 2 * 3 * 2);
    for (const auto &a : r.mean)
        for (const auto &b : r.mean)
            if (a.setting == b.setting)
            {
                CHECK(a.worst_sum_rate == b.worst_sum_rate);
                CHECK(a.worst_bp_gain == b.worst_bp_gain);
            }
    for (const auto &m : r.mean)
        CHECK(m.utility == Approx(m.rho * m.worst_sum_rate + (1 - m.rho) * m.worst_bp_gain).epsilon(1e-12));
}

TEST_CASE("seed averaging", "[harness]")
{
    std::vector<RunRecord> runs(2);
    for (int i = 0; i < 2; ++i)
    {
        auto &r = runs[i].row;
        r.sweep = "sweep-rho";
        r.setting = "x";
        r.param_name = "rho";
        r.param = 0.5;
        r.rho = 0.5;
        r.seed = i + 1;
        r.worst_sum_rate = 1.0 + i;
        r.worst_bp_gain = 3.0 + 3 * i;
        r.utility = 123.0;
    }
    const auto mean = average_over_seeds(runs);
    REQUIRE(mean.size() == 1);
    CHECK(mean[0].worst_sum_rate == Approx(1.5));
    CHECK(mean[0].worst_bp_gain == Approx(4.5));
    CHECK(mean[0].utility == Approx(3.0));
    CHECK(!mean[0].seed);
}

TEST_CASE("CSV layout", "[harness]")
{
    SweepRow r;
    r.sweep = "solve";
    r.setting = "config";
    r.param_name = "rho";
    r.param = 0.5;
    r.seed = 7;
    r.worst_sum_rate = 1.0 / 3.0;
    r.wall_time_ms = 99.0;
    const auto ls = lines(to_csv({r, r}));
    REQUIRE(ls.size() == 3);
    CHECK(ls[0].find("wall") == std::string::npos);
    CHECK(ls[1].find("0.333333333333333") != std::string::npos);
    const auto cols = std::count(ls[0].begin(), ls[0].end(), ',');
    CHECK(std::count(ls[1].begin(), ls[1].end(), ',') == cols);
}

TEST_CASE("CLI exit codes", "[harness]")
{
    const fs::path out = scratch("exit");
    CHECK(cli({"solve", "--config", "/nonexistent/config.json", "--out", out.string(), "--quiet"}) == 2);
    CHECK(cli({"solve", "--config", default_config, "--method", "bogus", "--out", out.string(), "--quiet"}) == 2);
    CHECK(cli({"no-such-command"}) == 2);

    const fs::path bad = out / "bad.json";
    std::ofstream(bad) << R"({"rho": -1})";
    CHECK(cli({"solve", "--config", bad.string(), "--out", out.string(), "--quiet"}) == 2);
}

TEST_CASE("CLI oracle check", "[harness]")
{
    const fs::path out = scratch("oracle");
    CHECK(cli({"oracle-check", "--instances", "5", "--samples", "5000", "--out", out.string(), "--quiet"}) == 0);
    const auto ls = lines(slurp(out / "oracle_check.csv"));
    REQUIRE(ls.size() >= 2);
    for (std::size_t i = 1; i < ls.size(); ++i)
        CHECK(ls[i].find("\",1,") != std::string::npos);
}

TEST_CASE("CLI SVM solve writes all outputs", "[harness]")
{
    const fs::path out = scratch("svm");
    CHECK(cli({"solve", "--config", default_config, "--seed", "3", "--method", "svm", "--out", out.string(),
               "--quiet"}) == 0);
    CHECK(fs::exists(out / "solve.csv"));
    CHECK(fs::exists(out / "solve_per_seed.csv"));
    CHECK(fs::exists(out / "solve_3.json"));
}

TEST_CASE("solve output is byte-identical across runs", "[harness][slow]")
{
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(cli({"solve", "--config", default_config, "--seed", "7", "--out", a.string(), "--quiet"}) == 0);
    REQUIRE(cli({"solve", "--config", default_config, "--seed", "7", "--out", b.string(), "--quiet"}) == 0);
    const std::string ca = slurp(a / "solve.csv");
    CHECK(lines(ca).size() == 2); // header + the robust run
    CHECK(ca == slurp(b / "solve.csv"));
    CHECK(slurp(a / "solve_per_seed.csv") == slurp(b / "solve_per_seed.csv"));
}

TEST_CASE("beampattern gain scales with the power budget", "[harness][slow]")
{
    SystemConfig c;
    c.varpi = 0.0;
    c.delta_theta_deg = 0.0;
    c.rho = 0.0;
    c.report_samples = 500;
    SystemConfig c2 = c;
    c2.power_dbm = c.power_dbm + 10.0 * std::log10(2.0);
    const MethodOutcome one = run_method(make_scenario(c, 4), Method::Robust);
    const MethodOutcome two = run_method(make_scenario(c2, 4), Method::Robust);
    CHECK(two.report.worst_sum_beampattern / one.report.worst_sum_beampattern == Approx(2.0).epsilon(0.01));
}
