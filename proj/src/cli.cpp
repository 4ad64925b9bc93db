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
#include "dualrobust/oracle_check.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace dualrobust
{
    namespace
    {
        struct Common
        {
            std::string config_path;
            std::uint64_t seed = 1;
            std::string out = "results";
            std::string method;
            unsigned seeds = 0; // 0: config.num_seeds
            bool quiet = false;
        };

        void add_common(CLI::App *cmd, Common &c, bool sweep)
        {
            cmd->add_option("--config", c.config_path, "JSON scenario configuration (defaults apply when omitted)");
            cmd->add_option("--seed", c.seed, sweep ? "first channel seed" : "channel seed");
            cmd->add_option("--out", c.out, "output directory");
            cmd->add_option("--method", c.method, "robust, nonrobust or svm")
                ->check(CLI::IsMember({"robust", "nonrobust", "svm"}));
            if (sweep)
                cmd->add_option("--seeds", c.seeds, "number of seeds per point (overrides num_seeds)")
                    ->check(CLI::PositiveNumber);
            cmd->add_flag("--quiet", c.quiet, "no progress on stderr");
        }

        SystemConfig config_of(const Common &c)
        {
            if (c.config_path.empty())
                return SystemConfig{};
            if (!std::filesystem::exists(c.config_path))
                throw ConfigError("config file '" + c.config_path + "' not found");
            return load_config(c.config_path);
        }

        SweepOptions options_of(const Common &c, const SystemConfig &config, bool sweep, Method default_method)
        {
            SweepOptions o;
            if (!c.method.empty())
                o.methods = {parse_method(c.method)};
            else if (!sweep)
                o.methods = {default_method};
            o.seeds = sweep ? seed_range(c.seed, c.seeds ? c.seeds : config.num_seeds) : std::vector<std::uint64_t>{c.seed};
            if (!c.quiet)
                o.progress = [](const std::string &line) { std::cerr << line << std::endl; };
            return o;
        }

        int run_oracle_check(const OracleCheckOptions &opts, const std::string &out_dir, bool quiet)
        {
            const std::vector<OracleCheck> checks = run_oracle_checks(opts);
            bool all = true;
            std::string csv = "check,passed,worst,tolerance,detail\n";
            for (const auto &c : checks)
            {
                all = all && c.passed;
                std::printf("%s  %-62s worst=%.3e tol=%.1e  %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.worst,
                            c.tolerance, c.detail.c_str());
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.6e,%.6e", c.worst, c.tolerance);
                csv += "\"" + c.name + "\"," + (c.passed ? "1," : "0,") + buf + ",\"" + c.detail + "\"\n";
            }
            if (!out_dir.empty())
            {
                std::filesystem::create_directories(out_dir);
                std::ofstream(std::filesystem::path(out_dir) / "oracle_check.csv", std::ios::binary) << csv;
            }
            std::fflush(stdout);
            if (!quiet)
                std::fprintf(stderr, "%s\n", all ? "all oracle checks passed" : "some oracle checks FAILED");
            return all ? 0 : 1;
        }
    } // namespace

    int run_cli(int argc, const char *const *argv)
    {
        CLI::App app{"Dual-robust ISAC transmit beamforming: designs, baselines and experiment sweeps"};
        app.require_subcommand(1);

        Common solve_opts, rho_opts, err_opts, pow_opts;
        CLI::App *solve = app.add_subcommand("solve", "design one scenario and report its worst case");
        add_common(solve, solve_opts, false);
        CLI::App *srho = app.add_subcommand("sweep-rho", "rate / beampattern trade-off versus the weight rho");
        add_common(srho, rho_opts, true);
        CLI::App *serr = app.add_subcommand("sweep-error", "performance versus CSI and angle error bounds");
        add_common(serr, err_opts, true);
        CLI::App *spow = app.add_subcommand("sweep-power", "utility versus the transmit power budget");
        add_common(spow, pow_opts, true);

        OracleCheckOptions oc;
        std::string oc_out;
        bool oc_quiet = false;
        CLI::App *oracle = app.add_subcommand("oracle-check", "compare library evaluations with reference oracles");
        oracle->add_option("--seed", oc.seed, "random instance seed");
        oracle->add_option("--instances", oc.instances, "random instances per check")->check(CLI::PositiveNumber);
        oracle->add_option("--samples", oc.samples, "draws per error ball")->check(CLI::PositiveNumber);
        oracle->add_option("--out", oc_out, "directory for oracle_check.csv");
        oracle->add_flag("--quiet", oc_quiet, "no summary on stderr");

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &e)
        {
            return app.exit(e) == 0 ? 0 : 2;
        }
        catch (const CLI::ParseError &e)
        {
            app.exit(e);
            return 2;
        }

        try
        {
            if (oracle->parsed())
                return run_oracle_check(oc, oc_out, oc_quiet);

            struct Entry
            {
                CLI::App *cmd;
                Common *opts;
                bool sweep;
                SweepResult (*run)(const SystemConfig &, const SweepOptions &);
            };
            const Entry entries[] = {{solve, &solve_opts, false, &solve_once},
                                     {srho, &rho_opts, true, &sweep_rho},
                                     {serr, &err_opts, true, &sweep_error},
                                     {spow, &pow_opts, true, &sweep_power}};
            for (const Entry &e : entries)
            {
                if (!e.cmd->parsed())
                    continue;
                const SystemConfig config = config_of(*e.opts);
                const SweepOptions opts = options_of(*e.opts, config, e.sweep, Method::Robust);
                const SweepResult result = e.run(config, opts);
                write_sweep(result, config, e.opts->out);
                if (!e.opts->quiet)
                    std::cerr << "wrote " << result.name << ".csv, " << result.name << "_per_seed.csv and "
                              << result.seeds.size() << " trace file(s) to " << e.opts->out << std::endl;
                return 0;
            }
            return 2;
        }
        catch (const ConfigError &e)
        {
            std::cerr << "error: " << e.what() << std::endl;
            return 2;
        }
        catch (const SolverError &e)
        {
            std::cerr << "solver failure: " << e.what() << std::endl;
            return 1;
        }
        catch (const NumericalError &e)
        {
            std::cerr << "numerical failure: " << e.what() << std::endl;
            return 1;
        }
        catch (const std::exception &e)
        {
            std::cerr << "failure: " << e.what() << std::endl;
            return 1;
        }
    }

} // namespace dualrobust
