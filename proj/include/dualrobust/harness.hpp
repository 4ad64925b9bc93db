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

#ifndef dualrobust_harness_H
#define dualrobust_harness_H

#include "dualrobust/baselines.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualrobust
{
    // Raised for unreadable, malformed or out-of-range configuration.
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct ErrorSetting
    {
        std::string label;
        double varpi = 0.0;
        double delta_theta_deg = 0.0;
    };

    // All scenario scalars. External angles are degrees, powers dBm.
    struct SystemConfig
    {
        arma::uword num_antennas = 8;
        std::vector<double> user_angles_deg{13.0, 50.0, 65.0};
        std::vector<double> target_angles_deg{121.0, 127.0};
        double distance_min_m = 20.0;
        double distance_max_m = 70.0;
        double noise_power_dbm = -80.0;
        double power_dbm = 30.0;
        double path_loss_reference_db = 30.0;
        double path_loss_exponent = 3.0;
        std::optional<double> rician_k_factor; // empty: pure line of sight
        double varpi = 0.2;
        double delta_theta_deg = 6.0;

        double rho = 0.5;
        arma::uword hull_samples = 11;
        double inner_tol = 1e-3;
        double outer_tol = 1e-3;
        int max_inner = 30;
        int max_outer = 20;
        double solver_feas_tol = 1e-6;
        MuRule mu_rule = MuRule::ReverseHolder;

        arma::uword report_samples = 10000;
        double grid_step_deg = 0.05;

        unsigned num_seeds = 10;
        std::vector<double> rho_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        std::vector<ErrorSetting> rho_settings{{"sensing", 0.02, 15.0}, {"communication", 0.4, 3.0}};
        double error_sweep_rho = 0.8;
        std::vector<double> varpi_grid{0.0, 0.1, 0.2, 0.3, 0.4};
        double varpi_sweep_delta_theta_deg = 3.0;
        std::vector<double> delta_theta_grid_deg{0.0, 3.0, 6.0, 9.0, 12.0, 15.0};
        double delta_theta_sweep_varpi = 0.02;
        double power_sweep_rho = 0.8;
        std::vector<double> power_grid_dbm{20.0, 22.0, 24.0, 26.0, 28.0, 30.0};
        std::vector<ErrorSetting> power_settings{{"low_error", 0.2, 6.0}, {"high_error", 0.3, 10.0}};

        // Throws ConfigError.
        void validate() const;

        RunConfig run_config() const;
        double power_watts() const { return dbm_to_watts(power_dbm); }
    };

    // Unknown keys are rejected; missing keys keep their defaults.
    SystemConfig parse_config(const std::string &json_text);
    SystemConfig load_config(const std::string &path);
    std::string config_to_json(const SystemConfig &config);

    // A concrete draw: distances from a generator seeded with `seed`, then channels.
    struct Scenario
    {
        SystemConfig config;
        std::uint64_t seed = 0;
        std::vector<double> distances_m;
        ProblemInstance instance;
    };

    Scenario make_scenario(const SystemConfig &config, std::uint64_t seed);

    enum class Method
    {
        Robust,
        NonRobust,
        Svm
    };

    const char *to_string(Method method);
    Method parse_method(const std::string &name); // throws ConfigError
    inline const std::vector<Method> all_methods{Method::Robust, Method::NonRobust, Method::Svm};

    struct MethodOutcome
    {
        Method method = Method::Robust;
        Beamformer beamformer{arma::cx_mat(1, 1, arma::fill::zeros), 1};
        WorstCaseReport report;
        double utility = 0.0;       // rho * worst_sum_rate + (1 - rho) * worst_sum_beampattern
        double objective = 0.0;     // design objective at the returned iterate (0 for SVM)
        int iterations = 0;         // inner SCA steps over all outer passes
        double wall_time_ms = 0.0;
        std::optional<DesignResult> design; // empty for SVM
    };

    MethodOutcome run_method(const Scenario &scenario, Method method, const ConicSolver &solver);
    MethodOutcome run_method(const Scenario &scenario, Method method);

    struct SweepRow
    {
        std::string sweep;
        std::string setting;
        std::string param_name;
        double param = 0.0;
        Method method = Method::Robust;
        std::optional<std::uint64_t> seed; // empty on seed-averaged rows
        double rho = 0.0;
        double worst_sum_rate = 0.0;
        double certified_sum_rate = 0.0;
        double worst_bp_gain = 0.0;
        double utility = 0.0;
        double iterations = 0.0;
        double wall_time_ms = 0.0;
    };

    struct RunRecord
    {
        SweepRow row;
        std::optional<SolveTrace> trace;
    };

    struct SweepResult
    {
        std::string name;
        std::vector<RunRecord> runs;   // sorted by setting, param, method, seed
        std::vector<SweepRow> mean;    // one row per (setting, param, method)
        std::vector<std::uint64_t> seeds;
    };

    using Progress = std::function<void(const std::string &)>;

    struct SweepOptions
    {
        std::vector<Method> methods = all_methods;
        std::vector<std::uint64_t> seeds{1};
        Progress progress;
    };

    // seeds first_seed, first_seed + 1, ...
    std::vector<std::uint64_t> seed_range(std::uint64_t first_seed, unsigned count);

    // Every rho in the grid under each of config.rho_settings at config.power_dbm.
    SweepResult sweep_rho(const SystemConfig &config, const SweepOptions &options);

    // varpi swept at Delta-theta = varpi_sweep_delta_theta_deg, then Delta-theta swept at
    // varpi = delta_theta_sweep_varpi, both at rho = error_sweep_rho.
    SweepResult sweep_error(const SystemConfig &config, const SweepOptions &options);

    // Every P0 of power_grid_dbm under each of power_settings at rho = power_sweep_rho.
    SweepResult sweep_power(const SystemConfig &config, const SweepOptions &options);

    // A single run of every requested method on one scenario.
    SweepResult solve_once(const SystemConfig &config, const SweepOptions &options);

    // Seed-averaged rows; the utility is recomputed from the averaged rate and gain.
    std::vector<SweepRow> average_over_seeds(const std::vector<RunRecord> &runs);

    // Comma-separated with a header and 15 significant digits. Wall time is left out so the files
    // depend only on (config, seed).
    std::string to_csv(const std::vector<SweepRow> &rows);

    // JSON trace for the runs of one seed, including wall times.
    std::string trace_json(const SweepResult &result, std::uint64_t seed, const SystemConfig &config);

    // Writes <name>.csv (averaged), <name>_per_seed.csv and one <name>_<seed>.json per seed into dir.
    void write_sweep(const SweepResult &result, const SystemConfig &config, const std::string &dir);

    // Entry point of the command-line tool. Returns 0 on success, 1 on solver failure, 2 on bad input.
    int run_cli(int argc, const char *const *argv);

} // namespace dualrobust

#endif
