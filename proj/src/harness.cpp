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

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace dualrobust
{
    using json = nlohmann::json;

    namespace
    {
        template <class T>
        T read_as(const json &v, const std::string &key)
        {
            try
            {
                return v.get<T>();
            }
            catch (const json::exception &)
            {
                throw ConfigError("config: field '" + key + "' has the wrong type");
            }
        }

        std::vector<ErrorSetting> read_settings(const json &v, const std::string &key)
        {
            if (!v.is_array())
                throw ConfigError("config: field '" + key + "' must be an array");
            std::vector<ErrorSetting> out;
            for (const auto &item : v)
            {
                if (!item.is_object())
                    throw ConfigError("config: entries of '" + key + "' must be objects");
                ErrorSetting s;
                for (const auto &[k, x] : item.items())
                {
                    if (k == "label")
                        s.label = read_as<std::string>(x, key + ".label");
                    else if (k == "varpi")
                        s.varpi = read_as<double>(x, key + ".varpi");
                    else if (k == "delta_theta_deg")
                        s.delta_theta_deg = read_as<double>(x, key + ".delta_theta_deg");
                    else
                        throw ConfigError("config: unknown field '" + key + "." + k + "'");
                }
                out.push_back(s);
            }
            return out;
        }

        json write_settings(const std::vector<ErrorSetting> &settings)
        {
            json a = json::array();
            for (const auto &s : settings)
                a.push_back({{"label", s.label}, {"varpi", s.varpi}, {"delta_theta_deg", s.delta_theta_deg}});
            return a;
        }

        const char *mu_rule_name(MuRule r) { return r == MuRule::Vertex ? "vertex" : "reverse_holder"; }

        json config_json(const SystemConfig &c)
        {
            json j;
            j["num_antennas"] = c.num_antennas;
            j["user_angles_deg"] = c.user_angles_deg;
            j["target_angles_deg"] = c.target_angles_deg;
            j["distance_min_m"] = c.distance_min_m;
            j["distance_max_m"] = c.distance_max_m;
            j["noise_power_dbm"] = c.noise_power_dbm;
            j["power_dbm"] = c.power_dbm;
            j["path_loss_reference_db"] = c.path_loss_reference_db;
            j["path_loss_exponent"] = c.path_loss_exponent;
            j["rician_k_factor"] = c.rician_k_factor ? json(*c.rician_k_factor) : json(nullptr);
            j["varpi"] = c.varpi;
            j["delta_theta_deg"] = c.delta_theta_deg;
            j["rho"] = c.rho;
            j["hull_samples"] = c.hull_samples;
            j["inner_tol"] = c.inner_tol;
            j["outer_tol"] = c.outer_tol;
            j["max_inner"] = c.max_inner;
            j["max_outer"] = c.max_outer;
            j["solver_feas_tol"] = c.solver_feas_tol;
            j["mu_rule"] = mu_rule_name(c.mu_rule);
            j["report_samples"] = c.report_samples;
            j["grid_step_deg"] = c.grid_step_deg;
            j["num_seeds"] = c.num_seeds;
            j["rho_grid"] = c.rho_grid;
            j["rho_settings"] = write_settings(c.rho_settings);
            j["error_sweep_rho"] = c.error_sweep_rho;
            j["varpi_grid"] = c.varpi_grid;
            j["varpi_sweep_delta_theta_deg"] = c.varpi_sweep_delta_theta_deg;
            j["delta_theta_grid_deg"] = c.delta_theta_grid_deg;
            j["delta_theta_sweep_varpi"] = c.delta_theta_sweep_varpi;
            j["power_sweep_rho"] = c.power_sweep_rho;
            j["power_grid_dbm"] = c.power_grid_dbm;
            j["power_settings"] = write_settings(c.power_settings);
            return j;
        }

        void require(bool ok, const std::string &what)
        {
            if (!ok)
                throw ConfigError("config: " + what);
        }

        bool all_finite(const std::vector<double> &v)
        {
            return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
        }

        double elapsed_ms(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        }

        SystemConfig with_error(SystemConfig c, double varpi, double delta_theta_deg)
        {
            c.varpi = varpi;
            c.delta_theta_deg = delta_theta_deg;
            return c;
        }

        // One (setting, param) point: every seed, every method.
        void run_point(std::vector<RunRecord> &out, const std::string &sweep, const std::string &setting,
                       const std::string &param_name, double param, const SystemConfig &config,
                       const SweepOptions &options, const ConicSolver &solver)
        {
            for (const Method method : options.methods)
                for (const std::uint64_t seed : options.seeds)
                {
                    const Scenario sc = make_scenario(config, seed);
                    MethodOutcome o = run_method(sc, method, solver);
                    RunRecord rec;
                    rec.row.sweep = sweep;
                    rec.row.setting = setting;
                    rec.row.param_name = param_name;
                    rec.row.param = param;
                    rec.row.method = method;
                    rec.row.seed = seed;
                    rec.row.rho = config.rho;
                    rec.row.worst_sum_rate = o.report.worst_sum_rate;
                    rec.row.certified_sum_rate = o.report.certified_sum_rate;
                    rec.row.worst_bp_gain = o.report.worst_sum_beampattern;
                    rec.row.utility = o.utility;
                    rec.row.iterations = o.iterations;
                    rec.row.wall_time_ms = o.wall_time_ms;
                    if (o.design)
                        rec.trace = std::move(o.design->trace);
                    if (options.progress)
                    {
                        char buf[256];
                        std::snprintf(buf, sizeof buf, "%s %s %s=%g %s seed=%llu rate=%.4f bp=%.4f (%.0f ms)",
                                      sweep.c_str(), setting.c_str(), param_name.c_str(), param, to_string(method),
                                      static_cast<unsigned long long>(seed), rec.row.worst_sum_rate,
                                      rec.row.worst_bp_gain, rec.row.wall_time_ms);
                        options.progress(buf);
                    }
                    out.push_back(std::move(rec));
                }
        }

        SweepResult finish(std::string name, std::vector<RunRecord> runs, const SweepOptions &options)
        {
            SweepResult r;
            r.name = std::move(name);
            r.runs = std::move(runs);
            r.mean = average_over_seeds(r.runs);
            r.seeds = options.seeds;
            return r;
        }

        std::string fmt(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.15g", v);
            return buf;
        }

        json trace_to_json(const SolveTrace &t)
        {
            json iters = json::array();
            for (const auto &it : t.iterations)
            {
                iters.push_back({{"outer", it.outer},
                                 {"inner", it.inner},
                                 {"objective", it.objective},
                                 {"relative_change", it.relative_change},
                                 {"delta", std::vector<double>(it.delta.begin(), it.delta.end())},
                                 {"beta", std::vector<double>(it.beta.begin(), it.beta.end())},
                                 {"status", it.status},
                                 {"accepted", it.accepted},
                                 {"fallback", it.fallback},
                                 {"solver_iterations", it.solver_iterations},
                                 {"min_lmi_eig", it.min_lmi_eig},
                                 {"wall_time_ms", it.wall_time_ms}});
                json mu = json::array();
                for (const auto &m : it.mu)
                    mu.push_back(std::vector<double>(m.begin(), m.end()));
                iters.back()["mu"] = mu;
            }
            json mu_hist = json::array();
            for (const auto &step : t.mu_history)
            {
                json s = json::array();
                for (const auto &m : step)
                    s.push_back(std::vector<double>(m.begin(), m.end()));
                mu_hist.push_back(s);
            }
            return {{"iterations", iters},
                    {"mu_history", mu_hist},
                    {"outer_iterations", t.outer_iterations},
                    {"inner_iterations", t.inner_iterations},
                    {"inner_converged", t.inner_converged},
                    {"outer_converged", t.outer_converged},
                    {"wall_time_ms", t.wall_time_ms}};
        }
    } // namespace

    RunConfig SystemConfig::run_config() const
    {
        RunConfig rc;
        rc.rho = rho;
        rc.power_budget = power_watts();
        rc.inner_tol = inner_tol;
        rc.outer_tol = outer_tol;
        rc.max_inner = max_inner;
        rc.max_outer = max_outer;
        rc.solver_feas_tol = solver_feas_tol;
        rc.hull_samples = hull_samples;
        rc.mu_rule = mu_rule;
        return rc;
    }

    void SystemConfig::validate() const
    {
        require(num_antennas >= 1, "num_antennas must be at least 1");
        require(!user_angles_deg.empty(), "at least one user angle is required");
        require(all_finite(user_angles_deg) && all_finite(target_angles_deg), "angles must be finite");
        require(distance_min_m > 0.0 && distance_max_m >= distance_min_m,
                "distances need 0 < distance_min_m <= distance_max_m");
        require(std::isfinite(noise_power_dbm) && std::isfinite(power_dbm), "powers must be finite");
        require(path_loss_exponent > 0.0, "path_loss_exponent must be positive");
        require(!rician_k_factor || *rician_k_factor >= 0.0, "rician_k_factor must be nonnegative");
        require(varpi >= 0.0 && varpi < 1.0, "varpi must lie in [0, 1)");
        require(delta_theta_deg >= 0.0, "delta_theta_deg must be nonnegative");
        require(report_samples >= 1, "report_samples must be at least 1");
        require(grid_step_deg > 0.0, "grid_step_deg must be positive");
        require(num_seeds >= 1, "num_seeds must be at least 1");
        require(!rho_grid.empty() && !varpi_grid.empty() && !delta_theta_grid_deg.empty() && !power_grid_dbm.empty(),
                "sweep grids must not be empty");
        for (double r : rho_grid)
            require(r >= 0.0 && r <= 1.0, "rho_grid values must lie in [0, 1]");
        for (double v : varpi_grid)
            require(v >= 0.0 && v < 1.0, "varpi_grid values must lie in [0, 1)");
        for (double d : delta_theta_grid_deg)
            require(d >= 0.0, "delta_theta_grid_deg values must be nonnegative");
        require(all_finite(power_grid_dbm), "power_grid_dbm values must be finite");
        require(!rho_settings.empty() && !power_settings.empty(), "error settings must not be empty");
        for (const auto *list : {&rho_settings, &power_settings})
            for (const auto &s : *list)
                require(s.varpi >= 0.0 && s.varpi < 1.0 && s.delta_theta_deg >= 0.0 && !s.label.empty(),
                        "error settings need a label, varpi in [0, 1) and delta_theta_deg >= 0");
        require(varpi_sweep_delta_theta_deg >= 0.0 && delta_theta_sweep_varpi >= 0.0 && delta_theta_sweep_varpi < 1.0,
                "fixed error companions out of range");
        require(error_sweep_rho >= 0.0 && error_sweep_rho <= 1.0 && power_sweep_rho >= 0.0 && power_sweep_rho <= 1.0,
                "sweep rho values must lie in [0, 1]");
        try
        {
            run_config().validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }

    SystemConfig parse_config(const std::string &json_text)
    {
        json j;
        try
        {
            j = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("config: not valid JSON (") + e.what() + ")");
        }
        if (!j.is_object())
            throw ConfigError("config: top level must be an object");

        SystemConfig c;
        using Setter = std::function<void(const json &, const std::string &)>;
        const std::map<std::string, Setter> setters{
            {"num_antennas", [&](const json &v, const std::string &k) { c.num_antennas = read_as<arma::uword>(v, k); }},
            {"user_angles_deg", [&](const json &v, const std::string &k) { c.user_angles_deg = read_as<std::vector<double>>(v, k); }},
            {"target_angles_deg", [&](const json &v, const std::string &k) { c.target_angles_deg = read_as<std::vector<double>>(v, k); }},
            {"distance_min_m", [&](const json &v, const std::string &k) { c.distance_min_m = read_as<double>(v, k); }},
            {"distance_max_m", [&](const json &v, const std::string &k) { c.distance_max_m = read_as<double>(v, k); }},
            {"noise_power_dbm", [&](const json &v, const std::string &k) { c.noise_power_dbm = read_as<double>(v, k); }},
            {"power_dbm", [&](const json &v, const std::string &k) { c.power_dbm = read_as<double>(v, k); }},
            {"path_loss_reference_db", [&](const json &v, const std::string &k) { c.path_loss_reference_db = read_as<double>(v, k); }},
            {"path_loss_exponent", [&](const json &v, const std::string &k) { c.path_loss_exponent = read_as<double>(v, k); }},
            {"rician_k_factor",
             [&](const json &v, const std::string &k) {
                 if (v.is_null())
                     c.rician_k_factor.reset();
                 else
                     c.rician_k_factor = read_as<double>(v, k);
             }},
            {"varpi", [&](const json &v, const std::string &k) { c.varpi = read_as<double>(v, k); }},
            {"delta_theta_deg", [&](const json &v, const std::string &k) { c.delta_theta_deg = read_as<double>(v, k); }},
            {"rho", [&](const json &v, const std::string &k) { c.rho = read_as<double>(v, k); }},
            {"hull_samples", [&](const json &v, const std::string &k) { c.hull_samples = read_as<arma::uword>(v, k); }},
            {"inner_tol", [&](const json &v, const std::string &k) { c.inner_tol = read_as<double>(v, k); }},
            {"outer_tol", [&](const json &v, const std::string &k) { c.outer_tol = read_as<double>(v, k); }},
            {"max_inner", [&](const json &v, const std::string &k) { c.max_inner = read_as<int>(v, k); }},
            {"max_outer", [&](const json &v, const std::string &k) { c.max_outer = read_as<int>(v, k); }},
            {"solver_feas_tol", [&](const json &v, const std::string &k) { c.solver_feas_tol = read_as<double>(v, k); }},
            {"mu_rule",
             [&](const json &v, const std::string &k) {
                 const std::string s = read_as<std::string>(v, k);
                 if (s == "reverse_holder")
                     c.mu_rule = MuRule::ReverseHolder;
                 else if (s == "vertex")
                     c.mu_rule = MuRule::Vertex;
                 else
                     throw ConfigError("config: mu_rule must be 'reverse_holder' or 'vertex'");
             }},
            {"report_samples", [&](const json &v, const std::string &k) { c.report_samples = read_as<arma::uword>(v, k); }},
            {"grid_step_deg", [&](const json &v, const std::string &k) { c.grid_step_deg = read_as<double>(v, k); }},
            {"num_seeds", [&](const json &v, const std::string &k) { c.num_seeds = read_as<unsigned>(v, k); }},
            {"rho_grid", [&](const json &v, const std::string &k) { c.rho_grid = read_as<std::vector<double>>(v, k); }},
            {"rho_settings", [&](const json &v, const std::string &k) { c.rho_settings = read_settings(v, k); }},
            {"error_sweep_rho", [&](const json &v, const std::string &k) { c.error_sweep_rho = read_as<double>(v, k); }},
            {"varpi_grid", [&](const json &v, const std::string &k) { c.varpi_grid = read_as<std::vector<double>>(v, k); }},
            {"varpi_sweep_delta_theta_deg", [&](const json &v, const std::string &k) { c.varpi_sweep_delta_theta_deg = read_as<double>(v, k); }},
            {"delta_theta_grid_deg", [&](const json &v, const std::string &k) { c.delta_theta_grid_deg = read_as<std::vector<double>>(v, k); }},
            {"delta_theta_sweep_varpi", [&](const json &v, const std::string &k) { c.delta_theta_sweep_varpi = read_as<double>(v, k); }},
            {"power_sweep_rho", [&](const json &v, const std::string &k) { c.power_sweep_rho = read_as<double>(v, k); }},
            {"power_grid_dbm", [&](const json &v, const std::string &k) { c.power_grid_dbm = read_as<std::vector<double>>(v, k); }},
            {"power_settings", [&](const json &v, const std::string &k) { c.power_settings = read_settings(v, k); }},
        };
        for (const auto &[key, value] : j.items())
        {
            const auto it = setters.find(key);
            if (it == setters.end())
                throw ConfigError("config: unknown field '" + key + "'");
            // integers given as negative numbers would wrap when read as unsigned
            if ((key == "num_antennas" || key == "hull_samples" || key == "report_samples" || key == "num_seeds") &&
                !value.is_number_unsigned())
                throw ConfigError("config: field '" + key + "' must be a nonnegative integer");
            it->second(value, key);
        }
        c.validate();
        return c;
    }

    SystemConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("config: cannot open '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str());
    }

    std::string config_to_json(const SystemConfig &config) { return config_json(config).dump(2) + "\n"; }

    Scenario make_scenario(const SystemConfig &config, std::uint64_t seed)
    {
        config.validate();
        Scenario sc;
        sc.config = config;
        sc.seed = seed;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(config.distance_min_m, config.distance_max_m);

        ProblemInstance &inst = sc.instance;
        inst.geometry = ArrayGeometry(config.num_antennas);
        const PathLossModel model{config.path_loss_reference_db, config.path_loss_exponent};
        std::vector<arma::cx_vec> estimates;
        for (double angle_deg : config.user_angles_deg)
        {
            const double d = dist(rng);
            sc.distances_m.push_back(d);
            const double theta = deg_to_rad(angle_deg);
            inst.user_angles.push_back(theta);
            estimates.push_back(config.rician_k_factor
                                    ? synth_channel(d, theta, model, inst.geometry, *config.rician_k_factor, rng)
                                    : synth_channel(d, theta, model, inst.geometry));
        }
        inst.channels = ChannelSet::from_error_coefficient(
            std::move(estimates), config.varpi,
            std::vector<double>(config.user_angles_deg.size(), dbm_to_watts(config.noise_power_dbm)));
        for (double angle_deg : config.target_angles_deg)
            inst.targets.push_back(AngleInterval::centered(deg_to_rad(angle_deg), deg_to_rad(config.delta_theta_deg)));
        return sc;
    }

    const char *to_string(Method method)
    {
        switch (method)
        {
        case Method::Robust:
            return "robust";
        case Method::NonRobust:
            return "nonrobust";
        case Method::Svm:
            return "svm";
        }
        return "unknown";
    }

    Method parse_method(const std::string &name)
    {
        for (Method m : all_methods)
            if (name == to_string(m))
                return m;
        throw ConfigError("unknown method '" + name + "' (expected robust, nonrobust or svm)");
    }

    MethodOutcome run_method(const Scenario &scenario, Method method, const ConicSolver &solver)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const SystemConfig &c = scenario.config;
        const RunConfig rc = c.run_config();
        MethodOutcome o;
        o.method = method;
        switch (method)
        {
        case Method::Robust:
            o.design = outer_loop(scenario.instance, rc, solver);
            break;
        case Method::NonRobust:
            o.design = non_robust_design(scenario.instance, rc, solver);
            break;
        case Method::Svm:
            o.beamformer = svm_design(scenario.instance, rc.power_budget);
            break;
        }
        if (o.design)
        {
            o.beamformer = o.design->beamformer;
            o.objective = o.design->objective;
            o.iterations = o.design->trace.inner_iterations;
        }
        ReportOptions ro;
        ro.num_samples = c.report_samples;
        ro.grid_step = deg_to_rad(c.grid_step_deg);
        ro.seed = scenario.seed;
        o.report = evaluate_worst_case(o.beamformer, scenario.instance.channels, scenario.instance.targets, ro);
        o.utility = c.rho * o.report.worst_sum_rate + (1.0 - c.rho) * o.report.worst_sum_beampattern;
        o.wall_time_ms = elapsed_ms(t0);
        return o;
    }

    MethodOutcome run_method(const Scenario &scenario, Method method)
    {
        const auto solver = make_default_conic_solver();
        return run_method(scenario, method, *solver);
    }

    std::vector<std::uint64_t> seed_range(std::uint64_t first_seed, unsigned count)
    {
        std::vector<std::uint64_t> s;
        for (unsigned i = 0; i < count; ++i)
            s.push_back(first_seed + i);
        return s;
    }

    SweepResult sweep_rho(const SystemConfig &config, const SweepOptions &options)
    {
        const auto solver = make_default_conic_solver();
        std::vector<RunRecord> runs;
        for (const auto &setting : config.rho_settings)
            for (double rho : config.rho_grid)
            {
                SystemConfig c = with_error(config, setting.varpi, setting.delta_theta_deg);
                c.rho = rho;
                run_point(runs, "sweep-rho", setting.label, "rho", rho, c, options, *solver);
            }
        return finish("sweep-rho", std::move(runs), options);
    }

    SweepResult sweep_error(const SystemConfig &config, const SweepOptions &options)
    {
        const auto solver = make_default_conic_solver();
        std::vector<RunRecord> runs;
        for (double varpi : config.varpi_grid)
        {
            SystemConfig c = with_error(config, varpi, config.varpi_sweep_delta_theta_deg);
            c.rho = config.error_sweep_rho;
            run_point(runs, "sweep-error", "varpi_sweep", "varpi", varpi, c, options, *solver);
        }
        for (double dtheta : config.delta_theta_grid_deg)
        {
            SystemConfig c = with_error(config, config.delta_theta_sweep_varpi, dtheta);
            c.rho = config.error_sweep_rho;
            run_point(runs, "sweep-error", "delta_theta_sweep", "delta_theta_deg", dtheta, c, options, *solver);
        }
        return finish("sweep-error", std::move(runs), options);
    }

    SweepResult sweep_power(const SystemConfig &config, const SweepOptions &options)
    {
        const auto solver = make_default_conic_solver();
        std::vector<RunRecord> runs;
        for (const auto &setting : config.power_settings)
            for (double p_dbm : config.power_grid_dbm)
            {
                SystemConfig c = with_error(config, setting.varpi, setting.delta_theta_deg);
                c.rho = config.power_sweep_rho;
                c.power_dbm = p_dbm;
                run_point(runs, "sweep-power", setting.label, "power_dbm", p_dbm, c, options, *solver);
            }
        return finish("sweep-power", std::move(runs), options);
    }

    SweepResult solve_once(const SystemConfig &config, const SweepOptions &options)
    {
        const auto solver = make_default_conic_solver();
        std::vector<RunRecord> runs;
        run_point(runs, "solve", "config", "rho", config.rho, config, options, *solver);
        return finish("solve", std::move(runs), options);
    }

    std::vector<SweepRow> average_over_seeds(const std::vector<RunRecord> &runs)
    {
        // Keys in first-appearance order so the output follows the sweep order.
        std::vector<std::tuple<std::string, double, Method>> order;
        std::map<std::tuple<std::string, double, int>, std::vector<const SweepRow *>> groups;
        for (const auto &r : runs)
        {
            const auto key = std::make_tuple(r.row.setting, r.row.param, int(r.row.method));
            if (!groups.count(key))
                order.emplace_back(r.row.setting, r.row.param, r.row.method);
            groups[key].push_back(&r.row);
        }
        std::vector<SweepRow> out;
        for (const auto &[setting, param, method] : order)
        {
            const auto &g = groups.at(std::make_tuple(setting, param, int(method)));
            SweepRow m = *g.front();
            m.seed.reset();
            m.worst_sum_rate = m.certified_sum_rate = m.worst_bp_gain = m.iterations = m.wall_time_ms = 0.0;
            for (const SweepRow *r : g)
            {
                m.worst_sum_rate += r->worst_sum_rate;
                m.certified_sum_rate += r->certified_sum_rate;
                m.worst_bp_gain += r->worst_bp_gain;
                m.iterations += r->iterations;
                m.wall_time_ms += r->wall_time_ms;
            }
            const double n = double(g.size());
            m.worst_sum_rate /= n;
            m.certified_sum_rate /= n;
            m.worst_bp_gain /= n;
            m.iterations /= n;
            m.wall_time_ms /= n;
            m.utility = m.rho * m.worst_sum_rate + (1.0 - m.rho) * m.worst_bp_gain;
            out.push_back(m);
        }
        return out;
    }

    std::string to_csv(const std::vector<SweepRow> &rows)
    {
        std::ostringstream os;
        os << "sweep,setting,sweep_param,param_value,method,seed,rho,worst_sum_rate,certified_sum_rate,worst_bp_gain,"
              "utility,iterations\n";
        for (const auto &r : rows)
        {
            os << r.sweep << ',' << r.setting << ',' << r.param_name << ',' << fmt(r.param) << ',' << to_string(r.method)
               << ',' << (r.seed ? std::to_string(*r.seed) : std::string("mean")) << ',' << fmt(r.rho) << ','
               << fmt(r.worst_sum_rate) << ',' << fmt(r.certified_sum_rate) << ',' << fmt(r.worst_bp_gain) << ','
               << fmt(r.utility) << ',' << fmt(r.iterations) << '\n';
        }
        return os.str();
    }

    std::string trace_json(const SweepResult &result, std::uint64_t seed, const SystemConfig &config)
    {
        json runs = json::array();
        for (const auto &r : result.runs)
        {
            if (!r.row.seed || *r.row.seed != seed)
                continue;
            json j{{"setting", r.row.setting},
                   {"sweep_param", r.row.param_name},
                   {"param_value", r.row.param},
                   {"method", to_string(r.row.method)},
                   {"rho", r.row.rho},
                   {"worst_sum_rate", r.row.worst_sum_rate},
                   {"certified_sum_rate", r.row.certified_sum_rate},
                   {"worst_bp_gain", r.row.worst_bp_gain},
                   {"utility", r.row.utility},
                   {"iterations", r.row.iterations},
                   {"wall_time_ms", r.row.wall_time_ms}};
            j["trace"] = r.trace ? trace_to_json(*r.trace) : json(nullptr);
            runs.push_back(std::move(j));
        }
        json out{{"subcommand", result.name},
                 {"seed", seed},
                 {"num_seeds", result.seeds.size()},
                 {"seeds", result.seeds},
                 {"config", config_json(config)},
                 {"runs", runs}};
        return out.dump(1) + "\n";
    }

    void write_sweep(const SweepResult &result, const SystemConfig &config, const std::string &dir)
    {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir))
            throw ConfigError("cannot create output directory '" + dir + "'");
        auto write = [&](const std::string &name, const std::string &text) {
            const fs::path p = fs::path(dir) / name;
            std::ofstream out(p, std::ios::binary);
            out << text;
            if (!out)
                throw ConfigError("cannot write '" + p.string() + "'");
        };
        std::vector<SweepRow> per_seed;
        for (const auto &r : result.runs)
            per_seed.push_back(r.row);
        write(result.name + ".csv", to_csv(result.mean));
        write(result.name + "_per_seed.csv", to_csv(per_seed));
        for (const std::uint64_t seed : result.seeds)
            write(result.name + "_" + std::to_string(seed) + ".json", trace_json(result, seed, config));
    }

} // namespace dualrobust
