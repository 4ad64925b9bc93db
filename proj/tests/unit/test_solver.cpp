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

#include "dualrobust/baselines.hpp"
#include "dualrobust/harness.hpp"
#include "dualrobust/oracles.hpp"
#include "dualrobust/solver.hpp"
#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace dualrobust;
using Catch::Approx;

namespace
{
    SystemConfig small_config()
    {
        SystemConfig c;
        c.num_antennas = 6;
        c.user_angles_deg = {20.0, 55.0};
        c.target_angles_deg = {120.0};
        c.varpi = 0.1;
        c.delta_theta_deg = 4.0;
        return c;
    }

    double eigmin(const arma::cx_mat &M) { return arma::eig_sym(arma::cx_mat(0.5 * (M + M.t()))).min(); }
}

TEST_CASE("run configuration validation", "[solver]")
{
    RunConfig rc;
    CHECK_NOTHROW(rc.validate());
    rc.rho = 1.5;
    CHECK_THROWS(rc.validate());
    rc = RunConfig{};
    rc.hull_samples = 0;
    CHECK_THROWS(rc.validate());
    rc = RunConfig{};
    rc.power_budget = -1.0;
    CHECK_THROWS(rc.validate());
}

TEST_CASE("initial iterate", "[solver]")
{
    const Scenario sc = make_scenario(small_config(), 2);
    const RunConfig rc = sc.config.run_config();
    const NormalizedProblem np = normalize(sc.instance, rc);
    const SolverIterate it = initialize(sc.instance, np, rc);

    CHECK(std::pow(arma::norm(denormalize(it.W, rc.power_budget), "fro"), 2) ==
          Approx(rc.power_budget).epsilon(1e-9));
    for (const auto &mu : it.mu)
        CHECK(arma::approx_equal(mu, arma::vec(rc.hull_samples, arma::fill::value(1.0 / rc.hull_samples)), "absdiff",
                                 1e-15));

    const Beamformer bf(denormalize(it.W, rc.power_budget), sc.instance.num_users());
    std::mt19937_64 rng(1);
    for (arma::uword k = 0; k < sc.instance.num_users(); ++k)
    {
        CHECK(it.delta(k) >= 1e-6 * (1 - 1e-12));
        const SinrBounds b = worst_case_sinr(k, bf, sc.instance.channels, 5000, rng);
        CHECK(it.delta(k) <= std::max(b.sampled, 1e-6) * (1.0 + 1e-9));
    }
    CHECK_NOTHROW(it.validate(np.noise));
}

TEST_CASE("rho = 0 keeps only the sensing term", "[solver]")
{
    const Scenario sc = make_scenario(small_config(), 2);
    const RunConfig rc = sc.config.run_config();
    const NormalizedProblem np = normalize(sc.instance, rc);
    const SolverIterate it = initialize(sc.instance, np, rc);
    const auto B = hull_matrices(np, it.mu);
    CHECK(design_objective(np, it, B, 0.0) ==
          Approx(np.sensing_scale * sensing_objective_value(it.W, B)).epsilon(1e-12));
    double rate = 0.0;
    for (double d : it.delta)
        rate += std::log2(1.0 + d);
    CHECK(design_objective(np, it, B, 1.0) == Approx(rate).epsilon(1e-12));
}

TEST_CASE("certified slacks satisfy every LMI", "[solver]")
{
    const Scenario sc = make_scenario(small_config(), 4);
    const RunConfig rc = sc.config.run_config();
    const NormalizedProblem np = normalize(sc.instance, rc);
    const SolverIterate anchor = initialize(sc.instance, np, rc);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 5; ++i)
    {
        const arma::cx_mat W = anchor.W + testing::random_cx(anchor.W.n_rows, anchor.W.n_cols, rng, 0.05);
        const SolverIterate c = certify(np, W, anchor);
        CHECK(std::pow(arma::norm(c.W, "fro"), 2) <= 1.0 + 1e-12);
        for (const auto &blk : lmi_blocks(np, c))
            CHECK(eigmin(blk) >= -1e-9);
    }
}

TEST_CASE("one convexified step does not lower the objective", "[solver]")
{
    const Scenario sc = make_scenario(small_config(), 5);
    const RunConfig rc = sc.config.run_config();
    const NormalizedProblem np = normalize(sc.instance, rc);
    SolverIterate a = initialize(sc.instance, np, rc);
    const auto B = hull_matrices(np, a.mu);
    const double f0 = design_objective(np, a, B, rc.rho);
    const auto solver = make_default_conic_solver();
    const StepResult s = solve_subproblem(np, a, B, rc, *solver, a.W);
    REQUIRE(s.solution.ok());
    CHECK(s.objective >= f0 - 1e-6);
    CHECK(alternate_settings(rc.conic).size() == 2);
}

TEST_CASE("design pipeline on a small scenario", "[solver]")
{
    const Scenario sc = make_scenario(small_config(), 6);
    const RunConfig rc = sc.config.run_config();
    const DesignResult d = outer_loop(sc.instance, rc);

    CHECK(d.beamformer.power() <= rc.power_budget * (1.0 + 1e-6));
    CHECK(d.trace.outer_iterations <= rc.max_outer);
    CHECK(d.trace.inner_iterations <= rc.max_inner * d.trace.outer_iterations);

    double prev = -1.0;
    int outer = -1;
    for (const auto &it : d.trace.iterations)
    {
        if (it.outer != outer)
        {
            outer = it.outer;
            prev = it.objective;
            continue;
        }
        if (it.accepted)
        {
            CHECK(it.objective >= prev - 1e-6);
            prev = it.objective;
        }
    }
    const NormalizedProblem np = normalize(sc.instance, rc);
    for (const auto &blk : lmi_blocks(np, d.iterate))
        CHECK(eigmin(blk) >= -1e-7);

    // restarting from the result changes little
    SolveTrace again;
    SolverIterate from = d.iterate;
    inner_loop(np, from, rc, *make_default_conic_solver(), again, 1);
    REQUIRE(again.iterations.size() >= 2);
    CHECK(again.iterations[1].relative_change < 5.0 * rc.inner_tol);
    CHECK(again.inner_iterations <= 3);
}

TEST_CASE("a single hull sample needs one outer pass", "[solver]")
{
    const Scenario sc = make_scenario(small_config(), 7);
    RunConfig rc = sc.config.run_config();
    rc.hull_samples = 1;
    const DesignResult d = outer_loop(sc.instance, rc);
    CHECK(d.trace.outer_iterations == 1);
    CHECK(d.trace.outer_converged);
}

TEST_CASE("single user without error reaches matched-filter capacity", "[solver]")
{
    SystemConfig c = small_config();
    c.user_angles_deg = {30.0};
    c.target_angles_deg = {};
    c.varpi = 0.0;
    c.delta_theta_deg = 0.0;
    c.rho = 1.0;
    const Scenario sc = make_scenario(c, 8);
    const DesignResult d = outer_loop(sc.instance, sc.config.run_config());
    const auto &ch = sc.instance.channels;
    const double rate = rate_bits(user_sinr(d.beamformer, ch.estimates[0], 0, ch.noise_powers[0]));
    CHECK(testing::rel_diff(rate, oracle::matched_filter_rate(ch.estimates[0], c.power_watts(), ch.noise_powers[0])) <
          0.01);
}
