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

#include "dualrobust/oracle_check.hpp"
#include "dualrobust/oracles.hpp"
#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace dualrobust;
using Catch::Approx;

TEST_CASE("oracle steering and sums", "[oracles]")
{
    const arma::cx_vec a = oracle::steering(pi / 6, 4);
    CHECK(std::abs(a(1) - oracle::cx(0.0, -1.0)) < 1e-12);
    const arma::cx_mat W = arma::cx_mat(a) * 0.5;
    CHECK(oracle::beampattern_by_columns(W, pi / 6) == Approx(4.0).epsilon(1e-12));
    CHECK(oracle::matched_filter_rate(arma::cx_vec{{1.0, 0.0}, {0.0, 1.0}}, 1.5, 1.0) == Approx(2.0));
}

TEST_CASE("oracle ball draws", "[oracles]")
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i)
    {
        CHECK(arma::norm(oracle::draw_on_sphere(5, 0.7, rng)) == Approx(0.7).epsilon(1e-12));
        CHECK(arma::norm(oracle::draw_in_ball(5, 0.7, rng)) <= 0.7 * (1.0 + 1e-12));
    }
}

TEST_CASE("oracle extremum search on known quadratics", "[oracles]")
{
    std::mt19937_64 rng(6);
    // max of ||d + g||^2 over ||d|| <= r is (||g|| + r)^2
    oracle::Quadratic q{arma::eye<arma::cx_mat>(3, 3), testing::random_cx(3, rng), 0.0};
    q.r = std::pow(arma::norm(q.g), 2);
    const oracle::Extreme mx = oracle::maximize_on_ball(oracle::as_objective(q), 3, 0.5, 2000, rng);
    CHECK(mx.polished == Approx(std::pow(arma::norm(q.g) + 0.5, 2)).epsilon(1e-8));
    CHECK(mx.sampled <= mx.polished);
    const oracle::Extreme mn = oracle::minimize_on_ball(oracle::as_objective(q), 3, 0.5, 2000, rng);
    CHECK(mn.polished == Approx(std::pow(arma::norm(q.g) - 0.5, 2)).epsilon(1e-8));
}

TEST_CASE("oracle grid minimum and slack", "[oracles]")
{
    std::mt19937_64 rng(7);
    const arma::cx_mat W = testing::random_cx(8, 2, rng);
    const double step = deg_to_rad(0.05);
    const double g = oracle::grid_min_beampattern(W, 0.1, 0.4, step);
    const double fine = oracle::grid_min_beampattern(W, 0.1, 0.4, step / 50.0);
    CHECK(fine <= g + 1e-12);
    CHECK(g - fine <= oracle::grid_slack(W, step));
}

TEST_CASE("spearman correlation", "[oracles]")
{
    CHECK(oracle::spearman({1, 2, 3, 4}, {10, 20, 30, 45}) == Approx(1.0));
    CHECK(oracle::spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == Approx(-1.0));
    CHECK(oracle::spearman({1, 2, 3}, {1, 1, 2}) == Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("library matches the reference oracles", "[oracles]")
{
    OracleCheckOptions o;
    o.instances = 15;
    o.samples = 20000;
    o.include_solve = false;
    const auto checks = run_oracle_checks(o);
    REQUIRE(checks.size() >= 6);
    for (const OracleCheck &c : checks)
    {
        INFO(c.name << ": worst " << c.worst << " tol " << c.tolerance << " " << c.detail);
        CHECK(c.passed);
    }
}
