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

#include <catch2/catch_amalgamated.hpp>

using namespace dualrobust;
using Catch::Approx;

TEST_CASE("SVM beamformer", "[baselines]")
{
    const Scenario sc = make_scenario(SystemConfig{}, 1);
    const double P0 = sc.config.power_watts();
    const Beamformer bf = svm_design(sc.instance, P0);
    const arma::uword L = sc.instance.num_columns(), N = sc.instance.geometry.num_antennas();
    CHECK(bf.power() == Approx(P0).epsilon(1e-12));
    for (arma::uword m = 0; m < sc.instance.num_targets(); ++m)
    {
        const double t = sc.instance.targets[m].midpoint();
        const arma::cx_vec a = steering_vector(t, sc.instance.geometry);
        const double own = std::norm(arma::cdot(a, bf.matrix().col(sc.instance.num_users() + m)));
        CHECK(own == Approx(double(N) * P0 / double(L)).epsilon(1e-12));
    }
}

TEST_CASE("SVM with one user is matched filtering", "[baselines]")
{
    SystemConfig c;
    c.user_angles_deg = {40.0};
    c.target_angles_deg = {};
    const Scenario sc = make_scenario(c, 2);
    const Beamformer bf = svm_design(sc.instance, 1.0);
    const arma::cx_vec &h = sc.instance.channels.estimates[0];
    CHECK(std::norm(arma::cdot(h, bf.matrix().col(0))) == Approx(std::pow(arma::norm(h), 2)).epsilon(1e-12));
}

TEST_CASE("nominal instance", "[baselines]")
{
    const Scenario sc = make_scenario(SystemConfig{}, 1);
    const ProblemInstance n = nominal_instance(sc.instance);
    for (double r : n.channels.radii)
        CHECK(r == 0.0);
    for (std::size_t m = 0; m < n.targets.size(); ++m)
    {
        CHECK(n.targets[m].width() == 0.0);
        CHECK(n.targets[m].midpoint() == Approx(sc.instance.targets[m].midpoint()));
    }
    CHECK(std::string(to_string(BaselineKind::Svm)) == "svm");
}

TEST_CASE("non-robust design is best on the nominal channel", "[baselines][slow]")
{
    SystemConfig c;
    c.num_antennas = 6;
    c.user_angles_deg = {20.0, 55.0};
    c.target_angles_deg = {120.0};
    c.varpi = 0.3;
    c.delta_theta_deg = 3.0;
    c.rho = 1.0;
    const Scenario sc = make_scenario(c, 3);
    const RunConfig rc = sc.config.run_config();
    const DesignResult nr = non_robust_design(sc.instance, rc);
    const DesignResult rb = outer_loop(sc.instance, rc);
    CHECK(nr.beamformer.power() <= rc.power_budget * (1.0 + 1e-6));

    auto nominal_rate = [&](const Beamformer &bf) {
        double s = 0.0;
        for (arma::uword k = 0; k < sc.instance.num_users(); ++k)
            s += rate_bits(user_sinr(bf, sc.instance.channels.estimates[k], k, sc.instance.channels.noise_powers[k]));
        return s;
    };
    CHECK(nominal_rate(nr.beamformer) >= nominal_rate(rb.beamformer));
}
