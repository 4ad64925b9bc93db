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
#include "dualrobust/oracles.hpp"
#include "dualrobust/sca_constraints.hpp"
#include "dualrobust/solver.hpp"
#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace dualrobust;
using Catch::Approx;

namespace
{
    double eigmin(const arma::cx_mat &M) { return arma::eig_sym(arma::cx_mat(0.5 * (M + M.t()))).min(); }
}

TEST_CASE("signal surrogate is tight at the anchor", "[sca_constraints]")
{
    std::mt19937_64 rng(31);
    const arma::cx_vec h = testing::random_cx(6, rng), w = testing::random_cx(6, rng);
    const SignalTerms t = sca_signal_terms(w, w, h);
    for (int i = 0; i < 100; ++i)
    {
        const arma::cx_vec d = testing::random_cx(6, rng, 0.3);
        CHECK(signal_surrogate_value(t, d) == Approx(std::norm(arma::cdot(h + d, w))).epsilon(1e-11));
    }
}

TEST_CASE("signal surrogate with a zero anchor", "[sca_constraints]")
{
    std::mt19937_64 rng(32);
    const arma::cx_vec h = testing::random_cx(4, rng);
    const SignalTerms t = sca_signal_terms(testing::random_cx(4, rng), arma::cx_vec(4, arma::fill::zeros), h);
    CHECK(arma::norm(t.Lambda, "fro") == 0.0);
    CHECK(arma::norm(t.b) == 0.0);
    CHECK(t.c == 0.0);
}

TEST_CASE("signal surrogate is a minorant", "[sca_constraints]")
{
    std::mt19937_64 rng(33);
    for (int i = 0; i < 500; ++i)
    {
        const arma::cx_vec h = testing::random_cx(5, rng), w = testing::random_cx(5, rng),
                           wp = testing::random_cx(5, rng), d = testing::random_cx(5, rng, 0.5);
        const double truth = std::norm(arma::cdot(h + d, w));
        CHECK(signal_surrogate_value(sca_signal_terms(w, wp, h), d) <= truth + 1e-10 * std::max(1.0, truth));
    }
}

TEST_CASE("affine signal terms evaluate like the numeric ones", "[sca_constraints]")
{
    std::mt19937_64 rng(34);
    const VariableLayout lay(4, 1, 2);
    const arma::cx_vec h = testing::random_cx(4, rng), wp = testing::random_cx(4, rng);
    arma::vec x = arma::randn<arma::vec>(lay.size());
    const arma::cx_mat W = lay.beamformer(x);
    const SignalTerms num = sca_signal_terms(W.col(0), wp, h);
    const AffineSignalTerms aff = sca_signal_terms(lay.column(0), wp, h);
    CHECK(arma::approx_equal(aff.Lambda.evaluate(x), num.Lambda, "absdiff", 1e-11));
    CHECK(aff.c.evaluate(x) == Approx(num.c).epsilon(1e-11));
}

TEST_CASE("signal LMI special cases", "[sca_constraints]")
{
    std::mt19937_64 rng(35);
    const arma::cx_vec h = testing::random_cx(3, rng), w = testing::random_cx(3, rng);
    const SignalTerms t = sca_signal_terms(w, w, h);
    const arma::cx_mat nominal = lmi_signal(t, 0.4, 0.0, 0.0);
    REQUIRE(nominal.n_rows == 1);
    CHECK(std::real(nominal(0, 0)) == Approx(t.c - 0.4));

    SignalTerms unit;
    unit.Lambda = arma::eye<arma::cx_mat>(3, 3);
    unit.b = arma::cx_vec(3, arma::fill::zeros);
    const double nu = 0.7, eps = 0.5;
    unit.c = nu + 1.0 * eps * eps;
    const arma::cx_mat B = lmi_signal(unit, nu, 1.0, eps);
    arma::cx_mat expect(4, 4, arma::fill::zeros);
    expect.submat(0, 0, 2, 2) = 2.0 * arma::eye<arma::cx_mat>(3, 3);
    CHECK(arma::approx_equal(B, expect, "absdiff", 1e-14));
    CHECK(eigmin(B) >= -1e-14);
}

TEST_CASE("interference LMI special cases", "[sca_constraints]")
{
    std::mt19937_64 rng(36);
    const arma::cx_vec h = testing::random_cx(4, rng);
    const arma::cx_mat Wb = testing::random_cx(4, 2, rng);
    const double sigma2 = 0.3, need = std::pow(arma::norm(Wb.t() * h), 2) + sigma2;
    CHECK(eigmin(lmi_interference(h, Wb, need * (1 + 1e-9), 0.0, 0.0, sigma2)) >= -1e-12);
    CHECK(eigmin(lmi_interference(h, Wb, need * (1 - 1e-3), 0.0, 0.0, sigma2)) < 0.0);

    const arma::cx_mat zero(4, 2, arma::fill::zeros);
    CHECK(eigmin(lmi_interference(h, zero, sigma2 + 0.2, 0.2, 0.4, sigma2)) >= -1e-14);
    CHECK(eigmin(lmi_interference(h, zero, sigma2 + 0.1, 0.2, 0.4, sigma2)) < 0.0);
}

TEST_CASE("tightest bounds certify the ball by sampling", "[sca_constraints]")
{
    std::mt19937_64 rng(37);
    for (int i = 0; i < 5; ++i)
    {
        const arma::cx_vec h = testing::random_cx(6, rng), w = testing::random_cx(6, rng),
                           wp = w + testing::random_cx(6, rng, 0.2);
        const arma::cx_mat Wb = testing::random_cx(6, 3, rng);
        const double eps = 0.3 * std::abs(arma::cdot(h, w)) / arma::norm(w), sigma2 = 0.2;

        const SignalTerms t = sca_signal_terms(w, wp, h);
        const TightSignalBound sb = tightest_signal_bound(t, eps);
        CHECK(eigmin(lmi_signal(t, sb.nu, sb.phi, eps)) >= -1e-9);
        const TightInterferenceBound ib = tightest_interference_bound(h, Wb, eps, sigma2);
        CHECK(eigmin(lmi_interference(h, Wb, ib.beta, ib.xi, eps, sigma2)) >= -1e-9);

        for (int s = 0; s < 10000; ++s)
        {
            const arma::cx_vec d = (s % 10 == 0) ? oracle::draw_in_ball(6, eps, rng) : oracle::draw_on_sphere(6, eps, rng);
            CHECK(signal_surrogate_value(t, d) >= sb.nu * (1.0 - 1e-9));
            CHECK(std::pow(arma::norm(Wb.t() * (h + d)), 2) + sigma2 <= ib.beta * (1.0 + 1e-9));
        }
        // nearly tight
        CHECK(ib.beta == Approx(worst_interference(h, Wb, eps, sigma2)).epsilon(1e-6));
    }
}

TEST_CASE("slack surrogate", "[sca_constraints]")
{
    std::mt19937_64 rng(38);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (int i = 0; i < 200; ++i)
    {
        const double d = u(rng), b = u(rng), dp = u(rng), bp = u(rng);
        CHECK(slack_surrogate_rhs(dp, bp, dp, bp) == Approx(dp * bp).epsilon(1e-12));
        CHECK(slack_surrogate_rhs(d, b, dp, bp) >= d * b * (1.0 - 1e-12));
        CHECK(slack_surrogate_rhs(d, b, dp, dp) == Approx((d + b) * (d + b) / 4.0).epsilon(1e-12));

        const double nu = u(rng);
        const double dmax = max_delta_under_surrogate(nu, b, dp, bp);
        if (dmax >= 0.0)
            CHECK(slack_surrogate_rhs(dmax, b, dp, bp) == Approx(nu).epsilon(1e-9));
    }
}

TEST_CASE("slack surrogate cone matches the scalar form", "[sca_constraints]")
{
    const RotatedCone rc = slack_surrogate(LinearForm::variable(0), LinearForm::variable(1), 1.5, 0.5,
                                           LinearForm::variable(2));
    const SecondOrderCone soc = rc.as_second_order_cone();
    auto inside = [&](const arma::vec &x) {
        double n2 = 0.0;
        for (const auto &f : soc.x)
            n2 += std::pow(f.evaluate(x), 2);
        return std::sqrt(n2) <= soc.t.evaluate(x) + 1e-12;
    };
    std::mt19937_64 rng(39);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int i = 0; i < 300; ++i)
    {
        const double d = u(rng), b = u(rng), nu = u(rng);
        const double rhs = slack_surrogate_rhs(d, b, 1.5, 0.5);
        if (std::abs(nu - rhs) > 1e-6)
            CHECK(inside(arma::vec{d, b, nu}) == (nu >= rhs));
    }
}

TEST_CASE("hull weight update", "[sca_constraints]")
{
    const arma::cx_mat R = arma::eye<arma::cx_mat>(2, 2);
    auto diag = [](double a) {
        arma::cx_mat A(2, 2, arma::fill::zeros);
        A(0, 0) = a;
        return A;
    };
    const arma::vec same = mu_update(R, {diag(1), diag(1), diag(1)});
    CHECK(arma::approx_equal(same, arma::vec(3, arma::fill::value(1.0 / 3.0)), "absdiff", 1e-15));
    CHECK(mu_update(R, {diag(2)})(0) == Approx(1.0));
    const arma::vec two = mu_update(R, {diag(1), diag(2)});
    CHECK(two(0) == Approx(0.8));
    CHECK(two(1) == Approx(0.2));
    const arma::vec vtx = mu_update(R, {diag(3), diag(2), diag(4)}, MuRule::Vertex);
    CHECK(vtx(1) == 1.0);
    CHECK(arma::accu(vtx) == 1.0);
    CHECK_THROWS(mu_update(R, {}));
}

TEST_CASE("sensing linearization", "[sca_constraints]")
{
    std::mt19937_64 rng(40);
    std::vector<arma::cx_mat> B;
    for (int m = 0; m < 2; ++m)
    {
        const arma::cx_mat G = testing::random_cx(4, 2, rng);
        B.push_back(G * G.t());
    }
    const arma::cx_mat Wp = testing::random_cx(4, 3, rng);
    CHECK(sensing_objective_linearization(Wp, Wp, B) == Approx(sensing_objective_value(Wp, B)).epsilon(1e-12));
    for (int i = 0; i < 100; ++i)
    {
        const arma::cx_mat W = testing::random_cx(4, 3, rng);
        CHECK(sensing_objective_linearization(W, Wp, B) <= sensing_objective_value(W, B) + 1e-10);
    }
    const std::vector<arma::cx_mat> zero{arma::cx_mat(4, 4, arma::fill::zeros)};
    CHECK(sensing_objective_linearization(testing::random_cx(4, 3, rng), Wp, zero) == 0.0);

    const VariableLayout lay(4, 2, 3);
    const arma::vec x = arma::randn<arma::vec>(lay.size());
    CHECK(sensing_objective_linearization(lay.columns(), Wp, B).evaluate(x) ==
          Approx(sensing_objective_linearization(lay.beamformer(x), Wp, B)).epsilon(1e-11));
}

TEST_CASE("variable layout round trip", "[sca_constraints]")
{
    const VariableLayout lay(3, 2, 3);
    CHECK(lay.size() == 2 * 3 * 3 + 12);
    SolverIterate it;
    std::mt19937_64 rng(41);
    it.W = testing::random_cx(3, 3, rng);
    it.delta = {0.5, 1.5};
    it.beta = {1.0, 2.0};
    it.nu = {0.1, 0.2};
    it.phi = {0.0, 0.3};
    it.xi = {0.4, 0.0};
    const arma::vec x = lay.pack(it);
    CHECK(arma::approx_equal(lay.beamformer(x), it.W, "absdiff", 0.0));
    CHECK(x(lay.delta(1)) == 1.5);
    CHECK(x(lay.rate(0)) == Approx(std::log1p(0.5)));
}

TEST_CASE("assembled step admits its anchor", "[sca_constraints]")
{
    const Scenario sc = make_scenario(SystemConfig{}, 3);
    const RunConfig rc = sc.config.run_config();
    const NormalizedProblem np = normalize(sc.instance, rc);
    const SolverIterate a = initialize(sc.instance, np, rc);
    const std::vector<arma::cx_mat> B = hull_matrices(np, a.mu);
    const SubproblemSpec spec = assemble_subproblem(np, a, B, rc.rho);

    CHECK(spec.problem.num_variables == spec.layout.size());
    CHECK(spec.signal_blocks.size() == np.num_users);
    const arma::vec x = spec.pack(a);
    CHECK(max_violation(spec.problem, x) < 1e-8);
    CHECK(spec.problem.objective.evaluate(x) == Approx(design_objective(np, a, B, rc.rho)).epsilon(1e-9));
    for (const auto &blk : lmi_blocks(np, a))
        CHECK(eigmin(blk) >= -1e-9);
    for (arma::uword k = 0; k < np.num_users; ++k)
        CHECK(arma::norm(np.h_hat[k]) == Approx(1.0).epsilon(1e-12));
}
