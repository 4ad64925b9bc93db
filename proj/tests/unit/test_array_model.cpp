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

#include "dualrobust/array_model.hpp"
#include "dualrobust/oracles.hpp"
#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace dualrobust;
using Catch::Approx;

TEST_CASE("steering vector entries", "[array_model]")
{
    const ArrayGeometry g4(4), g2(2);

    const arma::cx_vec a0 = steering_vector(0.0, g4);
    for (arma::uword n = 0; n < 4; ++n)
        CHECK(std::abs(a0(n) - cx(1.0, 0.0)) < 1e-15);

    const arma::cx_vec a90 = steering_vector(pi / 2, g2);
    CHECK(std::abs(a90(0) - cx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(a90(1) - cx(-1.0, 0.0)) < 1e-15);

    const arma::cx_vec a30 = steering_vector(pi / 6, g4);
    const cx expect[] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    for (arma::uword n = 0; n < 4; ++n)
        CHECK(std::abs(a30(n) - expect[n]) < 1e-12);
}

TEST_CASE("steering vector has unit-modulus entries", "[array_model]")
{
    const ArrayGeometry g(8);
    for (double t : {-1.2, 0.3, 2.0})
        for (const cx &e : steering_vector(t, g))
            CHECK(std::abs(e) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("beampattern gain", "[array_model]")
{
    const ArrayGeometry g(6);
    const arma::cx_mat I = arma::eye<arma::cx_mat>(6, 6);
    for (double t : {0.0, 0.7, -1.1})
        CHECK(beampattern_gain(I, t) == Approx(6.0).epsilon(1e-13));

    const double P = 2.5, t0 = 0.4;
    const Beamformer single(arma::cx_mat(steering_vector(t0, g) * std::sqrt(P / 6.0)), 1);
    CHECK(beampattern_gain(single, t0) == Approx(6.0 * P).epsilon(1e-12));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i)
    {
        const arma::cx_mat W = testing::random_cx(6, 4, rng);
        const double theta = std::uniform_real_distribution<double>(-pi / 2, pi / 2)(rng);
        const double lib = beampattern_gain(Beamformer(W, 2), theta);
        CHECK(testing::rel_diff(lib, oracle::beampattern_by_columns(W, theta)) < 1e-10);
    }
}

TEST_CASE("synthesized channel gain matches the path loss", "[array_model]")
{
    const ArrayGeometry g(8);
    const PathLossModel pl;
    for (double d : {20.0, 45.5, 70.0})
    {
        const arma::cx_vec h = synth_channel(d, deg_to_rad(50.0), pl, g);
        const double gain = std::pow(arma::norm(h), 2) / 8.0;
        CHECK(gain == Approx(pl.linear_gain(d)).epsilon(1e-12));
        CHECK(pl.loss_db(d) == Approx(30.0 + 30.0 * std::log10(d)).epsilon(1e-14));
    }
}

TEST_CASE("user SINR", "[array_model]")
{
    std::mt19937_64 rng(5);
    const arma::cx_vec h = testing::random_cx(4, rng);

    arma::cx_mat W(4, 3, arma::fill::zeros);
    W.col(1) = testing::random_cx(4, rng);
    const double sigma2 = 0.3;
    CHECK(user_sinr(Beamformer(W, 3), h, 1, sigma2) ==
          Approx(std::norm(arma::cdot(h, W.col(1))) / sigma2).epsilon(1e-13));

    // w_k orthogonal to h
    arma::cx_vec w = testing::random_cx(4, rng);
    w -= h * (arma::cdot(h, w) / arma::cdot(h, h));
    W.col(0) = w;
    CHECK(user_sinr(Beamformer(W, 3), h, 0, sigma2) < 1e-24);

    for (int i = 0; i < 50; ++i)
    {
        const arma::cx_mat R = testing::random_cx(4, 5, rng);
        const arma::cx_vec c = testing::random_cx(4, rng);
        for (arma::uword k = 0; k < 3; ++k)
            CHECK(testing::rel_diff(user_sinr(Beamformer(R, 3), c, k, 0.7), oracle::sinr_by_terms(R, c, k, 0.7)) <
                  1e-10);
    }
}

TEST_CASE("beamformer helpers", "[array_model]")
{
    std::mt19937_64 rng(9);
    const Beamformer bf(testing::random_cx(4, 3, rng), 2);
    CHECK(bf.num_sensing_streams() == 1);
    CHECK(bf.power() == Approx(std::pow(arma::norm(bf.matrix(), "fro"), 2)));
    CHECK(arma::approx_equal(bf.covariance(), bf.matrix() * bf.matrix().t(), "absdiff", 1e-12));
    CHECK(bf.interferers(1).n_cols == 2);
    CHECK(bf.scaled_to_power(3.0).power() == Approx(3.0).epsilon(1e-13));
    CHECK_THROWS(Beamformer(arma::cx_mat(4, 2, arma::fill::zeros), 1).scaled_to_power(1.0));
}

TEST_CASE("error radius follows the estimate norm", "[array_model]")
{
    std::mt19937_64 rng(3);
    std::vector<arma::cx_vec> hs{testing::random_cx(4, rng), testing::random_cx(4, rng)};
    const ChannelSet cs = ChannelSet::from_error_coefficient(hs, 0.3, {1e-3, 2e-3});
    for (arma::uword k = 0; k < 2; ++k)
        CHECK(cs.radii[k] == Approx(0.3 * arma::norm(hs[k])));
    CHECK_NOTHROW(cs.validate(ArrayGeometry(4)));
    CHECK_THROWS(cs.validate(ArrayGeometry(5)));
}

TEST_CASE("power conversion", "[array_model]")
{
    CHECK(dbm_to_watts(30.0) == Approx(1.0));
    CHECK(dbm_to_watts(-80.0) == Approx(1e-11));
    CHECK(watts_to_dbm(dbm_to_watts(17.3)) == Approx(17.3));
}
