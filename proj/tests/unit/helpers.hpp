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

#ifndef dualrobust_test_helpers_H
#define dualrobust_test_helpers_H

#include "dualrobust/array_model.hpp"

#include <armadillo>
#include <random>

namespace testing
{
    inline arma::cx_vec random_cx(arma::uword n, std::mt19937_64 &rng, double scale = 1.0)
    {
        std::normal_distribution<double> g(0.0, scale);
        arma::cx_vec v(n);
        for (auto &x : v)
            x = {g(rng), g(rng)};
        return v;
    }

    inline arma::cx_mat random_cx(arma::uword r, arma::uword c, std::mt19937_64 &rng, double scale = 1.0)
    {
        std::normal_distribution<double> g(0.0, scale);
        arma::cx_mat m(r, c);
        for (auto &x : m)
            x = {g(rng), g(rng)};
        return m;
    }

    inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
} // namespace testing

#endif
