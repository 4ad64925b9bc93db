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

#ifndef dualrobust_oracles_H
#define dualrobust_oracles_H

// Reference evaluations written independently of the library: plain summation, sampling and local
// search. Only Armadillo is used, so a bug in the library cannot leak into its own check.

#include <armadillo>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace dualrobust::oracle
{
    using cx = std::complex<double>;

    // exp(-j pi n sin(theta)), n = 0..N-1
    arma::cx_vec steering(double theta, arma::uword num_antennas);

    // sum_j |a^H(theta) w_j|^2
    double beampattern_by_columns(const arma::cx_mat &W, double theta);

    // |h^H w_k|^2 / (sum_{j != k} |h^H w_j|^2 + sigma2), one column at a time
    double sinr_by_terms(const arma::cx_mat &W, const arma::cx_vec &h, arma::uword k, double sigma2);

    // log2(1 + P0 ||h||^2 / sigma2)
    double matched_filter_rate(const arma::cx_vec &h, double power, double sigma2);

    // Uniform on the sphere of radius r in C^n (normalised Gaussian), or uniform in the ball.
    arma::cx_vec draw_on_sphere(arma::uword n, double r, std::mt19937_64 &rng);
    arma::cx_vec draw_in_ball(arma::uword n, double r, std::mt19937_64 &rng);

    // q(d) = d^H P d + 2 Re(g^H d) + r
    struct Quadratic
    {
        arma::cx_mat P;
        arma::cx_vec g;
        double r = 0.0;

        double value(const arma::cx_vec &d) const;
        arma::cx_vec gradient(const arma::cx_vec &d) const; // 2 (P d + g)
    };

    // |(h + d)^H w|^2
    Quadratic signal_quadratic(const arma::cx_vec &h, const arma::cx_vec &w);
    // ||W_bar^H (h + d)||^2 + sigma2
    Quadratic interference_quadratic(const arma::cx_vec &h, const arma::cx_mat &W_bar, double sigma2);

    struct Extreme
    {
        double sampled = 0.0;   // best over the random draws only
        double polished = 0.0;  // after local search from the best draws
        arma::cx_vec argument;  // point attaining `polished`
    };

    // Scalar function of d with its real gradient (steepest-ascent direction in C^n = R^2n).
    struct Objective
    {
        std::function<double(const arma::cx_vec &)> value;
        std::function<arma::cx_vec(const arma::cx_vec &)> gradient;
    };

    Objective as_objective(const Quadratic &q);

    // Extremum over the ball ||d|| <= eps from num_samples draws (90% on the sphere, 10% inside)
    // followed by projected gradient steps with Armijo backtracking from the `starts` best draws.
    Extreme minimize_on_ball(const Objective &f, arma::uword n, double eps, arma::uword num_samples,
                             std::mt19937_64 &rng, int starts = 10);
    Extreme maximize_on_ball(const Objective &f, arma::uword n, double eps, arma::uword num_samples,
                             std::mt19937_64 &rng, int starts = 10);

    // SINR of column k through (h + d), as a function of d.
    Objective sinr_objective(const arma::cx_mat &W, const arma::cx_vec &h, arma::uword k, double sigma2);

    // Minimum of sum_j |a^H(theta) w_j|^2 over theta = lo, lo + step, ..., hi (hi always included).
    double grid_min_beampattern(const arma::cx_mat &W, double lo, double hi, double step);

    // Upper bound on |dP/dtheta| times step / 2: the most a grid minimum can overstate the true one.
    double grid_slack(const arma::cx_mat &W, double step);

    // Spearman rank correlation with average ranks for ties.
    double spearman(const std::vector<double> &x, const std::vector<double> &y);

} // namespace dualrobust::oracle

#endif
