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

#ifndef dualrobust_uncertainty_H
#define dualrobust_uncertainty_H

#include "dualrobust/array_model.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace dualrobust
{
    // Raised when an iterative evaluation (secular equation bisection) fails to converge.
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Target angle interval [min, max] in radians.
    struct AngleInterval
    {
        double min = 0.0;
        double max = 0.0;

        double midpoint() const { return 0.5 * (min + max); }
        double width() const { return max - min; }

        // center +/- width / 2; throws on negative width
        static AngleInterval centered(double center, double width);
        void validate() const;
    };

    // Convex-hull discretisation of the steering outer products over one target interval.
    struct AngleUncertainty
    {
        AngleInterval interval;
        std::vector<double> sample_angles;   // theta_s
        std::vector<arma::cx_mat> samples;   // A_s = a(theta_s) a^H(theta_s)
        arma::vec weights;                   // mu_s, on the simplex

        // Uniform weights 1/S.
        static AngleUncertainty build(const AngleInterval &interval, arma::uword num_samples,
                                      const ArrayGeometry &geometry);

        // B = sum_s mu_s A_s
        arma::cx_mat weighted_sample() const;
    };

    // Per-user and per-target worst-case figures of a fixed beamformer.
    struct WorstCaseReport
    {
        std::vector<double> certified_sinr_lower_bound; // decoupled signal / interference bound
        std::vector<double> sampled_worst_sinr;         // min over sampled CSI errors (+ local descent)
        std::vector<double> worst_beampattern;          // min over the dense angle grid, watts
        std::vector<double> worst_beampattern_angle;    // argmin, radians
        double worst_sum_rate = 0.0;                    // sum_k log2(1 + sampled_worst_sinr_k)
        double certified_sum_rate = 0.0;                // sum_k log2(1 + certified_k)
        double worst_sum_beampattern = 0.0;             // sum_m worst_beampattern_m

        // certified <= sampled (+1e-9 relative) for every user and every field >= 0
        bool ordering_holds() const;
    };

    // min over ||d|| <= eps of |(h_hat + d)^H w|^2 = (max(|h_hat^H w| - eps ||w||, 0))^2
    double worst_signal_power(const arma::cx_vec &h_hat, const arma::cx_vec &w, double eps);

    struct InterferenceMaximizer
    {
        double value = 0.0;          // ||W_bar^H (h_hat + d*)||^2 + sigma2
        arma::cx_vec perturbation;   // d*, ||d*|| = eps
        double multiplier = 0.0;     // secular-equation root lambda (0 when eps == 0)
        int iterations = 0;
    };

    // Exact maximiser of ||W_bar^H (h_hat + d)||^2 + sigma2 over the ball ||d|| <= eps.
    // Solves (lambda I - Q) d = Q h_hat with Q = W_bar W_bar^H, lambda > lambda_max(Q), ||d(lambda)|| = eps
    // by bisection; the degenerate case (no component of Q h_hat on the top eigenspace) uses the top
    // eigenvector. Throws NumericalError when bisection does not reach |‖d‖ - eps| <= 1e-10 eps in 200 steps.
    InterferenceMaximizer maximize_interference(const arma::cx_vec &h_hat, const arma::cx_mat &W_bar, double eps,
                                                double sigma2);

    inline double worst_interference(const arma::cx_vec &h_hat, const arma::cx_mat &W_bar, double eps, double sigma2)
    {
        return maximize_interference(h_hat, W_bar, eps, sigma2).value;
    }

    // Draws CSI errors from the ball of radius eps: a fraction interior_fraction uniformly in the
    // (2N)-dimensional real ball, the rest uniformly on its boundary sphere.
    class BallSampler
    {
    public:
        BallSampler(arma::uword dimension, double radius, double interior_fraction = 0.1);

        arma::cx_vec draw(std::mt19937_64 &rng) const;

    private:
        arma::uword dim_;
        double radius_;
        double interior_fraction_;
    };

    struct SinrBounds
    {
        double certified_lower = 0.0;
        double sampled = 0.0;
    };

    // Worst-case SINR of user k two ways: the decoupled closed-form bound
    // worst_signal_power / worst_interference, and the minimum over num_samples sampled errors refined by
    // projected gradient descent from the 10 worst draws.
    SinrBounds worst_case_sinr(arma::uword k, const Beamformer &bf, const ChannelSet &channels,
                               arma::uword num_samples, std::mt19937_64 &rng);

    // Uniform grid over [min, max] including both endpoints; S == 1 gives the midpoint.
    std::vector<double> hull_angles(const AngleInterval &interval, arma::uword num_samples);
    std::vector<arma::cx_mat> hull_samples(const AngleInterval &interval, arma::uword num_samples,
                                           const ArrayGeometry &geometry);

    struct BeampatternMinimum
    {
        double value = 0.0;
        double argmin_angle = 0.0;
    };

    inline const double default_grid_step = 0.05 * pi / 180.0;

    // Minimum of P(theta) over a grid of the interval with spacing grid_step (endpoints included).
    BeampatternMinimum worst_beampattern(const arma::cx_mat &covariance, const AngleInterval &interval,
                                         double grid_step = default_grid_step);
    BeampatternMinimum worst_beampattern(const Beamformer &bf, const AngleInterval &interval,
                                         double grid_step = default_grid_step);

    struct ReportOptions
    {
        arma::uword num_samples = 10000;
        double grid_step = default_grid_step;
        std::uint64_t seed = 1;
    };

    // Per-user sampling streams are seeded from (seed, k) so results do not depend on evaluation order.
    WorstCaseReport evaluate_worst_case(const Beamformer &bf, const ChannelSet &channels,
                                        const std::vector<AngleInterval> &targets, const ReportOptions &options = {});

} // namespace dualrobust

#endif
