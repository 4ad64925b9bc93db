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

#include "dualrobust/uncertainty.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace dualrobust
{
    namespace
    {
        arma::cx_vec project_to_ball(arma::cx_vec d, double radius)
        {
            const double n = arma::norm(d, 2);
            if (n > radius && n > 0.0)
                d *= radius / n;
            return d;
        }

        double sinr_at(const arma::cx_vec &h, const arma::cx_vec &w, const arma::cx_mat &Q, double sigma2)
        {
            const double signal = std::norm(arma::cdot(h, w));
            const double interference = std::real(arma::cdot(h, Q * h)) + sigma2;
            return signal / interference;
        }

        // Projected gradient descent on the SINR over the error ball, started from d0.
        arma::cx_vec descend_sinr(const arma::cx_vec &h_hat, const arma::cx_vec &w, const arma::cx_mat &Q,
                                  double sigma2, double eps, arma::cx_vec d)
        {
            double value = sinr_at(h_hat + d, w, Q, sigma2);
            double step = 0.0;
            for (int it = 0; it < 60; ++it)
            {
                const arma::cx_vec h = h_hat + d;
                const cx proj = arma::cdot(w, h); // w^H h
                const double signal = std::norm(proj);
                const double interference = std::real(arma::cdot(h, Q * h)) + sigma2;
                arma::cx_vec grad = (interference * w * proj - signal * (Q * h)) / (interference * interference);
                const double gnorm = arma::norm(grad, 2);
                if (gnorm == 0.0)
                    break;
                if (step == 0.0)
                    step = 0.25 * eps / gnorm;

                bool improved = false;
                for (int bt = 0; bt < 30; ++bt)
                {
                    arma::cx_vec trial = project_to_ball(d - step * grad, eps);
                    const double tv = sinr_at(h_hat + trial, w, Q, sigma2);
                    if (tv < value)
                    {
                        d = std::move(trial);
                        value = tv;
                        improved = true;
                        step *= 1.5;
                        break;
                    }
                    step *= 0.5;
                }
                if (!improved)
                    break;
            }
            return d;
        }
    } // namespace

    AngleInterval AngleInterval::centered(double center, double width)
    {
        if (!(width >= 0.0))
            throw std::invalid_argument("AngleInterval: width must be nonnegative");
        return {center - 0.5 * width, center + 0.5 * width};
    }

    void AngleInterval::validate() const
    {
        if (!(min <= max))
            throw std::invalid_argument("AngleInterval: min must not exceed max");
    }

    AngleUncertainty AngleUncertainty::build(const AngleInterval &interval, arma::uword num_samples,
                                             const ArrayGeometry &geometry)
    {
        AngleUncertainty out;
        out.interval = interval;
        out.sample_angles = hull_angles(interval, num_samples);
        out.samples = hull_samples(interval, num_samples, geometry);
        out.weights = arma::vec(num_samples, arma::fill::value(1.0 / double(num_samples)));
        return out;
    }

    arma::cx_mat AngleUncertainty::weighted_sample() const
    {
        if (samples.empty() || weights.n_elem != samples.size())
            throw std::invalid_argument("AngleUncertainty: weights and samples differ in size");
        arma::cx_mat B(samples.front().n_rows, samples.front().n_cols, arma::fill::zeros);
        for (std::size_t s = 0; s < samples.size(); ++s)
            B += weights(s) * samples[s];
        return B;
    }

    bool WorstCaseReport::ordering_holds() const
    {
        if (certified_sinr_lower_bound.size() != sampled_worst_sinr.size())
            return false;
        for (std::size_t k = 0; k < sampled_worst_sinr.size(); ++k)
        {
            const double c = certified_sinr_lower_bound[k], s = sampled_worst_sinr[k];
            if (c < 0.0 || s < 0.0 || c > s + 1e-9 * std::max(1.0, s))
                return false;
        }
        for (double g : worst_beampattern)
            if (g < 0.0)
                return false;
        return worst_sum_rate >= 0.0 && certified_sum_rate >= 0.0;
    }

    double worst_signal_power(const arma::cx_vec &h_hat, const arma::cx_vec &w, double eps)
    {
        if (eps < 0.0)
            throw std::invalid_argument("worst_signal_power: eps must be nonnegative");
        const double margin = std::abs(arma::cdot(h_hat, w)) - eps * arma::norm(w, 2);
        return margin > 0.0 ? margin * margin : 0.0;
    }

    InterferenceMaximizer maximize_interference(const arma::cx_vec &h_hat, const arma::cx_mat &W_bar, double eps,
                                                double sigma2)
    {
        if (eps < 0.0)
            throw std::invalid_argument("worst_interference: eps must be nonnegative");
        const arma::uword n = h_hat.n_elem;
        if (W_bar.n_cols > 0 && W_bar.n_rows != n)
            throw std::invalid_argument("worst_interference: W_bar must have one row per antenna");

        InterferenceMaximizer out;
        out.perturbation = arma::cx_vec(n, arma::fill::zeros);
        if (W_bar.n_cols == 0)
        {
            out.value = sigma2;
            return out;
        }

        arma::cx_mat Q = W_bar * W_bar.t();
        Q = 0.5 * (Q + Q.t());
        const double nominal = std::real(arma::cdot(h_hat, Q * h_hat)) + sigma2;
        if (eps == 0.0)
        {
            out.value = nominal;
            return out;
        }

        arma::vec lambda;
        arma::cx_mat U;
        arma::eig_sym(lambda, U, Q);
        const double lmax = lambda.max();
        if (lmax <= 0.0)
        {
            out.value = sigma2;
            return out;
        }

        const arma::cx_vec z = U.t() * h_hat;
        arma::cx_vec qt = z % arma::conv_to<arma::cx_vec>::from(lambda); // U^H Q h_hat

        // Top eigenspace membership; components there make ||d(lambda)|| blow up at lambda_max.
        const double tie = 1e-12 * lmax;
        double top_weight = 0.0, q_norm2 = 0.0;
        for (arma::uword i = 0; i < n; ++i)
        {
            q_norm2 += std::norm(qt(i));
            if (lambda(i) >= lmax - tie)
                top_weight += std::norm(qt(i));
        }

        auto norm2_at = [&](double mu, bool skip_top) {
            double s = 0.0;
            for (arma::uword i = 0; i < n; ++i)
            {
                if (skip_top && lambda(i) >= lmax - tie)
                    continue;
                s += std::norm(qt(i)) / ((mu - lambda(i)) * (mu - lambda(i)));
            }
            return s;
        };

        const double eps2 = eps * eps;
        arma::cx_vec d_tilde(n, arma::fill::zeros);

        const bool hard_case = top_weight <= 1e-24 * std::max(q_norm2, 1e-300) &&
                               norm2_at(lmax, true) <= eps2;
        if (hard_case)
        {
            for (arma::uword i = 0; i < n; ++i)
                if (lambda(i) < lmax - tie)
                    d_tilde(i) = qt(i) / (lmax - lambda(i));
            const double rest = std::sqrt(std::max(0.0, eps2 - arma::norm(d_tilde, 2) * arma::norm(d_tilde, 2)));
            const arma::uword top = lambda.index_max();
            d_tilde(top) += rest;
            out.multiplier = lmax;
        }
        else
        {
            double lo = lmax;
            double hi = lmax + std::sqrt(q_norm2) / eps;
            int it = 0;
            double mu = hi;
            for (; it < 200; ++it)
            {
                mu = 0.5 * (lo + hi);
                if (!(mu > lo && mu < hi))
                    break; // bracket exhausted at machine precision
                const double dn = std::sqrt(norm2_at(mu, false));
                if (std::abs(dn - eps) <= 1e-10 * eps)
                    break;
                if (dn > eps)
                    lo = mu;
                else
                    hi = mu;
            }
            out.iterations = it;
            const double dn = std::sqrt(norm2_at(mu, false));
            if (it == 200 && std::abs(dn - eps) > 1e-10 * eps)
                throw NumericalError("worst_interference: secular equation bisection did not converge");
            for (arma::uword i = 0; i < n; ++i)
                d_tilde(i) = qt(i) / (mu - lambda(i));
            // Round-off in the last bisection step leaves |‖d‖ - eps| at a few ulps; snap to the sphere.
            const double dt = arma::norm(d_tilde, 2);
            if (dt > 0.0)
                d_tilde *= eps / dt;
            out.multiplier = mu;
        }

        out.perturbation = U * d_tilde;
        const arma::cx_vec h = h_hat + out.perturbation;
        out.value = std::max(nominal, std::real(arma::cdot(h, Q * h)) + sigma2);
        return out;
    }

    BallSampler::BallSampler(arma::uword dimension, double radius, double interior_fraction)
        : dim_(dimension), radius_(radius), interior_fraction_(interior_fraction)
    {
        if (dimension == 0 || radius < 0.0 || interior_fraction < 0.0 || interior_fraction > 1.0)
            throw std::invalid_argument("BallSampler: invalid parameters");
    }

    arma::cx_vec BallSampler::draw(std::mt19937_64 &rng) const
    {
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        arma::cx_vec d(dim_);
        for (auto &v : d)
            v = cx(normal(rng), normal(rng));
        const double n = arma::norm(d, 2);
        double r = radius_;
        if (uniform(rng) < interior_fraction_)
            r *= std::pow(uniform(rng), 1.0 / double(2 * dim_));
        return n > 0.0 ? arma::cx_vec(d * (r / n)) : d;
    }

    SinrBounds worst_case_sinr(arma::uword k, const Beamformer &bf, const ChannelSet &channels,
                               arma::uword num_samples, std::mt19937_64 &rng)
    {
        if (num_samples < 1)
            throw std::invalid_argument("worst_case_sinr: at least one sample is required");
        if (k >= bf.num_users() || k >= channels.num_users())
            throw std::out_of_range("worst_case_sinr: user index out of range");

        const arma::cx_vec &h_hat = channels.estimates[k];
        const double eps = channels.radii[k];
        const double sigma2 = channels.noise_powers[k];
        const arma::cx_vec w = bf.matrix().col(k);
        const arma::cx_mat W_bar = bf.interferers(k);
        arma::cx_mat Q = W_bar.n_cols > 0 ? arma::cx_mat(W_bar * W_bar.t())
                                          : arma::cx_mat(h_hat.n_elem, h_hat.n_elem, arma::fill::zeros);

        SinrBounds out;
        out.certified_lower = worst_signal_power(h_hat, w, eps) / worst_interference(h_hat, W_bar, eps, sigma2);

        if (eps == 0.0)
        {
            out.sampled = sinr_at(h_hat, w, Q, sigma2);
            return out;
        }

        BallSampler sampler(h_hat.n_elem, eps);
        constexpr std::size_t num_refined = 10;
        std::vector<std::pair<double, arma::cx_vec>> worst; // kept sorted ascending, size <= num_refined
        worst.reserve(num_refined + 1);
        double best = std::numeric_limits<double>::infinity();
        for (arma::uword s = 0; s < num_samples; ++s)
        {
            arma::cx_vec d = sampler.draw(rng);
            const double v = sinr_at(h_hat + d, w, Q, sigma2);
            best = std::min(best, v);
            if (worst.size() < num_refined || v < worst.back().first)
            {
                auto pos = std::upper_bound(worst.begin(), worst.end(), v,
                                            [](double a, const auto &p) { return a < p.first; });
                worst.insert(pos, {v, std::move(d)});
                if (worst.size() > num_refined)
                    worst.pop_back();
            }
        }
        for (const auto &[v, d0] : worst)
        {
            const arma::cx_vec d = descend_sinr(h_hat, w, Q, sigma2, eps, d0);
            best = std::min(best, sinr_at(h_hat + d, w, Q, sigma2));
        }
        out.sampled = best;
        return out;
    }

    std::vector<double> hull_angles(const AngleInterval &interval, arma::uword num_samples)
    {
        interval.validate();
        if (num_samples < 1)
            throw std::invalid_argument("hull_samples: at least one sample is required");
        if (num_samples == 1)
            return {interval.midpoint()};
        std::vector<double> out(num_samples);
        for (arma::uword s = 0; s < num_samples; ++s)
            out[s] = interval.min + interval.width() * double(s) / double(num_samples - 1);
        out.back() = interval.max;
        return out;
    }

    std::vector<arma::cx_mat> hull_samples(const AngleInterval &interval, arma::uword num_samples,
                                           const ArrayGeometry &geometry)
    {
        std::vector<arma::cx_mat> out;
        for (double theta : hull_angles(interval, num_samples))
        {
            const arma::cx_vec a = steering_vector(theta, geometry);
            out.emplace_back(a * a.t());
        }
        return out;
    }

    BeampatternMinimum worst_beampattern(const arma::cx_mat &covariance, const AngleInterval &interval,
                                         double grid_step)
    {
        interval.validate();
        if (!(grid_step > 0.0))
            throw std::invalid_argument("worst_beampattern: grid step must be positive");
        BeampatternMinimum out{std::numeric_limits<double>::infinity(), interval.min};
        const auto steps = static_cast<std::size_t>(std::floor(interval.width() / grid_step));
        auto visit = [&](double theta) {
            const double g = beampattern_gain(covariance, theta);
            if (g < out.value)
                out = {g, theta};
        };
        for (std::size_t i = 0; i <= steps; ++i)
            visit(interval.min + grid_step * double(i));
        visit(interval.max);
        return out;
    }

    BeampatternMinimum worst_beampattern(const Beamformer &bf, const AngleInterval &interval, double grid_step)
    {
        return worst_beampattern(bf.covariance(), interval, grid_step);
    }

    WorstCaseReport evaluate_worst_case(const Beamformer &bf, const ChannelSet &channels,
                                        const std::vector<AngleInterval> &targets, const ReportOptions &options)
    {
        WorstCaseReport report;
        for (arma::uword k = 0; k < channels.num_users(); ++k)
        {
            std::seed_seq seq{std::uint32_t(options.seed & 0xffffffffu), std::uint32_t(options.seed >> 32),
                              std::uint32_t(k), std::uint32_t(0x5eed)};
            std::mt19937_64 rng(seq);
            const SinrBounds b = worst_case_sinr(k, bf, channels, options.num_samples, rng);
            report.certified_sinr_lower_bound.push_back(b.certified_lower);
            report.sampled_worst_sinr.push_back(b.sampled);
            report.worst_sum_rate += rate_bits(b.sampled);
            report.certified_sum_rate += rate_bits(b.certified_lower);
        }
        const arma::cx_mat R = bf.covariance();
        for (const auto &interval : targets)
        {
            const BeampatternMinimum m = worst_beampattern(R, interval, options.grid_step);
            report.worst_beampattern.push_back(m.value);
            report.worst_beampattern_angle.push_back(m.argmin_angle);
            report.worst_sum_beampattern += m.value;
        }
        return report;
    }

} // namespace dualrobust
