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
#include "dualrobust/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dualrobust
{
    namespace
    {
        arma::cx_mat random_matrix(arma::uword r, arma::uword c, std::mt19937_64 &rng, double scale = 1.0)
        {
            std::normal_distribution<double> z(0.0, scale / std::sqrt(2.0));
            arma::cx_mat M(r, c);
            for (auto &v : M)
                v = cx(z(rng), z(rng));
            return M;
        }

        double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

        std::string describe(const char *fmt, double a, double b = 0.0)
        {
            char buf[160];
            std::snprintf(buf, sizeof buf, fmt, a, b);
            return buf;
        }

        OracleCheck finish(std::string name, double worst, double tol, bool extra_ok, std::string detail = {})
        {
            OracleCheck c;
            c.name = std::move(name);
            c.worst = worst;
            c.tolerance = tol;
            c.passed = extra_ok && worst <= tol;
            c.detail = std::move(detail);
            return c;
        }

        OracleCheck check_beampattern(const OracleCheckOptions &o, std::mt19937_64 &rng)
        {
            std::uniform_real_distribution<double> angle(-pi / 2, pi / 2);
            const ArrayGeometry g(8);
            double worst = 0.0;
            for (int i = 0; i < o.instances; ++i)
            {
                const arma::cx_mat W = random_matrix(8, 5, rng);
                const double t = angle(rng);
                const double ref = oracle::beampattern_by_columns(W, t);
                worst = std::max(worst, rel(beampattern_gain(Beamformer(W, 3), t), ref));
                const arma::cx_vec a = oracle::steering(t, 8);
                const double trace_form = std::real(arma::trace(a * a.t() * W * W.t()));
                worst = std::max(worst, rel(trace_form, ref));
                worst = std::max(worst, arma::norm(steering_vector(t, g) - a, "inf"));
            }
            return finish("beampattern_gain vs column summation and trace form", worst, 1e-10, true);
        }

        OracleCheck check_sinr(const OracleCheckOptions &o, std::mt19937_64 &rng)
        {
            std::uniform_int_distribution<int> user(0, 2);
            double worst = 0.0;
            for (int i = 0; i < o.instances; ++i)
            {
                const arma::cx_mat W = random_matrix(8, 5, rng);
                const arma::cx_vec h = random_matrix(8, 1, rng, 0.1);
                const arma::uword k = arma::uword(user(rng));
                worst = std::max(worst, rel(user_sinr(Beamformer(W, 3), h, k, 0.01),
                                            oracle::sinr_by_terms(W, h, k, 0.01)));
            }
            return finish("user_sinr vs term-by-term evaluation", worst, 1e-10, true);
        }

        OracleCheck check_signal(const OracleCheckOptions &o, std::mt19937_64 &rng)
        {
            std::uniform_real_distribution<double> frac(0.05, 0.6);
            double worst = 0.0;
            bool bounds = true;
            for (int i = 0; i < o.instances; ++i)
            {
                const arma::cx_vec w = random_matrix(8, 1, rng);
                const arma::cx_vec h = random_matrix(8, 1, rng);
                // keep the minimum away from 0 so the relative comparison is meaningful
                const double eps = frac(rng) * std::abs(arma::cdot(h, w)) / arma::norm(w, 2);
                const double closed = worst_signal_power(h, w, eps);
                const oracle::Extreme e =
                    oracle::minimize_on_ball(oracle::as_objective(oracle::signal_quadratic(h, w)), 8, eps, o.samples, rng);
                bounds = bounds && closed <= e.sampled * (1.0 + 1e-12) && closed <= e.polished * (1.0 + 1e-12);
                worst = std::max(worst, rel(closed, e.polished));
            }
            return finish("worst_signal_power vs sampling + local descent", worst, 5e-3, bounds,
                          bounds ? "closed form below every sample" : "a sample fell below the closed form");
        }

        OracleCheck check_interference(const OracleCheckOptions &o, std::mt19937_64 &rng)
        {
            std::uniform_real_distribution<double> frac(0.05, 1.0);
            double worst = 0.0;
            bool bounds = true;
            for (int i = 0; i < o.instances; ++i)
            {
                const arma::cx_mat W_bar = random_matrix(8, 4, rng);
                const arma::cx_vec h = random_matrix(8, 1, rng);
                const double eps = frac(rng) * arma::norm(h, 2);
                const double sigma2 = 0.1;
                const double closed = worst_interference(h, W_bar, eps, sigma2);
                const oracle::Extreme e = oracle::maximize_on_ball(
                    oracle::as_objective(oracle::interference_quadratic(h, W_bar, sigma2)), 8, eps, o.samples, rng);
                bounds = bounds && closed >= e.sampled * (1.0 - 1e-12) && closed >= e.polished * (1.0 - 1e-12);
                worst = std::max(worst, rel(closed, e.polished));
            }
            return finish("worst_interference vs sampling + local ascent", worst, 5e-3, bounds,
                          bounds ? "secular value above every sample" : "a sample exceeded the secular value");
        }

        OracleCheck check_worst_sinr(const OracleCheckOptions &o, std::mt19937_64 &rng)
        {
            std::uniform_real_distribution<double> frac(0.05, 0.6);
            const int n = std::max(1, o.instances / 5);
            double worst = 0.0;
            bool ordering = true;
            for (int i = 0; i < n; ++i)
            {
                const arma::cx_mat W = random_matrix(8, 5, rng);
                std::vector<arma::cx_vec> hs;
                ChannelSet ch;
                for (arma::uword k = 0; k < 3; ++k)
                {
                    hs.push_back(random_matrix(8, 1, rng));
                    // radius short of the nulling distance, so the worst SINR stays positive
                    ch.radii.push_back(frac(rng) * std::abs(arma::cdot(hs[k], W.col(k))) / arma::norm(W.col(k), 2));
                }
                ch.estimates = hs;
                ch.noise_powers = {0.05, 0.05, 0.05};
                const Beamformer bf(W, 3);
                for (arma::uword k = 0; k < 3; ++k)
                {
                    const SinrBounds b = worst_case_sinr(k, bf, ch, o.samples / 10, rng);
                    const oracle::Extreme e = oracle::minimize_on_ball(
                        oracle::sinr_objective(W, hs[k], k, 0.05), 8, ch.radii[k], o.samples / 10, rng);
                    ordering = ordering && b.certified_lower <= b.sampled * (1.0 + 1e-9) &&
                               b.certified_lower <= e.polished * (1.0 + 1e-9);
                    worst = std::max(worst, rel(b.sampled, e.polished));
                }
            }
            return finish("worst_case_sinr sampled vs independent sampling + descent", worst, 1e-2, ordering,
                          ordering ? "certified bound below both" : "certified bound above a sampled SINR");
        }

        OracleCheck check_grid(const OracleCheckOptions &o, std::mt19937_64 &rng)
        {
            std::uniform_real_distribution<double> centre(deg_to_rad(-80.0), deg_to_rad(80.0));
            std::uniform_real_distribution<double> width(0.0, deg_to_rad(15.0));
            double worst = 0.0;
            const int n = std::max(1, o.instances / 5);
            for (int i = 0; i < n; ++i)
            {
                const arma::cx_mat W = random_matrix(8, 5, rng);
                const AngleInterval iv = AngleInterval::centered(centre(rng), width(rng));
                const double ours = worst_beampattern(W * W.t(), iv).value;
                const double fine = oracle::grid_min_beampattern(W, iv.min, iv.max, deg_to_rad(0.005));
                worst = std::max(worst, rel(ours, fine));
            }
            return finish("worst_beampattern 0.05 deg grid vs 0.005 deg grid", worst, 5e-3, true);
        }

        OracleCheck check_surrogate(const OracleCheckOptions &o, std::mt19937_64 &rng)
        {
            double worst_tight = 0.0;
            bool minorant = true;
            for (int i = 0; i < o.instances; ++i)
            {
                const arma::cx_vec w = random_matrix(8, 1, rng), wp = random_matrix(8, 1, rng);
                const arma::cx_vec h = random_matrix(8, 1, rng);
                const double eps = 0.5 * arma::norm(h, 2);
                const SignalTerms at_w = sca_signal_terms(w, wp, h);
                const SignalTerms tight = sca_signal_terms(wp, wp, h);
                for (int s = 0; s < 20; ++s)
                {
                    const arma::cx_vec d = oracle::draw_in_ball(8, eps, rng);
                    const double truth_w = oracle::signal_quadratic(h, w).value(d);
                    const double truth_wp = oracle::signal_quadratic(h, wp).value(d);
                    const double scale = 1.0 + truth_w + truth_wp;
                    minorant = minorant && signal_surrogate_value(at_w, d) <= truth_w + 1e-10 * scale;
                    worst_tight = std::max(worst_tight, std::abs(signal_surrogate_value(tight, d) - truth_wp) / scale);
                }
            }
            return finish("signal SCA surrogate: minorant everywhere, tight at the anchor", worst_tight, 1e-10, minorant,
                          minorant ? "no sample above the true power" : "surrogate exceeded the true power");
        }

        OracleCheck check_matched_filter(std::mt19937_64 &rng)
        {
            ProblemInstance inst;
            inst.geometry = ArrayGeometry(8);
            std::uniform_real_distribution<double> dist(20.0, 70.0);
            const double theta = deg_to_rad(30.0);
            const arma::cx_vec h = synth_channel(dist(rng), theta, PathLossModel{}, inst.geometry);
            const double sigma2 = dbm_to_watts(-80.0);
            inst.channels = ChannelSet::from_error_coefficient({h}, 0.0, {sigma2});
            inst.user_angles = {theta};
            RunConfig rc;
            rc.rho = 1.0;
            rc.power_budget = 1.0;
            const DesignResult r = outer_loop(inst, rc);
            const double achieved = rate_bits(user_sinr(r.beamformer, h, 0, sigma2));
            const double ref = oracle::matched_filter_rate(h, rc.power_budget, sigma2);
            return finish("single-user design vs matched-filter capacity", rel(achieved, ref), 1e-2, true,
                          describe("achieved %.6f bits, closed form %.6f bits", achieved, ref));
        }
    } // namespace

    std::vector<OracleCheck> run_oracle_checks(const OracleCheckOptions &options)
    {
        std::mt19937_64 rng(options.seed);
        std::vector<OracleCheck> out;
        out.push_back(check_beampattern(options, rng));
        out.push_back(check_sinr(options, rng));
        out.push_back(check_signal(options, rng));
        out.push_back(check_interference(options, rng));
        out.push_back(check_worst_sinr(options, rng));
        out.push_back(check_grid(options, rng));
        out.push_back(check_surrogate(options, rng));
        if (options.include_solve)
            out.push_back(check_matched_filter(rng));
        return out;
    }

} // namespace dualrobust
