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

#include "dualrobust/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dualrobust::oracle
{
    namespace
    {
        const double pi_value = std::acos(-1.0);

        arma::cx_vec project(const arma::cx_vec &d, double eps)
        {
            const double n = arma::norm(d, 2);
            return n > eps ? arma::cx_vec(d * (eps / n)) : d;
        }

        // Projected gradient ascent of sense * f with Armijo backtracking.
        arma::cx_vec climb(const Objective &f, double sense, double eps, arma::cx_vec d)
        {
            double fd = sense * f.value(d);
            double step = 1.0;
            bool scaled = false;
            for (int it = 0; it < 500; ++it)
            {
                const arma::cx_vec g = sense * f.gradient(d);
                const double gn = arma::norm(g, 2);
                if (gn == 0.0)
                    break;
                if (!scaled)
                {
                    step = eps / gn;
                    scaled = true;
                }
                bool moved = false;
                for (int bt = 0; bt < 40; ++bt)
                {
                    const arma::cx_vec cand = project(d + step * g, eps);
                    const double fc = sense * f.value(cand);
                    const double gain = arma::norm(cand - d, 2);
                    if (fc > fd + 1e-4 * gain * gain / step)
                    {
                        const double rel = std::abs(fc - fd) / std::max(std::abs(fd), 1e-300);
                        d = cand;
                        fd = fc;
                        moved = true;
                        step *= 2.0;
                        if (rel < 1e-14)
                            return d;
                        break;
                    }
                    step *= 0.5;
                }
                if (!moved)
                    break;
            }
            return d;
        }

        Extreme search(const Objective &f, double sense, arma::uword n, double eps, arma::uword num_samples,
                       std::mt19937_64 &rng, int starts)
        {
            if (num_samples < 1)
                throw std::invalid_argument("oracle: at least one sample is required");
            std::uniform_real_distribution<double> u(0.0, 1.0);
            std::vector<std::pair<double, arma::cx_vec>> best; // sense * value, point
            const std::size_t keep = std::size_t(std::max(starts, 1));
            double first = -std::numeric_limits<double>::infinity();
            for (arma::uword i = 0; i < num_samples; ++i)
            {
                const arma::cx_vec d = u(rng) < 0.1 ? draw_in_ball(n, eps, rng) : draw_on_sphere(n, eps, rng);
                const double v = sense * f.value(d);
                first = std::max(first, v);
                if (best.size() < keep || v > best.back().first)
                {
                    best.emplace_back(v, d);
                    std::sort(best.begin(), best.end(), [](const auto &a, const auto &b) { return a.first > b.first; });
                    if (best.size() > keep)
                        best.pop_back();
                }
            }
            Extreme out;
            out.sampled = sense * first;
            double top = first;
            out.argument = best.front().second;
            if (eps > 0.0)
                for (const auto &[v, d] : best)
                {
                    const arma::cx_vec p = climb(f, sense, eps, d);
                    const double pv = sense * f.value(p);
                    if (pv > top)
                    {
                        top = pv;
                        out.argument = p;
                    }
                }
            out.polished = sense * top;
            return out;
        }
    } // namespace

    arma::cx_vec steering(double theta, arma::uword num_antennas)
    {
        arma::cx_vec a(num_antennas);
        const double s = std::sin(theta);
        for (arma::uword n = 0; n < num_antennas; ++n)
        {
            const double phase = -pi_value * double(n) * s;
            a(n) = cx(std::cos(phase), std::sin(phase));
        }
        return a;
    }

    double beampattern_by_columns(const arma::cx_mat &W, double theta)
    {
        const arma::cx_vec a = steering(theta, W.n_rows);
        double total = 0.0;
        for (arma::uword j = 0; j < W.n_cols; ++j)
        {
            cx ip = 0.0;
            for (arma::uword n = 0; n < W.n_rows; ++n)
                ip += std::conj(a(n)) * W(n, j);
            total += std::norm(ip);
        }
        return total;
    }

    double sinr_by_terms(const arma::cx_mat &W, const arma::cx_vec &h, arma::uword k, double sigma2)
    {
        double signal = 0.0, interference = sigma2;
        for (arma::uword j = 0; j < W.n_cols; ++j)
        {
            cx ip = 0.0;
            for (arma::uword n = 0; n < W.n_rows; ++n)
                ip += std::conj(h(n)) * W(n, j);
            (j == k ? signal : interference) += std::norm(ip);
        }
        return signal / interference;
    }

    double matched_filter_rate(const arma::cx_vec &h, double power, double sigma2)
    {
        double g = 0.0;
        for (const cx &v : h)
            g += std::norm(v);
        return std::log2(1.0 + power * g / sigma2);
    }

    arma::cx_vec draw_on_sphere(arma::uword n, double r, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> z(0.0, 1.0);
        arma::cx_vec d(n);
        double s = 0.0;
        do
        {
            for (auto &v : d)
                v = cx(z(rng), z(rng));
            s = arma::norm(d, 2);
        } while (s == 0.0);
        return d * (r / s);
    }

    arma::cx_vec draw_in_ball(arma::uword n, double r, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        return draw_on_sphere(n, r * std::pow(u(rng), 1.0 / double(2 * n)), rng);
    }

    double Quadratic::value(const arma::cx_vec &d) const
    {
        return std::real(arma::cdot(d, P * d)) + 2.0 * std::real(arma::cdot(g, d)) + r;
    }

    arma::cx_vec Quadratic::gradient(const arma::cx_vec &d) const { return 2.0 * (P * d + g); }

    Quadratic signal_quadratic(const arma::cx_vec &h, const arma::cx_vec &w)
    {
        // |w^H (h + d)|^2 = d^H w w^H d + 2 Re((w w^H h)^H d) + |w^H h|^2
        Quadratic q;
        q.P = w * w.t();
        q.g = q.P * h;
        q.r = std::norm(arma::cdot(w, h));
        return q;
    }

    Quadratic interference_quadratic(const arma::cx_vec &h, const arma::cx_mat &W_bar, double sigma2)
    {
        Quadratic q;
        q.P = W_bar * W_bar.t();
        q.g = q.P * h;
        q.r = std::real(arma::cdot(h, q.g)) + sigma2;
        return q;
    }

    Objective as_objective(const Quadratic &q)
    {
        return {[q](const arma::cx_vec &d) { return q.value(d); },
                [q](const arma::cx_vec &d) { return q.gradient(d); }};
    }

    Extreme minimize_on_ball(const Objective &f, arma::uword n, double eps, arma::uword num_samples,
                             std::mt19937_64 &rng, int starts)
    {
        return search(f, -1.0, n, eps, num_samples, rng, starts);
    }

    Extreme maximize_on_ball(const Objective &f, arma::uword n, double eps, arma::uword num_samples,
                             std::mt19937_64 &rng, int starts)
    {
        return search(f, 1.0, n, eps, num_samples, rng, starts);
    }

    Objective sinr_objective(const arma::cx_mat &W, const arma::cx_vec &h, arma::uword k, double sigma2)
    {
        arma::cx_mat W_bar = W;
        W_bar.shed_col(k);
        const Quadratic s = signal_quadratic(h, W.col(k));
        const Quadratic i = interference_quadratic(h, W_bar, sigma2);
        return {[s, i](const arma::cx_vec &d) { return s.value(d) / i.value(d); },
                [s, i](const arma::cx_vec &d) {
                    const double sv = s.value(d), iv = i.value(d);
                    return arma::cx_vec((s.gradient(d) * iv - i.gradient(d) * sv) / (iv * iv));
                }};
    }

    double grid_min_beampattern(const arma::cx_mat &W, double lo, double hi, double step)
    {
        if (!(step > 0.0) || hi < lo)
            throw std::invalid_argument("grid_min_beampattern: bad grid");
        double best = beampattern_by_columns(W, hi);
        for (double t = lo; t < hi; t += step)
            best = std::min(best, beampattern_by_columns(W, t));
        return best;
    }

    double grid_slack(const arma::cx_mat &W, double step)
    {
        // |dP/dtheta| = |2 Re(a'^H R a)| <= 2 ||a'|| ||a|| ||R||_2,  ||a'||^2 <= pi^2 sum n^2
        const double N = double(W.n_rows);
        double sum_n2 = 0.0;
        for (arma::uword n = 0; n < W.n_rows; ++n)
            sum_n2 += double(n) * double(n);
        const arma::vec sv = arma::svd(W);
        const double r2 = sv.is_empty() ? 0.0 : sv(0) * sv(0);
        return 2.0 * pi_value * std::sqrt(sum_n2) * std::sqrt(N) * r2 * step / 2.0;
    }

    double spearman(const std::vector<double> &x, const std::vector<double> &y)
    {
        if (x.size() != y.size() || x.size() < 2)
            throw std::invalid_argument("spearman: need two equal-length series of length >= 2");
        auto ranks = [](const std::vector<double> &v) {
            std::vector<std::size_t> idx(v.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
            std::vector<double> r(v.size());
            for (std::size_t i = 0; i < idx.size();)
            {
                std::size_t j = i;
                while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
                    ++j;
                const double avg = 0.5 * double(i + j) + 1.0;
                for (std::size_t t = i; t <= j; ++t)
                    r[idx[t]] = avg;
                i = j + 1;
            }
            return r;
        };
        const std::vector<double> rx = ranks(x), ry = ranks(y);
        const double n = double(x.size());
        const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
        const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < rx.size(); ++i)
        {
            sxy += (rx[i] - mx) * (ry[i] - my);
            sxx += (rx[i] - mx) * (rx[i] - mx);
            syy += (ry[i] - my) * (ry[i] - my);
        }
        if (sxx == 0.0 || syy == 0.0)
            return 0.0;
        return sxy / std::sqrt(sxx * syy);
    }

} // namespace dualrobust::oracle
