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

#include "dualrobust/sca_constraints.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dualrobust
{
    void SolverIterate::validate(const arma::vec &noise, double tol) const
    {
        const double p = std::real(arma::accu(W % arma::conj(W)));
        if (p > 1.0 + tol)
            throw std::invalid_argument("SolverIterate: power budget exceeded (" + std::to_string(p) + ")");
        if (delta.n_elem != beta.n_elem)
            throw std::invalid_argument("SolverIterate: delta and beta differ in length");
        for (arma::uword k = 0; k < delta.n_elem; ++k)
        {
            if (delta(k) < -tol)
                throw std::invalid_argument("SolverIterate: negative SINR slack");
            if (k < noise.n_elem && beta(k) < noise(k) * (1.0 - tol))
                throw std::invalid_argument("SolverIterate: interference slack below the noise floor");
        }
        for (const auto &m : mu)
            if (std::abs(arma::accu(m) - 1.0) > tol || arma::any(m < -tol) || arma::any(m > 1.0 + tol))
                throw std::invalid_argument("SolverIterate: hull weights are not on the simplex");
    }

    VariableLayout::VariableLayout(arma::uword num_antennas, arma::uword num_users, arma::uword num_columns)
        : N_(num_antennas), K_(num_users), L_(num_columns)
    {
        if (N_ == 0 || L_ == 0 || K_ > L_)
            throw std::invalid_argument("VariableLayout: inconsistent dimensions");
    }

    AffineVector VariableLayout::column(arma::uword j) const
    {
        AffineVector w;
        w.reserve(N_);
        for (arma::uword n = 0; n < N_; ++n)
            w.push_back(ComplexAffine::variable(w_re(n, j), 1.0) + ComplexAffine::variable(w_im(n, j), cx(0.0, 1.0)));
        return w;
    }

    std::vector<AffineVector> VariableLayout::columns_except(arma::uword k) const
    {
        std::vector<AffineVector> out;
        for (arma::uword j = 0; j < L_; ++j)
            if (j != k)
                out.push_back(column(j));
        return out;
    }

    std::vector<AffineVector> VariableLayout::columns() const
    {
        std::vector<AffineVector> out;
        for (arma::uword j = 0; j < L_; ++j)
            out.push_back(column(j));
        return out;
    }

    arma::cx_mat VariableLayout::beamformer(const arma::vec &x) const
    {
        arma::cx_mat W(N_, L_);
        for (arma::uword j = 0; j < L_; ++j)
            for (arma::uword n = 0; n < N_; ++n)
                W(n, j) = cx(x(w_re(n, j)), x(w_im(n, j)));
        return W;
    }

    arma::vec VariableLayout::pack(const SolverIterate &it) const
    {
        arma::vec x(size(), arma::fill::zeros);
        for (arma::uword j = 0; j < L_; ++j)
            for (arma::uword n = 0; n < N_; ++n)
            {
                x(w_re(n, j)) = it.W(n, j).real();
                x(w_im(n, j)) = it.W(n, j).imag();
            }
        for (arma::uword k = 0; k < K_; ++k)
        {
            x(delta(k)) = it.delta(k);
            x(beta(k)) = it.beta(k);
            x(nu(k)) = it.nu(k);
            x(phi(k)) = it.phi(k);
            x(xi(k)) = it.xi(k);
            x(rate(k)) = std::log1p(it.delta(k));
        }
        return x;
    }

    SignalTerms sca_signal_terms(const arma::cx_vec &w, const arma::cx_vec &w_prev, const arma::cx_vec &h_hat)
    {
        SignalTerms t;
        t.Lambda = w * w_prev.t() + w_prev * w.t() - w_prev * w_prev.t();
        t.b = t.Lambda * h_hat;
        t.c = std::real(arma::cdot(h_hat, t.b));
        return t;
    }

    AffineSignalTerms sca_signal_terms(const AffineVector &w, const arma::cx_vec &w_prev, const arma::cx_vec &h_hat)
    {
        const arma::uword n = w_prev.n_elem;
        if (w.size() != n || h_hat.n_elem != n)
            throw std::invalid_argument("sca_signal_terms: length mismatch");

        AffineSignalTerms t{HermitianAffine(n), {}, {}};
        for (arma::uword c = 0; c < n; ++c)
            for (arma::uword r = c; r < n; ++r)
            {
                ComplexAffine e = std::conj(w_prev(c)) * w[r] + w_prev(r) * w[c].conj();
                e += ComplexAffine(-w_prev(r) * std::conj(w_prev(c)));
                t.Lambda.set(r, c, e);
            }

        // b = w (w_p^H h) + w_p (w^H h) - w_p (w_p^H h)
        const cx alpha = arma::cdot(w_prev, h_hat);
        const ComplexAffine s = inner(h_hat, w); // h^H w
        const ComplexAffine w_h = s.conj();      // w^H h
        t.b.reserve(n);
        for (arma::uword r = 0; r < n; ++r)
            t.b.push_back(alpha * w[r] + w_prev(r) * w_h + ComplexAffine(-w_prev(r) * alpha));

        // c = 2 Re{(h^H w)(w_p^H h)} - |w_p^H h|^2
        t.c = 2.0 * (alpha * s).real() - std::norm(alpha);
        return t;
    }

    double signal_surrogate_value(const SignalTerms &terms, const arma::cx_vec &d)
    {
        return std::real(arma::cdot(d, terms.Lambda * d)) + 2.0 * std::real(arma::cdot(terms.b, d)) + terms.c;
    }

    arma::cx_mat lmi_signal(const SignalTerms &terms, double nu, double phi, double eps)
    {
        if (eps == 0.0)
            return arma::cx_mat(1, 1, arma::fill::value(cx(terms.c - nu, 0.0)));
        const arma::uword n = terms.b.n_elem;
        arma::cx_mat M(n + 1, n + 1);
        M.submat(0, 0, n - 1, n - 1) = terms.Lambda + phi * arma::eye<arma::cx_mat>(n, n);
        M.submat(0, n, n - 1, n) = terms.b;
        M.submat(n, 0, n, n - 1) = terms.b.t();
        M(n, n) = terms.c - nu - phi * eps * eps;
        return 0.5 * (M + M.t());
    }

    HermitianAffine lmi_signal(const AffineSignalTerms &terms, const LinearForm &nu, const LinearForm &phi, double eps)
    {
        const arma::uword n = terms.b.size();
        auto as_complex = [](const LinearForm &f) {
            ComplexAffine out(f.constant());
            for (const auto &[i, c] : f.terms())
                out += ComplexAffine::variable(i, c);
            return out;
        };
        if (eps == 0.0)
        {
            HermitianAffine scalar(1);
            scalar.set(0, 0, as_complex(terms.c - nu));
            return scalar;
        }
        HermitianAffine M(n + 1);
        const ComplexAffine phi_c = as_complex(phi);
        for (arma::uword c = 0; c < n; ++c)
        {
            for (arma::uword r = c; r < n; ++r)
                M.set(r, c, terms.Lambda.lower(r, c));
            M.add(c, c, phi_c);
            M.set(n, c, terms.b[c].conj()); // lower-left row is b^H
        }
        M.set(n, n, as_complex(terms.c - nu - eps * eps * phi));
        return M;
    }

    arma::cx_mat lmi_interference(const arma::cx_vec &h_hat, const arma::cx_mat &W_bar, double beta, double xi,
                                  double eps, double sigma2)
    {
        const arma::uword n = h_hat.n_elem, l = W_bar.n_cols;
        arma::cx_mat M(1 + l + n, 1 + l + n, arma::fill::zeros);
        M(0, 0) = beta - sigma2 - xi;
        if (l > 0)
        {
            const arma::cx_vec g = W_bar.t() * h_hat;
            M.submat(1, 0, l, 0) = g;
            M.submat(0, 1, 0, l) = g.t();
            M.submat(1, 1, l, l) = arma::eye<arma::cx_mat>(l, l);
            M.submat(1 + l, 1, l + n, l) = eps * W_bar;
            M.submat(1, 1 + l, l, l + n) = eps * W_bar.t();
        }
        M.submat(1 + l, 1 + l, l + n, l + n) = xi * arma::eye<arma::cx_mat>(n, n);
        return M;
    }

    HermitianAffine lmi_interference(const arma::cx_vec &h_hat, const std::vector<AffineVector> &W_bar,
                                     const LinearForm &beta, const LinearForm &xi, double eps, double sigma2)
    {
        const arma::uword n = h_hat.n_elem, l = W_bar.size();
        HermitianAffine M(1 + l + n);
        auto as_complex = [](const LinearForm &f) {
            ComplexAffine out(f.constant());
            for (const auto &[i, c] : f.terms())
                out += ComplexAffine::variable(i, c);
            return out;
        };
        M.set(0, 0, as_complex(beta - xi - sigma2));
        for (arma::uword j = 0; j < l; ++j)
        {
            if (W_bar[j].size() != n)
                throw std::invalid_argument("lmi_interference: column length mismatch");
            M.set(1 + j, 0, inner(h_hat, W_bar[j]).conj()); // w_j^H h
            M.set(1 + j, 1 + j, ComplexAffine(1.0));
            for (arma::uword r = 0; r < n; ++r)
                M.set(1 + l + r, 1 + j, eps * W_bar[j][r]);
        }
        const ComplexAffine xi_c = as_complex(xi);
        for (arma::uword r = 0; r < n; ++r)
            M.set(1 + l + r, 1 + l + r, xi_c);
        return M;
    }

    SecondOrderCone RotatedCone::as_second_order_cone() const
    {
        SecondOrderCone q;
        q.t = y + z;
        q.x = {2.0 * x, y - z};
        return q;
    }

    RotatedCone slack_surrogate(const LinearForm &delta, const LinearForm &beta, double delta_prev,
                                double beta_prev, const LinearForm &nu)
    {
        const double d = delta_prev - beta_prev;
        RotatedCone r;
        r.x = delta + beta;
        r.y = 4.0 * nu + 2.0 * d * (delta - beta) - d * d;
        r.z = LinearForm(1.0);
        return r;
    }

    double slack_surrogate_rhs(double delta, double beta, double delta_prev, double beta_prev)
    {
        const double d = delta_prev - beta_prev;
        const double s = delta + beta;
        return 0.25 * (s * s - 2.0 * d * (delta - beta) + d * d);
    }

    double max_delta_under_surrogate(double nu, double beta, double delta_prev, double beta_prev)
    {
        // rhs = (delta + beta - d)^2 / 4 + d beta  with  d = delta_prev - beta_prev
        const double d = delta_prev - beta_prev;
        const double room = nu - d * beta;
        if (room < 0.0)
            return -std::numeric_limits<double>::infinity();
        return d - beta + 2.0 * std::sqrt(room);
    }

    arma::vec mu_update(const arma::cx_mat &R_prev, const std::vector<arma::cx_mat> &samples, MuRule rule)
    {
        if (samples.empty())
            throw std::invalid_argument("mu_update: no hull samples");
        arma::vec tr(samples.size());
        for (std::size_t s = 0; s < samples.size(); ++s)
            tr(s) = std::max(mu_trace_floor, std::real(arma::trace(samples[s] * R_prev)));

        arma::vec mu(samples.size(), arma::fill::zeros);
        if (rule == MuRule::Vertex)
        {
            mu(tr.index_min()) = 1.0;
            return mu;
        }
        // Normalise by the smallest trace first so the inverse squares stay in range.
        const double t0 = tr.min();
        for (std::size_t s = 0; s < samples.size(); ++s)
            mu(s) = std::pow(t0 / tr(s), 2);
        return mu / arma::accu(mu);
    }

    LinearForm sensing_objective_linearization(const std::vector<AffineVector> &W, const arma::cx_mat &W_prev,
                                               const std::vector<arma::cx_mat> &B_bar)
    {
        LinearForm out;
        if (B_bar.empty())
            return out;
        arma::cx_mat B = B_bar.front();
        for (std::size_t m = 1; m < B_bar.size(); ++m)
            B += B_bar[m];
        for (std::size_t j = 0; j < W.size(); ++j)
        {
            const arma::cx_vec wp = W_prev.col(j);
            const arma::cx_vec Bwp = B * wp;
            out += 2.0 * inner(Bwp, W[j]).real();
            out -= LinearForm(std::real(arma::cdot(wp, Bwp)));
        }
        return out;
    }

    double sensing_objective_linearization(const arma::cx_mat &W, const arma::cx_mat &W_prev,
                                           const std::vector<arma::cx_mat> &B_bar)
    {
        double v = 0.0;
        for (const auto &B : B_bar)
            for (arma::uword j = 0; j < W.n_cols; ++j)
            {
                const arma::cx_vec Bwp = B * W_prev.col(j);
                v += 2.0 * std::real(arma::cdot(Bwp, W.col(j))) - std::real(arma::cdot(W_prev.col(j), Bwp));
            }
        return v;
    }

    double sensing_objective_value(const arma::cx_mat &W, const std::vector<arma::cx_mat> &B_bar)
    {
        double v = 0.0;
        for (const auto &B : B_bar)
            v += std::real(arma::trace(W.t() * B * W));
        return v;
    }

    TightSignalBound tightest_signal_bound(const SignalTerms &terms, double eps)
    {
        if (eps < 0.0)
            throw std::invalid_argument("tightest_signal_bound: eps must be nonnegative");
        arma::vec lambda;
        arma::cx_mat U;
        arma::eig_sym(lambda, U, arma::cx_mat(0.5 * (terms.Lambda + terms.Lambda.t())));
        const arma::cx_vec bt = U.t() * terms.b;
        const arma::vec w2 = arma::square(arma::abs(bt));
        const double scale = std::max({std::abs(terms.c), arma::abs(lambda).max(), 1e-300});
        const double phi_lo = std::max(0.0, -lambda.min());

        auto g = [&](double phi) {
            double v = terms.c - phi * eps * eps;
            for (arma::uword i = 0; i < lambda.n_elem; ++i)
                if (w2(i) > 0.0)
                    v -= w2(i) / (lambda(i) + phi);
            return v;
        };
        auto slope = [&](double phi) {
            double v = -eps * eps;
            for (arma::uword i = 0; i < lambda.n_elem; ++i)
                if (w2(i) > 0.0)
                    v += w2(i) / std::pow(lambda(i) + phi, 2);
            return v;
        };

        const double bnorm2 = arma::accu(w2);
        // Keep Lambda + phi I strictly positive definite.
        const double phi_min = phi_lo + 1e-9 * scale;
        if (eps == 0.0)
            return {terms.c - 1e-10 * std::abs(terms.c) - 1e-300, 0.0}; // the block is the scalar c - nu
        double phi;
        if (slope(phi_min) <= 0.0)
            phi = phi_min;
        else
        {
            double lo = phi_min, hi = phi_min + std::sqrt(bnorm2) / eps + scale;
            while (slope(hi) > 0.0)
                hi = phi_min + 2.0 * (hi - phi_min);
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                (slope(mid) > 0.0 ? lo : hi) = mid;
            }
            phi = 0.5 * (lo + hi);
        }
        const double best = g(phi);
        return {best - 1e-10 * std::abs(best) - 1e-300, phi};
    }

    TightInterferenceBound tightest_interference_bound(const arma::cx_vec &h_hat, const arma::cx_mat &W_bar,
                                                       double eps, double sigma2)
    {
        if (eps < 0.0)
            throw std::invalid_argument("tightest_interference_bound: eps must be nonnegative");
        if (W_bar.n_cols == 0)
            return {sigma2 * (1.0 + 1e-10), 0.0};

        arma::cx_mat Q = W_bar * W_bar.t();
        Q = 0.5 * (Q + Q.t());
        const double nominal = std::real(arma::cdot(h_hat, Q * h_hat));
        if (eps == 0.0)
        {
            const double beta = sigma2 + nominal;
            return {beta * (1.0 + 1e-10), 0.0};
        }

        arma::vec lambda;
        arma::cx_mat U;
        arma::eig_sym(lambda, U, Q);
        const arma::vec q2 = arma::square(arma::abs(U.t() * h_hat)) % arma::square(lambda);
        const double e2 = eps * eps;
        const double lmax = std::max(lambda.max(), 0.0);

        auto beta_of = [&](double xi) {
            double v = sigma2 + nominal + xi;
            for (arma::uword i = 0; i < lambda.n_elem; ++i)
                if (q2(i) > 0.0)
                    v += e2 * q2(i) / (xi - e2 * lambda(i));
            return v;
        };
        auto slope = [&](double xi) {
            double v = 1.0;
            for (arma::uword i = 0; i < lambda.n_elem; ++i)
                if (q2(i) > 0.0)
                    v -= e2 * q2(i) / std::pow(xi - e2 * lambda(i), 2);
            return v;
        };

        const double xi_min = e2 * lmax * (1.0 + 1e-10) + 1e-14 * (sigma2 + nominal);
        double xi;
        if (slope(xi_min) >= 0.0)
            xi = xi_min;
        else
        {
            double lo = xi_min, hi = e2 * lmax + eps * std::sqrt(arma::accu(q2)) + sigma2 + nominal;
            while (slope(hi) < 0.0)
                hi = xi_min + 2.0 * (hi - xi_min);
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                (slope(mid) < 0.0 ? lo : hi) = mid;
            }
            xi = 0.5 * (lo + hi);
        }
        const double beta = beta_of(xi);
        return {beta * (1.0 + 1e-10), xi};
    }

    SlackUnits SlackUnits::from_anchor(const SolverIterate &anchor)
    {
        if (anchor.delta.n_elem != anchor.beta.n_elem || arma::any(anchor.beta <= 0.0))
            throw std::invalid_argument("SlackUnits: anchor needs positive interference slacks");
        return {arma::clamp(anchor.delta, 1e-6, arma::datum::inf), anchor.beta};
    }

    double max_delta_in_units(double nu, double beta, const SlackUnits &units, arma::uword k)
    {
        const double ud = units.delta(k), ub = units.beta(k);
        return ud * max_delta_under_surrogate(nu / (ud * ub), beta / ub, 1.0, 1.0);
    }

    arma::vec SubproblemSpec::pack(const SolverIterate &it) const
    {
        arma::vec x = layout.pack(it);
        for (arma::uword k = 0; k < layout.num_users(); ++k)
        {
            x(layout.delta(k)) /= units.delta(k);
            x(layout.beta(k)) /= units.beta(k);
            x(layout.nu(k)) /= units.delta(k) * units.beta(k);
            x(layout.xi(k)) /= units.beta(k);
        }
        return x;
    }

    SubproblemSpec assemble_subproblem(const NormalizedProblem &np, const SolverIterate &anchor,
                                       const std::vector<arma::cx_mat> &B_bar, double rho)
    {
        const arma::uword N = np.num_antennas, K = np.num_users, L = np.num_columns;
        if (anchor.W.n_rows != N || anchor.W.n_cols != L)
            throw std::invalid_argument("assemble_subproblem: anchor has wrong dimensions");
        for (arma::uword k = 0; k < K; ++k)
            if (arma::norm(anchor.W.col(k), 2) == 0.0)
                throw std::invalid_argument("assemble_subproblem: zero anchor column for user " + std::to_string(k) +
                                            " stalls its signal surrogate");

        SubproblemSpec spec{VariableLayout(N, K, L), {}, SlackUnits::from_anchor(anchor), {}, {}};
        const VariableLayout &lay = spec.layout;
        const SlackUnits &u = spec.units;
        ConicProblem &cp = spec.problem;
        cp.num_variables = lay.size();
        cp.maximize = true;

        const auto cols = lay.columns();
        LinearForm objective = (1.0 - rho) * np.sensing_scale * sensing_objective_linearization(cols, anchor.W, B_bar);
        for (arma::uword k = 0; k < K; ++k)
            objective += LinearForm::variable(lay.rate(k), rho / std::log(2.0));
        cp.objective = objective;

        for (arma::uword k = 0; k < K; ++k)
        {
            cp.nonnegatives.push_back(LinearForm::variable(lay.phi(k)));
            cp.nonnegatives.push_back(LinearForm::variable(lay.xi(k)));
            cp.nonnegatives.push_back(LinearForm::variable(lay.delta(k)));
        }

        SecondOrderCone power;
        power.t = LinearForm(1.0);
        for (arma::uword j = 0; j < L; ++j)
            for (arma::uword n = 0; n < N; ++n)
            {
                power.x.push_back(LinearForm::variable(lay.w_re(n, j)));
                power.x.push_back(LinearForm::variable(lay.w_im(n, j)));
            }
        cp.second_order_cones.push_back(std::move(power));

        for (arma::uword k = 0; k < K; ++k)
        {
            const double ud = u.delta(k), ub = u.beta(k), kappa = ud * ub;
            const LinearForm delta_p = LinearForm::variable(lay.delta(k));
            const LinearForm beta_p = LinearForm::variable(lay.beta(k));
            const LinearForm nu_p = LinearForm::variable(lay.nu(k));
            const LinearForm phi = LinearForm::variable(lay.phi(k));
            const LinearForm xi_p = LinearForm::variable(lay.xi(k));

            // In primed units the anchor is (1, 1).
            cp.second_order_cones.push_back(slack_surrogate(delta_p, beta_p, 1.0, 1.0, nu_p).as_second_order_cone());

            const AffineSignalTerms terms = sca_signal_terms(cols[k], anchor.W.col(k), np.h_hat[k]);
            arma::vec d_sig(N + 1, arma::fill::ones);
            d_sig(N) = 1.0 / std::sqrt(kappa);
            spec.signal_blocks.push_back(cp.psd_blocks.size());
            cp.psd_blocks.push_back(lmi_signal(terms, kappa * nu_p, phi, np.eps[k]).congruence(
                np.eps[k] == 0.0 ? arma::vec{1.0 / std::sqrt(kappa)} : d_sig));

            const auto others = lay.columns_except(k);
            arma::vec d_int(1 + others.size() + N, arma::fill::ones);
            d_int(0) = 1.0 / std::sqrt(ub);
            d_int.tail(N).fill(1.0 / std::sqrt(ub));
            spec.interference_blocks.push_back(cp.psd_blocks.size());
            cp.psd_blocks.push_back(
                lmi_interference(np.h_hat[k], others, ub * beta_p, ub * xi_p, np.eps[k], np.noise(k)).congruence(d_int));

            cp.exp_cones.push_back({LinearForm::variable(lay.rate(k)), LinearForm(1.0), ud * delta_p + 1.0});
        }
        return spec;
    }

    std::vector<arma::cx_mat> lmi_blocks(const NormalizedProblem &np, const SolverIterate &it)
    {
        std::vector<arma::cx_mat> out;
        for (arma::uword k = 0; k < np.num_users; ++k)
        {
            const SignalTerms terms = sca_signal_terms(it.W.col(k), it.W_prev.col(k), np.h_hat[k]);
            out.push_back(lmi_signal(terms, it.nu(k), it.phi(k), np.eps[k]));
            arma::cx_mat W_bar = it.W;
            W_bar.shed_col(k);
            out.push_back(lmi_interference(np.h_hat[k], W_bar, it.beta(k), it.xi(k), np.eps[k], np.noise(k)));
        }
        return out;
    }

} // namespace dualrobust
