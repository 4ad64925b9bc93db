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

#ifndef dualrobust_sca_constraints_H
#define dualrobust_sca_constraints_H

#include "dualrobust/affine.hpp"
#include "dualrobust/conic.hpp"
#include "dualrobust/uncertainty.hpp"

#include <vector>

namespace dualrobust
{
    // One SCA iterate. All quantities are in normalised units: W is scaled by 1/sqrt(P0) so the power
    // budget reads ||W||_F^2 <= 1, and user k's channel, error radius and noise are divided by
    // sqrt(P0) ||h_hat_k|| so the estimate has unit norm. beta_k and nu_k are powers in those units;
    // delta is the SINR itself.
    // The *_prev members are the anchors of the convexified step that produced this iterate.
    struct SolverIterate
    {
        arma::cx_mat W;
        arma::vec delta, beta, nu, phi, xi;

        arma::cx_mat W_prev;
        arma::vec delta_prev, beta_prev;

        std::vector<arma::vec> mu; // per target, on the simplex
        double objective = 0.0;

        // Throws std::invalid_argument when the invariants (power budget, delta >= 0, beta >= noise,
        // simplex weights) are violated beyond tol.
        void validate(const arma::vec &noise, double tol = 1e-6) const;
    };

    // Positions of the real decision variables of the convexified step.
    class VariableLayout
    {
    public:
        VariableLayout(arma::uword num_antennas, arma::uword num_users, arma::uword num_columns);

        arma::uword num_antennas() const { return N_; }
        arma::uword num_users() const { return K_; }
        arma::uword num_columns() const { return L_; }
        int size() const { return int(2 * N_ * L_ + 6 * K_); }

        int w_re(arma::uword n, arma::uword j) const { return int(2 * (j * N_ + n)); }
        int w_im(arma::uword n, arma::uword j) const { return int(2 * (j * N_ + n) + 1); }
        int delta(arma::uword k) const { return scalar(0, k); }
        int beta(arma::uword k) const { return scalar(1, k); }
        int nu(arma::uword k) const { return scalar(2, k); }
        int phi(arma::uword k) const { return scalar(3, k); }
        int xi(arma::uword k) const { return scalar(4, k); }
        int rate(arma::uword k) const { return scalar(5, k); } // epigraph of ln(1 + delta_k)

        AffineVector column(arma::uword j) const;
        std::vector<AffineVector> columns_except(arma::uword k) const;
        std::vector<AffineVector> columns() const;

        arma::cx_mat beamformer(const arma::vec &x) const;
        arma::vec pack(const SolverIterate &it) const; // rate epigraph set to ln(1 + delta)

    private:
        int scalar(arma::uword block, arma::uword k) const { return int(2 * N_ * L_ + block * K_ + k); }

        arma::uword N_, K_, L_;
    };

    // Normalised per-step inputs (see SolverIterate for the units).
    struct NormalizedProblem
    {
        arma::uword num_antennas = 0;
        arma::uword num_users = 0;
        arma::uword num_columns = 0;
        std::vector<arma::cx_vec> h_hat;
        std::vector<double> eps;
        arma::vec noise;
        double sensing_scale = 1.0; // P0: converts normalised beampattern gain to watts
        std::vector<AngleUncertainty> targets;
    };

    // ---- signal-power SCA surrogate ------------------------------------------------------------
    // Lambda = w w_p^H + w_p w^H - w_p w_p^H,  b = Lambda h_hat,  c = h_hat^H Lambda h_hat.

    struct SignalTerms
    {
        arma::cx_mat Lambda;
        arma::cx_vec b;
        double c = 0.0;
    };

    struct AffineSignalTerms
    {
        HermitianAffine Lambda;
        AffineVector b;
        LinearForm c;
    };

    SignalTerms sca_signal_terms(const arma::cx_vec &w, const arma::cx_vec &w_prev, const arma::cx_vec &h_hat);
    AffineSignalTerms sca_signal_terms(const AffineVector &w, const arma::cx_vec &w_prev, const arma::cx_vec &h_hat);

    // d^H Lambda d + 2 Re{b^H d} + c, a minorant of |(h_hat + d)^H w|^2 tight at w == w_prev
    double signal_surrogate_value(const SignalTerms &terms, const arma::cx_vec &d);

    // [[Lambda + phi I, b], [b^H, c - nu - phi eps^2]]; with eps == 0 the ball is a point and the block is
    // the scalar c - nu (phi drops out).
    arma::cx_mat lmi_signal(const SignalTerms &terms, double nu, double phi, double eps);
    HermitianAffine lmi_signal(const AffineSignalTerms &terms, const LinearForm &nu, const LinearForm &phi, double eps);

    // [[beta - sigma2 - xi, h^H W_bar, 0], [W_bar^H h, I, eps W_bar^H], [0, eps W_bar, xi I]]
    arma::cx_mat lmi_interference(const arma::cx_vec &h_hat, const arma::cx_mat &W_bar, double beta, double xi,
                                  double eps, double sigma2);
    HermitianAffine lmi_interference(const arma::cx_vec &h_hat, const std::vector<AffineVector> &W_bar,
                                     const LinearForm &beta, const LinearForm &xi, double eps, double sigma2);

    // ---- SINR slack surrogate --------------------------------------------------------------------
    // nu >= ((delta + beta)^2 - 2 (dp - bp)(delta - beta) + (dp - bp)^2) / 4, written as the rotated cone
    // x^2 <= y z with x = delta + beta, y = 4 nu + 2 (dp - bp)(delta - beta) - (dp - bp)^2, z = 1.

    struct RotatedCone
    {
        LinearForm x, y, z;
        SecondOrderCone as_second_order_cone() const; // ||(2x, y - z)|| <= y + z
    };

    RotatedCone slack_surrogate(const LinearForm &delta, const LinearForm &beta, double delta_prev,
                                double beta_prev, const LinearForm &nu);
    double slack_surrogate_rhs(double delta, double beta, double delta_prev, double beta_prev);

    // Largest delta with slack_surrogate_rhs(delta, beta, ...) <= nu; negative when no delta >= 0 fits.
    double max_delta_under_surrogate(double nu, double beta, double delta_prev, double beta_prev);

    // ---- sensing -------------------------------------------------------------------------------

    enum class MuRule
    {
        ReverseHolder, // mu_s proportional to tr(A_s R)^-2
        Vertex         // all weight on argmin_s tr(A_s R)
    };

    inline constexpr double mu_trace_floor = 1e-12;

    // Hull weights from the previous covariance. Traces below mu_trace_floor are clamped to it.
    arma::vec mu_update(const arma::cx_mat &R_prev, const std::vector<arma::cx_mat> &samples,
                        MuRule rule = MuRule::ReverseHolder);

    // sum_m sum_j 2 Re{w_pj^H B_m w_j} - w_pj^H B_m w_pj
    LinearForm sensing_objective_linearization(const std::vector<AffineVector> &W, const arma::cx_mat &W_prev,
                                               const std::vector<arma::cx_mat> &B_bar);
    double sensing_objective_linearization(const arma::cx_mat &W, const arma::cx_mat &W_prev,
                                           const std::vector<arma::cx_mat> &B_bar);

    // sum_m sum_j w_j^H B_m w_j = sum_m tr(B_m W W^H)
    double sensing_objective_value(const arma::cx_mat &W, const std::vector<arma::cx_mat> &B_bar);

    // ---- tightest slacks for a fixed beamformer ----------------------------------------------------

    struct TightSignalBound
    {
        double nu = 0.0;
        double phi = 0.0;
    };

    // Largest nu (and its multiplier phi) for which lmi_signal is PSD, i.e. the minimum of the surrogate
    // over the ball. A relative margin is subtracted so the returned block is strictly feasible.
    TightSignalBound tightest_signal_bound(const SignalTerms &terms, double eps);

    struct TightInterferenceBound
    {
        double beta = 0.0;
        double xi = 0.0;
    };

    // Smallest beta (and multiplier xi) for which lmi_interference is PSD (plus a relative margin).
    TightInterferenceBound tightest_interference_bound(const arma::cx_vec &h_hat, const arma::cx_mat &W_bar,
                                                       double eps, double sigma2);

    // ---- assembled step --------------------------------------------------------------------------

    // Per-user units of the slacks within one step: delta = delta_unit * delta', beta = beta_unit * beta',
    // nu = delta_unit * beta_unit * nu', xi = beta_unit * xi'. Taken from the anchor, so the anchor sits at
    // delta' = beta' = 1 and the slack surrogate is applied to the primed slacks.
    struct SlackUnits
    {
        arma::vec delta, beta;

        // delta_unit = max(delta_prev, 1e-6), beta_unit = beta_prev
        static SlackUnits from_anchor(const SolverIterate &anchor);
    };

    // Largest delta_k the surrogate admits in the units above (negative when none fits).
    double max_delta_in_units(double nu, double beta, const SlackUnits &units, arma::uword k);

    // The convexified step: maximise rho sum_k log2(1 + delta_k) + (1 - rho) P0 (linearised sensing term)
    // subject to the power budget, both LMIs per user, the slack surrogates and phi, xi, delta >= 0.
    // The decision vector holds the primed slacks; the LMIs are congruence-scaled to match.
    struct SubproblemSpec
    {
        VariableLayout layout;
        ConicProblem problem;
        SlackUnits units;
        std::vector<arma::uword> signal_blocks;       // index into problem.psd_blocks per user
        std::vector<arma::uword> interference_blocks; // index into problem.psd_blocks per user

        arma::vec pack(const SolverIterate &it) const; // x for an iterate given in natural units
    };

    SubproblemSpec assemble_subproblem(const NormalizedProblem &problem, const SolverIterate &anchor,
                                       const std::vector<arma::cx_mat> &B_bar, double rho);

    // Numeric LMI blocks of `it` against its own anchors: [signal_0, interference_0, signal_1, ...].
    std::vector<arma::cx_mat> lmi_blocks(const NormalizedProblem &problem, const SolverIterate &it);

} // namespace dualrobust

#endif
