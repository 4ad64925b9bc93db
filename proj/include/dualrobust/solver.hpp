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

#ifndef dualrobust_solver_H
#define dualrobust_solver_H

#include "dualrobust/array_model.hpp"
#include "dualrobust/conic.hpp"
#include "dualrobust/sca_constraints.hpp"
#include "dualrobust/uncertainty.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dualrobust
{
    struct RunConfig
    {
        double rho = 0.5;            // weight of the rate term
        double power_budget = 1.0;   // P0, watts
        double inner_tol = 1e-3;     // relative objective change
        double outer_tol = 1e-3;     // max-abs change of the hull weights
        int max_inner = 30;
        int max_outer = 20;
        double solver_feas_tol = 1e-6;
        arma::uword hull_samples = 11; // S per target
        MuRule mu_rule = MuRule::ReverseHolder;
        ConicSettings conic{1e-6, 1e-6, 1e-6, 200, 0.0, false};

        void validate() const;
    };

    // Everything a design needs: geometry, estimated channels with their error radii, and the target
    // intervals. Columns are K user streams followed by one sensing stream per target.
    struct ProblemInstance
    {
        ArrayGeometry geometry{8};
        ChannelSet channels;
        std::vector<double> user_angles; // estimated directions of the users, radians
        std::vector<AngleInterval> targets;

        arma::uword num_users() const { return channels.num_users(); }
        arma::uword num_targets() const { return targets.size(); }
        arma::uword num_columns() const { return num_users() + num_targets(); }

        void validate() const;
    };

    class SolverError : public std::runtime_error
    {
    public:
        enum class Kind
        {
            Infeasible,
            SolverFailure
        };

        SolverError(Kind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
        Kind kind() const { return kind_; }

    private:
        Kind kind_;
    };

    struct IterationRecord
    {
        int outer = 0;
        int inner = 0;
        double objective = 0.0;      // rho sum log2(1 + delta) + (1 - rho) sum_m tr(B_m R_w)
        double relative_change = 0.0;
        arma::vec delta;             // SINR slacks
        arma::vec beta;              // interference slacks, in units of sigma_k^2
        std::vector<arma::vec> mu;
        std::string status;          // conic solver status of the step
        bool accepted = true;        // false when the step was rejected and the anchor kept
        bool fallback = false;       // trust-region averaging was used
        int solver_iterations = 0;
        double min_lmi_eig = 0.0;
        double wall_time_ms = 0.0;
    };

    struct SolveTrace
    {
        std::vector<IterationRecord> iterations;
        std::vector<std::vector<arma::vec>> mu_history; // weights used by each outer iteration
        int outer_iterations = 0;
        int inner_iterations = 0;                       // accepted + rejected steps over all outer iterations
        bool inner_converged = false;                   // last inner loop stopped on inner_tol
        bool outer_converged = false;
        double wall_time_ms = 0.0;
    };

    // Normalised view of an instance (see SolverIterate for the units) with the hull built at S samples.
    NormalizedProblem normalize(const ProblemInstance &instance, const RunConfig &config);

    // B_m = sum_s mu_{m,s} A_{m,s}
    std::vector<arma::cx_mat> hull_matrices(const NormalizedProblem &problem, const std::vector<arma::vec> &mu);

    // rho sum_k log2(1 + delta_k) + (1 - rho) P0 sum_m tr(B_m W W^H) for a normalised iterate.
    double design_objective(const NormalizedProblem &problem, const SolverIterate &it,
                            const std::vector<arma::cx_mat> &B_bar, double rho);

    // Steering-vector start scaled to the budget, delta = certified worst-case SINR (floored at 1e-6),
    // beta = certified worst interference, uniform hull weights.
    SolverIterate initialize(const ProblemInstance &instance, const NormalizedProblem &problem,
                             const RunConfig &config);

    // Rebuilds every slack of a normalised beamformer from its anchors: beta, xi and nu, phi are the tightest
    // values that keep both LMIs PSD, delta is the largest value the slack surrogate admits. W is scaled
    // down first when it exceeds the budget. The result is feasible for the step anchored at `anchor`.
    SolverIterate certify(const NormalizedProblem &problem, const arma::cx_mat &W, const SolverIterate &anchor);

    struct StepResult
    {
        SolverIterate iterate;
        double objective = 0.0;
        ConicSolution solution;
        bool fallback = false;
    };

    // Backend variants tried when a subproblem solve does not finish cleanly (qdldl, then damped faer).
    std::vector<ConicSettings> alternate_settings(const ConicSettings &base);

    // One convexified step. A solve that ends short of SOLVED and certifies below the anchor objective is
    // repeated with the alternate settings and the best certified step kept. On an infeasible or failed conic solve the anchor is averaged with
    // `safe_W` (rescaled to the anchor power) and the step retried once; a second failure throws SolverError.
    StepResult solve_subproblem(const NormalizedProblem &problem, const SolverIterate &anchor,
                                const std::vector<arma::cx_mat> &B_bar, const RunConfig &config,
                                const ConicSolver &solver, const arma::cx_mat &safe_W);

    // SCA iterations at fixed hull weights. Steps that would lower the objective are rejected and end the loop.
    SolverIterate inner_loop(const NormalizedProblem &problem, SolverIterate start, const RunConfig &config,
                             const ConicSolver &solver, SolveTrace &trace, int outer_index = 0);

    struct DesignResult
    {
        Beamformer beamformer;
        SolverIterate iterate; // normalised
        double objective = 0.0;
        SolveTrace trace;
    };

    // Alternates hull-weight updates and inner loops until the weights settle.
    DesignResult outer_loop(const ProblemInstance &instance, const RunConfig &config, const ConicSolver &solver);
    DesignResult outer_loop(const ProblemInstance &instance, const RunConfig &config);

    // W = sqrt(P0) W_n
    arma::cx_mat denormalize(const arma::cx_mat &W_normalized, double power_budget);

} // namespace dualrobust

#endif
