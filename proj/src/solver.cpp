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

#include "dualrobust/solver.hpp"

#include "dualrobust/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace dualrobust
{
    namespace
    {
        using clock_type = std::chrono::steady_clock;

        double elapsed_ms(clock_type::time_point t0)
        {
            return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
        }

        double frobenius2(const arma::cx_mat &W) { return std::real(arma::accu(W % arma::conj(W))); }

        arma::cx_mat without_column(const arma::cx_mat &W, arma::uword k)
        {
            arma::cx_mat out = W;
            out.shed_col(k);
            return out;
        }

        // A beamformer anchored at itself: delta is its certified worst-case SINR and beta its certified worst
        // interference, both from the tight slacks so the point is feasible for the step it anchors.
        SolverIterate self_anchored(const NormalizedProblem &np, const arma::cx_mat &W, const std::vector<arma::vec> &mu)
        {
            const arma::uword K = np.num_users;
            SolverIterate it;
            it.W = W;
            it.delta.set_size(K);
            it.beta.set_size(K);
            it.nu.set_size(K);
            it.phi.set_size(K);
            it.xi.set_size(K);
            for (arma::uword k = 0; k < K; ++k)
            {
                const TightSignalBound sb =
                    tightest_signal_bound(sca_signal_terms(W.col(k), W.col(k), np.h_hat[k]), np.eps[k]);
                const TightInterferenceBound ib =
                    tightest_interference_bound(np.h_hat[k], without_column(W, k), np.eps[k], np.noise(k));
                it.nu(k) = sb.nu;
                it.phi(k) = sb.phi;
                it.beta(k) = ib.beta;
                it.xi(k) = ib.xi;
                it.delta(k) = std::max(sb.nu / ib.beta, 1e-6);
            }
            it.W_prev = W;
            it.delta_prev = it.delta;
            it.beta_prev = it.beta;
            it.mu = mu;
            return it;
        }

        std::vector<arma::vec> uniform_mu(const NormalizedProblem &np)
        {
            std::vector<arma::vec> mu;
            for (const auto &t : np.targets)
                mu.push_back(arma::vec(t.samples.size(), arma::fill::value(1.0 / double(t.samples.size()))));
            return mu;
        }

        double min_eig(const std::vector<arma::cx_mat> &blocks)
        {
            double m = std::numeric_limits<double>::infinity();
            for (const auto &B : blocks)
                m = std::min(m, arma::eig_sym(arma::cx_mat(0.5 * (B + B.t()))).min());
            return m;
        }
    } // namespace

    void RunConfig::validate() const
    {
        if (!(rho >= 0.0 && rho <= 1.0))
            throw std::invalid_argument("RunConfig: rho must lie in [0, 1]");
        if (!(power_budget > 0.0))
            throw std::invalid_argument("RunConfig: power budget must be positive");
        if (!(inner_tol > 0.0) || !(outer_tol > 0.0) || !(solver_feas_tol > 0.0))
            throw std::invalid_argument("RunConfig: tolerances must be positive");
        if (max_inner < 1 || max_outer < 1)
            throw std::invalid_argument("RunConfig: iteration caps must be at least 1");
        if (hull_samples < 1)
            throw std::invalid_argument("RunConfig: at least one hull sample per target is needed");
    }

    void ProblemInstance::validate() const
    {
        channels.validate(geometry);
        if (num_users() == 0)
            throw std::invalid_argument("ProblemInstance: at least one user is required");
        if (user_angles.size() != num_users())
            throw std::invalid_argument("ProblemInstance: one estimated angle per user is required");
        for (const auto &t : targets)
            t.validate();
    }

    NormalizedProblem normalize(const ProblemInstance &instance, const RunConfig &config)
    {
        NormalizedProblem np;
        np.num_antennas = instance.geometry.num_antennas();
        np.num_users = instance.num_users();
        np.num_columns = instance.num_columns();
        np.sensing_scale = config.power_budget;
        np.noise.set_size(np.num_users);
        for (arma::uword k = 0; k < np.num_users; ++k)
        {
            const double norm = arma::norm(instance.channels.estimates[k], 2);
            if (!(norm > 0.0))
                throw std::invalid_argument("normalize: user " + std::to_string(k) + " has a zero channel estimate");
            np.h_hat.push_back(instance.channels.estimates[k] / norm);
            np.eps.push_back(instance.channels.radii[k] / norm);
            np.noise(k) = instance.channels.noise_powers[k] / (config.power_budget * norm * norm);
        }
        for (const auto &t : instance.targets)
            np.targets.push_back(AngleUncertainty::build(t, config.hull_samples, instance.geometry));
        return np;
    }

    std::vector<arma::cx_mat> hull_matrices(const NormalizedProblem &problem, const std::vector<arma::vec> &mu)
    {
        if (mu.size() != problem.targets.size())
            throw std::invalid_argument("hull_matrices: one weight vector per target is required");
        std::vector<arma::cx_mat> B;
        for (std::size_t m = 0; m < mu.size(); ++m)
        {
            const auto &samples = problem.targets[m].samples;
            if (mu[m].n_elem != samples.size())
                throw std::invalid_argument("hull_matrices: weight count does not match the hull samples");
            arma::cx_mat acc(problem.num_antennas, problem.num_antennas, arma::fill::zeros);
            for (std::size_t s = 0; s < samples.size(); ++s)
                acc += mu[m](s) * samples[s];
            B.push_back(acc);
        }
        return B;
    }

    double design_objective(const NormalizedProblem &problem, const SolverIterate &it,
                            const std::vector<arma::cx_mat> &B_bar, double rho)
    {
        double rate = 0.0;
        for (arma::uword k = 0; k < it.delta.n_elem; ++k)
            rate += std::log2(1.0 + it.delta(k));
        return rho * rate + (1.0 - rho) * problem.sensing_scale * sensing_objective_value(it.W, B_bar);
    }

    SolverIterate initialize(const ProblemInstance &instance, const NormalizedProblem &problem,
                             const RunConfig &config)
    {
        const Beamformer start = svm_design(instance, config.power_budget);
        SolverIterate it = self_anchored(problem, start.matrix() / std::sqrt(config.power_budget), uniform_mu(problem));
        it.objective = design_objective(problem, it, hull_matrices(problem, it.mu), config.rho);
        return it;
    }

    SolverIterate certify(const NormalizedProblem &problem, const arma::cx_mat &W, const SolverIterate &anchor)
    {
        const arma::uword K = problem.num_users;
        SolverIterate it;
        it.W = W;
        const double p = frobenius2(W);
        if (p > 1.0)
            it.W /= std::sqrt(p);

        const SlackUnits units = SlackUnits::from_anchor(anchor);
        it.delta.set_size(K);
        it.beta.set_size(K);
        it.nu.set_size(K);
        it.phi.set_size(K);
        it.xi.set_size(K);
        for (arma::uword k = 0; k < K; ++k)
        {
            const TightSignalBound sb =
                tightest_signal_bound(sca_signal_terms(it.W.col(k), anchor.W.col(k), problem.h_hat[k]), problem.eps[k]);
            const TightInterferenceBound ib =
                tightest_interference_bound(problem.h_hat[k], without_column(it.W, k), problem.eps[k], problem.noise(k));
            it.nu(k) = sb.nu;
            it.phi(k) = sb.phi;
            it.beta(k) = ib.beta;
            it.xi(k) = ib.xi;
            const double d = max_delta_in_units(sb.nu, ib.beta, units, k);
            it.delta(k) = d > 0.0 ? d : 0.0;
        }
        it.W_prev = anchor.W;
        it.delta_prev = anchor.delta;
        it.beta_prev = anchor.beta;
        it.mu = anchor.mu;
        return it;
    }

    std::vector<ConicSettings> alternate_settings(const ConicSettings &base)
    {
        ConicSettings qdldl = base;
        qdldl.qdldl = true;
        ConicSettings damped = base;
        damped.static_regularization = 1e-7;
        damped.max_step_fraction = 0.9;
        return {qdldl, damped};
    }

    StepResult solve_subproblem(const NormalizedProblem &problem, const SolverIterate &anchor,
                                const std::vector<arma::cx_mat> &B_bar, const RunConfig &config,
                                const ConicSolver &solver, const arma::cx_mat &safe_W)
    {
        auto attempt = [&](const SolverIterate &a, const ConicSettings &settings) {
            const SubproblemSpec spec = assemble_subproblem(problem, a, B_bar, config.rho);
            StepResult r;
            r.solution = solver.solve(spec.problem, settings);
            // An interior-point run that stalls close to the optimum still leaves a usable point;
            // keep it when it satisfies every cone to the feasibility tolerance.
            if (r.solution.status == SolveStatus::Failure && r.solution.x.n_elem == arma::uword(spec.problem.num_variables) &&
                r.solution.x.is_finite() && max_violation(spec.problem, r.solution.x) <= config.solver_feas_tol)
            {
                r.solution.status = SolveStatus::SolvedInaccurate;
                r.solution.message += " (stalled iterate kept: feasible)";
            }
            if (r.solution.ok())
            {
                r.iterate = certify(problem, spec.layout.beamformer(r.solution.x), a);
                r.objective = design_objective(problem, r.iterate, B_bar, config.rho);
            }
            return r;
        };

        const double f_anchor = design_objective(problem, anchor, B_bar, config.rho);
        auto good = [&](const StepResult &s) {
            return s.solution.status == SolveStatus::Solved || (s.solution.ok() && s.objective >= f_anchor);
        };
        StepResult r = attempt(anchor, config.conic);
        if (good(r))
            return r;

        // A stalled interior-point run is sensitive to the factorisation; rerun with other
        // backend settings and keep the best certified step.
        for (const ConicSettings &alt : alternate_settings(config.conic))
        {
            StepResult other = attempt(anchor, alt);
            if (other.solution.ok() && (!r.solution.ok() || other.objective > r.objective))
                r = std::move(other);
            if (good(r))
                break;
        }
        if (r.solution.ok())
            return r;

        // Pull the anchor halfway back towards a known-feasible point and try once more.
        arma::cx_mat W_mid = 0.5 * (anchor.W + safe_W);
        const double p_mid = frobenius2(W_mid);
        if (p_mid > 0.0)
            W_mid *= std::sqrt(frobenius2(anchor.W) / p_mid);
        const SolverIterate shrunk = self_anchored(problem, W_mid, anchor.mu);
        StepResult retry = attempt(shrunk, config.conic);
        retry.fallback = true;
        if (retry.solution.ok())
            return retry;

        const std::string what = std::string("convexified step failed twice (") + to_string(r.solution.status) +
                                 ", then " + to_string(retry.solution.status) + "): " + retry.solution.message;
        throw SolverError(retry.solution.status == SolveStatus::Infeasible ? SolverError::Kind::Infeasible
                                                                           : SolverError::Kind::SolverFailure,
                          what);
    }

    SolverIterate inner_loop(const NormalizedProblem &problem, SolverIterate start, const RunConfig &config,
                             const ConicSolver &solver, SolveTrace &trace, int outer_index)
    {
        const std::vector<arma::cx_mat> B_bar = hull_matrices(problem, start.mu);
        SolverIterate cur = std::move(start);
        cur.objective = design_objective(problem, cur, B_bar, config.rho);
        const arma::cx_mat safe_W = cur.W;

        IterationRecord first;
        first.outer = outer_index;
        first.inner = 0;
        first.objective = cur.objective;
        first.delta = cur.delta;
        first.beta = cur.beta;
        first.mu = cur.mu;
        first.status = "START";
        trace.iterations.push_back(first);

        trace.inner_converged = false;
        for (int i = 1; i <= config.max_inner; ++i)
        {
            const auto t0 = clock_type::now();
            StepResult step = solve_subproblem(problem, cur, B_bar, config, solver, safe_W);
            ++trace.inner_iterations;

            // Conic solver inaccuracy can only show up as a lower objective after certification;
            // fall back to the midpoint of anchor and step, which is feasible for the same step.
            if (step.objective < cur.objective)
            {
                SolverIterate mid = certify(problem, 0.5 * (cur.W + step.iterate.W), cur);
                const double f_mid = design_objective(problem, mid, B_bar, config.rho);
                if (f_mid > step.objective)
                {
                    step.iterate = std::move(mid);
                    step.objective = f_mid;
                }
            }

            IterationRecord rec;
            rec.outer = outer_index;
            rec.inner = i;
            rec.objective = step.objective;
            rec.relative_change = std::abs(step.objective - cur.objective) / std::max(std::abs(cur.objective), 1e-12);
            rec.delta = step.iterate.delta;
            rec.beta = step.iterate.beta;
            rec.mu = cur.mu;
            rec.status = to_string(step.solution.status);
            rec.fallback = step.fallback;
            rec.solver_iterations = step.solution.iterations;
            rec.accepted = step.objective >= cur.objective;
            rec.min_lmi_eig = min_eig(lmi_blocks(problem, step.iterate));
            rec.wall_time_ms = elapsed_ms(t0);
            trace.iterations.push_back(rec);

            if (!rec.accepted)
            {
                // No ascent left that the conic solver can resolve.
                trace.inner_converged = true;
                break;
            }
            step.iterate.objective = step.objective;
            cur = std::move(step.iterate);
            if (rec.relative_change < config.inner_tol)
            {
                trace.inner_converged = true;
                break;
            }
        }
        return cur;
    }

    DesignResult outer_loop(const ProblemInstance &instance, const RunConfig &config, const ConicSolver &solver)
    {
        const auto t0 = clock_type::now();
        config.validate();
        instance.validate();
        const NormalizedProblem np = normalize(instance, config);
        SolverIterate cur = initialize(instance, np, config);

        SolveTrace trace;
        std::vector<arma::vec> mu = cur.mu;
        for (int o = 1; o <= config.max_outer; ++o)
        {
            cur.mu = mu;
            trace.mu_history.push_back(mu);
            cur = inner_loop(np, std::move(cur), config, solver, trace, o);
            trace.outer_iterations = o;

            const arma::cx_mat R = cur.W * cur.W.t();
            double change = 0.0;
            for (std::size_t m = 0; m < mu.size(); ++m)
            {
                arma::vec next = mu_update(R, np.targets[m].samples, config.mu_rule);
                change = std::max(change, arma::abs(next - mu[m]).max());
                mu[m] = std::move(next);
            }
            if (change < config.outer_tol)
            {
                trace.outer_converged = true;
                break;
            }
        }
        trace.wall_time_ms = elapsed_ms(t0);

        DesignResult out{Beamformer(denormalize(cur.W, config.power_budget), instance.num_users()), cur,
                         cur.objective, std::move(trace)};
        return out;
    }

    DesignResult outer_loop(const ProblemInstance &instance, const RunConfig &config)
    {
        const auto solver = make_default_conic_solver();
        return outer_loop(instance, config, *solver);
    }

    arma::cx_mat denormalize(const arma::cx_mat &W_normalized, double power_budget)
    {
        return W_normalized * std::sqrt(power_budget);
    }

} // namespace dualrobust
