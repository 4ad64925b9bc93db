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

#include "dualrobust/conic.hpp"

#include "clarabel_capi.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace dualrobust
{
    namespace
    {
        const double sqrt2 = std::sqrt(2.0);

        // Rows in cone order (zero, nonnegative, SOC, PSD, exp), each the affine expression s_i(x) that must
        // lie in its cone, plus the cone sizes.
        struct Stacked
        {
            std::vector<LinearForm> rows;
            std::size_t zero = 0, nonneg = 0, exp = 0;
            std::vector<std::size_t> soc, psd;
        };

        ComplexAffine hermitian_entry(const HermitianAffine &H, arma::uword r, arma::uword c)
        {
            return r >= c ? H.lower(r, c) : H.lower(c, r).conj();
        }

        // Real embedding [[Re, -Im], [Im, Re]], upper triangle column by column, off-diagonals scaled by sqrt(2).
        void push_psd(Stacked &st, const HermitianAffine &H)
        {
            const arma::uword n = H.size();
            auto entry = [&](arma::uword i, arma::uword j) -> LinearForm {
                const bool bi = i >= n, bj = j >= n;
                const ComplexAffine e = hermitian_entry(H, i % n, j % n);
                if (bi == bj)
                    return e.real();
                return bi ? e.imag() : -e.imag();
            };
            for (arma::uword j = 0; j < 2 * n; ++j)
                for (arma::uword i = 0; i <= j; ++i)
                    st.rows.push_back(i == j ? entry(i, j) : sqrt2 * entry(i, j));
            st.psd.push_back(2 * n);
        }

        Stacked stack_rows(const ConicProblem &problem)
        {
            Stacked st;
            for (const auto &e : problem.equalities)
                st.rows.push_back(e);
            st.zero = problem.equalities.size();
            for (const auto &e : problem.nonnegatives)
                st.rows.push_back(e);
            st.nonneg = problem.nonnegatives.size();
            for (const auto &q : problem.second_order_cones)
            {
                st.rows.push_back(q.t);
                for (const auto &x : q.x)
                    st.rows.push_back(x);
                st.soc.push_back(1 + q.x.size());
            }
            for (const auto &b : problem.psd_blocks)
                push_psd(st, b);
            for (const auto &e : problem.exp_cones)
            {
                st.rows.push_back(e.x);
                st.rows.push_back(e.y);
                st.rows.push_back(e.z);
            }
            st.exp = problem.exp_cones.size();
            return st;
        }

        // s = b - A x  with  s_i = const_i + a_i . x  =>  A_i = -a_i, b_i = const_i
        struct Csc
        {
            std::vector<double> values, b;
            std::vector<std::size_t> rows, colptr;
        };

        Csc build_csc(const std::vector<LinearForm> &stack, int n)
        {
            std::vector<std::tuple<int, std::size_t, double>> triplets; // (col, row, value)
            Csc out;
            out.b.resize(stack.size());
            for (std::size_t r = 0; r < stack.size(); ++r)
            {
                out.b[r] = stack[r].constant();
                for (const auto &[j, coef] : stack[r].terms())
                {
                    if (j < 0 || j >= n)
                        throw std::invalid_argument("conic solver: variable index out of range");
                    if (coef != 0.0)
                        triplets.emplace_back(j, r, -coef);
                }
            }
            std::sort(triplets.begin(), triplets.end());

            out.colptr.assign(std::size_t(n) + 1, 0);
            int prev_col = -1;
            std::size_t prev_row = 0;
            for (const auto &[col, row, v] : triplets)
            {
                if (col == prev_col && row == prev_row)
                {
                    out.values.back() += v;
                    continue;
                }
                out.values.push_back(v);
                out.rows.push_back(row);
                out.colptr[std::size_t(col) + 1]++;
                prev_col = col;
                prev_row = row;
            }
            for (int j = 0; j < n; ++j)
                out.colptr[std::size_t(j) + 1] += out.colptr[std::size_t(j)];
            return out;
        }

        std::vector<double> cost_vector(const ConicProblem &problem)
        {
            std::vector<double> c(std::size_t(problem.num_variables), 0.0);
            const double sense = problem.maximize ? -1.0 : 1.0;
            for (const auto &[j, coef] : problem.objective.terms())
                c[std::size_t(j)] = sense * coef;
            return c;
        }

        SolveStatus map_clarabel_status(int32_t code)
        {
            switch (code)
            {
            case CLARABEL_SOLVED:
                return SolveStatus::Solved;
            case CLARABEL_ALMOST_SOLVED:
                return SolveStatus::SolvedInaccurate;
            case CLARABEL_PRIMAL_INFEASIBLE:
                return SolveStatus::Infeasible;
            case CLARABEL_DUAL_INFEASIBLE:
                return SolveStatus::Unbounded;
            default:
                return SolveStatus::Failure;
            }
        }

        const char *clarabel_message(int32_t code)
        {
            switch (code)
            {
            case CLARABEL_SOLVED:
                return "solved";
            case CLARABEL_ALMOST_SOLVED:
                return "solved to reduced accuracy";
            case CLARABEL_PRIMAL_INFEASIBLE:
                return "primal infeasible";
            case CLARABEL_DUAL_INFEASIBLE:
                return "dual infeasible";
            case CLARABEL_MAX_ITERATIONS:
                return "iteration or time limit reached";
            default:
                return "numerical error or insufficient progress";
            }
        }
    } // namespace

    const char *to_string(SolveStatus status)
    {
        switch (status)
        {
        case SolveStatus::Solved:
            return "SOLVED";
        case SolveStatus::SolvedInaccurate:
            return "SOLVED_INACCURATE";
        case SolveStatus::Infeasible:
            return "INFEASIBLE";
        case SolveStatus::Unbounded:
            return "UNBOUNDED";
        case SolveStatus::Failure:
            return "SOLVER_FAILURE";
        }
        return "UNKNOWN";
    }

    ConicSolution ClarabelConicSolver::solve(const ConicProblem &problem, const ConicSettings &settings) const
    {
        const int n = problem.num_variables;
        if (n <= 0)
            throw std::invalid_argument("ClarabelConicSolver: problem has no variables");

        const Stacked st = stack_rows(problem);
        auto csc = build_csc(st.rows, n);
        std::vector<double> c = cost_vector(problem);
        const std::size_t m = st.rows.size();

        ClarabelCones cones{st.zero, st.nonneg, st.soc.data(), st.soc.size(), st.psd.data(), st.psd.size(), st.exp};
        ClarabelOptions opts{settings.eps_abs, settings.eps_rel, settings.eps_feas, uint32_t(settings.max_iters),
                             settings.time_limit_secs, uint8_t(settings.verbose ? 1 : 0),
                             uint8_t(settings.qdldl ? 1 : 0), settings.static_regularization,
                             settings.max_step_fraction, uint8_t(settings.equilibrate ? 1 : 0)};

        std::vector<double> x(std::size_t(n), 0.0), z(m, 0.0), s(m, 0.0);
        ClarabelResult res{};
        const int32_t rc = clarabel_capi_solve(std::size_t(n), m, csc.colptr.data(), csc.rows.data(), csc.values.data(),
                                               csc.b.data(), c.data(), &cones, &opts, x.data(), z.data(), s.data(), &res);

        ConicSolution out;
        out.x = arma::vec(x);
        if (rc != 0)
        {
            out.status = SolveStatus::Failure;
            out.message = "problem data rejected";
            return out;
        }
        out.status = map_clarabel_status(res.status);
        out.message = clarabel_message(res.status);
        out.iterations = int(res.iterations);
        out.solve_time_ms = 1e3 * res.solve_time;
        out.objective = problem.objective.evaluate(out.x);
        return out;
    }

    std::unique_ptr<ConicSolver> make_default_conic_solver() { return std::make_unique<ClarabelConicSolver>(); }

    double max_violation(const ConicProblem &problem, const arma::vec &x)
    {
        double worst = 0.0;
        for (const auto &e : problem.equalities)
            worst = std::max(worst, std::abs(e.evaluate(x)));
        for (const auto &e : problem.nonnegatives)
            worst = std::max(worst, -e.evaluate(x));
        for (const auto &q : problem.second_order_cones)
        {
            double n2 = 0.0;
            for (const auto &v : q.x)
                n2 += std::pow(v.evaluate(x), 2);
            worst = std::max(worst, std::sqrt(n2) - q.t.evaluate(x));
        }
        for (const auto &b : problem.psd_blocks)
        {
            const arma::cx_mat M = b.evaluate(x);
            worst = std::max(worst, -arma::eig_sym(M).min());
        }
        for (const auto &e : problem.exp_cones)
        {
            const double xv = e.x.evaluate(x), yv = e.y.evaluate(x), zv = e.z.evaluate(x);
            if (yv > 0.0)
                worst = std::max(worst, yv * std::exp(xv / yv) - zv);
            else
                worst = std::max(worst, std::max(-yv, xv > 0.0 ? xv : 0.0));
        }
        return worst;
    }

} // namespace dualrobust
