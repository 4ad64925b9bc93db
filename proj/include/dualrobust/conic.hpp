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

#ifndef dualrobust_conic_H
#define dualrobust_conic_H

#include "dualrobust/affine.hpp"

#include <memory>
#include <string>
#include <vector>

namespace dualrobust
{
    // ||x||_2 <= t
    struct SecondOrderCone
    {
        LinearForm t;
        std::vector<LinearForm> x;
    };

    // y exp(x / y) <= z, y > 0
    struct ExpConeTriple
    {
        LinearForm x, y, z;
    };

    // Conic program over a real decision vector:
    //   optimise objective(x)  s.t.  equalities == 0, nonnegatives >= 0, SOCs, Hermitian PSD blocks, exp cones.
    struct ConicProblem
    {
        int num_variables = 0;
        LinearForm objective;
        bool maximize = true;
        std::vector<LinearForm> equalities;
        std::vector<LinearForm> nonnegatives;
        std::vector<SecondOrderCone> second_order_cones;
        std::vector<HermitianAffine> psd_blocks;
        std::vector<ExpConeTriple> exp_cones;

    };

    enum class SolveStatus
    {
        Solved,
        SolvedInaccurate,
        Infeasible,
        Unbounded,
        Failure
    };

    const char *to_string(SolveStatus status);

    struct ConicSettings
    {
        double eps_abs = 1e-7;
        double eps_rel = 1e-7;
        double eps_feas = 1e-7;
        int max_iters = 200;
        double time_limit_secs = 0.0; // 0 = none
        bool verbose = false;
        bool qdldl = false;              // direct solver: faer supernodal LDL unless set
        double static_regularization = 0.0; // 0 = backend default
        double max_step_fraction = 0.0;     // 0 = backend default
        bool equilibrate = true;
    };

    struct ConicSolution
    {
        SolveStatus status = SolveStatus::Failure;
        arma::vec x;
        double objective = 0.0; // in the problem's own sense (max or min)
        int iterations = 0;
        double solve_time_ms = 0.0;
        std::string message;

        bool ok() const { return status == SolveStatus::Solved || status == SolveStatus::SolvedInaccurate; }
    };

    // Capability: linear objective with zero, nonnegative, second-order, Hermitian PSD and exponential cones.
    // Implementations keep no state between calls, so one instance may serve concurrent solves.
    class ConicSolver
    {
    public:
        virtual ~ConicSolver() = default;
        virtual ConicSolution solve(const ConicProblem &problem, const ConicSettings &settings) const = 0;
        virtual std::string name() const = 0;
    };

    // Primal-dual interior-point solver (Clarabel). Hermitian blocks enter through their real embedding
    // [[Re, -Im], [Im, Re]].
    class ClarabelConicSolver : public ConicSolver
    {
    public:
        ConicSolution solve(const ConicProblem &problem, const ConicSettings &settings) const override;
        std::string name() const override { return "clarabel"; }
    };

    std::unique_ptr<ConicSolver> make_default_conic_solver();

    // Most negative constraint violation of x (0 when feasible). PSD blocks report -eigmin.
    double max_violation(const ConicProblem &problem, const arma::vec &x);

} // namespace dualrobust

#endif
