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

#include "dualrobust/baselines.hpp"

#include <cmath>

namespace dualrobust
{
    const char *to_string(BaselineKind kind)
    {
        return kind == BaselineKind::NonRobust ? "nonrobust" : "svm";
    }

    Beamformer svm_design(const ProblemInstance &instance, double power_budget)
    {
        const arma::uword N = instance.geometry.num_antennas();
        const arma::uword K = instance.num_users(), L = instance.num_columns();
        if (instance.user_angles.size() != K)
            throw std::invalid_argument("svm_design: one estimated angle per user is required");
        if (!(power_budget > 0.0))
            throw std::invalid_argument("svm_design: power budget must be positive");

        const double amp = std::sqrt(power_budget / (double(L) * double(N)));
        arma::cx_mat W(N, L);
        for (arma::uword k = 0; k < K; ++k)
            W.col(k) = amp * steering_vector(instance.user_angles[k], instance.geometry);
        for (arma::uword m = 0; m < instance.num_targets(); ++m)
            W.col(K + m) = amp * steering_vector(instance.targets[m].midpoint(), instance.geometry);
        return Beamformer(W, K);
    }

    ProblemInstance nominal_instance(const ProblemInstance &instance)
    {
        ProblemInstance out = instance;
        for (auto &r : out.channels.radii)
            r = 0.0;
        for (auto &t : out.targets)
            t = AngleInterval::centered(t.midpoint(), 0.0);
        return out;
    }

    DesignResult non_robust_design(const ProblemInstance &instance, const RunConfig &config,
                                   const ConicSolver &solver)
    {
        RunConfig c = config;
        c.hull_samples = 1;
        return outer_loop(nominal_instance(instance), c, solver);
    }

    DesignResult non_robust_design(const ProblemInstance &instance, const RunConfig &config)
    {
        const auto solver = make_default_conic_solver();
        return non_robust_design(instance, config, *solver);
    }

} // namespace dualrobust
