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

#ifndef dualrobust_baselines_H
#define dualrobust_baselines_H

#include "dualrobust/solver.hpp"

namespace dualrobust
{
    enum class BaselineKind
    {
        NonRobust,
        Svm
    };

    const char *to_string(BaselineKind kind);

    // Column j = a(theta_j) sqrt(P0 / ((K + M) N)) towards the user estimates and the target midpoints.
    Beamformer svm_design(const ProblemInstance &instance, double power_budget);

    // The instance with every error radius set to 0 and every target interval collapsed to its midpoint.
    ProblemInstance nominal_instance(const ProblemInstance &instance);

    // Same pipeline as the robust design on the nominal instance with one hull sample per target.
    DesignResult non_robust_design(const ProblemInstance &instance, const RunConfig &config,
                                   const ConicSolver &solver);
    DesignResult non_robust_design(const ProblemInstance &instance, const RunConfig &config);

} // namespace dualrobust

#endif
