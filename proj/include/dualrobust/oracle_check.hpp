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

#ifndef dualrobust_oracle_check_H
#define dualrobust_oracle_check_H

#include <cstdint>
#include <string>
#include <vector>

namespace dualrobust
{
    struct OracleCheck
    {
        std::string name;
        bool passed = false;
        double worst = 0.0;     // worst observed error (relative unless stated in detail)
        double tolerance = 0.0;
        std::string detail;
    };

    struct OracleCheckOptions
    {
        int instances = 100;
        unsigned long samples = 100000; // draws per ball for the sampling oracles
        std::uint64_t seed = 2026;
        bool include_solve = true;      // the matched-filter comparison runs the full solver
    };

    // Library evaluations against the independent reference implementations on random instances.
    std::vector<OracleCheck> run_oracle_checks(const OracleCheckOptions &options = {});

} // namespace dualrobust

#endif
