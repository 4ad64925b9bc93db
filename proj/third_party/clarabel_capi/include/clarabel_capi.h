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

#ifndef clarabel_capi_H
#define clarabel_capi_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct
{
    size_t zero;
    size_t nonneg;
    const size_t *soc;
    size_t num_soc;
    const size_t *psd; // PSD-triangle cone dimensions (matrix side n, n(n+1)/2 rows each)
    size_t num_psd;
    size_t exp;
} ClarabelCones;

typedef struct
{
    double tol_gap_abs;
    double tol_gap_rel;
    double tol_feas;
    uint32_t max_iter;
    double time_limit; // seconds, <= 0 for none
    uint8_t verbose;
    uint8_t direct_solver;    // 0 faer, 1 qdldl
    double static_reg;        // <= 0 keeps the default
    double max_step_fraction; // <= 0 keeps the default
    uint8_t equilibrate;
} ClarabelOptions;

typedef struct
{
    int32_t status;
    uint32_t iterations;
    double solve_time; // seconds
    double obj_val;
    double r_prim;
    double r_dual;
} ClarabelResult;

enum
{
    CLARABEL_SOLVED = 1,
    CLARABEL_ALMOST_SOLVED = 2,
    CLARABEL_PRIMAL_INFEASIBLE = 3,
    CLARABEL_DUAL_INFEASIBLE = 4,
    CLARABEL_MAX_ITERATIONS = 5,
    CLARABEL_OTHER = 6
};

// minimise q'x  s.t.  A x + s = b,  s in K (zero, nonnegative, SOC, PSD triangle, exp; in that order).
// A is CSC with m rows and n columns. Returns 0 when the solver ran, -1 when it rejected the input.
int32_t clarabel_capi_solve(size_t n, size_t m, const size_t *colptr, const size_t *rowval, const double *nzval,
                            const double *b, const double *q, const ClarabelCones *cones,
                            const ClarabelOptions *opts, double *x, double *z, double *s, ClarabelResult *result);

#ifdef __cplusplus
}
#endif

#endif
