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

//! C entry point for the Clarabel interior-point solver: minimise q'x subject to Ax + s = b, s in K, with K a
//! product of zero, nonnegative, second-order, PSD-triangle and exponential cones in that order.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};
use std::slice;

#[repr(C)]
pub struct ClarabelCones {
    pub zero: usize,
    pub nonneg: usize,
    pub soc: *const usize,
    pub num_soc: usize,
    pub psd: *const usize,
    pub num_psd: usize,
    pub exp: usize,
}

#[repr(C)]
pub struct ClarabelOptions {
    pub tol_gap_abs: f64,
    pub tol_gap_rel: f64,
    pub tol_feas: f64,
    pub max_iter: u32,
    pub time_limit: f64,
    pub verbose: u8,
    pub direct_solver: u8,       // 0 faer, 1 qdldl
    pub static_reg: f64,         // <= 0 keeps the default
    pub max_step_fraction: f64,  // <= 0 keeps the default
    pub equilibrate: u8,
}

#[repr(C)]
pub struct ClarabelResult {
    pub status: i32,
    pub iterations: u32,
    pub solve_time: f64,
    pub obj_val: f64,
    pub r_prim: f64,
    pub r_dual: f64,
}

// Status codes seen from C.
pub const CLARABEL_SOLVED: i32 = 1;
pub const CLARABEL_ALMOST_SOLVED: i32 = 2;
pub const CLARABEL_PRIMAL_INFEASIBLE: i32 = 3;
pub const CLARABEL_DUAL_INFEASIBLE: i32 = 4;
pub const CLARABEL_MAX_ITERATIONS: i32 = 5;
pub const CLARABEL_OTHER: i32 = 6;

fn status_code(s: SolverStatus) -> i32 {
    match s {
        SolverStatus::Solved => CLARABEL_SOLVED,
        SolverStatus::AlmostSolved => CLARABEL_ALMOST_SOLVED,
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => CLARABEL_PRIMAL_INFEASIBLE,
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => CLARABEL_DUAL_INFEASIBLE,
        SolverStatus::MaxIterations | SolverStatus::MaxTime => CLARABEL_MAX_ITERATIONS,
        _ => CLARABEL_OTHER,
    }
}

/// Returns 0 when the solver ran (see `result.status`), -1 when the data or settings were rejected.
///
/// # Safety
/// All pointers must be valid for the lengths implied by `n`, `m` and `colptr[n]`; `x` has room for `n`
/// values, `z` and `s` for `m`.
#[no_mangle]
pub unsafe extern "C" fn clarabel_capi_solve(
    n: usize,
    m: usize,
    colptr: *const usize,
    rowval: *const usize,
    nzval: *const f64,
    b: *const f64,
    q: *const f64,
    cones: *const ClarabelCones,
    opts: *const ClarabelOptions,
    x: *mut f64,
    z: *mut f64,
    s: *mut f64,
    result: *mut ClarabelResult,
) -> i32 {
    let colptr = slice::from_raw_parts(colptr, n + 1).to_vec();
    let nnz = colptr[n];
    let a = CscMatrix::new(
        m,
        n,
        colptr,
        slice::from_raw_parts(rowval, nnz).to_vec(),
        slice::from_raw_parts(nzval, nnz).to_vec(),
    );
    let p = CscMatrix::<f64>::zeros((n, n));
    let b = slice::from_raw_parts(b, m);
    let q = slice::from_raw_parts(q, n);

    let c = &*cones;
    let mut k: Vec<SupportedConeT<f64>> = Vec::new();
    if c.zero > 0 {
        k.push(SupportedConeT::ZeroConeT(c.zero));
    }
    if c.nonneg > 0 {
        k.push(SupportedConeT::NonnegativeConeT(c.nonneg));
    }
    if c.num_soc > 0 {
        for &d in slice::from_raw_parts(c.soc, c.num_soc) {
            k.push(SupportedConeT::SecondOrderConeT(d));
        }
    }
    if c.num_psd > 0 {
        for &d in slice::from_raw_parts(c.psd, c.num_psd) {
            k.push(SupportedConeT::PSDTriangleConeT(d));
        }
    }
    for _ in 0..c.exp {
        k.push(SupportedConeT::ExponentialConeT());
    }

    let o = &*opts;
    let mut builder = DefaultSettingsBuilder::<f64>::default();
    builder
        .tol_gap_abs(o.tol_gap_abs)
        .tol_gap_rel(o.tol_gap_rel)
        .tol_feas(o.tol_feas)
        .max_iter(o.max_iter)
        .verbose(o.verbose != 0)
        .presolve_enable(false)
        .chordal_decomposition_enable(false)
        .direct_solve_method(if o.direct_solver == 1 { "qdldl" } else { "faer" }.to_string())
        .equilibrate_enable(o.equilibrate != 0)
        .max_threads(1);
    if o.static_reg > 0.0 {
        builder.static_regularization_constant(o.static_reg);
    }
    if o.max_step_fraction > 0.0 {
        builder.max_step_fraction(o.max_step_fraction);
    }
    if o.time_limit > 0.0 {
        builder.time_limit(o.time_limit);
    }
    let settings = match builder.build() {
        Ok(st) => st,
        Err(_) => return -1,
    };

    let mut solver = match DefaultSolver::new(&p, q, &a, b, &k, settings) {
        Ok(sv) => sv,
        Err(_) => return -1,
    };
    solver.solve();

    let sol = &solver.solution;
    slice::from_raw_parts_mut(x, n).copy_from_slice(&sol.x);
    slice::from_raw_parts_mut(z, m).copy_from_slice(&sol.z);
    slice::from_raw_parts_mut(s, m).copy_from_slice(&sol.s);
    let r = &mut *result;
    r.status = status_code(sol.status);
    r.iterations = sol.iterations;
    r.solve_time = sol.solve_time;
    r.obj_val = sol.obj_val;
    r.r_prim = sol.r_prim;
    r.r_dual = sol.r_dual;
    0
}
