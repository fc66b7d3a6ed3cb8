//! Minimal convex-solver interface: minimise `c·x` subject to
//! `b - A x ∈ K`, where `K` is a product of nonnegative orthants and
//! second-order cones. The default backend is Clarabel's interior-point
//! method; any implementation of [`ConvexSolver`] can be substituted.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, NonnegativeConeT, SecondOrderConeT,
    SolverStatus, SupportedConeT,
};

use crate::error::{HardyError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeBlock {
    NonNegative(usize),
    /// `(s_0, s_1, ..., s_{d-1})` with `s_0 >= ‖(s_1, ..., s_{d-1})‖₂`.
    SecondOrder(usize),
}

impl ConeBlock {
    pub fn dim(&self) -> usize {
        match *self {
            ConeBlock::NonNegative(d) | ConeBlock::SecondOrder(d) => d,
        }
    }
}

/// A conic program in column-compressed form.
#[derive(Debug, Clone)]
pub struct ConeProgram {
    pub objective: Vec<f64>,
    /// Column `j` of `A` as `(row, value)` pairs with strictly increasing rows.
    pub columns: Vec<Vec<(usize, f64)>>,
    pub rhs: Vec<f64>,
    pub cones: Vec<ConeBlock>,
}

impl ConeProgram {
    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rhs.len()
    }

    fn validate(&self) -> Result<()> {
        if self.columns.len() != self.n_vars() {
            return Err(HardyError::Solver("column count differs from objective length".into()));
        }
        let cone_rows: usize = self.cones.iter().map(ConeBlock::dim).sum();
        if cone_rows != self.n_rows() {
            return Err(HardyError::Solver(format!(
                "cones cover {cone_rows} rows, program has {}",
                self.n_rows()
            )));
        }
        for col in &self.columns {
            if col.windows(2).any(|w| w[0].0 >= w[1].0) || col.iter().any(|e| e.0 >= self.n_rows()) {
                return Err(HardyError::Solver("column rows unsorted or out of range".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Solved,
    /// Converged to reduced accuracy; results remain usable with their
    /// certificates recomputed by the caller.
    ReducedAccuracy,
}

#[derive(Debug, Clone)]
pub struct ConeSolution {
    pub x: Vec<f64>,
    /// Dual variables, one per row, in the dual cone.
    pub z: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub status: SolveStatus,
    pub iterations: u32,
}

pub trait ConvexSolver: Send + Sync {
    fn solve(&self, program: &ConeProgram) -> Result<ConeSolution>;

    /// Requested relative accuracy.
    fn tolerance(&self) -> f64;
}

/// Interior-point backend. A fresh solver instance is created per call, so a
/// single value can be shared between threads.
#[derive(Debug, Clone, Copy)]
pub struct ClarabelSolver {
    pub tol: f64,
    pub max_iter: u32,
}

impl Default for ClarabelSolver {
    fn default() -> Self {
        ClarabelSolver {
            tol: 1e-9,
            max_iter: 200,
        }
    }
}

impl ClarabelSolver {
    pub fn with_tolerance(tol: f64) -> Self {
        ClarabelSolver {
            tol,
            ..Self::default()
        }
    }
}

impl ConvexSolver for ClarabelSolver {
    fn solve(&self, program: &ConeProgram) -> Result<ConeSolution> {
        program.validate()?;
        let n = program.n_vars();
        let m = program.n_rows();

        let mut colptr = Vec::with_capacity(n + 1);
        let mut rowval = Vec::new();
        let mut nzval = Vec::new();
        colptr.push(0);
        for col in &program.columns {
            for &(row, value) in col {
                rowval.push(row);
                nzval.push(value);
            }
            colptr.push(rowval.len());
        }
        let a = CscMatrix::new(m, n, colptr, rowval, nzval);
        let p = CscMatrix::zeros((n, n));

        // merge runs of orthant blocks; the solver handles one large orthant
        // far better than many small ones
        let mut cones: Vec<SupportedConeT<f64>> = Vec::with_capacity(program.cones.len());
        for block in &program.cones {
            match (*block, cones.last_mut()) {
                (ConeBlock::NonNegative(d), Some(NonnegativeConeT(prev))) => *prev += d,
                (ConeBlock::NonNegative(d), _) => cones.push(NonnegativeConeT(d)),
                (ConeBlock::SecondOrder(d), _) => cones.push(SecondOrderConeT(d)),
            }
        }

        let settings = DefaultSettingsBuilder::default()
            .verbose(false)
            .max_iter(self.max_iter)
            .tol_gap_abs(self.tol)
            .tol_gap_rel(self.tol)
            .tol_feas(self.tol)
            .build()
            .map_err(|e| HardyError::Solver(format!("settings: {e:?}")))?;

        let mut solver = DefaultSolver::new(&p, &program.objective, &a, &program.rhs, &cones, settings)
            .map_err(|e| HardyError::Solver(format!("setup: {e:?}")))?;
        solver.solve();
        let sol = &solver.solution;
        let status = match sol.status {
            SolverStatus::Solved => SolveStatus::Solved,
            SolverStatus::AlmostSolved
            | SolverStatus::MaxIterations
            | SolverStatus::InsufficientProgress => SolveStatus::ReducedAccuracy,
            other => return Err(HardyError::Solver(format!("status {other:?}"))),
        };
        if sol.x.iter().any(|v| !v.is_finite()) {
            return Err(HardyError::Solver("non-finite primal solution".into()));
        }
        Ok(ConeSolution {
            x: sol.x.clone(),
            z: sol.z.clone(),
            primal_objective: sol.obj_val,
            dual_objective: sol.obj_val_dual,
            status,
            iterations: sol.iterations,
        })
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lp() {
        // minimise -x - y subject to x + 2y <= 4, 3x + y <= 6, x, y >= 0; optimum (1.6, 1.2)
        let program = ConeProgram {
            objective: vec![-1.0, -1.0],
            columns: vec![
                vec![(0, 1.0), (1, 3.0), (2, -1.0)],
                vec![(0, 2.0), (1, 1.0), (3, -1.0)],
            ],
            rhs: vec![4.0, 6.0, 0.0, 0.0],
            cones: vec![ConeBlock::NonNegative(2), ConeBlock::NonNegative(2)],
        };
        let sol = ClarabelSolver::default().solve(&program).unwrap();
        assert!((sol.x[0] - 1.6).abs() < 1e-7);
        assert!((sol.x[1] - 1.2).abs() < 1e-7);
        assert!((sol.primal_objective + 2.8).abs() < 1e-7);
        assert!((sol.dual_objective + 2.8).abs() < 1e-7);
    }

    #[test]
    fn small_socp() {
        // minimise t subject to t >= |(3 - x, 4)|: optimum t = 4 at x = 3
        let program = ConeProgram {
            objective: vec![1.0, 0.0],
            columns: vec![vec![(0, -1.0)], vec![(1, 1.0)]],
            rhs: vec![0.0, 3.0, 4.0],
            cones: vec![ConeBlock::SecondOrder(3)],
        };
        let sol = ClarabelSolver::default().solve(&program).unwrap();
        assert!((sol.x[0] - 4.0).abs() < 1e-7);
        assert!((sol.x[1] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_malformed_program() {
        let program = ConeProgram {
            objective: vec![1.0],
            columns: vec![vec![(1, 1.0), (0, 1.0)]],
            rhs: vec![0.0, 0.0],
            cones: vec![ConeBlock::NonNegative(2)],
        };
        assert!(ClarabelSolver::default().solve(&program).is_err());
    }
}
