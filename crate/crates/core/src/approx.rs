//! Best approximation by polynomials in `H^q`, `q ∈ {1, 2, ∞}`, and the mixed
//! distance `𝓔_N(f)_1` to `P_{N-1} + conj(H^1_0)`.
//!
//! `q = 2` is solved in closed form. For `q ∈ {1, ∞}` the problem is
//! discretised on a uniform circle grid and handed to a [`ConvexSolver`].
//! Every solve carries a lower bound built from the solver's dual variables:
//! a grid measure `c` annihilating the approximating frequencies gives
//! `|Σ c_j f_j| / Σ|c_j|` (sup norm) or `|Σ c_j f_j| / (M max|c_j|)` (mean
//! norm), valid for any `c`, so the bound does not rely on solver accuracy.

use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::kernels::{apply_operator, certify_bap, KernelForm, KernelSpec, SweepConfig};
use crate::series::{
    check_grid_size, dft, hardy_norm, sample_boundary, BoundaryGrid, HardyExponent, PowerSeries, C64,
};
use crate::solver::{ClarabelSolver, ConeBlock, ConeProgram, ConvexSolver, SolveStatus};
use crate::special::{ClosedForm, FamilyKind, TestFunction};

pub const DEFAULT_DIRECTIONS: usize = 64;
pub const DEFAULT_NEG_DEGREE: usize = 64;
pub const DEFAULT_INTERIOR_RADIUS: f64 = 1.0 - 1e-4;
/// Above this order the monomial basis is reported as ill-conditioned.
pub const ILL_CONDITIONED_ORDER: usize = 50;

/// How the modulus `|w| <= t` enters the discrete program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linearization {
    /// Exact second-order cone constraints.
    Conic,
    /// `D` rotated half-planes `Re(e^{-iφ_d} w) <= t`; the optimum of the
    /// linear program lies in `[cos(π/D), 1]` times the exact optimum.
    Polygon { directions: usize },
}

impl Linearization {
    pub fn directions(&self) -> usize {
        match *self {
            Linearization::Conic => 0,
            Linearization::Polygon { directions } => directions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveOptions {
    pub m_grid: usize,
    pub linearization: Linearization,
    pub tol: f64,
    /// Radius used for inputs that cannot be evaluated on the unit circle.
    pub interior_radius: f64,
    /// Truncation `M⁻` of the conjugate-analytic part in the mixed problem.
    pub neg_degree: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            m_grid: crate::series::DEFAULT_GRID,
            linearization: Linearization::Conic,
            tol: 1e-9,
            interior_radius: DEFAULT_INTERIOR_RADIUS,
            neg_degree: DEFAULT_NEG_DEGREE,
        }
    }
}

impl SolveOptions {
    pub fn polygon(directions: usize) -> Self {
        SolveOptions {
            linearization: Linearization::Polygon { directions },
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        check_grid_size(self.m_grid)?;
        if let Linearization::Polygon { directions } = self.linearization {
            if directions < 3 {
                return Err(HardyError::InvalidArgument(format!(
                    "polygon linearization needs at least 3 directions, got {directions}"
                )));
            }
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(HardyError::InvalidArgument(format!("tolerance {} out of range", self.tol)));
        }
        if !(self.interior_radius > 0.0 && self.interior_radius <= 1.0) {
            return Err(HardyError::Radius(self.interior_radius));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxResult {
    /// Discrete norm of `f` minus the returned approximant.
    pub value: f64,
    pub lower_bound: f64,
    pub gap: f64,
    pub grid_size: usize,
    /// Number of half-planes in the polygon linearization; 0 when exact.
    pub directions: usize,
    /// Optimal `p`, degree below `n`.
    pub approximant: PowerSeries,
    /// Mixed problem only: coefficients of `h ∈ H^1_0` (index 0 is zero);
    /// the approximating function is `p + conj(h)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugate_part: Option<PowerSeries>,
    pub q: HardyExponent,
    pub n: usize,
    pub radius: f64,
    pub linearization: Linearization,
    /// Optimum of the polygon program and its `sec(π/D)` inflation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inflated_value: Option<f64>,
    /// Mixed problem only: value with half the conjugate truncation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<f64>,
    pub solver_tolerance: f64,
    pub warnings: Vec<String>,
}

/// Anything `best_approx` can consume.
#[derive(Debug, Clone, Copy)]
pub enum ApproxInput<'a> {
    Grid(&'a BoundaryGrid),
    Series(&'a PowerSeries),
    Function(&'a TestFunction),
}

impl<'a> From<&'a BoundaryGrid> for ApproxInput<'a> {
    fn from(g: &'a BoundaryGrid) -> Self {
        ApproxInput::Grid(g)
    }
}

impl<'a> From<&'a PowerSeries> for ApproxInput<'a> {
    fn from(f: &'a PowerSeries) -> Self {
        ApproxInput::Series(f)
    }
}

impl<'a> From<&'a TestFunction> for ApproxInput<'a> {
    fn from(f: &'a TestFunction) -> Self {
        ApproxInput::Function(f)
    }
}

impl ApproxInput<'_> {
    /// Boundary samples, on the unit circle when the input allows it.
    fn grid(&self, opts: &SolveOptions, warnings: &mut Vec<String>) -> Result<BoundaryGrid> {
        let (grid, regular) = match *self {
            ApproxInput::Grid(g) => {
                check_grid_size(g.m_grid())?;
                if g.m_grid() != opts.m_grid {
                    warnings.push(format!(
                        "grid has {} samples; options ask for {}",
                        g.m_grid(),
                        opts.m_grid
                    ));
                }
                (g.clone(), true)
            }
            ApproxInput::Series(f) => sample_regular(f, f.is_boundary_regular(), opts)?,
            ApproxInput::Function(f) => {
                use crate::series::DiscFunction;
                sample_regular(f, f.boundary_regular(), opts)?
            }
        };
        if !regular || grid.radius() < 1.0 {
            warnings.push(format!(
                "solved on the circle of radius {}; the value approximates the boundary value with a radius bias",
                grid.radius()
            ));
        }
        Ok(grid)
    }
}

fn sample_regular<F: crate::series::DiscFunction + ?Sized>(
    f: &F,
    regular: bool,
    opts: &SolveOptions,
) -> Result<(BoundaryGrid, bool)> {
    let r = if regular { 1.0 } else { opts.interior_radius };
    Ok((sample_boundary(f, r, opts.m_grid)?, regular))
}

/// Result of one discrete fit.
struct Fit {
    /// Coefficient of each basis frequency.
    coeffs: Vec<C64>,
    value: f64,
    lower_bound: f64,
    lp_value: Option<f64>,
    status: SolveStatus,
}

#[derive(Clone, Copy, PartialEq)]
enum DiscreteNorm {
    Mean,
    Max,
}

/// `e^{ikθ_j}` with the angle reduced exactly on the grid.
fn unit_root(k: i64, j: usize, m: usize) -> C64 {
    let idx = (k.rem_euclid(m as i64) as usize * j) % m;
    C64::from_polar(1.0, 2.0 * PI * idx as f64 / m as f64)
}

/// Minimises the discrete norm of `f - Σ_k u_k r^{|k|} e^{ikθ}` over complex
/// `u_k`, `k ∈ freqs`.
fn discrete_fit(
    solver: &dyn ConvexSolver,
    grid: &BoundaryGrid,
    freqs: &[i64],
    norm: DiscreteNorm,
    lin: Linearization,
) -> Result<Fit> {
    let m = grid.m_grid();
    let r = grid.radius();
    // normalise by the largest sample so that c·f and f give the same program
    let pivot = grid
        .samples()
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or_default();
    if pivot.norm() == 0.0 {
        return Ok(Fit {
            coeffs: vec![C64::new(0.0, 0.0); freqs.len()],
            value: 0.0,
            lower_bound: 0.0,
            lp_value: lin.directions().gt(&0).then_some(0.0),
            status: SolveStatus::Solved,
        });
    }
    let g: Vec<C64> = grid.samples().iter().map(|&s| s / pivot).collect();
    let basis: Vec<Vec<C64>> = freqs
        .iter()
        .map(|&k| {
            let rk = r.powi(k.unsigned_abs() as i32);
            (0..m).map(|j| rk * unit_root(k, j, m)).collect()
        })
        .collect();

    let nb = freqs.len();
    let slack_vars = match norm {
        DiscreteNorm::Max => 1,
        DiscreteNorm::Mean => m,
    };
    let slack_of = |j: usize| match norm {
        DiscreteNorm::Max => 2 * nb,
        DiscreteNorm::Mean => 2 * nb + j,
    };
    let mut objective = vec![0.0; 2 * nb + slack_vars];
    for v in &mut objective[2 * nb..] {
        *v = match norm {
            DiscreteNorm::Max => 1.0,
            DiscreteNorm::Mean => 1.0 / m as f64,
        };
    }
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); objective.len()];
    let mut rhs = Vec::new();
    let cones;
    let phases: Vec<C64>;
    match lin {
        Linearization::Conic => {
            phases = Vec::new();
            rhs.reserve(3 * m);
            for (j, gj) in g.iter().enumerate() {
                columns[slack_of(j)].push((3 * j, -1.0));
                for (i, b) in basis.iter().enumerate() {
                    let bj = b[j];
                    columns[2 * i].extend([(3 * j + 1, bj.re), (3 * j + 2, bj.im)]);
                    columns[2 * i + 1].extend([(3 * j + 1, -bj.im), (3 * j + 2, bj.re)]);
                }
                rhs.extend([0.0, gj.re, gj.im]);
            }
            cones = vec![ConeBlock::SecondOrder(3); m];
        }
        Linearization::Polygon { directions } => {
            phases = (0..directions)
                .map(|d| C64::from_polar(1.0, -2.0 * PI * d as f64 / directions as f64))
                .collect();
            rhs.reserve(m * directions);
            for (j, gj) in g.iter().enumerate() {
                for (d, e) in phases.iter().enumerate() {
                    let row = j * directions + d;
                    columns[slack_of(j)].push((row, -1.0));
                    for (i, b) in basis.iter().enumerate() {
                        let u = e * b[j];
                        columns[2 * i].push((row, -u.re));
                        columns[2 * i + 1].push((row, u.im));
                    }
                    rhs.push(-(e * gj).re);
                }
            }
            cones = vec![ConeBlock::NonNegative(m * directions)];
        }
    }
    let program = ConeProgram {
        objective,
        columns,
        rhs,
        cones,
    };
    let sol = solver.solve(&program)?;

    let coeffs: Vec<C64> = (0..nb).map(|i| C64::new(sol.x[2 * i], sol.x[2 * i + 1])).collect();
    let residual: Vec<C64> = (0..m)
        .map(|j| g[j] - basis.iter().zip(&coeffs).map(|(b, u)| b[j] * u).sum::<C64>())
        .collect();
    let value = match norm {
        DiscreteNorm::Max => residual.iter().map(|w| w.norm()).fold(0.0, f64::max),
        DiscreteNorm::Mean => residual.iter().map(|w| w.norm()).sum::<f64>() / m as f64,
    };

    // grid measure from the duals, made orthogonal to every basis frequency
    let mut c: Vec<C64> = match lin {
        Linearization::Conic => (0..m)
            .map(|j| C64::new(sol.z[3 * j + 1], -sol.z[3 * j + 2]))
            .collect(),
        Linearization::Polygon { directions } => (0..m)
            .map(|j| {
                phases
                    .iter()
                    .enumerate()
                    .map(|(d, e)| sol.z[j * directions + d] * e)
                    .sum()
            })
            .collect(),
    };
    for &k in freqs {
        let moment: C64 = c.iter().enumerate().map(|(j, cj)| cj * unit_root(k, j, m)).sum::<C64>()
            / m as f64;
        for (j, cj) in c.iter_mut().enumerate() {
            *cj -= moment * unit_root(-k, j, m);
        }
    }
    let pairing = c.iter().zip(&g).map(|(cj, gj)| cj * gj).sum::<C64>().norm();
    let lower_bound = match norm {
        DiscreteNorm::Max => {
            let mass: f64 = c.iter().map(|z| z.norm()).sum();
            if mass > 0.0 { pairing / mass } else { 0.0 }
        }
        DiscreteNorm::Mean => {
            let peak = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if peak > 0.0 { pairing / (m as f64 * peak) } else { 0.0 }
        }
    };

    let scale = pivot.norm();
    Ok(Fit {
        coeffs: coeffs.into_iter().map(|u| u * pivot).collect(),
        value: value * scale,
        lower_bound: lower_bound.min(value) * scale,
        lp_value: lin.directions().gt(&0).then_some(sol.primal_objective * scale),
        status: sol.status,
    })
}

fn push_order_warning(n: usize, warnings: &mut Vec<String>) {
    if n > ILL_CONDITIONED_ORDER {
        warnings.push(format!(
            "order {n} exceeds {ILL_CONDITIONED_ORDER}; the monomial basis is ill-conditioned"
        ));
    }
}

fn log_warnings(warnings: &[String]) {
    for w in warnings {
        warn!("{w}");
    }
}

/// `E_n(f)_q` with the default interior-point solver.
pub fn best_approx<'a>(
    f: impl Into<ApproxInput<'a>>,
    n: usize,
    q: HardyExponent,
    opts: &SolveOptions,
) -> Result<ApproxResult> {
    best_approx_with(&ClarabelSolver::with_tolerance(opts.tol), f, n, q, opts)
}

/// `E_n(f)_q` with a caller-supplied solver.
pub fn best_approx_with<'a>(
    solver: &dyn ConvexSolver,
    f: impl Into<ApproxInput<'a>>,
    n: usize,
    q: HardyExponent,
    opts: &SolveOptions,
) -> Result<ApproxResult> {
    opts.validate()?;
    let input = f.into();
    let mut warnings = Vec::new();
    push_order_warning(n, &mut warnings);

    let result = match q {
        HardyExponent::Two => l2_approx(input, n, opts, warnings)?,
        _ => {
            let grid = input.grid(opts, &mut warnings)?;
            if 2 * n >= grid.m_grid() {
                return Err(HardyError::InvalidArgument(format!(
                    "order {n} needs a grid of more than {} samples",
                    2 * n
                )));
            }
            let base = ApproxResult {
                value: 0.0,
                lower_bound: 0.0,
                gap: 0.0,
                grid_size: grid.m_grid(),
                directions: 0,
                approximant: PowerSeries::zero(),
                conjugate_part: None,
                q,
                n,
                radius: grid.radius(),
                linearization: opts.linearization,
                lp_value: None,
                inflated_value: None,
                convergence: None,
                solver_tolerance: solver.tolerance(),
                warnings,
            };
            if n == 0 {
                let value = hardy_norm(&grid, q)?;
                ApproxResult {
                    value,
                    lower_bound: value,
                    linearization: Linearization::Conic,
                    ..base
                }
            } else {
                let norm = if q == HardyExponent::One {
                    DiscreteNorm::Mean
                } else {
                    DiscreteNorm::Max
                };
                let freqs: Vec<i64> = (0..n as i64).collect();
                let fit = discrete_fit(solver, &grid, &freqs, norm, opts.linearization)?;
                finish_fit(base, fit, opts.linearization, n)
            }
        }
    };
    log_warnings(&result.warnings);
    Ok(result)
}

fn finish_fit(mut base: ApproxResult, fit: Fit, lin: Linearization, n: usize) -> ApproxResult {
    if fit.status == SolveStatus::ReducedAccuracy {
        base.warnings
            .push("solver stopped at reduced accuracy; the lower bound remains valid".into());
    }
    let d = lin.directions();
    ApproxResult {
        value: fit.value,
        lower_bound: fit.lower_bound,
        gap: fit.value - fit.lower_bound,
        directions: d,
        approximant: PowerSeries::polynomial(fit.coeffs[fit.coeffs.len() - n..].to_vec()),
        lp_value: fit.lp_value,
        inflated_value: fit.lp_value.map(|v| v / (PI / d as f64).cos()),
        ..base
    }
}

fn l2_approx(input: ApproxInput, n: usize, opts: &SolveOptions, mut warnings: Vec<String>) -> Result<ApproxResult> {
    let (coeffs, tail, grid_size, radius) = match input {
        ApproxInput::Series(f) => (f.coeffs().to_vec(), 0.0, 0, 1.0),
        ApproxInput::Function(TestFunction::Series(f)) => (f.coeffs().to_vec(), 0.0, 0, 1.0),
        ApproxInput::Function(f) => {
            let series = f.coefficients_to_tol(1e-17, 1 << 16);
            (series.coeffs().to_vec(), 0.0, 0, 1.0)
        }
        ApproxInput::Grid(g) => {
            check_grid_size(g.m_grid())?;
            if 2 * n >= g.m_grid() {
                return Err(HardyError::InvalidArgument(format!(
                    "order {n} needs a grid of more than {} samples",
                    2 * n
                )));
            }
            let hat = dft(g.samples());
            let r = g.radius();
            // all bins outside 0..n contribute, including aliased negatives
            let tail: f64 = hat[n..].iter().map(|c| c.norm_sqr()).sum();
            let low = (0..n).map(|k| hat[k] / r.powi(k as i32)).collect();
            if r < 1.0 {
                warnings.push(format!(
                    "solved on the circle of radius {r}; the value approximates the boundary value with a radius bias"
                ));
            }
            (low, tail, g.m_grid(), r)
        }
    };
    let value = if matches!(input, ApproxInput::Grid(_)) {
        tail.sqrt()
    } else {
        coeffs.iter().skip(n).map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    };
    let mut low: Vec<C64> = coeffs.into_iter().take(n).collect();
    low.resize(n.max(1), C64::new(0.0, 0.0));
    Ok(ApproxResult {
        value,
        lower_bound: value,
        gap: 0.0,
        grid_size,
        directions: 0,
        approximant: PowerSeries::polynomial(low),
        conjugate_part: None,
        q: HardyExponent::Two,
        n,
        radius,
        linearization: opts.linearization,
        lp_value: None,
        inflated_value: None,
        convergence: None,
        solver_tolerance: 0.0,
        warnings,
    })
}

/// `𝓔_N(f)_1 = inf ‖f - (p + conj(h))‖_1` over `p ∈ P_{N-1}` and `h ∈ H^1_0`
/// of degree at most `M⁻ = opts.neg_degree`.
pub fn mixed_approx_l1<'a>(
    f: impl Into<ApproxInput<'a>>,
    big_n: usize,
    opts: &SolveOptions,
) -> Result<ApproxResult> {
    mixed_approx_l1_with(&ClarabelSolver::with_tolerance(opts.tol), f, big_n, opts)
}

pub fn mixed_approx_l1_with<'a>(
    solver: &dyn ConvexSolver,
    f: impl Into<ApproxInput<'a>>,
    big_n: usize,
    opts: &SolveOptions,
) -> Result<ApproxResult> {
    opts.validate()?;
    let neg = opts.neg_degree;
    if neg == 0 {
        return Err(HardyError::InvalidArgument("conjugate truncation must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    push_order_warning(big_n, &mut warnings);
    let grid = f.into().grid(opts, &mut warnings)?;
    if big_n + neg >= grid.m_grid() / 2 {
        return Err(HardyError::InvalidArgument(format!(
            "N + M⁻ = {} must stay below half the grid size {}",
            big_n + neg,
            grid.m_grid()
        )));
    }
    let freqs = |neg: usize| -> Vec<i64> { (-(neg as i64)..big_n as i64).collect() };
    let fit = discrete_fit(solver, &grid, &freqs(neg), DiscreteNorm::Mean, opts.linearization)?;
    let coarse = if neg >= 2 {
        Some(discrete_fit(solver, &grid, &freqs(neg / 2), DiscreteNorm::Mean, opts.linearization)?.value)
    } else {
        None
    };
    if let Some(v) = coarse {
        if fit.value > v + 10.0 * solver.tolerance() * (1.0 + v) {
            warnings.push(format!(
                "value {} at M⁻ = {neg} exceeds {v} at M⁻ = {}",
                fit.value,
                neg / 2
            ));
        }
    }
    let h: Vec<C64> = std::iter::once(C64::new(0.0, 0.0))
        .chain(fit.coeffs[..neg].iter().rev().map(|c| c.conj()))
        .collect();
    let base = ApproxResult {
        value: 0.0,
        lower_bound: 0.0,
        gap: 0.0,
        grid_size: grid.m_grid(),
        directions: 0,
        approximant: PowerSeries::zero(),
        conjugate_part: Some(PowerSeries::polynomial(h)),
        q: HardyExponent::One,
        n: big_n,
        radius: grid.radius(),
        linearization: opts.linearization,
        lp_value: None,
        inflated_value: None,
        convergence: coarse,
        solver_tolerance: solver.tolerance(),
        warnings,
    };
    let mut result = finish_fit(base, fit, opts.linearization, big_n);
    if big_n == 0 {
        result.approximant = PowerSeries::zero();
    }
    log_warnings(&result.warnings);
    Ok(result)
}

/// `T_n(f)` for a kernel, kept in closed form when one is available.
pub fn operator_image(kernel: &KernelSpec, f: &TestFunction) -> Result<TestFunction> {
    if let (KernelForm::Geometric { period }, TestFunction::Closed(ClosedForm::Family(fam))) =
        (&kernel.form, f)
    {
        if fam.kind == FamilyKind::CayleyRational {
            return Ok(ClosedForm::geometric_image(kernel.n, *period, fam.rho)?.into());
        }
    }
    let series = match f {
        TestFunction::Series(s) => s.clone(),
        TestFunction::Closed(_) => f.coefficients_to_tol(1e-17, 1 << 16),
    };
    Ok(apply_operator(kernel, &series)?.into())
}

/// `‖T_n(f)‖_q` for a certified kernel: a lower bound for `E_n(f)_q`.
pub fn convolution_lower_bound(
    kernel: &KernelSpec,
    f: &TestFunction,
    q: HardyExponent,
    opts: &SolveOptions,
) -> Result<f64> {
    opts.validate()?;
    let cert = certify_bap(kernel, &SweepConfig::default())?;
    if !cert.verdict.is_pass() {
        return Err(HardyError::NotCertified(format!(
            "coefficient gap {:e}, minimum real part {}",
            cert.coefficient_gap_margin, cert.min_real_part
        )));
    }
    let image = operator_image(kernel, f)?;
    match (&image, q) {
        (TestFunction::Series(s), HardyExponent::Two) => Ok(s.l2_norm()),
        (TestFunction::Closed(_), HardyExponent::Two) => {
            Ok(image.coefficients_to_tol(1e-17, 1 << 16).l2_norm())
        }
        _ => {
            let mut warnings = Vec::new();
            let grid = ApproxInput::Function(&image).grid(opts, &mut warnings)?;
            log_warnings(&warnings);
            hardy_norm(&grid, q)
        }
    }
}
