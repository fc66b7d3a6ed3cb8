//! Coefficient inequalities bounding `E_n(f)_∞` from below:
//!
//! * Landau type: `|f̂_n| + c|f̂_N| <= E_n(f)_∞`, valid for all `f` exactly
//!   when `N >= 2n+1` and `c <= 1/2`;
//! * the refinement `|f̂_n| + 𝓔_N(f)_1 / 2 <= E_n(f)_∞`;
//! * weighted Bohr type: `|f̂_n| + Σ_{k>=2n+1} ψ_k |f̂_k| <= E_n(f)_∞` when
//!   `Σ ψ_k <= 1/2`.
//!
//! Both sides are evaluated numerically; verdicts carry the slack and the
//! tolerances involved.

use serde::{Deserialize, Serialize};

use crate::approx::{best_approx, mixed_approx_l1, ApproxResult, SolveOptions};
use crate::error::{HardyError, Result};
use crate::kernels::{certify_theorem3, min_real_part, KernelSpec, SweepConfig};
use crate::series::{HardyExponent, PowerSeries, C64};
use crate::special::{bohr_threshold, ExtremalFamily, PsiWeights, TestFunction};

pub const DEFAULT_INEQUALITY_TOL: f64 = 1e-5;

/// Slack below which a check counts as exact equality rather than a
/// tolerance-level pass.
const NUMERICAL_ZERO: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityName {
    /// `|f̂_n| <= E_n(f)_∞`.
    Cauchy,
    Landau,
    Corollary1,
    Corollary3,
    /// The weighted bound with `n = 0`.
    Bohr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityVerdict {
    Holds,
    /// Negative slack no larger in modulus than the tolerance.
    WithinTolerance,
    Violated,
}

impl InequalityVerdict {
    pub fn from_slack(slack: f64, tol: f64) -> Self {
        if slack >= -NUMERICAL_ZERO {
            InequalityVerdict::Holds
        } else if slack >= -tol {
            InequalityVerdict::WithinTolerance
        } else {
            InequalityVerdict::Violated
        }
    }

    /// True unless violated.
    pub fn holds(self) -> bool {
        self != InequalityVerdict::Violated
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: InequalityName,
    pub n: usize,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub big_n: Option<usize>,
    /// `c`, or a digest of the weights.
    pub parameter: String,
    pub function_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub verdict: InequalityVerdict,
    /// Whether the parameters satisfy the sufficient condition.
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Verdict tolerance.
    pub tolerance: f64,
    pub solver_tolerance: f64,
    /// Discretisation uncertainty: duality gap of the solves plus the
    /// conjugate-truncation change in the mixed problem.
    pub discretization_bias: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckOptions {
    pub solve: SolveOptions,
    pub tol: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            solve: SolveOptions::default(),
            tol: DEFAULT_INEQUALITY_TOL,
        }
    }
}

/// `N >= 2n+1` and `0 < c <= 1/2`, cross-checked against the numerical
/// certificate for `L(z) = c z^N`.
pub fn landau_admissible(n: usize, big_n: usize, c: f64) -> bool {
    let analytic = big_n > 2 * n && c > 0.0 && c <= 0.5;
    if big_n <= n || !(c > 0.0) {
        return analytic;
    }
    let mut coeffs = vec![C64::new(0.0, 0.0); big_n.max(2 * n + 1) + 1];
    coeffs[big_n] = C64::new(c, 0.0);
    let cfg = SweepConfig {
        m_grid: 256,
        tol: 1e-12,
        ..SweepConfig::default()
    };
    match certify_theorem3(&PowerSeries::polynomial(coeffs), n, &cfg) {
        Ok(cert) if cert.verdict.is_pass() != analytic => {
            log::warn!(
                "admissibility of (n={n}, N={big_n}, c={c}): analytic {analytic}, certificate {:?}",
                cert.verdict
            );
        }
        Err(e) => log::warn!("admissibility certificate failed: {e}"),
        _ => {}
    }
    analytic
}

/// `E_n(f)_∞` as used on the right of every inequality here.
pub fn sup_distance(f: &TestFunction, n: usize, opts: &CheckOptions) -> Result<ApproxResult> {
    best_approx(f, n, HardyExponent::Infinity, &opts.solve)
}

/// `|f̂_n| + c|f̂_N|` against `E_n(f)_∞`.
pub fn check_inequality(
    f: &TestFunction,
    n: usize,
    big_n: usize,
    c: f64,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    let rhs = sup_distance(f, n, opts)?;
    Ok(check_inequality_given(f, n, big_n, c, &rhs, opts.tol))
}

/// As [`check_inequality`] with a precomputed `E_n(f)_∞`.
pub fn check_inequality_given(
    f: &TestFunction,
    n: usize,
    big_n: usize,
    c: f64,
    rhs: &ApproxResult,
    tol: f64,
) -> InequalityReport {
    let lhs = f.coefficient(n).norm() + c * f.coefficient(big_n).norm();
    let slack = rhs.value - lhs;
    InequalityReport {
        name: if c == 0.0 {
            InequalityName::Cauchy
        } else {
            InequalityName::Landau
        },
        n,
        big_n: Some(big_n),
        parameter: format!("c={c}"),
        function_id: f.id(),
        lhs,
        rhs: rhs.value,
        slack,
        verdict: InequalityVerdict::from_slack(slack, tol),
        admissible: landau_admissible(n, big_n, c),
        witness: None,
        tolerance: tol,
        solver_tolerance: rhs.solver_tolerance,
        discretization_bias: rhs.gap,
    }
}

/// Ratios `(|f̂_n| + |f̂_N|/2) / E_n(f_ρ)_∞` along the Blaschke family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessSweep {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub rho_values: Vec<f64>,
    pub ratios: Vec<f64>,
    /// `ρ + (1 - ρ²)/2`.
    pub analytic_floor: Vec<f64>,
    /// `|f̂_N| / (1 - |f̂_n|) = 1 + ρ`, whose supremum 2 shows that `1/2`
    /// cannot be replaced by a larger constant.
    pub sharp_column: Vec<f64>,
    /// `E_n(f_ρ)_∞`.
    pub distances: Vec<f64>,
    pub within_bounds: Vec<bool>,
    pub tolerance: f64,
}

pub fn sharpness_sweep(
    n: usize,
    big_n: usize,
    rho_values: &[f64],
    opts: &CheckOptions,
) -> Result<SharpnessSweep> {
    if big_n < 2 * n + 1 {
        return Err(HardyError::InvalidArgument(format!(
            "sharpness sweep needs N >= 2n+1, got n = {n}, N = {big_n}"
        )));
    }
    let mut out = SharpnessSweep {
        n,
        big_n,
        rho_values: rho_values.to_vec(),
        ratios: Vec::new(),
        analytic_floor: Vec::new(),
        sharp_column: Vec::new(),
        distances: Vec::new(),
        within_bounds: Vec::new(),
        tolerance: opts.tol,
    };
    for &rho in rho_values {
        let f: TestFunction = ExtremalFamily::blaschke_shift(n, big_n, rho)?.into();
        let e = sup_distance(&f, n, opts)?.value;
        let (a_n, a_big) = (f.coefficient(n).norm(), f.coefficient(big_n).norm());
        let ratio = (a_n + 0.5 * a_big) / e;
        let floor = rho + 0.5 * (1.0 - rho * rho);
        out.ratios.push(ratio);
        out.analytic_floor.push(floor);
        out.sharp_column.push(a_big / (1.0 - a_n));
        out.distances.push(e);
        out.within_bounds
            .push(ratio >= floor - opts.tol && ratio <= 1.0 + opts.tol);
    }
    Ok(out)
}

/// `|f̂_n| + 𝓔_N(f)_1 / 2` against `E_n(f)_∞`.
pub fn corollary1_check(
    f: &TestFunction,
    n: usize,
    big_n: usize,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    if big_n < 2 * n + 1 {
        return Err(HardyError::InvalidArgument(format!(
            "needs N >= 2n+1, got n = {n}, N = {big_n}"
        )));
    }
    let rhs = sup_distance(f, n, opts)?;
    let mixed = mixed_approx_l1(f, big_n, &opts.solve)?;
    let lhs = f.coefficient(n).norm() + 0.5 * mixed.value;
    let truncation_bias = mixed.convergence.map_or(0.0, |v| (v - mixed.value).abs());
    let slack = rhs.value - lhs;
    Ok(InequalityReport {
        name: InequalityName::Corollary1,
        n,
        big_n: Some(big_n),
        parameter: "c=0.5".into(),
        function_id: f.id(),
        lhs,
        rhs: rhs.value,
        slack,
        verdict: InequalityVerdict::from_slack(slack, opts.tol),
        admissible: true,
        witness: None,
        tolerance: opts.tol,
        solver_tolerance: rhs.solver_tolerance,
        discretization_bias: rhs.gap + 0.5 * (mixed.gap + truncation_bias),
    })
}

/// `|f̂_n| + Σ ψ_k |f̂_k|` against `E_n(f)_∞`; the weights must start at or
/// after `2n+1`.
pub fn corollary3_check(
    f: &TestFunction,
    n: usize,
    psi: &PsiWeights,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    let rhs = sup_distance(f, n, opts)?;
    corollary3_check_given(f, n, psi, &rhs, opts.tol)
}

pub fn corollary3_check_given(
    f: &TestFunction,
    n: usize,
    psi: &PsiWeights,
    rhs: &ApproxResult,
    tol: f64,
) -> Result<InequalityReport> {
    if psi.start() < 2 * n + 1 {
        return Err(HardyError::InvalidArgument(format!(
            "weights start at {}, must start at 2n+1 = {} or later",
            psi.start(),
            2 * n + 1
        )));
    }
    let lhs = f.coefficient(n).norm()
        + psi.iter().map(|(k, w)| w * f.coefficient(k).norm()).sum::<f64>();
    let slack = rhs.value - lhs;
    Ok(InequalityReport {
        name: if n == 0 {
            InequalityName::Bohr
        } else {
            InequalityName::Corollary3
        },
        n,
        big_n: None,
        parameter: psi.digest(),
        function_id: f.id(),
        lhs,
        rhs: rhs.value,
        slack,
        verdict: InequalityVerdict::from_slack(slack, tol),
        admissible: weights_admissible(psi),
        witness: None,
        tolerance: tol,
        solver_tolerance: rhs.solver_tolerance,
        discretization_bias: rhs.gap,
    })
}

/// `Σ ψ_k <= 1/2`.
pub fn weights_admissible(psi: &PsiWeights) -> bool {
    psi.sum() <= 0.5 + 1e-12
}

/// The extremal function for weights with `Σ ψ_k > 1/2`:
/// `z^n (z^{n+1} - ρ₀)/(1 - ρ₀ z^{n+1})` with `Σ ψ_k ρ₀^k = 1/2`.
pub fn corollary3_witness(n: usize, psi: &PsiWeights) -> Result<ExtremalFamily> {
    let rho0 = bohr_threshold(|t| psi.power_sum(t), 0.5)?;
    ExtremalFamily::blaschke_shift(n, 2 * n + 1, rho0)
}

/// Evaluates the weighted bound on its extremal function.
pub fn corollary3_witness_check(
    n: usize,
    psi: &PsiWeights,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    let family = corollary3_witness(n, psi)?;
    let f: TestFunction = family.into();
    let mut report = corollary3_check(&f, n, psi, opts)?;
    report.witness = Some(family.to_string());
    Ok(report)
}

/// Landau-type reports along `f_ρ`, the first violated one marked as the
/// witness.
pub fn landau_violation_search(
    n: usize,
    big_n: usize,
    c: f64,
    rho_values: &[f64],
    opts: &CheckOptions,
) -> Result<(Vec<InequalityReport>, Option<usize>)> {
    let mut reports = Vec::with_capacity(rho_values.len());
    let mut witness = None;
    for (i, &rho) in rho_values.iter().enumerate() {
        let family = ExtremalFamily::blaschke_shift(n, big_n, rho)?;
        let f: TestFunction = family.into();
        let mut report = check_inequality(&f, n, big_n, c, opts)?;
        if report.verdict == InequalityVerdict::Violated {
            report.witness = Some(family.to_string());
            witness.get_or_insert(i);
        }
        reports.push(report);
    }
    Ok((reports, witness))
}

/// Membership in the class of `f` with `Re (1/f̂_N) Σ_k f̂_{k+N} z^k >= 1/2`.
pub fn r_class_membership(f: &PowerSeries, big_n: usize, cfg: &SweepConfig) -> Result<bool> {
    let lead = f.coeff(big_n);
    if lead.norm() == 0.0 {
        return Err(HardyError::ZeroLeadingCoefficient(big_n));
    }
    let shifted = f.shift_down(big_n).scale(1.0 / lead);
    let sweep = min_real_part(&KernelSpec::from_coefficients(0, shifted), &cfg.radii, cfg.m_grid)?;
    Ok(sweep.min_value() >= 0.5 - cfg.tol)
}

/// Predicted and computed equality in `|f̂_n| <= E_n(f)_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualityCheck {
    pub predicted: bool,
    pub coefficient: f64,
    pub distance: f64,
    /// The solver agrees with the prediction within the tolerance.
    pub confirmed: bool,
    pub tolerance: f64,
}

/// Equality `|f̂_n| = E_n(f)_q` holds for `q ∈ (1, ∞]` iff `f ∈ P_n`, and for
/// `q = 1` iff `f ∈ P_{2n}` with `Re Σ_{k<=n} (f̂_{k+n}/f̂_n) z^k >= 1/2`.
pub fn equality_characterization_check(
    f: &PowerSeries,
    n: usize,
    q: HardyExponent,
    opts: &CheckOptions,
) -> Result<EqualityCheck> {
    let lead = f.coeff(n);
    if lead.norm() == 0.0 {
        return Err(HardyError::ZeroLeadingCoefficient(n));
    }
    let scale = f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let vanishes_from = |start: usize| {
        f.is_exact() && f.coeffs().iter().skip(start).all(|c| c.norm() <= 1e-14 * scale)
    };
    let predicted = match q {
        HardyExponent::One => {
            vanishes_from(2 * n + 1) && {
                let poly = PowerSeries::polynomial(f.coeffs()[n..(2 * n + 1).min(f.coeffs().len())].to_vec())
                    .scale(1.0 / lead);
                let cfg = SweepConfig::default();
                min_real_part(&KernelSpec::from_coefficients(0, poly), &cfg.radii, cfg.m_grid)?
                    .min_value()
                    >= 0.5 - cfg.tol
            }
        }
        _ => vanishes_from(n + 1),
    };
    let distance = best_approx(f, n, q, &opts.solve)?.value;
    let coefficient = lead.norm();
    let equal = (distance - coefficient).abs() <= opts.tol.max(1e-4) * (1.0 + coefficient);
    Ok(EqualityCheck {
        predicted,
        coefficient,
        distance,
        confirmed: predicted == equal,
        tolerance: opts.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CheckOptions {
        CheckOptions {
            solve: SolveOptions {
                m_grid: 1024,
                neg_degree: 16,
                ..SolveOptions::default()
            },
            ..CheckOptions::default()
        }
    }

    fn series(coeffs: &[f64]) -> TestFunction {
        PowerSeries::from_real(coeffs).into()
    }

    #[test]
    fn admissibility_table() {
        assert!(landau_admissible(1, 3, 0.5));
        assert!(!landau_admissible(1, 2, 0.1));
        assert!(landau_admissible(0, 1, 0.5));
        assert!(!landau_admissible(1, 3, 0.6));
        assert!(!landau_admissible(2, 4, 0.5));
        assert!(landau_admissible(1, 4, 0.3));
        assert!(!landau_admissible(1, 3, 0.0));
    }

    #[test]
    fn verdict_thresholds() {
        assert_eq!(InequalityVerdict::from_slack(0.0, 1e-5), InequalityVerdict::Holds);
        assert_eq!(InequalityVerdict::from_slack(-1e-6, 1e-5), InequalityVerdict::WithinTolerance);
        assert_eq!(InequalityVerdict::from_slack(-1e-4, 1e-5), InequalityVerdict::Violated);
        assert!(InequalityVerdict::WithinTolerance.holds());
    }

    #[test]
    fn monomial_is_tight() {
        let mut coeffs = vec![0.0; 4];
        coeffs[1] = 1.0;
        let report = check_inequality(&series(&coeffs), 1, 3, 0.5, &small()).unwrap();
        assert!((report.lhs - 1.0).abs() < 1e-15);
        assert!((report.rhs - 1.0).abs() < 1e-8);
        assert!(report.verdict.holds());
        assert!(report.admissible);
    }

    #[test]
    fn blaschke_family_holds_and_tightens() {
        let mut last = f64::INFINITY;
        for rho in [0.5, 0.9, 0.99] {
            let f: TestFunction = ExtremalFamily::blaschke_shift(1, 3, rho).unwrap().into();
            let report = check_inequality(&f, 1, 3, 0.5, &small()).unwrap();
            assert!(report.verdict.holds(), "{report:?}");
            assert!(report.slack < last);
            last = report.slack;
        }
    }

    #[test]
    fn inadmissible_constant_is_violated() {
        let (reports, witness) =
            landau_violation_search(1, 3, 0.6, &[0.5, 0.9, 0.99], &small()).unwrap();
        assert_eq!(witness, Some(1));
        assert!(reports[1].witness.as_deref().unwrap().starts_with("blaschke:1,3,0.9"));
        assert!(!reports[1].admissible);
    }

    #[test]
    fn sharpness_rows() {
        let sweep = sharpness_sweep(1, 3, &[0.0, 0.5, 0.9], &small()).unwrap();
        assert!(sweep.within_bounds.iter().all(|&b| b));
        assert!((sweep.ratios[0] - 0.5).abs() < 1e-8);
        assert!((sweep.sharp_column[2] - 1.9).abs() < 1e-12);
        assert!(sharpness_sweep(1, 2, &[0.5], &small()).is_err());
    }

    #[test]
    fn corollary1_cases() {
        let opts = small();
        let mut e3 = vec![0.0; 4];
        e3[3] = 1.0;
        let report = corollary1_check(&series(&e3), 1, 3, &opts).unwrap();
        assert!((report.lhs - 0.5).abs() < 1e-7);
        assert!((report.rhs - 1.0).abs() < 1e-7);
        assert!(report.verdict.holds());

        let low = series(&[0.3, -0.2]);
        let report = corollary1_check(&low, 2, 5, &opts).unwrap();
        assert!(report.lhs.abs() < 1e-7 && report.rhs.abs() < 1e-7);
        assert!(report.verdict.holds());

        for rho in [0.0, 0.3, 0.6, 0.9] {
            let f: TestFunction = ExtremalFamily::blaschke_shift(1, 3, rho).unwrap().into();
            let c1 = corollary1_check(&f, 1, 3, &opts).unwrap();
            let landau = check_inequality(&f, 1, 3, 0.5, &opts).unwrap();
            assert!(c1.verdict.holds(), "rho = {rho}: {c1:?}");
            assert!(c1.lhs >= landau.lhs - 1e-6);
        }
    }

    #[test]
    fn bohr_weights() {
        let opts = small();
        let third = PsiWeights::geometric(1.0 / 3.0 - 1e-6, 1, 200).unwrap();
        assert!(weights_admissible(&third));
        assert!(!weights_admissible(&PsiWeights::geometric(1.0 / 3.0 + 1e-3, 1, 200).unwrap()));

        let f = series(&[0.5, -0.3, 0.2, 0.1]);
        let report = corollary3_check(&f, 0, &third, &opts).unwrap();
        assert_eq!(report.name, InequalityName::Bohr);
        assert!(report.verdict.holds());

        // Σ (0.4)^k = 2/3: ρ₀ = 5/6 and the excess is 1/60
        let heavy = PsiWeights::geometric(0.4, 1, 200).unwrap();
        let witness = corollary3_witness(0, &heavy).unwrap();
        assert!((witness.rho - 5.0 / 6.0).abs() < 1e-10);
        let report = corollary3_witness_check(0, &heavy, &opts).unwrap();
        assert_eq!(report.verdict, InequalityVerdict::Violated);
        assert!((report.lhs - 61.0 / 60.0).abs() < 1e-9);
        assert!((report.slack + 1.0 / 60.0).abs() < 1e-6);

        let early = PsiWeights::new(2, vec![0.5]).unwrap();
        assert!(corollary3_check(&f, 1, &early, &opts).is_err());
    }

    #[test]
    fn r_class_examples() {
        let cfg = SweepConfig::default();
        assert!(r_class_membership(&PowerSeries::from_real(&[0.0, 0.0, 1.0]), 2, &cfg).unwrap());
        assert!(r_class_membership(&PowerSeries::from_real(&[0.0, 0.0, 1.0, 0.5]), 2, &cfg).unwrap());
        assert!(!r_class_membership(&PowerSeries::from_real(&[0.0, 0.0, 1.0, 2.0]), 2, &cfg).unwrap());
        assert!(matches!(
            r_class_membership(&PowerSeries::from_real(&[1.0, 0.0, 0.0]), 2, &cfg),
            Err(HardyError::ZeroLeadingCoefficient(2))
        ));
    }

    #[test]
    fn equality_characterization() {
        let opts = small();
        for n in 1..3 {
            let mut plus_const = vec![0.0; n + 1];
            plus_const[0] = 1.0;
            plus_const[n] = 1.0;
            let check = equality_characterization_check(
                &PowerSeries::from_real(&plus_const),
                n,
                HardyExponent::Infinity,
                &opts,
            )
            .unwrap();
            assert!(check.predicted && check.confirmed, "{check:?}");

            let mut next = vec![0.0; n + 2];
            next[n] = 1.0;
            next[n + 1] = 1.0;
            let check = equality_characterization_check(
                &PowerSeries::from_real(&next),
                n,
                HardyExponent::Infinity,
                &opts,
            )
            .unwrap();
            assert!(!check.predicted && check.confirmed);
            assert!(check.distance > 1.0);

            let mut quarter = vec![0.0; 2 * n + 1];
            quarter[n] = 1.0;
            quarter[2 * n] = 0.25;
            let check = equality_characterization_check(
                &PowerSeries::from_real(&quarter),
                n,
                HardyExponent::One,
                &opts,
            )
            .unwrap();
            assert!(check.predicted && check.confirmed, "{check:?}");
        }
    }
}
