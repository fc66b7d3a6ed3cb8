//! Convolution kernels `K_n` and certificates for the best-approximation-
//! preserving (BAP) conditions:
//!
//! * coefficient gap: `K_n(z) = z^n + O(z^{2n+1})`,
//! * positivity: `Re K_n(z)/z^n >= 1/2` on the disc,
//!
//! plus the paired condition `Re K_n/z^n - 1/2 >= |L_n/z^n|` and the single
//! condition `|L_n(z)| <= |z|^{2n+1}/2` used for coefficient inequalities.
//!
//! Infima over the disc are estimated by sweeping circles of increasing
//! radius; `K_n/z^n` is always formed by shifting coefficients (or its closed
//! form), never by dividing sampled values.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::series::{check_grid_size, grid_point, hadamard, horner, PowerSeries, C64};
use crate::special::POLE_TOL;

pub const DEFAULT_SWEEP_RADII: [f64; 5] = [0.5, 0.9, 0.99, 1.0 - 1e-3, 1.0 - 1e-4];
pub const DEFAULT_SWEEP_GRID: usize = 8192;
pub const DEFAULT_CERT_TOL: f64 = 1e-6;

/// A positive measure on the circle with finitely many atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct DiscreteMeasure {
    atoms: Vec<(C64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct AtomRepr {
    t: [f64; 2],
    w: f64,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    atoms: Vec<AtomRepr>,
}

impl TryFrom<MeasureRepr> for DiscreteMeasure {
    type Error = HardyError;

    fn try_from(repr: MeasureRepr) -> Result<Self> {
        DiscreteMeasure::new(
            repr.atoms
                .into_iter()
                .map(|a| (C64::new(a.t[0], a.t[1]), a.w))
                .collect(),
        )
    }
}

impl From<DiscreteMeasure> for MeasureRepr {
    fn from(mu: DiscreteMeasure) -> Self {
        MeasureRepr {
            atoms: mu
                .atoms
                .into_iter()
                .map(|(t, w)| AtomRepr { t: [t.re, t.im], w })
                .collect(),
        }
    }
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(C64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(HardyError::InvalidMeasure("no atoms".into()));
        }
        for &(t, w) in &atoms {
            if !(w.is_finite() && w >= 0.0) {
                return Err(HardyError::InvalidMeasure(format!("weight {w} is negative")));
            }
            if !((t.norm() - 1.0).abs() <= 1e-12) {
                return Err(HardyError::InvalidMeasure(format!(
                    "atom {t} is off the unit circle"
                )));
            }
        }
        let mass: f64 = atoms.iter().map(|a| a.1).sum();
        if (mass - 1.0).abs() > 1e-12 {
            return Err(HardyError::InvalidMeasure(format!("total mass {mass} differs from 1")));
        }
        Ok(DiscreteMeasure { atoms })
    }

    /// Equal weights at `exp(i(rotation + 2πj/N))`, `j = 0..N`.
    pub fn roots_of_unity(count: usize, rotation: f64) -> Result<Self> {
        if count == 0 {
            return Err(HardyError::InvalidMeasure("no atoms".into()));
        }
        let w = 1.0 / count as f64;
        Self::new(
            (0..count)
                .map(|j| (C64::from_polar(1.0, rotation + 2.0 * PI * j as f64 / count as f64), w))
                .collect(),
        )
    }

    /// Convex combination `Σ λ_i μ_i`.
    pub fn mixture(parts: &[(f64, DiscreteMeasure)]) -> Result<Self> {
        let atoms = parts
            .iter()
            .flat_map(|(lambda, mu)| mu.atoms.iter().map(move |&(t, w)| (t, lambda * w)))
            .collect();
        Self::new(atoms)
    }

    pub fn atoms(&self) -> &[(C64, f64)] {
        &self.atoms
    }

    /// `∫ t^k dμ(t)` for `k >= 0`.
    pub fn moment(&self, k: usize) -> C64 {
        self.atoms.iter().map(|&(t, w)| w * t.powu(k as u32)).sum()
    }
}

/// `max_{1<=k<=n} |∫ t^k dμ|`; negative `k` are covered by conjugate symmetry.
pub fn moment_check(mu: &DiscreteMeasure, n: usize) -> f64 {
    (1..=n).map(|k| mu.moment(k).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelForm {
    /// `z^n / (1 - z^N)`.
    Geometric {
        #[serde(rename = "N")]
        period: usize,
    },
    Coefficients(PowerSeries),
    /// `z^n ∫ dμ(t) / (1 - t̄z)`.
    Measure(DiscreteMeasure),
    /// `z^n`.
    Monomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub n: usize,
    pub form: KernelForm,
}

impl KernelSpec {
    pub fn geometric(n: usize, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(HardyError::InvalidArgument("geometric kernel needs N >= 1".into()));
        }
        Ok(KernelSpec {
            n,
            form: KernelForm::Geometric { period },
        })
    }

    pub fn monomial(n: usize) -> Self {
        KernelSpec {
            n,
            form: KernelForm::Monomial,
        }
    }

    pub fn from_coefficients(n: usize, coeffs: PowerSeries) -> Self {
        KernelSpec {
            n,
            form: KernelForm::Coefficients(coeffs),
        }
    }

    /// Coefficient of `z^k`.
    pub fn coefficient(&self, k: usize) -> C64 {
        let n = self.n;
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        match &self.form {
            KernelForm::Monomial => {
                if k == n {
                    one
                } else {
                    zero
                }
            }
            KernelForm::Geometric { period } => {
                if k >= n && (k - n).is_multiple_of(*period) {
                    one
                } else {
                    zero
                }
            }
            KernelForm::Measure(mu) => {
                if k < n {
                    zero
                } else {
                    mu.moment(k - n).conj()
                }
            }
            KernelForm::Coefficients(f) => f.coeff(k),
        }
    }

    /// Upper bound on the modulus of every coefficient, when known.
    fn coefficient_bound(&self) -> Option<f64> {
        match &self.form {
            KernelForm::Coefficients(_) => None,
            _ => Some(1.0),
        }
    }

    /// `K_n(z) / z^n`, evaluated through its closed form or the shifted
    /// coefficient sequence.
    pub fn shifted_eval(&self, z: C64) -> Result<C64> {
        match &self.form {
            KernelForm::Monomial => Ok(C64::new(1.0, 0.0)),
            KernelForm::Geometric { period } => {
                let den = 1.0 - z.powu(*period as u32);
                pole_check(z, den)?;
                Ok(1.0 / den)
            }
            KernelForm::Measure(mu) => mu
                .atoms()
                .iter()
                .map(|&(t, w)| {
                    let den = 1.0 - t.conj() * z;
                    pole_check(z, den)?;
                    Ok(w / den)
                })
                .sum(),
            KernelForm::Coefficients(f) => {
                if z.norm() >= 1.0 - 1e-14 && !f.is_boundary_regular() {
                    return Err(HardyError::BoundaryNotRegular);
                }
                Ok(horner(&f.coeffs()[self.n.min(f.truncation() + 1)..], z))
            }
        }
    }
}

fn pole_check(z: C64, den: C64) -> Result<()> {
    if den.norm() < POLE_TOL {
        return Err(HardyError::PoleProximity {
            z: z.to_string(),
            distance: den.norm(),
        });
    }
    Ok(())
}

/// Coefficients of `K` at indices `0..=upto`.
pub fn kernel_coefficients(kernel: &KernelSpec, upto: usize) -> Result<PowerSeries> {
    if upto < kernel.n {
        return Err(HardyError::InvalidArgument(format!(
            "upto = {upto} is below the kernel order {}",
            kernel.n
        )));
    }
    Ok(match &kernel.form {
        KernelForm::Coefficients(f) => f.clone(),
        KernelForm::Monomial => PowerSeries::polynomial(
            (0..=upto).map(|k| kernel.coefficient(k)).collect(),
        ),
        _ => PowerSeries::truncated((0..=upto).map(|k| kernel.coefficient(k)).collect(), None),
    })
}

/// The measure-form kernel `z^n ∫ dμ(t)/(1 - t̄z)`. Moment conditions are not
/// checked here; see [`moment_check`].
pub fn kernel_from_measure(n: usize, mu: DiscreteMeasure) -> Result<KernelSpec> {
    let mu = DiscreteMeasure::new(mu.atoms)?;
    Ok(KernelSpec {
        n,
        form: KernelForm::Measure(mu),
    })
}

/// `T_n(f) = K_n * f`.
pub fn apply_operator(kernel: &KernelSpec, f: &PowerSeries) -> Result<PowerSeries> {
    let upto = f.truncation().max(kernel.n);
    let k = kernel_coefficients(kernel, upto)?;
    let out = hadamard(&k, f);
    if out.is_exact() {
        return Ok(out);
    }
    let tail = match (f.tail_bound(), kernel.coefficient_bound()) {
        (Some(t), Some(b)) => Some(t * b),
        _ => None,
    };
    Ok(out.with_tail_bound(tail))
}

/// Circle sweep settings for certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub radii: Vec<f64>,
    pub m_grid: usize,
    pub tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            radii: DEFAULT_SWEEP_RADII.to_vec(),
            m_grid: DEFAULT_SWEEP_GRID,
            tol: DEFAULT_CERT_TOL,
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        check_grid_size(self.m_grid)?;
        if self.radii.is_empty() {
            return Err(HardyError::InvalidArgument("empty radius sweep".into()));
        }
        if let Some(r) = self.radii.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
            return Err(HardyError::Radius(*r));
        }
        if self.radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HardyError::InvalidArgument("sweep radii must increase".into()));
        }
        Ok(())
    }
}

/// Minimum of a real function on one circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleMin {
    pub radius: f64,
    pub value: f64,
    pub argmin: [f64; 2],
}

/// Per-circle minima of a real functional, ordered by radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub circles: Vec<CircleMin>,
}

impl Sweep {
    /// Smallest per-circle minimum.
    pub fn min_value(&self) -> f64 {
        self.circles.iter().map(|c| c.value).fold(f64::INFINITY, f64::min)
    }

    pub fn argmin(&self) -> C64 {
        let best = self
            .circles
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .expect("sweep has at least one circle");
        C64::new(best.argmin[0], best.argmin[1])
    }

    pub fn radii(&self) -> Vec<f64> {
        self.circles.iter().map(|c| c.radius).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.circles.iter().map(|c| c.value).collect()
    }

    /// Minima never increase with the radius (up to rounding).
    pub fn is_monotone(&self) -> bool {
        self.circles
            .windows(2)
            .all(|w| w[1].value <= w[0].value + 1e-12 * (1.0 + w[0].value.abs()))
    }

    /// Estimate of the boundary limit: quadratic extrapolation in `1 - r`
    /// through the outermost three circles.
    pub fn boundary_estimate(&self) -> f64 {
        let c = &self.circles;
        let len = c.len();
        if len < 3 || c[len - 1].radius >= 1.0 {
            return c[len - 1].value;
        }
        let e: Vec<f64> = c[len - 3..].iter().map(|c| 1.0 - c.radius).collect();
        let v: Vec<f64> = c[len - 3..].iter().map(|c| c.value).collect();
        (0..3)
            .map(|i| {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                v[i] * e[j] * e[k] / ((e[i] - e[j]) * (e[i] - e[k]))
            })
            .sum()
    }
}

/// Minimises `g(θ)` over each circle: grid search followed by golden-section
/// refinement around the best grid angle.
fn sweep_minimum(
    cfg: &SweepConfig,
    g: impl Fn(C64) -> Result<f64>,
) -> Result<Sweep> {
    cfg.validate()?;
    let m = cfg.m_grid;
    let mut circles = Vec::with_capacity(cfg.radii.len());
    for &r in &cfg.radii {
        let mut best = (f64::INFINITY, 0usize);
        for j in 0..m {
            let v = g(grid_point(r, j, m))?;
            if v < best.0 {
                best = (v, j);
            }
        }
        let h = 2.0 * PI / m as f64;
        let centre = best.1 as f64 * h;
        let at = |theta: f64| g(C64::from_polar(r, theta));
        let (mut a, mut b) = (centre - h, centre + h);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - phi * (b - a);
        let mut x2 = a + phi * (b - a);
        let (mut f1, mut f2) = (at(x1)?, at(x2)?);
        for _ in 0..40 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = at(x1)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = at(x2)?;
            }
        }
        let (value, theta) = [(best.0, centre), (f1, x1), (f2, x2)]
            .into_iter()
            .min_by(|p, q| p.0.total_cmp(&q.0))
            .unwrap();
        let z = C64::from_polar(r, theta);
        circles.push(CircleMin {
            radius: r,
            value,
            argmin: [z.re, z.im],
        });
    }
    Ok(Sweep { circles })
}

fn check_normalized(kernel: &KernelSpec, tol: f64) -> Result<()> {
    let lead = kernel.coefficient(kernel.n);
    if (lead - 1.0).norm() > tol {
        return Err(HardyError::NotNormalized {
            index: kernel.n,
            value: lead.to_string(),
        });
    }
    let below = (0..kernel.n).map(|k| kernel.coefficient(k).norm()).fold(0.0, f64::max);
    if below > tol {
        return Err(HardyError::InvalidArgument(format!(
            "kernel has coefficients of modulus {below} below index {}",
            kernel.n
        )));
    }
    Ok(())
}

/// Per-circle minima of `Re K_n(z)/z^n`.
pub fn min_real_part(kernel: &KernelSpec, radii: &[f64], m_grid: usize) -> Result<Sweep> {
    check_normalized(kernel, 1e-9)?;
    let cfg = SweepConfig {
        radii: radii.to_vec(),
        m_grid,
        tol: DEFAULT_CERT_TOL,
    };
    sweep_minimum(&cfg, |z| Ok(kernel.shifted_eval(z)?.re))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The deciding margin sits within the tolerance of its threshold.
    Marginal,
}

impl Verdict {
    /// Pass or marginal pass.
    pub fn is_pass(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Marginal)
    }
}

/// Outcome of a kernel certification with its numerical margins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    /// `max |α_{k,n}|` over `k = n+1..=2n` (for pair and single-kernel checks,
    /// the maximum over the indices that must vanish).
    pub coefficient_gap_margin: f64,
    /// Smallest sampled value of `Re K_n/z^n`; an upper bound on its infimum.
    pub min_real_part: f64,
    /// Extrapolated boundary limit of the per-circle minima.
    pub boundary_estimate: f64,
    /// Estimated infimum of `Re K_n/z^n - 1/2 - |L_n/z^n|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_margin: Option<f64>,
    /// Estimated supremum of `|L_n(z)| / |z|^{2n+1}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ratio: Option<f64>,
    pub sweep_radii: Vec<f64>,
    /// Per-circle value of the deciding quantity.
    pub sweep_values: Vec<f64>,
    pub sweep_monotone: bool,
    pub tolerance: f64,
}

/// Verdict from a hard margin (sampled, must be >= -tol) and its boundary
/// estimate (marginal when within ±tol of zero or below it).
fn decide(hard_failure: bool, sampled_margin: f64, estimated_margin: f64, tol: f64) -> Verdict {
    if hard_failure || sampled_margin < -tol {
        Verdict::Fail
    } else if estimated_margin <= tol {
        Verdict::Marginal
    } else {
        Verdict::Pass
    }
}

/// Certifies the coefficient gap and positivity conditions for `K`.
pub fn certify_bap(kernel: &KernelSpec, cfg: &SweepConfig) -> Result<Certificate> {
    check_normalized(kernel, cfg.tol)?;
    let n = kernel.n;
    let gap = (n + 1..=2 * n)
        .map(|k| kernel.coefficient(k).norm())
        .fold(0.0, f64::max);
    let sweep = min_real_part(kernel, &cfg.radii, cfg.m_grid)?;
    let min = sweep.min_value();
    let estimate = sweep.boundary_estimate().min(min);
    Ok(Certificate {
        verdict: decide(gap > cfg.tol, min - 0.5, estimate - 0.5, cfg.tol),
        coefficient_gap_margin: gap,
        min_real_part: min,
        boundary_estimate: estimate,
        pair_margin: None,
        max_ratio: None,
        sweep_radii: sweep.radii(),
        sweep_values: sweep.values(),
        sweep_monotone: sweep.is_monotone(),
        tolerance: cfg.tol,
    })
}

fn low_coefficient_max(l: &PowerSeries, below: usize) -> f64 {
    (0..below).map(|k| l.coeff(k).norm()).fold(0.0, f64::max)
}

fn check_pair_truncation(l: &PowerSeries, n: usize) -> Result<()> {
    if l.truncation() < 2 * n + 1 {
        return Err(HardyError::InvalidArgument(format!(
            "L has truncation {}, needs at least 2n+1 = {}",
            l.truncation(),
            2 * n + 1
        )));
    }
    Ok(())
}

/// Certifies `Re K_n/z^n - 1/2 >= |L_n/z^n|` together with the gap
/// conditions on `K` and on `L` (`L_n = O(z^{2n+1})`).
pub fn certify_pair(kernel: &KernelSpec, l: &PowerSeries, cfg: &SweepConfig) -> Result<Certificate> {
    let n = kernel.n;
    check_pair_truncation(l, n)?;
    let base = certify_bap(kernel, cfg)?;
    let l_gap = low_coefficient_max(l, 2 * n + 1);
    let l_shift = l.shift_down(n);
    let sweep = sweep_minimum(cfg, |z| {
        Ok(kernel.shifted_eval(z)?.re - 0.5 - horner(l_shift.coeffs(), z).norm())
    })?;
    let min = sweep.min_value();
    let estimate = sweep.boundary_estimate().min(min);
    let hard_failure = !base.verdict.is_pass() || l_gap > cfg.tol;
    let mut verdict = decide(hard_failure, min, estimate, cfg.tol);
    if verdict == Verdict::Pass && base.verdict == Verdict::Marginal {
        verdict = Verdict::Marginal;
    }
    Ok(Certificate {
        verdict,
        coefficient_gap_margin: base.coefficient_gap_margin.max(l_gap),
        pair_margin: Some(estimate),
        sweep_radii: sweep.radii(),
        sweep_values: sweep.values(),
        sweep_monotone: sweep.is_monotone(),
        ..base
    })
}

/// Certifies `|L(z)| <= |z|^{2n+1}/2` on the disc: coefficients below `2n+1`
/// vanish and `|L(z)|/|z|^{2n+1}` (a shifted series) stays below `1/2`.
pub fn certify_theorem3(l: &PowerSeries, n: usize, cfg: &SweepConfig) -> Result<Certificate> {
    check_pair_truncation(l, n)?;
    let gap = low_coefficient_max(l, 2 * n + 1);
    let shifted = l.shift_down(2 * n + 1);
    // maximise the ratio by minimising its negative
    let sweep = sweep_minimum(cfg, |z| Ok(-horner(shifted.coeffs(), z).norm()))?;
    let max_ratio = -sweep.min_value();
    let estimate = (-sweep.boundary_estimate()).max(max_ratio);
    let ratios: Vec<f64> = sweep.values().iter().map(|v| -v).collect();
    Ok(Certificate {
        verdict: decide(gap > cfg.tol, 0.5 - max_ratio, 0.5 - estimate, cfg.tol),
        coefficient_gap_margin: gap,
        min_real_part: 1.0,
        boundary_estimate: 1.0,
        pair_margin: Some(0.5 - estimate),
        max_ratio: Some(estimate),
        sweep_radii: sweep.radii(),
        sweep_monotone: ratios.windows(2).all(|w| w[1] >= w[0] - 1e-12),
        sweep_values: ratios,
        tolerance: cfg.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::evaluate;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn geometric_coefficients() {
        let k = kernel_coefficients(&KernelSpec::geometric(2, 3).unwrap(), 8).unwrap();
        for j in 0..=8 {
            let expected = if [2, 5, 8].contains(&j) { 1.0 } else { 0.0 };
            assert_eq!(k.coeff(j), c(expected, 0.0));
        }
        let m = kernel_coefficients(&KernelSpec::monomial(4), 6).unwrap();
        assert!(m.is_exact());
        assert_eq!(m.degree(), Some(4));
        assert!(kernel_coefficients(&KernelSpec::monomial(4), 3).is_err());
    }

    #[test]
    fn single_atom_measure_is_cauchy_kernel() {
        let mu = DiscreteMeasure::new(vec![(c(1.0, 0.0), 1.0)]).unwrap();
        let k = kernel_from_measure(0, mu).unwrap();
        let coeffs = kernel_coefficients(&k, 5).unwrap();
        assert!(coeffs.coeffs().iter().all(|&a| (a - 1.0).norm() < 1e-15));
    }

    #[test]
    fn roots_of_unity_measures_reproduce_geometric_kernels() {
        for (n, big_n) in [(1, 2), (2, 3), (0, 5), (3, 7)] {
            let mu = DiscreteMeasure::roots_of_unity(big_n, 0.0).unwrap();
            let k = kernel_from_measure(n, mu).unwrap();
            let g = KernelSpec::geometric(n, big_n).unwrap();
            for j in 0..40 {
                assert!((k.coefficient(j) - g.coefficient(j)).norm() < 1e-14, "n={n} N={big_n} j={j}");
            }
            let z = c(0.3, -0.6);
            assert!((k.shifted_eval(z).unwrap() - g.shifted_eval(z).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure::new(vec![(c(1.0, 0.0), 0.5)]).is_err());
        assert!(DiscreteMeasure::new(vec![(c(1.1, 0.0), 1.0)]).is_err());
        assert!(DiscreteMeasure::new(vec![(c(1.0, 0.0), 1.5), (c(-1.0, 0.0), -0.5)]).is_err());
        let json = r#"{"atoms":[{"t":[1.0,0.0],"w":0.5},{"t":[-1.0,0.0],"w":0.5}]}"#;
        let mu: DiscreteMeasure = serde_json::from_str(json).unwrap();
        assert_eq!(mu.atoms().len(), 2);
        let bad = r#"{"atoms":[{"t":[1.0,0.0],"w":0.7}]}"#;
        assert!(serde_json::from_str::<DiscreteMeasure>(bad).is_err());
    }

    #[test]
    fn moments_of_roots_of_unity() {
        for big_n in 1..=8 {
            let mu = DiscreteMeasure::roots_of_unity(big_n, 0.4).unwrap();
            assert_eq!(moment_check(&mu, 0), 0.0);
            assert!(moment_check(&mu, big_n - 1) < 1e-15);
            assert!((moment_check(&mu, big_n) - 1.0).abs() < 1e-14);
        }
        let point = DiscreteMeasure::new(vec![(c(1.0, 0.0), 1.0)]).unwrap();
        assert_eq!(moment_check(&point, 1), 1.0);
    }

    #[test]
    fn monomial_real_part_is_one() {
        let sweep = min_real_part(&KernelSpec::monomial(3), &DEFAULT_SWEEP_RADII, 256).unwrap();
        assert!(sweep.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn geometric_real_part_tends_to_half() {
        let k = KernelSpec::geometric(2, 3).unwrap();
        let sweep = min_real_part(&k, &DEFAULT_SWEEP_RADII, 1024).unwrap();
        assert!(sweep.is_monotone());
        for circle in &sweep.circles {
            // Re 1/(1 - w) on |w| = s has minimum 1/(1 + s)
            let s = circle.radius.powi(3);
            assert!((circle.value - 1.0 / (1.0 + s)).abs() < 1e-9);
            assert!(circle.value > 0.5);
        }
        assert!((sweep.boundary_estimate() - 0.5).abs() < 1e-7);
    }

    #[test]
    fn measure_kernel_poisson_lower_bound() {
        let mu = DiscreteMeasure::new(vec![
            (C64::from_polar(1.0, 0.3), 0.2),
            (C64::from_polar(1.0, 2.0), 0.5),
            (C64::from_polar(1.0, -1.7), 0.3),
        ])
        .unwrap();
        let k = kernel_from_measure(0, mu).unwrap();
        let sweep = min_real_part(&k, &[0.2, 0.5, 0.8, 0.95], 2048).unwrap();
        for circle in &sweep.circles {
            let r = circle.radius;
            assert!(circle.value >= 0.5 + 0.5 * (1.0 - r) / (1.0 + r) - 1e-12);
        }
    }

    #[test]
    fn pole_on_circle_is_reported() {
        let k = KernelSpec::geometric(1, 4).unwrap();
        assert!(matches!(
            min_real_part(&k, &[1.0], 64),
            Err(HardyError::PoleProximity { .. })
        ));
    }

    #[test]
    fn certify_geometric_iff() {
        let cfg = SweepConfig::default();
        let pass = certify_bap(&KernelSpec::geometric(2, 3).unwrap(), &cfg).unwrap();
        assert!(pass.verdict.is_pass());
        assert_eq!(pass.verdict, Verdict::Marginal);
        let fail = certify_bap(&KernelSpec::geometric(2, 2).unwrap(), &cfg).unwrap();
        assert_eq!(fail.verdict, Verdict::Fail);
        assert_eq!(fail.coefficient_gap_margin, 1.0);
        let mono = certify_bap(&KernelSpec::monomial(3), &cfg).unwrap();
        assert_eq!(mono.verdict, Verdict::Pass);
        assert_eq!(mono.min_real_part, 1.0);
    }

    #[test]
    fn certify_rejects_unnormalized_kernel() {
        let k = KernelSpec::from_coefficients(1, PowerSeries::from_real(&[0.0, 2.0, 0.0, 0.5]));
        assert!(matches!(
            certify_bap(&k, &SweepConfig::default()),
            Err(HardyError::NotNormalized { .. })
        ));
    }

    #[test]
    fn certify_coefficient_kernel_with_negative_real_part() {
        // K/z = 1 + 2 z^3: gap fine for n = 1, but Re(1 + 2w) dips below 1/2
        let k = KernelSpec::from_coefficients(1, PowerSeries::from_real(&[0.0, 1.0, 0.0, 0.0, 2.0]));
        let cert = certify_bap(&k, &SweepConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        assert_eq!(cert.coefficient_gap_margin, 0.0);
        assert!(cert.min_real_part < 0.0);
    }

    /// `0.1 z^{2n}` stored up to index `2n+1`.
    fn early_coefficient(n: usize) -> PowerSeries {
        let mut coeffs = vec![c(0.0, 0.0); 2 * n + 2];
        coeffs[2 * n] = c(0.1, 0.0);
        PowerSeries::polynomial(coeffs)
    }

    #[test]
    fn pair_certificates() {
        let cfg = SweepConfig::default();
        for n in 0..4 {
            let k = KernelSpec::monomial(n);
            let half = PowerSeries::monomial(2 * n + 1).scale(c(0.5, 0.0));
            let cert = certify_pair(&k, &half, &cfg).unwrap();
            assert!(cert.verdict.is_pass(), "n = {n}: {cert:?}");
            assert!(cert.pair_margin.unwrap().abs() < 1e-6);

            let big = PowerSeries::monomial(2 * n + 1).scale(c(0.6, 0.0));
            assert_eq!(certify_pair(&k, &big, &cfg).unwrap().verdict, Verdict::Fail);

            if n > 0 {
                let early = early_coefficient(n);
                let cert = certify_pair(&k, &early, &cfg).unwrap();
                assert_eq!(cert.verdict, Verdict::Fail);
                assert!(cert.coefficient_gap_margin > 0.09);
            }
        }
        assert!(certify_pair(&KernelSpec::monomial(2), &PowerSeries::monomial(3), &cfg).is_err());
    }

    #[test]
    fn theorem3_certificates() {
        let cfg = SweepConfig::default();
        for n in 0..3 {
            let half = PowerSeries::monomial(2 * n + 1).scale(c(0.5, 0.0));
            let cert = certify_theorem3(&half, n, &cfg).unwrap();
            assert!(cert.verdict.is_pass());
            assert!((cert.max_ratio.unwrap() - 0.5).abs() < 1e-12);

            for extra in 0..3 {
                let big_n = 2 * n + 1 + extra;
                for (cval, ok) in [(0.3, true), (0.5, true), (0.51, false)] {
                    let l = PowerSeries::monomial(big_n).scale(c(cval, 0.0));
                    let cert = certify_theorem3(&l, n, &cfg).unwrap();
                    assert_eq!(cert.verdict.is_pass(), ok, "n={n} N={big_n} c={cval}");
                }
            }
            if n > 0 {
                let l = early_coefficient(n);
                assert_eq!(certify_theorem3(&l, n, &cfg).unwrap().verdict, Verdict::Fail);
            }
        }
        // Σ ψ_k = 1/2 with phases
        let l = PowerSeries::polynomial(vec![
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            C64::from_polar(0.2, 0.4),
            C64::from_polar(0.2, -1.1),
            C64::from_polar(0.1, 2.9),
        ]);
        assert!(certify_theorem3(&l, 1, &cfg).unwrap().verdict.is_pass());
    }

    #[test]
    fn apply_operator_examples() {
        let f = PowerSeries::truncated(
            (0..=40).map(|k| c(0.5f64.powi(k), 0.0)).collect(),
            Some(0.5f64.powi(41) / 0.5),
        );
        let t = apply_operator(&KernelSpec::monomial(3), &f).unwrap();
        assert!(t.is_exact());
        assert_eq!(t.degree(), Some(3));
        assert_eq!(t.coeff(3), f.coeff(3));

        let t = apply_operator(&KernelSpec::geometric(1, 3).unwrap(), &f).unwrap();
        for k in 0..=40 {
            let expected = if k >= 1 && (k - 1) % 3 == 0 { 0.5f64.powi(k as i32) } else { 0.0 };
            assert_eq!(t.coeff(k), c(expected, 0.0));
        }
        assert!(t.tail_bound().is_some());
        // (ρz)/(1 - (ρz)^3) at z = 0.4
        let z = c(0.4, 0.0);
        let w = 0.5 * z;
        assert!((evaluate(&t, z).unwrap() - w / (1.0 - w * w * w)).norm() < 1e-14);
    }

    #[test]
    fn certified_kernels_annihilate_low_polynomials() {
        let p = PowerSeries::polynomial(vec![c(1.0, 2.0), c(-0.5, 0.3), c(0.7, 0.0)]);
        for k in [
            KernelSpec::monomial(3),
            KernelSpec::geometric(3, 4).unwrap(),
            kernel_from_measure(3, DiscreteMeasure::roots_of_unity(5, 0.2).unwrap()).unwrap(),
        ] {
            let t = apply_operator(&k, &p).unwrap();
            assert!(t.coeffs().iter().all(|a| a.norm() < 1e-15));
        }
    }
}
