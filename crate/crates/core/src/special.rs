//! The complete elliptic integral of the first kind, the extremal function
//! families, and closed-form test functions.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::series::{sample_boundary, BoundaryGrid, DiscFunction, PowerSeries, C64};

/// Denominators smaller than this are treated as poles.
pub const POLE_TOL: f64 = 1e-10;

/// Complete elliptic integral of the first kind `K(x)` for modulus `x ∈ [0, 1)`,
/// computed as `π / (2 AGM(1, √(1 - x²)))`.
pub fn elliptic_k(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(HardyError::InvalidArgument(format!(
            "elliptic_k needs 0 <= x < 1, got {x}"
        )));
    }
    let mut a = 1.0_f64;
    let mut b = ((1.0 - x) * (1.0 + x)).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
    }
    Ok(PI / (2.0 * a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `z^n (z^{N-n} - ρ) / (1 - ρ z^{N-n})`, inner, with `N > n`.
    BlaschkeShift {
        n: usize,
        #[serde(rename = "N")]
        big_n: usize,
    },
    /// `1 / (1 - ρ z)`.
    CayleyRational,
}

/// One member of an extremal function family, parameterised by `ρ ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalFamily {
    pub kind: FamilyKind,
    pub rho: f64,
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(HardyError::InvalidArgument(format!(
            "family parameter rho = {rho} must lie in [0, 1)"
        )));
    }
    Ok(())
}

impl ExtremalFamily {
    pub fn blaschke_shift(n: usize, big_n: usize, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        if big_n <= n {
            return Err(HardyError::InvalidArgument(format!(
                "blaschke_shift needs N > n, got n = {n}, N = {big_n}"
            )));
        }
        Ok(ExtremalFamily {
            kind: FamilyKind::BlaschkeShift { n, big_n },
            rho,
        })
    }

    pub fn cayley(rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Ok(ExtremalFamily {
            kind: FamilyKind::CayleyRational,
            rho,
        })
    }

    /// Closed-form Taylor coefficient at index `k`.
    pub fn coefficient(&self, k: usize) -> f64 {
        let rho = self.rho;
        match self.kind {
            FamilyKind::CayleyRational => rho.powi(k as i32),
            FamilyKind::BlaschkeShift { n, big_n } => {
                let step = big_n - n;
                if k == n {
                    -rho
                } else if k > n && (k - n).is_multiple_of(step) {
                    (1.0 - rho * rho) * rho.powi(((k - n) / step - 1) as i32)
                } else {
                    0.0
                }
            }
        }
    }

    /// Bound on `Σ_{k > upto} |f̂_k|`.
    pub fn tail_bound(&self, upto: usize) -> f64 {
        let rho = self.rho;
        match self.kind {
            FamilyKind::CayleyRational => rho.powi(upto as i32 + 1) / (1.0 - rho),
            FamilyKind::BlaschkeShift { n, big_n } => {
                if upto < n {
                    return 1.0 + 2.0 * rho;
                }
                let terms = (upto - n) / (big_n - n);
                (1.0 + rho) * rho.powi(terms as i32)
            }
        }
    }
}

impl DiscFunction for ExtremalFamily {
    fn eval(&self, z: C64) -> Result<C64> {
        check_in_disc(z)?;
        let rho = self.rho;
        match self.kind {
            FamilyKind::CayleyRational => {
                let den = 1.0 - rho * z;
                check_pole(z, den)?;
                Ok(1.0 / den)
            }
            FamilyKind::BlaschkeShift { n, big_n } => {
                let w = z.powu((big_n - n) as u32);
                let den = 1.0 - rho * w;
                check_pole(z, den)?;
                Ok(z.powu(n as u32) * (w - rho) / den)
            }
        }
    }

    fn boundary_regular(&self) -> bool {
        true
    }
}

impl fmt::Display for ExtremalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::CayleyRational => write!(f, "cayley:{}", self.rho),
            FamilyKind::BlaschkeShift { n, big_n } => {
                write!(f, "blaschke:{},{},{}", n, big_n, self.rho)
            }
        }
    }
}

fn check_in_disc(z: C64) -> Result<()> {
    let modulus = z.norm();
    if modulus > 1.0 + 1e-14 {
        return Err(HardyError::OutsideDisc {
            z: z.to_string(),
            modulus,
        });
    }
    Ok(())
}

fn check_pole(z: C64, den: C64) -> Result<()> {
    if den.norm() < POLE_TOL {
        return Err(HardyError::PoleProximity {
            z: z.to_string(),
            distance: den.norm(),
        });
    }
    Ok(())
}

/// Exact Taylor coefficients `f̂_0..f̂_upto` of a family member, generated by
/// the geometric recurrence of `(1 - ρ w)^{-1}`.
pub fn family_coefficients(family: &ExtremalFamily, upto: usize) -> Result<PowerSeries> {
    let rho = family.rho;
    let mut coeffs = vec![C64::new(0.0, 0.0); upto + 1];
    match family.kind {
        FamilyKind::CayleyRational => {
            let mut term = 1.0;
            for c in coeffs.iter_mut() {
                *c = C64::new(term, 0.0);
                term *= rho;
            }
        }
        FamilyKind::BlaschkeShift { n, big_n } => {
            if upto < big_n {
                return Err(HardyError::InvalidArgument(format!(
                    "family_coefficients needs upto >= N = {big_n}, got {upto}"
                )));
            }
            coeffs[n] = C64::new(-rho, 0.0);
            let mut term = 1.0 - rho * rho;
            for k in (big_n..=upto).step_by(big_n - n) {
                coeffs[k] = C64::new(term, 0.0);
                term *= rho;
            }
        }
    }
    let tail = family.tail_bound(upto);
    Ok(if tail == 0.0 {
        PowerSeries::polynomial(coeffs)
    } else {
        PowerSeries::truncated(coeffs, Some(tail))
    })
}

/// Closed-form functions addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ClosedForm {
    Family(ExtremalFamily),
    /// `(ρz)^n / (1 - (ρz)^N)`, the image of `1/(1 - ρz)` under the geometric
    /// kernel; `ρ = 1` is the kernel itself, with poles on the circle.
    GeometricImage {
        n: usize,
        #[serde(rename = "N")]
        period: usize,
        rho: f64,
    },
}

impl ClosedForm {
    pub fn geometric_image(n: usize, period: usize, rho: f64) -> Result<Self> {
        if period == 0 {
            return Err(HardyError::InvalidArgument("period N must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(HardyError::InvalidArgument(format!(
                "geometric image parameter rho = {rho} must lie in [0, 1]"
            )));
        }
        Ok(ClosedForm::GeometricImage { n, period, rho })
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        match *self {
            ClosedForm::Family(f) => f.coefficient(k),
            ClosedForm::GeometricImage { n, period, rho } => {
                if k >= n && (k - n).is_multiple_of(period) {
                    rho.powi(k as i32)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn tail_bound(&self, upto: usize) -> f64 {
        match *self {
            ClosedForm::Family(f) => f.tail_bound(upto),
            ClosedForm::GeometricImage { n, period, rho } => {
                let next = if upto < n {
                    n
                } else {
                    n + ((upto - n) / period + 1) * period
                };
                if rho >= 1.0 {
                    f64::INFINITY
                } else {
                    rho.powi(next as i32) / (1.0 - rho.powi(period as i32))
                }
            }
        }
    }
}

impl DiscFunction for ClosedForm {
    fn eval(&self, z: C64) -> Result<C64> {
        match self {
            ClosedForm::Family(f) => f.eval(z),
            ClosedForm::GeometricImage { n, period, rho } => {
                check_in_disc(z)?;
                let w = *rho * z;
                let den = 1.0 - w.powu(*period as u32);
                check_pole(z, den)?;
                Ok(w.powu(*n as u32) / den)
            }
        }
    }

    fn boundary_regular(&self) -> bool {
        match self {
            ClosedForm::Family(_) => true,
            ClosedForm::GeometricImage { rho, .. } => *rho < 1.0,
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::Family(fam) => fam.fmt(f),
            ClosedForm::GeometricImage { n, period, rho } => {
                write!(f, "geometric-image:{n},{period},{rho}")
            }
        }
    }
}

/// A test function given either by coefficients or in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    Series(PowerSeries),
    Closed(ClosedForm),
}

impl From<PowerSeries> for TestFunction {
    fn from(f: PowerSeries) -> Self {
        TestFunction::Series(f)
    }
}

impl From<ClosedForm> for TestFunction {
    fn from(f: ClosedForm) -> Self {
        TestFunction::Closed(f)
    }
}

impl From<ExtremalFamily> for TestFunction {
    fn from(f: ExtremalFamily) -> Self {
        TestFunction::Closed(ClosedForm::Family(f))
    }
}

impl TestFunction {
    pub fn coefficient(&self, k: usize) -> C64 {
        match self {
            TestFunction::Series(f) => f.coeff(k),
            TestFunction::Closed(c) => C64::new(c.coefficient(k), 0.0),
        }
    }

    /// Coefficients up to index `upto`.
    pub fn coefficients(&self, upto: usize) -> PowerSeries {
        match self {
            TestFunction::Series(f) => {
                if upto >= f.truncation() {
                    f.clone()
                } else {
                    let tail = f.tail_bound().map(|t| {
                        t + f.coeffs()[upto + 1..].iter().map(|c| c.norm()).sum::<f64>()
                    });
                    PowerSeries::truncated(f.coeffs()[..=upto].to_vec(), tail)
                }
            }
            TestFunction::Closed(c) => {
                let coeffs = (0..=upto).map(|k| C64::new(c.coefficient(k), 0.0)).collect();
                let tail = c.tail_bound(upto);
                if tail == 0.0 {
                    PowerSeries::polynomial(coeffs)
                } else {
                    PowerSeries::truncated(coeffs, Some(tail))
                }
            }
        }
    }

    /// Coefficients up to the first index whose tail bound drops below `tol`,
    /// capped at `max_len - 1`.
    pub fn coefficients_to_tol(&self, tol: f64, max_len: usize) -> PowerSeries {
        match self {
            TestFunction::Series(f) => f.clone(),
            TestFunction::Closed(c) => {
                let mut upto = 64;
                while upto + 1 < max_len && c.tail_bound(upto) > tol {
                    upto = (2 * upto).min(max_len - 1);
                }
                self.coefficients(upto)
            }
        }
    }

    pub fn is_exact_polynomial(&self) -> bool {
        matches!(self, TestFunction::Series(f) if f.is_exact())
    }

    /// Samples on the circle of radius `radius`; closed forms are evaluated
    /// directly rather than through truncated coefficients.
    pub fn sample(&self, radius: f64, m_grid: usize) -> Result<BoundaryGrid> {
        sample_boundary(self, radius, m_grid)
    }

    /// Short identifier for reports.
    pub fn id(&self) -> String {
        match self {
            TestFunction::Closed(c) => c.to_string(),
            TestFunction::Series(f) => {
                let deg = f.degree().map_or(-1, |d| d as i64);
                match f.tail_kind() {
                    crate::series::TailKind::ExactPolynomial => format!("poly:deg{deg}"),
                    crate::series::TailKind::TruncatedAnalytic => {
                        format!("series:M{}", f.truncation())
                    }
                }
            }
        }
    }
}

impl DiscFunction for TestFunction {
    fn eval(&self, z: C64) -> Result<C64> {
        match self {
            TestFunction::Series(f) => f.eval(z),
            TestFunction::Closed(c) => c.eval(z),
        }
    }

    fn boundary_regular(&self) -> bool {
        match self {
            TestFunction::Series(f) => f.boundary_regular(),
            TestFunction::Closed(c) => c.boundary_regular(),
        }
    }
}

/// Nonnegative weights `ψ_k` supported on `start..start + values.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiWeights {
    start: usize,
    values: Vec<f64>,
}

impl PsiWeights {
    pub fn new(start: usize, values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(HardyError::InvalidArgument(format!(
                "weights must be finite and nonnegative, got {bad}"
            )));
        }
        Ok(PsiWeights { start, values })
    }

    /// `ψ_k = ρ^k` for `start <= k <= end`.
    pub fn geometric(rho: f64, start: usize, end: usize) -> Result<Self> {
        let values = (start..=end).map(|k| rho.powi(k as i32)).collect();
        Self::new(start, values)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &w)| (self.start + i, w))
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `Σ ψ_k t^k`.
    pub fn power_sum(&self, t: f64) -> f64 {
        self.iter().map(|(k, w)| w * t.powi(k as i32)).sum()
    }

    pub fn digest(&self) -> String {
        format!(
            "psi[{}..={}]:sum={:.12}",
            self.start,
            self.start + self.values.len().saturating_sub(1),
            self.sum()
        )
    }
}

/// Root of `map(ρ) = target` on `[0, 1]` by bisection, to absolute `1e-12`.
///
/// `map` must be continuous and increasing; `map(1)` may be `+∞`.
pub fn bohr_threshold(map: impl Fn(f64) -> f64, target: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let (f_lo, f_hi) = (map(lo), map(hi));
    if !(f_lo <= target && target <= f_hi) {
        return Err(HardyError::Bracket {
            lo: f_lo,
            hi: f_hi,
            target,
        });
    }
    while hi - lo > 2e-13 {
        let mid = 0.5 * (lo + hi);
        if map(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
