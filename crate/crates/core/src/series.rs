//! Analytic functions on the unit disc, stored as Taylor coefficients or as
//! uniform samples on a circle, together with Hadamard products and the
//! radius-`r` proxies of the Hardy norms.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};

pub type C64 = Complex64;

/// Default number of stored coefficients (minus one) for analytic inputs.
pub const DEFAULT_TRUNCATION: usize = 256;

/// Default number of samples on a boundary circle.
pub const DEFAULT_GRID: usize = 4096;

/// A truncated series whose declared tail bound is below this value may be
/// evaluated on the unit circle.
pub const BOUNDARY_TAIL_TOL: f64 = 1e-13;

const DISC_SLACK: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    ExactPolynomial,
    TruncatedAnalytic,
}

/// Taylor coefficients `f̂_0, ..., f̂_M` of a function holomorphic in the disc.
///
/// With [`TailKind::ExactPolynomial`] the coefficients describe the function
/// exactly. Otherwise the series is a truncation, optionally accompanied by a
/// bound on `Σ_{k>M} |f̂_k|` supplied by whoever produced the coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PowerSeriesRepr", into = "PowerSeriesRepr")]
pub struct PowerSeries {
    coeffs: Vec<C64>,
    tail_kind: TailKind,
    tail_bound: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct PowerSeriesRepr {
    coeffs: Vec<[f64; 2]>,
    truncation: usize,
    tail_kind: TailKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail_bound: Option<f64>,
}

impl TryFrom<PowerSeriesRepr> for PowerSeries {
    type Error = HardyError;

    fn try_from(repr: PowerSeriesRepr) -> Result<Self> {
        if repr.coeffs.len() != repr.truncation + 1 {
            return Err(HardyError::MalformedSeries(format!(
                "{} coefficients given for truncation {}",
                repr.coeffs.len(),
                repr.truncation
            )));
        }
        if repr.coeffs.iter().flatten().any(|x| !x.is_finite()) {
            return Err(HardyError::MalformedSeries("non-finite coefficient".into()));
        }
        let coeffs = repr.coeffs.iter().map(|&[re, im]| C64::new(re, im)).collect();
        Ok(PowerSeries {
            coeffs,
            tail_kind: repr.tail_kind,
            tail_bound: repr.tail_bound,
        })
    }
}

impl From<PowerSeries> for PowerSeriesRepr {
    fn from(f: PowerSeries) -> Self {
        PowerSeriesRepr {
            truncation: f.truncation(),
            coeffs: f.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            tail_kind: f.tail_kind,
            tail_bound: f.tail_bound,
        }
    }
}

impl PowerSeries {
    pub fn new(mut coeffs: Vec<C64>, tail_kind: TailKind) -> Self {
        if coeffs.is_empty() {
            coeffs.push(C64::new(0.0, 0.0));
        }
        let tail_bound = match tail_kind {
            TailKind::ExactPolynomial => Some(0.0),
            TailKind::TruncatedAnalytic => None,
        };
        PowerSeries {
            coeffs,
            tail_kind,
            tail_bound,
        }
    }

    pub fn polynomial(coeffs: Vec<C64>) -> Self {
        Self::new(coeffs, TailKind::ExactPolynomial)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// A truncated analytic series; `tail_bound` bounds the sum of the moduli
    /// of the discarded coefficients when known.
    pub fn truncated(coeffs: Vec<C64>, tail_bound: Option<f64>) -> Self {
        let mut f = Self::new(coeffs, TailKind::TruncatedAnalytic);
        f.tail_bound = tail_bound;
        f
    }

    /// The monomial `e_n(z) = z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
        coeffs[n] = C64::new(1.0, 0.0);
        Self::polynomial(coeffs)
    }

    pub fn zero() -> Self {
        Self::polynomial(vec![C64::new(0.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_kind(&self) -> TailKind {
        self.tail_kind
    }

    pub fn tail_bound(&self) -> Option<f64> {
        self.tail_bound
    }

    pub fn with_tail_bound(mut self, bound: Option<f64>) -> Self {
        if self.tail_kind == TailKind::TruncatedAnalytic {
            self.tail_bound = bound;
        }
        self
    }

    /// Coefficient at index `k`; zero beyond the stored range.
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Index of the highest nonzero stored coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != C64::new(0.0, 0.0))
    }

    pub fn is_exact(&self) -> bool {
        self.tail_kind == TailKind::ExactPolynomial
    }

    /// Whether boundary values may be computed from the stored coefficients.
    pub fn is_boundary_regular(&self) -> bool {
        self.is_exact() || self.tail_bound.is_some_and(|t| t <= BOUNDARY_TAIL_TOL)
    }

    pub fn scale(&self, c: C64) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
            tail_kind: self.tail_kind,
            tail_bound: self.tail_bound.map(|t| t * c.norm()),
        }
    }

    /// `Σ_k f̂_{k+shift} z^k`, i.e. `(f - low part) / z^shift` computed on the
    /// coefficient sequence.
    pub fn shift_down(&self, shift: usize) -> Self {
        let coeffs = self.coeffs.iter().skip(shift).copied().collect();
        PowerSeries {
            coeffs: if shift > self.truncation() {
                vec![C64::new(0.0, 0.0)]
            } else {
                coeffs
            },
            tail_kind: self.tail_kind,
            tail_bound: self.tail_bound,
        }
    }

    /// Multiplication by `z^shift`.
    pub fn shift_up(&self, shift: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); shift];
        coeffs.extend_from_slice(&self.coeffs);
        PowerSeries {
            coeffs,
            tail_kind: self.tail_kind,
            tail_bound: self.tail_bound,
        }
    }

    /// Sum of two series; truncated to the shorter truncation unless both are
    /// exact polynomials.
    pub fn add(&self, other: &PowerSeries) -> Self {
        let both_exact = self.is_exact() && other.is_exact();
        let len = if both_exact {
            self.coeffs.len().max(other.coeffs.len())
        } else {
            self.coeffs.len().min(other.coeffs.len())
        };
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        if both_exact {
            Self::polynomial(coeffs)
        } else {
            let tail = match (self.tail_bound, other.tail_bound) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            Self::truncated(coeffs, tail)
        }
    }

    /// ℓ² norm of the stored coefficients.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// A function holomorphic in the open disc that can be evaluated pointwise.
pub trait DiscFunction {
    fn eval(&self, z: C64) -> Result<C64>;

    /// Whether the function extends continuously to the closed disc.
    fn boundary_regular(&self) -> bool;
}

impl DiscFunction for PowerSeries {
    fn eval(&self, z: C64) -> Result<C64> {
        evaluate(self, z)
    }

    fn boundary_regular(&self) -> bool {
        self.is_boundary_regular()
    }
}

/// Horner evaluation of the stored coefficients at `z` in the closed disc.
pub fn evaluate(f: &PowerSeries, z: C64) -> Result<C64> {
    let modulus = z.norm();
    if modulus > 1.0 + DISC_SLACK {
        return Err(HardyError::OutsideDisc {
            z: z.to_string(),
            modulus,
        });
    }
    if modulus >= 1.0 - DISC_SLACK && !f.is_boundary_regular() {
        return Err(HardyError::BoundaryNotRegular);
    }
    Ok(horner(&f.coeffs, z))
}

pub(crate) fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub(crate) fn check_grid_size(m_grid: usize) -> Result<()> {
    if m_grid < 2 || !m_grid.is_power_of_two() {
        return Err(HardyError::GridSize(m_grid));
    }
    Ok(())
}

/// The point `r·exp(2πi j / m)`.
pub fn grid_point(radius: f64, j: usize, m_grid: usize) -> C64 {
    C64::from_polar(radius, 2.0 * PI * j as f64 / m_grid as f64)
}

/// Uniform samples of a function on the circle of radius `radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGrid {
    radius: f64,
    samples: Vec<C64>,
}

impl BoundaryGrid {
    pub fn new(radius: f64, samples: Vec<C64>) -> Result<Self> {
        check_grid_size(samples.len())?;
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(HardyError::Radius(radius));
        }
        Ok(BoundaryGrid { radius, samples })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn m_grid(&self) -> usize {
        self.samples.len()
    }

    pub fn point(&self, j: usize) -> C64 {
        grid_point(self.radius, j, self.samples.len())
    }

    pub fn scale(&self, c: C64) -> Self {
        BoundaryGrid {
            radius: self.radius,
            samples: self.samples.iter().map(|&s| s * c).collect(),
        }
    }
}

/// Samples `f` at `r·exp(2πi j/m_grid)`, `j = 0..m_grid`.
pub fn sample_boundary<F: DiscFunction + ?Sized>(
    f: &F,
    radius: f64,
    m_grid: usize,
) -> Result<BoundaryGrid> {
    check_grid_size(m_grid)?;
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(HardyError::Radius(radius));
    }
    if radius >= 1.0 && !f.boundary_regular() {
        return Err(HardyError::BoundaryNotRegular);
    }
    let samples = (0..m_grid)
        .map(|j| f.eval(grid_point(radius, j, m_grid)))
        .collect::<Result<Vec<_>>>()?;
    BoundaryGrid::new(radius, samples)
}

/// `d_k = (1/M) Σ_j s_j exp(-2πi jk/M)` for `k = 0..M`.
pub(crate) fn dft(samples: &[C64]) -> Vec<C64> {
    let mut buf = samples.to_vec();
    let fft = FftPlanner::new().plan_fft_forward(buf.len());
    fft.process(&mut buf);
    let scale = 1.0 / samples.len() as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Taylor coefficients recovered from boundary samples; indices at or above
/// `M_grid/2` are discarded.
pub fn fourier_coefficients(g: &BoundaryGrid) -> PowerSeries {
    let d = dft(&g.samples);
    let half = g.m_grid() / 2;
    let mut coeffs = Vec::with_capacity(half);
    let mut rk = 1.0;
    for (k, dk) in d.into_iter().take(half).enumerate() {
        if rk < f64::MIN_POSITIVE * 1e16 {
            log::warn!(
                "radius {}^{} underflows; coefficients from index {} on are dropped",
                g.radius,
                k,
                k
            );
            break;
        }
        coeffs.push(dk / rk);
        rk *= g.radius;
    }
    PowerSeries::truncated(coeffs, None)
}

/// Coefficientwise product `Σ f̂_k ĝ_k z^k`.
pub fn hadamard(f: &PowerSeries, g: &PowerSeries) -> PowerSeries {
    let trunc = f.truncation().min(g.truncation());
    let coeffs: Vec<C64> = (0..=trunc).map(|k| f.coeff(k) * g.coeff(k)).collect();
    let covers = |a: &PowerSeries, b: &PowerSeries| {
        a.is_exact() && a.degree().is_none_or(|d| d <= b.truncation())
    };
    if covers(f, g) || covers(g, f) {
        PowerSeries::polynomial(coeffs)
    } else {
        PowerSeries::truncated(coeffs, None)
    }
}

/// Hardy exponent `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HardyExponent {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "inf")]
    Infinity,
}

impl HardyExponent {
    pub const ALL: [HardyExponent; 3] = [Self::One, Self::Two, Self::Infinity];
}

impl fmt::Display for HardyExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::One => "1",
            Self::Two => "2",
            Self::Infinity => "inf",
        })
    }
}

impl FromStr for HardyExponent {
    type Err = HardyError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Self::One),
            "2" => Ok(Self::Two),
            "inf" | "infinity" | "∞" => Ok(Self::Infinity),
            other => Err(HardyError::InvalidArgument(format!(
                "unsupported Hardy exponent {other:?} (expected 1, 2 or inf)"
            ))),
        }
    }
}

/// Either representation of a function accepted by [`hardy_norm`].
#[derive(Debug, Clone, Copy)]
pub enum NormInput<'a> {
    Series(&'a PowerSeries),
    Grid(&'a BoundaryGrid),
}

impl<'a> From<&'a PowerSeries> for NormInput<'a> {
    fn from(f: &'a PowerSeries) -> Self {
        NormInput::Series(f)
    }
}

impl<'a> From<&'a BoundaryGrid> for NormInput<'a> {
    fn from(g: &'a BoundaryGrid) -> Self {
        NormInput::Grid(g)
    }
}

/// Radius-`r` proxy of `‖f‖_q`: Parseval for `q = 2`, sample maximum for
/// `q = ∞`, trapezoid mean of the modulus for `q = 1`.
pub fn hardy_norm<'a>(input: impl Into<NormInput<'a>>, q: HardyExponent) -> Result<f64> {
    match (input.into(), q) {
        (NormInput::Series(f), HardyExponent::Two) => Ok(f.l2_norm()),
        (NormInput::Series(_), _) => Err(HardyError::GridRequired),
        (NormInput::Grid(g), HardyExponent::Two) => {
            let mean = g.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / g.m_grid() as f64;
            Ok(mean.sqrt())
        }
        (NormInput::Grid(g), HardyExponent::One) => {
            Ok(g.samples.iter().map(|s| s.norm()).sum::<f64>() / g.m_grid() as f64)
        }
        (NormInput::Grid(g), HardyExponent::Infinity) => {
            Ok(g.samples.iter().map(|s| s.norm()).fold(0.0, f64::max))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Coefficients of 1/(1 - ρz) up to index m, with the geometric tail bound.
    fn cayley(rho: f64, m: usize) -> PowerSeries {
        let coeffs = (0..=m).map(|k| c(rho.powi(k as i32), 0.0)).collect();
        PowerSeries::truncated(coeffs, Some(rho.powi(m as i32 + 1) / (1.0 - rho)))
    }

    struct Cayley(f64);

    impl DiscFunction for Cayley {
        fn eval(&self, z: C64) -> Result<C64> {
            Ok(1.0 / (1.0 - self.0 * z))
        }
        fn boundary_regular(&self) -> bool {
            true
        }
    }

    #[test]
    fn evaluate_monomial_and_zero() {
        assert_eq!(evaluate(&PowerSeries::monomial(3), c(0.5, 0.0)).unwrap(), c(0.125, 0.0));
        let z = evaluate(&PowerSeries::zero(), c(0.3, -0.7)).unwrap();
        assert_eq!(z, c(0.0, 0.0));
    }

    #[test]
    fn evaluate_truncated_geometric() {
        let f = cayley(0.5, 60);
        // tail (ρ|z|)^{61}/(1-ρ|z|) is far below 1e-12
        let v = evaluate(&f, c(0.4, 0.0)).unwrap();
        assert!((v - c(1.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn evaluate_rejects_outside_and_unregular_boundary() {
        let f = PowerSeries::truncated(vec![c(1.0, 0.0); 10], None);
        assert!(matches!(
            evaluate(&f, c(1.1, 0.0)),
            Err(HardyError::OutsideDisc { .. })
        ));
        assert_eq!(evaluate(&f, c(0.0, 1.0)), Err(HardyError::BoundaryNotRegular));
        assert!(evaluate(&PowerSeries::monomial(2), c(0.0, 1.0)).is_ok());
    }

    #[test]
    fn sample_monomial_on_four_points() {
        let g = sample_boundary(&PowerSeries::monomial(1), 1.0, 4).unwrap();
        let expected = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (s, e) in g.samples().iter().zip(expected) {
            assert!((s - e).norm() < 1e-15);
        }
        let ones = sample_boundary(&PowerSeries::from_real(&[1.0]), 0.9, 8).unwrap();
        assert!(ones.samples().iter().all(|&s| s == c(1.0, 0.0)));
    }

    #[test]
    fn sample_rejects_bad_grid_and_radius() {
        let f = PowerSeries::monomial(1);
        assert_eq!(sample_boundary(&f, 1.0, 12), Err(HardyError::GridSize(12)));
        assert_eq!(sample_boundary(&f, 1.0, 1), Err(HardyError::GridSize(1)));
        assert_eq!(sample_boundary(&f, 1.2, 8), Err(HardyError::Radius(1.2)));
        assert_eq!(sample_boundary(&f, 0.0, 8), Err(HardyError::Radius(0.0)));
        let g = PowerSeries::truncated(vec![c(1.0, 0.0); 4], None);
        assert_eq!(sample_boundary(&g, 1.0, 8), Err(HardyError::BoundaryNotRegular));
    }

    #[test]
    fn cayley_samples_recover_geometric_coefficients() {
        let g = sample_boundary(&Cayley(0.5), 1.0, 4096).unwrap();
        let f = fourier_coefficients(&g);
        for k in 0..=30 {
            assert!((f.coeff(k) - c(0.5f64.powi(k as i32), 0.0)).norm() < 1e-10, "k = {k}");
        }
        assert_eq!(f.tail_kind(), TailKind::TruncatedAnalytic);
        assert_eq!(f.truncation(), 4096 / 2 - 1);
    }

    #[test]
    fn fourier_coefficients_of_monomial_and_constant() {
        let g = sample_boundary(&PowerSeries::monomial(2), 1.0, 8).unwrap();
        let f = fourier_coefficients(&g);
        for k in 0..4 {
            let expected = if k == 2 { 1.0 } else { 0.0 };
            assert!((f.coeff(k) - c(expected, 0.0)).norm() < 1e-15);
        }
        let g = sample_boundary(&PowerSeries::from_real(&[3.0]), 0.7, 8).unwrap();
        let f = fourier_coefficients(&g);
        assert!((f.coeff(0) - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hadamard_masks_and_identity() {
        let f = cayley(0.5, 30);
        let e3 = PowerSeries::monomial(3);
        let masked = hadamard(&e3, &f);
        assert!(masked.is_exact());
        assert_eq!(masked.coeff(3), f.coeff(3));
        assert_eq!(masked.degree(), Some(3));

        let ones = PowerSeries::truncated(vec![c(1.0, 0.0); 31], None);
        assert_eq!(hadamard(&ones, &f).coeffs(), f.coeffs());
    }

    #[test]
    fn hadamard_of_geometric_kernel_with_cayley() {
        // z^2/(1 - z^3) has unit coefficients at 2, 5, 8, ...
        let kernel: Vec<C64> = (0..=30)
            .map(|k| if k >= 2 && (k - 2) % 3 == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) })
            .collect();
        let prod = hadamard(&PowerSeries::truncated(kernel, None), &cayley(0.5, 30));
        for k in 0..=30 {
            let expected = if k >= 2 && (k - 2) % 3 == 0 { 0.5f64.powi(k as i32) } else { 0.0 };
            assert_eq!(prod.coeff(k), c(expected, 0.0));
        }
    }

    #[test]
    fn norms_of_simple_functions() {
        let e5 = PowerSeries::monomial(5);
        let g = sample_boundary(&e5, 1.0, 64).unwrap();
        for q in HardyExponent::ALL {
            assert!((hardy_norm(&g, q).unwrap() - 1.0).abs() < 1e-14);
        }
        assert_eq!(hardy_norm(&e5, HardyExponent::Two).unwrap(), 1.0);
        assert_eq!(
            hardy_norm(&PowerSeries::from_real(&[3.0, 4.0]), HardyExponent::Two).unwrap(),
            5.0
        );
        assert_eq!(hardy_norm(&e5, HardyExponent::One), Err(HardyError::GridRequired));

        let g = sample_boundary(&Cayley(0.5), 1.0, 4096).unwrap();
        assert!((hardy_norm(&g, HardyExponent::Infinity).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn norm_proxy_grows_with_radius() {
        let f = cayley(0.6, 200);
        let mut prev = [0.0; 3];
        for r in [0.3, 0.6, 0.9, 0.99] {
            let g = sample_boundary(&f, r, 256).unwrap();
            for (i, q) in HardyExponent::ALL.into_iter().enumerate() {
                let v = hardy_norm(&g, q).unwrap();
                assert!(v >= prev[i]);
                prev[i] = v;
            }
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f = PowerSeries::polynomial(vec![c(1.0, -2.0), c(0.0, 0.5)]);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(
            text,
            r#"{"coeffs":[[1.0,-2.0],[0.0,0.5]],"truncation":1,"tail_kind":"exact_polynomial","tail_bound":0.0}"#
        );
        let back: PowerSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);

        let bad = r#"{"coeffs":[[1.0,0.0]],"truncation":3,"tail_kind":"truncated_analytic"}"#;
        assert!(serde_json::from_str::<PowerSeries>(bad).is_err());
        let ok = r#"{"coeffs":[[1.0,0.0]],"truncation":0,"tail_kind":"truncated_analytic"}"#;
        let f: PowerSeries = serde_json::from_str(ok).unwrap();
        assert_eq!(f.tail_bound(), None);
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<HardyExponent>().unwrap(), HardyExponent::Infinity);
        assert_eq!("1".parse::<HardyExponent>().unwrap(), HardyExponent::One);
        assert!("3".parse::<HardyExponent>().is_err());
    }
}
