//! Seeded test corpora: random polynomials, the extremal families, and
//! constructed members of the class
//! `R_N = { f : Re (1/f̂_N) Σ_k f̂_{k+N} z^k >= 1/2 }`.

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::series::{PowerSeries, C64};
use crate::special::{ExtremalFamily, TestFunction};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const MAX_RANDOM_DEGREE: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub function: TestFunction,
}

fn random_complex(rng: &mut StdRng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// `count` polynomials with degree uniform in `0..=max_degree` and
/// coefficients uniform in the square `[-1, 1]²`.
pub fn random_polynomials(seed: u64, count: usize, max_degree: usize) -> Vec<CorpusEntry> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let degree = rng.random_range(0..=max_degree);
            let coeffs = (0..=degree).map(|_| random_complex(&mut rng)).collect();
            CorpusEntry {
                id: format!("random:{seed}:{i}:deg{degree}"),
                function: PowerSeries::polynomial(coeffs).into(),
            }
        })
        .collect()
}

/// Blaschke-type witnesses and Cayley rationals.
pub fn family_fixtures(n: usize, big_n: usize) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for rho in [0.0, 0.3, 0.6, 0.9] {
        let f = ExtremalFamily::blaschke_shift(n, big_n, rho)?;
        out.push(CorpusEntry {
            id: f.to_string(),
            function: f.into(),
        });
    }
    for rho in [0.3, 0.5, 0.7] {
        let f = ExtremalFamily::cayley(rho)?;
        out.push(CorpusEntry {
            id: f.to_string(),
            function: f.into(),
        });
    }
    Ok(out)
}

/// Random polynomials followed by the family fixtures.
pub fn standard_corpus(seed: u64, count: usize, n: usize, big_n: usize) -> Result<Vec<CorpusEntry>> {
    let mut out = random_polynomials(seed, count, MAX_RANDOM_DEGREE);
    out.extend(family_fixtures(n, big_n)?);
    Ok(out)
}

/// A constructed member `f = c z^N φ(z) + p(z)` of `R_N` with `p ∈ P_{N-1}`
/// and `φ(z) = 1 + a Σ_{k>=1} (ζ b z)^k`. On the disc
/// `Re φ >= 1 - ab/(1+b)`, which is at least `1/2` for `a <= (1+b)/(2b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RClassMember {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub series: PowerSeries,
    pub lead: C64,
    pub a: f64,
    pub b: f64,
}

/// Stored terms of `φ` beyond the leading one; `0.7^160 < 1e-24`.
const PHI_TERMS: usize = 160;

pub fn r_class_member(big_n: usize, lead: C64, low: &[C64], a: f64, b: f64, zeta: C64) -> RClassMember {
    let mut coeffs = vec![C64::new(0.0, 0.0); big_n + PHI_TERMS + 1];
    coeffs[..low.len().min(big_n)].copy_from_slice(&low[..low.len().min(big_n)]);
    coeffs[big_n] = lead;
    let w = zeta * b;
    let mut power = w;
    for k in 1..=PHI_TERMS {
        coeffs[big_n + k] = lead * a * power;
        power *= w;
    }
    let tail = lead.norm() * a * b.powi(PHI_TERMS as i32 + 1) / (1.0 - b);
    RClassMember {
        big_n,
        series: PowerSeries::truncated(coeffs, Some(tail)),
        lead,
        a,
        b,
    }
}

/// `count` random members with `1 <= N <= max_n`, `b ∈ [0.2, 0.7]` and
/// `a ∈ [0.1, (1+b)/(2b)]`, endpoint included.
pub fn r_class_members(seed: u64, count: usize, max_n: usize) -> Vec<RClassMember> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let big_n = rng.random_range(1..=max_n.max(1));
            let b = rng.random_range(0.2..=0.7);
            let a_max = (1.0 + b) / (2.0 * b);
            // every fourth member sits exactly on the boundary of the class
            let a = if i % 4 == 0 { a_max } else { rng.random_range(0.1..a_max) };
            let zeta = C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
            let lead = C64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI));
            let low: Vec<C64> = (0..big_n).map(|_| random_complex(&mut rng)).collect();
            r_class_member(big_n, lead, &low, a, b, zeta)
        })
        .collect()
}
