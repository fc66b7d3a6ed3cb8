use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hardy_bap::approx::{Linearization, SolveOptions};
use hardy_bap::corpus::DEFAULT_SEED;
use hardy_bap::{HardyExponent, KernelSpec, PowerSeries, SweepConfig, TestFunction};
use serde::Serialize;

use crate::parse::{parse_function_spec, parse_kernel_spec, parse_real_list};

pub const MIN_GRID: usize = 256;
pub const MAX_GRID: usize = 65536;
pub const MIN_DIRECTIONS: usize = 8;
pub const MAX_DIRECTIONS: usize = 512;
pub const MIN_TOL: f64 = 1e-12;
pub const MAX_TOL: f64 = 1e-3;

#[derive(Debug, Parser, Serialize)]
#[command(name = "hardy-bap", version, about = "Best-approximation-preserving convolution operators on Hardy spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Certify a kernel, a kernel pair, or a single remainder kernel L.
    CertifyKernel(CertifyArgs),
    /// Best approximation E_n(f)_q.
    Approx(ApproxArgs),
    /// Mixed distance to P_{N-1} + conj(H^1_0) in H^1.
    MixedApprox(MixedArgs),
    /// Evaluate one coefficient inequality on one function.
    CheckInequality(InequalityArgs),
    /// Ratios along the extremal Blaschke family.
    SharpnessSweep(SweepArgs),
    /// Coefficient inequalities over a seeded random corpus.
    CorpusSuite(CorpusArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Samples per circle (power of two, 256..=65536).
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    /// Polygon linearization with this many directions (8..=512); exact
    /// conic constraints when absent.
    #[arg(long)]
    pub directions: Option<usize>,
    /// Solver tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl Common {
    pub fn validate(&self) -> Result<()> {
        if !self.grid.is_power_of_two() || !(MIN_GRID..=MAX_GRID).contains(&self.grid) {
            bail!("--grid {} must be a power of two in [{MIN_GRID}, {MAX_GRID}]", self.grid);
        }
        if let Some(d) = self.directions {
            if !(MIN_DIRECTIONS..=MAX_DIRECTIONS).contains(&d) {
                bail!("--directions {d} must lie in [{MIN_DIRECTIONS}, {MAX_DIRECTIONS}]");
            }
        }
        check_tol("--tol", self.tol)
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            m_grid: self.grid,
            linearization: match self.directions {
                Some(directions) => Linearization::Polygon { directions },
                None => Linearization::Conic,
            },
            tol: self.tol,
            ..SolveOptions::default()
        }
    }
}

pub fn check_tol(name: &str, tol: f64) -> Result<()> {
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        bail!("{name} {tol} must lie in [{MIN_TOL:e}, {MAX_TOL:e}]");
    }
    Ok(())
}

/// Function given inline or as a JSON file (a tagged function or a bare
/// power series).
#[derive(Debug, Clone, Args, Serialize)]
pub struct FunctionSource {
    /// Inline function, e.g. "poly:[0,1]", "cayley:0.5", "blaschke:1,3,0.5".
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long, conflicts_with = "function")]
    pub function_file: Option<PathBuf>,
}

impl FunctionSource {
    pub fn is_given(&self) -> bool {
        self.function.is_some() || self.function_file.is_some()
    }

    pub fn load(&self) -> Result<TestFunction> {
        match (&self.function, &self.function_file) {
            (Some(text), _) => parse_function_spec(text).with_context(|| format!("function {text:?}")),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                if let Ok(f) = serde_json::from_str::<TestFunction>(&text) {
                    return Ok(f);
                }
                let series: PowerSeries = serde_json::from_str(&text)
                    .with_context(|| format!("parsing {}", path.display()))?;
                Ok(series.into())
            }
            (None, None) => bail!("a function is required (--function or --function-file)"),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertifyArgs {
    /// Inline kernel: "geometric:n,N", "monomial:n" or "roots:n,N[,rotation]".
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, conflicts_with = "kernel")]
    pub kernel_file: Option<PathBuf>,
    /// Remainder kernel L as an inline function; with a kernel, certifies
    /// the pair, otherwise the single condition |L| <= |z|^{2n+1}/2.
    #[arg(long)]
    pub l: Option<String>,
    /// Order n for the single condition on L.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated sweep radii.
    #[arg(long, default_value = "0.5,0.9,0.99,0.999,0.9999")]
    pub radii: String,
    /// Certificate tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub cert_tol: f64,
    #[command(flatten)]
    pub common: Common,
}

impl CertifyArgs {
    pub fn kernel(&self) -> Result<Option<KernelSpec>> {
        match (&self.kernel, &self.kernel_file) {
            (Some(text), _) => Ok(Some(
                parse_kernel_spec(text).with_context(|| format!("kernel {text:?}"))?,
            )),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Ok(Some(
                    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?,
                ))
            }
            (None, None) => Ok(None),
        }
    }

    pub fn sweep(&self) -> Result<SweepConfig> {
        check_tol("--cert-tol", self.cert_tol)?;
        let radii = parse_real_list(&self.radii).with_context(|| format!("radii {:?}", self.radii))?;
        if radii.iter().any(|r| !(*r > 0.0 && *r <= 1.0)) || radii.windows(2).any(|w| w[0] >= w[1]) {
            bail!("--radii must be increasing values in (0, 1]");
        }
        Ok(SweepConfig {
            radii,
            m_grid: self.common.grid,
            tol: self.cert_tol,
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub function: FunctionSource,
    /// Orders n, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub n: Vec<usize>,
    /// Exponents from {1, 2, inf}, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "inf", value_parser = parse_exponent)]
    pub q: Vec<HardyExponent>,
    #[command(flatten)]
    pub common: Common,
}

fn parse_exponent(s: &str) -> std::result::Result<HardyExponent, String> {
    s.parse::<HardyExponent>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MixedArgs {
    #[command(flatten)]
    pub function: FunctionSource,
    #[arg(long = "big-n")]
    pub big_n: usize,
    /// Degree of the conjugate-analytic part.
    #[arg(long, default_value_t = 64)]
    pub neg_degree: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InequalityKind {
    /// |f̂_n| + c|f̂_N| <= E_n(f)_∞.
    Landau,
    /// |f̂_n| + 𝓔_N(f)_1 / 2 <= E_n(f)_∞.
    Corollary1,
    /// |f̂_n| + Σ ψ_k |f̂_k| <= E_n(f)_∞.
    Corollary3,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InequalityArgs {
    #[command(flatten)]
    pub function: FunctionSource,
    #[arg(long, value_enum, default_value_t = InequalityKind::Landau)]
    pub kind: InequalityKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "big-n")]
    pub big_n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    /// Weights: "geometric:rho,start,end" or "[w1,w2,...]@start".
    #[arg(long)]
    pub weights: Option<String>,
    /// Evaluate the weighted bound on its extremal function instead of
    /// --function.
    #[arg(long)]
    pub witness: bool,
    #[arg(long, default_value_t = 8)]
    pub neg_degree: usize,
    /// Verdict tolerance.
    #[arg(long, default_value_t = 1e-5)]
    pub ineq_tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "big-n")]
    pub big_n: usize,
    /// Family parameters in [0, 1), comma-separated.
    #[arg(long, default_value = "0,0.5,0.9,0.99")]
    pub rho: String,
    #[arg(long, default_value_t = 1e-4)]
    pub ineq_tol: f64,
    #[command(flatten)]
    pub common: Common,
}

impl SweepArgs {
    pub fn rhos(&self) -> Result<Vec<f64>> {
        let rhos = parse_real_list(&self.rho).with_context(|| format!("rho {:?}", self.rho))?;
        if rhos.iter().any(|r| !(0.0..1.0).contains(r)) {
            bail!("--rho values must lie in [0, 1)");
        }
        Ok(rhos)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CorpusArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 40)]
    pub max_degree: usize,
    /// Landau cases "n,N,c"; repeatable.
    #[arg(long = "case", default_values = ["0,1,0.5", "1,3,0.5", "2,5,0.5", "1,4,0.3"])]
    pub cases: Vec<String>,
    /// Bohr checks with ψ_k = ρ^k, 1 <= k <= 200, comma-separated ρ values.
    #[arg(long)]
    pub bohr_rho: Option<String>,
    /// Add the extremal families and Cayley rationals to the corpus.
    #[arg(long)]
    pub families: bool,
    #[arg(long, default_value_t = 1e-5)]
    pub ineq_tol: f64,
    #[command(flatten)]
    pub common: Common,
}

impl CorpusArgs {
    pub fn parsed_cases(&self) -> Result<Vec<(usize, usize, f64)>> {
        self.cases
            .iter()
            .map(|text| {
                let v = parse_real_list(text).with_context(|| format!("case {text:?}"))?;
                match v.as_slice() {
                    &[n, big_n, c] if n >= 0.0 && n.fract() == 0.0 && big_n > n && big_n.fract() == 0.0 => {
                        Ok((n as usize, big_n as usize, c))
                    }
                    _ => bail!("case {text:?} must be \"n,N,c\" with integers 0 <= n < N"),
                }
            })
            .collect()
    }

    pub fn bohr_rhos(&self) -> Result<Vec<f64>> {
        match &self.bohr_rho {
            None => Ok(Vec::new()),
            Some(text) => {
                let v = parse_real_list(text).with_context(|| format!("bohr-rho {text:?}"))?;
                if v.iter().any(|r| !(*r >= 0.0 && *r < 1.0)) {
                    bail!("--bohr-rho values must lie in [0, 1)");
                }
                Ok(v)
            }
        }
    }
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::CertifyKernel(a) => &a.common,
            Command::Approx(a) => &a.common,
            Command::MixedApprox(a) => &a.common,
            Command::CheckInequality(a) => &a.common,
            Command::SharpnessSweep(a) => &a.common,
            Command::CorpusSuite(a) => &a.common,
        }
    }
}
