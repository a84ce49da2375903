//! Command-line flags. Every subcommand struct is serialisable so the report
//! can embed the configuration it was run with.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Environment variable read for the default worker-thread count.
pub const THREADS_ENV: &str = "CUEMOM_THREADS";

#[derive(Parser, Debug)]
#[command(name = "cuemom", version, about = "Moments of derivatives of CUE characteristic polynomials")]
pub struct Cli {
    /// Report format; JSON is canonical, CSV is a flat projection of the results.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for sampling (0 = one per core). Results do not depend on it.
    #[arg(long, env = THREADS_ENV, default_value_t = 0, global = true)]
    pub threads: usize,
    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Finite-N exact formulas.
    Exact(ExactArgs),
    /// Large-N limits in the global, mesoscopic and microscopic regimes.
    Asympt(AsymptArgs),
    /// Monte Carlo estimates over Haar-random spectra.
    Mc(McArgs),
    /// Dirichlet-series side: tables, series, arithmetic factor.
    Zeta(ZetaArgs),
    /// Evaluate one point by two routes and report the discrepancy.
    Compare(CompareArgs),
    /// Monte Carlo zero counts of Λ'_N over a set of radii.
    Zeros(ZerosArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactRoute {
    /// E|Λ'_N|^{2s} from the derivative-kernel formula.
    Derivative,
    /// E|Λ'_N|^{2s} from the structure expansion in |z|.
    Structure,
    /// E|Λ_N|^{2s} (the characteristic polynomial itself).
    Cue,
}

#[derive(Args, Debug, Serialize)]
pub struct ExactArgs {
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u32,
    /// Exponent; an integer except for the `cue` route on the unit circle.
    #[arg(long)]
    pub s: String,
    /// u = |z|², as an integer, decimal or p/q.
    #[arg(long, conflicts_with = "r")]
    pub u: Option<String>,
    /// r = |z|.
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ExactRoute::Derivative)]
    pub route: ExactRoute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeArg {
    Global,
    Meso,
    Micro,
    Joint,
    Zeros,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Moments of Λ'_N.
    Derivative,
    /// Moments of Λ_N.
    Cue,
}

#[derive(Args, Debug, Serialize)]
pub struct AsymptArgs {
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    #[arg(long, value_enum, default_value_t = Target::Derivative)]
    pub target: Target,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    /// Matrix size; without it the N-free coefficient is reported.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    /// Complex point as `re,im`, `re`, or `imi` (e.g. `0.5i`).
    #[arg(long)]
    pub z1: Option<String>,
    #[arg(long)]
    pub z2: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerArg {
    GinibreQr,
    Verblunsky,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum McKind {
    /// E|Λ'_N(z)|^{2s}.
    Moment,
    /// E[|Λ'/Λ(z2)|^{2h} |Λ(z1)|^{2s}].
    Joint,
    /// Number of zeros of Λ'_N in |z| < r.
    Zeros,
}

#[derive(Args, Debug, Serialize, Clone)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SamplerArg::GinibreQr)]
    pub sampler: SamplerArg,
    #[arg(long, default_value_t = cuemom_core::mc::DEFAULT_BATCH_SIZE)]
    pub batch_size: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct McArgs {
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = McKind::Moment)]
    pub kind: McKind,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    /// Evaluation point `re,im` (moment kind); defaults to `r` on the real axis.
    #[arg(long, conflicts_with = "r")]
    pub z: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub z1: Option<String>,
    #[arg(long)]
    pub z2: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaQuantity {
    /// d_s(n) for n ≤ n_max.
    DivisorTable,
    /// s-fold Dirichlet convolution of log, for n ≤ n_max.
    LogTable,
    /// Σ (log∗⋯∗log)(n)² n^{−2σ} with tail.
    DerivSeries,
    /// Σ d_s(n)² n^{−2σ} with tail.
    LindelofSeries,
    /// Closed form of the s=2 derivative series.
    ClosedForm,
    /// Euler product a_s.
    ArithmeticFactor,
    /// a_s h_s / (2σ−1)^{s²+2s}.
    ConjectureRhs,
}

#[derive(Args, Debug, Serialize)]
pub struct ZetaArgs {
    #[arg(long, value_enum)]
    pub quantity: ZetaQuantity,
    #[arg(long, default_value_t = 2.0)]
    pub s: f64,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub p_max: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteArg {
    /// Derivative-kernel exact formula.
    Exact,
    /// Structure expansion.
    Structure,
    /// Closed sum Σ j² u^{j−1} (s = 1).
    Closed,
    /// Monte Carlo.
    Mc,
    /// Large-N global limit.
    Limit,
}

#[derive(Args, Debug, Serialize)]
pub struct CompareArgs {
    /// Two routes, comma separated (e.g. `exact,mc`).
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub routes: Vec<RouteArg>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u32,
    #[arg(long)]
    pub s: u32,
    /// r = |z|, decimal or p/q.
    #[arg(long)]
    pub r: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Pass threshold in combined standard errors (when a Monte Carlo route is involved).
    #[arg(long, default_value_t = 4.0)]
    pub se_tol: f64,
    /// Pass threshold on the relative discrepancy (deterministic routes).
    #[arg(long, default_value_t = 1e-12)]
    pub rel_tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ZerosArgs {
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: usize,
    /// Radii, comma separated, each in (0, 1).
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7071067811865476,0.8")]
    pub radii: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingArgs,
}
