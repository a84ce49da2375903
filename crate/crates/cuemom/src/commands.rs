//! Subcommand implementations. Each returns a [`Report`]; nothing here
//! writes to stdout.

use cuemom_core::asymptotics::{
    cue_limit, derivative_limit, expected_log_integral, expected_zero_count, global_moment, global_moment_laguerre,
    joint_moment, micro_b_bessel, micro_b_exact_c0, Regime, RegimePoint,
};
use cuemom_core::exact::{
    cue_moment_integer, cue_moment_ks, cue_moment_radial, moment_exact, moment_s1_closed, moment_s1_closed_f64,
    moment_structure,
};
use cuemom_core::mc::{joint_sample, moment_sample, McConfig, MomentEstimate, Sampler};
use cuemom_core::zeta::{
    arithmetic_factor, check_table_size, conjecture_rhs, deriv_moment_closed_form, deriv_moment_series,
    divisor_table, lindelof_series, log_convolution_table, rmt_factor, SeriesValue, DEFAULT_SERIES_REL_TOL,
};
use cuemom_core::{Error, ExactNumber, Mode};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::parallel::{self, Progress};
use crate::report::{estimate_fields, float, number, Entry, Report};

/// Largest table printed row by row.
pub const MAX_TABLE_ROWS: usize = 1_000_000;
/// Largest `n_max` for the truncated series.
pub const MAX_SERIES_TERMS: usize = 50_000_000;
/// Largest prime cutoff for the Euler product.
pub const MAX_P_MAX: usize = 100_000_000;

/// Why a command did not produce a report.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Bad flags or parameters outside a formula's domain.
    Usage(String),
    /// A valid request beyond what the implementation supports.
    Capability(String),
    /// A numerical routine failed.
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Numerical(_) => crate::EXIT_USAGE,
            Failure::Capability(_) => crate::EXIT_CAPABILITY,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "error: {m}"),
            Failure::Capability(m) => write!(f, "capability limit: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(m) => Failure::Usage(m),
            Error::CapabilityLimit(m) => Failure::Capability(m),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn config<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("flags are serialisable")
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float,
    }
}

fn parse_number(text: &str, m: Mode, flag: &str) -> Result<ExactNumber, Failure> {
    ExactNumber::parse(text, m).ok_or_else(|| usage(format!("--{flag}: cannot read {text:?} as a number")))
}

fn square(x: &ExactNumber) -> ExactNumber {
    match x {
        ExactNumber::Exact(q) => ExactNumber::Exact(q * q),
        ExactNumber::Float(v) => ExactNumber::Float(v * v),
    }
}

/// Reads `re,im`, `re`, or `imi`.
pub fn parse_complex(text: &str) -> Result<Complex64, Failure> {
    let bad = || usage(format!("cannot read {text:?} as a complex number (use re,im or 0.5i)"));
    let t = text.trim();
    if let Some((re, im)) = t.split_once(',') {
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        return Ok(Complex64::new(re, im));
    }
    if let Some(im) = t.strip_suffix('i') {
        let im: f64 = if im.is_empty() { 1.0 } else { im.parse().map_err(|_| bad())? };
        return Ok(Complex64::new(0.0, im));
    }
    Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
}

fn required<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("--{flag} is required here")))
}

fn required_complex(v: &Option<String>, flag: &str) -> Result<Complex64, Failure> {
    parse_complex(v.as_deref().ok_or_else(|| usage(format!("--{flag} is required here")))?)
}

fn integer_s(s: f64) -> Result<u32, Failure> {
    if s >= 1.0 && s.fract() == 0.0 && s <= u32::MAX as f64 {
        Ok(s as u32)
    } else {
        Err(Failure::Capability(format!("this quantity is implemented for positive integer s, got {s}")))
    }
}

fn text_entry(name: &str, x: &ExactNumber, formula: &str) -> Entry {
    Entry::new(name, number(x), formula).with("text", json!(x.to_string()))
}

pub const F_DERIVATIVE: &str = "E|Λ'_N(z)|^{2s}, derivative-kernel formula at finite N";
pub const F_STRUCTURE: &str = "E|Λ'_N(z)|^{2s}, structure expansion Σ a_{h1,h2} b_{h1,h2} at finite N";
pub const F_CLOSED: &str = "E|Λ'_N(z)|², closed sum Σ_{j≤N} j² u^{j−1}";
pub const F_CUE_RADIAL: &str = "E|Λ_N(z)|^{2s}, finite-N formula in u = |z|²";
pub const F_CUE_CIRCLE: &str = "E|Λ_N|^{2s} on |z| = 1, Π_{j≤N} Γ(j)Γ(j+2s)/Γ(j+s)²";
pub const F_GLOBAL: &str = "e^{−s²r²} Γ(s+1) ₁F₁(s+1, 1; s²r²) / (1−r²)^{s²+2s}";
pub const F_GLOBAL_LAGUERRE: &str = "s! L_s(−s²r²) / (1−r²)^{s²+2s}";
pub const F_MESO: &str = "N^{α(s²+2s)} s! L_s(−s²) (coefficient s! L_s(−s²) without N)";
pub const F_MICRO: &str =
    "N^{s²+2s} b_s(c), b_s(c) = Σ_{λ,μ⊢s} f_λ f_μ/(λ! μ!) det{∫₀¹ x^{λ_i+μ_j+2s−i−j} e^{−cx} dx} (b_s(c) without N)";
pub const F_MICRO_BESSEL: &str = "b_s(c) from the finite-temperature Bessel kernel determinant (times N^{s²+2s} with N)";
pub const F_MICRO_EXACT: &str = "b_s(0) as an exact rational (entries 1/(k+1))";
pub const F_JOINT: &str = "e^{−s²ρ} Γ(h+1) ₁F₁(h+1, 1; s²ρ) / ((1−|z2|²)^{2h} (1−|z1|²)^{s²}), ρ = |z1|²(1−|z2|²)²/|1−z1 z̄2|²";
pub const F_ZERO_COUNT: &str = "expected zeros of Λ'_N in |z| < r: 2r²/(1−r²)";
pub const F_LOG_INTEGRAL: &str = "Jensen integral ∫₀^r n(t)/t dt → −log(1−r²)";
pub const F_CUE_GLOBAL: &str = "E|Λ_N|^{2s} → (1−r²)^{−s²}";
pub const F_CUE_MESO: &str = "E|Λ_N|^{2s} ~ N^{s²α}";
pub const F_CUE_MICRO: &str = "E|Λ_N|^{2s} ~ N^{s²} Π_{j≤s} 1/(Γ(j)Γ(j+1)) s! det{∫₀¹ x^{i+j−2} e^{−cx} dx}";
pub const F_MC_MOMENT: &str = "Monte Carlo mean of |Λ'_N(z)|^{2s}";
pub const F_MC_JOINT: &str = "Monte Carlo mean of |Λ'_N(z2)/Λ_N(z2)|^{2h} |Λ_N(z1)|^{2s}";
pub const F_MC_ZEROS: &str = "Monte Carlo mean number of zeros of Λ'_N in |z| < r";
pub const F_MC_JENSEN: &str = "Monte Carlo mean of Σ_{|ρ|<r} log(r/|ρ|) over zeros ρ of Λ'_N";

pub fn exact(args: &ExactArgs) -> Outcome {
    let m = mode(args.mode);
    let mut report = Report::new("exact", config(args));
    let u = match (&args.u, &args.r) {
        (Some(u), _) => Some(parse_number(u, m, "u")?),
        (None, Some(r)) => Some(square(&parse_number(r, m, "r")?)),
        (None, None) => None,
    };
    let int_s = || -> Result<u32, Failure> {
        args.s.trim().parse::<u32>().map_err(|_| usage(format!("--s must be a positive integer for this route, got {}", args.s)))
    };
    match args.route {
        ExactRoute::Derivative => {
            let u = u.ok_or_else(|| usage("give --u or --r"))?;
            let v = moment_exact(args.n, int_s()?, &u)?;
            report.push(text_entry("moment", &v, F_DERIVATIVE));
        }
        ExactRoute::Structure => {
            let r = parse_number(args.r.as_deref().ok_or_else(|| usage("the structure route takes --r"))?, m, "r")?;
            let v = moment_structure(args.n, int_s()?, &r)?;
            report.push(text_entry("moment", &v, F_STRUCTURE));
        }
        ExactRoute::Cue => match u {
            Some(u) => {
                let v = cue_moment_radial(args.n, int_s()?, &u)?;
                report.push(text_entry("cue_moment", &v, F_CUE_RADIAL));
            }
            None => match (args.s.trim().parse::<u32>(), m) {
                (Ok(s), Mode::Exact) => {
                    let v = ExactNumber::Exact(cue_moment_integer(args.n, s));
                    report.push(text_entry("cue_moment", &v, F_CUE_CIRCLE));
                }
                _ => {
                    let s: f64 = args.s.trim().parse().map_err(|_| usage(format!("cannot read --s {:?}", args.s)))?;
                    let v = ExactNumber::Float(cue_moment_ks(args.n, s)?);
                    report.push(text_entry("cue_moment", &v, F_CUE_CIRCLE));
                }
            },
        },
    }
    Ok(report)
}

fn point(regime: Regime, n: Option<f64>) -> Result<RegimePoint, Failure> {
    Ok(RegimePoint::new(regime, n)?)
}

pub fn asympt(args: &AsymptArgs) -> Outcome {
    let mut report = Report::new("asympt", config(args));
    let s = args.s;
    let cue = args.target == Target::Cue;
    match args.regime {
        RegimeArg::Global => {
            let r = required(args.r, "r")?;
            let p = point(Regime::Global { r }, args.n)?;
            if cue {
                report.push(Entry::new("cue_limit", float(cue_limit(s, &p)?), F_CUE_GLOBAL));
            } else {
                report.push(Entry::new("moment_limit", float(global_moment(s, r)?), F_GLOBAL));
                if s >= 0.0 && s.fract() == 0.0 && s <= 64.0 {
                    let l = global_moment_laguerre(s as u32, r)?;
                    report.push(Entry::new("moment_limit_laguerre", float(l), F_GLOBAL_LAGUERRE));
                }
            }
        }
        RegimeArg::Meso => {
            let alpha = required(args.alpha, "alpha")?;
            let p = point(Regime::Mesoscopic { alpha }, args.n)?;
            if cue {
                report.push(Entry::new("cue_limit", float(cue_limit(s, &p)?), F_CUE_MESO));
            } else {
                report.push(Entry::new("moment_limit", float(derivative_limit(s, &p)?), F_MESO));
            }
        }
        RegimeArg::Micro => {
            let c = required(args.c, "c")?;
            let p = point(Regime::Microscopic { c }, args.n)?;
            if cue {
                report.push(Entry::new("cue_limit", float(cue_limit(s, &p)?), F_CUE_MICRO));
            } else {
                let k = integer_s(s)?;
                report.push(Entry::new("moment_limit", float(derivative_limit(s, &p)?), F_MICRO));
                let scale = args.n.map_or(1.0, |n| n.powf(s * s + 2.0 * s));
                report.push(Entry::new("moment_limit_bessel", float(scale * micro_b_bessel(k, c)?), F_MICRO_BESSEL));
                if c == 0.0 {
                    let b = ExactNumber::Exact(micro_b_exact_c0(k)?);
                    report.push(text_entry("coefficient_exact", &b, F_MICRO_EXACT));
                }
            }
        }
        RegimeArg::Joint => {
            if cue {
                return Err(usage("the joint regime has no CUE target"));
            }
            let z1 = required_complex(&args.z1, "z1")?;
            let z2 = required_complex(&args.z2, "z2")?;
            let h = args.h.unwrap_or(s);
            report.push(Entry::new("joint_limit", float(joint_moment(s, h, z1, z2)?), F_JOINT));
        }
        RegimeArg::Zeros => {
            let r = required(args.r, "r")?;
            report.push(Entry::new("zero_count_limit", float(expected_zero_count(r)?), F_ZERO_COUNT));
            report.push(Entry::new("log_integral_limit", float(expected_log_integral(r)?), F_LOG_INTEGRAL));
        }
    }
    Ok(report)
}

fn mc_config(args: &SamplingArgs) -> Result<McConfig, Failure> {
    let sampler = match args.sampler {
        SamplerArg::GinibreQr => Sampler::GinibreQr,
        SamplerArg::Verblunsky => Sampler::Verblunsky,
    };
    Ok(McConfig::new(args.seed, args.samples)?.with_sampler(sampler).with_batch_size(args.batch_size)?)
}

fn check_moment(n: usize, s: f64) -> Result<(), Failure> {
    if n == 0 {
        return Err(usage("N must be >= 1"));
    }
    if !(s > -1.0) {
        return Err(usage(format!("s must exceed -1, got {s}")));
    }
    Ok(())
}

fn mc_moment(n: usize, s: f64, z: Complex64, cfg: &McConfig, quiet: bool) -> Result<MomentEstimate, Failure> {
    check_moment(n, s)?;
    let progress = Progress::new("mc", cfg.batches(), !quiet);
    Ok(parallel::estimate(n, cfg, s < 0.0, |x| moment_sample(x, s, z), &progress)?)
}

fn zero_rows(report: &mut Report, n: usize, radii: &[f64], cfg: &McConfig, quiet: bool) -> Result<(), Failure> {
    if n == 0 {
        return Err(usage("N must be >= 1"));
    }
    for &r in radii {
        if !(r > 0.0 && r < 1.0) {
            return Err(usage(format!("radii must lie in (0, 1), got {r}")));
        }
    }
    let progress = Progress::new("zeros", cfg.batches(), !quiet);
    let sweep = parallel::zero_sweep(n, radii, cfg, &progress)?;
    for (i, &r) in radii.iter().enumerate() {
        let count = &sweep.counts[i];
        let jensen = &sweep.log_integrals[i];
        let entry = Entry::new("zero_count", float(count.mean), F_MC_ZEROS)
            .with("r", float(r))
            .with("limit", float(expected_zero_count(r)?))
            .with("limit_formula", json!(F_ZERO_COUNT))
            .with("log_integral", float(jensen.mean))
            .with("log_integral_std_error", float(jensen.std_error))
            .with("log_integral_limit", float(expected_log_integral(r)?))
            .with("ambiguous", json!(sweep.ambiguous[i]));
        report.push(estimate_fields(entry, count));
        if sweep.ambiguous[i] > 0 {
            report.warnings.push(format!(
                "r = {r}: {} zero(s) within {:e} of the circle, counted by the sign of |z| − r",
                sweep.ambiguous[i],
                cuemom_core::mc::BOUNDARY_TOL
            ));
        }
    }
    Ok(())
}

pub fn mc(args: &McArgs, quiet: bool) -> Outcome {
    let mut report = Report::new("mc", config(args));
    let cfg = mc_config(&args.sampling)?;
    match args.kind {
        McKind::Moment => {
            let z = match (&args.z, args.r) {
                (Some(z), _) => parse_complex(z)?,
                (None, Some(r)) => Complex64::new(r, 0.0),
                (None, None) => return Err(usage("give --z or --r")),
            };
            let e = mc_moment(args.n, args.s, z, &cfg, quiet)?;
            report.push(estimate_fields(Entry::new("moment", float(e.mean), F_MC_MOMENT), &e));
        }
        McKind::Joint => {
            let z1 = required_complex(&args.z1, "z1")?;
            let z2 = required_complex(&args.z2, "z2")?;
            let h = args.h.unwrap_or(args.s);
            cuemom_core::mc::check_joint_args(args.n, args.s, h, z1, z2)?;
            let progress = Progress::new("mc", cfg.batches(), !quiet);
            let s = args.s;
            let e = parallel::estimate(args.n, &cfg, false, |x| joint_sample(x, s, h, z1, z2), &progress)?;
            let entry = Entry::new("joint_moment", float(e.mean), F_MC_JOINT)
                .with("limit", float(joint_moment(s, h, z1, z2)?))
                .with("limit_formula", json!(F_JOINT));
            report.push(estimate_fields(entry, &e));
        }
        McKind::Zeros => {
            let r = required(args.r, "r")?;
            zero_rows(&mut report, args.n, &[r], &cfg, quiet)?;
        }
    }
    Ok(report)
}

pub fn zeros(args: &ZerosArgs, quiet: bool) -> Outcome {
    let mut report = Report::new("zeros", config(args));
    let cfg = mc_config(&args.sampling)?;
    zero_rows(&mut report, args.n, &args.radii, &cfg, quiet)?;
    Ok(report)
}

fn series_entry(name: &str, v: &SeriesValue, formula: &str) -> Entry {
    Entry::new(name, float(v.estimate()), formula)
        .with("partial_sum", float(v.partial))
        .with("tail", float(v.tail))
        .with("tail_kind", json!(if v.tail_is_bound { "bound" } else { "estimate" }))
        .with("n_max", json!(v.n_max))
        .with("partial", json!(v.is_partial(DEFAULT_SERIES_REL_TOL)))
}

pub fn zeta(args: &ZetaArgs) -> Outcome {
    let mut report = Report::new("zeta", config(args));
    let sigma = || required(args.sigma, "sigma");
    match args.quantity {
        ZetaQuantity::DivisorTable | ZetaQuantity::LogTable => {
            check_table_size(args.n_max, MAX_TABLE_ROWS)?;
            let s = integer_s(args.s)?;
            let (table, formula) = if args.quantity == ZetaQuantity::DivisorTable {
                (divisor_table(s, args.n_max)?, "d_s(n), coefficients of ζ(w)^s")
            } else {
                (log_convolution_table(s, args.n_max)?, "(log ∗ ⋯ ∗ log)(n), s-fold Dirichlet convolution")
            };
            for (i, &v) in table.values().iter().enumerate() {
                report.push(Entry::new(table.label(), float(v), formula).with("n", json!(i + 1)));
            }
        }
        ZetaQuantity::DerivSeries => {
            check_table_size(args.n_max, MAX_SERIES_TERMS)?;
            let v = deriv_moment_series(integer_s(args.s)?, sigma()?, args.n_max)?;
            report.push(series_entry("deriv_moment_series", &v, "Σ_n (log ∗ ⋯ ∗ log)(n)² n^{−2σ}, truncated, with tail"));
        }
        ZetaQuantity::LindelofSeries => {
            check_table_size(args.n_max, MAX_SERIES_TERMS)?;
            let v = lindelof_series(integer_s(args.s)?, sigma()?, args.n_max)?;
            report.push(series_entry("lindelof_series", &v, "Σ_n d_s(n)² n^{−2σ}, truncated, with tail"));
        }
        ZetaQuantity::ClosedForm => {
            if args.s != 2.0 {
                return Err(Failure::Capability("the closed form is implemented for s = 2".into()));
            }
            let v = deriv_moment_closed_form(sigma()?)?;
            report.push(Entry::new(
                "deriv_moment_closed_form",
                float(v),
                "∂α₁∂α₂∂β₁∂β₂ of Π ζ(2σ+α_i+β_j) / ζ(4σ+α₁+α₂+β₁+β₂) at 0",
            ));
        }
        ZetaQuantity::ArithmeticFactor => {
            check_table_size(args.p_max, MAX_P_MAX)?;
            let a = arithmetic_factor(args.s, args.p_max)?;
            report.push(
                Entry::new("arithmetic_factor", float(a.value), "a_s = Π_p (1−1/p)^{s²} Σ_m (Γ(s+m)/(m!Γ(s)))² p^{−m}")
                    .with("truncated_product", float(a.truncated))
                    .with("tail_correction", float(a.tail_correction))
                    .with("residual_bound", float(a.residual_bound))
                    .with("p_max", json!(a.p_max)),
            );
        }
        ZetaQuantity::ConjectureRhs => {
            check_table_size(args.p_max, MAX_P_MAX)?;
            let sg = sigma()?;
            let v = conjecture_rhs(args.s, sg, args.p_max)?;
            report.push(
                Entry::new("conjecture_rhs", float(v), "a_s h_s / (2σ−1)^{s²+2s}, h_s = e^{−s²} Γ(s+1) ₁F₁(s+1, 1; s²)")
                    .with("arithmetic_factor", float(arithmetic_factor(args.s, args.p_max)?.value))
                    .with("rmt_factor", float(rmt_factor(args.s)?)),
            );
        }
    }
    Ok(report)
}

enum RouteValue {
    Deterministic(ExactNumber),
    Sampled(MomentEstimate),
}

impl RouteValue {
    fn value(&self) -> f64 {
        match self {
            RouteValue::Deterministic(x) => x.to_f64(),
            RouteValue::Sampled(e) => e.mean,
        }
    }

    fn std_error(&self) -> f64 {
        match self {
            RouteValue::Deterministic(_) => 0.0,
            RouteValue::Sampled(e) => e.std_error,
        }
    }
}

fn route_label(route: RouteArg) -> &'static str {
    match route {
        RouteArg::Exact => F_DERIVATIVE,
        RouteArg::Structure => F_STRUCTURE,
        RouteArg::Closed => F_CLOSED,
        RouteArg::Mc => F_MC_MOMENT,
        RouteArg::Limit => F_GLOBAL,
    }
}

fn route_name(route: RouteArg) -> &'static str {
    match route {
        RouteArg::Exact => "exact",
        RouteArg::Structure => "structure",
        RouteArg::Closed => "closed",
        RouteArg::Mc => "mc",
        RouteArg::Limit => "limit",
    }
}

fn eval_route(route: RouteArg, args: &CompareArgs, quiet: bool) -> Result<RouteValue, Failure> {
    let m = mode(args.mode);
    let r = parse_number(&args.r, m, "r")?;
    let u = square(&r);
    Ok(match route {
        RouteArg::Exact => RouteValue::Deterministic(moment_exact(args.n, args.s, &u)?),
        RouteArg::Structure => RouteValue::Deterministic(moment_structure(args.n, args.s, &r)?),
        RouteArg::Closed => {
            if args.s != 1 {
                return Err(usage("the closed route needs --s 1"));
            }
            RouteValue::Deterministic(match &u {
                ExactNumber::Exact(q) => ExactNumber::Exact(moment_s1_closed(args.n, q)),
                ExactNumber::Float(x) => ExactNumber::Float(moment_s1_closed_f64(args.n as u64, *x)),
            })
        }
        RouteArg::Mc => {
            let cfg = mc_config(&args.sampling)?;
            let z = Complex64::new(r.to_f64(), 0.0);
            RouteValue::Sampled(mc_moment(args.n as usize, args.s as f64, z, &cfg, quiet)?)
        }
        RouteArg::Limit => RouteValue::Deterministic(ExactNumber::Float(global_moment(args.s as f64, r.to_f64())?)),
    })
}

pub fn compare(args: &CompareArgs, quiet: bool) -> Outcome {
    if args.routes.len() != 2 {
        return Err(usage("--routes takes exactly two routes"));
    }
    let mut report = Report::new("compare", config(args));
    let mut values = Vec::new();
    for &route in &args.routes {
        let v = eval_route(route, args, quiet)?;
        let entry = match &v {
            RouteValue::Deterministic(x) => text_entry("route", x, route_label(route)),
            RouteValue::Sampled(e) => estimate_fields(Entry::new("route", float(e.mean), route_label(route)), e),
        };
        report.push(entry.with("route", json!(route_name(route))));
        values.push(v);
    }
    let (a, b) = (&values[0], &values[1]);
    let abs = (a.value() - b.value()).abs();
    let scale = a.value().abs().max(b.value().abs());
    let rel = if scale > 0.0 { abs / scale } else { 0.0 };
    let se = a.std_error().hypot(b.std_error());
    let sampled = matches!(a, RouteValue::Sampled(_)) || matches!(b, RouteValue::Sampled(_));
    let (passed, criterion, se_normalized) = if sampled {
        let z = if se > 0.0 { abs / se } else if abs == 0.0 { 0.0 } else { f64::INFINITY };
        (z <= args.se_tol, format!("|difference| <= {} combined standard errors", args.se_tol), Some(z))
    } else if let (RouteValue::Deterministic(ExactNumber::Exact(x)), RouteValue::Deterministic(ExactNumber::Exact(y))) =
        (a, b)
    {
        (x == y, "exact rational equality".to_string(), None)
    } else {
        (rel <= args.rel_tol, format!("relative difference <= {:e}", args.rel_tol), None)
    };
    let mut entry = Entry::new("discrepancy", float(abs), "|route 1 − route 2|")
        .with("relative", float(rel))
        .with("criterion", json!(criterion))
        .with("passed", json!(passed));
    if let Some(z) = se_normalized {
        entry = entry.with("se_normalized", float(z)).with("combined_std_error", float(se));
    }
    report.push(entry);
    report.passed = Some(passed);
    Ok(report)
}
