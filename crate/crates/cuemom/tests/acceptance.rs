//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with the numbers behind it; the process fails if any criterion does.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use cuemom::parallel::{self, Progress};
use cuemom_core::asymptotics::{global_moment, joint_moment, micro_b, micro_b_bessel, micro_b_exact_c0};
use cuemom_core::combinatorics::{enumerate_compositions, enumerate_partitions, omega_weight, syt_count};
use cuemom_core::exact::{
    appendix_b00_poly, cue_moment_integer, cue_moment_ks, cue_moment_radial, moment_exact, moment_s1_closed,
    moment_s1_closed_f64, moment_structure_at_u, structure_b_in,
};
use cuemom_core::mc::{joint_sample, moment_sample, McConfig, MomentEstimate, Sampler};
use cuemom_core::poly::UPolynomial;
use cuemom_core::scalar::{parse_rational, ratio_to_f64};
use cuemom_core::specfun::{hyp1f1, laguerre, zeta_real};
use cuemom_core::zeta::{arithmetic_factor, deriv_moment_closed_form, deriv_moment_series_from, log_convolution_table};
use cuemom_core::ExactNumber;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn q(text: &str) -> BigRational {
    parse_rational(text).expect("literal rational")
}

fn estimate<F>(n: usize, config: &McConfig, f: F) -> MomentEstimate
where
    F: Fn(&cuemom_core::mc::SpectrumSample) -> cuemom_core::Result<f64> + Sync,
{
    let progress = Progress::new("acceptance", config.batches(), false);
    parallel::estimate(n, config, false, f, &progress).expect("sampling succeeds")
}

/// Exact moments by three routes, in rational arithmetic.
fn exact_triple_agreement() -> Outcome {
    let mut checked = 0;
    for n in 1..=6u32 {
        for s in 1..=2u32 {
            for u in ["0", "1/4", "1/2", "3/4"] {
                let u = q(u);
                let a = moment_exact(n, s, &ExactNumber::Exact(u.clone())).unwrap();
                let b = ExactNumber::Exact(moment_structure_at_u(n, s, &u).unwrap());
                if a != b {
                    return outcome(false, format!("N={n} s={s} u={u}: {a} vs {b}"));
                }
                if s == 1 {
                    let c = ExactNumber::Exact(moment_s1_closed(n, &u));
                    if a != c {
                        return outcome(false, format!("N={n} u={u}: {a} vs closed sum {c}"));
                    }
                }
                checked += 1;
            }
        }
    }
    outcome(true, format!("{checked} points agree exactly"))
}

/// `(1/N!) ⟨|Δ(θ)|² |Λ'(z)|^{2s}⟩` on an `m^N` grid of the N-torus.
fn torus_moment(n: usize, s: u32, z: f64, m: usize) -> f64 {
    let phases: Vec<Complex64> = (0..m).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)).collect();
    let total_points = m.pow(n as u32);
    let mut idx = vec![0usize; n];
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..total_points {
        for (j, &i) in idx.iter().enumerate() {
            e[j] = phases[i];
        }
        let mut vdm = 1.0;
        for a in 0..n {
            for b in 0..a {
                vdm *= (e[a] - e[b]).norm_sqr();
            }
        }
        // Λ'(z) = −Σ_j e^{−iθ_j} Π_{k≠j} (1 − z e^{−iθ_k})
        let mut deriv = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let mut term = -e[j].conj();
            for (k, ek) in e.iter().enumerate() {
                if k != j {
                    term *= Complex64::new(1.0, 0.0) - z * ek.conj();
                }
            }
            deriv += term;
        }
        let f = vdm * deriv.norm_sqr().powi(s as i32);
        // Neumaier summation
        let t = sum + f;
        comp += if sum.abs() >= f.abs() { (sum - t) + f } else { (f - t) + sum };
        sum = t;
        for d in idx.iter_mut() {
            *d += 1;
            if *d < m {
                break;
            }
            *d = 0;
        }
    }
    let nfact: f64 = (1..=n).map(|k| k as f64).product();
    (sum + comp) / total_points as f64 / nfact
}

fn torus_quadrature() -> Outcome {
    let mut worst: f64 = 0.0;
    let z = 0.5f64.sqrt();
    for n in 1..=3usize {
        for s in 1..=2u32 {
            let exact = moment_exact(n as u32, s, &ExactNumber::Exact(q("1/2"))).unwrap().to_f64();
            let quad = torus_moment(n, s, z, 200);
            worst = worst.max(((quad - exact) / exact).abs());
        }
    }
    outcome(worst < 1e-6, format!("max relative error {worst:.2e} (200 points per dimension)"))
}

fn monte_carlo() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for s in [1u32, 2] {
        for r in [0.3, 0.6] {
            let config = McConfig::new(1000 + s as u64 * 10 + (r * 10.0) as u64, 100_000).unwrap();
            let est = estimate(6, &config, |x| moment_sample(x, s as f64, Complex64::new(r, 0.0)));
            let exact = moment_exact(6, s, &ExactNumber::Float(r * r)).unwrap().to_f64();
            let z = (est.mean - exact).abs() / est.std_error;
            ok &= z <= 5.0;
            lines.push(format!("N=6 s={s} r={r}: {z:.2} SE"));
        }
    }
    let config = McConfig::new(2024, 100_000).unwrap().with_sampler(Sampler::Verblunsky);
    let (z1, z2) = (Complex64::new(0.3, 0.0), Complex64::new(0.0, 0.5));
    let est = estimate(60, &config, |x| joint_sample(x, 1.0, 1.0, z1, z2));
    let limit = joint_moment(1.0, 1.0, z1, z2).unwrap();
    let diff = (est.mean - limit).abs();
    let tol = (5.0 * est.std_error).max(0.03 * limit);
    ok &= diff <= tol;
    lines.push(format!("joint N=60: {:.5} vs {:.5} (|diff| {diff:.2e}, tol {tol:.2e})", est.mean, limit));
    outcome(ok, lines.join("; "))
}

fn global_limit() -> Outcome {
    let (n, r) = (2000u32, 0.5f64);
    let mut lines = Vec::new();
    let mut ok = true;
    for s in [1u32, 2] {
        let sf = s as f64;
        let m = moment_exact(n, s, &ExactNumber::Float(r * r)).unwrap().to_f64();
        let scaled = m * (1.0 - r * r).powf(sf * sf + 2.0 * sf);
        let target = (-sf * sf * r * r).exp() * libm::tgamma(sf + 1.0) * hyp1f1(sf + 1.0, 1.0, sf * sf * r * r).unwrap();
        let rel = ((scaled - target) / target).abs();
        ok &= rel < 0.01;
        lines.push(format!("s={s}: rel {rel:.2e}"));
        let direct = global_moment(sf, r).unwrap() * (1.0 - r * r).powf(sf * sf + 2.0 * sf);
        ok &= ((direct - target) / target).abs() < 1e-12;
    }
    outcome(ok, lines.join("; "))
}

fn microscopic() -> Outcome {
    let n = 4000u32;
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for s in [1u32, 2] {
        for c in [0.0, 1.0, 2.0] {
            let m = moment_exact(n, s, &ExactNumber::Float(1.0 - c / n as f64)).unwrap().to_f64();
            let scaled = m / (n as f64).powi((s * s + 2 * s) as i32);
            let b = micro_b(s, c).unwrap();
            worst = worst.max(((scaled - b) / b).abs());
        }
    }
    ok &= worst < 0.01;
    let third = micro_b_exact_c0(1).unwrap() == q("1/3");
    ok &= third;
    let mut bessel: f64 = 0.0;
    for s in 1..=3 {
        for c in [-1.0, 0.0, 0.5, 2.0] {
            bessel = bessel.max((micro_b(s, c).unwrap() - micro_b_bessel(s, c).unwrap()).abs());
        }
    }
    ok &= bessel < 1e-9;
    outcome(ok, format!("max rel {worst:.2e} at N=4000; b_1(0) = 1/3: {third}; Bessel form max diff {bessel:.1e}"))
}

fn mesoscopic() -> Outcome {
    let n = 1e6f64;
    let ratio = moment_s1_closed_f64(n as u64, 1.0 - n.powf(-0.5)) / (2.0 * n.powf(1.5));
    let n2 = 1e4f64;
    let m2 = moment_exact(n2 as u32, 2, &ExactNumber::Float(1.0 - n2.powf(-0.5))).unwrap().to_f64();
    let coeff = m2 / n2.powf(4.0);
    let rel = (coeff - 34.0).abs() / 34.0;
    let ok = (0.99..=1.01).contains(&ratio) && rel < 0.05 && (laguerre(2, -4.0) * 2.0 - 34.0).abs() < 1e-12;
    outcome(ok, format!("s=1 ratio {ratio:.5} at N=1e6; s=2 coefficient {coeff:.3} at N=1e4 (rel {rel:.2e})"))
}

fn zero_density() -> Outcome {
    let r = 0.5f64.sqrt();
    let mut means = Vec::new();
    for (i, n) in [25usize, 50, 100].into_iter().enumerate() {
        let config = McConfig::new(77 + i as u64, 10_000).unwrap().with_sampler(Sampler::Verblunsky);
        let progress = Progress::new("zeros", config.batches(), false);
        let sweep = parallel::zero_sweep(n, &[r], &config, &progress).unwrap();
        means.push((n, sweep.counts[0].mean, sweep.counts[0].std_error, sweep.ambiguous[0]));
    }
    let gaps: Vec<f64> = means.iter().map(|m| (m.1 - 2.0).abs()).collect();
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
    let close = gaps[2] <= 0.2;
    let detail: Vec<String> =
        means.iter().map(|(n, m, se, amb)| format!("N={n}: {m:.4} ± {se:.4} (ambiguous {amb})")).collect();
    outcome(monotone && close, format!("{}; |mean − 2| non-increasing: {monotone}", detail.join(", ")))
}

fn combinatorial() -> Outcome {
    let mut ok = true;
    for n in 1..=6 {
        for c in enumerate_compositions(n) {
            ok &= omega_weight(&c) == syt_count(&c.to_partition()).unwrap();
        }
    }
    for m in 0..=8u32 {
        let total: BigUint = enumerate_partitions(m).iter().map(|l| syt_count(l).unwrap().pow(2)).sum();
        let fact: BigUint = (1..=m).map(BigUint::from).product();
        ok &= total == fact;
    }
    let mut worst: f64 = 0.0;
    for s in 1..=6u32 {
        for x in [0.1, 1.0, 4.0, 9.0, 25.0] {
            let lhs = hyp1f1(s as f64 + 1.0, 1.0, x).unwrap();
            let rhs = x.exp() * laguerre(s, -x);
            worst = worst.max(((lhs - rhs) / rhs).abs());
        }
    }
    ok &= worst < 1e-11;
    outcome(ok, format!("tableau identities hold; Kummer identity max rel {worst:.1e}"))
}

fn zeta_side() -> Outcome {
    let mut ok = true;
    let a2 = arithmetic_factor(2.0, 1_000_000).unwrap();
    let target = 6.0 / (PI * PI);
    let a2_err = (a2.value - target).abs();
    ok &= a2_err < 1e-8;

    let n_max = 10_000_000;
    let table1 = log_convolution_table(1, n_max).unwrap();
    let s1 = deriv_moment_series_from(&table1, 1, 0.8).unwrap();
    drop(table1);
    let zpp = zeta_real(1.6, 2).unwrap();
    let within = s1.tail_is_bound && s1.partial <= zpp && zpp - s1.partial <= s1.tail;
    ok &= within;

    let table2 = log_convolution_table(2, n_max).unwrap();
    let limit = target * 34.0;
    let mut partial = Vec::new();
    let mut estimate = Vec::new();
    let mut closed = Vec::new();
    for sigma in [0.75, 0.65, 0.6] {
        let scale = (2.0 * sigma - 1.0f64).powi(8);
        let v = deriv_moment_series_from(&table2, 2, sigma).unwrap();
        partial.push(scale * v.partial);
        estimate.push(scale * v.estimate());
        closed.push(scale * deriv_moment_closed_form(sigma).unwrap());
    }
    // Increasing toward the limit: each value larger than the last, none beyond it.
    let trend = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]) && v.iter().all(|&x| x <= limit);
    let trend_ok = trend(&estimate);
    ok &= trend_ok;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
    outcome(
        ok,
        format!(
            "a_2 error {a2_err:.1e}; s=1 series within tail bound: {within} (gap {:.6e} vs bound {:.6e}); \
             trend toward {limit:.4} over sigma 0.75, 0.65, 0.6: estimate [{}], partial sums [{}], closed form [{}]",
            zpp - s1.partial,
            s1.tail,
            fmt(&estimate),
            fmt(&partial),
            fmt(&closed)
        ),
    )
}

fn cue_moments() -> Outcome {
    let mut worst: f64 = 0.0;
    for s in 1..=4u32 {
        for n in 1..=20u32 {
            let exact = ratio_to_f64(&cue_moment_integer(n, s));
            let ks = cue_moment_ks(n, s as f64).unwrap();
            worst = worst.max(((ks - exact) / exact).abs());
        }
    }
    let u = 0.25;
    let m = cue_moment_radial(2000, 2, &ExactNumber::Float(u)).unwrap().to_f64();
    let scaled = m * (1.0 - u).powi(4);
    let rel = (scaled - 1.0).abs();
    outcome(worst < 1e-10 && rel < 0.01, format!("product formulas max rel {worst:.1e}; global limit rel {rel:.2e} at N=2000"))
}

fn appendix_expansion() -> Outcome {
    let mut ok = true;
    let mut checked = Vec::new();
    for s in 1..=2u32 {
        for n in [5u32, 8] {
            let expansion = appendix_b00_poly(n, s).unwrap();
            let direct = structure_b_in(n, s, 0, 0, &UPolynomial::x()).unwrap();
            let same = expansion == direct;
            ok &= same;
            checked.push(format!("s={s} N={n}: {} coefficients {}", expansion.coeffs().len(), if same { "match" } else { "DIFFER" }));
        }
    }
    outcome(ok, checked.join("; "))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("exact routes agree", Duration::from_secs(10), exact_triple_agreement),
        ("torus quadrature", Duration::from_secs(120), torus_quadrature),
        ("Monte Carlo agreement", Duration::from_secs(300), monte_carlo),
        ("global limit", Duration::from_secs(60), global_limit),
        ("microscopic limit", Duration::from_secs(120), microscopic),
        ("mesoscopic limit", Duration::MAX, mesoscopic),
        ("zero density", Duration::from_secs(600), zero_density),
        ("combinatorial identities", Duration::MAX, combinatorial),
        ("zeta side", Duration::from_secs(300), zeta_side),
        ("CUE moments", Duration::MAX, cue_moments),
        ("appendix expansion", Duration::MAX, appendix_expansion),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let passed = result.passed && in_time;
        if !passed {
            failures += 1;
        }
        let timing = if *budget == Duration::MAX {
            format!("{:.1}s", elapsed.as_secs_f64())
        } else {
            format!("{:.1}s of {}s", elapsed.as_secs_f64(), budget.as_secs())
        };
        println!("criterion {:>2} {}: {} [{timing}] {}", i + 1, name, if passed { "PASS" } else { "FAIL" }, result.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
