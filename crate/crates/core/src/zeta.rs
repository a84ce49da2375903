//! Dirichlet-series side: divisor and log-convolution tables, truncated
//! mean-square series for `ζ` and `ζ'` off the critical line, the arithmetic
//! factor `a_s`, and the conjectured random-matrix right-hand side.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Error, Result};
use crate::specfun::{hyp1f1, zeta_real, zeta_taylor};

/// Values `f(1), …, f(n_max)` of an arithmetic function.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletTable {
    label: String,
    values: Vec<f64>,
}

impl DirichletTable {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid!("table needs n_max >= 1"));
        }
        Ok(DirichletTable { label: label.into(), values })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// `f(n)` for `1 ≤ n ≤ n_max`.
    pub fn get(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    /// Values in order `n = 1, 2, …`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Writes `n,value` rows under a header naming the function.
    pub fn write_csv<W: fmt::Write>(&self, out: &mut W) -> fmt::Result {
        writeln!(out, "n,{}", self.label)?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{:e}", i + 1, v)?;
        }
        Ok(())
    }
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(invalid!("n_max must be >= 1"));
    }
    Ok(())
}

/// Dirichlet convolution `(f∗g)(n) = Σ_{d|n} f(d) g(n/d)` by sieving over
/// divisor pairs, `O(n log n)`.
pub fn dirichlet_convolve(f: &DirichletTable, g: &DirichletTable, label: impl Into<String>) -> Result<DirichletTable> {
    if f.n_max() != g.n_max() {
        return Err(invalid!("tables differ in length: {} vs {}", f.n_max(), g.n_max()));
    }
    let n = f.n_max();
    let mut out = vec![0.0; n];
    for d in 1..=n {
        let fd = f.values[d - 1];
        if fd == 0.0 {
            continue;
        }
        for q in 1..=n / d {
            out[d * q - 1] += fd * g.values[q - 1];
        }
    }
    DirichletTable::new(label, out)
}

/// `d_s(n)`, the `s`-fold convolution of the constant function 1.
pub fn divisor_table(s: u32, n_max: usize) -> Result<DirichletTable> {
    if s == 0 {
        return Err(invalid!("s must be >= 1"));
    }
    check_n_max(n_max)?;
    let one = DirichletTable::new("1", vec![1.0; n_max])?;
    let mut t = DirichletTable::new("d_1", vec![1.0; n_max])?;
    for k in 2..=s {
        t = dirichlet_convolve(&t, &one, format!("d_{k}"))?;
    }
    Ok(t)
}

/// `log n`.
pub fn log_table(n_max: usize) -> Result<DirichletTable> {
    check_n_max(n_max)?;
    DirichletTable::new("log", (1..=n_max).map(|n| libm::log(n as f64)).collect())
}

/// `(log ∗ ⋯ ∗ log)(n)` with `s` factors.
pub fn log_convolution_table(s: u32, n_max: usize) -> Result<DirichletTable> {
    if s == 0 {
        return Err(invalid!("s must be >= 1"));
    }
    let log = log_table(n_max)?;
    let mut t = log.clone();
    for k in 2..=s {
        t = dirichlet_convolve(&t, &log, format!("log^*{k}"))?;
    }
    Ok(t)
}

/// Neumaier-compensated sum.
#[derive(Clone, Copy, Debug, Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `Γ(a+1, y) = a! e^{−y} Σ_{k≤a} y^k/k!` for integer `a ≥ 0`.
pub fn upper_incomplete_gamma_int(a: u32, y: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=a {
        term *= y / k as f64;
        sum += term;
    }
    let fact: f64 = (1..=a).map(|k| k as f64).product();
    fact * libm::exp(-y) * sum
}

/// A truncated Dirichlet series with its tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    /// `Σ_{n ≤ n_max}`.
    pub partial: f64,
    /// Estimate of `Σ_{n > n_max}`; a rigorous upper bound when
    /// `tail_is_bound`.
    pub tail: f64,
    pub tail_is_bound: bool,
    pub n_max: usize,
}

impl SeriesValue {
    /// `partial + tail`.
    pub fn estimate(&self) -> f64 {
        self.partial + self.tail
    }

    /// True when the tail exceeds `rel_tol` of the partial sum.
    pub fn is_partial(&self, rel_tol: f64) -> bool {
        self.tail > rel_tol * libm::fabs(self.partial)
    }
}

/// `Σ_{n≤N} f(n)² n^{−2σ}` plus the tail model
/// `∫_N^∞ c (log x)^a x^{−2σ} dx = c Γ(a+1, (2σ−1) log N)/(2σ−1)^{a+1}`.
///
/// With `exact_c = Some(c)` the model coefficient is known and
/// `c (log x)^a x^{−2σ}` dominates the summand, so the tail is a bound.
/// Otherwise `c` is calibrated as the ratio of `Σ f(n)²` to `Σ (log n)^a`
/// over `N/2 < n ≤ N`.
fn squared_series(table: &DirichletTable, sigma: f64, a: u32, exact_c: Option<f64>) -> Result<SeriesValue> {
    if !(sigma > 0.5) {
        return Err(invalid!("series requires sigma > 1/2, got {sigma}"));
    }
    let n_max = table.n_max();
    let two_sigma = 2.0 * sigma;
    let mut acc = CompensatedSum::default();
    for (i, &f) in table.values().iter().enumerate().rev() {
        if f != 0.0 {
            acc.add(f * f * libm::pow((i + 1) as f64, -two_sigma));
        }
    }
    let c = match exact_c {
        Some(c) => c,
        None => {
            let (mut num, mut den) = (0.0, 0.0);
            for n in (n_max / 2 + 1)..=n_max {
                let f = table.get(n);
                num += f * f;
                den += libm::pow(libm::log(n as f64), a as f64);
            }
            if den > 0.0 {
                num / den
            } else {
                0.0
            }
        }
    };
    let e = two_sigma - 1.0;
    let y = e * libm::log(n_max as f64);
    let tail = c * upper_incomplete_gamma_int(a, y) / libm::pow(e, a as f64 + 1.0);
    Ok(SeriesValue { partial: acc.value(), tail, tail_is_bound: exact_c.is_some(), n_max })
}

/// `Σ ((log∗⋯∗log)(n))² / n^{2σ}` (s factors), truncated at `n_max`.
///
/// The tail model uses `(log∗⋯∗log)(n)² ≈ c (log n)^{s²−1+2s}` on average.
pub fn deriv_moment_series(s: u32, sigma: f64, n_max: usize) -> Result<SeriesValue> {
    let table = log_convolution_table(s, n_max)?;
    deriv_moment_series_from(&table, s, sigma)
}

/// [`deriv_moment_series`] for a precomputed log-convolution table.
pub fn deriv_moment_series_from(table: &DirichletTable, s: u32, sigma: f64) -> Result<SeriesValue> {
    if s == 0 {
        return Err(invalid!("s must be >= 1"));
    }
    let exact = if s == 1 { Some(1.0) } else { None };
    squared_series(table, sigma, s * s - 1 + 2 * s, exact)
}

/// `Σ d_s(n)² / n^{2σ}`, truncated at `n_max`, with tail model
/// `d_s(n)² ≈ c (log n)^{s²−1}`.
pub fn lindelof_series(s: u32, sigma: f64, n_max: usize) -> Result<SeriesValue> {
    let table = divisor_table(s, n_max)?;
    let exact = if s == 1 { Some(1.0) } else { None };
    squared_series(&table, sigma, s * s - 1, exact)
}

/// Multilinear jet in four nilpotent variables (`ε_i² = 0`), indexed by
/// bitmask; the top coefficient is the mixed fourth partial derivative.
#[derive(Clone, Copy, Debug)]
struct Multilinear([f64; 16]);

impl Multilinear {
    fn constant(a: f64) -> Self {
        let mut c = [0.0; 16];
        c[0] = a;
        Multilinear(c)
    }

    fn mul(&self, o: &Self) -> Self {
        let mut c = [0.0; 16];
        for a in 0..16 {
            if self.0[a] == 0.0 {
                continue;
            }
            for b in 0..16 {
                if a & b == 0 {
                    c[a | b] += self.0[a] * o.0[b];
                }
            }
        }
        Multilinear(c)
    }

    fn add(&self, o: &Self) -> Self {
        let mut c = self.0;
        c.iter_mut().zip(o.0.iter()).for_each(|(x, y)| *x += y);
        Multilinear(c)
    }

    fn scale(&self, k: f64) -> Self {
        let mut c = self.0;
        c.iter_mut().for_each(|x| *x *= k);
        Multilinear(c)
    }

    /// `1/x` via `1/(x₀(1+g)) = x₀^{−1} Σ_{k≤4} (−g)^k`.
    fn recip(&self) -> Self {
        let x0 = self.0[0];
        let mut g = self.scale(1.0 / x0);
        g.0[0] = 0.0;
        let neg_g = g.scale(-1.0);
        let mut term = Multilinear::constant(1.0);
        let mut acc = term;
        for _ in 0..4 {
            term = term.mul(&neg_g);
            acc = acc.add(&term);
        }
        acc.scale(1.0 / x0)
    }

    /// `ζ(w + ℓ)` for a linear form `ℓ = Σ_{i ∈ vars} ε_i`.
    fn zeta_shift(w: f64, vars: &[usize]) -> Result<Self> {
        let taylor = zeta_taylor(w)?;
        let mut l = Multilinear::constant(0.0);
        for &v in vars {
            l.0[1 << v] = 1.0;
        }
        let mut power = Multilinear::constant(1.0);
        let mut acc = Multilinear::constant(0.0);
        for t in taylor {
            acc = acc.add(&power.scale(t));
            power = power.mul(&l);
        }
        Ok(acc)
    }
}

/// The full series `Σ ((log∗log)(n))²/n^{2σ}` in closed form, as the mixed
/// partial `∂α₁∂α₂∂β₁∂β₂` at zero of
/// `ζ(2σ+α₁+β₁)ζ(2σ+α₁+β₂)ζ(2σ+α₂+β₁)ζ(2σ+α₂+β₂)/ζ(4σ+α₁+α₂+β₁+β₂)`.
pub fn deriv_moment_closed_form(sigma: f64) -> Result<f64> {
    if !(sigma > 0.5) {
        return Err(invalid!("requires sigma > 1/2, got {sigma}"));
    }
    let (a1, a2, b1, b2) = (0, 1, 2, 3);
    let w = 2.0 * sigma;
    let mut num = Multilinear::constant(1.0);
    for (a, b) in [(a1, b1), (a1, b2), (a2, b1), (a2, b2)] {
        num = num.mul(&Multilinear::zeta_shift(w, &[a, b])?);
    }
    let den = Multilinear::zeta_shift(2.0 * w, &[a1, a2, b1, b2])?;
    Ok(num.mul(&den.recip()).0[15])
}

/// Primes `≤ n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    out
}

/// The Möbius function.
pub fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Prime zeta `P(k) = Σ_p p^{−k} = Σ_n μ(n)/n · log ζ(nk)` for `k ≥ 2`.
pub fn prime_zeta(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(invalid!("prime zeta requires k >= 2"));
    }
    let mut acc = CompensatedSum::default();
    let mut n = 1u32;
    loop {
        let w = (n * k) as f64;
        // log ζ(w) ≈ 2^{−w} once w is large; stop when it is negligible.
        if w > 64.0 {
            break;
        }
        let mu = mobius(n as u64);
        if mu != 0 {
            let zm1 = if w > 20.0 { zeta_minus_one_direct(w) } else { zeta_real(w, 0)? - 1.0 };
            acc.add(mu as f64 / n as f64 * libm::log1p(zm1));
        }
        n += 1;
    }
    Ok(acc.value())
}

/// `ζ(w) − 1` by direct summation, accurate for large `w`.
fn zeta_minus_one_direct(w: f64) -> f64 {
    let mut sum = 0.0;
    for n in (2..=40).rev() {
        sum += libm::pow(n as f64, -w);
    }
    sum
}

/// `a_s` with its truncation diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArithmeticFactor {
    /// Tail-corrected value.
    pub value: f64,
    /// Plain product over `p ≤ p_max`.
    pub truncated: f64,
    /// `log value − log truncated`: the correction applied to the plain product.
    pub tail_correction: f64,
    /// Bound on the error left in `value` (omitted orders of the tail).
    pub residual_bound: f64,
    pub p_max: usize,
}

const EULER_ORDERS: usize = 6;

/// Coefficients `κ_k` of `log[(1−x)^{s²} Σ_m (Γ(s+m)/(m!Γ(s)))² x^m] = Σ_k κ_k x^k`
/// for `k ≤ EULER_ORDERS + 1` (`κ_1 = 0`).
fn euler_log_coefficients(s: f64) -> [f64; EULER_ORDERS + 2] {
    const K: usize = EULER_ORDERS + 2;
    let mut f = [0.0; K];
    let mut c = 1.0;
    for (m, slot) in f.iter_mut().enumerate() {
        *slot = c * c;
        c *= (s + m as f64) / (m as f64 + 1.0);
    }
    // log of a series with f[0] = 1: k L_k = k f_k − Σ_{j<k} j L_j f_{k−j}
    let mut l = [0.0; K];
    for k in 1..K {
        let mut v = k as f64 * f[k];
        for j in 1..k {
            v -= j as f64 * l[j] * f[k - j];
        }
        l[k] = v / k as f64;
    }
    for (k, slot) in l.iter_mut().enumerate().skip(1) {
        *slot -= s * s / k as f64;
    }
    l
}

/// `a_s = Π_p (1−1/p)^{s²} Σ_m (Γ(s+m)/(m!Γ(s)))² p^{−m}`.
///
/// The product runs over `p ≤ p_max`; the primes above contribute
/// `Σ_{k≥2} κ_k Σ_{p>p_max} p^{−k}`, evaluated for `k ≤ 6` through prime
/// zeta values, with the remaining orders bounded.
pub fn arithmetic_factor(s: f64, p_max: usize) -> Result<ArithmeticFactor> {
    if !(s > 0.0) {
        return Err(invalid!("s must be positive, got {s}"));
    }
    if p_max < 100 {
        return Err(invalid!("p_max must be >= 100, got {p_max}"));
    }
    let primes = primes_up_to(p_max);
    let s2 = s * s;
    let mut log_prod = CompensatedSum::default();
    let mut power_sums = [CompensatedSum::default(); EULER_ORDERS + 1];
    for &p in &primes {
        let x = 1.0 / p as f64;
        let mut c = 1.0;
        let mut xm = 1.0;
        let mut inner = CompensatedSum::default();
        let mut m = 0.0;
        loop {
            let term = c * c * xm;
            inner.add(term);
            if term < 1e-16 * inner.value() && m > 0.0 {
                break;
            }
            c *= (s + m) / (m + 1.0);
            xm *= x;
            m += 1.0;
        }
        log_prod.add(s2 * libm::log1p(-x) + libm::log(inner.value()));
        let mut xk = x;
        for slot in power_sums.iter_mut().skip(1) {
            xk *= x;
            slot.add(xk);
        }
    }
    let kappa = euler_log_coefficients(s);
    let mut correction = 0.0;
    for k in 2..=EULER_ORDERS {
        let tail_k = prime_zeta(k as u32)? - power_sums[k - 1].value();
        correction += kappa[k] * tail_k.max(0.0);
    }
    // Σ_{p>P} p^{−k} ≤ P^{1−k}/(k−1) for the first omitted order.
    let k = EULER_ORDERS + 1;
    let p = p_max as f64;
    let residual = libm::fabs(kappa[k]) * libm::pow(p, 1.0 - k as f64) / (k as f64 - 1.0) * 2.0;
    let log_truncated = log_prod.value();
    let value = libm::exp(log_truncated + correction);
    Ok(ArithmeticFactor {
        value,
        truncated: libm::exp(log_truncated),
        tail_correction: correction,
        residual_bound: value * (libm::exp(residual) - 1.0) + value * 1e-15,
        p_max,
    })
}

/// `h_s = e^{−s²} Γ(s+1) ₁F₁(s+1, 1; s²)`.
pub fn rmt_factor(s: f64) -> Result<f64> {
    if !(s > -1.0) {
        return Err(invalid!("s must exceed -1, got {s}"));
    }
    let x = s * s;
    Ok(libm::exp(-x) * libm::tgamma(s + 1.0) * hyp1f1(s + 1.0, 1.0, x)?)
}

/// `a_s h_s / (2σ−1)^{s²+2s}`, with `a_s` computed to `p_max`.
pub fn conjecture_rhs(s: f64, sigma: f64, p_max: usize) -> Result<f64> {
    if !(sigma > 0.5) {
        return Err(invalid!("requires sigma > 1/2, got {sigma}"));
    }
    let a = arithmetic_factor(s, p_max)?;
    Ok(a.value * rmt_factor(s)? / libm::pow(2.0 * sigma - 1.0, s * s + 2.0 * s))
}

/// Relative tail size above which a truncated series is reported as partial.
pub const DEFAULT_SERIES_REL_TOL: f64 = 1e-6;

impl fmt::Display for SeriesValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.tail_is_bound { "bound" } else { "estimate" };
        write!(f, "{} (+ tail {kind} {:e}, n_max {})", self.partial, self.tail, self.n_max)
    }
}

/// Error for tables that would not fit the requested size.
pub fn check_table_size(n_max: usize, limit: usize) -> Result<()> {
    if n_max > limit {
        return Err(Error::CapabilityLimit(format!("n_max {n_max} exceeds {limit}")));
    }
    Ok(())
}
