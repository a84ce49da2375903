//! Exact finite-N moments `E|Λ'_N(z)|^{2s}` for integer `s`.
//!
//! Two independent routes are provided:
//!
//! * the partition/determinant formula, a double sum over partitions
//!   `λ, μ ⊢ s` of `f_λ f_μ/(λ! μ!)` times an `s × s` determinant of
//!   derivatives of `u^p K_N^{(p)}(u)` with `K_N(u) = Σ_{j<N+s} u^j`;
//! * the structure expansion `Σ_h C_h(N, r)/(1 − r²)^{s²+2s−h}`, where
//!   `C_h` pairs Laguerre-type coefficients `a_{h₁,h₂}` with mixed
//!   derivatives `b_{h₁,h₂}` of a `2s × 2s` monomial determinant.
//!
//! Both are written once over [`Scalar`] and run with exact rationals,
//! floats, or polynomials in the radius.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{enumerate_partitions, factorial, partition_factorial, syt_count};
use crate::error::{invalid, Error, Result};
use crate::linalg::det_bareiss;
use crate::poly::UPolynomial;
use crate::scalar::{ExactNumber, Mode, Scalar};
use crate::specfun::{generalized_laguerre_poly, hyp1f1, log_gamma, recip_gamma};

/// Largest `s` accepted in exact rational mode.
pub const EXACT_S_CAP: u32 = 8;
/// Largest `s` accepted in floating mode.
pub const FLOAT_S_CAP: u32 = 12;

fn ratio(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Falling factorial `a (a−1) ⋯ (a−k+1)`, zero when `k > a`.
fn falling(a: u64, k: u64) -> BigInt {
    if k > a {
        return BigInt::zero();
    }
    ((a - k + 1)..=a).fold(BigInt::one(), |acc, x| acc * x)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        falling(n, k) / BigInt::from(factorial(k))
    }
}

/// A partition with its padded coordinates and weight `f_λ / λ!`.
#[derive(Clone, Debug)]
pub(crate) struct WeightedPartition {
    pub(crate) shifted: Vec<u32>,
    pub(crate) weight: BigRational,
}

pub(crate) fn weighted_partitions(weight: u32, pad: usize) -> Result<Vec<WeightedPartition>> {
    enumerate_partitions(weight)
        .into_iter()
        .filter(|p| p.len() <= pad)
        .map(|p| {
            let f = BigInt::from(syt_count(&p)?);
            let d = BigInt::from(partition_factorial(&p, pad)?);
            Ok(WeightedPartition { shifted: p.shifted(pad)?, weight: ratio(f, d) })
        })
        .collect()
}

/// `K_N(u) = Σ_{j=0}^{N+s−1} u^j`.
pub fn k_polynomial(n: u32, s: u32) -> Result<UPolynomial> {
    if n < 1 || s < 1 {
        return Err(invalid!("k_polynomial requires N, s >= 1"));
    }
    Ok(UPolynomial::new(vec![BigRational::one(); (n + s) as usize]))
}

/// `K^{(k)}(u)` for `K(u) = Σ_{j=0}^{deg} u^j`, by Horner's rule on the
/// falling-factorial coefficients.
fn k_derivative_value<T: Scalar>(deg: u64, k: u64, u: &T) -> T {
    if k > deg {
        return T::zero();
    }
    let mut acc = T::zero();
    for j in (k..=deg).rev() {
        acc = acc * u.clone() + T::from_bigint(&falling(j, k));
    }
    acc
}

/// Specialised float evaluation avoiding big integers.
fn k_derivative_f64(deg: u64, k: u64, u: f64) -> f64 {
    if k > deg {
        return 0.0;
    }
    let mut coeff: f64 = ((deg - k + 1)..=deg).map(|x| x as f64).product();
    let mut acc = 0.0;
    for j in (k..=deg).rev() {
        acc = acc * u + coeff;
        if j > k {
            // (j−1)_k = (j)_k · (j−k)/j
            coeff = coeff * (j - k) as f64 / j as f64;
        }
    }
    acc
}

/// Table of `K_N^{(k)}(u)` for `k = 0..=k_max`.
fn k_table<T: Scalar>(n: u32, s: u32, k_max: u32, u: &T) -> Vec<T> {
    let deg = (n + s - 1) as u64;
    (0..=k_max as u64).map(|k| k_derivative_value(deg, k, u)).collect()
}

fn k_table_f64(n: u32, s: u32, k_max: u32, u: f64) -> Vec<f64> {
    let deg = (n + s - 1) as u64;
    (0..=k_max as u64).map(|k| k_derivative_f64(deg, k, u)).collect()
}

/// `(u^p K^{(p)}(u))^{(q)} = Σ_r C(q,r) p!/(p−r)! u^{p−r} K^{(p+q−r)}(u)`,
/// given the table of `K` derivatives.
fn entry_from_table<T: Scalar>(p: u32, q: u32, u: &T, kd: &[T]) -> T {
    let mut acc = T::zero();
    for r in 0..=p.min(q) {
        let c = binomial(q as u64, r as u64) * falling(p as u64, r as u64);
        let idx = (p + q - r) as usize;
        acc = acc + T::from_bigint(&c) * u.powu(p - r) * kd[idx].clone();
    }
    acc
}

/// `(u^p K_N^{(p)}(u))^{(q)}` at `u`.
pub fn derivative_entry(p: i64, q: i64, n: u32, s: u32, u: &ExactNumber) -> Result<ExactNumber> {
    if p < 0 || q < 0 {
        return Err(invalid!("derivative orders must be non-negative, got ({p}, {q})"));
    }
    if n < 1 || s < 1 {
        return Err(invalid!("N and s must be positive"));
    }
    let (p, q) = (p as u32, q as u32);
    Ok(match u {
        ExactNumber::Exact(x) => {
            let kd = k_table(n, s, p + q, x);
            ExactNumber::Exact(entry_from_table(p, q, x, &kd))
        }
        ExactNumber::Float(x) => {
            let kd = k_table_f64(n, s, p + q, *x);
            ExactNumber::Float(entry_from_table(p, q, x, &kd))
        }
    })
}

fn moment_with_table<T: Scalar>(s: u32, u: &T, kd: &[T]) -> Result<T> {
    let parts = weighted_partitions(s, s as usize)?;
    let dim = 2 * s as usize;
    // all entries ever needed: p, q < 2s
    let mut entries: Vec<Vec<T>> = vec![vec![T::zero(); dim]; dim];
    for (p, row) in entries.iter_mut().enumerate() {
        for (q, e) in row.iter_mut().enumerate() {
            *e = entry_from_table(p as u32, q as u32, u, kd);
        }
    }
    let weights: Vec<T> = parts.iter().map(|w| T::from_ratio(&w.weight)).collect();
    let mut total = T::zero();
    for (lam, wl) in parts.iter().zip(&weights) {
        for (mu, wm) in parts.iter().zip(&weights) {
            let m: Vec<Vec<T>> = lam
                .shifted
                .iter()
                .map(|&p| mu.shifted.iter().map(|&q| entries[p as usize][q as usize].clone()).collect())
                .collect();
            total = total + wl.clone() * wm.clone() * det_bareiss(m)?;
        }
    }
    Ok(total)
}

/// `E|Λ'_N(z)|^{2s}` with `u = |z|²`, generic over the scalar type.
pub fn moment_exact_in<T: Scalar>(n: u32, s: u32, u: &T) -> Result<T> {
    if n < 1 || s < 1 {
        return Err(invalid!("moment_exact requires N, s >= 1"));
    }
    let kd = k_table(n, s, 4 * s - 2, u);
    moment_with_table(s, u, &kd)
}

/// `E|Λ'_N(z)|^{2s}` as a polynomial in `u = |z|²`.
pub fn moment_exact_poly(n: u32, s: u32) -> Result<UPolynomial> {
    if s > EXACT_S_CAP {
        return Err(Error::CapabilityLimit(format!("exact mode supports s <= {EXACT_S_CAP}, got {s}")));
    }
    moment_exact_in(n, s, &UPolynomial::x())
}

/// `E|Λ'_N(z)|^{2s}` at `u = |z|²`, exactly for rational `u` or in floating
/// point.
pub fn moment_exact(n: u32, s: u32, u: &ExactNumber) -> Result<ExactNumber> {
    if n < 1 || s < 1 {
        return Err(invalid!("moment_exact requires N, s >= 1"));
    }
    if u.is_negative() {
        return Err(invalid!("u = |z|^2 must be non-negative"));
    }
    match u {
        ExactNumber::Exact(x) => {
            if s > EXACT_S_CAP {
                return Err(Error::CapabilityLimit(format!("exact mode supports s <= {EXACT_S_CAP}, got {s}")));
            }
            Ok(ExactNumber::Exact(moment_exact_in(n, s, x)?))
        }
        ExactNumber::Float(x) => {
            if s > FLOAT_S_CAP {
                return Err(Error::CapabilityLimit(format!("float mode supports s <= {FLOAT_S_CAP}, got {s}")));
            }
            if !x.is_finite() {
                return Err(invalid!("u must be finite"));
            }
            let kd = k_table_f64(n, s, 4 * s - 2, *x);
            Ok(ExactNumber::Float(moment_with_table(s, x, &kd)?))
        }
    }
}

/// The `s = 1` closed sum `Σ_{j=1}^{N} j² u^{j−1}`.
pub fn moment_s1_closed<T: Scalar>(n: u32, u: &T) -> T {
    let mut acc = T::zero();
    for j in (1..=n as i64).rev() {
        acc = acc * u.clone() + T::from_i64(j * j);
    }
    acc
}

/// Float evaluation of `Σ_{j=1}^{N} j² u^{j−1}` for very large `N`.
pub fn moment_s1_closed_f64(n: u64, u: f64) -> f64 {
    let mut acc = 0.0;
    let mut j = n;
    while j >= 1 {
        let jf = j as f64;
        acc = acc * u + jf * jf;
        j -= 1;
    }
    acc
}

/// `E|Λ_N(z)|^{2s}` at `u = |z|²`:
/// `det{(u^{s−i} K^{(s−i)})^{(s−j)}} / Π_i ((s−i)!)²`.
pub fn cue_moment_radial_in<T: Scalar>(n: u32, s: u32, u: &T) -> Result<T> {
    if n < 1 || s < 1 {
        return Err(invalid!("cue_moment_radial requires N, s >= 1"));
    }
    let kd = k_table(n, s, 2 * s - 2, u);
    cue_radial_with_table(s, u, &kd)
}

fn cue_radial_with_table<T: Scalar>(s: u32, u: &T, kd: &[T]) -> Result<T> {
    let orders: Vec<u32> = (0..s).rev().collect();
    let m: Vec<Vec<T>> = orders
        .iter()
        .map(|&p| orders.iter().map(|&q| entry_from_table(p, q, u, kd)).collect())
        .collect();
    let norm = orders.iter().fold(BigUint::one(), |acc, &p| {
        let f = factorial(p as u64);
        acc * &f * &f
    });
    let det = det_bareiss(m)?;
    det.div_exact(&T::from_bigint(&BigInt::from(norm)))
        .ok_or_else(|| Error::Corruption("zero normalisation".into()))
}

/// `E|Λ_N(z)|^{2s}` at `u = |z|²` for integer `s`, exact or float.
pub fn cue_moment_radial(n: u32, s: u32, u: &ExactNumber) -> Result<ExactNumber> {
    if u.is_negative() {
        return Err(invalid!("u = |z|^2 must be non-negative"));
    }
    match u {
        ExactNumber::Exact(x) => Ok(ExactNumber::Exact(cue_moment_radial_in(n, s, x)?)),
        ExactNumber::Float(x) => {
            if n < 1 || s < 1 {
                return Err(invalid!("cue_moment_radial requires N, s >= 1"));
            }
            let kd = k_table_f64(n, s, 2 * s - 2, *x);
            Ok(ExactNumber::Float(cue_radial_with_table(s, x, &kd)?))
        }
    }
}

/// `Π_{j=1}^{N} Γ(j)Γ(j+2s)/Γ(j+s)²` for real `s > −1/2`.
pub fn cue_moment_ks(n: u32, s: f64) -> Result<f64> {
    if !(s > -0.5) {
        return Err(invalid!("cue_moment_ks requires s > -1/2, got {s}"));
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let mut log_sum = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        log_sum += log_gamma(jf)? + log_gamma(jf + 2.0 * s)? - 2.0 * log_gamma(jf + s)?;
    }
    Ok(libm::exp(log_sum))
}

/// `Π_{j=1}^{s} Γ(j)Γ(N+s+j)/(Γ(s+j)Γ(N+j))` exactly.
pub fn cue_moment_integer(n: u32, s: u32) -> BigRational {
    let mut acc = BigRational::one();
    for j in 1..=s as u64 {
        let n = n as u64;
        let s = s as u64;
        let num = factorial(j - 1) * factorial(n + s + j - 1);
        let den = factorial(s + j - 1) * factorial(n + j - 1);
        acc *= ratio(BigInt::from(num), BigInt::from(den));
    }
    acc
}

/// The Laguerre coefficient `a_{h₁,h₂}` as a function of `r = |z|`:
/// `(s!)²/(h₁! h₂! Γ(h₂−h₁+1) Γ(s−h₂+1)) e^{−s²r²} ₁F₁(s+1−h₁, h₂−h₁+1; s²r²)`.
pub fn structure_a(s: f64, h1: u32, h2: u32, r: f64) -> Result<f64> {
    if h1 > h2 {
        return Err(invalid!("structure_a requires h1 <= h2"));
    }
    if !(s > -1.0) || !(r >= 0.0) {
        return Err(invalid!("structure_a requires s > -1 and r >= 0"));
    }
    let inv_g = recip_gamma(s - h2 as f64 + 1.0);
    if inv_g == 0.0 {
        return Ok(0.0);
    }
    let x = s * s * r * r;
    let fact = |k: u32| (1..=k).map(|i| i as f64).product::<f64>();
    let gs = libm::tgamma(s + 1.0);
    let pref = gs * gs * inv_g / (fact(h1) * fact(h2) * fact(h2 - h1));
    Ok(pref * libm::exp(-x) * hyp1f1(s + 1.0 - h1 as f64, (h2 - h1 + 1) as f64, x)?)
}

/// `a_{h₁,h₂}` for integer `s` as an exact polynomial in `u = r²`:
/// `(s!)² L^{(h₂−h₁)}_{s−h₂}(−s²u) / (h₁! h₂! (s−h₁)!)`.
pub fn structure_a_poly(s: u32, h1: u32, h2: u32) -> Result<UPolynomial> {
    if h1 > h2 {
        return Err(invalid!("structure_a requires h1 <= h2"));
    }
    if h2 > s {
        return Ok(UPolynomial::new(Vec::new()));
    }
    let lag = generalized_laguerre_poly(s - h2, &int((h2 - h1) as u64));
    // substitute x = −s² u
    let scale = -int((s * s) as u64);
    let mut c = BigRational::one();
    let coeffs: Vec<BigRational> = lag
        .coeffs()
        .iter()
        .map(|a| {
            let v = a * &c;
            c = &c * &scale;
            v
        })
        .collect();
    let sf = BigInt::from(factorial(s as u64));
    let den = BigInt::from(factorial(h1 as u64) * factorial(h2 as u64) * factorial((s - h1) as u64));
    Ok(UPolynomial::new(coeffs).scale(&ratio(&sf * &sf, den)))
}

/// Exponents of the monomials in the columns of the block matrix: the top
/// block is `(V_z | Y_z)`, the bottom `(Y_w | V_w)`.
fn block_exponents(n: u32, s: u32) -> (Vec<u64>, Vec<u64>) {
    let v: Vec<u64> = (0..s as u64).collect();
    let y: Vec<u64> = (0..s as u64).map(|j| (n + 2 * s - 1) as u64 - j).collect();
    let top = v.iter().chain(y.iter()).copied().collect();
    let bottom = y.iter().chain(v.iter()).copied().collect();
    (top, bottom)
}

/// Mixed derivative `Π ∂_{w_j} Π ∂_{z_i} G` at `z = w = x` (all coordinates
/// equal), where `G = det A / (Δ(z) Δ(w))`, via the partition expansion of
/// the merged derivatives. `x` plays the role of `−|z|`.
pub fn structure_g_derivative_in<T: Scalar>(n: u32, s: u32, h1: u32, h2: u32, x: &T) -> Result<T> {
    if h1 > s || h2 > s {
        return Err(invalid!("structure coefficients require h1, h2 <= s"));
    }
    if n < 1 || s < 1 {
        return Err(invalid!("N and s must be positive"));
    }
    let (top, bottom) = block_exponents(n, s);
    let max_exp = (n + 2 * s - 1) as u32;
    let powers: Vec<T> = {
        let mut v = Vec::with_capacity(max_exp as usize + 1);
        let mut p = T::one();
        for _ in 0..=max_exp {
            v.push(p.clone());
            p = p * x.clone();
        }
        v
    };
    let row = |exps: &[u64], order: u32| -> Vec<T> {
        exps.iter()
            .map(|&e| {
                let k = order as u64;
                if k > e {
                    T::zero()
                } else {
                    T::from_bigint(&falling(e, k)) * powers[(e - k) as usize].clone()
                }
            })
            .collect()
    };
    let lams = weighted_partitions(h1, s as usize)?;
    let mus = weighted_partitions(h2, s as usize)?;
    let mut total = T::zero();
    for lam in &lams {
        let top_rows: Vec<Vec<T>> = lam.shifted.iter().map(|&p| row(&top, p)).collect();
        for mu in &mus {
            let mut m = top_rows.clone();
            m.extend(mu.shifted.iter().map(|&q| row(&bottom, q)));
            let w = T::from_ratio(&(&lam.weight * &mu.weight));
            total = total + w * det_bareiss(m)?;
        }
    }
    Ok(total)
}

/// `b_{h₁,h₂}(N, r) = (−s r)^{h₂−h₁} · [mixed derivative of G at −r]`,
/// for `h₁ ≤ h₂` (the only ordering the structure sum uses).
pub fn structure_b_in<T: Scalar>(n: u32, s: u32, h1: u32, h2: u32, r: &T) -> Result<T> {
    if h1 > h2 {
        return Err(invalid!("structure_b is evaluated for h1 <= h2; use the G derivative for other orders"));
    }
    let g = structure_g_derivative_in(n, s, h1, h2, &(-r.clone()))?;
    let pref = (T::from_i64(-(s as i64)) * r.clone()).powu(h2 - h1);
    Ok(pref * g)
}

/// `b_{h₁,h₂}(N, r)` at a rational or float radius.
pub fn structure_b(n: u32, s: u32, h1: u32, h2: u32, r: &ExactNumber) -> Result<ExactNumber> {
    Ok(match r {
        ExactNumber::Exact(q) => ExactNumber::Exact(structure_b_in(n, s, h1, h2, q)?),
        ExactNumber::Float(x) => ExactNumber::Float(structure_b_in(n, s, h1, h2, x)?),
    })
}

/// Substitutes `u = r²` into a polynomial in `u`.
fn u_to_r(p: &UPolynomial) -> UPolynomial {
    let mut coeffs = vec![BigRational::zero(); 2 * p.coeffs().len()];
    for (k, c) in p.coeffs().iter().enumerate() {
        coeffs[2 * k] = c.clone();
    }
    UPolynomial::new(coeffs)
}

/// `C_h(N, r)` as an exact polynomial in `u = r²`.
pub fn structure_c_poly(n: u32, s: u32, h: u32) -> Result<UPolynomial> {
    if s > EXACT_S_CAP {
        return Err(Error::CapabilityLimit(format!("exact mode supports s <= {EXACT_S_CAP}, got {s}")));
    }
    let r = UPolynomial::x();
    let mut total = UPolynomial::new(Vec::new());
    for h1 in 0..=h / 2 {
        let h2 = h - h1;
        if h2 > s {
            continue;
        }
        let a = u_to_r(&structure_a_poly(s, h1, h2)?);
        let b = structure_b_in(n, s, h1, h2, &r)?;
        let term = a * b;
        total = total + if h1 < h2 { term.clone() + term } else { term };
    }
    total.even_part_in_square().ok_or_else(|| {
        Error::Corruption(format!("C_{h}(N={n}, s={s}) has odd powers of r"))
    })
}

/// `C_h(N, r)` in floating point, with `a` from the ₁F₁ representation.
pub fn structure_c_f64(n: u32, s: u32, h: u32, r: f64) -> Result<f64> {
    let mut total = 0.0;
    for h1 in 0..=h / 2 {
        let h2 = h - h1;
        if h2 > s {
            continue;
        }
        let term = structure_a(s as f64, h1, h2, r)? * structure_b_in(n, s, h1, h2, &r)?;
        total += if h1 < h2 { 2.0 * term } else { term };
    }
    Ok(total)
}

/// `C_h(N, r)` at a rational or float radius.
pub fn structure_c(n: u32, s: u32, h: u32, r: &ExactNumber) -> Result<ExactNumber> {
    match r {
        ExactNumber::Exact(q) => {
            let c = structure_c_poly(n, s, h)?;
            Ok(ExactNumber::Exact(c.eval(&(q * q))))
        }
        ExactNumber::Float(x) => Ok(ExactNumber::Float(structure_c_f64(n, s, h, *x)?)),
    }
}

/// All coefficients `C_0 … C_{2s}` of the structure expansion.
#[derive(Clone, Debug)]
pub struct StructureCoefficients {
    pub n: u32,
    pub s: u32,
    /// `C_h` as polynomials in `u = r²`, `h = 0..=2s`.
    pub c: Vec<UPolynomial>,
}

impl StructureCoefficients {
    pub fn new(n: u32, s: u32) -> Result<Self> {
        let c = (0..=2 * s).map(|h| structure_c_poly(n, s, h)).collect::<Result<Vec<_>>>()?;
        Ok(StructureCoefficients { n, s, c })
    }

    /// `Σ_h C_h(u)/(1 − u)^{s²+2s−h}` at rational `u ≠ 1`.
    pub fn moment_at_u(&self, u: &BigRational) -> Result<BigRational> {
        let one_minus = BigRational::one() - u;
        if one_minus.is_zero() {
            return Err(invalid!("the structure expansion requires |z| != 1"));
        }
        let top = self.s * self.s + 2 * self.s;
        let mut total = BigRational::zero();
        for (h, c) in self.c.iter().enumerate() {
            let e = (top - h as u32) as i32;
            total += c.eval(u) / num_traits::pow(one_minus.clone(), e as usize);
        }
        Ok(total)
    }
}

/// Structure-expansion moment at `u = r²` (rational, `u ≠ 1`).
pub fn moment_structure_at_u(n: u32, s: u32, u: &BigRational) -> Result<BigRational> {
    if u.is_negative() {
        return Err(invalid!("u = |z|^2 must be non-negative"));
    }
    StructureCoefficients::new(n, s)?.moment_at_u(u)
}

/// Structure-expansion moment at radius `r ≠ 1`.
pub fn moment_structure(n: u32, s: u32, r: &ExactNumber) -> Result<ExactNumber> {
    if n < 1 || s < 1 {
        return Err(invalid!("moment_structure requires N, s >= 1"));
    }
    if r.is_negative() {
        return Err(invalid!("r must be non-negative"));
    }
    match r {
        ExactNumber::Exact(q) => Ok(ExactNumber::Exact(moment_structure_at_u(n, s, &(q * q))?)),
        ExactNumber::Float(x) => {
            let u = x * x;
            if libm::fabs(1.0 - u) < 1e-12 {
                return Err(invalid!("the structure expansion requires |z| != 1"));
            }
            let top = (s * s + 2 * s) as i32;
            let mut total = 0.0;
            for h in 0..=2 * s {
                total += structure_c_f64(n, s, h, *x)? / libm::pow(1.0 - u, (top - h as i32) as f64);
            }
            Ok(ExactNumber::Float(total))
        }
    }
}

fn subsets(pool: &[u64], k: usize) -> Vec<Vec<u64>> {
    fn rec(pool: &[u64], k: usize, start: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            rec(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(pool, k, 0, &mut Vec::new(), &mut out);
    out
}

fn vandermonde(v: &[u64]) -> BigInt {
    let mut acc = BigInt::one();
    for b in 0..v.len() {
        for a in 0..b {
            acc *= BigInt::from(v[b]) - BigInt::from(v[a]);
        }
    }
    acc
}

/// Appendix coefficient `d_{m,l,s}(0,0)` of the expansion
/// `G(−r, −r) = Σ_{m,l} d_{m,l,s} r^{2Nl − s² + s + 2m}`.
///
/// The final Vandermonde factor runs over the `l` complementary indices
/// `i'`, which is the only reading under which the expansion reproduces
/// the determinant.
///
/// The sign is that of the Laplace expansion along the first `s` rows,
/// `(−1)^{s(s+1)/2 + Σ(columns)} = (−1)^m (−1)^{s(s−1)/2}`; the factor
/// `(−1)^{s(s−1)/2}` makes the constant term `G(0, 0) = 1`.
pub fn appendix_d00(m: u32, l: u32, s: u32, n: u32) -> Result<BigRational> {
    if s > 3 {
        return Err(Error::CapabilityLimit(format!("appendix coefficients implemented for s <= 3, got {s}")));
    }
    if l > s || s == 0 {
        return Err(invalid!("appendix_d00 requires 0 <= l <= s and s >= 1"));
    }
    let (s64, l64) = (s as u64, l as u64);
    let low: Vec<u64> = (0..s64).collect();
    let high: Vec<u64> = (s64..2 * s64).collect();
    let nn = BigInt::from(n);
    let mut total = BigInt::zero();
    for is in subsets(&low, (s64 - l64) as usize) {
        let ip: Vec<u64> = low.iter().copied().filter(|x| !is.contains(x)).collect();
        for js in subsets(&high, l64 as usize) {
            let sum: u64 = is.iter().sum::<u64>() + js.iter().sum::<u64>();
            if sum != m as u64 {
                continue;
            }
            let jp: Vec<u64> = high.iter().copied().filter(|x| !js.contains(x)).collect();
            let mut term = vandermonde(&is) * vandermonde(&js) * vandermonde(&jp) * vandermonde(&ip);
            for &ia in &is {
                for &jb in &js {
                    term *= &nn + BigInt::from(jb) - BigInt::from(ia);
                }
            }
            for &ja in &jp {
                for &ib in &ip {
                    term *= &nn + BigInt::from(ja) - BigInt::from(ib);
                }
            }
            total += term;
        }
    }
    let norm = (1..s as u64).fold(BigUint::one(), |acc, i| {
        let f = factorial(i);
        acc * &f * &f
    });
    let flips = m + s * (s - 1) / 2;
    let sign = if flips % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    Ok(ratio(sign * total, BigInt::from(norm)))
}

/// `Σ_{m,l} d_{m,l,s}(0,0) r^{2Nl − s² + s + 2m}` as a polynomial in `r`.
///
/// `m` is summed up to `(3s² − s)/2 + s`; coefficients past the documented
/// support `[s(s−1)/2, (3s−1)s/2]` are checked to vanish.
pub fn appendix_b00_poly(n: u32, s: u32) -> Result<UPolynomial> {
    let m_cap = (3 * s * s - s) / 2 + s;
    let lo = s * (s - 1) / 2;
    let hi = (3 * s - 1) * s / 2;
    let mut coeffs: Vec<BigRational> = Vec::new();
    for l in 0..=s {
        for m in 0..=m_cap {
            let d = appendix_d00(m, l, s, n)?;
            if d.is_zero() {
                continue;
            }
            if m < lo || m > hi {
                return Err(Error::Corruption(format!("d_{{{m},{l},{s}}}(0,0) outside its support")));
            }
            let e = (2 * n * l + 2 * m + s) as i64 - (s * s) as i64;
            if e < 0 {
                return Err(Error::Corruption(format!("negative power r^{e} in appendix expansion")));
            }
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigRational::zero());
            }
            coeffs[e] += d;
        }
    }
    Ok(UPolynomial::new(coeffs))
}

/// `E|Λ'_N(z)|^{2s}` by route, used by reports to label each number.
pub fn moment_by_mode(n: u32, s: u32, u: &ExactNumber, mode: Mode) -> Result<ExactNumber> {
    let u = match (u, mode) {
        (ExactNumber::Exact(q), Mode::Float) => ExactNumber::Float(crate::scalar::ratio_to_f64(q)),
        (ExactNumber::Float(_), Mode::Exact) => return Err(invalid!("exact mode needs a rational u")),
        _ => u.clone(),
    };
    moment_exact(n, s, &u)
}
