//! Large-N closed forms in the global, mesoscopic and microscopic regimes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{invalid, Error, Result};
use crate::exact::weighted_partitions;
use crate::linalg::{det_bareiss, det_expand};
use crate::scalar::{Ring, Scalar};
use crate::specfun::{hyp1f1, laguerre, ExpMomentTable};

/// Where on the scale of distances to the unit circle a moment is taken.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regime {
    /// `|z| = r` fixed, `0 ≤ r < 1`.
    Global { r: f64 },
    /// `|z|² = 1 − N^{−α}`, `0 < α < 1`.
    Mesoscopic { alpha: f64 },
    /// `|z|² = 1 − c/N`, any real `c`.
    Microscopic { c: f64 },
}

/// A regime with an optional matrix size. Without `n`, regime formulas
/// return their N-free coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimePoint {
    pub regime: Regime,
    pub n: Option<f64>,
}

impl RegimePoint {
    pub fn new(regime: Regime, n: Option<f64>) -> Result<Self> {
        match regime {
            Regime::Global { r } if !(0.0..1.0).contains(&r) => {
                return Err(invalid!("global regime requires 0 <= r < 1, got {r}"))
            }
            Regime::Mesoscopic { alpha } if !(alpha > 0.0 && alpha < 1.0) => {
                return Err(invalid!("mesoscopic regime requires 0 < alpha < 1, got {alpha}"))
            }
            Regime::Microscopic { c } if !c.is_finite() => return Err(invalid!("c must be finite")),
            _ => {}
        }
        if let Some(n) = n {
            if !(n >= 1.0) {
                return Err(invalid!("N must be >= 1"));
            }
        }
        Ok(RegimePoint { regime, n })
    }

    /// `|z|²` implied by the regime (requires `n` outside the global regime).
    pub fn u(&self) -> Option<f64> {
        match self.regime {
            Regime::Global { r } => Some(r * r),
            Regime::Mesoscopic { alpha } => self.n.map(|n| 1.0 - libm::pow(n, -alpha)),
            Regime::Microscopic { c } => self.n.map(|n| 1.0 - c / n),
        }
    }
}

fn check_global(s: f64, r: f64) -> Result<()> {
    if !(s > -1.0) {
        return Err(invalid!("s must exceed -1, got {s}"));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(invalid!("global regime requires 0 <= r < 1, got {r}"));
    }
    Ok(())
}

/// `lim E|Λ'_N(z)|^{2s} = e^{−s²r²} Γ(s+1) ₁F₁(s+1, 1; s²r²) / (1−r²)^{s²+2s}`.
pub fn global_moment(s: f64, r: f64) -> Result<f64> {
    check_global(s, r)?;
    let x = s * s * r * r;
    let num = libm::exp(-x) * libm::tgamma(s + 1.0) * hyp1f1(s + 1.0, 1.0, x)?;
    Ok(num / libm::pow(1.0 - r * r, s * s + 2.0 * s))
}

/// Integer-`s` form `s! L_s(−s²r²) / (1−r²)^{s²+2s}`.
pub fn global_moment_laguerre(s: u32, r: f64) -> Result<f64> {
    check_global(s as f64, r)?;
    let sf = s as f64;
    let fact: f64 = (1..=s).map(|k| k as f64).product();
    Ok(fact * laguerre(s, -sf * sf * r * r) / libm::pow(1.0 - r * r, sf * sf + 2.0 * sf))
}

/// `ρ = |z₁|²(1−|z₂|²)²/|1 − z₁ z̄₂|²`.
pub fn joint_rho(z1: Complex64, z2: Complex64) -> f64 {
    let a = z1.norm_sqr();
    let b = 1.0 - z2.norm_sqr();
    a * b * b / (Complex64::new(1.0, 0.0) - z1 * z2.conj()).norm_sqr()
}

/// `lim E[|Λ'(z₂)/Λ(z₂)|^{2h} |Λ(z₁)|^{2s}]`.
pub fn joint_moment(s: f64, h: f64, z1: Complex64, z2: Complex64) -> Result<f64> {
    if !(h > -1.0) {
        return Err(invalid!("h must exceed -1, got {h}"));
    }
    if !(z1.norm() < 1.0) || !(z2.norm() < 1.0) {
        return Err(invalid!("joint moment requires |z1|, |z2| < 1"));
    }
    let x = s * s * joint_rho(z1, z2);
    let num = libm::exp(-x) * libm::tgamma(h + 1.0) * hyp1f1(h + 1.0, 1.0, x)?;
    let d2 = libm::pow(1.0 - z2.norm_sqr(), 2.0 * h);
    let d1 = libm::pow(1.0 - z1.norm_sqr(), s * s);
    Ok(num / (d2 * d1))
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(invalid!("requires 0 <= r < 1, got {r}"));
    }
    Ok(())
}

/// Limiting mean number of zeros of `Λ'_N` in `|z| < r`: `2r²/(1−r²)`.
pub fn expected_zero_count(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(2.0 * r * r / (1.0 - r * r))
}

/// Limiting `∫₀^r n(t)/t dt = −log(1 − r²)` (Jensen's formula).
pub fn expected_log_integral(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(-libm::log1p(-r * r))
}

/// `s! L_s(−s²)`, the mesoscopic coefficient.
pub fn meso_coefficient(s: u32) -> f64 {
    let sf = s as f64;
    let fact: f64 = (1..=s).map(|k| k as f64).product();
    fact * laguerre(s, -sf * sf)
}

/// `N^{α(s²+2s)} s! L_s(−s²)`.
pub fn meso_moment(s: u32, alpha: f64, n: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid!("mesoscopic regime requires 0 < alpha < 1, got {alpha}"));
    }
    let sf = s as f64;
    Ok(libm::pow(n, alpha * (sf * sf + 2.0 * sf)) * meso_coefficient(s))
}

fn micro_b_with<T: Scalar>(s: u32, moment: impl Fn(usize) -> T) -> Result<T> {
    if s < 1 {
        return Err(invalid!("s must be positive"));
    }
    let parts = weighted_partitions(s, s as usize)?;
    let mut total = T::zero();
    for lam in &parts {
        for mu in &parts {
            let m: Vec<Vec<T>> = lam
                .shifted
                .iter()
                .map(|&p| mu.shifted.iter().map(|&q| moment((p + q) as usize)).collect())
                .collect();
            total = total + T::from_ratio(&(&lam.weight * &mu.weight)) * det_bareiss(m)?;
        }
    }
    Ok(total)
}

/// Microscopic coefficient
/// `Σ_{λ,μ ⊢ s} f_λ f_μ/(λ! μ!) det{∫₀¹ x^{λ_i+μ_j+2s−i−j} e^{−cx} dx}`.
pub fn micro_b(s: u32, c: f64) -> Result<f64> {
    let table = ExpMomentTable::new(c, 4 * s);
    micro_b_with(s, |k| table.get(k))
}

/// `micro_b(s, 0)` as an exact rational (entries `1/(k+1)`).
pub fn micro_b_exact_c0(s: u32) -> Result<BigRational> {
    micro_b_with(s, |k| BigRational::new(1.into(), (k as i64 + 1).into()))
}

/// Bivariate power series in `(v, w)`, truncated to degree `≤ d` in each
/// variable.
#[derive(Clone, Debug)]
struct Bivariate {
    d: usize,
    c: Vec<f64>,
}

impl Bivariate {
    fn zeros(d: usize) -> Self {
        Bivariate { d, c: vec![0.0; (d + 1) * (d + 1)] }
    }
    fn at(&self, a: usize, b: usize) -> f64 {
        self.c[a * (self.d + 1) + b]
    }
    fn set(&mut self, a: usize, b: usize, x: f64) {
        self.c[a * (self.d + 1) + b] = x;
    }
}

// The truncation degree is a property of each value; the ring constants
// carry degree 0 and adopt the other operand's degree.
fn align(a: &Bivariate, b: &Bivariate) -> usize {
    a.d.max(b.d)
}

fn widen(x: &Bivariate, d: usize) -> Bivariate {
    if x.d == d {
        return x.clone();
    }
    let mut out = Bivariate::zeros(d);
    for a in 0..=x.d.min(d) {
        for b in 0..=x.d.min(d) {
            out.set(a, b, x.at(a, b));
        }
    }
    out
}

impl Add for Bivariate {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = align(&self, &o);
        let (mut x, y) = (widen(&self, d), widen(&o, d));
        x.c.iter_mut().zip(y.c).for_each(|(p, q)| *p += q);
        x
    }
}

impl Neg for Bivariate {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.c.iter_mut().for_each(|p| *p = -*p);
        self
    }
}

impl Sub for Bivariate {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for Bivariate {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = align(&self, &o);
        let (x, y) = (widen(&self, d), widen(&o, d));
        let mut out = Bivariate::zeros(d);
        for a1 in 0..=d {
            for b1 in 0..=d {
                let p = x.at(a1, b1);
                if p == 0.0 {
                    continue;
                }
                for a2 in 0..=d - a1 {
                    for b2 in 0..=d - b1 {
                        let i = (a1 + a2) * (d + 1) + b1 + b2;
                        out.c[i] += p * y.at(a2, b2);
                    }
                }
            }
        }
        out
    }
}

impl Ring for Bivariate {
    fn zero() -> Self {
        Bivariate::zeros(0)
    }
    fn one() -> Self {
        let mut x = Bivariate::zeros(0);
        x.set(0, 0, 1.0);
        x
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }
}

/// Microscopic coefficient in Bessel-kernel form:
/// `∂^{2s}/∂v^s∂w^s det{∂^{i+j−2} F_c/∂v^{i−1}∂w^{j−1}}` at `v = w = 0`, with
/// `F_c(v,w) = ∫₀¹ J₀(2√(vx)) J₀(2√(wx)) e^{−cx} dx`.
///
/// Each entry is expanded as a truncated Taylor series using
/// `[v^a w^b] F_c = (−1)^{a+b} m_{a+b}(c)/((a!)²(b!)²)`.
pub fn micro_b_bessel(s: u32, c: f64) -> Result<f64> {
    if s < 1 {
        return Err(invalid!("s must be positive"));
    }
    let d = s as usize;
    let top = 4 * d; // highest moment index needed: (a + i) + (b + j)
    let table = ExpMomentTable::new(c, top as u32);
    let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    let coeff = |a: usize, b: usize| {
        let sign = if (a + b) % 2 == 1 { -1.0 } else { 1.0 };
        sign * table.get(a + b) / (fact(a) * fact(a) * fact(b) * fact(b))
    };
    let matrix: Vec<Vec<Bivariate>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut e = Bivariate::zeros(d);
                    for a in 0..=d {
                        for b in 0..=d {
                            // ∂_v^i ∂_w^j of v^{a+i} w^{b+j}
                            let f = fact(a + i) / fact(a) * fact(b + j) / fact(b);
                            e.set(a, b, coeff(a + i, b + j) * f);
                        }
                    }
                    e
                })
                .collect()
        })
        .collect();
    let det = det_expand(&matrix)?;
    let sf = fact(d);
    Ok(widen(&det, d).at(d, d) * sf * sf)
}

/// `lim E|Λ_N(z)|^{2s}` in each regime: `(1−r²)^{−s²}` (global),
/// `N^{s²α}` (mesoscopic), and the Andréief determinant
/// `N^{s²} Π_j 1/(Γ(j)Γ(j+1)) · s! · det{m_{i+j−2}(c)}` (microscopic,
/// integer `s`).
pub fn cue_limit(s: f64, point: &RegimePoint) -> Result<f64> {
    match point.regime {
        Regime::Global { r } => {
            if !(0.0..1.0).contains(&r) {
                return Err(invalid!("global regime requires 0 <= r < 1"));
            }
            Ok(libm::pow(1.0 - r * r, -s * s))
        }
        Regime::Mesoscopic { alpha } => Ok(match point.n {
            Some(n) => libm::pow(n, s * s * alpha),
            None => 1.0,
        }),
        Regime::Microscopic { c } => {
            if s < 1.0 || s != libm::floor(s) {
                return Err(Error::CapabilityLimit(format!(
                    "microscopic CUE limit implemented for positive integer s, got {s}"
                )));
            }
            let k = s.to_u32().unwrap_or(0);
            let table = ExpMomentTable::new(c, 2 * k);
            let m: Vec<Vec<f64>> =
                (0..k as usize).map(|i| (0..k as usize).map(|j| table.get(i + j)).collect()).collect();
            let det = det_bareiss(m)?;
            let mut norm = 1.0;
            for j in 1..=k {
                norm /= libm::tgamma(j as f64) * libm::tgamma(j as f64 + 1.0);
            }
            let sfact = libm::tgamma(s + 1.0);
            let coeff = norm * sfact * det;
            Ok(match point.n {
                Some(n) => libm::pow(n, s * s) * coeff,
                None => coeff,
            })
        }
    }
}

/// `lim E|Λ'_N(z)|^{2s}` in each regime (integer `s` outside the global
/// regime): the full N-dependent value when `N` is given, else the
/// coefficient.
pub fn derivative_limit(s: f64, point: &RegimePoint) -> Result<f64> {
    match point.regime {
        Regime::Global { r } => global_moment(s, r),
        Regime::Mesoscopic { alpha } => {
            let k = integer_s(s)?;
            let coeff = meso_coefficient(k);
            Ok(match point.n {
                Some(n) => libm::pow(n, alpha * (s * s + 2.0 * s)) * coeff,
                None => coeff,
            })
        }
        Regime::Microscopic { c } => {
            let k = integer_s(s)?;
            let coeff = micro_b(k, c)?;
            Ok(match point.n {
                Some(n) => libm::pow(n, s * s + 2.0 * s) * coeff,
                None => coeff,
            })
        }
    }
}

fn integer_s(s: f64) -> Result<u32> {
    if s >= 1.0 && s == libm::floor(s) && s <= 64.0 {
        Ok(s as u32)
    } else {
        Err(Error::CapabilityLimit(format!("this regime is implemented for positive integer s, got {s}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::specfun::exp_moment;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        libm::fabs(a - b) <= tol * libm::fabs(b).max(1e-300)
    }

    #[test]
    fn global_examples() {
        assert!(close(global_moment(0.0, 0.4).unwrap(), 1.0, 1e-15));
        for &r in &[0.0, 0.3, 0.7] {
            let want = (1.0 + r * r) / libm::pow(1.0 - r * r, 3.0);
            assert!(close(global_moment(1.0, r).unwrap(), want, 1e-13));
        }
        let r: f64 = 0.5;
        let mut sum = 0.0;
        for k in 0..=2u32 {
            let binom = [1.0, 2.0, 1.0][k as usize];
            let fact = [2.0, 1.0, 1.0][k as usize];
            sum += binom * binom * fact * libm::pow(2.0 * r, 2.0 * k as f64);
        }
        assert!(close(global_moment(2.0, r).unwrap(), sum / libm::pow(1.0 - r * r, 8.0), 1e-13));
        assert!(global_moment(1.0, 1.0).is_err());
        assert!(global_moment(-1.0, 0.5).is_err());
    }

    #[test]
    fn joint_reduces() {
        let z = Complex64::new(0.3, 0.4);
        for s in 1..=3 {
            let s = s as f64;
            assert!(close(joint_moment(s, s, z, z).unwrap(), global_moment(s, z.norm()).unwrap(), 1e-13));
        }
        let z1 = Complex64::new(0.2, -0.1);
        let z2 = Complex64::new(0.0, 0.6);
        assert!(close(joint_moment(0.0, 1.5, z1, z2).unwrap(), libm::tgamma(2.5) / libm::pow(0.64, 3.0), 1e-13));
        assert!(close(joint_moment(1.7, 0.0, z1, z2).unwrap(), libm::pow(1.0 - z1.norm_sqr(), -1.7 * 1.7), 1e-13));
        assert!(joint_moment(1.0, 1.0, Complex64::new(1.0, 0.0), z2).is_err());
    }

    #[test]
    fn zero_density() {
        assert_eq!(expected_zero_count(0.0).unwrap(), 0.0);
        assert!(close(expected_zero_count(libm::sqrt(0.5)).unwrap(), 2.0, 1e-14));
        assert!(expected_zero_count(1.0).is_err());
        // r · d/dr[−log(1−r²)] = 2r²/(1−r²)
        let r = 0.6;
        let h = 1e-6;
        let d = (expected_log_integral(r + h).unwrap() - expected_log_integral(r - h).unwrap()) / (2.0 * h);
        assert!(close(r * d, expected_zero_count(r).unwrap(), 1e-8));
    }

    #[test]
    fn meso_values() {
        assert!(close(meso_coefficient(1), 2.0, 1e-15));
        assert!(close(meso_coefficient(2), 34.0, 1e-15));
        assert!(close(meso_moment(1, 0.5, 100.0).unwrap(), 2.0 * 1000.0, 1e-13));
        assert!(meso_moment(1, 1.0, 100.0).is_err());
    }

    #[test]
    fn micro_examples() {
        assert_eq!(micro_b_exact_c0(1).unwrap(), rat(1, 3));
        assert_eq!(micro_b_exact_c0(2).unwrap(), rat(61, 10080));
        assert_eq!(micro_b_exact_c0(3).unwrap(), rat(277, 139_708_800));
        assert_eq!(micro_b(1, 0.0).unwrap(), 1.0 / 3.0);
        for &c in &[-1.0, 0.7, 3.0] {
            assert!(close(micro_b(1, c).unwrap(), exp_moment(2, c), 1e-14));
            assert!(close(micro_b_bessel(1, c).unwrap(), exp_moment(2, c), 1e-14));
        }
        assert!(close(micro_b_bessel(2, 0.0).unwrap(), micro_b(2, 0.0).unwrap(), 1e-10));
    }

    #[test]
    fn cue_limit_values() {
        let g = RegimePoint::new(Regime::Global { r: libm::sqrt(0.5) }, None).unwrap();
        assert!(close(cue_limit(2.0, &g).unwrap(), 16.0, 1e-12));
        let micro = RegimePoint::new(Regime::Microscopic { c: 0.0 }, None).unwrap();
        assert!(close(cue_limit(1.0, &micro).unwrap(), 1.0, 1e-14));
        for s in 1..=4u32 {
            let want: f64 = (1..=s).map(|j| libm::tgamma(j as f64) / libm::tgamma((s + j) as f64)).product();
            assert!(close(cue_limit(s as f64, &micro).unwrap(), want, 1e-9), "s = {s}");
        }
        assert!(cue_limit(1.5, &micro).is_err());
        assert!(RegimePoint::new(Regime::Global { r: 1.2 }, None).is_err());
        assert!(RegimePoint::new(Regime::Mesoscopic { alpha: 0.0 }, None).is_err());
    }
}
