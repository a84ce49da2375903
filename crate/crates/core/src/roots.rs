//! Simultaneous polynomial root finding (Aberth–Ehrlich iteration) with a
//! componentwise backward-error certificate.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Largest accepted componentwise backward error of a computed root.
pub const BACKWARD_ERROR_TOL: f64 = 1e-10;

const MAX_ITERATIONS: usize = 500;

/// Roots of a polynomial together with the worst componentwise backward
/// error `|p(z)| / Σ|a_k||z|^k` over all returned roots.
#[derive(Clone, Debug)]
pub struct Roots {
    pub roots: Vec<Complex64>,
    pub backward_error: f64,
}

/// `(p(z), p'(z), Σ|a_k||z|^k)` by Horner's rule; `a` is in ascending order.
pub fn horner(a: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut dp, mut scale) = (zero, zero, 0.0);
    let rz = z.norm();
    for c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        scale = scale * rz + c.norm();
    }
    (p, dp, scale)
}

/// Newton correction `p(z)/p'(z)` and the componentwise backward error of `z`.
/// Outside the unit disc the reversed polynomial is used, `p(z) = z^n q(1/z)`,
/// so that neither quantity overflows at large `|z|`.
fn newton_step(a: &[Complex64], z: Complex64) -> (Complex64, f64) {
    if z.norm() <= 1.0 {
        let (p, dp, scale) = horner(a, z);
        return (p / dp, if scale == 0.0 { 0.0 } else { p.norm() / scale });
    }
    let n = (a.len() - 1) as f64;
    let w = z.inv();
    let zero = Complex64::new(0.0, 0.0);
    let (mut q, mut dq, mut scale) = (zero, zero, 0.0);
    let rw = w.norm();
    for c in a.iter() {
        dq = dq * w + q;
        q = q * w + c;
        scale = scale * rw + c.norm();
    }
    // p'(z)/p(z) = (n − w q'(w)/q(w)) / z
    let ratio = z / (Complex64::new(n, 0.0) - w * dq / q);
    (ratio, if scale == 0.0 { 0.0 } else { q.norm() / scale })
}

/// Componentwise backward error of `z` as a root of `a`.
pub fn backward_error(a: &[Complex64], z: Complex64) -> f64 {
    newton_step(a, z).1
}

/// Starting points from the Newton polygon: each edge of the upper convex
/// hull of `(k, ln|a_k|)` from `i` to `j` contributes `j − i` points on the
/// circle of radius `(|a_i|/|a_j|)^{1/(j−i)}`, which tracks root moduli even
/// when coefficients span many orders of magnitude.
fn initial_guesses(a: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> =
        a.iter().enumerate().filter(|(_, c)| c.norm() > 0.0).map(|(k, c)| (k, libm::log(c.norm()))).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (o, m) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (m.0 - o.0) as f64 * (p.1 - o.1) - (m.1 - o.1) * (p.0 - o.0) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let n = a.len() - 1;
    let mut z = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let m = j - i;
        let radius = libm::exp((li - lj) / m as f64);
        for k in 0..m {
            let angle = 2.0 * PI * k as f64 / m as f64 + 2.0 * PI * i as f64 / n as f64 + 0.4;
            z.push(Complex64::from_polar(radius, angle));
        }
    }
    z
}

/// All roots of `Σ a_k z^k` (ascending coefficients, nonzero leading term).
///
/// Exact zero roots (vanishing low-order coefficients) are split off first.
/// Fails with `NoConvergence` if any root misses [`BACKWARD_ERROR_TOL`].
pub fn find_roots(a: &[Complex64]) -> Result<Roots> {
    if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(invalid!("polynomial coefficients must be finite"));
    }
    let top = a.iter().rposition(|c| c.norm() != 0.0).ok_or_else(|| invalid!("zero polynomial"))?;
    let low = a.iter().position(|c| c.norm() != 0.0).unwrap_or(0);
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    let reduced = &a[low..=top];
    let n = reduced.len() - 1;
    if n == 0 {
        return Ok(Roots { roots, backward_error: 0.0 });
    }

    let mut z = initial_guesses(reduced);
    let radius = z.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let mut done = vec![false; n];
    let eps = f64::EPSILON * 4.0 * n as f64;

    for _ in 0..MAX_ITERATIONS {
        if done.iter().all(|&d| d) {
            break;
        }
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (ratio, berr) = newton_step(reduced, z[k]);
            if berr <= eps {
                done[k] = true;
                continue;
            }
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                // Derivative vanished: nudge the iterate and retry.
                z[k] += Complex64::new(radius.max(1.0) * 1e-3, 0.0);
                continue;
            }
            z[k] -= step;
            if step.norm() <= f64::EPSILON * z[k].norm() {
                done[k] = true;
            }
        }
    }

    let worst = z.iter().map(|&r| backward_error(reduced, r)).fold(0.0, f64::max);
    if !(worst <= BACKWARD_ERROR_TOL) {
        return Err(Error::NoConvergence(alloc::format!(
            "root finder backward error {worst:e} exceeds {BACKWARD_ERROR_TOL:e} at degree {n}"
        )));
    }
    roots.extend(z);
    Ok(Roots { roots, backward_error: worst })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(r: &[Complex64]) -> Vec<Complex64> {
        let mut a = vec![c(1.0, 0.0)];
        for &x in r {
            let mut next = vec![c(0.0, 0.0); a.len() + 1];
            for (k, &ak) in a.iter().enumerate() {
                next[k] -= ak * x;
                next[k + 1] += ak;
            }
            a = next;
        }
        a
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn recovers_known_roots() {
        let want = [c(0.5, 0.0), c(-1.0, 2.0), c(3.0, -0.25), c(0.0, 0.0), c(-2.0, -2.0)];
        let got = find_roots(&from_roots(&want)).unwrap();
        assert!(got.backward_error <= BACKWARD_ERROR_TOL);
        for (g, w) in sorted(got.roots).iter().zip(sorted(want.to_vec())) {
            assert!((g - w).norm() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn roots_of_unity() {
        let mut a = vec![c(0.0, 0.0); 13];
        a[0] = c(-1.0, 0.0);
        a[12] = c(1.0, 0.0);
        let got = find_roots(&a).unwrap();
        assert_eq!(got.roots.len(), 12);
        for z in got.roots {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(12) - 1.0).norm() < 1e-11);
        }
    }

    #[test]
    fn constant_and_linear() {
        assert!(find_roots(&[c(2.0, 0.0)]).unwrap().roots.is_empty());
        let r = find_roots(&[c(1.0, 0.0), c(-2.0, 0.0)]).unwrap().roots;
        assert!((r[0] - 0.5).norm() < 1e-15);
        assert!(find_roots(&[c(0.0, 0.0)]).is_err());
    }
}
