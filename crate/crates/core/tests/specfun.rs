use cuemom_core::specfun::{
    exp_moment, exp_moment_recurrence, generalized_laguerre, generalized_laguerre_exact, hyp1f1, laguerre,
    laguerre_exact,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

#[test]
fn kummer_laguerre_identity_on_grid() {
    // e^{−x} Γ(s+1) ₁F₁(s+1, 1; x) = s! L_s(−x)
    for s in 1..=6u32 {
        let fact: f64 = (1..=s).map(f64::from).product();
        for x in [0.1, 1.0, 4.0, 9.0, 25.0] {
            let lhs = (-x as f64).exp() * fact * hyp1f1(s as f64 + 1.0, 1.0, x).unwrap();
            let rhs = fact * laguerre(s, -x);
            assert!(((lhs - rhs) / rhs).abs() < 1e-11, "s={s} x={x}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn exp_moment_routes_agree_across_threshold() {
    for c in [0.5, 1.5] {
        let rec = exp_moment_recurrence(40, c);
        for (k, r) in rec.iter().enumerate() {
            let s = exp_moment(k as u32, c);
            assert!(((s - r) / s).abs() < 1e-11, "c={c} k={k}");
        }
    }
}

#[test]
fn exp_moment_derivative_in_c() {
    let h = 1e-5;
    for c in [0.5, 2.0] {
        for k in 0..10 {
            let fd = (exp_moment(k, c + h) - exp_moment(k, c - h)) / (2.0 * h);
            assert!((fd + exp_moment(k + 1, c)).abs() < 1e-6, "c={c} k={k}");
        }
    }
}

proptest! {
    #[test]
    fn laguerre_alpha_zero_is_plain_laguerre(n in 0u32..10, num in -50i64..50, den in 1i64..20) {
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        let zero = BigRational::from_integer(BigInt::from(0));
        prop_assert_eq!(generalized_laguerre_exact(n, &zero, &x), laguerre_exact(n, &x));
    }

    #[test]
    fn float_laguerre_alpha_zero(n in 0u32..10, x in -20.0f64..20.0) {
        let a = generalized_laguerre(n, 0.0, x);
        let b = laguerre(n, x);
        prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
    }

    #[test]
    fn exp_moment_routes_agree(k in 0u32..40, c in -3.0f64..6.0) {
        let s = exp_moment(k, c);
        let r = exp_moment_recurrence(k, c)[k as usize];
        prop_assert!(((s - r) / s).abs() < 1e-11);
    }

    #[test]
    fn exp_moment_is_decreasing_in_c(k in 0u32..20, c in -3.0f64..5.0, dc in 0.01f64..2.0) {
        prop_assert!(exp_moment(k, c + dc) < exp_moment(k, c));
    }
}
