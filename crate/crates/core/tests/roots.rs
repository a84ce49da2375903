use cuemom_core::roots::{backward_error, find_roots, BACKWARD_ERROR_TOL};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

/// Ascending coefficients of `Π (z − r_k)`.
fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        c = next;
    }
    c
}

fn companion_eigenvalues(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let lead = a[n];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -a[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    m.eigenvalues().expect("complex schur converges").iter().copied().collect()
}

fn matched_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn root_strategy() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.1f64..2.0, 0.0f64..core::f64::consts::TAU), 1..12)
        .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recovers_random_roots(roots in root_strategy()) {
        let a = from_roots(&roots);
        let found = find_roots(&a).unwrap();
        prop_assert!(found.backward_error <= BACKWARD_ERROR_TOL);
        for z in &found.roots {
            prop_assert!(backward_error(&a, *z) <= BACKWARD_ERROR_TOL);
        }
        // Clustered roots are ill-conditioned, so compare in the backward sense
        // and only require forward accuracy that the conditioning allows.
        prop_assert!(matched_distance(&found.roots, &roots) < 1e-4);
    }

    #[test]
    fn agrees_with_companion_eigenvalues(coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..16)) {
        let mut a: Vec<Complex64> = coeffs.into_iter().map(|(x, y)| Complex64::new(x, y)).collect();
        let n = a.len() - 1;
        a[n] = Complex64::new(1.0, 0.0);
        let found = find_roots(&a).unwrap();
        let eig = companion_eigenvalues(&a);
        prop_assert_eq!(found.roots.len(), eig.len());
        for z in &eig {
            prop_assert!(backward_error(&a, *z) < 1e-10);
        }
        prop_assert!(matched_distance(&found.roots, &eig) < 1e-6);
    }
}
