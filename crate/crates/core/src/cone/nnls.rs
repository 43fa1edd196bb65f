//! Lawson–Hanson non-negative least squares, warm-startable.

use nalgebra::{DMatrix, DVector};

fn solve_on(a: &DMatrix<f64>, b: &DVector<f64>, set: &[usize]) -> DVector<f64> {
    let sub = a.select_columns(set);
    let svd = sub.svd(true, true);
    let smax = svd.singular_values.max();
    svd.solve(b, smax * 1e-13).expect("u and v requested")
}

/// `argmin_{x ≥ 0} ‖A x − b‖` starting from the feasible point `x0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, x0: Option<&DVector<f64>>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = match x0 {
        Some(x0) if x0.len() == n => x0.map(|v| v.max(0.0)),
        _ => DVector::zeros(n),
    };
    let mut passive: Vec<bool> = x.iter().map(|v| *v > 0.0).collect();
    let scale = a.norm() * b.norm();
    let tol = 1e-14 * scale.max(f64::MIN_POSITIVE);
    let mut first = passive.iter().any(|p| *p);
    let max_outer = 3 * n + 10;

    for _ in 0..max_outer {
        if !first {
            let w = a.transpose() * (b - a * &x);
            let cand = (0..n).filter(|&j| !passive[j]).max_by(|&i, &j| w[i].total_cmp(&w[j]));
            match cand {
                Some(j) if w[j] > tol => passive[j] = true,
                _ => break,
            }
        }
        first = false;
        // Inner loop: keep the passive-set solution feasible.
        for _ in 0..=n {
            let set: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            if set.is_empty() {
                break;
            }
            let s = solve_on(a, b, &set);
            if s.iter().all(|v| *v > 0.0) {
                for (k, &j) in set.iter().enumerate() {
                    x[j] = s[k];
                }
                break;
            }
            let mut alpha = 1.0f64;
            for (k, &j) in set.iter().enumerate() {
                if s[k] <= 0.0 {
                    let d = x[j] - s[k];
                    if d > 0.0 {
                        alpha = alpha.min(x[j] / d);
                    }
                }
            }
            for (k, &j) in set.iter().enumerate() {
                x[j] += alpha * (s[k] - x[j]);
            }
            let xmax = x.amax();
            for &j in &set {
                if x[j] <= 1e-14 * xmax {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
    }
    x.map(|v| v.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_nonnegative_solution() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let x_true = DVector::from_vec(vec![2.0, 0.5]);
        let x = nnls(&a, &(&a * &x_true), None);
        assert!((x - x_true).norm() < 1e-12);
    }

    #[test]
    fn clamps_negative_directions() {
        let a = DMatrix::identity(2, 2);
        let b = DVector::from_vec(vec![1.0, -3.0]);
        let x = nnls(&a, &b, None);
        assert!((x - DVector::from_vec(vec![1.0, 0.0])).norm() < 1e-15);
        let warm = nnls(&a, &b, Some(&DVector::from_vec(vec![0.3, 0.4])));
        assert!((warm - DVector::from_vec(vec![1.0, 0.0])).norm() < 1e-15);
    }

    #[test]
    fn optimality_conditions_hold() {
        let a = DMatrix::from_fn(6, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let b = DVector::from_fn(6, |i, _| (i as f64).sin());
        let x = nnls(&a, &b, None);
        let w = a.transpose() * (&b - &a * &x);
        for j in 0..4 {
            assert!(x[j] >= 0.0);
            assert!(w[j] <= 1e-10);
            if x[j] > 0.0 {
                assert!(w[j].abs() <= 1e-10);
            }
        }
    }
}
