//! Gauss–Legendre rules and triangle quadrature.

use nalgebra::Vector3;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [0, 1].
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // Newton on P_n from the Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out
}

/// `∫_T f dA` over the triangle `abc` by the collapsed (Duffy) product rule.
pub(crate) fn triangle_integral(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>, rule: &[(f64, f64)], f: &dyn Fn(&Vector3<f64>) -> f64) -> f64 {
    let area2 = (b - a).cross(&(c - a)).norm();
    let mut acc = 0.0;
    for &(u, wu) in rule {
        for &(v, wv) in rule {
            let p = a + (b - a) * u + (c - b) * (u * v);
            acc += wu * wv * u * f(&p);
        }
    }
    acc * area2
}

/// `∫_{[a,b]} f ds`.
pub(crate) fn segment_integral(a: &Vector3<f64>, b: &Vector3<f64>, rule: &[(f64, f64)], f: &dyn Fn(&Vector3<f64>) -> f64) -> f64 {
    let len = (b - a).norm();
    rule.iter().map(|&(t, w)| w * f(&(a + (b - a) * t))).sum::<f64>() * len
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_polynomials() {
        for n in 1..10 {
            let rule = gauss_legendre(n);
            assert!((rule.iter().map(|r| r.1).sum::<f64>() - 1.0).abs() < 1e-14);
            for d in 0..2 * n {
                let q: f64 = rule.iter().map(|&(x, w)| w * x.powi(d as i32)).sum();
                assert!((q - 1.0 / (d as f64 + 1.0)).abs() < 1e-14, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn triangle_moments() {
        let rule = gauss_legendre(8);
        let a = Vector3::zeros();
        let b = Vector3::new(1.0, 0.0, 0.0);
        let c = Vector3::new(0.0, 1.0, 0.0);
        assert!((triangle_integral(&a, &b, &c, &rule, &|_| 1.0) - 0.5).abs() < 1e-14);
        // ∫ x²y dA over the unit right triangle = 1/60.
        assert!((triangle_integral(&a, &b, &c, &rule, &|p| p.x * p.x * p.y) - 1.0 / 60.0).abs() < 1e-14);
    }
}
