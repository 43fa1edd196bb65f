use std::f64::consts::PI;

use curvcone::poly::*;
use curvcone::tensor::{is_simple, random_orthogonal};
use curvcone::{Error, SolverConfig};
use nalgebra::{DMatrix, DVector, Vector3};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

#[test]
fn pseudomanifold_examples() {
    let tet = builtin_complex("tetrahedron").unwrap().validate().unwrap();
    assert!(tet.valid && tet.non_manifold_faces.is_empty() && tet.boundary_faces.is_empty());

    let bow = builtin_complex("two-triangles-at-vertex").unwrap().validate().unwrap();
    assert!(!bow.valid);
    assert_eq!(bow.disconnected_links, vec![vec![0]]);

    let book = builtin_complex("three-triangles-on-edge").unwrap().validate().unwrap();
    assert!(book.valid);
    assert_eq!(book.non_manifold_faces, vec![vec![0, 1]]);
}

#[test]
fn degenerate_simplex_reports_id() {
    let c = PolyhedralComplex::embedded(
        2,
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]],
        vec![vec![0, 1, 3], vec![0, 1, 2]],
    )
    .unwrap();
    assert!(matches!(c.validate(), Err(Error::DegenerateSimplex { id: 1, .. })));
}

#[test]
fn angle_sums_of_regular_surfaces() {
    for r in builtin_complex("cube").unwrap().hyperedge_angles().unwrap() {
        assert!((r.total_angle - 1.5 * PI).abs() < 1e-12);
        assert!((r.deficit - PI / 2.0).abs() < 1e-12);
    }
    let tet = builtin_complex("tetrahedron").unwrap().hyperedge_angles().unwrap();
    assert_eq!(tet.len(), 4);
    for r in tet {
        assert!((r.deficit - PI).abs() < 1e-12);
    }
    let square = builtin_complex("flat-square").unwrap().hyperedge_angles().unwrap();
    let centre = square.iter().find(|r| r.hyperedge == vec![4]).unwrap();
    assert!(centre.interior && (centre.total_angle - 2.0 * PI).abs() < 1e-12);
    assert_eq!(square.iter().filter(|r| r.interior).count(), 1);
}

#[test]
fn three_dimensional_complex_angles() {
    // Boundary of the regular 4-simplex: three tetrahedra with dihedral
    // angle arccos(1/3) meet along each edge.
    let c = builtin_complex("simplex4-boundary").unwrap();
    assert!(c.validate().unwrap().valid);
    let reports = c.hyperedge_angles().unwrap();
    assert_eq!(reports.len(), 10);
    for r in &reports {
        assert!((r.total_angle - 3.0 * (1.0f64 / 3.0).acos()).abs() < 1e-12);
        assert!((r.measure - 2f64.sqrt()).abs() < 1e-12);
        let a = r.alpha.as_ref().unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-12 && is_simple(a, 1e-10));
    }
    assert!(c.curvature_bound_check(0.0).unwrap().holds);
}

#[test]
fn curvature_bound_examples() {
    assert!(builtin_complex("icosphere:2").unwrap().curvature_bound_check(0.0).unwrap().holds);
    let saddle = builtin_complex("saddle7").unwrap().curvature_bound_check(0.0).unwrap();
    assert!(!saddle.holds);
    let worst = saddle.worst.unwrap();
    assert_eq!(worst.hyperedge, vec![0]);
    assert!((worst.total_angle - 7.0 * PI / 3.0).abs() < 1e-12);

    let torus = flat_torus(4).unwrap();
    assert!(torus.validate().unwrap().valid);
    let check = torus.curvature_bound_check(0.0).unwrap();
    assert!(check.holds);
    assert!(torus.hyperedge_angles().unwrap().iter().all(|r| r.interior && r.deficit.abs() < 1e-12));
    assert!(torus.singular_curvature().unwrap().atoms.is_empty());
    assert!(torus.curvature_bound_check(1.0).is_err());
}

#[test]
fn singular_measures_of_regular_surfaces() {
    let cube = builtin_complex("cube").unwrap().singular_curvature().unwrap();
    assert_eq!(cube.atoms.len(), 8);
    assert!(cube.atoms.iter().all(|a| (a.mass - PI / 2.0).abs() < 1e-12));
    assert!((pair_measure(&cube, |_| 1.0) - 4.0 * PI).abs() < 1e-12);
    let tet = builtin_complex("tetrahedron").unwrap().singular_curvature().unwrap();
    assert_eq!(tet.atoms.len(), 4);
    assert!(tet.atoms.iter().all(|a| (a.mass - PI).abs() < 1e-12));
    let flat = builtin_complex("flat-square").unwrap().singular_curvature().unwrap();
    assert!(flat.atoms.is_empty());
}

#[test]
fn gauss_bonnet_on_random_hulls() {
    for k in 0..30 {
        let p = random_polytope(12 + 3 * k as usize, k, &cfg()).unwrap();
        let mu = p.to_complex().unwrap().singular_curvature().unwrap();
        assert!((mu.total_mass() - 4.0 * PI).abs() < 1e-9, "instance {k}");
        assert!(mu.atoms.iter().all(|a| a.mass >= 0.0));
        assert!((p.total_exterior_angle() - 4.0 * PI).abs() < 1e-9);
    }
}

#[test]
fn deficits_invariant_under_rigid_motion() {
    let c = random_polytope(20, 99, &cfg()).unwrap().to_complex().unwrap();
    let q = random_orthogonal(3, &mut cfg().rng(5));
    let moved = c.transformed(&q, &DVector::from_vec(vec![0.3, -2.0, 1.5])).unwrap();
    for (a, b) in c.hyperedge_angles().unwrap().iter().zip(moved.hyperedge_angles().unwrap()) {
        assert_eq!(a.hyperedge, b.hyperedge);
        assert!((a.total_angle - b.total_angle).abs() < 1e-10);
        assert!((a.measure - b.measure).abs() < 1e-10);
        // α moves with the complex: Λ²q α, up to sign.
        let (aa, ab) = (a.alpha.as_ref().unwrap().to_skew(), b.alpha.as_ref().unwrap().to_skew());
        let rotated: DMatrix<f64> = &q * aa * q.transpose();
        assert!((&rotated - &ab).norm().min((&rotated + &ab).norm()) < 1e-10);
    }
}

#[test]
fn icosphere_pairings_converge() {
    // Icosahedral symmetry leaves |x|² as the only invariant quadratic, so the
    // z² pairing is exact at every level; the bump pairing genuinely converges.
    let bump = |p: &[f64]| (2.0 * p[2] - 1.0).max(0.0).powi(2);
    let mut errs = Vec::new();
    for level in 1..=5 {
        let mu = builtin_complex(&format!("icosphere:{level}")).unwrap().singular_curvature().unwrap();
        assert!((mu.total_mass() - 4.0 * PI).abs() < 1e-9);
        assert!(pair_measure(&mu, |p| p[2]).abs() < 1e-9);
        assert!((pair_measure(&mu, |p| p[2] * p[2]) - 4.0 * PI / 3.0).abs() < 1e-9);
        errs.push((pair_measure(&mu, bump) - PI / 3.0).abs());
    }
    println!("bump errors {errs:?}");
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[4] < 1e-2 * PI / 3.0);
}

#[test]
fn cube_shell_matches_monte_carlo() {
    let cube = ConvexPolytope::cube();
    for r in [0.1, 0.5, 1.0] {
        let exact = cube.steiner_shell_volume(None, r).unwrap();
        assert!((exact - (6.0 * r + 3.0 * PI * r * r + 4.0 * PI / 3.0 * r.powi(3))).abs() < 1e-12);
        let (est, se) = cube.shell_volume_monte_carlo(None, r, 1_000_000, &cfg()).unwrap();
        assert!((est - exact).abs() < 3.0 * se, "r={r}: {est} ± {se} vs {exact}");
    }
}

#[test]
fn weighted_shell_matches_monte_carlo() {
    let cube = ConvexPolytope::cube();
    let w = |p: &Vector3<f64>| 1.0 + p.z * p.z + (3.0 * p.x).sin();
    let r = 0.5;
    let q = cube.steiner_shell_volume(Some(&w), r).unwrap();
    let (est, se) = cube.shell_volume_monte_carlo(Some(&w), r, 400_000, &cfg()).unwrap();
    assert!((est - q).abs() < 3.0 * se, "{est} ± {se} vs {q}");
}

#[test]
fn polynomial_fit_reproduces_exact() {
    for p in [ConvexPolytope::cube(), ConvexPolytope::tetrahedron(), random_polytope(30, 7, &cfg()).unwrap()] {
        let exact = p.steiner_exact();
        let fit = p.steiner_coefficients(None, &[0.25, 0.5, 0.75, 1.0]).unwrap();
        for r in [0.1, 0.3, 0.9, 1.7] {
            assert!((fit.eval(r) - p.steiner_shell_volume(None, r).unwrap()).abs() < 1e-9);
        }
        for (a, b) in fit.coefficients.iter().zip(exact.coefficients) {
            assert!((a - b).abs() < 1e-9);
        }
    }
    let cube = ConvexPolytope::cube();
    assert!(matches!(cube.steiner_coefficients(None, &[1.0, 1.0 + 1e-6, 1.0 + 2e-6, 1.0 + 3e-6]), Err(Error::IllConditioned(_))));
    assert!(matches!(cube.steiner_shell_volume(None, 0.0), Err(Error::NonPositiveRadius(_))));
}

#[test]
fn coefficients_are_homogeneous() {
    let p = random_polytope(25, 3, &cfg()).unwrap();
    let lambda = 2.5;
    let a = p.steiner_exact().coefficients;
    let b = p.scaled(lambda).unwrap().steiner_exact().coefficients;
    assert!((b[1] - lambda * lambda * a[1]).abs() < 1e-9 * b[1]);
    assert!((b[2] - lambda * a[2]).abs() < 1e-9 * b[2]);
    assert!((b[3] - a[3]).abs() < 1e-12);
}

#[test]
fn ball_shell_volume() {
    let p = ConvexPolytope::icosphere(5);
    for r in [0.2, 1.0] {
        let v = p.steiner_shell_volume(None, r).unwrap();
        let ball = 4.0 * PI / 3.0 * ((1.0 + r).powi(3) - 1.0);
        assert!((v - ball).abs() < 2e-3 * ball, "r={r}: {v} vs {ball}");
    }
}

#[test]
fn weighted_curvature_coefficient_limits() {
    let n = Vector3::new(0.0, 0.0, 1.0);
    let one = |_: &Vector3<f64>| 1.0;
    let z2 = |p: &Vector3<f64>| p.z * p.z;
    let bump = |p: &Vector3<f64>| (1.0 - (p - n).norm_squared()).max(0.0).powi(2);
    let cases: [(&(dyn Fn(&Vector3<f64>) -> f64 + Sync), f64); 3] = [(&one, 4.0 * PI), (&z2, 4.0 * PI / 3.0), (&bump, PI / 3.0)];
    for level in 4..=5 {
        let p = ConvexPolytope::icosphere(level);
        for (w, limit) in cases {
            let c = p.steiner_coefficients(Some(w), &[0.25, 0.5, 0.75, 1.0]).unwrap();
            assert!((c.curvature_integral() - limit).abs() < 0.01 * limit, "level {level}: {} vs {limit}", c.curvature_integral());
        }
        let odd = p.steiner_coefficients(Some(&|q: &Vector3<f64>| q.z), &[0.25, 0.5, 0.75, 1.0]).unwrap();
        assert!(odd.curvature_integral().abs() < 1e-9);
    }
}

#[test]
fn sphere_approximation() {
    let tet = convex_approximate(ConvexBody::Sphere { radius: 1.0 }, 4, &cfg()).unwrap();
    assert_eq!(tet.polytope.vertices().len(), 4);
    assert_eq!(tet.polytope.facets().len(), 4);

    let mut last = f64::INFINITY;
    for n in [12, 48, 192, 768, 3072] {
        let a = convex_approximate(ConvexBody::Sphere { radius: 1.0 }, n, &cfg()).unwrap();
        assert_eq!(a.polytope.vertices().len(), n);
        assert!(a.hausdorff < last, "n={n}: {} ≥ {last}", a.hausdorff);
        last = a.hausdorff;
    }
    assert!(last < 5e-3);

    let e = ConvexBody::Ellipsoid { axes: [2.0, 1.0, 1.0] };
    let a = convex_approximate(e, 200, &cfg()).unwrap();
    for v in a.polytope.vertices() {
        assert!(e.implicit(&Vector3::new(v[0], v[1], v[2])).abs() < 1e-12);
    }
    assert!((a.polytope.total_exterior_angle() - 4.0 * PI).abs() < 1e-9);
}

#[test]
fn parse_inputs() {
    let off = "OFF\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n";
    let c = parse_complex(off).unwrap();
    assert!((c.singular_curvature().unwrap().total_mass() - 4.0 * PI).abs() < 1e-12);
    let json = serde_json::to_string(&builtin_complex("saddle7").unwrap()).unwrap();
    assert_eq!(parse_complex(&json).unwrap(), builtin_complex("saddle7").unwrap());
    assert!(matches!(parse_complex("{\"dim\": 2,"), Err(Error::Json(_))));
    assert!(parse_complex("OFF\n3 1\n0 0 0\n").is_err());
}
