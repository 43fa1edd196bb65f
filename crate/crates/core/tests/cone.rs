use curvcone::cone::*;
use curvcone::tensor::index::sym_pair_count;
use curvcone::*;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn gaussian(n: usize, rng: &mut impl Rng) -> DVector<f64> {
    DVector::from_iterator(n, (0..n).map(|_| StandardNormal.sample(&mut *rng)))
}

fn q(m: usize) -> Biform {
    sphere_tensor(m, 1.0).unwrap().into_biform()
}

fn random_member(m: usize, count: usize, rng: &mut impl Rng) -> Biform {
    let mut b = Biform::zeros(m);
    for _ in 0..count {
        let s = Bivector::wedge(&gaussian(m, rng), &gaussian(m, rng)).unwrap();
        b = b.add(&Biform::square(&s.scale(1.0 / s.norm())).scale(rng.gen_range(0.1..2.0))).unwrap();
    }
    b
}

fn pd_form(m: usize, rng: &mut impl Rng) -> Sym2Form {
    let o = random_orthogonal(m, rng);
    let d: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..1.5)).collect();
    Sym2Form::new(&o * DMatrix::from_diagonal(&DVector::from_vec(d)) * o.transpose()).unwrap()
}

fn reconstruct(m: usize, parts: &[WeightedGenerator]) -> Biform {
    parts.iter().fold(Biform::zeros(m), |acc, p| match &p.generator {
        Generator::Plane(s) => acc.add(&Biform::square(s).scale(p.weight)).unwrap(),
        Generator::Form(_) => panic!("plane cone has plane generators"),
    })
}

#[test]
fn sphere_and_product_are_members() {
    for m in [3, 4, 5] {
        let cert = cosec_membership(&q(m), &cfg()).unwrap();
        assert!(cert.is_member());
        let parts = cert.decomposition.unwrap();
        assert_eq!(parts.len(), m * (m - 1) / 2);
        assert!((reconstruct(m, &parts).matrix() - q(m).matrix()).norm() < 1e-12);
        for p in &parts {
            let Generator::Plane(s) = &p.generator else { unreachable!() };
            assert!(is_simple(s, 1e-10));
        }
    }
    let cert = cosec_membership(product_tensor(4).unwrap().biform(), &cfg()).unwrap();
    assert!(cert.is_member());
    assert_eq!(cert.decomposition.unwrap().len(), 1);

    let zero = cosec_membership(&Biform::zeros(4), &cfg()).unwrap();
    assert!(zero.is_member() && zero.decomposition.unwrap().is_empty());
}

#[test]
fn non_bianchi_input_is_rejected() {
    let mixed = Biform::from_four_vector(&FourVector::volume_form());
    assert!(matches!(cosec_membership(&mixed, &cfg()), Err(Error::BianchiViolation(_))));
}

#[test]
fn recovers_random_combinations() {
    let config = SolverConfig { trace: true, ..cfg() };
    let mut rng = cfg().rng(11);
    for m in [3, 4, 5] {
        for count in [2, 5, 10] {
            let b = random_member(m, count, &mut rng);
            let cert = cosec_membership(&b, &config).unwrap();
            assert!(cert.is_member() && cert.residual <= 1e-6, "m={m} count={count}: {}", cert.residual);
            let recon = reconstruct(m, cert.decomposition.as_ref().unwrap());
            assert!((recon.matrix() - b.matrix()).norm() <= 1e-6 * b.norm() * 1.01);
            assert!(cert.decomposition.unwrap().iter().all(|p| p.weight > 0.0));
            assert!(cert.trace.windows(2).all(|w| w[1].residual <= w[0].residual * (1.0 + 1e-12) + 1e-15));
        }
    }
}

#[test]
fn negative_sphere_is_separated() {
    let g = dual_separation(&q(4).scale(-1.0), &cfg()).unwrap().expect("certified");
    assert!(pairing(&g, &q(4)).unwrap() > 0.0);
    assert!(min_sectional(&g, &cfg()).value >= -1e-9 * g.norm());
    assert!(dual_separation(&q(4), &cfg()).unwrap().is_none());

    // A tensor with a negative sectional curvature cannot be a member.
    let rm = kn_square(&Sym2Form::diag(&[1.0, 1.0, -1.0, 0.5])).into_biform();
    let cert = cosec_membership(&rm, &cfg()).unwrap();
    assert_eq!(cert.verdict, Verdict::NonMember);
    let Some(DualFunctional::Biform(g)) = &cert.dual_functional else { panic!("missing dual") };
    assert!(pairing(g, &rm).unwrap() < 0.0);
    assert!(min_sectional(g, &cfg().with_seed(99)).value >= -cfg().tol * g.norm());
    let check = cert.dual_check.unwrap();
    assert!(check.distance_lower_bound > 0.0 && check.distance_lower_bound <= cert.residual + 1e-9);
}

#[test]
fn membership_is_equivariant_and_scale_free() {
    let mut rng = cfg().rng(21);
    let member = random_member(4, 6, &mut rng);
    let outside = kn_square(&Sym2Form::diag(&[2.0, 1.0, -0.5, 0.3])).into_biform();
    for b in [&member, &outside] {
        let base = cosec_membership(b, &cfg()).unwrap();
        for _ in 0..3 {
            let o = random_orthogonal(4, &mut rng);
            let moved = cosec_membership(&b.conjugate(&o).unwrap(), &cfg()).unwrap();
            assert_eq!(moved.verdict, base.verdict);
            assert!((moved.residual - base.residual).abs() <= 5.0 * cfg().tol);
        }
        let scaled = cosec_membership(&b.scale(7.5), &cfg()).unwrap();
        assert!((scaled.residual - base.residual).abs() <= 5.0 * cfg().tol);
    }
}

#[test]
fn members_pair_nonnegatively_with_positive_tensors() {
    let mut rng = cfg().rng(31);
    for _ in 0..5 {
        let rm = random_member(4, 4, &mut rng);
        assert!(cosec_membership(&rm, &cfg()).unwrap().is_member());
        let g = kn_square(&pd_form(4, &mut rng)).into_biform();
        assert!(min_sectional(&g, &cfg()).value >= 0.0);
        assert!(pairing(&rm, &g).unwrap() >= -5.0 * cfg().tol);
    }
}

#[test]
fn sectional_extrema() {
    let sphere = min_sectional(&q(4), &cfg());
    assert!((sphere.value - 1.0).abs() < 1e-12);
    assert!((max_sectional(&q(4), &cfg()).value - 1.0).abs() < 1e-12);

    let rm = kn_square(&Sym2Form::diag(&[1.0, 2.0, 3.0])).into_biform();
    let lo = min_sectional(&rm, &cfg());
    assert!((lo.value - 2.0).abs() < 1e-10);
    assert!(lo.bivector().canonical_sign().coords()[0] > 1.0 - 1e-8);
    assert!((max_sectional(&rm, &cfg()).value - 6.0).abs() < 1e-10);
    // Brute force: in dim 3 a plane is fixed by its unit normal.
    let mut grid_min = f64::INFINITY;
    for i in 0..=180 {
        for j in 0..360 {
            let (t, p) = ((i as f64).to_radians(), (j as f64).to_radians());
            let n = DVector::from_vec(vec![t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]);
            let a = if n[0].abs() < 0.9 { DVector::from_vec(vec![1.0, 0.0, 0.0]) } else { DVector::from_vec(vec![0.0, 1.0, 0.0]) };
            let x = (&a - &n * n.dot(&a)).normalize();
            let y = n.cross(&x);
            grid_min = grid_min.min(sectional(&rm, &x, &y).unwrap());
        }
    }
    assert!(lo.value <= grid_min + 1e-12 && grid_min - lo.value < 1e-3);

    let e12 = Biform::square(&Bivector::basis(3, 0, 1));
    assert!(min_sectional(&e12, &cfg()).value.abs() < 1e-12);
}

#[test]
fn bound_examples() {
    for m in [3, 4] {
        assert!((cosec_lower_bound(&q(m), &cfg()).unwrap() - 1.0).abs() <= 1e-6);
        assert!((cosec_lower_bound(&q(m).scale(2.0), &cfg()).unwrap() - 2.0).abs() <= 1e-6);
        assert!(cosec_lower_bound(&Biform::zeros(m), &cfg()).unwrap().abs() <= 1e-6);
        assert!((cosec_upper_bound(&q(m).scale(-1.0), &cfg()).unwrap() - 1.0).abs() <= 1e-6);
        assert!((cosec_upper_bound(&q(m).scale(-2.0), &cfg()).unwrap() - 2.0).abs() <= 1e-6);
        assert!(cosec_upper_bound(&Biform::zeros(m), &cfg()).unwrap().abs() <= 1e-6);
    }
    // Q + (e1∧e2)²: removing more than Q leaves negative sectional curvature.
    let rm = q(4).add(product_tensor(4).unwrap().biform()).unwrap();
    let lower = cosec_lower_bound(&rm, &cfg()).unwrap();
    assert!((lower - 1.0).abs() <= 1e-4, "{lower}");
    let scaled = cosec_lower_bound(&rm.scale(3.0), &cfg()).unwrap();
    assert!((scaled - 3.0 * lower).abs() <= 3e-4);
}

#[test]
fn thorpe_examples() {
    let sphere = thorpe_shift(&q(4), &cfg()).unwrap();
    assert!(sphere.f_star.abs() < 1e-9 && (sphere.min_eig - 1.0).abs() < 1e-9);
    assert!(trace_is_concave(&sphere.trace, 1e-14));
    let small = thorpe_shift(&q(4).scale(1e-6), &cfg()).unwrap();
    assert!(small.min_eig > 0.0 && small.min_eig < 2e-6);

    let mut rng = cfg().rng(41);
    for _ in 0..5 {
        let mut rm = Biform::zeros(4);
        for _ in 0..3 {
            rm = rm.add(kn_square(&pd_form(4, &mut rng)).biform()).unwrap();
        }
        let t = thorpe_shift(&rm, &cfg()).unwrap();
        assert!(t.min_eig > 0.0);
        assert!(trace_is_concave(&t.trace, 1e-14 * rm.norm()));
    }
    assert!(matches!(thorpe_shift(&q(5), &cfg()), Err(Error::ThorpeDimension)));
    assert!(!trace_is_concave(&[(0.0, 0.0), (1.0, -1.0), (2.0, 0.0)], 1e-9));
    assert!(trace_is_concave(&[(0.0, 0.0), (1.0, -1.0), (2.0, 0.0)], 0.6));
}

/// Distance from Φ to the cone of a finite set of PSD generators, by NNLS.
fn grid_distance(phi: &PhiTensor, steps: usize) -> f64 {
    let mut cols = Vec::new();
    for i in 0..steps {
        let t = std::f64::consts::PI * i as f64 / steps as f64;
        let u = DVector::from_vec(vec![t.cos(), t.sin()]);
        let w = DVector::from_vec(vec![-t.sin(), t.cos()]);
        for k in 0..=steps {
            let r = k as f64 / steps as f64;
            let m = &u * u.transpose() + &w * w.transpose() * r;
            let c = Sym2Form::new(m).unwrap().to_coords();
            cols.push(&c * c.transpose());
        }
    }
    let n = sym_pair_count(2);
    let a = DMatrix::from_fn(n * n, cols.len(), |r, c| cols[c][r]);
    let b = DVector::from_column_slice(phi.matrix().as_slice());
    let x = nnls(&a, &b, None);
    (&a * x - &b).norm() / b.norm()
}

#[test]
fn phi_cone_examples() {
    let id = phi_positive_membership(&PhiTensor::square(&Sym2Form::identity(3)), &cfg()).unwrap();
    assert!(id.is_member());
    assert_eq!(id.decomposition.as_ref().unwrap().len(), 1);
    assert!(id.margin.unwrap() > 0.0);

    let hyper = PhiTensor::square(&Sym2Form::diag(&[1.0, -1.0]));
    let cert = phi_positive_membership(&hyper, &cfg()).unwrap();
    assert_eq!(cert.verdict, Verdict::NonMember);
    assert!(matches!(cert.dual_functional, Some(DualFunctional::Phi(_))));
    let lower = cert.dual_check.unwrap().distance_lower_bound;
    let grid = grid_distance(&hyper, 60);
    assert!(lower > 0.1 && lower <= grid + 1e-9, "lower {lower}, grid {grid}");

    let apex = phi_positive_membership(&PhiTensor::zeros(3), &cfg()).unwrap();
    assert_eq!(apex.verdict, Verdict::NonMember);
    assert!(apex.dual_functional.is_none());

    let mut rng = cfg().rng(51);
    let forms: Vec<Sym2Form> = (0..3).map(|_| pd_form(3, &mut rng)).collect();
    let phi = phi_from_forms(&forms).unwrap();
    let cert = phi_positive_membership(&phi, &SolverConfig { strict_margin: 1e-6, ..cfg() }).unwrap();
    assert!(cert.is_member() && cert.margin.unwrap() > 1e-6);
}

#[test]
fn sos_cone_examples() {
    let h2 = Sym4Form::sym_square(&Sym2Form::identity(3));
    let cert = sym4_sos_membership(&h2, &cfg()).unwrap();
    assert!(cert.is_member());
    assert_eq!(cert.decomposition.unwrap().len(), 1);

    let cert = sym4_sos_membership(&h2.scale(-1.0), &cfg()).unwrap();
    assert_eq!(cert.verdict, Verdict::NonMember);
    let Some(DualFunctional::Sym4(g)) = cert.dual_functional else { panic!("missing dual") };
    let cos = g.inner(&h2).unwrap() / (g.norm() * h2.norm());
    assert!(cos > 0.999, "{cos}");

    let mut rng = cfg().rng(61);
    let mut e = Sym4Form::zeros(3);
    for _ in 0..4 {
        e = e.add(&Sym4Form::sym_square(&pd_form(3, &mut rng)).scale(rng.gen_range(0.2..2.0))).unwrap();
    }
    let cert = sym4_sos_membership(&e, &cfg()).unwrap();
    assert!(cert.is_member() && cert.residual <= cfg().tol);
}

#[test]
fn quartic_minima() {
    let h2 = Sym4Form::sym_square(&Sym2Form::identity(2));
    assert!((quartic_min(&h2, &cfg()).value - 1.0).abs() < 1e-12);
    let quartic = Sym4Form::from_quartic(2, &[([0, 0, 0, 0], 1.0), ([1, 1, 1, 1], 1.0)]).unwrap();
    let qm = quartic_min(&quartic, &cfg());
    assert!((qm.value - 0.5).abs() < 1e-10);
    assert!((qm.argmin[0].abs() - 0.5f64.sqrt()).abs() < 1e-6 && (qm.argmin[1].abs() - 0.5f64.sqrt()).abs() < 1e-6);
    let saddle = Sym4Form::from_quartic(2, &[([0, 0, 0, 0], 1.0), ([0, 0, 1, 1], -3.0)]).unwrap();
    assert!((saddle.quartic(&DVector::from_vec(vec![1.0, 1.0])) + 2.0).abs() < 1e-12);
    assert!(quartic_min(&saddle, &cfg()).value < 0.0);
}

#[test]
fn psd_projection_and_nnls() {
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
    let p = project_psd(&a);
    // Eigenvalues 3 and −1: the projection keeps the 3-eigenspace.
    assert!((p - DMatrix::from_element(2, 2, 1.5)).norm() < 1e-12);
    let basis = DMatrix::identity(2, 2);
    let x = nnls(&basis, &DVector::from_vec(vec![1.0, -1.0]), None);
    assert_eq!(x.as_slice(), &[1.0, 0.0]);
}

#[test]
fn certificates_serialize() {
    let cert = cosec_membership(&q(3), &SolverConfig { trace: true, ..cfg() }).unwrap();
    let json = serde_json::to_string(&cert).unwrap();
    let back: ConicCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);
    assert!(json.contains("\"verdict\":\"member\""));
    assert!(cert.trace_csv().starts_with("iteration,residual,step_size\n"));
}
