//! `su3`: the bi-invariant curvature operator of SU(3) and its cone verdicts.

use curvcone::cone::{cosec_membership, curvature_operator_spectrum};
use curvcone::lie::{adx_wedge_square, ad_invariance_defect, biinvariant_operator, min_wedge_on_torus, torus_ad_coefficients, LieBasis, TorusElement};
use curvcone::TensorDoc;
use serde_json::json;

use crate::report::{num, Context, Failure, Outcome, EXIT_OK};
use crate::{Format, GlobalArgs};

const SPECTRUM_TOL: f64 = 1e-10;

pub fn su3(mut ctx: Context, _g: &GlobalArgs) -> Result<Outcome, Failure> {
    ctx.record_input("builtin:su3", b"su3");
    let basis = LieBasis::su3();
    let op = biinvariant_operator(3)?;

    if ctx.format_or(Format::Json) == Format::Csv {
        let m = op.matrix();
        let rows: Vec<Vec<String>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| num(m[(i, j)])).collect()).collect();
        let header: Vec<String> = (0..m.ncols()).map(|j| format!("c{j}")).collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        return Ok(ctx.csv(&[("operator", "projection onto Im(ad) in Λ²su(3), rows in pair order".into())], &header, &rows, EXIT_OK));
    }

    let spectrum = curvature_operator_spectrum(&op);
    let ones = spectrum.iter().filter(|v| (*v - 1.0).abs() <= SPECTRUM_TOL).count();
    let zeros = spectrum.iter().filter(|v| v.abs() <= SPECTRUM_TOL).count();
    let q_member = spectrum.iter().all(|&v| v >= -SPECTRUM_TOL);

    let samples: Vec<_> = [(1.0, -1.0, 0.0), (2.0, -1.0, -1.0), (0.5, 0.25, -0.75)]
        .into_iter()
        .map(|(a, b, c)| {
            let x = TorusElement::from_triple(a, b, c)?;
            let w = adx_wedge_square(&x);
            Ok(json!({
                "triple": [a, b, c],
                "ad_coefficients": torus_ad_coefficients(&x),
                "expected": [c - b, a - c, b - a],
                "wedge_products": w.products,
                "wedge_norm": w.four_vector.norm(),
            }))
        })
        .collect::<Result<_, curvcone::Error>>()?;
    let wedge_min = min_wedge_on_torus(720)?;

    let config = ctx.config().clone();
    let cert = cosec_membership(&op, &config)?;
    let doc: TensorDoc = op.clone().into();

    Ok(ctx.json(
        json!({
            "basis": {
                "names": basis.names,
                "orthonormality_defect": basis.orthonormality_defect(),
                "structure_defect": basis.structure_defect(),
                "jacobi_defect": basis.jacobi_defect(),
            },
            "torus": {
                "samples": samples,
                "min_wedge_norm": wedge_min.value,
                "min_wedge_argmin": wedge_min.argmin.triple(),
                "resolution": 720,
            },
            "operator": {
                "tensor": doc,
                "ad_invariance_defect": ad_invariance_defect(3, &[0.3, 1.1])?,
                "spectrum": spectrum,
                "eigenvalue_one_count": ones,
                "eigenvalue_zero_count": zeros,
            },
            "cones": {
                "q": { "verdict": if q_member { "member" } else { "non_member" } },
                "costar": { "verdict": cert.verdict, "certificate": cert },
            },
        }),
        EXIT_OK,
    ))
}
