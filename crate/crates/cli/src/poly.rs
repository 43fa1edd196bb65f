//! `poly-report`.

use std::f64::consts::TAU;
use std::path::Path;

use curvcone::poly::{builtin_complex, parse_complex, PolyhedralComplex};
use serde_json::json;

use crate::input::{pick_source, read_text, Source};
use crate::report::{num, Context, Failure, Outcome, EXIT_NEGATIVE, EXIT_OK};
use crate::{Format, GlobalArgs};

pub const SC_CONVENTION: &str = "Sc = 2σ₂; for surfaces Sc = 2K, and deficits measure K";

fn load_complex(ctx: &mut Context, g: &GlobalArgs, file: Option<&Path>) -> Result<PolyhedralComplex, Failure> {
    match pick_source(file, g.builtin.as_deref())? {
        Source::File(f) => {
            let text = read_text(ctx, f)?;
            Ok(parse_complex(&text)?)
        }
        Source::Builtin(name) => {
            ctx.record_input(format!("builtin:{name}"), name.as_bytes());
            builtin_complex(name).map_err(|e| Failure::usage(e.to_string()))
        }
    }
}

pub fn poly_report(mut ctx: Context, g: &GlobalArgs, file: Option<&Path>) -> Result<Outcome, Failure> {
    let complex = load_complex(&mut ctx, g, file)?;
    let pseudomanifold = complex.validate()?;
    let hyperedges = complex.hyperedge_angles()?;
    let measure = complex.singular_curvature()?;
    let bound = complex.curvature_bound_check(0.0)?;
    let code = if bound.holds { EXIT_OK } else { EXIT_NEGATIVE };
    let total_deficit: f64 = hyperedges.iter().filter(|h| h.interior).map(|h| h.deficit).sum();

    if ctx.format_or(Format::Json) == Format::Csv {
        let rows: Vec<Vec<String>> = hyperedges
            .iter()
            .map(|h| {
                let ids: Vec<String> = h.hyperedge.iter().map(|v| v.to_string()).collect();
                vec![ids.join(" "), h.interior.to_string(), h.non_manifold.to_string(), num(h.total_angle), num(h.deficit), num(h.measure)]
            })
            .collect();
        let notes = [
            ("curvature_bound_holds", bound.holds.to_string()),
            ("total_deficit", num(total_deficit)),
            ("scalar_curvature_convention", SC_CONVENTION.to_string()),
        ];
        return Ok(ctx.csv(&notes, &["hyperedge", "interior", "non_manifold", "total_angle", "deficit", "measure"], &rows, code));
    }

    let result = json!({
        "dim": complex.dim(),
        "pseudomanifold": pseudomanifold,
        "hyperedges": hyperedges,
        "measure": measure,
        "total_deficit": total_deficit,
        "total_deficit_over_2pi": total_deficit / TAU,
        "total_mass": measure.total_mass(),
        "curvature_bound": { "kappa": 0.0, "holds": bound.holds, "worst": bound.worst },
        "scalar_curvature_convention": SC_CONVENTION,
    });
    Ok(ctx.json(result, code))
}
