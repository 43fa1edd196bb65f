//! `steiner-study`.

use std::f64::consts::PI;

use clap::ValueEnum;
use curvcone::poly::{builtin_polytope, pair_measure, ConvexPolytope};
use nalgebra::Vector3;
use serde_json::json;

use crate::poly::SC_CONVENTION;
use crate::report::{num, Context, Failure, Outcome, EXIT_OK};
use crate::{Format, GlobalArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightName {
    #[value(name = "1")]
    One,
    Z,
    Z2,
    /// max(0, 1 − |x − (0,0,1)|²)².
    Bump,
}

impl WeightName {
    fn eval(self, p: &Vector3<f64>) -> f64 {
        match self {
            WeightName::One => 1.0,
            WeightName::Z => p.z,
            WeightName::Z2 => p.z * p.z,
            WeightName::Bump => (1.0 - (p - Vector3::z()).norm_squared()).max(0.0).powi(2),
        }
    }

    /// `∫ w K dA` over the unit sphere.
    fn sphere_limit(self) -> f64 {
        match self {
            WeightName::One => 4.0 * PI,
            WeightName::Z => 0.0,
            WeightName::Z2 => 4.0 * PI / 3.0,
            WeightName::Bump => PI / 3.0,
        }
    }

    fn label(self) -> &'static str {
        match self {
            WeightName::One => "1",
            WeightName::Z => "z",
            WeightName::Z2 => "z2",
            WeightName::Bump => "bump",
        }
    }
}

pub fn parse_levels(spec: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::usage(format!("bad --levels `{spec}` (use 1..5, 1..=5, 4 or 1,3,5)"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let levels: Vec<usize> = if let Some((a, b)) = spec.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        (num(a)?..=num(b)?).collect()
    } else {
        spec.split(',').map(num).collect::<Result<_, _>>()?
    };
    if levels.is_empty() {
        return Err(bad());
    }
    if let Some(&l) = levels.iter().find(|&&l| l > 7) {
        return Err(Failure::usage(format!("subdivision level {l} is too large (max 7)")));
    }
    Ok(levels)
}

struct Row {
    level: Option<usize>,
    polytope: ConvexPolytope,
}

pub fn steiner_study(mut ctx: Context, _g: &GlobalArgs, body: &str, levels: &str, weight: WeightName, radii: &[f64]) -> Result<Outcome, Failure> {
    let sphere = body == "sphere";
    let rows: Vec<Row> = if sphere {
        parse_levels(levels)?.into_iter().map(|l| Row { level: Some(l), polytope: ConvexPolytope::icosphere(l) }).collect()
    } else {
        let polytope = builtin_polytope(body).map_err(|e| Failure::usage(e.to_string()))?;
        let level = body.strip_prefix("icosphere:").and_then(|l| l.parse().ok());
        vec![Row { level, polytope }]
    };
    let spec = format!("body={body};levels={levels};weight={};radii={radii:?}", weight.label());
    ctx.record_input("study", spec.as_bytes());

    let w = move |p: &Vector3<f64>| weight.eval(p);
    let wref: &(dyn Fn(&Vector3<f64>) -> f64 + Sync) = &w;
    let weight_arg = if weight == WeightName::One { None } else { Some(wref) };

    let mut table = Vec::new();
    for row in &rows {
        let p = &row.polytope;
        let fit = p.steiner_coefficients(weight_arg, radii)?;
        let exact = match weight_arg {
            None => p.steiner_exact(),
            Some(w) => p.steiner_weighted(w),
        };
        let measure = p.to_complex()?.singular_curvature()?;
        let deficit_pairing = pair_measure(&measure, |x| weight.eval(&Vector3::new(x[0], x[1], x[2])));
        // Round-sphere limit for the sphere family; the polytope's own deficit pairing otherwise.
        let limit = if sphere { weight.sphere_limit() } else { deficit_pairing };
        let integral = fit.curvature_integral();
        let abs_error = (integral - limit).abs();
        let rel_error = if limit != 0.0 { Some(abs_error / limit.abs()) } else { None };
        table.push(json!({
            "level": row.level,
            "vertices": p.vertices().len(),
            "facets": p.facets().len(),
            "fitted": fit.coefficients,
            "exact": exact.coefficients,
            "curvature_integral": integral,
            "deficit_pairing": deficit_pairing,
            "limit": limit,
            "abs_error": abs_error,
            "rel_error": rel_error,
            "quadrature_error": fit.error_estimate,
        }));
    }

    let limit_kind = if sphere { "unit sphere ∫ w K dA" } else { "Σ deficit·w(vertex)" };
    let coefficient_note = "c3 is the curvature coefficient: curvature_integral = 3·c3 = ∫ w K dA; c1 and c2 carry area and mean curvature";
    if ctx.format_or(Format::Csv) == Format::Csv {
        let cell = |v: &serde_json::Value| match v {
            serde_json::Value::Null => String::new(),
            serde_json::Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), num),
            other => other.to_string(),
        };
        let rows: Vec<Vec<String>> = table
            .iter()
            .map(|r| {
                let mut out = vec![body.to_string(), cell(&r["level"]), cell(&r["vertices"]), cell(&r["facets"])];
                out.extend((1..4).map(|k| cell(&r["fitted"][k])));
                out.extend((1..4).map(|k| cell(&r["exact"][k])));
                for key in ["curvature_integral", "deficit_pairing", "limit", "abs_error", "rel_error", "quadrature_error"] {
                    out.push(cell(&r[key]));
                }
                out
            })
            .collect();
        let notes = [
            ("weight", weight.label().to_string()),
            ("limit", limit_kind.to_string()),
            ("coefficients", coefficient_note.to_string()),
            ("scalar_curvature_convention", SC_CONVENTION.to_string()),
        ];
        let header = [
            "body", "level", "vertices", "facets", "c1", "c2", "c3", "exact_c1", "exact_c2", "exact_c3", "curvature_integral", "deficit_pairing",
            "limit", "abs_error", "rel_error", "quadrature_error",
        ];
        return Ok(ctx.csv(&notes, &header, &rows, EXIT_OK));
    }
    Ok(ctx.json(
        json!({
            "body": body,
            "weight": weight.label(),
            "radii": radii,
            "levels": table,
            "limit": limit_kind,
            "coefficients": coefficient_note,
            "scalar_curvature_convention": SC_CONVENTION,
        }),
        EXIT_OK,
    ))
}
