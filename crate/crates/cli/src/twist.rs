//! `twist-verify`.

use curvcone::embed::{fourth_power_frame, make_twist, numeric_e, numeric_metric, SmoothMap};
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::report::{num, Context, Failure, Outcome, EXIT_NEGATIVE, EXIT_OK};
use crate::{Format, GlobalArgs};

pub const METRIC_THRESHOLD: f64 = 1e-6;
pub const E_THRESHOLD: f64 = 1e-4;

pub struct TwistArgs {
    pub q: usize,
    pub c: f64,
    pub step: f64,
    pub points: usize,
    pub compose: bool,
}

#[derive(Serialize)]
struct PointCheck {
    x: Vec<f64>,
    v: Vec<f64>,
    metric_residual: f64,
    e_numeric: f64,
    e_target: f64,
    e_error: f64,
    richardson_ratio: Option<f64>,
}

pub fn twist_verify(mut ctx: Context, _g: &GlobalArgs, a: TwistArgs) -> Result<Outcome, Failure> {
    if a.q > 3 && !a.compose {
        return Err(Failure::usage(format!("q = {} has no designed frame; pass --compose to use the composed frame", a.q)));
    }
    if a.points == 0 {
        return Err(Failure::usage("--points must be at least 1"));
    }
    let spec = format!("q={};c={};step={};points={};compose={}", a.q, a.c, a.step, a.points, a.compose);
    ctx.record_input("twist", spec.as_bytes());

    let frame = fourth_power_frame(a.q, a.compose)?;
    let map = make_twist(&frame, a.c)?;
    let q = a.q;

    // Draw every sample up front so the result does not depend on scheduling.
    let mut rng = ctx.config().rng(0x7715);
    let mut gaussian = || DVector::from_iterator(q, (0..q).map(|_| StandardNormal.sample(&mut rng)));
    let samples: Vec<(DVector<f64>, DVector<f64>)> = (0..a.points).map(|_| (gaussian(), gaussian())).collect();
    let relative = a.c > 0.0;

    let checks = samples
        .par_iter()
        .map(|(x, v)| {
            let g = numeric_metric(&map, x, a.step)?;
            let metric_residual = (g.matrix() - DMatrix::<f64>::identity(q, q)).norm();
            let ne = numeric_e(&map, x, a.step)?;
            let e_numeric = ne.e.quartic(v);
            let v4 = v.norm_squared().powi(2);
            let e_target = a.c * v4;
            let e_error = if relative { (e_numeric - e_target).abs() / e_target } else { e_numeric.abs() / v4 };
            Ok(PointCheck {
                x: x.iter().copied().collect(),
                v: v.iter().copied().collect(),
                metric_residual,
                e_numeric,
                e_target,
                e_error,
                richardson_ratio: ne.richardson_ratio,
            })
        })
        .collect::<Result<Vec<_>, curvcone::Error>>()?;

    let max_metric = checks.iter().map(|c| c.metric_residual).fold(0.0, f64::max);
    let max_e = checks.iter().map(|c| c.e_error).fold(0.0, f64::max);
    let verified = max_metric <= METRIC_THRESHOLD && max_e <= E_THRESHOLD;
    let code = if verified { EXIT_OK } else { EXIT_NEGATIVE };
    let e_kind = if relative { "relative |E(v) − c|v|⁴| / (c|v|⁴)" } else { "absolute |E(v)| / |v|⁴ (c = 0)" };

    if ctx.format_or(Format::Json) == Format::Csv {
        let rows: Vec<Vec<String>> = checks
            .iter()
            .enumerate()
            .map(|(k, c)| {
                vec![
                    k.to_string(),
                    num(c.metric_residual),
                    num(c.e_numeric),
                    num(c.e_target),
                    num(c.e_error),
                    c.richardson_ratio.map_or_else(String::new, num),
                ]
            })
            .collect();
        let notes = [("verified", verified.to_string()), ("e_error", e_kind.to_string())];
        return Ok(ctx.csv(&notes, &["point", "metric_residual", "e_numeric", "e_target", "e_error", "richardson_ratio"], &rows, code));
    }

    Ok(ctx.json(
        json!({
            "q": a.q,
            "c": a.c,
            "step": a.step,
            "compose": a.compose,
            "frame": { "kind": frame.kind, "size": frame.len(), "lambda": frame.lambda, "identity_residual": frame.identity_residual(64) },
            "twist": { "a": map.a, "b": map.b, "c_realized": map.c(), "source_dim": map.source_dim(), "target_dim": map.target_dim() },
            "max_metric_residual": max_metric,
            "max_e_error": max_e,
            "e_error_kind": e_kind,
            "thresholds": { "metric": METRIC_THRESHOLD, "e": E_THRESHOLD },
            "verified": verified,
            "points": checks,
        }),
        code,
    ))
}
