//! `cone-check` and `cosec-bounds`.

use std::path::Path;

use clap::ValueEnum;
use curvcone::cone::{
    cosec_lower_bound, cosec_membership, cosec_upper_bound, curvature_operator_spectrum, min_sectional, phi_positive_membership,
    sym4_sos_membership, ConicCertificate, Verdict,
};
use curvcone::{AlgebraicCurvatureTensor, AnyTensor};
use serde_json::{json, Value};

use crate::input::{expect_biform, load_tensor};
use crate::report::{num, Context, Failure, Outcome, EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_OK};
use crate::{Format, GlobalArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConeName {
    /// Closed cone generated by squares of simple bivectors.
    Costar,
    /// Nonnegative sectional curvature.
    Sec,
    /// Positive semidefinite curvature operator.
    Q,
    /// Sums of squares of PSD forms (sym4 or phi input).
    Cplus,
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Member => EXIT_OK,
        Verdict::NonMember => EXIT_NEGATIVE,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn certificate_outcome(ctx: &Context, cone: &str, cert: ConicCertificate) -> Outcome {
    let code = exit_code(cert.verdict);
    if ctx.format_or(Format::Json) == Format::Csv {
        let rows: Vec<Vec<String>> = cert.trace.iter().map(|r| vec![r.iteration.to_string(), num(r.residual), num(r.step_size)]).collect();
        let notes = [("cone", cone.to_string()), ("verdict", verdict_name(cert.verdict)), ("residual", num(cert.residual))];
        return ctx.csv(&notes, &["iteration", "residual", "step_size"], &rows, code);
    }
    ctx.json(json!({ "cone": cone, "verdict": cert.verdict, "certificate": cert }), code)
}

fn verdict_name(v: Verdict) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

pub fn cone_check(mut ctx: Context, g: &GlobalArgs, file: Option<&Path>, cone: ConeName) -> Result<Outcome, Failure> {
    let tensor = load_tensor(&mut ctx, file, g.builtin.as_deref())?;
    let config = ctx.config().clone();
    match cone {
        ConeName::Costar => {
            let rm = expect_biform(tensor, "the costar cone")?;
            let cert = cosec_membership(&rm, &config)?;
            Ok(certificate_outcome(&ctx, "costar", cert))
        }
        ConeName::Cplus => {
            let cert = match tensor {
                AnyTensor::Sym4(e) => sym4_sos_membership(&e, &config)?,
                AnyTensor::Phi(phi) => phi_positive_membership(&phi, &config)?,
                _ => return Err(Failure::input("the cplus cone needs a sym4 or phi tensor")),
            };
            Ok(certificate_outcome(&ctx, "cplus", cert))
        }
        ConeName::Sec => {
            let rm = AlgebraicCurvatureTensor::new(expect_biform(tensor, "the sec cone")?)?;
            let scale = rm.norm();
            let ext = min_sectional(&rm, &config);
            let member = ext.value >= -config.tol * scale;
            let verdict = if member { Verdict::Member } else { Verdict::NonMember };
            let result = json!({
                "cone": "sec",
                "verdict": verdict,
                "min_sectional": ext.value,
                "scale": scale,
                "witness": { "x": ext.x.as_slice(), "y": ext.y.as_slice() },
            });
            Ok(simple_outcome(&ctx, result, verdict))
        }
        ConeName::Q => {
            let rm = AlgebraicCurvatureTensor::new(expect_biform(tensor, "the q cone")?)?;
            let spectrum = curvature_operator_spectrum(&rm);
            let top = spectrum.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let min = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
            let verdict = if min >= -config.tol * top.max(f64::MIN_POSITIVE) { Verdict::Member } else { Verdict::NonMember };
            let result = json!({ "cone": "q", "verdict": verdict, "min_eigenvalue": min, "spectrum": spectrum });
            Ok(simple_outcome(&ctx, result, verdict))
        }
    }
}

fn simple_outcome(ctx: &Context, result: Value, verdict: Verdict) -> Outcome {
    let code = exit_code(verdict);
    if ctx.format_or(Format::Json) == Format::Csv {
        let obj = result.as_object().expect("object");
        let rows: Vec<Vec<String>> = obj
            .iter()
            .filter(|(_, v)| !v.is_object() && !v.is_array())
            .map(|(k, v)| vec![k.clone(), v.as_str().map_or_else(|| v.to_string(), str::to_string)])
            .collect();
        return ctx.csv(&[], &["key", "value"], &rows, code);
    }
    ctx.json(result, code)
}

pub fn cosec_bounds(mut ctx: Context, g: &GlobalArgs, file: Option<&Path>) -> Result<Outcome, Failure> {
    let rm = expect_biform(load_tensor(&mut ctx, file, g.builtin.as_deref())?, "cosec-bounds")?;
    let config = ctx.config().clone();
    let lower = cosec_lower_bound(&rm, &config)?;
    let upper = cosec_upper_bound(&rm, &config)?;
    if ctx.format_or(Format::Json) == Format::Csv {
        return Ok(ctx.csv(&[], &["lower", "upper"], &[vec![num(lower), num(upper)]], EXIT_OK));
    }
    Ok(ctx.json(
        json!({
            "lower": lower,
            "upper": upper,
            "lower_definition": "sup{κ : Rm − κ·Q ∈ S̄*}",
            "upper_definition": "sup{κ : −Rm − κ·Q ∈ S̄*}",
        }),
        EXIT_OK,
    ))
}
