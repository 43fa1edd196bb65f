//! Reading tensors and complexes from files, stdin or built-ins.

use std::io::Read;
use std::path::Path;

use curvcone::lie::biinvariant_operator;
use curvcone::{product_tensor, sphere_tensor, AlgebraicCurvatureTensor, AnyTensor, Biform, TensorDoc};

use crate::report::{Context, Failure};

/// Raw text of `file` (`-` is stdin), recorded in the manifest.
pub fn read_text(ctx: &mut Context, file: &Path) -> Result<String, Failure> {
    let (label, bytes) = if file == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(|e| Failure::input(format!("reading stdin: {e}")))?;
        ("stdin".to_string(), buf)
    } else {
        let bytes = std::fs::read(file).map_err(|e| Failure::input(format!("reading {}: {e}", file.display())))?;
        (file.display().to_string(), bytes)
    };
    ctx.record_input(label, &bytes);
    String::from_utf8(bytes).map_err(|_| Failure::input(format!("{} is not UTF-8", file.display())))
}

/// Exactly one of a file and `--builtin`.
pub fn pick_source<'a>(file: Option<&'a Path>, builtin: Option<&'a str>) -> Result<Source<'a>, Failure> {
    match (file, builtin) {
        (Some(f), None) => Ok(Source::File(f)),
        (None, Some(b)) => Ok(Source::Builtin(b)),
        (Some(_), Some(_)) => Err(Failure::usage("give either an input file or --builtin, not both")),
        (None, None) => Err(Failure::usage("missing input: give a file (or `-`) or --builtin")),
    }
}

pub enum Source<'a> {
    File(&'a Path),
    Builtin(&'a str),
}

fn dim_arg(name: &str, prefix: &str) -> Option<Result<usize, Failure>> {
    let rest = name.strip_prefix(prefix)?;
    Some(rest.parse().map_err(|_| Failure::usage(format!("bad dimension in --builtin {name}"))))
}

pub fn builtin_tensor(name: &str) -> Result<AlgebraicCurvatureTensor, Failure> {
    if name == "su3" {
        return Ok(biinvariant_operator(3)?);
    }
    if let Some(m) = dim_arg(name, "sphere:") {
        return Ok(sphere_tensor(m?, 1.0)?);
    }
    if let Some(m) = dim_arg(name, "s2xr:") {
        return Ok(product_tensor(m?)?);
    }
    Err(Failure::usage(format!("unknown built-in tensor `{name}` (expected su3, sphere:<m> or s2xr:<m>)")))
}

pub fn load_tensor(ctx: &mut Context, file: Option<&Path>, builtin: Option<&str>) -> Result<AnyTensor, Failure> {
    match pick_source(file, builtin)? {
        Source::File(f) => {
            let text = read_text(ctx, f)?;
            Ok(AnyTensor::from_json(&text)?)
        }
        Source::Builtin(name) => {
            let t = builtin_tensor(name)?;
            let doc: TensorDoc = t.clone().into();
            ctx.record_input(format!("builtin:{name}"), serde_json::to_string(&doc).expect("tensor serializes").as_bytes());
            Ok(AnyTensor::Biform(t.into_biform()))
        }
    }
}

pub fn expect_biform(t: AnyTensor, what: &str) -> Result<Biform, Failure> {
    match t {
        AnyTensor::Biform(b) => Ok(b),
        other => Err(Failure::input(format!("{what} needs a biform tensor, got kind {:?}", TensorDoc::from(other).kind))),
    }
}
