//! JSON exchange format: `{"dim": m, "kind": "...", "data": [row-major]}`.
//!
//! `sym2`, `biform` and `phi` store their matrices; `sym4` stores the full
//! `m⁴` coefficient array. Floats round-trip exactly (serde_json writes the
//! shortest representation).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::biform::{AlgebraicCurvatureTensor, Biform};
use super::index::{pair_count, sym_pair_count};
use super::phi::PhiTensor;
use super::sym2::Sym2Form;
use super::sym4::Sym4Form;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TensorKind {
    Sym2,
    Biform,
    Sym4,
    Phi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDoc {
    pub dim: usize,
    pub kind: TensorKind,
    pub data: Vec<f64>,
}

/// Any of the serializable tensor kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTensor {
    Sym2(Sym2Form),
    Biform(Biform),
    Sym4(Sym4Form),
    Phi(PhiTensor),
}

impl AnyTensor {
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TensorDoc = serde_json::from_str(s)?;
        doc.try_into()
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyTensor::Sym2(t) => t.dim(),
            AnyTensor::Biform(t) => t.dim(),
            AnyTensor::Sym4(t) => t.dim(),
            AnyTensor::Phi(t) => t.dim(),
        }
    }
}

impl TryFrom<TensorDoc> for AnyTensor {
    type Error = Error;
    fn try_from(doc: TensorDoc) -> Result<Self> {
        Ok(match doc.kind {
            TensorKind::Sym2 => AnyTensor::Sym2(doc.try_into()?),
            TensorKind::Biform => AnyTensor::Biform(doc.try_into()?),
            TensorKind::Sym4 => AnyTensor::Sym4(doc.try_into()?),
            TensorKind::Phi => AnyTensor::Phi(doc.try_into()?),
        })
    }
}

impl From<AnyTensor> for TensorDoc {
    fn from(t: AnyTensor) -> Self {
        match t {
            AnyTensor::Sym2(t) => t.into(),
            AnyTensor::Biform(t) => t.into(),
            AnyTensor::Sym4(t) => t.into(),
            AnyTensor::Phi(t) => t.into(),
        }
    }
}

fn expect_kind(doc: &TensorDoc, kind: TensorKind) -> Result<()> {
    if doc.kind != kind {
        return Err(Error::InvalidInput(format!("expected kind {kind:?}, got {:?}", doc.kind)));
    }
    Ok(())
}

fn square_matrix(doc: &TensorDoc, n: usize) -> Result<DMatrix<f64>> {
    if doc.data.len() != n * n {
        return Err(Error::DimMismatch { expected: n * n, got: doc.data.len() });
    }
    Ok(DMatrix::from_row_slice(n, n, &doc.data))
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

impl TryFrom<TensorDoc> for Sym2Form {
    type Error = Error;
    fn try_from(doc: TensorDoc) -> Result<Self> {
        expect_kind(&doc, TensorKind::Sym2)?;
        Sym2Form::new(square_matrix(&doc, doc.dim)?)
    }
}

impl From<Sym2Form> for TensorDoc {
    fn from(s: Sym2Form) -> Self {
        TensorDoc { dim: s.dim(), kind: TensorKind::Sym2, data: row_major(s.matrix()) }
    }
}

impl TryFrom<TensorDoc> for Biform {
    type Error = Error;
    fn try_from(doc: TensorDoc) -> Result<Self> {
        expect_kind(&doc, TensorKind::Biform)?;
        Biform::new(doc.dim, square_matrix(&doc, pair_count(doc.dim))?)
    }
}

impl From<Biform> for TensorDoc {
    fn from(b: Biform) -> Self {
        TensorDoc { dim: b.dim(), kind: TensorKind::Biform, data: row_major(b.matrix()) }
    }
}

impl TryFrom<TensorDoc> for AlgebraicCurvatureTensor {
    type Error = Error;
    fn try_from(doc: TensorDoc) -> Result<Self> {
        AlgebraicCurvatureTensor::new(Biform::try_from(doc)?)
    }
}

impl From<AlgebraicCurvatureTensor> for TensorDoc {
    fn from(r: AlgebraicCurvatureTensor) -> Self {
        r.into_biform().into()
    }
}

impl TryFrom<TensorDoc> for PhiTensor {
    type Error = Error;
    fn try_from(doc: TensorDoc) -> Result<Self> {
        expect_kind(&doc, TensorKind::Phi)?;
        PhiTensor::new(doc.dim, square_matrix(&doc, sym_pair_count(doc.dim))?)
    }
}

impl From<PhiTensor> for TensorDoc {
    fn from(p: PhiTensor) -> Self {
        TensorDoc { dim: p.dim(), kind: TensorKind::Phi, data: row_major(p.matrix()) }
    }
}

impl TryFrom<TensorDoc> for Sym4Form {
    type Error = Error;
    fn try_from(doc: TensorDoc) -> Result<Self> {
        expect_kind(&doc, TensorKind::Sym4)?;
        Sym4Form::from_full(doc.dim, &doc.data)
    }
}

impl From<Sym4Form> for TensorDoc {
    fn from(e: Sym4Form) -> Self {
        TensorDoc { dim: e.dim(), kind: TensorKind::Sym4, data: e.to_full() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::biform::kn_square;

    #[test]
    fn biform_round_trip_is_exact() {
        let s = Sym2Form::from_rows(&[&[0.1, 1.0 / 3.0, 0.0], &[1.0 / 3.0, -2.5e-7, 1.1], &[0.0, 1.1, 3.0]]).unwrap();
        let rm = kn_square(&s);
        let text = serde_json::to_string(&rm).unwrap();
        let back: AlgebraicCurvatureTensor = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rm);
    }

    #[test]
    fn sym4_and_sym2_round_trip() {
        let s = Sym2Form::from_rows(&[&[0.7, 0.2], &[0.2, -1.0 / 7.0]]).unwrap();
        let e = Sym4Form::sym_square(&s);
        let text = serde_json::to_string(&e).unwrap();
        assert!(text.contains("\"kind\":\"sym4\""));
        assert_eq!(serde_json::from_str::<Sym4Form>(&text).unwrap(), e);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Sym2Form>(&text).unwrap(), s);
    }

    #[test]
    fn rejects_wrong_kind_and_size() {
        let doc = r#"{"dim":2,"kind":"sym2","data":[1,0,0,1]}"#;
        assert!(serde_json::from_str::<Biform>(doc).is_err());
        assert!(matches!(AnyTensor::from_json(doc).unwrap(), AnyTensor::Sym2(_)));
        let bad = r#"{"dim":3,"kind":"biform","data":[1,0]}"#;
        assert!(AnyTensor::from_json(bad).is_err());
    }
}
