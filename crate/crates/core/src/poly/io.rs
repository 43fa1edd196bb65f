//! Complex input: OFF text and a JSON document.

use serde::{Deserialize, Serialize};

use super::complex::{Geometry, PolyhedralComplex};
use crate::{Error, Result};

/// JSON form of a complex. Embedded complexes carry `vertices`; intrinsic
/// 2-complexes carry `vertex_count` and `lengths` as `[i, j, length]` rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<(usize, usize, f64)>>,
    pub simplices: Vec<Vec<usize>>,
}

impl TryFrom<ComplexDoc> for PolyhedralComplex {
    type Error = Error;

    fn try_from(d: ComplexDoc) -> Result<Self> {
        match (d.vertices, d.vertex_count, d.lengths) {
            (Some(v), None, None) => PolyhedralComplex::embedded(d.dim, v, d.simplices),
            (None, Some(n), Some(l)) => {
                if d.dim != 2 {
                    return Err(Error::InvalidDim { dim: d.dim, reason: "intrinsic complexes must have m = 2" });
                }
                PolyhedralComplex::intrinsic(n, d.simplices, l.into_iter().map(|(a, b, len)| ((a, b), len)))
            }
            _ => Err(Error::InvalidInput("give either `vertices` or both `vertex_count` and `lengths`".into())),
        }
    }
}

impl From<PolyhedralComplex> for ComplexDoc {
    fn from(c: PolyhedralComplex) -> Self {
        let simplices = c.simplices().to_vec();
        match c.geometry() {
            Geometry::Embedded(v) => ComplexDoc { dim: c.dim(), vertices: Some(v.clone()), vertex_count: None, lengths: None, simplices },
            Geometry::Intrinsic { vertex_count, lengths } => ComplexDoc {
                dim: c.dim(),
                vertices: None,
                vertex_count: Some(*vertex_count),
                lengths: Some(lengths.iter().map(|(&(a, b), &l)| (a, b, l)).collect()),
                simplices,
            },
        }
    }
}

/// Parsed OFF surface: vertex coordinates and triangles (polygons are fanned).
#[derive(Debug, Clone, PartialEq)]
pub struct OffMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

pub fn parse_off(text: &str) -> Result<OffMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let bad = |n: usize, msg: &str| Error::InvalidInput(format!("OFF line {n}: {msg}"));
    let (mut n, mut line) = lines.next().ok_or_else(|| Error::InvalidInput("empty OFF input".into()))?;
    if let Some(rest) = line.strip_prefix("OFF") {
        if rest.trim().is_empty() {
            (n, line) = lines.next().ok_or_else(|| bad(n, "missing counts"))?;
        } else {
            line = rest.trim();
        }
    }
    let counts: Vec<usize> = line.split_whitespace().map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad(n, "bad counts"))?;
    if counts.len() < 2 {
        return Err(bad(n, "expected `vertices faces [edges]`"));
    }
    let (nv, nf) = (counts[0], counts[1]);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, line) = lines.next().ok_or_else(|| Error::InvalidInput("OFF input ends inside the vertex list".into()))?;
        let v: Vec<f64> = line.split_whitespace().map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad(n, "bad coordinate"))?;
        if v.len() != 3 || !v.iter().all(|x| x.is_finite()) {
            return Err(bad(n, "expected three finite coordinates"));
        }
        vertices.push([v[0], v[1], v[2]]);
    }
    let mut triangles = Vec::new();
    for _ in 0..nf {
        let (n, line) = lines.next().ok_or_else(|| Error::InvalidInput("OFF input ends inside the face list".into()))?;
        let f: Vec<usize> = line.split_whitespace().map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad(n, "bad face index"))?;
        let k = *f.first().ok_or_else(|| bad(n, "empty face"))?;
        if k < 3 || f.len() < k + 1 {
            return Err(bad(n, "face needs at least 3 indices"));
        }
        let idx = &f[1..=k];
        if idx.iter().any(|&i| i >= nv) {
            return Err(bad(n, "face index out of range"));
        }
        for t in 1..k - 1 {
            triangles.push([idx[0], idx[t], idx[t + 1]]);
        }
    }
    if let Some((n, _)) = lines.next() {
        return Err(bad(n, "trailing content"));
    }
    Ok(OffMesh { vertices, triangles })
}

impl OffMesh {
    pub fn to_complex(&self) -> Result<PolyhedralComplex> {
        PolyhedralComplex::embedded(2, self.vertices.iter().map(|p| p.to_vec()).collect(), self.triangles.iter().map(|t| t.to_vec()).collect())
    }
}

/// Parse a complex from JSON (if the text starts with `{`) or OFF.
pub fn parse_complex(text: &str) -> Result<PolyhedralComplex> {
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(text)?)
    } else {
        parse_off(text)?.to_complex()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn off_quads_are_fanned() {
        let text = "OFF\n# square\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        let m = parse_off(text).unwrap();
        assert_eq!(m.triangles, vec![[0, 1, 2], [0, 2, 3]]);
        assert!(parse_off("OFF\n1 0\n0 0\n").is_err());
    }

    #[test]
    fn json_roundtrip_intrinsic() {
        let c = PolyhedralComplex::intrinsic(3, vec![vec![0, 1, 2]], [((0, 1), 1.0), ((1, 2), 1.0), ((0, 2), 1.0)]).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(parse_complex(&text).unwrap(), c);
    }
}
