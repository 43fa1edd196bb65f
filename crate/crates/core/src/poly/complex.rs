//! Euclidean simplicial pseudomanifolds and their angle data.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::tensor::Bivector;
use crate::{Error, Result};

pub const MIN_SIMPLEX_VOLUME: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// Vertex coordinates in some ℝ^N; simplices are flat.
    Embedded(Vec<Vec<f64>>),
    /// Edge lengths of a 2-complex, keyed by sorted vertex pairs.
    Intrinsic { vertex_count: usize, lengths: BTreeMap<(usize, usize), f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "super::io::ComplexDoc", into = "super::io::ComplexDoc")]
pub struct PolyhedralComplex {
    dim: usize,
    geometry: Geometry,
    simplices: Vec<Vec<usize>>,
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// All `k`-element subsets of a sorted slice, in lexicographic order.
pub(crate) fn subsets(s: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(s: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..s.len() {
            if s.len() - i < k - cur.len() {
                break;
            }
            cur.push(s[i]);
            go(s, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(s, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `k`-volume of the simplex spanned by `pts` (k+1 points) via the Gram determinant.
pub(crate) fn simplex_volume(pts: &[&DVector<f64>]) -> f64 {
    let k = pts.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let e: Vec<DVector<f64>> = pts[1..].iter().map(|p| *p - pts[0]).collect();
    let g = DMatrix::from_fn(k, k, |i, j| e[i].dot(&e[j]));
    let fact: f64 = (1..=k).map(|v| v as f64).product();
    g.determinant().max(0.0).sqrt() / fact
}

/// Orthonormal basis of `span(vectors)` by modified Gram–Schmidt.
pub(crate) fn orthonormal_basis(vectors: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &basis {
            w -= b * b.dot(&w);
        }
        for b in &basis {
            w -= b * b.dot(&w);
        }
        let n = w.norm();
        if n > 1e-14 * v.norm().max(1e-300) {
            basis.push(w / n);
        }
    }
    basis
}

fn project_out(v: &DVector<f64>, basis: &[DVector<f64>]) -> DVector<f64> {
    let mut w = v.clone();
    for b in basis {
        w -= b * b.dot(&w);
    }
    w
}

fn angle_between(u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let d = u.dot(v);
    let c = (u.norm_squared() * v.norm_squared() - d * d).max(0.0).sqrt();
    c.atan2(d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudomanifoldReport {
    pub valid: bool,
    /// `(m−1)`-faces with three or more cofaces; allowed but not manifold.
    pub non_manifold_faces: Vec<Vec<usize>>,
    pub boundary_faces: Vec<Vec<usize>>,
    /// Simplices whose link is disconnected.
    pub disconnected_links: Vec<Vec<usize>>,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperedgeReport {
    pub hyperedge: Vec<usize>,
    pub total_angle: f64,
    pub deficit: f64,
    /// `(m−2)`-volume of the hyperedge (1 for vertices).
    pub measure: f64,
    /// Unit simple bivector of the normal plane, canonical sign; `None` when
    /// the normal planes of the adjacent simplices have no clear average.
    pub alpha: Option<Bivector>,
    pub interior: bool,
    pub non_manifold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub holds: bool,
    pub worst: Option<HyperedgeReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureAtom {
    pub hyperedge: Vec<usize>,
    /// Centroid of the hyperedge; empty for intrinsic complexes.
    pub location: Vec<f64>,
    pub mass: f64,
    pub alpha: Option<Bivector>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SingularMeasure {
    pub atoms: Vec<MeasureAtom>,
}

impl SingularMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }
}

impl PolyhedralComplex {
    /// Flat simplices with the given vertex coordinates.
    pub fn embedded(dim: usize, vertices: Vec<Vec<f64>>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let c = Self { dim, geometry: Geometry::Embedded(vertices), simplices: simplices.into_iter().map(sorted).collect() };
        c.check_shape()?;
        Ok(c)
    }

    /// A 2-complex given by triangle edge lengths.
    pub fn intrinsic(vertex_count: usize, triangles: Vec<Vec<usize>>, lengths: impl IntoIterator<Item = ((usize, usize), f64)>) -> Result<Self> {
        let lengths = lengths.into_iter().map(|((a, b), l)| ((a.min(b), a.max(b)), l)).collect();
        let c = Self {
            dim: 2,
            geometry: Geometry::Intrinsic { vertex_count, lengths },
            simplices: triangles.into_iter().map(sorted).collect(),
        };
        c.check_shape()?;
        Ok(c)
    }

    fn check_shape(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidDim { dim: self.dim, reason: "complexes need m ≥ 2" });
        }
        if self.simplices.is_empty() {
            return Err(Error::InvalidInput("complex has no simplices".into()));
        }
        let nv = self.vertex_count();
        if let Geometry::Embedded(v) = &self.geometry {
            let n = v.first().map_or(0, |p| p.len());
            if n < self.dim || v.iter().any(|p| p.len() != n) {
                return Err(Error::InvalidInput(format!("vertices must share an ambient dimension ≥ {}", self.dim)));
            }
        }
        for (id, s) in self.simplices.iter().enumerate() {
            if s.len() != self.dim + 1 {
                return Err(Error::InvalidInput(format!("simplex {id} has {} vertices, expected {}", s.len(), self.dim + 1)));
            }
            if s.windows(2).any(|w| w[0] == w[1]) || s.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidInput(format!("simplex {id} has repeated or out-of-range vertices")));
            }
            if let Geometry::Intrinsic { lengths, .. } = &self.geometry {
                for e in subsets(s, 2) {
                    match lengths.get(&(e[0], e[1])) {
                        Some(l) if *l > 0.0 => {}
                        _ => return Err(Error::InvalidInput(format!("missing or nonpositive length for edge {:?}", e))),
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn vertex_count(&self) -> usize {
        match &self.geometry {
            Geometry::Embedded(v) => v.len(),
            Geometry::Intrinsic { vertex_count, .. } => *vertex_count,
        }
    }

    fn point(&self, v: usize) -> Option<DVector<f64>> {
        match &self.geometry {
            Geometry::Embedded(p) => Some(DVector::from_vec(p[v].clone())),
            Geometry::Intrinsic { .. } => None,
        }
    }

    fn length(&self, a: usize, b: usize) -> f64 {
        match &self.geometry {
            Geometry::Embedded(p) => (DVector::from_vec(p[a].clone()) - DVector::from_vec(p[b].clone())).norm(),
            Geometry::Intrinsic { lengths, .. } => lengths[&(a.min(b), a.max(b))],
        }
    }

    /// Volume of a face given by sorted vertex ids.
    pub fn face_volume(&self, face: &[usize]) -> f64 {
        match &self.geometry {
            Geometry::Embedded(_) => {
                let pts: Vec<DVector<f64>> = face.iter().map(|&v| self.point(v).expect("embedded")).collect();
                simplex_volume(&pts.iter().collect::<Vec<_>>())
            }
            Geometry::Intrinsic { .. } => match face.len() {
                1 => 1.0,
                2 => self.length(face[0], face[1]),
                _ => {
                    let (a, b, c) = (self.length(face[1], face[2]), self.length(face[0], face[2]), self.length(face[0], face[1]));
                    heron(a, b, c)
                }
            },
        }
    }

    fn check_volumes(&self) -> Result<()> {
        for (id, s) in self.simplices.iter().enumerate() {
            let volume = self.face_volume(s);
            if !(volume >= MIN_SIMPLEX_VOLUME) {
                return Err(Error::DegenerateSimplex { id, volume });
            }
        }
        Ok(())
    }

    /// Map from each `(k−1)`-face (k vertices) to the top simplices containing it.
    fn cofaces(&self, k: usize) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (id, s) in self.simplices.iter().enumerate() {
            for f in subsets(s, k) {
                map.entry(f).or_default().push(id);
            }
        }
        map
    }

    /// Face-sharing and link-connectivity check.
    pub fn validate(&self) -> Result<PseudomanifoldReport> {
        self.check_volumes()?;
        let m = self.dim;
        let mut report = PseudomanifoldReport {
            valid: true,
            non_manifold_faces: Vec::new(),
            boundary_faces: Vec::new(),
            disconnected_links: Vec::new(),
            violations: Vec::new(),
        };
        let unique: BTreeSet<&Vec<usize>> = self.simplices.iter().collect();
        if unique.len() != self.simplices.len() {
            report.valid = false;
            report.violations.push("duplicate top simplices".into());
        }
        for (face, co) in self.cofaces(m) {
            match co.len() {
                1 => report.boundary_faces.push(face),
                2 => {}
                _ => report.non_manifold_faces.push(face),
            }
        }
        // Links of faces of dimension ≤ m−2 must be connected; the link of a
        // codimension-1 face is a point set and is exempt.
        for k in 1..m {
            for (face, co) in self.cofaces(k) {
                if !link_connected(&self.simplices, &face, &co) {
                    report.valid = false;
                    report.violations.push(format!("link of {:?} is disconnected", face));
                    report.disconnected_links.push(face);
                }
            }
        }
        // Every vertex must be used.
        let used: BTreeSet<usize> = self.simplices.iter().flatten().copied().collect();
        if used.len() != self.vertex_count() {
            report.violations.push(format!("{} unused vertices ignored", self.vertex_count() - used.len()));
        }
        Ok(report)
    }

    /// Angle of simplex `s` at its `(m−2)`-face `h`.
    fn angle_at(&self, s: &[usize], h: &[usize]) -> f64 {
        let others: Vec<usize> = s.iter().copied().filter(|v| !h.contains(v)).collect();
        let (u, v) = (others[0], others[1]);
        match &self.geometry {
            Geometry::Embedded(_) => {
                let h0 = self.point(h[0]).expect("embedded");
                let dirs: Vec<DVector<f64>> = h[1..].iter().map(|&w| self.point(w).expect("embedded") - &h0).collect();
                let basis = orthonormal_basis(&dirs);
                let pu = project_out(&(self.point(u).expect("embedded") - &h0), &basis);
                let pv = project_out(&(self.point(v).expect("embedded") - &h0), &basis);
                angle_between(&pu, &pv)
            }
            Geometry::Intrinsic { .. } => {
                let w = h[0];
                let (b, c, a) = (self.length(w, u), self.length(w, v), self.length(u, v));
                (4.0 * heron(a, b, c)).atan2(b * b + c * c - a * a)
            }
        }
    }

    /// Unit simple bivector of the 2-plane in `span(s)` orthogonal to `h`.
    fn normal_plane(&self, s: &[usize], h: &[usize]) -> Option<Bivector> {
        let h0 = self.point(h[0])?;
        let dirs: Vec<DVector<f64>> = h[1..].iter().map(|&w| self.point(w).expect("embedded") - &h0).collect();
        let basis = orthonormal_basis(&dirs);
        let others: Vec<DVector<f64>> = s
            .iter()
            .filter(|v| !h.contains(v))
            .map(|&v| project_out(&(self.point(v).expect("embedded") - &h0), &basis))
            .collect();
        let plane = orthonormal_basis(&others);
        if plane.len() != 2 {
            return None;
        }
        Bivector::wedge(&plane[0], &plane[1]).ok()
    }

    fn alpha(&self, h: &[usize], co: &[usize]) -> Option<Bivector> {
        if matches!(self.geometry, Geometry::Intrinsic { .. }) {
            return Some(Bivector::basis(2, 0, 1));
        }
        let planes: Vec<Bivector> = co.iter().filter_map(|&id| self.normal_plane(&self.simplices[id], h)).collect();
        let first = planes.first()?.as_vector();
        let mut sum = first.clone() * 0.0;
        for p in &planes {
            let v = p.as_vector();
            sum += if v.dot(&first) < 0.0 { -v } else { v };
        }
        // Nearest simple unit bivector: top singular pair of the skew matrix.
        let avg = Bivector::new(planes[0].dim(), sum.iter().copied().collect()).ok()?;
        if avg.norm() < 1e-12 {
            return None;
        }
        let (x, y) = crate::cone::plane_of(&avg);
        Some(Bivector::wedge(&x, &y).ok()?.canonical_sign())
    }

    /// Angle sums around every `(m−2)`-face, in lexicographic face order.
    pub fn hyperedge_angles(&self) -> Result<Vec<HyperedgeReport>> {
        self.check_volumes()?;
        let m = self.dim;
        let boundary: BTreeSet<Vec<usize>> = self.cofaces(m).into_iter().filter(|(_, c)| c.len() == 1).map(|(f, _)| f).collect();
        let non_manifold: BTreeSet<Vec<usize>> = self.cofaces(m).into_iter().filter(|(_, c)| c.len() > 2).map(|(f, _)| f).collect();
        let mut out = Vec::new();
        for (h, co) in self.cofaces(m - 1) {
            let total: f64 = co.iter().map(|&id| self.angle_at(&self.simplices[id], &h)).sum();
            let in_face = |set: &BTreeSet<Vec<usize>>| set.iter().any(|f| h.iter().all(|v| f.contains(v)));
            out.push(HyperedgeReport {
                measure: self.face_volume(&h),
                alpha: self.alpha(&h, &co),
                total_angle: total,
                deficit: TAU - total,
                interior: !in_face(&boundary),
                non_manifold: in_face(&non_manifold),
                hyperedge: h,
            });
        }
        Ok(out)
    }

    /// Curvature ≥ 0 test: every interior hyperedge has total angle ≤ 2π.
    pub fn curvature_bound_check(&self, kappa: f64) -> Result<BoundCheck> {
        if kappa != 0.0 {
            return Err(Error::InvalidInput("only κ = 0 (Euclidean simplices) is supported".into()));
        }
        let reports = self.hyperedge_angles()?;
        let worst = reports
            .into_iter()
            .filter(|r| r.interior)
            .max_by(|a, b| a.total_angle.total_cmp(&b.total_angle));
        let holds = worst.as_ref().is_none_or(|w| w.total_angle <= TAU + 1e-9);
        Ok(BoundCheck { holds, worst })
    }

    /// Atoms `h·(2π − ω)·α²` on interior hyperedges with nonzero deficit.
    pub fn singular_curvature(&self) -> Result<SingularMeasure> {
        let atoms = self
            .hyperedge_angles()?
            .into_iter()
            .filter(|r| r.interior)
            .map(|r| MeasureAtom {
                location: self.centroid(&r.hyperedge),
                mass: r.measure * r.deficit,
                alpha: r.alpha.clone(),
                hyperedge: r.hyperedge,
            })
            .filter(|a| a.mass.abs() > 1e-12)
            .collect();
        Ok(SingularMeasure { atoms })
    }

    fn centroid(&self, face: &[usize]) -> Vec<f64> {
        match &self.geometry {
            Geometry::Embedded(p) => {
                let n = p[0].len();
                (0..n).map(|k| face.iter().map(|&v| p[v][k]).sum::<f64>() / face.len() as f64).collect()
            }
            Geometry::Intrinsic { .. } => Vec::new(),
        }
    }

    /// Apply `x ↦ q x + t` to an embedded complex.
    pub fn transformed(&self, q: &DMatrix<f64>, t: &DVector<f64>) -> Result<Self> {
        let Geometry::Embedded(p) = &self.geometry else {
            return Err(Error::InvalidInput("rigid motions need an embedded complex".into()));
        };
        let moved = p.iter().map(|v| (q * DVector::from_vec(v.clone()) + t).iter().copied().collect()).collect();
        Ok(Self { dim: self.dim, geometry: Geometry::Embedded(moved), simplices: self.simplices.clone() })
    }
}

fn heron(a: f64, b: f64, c: f64) -> f64 {
    // Kahan's stable form with a ≥ b ≥ c.
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

/// Connectivity of the link of `face` (pieces `σ∖face` joined when they share a vertex).
fn link_connected(simplices: &[Vec<usize>], face: &[usize], co: &[usize]) -> bool {
    let pieces: Vec<Vec<usize>> = co.iter().map(|&id| simplices[id].iter().copied().filter(|v| !face.contains(v)).collect()).collect();
    let mut seen = vec![false; pieces.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..pieces.len() {
            if !seen[j] && pieces[i].iter().any(|v| pieces[j].contains(v)) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// `Σ mass · test(location)`.
pub fn pair_measure(mu: &SingularMeasure, test: impl Fn(&[f64]) -> f64) -> f64 {
    mu.atoms.iter().map(|a| a.mass * test(&a.location)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerate() {
        assert_eq!(subsets(&[1, 4, 7], 2), vec![vec![1, 4], vec![1, 7], vec![4, 7]]);
        assert_eq!(subsets(&[1, 4, 7], 3), vec![vec![1, 4, 7]]);
        assert_eq!(subsets(&[2, 3, 5, 8], 1).len(), 4);
    }

    #[test]
    fn heron_equilateral() {
        assert!((heron(1.0, 1.0, 1.0) - 3f64.sqrt() / 4.0).abs() < 1e-15);
    }
}
