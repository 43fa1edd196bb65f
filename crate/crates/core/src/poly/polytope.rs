//! Convex polytopes in ℝ³ and their Steiner shells.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::complex::PolyhedralComplex;
use super::hull::convex_hull;
use super::quad::{gauss_legendre, segment_integral, triangle_integral};
use crate::{Error, Result, SolverConfig};

/// Oriented triangle with outward unit normal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Facet {
    pub vertices: [usize; 3],
    pub normal: [f64; 3],
    pub area: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeEdge {
    pub vertices: [usize; 2],
    pub facets: [usize; 2],
    pub length: f64,
    /// Angle between the outward normals of the two facets.
    pub exterior_angle: f64,
}

/// Closed convex polytope surface in ℝ³, triangulated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvexPolytope {
    vertices: Vec<[f64; 3]>,
    facets: Vec<Facet>,
    edges: Vec<PolytopeEdge>,
    /// `2π − Σ` incident face angles, one per vertex.
    vertex_angles: Vec<f64>,
}

const CONVEXITY_TOL: f64 = 1e-10;

fn v3(p: &[f64; 3]) -> Vector3<f64> {
    Vector3::new(p[0], p[1], p[2])
}

fn corner_angle(p: &Vector3<f64>, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let (u, w) = (a - p, b - p);
    u.cross(&w).norm().atan2(u.dot(&w))
}

/// Closest point to `p` on triangle `abc`.
pub(crate) fn closest_on_triangle(p: &Vector3<f64>, a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> Vector3<f64> {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}

/// Shell-volume polynomial `c₁r + c₂r² + c₃r³` (the constant term is 0).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SteinerCoefficients {
    /// `[c₀, c₁, c₂, c₃]`.
    pub coefficients: [f64; 4],
    /// Quadrature error estimate (0 for the exact unweighted decomposition).
    pub error_estimate: f64,
}

impl SteinerCoefficients {
    pub fn eval(&self, r: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * r + c)
    }

    /// The cubic coefficient, `⅓∫ α K dA` for a weight `α`.
    pub fn curvature_coefficient(&self) -> f64 {
        self.coefficients[3]
    }

    /// `∫ α K dA = 3 c₃`.
    pub fn curvature_integral(&self) -> f64 {
        3.0 * self.coefficients[3]
    }
}

/// Test function on ℝ³; `None` stands for the constant 1.
pub type Weight<'a> = Option<&'a (dyn Fn(&Vector3<f64>) -> f64 + Sync)>;

/// Smooth convex bodies sampled by [`convex_approximate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexBody {
    Sphere { radius: f64 },
    Ellipsoid { axes: [f64; 3] },
}

impl ConvexBody {
    fn axes(&self) -> [f64; 3] {
        match *self {
            ConvexBody::Sphere { radius } => [radius; 3],
            ConvexBody::Ellipsoid { axes } => axes,
        }
    }

    /// `Σ (xᵢ/aᵢ)² − 1`.
    pub fn implicit(&self, p: &Vector3<f64>) -> f64 {
        let a = self.axes();
        (0..3).map(|i| (p[i] / a[i]).powi(2)).sum::<f64>() - 1.0
    }

    /// Support function `h(u) = |diag(a)·u|`.
    pub fn support(&self, u: &Vector3<f64>) -> f64 {
        let a = self.axes();
        Vector3::new(a[0] * u.x, a[1] * u.y, a[2] * u.z).norm()
    }
}

/// Polytope approximation of a body together with its Hausdorff distance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Approximation {
    pub polytope: ConvexPolytope,
    pub hausdorff: f64,
}

/// `n` points of the Fibonacci lattice on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let t = golden * i as f64;
            Vector3::new(rho * t.cos(), rho * t.sin(), z)
        })
        .collect()
}

impl ConvexPolytope {
    /// Convex hull of a point cloud. Points that are not corners are dropped.
    pub fn from_points(points: &[Vector3<f64>]) -> Result<Self> {
        let tris = convex_hull(points)?;
        let mut remap = BTreeMap::new();
        for f in &tris {
            for &v in f {
                let next = remap.len();
                remap.entry(v).or_insert(next);
            }
        }
        let mut vertices = vec![[0.0; 3]; remap.len()];
        for (&old, &new) in &remap {
            vertices[new] = [points[old].x, points[old].y, points[old].z];
        }
        let tris = tris.iter().map(|f| f.map(|v| remap[&v])).collect();
        Self::from_triangles(vertices, tris)
    }

    /// From a closed triangle mesh. Faces are reoriented outward; the mesh
    /// must be a closed surface whose every edge is convex.
    pub fn from_triangles(vertices: Vec<[f64; 3]>, mut triangles: Vec<[usize; 3]>) -> Result<Self> {
        if vertices.len() < 4 || triangles.len() < 4 {
            return Err(Error::DegenerateHull("a closed polytope needs at least 4 vertices and 4 faces".into()));
        }
        if let Some(f) = triangles.iter().find(|f| f.iter().any(|&v| v >= vertices.len())) {
            return Err(Error::InvalidInput(format!("face {f:?} references a missing vertex")));
        }
        let pts: Vec<Vector3<f64>> = vertices.iter().map(v3).collect();
        let centroid = pts.iter().sum::<Vector3<f64>>() / pts.len() as f64;
        let scale = pts.iter().map(|p| (p - centroid).norm()).fold(0.0, f64::max);
        let mut facets = Vec::with_capacity(triangles.len());
        for (id, f) in triangles.iter_mut().enumerate() {
            let [a, b, c] = f.map(|v| pts[v]);
            let n = (b - a).cross(&(c - a));
            let area = n.norm() / 2.0;
            if area <= 1e-12 * scale * scale {
                return Err(Error::DegenerateSimplex { id, volume: area });
            }
            let mut n = n.normalize();
            if n.dot(&((a + b + c) / 3.0 - centroid)) < 0.0 {
                f.swap(1, 2);
                n = -n;
            }
            facets.push(Facet { vertices: *f, normal: [n.x, n.y, n.z], area });
        }

        let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (k, f) in triangles.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (f[e], f[(e + 1) % 3]);
                edge_faces.entry((a.min(b), a.max(b))).or_default().push(k);
            }
        }
        let mut edges = Vec::with_capacity(edge_faces.len());
        for ((a, b), fs) in edge_faces {
            if fs.len() != 2 {
                return Err(Error::InvalidInput(format!("edge ({a},{b}) has {} faces; surface is not closed", fs.len())));
            }
            let (n1, n2) = (v3(&facets[fs[0]].normal), v3(&facets[fs[1]].normal));
            // Convexity: the far vertex of each face lies below the other face's plane.
            for (f, g) in [(fs[0], fs[1]), (fs[1], fs[0])] {
                let far = triangles[g].iter().copied().find(|&v| v != a && v != b).expect("triangle");
                let h = v3(&facets[f].normal).dot(&(pts[far] - pts[a]));
                if h > CONVEXITY_TOL * scale {
                    return Err(Error::InvalidInput(format!("edge ({a},{b}) is reflex")));
                }
            }
            edges.push(PolytopeEdge {
                vertices: [a, b],
                facets: [fs[0], fs[1]],
                length: (pts[a] - pts[b]).norm(),
                exterior_angle: n1.cross(&n2).norm().atan2(n1.dot(&n2)),
            });
        }
        // Euler characteristic of a sphere.
        let chi = vertices.len() as i64 - edges.len() as i64 + triangles.len() as i64;
        if chi != 2 {
            return Err(Error::InvalidInput(format!("surface has Euler characteristic {chi}, expected 2")));
        }
        let mut face_angle_sum = vec![0.0; vertices.len()];
        for f in &triangles {
            for e in 0..3 {
                let (p, a, b) = (f[e], f[(e + 1) % 3], f[(e + 2) % 3]);
                face_angle_sum[p] += corner_angle(&pts[p], &pts[a], &pts[b]);
            }
        }
        let vertex_angles = face_angle_sum.iter().map(|s| TAU - s).collect();
        Ok(Self { vertices, facets, edges, vertex_angles })
    }

    pub fn cube() -> Self {
        let v: Vec<[f64; 3]> = (0..8).map(|i| [(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]).collect();
        let quads = [[0, 1, 3, 2], [4, 5, 7, 6], [0, 1, 5, 4], [2, 3, 7, 6], [0, 2, 6, 4], [1, 3, 7, 5]];
        let tris = quads.iter().flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]).collect();
        Self::from_triangles(v, tris).expect("cube is convex")
    }

    /// Regular tetrahedron with unit edge.
    pub fn tetrahedron() -> Self {
        let s = 0.5f64.sqrt();
        let v = vec![[0.5, 0.0, -s / 2.0], [-0.5, 0.0, -s / 2.0], [0.0, 0.5, s / 2.0], [0.0, -0.5, s / 2.0]];
        Self::from_triangles(v, vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).expect("tetrahedron is convex")
    }

    pub fn octahedron() -> Self {
        let v = vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]];
        let mut t = Vec::new();
        for x in [0, 1] {
            for y in [2, 3] {
                for z in [4, 5] {
                    t.push([x, y, z]);
                }
            }
        }
        Self::from_triangles(v, t).expect("octahedron is convex")
    }

    /// Geodesic subdivision of the icosahedron, projected to the unit sphere.
    /// Level 0 is the icosahedron; each level splits every triangle in four.
    pub fn icosphere(level: usize) -> Self {
        let (verts, tris) = icosphere_mesh(level);
        Self::from_triangles(verts.clone(), tris).unwrap_or_else(|_| {
            let pts: Vec<_> = verts.iter().map(v3).collect();
            Self::from_points(&pts).expect("sphere points span ℝ³")
        })
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn edges(&self) -> &[PolytopeEdge] {
        &self.edges
    }

    pub fn vertex_angles(&self) -> &[f64] {
        &self.vertex_angles
    }

    pub fn area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    /// `Σ` vertex exterior angles; 4π for any closed convex surface.
    pub fn total_exterior_angle(&self) -> f64 {
        self.vertex_angles.iter().sum()
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidInput(format!("scale factor must be positive, got {lambda}")));
        }
        let v = self.vertices.iter().map(|p| p.map(|x| x * lambda)).collect();
        Self::from_triangles(v, self.facets.iter().map(|f| f.vertices).collect())
    }

    /// Rigid motion `x ↦ q x + t`.
    pub fn transformed(&self, q: &Matrix3<f64>, t: &Vector3<f64>) -> Result<Self> {
        let v = self
            .vertices
            .iter()
            .map(|p| {
                let w = q * v3(p) + t;
                [w.x, w.y, w.z]
            })
            .collect();
        Self::from_triangles(v, self.facets.iter().map(|f| f.vertices).collect())
    }

    /// The boundary surface as an embedded 2-complex.
    pub fn to_complex(&self) -> Result<PolyhedralComplex> {
        PolyhedralComplex::embedded(
            2,
            self.vertices.iter().map(|p| p.to_vec()).collect(),
            self.facets.iter().map(|f| f.vertices.to_vec()).collect(),
        )
    }

    fn point(&self, v: usize) -> Vector3<f64> {
        v3(&self.vertices[v])
    }

    fn contains(&self, p: &Vector3<f64>) -> bool {
        self.facets.iter().all(|f| v3(&f.normal).dot(&(p - self.point(f.vertices[0]))) <= 0.0)
    }

    /// Closest point of the surface to `p`.
    pub fn closest_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        let mut best = (f64::INFINITY, *p);
        for f in &self.facets {
            let [a, b, c] = f.vertices.map(|v| self.point(v));
            let q = closest_on_triangle(p, &a, &b, &c);
            let d = (q - p).norm_squared();
            if d < best.0 {
                best = (d, q);
            }
        }
        best.1
    }

    /// Exact shell coefficients for weight 1: facet prisms give the area,
    /// edge wedges `½Σ ℓθ`, vertex cones `⅓Σ Ω`.
    pub fn steiner_exact(&self) -> SteinerCoefficients {
        let c1 = self.area();
        let c2 = 0.5 * self.edges.iter().map(|e| e.length * e.exterior_angle).sum::<f64>();
        let c3 = self.total_exterior_angle() / 3.0;
        SteinerCoefficients { coefficients: [0.0, c1, c2, c3], error_estimate: 0.0 }
    }

    fn steiner_weighted_with(&self, weight: &(dyn Fn(&Vector3<f64>) -> f64 + Sync), order: usize) -> [f64; 4] {
        // Points of the shell over a cell have their foot point on that cell,
        // so the weight is constant along each normal ray and the ray factor
        // integrates exactly: r for prisms, θr²/2 for wedges, Ωr³/3 for cones.
        let rule = gauss_legendre(order);
        let c1: f64 = self
            .facets
            .iter()
            .map(|f| {
                let [a, b, c] = f.vertices.map(|v| self.point(v));
                triangle_integral(&a, &b, &c, &rule, weight)
            })
            .sum();
        let c2: f64 = self
            .edges
            .iter()
            .map(|e| 0.5 * e.exterior_angle * segment_integral(&self.point(e.vertices[0]), &self.point(e.vertices[1]), &rule, weight))
            .sum();
        let c3: f64 = self.vertex_angles.iter().enumerate().map(|(v, om)| om * weight(&self.point(v)) / 3.0).sum();
        [0.0, c1, c2, c3]
    }

    /// Coefficients of the weighted shell volume, by order-8 quadrature on
    /// each cell; the error estimate compares against order 4.
    pub fn steiner_weighted(&self, weight: &(dyn Fn(&Vector3<f64>) -> f64 + Sync)) -> SteinerCoefficients {
        let hi = self.steiner_weighted_with(weight, 8);
        let lo = self.steiner_weighted_with(weight, 4);
        let err = hi.iter().zip(&lo).map(|(a, b)| (a - b).abs()).sum();
        SteinerCoefficients { coefficients: hi, error_estimate: err }
    }

    /// Volume of the outer shell `C_r` weighted by the test function at the
    /// foot point (exact for weight 1).
    pub fn steiner_shell_volume(&self, weight: Weight, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::NonPositiveRadius(r));
        }
        let c = match weight {
            None => self.steiner_exact(),
            Some(w) => self.steiner_weighted(w),
        };
        Ok(c.eval(r))
    }

    /// Fit `c₀ + c₁r + c₂r² + c₃r³` through shell volumes at `radii`.
    pub fn steiner_coefficients(&self, weight: Weight, radii: &[f64]) -> Result<SteinerCoefficients> {
        if radii.len() < 4 {
            return Err(Error::InvalidInput(format!("need at least 4 radii, got {}", radii.len())));
        }
        let vals = radii.iter().map(|&r| self.steiner_shell_volume(weight, r)).collect::<Result<Vec<_>>>()?;
        let v = DMatrix::from_fn(radii.len(), 4, |i, j| radii[i].powi(j as i32));
        let svd = v.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if cond > 1e12 {
            return Err(Error::IllConditioned(cond));
        }
        let c = svd.solve(&DVector::from_vec(vals), 0.0).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let err = match weight {
            None => 0.0,
            Some(w) => self.steiner_weighted(w).error_estimate,
        };
        Ok(SteinerCoefficients { coefficients: [c[0], c[1], c[2], c[3]], error_estimate: err })
    }

    /// Hit-rate estimate of the (weighted) shell volume and its standard
    /// error, sampling the bounding box grown by `r`.
    pub fn shell_volume_monte_carlo(&self, weight: Weight, r: f64, samples: usize, config: &SolverConfig) -> Result<(f64, f64)> {
        if !(r > 0.0) {
            return Err(Error::NonPositiveRadius(r));
        }
        let mut lo = Vector3::repeat(f64::INFINITY);
        let mut hi = Vector3::repeat(f64::NEG_INFINITY);
        for p in &self.vertices {
            lo = lo.inf(&v3(p));
            hi = hi.sup(&v3(p));
        }
        lo -= Vector3::repeat(r);
        hi += Vector3::repeat(r);
        let ext = hi - lo;
        let box_vol = ext.x * ext.y * ext.z;
        let mut rng = config.rng(0x57e1);
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..samples {
            let p = lo + Vector3::new(rng.gen::<f64>() * ext.x, rng.gen::<f64>() * ext.y, rng.gen::<f64>() * ext.z);
            let mut val = 0.0;
            if !self.contains(&p) {
                let foot = self.closest_point(&p);
                if (p - foot).norm() < r {
                    val = weight.map_or(1.0, |w| w(&foot));
                }
            }
            s1 += val;
            s2 += val * val;
        }
        let n = samples as f64;
        let mean = s1 / n;
        let var = (s2 / n - mean * mean).max(0.0);
        Ok((box_vol * mean, box_vol * (var / n).sqrt()))
    }
}

fn icosphere_mesh(level: usize) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vector3<f64>> = [
        [-1.0, t, 0.0], [1.0, t, 0.0], [-1.0, -t, 0.0], [1.0, -t, 0.0],
        [0.0, -1.0, t], [0.0, 1.0, t], [0.0, -1.0, -t], [0.0, 1.0, -t],
        [t, 0.0, -1.0], [t, 0.0, 1.0], [-t, 0.0, -1.0], [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|p| Vector3::new(p[0], p[1], p[2]).normalize())
    .collect();
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        for f in &tris {
            let mut m = [0usize; 3];
            for e in 0..3 {
                let (a, b) = (f[e], f[(e + 1) % 3]);
                m[e] = *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                    verts.push(((verts[a] + verts[b]) / 2.0).normalize());
                    verts.len() - 1
                });
            }
            next.push([f[0], m[0], m[2]]);
            next.push([f[1], m[1], m[0]]);
            next.push([f[2], m[2], m[1]]);
            next.push(m);
        }
        tris = next;
    }
    (verts.iter().map(|p| [p.x, p.y, p.z]).collect(), tris)
}

/// Convex hull of `n_points` Fibonacci points on the body's boundary,
/// rotated by a seeded random rotation. The Hausdorff distance is
/// `max_u h_body(u) − h_hull(u)` over the facet normals and a dense direction
/// set; for a sphere the maximum sits at a facet normal, so it is exact.
pub fn convex_approximate(body: ConvexBody, n_points: usize, config: &SolverConfig) -> Result<Approximation> {
    if n_points < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 points in ℝ³, got {n_points}")));
    }
    for a in body.axes() {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidInput(format!("body axes must be positive, got {a}")));
        }
    }
    let q = crate::tensor::random_orthogonal(3, &mut config.rng(0xc0a7));
    let q = Matrix3::from_fn(|i, j| q[(i, j)]);
    let axes = body.axes();
    let pts: Vec<Vector3<f64>> = fibonacci_sphere(n_points)
        .into_iter()
        .map(|u| {
            let w = q * u;
            Vector3::new(axes[0] * w.x, axes[1] * w.y, axes[2] * w.z)
        })
        .collect();
    let polytope = ConvexPolytope::from_points(&pts)?;
    let support = |u: &Vector3<f64>| polytope.vertices.iter().map(|p| v3(p).dot(u)).fold(f64::NEG_INFINITY, f64::max);
    let mut dirs: Vec<Vector3<f64>> = polytope.facets.iter().map(|f| v3(&f.normal)).collect();
    dirs.extend(fibonacci_sphere(4096));
    let hausdorff = dirs.iter().map(|u| body.support(u) - support(u)).fold(0.0, f64::max);
    Ok(Approximation { polytope, hausdorff })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_exact_coefficients() {
        let c = ConvexPolytope::cube().steiner_exact();
        assert!((c.coefficients[1] - 6.0).abs() < 1e-12);
        assert!((c.coefficients[2] - 3.0 * PI).abs() < 1e-12);
        assert!((c.coefficients[3] - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn closest_point_regions() {
        let a = Vector3::zeros();
        let b = Vector3::new(1.0, 0.0, 0.0);
        let c = Vector3::new(0.0, 1.0, 0.0);
        assert!((closest_on_triangle(&Vector3::new(0.2, 0.2, 3.0), &a, &b, &c) - Vector3::new(0.2, 0.2, 0.0)).norm() < 1e-15);
        assert_eq!(closest_on_triangle(&Vector3::new(-1.0, -1.0, 0.0), &a, &b, &c), a);
        let q = closest_on_triangle(&Vector3::new(1.0, 1.0, 0.0), &a, &b, &c);
        assert!((q - Vector3::new(0.5, 0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn icosphere_counts() {
        let p = ConvexPolytope::icosphere(2);
        assert_eq!(p.vertices().len(), 162);
        assert_eq!(p.facets().len(), 320);
        assert!((p.total_exterior_angle() - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn rejects_reflex_mesh() {
        // Octahedron with one apex pushed inward.
        let mut v = ConvexPolytope::octahedron().vertices().to_vec();
        v[4] = [0.0, 0.0, -0.5];
        let tris = ConvexPolytope::octahedron().facets().iter().map(|f| f.vertices).collect();
        assert!(ConvexPolytope::from_triangles(v, tris).is_err());
    }
}
