//! Named example complexes and polytope families.

use nalgebra::Vector3;
use rand_distr::{Distribution, StandardNormal};

use super::complex::PolyhedralComplex;
use super::polytope::ConvexPolytope;
use crate::{Error, Result, SolverConfig};

pub const BUILTIN_COMPLEXES: &[&str] = &[
    "cube",
    "tetrahedron",
    "octahedron",
    "icosphere:<level>",
    "flat-square",
    "flat-torus:<n>",
    "saddle7",
    "two-triangles-at-vertex",
    "three-triangles-on-edge",
    "simplex4-boundary",
];

fn parse_arg(name: &str, prefix: &str) -> Option<Result<usize>> {
    let rest = name.strip_prefix(prefix)?;
    Some(rest.parse().map_err(|_| Error::InvalidInput(format!("bad parameter in `{name}`"))))
}

/// Convex built-ins usable for Steiner studies.
pub fn builtin_polytope(name: &str) -> Result<ConvexPolytope> {
    match name {
        "cube" => Ok(ConvexPolytope::cube()),
        "tetrahedron" => Ok(ConvexPolytope::tetrahedron()),
        "octahedron" => Ok(ConvexPolytope::octahedron()),
        _ => match parse_arg(name, "icosphere:") {
            Some(level) => {
                let level = level?;
                if level > 7 {
                    return Err(Error::InvalidInput(format!("icosphere level {level} is too large (max 7)")));
                }
                Ok(ConvexPolytope::icosphere(level))
            }
            None => Err(Error::InvalidInput(format!("unknown polytope `{name}`"))),
        },
    }
}

pub fn builtin_complex(name: &str) -> Result<PolyhedralComplex> {
    match name {
        "flat-square" => PolyhedralComplex::embedded(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![0.5, 0.5]],
            vec![vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![3, 0, 4]],
        ),
        "saddle7" => saddle(7),
        "two-triangles-at-vertex" => PolyhedralComplex::embedded(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
            vec![vec![0, 1, 2], vec![0, 3, 4]],
        ),
        "three-triangles-on-edge" => PolyhedralComplex::embedded(
            2,
            vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.5, 1.0, 0.0], vec![0.5, -0.5, 0.8], vec![0.5, -0.5, -0.8]],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]],
        ),
        "simplex4-boundary" => {
            let vertices = (0..5).map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
            let simplices = (0..5).map(|skip| (0..5).filter(|&v| v != skip).collect()).collect();
            PolyhedralComplex::embedded(3, vertices, simplices)
        }
        _ => {
            if let Some(n) = parse_arg(name, "flat-torus:") {
                return flat_torus(n?);
            }
            builtin_polytope(name)?.to_complex()
        }
    }
}

/// `k` unit equilateral triangles around a central vertex.
pub fn saddle(k: usize) -> Result<PolyhedralComplex> {
    if k < 3 {
        return Err(Error::InvalidInput(format!("a vertex star needs at least 3 triangles, got {k}")));
    }
    let ring = |i: usize| 1 + i % k;
    let tris = (0..k).map(|i| vec![0, ring(i), ring(i + 1)]).collect();
    let lengths = (0..k).flat_map(|i| [((0, ring(i)), 1.0), ((ring(i), ring(i + 1)), 1.0)]);
    PolyhedralComplex::intrinsic(k + 1, tris, lengths)
}

/// `n × n` periodic grid of unit squares cut along one diagonal.
pub fn flat_torus(n: usize) -> Result<PolyhedralComplex> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("flat torus needs n ≥ 3, got {n}")));
    }
    let id = |i: usize, j: usize| (i % n) * n + (j % n);
    let mut tris = Vec::new();
    let mut lengths = Vec::new();
    for i in 0..n {
        for j in 0..n {
            tris.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tris.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            lengths.push(((id(i, j), id(i + 1, j)), 1.0));
            lengths.push(((id(i, j), id(i, j + 1)), 1.0));
            lengths.push(((id(i, j), id(i + 1, j + 1)), 2f64.sqrt()));
        }
    }
    PolyhedralComplex::intrinsic(n * n, tris, lengths)
}

/// Member `index` of a seeded family: the hull of `n` points drawn from a
/// random anisotropic Gaussian.
pub fn random_polytope(n: usize, index: u64, config: &SolverConfig) -> Result<ConvexPolytope> {
    let mut rng = config.rng(0x9017_0000 | index);
    let axes: Vec<f64> = (0..3).map(|_| 0.5 + rand::Rng::gen::<f64>(&mut rng)).collect();
    let pts: Vec<Vector3<f64>> = (0..n.max(4))
        .map(|_| {
            let g: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            Vector3::new(axes[0] * g[0], axes[1] * g[1], axes[2] * g[2])
        })
        .collect();
    ConvexPolytope::from_points(&pts)
}
