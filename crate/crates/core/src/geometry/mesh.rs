//! Triangulation of the body as the hull of the Maxwell curve and the unit
//! circle, closed by the base disk.
//!
//! Each supporting plane of the side surface touches the circle at angle `θ`
//! with `cos θ = p₁/v(p₁)` and the curve at `x₁ = v'(p₁)`, so the generators
//! can be ordered by `θ` on both curves and zipped together.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::ExtremalSolution;

use super::body::BodyEvaluator;

#[derive(Debug, Clone, Serialize)]
pub struct BodyMesh {
    pub vertices: Vec<[f64; 3]>,
    /// Counter-clockwise seen from outside.
    pub faces: Vec<[usize; 3]>,
    pub height: f64,
    pub p0: f64,
    pub n_profile: usize,
    pub n_circle: usize,
}

struct CurveVertex {
    x1: f64,
    z: f64,
    /// Smallest circle angle whose generator ends at this vertex.
    key: f64,
}

/// Vertices of the Maxwell curve from `x₁ = 1` to `x₁ = −1`.
fn curve_vertices(sol: &ExtremalSolution, n_profile: usize) -> Result<Vec<CurveVertex>> {
    let mut right = Vec::with_capacity(n_profile);
    for k in (0..n_profile).rev() {
        let p = if k + 1 == n_profile {
            sol.p0
        } else {
            sol.r + (sol.p0 - sol.r) * k as f64 / (n_profile - 1) as f64
        };
        let a = sol.eval(p)?;
        let vertex = if k + 1 == n_profile {
            CurveVertex { x1: 1.0, z: 0.0, key: 0.0 }
        } else if k == 0 {
            CurveVertex {
                x1: sol.slope0,
                z: -sol.M,
                key: (p / a.v).acos(),
            }
        } else {
            CurveVertex {
                x1: a.vp,
                z: p * a.vp - a.v,
                key: (p / a.v).acos(),
            }
        };
        right.push(vertex);
    }
    let n_flat = (n_profile / 4).max(1);
    let mut out = right;
    for m in 1..=n_flat {
        out.push(CurveVertex {
            x1: sol.slope0 * (1.0 - 2.0 * m as f64 / (n_flat + 1) as f64),
            z: -sol.M,
            key: FRAC_PI_2,
        });
    }
    for k in 0..n_profile {
        let v = &out[n_profile - 1 - k];
        // the left corner is first reached by the generator through (0, 1, 0)
        let key = if k == 0 { FRAC_PI_2 } else { PI - v.key };
        out.push(CurveVertex { x1: -v.x1, z: v.z, key });
    }
    Ok(out)
}

/// Triangulated body for `n_profile ≥ 2` curve points per side and about
/// `n_circle ≥ 4` points on the circle.
pub fn build_mesh(sol: &ExtremalSolution, n_profile: usize, n_circle: usize) -> Result<BodyMesh> {
    if n_profile < 2 || n_circle < 4 {
        return Err(Error::InvalidInput(format!(
            "need n_profile >= 2 and n_circle >= 4, got {n_profile} and {n_circle}"
        )));
    }
    let curve = curve_vertices(sol, n_profile)?;
    let nc = curve.len();
    let mut half = (n_circle / 2).max(2);
    half += half % 2;
    let angles: Vec<f64> = (0..=half)
        .map(|i| if 2 * i == half { FRAC_PI_2 } else { PI * i as f64 / half as f64 })
        .collect();

    let mut vertices: Vec<[f64; 3]> = curve.iter().map(|c| [c.x1, 0.0, c.z]).collect();
    let mut upper = vec![0; half + 1];
    let mut lower = vec![0; half + 1];
    upper[0] = 0;
    lower[0] = 0;
    upper[half] = nc - 1;
    lower[half] = nc - 1;
    for i in 1..half {
        let (s, c) = if 2 * i == half { (1.0, 0.0) } else { angles[i].sin_cos() };
        upper[i] = vertices.len();
        vertices.push([c, s, 0.0]);
        lower[i] = vertices.len();
        vertices.push([c, -s, 0.0]);
    }
    let center = vertices.len();
    vertices.push([0.0, 0.0, 0.0]);

    let mut faces = Vec::new();
    for ring in [&upper, &lower] {
        let (mut j, mut i) = (0, 0);
        while j + 1 < nc || i < half {
            // the ring starts and ends on curve vertices, which must not fan
            // out within the symmetry plane
            let advance_curve = if i == 0 || j + 1 == nc {
                false
            } else if i + 1 == half {
                true
            } else {
                curve[j + 1].key < angles[i + 1]
            };
            if advance_curve {
                faces.push([j, j + 1, ring[i]]);
                j += 1;
            } else {
                faces.push([j, ring[i], ring[i + 1]]);
                i += 1;
            }
        }
    }
    let mut rim: Vec<usize> = upper.clone();
    rim.extend(lower[1..half].iter().rev());
    for k in 0..rim.len() {
        faces.push([center, rim[k], rim[(k + 1) % rim.len()]]);
    }
    faces.retain(|f| f[0] != f[1] && f[1] != f[2] && f[0] != f[2]);

    let inside = [0.0, 0.0, -0.5 * sol.M];
    for f in &mut faces {
        if orientation(&vertices, f, inside) < 0.0 {
            f.swap(1, 2);
        }
    }
    Ok(BodyMesh {
        vertices,
        faces,
        height: sol.M,
        p0: sol.p0,
        n_profile,
        n_circle,
    })
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Sign of the face normal against the direction from `inside` to the face.
fn orientation(vertices: &[[f64; 3]], f: &[usize; 3], inside: [f64; 3]) -> f64 {
    let [a, b, c] = f.map(|k| vertices[k]);
    let n = cross(sub(b, a), sub(c, a));
    let centroid = [
        (a[0] + b[0] + c[0]) / 3.0,
        (a[1] + b[1] + c[1]) / 3.0,
        (a[2] + b[2] + c[2]) / 3.0,
    ];
    let d = sub(centroid, inside);
    n[0] * d[0] + n[1] * d[1] + n[2] * d[2]
}

impl BodyMesh {
    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Vertex bounds, consistent orientation and closedness: every edge is
    /// used exactly once in each direction.
    pub fn check(&self) -> Result<()> {
        for (k, v) in self.vertices.iter().enumerate() {
            if v[0] * v[0] + v[1] * v[1] > 1.0 + 1e-9 || v[2] < -self.height - 1e-9 || v[2] > 1e-9 {
                return Err(Error::Validity(format!("vertex {k} = {v:?} out of bounds")));
            }
        }
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &self.faces {
            for e in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                *edges.entry(e).or_default() += 1;
            }
        }
        for (&(a, b), &n) in &edges {
            if n != 1 || edges.get(&(b, a)) != Some(&1) {
                return Err(Error::Validity(format!(
                    "edge ({a}, {b}) is not shared by exactly two consistently oriented faces"
                )));
            }
        }
        Ok(())
    }

    /// Faces of the side surface, i.e. all faces not in the base plane.
    pub fn side_faces(&self) -> impl Iterator<Item = &[usize; 3]> {
        self.faces
            .iter()
            .filter(|f| f.iter().any(|&k| self.vertices[k][2] != 0.0))
    }

    /// Largest `|u(c) − z(c)|` over the centroids `c` of every `stride`-th side
    /// face.
    pub fn max_centroid_deviation(&self, body: &BodyEvaluator<'_>, stride: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for f in self.side_faces().step_by(stride.max(1)) {
            let c = f.iter().fold([0.0; 3], |acc, &k| {
                let v = self.vertices[k];
                [acc[0] + v[0] / 3.0, acc[1] + v[1] / 3.0, acc[2] + v[2] / 3.0]
            });
            worst = worst.max((body.evaluate(c[0], c[1])? - c[2]).abs());
        }
        Ok(worst)
    }

    /// Largest `|u(x) − z|` over the vertices of the side surface.
    pub fn max_vertex_deviation(&self, body: &BodyEvaluator<'_>) -> Result<f64> {
        let mut worst: f64 = 0.0;
        // the centre of the base cap is the only vertex off the graph of u
        for v in &self.vertices[..self.vertices.len() - 1] {
            worst = worst.max((body.evaluate(v[0], v[1])? - v[2]).abs());
        }
        Ok(worst)
    }
}
