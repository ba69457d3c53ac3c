//! Uniform 1D meshes and conforming curvilinear quadrilateral meshes.
//!
//! Nodal data of a 2D element is stored with the first reference index
//! running fastest: node `(i, j)` of element `e` sits at `e·n² + j·n + i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sbp::SbpOperator;
use crate::systems::Normal;

/// Boundary treatment of the outer faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Wall,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    pub left: f64,
    pub right: f64,
    pub elements: usize,
    pub boundary: Boundary,
}

impl Mesh1D {
    pub fn new(left: f64, right: f64, elements: usize, boundary: Boundary) -> Result<Self> {
        if elements == 0 {
            return Err(Error::InvalidParameter("mesh needs at least one element".into()));
        }
        if !(right > left) {
            return Err(Error::InvalidParameter(format!("empty interval [{left}, {right}]")));
        }
        Ok(Self {
            left,
            right,
            elements,
            boundary,
        })
    }

    pub fn periodic(left: f64, right: f64, elements: usize) -> Result<Self> {
        Self::new(left, right, elements, Boundary::Periodic)
    }

    pub fn dx(&self) -> f64 {
        (self.right - self.left) / self.elements as f64
    }

    /// Physical coordinates of every node, element by element.
    pub fn node_coordinates(&self, op: &SbpOperator) -> Vec<f64> {
        let dx = self.dx();
        let mut x = Vec::with_capacity(self.elements * op.len());
        for e in 0..self.elements {
            for &t in op.nodes() {
                x.push(self.left + (e as f64 + 0.5 * (t + 1.0)) * dx);
            }
        }
        x
    }

    /// Right neighbour of element `e`, if any.
    pub fn right_neighbour(&self, e: usize) -> Option<usize> {
        if e + 1 < self.elements {
            Some(e + 1)
        } else if self.boundary == Boundary::Periodic {
            Some(0)
        } else {
            None
        }
    }
}

/// Product-of-sines warp of the square `[0, L]²`.
pub fn warp_map(xi: f64, eta: f64, length: f64, amplitude: f64) -> (f64, f64) {
    let k = 2.0 * std::f64::consts::PI / length;
    let d = amplitude * (k * xi).sin() * (k * eta).sin();
    (xi + d, eta + d)
}

/// Warp with the default amplitude `L/12`.
pub fn default_warp(length: f64) -> impl Fn(f64, f64) -> (f64, f64) + Copy {
    move |xi, eta| warp_map(xi, eta, length, length / 12.0)
}

/// Face of the reference square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `ξ = −1`.
    West,
    /// `ξ = +1`.
    East,
    /// `η = −1`.
    South,
    /// `η = +1`.
    North,
}

/// Interior face between two elements, or a boundary face with no
/// neighbour. Node `m` of the face runs along the tangential reference index
/// in the same direction on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub owner: usize,
    pub owner_side: Side,
    pub neighbour: Option<usize>,
    pub neighbour_side: Side,
    /// Scaled normal pointing from owner to neighbour, one per face node.
    pub normals: Vec<Normal>,
}

#[derive(Debug, Clone)]
pub struct CurvilinearMesh2D {
    pub kx: usize,
    pub ky: usize,
    pub boundary: Boundary,
    op: SbpOperator,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub x_xi: Vec<f64>,
    pub x_eta: Vec<f64>,
    pub y_xi: Vec<f64>,
    pub y_eta: Vec<f64>,
    pub jacobian: Vec<f64>,
    pub faces: Vec<Face>,
}

impl CurvilinearMesh2D {
    /// Sample `mapping` on the tensor GLL grid of `op` over the logical box
    /// `[0, lx] × [0, ly]` split into `kx × ky` elements. Metric terms are the
    /// discrete derivatives of the sampled coordinates.
    pub fn new(
        kx: usize,
        ky: usize,
        extent: (f64, f64),
        mapping: impl Fn(f64, f64) -> (f64, f64),
        op: &SbpOperator,
        boundary: Boundary,
    ) -> Result<Self> {
        if kx == 0 || ky == 0 {
            return Err(Error::InvalidParameter("mesh needs at least one element per direction".into()));
        }
        if op.degree() == 0 {
            return Err(Error::InvalidParameter("curvilinear geometry needs degree >= 1".into()));
        }
        let n = op.len();
        let per = n * n;
        let total = kx * ky * per;
        let (hx, hy) = (extent.0 / kx as f64, extent.1 / ky as f64);
        let mut x = vec![0.0; total];
        let mut y = vec![0.0; total];
        for ey in 0..ky {
            for ex in 0..kx {
                let e = ey * kx + ex;
                for j in 0..n {
                    let eta = (ey as f64 + 0.5 * (op.nodes()[j] + 1.0)) * hy;
                    for i in 0..n {
                        let xi = (ex as f64 + 0.5 * (op.nodes()[i] + 1.0)) * hx;
                        let (px, py) = mapping(xi, eta);
                        x[e * per + j * n + i] = px;
                        y[e * per + j * n + i] = py;
                    }
                }
            }
        }
        let mut mesh = Self {
            kx,
            ky,
            boundary,
            op: op.clone(),
            x_xi: vec![0.0; total],
            x_eta: vec![0.0; total],
            y_xi: vec![0.0; total],
            y_eta: vec![0.0; total],
            jacobian: vec![0.0; total],
            x,
            y,
            faces: Vec::new(),
        };
        for e in 0..kx * ky {
            let base = e * per;
            for j in 0..n {
                for i in 0..n {
                    let mut d = [0.0; 4];
                    for k in 0..n {
                        let dik = op.d(i, k);
                        let djk = op.d(j, k);
                        d[0] += dik * mesh.x[base + j * n + k];
                        d[1] += djk * mesh.x[base + k * n + i];
                        d[2] += dik * mesh.y[base + j * n + k];
                        d[3] += djk * mesh.y[base + k * n + i];
                    }
                    let q = base + j * n + i;
                    mesh.x_xi[q] = d[0];
                    mesh.x_eta[q] = d[1];
                    mesh.y_xi[q] = d[2];
                    mesh.y_eta[q] = d[3];
                    let jac = d[0] * d[3] - d[1] * d[2];
                    mesh.jacobian[q] = jac;
                    if !(jac > 0.0) {
                        return Err(Error::DegenerateMesh { element: e, jacobian: jac });
                    }
                }
            }
        }
        mesh.build_faces();
        Ok(mesh)
    }

    pub fn operator(&self) -> &SbpOperator {
        &self.op
    }

    pub fn n_elements(&self) -> usize {
        self.kx * self.ky
    }

    pub fn nodes_per_element(&self) -> usize {
        self.op.len() * self.op.len()
    }

    pub fn node(&self, e: usize, i: usize, j: usize) -> usize {
        let n = self.op.len();
        e * n * n + j * n + i
    }

    /// Scaled contravariant vector `J∇ξ = (y_η, −x_η)`.
    pub fn contravariant_xi(&self, q: usize) -> Normal {
        [self.y_eta[q], -self.x_eta[q]]
    }

    /// Scaled contravariant vector `J∇η = (−y_ξ, x_ξ)`.
    pub fn contravariant_eta(&self, q: usize) -> Normal {
        [-self.y_xi[q], self.x_xi[q]]
    }

    /// Node index of face node `m` on side `side` of element `e`.
    pub fn face_node(&self, e: usize, side: Side, m: usize) -> usize {
        let p = self.op.len() - 1;
        match side {
            Side::West => self.node(e, 0, m),
            Side::East => self.node(e, p, m),
            Side::South => self.node(e, m, 0),
            Side::North => self.node(e, m, p),
        }
    }

    /// Outward scaled normal of element `e` at face node `m`.
    pub fn outward_normal(&self, e: usize, side: Side, m: usize) -> Normal {
        let q = self.face_node(e, side, m);
        match side {
            Side::East => self.contravariant_xi(q),
            Side::West => self.contravariant_xi(q).map(|v| -v),
            Side::North => self.contravariant_eta(q),
            Side::South => self.contravariant_eta(q).map(|v| -v),
        }
    }

    fn build_faces(&mut self) {
        let n = self.op.len();
        let periodic = self.boundary == Boundary::Periodic;
        let mut faces = Vec::new();
        for ey in 0..self.ky {
            for ex in 0..self.kx {
                let e = ey * self.kx + ex;
                // East faces are owned by the element to their west, north faces
                // by the element to their south.
                let east = if ex + 1 < self.kx {
                    Some(e + 1)
                } else if periodic {
                    Some(ey * self.kx)
                } else {
                    None
                };
                let north = if ey + 1 < self.ky {
                    Some(e + self.kx)
                } else if periodic {
                    Some(ex)
                } else {
                    None
                };
                faces.push(Face {
                    owner: e,
                    owner_side: Side::East,
                    neighbour: east,
                    neighbour_side: Side::West,
                    normals: (0..n).map(|m| self.outward_normal(e, Side::East, m)).collect(),
                });
                faces.push(Face {
                    owner: e,
                    owner_side: Side::North,
                    neighbour: north,
                    neighbour_side: Side::South,
                    normals: (0..n).map(|m| self.outward_normal(e, Side::North, m)).collect(),
                });
                if !periodic && ex == 0 {
                    faces.push(Face {
                        owner: e,
                        owner_side: Side::West,
                        neighbour: None,
                        neighbour_side: Side::East,
                        normals: (0..n).map(|m| self.outward_normal(e, Side::West, m)).collect(),
                    });
                }
                if !periodic && ey == 0 {
                    faces.push(Face {
                        owner: e,
                        owner_side: Side::South,
                        neighbour: None,
                        neighbour_side: Side::North,
                        normals: (0..n).map(|m| self.outward_normal(e, Side::South, m)).collect(),
                    });
                }
            }
        }
        self.faces = faces;
    }

    /// Smallest physical element width seen from node `q`: twice the smallest
    /// singular value of the reference-to-physical Jacobian.
    pub fn local_width(&self, q: usize) -> f64 {
        let (a, b, c, d) = (self.x_xi[q], self.x_eta[q], self.y_xi[q], self.y_eta[q]);
        let det = (a * d - b * c).abs();
        // σ_min = det / σ_max, with σ_max from the closed-form 2×2 SVD.
        let smax = 0.5 * ((a + d).hypot(c - b) + (a - d).hypot(b + c));
        2.0 * det / smax
    }

    /// Zero-based index of the element with the given row-major, one-based number.
    pub fn element_of_index(&self, one_based: usize) -> Option<usize> {
        (1..=self.n_elements()).contains(&one_based).then(|| one_based - 1)
    }
}

/// Largest nodal residual of the discrete metric identities
/// `∂_ξ(y_η) − ∂_η(y_ξ) = 0` and `∂_ξ(x_η) − ∂_η(x_ξ) = 0`.
pub fn check_metric_identities(mesh: &CurvilinearMesh2D) -> f64 {
    let op = mesh.operator();
    let n = op.len();
    let mut worst: f64 = 0.0;
    for e in 0..mesh.n_elements() {
        for j in 0..n {
            for i in 0..n {
                let (mut ry, mut rx) = (0.0, 0.0);
                for k in 0..n {
                    let a = mesh.node(e, k, j);
                    let b = mesh.node(e, i, k);
                    ry += op.d(i, k) * mesh.y_eta[a] - op.d(j, k) * mesh.y_xi[b];
                    rx += op.d(i, k) * mesh.x_eta[a] - op.d(j, k) * mesh.x_xi[b];
                }
                worst = worst.max(ry.abs()).max(rx.abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn one_dimensional_widths() {
        assert_eq!(Mesh1D::periodic(-1.0, 1.0, 32).unwrap().dx(), 1.0 / 16.0);
        assert_eq!(Mesh1D::periodic(0.0, 1.0, 128).unwrap().dx(), 1.0 / 128.0);
        let single = Mesh1D::periodic(0.0, 1.0, 1).unwrap();
        assert_eq!(single.right_neighbour(0), Some(0));
        assert!(Mesh1D::periodic(0.0, 1.0, 0).is_err());
        assert!(Mesh1D::periodic(1.0, 1.0, 3).is_err());
        let wall = Mesh1D::new(0.0, 1.0, 2, Boundary::Wall).unwrap();
        assert_eq!(wall.right_neighbour(1), None);
    }

    #[test]
    fn warp_fixes_corners() {
        let l = 2f64.sqrt();
        for (a, b) in [(0.0, 0.0), (l, 0.0), (0.0, l), (l, l)] {
            let (x, y) = warp_map(a, b, l, l / 12.0);
            assert_abs_diff_eq!(x, a, epsilon = 1e-15);
            assert_abs_diff_eq!(y, b, epsilon = 1e-15);
        }
        let (x, y) = warp_map(l / 4.0, l / 4.0, l, l / 12.0);
        assert_abs_diff_eq!(x, l / 4.0 + l / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y, l / 4.0 + l / 12.0, epsilon = 1e-15);
    }

    #[test]
    fn identity_mesh_has_constant_metrics() {
        let op = SbpOperator::gll(3).unwrap();
        let m = CurvilinearMesh2D::new(2, 2, (1.0, 1.0), |a, b| (a, b), &op, Boundary::Periodic).unwrap();
        for q in 0..m.x.len() {
            assert_abs_diff_eq!(m.x_xi[q], 0.25, epsilon = 1e-14);
            assert_abs_diff_eq!(m.x_eta[q], 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(m.jacobian[q], 0.0625, epsilon = 1e-14);
            assert_abs_diff_eq!(m.local_width(q), 0.5, epsilon = 1e-14);
        }
        assert!(check_metric_identities(&m) < 1e-14);
    }

    #[test]
    fn folded_mapping_is_rejected() {
        let op = SbpOperator::gll(2).unwrap();
        let r = CurvilinearMesh2D::new(1, 1, (1.0, 1.0), |a, b| (-a, b), &op, Boundary::Wall);
        assert!(matches!(r, Err(Error::DegenerateMesh { .. })));
    }

    #[test]
    fn element_seven_center() {
        let op = SbpOperator::gll(2).unwrap();
        let l = 2f64.sqrt();
        let m = CurvilinearMesh2D::new(4, 4, (l, l), |a, b| (a, b), &op, Boundary::Wall).unwrap();
        let e = m.element_of_index(7).unwrap();
        let c = m.node(e, 1, 1);
        assert_abs_diff_eq!(m.x[c], 0.884, epsilon = 1e-3);
        assert_abs_diff_eq!(m.y[c], 0.530, epsilon = 1e-3);
    }

    #[test]
    fn wall_mesh_faces() {
        let op = SbpOperator::gll(2).unwrap();
        let m = CurvilinearMesh2D::new(3, 2, (1.0, 1.0), |a, b| (a, b), &op, Boundary::Wall).unwrap();
        let boundary = m.faces.iter().filter(|f| f.neighbour.is_none()).count();
        assert_eq!(boundary, 2 * 3 + 2 * 2);
        let periodic = CurvilinearMesh2D::new(3, 2, (1.0, 1.0), |a, b| (a, b), &op, Boundary::Periodic).unwrap();
        assert_eq!(periodic.faces.len(), 12);
    }
}
