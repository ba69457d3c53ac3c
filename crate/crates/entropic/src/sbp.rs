//! Diagonal-norm summation-by-parts operators on the reference interval [-1, 1].
//!
//! The only family shipped here is the Gauss-Lobatto-Legendre collocation
//! operator used by DGSEM, but [`SbpOperator::from_parts`] accepts any
//! diagonal-norm operator with boundary nodes at both ends.

use crate::error::{Error, Result};

/// Largest polynomial degree accepted by [`SbpOperator::gll`].
pub const MAX_DEGREE: usize = 20;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// One-dimensional SBP operator with diagonal mass matrix.
///
/// The restriction operator picks the first and last node, the boundary mass
/// is the identity and the normal signs are `(-1, +1)`, so those three are
/// implicit rather than stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SbpOperator {
    degree: usize,
    nodes: Vec<f64>,
    mass: Vec<f64>,
    /// Row-major, `n × n`.
    deriv: Vec<f64>,
}

impl SbpOperator {
    /// Collocation operator on the `p + 1` Gauss-Lobatto-Legendre nodes.
    pub fn gll(p: usize) -> Result<Self> {
        if p > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "polynomial degree {p} outside 0..={MAX_DEGREE}"
            )));
        }
        if p == 0 {
            return Ok(Self {
                degree: 0,
                nodes: vec![0.0],
                mass: vec![2.0],
                deriv: vec![0.0],
            });
        }
        let (nodes, mass) = gll_nodes_and_weights(p);
        let deriv = lagrange_derivative_matrix(&nodes);
        Ok(Self {
            degree: p,
            nodes,
            mass,
            deriv,
        })
    }

    /// Assemble an operator from raw parts. The parts are checked for shape,
    /// positivity of the mass and ordering of the nodes, but not for the SBP
    /// property itself; use [`verify_sbp_property`] for that.
    pub fn from_parts(degree: usize, nodes: Vec<f64>, mass: Vec<f64>, deriv: Vec<f64>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 || mass.len() != n || deriv.len() != n * n {
            return Err(Error::InvalidParameter("inconsistent operator dimensions".into()));
        }
        if mass.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidParameter("mass weights must be positive".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("nodes must be strictly increasing".into()));
        }
        Ok(Self {
            degree,
            nodes,
            mass,
            deriv,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Row-major derivative matrix.
    pub fn deriv(&self) -> &[f64] {
        &self.deriv
    }

    #[inline]
    pub fn d(&self, i: usize, k: usize) -> f64 {
        self.deriv[i * self.nodes.len() + k]
    }

    /// Diagonal of `Rᵀ B N R`: `-1` at the first node, `+1` at the last, and
    /// their sum (zero) when both coincide.
    pub fn boundary_diag(&self) -> Vec<f64> {
        let n = self.len();
        let mut q = vec![0.0; n];
        q[0] -= 1.0;
        q[n - 1] += 1.0;
        q
    }

    /// Apply the derivative matrix to nodal values.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(v.len(), n, "vector length must match the operator size");
        (0..n)
            .map(|i| (0..n).map(|k| self.d(i, k) * v[k]).sum())
            .collect()
    }

    /// Mutable access to the derivative entries, for perturbation experiments.
    pub fn deriv_mut(&mut self) -> &mut [f64] {
        &mut self.deriv
    }
}

/// `max |M D + Dᵀ M − Rᵀ B N R|`.
pub fn verify_sbp_property(op: &SbpOperator) -> f64 {
    let n = op.len();
    let q = op.boundary_diag();
    let m = op.mass();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for k in 0..n {
            let mut r = m[i] * op.d(i, k) + op.d(k, i) * m[k];
            if i == k {
                r -= q[i];
            }
            worst = worst.max(r.abs());
        }
    }
    worst
}

/// Maximum pointwise error when differentiating `x^k` sampled at the nodes.
pub fn polynomial_accuracy(op: &SbpOperator, k: u32) -> f64 {
    let x = op.nodes();
    let v: Vec<f64> = x.iter().map(|&xi| xi.powi(k as i32)).collect();
    let dv = op.apply(&v);
    x.iter()
        .zip(&dv)
        .map(|(&xi, &d)| {
            let exact = if k == 0 { 0.0 } else { k as f64 * xi.powi(k as i32 - 1) };
            (d - exact).abs()
        })
        .fold(0.0, f64::max)
}

/// `D̃ = 2D − M⁻¹ Rᵀ B N R`, the operator that fuses the volume and the
/// strong-form boundary correction for flux differencing.
pub fn skew_extended_derivative(op: &SbpOperator) -> Vec<f64> {
    let n = op.len();
    let q = op.boundary_diag();
    let mut out: Vec<f64> = op.deriv().iter().map(|d| 2.0 * d).collect();
    for i in 0..n {
        out[i * n + i] -= q[i] / op.mass()[i];
    }
    out
}

/// Legendre polynomial `L_n(x)` and its derivative.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    match n {
        0 => (1.0, 0.0),
        1 => (x, 1.0),
        _ => {
            let (mut l2, mut l1) = (1.0, x);
            let (mut d2, mut d1) = (0.0, 1.0);
            for k in 2..=n {
                let kf = k as f64;
                let l = (2.0 * kf - 1.0) / kf * x * l1 - (kf - 1.0) / kf * l2;
                let d = d2 + (2.0 * kf - 1.0) * l1;
                l2 = l1;
                l1 = l;
                d2 = d1;
                d1 = d;
            }
            (l1, d1)
        }
    }
}

/// `q = L_{n+1} − L_{n−1}`, its derivative, and `L_n`. The interior GLL nodes are
/// the roots of `q`.
fn lobatto_q(n: usize, x: f64) -> (f64, f64, f64) {
    let (lm1, dm1) = legendre_and_derivative(n - 1, x);
    let (l, _) = legendre_and_derivative(n, x);
    let (lp1, dp1) = legendre_and_derivative(n + 1, x);
    (lp1 - lm1, dp1 - dm1, l)
}

fn gll_nodes_and_weights(p: usize) -> (Vec<f64>, Vec<f64>) {
    let n = p;
    let nf = n as f64;
    let mut x = vec![0.0; n + 1];
    let mut w = vec![0.0; n + 1];
    x[0] = -1.0;
    x[n] = 1.0;
    w[0] = 2.0 / (nf * (nf + 1.0));
    w[n] = w[0];
    for j in 1..n.div_ceil(2) {
        let jf = j as f64 + 0.25;
        let mut xj = -(jf * std::f64::consts::PI / nf - 3.0 / (8.0 * nf * std::f64::consts::PI * jf)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (q, dq, _) = lobatto_q(n, xj);
            let delta = -q / dq;
            xj += delta;
            if delta.abs() <= NEWTON_TOL * xj.abs().max(1.0) {
                break;
            }
        }
        let (_, _, l) = lobatto_q(n, xj);
        x[j] = xj;
        x[n - j] = -xj;
        w[j] = 2.0 / (nf * (nf + 1.0) * l * l);
        w[n - j] = w[j];
    }
    if n % 2 == 0 {
        let (l, _) = legendre_and_derivative(n, 0.0);
        x[n / 2] = 0.0;
        w[n / 2] = 2.0 / (nf * (nf + 1.0) * l * l);
    }
    (x, w)
}

/// `D_ik = ℓ_k'(x_i)` via barycentric weights, with the diagonal fixed by the
/// negative-sum trick so that constants are differentiated to zero.
fn lagrange_derivative_matrix(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let bary: Vec<f64> = (0..n)
        .map(|j| {
            1.0 / (0..n)
                .filter(|&k| k != j)
                .map(|k| x[j] - x[k])
                .product::<f64>()
        })
        .collect();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for k in 0..n {
            if k != i {
                let v = bary[k] / bary[i] / (x[i] - x[k]);
                d[i * n + k] = v;
                diag -= v;
            }
        }
        d[i * n + i] = diag;
    }
    d
}
