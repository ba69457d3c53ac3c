//! Flux-differencing DGSEM right-hand sides on 1D and curvilinear 2D meshes.
//!
//! For every node the volume contribution is
//! `Σ_k 2 D_ik f^num(u_i, u_k) + Σ_k D_ik Σ_t [α_t H_t^num⟦g_t⟧ + (1 − α_t) H_t(u_i)⟦g_t⟧]`
//! and boundary nodes add `M⁻¹(f^num − f(u_in) + ½ Σ_t [α_t H_t^num⟦g_t⟧ + (1 − α_t) H_t(u_in)⟦g_t⟧])`.
//! In 2D the fluxes are contracted with averaged contravariant vectors and
//! the sum is divided by the nodal Jacobian.

use crate::error::{Error, Result};
use crate::fluxes::FluxSet;
use crate::mesh::{Boundary, CurvilinearMesh2D, Mesh1D, Side};
use crate::sbp::SbpOperator;
use crate::systems::{Normal, System};

/// Nodal states, element by element.
pub type State<const N: usize> = Vec<[f64; N]>;

/// Manufactured-solution forcing `s(x, t)`, added to the right-hand side.
pub type Forcing<const N: usize> = Box<dyn Fn([f64; 2], f64) -> [f64; N] + Send + Sync>;

/// Common interface of the 1D and 2D discretizations.
pub trait Semidiscretization<const N: usize> {
    type Sys: System<N>;

    fn system(&self) -> &Self::Sys;
    fn degree(&self) -> usize;
    fn n_nodes(&self) -> usize;
    /// Physical coordinates of the nodes (`y = 0` in 1D).
    fn coordinates(&self) -> &[[f64; 2]];
    /// Quadrature weights including the Jacobian.
    fn weights(&self) -> &[f64];
    /// Physical element width seen from each node.
    fn widths(&self) -> &[f64];
    /// `∂_t u` at time `t`. Auxiliary components of `du` are set to zero.
    fn rhs(&self, u: &[[f64; N]], t: f64, du: &mut [[f64; N]]);

    /// Sample `f` at the nodes.
    fn project(&self, f: &dyn Fn([f64; 2]) -> [f64; N]) -> State<N> {
        self.coordinates().iter().map(|&x| f(x)).collect()
    }

    fn rhs_vec(&self, u: &[[f64; N]], t: f64) -> State<N> {
        let mut du = vec![[0.0; N]; u.len()];
        self.rhs(u, t, &mut du);
        du
    }
}

#[inline]
fn axpy<const N: usize>(acc: &mut [f64; N], a: f64, x: &[f64; N]) {
    for i in 0..N {
        acc[i] += a * x[i];
    }
}

fn nc_values<const N: usize, S: System<N>>(sys: &S, u: &[[f64; N]]) -> Vec<f64> {
    let nt = sys.nc_count();
    let mut g = Vec::with_capacity(u.len() * nt);
    for s in u {
        for t in 0..nt {
            g.push(sys.nc_g(s, t));
        }
    }
    g
}

/// Flux-differencing sum along one line of nodes of an element.
/// `line[i]` is the global node index of the `i`-th node on the line and
/// `metric[i]` its scaled contravariant vector for the line direction.
#[allow(clippy::too_many_arguments)]
fn line_volume<const N: usize, S: System<N>, F: FluxSet<N, S>>(
    sys: &S,
    flux: &F,
    op: &SbpOperator,
    line: &[usize],
    metric: &[Normal],
    u: &[[f64; N]],
    g: &[f64],
    acc: &mut [[f64; N]],
) {
    let nt = sys.nc_count();
    let len = line.len();
    let sym = flux.symmetric();
    for i in 0..len {
        let q = line[i];
        let dii = op.d(i, i);
        if dii != 0.0 {
            let f = sys.flux(&u[q], metric[i]);
            axpy(&mut acc[q], 2.0 * dii, &f);
        }
        for k in (i + 1)..len {
            let r = line[k];
            let (dik, dki) = (op.d(i, k), op.d(k, i));
            let n = [0.5 * (metric[i][0] + metric[k][0]), 0.5 * (metric[i][1] + metric[k][1])];
            let f = flux.conservative(sys, &u[q], &u[r], n);
            axpy(&mut acc[q], 2.0 * dik, &f);
            if sym {
                axpy(&mut acc[r], 2.0 * dki, &f);
            } else {
                let fr = flux.conservative(sys, &u[r], &u[q], n);
                axpy(&mut acc[r], 2.0 * dki, &fr);
            }
            for t in 0..nt {
                let a = flux.alpha(t);
                let dg = g[r * nt + t] - g[q * nt + t];
                if a != 0.0 {
                    // H^num(u_q, u_r)⟦g⟧ is odd under swapping the pair.
                    let p = flux.nc_jump_product(sys, &u[q], &u[r], n, t);
                    axpy(&mut acc[q], a * dik, &p);
                    axpy(&mut acc[r], -a * dki, &p);
                }
                if a != 1.0 && dg != 0.0 {
                    let hq = sys.nc_factor(&u[q], n, t);
                    let hr = sys.nc_factor(&u[r], n, t);
                    axpy(&mut acc[q], (1.0 - a) * dik * dg, &hq);
                    axpy(&mut acc[r], -(1.0 - a) * dki * dg, &hr);
                }
            }
        }
    }
}

/// Interface contribution at one boundary node, before division by the
/// boundary mass. `n` is the face normal used by the numerical fluxes and
/// `n_own` the node's own outward contravariant vector.
#[allow(clippy::too_many_arguments)]
fn surface_node<const N: usize, S: System<N>, F: FluxSet<N, S>>(
    sys: &S,
    flux: &F,
    u_in: &[f64; N],
    u_out: &[f64; N],
    g_in: &[f64],
    g_out: &[f64],
    n: Normal,
    n_own: Normal,
) -> [f64; N] {
    let mut out = flux.conservative(sys, u_in, u_out, n);
    let f_in = sys.flux(u_in, n_own);
    for i in 0..N {
        out[i] -= f_in[i];
    }
    for t in 0..sys.nc_count() {
        let a = flux.alpha(t);
        let dg = g_out[t] - g_in[t];
        if a != 0.0 {
            let p = flux.nc_jump_product(sys, u_in, u_out, n, t);
            axpy(&mut out, 0.5 * a, &p);
        }
        if a != 1.0 && dg != 0.0 {
            let h = sys.nc_factor(u_in, n, t);
            axpy(&mut out, 0.5 * (1.0 - a) * dg, &h);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn finish_node<const N: usize, S: System<N>>(
    sys: &S,
    u: &[f64; N],
    x: [f64; 2],
    t: f64,
    scale: f64,
    acc: &[f64; N],
    sources: bool,
    forcing: Option<&Forcing<N>>,
) -> [f64; N] {
    let np = sys.n_prognostic();
    let mut out = [0.0; N];
    for i in 0..np {
        out[i] = -scale * acc[i];
    }
    if sources && sys.has_source() {
        let s = sys.source(u);
        for i in 0..np {
            out[i] += s[i];
        }
    }
    if let Some(f) = forcing {
        let s = f(x, t);
        for i in 0..np {
            out[i] += s[i];
        }
    }
    out
}

// ---------------------------------------------------------------------------

/// DGSEM on a uniform 1D mesh.
pub struct Discretization1D<const N: usize, S, V, F> {
    pub mesh: Mesh1D,
    pub op: SbpOperator,
    pub system: S,
    pub volume: V,
    pub surface: F,
    pub sources: bool,
    forcing: Option<Forcing<N>>,
    coords: Vec<[f64; 2]>,
    weights: Vec<f64>,
    widths: Vec<f64>,
}

impl<const N: usize, S: System<N>, V: FluxSet<N, S>, F: FluxSet<N, S>> Discretization1D<N, S, V, F> {
    pub fn new(mesh: Mesh1D, op: SbpOperator, system: S, volume: V, surface: F) -> Result<Self> {
        if system.dim() != 1 {
            return Err(Error::InvalidParameter(format!("{} is not one-dimensional", system.name())));
        }
        let dx = mesh.dx();
        let coords = mesh.node_coordinates(&op).into_iter().map(|x| [x, 0.0]).collect();
        let weights = (0..mesh.elements)
            .flat_map(|_| op.mass().iter().map(move |m| 0.5 * dx * m))
            .collect();
        let widths = vec![dx; mesh.elements * op.len()];
        Ok(Self {
            mesh,
            op,
            system,
            volume,
            surface,
            sources: true,
            forcing: None,
            coords,
            weights,
            widths,
        })
    }

    pub fn with_forcing(mut self, forcing: Forcing<N>) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn with_sources(mut self, on: bool) -> Self {
        self.sources = on;
        self
    }
}

impl<const N: usize, S: System<N>, V: FluxSet<N, S>, F: FluxSet<N, S>> Semidiscretization<N>
    for Discretization1D<N, S, V, F>
{
    type Sys = S;

    fn system(&self) -> &S {
        &self.system
    }
    fn degree(&self) -> usize {
        self.op.degree()
    }
    fn n_nodes(&self) -> usize {
        self.coords.len()
    }
    fn coordinates(&self) -> &[[f64; 2]] {
        &self.coords
    }
    fn weights(&self) -> &[f64] {
        &self.weights
    }
    fn widths(&self) -> &[f64] {
        &self.widths
    }

    fn rhs(&self, u: &[[f64; N]], t: f64, du: &mut [[f64; N]]) {
        let sys = &self.system;
        let n = self.op.len();
        let p = n - 1;
        let nt = sys.nc_count();
        let g = nc_values(sys, u);
        let mut acc = vec![[0.0; N]; u.len()];
        let line_metric = vec![[1.0, 0.0]; n];
        let mut line = vec![0; n];
        let edge_mass = self.op.mass()[0];
        let right: Normal = [1.0, 0.0];
        let left: Normal = [-1.0, 0.0];
        for e in 0..self.mesh.elements {
            for (i, l) in line.iter_mut().enumerate() {
                *l = e * n + i;
            }
            if p > 0 {
                line_volume(sys, &self.volume, &self.op, &line, &line_metric, u, &g, &mut acc);
            }
            let (q0, qp) = (e * n, e * n + p);
            let left_nb = if e > 0 {
                Some(e - 1)
            } else if self.mesh.boundary == Boundary::Periodic {
                Some(self.mesh.elements - 1)
            } else {
                None
            };
            for (q, nb, nrm) in [(qp, self.mesh.right_neighbour(e).map(|k| k * n), right), (q0, left_nb.map(|k| k * n + p), left)] {
                let gq = &g[q * nt..(q + 1) * nt];
                let s = match nb {
                    Some(r) => surface_node(sys, &self.surface, &u[q], &u[r], gq, &g[r * nt..(r + 1) * nt], nrm, nrm),
                    None => {
                        let ghost = sys.wall_state(&u[q], nrm);
                        let gg: Vec<f64> = (0..nt).map(|k| sys.nc_g(&ghost, k)).collect();
                        surface_node(sys, &self.surface, &u[q], &ghost, gq, &gg, nrm, nrm)
                    }
                };
                axpy(&mut acc[q], 1.0 / edge_mass, &s);
            }
        }
        let scale = 2.0 / self.mesh.dx();
        for q in 0..u.len() {
            du[q] = finish_node(sys, &u[q], self.coords[q], t, scale, &acc[q], self.sources, self.forcing.as_ref());
        }
    }
}

/// The three-point finite-volume scheme written out directly, for
/// comparison with the `p = 0` DGSEM assembly.
pub fn three_point_fv_rhs<const N: usize, S: System<N>, V: FluxSet<N, S>, F: FluxSet<N, S>>(
    disc: &Discretization1D<N, S, V, F>,
    u: &[[f64; N]],
    t: f64,
) -> Result<State<N>> {
    if disc.op.degree() != 0 {
        return Err(Error::InvalidParameter("three-point scheme needs degree 0".into()));
    }
    let sys = &disc.system;
    let flux = &disc.surface;
    let k = u.len();
    let dx = disc.mesh.dx();
    let x = X_NORMAL;
    let periodic = disc.mesh.boundary == Boundary::Periodic;
    let neighbour = |i: usize, right: bool| -> [f64; N] {
        match (right, i) {
            (true, i) if i + 1 < k => u[i + 1],
            (false, i) if i > 0 => u[i - 1],
            (true, _) if periodic => u[0],
            (false, _) if periodic => u[k - 1],
            (true, i) => sys.wall_state(&u[i], [1.0, 0.0]),
            (false, i) => sys.wall_state(&u[i], [-1.0, 0.0]),
        }
    };
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let (ul, ur) = (neighbour(i, false), neighbour(i, true));
        let fr = flux.conservative(sys, &u[i], &ur, x);
        let fl = flux.conservative(sys, &ul, &u[i], x);
        let mut d: [f64; N] = std::array::from_fn(|c| (fr[c] - fl[c]) / dx);
        for term in 0..sys.nc_count() {
            let a = flux.alpha(term);
            let pr = flux.nc_jump_product(sys, &u[i], &ur, x, term);
            let pl = flux.nc_jump_product(sys, &ul, &u[i], x, term);
            let h = sys.nc_factor(&u[i], x, term);
            let dg = sys.nc_g(&ur, term) - sys.nc_g(&ul, term);
            for c in 0..N {
                d[c] += a * (pr[c] + pl[c]) / (2.0 * dx) + (1.0 - a) * h[c] * dg / (2.0 * dx);
            }
        }
        out.push(finish_node(sys, &u[i], disc.coords[i], t, 1.0, &d, disc.sources, disc.forcing.as_ref()));
    }
    Ok(out)
}

const X_NORMAL: Normal = [1.0, 0.0];

// ---------------------------------------------------------------------------

/// DGSEM on a conforming curvilinear quadrilateral mesh.
pub struct Discretization2D<const N: usize, S, V, F> {
    pub mesh: CurvilinearMesh2D,
    pub system: S,
    pub volume: V,
    pub surface: F,
    pub sources: bool,
    forcing: Option<Forcing<N>>,
    coords: Vec<[f64; 2]>,
    weights: Vec<f64>,
    widths: Vec<f64>,
}

impl<const N: usize, S: System<N>, V: FluxSet<N, S>, F: FluxSet<N, S>> Discretization2D<N, S, V, F> {
    pub fn new(mesh: CurvilinearMesh2D, system: S, volume: V, surface: F) -> Result<Self> {
        if system.dim() != 2 {
            return Err(Error::InvalidParameter(format!("{} is not two-dimensional", system.name())));
        }
        let op = mesh.operator();
        let n = op.len();
        let coords = mesh.x.iter().zip(&mesh.y).map(|(&x, &y)| [x, y]).collect();
        let mut weights = Vec::with_capacity(mesh.x.len());
        for e in 0..mesh.n_elements() {
            for j in 0..n {
                for i in 0..n {
                    let q = mesh.node(e, i, j);
                    weights.push(op.mass()[i] * op.mass()[j] * mesh.jacobian[q]);
                }
            }
        }
        let widths = (0..mesh.x.len()).map(|q| mesh.local_width(q)).collect();
        Ok(Self {
            mesh,
            system,
            volume,
            surface,
            sources: true,
            forcing: None,
            coords,
            weights,
            widths,
        })
    }

    pub fn with_forcing(mut self, forcing: Forcing<N>) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn with_sources(mut self, on: bool) -> Self {
        self.sources = on;
        self
    }
}

impl<const N: usize, S: System<N>, V: FluxSet<N, S>, F: FluxSet<N, S>> Semidiscretization<N>
    for Discretization2D<N, S, V, F>
{
    type Sys = S;

    fn system(&self) -> &S {
        &self.system
    }
    fn degree(&self) -> usize {
        self.mesh.operator().degree()
    }
    fn n_nodes(&self) -> usize {
        self.coords.len()
    }
    fn coordinates(&self) -> &[[f64; 2]] {
        &self.coords
    }
    fn weights(&self) -> &[f64] {
        &self.weights
    }
    fn widths(&self) -> &[f64] {
        &self.widths
    }

    fn rhs(&self, u: &[[f64; N]], t: f64, du: &mut [[f64; N]]) {
        let sys = &self.system;
        let mesh = &self.mesh;
        let op = mesh.operator();
        let n = op.len();
        let nt = sys.nc_count();
        let g = nc_values(sys, u);
        let mut acc = vec![[0.0; N]; u.len()];
        let mut line = vec![0; n];
        let mut metric = vec![[0.0; 2]; n];
        for e in 0..mesh.n_elements() {
            for j in 0..n {
                for i in 0..n {
                    line[i] = mesh.node(e, i, j);
                    metric[i] = mesh.contravariant_xi(line[i]);
                }
                line_volume(sys, &self.volume, op, &line, &metric, u, &g, &mut acc);
            }
            for i in 0..n {
                for j in 0..n {
                    line[j] = mesh.node(e, i, j);
                    metric[j] = mesh.contravariant_eta(line[j]);
                }
                line_volume(sys, &self.volume, op, &line, &metric, u, &g, &mut acc);
            }
        }
        let inv_edge = 1.0 / op.mass()[0];
        let gs = |q: usize| &g[q * nt..(q + 1) * nt];
        for face in &mesh.faces {
            for m in 0..n {
                let nrm = face.normals[m];
                let q = mesh.face_node(face.owner, face.owner_side, m);
                match face.neighbour {
                    Some(nb) => {
                        let r = mesh.face_node(nb, face.neighbour_side, m);
                        let s = surface_node(sys, &self.surface, &u[q], &u[r], gs(q), gs(r), nrm, nrm);
                        axpy(&mut acc[q], inv_edge, &s);
                        let back = [-nrm[0], -nrm[1]];
                        let own = mesh.outward_normal(nb, face.neighbour_side, m);
                        let s = surface_node(sys, &self.surface, &u[r], &u[q], gs(r), gs(q), back, own);
                        axpy(&mut acc[r], inv_edge, &s);
                    }
                    None => {
                        let ghost = sys.wall_state(&u[q], nrm);
                        let gg: Vec<f64> = (0..nt).map(|k| sys.nc_g(&ghost, k)).collect();
                        let s = surface_node(sys, &self.surface, &u[q], &ghost, gs(q), &gg, nrm, nrm);
                        axpy(&mut acc[q], inv_edge, &s);
                    }
                }
            }
        }
        for q in 0..u.len() {
            let scale = 1.0 / mesh.jacobian[q];
            du[q] = finish_node(sys, &u[q], self.coords[q], t, scale, &acc[q], self.sources, self.forcing.as_ref());
        }
    }
}

/// Which face of the reference square a node lies on, if any (for tests).
pub fn boundary_sides(n: usize, i: usize, j: usize) -> Vec<Side> {
    let mut s = Vec::new();
    if i == 0 {
        s.push(Side::West);
    }
    if i + 1 == n {
        s.push(Side::East);
    }
    if j == 0 {
        s.push(Side::South);
    }
    if j + 1 == n {
        s.push(Side::North);
    }
    s
}

// ---------------------------------------------------------------------------

/// Volume-flux choices paired with the operator form they reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitForm {
    /// `Σ D_ik h_i ⟦g⟧` against `H D g`.
    PointwiseJump,
    /// `Σ 2 D_ik h_i ⟨g⟩` against `H D g`.
    PointwiseMean,
    /// `Σ D_ik ⟨h⟩⟦g⟧` against `½(D H g + H D g − G D h)`.
    MeanJump,
    /// `Σ 2 D_ik (⟨hg⟩ − ⟨h⟩ g_i)` against `D H g − G D h`.
    ProductRule,
    /// `Σ 2 D_ik (⟨h⟩⟨g⟩ − ⟨h⟩ g_i)` against `½(D H g + H D g − G D h)`.
    MeanOfMeans,
    /// `Σ 2 D_ik (⦃h·g⦄ − ⟨h⟩ g_i)` against `H D g`.
    ProductMean,
}

impl SplitForm {
    pub const ALL: [SplitForm; 6] = [
        SplitForm::PointwiseJump,
        SplitForm::PointwiseMean,
        SplitForm::MeanJump,
        SplitForm::ProductRule,
        SplitForm::MeanOfMeans,
        SplitForm::ProductMean,
    ];
}

/// Largest nodal difference between the two-point volume sum and the
/// matching operator form for nodal samples `h`, `g`.
pub fn split_form_equivalence(op: &SbpOperator, h: &[f64], g: &[f64], form: SplitForm) -> Result<f64> {
    let n = op.len();
    if h.len() != n || g.len() != n {
        return Err(Error::InvalidParameter(format!(
            "expected {n} nodal values, got {} and {}",
            h.len(),
            g.len()
        )));
    }
    let hg: Vec<f64> = h.iter().zip(g).map(|(a, b)| a * b).collect();
    let (dg, dh, dhg) = (op.apply(g), op.apply(h), op.apply(&hg));
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let mut kernel = 0.0;
        for k in 0..n {
            let d = op.d(i, k);
            let hm = 0.5 * (h[i] + h[k]);
            kernel += d * match form {
                SplitForm::PointwiseJump => h[i] * (g[k] - g[i]),
                SplitForm::PointwiseMean => 2.0 * h[i] * 0.5 * (g[i] + g[k]),
                SplitForm::MeanJump => hm * (g[k] - g[i]),
                SplitForm::ProductRule => 2.0 * (0.5 * (hg[i] + hg[k]) - hm * g[i]),
                SplitForm::MeanOfMeans => 2.0 * (hm * 0.5 * (g[i] + g[k]) - hm * g[i]),
                SplitForm::ProductMean => 2.0 * (0.5 * (h[i] * g[k] + h[k] * g[i]) - hm * g[i]),
            };
        }
        let strong = match form {
            SplitForm::PointwiseJump | SplitForm::PointwiseMean | SplitForm::ProductMean => h[i] * dg[i],
            SplitForm::MeanJump | SplitForm::MeanOfMeans => 0.5 * (dhg[i] + h[i] * dg[i] - g[i] * dh[i]),
            SplitForm::ProductRule => dhg[i] - g[i] * dh[i],
        };
        worst = worst.max((kernel - strong).abs());
    }
    Ok(worst)
}
