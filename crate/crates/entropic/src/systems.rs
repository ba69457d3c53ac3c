//! PDE systems of the form `∂t u + ∂x f(u) + H(u) ∂x g(u) = s(u)`.
//!
//! Spatially varying coefficients (advection speed, bathymetry, gravity
//! potential) are carried as trailing *auxiliary* components of the state so
//! that their interface jumps are available to the numerical fluxes. Only the
//! leading [`System::n_prognostic`] components evolve in time; entropy
//! variables are zero on the auxiliary block.
//!
//! Every directional quantity takes a normal `n = (n₁, n₂)` and returns the
//! contraction `Σ_j n_j (·)^j`. One-dimensional systems read `n₁` only.

use rand::Rng;

use crate::error::{Error, Result};

/// Direction (not necessarily unit length) along which fluxes are contracted.
pub type Normal = [f64; 2];

/// Unit normal of the single 1D direction.
pub const X_DIR: Normal = [1.0, 0.0];

#[inline]
pub(crate) fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A nonconservative hyperbolic system with an attached entropy pair.
pub trait System<const N: usize>: Send + Sync {
    fn name(&self) -> &'static str;

    /// Spatial dimension, 1 or 2.
    fn dim(&self) -> usize;

    /// Number of time-evolved leading components.
    fn n_prognostic(&self) -> usize;

    /// Contracted physical flux `Σ_j n_j f^j(u)`.
    fn flux(&self, u: &[f64; N], n: Normal) -> [f64; N];

    /// Number of nonconservative products `H_k ∂ g_k` (summed over directions).
    fn nc_count(&self) -> usize;

    /// Contracted factor `Σ_j n_j H^j_k(u)`, a column of length `N`.
    fn nc_factor(&self, u: &[f64; N], n: Normal, k: usize) -> [f64; N];

    /// Scalar `g_k(u)` differentiated by term `k`.
    fn nc_g(&self, u: &[f64; N], k: usize) -> f64;

    fn has_source(&self) -> bool {
        false
    }

    fn source(&self, _u: &[f64; N]) -> [f64; N] {
        [0.0; N]
    }

    fn entropy(&self, u: &[f64; N]) -> f64;

    /// `ω = ∂U/∂u` on the prognostic block, zero on the auxiliary block.
    fn entropy_variables(&self, u: &[f64; N]) -> [f64; N];

    /// Contracted entropy flux `Σ_j n_j F^j(u)`.
    fn entropy_flux(&self, u: &[f64; N], n: Normal) -> f64;

    /// `ψ = ω·f − F` along `n`.
    fn entropy_potential(&self, u: &[f64; N], n: Normal) -> f64 {
        dot(&self.entropy_variables(u), &self.flux(u, n)) - self.entropy_flux(u, n)
    }

    /// Upper bound of the characteristic speed used for the CFL condition.
    fn wave_speed(&self, u: &[f64; N]) -> f64;

    fn admissible(&self, u: &[f64; N]) -> Result<()>;

    /// Ghost state for a reflecting wall with outward normal `n`.
    fn wall_state(&self, u: &[f64; N], _n: Normal) -> [f64; N] {
        *u
    }

    /// Random admissible state, used by the property checks.
    fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; N];
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InadmissibleState(format!("{what} = {v}")))
    }
}

fn check_finite<const N: usize>(u: &[f64; N]) -> Result<()> {
    if u.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InadmissibleState(format!("non-finite state {u:?}")))
    }
}

// ---------------------------------------------------------------------------

/// `∂t u + a(x) ∂x u = 0` with `a > 0`; state `(u, a)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct VarAdvection;

impl System<2> for VarAdvection {
    fn name(&self) -> &'static str {
        "var_advection"
    }
    fn dim(&self) -> usize {
        1
    }
    fn n_prognostic(&self) -> usize {
        1
    }
    fn flux(&self, _u: &[f64; 2], _n: Normal) -> [f64; 2] {
        [0.0; 2]
    }
    fn nc_count(&self) -> usize {
        1
    }
    fn nc_factor(&self, u: &[f64; 2], n: Normal, _k: usize) -> [f64; 2] {
        [n[0] * u[1], 0.0]
    }
    fn nc_g(&self, u: &[f64; 2], _k: usize) -> f64 {
        u[0]
    }
    fn entropy(&self, u: &[f64; 2]) -> f64 {
        u[0] * u[0] / u[1]
    }
    fn entropy_variables(&self, u: &[f64; 2]) -> [f64; 2] {
        [2.0 * u[0] / u[1], 0.0]
    }
    fn entropy_flux(&self, u: &[f64; 2], n: Normal) -> f64 {
        n[0] * u[0] * u[0]
    }
    fn wave_speed(&self, u: &[f64; 2]) -> f64 {
        u[1].abs()
    }
    fn admissible(&self, u: &[f64; 2]) -> Result<()> {
        check_finite(u)?;
        check_positive("advection speed", u[1])
    }
    fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2] {
        [rng.gen_range(-2.0..2.0), rng.gen_range(0.5..3.0)]
    }
}

// ---------------------------------------------------------------------------

/// Inviscid Burgers' equation `∂t u + ∂x(u²/2) = 0` with `U = u²/2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Burgers;

impl System<1> for Burgers {
    fn name(&self) -> &'static str {
        "burgers"
    }
    fn dim(&self) -> usize {
        1
    }
    fn n_prognostic(&self) -> usize {
        1
    }
    fn flux(&self, u: &[f64; 1], n: Normal) -> [f64; 1] {
        [n[0] * 0.5 * u[0] * u[0]]
    }
    fn nc_count(&self) -> usize {
        0
    }
    fn nc_factor(&self, _u: &[f64; 1], _n: Normal, _k: usize) -> [f64; 1] {
        [0.0]
    }
    fn nc_g(&self, _u: &[f64; 1], _k: usize) -> f64 {
        0.0
    }
    fn entropy(&self, u: &[f64; 1]) -> f64 {
        0.5 * u[0] * u[0]
    }
    fn entropy_variables(&self, u: &[f64; 1]) -> [f64; 1] {
        *u
    }
    fn entropy_flux(&self, u: &[f64; 1], n: Normal) -> f64 {
        n[0] * u[0] * u[0] * u[0] / 3.0
    }
    fn wave_speed(&self, u: &[f64; 1]) -> f64 {
        u[0].abs()
    }
    fn admissible(&self, u: &[f64; 1]) -> Result<()> {
        check_finite(u)
    }
    fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 1] {
        [rng.gen_range(-2.0..2.0)]
    }
}

// ---------------------------------------------------------------------------

/// `∂t u + u ∂x(u+v) = 0`, `∂t v + v ∂x(u+v) = 0`; `q = u + v` obeys Burgers'
/// equation and `U = q²/2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CoupledBurgers;

impl System<2> for CoupledBurgers {
    fn name(&self) -> &'static str {
        "coupled_burgers"
    }
    fn dim(&self) -> usize {
        1
    }
    fn n_prognostic(&self) -> usize {
        2
    }
    fn flux(&self, _u: &[f64; 2], _n: Normal) -> [f64; 2] {
        [0.0; 2]
    }
    fn nc_count(&self) -> usize {
        2
    }
    fn nc_factor(&self, u: &[f64; 2], n: Normal, k: usize) -> [f64; 2] {
        match k {
            0 => [n[0] * u[0], 0.0],
            _ => [0.0, n[0] * u[1]],
        }
    }
    fn nc_g(&self, u: &[f64; 2], _k: usize) -> f64 {
        u[0] + u[1]
    }
    fn entropy(&self, u: &[f64; 2]) -> f64 {
        let q = u[0] + u[1];
        0.5 * q * q
    }
    fn entropy_variables(&self, u: &[f64; 2]) -> [f64; 2] {
        let q = u[0] + u[1];
        [q, q]
    }
    fn entropy_flux(&self, u: &[f64; 2], n: Normal) -> f64 {
        let q = u[0] + u[1];
        n[0] * q * q * q / 3.0
    }
    fn wave_speed(&self, u: &[f64; 2]) -> f64 {
        (u[0] + u[1]).abs()
    }
    fn admissible(&self, u: &[f64; 2]) -> Result<()> {
        check_finite(u)
    }
    fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2] {
        [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]
    }
}

// ---------------------------------------------------------------------------

/// How the monomial equation `∂t u + u^m ∂x u^n = 0` is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialSplit {
    /// `f = 0`, `H = u^m`, `g = u^n`.
    Product,
    /// `f = u^{m+n}`, `H = −u^n`, `g = u^m`.
    FluxMinusProduct,
}

#[derive(Debug, Clone, Copy)]
pub struct Monomial {
    pub m: u32,
    pub n: u32,
    pub split: MonomialSplit,
}

impl Monomial {
    pub fn new(m: u32, n: u32, split: MonomialSplit) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter(format!(
                "monomial exponents must be positive, got ({m}, {n})"
            )));
        }
        Ok(Self { m, n, split })
    }
}

impl System<1> for Monomial {
    fn name(&self) -> &'static str {
        "monomial"
    }
    fn dim(&self) -> usize {
        1
    }
    fn n_prognostic(&self) -> usize {
        1
    }
    fn flux(&self, u: &[f64; 1], n: Normal) -> [f64; 1] {
        match self.split {
            MonomialSplit::Product => [0.0],
            MonomialSplit::FluxMinusProduct => [n[0] * u[0].powi((self.m + self.n) as i32)],
        }
    }
    fn nc_count(&self) -> usize {
        1
    }
    fn nc_factor(&self, u: &[f64; 1], n: Normal, _k: usize) -> [f64; 1] {
        match self.split {
            MonomialSplit::Product => [n[0] * u[0].powi(self.m as i32)],
            MonomialSplit::FluxMinusProduct => [-n[0] * u[0].powi(self.n as i32)],
        }
    }
    fn nc_g(&self, u: &[f64; 1], _k: usize) -> f64 {
        match self.split {
            MonomialSplit::Product => u[0].powi(self.n as i32),
            MonomialSplit::FluxMinusProduct => u[0].powi(self.m as i32),
        }
    }
    fn entropy(&self, u: &[f64; 1]) -> f64 {
        0.5 * u[0] * u[0]
    }
    fn entropy_variables(&self, u: &[f64; 1]) -> [f64; 1] {
        *u
    }
    fn entropy_flux(&self, u: &[f64; 1], n: Normal) -> f64 {
        let k = self.m + self.n + 1;
        n[0] * self.n as f64 / k as f64 * u[0].powi(k as i32)
    }
    fn wave_speed(&self, u: &[f64; 1]) -> f64 {
        let k = self.m + self.n;
        k as f64 * u[0].abs().powi(k as i32 - 1)
    }
    fn admissible(&self, u: &[f64; 1]) -> Result<()> {
        check_finite(u)
    }
    fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 1] {
        [rng.gen_range(-1.5..1.5)]
    }
}

// ---------------------------------------------------------------------------

/// One-dimensional shallow water; state `(h, hv, b)`.
#[derive(Debug, Clone, Copy)]
pub struct ShallowWater {
    pub gravity: f64,
}

impl ShallowWater {
    pub fn new(gravity: f64) -> Result<Self> {
        if !(gravity > 0.0) {
            return Err(Error::InvalidParameter(format!("gravity must be positive, got {gravity}")));
        }
        Ok(Self { gravity })
    }
}

impl System<3> for ShallowWater {
    fn name(&self) -> &'static str {
        "shallow_water"
    }
    fn dim(&self) -> usize {
        1
    }
    fn n_prognostic(&self) -> usize {
        2
    }
    fn flux(&self, u: &[f64; 3], n: Normal) -> [f64; 3] {
        let (h, hv) = (u[0], u[1]);
        let v = hv / h;
        [n[0] * hv, n[0] * (hv * v + 0.5 * self.gravity * h * h), 0.0]
    }
    fn nc_count(&self) -> usize {
        1
    }
    fn nc_factor(&self, u: &[f64; 3], n: Normal, _k: usize) -> [f64; 3] {
        [0.0, n[0] * self.gravity * u[0], 0.0]
    }
    fn nc_g(&self, u: &[f64; 3], _k: usize) -> f64 {
        u[2]
    }
    fn entropy(&self, u: &[f64; 3]) -> f64 {
        let (h, hv, b) = (u[0], u[1], u[2]);
        let g = self.gravity;
        0.5 * hv * hv / h + 0.5 * g * h * h + g * h * b
    }
    fn entropy_variables(&self, u: &[f64; 3]) -> [f64; 3] {
        let (h, b) = (u[0], u[2]);
        let v = u[1] / h;
        let g = self.gravity;
        [-0.5 * v * v + g * h + g * b, v, 0.0]
    }
    fn entropy_flux(&self, u: &[f64; 3], n: Normal) -> f64 {
        let (h, b) = (u[0], u[2]);
        let v = u[1] / h;
        n[0] * (0.5 * h * v * v * v + self.gravity * h * v * (h + b))
    }
    fn wave_speed(&self, u: &[f64; 3]) -> f64 {
        (u[1] / u[0]).abs() + (self.gravity * u[0]).sqrt()
    }
    fn admissible(&self, u: &[f64; 3]) -> Result<()> {
        check_finite(u)?;
        check_positive("water height", u[0])
    }
    fn wall_state(&self, u: &[f64; 3], _n: Normal) -> [f64; 3] {
        [u[0], -u[1], u[2]]
    }
    fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        let h = rng.gen_range(0.5..3.0);
        let v = rng.gen_range(-2.0..2.0);
        [h, h * v, rng.gen_range(-1.0..1.0)]
    }
}

// ---------------------------------------------------------------------------

/// Hyperbolized Sainte-Marie system (non-hydrostatic shallow water with
/// `γ = 2`), one space dimension; state `(h, hv, hw, hp, b)`.
///
/// Nonconservative terms, in order: `gh ∂b` and `2p ∂b` in the momentum
/// equation, `c²h ∂v` and `−2c²v ∂b` in the pressure equation.
#[derive(Debug, Clone, Copy)]
pub struct SainteMarie {
    pub gravity: f64,
    pub celerity: f64,
}

impl SainteMarie {
    pub fn new(gravity: f64, celerity: f64) -> Result<Self> {
        if !(gravity > 0.0) || !(celerity > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gravity and celerity must be positive, got ({gravity}, {celerity})"
            )));
        }
        Ok(Self { gravity, celerity })
    }
}

impl System<5> for SainteMarie {
    fn name(&self) -> &'static str {
        "sainte_marie"
    }
    fn dim(&self) -> usize {
        1
    }
    fn n_prognostic(&self) -> usize {
        4
    }
    fn flux(&self, u: &[f64; 5], n: Normal) -> [f64; 5] {
        let h = u[0];
        let (v, w, p) = (u[1] / h, u[2] / h, u[3] / h);
        let hv = u[1];
        [
            n[0] * hv,
            n[0] * (hv * v + 0.5 * self.gravity * h * h + h * p),
            n[0] * hv * w,
            n[0] * hv * p,
            0.0,
        ]
    }
    fn nc_count(&self) -> usize {
        4
    }
    fn nc_factor(&self, u: &[f64; 5], n: Normal, k: usize) -> [f64; 5] {
        let h = u[0];
        let c2 = self.celerity * self.celerity;
        match k {
            0 => [0.0, n[0] * self.gravity * h, 0.0, 0.0, 0.0],
            1 => [0.0, n[0] * 2.0 * u[3] / h, 0.0, 0.0, 0.0],
            2 => [0.0, 0.0, 0.0, n[0] * c2 * h, 0.0],
            _ => [0.0, 0.0, 0.0, -n[0] * 2.0 * c2 * u[1] / h, 0.0],
        }
    }
    fn nc_g(&self, u: &[f64; 5], k: usize) -> f64 {
        match k {
            2 => u[1] / u[0],
            _ => u[4],
        }
    }
    fn has_source(&self) -> bool {
        true
    }
    fn source(&self, u: &[f64; 5]) -> [f64; 5] {
        let h = u[0];
        let c2 = self.celerity * self.celerity;
        [0.0, 0.0, 2.0 * u[3] / h, -2.0 * c2 * u[2] / h, 0.0]
    }
    fn entropy(&self, u: &[f64; 5]) -> f64 {
        let h = u[0];
        let (v, w, p, b) = (u[1] / h, u[2] / h, u[3] / h, u[4]);
        let g = self.gravity;
        let c2 = self.celerity * self.celerity;
        0.5 * h * (v * v + w * w) + h * p * p / (2.0 * c2) + 0.5 * g * h * h + g * h * b
    }
    fn entropy_variables(&self, u: &[f64; 5]) -> [f64; 5] {
        let h = u[0];
        let (v, w, p, b) = (u[1] / h, u[2] / h, u[3] / h, u[4]);
        let g = self.gravity;
        let c2 = self.celerity * self.celerity;
        [
            -0.5 * (v * v + w * w) - p * p / (2.0 * c2) + g * h + g * b,
            v,
            w,
            p / c2,
            0.0,
        ]
    }
    fn entropy_flux(&self, u: &[f64; 5], n: Normal) -> f64 {
        let h = u[0];
        let (v, p) = (u[1] / h, u[3] / h);
        n[0] * (self.entropy(u) + 0.5 * self.gravity * h * h + h * p) * v
    }
    fn wave_speed(&self, u: &[f64; 5]) -> f64 {
        (u[1] / u[0]).abs() + (self.gravity * u[0]).sqrt() + self.celerity
    }
    fn admissible(&self, u: &[f64; 5]) -> Result<()> {
        check_finite(u)?;
        check_positive("water height", u[0])
    }
    fn wall_state(&self, u: &[f64; 5], _n: Normal) -> [f64; 5] {
        [u[0], -u[1], u[2], u[3], u[4]]
    }
    fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 5] {
        let h = rng.gen_range(0.5..3.0);
        let v = rng.gen_range(-2.0..2.0);
        let w = rng.gen_range(-2.0..2.0);
        let p = rng.gen_range(-5.0..20.0);
        [h, h * v, h * w, h * p, rng.gen_range(-1.0..1.0)]
    }
}

/// Two-dimensional Sainte-Marie system; state `(h, hv₁, hv₂, hw, hp, b)`.
///
/// Each direction carries the four one-dimensional nonconservative terms.
/// The bathymetry terms of both directions share `g = b` and are merged, so the
/// term list is `gh ∇b`, `2p ∇b`, `c²h ∂₁v₁`, `c²h ∂₂v₂`, `−2c² v·∇b`.
#[derive(Debug, Clone, Copy)]
pub struct SainteMarie2D {
    pub gravity: f64,
    pub celerity: f64,
}

impl SainteMarie2D {
    pub fn new(gravity: f64, celerity: f64) -> Result<Self> {
        let s = SainteMarie::new(gravity, celerity)?;
        Ok(Self {
            gravity: s.gravity,
            celerity: s.celerity,
        })
    }
}

impl System<6> for SainteMarie2D {
    fn name(&self) -> &'static str {
        "sainte_marie_2d"
    }
    fn dim(&self) -> usize {
        2
    }
    fn n_prognostic(&self) -> usize {
        5
    }
    fn flux(&self, u: &[f64; 6], n: Normal) -> [f64; 6] {
        let h = u[0];
        let (v1, v2, w, p) = (u[1] / h, u[2] / h, u[3] / h, u[4] / h);
        let vn = v1 * n[0] + v2 * n[1];
        let pres = 0.5 * self.gravity * h * h + h * p;
        [
            h * vn,
            u[1] * vn + pres * n[0],
            u[2] * vn + pres * n[1],
            h * w * vn,
            h * p * vn,
            0.0,
        ]
    }
    fn nc_count(&self) -> usize {
        5
    }
    fn nc_factor(&self, u: &[f64; 6], n: Normal, k: usize) -> [f64; 6] {
        let h = u[0];
        let c2 = self.celerity * self.celerity;
        match k {
            0 => {
                let gh = self.gravity * h;
                [0.0, gh * n[0], gh * n[1], 0.0, 0.0, 0.0]
            }
            1 => {
                let p2 = 2.0 * u[4] / h;
                [0.0, p2 * n[0], p2 * n[1], 0.0, 0.0, 0.0]
            }
            2 => [0.0, 0.0, 0.0, 0.0, c2 * h * n[0], 0.0],
            3 => [0.0, 0.0, 0.0, 0.0, c2 * h * n[1], 0.0],
            _ => {
                let vn = (u[1] * n[0] + u[2] * n[1]) / h;
                [0.0, 0.0, 0.0, 0.0, -2.0 * c2 * vn, 0.0]
            }
        }
    }
    fn nc_g(&self, u: &[f64; 6], k: usize) -> f64 {
        match k {
            2 => u[1] / u[0],
            3 => u[2] / u[0],
            _ => u[5],
        }
    }
    fn has_source(&self) -> bool {
        true
    }
    fn source(&self, u: &[f64; 6]) -> [f64; 6] {
        let h = u[0];
        let c2 = self.celerity * self.celerity;
        [0.0, 0.0, 0.0, 2.0 * u[4] / h, -2.0 * c2 * u[3] / h, 0.0]
    }
    fn entropy(&self, u: &[f64; 6]) -> f64 {
        let h = u[0];
        let (v1, v2, w, p, b) = (u[1] / h, u[2] / h, u[3] / h, u[4] / h, u[5]);
        let g = self.gravity;
        let c2 = self.celerity * self.celerity;
        0.5 * h * (v1 * v1 + v2 * v2 + w * w) + h * p * p / (2.0 * c2) + 0.5 * g * h * h + g * h * b
    }
    fn entropy_variables(&self, u: &[f64; 6]) -> [f64; 6] {
        let h = u[0];
        let (v1, v2, w, p, b) = (u[1] / h, u[2] / h, u[3] / h, u[4] / h, u[5]);
        let g = self.gravity;
        let c2 = self.celerity * self.celerity;
        [
            -0.5 * (v1 * v1 + v2 * v2 + w * w) - p * p / (2.0 * c2) + g * h + g * b,
            v1,
            v2,
            w,
            p / c2,
            0.0,
        ]
    }
    fn entropy_flux(&self, u: &[f64; 6], n: Normal) -> f64 {
        let h = u[0];
        let vn = (u[1] * n[0] + u[2] * n[1]) / h;
        let p = u[4] / h;
        (self.entropy(u) + 0.5 * self.gravity * h * h + h * p) * vn
    }
    fn wave_speed(&self, u: &[f64; 6]) -> f64 {
        let h = u[0];
        (u[1] * u[1] + u[2] * u[2]).sqrt() / h + (self.gravity * h).sqrt() + self.celerity
    }
    fn admissible(&self, u: &[f64; 6]) -> Result<()> {
        check_finite(u)?;
        check_positive("water height", u[0])
    }
    fn wall_state(&self, u: &[f64; 6], n: Normal) -> [f64; 6] {
        let nn = n[0] * n[0] + n[1] * n[1];
        let mn = (u[1] * n[0] + u[2] * n[1]) / nn;
        [u[0], u[1] - 2.0 * mn * n[0], u[2] - 2.0 * mn * n[1], u[3], u[4], u[5]]
    }
    fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 6] {
        let h = rng.gen_range(0.5..3.0);
        let v1 = rng.gen_range(-2.0..2.0);
        let v2 = rng.gen_range(-2.0..2.0);
        let w = rng.gen_range(-2.0..2.0);
        let p = rng.gen_range(-5.0..20.0);
        [h, h * v1, h * v2, h * w, h * p, rng.gen_range(-1.0..1.0)]
    }
}

// ---------------------------------------------------------------------------

/// Which entropy pair an Euler system reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EulerEntropy {
    /// `U = ϱe + ½ϱv² + ϱφ`.
    #[default]
    TotalEnergy,
    /// `U = −ϱ log(p/ϱ^γ)`.
    Thermodynamic,
}

/// Compressible Euler equations with internal energy as thermodynamic
/// variable and a gravity potential, one dimension; state `(ϱ, ϱv, ϱe, φ)`.
///
/// Nonconservative terms: `ϱ ∂φ` in momentum and `−v ∂p` in internal energy.
#[derive(Debug, Clone, Copy)]
pub struct EulerInternal {
    pub gamma: f64,
    pub entropy: EulerEntropy,
}

impl EulerInternal {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self {
            gamma,
            entropy: EulerEntropy::TotalEnergy,
        })
    }

    pub fn with_entropy(mut self, entropy: EulerEntropy) -> Self {
        self.entropy = entropy;
        self
    }

    #[inline]
    pub fn pressure(&self, u: &[f64; 4]) -> f64 {
        (self.gamma - 1.0) * u[2]
    }
}

impl System<4> for EulerInternal {
    fn name(&self) -> &'static str {
        "euler_internal_energy"
    }
    fn dim(&self) -> usize {
        1
    }
    fn n_prognostic(&self) -> usize {
        3
    }
    fn flux(&self, u: &[f64; 4], n: Normal) -> [f64; 4] {
        let v = u[1] / u[0];
        let p = self.pressure(u);
        [n[0] * u[1], n[0] * (u[1] * v + p), n[0] * (u[2] + p) * v, 0.0]
    }
    fn nc_count(&self) -> usize {
        2
    }
    fn nc_factor(&self, u: &[f64; 4], n: Normal, k: usize) -> [f64; 4] {
        match k {
            0 => [0.0, n[0] * u[0], 0.0, 0.0],
            _ => [0.0, 0.0, -n[0] * u[1] / u[0], 0.0],
        }
    }
    fn nc_g(&self, u: &[f64; 4], k: usize) -> f64 {
        match k {
            0 => u[3],
            _ => self.pressure(u),
        }
    }
    fn entropy(&self, u: &[f64; 4]) -> f64 {
        match self.entropy {
            EulerEntropy::TotalEnergy => u[2] + 0.5 * u[1] * u[1] / u[0] + u[0] * u[3],
            EulerEntropy::Thermodynamic => {
                let s = (self.pressure(u) / u[0].powf(self.gamma)).ln();
                -u[0] * s
            }
        }
    }
    fn entropy_variables(&self, u: &[f64; 4]) -> [f64; 4] {
        let v = u[1] / u[0];
        match self.entropy {
            EulerEntropy::TotalEnergy => [-0.5 * v * v + u[3], v, 1.0, 0.0],
            EulerEntropy::Thermodynamic => {
                let s = (self.pressure(u) / u[0].powf(self.gamma)).ln();
                [self.gamma - s, 0.0, -u[0] / u[2], 0.0]
            }
        }
    }
    fn entropy_flux(&self, u: &[f64; 4], n: Normal) -> f64 {
        let v = u[1] / u[0];
        match self.entropy {
            EulerEntropy::TotalEnergy => n[0] * (self.entropy(u) + self.pressure(u)) * v,
            EulerEntropy::Thermodynamic => n[0] * self.entropy(u) * v,
        }
    }
    fn wave_speed(&self, u: &[f64; 4]) -> f64 {
        (u[1] / u[0]).abs() + (self.gamma * self.pressure(u) / u[0]).sqrt()
    }
    fn admissible(&self, u: &[f64; 4]) -> Result<()> {
        check_finite(u)?;
        check_positive("density", u[0])?;
        check_positive("pressure", self.pressure(u))
    }
    fn wall_state(&self, u: &[f64; 4], _n: Normal) -> [f64; 4] {
        [u[0], -u[1], u[2], u[3]]
    }
    fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 4] {
        let rho = rng.gen_range(0.5..3.0);
        let v = rng.gen_range(-2.0..2.0);
        let p = rng.gen_range(0.5..5.0);
        [rho, rho * v, p / (self.gamma - 1.0), rng.gen_range(-1.0..1.0)]
    }
}

/// Two-dimensional counterpart of [`EulerInternal`]; state
/// `(ϱ, ϱv₁, ϱv₂, ϱe, φ)`.
#[derive(Debug, Clone, Copy)]
pub struct EulerInternal2D {
    pub gamma: f64,
    pub entropy: EulerEntropy,
}

impl EulerInternal2D {
    pub fn new(gamma: f64) -> Result<Self> {
        let e = EulerInternal::new(gamma)?;
        Ok(Self {
            gamma: e.gamma,
            entropy: e.entropy,
        })
    }

    pub fn with_entropy(mut self, entropy: EulerEntropy) -> Self {
        self.entropy = entropy;
        self
    }

    #[inline]
    pub fn pressure(&self, u: &[f64; 5]) -> f64 {
        (self.gamma - 1.0) * u[3]
    }
}

impl System<5> for EulerInternal2D {
    fn name(&self) -> &'static str {
        "euler_internal_energy_2d"
    }
    fn dim(&self) -> usize {
        2
    }
    fn n_prognostic(&self) -> usize {
        4
    }
    fn flux(&self, u: &[f64; 5], n: Normal) -> [f64; 5] {
        let vn = (u[1] * n[0] + u[2] * n[1]) / u[0];
        let p = self.pressure(u);
        [
            u[0] * vn,
            u[1] * vn + p * n[0],
            u[2] * vn + p * n[1],
            (u[3] + p) * vn,
            0.0,
        ]
    }
    fn nc_count(&self) -> usize {
        2
    }
    fn nc_factor(&self, u: &[f64; 5], n: Normal, k: usize) -> [f64; 5] {
        match k {
            0 => [0.0, u[0] * n[0], u[0] * n[1], 0.0, 0.0],
            _ => [0.0, 0.0, 0.0, -(u[1] * n[0] + u[2] * n[1]) / u[0], 0.0],
        }
    }
    fn nc_g(&self, u: &[f64; 5], k: usize) -> f64 {
        match k {
            0 => u[4],
            _ => self.pressure(u),
        }
    }
    fn entropy(&self, u: &[f64; 5]) -> f64 {
        match self.entropy {
            EulerEntropy::TotalEnergy => u[3] + 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0] + u[0] * u[4],
            EulerEntropy::Thermodynamic => {
                let s = (self.pressure(u) / u[0].powf(self.gamma)).ln();
                -u[0] * s
            }
        }
    }
    fn entropy_variables(&self, u: &[f64; 5]) -> [f64; 5] {
        let (v1, v2) = (u[1] / u[0], u[2] / u[0]);
        match self.entropy {
            EulerEntropy::TotalEnergy => [-0.5 * (v1 * v1 + v2 * v2) + u[4], v1, v2, 1.0, 0.0],
            EulerEntropy::Thermodynamic => {
                let s = (self.pressure(u) / u[0].powf(self.gamma)).ln();
                [self.gamma - s, 0.0, 0.0, -u[0] / u[3], 0.0]
            }
        }
    }
    fn entropy_flux(&self, u: &[f64; 5], n: Normal) -> f64 {
        let vn = (u[1] * n[0] + u[2] * n[1]) / u[0];
        match self.entropy {
            EulerEntropy::TotalEnergy => (self.entropy(u) + self.pressure(u)) * vn,
            EulerEntropy::Thermodynamic => self.entropy(u) * vn,
        }
    }
    fn wave_speed(&self, u: &[f64; 5]) -> f64 {
        (u[1] * u[1] + u[2] * u[2]).sqrt() / u[0] + (self.gamma * self.pressure(u) / u[0]).sqrt()
    }
    fn admissible(&self, u: &[f64; 5]) -> Result<()> {
        check_finite(u)?;
        check_positive("density", u[0])?;
        check_positive("pressure", self.pressure(u))
    }
    fn wall_state(&self, u: &[f64; 5], n: Normal) -> [f64; 5] {
        let nn = n[0] * n[0] + n[1] * n[1];
        let mn = (u[1] * n[0] + u[2] * n[1]) / nn;
        [u[0], u[1] - 2.0 * mn * n[0], u[2] - 2.0 * mn * n[1], u[3], u[4]]
    }
    fn sample_state<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 5] {
        let rho = rng.gen_range(0.5..3.0);
        let v1 = rng.gen_range(-2.0..2.0);
        let v2 = rng.gen_range(-2.0..2.0);
        let p = rng.gen_range(0.5..5.0);
        [rho, rho * v1, rho * v2, p / (self.gamma - 1.0), rng.gen_range(-1.0..1.0)]
    }
}

// ---------------------------------------------------------------------------

/// Central finite-difference gradient of a scalar function of the state.
pub fn fd_gradient<const N: usize>(f: impl Fn(&[f64; N]) -> f64, u: &[f64; N], step: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for j in 0..N {
        let h = step * u[j].abs().max(1.0);
        let mut up = *u;
        let mut dn = *u;
        up[j] += h;
        dn[j] -= h;
        out[j] = (f(&up) - f(&dn)) / (2.0 * h);
    }
    out
}

/// Central finite-difference Jacobian, `J[r][c] = ∂f_r/∂u_c`.
pub fn fd_jacobian<const N: usize>(f: impl Fn(&[f64; N]) -> [f64; N], u: &[f64; N], step: f64) -> [[f64; N]; N] {
    let mut out = [[0.0; N]; N];
    for c in 0..N {
        let h = step * u[c].abs().max(1.0);
        let mut up = *u;
        let mut dn = *u;
        up[c] += h;
        dn[c] -= h;
        let (fu, fd) = (f(&up), f(&dn));
        for r in 0..N {
            out[r][c] = (fu[r] - fd[r]) / (2.0 * h);
        }
    }
    out
}

/// Residual of `ω·f' + Σ_k (ω·H_k) g_k' = F'` with finite-difference
/// derivatives, scaled by `1 + max |F'|`.
pub fn check_entropy_compatibility<const N: usize, S: System<N>>(sys: &S, u: &[f64; N], n: Normal) -> Result<f64> {
    sys.admissible(u)?;
    let step = 1e-6;
    let w = sys.entropy_variables(u);
    let jac = fd_jacobian(|x| sys.flux(x, n), u, step);
    let df = fd_gradient(|x| sys.entropy_flux(x, n), u, step);
    let mut lhs = [0.0; N];
    for c in 0..N {
        lhs[c] = (0..N).map(|r| w[r] * jac[r][c]).sum();
    }
    for k in 0..sys.nc_count() {
        let wh = dot(&w, &sys.nc_factor(u, n, k));
        let dg = fd_gradient(|x| sys.nc_g(x, k), u, step);
        for c in 0..N {
            lhs[c] += wh * dg[c];
        }
    }
    let scale = 1.0 + df.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    Ok(lhs
        .iter()
        .zip(&df)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn thermodynamic_entropy_variables_at_reference_state() {
        let e = EulerInternal::new(1.4).unwrap().with_entropy(EulerEntropy::Thermodynamic);
        let w = e.entropy_variables(&[1.0, 0.0, 1.0 / 0.4, 0.0]);
        assert_abs_diff_eq!(w[0], 1.4, epsilon = 1e-14);
        assert_eq!(w[1], 0.0);
        assert_abs_diff_eq!(w[2], -0.4, epsilon = 1e-14);
    }

    #[test]
    fn shallow_water_potential() {
        let sw = ShallowWater::new(10.0).unwrap();
        let psi = sw.entropy_potential(&[2.0, 6.0, 0.3], X_DIR);
        assert_abs_diff_eq!(psi, 60.0, epsilon = 1e-12);
    }

    #[test]
    fn advection_zero_state() {
        let s = VarAdvection;
        assert_eq!(s.entropy(&[0.0, 2.0]), 0.0);
        assert_eq!(s.entropy_variables(&[0.0, 2.0]), [0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ShallowWater::new(0.0).is_err());
        assert!(SainteMarie::new(1.0, -1.0).is_err());
        assert!(EulerInternal::new(1.0).is_err());
        assert!(Monomial::new(0, 3, MonomialSplit::Product).is_err());
    }

    #[test]
    fn compatibility_spot_checks() {
        let sw = ShallowWater::new(9.81).unwrap();
        assert!(check_entropy_compatibility(&sw, &[2.0, 1.0, 0.0], X_DIR).unwrap() < 1e-5);
        for ent in [EulerEntropy::TotalEnergy, EulerEntropy::Thermodynamic] {
            let e = EulerInternal::new(1.4).unwrap().with_entropy(ent);
            assert!(check_entropy_compatibility(&e, &[1.0, 0.3, 2.0, 0.1], X_DIR).unwrap() < 1e-5);
        }
        for split in [MonomialSplit::Product, MonomialSplit::FluxMinusProduct] {
            let m = Monomial::new(2, 3, split).unwrap();
            assert!(check_entropy_compatibility(&m, &[0.7], X_DIR).unwrap() < 1e-6);
        }
    }

    #[test]
    fn inadmissible_state_is_reported() {
        let e = EulerInternal::new(1.4).unwrap();
        assert!(check_entropy_compatibility(&e, &[-1.0, 0.0, 1.0, 0.0], X_DIR).is_err());
    }

    #[test]
    fn wall_state_reverses_normal_momentum() {
        let s = SainteMarie2D::new(9.81, 1.98).unwrap();
        let u = [2.0, 1.0, 3.0, 0.5, 0.25, 0.1];
        let g = s.wall_state(&u, [0.6, 0.8]);
        let m_in = u[1] * 0.6 + u[2] * 0.8;
        let m_out = g[1] * 0.6 + g[2] * 0.8;
        assert_abs_diff_eq!(m_out, -m_in, epsilon = 1e-14);
        let t_in = -u[1] * 0.8 + u[2] * 0.6;
        let t_out = -g[1] * 0.8 + g[2] * 0.6;
        assert_abs_diff_eq!(t_out, t_in, epsilon = 1e-14);
    }
}
