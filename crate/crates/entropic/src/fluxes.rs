//! Two-point numerical fluxes.
//!
//! A [`FluxSet`] supplies the conservative flux `f^num(u−, u+)` and, for every
//! nonconservative term `k`, the interface product `H_k^num(u−, u+)·(g_k(u+) −
//! g_k(u−))` together with a blending weight `α_k`. The semi-discretization
//! uses `α_k` times that product plus `1 − α_k` times the pointwise product
//! `H_k(u−)·⟦g_k⟧`.
//!
//! Arguments are ordered `(inner, outer)` with `n` pointing from inner to
//! outer; both volume and surface terms call the fluxes that way.

use crate::error::{Error, Result};
use crate::systems::{
    CoupledBurgers, EulerInternal, EulerInternal2D, Monomial, MonomialSplit, Normal, SainteMarie,
    SainteMarie2D, ShallowWater, System, VarAdvection,
};

#[inline]
fn mean(a: f64, b: f64) -> f64 {
    0.5 * (a + b)
}

/// Sign with `sign(0) = 0`.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `(b − a) / (ln b − ln a)`, evaluated with a truncated series when the
/// arguments are close.
#[inline]
pub fn ln_mean(a: f64, b: f64) -> f64 {
    let zeta = (b - a) / (b + a);
    let f = zeta * zeta;
    if f < 1e-4 {
        0.5 * (a + b) / (1.0 + f * (1.0 / 3.0 + f * (1.0 / 5.0 + f / 7.0)))
    } else {
        (b - a) / (b / a).ln()
    }
}

/// Checked logarithmic mean.
pub fn logarithmic_mean(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "logarithmic mean needs positive arguments, got ({a}, {b})"
        )));
    }
    Ok(ln_mean(a, b))
}

/// `⦃a·b⦄ = ½(a−b+ + a+b−)`.
#[inline]
pub fn product_mean(a_minus: f64, a_plus: f64, b_minus: f64, b_plus: f64) -> f64 {
    0.5 * (a_minus * b_plus + a_plus * b_minus)
}

/// `Σ_{k=0}^{d} x^{d−k} y^k`.
fn homogeneous_sum(x: f64, y: f64, d: u32) -> f64 {
    let mut s = 0.0;
    let mut yk = 1.0;
    for k in 0..=d {
        s += x.powi((d - k) as i32) * yk;
        yk *= y;
    }
    s
}

/// `Σ_{k=0}^{d} (−1)^k x^{d−k} y^k`.
fn alternating_sum(x: f64, y: f64, d: u32) -> f64 {
    homogeneous_sum(x, -y, d)
}

/// Numerical fluxes for a system `S`.
pub trait FluxSet<const N: usize, S: System<N>>: Send + Sync {
    fn name(&self) -> &'static str;

    /// Contracted conservative flux `n·f^num(u−, u+)`.
    fn conservative(&self, sys: &S, ul: &[f64; N], ur: &[f64; N], n: Normal) -> [f64; N];

    /// Contracted factor `n·H_k^num(u−, u+)`, or `None` if only the product
    /// with the jump is available.
    fn nc_factor(&self, sys: &S, ul: &[f64; N], ur: &[f64; N], n: Normal, k: usize) -> Option<[f64; N]>;

    /// `n·H_k^num(u−, u+) ⟦g_k⟧`.
    fn nc_jump_product(&self, sys: &S, ul: &[f64; N], ur: &[f64; N], n: Normal, k: usize) -> [f64; N] {
        let h = self
            .nc_factor(sys, ul, ur, n, k)
            .expect("flux set must override nc_jump_product when it has no factor");
        let jump = sys.nc_g(ur, k) - sys.nc_g(ul, k);
        h.map(|x| x * jump)
    }

    /// Blending weight `α_k` between the numerical factor and the pointwise one.
    fn alpha(&self, k: usize) -> f64;

    /// Whether `conservative` is symmetric in its two states.
    fn symmetric(&self) -> bool {
        true
    }
}

// ---------------------------------------------------------------------------

/// Arithmetic mean of the physical flux and of the nonconservative factors.
/// Consistent but generally not entropy-conservative; used as a baseline.
#[derive(Debug, Clone, Copy)]
pub struct CentralFlux {
    pub alpha: f64,
}

impl<const N: usize, S: System<N>> FluxSet<N, S> for CentralFlux {
    fn name(&self) -> &'static str {
        "central"
    }
    fn conservative(&self, sys: &S, ul: &[f64; N], ur: &[f64; N], n: Normal) -> [f64; N] {
        let (a, b) = (sys.flux(ul, n), sys.flux(ur, n));
        std::array::from_fn(|i| mean(a[i], b[i]))
    }
    fn nc_factor(&self, sys: &S, ul: &[f64; N], ur: &[f64; N], n: Normal, k: usize) -> Option<[f64; N]> {
        let (a, b) = (sys.nc_factor(ul, n, k), sys.nc_factor(ur, n, k));
        Some(std::array::from_fn(|i| mean(a[i], b[i])))
    }
    fn alpha(&self, _k: usize) -> f64 {
        self.alpha
    }
}

// ---------------------------------------------------------------------------

/// Pointwise nonconservative product only (`α = 0`); at `p = 0` this is the
/// central three-point scheme for variable-coefficient advection.
#[derive(Debug, Clone, Copy, Default)]
pub struct AdvectionFlux;

impl FluxSet<2, VarAdvection> for AdvectionFlux {
    fn name(&self) -> &'static str {
        "advection_ec"
    }
    fn conservative(&self, _sys: &VarAdvection, _ul: &[f64; 2], _ur: &[f64; 2], _n: Normal) -> [f64; 2] {
        [0.0; 2]
    }
    fn nc_factor(&self, _sys: &VarAdvection, ul: &[f64; 2], ur: &[f64; 2], n: Normal, _k: usize) -> Option<[f64; 2]> {
        Some([n[0] * mean(ul[1], ur[1]), 0.0])
    }
    fn alpha(&self, _k: usize) -> f64 {
        0.0
    }
}

// ---------------------------------------------------------------------------

/// Arithmetic-mean factors with `α = 2/3`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CoupledBurgersFlux;

impl FluxSet<2, CoupledBurgers> for CoupledBurgersFlux {
    fn name(&self) -> &'static str {
        "coupled_burgers_ec"
    }
    fn conservative(&self, _sys: &CoupledBurgers, _ul: &[f64; 2], _ur: &[f64; 2], _n: Normal) -> [f64; 2] {
        [0.0; 2]
    }
    fn nc_factor(&self, _sys: &CoupledBurgers, ul: &[f64; 2], ur: &[f64; 2], n: Normal, k: usize) -> Option<[f64; 2]> {
        Some(match k {
            0 => [n[0] * mean(ul[0], ur[0]), 0.0],
            _ => [0.0, n[0] * mean(ul[1], ur[1])],
        })
    }
    fn alpha(&self, _k: usize) -> f64 {
        2.0 / 3.0
    }
}

// ---------------------------------------------------------------------------

/// Fluctuation `h^num ⟦u^n⟧` of the first monomial scheme.
///
/// With `α = (m+1)/(m+n+1)` entropy conservation forces
/// `h^num⟦u^n⟧ = n/(m+1) · ⟦u^{m+1}⟧ (u−^n + u+^n)/(u− + u+)`. The quotient
/// is polynomial when `n` is odd, and `⟦u^{m+1}⟧/(u− + u+)` is polynomial when
/// `m` is odd. When both are even no such polynomial exists and
/// `(u−^n + u+^n)/(u− + u+)` is replaced by the segment mean
/// `⟦u^n⟧/(n⟦u⟧)` of `u^{n−1}`, which keeps the fluctuation consistent and
/// antisymmetric but not entropy-conservative.
pub fn monomial_ec1_fluctuation(m: u32, n: u32, u_minus: f64, u_plus: f64) -> f64 {
    let c = n as f64 / (m as f64 + 1.0);
    if n % 2 == 1 {
        let jump = u_plus.powi(m as i32 + 1) - u_minus.powi(m as i32 + 1);
        c * jump * alternating_sum(u_plus, u_minus, n - 1)
    } else if m % 2 == 1 {
        let sum = u_plus.powi(n as i32) + u_minus.powi(n as i32);
        // ⟦u^{m+1}⟧/(u− + u+) = Σ_{k=0}^{m} (−1)^k u+^{m−k} u−^k for odd m
        c * alternating_sum(u_plus, u_minus, m) * sum
    } else {
        let jump = u_plus.powi(m as i32 + 1) - u_minus.powi(m as i32 + 1);
        c * jump * homogeneous_sum(u_plus, u_minus, n - 1) / n as f64
    }
}

/// First monomial scheme: `f = 0`, nonconservative product `u^m ∂x u^n`.
#[derive(Debug, Clone, Copy)]
pub struct MonomialEc1 {
    pub m: u32,
    pub n: u32,
}

impl MonomialEc1 {
    pub fn new(m: u32, n: u32) -> Self {
        Self { m, n }
    }

    pub fn system(&self) -> Monomial {
        Monomial {
            m: self.m,
            n: self.n,
            split: MonomialSplit::Product,
        }
    }
}

impl FluxSet<1, Monomial> for MonomialEc1 {
    fn name(&self) -> &'static str {
        "monomial_ec1"
    }
    fn conservative(&self, _sys: &Monomial, _ul: &[f64; 1], _ur: &[f64; 1], _n: Normal) -> [f64; 1] {
        [0.0]
    }
    fn nc_factor(&self, _sys: &Monomial, _ul: &[f64; 1], _ur: &[f64; 1], _n: Normal, _k: usize) -> Option<[f64; 1]> {
        None
    }
    fn nc_jump_product(&self, _sys: &Monomial, ul: &[f64; 1], ur: &[f64; 1], n: Normal, _k: usize) -> [f64; 1] {
        [n[0] * monomial_ec1_fluctuation(self.m, self.n, ul[0], ur[0])]
    }
    fn alpha(&self, _k: usize) -> f64 {
        (self.m as f64 + 1.0) / ((self.m + self.n) as f64 + 1.0)
    }
}

/// Mean used for the factor `h^num ≈ u^n` of the second monomial scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerMean {
    /// `⟨u^n⟩`.
    #[default]
    MeanOfPowers,
    /// `⟨u⟩^n`.
    PowerOfMean,
}

/// Second monomial scheme: `f = u^{m+n}`, nonconservative product `−u^n ∂x u^m`.
#[derive(Debug, Clone, Copy)]
pub struct MonomialEc2 {
    pub m: u32,
    pub n: u32,
    pub alpha: f64,
    pub h_mean: PowerMean,
}

impl MonomialEc2 {
    pub fn new(m: u32, n: u32, alpha: f64, h_mean: PowerMean) -> Self {
        Self { m, n, alpha, h_mean }
    }

    pub fn system(&self) -> Monomial {
        Monomial {
            m: self.m,
            n: self.n,
            split: MonomialSplit::FluxMinusProduct,
        }
    }

    fn h_num(&self, a: f64, b: f64) -> f64 {
        match self.h_mean {
            PowerMean::MeanOfPowers => mean(a.powi(self.n as i32), b.powi(self.n as i32)),
            PowerMean::PowerOfMean => mean(a, b).powi(self.n as i32),
        }
    }
}

impl FluxSet<1, Monomial> for MonomialEc2 {
    fn name(&self) -> &'static str {
        "monomial_ec2"
    }
    fn conservative(&self, _sys: &Monomial, ul: &[f64; 1], ur: &[f64; 1], n: Normal) -> [f64; 1] {
        let (a, b) = (ul[0], ur[0]);
        let (m, nn) = (self.m, self.n);
        let k = (m + nn) as f64 + 1.0;
        let s_m = homogeneous_sum(b, a, m - 1);
        let f = (m as f64 + 1.0) / k * homogeneous_sum(b, a, m + nn)
            - self.alpha * mean(a, b) * self.h_num(a, b) * s_m
            - (1.0 - self.alpha) * mean(a.powi(nn as i32 + 1), b.powi(nn as i32 + 1)) * s_m;
        [n[0] * f]
    }
    fn nc_factor(&self, _sys: &Monomial, ul: &[f64; 1], ur: &[f64; 1], n: Normal, _k: usize) -> Option<[f64; 1]> {
        Some([-n[0] * self.h_num(ul[0], ur[0])])
    }
    fn alpha(&self, _k: usize) -> f64 {
        self.alpha
    }
}

// ---------------------------------------------------------------------------

/// One-parameter family of entropy-conservative shallow-water fluxes.
#[derive(Debug, Clone, Copy)]
pub struct ShallowWaterFlux {
    pub alpha: f64,
}

impl FluxSet<3, ShallowWater> for ShallowWaterFlux {
    fn name(&self) -> &'static str {
        "shallow_water_ec"
    }
    fn conservative(&self, sys: &ShallowWater, ul: &[f64; 3], ur: &[f64; 3], n: Normal) -> [f64; 3] {
        let a = self.alpha;
        let g = sys.gravity;
        let (hl, hr) = (ul[0], ur[0]);
        let (vl, vr) = (ul[1] / hl, ur[1] / hr);
        let fh = a * mean(hl, hr) * mean(vl, vr) + (1.0 - a) * mean(ul[1], ur[1]);
        let hm = mean(hl, hr);
        let fhv = fh * mean(vl, vr) + (1.0 - a) * g * hm * hm + (a - 0.5) * g * mean(hl * hl, hr * hr);
        [n[0] * fh, n[0] * fhv, 0.0]
    }
    fn nc_factor(&self, sys: &ShallowWater, ul: &[f64; 3], ur: &[f64; 3], n: Normal, _k: usize) -> Option<[f64; 3]> {
        Some([0.0, n[0] * sys.gravity * mean(ul[0], ur[0]), 0.0])
    }
    fn alpha(&self, _k: usize) -> f64 {
        self.alpha
    }
}

// ---------------------------------------------------------------------------

/// Energy-conservative Sainte-Marie fluxes with weights `(α₁, α₂, α₃)` and
/// `α₄ = α₂`.
#[derive(Debug, Clone, Copy)]
pub struct SainteMarieFlux {
    pub alpha: [f64; 3],
}

impl SainteMarieFlux {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { alpha: [a1, a2, a3] }
    }

    /// `(f^h, scalar part of f^hv)` along a unit-free normal velocity pair.
    #[inline]
    #[allow(clippy::too_many_arguments)]
    fn mass_and_pressure(&self, g: f64, hl: f64, hr: f64, pl: f64, pr: f64, vnl: f64, vnr: f64) -> (f64, f64) {
        let [a1, _, a3] = self.alpha;
        let fh = a1 * mean(hl, hr) * mean(vnl, vnr) + (1.0 - a1) * mean(hl * vnl, hr * vnr);
        let hm = mean(hl, hr);
        let pres = (1.0 - a1) * g * hm * hm
            + (a1 - 0.5) * g * mean(hl * hl, hr * hr)
            + a3 * mean(pl, pr) * hm
            + (1.0 - a3) * mean(pl * hl, pr * hr);
        (fh, pres)
    }
}

impl FluxSet<5, SainteMarie> for SainteMarieFlux {
    fn name(&self) -> &'static str {
        "sainte_marie_ec"
    }
    fn conservative(&self, sys: &SainteMarie, ul: &[f64; 5], ur: &[f64; 5], n: Normal) -> [f64; 5] {
        let (hl, hr) = (ul[0], ur[0]);
        let (vl, vr) = (ul[1] / hl, ur[1] / hr);
        let (wl, wr) = (ul[2] / hl, ur[2] / hr);
        let (pl, pr) = (ul[3] / hl, ur[3] / hr);
        let (fh, pres) = self.mass_and_pressure(sys.gravity, hl, hr, pl, pr, vl, vr);
        [
            n[0] * fh,
            n[0] * (fh * mean(vl, vr) + pres),
            n[0] * fh * mean(wl, wr),
            n[0] * fh * mean(pl, pr),
            0.0,
        ]
    }
    fn nc_factor(&self, sys: &SainteMarie, ul: &[f64; 5], ur: &[f64; 5], n: Normal, k: usize) -> Option<[f64; 5]> {
        let c2 = sys.celerity * sys.celerity;
        let hm = mean(ul[0], ur[0]);
        Some(match k {
            0 => [0.0, n[0] * sys.gravity * hm, 0.0, 0.0, 0.0],
            1 => [0.0, n[0] * 2.0 * mean(ul[3] / ul[0], ur[3] / ur[0]), 0.0, 0.0, 0.0],
            2 => [0.0, 0.0, 0.0, n[0] * c2 * hm, 0.0],
            _ => [0.0, 0.0, 0.0, -n[0] * 2.0 * c2 * mean(ul[1] / ul[0], ur[1] / ur[0]), 0.0],
        })
    }
    fn alpha(&self, k: usize) -> f64 {
        match k {
            0 => self.alpha[0],
            2 => self.alpha[2],
            _ => self.alpha[1],
        }
    }
}

impl FluxSet<6, SainteMarie2D> for SainteMarieFlux {
    fn name(&self) -> &'static str {
        "sainte_marie_ec"
    }
    fn conservative(&self, sys: &SainteMarie2D, ul: &[f64; 6], ur: &[f64; 6], n: Normal) -> [f64; 6] {
        let (hl, hr) = (ul[0], ur[0]);
        let (v1l, v1r) = (ul[1] / hl, ur[1] / hr);
        let (v2l, v2r) = (ul[2] / hl, ur[2] / hr);
        let (wl, wr) = (ul[3] / hl, ur[3] / hr);
        let (pl, pr) = (ul[4] / hl, ur[4] / hr);
        let vnl = v1l * n[0] + v2l * n[1];
        let vnr = v1r * n[0] + v2r * n[1];
        let (fh, pres) = self.mass_and_pressure(sys.gravity, hl, hr, pl, pr, vnl, vnr);
        [
            fh,
            fh * mean(v1l, v1r) + pres * n[0],
            fh * mean(v2l, v2r) + pres * n[1],
            fh * mean(wl, wr),
            fh * mean(pl, pr),
            0.0,
        ]
    }
    fn nc_factor(&self, sys: &SainteMarie2D, ul: &[f64; 6], ur: &[f64; 6], n: Normal, k: usize) -> Option<[f64; 6]> {
        let c2 = sys.celerity * sys.celerity;
        let hm = mean(ul[0], ur[0]);
        Some(match k {
            0 => {
                let gh = sys.gravity * hm;
                [0.0, gh * n[0], gh * n[1], 0.0, 0.0, 0.0]
            }
            1 => {
                let p2 = 2.0 * mean(ul[4] / ul[0], ur[4] / ur[0]);
                [0.0, p2 * n[0], p2 * n[1], 0.0, 0.0, 0.0]
            }
            2 => [0.0, 0.0, 0.0, 0.0, c2 * hm * n[0], 0.0],
            3 => [0.0, 0.0, 0.0, 0.0, c2 * hm * n[1], 0.0],
            _ => {
                let vn = mean(ul[1] / ul[0], ur[1] / ur[0]) * n[0] + mean(ul[2] / ul[0], ur[2] / ur[0]) * n[1];
                [0.0, 0.0, 0.0, 0.0, -2.0 * c2 * vn, 0.0]
            }
        })
    }
    fn alpha(&self, k: usize) -> f64 {
        match k {
            0 => self.alpha[0],
            2 | 3 => self.alpha[2],
            _ => self.alpha[1],
        }
    }
}

// ---------------------------------------------------------------------------

/// Entropy-conservative, kinetic-energy-preserving Euler fluxes (`α = 1`)
/// that also conserve total energy.
#[derive(Debug, Clone, Copy, Default)]
pub struct EulerEcKep;

/// Scalar pieces shared by the 1D and 2D Euler fluxes: primitive states along
/// the normal.
struct EulerPair {
    rho: (f64, f64),
    p: (f64, f64),
    vn: (f64, f64),
}

impl EulerPair {
    fn rho_log(&self) -> f64 {
        ln_mean(self.rho.0, self.rho.1)
    }
    fn beta_log(&self) -> f64 {
        ln_mean(self.rho.0 / self.p.0, self.rho.1 / self.p.1)
    }
}

impl FluxSet<4, EulerInternal> for EulerEcKep {
    fn name(&self) -> &'static str {
        "euler_ec_kep"
    }
    fn conservative(&self, sys: &EulerInternal, ul: &[f64; 4], ur: &[f64; 4], n: Normal) -> [f64; 4] {
        let (vl, vr) = (ul[1] / ul[0], ur[1] / ur[0]);
        let pair = EulerPair {
            rho: (ul[0], ur[0]),
            p: (sys.pressure(ul), sys.pressure(ur)),
            vn: (vl, vr),
        };
        let vm = mean(vl, vr);
        let pm = mean(pair.p.0, pair.p.1);
        let fr = pair.rho_log() * vm;
        let fe = fr / ((sys.gamma - 1.0) * pair.beta_log()) + vm * pm;
        [n[0] * fr, n[0] * (fr * vm + pm), n[0] * fe, 0.0]
    }
    fn nc_factor(&self, _sys: &EulerInternal, ul: &[f64; 4], ur: &[f64; 4], n: Normal, k: usize) -> Option<[f64; 4]> {
        Some(match k {
            0 => [0.0, n[0] * ln_mean(ul[0], ur[0]), 0.0, 0.0],
            _ => [0.0, 0.0, -n[0] * mean(ul[1] / ul[0], ur[1] / ur[0]), 0.0],
        })
    }
    fn alpha(&self, _k: usize) -> f64 {
        1.0
    }
}

impl FluxSet<5, EulerInternal2D> for EulerEcKep {
    fn name(&self) -> &'static str {
        "euler_ec_kep"
    }
    fn conservative(&self, sys: &EulerInternal2D, ul: &[f64; 5], ur: &[f64; 5], n: Normal) -> [f64; 5] {
        let (v1l, v1r) = (ul[1] / ul[0], ur[1] / ur[0]);
        let (v2l, v2r) = (ul[2] / ul[0], ur[2] / ur[0]);
        let pair = EulerPair {
            rho: (ul[0], ur[0]),
            p: (sys.pressure(ul), sys.pressure(ur)),
            vn: (v1l * n[0] + v2l * n[1], v1r * n[0] + v2r * n[1]),
        };
        let vnm = mean(pair.vn.0, pair.vn.1);
        let pm = mean(pair.p.0, pair.p.1);
        let fr = pair.rho_log() * vnm;
        let fe = fr / ((sys.gamma - 1.0) * pair.beta_log()) + vnm * pm;
        [
            fr,
            fr * mean(v1l, v1r) + pm * n[0],
            fr * mean(v2l, v2r) + pm * n[1],
            fe,
            0.0,
        ]
    }
    fn nc_factor(&self, _sys: &EulerInternal2D, ul: &[f64; 5], ur: &[f64; 5], n: Normal, k: usize) -> Option<[f64; 5]> {
        Some(match k {
            0 => {
                let r = ln_mean(ul[0], ur[0]);
                [0.0, r * n[0], r * n[1], 0.0, 0.0]
            }
            _ => {
                let vn = mean(ul[1] / ul[0], ur[1] / ur[0]) * n[0] + mean(ul[2] / ul[0], ur[2] / ur[0]) * n[1];
                [0.0, 0.0, 0.0, -vn, 0.0]
            }
        })
    }
    fn alpha(&self, _k: usize) -> f64 {
        1.0
    }
}

/// Momentum flux used by [`EulerEs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentumFlux {
    /// Upwinded momentum with velocity-jump dissipation.
    #[default]
    Dissipative,
    /// `f^ϱ⟨v⟩ + ⟨p⟩`, which keeps the scheme kinetic-energy preserving.
    Kep,
}

/// Entropy-stable Euler fluxes built on an interface velocity
/// `V = ⟨v⟩ − β⟦p⟧` with `β = 1 / (2⟨ϱ⟩ max(|v−|, |v+|))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EulerEs {
    pub momentum: MomentumFlux,
}

/// Interface velocity and the upwinded density flux, along a unit normal.
fn es_mass_flux(pair: &EulerPair) -> (f64, f64, f64) {
    let rho_m = mean(pair.rho.0, pair.rho.1);
    let vmax = pair.vn.0.abs().max(pair.vn.1.abs());
    let denom = 2.0 * rho_m * vmax;
    let beta = if denom > 0.0 { 1.0 / denom } else { 0.0 };
    let v_int = mean(pair.vn.0, pair.vn.1) - beta * (pair.p.1 - pair.p.0);
    let fr = (pair.rho_log() - 0.5 * (pair.rho.1 - pair.rho.0) * sign(v_int)) * v_int;
    (v_int, fr, vmax)
}

impl EulerEs {
    pub fn new(momentum: MomentumFlux) -> Self {
        Self { momentum }
    }
}

impl FluxSet<4, EulerInternal> for EulerEs {
    fn name(&self) -> &'static str {
        "euler_es"
    }
    fn conservative(&self, sys: &EulerInternal, ul: &[f64; 4], ur: &[f64; 4], n: Normal) -> [f64; 4] {
        let s = n[0].abs();
        let nu = sign(n[0]);
        let (vl, vr) = (nu * ul[1] / ul[0], nu * ur[1] / ur[0]);
        let pair = EulerPair {
            rho: (ul[0], ur[0]),
            p: (sys.pressure(ul), sys.pressure(ur)),
            vn: (vl, vr),
        };
        let (v_int, fr, vmax) = es_mass_flux(&pair);
        let pm = mean(pair.p.0, pair.p.1);
        let fe = fr / ((sys.gamma - 1.0) * pair.beta_log()) + pm * v_int;
        // momentum along the normal, in the rotated frame
        let fm = match self.momentum {
            MomentumFlux::Dissipative => {
                let (ml, mr) = (ul[0] * vl, ur[0] * vr);
                (mean(ml, mr) - 0.5 * (mr - ml) * sign(v_int)) * v_int + pm
                    - 0.5 * vmax * mean(ul[0], ur[0]) * (vr - vl)
            }
            MomentumFlux::Kep => fr * mean(vl, vr) + pm,
        };
        [s * fr, s * nu * fm, s * fe, 0.0]
    }
    fn nc_factor(&self, sys: &EulerInternal, ul: &[f64; 4], ur: &[f64; 4], n: Normal, k: usize) -> Option<[f64; 4]> {
        Some(match k {
            0 => [0.0, n[0] * ln_mean(ul[0], ur[0]), 0.0, 0.0],
            _ => {
                let s = n[0].abs();
                let nu = sign(n[0]);
                let pair = EulerPair {
                    rho: (ul[0], ur[0]),
                    p: (sys.pressure(ul), sys.pressure(ur)),
                    vn: (nu * ul[1] / ul[0], nu * ur[1] / ur[0]),
                };
                let (v_int, _, _) = es_mass_flux(&pair);
                [0.0, 0.0, -s * v_int, 0.0]
            }
        })
    }
    fn alpha(&self, _k: usize) -> f64 {
        1.0
    }
    fn symmetric(&self) -> bool {
        false
    }
}

impl FluxSet<5, EulerInternal2D> for EulerEs {
    fn name(&self) -> &'static str {
        "euler_es"
    }
    fn conservative(&self, sys: &EulerInternal2D, ul: &[f64; 5], ur: &[f64; 5], n: Normal) -> [f64; 5] {
        let s = (n[0] * n[0] + n[1] * n[1]).sqrt();
        let nu = [n[0] / s, n[1] / s];
        let (v1l, v1r) = (ul[1] / ul[0], ur[1] / ur[0]);
        let (v2l, v2r) = (ul[2] / ul[0], ur[2] / ur[0]);
        let pair = EulerPair {
            rho: (ul[0], ur[0]),
            p: (sys.pressure(ul), sys.pressure(ur)),
            vn: (v1l * nu[0] + v2l * nu[1], v1r * nu[0] + v2r * nu[1]),
        };
        let (v_int, fr, vmax) = es_mass_flux(&pair);
        let pm = mean(pair.p.0, pair.p.1);
        let fe = fr / ((sys.gamma - 1.0) * pair.beta_log()) + pm * v_int;
        let (f1, f2) = match self.momentum {
            MomentumFlux::Dissipative => {
                let up = |ml: f64, mr: f64, vl: f64, vr: f64| {
                    (mean(ml, mr) - 0.5 * (mr - ml) * sign(v_int)) * v_int
                        - 0.5 * vmax * mean(ul[0], ur[0]) * (vr - vl)
                };
                (
                    up(ul[1], ur[1], v1l, v1r) + pm * nu[0],
                    up(ul[2], ur[2], v2l, v2r) + pm * nu[1],
                )
            }
            MomentumFlux::Kep => (fr * mean(v1l, v1r) + pm * nu[0], fr * mean(v2l, v2r) + pm * nu[1]),
        };
        [s * fr, s * f1, s * f2, s * fe, 0.0]
    }
    fn nc_factor(&self, sys: &EulerInternal2D, ul: &[f64; 5], ur: &[f64; 5], n: Normal, k: usize) -> Option<[f64; 5]> {
        Some(match k {
            0 => {
                let r = ln_mean(ul[0], ur[0]);
                [0.0, r * n[0], r * n[1], 0.0, 0.0]
            }
            _ => {
                let s = (n[0] * n[0] + n[1] * n[1]).sqrt();
                let nu = [n[0] / s, n[1] / s];
                let pair = EulerPair {
                    rho: (ul[0], ur[0]),
                    p: (sys.pressure(ul), sys.pressure(ur)),
                    vn: (
                        (ul[1] * nu[0] + ul[2] * nu[1]) / ul[0],
                        (ur[1] * nu[0] + ur[2] * nu[1]) / ur[0],
                    ),
                };
                let (v_int, _, _) = es_mass_flux(&pair);
                [0.0, 0.0, 0.0, -s * v_int, 0.0]
            }
        })
    }
    fn alpha(&self, _k: usize) -> f64 {
        1.0
    }
    fn symmetric(&self) -> bool {
        false
    }
}
