//! Ready-made setups: meshes, initial data and coefficient fields for the
//! standard studies, plus a driver that integrates and collects diagnostics.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::fluxes::{
    AdvectionFlux, EulerEcKep, EulerEs, FluxSet, MonomialEc1, MonomialEc2, PowerMean, SainteMarieFlux,
};
use crate::mesh::{default_warp, Boundary, CurvilinearMesh2D, Mesh1D};
use crate::sbp::SbpOperator;
use crate::semidisc::{Discretization1D, Discretization2D, Semidiscretization, State};
use crate::systems::{
    EulerEntropy, EulerInternal, EulerInternal2D, Monomial, SainteMarie, SainteMarie2D, VarAdvection,
};
use crate::timeint::{integrate, IntegratorConfig};

/// Side length of the square used by the 2D studies.
pub const SQUARE: f64 = std::f64::consts::SQRT_2;

/// Outcome of an integration with diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub steps: usize,
    pub t_final: f64,
    /// Relative change of the entropy integral at the final time.
    pub entropy_drift: f64,
    /// Relative integral of the pointwise entropy change at the final time.
    pub entropy_deviation: f64,
    /// Entropy residual at the final time.
    pub entropy_residual: f64,
    /// Largest absolute entropy residual over the recorded times.
    pub max_entropy_residual: f64,
    /// Absolute change of every prognostic integral.
    pub mass_drift: Vec<f64>,
    pub records: Vec<DiagnosticsRecord>,
}

/// Integrate `u0` and record diagnostics at the observer cadence of `config`.
pub fn run<const N: usize, D: Semidiscretization<N>>(
    disc: &D,
    u0: State<N>,
    config: &IntegratorConfig,
) -> Result<(State<N>, RunSummary)> {
    let init = u0.clone();
    let mut records = Vec::new();
    let out = integrate(disc, u0, 0.0, config, |t, u, _| {
        records.push(DiagnosticsRecord::new(disc, u, &init, t));
    })?;
    let last = records.last().cloned().expect("integrate always observes the final state");
    let first = &records[0];
    let summary = RunSummary {
        steps: out.steps,
        t_final: out.t,
        entropy_drift: last.entropy_drift,
        entropy_deviation: last.entropy_deviation,
        entropy_residual: last.entropy_residual,
        max_entropy_residual: records.iter().map(|r| r.entropy_residual.abs()).fold(0.0, f64::max),
        mass_drift: last.totals.iter().zip(&first.totals).map(|(a, b)| (a - b).abs()).collect(),
        records,
    };
    Ok((out.state, summary))
}

// ---------------------------------------------------------------------------
// Variable-coefficient advection.

pub type AdvectionDisc = Discretization1D<2, VarAdvection, AdvectionFlux, AdvectionFlux>;

/// `u₀ = 2 + sin(π(x − 0.7))`, `a = 2 + cos(πx)` on periodic `[−1, 1]`.
pub fn advection(degree: usize, elements: usize) -> Result<(AdvectionDisc, State<2>)> {
    let mesh = Mesh1D::periodic(-1.0, 1.0, elements)?;
    let disc = Discretization1D::new(mesh, SbpOperator::gll(degree)?, VarAdvection, AdvectionFlux, AdvectionFlux)?;
    let u0 = disc.project(&|x| [2.0 + (PI * (x[0] - 0.7)).sin(), 2.0 + (PI * x[0]).cos()]);
    Ok((disc, u0))
}

/// Uniform speed `a = 1` with the same initial profile; the exact solution is
/// the translate `u₀(x − t)`.
pub fn advection_uniform(degree: usize, elements: usize) -> Result<(AdvectionDisc, State<2>)> {
    let mesh = Mesh1D::periodic(-1.0, 1.0, elements)?;
    let disc = Discretization1D::new(mesh, SbpOperator::gll(degree)?, VarAdvection, AdvectionFlux, AdvectionFlux)?;
    let u0 = disc.project(&|x| advection_uniform_exact(x, 0.0));
    Ok((disc, u0))
}

pub fn advection_uniform_exact(x: [f64; 2], t: f64) -> [f64; 2] {
    [2.0 + (PI * (x[0] - t - 0.7)).sin(), 1.0]
}

// ---------------------------------------------------------------------------
// Monomial equation.

/// Blow-up time of `u₀ = sin(πx)`:
/// `−1 / min_x n(m+n−1)π sin(πx)^{m+n−2} cos(πx)` over a uniform grid of
/// `samples` points on `[−1, 1]`.
pub fn monomial_tmax(m: u32, n: u32, samples: usize) -> Result<f64> {
    if m == 0 || n == 0 || samples < 2 {
        return Err(Error::InvalidParameter("exponents and sample count must be positive".into()));
    }
    let k = (m + n - 2) as i32;
    let c = n as f64 * (m + n - 1) as f64 * PI;
    let mut lo = f64::INFINITY;
    for i in 0..samples {
        let x = -1.0 + 2.0 * i as f64 / (samples - 1) as f64;
        lo = lo.min(c * (PI * x).sin().powi(k) * (PI * x).cos());
    }
    if !(lo < 0.0) {
        return Err(Error::InvalidParameter(format!("no blow-up for (m, n) = ({m}, {n})")));
    }
    Ok(-1.0 / lo)
}

pub fn monomial_ec1(m: u32, n: u32, degree: usize, elements: usize) -> Result<(Discretization1D<1, Monomial, MonomialEc1, MonomialEc1>, State<1>)> {
    let flux = MonomialEc1::new(m, n);
    monomial_problem(flux.system(), flux, degree, elements)
}

/// EC2 with `α = ½` and `h^num = ⟨u^n⟩`.
pub fn monomial_ec2(m: u32, n: u32, degree: usize, elements: usize) -> Result<(Discretization1D<1, Monomial, MonomialEc2, MonomialEc2>, State<1>)> {
    let flux = MonomialEc2::new(m, n, 0.5, PowerMean::MeanOfPowers);
    monomial_problem(flux.system(), flux, degree, elements)
}

/// Periodic `[−1, 1]` with `u₀ = sin πx` for any monomial flux set.
pub fn monomial_problem<F: FluxSet<1, Monomial> + Copy>(
    sys: Monomial,
    flux: F,
    degree: usize,
    elements: usize,
) -> Result<(Discretization1D<1, Monomial, F, F>, State<1>)> {
    let checked = Monomial::new(sys.m, sys.n, sys.split)?;
    let mesh = Mesh1D::periodic(-1.0, 1.0, elements)?;
    let disc = Discretization1D::new(mesh, SbpOperator::gll(degree)?, checked, flux, flux)?;
    let u0 = disc.project(&|x| [(PI * x[0]).sin()]);
    Ok((disc, u0))
}

// ---------------------------------------------------------------------------
// Sainte-Marie.

pub type SainteMarieDisc = Discretization1D<5, SainteMarie, SainteMarieFlux, SainteMarieFlux>;

/// Standard blending weights of the energy-conservative flux.
pub fn sainte_marie_flux() -> SainteMarieFlux {
    SainteMarieFlux::new(0.5, 1.0, 2.0 / 3.0)
}

/// `h = 1 + e^{sin 2πx}`, `v = w = 1`, `p = 10`, `b = 0.1 e^{sin 2πx}` on
/// periodic `[0, 1]` with `g = 1`, `c = 2`.
pub fn sainte_marie_ec(degree: usize, elements: usize) -> Result<(SainteMarieDisc, State<5>)> {
    sainte_marie_with(sainte_marie_flux(), degree, elements)
}

/// [`sainte_marie_ec`] with arbitrary blending weights.
pub fn sainte_marie_with(flux: SainteMarieFlux, degree: usize, elements: usize) -> Result<(SainteMarieDisc, State<5>)> {
    let sys = SainteMarie::new(1.0, 2.0)?;
    let mesh = Mesh1D::periodic(0.0, 1.0, elements)?;
    let disc = Discretization1D::new(mesh, SbpOperator::gll(degree)?, sys, flux, flux)?;
    let u0 = disc.project(&|x| {
        let e = (2.0 * PI * x[0]).sin().exp();
        let h = 1.0 + e;
        [h, h, h, 10.0 * h, 0.1 * e]
    });
    Ok((disc, u0))
}

// ---------------------------------------------------------------------------
// Lake at rest on a warped mesh.

pub type WellBalancedDisc = Discretization2D<6, SainteMarie2D, SainteMarieFlux, SainteMarieFlux>;

/// Still-water level of the lake-at-rest study.
pub const LAKE_LEVEL: f64 = 3.0;

/// Smooth bathymetry made of two Gaussian bumps.
pub fn lake_bathymetry(x: f64, y: f64) -> f64 {
    1.5 * (-0.5 * ((x - 1.0).powi(2) + (y - 1.0).powi(2))).exp()
        + 0.75 * (-0.5 * ((x + 1.0).powi(2) + (y + 1.0).powi(2))).exp()
}

/// Bathymetry override inside element 7.
pub fn lake_bathymetry_override(x: f64, y: f64) -> f64 {
    2.0 + 0.5 * (2.0 * PI * x).sin() + 0.5 * (2.0 * PI * y).cos()
}

/// Warped 4×4 mesh of `[0, √2]²` with walls, `g = 9.81`, `c = 1.98` and a
/// lake at rest whose bottom jumps across the faces of element 7.
pub fn well_balanced(degree: usize) -> Result<(WellBalancedDisc, State<6>)> {
    let op = SbpOperator::gll(degree)?;
    let mesh = CurvilinearMesh2D::new(4, 4, (SQUARE, SQUARE), default_warp(SQUARE), &op, Boundary::Wall)?;
    let special = mesh.element_of_index(7).expect("4×4 mesh has element 7");
    let per = mesh.nodes_per_element();
    let sys = SainteMarie2D::new(9.81, 1.98)?;
    let f = sainte_marie_flux();
    let disc = Discretization2D::new(mesh, sys, f, f)?;
    let u0 = disc
        .coordinates()
        .iter()
        .enumerate()
        .map(|(q, &[x, y])| {
            let b = if q / per == special {
                lake_bathymetry_override(x, y)
            } else {
                lake_bathymetry(x, y)
            };
            [LAKE_LEVEL - b, 0.0, 0.0, 0.0, 0.0, b]
        })
        .collect();
    Ok((disc, u0))
}

/// M-norms of `H − H₀`, `v₁`, `v₂`, `w` and `p` for a lake-at-rest state.
pub fn lake_errors<D: Semidiscretization<6>>(disc: &D, u: &[[f64; 6]]) -> [f64; 5] {
    let mut acc = [0.0; 5];
    for (s, w) in u.iter().zip(disc.weights()) {
        let h = s[0];
        let vals = [h + s[5] - LAKE_LEVEL, s[1] / h, s[2] / h, s[3] / h, s[4] / h];
        for (a, v) in acc.iter_mut().zip(vals) {
            *a += w * v * v;
        }
    }
    acc.map(f64::sqrt)
}

// ---------------------------------------------------------------------------
// Compressible Euler in internal-energy form.

pub type Euler1D<V, F> = Discretization1D<4, EulerInternal, V, F>;
pub type Euler2D<V, F> = Discretization2D<5, EulerInternal2D, V, F>;

/// Warped, periodic `k × k` mesh of `[0, √2]²`.
pub fn warped_square(k: usize, degree: usize, boundary: Boundary) -> Result<CurvilinearMesh2D> {
    let op = SbpOperator::gll(degree)?;
    CurvilinearMesh2D::new(k, k, (SQUARE, SQUARE), default_warp(SQUARE), &op, boundary)
}

/// Constant state `(ϱ, v₁, v₂, p) = (1.2, 0.3, −0.4, 2)` on a warped periodic mesh.
pub fn euler_free_stream(degree: usize, k: usize) -> Result<(Euler2D<EulerEcKep, EulerEs>, State<5>)> {
    let sys = EulerInternal2D::new(1.4)?;
    let mesh = warped_square(k, degree, Boundary::Periodic)?;
    let disc = Discretization2D::new(mesh, sys, EulerEcKep, EulerEs::default())?;
    let (rho, v1, v2, p) = (1.2, 0.3, -0.4, 2.0);
    let u0 = disc.project(&|_| [rho, rho * v1, rho * v2, p / (sys.gamma - 1.0), 0.0]);
    Ok((disc, u0))
}

/// Smooth random density with unit velocity and pressure on periodic `[0, 1]`.
pub fn euler_pressure_equilibrium(degree: usize, elements: usize, seed: u64) -> Result<(Euler1D<EulerEcKep, EulerEcKep>, State<4>)> {
    let sys = EulerInternal::new(1.4)?;
    let mesh = Mesh1D::periodic(0.0, 1.0, elements)?;
    let disc = Discretization1D::new(mesh, SbpOperator::gll(degree)?, sys, EulerEcKep, EulerEcKep)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64)> = (1..=4)
        .map(|_| (rng.gen_range(-0.15..0.15), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    let u0 = disc.project(&|x| {
        let rho = 1.0 + modes
            .iter()
            .enumerate()
            .map(|(k, (a, ph))| a * (2.0 * PI * (k + 1) as f64 * x[0] + ph).sin())
            .sum::<f64>();
        [rho, rho, 1.0 / (sys.gamma - 1.0), 0.0]
    });
    Ok((disc, u0))
}

/// Flow in the potential `φ = x` on periodic `[0, 1]`, measured in total
/// energy. The potential jumps at the periodic seam, so the pressure starts in
/// hydrostatic balance with it and a small velocity perturbation drives the flow.
pub fn euler_potential(degree: usize, elements: usize) -> Result<(Euler1D<EulerEcKep, EulerEcKep>, State<4>)> {
    let sys = EulerInternal::new(1.4)?.with_entropy(EulerEntropy::TotalEnergy);
    let mesh = Mesh1D::periodic(0.0, 1.0, elements)?;
    let disc = Discretization1D::new(mesh, SbpOperator::gll(degree)?, sys, EulerEcKep, EulerEcKep)?;
    let u0 = disc.project(&|x| {
        let v = 0.1 * (2.0 * PI * x[0]).sin();
        let p = 5.0 - x[0];
        [1.0, v, p / (sys.gamma - 1.0), x[0]]
    });
    Ok((disc, u0))
}

/// Manufactured Euler solution: `ϱ = h`, `v = 0`, `ϱe = h² − h` with
/// `h = 2 + 0.1 sin(√2π(x − t))`.
pub struct EulerManufactured {
    pub gamma: f64,
}

impl EulerManufactured {
    const AMPLITUDE: f64 = 0.1;

    fn phase(x: f64, t: f64) -> f64 {
        SQUARE * PI * (x - t)
    }

    pub fn h(&self, x: f64, t: f64) -> f64 {
        2.0 + Self::AMPLITUDE * Self::phase(x, t).sin()
    }

    /// `∂h/∂x`; the time derivative is its negative.
    pub fn h_x(&self, x: f64, t: f64) -> f64 {
        Self::AMPLITUDE * SQUARE * PI * Self::phase(x, t).cos()
    }

    pub fn exact(&self, x: [f64; 2], t: f64) -> [f64; 5] {
        let h = self.h(x[0], t);
        [h, 0.0, 0.0, h * h - h, 0.0]
    }

    /// Residual of the exact solution: `(h_t, ∂ₓp, 0, (2h − 1)h_t)` with
    /// `p = (γ − 1)(h² − h)`.
    pub fn source(&self, x: [f64; 2], t: f64) -> [f64; 5] {
        let h = self.h(x[0], t);
        let hx = self.h_x(x[0], t);
        let ht = -hx;
        [ht, (self.gamma - 1.0) * (2.0 * h - 1.0) * hx, 0.0, (2.0 * h - 1.0) * ht, 0.0]
    }
}

/// Manufactured-solution problem on the warped periodic `k × k` mesh with
/// entropy-conservative KEP fluxes in the volume and on the faces. The
/// dissipative flux is unusable here because its pressure coefficient blows
/// up as the velocity vanishes.
pub fn euler_convergence(degree: usize, k: usize) -> Result<(Euler2D<EulerEcKep, EulerEcKep>, State<5>, EulerManufactured)> {
    let sys = EulerInternal2D::new(1.4)?;
    let mesh = warped_square(k, degree, Boundary::Periodic)?;
    let ms = EulerManufactured { gamma: sys.gamma };
    let forcing = EulerManufactured { gamma: sys.gamma };
    let disc = Discretization2D::new(mesh, sys, EulerEcKep, EulerEcKep)?
        .with_forcing(Box::new(move |x, t| forcing.source(x, t)));
    let u0 = disc.project(&|x| ms.exact(x, 0.0));
    Ok((disc, u0, ms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::System;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tmax_of_burgers_like_pair() {
        // m + n = 2 reduces to −1/min(nπ cos πx) = 1/(nπ).
        assert_abs_diff_eq!(monomial_tmax(1, 1, 1001).unwrap(), 1.0 / PI, epsilon = 1e-12);
        assert!(monomial_tmax(0, 1, 10).is_err());
    }

    #[test]
    fn lake_depth_stays_positive() {
        for p in 2..=5 {
            let (_, u) = well_balanced(p).unwrap();
            assert!(u.iter().all(|s| s[0] > 0.0));
        }
    }

    #[test]
    fn manufactured_source_matches_finite_differences() {
        // Residual ∂t u + ∂x f + H ∂x g of the exact solution by central
        // differences in x and t.
        let ms = EulerManufactured { gamma: 1.4 };
        let sys = EulerInternal2D::new(1.4).unwrap();
        let e = 1e-5;
        for &(x, t) in &[(0.1, 0.0), (0.77, 0.3), (1.3, 1.9)] {
            let at = |x: f64, t: f64| ms.exact([x, 0.4], t);
            let (up, um) = (at(x, t + e), at(x, t - e));
            let (fp, fm) = (sys.flux(&at(x + e, t), [1.0, 0.0]), sys.flux(&at(x - e, t), [1.0, 0.0]));
            let u = at(x, t);
            let mut r: [f64; 5] = std::array::from_fn(|c| (up[c] - um[c]) / (2.0 * e) + (fp[c] - fm[c]) / (2.0 * e));
            for k in 0..sys.nc_count() {
                let h = sys.nc_factor(&u, [1.0, 0.0], k);
                let dg = (sys.nc_g(&at(x + e, t), k) - sys.nc_g(&at(x - e, t), k)) / (2.0 * e);
                for c in 0..5 {
                    r[c] += h[c] * dg;
                }
            }
            let s = ms.source([x, 0.4], t);
            for c in 0..4 {
                assert_abs_diff_eq!(r[c], s[c], epsilon = 1e-8);
            }
        }
    }
}
