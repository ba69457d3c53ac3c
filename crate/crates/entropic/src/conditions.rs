//! Algebraic checks of two-point fluxes: entropy conservation/stability
//! conditions, induced numerical entropy fluxes, fluctuation conditions and
//! well-balancedness at an interface.
//!
//! Residuals are signed: positive values are violations of entropy stability,
//! zero means entropy conservation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fluxes::FluxSet;
use crate::systems::{dot, Normal, System};

fn jump<const N: usize>(a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| b[i] - a[i])
}

fn avg<const N: usize>(a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| 0.5 * (a[i] + b[i]))
}

/// Tadmor's condition for a purely conservative flux: `⟦ω⟧·f^num − ⟦ψ⟧`.
pub fn check_conservative_ec<const N: usize, S: System<N>>(
    sys: &S,
    f_num: &[f64; N],
    ul: &[f64; N],
    ur: &[f64; N],
    n: Normal,
) -> f64 {
    let dw = jump(&sys.entropy_variables(ul), &sys.entropy_variables(ur));
    dot(&dw, f_num) - (sys.entropy_potential(ur, n) - sys.entropy_potential(ul, n))
}

/// Terms of the blended nonconservative entropy condition, kept apart so that
/// callers can normalize by their magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcBreakdown {
    /// `⟦ω⟧·f^num`.
    pub flux_work: f64,
    /// `Σ_k α_k ⟨ω⟩·H_k^num⟦g_k⟧ + (1 − α_k)⟨ω·H_k⟩⟦g_k⟧`.
    pub nc_work: f64,
    /// `⟦ψ⟧`.
    pub potential_jump: f64,
    /// Sum of absolute values of every contribution, for scale-free tolerances.
    pub scale: f64,
}

impl EcBreakdown {
    pub fn residual(&self) -> f64 {
        self.flux_work - self.nc_work - self.potential_jump
    }

    /// Residual divided by `1 + scale`.
    pub fn normalized(&self) -> f64 {
        self.residual() / (1.0 + self.scale)
    }
}

pub fn nonconservative_ec_breakdown<const N: usize, S: System<N>, F: FluxSet<N, S>>(
    sys: &S,
    flux: &F,
    ul: &[f64; N], ur: &[f64; N],
    n: Normal,
) -> EcBreakdown {
    let (wl, wr) = (sys.entropy_variables(ul), sys.entropy_variables(ur));
    let dw = jump(&wl, &wr);
    let wm = avg(&wl, &wr);
    let f = flux.conservative(sys, ul, ur, n);
    let mut scale = 0.0;
    let mut flux_work = 0.0;
    for i in 0..N {
        flux_work += dw[i] * f[i];
        scale += (dw[i] * f[i]).abs();
    }
    let mut nc_work = 0.0;
    for k in 0..sys.nc_count() {
        let a = flux.alpha(k);
        let dg = sys.nc_g(ur, k) - sys.nc_g(ul, k);
        let num = dot(&wm, &flux.nc_jump_product(sys, ul, ur, n, k));
        let point = 0.5 * (dot(&wl, &sys.nc_factor(ul, n, k)) + dot(&wr, &sys.nc_factor(ur, n, k))) * dg;
        nc_work += a * num + (1.0 - a) * point;
        scale += (a * num).abs() + ((1.0 - a) * point).abs();
    }
    let potential_jump = sys.entropy_potential(ur, n) - sys.entropy_potential(ul, n);
    scale += potential_jump.abs();
    EcBreakdown {
        flux_work,
        nc_work,
        potential_jump,
        scale,
    }
}

/// `⟦ω⟧·f^num − Σ_k [α_k⟨ω⟩·H_k^num⟦g_k⟧ + (1 − α_k)⟨ω·H_k⟩⟦g_k⟧] − ⟦ψ⟧`.
pub fn check_nonconservative_ec<const N: usize, S: System<N>, F: FluxSet<N, S>>(
    sys: &S,
    flux: &F,
    ul: &[f64; N],
    ur: &[f64; N],
    n: Normal,
) -> f64 {
    nonconservative_ec_breakdown(sys, flux, ul, ur, n).residual()
}

/// The unique numerical entropy flux induced by an entropy-conservative flux
/// set, blended over the nonconservative terms.
pub fn induced_entropy_flux<const N: usize, S: System<N>, F: FluxSet<N, S>>(
    sys: &S,
    flux: &F,
    ul: &[f64; N],
    ur: &[f64; N],
    n: Normal,
) -> f64 {
    let (wl, wr) = (sys.entropy_variables(ul), sys.entropy_variables(ur));
    let dw = jump(&wl, &wr);
    let wm = avg(&wl, &wr);
    let f = flux.conservative(sys, ul, ur, n);
    let mut out = 0.5 * (sys.entropy_flux(ul, n) + sys.entropy_flux(ur, n)) + dot(&wm, &f)
        - 0.5 * (dot(&wl, &sys.flux(ul, n)) + dot(&wr, &sys.flux(ur, n)));
    for k in 0..sys.nc_count() {
        let a = flux.alpha(k);
        let dg = sys.nc_g(ur, k) - sys.nc_g(ul, k);
        let num = dot(&dw, &flux.nc_jump_product(sys, ul, ur, n, k));
        let dwh = dot(&wr, &sys.nc_factor(ur, n, k)) - dot(&wl, &sys.nc_factor(ul, n, k));
        out -= 0.25 * a * num + 0.25 * (1.0 - a) * dwh * dg;
    }
    out
}

/// Interface ingredients for one nonconservative term in the four
/// semi-discretization forms. Which fields are required depends on the form.
#[derive(Debug, Clone, Default)]
pub struct FormTerm<const N: usize> {
    /// `H^num`, forms 3 and 4.
    pub h_num: Option<[f64; N]>,
    /// `g^num`, form 2.
    pub g_num: Option<f64>,
    /// `(Hg)^num`, form 4.
    pub hg_num: Option<[f64; N]>,
}

/// Semi-discretization form of the nonconservative product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// Pointwise `H` times the jump of `g`.
    PointwiseH = 1,
    /// Pointwise `H` times a flux difference of `g`.
    GFlux = 2,
    /// Numerical `H` times the jump of `g`.
    HFlux = 3,
    /// Numerical `(Hg)` minus numerical `H` times the local `g`.
    ProductFlux = 4,
}

impl TryFrom<u8> for Form {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Form::PointwiseH),
            2 => Ok(Form::GFlux),
            3 => Ok(Form::HFlux),
            4 => Ok(Form::ProductFlux),
            _ => Err(Error::InvalidParameter(format!("form must be 1..=4, got {v}"))),
        }
    }
}

/// Entropy condition of the requested form, `lhs − ⟦ψ⟧`.
pub fn check_form_condition<const N: usize, S: System<N>>(
    form: Form,
    sys: &S,
    f_num: &[f64; N],
    terms: &[FormTerm<N>],
    ul: &[f64; N],
    ur: &[f64; N],
    n: Normal,
) -> Result<f64> {
    if terms.len() != sys.nc_count() {
        return Err(Error::InvalidParameter(format!(
            "expected {} nonconservative terms, got {}",
            sys.nc_count(),
            terms.len()
        )));
    }
    let (wl, wr) = (sys.entropy_variables(ul), sys.entropy_variables(ur));
    let dw = jump(&wl, &wr);
    let wm = avg(&wl, &wr);
    let mut lhs = dot(&dw, f_num);
    for (k, t) in terms.iter().enumerate() {
        let (gl, gr) = (sys.nc_g(ul, k), sys.nc_g(ur, k));
        let (hl, hr) = (sys.nc_factor(ul, n, k), sys.nc_factor(ur, n, k));
        let (whl, whr) = (dot(&wl, &hl), dot(&wr, &hr));
        lhs += match form {
            Form::PointwiseH => -0.5 * (whl + whr) * (gr - gl),
            Form::GFlux => {
                let g = t.g_num.ok_or(Error::MissingIngredient("g_num"))?;
                (whr - whl) * g - (whr * gr - whl * gl)
            }
            Form::HFlux => {
                let h = t.h_num.ok_or(Error::MissingIngredient("h_num"))?;
                -dot(&wm, &h) * (gr - gl)
            }
            Form::ProductFlux => {
                let h = t.h_num.ok_or(Error::MissingIngredient("h_num"))?;
                let hg = t.hg_num.ok_or(Error::MissingIngredient("hg_num"))?;
                dot(&dw, &hg) - (dot(&wr, &h) * gr - dot(&wl, &h) * gl)
            }
        };
    }
    Ok(lhs - (sys.entropy_potential(ur, n) - sys.entropy_potential(ul, n)))
}

/// `⟦F⟧ − (ω₊·D⁺ + ω₋·D⁻)`; non-positive values are entropy-stable.
pub fn check_fluctuation_condition<const N: usize, S: System<N>>(
    d_plus: &[f64; N],
    d_minus: &[f64; N],
    sys: &S,
    ul: &[f64; N],
    ur: &[f64; N],
    n: Normal,
) -> f64 {
    let work = dot(&sys.entropy_variables(ur), d_plus) + dot(&sys.entropy_variables(ul), d_minus);
    sys.entropy_flux(ur, n) - sys.entropy_flux(ul, n) - work
}

/// Fluctuations `(D⁺, D⁻)` of the blended scheme built from a flux set.
pub fn fluctuations<const N: usize, S: System<N>, F: FluxSet<N, S>>(
    sys: &S,
    flux: &F,
    ul: &[f64; N],
    ur: &[f64; N],
    n: Normal,
) -> ([f64; N], [f64; N]) {
    let f = flux.conservative(sys, ul, ur, n);
    let (fl, fr) = (sys.flux(ul, n), sys.flux(ur, n));
    let mut dm: [f64; N] = std::array::from_fn(|i| f[i] - fl[i]);
    let mut dp: [f64; N] = std::array::from_fn(|i| fr[i] - f[i]);
    for k in 0..sys.nc_count() {
        let a = flux.alpha(k);
        let dg = sys.nc_g(ur, k) - sys.nc_g(ul, k);
        let p = flux.nc_jump_product(sys, ul, ur, n, k);
        let (hl, hr) = (sys.nc_factor(ul, n, k), sys.nc_factor(ur, n, k));
        for i in 0..N {
            dm[i] += 0.5 * a * p[i] + 0.5 * (1.0 - a) * hl[i] * dg;
            dp[i] += 0.5 * a * p[i] + 0.5 * (1.0 - a) * hr[i] * dg;
        }
    }
    (dp, dm)
}

/// Both interface residuals of the well-balanced condition:
/// `f^num + Σ_k[½α_k H^num⟦g⟧ + ½(1−α_k) H(u−)⟦g⟧] − f(u−)` and
/// `−f^num + Σ_k[½α_k H^num⟦g⟧ + ½(1−α_k) H(u+)⟦g⟧] + f(u+)`.
pub fn check_well_balanced<const N: usize, S: System<N>, F: FluxSet<N, S>>(
    sys: &S,
    flux: &F,
    ul: &[f64; N],
    ur: &[f64; N],
    n: Normal,
) -> ([f64; N], [f64; N]) {
    let (dp, dm) = fluctuations(sys, flux, ul, ur, n);
    // D⁻ is exactly the left residual; D⁺ with the flux sign flipped is the right one.
    (dm, dp)
}

/// Outcome of a seeded sweep over random state pairs.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub samples: usize,
    /// Largest signed (normalized) residual; `-inf` for an empty sweep.
    pub max_violation: f64,
    /// Largest absolute residual.
    pub max_abs: f64,
    pub worst_pair: Option<(Vec<f64>, Vec<f64>)>,
    pub seed: u64,
}

impl ConditionReport {
    pub const CSV_HEADER: &'static str = "condition,samples,max_violation,seed";

    pub fn csv_row(&self) -> String {
        format!("{},{},{:.16e},{}", self.condition, self.samples, self.max_violation, self.seed)
    }
}

/// Evaluate `residual` on `samples` random admissible pairs and keep the
/// worst. The normal is cycled through the coordinate directions and random
/// unit vectors for two-dimensional systems.
pub fn sweep<const N: usize, S: System<N>>(
    name: &str,
    sys: &S,
    samples: usize,
    seed: u64,
    mut residual: impl FnMut(&[f64; N], &[f64; N], Normal) -> f64,
) -> ConditionReport {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConditionReport {
        condition: name.to_string(),
        samples,
        max_violation: f64::NEG_INFINITY,
        max_abs: 0.0,
        worst_pair: None,
        seed,
    };
    for s in 0..samples {
        let ul = sys.sample_state(&mut rng);
        let ur = sys.sample_state(&mut rng);
        let n = if sys.dim() == 1 {
            [1.0, 0.0]
        } else {
            match s % 3 {
                0 => [1.0, 0.0],
                1 => [0.0, 1.0],
                _ => {
                    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    [t.cos(), t.sin()]
                }
            }
        };
        let r = residual(&ul, &ur, n);
        if r > report.max_violation || report.worst_pair.is_none() {
            report.max_violation = r;
            report.worst_pair = Some((ul.to_vec(), ur.to_vec()));
        }
        report.max_abs = report.max_abs.max(r.abs());
    }
    report
}

/// Normalized entropy-conservation sweep for a flux set.
pub fn ec_sweep<const N: usize, S: System<N>, F: FluxSet<N, S>>(
    sys: &S,
    flux: &F,
    samples: usize,
    seed: u64,
) -> ConditionReport {
    let name = format!("{}/{}/ec", sys.name(), flux.name());
    sweep(&name, sys, samples, seed, |ul, ur, n| {
        nonconservative_ec_breakdown(sys, flux, ul, ur, n).normalized()
    })
}
