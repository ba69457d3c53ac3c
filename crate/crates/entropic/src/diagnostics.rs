//! Discrete functionals, entropy residuals, error norms and convergence rates.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semidisc::Semidiscretization;
use crate::systems::System;

/// `Σ_q w_q φ(u_q)` with the Jacobian-weighted quadrature of the mesh.
pub fn total_functional<const N: usize, D: Semidiscretization<N>>(
    disc: &D,
    u: &[[f64; N]],
    phi: impl Fn(&[f64; N]) -> f64,
) -> f64 {
    u.iter().zip(disc.weights()).map(|(s, w)| w * phi(s)).sum()
}

pub fn total_entropy<const N: usize, D: Semidiscretization<N>>(disc: &D, u: &[[f64; N]]) -> f64 {
    let sys = disc.system();
    total_functional(disc, u, |s| sys.entropy(s))
}

/// Integrals of every prognostic component.
pub fn component_totals<const N: usize, D: Semidiscretization<N>>(disc: &D, u: &[[f64; N]]) -> Vec<f64> {
    (0..disc.system().n_prognostic())
        .map(|c| total_functional(disc, u, |s| s[c]))
        .collect()
}

/// `Σ_q w_q ω(u_q)·∂_t u_q`.
pub fn entropy_residual<const N: usize, D: Semidiscretization<N>>(disc: &D, u: &[[f64; N]], t: f64) -> f64 {
    let du = disc.rhs_vec(u, t);
    entropy_work(disc, u, &du)
}

/// `Σ_q w_q ω(u_q)·du_q` for a precomputed time derivative.
pub fn entropy_work<const N: usize, D: Semidiscretization<N>>(disc: &D, u: &[[f64; N]], du: &[[f64; N]]) -> f64 {
    let sys = disc.system();
    let mut acc = 0.0;
    for ((s, d), w) in u.iter().zip(du).zip(disc.weights()) {
        let om = sys.entropy_variables(s);
        acc += w * om.iter().zip(d).map(|(a, b)| a * b).sum::<f64>();
    }
    acc
}

/// Relative change of the entropy integral, `|∫U(u) − ∫U(u₀)| / |∫U(u₀)|`.
pub fn entropy_drift<const N: usize, D: Semidiscretization<N>>(disc: &D, u: &[[f64; N]], u0: &[[f64; N]]) -> f64 {
    let e0 = total_entropy(disc, u0);
    (total_entropy(disc, u) - e0).abs() / e0.abs()
}

/// Integral of the pointwise entropy change, `∫|U(u) − U(u₀)| / |∫U(u₀)|`.
pub fn entropy_deviation<const N: usize, D: Semidiscretization<N>>(disc: &D, u: &[[f64; N]], u0: &[[f64; N]]) -> f64 {
    let sys = disc.system();
    let num: f64 = u
        .iter()
        .zip(u0)
        .zip(disc.weights())
        .map(|((a, b), w)| w * (sys.entropy(a) - sys.entropy(b)).abs())
        .sum();
    num / total_entropy(disc, u0).abs()
}

/// Discrete L² distance to `exact` over the prognostic components.
pub fn l2_error<const N: usize, D: Semidiscretization<N>>(
    disc: &D,
    u: &[[f64; N]],
    exact: impl Fn([f64; 2]) -> [f64; N],
) -> f64 {
    let np = disc.system().n_prognostic();
    let mut acc = 0.0;
    for ((s, &x), w) in u.iter().zip(disc.coordinates()).zip(disc.weights()) {
        let e = exact(x);
        acc += w * (0..np).map(|c| (s[c] - e[c]).powi(2)).sum::<f64>();
    }
    acc.sqrt()
}

/// Observed orders `log(e_{k−1}/e_k) / log(N_k/N_{k−1})`, one per consecutive pair.
pub fn eoc(errors: &[f64], resolutions: &[f64]) -> Result<Vec<f64>> {
    if errors.len() != resolutions.len() || errors.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two errors with matching resolutions".into(),
        ));
    }
    if errors.iter().chain(resolutions).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter("errors and resolutions must be positive".into()));
    }
    Ok(errors
        .windows(2)
        .zip(resolutions.windows(2))
        .map(|(e, n)| (e[0] / e[1]).ln() / (n[1] / n[0]).ln())
        .collect())
}

/// One row of a diagnostics trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub entropy: f64,
    pub entropy_residual: f64,
    /// Relative change of the entropy integral.
    pub entropy_drift: f64,
    /// Integral of the pointwise entropy change, relative.
    pub entropy_deviation: f64,
    pub totals: Vec<f64>,
    pub error: Option<f64>,
}

impl DiagnosticsRecord {
    pub fn new<const N: usize, D: Semidiscretization<N>>(disc: &D, u: &[[f64; N]], u0: &[[f64; N]], t: f64) -> Self {
        Self {
            t,
            entropy: total_entropy(disc, u),
            entropy_residual: entropy_residual(disc, u, t),
            entropy_drift: entropy_drift(disc, u, u0),
            entropy_deviation: entropy_deviation(disc, u, u0),
            totals: component_totals(disc, u),
            error: None,
        }
    }
}

/// Write `records` as CSV with 17 significant digits.
pub fn write_csv(mut out: impl Write, records: &[DiagnosticsRecord]) -> std::io::Result<()> {
    let ncomp = records.first().map_or(0, |r| r.totals.len());
    let has_error = records.iter().any(|r| r.error.is_some());
    write!(out, "t,entropy,entropy_residual,entropy_drift,entropy_deviation")?;
    for c in 1..=ncomp {
        write!(out, ",mass{c}")?;
    }
    if has_error {
        write!(out, ",error")?;
    }
    writeln!(out)?;
    for r in records {
        write!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.t, r.entropy, r.entropy_residual, r.entropy_drift, r.entropy_deviation
        )?;
        for m in &r.totals {
            write!(out, ",{m:.16e}")?;
        }
        if has_error {
            match r.error {
                Some(e) => write!(out, ",{e:.16e}")?,
                None => write!(out, ",")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
