//! Explicit Runge-Kutta time stepping with CFL-based step sizes.
//!
//! Only the prognostic components are touched, so auxiliary coefficient
//! fields stay bitwise constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semidisc::{Semidiscretization, State};
use crate::systems::System;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Ten-stage, fourth-order strong-stability-preserving scheme in
    /// two-register low-storage form.
    #[default]
    Ssprk104,
    /// Classical four-stage scheme.
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub cfl: f64,
    pub t_final: f64,
    /// Call the observer every `every` steps (and always at the end);
    /// zero means only at the start and the end.
    pub every: usize,
}

impl IntegratorConfig {
    pub fn new(cfl: f64, t_final: f64) -> Result<Self> {
        if !(cfl > 0.0) {
            return Err(Error::InvalidParameter(format!("cfl must be positive, got {cfl}")));
        }
        Ok(Self {
            method: Method::Ssprk104,
            cfl,
            t_final,
            every: 0,
        })
    }
}

/// `cfl · min(Δx / λ) / (2p + 1)` over all nodes; infinite when every wave
/// speed vanishes.
pub fn stable_dt<const N: usize, D: Semidiscretization<N>>(disc: &D, u: &[[f64; N]], cfl: f64) -> f64 {
    let sys = disc.system();
    let mut best = f64::INFINITY;
    for (s, &w) in u.iter().zip(disc.widths()) {
        let lam = sys.wave_speed(s);
        if lam > 0.0 {
            best = best.min(w / lam);
        }
    }
    cfl * best / (2 * disc.degree() + 1) as f64
}

fn update<const N: usize>(np: usize, u: &mut [[f64; N]], a: f64, du: &[[f64; N]]) {
    for (x, d) in u.iter_mut().zip(du) {
        for c in 0..np {
            x[c] += a * d[c];
        }
    }
}

/// Scratch registers reused between steps.
pub struct Stepper<const N: usize> {
    method: Method,
    q2: State<N>,
    k: State<N>,
    acc: State<N>,
}

impl<const N: usize> Stepper<N> {
    pub fn new(method: Method, len: usize) -> Self {
        Self {
            method,
            q2: vec![[0.0; N]; len],
            k: vec![[0.0; N]; len],
            acc: vec![[0.0; N]; len],
        }
    }

    /// Advance `u` from `t` to `t + dt`.
    pub fn step<D: Semidiscretization<N>>(&mut self, disc: &D, u: &mut State<N>, t: f64, dt: f64) {
        let np = disc.system().n_prognostic();
        match self.method {
            Method::Ssprk104 => {
                // Low-storage form written as increments from the step's
                // initial state, so that a vanishing rhs is an exact no-op.
                let base = &mut self.q2;
                let d5 = &mut self.acc;
                let q1 = u;
                base.copy_from_slice(q1);
                let mut tt = t;
                for _ in 0..5 {
                    disc.rhs(q1, tt, &mut self.k);
                    update(np, q1, dt / 6.0, &self.k);
                    tt += dt / 6.0;
                }
                for ((b, d), x) in base.iter().zip(d5.iter_mut()).zip(q1.iter_mut()) {
                    for c in 0..np {
                        d[c] = x[c] - b[c];
                        x[c] = b[c] + 0.4 * d[c];
                    }
                }
                tt = t + dt / 3.0;
                for _ in 0..4 {
                    disc.rhs(q1, tt, &mut self.k);
                    update(np, q1, dt / 6.0, &self.k);
                    tt += dt / 6.0;
                }
                disc.rhs(q1, t + dt, &mut self.k);
                for (((x, b), d), k) in q1.iter_mut().zip(base.iter()).zip(d5.iter()).zip(&self.k) {
                    for c in 0..np {
                        x[c] = b[c] + (9.0 / 25.0 * d[c] + 0.6 * (x[c] - b[c]) + dt / 10.0 * k[c]);
                    }
                }
            }
            Method::Rk4 => {
                self.q2.copy_from_slice(u);
                self.acc.copy_from_slice(u);
                let stages = [(0.0, dt / 6.0), (0.5, dt / 3.0), (0.5, dt / 3.0), (1.0, dt / 6.0)];
                for (s, &(c_prev, w)) in stages.iter().enumerate() {
                    // Stage input: u + c·dt·k_prev, built in q2.
                    if s > 0 {
                        for (a, (x, k)) in self.q2.iter_mut().zip(u.iter().zip(&self.k)) {
                            for c in 0..np {
                                a[c] = x[c] + c_prev * dt * k[c];
                            }
                        }
                    }
                    disc.rhs(&self.q2, t + c_prev * dt, &mut self.k);
                    update(np, &mut self.acc, w, &self.k);
                }
                u.copy_from_slice(&self.acc);
            }
        }
    }
}

/// Outcome of a time integration.
#[derive(Debug, Clone)]
pub struct Integration<const N: usize> {
    pub state: State<N>,
    pub t: f64,
    pub steps: usize,
}

fn check_finite<const N: usize>(u: &[[f64; N]], t: f64) -> Result<()> {
    if u.iter().all(|s| s.iter().all(|v| v.is_finite())) {
        Ok(())
    } else {
        Err(Error::NonFinite { t })
    }
}

/// Integrate from `t0` to `config.t_final`, recomputing the stable step every
/// step and clipping the last one. The observer sees `(t, state, step)` at the
/// start, every `config.every` steps and at the end.
pub fn integrate<const N: usize, D: Semidiscretization<N>>(
    disc: &D,
    u0: State<N>,
    t0: f64,
    config: &IntegratorConfig,
    mut observe: impl FnMut(f64, &[[f64; N]], usize),
) -> Result<Integration<N>> {
    if !(config.t_final >= t0) {
        return Err(Error::InvalidParameter(format!("t_final {} before t0 {t0}", config.t_final)));
    }
    let mut u = u0;
    check_finite(&u, t0)?;
    let mut t = t0;
    let mut steps = 0;
    let mut stepper = Stepper::new(config.method, u.len());
    observe(t, &u, 0);
    while t < config.t_final {
        let remaining = config.t_final - t;
        let dt = stable_dt(disc, &u, config.cfl);
        // A step that would land on or past the end (possibly by round-off) is clipped.
        let last = !(t + dt < config.t_final);
        let dt = if last { remaining } else { dt };
        stepper.step(disc, &mut u, t, dt);
        t = if last { config.t_final } else { t + dt };
        steps += 1;
        check_finite(&u, t)?;
        if last || (config.every > 0 && steps % config.every == 0) {
            observe(t, &u, steps);
        }
    }
    Ok(Integration { state: u, t, steps })
}
