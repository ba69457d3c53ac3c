//! Subcommand implementations. Each returns a one-line summary on success;
//! CSV goes to the configured output or to standard output.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use entropic::conditions::{ec_sweep, nonconservative_ec_breakdown, sweep, ConditionReport};
use entropic::diagnostics::{l2_error, write_csv, DiagnosticsRecord};
use entropic::experiments::{self, lake_errors};
use entropic::fluxes::*;
use entropic::semidisc::{Semidiscretization, State};
use entropic::systems::*;
use entropic::timeint::{integrate, IntegratorConfig, Method};

use crate::config::ExperimentConfig;
use crate::CliError;

/// Tolerance on the normalized residual for entropy conservation.
pub const EC_TOLERANCE: f64 = 1e-12;
/// Largest admissible entropy production for entropy stability.
pub const ES_TOLERANCE: f64 = 1e-14;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn with_output(cfg: &ExperimentConfig, emit: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| invalid(format!("cannot create {}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            emit(&mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            emit(&mut out)?;
        }
    }
    Ok(())
}

fn method(cfg: &ExperimentConfig) -> Result<Method, CliError> {
    match cfg.method.as_deref() {
        None | Some("ssprk104") => Ok(Method::Ssprk104),
        Some("rk4") => Ok(Method::Rk4),
        Some(other) => Err(invalid(format!("unknown method `{other}`"))),
    }
}

fn check_flux(cfg: &ExperimentConfig, allowed: &[&str]) -> Result<String, CliError> {
    let flux = cfg.flux.clone().unwrap_or_else(|| allowed[0].to_string());
    if allowed.contains(&flux.as_str()) {
        Ok(flux)
    } else {
        Err(invalid(format!("flux `{flux}` not available here; expected one of {allowed:?}")))
    }
}

fn require_tfinal(cfg: &ExperimentConfig) -> Result<f64, CliError> {
    cfg.tfinal.ok_or_else(|| invalid("no final time given (use --tfinal or --preset)"))
}

fn monomial_exponents(cfg: &ExperimentConfig) -> Result<(u32, u32), CliError> {
    match (cfg.m, cfg.n) {
        (Some(m), Some(n)) => Ok((m, n)),
        _ => Err(invalid("monomial needs both --m and --n")),
    }
}

fn alpha_or(cfg: &ExperimentConfig, default: &[f64]) -> Result<Vec<f64>, CliError> {
    let a = cfg.alpha.clone().unwrap_or_else(|| default.to_vec());
    if a.len() != default.len() {
        return Err(invalid(format!("expected {} alpha value(s), got {}", default.len(), a.len())));
    }
    Ok(a)
}

type Exact<'a, const N: usize> = Option<&'a dyn Fn([f64; 2], f64) -> [f64; N]>;

struct Outcome<const N: usize> {
    state: State<N>,
    steps: usize,
    records: Vec<DiagnosticsRecord>,
}

impl<const N: usize> Outcome<N> {
    fn summary(&self) -> String {
        let first = &self.records[0];
        let last = self.records.last().expect("final state is always recorded");
        let mass = last
            .totals
            .iter()
            .zip(&first.totals)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let mut s = format!(
            "t={:.6} steps={} entropy_error={:.3e} entropy_residual={:.3e} mass_drift={:.3e}",
            last.t, self.steps, last.entropy_drift, last.entropy_residual, mass
        );
        if let Some(e) = last.error {
            s.push_str(&format!(" l2_error={e:.6e}"));
        }
        s
    }
}

fn execute<const N: usize, D: Semidiscretization<N>>(
    disc: &D,
    u0: State<N>,
    cfg: &ExperimentConfig,
    t_final: f64,
    exact: Exact<N>,
) -> Result<Outcome<N>, CliError> {
    let mut ic = IntegratorConfig::new(cfg.cfl.unwrap_or(0.1), t_final)?;
    ic.method = method(cfg)?;
    ic.every = cfg.every.unwrap_or(0);
    let init = u0.clone();
    let mut records = Vec::new();
    let out = integrate(disc, u0, 0.0, &ic, |t, u, _| {
        let mut r = DiagnosticsRecord::new(disc, u, &init, t);
        if let Some(f) = exact {
            r.error = Some(l2_error(disc, u, |x| f(x, t)));
        }
        records.push(r);
    })?;
    Ok(Outcome {
        state: out.state,
        steps: out.steps,
        records,
    })
}

fn run_and_emit<const N: usize, D: Semidiscretization<N>>(
    disc: &D,
    u0: State<N>,
    cfg: &ExperimentConfig,
    t_final: f64,
    exact: Exact<N>,
) -> Result<(Outcome<N>, String), CliError> {
    let out = execute(disc, u0, cfg, t_final, exact)?;
    with_output(cfg, |w| write_csv(w, &out.records))?;
    let summary = out.summary();
    Ok((out, summary))
}

/// Integrate one experiment and write its diagnostics trace.
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let system = cfg.require_system()?;
    let degree = cfg.degree.unwrap_or(3);
    match system {
        "advection" => {
            check_flux(cfg, &["ec"])?;
            let k = cfg.single_elements(32)?;
            let t = require_tfinal(cfg)?;
            match cfg.ic.as_deref() {
                None | Some("variable") => {
                    let (d, u0) = experiments::advection(degree, k)?;
                    Ok(run_and_emit(&d, u0, cfg, t, None)?.1)
                }
                Some("uniform") => {
                    let (d, u0) = experiments::advection_uniform(degree, k)?;
                    Ok(run_and_emit(&d, u0, cfg, t, Some(&experiments::advection_uniform_exact))?.1)
                }
                Some(other) => Err(invalid(format!("unknown advection ic `{other}`"))),
            }
        }
        "monomial" => {
            let flux = check_flux(cfg, &["ec1", "ec2"])?;
            let (m, n) = monomial_exponents(cfg)?;
            let k = cfg.single_elements(32)?;
            let t = match cfg.tfinal {
                Some(t) => t,
                None => 0.5 * experiments::monomial_tmax(m, n, 1_000_000)?,
            };
            if flux == "ec1" {
                let f = MonomialEc1::new(m, n);
                let (d, u0) = experiments::monomial_problem(f.system(), f, degree, k)?;
                Ok(run_and_emit(&d, u0, cfg, t, None)?.1)
            } else {
                let a = alpha_or(cfg, &[0.5])?;
                let f = MonomialEc2::new(m, n, a[0], PowerMean::MeanOfPowers);
                let (d, u0) = experiments::monomial_problem(f.system(), f, degree, k)?;
                Ok(run_and_emit(&d, u0, cfg, t, None)?.1)
            }
        }
        "sainte-marie" => {
            check_flux(cfg, &["ec"])?;
            let a = alpha_or(cfg, &[0.5, 1.0, 2.0 / 3.0])?;
            let k = cfg.single_elements(128)?;
            let (d, u0) = experiments::sainte_marie_with(SainteMarieFlux::new(a[0], a[1], a[2]), degree, k)?;
            Ok(run_and_emit(&d, u0, cfg, require_tfinal(cfg)?, None)?.1)
        }
        "lake-at-rest" => {
            check_flux(cfg, &["ec"])?;
            if cfg.single_elements(16)? != 16 {
                return Err(invalid("the lake-at-rest mesh has exactly 16 elements"));
            }
            let (d, u0) = experiments::well_balanced(degree)?;
            let (out, summary) = run_and_emit(&d, u0, cfg, require_tfinal(cfg)?, None)?;
            let e = lake_errors(&d, &out.state);
            Ok(format!(
                "{summary} lake_errors=[H-H0 {:.3e}, v1 {:.3e}, v2 {:.3e}, w {:.3e}, p {:.3e}]",
                e[0], e[1], e[2], e[3], e[4]
            ))
        }
        "euler" => {
            check_flux(cfg, &["ec-kep"])?;
            let k = cfg.single_elements(16)?;
            let t = require_tfinal(cfg)?;
            let (d, u0) = match cfg.ic.as_deref() {
                None | Some("potential") => experiments::euler_potential(degree, k)?,
                Some("pressure-equilibrium") => experiments::euler_pressure_equilibrium(degree, k, cfg.seed.unwrap_or(0))?,
                Some(other) => return Err(invalid(format!("unknown euler ic `{other}`"))),
            };
            Ok(run_and_emit(&d, u0, cfg, t, None)?.1)
        }
        "euler-2d" => {
            let kk = square_side(cfg.single_elements(16)?)?;
            let t = require_tfinal(cfg)?;
            match cfg.ic.as_deref() {
                None | Some("free-stream") => {
                    check_flux(cfg, &["es"])?;
                    let (d, u0) = experiments::euler_free_stream(degree, kk)?;
                    let init = u0.clone();
                    let (out, summary) = run_and_emit(&d, u0, cfg, t, None)?;
                    let dev = out
                        .state
                        .iter()
                        .zip(&init)
                        .flat_map(|(a, b)| (0..4).map(move |c| (a[c] - b[c]).abs()))
                        .fold(0.0, f64::max);
                    Ok(format!("{summary} max_deviation={dev:.3e}"))
                }
                Some("manufactured") => {
                    check_flux(cfg, &["ec-kep"])?;
                    let (d, u0, ms) = experiments::euler_convergence(degree, kk)?;
                    let exact = move |x: [f64; 2], t: f64| ms.exact(x, t);
                    Ok(run_and_emit(&d, u0, cfg, t, Some(&exact))?.1)
                }
                Some(other) => Err(invalid(format!("unknown euler-2d ic `{other}`"))),
            }
        }
        other => Err(invalid(format!("unknown system `{other}`"))),
    }
}

fn square_side(elements: usize) -> Result<usize, CliError> {
    let k = (elements as f64).sqrt().round() as usize;
    if k == 0 || k * k != elements {
        return Err(invalid(format!("2D meshes need a square element count, got {elements}")));
    }
    Ok(k)
}

/// Observed orders between consecutive rows; `None` where the resolution
/// does not change.
pub fn pairwise_eoc(errors: &[f64], resolutions: &[f64]) -> Result<Vec<Option<f64>>, CliError> {
    let mut rates = Vec::with_capacity(errors.len().saturating_sub(1));
    for i in 1..errors.len() {
        if resolutions[i] == resolutions[i - 1] {
            rates.push(None);
        } else {
            let r = entropic::diagnostics::eoc(&errors[i - 1..=i], &resolutions[i - 1..=i])?;
            rates.push(Some(r[0]));
        }
    }
    Ok(rates)
}

/// Refinement study against an exact solution; writes
/// `elements,degree,error,eoc` rows.
pub fn cmd_convergence(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let system = cfg.require_system()?;
    let degree = cfg.degree.unwrap_or(3);
    let t = require_tfinal(cfg)?;
    let elements = cfg
        .elements
        .clone()
        .filter(|e| !e.is_empty())
        .ok_or_else(|| invalid("convergence needs --elements with at least one value"))?;
    let mut errors = Vec::new();
    let mut resolutions = Vec::new();
    for &k in &elements {
        let (err, res) = match system {
            "advection" => {
                check_flux(cfg, &["ec"])?;
                if !matches!(cfg.ic.as_deref(), None | Some("uniform")) {
                    return Err(invalid("advection convergence uses the uniform-speed ic"));
                }
                let (d, u0) = experiments::advection_uniform(degree, k)?;
                let out = execute(&d, u0, cfg, t, Some(&experiments::advection_uniform_exact))?;
                (out.records.last().and_then(|r| r.error), k as f64)
            }
            "euler-2d" => {
                check_flux(cfg, &["ec-kep"])?;
                if !matches!(cfg.ic.as_deref(), None | Some("manufactured")) {
                    return Err(invalid("euler-2d convergence uses the manufactured ic"));
                }
                let side = square_side(k)?;
                let (d, u0, ms) = experiments::euler_convergence(degree, side)?;
                let exact = move |x: [f64; 2], t: f64| ms.exact(x, t);
                let out = execute(&d, u0, cfg, t, Some(&exact))?;
                (out.records.last().and_then(|r| r.error), side as f64)
            }
            other => return Err(invalid(format!("no convergence study for system `{other}`"))),
        };
        errors.push(err.expect("exact solution supplied"));
        resolutions.push(res);
    }
    let rates = pairwise_eoc(&errors, &resolutions)?;
    with_output(cfg, |w| {
        writeln!(w, "elements,degree,error,eoc")?;
        for (i, (&k, e)) in elements.iter().zip(&errors).enumerate() {
            let rate = match i.checked_sub(1).and_then(|j| rates[j]) {
                Some(r) => format!("{r:.16e}"),
                None => String::new(),
            };
            writeln!(w, "{k},{degree},{e:.16e},{rate}")?;
        }
        Ok(())
    })?;
    Ok(match rates.last().copied().flatten() {
        Some(r) => format!("final error {:.6e}, last eoc {r:.3}", errors.last().unwrap()),
        None => format!("final error {:.6e}", errors.last().unwrap()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Condition {
    Conservative,
    Stable,
}

fn sweep_flux<const N: usize, S: System<N>, F: FluxSet<N, S>>(
    sys: &S,
    flux: &F,
    cond: Condition,
    samples: usize,
    seed: u64,
) -> ConditionReport {
    match cond {
        Condition::Conservative => ec_sweep(sys, flux, samples, seed),
        Condition::Stable => {
            let name = format!("{}/{}/es", sys.name(), flux.name());
            sweep(&name, sys, samples, seed, |ul, ur, n| {
                nonconservative_ec_breakdown(sys, flux, ul, ur, n).normalized()
            })
        }
    }
}

fn euler_entropy(cfg: &ExperimentConfig) -> Result<EulerEntropy, CliError> {
    match cfg.entropy.as_deref() {
        None | Some("thermodynamic") => Ok(EulerEntropy::Thermodynamic),
        Some("total-energy") => Ok(EulerEntropy::TotalEnergy),
        Some(other) => Err(invalid(format!("unknown entropy `{other}`"))),
    }
}

/// Outcome of `check`: the report and whether it met the tolerance.
pub struct CheckOutcome {
    pub report: ConditionReport,
    pub tolerance: f64,
    pub passed: bool,
}

/// Seeded sweep of a flux condition. The report is written as CSV; a
/// violation is returned as [`CliError::Violation`] after writing.
pub fn cmd_check(cfg: &ExperimentConfig) -> Result<CheckOutcome, CliError> {
    let system = cfg.require_system()?;
    let flux = cfg.flux.as_deref().ok_or_else(|| invalid("check needs --flux"))?;
    let cond = match cfg.condition.as_deref() {
        None | Some("ec") => Condition::Conservative,
        Some("es") => Condition::Stable,
        Some(other) => return Err(invalid(format!("unknown condition `{other}`"))),
    };
    let samples = cfg.samples.unwrap_or(10_000);
    let seed = cfg.seed.unwrap_or(0);
    let central = CentralFlux {
        alpha: cfg.alpha.as_ref().and_then(|a| a.first().copied()).unwrap_or(1.0),
    };
    let unknown = || invalid(format!("flux `{flux}` is not defined for system `{system}`"));
    macro_rules! go {
        ($sys:expr, $flux:expr) => {
            sweep_flux(&$sys, &$flux, cond, samples, seed)
        };
    }
    let report = match system {
        "advection" => match flux {
            "ec" => go!(VarAdvection, AdvectionFlux),
            "central" => go!(VarAdvection, central),
            _ => return Err(unknown()),
        },
        "coupled-burgers" => match flux {
            "ec" => go!(CoupledBurgers, CoupledBurgersFlux),
            "central" => go!(CoupledBurgers, central),
            _ => return Err(unknown()),
        },
        "monomial" => {
            let (m, n) = monomial_exponents(cfg)?;
            match flux {
                "ec1" => {
                    let f = MonomialEc1::new(m, n);
                    go!(f.system(), f)
                }
                "ec2" => {
                    let a = alpha_or(cfg, &[0.5])?;
                    let f = MonomialEc2::new(m, n, a[0], PowerMean::MeanOfPowers);
                    go!(f.system(), f)
                }
                "central" => go!(Monomial::new(m, n, MonomialSplit::Product)?, central),
                _ => return Err(unknown()),
            }
        }
        "shallow-water" => {
            let sys = ShallowWater::new(9.81)?;
            match flux {
                "ec" => go!(sys, ShallowWaterFlux { alpha: alpha_or(cfg, &[0.0])?[0] }),
                "central" => go!(sys, central),
                _ => return Err(unknown()),
            }
        }
        "sainte-marie" | "lake-at-rest" => {
            let smf = || -> Result<SainteMarieFlux, CliError> {
                let a = alpha_or(cfg, &[0.5, 1.0, 2.0 / 3.0])?;
                Ok(SainteMarieFlux::new(a[0], a[1], a[2]))
            };
            match (system, flux) {
                ("sainte-marie", "ec") => go!(SainteMarie::new(1.0, 2.0)?, smf()?),
                ("sainte-marie", "central") => go!(SainteMarie::new(1.0, 2.0)?, central),
                ("lake-at-rest", "ec") => go!(SainteMarie2D::new(9.81, 1.98)?, smf()?),
                ("lake-at-rest", "central") => go!(SainteMarie2D::new(9.81, 1.98)?, central),
                _ => return Err(unknown()),
            }
        }
        "euler" => {
            let sys = EulerInternal::new(1.4)?.with_entropy(euler_entropy(cfg)?);
            match flux {
                "ec-kep" => go!(sys, EulerEcKep),
                "es" => go!(sys, EulerEs::new(MomentumFlux::Dissipative)),
                "es-kep" => go!(sys, EulerEs::new(MomentumFlux::Kep)),
                "central" => go!(sys, central),
                _ => return Err(unknown()),
            }
        }
        "euler-2d" => {
            let sys = EulerInternal2D::new(1.4)?.with_entropy(euler_entropy(cfg)?);
            match flux {
                "ec-kep" => go!(sys, EulerEcKep),
                "es" => go!(sys, EulerEs::new(MomentumFlux::Dissipative)),
                "es-kep" => go!(sys, EulerEs::new(MomentumFlux::Kep)),
                "central" => go!(sys, central),
                _ => return Err(unknown()),
            }
        }
        other => return Err(invalid(format!("unknown system `{other}`"))),
    };
    let (tolerance, passed) = match cond {
        Condition::Conservative => (EC_TOLERANCE, report.max_abs <= EC_TOLERANCE),
        Condition::Stable => (ES_TOLERANCE, report.max_violation <= ES_TOLERANCE),
    };
    with_output(cfg, |w| {
        writeln!(w, "{}", ConditionReport::CSV_HEADER)?;
        writeln!(w, "{}", report.csv_row())
    })?;
    Ok(CheckOutcome {
        report,
        tolerance,
        passed,
    })
}
