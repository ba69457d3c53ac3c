use entropic::experiments;
use entropic::semidisc::Semidiscretization;
use entropic::systems::CoupledBurgers;
use entropic::timeint::*;

/// Forced pendulum `x' = y`, `y' = −sin x + ½ cos t` on a single node.
struct Pendulum;

impl Semidiscretization<2> for Pendulum {
    type Sys = CoupledBurgers;
    fn system(&self) -> &CoupledBurgers {
        &CoupledBurgers
    }
    fn degree(&self) -> usize {
        0
    }
    fn n_nodes(&self) -> usize {
        1
    }
    fn coordinates(&self) -> &[[f64; 2]] {
        &[[0.0, 0.0]]
    }
    fn weights(&self) -> &[f64] {
        &[1.0]
    }
    fn widths(&self) -> &[f64] {
        &[1.0]
    }
    fn rhs(&self, u: &[[f64; 2]], t: f64, du: &mut [[f64; 2]]) {
        let [x, y] = u[0];
        du[0] = [y, -x.sin() + 0.5 * t.cos()];
    }
}

fn solve(method: Method, steps: usize) -> [f64; 2] {
    let t_end = 3.0;
    let dt = t_end / steps as f64;
    let mut u = vec![[1.0, 0.0]];
    let mut stepper = Stepper::new(method, 1);
    for s in 0..steps {
        stepper.step(&Pendulum, &mut u, s as f64 * dt, dt);
    }
    u[0]
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[test]
fn both_methods_are_fourth_order() {
    for method in [Method::Ssprk104, Method::Rk4] {
        let (a, b, c) = (solve(method, 20), solve(method, 40), solve(method, 80));
        let order = (distance(a, b) / distance(b, c)).log2();
        assert!(order >= 3.8, "{method:?}: observed order {order}");
    }
}

#[test]
fn methods_agree_on_the_limit() {
    let (s, r) = (solve(Method::Ssprk104, 400), solve(Method::Rk4, 400));
    assert!(distance(s, r) <= 1e-9);
}

#[test]
fn integration_traces_are_bitwise_reproducible() {
    let trace = || {
        let (disc, u0) = experiments::advection(3, 8).unwrap();
        let mut cfg = IntegratorConfig::new(0.5, 0.2).unwrap();
        cfg.every = 1;
        let mut seen = Vec::new();
        let out = integrate(&disc, u0, 0.0, &cfg, |t, u, _| seen.push((t.to_bits(), u[3][0].to_bits()))).unwrap();
        (seen, out.steps)
    };
    let (a, b) = (trace(), trace());
    assert_eq!(a, b);
    assert!(a.1 > 1);
    // Observed at the start, after every step and at the end.
    assert_eq!(a.0.len(), a.1 + 1);
}

#[test]
fn step_size_scales_with_the_cfl_number() {
    let (disc, u0) = experiments::advection(3, 8).unwrap();
    let (a, b) = (stable_dt(&disc, &u0, 0.5), stable_dt(&disc, &u0, 1.0));
    assert!((2.0 * a - b).abs() <= 1e-15 * b);
}

#[test]
fn bad_configurations_are_rejected() {
    assert!(IntegratorConfig::new(0.0, 1.0).is_err());
    assert!(IntegratorConfig::new(-1.0, 1.0).is_err());
    let (disc, u0) = experiments::advection(2, 4).unwrap();
    let cfg = IntegratorConfig::new(0.5, -1.0).unwrap();
    assert!(integrate(&disc, u0, 0.0, &cfg, |_, _, _| {}).is_err());
}

#[test]
fn final_state_is_observed_when_steps_divide_the_interval() {
    // Three equal steps whose sum rounds past the final time.
    let (disc, u0) = experiments::advection(2, 4).unwrap();
    let cfg = IntegratorConfig::new(0.5, 0.05).unwrap();
    let mut times = Vec::new();
    let out = integrate(&disc, u0, 0.0, &cfg, |t, _, _| times.push(t)).unwrap();
    assert_eq!(out.t, 0.05);
    assert_eq!(times, vec![0.0, 0.05]);
}
