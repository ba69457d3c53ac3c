use entropic::conditions::*;
use entropic::fluxes::*;
use entropic::systems::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAIRS: usize = 10_000;

fn rel_close<const N: usize>(a: &[f64; N], b: &[f64; N], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

fn random_normal(rng: &mut impl Rng, dim: usize) -> Normal {
    if dim == 1 {
        X_DIR
    } else {
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        [t.cos(), t.sin()]
    }
}

/// Consistency, declared symmetry, entropy conservation against the jump of
/// the potential and the three-state identity with the induced entropy flux.
fn check_ec_set<const N: usize, S: System<N>, F: FluxSet<N, S>>(sys: &S, flux: &F, seed: u64) {
    let label = format!("{}/{}", sys.name(), flux.name());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PAIRS {
        let (a, b, c) = (sys.sample_state(&mut rng), sys.sample_state(&mut rng), sys.sample_state(&mut rng));
        let n = random_normal(&mut rng, sys.dim());

        assert!(rel_close(&flux.conservative(sys, &a, &a, n), &sys.flux(&a, n), 1e-13), "{label}: consistency");
        for k in 0..sys.nc_count() {
            if let Some(h) = flux.nc_factor(sys, &a, &a, n, k) {
                assert!(rel_close(&h, &sys.nc_factor(&a, n, k), 1e-13), "{label}: factor consistency");
            }
            let fwd = flux.nc_jump_product(sys, &a, &b, n, k);
            let back = flux.nc_jump_product(sys, &b, &a, n, k).map(|x| -x);
            assert!(rel_close(&fwd, &back, 1e-13), "{label}: jump product is not antisymmetric");
        }
        if flux.symmetric() {
            let (ab, ba) = (flux.conservative(sys, &a, &b, n), flux.conservative(sys, &b, &a, n));
            assert!(rel_close(&ab, &ba, 1e-13), "{label}: symmetry");
        }

        let br = nonconservative_ec_breakdown(sys, flux, &a, &b, n);
        let r = br.residual() / (1.0 + br.potential_jump.abs());
        assert!(r.abs() <= 1e-12, "{label}: EC residual {r:e} at {a:?} {b:?}");

        // ω(b)·(D⁻(b, c) + D⁺(a, b)) = F(b, c) − F(a, b).
        let (_, dm_bc) = fluctuations(sys, flux, &b, &c, n);
        let (dp_ab, _) = fluctuations(sys, flux, &a, &b, n);
        let w = sys.entropy_variables(&b);
        let lhs: f64 = (0..N).map(|i| w[i] * (dm_bc[i] + dp_ab[i])).sum();
        let (f_bc, f_ab) = (induced_entropy_flux(sys, flux, &b, &c, n), induced_entropy_flux(sys, flux, &a, &b, n));
        let scale = 1.0 + f_bc.abs() + f_ab.abs() + lhs.abs();
        assert!((lhs - (f_bc - f_ab)).abs() <= 1e-13 * scale, "{label}: three-state identity");
    }
}

#[test]
fn advection_and_burgers() {
    check_ec_set(&VarAdvection, &AdvectionFlux, 1);
    check_ec_set(&CoupledBurgers, &CoupledBurgersFlux, 2);
}

#[test]
fn monomial_first_scheme() {
    for (i, (m, n)) in [(1, 1), (2, 3), (3, 5), (4, 5), (5, 5), (4, 3), (5, 4)].into_iter().enumerate() {
        let f = MonomialEc1::new(m, n);
        check_ec_set(&f.system(), &f, 10 + i as u64);
    }
}

#[test]
fn monomial_second_scheme() {
    for (i, (m, n)) in [(4, 4), (5, 5), (4, 5), (5, 4), (3, 5), (5, 3)].into_iter().enumerate() {
        let f = MonomialEc2::new(m, n, 0.5, PowerMean::MeanOfPowers);
        check_ec_set(&f.system(), &f, 20 + i as u64);
    }
}

#[test]
fn shallow_water_family() {
    let sys = ShallowWater::new(9.81).unwrap();
    for (i, alpha) in [0.0, 0.25, 0.5, 1.0].into_iter().enumerate() {
        check_ec_set(&sys, &ShallowWaterFlux { alpha }, 30 + i as u64);
    }
}

#[test]
fn sainte_marie_one_and_two_dimensions() {
    let f = sainte_marie_flux_default();
    check_ec_set(&SainteMarie::new(1.0, 2.0).unwrap(), &f, 40);
    check_ec_set(&SainteMarie2D::new(9.81, 1.98).unwrap(), &f, 41);
}

fn sainte_marie_flux_default() -> SainteMarieFlux {
    SainteMarieFlux::new(0.5, 1.0, 2.0 / 3.0)
}

#[test]
fn euler_kinetic_energy_preserving() {
    for (i, ent) in [EulerEntropy::TotalEnergy, EulerEntropy::Thermodynamic].into_iter().enumerate() {
        check_ec_set(&EulerInternal::new(1.4).unwrap().with_entropy(ent), &EulerEcKep, 50 + i as u64);
        check_ec_set(&EulerInternal2D::new(1.4).unwrap().with_entropy(ent), &EulerEcKep, 52 + i as u64);
    }
}

#[test]
fn euler_dissipative_fluxes_never_produce_entropy() {
    for mom in [MomentumFlux::Dissipative, MomentumFlux::Kep] {
        let f = EulerEs::new(mom);
        let s1 = EulerInternal::new(1.4).unwrap().with_entropy(EulerEntropy::Thermodynamic);
        let s2 = EulerInternal2D::new(1.4).unwrap().with_entropy(EulerEntropy::Thermodynamic);
        let r1 = sweep("1d", &s1, PAIRS, 60, |a, b, n| nonconservative_ec_breakdown(&s1, &f, a, b, n).normalized());
        let r2 = sweep("2d", &s2, PAIRS, 61, |a, b, n| nonconservative_ec_breakdown(&s2, &f, a, b, n).normalized());
        assert!(r1.max_violation <= 1e-14, "{mom:?}: {:e}", r1.max_violation);
        assert!(r2.max_violation <= 1e-14, "{mom:?}: {:e}", r2.max_violation);
        // Consistency still holds.
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..1000 {
            let u = s2.sample_state(&mut rng);
            let n = random_normal(&mut rng, 2);
            assert!(rel_close(&f.conservative(&s2, &u, &u, n), &s2.flux(&u, n), 1e-13));
        }
    }
}

#[test]
fn central_flux_is_not_entropy_conservative() {
    let sys = ShallowWater::new(9.81).unwrap();
    let r = ec_sweep(&sys, &CentralFlux { alpha: 1.0 }, 1000, 3);
    assert!(r.max_abs > 1e-6);
}

proptest! {
    #[test]
    fn log_mean_lies_between_its_arguments(a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
        let l = ln_mean(a, b);
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(l >= lo * (1.0 - 1e-15) && l <= hi * (1.0 + 1e-15));
        prop_assert!((ln_mean(b, a) - l).abs() <= 1e-14 * l);
    }

    #[test]
    fn log_mean_is_monotone(a in 1e-2f64..1e2, b in 1e-2f64..1e2, bump in 1e-6f64..1.0) {
        prop_assert!(ln_mean(a + bump, b) >= ln_mean(a, b));
        prop_assert!(ln_mean(a, b + bump) >= ln_mean(a, b));
    }

    #[test]
    fn log_mean_matches_direct_formula_away_from_the_diagonal(a in 0.1f64..10.0, ratio in 1.1f64..10.0) {
        let b = a * ratio;
        let direct = (b - a) / (b.ln() - a.ln());
        prop_assert!((ln_mean(a, b) - direct).abs() <= 1e-14 * direct);
    }

    #[test]
    fn ec1_fluctuation_is_antisymmetric(m in 1u32..=5, n in 1u32..=5, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let (f, g) = (monomial_ec1_fluctuation(m, n, a, b), monomial_ec1_fluctuation(m, n, b, a));
        prop_assert!((f + g).abs() <= 1e-13 * (1.0 + f.abs()));
    }
}

#[test]
fn log_mean_rejects_non_positive_arguments() {
    assert!(logarithmic_mean(-1.0, 2.0).is_err());
    assert!(logarithmic_mean(0.0, 2.0).is_err());
}
