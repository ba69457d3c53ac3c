use entropic::conditions::*;
use entropic::fluxes::*;
use entropic::systems::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAIRS: usize = 10_000;

fn mean<const N: usize>(a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| 0.5 * (a[i] + b[i]))
}

/// Form 2 with the arithmetic mean of `g` is form 1, form 4 with
/// `(Hg)^num = H^num⟨g⟩` is form 3, and form 4 with `H^num = ⟨H⟩` and the
/// product mean for `(Hg)^num` is form 1 again.
fn check_reductions<const N: usize, S: System<N>>(sys: &S, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PAIRS {
        let (a, b) = (sys.sample_state(&mut rng), sys.sample_state(&mut rng));
        let n = X_DIR;
        let f: [f64; N] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        let mut pointwise = Vec::new();
        let mut g_mean = Vec::new();
        let mut h_only = Vec::new();
        let mut product = Vec::new();
        let mut product_mean_terms = Vec::new();
        for k in 0..sys.nc_count() {
            let h = mean(&sys.nc_factor(&a, n, k), &sys.nc_factor(&b, n, k)).map(|x| x * rng.gen_range(0.5..1.5));
            let gm = 0.5 * (sys.nc_g(&a, k) + sys.nc_g(&b, k));
            pointwise.push(FormTerm::default());
            g_mean.push(FormTerm { g_num: Some(gm), ..Default::default() });
            h_only.push(FormTerm { h_num: Some(h), ..Default::default() });
            product.push(FormTerm { h_num: Some(h), hg_num: Some(h.map(|x| x * gm)), ..Default::default() });
            let (hl, hr) = (sys.nc_factor(&a, n, k), sys.nc_factor(&b, n, k));
            let (gl, gr) = (sys.nc_g(&a, k), sys.nc_g(&b, k));
            product_mean_terms.push(FormTerm {
                h_num: Some(mean(&hl, &hr)),
                hg_num: Some(std::array::from_fn(|i| product_mean(hl[i], hr[i], gl, gr))),
                ..Default::default()
            });
        }
        let form = |which, terms: &[FormTerm<N>]| check_form_condition(which, sys, &f, terms, &a, &b, n).unwrap();
        let (r1, r2) = (form(Form::PointwiseH, &pointwise), form(Form::GFlux, &g_mean));
        let (r3, r4) = (form(Form::HFlux, &h_only), form(Form::ProductFlux, &product));
        let r4_mean = form(Form::ProductFlux, &product_mean_terms);
        let scale = 1.0 + r1.abs().max(r3.abs());
        assert!((r1 - r4_mean).abs() <= 1e-14 * scale, "{}: forms 1/4 differ by {:e}", sys.name(), r1 - r4_mean);
        assert!((r1 - r2).abs() <= 1e-14 * scale, "{}: forms 1/2 differ by {:e}", sys.name(), r1 - r2);
        assert!((r3 - r4).abs() <= 1e-14 * scale, "{}: forms 3/4 differ by {:e}", sys.name(), r3 - r4);
    }
}

#[test]
fn form_reductions() {
    check_reductions(&VarAdvection, 1);
    check_reductions(&CoupledBurgers, 2);
    check_reductions(&Monomial::new(2, 3, MonomialSplit::Product).unwrap(), 3);
    check_reductions(&ShallowWater::new(9.81).unwrap(), 4);
    check_reductions(&SainteMarie::new(1.0, 2.0).unwrap(), 5);
    check_reductions(&EulerInternal::new(1.4).unwrap(), 6);
}

#[test]
fn ec_sets_satisfy_the_fluctuation_condition_with_equality() {
    fn check<const N: usize, S: System<N>, F: FluxSet<N, S>>(sys: &S, flux: &F) {
        let r = sweep("fluct", sys, PAIRS, 9, |a, b, n| {
            let (dp, dm) = fluctuations(sys, flux, a, b, n);
            let scale = 1.0 + sys.entropy_flux(a, n).abs() + sys.entropy_flux(b, n).abs();
            check_fluctuation_condition(&dp, &dm, sys, a, b, n) / scale
        });
        assert!(r.max_abs <= 1e-12, "{}: {:e}", sys.name(), r.max_abs);
    }
    check(&ShallowWater::new(9.81).unwrap(), &ShallowWaterFlux { alpha: 0.5 });
    let f = MonomialEc1::new(4, 5);
    check(&f.system(), &f);
    check(&SainteMarie::new(1.0, 2.0).unwrap(), &SainteMarieFlux::new(0.5, 1.0, 2.0 / 3.0));
}

#[test]
fn lake_at_rest_interfaces_are_balanced() {
    let sys = ShallowWater::new(9.81).unwrap();
    let sm = SainteMarie::new(9.81, 1.98).unwrap();
    let smf = SainteMarieFlux::new(0.5, 1.0, 2.0 / 3.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..PAIRS {
        let level = rng.gen_range(2.0..4.0);
        let (bl, br) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (ul, ur) = ([level - bl, 0.0, bl], [level - br, 0.0, br]);
        for alpha in [0.0, 0.5, 1.0] {
            let (l, r) = check_well_balanced(&sys, &ShallowWaterFlux { alpha }, &ul, &ur, X_DIR);
            for v in l.iter().chain(&r) {
                assert!(v.abs() <= 1e-12, "alpha {alpha}: {l:?} {r:?}");
            }
        }
        let (sl, sr) = ([level - bl, 0.0, 0.0, 0.0, bl], [level - br, 0.0, 0.0, 0.0, br]);
        let (l, r) = check_well_balanced(&sm, &smf, &sl, &sr, X_DIR);
        for v in l.iter().chain(&r) {
            assert!(v.abs() <= 1e-12, "{l:?} {r:?}");
        }
    }
}

#[test]
fn conservative_condition_detects_a_wrong_flux() {
    let sys = Burgers;
    let (a, b) = ([0.3], [1.7]);
    let ec = [(a[0] * a[0] + a[0] * b[0] + b[0] * b[0]) / 6.0];
    assert!(check_conservative_ec(&sys, &ec, &a, &b, X_DIR).abs() <= 1e-15);
    let wrong = [0.25 * (a[0] * a[0] + b[0] * b[0])];
    assert!(check_conservative_ec(&sys, &wrong, &a, &b, X_DIR).abs() > 1e-3);
}

#[test]
fn reports_are_reproducible_and_serialize() {
    let sys = ShallowWater::new(9.81).unwrap();
    let f = ShallowWaterFlux { alpha: 0.5 };
    let (r1, r2) = (ec_sweep(&sys, &f, 500, 42), ec_sweep(&sys, &f, 500, 42));
    assert_eq!(r1.max_violation.to_bits(), r2.max_violation.to_bits());
    assert_eq!(r1.worst_pair, r2.worst_pair);
    let row = r1.csv_row();
    assert_eq!(row.split(',').count(), ConditionReport::CSV_HEADER.split(',').count());
    assert!(row.ends_with(",42"));
}

#[test]
fn form_numbers_outside_range_are_rejected() {
    assert!(Form::try_from(0u8).is_err());
    assert!(Form::try_from(5u8).is_err());
    assert_eq!(Form::try_from(4u8).unwrap(), Form::ProductFlux);
}
