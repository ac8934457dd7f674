use hyperscale::rational::{circled_quotient, rinverse, rmul, rsum, MatrixSeries};
use hyperscale::sample;
use hyperscale::verify::random_realization;
use hyperscale::{HElem, HMatrix, PowerSeries, Scale};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scale() -> impl Strategy<Value = Scale> {
    prop::sample::select(vec![-1.0, 1.0, 0.5]).prop_map(|t| Scale::new(t).unwrap())
}

fn mag(m: &MatrixSeries) -> f64 {
    m.coeffs.iter().map(|c| c.max_entry_norm()).fold(1.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn series_matches_the_resolvent_on_real_points(s in scale(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_realization(&mut rng, s);
        let ser = r.to_series(120);
        for x in [-0.8, -0.3, 0.1, 0.5, 0.9] {
            let direct = r.eval_real(x).unwrap();
            prop_assert!(direct.dist(&ser.eval_real(x)) <= 1e-10 * direct.max_entry_norm().max(1.0));
        }
    }

    #[test]
    fn sums_and_products_follow_the_coefficients(s in scale(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r1, r2) = (random_realization(&mut rng, s), random_realization(&mut rng, s));
        let (s1, s2) = (r1.to_series(17), r2.to_series(17));
        let conv = s1.convolve(&s2).unwrap();
        prop_assert!(rmul(&r1, &r2).unwrap().to_series(17).dist(&conv) <= 1e-11 * mag(&s1) * mag(&s2));
        let sum = rsum(&r1, &r2).unwrap().to_series(17);
        for k in 0..17 {
            let want = &s1.coeffs[k] + &s2.coeffs[k];
            prop_assert!(sum.coeffs[k].dist(&want) <= 1e-12 * mag(&s1).max(mag(&s2)));
        }
    }

    #[test]
    fn double_inverse_restores_the_coefficients(s in scale(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_realization(&mut rng, s);
        let back = rinverse(&rinverse(&r, 1e-12).unwrap(), 1e-12).unwrap();
        let (a, b) = (r.to_series(17), back.to_series(17));
        prop_assert!(a.dist(&b) <= 1e-9 * mag(&a));
    }

    #[test]
    fn quotient_denominator_is_central(s in scale(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lead: Vec<HElem> = (0..3).map(|_| sample::helem(&mut rng, s, 1.0)).collect();
        prop_assume!(lead[0].det().abs() > 0.1);
        let p = PowerSeries::polynomial(s, &lead, 16).unwrap();
        let (_, den) = circled_quotient(&p).unwrap();
        let g = sample::series(&mut rng, s, 16, 0.8);
        let scale_ref = den.coeffs().iter().map(|c| c.op_norm()).fold(1.0, f64::max);
        prop_assert!(den.star_mul(&g).unwrap().dist(&g.star_mul(&den).unwrap()) <= 1e-12 * scale_ref);
    }
}

#[test]
fn identity_constant_is_neutral_for_products() {
    let s = Scale::new(2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = random_realization(&mut rng, s);
    let id = hyperscale::Realization::constant(HMatrix::identity(s, 2));
    let prod = rmul(&r, &id).unwrap();
    assert!(prod.to_series(12).dist(&r.to_series(12)) < 1e-15);
}
