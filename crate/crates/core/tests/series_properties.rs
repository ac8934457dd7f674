use hyperscale::hardy::{blaschke_circled, hardy_inner, theta_interpolate, zero_residual};
use hyperscale::hypercomplex::sphere_contains;
use hyperscale::rational::circled_quotient;
use hyperscale::{Adjoint, HElem, PowerSeries, Scale};
use proptest::prelude::*;

const SWEEP: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];

fn scale() -> impl Strategy<Value = Scale> {
    prop::sample::select(SWEEP.to_vec()).prop_map(|t| Scale::new(t).unwrap())
}

fn coords() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0f64..1.0)
}

fn series(s: Scale, cs: &[[f64; 4]], decay: f64) -> PowerSeries {
    let coeffs = cs
        .iter()
        .enumerate()
        .map(|(n, x)| HElem::from_coords(s, *x).scale_by(decay.powi(n as i32)))
        .collect();
    PowerSeries::new(s, coeffs).unwrap()
}

fn cs(n: usize) -> impl Strategy<Value = Vec<[f64; 4]>> {
    prop::collection::vec(coords(), n)
}

fn mag(f: &PowerSeries) -> f64 {
    f.coeffs().iter().map(|c| c.op_norm()).fold(1.0, f64::max)
}

proptest! {
    #[test]
    fn star_product_is_associative(s in scale(), a in cs(12), b in cs(12), c in cs(12)) {
        let (f, g, h) = (series(s, &a, 0.9), series(s, &b, 0.9), series(s, &c, 0.9));
        let left = f.star_mul(&g).unwrap().star_mul(&h).unwrap();
        let right = f.star_mul(&g.star_mul(&h).unwrap()).unwrap();
        prop_assert!(left.dist(&right) <= 1e-12 * mag(&left));
    }

    #[test]
    fn real_points_multiply(s in scale(), a in cs(10), b in cs(10), x in -0.9f64..0.9) {
        let (f, g) = (series(s, &a, 0.8), series(s, &b, 0.8));
        let pad = |p: &PowerSeries| PowerSeries::polynomial(s, p.coeffs(), 20).unwrap();
        let (f, g) = (pad(&f), pad(&g));
        let xr = HElem::real(s, x);
        let lhs = f.star_mul(&g).unwrap().eval(&xr).unwrap();
        let rhs = f.eval(&xr).unwrap() * g.eval(&xr).unwrap();
        prop_assert!(lhs.dist(&rhs) <= 1e-12 * rhs.op_norm().max(1.0));
    }

    #[test]
    fn self_product_is_central(s in scale(), a in cs(10), b in cs(10)) {
        let (f, g) = (series(s, &a, 0.8), series(s, &b, 0.8));
        let ff = f.star_mul(&f.conj_series(Adjoint::Circled)).unwrap();
        let comm = ff.star_mul(&g).unwrap().dist(&g.star_mul(&ff).unwrap());
        prop_assert!(comm <= 1e-12 * mag(&ff));
    }

    #[test]
    fn geometric_inverse_matches_the_rational_form(s in scale(), x in coords()) {
        let alpha = HElem::from_coords(s, x.map(|v| 0.4 * v));
        let one = HElem::one(s);
        let f = PowerSeries::polynomial(s, &[one, -alpha], 48).unwrap();
        let num = PowerSeries::polynomial(s, &[one, -alpha.circled()], 48).unwrap();
        let den = PowerSeries::polynomial(
            s,
            &[one, HElem::real(s, -2.0 * alpha.re()), alpha * alpha.circled()],
            48,
        ).unwrap();
        let want = num.star_mul(&den.star_inverse().unwrap()).unwrap();
        prop_assert!(f.star_inverse().unwrap().dist(&want) <= 1e-12);
    }

    #[test]
    fn quotient_form_recovers_the_inverse(s in scale(), a in cs(3)) {
        let p = series(s, &a, 1.0);
        prop_assume!(p.coeff(0).det().abs() > 0.1);
        let p = PowerSeries::polynomial(s, p.coeffs(), 24).unwrap();
        let (num, den) = circled_quotient(&p).unwrap();
        for c in den.coeffs() {
            prop_assert!(c.b().norm() <= 1e-12 * mag(&den));
            prop_assert!(c.a().im.abs() <= 1e-12 * mag(&den));
        }
        let rebuilt = num.star_mul(&den.star_inverse().unwrap()).unwrap();
        let direct = p.star_inverse().unwrap();
        prop_assert!(rebuilt.dist(&direct) <= 1e-10 * mag(&direct));
    }

    #[test]
    fn krein_forms_are_symmetric(s in scale(), a in cs(10), b in cs(10)) {
        let (f, g) = (series(s, &a, 0.8), series(s, &b, 0.8));
        for kind in [Adjoint::Circled, Adjoint::Bracket] {
            let (_, fg) = hardy_inner(&f, &g, kind).unwrap();
            let (_, gf) = hardy_inner(&g, &f, kind).unwrap();
            prop_assert!((fg - gf).abs() <= 1e-12 * fg.abs().max(1.0));
        }
    }

    #[test]
    fn shift_and_backward_shift_are_adjoint(s in scale(), a in cs(10), b in cs(11)) {
        let (f, g) = (series(s, &a, 0.8), series(s, &b, 0.8));
        for kind in [Adjoint::Circled, Adjoint::Bracket] {
            let (lhs, _) = hardy_inner(&f.shift_up(), &g, kind).unwrap();
            let (rhs, _) = hardy_inner(&f, &g.backward_shift(), kind).unwrap();
            prop_assert!(lhs.dist(&rhs) <= 1e-12 * rhs.op_norm().max(1.0));
        }
    }

    #[test]
    fn zeros_propagate_through_products(s in scale(), x in coords(), b in cs(8)) {
        let alpha = HElem::from_coords(s, x.map(|v| 0.4 * v));
        prop_assume!(alpha.op_norm() < 0.6);
        let f = blaschke_circled(&alpha, 160).unwrap();
        let g = PowerSeries::polynomial(s, series(s, &b, 0.8).coeffs(), 160).unwrap();
        prop_assert!(zero_residual(&f, &alpha).unwrap().op_norm() <= 1e-10);
        prop_assert!(zero_residual(&f.star_mul(&g).unwrap(), &alpha).unwrap().op_norm() <= 1e-10);
    }

    #[test]
    fn pair_product_vanishes_on_the_sphere(s in scale(), x in coords(), h in coords()) {
        let alpha = HElem::from_coords(s, x.map(|v| 0.4 * v));
        let h = HElem::from_coords(s, h);
        prop_assume!(h.det().abs() > 0.05 && alpha.op_norm() < 0.6);
        let beta = h * alpha * h.inv().unwrap();
        prop_assume!(beta.op_norm() < 0.7);
        prop_assert!(sphere_contains(&alpha, &beta, 1e-12).unwrap());
        let pair = blaschke_circled(&alpha, 256).unwrap()
            .star_mul(&blaschke_circled(&alpha.circled(), 256).unwrap()).unwrap();
        prop_assert!(zero_residual(&pair, &beta).unwrap().op_norm() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn theta_multiples_vanish_at_the_points(s in scale(), pts in cs(3), b in cs(6)) {
        let points: Vec<HElem> = pts.iter().map(|x| HElem::from_coords(s, x.map(|v| 0.35 * v))).collect();
        prop_assume!(points.iter().all(|p| p.det().abs() > 0.05 * p.op_norm().powi(2)));
        let Ok(theta) = theta_interpolate(&points, 200) else { return Ok(()); };
        let cert = theta.certify().unwrap();
        prop_assume!(cert.gram_condition < 1e4);
        let g = PowerSeries::polynomial(s, series(s, &b, 0.8).coeffs(), 200).unwrap();
        let prod = theta.series.star_mul(&g).unwrap();
        for p in &points {
            prop_assert!(zero_residual(&prod, p).unwrap().op_norm() <= 1e-8);
        }
    }
}
