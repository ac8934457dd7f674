use hyperscale::htmatrix::{gram_points, stein_solve};
use hyperscale::hypercomplex::{signature_basis_gram, FormKind};
use hyperscale::{Adjoint, HElem, HMatrix, NormKind, Scale};
use nalgebra::Matrix4;
use proptest::prelude::*;

const SWEEP: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];

fn scale() -> impl Strategy<Value = Scale> {
    prop::sample::select(SWEEP.to_vec()).prop_map(|t| Scale::new(t).unwrap())
}

fn coords() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0f64..1.0)
}

fn elem(s: Scale, x: [f64; 4]) -> HElem {
    HElem::from_coords(s, x)
}

fn rel(x: &HElem, y: &HElem) -> f64 {
    x.dist(y) / y.op_norm().max(1e-300)
}

proptest! {
    #[test]
    fn adjoints_reverse_products(s in scale(), p in coords(), q in coords()) {
        let (p, q) = (elem(s, p), elem(s, q));
        let mag = p.op_norm() * q.op_norm();
        for kind in [Adjoint::Circled, Adjoint::Bracket] {
            prop_assert!((p * q).adj(kind).dist(&(q.adj(kind) * p.adj(kind))) <= 1e-12 * mag.max(1e-300));
        }
    }

    #[test]
    fn adjoints_are_commuting_involutions(s in scale(), q in coords()) {
        let q = elem(s, q);
        prop_assert_eq!(q.circled().circled(), q);
        prop_assert_eq!(q.bracket().bracket(), q);
        prop_assert_eq!(q.circled().bracket(), q.bracket().circled());
    }

    #[test]
    fn circled_product_is_scalar(s in scale(), q in coords()) {
        let q = elem(s, q);
        let det = HElem::real(s, q.det());
        let mag = q.op_norm().powi(2).max(1e-300);
        prop_assert!((q * q.circled()).dist(&det) <= 1e-12 * mag);
        prop_assert!((q.circled() * q).dist(&det) <= 1e-12 * mag);
    }

    #[test]
    fn norms_ignore_adjoints(s in scale(), q in coords()) {
        let q = elem(s, q);
        for kind in [NormKind::Hs, NormKind::Op, NormKind::Euclid] {
            let v = q.norm(kind);
            prop_assert!((q.circled().norm(kind) - v).abs() <= 1e-12 * v.max(1e-300));
            prop_assert!((q.bracket().norm(kind) - v).abs() <= 1e-12 * v.max(1e-300));
        }
    }

    #[test]
    fn inverse_is_two_sided(s in scale(), q in coords()) {
        let q = elem(s, q);
        prop_assume!(q.det().abs() > 1e-3);
        let qi = q.inv().unwrap();
        let one = HElem::one(s);
        let cond = q.op_norm() * qi.op_norm();
        prop_assert!((q * qi).dist(&one) <= 1e-13 * cond);
        prop_assert!((qi * q).dist(&one) <= 1e-13 * cond);
    }

    #[test]
    fn schur_factorization_rebuilds_the_matrix(s in scale(), xs in prop::collection::vec(coords(), 9)) {
        let m = HMatrix::from_fn(s, 3, 3, |r, c| elem(s, xs[3 * r + c]));
        let a = m.block(0, 0, 1, 1);
        prop_assume!(a.get(0, 0).det().abs() > 1e-2);
        let (b, c, d) = (m.block(0, 1, 1, 2), m.block(1, 0, 2, 1), m.block(1, 1, 2, 2));
        let ai = a.minv().unwrap();
        let lower = HMatrix::from_blocks(&HMatrix::identity(s, 1), &HMatrix::zeros(s, 1, 2), &(&c * &ai), &HMatrix::identity(s, 2)).unwrap();
        let middle = HMatrix::from_blocks(&a, &HMatrix::zeros(s, 1, 2), &HMatrix::zeros(s, 2, 1), &(&d - &(&(&c * &ai) * &b))).unwrap();
        let upper = HMatrix::from_blocks(&HMatrix::identity(s, 1), &(&ai * &b), &HMatrix::zeros(s, 2, 1), &HMatrix::identity(s, 2)).unwrap();
        let rebuilt = &(&lower * &middle) * &upper;
        let mag = m.frob() * (1.0 + ai.frob() * m.frob()).powi(2);
        prop_assert!(rebuilt.dist(&m) <= 1e-12 * mag);
    }

    #[test]
    fn matrix_inverse_is_two_sided(s in scale(), xs in prop::collection::vec(coords(), 9)) {
        let m = &HMatrix::identity(s, 3).scale_by(2.0) + &HMatrix::from_fn(s, 3, 3, |r, c| elem(s, xs[3 * r + c]).scale_by(0.3));
        let x = m.minv().unwrap();
        let id = HMatrix::identity(s, 3);
        let cond = m.mnorm_op() * x.mnorm_op();
        prop_assert!((&m * &x).dist(&id) <= 1e-12 * cond);
        prop_assert!((&x * &m).dist(&id) <= 1e-12 * cond);
    }

    #[test]
    fn stein_solution_is_self_adjoint(s in scale(), xs in prop::collection::vec(coords(), 6)) {
        let a = HMatrix::from_fn(s, 2, 2, |r, c| elem(s, xs[2 * r + c]));
        let a = a.scale_by(0.6 / a.mnorm_op().max(1e-3));
        let c = HMatrix::from_fn(s, 1, 2, |_, col| elem(s, xs[4 + col]));
        for kind in [Adjoint::Circled, Adjoint::Bracket] {
            let g = stein_solve(&a, &c, kind).unwrap();
            prop_assert!(g.madjoint(kind).dist(&g) <= 1e-12 * g.frob().max(1.0));
            let lhs = &g - &(&(&a.madjoint(kind) * &g) * &a);
            prop_assert!(lhs.dist(&(&c.madjoint(kind) * &c)) <= 1e-12 * g.frob().max(1.0));
        }
    }

    #[test]
    fn gram_points_is_circled_self_adjoint(s in scale(), xs in prop::collection::vec(coords(), 3)) {
        let pts: Vec<HElem> = xs.iter().map(|x| elem(s, x.map(|v| 0.5 * v))).collect();
        prop_assume!(pts.iter().all(|p| p.op_norm() < 0.9));
        let g = gram_points(&pts, Adjoint::Circled).unwrap();
        prop_assert!(g.madjoint(Adjoint::Circled).dist(&g) <= 1e-12 * g.frob().max(1.0));
    }

    #[test]
    fn json_round_trip(s in scale(), q in coords()) {
        let q = elem(s, q);
        let text = serde_json::to_string(&q).unwrap();
        let back: HElem = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, q);
    }
}

#[test]
fn circled_basis_gram_is_nondegenerate() {
    for t in SWEEP {
        let (g, _) = signature_basis_gram(Scale::new(t).unwrap(), FormKind::Circled);
        let m = Matrix4::from_fn(|r, c| g[r][c]);
        assert!(m.determinant().abs() > 0.0, "t = {t}");
    }
}

#[test]
fn bracket_products_differ_for_a_generic_element() {
    let s = Scale::new(0.5).unwrap();
    let q = HElem::from_coords(s, [0.3, -0.7, 0.4, 0.9]);
    let diff = (q * q.bracket()).dist(&(q.bracket() * q));
    assert!(diff > 1e-3, "difference {diff}");
    assert!(rel(&(q * q.bracket()), &(q.bracket() * q)) > 1e-3);
}
