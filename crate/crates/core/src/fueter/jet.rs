//! Forward-mode jets with H_t-valued components.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::Result;
use crate::hypercomplex::{HElem, Scale};

use super::Point4;

/// Anything the Fueter machinery can be evaluated on: plain elements, second
/// order jets and truncated Taylor polynomials.
pub trait HScalar: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    /// A constant with the same shape as `self`.
    fn lift(&self, h: HElem) -> Self;
    fn scale_by(&self, r: f64) -> Self;
    fn value(&self) -> HElem;
    fn try_inverse(&self, tol: f64) -> Result<Self>;
}

impl HScalar for HElem {
    fn lift(&self, h: HElem) -> Self {
        h
    }
    fn scale_by(&self, r: f64) -> Self {
        HElem::scale_by(self, r)
    }
    fn value(&self) -> HElem {
        *self
    }
    fn try_inverse(&self, tol: f64) -> Result<Self> {
        self.inverse(tol)
    }
}

/// Index into the packed upper triangle of a symmetric 4×4 matrix.
pub fn hess_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * 4 - i * (i + 1) / 2 + j
}

/// Value, gradient and Hessian with respect to `x0..x3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub value: HElem,
    pub grad: [HElem; 4],
    pub hess: [HElem; 10],
}

impl Jet2 {
    pub fn constant(h: HElem) -> Jet2 {
        let z = HElem::zero(h.scale());
        Jet2 {
            value: h,
            grad: [z; 4],
            hess: [z; 10],
        }
    }

    /// The coordinate function `x_l` seeded at `x`.
    pub fn variable(x: &Point4, l: usize, scale: Scale) -> Jet2 {
        let mut j = Jet2::constant(HElem::real(scale, x.x[l]));
        j.grad[l] = HElem::one(scale);
        j
    }

    pub fn seed(x: &Point4, scale: Scale) -> [Jet2; 4] {
        [0, 1, 2, 3].map(|l| Jet2::variable(x, l, scale))
    }

    pub fn d(&self, i: usize) -> HElem {
        self.grad[i]
    }

    pub fn dd(&self, i: usize, j: usize) -> HElem {
        self.hess[hess_index(i, j)]
    }

    fn zip(&self, o: &Jet2, f: impl Fn(HElem, HElem) -> HElem) -> Jet2 {
        Jet2 {
            value: f(self.value, o.value),
            grad: [0, 1, 2, 3].map(|i| f(self.grad[i], o.grad[i])),
            hess: std::array::from_fn(|i| f(self.hess[i], o.hess[i])),
        }
    }

    fn map(&self, f: impl Fn(HElem) -> HElem) -> Jet2 {
        Jet2 {
            value: f(self.value),
            grad: self.grad.map(&f),
            hess: self.hess.map(&f),
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        self.zip(&o, |a, b| a + b)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self.zip(&o, |a, b| a - b)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.map(|a| -a)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let (f, g) = (&self, &o);
        let grad = [0, 1, 2, 3].map(|i| f.grad[i] * g.value + f.value * g.grad[i]);
        let mut hess = [HElem::zero(f.value.scale()); 10];
        for i in 0..4 {
            for j in i..4 {
                hess[hess_index(i, j)] = f.dd(i, j) * g.value
                    + f.grad[i] * g.grad[j]
                    + f.grad[j] * g.grad[i]
                    + f.value * g.dd(i, j);
            }
        }
        Jet2 {
            value: f.value * g.value,
            grad,
            hess,
        }
    }
}

impl HScalar for Jet2 {
    fn lift(&self, h: HElem) -> Self {
        Jet2::constant(h)
    }

    fn scale_by(&self, r: f64) -> Self {
        self.map(|a| a.scale_by(r))
    }

    fn value(&self) -> HElem {
        self.value
    }

    /// `d(f^{-1}) = -v df v` and
    /// `d²(f^{-1}) = -v f_ij v + v f_i v f_j v + v f_j v f_i v`.
    fn try_inverse(&self, tol: f64) -> Result<Self> {
        let v = self.value.inverse(tol)?;
        let grad = [0, 1, 2, 3].map(|i| -(v * self.grad[i] * v));
        let mut hess = [HElem::zero(v.scale()); 10];
        for i in 0..4 {
            for j in i..4 {
                let (fi, fj) = (self.grad[i], self.grad[j]);
                hess[hess_index(i, j)] =
                    -(v * self.dd(i, j) * v) + v * fi * v * fj * v + v * fj * v * fi * v;
            }
        }
        Ok(Jet2 { value: v, grad, hess })
    }
}

/// Monomial layout for truncated Taylor polynomials in four variables.
#[derive(Debug)]
pub struct TaylorBasis {
    order: usize,
    exps: Vec<[usize; 4]>,
    index: HashMap<[usize; 4], usize>,
    products: Vec<(usize, usize, usize)>,
}

impl TaylorBasis {
    pub fn new(order: usize) -> Arc<TaylorBasis> {
        let mut exps = Vec::new();
        for d in 0..=order {
            for e0 in (0..=d).rev() {
                for e1 in (0..=d - e0).rev() {
                    for e2 in (0..=d - e0 - e1).rev() {
                        exps.push([e0, e1, e2, d - e0 - e1 - e2]);
                    }
                }
            }
        }
        let index: HashMap<[usize; 4], usize> = exps.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut products = Vec::new();
        for (i, a) in exps.iter().enumerate() {
            for (j, b) in exps.iter().enumerate() {
                let s = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
                if let Some(&k) = index.get(&s) {
                    products.push((i, j, k));
                }
            }
        }
        Arc::new(TaylorBasis {
            order,
            exps,
            index,
            products,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }
}

/// Taylor polynomial of a fixed total order around a point: the
/// arbitrary-order counterpart of [`Jet2`].
#[derive(Clone, Debug)]
pub struct TaylorJet {
    basis: Arc<TaylorBasis>,
    coeffs: Vec<HElem>,
}

impl TaylorJet {
    pub fn constant(basis: &Arc<TaylorBasis>, h: HElem) -> TaylorJet {
        let mut coeffs = vec![HElem::zero(h.scale()); basis.len()];
        coeffs[0] = h;
        TaylorJet {
            basis: basis.clone(),
            coeffs,
        }
    }

    pub fn variable(basis: &Arc<TaylorBasis>, x: &Point4, l: usize, scale: Scale) -> TaylorJet {
        let mut j = TaylorJet::constant(basis, HElem::real(scale, x.x[l]));
        if basis.order >= 1 {
            let mut e = [0; 4];
            e[l] = 1;
            j.coeffs[basis.index[&e]] = HElem::one(scale);
        }
        j
    }

    pub fn seed(basis: &Arc<TaylorBasis>, x: &Point4, scale: Scale) -> [TaylorJet; 4] {
        [0, 1, 2, 3].map(|l| TaylorJet::variable(basis, x, l, scale))
    }

    /// Coefficient of `Π (x_l - p_l)^{e_l}`; zero beyond the order.
    pub fn coeff(&self, e: [usize; 4]) -> HElem {
        match self.basis.index.get(&e) {
            Some(&i) => self.coeffs[i],
            None => HElem::zero(self.coeffs[0].scale()),
        }
    }

    /// The mixed partial `∂^e f` at the expansion point.
    pub fn derivative(&self, e: [usize; 4]) -> HElem {
        let fact: f64 = e.iter().map(|&k| (1..=k).product::<usize>() as f64).product();
        self.coeff(e).scale_by(fact)
    }

    fn zip(&self, o: &TaylorJet, f: impl Fn(HElem, HElem) -> HElem) -> TaylorJet {
        TaylorJet {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn map(&self, f: impl Fn(HElem) -> HElem) -> TaylorJet {
        TaylorJet {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|&a| f(a)).collect(),
        }
    }
}

impl Add for TaylorJet {
    type Output = TaylorJet;
    fn add(self, o: TaylorJet) -> TaylorJet {
        self.zip(&o, |a, b| a + b)
    }
}

impl Sub for TaylorJet {
    type Output = TaylorJet;
    fn sub(self, o: TaylorJet) -> TaylorJet {
        self.zip(&o, |a, b| a - b)
    }
}

impl Neg for TaylorJet {
    type Output = TaylorJet;
    fn neg(self) -> TaylorJet {
        self.map(|a| -a)
    }
}

impl Mul for TaylorJet {
    type Output = TaylorJet;
    fn mul(self, o: TaylorJet) -> TaylorJet {
        let mut coeffs = vec![HElem::zero(self.coeffs[0].scale()); self.basis.len()];
        for &(i, j, k) in &self.basis.products {
            coeffs[k] = coeffs[k] + self.coeffs[i] * o.coeffs[j];
        }
        TaylorJet {
            basis: self.basis,
            coeffs,
        }
    }
}

impl HScalar for TaylorJet {
    fn lift(&self, h: HElem) -> Self {
        TaylorJet::constant(&self.basis, h)
    }

    fn scale_by(&self, r: f64) -> Self {
        self.map(|a| a.scale_by(r))
    }

    fn value(&self) -> HElem {
        self.coeffs[0]
    }

    /// `(v + δ)^{-1} = Σ_k (-v^{-1} δ)^k v^{-1}`, finite because `δ` has no constant term.
    fn try_inverse(&self, tol: f64) -> Result<Self> {
        let v_inv = self.coeffs[0].inverse(tol)?;
        let mut delta = self.clone();
        delta.coeffs[0] = HElem::zero(v_inv.scale());
        let step = -(self.lift(v_inv) * delta);
        let mut acc = self.lift(HElem::one(v_inv.scale()));
        let mut power = acc.clone();
        for _ in 0..self.basis.order {
            power = power * step.clone();
            acc = acc + power.clone();
        }
        Ok(acc * self.lift(v_inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hessian_packing_is_a_bijection() {
        let mut seen = [false; 10];
        for i in 0..4 {
            for j in i..4 {
                assert_eq!(hess_index(i, j), hess_index(j, i));
                seen[hess_index(i, j)] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn taylor_inverse_matches_jet_inverse() {
        let sc = Scale::new(1.5).unwrap();
        let x = Point4::new([0.3, -0.2, 0.5, 0.1]);
        let basis = TaylorBasis::new(2);
        let q = |v: &[TaylorJet; 4]| {
            v[0].clone() + v[1].clone() * v[1].lift(HElem::i(sc)) + v[2].clone() * v[2].lift(HElem::j(sc))
        };
        let tj = q(&TaylorJet::seed(&basis, &x, sc)).try_inverse(1e-12).unwrap();
        let jv = Jet2::seed(&x, sc);
        let j2 = (jv[0] + jv[1] * Jet2::constant(HElem::i(sc)) + jv[2] * Jet2::constant(HElem::j(sc)))
            .try_inverse(1e-12)
            .unwrap();
        assert!(tj.value().dist(&j2.value) < 1e-14);
        for i in 0..4 {
            let mut e = [0; 4];
            e[i] = 1;
            assert!(tj.derivative(e).dist(&j2.d(i)) < 1e-13);
            for j in 0..4 {
                let mut e2 = [0; 4];
                e2[i] += 1;
                e2[j] += 1;
                assert!(tj.derivative(e2).dist(&j2.dd(i, j)) < 1e-12);
            }
        }
    }
}
