//! The ring H_t of scaled hypercomplex numbers.
//!
//! An element is stored as a complex pair `(a, b)` standing for the 2×2 matrix
//! `[[a, t·b], [conj(b), conj(a)]]`. With `a = x0 + x1 i` and `b = x2 + x3 i`
//! the element reads `x0 + x1 i + x2 j + x3 k` where `i² = -1` and `j² = k² = t`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{same_scale, Error, Result};

pub type C64 = Complex64;

/// A 2×2 complex matrix, row major.
pub type Mat2 = [[C64; 2]; 2];

/// The non-zero real scale `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scale(f64);

impl Scale {
    pub fn new(t: f64) -> Result<Scale> {
        if t.is_finite() && t != 0.0 {
            Ok(Scale(t))
        } else {
            Err(Error::InvalidScale(t))
        }
    }

    pub fn t(self) -> f64 {
        self.0
    }

    pub fn sign(self) -> f64 {
        self.0.signum()
    }

    /// Bitwise equality; scales are never coerced.
    pub fn same(self, other: Scale) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }

    pub fn check(self, other: Scale) -> Result<()> {
        same_scale(self.0, other.0)
    }
}

/// The two adjoints that stay inside H_t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Adjoint {
    /// `(a, b) -> (conj a, -b)`, the adjugate; `q q^⊛ = det(q)`.
    Circled,
    /// `(a, b) -> (a, conj b)`.
    Bracket,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdjointKind {
    Circled,
    Bracket,
    /// Conjugate transpose of the embedding; leaves H_t unless `t = ±1`.
    Regular,
}

impl From<Adjoint> for AdjointKind {
    fn from(k: Adjoint) -> Self {
        match k {
            Adjoint::Circled => AdjointKind::Circled,
            Adjoint::Bracket => AdjointKind::Bracket,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AdjointValue {
    Elem(HElem),
    Matrix(Mat2),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormKind {
    Hs,
    Op,
    Euclid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Circled,
    Bracket,
    Euclid,
}

impl From<Adjoint> for FormKind {
    fn from(k: Adjoint) -> Self {
        match k {
            Adjoint::Circled => FormKind::Circled,
            Adjoint::Bracket => FormKind::Bracket,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HElemWire", into = "HElemWire")]
pub struct HElem {
    scale: Scale,
    a: C64,
    b: C64,
}

#[derive(Serialize, Deserialize)]
struct HElemWire {
    t: f64,
    a: [f64; 2],
    b: [f64; 2],
}

impl TryFrom<HElemWire> for HElem {
    type Error = Error;
    fn try_from(w: HElemWire) -> Result<HElem> {
        HElem::new(
            Scale::new(w.t)?,
            C64::new(w.a[0], w.a[1]),
            C64::new(w.b[0], w.b[1]),
        )
    }
}

impl From<HElem> for HElemWire {
    fn from(q: HElem) -> Self {
        HElemWire {
            t: q.scale.t(),
            a: [q.a.re, q.a.im],
            b: [q.b.re, q.b.im],
        }
    }
}

impl HElem {
    pub fn new(scale: Scale, a: C64, b: C64) -> Result<HElem> {
        if a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite() {
            Ok(HElem { scale, a, b })
        } else {
            Err(Error::NonFinite)
        }
    }

    pub(crate) fn raw(scale: Scale, a: C64, b: C64) -> HElem {
        HElem { scale, a, b }
    }

    /// `x0 + x1 i + x2 j + x3 k`.
    pub fn from_coords(scale: Scale, x: [f64; 4]) -> HElem {
        HElem::raw(scale, C64::new(x[0], x[1]), C64::new(x[2], x[3]))
    }

    pub fn real(scale: Scale, x: f64) -> HElem {
        HElem::from_coords(scale, [x, 0.0, 0.0, 0.0])
    }

    pub fn zero(scale: Scale) -> HElem {
        HElem::real(scale, 0.0)
    }

    pub fn one(scale: Scale) -> HElem {
        HElem::real(scale, 1.0)
    }

    pub fn i(scale: Scale) -> HElem {
        HElem::from_coords(scale, [0.0, 1.0, 0.0, 0.0])
    }

    pub fn j(scale: Scale) -> HElem {
        HElem::from_coords(scale, [0.0, 0.0, 1.0, 0.0])
    }

    pub fn k(scale: Scale) -> HElem {
        HElem::from_coords(scale, [0.0, 0.0, 0.0, 1.0])
    }

    /// The basis `1, i, j, k`.
    pub fn basis(scale: Scale) -> [HElem; 4] {
        [
            HElem::one(scale),
            HElem::i(scale),
            HElem::j(scale),
            HElem::k(scale),
        ]
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn t(&self) -> f64 {
        self.scale.t()
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.a.re, self.a.im, self.b.re, self.b.im]
    }

    pub fn is_zero(&self) -> bool {
        self.a == C64::new(0.0, 0.0) && self.b == C64::new(0.0, 0.0)
    }

    pub fn to_matrix(&self) -> Mat2 {
        let t = self.t();
        [[self.a, self.b * t], [self.b.conj(), self.a.conj()]]
    }

    pub fn checked_mul(&self, o: &HElem) -> Result<HElem> {
        self.scale.check(o.scale)?;
        Ok(self.mul_unchecked(o))
    }

    pub fn checked_add(&self, o: &HElem) -> Result<HElem> {
        self.scale.check(o.scale)?;
        Ok(HElem::raw(self.scale, self.a + o.a, self.b + o.b))
    }

    fn mul_unchecked(&self, o: &HElem) -> HElem {
        let t = self.t();
        HElem::raw(
            self.scale,
            self.a * o.a + self.b * o.b.conj() * t,
            self.a * o.b + self.b * o.a.conj(),
        )
    }

    pub fn scale_by(&self, r: f64) -> HElem {
        HElem::raw(self.scale, self.a * r, self.b * r)
    }

    pub fn powi(&self, n: usize) -> HElem {
        let mut acc = HElem::one(self.scale);
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    pub fn circled(&self) -> HElem {
        HElem::raw(self.scale, self.a.conj(), -self.b)
    }

    pub fn bracket(&self) -> HElem {
        HElem::raw(self.scale, self.a, self.b.conj())
    }

    pub fn adj(&self, kind: Adjoint) -> HElem {
        match kind {
            Adjoint::Circled => self.circled(),
            Adjoint::Bracket => self.bracket(),
        }
    }

    pub fn adjoint(&self, kind: AdjointKind) -> AdjointValue {
        match kind {
            AdjointKind::Circled => AdjointValue::Elem(self.circled()),
            AdjointKind::Bracket => AdjointValue::Elem(self.bracket()),
            AdjointKind::Regular => {
                let t = self.t();
                AdjointValue::Matrix([[self.a.conj(), self.b], [self.b.conj() * t, self.a]])
            }
        }
    }

    pub fn det(&self) -> f64 {
        self.a.norm_sqr() - self.t() * self.b.norm_sqr()
    }

    pub fn re(&self) -> f64 {
        self.a.re
    }

    /// Default invertibility threshold `1e-12 · max(1, ‖q‖²_op)`.
    pub fn default_tol(&self) -> f64 {
        1e-12 * self.norm(NormKind::Op).powi(2).max(1.0)
    }

    pub fn inverse(&self, tol: f64) -> Result<HElem> {
        let det = self.det();
        if det.abs() <= tol {
            return Err(Error::NonInvertible { det });
        }
        Ok(self.circled().scale_by(1.0 / det))
    }

    /// Inverse with the default threshold.
    pub fn inv(&self) -> Result<HElem> {
        self.inverse(self.default_tol())
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        let t = self.t();
        let a2 = self.a.norm_sqr();
        let b2 = self.b.norm_sqr();
        match kind {
            NormKind::Hs => (2.0 * a2 + (1.0 + t * t) * b2).sqrt(),
            NormKind::Euclid => (a2 + t.abs() * b2).sqrt(),
            NormKind::Op => {
                let disc = (b2 * b2 * (1.0 - t * t).powi(2)
                    + 4.0 * a2 * b2 * (1.0 + t).powi(2))
                .sqrt();
                ((b2 * (1.0 + t * t) + 2.0 * a2 + disc) / 2.0).sqrt()
            }
        }
    }

    pub fn op_norm(&self) -> f64 {
        self.norm(NormKind::Op)
    }

    /// Max absolute coordinate difference, for tolerance checks.
    pub fn dist(&self, o: &HElem) -> f64 {
        (*self - *o).op_norm()
    }
}

impl PartialEq<f64> for HElem {
    fn eq(&self, x: &f64) -> bool {
        self.coords() == [*x, 0.0, 0.0, 0.0]
    }
}

impl Mul for HElem {
    type Output = HElem;
    /// Panics on a scale mismatch; use [`HElem::checked_mul`] to recover.
    fn mul(self, o: HElem) -> HElem {
        self.checked_mul(&o).expect("scale mismatch in H_t product")
    }
}

impl Add for HElem {
    type Output = HElem;
    fn add(self, o: HElem) -> HElem {
        self.checked_add(&o).expect("scale mismatch in H_t sum")
    }
}

impl Sub for HElem {
    type Output = HElem;
    fn sub(self, o: HElem) -> HElem {
        self + (-o)
    }
}

impl Neg for HElem {
    type Output = HElem;
    fn neg(self) -> HElem {
        HElem::raw(self.scale, -self.a, -self.b)
    }
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x0, x1, x2, x3] = self.coords();
        write!(f, "{x0} {:+}i {:+}j {:+}k", x1, x2, x3)
    }
}

/// Real symmetric form on H_t.
pub fn form(p: &HElem, q: &HElem, kind: FormKind) -> Result<f64> {
    p.scale.check(q.scale)?;
    let t = p.t();
    Ok(match kind {
        FormKind::Circled => 2.0 * (p.a * q.a.conj()).re - 2.0 * t * (p.b.conj() * q.b).re,
        FormKind::Bracket => 2.0 * (p.a * q.a + p.b.conj() * q.b.conj() * t).re,
        FormKind::Euclid => {
            let x = p.coords();
            let y = q.coords();
            x[0] * y[0] + x[1] * y[1] + t.abs() * (x[2] * y[2] + x[3] * y[3])
        }
    })
}

/// Signature operator relating a Krein form to the scaled Euclidean one:
/// `form(q, q, kind) = 2 · form(q, J q, Euclid)`.
pub fn signature_operator(q: &HElem, kind: Adjoint) -> HElem {
    let s = q.scale.sign();
    let [x0, x1, x2, x3] = q.coords();
    let y = match kind {
        Adjoint::Circled => [x0, x1, -s * x2, -s * x3],
        Adjoint::Bracket => [x0, -x1, s * x2, -s * x3],
    };
    HElem::from_coords(q.scale, y)
}

/// Gram matrix of the basis `1, i, j, k` under `form`, with counts of
/// positive and negative eigenvalues (cutoff `1e-10`).
pub fn signature_basis_gram(scale: Scale, kind: FormKind) -> ([[f64; 4]; 4], (usize, usize)) {
    let basis = HElem::basis(scale);
    let mut g = [[0.0; 4]; 4];
    for u in 0..4 {
        for v in 0..4 {
            g[u][v] = form(&basis[u], &basis[v], kind).expect("basis shares the scale");
        }
    }
    let m = Matrix4::from_fn(|r, c| g[r][c]);
    let eig = SymmetricEigen::new(m);
    let pos = eig.eigenvalues.iter().filter(|&&l| l > 1e-10).count();
    let neg = eig.eigenvalues.iter().filter(|&&l| l < -1e-10).count();
    (g, (pos, neg))
}

/// Average of the ordered products over all permutations of `hs`.
///
/// Only distinct orderings of the multiset are enumerated (with memoization on
/// the remaining multiplicities).
pub fn symmetrized_product(hs: &[HElem]) -> Result<HElem> {
    let first = hs.first().ok_or(Error::EmptyInput)?;
    let scale = first.scale;
    let mut distinct: Vec<HElem> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for h in hs {
        scale.check(h.scale)?;
        match distinct.iter().position(|d| d.coords().map(f64::to_bits) == h.coords().map(f64::to_bits)) {
            Some(p) => counts[p] += 1,
            None => {
                distinct.push(*h);
                counts.push(1);
            }
        }
    }
    let mut memo = HashMap::new();
    let total = orderings_sum(&distinct, &mut counts, &mut memo, scale);
    let n_orderings = multinomial(&counts);
    Ok(total.scale_by(1.0 / n_orderings))
}

fn orderings_sum(
    distinct: &[HElem],
    counts: &mut Vec<usize>,
    memo: &mut HashMap<Vec<usize>, HElem>,
    scale: Scale,
) -> HElem {
    if counts.iter().all(|&c| c == 0) {
        return HElem::one(scale);
    }
    if let Some(v) = memo.get(counts.as_slice()) {
        return *v;
    }
    let mut acc = HElem::zero(scale);
    for g in 0..distinct.len() {
        if counts[g] == 0 {
            continue;
        }
        counts[g] -= 1;
        let rest = orderings_sum(distinct, counts, memo, scale);
        counts[g] += 1;
        acc = acc + distinct[g] * rest;
    }
    memo.insert(counts.clone(), acc);
    acc
}

fn multinomial(counts: &[usize]) -> f64 {
    let mut n = 0usize;
    let mut value = 1.0;
    for &c in counts {
        for k in 1..=c {
            n += 1;
            value *= n as f64 / k as f64;
        }
    }
    value
}

/// Same real part and determinant as `center`.
pub fn sphere_contains(center: &HElem, candidate: &HElem, tol: f64) -> Result<bool> {
    center.scale.check(candidate.scale)?;
    Ok((center.re() - candidate.re()).abs() <= tol && (center.det() - candidate.det()).abs() <= tol)
}
