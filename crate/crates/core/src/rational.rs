//! State-space realizations `D + q ⋆ C ⋆ (I - q ⋆ A)^{-⋆} ⋆ B` over H_t.

use crate::error::{Error, Result};
use crate::fueter::{self, Point4};
use crate::htmatrix::HMatrix;
use crate::hypercomplex::{Adjoint, Scale};
use crate::series::PowerSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub a: HMatrix,
    pub b: HMatrix,
    pub c: HMatrix,
    pub d: HMatrix,
}

/// Power series with matrix coefficients `Σ q^k f_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSeries {
    pub coeffs: Vec<HMatrix>,
}

impl Realization {
    pub fn new(a: HMatrix, b: HMatrix, c: HMatrix, d: HMatrix) -> Result<Realization> {
        let n = a.rows();
        if !a.is_square() || b.rows() != n || c.cols() != n || c.rows() != d.rows() || b.cols() != d.cols() {
            return Err(Error::DimensionMismatch(format!(
                "A {}x{}, B {}x{}, C {}x{}, D {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols(),
                d.rows(),
                d.cols()
            )));
        }
        let s = a.scale();
        for m in [&b, &c, &d] {
            s.check(m.scale())?;
        }
        Ok(Realization { a, b, c, d })
    }

    /// A realization of the constant `D` with a one-dimensional zero state.
    pub fn constant(d: HMatrix) -> Realization {
        let s = d.scale();
        Realization {
            a: HMatrix::zeros(s, 1, 1),
            b: HMatrix::zeros(s, 1, d.cols()),
            c: HMatrix::zeros(s, d.rows(), 1),
            d,
        }
    }

    pub fn scale(&self) -> Scale {
        self.a.scale()
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    /// `f_0 = D`, `f_k = C A^{k-1} B`.
    pub fn taylor_coeff(&self, k: usize) -> HMatrix {
        if k == 0 {
            self.d.clone()
        } else {
            &(&self.c * &self.a.powi(k - 1)) * &self.b
        }
    }

    pub fn to_series(&self, trunc: usize) -> MatrixSeries {
        let mut coeffs = Vec::with_capacity(trunc);
        if trunc > 0 {
            coeffs.push(self.d.clone());
        }
        let mut ca = self.c.clone();
        for _ in 1..trunc {
            coeffs.push(&ca * &self.b);
            ca = &ca * &self.a;
        }
        MatrixSeries { coeffs }
    }

    /// Scalar series of a 1×1 realization.
    pub fn to_scalar_series(&self, trunc: usize) -> Result<PowerSeries> {
        if self.d.rows() != 1 || self.d.cols() != 1 {
            return Err(Error::DimensionMismatch("scalar series of a matrix realization".into()));
        }
        let coeffs = self
            .to_series(trunc)
            .coeffs
            .into_iter()
            .map(|m| m.get(0, 0))
            .collect();
        PowerSeries::new(self.scale(), coeffs)
    }

    /// `D + x C (I - x A)^{-1} B` at a real point.
    pub fn eval_real(&self, x: f64) -> Result<HMatrix> {
        let n = self.state_dim();
        let resolvent = (&HMatrix::identity(self.scale(), n) - &self.a.scale_by(x)).minv()?;
        Ok(&self.d + &(&(&self.c * &resolvent) * &self.b).scale_by(x))
    }

    /// Weighted unitarity defects `‖M^k W M - W‖` and `‖M W^{-1} M^k - W^{-1}‖`
    /// of the block matrix `M = [[A, B], [C, D]]` with weight `diag(P, I)`.
    pub fn unitarity_defect(&self, p: &HMatrix, kind: Adjoint) -> Result<(f64, f64)> {
        let s = self.scale();
        let m = HMatrix::from_blocks(&self.a, &self.b, &self.c, &self.d)?;
        let out = self.d.rows();
        let w = HMatrix::from_blocks(
            p,
            &HMatrix::zeros(s, p.rows(), out),
            &HMatrix::zeros(s, out, p.cols()),
            &HMatrix::identity(s, out),
        )?;
        let w_inv = HMatrix::from_blocks(
            &p.minv()?,
            &HMatrix::zeros(s, p.rows(), out),
            &HMatrix::zeros(s, out, p.cols()),
            &HMatrix::identity(s, out),
        )?;
        let madj = m.madjoint(kind);
        let first = (&(&madj * &w) * &m).dist(&w);
        let second = (&(&m * &w_inv) * &madj).dist(&w_inv);
        Ok((first, second))
    }
}

/// Block-diagonal sum realization.
pub fn rsum(r1: &Realization, r2: &Realization) -> Result<Realization> {
    let s = r1.scale();
    s.check(r2.scale())?;
    let (n1, n2) = (r1.state_dim(), r2.state_dim());
    let a = HMatrix::from_blocks(&r1.a, &HMatrix::zeros(s, n1, n2), &HMatrix::zeros(s, n2, n1), &r2.a)?;
    let b = stack(&r1.b, &r2.b)?;
    let c = side(&r1.c, &r2.c)?;
    let d = r1.d.checked_add(&r2.d)?;
    Realization::new(a, b, c, d)
}

/// Cascade realization of the product `f1 ⋆ f2`.
pub fn rmul(r1: &Realization, r2: &Realization) -> Result<Realization> {
    let s = r1.scale();
    s.check(r2.scale())?;
    let (n1, n2) = (r1.state_dim(), r2.state_dim());
    let a = HMatrix::from_blocks(&r1.a, &r1.b.checked_mul(&r2.c)?, &HMatrix::zeros(s, n2, n1), &r2.a)?;
    let b = stack(&r1.b.checked_mul(&r2.d)?, &r2.b)?;
    let c = side(&r1.c, &r1.d.checked_mul(&r2.c)?)?;
    let d = r1.d.checked_mul(&r2.d)?;
    Realization::new(a, b, c, d)
}

/// Realization of the star inverse: `(A - B D^{-1} C, B D^{-1}, -D^{-1} C, D^{-1})`.
pub fn rinverse(r: &Realization, tol: f64) -> Result<Realization> {
    if !r.d.is_square() {
        return Err(Error::DimensionMismatch("inverse needs a square feedthrough".into()));
    }
    let d_inv = r.d.minvert(tol).map_err(|_| Error::NonInvertibleD)?;
    let b_dinv = &r.b * &d_inv;
    let a = &r.a - &(&b_dinv * &r.c);
    let c = -&(&d_inv * &r.c);
    Realization::new(a, b_dinv, c, d_inv)
}

fn stack(top: &HMatrix, bottom: &HMatrix) -> Result<HMatrix> {
    if top.cols() != bottom.cols() {
        return Err(Error::DimensionMismatch("input dimensions differ".into()));
    }
    Ok(HMatrix::from_fn(top.scale(), top.rows() + bottom.rows(), top.cols(), |r, c| {
        if r < top.rows() {
            top.get(r, c)
        } else {
            bottom.get(r - top.rows(), c)
        }
    }))
}

fn side(left: &HMatrix, right: &HMatrix) -> Result<HMatrix> {
    if left.rows() != right.rows() {
        return Err(Error::DimensionMismatch("output dimensions differ".into()));
    }
    Ok(HMatrix::from_fn(left.scale(), left.rows(), left.cols() + right.cols(), |r, c| {
        if c < left.cols() {
            left.get(r, c)
        } else {
            right.get(r, c - left.cols())
        }
    }))
}

impl MatrixSeries {
    /// Noncommutative convolution, truncated to the shorter factor.
    pub fn convolve(&self, g: &MatrixSeries) -> Result<MatrixSeries> {
        let n = self.coeffs.len().min(g.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for m in 0..n {
            let mut acc = self.coeffs[m].checked_mul(&g.coeffs[0])?;
            for k in 1..=m {
                acc = &acc + &self.coeffs[m - k].checked_mul(&g.coeffs[k])?;
            }
            coeffs.push(acc);
        }
        Ok(MatrixSeries { coeffs })
    }

    pub fn eval_real(&self, x: f64) -> HMatrix {
        let mut acc = self.coeffs[0].clone();
        let mut p = 1.0;
        for c in &self.coeffs[1..] {
            p *= x;
            acc = &acc + &c.scale_by(p);
        }
        acc
    }

    pub fn dist(&self, g: &MatrixSeries) -> f64 {
        self.coeffs
            .iter()
            .zip(&g.coeffs)
            .map(|(a, b)| a.dist(b))
            .fold(0.0, f64::max)
    }
}

/// Numerator `P^⊛` and real denominator `P ⋆ P^⊛` with `P^{-⋆} = P^⊛ ⋆ (P ⋆ P^⊛)^{-⋆}`.
pub fn circled_quotient(p: &PowerSeries) -> Result<(PowerSeries, PowerSeries)> {
    if p.coeff(0).inv().is_err() {
        return Err(Error::NonInvertibleConstantTerm);
    }
    let num = p.conj_series(Adjoint::Circled);
    let den = p.star_mul(&num)?;
    Ok((num, den))
}

/// Three-letter realization `D + C ⋆ (I - Σ μ_k A_k)^{-⋆} ⋆ Σ μ_k B_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LetterRealization {
    pub a: [HMatrix; 3],
    pub b: [HMatrix; 3],
    pub c: HMatrix,
    pub d: HMatrix,
}

impl LetterRealization {
    pub fn new(a: [HMatrix; 3], b: [HMatrix; 3], c: HMatrix, d: HMatrix) -> Result<LetterRealization> {
        let n = c.cols();
        for k in 0..3 {
            if a[k].rows() != n || a[k].cols() != n || b[k].rows() != n || b[k].cols() != d.cols() {
                return Err(Error::DimensionMismatch(format!("letter {k}")));
            }
        }
        if c.rows() != d.rows() {
            return Err(Error::DimensionMismatch("C and D rows".into()));
        }
        Ok(LetterRealization { a, b, c, d })
    }

    /// Splits stacked `A` (3N×N) and `B` (3N×m) into their letter blocks.
    pub fn from_stacked(a: &HMatrix, b: &HMatrix, c: HMatrix, d: HMatrix) -> Result<LetterRealization> {
        let n = c.cols();
        if a.rows() != 3 * n || b.rows() != 3 * n {
            return Err(Error::DimensionMismatch("stacked letters".into()));
        }
        let ak = [0, 1, 2].map(|k| a.block(k * n, 0, n, n));
        let bk = [0, 1, 2].map(|k| b.block(k * n, 0, n, b.cols()));
        LetterRealization::new(ak, bk, c, d)
    }
}

/// Evaluates a three-letter realization at `x` by geometric expansion in the
/// commuting variables `μ_k(x)`, which act on the left.
pub fn mu_realization_eval(r: &LetterRealization, x: &Point4, t: Scale, trunc: usize) -> Result<HMatrix> {
    let mu = [fueter::mu(1, x, t)?, fueter::mu(2, x, t)?, fueter::mu(3, x, t)?];
    let n = r.c.cols();
    let sum_a = (0..3).fold(HMatrix::zeros(t, n, n), |acc, k| &acc + &r.a[k].lmul(mu[k]));
    let norm = sum_a.mnorm_op();
    if norm >= 1.0 {
        return Err(Error::NotContractive { norm });
    }
    let mut out = r.d.clone();
    let mut state = r.c.clone();
    for _ in 0..trunc {
        for k in 0..3 {
            out = &out + &(&state * &r.b[k]).lmul(mu[k]);
        }
        let mut next = HMatrix::zeros(t, state.rows(), n);
        for k in 0..3 {
            next = &next + &(&state * &r.a[k]).lmul(mu[k]);
        }
        state = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercomplex::HElem;

    fn s(t: f64) -> Scale {
        Scale::new(t).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let sc = s(1.0);
        let a = HElem::from_coords(sc, [0.3, 0.1, 0.2, 0.0]);
        let one = HMatrix::identity(sc, 1);
        let r = Realization::new(HMatrix::scalar(a), one.clone(), one.clone(), HMatrix::zeros(sc, 1, 1)).unwrap();
        assert_eq!(r.taylor_coeff(0), HMatrix::zeros(sc, 1, 1));
        assert_eq!(r.taylor_coeff(1), one);
        let f = r.to_scalar_series(6).unwrap();
        for k in 1..6 {
            assert!(f.coeff(k).dist(&a.powi(k - 1)) < 1e-15);
        }
    }

    #[test]
    fn nilpotent_state_cuts_the_series() {
        let sc = s(-2.0);
        let e = HElem::from_coords(sc, [0.4, 0.0, 1.0, 0.5]);
        let mut a = HMatrix::zeros(sc, 2, 2);
        a.set(0, 1, e);
        let r = Realization::new(
            a,
            HMatrix::col(sc, &[e, e]),
            HMatrix::row(sc, &[e, e]),
            HMatrix::scalar(e),
        )
        .unwrap();
        assert!(r.taylor_coeff(2).max_entry_norm() > 0.0);
        for k in 3..6 {
            assert_eq!(r.taylor_coeff(k).max_entry_norm(), 0.0);
        }
    }

    #[test]
    fn inverse_of_one_minus_qa() {
        let sc = s(0.5);
        let a = HElem::from_coords(sc, [0.1, -0.2, 0.3, 0.2]);
        let one = HMatrix::identity(sc, 1);
        let r = Realization::new(HMatrix::zeros(sc, 1, 1), one.clone(), HMatrix::scalar(-a), one).unwrap();
        let inv = rinverse(&r, 1e-12).unwrap().to_scalar_series(10).unwrap();
        assert!(inv.dist(&PowerSeries::geometric(a, 10)) < 1e-15);

        let bad = Realization::constant(HMatrix::scalar(HElem::one(s(1.0)) + HElem::j(s(1.0))));
        assert_eq!(rinverse(&bad, 1e-12), Err(Error::NonInvertibleD));
    }

    #[test]
    fn quotient_of_one_minus_qa() {
        let sc = s(2.0);
        let a = HElem::from_coords(sc, [0.1, -0.2, 0.3, 0.2]);
        let one = HElem::one(sc);
        let p = PowerSeries::polynomial(sc, &[one, -a], 6).unwrap();
        let (num, den) = circled_quotient(&p).unwrap();
        assert_eq!(num.coeff(1), -a.circled());
        let want = [1.0, -2.0 * a.re(), a.det()];
        for (k, w) in want.iter().enumerate() {
            assert!(den.coeff(k).dist(&HElem::real(sc, *w)) < 1e-15);
        }
    }

    #[test]
    fn single_letter_evaluates_to_mu() {
        let sc = s(-1.0);
        let z = HMatrix::zeros(sc, 1, 1);
        let one = HMatrix::identity(sc, 1);
        let r = LetterRealization::new(
            [z.clone(), z.clone(), z.clone()],
            [one.clone(), z.clone(), z.clone()],
            one,
            z,
        )
        .unwrap();
        let x = Point4::new([0.3, 0.5, -0.2, 0.4]);
        let v = mu_realization_eval(&r, &x, sc, 4).unwrap();
        assert!(v.get(0, 0).dist(&fueter::mu(1, &x, sc).unwrap()) < 1e-15);
    }
}
