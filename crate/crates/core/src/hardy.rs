//! Hardy-space forms, Blaschke factors for both adjoints, one-point division
//! and N-point zero interpolation.

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::htmatrix::{gram_points, HMatrix};
use crate::hypercomplex::{Adjoint, HElem};
use crate::rational::Realization;
use crate::series::PowerSeries;

/// `[f, g] = Σ_n g_n^k f_n` together with its trace `2·re`.
pub fn hardy_inner(f: &PowerSeries, g: &PowerSeries, kind: Adjoint) -> Result<(HElem, f64)> {
    f.scale().check(g.scale())?;
    let n = f.trunc().min(g.trunc());
    let v = (0..n).fold(HElem::zero(f.scale()), |acc, k| acc + g.coeff(k).adj(kind) * f.coeff(k));
    Ok((v, 2.0 * v.re()))
}

fn check_unit_ball(alpha: &HElem) -> Result<()> {
    let norm = alpha.op_norm();
    if norm >= 1.0 {
        Err(Error::NotInUnitBall { norm })
    } else {
        Ok(())
    }
}

/// Blaschke factor `(q - α) ⋆ (1 - q α^⊛)^{-⋆}` from its closed coefficients
/// `-α` and `(1 - α α^⊛) (α^⊛)^{n-1}`.
pub fn blaschke_circled(alpha: &HElem, trunc: usize) -> Result<PowerSeries> {
    check_unit_ball(alpha)?;
    let s = alpha.scale();
    let ac = alpha.circled();
    let lead = HElem::real(s, 1.0 - alpha.det());
    let mut coeffs = vec![-*alpha];
    let mut p = HElem::one(s);
    for _ in 1..trunc.max(1) {
        coeffs.push(lead * p);
        p = p * ac;
    }
    PowerSeries::new(s, coeffs)
}

/// The same factor assembled by star division, as an independent route.
pub fn blaschke_circled_by_division(alpha: &HElem, trunc: usize) -> Result<PowerSeries> {
    check_unit_ball(alpha)?;
    let s = alpha.scale();
    let one = HElem::one(s);
    let num = PowerSeries::polynomial(s, &[-*alpha, one], trunc)?;
    let den = PowerSeries::polynomial(s, &[one, -alpha.circled()], trunc)?;
    num.star_mul(&den.star_inverse()?)
}

/// The alternative factor `(1 - q α^⊛)^{-⋆} ⋆ (q - α)` with the division on
/// the wrong side. It does not vanish at `α` in the left-evaluation sense, so
/// it cannot be used to divide out a zero; kept for negative tests.
pub fn circled_c_alpha(alpha: &HElem, trunc: usize) -> Result<PowerSeries> {
    check_unit_ball(alpha)?;
    let s = alpha.scale();
    let one = HElem::one(s);
    let num = PowerSeries::polynomial(s, &[-*alpha, one], trunc)?;
    let den = PowerSeries::polynomial(s, &[one, -alpha.circled()], trunc)?;
    den.star_inverse()?.star_mul(&num)
}

/// `(q² - 2q Re α + det α) ⋆ (q² det α - 2q Re α + 1)^{-⋆}`, which equals
/// `b_α ⋆ b_{α^⊛}` and has real coefficients.
pub fn blaschke_pair_closed_form(alpha: &HElem, trunc: usize) -> Result<PowerSeries> {
    let s = alpha.scale();
    let r = |x: f64| HElem::real(s, x);
    let (re, det) = (alpha.re(), alpha.det());
    let num = PowerSeries::polynomial(s, &[r(det), r(-2.0 * re), r(1.0)], trunc)?;
    let den = PowerSeries::polynomial(s, &[r(1.0), r(-2.0 * re), r(det)], trunc)?;
    num.star_mul(&den.star_inverse()?)
}

/// Left evaluation residual `Σ α^n f_n`; it vanishes exactly when `f = (q - α) ⋆ h`.
pub fn zero_residual(f: &PowerSeries, alpha: &HElem) -> Result<HElem> {
    f.eval(alpha)
}

/// Synthetic left division `f = (q - α) ⋆ h + f(α)`; returns `(h, f(α))`.
pub fn divide_by_root(f: &PowerSeries, alpha: &HElem) -> Result<(PowerSeries, HElem)> {
    f.scale().check(alpha.scale())?;
    let n = f.trunc();
    let s = f.scale();
    if n == 1 {
        return Ok((PowerSeries::zero(s, 1), f.coeff(0)));
    }
    // h_m = Σ_k α^k f_{m+1+k}, accumulated from the top.
    let mut h = vec![HElem::zero(s); n - 1];
    let mut acc = HElem::zero(s);
    for m in (0..n - 1).rev() {
        acc = f.coeff(m + 1) + *alpha * acc;
        h[m] = acc;
    }
    let residual = f.coeff(0) + *alpha * h[0];
    Ok((PowerSeries::new(s, h)?, residual))
}

pub const DIVISION_TOL: f64 = 1e-9;

/// Finds `g` with `f = b ⋆ g`, `b` the Blaschke factor of the given kind.
pub fn solve_one_point(f: &PowerSeries, alpha: &HElem, kind: Adjoint) -> Result<PowerSeries> {
    let scale_ref = f.coeffs().iter().map(|c| c.op_norm()).sum::<f64>().max(1.0);
    solve_one_point_with_tol(f, alpha, kind, DIVISION_TOL * scale_ref)
}

pub fn solve_one_point_with_tol(f: &PowerSeries, alpha: &HElem, kind: Adjoint, tol: f64) -> Result<PowerSeries> {
    check_unit_ball(alpha)?;
    let (beta, k_inv) = match kind {
        Adjoint::Circled => (alpha.circled(), HElem::one(alpha.scale())),
        Adjoint::Bracket => {
            let data = bracket_data(alpha)?;
            let k_inv = data.k.inv()?;
            (data.beta(), k_inv)
        }
    };
    let (h, residual) = divide_by_root(f, alpha)?;
    let r = residual.op_norm();
    if r > tol {
        return Err(Error::NotAZero { residual: r });
    }
    let s = f.scale();
    let den = PowerSeries::polynomial(s, &[HElem::one(s), -beta], h.trunc())?;
    Ok(den.star_mul(&h)?.lmul(k_inv))
}

/// Data of the bracket Blaschke factor at `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BracketBlaschkeData {
    pub alpha: HElem,
    /// Solution of `Γ - α Γ α^[*] = 1`.
    pub gamma: HElem,
    pub gamma_inv: HElem,
    /// `Γ - Γ α^[*] Γ^{-1} α Γ`.
    pub l: HElem,
    /// `L^{1/2}`.
    pub k: HElem,
}

impl BracketBlaschkeData {
    /// `Γ α^[*] Γ^{-1}`, the pole parameter of the factor.
    pub fn beta(&self) -> HElem {
        self.gamma * self.alpha.bracket() * self.gamma_inv
    }
}

/// `‖α‖² / (1 - ‖α‖²)`, which must stay below one.
pub fn smallness(alpha: &HElem) -> f64 {
    let n2 = alpha.op_norm().powi(2);
    n2 / (1.0 - n2)
}

/// Solves `X - α X α^[*] = 1` as a 4×4 real linear system in the coordinates of `X`.
pub fn solve_gamma(alpha: &HElem) -> Result<HElem> {
    let s = alpha.scale();
    let ab = alpha.bracket();
    let basis = HElem::basis(s);
    let mut m = Matrix4::zeros();
    for (c, e) in basis.iter().enumerate() {
        let img = (*e - *alpha * *e * ab).coords();
        for r in 0..4 {
            m[(r, c)] = img[r];
        }
    }
    let x = m
        .lu()
        .solve(&Vector4::new(1.0, 0.0, 0.0, 0.0))
        .ok_or(Error::NonInvertible { det: 0.0 })?;
    Ok(HElem::from_coords(s, [x[0], x[1], x[2], x[3]]))
}

pub fn bracket_data(alpha: &HElem) -> Result<BracketBlaschkeData> {
    check_unit_ball(alpha)?;
    let value = smallness(alpha);
    if value >= 1.0 {
        return Err(Error::SmallnessViolated { value });
    }
    let gamma = solve_gamma(alpha)?;
    let gamma_inv = gamma.inv()?;
    let l = gamma - gamma * alpha.bracket() * gamma_inv * *alpha * gamma;
    l.inv()?;
    let k = sqrt_selfadjoint(&l, Adjoint::Bracket)?;
    Ok(BracketBlaschkeData {
        alpha: *alpha,
        gamma,
        gamma_inv,
        l,
        k,
    })
}

/// Bracket Blaschke factor with coefficients `-αK` and `(α^[*])^{n-1} Γ^{-1} K`,
/// and its realization `(α^[*], Γ^{-1}K, 1, -αK)`.
pub fn bracket_blaschke(alpha: &HElem, trunc: usize) -> Result<(PowerSeries, BracketBlaschkeData, Realization)> {
    let data = bracket_data(alpha)?;
    let s = alpha.scale();
    let ab = alpha.bracket();
    let tail = data.gamma_inv * data.k;
    let mut coeffs = vec![-(*alpha * data.k)];
    let mut p = HElem::one(s);
    for _ in 1..trunc.max(1) {
        coeffs.push(p * tail);
        p = p * ab;
    }
    let series = PowerSeries::new(s, coeffs)?;
    let realization = Realization::new(
        HMatrix::scalar(ab),
        HMatrix::scalar(tail),
        HMatrix::identity(s, 1),
        HMatrix::scalar(-(*alpha * data.k)),
    )?;
    Ok((series, data, realization))
}

/// Square root of `s = 1 + ε` by the binomial series of `√(1+ε)`.
pub fn sqrt_selfadjoint(s: &HElem, _kind: Adjoint) -> Result<HElem> {
    let one = HElem::one(s.scale());
    let eps = *s - one;
    let norm = eps.op_norm();
    if norm >= 1.0 {
        return Err(Error::NotContractivePerturbation { norm });
    }
    let mut acc = one;
    let mut power = one;
    let mut gamma = 1.0;
    for n in 1..200_000 {
        gamma *= (0.5 - (n - 1) as f64) / n as f64;
        power = power * eps;
        let term = power.scale_by(gamma);
        acc = acc + term;
        if term.op_norm() < 1e-16 {
            break;
        }
    }
    Ok(acc)
}

/// Zero-interpolating inner function for finitely many points.
#[derive(Clone, Debug)]
pub struct Theta {
    pub points: Vec<HElem>,
    pub gram: HMatrix,
    pub realization: Realization,
    pub series: PowerSeries,
}

/// Residuals of the certificates attached to a [`Theta`]. Each is divided by
/// the size of the terms in its identity (at least one), so the values stay
/// comparable when the Gram matrix is badly conditioned.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaCertificates {
    /// Largest `‖Θ(p)‖ / Σ ‖θ_n‖ ‖p‖^n` over the interpolation points.
    pub zero_residual: f64,
    /// `A^⊛ G A + C^⊛ C - G`.
    pub stein_a: f64,
    /// `B^⊛ G A + D^⊛ C`.
    pub stein_cross: f64,
    /// `B^⊛ G B + D^⊛ D - 1`.
    pub stein_b: f64,
    /// `Σ θ_n^⊛ θ_{n+k} - δ_k`, relative to `Σ ‖θ_n‖²`.
    pub orthonormality: f64,
    /// `G^{-1} - A G^{-1} A^⊛ - B B^⊛`.
    pub inverse_stein: f64,
    /// `‖G‖ ‖G^{-1}‖`.
    pub gram_condition: f64,
}

pub fn theta_interpolate(points: &[HElem], trunc: usize) -> Result<Theta> {
    let gram = gram_points(points, Adjoint::Circled)?;
    let s = gram.scale();
    let n = points.len();
    let g_inv = gram.minv().map_err(|_| Error::GramNotInvertible)?;
    let adj: Vec<HElem> = points.iter().map(|p| p.circled()).collect();
    let a = HMatrix::diag(s, &adj);
    let c = HMatrix::row(s, &vec![HElem::one(s); n]);
    let id = HMatrix::identity(s, n);
    let i_minus_ac_inv = (&id - &a.madjoint(Adjoint::Circled))
        .minv()
        .map_err(|_| Error::GramNotInvertible)?;
    let w = &(&g_inv * &i_minus_ac_inv) * &c.madjoint(Adjoint::Circled);
    let b = &(&id - &a) * &w;
    let d = &HMatrix::identity(s, 1) - &(&c * &w);
    let realization = Realization::new(a, b, c, d)?;
    let series = realization.to_scalar_series(trunc)?;
    Ok(Theta {
        points: points.to_vec(),
        gram,
        realization,
        series,
    })
}

impl Theta {
    pub fn certify(&self) -> Result<ThetaCertificates> {
        let r = &self.realization;
        let s = r.scale();
        let k = Adjoint::Circled;
        let g = &self.gram;
        let g_inv = g.minv()?;
        let theta = self.series.coeffs();
        let (na, nb, nc, nd) = (r.a.mnorm_op(), r.b.mnorm_op(), r.c.mnorm_op(), r.d.mnorm_op());
        let (ng, ngi) = (g.mnorm_op(), g_inv.mnorm_op());
        let unit = |x: f64| x.max(1.0);

        let mut zero = 0.0f64;
        for p in &self.points {
            let size: f64 = theta.iter().enumerate().map(|(n, c)| c.op_norm() * p.op_norm().powi(n as i32)).sum();
            zero = zero.max(zero_residual(&self.series, p)?.op_norm() / unit(size));
        }
        let stein_a = (&(&(&r.a.madjoint(k) * g) * &r.a) + &(&r.c.madjoint(k) * &r.c)).dist(g)
            / unit(na * na * ng + nc * nc + ng);
        let stein_cross = (&(&(&r.b.madjoint(k) * g) * &r.a) + &(&r.d.madjoint(k) * &r.c)).max_entry_norm()
            / unit(nb * ng * na + nd * nc);
        let stein_b = (&(&(&r.b.madjoint(k) * g) * &r.b) + &(&r.d.madjoint(k) * &r.d)).dist(&HMatrix::identity(s, 1))
            / unit(nb * nb * ng + nd * nd);
        let inverse_stein = (&g_inv - &(&(&r.a * &g_inv) * &r.a.madjoint(k))).dist(&(&r.b * &r.b.madjoint(k)))
            / unit(ngi + na * na * ngi + nb * nb);
        let energy: f64 = theta.iter().map(|c| c.op_norm().powi(2)).sum();
        let mut ortho = 0.0f64;
        for shift in 0..theta.len().min(8) {
            let mut acc = HElem::zero(s);
            for n in 0..theta.len() - shift {
                acc = acc + theta[n].circled() * theta[n + shift];
            }
            let want = HElem::real(s, if shift == 0 { 1.0 } else { 0.0 });
            ortho = ortho.max(acc.dist(&want) / unit(energy));
        }
        Ok(ThetaCertificates {
            zero_residual: zero,
            stein_a,
            stein_cross,
            stein_b,
            orthonormality: ortho,
            inverse_stein,
            gram_condition: ng * ngi,
        })
    }
}

/// Largest deviation of `[m ⋆ q^u, m ⋆ q^v]_k` from `δ_uv` over `u, v < n_monomials`.
pub fn isometry_gram(multiplier: &PowerSeries, kind: Adjoint, n_monomials: usize, trunc: usize) -> f64 {
    let s = multiplier.scale();
    let theta: Vec<HElem> = (0..trunc).map(|n| multiplier.coeff(n)).collect();
    let mut worst = 0.0f64;
    for u in 0..n_monomials {
        for v in 0..n_monomials {
            // (m ⋆ q^u)_n = θ_{n-u}
            let mut acc = HElem::zero(s);
            for n in u.max(v)..trunc {
                acc = acc + theta[n - v].adj(kind) * theta[n - u];
            }
            let want = HElem::real(s, if u == v { 1.0 } else { 0.0 });
            worst = worst.max(acc.dist(&want));
        }
    }
    worst
}

/// Gram matrix for the bracket adjoint. Nothing guarantees an interpolant from
/// it; exposed for experimentation only.
pub fn bracket_gram_points(points: &[HElem]) -> Result<HMatrix> {
    gram_points(points, Adjoint::Bracket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercomplex::Scale;

    fn s(t: f64) -> Scale {
        Scale::new(t).unwrap()
    }

    #[test]
    fn inner_examples() {
        let sc = s(2.0);
        let one = PowerSeries::constant(HElem::one(sc), 4);
        let (v, tr) = hardy_inner(&one, &one, Adjoint::Circled).unwrap();
        assert_eq!((v, tr), (HElem::one(sc), 2.0));
        let f = PowerSeries::monomial(1, HElem::j(sc), 4);
        let g = PowerSeries::monomial(2, HElem::k(sc), 4);
        assert!(hardy_inner(&f, &g, Adjoint::Bracket).unwrap().0.is_zero());
    }

    #[test]
    fn kernel_reproduces_values() {
        let sc = s(-1.0);
        let f = PowerSeries::polynomial(sc, &[HElem::one(sc), HElem::i(sc)], 40).unwrap();
        let p = HElem::real(sc, 0.3);
        let mut k = Vec::new();
        let mut pc = HElem::one(sc);
        for _ in 0..40 {
            k.push(pc);
            pc = pc * p.circled();
        }
        let kernel = PowerSeries::new(sc, k).unwrap();
        let (v, _) = hardy_inner(&f, &kernel, Adjoint::Circled).unwrap();
        assert!(v.dist(&f.eval(&p).unwrap()) < 1e-15);
    }

    #[test]
    fn blaschke_examples() {
        let sc = s(0.5);
        let b0 = blaschke_circled(&HElem::zero(sc), 6).unwrap();
        assert_eq!(b0, PowerSeries::monomial(1, HElem::one(sc), 6));
        let x = 0.4;
        let bx = blaschke_circled(&HElem::real(sc, x), 6).unwrap();
        assert_eq!(bx.coeff(0), HElem::real(sc, -x));
        for n in 1..6 {
            assert!(bx.coeff(n).dist(&HElem::real(sc, (1.0 - x * x) * x.powi(n as i32 - 1))) < 1e-16);
        }
        assert!(matches!(
            blaschke_circled(&HElem::real(sc, 1.0), 4),
            Err(Error::NotInUnitBall { .. })
        ));
    }

    #[test]
    fn division_examples() {
        let sc = s(-1.0);
        let alpha = HElem::from_coords(sc, [0.2, -0.1, 0.3, 0.15]);
        let b = blaschke_circled(&alpha, 64).unwrap();
        let g = solve_one_point(&b, &alpha, Adjoint::Circled).unwrap();
        assert!(g.dist(&PowerSeries::constant(HElem::one(sc), 63)) < 1e-14);

        let h = PowerSeries::polynomial(sc, &[HElem::one(sc), HElem::j(sc)], 64).unwrap();
        let f = b.star_mul(&h).unwrap();
        let g = solve_one_point(&f, &alpha, Adjoint::Circled).unwrap();
        assert!(g.dist(&h) < 1e-13);

        let one = PowerSeries::constant(HElem::one(sc), 8);
        assert!(matches!(
            solve_one_point(&one, &alpha, Adjoint::Circled),
            Err(Error::NotAZero { .. })
        ));
    }

    #[test]
    fn bracket_examples() {
        let sc = s(1.0);
        let (b0, d0, _) = bracket_blaschke(&HElem::zero(sc), 5).unwrap();
        assert_eq!(d0.gamma, HElem::one(sc));
        assert!(d0.k.dist(&HElem::one(sc)) < 1e-16);
        assert!(b0.dist(&PowerSeries::monomial(1, HElem::one(sc), 5)) < 1e-16);

        let x = 0.3;
        let (_, d, _) = bracket_blaschke(&HElem::real(sc, x), 5).unwrap();
        assert!(d.gamma.dist(&HElem::real(sc, 1.0 / (1.0 - x * x))) < 1e-15);

        assert!(matches!(
            bracket_data(&HElem::real(sc, 0.8)),
            Err(Error::SmallnessViolated { .. })
        ));
    }

    #[test]
    fn sqrt_examples() {
        let sc = s(2.0);
        let one = HElem::one(sc);
        assert_eq!(sqrt_selfadjoint(&one, Adjoint::Bracket).unwrap(), one);
        let c = 0.44;
        let r = sqrt_selfadjoint(&HElem::real(sc, 1.0 + c), Adjoint::Circled).unwrap();
        assert!(r.dist(&HElem::real(sc, (1.0 + c).sqrt())) < 1e-15);
        assert!(matches!(
            sqrt_selfadjoint(&HElem::real(sc, 2.5), Adjoint::Circled),
            Err(Error::NotContractivePerturbation { .. })
        ));
    }

    #[test]
    fn theta_at_origin_is_the_shift() {
        let sc = s(-1.0);
        let th = theta_interpolate(&[HElem::zero(sc)], 8).unwrap();
        assert!(th.series.dist(&PowerSeries::monomial(1, HElem::one(sc), 8)) < 1e-15);
        assert_eq!(th.certify().unwrap().zero_residual, 0.0);
    }

    #[test]
    fn isometry_examples() {
        let sc = s(-1.0);
        assert_eq!(isometry_gram(&PowerSeries::constant(HElem::one(sc), 32), Adjoint::Circled, 4, 32), 0.0);
        let shift = PowerSeries::monomial(1, HElem::one(sc), 32);
        assert_eq!(isometry_gram(&shift, Adjoint::Bracket, 4, 32), 0.0);
        let alpha = HElem::from_coords(sc, [0.3, 0.0, 0.1, 0.0]);
        let b = blaschke_circled(&alpha, 256).unwrap();
        assert!(isometry_gram(&b, Adjoint::Circled, 6, 256) < 1e-9);
    }
}
