//! Fueter-type variables, jet-based differential operators and the
//! three-variable kernels and Blaschke factors built on them.

mod jet;

use std::collections::{BTreeMap, HashMap};

use rand::Rng;

pub use jet::{hess_index, HScalar, Jet2, TaylorBasis, TaylorJet};

use crate::error::{Error, Result};
use crate::hardy::sqrt_selfadjoint;
use crate::htmatrix::HMatrix;
use crate::hypercomplex::{Adjoint, HElem, NormKind, Scale};
use crate::rational::LetterRealization;

/// Exponents of `x1, x2, x3` (or of `ζ1, ζ2, ζ3`).
pub type MultiIndex = [usize; 3];

pub const DEGREE_CAP: usize = 12;

/// Default threshold on `|det(vec)|` below which a point counts as on the null cone.
pub const NULL_CONE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point4 {
    pub x: [f64; 4],
}

impl Point4 {
    pub fn new(x: [f64; 4]) -> Point4 {
        Point4 { x }
    }

    pub fn to_helem(&self, scale: Scale) -> HElem {
        HElem::from_coords(scale, self.x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialKind {
    Mu,
    Zeta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MuMonomial {
    pub alpha: MultiIndex,
    pub kind: MonomialKind,
}

/// `|det vec(x)| ≥ 0.1 (x1² + |t|(x2² + x3²))`.
pub fn is_admissible(x: &Point4, t: Scale) -> bool {
    let [_, x1, x2, x3] = x.x;
    let r2 = x2 * x2 + x3 * x3;
    let det = x1 * x1 - t.t() * r2;
    let e2 = x1 * x1 + t.t().abs() * r2;
    e2 > 0.0 && det.abs() >= 0.1 * e2
}

/// Uniform sample in `[-1, 1]^4` conditioned on admissibility.
pub fn sample_admissible<R: Rng + ?Sized>(rng: &mut R, t: Scale) -> Point4 {
    loop {
        let x = Point4::new([0, 1, 2, 3].map(|_| rng.gen_range(-1.0..=1.0)));
        if is_admissible(&x, t) {
            return x;
        }
    }
}

fn real_of<F: HScalar>(like: &F, x: f64) -> F {
    like.lift(HElem::real(like.value().scale(), x))
}

fn unit<F: HScalar>(like: &F, l: usize) -> F {
    let s = like.value().scale();
    like.lift(HElem::basis(s)[l])
}

/// `c = sign(t)/√|t|`, the weight of `j` and `k` in the Fueter operator.
pub fn fueter_weight(t: Scale) -> f64 {
    t.sign() / t.t().abs().sqrt()
}

pub fn vec_part_g<F: HScalar>(x: &[F; 4]) -> F {
    x[1].clone() * unit(&x[1], 1) + x[2].clone() * unit(&x[2], 2) + x[3].clone() * unit(&x[3], 3)
}

pub fn vec_inverse_g<F: HScalar>(x: &[F; 4], tol: f64) -> Result<F> {
    let v = vec_part_g(x);
    let det = v.value().det();
    if det.abs() <= tol {
        return Err(Error::OnNullCone { det });
    }
    v.try_inverse(0.0)
}

pub fn mu_g<F: HScalar>(l: usize, x: &[F; 4]) -> Result<F> {
    let w = real_of(&x[0], 1.0) + x[0].clone() * vec_inverse_g(x, NULL_CONE_TOL)?;
    Ok(x[l].clone() * w)
}

pub fn mu_pow_g<F: HScalar>(alpha: MultiIndex, x: &[F; 4]) -> Result<F> {
    let w = real_of(&x[0], 1.0) + x[0].clone() * vec_inverse_g(x, NULL_CONE_TOL)?;
    let mut acc = real_of(&x[0], 1.0);
    for l in 0..3 {
        for _ in 0..alpha[l] {
            acc = acc * x[l + 1].clone();
        }
    }
    for _ in 0..alpha.iter().sum::<usize>() {
        acc = acc * w.clone();
    }
    Ok(acc)
}

pub fn zeta_g<F: HScalar>(l: usize, x: &[F; 4]) -> F {
    let c = fueter_weight(x[0].value().scale());
    match l {
        1 => x[1].clone() - x[0].clone() * unit(&x[0], 1),
        2 => x[2].clone() + x[0].scale_by(c) * unit(&x[0], 2),
        3 => x[3].clone() + x[0].scale_by(c) * unit(&x[0], 3),
        _ => panic!("variable index {l} out of range 1..=3"),
    }
}

/// `ζ^n`: the symmetrized product of the repeated factors divided by `n!`,
/// which equals the sum over distinct orderings divided by `|n|!`.
pub fn zeta_pow_g<F: HScalar>(n: MultiIndex, x: &[F; 4]) -> F {
    let z = [zeta_g(1, x), zeta_g(2, x), zeta_g(3, x)];
    let mut memo: HashMap<MultiIndex, F> = HashMap::new();
    let total = orderings(&z, n, &mut memo, &x[0]);
    let deg: usize = n.iter().sum();
    total.scale_by(1.0 / factorial(deg))
}

fn orderings<F: HScalar>(z: &[F; 3], counts: MultiIndex, memo: &mut HashMap<MultiIndex, F>, like: &F) -> F {
    if counts == [0, 0, 0] {
        return real_of(like, 1.0);
    }
    if let Some(v) = memo.get(&counts) {
        return v.clone();
    }
    let mut acc = real_of(like, 0.0);
    for g in 0..3 {
        if counts[g] > 0 {
            let mut rest = counts;
            rest[g] -= 1;
            acc = acc + z[g].clone() * orderings(z, rest, memo, like);
        }
    }
    memo.insert(counts, acc.clone());
    acc
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn multi_factorial(a: MultiIndex) -> f64 {
    a.iter().map(|&k| factorial(k)).product()
}

fn plain(x: &Point4, t: Scale) -> [HElem; 4] {
    x.x.map(|v| HElem::real(t, v))
}

pub fn vec_part(x: &Point4, t: Scale) -> HElem {
    vec_part_g(&plain(x, t))
}

pub fn vec_inverse(x: &Point4, t: Scale, tol: f64) -> Result<HElem> {
    vec_inverse_g(&plain(x, t), tol)
}

/// `μ_l(x) = x_l (1 + x0 vec^{-1})`, `l ∈ 1..=3`.
pub fn mu(l: usize, x: &Point4, t: Scale) -> Result<HElem> {
    mu_g(l, &plain(x, t))
}

pub fn mu_pow(alpha: MultiIndex, x: &Point4, t: Scale) -> Result<HElem> {
    mu_pow_g(alpha, &plain(x, t))
}

pub fn zeta(l: usize, x: &Point4, t: Scale) -> HElem {
    zeta_g(l, &plain(x, t))
}

pub fn zeta_pow(n: MultiIndex, x: &Point4, t: Scale) -> HElem {
    zeta_pow_g(n, &plain(x, t))
}

impl MuMonomial {
    pub fn eval(&self, x: &Point4, t: Scale) -> Result<HElem> {
        match self.kind {
            MonomialKind::Mu => mu_pow(self.alpha, x, t),
            MonomialKind::Zeta => Ok(zeta_pow(self.alpha, x, t)),
        }
    }
}

/// A function of the four real coordinates that can be evaluated on any
/// [`HScalar`] carrier.
pub trait JetFn {
    fn eval<F: HScalar>(&self, x: &[F; 4]) -> Result<F>;
}

impl JetFn for MuMonomial {
    fn eval<F: HScalar>(&self, x: &[F; 4]) -> Result<F> {
        match self.kind {
            MonomialKind::Mu => mu_pow_g(self.alpha, x),
            MonomialKind::Zeta => Ok(zeta_pow_g(self.alpha, x)),
        }
    }
}

/// `q^n` as a function of the coordinates.
#[derive(Clone, Copy, Debug)]
pub struct QPower(pub usize);

impl JetFn for QPower {
    fn eval<F: HScalar>(&self, x: &[F; 4]) -> Result<F> {
        let q = x[0].clone() + vec_part_g(x);
        let mut acc = real_of(&x[0], 1.0);
        for _ in 0..self.0 {
            acc = acc * q.clone();
        }
        Ok(acc)
    }
}

/// `Σ ζ^n f_n` with coefficients on the right.
#[derive(Clone, Debug)]
pub struct ZetaSeries(pub BTreeMap<MultiIndex, HElem>);

impl JetFn for ZetaSeries {
    fn eval<F: HScalar>(&self, x: &[F; 4]) -> Result<F> {
        let mut acc = real_of(&x[0], 0.0);
        for (n, c) in &self.0 {
            acc = acc + zeta_pow_g(*n, x) * x[0].lift(*c);
        }
        Ok(acc)
    }
}

/// Polynomial `Σ x^e c_e` in all four coordinates.
#[derive(Clone, Debug)]
pub struct Polynomial4(pub Vec<([usize; 4], HElem)>);

impl Polynomial4 {
    /// Random coefficients on every monomial of total degree at most `degree`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, t: Scale, degree: usize) -> Polynomial4 {
        let mut terms = Vec::new();
        for e0 in 0..=degree {
            for e1 in 0..=degree - e0 {
                for e2 in 0..=degree - e0 - e1 {
                    for e3 in 0..=degree - e0 - e1 - e2 {
                        let c = HElem::from_coords(t, [0, 1, 2, 3].map(|_| rng.gen_range(-1.0..=1.0)));
                        terms.push(([e0, e1, e2, e3], c));
                    }
                }
            }
        }
        Polynomial4(terms)
    }
}

impl JetFn for Polynomial4 {
    fn eval<F: HScalar>(&self, x: &[F; 4]) -> Result<F> {
        let mut acc = real_of(&x[0], 0.0);
        for (e, c) in &self.0 {
            let mut term = x[0].lift(*c);
            for l in 0..4 {
                for _ in 0..e[l] {
                    term = x[l].clone() * term;
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }
}

pub fn jet_at<J: JetFn>(f: &J, x: &Point4, t: Scale) -> Result<Jet2> {
    f.eval(&Jet2::seed(x, t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    /// `∂0 - vec^{-1} Σ x_l ∂_l`.
    Vt,
    /// `vec ∂0 - Σ x_l ∂_l`.
    Gt,
    /// `∂0 + i∂1 - c(j∂2 + k∂3)`, units on the left.
    Nabla,
    /// `∂0 - i∂1 + c(j∂2 + k∂3)`, units on the left.
    NablaC,
    /// `∂0² + ∂1² - sign(t)(∂2² + ∂3²)`.
    Laplace,
    /// `∂0 + ∂1 i - c(∂2 j + ∂3 k)`, units on the right.
    RightNabla,
    /// `NablaC` applied after `Nabla`, assembled from the Hessian.
    NablaCNabla,
}

fn nabla_units(t: Scale) -> [HElem; 4] {
    let c = fueter_weight(t);
    let [one, i, j, k] = HElem::basis(t);
    [one, i, j.scale_by(-c), k.scale_by(-c)]
}

fn nabla_c_units(t: Scale) -> [HElem; 4] {
    let c = fueter_weight(t);
    let [one, i, j, k] = HElem::basis(t);
    [one, -i, j.scale_by(c), k.scale_by(c)]
}

pub fn apply_operator_jet(f: &Jet2, op: Operator, x: &Point4, t: Scale) -> Result<HElem> {
    let euler = (1..4).fold(HElem::zero(t), |acc, l| acc + f.d(l).scale_by(x.x[l]));
    Ok(match op {
        Operator::Vt => f.d(0) - vec_inverse(x, t, NULL_CONE_TOL)? * euler,
        Operator::Gt => {
            vec_inverse(x, t, NULL_CONE_TOL)?;
            vec_part(x, t) * f.d(0) - euler
        }
        Operator::Nabla => {
            let u = nabla_units(t);
            (0..4).fold(HElem::zero(t), |acc, l| acc + u[l] * f.d(l))
        }
        Operator::NablaC => {
            let u = nabla_c_units(t);
            (0..4).fold(HElem::zero(t), |acc, l| acc + u[l] * f.d(l))
        }
        Operator::RightNabla => {
            let u = nabla_units(t);
            (0..4).fold(HElem::zero(t), |acc, l| acc + f.d(l) * u[l])
        }
        Operator::Laplace => {
            let s = t.sign();
            f.dd(0, 0) + f.dd(1, 1) - (f.dd(2, 2) + f.dd(3, 3)).scale_by(s)
        }
        Operator::NablaCNabla => {
            let (uc, u) = (nabla_c_units(t), nabla_units(t));
            let mut acc = HElem::zero(t);
            for l in 0..4 {
                for m in 0..4 {
                    acc = acc + uc[l] * u[m] * f.dd(l, m);
                }
            }
            acc
        }
    })
}

pub fn apply_operator<J: JetFn>(f: &J, op: Operator, x: &Point4, t: Scale) -> Result<HElem> {
    apply_operator_jet(&jet_at(f, x, t)?, op, x, t)
}

/// Largest relative deviations between jet derivatives and central
/// differences with step `h`: first partials against differences of values,
/// second partials against differences of the jet's own first partials (a
/// second difference of values would lose about `ε/h²` to rounding).
pub fn finite_difference_check<J: JetFn>(f: &J, x: &Point4, t: Scale, h: f64) -> Result<(f64, f64)> {
    let jet = jet_at(f, x, t)?;
    let moved = |l: usize, step: f64| {
        let mut p = x.x;
        p[l] += step;
        Point4::new(p)
    };
    let scale = |v: HElem| v.op_norm().max(1.0);
    let mut grad_err = 0.0f64;
    let mut hess_err = 0.0f64;
    for i in 0..4 {
        let (xp, xm) = (moved(i, h), moved(i, -h));
        let fd = (f.eval(&plain(&xp, t))? - f.eval(&plain(&xm, t))?).scale_by(0.5 / h);
        grad_err = grad_err.max(fd.dist(&jet.d(i)) / scale(jet.d(i)));
        let (jp, jm) = (jet_at(f, &xp, t)?, jet_at(f, &xm, t)?);
        for j in 0..4 {
            let fd2 = (jp.d(j) - jm.d(j)).scale_by(0.5 / h);
            hess_err = hess_err.max(fd2.dist(&jet.dd(i, j)) / scale(jet.dd(i, j)));
        }
    }
    Ok((grad_err, hess_err))
}

/// Largest `‖V_t μ^α‖ / max(1, ‖μ^α‖)` over the samples.
pub fn kernel_check_mu(alpha: MultiIndex, samples: &[Point4], t: Scale) -> Result<f64> {
    let m = MuMonomial {
        alpha,
        kind: MonomialKind::Mu,
    };
    let mut worst = 0.0f64;
    for x in samples {
        let jet = jet_at(&m, x, t)?;
        let r = apply_operator_jet(&jet, Operator::Vt, x, t)?.op_norm();
        worst = worst.max(r / jet.value.op_norm().max(1.0));
    }
    Ok(worst)
}

/// All multi-indices of total degree `n`.
pub fn multi_indices(n: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for a in (0..=n).rev() {
        for b in (0..=n - a).rev() {
            out.push([a, b, n - a - b]);
        }
    }
    out
}

/// Coefficients `c_α = (n!/α!) · sym(i^α1, j^α2, k^α3)` with `q^n = Σ μ^α c_α`.
pub fn qn_expand(n: usize, t: Scale) -> Result<BTreeMap<MultiIndex, HElem>> {
    if n > DEGREE_CAP {
        return Err(Error::DegreeCap(n));
    }
    let [_, i, j, k] = HElem::basis(t);
    let mut out = BTreeMap::new();
    for alpha in multi_indices(n) {
        let c = if n == 0 {
            HElem::one(t)
        } else {
            let mut factors = Vec::with_capacity(n);
            factors.extend(std::iter::repeat_n(i, alpha[0]));
            factors.extend(std::iter::repeat_n(j, alpha[1]));
            factors.extend(std::iter::repeat_n(k, alpha[2]));
            crate::hypercomplex::symmetrized_product(&factors)?.scale_by(factorial(n) / multi_factorial(alpha))
        };
        out.insert(alpha, c);
    }
    Ok(out)
}

/// Largest `‖q^n - Σ μ^α c_α‖ / max(1, ‖q^n‖)` over the samples.
pub fn qn_certificate(n: usize, samples: &[Point4], t: Scale) -> Result<f64> {
    let coeffs = qn_expand(n, t)?;
    let mut worst = 0.0f64;
    for x in samples {
        let q = x.to_helem(t).powi(n);
        let mut sum = HElem::zero(t);
        for (alpha, c) in &coeffs {
            sum = sum + mu_pow(*alpha, x, t)? * *c;
        }
        worst = worst.max(q.dist(&sum) / q.op_norm().max(1.0));
    }
    Ok(worst)
}

/// Builds `f = Σ ζ^n f_n` and returns `(max ‖∇_t f‖ over samples, max
/// coefficient recovery error)`. With `ζ^n` carrying its `1/n!`, the
/// coefficient is recovered as `f_n = ∂^n f(0)` in the variables `x1, x2, x3`.
pub fn fueter_taylor_roundtrip(coeffs: &BTreeMap<MultiIndex, HElem>, t: Scale, samples: &[Point4]) -> Result<(f64, f64)> {
    let f = ZetaSeries(coeffs.clone());
    let mut regular = 0.0f64;
    for x in samples {
        regular = regular.max(apply_operator(&f, Operator::Nabla, x, t)?.op_norm());
    }
    let degree = coeffs.keys().map(|n| n.iter().sum::<usize>()).max().unwrap_or(0);
    let basis = TaylorBasis::new(degree);
    let origin = Point4::new([0.0; 4]);
    let taylor = f.eval(&TaylorJet::seed(&basis, &origin, t))?;
    let mut recovery = 0.0f64;
    for d in 0..=degree {
        for n in multi_indices(d) {
            let want = coeffs.get(&n).copied().unwrap_or_else(|| HElem::zero(t));
            let got = taylor.derivative([0, n[0], n[1], n[2]]);
            recovery = recovery.max(got.dist(&want));
        }
    }
    Ok((regular, recovery))
}

/// The set `O_{r,ρ}`: `|det vec(x)| > r` and `|x_u| < ρ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelDomain {
    pub r: f64,
    pub rho: f64,
}

impl KernelDomain {
    pub fn contains(&self, x: &Point4, t: Scale) -> bool {
        vec_part(x, t).det().abs() > self.r && x.x.iter().all(|v| v.abs() < self.rho)
    }

    /// Bound `M` with `‖μ^α(x)‖_op ≤ M^{|α|}` on the domain: `ρ(1 + κ ρ²/r)`
    /// with `κ = max(3, √(4 + 2t²))` covering `‖vec‖_op ≤ κρ`.
    pub fn mu_bound(&self, t: Scale) -> f64 {
        let kappa = (4.0 + 2.0 * t.t() * t.t()).sqrt().max(3.0);
        self.rho * (1.0 + kappa * self.rho * self.rho / self.r)
    }
}

/// Degree-`d` part `Σ_{|α|=d} μ^α(x) (μ^α(y))^k / α!` for `d = 0..=degree`.
pub fn arveson_parts(x: &Point4, y: &Point4, t: Scale, kind: Adjoint, degree: usize) -> Result<Vec<HElem>> {
    let mut parts = Vec::with_capacity(degree + 1);
    for d in 0..=degree {
        let mut acc = HElem::zero(t);
        for alpha in multi_indices(d) {
            let term = mu_pow(alpha, x, t)? * mu_pow(alpha, y, t)?.adj(kind);
            acc = acc + term.scale_by(1.0 / multi_factorial(alpha));
        }
        parts.push(acc);
    }
    Ok(parts)
}

pub fn arveson_kernel(
    x: &Point4,
    y: &Point4,
    t: Scale,
    kind: Adjoint,
    degree: usize,
    domain: &KernelDomain,
) -> Result<HElem> {
    if !domain.contains(x, t) || !domain.contains(y, t) {
        return Err(Error::DomainViolation);
    }
    Ok(arveson_parts(x, y, t, kind, degree)?
        .into_iter()
        .fold(HElem::zero(t), |acc, p| acc + p))
}

/// Bound `(3M²)^d / d!` on the norm of the degree-`d` part.
pub fn arveson_part_bound(m: f64, d: usize) -> f64 {
    (3.0 * m * m).powi(d as i32) / factorial(d)
}

/// Blaschke factor in the `μ` variables at a point `a`.
#[derive(Clone, Debug)]
pub struct MuBlaschke {
    pub kind: Adjoint,
    /// The row `μ(a)`.
    pub mu: HMatrix,
    /// `(1 - μ μ^k)^{1/2}`.
    pub c: HElem,
    /// `(I₃ - μ^k μ)^{1/2}`.
    pub b: HMatrix,
    pub realization: LetterRealization,
    /// `‖(1 - μμ^k)^{1/2} μ (I - μ^kμ)^{-1/2} - μ‖`.
    pub identity_residual: f64,
    /// Largest of `‖M M^k - I‖` and `‖M^k M - I‖` for the block matrix `M`.
    pub unitarity_residual: f64,
    /// Row coefficients of `μ^α`, up to the requested degree.
    pub coeffs: BTreeMap<MultiIndex, HMatrix>,
}

/// `(I + X)^p` by the binomial series; requires `‖X‖ < 1`.
fn matrix_binomial(x: &HMatrix, p: f64) -> Result<HMatrix> {
    let norm = x.mnorm_op();
    if norm >= 1.0 {
        return Err(Error::NotContractivePerturbation { norm });
    }
    let s = x.scale();
    let mut acc = HMatrix::identity(s, x.rows());
    let mut power = acc.clone();
    let mut gamma = 1.0;
    for n in 1..200_000 {
        gamma *= (p - (n - 1) as f64) / n as f64;
        power = &power * x;
        let term = power.scale_by(gamma);
        acc = &acc + &term;
        if term.frob() < 1e-17 {
            break;
        }
    }
    Ok(acc)
}

pub fn mu_blaschke(a: &Point4, t: Scale, kind: Adjoint, degree: usize) -> Result<MuBlaschke> {
    let m = [mu(1, a, t)?, mu(2, a, t)?, mu(3, a, t)?];
    let value: f64 = m.iter().map(|v| v.norm(NormKind::Op)).sum();
    if value >= 1.0 {
        return Err(Error::ConditionViolated { value });
    }
    let row = HMatrix::row(t, &m);
    let col_adj = row.madjoint(kind);
    let mm = (&row * &col_adj).get(0, 0);
    let c = sqrt_selfadjoint(&(HElem::one(t) - mm), kind)?;
    let inner = -&(&col_adj * &row);
    let b = matrix_binomial(&inner, 0.5)?;
    let b_inv = matrix_binomial(&inner, -0.5)?;
    let identity_residual = (&row.lmul(c) * &b_inv).dist(&row);

    let d = -&row;
    let big = HMatrix::from_blocks(&col_adj, &b, &HMatrix::scalar(c), &d)?;
    let big_adj = big.madjoint(kind);
    let id4 = HMatrix::identity(t, 4);
    let unitarity_residual = (&big * &big_adj).dist(&id4).max((&big_adj * &big).dist(&id4));
    let realization = LetterRealization::from_stacked(&col_adj, &b, HMatrix::scalar(c), d.clone())?;

    // The entries of μ(a) are real multiples of 1 + a0 vec(a)^{-1}, so the
    // letters commute and the words collapse to multinomial counts.
    let ad: Vec<HElem> = m.iter().map(|v| v.adj(kind)).collect();
    let mut coeffs = BTreeMap::new();
    coeffs.insert([0, 0, 0], d);
    for deg in 1..=degree {
        for alpha in multi_indices(deg) {
            let mut acc = HMatrix::zeros(t, 1, 3);
            for l in 0..3 {
                if alpha[l] == 0 {
                    continue;
                }
                let mut beta = alpha;
                beta[l] -= 1;
                let n: usize = beta.iter().sum();
                let mut word = HElem::real(t, factorial(n) / multi_factorial(beta));
                for k in 0..3 {
                    word = word * ad[k].powi(beta[k]);
                }
                acc = &acc + &b.block(l, 0, 1, 3).lmul(c * word);
            }
            coeffs.insert(alpha, acc);
        }
    }
    Ok(MuBlaschke {
        kind,
        mu: row,
        c,
        b,
        realization,
        identity_residual,
        unitarity_residual,
        coeffs,
    })
}

impl MuBlaschke {
    /// `Σ_α μ^α(x) F_α` over the stored coefficients.
    pub fn eval_series(&self, x: &Point4, t: Scale) -> Result<HMatrix> {
        let mut acc = HMatrix::zeros(t, 1, 3);
        for (alpha, f) in &self.coeffs {
            acc = &acc + &f.lmul(mu_pow(*alpha, x, t)?);
        }
        Ok(acc)
    }
}

/// Checks `‖μ_u(x)‖_E ≤ ‖ζ_u(x)‖_E` for `u = 1, 2, 3`.
pub fn norm_inequality_check(x: &Point4, t: Scale) -> Result<bool> {
    for u in 1..=3 {
        let lhs = mu(u, x, t)?.norm(NormKind::Euclid);
        let rhs = zeta(u, x, t).norm(NormKind::Euclid);
        if lhs > rhs * (1.0 + 1e-12) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: f64) -> Scale {
        Scale::new(t).unwrap()
    }

    #[test]
    fn vec_examples() {
        let sc = s(1.0);
        let x = Point4::new([0.0, 1.0, 0.0, 0.0]);
        assert_eq!(vec_part(&x, sc), HElem::i(sc));
        assert_eq!(vec_inverse(&x, sc, 1e-12).unwrap(), -HElem::i(sc));
        let m1 = s(-1.0);
        let y = Point4::new([0.0, 0.0, 1.0, 0.0]);
        assert_eq!(vec_inverse(&y, m1, 1e-12).unwrap(), -HElem::j(m1));
        let cone = Point4::new([0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(vec_inverse(&cone, sc, 1e-12), Err(Error::OnNullCone { .. })));
    }

    #[test]
    fn mu_examples() {
        let sc = s(1.5);
        let x = Point4::new([0.0, 0.5, -0.3, 0.2]);
        let v = mu_pow([2, 1, 0], &x, sc).unwrap();
        assert!(v.dist(&HElem::real(sc, 0.25 * -0.3)) < 1e-16);
        assert_eq!(mu_pow([0, 0, 0], &x, sc).unwrap(), HElem::one(sc));
        let y = Point4::new([0.4, 0.5, -0.3, 0.2]);
        let (m1, m2) = (mu(1, &y, sc).unwrap(), mu(2, &y, sc).unwrap());
        assert!((m1 * m2).dist(&(m2 * m1)) < 1e-15);
    }

    #[test]
    fn zeta_examples() {
        let x = Point4::new([0.7, 0.1, 0.2, 0.3]);
        let one = s(1.0);
        assert_eq!(zeta(2, &x, one), HElem::from_coords(one, [0.2, 0.0, 0.7, 0.0]));
        let m1 = s(-1.0);
        assert_eq!(zeta(2, &x, m1), HElem::from_coords(m1, [0.2, 0.0, -0.7, 0.0]));
        let o = Point4::new([0.0; 4]);
        for l in 1..=3 {
            assert!(zeta(l, &o, one).is_zero());
        }
    }

    #[test]
    fn operators_kill_constants_and_zetas() {
        let sc = s(2.0);
        let x = Point4::new([0.3, 0.6, -0.1, 0.2]);
        let c = Polynomial4(vec![([0; 4], HElem::from_coords(sc, [1.0, 2.0, 3.0, 4.0]))]);
        for op in [Operator::Vt, Operator::Gt, Operator::Nabla, Operator::NablaC, Operator::Laplace, Operator::RightNabla] {
            assert!(apply_operator(&c, op, &x, sc).unwrap().is_zero());
        }
        for l in 0..3 {
            let mut n = [0; 3];
            n[l] = 1;
            let z = MuMonomial { alpha: n, kind: MonomialKind::Zeta };
            assert!(apply_operator(&z, Operator::Nabla, &x, sc).unwrap().op_norm() < 1e-15);
            assert!(apply_operator(&z, Operator::RightNabla, &x, sc).unwrap().op_norm() < 1e-15);
        }
    }

    #[test]
    fn qn_examples() {
        let sc = s(-0.5);
        let c1 = qn_expand(1, sc).unwrap();
        assert_eq!(c1[&[1, 0, 0]], HElem::i(sc));
        assert_eq!(c1[&[0, 1, 0]], HElem::j(sc));
        assert_eq!(c1[&[0, 0, 1]], HElem::k(sc));
        let c2 = qn_expand(2, sc).unwrap();
        assert!(c2[&[1, 1, 0]].is_zero());
        assert_eq!(c2[&[2, 0, 0]], HElem::real(sc, -1.0));
        assert_eq!(qn_expand(13, sc), Err(Error::DegreeCap(13)));
    }

    #[test]
    fn single_term_round_trip() {
        let sc = s(1.0);
        let coeffs = BTreeMap::from([([1, 0, 0], HElem::one(sc))]);
        let x = Point4::new([0.2, 0.3, 0.1, -0.4]);
        let (reg, rec) = fueter_taylor_roundtrip(&coeffs, sc, &[x]).unwrap();
        assert_eq!((reg, rec), (0.0, 0.0));
    }

    #[test]
    fn arveson_basics() {
        let sc = s(-1.0);
        let x = Point4::new([0.1, 0.3, 0.2, -0.1]);
        let dom = KernelDomain { r: 0.05, rho: 0.5 };
        let k0 = arveson_kernel(&x, &x, sc, Adjoint::Circled, 0, &dom).unwrap();
        assert_eq!(k0, HElem::one(sc));
        let k = arveson_kernel(&x, &x, sc, Adjoint::Circled, 10, &dom).unwrap();
        assert!(k.dist(&k.circled()) < 1e-14);
        let far = Point4::new([0.9, 0.3, 0.2, -0.1]);
        assert_eq!(arveson_kernel(&far, &x, sc, Adjoint::Circled, 2, &dom), Err(Error::DomainViolation));
    }

    #[test]
    fn mu_blaschke_on_the_slice() {
        let sc = s(-1.0);
        let a = Point4::new([0.0, 0.2, 0.1, 0.3]);
        let mb = mu_blaschke(&a, sc, Adjoint::Circled, 3).unwrap();
        for l in 0..3 {
            assert!(mb.mu.get(0, l).dist(&HElem::real(sc, a.x[l + 1])) < 1e-16);
            assert!(mb.realization.d.get(0, l).dist(&HElem::real(sc, -a.x[l + 1])) < 1e-16);
        }
        assert!(mb.identity_residual < 1e-14);
        assert!(mb.unitarity_residual < 1e-14);
    }

    #[test]
    fn norm_inequality_on_the_slice() {
        let x = Point4::new([0.0, 0.3, -0.4, 0.5]);
        for t in [-1.0, 2.0] {
            assert!(norm_inequality_check(&x, s(t)).unwrap());
        }
    }
}
