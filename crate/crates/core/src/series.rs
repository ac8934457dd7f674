//! Truncated left power series `Σ q^n α_n` in one H_t variable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercomplex::{Adjoint, HElem, Scale};

pub const DEFAULT_TRUNC: usize = 64;

/// Coefficients `α_0 .. α_{trunc-1}`; everything beyond is unknown, not zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesWire", into = "SeriesWire")]
pub struct PowerSeries {
    scale: Scale,
    coeffs: Vec<HElem>,
}

#[derive(Serialize, Deserialize)]
struct SeriesWire {
    t: f64,
    trunc: usize,
    coeffs: Vec<HElem>,
}

impl TryFrom<SeriesWire> for PowerSeries {
    type Error = Error;
    fn try_from(w: SeriesWire) -> Result<PowerSeries> {
        let scale = Scale::new(w.t)?;
        if w.coeffs.len() > w.trunc {
            return Err(Error::DimensionMismatch("more coefficients than the truncation order".into()));
        }
        let mut coeffs = w.coeffs;
        coeffs.resize(w.trunc, HElem::zero(scale));
        PowerSeries::new(scale, coeffs)
    }
}

impl From<PowerSeries> for SeriesWire {
    fn from(f: PowerSeries) -> Self {
        SeriesWire {
            t: f.scale.t(),
            trunc: f.coeffs.len(),
            coeffs: f.coeffs,
        }
    }
}

impl PowerSeries {
    pub fn new(scale: Scale, coeffs: Vec<HElem>) -> Result<PowerSeries> {
        if coeffs.is_empty() {
            return Err(Error::EmptyInput);
        }
        for c in &coeffs {
            scale.check(c.scale())?;
        }
        Ok(PowerSeries { scale, coeffs })
    }

    /// Pads the given leading coefficients with zeros up to `trunc`.
    pub fn polynomial(scale: Scale, leading: &[HElem], trunc: usize) -> Result<PowerSeries> {
        let mut coeffs: Vec<HElem> = leading.iter().copied().take(trunc).collect();
        coeffs.resize(trunc.max(1), HElem::zero(scale));
        PowerSeries::new(scale, coeffs)
    }

    pub fn zero(scale: Scale, trunc: usize) -> PowerSeries {
        PowerSeries::monomial(0, HElem::zero(scale), trunc)
    }

    pub fn constant(c: HElem, trunc: usize) -> PowerSeries {
        PowerSeries::monomial(0, c, trunc)
    }

    /// `q^n c`.
    pub fn monomial(n: usize, c: HElem, trunc: usize) -> PowerSeries {
        let scale = c.scale();
        let mut coeffs = vec![HElem::zero(scale); trunc.max(1)];
        if n < coeffs.len() {
            coeffs[n] = c;
        }
        PowerSeries { scale, coeffs }
    }

    /// `Σ q^n a^n`, the star inverse of `1 - q a`.
    pub fn geometric(a: HElem, trunc: usize) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(trunc);
        let mut p = HElem::one(a.scale());
        for _ in 0..trunc.max(1) {
            coeffs.push(p);
            p = p * a;
        }
        PowerSeries {
            scale: a.scale(),
            coeffs,
        }
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[HElem] {
        &self.coeffs
    }

    /// Coefficient `n`, zero beyond the truncation.
    pub fn coeff(&self, n: usize) -> HElem {
        self.coeffs.get(n).copied().unwrap_or_else(|| HElem::zero(self.scale))
    }

    pub fn truncate(&self, trunc: usize) -> PowerSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(trunc.max(1), HElem::zero(self.scale));
        PowerSeries {
            scale: self.scale,
            coeffs,
        }
    }

    pub fn checked_add(&self, g: &PowerSeries) -> Result<PowerSeries> {
        self.scale.check(g.scale)?;
        let n = self.trunc().min(g.trunc());
        Ok(PowerSeries {
            scale: self.scale,
            coeffs: (0..n).map(|k| self.coeffs[k] + g.coeffs[k]).collect(),
        })
    }

    pub fn checked_sub(&self, g: &PowerSeries) -> Result<PowerSeries> {
        self.checked_add(&g.map(|c| -c))
    }

    pub fn map(&self, f: impl Fn(HElem) -> HElem) -> PowerSeries {
        PowerSeries {
            scale: self.scale,
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    /// `f ⋆ c` for a constant `c`: every coefficient multiplied on the right.
    pub fn rmul(&self, c: HElem) -> PowerSeries {
        self.map(|a| a * c)
    }

    /// `c ⋆ f`: every coefficient multiplied on the left.
    pub fn lmul(&self, c: HElem) -> PowerSeries {
        self.map(|a| c * a)
    }

    /// Cauchy convolution `(f ⋆ g)_n = Σ_{k≤n} α_{n-k} β_k`.
    pub fn star_mul(&self, g: &PowerSeries) -> Result<PowerSeries> {
        self.scale.check(g.scale)?;
        let n = self.trunc().min(g.trunc());
        let coeffs = (0..n)
            .map(|m| (0..=m).fold(HElem::zero(self.scale), |acc, k| acc + self.coeffs[m - k] * g.coeffs[k]))
            .collect();
        Ok(PowerSeries {
            scale: self.scale,
            coeffs,
        })
    }

    /// Star inverse by the triangular coefficient recursion.
    pub fn star_inverse(&self) -> Result<PowerSeries> {
        let a0 = self.coeffs[0];
        let a0_inv = a0.inv().map_err(|_| Error::NonInvertibleConstantTerm)?;
        let mut g: Vec<HElem> = Vec::with_capacity(self.trunc());
        g.push(a0_inv);
        for n in 1..self.trunc() {
            let s = (0..n).fold(HElem::zero(self.scale), |acc, k| acc + self.coeffs[n - k] * g[k]);
            g.push(-(a0_inv * s));
        }
        Ok(PowerSeries {
            scale: self.scale,
            coeffs: g,
        })
    }

    /// Left evaluation `Σ q^n α_n` by Horner's scheme.
    pub fn eval(&self, q: &HElem) -> Result<HElem> {
        self.scale.check(q.scale())?;
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(HElem::zero(self.scale), |acc, &c| c + *q * acc))
    }

    /// Coefficientwise adjoint.
    pub fn conj_series(&self, kind: Adjoint) -> PowerSeries {
        self.map(|c| c.adj(kind))
    }

    /// `R_0 f = Σ q^n α_{n+1}`; the result is valid one order lower.
    pub fn backward_shift(&self) -> PowerSeries {
        if self.trunc() == 1 {
            return PowerSeries::zero(self.scale, 1);
        }
        PowerSeries {
            scale: self.scale,
            coeffs: self.coeffs[1..].to_vec(),
        }
    }

    /// `q ⋆ f`; valid one order higher.
    pub fn shift_up(&self) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(self.trunc() + 1);
        coeffs.push(HElem::zero(self.scale));
        coeffs.extend_from_slice(&self.coeffs);
        PowerSeries {
            scale: self.scale,
            coeffs,
        }
    }

    /// Largest coefficient deviation over the common truncation.
    pub fn dist(&self, g: &PowerSeries) -> f64 {
        let n = self.trunc().min(g.trunc());
        (0..n).map(|k| self.coeffs[k].dist(&g.coeffs[k])).fold(0.0, f64::max)
    }
}

/// `Σ q^n p^n = (1 - q^⊛ p)(q q^⊛ p² - 2 re(q) p + 1)^{-1}`.
pub fn geo_closed_form(q: &HElem, p: &HElem) -> Result<HElem> {
    q.scale().check(p.scale())?;
    let scale = q.scale();
    let one = HElem::one(scale);
    let num = one - q.circled() * *p;
    let den = HElem::real(scale, q.det()) * *p * *p - p.scale_by(2.0 * q.re()) + one;
    Ok(num * den.inv()?)
}

/// Truncated kernel `Σ_{n<trunc} q^n (p^⊛)^n`.
pub fn hardy_kernel(q: &HElem, p: &HElem, trunc: usize) -> Result<HElem> {
    q.scale().check(p.scale())?;
    let pc = p.circled();
    let mut acc = HElem::zero(q.scale());
    let mut term = HElem::one(q.scale());
    for _ in 0..trunc {
        acc = acc + term;
        term = *q * term * pc;
    }
    Ok(acc)
}
