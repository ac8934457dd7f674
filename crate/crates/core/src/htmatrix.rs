//! Matrices over H_t.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercomplex::{Adjoint, HElem, Scale};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HMatrixWire", into = "HMatrixWire")]
pub struct HMatrix {
    scale: Scale,
    rows: usize,
    cols: usize,
    entries: Vec<HElem>,
}

#[derive(Serialize, Deserialize)]
struct HMatrixWire {
    t: f64,
    rows: usize,
    cols: usize,
    entries: Vec<HElem>,
}

impl TryFrom<HMatrixWire> for HMatrix {
    type Error = Error;
    fn try_from(w: HMatrixWire) -> Result<HMatrix> {
        HMatrix::new(Scale::new(w.t)?, w.rows, w.cols, w.entries)
    }
}

impl From<HMatrix> for HMatrixWire {
    fn from(m: HMatrix) -> Self {
        HMatrixWire {
            t: m.scale.t(),
            rows: m.rows,
            cols: m.cols,
            entries: m.entries,
        }
    }
}

impl HMatrix {
    pub fn new(scale: Scale, rows: usize, cols: usize, entries: Vec<HElem>) -> Result<HMatrix> {
        if rows == 0 || cols == 0 || rows * cols != entries.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} with {} entries",
                entries.len()
            )));
        }
        for e in &entries {
            scale.check(e.scale())?;
        }
        Ok(HMatrix {
            scale,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(scale: Scale, rows: usize, cols: usize, f: impl Fn(usize, usize) -> HElem) -> HMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        HMatrix::new(scale, rows, cols, entries).expect("from_fn produces consistent entries")
    }

    pub fn zeros(scale: Scale, rows: usize, cols: usize) -> HMatrix {
        HMatrix::from_fn(scale, rows, cols, |_, _| HElem::zero(scale))
    }

    pub fn identity(scale: Scale, n: usize) -> HMatrix {
        HMatrix::from_fn(scale, n, n, |r, c| HElem::real(scale, if r == c { 1.0 } else { 0.0 }))
    }

    pub fn scalar(q: HElem) -> HMatrix {
        HMatrix::from_fn(q.scale(), 1, 1, |_, _| q)
    }

    pub fn diag(scale: Scale, d: &[HElem]) -> HMatrix {
        HMatrix::from_fn(scale, d.len(), d.len(), |r, c| {
            if r == c {
                d[r]
            } else {
                HElem::zero(scale)
            }
        })
    }

    pub fn row(scale: Scale, v: &[HElem]) -> HMatrix {
        HMatrix::from_fn(scale, 1, v.len(), |_, c| v[c])
    }

    pub fn col(scale: Scale, v: &[HElem]) -> HMatrix {
        HMatrix::from_fn(scale, v.len(), 1, |r, _| v[r])
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[HElem] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> HElem {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, q: HElem) {
        assert!(self.scale.same(q.scale()), "scale mismatch in HMatrix::set");
        self.entries[r * self.cols + c] = q;
    }

    /// The single entry of a 1×1 matrix.
    pub fn as_scalar(&self) -> Option<HElem> {
        (self.rows == 1 && self.cols == 1).then(|| self.entries[0])
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> HMatrix {
        HMatrix::from_fn(self.scale, rows, cols, |r, c| self.get(r0 + r, c0 + c))
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &HMatrix, b: &HMatrix, c: &HMatrix, d: &HMatrix) -> Result<HMatrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("incompatible blocks".into()));
        }
        for m in [b, c, d] {
            a.scale.check(m.scale)?;
        }
        let (r1, c1) = (a.rows, a.cols);
        Ok(HMatrix::from_fn(a.scale, a.rows + c.rows, a.cols + b.cols, |r, col| {
            match (r < r1, col < c1) {
                (true, true) => a.get(r, col),
                (true, false) => b.get(r, col - c1),
                (false, true) => c.get(r - r1, col),
                (false, false) => d.get(r - r1, col - c1),
            }
        }))
    }

    pub fn checked_mul(&self, o: &HMatrix) -> Result<HMatrix> {
        self.scale.check(o.scale)?;
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(HMatrix::from_fn(self.scale, self.rows, o.cols, |r, c| {
            (0..self.cols).fold(HElem::zero(self.scale), |acc, k| acc + self.get(r, k) * o.get(k, c))
        }))
    }

    pub fn checked_add(&self, o: &HMatrix) -> Result<HMatrix> {
        self.scale.check(o.scale)?;
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch("sum of differently shaped matrices".into()));
        }
        Ok(HMatrix::from_fn(self.scale, self.rows, self.cols, |r, c| self.get(r, c) + o.get(r, c)))
    }

    pub fn scale_by(&self, x: f64) -> HMatrix {
        self.map(|q| q.scale_by(x))
    }

    /// Multiplies every entry on the left by `q`.
    pub fn lmul(&self, q: HElem) -> HMatrix {
        self.map(|e| q * e)
    }

    /// Multiplies every entry on the right by `q`.
    pub fn rmul(&self, q: HElem) -> HMatrix {
        self.map(|e| e * q)
    }

    pub fn map(&self, f: impl Fn(HElem) -> HElem) -> HMatrix {
        HMatrix {
            scale: self.scale,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&e| f(e)).collect(),
        }
    }

    pub fn transpose(&self) -> HMatrix {
        HMatrix::from_fn(self.scale, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Transpose with the entrywise adjoint of the given kind.
    pub fn madjoint(&self, kind: Adjoint) -> HMatrix {
        HMatrix::from_fn(self.scale, self.cols, self.rows, |r, c| self.get(c, r).adj(kind))
    }

    pub fn powi(&self, n: usize) -> HMatrix {
        let mut acc = HMatrix::identity(self.scale, self.rows);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Largest entrywise operator norm.
    pub fn max_entry_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.op_norm()).fold(0.0, f64::max)
    }

    /// Frobenius-type size: root of the summed squared entry operator norms.
    pub fn frob(&self) -> f64 {
        self.entries.iter().map(|e| e.op_norm().powi(2)).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from `o` in operator norm.
    pub fn dist(&self, o: &HMatrix) -> f64 {
        (self - o).max_entry_norm()
    }

    /// The `2·rows × 2·cols` complex embedding, row major.
    pub fn embedding(&self) -> Vec<Vec<Complex64>> {
        let mut e = vec![vec![Complex64::new(0.0, 0.0); 2 * self.cols]; 2 * self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let m = self.get(r, c).to_matrix();
                for i in 0..2 {
                    for j in 0..2 {
                        e[2 * r + i][2 * c + j] = m[i][j];
                    }
                }
            }
        }
        e
    }

    /// Spectral norm of the complex embedding by power iteration on `E* E`.
    pub fn mnorm_op(&self) -> f64 {
        let e = self.embedding();
        let (m, n) = (e.len(), e[0].len());
        // Fixed irregular start vector keeps the result reproducible.
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0 + 0.37 * i as f64, 0.61 * ((i * 7 % 5) as f64) - 0.3))
            .collect();
        normalize(&mut v);
        let mut lambda = 0.0;
        for _ in 0..10_000 {
            let ev: Vec<Complex64> = (0..m)
                .map(|r| (0..n).map(|c| e[r][c] * v[c]).sum())
                .collect();
            let mut w: Vec<Complex64> = (0..n)
                .map(|c| (0..m).map(|r| e[r][c].conj() * ev[r]).sum())
                .collect();
            let next = norm(&w);
            if next == 0.0 {
                return 0.0;
            }
            for x in w.iter_mut() {
                *x /= next;
            }
            v = w;
            let done = (next - lambda).abs() <= 1e-12 * next;
            lambda = next;
            if done {
                break;
            }
        }
        lambda.sqrt()
    }

    /// Block Schur-complement inverse. Relative tolerance `tol` is applied to
    /// every 1×1 pivot as `|det| > tol · max(1, ‖q‖²)`. The recursion has no
    /// pivoting beyond choosing the leading or trailing block, so the result
    /// is polished with Newton steps `X ← X + X(I - MX)` while the residual
    /// keeps shrinking.
    pub fn minvert(&self, tol: f64) -> Result<HMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let mut x = invert_rec(self, tol)?;
        let id = HMatrix::identity(self.scale, self.rows);
        let mut res = &id - &(self * &x);
        let mut r = res.frob();
        for _ in 0..4 {
            if r == 0.0 {
                break;
            }
            let next = &x + &(&x * &res);
            let next_res = &id - &(self * &next);
            let next_r = next_res.frob();
            if next_r >= r {
                break;
            }
            (x, res, r) = (next, next_res, next_r);
        }
        Ok(x)
    }

    pub fn minv(&self) -> Result<HMatrix> {
        self.minvert(1e-12)
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = norm(v);
    for x in v.iter_mut() {
        *x /= n;
    }
}

fn invert_rec(m: &HMatrix, tol: f64) -> Result<HMatrix> {
    let n = m.rows;
    if n == 1 {
        let q = m.get(0, 0);
        let thr = tol * q.op_norm().powi(2).max(1.0);
        return q
            .inverse(thr)
            .map(HMatrix::scalar)
            .map_err(|_| Error::NoInvertiblePivot);
    }
    let k = n.div_ceil(2);
    let a = m.block(0, 0, k, k);
    let b = m.block(0, k, k, n - k);
    let c = m.block(k, 0, n - k, k);
    let d = m.block(k, k, n - k, n - k);
    let leading = || -> Result<HMatrix> {
        let ai = invert_rec(&a, tol)?;
        let ai_b = &ai * &b;
        let c_ai = &c * &ai;
        let si = invert_rec(&(&d - &(&c * &ai_b)), tol)?;
        let top_right = -&(&ai_b * &si);
        let bottom_left = -&(&si * &c_ai);
        let top_left = &ai + &(&(&ai_b * &si) * &c_ai);
        HMatrix::from_blocks(&top_left, &top_right, &bottom_left, &si)
    };
    let trailing = || -> Result<HMatrix> {
        let di = invert_rec(&d, tol)?;
        let b_di = &b * &di;
        let di_c = &di * &c;
        let ti = invert_rec(&(&a - &(&b_di * &c)), tol)?;
        let top_right = -&(&ti * &b_di);
        let bottom_left = -&(&di_c * &ti);
        let bottom_right = &di + &(&(&di_c * &ti) * &b_di);
        HMatrix::from_blocks(&ti, &top_right, &bottom_left, &bottom_right)
    };
    leading().or_else(|_| trailing()).map_err(|_| Error::NoInvertiblePivot)
}

/// Solves `G - A^k G A = C^k C` by summing `Σ (A^k)^n C^k C A^n`.
pub fn stein_solve(a: &HMatrix, c: &HMatrix, kind: Adjoint) -> Result<HMatrix> {
    if !a.is_square() || c.cols != a.rows {
        return Err(Error::DimensionMismatch("Stein equation operands".into()));
    }
    a.scale.check(c.scale)?;
    let norm = a.mnorm_op();
    if norm >= 1.0 {
        return Err(Error::NotContractive { norm });
    }
    let mut v = c.clone();
    let mut g = HMatrix::zeros(a.scale, a.rows, a.rows);
    for _ in 0..1_000_000 {
        let term = &v.madjoint(kind) * &v;
        g = &g + &term;
        if term.frob() < 1e-15 * g.frob() {
            break;
        }
        v = &v * a;
    }
    Ok(g)
}

/// Gram matrix `G_uv = Σ_n α_u^n (α_v^k)^n` of the points.
pub fn gram_points(points: &[HElem], kind: Adjoint) -> Result<HMatrix> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let scale = first.scale();
    for p in points {
        scale.check(p.scale())?;
        let norm = p.op_norm();
        if norm >= 1.0 {
            return Err(Error::NotContractive { norm });
        }
    }
    let adj: Vec<HElem> = points.iter().map(|p| p.adj(kind)).collect();
    let a = HMatrix::diag(scale, &adj);
    let c = HMatrix::row(scale, &vec![HElem::one(scale); points.len()]);
    stein_solve(&a, &c, kind)
}

macro_rules! binop {
    ($tr:ident, $f:ident, $method:ident) => {
        impl $tr<&HMatrix> for &HMatrix {
            type Output = HMatrix;
            fn $f(self, o: &HMatrix) -> HMatrix {
                self.$method(o).expect(concat!("HMatrix ", stringify!($f)))
            }
        }
        impl $tr<HMatrix> for HMatrix {
            type Output = HMatrix;
            fn $f(self, o: HMatrix) -> HMatrix {
                (&self).$f(&o)
            }
        }
    };
}

binop!(Mul, mul, checked_mul);
binop!(Add, add, checked_add);

impl Sub<&HMatrix> for &HMatrix {
    type Output = HMatrix;
    fn sub(self, o: &HMatrix) -> HMatrix {
        self + &(-o)
    }
}

impl Sub<HMatrix> for HMatrix {
    type Output = HMatrix;
    fn sub(self, o: HMatrix) -> HMatrix {
        &self - &o
    }
}

impl Neg for &HMatrix {
    type Output = HMatrix;
    fn neg(self) -> HMatrix {
        self.map(|e| -e)
    }
}

impl Neg for HMatrix {
    type Output = HMatrix;
    fn neg(self) -> HMatrix {
        -&self
    }
}
