//! Random elements, series and points for tests and the verifier.

use rand::Rng;

use crate::hypercomplex::{HElem, NormKind, Scale};
use crate::series::PowerSeries;

/// Coordinates uniform in `[-r, r]`.
pub fn helem<R: Rng + ?Sized>(rng: &mut R, scale: Scale, r: f64) -> HElem {
    HElem::from_coords(scale, [0, 1, 2, 3].map(|_| rng.gen_range(-r..=r)))
}

/// Rejection sample with operator norm below `bound`.
pub fn helem_in_ball<R: Rng + ?Sized>(rng: &mut R, scale: Scale, bound: f64) -> HElem {
    loop {
        let q = helem(rng, scale, bound);
        if q.norm(NormKind::Op) < bound {
            return q;
        }
    }
}

/// Series with coefficients of size about `decay^n`.
pub fn series<R: Rng + ?Sized>(rng: &mut R, scale: Scale, trunc: usize, decay: f64) -> PowerSeries {
    let coeffs = (0..trunc)
        .map(|n| helem(rng, scale, 1.0).scale_by(decay.powi(n as i32)))
        .collect();
    PowerSeries::new(scale, coeffs).expect("coefficients share the scale")
}
