use num::{One, Zero};

use crate::rational::Rational;

use super::arrow::{norm_squared, IndexMap, SegmentArrow};
use super::segment::Segment;

pub const DEFAULT_STRIDES: [i64; 4] = [-2, -1, 1, 2];

/// Translation `i ↦ i + T` with `T` forced by the interval starts.
pub fn detect_translation(f: &Segment, g: &Segment, tol: f64) -> Option<SegmentArrow> {
    let map = IndexMap::fitting(1, f.interval(), g.interval())?;
    let arrow = SegmentArrow::fit(f, g, map, Rational::one()).ok()?;
    arrow.within(tol).then_some(arrow)
}

/// Best grid map over the candidate strides, with `c = 1`.
pub fn detect_affine(f: &Segment, g: &Segment, strides: &[i64], tol: f64) -> Option<SegmentArrow> {
    let candidates = strides.iter().filter_map(|&s| {
        let map = IndexMap::fitting(s, f.interval(), g.interval())?;
        SegmentArrow::fit(f, g, map, Rational::one()).ok()
    });
    best(candidates).filter(|a| a.within(tol))
}

/// Best grid map with a fitted amplitude `c ≠ 0`.
pub fn detect_amp_affine(f: &Segment, g: &Segment, strides: &[i64], tol: f64) -> Option<SegmentArrow> {
    let candidates = strides.iter().filter_map(|&s| {
        let map = IndexMap::fitting(s, f.interval(), g.interval())?;
        let base = SegmentArrow::fit(f, g, map, Rational::one()).ok()?;
        let c = fit_scale(f, g, &base)?;
        SegmentArrow::fit(f, g, map, c).ok()
    });
    best(candidates).filter(|a| a.within(tol))
}

/// Least-squares `c = ⟨p, g⟩ / ∥p∥²` for the unscaled prediction `p`. This is
/// the exact ratio whenever `g` is a multiple of `p`.
fn fit_scale(f: &Segment, g: &Segment, base: &SegmentArrow) -> Option<Rational> {
    let p = super::arrow::transfer(base, f).ok()?;
    let pp = norm_squared(p.samples());
    if pp.is_zero() {
        // Every invertible h predicts zero; only an all-zero target fits.
        return g.samples().iter().all(Zero::is_zero).then(Rational::one);
    }
    let pg = p.samples().iter().zip(g.samples()).map(|(a, b)| a * b).fold(Rational::zero(), |x, y| x + y);
    let c = pg / pp;
    (!c.is_zero()).then_some(c)
}

/// Sort key of the documented tie-break: least residual, then `|S|`, then
/// `|T|`, then `S`.
pub(crate) fn rank(a: &SegmentArrow) -> (Rational, u64, u64, i64) {
    let m = a.map();
    (a.residual_norm_squared(), m.stride.unsigned_abs(), m.offset.unsigned_abs(), m.stride)
}

fn best(candidates: impl Iterator<Item = SegmentArrow>) -> Option<SegmentArrow> {
    candidates.map(|a| (rank(&a), a)).min_by(|x, y| x.0.cmp(&y.0)).map(|(_, a)| a)
}
