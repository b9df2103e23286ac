use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat, Rational};

use super::segment::{Interval, Segment};

/// Grid map `i ↦ S·i + T`. For `|S| > 1` each source sample covers a block
/// of `|S|` consecutive target samples, laid out in the direction of `S`,
/// so the map is a bijection between source samples and target blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexMap {
    pub stride: i64,
    pub offset: i64,
}

impl IndexMap {
    pub const IDENTITY: IndexMap = IndexMap { stride: 1, offset: 0 };

    pub fn new(stride: i64, offset: i64) -> Result<Self> {
        if stride == 0 {
            return Err(Error::ZeroStride);
        }
        Ok(IndexMap { stride, offset })
    }

    pub fn translation(offset: i64) -> Self {
        IndexMap { stride: 1, offset }
    }

    /// The unique map with this stride sending `source` onto `target`, if the
    /// lengths fit.
    pub fn fitting(stride: i64, source: Interval, target: Interval) -> Option<Self> {
        if stride == 0 || stride.unsigned_abs() as usize * source.len() != target.len() {
            return None;
        }
        let offset = if stride > 0 {
            target.start - stride * source.start
        } else {
            target.end - 1 - stride * source.start
        };
        Some(IndexMap { stride, offset })
    }

    fn flip(&self) -> i64 {
        i64::from(self.stride < 0)
    }

    /// Target block of source index `i`.
    pub fn block(&self, i: i64) -> Interval {
        let head = self.stride * i + self.offset;
        if self.stride > 0 {
            Interval { start: head, end: head + self.stride }
        } else {
            Interval { start: head + self.stride + 1, end: head + 1 }
        }
    }

    pub fn image(&self, source: Interval) -> Interval {
        if self.stride > 0 {
            Interval { start: self.stride * source.start + self.offset, end: self.stride * source.end + self.offset }
        } else {
            Interval {
                start: self.stride * source.end + self.offset + 1,
                end: self.stride * source.start + self.offset + 1,
            }
        }
    }

    /// `φ⁻¹(j)`, the source index whose block contains `j`.
    pub fn preimage(&self, j: i64) -> i64 {
        num::integer::div_floor(j - self.offset, self.stride)
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &IndexMap) -> IndexMap {
        // Composition is exact for the real maps x ↦ S·x + T + [S<0] on
        // sample cells.
        let stride = self.stride * other.stride;
        let shifted = self.stride * (other.offset + other.flip()) + self.offset + self.flip();
        IndexMap { stride, offset: shifted - i64::from(stride < 0) }
    }

    /// The inverse grid map, which exists for `|S| = 1`.
    pub fn inverse(&self) -> Option<IndexMap> {
        match self.stride {
            1 => Some(IndexMap { stride: 1, offset: -self.offset }),
            -1 => Some(*self),
            _ => None,
        }
    }

    /// Weight carried by each target sample so that `φ` preserves measure
    /// against unit source weights.
    pub fn target_weight(&self) -> Rational {
        rat(1, self.stride.abs())
    }
}

impl fmt::Display for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.stride {
            1 => write!(f, "i -> i")?,
            -1 => write!(f, "i -> -i")?,
            s => write!(f, "i -> {s}i")?,
        }
        match self.offset {
            0 => Ok(()),
            t if t < 0 => write!(f, " - {}", t.unsigned_abs()),
            t => write!(f, " + {t}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArrowKind {
    Translation,
    Affine,
    AmpAffine,
}

impl ArrowKind {
    pub fn classify(map: &IndexMap, scale: &Rational) -> ArrowKind {
        if !scale.is_one() {
            ArrowKind::AmpAffine
        } else if map.stride == 1 {
            ArrowKind::Translation
        } else {
            ArrowKind::Affine
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ArrowKind::Translation => "translation",
            ArrowKind::Affine => "affine",
            ArrowKind::AmpAffine => "amp-affine",
        }
    }
}

impl fmt::Display for ArrowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An `(h, φ)` arrow between segments: `h(x) = c·x`, the grid map `φ`, and
/// the residual `Δ` of the observed target against the transferred source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentArrow {
    source: Interval,
    target: Interval,
    map: IndexMap,
    scale: Rational,
    residual: Vec<Rational>,
}

impl SegmentArrow {
    /// Arrow with the given data and zero residual.
    pub fn exact(source: Interval, map: IndexMap, scale: Rational) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::ZeroScale);
        }
        let target = map.image(source);
        Ok(SegmentArrow { source, target, map, scale, residual: vec![Rational::zero(); target.len()] })
    }

    /// Arrow `f → g` whose residual is `g − transfer(f)`.
    pub fn fit(f: &Segment, g: &Segment, map: IndexMap, scale: Rational) -> Result<Self> {
        let mut arrow = SegmentArrow::exact(f.interval(), map, scale)?;
        if arrow.target != g.interval() {
            return Err(Error::IntervalMismatch);
        }
        arrow.residual = delta(g, &transfer(&arrow, f)?)?;
        Ok(arrow)
    }

    pub fn identity(interval: Interval) -> Self {
        SegmentArrow::exact(interval, IndexMap::IDENTITY, Rational::one()).expect("identity is valid")
    }

    pub fn source(&self) -> Interval {
        self.source
    }

    pub fn target(&self) -> Interval {
        self.target
    }

    pub fn map(&self) -> IndexMap {
        self.map
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn residual(&self) -> &[Rational] {
        &self.residual
    }

    pub fn kind(&self) -> ArrowKind {
        ArrowKind::classify(&self.map, &self.scale)
    }

    pub fn is_exact(&self) -> bool {
        self.residual.iter().all(Zero::is_zero)
    }

    /// `∥Δ∥₂²` with unit weight per sample.
    pub fn residual_norm_squared(&self) -> Rational {
        norm_squared(&self.residual)
    }

    pub fn residual_norm(&self) -> f64 {
        crate::rational::to_f64(&self.residual_norm_squared()).sqrt()
    }

    pub fn within(&self, tol: f64) -> bool {
        within_tol(&self.residual_norm_squared(), tol)
    }

    /// The same arrow with its residual replaced.
    pub fn with_residual(&self, residual: Vec<Rational>) -> Result<Self> {
        if residual.len() != self.target.len() {
            return Err(Error::IntervalMismatch);
        }
        Ok(SegmentArrow { residual, ..self.clone() })
    }

    /// Inverse arrow for `|S| = 1`: maps the observed target back onto the
    /// source, with the residual that makes reconstruction exact.
    pub fn inverse(&self, f: &Segment, g: &Segment) -> Option<SegmentArrow> {
        let map = self.map.inverse()?;
        SegmentArrow::fit(g, f, map, self.scale.recip()).ok()
    }
}

pub(crate) fn norm_squared(v: &[Rational]) -> Rational {
    v.iter().map(|x| x * x).fold(Rational::zero(), |a, b| a + b)
}

/// `√n ≤ tol` for a squared norm `n`, decided exactly.
pub fn within_tol(norm_squared: &Rational, tol: f64) -> bool {
    if tol.is_infinite() && tol > 0.0 {
        return true;
    }
    match Rational::from_float(tol) {
        Some(t) if !t.is_negative() => norm_squared <= &(&t * &t),
        _ => false,
    }
}

/// `g(j) = c·f(φ⁻¹(j))` on the arrow's target.
pub fn transfer(arrow: &SegmentArrow, f: &Segment) -> Result<Segment> {
    if f.interval() != arrow.source {
        return Err(Error::IntervalMismatch);
    }
    let samples = arrow.target.indices().map(|j| &arrow.scale * f.at(arrow.map.preimage(j))).collect();
    Segment::new(arrow.target.start, samples)
}

/// Pointwise `observed − predicted`.
pub fn delta(observed: &Segment, predicted: &Segment) -> Result<Vec<Rational>> {
    if observed.interval() != predicted.interval() {
        return Err(Error::IntervalMismatch);
    }
    Ok(observed.samples().iter().zip(predicted.samples()).map(|(a, b)| a - b).collect())
}

/// `b ∘ a`. Maps compose affinely, scales multiply, and the residual of `a`
/// is carried through `b`, so reconstruction stays exact along the chain.
pub fn compose(b: &SegmentArrow, a: &SegmentArrow) -> Result<SegmentArrow> {
    if a.target != b.source {
        return Err(Error::IntervalMismatch);
    }
    let carried = transfer(b, &Segment::new(a.target.start, a.residual.clone())?)?;
    let residual = b.residual.iter().zip(carried.samples()).map(|(x, y)| x + y).collect();
    Ok(SegmentArrow {
        source: a.source,
        target: b.target,
        map: b.map.after(&a.map),
        scale: &b.scale * &a.scale,
        residual,
    })
}
