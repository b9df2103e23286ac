//! `L⁰` and `L²` over finite measure spaces, and the contravariant pullback
//! action of measurable maps on them.
//!
//! A class `f•` is stored through its canonical representative: the values
//! on non-negligible points, with zero on the largest null set. Two classes
//! are equal iff their representatives are.

use std::sync::Arc;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::measure::{same_space, FiniteMeasureSpace, MeasurableMap, Subset};
use crate::rational::{to_f64, ExtRational, Rational};

/// Which function space a class is considered an element of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceTag {
    L0,
    L2,
}

/// An element `f•` of `L⁰(μ)` or `L²(μ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnClass {
    space: Arc<FiniteMeasureSpace>,
    values: Vec<Rational>,
    tag: SpaceTag,
}

/// Canonical `L⁰` class of a raw function: values on negligible points are
/// zeroed, and the rest must be constant on every block of the σ-algebra.
pub fn canonical_class(space: &Arc<FiniteMeasureSpace>, raw: Vec<Rational>) -> Result<FnClass> {
    FnClass::new(space, raw, SpaceTag::L0)
}

impl FnClass {
    pub fn new(space: &Arc<FiniteMeasureSpace>, mut raw: Vec<Rational>, tag: SpaceTag) -> Result<Self> {
        if raw.len() != space.len() {
            return Err(Error::WeightMismatch { expected: space.len(), got: raw.len() });
        }
        for p in space.null_set().positions() {
            raw[p] = Rational::zero();
        }
        if !space.is_measurable_fn(&raw) {
            return Err(Error::NotMeasurable);
        }
        let class = FnClass { space: space.clone(), values: raw, tag };
        if tag == SpaceTag::L2 && !class.norm2_squared().is_finite() {
            return Err(Error::NotSquareIntegrable);
        }
        Ok(class)
    }

    pub fn l0(space: &Arc<FiniteMeasureSpace>, raw: Vec<Rational>) -> Result<Self> {
        FnClass::new(space, raw, SpaceTag::L0)
    }

    pub fn l2(space: &Arc<FiniteMeasureSpace>, raw: Vec<Rational>) -> Result<Self> {
        FnClass::new(space, raw, SpaceTag::L2)
    }

    pub fn zero(space: &Arc<FiniteMeasureSpace>, tag: SpaceTag) -> Self {
        FnClass { space: space.clone(), values: vec![Rational::zero(); space.len()], tag }
    }

    /// `χF•` for measurable `F`.
    pub fn indicator(space: &Arc<FiniteMeasureSpace>, set: Subset, tag: SpaceTag) -> Result<Self> {
        if !space.sigma().contains(set) {
            return Err(Error::NotMeasurable);
        }
        let raw = (0..space.len())
            .map(|p| if set.contains(p) { Rational::from_integer(1.into()) } else { Rational::zero() })
            .collect();
        FnClass::new(space, raw, tag)
    }

    /// The constant function `1`, the multiplicative unit of `L⁰`.
    pub fn one(space: &Arc<FiniteMeasureSpace>) -> Self {
        FnClass::indicator(space, space.carrier().full(), SpaceTag::L0)
            .expect("the carrier is measurable")
    }

    pub fn space(&self) -> &Arc<FiniteMeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn value_at(&self, label: i64) -> Option<&Rational> {
        self.space.carrier().position(label).map(|p| &self.values[p])
    }

    /// The same class regarded in the other space; moving into `L²` checks
    /// square integrability.
    pub fn retag(self, tag: SpaceTag) -> Result<Self> {
        FnClass::new(&self.space, self.values, tag)
    }

    /// `∥f∥₂² = Σ w(x) f(x)²`, exact.
    pub fn norm2_squared(&self) -> ExtRational {
        self.values
            .iter()
            .zip(self.space.weights())
            .map(|(v, w)| w.scale(&(v * v)))
            .sum()
    }

    pub fn norm2(&self) -> f64 {
        self.norm2_squared().to_f64().sqrt()
    }

    pub fn inner(&self, other: &FnClass) -> Result<Rational> {
        self.check_same(other)?;
        let mut total = Rational::zero();
        for ((a, b), w) in self.values.iter().zip(&other.values).zip(self.space.weights()) {
            let prod = a * b;
            match w {
                ExtRational::Finite(w) => total += w * prod,
                ExtRational::Infinite if prod.is_zero() => {}
                ExtRational::Infinite => return Err(Error::NotSquareIntegrable),
            }
        }
        Ok(total)
    }

    fn check_same(&self, other: &FnClass) -> Result<()> {
        if self.tag != other.tag || !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    fn zip_with(&self, other: &FnClass, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<FnClass> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Ok(FnClass { space: self.space.clone(), values, tag: self.tag })
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> FnClass {
        FnClass { space: self.space.clone(), values: self.values.iter().map(f).collect(), tag: self.tag }
    }

    pub fn add(&self, other: &FnClass) -> Result<FnClass> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &FnClass) -> Result<FnClass> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &FnClass) -> Result<FnClass> {
        self.zip_with(other, |a, b| a * b)
    }

    /// `f ∨ g`, pointwise maximum.
    pub fn sup(&self, other: &FnClass) -> Result<FnClass> {
        self.zip_with(other, |a, b| a.max(b).clone())
    }

    /// `f ∧ g`, pointwise minimum.
    pub fn inf(&self, other: &FnClass) -> Result<FnClass> {
        self.zip_with(other, |a, b| a.min(b).clone())
    }

    pub fn scale(&self, c: &Rational) -> FnClass {
        self.map(|v| v * c)
    }

    pub fn neg(&self) -> FnClass {
        self.map(|v| -v)
    }

    pub fn abs(&self) -> FnClass {
        self.map(|v| v.abs())
    }

    /// `f ≤ g` almost everywhere.
    pub fn le(&self, other: &FnClass) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Points where the canonical representative is nonzero.
    pub fn support(&self) -> Subset {
        Subset::from_positions(self.values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(p, _)| p))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(to_f64).collect()
    }
}

/// `T_φ g• = (g∘φ)•`. Needs a non-singular `φ` on `L⁰` and an
/// inverse-measure-preserving one on `L²`.
pub fn pullback(phi: &MeasurableMap, g: &FnClass) -> Result<FnClass> {
    if !same_space(phi.target(), &g.space) {
        return Err(Error::SpaceMismatch);
    }
    let flags = phi.flags();
    match g.tag {
        SpaceTag::L0 if !flags.is_nonsingular => return Err(Error::NotNonsingular),
        SpaceTag::L2 if !flags.is_imp => return Err(Error::NotImp),
        _ => {}
    }
    let raw = phi.images().iter().map(|&y| g.values[y].clone()).collect();
    FnClass::new(phi.source(), raw, g.tag)
}

/// `h̄ f• = (h∘f)•` for the linear amplitude map `h(x) = c·x`.
pub fn amplitude_op(c: &Rational, f: &FnClass) -> FnClass {
    f.scale(c)
}

/// `f ↦ ⟨f∘φ_i⟩` over the summands of a direct-sum space.
pub fn split_direct_sum(f: &FnClass) -> Result<Vec<FnClass>> {
    let layout = f.space.layout().ok_or(Error::NotADirectSum)?;
    layout
        .parts
        .iter()
        .zip(&layout.offsets)
        .map(|(part, &off)| FnClass::new(part, f.values[off..off + part.len()].to_vec(), f.tag))
        .collect()
}

/// Inverse of [`split_direct_sum`].
pub fn join_direct_sum(space: &Arc<FiniteMeasureSpace>, parts: &[FnClass]) -> Result<FnClass> {
    let layout = space.layout().ok_or(Error::NotADirectSum)?;
    if parts.len() != layout.parts.len() {
        return Err(Error::SpaceMismatch);
    }
    let tag = parts.first().map_or(SpaceTag::L0, |p| p.tag);
    let mut raw = Vec::with_capacity(space.len());
    for (part, summand) in parts.iter().zip(&layout.parts) {
        if part.tag != tag || !same_space(&part.space, summand) {
            return Err(Error::SpaceMismatch);
        }
        raw.extend(part.values.iter().cloned());
    }
    FnClass::new(space, raw, tag)
}
