//! The covariant side: function classes over a Boolean algebra, written
//! through their threshold sets `⟦u>a⟧`, and the action of Boolean
//! homomorphisms on them.

use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::function_space::{FnClass, SpaceTag};
use crate::measure::{FiniteMeasureSpace, Subset};
use crate::quotient::{quotient_measure_algebra, BooleanAlgebra, BooleanHom, Element};
use crate::rational::{ExtRational, Rational};

/// An element `u` of `L⁰(𝔅)` for a finite (hence atomic) algebra, stored as
/// its value on each atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualElement {
    algebra: BooleanAlgebra,
    atom_values: Vec<Rational>,
}

impl DualElement {
    pub fn new(algebra: BooleanAlgebra, atom_values: Vec<Rational>) -> Result<Self> {
        if atom_values.len() != algebra.atom_count() {
            return Err(Error::WeightMismatch { expected: algebra.atom_count(), got: atom_values.len() });
        }
        Ok(DualElement { algebra, atom_values })
    }

    pub fn algebra(&self) -> BooleanAlgebra {
        self.algebra
    }

    pub fn atom_values(&self) -> &[Rational] {
        &self.atom_values
    }

    /// `⟦u>a⟧`, the join of the atoms where `u` exceeds `a`.
    pub fn threshold(&self, a: &Rational) -> Element {
        Subset::from_positions(self.atom_values.iter().enumerate().filter(|(_, v)| *v > a).map(|(k, _)| k))
    }

    /// Distinct values, ascending. The threshold family only changes at these.
    pub fn levels(&self) -> Vec<Rational> {
        let mut levels = self.atom_values.clone();
        levels.sort();
        levels.dedup();
        levels
    }

    /// `∥u∥₂² = Σ μ̄(atom)·u(atom)²`.
    pub fn norm2_squared(&self, atom_measures: &[ExtRational]) -> ExtRational {
        self.atom_values.iter().zip(atom_measures).map(|(v, m)| m.scale(&(v * v))).sum()
    }
}

/// `T_π u`: the element whose threshold family is `a ↦ π⟦u>a⟧`.
///
/// Between consecutive levels `vₘ < vₘ₊₁` of `u` the set `⟦u>a⟧` is constant,
/// so a target atom `t` takes the largest `vₘ₊₁` with `t ∈ π⟦u>vₘ⟧`, and the
/// bottom level otherwise.
pub fn covariant_op(pi: &BooleanHom, u: &DualElement) -> Result<DualElement> {
    let flags = pi.flags();
    if !flags.is_hom || !flags.is_soc {
        return Err(Error::NotHom);
    }
    if pi.source() != u.algebra {
        return Err(Error::SpaceMismatch);
    }
    let target = pi.target();
    let levels = u.levels();
    let bottom = levels.first().cloned().unwrap_or_else(Rational::zero);
    let mut values = vec![bottom; target.atom_count()];
    for pair in levels.windows(2) {
        let pushed = pi.apply(u.threshold(&pair[0]));
        for t in pushed.positions() {
            values[t] = pair[1].clone();
        }
    }
    DualElement::new(target, values)
}

/// The `L²` form of [`covariant_op`]: `π` must carry measures and preserve
/// them, and `u` must vanish off the finite part of the source.
pub fn covariant_op_l2(pi: &BooleanHom, u: &DualElement) -> Result<DualElement> {
    if pi.flags().is_measure_preserving != Some(true) {
        return Err(Error::NotMeasurePreserving);
    }
    let measures = pi.source_measures().expect("measure-preserving maps carry measures");
    if !u.norm2_squared(measures).is_finite() {
        return Err(Error::NotSquareIntegrable);
    }
    covariant_op(pi, u)
}

/// Identifies `L⁰(μ)` with `L⁰(𝔅)` for the space's measure algebra: each
/// atom takes the common value of `f` on it.
pub fn duality_bridge(f: &FnClass) -> Result<DualElement> {
    let (alg, proj) = quotient_measure_algebra(f.space())?;
    let values = (0..alg.algebra().atom_count())
        .map(|k| {
            let mut points = proj.atom_block(k).positions();
            let first = points.next().expect("atoms are nonempty");
            let v = &f.values()[first];
            if points.all(|p| &f.values()[p] == v) {
                Ok(v.clone())
            } else {
                Err(Error::NonConstantOnAtom(k))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    DualElement::new(alg.algebra(), values)
}

/// Inverse of [`duality_bridge`].
pub fn from_dual(space: &Arc<FiniteMeasureSpace>, u: &DualElement, tag: SpaceTag) -> Result<FnClass> {
    let (alg, proj) = quotient_measure_algebra(space)?;
    if alg.algebra() != u.algebra {
        return Err(Error::SpaceMismatch);
    }
    let raw = (0..space.len())
        .map(|p| proj.atom_of_point(p).map_or_else(Rational::zero, |k| u.atom_values[k].clone()))
        .collect();
    FnClass::new(space, raw, tag)
}
