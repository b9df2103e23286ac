//! Partial injections between finite carriers: the inverse category of sets
//! and partial injections, with its restriction and dagger structure, and the
//! `l²` action by zero-extended pullback.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::function_space::{FnClass, SpaceTag};
use crate::measure::{FiniteCarrier, FiniteMeasureSpace};
use crate::rational::Rational;

/// An injective partial map `source ⇀ target`, stored by its graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialInjection {
    source: FiniteCarrier,
    target: FiniteCarrier,
    pairs: BTreeMap<i64, i64>,
}

impl PartialInjection {
    pub fn new(
        source: FiniteCarrier,
        target: FiniteCarrier,
        pairs: impl IntoIterator<Item = (i64, i64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (x, y) in pairs {
            if source.position(x).is_none() {
                return Err(Error::UnknownPoint(x));
            }
            if target.position(y).is_none() {
                return Err(Error::UnknownPoint(y));
            }
            if map.insert(x, y).is_some() || !seen.insert(y) {
                return Err(Error::NotInjective);
            }
        }
        Ok(PartialInjection { source, target, pairs: map })
    }

    pub fn identity(carrier: FiniteCarrier) -> Self {
        let pairs = carrier.labels().iter().map(|&x| (x, x)).collect();
        PartialInjection { source: carrier.clone(), target: carrier, pairs }
    }

    pub fn source(&self) -> &FiniteCarrier {
        &self.source
    }

    pub fn target(&self) -> &FiniteCarrier {
        &self.target
    }

    pub fn pairs(&self) -> &BTreeMap<i64, i64> {
        &self.pairs
    }

    pub fn apply(&self, x: i64) -> Option<i64> {
        self.pairs.get(&x).copied()
    }

    pub fn domain(&self) -> Vec<i64> {
        self.pairs.keys().copied().collect()
    }

    pub fn image(&self) -> Vec<i64> {
        let mut im: Vec<i64> = self.pairs.values().copied().collect();
        im.sort_unstable();
        im
    }

    pub fn is_total(&self) -> bool {
        self.pairs.len() == self.source.len()
    }
}

/// `g ∘ f`, defined where `f(x)` lands in the domain of `g`.
pub fn compose(g: &PartialInjection, f: &PartialInjection) -> Result<PartialInjection> {
    if f.target != g.source {
        return Err(Error::SpaceMismatch);
    }
    let pairs = f.pairs.iter().filter_map(|(&x, y)| g.pairs.get(y).map(|&z| (x, z))).collect();
    Ok(PartialInjection { source: f.source.clone(), target: g.target.clone(), pairs })
}

/// `f̄`, the partial identity on the domain of `f`.
pub fn restriction(f: &PartialInjection) -> PartialInjection {
    let pairs = f.pairs.keys().map(|&x| (x, x)).collect();
    PartialInjection { source: f.source.clone(), target: f.source.clone(), pairs }
}

/// `f†`, the converse relation; for partial injections this is the partial
/// inverse.
pub fn dagger(f: &PartialInjection) -> PartialInjection {
    let pairs = f.pairs.iter().map(|(&x, &y)| (y, x)).collect();
    PartialInjection { source: f.target.clone(), target: f.source.clone(), pairs }
}

/// `l²(f) g = g∘f` on the domain of `f`, extended by zero elsewhere. Both
/// sides carry counting measure.
pub fn l2_partial(f: &PartialInjection, g: &FnClass) -> Result<FnClass> {
    let space = g.space();
    if space.carrier() != &f.target || space.weights().iter().any(|w| *w != crate::rational::ExtRational::one()) {
        return Err(Error::SpaceMismatch);
    }
    let source = Arc::new(FiniteMeasureSpace::counting(f.source.clone()));
    let raw = f
        .source
        .labels()
        .iter()
        .map(|&x| match f.apply(x) {
            Some(y) => g.value_at(y).cloned().expect("image lies in the target"),
            None => Rational::zero(),
        })
        .collect();
    FnClass::new(&source, raw, SpaceTag::L2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn carrier(labels: &[i64]) -> FiniteCarrier {
        FiniteCarrier::new(labels.to_vec()).unwrap()
    }

    // Letters as labels: a = 10, b = 11, z = 25.
    const A: i64 = 10;
    const B: i64 = 11;
    const Z: i64 = 25;

    #[test]
    fn chained_pair_composes() {
        let f = PartialInjection::new(carrier(&[0, 1]), carrier(&[A, B]), [(0, A)]).unwrap();
        let g = PartialInjection::new(carrier(&[A, B]), carrier(&[Z]), [(A, Z)]).unwrap();
        assert_eq!(compose(&g, &f).unwrap().pairs(), &BTreeMap::from([(0, Z)]));
    }

    #[test]
    fn disjoint_domain_composes_to_empty() {
        let f = PartialInjection::new(carrier(&[0, 1]), carrier(&[A, B]), [(0, A)]).unwrap();
        let g = PartialInjection::new(carrier(&[A, B]), carrier(&[Z]), [(B, Z)]).unwrap();
        assert!(compose(&g, &f).unwrap().pairs().is_empty());
    }

    #[test]
    fn identity_is_a_unit() {
        let f = PartialInjection::new(carrier(&[0, 1]), carrier(&[A, B]), [(1, A)]).unwrap();
        assert_eq!(compose(&PartialInjection::identity(carrier(&[A, B])), &f).unwrap(), f);
        assert_eq!(compose(&f, &PartialInjection::identity(carrier(&[0, 1]))).unwrap(), f);
    }

    #[test]
    fn composition_checks_objects() {
        let f = PartialInjection::new(carrier(&[0]), carrier(&[A]), [(0, A)]).unwrap();
        assert_eq!(compose(&f, &f).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn non_injective_pairs_are_rejected() {
        let err = PartialInjection::new(carrier(&[0, 1]), carrier(&[A]), [(0, A), (1, A)]).unwrap_err();
        assert_eq!(err, Error::NotInjective);
    }

    #[test]
    fn restriction_is_partial_identity() {
        let f = PartialInjection::new(carrier(&[0, 1]), carrier(&[A, B]), [(0, A)]).unwrap();
        assert_eq!(restriction(&f).pairs(), &BTreeMap::from([(0, 0)]));
        let total = PartialInjection::new(carrier(&[0, 1]), carrier(&[A, B]), [(0, B), (1, A)]).unwrap();
        assert_eq!(restriction(&total), PartialInjection::identity(carrier(&[0, 1])));
    }

    #[test]
    fn dagger_reverses_pairs() {
        let f = PartialInjection::new(carrier(&[0, 1]), carrier(&[A, B]), [(0, A), (1, B)]).unwrap();
        assert_eq!(dagger(&f).pairs(), &BTreeMap::from([(A, 0), (B, 1)]));
        assert_eq!(dagger(&dagger(&f)), f);
        assert_eq!(compose(&f, &dagger(&f)).unwrap(), restriction(&dagger(&f)));
        assert_eq!(compose(&dagger(&f), &f).unwrap(), restriction(&f));
    }

    #[test]
    fn l2_partial_extends_by_zero() {
        let f = PartialInjection::new(carrier(&[0, 1]), carrier(&[A, B]), [(0, A)]).unwrap();
        let target = Arc::new(FiniteMeasureSpace::counting(carrier(&[A, B])));
        let g = FnClass::l2(&target, vec![int(7), int(3)]).unwrap();
        let pulled = l2_partial(&f, &g).unwrap();
        assert_eq!(pulled.values(), &[int(7), int(0)]);
        assert!(pulled.norm2_squared() <= g.norm2_squared());
    }

    #[test]
    fn l2_partial_of_bijection_preserves_norm() {
        let f = PartialInjection::new(carrier(&[0, 1]), carrier(&[A, B]), [(0, B), (1, A)]).unwrap();
        let target = Arc::new(FiniteMeasureSpace::counting(carrier(&[A, B])));
        let g = FnClass::l2(&target, vec![int(7), int(3)]).unwrap();
        let pulled = l2_partial(&f, &g).unwrap();
        assert_eq!(pulled.values(), &[int(3), int(7)]);
        assert_eq!(pulled.norm2_squared(), g.norm2_squared());
    }

    #[test]
    fn l2_partial_of_empty_map_is_zero() {
        let f = PartialInjection::new(carrier(&[0, 1]), carrier(&[A, B]), []).unwrap();
        let target = Arc::new(FiniteMeasureSpace::counting(carrier(&[A, B])));
        let g = FnClass::l2(&target, vec![int(7), int(3)]).unwrap();
        assert!(l2_partial(&f, &g).unwrap().is_zero());
    }
}
