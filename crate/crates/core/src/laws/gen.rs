//! Seeded random instances for the law suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::duality::DualElement;
use crate::function_space::{FnClass, SpaceTag};
use crate::measure::{FiniteCarrier, FiniteMeasureSpace, MeasurableMap, SigmaAlgebra, Subset};
use crate::partial::PartialInjection;
use crate::quotient::{BooleanAlgebra, BooleanHom};
use crate::rational::{int, rat, ExtRational, Rational};
use crate::signal::{IndexMap, Segment};

pub type Gen = ChaCha8Rng;

pub fn rng(seed: u64) -> Gen {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A small rational `n/d` with `|n| ≤ 9`, `1 ≤ d ≤ 4`.
pub fn small_rational(rng: &mut Gen) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

pub fn nonzero_rational(rng: &mut Gen) -> Rational {
    loop {
        let r = small_rational(rng);
        if r != int(0) {
            return r;
        }
    }
}

/// A point weight: zero a quarter of the time, occasionally infinite.
pub fn weight(rng: &mut Gen, allow_infinite: bool) -> ExtRational {
    match rng.gen_range(0..20) {
        0..=4 => ExtRational::zero(),
        5 if allow_infinite => ExtRational::Infinite,
        _ => ExtRational::from(rat(rng.gen_range(1..=12), rng.gen_range(1..=3))),
    }
}

pub fn carrier(rng: &mut Gen, len: usize) -> FiniteCarrier {
    let start = rng.gen_range(-5..=5);
    FiniteCarrier::range(start, start + len as i64).expect("small carrier")
}

/// The power set half of the time, otherwise generated by a few random sets.
pub fn sigma(rng: &mut Gen, carrier: FiniteCarrier) -> SigmaAlgebra {
    if rng.gen_bool(0.5) {
        return SigmaAlgebra::power_set(carrier);
    }
    let full = carrier.full().0;
    let generators: Vec<Subset> = (0..rng.gen_range(0..=3)).map(|_| Subset(rng.gen::<u64>() & full)).collect();
    SigmaAlgebra::generate(carrier, &generators)
}

/// A space with `1..=max_points` points whose measure is not identically
/// zero.
pub fn space(rng: &mut Gen, max_points: usize, allow_infinite: bool) -> Arc<FiniteMeasureSpace> {
    loop {
        let n = rng.gen_range(1..=max_points);
        let c = carrier(rng, n);
        let s = sigma(rng, c);
        let weights = (0..n).map(|_| weight(rng, allow_infinite)).collect();
        let space = FiniteMeasureSpace::new(s, weights).expect("valid weights");
        if !space.nonnull_blocks().is_empty() {
            return Arc::new(space);
        }
    }
}

/// A measurable map out of `source` onto a fresh target of `1..=max_points`
/// points, non-singular by construction. With `imp` the target carries the
/// image measure exactly; otherwise image weights are rescaled at random,
/// which may or may not preserve it.
pub fn nonsingular_map(rng: &mut Gen, source: &Arc<FiniteMeasureSpace>, max_points: usize, imp: bool) -> MeasurableMap {
    let m = rng.gen_range(1..=max_points);
    let target_carrier = carrier(rng, m);
    // Constant on source blocks keeps the map measurable for any target σ.
    let block_images: Vec<usize> = source.sigma().blocks().iter().map(|_| rng.gen_range(0..m)).collect();
    let images: Vec<usize> = (0..source.len()).map(|p| block_images[source.sigma().block_of(p)]).collect();
    let mut pushed = vec![ExtRational::zero(); m];
    for (p, &y) in images.iter().enumerate() {
        pushed[y] = pushed[y].clone() + source.weight(p).clone();
    }
    let weights = pushed
        .into_iter()
        .map(|w| match (imp, w.is_zero()) {
            (true, _) => w,
            (false, true) => {
                if rng.gen_bool(0.5) {
                    ExtRational::zero()
                } else {
                    weight(rng, false)
                }
            }
            (false, false) => w.scale(&int(rng.gen_range(1..=2))),
        })
        .collect();
    let target_sigma = sigma(rng, target_carrier.clone());
    let target = Arc::new(FiniteMeasureSpace::new(target_sigma, weights).expect("valid weights"));
    let labels: Vec<i64> = images.iter().map(|&y| target_carrier.label(y)).collect();
    MeasurableMap::new(source.clone(), target, &labels).expect("total map")
}

/// A class in `L⁰` or `L²`, constant on blocks; on `L²` it vanishes on
/// blocks of infinite measure.
pub fn function(rng: &mut Gen, space: &Arc<FiniteMeasureSpace>, tag: SpaceTag) -> FnClass {
    let blocks = space.sigma().blocks();
    let values: Vec<Rational> = blocks
        .iter()
        .zip(space.block_measures())
        .map(|(_, m)| if tag == SpaceTag::L2 && !m.is_finite() { int(0) } else { small_rational(rng) })
        .collect();
    let raw = (0..space.len()).map(|p| values[space.sigma().block_of(p)].clone()).collect();
    FnClass::new(space, raw, tag).expect("constant on blocks")
}

pub fn dual_element(rng: &mut Gen, algebra: BooleanAlgebra) -> DualElement {
    let values = (0..algebra.atom_count()).map(|_| small_rational(rng)).collect();
    DualElement::new(algebra, values).expect("one value per atom")
}

/// A Boolean homomorphism: every target atom lies under the image of
/// exactly one source atom.
pub fn boolean_hom(rng: &mut Gen, source: BooleanAlgebra, target: BooleanAlgebra) -> BooleanHom {
    let mut images = vec![Subset::EMPTY; source.atom_count()];
    for t in 0..target.atom_count() {
        let s = rng.gen_range(0..source.atom_count());
        images[s] = images[s].union(Subset::singleton(t));
    }
    BooleanHom::from_atom_images(source, target, images)
}

pub fn partial_injection(rng: &mut Gen, source: &FiniteCarrier, target: &FiniteCarrier) -> PartialInjection {
    let mut targets = target.labels().to_vec();
    targets.shuffle(rng);
    let pairs: Vec<(i64, i64)> =
        source.labels().iter().zip(targets).filter(|_| rng.gen_bool(0.7)).map(|(&x, y)| (x, y)).collect();
    PartialInjection::new(source.clone(), target.clone(), pairs).expect("injective by construction")
}

pub fn segment(rng: &mut Gen, max_len: usize) -> Segment {
    let len = rng.gen_range(1..=max_len);
    let start = rng.gen_range(-20..=20);
    let values: Vec<i64> = (0..len).map(|_| rng.gen_range(-9..=9)).collect();
    Segment::from_ints(start, &values).expect("nonempty")
}

pub fn index_map(rng: &mut Gen, strides: &[i64]) -> IndexMap {
    IndexMap::new(*strides.choose(rng).expect("strides"), rng.gen_range(-40..=40)).expect("nonzero stride")
}
