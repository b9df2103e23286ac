//! Finite measurable and measure spaces.
//!
//! A finite σ-algebra is determined by its atoms, the blocks of a partition of
//! the carrier; every member is a union of blocks. Spaces store that partition
//! and enumerate members on demand, so membership, measurability of maps and
//! the null ideal reduce to checks over blocks.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::ExtRational;

/// Carriers are capped so a subset fits in one machine word.
pub const MAX_POINTS: usize = 64;

/// A subset of a carrier, as a bitmask over point positions.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(len: usize) -> Subset {
        if len >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << len) - 1)
        }
    }

    pub fn singleton(pos: usize) -> Subset {
        Subset(1u64 << pos)
    }

    pub fn from_positions<I: IntoIterator<Item = usize>>(positions: I) -> Subset {
        Subset(positions.into_iter().fold(0, |acc, p| acc | (1u64 << p)))
    }

    pub fn contains(self, pos: usize) -> bool {
        pos < 64 && self.0 & (1u64 << pos) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: Subset) -> Subset {
        Subset(self.0 ^ other.0)
    }

    pub fn complement(self, len: usize) -> Subset {
        Subset::full(len).difference(self)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Positions of the members, ascending.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(p)
            }
        })
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let current = next?;
            next = if current == mask {
                None
            } else {
                Some((current.wrapping_sub(mask)) & mask)
            };
            Some(Subset(current))
        })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.positions()).finish()
    }
}

/// The finite point set `X`, as strictly increasing integer labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteCarrier {
    labels: Vec<i64>,
}

impl FiniteCarrier {
    pub fn new(labels: Vec<i64>) -> Result<Self> {
        if labels.len() > MAX_POINTS {
            return Err(Error::CarrierTooLarge(labels.len()));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedCarrier);
        }
        Ok(FiniteCarrier { labels })
    }

    /// The labels `start..end`.
    pub fn range(start: i64, end: i64) -> Result<Self> {
        FiniteCarrier::new((start..end).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn label(&self, pos: usize) -> i64 {
        self.labels[pos]
    }

    pub fn position(&self, label: i64) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn subset(&self, labels: &[i64]) -> Result<Subset> {
        labels.iter().try_fold(Subset::EMPTY, |acc, &l| {
            let pos = self.position(l).ok_or(Error::UnknownPoint(l))?;
            Ok(acc.union(Subset::singleton(pos)))
        })
    }

    pub fn labels_of(&self, set: Subset) -> Vec<i64> {
        set.positions().map(|p| self.labels[p]).collect()
    }
}

/// A σ-algebra on a finite carrier, held as the partition into its atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaAlgebra {
    carrier: FiniteCarrier,
    blocks: Vec<Subset>,
}

impl SigmaAlgebra {
    /// The σ-algebra generated by `generators`: two points share a block iff
    /// no generator separates them.
    pub fn generate(carrier: FiniteCarrier, generators: &[Subset]) -> SigmaAlgebra {
        let full = carrier.full();
        let mut blocks: Vec<Subset> = if full.is_empty() { Vec::new() } else { vec![full] };
        for g in generators {
            let g = g.intersection(full);
            blocks = blocks
                .into_iter()
                .flat_map(|b| [b.intersection(g), b.difference(g)])
                .filter(|b| !b.is_empty())
                .collect();
        }
        blocks.sort_by_key(|b| b.0.trailing_zeros());
        SigmaAlgebra { carrier, blocks }
    }

    pub fn power_set(carrier: FiniteCarrier) -> SigmaAlgebra {
        let blocks = (0..carrier.len()).map(Subset::singleton).collect();
        SigmaAlgebra { carrier, blocks }
    }

    pub fn trivial(carrier: FiniteCarrier) -> SigmaAlgebra {
        SigmaAlgebra::generate(carrier, &[])
    }

    /// Accepts an explicit family, checking the σ-algebra axioms.
    pub fn from_members(carrier: FiniteCarrier, members: &[Subset]) -> Result<SigmaAlgebra> {
        let full = carrier.full();
        if members.iter().any(|m| !m.is_subset_of(full)) {
            return Err(Error::NotASigmaAlgebra("member outside the carrier".into()));
        }
        let mut family: Vec<Subset> = members.to_vec();
        family.sort();
        family.dedup();
        let has = |s: Subset| family.binary_search(&s).is_ok();
        if !has(Subset::EMPTY) || !has(full) {
            return Err(Error::NotASigmaAlgebra("missing the empty set or the carrier".into()));
        }
        for &a in &family {
            if !has(a.complement(carrier.len())) {
                return Err(Error::NotASigmaAlgebra("not closed under complement".into()));
            }
            for &b in &family {
                if !has(a.union(b)) {
                    return Err(Error::NotASigmaAlgebra("not closed under union".into()));
                }
            }
        }
        let sigma = SigmaAlgebra::generate(carrier, &family);
        debug_assert_eq!(sigma.member_count(), family.len() as u128);
        Ok(sigma)
    }

    pub fn carrier(&self) -> &FiniteCarrier {
        &self.carrier
    }

    /// The atoms of the σ-algebra, ordered by their lowest point.
    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn block_of(&self, pos: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(pos))
            .expect("blocks partition the carrier")
    }

    pub fn contains(&self, set: Subset) -> bool {
        set.is_subset_of(self.carrier.full())
            && self
                .blocks
                .iter()
                .all(|&b| b.is_subset_of(set) || b.is_disjoint(set))
    }

    /// Union of the blocks selected by `mask` (bit `k` selects block `k`).
    pub fn union_of_blocks(&self, mask: u64) -> Subset {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .fold(Subset::EMPTY, |acc, (_, &b)| acc.union(b))
    }

    /// Which blocks make up a measurable set.
    pub fn block_mask(&self, set: Subset) -> Option<u64> {
        if !self.contains(set) {
            return None;
        }
        Some(
            self.blocks
                .iter()
                .enumerate()
                .filter(|(_, &b)| b.is_subset_of(set))
                .fold(0u64, |acc, (k, _)| acc | 1u64 << k),
        )
    }

    pub fn member_count(&self) -> u128 {
        1u128 << self.blocks.len()
    }

    /// Every member, enumerated from the block structure. Only sensible for
    /// small algebras.
    pub fn members(&self) -> Vec<Subset> {
        assert!(self.blocks.len() <= 24, "too many members to enumerate");
        let mut out: Vec<Subset> = (0..1u64 << self.blocks.len())
            .map(|mask| self.union_of_blocks(mask))
            .collect();
        out.sort();
        out
    }
}

/// Subsets contained in some null measurable set, represented by the largest
/// null measurable set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NullIdeal {
    zero_set: Subset,
}

impl NullIdeal {
    pub fn zero_set(&self) -> Subset {
        self.zero_set
    }

    pub fn contains(&self, set: Subset) -> bool {
        set.is_subset_of(self.zero_set)
    }

    pub fn members(&self) -> Vec<Subset> {
        self.zero_set.subsets().collect()
    }
}

/// Records how a space was assembled by [`FiniteMeasureSpace::direct_sum`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumLayout {
    pub parts: Vec<Arc<FiniteMeasureSpace>>,
    pub offsets: Vec<usize>,
}

/// `(X, Σ, μ)` with a point-supported measure: `μE` is the sum of the
/// weights of the points in `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMeasureSpace {
    sigma: SigmaAlgebra,
    weights: Vec<ExtRational>,
    block_measures: Vec<ExtRational>,
    zero_set: Subset,
    layout: Option<DirectSumLayout>,
}

impl FiniteMeasureSpace {
    pub fn new(sigma: SigmaAlgebra, weights: Vec<ExtRational>) -> Result<Self> {
        let n = sigma.carrier().len();
        if weights.len() != n {
            return Err(Error::WeightMismatch { expected: n, got: weights.len() });
        }
        if weights.iter().any(ExtRational::is_negative) {
            return Err(Error::NegativeWeight);
        }
        let block_measures: Vec<ExtRational> = sigma
            .blocks()
            .iter()
            .map(|b| b.positions().map(|p| weights[p].clone()).sum())
            .collect();
        let zero_set = sigma
            .blocks()
            .iter()
            .zip(&block_measures)
            .filter(|(_, m)| m.is_zero())
            .fold(Subset::EMPTY, |acc, (&b, _)| acc.union(b));
        Ok(FiniteMeasureSpace { sigma, weights, block_measures, zero_set, layout: None })
    }

    /// Counting measure on the power set.
    pub fn counting(carrier: FiniteCarrier) -> Self {
        let weights = vec![ExtRational::one(); carrier.len()];
        FiniteMeasureSpace::new(SigmaAlgebra::power_set(carrier), weights)
            .expect("counting measure is valid")
    }

    /// Point weights on the power set.
    pub fn with_weights(carrier: FiniteCarrier, weights: Vec<ExtRational>) -> Result<Self> {
        FiniteMeasureSpace::new(SigmaAlgebra::power_set(carrier), weights)
    }

    pub fn carrier(&self) -> &FiniteCarrier {
        self.sigma.carrier()
    }

    pub fn len(&self) -> usize {
        self.carrier().len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier().is_empty()
    }

    pub fn sigma(&self) -> &SigmaAlgebra {
        &self.sigma
    }

    pub fn weights(&self) -> &[ExtRational] {
        &self.weights
    }

    pub fn weight(&self, pos: usize) -> &ExtRational {
        &self.weights[pos]
    }

    pub fn block_measures(&self) -> &[ExtRational] {
        &self.block_measures
    }

    /// `μE` for measurable `E`.
    pub fn measure(&self, set: Subset) -> Result<ExtRational> {
        if !self.sigma.contains(set) {
            return Err(Error::NotMeasurable);
        }
        Ok(set.positions().map(|p| self.weights[p].clone()).sum())
    }

    /// The largest measurable null set.
    pub fn null_set(&self) -> Subset {
        self.zero_set
    }

    pub fn null_ideal(&self) -> NullIdeal {
        NullIdeal { zero_set: self.zero_set }
    }

    pub fn is_negligible(&self, set: Subset) -> bool {
        set.is_subset_of(self.zero_set)
    }

    /// Blocks of positive measure, in block order. These are the atoms of
    /// the quotient measure algebra.
    pub fn nonnull_blocks(&self) -> Vec<Subset> {
        self.sigma
            .blocks()
            .iter()
            .zip(&self.block_measures)
            .filter(|(_, m)| !m.is_zero())
            .map(|(&b, _)| b)
            .collect()
    }

    /// Every measurable `A` with `μA > 0` such that each measurable `E ⊆ A`
    /// has `E` or `A∖E` negligible.
    ///
    /// Such an `A` is one block of positive measure together with any
    /// measurable null set; listed block by block.
    pub fn atoms(&self) -> Vec<Subset> {
        let null_blocks: Vec<Subset> = self
            .sigma
            .blocks()
            .iter()
            .zip(&self.block_measures)
            .filter(|(_, m)| m.is_zero())
            .map(|(&b, _)| b)
            .collect();
        let mut out = Vec::new();
        for block in self.nonnull_blocks() {
            for mask in 0..1u64 << null_blocks.len() {
                let extra = null_blocks
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .fold(Subset::EMPTY, |acc, (_, &b)| acc.union(b));
                out.push(block.union(extra));
            }
        }
        out
    }

    /// A real function given by its values is measurable iff it is constant
    /// on every block.
    pub fn is_measurable_fn<T: PartialEq>(&self, values: &[T]) -> bool {
        values.len() == self.len()
            && self.sigma.blocks().iter().all(|b| {
                let mut it = b.positions();
                match it.next() {
                    Some(first) => it.all(|p| values[p] == values[first]),
                    None => true,
                }
            })
    }

    pub fn layout(&self) -> Option<&DirectSumLayout> {
        self.layout.as_ref()
    }

    /// Tagged disjoint union with the summed measure. Points of summand `i`
    /// are relabelled to consecutive integers after those of summands
    /// `0..i`; the returned injections send each summand onto its slice.
    pub fn direct_sum(
        spaces: &[Arc<FiniteMeasureSpace>],
    ) -> Result<(Arc<FiniteMeasureSpace>, Vec<MeasurableMap>)> {
        let total: usize = spaces.iter().map(|s| s.len()).sum();
        let carrier = FiniteCarrier::range(0, total as i64)?;
        let mut offsets = Vec::with_capacity(spaces.len());
        let mut generators = Vec::new();
        let mut weights = Vec::with_capacity(total);
        let mut offset = 0usize;
        for space in spaces {
            offsets.push(offset);
            generators.extend(space.sigma.blocks().iter().map(|b| Subset(b.0 << offset)));
            weights.extend(space.weights.iter().cloned());
            offset += space.len();
        }
        let sigma = SigmaAlgebra::generate(carrier, &generators);
        let mut sum = FiniteMeasureSpace::new(sigma, weights)?;
        sum.layout = Some(DirectSumLayout { parts: spaces.to_vec(), offsets: offsets.clone() });
        let sum = Arc::new(sum);
        let injections = spaces
            .iter()
            .zip(&offsets)
            .map(|(space, &off)| {
                let images = (0..space.len()).map(|k| (off + k) as i64).collect::<Vec<_>>();
                MeasurableMap::new(space.clone(), sum.clone(), &images)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((sum, injections))
    }
}

/// Structure flags of a map between measure spaces. Each flag implies the
/// previous one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct MapFlags {
    pub is_measurable: bool,
    pub is_nonsingular: bool,
    pub is_imp: bool,
}

/// A total function between the carriers of two measure spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurableMap {
    source: Arc<FiniteMeasureSpace>,
    target: Arc<FiniteMeasureSpace>,
    images: Vec<usize>,
    flags: MapFlags,
}

impl MeasurableMap {
    /// `images[k]` is the label of the image of the `k`-th source point.
    pub fn new(
        source: Arc<FiniteMeasureSpace>,
        target: Arc<FiniteMeasureSpace>,
        images: &[i64],
    ) -> Result<Self> {
        if images.len() < source.len() {
            return Err(Error::MapNotTotal(source.carrier().label(images.len())));
        }
        if images.len() > source.len() {
            return Err(Error::WeightMismatch { expected: source.len(), got: images.len() });
        }
        let images = images
            .iter()
            .map(|&l| target.carrier().position(l).ok_or(Error::UnknownPoint(l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_positions(source, target, images))
    }

    /// Builds the map from a label function; `None` marks an undefined point.
    pub fn from_fn(
        source: Arc<FiniteMeasureSpace>,
        target: Arc<FiniteMeasureSpace>,
        f: impl Fn(i64) -> Option<i64>,
    ) -> Result<Self> {
        let images = source
            .carrier()
            .labels()
            .iter()
            .map(|&x| f(x).ok_or(Error::MapNotTotal(x)))
            .collect::<Result<Vec<_>>>()?;
        MeasurableMap::new(source, target, &images)
    }

    pub(crate) fn from_positions(
        source: Arc<FiniteMeasureSpace>,
        target: Arc<FiniteMeasureSpace>,
        images: Vec<usize>,
    ) -> Self {
        let flags = compute_flags(&source, &target, &images);
        MeasurableMap { source, target, images, flags }
    }

    pub fn identity(space: Arc<FiniteMeasureSpace>) -> Self {
        let images = (0..space.len()).collect();
        Self::from_positions(space.clone(), space, images)
    }

    /// `psi ∘ phi`.
    pub fn compose(psi: &MeasurableMap, phi: &MeasurableMap) -> Result<Self> {
        if !same_space(&phi.target, &psi.source) {
            return Err(Error::SpaceMismatch);
        }
        let images = phi.images.iter().map(|&y| psi.images[y]).collect();
        Ok(Self::from_positions(phi.source.clone(), psi.target.clone(), images))
    }

    pub fn source(&self) -> &Arc<FiniteMeasureSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteMeasureSpace> {
        &self.target
    }

    pub fn flags(&self) -> MapFlags {
        self.flags
    }

    /// Target position of the image of source position `pos`.
    pub fn image(&self, pos: usize) -> usize {
        self.images[pos]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `φ⁻¹[F]`.
    pub fn preimage(&self, set: Subset) -> Subset {
        Subset::from_positions(
            self.images.iter().enumerate().filter(|(_, &y)| set.contains(y)).map(|(x, _)| x),
        )
    }
}

pub fn same_space(a: &Arc<FiniteMeasureSpace>, b: &Arc<FiniteMeasureSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Flags of `map`, re-derived from its data.
pub fn classify_map(map: &MeasurableMap) -> MapFlags {
    compute_flags(&map.source, &map.target, &map.images)
}

// Σ_target is generated by its blocks and preimages commute with unions, so
// each condition only needs checking on target blocks.
fn compute_flags(source: &FiniteMeasureSpace, target: &FiniteMeasureSpace, images: &[usize]) -> MapFlags {
    let preimage = |set: Subset| {
        Subset::from_positions(images.iter().enumerate().filter(|(_, &y)| set.contains(y)).map(|(x, _)| x))
    };
    let blocks = target.sigma.blocks();
    let is_measurable = blocks.iter().all(|&b| source.sigma.contains(preimage(b)));
    let is_nonsingular = is_measurable
        && blocks
            .iter()
            .zip(target.block_measures())
            .filter(|(_, m)| m.is_zero())
            .all(|(&b, _)| source.is_negligible(preimage(b)));
    let is_imp = is_nonsingular
        && blocks
            .iter()
            .zip(target.block_measures())
            .all(|(&b, m)| source.measure(preimage(b)).ok().as_ref() == Some(m));
    MapFlags { is_measurable, is_nonsingular, is_imp }
}
