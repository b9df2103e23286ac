//! Boolean algebras, measure algebras and Boolean homomorphisms.
//!
//! Every finite Boolean algebra is the power set of its atoms, so elements
//! are bitmasks over atom indices. The quotient `Σ/Σ∩𝒩` of a finite measure
//! space has one atom per block of positive measure; the canonical
//! representative of a class is the union of those blocks.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measure::{FiniteMeasureSpace, MeasurableMap, Subset};
use crate::rational::ExtRational;

/// An element of a finite Boolean algebra, as a bitmask over atoms.
pub type Element = Subset;

/// Above this many atoms, law checks switch from enumeration to the
/// structural test on atom images.
const EXHAUSTIVE_ATOMS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BooleanAlgebra {
    atoms: usize,
}

impl BooleanAlgebra {
    pub fn new(atoms: usize) -> Self {
        assert!(atoms <= 64, "at most 64 atoms");
        BooleanAlgebra { atoms }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms
    }

    pub fn zero(&self) -> Element {
        Subset::EMPTY
    }

    pub fn one(&self) -> Element {
        Subset::full(self.atoms)
    }

    pub fn atom(&self, k: usize) -> Element {
        Subset::singleton(k)
    }

    pub fn contains(&self, e: Element) -> bool {
        e.is_subset_of(self.one())
    }

    /// Ring addition, `a △ b`.
    pub fn add(&self, a: Element, b: Element) -> Element {
        a.symmetric_difference(b)
    }

    /// Ring multiplication, `a ∩ b`.
    pub fn mul(&self, a: Element, b: Element) -> Element {
        a.intersection(b)
    }

    pub fn join(&self, a: Element, b: Element) -> Element {
        a.union(b)
    }

    pub fn meet(&self, a: Element, b: Element) -> Element {
        a.intersection(b)
    }

    pub fn complement(&self, a: Element) -> Element {
        a.complement(self.atoms)
    }

    /// `a ⊆ b ⇔ a ∩ b = a`.
    pub fn le(&self, a: Element, b: Element) -> bool {
        self.mul(a, b) == a
    }

    pub fn sup<I: IntoIterator<Item = Element>>(&self, elems: I) -> Element {
        elems.into_iter().fold(self.zero(), |acc, e| acc.union(e))
    }

    pub fn inf<I: IntoIterator<Item = Element>>(&self, elems: I) -> Element {
        elems.into_iter().fold(self.one(), |acc, e| acc.intersection(e))
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        assert!(self.atoms <= 24, "too many elements to enumerate");
        (0..1u64 << self.atoms).map(Subset)
    }
}

/// `(𝔅, μ̄)`: a finite Boolean algebra with a strictly positive additive
/// measure, given by its values on atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureAlgebra {
    algebra: BooleanAlgebra,
    atom_measures: Vec<ExtRational>,
}

impl MeasureAlgebra {
    pub fn new(atom_measures: Vec<ExtRational>) -> Result<Self> {
        if atom_measures.is_empty() || atom_measures.iter().any(|m| m.is_zero()) {
            return Err(Error::DegenerateMeasure);
        }
        if atom_measures.iter().any(ExtRational::is_negative) {
            return Err(Error::NegativeWeight);
        }
        Ok(MeasureAlgebra { algebra: BooleanAlgebra::new(atom_measures.len()), atom_measures })
    }

    pub fn algebra(&self) -> BooleanAlgebra {
        self.algebra
    }

    pub fn atom_measures(&self) -> &[ExtRational] {
        &self.atom_measures
    }

    pub fn mu_bar(&self, e: Element) -> ExtRational {
        e.positions().map(|k| self.atom_measures[k].clone()).sum()
    }

    /// Largest element of the ideal `𝔅^f = {b : μ̄b < ∞}`.
    pub fn finite_part(&self) -> Element {
        Subset::from_positions(
            self.atom_measures.iter().enumerate().filter(|(_, m)| m.is_finite()).map(|(k, _)| k),
        )
    }

    pub fn in_finite_part(&self, e: Element) -> bool {
        e.is_subset_of(self.finite_part())
    }
}

/// The quotient map `E ↦ E•` from a space's σ-algebra onto its measure
/// algebra.
#[derive(Clone, Debug)]
pub struct Projection {
    space: Arc<FiniteMeasureSpace>,
    block_atoms: Vec<Option<usize>>,
    atom_blocks: Vec<usize>,
}

impl Projection {
    pub fn space(&self) -> &Arc<FiniteMeasureSpace> {
        &self.space
    }

    pub fn project(&self, set: Subset) -> Result<Element> {
        let mask = self.space.sigma().block_mask(set).ok_or(Error::NotMeasurable)?;
        Ok(Subset::from_positions(
            self.block_atoms
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .filter_map(|(_, a)| *a),
        ))
    }

    /// The canonical member of a class.
    pub fn representative(&self, e: Element) -> Subset {
        let blocks = self.space.sigma().blocks();
        e.positions().fold(Subset::EMPTY, |acc, a| acc.union(blocks[self.atom_blocks[a]]))
    }

    /// Block of the space that forms atom `k`.
    pub fn atom_block(&self, k: usize) -> Subset {
        self.space.sigma().blocks()[self.atom_blocks[k]]
    }

    /// Atom containing a point, or `None` for points in null blocks.
    pub fn atom_of_point(&self, pos: usize) -> Option<usize> {
        self.block_atoms[self.space.sigma().block_of(pos)]
    }

    /// The projection viewed as a map from the Boolean algebra of the
    /// σ-algebra (atoms = blocks) onto the quotient.
    pub fn as_hom(&self) -> BooleanHom {
        let source = BooleanAlgebra::new(self.block_atoms.len());
        let target = BooleanAlgebra::new(self.atom_blocks.len());
        let images = self
            .block_atoms
            .iter()
            .map(|a| a.map_or(Subset::EMPTY, Subset::singleton))
            .collect();
        BooleanHom::from_atom_images(source, target, images)
    }
}

/// Builds `(Σ/Σ∩𝒩, μ̄)` together with the projection `E ↦ E•`.
pub fn quotient_measure_algebra(
    space: &Arc<FiniteMeasureSpace>,
) -> Result<(MeasureAlgebra, Projection)> {
    let mut block_atoms = Vec::new();
    let mut atom_blocks = Vec::new();
    let mut measures = Vec::new();
    for (b, m) in space.block_measures().iter().enumerate() {
        if m.is_zero() {
            block_atoms.push(None);
        } else {
            block_atoms.push(Some(atom_blocks.len()));
            atom_blocks.push(b);
            measures.push(m.clone());
        }
    }
    let algebra = MeasureAlgebra::new(measures)?;
    Ok((algebra, Projection { space: space.clone(), block_atoms, atom_blocks }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum HomRepr {
    /// `a ↦ ⋃ images[k]` over atoms `k ⊆ a`; join-preserving by construction.
    Atoms(Vec<Element>),
    /// Explicit value for every source element.
    Table(Vec<Element>),
}

/// Structural flags of a map between Boolean algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomFlags {
    pub is_hom: bool,
    pub is_soc: bool,
    /// `None` when either side carries no measure.
    pub is_measure_preserving: Option<bool>,
}

/// A map between finite Boolean algebras together with its derived flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanHom {
    source: BooleanAlgebra,
    target: BooleanAlgebra,
    repr: HomRepr,
    measures: Option<(Vec<ExtRational>, Vec<ExtRational>)>,
    flags: HomFlags,
}

impl BooleanHom {
    /// The join-preserving map sending atom `k` to `images[k]`.
    pub fn from_atom_images(
        source: BooleanAlgebra,
        target: BooleanAlgebra,
        images: Vec<Element>,
    ) -> Self {
        assert_eq!(images.len(), source.atom_count());
        Self::build(source, target, HomRepr::Atoms(images), None)
    }

    /// An arbitrary map, tabulated over every source element.
    pub fn from_fn(
        source: BooleanAlgebra,
        target: BooleanAlgebra,
        f: impl Fn(Element) -> Element,
    ) -> Self {
        let table = source.elements().map(|e| f(e).intersection(target.one())).collect();
        Self::build(source, target, HomRepr::Table(table), None)
    }

    pub fn identity(algebra: BooleanAlgebra) -> Self {
        let images = (0..algebra.atom_count()).map(Subset::singleton).collect();
        Self::from_atom_images(algebra, algebra, images)
    }

    /// Attaches `μ̄` on both sides, enabling the measure-preservation flag.
    pub fn with_measures(self, source: &MeasureAlgebra, target: &MeasureAlgebra) -> Self {
        assert_eq!(source.algebra(), self.source);
        assert_eq!(target.algebra(), self.target);
        let measures = Some((source.atom_measures().to_vec(), target.atom_measures().to_vec()));
        Self::build(self.source, self.target, self.repr, measures)
    }

    fn build(
        source: BooleanAlgebra,
        target: BooleanAlgebra,
        repr: HomRepr,
        measures: Option<(Vec<ExtRational>, Vec<ExtRational>)>,
    ) -> Self {
        let mut hom = BooleanHom {
            source,
            target,
            repr,
            measures,
            flags: HomFlags { is_hom: false, is_soc: false, is_measure_preserving: None },
        };
        let report = check_hom_laws(&hom);
        hom.flags = HomFlags {
            is_hom: report.preserves_sym_diff && report.preserves_meet && report.preserves_unit,
            is_soc: report.preserves_chain_sups,
            is_measure_preserving: report.measure_preserving,
        };
        hom
    }

    pub fn source(&self) -> BooleanAlgebra {
        self.source
    }

    pub fn target(&self) -> BooleanAlgebra {
        self.target
    }

    pub fn flags(&self) -> HomFlags {
        self.flags
    }

    /// `μ̄` on the source atoms, when attached.
    pub fn source_measures(&self) -> Option<&[ExtRational]> {
        self.measures.as_ref().map(|(s, _)| s.as_slice())
    }

    pub fn target_measures(&self) -> Option<&[ExtRational]> {
        self.measures.as_ref().map(|(_, t)| t.as_slice())
    }

    pub fn apply(&self, e: Element) -> Element {
        match &self.repr {
            HomRepr::Atoms(images) => e
                .intersection(self.source.one())
                .positions()
                .fold(Subset::EMPTY, |acc, k| acc.union(images[k])),
            HomRepr::Table(table) => table[e.intersection(self.source.one()).0 as usize],
        }
    }

    /// Image of each source atom.
    pub fn atom_images(&self) -> Vec<Element> {
        (0..self.source.atom_count()).map(|k| self.apply(Subset::singleton(k))).collect()
    }

    /// `theta ∘ pi`.
    pub fn compose(theta: &BooleanHom, pi: &BooleanHom) -> Result<BooleanHom> {
        if pi.target != theta.source {
            return Err(Error::SpaceMismatch);
        }
        let repr = match (&theta.repr, &pi.repr) {
            (HomRepr::Atoms(_), HomRepr::Atoms(images)) => {
                HomRepr::Atoms(images.iter().map(|&e| theta.apply(e)).collect())
            }
            _ => HomRepr::Table(pi.source.elements().map(|e| theta.apply(pi.apply(e))).collect()),
        };
        let measures = match (&pi.measures, &theta.measures) {
            (Some((src, _)), Some((_, dst))) => Some((src.clone(), dst.clone())),
            _ => None,
        };
        Ok(Self::build(pi.source, theta.target, repr, measures))
    }

    /// Whether two maps agree on every element.
    pub fn same_action(&self, other: &BooleanHom) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        match (&self.repr, &other.repr) {
            (HomRepr::Atoms(a), HomRepr::Atoms(b)) => a == b,
            _ => self.source.elements().all(|e| self.apply(e) == other.apply(e)),
        }
    }
}

/// Outcome of [`check_hom_laws`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomLawReport {
    /// Whether every element (pair) was enumerated.
    pub exhaustive: bool,
    pub preserves_sym_diff: bool,
    pub preserves_meet: bool,
    pub preserves_unit: bool,
    pub preserves_joins: bool,
    pub preserves_chain_sups: bool,
    pub kernel_is_ideal: bool,
    pub injective: bool,
    pub surjective: bool,
    pub measure_preserving: Option<bool>,
    pub failures: Vec<String>,
}

impl HomLawReport {
    /// A sequentially order-continuous Boolean homomorphism.
    pub fn passes(&self) -> bool {
        self.preserves_sym_diff
            && self.preserves_meet
            && self.preserves_unit
            && self.preserves_joins
            && self.preserves_chain_sups
            && self.kernel_is_ideal
    }

    pub fn is_isomorphism(&self) -> bool {
        self.passes() && self.injective && self.surjective
    }
}

/// Checks the homomorphism laws of `pi`.
///
/// On a finite algebra the supremum of a chain is its largest member, so
/// preserving suprema of chains is the same as monotonicity; that is what
/// `preserves_chain_sups` tests.
pub fn check_hom_laws(pi: &BooleanHom) -> HomLawReport {
    if pi.source.atom_count() <= EXHAUSTIVE_ATOMS {
        exhaustive_report(pi)
    } else {
        structural_report(pi)
    }
}

fn exhaustive_report(pi: &BooleanHom) -> HomLawReport {
    let (s, t) = (pi.source, pi.target);
    let image: Vec<Element> = s.elements().map(|e| pi.apply(e)).collect();
    let at = |e: Element| image[e.0 as usize];
    let mut r = HomLawReport {
        exhaustive: true,
        preserves_sym_diff: true,
        preserves_meet: true,
        preserves_unit: at(s.one()) == t.one(),
        preserves_joins: at(s.zero()) == t.zero(),
        preserves_chain_sups: true,
        kernel_is_ideal: at(s.zero()) == t.zero(),
        ..Default::default()
    };
    if !r.preserves_unit {
        r.failures.push("unit not preserved".into());
    }
    for a in s.elements() {
        for b in s.elements() {
            if r.preserves_sym_diff && at(s.add(a, b)) != t.add(at(a), at(b)) {
                r.preserves_sym_diff = false;
                r.failures.push(format!("△ fails at {a:?}, {b:?}"));
            }
            if r.preserves_meet && at(s.mul(a, b)) != t.mul(at(a), at(b)) {
                r.preserves_meet = false;
                r.failures.push(format!("∩ fails at {a:?}, {b:?}"));
            }
            if r.preserves_joins && at(s.join(a, b)) != t.join(at(a), at(b)) {
                r.preserves_joins = false;
                r.failures.push(format!("∪ fails at {a:?}, {b:?}"));
            }
            if r.preserves_chain_sups && s.le(a, b) && !t.le(at(a), at(b)) {
                r.preserves_chain_sups = false;
                r.failures.push(format!("chain {a:?} ⊆ {b:?} not preserved"));
            }
            if r.kernel_is_ideal
                && at(a).is_empty()
                && ((s.le(b, a) && !at(b).is_empty()) || (at(b).is_empty() && !at(s.join(a, b)).is_empty()))
            {
                r.kernel_is_ideal = false;
                r.failures.push("kernel is not an ideal".into());
            }
        }
    }
    let mut sorted = image.clone();
    sorted.sort();
    sorted.dedup();
    r.injective = sorted.len() == image.len();
    r.surjective = sorted.len() as u128 == 1u128 << t.atom_count();
    r.measure_preserving = pi.measures.as_ref().map(|(ms, mt)| {
        s.elements().all(|e| mu(mt, at(e)) == mu(ms, e))
    });
    if r.measure_preserving == Some(false) {
        r.failures.push("measure not preserved".into());
    }
    r
}

// Valid for the join-preserving atom representation; tables of large
// algebras cannot be built in the first place.
fn structural_report(pi: &BooleanHom) -> HomLawReport {
    let (s, t) = (pi.source, pi.target);
    let images = pi.atom_images();
    let disjoint = images
        .iter()
        .enumerate()
        .all(|(i, a)| images[i + 1..].iter().all(|b| a.is_disjoint(*b)));
    let covers = t.sup(images.iter().copied()) == t.one();
    let mut r = HomLawReport {
        exhaustive: false,
        preserves_sym_diff: disjoint,
        preserves_meet: disjoint,
        preserves_unit: covers,
        preserves_joins: true,
        preserves_chain_sups: true,
        kernel_is_ideal: true,
        injective: disjoint && images.iter().all(|e| !e.is_empty()),
        surjective: disjoint && covers && images.iter().all(|e| e.len() == 1),
        measure_preserving: None,
        failures: Vec::new(),
    };
    if !disjoint {
        r.failures.push("atom images overlap".into());
    }
    if !covers {
        r.failures.push("unit not preserved".into());
    }
    r.measure_preserving = pi.measures.as_ref().map(|(ms, mt)| {
        disjoint && (0..s.atom_count()).all(|k| mu(mt, images[k]) == ms[k])
    });
    r
}

fn mu(atom_measures: &[ExtRational], e: Element) -> ExtRational {
    e.positions().map(|k| atom_measures[k].clone()).sum()
}

/// `π_φ : F• ↦ φ⁻¹[F]•`, from the measure algebra of `φ`'s target to that of
/// its source.
pub fn induced_hom(phi: &MeasurableMap) -> Result<BooleanHom> {
    if !phi.flags().is_nonsingular {
        return Err(Error::NotNonsingular);
    }
    let (target_alg, target_proj) = quotient_measure_algebra(phi.target())?;
    let (source_alg, source_proj) = quotient_measure_algebra(phi.source())?;
    let images = (0..target_alg.algebra().atom_count())
        .map(|k| source_proj.project(phi.preimage(target_proj.atom_block(k))))
        .collect::<Result<Vec<_>>>()?;
    Ok(BooleanHom::from_atom_images(target_alg.algebra(), source_alg.algebra(), images)
        .with_measures(&target_alg, &source_alg))
}
