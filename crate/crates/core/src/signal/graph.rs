use num::One;

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::arrow::{compose, delta, transfer, IndexMap, SegmentArrow};
use super::segment::Segment;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphObject {
    pub label: String,
    pub segment: Segment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphArrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub arrow: SegmentArrow,
    /// Whether the arrow is claimed to be invertible in the graph.
    pub iso: bool,
}

/// Segments as objects and named `(h, φ)` arrows between them. Identities
/// and composites are computed rather than stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctorGraph {
    objects: Vec<GraphObject>,
    arrows: Vec<GraphArrow>,
}

impl FunctorGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, label: impl Into<String>, segment: Segment) -> usize {
        self.objects.push(GraphObject { label: label.into(), segment });
        self.objects.len() - 1
    }

    /// Adds the arrow `source → target` with the given `(c, φ)`, fitting its
    /// residual against the target segment.
    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        source: usize,
        target: usize,
        map: IndexMap,
        scale: Rational,
        iso: bool,
    ) -> Result<usize> {
        let (f, g) = (&self.objects[source].segment, &self.objects[target].segment);
        let arrow = SegmentArrow::fit(f, g, map, scale)?;
        self.arrows.push(GraphArrow { name: name.into(), source, target, arrow, iso });
        Ok(self.arrows.len() - 1)
    }

    /// Adds a prebuilt arrow. Its intervals must match the two objects.
    pub fn push_arrow(&mut self, name: impl Into<String>, source: usize, target: usize, arrow: SegmentArrow, iso: bool) -> Result<usize> {
        if arrow.source() != self.objects[source].segment.interval()
            || arrow.target() != self.objects[target].segment.interval()
        {
            return Err(Error::IntervalMismatch);
        }
        self.arrows.push(GraphArrow { name: name.into(), source, target, arrow, iso });
        Ok(self.arrows.len() - 1)
    }

    pub fn objects(&self) -> &[GraphObject] {
        &self.objects
    }

    pub fn arrows(&self) -> &[GraphArrow] {
        &self.arrows
    }

    /// Consecutive segments joined by predecessor translations `aₖ`, and
    /// optionally their inverses.
    pub fn predecessor_chain(segments: &[Segment], with_inverses: bool) -> Result<Self> {
        let mut graph = FunctorGraph::new();
        for (k, s) in segments.iter().enumerate() {
            graph.add_object(format!("f{}", k + 1), s.clone());
        }
        for k in 1..segments.len() {
            let (f, g) = (&segments[k - 1], &segments[k]);
            let map = IndexMap::fitting(1, f.interval(), g.interval()).ok_or(Error::IntervalMismatch)?;
            let a = graph.add_arrow(format!("a{k}"), k - 1, k, map, Rational::one(), with_inverses)?;
            if with_inverses {
                let inv = graph.arrows[a].arrow.inverse(f, g).expect("translations invert");
                graph.push_arrow(format!("a{k}^-1"), k, k - 1, inv, true)?;
            }
        }
        Ok(graph)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawCount {
    pub checked: usize,
    pub failed: Vec<String>,
}

impl LawCount {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctorLawReport {
    pub reconstruction: LawCount,
    pub identity: LawCount,
    pub associativity: LawCount,
    pub groupoid: LawCount,
    /// Pairs of distinct arrows carrying identical `(φ, c, Δ)` data.
    pub faithfulness_warnings: Vec<(String, String)>,
}

impl FunctorLawReport {
    pub fn category_ok(&self) -> bool {
        self.reconstruction.passed() && self.identity.passed() && self.associativity.passed()
    }

    pub fn groupoid_ok(&self) -> bool {
        self.category_ok() && self.groupoid.passed()
    }
}

fn reconstructs(arrow: &SegmentArrow, f: &Segment, g: &Segment) -> bool {
    match transfer(arrow, f).and_then(|p| delta(g, &p)) {
        Ok(d) => d == arrow.residual(),
        Err(_) => false,
    }
}

pub fn verify_functor_laws(graph: &FunctorGraph) -> FunctorLawReport {
    let mut report = FunctorLawReport::default();
    let seg = |i: usize| &graph.objects[i].segment;
    let arrows = &graph.arrows;

    for a in arrows {
        report.reconstruction.record(reconstructs(&a.arrow, seg(a.source), seg(a.target)), || a.name.clone());
        let left = compose(&SegmentArrow::identity(a.arrow.target()), &a.arrow);
        let right = compose(&a.arrow, &SegmentArrow::identity(a.arrow.source()));
        report.identity.record(left.as_ref() == Ok(&a.arrow) && right.as_ref() == Ok(&a.arrow), || a.name.clone());
    }

    for a in arrows {
        for b in arrows.iter().filter(|b| b.source == a.target) {
            let ba = compose(&b.arrow, &a.arrow);
            let ok = ba.as_ref().is_ok_and(|x| reconstructs(x, seg(a.source), seg(b.target)));
            report.reconstruction.record(ok, || format!("{}.{}", b.name, a.name));
            for c in arrows.iter().filter(|c| c.source == b.target) {
                let lhs = ba.as_ref().ok().and_then(|ba| compose(&c.arrow, ba).ok());
                let rhs = compose(&c.arrow, &b.arrow).ok().and_then(|cb| compose(&cb, &a.arrow).ok());
                report.associativity.record(lhs.is_some() && lhs == rhs, || format!("{}.{}.{}", c.name, b.name, a.name));
            }
        }
    }

    for a in arrows.iter().filter(|a| a.iso) {
        let id_src = SegmentArrow::identity(a.arrow.source());
        let id_tgt = SegmentArrow::identity(a.arrow.target());
        let has_inverse = arrows.iter().any(|b| {
            b.source == a.target
                && b.target == a.source
                && compose(&b.arrow, &a.arrow).is_ok_and(|x| x == id_src)
                && compose(&a.arrow, &b.arrow).is_ok_and(|x| x == id_tgt)
        });
        report.groupoid.record(has_inverse, || a.name.clone());
    }

    for (i, a) in arrows.iter().enumerate() {
        for b in &arrows[i + 1..] {
            if a.name != b.name && a.source == b.source && a.target == b.target && a.arrow == b.arrow {
                report.faithfulness_warnings.push((a.name.clone(), b.name.clone()));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::signal::segment::segment_signal;

    fn prototype() -> Vec<Segment> {
        let f = Segment::from_ints(1, &[1, 2, 3, 4, 5]).unwrap();
        segment_signal(&f, &[2, 3, 4, 5]).unwrap()
    }

    #[test]
    fn prototype_graph_is_a_groupoid() {
        let graph = FunctorGraph::predecessor_chain(&prototype(), true).unwrap();
        assert_eq!(graph.arrows().len(), 8);
        let report = verify_functor_laws(&graph);
        assert!(report.category_ok(), "{report:?}");
        assert!(report.groupoid_ok(), "{report:?}");
        assert!(report.associativity.checked > 0);
        for a in graph.arrows().iter().filter(|a| !a.name.ends_with("^-1")) {
            assert_eq!(a.arrow.residual(), &[int(1)]);
        }
    }

    #[test]
    fn one_way_arrow_is_only_a_category() {
        let mut graph = FunctorGraph::predecessor_chain(&prototype(), false).unwrap();
        let last = graph.arrows.len() - 1;
        graph.arrows[last].iso = true;
        let report = verify_functor_laws(&graph);
        assert!(report.category_ok());
        assert!(!report.groupoid_ok());
        assert_eq!(report.groupoid.failed, vec!["a4".to_string()]);
    }

    #[test]
    fn parallel_duplicates_warn() {
        let segs = prototype();
        let mut graph = FunctorGraph::new();
        let x = graph.add_object("f1", segs[0].clone());
        let y = graph.add_object("f2", segs[1].clone());
        graph.add_arrow("p", x, y, IndexMap::translation(1), int(1), false).unwrap();
        graph.add_arrow("q", x, y, IndexMap::translation(1), int(1), false).unwrap();
        graph.add_arrow("r", x, y, IndexMap::translation(1), int(2), false).unwrap();
        let report = verify_functor_laws(&graph);
        assert_eq!(report.faithfulness_warnings, vec![("p".to_string(), "q".to_string())]);
    }

    #[test]
    fn tampered_residual_breaks_reconstruction() {
        let mut graph = FunctorGraph::predecessor_chain(&prototype(), false).unwrap();
        graph.arrows[0].arrow = graph.arrows[0].arrow.with_residual(vec![int(0)]).unwrap();
        assert!(!verify_functor_laws(&graph).category_ok());
    }
}
