use std::fmt::Write as _;

use num::Zero;

use crate::error::Result;
use crate::rational::Rational;

use super::arrow::{transfer, ArrowKind, SegmentArrow};
use super::detect::{detect_affine, detect_amp_affine, detect_translation, rank, DEFAULT_STRIDES};
use super::graph::{verify_functor_laws, FunctorGraph, FunctorLawReport};
use super::segment::{segment_signal, Segment};

#[derive(Clone, Debug, PartialEq)]
pub struct DetectorConfig {
    /// Enabled detectors, tried in the order translation, affine, amp-affine.
    pub detectors: Vec<ArrowKind>,
    pub strides: Vec<i64>,
    pub tol: f64,
    /// How many earlier segments to search; `None` searches all of them.
    pub lookback: Option<usize>,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            detectors: vec![ArrowKind::Translation, ArrowKind::Affine, ArrowKind::AmpAffine],
            strides: DEFAULT_STRIDES.to_vec(),
            tol: 0.0,
            lookback: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentEntry {
    pub index: usize,
    pub segment: Segment,
    /// Best arrow from an earlier segment, with that segment's index.
    pub best: Option<(usize, SegmentArrow)>,
    pub redundant: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RedundancyReport {
    pub config: DetectorConfig,
    pub entries: Vec<SegmentEntry>,
}

impl RedundancyReport {
    pub fn redundant_count(&self) -> usize {
        self.entries.iter().filter(|e| e.redundant).count()
    }

    /// Redundant segments over segments that have a predecessor.
    pub fn redundant_fraction(&self) -> f64 {
        let n = self.entries.len().saturating_sub(1);
        if n == 0 {
            0.0
        } else {
            self.redundant_count() as f64 / n as f64
        }
    }

    /// Plain-text key/value rendering, one block per segment.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.config.detectors.iter().map(|k| k.name()).collect();
        let _ = writeln!(out, "[summary]");
        let _ = writeln!(out, "segments = {}", self.entries.len());
        let _ = writeln!(out, "redundant = {}", self.redundant_count());
        let _ = writeln!(out, "redundant_fraction = {}", self.redundant_fraction());
        let _ = writeln!(out, "tol = {}", self.config.tol);
        let _ = writeln!(out, "detectors = {}", names.join(","));
        let _ = writeln!(out, "strides = {}", join(&self.config.strides));
        for e in &self.entries {
            let _ = writeln!(out);
            let _ = writeln!(out, "[segment.{}]", e.index);
            let _ = writeln!(out, "interval = {}", e.segment.interval());
            let Some((src, a)) = &e.best else {
                let _ = writeln!(out, "source = none");
                continue;
            };
            let _ = writeln!(out, "source = {src}");
            let _ = writeln!(out, "kind = {}", a.kind());
            let _ = writeln!(out, "label = {}", if e.redundant { "observed isomorphism" } else { "best candidate" });
            let _ = writeln!(out, "stride = {}", a.map().stride);
            let _ = writeln!(out, "offset = {}", a.map().offset);
            let _ = writeln!(out, "scale = {}", a.scale());
            let _ = writeln!(out, "target_weight = {}", a.map().target_weight());
            let _ = writeln!(out, "residual = {}", join(a.residual()));
            let _ = writeln!(out, "residual_norm = {}", a.residual_norm());
            let _ = writeln!(out, "redundant = {}", e.redundant);
        }
        out
    }
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn detect(kind: ArrowKind, f: &Segment, g: &Segment, config: &DetectorConfig, tol: f64) -> Option<SegmentArrow> {
    match kind {
        ArrowKind::Translation => detect_translation(f, g, tol),
        ArrowKind::Affine => detect_affine(f, g, &config.strides, tol),
        ArrowKind::AmpAffine => detect_amp_affine(f, g, &config.strides, tol),
    }
}

/// Best arrow of one detector into `segments[k]` over the searched sources.
fn best_from(kind: ArrowKind, segments: &[Segment], k: usize, config: &DetectorConfig, tol: f64) -> Option<(usize, SegmentArrow)> {
    let first = config.lookback.map_or(0, |n| k.saturating_sub(n));
    (first..k)
        .filter_map(|j| detect(kind, &segments[j], &segments[k], config, tol).map(|a| (j, a)))
        .min_by_key(sourced_rank)
}

/// The tie-break across sources: the earlier source wins before the sign of
/// `S` is consulted.
fn sourced_rank((j, a): &(usize, SegmentArrow)) -> (Rational, u64, u64, usize, i64) {
    let (norm, s, t, stride) = rank(a);
    (norm, s, t, *j, stride)
}

pub fn redundancy_report(signal: &Segment, breakpoints: &[i64], config: &DetectorConfig) -> Result<RedundancyReport> {
    let segments = segment_signal(signal, breakpoints)?;
    let mut order = config.detectors.clone();
    order.sort();
    order.dedup();
    let mut entries = Vec::with_capacity(segments.len());
    for k in 0..segments.len() {
        let accepted = order.iter().find_map(|&kind| best_from(kind, &segments, k, config, config.tol));
        let (best, redundant) = match accepted {
            Some(hit) => (Some(hit), true),
            None => {
                let fallback = order
                    .iter()
                    .filter_map(|&kind| best_from(kind, &segments, k, config, f64::INFINITY))
                    .min_by_key(sourced_rank);
                (fallback, false)
            }
        };
        entries.push(SegmentEntry { index: k, segment: segments[k].clone(), best, redundant });
    }
    Ok(RedundancyReport { config: config.clone(), entries })
}

/// The worked example: unit segments of a sequence, each predicted by its
/// predecessor.
#[derive(Clone, Debug, PartialEq)]
pub struct PrototypeDemo {
    pub segments: Vec<Segment>,
    pub seed: Rational,
    pub deltas: Vec<Rational>,
    /// `Δₖ₊₁ − transfer(Δₖ)` along the chain.
    pub second_deltas: Vec<Rational>,
    pub graph: FunctorGraph,
    pub laws: FunctorLawReport,
}

pub fn prototype_demo(samples: &[i64], origin: i64) -> Result<PrototypeDemo> {
    let signal = Segment::from_ints(origin, samples)?;
    let cuts: Vec<i64> = (origin + 1..origin + samples.len() as i64).collect();
    let segments = segment_signal(&signal, &cuts)?;
    let graph = FunctorGraph::predecessor_chain(&segments, true)?;
    let forward: Vec<&SegmentArrow> =
        graph.arrows().iter().filter(|a| a.target == a.source + 1).map(|a| &a.arrow).collect();
    let deltas: Vec<Rational> = forward.iter().map(|a| a.residual()[0].clone()).collect();
    let mut second_deltas = Vec::new();
    for w in forward.windows(2) {
        let carried = transfer(w[1], &Segment::new(w[0].target().start, w[0].residual().to_vec())?)?;
        second_deltas.push(&w[1].residual()[0] - &carried.samples()[0]);
    }
    let laws = verify_functor_laws(&graph);
    Ok(PrototypeDemo {
        seed: segments[0].samples()[0].clone(),
        segments,
        deltas,
        second_deltas,
        graph,
        laws,
    })
}

impl PrototypeDemo {
    pub fn second_deltas_vanish(&self) -> bool {
        self.second_deltas.iter().all(Zero::is_zero)
    }
}
