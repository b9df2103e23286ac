//! Sampled signals on the integer grid: segments on half-open intervals,
//! `(h, φ)` arrows with their residuals, redundancy detection and the
//! functor graph that collects them.

mod arrow;
mod detect;
mod graph;
mod report;
mod segment;

pub use arrow::{compose, delta, transfer, within_tol, ArrowKind, IndexMap, SegmentArrow};
pub use detect::{detect_affine, detect_amp_affine, detect_translation, DEFAULT_STRIDES};
pub use graph::{verify_functor_laws, FunctorGraph, FunctorLawReport, GraphArrow, GraphObject, LawCount};
pub use report::{prototype_demo, redundancy_report, DetectorConfig, PrototypeDemo, RedundancyReport, SegmentEntry};
pub use segment::{fixed_breakpoints, rejoin, segment_signal, Interval, Segment};
