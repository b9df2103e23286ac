//! Lossless differential codec. The signal is cut into segments; the first
//! is stored raw and every later one as an arrow `(c, φ)` into already
//! decoded samples plus its residual `Δ`.
//!
//! Samples are integers. A non-unit scale predicts `⌊c·x + ½⌋`, so residuals
//! stay integral and decoding is exact.

mod container;
mod csv;
mod metrics;
mod pgm;

use std::fmt;
use std::str::FromStr;

use num::integer::div_floor;

use crate::signal::{ArrowKind, IndexMap, Interval, DEFAULT_STRIDES};

pub use container::{read_container, write_container, MAGIC, VERSION};
pub use csv::{read_csv, write_csv, CsvSignal};
pub use metrics::{entropy, metrics, Metrics};
pub use pgm::{read_pgm, write_pgm, PgmImage};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("signal has no samples")]
    EmptySignal,
    #[error("corrupt container: {0}")]
    CorruptContainer(String),
    #[error("records do not follow the {0} policy")]
    PolicyMismatch(&'static str),
    #[error("sample {0} is not an integer")]
    NonIntegerSample(usize),
    #[error("arithmetic overflow at sample {0}")]
    Overflow(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0}")]
    Format(String),
}

pub type CodecResult<T> = std::result::Result<T, CodecError>;

fn corrupt(msg: impl Into<String>) -> CodecError {
    CodecError::CorruptContainer(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Every segment is a translated copy of its predecessor.
    Predecessor,
    /// Every segment takes the best detected arrow from an earlier one.
    Detected,
}

impl Policy {
    pub fn id(self) -> u8 {
        match self {
            Policy::Predecessor => 0,
            Policy::Detected => 1,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0 => Some(Policy::Predecessor),
            1 => Some(Policy::Detected),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Policy::Predecessor => "predecessor",
            Policy::Detected => "detected",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = CodecError;

    fn from_str(s: &str) -> CodecResult<Self> {
        match s {
            "predecessor" => Ok(Policy::Predecessor),
            "detected" => Ok(Policy::Detected),
            _ => Err(CodecError::Format(format!("unknown policy `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// A sequence whose first sample sits at index `origin`.
    Line { len: usize, origin: i64 },
    /// A row-major image; flat index `r·cols + c`.
    Grid { rows: usize, cols: usize },
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::Line { len, .. } => len,
            Shape::Grid { rows, cols } => rows * cols,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn origin(&self) -> i64 {
        match *self {
            Shape::Line { origin, .. } => origin,
            Shape::Grid { .. } => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSignal {
    shape: Shape,
    samples: Vec<i64>,
}

impl RawSignal {
    pub fn line(origin: i64, samples: Vec<i64>) -> CodecResult<Self> {
        if samples.is_empty() {
            return Err(CodecError::EmptySignal);
        }
        Ok(RawSignal { shape: Shape::Line { len: samples.len(), origin }, samples })
    }

    pub fn grid(rows: usize, cols: usize, pixels: Vec<i64>) -> CodecResult<Self> {
        if pixels.is_empty() {
            return Err(CodecError::EmptySignal);
        }
        if rows.checked_mul(cols) != Some(pixels.len()) {
            return Err(CodecError::ShapeMismatch(format!("{rows}x{cols} image with {} pixels", pixels.len())));
        }
        Ok(RawSignal { shape: Shape::Grid { rows, cols }, samples: pixels })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn samples(&self) -> &[i64] {
        &self.samples
    }
}

/// One coded segment: the arrow into earlier samples and the residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub kind: ArrowKind,
    pub map: IndexMap,
    /// `c = num/den` with `den > 0`.
    pub scale: (i64, i64),
    pub delta: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedSignal {
    pub shape: Shape,
    pub policy: Policy,
    pub seed: Vec<i64>,
    pub records: Vec<Record>,
}

impl EncodedSignal {
    /// All residuals in record order; the seed is not included.
    pub fn delta_stream(&self) -> impl Iterator<Item = i64> + '_ {
        self.records.iter().flat_map(|r| r.delta.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncodeOptions {
    pub policy: Policy,
    /// Segment width for sequences. Images use pixels (predecessor) or rows
    /// (detected).
    pub segment_len: usize,
    pub detectors: Vec<ArrowKind>,
    pub strides: Vec<i64>,
    /// Earlier segments searched by the detected policy.
    pub lookback: usize,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            policy: Policy::Predecessor,
            segment_len: 1,
            detectors: vec![ArrowKind::Translation, ArrowKind::Affine, ArrowKind::AmpAffine],
            strides: DEFAULT_STRIDES.to_vec(),
            lookback: 32,
        }
    }
}

impl EncodeOptions {
    pub fn detected() -> Self {
        EncodeOptions { policy: Policy::Detected, ..Self::default() }
    }
}

/// `(start, len)` of each segment in flat positions.
fn segmentation(shape: Shape, policy: Policy, segment_len: usize) -> Vec<(usize, usize)> {
    let n = shape.len();
    let width = match (shape, policy) {
        (Shape::Line { .. }, _) => segment_len.max(1),
        (Shape::Grid { .. }, Policy::Predecessor) => 1,
        (Shape::Grid { cols, .. }, Policy::Detected) => cols,
    };
    (0..n).step_by(width).map(|s| (s, width.min(n - s))).collect()
}

/// The fixed arrow of the predecessor policy for the segment at `start`.
fn predecessor_map(shape: Shape, start: usize, prev_len: usize) -> IndexMap {
    match shape {
        Shape::Line { .. } => IndexMap::translation(prev_len as i64),
        Shape::Grid { cols, .. } if start.is_multiple_of(cols) => IndexMap::translation(cols as i64),
        Shape::Grid { .. } => IndexMap::translation(1),
    }
}

fn round_scaled(x: i64, (num, den): (i64, i64)) -> Option<i64> {
    if den == 1 {
        return num.checked_mul(x);
    }
    let (x, num, den) = (i128::from(x), i128::from(num), i128::from(den));
    i64::try_from(div_floor(2 * num * x + den, 2 * den)).ok()
}

/// Prediction for positions `start..start+len` from positions before
/// `start`, or `None` if the arrow reaches outside them.
fn predict(samples: &[i64], origin: i64, start: usize, len: usize, map: IndexMap, scale: (i64, i64)) -> Option<Vec<i64>> {
    (start..start + len)
        .map(|p| {
            let j = i128::from(origin) + p as i128;
            let i = div_floor(j - i128::from(map.offset), i128::from(map.stride));
            let q = usize::try_from(i - i128::from(origin)).ok().filter(|&q| q < start)?;
            round_scaled(samples[q], scale)
        })
        .collect()
}

/// Residuals wrap modulo 2⁶⁴, so every i64 signal encodes.
fn residual(samples: &[i64], start: usize, predicted: &[i64]) -> Vec<i64> {
    predicted.iter().enumerate().map(|(k, p)| samples[start + k].wrapping_sub(*p)).collect()
}

struct Candidate {
    key: (u128, u64, u64, usize, ArrowKind),
    record: Record,
}

fn squared_norm(delta: &[i64]) -> u128 {
    delta.iter().fold(0u128, |acc, &d| acc.saturating_add(i128::from(d).unsigned_abs().pow(2)))
}

fn candidate(samples: &[i64], origin: i64, src: usize, start: usize, len: usize, map: IndexMap, scale: (i64, i64)) -> Option<Candidate> {
    let predicted = predict(samples, origin, start, len, map, scale)?;
    let delta = residual(samples, start, &predicted);
    let kind = ArrowKind::classify(&map, &crate::rational::rat(scale.0, scale.1));
    let key = (squared_norm(&delta), map.stride.unsigned_abs(), map.offset.unsigned_abs(), src, kind);
    Some(Candidate { key, record: Record { kind, map, scale, delta } })
}

/// Least-squares scale of `target` against the unscaled prediction, reduced
/// to lowest terms; `None` if it is zero or does not fit.
fn fit_scale(samples: &[i64], origin: i64, start: usize, len: usize, map: IndexMap) -> Option<(i64, i64)> {
    let p = predict(samples, origin, start, len, map, (1, 1))?;
    let mut pg = 0i128;
    let mut pp = 0i128;
    for (k, x) in p.iter().enumerate() {
        pg = pg.checked_add(i128::from(*x) * i128::from(samples[start + k]))?;
        pp = pp.checked_add(i128::from(*x) * i128::from(*x))?;
    }
    if pp == 0 || pg == 0 {
        return None;
    }
    let g = num::integer::gcd(pg, pp);
    Some((i64::try_from(pg / g).ok()?, i64::try_from(pp / g).ok()?))
}

fn detect_record(
    samples: &[i64],
    origin: i64,
    segs: &[(usize, usize)],
    k: usize,
    shape: Shape,
    options: &EncodeOptions,
) -> Record {
    let (start, len) = segs[k];
    let abs = |(s, l): (usize, usize)| Interval { start: origin + s as i64, end: origin + (s + l) as i64 };
    let mut best: Option<Candidate> = None;
    let mut offer = |c: Option<Candidate>| {
        if let Some(c) = c {
            if best.as_ref().is_none_or(|b| c.key < b.key) {
                best = Some(c);
            }
        }
    };
    offer(candidate(samples, origin, k - 1, start, len, predecessor_map(shape, start, segs[k - 1].1), (1, 1)));
    for j in k.saturating_sub(options.lookback.max(1))..k {
        for &kind in &options.detectors {
            let strides: &[i64] = if kind == ArrowKind::Translation { &[1] } else { &options.strides };
            for &s in strides {
                let Some(map) = IndexMap::fitting(s, abs(segs[j]), abs(segs[k])) else { continue };
                let scale = match kind {
                    ArrowKind::AmpAffine => match fit_scale(samples, origin, start, len, map) {
                        Some(c) => c,
                        None => continue,
                    },
                    _ => (1, 1),
                };
                offer(candidate(samples, origin, j, start, len, map, scale));
            }
        }
    }
    best.expect("the predecessor candidate always predicts").record
}

pub fn encode(signal: &RawSignal, options: &EncodeOptions) -> CodecResult<EncodedSignal> {
    let shape = signal.shape;
    let samples = &signal.samples;
    let origin = shape.origin();
    let segs = segmentation(shape, options.policy, options.segment_len);
    let (_, seed_len) = segs[0];
    let mut records = Vec::with_capacity(segs.len() - 1);
    for k in 1..segs.len() {
        let (start, len) = segs[k];
        let record = match options.policy {
            Policy::Predecessor => {
                let map = predecessor_map(shape, start, segs[k - 1].1);
                let predicted = predict(samples, origin, start, len, map, (1, 1)).expect("predecessor is decoded");
                Record { kind: ArrowKind::Translation, map, scale: (1, 1), delta: residual(samples, start, &predicted) }
            }
            Policy::Detected => detect_record(samples, origin, &segs, k, shape, options),
        };
        records.push(record);
    }
    Ok(EncodedSignal { shape, policy: options.policy, seed: samples[..seed_len].to_vec(), records })
}

fn check_predecessor(enc: &EncodedSignal) -> CodecResult<()> {
    let mismatch = Err(CodecError::PolicyMismatch("predecessor"));
    let width = match enc.shape {
        Shape::Line { .. } => enc.seed.len(),
        Shape::Grid { .. } => 1,
    };
    if enc.seed.len() != width {
        return mismatch;
    }
    let mut start = enc.seed.len();
    let mut prev = enc.seed.len();
    for (k, r) in enc.records.iter().enumerate() {
        let last = k + 1 == enc.records.len();
        let fits = if last { r.delta.len() <= width } else { r.delta.len() == width };
        if !fits || r.kind != ArrowKind::Translation || r.scale != (1, 1) || r.map != predecessor_map(enc.shape, start, prev) {
            return mismatch;
        }
        start += r.delta.len();
        prev = r.delta.len();
    }
    Ok(())
}

pub fn decode(enc: &EncodedSignal) -> CodecResult<RawSignal> {
    let n = enc.shape.len();
    let total = enc.records.iter().try_fold(enc.seed.len(), |acc, r| acc.checked_add(r.delta.len()));
    if enc.seed.is_empty() || total != Some(n) {
        return Err(corrupt("segment lengths do not add up to the header dimensions"));
    }
    if enc.records.iter().any(|r| r.delta.is_empty()) {
        return Err(corrupt("empty record"));
    }
    if enc.policy == Policy::Predecessor {
        check_predecessor(enc)?;
    }
    let origin = enc.shape.origin();
    let mut samples = Vec::with_capacity(n);
    samples.extend_from_slice(&enc.seed);
    for r in &enc.records {
        let (num, den) = r.scale;
        if den <= 0 || num == 0 || r.map.stride == 0 {
            return Err(corrupt("invalid arrow"));
        }
        if r.kind != ArrowKind::classify(&r.map, &crate::rational::rat(num, den)) {
            return Err(corrupt("arrow kind does not match its data"));
        }
        let start = samples.len();
        let predicted = predict(&samples, origin, start, r.delta.len(), r.map, r.scale)
            .ok_or_else(|| corrupt(format!("arrow for position {start} reaches undecoded samples or overflows")))?;
        samples.extend(predicted.iter().zip(&r.delta).map(|(p, d)| p.wrapping_add(*d)));
    }
    Ok(RawSignal { shape: enc.shape, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[i64]) -> RawSignal {
        RawSignal::line(1, v.to_vec()).unwrap()
    }

    #[test]
    fn staircase_encodes_to_unit_steps() {
        let enc = encode(&line(&[1, 2, 3, 4, 5]), &EncodeOptions::default()).unwrap();
        assert_eq!(enc.seed, vec![1]);
        assert_eq!(enc.delta_stream().collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        assert_eq!(enc.records.len(), 4);
        assert_eq!(decode(&enc).unwrap(), line(&[1, 2, 3, 4, 5]));
    }

    #[test]
    fn constant_image_has_zero_deltas() {
        let img = RawSignal::grid(3, 3, vec![7; 9]).unwrap();
        let enc = encode(&img, &EncodeOptions::default()).unwrap();
        assert_eq!(enc.seed, vec![7]);
        assert!(enc.delta_stream().all(|d| d == 0));
        assert_eq!(decode(&enc).unwrap(), img);
    }

    #[test]
    fn two_region_image_changes_only_at_the_boundary() {
        let pixels: Vec<i64> = (0..16).map(|p| if p % 4 < 2 { 10 } else { 20 }).collect();
        let img = RawSignal::grid(4, 4, pixels).unwrap();
        let enc = encode(&img, &EncodeOptions::default()).unwrap();
        let nonzero: Vec<(usize, i64)> =
            enc.delta_stream().enumerate().filter(|(_, d)| *d != 0).map(|(k, d)| (k + 1, d)).collect();
        assert_eq!(nonzero, vec![(2, 10), (6, 10), (10, 10), (14, 10)]);
        assert_eq!(decode(&enc).unwrap(), img);
    }

    #[test]
    fn hand_built_container_is_a_prefix_sum() {
        let enc = EncodedSignal {
            shape: Shape::Line { len: 3, origin: 0 },
            policy: Policy::Predecessor,
            seed: vec![0],
            records: [1, -1]
                .into_iter()
                .map(|d| Record { kind: ArrowKind::Translation, map: IndexMap::translation(1), scale: (1, 1), delta: vec![d] })
                .collect(),
        };
        assert_eq!(decode(&enc).unwrap().samples(), &[0, 1, 0]);
    }

    #[test]
    fn predecessor_policy_is_enforced() {
        let mut enc = encode(&line(&[1, 2, 3]), &EncodeOptions::default()).unwrap();
        enc.records[1].map = IndexMap::translation(2);
        assert_eq!(decode(&enc).unwrap_err(), CodecError::PolicyMismatch("predecessor"));
        enc.policy = Policy::Detected;
        assert_eq!(decode(&enc).unwrap().samples(), &[1, 2, 2]);
    }

    #[test]
    fn arrows_into_the_future_are_corrupt() {
        let mut enc = encode(&line(&[1, 2, 3]), &EncodeOptions::detected()).unwrap();
        enc.records[0].map = IndexMap::translation(-1);
        enc.records[0].kind = ArrowKind::Translation;
        assert!(matches!(decode(&enc).unwrap_err(), CodecError::CorruptContainer(_)));
    }

    #[test]
    fn wider_segments_round_trip() {
        let x = line(&[4, 8, 15, 16, 23, 42, 4]);
        for l in 1..=8 {
            for policy in [Policy::Predecessor, Policy::Detected] {
                let opts = EncodeOptions { policy, segment_len: l, ..EncodeOptions::default() };
                let enc = encode(&x, &opts).unwrap();
                assert_eq!(decode(&enc).unwrap(), x, "l={l} {policy}");
            }
        }
    }

    #[test]
    fn detected_policy_finds_scaled_reversal() {
        let x = RawSignal::line(0, vec![1, 2, 3, 9, 6, 3]).unwrap();
        let opts = EncodeOptions { segment_len: 3, ..EncodeOptions::detected() };
        let enc = encode(&x, &opts).unwrap();
        let r = &enc.records[0];
        assert_eq!((r.kind, r.map.stride, r.scale), (ArrowKind::AmpAffine, -1, (3, 1)));
        assert!(r.delta.iter().all(|&d| d == 0));
        assert_eq!(decode(&enc).unwrap(), x);
    }

    #[test]
    fn rounding_keeps_fractional_scales_lossless() {
        let x = RawSignal::line(0, vec![3, 5, 7, 2, 3, 3]).unwrap();
        let opts = EncodeOptions { segment_len: 3, detectors: vec![ArrowKind::AmpAffine], ..EncodeOptions::detected() };
        let enc = encode(&x, &opts).unwrap();
        assert_eq!(decode(&enc).unwrap(), x);
        assert_eq!(round_scaled(5, (1, 2)), Some(3));
        assert_eq!(round_scaled(-5, (1, 2)), Some(-2));
        assert_eq!(round_scaled(7, (2, 3)), Some(5));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(RawSignal::line(0, vec![]).unwrap_err(), CodecError::EmptySignal);
        assert_eq!(RawSignal::grid(0, 5, vec![]).unwrap_err(), CodecError::EmptySignal);
    }

    #[test]
    fn extreme_samples_wrap_losslessly() {
        let x = line(&[i64::MIN, i64::MAX, i64::MIN, 0, i64::MAX]);
        for opts in [EncodeOptions::default(), EncodeOptions::detected()] {
            let enc = encode(&x, &opts).unwrap();
            assert_eq!(enc.records[0].delta, vec![-1]);
            assert_eq!(decode(&enc).unwrap(), x);
        }
    }
}
