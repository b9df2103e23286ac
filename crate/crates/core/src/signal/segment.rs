use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A half-open index range `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub start: i64,
    pub end: i64,
}

impl Interval {
    pub fn new(start: i64, end: i64) -> Result<Self> {
        if end <= start {
            return Err(Error::IntervalMismatch);
        }
        Ok(Interval { start, end })
    }

    pub fn len(&self) -> usize {
        (self.end - self.start) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, i: i64) -> bool {
        self.start <= i && i < self.end
    }

    pub fn indices(&self) -> std::ops::Range<i64> {
        self.start..self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// The restriction `f|I` of a sampled signal to a half-open interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    start: i64,
    samples: Vec<Rational>,
}

impl Segment {
    pub fn new(start: i64, samples: Vec<Rational>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::IntervalMismatch);
        }
        Ok(Segment { start, samples })
    }

    pub fn from_ints(start: i64, samples: &[i64]) -> Result<Self> {
        Segment::new(start, samples.iter().map(|&v| crate::rational::int(v)).collect())
    }

    pub fn interval(&self) -> Interval {
        Interval { start: self.start, end: self.start + self.samples.len() as i64 }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Rational] {
        &self.samples
    }

    /// Sample at absolute index `i`.
    pub fn at(&self, i: i64) -> &Rational {
        &self.samples[(i - self.start) as usize]
    }

    pub fn into_samples(self) -> Vec<Rational> {
        self.samples
    }
}

/// Splits `signal` at the given absolute indices. Each breakpoint starts a
/// new segment, so the pieces partition the signal's extent.
pub fn segment_signal(signal: &Segment, breakpoints: &[i64]) -> Result<Vec<Segment>> {
    let extent = signal.interval();
    let mut cuts = Vec::with_capacity(breakpoints.len() + 2);
    cuts.push(extent.start);
    for &b in breakpoints {
        if b <= *cuts.last().unwrap() || b >= extent.end {
            return Err(Error::BadBreakpoints);
        }
        cuts.push(b);
    }
    cuts.push(extent.end);
    Ok(cuts
        .windows(2)
        .map(|w| Segment {
            start: w[0],
            samples: signal.samples[(w[0] - extent.start) as usize..(w[1] - extent.start) as usize].to_vec(),
        })
        .collect())
}

/// Breakpoints for consecutive pieces of `len` samples (the last may be
/// shorter).
pub fn fixed_breakpoints(extent: Interval, len: usize) -> Vec<i64> {
    let len = len.max(1) as i64;
    (extent.start + len..extent.end).step_by(len as usize).collect()
}

/// Concatenates adjacent segments back into one signal.
pub fn rejoin(segments: &[Segment]) -> Result<Segment> {
    let first = segments.first().ok_or(Error::BadBreakpoints)?;
    let mut samples = Vec::new();
    let mut next = first.start;
    for s in segments {
        if s.start != next {
            return Err(Error::BadBreakpoints);
        }
        samples.extend(s.samples.iter().cloned());
        next = s.interval().end;
    }
    Segment::new(first.start, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_breakpoints_give_singletons() {
        let f = Segment::from_ints(1, &[1, 2, 3, 4, 5]).unwrap();
        let parts = segment_signal(&f, &[2, 3, 4, 5]).unwrap();
        assert_eq!(parts.len(), 5);
        for (k, p) in parts.iter().enumerate() {
            assert_eq!(p.interval(), Interval::new(1 + k as i64, 2 + k as i64).unwrap());
            assert_eq!(p.samples(), &[crate::rational::int(k as i64 + 1)]);
        }
        assert_eq!(rejoin(&parts).unwrap(), f);
    }

    #[test]
    fn no_breakpoints_give_one_segment() {
        let f = Segment::from_ints(0, &[4, 4, 9]).unwrap();
        assert_eq!(segment_signal(&f, &[]).unwrap(), vec![f]);
    }

    #[test]
    fn bad_breakpoints_are_rejected() {
        let f = Segment::from_ints(0, &[1, 2, 3]).unwrap();
        assert_eq!(segment_signal(&f, &[2, 1]).unwrap_err(), Error::BadBreakpoints);
        assert_eq!(segment_signal(&f, &[0]).unwrap_err(), Error::BadBreakpoints);
        assert_eq!(segment_signal(&f, &[3]).unwrap_err(), Error::BadBreakpoints);
    }

    #[test]
    fn fixed_breakpoints_cover_the_extent() {
        let extent = Interval::new(3, 13).unwrap();
        assert_eq!(fixed_breakpoints(extent, 4), vec![7, 11]);
        assert_eq!(fixed_breakpoints(extent, 10), Vec::<i64>::new());
    }
}
