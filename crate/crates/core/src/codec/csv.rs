//! Sequences as text: one integer or `a/b` rational per line, with an
//! optional `# origin=<i>` header. Other `#` lines and blank lines are
//! ignored.

use crate::rational::Rational;

use super::{CodecError, CodecResult, RawSignal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvSignal {
    pub origin: i64,
    pub samples: Vec<Rational>,
}

impl CsvSignal {
    /// The integer signal, or the position of the first fractional sample.
    pub fn into_signal(self) -> CodecResult<RawSignal> {
        let ints = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if v.is_integer() {
                    i64::try_from(v.to_integer()).map_err(|_| CodecError::Overflow(k))
                } else {
                    Err(CodecError::NonIntegerSample(k))
                }
            })
            .collect::<CodecResult<Vec<i64>>>()?;
        RawSignal::line(self.origin, ints)
    }
}

pub fn read_csv(text: &str) -> CodecResult<CsvSignal> {
    let mut origin = 0;
    let mut samples = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim().trim_end_matches(',').trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("origin=") {
                origin = v.trim().parse().map_err(|_| CodecError::Format(format!("csv line {}: bad origin", n + 1)))?;
            }
            continue;
        }
        let v: Rational = line
            .parse()
            .map_err(|_| CodecError::Format(format!("csv line {}: `{line}` is not a number", n + 1)))?;
        samples.push(v);
    }
    if samples.is_empty() {
        return Err(CodecError::EmptySignal);
    }
    Ok(CsvSignal { origin, samples })
}

pub fn write_csv(origin: i64, samples: &[i64]) -> String {
    let mut out = format!("# origin={origin}\n");
    for s in samples {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn origin_header_and_rationals() {
        let s = read_csv("# origin=-3\n1\n\n  -2 \n5/2\n# note\n").unwrap();
        assert_eq!(s.origin, -3);
        assert_eq!(s.samples, vec![int(1), int(-2), rat(5, 2)]);
        assert_eq!(s.into_signal().unwrap_err(), CodecError::NonIntegerSample(2));
    }

    #[test]
    fn round_trip() {
        let text = write_csv(4, &[7, -1, 0]);
        let s = read_csv(&text).unwrap().into_signal().unwrap();
        assert_eq!(s, RawSignal::line(4, vec![7, -1, 0]).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_csv("1\nx\n").is_err());
        assert!(read_csv("# origin=1\n").is_err());
        assert!(read_csv("1/0\n").is_err());
    }
}
