use std::collections::HashMap;

use super::{container::write_container, CodecError, CodecResult, EncodedSignal, RawSignal};

#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    pub samples: usize,
    pub deltas: usize,
    pub nonzero_deltas: usize,
    /// Nonzero entries over the delta stream (seed excluded).
    pub nonzero_delta_fraction: f64,
    /// Zeroth-order entropies in bits per sample.
    pub raw_entropy: f64,
    pub delta_entropy: f64,
    pub encoded_bytes: usize,
}

/// Zeroth-order (histogram) entropy in bits per symbol.
pub fn entropy(values: impl IntoIterator<Item = i64>) -> f64 {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    let mut n = 0usize;
    for v in values {
        *counts.entry(v).or_default() += 1;
        n += 1;
    }
    if n == 0 {
        return 0.0;
    }
    let mut freqs: Vec<usize> = counts.into_values().collect();
    // Fixed summation order keeps the result independent of hashing.
    freqs.sort_unstable();
    let h: f64 = freqs
        .into_iter()
        .map(|c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}

pub fn metrics(raw: &RawSignal, enc: &EncodedSignal) -> CodecResult<Metrics> {
    if raw.shape() != enc.shape {
        return Err(CodecError::ShapeMismatch(format!("{:?} against {:?}", raw.shape(), enc.shape)));
    }
    let deltas = enc.delta_stream().count();
    let nonzero = enc.delta_stream().filter(|&d| d != 0).count();
    Ok(Metrics {
        samples: raw.samples().len(),
        deltas,
        nonzero_deltas: nonzero,
        nonzero_delta_fraction: if deltas == 0 { 0.0 } else { nonzero as f64 / deltas as f64 },
        raw_entropy: entropy(raw.samples().iter().copied()),
        delta_entropy: entropy(enc.delta_stream()),
        encoded_bytes: write_container(enc).len(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{encode, EncodeOptions};
    use super::*;

    #[test]
    fn staircase_delta_stream_has_zero_entropy() {
        let raw = RawSignal::line(1, vec![1, 2, 3, 4, 5]).unwrap();
        let m = metrics(&raw, &encode(&raw, &EncodeOptions::default()).unwrap()).unwrap();
        assert_eq!(m.delta_entropy, 0.0);
        assert_eq!(m.nonzero_delta_fraction, 1.0);
        assert!((m.raw_entropy - 5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn constant_image_has_no_nonzero_deltas() {
        let raw = RawSignal::grid(4, 4, vec![9; 16]).unwrap();
        let m = metrics(&raw, &encode(&raw, &EncodeOptions::default()).unwrap()).unwrap();
        assert_eq!(m.nonzero_delta_fraction, 0.0);
        assert_eq!(m.raw_entropy, 0.0);
    }

    #[test]
    fn entropy_of_fair_coin() {
        assert_eq!(entropy([0, 1, 0, 1]), 1.0);
        assert_eq!(entropy([]), 0.0);
    }

    #[test]
    fn shapes_must_match() {
        let a = RawSignal::line(0, vec![1, 2]).unwrap();
        let b = RawSignal::line(0, vec![1, 2, 3]).unwrap();
        assert!(metrics(&a, &encode(&b, &EncodeOptions::default()).unwrap()).is_err());
    }
}
