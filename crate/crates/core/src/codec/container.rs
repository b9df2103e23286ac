//! The `FSG1` byte layout. All integers are little-endian.
//!
//! ```text
//! magic "FSG1" | version u8 | dim u8 (1|2) | dims u64 × dim | origin i64 | policy u8
//! seed: len u64, i64 × len
//! records: count u64, then per record
//!   kind u8 | T i64 | S i64 | c_num i64 | c_den i64 | Δ: len u64, i64 × len
//! ```

use crate::signal::{ArrowKind, IndexMap};

use super::{corrupt, CodecResult, EncodedSignal, Policy, Record, Shape};

pub const MAGIC: &[u8; 4] = b"FSG1";
pub const VERSION: u8 = 1;

fn kind_id(kind: ArrowKind) -> u8 {
    match kind {
        ArrowKind::Translation => 0,
        ArrowKind::Affine => 1,
        ArrowKind::AmpAffine => 2,
    }
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_i64(out: &mut Vec<u8>, v: i64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_array(out: &mut Vec<u8>, v: &[i64]) {
    put_u64(out, v.len() as u64);
    for x in v {
        put_i64(out, *x);
    }
}

pub fn write_container(enc: &EncodedSignal) -> Vec<u8> {
    let body: usize = enc.records.iter().map(|r| 41 + 8 * r.delta.len()).sum();
    let mut out = Vec::with_capacity(64 + 8 * enc.seed.len() + body);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    match enc.shape {
        Shape::Line { len, .. } => {
            out.push(1);
            put_u64(&mut out, len as u64);
        }
        Shape::Grid { rows, cols } => {
            out.push(2);
            put_u64(&mut out, rows as u64);
            put_u64(&mut out, cols as u64);
        }
    }
    put_i64(&mut out, enc.shape.origin());
    out.push(enc.policy.id());
    put_array(&mut out, &enc.seed);
    put_u64(&mut out, enc.records.len() as u64);
    for r in &enc.records {
        out.push(kind_id(r.kind));
        put_i64(&mut out, r.map.offset);
        put_i64(&mut out, r.map.stride);
        put_i64(&mut out, r.scale.0);
        put_i64(&mut out, r.scale.1);
        put_array(&mut out, &r.delta);
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> CodecResult<&'a [u8]> {
        if self.bytes.len() < n {
            return Err(corrupt("truncated"));
        }
        let (head, rest) = self.bytes.split_at(n);
        self.bytes = rest;
        Ok(head)
    }

    fn u8(&mut self) -> CodecResult<u8> {
        Ok(self.take(1)?[0])
    }

    fn u64(&mut self) -> CodecResult<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> CodecResult<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> CodecResult<usize> {
        usize::try_from(self.u64()?).map_err(|_| corrupt("length out of range"))
    }

    fn array(&mut self) -> CodecResult<Vec<i64>> {
        let len = self.usize()?;
        if len > self.bytes.len() / 8 {
            return Err(corrupt("truncated"));
        }
        (0..len).map(|_| self.i64()).collect()
    }
}

pub fn read_container(bytes: &[u8]) -> CodecResult<EncodedSignal> {
    let mut r = Reader { bytes };
    if r.take(4).map_err(|_| corrupt("bad magic"))? != MAGIC {
        return Err(corrupt("bad magic"));
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(corrupt(format!("unsupported version {version}")));
    }
    let dim = r.u8()?;
    let dims = match dim {
        1 => vec![r.usize()?],
        2 => vec![r.usize()?, r.usize()?],
        _ => return Err(corrupt(format!("bad dimension {dim}"))),
    };
    let origin = r.i64()?;
    let shape = if dim == 1 {
        Shape::Line { len: dims[0], origin }
    } else {
        if origin != 0 {
            return Err(corrupt("images have origin 0"));
        }
        dims[0].checked_mul(dims[1]).ok_or_else(|| corrupt("image too large"))?;
        Shape::Grid { rows: dims[0], cols: dims[1] }
    };
    let policy = Policy::from_id(r.u8()?).ok_or_else(|| corrupt("unknown policy"))?;
    let seed = r.array()?;
    let count = r.usize()?;
    // Each record takes at least 41 bytes.
    if count > r.bytes.len() / 41 {
        return Err(corrupt("truncated"));
    }
    let mut records = Vec::with_capacity(count);
    for _ in 0..count {
        let kind = match r.u8()? {
            0 => ArrowKind::Translation,
            1 => ArrowKind::Affine,
            2 => ArrowKind::AmpAffine,
            k => return Err(corrupt(format!("unknown arrow kind {k}"))),
        };
        let offset = r.i64()?;
        let stride = r.i64()?;
        let map = IndexMap::new(stride, offset).map_err(|_| corrupt("zero stride"))?;
        let scale = (r.i64()?, r.i64()?);
        let delta = r.array()?;
        records.push(Record { kind, map, scale, delta });
    }
    if !r.bytes.is_empty() {
        return Err(corrupt("trailing bytes"));
    }
    Ok(EncodedSignal { shape, policy, seed, records })
}
