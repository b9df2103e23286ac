//! Netpbm graymaps: `P2` (ASCII) and `P5` (binary, 16-bit big-endian samples
//! when maxval exceeds 255).

use super::{CodecError, CodecResult, RawSignal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PgmImage {
    pub rows: usize,
    pub cols: usize,
    pub maxval: u16,
    pub pixels: Vec<i64>,
}

impl PgmImage {
    pub fn into_signal(self) -> CodecResult<RawSignal> {
        RawSignal::grid(self.rows, self.cols, self.pixels)
    }
}

fn bad(msg: impl Into<String>) -> CodecError {
    CodecError::Format(format!("pgm: {}", msg.into()))
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> CodecResult<u64> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(format!("expected {what}")))
    }
}

pub fn read_pgm(bytes: &[u8]) -> CodecResult<PgmImage> {
    let binary = match bytes.get(..2) {
        Some(b"P2") => false,
        Some(b"P5") => true,
        _ => return Err(bad("missing P2/P5 magic")),
    };
    let mut h = Header { bytes, pos: 2 };
    let cols = h.number("width")? as usize;
    let rows = h.number("height")? as usize;
    let maxval = h.number("maxval")?;
    if !(1..=65535).contains(&maxval) {
        return Err(bad(format!("maxval {maxval} out of range")));
    }
    let n = rows.checked_mul(cols).ok_or_else(|| bad("image too large"))?;
    if n == 0 {
        return Err(CodecError::EmptySignal);
    }
    let pixels: Vec<i64> = if binary {
        if !h.bytes.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(bad("expected whitespace after maxval"));
        }
        let raster = &bytes[h.pos + 1..];
        let width = if maxval > 255 { 2 } else { 1 };
        if raster.len() != n * width {
            return Err(bad(format!("raster has {} bytes, expected {}", raster.len(), n * width)));
        }
        if width == 1 {
            raster.iter().map(|&b| i64::from(b)).collect()
        } else {
            raster.chunks_exact(2).map(|c| i64::from(u16::from_be_bytes([c[0], c[1]]))).collect()
        }
    } else {
        let v = (0..n).map(|_| h.number("sample").map(|x| x as i64)).collect::<CodecResult<Vec<_>>>()?;
        h.skip_space();
        if h.pos != bytes.len() {
            return Err(bad("trailing data"));
        }
        v
    };
    if let Some(p) = pixels.iter().position(|&p| p > maxval as i64) {
        return Err(bad(format!("sample {p} exceeds maxval")));
    }
    Ok(PgmImage { rows, cols, maxval: maxval as u16, pixels })
}

/// Writes `pixels` with maxval 255 when they fit in a byte, else 65535.
pub fn write_pgm(rows: usize, cols: usize, pixels: &[i64], binary: bool) -> CodecResult<Vec<u8>> {
    if rows * cols != pixels.len() {
        return Err(CodecError::ShapeMismatch(format!("{rows}x{cols} image with {} pixels", pixels.len())));
    }
    if let Some(p) = pixels.iter().position(|&p| !(0..=65535).contains(&p)) {
        return Err(bad(format!("sample {p} is outside 0..=65535")));
    }
    let maxval: i64 = if pixels.iter().all(|&p| p <= 255) { 255 } else { 65535 };
    let mut out = format!("{}\n{cols} {rows}\n{maxval}\n", if binary { "P5" } else { "P2" }).into_bytes();
    if binary {
        for &p in pixels {
            if maxval == 255 {
                out.push(p as u8);
            } else {
                out.extend_from_slice(&(p as u16).to_be_bytes());
            }
        }
    } else {
        for row in pixels.chunks(cols.max(1)) {
            let line: Vec<String> = row.iter().map(i64::to_string).collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_with_comments() {
        let text = b"P2\n# made by hand\n3 2\n# depth\n9\n0 1 2\n3 4 9\n";
        let img = read_pgm(text).unwrap();
        assert_eq!((img.rows, img.cols, img.maxval), (2, 3, 9));
        assert_eq!(img.pixels, vec![0, 1, 2, 3, 4, 9]);
    }

    #[test]
    fn binary_eight_bit() {
        let mut bytes = b"P5 2 2 255\n".to_vec();
        bytes.extend([0, 128, 255, 7]);
        assert_eq!(read_pgm(&bytes).unwrap().pixels, vec![0, 128, 255, 7]);
    }

    #[test]
    fn binary_sixteen_bit_is_big_endian() {
        let mut bytes = b"P5\n2 1\n65535\n".to_vec();
        bytes.extend([0x01, 0x02, 0xff, 0xfe]);
        assert_eq!(read_pgm(&bytes).unwrap().pixels, vec![0x0102, 0xfffe]);
    }

    #[test]
    fn round_trips() {
        for pixels in [vec![0, 5, 255, 9, 1, 2], vec![0, 300, 65535, 9, 1, 2]] {
            for binary in [false, true] {
                let bytes = write_pgm(2, 3, &pixels, binary).unwrap();
                let img = read_pgm(&bytes).unwrap();
                assert_eq!((img.rows, img.cols, img.pixels), (2, 3, pixels.clone()));
            }
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(read_pgm(b"P6 1 1 255\n\0").is_err());
        assert!(read_pgm(b"P5 2 2 255\n\0\0\0").is_err());
        assert!(read_pgm(b"P2 1 1 5\n6\n").is_err());
        assert!(read_pgm(b"P2 2 1 5\n1\n").is_err());
        assert!(read_pgm(b"P2 1 1 0\n0\n").is_err());
        assert!(write_pgm(1, 1, &[-1], true).is_err());
    }
}
