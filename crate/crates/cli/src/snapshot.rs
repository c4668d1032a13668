//! WVF1 wavefunction snapshots: `WVF1`, u32 nx, u32 ny, f64 lx, ly, t,
//! b_field, then nx·ny (re, im) f64 pairs with y varying slowest. All
//! little-endian.

use std::io::{self, Read, Write};

use cyclovortex::{make_grid, Complex64, WaveField};
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"WVF1";
const HEADER_LEN: usize = 4 + 2 * 4 + 4 * 8;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("corrupt snapshot: {0}")]
    Corrupt(String),
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub psi: WaveField,
    pub t: f64,
    pub b_field: f64,
}

pub fn write_snapshot<W: Write>(mut out: W, psi: &WaveField, t: f64, b_field: f64) -> io::Result<()> {
    let g = &psi.grid;
    let mut buf = Vec::with_capacity(HEADER_LEN + 16 * psi.values.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(g.nx as u32).to_le_bytes());
    buf.extend_from_slice(&(g.ny as u32).to_le_bytes());
    for v in [g.lx, g.ly, t, b_field] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for v in &psi.values {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    out.write_all(&buf)?;
    out.flush()
}

fn f64_at(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap())
}

pub fn read_snapshot<R: Read>(mut input: R) -> Result<Snapshot, SnapshotError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(SnapshotError::Corrupt("missing WVF1 header".into()));
    }
    let nx = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let ny = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let (lx, ly, t, b_field) = (f64_at(&bytes, 12), f64_at(&bytes, 20), f64_at(&bytes, 28), f64_at(&bytes, 36));
    let expected = nx
        .checked_mul(ny)
        .and_then(|n| n.checked_mul(16))
        .and_then(|n| n.checked_add(HEADER_LEN));
    if expected != Some(bytes.len()) {
        return Err(SnapshotError::Corrupt(format!(
            "{} bytes do not match a {nx}×{ny} payload",
            bytes.len()
        )));
    }
    let grid = make_grid(nx, ny, lx, ly).map_err(|e| SnapshotError::Corrupt(e.to_string()))?;
    let values = bytes[HEADER_LEN..]
        .chunks_exact(16)
        .map(|c| Complex64::new(f64_at(c, 0), f64_at(c, 8)))
        .collect();
    let psi = WaveField::from_values(&grid, values).map_err(|e| SnapshotError::Corrupt(e.to_string()))?;
    Ok(Snapshot { psi, t, b_field })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            bits in prop::collection::vec(any::<u64>(), 2 * 16 * 18),
            t in any::<f64>(),
            b in -5.0f64..5.0,
        ) {
            let g = make_grid(16, 18, 3.5, 7.25).unwrap();
            // shifting keeps every sample finite while exercising all mantissa bits
            let values = bits
                .chunks(2)
                .map(|c| Complex64::new(f64::from_bits(c[0] >> 2), -f64::from_bits(c[1] >> 2)))
                .collect();
            let psi = WaveField::from_values(&g, values).unwrap();
            let mut buf = Vec::new();
            write_snapshot(&mut buf, &psi, t, b).unwrap();
            let back = read_snapshot(&buf[..]).unwrap();
            prop_assert_eq!(back.t.to_bits(), t.to_bits());
            prop_assert_eq!(back.b_field.to_bits(), b.to_bits());
            prop_assert!(*back.psi.grid == *g);
            for (a, c) in back.psi.values.iter().zip(&psi.values) {
                prop_assert_eq!((a.re.to_bits(), a.im.to_bits()), (c.re.to_bits(), c.im.to_bits()));
            }
        }
    }

    #[test]
    fn header_layout() {
        let g = make_grid(16, 18, 4.0, 5.0).unwrap();
        let psi = WaveField::from_fn(&g, |x, y| Complex64::new(x, -y));
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &psi, 0.25, -1.0).unwrap();
        assert_eq!(&buf[..4], b"WVF1");
        assert_eq!(&buf[4..8], &16u32.to_le_bytes());
        assert_eq!(&buf[8..12], &18u32.to_le_bytes());
        assert_eq!(buf.len(), 44 + 16 * 16 * 18);
        // second sample is (i = 1, j = 0)
        assert_eq!(f64_at(&buf, 44 + 16), g.x[1]);
    }

    #[test]
    fn rejects_truncated_and_foreign_files() {
        assert!(matches!(read_snapshot(&b"WVF2"[..]), Err(SnapshotError::Corrupt(_))));
        let g = make_grid(16, 16, 4.0, 4.0).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &WaveField::zeros(&g), 0.0, 1.0).unwrap();
        buf.pop();
        assert!(matches!(read_snapshot(&buf[..]), Err(SnapshotError::Corrupt(_))));
    }
}
