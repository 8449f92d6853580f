//! Binary path dump: little-endian header `(d, n_rows, t0, dt)` as four
//! 64-bit fields, then row-major f64 values.

use super::SamplePath;
use crate::error::{Error, Result};
use std::io::{Read, Write};

pub fn write_path_dump<W: Write>(path: &SamplePath, mut w: W) -> Result<()> {
    w.write_all(&(path.dim as u64).to_le_bytes())?;
    w.write_all(&(path.len() as u64).to_le_bytes())?;
    w.write_all(&path.t0.to_le_bytes())?;
    w.write_all(&path.dt.to_le_bytes())?;
    for v in &path.values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_path_dump<R: Read>(mut r: R) -> Result<SamplePath> {
    let mut buf8 = [0u8; 8];
    r.read_exact(&mut buf8)?;
    let d = u64::from_le_bytes(buf8) as usize;
    r.read_exact(&mut buf8)?;
    let rows = u64::from_le_bytes(buf8) as usize;
    r.read_exact(&mut buf8)?;
    let t0 = f64::from_le_bytes(buf8);
    r.read_exact(&mut buf8)?;
    let dt = f64::from_le_bytes(buf8);
    if d == 0 || rows == 0 {
        return Err(Error::invalid("dump header with zero dimension or rows"));
    }
    let mut values = vec![0.0; rows * d];
    for v in values.iter_mut() {
        r.read_exact(&mut buf8)?;
        *v = f64::from_le_bytes(buf8);
    }
    SamplePath::new(t0, dt, d, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{simulate, ProcessSpec};
    use crate::rng::RngStream;
    use proptest::prelude::*;

    #[test]
    fn round_trip_preserves_path_bitwise() {
        let p = simulate(&ProcessSpec::brownian(3), &[0.1, -0.2, 0.0], 1.0, 64, RngStream::new(1, 1)).unwrap();
        let mut buf = Vec::new();
        write_path_dump(&p, &mut buf).unwrap();
        assert_eq!(buf.len(), 32 + 65 * 3 * 8);
        let q = read_path_dump(buf.as_slice()).unwrap();
        assert_eq!(p, q);
    }

    proptest! {
        #[test]
        fn round_trip_arbitrary_grids(dt in 1e-6f64..1e3, t0 in -10.0f64..10.0, vals in proptest::collection::vec(-1e12f64..1e12, 2..40)) {
            let n = vals.len() - vals.len() % 2;
            let p = SamplePath::new(t0, dt, 2, vals[..n.max(2)].to_vec());
            prop_assume!(p.is_ok());
            let p = p.unwrap();
            let mut buf = Vec::new();
            write_path_dump(&p, &mut buf).unwrap();
            prop_assert_eq!(read_path_dump(buf.as_slice()).unwrap(), p);
        }
    }
}
