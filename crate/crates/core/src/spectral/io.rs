//! Flat binary layout for fields.
//!
//! Little-endian: `u32 n`, `n x u64` sizes, `n x f64` box lengths, then
//! interleaved `re, im` doubles in row-major order.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::grid::{Field, GridSpec};
use crate::error::{Error, Result};

pub fn write_field<W: Write>(f: &Field, mut w: W) -> Result<()> {
    let spec = f.spec();
    w.write_all(&(spec.dim() as u32).to_le_bytes())?;
    for &s in spec.sizes() {
        w.write_all(&(s as u64).to_le_bytes())?;
    }
    for &l in spec.box_len() {
        w.write_all(&l.to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(16 * f.values().len());
    for v in f.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

pub fn read_field<R: Read>(mut r: R) -> Result<Field> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    let n = u32::from_le_bytes(b) as usize;
    if !(1..=3).contains(&n) {
        return Err(Error::Format(format!("dimension {n} in header")));
    }
    let sizes = (0..n)
        .map(|_| read_u64(&mut r).map(|v| v as usize))
        .collect::<Result<Vec<_>>>()?;
    let box_len = (0..n)
        .map(|_| read_f64(&mut r))
        .collect::<Result<Vec<_>>>()?;
    let spec = GridSpec::new(sizes, box_len)?;
    let mut payload = vec![0u8; 16 * spec.len()];
    r.read_exact(&mut payload)
        .map_err(|e| Error::Format(format!("truncated payload: {e}")))?;
    let values = payload
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    Field::new(spec, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn binary_round_trip(seed in any::<u64>(), log_n in 3usize..6, len in 0.5f64..20.0) {
            let n = 1 << log_n;
            let spec = GridSpec::new(vec![n, 8], vec![len, 2.0]).unwrap();
            let f = Field::from_fn(&spec, |x| {
                let s = seed as f64 * 1e-19;
                Complex64::new((x[0] * 3.1 + s).sin(), x[1] * s)
            });
            let mut buf = Vec::new();
            write_field(&f, &mut buf).unwrap();
            prop_assert_eq!(buf.len(), 4 + 16 * 2 + 16 * spec.len());
            let back = read_field(buf.as_slice()).unwrap();
            prop_assert_eq!(back, f);
        }
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let spec = GridSpec::periodic(1, 8).unwrap();
        let mut buf = Vec::new();
        write_field(&Field::zeros(&spec), &mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(matches!(read_field(buf.as_slice()), Err(Error::Format(_))));
    }
}
