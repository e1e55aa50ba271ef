//! Binary dump/load of excursion paths for experiment reproducibility.
//!
//! Layout (all little-endian):
//! `magic "XPTH" | u32 version | f64 alpha | f64 c | f64 dt | u64 len |
//! len × f64 values`.

use crate::analytic::BranchingMechanism;
use crate::excursion::ExcursionPath;
use std::io::{Read, Write};
use thiserror::Error;

const MAGIC: &[u8; 4] = b"XPTH";
const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum TreeIoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad magic: not an excursion path file")]
    BadMagic,
    #[error("unsupported version {0}")]
    BadVersion(u32),
    #[error("corrupt header or payload: {0}")]
    Corrupt(String),
}

pub fn dump_path<W: Write>(
    w: &mut W,
    path: &ExcursionPath,
    mech: &BranchingMechanism,
) -> Result<(), TreeIoError> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&mech.alpha().to_le_bytes())?;
    w.write_all(&mech.constant().to_le_bytes())?;
    w.write_all(&path.dt().to_le_bytes())?;
    w.write_all(&(path.len() as u64).to_le_bytes())?;
    for &v in path.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn load_path<R: Read>(r: &mut R) -> Result<(ExcursionPath, BranchingMechanism), TreeIoError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(TreeIoError::BadMagic);
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let version = u32::from_le_bytes(b4);
    if version != VERSION {
        return Err(TreeIoError::BadVersion(version));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let alpha = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let c = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let dt = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let len = u64::from_le_bytes(b8) as usize;
    let mut values = Vec::with_capacity(len);
    for _ in 0..len {
        r.read_exact(&mut b8)?;
        values.push(f64::from_le_bytes(b8));
    }
    let mech = BranchingMechanism::new(alpha, c)
        .map_err(|e| TreeIoError::Corrupt(format!("mechanism: {e}")))?;
    let path =
        ExcursionPath::new(values, dt).map_err(|e| TreeIoError::Corrupt(format!("path: {e}")))?;
    Ok((path, mech))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excursion::normalized_brownian_excursion;
    use crate::seed::SeedSpec;

    #[test]
    fn round_trip() {
        let path = normalized_brownian_excursion(256, SeedSpec::new(1, 1)).unwrap();
        let mech = BranchingMechanism::new(1.5, 2.0 / 3.0).unwrap();
        let mut buf = Vec::new();
        dump_path(&mut buf, &path, &mech).unwrap();
        let (p2, m2) = load_path(&mut buf.as_slice()).unwrap();
        assert_eq!(p2, path);
        assert_eq!(m2, mech);
    }

    #[test]
    fn rejects_garbage() {
        let mut buf = b"NOPE".to_vec();
        buf.extend_from_slice(&[0u8; 64]);
        assert!(matches!(
            load_path(&mut buf.as_slice()),
            Err(TreeIoError::BadMagic)
        ));
        // truncated payload
        let path = normalized_brownian_excursion(64, SeedSpec::new(1, 2)).unwrap();
        let mech = BranchingMechanism::stable(2.0).unwrap();
        let mut buf = Vec::new();
        dump_path(&mut buf, &path, &mech).unwrap();
        buf.truncate(buf.len() - 9);
        assert!(load_path(&mut buf.as_slice()).is_err());
    }
}
