//! Binary checkpoint files for scalar fields.
//!
//! Layout, all little-endian: 5 magic bytes "GSQG1", n as u64, then box
//! length, gamma, and time as f64, then n*n field values row-major. Values
//! are written bit-exactly, so save/load round-trips reproduce runs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read as _, Write as _};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::GridSpec;

const MAGIC: &[u8; 5] = b"GSQG1";

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub field: SpectralField,
    pub gamma: f64,
    pub time: f64,
}

pub fn save(path: &Path, field: &SpectralField, gamma: f64, time: f64) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(field.grid().n() as u64).to_le_bytes())?;
    w.write_all(&field.grid().length().to_le_bytes())?;
    w.write_all(&gamma.to_le_bytes())?;
    w.write_all(&time.to_le_bytes())?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Checkpoint> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Checkpoint(format!(
            "{}: bad magic {:?}",
            path.display(),
            magic
        )));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let length = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let gamma = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let time = f64::from_le_bytes(b8);
    if n < 16 || n % 2 != 0 || n > 1 << 20 {
        return Err(Error::Checkpoint(format!("{}: bad size n = {n}", path.display())));
    }
    let mut values = vec![0.0f64; n * n];
    for v in values.iter_mut() {
        r.read_exact(&mut b8)?;
        *v = f64::from_le_bytes(b8);
    }
    let mut tail = [0u8; 1];
    if r.read(&mut tail)? != 0 {
        return Err(Error::Checkpoint(format!(
            "{}: trailing bytes after field data",
            path.display()
        )));
    }
    let grid = GridSpec::new(n, length)?;
    let field = SpectralField::from_values(grid, values)?;
    Ok(Checkpoint { field, gamma, time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roundtrip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.gsqg");
        let grid = GridSpec::new(32, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let vals: Vec<f64> = (0..32 * 32).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let field = SpectralField::from_values(grid, vals.clone()).unwrap();
        save(&path, &field, 0.5, 1.25).unwrap();
        let back = load(&path).unwrap();
        assert_eq!(back.field.grid().n(), 32);
        assert_eq!(back.gamma, 0.5);
        assert_eq!(back.time, 1.25);
        for (a, b) in vals.iter().zip(back.field.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn rejects_corrupt_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.gsqg");
        std::fs::write(&path, b"NOTIT0000000").unwrap();
        assert!(load(&path).is_err());
    }

    #[test]
    fn rejects_truncated_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trunc.gsqg");
        let grid = GridSpec::new(16, 1.0).unwrap();
        let field = SpectralField::zeros(grid);
        save(&path, &field, 0.0, 0.0).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 9]).unwrap();
        assert!(load(&path).is_err());
    }
}
