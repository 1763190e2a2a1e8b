//! Binary field container with a JSON metadata sidecar.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! magic      8 bytes  "CPDOFLD1"
//! M          u32
//! n          u32      number of blocks
//! blocks     n × (u32 k_j, k_j × u32 axis)
//! axes       M × (f64 ℓ_i, u64 m_i)
//! side       u8       0 = space, 1 = frequency
//! payload    ∏m_i × (f64 re, f64 im), row-major, last axis fastest
//! ```
//!
//! The sidecar lives next to the container as `<path>.json`.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{make_grid, BlockPartition, SampledField, Side};

const MAGIC: &[u8; 8] = b"CPDOFLD1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMetadata {
    pub format: String,
    pub version: u32,
    pub dims: usize,
    pub blocks: Vec<Vec<usize>>,
    pub extents: Vec<f64>,
    pub counts: Vec<usize>,
    pub side: Side,
    pub nodes: usize,
    pub payload_offset: usize,
    pub byte_order: String,
    pub node_order: String,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn encode(field: &SampledField) -> Vec<u8> {
    let grid = field.grid();
    let mut out = Vec::with_capacity(64 + 16 * grid.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(grid.dims() as u32).to_le_bytes());
    let blocks = grid.partition().blocks();
    out.extend_from_slice(&(blocks.len() as u32).to_le_bytes());
    for b in blocks {
        out.extend_from_slice(&(b.len() as u32).to_le_bytes());
        for &a in b {
            out.extend_from_slice(&(a as u32).to_le_bytes());
        }
    }
    for i in 0..grid.dims() {
        out.extend_from_slice(&grid.extents()[i].to_le_bytes());
        out.extend_from_slice(&(grid.counts()[i] as u64).to_le_bytes());
    }
    out.push(match field.side() {
        Side::Space => 0,
        Side::Frequency => 1,
    });
    for v in field.values().iter() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Format(format!("truncated at byte {}", self.pos)))?;
        self.pos = end;
        Ok(chunk.try_into().expect("length checked"))
    }
    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take()?) as usize)
    }
    fn u64(&mut self) -> Result<usize> {
        usize::try_from(u64::from_le_bytes(self.take()?)).map_err(|_| Error::Format("count overflows".into()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }
}

pub fn decode(bytes: &[u8]) -> Result<SampledField> {
    let mut c = Cursor { bytes, pos: 0 };
    if &c.take::<8>()? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let dims = c.u32()?;
    let n = c.u32()?;
    let mut blocks = Vec::with_capacity(n);
    for _ in 0..n {
        let k = c.u32()?;
        blocks.push((0..k).map(|_| c.u32()).collect::<Result<Vec<_>>>()?);
    }
    let partition = BlockPartition::new(blocks)?;
    if partition.dims() != dims {
        return Err(Error::Format(format!("header says M = {dims}, blocks cover {}", partition.dims())));
    }
    let mut extents = Vec::with_capacity(dims);
    let mut counts = Vec::with_capacity(dims);
    for _ in 0..dims {
        extents.push(c.f64()?);
        counts.push(c.u64()?);
    }
    let grid = make_grid(partition, extents, counts)?;
    let side = match c.take::<1>()?[0] {
        0 => Side::Space,
        1 => Side::Frequency,
        t => return Err(Error::Format(format!("unknown side tag {t}"))),
    };
    let expected = c.pos + 16 * grid.len();
    if bytes.len() != expected {
        return Err(Error::Format(format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let values = (0..grid.len())
        .map(|_| Ok(Complex64::new(c.f64()?, c.f64()?)))
        .collect::<Result<Vec<_>>>()?;
    SampledField::from_vec(&grid, side, values)
}

pub fn metadata(field: &SampledField) -> FieldMetadata {
    let grid = field.grid();
    let header = 8 + 4 + 4 + grid.partition().blocks().iter().map(|b| 4 + 4 * b.len()).sum::<usize>() + 16 * grid.dims() + 1;
    FieldMetadata {
        format: "conepdo-field".into(),
        version: 1,
        dims: grid.dims(),
        blocks: grid.partition().blocks().to_vec(),
        extents: grid.extents().to_vec(),
        counts: grid.counts().to_vec(),
        side: field.side(),
        nodes: grid.len(),
        payload_offset: header,
        byte_order: "little-endian".into(),
        node_order: "row-major, last axis fastest".into(),
    }
}

/// Writes the container to `path` and its sidecar to `<path>.json`.
pub fn write_field(path: &Path, field: &SampledField) -> Result<()> {
    fs::File::create(path)?.write_all(&encode(field))?;
    let meta = serde_json::to_string_pretty(&metadata(field))?;
    fs::write(sidecar_path(path), meta + "\n")?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<SampledField> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode(&bytes)
}

pub fn read_metadata(path: &Path) -> Result<FieldMetadata> {
    Ok(serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_bits() {
        let p = BlockPartition::new(vec![vec![1], vec![0]]).unwrap();
        let g = make_grid(p, vec![2.0, 3.5], vec![4, 6]).unwrap();
        let f = SampledField::from_fn(&g, Side::Frequency, |c| Complex64::new(c[0], c[1].sin()));
        let bytes = encode(&f);
        assert_eq!(bytes.len(), metadata(&f).payload_offset + 16 * 24);
        let back = decode(&bytes).unwrap();
        assert_eq!(back.grid(), f.grid());
        assert_eq!(back.side(), Side::Frequency);
        assert_eq!(back.to_vec(), f.to_vec());
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![1.0], vec![4]).unwrap();
        let bytes = encode(&SampledField::zeros(&g, Side::Space));
        assert!(decode(&bytes[..bytes.len() - 1]).is_err());
        assert!(decode(b"nonsense").is_err());
    }

    #[test]
    fn writes_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.bin");
        let g = make_grid(BlockPartition::singletons(1).unwrap(), vec![1.0], vec![4]).unwrap();
        let f = SampledField::from_fn(&g, Side::Space, |x| Complex64::from(x[0]));
        write_field(&path, &f).unwrap();
        let meta = read_metadata(&path).unwrap();
        assert_eq!(meta.counts, vec![4]);
        assert_eq!(read_field(&path).unwrap().to_vec(), f.to_vec());
    }
}
