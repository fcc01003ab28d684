//! CSR serialization.
//!
//! Binary container layout (all integers little-endian):
//!
//! ```text
//! offset  size        field
//! 0       8           magic "SPKCSR1\0"
//! 8       4           u32 n_rows
//! 12      4           u32 n_cols
//! 16      4*(rows+1)  u32 indptr
//! ...     4*nnz       u32 indices
//! ...     1           weight kind tag: 0 homogeneous, 1 per-edge
//! ...     8 or 8*nnz  f64 weight block
//! ```
//!
//! The text loader reads edge lists, one edge per line: `src dst [weight]`.
//! Either every line carries a weight (per-edge matrix) or none does
//! (homogeneous weight 1).

use std::io::{Read, Write};
use std::path::Path;

use super::csr::{CsrMatrix, Weights};
use crate::error::{Error, Result};

pub const CSR_MAGIC: &[u8; 8] = b"SPKCSR1\0";

const TAG_HOMOGENEOUS: u8 = 0;
const TAG_PER_EDGE: u8 = 1;

pub fn write_csr<W: Write>(m: &CsrMatrix, out: &mut W) -> Result<()> {
    if m.n_rows() > u32::MAX as usize || m.n_cols() > u32::MAX as usize {
        return Err(Error::Format("matrix too large for u32 header".into()));
    }
    out.write_all(CSR_MAGIC)?;
    out.write_all(&(m.n_rows() as u32).to_le_bytes())?;
    out.write_all(&(m.n_cols() as u32).to_le_bytes())?;
    for &p in m.indptr() {
        out.write_all(&p.to_le_bytes())?;
    }
    for &c in m.indices() {
        out.write_all(&c.to_le_bytes())?;
    }
    match m.weights() {
        Weights::Homogeneous(w) => {
            out.write_all(&[TAG_HOMOGENEOUS])?;
            out.write_all(&w.to_le_bytes())?;
        }
        Weights::PerEdge(ws) => {
            out.write_all(&[TAG_PER_EDGE])?;
            for w in ws {
                out.write_all(&w.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

pub fn read_csr<R: Read>(input: &mut R) -> Result<CsrMatrix> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != CSR_MAGIC {
        return Err(Error::Format("bad magic, not an SPKCSR1 container".into()));
    }
    let n_rows = read_u32(input)? as usize;
    let n_cols = read_u32(input)? as usize;
    let mut indptr = Vec::with_capacity(n_rows + 1);
    for _ in 0..=n_rows {
        indptr.push(read_u32(input)?);
    }
    let nnz = *indptr.last().expect("indptr nonempty") as usize;
    let mut indices = Vec::with_capacity(nnz);
    for _ in 0..nnz {
        indices.push(read_u32(input)?);
    }
    let mut tag = [0u8; 1];
    input.read_exact(&mut tag)?;
    let weights = match tag[0] {
        TAG_HOMOGENEOUS => Weights::Homogeneous(read_f64(input)?),
        TAG_PER_EDGE => {
            let mut ws = Vec::with_capacity(nnz);
            for _ in 0..nnz {
                ws.push(read_f64(input)?);
            }
            Weights::PerEdge(ws)
        }
        t => return Err(Error::Format(format!("unknown weight kind tag {t}"))),
    };
    CsrMatrix::from_parts(n_rows, n_cols, indptr, indices, weights)
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    input.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_f64<R: Read>(input: &mut R) -> Result<f64> {
    let mut buf = [0u8; 8];
    input.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}

/// Loads a plain-text edge list. Shape is the maximum index + 1 unless
/// explicit bounds are given.
pub fn load_edge_list(path: &Path, shape: Option<(usize, usize)>) -> Result<CsrMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text, shape)
}

pub(crate) fn parse_edge_list(text: &str, shape: Option<(usize, usize)>) -> Result<CsrMatrix> {
    let mut weighted: Option<bool> = None;
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| Error::Format(format!("edge list line {}: {msg}", lineno + 1));
        if fields.len() != 2 && fields.len() != 3 {
            return Err(bad("expected 'src dst [weight]'"));
        }
        let has_weight = fields.len() == 3;
        match weighted {
            None => weighted = Some(has_weight),
            Some(w) if w != has_weight => {
                return Err(bad("mixed weighted and unweighted lines"));
            }
            _ => {}
        }
        let src: usize = fields[0].parse().map_err(|_| bad("bad src index"))?;
        let dst: usize = fields[1].parse().map_err(|_| bad("bad dst index"))?;
        let w: f64 = if has_weight {
            fields[2].parse().map_err(|_| bad("bad weight"))?
        } else {
            1.0
        };
        entries.push((src, dst, w));
    }
    let (n_rows, n_cols) = shape.unwrap_or_else(|| {
        let r = entries.iter().map(|e| e.0).max().map_or(0, |m| m + 1);
        let c = entries.iter().map(|e| e.1).max().map_or(0, |m| m + 1);
        (r, c)
    });
    if weighted == Some(false) {
        let pairs: Vec<(usize, usize)> = entries.iter().map(|&(r, c, _)| (r, c)).collect();
        CsrMatrix::from_pairs_homogeneous(n_rows, n_cols, &pairs, 1.0)
    } else {
        CsrMatrix::from_entries(n_rows, n_cols, &entries)
    }
}
