//! Binary persistence of a [`WeightedSpace`].
//!
//! Layout (all integers little-endian):
//!
//! | field        | type                         |
//! |--------------|------------------------------|
//! | magic        | `b"HDSPACE\0"`               |
//! | version      | u32 (= 1)                    |
//! | scheme       | u8 (0 freq, 1 pmi, 2 ppmi)   |
//! | n_terms      | u64                          |
//! | n_features   | u64                          |
//! | nnz          | u64                          |
//! | terms        | n_terms x (u32 len, UTF-8)   |
//! | features     | n_features x (u32 len, UTF-8)|
//! | indptr       | (n_terms + 1) x u64          |
//! | indices      | nnz x u32                    |
//! | values       | nnz x f64                    |

use std::io::{Read, Write};

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::weighting::{Weighting, WeightedSpace};

pub const MAGIC: &[u8; 8] = b"HDSPACE\0";
pub const VERSION: u32 = 1;

pub fn write_space<W: Write>(space: &WeightedSpace, mut out: W) -> Result<()> {
    let (indptr, indices, values) = space.csr();
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&[space.scheme().code()])?;
    out.write_all(&(space.terms().len() as u64).to_le_bytes())?;
    out.write_all(&(space.features().len() as u64).to_le_bytes())?;
    out.write_all(&(values.len() as u64).to_le_bytes())?;
    for s in space.terms().iter().chain(space.features().iter()) {
        out.write_all(&(s.len() as u32).to_le_bytes())?;
        out.write_all(s.as_bytes())?;
    }
    for &p in indptr {
        out.write_all(&(p as u64).to_le_bytes())?;
    }
    for &i in indices {
        out.write_all(&i.to_le_bytes())?;
    }
    for &v in values {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

struct Reader<R> {
    inner: R,
}

impl<R: Read> Reader<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner
            .read_exact(&mut buf)
            .map_err(|e| Error::Format(format!("truncated file: {e}")))?;
        Ok(buf)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let mut buf = vec![0u8; len];
        self.inner
            .read_exact(&mut buf)
            .map_err(|e| Error::Format(format!("truncated string: {e}")))?;
        String::from_utf8(buf).map_err(|_| Error::Format("string is not UTF-8".into()))
    }
}

pub fn read_space<R: Read>(input: R) -> Result<WeightedSpace> {
    let mut r = Reader { inner: input };
    if &r.bytes::<8>()? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let [code] = r.bytes::<1>()?;
    let scheme = Weighting::from_code(code).ok_or_else(|| Error::Format(format!("unknown scheme code {code}")))?;
    let n_terms = r.u64()? as usize;
    let n_features = r.u64()? as usize;
    let nnz = r.u64()? as usize;
    let mut terms = IndexSet::with_capacity(n_terms);
    for _ in 0..n_terms {
        if !terms.insert(r.string()?) {
            return Err(Error::Format("duplicate term".into()));
        }
    }
    let mut features = IndexSet::with_capacity(n_features);
    for _ in 0..n_features {
        if !features.insert(r.string()?) {
            return Err(Error::Format("duplicate feature".into()));
        }
    }
    let mut indptr = Vec::with_capacity(n_terms + 1);
    for _ in 0..=n_terms {
        indptr.push(r.u64()? as usize);
    }
    if indptr[0] != 0 || indptr[n_terms] != nnz || indptr.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Format("inconsistent row pointers".into()));
    }
    let mut indices = Vec::with_capacity(nnz);
    for _ in 0..nnz {
        let f = r.u32()?;
        if f as usize >= n_features {
            return Err(Error::Format(format!("feature id {f} out of range")));
        }
        indices.push(f);
    }
    for row in 0..n_terms {
        if indices[indptr[row]..indptr[row + 1]].windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format(format!("row {row} is not strictly ascending")));
        }
    }
    let mut values = Vec::with_capacity(nnz);
    for _ in 0..nnz {
        values.push(f64::from_le_bytes(r.bytes()?));
    }
    Ok(WeightedSpace::from_csr(scheme, terms, features, indptr, indices, values))
}

/// Human-readable dimensions written next to the binary file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSidecar {
    pub format: String,
    pub version: u32,
    pub scheme: String,
    pub terms: usize,
    pub features: usize,
    pub nnz: usize,
}

impl SpaceSidecar {
    pub fn describe(space: &WeightedSpace) -> Self {
        SpaceSidecar {
            format: "hyperdoc-space".into(),
            version: VERSION,
            scheme: space.scheme().name().into(),
            terms: space.terms().len(),
            features: space.features().len(),
            nnz: space.nnz(),
        }
    }
}
