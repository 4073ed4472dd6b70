//! Versioned binary container for a trained model.
//!
//! Layout (all integers `u32` and floats `f64`, little-endian):
//!
//! ```text
//! magic "ECOCBNDL" | version
//! has_pca: u8 | [input_dim | output_dim | mean[input_dim] | eigenvalues[output_dim]
//!               | components[output_dim × input_dim]]
//! input_dim | hidden_dim | output_dim | hidden weights | output weights
//! class_count | code_length | entries[class_count × code_length] as u8 (0, 1, 2 = don't care)
//! ```

use crate::codebook::{CodeMatrix, Trit};
use crate::error::{Error, Result};
use crate::features::PcaModel;
use crate::network::Mlp;

pub const MAGIC: &[u8; 8] = b"ECOCBNDL";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelBundle {
    pub pca: Option<PcaModel>,
    pub network: Mlp,
    pub matrix: CodeMatrix,
}

impl ModelBundle {
    /// Raw feature dimension the bundle expects.
    pub fn input_dim(&self) -> usize {
        self.pca.as_ref().map_or(self.network.input_dim(), PcaModel::input_dim)
    }

    /// Network input for one raw sample.
    pub fn prepare(&self, raw: &[f64]) -> Result<Vec<f64>> {
        match &self.pca {
            Some(pca) => pca.project(raw),
            None => Ok(raw.to_vec()),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        put_u32(&mut out, VERSION);
        match &self.pca {
            Some(pca) => {
                out.push(1);
                put_u32(&mut out, pca.input_dim() as u32);
                put_u32(&mut out, pca.output_dim() as u32);
                put_f64s(&mut out, pca.mean());
                put_f64s(&mut out, pca.eigenvalues());
                put_f64s(&mut out, pca.components());
            }
            None => out.push(0),
        }
        let net = &self.network;
        for dim in [net.input_dim(), net.hidden_dim(), net.output_dim()] {
            put_u32(&mut out, dim as u32);
        }
        put_f64s(&mut out, net.hidden_weights());
        put_f64s(&mut out, net.output_weights());
        put_u32(&mut out, self.matrix.class_count() as u32);
        put_u32(&mut out, self.matrix.code_length() as u32);
        for row in self.matrix.rows() {
            out.extend(row.iter().map(|t| match t {
                Trit::Zero => 0u8,
                Trit::One => 1,
                Trit::DontCare => 2,
            }));
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(MAGIC.len())? != MAGIC {
            return Err(r.error("not a model bundle (bad magic)"));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(r.error(&format!("unsupported bundle version {version}")));
        }
        let pca = match r.take(1)?[0] {
            0 => None,
            1 => {
                let input = r.dim()?;
                let output = r.dim()?;
                let mean = r.f64s(input)?;
                let eigenvalues = r.f64s(output)?;
                let components = r.f64s(r.product(output, input)?)?;
                Some(PcaModel::from_parts(mean, components, eigenvalues)?)
            }
            flag => return Err(r.error(&format!("invalid PCA flag {flag}"))),
        };
        let (input, hidden, output) = (r.dim()?, r.dim()?, r.dim()?);
        let hidden_weights = r.f64s(r.product(input + 1, hidden)?)?;
        let output_weights = r.f64s(r.product(hidden + 1, output)?)?;
        let network = Mlp::from_weights(input, hidden, output, hidden_weights, output_weights)?;
        let (classes, length) = (r.dim()?, r.dim()?);
        let raw = r.take(r.product(classes, length)?)?;
        let rows = raw
            .chunks(length)
            .map(|row| {
                row.iter()
                    .map(|b| match b {
                        0 => Ok(Trit::Zero),
                        1 => Ok(Trit::One),
                        2 => Ok(Trit::DontCare),
                        other => Err(Error::parse(None, format!("invalid code entry {other}"))),
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<Trit>>>>()?;
        let matrix = CodeMatrix::from_rows(rows)?;
        if r.pos != bytes.len() {
            return Err(r.error("trailing bytes after bundle"));
        }
        let bundle = Self { pca, network, matrix };
        bundle.check_consistency()?;
        Ok(bundle)
    }

    pub fn check_consistency(&self) -> Result<()> {
        if let Some(pca) = &self.pca {
            if pca.output_dim() != self.network.input_dim() {
                return Err(Error::InvalidDimension(format!(
                    "PCA yields {} features but the network takes {}",
                    pca.output_dim(),
                    self.network.input_dim()
                )));
            }
        }
        if self.matrix.code_length() != self.network.output_dim() {
            return Err(Error::InvalidDimension(format!(
                "code length {} differs from {} network outputs",
                self.matrix.code_length(),
                self.network.output_dim()
            )));
        }
        Ok(())
    }
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_f64s(out: &mut Vec<u8>, values: &[f64]) {
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn error(&self, message: &str) -> Error {
        Error::parse(None, format!("bundle offset {}: {message}", self.pos))
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        match end {
            Some(end) => {
                let slice = &self.bytes[self.pos..end];
                self.pos = end;
                Ok(slice)
            }
            None => Err(self.error(&format!("truncated; needed {n} more bytes"))),
        }
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn dim(&mut self) -> Result<usize> {
        match self.u32()? {
            0 => Err(self.error("zero dimension")),
            d => Ok(d as usize),
        }
    }

    fn product(&self, a: usize, b: usize) -> Result<usize> {
        a.checked_mul(b).ok_or_else(|| self.error("dimension product overflows"))
    }

    fn f64s(&mut self, count: usize) -> Result<Vec<f64>> {
        let bytes = self.take(count.checked_mul(8).ok_or_else(|| self.error("length overflows"))?)?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect())
    }
}
