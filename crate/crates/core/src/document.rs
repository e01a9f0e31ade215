//! JSON matrix documents: row-major `[re, im]` entries plus the metadata
//! needed to regenerate the matrix.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicParams {
    pub order: u32,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub lambda: [f64; 2],
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// e.g. `S+`, `R`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spins: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<CyclicParams>,
    pub basis_tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub dims: [usize; 2],
    pub entries: Vec<[f64; 2]>,
    pub metadata: Metadata,
}

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

impl MatrixDocument {
    pub fn from_matrix(m: &CMat, metadata: Metadata) -> Self {
        let (r, c) = m.shape();
        let mut entries = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self { dims: [r, c], entries, metadata }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        self.validate()?;
        let [r, c] = self.dims;
        Ok(CMat::from_row_iterator(r, c, self.entries.iter().map(|e| Complex64::new(e[0], e[1]))))
    }

    pub fn validate(&self) -> Result<()> {
        let [r, c] = self.dims;
        if self.entries.len() != r * c {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {r}x{c} matrix",
                self.entries.len()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("bad matrix document: {e}")))?;
        doc.validate()?;
        Ok(doc)
    }
}

pub fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn meta() -> Metadata {
        Metadata {
            name: Some("R".into()),
            q: Some([0.3, 0.4]),
            u: Some([0.1, -0.2]),
            spins: Some(vec!["1/2".into(), "1".into()]),
            basis_tag: "monomial".into(),
            normalization: Some("R0 = 1".into()),
            tool_version: TOOL_VERSION.into(),
            seed: Some(42),
            ..Default::default()
        }
    }

    #[test]
    fn matrix_round_trip() {
        let m = CMat::from_fn(2, 3, |i, j| Complex64::new(i as f64 + 0.5, -(j as f64) / 3.0));
        let doc = MatrixDocument::from_matrix(&m, meta());
        assert_eq!(doc.to_matrix().unwrap(), m);
        assert_eq!(doc.entries[1], [0.5, -1.0 / 3.0]);
    }

    #[test]
    fn bad_entry_count() {
        let mut doc = MatrixDocument::from_matrix(&CMat::zeros(2, 2), meta());
        doc.entries.pop();
        assert!(matches!(doc.to_matrix(), Err(Error::DimensionMismatch(_))));
        assert!(MatrixDocument::from_json(&doc.to_json()).is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip_is_byte_identical(vals in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 9)) {
            let m = CMat::from_row_iterator(3, 3, vals.iter().map(|&(a, b)| Complex64::new(a, b)));
            let first = MatrixDocument::from_matrix(&m, meta()).to_json();
            let second = MatrixDocument::from_json(&first).unwrap().to_json();
            prop_assert_eq!(first, second);
        }
    }
}
