//! JSON channel descriptions.
//!
//! Two shapes are accepted:
//!
//! ```json
//! {"kraus": [[[1,0],[0,0],[0,0],[0.4472135954999579,0]],
//!            [[0,0],[0.894427190999916,0],[0,0],[0,0]]]}
//! {"canonical": {"p": 0.8, "eta": [1.0, 0.0]}}
//! ```
//!
//! Matrices are four `[re, im]` pairs in row-major order. In the canonical
//! form `u` and `v` are optional and default to the identity.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{kraus_from_params, CanonicalChannelParams, KrausPair};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Row-major 2×2 complex matrix as `[re, im]` pairs.
pub type MatrixEntries = [[f64; 2]; 4];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    Kraus([MatrixEntries; 2]),
    Canonical(CanonicalSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalSpec {
    pub p: f64,
    pub eta: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<MatrixEntries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<MatrixEntries>,
}

pub fn matrix_from_entries<T: Real>(e: &MatrixEntries) -> Result<ComplexMatrix<T>> {
    ComplexMatrix::from_row_major(
        2,
        2,
        e.iter().map(|&[re, im]| Complex::new(T::lit(re), T::lit(im))).collect(),
    )
}

pub fn matrix_to_entries<T: Real>(m: &ComplexMatrix<T>) -> MatrixEntries {
    assert!(m.rows() == 2 && m.cols() == 2, "expected a 2x2 matrix");
    let mut out = [[0.0; 2]; 4];
    for (slot, z) in out.iter_mut().zip(m.data()) {
        *slot = [z.re.to_f64_lossy(), z.im.to_f64_lossy()];
    }
    out
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("channel spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel spec serializes")
    }

    pub fn from_kraus<T: Real>(kp: &KrausPair<T>) -> Self {
        ChannelSpec::Kraus([matrix_to_entries(&kp.c1), matrix_to_entries(&kp.c2)])
    }

    pub fn from_params<T: Real>(cp: &CanonicalChannelParams<T>) -> Self {
        ChannelSpec::Canonical(CanonicalSpec {
            p: cp.p.to_f64_lossy(),
            eta: [cp.eta.re.to_f64_lossy(), cp.eta.im.to_f64_lossy()],
            u: Some(matrix_to_entries(&cp.u)),
            v: Some(matrix_to_entries(&cp.v)),
        })
    }

    /// The Kraus pair described by the spec, checked for completeness.
    pub fn to_kraus<T: Real>(&self) -> Result<KrausPair<T>> {
        let kp = match self {
            ChannelSpec::Kraus([a, b]) => KrausPair::new(matrix_from_entries(a)?, matrix_from_entries(b)?)?,
            ChannelSpec::Canonical(cs) => kraus_from_params(&cs.to_params::<T>()?),
        };
        kp.ensure_valid()?;
        Ok(kp)
    }
}

impl CanonicalSpec {
    pub fn to_params<T: Real>(&self) -> Result<CanonicalChannelParams<T>> {
        let m = |e: &Option<MatrixEntries>| match e {
            Some(e) => matrix_from_entries(e),
            None => Ok(ComplexMatrix::identity(2)),
        };
        if !self.p.is_finite() || !self.eta.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite channel parameter".into()));
        }
        CanonicalChannelParams::new(
            T::lit(self.p),
            Complex::new(T::lit(self.eta[0]), T::lit(self.eta[1])),
            m(&self.u)?,
            m(&self.v)?,
        )
    }
}
