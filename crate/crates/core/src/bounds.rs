use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bounds on `R1`, `R2`, `R1 + R2` and `R0 + R1 + R2`, in bits per channel use.
///
/// Every region evaluated by this crate is, at a fixed choice of input
/// distribution (or power split), the set of non-negative rate triples obeying
/// these four constraints. Entries may be `+inf` when a constraint is absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundSet {
    pub b1: f64,
    pub b2: f64,
    pub b12: f64,
    pub b012: f64,
}

impl BoundSet {
    pub fn new(b1: f64, b2: f64, b12: f64, b012: f64) -> Result<Self> {
        let bs = Self { b1, b2, b12, b012 };
        for v in bs.as_array() {
            if v.is_nan() || v < 0.0 {
                return Err(Error::Validation(format!("bound {v} must be >= 0 (or +inf)")));
            }
        }
        Ok(bs)
    }

    pub const ZERO: BoundSet = BoundSet { b1: 0.0, b2: 0.0, b12: 0.0, b012: 0.0 };

    pub fn as_array(&self) -> [f64; 4] {
        [self.b1, self.b2, self.b12, self.b012]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self { b1: v[0], b2: v[1], b12: v[2], b012: v[3] }
    }

    /// Componentwise minimum.
    pub fn min(&self, other: &BoundSet) -> BoundSet {
        self.zip(other, f64::min)
    }

    /// Adds the same rate to every bound (the `R + C` shift of a conferenced receiver).
    pub fn shifted(&self, c: f64) -> BoundSet {
        Self::from_array(self.as_array().map(|v| v + c))
    }

    pub fn zip(&self, other: &BoundSet, f: impl Fn(f64, f64) -> f64) -> BoundSet {
        let (a, b) = (self.as_array(), other.as_array());
        Self::from_array([f(a[0], b[0]), f(a[1], b[1]), f(a[2], b[2]), f(a[3], b[3])])
    }

    /// `true` when every entry is `<= other`'s entry plus `tol`.
    pub fn dominated_by(&self, other: &BoundSet, tol: f64) -> bool {
        self.as_array().iter().zip(other.as_array()).all(|(a, b)| *a <= b + tol)
    }

    /// Largest absolute entrywise difference (`0` where both are `+inf`).
    pub fn max_abs_diff(&self, other: &BoundSet) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| if a == &b { 0.0 } else { (a - b).abs() })
            .fold(0.0, f64::max)
    }

    /// Checks whether a rate triple `(R0, R1, R2)` satisfies all four bounds.
    pub fn admits(&self, r: [f64; 3], tol: f64) -> bool {
        let [r0, r1, r2] = r;
        r0 >= -tol
            && r1 >= -tol
            && r2 >= -tol
            && r1 <= self.b1 + tol
            && r2 <= self.b2 + tol
            && r1 + r2 <= self.b12 + tol
            && r0 + r1 + r2 <= self.b012 + tol
    }
}

/// The two orderings of two-round conferencing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoRoundBounds {
    /// Decoder 1 compresses, decoder 2 decodes with that help and forwards
    /// its decision over the `C21` link.
    pub decoder2_first: BoundSet,
    /// Decoder 2 compresses, decoder 1 decodes first and forwards over `C12`.
    pub decoder1_first: BoundSet,
}

impl TwoRoundBounds {
    pub fn both(&self) -> [BoundSet; 2] {
        [self.decoder2_first, self.decoder1_first]
    }
}
