//! Dense finite tables over grids of naturals.
//!
//! [`FinTable`] is the target of synthesis: a total function on a product of
//! initial segments `[0,d₁)×…×[0,d_k)`, stored row-major. [`WitnessMap`] is the
//! same storage for synthesized witnesses, except that zero dimensions are
//! allowed (a 0-ary map is a single constant). Values serialize as decimal
//! strings: witness integers exceed every fixed machine width by design.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Nat;

fn checked_len(dims: &[usize]) -> Option<usize> {
    dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d))
}

fn row_major(dims: &[usize], coords: &[usize]) -> usize {
    assert_eq!(dims.len(), coords.len(), "coordinate arity mismatch");
    let mut idx = 0;
    for (c, d) in coords.iter().zip(dims) {
        assert!(c < d, "coordinate {c} out of range for dimension {d}");
        idx = idx * d + c;
    }
    idx
}

mod dec_strings {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Nat], ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(values.iter().map(Nat::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Vec<Nat>, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter()
            .map(|s| {
                if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                    Err(D::Error::custom(format!("not a decimal natural: {s:?}")))
                } else {
                    s.parse::<Nat>().map_err(D::Error::custom)
                }
            })
            .collect()
    }
}

/// Total function on a finite grid, at least one axis, every axis non-empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinTable {
    dims: Vec<usize>,
    #[serde(with = "dec_strings")]
    values: Vec<Nat>,
}

impl FinTable {
    pub fn new(dims: Vec<usize>, values: Vec<Nat>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::WrongShape {
                expected: "non-empty grid",
                dims,
            });
        }
        let expected = checked_len(&dims).ok_or_else(|| Error::WrongShape {
            expected: "addressable grid",
            dims: dims.clone(),
        })?;
        if values.len() != expected {
            return Err(Error::MalformedTable {
                dims,
                expected,
                got: values.len(),
            });
        }
        Ok(Self { dims, values })
    }

    /// Build from a function over coordinates, row-major.
    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> Nat) -> Result<Self> {
        let len = checked_len(&dims).filter(|_| !dims.is_empty() && !dims.contains(&0));
        let len = len.ok_or_else(|| Error::WrongShape {
            expected: "non-empty grid",
            dims: dims.clone(),
        })?;
        let mut values = Vec::with_capacity(len);
        let mut coords = vec![0usize; dims.len()];
        loop {
            values.push(f(&coords));
            // row-major increment, last coordinate fastest
            let mut axis = dims.len();
            loop {
                if axis == 0 {
                    return Self::new(dims, values);
                }
                axis -= 1;
                coords[axis] += 1;
                if coords[axis] < dims[axis] {
                    break;
                }
                coords[axis] = 0;
            }
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[Nat] {
        &self.values
    }

    /// Take the row-major values out without copying.
    pub fn into_values(self) -> Vec<Nat> {
        self.values
    }

    pub fn get(&self, coords: &[usize]) -> &Nat {
        &self.values[row_major(&self.dims, coords)]
    }

    /// Side length if the table is a square, an error otherwise.
    pub fn square_side(&self) -> Result<usize> {
        match *self.dims {
            [a, b] if a == b => Ok(a),
            _ => Err(Error::WrongShape {
                expected: "square",
                dims: self.dims.clone(),
            }),
        }
    }

    /// Side length if the table is a k-dimensional hypercube of arity `k`.
    pub fn hypercube_side(&self, k: usize) -> Result<usize> {
        if self.dims.len() == k && self.dims.iter().all(|&d| d == self.dims[0]) {
            Ok(self.dims[0])
        } else {
            Err(Error::WrongShape {
                expected: "hypercube of the requested arity",
                dims: self.dims.clone(),
            })
        }
    }

    /// Visit every cell row-major.
    pub fn for_each_cell(&self, mut f: impl FnMut(&[usize], &Nat)) {
        let mut coords = vec![0usize; self.dims.len()];
        for v in &self.values {
            f(&coords, v);
            let mut axis = self.dims.len();
            loop {
                if axis == 0 {
                    return;
                }
                axis -= 1;
                coords[axis] += 1;
                if coords[axis] < self.dims[axis] {
                    break;
                }
                coords[axis] = 0;
            }
        }
    }
}

impl<'de> Deserialize<'de> for FinTable {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dims: Vec<usize>,
            #[serde(with = "dec_strings")]
            values: Vec<Nat>,
        }
        let raw = Raw::deserialize(de)?;
        FinTable::new(raw.dims, raw.values).map_err(D::Error::custom)
    }
}

/// Materialized witness: a dense finite map, possibly 0-ary (one constant).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessMap {
    dims: Vec<usize>,
    #[serde(with = "dec_strings")]
    values: Vec<Nat>,
}

impl WitnessMap {
    pub fn new(dims: Vec<usize>, values: Vec<Nat>) -> Result<Self> {
        let expected = checked_len(&dims).filter(|_| !dims.contains(&0));
        let expected = expected.ok_or_else(|| Error::WrongShape {
            expected: "addressable witness domain",
            dims: dims.clone(),
        })?;
        if values.len() != expected {
            return Err(Error::MalformedTable {
                dims,
                expected,
                got: values.len(),
            });
        }
        Ok(Self { dims, values })
    }

    /// Unary map over `[0, values.len())`.
    pub fn unary(values: Vec<Nat>) -> Result<Self> {
        Self::new(vec![values.len()], values)
    }

    /// All-zero map on the given domain.
    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let len = checked_len(&dims).filter(|_| !dims.contains(&0));
        let len = len.ok_or_else(|| Error::WrongShape {
            expected: "addressable witness domain",
            dims: dims.clone(),
        })?;
        Self::new(dims, vec![Nat::default(); len])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[Nat] {
        &self.values
    }

    pub fn get(&self, coords: &[usize]) -> &Nat {
        &self.values[row_major(&self.dims, coords)]
    }

    /// Shorthand for unary maps.
    pub fn at(&self, i: usize) -> &Nat {
        self.get(&[i])
    }

    /// Keep only the first `len` entries of a unary map.
    pub fn truncate_unary(&self, len: usize) -> Result<Self> {
        match *self.dims {
            [d] if d >= len => Self::new(vec![len], self.values[..len].to_vec()),
            _ => Err(Error::WrongShape {
                expected: "unary witness at least as long as the requested prefix",
                dims: self.dims.clone(),
            }),
        }
    }
}

impl<'de> Deserialize<'de> for WitnessMap {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dims: Vec<usize>,
            #[serde(with = "dec_strings")]
            values: Vec<Nat>,
        }
        let raw = Raw::deserialize(de)?;
        WitnessMap::new(raw.dims, raw.values).map_err(D::Error::custom)
    }
}
