//! Hypergraph patterns and their classification.
//!
//! A [`SigmaSpec`] names the shape of a composition: `n` coordinates, plus a
//! family of coordinate subsets, one witness slot per member. Whether such a
//! pattern admits universal functions is decided by [`classify`] without ever
//! running a synthesis: the answer depends only on which coordinate sets the
//! family covers.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Bound keeping bitmask arithmetic exact.
const MAX_COORDS: usize = 64;

/// A family of subsets of `{0, …, n−1}`.
///
/// Canonical form throughout: each member sorted ascending, the family sorted
/// lexicographically with no duplicates. Constructors accept any order and
/// canonicalize; genuinely malformed input (out-of-range coordinates, repeated
/// elements, repeated members) is rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaSpec {
    n: usize,
    family: Vec<Vec<usize>>,
}

impl SigmaSpec {
    pub fn new(n: usize, family: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSigma {
                reason: "n must be at least 1".into(),
            });
        }
        if n > MAX_COORDS {
            return Err(Error::InvalidSigma {
                reason: format!("n must be at most {MAX_COORDS}"),
            });
        }
        let mut canon = Vec::with_capacity(family.len());
        for mut q in family {
            q.sort_unstable();
            if q.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidSigma {
                    reason: format!("member {q:?} repeats a coordinate"),
                });
            }
            if let Some(&bad) = q.iter().find(|&&c| c >= n) {
                return Err(Error::InvalidSigma {
                    reason: format!("coordinate {bad} out of range for n = {n}"),
                });
            }
            canon.push(q);
        }
        canon.sort();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSigma {
                reason: "family repeats a member".into(),
            });
        }
        Ok(Self { n, family: canon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Members in canonical order.
    pub fn family(&self) -> &[Vec<usize>] {
        &self.family
    }

    /// The least coordinate no member contains, if any.
    pub fn uncovered(&self) -> Option<usize> {
        let mut union = 0u64;
        for q in &self.family {
            union |= mask(q);
        }
        (0..self.n).find(|&i| union >> i & 1 == 0)
    }

    /// For each coordinate i, the index of the lexicographically least member
    /// containing i. Errors when some coordinate is uncovered.
    pub fn slot_assignment(&self) -> Result<Vec<usize>> {
        (0..self.n)
            .map(|i| {
                self.family
                    .iter()
                    .position(|q| q.contains(&i))
                    .ok_or(Error::NonCoveringSigma { uncovered: i })
            })
            .collect()
    }
}

impl<'de> Deserialize<'de> for SigmaSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            family: Vec<Vec<usize>>,
        }
        let raw = Raw::deserialize(de)?;
        SigmaSpec::new(raw.n, raw.family).map_err(serde::de::Error::custom)
    }
}

fn mask(q: &[usize]) -> u64 {
    q.iter().fold(0u64, |m, &c| m | 1 << c)
}

fn unmask(mut m: u64) -> Vec<usize> {
    let mut q = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        let c = m.trailing_zeros() as usize;
        q.push(c);
        m &= m - 1;
    }
    q
}

/// Close the family downward: every subset of a member joins the family
/// (including the empty set, whenever the family is non-empty).
pub fn downward_closure(spec: &SigmaSpec) -> SigmaSpec {
    let mut seen = std::collections::BTreeSet::new();
    for q in spec.family() {
        let full = mask(q);
        // enumerate submasks, including 0
        let mut sub = full;
        loop {
            seen.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & full;
        }
    }
    let family = seen.into_iter().map(unmask).collect();
    SigmaSpec::new(spec.n(), family).expect("closure of a valid spec stays valid")
}

/// Drop every member contained in another member.
pub fn remove_subsumed(spec: &SigmaSpec) -> SigmaSpec {
    let masks: Vec<u64> = spec.family().iter().map(|q| mask(q)).collect();
    let family = spec
        .family()
        .iter()
        .zip(&masks)
        .filter(|(_, &m)| !masks.iter().any(|&other| other != m && other & m == m))
        .map(|(q, _)| q.clone())
        .collect();
    SigmaSpec::new(spec.n(), family).expect("subfamily of a valid spec stays valid")
}

/// Outcome of [`classify`], with a checkable certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Some coordinate appears in no member; no evaluator can depend on it.
    TriviallyFalse { uncovered: usize },
    /// The full coordinate set is a member; one slot sees every coordinate.
    TriviallyTrue,
    /// Properly between the trivial cases: the pattern is exactly as strong as
    /// universality with m-ary inner witnesses. `excluded` is a smallest
    /// coordinate set (of size m+1) no member contains.
    EquivalentTo { m: usize, excluded: Vec<usize> },
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Classification::TriviallyFalse { uncovered } => {
                let mut s = ser.serialize_struct("Classification", 2)?;
                s.serialize_field("verdict", "TriviallyFalse")?;
                s.serialize_field("certificate", &serde_json_shim::Uncovered { uncovered: *uncovered })?;
                s.end()
            }
            Classification::TriviallyTrue => {
                let mut s = ser.serialize_struct("Classification", 1)?;
                s.serialize_field("verdict", "TriviallyTrue")?;
                s.end()
            }
            Classification::EquivalentTo { m, excluded } => {
                let mut s = ser.serialize_struct("Classification", 3)?;
                s.serialize_field("verdict", "EquivalentTo")?;
                s.serialize_field("m", m)?;
                s.serialize_field("certificate", &serde_json_shim::Excluded { excluded_set: excluded })?;
                s.end()
            }
        }
    }
}

mod serde_json_shim {
    use serde::Serialize;

    #[derive(Serialize)]
    pub struct Uncovered {
        pub uncovered: usize,
    }

    #[derive(Serialize)]
    pub struct Excluded<'a> {
        pub excluded_set: &'a [usize],
    }
}

/// Decide the strength of a pattern.
///
/// Uncovered coordinate → [`Classification::TriviallyFalse`]. Full set present
/// → [`Classification::TriviallyTrue`]. Otherwise the pattern is equivalent to
/// plain m-ary universality where m+1 is the size of the smallest coordinate
/// set not below any member; the scan returns the lexicographically first
/// witness of that size.
pub fn classify(spec: &SigmaSpec) -> Classification {
    if let Some(uncovered) = spec.uncovered() {
        return Classification::TriviallyFalse { uncovered };
    }
    let n = spec.n();
    let masks: Vec<u64> = spec.family().iter().map(|q| mask(q)).collect();
    let full: u64 = if n == 64 { !0 } else { (1 << n) - 1 };
    if masks.contains(&full) {
        return Classification::TriviallyTrue;
    }
    // Smallest subset contained in no member. Sizes 0 and 1 are always
    // covered here (the family covers every coordinate), and size n always
    // misses (the full set is absent), so the scan terminates with 2 ≤ k ≤ n.
    for k in 2..=n {
        if let Some(excluded) = first_miss(n, k, &masks) {
            return Classification::EquivalentTo { m: k - 1, excluded };
        }
    }
    unreachable!("the full coordinate set is absent, so some size misses");
}

// Lexicographically first k-subset of {0..n-1} not contained in any mask.
fn first_miss(n: usize, k: usize, masks: &[u64]) -> Option<Vec<usize>> {
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let m = mask(&combo);
        if !masks.iter().any(|&q| q & m == m) {
            return Some(combo);
        }
        // advance to the next combination in lexicographic order
        let mut i = k;
        while i > 0 && combo[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        combo[i - 1] += 1;
        for j in i..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}
