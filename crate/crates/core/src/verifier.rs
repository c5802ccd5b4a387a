//! Exact replay of synthesized constructions, plus a small-domain sweep
//! showing that universal combiners cannot exist on finite value domains.
//!
//! The verifier only understands serializable evaluators and witness bundles,
//! so artifacts loaded from disk and constructions built in-process go through
//! the same code path.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::descriptor::{EvaluatorDescriptor, WitnessBundle};
use crate::error::{Error, Result};
use crate::table::FinTable;
use crate::Nat;

/// Mismatch entries recorded per report unless a caller picks its own cap.
/// Every cell is still evaluated; only the recording stops.
pub const DEFAULT_MISMATCH_CAP: usize = 16;

mod dec_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Nat, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Nat, D::Error> {
        let s = String::deserialize(de)?;
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(D::Error::custom(format!("not a decimal natural: {s:?}")));
        }
        s.parse::<Nat>().map_err(D::Error::custom)
    }
}

/// One failed cell: where, what the table holds, what the evaluator produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub coords: Vec<usize>,
    #[serde(with = "dec_string")]
    pub expected: Nat,
    #[serde(with = "dec_string")]
    pub got: Nat,
}

/// Outcome of replaying a construction over a full grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Cells evaluated; always the whole grid.
    pub checked: usize,
    /// Mismatching cells in row-major order, truncated at the cap.
    pub mismatches: Vec<Mismatch>,
    /// For summed witness bundles: whether every cell's addition was over
    /// pairwise bit-disjoint values. Absent for direct bundles.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub carry_free: Option<bool>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Replay the construction over every cell of `g` with the default cap.
pub fn check(
    evaluator: &EvaluatorDescriptor,
    witnesses: &WitnessBundle,
    g: &FinTable,
) -> Result<VerifyReport> {
    check_capped(evaluator, witnesses, g, DEFAULT_MISMATCH_CAP)
}

/// Replay with an explicit mismatch-recording cap.
pub fn check_capped(
    evaluator: &EvaluatorDescriptor,
    witnesses: &WitnessBundle,
    g: &FinTable,
    cap: usize,
) -> Result<VerifyReport> {
    witnesses.validate(evaluator, g.dims())?;
    let dims = g.dims();
    let mut coords = vec![0usize; dims.len()];
    let mut mismatches = Vec::new();
    let mut carry_free: Option<bool> = None;
    for want in g.values() {
        let (args, disjoint) = witnesses.args_at(&coords);
        if let Some(d) = disjoint {
            carry_free = Some(carry_free.unwrap_or(true) && d);
        }
        let got = evaluator.eval(&args)?;
        if got != *want && mismatches.len() < cap {
            mismatches.push(Mismatch {
                coords: coords.clone(),
                expected: want.clone(),
                got,
            });
        }
        // Row-major odometer.
        for axis in (0..dims.len()).rev() {
            coords[axis] += 1;
            if coords[axis] < dims[axis] {
                break;
            }
            coords[axis] = 0;
        }
    }
    Ok(VerifyReport {
        checked: g.values().len(),
        mismatches,
        carry_free,
    })
}

/// Result of the exhaustive finite sweep of [`finite_no_universal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoUniversalReport {
    pub size: usize,
    /// True when every candidate combiner misses at least one target table.
    pub verdict: bool,
    /// Per candidate (in code order): the first target code no witness pair
    /// realizes. Truncated at the offending candidate if the verdict fails.
    pub missing_target: Vec<u64>,
    /// Per candidate: how many distinct targets its witness pairs realize.
    pub realizable: Vec<u32>,
    /// Scope of the result, for readers of serialized reports.
    pub note: &'static str,
}

const NOTE: &str = "refutes the split form with separate maps per argument; \
a single shared map is a restriction of that, so the verdict covers it too";

// Tables over [0,s) are coded as little-endian base-s digit strings: candidate
// combiners over their s² row-major cells, unary witnesses over their s points.
struct Sweep {
    cells: usize,
    targets: u64,
    /// s^i for each cell index i.
    powers: Vec<u64>,
    /// For every witness pair, the combiner cell feeding each target cell.
    pair_positions: Vec<Vec<usize>>,
}

impl Sweep {
    fn new(s: usize) -> Self {
        let cells = s * s;
        let targets = (s as u64).pow(cells as u32);
        let powers: Vec<u64> = (0..cells).map(|i| (s as u64).pow(i as u32)).collect();
        let witnesses: Vec<Vec<usize>> = (0..(s as u64).pow(s as u32))
            .map(|code| {
                (0..s)
                    .map(|x| (code / (s as u64).pow(x as u32) % s as u64) as usize)
                    .collect()
            })
            .collect();
        let mut pair_positions = Vec::with_capacity(witnesses.len() * witnesses.len());
        for g in &witnesses {
            for h in &witnesses {
                // Target cell (x,y), row-major index x·s + y, reads the
                // combiner at (g(x), h(y)).
                let pos = (0..s)
                    .flat_map(|x| (0..s).map(move |y| g[x] * s + h[y]))
                    .collect();
                pair_positions.push(pos);
            }
        }
        Sweep {
            cells,
            targets,
            powers,
            pair_positions,
        }
    }

    fn realized(&self, f_digits: &[u64], out: &mut [u64]) {
        out.fill(0);
        for pos in &self.pair_positions {
            let mut code = 0u64;
            for (i, &p) in pos.iter().enumerate() {
                code += f_digits[p] * self.powers[i];
            }
            out[(code / 64) as usize] |= 1 << (code % 64);
        }
    }
}

fn digits_step(digits: &mut [u64], base: u64) {
    for d in digits {
        *d += 1;
        if *d < base {
            return;
        }
        *d = 0;
    }
}

/// Exhaustively show that no combiner over the value domain `[0,s)` is
/// universal: for every candidate `F: [0,s)² → [0,s)` there is a target
/// `G: [0,s)² → [0,s)` with `G(x,y) ≠ F(g(x), h(y))` for all unary `g, h`.
/// Returns one such target per candidate. Supports sizes 2 and 3; size 1 is
/// excluded because a one-point value domain makes every target realizable
/// through constants.
pub fn finite_no_universal(s: usize) -> Result<NoUniversalReport> {
    if !(2..=3).contains(&s) {
        return Err(Error::SizeOutOfRange { size: s });
    }
    let sweep = Sweep::new(s);
    let words = (sweep.targets as usize).div_ceil(64);
    let mut seen = vec![0u64; words];
    let mut f_digits = vec![0u64; sweep.cells];
    let mut missing_target = Vec::with_capacity(sweep.targets as usize);
    let mut realizable = Vec::with_capacity(sweep.targets as usize);
    let mut verdict = true;
    for _ in 0..sweep.targets {
        sweep.realized(&f_digits, &mut seen);
        let mut count = 0u32;
        let mut missing = None;
        for (w, &word) in seen.iter().enumerate() {
            count += word.count_ones();
            if missing.is_none() {
                let hole = if w + 1 == words && !sweep.targets.is_multiple_of(64) {
                    // Mask off the bits past the last valid code.
                    !word & ((1u64 << (sweep.targets % 64)) - 1)
                } else {
                    !word
                };
                if hole != 0 {
                    let code = (w as u64) * 64 + hole.trailing_zeros() as u64;
                    if code < sweep.targets {
                        missing = Some(code);
                    }
                }
            }
        }
        realizable.push(count);
        match missing {
            Some(code) => missing_target.push(code),
            None => {
                verdict = false;
                break;
            }
        }
        digits_step(&mut f_digits, s as u64);
    }
    Ok(NoUniversalReport {
        size: s,
        verdict,
        missing_target,
        realizable,
        note: NOTE,
    })
}

/// Re-derive every certificate of a sweep report from scratch: each recorded
/// target must elude all witness pairs of its candidate.
pub fn validate_no_universal(report: &NoUniversalReport) -> Result<bool> {
    let s = report.size;
    if !(2..=3).contains(&s) {
        return Err(Error::SizeOutOfRange { size: s });
    }
    let sweep = Sweep::new(s);
    if !report.verdict || report.missing_target.len() != sweep.targets as usize {
        return Ok(false);
    }
    let mut f_digits = vec![0u64; sweep.cells];
    for &cert in &report.missing_target {
        for pos in &sweep.pair_positions {
            let mut code = 0u64;
            for (i, &p) in pos.iter().enumerate() {
                code += f_digits[p] * sweep.powers[i];
            }
            if code == cert {
                return Ok(false);
            }
        }
        digits_step(&mut f_digits, s as u64);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::synth_additive;
    use crate::descriptor::{NamedWitness, SlotBinding, SlotCombine};
    use crate::table::WitnessMap;
    use crate::universal::{f_univ, synth_two};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    fn random_square(side: usize, bound: u64, seed: u64) -> FinTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FinTable::from_fn(vec![side, side], |_| n(rng.gen_range(0..bound))).unwrap()
    }

    #[test]
    fn clean_synthesis_passes() {
        let g = random_square(6, 200, 1);
        let syn = synth_two(&g).unwrap().into_synthesis();
        let report = check(&syn.evaluator, &syn.witnesses, &g).unwrap();
        assert_eq!(report.checked, 36);
        assert!(report.ok());
        assert_eq!(report.carry_free, None);

        // Independent straight-line replay agrees with the report.
        let (w_row, w_col) = (
            syn.witnesses.map("w_row").unwrap(),
            syn.witnesses.map("w_col").unwrap(),
        );
        g.for_each_cell(|c, want| {
            assert_eq!(f_univ(w_row.at(c[0]), w_col.at(c[1])), *want);
        });
    }

    #[test]
    fn tampering_surfaces_with_coordinates() {
        let g = FinTable::new(vec![4, 4], vec![n(5); 16]).unwrap();
        let mut syn = synth_two(&g).unwrap().into_synthesis();
        // Zero out the column witness for β = 2: cell (0,2) must now decode 0.
        let w_col = syn.witnesses.map("w_col").unwrap();
        let mut values = w_col.values().to_vec();
        values[2] = n(0);
        syn.witnesses.maps[1] = NamedWitness {
            name: "w_col".into(),
            map: WitnessMap::unary(values).unwrap(),
        };
        let report = check(&syn.evaluator, &syn.witnesses, &g).unwrap();
        assert!(!report.ok());
        assert_eq!(report.checked, 16);
        let first = &report.mismatches[0];
        assert_eq!(first.coords, vec![0, 2]);
        assert_eq!(first.expected, n(5));
        assert_eq!(first.got, n(0));
    }

    #[test]
    fn recording_stops_at_the_cap() {
        let g = FinTable::new(vec![5, 5], vec![n(7); 25]).unwrap();
        let bundle = WitnessBundle {
            slots: vec![
                SlotBinding { map: 0, coords: vec![0] },
                SlotBinding { map: 0, coords: vec![1] },
            ],
            combine: SlotCombine::Direct,
            maps: vec![NamedWitness {
                name: "w".into(),
                map: WitnessMap::unary(vec![n(0); 5]).unwrap(),
            }],
        };
        let full = check(&EvaluatorDescriptor::CoreF, &bundle, &g).unwrap();
        assert_eq!(full.checked, 25);
        assert_eq!(full.mismatches.len(), DEFAULT_MISMATCH_CAP);
        let tight = check_capped(&EvaluatorDescriptor::CoreF, &bundle, &g, 3).unwrap();
        assert_eq!(tight.mismatches.len(), 3);
        assert_eq!(tight.checked, 25);

        // All-zero table under the same all-zero witnesses is a clean pass.
        let zeros = FinTable::new(vec![5, 5], vec![n(0); 25]).unwrap();
        assert!(check(&EvaluatorDescriptor::CoreF, &bundle, &zeros).unwrap().ok());
    }

    #[test]
    fn shape_problems_error_out_instead_of_partially_checking() {
        let g = random_square(4, 50, 2);
        let syn = synth_two(&g).unwrap().into_synthesis();
        let wrong = random_square(5, 50, 3);
        assert!(check(&syn.evaluator, &syn.witnesses, &wrong).is_err());
        let cube = FinTable::new(vec![2, 2, 2], vec![n(0); 8]).unwrap();
        assert!(check(&syn.evaluator, &syn.witnesses, &cube).is_err());
    }

    #[test]
    fn summed_bundles_report_carry_freeness() {
        let g = random_square(5, 100, 4);
        let syn = synth_additive(&g).unwrap().into_synthesis();
        let report = check(&syn.evaluator, &syn.witnesses, &g).unwrap();
        assert!(report.ok());
        assert_eq!(report.carry_free, Some(true));
    }

    #[test]
    fn report_serializes_with_decimal_strings() {
        let report = VerifyReport {
            checked: 4,
            mismatches: vec![Mismatch {
                coords: vec![1, 0],
                expected: n(2),
                got: n(0),
            }],
            carry_free: None,
        };
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"checked":4,"mismatches":[{"coords":[1,0],"expected":"2","got":"0"}]}"#
        );
        let back: VerifyReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);

        let with_flag = VerifyReport {
            checked: 1,
            mismatches: vec![],
            carry_free: Some(true),
        };
        let json = serde_json::to_string(&with_flag).unwrap();
        assert_eq!(json, r#"{"checked":1,"mismatches":[],"carry_free":true}"#);
    }

    #[test]
    fn no_universal_combiner_on_two_values() {
        let report = finite_no_universal(2).unwrap();
        assert!(report.verdict);
        assert_eq!(report.missing_target.len(), 16);
        // Every candidate realizes strictly fewer than all 16 targets.
        assert!(report.realizable.iter().all(|&c| c < 16));
        assert!(validate_no_universal(&report).unwrap());
    }

    #[test]
    fn no_universal_combiner_on_three_values() {
        let report = finite_no_universal(3).unwrap();
        assert!(report.verdict);
        assert_eq!(report.missing_target.len(), 19683);
        // At most 27·27 witness pairs, so the image is always short.
        assert!(report.realizable.iter().all(|&c| c <= 729));
        assert!(validate_no_universal(&report).unwrap());
    }

    #[test]
    fn sweep_rejects_unsupported_sizes() {
        assert!(matches!(
            finite_no_universal(1),
            Err(Error::SizeOutOfRange { size: 1 })
        ));
        assert!(matches!(
            finite_no_universal(4),
            Err(Error::SizeOutOfRange { size: 4 })
        ));
    }

    #[test]
    fn validation_rejects_doctored_certificates() {
        let mut report = finite_no_universal(2).unwrap();
        // The all-zero candidate realizes the all-zero target, so claiming it
        // as missing must fail validation.
        report.missing_target[0] = 0;
        assert!(!validate_no_universal(&report).unwrap());
    }
}
