//! The binary universal function and witness synthesis for square tables.
//!
//! [`f_univ`] is universal for finite targets: for every square table `G` there
//! are unary witnesses with `f_univ(w_row(α), w_col(β)) = G(α,β)` on the whole
//! grid, and [`synth_two`] materializes them. The trick is asymmetric coverage:
//! each argument carries its own index paired with a coded sequence, the column
//! witness answers queries on or above the diagonal, and the row witness
//! answers the rest.

use crate::descriptor::{EvaluatorDescriptor, NamedWitness, SlotBinding, SlotCombine, Synthesis, WitnessBundle};
use crate::error::{Error, Result};
use crate::pairing::{pair, unpair};
use crate::seqcodec::{rho, seq_encode};
use crate::table::{FinTable, WitnessMap};
use crate::Nat;

/// The universal binary function.
///
/// Both arguments split as `(index, code)`. Whichever side has the smaller
/// index gets looked up in the other side's coded sequence: entry `α₀` of
/// `β₁` when `α₀ ≤ β₀`, entry `β₀` of `α₁` otherwise.
pub fn f_univ(u: &Nat, v: &Nat) -> Nat {
    let (a0, a1) = unpair(u);
    let (b0, b1) = unpair(v);
    if a0 <= b0 {
        rho(&b1, &a0)
    } else {
        rho(&a1, &b0)
    }
}

/// Witnesses for a square table under [`f_univ`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoWitnesses {
    pub w_row: WitnessMap,
    pub w_col: WitnessMap,
}

/// Synthesize row/column witnesses with
/// `f_univ(w_row(α), w_col(β)) = G(α,β)` for all `α,β` below the side.
///
/// Column β codes the column prefix `G(0,β)..G(β,β)` (serving `α ≤ β`); row α
/// codes the row prefix `G(α,0)..G(α,α−1)` (serving `β < α`, empty at α = 0).
/// A diagonal query `α = β` is answered by the column witness.
pub fn synth_two(g: &FinTable) -> Result<TwoWitnesses> {
    let n = g.square_side()?;
    let mut rows = Vec::with_capacity(n);
    let mut cols = Vec::with_capacity(n);
    for a in 0..n {
        let row: Vec<Nat> = (0..a).map(|b| g.get(&[a, b]).clone()).collect();
        rows.push(pair(&Nat::from(a), &seq_encode(&row)));
        let col: Vec<Nat> = (0..=a).map(|r| g.get(&[r, a]).clone()).collect();
        cols.push(pair(&Nat::from(a), &seq_encode(&col)));
    }
    Ok(TwoWitnesses {
        w_row: WitnessMap::unary(rows)?,
        w_col: WitnessMap::unary(cols)?,
    })
}

impl TwoWitnesses {
    pub fn into_synthesis(self) -> Synthesis {
        Synthesis {
            evaluator: EvaluatorDescriptor::CoreF,
            witnesses: WitnessBundle {
                slots: vec![
                    SlotBinding { map: 0, coords: vec![0] },
                    SlotBinding { map: 1, coords: vec![1] },
                ],
                combine: SlotCombine::Direct,
                maps: vec![
                    NamedWitness { name: "w_row".into(), map: self.w_row },
                    NamedWitness { name: "w_col".into(), map: self.w_col },
                ],
            },
        }
    }
}

/// A single witness feeding both argument positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleWitness {
    pub w: WitnessMap,
    pub evaluator: EvaluatorDescriptor,
}

/// Merge row/column witnesses into one map `w(u) = pair(w_row(u), w_col(u))`
/// used at both argument positions of a wrapped evaluator:
/// `f(x, y) = f_univ(first(unpair(x)), second(unpair(y)))`.
pub fn to_single(w_row: &WitnessMap, w_col: &WitnessMap) -> Result<SingleWitness> {
    let (left, right) = match (w_row.dims(), w_col.dims()) {
        (&[l], &[r]) => (l, r),
        _ => {
            return Err(Error::WrongShape {
                expected: "unary witness",
                dims: if w_row.dims().len() == 1 { w_col.dims().to_vec() } else { w_row.dims().to_vec() },
            })
        }
    };
    if left != right {
        return Err(Error::DomainMismatch { left, right });
    }
    let merged: Vec<Nat> = (0..left)
        .map(|u| pair(w_row.at(u), w_col.at(u)))
        .collect();
    Ok(SingleWitness {
        w: WitnessMap::unary(merged)?,
        evaluator: EvaluatorDescriptor::SingleWrapped { arity: 2 },
    })
}

impl SingleWitness {
    pub fn into_synthesis(self) -> Synthesis {
        let arity = self.evaluator.arity();
        Synthesis {
            evaluator: self.evaluator,
            witnesses: WitnessBundle {
                slots: (0..arity)
                    .map(|j| SlotBinding { map: 0, coords: vec![j] })
                    .collect(),
                combine: SlotCombine::Direct,
                maps: vec![NamedWitness { name: "w".into(), map: self.w }],
            },
        }
    }
}
