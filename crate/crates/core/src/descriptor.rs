//! Serializable evaluators and witness bundles.
//!
//! Every synthesis in this crate produces two things: witness tables, and a
//! recipe for combining witness values back into table entries. The recipe is
//! an [`EvaluatorDescriptor`] — a small expression tree over the universal
//! function, the tuple codec, and nothing else — so a construction written to
//! disk can be re-verified later, by a different build, without trusting the
//! producer. Evaluation is pure and total on well-formed descriptors given the
//! declared number of arguments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairing::{compress_even, compress_odd, pair_tuple, unpair_tuple};
use crate::sigma::SigmaSpec;
use crate::table::WitnessMap;
use crate::universal::f_univ;
use crate::Nat;

/// Recipe for evaluating a constructed universal function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum EvaluatorDescriptor {
    /// The universal binary function itself.
    CoreF,
    /// k arguments, each a k-tuple code; component j of argument j feeds the
    /// left-nested core. At arity 1 this is the identity.
    SingleWrapped { arity: usize },
    /// Left-nested core: `f(…f(f(a₁,a₂),a₃)…,a_k)`, arity at least 2.
    DimN { arity: usize },
    /// One argument per family member (canonical order). Coordinate i's code
    /// is unpacked from the member slot `assignment[i]`, then the k codes feed
    /// the single-witness form above.
    SigmaComposite { sigma: SigmaSpec, assignment: Vec<usize> },
    /// Two arguments, each a `count`-tuple code; the core runs componentwise
    /// and the results are re-paired.
    Product { count: usize },
    /// One argument, an even/odd bit-split sum: the core applied to its two
    /// halves.
    Additive,
    /// General composition, used by the nested pair-form constructions.
    Composite { arity: usize, body: Expr },
}

/// Body language for [`EvaluatorDescriptor::Composite`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Expr {
    /// Argument `index` of the composite.
    Arg { index: usize },
    /// Component `index` of a `tuple_len`-tuple code.
    Component {
        of: Box<Expr>,
        tuple_len: usize,
        index: usize,
    },
    /// Apply another evaluator.
    Call {
        eval: Box<EvaluatorDescriptor>,
        args: Vec<Expr>,
    },
}

impl Expr {
    pub fn arg(index: usize) -> Expr {
        Expr::Arg { index }
    }

    pub fn component(of: Expr, tuple_len: usize, index: usize) -> Expr {
        Expr::Component {
            of: Box::new(of),
            tuple_len,
            index,
        }
    }

    pub fn call(eval: EvaluatorDescriptor, args: Vec<Expr>) -> Expr {
        Expr::Call {
            eval: Box::new(eval),
            args,
        }
    }

    fn eval(&self, args: &[Nat]) -> Result<Nat> {
        match self {
            Expr::Arg { index } => args.get(*index).cloned().ok_or(Error::InvalidDescriptor {
                reason: format!("argument {index} out of range"),
            }),
            Expr::Component {
                of,
                tuple_len,
                index,
            } => {
                if *index >= *tuple_len {
                    return Err(Error::InvalidDescriptor {
                        reason: format!("component {index} of a {tuple_len}-tuple"),
                    });
                }
                let code = of.eval(args)?;
                Ok(unpair_tuple(&code, *tuple_len)?.swap_remove(*index))
            }
            Expr::Call { eval, args: inner } => {
                let vals = inner
                    .iter()
                    .map(|e| e.eval(args))
                    .collect::<Result<Vec<_>>>()?;
                eval.eval(&vals)
            }
        }
    }
}

fn fold_core(vals: Vec<Nat>) -> Result<Nat> {
    let mut it = vals.into_iter();
    let first = it.next().ok_or(Error::InvalidDescriptor {
        reason: "nothing to fold".into(),
    })?;
    Ok(it.fold(first, |acc, v| f_univ(&acc, &v)))
}

impl EvaluatorDescriptor {
    /// Number of arguments the evaluator consumes.
    pub fn arity(&self) -> usize {
        match self {
            EvaluatorDescriptor::CoreF => 2,
            EvaluatorDescriptor::SingleWrapped { arity } => *arity,
            EvaluatorDescriptor::DimN { arity } => *arity,
            EvaluatorDescriptor::SigmaComposite { sigma, .. } => sigma.family().len(),
            EvaluatorDescriptor::Product { .. } => 2,
            EvaluatorDescriptor::Additive => 1,
            EvaluatorDescriptor::Composite { arity, .. } => *arity,
        }
    }

    /// Evaluate on exactly `arity()` arguments.
    pub fn eval(&self, args: &[Nat]) -> Result<Nat> {
        let expected = self.arity();
        if args.len() != expected {
            return Err(Error::ArityMismatch {
                expected,
                got: args.len(),
            });
        }
        match self {
            EvaluatorDescriptor::CoreF => Ok(f_univ(&args[0], &args[1])),
            EvaluatorDescriptor::SingleWrapped { arity } => {
                if *arity == 0 {
                    return Err(Error::InvalidDescriptor {
                        reason: "single-wrapped arity must be at least 1".into(),
                    });
                }
                let unpacked = args
                    .iter()
                    .enumerate()
                    .map(|(j, a)| Ok(unpair_tuple(a, *arity)?.swap_remove(j)))
                    .collect::<Result<Vec<_>>>()?;
                fold_core(unpacked)
            }
            EvaluatorDescriptor::DimN { arity } => {
                if *arity < 2 {
                    return Err(Error::InvalidDescriptor {
                        reason: "left-nested arity must be at least 2".into(),
                    });
                }
                fold_core(args.to_vec())
            }
            EvaluatorDescriptor::SigmaComposite { sigma, assignment } => {
                let n = sigma.n();
                if assignment.len() != n {
                    return Err(Error::InvalidDescriptor {
                        reason: "assignment length differs from coordinate count".into(),
                    });
                }
                let family = sigma.family();
                let mut codes = Vec::with_capacity(n);
                for (i, &slot) in assignment.iter().enumerate() {
                    let member = family.get(slot).ok_or(Error::InvalidDescriptor {
                        reason: format!("assignment for coordinate {i} points past the family"),
                    })?;
                    let pos = member
                        .binary_search(&i)
                        .map_err(|_| Error::InvalidDescriptor {
                            reason: format!("coordinate {i} assigned to a member not containing it"),
                        })?;
                    let code = unpair_tuple(&args[slot], member.len())?.swap_remove(pos);
                    codes.push(unpair_tuple(&code, n)?.swap_remove(i));
                }
                fold_core(codes)
            }
            EvaluatorDescriptor::Product { count } => {
                if *count == 0 {
                    return Err(Error::InvalidDescriptor {
                        reason: "product over zero components".into(),
                    });
                }
                let us = unpair_tuple(&args[0], *count)?;
                let vs = unpair_tuple(&args[1], *count)?;
                let outs: Vec<Nat> = us.iter().zip(&vs).map(|(u, v)| f_univ(u, v)).collect();
                pair_tuple(&outs)
            }
            EvaluatorDescriptor::Additive => {
                Ok(f_univ(&compress_even(&args[0]), &compress_odd(&args[0])))
            }
            EvaluatorDescriptor::Composite { body, .. } => body.eval(args),
        }
    }
}

/// How slot values become evaluator arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotCombine {
    /// One slot per argument, in order.
    Direct,
    /// All slots added into a single argument. The synthesized additive
    /// witnesses have disjoint bit support, so the sum never carries.
    Sum,
}

/// One evaluator argument: a witness applied to a selection of grid
/// coordinates, in the listed order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotBinding {
    /// Index into [`WitnessBundle::maps`].
    pub map: usize,
    /// Grid axes feeding the witness, e.g. `[2, 0]` applies it to `(x₂, x₀)`.
    pub coords: Vec<usize>,
}

/// A witness table plus the name the synthesis gave it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedWitness {
    pub name: String,
    pub map: WitnessMap,
}

/// The witnesses of a synthesis and how to apply them to grid coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBundle {
    pub slots: Vec<SlotBinding>,
    pub combine: SlotCombine,
    pub maps: Vec<NamedWitness>,
}

impl WitnessBundle {
    /// Check the bundle against an evaluator and the dims of a target table.
    pub fn validate(&self, evaluator: &EvaluatorDescriptor, table_dims: &[usize]) -> Result<()> {
        match self.combine {
            SlotCombine::Direct => {
                if self.slots.len() != evaluator.arity() {
                    return Err(Error::ArityMismatch {
                        expected: evaluator.arity(),
                        got: self.slots.len(),
                    });
                }
            }
            SlotCombine::Sum => {
                if evaluator.arity() != 1 {
                    return Err(Error::InvalidBundle {
                        reason: "summed slots feed a one-argument evaluator".into(),
                    });
                }
                if self.slots.is_empty() {
                    return Err(Error::InvalidBundle {
                        reason: "no slots to sum".into(),
                    });
                }
            }
        }
        for (i, slot) in self.slots.iter().enumerate() {
            let named = self.maps.get(slot.map).ok_or_else(|| Error::InvalidBundle {
                reason: format!("slot {i} references missing witness {}", slot.map),
            })?;
            let expected: Option<Vec<usize>> = slot
                .coords
                .iter()
                .map(|&c| table_dims.get(c).copied())
                .collect();
            let expected = expected.ok_or_else(|| Error::InvalidBundle {
                reason: format!("slot {i} selects a grid axis the table does not have"),
            })?;
            if named.map.dims() != expected.as_slice() {
                return Err(Error::InvalidBundle {
                    reason: format!(
                        "slot {i}: witness '{}' has domain {:?}, the selected axes give {:?}",
                        named.name,
                        named.map.dims(),
                        expected
                    ),
                });
            }
        }
        Ok(())
    }

    /// Evaluator arguments at one grid cell. For summed slots, also reports
    /// whether the added values had pairwise disjoint bit support there.
    pub fn args_at(&self, coords: &[usize]) -> (Vec<Nat>, Option<bool>) {
        let mut picked = Vec::with_capacity(self.slots.len());
        for slot in &self.slots {
            let sel: Vec<usize> = slot.coords.iter().map(|&c| coords[c]).collect();
            picked.push(self.maps[slot.map].map.get(&sel).clone());
        }
        match self.combine {
            SlotCombine::Direct => (picked, None),
            SlotCombine::Sum => {
                let mut disjoint = true;
                let mut seen = Nat::default();
                let mut sum = Nat::default();
                for v in &picked {
                    if (&seen & v) != Nat::default() {
                        disjoint = false;
                    }
                    seen |= v;
                    sum += v;
                }
                (vec![sum], Some(disjoint))
            }
        }
    }

    /// Look a witness up by its synthesis name.
    pub fn map(&self, name: &str) -> Option<&WitnessMap> {
        self.maps.iter().find(|m| m.name == name).map(|m| &m.map)
    }
}

/// A complete synthesis: the evaluator and the witnesses feeding it. This is
/// the on-disk witness-file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synthesis {
    pub evaluator: EvaluatorDescriptor,
    pub witnesses: WitnessBundle,
}
