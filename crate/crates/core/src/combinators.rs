//! Multi-coordinate constructions layered on the two-variable core.
//!
//! Everything here reduces to [`synth_two`]: higher arities fold leading
//! coordinates into a single paired axis, Σ-patterned forms merge per-axis
//! witnesses into shared tuple codes, and the (3,2)/(4,2) pair forms rewire
//! those codes through composite evaluator expressions. Each synthesis returns
//! its witnesses together with a serializable evaluator; `into_synthesis`
//! packages both for the verifier and the CLI.

use num_traits::ToPrimitive;

use crate::descriptor::{
    EvaluatorDescriptor, Expr, NamedWitness, SlotBinding, SlotCombine, Synthesis, WitnessBundle,
};
use crate::error::{Error, Result};
use crate::pairing::{pair, pair_tuple, spread_even, spread_odd, unpair_tuple};
use crate::sigma::SigmaSpec;
use crate::table::{FinTable, WitnessMap};
use crate::universal::{f_univ, synth_two, SingleWitness, TwoWitnesses};
use crate::Nat;

/// The binary core folded left over three arguments.
pub fn f_dim3(x: &Nat, y: &Nat, z: &Nat) -> Nat {
    f_univ(&f_univ(x, y), z)
}

fn witness_from_fn(dims: Vec<usize>, f: impl FnMut(&[usize]) -> Nat) -> Result<WitnessMap> {
    let t = FinTable::from_fn(dims, f)?;
    let dims = t.dims().to_vec();
    WitnessMap::new(dims, t.into_values())
}

/// One reduction stage of hypercube synthesis: the leading `k−1` coordinates
/// of a side-`n` `k`-cube are folded into one axis by their tuple code.
pub struct ReductionStage {
    /// Padded square of side `1 + pair_tuple([n−1; k−1])`: entry `(u, z)` is
    /// the table value at the coordinates coded by `u` and the trailing `z`,
    /// or 0 wherever `u` or `z` falls off the grid.
    pub square: FinTable,
    /// Two-variable witnesses for `square`, over its full padded domain.
    pub stage: TwoWitnesses,
    /// The `(k−1)`-dimensional follow-up target: the row witness sampled at
    /// each in-grid tuple code.
    pub reduced: FinTable,
    /// The trailing-coordinate witness, cut down from the padded side to `n`.
    pub tail: WitnessMap,
}

/// Run one reduction stage. Requires a hypercube of dimension at least 2.
pub fn tuple_stage(g: &FinTable) -> Result<ReductionStage> {
    let k = g.dims().len();
    if k < 2 {
        return Err(Error::WrongShape {
            expected: "hypercube of dimension at least 2",
            dims: g.dims().to_vec(),
        });
    }
    let n = g.hypercube_side(k)?;
    // The interleaving pair is monotone in both arguments, so the largest
    // prefix code sits at the all-(n−1) corner.
    let corner = vec![Nat::from(n - 1); k - 1];
    let side = (pair_tuple(&corner)? + 1u32)
        .to_usize()
        .ok_or(Error::WrongShape {
            expected: "prefix codes that fit in addressable memory",
            dims: g.dims().to_vec(),
        })?;
    let square = FinTable::from_fn(vec![side, side], |c| {
        let z = c[1];
        if z >= n {
            return Nat::default();
        }
        let prefix = unpair_tuple(&Nat::from(c[0]), k - 1).expect("k >= 2");
        let mut coords = Vec::with_capacity(k);
        for p in &prefix {
            match p.to_usize() {
                Some(v) if v < n => coords.push(v),
                _ => return Nat::default(),
            }
        }
        coords.push(z);
        g.get(&coords).clone()
    })?;
    let stage = synth_two(&square)?;
    let reduced = FinTable::from_fn(vec![n; k - 1], |c| {
        let parts: Vec<Nat> = c.iter().map(|&v| Nat::from(v)).collect();
        let code = pair_tuple(&parts).expect("k >= 2");
        stage
            .w_row
            .at(code.to_usize().expect("below the padded side"))
            .clone()
    })?;
    let tail = stage.w_col.truncate_unary(n)?;
    Ok(ReductionStage {
        square,
        stage,
        reduced,
        tail,
    })
}

/// Witnesses for a cubic table under the left-nested core:
/// `f_univ(f_univ(g0(x), g1(y)), h(z))` reproduces every cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dim3Synthesis {
    pub g0: WitnessMap,
    pub g1: WitnessMap,
    pub h: WitnessMap,
}

/// Two explicit stages: fold `(x, y)` against `z`, then split the reduced
/// square into per-coordinate witnesses.
pub fn synth_dim3(g: &FinTable) -> Result<Dim3Synthesis> {
    g.hypercube_side(3)?;
    let stage = tuple_stage(g)?;
    let TwoWitnesses { w_row: g0, w_col: g1 } = synth_two(&stage.reduced)?;
    Ok(Dim3Synthesis {
        g0,
        g1,
        h: stage.tail,
    })
}

impl Dim3Synthesis {
    pub fn into_synthesis(self) -> Synthesis {
        Synthesis {
            evaluator: EvaluatorDescriptor::DimN { arity: 3 },
            witnesses: WitnessBundle {
                slots: (0..3).map(|j| SlotBinding { map: j, coords: vec![j] }).collect(),
                combine: SlotCombine::Direct,
                maps: vec![
                    NamedWitness { name: "g0".into(), map: self.g0 },
                    NamedWitness { name: "g1".into(), map: self.g1 },
                    NamedWitness { name: "h".into(), map: self.h },
                ],
            },
        }
    }
}

/// Per-coordinate witnesses for a `k`-cube under the left-nested core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimNSynthesis {
    pub maps: Vec<WitnessMap>,
    pub evaluator: EvaluatorDescriptor,
}

fn dim_n_maps(g: &FinTable) -> Result<Vec<WitnessMap>> {
    match g.dims().len() {
        // Arity-1 base used by the Σ constructions: the table is its own map.
        1 => Ok(vec![WitnessMap::new(g.dims().to_vec(), g.values().to_vec())?]),
        2 => {
            let tw = synth_two(g)?;
            Ok(vec![tw.w_row, tw.w_col])
        }
        _ => {
            let st = tuple_stage(g)?;
            let mut maps = dim_n_maps(&st.reduced)?;
            maps.push(st.tail);
            Ok(maps)
        }
    }
}

/// Recursive reduction: peel trailing coordinates until the square base.
pub fn synth_dim_n(g: &FinTable, k: usize) -> Result<DimNSynthesis> {
    if k < 2 {
        return Err(Error::WrongShape {
            expected: "hypercube of dimension at least 2",
            dims: g.dims().to_vec(),
        });
    }
    g.hypercube_side(k)?;
    Ok(DimNSynthesis {
        maps: dim_n_maps(g)?,
        evaluator: EvaluatorDescriptor::DimN { arity: k },
    })
}

fn merge_single(maps: &[WitnessMap]) -> Result<WitnessMap> {
    let mut side = None;
    for m in maps {
        let d = match *m.dims() {
            [d] => d,
            _ => {
                return Err(Error::WrongShape {
                    expected: "unary witness",
                    dims: m.dims().to_vec(),
                })
            }
        };
        match side {
            None => side = Some(d),
            Some(s) if s == d => {}
            Some(s) => return Err(Error::DomainMismatch { left: s, right: d }),
        }
    }
    let side = side.ok_or(Error::EmptyTuple)?;
    let merged = (0..side)
        .map(|x| {
            let parts: Vec<Nat> = maps.iter().map(|m| m.at(x).clone()).collect();
            pair_tuple(&parts)
        })
        .collect::<Result<Vec<_>>>()?;
    WitnessMap::unary(merged)
}

impl DimNSynthesis {
    pub fn arity(&self) -> usize {
        self.maps.len()
    }

    /// Merge the per-coordinate maps into one shared witness
    /// `w(x) = pair_tuple([w₀(x), …, w_{k−1}(x)])`; the wrapped evaluator
    /// unpacks component `j` from its argument `j`.
    pub fn into_single(self) -> Result<SingleWitness> {
        let arity = self.maps.len();
        Ok(SingleWitness {
            w: merge_single(&self.maps)?,
            evaluator: EvaluatorDescriptor::SingleWrapped { arity },
        })
    }

    pub fn into_synthesis(self) -> Synthesis {
        let slots = (0..self.maps.len())
            .map(|j| SlotBinding { map: j, coords: vec![j] })
            .collect();
        Synthesis {
            evaluator: self.evaluator,
            witnesses: WitnessBundle {
                slots,
                combine: SlotCombine::Direct,
                maps: self
                    .maps
                    .into_iter()
                    .enumerate()
                    .map(|(j, map)| NamedWitness { name: format!("w{j}"), map })
                    .collect(),
            },
        }
    }
}

/// The shared unary map of the single-witness hypercube form; at dimension 1
/// this is the table itself.
fn dim_single_map(g: &FinTable) -> Result<WitnessMap> {
    merge_single(&dim_n_maps(g)?)
}

/// Witnesses for a Σ-patterned factorization: one map per family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSynthesis {
    pub sigma: SigmaSpec,
    /// One witness per member, in the family's canonical order. A member `Q`
    /// of size `m` gets the `m`-ary map `(y₁,…,y_m) ↦ pair_tuple([w(y₁),…,w(y_m)])`
    /// over the shared single-form map `w`; the empty member gets a constant 0.
    pub maps: Vec<WitnessMap>,
    pub evaluator: EvaluatorDescriptor,
}

/// Synthesize the pattern: coordinate `i` is served by the lexicographically
/// least member containing it. Refuses non-covering families, whose pattern no
/// witness family can satisfy.
pub fn synth_sigma(spec: &SigmaSpec, g: &FinTable) -> Result<SigmaSynthesis> {
    if let Some(uncovered) = spec.uncovered() {
        return Err(Error::NonCoveringSigma { uncovered });
    }
    let n = spec.n();
    let side = g.hypercube_side(n)?;
    let single = dim_single_map(g)?;
    let maps = spec
        .family()
        .iter()
        .map(|q| {
            if q.is_empty() {
                WitnessMap::zeros(vec![])
            } else {
                witness_from_fn(vec![side; q.len()], |c| {
                    let parts: Vec<Nat> = c.iter().map(|&y| single.at(y).clone()).collect();
                    pair_tuple(&parts).expect("member is non-empty")
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let assignment = spec.slot_assignment()?;
    Ok(SigmaSynthesis {
        sigma: spec.clone(),
        maps,
        evaluator: EvaluatorDescriptor::SigmaComposite {
            sigma: spec.clone(),
            assignment,
        },
    })
}

impl SigmaSynthesis {
    pub fn into_synthesis(self) -> Synthesis {
        let slots = self
            .sigma
            .family()
            .iter()
            .enumerate()
            .map(|(i, q)| SlotBinding { map: i, coords: q.clone() })
            .collect();
        Synthesis {
            evaluator: self.evaluator,
            witnesses: WitnessBundle {
                slots,
                combine: SlotCombine::Direct,
                maps: self
                    .maps
                    .into_iter()
                    .enumerate()
                    .map(|(i, map)| NamedWitness { name: format!("h{i}"), map })
                    .collect(),
            },
        }
    }
}

/// A ternary factorization through one shared binary map:
/// `G(x,y,z) = E(h(x,y), h(y,z), h(z,x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairForm3 {
    pub h: WitnessMap,
    pub evaluator: EvaluatorDescriptor,
}

impl PairForm3 {
    /// Coordinate pairs the shared map is applied to, in argument order: the
    /// oriented cycle through the three coordinates.
    pub const SLOTS: [[usize; 2]; 3] = [[0, 1], [1, 2], [2, 0]];

    pub fn into_synthesis(self) -> Synthesis {
        pair_form_synthesis(self.h, self.evaluator, &Self::SLOTS)
    }
}

/// A 4-ary factorization through one shared binary map applied to all six
/// coordinate pairs in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairForm4 {
    pub h: WitnessMap,
    pub evaluator: EvaluatorDescriptor,
}

impl PairForm4 {
    /// Coordinate pairs in argument order.
    pub const SLOTS: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

    pub fn into_synthesis(self) -> Synthesis {
        pair_form_synthesis(self.h, self.evaluator, &Self::SLOTS)
    }
}

fn pair_form_synthesis(h: WitnessMap, evaluator: EvaluatorDescriptor, slots: &[[usize; 2]]) -> Synthesis {
    Synthesis {
        evaluator,
        witnesses: WitnessBundle {
            slots: slots
                .iter()
                .map(|p| SlotBinding { map: 0, coords: p.to_vec() })
                .collect(),
            combine: SlotCombine::Direct,
            maps: vec![NamedWitness { name: "h".into(), map: h }],
        },
    }
}

/// The canonical ternary pair form: synthesize the all-pairs pattern on three
/// coordinates, then merge its three member maps into one. Argument `(u,v)`
/// carries the `{0,1}` and `{1,2}` maps at `(u,v)` and the `{0,2}` map at
/// `(v,u)`, so the oriented-cycle slots of [`PairForm3`] can reach all three.
pub fn sigma_synth32(g: &FinTable) -> Result<PairForm3> {
    let side = g.hypercube_side(3)?;
    let spec = SigmaSpec::new(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).expect("well-formed");
    let syn = synth_sigma(&spec, g)?;
    let (h01, h02, h12) = (&syn.maps[0], &syn.maps[1], &syn.maps[2]);
    let h = witness_from_fn(vec![side, side], |c| {
        let (u, v) = (c[0], c[1]);
        pair_tuple(&[
            h01.get(&[u, v]).clone(),
            h12.get(&[u, v]).clone(),
            h02.get(&[v, u]).clone(),
        ])
        .expect("three components")
    })?;
    let body = Expr::call(
        syn.evaluator,
        vec![
            Expr::component(Expr::arg(0), 3, 0), // {0,1} map at (x,y)
            Expr::component(Expr::arg(2), 3, 2), // {0,2} map at (x,z), stored flipped in h(z,x)
            Expr::component(Expr::arg(1), 3, 1), // {1,2} map at (y,z)
        ],
    );
    Ok(PairForm3 {
        h,
        evaluator: EvaluatorDescriptor::Composite { arity: 3, body },
    })
}

/// The direct 4-ary pair form: the all-pairs pattern on four coordinates
/// already uses one effective map (every member map of that pattern is the
/// same table), and its canonical member order is exactly [`PairForm4::SLOTS`].
pub fn sigma_synth42(g: &FinTable) -> Result<PairForm4> {
    g.hypercube_side(4)?;
    let spec = SigmaSpec::new(
        4,
        PairForm4::SLOTS.iter().map(|p| p.to_vec()).collect(),
    )
    .expect("well-formed");
    let mut syn = synth_sigma(&spec, g)?;
    debug_assert!(syn.maps.windows(2).all(|w| w[0] == w[1]));
    let h = syn.maps.swap_remove(0);
    Ok(PairForm4 {
        h,
        evaluator: syn.evaluator,
    })
}

/// Build a 4-ary pair form from any ternary one. Each trailing-coordinate
/// slice is synthesized on its own; the slice maps, read as one ternary table,
/// are synthesized once more, and the resulting map `k` is merged with its
/// transpose into `k₁(s,t) = pair(k(s,t), k(t,s))`. The emitted evaluator is
///
/// `E(E(k(x,y), k(y,w), k(w,x)), E(k(y,z), k(z,w), k(w,y)), E(k(z,x), k(x,w), k(w,z)))`
///
/// with every `k` application spelled as a component of a `k₁` argument.
/// All inner syntheses must report the same evaluator shape, since one shape
/// has to serve every slice at once.
pub fn synth_42_from_32<S>(synth32: S, g: &FinTable) -> Result<PairForm4>
where
    S: Fn(&FinTable) -> Result<PairForm3>,
{
    let side = g.hypercube_side(4)?;
    let mut slices: Vec<WitnessMap> = Vec::with_capacity(side);
    let mut shared: Option<EvaluatorDescriptor> = None;
    for w in 0..side {
        let slice = FinTable::from_fn(vec![side; 3], |c| g.get(&[c[0], c[1], c[2], w]).clone())?;
        let pf = synth32(&slice)?;
        match &shared {
            None => shared = Some(pf.evaluator),
            Some(e) if *e == pf.evaluator => {}
            Some(_) => return Err(Error::NonUniformSynthesizer),
        }
        slices.push(pf.h);
    }
    let e3 = shared.expect("side is positive");
    let htab = FinTable::from_fn(vec![side; 3], |c| slices[c[2]].get(&[c[0], c[1]]).clone())?;
    let top = synth32(&htab)?;
    if top.evaluator != e3 {
        return Err(Error::NonUniformSynthesizer);
    }
    let k = top.h;
    let k1 = witness_from_fn(vec![side, side], |c| {
        pair(k.get(&[c[0], c[1]]), k.get(&[c[1], c[0]]))
    })?;
    let slot = |a: usize, b: usize| {
        let key = [a.min(b), a.max(b)];
        PairForm4::SLOTS.iter().position(|p| *p == key).expect("a != b")
    };
    // k(x_a, x_b) out of the merged map: forward component when a < b,
    // transposed component otherwise.
    let kk = |a: usize, b: usize| {
        Expr::component(Expr::arg(slot(a, b)), 2, if a < b { 0 } else { 1 })
    };
    let cyc = |p: usize, q: usize| Expr::call(e3.clone(), vec![kk(p, q), kk(q, 3), kk(3, p)]);
    let body = Expr::call(e3.clone(), vec![cyc(0, 1), cyc(1, 2), cyc(2, 0)]);
    Ok(PairForm4 {
        h: k1,
        evaluator: EvaluatorDescriptor::Composite { arity: 6, body },
    })
}

/// Build a ternary pair form from any 4-ary one by zero-extending the table
/// with a fourth coordinate pinned to 0. The 4-ary map `h` is packed into
/// `h₁(s,t) = pair_tuple([h(s,t), h(t,s), h(s,0)])`: the oriented cycle hands
/// each coordinate to exactly one slot as its first entry, which is where the
/// zero-pinned components are read from.
pub fn synth_32_from_42<S>(synth42: S, g: &FinTable) -> Result<PairForm3>
where
    S: Fn(&FinTable) -> Result<PairForm4>,
{
    let side = g.hypercube_side(3)?;
    let g4 = FinTable::from_fn(vec![side; 4], |c| {
        if c[3] == 0 {
            g.get(&c[..3]).clone()
        } else {
            Nat::default()
        }
    })?;
    let pf = synth42(&g4)?;
    let h = pf.h;
    let h1 = witness_from_fn(vec![side, side], |c| {
        let (s, t) = (c[0], c[1]);
        pair_tuple(&[
            h.get(&[s, t]).clone(),
            h.get(&[t, s]).clone(),
            h.get(&[s, 0]).clone(),
        ])
        .expect("three components")
    })?;
    // Arguments A0 = h1(x,y), A1 = h1(y,z), A2 = h1(z,x); the inner evaluator
    // wants the six pair applications of the zero-extended grid in slot order.
    let body = Expr::call(
        pf.evaluator,
        vec![
            Expr::component(Expr::arg(0), 3, 0), // h(x,y)
            Expr::component(Expr::arg(2), 3, 1), // h(x,z), transposed in A2
            Expr::component(Expr::arg(0), 3, 2), // h(x,0)
            Expr::component(Expr::arg(1), 3, 0), // h(y,z)
            Expr::component(Expr::arg(1), 3, 2), // h(y,0)
            Expr::component(Expr::arg(2), 3, 2), // h(z,0)
        ],
    );
    Ok(PairForm3 {
        h: h1,
        evaluator: EvaluatorDescriptor::Composite { arity: 3, body },
    })
}

/// Witnesses reproducing two tables at once: the evaluator runs the core
/// componentwise and re-pairs, so cell `(α,β)` yields `pair(G₁(α,β), G₂(α,β))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSynthesis {
    pub g: WitnessMap,
    pub h: WitnessMap,
    pub evaluator: EvaluatorDescriptor,
}

pub fn product_universal(g1: &FinTable, g2: &FinTable) -> Result<ProductSynthesis> {
    let left = g1.square_side()?;
    let right = g2.square_side()?;
    if left != right {
        return Err(Error::DomainMismatch { left, right });
    }
    let w1 = synth_two(g1)?;
    let w2 = synth_two(g2)?;
    let g = witness_from_fn(vec![left], |c| pair(w1.w_row.at(c[0]), w2.w_row.at(c[0])))?;
    let h = witness_from_fn(vec![left], |c| pair(w1.w_col.at(c[0]), w2.w_col.at(c[0])))?;
    Ok(ProductSynthesis {
        g,
        h,
        evaluator: EvaluatorDescriptor::Product { count: 2 },
    })
}

impl ProductSynthesis {
    pub fn into_synthesis(self) -> Synthesis {
        Synthesis {
            evaluator: self.evaluator,
            witnesses: WitnessBundle {
                slots: vec![
                    SlotBinding { map: 0, coords: vec![0] },
                    SlotBinding { map: 1, coords: vec![1] },
                ],
                combine: SlotCombine::Direct,
                maps: vec![
                    NamedWitness { name: "g".into(), map: self.g },
                    NamedWitness { name: "h".into(), map: self.h },
                ],
            },
        }
    }
}

/// Cellwise pairing of two same-shaped tables: the target a product
/// construction reproduces.
pub fn pair_tables(g1: &FinTable, g2: &FinTable) -> Result<FinTable> {
    if g1.dims() != g2.dims() {
        return Err(Error::WrongShape {
            expected: "table with the same dims as the first",
            dims: g2.dims().to_vec(),
        });
    }
    FinTable::from_fn(g1.dims().to_vec(), |c| pair(g1.get(c), g2.get(c)))
}

/// Witnesses for the sum-argument form `k(u(α) + v(β)) = G(α,β)`: the row
/// witness moves to even bit positions, the column witness to odd ones, so
/// ordinary addition never carries and the evaluator can split the sum again.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveSynthesis {
    pub u: WitnessMap,
    pub v: WitnessMap,
    pub evaluator: EvaluatorDescriptor,
}

pub fn synth_additive(g: &FinTable) -> Result<AdditiveSynthesis> {
    let tw = synth_two(g)?;
    let u = witness_from_fn(vec![tw.w_row.values().len()], |c| spread_even(tw.w_row.at(c[0])))?;
    let v = witness_from_fn(vec![tw.w_col.values().len()], |c| spread_odd(tw.w_col.at(c[0])))?;
    Ok(AdditiveSynthesis {
        u,
        v,
        evaluator: EvaluatorDescriptor::Additive,
    })
}

impl AdditiveSynthesis {
    pub fn into_synthesis(self) -> Synthesis {
        Synthesis {
            evaluator: self.evaluator,
            witnesses: WitnessBundle {
                slots: vec![
                    SlotBinding { map: 0, coords: vec![0] },
                    SlotBinding { map: 1, coords: vec![1] },
                ],
                combine: SlotCombine::Sum,
                maps: vec![
                    NamedWitness { name: "u".into(), map: self.u },
                    NamedWitness { name: "v".into(), map: self.v },
                ],
            },
        }
    }
}
