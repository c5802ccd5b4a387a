//! Randomized laws: the codecs round-trip, the folds decompose the way the
//! evaluators assume, and every synthesis replays its source table.

use proptest::collection::vec;
use proptest::prelude::*;
use univfn_core::combinators::{pair_tables, product_universal, synth_additive};
use univfn_core::pairing::{
    compress_even, compress_odd, pair, pair_tuple, spread_even, spread_odd, unpair, unpair_tuple,
};
use univfn_core::seqcodec::{rho, seq_decode, seq_encode};
use univfn_core::universal::{f_univ, synth_two, to_single};
use univfn_core::{EvaluatorDescriptor, Expr, FinTable, Nat, SigmaSpec};

fn nat() -> impl Strategy<Value = Nat> {
    // Up to ~320 bits; empty byte strings give zero.
    vec(any::<u8>(), 0..40).prop_map(|bytes| Nat::from_bytes_le(&bytes))
}

fn small() -> impl Strategy<Value = Nat> {
    (0u64..1024).prop_map(Nat::from)
}

fn square(sides: std::ops::RangeInclusive<usize>, bound: u64) -> impl Strategy<Value = FinTable> {
    sides.prop_flat_map(move |s| {
        vec((0u64..bound).prop_map(Nat::from), s * s)
            .prop_map(move |values| FinTable::new(vec![s, s], values).unwrap())
    })
}

/// Bit length as the sequence code counts it: zero still takes one bit.
fn bitlen_star(x: &Nat) -> u64 {
    x.bits().max(1)
}

proptest! {
    #[test]
    fn pairing_round_trips_from_the_parts(a in nat(), b in nat()) {
        let (x, y) = unpair(&pair(&a, &b));
        prop_assert_eq!(x, a);
        prop_assert_eq!(y, b);
    }

    #[test]
    fn pairing_round_trips_from_the_code(c in nat()) {
        let (a, b) = unpair(&c);
        prop_assert_eq!(pair(&a, &b), c);
    }

    #[test]
    fn spread_halves_are_disjoint_and_sum_to_the_pair(a in nat(), b in nat()) {
        let e = spread_even(&a);
        let o = spread_odd(&b);
        prop_assert_eq!(&e & &o, Nat::from(0u32));
        prop_assert_eq!(e + o, pair(&a, &b));
    }

    #[test]
    fn compress_inverts_spread(a in nat(), b in nat()) {
        prop_assert_eq!(compress_even(&spread_even(&a)), a.clone());
        prop_assert_eq!(compress_odd(&spread_odd(&b)), b.clone());
        let c = pair(&a, &b);
        prop_assert_eq!(compress_even(&c), a);
        prop_assert_eq!(compress_odd(&c), b);
    }

    #[test]
    fn tuple_code_round_trips(xs in vec(nat(), 1..7)) {
        let code = pair_tuple(&xs).unwrap();
        prop_assert_eq!(unpair_tuple(&code, xs.len()).unwrap(), xs);
    }

    #[test]
    fn tuple_code_is_a_right_fold(xs in vec(nat(), 2..6)) {
        let whole = pair_tuple(&xs).unwrap();
        let tail = pair_tuple(&xs[1..]).unwrap();
        prop_assert_eq!(whole, pair(&xs[0], &tail));
    }

    #[test]
    fn sequence_code_round_trips(s in vec(nat(), 0..8)) {
        prop_assert_eq!(seq_decode(&seq_encode(&s)), s);
    }

    #[test]
    fn sequence_code_length_is_exact(s in vec(small(), 0..8)) {
        let code = seq_encode(&s);
        let expected = if s.is_empty() {
            0
        } else {
            1 + s.iter().map(|x| 2 * bitlen_star(x) + 2).sum::<u64>()
        };
        prop_assert_eq!(code.bits(), expected);
    }

    #[test]
    fn only_canonical_codes_decode(c in nat()) {
        let decoded = seq_decode(&c);
        if !decoded.is_empty() {
            prop_assert_eq!(seq_encode(&decoded), c);
        }
    }

    #[test]
    fn rho_reads_entries_and_defaults_to_zero(alpha in nat(), i in 0u64..12) {
        let s = seq_decode(&alpha);
        let expected = s.get(i as usize).cloned().unwrap_or_default();
        prop_assert_eq!(rho(&alpha, &Nat::from(i)), expected);
    }

    #[test]
    fn two_witness_synthesis_replays_any_square(g in square(1..=6, 1 << 16)) {
        let tw = synth_two(&g).unwrap();
        let mut ok = true;
        g.for_each_cell(|coords, v| {
            ok &= f_univ(tw.w_row.at(coords[0]), tw.w_col.at(coords[1])) == *v;
        });
        prop_assert!(ok);
    }

    #[test]
    fn single_form_preserves_the_square(g in square(1..=5, 256)) {
        let tw = synth_two(&g).unwrap();
        let single = to_single(&tw.w_row, &tw.w_col).unwrap();
        let mut ok = true;
        g.for_each_cell(|coords, v| {
            let args = [
                single.w.at(coords[0]).clone(),
                single.w.at(coords[1]).clone(),
            ];
            ok &= single.evaluator.eval(&args).unwrap() == *v;
        });
        prop_assert!(ok);
    }

    #[test]
    fn additive_split_is_disjoint_and_exact(g in square(1..=6, 1 << 10)) {
        let s = synth_additive(&g).unwrap();
        let mut ok = true;
        g.for_each_cell(|coords, v| {
            let u = s.u.at(coords[0]);
            let w = s.v.at(coords[1]);
            ok &= (u & w) == Nat::from(0u32);
            ok &= s.evaluator.eval(&[u + w]).unwrap() == *v;
        });
        prop_assert!(ok);
    }

    #[test]
    fn product_synthesis_pairs_cells(
        (g1, g2) in (1usize..=4).prop_flat_map(|s| {
            let cells = vec((0u64..1 << 12).prop_map(Nat::from), s * s);
            (cells.clone(), cells).prop_map(move |(v1, v2)| {
                (
                    FinTable::new(vec![s, s], v1).unwrap(),
                    FinTable::new(vec![s, s], v2).unwrap(),
                )
            })
        }),
    ) {
        let p = product_universal(&g1, &g2).unwrap();
        let target = pair_tables(&g1, &g2).unwrap();
        let mut ok = true;
        target.for_each_cell(|coords, v| {
            let args = [p.g.at(coords[0]).clone(), p.h.at(coords[1]).clone()];
            let got = p.evaluator.eval(&args).unwrap();
            ok &= got == *v && got == pair(g1.get(coords), g2.get(coords));
        });
        prop_assert!(ok);
    }
}

fn plain_descriptor() -> impl Strategy<Value = EvaluatorDescriptor> {
    let sigma = SigmaSpec::new(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
    prop_oneof![
        Just(EvaluatorDescriptor::CoreF),
        (1usize..6).prop_map(|arity| EvaluatorDescriptor::SingleWrapped { arity }),
        (2usize..6).prop_map(|arity| EvaluatorDescriptor::DimN { arity }),
        (1usize..4).prop_map(|count| EvaluatorDescriptor::Product { count }),
        Just(EvaluatorDescriptor::Additive),
        Just(EvaluatorDescriptor::SigmaComposite {
            sigma,
            assignment: vec![0, 0, 1],
        }),
    ]
}

fn descriptor() -> impl Strategy<Value = EvaluatorDescriptor> {
    plain_descriptor().prop_flat_map(|d| {
        let arity = d.arity();
        let wrapped = EvaluatorDescriptor::Composite {
            arity,
            body: Expr::call(d.clone(), (0..arity).map(Expr::arg).collect()),
        };
        prop_oneof![Just(d), Just(wrapped)]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn descriptors_survive_serialization(d in descriptor()) {
        let json = serde_json::to_string(&d).unwrap();
        let back: EvaluatorDescriptor = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
