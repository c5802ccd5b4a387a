//! Bit-interleave pairing on the naturals.
//!
//! `pair(a, b)` puts bit i of `a` at even position 2i and bit i of `b` at odd
//! position 2i+1, so the pair of two n-bit numbers fits in 2n bits and the map
//! is a bijection ω×ω → ω. The even/odd halves are also exposed directly
//! ([`spread_even`], [`spread_odd`], [`compress_even`], [`compress_odd`]):
//! spread images have disjoint bit support, so
//! `spread_even(a) + spread_odd(b) = pair(a, b)` without carries — that sum is
//! what the additive construction in [`crate::combinators`] relies on.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::Nat;

// Parallel bit deposit: route the low 32 bits of a word to its even positions.
fn spread_u32(x: u32) -> u64 {
    let mut w = x as u64;
    w = (w | (w << 16)) & 0x0000_ffff_0000_ffff;
    w = (w | (w << 8)) & 0x00ff_00ff_00ff_00ff;
    w = (w | (w << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    w = (w | (w << 2)) & 0x3333_3333_3333_3333;
    w = (w | (w << 1)) & 0x5555_5555_5555_5555;
    w
}

// Inverse of `spread_u32`: collect the even positions of a word.
fn compress_u64(w: u64) -> u32 {
    let mut x = w & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x >> 4)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x >> 8)) & 0x0000_ffff_0000_ffff;
    x = (x | (x >> 16)) & 0x0000_0000_ffff_ffff;
    x as u32
}

// Interleave digit streams: 32 bits of `a` and 32 bits of `b` per output word.
fn interleave_digits(a: &Nat, b: &Nat) -> Vec<u32> {
    let da = a.to_u32_digits();
    let db = b.to_u32_digits();
    let n = da.len().max(db.len());
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let ea = da.get(i).copied().unwrap_or(0);
        let eb = db.get(i).copied().unwrap_or(0);
        let w = spread_u32(ea) | (spread_u32(eb) << 1);
        out.push(w as u32);
        out.push((w >> 32) as u32);
    }
    out
}

/// Interleave `a` (even bit positions) with `b` (odd bit positions).
pub fn pair(a: &Nat, b: &Nat) -> Nat {
    Nat::new(interleave_digits(a, b))
}

/// Inverse of [`pair`]: split even and odd bit positions back apart.
pub fn unpair(c: &Nat) -> (Nat, Nat) {
    let mut da = Vec::new();
    let mut db = Vec::new();
    for w in c.iter_u64_digits() {
        da.push(compress_u64(w));
        db.push(compress_u64(w >> 1));
    }
    (Nat::new(da), Nat::new(db))
}

/// Place bit i of `a` at position 2i, leaving odd positions clear.
pub fn spread_even(a: &Nat) -> Nat {
    pair(a, &Nat::zero())
}

/// Place bit i of `b` at position 2i+1, leaving even positions clear.
pub fn spread_odd(b: &Nat) -> Nat {
    pair(&Nat::zero(), b)
}

/// Collect the even-position bits of `w`. Left inverse of [`spread_even`].
pub fn compress_even(w: &Nat) -> Nat {
    unpair(w).0
}

/// Collect the odd-position bits of `w`. Left inverse of [`spread_odd`].
pub fn compress_odd(w: &Nat) -> Nat {
    unpair(w).1
}

/// Code a non-empty tuple by right-folding [`pair`]:
/// a one-element tuple is its own code, longer tuples are
/// `pair(first, code_of_rest)`.
pub fn pair_tuple(xs: &[Nat]) -> Result<Nat> {
    match xs {
        [] => Err(Error::EmptyTuple),
        [x] => Ok(x.clone()),
        [x, rest @ ..] => Ok(pair(x, &pair_tuple(rest)?)),
    }
}

/// Inverse of [`pair_tuple`] at known length `k` (which must be ≥ 1).
pub fn unpair_tuple(c: &Nat, k: usize) -> Result<Vec<Nat>> {
    if k == 0 {
        return Err(Error::EmptyTuple);
    }
    let mut out = Vec::with_capacity(k);
    let mut rest = c.clone();
    for _ in 0..k - 1 {
        let (head, tail) = unpair(&rest);
        out.push(head);
        rest = tail;
    }
    out.push(rest);
    Ok(out)
}
