//! Self-delimiting code for finite sequences of naturals.
//!
//! The empty sequence encodes as 0. A non-empty sequence is laid out as a bit
//! string, most significant bit first: a sentinel 1, then for each element the
//! bits of its binary form (MSB first; the form of 0 is the single bit 0) each
//! written twice (0 → 00, 1 → 11), followed by the terminator 01. The whole
//! string, read as a binary numeral, is the code. Doubled bits can never form
//! the terminator, so decoding is unambiguous, and the code length is exactly
//! `1 + Σ (2·bitlen*(sᵢ) + 2)` bits where `bitlen*(0) = 1`.
//!
//! [`seq_decode`] is total: anything that is not an exact encoding decodes to
//! the empty sequence. On top of the codec, [`rho`] views every natural `alpha`
//! as an infinite sequence — the decoded entries, then zeros forever. Every
//! finite sequence is an initial segment of the sequence viewed at its code.

use num_traits::{ToPrimitive, Zero};

use crate::Nat;

/// Bit length with `bitlen*(0) = 1`: zero still occupies one encoded bit.
fn bitlen_star(m: &Nat) -> u64 {
    if m.is_zero() {
        1
    } else {
        m.bits()
    }
}

// Little-endian u32 word buffer addressed by absolute bit position.
fn set_bit(words: &mut [u32], pos: u64) {
    words[(pos / 32) as usize] |= 1 << (pos % 32);
}

/// Encode a finite sequence; the empty sequence becomes 0.
pub fn seq_encode(s: &[Nat]) -> Nat {
    if s.is_empty() {
        return Nat::zero();
    }
    let total: u64 = 1 + s.iter().map(|m| 2 * bitlen_star(m) + 2).sum::<u64>();
    let mut words = vec![0u32; total.div_ceil(32) as usize];
    set_bit(&mut words, total - 1); // sentinel
    let mut pos = total - 1;
    for m in s {
        for i in (0..bitlen_star(m)).rev() {
            let bit = m.bit(i);
            pos -= 2;
            if bit {
                set_bit(&mut words, pos + 1);
                set_bit(&mut words, pos);
            }
        }
        // terminator 01
        pos -= 2;
        set_bit(&mut words, pos);
    }
    debug_assert_eq!(pos, 0);
    Nat::new(words)
}

// One decoding pass. `want` limits value construction to a single index; the
// whole string is always validated so that malformed tails still reject.
// Returns None for anything outside the image of `seq_encode`.
fn scan(code: &Nat, want: Option<u64>) -> Option<ScanResult> {
    if code.is_zero() {
        return Some(ScanResult {
            len: 0,
            all: Some(Vec::new()),
            wanted: None,
        });
    }
    let digits: Vec<u64> = code.iter_u64_digits().collect();
    let bit = |pos: u64| digits[(pos / 64) as usize] >> (pos % 64) & 1 == 1;
    let mut pos = code.bits() - 1; // the leading 1 is the sentinel
    let mut index = 0u64;
    let mut all = want.is_none().then(Vec::new);
    let mut wanted = None;
    let mut elem_bits: Vec<bool> = Vec::new();
    while pos > 0 {
        if pos < 2 {
            return None; // odd leftover bit
        }
        let (b1, b0) = (bit(pos - 1), bit(pos - 2));
        pos -= 2;
        match (b1, b0) {
            (false, false) => elem_bits.push(false),
            (true, true) => elem_bits.push(true),
            (true, false) => return None,
            (false, true) => {
                // terminator; reject empty or zero-padded forms
                if elem_bits.is_empty() || (elem_bits.len() > 1 && !elem_bits[0]) {
                    return None;
                }
                let keep = want.is_none() || want == Some(index);
                if keep {
                    let mut words = vec![0u32; elem_bits.len().div_ceil(32)];
                    let top = elem_bits.len() as u64 - 1;
                    for (i, &b) in elem_bits.iter().enumerate() {
                        if b {
                            set_bit(&mut words, top - i as u64);
                        }
                    }
                    let value = Nat::new(words);
                    if want.is_some() {
                        wanted = Some(value);
                    } else if let Some(v) = all.as_mut() {
                        v.push(value);
                    }
                }
                elem_bits.clear();
                index += 1;
            }
        }
    }
    if !elem_bits.is_empty() {
        return None; // string ended mid-element
    }
    Some(ScanResult {
        len: index,
        all,
        wanted,
    })
}

struct ScanResult {
    len: u64,
    all: Option<Vec<Nat>>,
    wanted: Option<Nat>,
}

/// Decode a sequence code. Total: malformed codes decode to the empty sequence.
pub fn seq_decode(code: &Nat) -> Vec<Nat> {
    match scan(code, None) {
        Some(r) => r.all.unwrap_or_default(),
        None => Vec::new(),
    }
}

/// Entry `i` of the infinite sequence coded by `alpha`: the decoded entry when
/// `i` is in range, 0 past the end (and everywhere, for malformed `alpha`).
pub fn rho(alpha: &Nat, i: &Nat) -> Nat {
    let Some(idx) = i.to_u64() else {
        return Nat::zero(); // decoded length always fits far below 2^64
    };
    match scan(alpha, Some(idx)) {
        Some(r) if idx < r.len => r.wanted.unwrap_or_default(),
        _ => Nat::zero(),
    }
}
