//! The interleaving product on strings and the confusable families it
//! builds.
//!
//! s . t plants a copy of s around every symbol of t: s t_1 s t_2 ... t_m s,
//! of length (|s|+1)(|t|+1) - 1. The product is associative, every string
//! factors uniquely into irreducibles, and reversing any factor preserves
//! the composition multiset of the product. That is the engine behind the
//! large-class witnesses and the confusable pair construction here.

use std::collections::BTreeSet;

use crate::composition::Composition;
use crate::cyclotomic::prime_signature;
use crate::strings::{Alphabet, Str};
use crate::{Error, Result};

/// The interleaving product s . t. Both strings must share an alphabet.
pub fn interleave(s: &Str, t: &Str) -> Result<Str> {
    if s.alphabet() != t.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let mut out = Vec::with_capacity((s.len() + 1) * (t.len() + 1) - 1);
    out.extend_from_slice(s.indices());
    for &sym in t.indices() {
        out.push(sym);
        out.extend_from_slice(s.indices());
    }
    Ok(Str::from_indices(out, s.alphabet()))
}

/// Left fold of [`interleave`]; associativity makes the grouping
/// irrelevant. The slice must be nonempty.
pub fn interleave_all(factors: &[Str]) -> Result<Str> {
    assert!(!factors.is_empty(), "interleave_all needs at least one factor");
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = interleave(&acc, f)?;
    }
    Ok(acc)
}

/// Maximal factorization into interleave-irreducible factors, outermost
/// first. Irreducible strings (and the empty string) factor as themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleaveFactorization {
    pub factors: Vec<Str>,
}

impl InterleaveFactorization {
    /// Re-interleaves the factors. Inverse of [`interleave_factorize`].
    pub fn product(&self) -> Str {
        interleave_all(&self.factors).expect("factors share an alphabet")
    }
}

/// Factors a string into irreducibles by repeatedly splitting off the
/// shortest outer factor. Trying outer lengths in ascending order makes
/// each split irreducible: a reducible outer factor would expose a still
/// shorter one.
pub fn interleave_factorize(s: &Str) -> InterleaveFactorization {
    let mut factors = Vec::new();
    let mut rest = s.clone();
    'peel: loop {
        let m = rest.len() + 1;
        for d in 2..=m / 2 {
            if m % d != 0 {
                continue;
            }
            if let Some(inner) = split_outer(&rest, d - 1) {
                let outer = Str::from_indices(rest.indices()[..d - 1].to_vec(), rest.alphabet());
                factors.push(outer);
                rest = inner;
                continue 'peel;
            }
        }
        factors.push(rest);
        return InterleaveFactorization { factors };
    }
}

/// If w = s . t for the outer prefix s of length p, returns t.
fn split_outer(w: &Str, p: usize) -> Option<Str> {
    let idx = w.indices();
    let outer = &idx[..p];
    let copies = (w.len() + 1) / (p + 1);
    let mut inner = Vec::with_capacity(copies - 1);
    let mut pos = 0;
    for b in 0..copies {
        if &idx[pos..pos + p] != outer {
            return None;
        }
        pos += p;
        if b + 1 < copies {
            inner.push(idx[pos]);
            pos += 1;
        }
    }
    Some(Str::from_indices(inner, w.alphabet()))
}

/// All strings obtained by independently reversing factors and
/// re-interleaving. Every member shares the composition multiset of the
/// original product, and the family has 2^(number of non-palindromic
/// factors) distinct members.
pub fn reversal_family(factors: &[Str]) -> Result<BTreeSet<Str>> {
    assert!(!factors.is_empty(), "reversal family needs at least one factor");
    let flips: Vec<usize> =
        (0..factors.len()).filter(|&i| !factors[i].is_palindrome()).collect();
    assert!(flips.len() < 64, "too many non-palindromic factors to enumerate");
    let mut family = BTreeSet::new();
    for mask in 0u64..1 << flips.len() {
        let mut chosen = factors.to_vec();
        for (bit, &i) in flips.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                chosen[i] = chosen[i].reversed();
            }
        }
        family.insert(interleave_all(&chosen)?);
    }
    Ok(family)
}

/// Binary factor list behind [`lower_bound_witness`]: for
/// n + 1 = 2^e0 * p1^e1 * ..., one "0" if e0 is odd, floor(e0 / 2) copies
/// of "001", and for each odd prime factor p (ascending) e copies of
/// 0^(p-2) 1. The interleaving of the list has length n.
pub fn lower_bound_factors(n: usize) -> Vec<Str> {
    assert!(n >= 1, "witness needs n >= 1");
    let alpha = Alphabet::binary();
    let mut factors = Vec::new();
    for (p, e) in prime_signature(n as u64 + 1) {
        if p == 2 {
            if e % 2 == 1 {
                factors.push(Str::parse("0", &alpha).unwrap());
            }
            for _ in 0..e / 2 {
                factors.push(Str::parse("001", &alpha).unwrap());
            }
        } else {
            let block = "0".repeat(p as usize - 2) + "1";
            for _ in 0..e {
                factors.push(Str::parse(&block, &alpha).unwrap());
            }
        }
    }
    factors
}

/// A family of pairwise-equicomposable length-n binary strings whose size
/// meets the lower bound on the largest class at length n: the reversal
/// family of [`lower_bound_factors`].
pub fn lower_bound_witness(n: usize) -> BTreeSet<Str> {
    reversal_family(&lower_bound_factors(n)).expect("witness factors share an alphabet")
}

/// Confusable pair built from parts of one common composition: the left
/// string is (p_1 . s0) x_1 (p_2 . s0) x_2 ... and the right string swaps
/// s0 for its reversal throughout. Each separator x_i is one symbol of
/// xs, so xs must be one symbol shorter than the part list. The two
/// strings always share a composition multiset.
pub fn crlcnf_pair(parts: &[Str], s0: &Str, xs: &Str) -> Result<(Str, Str)> {
    if parts.is_empty() || xs.len() + 1 != parts.len() {
        return Err(Error::SeparatorCount { parts: parts.len(), separators: xs.len() });
    }
    let alpha = parts[0].alphabet();
    if xs.alphabet() != alpha {
        return Err(Error::AlphabetMismatch);
    }
    let comp = full_composition(&parts[0]);
    for part in &parts[1..] {
        if part.alphabet() != alpha {
            return Err(Error::AlphabetMismatch);
        }
        if full_composition(part) != comp {
            return Err(Error::CompositionMismatch);
        }
    }
    let s0_rev = s0.reversed();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            left.push(xs.indices()[i - 1]);
            right.push(xs.indices()[i - 1]);
        }
        left.extend_from_slice(interleave(part, s0)?.indices());
        right.extend_from_slice(interleave(part, &s0_rev)?.indices());
    }
    Ok((Str::from_indices(left, alpha), Str::from_indices(right, alpha)))
}

fn full_composition(s: &Str) -> Composition {
    let mut counts = vec![0u32; s.alphabet().len()];
    for &i in s.indices() {
        counts[i as usize] += 1;
    }
    Composition::new(counts)
}
