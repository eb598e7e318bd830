//! Reconstruction of strings from their composition multisets.
//!
//! The engine grows a prefix and a suffix toward the middle. The unordered
//! end pairs {s_i, s_(n+1-i)} are all known in advance from the layer
//! unions, so each step only decides an orientation. When the prefix and
//! suffix placed so far have different compositions, the orientation is
//! forced by the two heaviest unexplained compositions; otherwise both
//! orientations are explored, spending one unit of guess budget. Every
//! extension removes the newly determined substring compositions from the
//! unexplained pool, and a failed removal kills the branch.
//!
//! Each substring becomes determined exactly once on the way in: when its
//! right endpoint enters the prefix, its left endpoint enters the suffix,
//! or it first spans the whole unknown middle. The three cases are
//! enumerated disjointly, so a completed path has explained the entire
//! multiset and the final check is an assertion, not a filter.

use std::collections::{BTreeMap, BTreeSet};

use crate::composition::{Composition, CompositionMultiset};
use crate::strings::Str;
use crate::{Error, Result};

/// Number of positions 1 <= i < n/2 where the length-i prefix and suffix
/// have equal compositions but the next symbols inward differ: exactly the
/// guess points the engine cannot force on the way to s. The i = 0 end
/// pair is excluded; the engine canonicalizes that choice instead of
/// guessing it.
pub fn ell(s: &Str) -> usize {
    let n = s.len();
    assert!(n >= 2, "ell needs a string of length at least 2");
    let k = s.alphabet().len();
    let idx = s.indices();
    let mut pre = vec![0u32; k];
    let mut suf = vec![0u32; k];
    let mut count = 0;
    for i in 1..n.div_ceil(2) {
        pre[idx[i - 1] as usize] += 1;
        suf[idx[n - i] as usize] += 1;
        if pre == suf && idx[i] != idx[n - 1 - i] {
            count += 1;
        }
    }
    count
}

/// Guess complexity of a string and of its whole class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EllStats {
    /// Guess points on the way to this string.
    pub ell: usize,
    /// Worst guess count over the full equicomposable class: the budget
    /// that recovers every member.
    pub big_l: usize,
}

/// Computes [`ell`] for s and the maximum over its class, recovered via
/// [`reconstruct_all`].
pub fn ell_stats(s: &Str) -> Result<EllStats> {
    let class = reconstruct_all(&CompositionMultiset::of(s))?;
    Ok(EllStats {
        ell: ell(s),
        big_l: class.iter().map(ell).max().expect("class is nonempty"),
    })
}

/// All strings generating S that are reachable with at most `guess_budget`
/// binary guesses along any search path. The result is closed under
/// reversal; every string whose guess count [`ell`] is within budget is
/// present, so the generating string itself appears once the budget
/// reaches its ell value.
pub fn reconstruct(ms: &CompositionMultiset, guess_budget: usize) -> Result<BTreeSet<Str>> {
    let (found, _truncated) = run(ms, guess_budget)?;
    if found.is_empty() {
        return Err(Error::NoSolution);
    }
    verify(&found, ms);
    Ok(found)
}

/// The complete class of strings generating S, via iterative deepening on
/// the guess budget until a pass explores the whole tree untruncated.
pub fn reconstruct_all(ms: &CompositionMultiset) -> Result<BTreeSet<Str>> {
    let mut budget = 0;
    loop {
        let (found, truncated) = run(ms, budget)?;
        if !truncated {
            if found.is_empty() {
                return Err(Error::NoSolution);
            }
            verify(&found, ms);
            return Ok(found);
        }
        budget += 1;
    }
}

/// Soundness gate on every public result set.
fn verify(found: &BTreeSet<Str>, ms: &CompositionMultiset) {
    for s in found {
        assert_eq!(
            &CompositionMultiset::of(s),
            ms,
            "reconstructed string does not generate the input multiset"
        );
    }
}

fn run(ms: &CompositionMultiset, guess_budget: usize) -> Result<(BTreeSet<Str>, bool)> {
    let n = ms.validate()?;
    let k = ms.alphabet().len();
    // packed keys keep the ordered pool cache-friendly; wide inputs fall
    // back to structural keys
    let found = if k <= PACKED_MAX_SYMBOLS && n < PACKED_MAX_LEN {
        Engine::<u128>::new(ms, n)?.run(guess_budget)
    } else {
        Engine::<Composition>::new(ms, n)?.run(guess_budget)
    };
    let alphabet = ms.alphabet();
    let mut out = BTreeSet::new();
    for indices in found.0 {
        let s = Str::from_indices(indices, alphabet);
        out.insert(s.reversed());
        out.insert(s);
    }
    Ok((out, found.1))
}

const PACKED_BITS: usize = 14;
const PACKED_MAX_SYMBOLS: usize = 8;
const PACKED_MAX_LEN: usize = 1 << PACKED_BITS;

/// Ordered key for the unexplained pool. Ordering must agree with the
/// canonical composition order: weight first, then counts
/// lexicographically.
trait PoolKey: Ord + Clone {
    fn from_counts(counts: &[u32]) -> Self;
}

/// Weight in the top bits, then each count in a fixed-width lane, so
/// integer order equals canonical order. Needs every count below 2^14 and
/// at most 8 symbols.
impl PoolKey for u128 {
    fn from_counts(counts: &[u32]) -> u128 {
        let mut key = 0u128;
        let mut weight = 0u32;
        for &c in counts {
            key = key << PACKED_BITS | c as u128;
            weight += c;
        }
        key | (weight as u128) << (PACKED_BITS * counts.len())
    }
}

impl PoolKey for Composition {
    fn from_counts(counts: &[u32]) -> Composition {
        Composition::new(counts.to_vec())
    }
}

/// Per-branch search state; cloned when a guess forks.
#[derive(Clone)]
struct State<K: PoolKey> {
    /// Placed prefix symbols, positions 1..=i.
    prefix: Vec<u8>,
    /// Placed suffix symbols outside in: rev_suffix[j] is position n - j.
    rev_suffix: Vec<u8>,
    /// Flat cumulative counts: pc[i * k + c] counts symbol c in the first
    /// i positions. sc mirrors it for the last i positions.
    pc: Vec<u32>,
    sc: Vec<u32>,
    /// Unexplained compositions with multiplicities.
    pool: BTreeMap<K, u64>,
    budget: usize,
}

struct Engine<'a, K: PoolKey> {
    n: usize,
    k: usize,
    half: usize,
    full: Vec<u32>,
    pairs: Vec<(u8, u8)>,
    middle: Option<u8>,
    ms: &'a CompositionMultiset,
    out: BTreeSet<Vec<u8>>,
    truncated: bool,
    _key: std::marker::PhantomData<K>,
}

impl<'a, K: PoolKey> Engine<'a, K> {
    fn new(ms: &'a CompositionMultiset, n: usize) -> Result<Self> {
        let (pairs, middle) = ms.mirror_pair_indices()?;
        let full: Vec<u32> = ms.layer_union(n)?.counts().to_vec();
        Ok(Engine {
            n,
            k: ms.alphabet().len(),
            half: n / 2,
            full,
            pairs,
            middle,
            ms,
            out: BTreeSet::new(),
            truncated: false,
            _key: std::marker::PhantomData,
        })
    }

    fn run(mut self, guess_budget: usize) -> (BTreeSet<Vec<u8>>, bool) {
        let mut pool: BTreeMap<K, u64> = BTreeMap::new();
        for (c, m) in self.ms.entries() {
            pool.insert(K::from_counts(c.counts()), m);
        }
        // the full string is determined before any symbol is placed
        let full_key = K::from_counts(&self.full);
        if !remove(&mut pool, &full_key) {
            return (self.out, self.truncated);
        }
        let state = State {
            prefix: Vec::with_capacity(self.half),
            rev_suffix: Vec::with_capacity(self.half),
            pc: vec![0; self.k],
            sc: vec![0; self.k],
            pool,
            budget: guess_budget,
        };
        self.search(state);
        (self.out, self.truncated)
    }

    fn search(&mut self, mut st: State<K>) {
        loop {
            let i = st.prefix.len();
            if i == self.half {
                self.finish(st);
                return;
            }
            let (a, b) = self.pairs[i];
            if a == b {
                if !self.extend(&mut st, a, b) {
                    return;
                }
                continue;
            }
            if st.pc[i * self.k..] != st.sc[i * self.k..] {
                // orientation forced by the two heaviest unexplained
                // compositions
                match self.forced_orientation(&st, i, a, b) {
                    Some((p, s)) => {
                        if !self.extend(&mut st, p, s) {
                            return;
                        }
                    }
                    None => return,
                }
                continue;
            }
            if i == 0 {
                // canonical orientation; reversals are restored on output
                if !self.extend(&mut st, a, b) {
                    return;
                }
                continue;
            }
            if st.budget == 0 {
                self.truncated = true;
                return;
            }
            st.budget -= 1;
            let mut other = st.clone();
            // smaller symbol into the prefix first
            if self.extend(&mut st, a, b) {
                self.search(st);
            }
            if !self.extend(&mut other, b, a) {
                return;
            }
            st = other;
        }
    }

    /// Decides which of the pair goes to the prefix when the placed prefix
    /// and suffix compositions differ. The two heaviest pool entries are
    /// the compositions of the two longest undetermined substrings, s^(n-i-1)
    /// and its suffix counterpart; exactly one orientation produces that
    /// pair of complements. Neither matching proves the branch dead.
    fn forced_orientation(&self, st: &State<K>, i: usize, a: u8, b: u8) -> Option<(u8, u8)> {
        let mut heaviest = st.pool.iter().rev();
        let (k1, &m1) = heaviest.next()?;
        let k2 = if m1 >= 2 { k1 } else { heaviest.next()?.0 };

        let complement = |extend_sym: u8, base: &[u32]| -> Option<K> {
            let mut counts = Vec::with_capacity(self.k);
            for c in 0..self.k {
                let used = base[c] + u32::from(c == extend_sym as usize);
                counts.push(self.full[c].checked_sub(used)?);
            }
            Some(K::from_counts(&counts))
        };
        let pc = &st.pc[i * self.k..];
        let sc = &st.sc[i * self.k..];
        let matches = |p: u8, s: u8| -> bool {
            match (complement(p, pc), complement(s, sc)) {
                (Some(cp), Some(cs)) => {
                    (&cp == k1 && &cs == k2) || (&cp == k2 && &cs == k1)
                }
                _ => false,
            }
        };
        if matches(a, b) {
            Some((a, b))
        } else if matches(b, a) {
            Some((b, a))
        } else {
            None
        }
    }

    /// Places `to_prefix` at position i+1 and `to_suffix` at position n-i,
    /// then removes every newly determined substring composition from the
    /// pool. Returns false when some removal fails: the branch cannot
    /// generate the multiset.
    fn extend(&mut self, st: &mut State<K>, to_prefix: u8, to_suffix: u8) -> bool {
        let k = self.k;
        let i1 = st.prefix.len() + 1;
        st.prefix.push(to_prefix);
        st.rev_suffix.push(to_suffix);
        for c in 0..k {
            let p = st.pc[(i1 - 1) * k + c] + u32::from(c == to_prefix as usize);
            st.pc.push(p);
        }
        for c in 0..k {
            let s = st.sc[(i1 - 1) * k + c] + u32::from(c == to_suffix as usize);
            st.sc.push(s);
        }

        let n = self.n;
        let mut scratch = vec![0u32; k];
        // substrings ending at the new prefix position: [j, i1]
        for j in 1..=i1 {
            for c in 0..k {
                scratch[c] = st.pc[i1 * k + c] - st.pc[(j - 1) * k + c];
            }
            if !remove(&mut st.pool, &K::from_counts(&scratch)) {
                return false;
            }
        }
        // substrings starting at the new suffix position: [n - i1 + 1, kk]
        for len in 1..=i1 {
            // kk = n - i1 + len; counts are the last i1 minus the last i1 - len
            for c in 0..k {
                scratch[c] = st.sc[i1 * k + c] - st.sc[(i1 - len) * k + c];
            }
            if !remove(&mut st.pool, &K::from_counts(&scratch)) {
                return false;
            }
        }
        // substrings newly spanning the whole unknown middle; at the final
        // extension of even n the middle is empty and both families above
        // already cover everything
        if n != 2 * i1 {
            // [i1 + 1, kk] for kk = n - i1 .. n: drop a prefix of length i1
            // and a suffix of length n - kk
            for tail in 0..=i1 {
                if !self.remove_straddler(st, i1, tail) {
                    return false;
                }
            }
            // [j, n - i1] for j = 1 .. i1: drop a prefix of length j - 1 and
            // a suffix of length i1
            for j in 1..=i1 {
                if !self.remove_straddler_left(st, i1, j) {
                    return false;
                }
            }
        }
        true
    }

    /// Removes full - prefix(i1) - suffix(tail), the substring [i1+1, n-tail].
    fn remove_straddler(&self, st: &mut State<K>, i1: usize, tail: usize) -> bool {
        let k = self.k;
        let mut scratch = vec![0u32; k];
        for c in 0..k {
            let used = st.pc[i1 * k + c] + st.sc[tail * k + c];
            match self.full[c].checked_sub(used) {
                Some(v) => scratch[c] = v,
                None => return false,
            }
        }
        remove(&mut st.pool, &K::from_counts(&scratch))
    }

    /// Removes full - prefix(j-1) - suffix(i1), the substring [j, n-i1].
    fn remove_straddler_left(&self, st: &mut State<K>, i1: usize, j: usize) -> bool {
        let k = self.k;
        let mut scratch = vec![0u32; k];
        for c in 0..k {
            let used = st.pc[(j - 1) * k + c] + st.sc[i1 * k + c];
            match self.full[c].checked_sub(used) {
                Some(v) => scratch[c] = v,
                None => return false,
            }
        }
        remove(&mut st.pool, &K::from_counts(&scratch))
    }

    fn finish(&mut self, st: State<K>) {
        debug_assert!(
            st.pool.is_empty(),
            "every substring is explained exactly once by a completed path"
        );
        let mut indices = st.prefix;
        if let Some(mid) = self.middle {
            indices.push(mid);
        }
        indices.extend(st.rev_suffix.into_iter().rev());
        debug_assert_eq!(indices.len(), self.n);
        self.out.insert(indices);
    }
}

fn remove<K: PoolKey>(pool: &mut BTreeMap<K, u64>, key: &K) -> bool {
    match pool.get_mut(key) {
        Some(m) if *m > 1 => {
            *m -= 1;
            true
        }
        Some(_) => {
            pool.remove(key);
            true
        }
        None => false,
    }
}
