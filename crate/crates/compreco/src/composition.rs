//! Compositions of substrings and the multiset of all of them.
//!
//! The composition of a substring counts how often each alphabet symbol
//! occurs in it, forgetting order. A length-n string has n(n+1)/2 substrings;
//! [`CompositionMultiset`] collects their compositions with multiplicity.
//! Everything downstream -- equivalence of strings, reconstruction, the
//! turnpike reduction -- consumes this type.
//!
//! Canonical composition order is (weight, then count vector
//! lexicographically); the text format and all iteration orders follow it.

use std::collections::BTreeMap;
use std::fmt;

use crate::strings::{Alphabet, Str};
use crate::{Error, Result};

/// Symbol counts of one substring. `weight` is the sum of `counts`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    counts: Vec<u32>,
    weight: u32,
}

impl Composition {
    pub fn new(counts: Vec<u32>) -> Self {
        let weight = counts.iter().fold(0u32, |a, &c| {
            a.checked_add(c).expect("composition weight overflows u32")
        });
        Composition { counts, weight }
    }

    pub fn zero(symbols: usize) -> Self {
        Composition { counts: vec![0; symbols], weight: 0 }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Comma-separated counts, e.g. `2,0,1`.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        parts.join(",")
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weight
            .cmp(&other.weight)
            .then_with(|| self.counts.cmp(&other.counts))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Mirror data read off a composition multiset: the unordered symbol pair
/// `{s_i, s_{n+1-i}}` for each i up to the middle, plus the forced middle
/// symbol when n is odd. Pairs are listed for i = 1, 2, ... with the
/// alphabet-smaller symbol first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorPairs {
    pub pairs: Vec<(char, char)>,
    pub middle: Option<char>,
}

/// The compositions of all substrings of one string, with multiplicity.
///
/// Equality compares the alphabet and the entries; the declared length is
/// carried metadata and is checked by [`CompositionMultiset::validate`].
#[derive(Debug, Clone)]
pub struct CompositionMultiset {
    alphabet: Alphabet,
    entries: BTreeMap<Composition, u64>,
    total: u64,
    declared_len: Option<usize>,
}

impl PartialEq for CompositionMultiset {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.entries == other.entries
    }
}

impl Eq for CompositionMultiset {}

impl CompositionMultiset {
    /// The composition multiset of `s`.
    ///
    /// Each substring composition is a difference of two prefix-count
    /// vectors, so the whole multiset costs O(n^2 |alphabet|).
    pub fn of(s: &Str) -> Self {
        let n = s.len();
        let k = s.alphabet().len();
        let mut pref = vec![0u32; (n + 1) * k];
        for (i, &sym) in s.indices().iter().enumerate() {
            let (lo, hi) = pref.split_at_mut((i + 1) * k);
            hi[..k].copy_from_slice(&lo[i * k..]);
            hi[sym as usize] += 1;
        }
        let mut entries: BTreeMap<Composition, u64> = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..=n {
                let mut counts = vec![0u32; k];
                for c in 0..k {
                    counts[c] = pref[j * k + c] - pref[i * k + c];
                }
                *entries.entry(Composition::new(counts)).or_insert(0) += 1;
            }
        }
        let total = entries.values().sum();
        CompositionMultiset { alphabet: s.alphabet().clone(), entries, total, declared_len: Some(n) }
    }

    /// Builds a multiset from raw entries without validating realizability.
    ///
    /// Structural requirements only: count vectors match the alphabet size,
    /// weights are positive, multiplicities are positive.
    pub fn from_entries<I>(alphabet: Alphabet, entries: I, declared_len: Option<usize>) -> Result<Self>
    where
        I: IntoIterator<Item = (Composition, u64)>,
    {
        let k = alphabet.len();
        let mut map: BTreeMap<Composition, u64> = BTreeMap::new();
        for (c, m) in entries {
            if c.counts().len() != k {
                return Err(Error::InvalidMultiset(format!(
                    "composition {} has {} counts for a {}-symbol alphabet",
                    c.render(),
                    c.counts().len(),
                    k
                )));
            }
            if c.weight() == 0 {
                return Err(Error::InvalidMultiset("zero-weight composition".into()));
            }
            if m == 0 {
                return Err(Error::InvalidMultiset(format!(
                    "composition {} has zero multiplicity",
                    c.render()
                )));
            }
            *map.entry(c).or_insert(0) += m;
        }
        let total = map.values().sum();
        Ok(CompositionMultiset { alphabet, entries: map, total, declared_len })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&Composition, u64)> {
        self.entries.iter().map(|(c, &m)| (c, m))
    }

    pub fn multiplicity(&self, c: &Composition) -> u64 {
        self.entries.get(c).copied().unwrap_or(0)
    }

    pub fn distinct_len(&self) -> usize {
        self.entries.len()
    }

    /// Total multiplicity over all entries.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn declared_len(&self) -> Option<usize> {
        self.declared_len
    }

    /// String length implied by the total multiplicity (or declared up front).
    /// Meaningful once [`validate`](Self::validate) has passed.
    pub fn len(&self) -> usize {
        self.declared_len.unwrap_or_else(|| triangular_inverse(self.total).unwrap_or(0))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks that the multiset has the shape of a composition multiset of
    /// some length-n string, and returns that n.
    ///
    /// Verified: the total multiplicity is triangular; every weight layer
    /// w = 1..n holds exactly n+1-w compositions; the weight-n layer is a
    /// single entry, and it equals the union of the weight-1 layer. Failing
    /// any of these proves no string generates the multiset; passing does
    /// not yet prove one does.
    pub fn validate(&self) -> Result<usize> {
        if self.entries.is_empty() {
            return Err(Error::InvalidMultiset("no entries".into()));
        }
        let n = triangular_inverse(self.total).ok_or_else(|| {
            Error::InvalidMultiset(format!(
                "total multiplicity {} is not of the form n(n+1)/2",
                self.total
            ))
        })?;
        if let Some(d) = self.declared_len {
            if d != n {
                return Err(Error::InvalidMultiset(format!(
                    "declared length {d} but total multiplicity implies {n}"
                )));
            }
        }
        let k = self.alphabet.len();
        let mut layer_counts = vec![0u64; n + 1];
        for (c, &m) in &self.entries {
            let w = c.weight() as usize;
            if w > n {
                return Err(Error::InvalidMultiset(format!(
                    "composition {} has weight {w} > {n}",
                    c.render()
                )));
            }
            layer_counts[w] += m;
        }
        for w in 1..=n {
            let expect = (n + 1 - w) as u64;
            if layer_counts[w] != expect {
                return Err(Error::InvalidMultiset(format!(
                    "weight-{w} layer holds {} compositions, expected {expect}",
                    layer_counts[w]
                )));
            }
        }
        let full = self
            .entries
            .iter()
            .find(|(c, _)| c.weight() as usize == n)
            .map(|(c, _)| c.clone())
            .expect("weight-n layer verified nonempty");
        let mut m1 = vec![0u64; k];
        for (c, &m) in &self.entries {
            if c.weight() == 1 {
                for (acc, &cnt) in m1.iter_mut().zip(c.counts()) {
                    *acc += m * cnt as u64;
                }
            }
        }
        let full_u64: Vec<u64> = full.counts().iter().map(|&c| c as u64).collect();
        if m1 != full_u64 {
            return Err(Error::InvalidMultiset(
                "weight-1 layer union differs from the full composition".into(),
            ));
        }
        Ok(n)
    }

    /// Union of the weight-`i` layer: component-wise sums weighted by
    /// multiplicity. Assumes a validated multiset of length n; errors when
    /// `i` is outside 1..=n.
    pub fn layer_union(&self, i: usize) -> Result<Composition> {
        let n = self.len();
        if i < 1 || i > n {
            return Err(Error::OutOfRange(format!("layer {i} outside 1..={n}")));
        }
        let k = self.alphabet.len();
        let mut acc = vec![0u64; k];
        for (c, &m) in &self.entries {
            if c.weight() as usize == i {
                for (a, &cnt) in acc.iter_mut().zip(c.counts()) {
                    *a += m * cnt as u64;
                }
            }
        }
        let counts: Vec<u32> = acc
            .into_iter()
            .map(|v| u32::try_from(v).expect("layer union overflows u32"))
            .collect();
        Ok(Composition::new(counts))
    }

    /// Reads the unordered end pairs `{s_i, s_{n+1-i}}` for i = 1..n/2 (and
    /// the forced middle symbol for odd n) off the layer unions.
    ///
    /// Validates first; a derived pair with a negative count or a total
    /// other than two proves the multiset unrealizable.
    pub fn mirror_pairs(&self) -> Result<MirrorPairs> {
        self.validate()?;
        let (pairs, middle) = self.mirror_pair_indices()?;
        Ok(MirrorPairs {
            pairs: pairs
                .into_iter()
                .map(|(a, b)| (self.alphabet.symbol(a), self.alphabet.symbol(b)))
                .collect(),
            middle: middle.map(|m| self.alphabet.symbol(m)),
        })
    }

    /// Index form of [`mirror_pairs`](Self::mirror_pairs), skipping
    /// re-validation. Each pair is (smaller, larger) by alphabet order.
    pub(crate) fn mirror_pair_indices(&self) -> Result<(Vec<(u8, u8)>, Option<u8>)> {
        let n = self.len();
        let k = self.alphabet.len();
        let h = n / 2;
        // layer unions M_1..M_{h+1}, with M_w summed only while w <= h+1
        let top = (h + 1).min(n);
        let mut layers = vec![vec![0i64; k]; top + 1];
        for (c, &m) in &self.entries {
            let w = c.weight() as usize;
            if w <= top {
                for (a, &cnt) in layers[w].iter_mut().zip(c.counts()) {
                    *a += m as i64 * cnt as i64;
                }
            }
        }
        let m1 = layers[1].clone();
        // pair_i = (i+1) M_1 - M_{i+1} - (i+1) A + B, where
        // A = sum of earlier pairs, B = sum of p * pair_p
        let mut pairs = Vec::with_capacity(h);
        let mut a_sum = vec![0i64; k];
        let mut b_sum = vec![0i64; k];
        for i in 1..=h {
            let mut pair = vec![0i64; k];
            for c in 0..k {
                pair[c] = (i as i64 + 1) * m1[c] - layers[i + 1][c] - (i as i64 + 1) * a_sum[c]
                    + b_sum[c];
            }
            let sym_pair = composition_as_pair(&pair).ok_or_else(|| {
                Error::InvalidMultiset(format!("derived end pair {i} is not two symbols"))
            })?;
            for c in 0..k {
                a_sum[c] += pair[c];
                b_sum[c] += i as i64 * pair[c];
            }
            pairs.push(sym_pair);
        }
        let middle = if n % 2 == 1 {
            let mut mid = vec![0i64; k];
            for c in 0..k {
                mid[c] = m1[c] - a_sum[c];
            }
            Some(composition_as_symbol(&mid).ok_or_else(|| {
                Error::InvalidMultiset("derived middle is not a single symbol".into())
            })?)
        } else {
            None
        };
        Ok((pairs, middle))
    }

    /// Projects onto a binary alphabet: symbols in `ones` map to `1`, all
    /// others to `0`. The result is the composition multiset of the
    /// indicator image of the generating string.
    pub fn project(&self, ones: &[char]) -> Result<CompositionMultiset> {
        let k = self.alphabet.len();
        let mut is_one = vec![false; k];
        for &c in ones {
            match self.alphabet.index_of(c) {
                Some(i) => is_one[i as usize] = true,
                None => return Err(Error::InvalidSymbol(c)),
            }
        }
        let mut entries: BTreeMap<Composition, u64> = BTreeMap::new();
        for (c, &m) in &self.entries {
            let mut zeros = 0u32;
            let mut ones_count = 0u32;
            for (idx, &cnt) in c.counts().iter().enumerate() {
                if is_one[idx] {
                    ones_count += cnt;
                } else {
                    zeros += cnt;
                }
            }
            *entries.entry(Composition::new(vec![zeros, ones_count])).or_insert(0) += m;
        }
        let total = entries.values().sum();
        Ok(CompositionMultiset {
            alphabet: Alphabet::binary(),
            entries,
            total,
            declared_len: self.declared_len,
        })
    }

    /// Turnpike reduction of a binary multiset of length n: the composition
    /// with a zeros and b ones becomes the integer a + b(n+1). Returns the
    /// flattened multiset, ascending.
    pub fn to_turnpike(&self) -> Result<Vec<u64>> {
        if !self.alphabet.is_binary() {
            return Err(Error::NonBinaryAlphabet);
        }
        let n = self.len() as u64;
        let mut out = Vec::with_capacity(self.total as usize);
        for (c, &m) in &self.entries {
            let a = c.counts()[0] as u64;
            let b = c.counts()[1] as u64;
            let v = a + b * (n + 1);
            for _ in 0..m {
                out.push(v);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Canonical text rendering: a header line, then one line per distinct
    /// composition in canonical order.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} alphabet={}\n", self.len(), self.alphabet);
        for (c, &m) in &self.entries {
            out.push_str(&format!("{} x{}\n", c.render(), m));
        }
        out
    }

    /// Parses the [`to_text`](Self::to_text) format and validates the result.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let mut head_parts = header.split_whitespace();
        let n_part = head_parts
            .next()
            .filter(|p| p.starts_with("n="))
            .ok_or_else(|| Error::Parse("header must start with n=<len>".into()))?;
        let n: usize = n_part[2..]
            .parse()
            .map_err(|_| Error::Parse(format!("bad length in header: {n_part:?}")))?;
        let alpha_part = head_parts
            .next()
            .filter(|p| p.starts_with("alphabet="))
            .ok_or_else(|| Error::Parse("header must contain alphabet=<symbols>".into()))?;
        if head_parts.next().is_some() {
            return Err(Error::Parse("trailing tokens in header".into()));
        }
        let alphabet = Alphabet::from_text(&alpha_part["alphabet=".len()..])
            .map_err(|e| Error::Parse(e.to_string()))?;
        let k = alphabet.len();

        let mut entries: BTreeMap<Composition, u64> = BTreeMap::new();
        for (idx, line) in lines.enumerate() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 2;
            let (counts_part, mult_part) = line
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("line {lineno}: missing multiplicity")))?;
            let mult_part = mult_part.trim();
            if !mult_part.starts_with('x') {
                return Err(Error::Parse(format!(
                    "line {lineno}: multiplicity must look like x<count>"
                )));
            }
            let mult: u64 = mult_part[1..]
                .parse()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad multiplicity")))?;
            if mult == 0 {
                return Err(Error::Parse(format!("line {lineno}: zero multiplicity")));
            }
            let mut counts = Vec::with_capacity(k);
            for piece in counts_part.split(',') {
                counts.push(
                    piece
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("line {lineno}: bad count {piece:?}")))?,
                );
            }
            if counts.len() != k {
                return Err(Error::Parse(format!(
                    "line {lineno}: {} counts for a {k}-symbol alphabet",
                    counts.len()
                )));
            }
            let comp = Composition::new(counts);
            if entries.insert(comp, mult).is_some() {
                return Err(Error::Parse(format!("line {lineno}: duplicate composition")));
            }
        }
        let total = entries.values().sum();
        let ms = CompositionMultiset { alphabet, entries, total, declared_len: Some(n) };
        ms.validate().map(|_| ms)
    }
}

/// Largest n with n(n+1)/2 == total, if total is triangular and n >= 1.
fn triangular_inverse(total: u64) -> Option<usize> {
    if total == 0 {
        return None;
    }
    let n = ((((8 * total + 1) as f64).sqrt() - 1.0) / 2.0).round() as u64;
    for cand in n.saturating_sub(1)..=n + 1 {
        if cand >= 1 && cand * (cand + 1) / 2 == total {
            return Some(cand as usize);
        }
    }
    None
}

/// Interprets a derived count vector as an unordered pair of symbols.
fn composition_as_pair(counts: &[i64]) -> Option<(u8, u8)> {
    if counts.iter().any(|&c| c < 0) || counts.iter().sum::<i64>() != 2 {
        return None;
    }
    let mut syms = Vec::with_capacity(2);
    for (i, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            syms.push(i as u8);
        }
    }
    Some((syms[0], syms[1]))
}

fn composition_as_symbol(counts: &[i64]) -> Option<u8> {
    if counts.iter().any(|&c| c < 0) || counts.iter().sum::<i64>() != 1 {
        return None;
    }
    counts.iter().position(|&c| c == 1).map(|i| i as u8)
}
