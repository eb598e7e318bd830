//! Brute-force ground truth and statistical validation.
//!
//! Exhaustive enumeration groups every length-n string by its composition
//! multiset, giving the exact class structure the reconstruction engine
//! must reproduce. Random sampling estimates the distribution of the guess
//! count ell, and the collision probability of two random compositions is
//! computed as an exact rational for comparison with its closed-form
//! bounds.

use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::composition::CompositionMultiset;
use crate::reconstruct::ell;
use crate::strings::{Alphabet, Str};
use crate::{Error, Result};

/// Default limit on |alphabet|^n for enumeration and on the number of
/// weight-n compositions for the collision sum.
pub const DEFAULT_CAP: u128 = 1 << 20;

/// Identifier of the sampling generator, recorded in every distribution
/// so runs are replayable bit for bit.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Exhaustive class structure of all length-n strings over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTable {
    pub n: usize,
    pub alphabet: Alphabet,
    /// Equicomposability classes, each sorted internally, ordered by their
    /// smallest member. Together they partition the alphabet's n-th power.
    pub classes: Vec<std::collections::BTreeSet<Str>>,
    /// Largest class size.
    pub e_n: usize,
}

impl ClassTable {
    /// The class containing s, if s has length n over this alphabet.
    pub fn class_of(&self, s: &Str) -> Option<&std::collections::BTreeSet<Str>> {
        self.classes.iter().find(|c| c.contains(s))
    }
}

/// Groups all strings of length n over the alphabet by composition
/// multiset. Strings are fingerprinted by a hash of the canonical multiset
/// form, then every hash bucket is re-verified with exact comparison, so
/// hash collisions cannot merge classes.
pub fn enumerate_classes(n: usize, alphabet: &Alphabet) -> Result<ClassTable> {
    enumerate_classes_capped(n, alphabet, DEFAULT_CAP)
}

/// [`enumerate_classes`] with an explicit string-count cap.
pub fn enumerate_classes_capped(n: usize, alphabet: &Alphabet, cap: u128) -> Result<ClassTable> {
    let total = checked_power(alphabet.len(), n, cap)?;
    let classes = crate::parallel::run(|| {
        let buckets = fingerprint_buckets(n, alphabet, total);
        verified_classes(n, alphabet, buckets)
    });
    Ok(finish_table(n, alphabet, classes))
}

/// Single-threaded [`enumerate_classes`]; same output.
pub fn enumerate_classes_seq(n: usize, alphabet: &Alphabet) -> Result<ClassTable> {
    let total = checked_power(alphabet.len(), n, DEFAULT_CAP)?;
    let buckets = fingerprint_shard(n, alphabet, 0, total);
    let classes = buckets
        .into_values()
        .flat_map(|codes| verify_bucket(n, alphabet, codes))
        .collect();
    Ok(finish_table(n, alphabet, classes))
}

/// Largest equicomposability class size among length-n strings.
pub fn exact_en(n: usize, alphabet: &Alphabet) -> Result<usize> {
    Ok(enumerate_classes(n, alphabet)?.e_n)
}

fn checked_power(k: usize, n: usize, cap: u128) -> Result<u64> {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.checked_mul(k as u128).unwrap_or(u128::MAX);
        if total > cap {
            return Err(Error::CapExceeded { required: total, cap });
        }
    }
    Ok(total as u64)
}

#[cfg(feature = "parallel")]
fn fingerprint_buckets(n: usize, alphabet: &Alphabet, total: u64) -> HashMap<u64, Vec<u64>> {
    use rayon::prelude::*;
    let shards = (crate::parallel::max_threads() * 4).max(1) as u64;
    let chunk = total.div_ceil(shards);
    (0..shards)
        .into_par_iter()
        .map(|s| {
            let lo = s * chunk;
            let hi = ((s + 1) * chunk).min(total);
            fingerprint_shard(n, alphabet, lo, hi)
        })
        .reduce(HashMap::new, |mut a, b| {
            for (h, mut codes) in b {
                a.entry(h).or_default().append(&mut codes);
            }
            a
        })
}

#[cfg(not(feature = "parallel"))]
fn fingerprint_buckets(n: usize, alphabet: &Alphabet, total: u64) -> HashMap<u64, Vec<u64>> {
    fingerprint_shard(n, alphabet, 0, total)
}

/// Fingerprints string codes in [lo, hi): hash of the canonical multiset
/// form. Binary alphabets use a dense (weight, zeros) table instead of the
/// tree-backed multiset.
fn fingerprint_shard(n: usize, alphabet: &Alphabet, lo: u64, hi: u64) -> HashMap<u64, Vec<u64>> {
    let k = alphabet.len();
    let mut buckets: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut indices = vec![0u8; n];
    if k == 2 {
        // dense[(w - 1)(w + 2)/2 + zeros] = multiplicity of the (w, zeros)
        // composition
        let mut dense = vec![0u32; n * (n + 3) / 2];
        let mut prefix_zeros = vec![0u32; n + 1];
        for code in lo..hi {
            decode(code, k, &mut indices);
            for i in 0..n {
                prefix_zeros[i + 1] = prefix_zeros[i] + u32::from(indices[i] == 0);
            }
            dense.fill(0);
            for a in 0..n {
                for b in a + 1..=n {
                    let w = b - a;
                    let zeros = (prefix_zeros[b] - prefix_zeros[a]) as usize;
                    dense[(w - 1) * (w + 2) / 2 + zeros] += 1;
                }
            }
            let mut hasher = std::collections::hash_map::DefaultHasher::new();
            dense.hash(&mut hasher);
            buckets.entry(hasher.finish()).or_default().push(code);
        }
    } else {
        for code in lo..hi {
            decode(code, k, &mut indices);
            let s = Str::from_indices(indices.clone(), alphabet);
            let ms = CompositionMultiset::of(&s);
            let mut hasher = std::collections::hash_map::DefaultHasher::new();
            for (c, m) in ms.entries() {
                c.counts().hash(&mut hasher);
                m.hash(&mut hasher);
            }
            buckets.entry(hasher.finish()).or_default().push(code);
        }
    }
    buckets
}

/// Base-k digits of `code`, most significant first, so numeric order on
/// codes is lexicographic order on strings.
fn decode(code: u64, k: usize, out: &mut [u8]) {
    let mut rest = code;
    for slot in out.iter_mut().rev() {
        *slot = (rest % k as u64) as u8;
        rest /= k as u64;
    }
}

#[cfg(feature = "parallel")]
fn verified_classes(
    n: usize,
    alphabet: &Alphabet,
    buckets: HashMap<u64, Vec<u64>>,
) -> Vec<std::collections::BTreeSet<Str>> {
    use rayon::prelude::*;
    let buckets: Vec<Vec<u64>> = buckets.into_values().collect();
    buckets
        .into_par_iter()
        .flat_map_iter(|codes| verify_bucket(n, alphabet, codes))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn verified_classes(
    n: usize,
    alphabet: &Alphabet,
    buckets: HashMap<u64, Vec<u64>>,
) -> Vec<std::collections::BTreeSet<Str>> {
    buckets.into_values().flat_map(|codes| verify_bucket(n, alphabet, codes)).collect()
}

/// Exact verification: regroups one hash bucket by the multiset itself, so
/// a hash collision can split but never merge classes.
fn verify_bucket(
    n: usize,
    alphabet: &Alphabet,
    codes: Vec<u64>,
) -> Vec<std::collections::BTreeSet<Str>> {
    let k = alphabet.len();
    let mut indices = vec![0u8; n];
    let mut exact: HashMap<String, std::collections::BTreeSet<Str>> = HashMap::new();
    for code in codes {
        decode(code, k, &mut indices);
        let s = Str::from_indices(indices.clone(), alphabet);
        let key = CompositionMultiset::of(&s).to_text();
        exact.entry(key).or_default().insert(s);
    }
    exact.into_values().collect()
}

fn finish_table(
    n: usize,
    alphabet: &Alphabet,
    mut classes: Vec<std::collections::BTreeSet<Str>>,
) -> ClassTable {
    classes.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()));
    let e_n = classes.iter().map(|c| c.len()).max().unwrap_or(0);
    ClassTable { n, alphabet: alphabet.clone(), classes, e_n }
}

/// Sampled distribution of the guess count over uniform random strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllDistribution {
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    /// Generator identifier; see [`RNG_ALGORITHM`].
    pub rng: &'static str,
    /// Multiplicity of each observed ell value; masses sum to `trials`.
    pub histogram: BTreeMap<usize, u64>,
}

impl EllDistribution {
    /// Number of trials with ell >= m.
    pub fn tail_count(&self, m: usize) -> u64 {
        self.histogram.range(m..).map(|(_, c)| c).sum()
    }

    /// Empirical probability of ell >= m.
    pub fn tail(&self, m: usize) -> f64 {
        self.tail_count(m) as f64 / self.trials as f64
    }

    /// Fraction of trials needing any guess at all.
    pub fn p_hat(&self) -> f64 {
        self.tail(1)
    }

    /// Sample mean of ell.
    pub fn mean(&self) -> f64 {
        let sum: u64 = self.histogram.iter().map(|(&v, &c)| v as u64 * c).sum();
        sum as f64 / self.trials as f64
    }
}

/// Draws `trials` uniform strings of length n over a k-symbol alphabet and
/// histograms their [`ell`] values. Trial t uses stream t of a seeded
/// generator, so results are independent of scheduling and thread count.
pub fn ell_statistics(n: usize, k: usize, trials: u64, seed: u64) -> EllDistribution {
    let histogram = crate::parallel::run(|| ell_histogram(n, k, trials, seed));
    finish_distribution(n, k, trials, seed, histogram)
}

/// Single-threaded [`ell_statistics`]; same output.
pub fn ell_statistics_seq(n: usize, k: usize, trials: u64, seed: u64) -> EllDistribution {
    let mut histogram = BTreeMap::new();
    for trial in 0..trials {
        *histogram.entry(one_trial(n, k, seed, trial)).or_insert(0) += 1;
    }
    finish_distribution(n, k, trials, seed, histogram)
}

fn finish_distribution(
    n: usize,
    k: usize,
    trials: u64,
    seed: u64,
    histogram: BTreeMap<usize, u64>,
) -> EllDistribution {
    let mass: u64 = histogram.values().sum();
    assert_eq!(mass, trials, "histogram mass must equal the trial count");
    EllDistribution { n, k, trials, seed, rng: RNG_ALGORITHM, histogram }
}

#[cfg(feature = "parallel")]
fn ell_histogram(n: usize, k: usize, trials: u64, seed: u64) -> BTreeMap<usize, u64> {
    use rayon::prelude::*;
    (0..trials)
        .into_par_iter()
        .fold(BTreeMap::new, |mut h: BTreeMap<usize, u64>, trial| {
            *h.entry(one_trial(n, k, seed, trial)).or_insert(0) += 1;
            h
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (v, c) in b {
                *a.entry(v).or_insert(0) += c;
            }
            a
        })
}

#[cfg(not(feature = "parallel"))]
fn ell_histogram(n: usize, k: usize, trials: u64, seed: u64) -> BTreeMap<usize, u64> {
    let mut histogram = BTreeMap::new();
    for trial in 0..trials {
        *histogram.entry(one_trial(n, k, seed, trial)).or_insert(0) += 1;
    }
    histogram
}

fn one_trial(n: usize, k: usize, seed: u64, trial: u64) -> usize {
    assert!(n >= 2, "ell needs length at least 2");
    assert!((2..=36).contains(&k), "alphabet size must be in 2..=36");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let indices: Vec<u8> = (0..n).map(|_| rng.gen_range(0..k as u8)).collect();
    let alphabet = stats_alphabet(k);
    ell(&Str::from_indices(indices, &alphabet))
}

/// Alphabet used for sampled strings: the first k of 0-9 then a-z.
pub fn stats_alphabet(k: usize) -> Alphabet {
    const SYMBOLS: &str = "0123456789abcdefghijklmnopqrstuvwxyz";
    Alphabet::from_text(&SYMBOLS[..k]).expect("digits and letters are distinct")
}

/// Exact probability that two independent uniform length-n strings over k
/// symbols have the same full composition: the sum over weight-n
/// compositions of (multinomial / k^n)^2.
pub fn collision_probability(n: usize, k: usize) -> Result<BigRational> {
    assert!(k >= 1);
    let compositions = binomial_u128(n as u128 + k as u128 - 1, k as u128 - 1);
    if compositions > DEFAULT_CAP {
        return Err(Error::CapExceeded { required: compositions, cap: DEFAULT_CAP });
    }
    let factorials: Vec<BigUint> = {
        let mut f = vec![BigUint::one()];
        for i in 1..=n {
            let next = f[i - 1].clone() * BigUint::from(i);
            f.push(next);
        }
        f
    };
    let mut sum = BigUint::zero();
    let mut counts = vec![0usize; k];
    sum_multinomial_squares(&factorials, n, &mut counts, 0, n, &mut sum);
    let denom = BigUint::from(k).pow(2 * n as u32);
    Ok(BigRational::new(BigInt::from(sum), BigInt::from(denom)))
}

fn sum_multinomial_squares(
    factorials: &[BigUint],
    n: usize,
    counts: &mut Vec<usize>,
    slot: usize,
    left: usize,
    sum: &mut BigUint,
) {
    if slot + 1 == counts.len() {
        counts[slot] = left;
        let mut m = factorials[n].clone();
        for &c in counts.iter() {
            m /= &factorials[c];
        }
        *sum += &m * &m;
        return;
    }
    for c in 0..=left {
        counts[slot] = c;
        sum_multinomial_squares(factorials, n, counts, slot + 1, left - c, sum);
    }
}

fn binomial_u128(n: u128, r: u128) -> u128 {
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Closed-form collision bound for k >= n: n! / k^n, exact.
pub fn collision_bound_exact(n: usize, k: usize) -> BigRational {
    assert!(k >= n, "the exact bound applies to alphabets at least as large as n");
    let mut numer = BigUint::one();
    for i in 1..=n {
        numer *= BigUint::from(i);
    }
    BigRational::new(BigInt::from(numer), BigInt::from(BigUint::from(k).pow(n as u32)))
}

/// Closed-form collision bound for k < n:
/// k^(k/2) e^(1/(12n)) / (2 pi n)^((k-1)/2).
pub fn collision_bound(n: usize, k: usize) -> f64 {
    assert!(k < n, "the Stirling-based bound applies to alphabets smaller than n");
    let kf = k as f64;
    let nf = n as f64;
    kf.powf(kf / 2.0) * (1.0 / (12.0 * nf)).exp()
        / (2.0 * std::f64::consts::PI * nf).powf((kf - 1.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interleave::interleave_factorize;
    use crate::poly::equicomposable_poly;
    use crate::reconstruct::reconstruct_all;
    use num::ToPrimitive;

    fn binary() -> Alphabet {
        Alphabet::binary()
    }

    /// Ground truth for the largest class size at each length.
    const EN_FIXTURES: [usize; 15] = [1, 2, 2, 2, 2, 2, 2, 4, 2, 2, 4, 2, 2, 4, 4];

    #[test]
    fn exact_en_matches_fixtures() {
        for (i, &expected) in EN_FIXTURES.iter().enumerate() {
            let n = i + 1;
            assert_eq!(exact_en(n, &binary()).unwrap(), expected, "n = {n}");
        }
    }

    #[test]
    fn length_eight_has_the_known_size_four_class() {
        let table = enumerate_classes(8, &binary()).unwrap();
        assert_eq!(table.e_n, 4);
        let member = Str::parse("01001101", &binary()).unwrap();
        let class = table.class_of(&member).unwrap();
        let expected: std::collections::BTreeSet<Str> =
            ["01001101", "01101001", "10010110", "10110010"]
                .iter()
                .map(|s| Str::parse(s, &binary()).unwrap())
                .collect();
        assert_eq!(class, &expected);
    }

    #[test]
    fn classes_partition_and_are_reversal_closed_powers_of_two() {
        for n in 1..=12 {
            let table = enumerate_classes(n, &binary()).unwrap();
            let total: usize = table.classes.iter().map(|c| c.len()).sum();
            assert_eq!(total, 1 << n);
            let mut seen = std::collections::BTreeSet::new();
            for class in &table.classes {
                for s in class {
                    assert!(seen.insert(s.clone()), "{s} appears twice");
                    assert!(class.contains(&s.reversed()));
                }
                assert!(class.len().is_power_of_two(), "class size {}", class.len());
            }
        }
    }

    #[test]
    fn singletons_at_length_one() {
        let table = enumerate_classes(1, &binary()).unwrap();
        assert_eq!(table.classes.len(), 2);
        assert!(table.classes.iter().all(|c| c.len() == 1));
        assert_eq!(table.e_n, 1);
    }

    #[test]
    fn agrees_with_direct_grouping_on_a_ternary_alphabet() {
        let alpha = Alphabet::from_text("abc").unwrap();
        let n = 5;
        let mut direct: BTreeMap<String, std::collections::BTreeSet<Str>> = BTreeMap::new();
        for code in 0..3u64.pow(n as u32) {
            let mut idx = vec![0u8; n];
            decode(code, 3, &mut idx);
            let s = Str::from_indices(idx, &alpha);
            direct.entry(CompositionMultiset::of(&s).to_text()).or_default().insert(s);
        }
        let mut expected: Vec<_> = direct.into_values().collect();
        expected.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()));
        let table = enumerate_classes(n, &alpha).unwrap();
        assert_eq!(table.classes, expected);
    }

    #[test]
    fn sequential_and_parallel_enumeration_agree() {
        for n in [6, 9] {
            assert_eq!(
                enumerate_classes(n, &binary()).unwrap(),
                enumerate_classes_seq(n, &binary()).unwrap()
            );
        }
    }

    #[test]
    fn engine_returns_every_enumerated_class() {
        for n in 1..=9 {
            let table = enumerate_classes(n, &binary()).unwrap();
            for class in &table.classes {
                let ms = CompositionMultiset::of(class.iter().next().unwrap());
                assert_eq!(&reconstruct_all(&ms).unwrap(), class, "n = {n}");
            }
        }
    }

    #[test]
    fn class_members_factor_into_equicomposable_irreducibles() {
        for n in 1..=10 {
            let table = enumerate_classes(n, &binary()).unwrap();
            for class in &table.classes {
                let factorizations: Vec<Vec<Str>> =
                    class.iter().map(|s| interleave_factorize(s).factors).collect();
                for pair in factorizations.windows(2) {
                    assert_eq!(pair[0].len(), pair[1].len(), "factor counts differ");
                    for (f, g) in pair[0].iter().zip(&pair[1]) {
                        assert_eq!(f.len(), g.len());
                        assert!(
                            equicomposable_poly(f, g).unwrap(),
                            "factors {f} and {g} are not equicomposable"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        assert!(matches!(
            enumerate_classes(30, &binary()),
            Err(Error::CapExceeded { cap: DEFAULT_CAP, .. })
        ));
        assert!(matches!(
            enumerate_classes_capped(4, &binary(), 15),
            Err(Error::CapExceeded { required: 16, cap: 15 })
        ));
        assert!(enumerate_classes_capped(4, &binary(), 16).is_ok());
    }

    #[test]
    fn ell_statistics_are_deterministic_and_complete() {
        let a = ell_statistics(50, 4, 500, 42);
        let b = ell_statistics(50, 4, 500, 42);
        let c = ell_statistics_seq(50, 4, 500, 42);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.rng, "chacha8");
        assert_eq!(a.histogram.values().sum::<u64>(), 500);
        assert!(a.tail(0) == 1.0);
        let other_seed = ell_statistics(50, 4, 500, 43);
        assert_ne!(a.histogram, other_seed.histogram);
    }

    #[test]
    fn ell_statistics_at_trivial_length() {
        // every length-2 string has ell 0
        let d = ell_statistics(2, 2, 100, 7);
        assert_eq!(d.histogram, BTreeMap::from([(0, 100)]));
        assert_eq!(d.p_hat(), 0.0);
        assert_eq!(d.mean(), 0.0);
    }

    #[test]
    fn tail_and_mean_are_consistent() {
        let d = ell_statistics(200, 2, 300, 5);
        // mean equals the sum of tail counts at m >= 1
        let tail_sum: u64 = (1..=d.histogram.keys().max().copied().unwrap_or(0))
            .map(|m| d.tail_count(m))
            .sum();
        assert!((d.mean() - tail_sum as f64 / 300.0).abs() < 1e-12);
        assert!(d.tail(1) >= d.tail(2));
    }

    #[test]
    fn collision_probability_exact_values() {
        assert_eq!(
            collision_probability(2, 2).unwrap(),
            BigRational::new(BigInt::from(3), BigInt::from(8))
        );
        // n=1: all k compositions collide with probability 1/k, matching
        // the k >= n bound exactly
        assert_eq!(collision_probability(1, 5).unwrap(), collision_bound_exact(1, 5));
        assert!(collision_probability(3, 8).unwrap() <= collision_bound_exact(3, 8));
    }

    #[test]
    fn collision_probability_respects_both_bounds() {
        for k in 2..=6 {
            for n in 1..=8 {
                let exact = collision_probability(n, k).unwrap();
                if k >= n {
                    assert!(exact <= collision_bound_exact(n, k), "n={n} k={k}");
                } else {
                    let e = exact.to_f64().unwrap();
                    assert!(e <= collision_bound(n, k), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn collision_cap_is_enforced() {
        assert!(matches!(collision_probability(60, 6), Err(Error::CapExceeded { .. })));
    }
}
