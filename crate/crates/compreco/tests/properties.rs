//! Randomized invariants over generated strings and alphabets.

use proptest::prelude::*;

use compreco::interleave::{interleave_all, interleave_factorize};
use compreco::poly::BivariatePoly;
use compreco::reconstruct::reconstruct_all;
use compreco::{Alphabet, CompositionMultiset, Str};

const SYMBOL_POOL: &str = "abcde";

fn alphabet(k: usize) -> Alphabet {
    Alphabet::from_text(&SYMBOL_POOL[..k]).unwrap()
}

/// Strings of length 1..=max_len over alphabets of size 1..=5.
fn arb_str(max_len: usize) -> impl Strategy<Value = Str> {
    (1usize..=5).prop_flat_map(move |k| {
        proptest::collection::vec(0..k as u8, 1..=max_len)
            .prop_map(move |indices| Str::from_indices(indices, &alphabet(k)))
    })
}

fn arb_binary(max_len: usize) -> impl Strategy<Value = Str> {
    proptest::collection::vec(0u8..2, 1..=max_len)
        .prop_map(|indices| Str::from_indices(indices, &Alphabet::binary()))
}

fn symbol_at(s: &Str, i: usize) -> char {
    s.alphabet().symbol(s.indices()[i])
}

proptest! {
    #[test]
    fn multiset_validates_to_the_source_length(s in arb_str(30)) {
        let ms = CompositionMultiset::of(&s);
        prop_assert_eq!(ms.validate().unwrap(), s.len());
        prop_assert_eq!(ms.total() as usize, s.len() * (s.len() + 1) / 2);
    }

    #[test]
    fn reversal_preserves_the_multiset(s in arb_str(30)) {
        prop_assert_eq!(CompositionMultiset::of(&s), CompositionMultiset::of(&s.reversed()));
    }

    #[test]
    fn text_rendering_round_trips(s in arb_str(30)) {
        let ms = CompositionMultiset::of(&s);
        prop_assert_eq!(CompositionMultiset::parse(&ms.to_text()).unwrap(), ms);
    }

    #[test]
    fn mirror_pairs_read_off_the_source(s in arb_str(30)) {
        let n = s.len();
        let mirror = CompositionMultiset::of(&s).mirror_pairs().unwrap();
        prop_assert_eq!(mirror.pairs.len(), n / 2);
        for (i, &(a, b)) in mirror.pairs.iter().enumerate() {
            let mut expected = [symbol_at(&s, i), symbol_at(&s, n - 1 - i)];
            expected.sort_by_key(|&c| s.alphabet().index_of(c).unwrap());
            prop_assert_eq!((a, b), (expected[0], expected[1]), "pair {}", i);
        }
        let middle = (n % 2 == 1).then(|| symbol_at(&s, n / 2));
        prop_assert_eq!(mirror.middle, middle);
    }

    #[test]
    fn layer_unions_are_symmetric(s in arb_str(30)) {
        let n = s.len();
        let ms = CompositionMultiset::of(&s);
        for i in 1..=n {
            prop_assert_eq!(
                ms.layer_union(i).unwrap(),
                ms.layer_union(n + 1 - i).unwrap(),
                "layer {}",
                i
            );
        }
    }

    #[test]
    fn projection_commutes_with_the_indicator_image(s in arb_str(24), mask in any::<u8>()) {
        let ones: Vec<char> = s
            .alphabet()
            .symbols()
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &c)| c)
            .collect();
        let projected = CompositionMultiset::of(&s).project(&ones).unwrap();
        let image: String = s
            .to_string()
            .chars()
            .map(|c| if ones.contains(&c) { '1' } else { '0' })
            .collect();
        let direct = CompositionMultiset::of(&Str::parse(&image, &Alphabet::binary()).unwrap());
        prop_assert_eq!(projected, direct);
    }

    #[test]
    fn turnpike_distances_separate_compositions(s in arb_binary(30)) {
        let ms = CompositionMultiset::of(&s);
        let distances = ms.to_turnpike().unwrap();
        prop_assert_eq!(distances.len() as u64, ms.total());
        let distinct: std::collections::BTreeSet<u64> = distances.iter().copied().collect();
        prop_assert_eq!(distinct.len(), ms.distinct_len());
    }

    #[test]
    fn factorization_multiplies_back(s in arb_str(30)) {
        let factors = interleave_factorize(&s).factors;
        prop_assert_eq!(interleave_all(&factors).unwrap(), s);
    }

    #[test]
    fn reciprocal_generates_the_reversal(s in arb_binary(24)) {
        let p = BivariatePoly::generating(&s).unwrap();
        prop_assert_eq!(p.reciprocal(), BivariatePoly::generating(&s.reversed()).unwrap());
    }

    #[test]
    fn reconstruction_recovers_the_source(s in arb_str(14)) {
        let ms = CompositionMultiset::of(&s);
        let found = reconstruct_all(&ms).unwrap();
        prop_assert!(found.contains(&s), "missing {}", s);
        prop_assert!(found.contains(&s.reversed()));
        for t in &found {
            prop_assert_eq!(CompositionMultiset::of(t), ms.clone());
        }
    }
}
