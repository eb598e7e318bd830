//! Bivariate generating polynomials of binary strings.
//!
//! A binary string s of length n is encoded as P_s(x, y) = sum over its
//! n+1 prefixes of x^(zeros in prefix) y^(ones in prefix). Two strings have
//! equal composition multisets exactly when P_s P_s* = P_t P_t*, where *
//! is the reciprocal, so multiset questions turn into polynomial identities.
//!
//! Coefficients are arbitrary-precision integers: products and reciprocals
//! of adversarial inputs must not silently wrap.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Signed, Zero};

use crate::cyclotomic::UnivariatePoly;
use crate::strings::{Alphabet, Str};
use crate::{Error, Result};

/// Exponent pair x^x_exp y^y_exp. Canonical order is total degree, then
/// x-exponent; all term iteration and rendering follows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub fn total(&self) -> u32 {
        self.x + self.y
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total().cmp(&other.total()).then_with(|| self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse bivariate polynomial over the integers. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        BivariatePoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        BivariatePoly::from_terms([(0, 0, BigInt::one())])
    }

    /// Builds a polynomial, merging duplicate monomials and dropping zeros.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, BigInt)>,
    {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (x, y, c) in terms {
            if c.is_zero() {
                continue;
            }
            let slot = map.entry(Monomial { x, y }).or_insert_with(BigInt::zero);
            *slot += c;
            if slot.is_zero() {
                map.remove(&Monomial { x, y });
            }
        }
        BivariatePoly { terms: map }
    }

    /// The generating polynomial of a binary string: one term per prefix,
    /// exponents counting the two symbols. The empty string gives 1.
    pub fn generating(s: &Str) -> Result<Self> {
        if !s.alphabet().is_binary() {
            return Err(Error::NonBinaryAlphabet);
        }
        let mut terms = BTreeMap::new();
        let (mut zeros, mut ones) = (0u32, 0u32);
        terms.insert(Monomial { x: 0, y: 0 }, BigInt::one());
        for &sym in s.indices() {
            if sym == 0 {
                zeros += 1;
            } else {
                ones += 1;
            }
            terms.insert(Monomial { x: zeros, y: ones }, BigInt::one());
        }
        Ok(BivariatePoly { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coeff(&self, x: u32, y: u32) -> BigInt {
        self.terms.get(&Monomial { x, y }).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Largest x-exponent (0 for the zero polynomial).
    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.x).max().unwrap_or(0)
    }

    pub fn y_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.y).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total()).max().unwrap_or(0)
    }

    pub fn mul(&self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = Monomial { x: ma.x + mb.x, y: ma.y + mb.y };
                let slot = map.entry(m).or_insert_with(BigInt::zero);
                *slot += ca * cb;
                if slot.is_zero() {
                    map.remove(&m);
                }
            }
        }
        BivariatePoly { terms: map }
    }

    /// The reciprocal x^deg_x y^deg_y P(1/x, 1/y): every exponent pair is
    /// reflected through the degree box. Zero maps to zero.
    pub fn reciprocal(&self) -> BivariatePoly {
        if self.is_zero() {
            return BivariatePoly::zero();
        }
        let dx = self.x_degree();
        let dy = self.y_degree();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Monomial { x: dx - m.x, y: dy - m.y }, c.clone()))
            .collect();
        BivariatePoly { terms }
    }

    /// True when P equals its own reciprocal.
    pub fn is_palindromic(&self) -> bool {
        *self == self.reciprocal()
    }

    /// Whether the polynomial generates some binary string: all coefficients
    /// one, exactly one term in each total degree 0..=n, and consecutive
    /// terms differing by exactly one x or one y.
    pub fn is_generating(&self) -> bool {
        if self.terms.is_empty() {
            return false;
        }
        let n = self.total_degree();
        if self.terms.len() as u64 != n as u64 + 1 {
            return false;
        }
        let mut prev: Option<Monomial> = None;
        for (degree, (&m, c)) in self.terms.iter().enumerate() {
            if !c.is_one() || m.total() != degree as u32 {
                return false;
            }
            if let Some(p) = prev {
                let step_x = m.x == p.x + 1 && m.y == p.y;
                let step_y = m.x == p.x && m.y == p.y + 1;
                if !step_x && !step_y {
                    return false;
                }
            }
            prev = Some(m);
        }
        true
    }

    /// Recovers the unique string with this generating polynomial, read off
    /// the steps between consecutive terms. The alphabet supplies the two
    /// symbols (index 0 for an x step, index 1 for a y step).
    pub fn string_of_generating(&self, alphabet: &Alphabet) -> Result<Str> {
        if !alphabet.is_binary() {
            return Err(Error::NonBinaryAlphabet);
        }
        if !self.is_generating() {
            return Err(Error::NotGenerating);
        }
        let mut indices = Vec::with_capacity(self.terms.len() - 1);
        let mut prev: Option<Monomial> = None;
        for &m in self.terms.keys() {
            if let Some(p) = prev {
                indices.push(if m.x == p.x + 1 { 0 } else { 1 });
            }
            prev = Some(m);
        }
        Ok(Str::from_indices(indices, alphabet))
    }

    /// Substitutes y := x, collapsing terms onto their total degree.
    pub fn eval_diag(&self) -> UnivariatePoly {
        let n = self.total_degree() as usize;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for (m, c) in &self.terms {
            coeffs[m.total() as usize] += c;
        }
        UnivariatePoly::from_coeffs(coeffs)
    }

    /// Generating polynomial of an interleaving, computed on the polynomial
    /// side: P_s(x, y) * P_t(x^(a+1) y^b, x^a y^(b+1)) where s has a zeros
    /// and b ones.
    pub fn compose_interleave(p_s: &BivariatePoly, a: u32, b: u32, p_t: &BivariatePoly) -> BivariatePoly {
        let substituted = BivariatePoly::from_terms(p_t.terms.iter().map(|(m, c)| {
            ((a + 1) * m.x + a * m.y, b * m.x + (b + 1) * m.y, c.clone())
        }));
        p_s.mul(&substituted)
    }
}

/// Decides equality of composition multisets through the product identity
/// P_s P_s* = P_t P_t*. Strings must be binary and of equal length.
pub fn equicomposable_poly(s: &Str, t: &Str) -> Result<bool> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch { left: s.len(), right: t.len() });
    }
    let ps = BivariatePoly::generating(s)?;
    let pt = BivariatePoly::generating(t)?;
    Ok(ps.mul(&ps.reciprocal()) == pt.mul(&pt.reciprocal()))
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut pieces: Vec<String> = Vec::new();
            if !mag.is_one() || (m.x == 0 && m.y == 0) {
                pieces.push(mag.to_string());
            }
            if m.x == 1 {
                pieces.push("x".into());
            } else if m.x > 1 {
                pieces.push(format!("x^{}", m.x));
            }
            if m.y == 1 {
                pieces.push("y".into());
            } else if m.y > 1 {
                pieces.push(format!("y^{}", m.y));
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for BivariatePoly {
    type Err = Error;

    /// Parses the [`Display`] rendering (signs between terms, `*` between
    /// factors, `^` before exponents). `0` is the zero polynomial.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if text == "0" {
            return Ok(BivariatePoly::zero());
        }
        let mut terms: Vec<(u32, u32, BigInt)> = Vec::new();
        // split into signed chunks; a sign character binds to what follows
        let mut rest = text;
        let mut sign = BigInt::one();
        if let Some(stripped) = rest.strip_prefix('-') {
            sign = -BigInt::one();
            rest = stripped.trim_start();
        } else if let Some(stripped) = rest.strip_prefix('+') {
            rest = stripped.trim_start();
        }
        loop {
            let next_sign = rest.char_indices().find(|&(_, c)| c == '+' || c == '-');
            let (chunk, remainder, next) = match next_sign {
                Some((idx, c)) => (&rest[..idx], rest[idx + 1..].trim_start(), Some(c)),
                None => (rest, "", None),
            };
            let (x, y, c) = parse_term(chunk.trim())?;
            terms.push((x, y, c * &sign));
            match next {
                Some('-') => sign = -BigInt::one(),
                Some(_) => sign = BigInt::one(),
                None => break,
            }
            rest = remainder;
            if rest.is_empty() {
                return Err(Error::Parse("dangling sign".into()));
            }
        }
        Ok(BivariatePoly::from_terms(terms))
    }
}

fn parse_term(term: &str) -> Result<(u32, u32, BigInt)> {
    if term.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let mut x = 0u32;
    let mut y = 0u32;
    let mut coeff = BigInt::one();
    let mut saw_coeff = false;
    for factor in term.split('*') {
        let factor = factor.trim();
        if let Some(rest) = factor.strip_prefix('x') {
            x += parse_exponent(rest)?;
        } else if let Some(rest) = factor.strip_prefix('y') {
            y += parse_exponent(rest)?;
        } else if !saw_coeff {
            coeff = factor
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad factor {factor:?}")))?;
            saw_coeff = true;
        } else {
            return Err(Error::Parse(format!("unexpected factor {factor:?}")));
        }
    }
    Ok((x, y, coeff))
}

fn parse_exponent(rest: &str) -> Result<u32> {
    if rest.is_empty() {
        return Ok(1);
    }
    rest.strip_prefix('^')
        .and_then(|e| e.parse::<u32>().ok())
        .ok_or_else(|| Error::Parse(format!("bad exponent {rest:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::CompositionMultiset;

    fn gen(text: &str) -> BivariatePoly {
        BivariatePoly::generating(&Str::parse(text, &Alphabet::binary()).unwrap()).unwrap()
    }

    fn all_binary(n: usize) -> Vec<Str> {
        let alpha = Alphabet::binary();
        (0..1u32 << n)
            .map(|v| {
                let idx: Vec<u8> = (0..n).map(|i| ((v >> (n - 1 - i)) & 1) as u8).collect();
                Str::from_indices(idx, &alpha)
            })
            .collect()
    }

    #[test]
    fn generating_poly_of_0100() {
        assert_eq!(gen("0100").to_string(), "1 + x + x*y + x^2*y + x^3*y");
        assert_eq!(
            BivariatePoly::generating(&Str::parse("", &Alphabet::binary()).unwrap())
                .unwrap()
                .to_string(),
            "1"
        );
        assert!(BivariatePoly::generating(&Str::parse_inferred("ACAB").unwrap()).is_err());
    }

    #[test]
    fn reciprocal_reflects_exponents() {
        // (y + 3xy - 2y^2)* = xy + 3y - 2x
        let p = BivariatePoly::from_terms([
            (0, 1, BigInt::from(1)),
            (1, 1, BigInt::from(3)),
            (0, 2, BigInt::from(-2)),
        ]);
        assert_eq!(p.reciprocal().to_string(), "3*y - 2*x + x*y");
        assert_eq!(BivariatePoly::zero().reciprocal(), BivariatePoly::zero());
    }

    #[test]
    fn reciprocal_of_generating_matches_reversal() {
        assert_eq!(gen("0100").reciprocal(), gen("0010"));
        for s in all_binary(7) {
            assert_eq!(
                BivariatePoly::generating(&s).unwrap().reciprocal(),
                BivariatePoly::generating(&s.reversed()).unwrap()
            );
        }
    }

    #[test]
    fn reciprocal_degree_drops_iff_x_divides() {
        let p = BivariatePoly::from_terms([(1, 0, BigInt::one()), (2, 1, BigInt::one())]);
        assert!(p.reciprocal().x_degree() < p.x_degree());
        let q = BivariatePoly::from_terms([(0, 1, BigInt::one()), (2, 1, BigInt::one())]);
        assert_eq!(q.reciprocal().x_degree(), q.x_degree());
    }

    #[test]
    fn reciprocal_is_multiplicative_and_involutive() {
        let p = gen("0110");
        let q = gen("100");
        assert_eq!(p.mul(&q).reciprocal(), p.reciprocal().mul(&q.reciprocal()));
        // generating polynomials always carry the constant term 1, so the
        // reciprocal is an involution on them
        for s in all_binary(6) {
            let p = BivariatePoly::generating(&s).unwrap();
            assert_eq!(p.reciprocal().reciprocal(), p);
        }
    }

    #[test]
    fn product_identity_decides_equicomposability() {
        let alpha = Alphabet::binary();
        for n in 1..=8 {
            let strs = all_binary(n);
            let multisets: Vec<_> = strs.iter().map(CompositionMultiset::of).collect();
            let keys: Vec<_> = strs
                .iter()
                .map(|s| {
                    let p = BivariatePoly::generating(s).unwrap();
                    p.mul(&p.reciprocal())
                })
                .collect();
            for i in 0..strs.len() {
                for j in i..strs.len() {
                    assert_eq!(
                        keys[i] == keys[j],
                        multisets[i] == multisets[j],
                        "disagreement on {} vs {}",
                        strs[i],
                        strs[j]
                    );
                }
            }
        }
        for n in 1..=5 {
            let strs = all_binary(n);
            for s in &strs {
                let ms = CompositionMultiset::of(s);
                for t in &strs {
                    assert_eq!(equicomposable_poly(s, t).unwrap(), ms == CompositionMultiset::of(t));
                }
            }
        }
        let a = Str::parse("01", &alpha).unwrap();
        let b = Str::parse("011", &alpha).unwrap();
        assert!(matches!(equicomposable_poly(&a, &b), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn factored_form_of_01001101() {
        let factors = BivariatePoly::from_terms([
            (0, 0, BigInt::one()),
            (1, 0, BigInt::one()),
            (1, 1, BigInt::one()),
        ])
        .mul(&BivariatePoly::from_terms([
            (0, 0, BigInt::one()),
            (2, 1, BigInt::one()),
            (3, 3, BigInt::one()),
        ]));
        assert_eq!(factors, gen("01001101"));
    }

    #[test]
    fn generating_recognition_round_trips() {
        let alpha = Alphabet::binary();
        for n in 0..=10 {
            for s in all_binary(n) {
                let p = BivariatePoly::generating(&s).unwrap();
                assert!(p.is_generating(), "{s}");
                assert_eq!(p.string_of_generating(&alpha).unwrap(), s);
            }
        }
    }

    #[test]
    fn generating_recognition_rejects_near_misses() {
        assert!(!BivariatePoly::zero().is_generating());
        assert!(!BivariatePoly::from_terms([(0, 0, BigInt::from(2))]).is_generating());
        // skips total degree 1
        assert!(!BivariatePoly::from_terms([(0, 0, BigInt::one()), (2, 0, BigInt::one())])
            .is_generating());
        // two terms of one total degree
        assert!(!BivariatePoly::from_terms([
            (0, 0, BigInt::one()),
            (1, 0, BigInt::one()),
            (0, 1, BigInt::one()),
        ])
        .is_generating());
        // consecutive step of the wrong shape
        assert!(!BivariatePoly::from_terms([
            (0, 0, BigInt::one()),
            (0, 1, BigInt::one()),
            (2, 0, BigInt::one()),
        ])
        .is_generating());
        assert!(BivariatePoly::one().is_generating());
        assert_eq!(
            BivariatePoly::one().string_of_generating(&Alphabet::binary()).unwrap().len(),
            0
        );
        assert!(matches!(
            BivariatePoly::zero().string_of_generating(&Alphabet::binary()),
            Err(Error::NotGenerating)
        ));
    }

    #[test]
    fn palindromic_polys_come_from_palindromes() {
        for s in all_binary(8) {
            assert_eq!(
                BivariatePoly::generating(&s).unwrap().is_palindromic(),
                s.is_palindrome(),
                "{s}"
            );
        }
    }

    #[test]
    fn diagonal_of_generating_is_all_ones() {
        for s in ["0100", "111", "0", "01001101"] {
            let p = gen(s);
            let diag = p.eval_diag();
            assert_eq!(diag.degree(), Some(s.len()));
            assert!(diag.coeffs().iter().all(|c| c.is_one()), "{s}");
        }
    }

    #[test]
    fn interleave_composition_on_the_polynomial_side() {
        // "01" . "01" = "01001101"; the outer string has one zero, one one
        let p = BivariatePoly::compose_interleave(&gen("01"), 1, 1, &gen("01"));
        assert_eq!(p, gen("01001101"));
        // "01" . "10" = "01101001"
        let q = BivariatePoly::compose_interleave(&gen("01"), 1, 1, &gen("10"));
        assert_eq!(q, gen("01101001"));
        // interleaving with the empty string is the identity on both sides
        let empty = gen("");
        assert_eq!(BivariatePoly::compose_interleave(&gen("0110"), 2, 2, &empty), gen("0110"));
        assert_eq!(BivariatePoly::compose_interleave(&empty, 0, 0, &gen("0110")), gen("0110"));
    }

    #[test]
    fn display_parse_round_trip() {
        let samples = [
            gen("0100"),
            gen(""),
            BivariatePoly::zero(),
            BivariatePoly::from_terms([
                (0, 1, BigInt::from(3)),
                (1, 0, BigInt::from(-2)),
                (1, 1, BigInt::one()),
            ]),
            BivariatePoly::from_terms([(0, 0, BigInt::from(-7)), (5, 2, BigInt::from(11))]),
        ];
        for p in samples {
            let text = p.to_string();
            let back: BivariatePoly = text.parse().unwrap();
            assert_eq!(back, p, "round trip of {text}");
        }
        assert!("".parse::<BivariatePoly>().is_err());
        assert!("x^".parse::<BivariatePoly>().is_err());
        assert!("1 +".parse::<BivariatePoly>().is_err());
        assert_eq!("x*y".parse::<BivariatePoly>().unwrap().coeff(1, 1), BigInt::one());
    }
}
