//! Alphabets and the strings built over them.
//!
//! An [`Alphabet`] fixes an ordered list of distinct symbols; that order is
//! total and defines every lexicographic comparison made downstream. A
//! [`Str`] stores symbol indices into its alphabet, so comparisons respect
//! the alphabet order rather than raw character codes.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Ordered list of distinct visible symbols. Cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    symbols: Arc<Vec<char>>,
}

impl Alphabet {
    /// Builds an alphabet from symbols in the given order.
    ///
    /// Symbols must be distinct, visible (no whitespace or control
    /// characters), and at most 255 in number.
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("no symbols".into()));
        }
        if symbols.len() > 255 {
            return Err(Error::InvalidAlphabet(format!(
                "{} symbols exceeds the limit of 255",
                symbols.len()
            )));
        }
        for (i, &c) in symbols.iter().enumerate() {
            if c.is_whitespace() || c.is_control() {
                return Err(Error::InvalidAlphabet(format!("symbol {c:?} is not visible")));
            }
            if symbols[..i].contains(&c) {
                return Err(Error::InvalidAlphabet(format!("symbol {c:?} repeats")));
            }
        }
        Ok(Alphabet { symbols: Arc::new(symbols) })
    }

    /// The alphabet `01`.
    pub fn binary() -> Self {
        Alphabet { symbols: Arc::new(vec!['0', '1']) }
    }

    /// Alphabet whose order is the order of characters in `text`.
    pub fn from_text(text: &str) -> Result<Self> {
        Alphabet::new(text.chars())
    }

    /// Smallest alphabet covering `text`, symbols in sorted order.
    pub fn inferred(text: &str) -> Result<Self> {
        let mut chars: Vec<char> = text.chars().collect();
        chars.sort_unstable();
        chars.dedup();
        Alphabet::new(chars)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn index_of(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as u8)
    }

    /// Symbol at `index`. Panics if out of range.
    pub fn symbol(&self, index: u8) -> char {
        self.symbols[index as usize]
    }

    pub fn is_binary(&self) -> bool {
        self.symbols.len() == 2
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in self.symbols.iter() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A string over a fixed alphabet, stored as symbol indices.
///
/// Ordering compares the alphabet first and then the index sequences, so
/// strings over one alphabet sort lexicographically by alphabet order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Str {
    alphabet: Alphabet,
    symbols: Vec<u8>,
}

impl Str {
    /// Parses `text` over the given alphabet.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut symbols = Vec::with_capacity(text.len());
        for c in text.chars() {
            match alphabet.index_of(c) {
                Some(i) => symbols.push(i),
                None => return Err(Error::InvalidSymbol(c)),
            }
        }
        Ok(Str { alphabet: alphabet.clone(), symbols })
    }

    /// Parses `text` over the alphabet inferred from its own characters.
    pub fn parse_inferred(text: &str) -> Result<Self> {
        let alphabet = Alphabet::inferred(text)?;
        Str::parse(text, &alphabet)
    }

    /// Builds a string from raw symbol indices. Panics on an out-of-range index.
    pub fn from_indices(indices: Vec<u8>, alphabet: &Alphabet) -> Self {
        let k = alphabet.len() as u8;
        assert!(indices.iter().all(|&i| i < k), "symbol index out of range");
        Str { alphabet: alphabet.clone(), symbols: indices }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn indices(&self) -> &[u8] {
        &self.symbols
    }

    pub fn reversed(&self) -> Str {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Str { alphabet: self.alphabet.clone(), symbols }
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.symbols.len();
        (0..n / 2).all(|i| self.symbols[i] == self.symbols[n - 1 - i])
    }

    /// Lexicographically smaller of the string and its reversal.
    pub fn canonical_orientation(&self) -> Str {
        let r = self.reversed();
        if r.symbols < self.symbols {
            r
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &i in &self.symbols {
            write!(f, "{}", self.alphabet.symbol(i))?;
        }
        Ok(())
    }
}
