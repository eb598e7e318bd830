//! Strings studied through the compositions of their substrings.
//!
//! A composition records how many times each alphabet symbol occurs in a
//! substring, ignoring order. Collecting the compositions of all n(n+1)/2
//! substrings of a length-n string yields a multiset that determines the
//! string only up to a limited ambiguity; the modules here build that
//! multiset, decide when two strings share it, enumerate the equivalence
//! classes, bound the class sizes, construct large classes, and reconstruct
//! the generating strings from the multiset alone.
//!
//! Module map:
//! - [`strings`]: alphabets and symbol strings.
//! - [`composition`]: compositions, composition multisets, and their text format.
//! - [`poly`]: bivariate generating polynomials of binary strings.
//! - [`cyclotomic`]: univariate polynomials, cyclotomic factors, class-size bounds.
//! - [`interleave`]: the interleaving product and its factorization structure.
//! - [`reconstruct`]: the backtracking reconstruction engine.
//! - [`oracle`]: exhaustive enumeration, sampled statistics, collision probabilities.

pub mod composition;
pub mod cyclotomic;
mod error;
pub mod interleave;
pub mod oracle;
pub mod parallel;
pub mod poly;
pub mod reconstruct;
pub mod strings;

pub use composition::{Composition, CompositionMultiset, MirrorPairs};
pub use error::{Error, Result};
pub use strings::{Alphabet, Str};
