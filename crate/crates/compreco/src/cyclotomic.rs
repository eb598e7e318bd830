//! Univariate integer polynomials, cyclotomic factors, and the bounds they
//! give on the largest composition-equivalence class at each length.
//!
//! The divisibility structure of x^(n+1) - 1 controls how many strings of
//! length n can share one composition multiset: writing n+1 =
//! 2^e0 p1^e1 ... pk^ek, the largest class size E_n satisfies
//! 2^(floor(e0/2) + e1 + ... + ek) <= E_n <= min(2^(d(n+1)-1), (n+1)^1.23),
//! with equality cases known when n+1 is 2^k, p^k, or 2 p^k.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use num::{BigInt, BigUint, One, Signed, Zero};

/// Dense integer polynomial in one variable; `coeffs[i]` multiplies x^i.
/// Trailing zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: Vec<BigInt>,
}

impl UnivariatePoly {
    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UnivariatePoly { coeffs: vec![BigInt::one()] }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// x^m - 1.
    pub fn x_pow_minus_one(m: usize) -> Self {
        assert!(m >= 1);
        let mut coeffs = vec![BigInt::zero(); m + 1];
        coeffs[0] = -BigInt::one();
        coeffs[m] = BigInt::one();
        UnivariatePoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn mul(&self, rhs: &UnivariatePoly) -> UnivariatePoly {
        if self.is_zero() || rhs.is_zero() {
            return UnivariatePoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UnivariatePoly::from_coeffs(coeffs)
    }

    /// Quotient when `rhs` divides `self` exactly over the integers.
    pub fn exact_div(&self, rhs: &UnivariatePoly) -> Option<UnivariatePoly> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(UnivariatePoly::zero());
        }
        let dr = rhs.degree().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let ds = self.degree().expect("nonzero");
        if ds < dr {
            return None;
        }
        let lead = &rhs.coeffs[dr];
        let mut quot = vec![BigInt::zero(); ds - dr + 1];
        for qi in (0..quot.len()).rev() {
            let top = rem[qi + dr].clone();
            if top.is_zero() {
                continue;
            }
            if !(&top % lead).is_zero() {
                return None;
            }
            let q = &top / lead;
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[qi + j] -= &q * b;
            }
            quot[qi] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(UnivariatePoly::from_coeffs(quot))
    }

    /// True when the coefficient vector reads the same in both directions.
    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// The d-th cyclotomic polynomial, by exact division:
/// phi_d = (x^d - 1) / prod of phi_d' over proper divisors d' of d.
///
/// Results are memoized behind a single mutex, so concurrent callers see
/// one writer and consistent entries.
pub fn cyclotomic(d: u64) -> UnivariatePoly {
    assert!(d >= 1, "cyclotomic index must be >= 1");
    static TABLE: Mutex<BTreeMap<u64, UnivariatePoly>> = Mutex::new(BTreeMap::new());
    let mut table = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(hit) = table.get(&d) {
        return hit.clone();
    }
    for dd in divisors(d) {
        if table.contains_key(&dd) {
            continue;
        }
        let mut denom = UnivariatePoly::one();
        for prev in divisors(dd) {
            if prev < dd {
                denom = denom.mul(&table[&prev]);
            }
        }
        let phi = UnivariatePoly::x_pow_minus_one(dd as usize)
            .exact_div(&denom)
            .expect("cyclotomic division is exact");
        table.insert(dd, phi);
    }
    table[&d].clone()
}

/// Prime factorization of `m` as (prime, exponent) pairs, ascending.
pub fn prime_signature(mut m: u64) -> Vec<(u64, u32)> {
    let mut sig = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            sig.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        sig.push((m, 1));
    }
    sig
}

/// All divisors of `m`, ascending.
pub fn divisors(m: u64) -> Vec<u64> {
    let sig = prime_signature(m);
    let mut divs = vec![1u64];
    for (p, e) in sig {
        let prev = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(prev.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

/// Bounds on the largest class size E_n for strings of length n.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    /// 2^(floor(e0/2) + e1 + ... + ek) where n+1 = 2^e0 p1^e1 ... pk^ek.
    pub lower: BigUint,
    /// 2^(d(n+1) - 1) with d the divisor count.
    pub upper_pow2: BigUint,
    /// (n+1)^1.23, the polynomial upper bound.
    pub upper_poly: f64,
    pub divisor_count: u64,
    pub prime_signature: Vec<(u64, u32)>,
    /// Exact E_n when n+1 is 1, 2^k, p^k, or 2 p^k (p an odd prime).
    pub exact: Option<BigUint>,
}

/// Computes the class-size bound report for length `n`.
pub fn en_bounds(n: u64) -> BoundReport {
    let m = n + 1;
    let sig = prime_signature(m);
    let e0 = sig.iter().find(|&&(p, _)| p == 2).map_or(0, |&(_, e)| e);
    let odd_sum: u32 = sig.iter().filter(|&&(p, _)| p != 2).map(|&(_, e)| e).sum();
    let divisor_count: u64 = sig.iter().map(|&(_, e)| e as u64 + 1).product();
    let lower = BigUint::one() << (e0 / 2 + odd_sum) as usize;
    let upper_pow2 = BigUint::one() << (divisor_count - 1) as usize;
    let upper_poly = (m as f64).powf(1.23);
    let exact = match sig.as_slice() {
        [] => Some(BigUint::one()),
        [(2, k)] => Some(BigUint::one() << (k / 2) as usize),
        [(_, k)] => Some(BigUint::one() << *k as usize),
        [(2, 1), (_, k)] => Some(BigUint::one() << *k as usize),
        _ => None,
    };
    BoundReport { n, lower, upper_pow2, upper_poly, divisor_count, prime_signature: sig, exact }
}
