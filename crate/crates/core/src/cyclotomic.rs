//! Exact vanishing tests for sums of `n`-th roots of unity.
//!
//! A character sum `sum_a zeta^{e(a)}` with `zeta = exp(2 pi i / n)` is stored as
//! the exponent-count polynomial `P(x) = sum_j counts[j] x^j` (degree `< n`).
//! Since `Phi_n` is the minimal polynomial of `zeta`, the sum vanishes exactly
//! when `Phi_n` divides `P` over the integers.

use crate::error::{Error, Result};
use crate::group::{is_prime, Element};
use crate::subset::SubsetBits;

/// Which pairing a character sum is taken against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Form {
    #[default]
    Symplectic,
    Euclidean,
}

impl Form {
    pub fn as_str(self) -> &'static str {
        match self {
            Form::Symplectic => "symplectic",
            Form::Euclidean => "euclidean",
        }
    }
}

impl std::str::FromStr for Form {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "symplectic" | "sym" => Ok(Form::Symplectic),
            "euclidean" | "euc" => Ok(Form::Euclidean),
            other => Err(format!("unknown form `{other}`")),
        }
    }
}

/// Dense integer polynomial, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPoly {
    coefficients: Vec<i64>,
}

impl CyclotomicPoly {
    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }
}

/// `Phi_{p^k}(x) = sum_{i<p} x^{i p^{k-1}}`.
pub fn phi_prime_power(p: u32, k: u32) -> Result<CyclotomicPoly> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    let step = (p as usize).pow(k - 1);
    let mut coefficients = vec![0; step * (p as usize - 1) + 1];
    for i in 0..p as usize {
        coefficients[i * step] = 1;
    }
    Ok(CyclotomicPoly { coefficients })
}

/// Exponent multiplicities of a character sum; `counts[j]` is the number of
/// terms equal to `zeta^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector {
    counts: Vec<i64>,
}

impl ExponentVector {
    pub fn new(counts: Vec<i64>) -> Self {
        ExponentVector { counts }
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.counts.iter().sum()
    }
}

/// Counts `<a, xi>` (or `a . xi`) mod `n` over `a in set`.
pub fn exponent_vector(set: &SubsetBits, xi: Element, form: Form) -> ExponentVector {
    let ctx = set.ctx();
    let mut counts = vec![0i64; ctx.n() as usize];
    for a in set.iter() {
        let e = match form {
            Form::Symplectic => ctx.symplectic_form(a, xi),
            Form::Euclidean => ctx.dot(a, xi),
        };
        counts[e as usize] += 1;
    }
    ExponentVector { counts }
}

/// Remainder of `poly` modulo the monic `divisor`, by synthetic division.
fn remainder(poly: &[i64], divisor: &[i64]) -> Vec<i64> {
    let mut rem = poly.to_vec();
    let d = divisor.len() - 1;
    debug_assert_eq!(divisor[d], 1);
    for top in (d..rem.len()).rev() {
        let q = rem[top];
        if q != 0 {
            for (i, &c) in divisor.iter().enumerate() {
                rem[top - d + i] -= q * c;
            }
        }
    }
    rem.truncate(d);
    rem
}

/// True iff `sum_j counts[j] zeta_n^j = 0`, with `n = counts.len()` a prime power.
pub fn is_vanishing_sum(v: &ExponentVector) -> bool {
    let n = v.counts.len() as u32;
    if n <= 1 {
        return v.counts.iter().all(|&c| c == 0);
    }
    let (p, k) = prime_power_parts(n).expect("exponent vector length must be a prime power");
    let phi = phi_prime_power(p, k).expect("p is prime");
    remainder(&v.counts, &phi.coefficients).iter().all(|&c| c == 0)
}

fn prime_power_parts(n: u32) -> Option<(u32, u32)> {
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut k = 0;
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}
