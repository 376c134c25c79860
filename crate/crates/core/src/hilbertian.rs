//! Irreducible polynomials over prime fields with prescribed low-order
//! coefficients.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{factorize, is_prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertianError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient {0} is not reduced modulo the prime")]
    InvalidCoefficient(u64),
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("constant polynomials are neither irreducible nor reducible here")]
    ConstantPolynomial,
    #[error("the prefix must have a nonzero constant term")]
    ZeroConstantTerm,
    #[error("max degree {max_degree} must exceed the prefix degree {prefix_degree}")]
    DegreeTooSmall { max_degree: usize, prefix_degree: usize },
    #[error("no irreducible polynomial of degree <= {max_degree} extends the prefix")]
    NotFound { max_degree: usize },
}

/// A polynomial over `F_p`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePolynomial {
    p: u64,
    coeffs: Vec<u64>,
}

impl PrimePolynomial {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self, HilbertianError> {
        if !is_prime(p) {
            return Err(HilbertianError::NotPrime(p));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= p) {
            return Err(HilbertianError::InvalidCoefficient(c));
        }
        match coeffs.last() {
            None | Some(0) => Err(HilbertianError::ZeroLeadingCoefficient),
            _ => Ok(Self { p, coeffs }),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn has_prefix(&self, prefix: &[u64]) -> bool {
        self.coeffs.len() >= prefix.len() && self.coeffs[..prefix.len()] == *prefix
    }
}

impl fmt::Display for PrimePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "X".to_owned(),
                _ => format!("X^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        write!(f, "{} over F_{}", terms.join(" + "), self.p)
    }
}

// Dense polynomial arithmetic over F_p on coefficient vectors without
// trailing zeros; the zero polynomial is the empty vector.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let q = r[r.len() - 1] * lead_inv % p;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - q * bc % p) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, m, p)
}

fn gcd_poly(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `X^(p^k) mod m`.
fn frobenius_power(k: usize, m: &[u64], p: u64) -> Vec<u64> {
    let mut x = rem(&[0, 1], m, p);
    for _ in 0..k {
        // raise to the p-th power by square-and-multiply
        let mut acc = vec![1u64];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        x = acc;
    }
    x
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

/// Irreducibility by trial division with every monic polynomial of degree
/// `1 ..= deg/2`.
pub fn is_irreducible(f: &PrimePolynomial) -> Result<bool, HilbertianError> {
    let n = f.degree();
    if n == 0 {
        return Err(HilbertianError::ConstantPolynomial);
    }
    let p = f.p;
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        let mut g = vec![0u64; d + 1];
        g[d] = 1;
        for code in 0..count {
            let mut x = code;
            for slot in g.iter_mut().take(d) {
                *slot = x % p;
                x /= p;
            }
            if rem(&f.coeffs, &g, p).is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Rabin's test: `f` of degree `n` is irreducible iff `X^(p^n) ≡ X` modulo
/// `f` and `gcd(X^(p^(n/q)) − X, f) = 1` for every prime `q | n`.
pub fn is_irreducible_rabin(f: &PrimePolynomial) -> Result<bool, HilbertianError> {
    let n = f.degree();
    if n == 0 {
        return Err(HilbertianError::ConstantPolynomial);
    }
    let p = f.p;
    let m = &f.coeffs;
    let x = rem(&[0, 1], m, p);
    for (q, _) in factorize(n as u64) {
        let h = frobenius_power(n / q as usize, m, p);
        if gcd_poly(&sub(&h, &x, p), m, p).len() != 1 {
            return Ok(false);
        }
    }
    Ok(sub(&frobenius_power(n, m, p), &x, p).is_empty())
}

/// Result of a prefix search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub polynomial: PrimePolynomial,
    pub candidates_tried: u64,
}

/// First irreducible polynomial `a₀ + a₁X + … + a_dX^d` with the given
/// `a₀ … a_n`, trying degrees `n+1 ..= max_degree` in turn and, within a
/// degree, the free coefficients `(a_{n+1}, …, a_d)` in lexicographic order
/// with `a_d ≠ 0`.
pub fn find_irreducible_with_prefix(p: u64, prefix: &[u64], max_degree: usize) -> Result<Witness, HilbertianError> {
    if !is_prime(p) {
        return Err(HilbertianError::NotPrime(p));
    }
    if let Some(&c) = prefix.iter().find(|&&c| c >= p) {
        return Err(HilbertianError::InvalidCoefficient(c));
    }
    if prefix.first().copied().unwrap_or(0) == 0 {
        return Err(HilbertianError::ZeroConstantTerm);
    }
    let n = prefix.len() - 1;
    if max_degree <= n {
        return Err(HilbertianError::DegreeTooSmall { max_degree, prefix_degree: n });
    }
    let mut tried = 0u64;
    for d in n + 1..=max_degree {
        let free = d - n;
        let mut tail = vec![0u64; free];
        tail[free - 1] = 1;
        loop {
            let mut coeffs = prefix.to_vec();
            coeffs.extend_from_slice(&tail);
            let f = PrimePolynomial { p, coeffs };
            tried += 1;
            if is_irreducible(&f)? {
                return Ok(Witness { polynomial: f, candidates_tried: tried });
            }
            if !next_tail(&mut tail, p) {
                break;
            }
        }
    }
    Err(HilbertianError::NotFound { max_degree })
}

/// Lexicographic successor with the first entry most significant and the
/// last entry kept nonzero.
fn next_tail(tail: &mut [u64], p: u64) -> bool {
    let last = tail.len() - 1;
    for i in (0..tail.len()).rev() {
        let lo = if i == last { 1 } else { 0 };
        if tail[i] + 1 < p {
            tail[i] += 1;
            return true;
        }
        tail[i] = lo;
    }
    false
}
