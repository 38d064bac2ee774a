//! Finite fields GF(p^k) in a polynomial basis.
//!
//! Elements are integer codes `0..q`: the code of `c_0 + c_1 x + ... + c_{k-1} x^{k-1}`
//! is `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. All arithmetic goes through full
//! `q x q` tables built once at construction.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element code, `0 <= code < q <= 256`.
pub type Elem = u8;

/// Default upper bound on the field order accepted by [`Field::new`].
pub const DEFAULT_MAX_ORDER: u64 = 16;

/// Hard upper bound: element codes must fit in a byte.
pub const TABLE_LIMIT: u64 = 256;

/// Built-in moduli (Conway polynomials for the proper extensions; `x` for prime fields).
const BUILTIN: &[(u32, u32, &[u32])] = &[
    (2, 1, &[0, 1]),
    (3, 1, &[0, 1]),
    (2, 2, &[1, 1, 1]),
    (5, 1, &[0, 1]),
    (7, 1, &[0, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (11, 1, &[0, 1]),
    (13, 1, &[0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

struct Tables {
    p: u32,
    k: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field with precomputed arithmetic tables. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.0.p, self.0.k, self.0.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus
    }
}

impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Remainder of `a` modulo monic `m` over GF(p); little-endian coefficient vectors.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap() % p;
        if lead != 0 {
            let off = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                r[off + i] = (r[off + i] + (p - lead) * c) % p;
            }
        }
    }
    r
}

/// All monic polynomials of exact degree `d` over GF(p).
fn monic_polys(d: usize, p: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(d as u32);
    (0..count).map(move |mut code| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push((code % p as u64) as u32);
            code /= p as u64;
        }
        v.push(1);
        v
    })
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let k = m.len() - 1;
    (1..=k / 2).all(|d| monic_polys(d, p).all(|f| poly_rem(m, &f, p).iter().any(|&c| c != 0)))
}

/// Splits `q` as `p^k` for prime `p`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 || q > u32::MAX as u64 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))? as u32;
    let (mut rest, mut k) = (q, 0);
    while rest % p as u64 == 0 {
        rest /= p as u64;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl Field {
    /// Builds GF(p^k) with order bound [`DEFAULT_MAX_ORDER`].
    pub fn new(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Self> {
        Self::with_max_order(p, k, modulus, DEFAULT_MAX_ORDER)
    }

    /// Builds GF(q) from the built-in modulus table.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::UnsupportedOrder(q))?;
        Self::new(p, k, None)
    }

    pub fn with_max_order(p: u32, k: u32, modulus: Option<&[u32]>, max_order: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if k == 0 {
            return Err(Error::ReducibleModulus(k));
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > max_order.min(TABLE_LIMIT) {
            return Err(Error::UnsupportedOrder(q));
        }
        let modulus: Vec<u32> = match modulus {
            Some(m) => m.to_vec(),
            None => BUILTIN
                .iter()
                .find(|(bp, bk, _)| *bp == p && *bk == k)
                .map(|(_, _, m)| m.to_vec())
                .ok_or(Error::UnsupportedOrder(q))?,
        };
        if modulus.len() != k as usize + 1
            || modulus[k as usize] != 1
            || modulus.iter().any(|&c| c >= p)
            || !is_irreducible(&modulus, p)
        {
            return Err(Error::ReducibleModulus(k));
        }
        Ok(Field(Arc::new(Self::build_tables(p, k, modulus))))
    }

    fn build_tables(p: u32, k: u32, modulus: Vec<u32>) -> Tables {
        let q = (p as usize).pow(k);
        let decode = |mut c: usize| -> Vec<u32> {
            (0..k)
                .map(|_| {
                    let d = (c % p as usize) as u32;
                    c /= p as usize;
                    d
                })
                .collect()
        };
        let encode =
            |v: &[u32]| -> Elem { v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize) as Elem };
        let polys: Vec<Vec<u32>> = (0..q).map(decode).collect();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let sum: Vec<u32> = polys[a].iter().zip(&polys[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum);
                let mut prod = vec![0u32; 2 * k as usize - 1];
                for (i, x) in polys[a].iter().enumerate() {
                    for (j, y) in polys[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut red = poly_rem(&prod, &modulus, p);
                red.resize(k as usize, 0);
                mul[a * q + b] = encode(&red);
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem).collect();
        let inv = (0..q).map(|a| (1..q).find(|&b| mul[a * q + b] == 1).unwrap_or(0) as Elem).collect();
        Tables { p, k, q, modulus, add, mul, neg, inv }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.0.k
    }

    /// The field order q.
    #[inline]
    pub fn q(&self) -> usize {
        self.0.q
    }

    /// Modulus coefficients, little-endian, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn is_valid(&self, a: u32) -> bool {
        (a as usize) < self.0.q
    }

    pub fn check(&self, a: u32) -> Result<Elem> {
        if self.is_valid(a) {
            Ok(a as Elem)
        } else {
            Err(Error::InvalidElement(a))
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[a as usize * self.0.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[a as usize * self.0.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.0.inv[a as usize])
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn arith(&self, a: Elem, b: Elem, op: Op) -> Result<Elem> {
        match op {
            Op::Add => Ok(self.add(a, b)),
            Op::Sub => Ok(self.sub(a, b)),
            Op::Mul => Ok(self.mul(a, b)),
            Op::Div => self.div(a, b),
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// All elements in increasing code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(|c| c as Elem)
    }

    /// Polynomial-basis coefficients of `a`, little-endian.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut c = a as u32;
        (0..self.0.k)
            .map(|_| {
                let d = c % self.0.p;
                c /= self.0.p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.0.k as usize {
            return Err(Error::WidthMismatch { expected: self.0.k as usize, found: coeffs.len() });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(Error::InvalidElement(bad));
        }
        self.check(coeffs.iter().rev().fold(0, |acc, &d| acc * self.0.p + d))
    }

    /// Dot product of two coordinate vectors.
    #[inline]
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook product then reduction, independent of the tables.
    fn reference_mul(f: &Field, a: Elem, b: Elem) -> Elem {
        let p = f.p();
        let (ca, cb) = (f.coeffs(a), f.coeffs(b));
        let mut prod = vec![0u32; ca.len() + cb.len() - 1];
        for (i, x) in ca.iter().enumerate() {
            for (j, y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let mut r = poly_rem(&prod, f.modulus(), p);
        r.resize(f.k() as usize, 0);
        f.from_coeffs(&r).unwrap()
    }

    #[test]
    fn construction() {
        let gf2 = Field::new(2, 1, None).unwrap();
        assert_eq!(gf2.modulus(), &[0, 1]);
        assert_eq!(gf2.q(), 2);
        assert!(Field::new(2, 2, Some(&[1, 1, 1])).is_ok());
        assert_eq!(Field::new(2, 2, Some(&[1, 0, 1])), Err(Error::ReducibleModulus(2)));
        // x^4 + x^2 + 1 = (x^2+x+1)^2 has no roots but is reducible
        assert_eq!(Field::new(2, 4, Some(&[1, 0, 1, 0, 1])), Err(Error::ReducibleModulus(4)));
        assert_eq!(Field::new(4, 1, None), Err(Error::NonPrimeCharacteristic(4)));
        assert_eq!(Field::new(17, 1, None), Err(Error::UnsupportedOrder(17)));
        assert_eq!(Field::new(5, 2, None), Err(Error::UnsupportedOrder(25)));
        assert!(Field::with_max_order(5, 2, Some(&[2, 0, 1]), 256).is_ok());
        assert_eq!(Field::with_max_order(2, 9, None, 1024), Err(Error::UnsupportedOrder(512)));
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            assert_eq!(Field::of_order(q).unwrap().q() as u64, q);
        }
        assert!(Field::of_order(6).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let gf2 = Field::of_order(2).unwrap();
        assert_eq!(gf2.arith(1, 1, Op::Add), Ok(0));
        let gf4 = Field::of_order(4).unwrap();
        assert_eq!(gf4.arith(2, 2, Op::Mul), Ok(3));
        assert_eq!(reference_mul(&gf4, 2, 2), 3);
        assert_eq!(gf4.inv(2), Ok(3));
        let gf5 = Field::of_order(5).unwrap();
        assert_eq!(gf5.arith(2, 1, Op::Div), Ok(2));
        assert_eq!(gf5.inv(2), Ok(3));
        assert_eq!(gf5.arith(2, 0, Op::Div), Err(Error::DivisionByZero));
        assert_eq!(gf5.inv(0), Err(Error::DivisionByZero));
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            assert_eq!(Field::of_order(q).unwrap().inv(1), Ok(1));
        }
    }

    #[test]
    fn element_listing() {
        assert_eq!(Field::of_order(2).unwrap().elements().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(Field::of_order(4).unwrap().elements().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(Field::of_order(9).unwrap().elements().count(), 9);
    }

    #[test]
    fn tables_match_reference_multiplication() {
        for q in [4, 8, 9, 16] {
            let f = Field::of_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), reference_mul(&f, a, b));
                }
            }
        }
    }

    #[test]
    fn axioms_frobenius_and_order() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::of_order(q).unwrap();
            let p = f.p() as u64;
            for a in f.elements() {
                if a != 0 {
                    assert_eq!(f.pow(a, q - 1), 1);
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn coefficient_codes_round_trip() {
        let f = Field::of_order(9).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)), Ok(a));
        }
    }
}
