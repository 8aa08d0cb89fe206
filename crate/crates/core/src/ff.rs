//! Exact arithmetic in the prime field F_q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Maximum supported modulus (exclusive). Keeps all products within u64.
pub const MAX_Q: u64 = 1 << 20;

/// A prime field F_q, identified by its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    q: u32,
}

impl FieldSpec {
    /// Builds the field F_q. Fails unless `q` is a prime in `[2, 2^20)`.
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 || q >= MAX_Q || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(FieldSpec { q: q as u32 })
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    /// Embeds an integer, reducing mod q.
    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement {
            value: (value % self.q()) as u32,
            field: *self,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// All field elements, in ascending order of representative.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q()).map(move |v| self.elem(v))
    }
}

/// An element of F_q, stored as its canonical representative in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: FieldSpec,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value as u64
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let q = self.field.q();
        let mut base = self.value();
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        self.field.elem(acc)
    }

    /// Multiplicative inverse, by Fermat's little theorem.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.q() - 2))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn same_field(a: &FieldElement, b: &FieldElement) {
    assert_eq!(a.field, b.field, "field elements from different fields");
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        same_field(&self, &rhs);
        self.field.elem(self.value() + rhs.value())
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        same_field(&self, &rhs);
        self.field.elem(self.value() + self.field.q() - rhs.value())
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        same_field(&self, &rhs);
        self.field.elem(self.value() * rhs.value())
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.elem(self.field.q() - self.value())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_new_accepts_primes() {
        assert_eq!(FieldSpec::new(13).unwrap().q(), 13);
        assert_eq!(FieldSpec::new(2).unwrap().q(), 2);
    }

    #[test]
    fn field_new_rejects_composites_and_out_of_range() {
        assert_eq!(FieldSpec::new(12), Err(Error::NotPrime(12)));
        assert_eq!(FieldSpec::new(1), Err(Error::NotPrime(1)));
        assert_eq!(FieldSpec::new(0), Err(Error::NotPrime(0)));
        assert!(FieldSpec::new(MAX_Q + 7).is_err());
    }

    #[test]
    fn inverse_in_f13() {
        let f = FieldSpec::new(13).unwrap();
        assert_eq!(f.one().inv().unwrap(), f.one());
        // 3 * 9 = 27 = 1 mod 13
        assert_eq!(f.elem(3).inv().unwrap(), f.elem(9));
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_axioms_exhaustive_small_primes() {
        for q in [2u64, 3, 5, 7, 11, 13] {
            let f = FieldSpec::new(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!(a - b, -(b - a));
                    for c in f.elements() {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), f.one());
                }
            }
        }
    }
}
