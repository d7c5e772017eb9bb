//! Prime fields `F_p` with `p < 2^31`.
//!
//! Elements carry their field so that mixing elements of different fields is
//! caught. The `std::ops` impls panic on a mismatch; the `try_*` methods
//! return [`Error::FieldMismatch`] instead.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

const MODULUS_BOUND: u64 = 1 << 31;

/// A prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    modulus: u32,
}

impl Field {
    /// Builds `F_p`, rejecting composite moduli and `p >= 2^31`.
    pub fn new(modulus: u64) -> Result<Self> {
        if !(2..MODULUS_BOUND).contains(&modulus) || !is_prime(modulus) {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(Field {
            modulus: modulus as u32,
        })
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    /// Number of elements, `p`.
    pub fn size(self) -> u64 {
        self.modulus as u64
    }

    /// The element `v mod p`.
    pub fn elem(self, v: u64) -> Felt {
        Felt {
            value: (v % self.modulus as u64) as u32,
            field: self,
        }
    }

    /// The element `v mod p` for possibly negative `v`.
    pub fn elem_signed(self, v: i64) -> Felt {
        Felt {
            value: v.rem_euclid(self.modulus as i64) as u32,
            field: self,
        }
    }

    pub fn zero(self) -> Felt {
        Felt {
            value: 0,
            field: self,
        }
    }

    pub fn one(self) -> Felt {
        Felt {
            value: 1,
            field: self,
        }
    }

    /// All elements `0, 1, ..., p - 1` in order.
    pub fn elements(self) -> impl Iterator<Item = Felt> {
        (0..self.modulus).map(move |value| Felt { value, field: self })
    }

    fn check(self, other: Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.modulus,
                right: other.modulus,
            })
        }
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(self) -> Felt {
        let p = self.size();
        if p == 2 {
            return self.one();
        }
        let factors = prime_factors(p - 1);
        (2..p)
            .map(|g| self.elem(g))
            .find(|g| factors.iter().all(|&f| g.pow((p - 1) / f).value != 1))
            .expect("every prime field has a primitive root")
    }

    /// The smallest element of multiplicative order exactly `d`.
    ///
    /// Elements of order `d` are `g^{j (p-1)/d}` with `gcd(j, d) = 1` for a
    /// primitive root `g`; all of them are generated and the smallest value
    /// is returned.
    pub fn find_order_element(self, d: u64) -> Result<Felt> {
        let group = self.size() - 1;
        if d == 0 || !group.is_multiple_of(d) {
            return Err(Error::invalid(format!(
                "order {d} does not divide p - 1 = {group}"
            )));
        }
        let base = self.primitive_root().pow(group / d);
        let mut best: Option<Felt> = None;
        let mut acc = self.one();
        for j in 0..d {
            if gcd(j, d) == 1 && best.is_none_or(|b| acc.value < b.value) {
                best = Some(acc);
            }
            acc *= base;
        }
        Ok(best.expect("d >= 1 always has a unit exponent"))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.modulus)
    }
}

/// An element of a prime field, always stored in canonical form `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Felt {
    value: u32,
    field: Field,
}

impl Felt {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> Field {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }

    pub fn try_add(self, rhs: Felt) -> Result<Felt> {
        self.field.check(rhs.field)?;
        Ok(self.add_unchecked(rhs))
    }

    pub fn try_sub(self, rhs: Felt) -> Result<Felt> {
        self.field.check(rhs.field)?;
        Ok(self.add_unchecked(-rhs))
    }

    pub fn try_mul(self, rhs: Felt) -> Result<Felt> {
        self.field.check(rhs.field)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn try_div(self, rhs: Felt) -> Result<Felt> {
        self.field.check(rhs.field)?;
        Ok(self.mul_unchecked(rhs.inv()?))
    }

    /// Multiplicative inverse via Fermat, `a^{p-2}`.
    pub fn inv(self) -> Result<Felt> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.size() - 2))
    }

    /// Square-and-multiply; the exponent is an integer, not a field element.
    pub fn pow(self, mut exp: u64) -> Felt {
        let p = self.field.modulus as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Felt {
            value: acc as u32,
            field: self.field,
        }
    }

    /// Multiplicative order: the smallest `d >= 1` with `a^d = 1`.
    pub fn order(self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::invalid("zero has no multiplicative order"));
        }
        let mut d = self.field.size() - 1;
        for f in prime_factors(d) {
            while d.is_multiple_of(f) && self.pow(d / f).is_one() {
                d /= f;
            }
        }
        Ok(d)
    }

    fn add_unchecked(self, rhs: Felt) -> Felt {
        let s = self.value as u64 + rhs.value as u64;
        let p = self.field.modulus as u64;
        Felt {
            value: if s >= p { (s - p) as u32 } else { s as u32 },
            field: self.field,
        }
    }

    fn mul_unchecked(self, rhs: Felt) -> Felt {
        Felt {
            value: (self.value as u64 * rhs.value as u64 % self.field.modulus as u64) as u32,
            field: self.field,
        }
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[track_caller]
fn assert_same(a: Field, b: Field) {
    assert!(a == b, "field mismatch: {a} vs {b}");
}

impl Add for Felt {
    type Output = Felt;
    #[track_caller]
    fn add(self, rhs: Felt) -> Felt {
        assert_same(self.field, rhs.field);
        self.add_unchecked(rhs)
    }
}

impl Sub for Felt {
    type Output = Felt;
    #[track_caller]
    fn sub(self, rhs: Felt) -> Felt {
        assert_same(self.field, rhs.field);
        self.add_unchecked(-rhs)
    }
}

impl Mul for Felt {
    type Output = Felt;
    #[track_caller]
    fn mul(self, rhs: Felt) -> Felt {
        assert_same(self.field, rhs.field);
        self.mul_unchecked(rhs)
    }
}

impl Neg for Felt {
    type Output = Felt;
    fn neg(self) -> Felt {
        Felt {
            value: if self.value == 0 {
                0
            } else {
                self.field.modulus - self.value
            },
            field: self.field,
        }
    }
}

impl AddAssign for Felt {
    #[track_caller]
    fn add_assign(&mut self, rhs: Felt) {
        *self = *self + rhs;
    }
}

impl SubAssign for Felt {
    #[track_caller]
    fn sub_assign(&mut self, rhs: Felt) {
        *self = *self - rhs;
    }
}

impl MulAssign for Felt {
    #[track_caller]
    fn mul_assign(&mut self, rhs: Felt) {
        *self = *self * rhs;
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    fn brute_order(a: Felt) -> u64 {
        let mut x = a;
        let mut d = 1;
        while !x.is_one() {
            x *= a;
            d += 1;
        }
        d
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(Field::new(0).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(15).is_err());
        assert!(Field::new(1 << 31).is_err());
        assert!(Field::new(2_147_483_647).is_ok());
    }

    #[test]
    fn small_arithmetic() {
        let f7 = f(7);
        assert_eq!(f7.elem(3) * f7.elem(5), f7.elem(15 % 7));
        assert_eq!(f7.elem(3).pow(6), f7.one());
        assert_eq!(f7.one().try_div(f7.zero()), Err(Error::DivisionByZero));
        assert_eq!(f7.elem(2) - f7.elem(5), f7.elem(4));
        assert_eq!(f7.elem_signed(-1), f7.elem(6));
    }

    #[test]
    fn mismatched_fields_are_errors() {
        let a = f(7).elem(3);
        let b = f(13).elem(3);
        assert_eq!(
            a.try_add(b),
            Err(Error::FieldMismatch { left: 7, right: 13 })
        );
        assert!(a.try_mul(b).is_err());
        assert!(a.try_div(b).is_err());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn operator_mismatch_panics() {
        let _ = f(7).elem(1) + f(11).elem(1);
    }

    #[test]
    fn element_orders() {
        assert_eq!(f(7).one().order().unwrap(), 1);
        assert_eq!(f(7).elem(2).order().unwrap(), 3);
        assert_eq!(f(31).elem(2).order().unwrap(), 5);
        assert!(f(7).zero().order().is_err());
    }

    #[test]
    fn orders_divide_group_order_exhaustively() {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 31, 61] {
            let field = f(p);
            for a in field.elements().skip(1) {
                let d = a.order().unwrap();
                assert_eq!(d, brute_order(a), "p={p} a={a}");
                assert_eq!((p - 1) % d, 0);
            }
        }
    }

    #[test]
    fn inverses_and_exponent_law_exhaustively() {
        for p in [7u64, 13, 61] {
            let field = f(p);
            for a in field.elements() {
                if !a.is_zero() {
                    assert!((a * a.inv().unwrap()).is_one());
                }
                for e1 in 0..5 {
                    for e2 in 0..5 {
                        assert_eq!(a.pow(e1 + e2), a.pow(e1) * a.pow(e2));
                    }
                }
            }
        }
    }

    #[test]
    fn order_element_search() {
        assert_eq!(f(61).find_order_element(5).unwrap().value(), 9);
        let c = f(61).find_order_element(12).unwrap();
        assert!(c.pow(12).is_one() && !c.pow(6).is_one() && !c.pow(4).is_one());
        assert_eq!(f(7).find_order_element(1).unwrap(), f(7).one());
        assert!(f(7).find_order_element(4).is_err());
        assert!(f(7).find_order_element(0).is_err());
    }

    #[test]
    fn order_element_is_smallest() {
        for p in [7u64, 13, 31, 61] {
            let field = f(p);
            for d in 1..p {
                if (p - 1) % d != 0 {
                    continue;
                }
                let expected = field
                    .elements()
                    .skip(1)
                    .find(|a| brute_order(*a) == d)
                    .unwrap();
                assert_eq!(field.find_order_element(d).unwrap(), expected);
            }
        }
    }
}
