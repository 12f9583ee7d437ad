//! Exact arithmetic in the prime field Z_p.
//!
//! A [`FieldSpec`] is a validated prime modulus; it exposes arithmetic on
//! raw reduced values (`u64` in `[0, p)`) and constructs typed
//! [`FieldElement`]s for API surfaces where single scalars cross module
//! boundaries. Mixing elements of different moduli is a hard error, never a
//! silent coercion.

use crate::error::{Error, Result};

/// Largest supported modulus. Products of two reduced values then fit in
/// 64-bit intermediates without u128 arithmetic.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// A validated prime modulus defining Z_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
}

impl FieldSpec {
    /// Validates `p` and returns the field spec.
    ///
    /// Fails with [`Error::OutOfRange`] if `p < 2` or `p > 2^31 - 1`, and
    /// with [`Error::NotPrime`] if `p` is composite.
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&p) {
            return Err(Error::OutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Builds an element, reducing `v` modulo p.
    #[inline]
    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.p,
            spec: *self,
        }
    }

    /// Builds an element from an already-reduced value, rejecting `v >= p`.
    pub fn element_checked(&self, v: u64) -> Result<FieldElement> {
        if v >= self.p {
            return Err(Error::CellOutOfRange {
                value: v,
                p: self.p,
            });
        }
        Ok(FieldElement {
            value: v,
            spec: *self,
        })
    }

    /// Rejects use of two different moduli in one operation.
    #[inline]
    pub fn check_same(&self, other: &FieldSpec) -> Result<()> {
        if self.p != other.p {
            return Err(Error::FieldMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    // Raw arithmetic on reduced values. Callers keep the `< p` invariant;
    // debug builds verify it.

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        // a, b < 2^31 so the product fits in u64
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        debug_assert!(base < self.p);
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat exponentiation.
    pub fn inv(&self, a: u64) -> Result<u64> {
        debug_assert!(a < self.p);
        if a == 0 {
            return Err(Error::DivisionByZero(self.p));
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Reduces a signed value into `[0, p)`.
    #[inline]
    pub fn reduce_i64(&self, v: i64) -> u64 {
        let p = self.p as i64;
        (v.rem_euclid(p)) as u64
    }
}

/// A single value of Z_p tied to its [`FieldSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldElement {
    value: u64,
    spec: FieldSpec,
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.spec.inv(self.value)?,
            spec: self.spec,
        })
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        FieldElement {
            value: self.spec.pow(self.value, exp),
            spec: self.spec,
        }
    }

    fn same_field(&self, other: &FieldElement) -> FieldSpec {
        self.spec
            .check_same(&other.spec)
            .expect("arithmetic across different field specs");
        self.spec
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    /// Panics if the operands belong to different field specs.
    fn add(self, rhs: FieldElement) -> FieldElement {
        let spec = self.same_field(&rhs);
        FieldElement {
            value: spec.add(self.value, rhs.value),
            spec,
        }
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        let spec = self.same_field(&rhs);
        FieldElement {
            value: spec.sub(self.value, rhs.value),
            spec,
        }
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        let spec = self.same_field(&rhs);
        FieldElement {
            value: spec.mul(self.value, rhs.value),
            spec,
        }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.spec.neg(self.value),
            spec: self.spec,
        }
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Deterministic trial division; exact for the whole supported range.
fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    if p % 3 == 0 {
        return p == 3;
    }
    let mut d = 5u64;
    while d * d <= p {
        if p % d == 0 || p % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_field_accepts_primes() {
        assert_eq!(FieldSpec::new(3).unwrap().modulus(), 3);
        assert_eq!(FieldSpec::new(2).unwrap().modulus(), 2);
        assert_eq!(FieldSpec::new(2147483647).unwrap().modulus(), 2147483647);
    }

    #[test]
    fn make_field_rejects_composites_and_range() {
        assert_eq!(FieldSpec::new(4), Err(Error::NotPrime(4)));
        assert_eq!(FieldSpec::new(1), Err(Error::OutOfRange(1)));
        assert_eq!(FieldSpec::new(0), Err(Error::OutOfRange(0)));
        assert_eq!(FieldSpec::new(1 << 32), Err(Error::OutOfRange(1 << 32)));
        assert_eq!(FieldSpec::new(9), Err(Error::NotPrime(9)));
        assert_eq!(FieldSpec::new(2147483646), Err(Error::NotPrime(2147483646)));
    }

    #[test]
    fn trial_division_matches_sieve() {
        let mut sieve = vec![true; 1000];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..1000usize {
            if sieve[i] {
                for j in (i * i..1000).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &want) in sieve.iter().enumerate() {
            assert_eq!(is_prime(i as u64), want, "p = {i}");
        }
    }

    #[test]
    fn inv_examples() {
        let f5 = FieldSpec::new(5).unwrap();
        assert_eq!(f5.inv(2).unwrap(), 3);
        let f7 = FieldSpec::new(7).unwrap();
        assert_eq!(f7.inv(1).unwrap(), 1);
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(f3.inv(0), Err(Error::DivisionByZero(3)));
    }

    #[test]
    fn element_checked_rejects_out_of_range() {
        let f = FieldSpec::new(5).unwrap();
        assert!(f.element_checked(4).is_ok());
        assert_eq!(
            f.element_checked(5),
            Err(Error::CellOutOfRange { value: 5, p: 5 })
        );
    }

    #[test]
    fn element_ops() {
        let f = FieldSpec::new(7).unwrap();
        let x = f.element(3);
        let y = f.element(5);
        assert_eq!((x + y).value(), 1);
        assert_eq!((x - y).value(), 5);
        assert_eq!((x * y).value(), 1);
        assert_eq!((-x).value(), 4);
        assert_eq!(x.inv().unwrap().value(), 5);
    }

    #[test]
    #[should_panic(expected = "arithmetic across different field specs")]
    fn cross_field_arithmetic_panics() {
        let a = FieldSpec::new(5).unwrap().element(1);
        let b = FieldSpec::new(7).unwrap().element(1);
        let _ = a + b;
    }

    fn small_prime() -> impl Strategy<Value = u64> {
        prop_oneof![
            Just(2u64),
            Just(3),
            Just(5),
            Just(7),
            Just(11),
            Just(13),
            Just(101),
            Just(65537),
        ]
    }

    proptest! {
        #[test]
        fn field_axioms((p, a, b, c) in small_prime().prop_flat_map(|p| {
            (Just(p), 0..p, 0..p, 0..p)
        })) {
            let f = FieldSpec::new(p).unwrap();
            // associativity + commutativity
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            // distributivity
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            // additive inverse
            prop_assert_eq!(f.add(f.neg(a), a), 0);
            // multiplicative inverse
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }
}
