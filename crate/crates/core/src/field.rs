//! Prime field arithmetic with canonical residues.
//!
//! All symbol values live in `F_p^*` for a prime `3 <= p < 2^31`. Elements
//! are stored as canonical residues in `[0, p)`, so equality of values is
//! equality of representations.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} outside the supported range [3, 2^31)")]
    OutOfRange(u64),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
}

/// Element of a prime field, always a canonical residue in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(pub u64);

impl std::fmt::Display for Fp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_p`. Construction runs a deterministic primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(3..1u64 << 31).contains(&p) {
            return Err(FieldError::OutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical residue of an arbitrary integer.
    pub fn elt(&self, n: i64) -> Fp {
        let p = self.p as i64;
        Fp(n.rem_euclid(p) as u64)
    }

    pub fn zero(&self) -> Fp {
        Fp(0)
    }

    pub fn one(&self) -> Fp {
        Fp(1)
    }

    pub fn is_zero(&self, a: Fp) -> bool {
        a.0 == 0
    }

    pub fn add(&self, a: Fp, b: Fp) -> Fp {
        let s = a.0 + b.0;
        Fp(if s >= self.p { s - self.p } else { s })
    }

    pub fn sub(&self, a: Fp, b: Fp) -> Fp {
        Fp(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.p - b.0
        })
    }

    pub fn neg(&self, a: Fp) -> Fp {
        Fp(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    pub fn mul(&self, a: Fp, b: Fp) -> Fp {
        // p < 2^31, so the product fits in u64.
        Fp(a.0 * b.0 % self.p)
    }

    pub fn inv(&self, a: Fp) -> Result<Fp, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero(self.p));
        }
        // Extended Euclid on (a, p).
        let (mut r0, mut r1) = (a.0 as i64, self.p as i64);
        let (mut s0, mut s1) = (1i64, 0i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.elt(s0))
    }

    pub fn div(&self, a: Fp, b: Fp) -> Result<Fp, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer exponent; negative exponents require `a != 0`.
    pub fn pow(&self, a: Fp, e: i64) -> Result<Fp, FieldError> {
        let base = if e < 0 { self.inv(a)? } else { a };
        let mut exp = e.unsigned_abs();
        let mut acc = Fp(1);
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            exp >>= 1;
        }
        Ok(acc)
    }

    /// `(-1)^e` as a field element.
    pub fn sign(&self, e: i64) -> Fp {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.neg(self.one())
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_and_small_moduli() {
        assert_eq!(PrimeField::new(9), Err(FieldError::NotPrime(9)));
        assert_eq!(PrimeField::new(2), Err(FieldError::OutOfRange(2)));
        assert_eq!(PrimeField::new(1 << 31), Err(FieldError::OutOfRange(1 << 31)));
        assert!(PrimeField::new(2147483647).is_ok()); // 2^31 - 1 is prime
    }

    #[test]
    fn canonical_residues() {
        let k = PrimeField::new(7).unwrap();
        assert_eq!(k.elt(-1), Fp(6));
        assert_eq!(k.elt(14), Fp(0));
        assert_eq!(k.elt(-15), Fp(6));
    }

    #[test]
    fn inverse_and_pow() {
        let k = PrimeField::new(7).unwrap();
        assert_eq!(k.inv(Fp(3)).unwrap(), Fp(5)); // 3*5 = 15 = 1 mod 7
        assert_eq!(k.pow(Fp(3), -1).unwrap(), Fp(5));
        assert_eq!(k.pow(Fp(2), 10).unwrap(), Fp(2)); // 1024 = 2 mod 7
        assert!(k.inv(Fp(0)).is_err());
        let k5 = PrimeField::new(5).unwrap();
        assert_eq!(k5.inv(Fp(3)).unwrap(), Fp(2)); // 3^{-1} = 2 in F_5... 3*2=6=1
    }

    #[test]
    fn sign_parity() {
        let k = PrimeField::new(5).unwrap();
        assert_eq!(k.sign(0), Fp(1));
        assert_eq!(k.sign(-3), Fp(4));
        assert_eq!(k.sign(6), Fp(1));
    }
}
