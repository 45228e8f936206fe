//! Integer Laurent polynomials in the quantum parameter `q`.
//!
//! Coefficients are arbitrary-precision integers: quantum factorials
//! overflow 64 bits well within the heights this crate works at.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A Laurent polynomial over Z, stored sparsely as exponent -> coefficient.
/// Canonical form: zero coefficients are never stored, so equality is
/// structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentInt {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentInt {
    pub fn zero() -> Self {
        LaurentInt { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// c * q^e
    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut terms = BTreeMap::new();
        let c = coeff.into();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentInt { terms }
    }

    pub fn q_power(exp: i64) -> Self {
        Self::monomial(exp, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True when every coefficient is a nonnegative integer. Module
    /// characters are exactly the effective elements.
    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// The bar involution q -> q^{-1}.
    pub fn bar(&self) -> Self {
        LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Evaluation at q = 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    fn insert_add(&mut self, exp: i64, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Exact division: returns z with `self = divisor * z`, or an error
    /// carrying the remainder. The error is the consistency alarm used
    /// by the cuspidal recursion.
    ///
    /// Both operands are shifted so their lowest exponent is 0; that
    /// turns the problem into ordinary polynomial long division, which
    /// terminates because the remainder degree strictly drops.
    pub fn exact_div(&self, divisor: &LaurentInt) -> Result<LaurentInt> {
        if divisor.is_zero() {
            return Err(Error::Argument("division by zero Laurent polynomial".into()));
        }
        if self.is_zero() {
            return Ok(LaurentInt::zero());
        }
        let num_min = self.min_exp().expect("nonzero");
        let div_min = divisor.min_exp().expect("nonzero");
        let back_shift = num_min - div_min;
        let mut rem = LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (e - num_min, c.clone())).collect(),
        };
        let divisor0 = LaurentInt {
            terms: divisor.terms.iter().map(|(e, c)| (e - div_min, c.clone())).collect(),
        };
        let (dlead, dcoeff) = divisor0
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (*e, c.clone()))
            .expect("nonzero divisor");
        let mut quot = LaurentInt::zero();
        while let Some((rlead, rcoeff)) =
            rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))
        {
            if rlead < dlead || rem.min_exp().expect("nonzero") < 0 {
                return Err(Error::NonExactDivision {
                    remainder: LaurentInt {
                        terms: rem.terms.iter().map(|(e, c)| (e + num_min, c.clone())).collect(),
                    },
                });
            }
            let fac = &rcoeff / &dcoeff;
            if &fac * &dcoeff != rcoeff {
                return Err(Error::NonExactDivision {
                    remainder: LaurentInt {
                        terms: rem.terms.iter().map(|(e, c)| (e + num_min, c.clone())).collect(),
                    },
                });
            }
            let piece = LaurentInt::monomial(rlead - dlead, fac);
            rem -= &(&piece * &divisor0);
            quot += &piece;
        }
        Ok(LaurentInt {
            terms: quot.terms.into_iter().map(|(e, c)| (e + back_shift, c)).collect(),
        })
    }
}

/// The quantum integer `[n]` at q^d: (q^{dn} - q^{-dn}) / (q^d - q^{-d}).
pub fn qint(n: i64, d: i64) -> LaurentInt {
    assert!(d > 0, "symmetrizer must be positive");
    if n == 0 {
        return LaurentInt::zero();
    }
    if n < 0 {
        return -qint(-n, d);
    }
    let mut out = LaurentInt::zero();
    let mut e = d * (n - 1);
    for _ in 0..n {
        out += &LaurentInt::q_power(e);
        e -= 2 * d;
    }
    out
}

/// The quantum factorial `[n]!` at q^d.
pub fn qfact(n: i64, d: i64) -> LaurentInt {
    let mut out = LaurentInt::one();
    for k in 1..=n {
        out = &out * &qint(k, d);
    }
    out
}

impl AddAssign<&LaurentInt> for LaurentInt {
    fn add_assign(&mut self, rhs: &LaurentInt) {
        for (e, c) in &rhs.terms {
            self.insert_add(*e, c);
        }
    }
}

impl SubAssign<&LaurentInt> for LaurentInt {
    fn sub_assign(&mut self, rhs: &LaurentInt) {
        for (e, c) in &rhs.terms {
            let neg = -c.clone();
            self.insert_add(*e, &neg);
        }
    }
}

impl Add for &LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        LaurentInt {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = LaurentInt::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.insert_add(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl MulAssign<&LaurentInt> for LaurentInt {
    fn mul_assign(&mut self, rhs: &LaurentInt) {
        let out = &*self * rhs;
        *self = out;
    }
}

impl From<i64> for LaurentInt {
    fn from(n: i64) -> Self {
        LaurentInt::monomial(0, n)
    }
}

impl fmt::Display for LaurentInt {
    /// Ascending exponents: "q^-2 + 2 + q^2".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let one = BigInt::one();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (*e, mag == one) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentInt {
    /// JSON form: list of [exponent, coefficient] pairs, coefficients as
    /// decimal strings so arbitrary precision survives the round trip.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, String)> =
            self.terms.iter().map(|(e, c)| (*e, c.to_string())).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(i64, String)> = Vec::deserialize(deserializer)?;
        let mut out = LaurentInt::zero();
        for (e, c) in pairs {
            let coeff: BigInt = c
                .parse()
                .map_err(|_| D::Error::custom(format!("bad integer coefficient {c:?}")))?;
            out.insert_add(e, &coeff);
        }
        Ok(out)
    }
}
