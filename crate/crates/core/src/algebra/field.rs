use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field: rationals, or a prime field `F_p` with `p < 2^64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn zero(&self) -> FieldElement {
        match *self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::zero()),
            FieldSpec::Prime(p) => FieldElement::Prime {
                residue: 0,
                modulus: p,
            },
        }
    }

    pub fn one(&self) -> FieldElement {
        match *self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::one()),
            FieldSpec::Prime(p) => FieldElement::Prime {
                residue: 1 % p,
                modulus: p,
            },
        }
    }

    /// Embeds an integer; negative values wrap modulo `p` in a prime field.
    pub fn from_i64(&self, v: i64) -> FieldElement {
        match *self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::from_integer(v.into())),
            FieldSpec::Prime(p) => FieldElement::Prime {
                residue: (v as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    /// Builds `num/den`. In a prime field this is `num * den^{-1}`.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldElement> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        match *self {
            FieldSpec::Rational => Ok(FieldElement::Rational(BigRational::new(
                num.into(),
                den.into(),
            ))),
            FieldSpec::Prime(_) => self.from_i64(num).mul(&self.from_i64(den).inv()?),
        }
    }

    /// Parses a literal as written in circuit files: `a` or `a/b` over the
    /// rationals, a canonical residue in `[0, p-1]` over `F_p`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let bad = |msg: String| Error::InvalidArgument(msg);
        match *self {
            FieldSpec::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (text, "1"),
                };
                let num = BigInt::from_str(num)
                    .map_err(|_| bad(format!("invalid rational literal '{text}'")))?;
                let den = BigInt::from_str(den)
                    .map_err(|_| bad(format!("invalid rational literal '{text}'")))?;
                if den.is_zero() {
                    return Err(bad(format!("zero denominator in '{text}'")));
                }
                Ok(FieldElement::Rational(BigRational::new(num, den)))
            }
            FieldSpec::Prime(p) => {
                let v: u64 = text
                    .parse()
                    .map_err(|_| bad(format!("'{text}' is not a residue in [0, {}]", p - 1)))?;
                if v >= p {
                    return Err(bad(format!("'{text}' is not a residue in [0, {}]", p - 1)));
                }
                Ok(FieldElement::Prime {
                    residue: v,
                    modulus: p,
                })
            }
        }
    }

    pub fn contains(&self, e: &FieldElement) -> bool {
        e.spec() == *self
    }

    pub(crate) fn check(&self, e: &FieldElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.to_string(),
                right: e.spec().to_string(),
            })
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "p:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "q" {
            return Ok(FieldSpec::Rational);
        }
        match s.strip_prefix("p:") {
            Some(p) => {
                let p: u64 = p.parse().map_err(|_| {
                    Error::InvalidField(format!("'{s}': modulus must be an integer below 2^64"))
                })?;
                FieldSpec::prime(p)
            }
            None => Err(Error::InvalidField(format!(
                "'{s}': expected 'q' or 'p:<prime>'"
            ))),
        }
    }
}

/// An exact scalar tagged with its field. Rationals are kept in lowest terms
/// with a positive denominator; prime-field residues are canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rational,
            FieldElement::Prime { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Prime { residue, .. } => *residue == 1,
        }
    }

    fn mismatch(&self, other: &FieldElement) -> Error {
        Error::FieldMismatch {
            left: self.spec().to_string(),
            right: other.spec().to_string(),
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.zip(other, |a, b| a + b, add_mod)
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.zip(other, |a, b| a - b, |a, b, p| add_mod(a, p - b, p))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.zip(other, |a, b| a * b, mul_mod)
    }

    pub fn neg(&self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Prime { residue, modulus } => FieldElement::Prime {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Prime { residue, modulus } => FieldElement::Prime {
                residue: pow_mod(*residue, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Field-checked equality.
    pub fn equals(&self, other: &FieldElement) -> Result<bool> {
        if self.spec() != other.spec() {
            return Err(self.mismatch(other));
        }
        Ok(self == other)
    }

    fn zip(
        &self,
        other: &FieldElement,
        rat: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        prime: impl FnOnce(u64, u64, u64) -> u64,
    ) -> Result<FieldElement> {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                Ok(FieldElement::Rational(rat(a, b)))
            }
            (
                FieldElement::Prime {
                    residue: a,
                    modulus: p,
                },
                FieldElement::Prime {
                    residue: b,
                    modulus: q,
                },
            ) if p == q => Ok(FieldElement::Prime {
                residue: prime(*a, *b, *p),
                modulus: *p,
            }),
            _ => Err(self.mismatch(other)),
        }
    }

    // Unchecked variants for inner loops whose callers have already
    // verified that both operands share one field.

    pub(crate) fn add_assign_unchecked(&mut self, other: &FieldElement) {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => *a += b,
            (
                FieldElement::Prime {
                    residue: a,
                    modulus: p,
                },
                FieldElement::Prime { residue: b, .. },
            ) => *a = add_mod(*a, *b, *p),
            _ => unreachable!("field checked by caller"),
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &FieldElement) -> FieldElement {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (
                FieldElement::Prime {
                    residue: a,
                    modulus: p,
                },
                FieldElement::Prime { residue: b, .. },
            ) => FieldElement::Prime {
                residue: mul_mod(*a, *b, *p),
                modulus: *p,
            },
            _ => unreachable!("field checked by caller"),
        }
    }

    /// Numerator and denominator of a rational, `None` for prime-field values.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(r) => Some(r),
            FieldElement::Prime { .. } => None,
        }
    }
}

impl serde::Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve primes as bases are exact
/// for every 64-bit input.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0u32);
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Lowest terms with positive denominator; `BigRational` maintains this,
/// the check exists for tests.
pub fn is_canonical(e: &FieldElement) -> bool {
    match e {
        FieldElement::Rational(r) => r.denom().is_positive() && r.numer().gcd(r.denom()).is_one(),
        FieldElement::Prime { residue, modulus } => residue < modulus,
    }
}
