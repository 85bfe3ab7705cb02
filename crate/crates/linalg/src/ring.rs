use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::int::Int;
use crate::LinalgError;

/// The coefficient ring: the integers or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl RingSpec {
    pub fn prime_field(p: u64) -> Result<Self, LinalgError> {
        if is_prime(p) && p < (1 << 31) {
            Ok(RingSpec::PrimeField(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, RingSpec::PrimeField(_))
    }

    /// Canonical representative: unchanged over ℤ, least residue over 𝔽_p.
    pub fn reduce(&self, a: &Int) -> Int {
        match self {
            RingSpec::Integers => a.clone(),
            RingSpec::PrimeField(p) => Int::Small(a.rem_u64(*p) as i64),
        }
    }

    pub fn add(&self, a: &Int, b: &Int) -> Int {
        self.fold(a + b)
    }

    pub fn sub(&self, a: &Int, b: &Int) -> Int {
        self.fold(a - b)
    }

    pub fn mul(&self, a: &Int, b: &Int) -> Int {
        self.fold(a * b)
    }

    pub fn neg(&self, a: &Int) -> Int {
        self.fold(-a)
    }

    fn fold(&self, a: Int) -> Int {
        match self {
            RingSpec::Integers => a,
            RingSpec::PrimeField(_) => self.reduce(&a),
        }
    }

    pub fn is_unit(&self, a: &Int) -> bool {
        match self {
            RingSpec::Integers => a.is_pm_one(),
            RingSpec::PrimeField(_) => !a.is_zero(),
        }
    }

    /// Inverse of a unit.
    pub fn inv_unit(&self, a: &Int) -> Int {
        match self {
            RingSpec::Integers => {
                debug_assert!(a.is_pm_one());
                a.clone()
            }
            RingSpec::PrimeField(p) => {
                let a = a.rem_u64(*p);
                debug_assert!(a != 0);
                Int::Small(pow_mod(a, p - 2, *p) as i64)
            }
        }
    }

    /// `a = q·b + r` with `r` strictly smaller than `b` in the Euclidean size.
    /// Over a field the remainder is always zero.
    pub fn euclid(&self, a: &Int, b: &Int) -> (Int, Int) {
        match self {
            RingSpec::Integers => a.div_rem_euclid(b),
            RingSpec::PrimeField(_) => (self.mul(a, &self.inv_unit(b)), Int::ZERO),
        }
    }

    /// Euclidean size used for pivot selection.
    pub fn size_cmp(&self, a: &Int, b: &Int) -> std::cmp::Ordering {
        match self {
            RingSpec::Integers => a.cmp_abs(b),
            RingSpec::PrimeField(_) => (!a.is_zero()).cmp(&!b.is_zero()),
        }
    }

    /// Unit `u` such that `u·a` is the normalized associate of `a`
    /// (non-negative over ℤ, one over a field).
    pub fn normalizing_unit(&self, a: &Int) -> Int {
        match self {
            RingSpec::Integers => {
                if a.is_negative() {
                    Int::Small(-1)
                } else {
                    Int::ONE
                }
            }
            RingSpec::PrimeField(_) => {
                if a.is_zero() {
                    Int::ONE
                } else {
                    self.inv_unit(a)
                }
            }
        }
    }

    pub fn divides(&self, a: &Int, b: &Int) -> bool {
        match self {
            RingSpec::Integers => b.is_divisible_by(a),
            RingSpec::PrimeField(_) => !a.is_zero() || b.is_zero(),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl std::str::FromStr for RingSpec {
    type Err = LinalgError;

    /// Accepts `Z`, `F<p>`, `Fp:<p>` and `Fp<p>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("z") {
            return Ok(RingSpec::Integers);
        }
        let digits = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("Fp"))
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| LinalgError::BadRing(s.to_string()))?;
        let p: u64 = digits.parse().map_err(|_| LinalgError::BadRing(s.to_string()))?;
        RingSpec::prime_field(p)
    }
}

// JSON form: "Z" or {"Fp": p}.
impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RingSpec::Integers => s.serialize_str("Z"),
            RingSpec::PrimeField(p) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("Fp", p)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Name(String),
            Field {
                #[serde(rename = "Fp")]
                fp: u64,
            },
        }
        match Repr::deserialize(d)? {
            Repr::Name(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Field { fp } => RingSpec::prime_field(fp).map_err(serde::de::Error::custom),
        }
    }
}
