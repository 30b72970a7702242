//! Scalar helpers around [`BigRational`].
//!
//! `Ratio<BigInt>` already keeps values in lowest terms with a positive
//! denominator, and zero as `0/1`, so the scalar type is an alias rather than
//! a wrapper.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p`, `p/q` (q nonzero). Whitespace around the token is ignored.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rat::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// `⌈log₂ k⌉` for `k ≥ 1`, which equals the bit length of `k - 1`.
fn ceil_log2(k: &BigInt) -> u64 {
    debug_assert!(k.is_positive());
    (k - BigInt::one()).bits()
}

/// Binary encoding length `⌈log₂|p|⌉ + ⌈log₂ q⌉ + 1` of `p/q` in lowest terms.
/// Zero is encoded as `0/1` and has length 1; the sign is not counted.
pub fn encoding_length(r: &Rat) -> u64 {
    if r.is_zero() {
        return 1;
    }
    ceil_log2(&r.numer().abs()) + ceil_log2(r.denom()) + 1
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
