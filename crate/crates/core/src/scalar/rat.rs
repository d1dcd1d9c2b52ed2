use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};

/// Arbitrary-precision rational number in lowest terms with positive denominator.
pub type Rat = BigRational;

/// `num / den` as a [`Rat`]. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Decimal-string pair `["num", "den"]` used by every JSON format.
pub fn rat_to_pair(r: &Rat) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

pub fn rat_from_pair(num: &str, den: &str) -> Result<Rat> {
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::MalformedInput(format!("bad integer {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::MalformedInput(format!("bad integer {den:?}")))?;
    if d == BigInt::from(0) {
        return Err(Error::MalformedInput("zero denominator".into()));
    }
    Ok(Rat::new(n, d))
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}
