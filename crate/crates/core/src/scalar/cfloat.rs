use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as IntSign};
use num_complex::Complex64;

use super::{Numeric, Rat, Scalar};

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in mantissa bits.
pub const DEFAULT_PRECISION: usize = 128;

/// Complex number with multi-precision binary floating-point parts.
///
/// Operations run at the larger precision of their operands. Values are
/// finite: the only partial operation, division, is exposed as
/// [`CFloat::checked_div`].
#[derive(Clone, PartialEq)]
pub struct CFloat {
    re: BigFloat,
    im: BigFloat,
    prec: usize,
}

pub(crate) fn float_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match x.as_raw_parts() {
        Some((words, _, sign, exp, _)) => {
            let top = words.last().copied().unwrap_or(0) as f64;
            let next = if words.len() > 1 { words[words.len() - 2] as f64 } else { 0.0 };
            let mant = top / 2f64.powi(64) + next / 2f64.powi(128);
            let v = mant * 2f64.powi(exp);
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

pub(crate) fn int_to_float(n: &BigInt, prec: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    // 2^64 is exactly representable.
    let base = BigFloat::from_f64(18446744073709551616.0, prec);
    let mut acc = BigFloat::from_u64(0, prec);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, prec, RM).add(&BigFloat::from_u64(*d, prec), prec, RM);
    }
    if sign == IntSign::Minus {
        acc.neg()
    } else {
        acc
    }
}

pub(crate) fn rat_to_float(r: &Rat, prec: usize) -> BigFloat {
    let n = int_to_float(r.numer(), prec + 16);
    let d = int_to_float(r.denom(), prec + 16);
    n.div(&d, prec, RM)
}

impl CFloat {
    pub fn zero(prec: usize) -> Self {
        Self::from_f64(0.0, 0.0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        assert!(re.is_finite() && im.is_finite(), "non-finite input to CFloat");
        CFloat {
            re: BigFloat::from_f64(re, prec),
            im: BigFloat::from_f64(im, prec),
            prec,
        }
    }

    pub fn from_rat(r: &Rat, prec: usize) -> Self {
        CFloat { re: rat_to_float(r, prec), im: BigFloat::from_u64(0, prec), prec }
    }

    pub(crate) fn from_floats(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        CFloat { re, im, prec }
    }

    /// `exp(2πi · num / den)`.
    pub fn cis_fraction(num: i64, den: u64, prec: usize) -> Self {
        let work = prec + 32;
        let mut cc = Consts::new().expect("astro-float constants cache");
        let two_pi = cc.pi(work, RM).mul(&BigFloat::from_u64(2, work), work, RM);
        let angle = two_pi
            .mul(&BigFloat::from_i64(num, work), work, RM)
            .div(&BigFloat::from_u64(den, work), work, RM);
        let mut re = angle.cos(work, RM, &mut cc);
        let mut im = angle.sin(work, RM, &mut cc);
        // Exact values at the axis points, where the series leaves tiny residue.
        let quarter = (4 * num.rem_euclid(den as i64) as u64) % den == 0;
        if quarter {
            let q = (4 * num.rem_euclid(den as i64) as u64) / den;
            let (c, s) = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][q as usize];
            re = BigFloat::from_f64(c, work);
            im = BigFloat::from_f64(s, work);
        }
        let _ = re.set_precision(prec, RM);
        let _ = im.set_precision(prec, RM);
        CFloat { re, im, prec }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn re_f64(&self) -> f64 {
        float_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        float_to_f64(&self.im)
    }

    /// `re² + im²` at working precision.
    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec, RM)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let p = self.prec.max(rhs.prec);
        let den = rhs.norm_sqr();
        let num = self.times(&Numeric::conj(rhs));
        Some(CFloat { re: num.re.div(&den, p, RM), im: num.im.div(&den, p, RM), prec: p })
    }

    /// Decimal rendering of both parts.
    pub fn to_decimal_strings(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
}

impl fmt::Debug for CFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CFloat({:e} + {:e}i; {} bits)", self.re_f64(), self.im_f64(), self.prec)
    }
}

impl fmt::Display for CFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

impl Scalar for CFloat {
    fn zero_like(&self) -> Self {
        CFloat::zero(self.prec)
    }
    fn one_like(&self) -> Self {
        CFloat::one(self.prec)
    }
    fn plus(&self, rhs: &Self) -> Self {
        let p = self.prec.max(rhs.prec);
        CFloat { re: self.re.add(&rhs.re, p, RM), im: self.im.add(&rhs.im, p, RM), prec: p }
    }
    fn minus(&self, rhs: &Self) -> Self {
        let p = self.prec.max(rhs.prec);
        CFloat { re: self.re.sub(&rhs.re, p, RM), im: self.im.sub(&rhs.im, p, RM), prec: p }
    }
    fn times(&self, rhs: &Self) -> Self {
        let p = self.prec.max(rhs.prec);
        let re = self.re.mul(&rhs.re, p, RM).sub(&self.im.mul(&rhs.im, p, RM), p, RM);
        let im = self.re.mul(&rhs.im, p, RM).add(&self.im.mul(&rhs.re, p, RM), p, RM);
        CFloat { re, im, prec: p }
    }
    fn negated(&self) -> Self {
        CFloat { re: self.re.neg(), im: self.im.neg(), prec: self.prec }
    }
    fn scaled(&self, c: &Rat) -> Self {
        let c = rat_to_float(c, self.prec);
        CFloat { re: self.re.mul(&c, self.prec, RM), im: self.im.mul(&c, self.prec, RM), prec: self.prec }
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl Numeric for CFloat {
    fn from_parts_like(&self, re: f64, im: f64) -> Self {
        CFloat::from_f64(re, im, self.prec)
    }
    fn conj(&self) -> Self {
        CFloat { re: self.re.clone(), im: self.im.neg(), prec: self.prec }
    }
    fn modulus(&self) -> f64 {
        float_to_f64(&self.abs())
    }
    fn recip(&self) -> Self {
        self.one_like().checked_div(self).expect("reciprocal of zero")
    }
    fn sqrt(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return self.clone();
        }
        let two = BigFloat::from_u64(2, p);
        let r = self.abs();
        let t = r.add(&self.re.abs(), p, RM).div(&two, p, RM).sqrt(p, RM);
        let other = self.im.abs().div(&t.mul(&two, p, RM), p, RM);
        if !self.re.is_negative() {
            let im = if self.im.is_negative() { other.neg() } else { other };
            CFloat { re: t, im, prec: p }
        } else {
            let im = if self.im.is_negative() { t.neg() } else { t };
            CFloat { re: other, im, prec: p }
        }
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re_f64(), self.im_f64())
    }
}
