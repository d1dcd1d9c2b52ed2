use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cfloat::CFloat;
use super::rat::{rat_from_pair, rat_sqrt, rat_to_pair, Rat};
use super::{upoly, Scalar};

pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1, "conductor must be positive");
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

type IntPoly = Vec<BigInt>;

fn cyclo_cache() -> &'static Mutex<HashMap<u64, Arc<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn power_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<IntPoly>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<IntPoly>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Exact division of integer polynomials by a monic divisor.
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> IntPoly {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for shift in (0..q.len()).rev() {
        let c = r[shift + dd].clone();
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                r[shift + i] -= &c * d;
            }
        }
        q[shift] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

/// The `m`-th cyclotomic polynomial `Φ_m`, ascending coefficients, cached.
pub fn cyclotomic_polynomial(m: u64) -> Arc<IntPoly> {
    assert!(m >= 1, "conductor must be positive");
    if let Some(p) = cyclo_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = -BigInt::one();
    poly[m as usize] = BigInt::one();
    for d in (1..m).filter(|d| m % d == 0) {
        poly = div_exact_monic(&poly, &cyclotomic_polynomial(d));
    }
    let poly = Arc::new(poly);
    cyclo_cache().lock().unwrap().insert(m, poly.clone());
    poly
}

/// `ζ_m^p mod Φ_m` for `p = 0..m`, each of length `φ(m)`, cached.
fn power_table(m: u64) -> Arc<Vec<IntPoly>> {
    if let Some(t) = power_cache().lock().unwrap().get(&m) {
        return t.clone();
    }
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    let mut table = Vec::with_capacity(m as usize);
    let mut cur = vec![BigInt::zero(); deg];
    cur[0] = BigInt::one();
    for _ in 0..m {
        table.push(cur.clone());
        // multiply by x and reduce the overflow coefficient
        let carry = cur[deg - 1].clone();
        for i in (1..deg).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !carry.is_zero() {
            for i in 0..deg {
                cur[i] -= &carry * &phi[i];
            }
        }
    }
    let table = Arc::new(table);
    power_cache().lock().unwrap().insert(m, table.clone());
    table
}

/// Element of `Q(ζ_m)` in the power basis `1, ζ, …, ζ^{φ(m)-1}` modulo `Φ_m`.
///
/// Arithmetic between elements of different conductors is carried out in
/// `Q(ζ_lcm)`. Equality is field equality, independent of the conductor the
/// operands happen to be written in.
#[derive(Clone)]
pub struct CycNum {
    m: u64,
    coeffs: Vec<Rat>,
}

impl CycNum {
    pub fn zero(m: u64) -> Self {
        CycNum { m, coeffs: vec![Rat::zero(); euler_phi(m) as usize] }
    }

    pub fn one(m: u64) -> Self {
        Self::from_rat(m, Rat::one())
    }

    pub fn from_rat(m: u64, r: Rat) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(m: u64, v: i64) -> Self {
        Self::from_rat(m, Rat::from_integer(v.into()))
    }

    /// Element with the given coefficients on `1, ζ_m, ζ_m², …`; vectors longer
    /// than `φ(m)` are reduced.
    pub fn from_coeffs(m: u64, coeffs: Vec<Rat>) -> Self {
        let deg = euler_phi(m) as usize;
        if coeffs.len() <= deg {
            let mut coeffs = coeffs;
            coeffs.resize(deg, Rat::zero());
            return CycNum { m, coeffs };
        }
        Self::reduce(m, &coeffs)
    }

    fn reduce(m: u64, raw: &[Rat]) -> Self {
        let deg = euler_phi(m) as usize;
        let mut out = vec![Rat::zero(); deg];
        let table = if raw.len() > deg { Some(power_table(m)) } else { None };
        for (j, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j < deg {
                out[j] += c;
            } else {
                let row = &table.as_ref().unwrap()[j % m as usize];
                for (o, t) in out.iter_mut().zip(row) {
                    if !t.is_zero() {
                        *o += c * Rat::from_integer(t.clone());
                    }
                }
            }
        }
        CycNum { m, coeffs: out }
    }

    /// `ζ_m^power` with `ζ_m = exp(2πi/m)`; negative powers allowed.
    pub fn root_of_unity(m: u64, power: i64) -> Self {
        let p = power.rem_euclid(m as i64) as usize;
        let row = &power_table(m)[p];
        CycNum { m, coeffs: row.iter().map(|c| Rat::from_integer(c.clone())).collect() }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The same field element written over `Q(ζ_target)`; `None` unless `m | target`.
    pub fn lift(&self, target: u64) -> Option<Self> {
        if target % self.m != 0 {
            return None;
        }
        if target == self.m {
            return Some(self.clone());
        }
        let step = (target / self.m) as usize;
        let table = power_table(target);
        let mut out = vec![Rat::zero(); euler_phi(target) as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, t) in out.iter_mut().zip(&table[(j * step) % target as usize]) {
                if !t.is_zero() {
                    *o += c * Rat::from_integer(t.clone());
                }
            }
        }
        Some(CycNum { m: target, coeffs: out })
    }

    fn aligned(&self, rhs: &Self) -> (Self, Self) {
        if self.m == rhs.m {
            return (self.clone(), rhs.clone());
        }
        let l = self.m.lcm(&rhs.m);
        (self.lift(l).unwrap(), rhs.lift(l).unwrap())
    }

    fn mul_same(&self, rhs: &Self) -> Self {
        let mut raw = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Self::reduce(self.m, &raw)
    }

    /// Exact power by repeated squaring.
    pub fn pow(&self, e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let modulus: Vec<Rat> =
            cyclotomic_polynomial(self.m).iter().map(|c| Rat::from_integer(c.clone())).collect();
        let mut a = self.coeffs.clone();
        upoly::trim(&mut a);
        upoly::inverse_mod(&a, &modulus).map(|c| Self::from_coeffs(self.m, c))
    }

    /// Exact square root when `self = ±q²·ζ^j` with `q` rational; `None` otherwise.
    ///
    /// Works over `Q(ζ_m)` with `m` made even, whose roots of unity are
    /// exactly the `m`-th ones.
    pub fn exact_sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let work = if self.m % 2 == 1 { self.lift(2 * self.m).unwrap() } else { self.clone() };
        let m = work.m;
        for j in 0..m as i64 {
            let Some(c) = work.mul_same(&Self::root_of_unity(m, -j)).as_rational() else {
                continue;
            };
            let (c, j) = if c.is_negative() { (-c, (j + m as i64 / 2) % m as i64) } else { (c, j) };
            if j % 2 != 0 {
                return None;
            }
            let q = rat_sqrt(&c)?;
            let root = Self::root_of_unity(m, j / 2).mul_same(&Self::from_rat(m, q));
            return Some(root);
        }
        None
    }

    /// Numerical value under `ζ_m ↦ exp(2πi/m)`.
    pub fn embed(&self, precision_bits: usize) -> CFloat {
        assert!(precision_bits >= 53, "embedding precision below double");
        let work = precision_bits + 16;
        let mut acc = CFloat::zero(work);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = if j == 0 {
                CFloat::from_rat(c, work)
            } else {
                CFloat::cis_fraction(j as i64, self.m, work).scaled(c)
            };
            acc = acc.plus(&term);
        }
        let (mut re, mut im) = (acc.re().clone(), acc.im().clone());
        let _ = re.set_precision(precision_bits, astro_float::RoundingMode::ToEven);
        let _ = im.set_precision(precision_bits, astro_float::RoundingMode::ToEven);
        CFloat::from_floats(re, im, precision_bits)
    }

    /// Double-precision value, for reporting.
    pub fn to_complex64(&self) -> Complex64 {
        let mut acc = Complex64::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            let angle = std::f64::consts::TAU * j as f64 / self.m as f64;
            acc += Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }
}

/// Least common conductor of a slice (1 when empty).
pub fn common_conductor(xs: &[CycNum]) -> u64 {
    xs.iter().fold(1, |acc, x| acc.lcm(&x.m))
}

/// Lift every element to the common conductor.
pub fn lift_all(xs: &[CycNum]) -> Vec<CycNum> {
    let m = common_conductor(xs);
    xs.iter().map(|x| x.lift(m).unwrap()).collect()
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNum {}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[m={}]({})", self.m, self)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·ζ{}", self.m)?,
                _ => write!(f, "({c})·ζ{}^{j}", self.m)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        let (mut a, b) = self.aligned(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        let (mut a, b) = self.aligned(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        let (a, b) = self.aligned(rhs);
        a.mul_same(&b)
    }
}

impl<'a> Div<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn div(self, rhs: &CycNum) -> CycNum {
        let (a, b) = self.aligned(rhs);
        a.mul_same(&b.inv().expect("division by zero in Q(ζ_m)"))
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, rhs: CycNum) -> CycNum { (&self).$f(&rhs) }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, rhs: &CycNum) -> CycNum { (&self).$f(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl Scalar for CycNum {
    fn zero_like(&self) -> Self {
        CycNum::zero(self.m)
    }
    fn one_like(&self) -> Self {
        CycNum::one(self.m)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &Rat) -> Self {
        CycNum { m: self.m, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

#[derive(Serialize, Deserialize)]
struct CycNumRepr {
    m: u64,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycNumRepr { m: self.m, coeffs: self.coeffs.iter().map(rat_to_pair).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CycNumRepr::deserialize(d)?;
        if repr.m == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let phi = euler_phi(repr.m) as usize;
        if repr.coeffs.len() != phi {
            return Err(D::Error::custom(format!(
                "expected {phi} coefficients for m = {}, got {}",
                repr.m,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|[n, d]| rat_from_pair(n, d))
            .collect::<crate::Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(CycNum { m: repr.m, coeffs })
    }
}
