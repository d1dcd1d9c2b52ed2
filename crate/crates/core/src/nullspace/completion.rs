//! Completing a prescribed tail `(a_3, …, a_n)` to a point of the order-3
//! nullvariety `{s = 0, g = 0}` by solving for `a_1` and `a_2`.
//!
//! With `a_2 = -a_1 - Σ_{j≥3} a_j`, the condition `g = 0` becomes
//! `A a_1² + B a_1 + C = 0` where
//!
//! * `A = d(1,2)`
//! * `B = Σ_{j≥3} (d(1,2) - d(1,j) + d(2,j)) a_j`
//! * `C = Σ_{j,k≥3} (d(2,j) - d(j,k)/2) a_j a_k`

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::s_and_g;
use crate::scalar::{common_conductor, rat, CFloat, CycNum, Numeric, Scalar, DEFAULT_PRECISION};
use crate::tree::Tree;

use super::membership_sg;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticCoefficients {
    pub a: CycNum,
    pub b: CycNum,
    pub c: CycNum,
}

impl QuadraticCoefficients {
    pub fn discriminant(&self) -> CycNum {
        &(&self.b * &self.b) - &(&CycNum::from_int(self.a.conductor(), 4) * &(&self.a * &self.c))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CandidatePoint {
    Exact(Vec<CycNum>),
    /// The root is not in the working field; coordinates are embedded.
    Numeric(Vec<CFloat>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompletionCandidate {
    pub point: CandidatePoint,
    /// The completed point is the zero vector.
    pub trivial: bool,
    /// Exact membership for in-field points; `residual ≤ tolerance` otherwise.
    pub member: bool,
    /// `max(|s|, |g|)` at the point (exactly 0 for exact members).
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Completion {
    pub conductor: u64,
    pub coefficients: QuadraticCoefficients,
    pub root_in_field: bool,
    pub candidates: Vec<CompletionCandidate>,
}

impl Completion {
    /// Nontrivial candidates that passed the membership test.
    pub fn verified(&self) -> impl Iterator<Item = &CompletionCandidate> {
        self.candidates.iter().filter(|c| c.member && !c.trivial)
    }
}

fn working_tail(t: &Tree, tail: &[CycNum]) -> Result<(u64, Vec<CycNum>)> {
    if t.n() < 3 {
        return Err(Error::TooSmall { n: t.n(), min: 3 });
    }
    if tail.len() != t.n() - 2 {
        return Err(Error::DimensionMismatch { expected: t.n() - 2, found: tail.len() });
    }
    let m = common_conductor(tail).lcm(&4);
    Ok((m, tail.iter().map(|x| x.lift(m).expect("conductor divides lcm")).collect()))
}

/// `A`, `B`, `C` over `Q(ζ_m)` with `m = lcm(4, conductor of the tail)`.
pub fn completion_coefficients(t: &Tree, tail: &[CycNum]) -> Result<QuadraticCoefficients> {
    let (m, a) = working_tail(t, tail)?;
    Ok(coefficients(t, m, &a))
}

fn coefficients(t: &Tree, m: u64, a: &[CycNum]) -> QuadraticCoefficients {
    let d = |i: usize, j: usize| t.distance(i, j) as i64;
    let d12 = d(0, 1);
    let mut b = CycNum::zero(m);
    let mut c = CycNum::zero(m);
    for (jj, aj) in a.iter().enumerate() {
        let j = jj + 2;
        b = &b + &aj.scaled_int(d12 - d(0, j) + d(1, j));
        for (kk, ak) in a.iter().enumerate() {
            let coef = rat(d(1, j), 1) - rat(d(j, kk + 2), 2);
            c = &c + &(aj * ak).scaled(&coef);
        }
    }
    QuadraticCoefficients { a: CycNum::from_int(m, d12), b, c }
}

pub fn complete_nullvector(t: &Tree, tail: &[CycNum]) -> Result<Completion> {
    complete_nullvector_with_precision(t, tail, DEFAULT_PRECISION)
}

/// Both completions of `tail` (one when the roots coincide).
///
/// Roots are exact when the discriminant is `±q²ζ^j` in the working field;
/// otherwise the point is computed at `precision` bits and accepted when
/// `max(|s|, |g|) ≤ 2^(32 - precision)` times the scale of the tail.
pub fn complete_nullvector_with_precision(t: &Tree, tail: &[CycNum], precision: usize) -> Result<Completion> {
    let (m, a) = working_tail(t, tail)?;
    let q = coefficients(t, m, &a);
    let sigma = a.iter().fold(CycNum::zero(m), |acc, x| &acc + x);
    let disc = q.discriminant();
    let two_a = rat(2 * t.distance(0, 1) as i64, 1);
    let inv_two_a = rat(1, 1) / &two_a;
    let signs: &[i64] = if disc.is_zero() { &[1] } else { &[1, -1] };

    if let Some(root) = disc.exact_sqrt() {
        let candidates = signs
            .iter()
            .map(|&sg| {
                let a1 = (&(-&q.b) + &root.scaled_int(sg)).scaled(&inv_two_a);
                let a2 = &(-&a1) - &sigma;
                let mut point = vec![a1, a2];
                point.extend(a.iter().cloned());
                let trivial = point.iter().all(CycNum::is_zero);
                let member = membership_sg(t, &point)?;
                Ok(CompletionCandidate {
                    residual: if member { 0.0 } else { sg_residual(t, &embed_all(&point, precision)) },
                    point: CandidatePoint::Exact(point),
                    trivial,
                    member,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Completion { conductor: m, coefficients: q, root_in_field: true, candidates });
    }

    let tail_f = embed_all(&a, precision);
    let scale = tail_f.iter().map(Numeric::modulus).fold(1.0, f64::max);
    let tolerance = 2f64.powi(32 - precision as i32) * scale * scale;
    let root = disc.embed(precision).sqrt();
    let (nb, sigma_f) = ((-&q.b).embed(precision), sigma.embed(precision));
    let candidates = signs
        .iter()
        .map(|&sg| {
            let a1 = nb.plus(&root.scaled_int(sg)).scaled(&inv_two_a);
            let a2 = a1.negated().minus(&sigma_f);
            let mut point = vec![a1, a2];
            point.extend(tail_f.iter().cloned());
            let residual = sg_residual(t, &point);
            CompletionCandidate { point: CandidatePoint::Numeric(point), trivial: false, member: residual <= tolerance, residual }
        })
        .collect();
    Ok(Completion { conductor: m, coefficients: q, root_in_field: false, candidates })
}

fn embed_all(xs: &[CycNum], precision: usize) -> Vec<CFloat> {
    xs.iter().map(|x| x.embed(precision)).collect()
}

fn sg_residual(t: &Tree, point: &[CFloat]) -> f64 {
    let (s, g) = s_and_g(t, point);
    s.modulus().max(g.modulus())
}
