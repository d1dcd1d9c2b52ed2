//! Sparse multivariate polynomials with rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rat_from_pair, rat_to_pair, CycNum, Rat, Scalar};

/// Exponent vector, ordered graded-lexicographically (`x1 > x2 > …`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `n` variables; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    n: usize,
    terms: BTreeMap<Monomial, Rat>,
}

/// Outcome of dividing by a linear form.
#[derive(Clone, Debug, PartialEq)]
pub enum Division {
    Exact(SparsePoly),
    /// The remainder after eliminating the pivot variable; nonzero.
    NotDivisible { remainder: SparsePoly },
}

impl SparsePoly {
    pub fn zero(n: usize) -> Self {
        SparsePoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        Self::from_terms(n, [(vec![0; n], c)])
    }

    /// The variable `x_i` (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index out of range");
        let mut e = vec![0; n];
        e[i] = 1;
        Self::from_terms(n, [(e, Rat::one())])
    }

    /// `Σ coeffs[i] · x_i`.
    pub fn linear(coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            n,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            }),
        )
    }

    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: decreasing graded-lex, leading term first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.n, other.n, "polynomials over different variable counts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePoly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        SparsePoly { n: self.n, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.n, Rat::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to `x_r` (0-based).
    pub fn partial(&self, r: usize) -> Self {
        assert!(r < self.n, "variable index out of range");
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.0[r];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[r] -= 1;
            out.add_term(Monomial(d), c * Rat::from_integer(e.into()));
        }
        out
    }

    /// Value at `point` over any [`Scalar`]; `point` must be nonempty and of length `n`.
    pub fn eval<S: Scalar>(&self, point: &[S]) -> Result<S> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: point.len() });
        }
        let Some(first) = point.first() else {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        };
        let max_deg = self.terms.keys().flat_map(|m| m.0.iter().copied()).max().unwrap_or(0);
        let powers: Vec<Vec<S>> = point
            .iter()
            .map(|x| {
                let mut row = vec![x.one_like()];
                for e in 1..=max_deg as usize {
                    row.push(row[e - 1].times(x));
                }
                row
            })
            .collect();
        let mut acc = first.zero_like();
        for (m, c) in &self.terms {
            let mut term = first.one_like().scaled(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.times(&powers[i][e as usize]);
                }
            }
            acc = acc.plus(&term);
        }
        Ok(acc)
    }

    /// Exact value at a point of `Q(ζ_m)`; every coordinate must share one conductor.
    pub fn evaluate(&self, point: &[CycNum]) -> Result<CycNum> {
        if let Some(first) = point.first() {
            if let Some(bad) = point.iter().find(|x| x.conductor() != first.conductor()) {
                return Err(Error::ConductorMismatch {
                    expected: first.conductor(),
                    found: bad.conductor(),
                });
            }
        }
        self.eval(point)
    }

    /// Divides by a nonzero linear form `s = Σ c_i x_i`.
    ///
    /// The pivot is the last variable with nonzero coefficient. The remainder is
    /// `self` with `x_pivot ↦ -(Σ_{i≠pivot} c_i x_i) / c_pivot`; it is zero
    /// exactly when `s` divides `self`.
    pub fn divide_by_linear(&self, s: &SparsePoly) -> Result<Division> {
        self.check_vars(s);
        let linear = !s.is_zero() && s.terms.keys().all(|m| m.degree() == 1);
        if !linear {
            return Err(Error::NotLinearForm);
        }
        let coeff_of = |i: usize| s.coeff(&unit(self.n, i));
        let pivot = (0..self.n).rev().find(|&i| !coeff_of(i).is_zero()).unwrap();
        let lead = coeff_of(pivot);
        let mut rem = self.clone();
        let mut quot = Self::zero(self.n);
        // Eliminate the highest power of the pivot first; each step lowers it.
        while let Some((m, c)) = rem
            .terms
            .iter()
            .filter(|(m, _)| m.0[pivot] > 0)
            .max_by(|(a, _), (b, _)| a.0[pivot].cmp(&b.0[pivot]).then_with(|| a.cmp(b)))
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            let mut qe = m.0.clone();
            qe[pivot] -= 1;
            let q = Self::from_terms(self.n, [(qe, c / &lead)]);
            rem = rem.sub(&q.mul(s));
            quot = quot.add(&q);
        }
        if rem.is_zero() {
            Ok(Division::Exact(quot))
        } else {
            Ok(Division::NotDivisible { remainder: rem })
        }
    }

    /// `{"n":…, "terms":[{"exp":[…], "num":"…", "den":"…"},…]}` in canonical order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_repr()).expect("polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: PolyRepr =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        let mut p = Self::zero(repr.n);
        for t in repr.terms {
            if t.exp.len() != repr.n {
                return Err(Error::MalformedInput(format!(
                    "exponent vector of length {} in {} variables",
                    t.exp.len(),
                    repr.n
                )));
            }
            p.add_term(Monomial(t.exp), rat_from_pair(&t.num, &t.den)?);
        }
        Ok(p)
    }

    fn to_repr(&self) -> PolyRepr {
        PolyRepr {
            n: self.n,
            terms: self
                .terms()
                .map(|(m, c)| {
                    let [num, den] = rat_to_pair(c);
                    TermRepr { exp: m.0.clone(), num, den }
                })
                .collect(),
        }
    }
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                .collect();
            match (vars.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "({c})*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly[{}]({self})", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x(n: usize, i: usize) -> SparsePoly {
        SparsePoly::var(n, i)
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 3]);
        assert!(a > b && c > a);
    }

    #[test]
    fn arithmetic_cancels() {
        let s = x(2, 0).add(&x(2, 1));
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(&[1, 1]), rat(2, 1));
        assert!(sq.sub(&sq).is_zero());
        assert_eq!(s.pow(3).len(), 4);
        assert_eq!(s.pow(0), SparsePoly::constant(2, rat(1, 1)));
    }

    #[test]
    fn partial_derivatives() {
        let p = x(2, 0).mul(&x(2, 1)).scale(&rat(2, 1));
        assert_eq!(p.partial(0), x(2, 1).scale(&rat(2, 1)));
        // 3x1^2x2 + 3x1x2^2
        let q = SparsePoly::from_terms(2, [(vec![2, 1], rat(3, 1)), (vec![1, 2], rat(3, 1))]);
        let expected = SparsePoly::from_terms(2, [(vec![2, 0], rat(3, 1)), (vec![1, 1], rat(6, 1))]);
        assert_eq!(q.partial(1), expected);
        assert!(x(3, 0).mul(&x(3, 1)).partial(2).is_zero());
    }

    #[test]
    fn evaluation() {
        let p = x(2, 0).mul(&x(2, 1)).scale(&rat(2, 1));
        let pt = [CycNum::one(1), CycNum::from_int(1, -1)];
        assert_eq!(p.evaluate(&pt).unwrap(), CycNum::from_int(1, -2));
        let sq = x(1, 0).pow(2);
        assert_eq!(sq.evaluate(&[CycNum::root_of_unity(4, 1)]).unwrap(), CycNum::from_int(4, -1));
        let mixed = [CycNum::one(4), CycNum::one(8)];
        assert!(matches!(p.evaluate(&mixed), Err(Error::ConductorMismatch { expected: 4, found: 8 })));
        assert!(matches!(p.eval(&[rat(1, 1)]), Err(Error::DimensionMismatch { .. })));
        assert_eq!(p.eval(&[rat(1, 2), rat(3, 1)]).unwrap(), rat(3, 1));
    }

    #[test]
    fn linear_division() {
        let s = SparsePoly::linear(&[rat(1, 1), rat(1, 1)]);
        let p = x(2, 0).mul(&x(2, 0)).sub(&x(2, 1).mul(&x(2, 1)));
        assert_eq!(p.divide_by_linear(&s).unwrap(), Division::Exact(x(2, 0).sub(&x(2, 1))));
        match x(2, 0).pow(2).divide_by_linear(&s).unwrap() {
            Division::NotDivisible { remainder } => assert_eq!(remainder, x(2, 0).pow(2)),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(SparsePoly::zero(2).divide_by_linear(&s).unwrap(), Division::Exact(SparsePoly::zero(2)));
        assert_eq!(p.divide_by_linear(&SparsePoly::zero(2)), Err(Error::NotLinearForm));
        assert_eq!(p.divide_by_linear(&p), Err(Error::NotLinearForm));
    }

    #[test]
    fn division_by_non_unit_linear_form() {
        let s = SparsePoly::linear(&[rat(2, 1), rat(0, 1), rat(-3, 1)]);
        let q = x(3, 0).mul(&x(3, 1)).add(&x(3, 2).pow(2).scale(&rat(5, 7)));
        let p = s.mul(&q);
        assert_eq!(p.divide_by_linear(&s).unwrap(), Division::Exact(q));
    }

    #[test]
    fn json_round_trip_and_order() {
        let p = SparsePoly::from_terms(2, [(vec![1, 0], rat(1, 2)), (vec![1, 2], rat(-3, 1))]);
        let js = p.to_json();
        assert_eq!(
            js,
            r#"{"n":2,"terms":[{"exp":[1,2],"num":"-3","den":"1"},{"exp":[1,0],"num":"1","den":"2"}]}"#
        );
        assert_eq!(SparsePoly::from_json(&js).unwrap(), p);
        assert!(SparsePoly::from_json(r#"{"n":2,"terms":[{"exp":[1],"num":"1","den":"1"}]}"#).is_err());
    }

    #[test]
    fn display() {
        let p = SparsePoly::from_terms(2, [(vec![2, 1], rat(3, 1)), (vec![0, 0], rat(1, 1)), (vec![1, 0], rat(1, 1))]);
        assert_eq!(p.to_string(), "(3)*x1^2*x2 + x1 + 1");
    }
}
