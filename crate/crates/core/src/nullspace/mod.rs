//! Nullvectors of Steiner forms: exact constructions, exact verification, and
//! a numeric search for orders where no construction is known.
//!
//! A nonzero point at which every partial derivative of the form vanishes
//! certifies that the hyperdeterminant of the hypermatrix is zero.

mod completion;
mod search;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{gradient_direct, s_and_g, steiner_form};
use crate::hypermatrix::Hypermatrix;
use crate::scalar::{lift_all, CycNum, Numeric, DEFAULT_PRECISION};
use crate::tree::Tree;
use crate::SCHEMA_VERSION;

pub use completion::{
    complete_nullvector, complete_nullvector_with_precision, completion_coefficients, CandidatePoint, Completion,
    CompletionCandidate, QuadraticCoefficients,
};
pub use search::{numeric_search, numeric_search_with, SearchCandidate, SearchOptions};

/// Outcome of evaluating the gradient of a Steiner form at a point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NullvectorReport {
    pub schema: u32,
    pub k: usize,
    /// Edge list of the tree, when the form came from one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<String>,
    pub point: Vec<CycNum>,
    pub gradient: Vec<CycNum>,
    pub exact_zero: bool,
    /// `max_i |gradient_i|` after embedding into `C`.
    #[serde(rename = "residual")]
    pub embedded_residual: f64,
}

impl NullvectorReport {
    fn new(k: usize, tree: Option<String>, point: Vec<CycNum>, gradient: Vec<CycNum>) -> Self {
        let exact_zero = gradient.iter().all(CycNum::is_zero);
        let embedded_residual =
            gradient.iter().map(|g| g.embed(DEFAULT_PRECISION).modulus()).fold(0.0, f64::max);
        NullvectorReport { schema: SCHEMA_VERSION, k, tree, point, gradient, exact_zero, embedded_residual }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn check_point(n: usize, point: &[CycNum]) -> Result<Vec<CycNum>> {
    if point.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: point.len() });
    }
    if point.iter().all(CycNum::is_zero) {
        return Err(Error::ZeroVector);
    }
    Ok(lift_all(point))
}

/// The vector `y` with `y_u = 1`, `y_v = ζ`, `y_w = -1 - ζ` and zeros
/// elsewhere, where `ζ = exp(πi/(k-1))`, `u` is the lowest-labeled leaf, `w`
/// its neighbor and `v` the lowest-labeled other neighbor of `w`.
pub fn canonical_odd_nullvector(t: &Tree, k: usize) -> Result<Vec<CycNum>> {
    if k % 2 == 0 {
        return Err(Error::EvenOrder(k));
    }
    if k < 3 {
        return Err(Error::InvalidOrder { k, min: 3 });
    }
    if t.n() < 3 {
        return Err(Error::TooSmall { n: t.n(), min: 3 });
    }
    let (u, w, v) = t.leaf_triple().expect("trees on three or more vertices have a leaf triple");
    let m = 2 * k as u64 - 2;
    let zeta = CycNum::root_of_unity(m, 1);
    let mut y = vec![CycNum::zero(m); t.n()];
    y[u] = CycNum::one(m);
    y[w] = -(&CycNum::one(m) + &zeta);
    y[v] = zeta;
    Ok(y)
}

/// Exact gradient of the order-`k` Steiner form of `t` at `point`.
pub fn verify_nullvector(t: &Tree, k: usize, point: &[CycNum]) -> Result<NullvectorReport> {
    let point = check_point(t.n(), point)?;
    let gradient = gradient_direct(t, k, &point)?;
    Ok(NullvectorReport::new(k, Some(t.to_edge_list()), point, gradient))
}

/// Exact gradient of the form of an arbitrary hypermatrix at `point`.
pub fn verify_form_nullvector(h: &Hypermatrix, point: &[CycNum]) -> Result<NullvectorReport> {
    let point = check_point(h.dim(), point)?;
    let p = steiner_form(h);
    let gradient = (0..h.dim()).map(|r| p.partial(r).evaluate(&point)).collect::<Result<Vec<_>>>()?;
    Ok(NullvectorReport::new(h.order(), None, point, gradient))
}

/// Unit vector on the last coordinate, for a hypermatrix whose degenerate
/// entries are all zero.
///
/// Every monomial of such a form has at least `k` distinct variables, so each
/// partial derivative is a sum of monomials in at least two variables and
/// vanishes at a unit vector.
pub fn degenerate_nullvector(h: &Hypermatrix) -> Result<Vec<CycNum>> {
    if let Some(tuple) = h.nonzero_degenerate_entry() {
        return Err(Error::NotDegenerateZeroed(tuple));
    }
    let (k, n) = (h.order(), h.dim());
    if k < 2 {
        return Err(Error::InvalidOrder { k, min: 2 });
    }
    if k == 2 && n >= 2 {
        return Err(Error::OrderTooLow(n));
    }
    let mut y = vec![CycNum::zero(1); n];
    y[n - 1] = CycNum::one(1);
    Ok(y)
}

/// True iff `s` and `g = 3 Σ_{i<j} d(i,j) x_i x_j` both vanish at `point`.
pub fn membership_sg(t: &Tree, point: &[CycNum]) -> Result<bool> {
    if t.n() < 2 {
        return Err(Error::TooSmall { n: t.n(), min: 2 });
    }
    if point.len() != t.n() {
        return Err(Error::DimensionMismatch { expected: t.n(), found: point.len() });
    }
    let (s, g) = s_and_g(t, &lift_all(point));
    Ok(s.is_zero() && g.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::sum_form;

    fn ci(v: i64) -> CycNum {
        CycNum::from_int(4, v)
    }

    #[test]
    fn canonical_examples() {
        let i = CycNum::root_of_unity(4, 1);
        let y = canonical_odd_nullvector(&Tree::path(3), 3).unwrap();
        assert_eq!(y, vec![ci(1), &ci(-1) - &i, i.clone()]);
        let star = canonical_odd_nullvector(&Tree::star(4), 3).unwrap();
        assert_eq!(star, vec![&ci(-1) - &i, ci(1), i, ci(0)]);
        let z8 = CycNum::root_of_unity(8, 1);
        let y5 = canonical_odd_nullvector(&Tree::path(3), 5).unwrap();
        assert_eq!(y5, vec![CycNum::one(8), -(&CycNum::one(8) + &z8), z8]);
        assert_eq!(canonical_odd_nullvector(&Tree::path(2), 3), Err(Error::TooSmall { n: 2, min: 3 }));
        assert_eq!(canonical_odd_nullvector(&Tree::path(4), 4), Err(Error::EvenOrder(4)));
        assert_eq!(canonical_odd_nullvector(&Tree::path(4), 1), Err(Error::InvalidOrder { k: 1, min: 3 }));
    }

    #[test]
    fn canonical_vectors_verify() {
        for k in [3, 5, 7] {
            for n in 3..=6 {
                for seed in 0..3 {
                    let t = Tree::random(n, seed);
                    let y = canonical_odd_nullvector(&t, k).unwrap();
                    let r = verify_nullvector(&t, k, &y).unwrap();
                    assert!(r.exact_zero, "n={n} k={k} seed={seed}");
                    assert!(r.embedded_residual < 1e-30);
                }
            }
        }
    }

    #[test]
    fn non_nullvectors() {
        let t = Tree::path(3);
        let r = verify_nullvector(&t, 3, &[ci(1), ci(1), ci(1)]).unwrap();
        assert!(!r.exact_zero);
        assert!(r.embedded_residual > 1.0);
        for zeta in [CycNum::one(2), CycNum::root_of_unity(2, 1)] {
            let r = verify_nullvector(&Tree::path(2), 3, &[CycNum::one(2), zeta]).unwrap();
            assert!(!r.exact_zero);
        }
        assert_eq!(verify_nullvector(&t, 3, &[ci(0), ci(0), ci(0)]), Err(Error::ZeroVector));
    }

    #[test]
    fn report_json() {
        let t = Tree::path(3);
        let y = canonical_odd_nullvector(&t, 3).unwrap();
        let v: serde_json::Value = serde_json::from_str(&verify_nullvector(&t, 3, &y).unwrap().to_json()).unwrap();
        assert_eq!(v["exact_zero"], true);
        assert_eq!(v["k"], 3);
        assert_eq!(v["tree"], "3\n1 2\n2 3\n");
        assert_eq!(v["point"][0]["m"], 4);
        assert_eq!(v["residual"], 0.0);
        assert_eq!(v["schema"], SCHEMA_VERSION);
    }

    #[test]
    fn degenerate_examples() {
        let p3 = Hypermatrix::build_steiner(&Tree::path(3), 3).unwrap().zero_degenerate();
        let y = degenerate_nullvector(&p3).unwrap();
        assert_eq!(y, vec![CycNum::zero(1), CycNum::zero(1), CycNum::one(1)]);
        assert!(verify_form_nullvector(&p3, &y).unwrap().exact_zero);
        let k2 = Hypermatrix::build_steiner(&Tree::path(2), 3).unwrap().zero_degenerate();
        assert!(verify_form_nullvector(&k2, &degenerate_nullvector(&k2).unwrap()).unwrap().exact_zero);
        let star = Hypermatrix::build_steiner(&Tree::star(4), 3).unwrap().zero_degenerate();
        let y = degenerate_nullvector(&star).unwrap();
        assert_eq!(y[3], CycNum::one(1));
        assert!(verify_form_nullvector(&star, &y).unwrap().exact_zero);
        let raw = Hypermatrix::build_steiner(&Tree::path(3), 3).unwrap();
        assert_eq!(degenerate_nullvector(&raw), Err(Error::NotDegenerateZeroed(vec![0, 0, 1])));
        let d2 = Hypermatrix::build_steiner(&Tree::path(3), 2).unwrap();
        assert_eq!(degenerate_nullvector(&d2), Err(Error::OrderTooLow(3)));
    }

    #[test]
    fn membership_examples() {
        let t = Tree::path(3);
        let y = canonical_odd_nullvector(&t, 3).unwrap();
        assert!(membership_sg(&t, &y).unwrap());
        assert_eq!(sum_form(3).evaluate(&y).unwrap(), ci(0));
        assert!(!membership_sg(&t, &[ci(1), ci(1), ci(1)]).unwrap());
        assert!(!membership_sg(&t, &[ci(1), ci(-1), ci(0)]).unwrap());
        let (_, g) = s_and_g(&t, &[ci(1), ci(-1), ci(0)]);
        assert_eq!(g, ci(-3));
        // mixed conductors are lifted
        let mixed = vec![CycNum::one(1), -(&CycNum::one(4) + &CycNum::root_of_unity(4, 1)), CycNum::root_of_unity(4, 1)];
        assert!(membership_sg(&t, &mixed).unwrap());
    }
}
