//! Numeric search for nullvectors from random starts.
//!
//! Each restart runs Levenberg-Marquardt on the gradient system
//! `∇p(x) = 0` with the normalisation `‖x‖ = 1` imposed through the
//! linearised constraint `x̄ᵀδ = 0` and a projection back onto the sphere
//! after every step. A double-precision phase is followed by a polish at
//! [`SearchOptions::precision`] bits for candidates that are converging.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::tree_form;
use crate::poly::SparsePoly;
use crate::rng::stream;
use crate::scalar::{CFloat, Numeric, DEFAULT_PRECISION};
use crate::tree::Tree;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    pub max_iterations: usize,
    pub polish_iterations: usize,
    pub precision: usize,
    /// Double-precision residual below which a candidate is polished.
    pub polish_below: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_iterations: 200, polish_iterations: 40, precision: DEFAULT_PRECISION, polish_below: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchCandidate {
    pub restart: usize,
    /// Unit-norm point.
    pub point: Vec<CFloat>,
    /// `max_z |D_z p|` at `point`.
    pub residual: f64,
    /// `residual <= tol`; never a proof of vanishing.
    pub converged: bool,
}

struct System {
    grad: Vec<SparsePoly>,
    /// Upper triangle of the Hessian, row-major.
    hess: Vec<SparsePoly>,
    n: usize,
}

impl System {
    fn new(p: &SparsePoly) -> Self {
        let n = p.n_vars();
        let grad: Vec<SparsePoly> = (0..n).map(|r| p.partial(r)).collect();
        let hess = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).map(|(a, b)| grad[a].partial(b)).collect();
        System { grad, hess, n }
    }

    fn gradient<S: Numeric>(&self, x: &[S]) -> Vec<S> {
        self.grad.iter().map(|g| g.eval(x).expect("point has n coordinates")).collect()
    }

    fn hessian<S: Numeric>(&self, x: &[S]) -> Vec<Vec<S>> {
        let n = self.n;
        let zero = x[0].zero_like();
        let mut h = vec![vec![zero; n]; n];
        let mut it = self.hess.iter();
        for a in 0..n {
            for b in a..n {
                let v = it.next().unwrap().eval(x).expect("point has n coordinates");
                h[b][a] = v.clone();
                h[a][b] = v;
            }
        }
        h
    }
}

fn max_modulus<S: Numeric>(v: &[S]) -> f64 {
    v.iter().map(Numeric::modulus).fold(0.0, f64::max)
}

fn sum_sq<S: Numeric>(v: &[S]) -> f64 {
    v.iter().map(|z| z.modulus().powi(2)).sum()
}

fn normalized<S: Numeric>(x: &[S]) -> Option<Vec<S>> {
    let n2 = x.iter().fold(x[0].zero_like(), |acc, z| acc.plus(&z.times(&z.conj())));
    if n2.is_zero_value() {
        return None;
    }
    let inv = n2.sqrt().recip();
    Some(x.iter().map(|z| z.times(&inv)).collect())
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve<S: Numeric>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].modulus().total_cmp(&a[j][col].modulus()))?;
        if a[piv][col].modulus() == 0.0 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in col + 1..n {
            let f = a[r][col].times(&inv);
            if f.is_zero_value() {
                continue;
            }
            for c in col..n {
                let d = f.times(&a[col][c]);
                a[r][c] = a[r][c].minus(&d);
            }
            let d = f.times(&b[col]);
            b[r] = b[r].minus(&d);
        }
    }
    let mut x = b.clone();
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc.minus(&a[r][c].times(&x[c]));
        }
        x[r] = acc.times(&a[r][r].recip());
    }
    Some(x)
}

/// Levenberg-Marquardt from a unit-norm start. Returns the final point and
/// its residual.
fn refine<S: Numeric>(sys: &System, mut x: Vec<S>, iterations: usize, floor: f64, target: f64) -> (Vec<S>, f64) {
    let n = sys.n;
    let mut f = sys.gradient(&x);
    let mut cost = sum_sq(&f);
    let mut mu = 1e-3;
    for _ in 0..iterations {
        if max_modulus(&f) <= target {
            break;
        }
        let h = sys.hessian(&x);
        // J = [H; x̄ᵀ], R = [F; 0]
        let jcol = |i: usize, a: usize| if i < n { h[i][a].clone() } else { x[a].conj() };
        let mut jtj = vec![vec![x[0].zero_like(); n]; n];
        let mut diag_max: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                let v = (0..=n).fold(x[0].zero_like(), |acc, i| acc.plus(&jcol(i, a).conj().times(&jcol(i, b))));
                if a == b {
                    diag_max = diag_max.max(v.modulus());
                }
                jtj[b][a] = v.conj();
                jtj[a][b] = v;
            }
        }
        let rhs: Vec<S> = (0..n)
            .map(|a| (0..n).fold(x[0].zero_like(), |acc, i| acc.minus(&h[i][a].conj().times(&f[i]))))
            .collect();
        let mut accepted = false;
        while mu < 1e16 {
            let lambda = (mu * cost).max(floor * diag_max.max(1.0));
            let mut sys_m = jtj.clone();
            for (a, row) in sys_m.iter_mut().enumerate() {
                row[a] = row[a].plus(&x[0].from_parts_like(lambda, 0.0));
            }
            let step = solve(sys_m, rhs.clone());
            let trial = step.and_then(|d| normalized(&x.iter().zip(&d).map(|(a, b)| a.plus(b)).collect::<Vec<_>>()));
            if let Some(trial) = trial {
                let tf = sys.gradient(&trial);
                let tc = sum_sq(&tf);
                if tc < cost {
                    x = trial;
                    f = tf;
                    cost = tc;
                    mu = (mu / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
            }
            mu *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    let r = max_modulus(&f);
    (x, r)
}

pub fn numeric_search(t: &Tree, k: usize, seed: u64, restarts: usize, tol: f64) -> Result<Vec<SearchCandidate>> {
    numeric_search_with(t, k, seed, restarts, tol, &SearchOptions::default())
}

/// Candidates from `restarts` independent starts, sorted by residual.
///
/// Restart `i` draws its start from PRNG stream `i + 1` of `seed`, so the
/// output does not depend on thread scheduling.
pub fn numeric_search_with(
    t: &Tree,
    k: usize,
    seed: u64,
    restarts: usize,
    tol: f64,
    opts: &SearchOptions,
) -> Result<Vec<SearchCandidate>> {
    if k < 2 {
        return Err(Error::InvalidOrder { k, min: 2 });
    }
    let sys = System::new(&tree_form(t, k)?);
    let n = t.n();
    let prec = opts.precision;
    let mut out: Vec<SearchCandidate> = (0..restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = stream(seed, restart as u64 + 1);
            let start: Vec<Complex64> =
                (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let start = normalized(&start).unwrap_or_else(|| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[0] = Complex64::new(1.0, 0.0);
                e
            });
            let (x, r) = refine(&sys, start, opts.max_iterations, 1e-15, 1e-14);
            let xf: Vec<CFloat> = x.iter().map(|z| CFloat::from_f64(z.re, z.im, prec)).collect();
            let (point, residual) = if r < opts.polish_below && opts.polish_iterations > 0 {
                let xf = normalized(&xf).unwrap_or(xf);
                let eps = 2f64.powi(8 - prec as i32);
                let (p, rp) = refine(&sys, xf, opts.polish_iterations, eps, eps);
                if rp <= r {
                    (p, rp)
                } else {
                    let xf: Vec<CFloat> = x.iter().map(|z| CFloat::from_f64(z.re, z.im, prec)).collect();
                    let rf = max_modulus(&sys.gradient(&xf));
                    (xf, rf)
                }
            } else {
                let rf = max_modulus(&sys.gradient(&xf));
                (xf, rf)
            };
            SearchCandidate { restart, point, residual, converged: residual <= tol }
        })
        .collect();
    out.sort_by(|a, b| a.residual.total_cmp(&b.residual).then(a.restart.cmp(&b.restart)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_order_three_converges() {
        let c = numeric_search(&Tree::path(3), 3, 1, 8, 1e-10).unwrap();
        assert_eq!(c.len(), 8);
        assert!(c[0].residual <= 1e-10, "{}", c[0].residual);
        assert!(c[0].converged);
        let norm: f64 = c[0].point.iter().map(|z| z.modulus().powi(2)).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(c.windows(2).all(|w| w[0].residual <= w[1].residual));
    }

    #[test]
    fn no_nullvector_for_order_two() {
        let c = numeric_search(&Tree::path(3), 2, 1, 8, 1e-10).unwrap();
        assert!(c[0].residual > 1e-3, "{}", c[0].residual);
        assert!(!c[0].converged);
    }

    #[test]
    fn deterministic_and_empty() {
        let a = numeric_search(&Tree::path(2), 4, 5, 6, 1e-10).unwrap();
        let b = numeric_search(&Tree::path(2), 4, 5, 6, 1e-10).unwrap();
        assert_eq!(a, b);
        assert!(numeric_search(&Tree::path(3), 3, 0, 0, 1e-10).unwrap().is_empty());
        assert!(numeric_search(&Tree::path(3), 1, 0, 1, 1e-10).is_err());
    }

    #[test]
    fn solver() {
        let a = vec![vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)], vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0)]];
        let x = solve(a, vec![Complex64::new(4.0, 0.0), Complex64::new(2.0, 0.0)]).unwrap();
        assert!((x[0] - Complex64::new(1.0, -1.0)).norm() < 1e-15);
        assert!((x[1] - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }
}
