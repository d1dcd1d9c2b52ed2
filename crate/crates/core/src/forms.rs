//! The Steiner `k`-form of a tree, its gradient, and the exact order-3
//! polynomial identities relating it to `s = Σ x_r` and
//! `g = 3 Σ_{i<j} d(i,j) x_i x_j`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypermatrix::{multisets, Hypermatrix};
use crate::poly::{Division, SparsePoly};
use crate::scalar::{rat, CycNum, Rat, Scalar};
use crate::tree::Tree;

/// A point of `Q(ζ_m)^n` together with a polynomial value there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub point: Vec<CycNum>,
    pub value: CycNum,
}

pub fn evaluation(p: &SparsePoly, point: &[CycNum]) -> Result<Evaluation> {
    Ok(Evaluation { point: point.to_vec(), value: p.evaluate(point)? })
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `len! / Π c!` for the multiplicities `c` of a sorted tuple.
fn multinomial(sorted: &[usize]) -> BigInt {
    let mut out = factorial(sorted.len());
    let mut run = 1;
    for i in 1..=sorted.len() {
        if i < sorted.len() && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            out /= factorial(run);
            run = 1;
        }
    }
    out
}

fn exponents(n: usize, tuple: &[usize]) -> Vec<u32> {
    let mut e = vec![0; n];
    for &i in tuple {
        e[i] += 1;
    }
    e
}

/// `f_M(x) = Σ_{i_1…i_k} M_{i_1…i_k} x_{i_1}⋯x_{i_k}`, collected per monomial.
pub fn steiner_form(h: &Hypermatrix) -> SparsePoly {
    let n = h.dim();
    let mut sums: HashMap<Vec<u32>, i128> = HashMap::new();
    for (idx, &entry) in h.entries().iter().enumerate() {
        if entry != 0 {
            *sums.entry(exponents(n, &h.tuple_of(idx))).or_default() += entry as i128;
        }
    }
    SparsePoly::from_terms(n, sums.into_iter().map(|(e, c)| (e, Rat::from_integer(BigInt::from(c)))))
}

/// The order-`k` Steiner form of `t`, built per index multiset without
/// materialising the hypermatrix.
pub fn tree_form(t: &Tree, k: usize) -> Result<SparsePoly> {
    if k < 2 {
        return Err(Error::InvalidOrder { k, min: 2 });
    }
    let n = t.n();
    Ok(SparsePoly::from_terms(
        n,
        multisets(n, k).filter_map(|m| {
            let d = t.steiner_distance_unchecked(&m);
            (d != 0).then(|| (exponents(n, &m), Rat::from_integer(multinomial(&m) * BigInt::from(d))))
        }),
    ))
}

/// The order-3 Steiner form of `t`.
pub fn cubic_form(t: &Tree) -> Result<SparsePoly> {
    Ok(steiner_form(&Hypermatrix::build_steiner(t, 3)?))
}

/// Formal gradient `(D_1 p, …, D_n p)`.
pub fn gradient_polys(p: &SparsePoly) -> Vec<SparsePoly> {
    (0..p.n_vars()).map(|r| p.partial(r)).collect()
}

/// `s = Σ_r x_r`.
pub fn sum_form(n: usize) -> SparsePoly {
    SparsePoly::linear(&vec![Rat::one(); n])
}

/// `g = 3 Σ_{i<j} d(i,j) x_i x_j`.
pub fn pair_form(t: &Tree) -> SparsePoly {
    let n = t.n();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut e = vec![0; n];
            e[i] = 1;
            e[j] = 1;
            terms.push((e, Rat::from_integer(BigInt::from(3 * t.distance(i, j)))));
        }
    }
    SparsePoly::from_terms(n, terms)
}

/// Gradient of the order-`k` Steiner form at `point`, without building the form.
///
/// `D_z p(x) = k · Σ_m binom(k-1; m) · d({z} ∪ m) · x^m`, the sum running over
/// multisets `m` of size `k - 1` drawn from the support of `x`.
pub fn gradient_direct<S: Scalar>(t: &Tree, k: usize, point: &[S]) -> Result<Vec<S>> {
    if k < 2 {
        return Err(Error::InvalidOrder { k, min: 2 });
    }
    let n = t.n();
    if point.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: point.len() });
    }
    let zero = point[0].zero_like();
    let support: Vec<usize> = (0..n).filter(|&i| !point[i].is_zero_value()).collect();
    if support.is_empty() {
        return Ok(vec![zero; n]);
    }
    let powers: Vec<Vec<S>> = support
        .iter()
        .map(|&i| {
            let mut row = vec![point[i].one_like()];
            for e in 1..k {
                row.push(row[e - 1].times(&point[i]));
            }
            row
        })
        .collect();
    // (vertices of m, weighted monomial value binom(k-1; m) · x^m)
    let weighted: Vec<(Vec<usize>, S)> = multisets(support.len(), k - 1)
        .map(|m| {
            let mut value = zero.one_like().scaled(&Rat::from_integer(multinomial(&m)));
            let mut run = 1;
            for i in 1..=m.len() {
                if i < m.len() && m[i] == m[i - 1] {
                    run += 1;
                } else {
                    value = value.times(&powers[m[i - 1]][run]);
                    run = 1;
                }
            }
            let mut verts: Vec<usize> = m.iter().map(|&j| support[j]).collect();
            verts.dedup();
            (verts, value)
        })
        .collect();
    let mut grad = Vec::with_capacity(n);
    let mut set = Vec::with_capacity(k);
    for z in 0..n {
        // Bucket by Steiner distance so each distinct distance costs one scaling.
        let mut buckets: Vec<Option<S>> = vec![None; n];
        for (verts, value) in &weighted {
            set.clear();
            set.extend_from_slice(verts);
            set.push(z);
            let d = t.steiner_distance_unchecked(&set);
            if d == 0 {
                continue;
            }
            buckets[d] = Some(match buckets[d].take() {
                Some(acc) => acc.plus(value),
                None => value.clone(),
            });
        }
        let mut total = zero.clone();
        for (d, b) in buckets.into_iter().enumerate() {
            if let Some(b) = b {
                total = total.plus(&b.scaled_int(d as i64));
            }
        }
        grad.push(total.scaled_int(k as i64));
    }
    Ok(grad)
}

fn require_n(t: &Tree, min: usize) -> Result<()> {
    if t.n() < min {
        return Err(Error::TooSmall { n: t.n(), min });
    }
    Ok(())
}

/// True iff `p^{(3)} = s · g` both by exact division and by expansion.
pub fn verify_factorization(t: &Tree) -> Result<bool> {
    require_n(t, 2)?;
    let p = cubic_form(t)?;
    let s = sum_form(t.n());
    let g = pair_form(t);
    let divides = matches!(p.divide_by_linear(&s)?, Division::Exact(q) if q == g);
    Ok(divides && s.mul(&g) == p)
}

/// True iff `Σ_r x_r D_r p = 3 s g` for the order-3 form.
pub fn verify_euler_identity(t: &Tree) -> Result<bool> {
    require_n(t, 2)?;
    let n = t.n();
    let p = cubic_form(t)?;
    let lhs = (0..n).fold(SparsePoly::zero(n), |acc, r| acc.add(&SparsePoly::var(n, r).mul(&p.partial(r))));
    let rhs = sum_form(n).mul(&pair_form(t)).scale(&rat(3, 1));
    Ok(lhs == rhs)
}

/// Degree cofactors `e_r = ((2 - d_r) s - (2/3) x_r) / (n - 1)`.
///
/// These satisfy `Σ_r e_r D_r p = 3 s³`; see [`s3_cofactors`] for the
/// normalised version.
pub fn degree_cofactors(t: &Tree) -> Result<Vec<SparsePoly>> {
    require_n(t, 2)?;
    let n = t.n();
    let s = sum_form(n);
    let inv = rat(1, n as i64 - 1);
    Ok((0..n)
        .map(|r| {
            let a = s.scale(&rat(2 - t.degree(r) as i64, 1));
            let b = SparsePoly::var(n, r).scale(&rat(2, 3));
            a.sub(&b).scale(&inv)
        })
        .collect())
}

/// Cofactors `f_r = e_r / 3` with `s³ = Σ_r f_r D_r p`.
pub fn s3_cofactors(t: &Tree) -> Result<Vec<SparsePoly>> {
    Ok(degree_cofactors(t)?.iter().map(|e| e.scale(&rat(1, 3))).collect())
}

/// `Σ_r c_r D_r p` for the order-3 form of `t`.
pub fn combine_with_gradient(t: &Tree, cofactors: &[SparsePoly]) -> Result<SparsePoly> {
    let n = t.n();
    if cofactors.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: cofactors.len() });
    }
    let p = cubic_form(t)?;
    Ok(cofactors.iter().enumerate().fold(SparsePoly::zero(n), |acc, (r, c)| acc.add(&c.mul(&p.partial(r)))))
}

/// True iff `s³ = Σ_r f_r · D_r p` exactly, with the cofactors of [`s3_cofactors`].
pub fn verify_s3_decomposition(t: &Tree) -> Result<bool> {
    let f = s3_cofactors(t)?;
    Ok(combine_with_gradient(t, &f)? == sum_form(t.n()).pow(3))
}

/// True iff no generator `D_r p` of the order-3 Steiner ideal is divisible by `s`.
pub fn verify_not_divisible(t: &Tree) -> Result<bool> {
    require_n(t, 2)?;
    let p = cubic_form(t)?;
    let s = sum_form(t.n());
    for r in 0..t.n() {
        if let Division::Exact(_) = p.partial(r).divide_by_linear(&s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact value of `Σ_r x_r` and `g` at a point.
pub(crate) fn s_and_g<S: Scalar>(t: &Tree, point: &[S]) -> (S, S) {
    let zero = point[0].zero_like();
    let s = point.iter().fold(zero.clone(), |acc, x| acc.plus(x));
    let mut g = zero;
    for i in 0..t.n() {
        if point[i].is_zero_value() {
            continue;
        }
        for j in i + 1..t.n() {
            if !point[j].is_zero_value() {
                g = g.plus(&point[i].times(&point[j]).scaled_int(3 * t.distance(i, j) as i64));
            }
        }
    }
    (s, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(v: i64) -> CycNum {
        CycNum::from_int(4, v)
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[0, 0, 1]), BigInt::from(3));
        assert_eq!(multinomial(&[0, 1, 2]), BigInt::from(6));
        assert_eq!(multinomial(&[2, 2, 2, 2]), BigInt::from(1));
        assert_eq!(multinomial(&[]), BigInt::from(1));
    }

    #[test]
    fn small_forms() {
        let k2 = Tree::path(2);
        let p2 = steiner_form(&Hypermatrix::build_steiner(&k2, 2).unwrap());
        assert_eq!(p2, SparsePoly::from_terms(2, [(vec![1, 1], rat(2, 1))]));
        let p3 = steiner_form(&Hypermatrix::build_steiner(&k2, 3).unwrap());
        let expected = SparsePoly::from_terms(2, [(vec![2, 1], rat(3, 1)), (vec![1, 2], rat(3, 1))]);
        assert_eq!(p3, expected);
        // (x1+x2)^3 - x1^3 - x2^3
        let s = sum_form(2);
        let alt = s.pow(3).sub(&SparsePoly::var(2, 0).pow(3)).sub(&SparsePoly::var(2, 1).pow(3));
        assert_eq!(p3, alt);
        assert!(steiner_form(&Hypermatrix::zeros(3, 4)).is_zero());
        for (n, k) in [(2, 3), (4, 3), (5, 4), (3, 5)] {
            let t = Tree::random(n, 9);
            assert_eq!(tree_form(&t, k).unwrap(), steiner_form(&Hypermatrix::build_steiner(&t, k).unwrap()));
        }
    }

    #[test]
    fn direct_gradient_examples() {
        let p3 = Tree::path(3);
        let i = CycNum::root_of_unity(4, 1);
        let y = [ci(1), &ci(-1) - &i, i.clone()];
        assert!(gradient_direct(&p3, 3, &y).unwrap().iter().all(CycNum::is_zero));
        let g = gradient_direct(&Tree::path(2), 3, &[ci(1), ci(1)]).unwrap();
        assert_eq!(g, vec![ci(9), ci(9)]);
        let z = gradient_direct(&Tree::random(6, 3), 4, &vec![ci(0); 6]).unwrap();
        assert!(z.iter().all(CycNum::is_zero));
    }

    #[test]
    fn direct_gradient_errors() {
        let t = Tree::path(3);
        assert!(matches!(gradient_direct(&t, 3, &[rat(1, 1)]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(gradient_direct(&t, 1, &vec![rat(1, 1); 3]), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn division_recovers_pair_form() {
        let t = Tree::path(3);
        let p = cubic_form(&t).unwrap();
        // 3(x1x2 + x2x3 + 2x1x3)
        let g = SparsePoly::from_terms(
            3,
            [(vec![1, 1, 0], rat(3, 1)), (vec![0, 1, 1], rat(3, 1)), (vec![1, 0, 1], rat(6, 1))],
        );
        assert_eq!(pair_form(&t), g);
        assert_eq!(p.divide_by_linear(&sum_form(3)).unwrap(), Division::Exact(g));
    }

    #[test]
    fn identities_on_named_trees() {
        for t in [Tree::path(3), Tree::star(4), Tree::star(5), Tree::random(7, 11), Tree::path(2)] {
            assert!(verify_factorization(&t).unwrap());
            assert!(verify_euler_identity(&t).unwrap());
            assert!(verify_s3_decomposition(&t).unwrap());
            let s3 = sum_form(t.n()).pow(3);
            let image = combine_with_gradient(&t, &degree_cofactors(&t).unwrap()).unwrap();
            assert_eq!(image, s3.scale(&rat(3, 1)));
            assert!(verify_not_divisible(&t).unwrap());
        }
        assert_eq!(verify_euler_identity(&Tree::path(1)), Err(Error::TooSmall { n: 1, min: 2 }));
    }

    #[test]
    fn wrong_cofactors_are_rejected() {
        // dropping the x_r correction breaks the identity
        let t = Tree::star(4);
        let p = cubic_form(&t).unwrap();
        let s = sum_form(4);
        let rhs = (0..4).fold(SparsePoly::zero(4), |acc, r| {
            let f = s.scale(&rat(2 - t.degree(r) as i64, 9));
            acc.add(&f.mul(&p.partial(r)))
        });
        assert_ne!(rhs, s.pow(3));
    }

    #[test]
    fn evaluation_record() {
        let e = evaluation(&sum_form(2), &[ci(2), ci(-5)]).unwrap();
        assert_eq!(e.value, ci(-3));
    }
}
