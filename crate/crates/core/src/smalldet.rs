//! Hyperdeterminants small enough to write down: order 2 (the determinant)
//! and the 2×2×2 Cayley hyperdeterminant, plus the two-vertex argument for
//! general order.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::steiner_form;
use crate::gp_matrix::{determinant_exact, distance_matrix};
use crate::hypermatrix::Hypermatrix;
use crate::scalar::{CycNum, Rat};
use crate::tree::Tree;

fn cube(h: &Hypermatrix) -> Result<[[[i128; 2]; 2]; 2]> {
    if h.order() != 3 || h.dim() != 2 {
        return Err(Error::WrongShape { k: h.order(), n: h.dim() });
    }
    let mut a = [[[0i128; 2]; 2]; 2];
    for (idx, &e) in h.entries().iter().enumerate() {
        a[idx >> 2][(idx >> 1) & 1][idx & 1] = e as i128;
    }
    Ok(a)
}

/// Cayley's hyperdeterminant of a 2×2×2 array.
pub fn cayley_222(h: &Hypermatrix) -> Result<i128> {
    let a = cube(h)?;
    let [[[a000, a001], [a010, a011]], [[a100, a101], [a110, a111]]] = a;
    let squares = a000 * a000 * a111 * a111
        + a001 * a001 * a110 * a110
        + a010 * a010 * a101 * a101
        + a100 * a100 * a011 * a011;
    let mixed = a000 * a001 * a110 * a111
        + a000 * a010 * a101 * a111
        + a000 * a100 * a011 * a111
        + a001 * a010 * a101 * a110
        + a001 * a100 * a011 * a110
        + a010 * a100 * a011 * a101;
    let cross = a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111;
    Ok(squares - 2 * mixed + 4 * cross)
}

/// The same invariant as the discriminant `b² - 4ac` of the binary quadratic
/// `det(x A_0 + y A_1) = a x² + b xy + c y²` in the first-index slices.
pub fn slice_discriminant_222(h: &Hypermatrix) -> Result<i128> {
    let a = cube(h)?;
    let det = |m: [[i128; 2]; 2]| m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let (s0, s1) = (a[0], a[1]);
    let mixed = [[s0[0][0] + s1[0][0], s0[0][1] + s1[0][1]], [s0[1][0] + s1[1][0], s0[1][1] + s1[1][1]]];
    let qa = det(s0);
    let qc = det(s1);
    let qb = det(mixed) - qa - qc;
    Ok(qb * qb - 4 * qa * qc)
}

/// True iff the two-vertex argument rules out a nonzero gradient zero of the
/// order-`k` form of `K₂`.
///
/// Checks that the form is `(x_1+x_2)^k - x_1^k - x_2^k`, that
/// `(1+ζ)^(k-1) ≠ 1` for every `(k-1)`-th root of unity `ζ`, and that `D_1`
/// restricted to `x_1 = 0` is a nonzero multiple of `x_2^(k-1)`.
pub fn verify_k2_no_nullvector(k: usize) -> Result<bool> {
    if k < 2 {
        return Err(Error::InvalidOrder { k, min: 2 });
    }
    let k2 = Tree::path(2);
    let p = steiner_form(&Hypermatrix::build_steiner(&k2, k)?);
    let (x1, x2) = (crate::SparsePoly::var(2, 0), crate::SparsePoly::var(2, 1));
    let closed = x1.add(&x2).pow(k as u32).sub(&x1.pow(k as u32)).sub(&x2.pow(k as u32));
    if p != closed {
        return Ok(false);
    }
    let m = (k - 1) as u64;
    let one = CycNum::one(m);
    for j in 0..m {
        let zeta = CycNum::root_of_unity(m, j as i64);
        if (&one + &zeta).pow(m) == one {
            return Ok(false);
        }
    }
    let d1 = p.partial(0);
    let mut restricted = d1.terms().filter(|(mono, _)| mono.exps()[0] == 0);
    let only = restricted.next();
    let branch = matches!(only, Some((mono, c)) if mono.exps()[1] == m as u32 && !c.is_zero())
        && restricted.next().is_none();
    Ok(branch)
}

/// A point `(1, ζ)` with `ζ^(k-1) = 1` and `(1+ζ)^(k-1) = 1`, if one exists.
///
/// Such a point zeroes both partials of the `K₂` form; this happens exactly
/// when `6 | k - 1`, with `ζ` a primitive cube root of unity.
pub fn k2_nullvector_witness(k: usize) -> Result<Option<Vec<CycNum>>> {
    if k < 2 {
        return Err(Error::InvalidOrder { k, min: 2 });
    }
    let m = (k - 1) as u64;
    let one = CycNum::one(m);
    Ok((0..m)
        .map(|j| CycNum::root_of_unity(m, j as i64))
        .find(|zeta| (&one + zeta).pow(m) == one)
        .map(|zeta| vec![one.clone(), zeta]))
}

/// The order-2 hyperdeterminant: the determinant of the distance matrix.
pub fn det_order2(t: &Tree) -> Result<Rat> {
    if t.n() < 2 {
        return Err(Error::TooSmall { n: t.n(), min: 2 });
    }
    Ok(determinant_exact(&distance_matrix(t)))
}
