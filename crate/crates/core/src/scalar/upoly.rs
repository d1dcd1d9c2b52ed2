//! Dense univariate polynomials over `Rat`, coefficients in ascending degree.

use num_traits::Zero;

use super::Rat;

pub(crate) fn trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero and trimmed.
pub(crate) fn divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let lead = &b[db];
    let mut q = vec![Rat::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = &r[r.len() - 1] / lead;
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &c * y;
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Inverse of `a` modulo the irreducible `modulus`, or `None` when `a ≡ 0`.
pub(crate) fn inverse_mod(a: &[Rat], modulus: &[Rat]) -> Option<Vec<Rat>> {
    let (_, a) = divrem(a, modulus);
    if a.is_empty() {
        return None;
    }
    let (mut r0, mut r1) = (modulus.to_vec(), a);
    let (mut s0, mut s1): (Vec<Rat>, Vec<Rat>) = (Vec::new(), vec![Rat::from_integer(1.into())]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant because the modulus is irreducible.
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    let (_, s) = divrem(&s0, modulus);
    Some(s.into_iter().map(|x| x / &c).collect())
}
