//! Exact order-2 matrix algebra for tree distance matrices: determinant,
//! closed-form inverse and the row vector `c` with `c D = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{rat, rat_from_pair, rat_to_pair, Rat};
use crate::tree::Tree;

/// Square matrix of rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(n: usize) -> Self {
        RatMatrix { n, data: vec![Rat::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::MalformedInput(format!("row of length {} in a {n}x{n} matrix", bad.len())));
        }
        Ok(RatMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let data = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        RatMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[Rat]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        Ok(Self::from_fn(n, |i, j| (0..n).map(|l| self.get(i, l) * other.get(l, j)).sum()))
    }

    /// Row vector times matrix, `y M`.
    pub fn left_mul(&self, y: &[Rat]) -> Result<Vec<Rat>> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: y.len() });
        }
        Ok((0..self.n).map(|j| (0..self.n).map(|i| &y[i] * self.get(i, j)).sum()).collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    ///
    /// Each row is first scaled to integers by the lcm of its denominators;
    /// the scaling is divided back out at the end.
    pub fn determinant_exact(&self) -> Rat {
        let n = self.n;
        if n == 0 {
            return Rat::one();
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = self
            .rows()
            .into_iter()
            .map(|row| {
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &l;
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Rat::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let det = &a[n - 1][n - 1] * BigInt::from(sign);
        Rat::new(det, scale)
    }

    /// Solve `y M = b` by Gauss-Jordan elimination over `Q`; `None` if singular.
    pub fn solve_left(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        let n = self.n;
        if b.len() != n {
            return None;
        }
        // y M = b  ⇔  Mᵀ yᵀ = bᵀ
        let mut aug: Vec<Vec<Rat>> =
            (0..n).map(|i| (0..n).map(|j| self.get(j, i).clone()).chain([b[i].clone()]).collect()).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, piv);
            let inv = aug[col][col].recip();
            aug[col].iter_mut().for_each(|x| *x *= &inv);
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..=n {
                        let d = &f * &aug[col][c];
                        aug[r][c] -= d;
                    }
                }
            }
        }
        Some(aug.into_iter().map(|row| row[n].clone()).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[String; 2]>> =
            self.rows().iter().map(|r| r.iter().map(rat_to_pair).collect()).collect();
        rows.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<Vec<[String; 2]>> = Vec::deserialize(de)?;
        let rows = raw
            .iter()
            .map(|r| r.iter().map(|[a, b]| rat_from_pair(a, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        RatMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

fn require_n(t: &Tree, min: usize) -> Result<()> {
    if t.n() < min {
        return Err(Error::TooSmall { n: t.n(), min });
    }
    Ok(())
}

pub fn distance_matrix(t: &Tree) -> RatMatrix {
    RatMatrix::from_fn(t.n(), |i, j| Rat::from_integer(t.distance(i, j).into()))
}

pub fn determinant_exact(m: &RatMatrix) -> Rat {
    m.determinant_exact()
}

/// `-(n-1)(-2)^(n-2)`.
pub fn graham_pollak_value(n: usize) -> Rat {
    assert!(n >= 2);
    let p = BigInt::from(-2).pow(n as u32 - 2);
    Rat::from_integer(-(BigInt::from(n - 1) * p))
}

/// Inverse distance matrix from degrees and adjacency:
/// `(2-d_i)(2-d_j) / (2(n-1))`, minus `d_i/2` on the diagonal, plus `a_ij/2` off it.
pub fn gl_inverse(t: &Tree) -> Result<RatMatrix> {
    require_n(t, 2)?;
    let n = t.n();
    let d: Vec<i64> = t.degrees().into_iter().map(|x| x as i64).collect();
    Ok(RatMatrix::from_fn(n, |i, j| {
        let base = rat((2 - d[i]) * (2 - d[j]), 2 * (n as i64 - 1));
        if i == j {
            base - rat(d[i], 2)
        } else if t.is_adjacent(i, j) {
            base + rat(1, 2)
        } else {
            base
        }
    }))
}

/// `c_r = (2 - d_r) / (n - 1)`.
pub fn c_coefficients(t: &Tree) -> Result<Vec<Rat>> {
    require_n(t, 2)?;
    let n = t.n() as i64;
    Ok(t.degrees().into_iter().map(|d| rat(2 - d as i64, n - 1)).collect())
}
