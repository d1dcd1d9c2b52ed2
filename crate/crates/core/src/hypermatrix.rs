//! Dense order-`k` cubical hypermatrices of Steiner distances.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::Tree;

/// Default cap on the number of stored entries (`n^k`).
pub const DEFAULT_ENTRY_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    FlatText,
}

/// Order-`k`, dimension-`n` integer array in row-major (lexicographic index) layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypermatrix {
    k: usize,
    n: usize,
    entries: Vec<i64>,
}

/// Non-decreasing index tuples of length `k` over `0..n`, in lexicographic order.
pub fn multisets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur = if n == 0 && k > 0 { None } else { Some(vec![0; k]) };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let next = cur.as_mut().unwrap();
        match (0..k).rev().find(|&i| next[i] + 1 < n) {
            Some(i) => {
                let v = next[i] + 1;
                next[i..].iter_mut().for_each(|x| *x = v);
            }
            None => cur = None,
        }
        Some(out)
    })
}

fn entry_count(n: usize, k: usize, budget: u64) -> Result<usize> {
    let requested = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if requested > budget as u128 {
        return Err(Error::BudgetExceeded { requested, budget });
    }
    Ok(requested as usize)
}

impl Hypermatrix {
    pub fn new(k: usize, n: usize, entries: Vec<i64>) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::MalformedInput(format!("order {k} and dimension {n} must be positive")));
        }
        let expected = (n as u128).checked_pow(k as u32);
        if expected != Some(entries.len() as u128) {
            return Err(Error::MalformedInput(format!(
                "{} entries for order {k} dimension {n}",
                entries.len()
            )));
        }
        Ok(Hypermatrix { k, n, entries })
    }

    pub fn zeros(k: usize, n: usize) -> Self {
        Hypermatrix { k, n, entries: vec![0; n.pow(k as u32)] }
    }

    /// Steiner `k`-matrix of `t` under [`DEFAULT_ENTRY_BUDGET`].
    pub fn build_steiner(t: &Tree, k: usize) -> Result<Self> {
        Self::build_steiner_with_budget(t, k, DEFAULT_ENTRY_BUDGET)
    }

    /// Steiner `k`-matrix; each of the `C(n+k-1, k)` index multisets is
    /// evaluated once and broadcast to its permutations.
    pub fn build_steiner_with_budget(t: &Tree, k: usize, budget: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder { k, min: 2 });
        }
        let n = t.n();
        let total = entry_count(n, k, budget)?;
        let memo: HashMap<Vec<usize>, i64> = multisets(n, k)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|m| {
                let d = t.steiner_distance_unchecked(&m) as i64;
                (m, d)
            })
            .collect();
        let mut entries = vec![0i64; total];
        let chunk = n.max(1);
        entries.par_chunks_mut(chunk).enumerate().for_each(|(row, slots)| {
            let mut tuple = tuple_of(n, k, row * chunk);
            for (last, slot) in slots.iter_mut().enumerate() {
                tuple[k - 1] = last;
                let mut key = tuple.clone();
                key.sort_unstable();
                *slot = memo[&key];
            }
        });
        Ok(Hypermatrix { k, n, entries })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.k);
        tuple.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn get(&self, tuple: &[usize]) -> i64 {
        self.entries[self.index_of(tuple)]
    }

    pub fn tuple_of(&self, index: usize) -> Vec<usize> {
        tuple_of(self.n, self.k, index)
    }

    /// Copy with every entry whose index tuple repeats a label set to zero.
    pub fn zero_degenerate(&self) -> Self {
        let mut out = self.clone();
        for (idx, e) in out.entries.iter_mut().enumerate() {
            if is_degenerate(&tuple_of(self.n, self.k, idx)) {
                *e = 0;
            }
        }
        out
    }

    /// First index tuple with a repeated label and a nonzero entry, if any.
    pub fn nonzero_degenerate_entry(&self) -> Option<Vec<usize>> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(idx, _)| tuple_of(self.n, self.k, idx))
            .find(|t| is_degenerate(t))
    }

    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Json => self.to_json(),
            ExportFormat::FlatText => self.to_flat_text(),
        }
    }

    /// `{"k":…,"n":…,"entries":[…]}`, row-major.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypermatrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Hypermatrix =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        Self::new(raw.k, raw.n, raw.entries)
    }

    /// Header line `k n`, then one entry per line, row-major.
    pub fn to_flat_text(&self) -> String {
        let mut out = format!("{} {}\n", self.k, self.n);
        for e in &self.entries {
            let _ = writeln!(out, "{e}");
        }
        out
    }

    pub fn from_flat_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::MalformedInput("empty document".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::MalformedInput(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [k, n] = dims[..] else {
            return Err(Error::MalformedInput(format!("bad header {header:?}")));
        };
        let entries = lines
            .map(|l| l.parse().map_err(|_| Error::MalformedInput(format!("bad entry {l:?}"))))
            .collect::<Result<Vec<i64>>>()?;
        Self::new(k, n, entries)
    }
}

fn tuple_of(n: usize, k: usize, mut index: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for slot in t.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    t
}

fn is_degenerate(tuple: &[usize]) -> bool {
    let mut s = tuple.to_vec();
    s.sort_unstable();
    s.windows(2).any(|w| w[0] == w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        // C(n+k-1, k)
        assert_eq!(multisets(3, 2).count(), 6);
        assert_eq!(multisets(4, 3).count(), 20);
        assert_eq!(multisets(1, 5).count(), 1);
        assert_eq!(multisets(3, 0).count(), 1);
        assert!(multisets(3, 3).all(|m| m.windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn k2_tree_order_three() {
        let h = Hypermatrix::build_steiner(&Tree::path(2), 3).unwrap();
        assert_eq!(h.entries(), &[0, 1, 1, 1, 1, 1, 1, 0]);
    }

    #[test]
    fn path_distance_matrix() {
        let h = Hypermatrix::build_steiner(&Tree::path(3), 2).unwrap();
        assert_eq!(h.entries(), &[0, 1, 2, 1, 0, 1, 2, 1, 0]);
        let h3 = Hypermatrix::build_steiner(&Tree::path(3), 3).unwrap();
        assert_eq!(h3.get(&[0, 1, 2]), 2);
        assert_eq!(h3.get(&[2, 0, 2]), 2);
    }

    #[test]
    fn degenerate_zeroing() {
        let k2 = Hypermatrix::build_steiner(&Tree::path(2), 3).unwrap();
        assert!(k2.zero_degenerate().entries().iter().all(|&e| e == 0));
        let p2 = Hypermatrix::build_steiner(&Tree::path(3), 2).unwrap();
        assert_eq!(p2.zero_degenerate(), p2);
        let p3 = Hypermatrix::build_steiner(&Tree::path(3), 3).unwrap().zero_degenerate();
        assert_eq!(p3.get(&[0, 0, 1]), 0);
        assert_eq!(p3.get(&[0, 1, 2]), 2);
        assert_eq!(p3.nonzero_degenerate_entry(), None);
        assert_eq!(k2.nonzero_degenerate_entry(), Some(vec![0, 0, 1]));
    }

    #[test]
    fn budget_and_order_checks() {
        let t = Tree::path(10);
        assert!(matches!(
            Hypermatrix::build_steiner_with_budget(&t, 4, 9_999),
            Err(Error::BudgetExceeded { requested: 10_000, budget: 9_999 })
        ));
        assert!(Hypermatrix::build_steiner_with_budget(&t, 4, 10_000).is_ok());
        assert_eq!(Hypermatrix::build_steiner(&t, 1), Err(Error::InvalidOrder { k: 1, min: 2 }));
        assert!(matches!(
            Hypermatrix::build_steiner(&Tree::path(1000), 40),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn export_formats() {
        let k2 = Hypermatrix::build_steiner(&Tree::path(2), 2).unwrap();
        assert_eq!(k2.to_json(), r#"{"k":2,"n":2,"entries":[0,1,1,0]}"#);
        let single = Hypermatrix::build_steiner(&Tree::path(1), 3).unwrap();
        assert_eq!(single.to_json(), r#"{"k":3,"n":1,"entries":[0]}"#);
        let p = Hypermatrix::build_steiner(&Tree::path(3), 2).unwrap();
        assert_eq!(p.export(ExportFormat::FlatText), "2 3\n0\n1\n2\n1\n0\n1\n2\n1\n0\n");
        assert_eq!(Hypermatrix::from_flat_text(&p.to_flat_text()).unwrap(), p);
        assert_eq!(Hypermatrix::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn import_rejects_bad_shapes() {
        assert!(Hypermatrix::from_json(r#"{"k":2,"n":2,"entries":[0,1,1]}"#).is_err());
        assert!(Hypermatrix::from_flat_text("2 2\n0\n1\n").is_err());
        assert!(Hypermatrix::from_flat_text("2\n0\n").is_err());
        assert!(Hypermatrix::from_flat_text("2 1\nx\n").is_err());
    }
}
