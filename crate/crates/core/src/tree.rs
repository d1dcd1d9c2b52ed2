//! Labeled trees with constant-time LCA and Steiner distance queries.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

/// Largest tree accepted by the exhaustive Steiner oracle.
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// A tree on vertices `0..n`, rooted at vertex 0 for LCA purposes.
///
/// Text formats use labels `1..=n`; the Rust API is 0-based throughout.
#[derive(Clone, Debug)]
pub struct Tree {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    depth: Vec<usize>,
    first: Vec<usize>,
    // sparse[j][i] = shallowest vertex among euler[i .. i + 2^j]
    sparse: Vec<Vec<usize>>,
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Tree {}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Tree {
    /// Builds and validates a tree from 0-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotATree("a tree needs at least one vertex".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!("{} edges for {n} vertices", edges.len())));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        let mut adj = vec![Vec::new(); n];
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::NotATree(format!("self-loop at {}", u + 1)));
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return Err(Error::NotATree(format!("edge {} {} closes a cycle", u + 1, v + 1)));
            }
            parent[ru] = rv;
            adj[u].push(v);
            adj[v].push(u);
            norm.push((u.min(v), u.max(v)));
        }
        // n-1 acyclic edges on n vertices are necessarily connected.
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Self::index(n, norm, adj))
    }

    fn index(n: usize, edges: Vec<(usize, usize)>, adj: Vec<Vec<usize>>) -> Self {
        let mut depth = vec![0; n];
        let mut first = vec![usize::MAX; n];
        let mut euler = Vec::with_capacity(2 * n - 1);
        // iterative DFS: (vertex, parent, next neighbor index)
        let mut stack = vec![(0usize, usize::MAX, 0usize)];
        first[0] = 0;
        euler.push(0);
        while let Some(&mut (v, p, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if w == p {
                    continue;
                }
                depth[w] = depth[v] + 1;
                first[w] = euler.len();
                euler.push(w);
                stack.push((w, v, 0));
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    euler.push(u);
                }
            }
        }
        let len = euler.len();
        let mut sparse = vec![euler];
        let mut span = 1;
        while 2 * span <= len {
            let prev = sparse.last().unwrap();
            let next: Vec<usize> = (0..=len - 2 * span)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + span]);
                    if depth[a] <= depth[b] { a } else { b }
                })
                .collect();
            sparse.push(next);
            span *= 2;
        }
        Tree { n, edges, adj, depth, first, sparse }
    }

    /// Parses the edge-list format: a line `n`, then `n - 1` lines `u v` with 1-based labels.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::MalformedInput("empty document".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::MalformedInput(format!("bad vertex count {header:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::MalformedInput(format!("expected `u v`, got {line:?}")));
            }
            let mut ends = [0usize; 2];
            for (slot, tok) in ends.iter_mut().zip(&toks) {
                let label: usize = tok
                    .parse()
                    .map_err(|_| Error::MalformedInput(format!("bad label {tok:?}")))?;
                if label == 0 || label > n {
                    return Err(Error::MalformedInput(format!("label {label} outside 1..={n}")));
                }
                *slot = label - 1;
            }
            edges.push((ends[0], ends[1]));
        }
        Self::from_edges(n, &edges)
    }

    /// Renders the edge-list format (1-based, trailing newline).
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", u + 1, v + 1);
        }
        out
    }

    /// Decodes a Prüfer sequence of 0-based labels; the tree has `seq.len() + 2` vertices.
    pub fn from_prufer(seq: &[usize]) -> Result<Self> {
        let n = seq.len() + 2;
        if let Some(&bad) = seq.iter().find(|&&x| x >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        let mut degree = vec![1usize; n];
        for &x in seq {
            degree[x] += 1;
        }
        let mut leaves: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &x in seq {
            let Reverse(leaf) = leaves.pop().expect("Prüfer decoding always has a leaf");
            edges.push((leaf, x));
            degree[x] -= 1;
            if degree[x] == 1 {
                leaves.push(Reverse(x));
            }
        }
        let Reverse(a) = leaves.pop().unwrap();
        let Reverse(b) = leaves.pop().unwrap();
        edges.push((a, b));
        Self::from_edges(n, &edges)
    }

    /// Prüfer sequence (0-based); empty for `n <= 2`.
    pub fn prufer(&self) -> Vec<usize> {
        if self.n <= 2 {
            return Vec::new();
        }
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut removed = vec![false; self.n];
        let mut leaves: BinaryHeap<Reverse<usize>> =
            (0..self.n).filter(|&v| degree[v] == 1).map(Reverse).collect();
        let mut seq = Vec::with_capacity(self.n - 2);
        while seq.len() < self.n - 2 {
            let Reverse(leaf) = leaves.pop().unwrap();
            removed[leaf] = true;
            let nb = *self.adj[leaf].iter().find(|&&w| !removed[w]).unwrap();
            seq.push(nb);
            degree[nb] -= 1;
            if degree[nb] == 1 {
                leaves.push(Reverse(nb));
            }
        }
        seq
    }

    /// Uniformly random labeled tree: a Prüfer sequence drawn from
    /// `rng::stream(seed, 0)` (ChaCha8).
    pub fn random(n: usize, seed: u64) -> Self {
        Self::random_with(n, &mut rng::stream(seed, 0))
    }

    pub fn random_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "a tree needs at least one vertex");
        if n == 1 {
            return Self::from_edges(1, &[]).unwrap();
        }
        let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        Self::from_prufer(&seq).unwrap()
    }

    /// Every labeled tree on `n` vertices (`n^(n-2)` of them), in Prüfer order.
    pub fn all_labeled(n: usize) -> impl Iterator<Item = Tree> {
        assert!(n >= 1, "a tree needs at least one vertex");
        let len = n.saturating_sub(2);
        let total = if n <= 2 { 1 } else { n.pow(len as u32) };
        (0..total).map(move |mut code| {
            if n == 1 {
                return Tree::from_edges(1, &[]).unwrap();
            }
            let mut seq = vec![0; len];
            for slot in seq.iter_mut().rev() {
                *slot = code % n;
                code /= n;
            }
            Tree::from_prufer(&seq).unwrap()
        })
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    /// Star with center 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.first[u].min(self.first[v]), self.first[u].max(self.first[v]));
        let level = usize::BITS - 1 - (b - a + 1).leading_zeros();
        let (x, y) = (self.sparse[level as usize][a], self.sparse[level as usize][b + 1 - (1 << level)]);
        if self.depth[x] <= self.depth[y] { x } else { y }
    }

    /// Number of edges on the `u`–`v` path.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.depth[u] + self.depth[v] - 2 * self.depth[self.lca(u, v)]
    }

    fn check_labels(&self, s: &[usize]) -> Result<()> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        match s.iter().find(|&&v| v >= self.n) {
            Some(&v) => Err(Error::VertexOutOfRange { vertex: v, n: self.n }),
            None => Ok(()),
        }
    }

    /// Steiner distance of a vertex multiset (duplicates ignored).
    ///
    /// Sorting the distinct vertices by first Euler-tour visit, the closed walk
    /// through them in that order crosses every edge of their minimal subtree
    /// exactly twice.
    pub fn steiner_distance(&self, s: &[usize]) -> Result<usize> {
        self.check_labels(s)?;
        Ok(self.steiner_distance_unchecked(s))
    }

    pub(crate) fn steiner_distance_unchecked(&self, s: &[usize]) -> usize {
        let mut vs: Vec<usize> = s.to_vec();
        vs.sort_unstable_by_key(|&v| self.first[v]);
        vs.dedup();
        if vs.len() < 2 {
            return 0;
        }
        let walk: usize = vs
            .iter()
            .zip(vs.iter().cycle().skip(1))
            .map(|(&a, &b)| self.distance(a, b))
            .sum();
        walk / 2
    }

    /// Exhaustive oracle: the smallest connected vertex set containing `s`, minus one.
    pub fn steiner_distance_bruteforce(&self, s: &[usize]) -> Result<usize> {
        if self.n > BRUTE_FORCE_LIMIT {
            return Err(Error::TooLarge { n: self.n, limit: BRUTE_FORCE_LIMIT });
        }
        self.check_labels(s)?;
        let target = s.iter().fold(0u32, |m, &v| m | (1 << v));
        let best = (0u32..1 << self.n)
            .filter(|w| w & target == target && self.induces_connected(*w))
            .map(|w| w.count_ones() as usize - 1)
            .min()
            .expect("the full vertex set is connected");
        Ok(best)
    }

    fn induces_connected(&self, mask: u32) -> bool {
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u32 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                let bit = 1 << w;
                if mask & bit != 0 && seen & bit == 0 {
                    seen |= bit;
                    stack.push(w);
                }
            }
        }
        seen == mask
    }

    /// Lowest-labeled leaf, its neighbor, and the lowest-labeled other neighbor of
    /// that neighbor. Requires `n >= 3`.
    pub(crate) fn leaf_triple(&self) -> Option<(usize, usize, usize)> {
        let u = (0..self.n).find(|&v| self.degree(v) == 1)?;
        let w = self.adj[u][0];
        let v = *self.adj[w].iter().find(|&&x| x != u)?;
        Some((u, w, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let p = Tree::parse("3\n1 2\n2 3").unwrap();
        assert_eq!(p, Tree::path(3));
        let s = Tree::parse("4\n1 2\n1 3\n1 4\n").unwrap();
        assert_eq!(s, Tree::star(4));
        assert_eq!(s.degrees(), vec![3, 1, 1, 1]);
    }

    #[test]
    fn parse_rejections() {
        assert!(matches!(Tree::parse("3\n1 2\n1 2"), Err(Error::NotATree(_))));
        assert!(matches!(Tree::parse("3\n1 2"), Err(Error::NotATree(_))));
        assert!(matches!(Tree::parse("3\n1 2\n2 3\n1 3"), Err(Error::NotATree(_))));
        assert!(matches!(Tree::parse("2\n1 1"), Err(Error::NotATree(_))));
        assert!(matches!(Tree::parse(""), Err(Error::MalformedInput(_))));
        assert!(matches!(Tree::parse("x"), Err(Error::MalformedInput(_))));
        assert!(matches!(Tree::parse("3\n1 2 3\n2 3"), Err(Error::MalformedInput(_))));
        assert!(matches!(Tree::parse("3\n1 4\n2 3"), Err(Error::MalformedInput(_))));
        assert!(matches!(Tree::parse("0"), Err(Error::NotATree(_))));
    }

    #[test]
    fn edge_list_round_trip() {
        let t = Tree::random(9, 5);
        assert_eq!(Tree::parse(&t.to_edge_list()).unwrap(), t);
        assert_eq!(Tree::path(1).to_edge_list(), "1\n");
    }

    #[test]
    fn random_small_cases() {
        let t1 = Tree::random(1, 77);
        assert_eq!((t1.n(), t1.edges().len()), (1, 0));
        assert_eq!(Tree::random(2, 3), Tree::path(2));
        assert_eq!(Tree::random(8, 42).edges(), Tree::random(8, 42).edges());
    }

    #[test]
    fn prufer_round_trip_is_a_bijection() {
        let trees: Vec<Tree> = Tree::all_labeled(5).collect();
        assert_eq!(trees.len(), 125);
        for (code, t) in trees.iter().enumerate() {
            let seq = t.prufer();
            let back = seq.iter().fold(0, |acc, &x| acc * 5 + x);
            assert_eq!(back, code);
        }
        assert_eq!(Tree::all_labeled(2).count(), 1);
        assert_eq!(Tree::all_labeled(1).count(), 1);
    }

    #[test]
    fn pairwise_distances() {
        let p = Tree::path(3);
        assert_eq!(p.distance(0, 2), 2);
        assert_eq!(p.distance(1, 1), 0);
        let s = Tree::star(4);
        assert_eq!(s.distance(1, 2), 2);
        assert_eq!(s.distance(0, 3), 1);
    }

    #[test]
    fn steiner_examples() {
        let p = Tree::path(3);
        assert_eq!(p.steiner_distance(&[0, 2]).unwrap(), 2);
        let s = Tree::star(4);
        assert_eq!(s.steiner_distance(&[1, 2, 3]).unwrap(), 3);
        assert_eq!(s.steiner_distance_bruteforce(&[1, 2, 3]).unwrap(), 3);
        let t = Tree::random(10, 1);
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(t.steiner_distance(&all).unwrap(), 9);
        assert_eq!(t.steiner_distance(&[4, 4, 4]).unwrap(), 0);
        assert_eq!(t.steiner_distance_bruteforce(&[4]).unwrap(), 0);
    }

    #[test]
    fn steiner_errors() {
        let t = Tree::path(3);
        assert_eq!(t.steiner_distance(&[]), Err(Error::EmptySet));
        assert_eq!(t.steiner_distance_bruteforce(&[]), Err(Error::EmptySet));
        assert!(matches!(t.steiner_distance(&[3]), Err(Error::VertexOutOfRange { .. })));
        let big = Tree::path(13);
        assert!(matches!(big.steiner_distance_bruteforce(&[0]), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn leaf_triple_tie_break() {
        assert_eq!(Tree::path(3).leaf_triple(), Some((0, 1, 2)));
        assert_eq!(Tree::star(4).leaf_triple(), Some((1, 0, 2)));
        assert_eq!(Tree::path(2).leaf_triple(), None);
    }
}
