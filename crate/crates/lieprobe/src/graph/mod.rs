//! Bit-packed undirected graphs and the perp machinery built on them.
//!
//! Adjacency is one bitset row per vertex, which makes the closed-perp
//! operator (the set of vertices equal or adjacent to everything in a given
//! set) a short chain of word-wise ANDs. Everything downstream, from ray
//! recovery to polar-rank checks, reduces to that kernel plus popcounts.

mod format;
mod iso;

pub use format::{
    read_auto, read_graph6, read_sparse6, write_graph6, write_sparse6, FormatError, MAX_N,
};
pub use iso::{are_isomorphic, color_refine};

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("graph on {n} vertices exceeds the supported size {limit} for this operation")]
    SizeLimitExceeded { n: usize, limit: usize },
    #[error("{labels} labels supplied for {n} vertices")]
    LabelCountMismatch { labels: usize, n: usize },
    #[error("clique extension factor must be at least 1")]
    ZeroExtension,
}

/// Fixed-capacity bitset; the building block for adjacency rows and vertex
/// sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    nbits: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(nbits: usize) -> BitSet {
        BitSet {
            nbits,
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    pub fn full(nbits: usize) -> BitSet {
        let mut s = BitSet::new(nbits);
        s.words.fill(!0);
        s.trim();
        s
    }

    pub fn len(&self) -> usize {
        self.nbits
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.nbits);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    #[inline]
    pub fn test(&self, i: usize) -> bool {
        debug_assert!(i < self.nbits);
        self.words[i / 64] >> (i % 64) & 1 != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and_assign(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Byte copy into an existing set of the same capacity; unlike
    /// `clone_from` this can never allocate.
    pub fn copy_from(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words.copy_from_slice(&other.words);
    }

    pub fn zero(&mut self) {
        self.words.fill(0);
    }

    pub fn or_assign(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and_not_assign(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// |self AND other| without materializing the intersection.
    pub fn and_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset_of(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn first_set(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> BitIter<'_> {
        BitIter {
            set: self,
            word: 0,
            bits: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Zeroes any bits beyond nbits (internal invariant after whole-word
    /// operations such as `full`).
    fn trim(&mut self) {
        let extra = self.words.len() * 64 - self.nbits;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 >> extra;
            }
        }
    }
}

pub struct BitIter<'a> {
    set: &'a BitSet,
    word: usize,
    bits: u64,
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.bits == 0 {
            self.word += 1;
            if self.word >= self.set.words.len() {
                return None;
            }
            self.bits = self.set.words[self.word];
        }
        let b = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(self.word * 64 + b)
    }
}

/// An undirected graph without loops, with optional vertex labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<BitSet>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph {
            n,
            adj: vec![BitSet::new(n); n],
            labels: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        self.adj[u].set(v);
        self.adj[v].set(u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count()).sum::<usize>() / 2
    }

    #[inline]
    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].test(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn neighbors(&self, v: usize) -> BitIter<'_> {
        self.adj[v].iter()
    }

    pub fn row(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    /// The open row with the vertex's own bit added.
    pub fn closed_row(&self, v: usize) -> BitSet {
        let mut r = self.adj[v].clone();
        r.set(v);
        r
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Option<Vec<String>>) -> Result<(), GraphError> {
        if let Some(ref l) = labels {
            if l.len() != self.n {
                return Err(GraphError::LabelCountMismatch {
                    labels: l.len(),
                    n: self.n,
                });
            }
        }
        self.labels = labels;
        Ok(())
    }

    /// Closed perp: vertices equal or adjacent to every member of `s`. The
    /// empty set perps to the whole vertex set.
    pub fn closed_perp(&self, s: &[usize]) -> Result<BitSet, GraphError> {
        let mut members = BitSet::new(self.n);
        for &v in s {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
            members.set(v);
        }
        let mut out = BitSet::new(self.n);
        self.closed_perp_of(&members, &mut out);
        Ok(out)
    }

    /// Closed perp of a set given as a bitset, written into `out`.
    pub fn closed_perp_of(&self, s: &BitSet, out: &mut BitSet) {
        debug_assert_eq!(s.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        out.words.fill(!0);
        out.trim();
        for v in s.iter() {
            let word = v / 64;
            let bit = 1u64 << (v % 64);
            for (i, (a, b)) in out.words.iter_mut().zip(&self.adj[v].words).enumerate() {
                let closed = if i == word { b | bit } else { *b };
                *a &= closed;
            }
        }
    }

    /// Induced subgraph on `verts` (ascending order required); returns the
    /// graph and the map from new indices to old.
    pub fn induced(&self, verts: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        for &v in verts {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        debug_assert!(verts.windows(2).all(|w| w[0] < w[1]));
        let m = verts.len();
        let mut g = Graph::new(m);
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.is_edge(u, v) {
                    g.adj[i].set(j);
                    g.adj[j].set(i);
                }
            }
        }
        Ok((g, verts.to_vec()))
    }

    /// The induced graph on the open neighborhood of `v`. The original
    /// indices are retained as labels so local structure can be traced back.
    pub fn local_graph(&self, v: usize) -> Result<(Graph, Vec<usize>), GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        let verts = self.adj[v].to_vec();
        let (mut g, map) = self.induced(&verts)?;
        let labels = map
            .iter()
            .map(|&u| match &self.labels {
                Some(l) => l[u].clone(),
                None => u.to_string(),
            })
            .collect();
        g.labels = Some(labels);
        Ok((g, map))
    }

    /// Replaces every vertex by a q-clique, copies of x adjacent to copies
    /// of y exactly when x = y or x ~ y. Copy i of vertex x is index x*q+i,
    /// so the copies of vertex 0 come first.
    pub fn clique_extension(&self, q: usize) -> Result<Graph, GraphError> {
        if q == 0 {
            return Err(GraphError::ZeroExtension);
        }
        let mut g = Graph::new(self.n * q);
        for x in 0..self.n {
            for i in 0..q {
                for j in i + 1..q {
                    g.add_edge(x * q + i, x * q + j)?;
                }
            }
            for y in self.neighbors(x) {
                if y > x {
                    for i in 0..q {
                        for j in 0..q {
                            g.add_edge(x * q + i, y * q + j)?;
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = BitSet::new(self.n);
        let mut frontier = BitSet::new(self.n);
        frontier.set(0);
        seen.set(0);
        loop {
            let mut next = BitSet::new(self.n);
            for v in frontier.iter() {
                next.or_assign(&self.adj[v]);
            }
            next.and_not_assign(&seen);
            if next.is_empty() {
                break;
            }
            seen.or_assign(&next);
            frontier = next;
        }
        seen.count() == self.n
    }

    /// Eccentricity of `v`, or None if some vertex is unreachable.
    fn eccentricity(&self, v: usize) -> Option<usize> {
        let mut seen = BitSet::new(self.n);
        let mut frontier = BitSet::new(self.n);
        frontier.set(v);
        seen.set(v);
        let mut ecc = 0;
        loop {
            let mut next = BitSet::new(self.n);
            for u in frontier.iter() {
                next.or_assign(&self.adj[u]);
            }
            next.and_not_assign(&seen);
            if next.is_empty() {
                break;
            }
            ecc += 1;
            seen.or_assign(&next);
            frontier = next;
        }
        if seen.count() == self.n {
            Some(ecc)
        } else {
            None
        }
    }

    /// Largest eccentricity. BFS per source vertex; sources are independent,
    /// so fan out over the thread pool and take the max (order-free).
    pub fn diameter(&self) -> Result<usize, GraphError> {
        if self.n == 0 {
            return Err(GraphError::DisconnectedGraph);
        }
        (0..self.n)
            .into_par_iter()
            .map(|v| self.eccentricity(v).ok_or(GraphError::DisconnectedGraph))
            .try_reduce(|| 0, |a, b| Ok(a.max(b)))
    }

    /// Distance between two vertices; None when unreachable.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        if u == v {
            return Some(0);
        }
        let mut seen = BitSet::new(self.n);
        let mut frontier = BitSet::new(self.n);
        frontier.set(u);
        seen.set(u);
        let mut d = 0;
        loop {
            let mut next = BitSet::new(self.n);
            for w in frontier.iter() {
                next.or_assign(&self.adj[w]);
            }
            next.and_not_assign(&seen);
            if next.is_empty() {
                return None;
            }
            d += 1;
            if next.test(v) {
                return Some(d);
            }
            seen.or_assign(&next);
            frontier = next;
        }
    }

    /// All maximal cliques via Bron-Kerbosch with max-degree pivoting.
    /// Output is deterministic: each clique ascending, cliques sorted.
    /// Graphs of at most 64 vertices run on single-word sets; rank checks
    /// call this per perp, so the small case must not allocate per node.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.n <= 64 {
            let adj: Vec<u64> = self.adj.iter().map(|r| r.words.first().copied().unwrap_or(0)).collect();
            let full = if self.n == 64 { !0u64 } else { (1u64 << self.n) - 1 };
            let mut r = Vec::new();
            bk64(&adj, &mut r, full, 0, &mut out);
        } else {
            let mut r = Vec::new();
            let p = BitSet::full(self.n);
            let x = BitSet::new(self.n);
            self.bk(&mut r, p, x, &mut out);
        }
        out.sort();
        out
    }

    fn bk(&self, r: &mut Vec<usize>, p: BitSet, mut x: BitSet, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
            return;
        }
        // Pivot: vertex of P union X with the most neighbours inside P.
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (self.adj[u].and_count(&p), std::cmp::Reverse(u)))
            .unwrap();
        let mut candidates = p.clone();
        candidates.and_not_assign(&self.adj[pivot]);
        let mut p = p;
        for v in candidates.iter() {
            if !p.test(v) {
                continue;
            }
            let mut p2 = p.clone();
            p2.and_assign(&self.adj[v]);
            let mut x2 = x.clone();
            x2.and_assign(&self.adj[v]);
            r.push(v);
            self.bk(r, p2, x2, out);
            r.pop();
            p.clear(v);
            x.set(v);
        }
    }
}

/// Single-word Bron-Kerbosch, same pivot rule as the bitset path: most
/// neighbours inside P, lowest index on ties.
fn bk64(adj: &[u64], r: &mut Vec<usize>, mut p: u64, mut x: u64, out: &mut Vec<Vec<usize>>) {
    if p == 0 && x == 0 {
        let mut clique = r.clone();
        clique.sort_unstable();
        out.push(clique);
        return;
    }
    let mut pivot = 0usize;
    let mut best = -1i64;
    let mut scan = p | x;
    while scan != 0 {
        let u = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        let cnt = (adj[u] & p).count_ones() as i64;
        if cnt > best {
            best = cnt;
            pivot = u;
        }
    }
    let mut candidates = p & !adj[pivot];
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        r.push(v);
        bk64(adj, r, p & adj[v], x & adj[v], out);
        r.pop();
        p &= !(1u64 << v);
        x |= 1u64 << v;
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Graph::from_edges(n, &e).unwrap()
    }

    pub(crate) fn petersen() -> Graph {
        // Kneser graph on the 2-subsets of a 5-set, adjacency = disjoint.
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
            .collect();
        let mut g = Graph::new(10);
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for (j, &(c, d)) in pairs.iter().enumerate().skip(i + 1) {
                if a != c && a != d && b != c && b != d {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop { vertex: 1 }));
        assert_eq!(
            g.add_edge(0, 3),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn closed_perp_of_empty_set_is_everything() {
        let g = cycle(5);
        let mut out = BitSet::new(5);
        g.closed_perp_of(&BitSet::new(5), &mut out);
        assert_eq!(out.count(), 5);
    }

    #[test]
    fn closed_perp_on_a_path() {
        // 0-1-2: perp of {0,2} is {1}; perp of {1} is the closed
        // neighborhood {0,1,2}.
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut s = BitSet::new(3);
        s.set(0);
        s.set(2);
        let mut out = BitSet::new(3);
        g.closed_perp_of(&s, &mut out);
        assert_eq!(out.to_vec(), vec![1]);
        let mut s1 = BitSet::new(3);
        s1.set(1);
        g.closed_perp_of(&s1, &mut out);
        assert_eq!(out.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn local_graph_keeps_index_labels() {
        let g = petersen();
        let (l, map) = g.local_graph(0).unwrap();
        assert_eq!(l.n(), 3);
        assert_eq!(l.edge_count(), 0); // girth 5: neighborhoods are cocliques
        assert_eq!(map.len(), 3);
        let labels = l.labels().unwrap();
        for (i, &orig) in map.iter().enumerate() {
            assert_eq!(labels[i], orig.to_string());
        }
    }

    #[test]
    fn clique_extension_of_c5_by_2() {
        let g = cycle(5).clique_extension(2).unwrap();
        assert_eq!(g.n(), 10);
        assert!((0..10).all(|v| g.degree(v) == 5));
        // copies of vertex 0 first
        assert!(g.is_edge(0, 1));
        assert!(g.is_edge(0, 2)); // (0,0) ~ (1,0)
        assert!(!g.is_edge(0, 4)); // (0,0) !~ (2,0)
    }

    #[test]
    fn clique_extension_by_1_is_identity() {
        let g = petersen();
        let e = g.clique_extension(1).unwrap();
        assert_eq!(g, e);
    }

    #[test]
    fn extension_of_k3_is_k6() {
        let g = complete(3).clique_extension(2).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.edge_count(), 15);
    }

    #[test]
    fn diameter_and_connectivity() {
        assert_eq!(cycle(6).diameter().unwrap(), 3);
        assert_eq!(petersen().diameter().unwrap(), 2);
        let disjoint = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(disjoint.diameter(), Err(GraphError::DisconnectedGraph));
        assert!(!disjoint.is_connected());
        assert!(cycle(4).is_connected());
        assert_eq!(complete(1).diameter().unwrap(), 0);
    }

    #[test]
    fn distances_on_a_cycle() {
        let g = cycle(6);
        assert_eq!(g.distance(0, 3), Some(3));
        assert_eq!(g.distance(0, 0), Some(0));
        let disjoint = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(disjoint.distance(0, 2), None);
    }

    #[test]
    fn maximal_cliques_of_small_graphs() {
        assert_eq!(complete(4).maximal_cliques(), vec![vec![0, 1, 2, 3]]);
        let c5 = cycle(5);
        let cliques = c5.maximal_cliques();
        assert_eq!(cliques.len(), 5); // the edges
        assert!(cliques.iter().all(|c| c.len() == 2));
        // Paw graph: triangle 0,1,2 plus pendant 3 on 2.
        let paw = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(paw.maximal_cliques(), vec![vec![0, 1, 2], vec![2, 3]]);
    }

    #[test]
    fn bitset_iteration_and_counts() {
        let mut s = BitSet::new(130);
        for i in [0, 63, 64, 127, 129] {
            s.set(i);
        }
        assert_eq!(s.to_vec(), vec![0, 63, 64, 127, 129]);
        assert_eq!(s.count(), 5);
        assert_eq!(BitSet::full(130).count(), 130);
        s.clear(64);
        assert_eq!(s.count(), 4);
    }
}
