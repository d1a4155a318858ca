//! Exact maximum induced matching in small bipartite graphs.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("edge ({0}, {1}) has an endpoint outside the bipartition")]
    OutOfRange(usize, usize),
}

/// Bipartite graph with left side `0..left` and right side `0..right`.
/// Edges are `(left index, right index)`, deduplicated and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(
        left: usize,
        right: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MatchingError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= left || v >= right {
                return Err(MatchingError::OutOfRange(u, v));
            }
            set.insert((u, v));
        }
        Ok(BipartiteGraph {
            left,
            right,
            edges: set.into_iter().collect(),
        })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u, v)).is_ok()
    }

    /// Two edges are joined if they share an endpoint or an edge of the graph
    /// connects an endpoint of one to an endpoint of the other.
    pub fn joined(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        a.0 == b.0 || a.1 == b.1 || self.has_edge(a.0, b.1) || self.has_edge(b.0, a.1)
    }
}

/// True iff `matching` consists of distinct graph edges, no two of them joined.
pub fn is_induced_matching(graph: &BipartiteGraph, matching: &[(usize, usize)]) -> bool {
    matching.iter().all(|&(u, v)| graph.has_edge(u, v))
        && matching.iter().enumerate().all(|(i, &a)| {
            matching[i + 1..]
                .iter()
                .all(|&b| a != b && !graph.joined(a, b))
        })
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        Bits(words)
    }

    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn minus(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
}

/// A maximum induced matching, found by branch and bound over the edges'
/// conflict graph. Edges are returned in ascending order.
pub fn max_induced_matching(graph: &BipartiteGraph) -> Vec<(usize, usize)> {
    let edges = graph.edges();
    let n = edges.len();
    // closed neighborhoods in the conflict graph
    let conflicts: Vec<Bits> = (0..n)
        .map(|i| {
            let mut b = Bits::empty(n);
            for j in 0..n {
                if i == j || graph.joined(edges[i], edges[j]) {
                    b.set(j);
                }
            }
            b
        })
        .collect();

    fn search(cands: Bits, chosen: &mut Vec<usize>, best: &mut Vec<usize>, conflicts: &[Bits]) {
        if chosen.len() + cands.count() <= best.len() {
            return;
        }
        let Some(v) = cands.first() else {
            *best = chosen.clone();
            return;
        };
        chosen.push(v);
        search(cands.minus(&conflicts[v]), chosen, best, conflicts);
        chosen.pop();
        let mut rest = cands;
        rest.clear(v);
        search(rest, chosen, best, conflicts);
    }

    let mut best = Vec::new();
    search(Bits::full(n), &mut Vec::new(), &mut best, &conflicts);
    best.into_iter().map(|i| edges[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_on_four_nodes() {
        // a-b, c-b, c-d with U = {a, c}, V = {b, d}
        let g = BipartiteGraph::new(2, 2, [(0, 0), (1, 0), (1, 1)]).unwrap();
        assert_eq!(max_induced_matching(&g).len(), 1);
        assert!(!is_induced_matching(&g, &[(0, 0), (1, 1)]));
    }

    #[test]
    fn disjoint_edges() {
        let g = BipartiteGraph::new(2, 2, [(0, 0), (1, 1)]).unwrap();
        assert_eq!(max_induced_matching(&g), vec![(0, 0), (1, 1)]);
        assert!(is_induced_matching(&g, &[(0, 0), (1, 1)]));
    }

    #[test]
    fn complete_bipartite() {
        let g =
            BipartiteGraph::new(3, 3, (0..3).flat_map(|u| (0..3).map(move |v| (u, v)))).unwrap();
        assert_eq!(max_induced_matching(&g).len(), 1);
    }

    #[test]
    fn empty_graph() {
        let g = BipartiteGraph::new(2, 3, []).unwrap();
        assert!(max_induced_matching(&g).is_empty());
        assert!(is_induced_matching(&g, &[]));
    }

    #[test]
    fn more_than_one_word_of_edges() {
        // 70 disjoint edges
        let g = BipartiteGraph::new(70, 70, (0..70).map(|i| (i, i))).unwrap();
        assert_eq!(max_induced_matching(&g).len(), 70);
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(
            BipartiteGraph::new(1, 1, [(0, 1)]),
            Err(MatchingError::OutOfRange(0, 1))
        );
    }
}
