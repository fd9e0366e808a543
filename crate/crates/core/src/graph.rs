//! Undirected simple graph over a fixed dense vertex set, with exact
//! (optionally depth-bounded) breadth-first distance and path queries.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Dense vertex index in `[0, n)`.
pub type VertexId = u32;

const NO_PARENT: VertexId = VertexId::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {0} is already present")]
    DuplicateEdge(Edge),
    #[error("edge {0} is not present")]
    MissingEdge(Edge),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
}

/// An undirected edge stored canonically with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: VertexId,
    v: VertexId,
}

impl Edge {
    /// Builds the canonical form of `{a, b}`. Rejects self-loops.
    pub fn new(a: VertexId, b: VertexId) -> Result<Self, GraphError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(GraphError::SelfLoop(a)),
        }
    }

    #[inline]
    pub fn u(self) -> VertexId {
        self.u
    }

    #[inline]
    pub fn v(self) -> VertexId {
        self.v
    }

    #[inline]
    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(self, x: VertexId) -> Option<VertexId> {
        if x == self.u {
            Some(self.v)
        } else if x == self.v {
            Some(self.u)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// Result of a hop-distance query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Finite(u32),
    /// The search exhausted the source's component without meeting the target.
    Unreachable,
    /// The true distance is larger than the given cutoff (possibly infinite).
    ExceedsCutoff(u32),
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            _ => None,
        }
    }

    /// True iff the distance is known to be at most `bound`.
    pub fn within(self, bound: u32) -> bool {
        matches!(self, Distance::Finite(d) if d <= bound)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => f.write_str("unreachable"),
            Distance::ExceedsCutoff(l) => write!(f, ">{l}"),
        }
    }
}

/// Undirected simple graph with sorted adjacency lists.
///
/// Neighbors are kept in ascending order, so every search explores them
/// deterministically and returned paths are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicGraph {
    adjacency: Vec<Vec<VertexId>>,
    edge_count: usize,
}

impl DynamicGraph {
    pub fn new(n: usize) -> Self {
        DynamicGraph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = DynamicGraph::new(n);
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count == 0
    }

    pub fn check_vertex(&self, x: VertexId) -> Result<(), GraphError> {
        if (x as usize) < self.adjacency.len() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: x,
                n: self.adjacency.len(),
            })
        }
    }

    fn check_edge(&self, e: Edge) -> Result<(), GraphError> {
        self.check_vertex(e.u)?;
        self.check_vertex(e.v)
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.adjacency
            .get(e.u as usize)
            .is_some_and(|adj| adj.binary_search(&e.v).is_ok())
    }

    pub fn neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.adjacency[x as usize]
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.adjacency[x as usize].len()
    }

    pub fn add_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        self.check_edge(e)?;
        let pos = match self.adjacency[e.u as usize].binary_search(&e.v) {
            Ok(_) => return Err(GraphError::DuplicateEdge(e)),
            Err(pos) => pos,
        };
        self.adjacency[e.u as usize].insert(pos, e.v);
        let adj_v = &mut self.adjacency[e.v as usize];
        let pos = adj_v.binary_search(&e.u).unwrap_err();
        adj_v.insert(pos, e.u);
        self.edge_count += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        self.check_edge(e)?;
        let pos = self.adjacency[e.u as usize]
            .binary_search(&e.v)
            .map_err(|_| GraphError::MissingEdge(e))?;
        self.adjacency[e.u as usize].remove(pos);
        let adj_v = &mut self.adjacency[e.v as usize];
        let pos = adj_v
            .binary_search(&e.u)
            .expect("adjacency lists out of sync");
        adj_v.remove(pos);
        self.edge_count -= 1;
        Ok(())
    }

    /// All edges in ascending canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, adj)| {
            let u = u as VertexId;
            adj.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| Edge { u, v })
        })
    }

    pub fn edge_vec(&self) -> Vec<Edge> {
        self.edges().collect()
    }

    /// Exact hop distance from `u` to `v`, searching at most `cutoff` levels.
    pub fn bfs_distance(
        &self,
        u: VertexId,
        v: VertexId,
        cutoff: Option<u32>,
    ) -> Result<Distance, GraphError> {
        Ok(self.search(u, v, cutoff, None)?.distance)
    }

    /// A minimum-hop `u`-`v` path within `cutoff`, or `None` if there is none.
    pub fn bfs_path(
        &self,
        u: VertexId,
        v: VertexId,
        cutoff: Option<u32>,
    ) -> Result<Option<Vec<Edge>>, GraphError> {
        let found = self.search(u, v, cutoff, None)?;
        Ok(found.distance.finite().map(|_| found.path(u, v)))
    }

    /// Like [`bfs_distance`](Self::bfs_distance) but pretends `skip` is absent.
    pub fn bfs_distance_avoiding(
        &self,
        u: VertexId,
        v: VertexId,
        cutoff: Option<u32>,
        skip: Edge,
    ) -> Result<Distance, GraphError> {
        Ok(self.search(u, v, cutoff, Some(skip))?.distance)
    }

    /// Hop distances from `source` to every vertex (`None` = unreachable).
    pub fn bfs_all(&self, source: VertexId) -> Vec<Option<u32>> {
        let n = self.adjacency.len();
        let mut dist = vec![None; n];
        let mut queue = VecDeque::new();
        dist[source as usize] = Some(0);
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x as usize].unwrap();
            for &y in &self.adjacency[x as usize] {
                if dist[y as usize].is_none() {
                    dist[y as usize] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    fn search(
        &self,
        source: VertexId,
        target: VertexId,
        cutoff: Option<u32>,
        skip: Option<Edge>,
    ) -> Result<Search, GraphError> {
        self.check_vertex(source)?;
        self.check_vertex(target)?;
        let n = self.adjacency.len();
        let mut parent = vec![NO_PARENT; n];
        if source == target {
            return Ok(Search {
                distance: Distance::Finite(0),
                parent,
            });
        }
        parent[source as usize] = source;
        let mut frontier = vec![source];
        let mut next = Vec::new();
        let mut depth = 0u32;
        while !frontier.is_empty() {
            if cutoff == Some(depth) {
                // Frontier still live at the depth limit: anything further is > cutoff.
                let live = frontier.iter().any(|&x| {
                    self.adjacency[x as usize]
                        .iter()
                        .any(|&y| parent[y as usize] == NO_PARENT && !is_skipped(skip, x, y))
                });
                let distance = if live {
                    Distance::ExceedsCutoff(depth)
                } else {
                    Distance::Unreachable
                };
                return Ok(Search { distance, parent });
            }
            depth += 1;
            for &x in &frontier {
                for &y in &self.adjacency[x as usize] {
                    if parent[y as usize] != NO_PARENT || is_skipped(skip, x, y) {
                        continue;
                    }
                    parent[y as usize] = x;
                    if y == target {
                        return Ok(Search {
                            distance: Distance::Finite(depth),
                            parent,
                        });
                    }
                    next.push(y);
                }
            }
            std::mem::swap(&mut frontier, &mut next);
            next.clear();
        }
        Ok(Search {
            distance: Distance::Unreachable,
            parent,
        })
    }
}

#[inline]
fn is_skipped(skip: Option<Edge>, x: VertexId, y: VertexId) -> bool {
    skip.is_some_and(|e| (e.u == x && e.v == y) || (e.u == y && e.v == x))
}

struct Search {
    distance: Distance,
    parent: Vec<VertexId>,
}

impl Search {
    fn path(&self, source: VertexId, target: VertexId) -> Vec<Edge> {
        let mut path = Vec::new();
        let mut x = target;
        while x != source {
            let p = self.parent[x as usize];
            path.push(Edge::new(p, x).expect("parent pointers never loop"));
            x = p;
        }
        path.reverse();
        path
    }
}

/// Checks that `path` is a simple walk from `u` to `v`; returns the vertex sequence.
pub fn trace_path(path: &[Edge], u: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
    let mut vertices = Vec::with_capacity(path.len() + 1);
    vertices.push(u);
    let mut at = u;
    for e in path {
        at = e.other(at)?;
        vertices.push(at);
    }
    if at != v {
        return None;
    }
    let mut sorted = vertices.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(vertices)
}

/// `⌈log₂ n⌉`, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: VertexId, b: VertexId) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn path_graph(k: u32) -> DynamicGraph {
        DynamicGraph::from_edges(k as usize + 1, (0..k).map(|i| e(i, i + 1))).unwrap()
    }

    #[test]
    fn add_edge_to_empty_graph() {
        let mut g = DynamicGraph::new(4);
        g.add_edge(e(0, 1)).unwrap();
        assert_eq!(g.edge_vec(), vec![e(0, 1)]);
        assert_eq!(g.neighbors(1), &[0]);
    }

    #[test]
    fn canonical_duplicate_and_self_loop() {
        let mut g = DynamicGraph::new(4);
        g.add_edge(e(0, 1)).unwrap();
        assert_eq!(g.add_edge(e(1, 0)), Err(GraphError::DuplicateEdge(e(0, 1))));
        assert_eq!(Edge::new(2, 2), Err(GraphError::SelfLoop(2)));
        assert!(matches!(
            g.add_edge(e(0, 4)),
            Err(GraphError::VertexOutOfRange { vertex: 4, n: 4 })
        ));
    }

    #[test]
    fn remove_edge_cases() {
        let mut g = DynamicGraph::from_edges(4, [e(0, 1)]).unwrap();
        g.remove_edge(e(1, 0)).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.remove_edge(e(0, 1)), Err(GraphError::MissingEdge(e(0, 1))));
    }

    #[test]
    fn distances_on_paths() {
        let g = path_graph(3);
        assert_eq!(g.bfs_distance(0, 3, None).unwrap(), Distance::Finite(3));
        assert_eq!(g.bfs_distance(0, 0, None).unwrap(), Distance::Finite(0));
        let long = path_graph(8);
        assert_eq!(long.bfs_distance(0, 8, None).unwrap(), Distance::Finite(8));
        assert_eq!(
            long.bfs_distance(0, 8, Some(6)).unwrap(),
            Distance::ExceedsCutoff(6)
        );
        assert_eq!(long.bfs_distance(0, 6, Some(6)).unwrap(), Distance::Finite(6));
    }

    #[test]
    fn unreachable_vs_exceeds_cutoff() {
        let mut g = path_graph(2);
        g = DynamicGraph::from_edges(5, g.edges()).unwrap();
        assert_eq!(g.bfs_distance(0, 4, None).unwrap(), Distance::Unreachable);
        // Component {0,1,2} is exhausted at depth 2, before the cutoff bites.
        assert_eq!(g.bfs_distance(0, 4, Some(5)).unwrap(), Distance::Unreachable);
        assert_eq!(g.bfs_distance(0, 4, Some(1)).unwrap(), Distance::ExceedsCutoff(1));
        let single = DynamicGraph::new(2);
        assert_eq!(single.bfs_distance(0, 1, Some(0)).unwrap(), Distance::Unreachable);
    }

    #[test]
    fn paths() {
        let g = path_graph(2);
        assert_eq!(g.bfs_path(0, 2, None).unwrap(), Some(vec![e(0, 1), e(1, 2)]));
        assert_eq!(g.bfs_path(0, 0, None).unwrap(), Some(vec![]));
        assert_eq!(g.bfs_path(0, 2, Some(1)).unwrap(), None);

        let c4 = DynamicGraph::from_edges(4, [e(0, 1), e(1, 2), e(2, 3), e(0, 3)]).unwrap();
        let p = c4.bfs_path(0, 2, None).unwrap().unwrap();
        assert_eq!(p.len(), 2);
        assert!(p == vec![e(0, 1), e(1, 2)] || p == vec![e(0, 3), e(2, 3)]);
        // Ascending neighbor order picks the route through vertex 1.
        assert_eq!(p, vec![e(0, 1), e(1, 2)]);
        assert!(trace_path(&p, 0, 2).is_some());
    }

    #[test]
    fn avoiding_an_edge() {
        let c4 = DynamicGraph::from_edges(4, [e(0, 1), e(1, 2), e(2, 3), e(0, 3)]).unwrap();
        assert_eq!(
            c4.bfs_distance_avoiding(0, 1, None, e(0, 1)).unwrap(),
            Distance::Finite(3)
        );
    }

    #[test]
    fn trace_path_rejects_bad_walks() {
        assert!(trace_path(&[e(0, 1), e(2, 3)], 0, 3).is_none());
        assert!(trace_path(&[e(0, 1), e(0, 1)], 0, 0).is_none());
        assert!(trace_path(&[e(0, 1)], 0, 2).is_none());
        assert_eq!(trace_path(&[], 3, 3), Some(vec![3]));
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
        assert_eq!(ceil_log2(1024), 10);
    }

    #[test]
    fn graph_is_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<DynamicGraph>();
    }
}
