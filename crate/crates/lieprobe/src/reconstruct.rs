//! Recovering a geometry from its collinearity graph alone.
//!
//! Everything here is built from the closed perp. In a q-clique extension
//! the double perp of a vertex inside a local graph is exactly the planted
//! q-clique through it (a ray); the common height q of the local graphs is
//! the extension factor; and for an edge (p, x) the set (x^perp cap
//! p^perp)^perp is the unique line through p and x (an extended ray).
//! Collecting extended rays over all edges rebuilds the line set.

use crate::geometry::{Geometry, GeometryError};
use crate::graph::{BitSet, Graph, GraphError};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("double perps of {a} and {b} overlap without being equal")]
    RaysNotPartition { a: usize, b: usize },
    #[error("rays have mixed sizes: ray of {a} has {size_a} vertices, ray of {b} has {size_b}")]
    RaysUnequalSize { a: usize, b: usize, size_a: usize, size_b: usize },
    #[error("height is 1: every double perp is a singleton")]
    HeightTooSmall,
    #[error("ray through {a} contains the non-adjacent pair ({a}, {b})")]
    RayNotClique { a: usize, b: usize },
    #[error("double perp of {vertex} is the whole graph; perps collapse to everything")]
    RayCoversGraph { vertex: usize },
    #[error("heights disagree: {q_v} at vertex {v}, {q_w} at vertex {w}")]
    HeightMismatch { v: usize, w: usize, q_v: usize, q_w: usize },
    #[error("at vertex {vertex}: {source}")]
    AtVertex {
        vertex: usize,
        #[source]
        source: Box<ReconstructError>,
    },
    #[error("vertices {p} and {x} are not adjacent")]
    NotAdjacent { p: usize, x: usize },
    #[error("extended ray through ({p}, {x}) has {size} vertices{}", .expected.map_or_else(String::new, |e| format!(", expected {e}")))]
    WrongRaySize { p: usize, x: usize, size: usize, expected: Option<usize> },
    #[error("({x}, {y}, {z}) lie on one extended ray and span no plane")]
    CollinearTriple { x: usize, y: usize, z: usize },
    #[error("span of ({x}, {y}, {z}) has {size} vertices, not the {expected} of a projective plane of order {q}")]
    CollapsedSpan { x: usize, y: usize, z: usize, size: usize, expected: usize, q: usize },
    #[error("recovered lines disagree with the graph at pair ({a}, {b}): adjacent {adjacent}, on a common line {on_line}")]
    PointGraphMismatch { a: usize, b: usize, adjacent: bool, on_line: bool },
    #[error("rays {a} and {b} have some but not all cross pairs adjacent")]
    InconsistentCrossEdges { a: usize, b: usize },
    #[error("partition describes {partition_n} vertices, graph has {graph_n}")]
    PartitionMismatch { partition_n: usize, graph_n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn at_vertex(vertex: usize, source: ReconstructError) -> ReconstructError {
    ReconstructError::AtVertex { vertex, source: Box::new(source) }
}

/// The double perps of a graph, grouped into a partition. Rays are listed
/// in order of their least member; every ray has exactly `q` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayPartition {
    rays: Vec<Vec<usize>>,
    ray_of: Vec<usize>,
    q: usize,
}

impl RayPartition {
    pub fn rays(&self) -> &[Vec<usize>] {
        &self.rays
    }

    /// Index into [`rays`](Self::rays) for each vertex.
    pub fn ray_of(&self) -> &[usize] {
        &self.ray_of
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.ray_of.len()
    }
}

/// A line recovered from an adjacent pair: (x^perp cap p^perp)^perp.
/// Equality and ordering look only at the vertex set; the generating pair
/// is provenance.
#[derive(Debug, Clone, Eq)]
pub struct ExtendedRay {
    pub vertices: Vec<usize>,
    pub generators: (usize, usize),
}

impl PartialEq for ExtendedRay {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

/// Groups the vertices of `l` by their double perps. Succeeds only when the
/// double perps form a partition into at least two equal-size cliques of
/// size q >= 2, the signature of a proper q-clique extension.
pub fn recover_rays(l: &Graph) -> Result<RayPartition, ReconstructError> {
    let n = l.n();
    if n == 0 {
        return Err(ReconstructError::EmptyGraph);
    }
    let mut dp: Vec<BitSet> = Vec::with_capacity(n);
    let mut out = BitSet::new(n);
    for v in 0..n {
        l.closed_perp_of(&l.closed_row(v), &mut out);
        dp.push(out.clone());
    }
    // v always lies in dp[v], so the sets cover; a partition needs them to
    // agree wherever they overlap
    for v in 0..n {
        for u in dp[v].iter() {
            if dp[u] != dp[v] {
                return Err(ReconstructError::RaysNotPartition { a: v, b: u });
            }
        }
    }
    let mut ray_of = vec![usize::MAX; n];
    let mut rays: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if ray_of[v] != usize::MAX {
            continue;
        }
        let members = dp[v].to_vec();
        for &u in &members {
            ray_of[u] = rays.len();
        }
        rays.push(members);
    }
    let q = rays[0].len();
    for r in &rays[1..] {
        if r.len() != q {
            return Err(ReconstructError::RaysUnequalSize {
                a: rays[0][0],
                b: r[0],
                size_a: q,
                size_b: r.len(),
            });
        }
    }
    if q == 1 {
        return Err(ReconstructError::HeightTooSmall);
    }
    if rays.len() == 1 {
        return Err(ReconstructError::RayCoversGraph { vertex: 0 });
    }
    for r in &rays {
        for (i, &a) in r.iter().enumerate() {
            for &b in &r[i + 1..] {
                if !l.is_edge(a, b) {
                    return Err(ReconstructError::RayNotClique { a, b });
                }
            }
        }
    }
    Ok(RayPartition { rays, ray_of, q })
}

/// The common height of all local graphs of `g`: the ray size every
/// `recover_rays(local_graph(v))` agrees on. Ray errors come back tagged
/// with the base vertex; their own vertex numbers are local-graph indices.
pub fn height(g: &Graph) -> Result<usize, ReconstructError> {
    if g.n() == 0 {
        return Err(ReconstructError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(GraphError::DisconnectedGraph.into());
    }
    let mut seen: Option<(usize, usize)> = None;
    for v in 0..g.n() {
        let (local, _) = g.local_graph(v)?;
        let part = recover_rays(&local).map_err(|e| at_vertex(v, e))?;
        match seen {
            None => seen = Some((part.q(), v)),
            Some((q, w)) if q != part.q() => {
                return Err(ReconstructError::HeightMismatch { v: w, w: v, q_v: q, q_w: part.q() });
            }
            Some(_) => {}
        }
    }
    Ok(seen.expect("graph is nonempty").0)
}

fn double_perp_of_pair(g: &Graph, p: usize, x: usize) -> Result<Vec<usize>, ReconstructError> {
    let s = g.closed_perp(&[p, x])?;
    if !g.is_edge(p, x) {
        return Err(ReconstructError::NotAdjacent { p, x });
    }
    let mut out = BitSet::new(g.n());
    g.closed_perp_of(&s, &mut out);
    Ok(out.to_vec())
}

/// `extended_ray` with the height already known, for callers walking many
/// edges of one graph.
pub fn extended_ray_at_height(
    g: &Graph,
    p: usize,
    x: usize,
    q: usize,
) -> Result<ExtendedRay, ReconstructError> {
    let vertices = double_perp_of_pair(g, p, x)?;
    if vertices.len() != q + 1 {
        return Err(ReconstructError::WrongRaySize {
            p,
            x,
            size: vertices.len(),
            expected: Some(q + 1),
        });
    }
    Ok(ExtendedRay { vertices, generators: (p, x) })
}

/// The line through the adjacent pair (p, x): the closed perp of their
/// common closed neighborhood. The expected size q+1 is taken from the
/// rays of the local graph at p; if those cannot be recovered the size
/// check has no reference value and the error carries `expected: None`.
pub fn extended_ray(g: &Graph, p: usize, x: usize) -> Result<ExtendedRay, ReconstructError> {
    let vertices = double_perp_of_pair(g, p, x)?;
    let (local, _) = g.local_graph(p)?;
    let q = match recover_rays(&local) {
        Ok(part) => part.q(),
        Err(_) => {
            return Err(ReconstructError::WrongRaySize {
                p,
                x,
                size: vertices.len(),
                expected: None,
            });
        }
    };
    if vertices.len() != q + 1 {
        return Err(ReconstructError::WrongRaySize { p, x, size: vertices.len(), expected: Some(q + 1) });
    }
    Ok(ExtendedRay { vertices, generators: (p, x) })
}

/// `plane_span` with the height already known.
pub fn plane_span_at_height(
    g: &Graph,
    x: usize,
    y: usize,
    z: usize,
    q: usize,
) -> Result<Vec<usize>, ReconstructError> {
    let span = span_set(g, x, y, z)?;
    let expected = q * q + q + 1;
    if span.len() != expected {
        return Err(ReconstructError::CollapsedSpan { x, y, z, size: span.len(), expected, q });
    }
    Ok(span)
}

/// The span of a triangle that is not contained in one extended ray:
/// (x^perp cap y^perp cap z^perp)^perp. Under the hypotheses this carries
/// a projective plane of order q, so it must have q^2+q+1 vertices.
pub fn plane_span(g: &Graph, x: usize, y: usize, z: usize) -> Result<Vec<usize>, ReconstructError> {
    let span = span_set(g, x, y, z)?;
    let (local, _) = g.local_graph(x)?;
    let q = recover_rays(&local).map_err(|e| at_vertex(x, e))?.q();
    let expected = q * q + q + 1;
    if span.len() != expected {
        return Err(ReconstructError::CollapsedSpan { x, y, z, size: span.len(), expected, q });
    }
    Ok(span)
}

fn span_set(g: &Graph, x: usize, y: usize, z: usize) -> Result<Vec<usize>, ReconstructError> {
    let s = g.closed_perp(&[x, y, z])?;
    for (a, b) in [(x, y), (x, z), (y, z)] {
        if !g.is_edge(a, b) {
            return Err(ReconstructError::NotAdjacent { p: a, x: b });
        }
    }
    if double_perp_of_pair(g, x, y)?.contains(&z) {
        return Err(ReconstructError::CollinearTriple { x, y, z });
    }
    let mut out = BitSet::new(g.n());
    g.closed_perp_of(&s, &mut out);
    Ok(out.to_vec())
}

/// Rebuilds a geometry whose collinearity graph is `g`: the lines are the
/// distinct extended rays over all edges. Fails unless the result
/// reproduces `g` exactly.
pub fn build_geometry(g: &Graph) -> Result<Geometry, ReconstructError> {
    let q = height(g)?;
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for p in 0..g.n() {
        for x in g.neighbors(p) {
            if x < p {
                continue;
            }
            lines.insert(extended_ray_at_height(g, p, x, q)?.vertices);
        }
    }
    let mut geo = Geometry::new(g.n(), lines.into_iter().collect())?;
    let h = geo.point_graph();
    for a in 0..g.n() {
        if h.row(a) != g.row(a) {
            for b in 0..g.n() {
                if h.is_edge(a, b) != g.is_edge(a, b) {
                    return Err(ReconstructError::PointGraphMismatch {
                        a,
                        b,
                        adjacent: g.is_edge(a, b),
                        on_line: h.is_edge(a, b),
                    });
                }
            }
        }
    }
    geo.set_labels(g.labels().map(|l| l.to_vec()))?;
    Ok(geo)
}

/// Contracts every ray of `part` to one vertex. Two rays are adjacent in
/// the quotient iff all their cross pairs are adjacent in `l`; a partial
/// set of cross edges means `part` is not a clique-extension partition.
pub fn ray_quotient(l: &Graph, part: &RayPartition) -> Result<Graph, ReconstructError> {
    if part.n() != l.n() {
        return Err(ReconstructError::PartitionMismatch { partition_n: part.n(), graph_n: l.n() });
    }
    let k = part.rays.len();
    let full = part.q * part.q;
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let mut cross = 0;
            for &a in &part.rays[i] {
                for &b in &part.rays[j] {
                    if l.is_edge(a, b) {
                        cross += 1;
                    }
                }
            }
            if cross == full {
                edges.push((i, j));
            } else if cross != 0 {
                return Err(ReconstructError::InconsistentCrossEdges { a: i, b: j });
            }
        }
    }
    Ok(Graph::from_edges(k, &edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{polar_space, PolarKind};
    use crate::graph::tests::petersen;

    fn w52_graph() -> (Geometry, Graph) {
        let d = polar_space(PolarKind::W, 5, 2).unwrap();
        let g = d.point_graph();
        (d, g)
    }

    #[test]
    fn rays_of_a_planted_extension() {
        let l = petersen().clique_extension(3).unwrap();
        let part = recover_rays(&l).unwrap();
        assert_eq!(part.q(), 3);
        assert_eq!(part.rays().len(), 10);
        for (v, ray) in part.rays().iter().enumerate() {
            assert_eq!(ray, &vec![3 * v, 3 * v + 1, 3 * v + 2]);
        }
        assert!((0..30).all(|u| part.ray_of()[u] == u / 3));
    }

    #[test]
    fn petersen_itself_has_singleton_rays() {
        assert_eq!(recover_rays(&petersen()).unwrap_err(), ReconstructError::HeightTooSmall);
    }

    #[test]
    fn complete_graph_rays_cover_everything() {
        let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(
            recover_rays(&k3).unwrap_err(),
            ReconstructError::RayCoversGraph { vertex: 0 }
        );
    }

    #[test]
    fn local_rays_of_a_polar_space_are_its_lines() {
        let (_, g) = w52_graph();
        let (local, _) = g.local_graph(0).unwrap();
        let part = recover_rays(&local).unwrap();
        assert_eq!(part.q(), 2);
        assert_eq!(part.rays().len(), 15);
    }

    #[test]
    fn heights_of_known_graphs() {
        let (_, g) = w52_graph();
        assert_eq!(height(&g).unwrap(), 2);
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        assert_eq!(
            height(&c6).unwrap_err(),
            ReconstructError::AtVertex { vertex: 0, source: Box::new(ReconstructError::HeightTooSmall) }
        );
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            height(&two).unwrap_err(),
            ReconstructError::Graph(GraphError::DisconnectedGraph)
        ));
    }

    #[test]
    fn extended_ray_is_the_line_through_the_pair() {
        let (d, g) = w52_graph();
        let line = &d.lines()[0];
        let r = extended_ray(&g, line[0], line[1]).unwrap();
        assert_eq!(&r.vertices, line);
        assert_eq!(r.generators, (line[0], line[1]));
        // symmetric in the generating pair
        assert_eq!(extended_ray(&g, line[1], line[0]).unwrap(), r);
    }

    #[test]
    fn extended_ray_rejects_bad_pairs() {
        let (_, g) = w52_graph();
        let far = (1..63).find(|&u| !g.is_edge(0, u)).unwrap();
        assert_eq!(
            extended_ray(&g, 0, far).unwrap_err(),
            ReconstructError::NotAdjacent { p: 0, x: far }
        );
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(
            extended_ray(&k4, 0, 1).unwrap_err(),
            ReconstructError::WrongRaySize { p: 0, x: 1, size: 4, expected: None }
        );
    }

    #[test]
    fn two_point_determination_on_w52() {
        let (d, g) = w52_graph();
        for line in d.lines() {
            for (i, &u) in line.iter().enumerate() {
                for &v in &line[i + 1..] {
                    let r = extended_ray_at_height(&g, u, v, 2).unwrap();
                    assert_eq!(&r.vertices, line);
                }
            }
        }
    }

    #[test]
    fn plane_span_recovers_a_singular_plane() {
        let (d, g) = w52_graph();
        let maximals = crate::geometry::maximal_singular_subspaces(&d).unwrap();
        let plane = maximals.iter().find(|m| m.len() == 7).unwrap();
        let (x, y) = (plane[0], plane[1]);
        let line = extended_ray_at_height(&g, x, y, 2).unwrap();
        let z = *plane.iter().find(|v| !line.vertices.contains(v)).unwrap();
        assert_eq!(plane_span(&g, x, y, z).unwrap(), *plane);
        let on_line = line.vertices[2];
        assert_eq!(
            plane_span(&g, x, y, on_line).unwrap_err(),
            ReconstructError::CollinearTriple { x, y, z: on_line }
        );
    }

    #[test]
    fn build_geometry_round_trips_w52() {
        let (d, g) = w52_graph();
        let rebuilt = build_geometry(&g).unwrap();
        assert_eq!(rebuilt.lines(), d.lines());
        assert_eq!(rebuilt.point_graph(), g);
    }

    #[test]
    fn build_geometry_rejects_k4() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(
            build_geometry(&k4).unwrap_err(),
            ReconstructError::AtVertex { .. }
        ));
    }

    #[test]
    fn quotient_inverts_clique_extension() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let l = c5.clique_extension(2).unwrap();
        let part = recover_rays(&l).unwrap();
        let back = ray_quotient(&l, &part).unwrap();
        assert_eq!(back, c5);
    }

    #[test]
    fn local_quotient_of_w52_is_a_smaller_polar_graph() {
        let (_, g) = w52_graph();
        let (local, _) = g.local_graph(5).unwrap();
        let part = recover_rays(&local).unwrap();
        let quotient = ray_quotient(&local, &part).unwrap();
        let w32 = polar_space(PolarKind::W, 3, 2).unwrap().point_graph();
        assert!(crate::graph::are_isomorphic(&quotient, &w32).unwrap().is_some());
    }

    #[test]
    fn inconsistent_partition_is_reported() {
        // 2-clique extension of C5, with one cross edge removed
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let l = c5.clique_extension(2).unwrap();
        let part = recover_rays(&l).unwrap();
        let mut edges = Vec::new();
        for a in 0..l.n() {
            for b in a + 1..l.n() {
                if l.is_edge(a, b) && (a, b) != (0, 2) {
                    edges.push((a, b));
                }
            }
        }
        let broken = Graph::from_edges(l.n(), &edges).unwrap();
        assert_eq!(
            ray_quotient(&broken, &part).unwrap_err(),
            ReconstructError::InconsistentCrossEdges { a: 0, b: 1 }
        );
        let tiny = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            ray_quotient(&tiny, &part).unwrap_err(),
            ReconstructError::PartitionMismatch { .. }
        ));
    }
}
