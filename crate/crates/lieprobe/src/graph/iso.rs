//! Colour refinement and isomorphism testing.
//!
//! `are_isomorphic` is a refinement-guided backtracking search. It is not a
//! general-purpose solver; the graphs we compare are either small or highly
//! structured, and the pre-checks (degree sequences, triangle counts, and
//! double-perp size profiles) separate the classic impostor pairs such as
//! the rook and Shrikhande graphs, or a symplectic and a parabolic quadric
//! space on shared parameters, before any search starts.

use super::{BitSet, Graph, GraphError};
use std::collections::BTreeMap;

/// Iterated 1-dimensional refinement of an initial colouring. Colours in
/// the result are numbered by sorted signature, so they are independent of
/// the vertex order used to build the graph. Without an initial colouring
/// all vertices start equal.
pub fn color_refine(g: &Graph, initial: Option<&[u32]>) -> Vec<u32> {
    let n = g.n();
    let mut colors: Vec<u32> = match initial {
        Some(c) => {
            assert_eq!(c.len(), n, "initial colouring length mismatch");
            c.to_vec()
        }
        None => vec![0; n],
    };
    let mut classes = count_classes(&colors);
    loop {
        let next = refine_once(g, &colors);
        let next_classes = count_classes(&next);
        if next_classes == classes {
            return next;
        }
        classes = next_classes;
        colors = next;
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut seen: Vec<u32> = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// One refinement round: the new colour of v is determined by its old
/// colour together with the multiset of neighbour colours.
fn refine_once(g: &Graph, colors: &[u32]) -> Vec<u32> {
    let sigs: Vec<(Vec<u32>, usize)> = (0..g.n())
        .map(|v| {
            let mut sig = vec![colors[v]];
            let mut nbr: Vec<u32> = g.neighbors(v).map(|u| colors[u]).collect();
            nbr.sort_unstable();
            sig.extend(nbr);
            (sig, v)
        })
        .collect();
    let mut order: Vec<usize> = (0..sigs.len()).collect();
    order.sort_by(|&a, &b| sigs[a].0.cmp(&sigs[b].0));
    let mut out = vec![0u32; g.n()];
    let mut color = 0u32;
    for w in 0..order.len() {
        if w > 0 && sigs[order[w]].0 != sigs[order[w - 1]].0 {
            color += 1;
        }
        out[sigs[order[w]].1] = color;
    }
    out
}

/// Joint refinement of two graphs under a shared signature table. Returns
/// None if the colour histograms ever diverge (the graphs cannot be
/// isomorphic), otherwise the stable colourings.
fn refine_pair(
    g: &Graph,
    h: &Graph,
    init_g: &[u32],
    init_h: &[u32],
) -> Option<(Vec<u32>, Vec<u32>)> {
    let mut cg = init_g.to_vec();
    let mut ch = init_h.to_vec();
    loop {
        let mut table: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        let sig_of = |graph: &Graph, colors: &[u32], v: usize| {
            let mut sig = vec![colors[v]];
            let mut nbr: Vec<u32> = graph.neighbors(v).map(|u| colors[u]).collect();
            nbr.sort_unstable();
            sig.extend(nbr);
            sig
        };
        let sigs_g: Vec<Vec<u32>> = (0..g.n()).map(|v| sig_of(g, &cg, v)).collect();
        let sigs_h: Vec<Vec<u32>> = (0..h.n()).map(|v| sig_of(h, &ch, v)).collect();
        let assign = |sigs: Vec<Vec<u32>>, table: &mut BTreeMap<Vec<u32>, u32>| {
            sigs.into_iter()
                .map(|s| {
                    let next = table.len() as u32;
                    *table.entry(s).or_insert(next)
                })
                .collect::<Vec<u32>>()
        };
        let ng = assign(sigs_g, &mut table);
        let nh = assign(sigs_h, &mut table);
        if histogram(&ng) != histogram(&nh) {
            return None;
        }
        let stable = count_classes(&ng) == count_classes(&cg)
            && count_classes(&nh) == count_classes(&ch);
        cg = ng;
        ch = nh;
        if stable {
            return Some((cg, ch));
        }
    }
}

fn histogram(colors: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Sorted multiset of |closed_perp({v,u})| over neighbours u, plus the same
/// over vertices at distance two. Cheap, and sharp enough to split pairs
/// that plain refinement cannot (rook vs Shrikhande, symplectic vs
/// parabolic collinearity graphs).
fn perp_profile(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let closed: Vec<BitSet> = (0..n).map(|v| g.closed_row(v)).collect();
    let mut profiles = Vec::with_capacity(n);
    let mut pair = BitSet::new(n);
    let mut dp = BitSet::new(n);
    for v in 0..n {
        let mut prof = Vec::new();
        for u in 0..n {
            if u == v {
                continue;
            }
            let adjacent = g.is_edge(u, v);
            let dist2 = !adjacent && g.row(u).and_count(g.row(v)) > 0;
            if !adjacent && !dist2 {
                continue;
            }
            pair.clone_from(&closed[v]);
            pair.and_assign(&closed[u]);
            g.closed_perp_of(&pair, &mut dp);
            // tag distance so adjacent and distance-2 multisets stay apart
            prof.push(dp.count() * 2 + adjacent as usize);
        }
        prof.sort_unstable();
        profiles.push(prof);
    }
    profiles
}

const ISO_SIZE_LIMIT: usize = 2500;
const PROFILE_LIMIT: usize = 700;
const NODE_BUDGET: usize = 400_000;

/// Isomorphism test with an explicit witness: `Some(map)` sends vertex v of
/// `g` to `map[v]` of `h` and is re-verified edge by edge before being
/// returned. `None` means no isomorphism exists.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>, GraphError> {
    for x in [g, h] {
        if x.n() > ISO_SIZE_LIMIT {
            return Err(GraphError::SizeLimitExceeded { n: x.n(), limit: ISO_SIZE_LIMIT });
        }
    }
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let n = g.n();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }

    let mut deg_g: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut deg_h: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    deg_g.sort_unstable();
    deg_h.sort_unstable();
    if deg_g != deg_h {
        return Ok(None);
    }

    // Initial colours from per-vertex invariants; double perps only at
    // sizes where the quadratic cost is negligible.
    let (init_g, init_h) = if n <= PROFILE_LIMIT {
        let pg = perp_profile(g);
        let ph = perp_profile(h);
        let mut table: BTreeMap<&Vec<usize>, u32> = BTreeMap::new();
        for p in pg.iter().chain(&ph) {
            let next = table.len() as u32;
            table.entry(p).or_insert(next);
        }
        let ig: Vec<u32> = pg.iter().map(|p| table[p]).collect();
        let ih: Vec<u32> = ph.iter().map(|p| table[p]).collect();
        (ig, ih)
    } else {
        (vec![0; n], vec![0; n])
    };

    let (cg, ch) = match refine_pair(g, h, &init_g, &init_h) {
        Some(pair) => pair,
        None => return Ok(None),
    };

    let mut nodes = 0usize;
    let found = match search(g, h, &cg, &ch, &mut nodes) {
        Ok(f) => f,
        Err(()) => return Err(GraphError::SizeLimitExceeded { n, limit: ISO_SIZE_LIMIT }),
    };
    match found {
        Some(map) => {
            debug_assert!(verify_map(g, h, &map));
            if verify_map(g, h, &map) {
                Ok(Some(map))
            } else {
                panic!("isomorphism search produced an invalid witness");
            }
        }
        None => Ok(None),
    }
}

fn verify_map(g: &Graph, h: &Graph, map: &[usize]) -> bool {
    if map.len() != g.n() {
        return false;
    }
    let mut seen = vec![false; h.n()];
    for &w in map {
        if w >= h.n() || seen[w] {
            return false;
        }
        seen[w] = true;
    }
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.is_edge(u, v) != h.is_edge(map[u], map[v]) {
                return false;
            }
        }
    }
    true
}

/// Individualize-refine backtracking. Colourings are assumed jointly
/// refined with equal histograms. Err(()) signals budget exhaustion.
fn search(
    g: &Graph,
    h: &Graph,
    cg: &[u32],
    ch: &[u32],
    nodes: &mut usize,
) -> Result<Option<Vec<usize>>, ()> {
    *nodes += 1;
    if *nodes > NODE_BUDGET {
        return Err(());
    }
    let n = g.n();
    // Smallest non-singleton colour class; ties to the lowest colour.
    let hist = histogram(cg);
    let target = hist
        .iter()
        .filter(|(_, &count)| count >= 2)
        .min_by_key(|(&c, &count)| (count, c))
        .map(|(&c, _)| c);

    let Some(target) = target else {
        // Discrete colouring: read the map off matching colours.
        let mut by_color: BTreeMap<u32, usize> = BTreeMap::new();
        for (v, &c) in ch.iter().enumerate() {
            by_color.insert(c, v);
        }
        let map: Vec<usize> = cg.iter().map(|c| by_color[c]).collect();
        return Ok(verify_map(g, h, &map).then_some(map));
    };

    let v = (0..n).find(|&v| cg[v] == target).unwrap();
    let fresh = cg.iter().chain(ch).max().unwrap() + 1;
    let mut cg2 = cg.to_vec();
    cg2[v] = fresh;
    for w in 0..n {
        if ch[w] != target {
            continue;
        }
        let mut ch2 = ch.to_vec();
        ch2[w] = fresh;
        if let Some((rg, rh)) = refine_pair(g, h, &cg2, &ch2) {
            if let Some(map) = search(g, h, &rg, &rh, nodes)? {
                return Ok(Some(map));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    /// 4x4 rook graph: cells of a 4x4 board, adjacent in the same row or
    /// column.
    pub(crate) fn rook4() -> Graph {
        let mut g = Graph::new(16);
        for a in 0..16 {
            for b in a + 1..16 {
                if a / 4 == b / 4 || a % 4 == b % 4 {
                    g.add_edge(a, b).unwrap();
                }
            }
        }
        g
    }

    /// Shrikhande graph as the Cayley graph of Z4 x Z4 with connection set
    /// {±(1,0), ±(0,1), ±(1,1)}.
    pub(crate) fn shrikhande() -> Graph {
        let mut g = Graph::new(16);
        let conn = [(1usize, 0usize), (0, 1), (1, 1), (3, 0), (0, 3), (3, 3)];
        for x in 0..4 {
            for y in 0..4 {
                for &(dx, dy) in &conn {
                    let u = x * 4 + y;
                    let v = ((x + dx) % 4) * 4 + (y + dy) % 4;
                    if u < v {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
        }
        g
    }

    #[test]
    fn refinement_splits_path_by_eccentricity() {
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let c = color_refine(&p4, None);
        assert_eq!(c[0], c[3]);
        assert_eq!(c[1], c[2]);
        assert_ne!(c[0], c[1]);
    }

    #[test]
    fn refinement_respects_initial_colours() {
        let c4 = cycle(4);
        let c = color_refine(&c4, Some(&[1, 0, 0, 0]));
        // individualizing vertex 0 separates its antipode from its
        // neighbours
        assert_ne!(c[2], c[1]);
        assert_eq!(c[1], c[3]);
    }

    #[test]
    fn vertex_order_does_not_change_colour_numbers() {
        let g1 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let g2 = Graph::from_edges(5, &[(4, 3), (3, 2), (2, 1), (1, 0)]).unwrap();
        assert_eq!(color_refine(&g1, None), color_refine(&g2, None));
    }

    #[test]
    fn relabelled_petersen_is_isomorphic() {
        let g = crate::graph::tests::petersen();
        // relabel v -> (3v + 1) mod 10
        let mut h = Graph::new(10);
        for u in 0..10 {
            for v in g.neighbors(u) {
                if v > u {
                    h.add_edge((3 * u + 1) % 10, (3 * v + 1) % 10).unwrap();
                }
            }
        }
        let map = are_isomorphic(&g, &h).unwrap().expect("isomorphic");
        for u in 0..10 {
            for v in u + 1..10 {
                assert_eq!(g.is_edge(u, v), h.is_edge(map[u], map[v]));
            }
        }
    }

    #[test]
    fn rook_and_shrikhande_are_not_isomorphic() {
        let r = rook4();
        let s = shrikhande();
        // same strongly regular parameters
        assert_eq!(r.edge_count(), s.edge_count());
        assert_eq!(r.degree(0), 6);
        assert_eq!(s.degree(0), 6);
        assert_eq!(are_isomorphic(&r, &s).unwrap(), None);
    }

    #[test]
    fn different_sizes_and_counts_reject_quickly() {
        assert_eq!(are_isomorphic(&cycle(5), &cycle(6)).unwrap(), None);
        let c6 = cycle(6);
        let two_triangles =
            Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(are_isomorphic(&c6, &two_triangles).unwrap(), None);
    }

    #[test]
    fn size_guard_fires() {
        let big = Graph::new(2501);
        assert_eq!(
            are_isomorphic(&big, &big),
            Err(GraphError::SizeLimitExceeded { n: 2501, limit: 2500 })
        );
    }

    #[test]
    fn self_isomorphism_of_a_srg() {
        let r = rook4();
        let map = are_isomorphic(&r, &r).unwrap().expect("identity exists");
        assert_eq!(map.len(), 16);
    }
}
