//! Singular subspaces: closures, maximal enumeration, projective-space
//! verification, and the polar rank built from them.

use super::{induced_lines, AxiomReport, Geometry, GeometryError, Witness};
use crate::graph::{BitSet, Graph};
use std::collections::BTreeSet;

const SINGULAR_SIZE_LIMIT: usize = 5000;
const LATTICE_NODE_LIMIT: usize = 500_000;

/// Smallest singular subspace containing `s`: repeatedly absorb every line
/// meeting the set in two or more points, then confirm the result is still
/// a clique in the point graph.
pub fn singular_closure(d: &Geometry, s: &[usize]) -> Result<Vec<usize>, GeometryError> {
    let g = d.point_graph();
    singular_closure_with(d, &g, s)
}

pub(crate) fn singular_closure_with(
    d: &Geometry,
    g: &Graph,
    s: &[usize],
) -> Result<Vec<usize>, GeometryError> {
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            if a != b && !g.is_edge(a, b) {
                return Err(GeometryError::NotAClique { a, b });
            }
        }
    }
    let mut in_set = BitSet::new(d.n_points());
    for &p in s {
        in_set.set(p);
    }
    loop {
        let mut grew = false;
        for line in d.lines() {
            let inside = line.iter().filter(|&&p| in_set.test(p)).count();
            if inside >= 2 && inside < line.len() {
                for &p in line {
                    in_set.set(p);
                }
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let out = in_set.to_vec();
    for (i, &a) in out.iter().enumerate() {
        for &b in &out[i + 1..] {
            if !g.is_edge(a, b) {
                return Err(GeometryError::NotAClique { a, b });
            }
        }
    }
    Ok(out)
}

/// All maximal singular subspaces. In a gamma space these are exactly the
/// maximal cliques of the point graph (two points of a clique on a line
/// force the whole line in by the gamma property), so Bron-Kerbosch does
/// the work; otherwise a breadth-first walk of the closure lattice.
pub fn maximal_singular_subspaces(d: &Geometry) -> Result<Vec<Vec<usize>>, GeometryError> {
    if d.n_points() > SINGULAR_SIZE_LIMIT {
        return Err(GeometryError::SizeLimitExceeded {
            n: d.n_points(),
            limit: SINGULAR_SIZE_LIMIT,
        });
    }
    let g = d.point_graph();
    if super::check_gamma(d).holds {
        let cliques = g.maximal_cliques();
        debug_assert!(cliques
            .iter()
            .all(|c| singular_closure_with(d, &g, c).as_deref() == Ok(c)));
        return Ok(cliques);
    }

    let mut visited: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut maximal: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: Vec<Vec<usize>> = Vec::new();
    for p in 0..d.n_points() {
        let start = vec![p];
        if visited.insert(start.clone()) {
            queue.push(start);
        }
    }
    while let Some(s) = queue.pop() {
        if visited.len() > LATTICE_NODE_LIMIT {
            return Err(GeometryError::SizeLimitExceeded {
                n: visited.len(),
                limit: LATTICE_NODE_LIMIT,
            });
        }
        let mut extended = false;
        for c in 0..d.n_points() {
            if s.binary_search(&c).is_ok() || !s.iter().all(|&p| g.is_edge(p, c)) {
                continue;
            }
            let mut grown: Vec<usize> = s.clone();
            grown.push(c);
            grown.sort_unstable();
            match singular_closure_with(d, &g, &grown) {
                Ok(t) => {
                    extended = true;
                    if visited.insert(t.clone()) {
                        queue.push(t);
                    }
                }
                Err(_) => continue, // no singular subspace that way
            }
        }
        if !extended {
            maximal.insert(s);
        }
    }
    // Drop anything contained in a larger maximal (closure branches can
    // strand intermediate sets when extensions all fail the clique check).
    let list: Vec<Vec<usize>> = maximal.into_iter().collect();
    let mut out = Vec::new();
    'outer: for (i, s) in list.iter().enumerate() {
        for (j, t) in list.iter().enumerate() {
            if i != j && s.len() <= t.len() && is_subset(s, t) && s != t {
                continue 'outer;
            }
        }
        out.push(s.clone());
    }
    out.sort();
    Ok(out)
}

fn is_subset(s: &[usize], t: &[usize]) -> bool {
    s.iter().all(|p| t.binary_search(p).is_ok())
}

/// Integer k with (q^(k+1) - 1)/(q - 1) = m, if any.
fn projective_dimension(m: usize, q: u16) -> Option<usize> {
    let q = q as u128;
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for k in 0..64 {
        total += power;
        power *= q;
        match total.cmp(&(m as u128)) {
            std::cmp::Ordering::Equal => return Some(k),
            std::cmp::Ordering::Greater => return None,
            std::cmp::Ordering::Less => {}
        }
    }
    None
}

/// Verifies that the singular subspace `s` carries the structure of a
/// projective space over GF(q): the point count matches some dimension k,
/// induced lines have q+1 points, two points lie on exactly one induced
/// line, and two meeting lines close up into a (q^2+q+1)-point plane.
/// On success the report's rank field holds k.
pub fn check_projective_space(d: &Geometry, s: &[usize], q: u16) -> AxiomReport {
    check_projective_space_with(d, &d.incidence(), s, q)
}

fn pass_dim(k: usize) -> AxiomReport {
    let mut r = AxiomReport::pass("projective_space");
    r.rank = Some(k);
    r
}

/// Same check with the point-line incidence precomputed, so per-clique
/// calls inside rank computations can share one scan of the line set.
pub(crate) fn check_projective_space_with(
    d: &Geometry,
    inc: &[Vec<usize>],
    s: &[usize],
    q: u16,
) -> AxiomReport {
    let Some(k) = projective_dimension(s.len(), q) else {
        return AxiomReport::fail("projective_space", Witness::PointSet { points: s.to_vec() });
    };
    if k == 0 {
        return pass_dim(0);
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    let mut ids: Vec<usize> = s.iter().flat_map(|&p| inc[p].iter().copied()).collect();
    ids.sort_unstable();
    ids.dedup();
    let mut lines: Vec<(usize, &Vec<usize>)> = Vec::new();
    for &i in &ids {
        let line = &d.lines()[i];
        if line.iter().all(|p| sorted.binary_search(p).is_ok()) {
            lines.push((i, line));
        }
    }
    for &(i, line) in &lines {
        if line.len() != q as usize + 1 {
            return AxiomReport::fail("projective_space", Witness::Line { line: i });
        }
    }
    if sorted.len() <= 64 {
        projective_small(&sorted, &lines, q, k)
    } else {
        projective_general(&sorted, &lines, q, k)
    }
}

/// Word-sized subspaces run on u64 masks over local indices: rank checks
/// call this once per maximal clique, and big geometries have a lot of
/// those. Coverage here is a counting identity: distinct lines meet in at
/// most one point, so the pair sets they cover are disjoint.
fn projective_small(sorted: &[usize], lines: &[(usize, &Vec<usize>)], q: u16, k: usize) -> AxiomReport {
    let n = sorted.len();
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut masks: Vec<u64> = Vec::with_capacity(lines.len());
    for &(_, line) in lines {
        let mut m = 0u64;
        for p in line {
            m |= 1 << sorted.binary_search(p).unwrap();
        }
        masks.push(m);
    }
    for (a, &m1) in masks.iter().enumerate() {
        for &m2 in &masks[a + 1..] {
            let meet = m1 & m2;
            if meet.count_ones() >= 2 {
                let x = meet.trailing_zeros() as usize;
                let y = (meet & (meet - 1)).trailing_zeros() as usize;
                return AxiomReport::fail(
                    "projective_space",
                    Witness::PointPair { a: sorted[x], b: sorted[y] },
                );
            }
        }
    }
    let per_line = (q as usize + 1) * q as usize / 2;
    if masks.len() * per_line != n * (n - 1) / 2 {
        // some pair lies on no induced line; dig one out for the witness
        let mut cov: Vec<u64> = vec![0; n];
        for &m in &masks {
            let mut scan = m;
            while scan != 0 {
                let i = scan.trailing_zeros() as usize;
                scan &= scan - 1;
                cov[i] |= m;
            }
        }
        for i in 0..n {
            let low: u64 = if i == 63 { !0 } else { (1u64 << (i + 1)) - 1 };
            let missing = full & !cov[i] & !low;
            if missing != 0 {
                let j = missing.trailing_zeros() as usize;
                return AxiomReport::fail(
                    "projective_space",
                    Witness::PointPair { a: sorted[i], b: sorted[j] },
                );
            }
        }
        unreachable!("count mismatch implies an uncovered pair");
    }
    // meeting lines span planes of exactly q^2+q+1 points
    let plane_size = (q as usize) * (q as usize) + q as usize + 1;
    for (a, &m1) in masks.iter().enumerate() {
        for (b, &m2) in masks.iter().enumerate().skip(a + 1) {
            if (m1 & m2).count_ones() != 1 {
                continue;
            }
            let mut span = m1 | m2;
            loop {
                let mut grew = false;
                for &m in &masks {
                    if (m & span).count_ones() >= 2 && m & !span != 0 {
                        span |= m;
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
            if span.count_ones() as usize != plane_size {
                return AxiomReport::fail(
                    "projective_space",
                    Witness::LinePair { a: lines[a].0, b: lines[b].0 },
                );
            }
        }
    }
    pass_dim(k)
}

fn projective_general(
    sorted: &[usize],
    lines: &[(usize, &Vec<usize>)],
    q: u16,
    k: usize,
) -> AxiomReport {
    // unique induced line through every pair
    let mut pair_line: std::collections::HashMap<(usize, usize), usize> =
        std::collections::HashMap::new();
    for &(i, line) in lines {
        for (a_idx, &a) in line.iter().enumerate() {
            for &b in &line[a_idx + 1..] {
                if pair_line.insert((a, b), i).is_some() {
                    return AxiomReport::fail("projective_space", Witness::PointPair { a, b });
                }
            }
        }
    }
    for (x_idx, &a) in sorted.iter().enumerate() {
        for &b in &sorted[x_idx + 1..] {
            if !pair_line.contains_key(&(a, b)) {
                return AxiomReport::fail("projective_space", Witness::PointPair { a, b });
            }
        }
    }
    // meeting lines span planes of exactly q^2+q+1 points
    let plane_size = (q as usize) * (q as usize) + q as usize + 1;
    for (li, &(i, l1)) in lines.iter().enumerate() {
        for &(j, l2) in &lines[li + 1..] {
            let meet = l1.iter().filter(|p| l2.binary_search(p).is_ok()).count();
            if meet != 1 {
                continue;
            }
            let mut span: BTreeSet<usize> = l1.iter().chain(l2.iter()).copied().collect();
            loop {
                let mut grew = false;
                for &(_, line) in lines {
                    let inside = line.iter().filter(|p| span.contains(p)).count();
                    if inside >= 2 && inside < line.len() {
                        span.extend(line.iter().copied());
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
            if span.len() != plane_size {
                return AxiomReport::fail("projective_space", Witness::LinePair { a: i, b: j });
            }
        }
    }
    pass_dim(k)
}

/// Rank of a polar space: all maximal singular subspaces must be projective
/// spaces of a common dimension r-1. Requires a nondegenerate Shult space.
pub fn polar_rank(d: &Geometry) -> Result<AxiomReport, GeometryError> {
    if d.n_points() == 0 {
        let mut r = AxiomReport::pass("polar_space");
        r.rank = Some(0);
        return Ok(r);
    }
    let g = d.point_graph();
    if !super::check_shult_with(d, &g).holds {
        return Err(GeometryError::ShultViolated);
    }
    if let Some(point) = (0..d.n_points()).find(|&p| g.degree(p) == d.n_points() - 1) {
        return Err(GeometryError::DegenerateGeometry { point });
    }
    if d.lines().is_empty() {
        // coclique: the maximal singular subspaces are the points
        let mut r = AxiomReport::pass("polar_space");
        r.rank = Some(1);
        return Ok(r);
    }
    if d.n_points() > SINGULAR_SIZE_LIMIT {
        return Err(GeometryError::SizeLimitExceeded {
            n: d.n_points(),
            limit: SINGULAR_SIZE_LIMIT,
        });
    }
    let q = d.lines()[0].len() as u16 - 1;
    // Shult rules out counts of 0 and the strictly-between range, so the
    // gamma property holds and the maximal singular subspaces are exactly
    // the maximal cliques.
    let maximals = g.maximal_cliques();
    let inc = d.incidence();
    let mut dims: Vec<usize> = Vec::new();
    for m in &maximals {
        let rep = check_projective_space_with(d, &inc, m, q);
        match (rep.holds, rep.rank) {
            (true, Some(k)) => {
                if !dims.contains(&k) {
                    dims.push(k);
                }
            }
            _ => return Err(GeometryError::MixedSingularDimensions { dims }),
        }
    }
    dims.sort_unstable();
    if dims.len() != 1 {
        return Err(GeometryError::MixedSingularDimensions { dims });
    }
    let mut r = AxiomReport::pass("polar_space");
    r.rank = Some(dims[0] + 1);
    Ok(r)
}

/// The geometry induced on the common perp of two non-collinear points:
/// its points are everything collinear with both, its lines the original
/// lines lying fully inside, reindexed. Original indices are kept as
/// labels.
pub fn perp_geometry(d: &Geometry, x: usize, y: usize) -> Result<Geometry, GeometryError> {
    let n = d.n_points();
    for p in [x, y] {
        if p >= n {
            return Err(GeometryError::PointOutOfRange { line: usize::MAX, point: p, n });
        }
    }
    let g = d.point_graph();
    if x == y || g.is_edge(x, y) {
        return Err(GeometryError::CollinearPair { a: x, b: y });
    }
    let mut common = g.row(x).clone();
    common.and_assign(g.row(y));
    let points = common.to_vec();
    let lines = induced_lines(d, &points);
    let mut out = Geometry::new(points.len(), lines)?;
    let labels = points
        .iter()
        .map(|&p| match d.labels() {
            Some(l) => l[p].clone(),
            None => p.to_string(),
        })
        .collect();
    out.set_labels(Some(labels))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{fano, grid3, one_line};
    use super::*;
    use crate::algebra::{Field, Form};

    /// W(3,2): generalized quadrangle from the standard alternating form on
    /// GF(2)^4.
    fn w3() -> Geometry {
        let f = Field::new(2).unwrap();
        let form = Form::alternating_standard(&f, 4).unwrap();
        let points = form.isotropic_projective_points();
        let index = |v: &[u8]| points.iter().position(|p| p == v).unwrap();
        let mut lines = Vec::new();
        for sub in form.totally_singular_subspaces(2) {
            let mut line: Vec<usize> = sub.projective_points(&f).iter().map(|v| index(v)).collect();
            line.sort_unstable();
            lines.push(line);
        }
        Geometry::new(points.len(), lines).unwrap()
    }

    #[test]
    fn closure_of_a_line_is_the_line() {
        let d = grid3();
        assert_eq!(singular_closure(&d, &[0, 1]).unwrap(), vec![0, 1, 2]);
        assert_eq!(singular_closure(&d, &[4]).unwrap(), vec![4]);
        assert_eq!(
            singular_closure(&d, &[0, 4]),
            Err(GeometryError::NotAClique { a: 0, b: 4 })
        );
    }

    #[test]
    fn closure_in_fano_grows_to_the_plane() {
        // two points span a line; adding a third off the line forces all 7
        let d = fano();
        assert_eq!(singular_closure(&d, &[0, 1]).unwrap(), vec![0, 1, 2]);
        assert_eq!(singular_closure(&d, &[0, 1, 3]).unwrap().len(), 7);
    }

    #[test]
    fn maximal_singulars_of_grid_are_lines() {
        let m = maximal_singular_subspaces(&grid3()).unwrap();
        assert_eq!(m.len(), 6);
        assert!(m.iter().all(|s| s.len() == 3));
    }

    #[test]
    fn maximal_singulars_of_w3_are_its_lines() {
        let d = w3();
        assert_eq!(d.n_points(), 15);
        assert_eq!(d.lines().len(), 15);
        let m = maximal_singular_subspaces(&d).unwrap();
        assert_eq!(m.len(), 15);
        assert!(m.iter().all(|s| s.len() == 3));
    }

    #[test]
    fn lattice_walk_matches_clique_route_on_gamma_inputs() {
        // force the non-gamma path on a gamma input by calling the lattice
        // walk indirectly: a coclique geometry has no lines at all
        let d = Geometry::new(4, vec![]).unwrap();
        let m = maximal_singular_subspaces(&d).unwrap();
        assert_eq!(m, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn projective_space_checks() {
        let d = fano();
        let all: Vec<usize> = (0..7).collect();
        let rep = check_projective_space(&d, &all, 2);
        assert!(rep.holds);
        assert_eq!(rep.rank, Some(2));
        // a 6-point subset has no valid dimension
        let rep = check_projective_space(&d, &all[..6], 2);
        assert!(!rep.holds);
        // a single line is a dimension-1 projective space
        let rep = check_projective_space(&one_line(), &[0, 1, 2], 2);
        assert!(rep.holds);
        assert_eq!(rep.rank, Some(1));
        // wrong q: 7 points is not a GF(3) count
        assert!(!check_projective_space(&d, &all, 3).holds);
    }

    #[test]
    fn pg32_pointset_verifies_at_dimension_3() {
        // all of PG(3,2) with its 35 lines
        let f = Field::new(2).unwrap();
        let pts = crate::algebra::enumerate_subspaces(&f, 4, 1).unwrap();
        let reps: Vec<Vec<u8>> = pts.iter().map(|s| s.basis()[0].to_vec()).collect();
        let mut lines = Vec::new();
        for l in crate::algebra::enumerate_subspaces(&f, 4, 2).unwrap() {
            let mut line: Vec<usize> = l
                .projective_points(&f)
                .iter()
                .map(|v| reps.iter().position(|r| r == v).unwrap())
                .collect();
            line.sort_unstable();
            lines.push(line);
        }
        let d = Geometry::new(15, lines).unwrap();
        let all: Vec<usize> = (0..15).collect();
        let rep = check_projective_space(&d, &all, 2);
        assert!(rep.holds);
        assert_eq!(rep.rank, Some(3));
        // its maximal singular subspace is everything: a projective space
        // is a clique
        let m = maximal_singular_subspaces(&d).unwrap();
        assert_eq!(m, vec![all]);
    }

    /// Cyclic Steiner triple system on 15 points that is not a projective
    /// space: two points still span a unique line, but every triangle
    /// generates all 15 points instead of a 7-point plane.
    fn cyclic_triple_system() -> Geometry {
        let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
        for i in 0..15 {
            for base in [[0usize, 1, 4], [0, 2, 9], [0, 5, 10]] {
                let mut l: Vec<usize> = base.iter().map(|&x| (x + i) % 15).collect();
                l.sort_unstable();
                lines.insert(l);
            }
        }
        Geometry::new(15, lines.into_iter().collect()).unwrap()
    }

    #[test]
    fn non_projective_triple_system_fails_plane_closure() {
        let d = cyclic_triple_system();
        assert_eq!(d.lines().len(), 35);
        let all: Vec<usize> = (0..15).collect();
        let rep = check_projective_space(&d, &all, 2);
        assert!(!rep.holds);
        assert!(matches!(rep.witness, Some(Witness::LinePair { .. })));
        // the allocating path used above 64 points reaches the same verdict
        let lines: Vec<(usize, &Vec<usize>)> = d.lines().iter().enumerate().collect();
        let rep = projective_general(&all, &lines, 2, 3);
        assert!(!rep.holds);
        assert!(matches!(rep.witness, Some(Witness::LinePair { .. })));
    }

    #[test]
    fn allocating_path_accepts_fano() {
        let d = fano();
        let lines: Vec<(usize, &Vec<usize>)> = d.lines().iter().enumerate().collect();
        let all: Vec<usize> = (0..7).collect();
        let rep = projective_general(&all, &lines, 2, 2);
        assert!(rep.holds);
        assert_eq!(rep.rank, Some(2));
    }

    #[test]
    fn wide_subspaces_use_the_allocating_path() {
        // a single 66-point line is a dimension-1 space over GF(65) as far
        // as the counting goes; no meeting line pairs to close up
        let d = Geometry::new(66, vec![(0..66).collect()]).unwrap();
        let all: Vec<usize> = (0..66).collect();
        let rep = check_projective_space(&d, &all, 65);
        assert!(rep.holds);
        assert_eq!(rep.rank, Some(1));
        // same point count with no lines: the first pair is uncovered
        let d = Geometry::new(66, vec![]).unwrap();
        let rep = check_projective_space(&d, &all, 65);
        assert!(!rep.holds);
        assert!(matches!(rep.witness, Some(Witness::PointPair { a: 0, b: 1 })));
    }

    #[test]
    fn polar_rank_of_grid_and_quadrangle() {
        assert_eq!(polar_rank(&grid3()).unwrap().rank, Some(2));
        assert_eq!(polar_rank(&w3()).unwrap().rank, Some(2));
    }

    #[test]
    fn polar_rank_rejects_degenerate_and_non_shult() {
        assert_eq!(
            polar_rank(&fano()),
            Err(GeometryError::DegenerateGeometry { point: 0 })
        );
        let disjoint = Geometry::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(polar_rank(&disjoint), Err(GeometryError::ShultViolated));
    }

    #[test]
    fn perp_geometry_on_the_quadrangle() {
        let d = w3();
        let g = d.point_graph();
        let (mut x, mut y) = (0, 0);
        'search: for a in 0..15 {
            for b in a + 1..15 {
                if !g.is_edge(a, b) {
                    (x, y) = (a, b);
                    break 'search;
                }
            }
        }
        let perp = perp_geometry(&d, x, y).unwrap();
        // in the GQ of order (2,2) a non-collinear pair has exactly 3
        // common neighbours, pairwise non-collinear: no induced lines
        assert_eq!(perp.n_points(), 3);
        assert!(perp.lines().is_empty());
        assert_eq!(
            perp_geometry(&d, 0, 0),
            Err(GeometryError::CollinearPair { a: 0, b: 0 })
        );
    }

    #[test]
    fn perp_of_adjacent_pair_is_rejected() {
        let d = grid3();
        assert_eq!(perp_geometry(&d, 0, 1), Err(GeometryError::CollinearPair { a: 0, b: 1 }));
        // grid distance-2 perp: exactly the two crossing cells
        let perp = perp_geometry(&d, 0, 4).unwrap();
        assert_eq!(perp.n_points(), 2);
        assert_eq!(perp.labels().unwrap(), &["1".to_string(), "3".to_string()]);
    }
}
