//! Axiom checkers. The gamma and Shult checks are the inner loop of
//! recognition, so they count line-neighbours with bit-sliced adders over
//! whole adjacency rows instead of per-point loops.

use super::perps::{induced_on, sweep_perps, InducedScratch, LineLookup};
use super::singular::polar_rank;
use super::{AxiomReport, Geometry, Witness};
use crate::graph::{BitSet, Graph};
use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;

/// Every line has at least three points and two points lie on at most one
/// common line.
pub fn check_partial_linear(d: &Geometry) -> AxiomReport {
    for (i, line) in d.lines().iter().enumerate() {
        if line.len() < 3 {
            return AxiomReport::fail("partial_linear", Witness::Line { line: i });
        }
    }
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, line) in d.lines().iter().enumerate() {
        for (k, &a) in line.iter().enumerate() {
            for &b in &line[k + 1..] {
                if seen.insert((a, b), i).is_some() {
                    return AxiomReport::fail("partial_linear", Witness::PointPair { a, b });
                }
            }
        }
    }
    AxiomReport::pass("partial_linear")
}

/// Per non-incident point-line pair, the points of the line collinear with
/// the point number 0, 1, or all. Returns the per-line violation masks so
/// the Shult check can share the scan.
fn line_count_violations(
    d: &Geometry,
    g: &Graph,
    forbid_zero: bool,
) -> Option<(usize, usize)> {
    let n = d.n_points();
    let full = BitSet::full(n);
    let mut ones = BitSet::new(n); // count >= 1
    let mut twos = BitSet::new(n); // count >= 2
    let mut all = BitSet::new(n);
    let mut line_mask = BitSet::new(n);
    let mut carry = BitSet::new(n);
    let mut viol = BitSet::new(n);
    for (i, line) in d.lines().iter().enumerate() {
        ones.zero();
        twos.zero();
        all.copy_from(&full);
        line_mask.zero();
        for &p in line {
            let row = g.row(p);
            carry.copy_from(&ones);
            carry.and_assign(row);
            ones.or_assign(row);
            twos.or_assign(&carry);
            all.and_assign(row);
            line_mask.set(p);
        }
        // violation: 2 <= count < |L| for a point off the line
        viol.copy_from(&twos);
        viol.and_not_assign(&all);
        viol.and_not_assign(&line_mask);
        if forbid_zero {
            carry.copy_from(&full);
            carry.and_not_assign(&ones);
            carry.and_not_assign(&line_mask);
            viol.or_assign(&carry);
        }
        if let Some(p) = viol.first_set() {
            return Some((p, i));
        }
    }
    None
}

/// Gamma space: the count above is never strictly between 1 and |L|.
pub fn check_gamma(d: &Geometry) -> AxiomReport {
    check_gamma_with(d, &d.point_graph())
}

pub(crate) fn check_gamma_with(d: &Geometry, g: &Graph) -> AxiomReport {
    match line_count_violations(d, g, false) {
        Some((point, line)) => AxiomReport::fail("gamma", Witness::PointLine { point, line }),
        None => AxiomReport::pass("gamma"),
    }
}

/// Shult space: the count is never 0 either.
pub fn check_shult(d: &Geometry) -> AxiomReport {
    check_shult_with(d, &d.point_graph())
}

pub(crate) fn check_shult_with(d: &Geometry, g: &Graph) -> AxiomReport {
    match line_count_violations(d, g, true) {
        Some((point, line)) => AxiomReport::fail("shult", Witness::PointLine { point, line }),
        None => AxiomReport::pass("shult"),
    }
}

/// Degenerate: some point is collinear with every point. holds=true means
/// the geometry IS degenerate, with such a point as witness.
pub fn check_degenerate(d: &Geometry) -> AxiomReport {
    let g = d.point_graph();
    for p in 0..d.n_points() {
        if g.degree(p) == d.n_points() - 1 {
            let mut r = AxiomReport::pass("degenerate");
            r.witness = Some(Witness::Point { point: p });
            return r;
        }
    }
    let mut r = AxiomReport::pass("degenerate");
    r.holds = false;
    r
}

/// Parapolar space of symplectic rank `r`: a connected gamma space where
/// every non-collinear pair perps to nothing, a point, or a polar space of
/// rank >= r-1, and no line perps to a clique. `strong` reports that no
/// distance-2 perp degenerates to a single point, `uniform` that all perp
/// ranks agree.
pub fn check_parapolar(d: &Geometry, r: usize) -> AxiomReport {
    let g = d.point_graph();
    if d.n_points() == 0 || !g.is_connected() {
        return AxiomReport::fail("parapolar", Witness::PointSet { points: vec![] });
    }
    let gamma = check_gamma_with(d, &g);
    if !gamma.holds {
        return AxiomReport::fail("parapolar", gamma.witness.unwrap());
    }

    // every line's perp contains two non-collinear points
    let n = d.n_points();
    let mut perp = BitSet::new(n);
    for (i, line) in d.lines().iter().enumerate() {
        let mut members = BitSet::new(n);
        for &p in line {
            members.set(p);
        }
        g.closed_perp_of(&members, &mut perp);
        let pts = perp.to_vec();
        let mut found = false;
        'outer: for (k, &a) in pts.iter().enumerate() {
            for &b in &pts[k + 1..] {
                if !g.is_edge(a, b) {
                    found = true;
                    break 'outer;
                }
            }
        }
        if !found {
            return AxiomReport::fail("parapolar", Witness::Line { line: i });
        }
    }

    let lookup = LineLookup::new(d);
    let mut scratch = InducedScratch::new(n);
    let mut strong = true;
    let mut ranks: BTreeSet<usize> = BTreeSet::new();
    let fail =
        |points: &[usize]| AxiomReport::fail("parapolar", Witness::PointSet { points: points.to_vec() });
    let broke = sweep_perps(&g, |v| {
        if v.points.len() == 1 {
            strong = false;
            return ControlFlow::Continue(());
        }
        if !v.canonical {
            return ControlFlow::Continue(());
        }
        let perp_geo = match induced_on(d, &g, &lookup, v.points, &mut scratch) {
            Ok(p) => p,
            Err(_) => return ControlFlow::Break(fail(v.points)),
        };
        match polar_rank(&perp_geo) {
            Ok(rep) => {
                let rank = rep.rank.unwrap();
                if rank < r.saturating_sub(1) {
                    let mut rep = fail(v.points);
                    rep.rank = Some(rank);
                    return ControlFlow::Break(rep);
                }
                if rank < 2 {
                    strong = false;
                }
                ranks.insert(rank);
                ControlFlow::Continue(())
            }
            Err(_) => ControlFlow::Break(fail(v.points)),
        }
    });
    if let Some(rep) = broke {
        return rep;
    }
    let mut rep = AxiomReport::pass("parapolar");
    rep.rank = Some(r);
    rep.strong = Some(strong);
    rep.uniform = Some(ranks.len() <= 1);
    rep
}

/// (q+1) x (q+1) grid: the right point and line counts, every point on
/// exactly two lines, two lines never sharing two points, and the lines
/// splitting into two parallel classes. That forces the rook graph: rows
/// and columns partition the points, so p -> (row, column) is a bijection
/// carrying collinearity to the product structure. Runs once per perp
/// during recognition, hence no model graph and no isomorphism search.
pub fn check_grid(d: &Geometry, q: u16) -> bool {
    let s = q as usize + 1;
    if d.n_points() != s * s || d.lines().len() != 2 * s {
        return false;
    }
    if !d.lines().iter().all(|l| l.len() == s) {
        return false;
    }
    let inc = d.incidence();
    if !inc.iter().all(|l| l.len() == 2) {
        return false;
    }
    let meet = |a: &[usize], b: &[usize]| {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    };
    // class of the first line: everything disjoint from it, plus itself
    let lines = d.lines();
    let mut first_class = vec![false; 2 * s];
    first_class[0] = true;
    for (i, line) in lines.iter().enumerate().skip(1) {
        match meet(&lines[0], line) {
            0 => first_class[i] = true,
            1 => {}
            _ => return false,
        }
    }
    if first_class.iter().filter(|&&c| c).count() != s {
        return false;
    }
    // within a class fully disjoint, across classes always meeting once
    for i in 0..2 * s {
        for j in i + 1..2 * s {
            let expected = usize::from(first_class[i] != first_class[j]);
            if meet(&lines[i], &lines[j]) != expected {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::super::tests::{fano, grid3, one_line};
    use super::super::witness_revalidates;
    use super::*;

    #[test]
    fn partial_linear_accepts_and_rejects() {
        assert!(check_partial_linear(&one_line()).holds);
        assert!(check_partial_linear(&fano()).holds);
        let short = Geometry::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let rep = check_partial_linear(&short);
        assert!(!rep.holds);
        assert!(witness_revalidates(&short, &rep));
        let repeated = Geometry::new(4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        let rep = check_partial_linear(&repeated);
        assert_eq!(rep.witness, Some(Witness::PointPair { a: 0, b: 1 }));
        assert!(witness_revalidates(&repeated, &rep));
    }

    #[test]
    fn gamma_holds_on_grid_and_line() {
        assert!(check_gamma(&one_line()).holds);
        assert!(check_gamma(&grid3()).holds);
        assert!(check_gamma(&fano()).holds);
    }

    #[test]
    fn gamma_fails_on_two_of_three() {
        // line {0,1,2}; point 3 collinear with 0 and 1 only
        let d = Geometry::new(4, vec![vec![0, 1, 2], vec![0, 3], vec![1, 3]]).unwrap();
        let rep = check_gamma(&d);
        assert!(!rep.holds);
        assert_eq!(rep.witness, Some(Witness::PointLine { point: 3, line: 0 }));
        assert!(witness_revalidates(&d, &rep));
    }

    #[test]
    fn shult_on_grid_fano_and_a_violator() {
        assert!(check_shult(&grid3()).holds);
        assert!(check_shult(&fano()).holds);
        assert!(check_shult(&one_line()).holds);
        // two disjoint lines: a point of one sees nothing of the other
        let d = Geometry::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let rep = check_shult(&d);
        assert!(!rep.holds);
        assert!(witness_revalidates(&d, &rep));
        // but that configuration is still a gamma space
        assert!(check_gamma(&d).holds);
    }

    #[test]
    fn degeneracy_detection() {
        // cone: every line through apex 0
        let cone = Geometry::new(5, vec![vec![0, 1, 2], vec![0, 3, 4]]).unwrap();
        let rep = check_degenerate(&cone);
        assert!(rep.holds);
        assert_eq!(rep.witness, Some(Witness::Point { point: 0 }));
        assert!(check_degenerate(&one_line()).holds);
        let rep = check_degenerate(&grid3());
        assert!(!rep.holds);
        assert!(witness_revalidates(&grid3(), &rep));
    }

    #[test]
    fn grid_check_accepts_grids_only() {
        assert!(check_grid(&grid3(), 2));
        assert!(!check_grid(&grid3(), 3));
        assert!(!check_grid(&fano(), 2));
    }

    #[test]
    fn rank_two_polar_spaces_are_not_parapolar() {
        // in a grid the perp of a line is the line itself: condition (iii)
        // has no non-collinear pair to offer
        let rep = check_parapolar(&grid3(), 2);
        assert!(!rep.holds);
        assert!(matches!(rep.witness, Some(Witness::Line { .. })));
        // the Fano plane is degenerate: every perp is a clique
        assert!(!check_parapolar(&fano(), 2).holds);
    }
}
