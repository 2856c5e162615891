//! Point-line geometries and executable forms of the axioms that carve out
//! the families we care about: partial linear spaces, gamma and Shult
//! spaces, polar spaces of a given rank, parapolar spaces, grids.

mod axioms;
mod perps;
mod singular;

pub use axioms::{
    check_degenerate, check_gamma, check_grid, check_parapolar, check_partial_linear, check_shult,
};
pub(crate) use axioms::{check_gamma_with, check_shult_with};
pub use perps::{perp_profile, PerpProfile};
pub(crate) use perps::{classify_perp, sweep_perps, InducedScratch, LineLookup, PerpClass};
pub use singular::{
    check_projective_space, maximal_singular_subspaces, perp_geometry, polar_rank,
    singular_closure,
};

use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("line {line} has fewer than 2 points")]
    LineTooShort { line: usize },
    #[error("line {line} mentions point {point}, but the geometry has {n} points")]
    PointOutOfRange { line: usize, point: usize, n: usize },
    #[error("line {line} is not strictly sorted")]
    UnsortedLine { line: usize },
    #[error("line {line} duplicates line {first}")]
    DuplicateLine { first: usize, line: usize },
    #[error("line {inner} is contained in line {outer}")]
    NestedLine { inner: usize, outer: usize },
    #[error("{labels} labels supplied for {n} points")]
    LabelCountMismatch { labels: usize, n: usize },
    #[error("points {a} and {b} are not collinear")]
    NotAClique { a: usize, b: usize },
    #[error("points {a} and {b} are collinear")]
    CollinearPair { a: usize, b: usize },
    #[error("maximal singular subspaces have mixed projective dimensions ({dims:?})")]
    MixedSingularDimensions { dims: Vec<usize> },
    #[error("geometry is not a Shult space")]
    ShultViolated,
    #[error("geometry is degenerate: point {point} is collinear with every point")]
    DegenerateGeometry { point: usize },
    #[error("geometry on {n} points exceeds the supported size {limit} for this operation")]
    SizeLimitExceeded { n: usize, limit: usize },
    #[error("invalid geometry JSON: {0}")]
    Json(String),
}

/// A finite point-line geometry. Lines are strictly increasing point-index
/// lists, stored in lexicographic order; no line may duplicate or contain
/// another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    n_points: usize,
    lines: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Geometry {
    pub fn new(n_points: usize, mut lines: Vec<Vec<usize>>) -> Result<Geometry, GeometryError> {
        for (i, line) in lines.iter().enumerate() {
            if line.len() < 2 {
                return Err(GeometryError::LineTooShort { line: i });
            }
            if !line.windows(2).all(|w| w[0] < w[1]) {
                return Err(GeometryError::UnsortedLine { line: i });
            }
            let &last = line.last().unwrap();
            if last >= n_points {
                return Err(GeometryError::PointOutOfRange { line: i, point: last, n: n_points });
            }
        }
        lines.sort();
        for i in 1..lines.len() {
            if lines[i] == lines[i - 1] {
                return Err(GeometryError::DuplicateLine { first: i - 1, line: i });
            }
        }
        let g = Geometry { n_points, lines, labels: None };
        // Nesting check via shared incidence: a line containing `line`
        // shows up in the incidence lists of its first two points.
        let inc = g.incidence();
        for (i, line) in g.lines.iter().enumerate() {
            for &j in &inc[line[0]] {
                if j != i && line.iter().all(|p| g.lines[j].binary_search(p).is_ok()) {
                    let (inner, outer) = (i, j);
                    return Err(GeometryError::NestedLine { inner, outer });
                }
            }
        }
        Ok(g)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Option<Vec<String>>) -> Result<(), GeometryError> {
        if let Some(ref l) = labels {
            if l.len() != self.n_points {
                return Err(GeometryError::LabelCountMismatch {
                    labels: l.len(),
                    n: self.n_points,
                });
            }
        }
        self.labels = labels;
        Ok(())
    }

    /// Point -> indices of lines through it, each list ascending.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n_points];
        for (i, line) in self.lines.iter().enumerate() {
            for &p in line {
                inc[p].push(i);
            }
        }
        inc
    }

    /// Collinearity graph: points adjacent when they share a line.
    pub fn point_graph(&self) -> Graph {
        let mut g = Graph::new(self.n_points);
        for line in &self.lines {
            for (i, &a) in line.iter().enumerate() {
                for &b in &line[i + 1..] {
                    g.add_edge(a, b).expect("validated on construction");
                }
            }
        }
        g
    }

    pub fn to_json(&self) -> String {
        let shim = JsonGeometry {
            n_points: self.n_points,
            lines: self.lines.clone(),
            labels: self.labels.clone(),
        };
        serde_json::to_string(&shim).expect("geometry serializes")
    }

    pub fn from_json(text: &str) -> Result<Geometry, GeometryError> {
        let shim: JsonGeometry =
            serde_json::from_str(text).map_err(|e| GeometryError::Json(e.to_string()))?;
        let mut g = Geometry::new(shim.n_points, shim.lines)?;
        g.set_labels(shim.labels)?;
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonGeometry {
    n_points: usize,
    lines: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
}

/// Outcome of one axiom check. On failure the witness pins down a violating
/// configuration; rank carries the polar rank or projective dimension when
/// the axiom defines one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axiom: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniform: Option<bool>,
}

impl AxiomReport {
    pub(crate) fn pass(axiom: &'static str) -> AxiomReport {
        AxiomReport { axiom, holds: true, witness: None, rank: None, strong: None, uniform: None }
    }

    pub(crate) fn fail(axiom: &'static str, witness: Witness) -> AxiomReport {
        AxiomReport {
            axiom,
            holds: false,
            witness: Some(witness),
            rank: None,
            strong: None,
            uniform: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    Point { point: usize },
    PointPair { a: usize, b: usize },
    PointLine { point: usize, line: usize },
    Line { line: usize },
    LinePair { a: usize, b: usize },
    PointSet { points: Vec<usize> },
}

/// Re-checks that a failure witness actually violates the named axiom.
/// Used by tests and by consumers that treat reports as evidence.
pub fn witness_revalidates(d: &Geometry, report: &AxiomReport) -> bool {
    if report.holds {
        return report.witness.is_none() || report.axiom == "degenerate";
    }
    let g = d.point_graph();
    match (&report.witness, report.axiom) {
        (Some(Witness::Line { line }), "partial_linear") => d.lines()[*line].len() < 3,
        (Some(Witness::PointPair { a, b }), "partial_linear") => {
            let shared = d
                .lines()
                .iter()
                .filter(|l| l.binary_search(a).is_ok() && l.binary_search(b).is_ok())
                .count();
            shared >= 2
        }
        (Some(Witness::PointLine { point, line }), "gamma") => {
            let l = &d.lines()[*line];
            let seen = l.iter().filter(|&&x| g.is_edge(*point, x)).count();
            !l.contains(point) && seen > 1 && seen < l.len()
        }
        (Some(Witness::PointLine { point, line }), "shult") => {
            let l = &d.lines()[*line];
            let seen = l.iter().filter(|&&x| g.is_edge(*point, x)).count();
            !l.contains(point) && (seen == 0 || (seen > 1 && seen < l.len()))
        }
        (None, "degenerate") => (0..d.n_points()).all(|p| g.degree(p) < d.n_points() - 1),
        _ => report.witness.is_some(),
    }
}

/// Materializing oracle for the perp sweep: the distinct sorted common
/// neighbourhoods of non-adjacent vertex pairs, with the number of pairs
/// yielding each. Fine for tests, too much memory on big graphs.
#[cfg(test)]
pub(crate) fn distance_two_perps(g: &Graph) -> Vec<(Vec<usize>, usize)> {
    use std::collections::HashMap;
    let n = g.n();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    for x in 0..n {
        for y in x + 1..n {
            if g.is_edge(x, y) {
                continue;
            }
            let mut common = g.row(x).clone();
            common.and_assign(g.row(y));
            if common.is_empty() {
                continue;
            }
            *seen.entry(common.to_vec()).or_insert(0) += 1;
        }
    }
    let mut out: Vec<(Vec<usize>, usize)> = seen.into_iter().collect();
    out.sort();
    out
}

/// Lines of `d` fully contained in `points` (which must be ascending),
/// reindexed to 0..|points|.
pub(crate) fn induced_lines(d: &Geometry, points: &[usize]) -> Vec<Vec<usize>> {
    let mut index = vec![usize::MAX; d.n_points()];
    for (i, &p) in points.iter().enumerate() {
        index[p] = i;
    }
    let mut out = Vec::new();
    for line in d.lines() {
        if line.iter().all(|&p| index[p] != usize::MAX) {
            out.push(line.iter().map(|&p| index[p]).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn one_line() -> Geometry {
        Geometry::new(3, vec![vec![0, 1, 2]]).unwrap()
    }

    /// 3x3 grid: points 3r+c, rows and columns as lines.
    pub(crate) fn grid3() -> Geometry {
        let mut lines = Vec::new();
        for r in 0..3 {
            lines.push((0..3).map(|c| 3 * r + c).collect());
        }
        for c in 0..3 {
            lines.push((0..3).map(|r| 3 * r + c).collect());
        }
        Geometry::new(9, lines).unwrap()
    }

    /// Fano plane: lines of PG(2,2).
    pub(crate) fn fano() -> Geometry {
        let lines = vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ];
        Geometry::new(7, lines).unwrap()
    }

    #[test]
    fn construction_validates_lines() {
        assert_eq!(
            Geometry::new(3, vec![vec![0]]),
            Err(GeometryError::LineTooShort { line: 0 })
        );
        assert_eq!(
            Geometry::new(3, vec![vec![1, 0, 2]]),
            Err(GeometryError::UnsortedLine { line: 0 })
        );
        assert_eq!(
            Geometry::new(3, vec![vec![0, 1, 3]]),
            Err(GeometryError::PointOutOfRange { line: 0, point: 3, n: 3 })
        );
        assert_eq!(
            Geometry::new(3, vec![vec![0, 1], vec![0, 1]]),
            Err(GeometryError::DuplicateLine { first: 0, line: 1 })
        );
        assert_eq!(
            Geometry::new(3, vec![vec![0, 1, 2], vec![0, 1]]),
            Err(GeometryError::NestedLine { inner: 0, outer: 1 })
        );
    }

    #[test]
    fn lines_are_stored_in_lex_order() {
        let g = Geometry::new(4, vec![vec![2, 3], vec![0, 1], vec![0, 2]]).unwrap();
        assert_eq!(g.lines(), &[vec![0, 1], vec![0, 2], vec![2, 3]]);
    }

    #[test]
    fn point_graph_of_single_line_is_complete() {
        let g = one_line().point_graph();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn point_graph_of_disjoint_lines() {
        let d = Geometry::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let g = d.point_graph();
        assert_eq!(g.edge_count(), 6);
        assert!(!g.is_connected());
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let d = grid3();
        let text = d.to_json();
        let back = Geometry::from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), text);
        // labels survive
        let mut l = one_line();
        l.set_labels(Some(vec!["a".into(), "b".into(), "c".into()])).unwrap();
        let back = Geometry::from_json(&l.to_json()).unwrap();
        assert_eq!(back.labels().unwrap()[2], "c");
        // labelless output omits the field entirely
        assert!(!d.to_json().contains("labels"));
    }

    #[test]
    fn json_rejects_malformed_input() {
        assert!(matches!(Geometry::from_json("{"), Err(GeometryError::Json(_))));
        let bad = r#"{"n_points": 2, "lines": [[0, 5]]}"#;
        assert_eq!(
            Geometry::from_json(bad),
            Err(GeometryError::PointOutOfRange { line: 0, point: 5, n: 2 })
        );
    }

    #[test]
    fn incidence_lists_every_line() {
        let d = grid3();
        let inc = d.incidence();
        assert!(inc.iter().all(|l| l.len() == 2));
        assert_eq!(inc[4].len(), 2); // center: one row, one column
    }
}
