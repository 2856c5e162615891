//! Generators for the geometries in scope: classical polar spaces from
//! alternating and quadratic forms, line Grassmannians, and half-spin
//! geometries. Everything enumerates in a fixed order, so point and line
//! numbering is stable across runs.

use crate::algebra::{subspaces_within, AlgebraError, Field, Form, Subspace};
use crate::geometry::{Geometry, GeometryError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("polar rank {rank} is below the minimum of 2")]
    RankTooSmall { rank: usize },
    #[error("instance too large: {what}")]
    InstanceTooLarge { what: String },
    #[error("{family} is not defined for projective dimension {dim}")]
    InvalidDimension { family: &'static str, dim: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PolarKind {
    /// Symplectic W(2n-1, q).
    W,
    /// Parabolic quadric Q(2n, q).
    Q,
    /// Hyperbolic quadric Q+(2n-1, q).
    QPlus,
    /// Elliptic quadric Q-(2n+1, q).
    QMinus,
}

/// Which geometry a recognition result names. For polar families `n` is the
/// rank; for the others it is the subscript in the series name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyLabel {
    pub family: Family,
    pub n: usize,
    pub q: u16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    PolarW,
    PolarQ,
    PolarQPlus,
    PolarQMinus,
    An2,
    Dnn,
    E6_1,
    E7_7,
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, q) = (self.n, self.q);
        match self.family {
            Family::PolarW => write!(f, "W({}, {q})", 2 * n - 1),
            Family::PolarQ => write!(f, "Q({}, {q})", 2 * n),
            Family::PolarQPlus => write!(f, "Q+({}, {q})", 2 * n - 1),
            Family::PolarQMinus => write!(f, "Q-({}, {q})", 2 * n + 1),
            Family::An2 => write!(f, "A_{{{n},2}}({q})"),
            Family::Dnn => write!(f, "D_{{{n},{n}}}({q})"),
            Family::E6_1 => write!(f, "E_{{6,1}}({q})"),
            Family::E7_7 => write!(f, "E_{{7,7}}({q})"),
        }
    }
}

fn digits(v: &[u8]) -> String {
    v.iter().map(|d| char::from(b'0' + d)).collect()
}

fn basis_label(s: &Subspace) -> String {
    s.basis().iter().map(|r| digits(r)).collect::<Vec<_>>().join(",")
}

/// Points of PG(dim, q); refuses to enumerate unmanageable ambient spaces.
fn guard_ambient(dim: usize, q: u16) -> Result<(), GeneratorError> {
    let points = crate::algebra::gaussian_binomial(dim + 1, 1, q as u128);
    if points > 200_000 {
        return Err(GeneratorError::InstanceTooLarge {
            what: format!("PG({dim}, {q}) has {points} points"),
        });
    }
    Ok(())
}

/// The polar space of the chosen form on PG(projective_dim, q): points are
/// the isotropic (singular) projective points, lines the totally singular
/// 2-dimensional subspaces.
pub fn polar_space(kind: PolarKind, projective_dim: usize, q: u16) -> Result<Geometry, GeneratorError> {
    let d = projective_dim + 1; // vector dimension
    let f = Field::new(q)?;
    // Rank by construction: guards must run before the Witt-index search,
    // whose exhaustive failure pass is what the guards exist to avoid.
    let (family, parity, expected_rank) = match kind {
        PolarKind::W => ("W", 0, d / 2),
        PolarKind::Q => ("Q", 1, d / 2),
        PolarKind::QPlus => ("Q+", 0, d / 2),
        PolarKind::QMinus => ("Q-", 0, d / 2 - 1),
    };
    if d < 2 || d % 2 != parity {
        return Err(GeneratorError::InvalidDimension { family, dim: projective_dim });
    }
    if expected_rank < 2 {
        return Err(GeneratorError::RankTooSmall { rank: expected_rank });
    }
    if expected_rank >= 4 && q > 4 {
        return Err(GeneratorError::InstanceTooLarge {
            what: format!("rank {expected_rank} over GF({q}); q <= 4 required at rank >= 4"),
        });
    }
    guard_ambient(projective_dim, q)?;
    let form = match kind {
        PolarKind::W => Form::alternating_standard(&f, d)?,
        PolarKind::Q => Form::parabolic(&f, d)?,
        PolarKind::QPlus => Form::hyperbolic(&f, d)?,
        PolarKind::QMinus => Form::elliptic(&f, d)?,
    };
    let rank = form.witt_index();
    debug_assert_eq!(rank, expected_rank);
    if rank < 2 {
        return Err(GeneratorError::RankTooSmall { rank });
    }

    let points = form.isotropic_projective_points();
    let index: HashMap<&[u8], usize> =
        points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut lines = Vec::new();
    for sub in form.totally_singular_subspaces(2) {
        let mut line: Vec<usize> = sub
            .projective_points(&f)
            .iter()
            .map(|v| index[v.as_slice()])
            .collect();
        line.sort_unstable();
        lines.push(line);
    }
    let mut geo = Geometry::new(points.len(), lines)?;
    geo.set_labels(Some(points.iter().map(|p| digits(p)).collect()))?;
    Ok(geo)
}

/// The line Grassmannian of PG(n, q): points are the 2-dimensional
/// subspaces of GF(q)^(n+1), lines the pencils of an incident point-plane
/// pair.
pub fn grassmann_lines(n: usize, q: u16) -> Result<Geometry, GeneratorError> {
    if n < 4 {
        return Err(GeneratorError::RankTooSmall { rank: n });
    }
    let feasible = (q == 2 && n <= 6) || (q == 3 && n <= 5);
    if !feasible {
        return Err(GeneratorError::InstanceTooLarge {
            what: format!("line Grassmannian of PG({n}, {q})"),
        });
    }
    let f = Field::new(q)?;
    let d = n + 1;
    let points = crate::algebra::enumerate_subspaces(&f, d, 2)?;
    let index: HashMap<Vec<u8>, usize> =
        points.iter().enumerate().map(|(i, s)| (s.key(), i)).collect();
    let mut lines = Vec::new();
    for plane in crate::algebra::enumerate_subspaces(&f, d, 3)? {
        let members = subspaces_within(&f, &plane, 2)?;
        for point in subspaces_within(&f, &plane, 1)? {
            // pencil: the 2-subspaces between `point` and `plane`
            let mut pencil = Vec::with_capacity(q as usize + 1);
            for member in &members {
                if member.contains(&f, &point.basis()[0]) {
                    pencil.push(index[&member.key()]);
                }
            }
            pencil.sort_unstable();
            lines.push(pencil);
        }
    }
    let mut geo = Geometry::new(points.len(), lines)?;
    geo.set_labels(Some(points.iter().map(basis_label).collect()))?;
    Ok(geo)
}

/// The half-spin geometry D_{n,n}(q): points are one parity class of the
/// maximal totally singular subspaces (vector dimension n) of the
/// hyperbolic quadric in vector dimension 2n; lines collect the q+1 class
/// members through each totally singular subspace of dimension n-2. The
/// class is the one containing the lexicographically least generator, and
/// membership is decided by intersection-dimension parity with it.
pub fn half_spin(n: usize, q: u16) -> Result<Geometry, GeneratorError> {
    if !(n == 4 || n == 5) {
        return Err(GeneratorError::InvalidDimension { family: "D_{n,n}", dim: n });
    }
    if !(q == 2 || q == 3) || (n, q) == (5, 3) {
        return Err(GeneratorError::InstanceTooLarge {
            what: format!("half-spin geometry D_{{{n},{n}}}({q})"),
        });
    }
    let f = Field::new(q)?;
    let form = Form::hyperbolic(&f, 2 * n)?;
    let generators = form.totally_singular_subspaces(n);
    debug_assert!(!generators.is_empty());
    let base = &generators[0];
    let in_class = |u: &Subspace| {
        let overlap = u.meet(&f, base).expect("generators share the ambient space");
        (n - overlap.dim()) % 2 == 0
    };
    let points: Vec<&Subspace> = generators.iter().filter(|u| in_class(u)).collect();

    // group class members by their (n-2)-dimensional subspaces
    let mut through: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
    for (i, u) in points.iter().enumerate() {
        for w in subspaces_within(&f, u, n - 2)? {
            through.entry(w.key()).or_default().push(i);
        }
    }
    let mut lines = Vec::new();
    for (_, mut members) in through.into_iter() {
        if members.len() < 2 {
            continue;
        }
        assert_eq!(
            members.len(),
            q as usize + 1,
            "a totally singular subspace of corank 2 lies in q+1 class members"
        );
        members.sort_unstable();
        lines.push(members);
    }
    let mut geo = Geometry::new(points.len(), lines)?;
    geo.set_labels(Some(points.iter().map(|s| basis_label(s)).collect()))?;
    Ok(geo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{check_partial_linear, check_shult, polar_rank};

    #[test]
    fn w52_counts_and_rank() {
        let d = polar_space(PolarKind::W, 5, 2).unwrap();
        assert_eq!(d.n_points(), 63);
        assert_eq!(d.lines().len(), 315);
        assert!(d.lines().iter().all(|l| l.len() == 3));
        assert!(check_partial_linear(&d).holds);
        assert!(check_shult(&d).holds);
        assert_eq!(polar_rank(&d).unwrap().rank, Some(3));
        let g = d.point_graph();
        assert!((0..63).all(|v| g.degree(v) == 30));
    }

    #[test]
    fn hyperbolic_q7_counts_and_rank() {
        let d = polar_space(PolarKind::QPlus, 7, 2).unwrap();
        assert_eq!(d.n_points(), 135);
        assert_eq!(d.lines().len(), 1575);
        assert_eq!(polar_rank(&d).unwrap().rank, Some(4));
    }

    #[test]
    fn w53_and_q63_share_points_but_not_perps() {
        let w = polar_space(PolarKind::W, 5, 3).unwrap();
        let q = polar_space(PolarKind::Q, 6, 3).unwrap();
        assert_eq!(w.n_points(), 364);
        assert_eq!(q.n_points(), 364);
        let gw = w.point_graph();
        assert!((0..364).all(|v| gw.degree(v) == 120));
        assert!(crate::graph::are_isomorphic(&gw, &q.point_graph()).unwrap().is_none());
    }

    #[test]
    fn parabolic_and_elliptic_point_counts() {
        // (q^6 - 1)/(q - 1) = 364 points
        let d = polar_space(PolarKind::Q, 6, 3).unwrap();
        assert_eq!(d.n_points(), 364);
        assert_eq!(polar_rank(&d).unwrap().rank, Some(3));
        // (q^3 + 1)(q + 1) = 27 points, the generalized quadrangle of order (2, 4)
        let d = polar_space(PolarKind::QMinus, 5, 2).unwrap();
        assert_eq!(d.n_points(), 27);
        assert_eq!(polar_rank(&d).unwrap().rank, Some(2));
    }

    #[test]
    fn polar_guards() {
        assert_eq!(
            polar_space(PolarKind::W, 1, 7).map(|_| ()).unwrap_err(),
            GeneratorError::RankTooSmall { rank: 1 }
        );
        assert_eq!(
            polar_space(PolarKind::QMinus, 3, 2).map(|_| ()).unwrap_err(),
            GeneratorError::RankTooSmall { rank: 1 }
        );
        assert!(matches!(
            polar_space(PolarKind::W, 4, 2),
            Err(GeneratorError::InvalidDimension { .. })
        ));
        assert!(matches!(
            polar_space(PolarKind::QPlus, 7, 5),
            Err(GeneratorError::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn grassmann_a42_counts() {
        let d = grassmann_lines(4, 2).unwrap();
        assert_eq!(d.n_points(), 155);
        assert_eq!(d.lines().len(), 1085);
        assert!(d.lines().iter().all(|l| l.len() == 3));
        assert!(check_partial_linear(&d).holds);
        assert!(!check_shult(&d).holds);
        let g = d.point_graph();
        assert!((0..155).all(|v| g.degree(v) == 42));
    }

    #[test]
    fn grassmann_pencils_over_gf3() {
        let d = grassmann_lines(4, 3).unwrap();
        assert_eq!(d.n_points(), 1210);
        assert!(d.lines().iter().all(|l| l.len() == 4));
    }

    #[test]
    fn grassmann_a52_point_count() {
        let d = grassmann_lines(5, 2).unwrap();
        assert_eq!(d.n_points(), 651);
    }

    #[test]
    fn grassmann_guards() {
        assert!(matches!(grassmann_lines(3, 2), Err(GeneratorError::RankTooSmall { .. })));
        assert!(matches!(grassmann_lines(6, 3), Err(GeneratorError::InstanceTooLarge { .. })));
        assert!(matches!(grassmann_lines(7, 2), Err(GeneratorError::InstanceTooLarge { .. })));
    }

    #[test]
    fn half_spin_d44_is_the_triality_twin() {
        let d = half_spin(4, 2).unwrap();
        assert_eq!(d.n_points(), 135);
        assert_eq!(d.lines().len(), 1575);
        let quad = polar_space(PolarKind::QPlus, 7, 2).unwrap();
        let map = crate::graph::are_isomorphic(&d.point_graph(), &quad.point_graph())
            .unwrap()
            .expect("triality pairs the two point graphs");
        assert_eq!(map.len(), 135);
    }

    #[test]
    fn half_spin_d44_gf3_count() {
        let d = half_spin(4, 3).unwrap();
        assert_eq!(d.n_points(), 1120);
        assert!(d.lines().iter().all(|l| l.len() == 4));
    }

    #[test]
    fn half_spin_guards() {
        assert!(matches!(half_spin(6, 2), Err(GeneratorError::InvalidDimension { .. })));
        assert!(matches!(half_spin(5, 3), Err(GeneratorError::InstanceTooLarge { .. })));
        assert!(matches!(half_spin(5, 4), Err(GeneratorError::InstanceTooLarge { .. })));
    }

    #[test]
    fn family_labels_render() {
        let w = FamilyLabel { family: Family::PolarW, n: 3, q: 2 };
        assert_eq!(w.to_string(), "W(5, 2)");
        let a = FamilyLabel { family: Family::An2, n: 4, q: 2 };
        assert_eq!(a.to_string(), "A_{4,2}(2)");
        let d = FamilyLabel { family: Family::Dnn, n: 5, q: 2 };
        assert_eq!(d.to_string(), "D_{5,5}(2)");
        let e = FamilyLabel { family: Family::E7_7, n: 7, q: 2 };
        assert_eq!(e.to_string(), "E_{7,7}(2)");
    }
}
