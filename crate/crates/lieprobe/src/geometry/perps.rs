//! Distance-2 perps: the common neighbourhoods of non-collinear point
//! pairs. Big geometries have millions of them, so the sweep streams over
//! pairs instead of materializing the distinct sets, and dedupes exactly
//! through a canonical-generator rule: every pair generating a perp S lies
//! inside the double perp of S, so a pair is counted iff no
//! lexicographically earlier pair in there produces the same set.

use super::singular::polar_rank;
use super::{check_grid, Geometry};
use crate::graph::{BitSet, Graph};
use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;

/// Dense edge -> line-id matrices get big; above this point count fall back
/// to a hash map.
const DENSE_LOOKUP_LIMIT: usize = 3000;

/// Which line passes through a given collinear pair. Only well defined in
/// partial linear spaces; a geometry with a doubly covered pair degrades to
/// `Ambiguous` and callers rescan the full line set instead.
pub(crate) enum LineLookup {
    Dense { n: usize, ids: Vec<u32> },
    Sparse(HashMap<(u32, u32), u32>),
    Ambiguous,
}

impl LineLookup {
    pub(crate) fn new(d: &Geometry) -> LineLookup {
        let n = d.n_points();
        if d.lines().len() >= u32::MAX as usize || n >= u32::MAX as usize {
            return LineLookup::Ambiguous;
        }
        if n <= DENSE_LOOKUP_LIMIT {
            let mut ids = vec![u32::MAX; n * n];
            for (i, line) in d.lines().iter().enumerate() {
                for (a, &u) in line.iter().enumerate() {
                    for &v in &line[a + 1..] {
                        if ids[u * n + v] != u32::MAX {
                            return LineLookup::Ambiguous;
                        }
                        ids[u * n + v] = i as u32;
                        ids[v * n + u] = i as u32;
                    }
                }
            }
            LineLookup::Dense { n, ids }
        } else {
            let mut map = HashMap::new();
            for (i, line) in d.lines().iter().enumerate() {
                for (a, &u) in line.iter().enumerate() {
                    for &v in &line[a + 1..] {
                        if map.insert((u as u32, v as u32), i as u32).is_some() {
                            return LineLookup::Ambiguous;
                        }
                    }
                }
            }
            LineLookup::Sparse(map)
        }
    }

    fn line_through(&self, u: usize, v: usize) -> Option<u32> {
        match self {
            LineLookup::Dense { n, ids } => {
                let id = ids[u * n + v];
                (id != u32::MAX).then_some(id)
            }
            LineLookup::Sparse(map) => {
                let key = if u < v { (u as u32, v as u32) } else { (v as u32, u as u32) };
                map.get(&key).copied()
            }
            LineLookup::Ambiguous => None,
        }
    }
}

/// One non-collinear pair with its perp, handed to the sweep callback.
pub(crate) struct PerpVisit<'a> {
    pub x: usize,
    pub y: usize,
    /// common neighbours of x and y, ascending
    pub points: &'a [usize],
    /// closed perp of `points`, ascending
    pub dp: &'a [usize],
    /// (x, y) is the least pair generating this perp
    pub canonical: bool,
}

/// Visits every non-collinear pair whose perp is non-empty, in pair order.
pub(crate) fn sweep_perps<B>(
    g: &Graph,
    mut visit: impl FnMut(&PerpVisit<'_>) -> ControlFlow<B>,
) -> Option<B> {
    let n = g.n();
    let mut perp = BitSet::new(n);
    let mut dp = BitSet::new(n);
    let mut probe = BitSet::new(n);
    let mut pts: Vec<usize> = Vec::new();
    let mut dp_pts: Vec<usize> = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if g.is_edge(x, y) {
                continue;
            }
            perp.copy_from(g.row(x));
            perp.and_assign(g.row(y));
            if perp.is_empty() {
                continue;
            }
            pts.clear();
            pts.extend(perp.iter());
            g.closed_perp_of(&perp, &mut dp);
            dp_pts.clear();
            dp_pts.extend(dp.iter());
            let canonical = least_generator(g, &perp, &mut probe, &dp_pts, (x, y));
            let v = PerpVisit { x, y, points: &pts, dp: &dp_pts, canonical };
            if let ControlFlow::Break(b) = visit(&v) {
                return Some(b);
            }
        }
    }
    None
}

fn least_generator(
    g: &Graph,
    perp: &BitSet,
    probe: &mut BitSet,
    dp: &[usize],
    pair: (usize, usize),
) -> bool {
    for (i, &a) in dp.iter().enumerate() {
        if a > pair.0 {
            return true;
        }
        for &b in &dp[i + 1..] {
            if (a, b) >= pair {
                break;
            }
            if g.is_edge(a, b) {
                continue;
            }
            probe.copy_from(g.row(a));
            probe.and_assign(g.row(b));
            if *probe == *perp {
                return false;
            }
        }
    }
    true
}

/// The geometry induced on `points` (ascending): lines of `d` lying fully
/// inside, reindexed to 0..len. Collinear pairs locate their line through
/// the lookup, so the cost scales with the perp, not with `d`.
pub(crate) fn induced_on(
    d: &Geometry,
    g: &Graph,
    lookup: &LineLookup,
    points: &[usize],
    scratch: &mut InducedScratch,
) -> Result<Geometry, super::GeometryError> {
    if matches!(lookup, LineLookup::Ambiguous) {
        return Geometry::new(points.len(), super::induced_lines(d, points));
    }
    scratch.epoch += 1;
    for (i, &p) in points.iter().enumerate() {
        scratch.stamp[p] = scratch.epoch;
        scratch.local[p] = i;
    }
    scratch.ids.clear();
    for (i, &u) in points.iter().enumerate() {
        for &v in &points[i + 1..] {
            if g.is_edge(u, v) {
                let id = lookup
                    .line_through(u, v)
                    .expect("every collinear pair lies on a line of its own geometry");
                scratch.ids.push(id);
            }
        }
    }
    scratch.ids.sort_unstable();
    scratch.ids.dedup();
    let mut lines = Vec::new();
    for &id in &scratch.ids {
        let line = &d.lines()[id as usize];
        if line.iter().all(|&p| scratch.stamp[p] == scratch.epoch) {
            lines.push(line.iter().map(|&p| scratch.local[p]).collect());
        }
    }
    Geometry::new(points.len(), lines)
}

pub(crate) struct InducedScratch {
    stamp: Vec<u64>,
    local: Vec<usize>,
    ids: Vec<u32>,
    epoch: u64,
}

impl InducedScratch {
    pub(crate) fn new(n: usize) -> InducedScratch {
        InducedScratch { stamp: vec![0; n], local: vec![0; n], ids: Vec::new(), epoch: 0 }
    }
}

/// What a single perp turned out to be.
pub(crate) enum PerpClass {
    /// (q+1) x (q+1) grid in the sense of [`check_grid`]
    Grid,
    /// nondegenerate Shult space of this rank
    Polar { rank: usize },
    Other { reason: String },
}

/// Grid test first (it is cheap and grids are rank-2 polar spaces anyway),
/// then the polar rank.
pub(crate) fn classify_perp(
    d: &Geometry,
    g: &Graph,
    lookup: &LineLookup,
    points: &[usize],
    q: u16,
    scratch: &mut InducedScratch,
) -> PerpClass {
    let perp_d = match induced_on(d, g, lookup, points, scratch) {
        Ok(p) => p,
        Err(e) => return PerpClass::Other { reason: e.to_string() },
    };
    if check_grid(&perp_d, q) {
        return PerpClass::Grid;
    }
    match polar_rank(&perp_d) {
        Ok(rep) => PerpClass::Polar { rank: rep.rank.expect("passing reports carry the rank") },
        Err(e) => PerpClass::Other { reason: e.to_string() },
    }
}

/// Exhaustive audit of the distance-2 perps: every non-collinear pair with
/// a non-empty perp is visited, every distinct perp classified. `q` only
/// feeds the grid test; polar ranks are measured from the perps themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerpProfile {
    /// non-collinear pairs with a non-empty perp
    pub pairs: usize,
    /// distinct perps among them
    pub distinct: usize,
    /// perp sizes over all pairs
    pub sizes: BTreeSet<usize>,
    /// distinct perps that are (q+1) x (q+1) grids
    pub grids: usize,
    /// polar ranks of the distinct non-grid perps
    pub polar_ranks: BTreeSet<usize>,
    /// distinct perps that are neither, with a generating pair and the
    /// reason; capped at a handful, see `failed` for the count
    pub failures: Vec<(usize, usize, String)>,
    pub failed: usize,
}

pub fn perp_profile(d: &Geometry, q: u16) -> PerpProfile {
    let g = d.point_graph();
    let lookup = LineLookup::new(d);
    let mut scratch = InducedScratch::new(d.n_points());
    let mut profile = PerpProfile {
        pairs: 0,
        distinct: 0,
        sizes: BTreeSet::new(),
        grids: 0,
        polar_ranks: BTreeSet::new(),
        failures: Vec::new(),
        failed: 0,
    };
    sweep_perps::<()>(&g, |v| {
        profile.pairs += 1;
        profile.sizes.insert(v.points.len());
        if v.canonical {
            profile.distinct += 1;
            match classify_perp(d, &g, &lookup, v.points, q, &mut scratch) {
                PerpClass::Grid => profile.grids += 1,
                PerpClass::Polar { rank } => {
                    profile.polar_ranks.insert(rank);
                }
                PerpClass::Other { reason } => {
                    profile.failed += 1;
                    if profile.failures.len() < 8 {
                        profile.failures.push((v.x, v.y, reason));
                    }
                }
            }
        }
        ControlFlow::Continue(())
    });
    profile
}
