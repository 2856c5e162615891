//! Subspaces of GF(q)^d in canonical reduced row echelon form.
//!
//! The RREF basis is the canonical representative of a subspace: pivots
//! strictly increasing left to right, pivot entries 1, and zeros above and
//! below each pivot. Two subspaces are equal iff their RREF bases are equal
//! byte for byte, which is what makes subspaces usable as hash keys when
//! enumerating geometries.

use std::ops::ControlFlow;

use super::{AlgebraError, Field};

/// A k-dimensional subspace of GF(q)^d, held as its RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<u8>>, // RREF rows, possibly empty (the zero subspace)
    pivots: Vec<usize>,
}

/// Reduces `rows` in place to RREF over `f` and returns the pivot columns.
fn rref_in_place(f: &Field, rows: &mut Vec<Vec<u8>>, d: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..d {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let s = f.inv(rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let c = rows[i][col];
                for j in 0..d {
                    let t = f.mul(c, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

impl Subspace {
    /// The zero subspace of GF(q)^d.
    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Wraps rows that are already in RREF, as produced by `visit_rref`.
    pub(crate) fn from_parts(ambient: usize, basis: Vec<Vec<u8>>, pivots: Vec<usize>) -> Subspace {
        debug_assert!(basis.iter().all(|r| r.len() == ambient));
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    /// Canonicalizes an arbitrary spanning set. Rows of length other than
    /// `ambient` are a `DimensionMismatch`.
    pub fn from_rows(f: &Field, ambient: usize, rows: &[Vec<u8>]) -> Result<Subspace, AlgebraError> {
        for row in rows {
            if row.len() != ambient {
                return Err(AlgebraError::DimensionMismatch(format!(
                    "row of length {} in ambient dimension {}",
                    row.len(),
                    ambient
                )));
            }
        }
        let mut basis: Vec<Vec<u8>> = rows.to_vec();
        let pivots = rref_in_place(f, &mut basis, ambient);
        Ok(Subspace {
            ambient,
            basis,
            pivots,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Dimension of the subspace itself.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; membership means it reduces to zero.
    pub fn contains(&self, f: &Field, v: &[u8]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if v[p] != 0 {
                let c = v[p];
                for j in 0..self.ambient {
                    let t = f.mul(c, row[j]);
                    v[j] = f.sub(v[j], t);
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Smallest subspace containing both: stack the bases and re-reduce.
    pub fn join(&self, f: &Field, other: &Subspace) -> Result<Subspace, AlgebraError> {
        self.check_ambient(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_rows(f, self.ambient, &rows)
    }

    /// Intersection, computed from the left null space of the stacked basis:
    /// a combination lambda*A + mu*B = 0 exhibits lambda*A as a vector lying
    /// in both row spaces, and those vectors span the meet.
    pub fn meet(&self, f: &Field, other: &Subspace) -> Result<Subspace, AlgebraError> {
        self.check_ambient(other)?;
        let ka = self.basis.len();
        let kb = other.basis.len();
        if ka == 0 || kb == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        // Transpose of the stacked (ka+kb) x d matrix; its kernel is the left
        // null space we want.
        let stacked: Vec<&Vec<u8>> = self.basis.iter().chain(other.basis.iter()).collect();
        let mut tr = vec![vec![0u8; ka + kb]; self.ambient];
        for (i, row) in stacked.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                tr[j][i] = x;
            }
        }
        let pivots = rref_in_place(f, &mut tr, ka + kb);
        // Kernel basis: one vector per free column.
        let mut meet_rows = Vec::new();
        for free in 0..ka + kb {
            if pivots.contains(&free) {
                continue;
            }
            let mut coeff = vec![0u8; ka + kb];
            coeff[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                coeff[p] = f.neg(tr[r][free]);
            }
            // The vector lambda*A from the first ka coefficients.
            let mut v = vec![0u8; self.ambient];
            for (i, row) in self.basis.iter().enumerate() {
                if coeff[i] != 0 {
                    for j in 0..self.ambient {
                        v[j] = f.add(v[j], f.mul(coeff[i], row[j]));
                    }
                }
            }
            meet_rows.push(v);
        }
        Subspace::from_rows(f, self.ambient, &meet_rows)
    }

    /// Canonical projective representatives of the nonzero vectors in the
    /// subspace, each scaled so its first nonzero coordinate is 1, sorted.
    /// Intended for small subspaces (lines and planes).
    pub fn projective_points(&self, f: &Field) -> Vec<Vec<u8>> {
        let k = self.basis.len();
        let q = f.q();
        let mut out = Vec::new();
        let mut coeff = vec![0u8; k];
        loop {
            // next combination in base q
            let mut i = 0;
            while i < k {
                coeff[i] += 1;
                if (coeff[i] as usize) < q {
                    break;
                }
                coeff[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
            let mut v = vec![0u8; self.ambient];
            for (c, row) in coeff.iter().zip(&self.basis) {
                if *c != 0 {
                    for j in 0..self.ambient {
                        v[j] = f.add(v[j], f.mul(*c, row[j]));
                    }
                }
            }
            normalize_projective(f, &mut v);
            out.push(v);
        }
        out.sort();
        out.dedup();
        out
    }

    /// Flat canonical encoding, usable as a hash key across containers.
    pub fn key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + self.basis.len() * self.ambient);
        out.push(self.ambient as u8);
        out.push(self.basis.len() as u8);
        for row in &self.basis {
            out.extend_from_slice(row);
        }
        out
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), AlgebraError> {
        if self.ambient != other.ambient {
            return Err(AlgebraError::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

/// Scales a nonzero vector so that its first nonzero coordinate is 1.
pub fn normalize_projective(f: &Field, v: &mut [u8]) {
    if let Some(&lead) = v.iter().find(|&&x| x != 0) {
        if lead != 1 {
            let s = f.inv(lead);
            for x in v.iter_mut() {
                *x = f.mul(*x, s);
            }
        }
    }
}

/// The Gaussian binomial coefficient: the number of k-dimensional subspaces
/// of GF(q)^d.
pub fn gaussian_binomial(d: usize, k: usize, q: u128) -> u128 {
    if k > d {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((d - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Enumerates every k-dimensional subspace of GF(q)^d exactly once, in
/// lexicographic RREF order: pivot-column sets ascending, then free entries
/// in row-major base-q order.
pub fn enumerate_subspaces(f: &Field, d: usize, k: usize) -> Result<Vec<Subspace>, AlgebraError> {
    if k > d {
        return Err(AlgebraError::DimensionMismatch(format!(
            "cannot take {k}-dimensional subspaces of dimension {d}"
        )));
    }
    let mut out = Vec::new();
    visit_rref(f, d, k, |_| true, |_, _| true, &mut |rows, pivots| {
        out.push(Subspace {
            ambient: d,
            basis: rows.to_vec(),
            pivots: pivots.to_vec(),
        });
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Enumerates the k-dimensional subspaces of a given subspace, as subspaces
/// of the same ambient space, in the coefficient order of the inner
/// enumeration.
pub fn subspaces_within(f: &Field, space: &Subspace, k: usize) -> Result<Vec<Subspace>, AlgebraError> {
    let inner = enumerate_subspaces(f, space.dim(), k)?;
    let mut out = Vec::with_capacity(inner.len());
    for coeffs in &inner {
        let rows: Vec<Vec<u8>> = coeffs
            .basis()
            .iter()
            .map(|c| {
                let mut v = vec![0u8; space.ambient()];
                for (j, &cj) in c.iter().enumerate() {
                    for (t, slot) in v.iter_mut().enumerate() {
                        *slot = f.add(*slot, f.mul(cj, space.basis()[j][t]));
                    }
                }
                v
            })
            .collect();
        out.push(Subspace::from_rows(f, space.ambient(), &rows)?);
    }
    Ok(out)
}

/// Core echelon enumerator. Visits each RREF matrix with k rows over GF(q)^d
/// whose rows all satisfy `row_ok` and whose row pairs all satisfy `pair_ok`,
/// in lexicographic order. The filters see fully assembled rows, so callers
/// can prune by isotropy and orthogonality while the search is still shallow.
pub(crate) fn visit_rref<R, P, V>(f: &Field, d: usize, k: usize, row_ok: R, pair_ok: P, visit: &mut V)
where
    R: Fn(&[u8]) -> bool,
    P: Fn(&[u8], &[u8]) -> bool,
    V: FnMut(&[Vec<u8>], &[usize]) -> ControlFlow<()>,
{
    if k == 0 {
        let _ = visit(&[], &[]);
        return;
    }
    if k > d {
        return;
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let mut rows: Vec<Vec<u8>> = Vec::with_capacity(k);
        if fill_rows(f, d, k, &pivots, 0, &mut rows, &row_ok, &pair_ok, visit).is_break() {
            return;
        }
        // next k-combination of 0..d in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pivots[i] < d - (k - i) {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn fill_rows<R, P, V>(
    f: &Field,
    d: usize,
    k: usize,
    pivots: &[usize],
    i: usize,
    rows: &mut Vec<Vec<u8>>,
    row_ok: &R,
    pair_ok: &P,
    visit: &mut V,
) -> ControlFlow<()>
where
    R: Fn(&[u8]) -> bool,
    P: Fn(&[u8], &[u8]) -> bool,
    V: FnMut(&[Vec<u8>], &[usize]) -> ControlFlow<()>,
{
    if i == k {
        return visit(rows, pivots);
    }
    // Free positions of row i: columns right of its pivot that are not
    // pivots themselves.
    let free: Vec<usize> = (pivots[i] + 1..d).filter(|c| !pivots.contains(c)).collect();
    let q = f.q() as u8;
    let mut vals = vec![0u8; free.len()];
    loop {
        let mut row = vec![0u8; d];
        row[pivots[i]] = 1;
        for (&c, &v) in free.iter().zip(&vals) {
            row[c] = v;
        }
        if row_ok(&row) && rows.iter().all(|r| pair_ok(r, &row)) {
            rows.push(row);
            let flow = fill_rows(f, d, k, pivots, i + 1, rows, row_ok, pair_ok, visit);
            rows.pop();
            flow?;
        }
        // next assignment, row-major base q (counting from the last position
        // keeps earlier free columns most significant, i.e. lexicographic).
        let mut j = free.len();
        loop {
            if j == 0 {
                return ControlFlow::Continue(());
            }
            j -= 1;
            vals[j] += 1;
            if vals[j] < q {
                break;
            }
            vals[j] = 0;
        }
    }
}
