//! Alternating and quadratic forms on GF(q)^n and their singular subspaces.
//!
//! Quadratic forms are stored as upper-triangular coefficient grids, and the
//! associated bilinear form is always the polarization Q(u+v) - Q(u) - Q(v),
//! which stays correct in characteristic 2 where the Gram-matrix shortcut
//! breaks down. Constructors reject singular forms: the radical of the
//! bilinear form must meet the zero set of Q trivially.

use std::ops::ControlFlow;

use super::subspace::visit_rref;
use super::{AlgebraError, Field, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Alternating,
    Quadratic,
}

/// A nonsingular alternating or quadratic form together with its field.
#[derive(Debug, Clone)]
pub struct Form {
    field: Field,
    n: usize,
    kind: FormKind,
    /// Alternating: the Gram matrix. Quadratic: upper-triangular coefficients
    /// of Q(v) = sum_{i<=j} c[i][j] v_i v_j.
    coeffs: Vec<Vec<u8>>,
}

impl Form {
    /// The standard symplectic form with Gram blocks [[0,1],[-1,0]]; n even.
    pub fn alternating_standard(f: &Field, n: usize) -> Result<Form, AlgebraError> {
        if n == 0 || n % 2 != 0 {
            return Err(AlgebraError::DimensionMismatch(format!(
                "alternating forms need even dimension, got {n}"
            )));
        }
        let mut gram = vec![vec![0u8; n]; n];
        for i in 0..n / 2 {
            gram[2 * i][2 * i + 1] = 1;
            gram[2 * i + 1][2 * i] = f.neg(1);
        }
        Form::alternating_from_gram(f, gram)
    }

    /// An alternating form from an explicit Gram matrix: antisymmetric, zero
    /// diagonal, full rank.
    pub fn alternating_from_gram(f: &Field, gram: Vec<Vec<u8>>) -> Result<Form, AlgebraError> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(AlgebraError::DimensionMismatch(
                    "Gram matrix is not square".into(),
                ));
            }
        }
        for i in 0..n {
            if gram[i][i] != 0 {
                return Err(AlgebraError::DimensionMismatch(format!(
                    "alternating Gram matrix has nonzero diagonal at {i}"
                )));
            }
            for j in 0..n {
                if gram[i][j] != f.neg(gram[j][i]) {
                    return Err(AlgebraError::DimensionMismatch(format!(
                        "Gram matrix not antisymmetric at ({i},{j})"
                    )));
                }
            }
        }
        if kernel(f, &gram).iter().any(|v| v.iter().any(|&x| x != 0)) {
            return Err(AlgebraError::DimensionMismatch(
                "alternating form is degenerate".into(),
            ));
        }
        Ok(Form {
            field: f.clone(),
            n,
            kind: FormKind::Alternating,
            coeffs: gram,
        })
    }

    /// x_0 x_1 + x_2 x_3 + ...; n even. Witt index n/2.
    pub fn hyperbolic(f: &Field, n: usize) -> Result<Form, AlgebraError> {
        if n == 0 || n % 2 != 0 {
            return Err(AlgebraError::DimensionMismatch(format!(
                "hyperbolic forms need even dimension, got {n}"
            )));
        }
        let mut c = vec![vec![0u8; n]; n];
        for i in 0..n / 2 {
            c[2 * i][2 * i + 1] = 1;
        }
        Form::quadratic_from_coeffs(f, c)
    }

    /// x_0^2 + x_1 x_2 + x_3 x_4 + ...; n odd. Witt index (n-1)/2.
    pub fn parabolic(f: &Field, n: usize) -> Result<Form, AlgebraError> {
        if n % 2 != 1 {
            return Err(AlgebraError::DimensionMismatch(format!(
                "parabolic forms need odd dimension, got {n}"
            )));
        }
        let mut c = vec![vec![0u8; n]; n];
        c[0][0] = 1;
        for i in 0..(n - 1) / 2 {
            c[2 * i + 1][2 * i + 2] = 1;
        }
        Form::quadratic_from_coeffs(f, c)
    }

    /// x_0 x_1 + ... + x_{n-4} x_{n-3} + g(x_{n-2}, x_{n-1}) with g the
    /// lexicographically first anisotropic binary form; n even. Witt index
    /// n/2 - 1.
    pub fn elliptic(f: &Field, n: usize) -> Result<Form, AlgebraError> {
        if n < 2 || n % 2 != 0 {
            return Err(AlgebraError::DimensionMismatch(format!(
                "elliptic forms need even dimension >= 2, got {n}"
            )));
        }
        let (a, b, cc) = anisotropic_binary(f);
        let mut c = vec![vec![0u8; n]; n];
        for i in 0..n / 2 - 1 {
            c[2 * i][2 * i + 1] = 1;
        }
        c[n - 2][n - 2] = a;
        c[n - 2][n - 1] = b;
        c[n - 1][n - 1] = cc;
        Form::quadratic_from_coeffs(f, c)
    }

    /// A quadratic form from upper-triangular coefficients. Rejects singular
    /// forms: any nonzero vector in the radical of the polarization on which
    /// Q also vanishes.
    pub fn quadratic_from_coeffs(f: &Field, coeffs: Vec<Vec<u8>>) -> Result<Form, AlgebraError> {
        let n = coeffs.len();
        for (i, row) in coeffs.iter().enumerate() {
            if row.len() != n {
                return Err(AlgebraError::DimensionMismatch(
                    "coefficient matrix is not square".into(),
                ));
            }
            if row[..i].iter().any(|&x| x != 0) {
                return Err(AlgebraError::DimensionMismatch(format!(
                    "coefficients below the diagonal in row {i}"
                )));
            }
        }
        let form = Form {
            field: f.clone(),
            n,
            kind: FormKind::Quadratic,
            coeffs,
        };
        // Radical of the polarization. An anisotropic quadratic form over a
        // finite field has dimension at most 2, so a radical of dimension 3+
        // always contains singular vectors.
        let rad = form.polarization_radical();
        if rad.dim() >= 3 {
            return Err(AlgebraError::DimensionMismatch(
                "quadratic form is singular (radical too large)".into(),
            ));
        }
        let mut witness_singular = false;
        for_all_combinations(f, rad.dim(), |coeff| {
            if coeff.iter().all(|&c| c == 0) {
                return;
            }
            let mut v = vec![0u8; n];
            for (c, row) in coeff.iter().zip(rad.basis()) {
                if *c != 0 {
                    for j in 0..n {
                        v[j] = f.add(v[j], f.mul(*c, row[j]));
                    }
                }
            }
            if form.eval(&v) == 0 {
                witness_singular = true;
            }
        });
        if witness_singular {
            return Err(AlgebraError::DimensionMismatch(
                "quadratic form is singular".into(),
            ));
        }
        Ok(form)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    /// Q(v) for quadratic forms; 0 for alternating forms (every vector is
    /// isotropic for an alternating form).
    pub fn eval(&self, v: &[u8]) -> u8 {
        debug_assert_eq!(v.len(), self.n);
        match self.kind {
            FormKind::Alternating => 0,
            FormKind::Quadratic => {
                let f = &self.field;
                let mut acc = 0u8;
                for i in 0..self.n {
                    if v[i] == 0 {
                        continue;
                    }
                    for j in i..self.n {
                        if self.coeffs[i][j] != 0 && v[j] != 0 {
                            acc = f.add(acc, f.mul(self.coeffs[i][j], f.mul(v[i], v[j])));
                        }
                    }
                }
                acc
            }
        }
    }

    /// The bilinear form: u G v^T for alternating forms, the polarization
    /// Q(u+v) - Q(u) - Q(v) for quadratic ones.
    pub fn bilinear(&self, u: &[u8], v: &[u8]) -> u8 {
        let f = &self.field;
        match self.kind {
            FormKind::Alternating => {
                let mut acc = 0u8;
                for i in 0..self.n {
                    if u[i] == 0 {
                        continue;
                    }
                    for j in 0..self.n {
                        if self.coeffs[i][j] != 0 && v[j] != 0 {
                            acc = f.add(acc, f.mul(u[i], f.mul(self.coeffs[i][j], v[j])));
                        }
                    }
                }
                acc
            }
            FormKind::Quadratic => {
                let w: Vec<u8> = u.iter().zip(v).map(|(&a, &b)| f.add(a, b)).collect();
                f.sub(f.sub(self.eval(&w), self.eval(u)), self.eval(v))
            }
        }
    }

    pub fn is_isotropic(&self, v: &[u8]) -> bool {
        match self.kind {
            FormKind::Alternating => true,
            FormKind::Quadratic => self.eval(v) == 0,
        }
    }

    /// A subspace is totally singular when the form vanishes on it and the
    /// bilinear form vanishes on all pairs. Checking the basis suffices: for
    /// quadratic forms Q(u+v) = Q(u) + Q(v) + B(u,v) extends the zero from
    /// the basis to every combination.
    pub fn is_totally_singular(&self, s: &Subspace) -> bool {
        let basis = s.basis();
        for (i, u) in basis.iter().enumerate() {
            if !self.is_isotropic(u) {
                return false;
            }
            for v in &basis[i + 1..] {
                if self.bilinear(u, v) != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// All totally singular k-dimensional subspaces, in the canonical
    /// echelon enumeration order.
    pub fn totally_singular_subspaces(&self, k: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        visit_rref(
            &self.field,
            self.n,
            k,
            |row| self.is_isotropic(row),
            |a, b| self.bilinear(a, b) == 0,
            &mut |rows, pivots| {
                out.push(Subspace::from_parts(self.n, rows.to_vec(), pivots.to_vec()));
                ControlFlow::Continue(())
            },
        );
        out
    }

    /// The maximal dimension of a totally singular subspace, found by the
    /// pruned echelon search with full backtracking (greedy chains alone can
    /// stall below the true index on crafted forms).
    pub fn witt_index(&self) -> usize {
        let mut witt = 0;
        for k in 1..=self.n {
            let mut found = false;
            visit_rref(
                &self.field,
                self.n,
                k,
                |row| self.is_isotropic(row),
                |a, b| self.bilinear(a, b) == 0,
                &mut |_, _| {
                    found = true;
                    ControlFlow::Break(())
                },
            );
            if !found {
                break;
            }
            witt = k;
        }
        witt
    }

    /// Canonical representatives (first nonzero coordinate 1) of the
    /// isotropic projective points, sorted lexicographically.
    pub fn isotropic_projective_points(&self) -> Vec<Vec<u8>> {
        let f = &self.field;
        let q = f.q() as u8;
        let mut out = Vec::new();
        let mut v = vec![0u8; self.n];
        // Odometer over all nonzero vectors; keep only normalized ones to
        // enumerate each projective point exactly once.
        loop {
            let mut i = self.n;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                v[i] += 1;
                if v[i] < q {
                    break;
                }
                v[i] = 0;
            }
            if v.iter().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            if self.is_isotropic(&v) {
                out.push(v.clone());
            }
        }
    }

    /// Kernel of the polarization's Gram matrix.
    fn polarization_radical(&self) -> Subspace {
        let f = &self.field;
        let mut gram = vec![vec![0u8; self.n]; self.n];
        let mut e = vec![0u8; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                e[i] = 1;
                let mut ej = vec![0u8; self.n];
                ej[j] = 1;
                gram[i][j] = self.bilinear(&e, &ej);
                e[i] = 0;
            }
        }
        let rows = kernel(f, &gram);
        Subspace::from_rows(f, self.n, &rows).expect("kernel rows have ambient length")
    }
}

/// The lexicographically first (a, b, c) with a*x^2 + b*xy + c*y^2 nonzero on
/// every nonzero (x, y); exists over every finite field.
fn anisotropic_binary(f: &Field) -> (u8, u8, u8) {
    let q = f.q() as u8;
    for a in 1..q {
        for b in 0..q {
            for c in 0..q {
                let mut aniso = true;
                'outer: for x in 0..q {
                    for y in 0..q {
                        if x == 0 && y == 0 {
                            continue;
                        }
                        let val = f.add(
                            f.add(f.mul(a, f.mul(x, x)), f.mul(b, f.mul(x, y))),
                            f.mul(c, f.mul(y, y)),
                        );
                        if val == 0 {
                            aniso = false;
                            break 'outer;
                        }
                    }
                }
                if aniso {
                    return (a, b, c);
                }
            }
        }
    }
    unreachable!("every finite field admits an anisotropic binary quadratic form")
}

/// Right kernel of a square matrix, as spanning rows (possibly empty).
fn kernel(f: &Field, mat: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = mat.len();
    let mut rows = mat.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
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
                for j in 0..n {
                    let t = f.mul(c, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut out = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u8; n];
        v[free] = 1;
        for (rr, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(rows[rr][free]);
        }
        out.push(v);
    }
    out
}

fn for_all_combinations<F: FnMut(&[u8])>(f: &Field, k: usize, mut body: F) {
    let q = f.q() as u8;
    let mut coeff = vec![0u8; k];
    loop {
        body(&coeff);
        let mut i = 0;
        while i < k {
            coeff[i] += 1;
            if coeff[i] < q {
                break;
            }
            coeff[i] = 0;
            i += 1;
        }
        if i == k {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gaussian_binomial;

    #[test]
    fn alternating_everything_is_isotropic() {
        let f = Field::new(3).unwrap();
        let form = Form::alternating_standard(&f, 6).unwrap();
        assert!(form.is_isotropic(&[1, 2, 0, 1, 2, 2]));
        assert_eq!(form.bilinear(&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0]), 1);
        assert_eq!(form.bilinear(&[0, 1, 0, 0, 0, 0], &[1, 0, 0, 0, 0, 0]), 2);
    }

    #[test]
    fn hyperbolic_isotropic_point_count_over_gf2() {
        // x0x1 + x2x3 + x4x5 over GF(2): 35 of the 63 projective points.
        let f = Field::new(2).unwrap();
        let form = Form::hyperbolic(&f, 6).unwrap();
        let pts = form.isotropic_projective_points();
        assert_eq!(pts.len(), 35);
        // Independent oracle: direct scan of all nonzero vectors.
        let mut count = 0;
        for bits in 1u32..64 {
            let v: Vec<u8> = (0..6).map(|i| ((bits >> i) & 1) as u8).collect();
            let val = v[0] & v[1] ^ v[2] & v[3] ^ v[4] & v[5];
            if val == 0 {
                count += 1;
            }
        }
        assert_eq!(count, 35); // q=2: projective points = nonzero vectors
    }

    #[test]
    fn witt_indices_of_the_standard_forms() {
        let f2 = Field::new(2).unwrap();
        let f3 = Field::new(3).unwrap();
        assert_eq!(Form::alternating_standard(&f2, 6).unwrap().witt_index(), 3);
        assert_eq!(Form::hyperbolic(&f2, 8).unwrap().witt_index(), 4);
        assert_eq!(Form::elliptic(&f2, 6).unwrap().witt_index(), 2);
        assert_eq!(Form::parabolic(&f3, 7).unwrap().witt_index(), 3);
        assert_eq!(Form::elliptic(&f3, 4).unwrap().witt_index(), 1);
    }

    #[test]
    fn parabolic_char2_has_anisotropic_radical() {
        // In characteristic 2 the polarization of x0^2 + x1x2 + ... has e_0
        // in its radical, but Q(e_0) = 1, so the form is still nonsingular.
        let f = Field::new(2).unwrap();
        let form = Form::parabolic(&f, 7).unwrap();
        assert_eq!(form.witt_index(), 3);
    }

    #[test]
    fn singular_forms_are_rejected() {
        let f = Field::new(3).unwrap();
        // x0*x1 in dimension 3: e_2 is radical and singular.
        let mut c = vec![vec![0u8; 3]; 3];
        c[0][1] = 1;
        assert!(Form::quadratic_from_coeffs(&f, c).is_err());
        // Zero form in dimension 3: radical is everything.
        let c = vec![vec![0u8; 3]; 3];
        assert!(Form::quadratic_from_coeffs(&f, c).is_err());
    }

    #[test]
    fn totally_singular_counts_on_the_klein_form() {
        // Q+ type in dimension 6 over GF(2): 35 singular points, 105 singular
        // lines, 30 singular planes (15 per ruling family).
        let f = Field::new(2).unwrap();
        let form = Form::hyperbolic(&f, 6).unwrap();
        assert_eq!(form.totally_singular_subspaces(1).len(), 35);
        assert_eq!(form.totally_singular_subspaces(2).len(), 105);
        assert_eq!(form.totally_singular_subspaces(3).len(), 30);
        assert!(form.totally_singular_subspaces(4).is_empty());
    }

    #[test]
    fn symplectic_line_count_matches_theory() {
        // W(5,2): every projective point is isotropic and the totally
        // isotropic lines number 315.
        let f = Field::new(2).unwrap();
        let form = Form::alternating_standard(&f, 6).unwrap();
        assert_eq!(form.isotropic_projective_points().len(), 63);
        assert_eq!(gaussian_binomial(6, 1, 2), 63);
        assert_eq!(form.totally_singular_subspaces(2).len(), 315);
    }

    #[test]
    fn totally_singular_respects_polarization_over_gf2() {
        // The span of e0 and e1 has Q = 0 on e0, e1 but B(e0,e1) = 1, so it
        // must not count as totally singular for x0x1 + x2x3.
        let f = Field::new(2).unwrap();
        let form = Form::hyperbolic(&f, 4).unwrap();
        let s = Subspace::from_rows(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert!(!form.is_totally_singular(&s));
        let t = Subspace::from_rows(&f, 4, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        assert!(form.is_totally_singular(&t));
    }

    #[test]
    fn elliptic_tail_is_anisotropic_for_small_fields() {
        for q in [2u16, 3, 4, 5] {
            let f = Field::new(q).unwrap();
            let (a, b, c) = anisotropic_binary(&f);
            for x in 0..q as u8 {
                for y in 0..q as u8 {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let val = f.add(
                        f.add(f.mul(a, f.mul(x, x)), f.mul(b, f.mul(x, y))),
                        f.mul(c, f.mul(y, y)),
                    );
                    assert_ne!(val, 0);
                }
            }
        }
    }
}
