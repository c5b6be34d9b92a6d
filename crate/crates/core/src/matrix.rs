//! Matrices over the twisted DGA, projections, Grassmann connections and
//! their gauge theory.
//!
//! Endomorphisms of the module `p A^n` are ambient `n x n` matrices with
//! `T = pTp`; a connection `p d + alpha` is stored through its one-form
//! `alpha = p alpha p`.

use crate::algebra::{AlgebraSpec, Element, Mono};
use crate::coeff::Coefficient;
use crate::error::AlgebraError;
use crate::expr;
use crate::manifold::ManifoldSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixForm {
    rows: usize,
    cols: usize,
    entries: Vec<Element>,
}

impl MatrixForm {
    pub fn new(rows: usize, cols: usize, entries: Vec<Element>) -> Result<Self, AlgebraError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(AlgebraError::Dimension(rows, cols, entries.len(), 1));
        }
        Ok(MatrixForm { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixForm { rows, cols, entries: vec![Element::zero(); rows * cols] }
    }

    pub fn identity(alg: &AlgebraSpec, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { alg.one() } else { Element::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Element) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        MatrixForm { rows, cols, entries }
    }

    /// Parses a grid of rendered entries and reduces each one.
    pub fn parse(alg: &AlgebraSpec, grid: &[&[&str]]) -> Result<Self, AlgebraError> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows * cols);
        for row in grid {
            if row.len() != cols {
                return Err(AlgebraError::Dimension(rows, cols, 1, row.len()));
            }
            for src in *row {
                entries.push(alg.reduce(&expr::parse_free(alg, src)?)?);
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> MatrixForm {
        Self::from_fn(self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Element::is_zero)
    }

    /// Largest number of terms in any entry.
    pub fn max_terms(&self) -> usize {
        self.entries.iter().map(Element::num_terms).max().unwrap_or(0)
    }

    pub fn map(&self, mut f: impl FnMut(&Element) -> Result<Element, AlgebraError>) -> Result<Self, AlgebraError> {
        let entries = self.entries.iter().map(&mut f).collect::<Result<Vec<_>, _>>()?;
        Ok(MatrixForm { rows: self.rows, cols: self.cols, entries })
    }

    fn same_shape(&self, other: &MatrixForm) -> Result<(), AlgebraError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::Dimension(self.rows, self.cols, other.rows, other.cols));
        }
        Ok(())
    }

    pub fn add(&self, other: &MatrixForm) -> Result<Self, AlgebraError> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(MatrixForm { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &MatrixForm) -> Result<Self, AlgebraError> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        Ok(MatrixForm { rows: self.rows, cols: self.cols, entries })
    }

    pub fn neg(&self) -> Self {
        MatrixForm { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(Element::neg).collect() }
    }

    /// Multiplication by a central scalar.
    pub fn scale(&self, c: &Coefficient) -> Self {
        MatrixForm { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e.scale(c)).collect() }
    }

    pub fn mul(&self, alg: &AlgebraSpec, other: &MatrixForm) -> Result<Self, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::Dimension(self.rows, self.cols, other.rows, other.cols));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Element::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&alg.mul_free(a, b)?);
                    }
                }
                entries.push(alg.reduce(&acc)?);
            }
        }
        Ok(MatrixForm { rows: self.rows, cols: other.cols, entries })
    }

    /// Product of several matrices, left to right.
    pub fn chain(alg: &AlgebraSpec, factors: &[&MatrixForm]) -> Result<Self, AlgebraError> {
        let (first, rest) = factors.split_first().ok_or(AlgebraError::Dimension(0, 0, 0, 0))?;
        let mut acc = (*first).clone();
        for f in rest {
            acc = acc.mul(alg, f)?;
        }
        Ok(acc)
    }

    /// Conjugate transpose, entrywise star.
    pub fn adjoint(&self, alg: &AlgebraSpec) -> Result<Self, AlgebraError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(alg.reduce(&alg.star_free(self.get(i, j))?)?);
            }
        }
        Ok(MatrixForm { rows: self.cols, cols: self.rows, entries })
    }

    pub fn trace(&self, alg: &AlgebraSpec) -> Result<Element, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::Dimension(self.rows, self.cols, self.cols, self.rows));
        }
        let mut acc = Element::zero();
        for i in 0..self.rows {
            acc.add_assign(self.get(i, i));
        }
        alg.reduce(&acc)
    }

    pub fn d_entrywise(&self, alg: &AlgebraSpec) -> Result<Self, AlgebraError> {
        self.map(|e| alg.reduce(&alg.d_free(e)?))
    }

    pub fn reduce(&self, alg: &AlgebraSpec) -> Result<Self, AlgebraError> {
        self.map(|e| alg.reduce(e))
    }

    /// Bracketed grid of canonical renderings.
    pub fn render(&self, alg: &AlgebraSpec) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = (0..self.cols).map(|j| alg.render(self.get(i, j))).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// A self-adjoint idempotent matrix of functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    p: MatrixForm,
}

impl Projection {
    /// Validates `p^2 = p = p^*` exactly.
    pub fn new(alg: &AlgebraSpec, p: MatrixForm) -> Result<Self, AlgebraError> {
        if p.rows != p.cols {
            return Err(AlgebraError::Dimension(p.rows, p.cols, p.cols, p.rows));
        }
        if p.entries.iter().any(|e| e.form_degree().unwrap_or(0) > 0) {
            return Err(AlgebraError::Precondition("a projection has function entries".into()));
        }
        let p = p.reduce(alg)?;
        if !p.mul(alg, &p)?.sub(&p)?.reduce(alg)?.is_zero() {
            return Err(AlgebraError::Precondition("p^2 != p".into()));
        }
        if p.adjoint(alg)? != p {
            return Err(AlgebraError::Precondition("p^* != p".into()));
        }
        Ok(Projection { p })
    }

    /// `diag(1, ..., 1, 0, ..., 0)` with `rank` ones.
    pub fn trivial(alg: &AlgebraSpec, n: usize, rank: usize) -> Self {
        let p = MatrixForm::from_fn(n, n, |i, j| if i == j && i < rank { alg.one() } else { Element::zero() });
        Projection { p }
    }

    pub fn matrix(&self) -> &MatrixForm {
        &self.p
    }

    pub fn size(&self) -> usize {
        self.p.rows
    }

    /// Is `m = p m p`?
    pub fn is_endomorphism(&self, alg: &AlgebraSpec, m: &MatrixForm) -> Result<bool, AlgebraError> {
        Ok(MatrixForm::chain(alg, &[&self.p, m, &self.p])? == m.reduce(alg)?)
    }

    /// Curvature `p dp dp` of the Grassmann connection.
    pub fn curvature(&self, alg: &AlgebraSpec) -> Result<MatrixForm, AlgebraError> {
        let dp = self.p.d_entrywise(alg)?;
        MatrixForm::chain(alg, &[&self.p, &dp, &dp])
    }

    /// Curvature of `p d + alpha`: `p dp dp p + p d(alpha) p + alpha alpha`.
    pub fn curvature_with(&self, alg: &AlgebraSpec, alpha: &MatrixForm) -> Result<MatrixForm, AlgebraError> {
        self.check_one_form(alg, alpha)?;
        let p = &self.p;
        let dp = p.d_entrywise(alg)?;
        let da = alpha.d_entrywise(alg)?;
        let f0 = MatrixForm::chain(alg, &[p, &dp, &dp, p])?;
        let f1 = MatrixForm::chain(alg, &[p, &da, p])?;
        let f2 = alpha.mul(alg, alpha)?;
        f0.add(&f1)?.add(&f2)?.reduce(alg)
    }

    /// Grassmann connection `p d` on a column `xi = p xi`.
    pub fn grassmann_apply(&self, alg: &AlgebraSpec, xi: &MatrixForm) -> Result<MatrixForm, AlgebraError> {
        if xi.cols != 1 || xi.rows != self.p.rows {
            return Err(AlgebraError::Dimension(self.p.rows, self.p.cols, xi.rows, xi.cols));
        }
        if self.p.mul(alg, xi)? != xi.reduce(alg)? {
            return Err(AlgebraError::Precondition("section is not in the range of p".into()));
        }
        self.p.mul(alg, &xi.d_entrywise(alg)?)
    }

    /// `[nabla, T]` realized as `p dT p`.
    pub fn lifted_commutator(&self, alg: &AlgebraSpec, t: &MatrixForm) -> Result<MatrixForm, AlgebraError> {
        if !self.is_endomorphism(alg, t)? {
            return Err(AlgebraError::Precondition("T is not an endomorphism of the module".into()));
        }
        MatrixForm::chain(alg, &[&self.p, &t.d_entrywise(alg)?, &self.p])
    }

    fn check_one_form(&self, alg: &AlgebraSpec, alpha: &MatrixForm) -> Result<(), AlgebraError> {
        if alpha.entries.iter().any(|e| e.terms().any(|(m, _)| m.form_degree() != 1)) {
            return Err(AlgebraError::Precondition("connection form must be a one-form".into()));
        }
        if !self.is_endomorphism(alg, alpha)? {
            return Err(AlgebraError::Precondition("alpha != p alpha p".into()));
        }
        if alpha.adjoint(alg)? != alpha.neg().reduce(alg)? {
            return Err(AlgebraError::Precondition("alpha is not skew-adjoint".into()));
        }
        Ok(())
    }

    /// Is `U U^* = U^* U = p` with `U = pUp`?
    pub fn is_unitary(&self, alg: &AlgebraSpec, u: &MatrixForm) -> Result<bool, AlgebraError> {
        if !self.is_endomorphism(alg, u)? {
            return Ok(false);
        }
        let us = u.adjoint(alg)?;
        Ok(u.mul(alg, &us)? == self.p && us.mul(alg, u)? == self.p)
    }

    /// Gauge action `alpha^U = -(p dU p) U^* + U alpha U^*`.
    pub fn gauge_transform_form(&self, alg: &AlgebraSpec, alpha: &MatrixForm, u: &MatrixForm) -> Result<MatrixForm, AlgebraError> {
        self.check_one_form(alg, alpha)?;
        if !self.is_unitary(alg, u)? {
            return Err(AlgebraError::Precondition("U is not unitary relative to p".into()));
        }
        let us = u.adjoint(alg)?;
        let du = MatrixForm::chain(alg, &[&self.p, &u.d_entrywise(alg)?, &self.p])?;
        let a = du.mul(alg, &us)?.neg();
        let b = MatrixForm::chain(alg, &[u, alpha, &us])?;
        a.add(&b)?.reduce(alg)
    }
}

/// `u` on the seven-sphere, `p` on the four-sphere, and the images of the
/// four-sphere generators in the seven-sphere algebra.
pub struct InstantonData {
    pub u: MatrixForm,
    pub p: Projection,
    pub inclusion: Vec<Element>,
}

/// The columns of `u` are orthonormal and `p = u u^*` has entries in the
/// subalgebra of the four-sphere.
pub fn hopf_matrix(alg7: &AlgebraSpec) -> Result<MatrixForm, AlgebraError> {
    MatrixForm::parse(
        alg7,
        &[&["z1", "-z2'"], &["z2", "z1'"], &["z3", "-z4'"], &["z4", "z3'"]],
    )
}

pub fn basic_projection(alg4: &AlgebraSpec) -> Result<Projection, AlgebraError> {
    let m = MatrixForm::parse(
        alg4,
        &[
            &["1/2 + 1/2*x0", "0", "1/2*x1", "-1/2*mu^-1*x2'"],
            &["0", "1/2 + 1/2*x0", "1/2*x2", "1/2*mu*x1'"],
            &["1/2*x1'", "1/2*x2'", "1/2 - 1/2*x0", "0"],
            &["-1/2*mu*x2", "1/2*mu^-1*x1", "0", "1/2 - 1/2*x0"],
        ],
    )?;
    Projection::new(alg4, m)
}

/// Images of `x0, x1, x1', x2, x2'` under the inclusion into the seven-sphere.
pub fn hopf_inclusion(alg4: &AlgebraSpec, alg7: &AlgebraSpec) -> Result<Vec<Element>, AlgebraError> {
    let images = [
        ("x0", "z1*z1' + z2*z2' - z3*z3' - z4*z4'"),
        ("x1", "2*z1*z3' + 2*z2'*z4"),
        ("x1'", "2*z3*z1' + 2*z4'*z2"),
        ("x2", "2*z2*z3' - 2*z1'*z4"),
        ("x2'", "2*z3*z2' - 2*z4'*z1"),
    ];
    let mut out = vec![Element::zero(); alg4.num_generators()];
    for (name, src) in images {
        out[alg4.generator_index(name)?] = expr::parse(alg7, src)?;
    }
    Ok(out)
}

/// Transports a four-sphere element along a homomorphism given by the
/// images of the generators.
pub fn apply_homomorphism(alg4: &AlgebraSpec, alg7: &AlgebraSpec, images: &[Element], a: &Element) -> Result<Element, AlgebraError> {
    if images.len() != alg4.num_generators() {
        return Err(AlgebraError::SpecMismatch);
    }
    let mut out = Element::zero();
    for (m, c) in a.terms() {
        if m.forms != 0 {
            return Err(AlgebraError::Unsupported("homomorphisms act on functions only".into()));
        }
        let mut img = alg7.constant(c.clone());
        // canonical words are ordered products of their letters
        for (j, &e) in m.exps.iter().enumerate() {
            for _ in 0..e {
                img = alg7.product(&img, &images[j])?;
            }
        }
        out.add_assign(&img);
    }
    alg7.normal_form(&out)
}

pub fn build_instanton_data(s4: &ManifoldSpec, s7: &ManifoldSpec) -> Result<InstantonData, AlgebraError> {
    let (alg4, alg7) = (s4.algebra(), s7.algebra());
    for name in ["x0", "x1", "x1'", "x2", "x2'"] {
        alg4.generator_index(name)?;
    }
    for name in ["z1", "z2", "z3", "z4"] {
        alg7.generator_index(name)?;
    }
    Ok(InstantonData {
        u: hopf_matrix(alg7)?,
        p: basic_projection(alg4)?,
        inclusion: hopf_inclusion(alg4, alg7)?,
    })
}

/// A constant `n x n` matrix.
pub fn constant_matrix(alg: &AlgebraSpec, n: usize, values: &[Coefficient]) -> Result<MatrixForm, AlgebraError> {
    if values.len() != n * n {
        return Err(AlgebraError::Dimension(n, n, values.len(), 1));
    }
    Ok(MatrixForm::from_fn(n, n, |i, j| {
        let c = &values[i * n + j];
        if c.is_zero() {
            Element::zero()
        } else {
            Element::from_term(Mono::one(alg.num_generators()), c.clone())
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spheres;

    #[test]
    fn hopf_columns_orthonormal() {
        let alg7 = spheres::s7_theta().algebra();
        let u = hopf_matrix(alg7).unwrap();
        let utu = u.adjoint(alg7).unwrap().mul(alg7, &u).unwrap();
        assert_eq!(utu, MatrixForm::identity(alg7, 2));
    }

    #[test]
    fn basic_projection_trace() {
        let alg4 = spheres::s4_theta().algebra();
        let p = basic_projection(alg4).unwrap();
        assert_eq!(p.matrix().trace(alg4).unwrap(), alg4.constant(Coefficient::from_int(2)));
    }

    #[test]
    fn p_is_u_u_star() {
        let (s4, s7) = (spheres::s4_theta(), spheres::s7_theta());
        let data = build_instanton_data(s4, s7).unwrap();
        let alg7 = s7.algebra();
        let uus = data.u.mul(alg7, &data.u.adjoint(alg7).unwrap()).unwrap();
        let pushed = data
            .p
            .matrix()
            .map(|e| apply_homomorphism(s4.algebra(), alg7, &data.inclusion, e))
            .unwrap();
        assert_eq!(pushed, uus);
    }

    #[test]
    fn shape_errors() {
        let alg = spheres::s4_theta().algebra();
        let a = MatrixForm::identity(alg, 2);
        let b = MatrixForm::identity(alg, 3);
        assert!(matches!(a.mul(alg, &b), Err(AlgebraError::Dimension(..))));
        assert!(a.add(&b).is_err());
        assert!(MatrixForm::new(2, 2, vec![]).is_err());
    }

    #[test]
    fn section_precondition() {
        let alg = spheres::s4_theta().algebra();
        let p = Projection::trivial(alg, 2, 1);
        let xi = MatrixForm::from_fn(2, 1, |_, _| alg.gen("x1").unwrap());
        assert!(matches!(p.grassmann_apply(alg, &xi), Err(AlgebraError::Precondition(_))));
    }
}
