//! Hodge star on sphere-type quotients `S^m_theta` embedded in R^(m+1).
//!
//! The star of a tangential form on the unit sphere is computed in the
//! ambient space as `*_S w = *_amb(n ^ w)` with `n` the radial one-form.
//! The map is transported to the twisted algebra through the classical
//! monomial basis: untwist, apply the (torus-equivariant) classical star,
//! retwist. Ambient star constants in the complex generator basis are
//! derived once from the real orthonormal frame and stored exactly.

use std::time::Instant;

use serde::Serialize;

use crate::algebra::{AlgebraSpec, Element, Mono};
use crate::coeff::{Coefficient, GaussRat};
use crate::error::AlgebraError;
use crate::expr;
use crate::matrix::{MatrixForm, Projection};

/// Real ambient coordinates `y_a` and the linear change of basis to the
/// generators: `x_j = sum_a to_real[j][a] y_a`.
#[derive(Clone, Debug)]
pub struct AmbientFrame {
    coords: Vec<String>,
    rows_text: Vec<String>,
    to_real: Vec<Vec<GaussRat>>,
    from_real: Vec<Vec<GaussRat>>,
    orientation: i8,
    /// `*_amb` on every complex frame word, keyed by form mask.
    star_table: Vec<Vec<(u32, GaussRat)>>,
    /// Radial one-form in the classical monomial basis.
    normal_classical: Element,
    /// Radial one-form in the twisted algebra.
    normal: Element,
    /// `dx_0 ^ ... ^ dx_(n-1) = top_factor * vol`, orientation included.
    top_factor: GaussRat,
}

impl AmbientFrame {
    /// `rows[j]` expresses generator `j` in the coordinates, e.g. `y1 + i*y2`.
    pub fn new(alg: &AlgebraSpec, coords: Vec<String>, rows: Vec<String>, orientation: i8) -> Result<Self, AlgebraError> {
        let n = alg.num_generators();
        if coords.len() != n || rows.len() != n {
            return Err(AlgebraError::InvalidSpec(format!(
                "frame needs {n} coordinates and {n} generator rows"
            )));
        }
        if orientation != 1 && orientation != -1 {
            return Err(AlgebraError::InvalidSpec("orientation must be 1 or -1".into()));
        }
        let to_real = rows
            .iter()
            .map(|r| expr::parse_linear(&coords, r))
            .collect::<Result<Vec<_>, _>>()?;
        let from_real = invert(&to_real).ok_or_else(|| AlgebraError::InvalidSpec("frame rows are not invertible".into()))?;
        for j in 0..n {
            // x_j^* must be the conjugate combination
            let s = alg.star_index(j);
            if to_real[s].iter().zip(&to_real[j]).any(|(a, b)| *a != b.conj()) {
                return Err(AlgebraError::InvalidSpec(format!(
                    "frame row of {} is not the conjugate of its star partner",
                    alg.generators()[j].name
                )));
            }
        }
        let rel = alg
            .relations()
            .first()
            .ok_or_else(|| AlgebraError::InvalidSpec("a frame needs a sphere relation".into()))?;
        let half = Coefficient::ratio(1, 2);
        let mut normal = alg.d_free(rel)?.scale(&half);
        let mut normal_classical = alg.untwist(&normal);
        let expected = radial_form(alg, &from_real)?;
        if normal_classical != expected {
            if normal_classical.neg() == expected {
                normal = normal.neg();
                normal_classical = expected;
            } else {
                return Err(AlgebraError::InvalidSpec(
                    "sphere relation is not the unit radius of the frame".into(),
                ));
            }
        }
        let sign = GaussRat::from_ints(orientation as i64, 0);
        let mut star_table = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            let real = wedge_expand(&to_real, mask);
            let mut starred: Vec<(u32, GaussRat)> = Vec::new();
            for (rm, c) in real {
                let comp = ((1u32 << n) - 1) & !rm;
                let eps = if perm_sign(rm, comp, n) { -&c } else { c };
                for (cm, c2) in wedge_expand(&from_real, comp) {
                    let v = &(&eps * &c2) * &sign;
                    accumulate(&mut starred, cm, v);
                }
            }
            starred.retain(|(_, v)| !v.is_zero());
            starred.sort_by_key(|(m, _)| *m);
            star_table.push(starred);
        }
        let full = (1u32 << n) - 1;
        let top = wedge_expand(&to_real, full);
        let top_factor = &top.into_iter().find(|(m, _)| *m == full).map(|(_, c)| c).unwrap_or_else(GaussRat::zero) * &sign;
        Ok(AmbientFrame {
            coords,
            rows_text: rows,
            to_real,
            from_real,
            orientation,
            star_table,
            normal_classical,
            normal,
            top_factor,
        })
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn rows_text(&self) -> &[String] {
        &self.rows_text
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    /// The same frame with the opposite orientation.
    pub fn reversed(&self) -> Self {
        let mut f = self.clone();
        f.orientation = -f.orientation;
        for row in &mut f.star_table {
            for (_, v) in row.iter_mut() {
                *v = -&*v;
            }
        }
        f.top_factor = -&f.top_factor;
        f
    }

    /// Radial one-form `n = 1/2 d(radius^2)` in the twisted algebra.
    pub fn normal_form_element(&self) -> &Element {
        &self.normal
    }

    pub fn normal_classical(&self) -> &Element {
        &self.normal_classical
    }

    pub fn to_real(&self) -> &[Vec<GaussRat>] {
        &self.to_real
    }

    pub fn from_real(&self) -> &[Vec<GaussRat>] {
        &self.from_real
    }

    pub fn top_factor(&self) -> &GaussRat {
        &self.top_factor
    }

    /// Ambient star of a complex frame word.
    pub fn ambient_star(&self, mask: u32) -> &[(u32, GaussRat)] {
        &self.star_table[mask as usize]
    }

    /// The real coordinate `y_a` as an element of the algebra.
    pub fn coordinate(&self, alg: &AlgebraSpec, a: usize) -> Element {
        let n = alg.num_generators();
        let mut e = Element::zero();
        for j in 0..n {
            e.add_term(Mono::generator(n, j), &Coefficient::constant(self.from_real[a][j].clone()));
        }
        e
    }
}

fn accumulate(v: &mut Vec<(u32, GaussRat)>, m: u32, c: GaussRat) {
    if let Some(slot) = v.iter_mut().find(|(k, _)| *k == m) {
        slot.1 = &slot.1 + &c;
    } else {
        v.push((m, c));
    }
}

/// Expands the wedge of the rows selected by `mask` (in increasing order)
/// in the basis the rows are written in.
fn wedge_expand(rows: &[Vec<GaussRat>], mask: u32) -> Vec<(u32, GaussRat)> {
    let mut acc: Vec<(u32, GaussRat)> = vec![(0, GaussRat::one())];
    let n = rows.len();
    for (j, row) in rows.iter().enumerate() {
        if mask >> j & 1 == 0 {
            continue;
        }
        let mut next: Vec<(u32, GaussRat)> = Vec::new();
        for (m, c) in &acc {
            for (b, v) in row.iter().enumerate().take(n) {
                if v.is_zero() || m >> b & 1 == 1 {
                    continue;
                }
                // append at the end, then move left past the larger letters
                let mut t = c * v;
                if (m >> (b + 1)).count_ones() % 2 == 1 {
                    t = -&t;
                }
                accumulate(&mut next, m | 1 << b, t);
            }
        }
        next.retain(|(_, v)| !v.is_zero());
        acc = next;
    }
    acc
}

/// Parity of the permutation listing `first` then `second` (both sorted).
fn perm_sign(first: u32, second: u32, n: usize) -> bool {
    let mut inversions = 0;
    for a in 0..n {
        if first >> a & 1 == 1 {
            inversions += (second & ((1u32 << a) - 1)).count_ones();
        }
    }
    inversions % 2 == 1
}

fn invert(m: &[Vec<GaussRat>]) -> Option<Vec<Vec<GaussRat>>> {
    let n = m.len();
    let mut a: Vec<Vec<GaussRat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { GaussRat::one() } else { GaussRat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].inv()?;
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let d = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &d;
                }
            }
        }
    }
    // rows of the inverse: y_a = sum_j inv[a][j] x_j
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `sum_a y_a dy_a` in the classical monomial basis.
fn radial_form(alg: &AlgebraSpec, from_real: &[Vec<GaussRat>]) -> Result<Element, AlgebraError> {
    let n = alg.num_generators();
    let mut total = Element::zero();
    for row in from_real {
        let mut y = Element::zero();
        let mut dy = Element::zero();
        for (j, c) in row.iter().enumerate() {
            y.add_term(Mono::generator(n, j), &Coefficient::constant(c.clone()));
            dy.add_term(Mono::differential(n, j), &Coefficient::constant(c.clone()));
        }
        total.add_assign(&alg.mul_classical(&y, &dy)?);
    }
    Ok(total)
}

/// Hodge star of a form on the sphere, reduced modulo the ideal.
pub fn hodge_star(alg: &AlgebraSpec, frame: &AmbientFrame, w: &Element) -> Result<Element, AlgebraError> {
    let w = alg.reduce_ideal(w)?;
    let classical = alg.untwist(&w);
    let lifted = alg.mul_classical(frame.normal_classical(), &classical)?;
    let mut out = Element::zero();
    for (m, c) in lifted.terms() {
        for (mask, v) in frame.ambient_star(m.forms) {
            let mono = Mono { exps: m.exps.clone(), forms: *mask };
            out.add_term(mono, &c.scale(v));
        }
    }
    alg.reduce_ideal(&alg.retwist(&out))
}

/// Anti-self-dual part `1/2 (w - *w)` of a two-form.
pub fn project_asd(alg: &AlgebraSpec, frame: &AmbientFrame, w: &Element) -> Result<Element, AlgebraError> {
    project(alg, frame, w, -1)
}

/// Self-dual part `1/2 (w + *w)` of a two-form.
pub fn project_sd(alg: &AlgebraSpec, frame: &AmbientFrame, w: &Element) -> Result<Element, AlgebraError> {
    project(alg, frame, w, 1)
}

fn project(alg: &AlgebraSpec, frame: &AmbientFrame, w: &Element, sign: i64) -> Result<Element, AlgebraError> {
    let w = alg.reduce_ideal(w)?;
    if w.terms().any(|(m, _)| m.form_degree() != 2) {
        return Err(AlgebraError::Precondition("projection onto (anti-)self-dual forms needs a two-form".into()));
    }
    let s = hodge_star(alg, frame, &w)?;
    let half = Coefficient::ratio(1, 2);
    let r = w.scale(&half).add(&s.scale(&Coefficient::ratio(sign, 2)));
    alg.reduce_ideal(&r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub identity: String,
    pub status: Status,
    pub entries_checked: usize,
    /// Largest term count met among the curvature entries and their projections.
    pub max_terms: usize,
    /// Entries with a nonzero anti-self-dual part.
    pub nonzero_entries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Certifies `P_-(p dp dp) = 0` entrywise modulo the ideal.
pub fn self_duality_check(alg: &AlgebraSpec, frame: &AmbientFrame, p: &Projection) -> Certificate {
    let start = Instant::now();
    let identity = "P-(p dp dp) = 0".to_string();
    let run = || -> Result<(usize, usize, usize), AlgebraError> {
        let f = p.curvature(alg)?;
        let mut max_terms = 0;
        let mut nonzero = 0;
        for e in f.entries() {
            let asd = project_asd(alg, frame, e)?;
            max_terms = max_terms.max(e.num_terms()).max(asd.num_terms());
            if !asd.is_zero() {
                nonzero += 1;
            }
        }
        Ok((f.entries().len(), max_terms, nonzero))
    };
    let (status, checked, max_terms, nonzero) = match run() {
        Ok((c, m, 0)) => (Status::Pass, c, m, 0),
        Ok((c, m, z)) => (Status::Fail, c, m, z),
        Err(e) if e.is_inconclusive() => (Status::Inconclusive, 0, 0, 0),
        Err(_) => (Status::Fail, 0, 0, 0),
    };
    Certificate {
        identity,
        status,
        entries_checked: checked,
        max_terms,
        nonzero_entries: nonzero,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    }
}

/// Hodge star applied entrywise.
pub fn hodge_star_matrix(alg: &AlgebraSpec, frame: &AmbientFrame, m: &MatrixForm) -> Result<MatrixForm, AlgebraError> {
    m.map(|e| hodge_star(alg, frame, e))
}
