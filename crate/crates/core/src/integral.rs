//! The torus-invariant integral on the four-sphere, Hermitian structure,
//! L^2 and Sobolev norms, the second Chern number and the moduli index.
//!
//! Integrals are exact multiples of `pi^2`: the invariant part of a
//! function is read as a classical polynomial in the real coordinates and
//! integrated over the round sphere monomial by monomial with
//! `int y^k = 2 prod Gamma((k_a+1)/2) / Gamma((|k|+5)/2)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{AlgebraSpec, Element, Mono, MultiDegree};
use crate::coeff::{Coefficient, GaussRat, Theta};
use crate::error::AlgebraError;
use crate::hodge::AmbientFrame;
use crate::matrix::{MatrixForm, Projection};

/// An exact value `coefficient * pi^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralValue {
    pub coefficient: Coefficient,
}

impl IntegralValue {
    pub fn zero() -> Self {
        IntegralValue { coefficient: Coefficient::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    /// The rational multiple of `pi^2`, when the value is `mu`-free and real.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coefficient.as_rational()
    }

    pub fn evaluate(&self, theta: Theta) -> num_complex::Complex64 {
        self.coefficient.evaluate(theta) * std::f64::consts::PI.powi(2)
    }
}

impl std::ops::Add for &IntegralValue {
    type Output = IntegralValue;
    fn add(self, rhs: &IntegralValue) -> IntegralValue {
        IntegralValue { coefficient: &self.coefficient + &rhs.coefficient }
    }
}

impl fmt::Display for IntegralValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient.num_terms() > 1 {
            write!(f, "({})*pi^2", self.coefficient)
        } else if self.coefficient.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}*pi^2", self.coefficient)
        }
    }
}

/// `Gamma(k/2) / sqrt(pi)^(k mod 2)` for `k >= 1`.
fn gamma_half(k: u32) -> BigRational {
    let mut r = BigRational::one();
    if k % 2 == 0 {
        for i in 1..k / 2 {
            r *= BigRational::from_integer(i.into());
        }
    } else {
        // Gamma(m + 1/2) = (1/2)(3/2)...(m - 1/2) sqrt(pi)
        for i in 0..(k - 1) / 2 {
            r *= BigRational::new((2 * i + 1).into(), 2.into());
        }
    }
    r
}

/// Integral of `prod y_a^k_a` over the unit four-sphere, divided by `pi^2`.
pub fn sphere_monomial(k: &[u32]) -> Result<BigRational, AlgebraError> {
    if k.len() != 5 {
        return Err(AlgebraError::Unsupported("monomial integrals are implemented on the four-sphere".into()));
    }
    if k.iter().any(|e| e % 2 == 1) {
        return Ok(BigRational::zero());
    }
    let total: u32 = k.iter().sum();
    let mut num = BigRational::from_integer(2.into());
    for &e in k {
        num *= gamma_half(e + 1);
    }
    // five half-integer Gammas over one: pi^(5/2) / pi^(1/2)
    Ok(num / gamma_half(total + 5))
}

/// Polynomial in the real coordinates.
type RealPoly = BTreeMap<Vec<u32>, GaussRat>;

fn poly_mul(a: &RealPoly, b: &RealPoly) -> RealPoly {
    let mut out = RealPoly::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            let slot = out.entry(k).or_insert_with(GaussRat::zero);
            *slot = &*slot + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn linear_poly(row: &[GaussRat]) -> RealPoly {
    let n = row.len();
    let mut p = RealPoly::new();
    for (a, c) in row.iter().enumerate() {
        if !c.is_zero() {
            let mut k = vec![0; n];
            k[a] = 1;
            p.insert(k, c.clone());
        }
    }
    p
}

/// Exact integrals of classical monomials in the generators, each expanded
/// in the real frame once and remembered.
struct MonomialIntegrals {
    dim: usize,
    rows: Vec<RealPoly>,
    powers: Vec<Vec<RealPoly>>,
    cache: HashMap<Vec<u16>, GaussRat>,
}

impl MonomialIntegrals {
    fn new(frame: &AmbientFrame) -> Self {
        let dim = frame.coords().len();
        let rows: Vec<RealPoly> = frame.to_real().iter().map(|r| linear_poly(r)).collect();
        let one = RealPoly::from([(vec![0; dim], GaussRat::one())]);
        let powers = rows.iter().map(|r| vec![one.clone(), r.clone()]).collect();
        MonomialIntegrals { dim, rows, powers, cache: HashMap::new() }
    }

    /// `int prod x_j^e_j` over the sphere, divided by `pi^2`.
    fn value(&mut self, exps: &[u16]) -> Result<&GaussRat, AlgebraError> {
        if !self.cache.contains_key(exps) {
            let mut acc = RealPoly::from([(vec![0; self.dim], GaussRat::one())]);
            for (j, &e) in exps.iter().enumerate() {
                while self.powers[j].len() <= e as usize {
                    let next = poly_mul(self.powers[j].last().unwrap(), &self.rows[j]);
                    self.powers[j].push(next);
                }
                if e > 0 {
                    acc = poly_mul(&acc, &self.powers[j][e as usize]);
                }
            }
            let mut value = GaussRat::zero();
            for (k, v) in acc {
                let w = sphere_monomial(&k)?;
                if !w.is_zero() {
                    value = &value + &(&v * &GaussRat::real(w));
                }
            }
            self.cache.insert(exps.to_vec(), value);
        }
        Ok(&self.cache[exps])
    }

    /// Integral of a classical polynomial (already untwisted), as a multiple
    /// of `pi^2`.
    fn integrate(&mut self, f: &Element) -> Result<Coefficient, AlgebraError> {
        let mut total = Coefficient::zero();
        for (m, c) in f.terms() {
            if m.forms != 0 {
                return Err(AlgebraError::Precondition("integrand must be a function".into()));
            }
            let v = self.value(&m.exps)?;
            if !v.is_zero() {
                total = &total + &c.scale(v);
            }
        }
        Ok(total)
    }

    /// `int a^* b` at a numeric deformation parameter, divided by `pi^2`:
    /// only degree-matched term pairs meet, each through its cached
    /// monomial integral.
    fn pairing_at(&mut self, alg: &AlgebraSpec, a: &Element, b: &Element, theta: Theta) -> Result<Complex64, AlgebraError> {
        let mu = theta.mu();
        let numeric = |e: &Element| -> BTreeMap<MultiDegree, Vec<(Mono, Complex64)>> {
            alg.decompose_homogeneous(e)
                .into_iter()
                .map(|(d, part)| (d, part.terms().map(|(m, c)| (m.clone(), c.evaluate(theta))).collect()))
                .collect()
        };
        let stars = numeric(&alg.star_free(a)?);
        let mut total = Complex64::new(0.0, 0.0);
        for (deg, part) in numeric(b) {
            let Some(s) = stars.get(&deg.neg()) else { continue };
            for (ms, xs) in s {
                for (mb, xb) in &part {
                    let Some((exp, sign, out)) = alg.mono_mul(ms, mb) else { continue };
                    let v = self.value(&out.exps)?;
                    if v.is_zero() {
                        continue;
                    }
                    let term = xs * xb * mu.powi(exp + alg.classical_twist(&out)) * v.to_complex();
                    total += if sign { -term } else { term };
                }
            }
        }
        Ok(total)
    }
}

/// Integral of a classical polynomial (already untwisted), as a multiple of `pi^2`.
fn integrate_classical(frame: &AmbientFrame, f: &Element) -> Result<Coefficient, AlgebraError> {
    MonomialIntegrals::new(frame).integrate(f)
}

/// Noncommutative integral of a function: the classical integral of its
/// torus-invariant part.
///
/// No reduction is needed first: the sphere relations are central and
/// invariant, so a multiple of one untwists to a classical multiple of a
/// function vanishing on the sphere.
pub fn invariant_integral(alg: &AlgebraSpec, frame: &AmbientFrame, a: &Element) -> Result<IntegralValue, AlgebraError> {
    alg.check(a)?;
    let zero = MultiDegree::zero(alg.rank());
    let inv = alg.decompose_homogeneous(a).remove(&zero).unwrap_or_default();
    let coefficient = integrate_classical(frame, &alg.untwist(&inv))?;
    Ok(IntegralValue { coefficient })
}

/// The invariant part of `a^* b`, multiplying only the pieces whose degrees
/// cancel.
fn invariant_product(alg: &AlgebraSpec, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
    let stars = alg.decompose_homogeneous(&alg.star_free(a)?);
    let mut inv = Element::zero();
    for (deg, part) in alg.decompose_homogeneous(b) {
        if let Some(s) = stars.get(&deg.neg()) {
            inv.add_assign(&alg.mul_free(s, &part)?);
        }
    }
    Ok(inv)
}

/// `int a^* b`.
pub fn invariant_pairing(alg: &AlgebraSpec, frame: &AmbientFrame, a: &Element, b: &Element) -> Result<IntegralValue, AlgebraError> {
    let inv = invariant_product(alg, a, b)?;
    Ok(IntegralValue { coefficient: integrate_classical(frame, &alg.untwist(&inv))? })
}

/// Integral of a four-form: `n ^ w = f dx_0...dx_4` in the ambient space and
/// `int w = int f * (dx_0...dx_4 / vol)`.
pub fn integrate_top_form(alg: &AlgebraSpec, frame: &AmbientFrame, w: &Element) -> Result<IntegralValue, AlgebraError> {
    let w = alg.reduce_ideal(w)?;
    if w.terms().any(|(m, _)| m.form_degree() as usize != frame.dimension()) {
        return Err(AlgebraError::Precondition("integrand must be a top-degree form".into()));
    }
    let lifted = alg.mul_classical(frame.normal_classical(), &alg.untwist(&w))?;
    let mut f = Element::zero();
    for (m, c) in lifted.terms() {
        let func = Mono { exps: m.exps.clone(), forms: 0 };
        f.add_term(func, &c.scale(frame.top_factor()));
    }
    Ok(IntegralValue { coefficient: integrate_classical(frame, &f)? })
}

/// `<phi, psi> = sum_j phi_j^* psi_j` for columns.
pub fn hermitian(alg: &AlgebraSpec, phi: &MatrixForm, psi: &MatrixForm) -> Result<Element, AlgebraError> {
    if phi.cols() != 1 || psi.cols() != 1 || phi.rows() != psi.rows() {
        return Err(AlgebraError::Dimension(phi.rows(), phi.cols(), psi.rows(), psi.cols()));
    }
    let mut acc = Element::zero();
    for j in 0..phi.rows() {
        acc.add_assign(&alg.mul_free(&alg.star_free(phi.get(j, 0))?, psi.get(j, 0))?);
    }
    alg.reduce(&acc)
}

/// `(int <phi, phi>^(p/2))^(1/p)` evaluated at `theta`; `p` must be even.
pub fn p_norm(alg: &AlgebraSpec, frame: &AmbientFrame, phi: &MatrixForm, p: u32, theta: Theta) -> Result<f64, AlgebraError> {
    if p == 0 || p % 2 == 1 {
        return Err(AlgebraError::Unsupported(format!("p-norm needs an even p, got {p}")));
    }
    let h = hermitian(alg, phi, phi)?;
    let v = invariant_integral(alg, frame, &alg.power(&h, p / 2)?)?;
    Ok(v.evaluate(theta).re.max(0.0).powf(1.0 / p as f64))
}

/// Tangential projector `q_ab = delta_ab - y_a y_b` on the real cotangent frame.
pub fn tangential_projector(alg: &AlgebraSpec, frame: &AmbientFrame) -> Result<MatrixForm, AlgebraError> {
    let n = frame.coords().len();
    let ys: Vec<Element> = (0..n).map(|a| frame.coordinate(alg, a)).collect();
    let mut entries = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut e = alg.mul_free(&ys[a], &ys[b])?.neg();
            if a == b {
                e.add_assign(&alg.one());
            }
            entries.push(alg.normal_form(&e)?);
        }
    }
    MatrixForm::new(n, n, entries)
}

/// Left coefficients of a one-form in the real frame: `w = sum_a W_a dy_a`.
fn real_components(alg: &AlgebraSpec, frame: &AmbientFrame, w: &Element) -> Result<Vec<Element>, AlgebraError> {
    let n = alg.num_generators();
    let mut out = vec![Element::zero(); frame.coords().len()];
    for (m, c) in alg.reduce_ideal(w)?.terms() {
        if m.form_degree() != 1 {
            return Err(AlgebraError::Precondition("expected a one-form".into()));
        }
        let j = m.forms.trailing_zeros() as usize;
        let func = Mono { exps: m.exps.clone(), forms: 0 };
        debug_assert!(j < n);
        for (a, slot) in out.iter_mut().enumerate() {
            let mja = &frame.to_real()[j][a];
            if !mja.is_zero() {
                slot.add_term(func.clone(), &c.scale(mja));
            }
        }
    }
    Ok(out)
}

/// The tangential components `(q W_i)_a` of a column of one-forms; the
/// squared norm of the column is `sum int (q W_i)_a^* (q W_i)_a` because
/// `q = q^* = q^2`.
fn tangential_parts(alg: &AlgebraSpec, frame: &AmbientFrame, q: &MatrixForm, col: &[Element]) -> Result<Vec<Element>, AlgebraError> {
    let mut out = Vec::new();
    for w in col {
        let comps = real_components(alg, frame, w)?;
        for a in 0..comps.len() {
            let mut qw = Element::zero();
            for (b, cb) in comps.iter().enumerate() {
                if !cb.is_zero() && !q.get(a, b).is_zero() {
                    qw.add_assign(&alg.mul_free(q.get(a, b), cb)?);
                }
            }
            let qw = alg.normal_form(&qw)?;
            if !qw.is_zero() {
                out.push(qw);
            }
        }
    }
    Ok(out)
}

/// For `j = 0..=k`, functions `f` with `||nabla^j phi||^2 = sum int f^* f`.
fn sobolev_parts(alg: &AlgebraSpec, frame: &AmbientFrame, p: &Projection, phi: &MatrixForm, k: u32) -> Result<Vec<Vec<Element>>, AlgebraError> {
    if k > 2 {
        return Err(AlgebraError::Unsupported(format!("Sobolev order {k} > 2")));
    }
    let n = frame.coords().len();
    let mut out = vec![phi.entries().to_vec()];
    if k == 0 {
        return Ok(out);
    }
    let q = tangential_projector(alg, frame)?;
    let grad = p.grassmann_apply(alg, phi)?;
    out.push(tangential_parts(alg, frame, &q, grad.entries())?);
    if k == 1 {
        return Ok(out);
    }
    // nabla phi as a section of C^r (x) C^n: V_(i,a) = (q W_i)_a, then
    // nabla V = (p (x) q) dV
    let r = phi.rows();
    let mut v = Vec::with_capacity(r * n);
    for w in grad.entries() {
        let comps = real_components(alg, frame, w)?;
        for a in 0..n {
            let mut acc = Element::zero();
            for (b, cb) in comps.iter().enumerate() {
                acc.add_assign(&alg.mul_free(q.get(a, b), cb)?);
            }
            v.push(alg.normal_form(&acc)?);
        }
    }
    let dv: Vec<Element> = v.iter().map(|e| alg.reduce_ideal(&alg.d_free(e)?)).collect::<Result<_, _>>()?;
    let pm = p.matrix();
    let mut second = Vec::with_capacity(r * n);
    for i in 0..r {
        for a in 0..n {
            let mut acc = Element::zero();
            for j in 0..r {
                if pm.get(i, j).is_zero() {
                    continue;
                }
                for b in 0..n {
                    let d = &dv[j * n + b];
                    if d.is_zero() || q.get(a, b).is_zero() {
                        continue;
                    }
                    let pq = alg.mul_free(pm.get(i, j), q.get(a, b))?;
                    acc.add_assign(&alg.mul_free(&pq, d)?);
                }
            }
            second.push(alg.reduce_ideal(&acc)?);
        }
    }
    out.push(tangential_parts(alg, frame, &q, &second)?);
    Ok(out)
}

/// Squared L^2 norms `||nabla^j phi||^2` for `j = 0..=k`, exact.
pub fn sobolev_terms(alg: &AlgebraSpec, frame: &AmbientFrame, p: &Projection, phi: &MatrixForm, k: u32) -> Result<Vec<IntegralValue>, AlgebraError> {
    let mut ints = MonomialIntegrals::new(frame);
    let mut out = Vec::new();
    for parts in sobolev_parts(alg, frame, p, phi, k)? {
        let mut inv = Element::zero();
        for f in &parts {
            inv.add_assign(&invariant_product(alg, f, f)?);
        }
        out.push(IntegralValue { coefficient: ints.integrate(&alg.untwist(&inv))? });
    }
    Ok(out)
}

/// Squared L^2 norms `||nabla^j phi||^2` for `j = 0..=k` at `theta`.
///
/// The sections are computed exactly; only the final pairings are
/// evaluated numerically, which keeps the higher orders cheap.
pub fn sobolev_terms_at(alg: &AlgebraSpec, frame: &AmbientFrame, p: &Projection, phi: &MatrixForm, k: u32, theta: Theta) -> Result<Vec<f64>, AlgebraError> {
    let mut ints = MonomialIntegrals::new(frame);
    let pi2 = std::f64::consts::PI.powi(2);
    let mut out = Vec::new();
    for parts in sobolev_parts(alg, frame, p, phi, k)? {
        let mut total = 0.0;
        for f in &parts {
            total += ints.pairing_at(alg, f, f, theta)?.re;
        }
        out.push(total * pi2);
    }
    Ok(out)
}

/// `||phi||_{2,k} = (sum_{j<=k} ||nabla^j phi||_2^2)^(1/2)` at `theta`.
pub fn sobolev_norm(alg: &AlgebraSpec, frame: &AmbientFrame, p: &Projection, phi: &MatrixForm, k: u32, theta: Theta) -> Result<f64, AlgebraError> {
    Ok(sobolev_terms_at(alg, frame, p, phi, k, theta)?.iter().sum::<f64>().max(0.0).sqrt())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeReport {
    /// `int tr(F ^ F)` as a multiple of `pi^2`, rendered.
    pub trace_integral: String,
    pub charge: Option<i64>,
    pub mu_free: bool,
}

/// `k = -(1/8 pi^2) int tr(F ^ F)`. Fails unless the exact value is an integer.
pub fn second_chern_charge(alg: &AlgebraSpec, frame: &AmbientFrame, p: &Projection) -> Result<(i64, ChargeReport), AlgebraError> {
    let f = p.curvature(alg)?;
    let ff = f.mul(alg, &f)?;
    let tr = ff.trace(alg)?;
    let v = integrate_top_form(alg, frame, &tr)?;
    let mu_free = v.coefficient.is_mu_free();
    let k = v.as_rational().map(|r| -r / BigRational::from_integer(8.into()));
    let report = |charge| ChargeReport { trace_integral: v.to_string(), charge, mu_free };
    match k {
        Some(k) if k.is_integer() => {
            let k = k.to_integer().to_i64().ok_or_else(|| AlgebraError::Unsupported("charge out of range".into()))?;
            Ok((k, report(Some(k))))
        }
        _ => Err(AlgebraError::Precondition(format!("charge is not an exact integer: -({v})/(8 pi^2)"))),
    }
}

/// Inputs to the index arithmetic of the instanton deformation complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChernData {
    /// Rank of the negative spinor bundle.
    pub spinor_rank: i64,
    /// Rank of the adjoint bundle.
    pub adjoint_rank: i64,
    pub k: i64,
}

impl ChernData {
    pub fn su2(k: i64) -> Self {
        ChernData { spinor_rank: 2, adjoint_rank: 4, k }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub k: i64,
    pub h0: i64,
    pub h2: i64,
    pub index: i64,
    pub dimension: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// `ind = 2 (4k) - 4`, `dim = ind + h0 + h2 = 8k - 3`.
pub fn index_and_dimension(data: ChernData) -> IndexReport {
    let (h0, h2) = (1, 0);
    let index = data.spinor_rank * (data.adjoint_rank * data.k) - data.adjoint_rank;
    let dimension = index + h0 + h2;
    let note = (dimension <= 0).then(|| "no irreducible instantons at this k".to_string());
    IndexReport { k: data.k, h0, h2, index, dimension, note }
}

/// Exact integer check helper for reports.
pub fn is_integral(r: &BigRational) -> bool {
    r.denom().abs() == BigInt::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spheres;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn monomial_integrals() {
        assert_eq!(sphere_monomial(&[0; 5]).unwrap(), rat(8, 3));
        assert_eq!(sphere_monomial(&[2, 0, 0, 0, 0]).unwrap(), rat(8, 15));
        assert_eq!(sphere_monomial(&[1, 1, 0, 0, 0]).unwrap(), rat(0, 1));
        // sum_a int y_a^2 = int 1
        let s: BigRational = (0..5)
            .map(|a| {
                let mut k = [0u32; 5];
                k[a] = 2;
                sphere_monomial(&k).unwrap()
            })
            .sum();
        assert_eq!(s, rat(8, 3));
    }

    #[test]
    fn volume_and_moments() {
        let s4 = spheres::s4_theta();
        let (alg, frame) = (s4.algebra(), s4.frame().unwrap());
        assert_eq!(invariant_integral(alg, frame, &alg.one()).unwrap().as_rational(), Some(rat(8, 3)));
        assert!(invariant_integral(alg, frame, &alg.gen("x0").unwrap()).unwrap().is_zero());
        let x1x1s = alg.product(&alg.gen("x1").unwrap(), &alg.gen("x1'").unwrap()).unwrap();
        assert_eq!(invariant_integral(alg, frame, &x1x1s).unwrap().as_rational(), Some(rat(16, 15)));
        assert!(invariant_integral(alg, frame, &alg.gen("x1").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn index_table() {
        let r = index_and_dimension(ChernData::su2(1));
        assert_eq!((r.index, r.dimension), (4, 5));
        let r = index_and_dimension(ChernData::su2(2));
        assert_eq!((r.index, r.dimension), (12, 13));
        let r = index_and_dimension(ChernData::su2(0));
        assert_eq!(r.dimension, -3);
        assert!(r.note.is_some());
    }

    #[test]
    fn display() {
        let v = IntegralValue { coefficient: Coefficient::ratio(8, 3) };
        assert_eq!(v.to_string(), "8/3*pi^2");
    }
}
