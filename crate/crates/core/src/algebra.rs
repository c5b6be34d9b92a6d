//! Z^N-graded *-algebras with a bicharacter-twisted product.
//!
//! Elements live in the free twisted graded-commutative algebra on the
//! generators `g` and their differentials `dg`. Every pair of letters
//! commutes up to a phase `mu^k` (and a Koszul sign for two form letters),
//! so a canonically ordered word is just an exponent vector plus a set of
//! form letters. Quotients by relations are handled by a completed
//! rewriting system (see [`crate::rewrite`]).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::coeff::{Coefficient, GaussRat};
use crate::error::AlgebraError;
use crate::rewrite::{self, Rule};

/// Torus multidegree in Z^N.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDegree(pub SmallVec<[i32; 4]>);

impl MultiDegree {
    pub fn zero(rank: usize) -> Self {
        MultiDegree(SmallVec::from_elem(0, rank))
    }

    pub fn from_slice(v: &[i32]) -> Self {
        MultiDegree(SmallVec::from_slice(v))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        MultiDegree(self.0.iter().map(|c| -c).collect())
    }

    pub fn add_scaled(&mut self, other: &MultiDegree, k: i32) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += k * b;
        }
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: MultiDegree,
    pub star_partner: String,
}

/// Commutation phases as integer powers of `mu`, stored as an integer skew
/// form `B` on Z^N: `bicharacter(r, s) = mu^B(r,s)`. Reordering follows
/// `a_r b_s = bicharacter(s, r) b_s a_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseTable {
    /// The listed entries `(a, b) -> k`, meaning `bicharacter(deg a, deg b) = mu^k`.
    pub entries: Vec<(String, String, i32)>,
    form: Vec<Vec<i32>>,
}

impl PhaseTable {
    /// Fits the skew form to the listed entries. Fails when the entries are
    /// inconsistent, underdetermined or need non-integer exponents.
    pub fn fit(
        rank: usize,
        generators: &[GeneratorSpec],
        entries: Vec<(String, String, i32)>,
    ) -> Result<Self, AlgebraError> {
        let deg = |name: &str| {
            generators
                .iter()
                .find(|g| g.name == name)
                .map(|g| g.degree.clone())
                .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
        };
        let unknowns: Vec<(usize, usize)> =
            (0..rank).flat_map(|i| (i + 1..rank).map(move |j| (i, j))).collect();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for (a, b, k) in &entries {
            let (r, s) = (deg(a)?, deg(b)?);
            let mut row: Vec<BigRational> = unknowns
                .iter()
                .map(|&(i, j)| BigRational::from_integer((r.0[i] * s.0[j] - r.0[j] * s.0[i]).into()))
                .collect();
            row.push(BigRational::from_integer((*k).into()));
            rows.push(row);
        }
        let solution = solve_unique(rows, unknowns.len()).ok_or_else(|| {
            AlgebraError::InvalidSpec("phase table is inconsistent or does not determine a bicharacter".into())
        })?;
        let mut form = vec![vec![0i32; rank]; rank];
        for (&(i, j), v) in unknowns.iter().zip(&solution) {
            if !v.denom().is_one() {
                return Err(AlgebraError::InvalidSpec("phase table needs fractional mu exponents".into()));
            }
            let v: i32 = v
                .numer()
                .try_into()
                .map_err(|_| AlgebraError::InvalidSpec("phase exponent out of range".into()))?;
            form[i][j] = v;
            form[j][i] = -v;
        }
        Ok(PhaseTable { entries, form })
    }

    /// `B(r, s)`.
    pub fn exponent(&self, r: &[i32], s: &[i32]) -> i32 {
        let mut e = 0;
        for (i, ri) in r.iter().enumerate() {
            if *ri == 0 {
                continue;
            }
            for (j, sj) in s.iter().enumerate() {
                e += ri * self.form[i][j] * sj;
            }
        }
        e
    }

    /// Integer 2-cocycle `beta` with `beta(r,s) - beta(s,r) = B(s,r)`,
    /// used to identify the twisted algebra with the classical one.
    pub fn cocycle(&self, r: &[i32], s: &[i32]) -> i32 {
        let n = r.len();
        let mut e = 0;
        for i in 0..n {
            for j in i + 1..n {
                e -= self.form[i][j] * r[i] * s[j];
            }
        }
        e
    }

    pub fn skew_form(&self) -> &[Vec<i32>] {
        &self.form
    }
}

/// Gaussian elimination over Q; returns the unique solution or `None`.
fn solve_unique(mut rows: Vec<Vec<BigRational>>, n: usize) -> Option<Vec<BigRational>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return None;
        };
        rows.swap(pivot_row, p);
        let inv = BigRational::one() / rows[pivot_row][col].clone();
        for v in rows[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=n {
                    let d = &f * &rows[pivot_row][c];
                    rows[r][c] = &rows[r][c] - &d;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|c| rows[c][n].clone()).collect())
}

/// A canonically ordered word: generator exponents, then a set of form
/// letters `dg` (bit `j` stands for `d` of generator `j`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub exps: SmallVec<[u16; 8]>,
    pub forms: u32,
}

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono { exps: SmallVec::from_elem(0, n), forms: 0 }
    }

    pub fn generator(n: usize, j: usize) -> Self {
        let mut m = Mono::one(n);
        m.exps[j] = 1;
        m
    }

    pub fn differential(n: usize, j: usize) -> Self {
        Mono { exps: SmallVec::from_elem(0, n), forms: 1 << j }
    }

    pub fn form_degree(&self) -> u32 {
        self.forms.count_ones()
    }

    pub fn algebra_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.algebra_degree() + self.form_degree()
    }

    pub fn is_one(&self) -> bool {
        self.forms == 0 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.forms & !other.forms == 0 && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn cofactor(&self, other: &Mono) -> Mono {
        Mono {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| b - a).collect(),
            forms: other.forms & !self.forms,
        }
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
            forms: self.forms | other.forms,
        }
    }
}

impl Ord for Mono {
    /// Graded order: total degree, then generator exponents compared from the
    /// highest generator down, then form letters from the highest down.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
            .then_with(|| self.forms.cmp(&other.forms))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite combination of canonical words. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Mono, Coefficient>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn from_term(mono: Mono, c: Coefficient) -> Self {
        let mut e = Element::zero();
        e.add_term(mono, &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Mono) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Mono, &Coefficient)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, mono: Mono, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn pop_last(&mut self) -> Option<(Mono, Coefficient)> {
        self.terms.pop_last()
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), &-c);
        }
        r
    }

    pub fn add_assign(&mut self, other: &Element) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn neg(&self) -> Element {
        self.scale(&Coefficient::from_int(-1))
    }

    pub fn scale(&self, c: &Coefficient) -> Element {
        let mut r = Element::zero();
        if c.is_zero() {
            return r;
        }
        for (m, a) in &self.terms {
            r.add_term(m.clone(), &(a * c));
        }
        r
    }

    /// Largest form degree among the terms.
    pub fn form_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::form_degree).max()
    }

    /// Part of form degree `r`.
    pub fn form_part(&self, r: u32) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.form_degree() == r)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest number of `mu`-terms in any coefficient.
    pub fn max_coefficient_terms(&self) -> usize {
        self.terms.values().map(Coefficient::num_terms).max().unwrap_or(0)
    }

    pub fn map_coefficients(&self, f: impl Fn(&Coefficient) -> Coefficient) -> Element {
        let mut r = Element::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), &f(c));
        }
        r
    }
}

/// Result of braiding two homogeneous elements: `factor * (first (x) second)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braided {
    pub factor: Coefficient,
    pub first: Element,
    pub second: Element,
}

/// An immutable graded *-algebra presentation together with the completed
/// rewriting systems for its relations.
#[derive(Debug)]
pub struct AlgebraSpec {
    rank: usize,
    generators: Vec<GeneratorSpec>,
    phases: PhaseTable,
    relations: Vec<Element>,
    star_of: Vec<usize>,
    /// Degree of every letter: generators first, then their differentials.
    letter_degree: Vec<MultiDegree>,
    /// `swap[j][i] = B(deg j, deg i)`, over letters.
    swap: Vec<Vec<i32>>,
    max_steps: usize,
    algebra_rules: OnceLock<Result<Vec<Rule>, AlgebraError>>,
    ideal_rules: OnceLock<Result<Vec<Rule>, AlgebraError>>,
}

pub const DEFAULT_MAX_STEPS: usize = 2_000_000;

impl AlgebraSpec {
    /// Builds and validates a presentation. `relations` are given as pairs
    /// of free elements `lhs = rhs`, built with [`AlgebraSpec::free_builder`].
    pub fn new(
        rank: usize,
        generators: Vec<GeneratorSpec>,
        phases: PhaseTable,
    ) -> Result<Self, AlgebraError> {
        let n = generators.len();
        if n == 0 || n > 32 {
            return Err(AlgebraError::InvalidSpec(format!("unsupported generator count {n}")));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.degree.rank() != rank {
                return Err(AlgebraError::LengthMismatch { expected: rank, found: g.degree.rank() });
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::InvalidSpec(format!("duplicate generator {}", g.name)));
            }
        }
        let mut star_of = Vec::with_capacity(n);
        for g in &generators {
            let j = generators
                .iter()
                .position(|h| h.name == g.star_partner)
                .ok_or_else(|| AlgebraError::UnknownGenerator(g.star_partner.clone()))?;
            if generators[j].degree != g.degree.neg() {
                return Err(AlgebraError::InvalidSpec(format!(
                    "star partner of {} must carry the negated degree",
                    g.name
                )));
            }
            if generators[j].star_partner != g.name {
                return Err(AlgebraError::InvalidSpec(format!("star pairing of {} is not involutive", g.name)));
            }
            star_of.push(j);
        }
        let letter_degree: Vec<MultiDegree> =
            generators.iter().chain(generators.iter()).map(|g| g.degree.clone()).collect();
        let swap = letter_degree
            .iter()
            .map(|dj| letter_degree.iter().map(|di| phases.exponent(&dj.0, &di.0)).collect())
            .collect();
        Ok(AlgebraSpec {
            rank,
            generators,
            phases,
            relations: Vec::new(),
            star_of,
            letter_degree,
            swap,
            max_steps: DEFAULT_MAX_STEPS,
            algebra_rules: OnceLock::new(),
            ideal_rules: OnceLock::new(),
        })
    }

    /// Adds the relation `lhs - rhs = 0`. Must be torus-homogeneous and of form degree 0.
    pub fn with_relation(mut self, lhs: &Element, rhs: &Element) -> Result<Self, AlgebraError> {
        let rel = lhs.sub(rhs);
        if rel.is_zero() {
            return Ok(self);
        }
        if rel.form_degree() != Some(0) {
            return Err(AlgebraError::InvalidSpec("relations must be functions".into()));
        }
        self.homogeneous_degree(&rel)?;
        self.relations.push(rel);
        self.algebra_rules = OnceLock::new();
        self.ideal_rules = OnceLock::new();
        Ok(self)
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self.algebra_rules = OnceLock::new();
        self.ideal_rules = OnceLock::new();
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn phases(&self) -> &PhaseTable {
        &self.phases
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn star_index(&self, j: usize) -> usize {
        self.star_of[j]
    }

    pub fn one(&self) -> Element {
        Element::from_term(Mono::one(self.num_generators()), Coefficient::one())
    }

    pub fn constant(&self, c: Coefficient) -> Element {
        Element::from_term(Mono::one(self.num_generators()), c)
    }

    pub fn gen(&self, name: &str) -> Result<Element, AlgebraError> {
        let j = self.generator_index(name)?;
        Ok(Element::from_term(Mono::generator(self.num_generators(), j), Coefficient::one()))
    }

    /// The exact one-form `d(name)`.
    pub fn dgen(&self, name: &str) -> Result<Element, AlgebraError> {
        let j = self.generator_index(name)?;
        Ok(Element::from_term(Mono::differential(self.num_generators(), j), Coefficient::one()))
    }

    pub(crate) fn check(&self, a: &Element) -> Result<(), AlgebraError> {
        let n = self.num_generators();
        match a.terms().next() {
            Some((m, _)) if m.exps.len() != n => Err(AlgebraError::SpecMismatch),
            _ => Ok(()),
        }
    }

    /// `bicharacter(r, s) = mu^B(r,s)`.
    pub fn bicharacter(&self, r: &MultiDegree, s: &MultiDegree) -> Result<Coefficient, AlgebraError> {
        for d in [r, s] {
            if d.rank() != self.rank {
                return Err(AlgebraError::LengthMismatch { expected: self.rank, found: d.rank() });
            }
        }
        Ok(Coefficient::mu_pow(self.phases.exponent(&r.0, &s.0)))
    }

    /// Phase `q` with `g h = q h g` for generators `g`, `h`.
    pub fn commutation_phase(&self, g: &str, h: &str) -> Result<Coefficient, AlgebraError> {
        let (g, h) = (self.generator_index(g)?, self.generator_index(h)?);
        Ok(Coefficient::mu_pow(self.swap[h][g]))
    }

    pub fn mono_degree(&self, m: &Mono) -> MultiDegree {
        let mut d = MultiDegree::zero(self.rank);
        for (j, &e) in m.exps.iter().enumerate() {
            if e > 0 {
                d.add_scaled(&self.generators[j].degree, e as i32);
            }
        }
        let mut f = m.forms;
        while f != 0 {
            let j = f.trailing_zeros() as usize;
            d.add_scaled(&self.generators[j].degree, 1);
            f &= f - 1;
        }
        d
    }

    /// The single multidegree of a homogeneous element (`None` for zero).
    pub fn homogeneous_degree(&self, a: &Element) -> Result<Option<MultiDegree>, AlgebraError> {
        let mut deg: Option<MultiDegree> = None;
        for (m, _) in a.terms() {
            let d = self.mono_degree(m);
            match &deg {
                None => deg = Some(d),
                Some(d0) if *d0 != d => return Err(AlgebraError::NonHomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Partition of the terms by multidegree.
    pub fn decompose_homogeneous(&self, a: &Element) -> BTreeMap<MultiDegree, Element> {
        let mut parts: BTreeMap<MultiDegree, Element> = BTreeMap::new();
        for (m, c) in a.terms() {
            parts.entry(self.mono_degree(m)).or_default().add_term(m.clone(), c);
        }
        parts
    }

    /// Product of canonical words in the free twisted algebra:
    /// `a * b = (-1)^sign mu^exp * out`, or `None` when a form letter repeats.
    pub fn mono_mul(&self, a: &Mono, b: &Mono) -> Option<(i32, bool, Mono)> {
        if a.forms & b.forms != 0 {
            return None;
        }
        let n = self.num_generators();
        let count = |m: &Mono, l: usize| -> i32 {
            if l < n {
                m.exps[l] as i32
            } else {
                ((m.forms >> (l - n)) & 1) as i32
            }
        };
        // every letter of b moves left past the larger letters of a
        let mut exp = 0i32;
        let mut above = 0i32; // letters of a strictly above l, for the Koszul sign
        let mut sign = false;
        for l in (0..2 * n).rev() {
            let cb = count(b, l);
            if cb != 0 {
                for (i, row) in self.swap[l].iter().enumerate().skip(l + 1) {
                    let ca = count(a, i);
                    if ca != 0 {
                        exp += cb * ca * row;
                    }
                }
                if l >= n && above % 2 == 1 {
                    sign = !sign;
                }
            }
            if l >= n {
                above += count(a, l);
            }
        }
        let out = Mono {
            exps: a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect(),
            forms: a.forms | b.forms,
        };
        Some((exp, sign, out))
    }

    /// Product in the classical (undeformed) graded-commutative algebra:
    /// only the Koszul sign of the form letters survives.
    pub fn mul_classical(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let mut r = Element::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if ma.forms & mb.forms != 0 {
                    continue;
                }
                let mut sign = false;
                let mut f = mb.forms;
                while f != 0 {
                    let j = f.trailing_zeros();
                    f &= f - 1;
                    if (ma.forms >> (j + 1)).count_ones() % 2 == 1 {
                        sign = !sign;
                    }
                }
                let out = Mono {
                    exps: ma.exps.iter().zip(&mb.exps).map(|(x, y)| x + y).collect(),
                    forms: ma.forms | mb.forms,
                };
                let c = ca * cb;
                r.add_term(out, &if sign { -c } else { c });
            }
        }
        Ok(r)
    }

    pub(crate) fn term_mul(&self, a: &Mono, ca: &Coefficient, b: &Mono, cb: &Coefficient) -> Option<(Mono, Coefficient)> {
        let (exp, sign, out) = self.mono_mul(a, b)?;
        let mut c = (ca * cb).scale_mu(exp);
        if sign {
            c = -c;
        }
        Some((out, c))
    }

    /// Product in the free twisted algebra (no relations applied).
    pub fn mul_free(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let mut r = Element::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((m, c)) = self.term_mul(ma, ca, mb, cb) {
                    r.add_term(m, &c);
                }
            }
        }
        Ok(r)
    }

    /// Twisted product followed by reduction modulo the function relations.
    pub fn product(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        let p = self.mul_free(a, b)?;
        self.normal_form(&p)
    }

    pub fn power(&self, a: &Element, k: u32) -> Result<Element, AlgebraError> {
        let mut r = self.one();
        for _ in 0..k {
            r = self.product(&r, a)?;
        }
        Ok(r)
    }

    /// Ordered product of raw words `sum c_w w`, each word a sequence of
    /// letters (`j < n` generator `j`, `n + j` the differential of `j`),
    /// reduced to normal form.
    pub fn normal_form_words(&self, words: &[(Coefficient, Vec<usize>)]) -> Result<Element, AlgebraError> {
        let n = self.num_generators();
        let mut acc = Element::zero();
        for (c, w) in words {
            let mut cur = Element::from_term(Mono::one(n), c.clone());
            for &l in w {
                let m = if l < n {
                    Mono::generator(n, l)
                } else if l < 2 * n {
                    Mono::differential(n, l - n)
                } else {
                    return Err(AlgebraError::SpecMismatch);
                };
                cur = self.mul_free(&cur, &Element::from_term(m, Coefficient::one()))?;
            }
            acc.add_assign(&cur);
        }
        self.normal_form(&acc)
    }

    /// Reduction modulo the function relations (sorting with phases is
    /// already built into the canonical word representation).
    pub fn normal_form(&self, a: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        if self.relations.is_empty() {
            return Ok(a.clone());
        }
        let rules = self.algebra_rules()?;
        rewrite::reduce(self, rules, a, self.max_steps)
    }

    /// Reduction modulo the differential ideal generated by the relations and
    /// their differentials.
    pub fn reduce_ideal(&self, a: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        if self.relations.is_empty() {
            return Ok(a.clone());
        }
        let rules = self.ideal_rules()?;
        rewrite::reduce(self, rules, a, self.max_steps)
    }

    /// Function relations for functions, the full differential ideal once
    /// form letters are present.
    pub fn reduce(&self, a: &Element) -> Result<Element, AlgebraError> {
        if a.terms().all(|(m, _)| m.forms == 0) {
            self.normal_form(a)
        } else {
            self.reduce_ideal(a)
        }
    }

    pub fn algebra_rules(&self) -> Result<&[Rule], AlgebraError> {
        self.algebra_rules
            .get_or_init(|| rewrite::complete(self, self.relations.clone(), self.max_steps))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn ideal_rules(&self) -> Result<&[Rule], AlgebraError> {
        self.ideal_rules
            .get_or_init(|| {
                let mut gens = self.relations.clone();
                for r in &self.relations {
                    gens.push(self.d_free(r)?);
                }
                rewrite::complete(self, gens, self.max_steps)
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Undeformed exterior derivative on the free twisted algebra.
    pub fn d_free(&self, a: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        let n = self.num_generators();
        let mut r = Element::zero();
        for (m, c) in a.terms() {
            let func = Mono { exps: m.exps.clone(), forms: 0 };
            let frame = Mono { exps: SmallVec::from_elem(0, n), forms: m.forms };
            for j in 0..n {
                let e = m.exps[j];
                if e == 0 {
                    continue;
                }
                // prefix * dg_j * suffix; all e copies of g_j give the same word
                let mut prefix = Mono::one(n);
                prefix.exps[..j].copy_from_slice(&func.exps[..j]);
                prefix.exps[j] = e - 1;
                let mut suffix = Mono::one(n);
                suffix.exps[j + 1..].copy_from_slice(&func.exps[j + 1..]);
                let k = Coefficient::from_int(e as i64);
                let Some((m1, c1)) = self.term_mul(&prefix, &(c * &k), &Mono::differential(n, j), &Coefficient::one()) else {
                    continue;
                };
                let Some((m2, c2)) = self.term_mul(&m1, &c1, &suffix, &Coefficient::one()) else {
                    continue;
                };
                if let Some((m3, c3)) = self.term_mul(&m2, &c2, &frame, &Coefficient::one()) {
                    r.add_term(m3, &c3);
                }
            }
        }
        Ok(r)
    }

    fn letter_star(&self, l: usize) -> usize {
        let n = self.num_generators();
        if l < n {
            self.star_of[l]
        } else {
            n + self.star_of[l - n]
        }
    }

    fn letters(&self, m: &Mono) -> Vec<usize> {
        let n = self.num_generators();
        let mut v = Vec::new();
        for (j, &e) in m.exps.iter().enumerate() {
            v.extend(std::iter::repeat(j).take(e as usize));
        }
        for j in 0..n {
            if m.forms >> j & 1 == 1 {
                v.push(n + j);
            }
        }
        v
    }

    /// Star in the free algebra: reverses words (with the Koszul sign for
    /// form letters), swaps star partners, conjugates coefficients.
    pub fn star_free(&self, a: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        let n = self.num_generators();
        let mut r = Element::zero();
        for (m, c) in a.terms() {
            let f = m.form_degree();
            let mut coef = c.involution();
            if (f * f.saturating_sub(1) / 2) % 2 == 1 {
                coef = -coef;
            }
            let mut cur_m = Mono::one(n);
            let mut cur_c = coef;
            let mut alive = true;
            for l in self.letters(m).into_iter().rev() {
                let ls = self.letter_star(l);
                let lm = if ls < n { Mono::generator(n, ls) } else { Mono::differential(n, ls - n) };
                match self.term_mul(&cur_m, &cur_c, &lm, &Coefficient::one()) {
                    Some((m2, c2)) => {
                        cur_m = m2;
                        cur_c = c2;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                r.add_term(cur_m, &cur_c);
            }
        }
        Ok(r)
    }

    pub fn star(&self, a: &Element) -> Result<Element, AlgebraError> {
        let s = self.star_free(a)?;
        self.normal_form(&s)
    }

    /// `Psi(a (x) b) = chi(r,s)^2 * (b (x) a)` for homogeneous `a`, `b`; in
    /// this module's normalization `chi(r,s)^2 = bicharacter(s, r)`.
    pub fn braiding(&self, a: &Element, b: &Element) -> Result<Braided, AlgebraError> {
        let r = self.homogeneous_degree(a)?.unwrap_or_else(|| MultiDegree::zero(self.rank));
        let s = self.homogeneous_degree(b)?.unwrap_or_else(|| MultiDegree::zero(self.rank));
        Ok(Braided { factor: self.bicharacter(&s, &r)?, first: b.clone(), second: a.clone() })
    }

    /// Twist exponent relating a canonical twisted word to the classical
    /// commutative word: `word_twisted = mu^k * word_classical`.
    pub fn classical_twist(&self, m: &Mono) -> i32 {
        let letters = self.letters(m);
        let mut k = 0;
        let mut prefix = MultiDegree::zero(self.rank);
        for &l in &letters {
            k += self.phases.cocycle(&prefix.0, &self.letter_degree[l].0);
            prefix.add_scaled(&self.letter_degree[l], 1);
        }
        k
    }

    /// Re-expresses a twisted element in the classical monomial basis.
    pub fn untwist(&self, a: &Element) -> Element {
        let mut r = Element::zero();
        for (m, c) in a.terms() {
            r.add_term(m.clone(), &c.scale_mu(self.classical_twist(m)));
        }
        r
    }

    /// Inverse of [`AlgebraSpec::untwist`].
    pub fn retwist(&self, a: &Element) -> Element {
        let mut r = Element::zero();
        for (m, c) in a.terms() {
            r.add_term(m.clone(), &c.scale_mu(-self.classical_twist(m)));
        }
        r
    }

    /// Canonical rendering, terms in decreasing order.
    pub fn render(&self, a: &Element) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in a.terms().rev().enumerate() {
            let mono = self.render_mono(m);
            let mut cs = if c.num_terms() > 1 { format!("({c})") } else { c.to_string() };
            let neg = cs.starts_with('-');
            if neg {
                cs.remove(0);
            }
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), cs == "1") {
                (true, _) => out.push_str(&cs),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&cs);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    pub fn render_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (j, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.generators[j].name.clone()),
                e => parts.push(format!("{}^{e}", self.generators[j].name)),
            }
        }
        for j in 0..self.num_generators() {
            if m.forms >> j & 1 == 1 {
                parts.push(format!("d{}", self.generators[j].name));
            }
        }
        parts.join("*")
    }

    /// Scalar element with the given Gaussian rational.
    pub fn scalar(&self, v: GaussRat) -> Element {
        self.constant(Coefficient::constant(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spheres;

    #[test]
    fn bicharacter_at_zero_and_skew() {
        let s4 = spheres::s4_theta();
        let alg = s4.algebra();
        let r = MultiDegree::from_slice(&[2, -1]);
        let s = MultiDegree::from_slice(&[1, 3]);
        assert!(alg.bicharacter(&r, &MultiDegree::zero(2)).unwrap().is_one());
        assert!((&alg.bicharacter(&r, &s).unwrap() * &alg.bicharacter(&s, &r).unwrap()).is_one());
        assert!(alg.bicharacter(&r, &MultiDegree::from_slice(&[1])).is_err());
    }

    #[test]
    fn degrees_of_words() {
        let s4 = spheres::s4_theta();
        let alg = s4.algebra();
        let w = alg.product(&alg.gen("x1").unwrap(), &alg.gen("x2").unwrap()).unwrap();
        assert_eq!(alg.homogeneous_degree(&w).unwrap(), Some(MultiDegree::from_slice(&[1, 1])));
        let s = alg.gen("x1'").unwrap();
        assert_eq!(alg.homogeneous_degree(&s).unwrap(), Some(MultiDegree::from_slice(&[-1, 0])));
        let sum = alg.gen("x0").unwrap().add(&alg.gen("x1").unwrap());
        let parts = alg.decompose_homogeneous(&sum);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&MultiDegree::from_slice(&[0, 0])], alg.gen("x0").unwrap());
        assert_eq!(parts[&MultiDegree::from_slice(&[1, 0])], alg.gen("x1").unwrap());
        assert_eq!(alg.homogeneous_degree(&sum), Err(AlgebraError::NonHomogeneous));
    }

    #[test]
    fn quantum_plane_relation() {
        let s4 = spheres::s4_theta();
        let alg = s4.algebra();
        let (x1, x2) = (alg.gen("x1").unwrap(), alg.gen("x2").unwrap());
        let x1x2 = alg.product(&x1, &x2).unwrap();
        let x2x1 = alg.product(&x2, &x1).unwrap();
        assert_eq!(x1x2, x2x1.scale(&Coefficient::lambda()));
        // x1 precedes x2 in the order, so x1*x2 is the canonical word
        assert_eq!(alg.render(&x1x2), "x1*x2");
        assert_eq!(alg.render(&x2x1), "mu^-2*x1*x2");
    }

    #[test]
    fn star_of_self_conjugate() {
        let s4 = spheres::s4_theta();
        let alg = s4.algebra();
        let x0 = alg.gen("x0").unwrap();
        assert_eq!(alg.star(&x0).unwrap(), x0);
    }

    #[test]
    fn spec_mismatch_detected() {
        let s4 = spheres::s4_theta();
        let s7 = spheres::s7_theta();
        let z = s7.algebra().gen("z1").unwrap();
        assert_eq!(s4.algebra().product(&z, &z), Err(AlgebraError::SpecMismatch));
    }

    #[test]
    fn order_is_graded() {
        let n = 3;
        let a = Mono::generator(n, 2);
        let b = Mono { exps: SmallVec::from_slice(&[1, 1, 0]), forms: 0 };
        assert!(a < b);
        assert!(Mono::generator(n, 0) < Mono::generator(n, 1));
        assert!(Mono::generator(n, 2) < Mono::differential(n, 0).lcm(&Mono::generator(n, 0)));
    }

    #[test]
    fn braiding_factor_is_inverse_eta() {
        let s7 = spheres::s7_theta();
        let alg = s7.algebra();
        let (z1, z3) = (alg.gen("z1").unwrap(), alg.gen("z3").unwrap());
        let b = alg.braiding(&z1, &z3).unwrap();
        assert_eq!(b.factor, Coefficient::mu_pow(-1));
        assert_eq!(b.first, z3);
        assert_eq!(b.second, z1);
        assert!(alg.braiding(&z1.add(&z3), &z1).is_err());
    }
}
