//! Oriented rewrite rules `lead -> tail` over the free twisted algebra and
//! their completion by critical pairs.
//!
//! The free algebra is graded-commutative up to unit phases, so a left
//! multiple `q * g` of a homogeneous element spans the same ideal as the
//! two-sided one. Critical pairs are the usual overlaps `lcm(lead_i, lead_j)`
//! together with `dx * g` for every form letter `dx` in `lead(g)` (the
//! leading word dies there, the tail need not).

use crate::algebra::{AlgebraSpec, Element, Mono};
use crate::coeff::Coefficient;
use crate::error::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lead: Mono,
    /// `lead == tail` in the quotient.
    pub tail: Element,
}

impl Rule {
    /// `lead - tail`.
    pub fn as_element(&self) -> Element {
        let mut e = self.tail.neg();
        e.add_term(self.lead.clone(), &Coefficient::one());
        e
    }
}

/// Fully reduces `a`. Terms are processed from the largest word down; each
/// rewrite only produces strictly smaller words.
pub fn reduce(spec: &AlgebraSpec, rules: &[Rule], a: &Element, max_steps: usize) -> Result<Element, AlgebraError> {
    let mut work = a.clone();
    let mut done = Element::zero();
    let mut steps = 0usize;
    while let Some((m, c)) = work.pop_last() {
        let Some(rule) = rules.iter().find(|r| r.lead.divides(&m)) else {
            done.add_term(m, &c);
            continue;
        };
        steps += 1;
        if steps > max_steps {
            return Err(AlgebraError::IterationCap { steps: max_steps });
        }
        let q = rule.lead.cofactor(&m);
        let (exp, sign, out) = spec.mono_mul(&q, &rule.lead).expect("cofactor is disjoint from the lead");
        debug_assert_eq!(out, m);
        // m = (-1)^sign mu^-exp q*lead  ->  (-1)^sign mu^-exp q*tail
        let mut k = c.scale_mu(-exp);
        if sign {
            k = -k;
        }
        for (tm, tc) in rule.tail.terms() {
            if let Some((pm, pc)) = spec.term_mul(&q, &k, tm, tc) {
                work.add_term(pm, &pc);
            }
        }
    }
    Ok(done)
}

fn monic(spec: &AlgebraSpec, f: &Element) -> Result<Option<Rule>, AlgebraError> {
    let Some((lead, lc)) = f.leading() else {
        return Ok(None);
    };
    let inv = lc.inverse_unit().ok_or_else(|| AlgebraError::NonUnitLead(spec.render_mono(lead)))?;
    let lead = lead.clone();
    let mut tail = f.scale(&inv).neg();
    tail.add_term(lead.clone(), &Coefficient::one());
    Ok(Some(Rule { lead, tail }))
}

/// `c^-1 * q * g` where `q * lead(g) = c * target`.
fn shifted(spec: &AlgebraSpec, g: &Rule, target: &Mono) -> Element {
    let q = g.lead.cofactor(target);
    let (exp, sign, _) = spec.mono_mul(&q, &g.lead).expect("lcm keeps form letters disjoint");
    let mut k = Coefficient::mu_pow(-exp);
    if sign {
        k = -k;
    }
    let mut out = Element::from_term(target.clone(), Coefficient::one());
    for (tm, tc) in g.tail.terms() {
        if let Some((pm, pc)) = spec.term_mul(&q, &k, tm, tc) {
            out.add_term(pm, &-pc);
        }
    }
    out
}

/// Completes `generators` (homogeneous elements) to a confluent system.
pub fn complete(spec: &AlgebraSpec, generators: Vec<Element>, max_steps: usize) -> Result<Vec<Rule>, AlgebraError> {
    let n = spec.num_generators();
    let mut basis: Vec<Rule> = Vec::new();
    let mut queue: std::collections::VecDeque<Element> = generators.into();
    let mut rounds = 0usize;
    while let Some(f) = queue.pop_front() {
        rounds += 1;
        if rounds > max_steps {
            return Err(AlgebraError::IterationCap { steps: max_steps });
        }
        let r = reduce(spec, &basis, &f, max_steps)?;
        let Some(g) = monic(spec, &r)? else {
            continue;
        };
        for h in &basis {
            let m = g.lead.lcm(&h.lead);
            // coprime leads over commuting letters only give trivial pairs
            if m.total_degree() == g.lead.total_degree() + h.lead.total_degree() && m.forms == 0 {
                continue;
            }
            queue.push_back(shifted(spec, &g, &m).sub(&shifted(spec, h, &m)));
        }
        let g_elem = g.as_element();
        let mut forms = g.lead.forms;
        while forms != 0 {
            let j = forms.trailing_zeros() as usize;
            forms &= forms - 1;
            let dx = Element::from_term(Mono::differential(n, j), Coefficient::one());
            queue.push_back(spec.mul_free(&dx, &g_elem)?);
        }
        basis.push(g);
    }
    interreduce(spec, basis, max_steps)
}

/// Drops rules whose lead is divisible by another lead and fully reduces tails.
fn interreduce(spec: &AlgebraSpec, basis: Vec<Rule>, max_steps: usize) -> Result<Vec<Rule>, AlgebraError> {
    let mut kept: Vec<Rule> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lead.divides(&g.lead) && (h.lead != g.lead || j < i)
        });
        if !redundant {
            kept.push(g.clone());
        }
    }
    kept.sort_by(|a, b| a.lead.cmp(&b.lead));
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<Rule> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r.clone()).collect();
        let tail = reduce(spec, &others, &kept[i].tail, max_steps)?;
        out.push(Rule { lead: kept[i].lead.clone(), tail });
    }
    Ok(out)
}

/// Reduces every critical pair of `rules` and returns those that fail to
/// vanish; empty means the system is locally confluent.
pub fn critical_pair_defects(spec: &AlgebraSpec, rules: &[Rule], max_steps: usize) -> Result<Vec<Element>, AlgebraError> {
    let n = spec.num_generators();
    let mut bad = Vec::new();
    for (i, g) in rules.iter().enumerate() {
        for h in &rules[i + 1..] {
            let m = g.lead.lcm(&h.lead);
            let s = shifted(spec, g, &m).sub(&shifted(spec, h, &m));
            let r = reduce(spec, rules, &s, max_steps)?;
            if !r.is_zero() {
                bad.push(r);
            }
        }
        let ge = g.as_element();
        let mut forms = g.lead.forms;
        while forms != 0 {
            let j = forms.trailing_zeros() as usize;
            forms &= forms - 1;
            let dx = Element::from_term(Mono::differential(n, j), Coefficient::one());
            let r = reduce(spec, rules, &spec.mul_free(&dx, &ge)?, max_steps)?;
            if !r.is_zero() {
                bad.push(r);
            }
        }
    }
    Ok(bad)
}
