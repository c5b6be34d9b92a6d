//! Seeded random elements for the randomized checks, bounded in degree.

use nctoric::{AlgebraSpec, Coefficient, Element, GaussRat, Mono};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn coefficient(r: &mut ChaCha8Rng) -> Coefficient {
    let mut c = Coefficient::zero();
    for _ in 0..r.gen_range(1..=2) {
        let v = GaussRat::from_ints(r.gen_range(-3..=3), r.gen_range(-2..=2));
        c = &c + &Coefficient::monomial(v, r.gen_range(-2..=2));
    }
    if c.is_zero() {
        Coefficient::one()
    } else {
        c
    }
}

pub fn word(alg: &AlgebraSpec, r: &mut ChaCha8Rng, max_degree: u32) -> Mono {
    let n = alg.num_generators();
    let mut m = Mono::one(n);
    for _ in 0..r.gen_range(0..=max_degree) {
        m.exps[r.gen_range(0..n)] += 1;
    }
    m
}

/// A single word with a random coefficient.
pub fn monomial(alg: &AlgebraSpec, r: &mut ChaCha8Rng, max_degree: u32) -> Element {
    Element::from_term(word(alg, r, max_degree), coefficient(r))
}

/// A function with up to `terms` words of degree at most `max_degree`.
pub fn function(alg: &AlgebraSpec, r: &mut ChaCha8Rng, terms: usize, max_degree: u32) -> Element {
    let mut e = Element::zero();
    for _ in 0..r.gen_range(1..=terms) {
        e.add_term(word(alg, r, max_degree), &coefficient(r));
    }
    e
}

/// A form of pure degree `k` with function coefficients.
pub fn form(alg: &AlgebraSpec, r: &mut ChaCha8Rng, k: u32, terms: usize, max_degree: u32) -> Element {
    let n = alg.num_generators();
    let mut e = Element::zero();
    for _ in 0..r.gen_range(1..=terms) {
        let mut m = word(alg, r, max_degree);
        let mut mask = 0u32;
        while mask.count_ones() < k.min(n as u32) {
            mask |= 1 << r.gen_range(0..n);
        }
        m.forms = mask;
        e.add_term(m, &coefficient(r));
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn forms_have_the_requested_degree() {
        let alg = nctoric::spheres::s4_theta().algebra();
        let mut r = ChaCha8Rng::seed_from_u64(1);
        for k in 0..4 {
            let f = form(alg, &mut r, k, 3, 2);
            assert!(f.terms().all(|(m, _)| m.form_degree() == k));
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let alg = nctoric::spheres::s7_theta().algebra();
        let a = function(alg, &mut ChaCha8Rng::seed_from_u64(9), 4, 4);
        let b = function(alg, &mut ChaCha8Rng::seed_from_u64(9), 4, 4);
        assert_eq!(a, b);
    }
}
