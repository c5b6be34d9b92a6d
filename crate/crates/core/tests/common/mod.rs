#![allow(dead_code)]

use std::collections::BTreeMap;

use nctoric::{AlgebraSpec, Coefficient, Element, GaussRat, Mono};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coefficient(r: &mut ChaCha8Rng) -> Coefficient {
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

pub fn random_word(alg: &AlgebraSpec, r: &mut ChaCha8Rng, max_degree: u32) -> Mono {
    let n = alg.num_generators();
    let mut m = Mono::one(n);
    for _ in 0..r.gen_range(0..=max_degree) {
        m.exps[r.gen_range(0..n)] += 1;
    }
    m
}

/// A function with up to `terms` words of degree at most `max_degree`.
pub fn random_function(alg: &AlgebraSpec, r: &mut ChaCha8Rng, terms: usize, max_degree: u32) -> Element {
    let mut e = Element::zero();
    for _ in 0..r.gen_range(1..=terms) {
        e.add_term(random_word(alg, r, max_degree), &random_coefficient(r));
    }
    e
}

/// A single-degree homogeneous word with a random coefficient.
pub fn random_monomial(alg: &AlgebraSpec, r: &mut ChaCha8Rng, max_degree: u32) -> Element {
    Element::from_term(random_word(alg, r, max_degree), random_coefficient(r))
}

fn random_mask(n: usize, k: u32, r: &mut ChaCha8Rng) -> u32 {
    let mut mask = 0u32;
    while mask.count_ones() < k {
        mask |= 1 << r.gen_range(0..n);
    }
    mask
}

/// A form of pure degree `k` with function coefficients.
pub fn random_form(alg: &AlgebraSpec, r: &mut ChaCha8Rng, k: u32, terms: usize, max_degree: u32) -> Element {
    let n = alg.num_generators();
    let mut e = Element::zero();
    for _ in 0..r.gen_range(1..=terms) {
        let mut m = random_word(alg, r, max_degree);
        m.forms = random_mask(n, k, r);
        e.add_term(m, &random_coefficient(r));
    }
    e
}

/// Classical commutative polynomials in the generators, exponent vector -> value.
pub type Poly = BTreeMap<Vec<u16>, GaussRat>;

pub fn classical_poly(e: &Element) -> Poly {
    let mut p = Poly::new();
    for (m, c) in e.terms() {
        assert_eq!(m.forms, 0);
        let slot = p.entry(m.exps.to_vec()).or_insert_with(GaussRat::zero);
        *slot = &*slot + &c.classical_value();
    }
    p.retain(|_, v| !v.is_zero());
    p
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut p = Poly::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k: Vec<u16> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            let slot = p.entry(k).or_insert_with(GaussRat::zero);
            *slot = &*slot + &(va * vb);
        }
    }
    p.retain(|_, v| !v.is_zero());
    p
}

/// Commutative reduction by `x_hi x_hi* -> 1 - sum of the other pairs`
/// (`pairs[last]` is the pair being eliminated), plus a self-conjugate
/// square term when `square` is given.
pub fn sphere_reduce(p: &Poly, pairs: &[(usize, usize)], square: Option<usize>) -> Poly {
    let (a, b) = *pairs.last().unwrap();
    let mut work = p.clone();
    let mut out = Poly::new();
    while let Some((k, v)) = work.pop_last() {
        if v.is_zero() {
            continue;
        }
        if k[a] > 0 && k[b] > 0 {
            let mut base = k.clone();
            base[a] -= 1;
            base[b] -= 1;
            let mut add = |kk: Vec<u16>, s: GaussRat| {
                let slot = work.entry(kk).or_insert_with(GaussRat::zero);
                *slot = &*slot + &s;
            };
            add(base.clone(), v.clone());
            for &(c, d) in &pairs[..pairs.len() - 1] {
                let mut kk = base.clone();
                kk[c] += 1;
                kk[d] += 1;
                add(kk, -&v);
            }
            if let Some(s) = square {
                let mut kk = base.clone();
                kk[s] += 2;
                add(kk, -&v);
            }
        } else {
            let slot = out.entry(k).or_insert_with(GaussRat::zero);
            *slot = &*slot + &v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Evaluates a classical (mu = 1) form at a point given by generator values:
/// returns coefficients on each form mask.
pub fn eval_classical(e: &Element, point: &[Complex64]) -> BTreeMap<u32, Complex64> {
    let mut out = BTreeMap::new();
    for (m, c) in e.terms() {
        let mut v = c.classical_value().to_complex();
        for (j, &k) in m.exps.iter().enumerate() {
            v *= point[j].powi(k as i32);
        }
        *out.entry(m.forms).or_insert(Complex64::new(0.0, 0.0)) += v;
    }
    out
}

/// A uniformly random unit vector in R^5.
pub fn random_sphere_point(r: &mut ChaCha8Rng) -> [f64; 5] {
    loop {
        let v: [f64; 5] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

fn ambient_two_form(frame: &nctoric::AmbientFrame, coeffs: &BTreeMap<u32, Complex64>) -> [[Complex64; 5]; 5] {
    let m = frame.to_real();
    let mut t = [[Complex64::new(0.0, 0.0); 5]; 5];
    for (&mask, &c) in coeffs {
        if mask.count_ones() != 2 {
            assert!(c.norm() < 1e-12, "unexpected form degree");
            continue;
        }
        let j = mask.trailing_zeros() as usize;
        let k = 31 - mask.leading_zeros() as usize;
        for a in 0..5 {
            for b in 0..5 {
                let (mja, mkb) = (m[j][a].to_complex(), m[k][b].to_complex());
                let (mjb, mka) = (m[j][b].to_complex(), m[k][a].to_complex());
                t[a][b] += c * (mja * mkb - mjb * mka);
            }
        }
    }
    t
}

fn det(m: &[[f64; 5]; 5]) -> f64 {
    let mut a = *m;
    let mut d = 1.0;
    for c in 0..5 {
        let p = (c..5).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c].abs() < 1e-14 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for r in c + 1..5 {
            let f = a[r][c] / a[c][c];
            for k in c..5 {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    d
}

/// Oriented orthonormal tangent frame at `y`: `(y, e1..e4)` has determinant
/// equal to `orientation`.
fn tangent_frame(y: &[f64; 5], orientation: i8) -> [[f64; 5]; 4] {
    let mut basis: Vec<[f64; 5]> = vec![*y];
    for k in 0..5 {
        let mut v = [0.0; 5];
        v[k] = 1.0;
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for i in 0..5 {
                v[i] -= dot * b[i];
            }
        }
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 && basis.len() < 5 {
            basis.push(v.map(|x| x / n));
        }
    }
    let mat: [[f64; 5]; 5] = std::array::from_fn(|i| basis[i]);
    if (det(&mat) > 0.0) != (orientation > 0) {
        basis[4] = basis[4].map(|x| -x);
    }
    std::array::from_fn(|i| basis[i + 1])
}

fn perm_sign4(p: [usize; 4]) -> f64 {
    let mut s = 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return 0.0;
            }
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Largest deviation between the symbolic star of a two-form (at theta = 0)
/// and the pointwise Hodge star in an oriented orthonormal tangent frame.
pub fn hodge_deviation(alg: &AlgebraSpec, frame: &nctoric::AmbientFrame, w: &Element, y: &[f64; 5]) -> f64 {
    let point: Vec<Complex64> = frame
        .to_real()
        .iter()
        .map(|row| row.iter().zip(y).map(|(c, v)| c.to_complex() * v).sum())
        .collect();
    let star = nctoric::hodge::hodge_star(alg, frame, w).unwrap();
    let e = tangent_frame(y, frame.orientation());
    let restrict = |t: &[[Complex64; 5]; 5]| -> [[Complex64; 4]; 4] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut s = Complex64::new(0.0, 0.0);
                for a in 0..5 {
                    for b in 0..5 {
                        s += e[i][a] * t[a][b] * e[j][b];
                    }
                }
                s
            })
        })
    };
    let wt = restrict(&ambient_two_form(frame, &eval_classical(w, &point)));
    let st = restrict(&ambient_two_form(frame, &eval_classical(&star, &point)));
    let mut worst: f64 = 0.0;
    for k in 0..4 {
        for l in 0..4 {
            let mut want = Complex64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    want += 0.5 * perm_sign4([i, j, k, l]) * wt[i][j];
                }
            }
            worst = worst.max((want - st[k][l]).norm());
        }
    }
    worst
}
