//! The verification suites behind each subcommand.

use std::collections::BTreeMap;

use nctoric::hodge::self_duality_check;
use nctoric::integral::{
    hermitian, index_and_dimension, integrate_top_form, invariant_integral, p_norm, second_chern_charge, sobolev_norm,
    sobolev_terms, sobolev_terms_at,
};
use nctoric::matrix::{apply_homomorphism, basic_projection, build_instanton_data, InstantonData, MatrixForm, Projection};
use nctoric::rewrite::critical_pair_defects;
use nctoric::{
    spheres, AlgebraError, AlgebraSpec, AmbientFrame, ChernData, Element, ManifoldSpec, Status, Theta,
};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{run_check, Check, Verdict};
use crate::sample;

/// Number of samples drawn by each randomized check.
const SAMPLES: usize = 50;

pub struct Context<'a> {
    pub spec: &'a ManifoldSpec,
    pub seed: u64,
    pub theta: Theta,
    pub k: i64,
    pub timings: bool,
}

impl Context<'_> {
    fn check(&self, name: &str, body: impl FnOnce() -> Result<Verdict, AlgebraError>) -> Check {
        run_check(name, self.timings, body)
    }

    /// Every randomized check draws from its own stream, so results do not
    /// depend on which other checks ran.
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub const SUITES: [&str; 8] =
    ["verify-algebra", "verify-projection", "curvature", "self-dual", "charge", "norms", "moduli-dim", "braiding-demo"];

pub fn run(suite: &str, cx: &Context) -> Vec<Check> {
    match suite {
        "verify-algebra" => verify_algebra(cx),
        "verify-projection" => verify_projection(cx),
        "curvature" => curvature(cx),
        "self-dual" => self_dual(cx),
        "charge" => charge(cx),
        "norms" => norms(cx),
        "moduli-dim" => moduli_dim(cx),
        "braiding-demo" => braiding_demo(cx),
        "all" => all(cx),
        other => unreachable!("unknown suite {other}"),
    }
}

/// Every suite that applies to the spec, with check names prefixed by suite.
fn all(cx: &Context) -> Vec<Check> {
    let applicable: &[&str] = match cx.spec.instanton_kind() {
        Some("projection") => &SUITES,
        Some(_) => &["verify-algebra", "verify-projection", "moduli-dim", "braiding-demo"],
        None => &["verify-algebra", "moduli-dim", "braiding-demo"],
    };
    let mut out = Vec::new();
    for suite in applicable {
        for mut c in run(suite, cx) {
            c.name = format!("{suite}/{}", c.name);
            out.push(c);
        }
    }
    out
}

/// Generators named without a trailing prime: the ones the commutation
/// tables are stated for.
fn primary_generators(alg: &AlgebraSpec) -> Vec<&str> {
    alg.generators().iter().map(|g| g.name.as_str()).filter(|n| !n.ends_with('\'')).collect()
}

fn degree_of(alg: &AlgebraSpec, name: &str) -> Result<nctoric::MultiDegree, AlgebraError> {
    Ok(alg.homogeneous_degree(&alg.gen(name)?)?.expect("generators are nonzero"))
}

fn verify_algebra(cx: &Context) -> Vec<Check> {
    let alg = cx.spec.algebra();
    let mut out = Vec::new();
    let names = primary_generators(alg);
    for g in &names {
        for h in &names {
            out.push(cx.check(&format!("commute {g} {h}"), || {
                let (a, b) = (alg.gen(g)?, alg.gen(h)?);
                // a_r b_s = chi(s, r) b_s a_r
                let q = alg.bicharacter(&degree_of(alg, h)?, &degree_of(alg, g)?)?;
                let ok = alg.product(&a, &b)? == alg.product(&b, &a)?.scale(&q);
                Ok(Verdict::holds(ok, format!("{g}*{h} = {q}*{h}*{g}")))
            }));
        }
    }
    out.push(cx.check("relations central", || {
        let mut ok = true;
        for rel in alg.relations() {
            for g in alg.generators() {
                let x = alg.gen(&g.name)?;
                ok &= alg.mul_free(rel, &x)? == alg.mul_free(&x, rel)?;
            }
        }
        Ok(Verdict::holds(ok, format!("{} relation(s) commute with every generator", alg.relations().len())))
    }));
    out.push(cx.check("critical pairs", || {
        let algebra = alg.algebra_rules()?;
        let ideal = alg.ideal_rules()?;
        let defects = critical_pair_defects(alg, algebra, alg.max_steps())?.len()
            + critical_pair_defects(alg, ideal, alg.max_steps())?.len();
        let detail = format!("{} algebra rules, {} ideal rules, {defects} unresolved pairs", algebra.len(), ideal.len());
        Ok(Verdict::holds(defects == 0, detail))
    }));
    out.push(cx.check("associativity", || {
        let mut r = cx.rng();
        for i in 0..SAMPLES {
            let [a, b, c] = [0; 3].map(|_| sample::function(alg, &mut r, 3, 2));
            let left = alg.product(&alg.product(&a, &b)?, &c)?;
            let right = alg.product(&a, &alg.product(&b, &c)?)?;
            if left != right {
                return Ok(Verdict::holds(false, format!("sample {i} is not associative")));
            }
        }
        Ok(Verdict::holds(true, format!("{SAMPLES} random triples")))
    }));
    out.push(cx.check("star anti-homomorphism", || {
        let mut r = cx.rng();
        for i in 0..SAMPLES {
            let a = sample::function(alg, &mut r, 3, 2);
            let b = sample::function(alg, &mut r, 3, 2);
            let lhs = alg.star(&alg.product(&a, &b)?)?;
            let rhs = alg.product(&alg.star(&b)?, &alg.star(&a)?)?;
            if lhs != rhs || alg.star(&alg.star(&a)?)? != alg.normal_form(&a)? {
                return Ok(Verdict::holds(false, format!("sample {i} violates (ab)* = b* a*")));
            }
        }
        Ok(Verdict::holds(true, format!("{SAMPLES} random pairs")))
    }));
    out.push(cx.check("d squared", || {
        let mut r = cx.rng();
        for i in 0..SAMPLES {
            let k = r.gen_range(0..3);
            let w = sample::form(alg, &mut r, k, 3, 3);
            if !alg.d_free(&alg.d_free(&w)?)?.is_zero() {
                return Ok(Verdict::holds(false, format!("d^2 != 0 on sample {i}")));
            }
        }
        Ok(Verdict::holds(true, format!("d^2 = 0 on {SAMPLES} random forms")))
    }));
    out.push(cx.check("graded Leibniz", || {
        let mut r = cx.rng();
        for i in 0..SAMPLES {
            let (p, q) = (r.gen_range(0..3), r.gen_range(0..3));
            let a = sample::form(alg, &mut r, p, 3, 3);
            let b = sample::form(alg, &mut r, q, 3, 3);
            let lhs = alg.d_free(&alg.mul_free(&a, &b)?)?;
            let first = alg.mul_free(&alg.d_free(&a)?, &b)?;
            let second = alg.mul_free(&a, &alg.d_free(&b)?)?;
            let rhs = if p % 2 == 0 { first.add(&second) } else { first.sub(&second) };
            if lhs != rhs {
                return Ok(Verdict::holds(false, format!("sample {i} violates the graded Leibniz rule")));
            }
        }
        Ok(Verdict::holds(true, format!("{SAMPLES} random pairs of forms")))
    }));
    out
}

fn needs_projection() -> AlgebraError {
    AlgebraError::Precondition("this suite needs a four-sphere spec with `kind = projection`".into())
}

/// The basic instanton of a spec declaring `kind = projection`.
fn instanton<'a>(cx: &Context<'a>) -> Result<(&'a AlgebraSpec, &'a AmbientFrame, Projection), AlgebraError> {
    if cx.spec.instanton_kind() != Some("projection") {
        return Err(needs_projection());
    }
    let alg = cx.spec.algebra();
    Ok((alg, cx.spec.frame()?, basic_projection(alg)?))
}

/// Checks that fail uniformly when the instanton cannot be built.
fn with_instanton(cx: &Context, name: &str, e: AlgebraError) -> Vec<Check> {
    vec![cx.check(name, || Err(e))]
}

fn hopf_checks(cx: &Context, s4: &ManifoldSpec, s7: &ManifoldSpec) -> Vec<Check> {
    let data = match build_instanton_data(s4, s7) {
        Ok(d) => d,
        Err(e) => return with_instanton(cx, "hopf data", e),
    };
    let (a4, a7) = (s4.algebra(), s7.algebra());
    let InstantonData { u, p, inclusion } = &data;
    vec![
        cx.check("u* u = 1", || {
            let utu = u.adjoint(a7)?.mul(a7, u)?;
            Ok(Verdict::holds(utu == MatrixForm::identity(a7, u.cols()), "isometry of the column pair"))
        }),
        cx.check("p = u u*", || {
            let pushed = p.matrix().map(|e| apply_homomorphism(a4, a7, inclusion, e))?;
            Ok(Verdict::holds(pushed == u.mul(a7, &u.adjoint(a7)?)?, "the projection pulls back from the seven-sphere"))
        }),
    ]
}

fn projection_checks(cx: &Context, alg: &AlgebraSpec, p: &Projection) -> Vec<Check> {
    let pm = p.matrix();
    vec![
        cx.check("p^2 = p", || Ok(Verdict::holds(pm.mul(alg, pm)?.sub(pm)?.reduce(alg)?.is_zero(), "exact"))),
        cx.check("p* = p", || Ok(Verdict::holds(&pm.adjoint(alg)? == pm, "exact"))),
        cx.check("trace p", || {
            let tr = pm.trace(alg)?;
            let two = alg.constant(nctoric::Coefficient::from_int(2));
            Ok(Verdict::holds(tr == two, format!("tr p = {}", alg.render(&tr))))
        }),
        cx.check("p dp p = 0", || {
            let dp = pm.d_entrywise(alg)?;
            Ok(Verdict::holds(MatrixForm::chain(alg, &[pm, &dp, pm])?.is_zero(), "exact"))
        }),
        cx.check("p (dp)^3 p = 0", || {
            let dp = pm.d_entrywise(alg)?;
            Ok(Verdict::holds(MatrixForm::chain(alg, &[pm, &dp, &dp, &dp, pm])?.is_zero(), "exact"))
        }),
    ]
}

fn verify_projection(cx: &Context) -> Vec<Check> {
    match cx.spec.instanton_kind() {
        Some("projection") => {
            let alg = cx.spec.algebra();
            let mut out = match basic_projection(alg) {
                Ok(p) => projection_checks(cx, alg, &p),
                Err(e) => with_instanton(cx, "projection", e),
            };
            out.extend(hopf_checks(cx, cx.spec, spheres::s7_theta()));
            out
        }
        Some(_) => hopf_checks(cx, spheres::s4_theta(), cx.spec),
        None => with_instanton(cx, "instanton", AlgebraError::Precondition("spec declares no instanton".into())),
    }
}

fn curvature(cx: &Context) -> Vec<Check> {
    let (alg, _, p) = match instanton(cx) {
        Ok(x) => x,
        Err(e) => return with_instanton(cx, "curvature", e),
    };
    let pm = p.matrix();
    let f = match p.curvature(alg) {
        Ok(f) => f,
        Err(e) => return with_instanton(cx, "curvature", e),
    };
    vec![
        cx.check("F = pF = Fp", || {
            let ok = pm.mul(alg, &f)? == f && f.mul(alg, pm)? == f;
            let entries: BTreeMap<String, String> = (0..f.rows())
                .flat_map(|i| (0..f.cols()).map(move |j| (i, j)))
                .map(|(i, j)| (format!("F[{},{}]", i + 1, j + 1), alg.render(f.get(i, j))))
                .collect();
            Ok(Verdict::holds(ok, format!("F = p dp dp, largest entry {} terms", f.max_terms())).with_value(entries))
        }),
        cx.check("trace F = 0", || Ok(Verdict::holds(f.trace(alg)?.is_zero(), "vanishing first Chern form"))),
        cx.check("p dF p = 0", || {
            let df = f.d_entrywise(alg)?;
            Ok(Verdict::holds(MatrixForm::chain(alg, &[pm, &df, pm])?.is_zero(), "Bianchi identity"))
        }),
    ]
}

fn self_dual(cx: &Context) -> Vec<Check> {
    let (alg, frame, p) = match instanton(cx) {
        Ok(x) => x,
        Err(e) => return with_instanton(cx, "certificate", e),
    };
    let certify = |frame: &AmbientFrame| {
        let mut c = self_duality_check(alg, frame, &p);
        if !cx.timings {
            c.elapsed_ms = None;
        }
        c
    };
    vec![
        cx.check("certificate", || {
            let c = certify(frame);
            let detail = format!(
                "{}: {} of {} entries nonzero",
                c.identity, c.nonzero_entries, c.entries_checked
            );
            Ok(Verdict { status: c.status, detail, value: None }.with_value(&c))
        }),
        cx.check("negative control", || {
            let c = certify(&frame.reversed());
            let status = match c.status {
                Status::Fail => Status::Pass,
                Status::Pass => Status::Fail,
                Status::Inconclusive => Status::Inconclusive,
            };
            let detail = format!("reversed orientation: {} of {} entries nonzero", c.nonzero_entries, c.entries_checked);
            Ok(Verdict { status, detail, value: None }.with_value(&c))
        }),
    ]
}

fn charge(cx: &Context) -> Vec<Check> {
    let (alg, frame, p) = match instanton(cx) {
        Ok(x) => x,
        Err(e) => return with_instanton(cx, "second Chern number", e),
    };
    let computed = second_chern_charge(alg, frame, &p);
    vec![
        cx.check("second Chern number", || {
            let (k, report) = computed.clone()?;
            let detail = format!("k = {k} from int tr(F^F) = {}; basic instanton expects 1", report.trace_integral);
            Ok(Verdict::holds(k == 1, detail).with_value(&report))
        }),
        cx.check("theta independence", || {
            let (_, report) = computed.clone()?;
            Ok(Verdict::holds(report.mu_free, "the exact integral contains no mu"))
        }),
        cx.check("trivial bundle", || {
            let (k, _) = second_chern_charge(alg, frame, &Projection::trivial(alg, p.size(), 2))?;
            Ok(Verdict::holds(k == 0, format!("k = {k} for a constant projection")))
        }),
    ]
}

fn column(entries: Vec<Element>) -> Result<MatrixForm, AlgebraError> {
    MatrixForm::new(entries.len(), 1, entries)
}

fn norms(cx: &Context) -> Vec<Check> {
    let (alg, frame, p) = match instanton(cx) {
        Ok(x) => x,
        Err(e) => return with_instanton(cx, "volume", e),
    };
    let th = cx.theta;
    let mut out = vec![
        cx.check("volume", || {
            let v = invariant_integral(alg, frame, &alg.one())?;
            let want = BigRational::new(8.into(), 3.into());
            Ok(Verdict::holds(v.as_rational() == Some(want), format!("int 1 = {v}")).with_value(v.to_string()))
        }),
        cx.check("Stokes", || {
            let mut r = cx.rng();
            for i in 0..SAMPLES {
                let z = sample::form(alg, &mut r, 3, 3, 3);
                if !integrate_top_form(alg, frame, &alg.d_free(&z)?)?.is_zero() {
                    return Ok(Verdict::holds(false, format!("int d(zeta) != 0 on sample {i}")));
                }
            }
            Ok(Verdict::holds(true, format!("int d(zeta) = 0 on {SAMPLES} random three-forms")))
        }),
        cx.check("Sobolev monotone", || {
            let mut r = cx.rng();
            let mut table = Vec::new();
            for _ in 0..3 {
                let v = column((0..p.size()).map(|_| alg.normal_form(&sample::function(alg, &mut r, 2, 2))).collect::<Result<_, _>>()?)?;
                let phi = p.matrix().mul(alg, &v)?;
                let terms = sobolev_terms_at(alg, frame, &p, &phi, 2, th)?;
                let norms: Vec<f64> = (1..=terms.len()).map(|k| terms[..k].iter().sum::<f64>().sqrt()).collect();
                table.push(norms);
            }
            let ok = table.iter().all(|n| n.windows(2).all(|w| w[0] <= w[1]));
            Ok(Verdict::holds(ok, "||.||_{2,0} <= ||.||_{2,1} <= ||.||_{2,2} on 3 random sections").with_value(table))
        }),
        cx.check("Sobolev regression", || {
            let phi = p.matrix().column(0);
            let terms = sobolev_terms(alg, frame, &p, &phi, 1)?;
            let grad = terms[1].evaluate(th).re;
            let rendered: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
            let detail = format!("||p e1||^2 = {}, ||nabla p e1||^2 = {grad:.12}", rendered[0]);
            Ok(Verdict::holds(grad.is_finite() && grad > 0.0, detail).with_value(rendered))
        }),
        cx.check("Cauchy-Schwarz", || {
            let mut r = cx.rng();
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..10 {
                let mut col = || -> Result<MatrixForm, AlgebraError> {
                    column((0..2).map(|_| alg.normal_form(&sample::function(alg, &mut r, 2, 2))).collect::<Result<_, _>>()?)
                };
                let (phi, psi) = (col()?, col()?);
                let ip = invariant_integral(alg, frame, &hermitian(alg, &phi, &psi)?)?.evaluate(th).norm();
                let bound = p_norm(alg, frame, &phi, 2, th)? * p_norm(alg, frame, &psi, 2, th)?;
                worst = worst.max(ip - bound);
            }
            Ok(Verdict::holds(worst <= 1e-9, format!("max |<phi,psi>| - ||phi|| ||psi|| = {worst:.3e} on 10 pairs")))
        }),
        cx.check("positivity", || {
            let mut r = cx.rng();
            let mut least = f64::INFINITY;
            for _ in 0..20 {
                let a = alg.normal_form(&sample::function(alg, &mut r, 3, 2))?;
                let v = invariant_integral(alg, frame, &alg.product(&alg.star(&a)?, &a)?)?;
                least = least.min(v.evaluate(Theta::classical()).re).min(v.evaluate(th).re);
            }
            Ok(Verdict::holds(least >= -1e-9, format!("min int a* a = {least:.6} on 20 samples")))
        }),
        cx.check("order bounds", || {
            let phi = p.matrix().column(0);
            let rejected = sobolev_norm(alg, frame, &p, &phi, 3, th).is_err() && p_norm(alg, frame, &phi, 3, th).is_err();
            Ok(Verdict::holds(rejected, "Sobolev order 3 and odd p are refused"))
        }),
    ];
    out.push(cx.check("<u1, u1> = 1", || {
        let s7 = spheres::s7_theta();
        let data = build_instanton_data(cx.spec, s7)?;
        let u1 = data.u.column(0);
        Ok(Verdict::holds(hermitian(s7.algebra(), &u1, &u1)? == s7.algebra().one(), "unit column"))
    }));
    out
}

fn moduli_dim(cx: &Context) -> Vec<Check> {
    let k = cx.k;
    vec![
        cx.check(&format!("index k={k}"), || {
            let r = index_and_dimension(ChernData::su2(k));
            let note = r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
            let ok = r.index == 8 * k - 4 && r.dimension == 8 * k - 3;
            Ok(Verdict::holds(ok, format!("ind={}, dim={}{note}", r.index, r.dimension)).with_value(&r))
        }),
        cx.check("dimension table", || {
            let dims: Vec<i64> = (1..=5).map(|k| index_and_dimension(ChernData::su2(k)).dimension).collect();
            let rendered = dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ");
            Ok(Verdict::holds(dims == [5, 13, 21, 29, 37], format!("k=1..5: {rendered}")).with_value(dims))
        }),
    ]
}

fn braiding_demo(cx: &Context) -> Vec<Check> {
    let alg = cx.spec.algebra();
    vec![
        cx.check("generator table", || {
            let names = primary_generators(alg);
            let mut table = BTreeMap::new();
            for g in &names {
                for h in &names {
                    let b = alg.braiding(&alg.gen(g)?, &alg.gen(h)?)?;
                    table.insert(format!("{g} (x) {h}"), format!("{} {h} (x) {g}", b.factor));
                }
            }
            Ok(Verdict::holds(true, format!("Psi on {} generator pairs", table.len())).with_value(table))
        }),
        cx.check("involutive", || {
            let mut r = cx.rng();
            for i in 0..SAMPLES {
                let a = sample::monomial(alg, &mut r, 3);
                let b = sample::monomial(alg, &mut r, 3);
                let once = alg.braiding(&a, &b)?;
                let twice = alg.braiding(&once.first, &once.second)?;
                if twice.first != a || twice.second != b || !(&once.factor * &twice.factor).is_one() {
                    return Ok(Verdict::holds(false, format!("Psi^2 != id on sample {i}")));
                }
            }
            Ok(Verdict::holds(true, format!("Psi^2 = id on {SAMPLES} homogeneous pairs")))
        }),
        cx.check("braided commutativity", || {
            let mut r = cx.rng();
            for i in 0..SAMPLES {
                let a = sample::monomial(alg, &mut r, 3);
                let b = sample::monomial(alg, &mut r, 3);
                let once = alg.braiding(&a, &b)?;
                if alg.product(&once.first, &once.second)?.scale(&once.factor) != alg.product(&a, &b)? {
                    return Ok(Verdict::holds(false, format!("m Psi != m on sample {i}")));
                }
            }
            Ok(Verdict::holds(true, format!("m Psi = m on {SAMPLES} homogeneous pairs")))
        }),
        cx.check("mixed degree rejected", || {
            let names = primary_generators(alg);
            let mut pair = None;
            for g in &names {
                for h in &names {
                    if pair.is_none() && degree_of(alg, g)? != degree_of(alg, h)? {
                        pair = Some((*g, *h));
                    }
                }
            }
            let Some((g, h)) = pair else {
                return Ok(Verdict::holds(true, "every generator has the same degree"));
            };
            let mixed = alg.gen(g)?.add(&alg.gen(h)?);
            let refused = alg.braiding(&mixed, &alg.gen(g)?).is_err();
            Ok(Verdict::holds(refused, format!("Psi({g} + {h}, {g}) is refused")))
        }),
    ]
}
