//! The reproduction grid: one check per structural claim, each exact and
//! seeded. Used by `vira verify all` and the acceptance tests.

use std::sync::Arc;
use std::time::Duration;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::analysis::{
    annihilator_normal_form, composition_series, decompose, verify_degree_bounds, verify_dot_span,
    verify_lemma_3_1, whittaker_solve, TruncationSpec,
};
use crate::expr::{parse_poly, parse_uea, parse_vector};
use crate::partitions::{enumerate_up_to, Pseudopartition};
use crate::report::Report;
use crate::scalar::{rat, ratio, Poly, Rational};
use crate::virasoro::{bracket, GeneratorIndex, Uea};
use crate::whittaker::{
    act, dot_act, nilpotency_index, whittaker_reduce, ModuleContext, ModuleElement, WhittakerHom,
};
use crate::witt::{project, witt_act, witt_bracket, witt_module};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// A string printed by some check, with what it should parse back as.
#[derive(Debug, Clone)]
pub enum Emitted {
    Algebra(String),
    Vector(Arc<ModuleContext>, String),
    Poly(String),
}

impl Emitted {
    pub fn text(&self) -> &str {
        match self {
            Emitted::Algebra(s) | Emitted::Vector(_, s) | Emitted::Poly(s) => s,
        }
    }

    /// `print(parse(s)) == s`
    pub fn round_trips(&self) -> bool {
        match self {
            Emitted::Algebra(s) => parse_uea(s).is_ok_and(|u| u.to_string() == *s),
            Emitted::Vector(ctx, s) => parse_vector(s, ctx).is_ok_and(|v| v.to_string() == *s),
            Emitted::Poly(s) => parse_poly(s).is_ok_and(|p| p.to_string() == *s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub emitted: Vec<Emitted>,
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub budget: Duration,
    pub run: fn(u64) -> Outcome,
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, secs, run| Criterion { id, name, budget: Duration::from_secs(secs), run };
    vec![
        c(1, "cocycle soundness", 5, cocycle as fn(u64) -> Outcome),
        c(2, "action coherence", 20, action_coherence),
        c(3, "leading term grid", 10, leading_term_grid),
        c(4, "degree bound grid", 15, degree_bound_grid),
        c(5, "whittaker dimensions", 30, whittaker_dimensions),
        c(6, "local nilpotency", 10, local_nilpotency),
        c(7, "vanishing bound", 5, vanishing_bound),
        c(8, "constructive simplicity", 20, constructive_simplicity),
        c(9, "decomposition", 5, decomposition),
        c(10, "composition series", 10, series),
        c(11, "annihilator", 10, annihilator),
        c(12, "witt quotient", 5, witt),
    ]
}

pub fn psi_samples() -> Vec<WhittakerHom> {
    vec![
        WhittakerHom::new(rat(1), rat(1)).expect("nonzero"),
        WhittakerHom::new(rat(2), ratio(-3, 2)).expect("nonzero"),
    ]
}

pub fn xi_samples() -> Vec<Rational> {
    vec![rat(0), ratio(5, 7)]
}

/// Counts cases and keeps the first few failures for the witness.
#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
    emitted: Vec<Emitted>,
}

const KEPT_FAILURES: usize = 8;
const KEPT_EMITTED: usize = 400;

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < KEPT_FAILURES {
            self.failures.push(describe());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn emit(&mut self, e: Emitted) {
        if self.emitted.len() < KEPT_EMITTED {
            self.emitted.push(e);
        }
    }

    fn emit_vector(&mut self, v: &ModuleElement) {
        self.emit(Emitted::Vector(v.context().clone(), v.to_string()));
    }

    fn emit_algebra(&mut self, u: &Uea) {
        self.emit(Emitted::Algebra(u.to_string()));
    }

    fn finish(self, mut report: Report) -> Outcome {
        let failed = self.failures.len();
        report.witness("cases", self.cases);
        report.witness("failed", failed);
        report.witness(
            "failures",
            self.failures.into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>(),
        );
        report.require("all_cases_pass", failed == 0 && self.cases > 0);
        Outcome { report, emitted: self.emitted }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn rand_coeff(rng: &mut ChaCha8Rng) -> Rational {
    let num = loop {
        let n = rng.gen_range(-5i64..=5);
        if n != 0 {
            break n;
        }
    };
    ratio(num, rng.gen_range(1..=3))
}

/// Random combination of straightened words, each of length at most
/// `max_len`, indices in `±range`, `z` powers at most `max_z`.
fn rand_uea(rng: &mut ChaCha8Rng, max_len: usize, range: GeneratorIndex, max_z: u32) -> Uea {
    let mut out = Uea::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(0..=max_len);
        let word: Vec<GeneratorIndex> = (0..len).map(|_| rng.gen_range(-range..=range)).collect();
        let z = rng.gen_range(0..=max_z);
        out = &out + &Uea::from_word(z, &word).scale(&rand_coeff(rng));
    }
    out
}

fn rand_element(
    rng: &mut ChaCha8Rng,
    ctx: &Arc<ModuleContext>,
    lambdas: &[Pseudopartition],
    max_z: u32,
) -> ModuleElement {
    let tz = ctx.z_dimension().map_or(max_z + 1, |d| d as u32);
    let terms: Vec<_> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let l = lambdas.choose(rng).expect("nonempty").clone();
            (rng.gen_range(0..tz), l, rand_coeff(rng))
        })
        .collect();
    ModuleElement::from_terms(ctx, terms)
}

fn grid_report(check: &str) -> Report {
    Report::new(check)
}

/// Jacobi on `[-6,6]³`, antisymmetry on `[-8,8]²`.
pub fn cocycle(_seed: u64) -> Outcome {
    let mut t = Tally::default();
    let g = Uea::generator;
    for i in -6..=6 {
        for j in -6..=6 {
            for k in -6..=6 {
                let jac = &(&bracket(i, j).commutator(&g(k)) + &bracket(j, k).commutator(&g(i)))
                    + &bracket(k, i).commutator(&g(j));
                t.check(jac.is_zero(), || format!("jacobi({i},{j},{k}) = {jac}"));
            }
        }
    }
    for i in -8..=8 {
        for j in -8..=8 {
            let b = bracket(i, j);
            let s = &Uea::from_word(0, &[i, j]) - &Uea::from_word(0, &[j, i]);
            t.check(s == b && b == -&bracket(j, i), || format!("antisymmetry({i},{j})"));
            if (i + j) % 4 == 0 {
                t.emit_algebra(&b);
            }
        }
    }
    t.finish(grid_report("cocycle").param("jacobi_range", "[-6,6]^3").param("antisymmetry_range", "[-8,8]^2"))
}

/// `act(uv, m) = act(u, act(v, m))` on seeded samples.
pub fn action_coherence(seed: u64) -> Outcome {
    let mut r = rng(seed, 2);
    let mut t = Tally::default();
    let lambdas = enumerate_up_to(3, 2);
    let mut contexts = Vec::new();
    for psi in psi_samples() {
        contexts.push(ModuleContext::universal(psi.clone()));
        for xi in xi_samples() {
            contexts.push(ModuleContext::central(psi.clone(), &xi));
        }
    }
    for s in 0..200 {
        let ctx = &contexts[s % contexts.len()];
        let lu = r.gen_range(0..=4);
        let u = rand_uea(&mut r, lu, 3, 1);
        let v = rand_uea(&mut r, 4 - lu, 3, 1);
        let m = rand_element(&mut r, ctx, &lambdas, 2);
        let lhs = act(&u.multiply(&v), &m);
        let rhs = act(&u, &act(&v, &m));
        t.check(lhs == rhs, || format!("u={u}, v={v}, m={m} in {}", ctx.descriptor()));
        if s % 10 == 0 {
            t.emit_algebra(&u);
            t.emit_vector(&m);
            t.emit_vector(&lhs);
        }
    }
    t.finish(grid_report("action_coherence").param("samples", 200).param("seed", seed))
}

pub fn leading_term_grid(_seed: u64) -> Outcome {
    let mut t = Tally::default();
    for psi in psi_samples() {
        let ctx = ModuleContext::universal(psi.clone());
        for k in 0..=4 {
            for a in 1..=4 {
                let r = verify_lemma_3_1(k, a, &psi);
                t.check(r.pass, || r.to_json().to_string());
                for key in ["lhs", "leading", "remainder"] {
                    if let Some(s) = r.witness[key].as_str() {
                        t.emit(Emitted::Vector(ctx.clone(), s.to_string()));
                    }
                }
            }
        }
    }
    t.finish(grid_report("leading_term_grid").param("k", "0..=4").param("a", "1..=4"))
}

pub fn degree_bound_grid(_seed: u64) -> Outcome {
    let mut t = Tally::default();
    let lambdas: Vec<_> = enumerate_up_to(6, 2).into_iter().filter(|l| !l.is_empty()).collect();
    let mut part_ii = 0;
    for psi in psi_samples() {
        let ctx = ModuleContext::universal(psi.clone());
        for l in &lambdas {
            for m in 1..=8 {
                let r = verify_degree_bounds(m, l, &psi).expect("λ nonempty");
                part_ii += usize::from(r.witness.get("part_ii").is_some());
                t.check(r.pass, || r.to_json().to_string());
                if l.size() <= 3 {
                    if let Some(s) = r.witness["bracket"].as_str() {
                        t.emit(Emitted::Vector(ctx.clone(), s.to_string()));
                    }
                }
            }
        }
    }
    let mut report = grid_report("degree_bound_grid").param("max_degree", 6).param("max_zero_count", 2).param("m", "1..=8");
    report.witness("part_ii_cases", part_ii);
    report.require("part_ii_covers_every_lambda", part_ii == 2 * lambdas.len());
    t.finish(report)
}

pub fn whittaker_dimensions(_seed: u64) -> Outcome {
    let mut t = Tally::default();
    let quotients = [
        Poly::from_roots(&[(rat(1), 2)]),
        Poly::from_roots(&[(rat(1), 1), (rat(2), 1)]),
        Poly::from_roots(&[(rat(1), 2), (rat(-3), 1)]),
    ];
    for psi in psi_samples() {
        let mut cases: Vec<(Arc<ModuleContext>, u32, usize)> = Vec::new();
        for cap in 0..=3 {
            cases.push((ModuleContext::universal(psi.clone()), cap, cap as usize + 1));
        }
        for xi in xi_samples() {
            cases.push((ModuleContext::central(psi.clone(), &xi), 0, 1));
        }
        for p in &quotients {
            let ctx = ModuleContext::quotient(psi.clone(), p.clone()).expect("monic");
            cases.push((ctx, 0, p.deg_or_zero()));
        }
        for (ctx, cap, want) in &cases {
            for n in [3, 4, 5] {
                for z in [1, 2] {
                    let basis = whittaker_solve(ctx, &TruncationSpec::new(n, z, *cap));
                    let clean = basis.iter().all(|v| v.terms().all(|(k, _)| k.lambda.is_empty()));
                    t.check(basis.len() == *want && clean, || {
                        format!("{} N={n} Z={z} T={cap}: dimension {} (want {want})", ctx.descriptor(), basis.len())
                    });
                    if n == 3 && z == 1 {
                        basis.iter().for_each(|v| t.emit_vector(v));
                    }
                }
            }
        }
    }
    t.finish(grid_report("whittaker_dimensions").param("N", "3,4,5").param("Z", "1,2"))
}

pub fn local_nilpotency(_seed: u64) -> Outcome {
    let mut t = Tally::default();
    for psi in psi_samples() {
        for l in enumerate_up_to(4, 2) {
            for n in 1..=4u32 {
                let x = l.size() + 2 * l.parts();
                let ceil_bound = x.div_ceil(n as u64) as u32 + 1;
                match nilpotency_index(&psi, n, &l) {
                    Ok(nil) => t.check(nil.index <= nil.bound && nil.bound <= ceil_bound, || {
                        format!("n={n} λ={l}: index {} bound {}", nil.index, nil.bound)
                    }),
                    Err(e) => t.check(false, || format!("n={n} λ={l}: {e}")),
                }
            }
        }
    }
    t.finish(grid_report("local_nilpotency").param("max_degree", 4).param("max_zero_count", 2).param("n", "1..=4"))
}

pub fn vanishing_bound(_seed: u64) -> Outcome {
    let mut t = Tally::default();
    for psi in psi_samples() {
        let ctx = ModuleContext::universal(psi.clone());
        for l in enumerate_up_to(4, 2) {
            for i in 0..=2 {
                let top = l.size() as u32 + 2;
                for n in top + 1..=top + 4 {
                    let image = dot_act(n, &ModuleElement::basis(&ctx, i, &l));
                    let r = verify_dot_span(n, i, &l, &psi);
                    t.check(image.is_zero() && r.pass, || format!("n={n} i={i} λ={l}: {image}"));
                }
            }
        }
    }
    t.finish(grid_report("vanishing_bound").param("max_degree", 4).param("i", "0..=2"))
}

pub fn constructive_simplicity(seed: u64) -> Outcome {
    let mut r = rng(seed, 8);
    let mut t = Tally::default();
    let lambdas = enumerate_up_to(4, 2);
    let mut steps = 0;
    for s in 0..100 {
        let psi = &psi_samples()[s % 2];
        let xi = &xi_samples()[(s / 2) % 2];
        let ctx = ModuleContext::central(psi.clone(), xi);
        let v = loop {
            let v = rand_element(&mut r, &ctx, &lambdas, 0);
            if !v.is_zero() {
                break v;
            }
        };
        match whittaker_reduce(&v) {
            Ok(red) => {
                let c = red.result.coeff(0, &Pseudopartition::empty());
                let ok = red.result.len() == 1 && !c.is_zero();
                steps = steps.max(red.trace.len());
                t.check(ok, || format!("{v} reduced to {}", red.result));
                if s % 5 == 0 {
                    t.emit_vector(&v);
                    t.emit_vector(&red.result);
                }
            }
            Err(e) => t.check(false, || format!("{v}: {e}")),
        }
    }
    let mut report = grid_report("constructive_simplicity").param("samples", 100).param("seed", seed);
    report.witness("longest_trace", steps);
    t.finish(report)
}

pub fn decomposition(_seed: u64) -> Outcome {
    let mut t = Tally::default();
    let p = Poly::from_roots(&[(rat(1), 2), (rat(-3), 1)]);
    let mut reports = Vec::new();
    for psi in psi_samples() {
        match decompose(&psi, &p) {
            Ok(d) => {
                t.check(d.report.pass, || d.report.to_json().to_string());
                for c in &d.components {
                    t.emit(Emitted::Poly(c.bezout.to_string()));
                    t.emit(Emitted::Poly(c.cofactor.to_string()));
                    t.emit_vector(&c.generator);
                }
                reports.push(d.report.to_json());
            }
            Err(e) => t.check(false, || e.to_string()),
        }
    }
    t.emit(Emitted::Poly(p.to_string()));
    let mut report = grid_report("decomposition").param("p", p.to_string());
    report.witness("reports", reports);
    t.finish(report)
}

pub fn series(_seed: u64) -> Outcome {
    let mut t = Tally::default();
    for psi in psi_samples() {
        for (xi, a) in [(rat(0), 2), (rat(1), 3)] {
            match composition_series(&psi, &xi, a) {
                Ok(s) => {
                    t.check(s.report.pass, || s.report.to_json().to_string());
                    s.generators.iter().for_each(|g| t.emit_vector(g));
                }
                Err(e) => t.check(false, || e.to_string()),
            }
        }
    }
    t.finish(grid_report("composition_series").param("cases", json!([["0", 2], ["1", 3]])))
}

pub fn annihilator(seed: u64) -> Outcome {
    let mut r = rng(seed, 11);
    let mut t = Tally::default();
    let moduli = [Poly::linear(&ratio(5, 7)), Poly::from_roots(&[(rat(1), 1), (rat(2), 1)])];
    let mut annihilating = 0;
    for s in 0..50 {
        let psi = &psi_samples()[s % 2];
        let p = &moduli[(s / 2) % 2];
        let ctx = ModuleContext::quotient(psi.clone(), p.clone()).expect("monic");
        let u = if s % 3 == 0 {
            // an element of the annihilator, built from its generators
            let i = r.gen_range(1..=3);
            let shifted = &Uea::generator(i) - &Uea::constant(psi.value(i));
            let a = rand_uea(&mut r, 2, 3, 1);
            let b = rand_uea(&mut r, 2, 3, 1);
            &a.multiply(&shifted) + &b.multiply(&Uea::from_poly(p))
        } else {
            rand_uea(&mut r, 3, 3, 2)
        };
        match annihilator_normal_form(&u, psi, p) {
            Ok(f) => {
                let kills = act(&u, &ModuleElement::cyclic(&ctx)).is_zero();
                annihilating += usize::from(kills);
                let ok = f.expand(psi, p) == u && f.residual.is_zero() == kills;
                t.check(ok, || format!("u={u} p={p}"));
                if s % 5 == 0 {
                    t.emit_algebra(&u);
                    t.emit_algebra(&f.residual);
                    t.emit_algebra(&f.u0);
                }
            }
            Err(e) => t.check(false, || e.to_string()),
        }
    }
    let mut report = grid_report("annihilator").param("samples", 50).param("seed", seed);
    report.witness("annihilating_samples", annihilating);
    report.require("both_outcomes_sampled", annihilating > 0 && annihilating < 50);
    t.finish(report)
}

pub fn witt(seed: u64) -> Outcome {
    let mut r = rng(seed, 12);
    let mut t = Tally::default();
    for i in -6..=6 {
        for j in -6..=6 {
            let b = bracket(i, j);
            let p = project(&b);
            t.check(p == witt_bracket(i, j) && p.terms().all(|(m, _)| m.z_power() == 0), || {
                format!("project([d{i}, d{j}]) = {p}")
            });
            if i + j == 0 {
                t.emit_algebra(&p.lift());
            }
        }
    }
    let lambdas = enumerate_up_to(3, 2);
    for s in 0..50 {
        let psi = &psi_samples()[s % 2];
        let ctx = witt_module(psi.clone());
        let u = rand_uea(&mut r, 3, 3, 2);
        let v = rand_element(&mut r, &ctx, &lambdas, 0);
        let lhs = witt_act(&project(&u), &v);
        let rhs = act(&u, &v);
        t.check(lhs.as_ref() == Ok(&rhs), || format!("u={u} v={v}"));
        if s % 5 == 0 {
            t.emit_vector(&rhs);
        }
    }
    t.finish(grid_report("witt").param("bracket_range", "[-6,6]^2").param("samples", 50).param("seed", seed))
}
