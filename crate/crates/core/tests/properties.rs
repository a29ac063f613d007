use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;

use vira::analysis::{
    annihilator_normal_form, decompose_with, dot_orbit_dimension, sparse_nullspace, whittaker_solve,
    RationalMatrix, TruncationSpec,
};
use vira::expr::{parse_poly, parse_uea, parse_vector};
use vira::partitions::{enumerate_up_to, Pseudopartition};
use vira::scalar::{rat, ratio, Poly, Rational};
use vira::virasoro::{Monomial, Uea};
use vira::whittaker::{
    act, act_generator, dot_act, is_whittaker_vector, maxdeg, whittaker_reduce, ModuleContext, ModuleElement,
    WhittakerHom,
};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(small_rational(), 0..=max_deg + 1).prop_map(Poly::new)
}

fn psi() -> impl Strategy<Value = WhittakerHom> {
    (nonzero_rational(), nonzero_rational()).prop_map(|(a, b)| WhittakerHom::new(a, b).unwrap())
}

/// Sum of straightened words of length ≤ `len` with indices in `±range`.
fn uea(len: usize, range: i64, max_z: u32) -> impl Strategy<Value = Uea> {
    let term = (
        0..=max_z,
        proptest::collection::vec(-range..=range, 0..=len),
        nonzero_rational(),
    );
    proptest::collection::vec(term, 1..=3).prop_map(|terms| {
        terms
            .into_iter()
            .fold(Uea::zero(), |acc, (z, w, c)| &acc + &Uea::from_word(z, &w).scale(&c))
    })
}

/// Element of `U(b⁻)` in PBW form: `z^t d_{-λ}` with λ from a small list.
fn lower_borel(max_size: u32) -> impl Strategy<Value = Uea> {
    let lambdas = enumerate_up_to(max_size, 2);
    let term = (0u32..=2, proptest::sample::select(lambdas), nonzero_rational());
    proptest::collection::vec(term, 1..=4).prop_map(|terms| {
        let mut u = Uea::zero();
        for (t, l, c) in terms {
            u.add_term(Monomial::from_pseudopartition(t, &l), c);
        }
        u
    })
}

fn lambda(max_size: u32, max_zero: u32) -> impl Strategy<Value = Pseudopartition> {
    proptest::sample::select(enumerate_up_to(max_size, max_zero))
}

fn context(psi: WhittakerHom, choice: u8, xi: Rational) -> std::sync::Arc<ModuleContext> {
    match choice % 3 {
        0 => ModuleContext::universal(psi),
        1 => ModuleContext::central(psi, &xi),
        _ => ModuleContext::quotient(psi, &Poly::linear(&xi) * &Poly::linear(&(xi.clone() + rat(1)))).unwrap(),
    }
}

fn element(ctx: &std::sync::Arc<ModuleContext>, terms: &[(u32, Pseudopartition, Rational)]) -> ModuleElement {
    ModuleElement::from_terms(ctx, terms.iter().cloned())
}

fn element_terms() -> impl Strategy<Value = Vec<(u32, Pseudopartition, Rational)>> {
    proptest::collection::vec((0u32..=2, lambda(3, 2), nonzero_rational()), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divmod_reconstructs(a in poly(5), b in poly(3)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.deg_or_zero() < b.deg_or_zero());
    }

    #[test]
    fn ext_gcd_is_a_bezout_certificate(a in poly(4), b in poly(4)) {
        prop_assume!(!a.is_zero() || !b.is_zero());
        let (g, s, t) = Poly::ext_gcd(&a, &b).unwrap();
        prop_assert_eq!(&(&s * &a) + &(&t * &b), g.clone());
        prop_assert!(g.is_monic());
        prop_assert!(a.rem(&g).unwrap().is_zero() && b.rem(&g).unwrap().is_zero());
    }

    #[test]
    fn factorization_recovers_roots(roots in proptest::collection::btree_map(small_rational(), 1u32..=3, 1..=3)) {
        let factors: Vec<(Rational, u32)> = roots.into_iter().collect();
        let p = Poly::from_roots(&factors);
        prop_assert_eq!(p.linear_factorization().unwrap(), factors);
    }

    #[test]
    fn taylor_shift_evaluates_at_shifted_point(p in poly(4), s in small_rational(), x in small_rational()) {
        prop_assert_eq!(p.taylor_shift(&s).eval(&x), p.eval(&(x.clone() + s)));
    }

    #[test]
    fn module_axiom(psi in psi(), choice in 0u8..3, xi in small_rational(),
                    u in uea(2, 3, 1), v in uea(2, 3, 1), m in element_terms()) {
        let ctx = context(psi, choice, xi);
        let m = element(&ctx, &m);
        prop_assert_eq!(act(&u.multiply(&v), &m), act(&u, &act(&v, &m)));
    }

    #[test]
    fn quotient_is_universal_then_reduce(psi in psi(), xi in small_rational(), u in uea(3, 3, 2), m in element_terms()) {
        let universal = ModuleContext::universal(psi.clone());
        let p = &Poly::linear(&xi) * &Poly::linear(&(xi.clone() - rat(2)));
        let quotient = ModuleContext::quotient(psi, p).unwrap();
        let mu = element(&universal, &m);
        let mq = element(&quotient, &m);
        prop_assert_eq!(act(&u, &mu).reduce_into(&quotient), act(&u, &mq));
    }

    #[test]
    fn universal_module_is_free_over_lower_borel(psi in psi(), u in lower_borel(4)) {
        let ctx = ModuleContext::universal(psi);
        let v = act(&u, &ModuleElement::cyclic(&ctx));
        let oracle = ModuleElement::from_terms(
            &ctx,
            u.terms().map(|(m, c)| (m.z_power(), m.lower_part(), c.clone())),
        );
        prop_assert_eq!(&v, &oracle);
        prop_assert!(!v.is_zero());
    }

    #[test]
    fn degree_bound(psi in psi(), m in 1u32..=8, v in element_terms()) {
        let ctx = ModuleContext::universal(psi);
        let v = element(&ctx, &v);
        let bound = maxdeg(&v).finite().map(|d| d as i64 - m as i64 + 2);
        let bound = bound.unwrap_or(i64::MIN);
        prop_assert!(maxdeg(&act_generator(m as i64, &v)).le_int(bound));
        prop_assert!(maxdeg(&dot_act(m, &v)).le_int(bound));
    }

    #[test]
    fn vanishing_bound(psi in psi(), l in lambda(4, 3), i in 0u32..=3, extra in 1u32..=5) {
        let ctx = ModuleContext::universal(psi);
        let n = l.size() as u32 + 2 + extra;
        prop_assert!(dot_act(n, &ModuleElement::basis(&ctx, i, &l)).is_zero());
    }

    #[test]
    fn print_parse_round_trip(psi in psi(), choice in 0u8..3, xi in small_rational(), u in uea(3, 4, 2), m in element_terms()) {
        let s = u.to_string();
        prop_assert_eq!(parse_uea(&s).unwrap().to_string(), s);
        let ctx = context(psi, choice, xi);
        let v = act(&u, &element(&ctx, &m));
        let s = v.to_string();
        prop_assert_eq!(parse_vector(&s, &ctx).unwrap(), v);
        let p = ctx.modulus().cloned().unwrap_or_else(Poly::one);
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn nullspace_is_annihilated(rows in proptest::collection::vec(proptest::collection::vec(small_rational(), 5), 1..=4)) {
        let m = RationalMatrix::from_rows(rows);
        let ns = m.nullspace();
        prop_assert_eq!(m.rank() + ns.len(), m.cols());
        for v in &ns {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        let columns: Vec<BTreeMap<usize, Rational>> = (0..m.cols())
            .map(|c| (0..m.rows()).filter(|&r| !m.get(r, c).is_zero()).map(|r| (r, m.get(r, c).clone())).collect())
            .collect();
        prop_assert_eq!(sparse_nullspace(&columns), ns);
    }

    #[test]
    fn reduce_reaches_a_multiple_of_w(psi in psi(), xi in small_rational(),
                                      terms in proptest::collection::vec((lambda(4, 2), nonzero_rational()), 1..=4)) {
        let ctx = ModuleContext::central(psi, &xi);
        let v = ModuleElement::from_terms(&ctx, terms.into_iter().map(|(l, c)| (0, l, c)));
        prop_assume!(!v.is_zero());
        let red = whittaker_reduce(&v).unwrap();
        prop_assert_eq!(red.result.len(), 1);
        prop_assert!(!red.result.coeff(0, &Pseudopartition::empty()).is_zero());
        prop_assert!(red.measures.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn orbit_contains_its_generator_and_a_whittaker_vector(psi in psi(), m in element_terms()) {
        let ctx = ModuleContext::universal(psi);
        let v = element(&ctx, &m);
        let o = dot_orbit_dimension(&v).unwrap();
        prop_assert_eq!(o.spanning.len(), o.dimension);
        prop_assert!(o.dimension >= 1);
        // the orbit is finite dimensional and d_1, d_2 act nilpotently, so
        // their common kernel on it is nonzero
        let columns: Vec<BTreeMap<(u32, String), Rational>> = o
            .spanning
            .iter()
            .map(|s| {
                [1u32, 2]
                    .iter()
                    .flat_map(|&n| {
                        dot_act(n, s)
                            .terms()
                            .map(move |(k, c)| ((n, format!("{}|{}", k.z, k.lambda)), c.clone()))
                            .collect::<Vec<_>>()
                    })
                    .collect()
            })
            .collect();
        let kernel = sparse_nullspace(&columns);
        prop_assert!(!kernel.is_empty());
        let x = o
            .spanning
            .iter()
            .zip(&kernel[0])
            .fold(ModuleElement::zero(&ctx), |acc, (s, c)| acc.add_scaled(s, c));
        prop_assert!(!x.is_zero());
        prop_assert!(is_whittaker_vector(&x));
    }

    #[test]
    fn annihilator_normal_form_reexpands(psi in psi(), xi in small_rational(), u in uea(3, 3, 2), quadratic in any::<bool>()) {
        let p = if quadratic { Poly::from_ints(&[2, -3, 1]) } else { Poly::linear(&xi) };
        let f = annihilator_normal_form(&u, &psi, &p).unwrap();
        prop_assert_eq!(f.expand(&psi, &p), u.clone());
        prop_assert!(f.residual.terms().all(|(m, _)| m.in_lower_borel() && (m.z_power() as usize) < p.deg_or_zero()));
        let ctx = ModuleContext::quotient(psi, p).unwrap();
        prop_assert_eq!(f.residual.is_zero(), act(&u, &ModuleElement::cyclic(&ctx)).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn solver_dimensions(psi in psi(), n in 2u32..=6, z in 0u32..=3, t in 0u32..=3, xi in small_rational()) {
        let trunc = TruncationSpec::new(n, z, t);
        let universal = ModuleContext::universal(psi.clone());
        let sols = whittaker_solve(&universal, &trunc);
        prop_assert_eq!(sols.len(), t as usize + 1);
        prop_assert!(sols.iter().all(|v| v.terms().all(|(k, _)| k.lambda.is_empty())));
        let p = &Poly::linear(&xi).pow(2) * &Poly::linear(&(xi.clone() + rat(3)));
        let quotient = ModuleContext::quotient(psi, p).unwrap();
        prop_assert_eq!(whittaker_solve(&quotient, &trunc).len(), 3);
    }

    #[test]
    fn decomposition_certificates(psi in psi(), roots in proptest::collection::btree_map(small_rational(), 1u32..=2, 1..=3)) {
        let factors: Vec<(Rational, u32)> = roots.into_iter().collect();
        let p = Poly::from_roots(&factors);
        let d = decompose_with(&psi, &p, &TruncationSpec::new(2, 1, 0)).unwrap();
        prop_assert!(d.report.pass, "{}", d.report.to_text(false));
        for (i, ci) in d.components.iter().enumerate() {
            for (j, cj) in d.components.iter().enumerate() {
                if i != j {
                    prop_assert!((&ci.cofactor * &cj.cofactor).rem(&p).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn reduction_in_the_series_lands_on_the_layer_generator(psi in psi(), xi in small_rational(), a in 2u32..=3,
                                                          layer in 0u32..=2, m in element_terms()) {
        prop_assume!(layer < a);
        let y = Poly::linear(&xi);
        let ctx = ModuleContext::quotient(psi, y.pow(a)).unwrap();
        let v = element(&ctx, &m).mul_poly(&y.pow(layer));
        prop_assume!(!v.is_zero());
        let red = whittaker_reduce(&v).unwrap();
        // result = q(z)w with y^layer | q, i.e. a multiple of w_layer modulo V_{layer+1}
        let polys = red.result.coefficient_polys();
        prop_assert_eq!(polys.len(), 1);
        let (mu, q) = polys.into_iter().next().unwrap();
        prop_assert!(mu.is_empty());
        let shifted = q.taylor_shift(&xi);
        prop_assert!((0..layer as usize).all(|s| shifted.coeff(s).is_zero()));
    }
}
