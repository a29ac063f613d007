//! Whittaker modules: the universal module `M_ψ`, its central quotients
//! `L_{ψ,ξ}` and the quotients `M_ψ / U(V)p(z)w`.
//!
//! Every module here is spanned by `z^t d_{-λ} w`. In the universal module
//! these vectors form a basis; in the quotient by `p(z)` the vectors with
//! `t < deg p` do. The action of a generator on a basis vector is computed
//! directly at the module level by commuting it to the right until it
//! reaches `w`, where positive modes act through `ψ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::partitions::Pseudopartition;
use crate::scalar::{join_signed_terms, rat, Degree, Poly, Rational};
use crate::virasoro::{central_coefficient, fmt_word_runs, GeneratorIndex, Monomial, Uea};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WhittakerError {
    #[error("ψ₁ and ψ₂ must both be nonzero (got ψ₁ = {0}, ψ₂ = {1})")]
    SingularPsi(Rational, Rational),
    #[error("quotient polynomial must be monic of degree ≥ 1, got {0}")]
    BadModulus(String),
    #[error("expected a nonzero module element")]
    ZeroVector,
    #[error("reduction step {step} with d_{operator} did not decrease the measure {before:?} -> {after:?}")]
    MeasureNotDecreasing { step: usize, operator: u32, before: (Degree, Degree), after: (Degree, Degree) },
    #[error("reduction exceeded its iteration cap of {0} steps")]
    CapExceeded(usize),
    #[error("d_{n} did not act nilpotently on d_(-{lambda})w within {limit} steps")]
    NotNilpotent { n: u32, lambda: String, limit: u32 },
}

/// The character `ψ: n⁺ → ℚ`, determined by `ψ₁ = ψ(d₁)` and `ψ₂ = ψ(d₂)`;
/// it vanishes on `d_i` for `i ≥ 3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WhittakerHom {
    psi1: Rational,
    psi2: Rational,
}

impl WhittakerHom {
    pub fn new(psi1: Rational, psi2: Rational) -> Result<Self, WhittakerError> {
        if psi1.is_zero() || psi2.is_zero() {
            return Err(WhittakerError::SingularPsi(psi1, psi2));
        }
        Ok(WhittakerHom { psi1, psi2 })
    }

    pub fn psi1(&self) -> &Rational {
        &self.psi1
    }

    pub fn psi2(&self) -> &Rational {
        &self.psi2
    }

    /// `ψ(d_n)` for `n ≥ 1`; zero for every other index.
    pub fn value(&self, n: GeneratorIndex) -> Rational {
        match n {
            1 => self.psi1.clone(),
            2 => self.psi2.clone(),
            _ => Rational::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `M_ψ`
    Universal,
    /// `M_ψ / U(V)p(z)w` with `p` monic of positive degree. `L_{ψ,ξ}` is the
    /// case `p = z - ξ`.
    PolyQuotient(Poly),
}

/// Basis label `z^t d_{-λ} w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKey {
    pub lambda: Pseudopartition,
    pub z: u32,
}

impl BasisKey {
    pub fn new(z: u32, lambda: Pseudopartition) -> Self {
        BasisKey { lambda, z }
    }
}

type Terms = BTreeMap<BasisKey, Rational>;
type ActionCache = RwLock<HashMap<(GeneratorIndex, Pseudopartition), Arc<Vec<(BasisKey, Rational)>>>>;

/// A Whittaker module presentation together with its action caches.
#[derive(Debug)]
pub struct ModuleContext {
    psi: WhittakerHom,
    variant: Variant,
    action: ActionCache,
    z_residues: Mutex<Vec<Poly>>,
}

impl PartialEq for ModuleContext {
    fn eq(&self, other: &Self) -> bool {
        self.psi == other.psi && self.variant == other.variant
    }
}

impl Eq for ModuleContext {}

impl ModuleContext {
    fn build(psi: WhittakerHom, variant: Variant) -> Arc<Self> {
        Arc::new(ModuleContext {
            psi,
            variant,
            action: RwLock::new(HashMap::new()),
            z_residues: Mutex::new(Vec::new()),
        })
    }

    pub fn universal(psi: WhittakerHom) -> Arc<Self> {
        Self::build(psi, Variant::Universal)
    }

    pub fn quotient(psi: WhittakerHom, p: Poly) -> Result<Arc<Self>, WhittakerError> {
        if !p.is_monic() || p.deg_or_zero() == 0 {
            return Err(WhittakerError::BadModulus(p.to_string()));
        }
        Ok(Self::build(psi, Variant::PolyQuotient(p)))
    }

    /// `L_{ψ,ξ}`
    pub fn central(psi: WhittakerHom, xi: &Rational) -> Arc<Self> {
        Self::build(psi, Variant::PolyQuotient(Poly::linear(xi)))
    }

    /// Same character, universal presentation.
    pub fn with_variant(&self, variant: Variant) -> Result<Arc<Self>, WhittakerError> {
        match variant {
            Variant::Universal => Ok(Self::universal(self.psi.clone())),
            Variant::PolyQuotient(p) => Self::quotient(self.psi.clone(), p),
        }
    }

    pub fn psi(&self) -> &WhittakerHom {
        &self.psi
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn modulus(&self) -> Option<&Poly> {
        match &self.variant {
            Variant::Universal => None,
            Variant::PolyQuotient(p) => Some(p),
        }
    }

    /// Number of `z` powers kept per `λ`; `None` when unbounded.
    pub fn z_dimension(&self) -> Option<usize> {
        self.modulus().map(Poly::deg_or_zero)
    }

    /// Descriptor string: `M`, `L:xi=r` or `Q:p=poly`.
    pub fn descriptor(&self) -> String {
        match &self.variant {
            Variant::Universal => "M".to_string(),
            Variant::PolyQuotient(p) if p.deg_or_zero() == 1 => {
                format!("L:xi={}", -p.coeff(0))
            }
            Variant::PolyQuotient(p) => format!("Q:p={p}"),
        }
    }

    /// `z^t mod p`
    fn z_residue(&self, t: usize) -> Poly {
        let p = self.modulus().expect("residues only exist in quotients");
        let mut table = self.z_residues.lock().expect("residue table poisoned");
        while table.len() <= t {
            let next = match table.last() {
                None => Poly::one(),
                Some(prev) => (prev * &Poly::z()).rem(p).expect("monic modulus"),
            };
            table.push(next);
        }
        table[t].clone()
    }

    /// Adds `c z^t d_{-λ} w` to `terms`, rewriting `z^t` modulo `p` when needed.
    fn push_reduced(&self, terms: &mut Terms, t: u32, lambda: &Pseudopartition, c: &Rational) {
        match self.z_dimension() {
            Some(dim) if t as usize >= dim => {
                for (s, a) in self.z_residue(t as usize).coeffs().iter().enumerate() {
                    if !a.is_zero() {
                        add_into(terms, BasisKey::new(s as u32, lambda.clone()), a * c);
                    }
                }
            }
            _ => add_into(terms, BasisKey::new(t, lambda.clone()), c.clone()),
        }
    }

    /// `d_n · d_{-λ} w` in the universal module, as a list of terms.
    fn generator_on_basis(&self, n: GeneratorIndex, lambda: &Pseudopartition) -> Arc<Vec<(BasisKey, Rational)>> {
        let key = (n, lambda.clone());
        if let Some(hit) = self.action.read().expect("action cache poisoned").get(&key) {
            return hit.clone();
        }
        let mut out = Terms::new();
        match lambda.max_part() {
            None => {
                if n > 0 {
                    add_into(&mut out, BasisKey::new(0, Pseudopartition::empty()), self.psi.value(n));
                } else {
                    add_into(&mut out, BasisKey::new(0, Pseudopartition::from_parts(&[(-n) as u32])), Rational::one());
                }
            }
            Some(top) if n <= -(top as GeneratorIndex) => {
                add_into(&mut out, BasisKey::new(0, lambda.with_part((-n) as u32)), Rational::one());
            }
            Some(top) => {
                // d_n d_a R w = d_a (d_n R w) + [d_n, d_a] R w, with d_a the leftmost factor
                let a = -(top as GeneratorIndex);
                let rest = lambda.without_part(top).expect("top part present");
                for (k, c) in self.generator_on_basis(n, &rest).iter() {
                    for (k2, c2) in self.generator_on_basis(a, &k.lambda).iter() {
                        add_into(&mut out, BasisKey::new(k.z + k2.z, k2.lambda.clone()), c * c2);
                    }
                }
                let coeff = rat(a - n);
                if !coeff.is_zero() {
                    for (k, c) in self.generator_on_basis(n + a, &rest).iter() {
                        add_into(&mut out, k.clone(), c * &coeff);
                    }
                }
                if n + a == 0 {
                    let central = central_coefficient(n);
                    if !central.is_zero() {
                        add_into(&mut out, BasisKey::new(1, rest), central);
                    }
                }
            }
        }
        let out = Arc::new(out.into_iter().collect::<Vec<_>>());
        self.action
            .write()
            .expect("action cache poisoned")
            .insert(key, out.clone());
        out
    }

    /// Applies a PBW word (rightmost generator first) to `d_{-λ} w` in the
    /// universal module.
    fn word_on_basis(&self, word: &[GeneratorIndex], lambda: &Pseudopartition) -> Terms {
        let mut cur = Terms::new();
        cur.insert(BasisKey::new(0, lambda.clone()), Rational::one());
        for &g in word.iter().rev() {
            let mut next = Terms::new();
            for (k, c) in &cur {
                for (k2, c2) in self.generator_on_basis(g, &k.lambda).iter() {
                    add_into(&mut next, BasisKey::new(k.z + k2.z, k2.lambda.clone()), c * c2);
                }
            }
            cur = next;
            if cur.is_empty() {
                break;
            }
        }
        cur
    }
}

fn add_into(terms: &mut Terms, key: BasisKey, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Finite combination `Σ c · z^t d_{-λ} w` in a fixed module context.
#[derive(Debug, Clone)]
pub struct ModuleElement {
    ctx: Arc<ModuleContext>,
    terms: Terms,
}

impl PartialEq for ModuleElement {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.terms == other.terms
    }
}

impl Eq for ModuleElement {}

impl ModuleElement {
    pub fn zero(ctx: &Arc<ModuleContext>) -> Self {
        ModuleElement { ctx: ctx.clone(), terms: Terms::new() }
    }

    /// The cyclic Whittaker vector `w` (or `w̄` in a quotient).
    pub fn cyclic(ctx: &Arc<ModuleContext>) -> Self {
        Self::basis(ctx, 0, &Pseudopartition::empty())
    }

    /// `z^t d_{-λ} w`, reduced into the context.
    pub fn basis(ctx: &Arc<ModuleContext>, t: u32, lambda: &Pseudopartition) -> Self {
        Self::from_terms(ctx, [(t, lambda.clone(), Rational::one())])
    }

    /// `q(z) w`
    pub fn poly_times_cyclic(ctx: &Arc<ModuleContext>, q: &Poly) -> Self {
        Self::from_terms(
            ctx,
            q.coeffs()
                .iter()
                .enumerate()
                .map(|(t, c)| (t as u32, Pseudopartition::empty(), c.clone())),
        )
    }

    pub fn from_terms(
        ctx: &Arc<ModuleContext>,
        terms: impl IntoIterator<Item = (u32, Pseudopartition, Rational)>,
    ) -> Self {
        let mut out = Terms::new();
        for (t, lambda, c) in terms {
            ctx.push_reduced(&mut out, t, &lambda, &c);
        }
        ModuleElement { ctx: ctx.clone(), terms: out }
    }

    pub fn context(&self) -> &Arc<ModuleContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: u32, lambda: &Pseudopartition) -> Rational {
        self.terms
            .get(&BasisKey::new(t, lambda.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Groups the element as `Σ_λ p_λ(z) d_{-λ} w`.
    pub fn coefficient_polys(&self) -> BTreeMap<Pseudopartition, Poly> {
        let mut raw: BTreeMap<Pseudopartition, Vec<Rational>> = BTreeMap::new();
        for (k, c) in &self.terms {
            let v = raw.entry(k.lambda.clone()).or_default();
            if v.len() <= k.z as usize {
                v.resize(k.z as usize + 1, Rational::zero());
            }
            v[k.z as usize] = c.clone();
        }
        raw.into_iter().map(|(l, v)| (l, Poly::new(v))).collect()
    }

    fn assert_same_context(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx,
            "module elements from different contexts"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Self {
        self.assert_same_context(other);
        let mut terms = self.terms.clone();
        if !c.is_zero() {
            for (k, a) in &other.terms {
                add_into(&mut terms, k.clone(), a * c);
            }
        }
        ModuleElement { ctx: self.ctx.clone(), terms }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut terms = Terms::new();
        if !c.is_zero() {
            for (k, a) in &self.terms {
                terms.insert(k.clone(), a * c);
            }
        }
        ModuleElement { ctx: self.ctx.clone(), terms }
    }

    /// `q(z) · self`
    pub fn mul_poly(&self, q: &Poly) -> Self {
        let mut out = Terms::new();
        for (k, a) in &self.terms {
            for (s, b) in q.coeffs().iter().enumerate() {
                if !b.is_zero() {
                    self.ctx.push_reduced(&mut out, k.z + s as u32, &k.lambda, &(a * b));
                }
            }
        }
        ModuleElement { ctx: self.ctx.clone(), terms: out }
    }

    /// Moves the element into another presentation with the same `ψ` by
    /// reducing `z` powers there. Meaningful from the universal module.
    pub fn reduce_into(&self, target: &Arc<ModuleContext>) -> Self {
        Self::from_terms(
            target,
            self.terms.iter().map(|(k, c)| (k.z, k.lambda.clone(), c.clone())),
        )
    }

    /// Stable JSON form `{"terms":[{"z":t,"lambda":[...],"coeff":"p/q"}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(k, c)| {
                serde_json::json!({
                    "z": k.z,
                    "lambda": k.lambda.parts_ascending(),
                    "coeff": c.to_string(),
                })
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            b.0.lambda
                .cmp(&a.0.lambda)
                .then_with(|| a.0.z.cmp(&b.0.z))
        });
        let rendered = terms.into_iter().map(|(k, c)| {
            let mono = Monomial::from_pseudopartition(k.z, &k.lambda);
            let mut factors = Vec::new();
            match k.z {
                0 => {}
                1 => factors.push("z".to_string()),
                t => factors.push(format!("z^{t}")),
            }
            factors.extend(fmt_word_runs(mono.word()));
            factors.push("w".to_string());
            (c.clone(), factors.join("*"))
        });
        f.write_str(&join_signed_terms(rendered))
    }
}

/// The module action `u · v`.
pub fn act(u: &Uea, v: &ModuleElement) -> ModuleElement {
    let ctx = &v.ctx;
    let mut out = Terms::new();
    for (m, a) in u.terms() {
        for (k, b) in &v.terms {
            let ab = a * b;
            for (k2, c) in ctx.word_on_basis(m.word(), &k.lambda) {
                ctx.push_reduced(&mut out, m.z_power() + k.z + k2.z, &k2.lambda, &(c * &ab));
            }
        }
    }
    ModuleElement { ctx: ctx.clone(), terms: out }
}

/// `d_n · v` for a single generator.
pub fn act_generator(n: GeneratorIndex, v: &ModuleElement) -> ModuleElement {
    act(&Uea::generator(n), v)
}

/// The image of `u` under `M_ψ → V`, `w ↦ w_V`: that is, `u · w_V`.
pub fn map_from_universal(u: &Uea, target: &Arc<ModuleContext>) -> ModuleElement {
    act(u, &ModuleElement::cyclic(target))
}

/// `maxdeg(v)`: the largest `|λ|` with a nonzero term.
pub fn maxdeg(v: &ModuleElement) -> Degree {
    v.terms
        .keys()
        .map(|k| Degree::Finite(k.lambda.size()))
        .max()
        .unwrap_or(Degree::NegInfinity)
}

/// `max_{d_0}(v)`: the largest `λ(0)` with a nonzero term.
pub fn max_d0(v: &ModuleElement) -> Degree {
    v.terms
        .keys()
        .map(|k| Degree::Finite(k.lambda.multiplicity(0) as u64))
        .max()
        .unwrap_or(Degree::NegInfinity)
}

/// The shifted action `d_n · v = d_n v - ψ_n v`.
pub fn dot_act(n: u32, v: &ModuleElement) -> ModuleElement {
    let psi_n = v.ctx.psi.value(n as GeneratorIndex);
    act_generator(n as GeneratorIndex, v).add_scaled(v, &-psi_n)
}

/// Whether `d_1` and `d_2` (which generate `n⁺`) act on `v` through `ψ`.
/// The zero vector passes.
pub fn is_whittaker_vector(v: &ModuleElement) -> bool {
    dot_act(1, v).is_zero() && dot_act(2, v).is_zero()
}

/// `(maxdeg(v), max λ(0) over the terms of maximal degree)`
pub fn reduction_measure(v: &ModuleElement) -> (Degree, Degree) {
    let top = maxdeg(v);
    let d0 = v
        .terms
        .keys()
        .filter(|k| Degree::Finite(k.lambda.size()) == top)
        .map(|k| Degree::Finite(k.lambda.multiplicity(0) as u64))
        .max()
        .unwrap_or(Degree::NegInfinity);
    (top, d0)
}

#[derive(Debug, Clone)]
pub struct Reduction {
    /// Indices `k + 2` of the operators `d_{k+2} - ψ_{k+2}` applied, in order.
    pub trace: Vec<u32>,
    /// Measure before each step, followed by the final measure.
    pub measures: Vec<(Degree, Degree)>,
    pub result: ModuleElement,
}

/// Iteration cap `(maxdeg+1)·(max_d0+maxdeg+2)` for [`whittaker_reduce`].
pub fn reduction_cap(v: &ModuleElement) -> usize {
    let n = maxdeg(v).finite().unwrap_or(0) as usize;
    let z = max_d0(v).finite().unwrap_or(0) as usize;
    (n + 1) * (z + n + 2)
}

/// Extracts a nonzero Whittaker vector from the submodule generated by `v`.
///
/// Each step takes the smallest part `k` occurring among the terms of maximal
/// degree and applies `d_{k+2} - ψ_{k+2}`. The pair `(maxdeg, max λ(0) at
/// maxdeg)` must drop lexicographically on every step; a stall is reported
/// as an error rather than looped on.
pub fn whittaker_reduce(v: &ModuleElement) -> Result<Reduction, WhittakerError> {
    if v.is_zero() {
        return Err(WhittakerError::ZeroVector);
    }
    let cap = reduction_cap(v);
    let mut cur = v.clone();
    let mut trace = Vec::new();
    let mut measures = vec![reduction_measure(&cur)];
    while !is_whittaker_vector(&cur) {
        if trace.len() >= cap {
            return Err(WhittakerError::CapExceeded(cap));
        }
        let before = *measures.last().expect("nonempty");
        let k = cur
            .terms
            .keys()
            .filter(|key| Degree::Finite(key.lambda.size()) == before.0)
            .filter_map(|key| key.lambda.min_part())
            .min()
            .expect("a non-Whittaker vector has a term with a nonempty λ at maximal degree");
        let operator = k + 2;
        let next = dot_act(operator, &cur);
        let after = reduction_measure(&next);
        if next.is_zero() || after >= before {
            return Err(WhittakerError::MeasureNotDecreasing {
                step: trace.len(),
                operator,
                before,
                after,
            });
        }
        trace.push(operator);
        measures.push(after);
        cur = next;
    }
    Ok(Reduction { trace, measures, result: cur })
}

/// Measured nilpotency index of `d_n` (dot action) on `d_{-λ}w` in `M_ψ`, and
/// the bound `min{k : nk > |λ| + 2·#(λ)}` from the weight argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Nilpotency {
    pub index: u32,
    pub bound: u32,
}

pub fn nilpotency_bound(n: u32, lambda: &Pseudopartition) -> u32 {
    let target = lambda.size() + 2 * lambda.parts();
    (target / n as u64 + 1) as u32
}

pub fn nilpotency_index(
    psi: &WhittakerHom,
    n: u32,
    lambda: &Pseudopartition,
) -> Result<Nilpotency, WhittakerError> {
    let ctx = ModuleContext::universal(psi.clone());
    let bound = nilpotency_bound(n, lambda);
    let limit = 4 * bound + 4;
    let mut cur = ModuleElement::basis(&ctx, 0, lambda);
    let mut index = 0;
    while !cur.is_zero() {
        if index >= limit {
            return Err(WhittakerError::NotNilpotent { n, lambda: lambda.to_string(), limit });
        }
        cur = dot_act(n, &cur);
        index += 1;
    }
    Ok(Nilpotency { index, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn psi() -> WhittakerHom {
        WhittakerHom::new(ratio(3, 2), rat(-2)).unwrap()
    }

    fn lam(parts: &[u32]) -> Pseudopartition {
        Pseudopartition::from_parts(parts)
    }

    #[test]
    fn singular_psi_rejected() {
        assert!(WhittakerHom::new(rat(0), rat(1)).is_err());
        assert!(WhittakerHom::new(rat(1), rat(0)).is_err());
        assert_eq!(psi().value(3), rat(0));
        assert_eq!(psi().value(7), rat(0));
    }

    #[test]
    fn act_examples() {
        let ctx = ModuleContext::universal(psi());
        let w = ModuleElement::cyclic(&ctx);
        assert_eq!(act_generator(1, &w), w.scale(psi().psi1()));

        let v = ModuleElement::basis(&ctx, 0, &lam(&[1]));
        let want = v.scale(psi().psi2()).add_scaled(&w, &(psi().psi1() * rat(-3)));
        assert_eq!(act_generator(2, &v), want);

        let v = ModuleElement::basis(&ctx, 0, &lam(&[2]));
        let want = ModuleElement::from_terms(
            &ctx,
            [
                (0, lam(&[2]), psi().psi2().clone()),
                (0, lam(&[0]), rat(-4)),
                (1, lam(&[]), ratio(1, 2)),
            ],
        );
        assert_eq!(act_generator(2, &v), want);

        let xi = ratio(5, 7);
        let lctx = ModuleContext::central(psi(), &xi);
        let v = ModuleElement::basis(&lctx, 0, &lam(&[2]));
        let want = ModuleElement::from_terms(
            &lctx,
            [
                (0, lam(&[2]), psi().psi2().clone()),
                (0, lam(&[0]), rat(-4)),
                (0, lam(&[]), &xi / rat(2)),
            ],
        );
        assert_eq!(act_generator(2, &v), want);
    }

    #[test]
    fn degree_statistics() {
        let ctx = ModuleContext::universal(psi());
        assert_eq!(maxdeg(&ModuleElement::zero(&ctx)), Degree::NegInfinity);
        assert_eq!(maxdeg(&ModuleElement::basis(&ctx, 5, &lam(&[]))), Degree::Finite(0));
        let v = ModuleElement::basis(&ctx, 0, &lam(&[1, 2])).add(&ModuleElement::basis(&ctx, 1, &lam(&[])));
        assert_eq!(maxdeg(&v), Degree::Finite(3));

        let v = ModuleElement::basis(&ctx, 0, &lam(&[0, 0])).add(&ModuleElement::basis(&ctx, 0, &lam(&[1])));
        assert_eq!(max_d0(&v), Degree::Finite(2));
        assert_eq!(max_d0(&ModuleElement::cyclic(&ctx)), Degree::Finite(0));
        assert_eq!(max_d0(&ModuleElement::zero(&ctx)), Degree::NegInfinity);
    }

    #[test]
    fn dot_act_examples() {
        let ctx = ModuleContext::universal(psi());
        let w = ModuleElement::cyclic(&ctx);
        assert!(dot_act(1, &w).is_zero());
        let v = ModuleElement::basis(&ctx, 0, &lam(&[1]));
        assert_eq!(dot_act(1, &v), ModuleElement::basis(&ctx, 0, &lam(&[0])).scale(&rat(-2)));
        for n in 1..=5 {
            for l in [lam(&[1]), lam(&[0, 2]), lam(&[1, 1, 3])] {
                let base = dot_act(n, &ModuleElement::basis(&ctx, 0, &l));
                let shifted = dot_act(n, &ModuleElement::basis(&ctx, 3, &l));
                assert_eq!(shifted, base.mul_poly(&Poly::monomial(rat(1), 3)));
            }
        }
    }

    #[test]
    fn whittaker_vector_examples() {
        let ctx = ModuleContext::universal(psi());
        assert!(is_whittaker_vector(&ModuleElement::cyclic(&ctx)));
        assert!(is_whittaker_vector(&ModuleElement::basis(&ctx, 2, &lam(&[]))));
        assert!(!is_whittaker_vector(&ModuleElement::basis(&ctx, 0, &lam(&[1]))));
    }

    #[test]
    fn reduce_examples() {
        let xi = rat(3);
        let ctx = ModuleContext::central(psi(), &xi);
        let w = ModuleElement::cyclic(&ctx);
        let r = whittaker_reduce(&w).unwrap();
        assert!(r.trace.is_empty());
        assert_eq!(r.result, w);

        let r = whittaker_reduce(&ModuleElement::basis(&ctx, 0, &lam(&[1]))).unwrap();
        assert_eq!(r.trace, vec![3]);
        assert_eq!(r.result, w.scale(&(psi().psi2() * rat(-4))));

        let r = whittaker_reduce(&ModuleElement::basis(&ctx, 0, &lam(&[0]))).unwrap();
        assert_eq!(r.trace, vec![2]);
        assert_eq!(r.result, w.scale(&(psi().psi2() * rat(-2))));

        assert_eq!(whittaker_reduce(&ModuleElement::zero(&ctx)).unwrap_err(), WhittakerError::ZeroVector);
    }

    #[test]
    fn nilpotency_examples() {
        let p = psi();
        assert_eq!(nilpotency_index(&p, 1, &lam(&[1])).unwrap(), Nilpotency { index: 3, bound: 4 });
        assert_eq!(nilpotency_index(&p, 1, &lam(&[])).unwrap().index, 1);
        assert_eq!(nilpotency_index(&p, 4, &lam(&[1])).unwrap().index, 1);
    }

    #[test]
    fn map_from_universal_examples() {
        let p = psi();
        let xi = ratio(-2, 3);
        let lctx = ModuleContext::central(p.clone(), &xi);
        assert_eq!(map_from_universal(&Uea::one(), &lctx), ModuleElement::cyclic(&lctx));
        assert_eq!(
            map_from_universal(&Uea::z_power(2), &lctx),
            ModuleElement::cyclic(&lctx).scale(&(&xi * &xi))
        );
        let mctx = ModuleContext::universal(p.clone());
        let u = Uea::from_word(0, &[-1, 1]);
        assert_eq!(
            map_from_universal(&u, &mctx),
            ModuleElement::basis(&mctx, 0, &lam(&[1])).scale(p.psi1())
        );
    }

    #[test]
    fn display_forms() {
        let ctx = ModuleContext::universal(psi());
        let v = ModuleElement::from_terms(
            &ctx,
            [(0, lam(&[3, 3, 0]), rat(1)), (2, lam(&[]), ratio(3, 4))],
        );
        assert_eq!(v.to_string(), "d-3^2*d0*w + (3/4)*z^2*w");
        assert_eq!(ModuleElement::zero(&ctx).to_string(), "0");
        assert_eq!(ctx.descriptor(), "M");
        assert_eq!(ModuleContext::central(psi(), &ratio(5, 7)).descriptor(), "L:xi=5/7");
    }

    #[test]
    fn quotient_rejects_bad_modulus() {
        assert!(ModuleContext::quotient(psi(), Poly::from_ints(&[1, 2])).is_err());
        assert!(ModuleContext::quotient(psi(), Poly::one()).is_err());
    }
}
