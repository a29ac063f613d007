//! Exact linear algebra and the structural checks built on it.
//!
//! Everything here works on finite windows of a module (see
//! [`TruncationSpec`]), but images are always computed exactly: a window only
//! limits where solutions are searched for, never which equations are imposed.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

use crate::partitions::{enumerate_up_to, Pseudopartition};
use crate::report::Report;
use crate::scalar::{rat, Degree, Poly, Rational, ScalarError};
use crate::virasoro::{Monomial, Uea};
use crate::whittaker::{
    act, dot_act, is_whittaker_vector, max_d0, maxdeg, BasisKey, ModuleContext, ModuleElement,
    WhittakerError, WhittakerHom,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Whittaker(#[from] WhittakerError),
    #[error("λ must be a nonempty pseudopartition")]
    EmptyPseudopartition,
    #[error("expected a nonzero module element")]
    ZeroVector,
    #[error("expected a nonzero polynomial")]
    ZeroPolynomial,
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
}

/// Finite window `|λ| ≤ N`, `λ(0) ≤ Z`, `t ≤ T` of basis vectors `z^t d_{-λ} w`.
/// In a quotient by `p(z)` the `t` range is `t < deg p` and `T` is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationSpec {
    pub max_degree: u32,
    pub max_zero_count: u32,
    pub max_z_power: u32,
}

impl TruncationSpec {
    pub fn new(max_degree: u32, max_zero_count: u32, max_z_power: u32) -> Self {
        TruncationSpec { max_degree, max_zero_count, max_z_power }
    }

    pub fn pseudopartitions(&self) -> Vec<Pseudopartition> {
        enumerate_up_to(self.max_degree, self.max_zero_count)
    }

    /// Number of `z` powers kept in the given context.
    pub fn z_range(&self, ctx: &ModuleContext) -> u32 {
        ctx.z_dimension()
            .map_or(self.max_z_power + 1, |d| d as u32)
    }

    /// Basis labels in the window, ordered by `λ` then `t`.
    pub fn basis(&self, ctx: &ModuleContext) -> Vec<BasisKey> {
        let tz = self.z_range(ctx);
        self.pseudopartitions()
            .into_iter()
            .flat_map(|l| (0..tz).map(move |t| BasisKey::new(t, l.clone())))
            .collect()
    }

    fn to_json(self) -> serde_json::Value {
        json!({ "N": self.max_degree, "Z": self.max_zero_count, "T": self.max_z_power })
    }
}

/// Dense matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        RationalMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| !self.get(r, c).is_zero() && !v[c].is_zero())
                    .fold(Rational::zero(), |acc, c| acc + self.get(r, c) * &v[c])
            })
            .collect()
    }

    /// Reduced row echelon form and the pivot columns, pivots chosen left to
    /// right with the first nonzero row below the current one.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let cols = m.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == m.rows {
                break;
            }
            let Some(src) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if src != row {
                for c in 0..cols {
                    m.data.swap(src * cols + c, row * cols + c);
                }
            }
            let inv = m.get(row, col).recip();
            for c in col..cols {
                let idx = row * cols + c;
                if !m.data[idx].is_zero() {
                    m.data[idx] = &m.data[idx] * &inv;
                }
            }
            let pivot_row: Vec<(usize, Rational)> = (col..cols)
                .filter(|&c| !m.get(row, c).is_zero())
                .map(|c| (c, m.get(row, c).clone()))
                .collect();
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (c, v) in &pivot_row {
                    let idx = r * cols + c;
                    m.data[idx] = &m.data[idx] - &factor * v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column, with a 1 in that
    /// column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, free).clone();
                }
                v
            })
            .collect()
    }
}

/// Incrementally maintained echelon basis of sparse vectors.
#[derive(Debug, Clone)]
pub struct SpanBuilder<K: Ord + Clone> {
    rows: Vec<(K, BTreeMap<K, Rational>)>,
}

impl<K: Ord + Clone> Default for SpanBuilder<K> {
    fn default() -> Self {
        SpanBuilder { rows: Vec::new() }
    }
}

impl<K: Ord + Clone> SpanBuilder<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` after elimination against the current rows.
    pub fn reduce(&self, v: &BTreeMap<K, Rational>) -> BTreeMap<K, Rational> {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            let Some(c) = v.get(pivot).cloned() else { continue };
            for (k, a) in row {
                let e = v.entry(k.clone()).or_insert_with(Rational::zero);
                *e -= &c * a;
                if e.is_zero() {
                    v.remove(k);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &BTreeMap<K, Rational>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &BTreeMap<K, Rational>) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.recip();
        let row = r.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        self.rows.push((pivot, row));
        true
    }
}

fn sparse(v: &ModuleElement) -> BTreeMap<BasisKey, Rational> {
    v.terms().map(|(k, c)| (k.clone(), c.clone())).collect()
}

/// Dimension of the span of a family of module elements.
pub fn span_rank<'a>(vectors: impl IntoIterator<Item = &'a ModuleElement>) -> usize {
    let mut span = SpanBuilder::new();
    for v in vectors {
        span.insert(&sparse(v));
    }
    span.dimension()
}

/// Nullspace of the matrix whose columns are `columns`, by forward
/// elimination that tracks each residual as a combination of columns.
///
/// Returns the same basis as [`RationalMatrix::nullspace`]: one vector per
/// column that depends on the columns before it, with a 1 there and zeros
/// at the other dependent columns.
pub fn sparse_nullspace<K: Ord + Clone>(columns: &[BTreeMap<K, Rational>]) -> Vec<Vec<Rational>> {
    // (pivot, row scaled to 1 at pivot, combination of columns giving the row)
    let mut rows: Vec<(K, BTreeMap<K, Rational>, BTreeMap<usize, Rational>)> = Vec::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        let mut combo = BTreeMap::from([(j, Rational::one())]);
        for (pivot, row, rc) in &rows {
            let Some(c) = v.get(pivot).cloned() else { continue };
            axpy(&mut v, &c, row);
            axpy(&mut combo, &c, rc);
        }
        match v.iter().next_back().map(|(k, c)| (k.clone(), c.recip())) {
            Some((pivot, inv)) => {
                v.values_mut().for_each(|x| *x *= &inv);
                combo.values_mut().for_each(|x| *x *= &inv);
                rows.push((pivot, v, combo));
            }
            None => {
                let mut dense = vec![Rational::zero(); columns.len()];
                for (i, c) in combo {
                    dense[i] = c;
                }
                kernel.push(dense);
            }
        }
    }
    kernel
}

/// `v -= c·row`
fn axpy<K: Ord + Clone>(v: &mut BTreeMap<K, Rational>, c: &Rational, row: &BTreeMap<K, Rational>) {
    for (k, a) in row {
        let e = v.entry(k.clone()).or_insert_with(Rational::zero);
        *e -= c * a;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

/// Nullspace of `v ↦ (dot_act(1, v), dot_act(2, v))` over the given columns.
fn whittaker_nullspace(columns: &[ModuleElement]) -> Vec<Vec<Rational>> {
    let images: Vec<BTreeMap<(u32, BasisKey), Rational>> = columns
        .iter()
        .map(|v| {
            [1u32, 2]
                .into_iter()
                .flat_map(|n| dot_act(n, v).terms().map(move |(k, c)| ((n, k.clone()), c.clone())).collect::<Vec<_>>())
                .collect()
        })
        .collect();
    sparse_nullspace(&images)
}

/// Basis of the Whittaker vectors lying in the truncated span.
pub fn whittaker_solve(ctx: &Arc<ModuleContext>, trunc: &TruncationSpec) -> Vec<ModuleElement> {
    let basis = trunc.basis(ctx);
    let columns: Vec<ModuleElement> = basis
        .iter()
        .map(|k| ModuleElement::basis(ctx, k.z, &k.lambda))
        .collect();
    whittaker_nullspace(&columns)
        .into_iter()
        .map(|coeffs| {
            ModuleElement::from_terms(
                ctx,
                basis
                    .iter()
                    .zip(coeffs)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k.z, k.lambda.clone(), c)),
            )
        })
        .collect()
}

fn psi_params(report: Report, psi: &WhittakerHom) -> Report {
    report
        .param("psi1", psi.psi1().to_string())
        .param("psi2", psi.psi2().to_string())
}

fn degree_json(d: Degree) -> serde_json::Value {
    match d {
        Degree::NegInfinity => json!("-inf"),
        Degree::Finite(n) => json!(n),
    }
}

/// `[d_{k+2}, d_{-k}^a] w = v - a(2k+2)ψ₂ d_{-k}^{a-1} w` with
/// `maxdeg(v) < k(a-1)` for `k > 0` and `max_{d_0}(v) < a-1` for `k = 0`.
pub fn verify_lemma_3_1(k: u32, a: u32, psi: &WhittakerHom) -> Report {
    let ctx = ModuleContext::universal(psi.clone());
    let lam = Pseudopartition::from_exponents(&[(k, a)]);
    let lower = Pseudopartition::from_exponents(&[(k, a.saturating_sub(1))]);
    // (d_{k+2} - ψ_{k+2}) u w = [d_{k+2}, u] w
    let lhs = dot_act(k + 2, &ModuleElement::basis(&ctx, 0, &lam));
    let expected = psi.psi2() * rat(-(a as i64) * (2 * k as i64 + 2));
    let leading = ModuleElement::basis(&ctx, 0, &lower).scale(&expected);
    let remainder = lhs.sub(&leading);
    let observed = lhs.coeff(0, &lower);

    let mut report = psi_params(Report::new("leading_term").param("k", k).param("a", a), psi);
    report.witness("lhs", lhs.to_string());
    report.witness("leading", leading.to_string());
    report.witness("remainder", remainder.to_string());
    report.witness("leading_coefficient", observed.to_string());
    report.require("leading_coefficient_matches", observed == expected);
    if k > 0 {
        let bound = k as i64 * (a as i64 - 1);
        report.witness("remainder_maxdeg", degree_json(maxdeg(&remainder)));
        report.witness("maxdeg_bound", bound);
        report.require("remainder_bound", maxdeg(&remainder).lt_int(bound));
    } else {
        let bound = a as i64 - 1;
        report.witness("remainder_max_d0", degree_json(max_d0(&remainder)));
        report.witness("max_d0_bound", bound);
        report.require("remainder_bound", max_d0(&remainder).lt_int(bound));
    }
    report
}

/// Degree bound `maxdeg([d_m, d_{-λ}] w) ≤ |λ| - m + 2`, and, when `m = k+2`
/// for the smallest part `k`, the leading-term form of the bracket.
pub fn verify_degree_bounds(
    m: u32,
    lambda: &Pseudopartition,
    psi: &WhittakerHom,
) -> Result<Report, AnalysisError> {
    let k = lambda.min_part().ok_or(AnalysisError::EmptyPseudopartition)?;
    let ctx = ModuleContext::universal(psi.clone());
    let size = lambda.size() as i64;
    let lhs = dot_act(m, &ModuleElement::basis(&ctx, 0, lambda));
    let bound = size - m as i64 + 2;

    let mut report = psi_params(
        Report::new("degree_bounds")
            .param("m", m)
            .param("lambda", lambda.to_string()),
        psi,
    );
    report.witness("bracket", lhs.to_string());
    report.witness("maxdeg", degree_json(maxdeg(&lhs)));
    report.witness("bound", bound);
    report.require("part_i", maxdeg(&lhs).le_int(bound));

    if m == k + 2 {
        let reduced = lambda.without_part(k).expect("k is a part");
        let coeff = psi.psi2() * rat(-(lambda.multiplicity(k) as i64) * (2 * k as i64 + 2));
        let leading = ModuleElement::basis(&ctx, 0, &reduced).scale(&coeff);
        let v = lhs.sub(&leading);
        let top = size - k as i64;
        let ok = if k > 0 {
            maxdeg(&v).lt_int(top)
        } else {
            // v = v' + v'' with maxdeg(v') < |λ| and max_{d_0}(v'') < λ(0) - 1
            let d0_bound = lambda.multiplicity(0) as i64 - 1;
            v.terms().all(|(key, _)| {
                (key.lambda.size() as i64) < top || (key.lambda.multiplicity(0) as i64) < d0_bound
            })
        };
        report.witness("leading", leading.to_string());
        report.witness("remainder", v.to_string());
        report.require("part_ii", ok);
    }
    Ok(report)
}

/// `d_n · (z^i d_{-λ} w)` lies in the span of `z^j d_{-μ} w` with
/// `|μ| + μ(0) ≤ |λ| + λ(0)` and `j ∈ {i, i+1}`, and vanishes for `n > |λ| + 2`.
pub fn verify_dot_span(n: u32, i: u32, lambda: &Pseudopartition, psi: &WhittakerHom) -> Report {
    let ctx = ModuleContext::universal(psi.clone());
    let image = dot_act(n, &ModuleElement::basis(&ctx, i, lambda));
    let cap = lambda.size() + lambda.multiplicity(0) as u64;
    let in_span = image.terms().all(|(k, _)| {
        k.lambda.size() + k.lambda.multiplicity(0) as u64 <= cap && (k.z == i || k.z == i + 1)
    });
    let vanishing_required = n as u64 > lambda.size() + 2;

    let mut report = psi_params(
        Report::new("dot_span")
            .param("n", n)
            .param("i", i)
            .param("lambda", lambda.to_string()),
        psi,
    );
    report.witness("image", image.to_string());
    report.require("span", in_span);
    if vanishing_required {
        report.require("vanishes", image.is_zero());
    }
    report
}

/// Result of closing `v` under the dot action of `n⁺`.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub dimension: usize,
    pub spanning: Vec<ModuleElement>,
}

/// Dimension of `U(n⁺) · v` under the dot action. Only `d_n` with
/// `n ≤ maxdeg + 2` are applied; larger `n` act by zero on the orbit.
pub fn dot_orbit_dimension(v: &ModuleElement) -> Result<Orbit, AnalysisError> {
    if v.is_zero() {
        return Err(AnalysisError::ZeroVector);
    }
    let mut span = SpanBuilder::new();
    span.insert(&sparse(v));
    let mut spanning = vec![v.clone()];
    let mut next = 0;
    while next < spanning.len() {
        let x = spanning[next].clone();
        next += 1;
        let top = maxdeg(&x).finite().unwrap_or(0) as u32;
        for n in 1..=top + 2 {
            let image = dot_act(n, &x);
            if !image.is_zero() && span.insert(&sparse(&image)) {
                spanning.push(image);
            }
        }
    }
    Ok(Orbit { dimension: span.dimension(), spanning })
}

/// One summand `V_j = U(V) w_j` of the decomposition.
#[derive(Debug, Clone)]
pub struct Component {
    pub root: Rational,
    pub multiplicity: u32,
    /// `p_j(z) = Π_{i≠j} (z - ξ_i)^{a_i}`
    pub cofactor: Poly,
    /// `q_j(z)` with `Σ q_j p_j = 1`, reduced modulo `(z - ξ_j)^{a_j}`.
    pub bezout: Poly,
    /// `w_j = p_j(z) w`
    pub generator: ModuleElement,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub modulus: Poly,
    pub components: Vec<Component>,
    pub report: Report,
}

/// Bézout cofactors `q_j` with `Σ q_j p_j = 1` for pairwise coprime-cofactor
/// families, each reduced modulo `moduli[j]`.
fn bezout_family(cofactors: &[Poly], moduli: &[Poly]) -> Result<Vec<Poly>, ScalarError> {
    if cofactors.len() == 1 {
        return Ok(vec![Poly::one()]);
    }
    let mut coeffs = vec![Poly::one()];
    let mut g = cofactors[0].clone();
    for p in &cofactors[1..] {
        let (g2, s, t) = Poly::ext_gcd(&g, p)?;
        for c in coeffs.iter_mut() {
            *c = &*c * &s;
        }
        coeffs.push(t);
        g = g2;
    }
    coeffs
        .iter()
        .zip(moduli)
        .map(|(q, m)| q.rem(m))
        .collect()
}

/// Default window for the dimension checks of [`decompose`].
pub const DECOMPOSE_TRUNCATION: TruncationSpec = TruncationSpec { max_degree: 3, max_zero_count: 1, max_z_power: 0 };

/// Splits `M_ψ / U(V)p(z)w` into the summands generated by `p_j(z) w`.
pub fn decompose(psi: &WhittakerHom, p: &Poly) -> Result<Decomposition, AnalysisError> {
    decompose_with(psi, p, &DECOMPOSE_TRUNCATION)
}

pub fn decompose_with(
    psi: &WhittakerHom,
    p: &Poly,
    trunc: &TruncationSpec,
) -> Result<Decomposition, AnalysisError> {
    let factors = p.linear_factorization()?;
    let ctx = ModuleContext::quotient(psi.clone(), p.clone())?;
    let powers: Vec<Poly> = factors
        .iter()
        .map(|(r, a)| Poly::linear(r).pow(*a))
        .collect();
    let cofactors: Vec<Poly> = (0..factors.len())
        .map(|j| {
            powers
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .fold(Poly::one(), |acc, (_, q)| &acc * q)
        })
        .collect();
    let bezout = bezout_family(&cofactors, &powers)?;
    let w = ModuleElement::cyclic(&ctx);
    let components: Vec<Component> = factors
        .iter()
        .zip(&cofactors)
        .zip(&bezout)
        .map(|(((root, a), pj), qj)| Component {
            root: root.clone(),
            multiplicity: *a,
            cofactor: pj.clone(),
            bezout: qj.clone(),
            generator: w.mul_poly(pj),
        })
        .collect();

    let mut report = psi_params(
        Report::new("decompose").param("p", p.to_string()).param("truncation", trunc.to_json()),
        psi,
    );
    let sum = components
        .iter()
        .fold(Poly::zero(), |acc, c| &acc + &(&c.bezout * &c.cofactor));
    report.require("bezout_identity", sum == Poly::one());

    let mut cross = true;
    let mut idempotent = true;
    let mut lengths = true;
    for (i, ci) in components.iter().enumerate() {
        for (j, cj) in components.iter().enumerate() {
            if i != j {
                cross &= ci.generator.mul_poly(&cj.cofactor).is_zero();
            }
        }
        let projected = ci.generator.mul_poly(&(&ci.bezout * &ci.cofactor));
        idempotent &= projected == ci.generator;
        // Ann_{S(z)}(w_j) = (z - ξ_j)^{a_j}, so V_j has composition length a_j
        let lin = Poly::linear(&ci.root);
        lengths &= ci.generator.mul_poly(&lin.pow(ci.multiplicity)).is_zero();
        lengths &= !ci.generator.mul_poly(&lin.pow(ci.multiplicity - 1)).is_zero();
    }
    report.require("cross_annihilation", cross);
    report.require("projection_idempotence", idempotent);
    report.require("composition_lengths", lengths);

    // Truncated dimension count: the window of V splits as the windows of the V_j.
    let lambdas = trunc.pseudopartitions();
    let tdim = p.deg_or_zero() as u32;
    let full = lambdas.len() * tdim as usize;
    let mut joint = SpanBuilder::new();
    let mut per_component = Vec::new();
    let mut dims_ok = true;
    for c in &components {
        let mut own = SpanBuilder::new();
        for l in &lambdas {
            for t in 0..tdim {
                let v = sparse(&act(&Uea::from_monomial(Monomial::from_pseudopartition(t, l), Rational::one()), &c.generator));
                own.insert(&v);
                joint.insert(&v);
            }
        }
        let expected = lambdas.len() * c.multiplicity as usize;
        dims_ok &= own.dimension() == expected;
        per_component.push(own.dimension());
    }
    dims_ok &= per_component.iter().sum::<usize>() == full && joint.dimension() == full;
    report.witness("dimension_full", full);
    report.witness("dimension_components", per_component);
    report.witness("dimension_joint", joint.dimension());
    report.require("dimensions_add", dims_ok);

    report.witness(
        "components",
        components
            .iter()
            .map(|c| {
                json!({
                    "root": c.root.to_string(),
                    "multiplicity": c.multiplicity,
                    "cofactor": c.cofactor.to_string(),
                    "bezout": c.bezout.to_string(),
                    "generator": c.generator.to_string(),
                    "composition_length": c.multiplicity,
                })
            })
            .collect::<Vec<_>>(),
    );
    Ok(Decomposition { modulus: p.clone(), components, report })
}

/// Dimension of the Whittaker vectors of the layer `V_i / V_{i+1}` in
/// `V = M_ψ / U(V)(z-ξ)^a w`, searched over the window's `λ`.
///
/// Elements of `V_i` are written in powers of `y = z - ξ`; a vector of the
/// layer is `Σ c_λ y^i d_{-λ} w`, and it is Whittaker modulo `V_{i+1}` when the
/// `y^i` coefficients of both dot images vanish.
pub fn layer_whittaker_dimension(ctx: &Arc<ModuleContext>, xi: &Rational, layer: u32, trunc: &TruncationSpec) -> usize {
    let shift = Poly::linear(xi).pow(layer);
    let lambdas = trunc.pseudopartitions();
    let images: Vec<BTreeMap<(u32, Pseudopartition), Rational>> = lambdas
        .iter()
        .map(|l| {
            let v = ModuleElement::basis(ctx, 0, l).mul_poly(&shift);
            let mut image = BTreeMap::new();
            for n in [1u32, 2] {
                for (mu, poly) in dot_act(n, &v).coefficient_polys() {
                    let y = poly.taylor_shift(xi);
                    debug_assert!((0..layer as usize).all(|s| y.coeff(s).is_zero()));
                    let c = y.coeff(layer as usize);
                    if !c.is_zero() {
                        image.insert((n, mu), c);
                    }
                }
            }
            image
        })
        .collect();
    sparse_nullspace(&images).len()
}

/// Default window for the strict-inclusion checks of [`composition_series`].
pub const SERIES_TRUNCATION: TruncationSpec = TruncationSpec { max_degree: 4, max_zero_count: 2, max_z_power: 0 };

#[derive(Debug, Clone)]
pub struct Series {
    /// `w_i = (z - ξ)^i w` for `i = 0..=a`.
    pub generators: Vec<ModuleElement>,
    pub quotient_whittaker_dims: Vec<usize>,
    pub report: Report,
}

pub fn composition_series(psi: &WhittakerHom, xi: &Rational, a: u32) -> Result<Series, AnalysisError> {
    composition_series_with(psi, xi, a, &SERIES_TRUNCATION)
}

/// The chain `V = V_0 ⊃ V_1 ⊃ ... ⊃ V_a = 0`, `V_i = U(V)(z-ξ)^i w`, in
/// `M_ψ / U(V)(z-ξ)^a w`.
pub fn composition_series_with(
    psi: &WhittakerHom,
    xi: &Rational,
    a: u32,
    trunc: &TruncationSpec,
) -> Result<Series, AnalysisError> {
    if a == 0 {
        return Err(AnalysisError::ZeroMultiplicity);
    }
    let lin = Poly::linear(xi);
    let ctx = ModuleContext::quotient(psi.clone(), lin.pow(a))?;
    let w = ModuleElement::cyclic(&ctx);
    let generators: Vec<ModuleElement> = (0..=a).map(|i| w.mul_poly(&lin.pow(i))).collect();

    let mut report = psi_params(
        Report::new("composition_series")
            .param("xi", xi.to_string())
            .param("a", a)
            .param("truncation", trunc.to_json()),
        psi,
    );
    let nonzero = generators[..a as usize].iter().all(|g| !g.is_zero());
    report.require("generators_nonzero", nonzero);
    report.require("last_generator_zero", generators[a as usize].is_zero());

    let lambdas = trunc.pseudopartitions();
    let mut strict = true;
    for i in 0..a as usize {
        let mut below = SpanBuilder::new();
        for l in &lambdas {
            for t in 0..a {
                let u = Uea::from_monomial(Monomial::from_pseudopartition(t, l), Rational::one());
                below.insert(&sparse(&act(&u, &generators[i + 1])));
            }
        }
        strict &= !below.contains(&sparse(&generators[i]));
    }
    report.require("strictly_decreasing", strict);

    let dims: Vec<usize> = (0..a)
        .map(|i| layer_whittaker_dimension(&ctx, xi, i, trunc))
        .collect();
    report.witness("quotient_whittaker_dimensions", dims.clone());
    report.require("quotients_simple", dims.iter().all(|&d| d == 1));
    report.witness(
        "generators",
        generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
    );
    Ok(Series { generators, quotient_whittaker_dims: dims, report })
}

/// `u = u0·p(z) + Σ_i u_i·(d_i - ψ_i) + residual`, residual in
/// `span{z^t d_{-λ} : t < deg p}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorForm {
    pub u0: Uea,
    pub tail: Vec<(u32, Uea)>,
    pub residual: Uea,
}

impl AnnihilatorForm {
    /// Multiplies the pieces back together in `U(V)`.
    pub fn expand(&self, psi: &WhittakerHom, p: &Poly) -> Uea {
        let mut out = self.u0.multiply(&Uea::from_poly(p));
        for (i, ui) in &self.tail {
            let shifted = &Uea::generator(*i as i64) - &Uea::constant(psi.value(*i as i64));
            out = &out + &ui.multiply(&shifted);
        }
        &out + &self.residual
    }
}

/// Normal form of `u` with respect to `U(V)p(z) + Σ_{i>0} U(V)(d_i - ψ_i)`.
///
/// Rightmost positive modes are peeled as `d_j = (d_j - ψ_j) + ψ_j`, then the
/// remaining `z` powers are divided by `p`.
pub fn annihilator_normal_form(
    u: &Uea,
    psi: &WhittakerHom,
    p: &Poly,
) -> Result<AnnihilatorForm, AnalysisError> {
    if !p.is_monic() || p.deg_or_zero() == 0 {
        return Err(WhittakerError::BadModulus(p.to_string()).into());
    }
    let mut work: BTreeMap<Monomial, Rational> = u.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    let mut tail: BTreeMap<u32, Uea> = BTreeMap::new();
    let mut u0 = Uea::zero();
    let mut residual = Uea::zero();
    // Longest words first so that peeled prefixes are merged before processing.
    while let Some(m) = work.keys().max_by_key(|m| m.word().len()).cloned() {
        let c = work.remove(&m).expect("present");
        if c.is_zero() {
            continue;
        }
        match m.word().last() {
            Some(&j) if j > 0 => {
                let prefix = Monomial::new(m.z_power(), m.word()[..m.word().len() - 1].to_vec())
                    .expect("prefix of an ordered word is ordered");
                tail.entry(j as u32)
                    .or_default()
                    .add_term(prefix.clone(), c.clone());
                let psi_j = psi.value(j);
                if !psi_j.is_zero() {
                    let e = work.entry(prefix).or_insert_with(Rational::zero);
                    *e += c * psi_j;
                }
            }
            _ => {
                let (q, r) = Poly::monomial(Rational::one(), m.z_power() as usize).divmod(p)?;
                let base = Monomial::new(0, m.word().to_vec()).expect("ordered");
                let unit = Uea::from_monomial(base, c);
                u0 = &u0 + &Uea::from_poly(&q).multiply(&unit);
                residual = &residual + &Uea::from_poly(&r).multiply(&unit);
            }
        }
    }
    Ok(AnnihilatorForm {
        u0,
        tail: tail.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        residual,
    })
}

/// Checks that `{z^t d_{-λ} q(z) w}` over the window is linearly independent
/// in `M_ψ`, i.e. `U(V) q(z) w` is free on the same basis shape.
pub fn verify_submodule_free(
    psi: &WhittakerHom,
    q: &Poly,
    trunc: &TruncationSpec,
) -> Result<Report, AnalysisError> {
    if q.is_zero() {
        return Err(AnalysisError::ZeroPolynomial);
    }
    let ctx = ModuleContext::universal(psi.clone());
    let qw = ModuleElement::poly_times_cyclic(&ctx, q);
    let mut span = SpanBuilder::new();
    let mut count = 0usize;
    for key in trunc.basis(&ctx) {
        let u = Uea::from_monomial(Monomial::from_pseudopartition(key.z, &key.lambda), Rational::one());
        span.insert(&sparse(&act(&u, &qw)));
        count += 1;
    }
    let mut report = psi_params(
        Report::new("submodule_free")
            .param("q", q.to_string())
            .param("truncation", trunc.to_json()),
        psi,
    );
    report.witness("vectors", count);
    report.witness("rank", span.dimension());
    report.require("independent", span.dimension() == count);
    report.require("generator_is_whittaker", is_whittaker_vector(&qw));
    Ok(report)
}

/// Report wrapper around [`whittaker_solve`] comparing against an expected
/// dimension when one is given.
pub fn solve_report(ctx: &Arc<ModuleContext>, trunc: &TruncationSpec, expected: Option<usize>) -> (Vec<ModuleElement>, Report) {
    let basis = whittaker_solve(ctx, trunc);
    let mut report = psi_params(
        Report::new("whittaker_solve")
            .param("module", ctx.descriptor())
            .param("truncation", trunc.to_json()),
        ctx.psi(),
    );
    report.witness("dimension", basis.len());
    report.witness("basis", basis.iter().map(ToString::to_string).collect::<Vec<_>>());
    if let Some(e) = expected {
        report.require("dimension_matches", basis.len() == e);
    }
    (basis, report)
}
