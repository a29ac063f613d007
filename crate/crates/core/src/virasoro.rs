//! The Virasoro algebra and its universal enveloping algebra.
//!
//! Elements of `U(V)` are kept in PBW normal form: each monomial is
//! `z^t d_{i_1} d_{i_2} ... d_{i_s}` with `i_1 <= i_2 <= ... <= i_s`. The
//! non-positive indices form `d_{-λ}` for a pseudopartition `λ` and the
//! positive ones form `d_μ` for a partition `μ`, so the ordering matches
//! `U(b⁻) ⊗ U(n⁺)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::partitions::Pseudopartition;
use crate::scalar::{join_signed_terms, rat, ratio, Poly, Rational};

/// Index `k` of the generator `d_k`.
pub type GeneratorIndex = i64;

/// PBW basis monomial `z^z_power d_{word[0]} ... d_{word[s-1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    z_power: u32,
    word: Vec<GeneratorIndex>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { z_power: 0, word: Vec::new() }
    }

    /// Builds a monomial from an already ordered word. Returns `None` if the
    /// word has an inversion.
    pub fn new(z_power: u32, word: Vec<GeneratorIndex>) -> Option<Self> {
        word.windows(2)
            .all(|p| p[0] <= p[1])
            .then_some(Monomial { z_power, word })
    }

    /// `z^t d_{-λ}`
    pub fn from_pseudopartition(z_power: u32, lambda: &Pseudopartition) -> Self {
        let word = lambda
            .parts_ascending()
            .into_iter()
            .rev()
            .map(|k| -(k as GeneratorIndex))
            .collect();
        Monomial { z_power, word }
    }

    pub fn z_power(&self) -> u32 {
        self.z_power
    }

    pub fn word(&self) -> &[GeneratorIndex] {
        &self.word
    }

    /// Sum of the generator indices; `z` has weight zero.
    pub fn weight(&self) -> i64 {
        self.word.iter().sum()
    }

    /// `λ` of the non-positive part `d_{-λ}`.
    pub fn lower_part(&self) -> Pseudopartition {
        let parts: Vec<u32> = self
            .word
            .iter()
            .take_while(|&&k| k <= 0)
            .map(|&k| (-k) as u32)
            .collect();
        Pseudopartition::from_parts(&parts)
    }

    /// Positive indices, ascending: the partition `μ` of `d_μ`.
    pub fn upper_part(&self) -> &[GeneratorIndex] {
        let split = self.word.partition_point(|&k| k <= 0);
        &self.word[split..]
    }

    /// True when the monomial lies in `U(b⁻)`.
    pub fn in_lower_borel(&self) -> bool {
        self.word.last().is_none_or(|&k| k <= 0)
    }

    fn shifted(&self, dz: u32) -> Self {
        Monomial { z_power: self.z_power + dz, word: self.word.clone() }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        match self.z_power {
            0 => {}
            1 => factors.push("z".to_string()),
            t => factors.push(format!("z^{t}")),
        }
        factors.extend(fmt_word_runs(&self.word));
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join("*"))
        }
    }
}

/// Renders a word with consecutive repeats folded into powers: `d-1^2`.
pub(crate) fn fmt_word_runs(word: &[GeneratorIndex]) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let k = word[i];
        let mut j = i;
        while j < word.len() && word[j] == k {
            j += 1;
        }
        let run = j - i;
        out.push(if run == 1 { format!("d{k}") } else { format!("d{k}^{run}") });
        i = j;
    }
    out
}

/// Display order: longer words first, then by word, then by `z` power.
fn display_order(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    b.word
        .len()
        .cmp(&a.word.len())
        .then_with(|| a.word.cmp(&b.word))
        .then_with(|| a.z_power.cmp(&b.z_power))
}

/// Element of `U(V)` in PBW normal form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Uea {
    terms: BTreeMap<Monomial, Rational>,
}

impl Uea {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_monomial(Monomial::one(), c)
    }

    /// `d_k`
    pub fn generator(k: GeneratorIndex) -> Self {
        Self::from_monomial(Monomial { z_power: 0, word: vec![k] }, Rational::one())
    }

    /// `z^t`
    pub fn z_power(t: u32) -> Self {
        Self::from_monomial(Monomial { z_power: t, word: Vec::new() }, Rational::one())
    }

    /// `p(z)` as an element of `U(V)`.
    pub fn from_poly(p: &Poly) -> Self {
        let mut out = Self::zero();
        for (t, c) in p.coeffs().iter().enumerate() {
            out.add_term(Monomial { z_power: t as u32, word: Vec::new() }, c.clone());
        }
        out
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    /// Straightens an arbitrary (unordered) word times `z^z_power`.
    pub fn from_word(z_power: u32, word: &[GeneratorIndex]) -> Self {
        straighten_word(word).shift_z(z_power)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
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

    pub fn add_scaled(&mut self, other: &Uea, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Multiplies by `z^dz`.
    pub fn shift_z(&self, dz: u32) -> Self {
        if dz == 0 {
            return self.clone();
        }
        Uea {
            terms: self.terms.iter().map(|(m, c)| (m.shifted(dz), c.clone())).collect(),
        }
    }

    /// Weight of the element if all terms share one weight.
    pub fn homogeneous_weight(&self) -> Option<i64> {
        let mut weights = self.terms.keys().map(Monomial::weight);
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    /// True if no monomial has a positive-index generator.
    pub fn in_lower_borel(&self) -> bool {
        self.terms.keys().all(Monomial::in_lower_borel)
    }

    /// Product in `U(V)`, returned in normal form.
    pub fn multiply(&self, other: &Uea) -> Uea {
        let mut out = Uea::zero();
        let mut word = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                word.clear();
                word.extend_from_slice(&m1.word);
                word.extend_from_slice(&m2.word);
                let c = c1 * c2;
                let dz = m1.z_power + m2.z_power;
                for (m, a) in &straighten_word(&word).terms {
                    out.add_term(m.shifted(dz), a * &c);
                }
            }
        }
        out
    }

    /// `[self, other] = self*other - other*self`
    pub fn commutator(&self, other: &Uea) -> Uea {
        &self.multiply(other) - &other.multiply(self)
    }
}

impl Add for &Uea {
    type Output = Uea;
    fn add(self, rhs: &Uea) -> Uea {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &Uea {
    type Output = Uea;
    fn sub(self, rhs: &Uea) -> Uea {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &Uea {
    type Output = Uea;
    fn neg(self) -> Uea {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Uea {
    type Output = Uea;
    fn mul(self, rhs: &Uea) -> Uea {
        self.multiply(rhs)
    }
}

impl fmt::Display for Uea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| display_order(a.0, b.0));
        let rendered = terms.into_iter().map(|(m, c)| {
            let mono = if m.z_power == 0 && m.word.is_empty() { String::new() } else { m.to_string() };
            (c.clone(), mono)
        });
        f.write_str(&join_signed_terms(rendered))
    }
}

/// The central coefficient `(k³ - k)/12` of `[d_k, d_{-k}]`.
pub fn central_coefficient(k: GeneratorIndex) -> Rational {
    ratio(k * k * k - k, 12)
}

/// `[d_i, d_j] = (j - i) d_{i+j} + δ_{i+j,0} (i³ - i)/12 z`
pub fn bracket(i: GeneratorIndex, j: GeneratorIndex) -> Uea {
    let mut out = Uea::zero();
    out.add_term(Monomial { z_power: 0, word: vec![i + j] }, rat(j - i));
    if i + j == 0 {
        out.add_term(Monomial { z_power: 1, word: Vec::new() }, central_coefficient(i));
    }
    out
}

type StraightenCache = RwLock<HashMap<Vec<GeneratorIndex>, Uea>>;

fn cache() -> &'static StraightenCache {
    static CACHE: OnceLock<StraightenCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Rewrites a product of generators into PBW normal form by repeatedly
/// swapping the leftmost adjacent inversion `d_a d_b` (`a > b`) into
/// `d_b d_a + [d_a, d_b]`. Results are memoized per word.
pub fn straighten_word(word: &[GeneratorIndex]) -> Uea {
    let Some(i) = word.windows(2).position(|p| p[0] > p[1]) else {
        return Uea::from_monomial(Monomial { z_power: 0, word: word.to_vec() }, Rational::one());
    };
    if let Some(hit) = cache().read().expect("straighten cache poisoned").get(word) {
        return hit.clone();
    }
    let (a, b) = (word[i], word[i + 1]);

    let mut swapped = word.to_vec();
    swapped.swap(i, i + 1);
    let mut out = straighten_word(&swapped);

    let mut merged = Vec::with_capacity(word.len() - 1);
    merged.extend_from_slice(&word[..i]);
    merged.push(a + b);
    merged.extend_from_slice(&word[i + 2..]);
    out.add_scaled(&straighten_word(&merged), &rat(b - a));

    if a + b == 0 {
        let central = central_coefficient(a);
        if !central.is_zero() {
            let mut dropped = Vec::with_capacity(word.len() - 2);
            dropped.extend_from_slice(&word[..i]);
            dropped.extend_from_slice(&word[i + 2..]);
            out.add_scaled(&straighten_word(&dropped).shift_z(1), &central);
        }
    }

    cache()
        .write()
        .expect("straighten cache poisoned")
        .insert(word.to_vec(), out.clone());
    out
}

/// Straightens a formal linear combination of `coeff * z^t * word` products.
pub fn straighten<'a>(
    terms: impl IntoIterator<Item = (&'a Rational, u32, &'a [GeneratorIndex])>,
) -> Uea {
    let mut out = Uea::zero();
    for (c, t, word) in terms {
        out.add_scaled(&Uea::from_word(t, word), c);
    }
    out
}

/// `ad_{d_n}^k (u)`, the k-fold bracket of `d_n` against `u`.
pub fn ad_power(n: GeneratorIndex, k: u32, u: &Uea) -> Uea {
    let dn = Uea::generator(n);
    let mut cur = u.clone();
    for _ in 0..k {
        if cur.is_zero() {
            break;
        }
        cur = dn.commutator(&cur);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(k: i64) -> Uea {
        Uea::generator(k)
    }

    fn mono(t: u32, word: &[i64]) -> Uea {
        Uea::from_monomial(Monomial::new(t, word.to_vec()).unwrap(), Rational::one())
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(1, -1), d(0).scale(&rat(-2)));
        let expected = &d(0).scale(&rat(-4)) + &Uea::z_power(1).scale(&ratio(1, 2));
        assert_eq!(bracket(2, -2), expected);
        for k in -5..=5 {
            assert_eq!(bracket(0, k), d(k).scale(&rat(k)));
        }
    }

    #[test]
    fn straighten_examples() {
        let got = Uea::from_word(0, &[1, -1]);
        let want = &mono(0, &[-1, 1]) - &d(0).scale(&rat(2));
        assert_eq!(got, want);

        let got = Uea::from_word(0, &[2, -2]);
        let want = &(&mono(0, &[-2, 2]) - &d(0).scale(&rat(4))) + &Uea::z_power(1).scale(&ratio(1, 2));
        assert_eq!(got, want);
        assert_eq!(got.to_string(), "d-2*d2 - 4*d0 + (1/2)*z");

        assert_eq!(Uea::from_word(0, &[-2, 0, 3]), mono(0, &[-2, 0, 3]));
    }

    #[test]
    fn multiply_examples() {
        let u = &d(3) + &mono(1, &[-1, 2]);
        assert_eq!(Uea::one().multiply(&u), u);
        assert_eq!(u.multiply(&Uea::one()), u);
        assert_eq!(d(1).multiply(&d(-1)), Uea::from_word(0, &[1, -1]));

        let s = &d(-1) + &d(1);
        let want = {
            let mut w = mono(0, &[-1, -1]);
            w.add_scaled(&mono(0, &[-1, 1]), &rat(2));
            w.add_scaled(&d(0), &rat(-2));
            w.add_scaled(&mono(0, &[1, 1]), &rat(1));
            w
        };
        assert_eq!(s.multiply(&s), want);
        assert_eq!(want.to_string(), "d-1^2 + 2*d-1*d1 + d1^2 - 2*d0");
    }

    #[test]
    fn weight_examples() {
        assert_eq!(Monomial::new(3, vec![-2, -1]).unwrap().weight(), -3);
        assert_eq!(Monomial::new(0, vec![2]).unwrap().weight(), 2);
        assert_eq!(Monomial::one().weight(), 0);
    }

    #[test]
    fn ad_power_examples() {
        let u = &d(-3) + &mono(2, &[-1, 0]);
        assert_eq!(ad_power(1, 0, &u), u);
        assert_eq!(ad_power(1, 1, &d(-1)), d(0).scale(&rat(-2)));
        assert_eq!(ad_power(1, 2, &d(-1)), d(1).scale(&rat(2)));
        assert!(ad_power(1, 3, &d(-1)).is_zero());
    }

    #[test]
    fn antisymmetry_small_grid() {
        for i in -8..=8 {
            for j in -8..=8 {
                assert_eq!(d(i).commutator(&d(j)), bracket(i, j), "({i},{j})");
            }
        }
    }

    #[test]
    fn monomial_parts() {
        let m = Monomial::new(2, vec![-3, -1, -1, 0, 2, 5]).unwrap();
        assert_eq!(m.lower_part(), Pseudopartition::from_parts(&[0, 1, 1, 3]));
        assert_eq!(m.upper_part(), &[2, 5]);
        assert!(!m.in_lower_borel());
        assert_eq!(m.to_string(), "z^2*d-3*d-1^2*d0*d2*d5");
        assert!(Monomial::new(0, vec![1, 0]).is_none());
        let lam = Pseudopartition::from_parts(&[0, 2, 2, 1]);
        assert_eq!(Monomial::from_pseudopartition(0, &lam).word(), &[-2, -2, -1, 0]);
    }

    proptest::proptest! {
        #[test]
        fn multiply_is_associative(
            a in proptest::collection::vec(-3i64..=3, 0..=3),
            b in proptest::collection::vec(-3i64..=3, 0..=3),
            c in proptest::collection::vec(-3i64..=3, 0..=3),
        ) {
            let (u, v, t) = (Uea::from_word(0, &a), Uea::from_word(1, &b), Uea::from_word(0, &c));
            proptest::prop_assert_eq!(u.multiply(&v).multiply(&t), u.multiply(&v.multiply(&t)));
        }

        #[test]
        fn product_respects_grading(
            a in proptest::collection::vec(-4i64..=4, 0..=3),
            b in proptest::collection::vec(-4i64..=4, 0..=3),
        ) {
            let (u, v) = (Uea::from_word(0, &a), Uea::from_word(0, &b));
            let expected = a.iter().sum::<i64>() + b.iter().sum::<i64>();
            for (m, _) in u.multiply(&v).terms() {
                proptest::prop_assert_eq!(m.weight(), expected);
            }
        }

        #[test]
        fn ad_power_lands_in_shifted_weight(n in 1i64..=3, k in 0u32..=3,
                                            parts in proptest::collection::vec(0u32..=3, 1..=3)) {
            let lam = Pseudopartition::from_parts(&parts);
            let u = Uea::from_monomial(Monomial::from_pseudopartition(0, &lam), Rational::one());
            let r = ad_power(n, k, &u);
            let want = -(lam.size() as i64) + n * k as i64;
            for (m, _) in r.terms() {
                proptest::prop_assert_eq!(m.weight(), want);
            }
        }
    }
}
