//! The Witt algebra `W = V / ℂz` and `L_{ψ,0}` as a `W`-module.
//!
//! `U(W)` is `U(V)` with `z = 0`, so elements are stored as `z`-free PBW
//! combinations and all products go through [`Uea`] followed by [`project`].

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::{rat, Poly, Rational};
use crate::virasoro::{GeneratorIndex, Monomial, Uea};
use crate::whittaker::{act, ModuleContext, ModuleElement, Variant, WhittakerHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("the Witt action needs central character 0, i.e. the quotient by z; got module {0}")]
    WrongContext(String),
}

/// Element of `U(W)`; no monomial carries a power of `z`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WittElement {
    inner: Uea,
}

impl WittElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        WittElement { inner: Uea::one() }
    }

    pub fn generator(k: GeneratorIndex) -> Self {
        WittElement { inner: Uea::generator(k) }
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.inner.terms()
    }

    /// The canonical `z`-free preimage in `U(V)`.
    pub fn lift(&self) -> Uea {
        self.inner.clone()
    }

    pub fn add(&self, other: &Self) -> Self {
        WittElement { inner: &self.inner + &other.inner }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        WittElement { inner: self.inner.scale(c) }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        project(&self.inner.multiply(&other.inner))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        project(&self.inner.commutator(&other.inner))
    }
}

impl fmt::Display for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.inner, f)
    }
}

/// `[d_i, d_j] = (j - i) d_{i+j}` in `W`.
pub fn witt_bracket(i: GeneratorIndex, j: GeneratorIndex) -> WittElement {
    WittElement::generator(i + j).scale(&rat(j - i))
}

/// `ρ`: sets `z = 0`.
pub fn project(u: &Uea) -> WittElement {
    let mut inner = Uea::zero();
    for (m, c) in u.terms() {
        if m.z_power() == 0 && !c.is_zero() {
            inner.add_term(m.clone(), c.clone());
        }
    }
    WittElement { inner }
}

/// `L_{ψ,0}`, the module on which `W` acts.
pub fn witt_module(psi: WhittakerHom) -> Arc<ModuleContext> {
    ModuleContext::central(psi, &Rational::zero())
}

pub fn is_witt_context(ctx: &ModuleContext) -> bool {
    matches!(ctx.variant(), Variant::PolyQuotient(p) if *p == Poly::z())
}

/// Action of `U(W)` through any preimage in `U(V)`; `z` acts as 0.
pub fn witt_act(u: &WittElement, v: &ModuleElement) -> Result<ModuleElement, WittError> {
    if !is_witt_context(v.context()) {
        return Err(WittError::WrongContext(v.context().descriptor()));
    }
    Ok(act(&u.inner, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::Pseudopartition;
    use crate::scalar::ratio;
    use crate::virasoro::bracket;

    fn psi() -> WhittakerHom {
        WhittakerHom::new(ratio(2, 1), ratio(-3, 2)).unwrap()
    }

    #[test]
    fn project_examples() {
        let u = Uea::from_word(0, &[2, -2]);
        assert_eq!(project(&u).to_string(), "d-2*d2 - 4*d0");
        assert!(project(&Uea::z_power(3)).is_zero());
        assert_eq!(project(&Uea::generator(5)), WittElement::generator(5));
    }

    #[test]
    fn project_is_a_bracket_homomorphism() {
        for i in -6..=6 {
            for j in -6..=6 {
                assert_eq!(project(&bracket(i, j)), witt_bracket(i, j), "({i},{j})");
                let w = WittElement::generator(i).commutator(&WittElement::generator(j));
                assert_eq!(w, witt_bracket(i, j));
            }
        }
    }

    #[test]
    fn witt_act_examples() {
        let ctx = witt_module(psi());
        let w = ModuleElement::cyclic(&ctx);
        let v = ModuleElement::basis(&ctx, 0, &Pseudopartition::from_parts(&[2]));
        let got = witt_act(&WittElement::generator(2), &v).unwrap();
        let want = v
            .scale(psi().psi2())
            .add(&ModuleElement::basis(&ctx, 0, &Pseudopartition::from_parts(&[0])).scale(&rat(-4)));
        assert_eq!(got, want);
        assert_eq!(witt_act(&WittElement::generator(1), &w).unwrap(), w.scale(psi().psi1()));
        let zd = Uea::from_word(1, &[-1]);
        assert!(witt_act(&project(&zd), &w).unwrap().is_zero());
    }

    #[test]
    fn rejects_other_central_characters() {
        let ctx = ModuleContext::central(psi(), &rat(1));
        let err = witt_act(&WittElement::one(), &ModuleElement::cyclic(&ctx)).unwrap_err();
        assert_eq!(err, WittError::WrongContext("L:xi=1".into()));
        let m = ModuleContext::universal(psi());
        assert!(witt_act(&WittElement::one(), &ModuleElement::cyclic(&m)).is_err());
    }
}
