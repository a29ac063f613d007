//! Exact scalars and polynomials in the central element `z`.
//!
//! [`Rational`] is an arbitrary-precision rational number. [`Poly`] is a
//! univariate polynomial over the rationals and plays the role of the ring
//! `S(z)` of central polynomials acting on every Whittaker module.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("extended gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("polynomial {0} does not split into linear factors over the rationals")]
    NotSplit(String),
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("polynomial {0} is constant")]
    Constant(String),
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
    let bad = || ScalarError::BadRational(text.to_string());
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational the way expressions print it: integers bare,
/// proper fractions parenthesized.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

/// Degree with a bottom element, used for `deg 0` and `maxdeg(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u64),
}

impl Degree {
    pub fn finite(self) -> Option<u64> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// `self < bound` where the bound may be negative.
    pub fn lt_int(self, bound: i64) -> bool {
        match self {
            Degree::NegInfinity => true,
            Degree::Finite(d) => (d as i128) < bound as i128,
        }
    }

    /// `self <= bound` where the bound may be negative.
    pub fn le_int(self, bound: i64) -> bool {
        match self {
            Degree::NegInfinity => true,
            Degree::Finite(d) => (d as i128) <= bound as i128,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Polynomial in `z` with rational coefficients; `coeffs[i]` multiplies `z^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `z`
    pub fn z() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    /// `c * z^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `z - root`
    pub fn linear(root: &Rational) -> Self {
        Poly::new(vec![-root.clone(), Rational::one()])
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// Product of `(z - root)^mult` over the given factors.
    pub fn from_roots(factors: &[(Rational, u32)]) -> Self {
        factors
            .iter()
            .fold(Poly::one(), |acc, (r, m)| &acc * &Poly::linear(r).pow(*m))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n as u64 - 1),
        }
    }

    /// Degree as a `usize`, treating the zero polynomial as degree 0.
    pub fn deg_or_zero(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides through by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `p(z + shift)`, i.e. the coefficients of `p` in powers of `z - shift`.
    pub fn taylor_shift(&self, shift: &Rational) -> Self {
        let step = Poly::new(vec![shift.clone(), Rational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * &step) + &Poly::constant(c.clone()))
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly), ScalarError> {
        let lc = divisor.leading().ok_or(ScalarError::DivisionByZero)?.clone();
        let db = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + db] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * b;
            }
            quot[i] = c;
        }
        rem.truncate(db);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, ScalarError> {
        self.divmod(divisor).map(|(_, r)| r)
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g`, `g` the monic gcd.
    ///
    /// When both `a` and `b` are non-constant the cofactors satisfy
    /// `deg s < deg b - deg g` and `deg t < deg a - deg g`.
    pub fn ext_gcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly), ScalarError> {
        if a.is_zero() && b.is_zero() {
            return Err(ScalarError::BothZero);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = r0.leading().expect("nonzero gcd").recip();
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// Splits a monic polynomial into `(root, multiplicity)` pairs, roots in
    /// increasing order. Fails with [`ScalarError::NotSplit`] when some factor
    /// has no rational root.
    pub fn linear_factorization(&self) -> Result<Vec<(Rational, u32)>, ScalarError> {
        if !self.is_monic() {
            return Err(ScalarError::NotMonic(self.to_string()));
        }
        if self.deg_or_zero() == 0 {
            return Err(ScalarError::Constant(self.to_string()));
        }
        let mut rest = self.clone();
        let mut factors = Vec::new();
        for root in rational_root_candidates(self) {
            let lin = Poly::linear(&root);
            let mut mult = 0;
            loop {
                let (q, r) = rest.divmod(&lin)?;
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((root, mult));
            }
            if rest.deg_or_zero() == 0 {
                break;
            }
        }
        if rest.deg_or_zero() > 0 {
            return Err(ScalarError::NotSplit(self.to_string()));
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(factors)
    }
}

/// Candidate rational roots `±p/q` of a nonzero polynomial, where `p` divides
/// the lowest nonzero coefficient and `q` the leading one of its primitive
/// integer form. Zero is included when the constant term vanishes.
fn rational_root_candidates(p: &Poly) -> Vec<Rational> {
    let lcm = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
    let mut out = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        out.push(Rational::zero());
    }
    let lead = ints.last().cloned().unwrap_or_else(BigInt::one);
    let nums = divisors(&ints[low]);
    let dens = divisors(&lead);
    for n in &nums {
        for d in &dens {
            for sign in [1, -1] {
                let r = Rational::new(n * sign, d.clone());
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => "z".to_string(),
                    _ => format!("z^{k}"),
                };
                (c.clone(), mono)
            });
        f.write_str(&join_signed_terms(terms))
    }
}

/// Joins `(coefficient, monomial)` pairs into `a*m1 - b*m2 + ...`; an empty
/// monomial string stands for the unit.
pub(crate) fn join_signed_terms(terms: impl IntoIterator<Item = (Rational, String)>) -> String {
    let mut out = String::new();
    for (i, (c, mono)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&fmt_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&fmt_rational(&mag));
            out.push('*');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divmod_examples() {
        let z2 = Poly::from_ints(&[0, 0, 1]);
        let zm1 = Poly::from_ints(&[-1, 1]);
        let (q, r) = z2.divmod(&zm1).unwrap();
        assert_eq!(q, Poly::from_ints(&[1, 1]));
        assert_eq!(r, Poly::one());

        let p = Poly::from_ints(&[3, -2, 5]);
        assert_eq!(p.divmod(&Poly::one()).unwrap(), (p.clone(), Poly::zero()));

        let lin = Poly::linear(&ratio(5, 7));
        assert_eq!(lin.divmod(&lin).unwrap(), (Poly::one(), Poly::zero()));

        assert_eq!(p.divmod(&Poly::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn ext_gcd_examples() {
        let (g, s, t) = Poly::ext_gcd(&Poly::from_ints(&[-1, 1]), &Poly::from_ints(&[-2, 1])).unwrap();
        // s·a + t·b = (z-1) - (z-2) = 1
        assert_eq!(g, Poly::one());
        assert_eq!(s, Poly::constant(rat(1)));
        assert_eq!(t, Poly::constant(rat(-1)));

        let (g, s, t) = Poly::ext_gcd(&Poly::from_ints(&[0, 0, 1]), &Poly::z()).unwrap();
        assert_eq!(g, Poly::z());
        assert_eq!(s, Poly::zero());
        assert_eq!(t, Poly::one());

        let a = Poly::from_ints(&[-1, 1]).pow(2);
        let b = Poly::from_ints(&[3, 1]);
        let (g, s, t) = Poly::ext_gcd(&a, &b).unwrap();
        assert_eq!(g, Poly::one());
        assert_eq!(s, Poly::constant(ratio(1, 16)));
        assert_eq!(t, Poly::new(vec![ratio(5, 16), ratio(-1, 16)]));

        assert_eq!(
            Poly::ext_gcd(&Poly::zero(), &Poly::zero()),
            Err(ScalarError::BothZero)
        );
    }

    #[test]
    fn factorization_examples() {
        let p = Poly::from_roots(&[(rat(1), 2), (rat(-3), 1)]);
        assert_eq!(
            p.linear_factorization().unwrap(),
            vec![(rat(-3), 1), (rat(1), 2)]
        );
        assert_eq!(Poly::z().linear_factorization().unwrap(), vec![(rat(0), 1)]);
        assert!(matches!(
            Poly::from_ints(&[1, 0, 1]).linear_factorization(),
            Err(ScalarError::NotSplit(_))
        ));
        let frac = Poly::from_roots(&[(ratio(5, 7), 1), (ratio(-2, 3), 2), (rat(0), 1)]);
        assert_eq!(
            frac.linear_factorization().unwrap(),
            vec![(ratio(-2, 3), 2), (rat(0), 1), (ratio(5, 7), 1)]
        );
        assert!(matches!(
            Poly::from_ints(&[1, 2]).linear_factorization(),
            Err(ScalarError::NotMonic(_))
        ));
    }

    #[test]
    fn zero_degree_is_bottom() {
        assert_eq!(Poly::zero().degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert!(Degree::NegInfinity.lt_int(-5));
        assert!(!Degree::Finite(0).lt_int(0));
    }

    #[test]
    fn display_and_shift() {
        let p = Poly::new(vec![ratio(5, 16), ratio(-1, 16)]);
        assert_eq!(p.to_string(), "-(1/16)*z + (5/16)");
        assert_eq!(Poly::from_ints(&[1, -2, 1]).to_string(), "z^2 - 2*z + 1");
        // (z-1)^2 in powers of (z-1) is y^2
        let shifted = Poly::from_ints(&[1, -2, 1]).taylor_shift(&rat(1));
        assert_eq!(shifted, Poly::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
