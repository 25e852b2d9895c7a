//! The exact differential coefficient ring.
//!
//! Elements are rational polynomials in `x`, the two normalized solutions
//! `u`, `v` of the source equation `y'' + q y = 0`, their first derivatives,
//! and the derivatives `q^(k)` of the potential. Second derivatives of `u`
//! and `v` never survive (they are rewritten to `-q u`, `-q v`) and the
//! Wronskian relation `u v' - u' v = 1` is applied as the oriented rule
//! `u' v -> u v' - 1`. Monomials free of `u' v` form a basis of the quotient
//! ring, so two canonical polynomials are equal iff their term maps agree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Serializes a rational as `p/q` (denominator always present).
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Symbols of the coefficient ring. `D2U` and `D2V` only appear in raw
/// input; they are eliminated by [`DiffRing::normalize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    X,
    U,
    V,
    DU,
    DV,
    D2U,
    D2V,
    /// `q^(k)`
    Q(u16),
}

const IX: usize = 0;
const IU: usize = 1;
const IV: usize = 2;
const IDU: usize = 3;
const IDV: usize = 4;
const IQ0: usize = 5;

impl Symbol {
    fn slot(self) -> Option<usize> {
        match self {
            Symbol::X => Some(IX),
            Symbol::U => Some(IU),
            Symbol::V => Some(IV),
            Symbol::DU => Some(IDU),
            Symbol::DV => Some(IDV),
            Symbol::Q(k) => Some(IQ0 + k as usize),
            Symbol::D2U | Symbol::D2V => None,
        }
    }

    fn from_slot(slot: usize) -> Symbol {
        match slot {
            IX => Symbol::X,
            IU => Symbol::U,
            IV => Symbol::V,
            IDU => Symbol::DU,
            IDV => Symbol::DV,
            k => Symbol::Q((k - IQ0) as u16),
        }
    }

    fn name(self) -> String {
        match self {
            Symbol::X => "x".into(),
            Symbol::U => "u".into(),
            Symbol::V => "v".into(),
            Symbol::DU => "u'".into(),
            Symbol::DV => "v'".into(),
            Symbol::D2U => "u''".into(),
            Symbol::D2V => "v''".into(),
            Symbol::Q(0) => "q".into(),
            Symbol::Q(1) => "q'".into(),
            Symbol::Q(2) => "q''".into(),
            Symbol::Q(k) => format!("q^({k})"),
        }
    }
}

/// Exponent vector over `[x, u, v, u', v', q, q', q'', ...]` with trailing
/// zeros trimmed, so the q-part grows only as far as it is used.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 10]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn of(symbol: Symbol, exp: u32) -> Self {
        let mut m = Monomial::one();
        if let Some(slot) = symbol.slot() {
            m.bump(slot, exp as i32);
        }
        m
    }

    fn get(&self, slot: usize) -> u16 {
        self.0.get(slot).copied().unwrap_or(0)
    }

    fn bump(&mut self, slot: usize, by: i32) {
        if self.0.len() <= slot {
            self.0.resize(slot + 1, 0);
        }
        let e = self.0[slot] as i32 + by;
        debug_assert!(e >= 0);
        self.0[slot] = e as u16;
        self.trim();
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exponent(&self, symbol: Symbol) -> u32 {
        symbol.slot().map_or(0, |s| self.get(s) as u32)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest `k` with `q^(k)` present.
    pub fn max_q_order(&self) -> Option<usize> {
        (self.0.len() > IQ0).then(|| self.0.len() - 1 - IQ0)
    }

    /// True if the monomial involves any of `u, v, u', v'`.
    pub fn involves_solutions(&self) -> bool {
        (IU..=IDV).any(|s| self.get(s) > 0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (Symbol, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(s, &e)| (Symbol::from_slot(s), e as u32))
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut out = long.clone();
        for (i, &e) in short.0.iter().enumerate() {
            out.0[i] += e;
        }
        out
    }

    /// Graded lexicographic comparison used for display.
    fn grlex(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            (0..n).map(|i| self.get(i).cmp(&other.get(i))).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (sym, e) in self.symbols() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", sym.name())?;
            } else {
                write!(f, "{}^{}", sym.name(), e)?;
            }
        }
        Ok(())
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn add_term(terms: &mut BTreeMap<Monomial, Rational>, mono: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(mono) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Adds `c * mono` after rewriting every `u' v` pair with the Wronskian rule.
/// `(u')^a v^b` with `t = min(a, b)` becomes `(u')^(a-t) v^(b-t) (u v' - 1)^t`;
/// the expansion introduces only `u` and `v'`, so one pass reaches the fixpoint.
fn add_reduced(terms: &mut BTreeMap<Monomial, Rational>, mono: Monomial, c: Rational) {
    let t = mono.get(IDU).min(mono.get(IV));
    if t == 0 {
        add_term(terms, mono, c);
        return;
    }
    let mut base = mono;
    base.bump(IDU, -(t as i32));
    base.bump(IV, -(t as i32));
    for i in 0..=t as u32 {
        let mut m = base.clone();
        m.bump(IU, i as i32);
        m.bump(IDV, i as i32);
        let mut k = Rational::from_integer(binomial(t as u32, i));
        if (t as u32 - i) % 2 == 1 {
            k = -k;
        }
        add_term(terms, m, &c * k);
    }
}

/// A canonical element of the coefficient ring.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoeffPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        add_term(&mut terms, Monomial::one(), c);
        CoeffPoly { terms }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    /// A canonical symbol (`u''` and `v''` need a ring; see [`DiffRing::symbol`]).
    pub fn var(symbol: Symbol) -> Self {
        assert!(symbol.slot().is_some(), "{symbol:?} is not a canonical symbol");
        Self::term(Monomial::of(symbol, 1), Rational::one())
    }

    pub fn x() -> Self {
        Self::var(Symbol::X)
    }
    pub fn u() -> Self {
        Self::var(Symbol::U)
    }
    pub fn v() -> Self {
        Self::var(Symbol::V)
    }
    pub fn du() -> Self {
        Self::var(Symbol::DU)
    }
    pub fn dv() -> Self {
        Self::var(Symbol::DV)
    }
    pub fn q(k: u16) -> Self {
        Self::var(Symbol::Q(k))
    }

    pub fn term(mono: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        add_reduced(&mut terms, mono, c);
        CoeffPoly { terms }
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

    /// The value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    /// Highest q-derivative order in use.
    pub fn max_q_order(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_q_order).max()
    }

    pub fn involves_solutions(&self) -> bool {
        self.terms.keys().any(Monomial::involves_solutions)
    }

    pub fn involves(&self, symbol: Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent(symbol) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CoeffPoly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// True if no monomial violates the canonical-form invariants.
    pub fn is_canonical(&self) -> bool {
        self.terms.iter().all(|(m, c)| !c.is_zero() && !(m.get(IDU) > 0 && m.get(IV) > 0) && m.0.last() != Some(&0))
    }

    /// Substitutes every `q^(k)` by the given polynomial; used to specialize
    /// abstract results.
    pub fn substitute_q(&self, q_derivative: impl Fn(u16) -> CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        let mut cache: BTreeMap<u16, CoeffPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut base = Monomial::one();
            let mut factor = CoeffPoly::one();
            for (sym, e) in m.symbols() {
                match sym {
                    Symbol::Q(k) => {
                        let qk = cache.entry(k).or_insert_with(|| q_derivative(k)).clone();
                        factor = &factor * &qk.pow(e);
                    }
                    s => base = base.mul(&Monomial::of(s, e)),
                }
            }
            out += &(&CoeffPoly::term(base, c.clone()) * &factor);
        }
        out
    }

    fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex(a.0));
        v
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a CoeffPoly> for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &'a CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a CoeffPoly> for &CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &'a CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&CoeffPoly> for CoeffPoly {
    fn add_assign(&mut self, rhs: &CoeffPoly) {
        for (m, c) in &rhs.terms {
            add_term(&mut self.terms, m.clone(), c.clone());
        }
    }
}

impl SubAssign<&CoeffPoly> for CoeffPoly {
    fn sub_assign(&mut self, rhs: &CoeffPoly) {
        for (m, c) in &rhs.terms {
            add_term(&mut self.terms, m.clone(), -c.clone());
        }
    }
}

impl<'a> Mul<&'a CoeffPoly> for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &'a CoeffPoly) -> CoeffPoly {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                add_reduced(&mut terms, m1.mul(m2), c1 * c2);
            }
        }
        CoeffPoly { terms }
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        CoeffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<CoeffPoly> for CoeffPoly {
            type Output = CoeffPoly;
            fn $f(self, rhs: CoeffPoly) -> CoeffPoly { (&self).$f(&rhs) }
        }
        impl<'a> $tr<&'a CoeffPoly> for CoeffPoly {
            type Output = CoeffPoly;
            fn $f(self, rhs: &'a CoeffPoly) -> CoeffPoly { (&self).$f(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        -&self
    }
}

/// A univariate rational polynomial in `x`, used for concrete potentials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct XPoly {
    /// `coeffs[i]` multiplies `x^i`; no trailing zeros.
    coeffs: Vec<Rational>,
}

impl XPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        XPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> XPoly {
        XPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
    }

    pub fn nth_derivative(&self, k: usize) -> XPoly {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn to_coeff_poly(&self) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            out += &CoeffPoly::term(Monomial::of(Symbol::X, i as u32), c.clone());
        }
        out
    }

    /// The inverse of [`XPoly::to_coeff_poly`]; `None` if any symbol other
    /// than `x` occurs.
    pub fn from_coeff_poly(p: &CoeffPoly) -> Option<XPoly> {
        let mut coeffs = Vec::new();
        for (mono, c) in p.terms() {
            let e = mono.exponent(Symbol::X) as usize;
            if mono.degree() as usize != e {
                return None;
            }
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Rational::zero());
            }
            coeffs[e] += c;
        }
        Some(XPoly::new(coeffs))
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Parses expressions such as `0`, `x`, `1 - 3/2*x^2 + x^3`.
    pub fn parse(src: &str) -> Result<XPoly> {
        let err = |msg: &str| Error::Parse(format!("polynomial `{src}`: {msg}"));
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        let mut coeffs: Vec<Rational> = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            rest = tail;
            if term.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef, power) = match term.find('x') {
                None => (parse_rational(term)?, 0usize),
                Some(pos) => {
                    let c = term[..pos].trim_end_matches('*');
                    let c = if c.is_empty() { Rational::one() } else { parse_rational(c)? };
                    let p = &term[pos + 1..];
                    let p = if p.is_empty() {
                        1
                    } else {
                        p.strip_prefix('^').and_then(|e| e.parse().ok()).ok_or_else(|| err("bad exponent"))?
                    };
                    (c, p)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, Rational::zero());
            }
            coeffs[power] += coef * rat(sign);
        }
        Ok(XPoly::new(coeffs))
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_coeff_poly())
    }
}

/// How the potential `q` is modelled.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum SourceModel {
    /// `q` and its derivatives are free symbols.
    #[default]
    Abstract,
    /// `q` is a concrete polynomial in `x`.
    Polynomial(XPoly),
}

/// A raw, possibly non-canonical polynomial: a list of (symbol powers, coefficient).
pub type RawPoly = Vec<(Vec<(Symbol, u32)>, Rational)>;

/// The differential structure: multiplication is context free, but the
/// derivation `D` depends on the potential.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffRing {
    model: SourceModel,
}

impl DiffRing {
    pub fn abstract_q() -> Self {
        DiffRing { model: SourceModel::Abstract }
    }

    pub fn polynomial_q(q: XPoly) -> Self {
        DiffRing { model: SourceModel::Polynomial(q) }
    }

    pub fn model(&self) -> &SourceModel {
        &self.model
    }

    pub fn is_abstract(&self) -> bool {
        matches!(self.model, SourceModel::Abstract)
    }

    /// `q^(k)` as a ring element.
    pub fn q_derivative(&self, k: u16) -> CoeffPoly {
        match &self.model {
            SourceModel::Abstract => CoeffPoly::q(k),
            SourceModel::Polynomial(p) => p.nth_derivative(k as usize).to_coeff_poly(),
        }
    }

    pub fn q(&self) -> CoeffPoly {
        self.q_derivative(0)
    }

    pub fn symbol(&self, s: Symbol) -> CoeffPoly {
        match s {
            Symbol::D2U => -(&self.q() * &CoeffPoly::u()),
            Symbol::D2V => -(&self.q() * &CoeffPoly::v()),
            Symbol::Q(k) => self.q_derivative(k),
            s => CoeffPoly::var(s),
        }
    }

    /// Brings a raw polynomial to canonical form.
    pub fn normalize(&self, raw: &RawPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (powers, c) in raw {
            let mut t = CoeffPoly::constant(c.clone());
            for &(s, e) in powers {
                t = &t * &self.symbol(s).pow(e);
            }
            out += &t;
        }
        out
    }

    /// Replaces free q-symbols by the concrete potential (no-op when abstract).
    pub fn specialize(&self, p: &CoeffPoly) -> CoeffPoly {
        match self.model {
            SourceModel::Abstract => p.clone(),
            SourceModel::Polynomial(_) => p.substitute_q(|k| self.q_derivative(k)),
        }
    }

    /// The derivation `D`: `D x = 1`, `D u = u'`, `D u' = -q u`, `D v = v'`,
    /// `D v' = -q v`, `D q^(k) = q^(k+1)`.
    pub fn derive(&self, p: &CoeffPoly) -> CoeffPoly {
        let q_terms: Vec<(Monomial, Rational)> = match &self.model {
            SourceModel::Abstract => vec![(Monomial::of(Symbol::Q(0), 1), Rational::one())],
            SourceModel::Polynomial(qp) => qp
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Monomial::of(Symbol::X, i as u32), c.clone()))
                .collect(),
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &p.terms {
            for (slot, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut rest = m.clone();
                rest.bump(slot, -1);
                let k = c * rat(e as i64);
                match slot {
                    IX => add_reduced(&mut terms, rest, k),
                    IU => {
                        rest.bump(IDU, 1);
                        add_reduced(&mut terms, rest, k);
                    }
                    IV => {
                        rest.bump(IDV, 1);
                        add_reduced(&mut terms, rest, k);
                    }
                    IDU | IDV => {
                        rest.bump(if slot == IDU { IU } else { IV }, 1);
                        for (qm, qc) in &q_terms {
                            add_reduced(&mut terms, rest.mul(qm), -(&k * qc));
                        }
                    }
                    s => {
                        rest.bump(s + 1, 1);
                        add_reduced(&mut terms, rest, k);
                    }
                }
            }
        }
        CoeffPoly { terms }
    }

    pub fn derive_n(&self, p: &CoeffPoly, k: usize) -> CoeffPoly {
        (0..k).fold(p.clone(), |acc, _| self.derive(&acc))
    }
}

/// The Wronskian expression `u v' - u' v` built without the rewrite rule
/// applied to the inputs (it reduces to 1).
pub fn wronskian_uv() -> CoeffPoly {
    &(&CoeffPoly::u() * &CoeffPoly::dv()) - &(&CoeffPoly::du() * &CoeffPoly::v())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> DiffRing {
        DiffRing::abstract_q()
    }

    #[test]
    fn wronskian_reduces_to_one() {
        assert_eq!(wronskian_uv(), CoeffPoly::one());
    }

    #[test]
    fn second_derivatives_are_rewritten() {
        let r = ring();
        let p = r.normalize(&vec![(vec![(Symbol::D2U, 1)], rat(1))]);
        assert_eq!(p, -(&CoeffPoly::q(0) * &CoeffPoly::u()));
        assert!(p.is_canonical());
    }

    #[test]
    fn single_rewrite_step() {
        // u' v' v -> (u v' - 1) v' = u v'^2 - v'
        let r = ring();
        let p = r.normalize(&vec![(vec![(Symbol::DU, 1), (Symbol::DV, 1), (Symbol::V, 1)], rat(1))]);
        let expected = &(&CoeffPoly::u() * &CoeffPoly::dv().pow(2)) - &CoeffPoly::dv();
        assert_eq!(p, expected);
    }

    #[test]
    fn derivation_examples() {
        let r = ring();
        assert_eq!(r.derive(&CoeffPoly::u()), CoeffPoly::du());
        // D(u v') = u' v' - q u v
        let lhs = r.derive(&(&CoeffPoly::u() * &CoeffPoly::dv()));
        let rhs = &(&CoeffPoly::du() * &CoeffPoly::dv()) - &(&CoeffPoly::q(0) * &(&CoeffPoly::u() * &CoeffPoly::v()));
        assert_eq!(lhs, rhs);
        assert!(r.derive(&wronskian_uv()).is_zero());
        assert_eq!(r.derive(&CoeffPoly::q(3)), CoeffPoly::q(4));
        assert_eq!(r.derive(&CoeffPoly::x()), CoeffPoly::one());
    }

    #[test]
    fn polynomial_potential_derivation() {
        let r = DiffRing::polynomial_q(XPoly::parse("x").unwrap());
        // D u' = -x u
        let d = r.derive(&CoeffPoly::du());
        assert_eq!(d, -(&CoeffPoly::x() * &CoeffPoly::u()));
        let r0 = DiffRing::polynomial_q(XPoly::parse("0").unwrap());
        assert!(r0.derive(&CoeffPoly::du()).is_zero());
    }

    #[test]
    fn parse_polynomials() {
        let p = XPoly::parse("1 - 3/2*x^2 + x^3").unwrap();
        assert_eq!(p.coeffs(), &[rat(1), rat(0), ratio(-3, 2), rat(1)]);
        assert_eq!(XPoly::parse("x").unwrap().coeffs(), &[rat(0), rat(1)]);
        assert_eq!(XPoly::parse("0").unwrap().degree(), None);
        assert_eq!(XPoly::parse("-2x").unwrap().coeffs(), &[rat(0), rat(-2)]);
        assert!(XPoly::parse("x^").is_err());
        assert!(XPoly::parse("1/0").is_err());
        assert!(XPoly::parse("").is_err());
    }

    #[test]
    fn display_is_deterministic() {
        let p = &(&CoeffPoly::u() * &CoeffPoly::dv().pow(2)) - &CoeffPoly::dv();
        assert_eq!(p.to_string(), "u*v'^2 - v'");
        let c = CoeffPoly::constant(ratio(-3, 4));
        assert_eq!(c.to_string(), "-3/4");
        assert_eq!(rational_string(&rat(2)), "2/1");
    }

    #[test]
    fn substitute_q_specializes() {
        let p = &CoeffPoly::int(4) * &CoeffPoly::q(0) + CoeffPoly::q(1);
        let r = DiffRing::polynomial_q(XPoly::parse("x^2").unwrap());
        let s = r.specialize(&p);
        // 4 x^2 + 2 x
        assert_eq!(s.to_string(), "4*x^2 + 2*x");
    }
}
