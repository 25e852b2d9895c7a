//! Jet-space calculus over the coefficient ring: jet polynomials, the total
//! derivative, point vector fields, prolongation, brackets and the
//! infinitesimal invariance test.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::diffring::{rat, CoeffPoly, DiffRing, Rational};
use crate::equations::LinearSystem;
use crate::error::{Error, Result};

/// The jet coordinate `y_comp^(order)`; `comp` is zero based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetVar {
    pub comp: u16,
    pub order: u16,
}

impl JetVar {
    pub fn new(comp: usize, order: usize) -> Self {
        JetVar { comp: comp as u16, order: order as u16 }
    }

    fn raised(self) -> Self {
        JetVar { comp: self.comp, order: self.order + 1 }
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = self.comp + 1;
        match self.order {
            0 => write!(f, "y{j}"),
            1 => write!(f, "y{j}'"),
            2 => write!(f, "y{j}''"),
            k => write!(f, "y{j}^({k})"),
        }
    }
}

/// A monomial in jet variables, sorted by variable with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetMonomial(SmallVec<[(JetVar, u16); 4]>);

impl JetMonomial {
    pub fn one() -> Self {
        JetMonomial(SmallVec::new())
    }

    pub fn var(var: JetVar) -> Self {
        let mut s = SmallVec::new();
        s.push((var, 1));
        JetMonomial(s)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = (JetVar, u32)> + '_ {
        self.0.iter().map(|&(v, e)| (v, e as u32))
    }

    pub fn exponent(&self, var: JetVar) -> u32 {
        self.0.iter().find(|(v, _)| *v == var).map_or(0, |&(_, e)| e as u32)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn max_order(&self) -> Option<usize> {
        self.0.iter().map(|(v, _)| v.order as usize).max()
    }

    fn bump(&mut self, var: JetVar, by: i32) {
        match self.0.binary_search_by(|(v, _)| v.cmp(&var)) {
            Ok(i) => {
                let e = self.0[i].1 as i32 + by;
                debug_assert!(e >= 0);
                if e == 0 {
                    self.0.remove(i);
                } else {
                    self.0[i].1 = e as u16;
                }
            }
            Err(i) => {
                debug_assert!(by > 0);
                self.0.insert(i, (var, by as u16));
            }
        }
    }

    fn mul(&self, other: &JetMonomial) -> JetMonomial {
        let mut out = self.clone();
        for &(v, e) in &other.0 {
            out.bump(v, e as i32);
        }
        out
    }
}

impl fmt::Display for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial in jet variables `y_j^(k)` with coefficients in the
/// differential coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPoly {
    m: usize,
    terms: BTreeMap<JetMonomial, CoeffPoly>,
}

fn add_jet_term(terms: &mut BTreeMap<JetMonomial, CoeffPoly>, mono: JetMonomial, c: &CoeffPoly) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(mono) {
        Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl JetPoly {
    pub fn zero(m: usize) -> Self {
        JetPoly { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: CoeffPoly) -> Self {
        let mut p = Self::zero(m);
        add_jet_term(&mut p.terms, JetMonomial::one(), &c);
        p
    }

    /// `y_comp^(order)` (zero-based component).
    pub fn var(m: usize, comp: usize, order: usize) -> Self {
        assert!(comp < m, "component {comp} out of range for m = {m}");
        Self::term(m, JetMonomial::var(JetVar::new(comp, order)), CoeffPoly::one())
    }

    pub fn term(m: usize, mono: JetMonomial, c: CoeffPoly) -> Self {
        let mut p = Self::zero(m);
        add_jet_term(&mut p.terms, mono, &c);
        p
    }

    pub fn dim(&self) -> usize {
        self.m
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

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &JetMonomial) -> CoeffPoly {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    /// Maximal derivative order present (`None` for jet-free polynomials).
    pub fn jet_order(&self) -> Option<usize> {
        self.terms.keys().filter_map(JetMonomial::max_order).max()
    }

    /// Total degree in the jet variables.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(JetMonomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &CoeffPoly) -> JetPoly {
        let mut out = JetPoly::zero(self.m);
        for (mono, k) in &self.terms {
            add_jet_term(&mut out.terms, mono.clone(), &(k * c));
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> JetPoly {
        self.scale(&CoeffPoly::constant(c.clone()))
    }

    fn mul_term(&self, mono: &JetMonomial, c: &CoeffPoly, out: &mut BTreeMap<JetMonomial, CoeffPoly>) {
        for (m2, k) in &self.terms {
            add_jet_term(out, m2.mul(mono), &(k * c));
        }
    }

    pub fn pow(&self, e: u32) -> JetPoly {
        let mut acc = JetPoly::constant(self.m, CoeffPoly::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `∂p/∂y_comp^(order)`.
    pub fn partial(&self, var: JetVar) -> JetPoly {
        let mut out = JetPoly::zero(self.m);
        for (mono, c) in &self.terms {
            let e = mono.exponent(var);
            if e > 0 {
                let mut rest = mono.clone();
                rest.bump(var, -1);
                add_jet_term(&mut out.terms, rest, &c.scale(&rat(e as i64)));
            }
        }
        out
    }

    /// Applies the coefficient derivation only (explicit x-dependence).
    pub fn partial_x(&self, ring: &DiffRing) -> JetPoly {
        let mut out = JetPoly::zero(self.m);
        for (mono, c) in &self.terms {
            add_jet_term(&mut out.terms, mono.clone(), &ring.derive(c));
        }
        out
    }

    /// The total derivative `D_x`.
    pub fn total_derivative(&self, ring: &DiffRing) -> JetPoly {
        let mut out = self.partial_x(ring);
        for (mono, c) in &self.terms {
            for (var, e) in mono.vars() {
                let mut next = mono.clone();
                next.bump(var, -1);
                next.bump(var.raised(), 1);
                add_jet_term(&mut out.terms, next, &c.scale(&rat(e as i64)));
            }
        }
        out
    }

    pub fn total_derivative_n(&self, ring: &DiffRing, k: usize) -> JetPoly {
        (0..k).fold(self.clone(), |acc, _| acc.total_derivative(ring))
    }

    /// Replaces every occurrence of `var` by `replacement`.
    pub fn substitute(&self, var: JetVar, replacement: &JetPoly) -> JetPoly {
        let mut powers: Vec<JetPoly> = vec![JetPoly::constant(self.m, CoeffPoly::one())];
        let mut out = JetPoly::zero(self.m);
        for (mono, c) in &self.terms {
            let e = mono.exponent(var) as usize;
            if e == 0 {
                add_jet_term(&mut out.terms, mono.clone(), c);
                continue;
            }
            while powers.len() <= e {
                let next = powers.last().unwrap() * replacement;
                powers.push(next);
            }
            let mut rest = mono.clone();
            rest.bump(var, -(e as i32));
            powers[e].mul_term(&rest, c, &mut out.terms);
        }
        out
    }

    /// Substitutes `x`-free coefficient specializations (concrete potential).
    pub fn map_coefficients(&self, f: impl Fn(&CoeffPoly) -> CoeffPoly) -> JetPoly {
        let mut out = JetPoly::zero(self.m);
        for (mono, c) in &self.terms {
            add_jet_term(&mut out.terms, mono.clone(), &f(c));
        }
        out
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(mono, c)| if mono.is_one() { format!("({c})") } else { format!("({c})*{mono}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl AddAssign<&JetPoly> for JetPoly {
    fn add_assign(&mut self, rhs: &JetPoly) {
        for (mono, c) in &rhs.terms {
            add_jet_term(&mut self.terms, mono.clone(), c);
        }
    }
}

impl SubAssign<&JetPoly> for JetPoly {
    fn sub_assign(&mut self, rhs: &JetPoly) {
        for (mono, c) in &rhs.terms {
            add_jet_term(&mut self.terms, mono.clone(), &-c);
        }
    }
}

impl<'a> Add<&'a JetPoly> for &JetPoly {
    type Output = JetPoly;
    fn add(self, rhs: &'a JetPoly) -> JetPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a JetPoly> for &JetPoly {
    type Output = JetPoly;
    fn sub(self, rhs: &'a JetPoly) -> JetPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a JetPoly> for &JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: &'a JetPoly) -> JetPoly {
        let mut out = JetPoly::zero(self.m.max(rhs.m));
        for (mono, c) in &rhs.terms {
            self.mul_term(mono, c, &mut out.terms);
        }
        out
    }
}

impl Neg for &JetPoly {
    type Output = JetPoly;
    fn neg(self) -> JetPoly {
        self.scale_rational(&-Rational::one())
    }
}

/// A point vector field `xi ∂_x + Σ phi_j ∂_{y_j}` on `ℝ × ℝ^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    pub label: String,
    pub xi: JetPoly,
    pub phi: Vec<JetPoly>,
}

impl VectorField {
    /// Builds a field, rejecting components that involve derivatives.
    pub fn new(label: impl Into<String>, xi: JetPoly, phi: Vec<JetPoly>) -> Result<Self> {
        let label = label.into();
        let m = phi.len();
        if m == 0 {
            return Err(Error::InvalidDimension(0));
        }
        for c in std::iter::once(&xi).chain(&phi) {
            if c.jet_order().unwrap_or(0) > 0 {
                return Err(Error::NotPointField(label));
            }
            if c.dim() != m {
                return Err(Error::DimensionMismatch(c.dim(), m));
            }
        }
        Ok(VectorField { label, xi, phi })
    }

    /// Builds a field without the point-field check (for diagnostics).
    pub fn new_unchecked(label: impl Into<String>, xi: JetPoly, phi: Vec<JetPoly>) -> Self {
        VectorField { label: label.into(), xi, phi }
    }

    pub fn zero(m: usize) -> Self {
        VectorField { label: "0".into(), xi: JetPoly::zero(m), phi: vec![JetPoly::zero(m); m] }
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.phi.iter().all(JetPoly::is_zero)
    }

    pub fn is_point_field(&self) -> bool {
        std::iter::once(&self.xi).chain(&self.phi).all(|c| c.jet_order().unwrap_or(0) == 0)
    }

    /// Components in the order `xi, phi_1, ..., phi_m`.
    pub fn components(&self) -> impl Iterator<Item = &JetPoly> {
        std::iter::once(&self.xi).chain(&self.phi)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField {
            label: format!("({c})*{}", self.label),
            xi: self.xi.scale_rational(c),
            phi: self.phi.iter().map(|p| p.scale_rational(c)).collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            label: format!("{} + {}", self.label, other.label),
            xi: &self.xi + &other.xi,
            phi: self.phi.iter().zip(&other.phi).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            label: format!("{} - {}", self.label, other.label),
            xi: &self.xi - &other.xi,
            phi: self.phi.iter().zip(&other.phi).map(|(a, b)| a - b).collect(),
        }
    }

    /// `Σ c_i v_i`; all fields must share `m`.
    pub fn linear_combination(label: &str, m: usize, parts: &[(Rational, &VectorField)]) -> VectorField {
        let mut out = VectorField::zero(m);
        for (c, f) in parts {
            out = out.add(&f.scale(c));
        }
        out.with_label(label)
    }

    /// Applies the field as a derivation to a jet-order-0 polynomial.
    pub fn apply(&self, ring: &DiffRing, f: &JetPoly) -> JetPoly {
        let mut out = &self.xi * &f.partial_x(ring);
        for (j, phi) in self.phi.iter().enumerate() {
            let d = f.partial(JetVar::new(j, 0));
            if !d.is_zero() {
                out += &(phi * &d);
            }
        }
        out
    }

    pub fn specialize(&self, ring: &DiffRing) -> VectorField {
        VectorField {
            label: self.label.clone(),
            xi: self.xi.map_coefficients(|c| ring.specialize(c)),
            phi: self.phi.iter().map(|p| p.map_coefficients(|c| ring.specialize(c))).collect(),
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = [{}] d/dx", self.label, self.xi)?;
        for (j, p) in self.phi.iter().enumerate() {
            if !p.is_zero() {
                write!(f, " + [{}] d/dy{}", p, j + 1)?;
            }
        }
        Ok(())
    }
}

/// The n-th prolongation of a point field; `phi[j][k]` multiplies `∂/∂y_j^(k)`.
#[derive(Clone, Debug)]
pub struct ProlongedVectorField {
    pub base: VectorField,
    pub phi: Vec<Vec<JetPoly>>,
}

impl ProlongedVectorField {
    pub fn order(&self) -> usize {
        self.phi.first().map_or(0, |p| p.len() - 1)
    }

    /// `v^(n)(P)` for a jet polynomial of order at most `n`.
    pub fn apply(&self, ring: &DiffRing, p: &JetPoly) -> JetPoly {
        debug_assert!(p.jet_order().unwrap_or(0) <= self.order());
        let mut out = &self.base.xi * &p.partial_x(ring);
        let mut acc: BTreeMap<JetMonomial, CoeffPoly> = BTreeMap::new();
        for (mono, c) in p.terms() {
            for (var, e) in mono.vars() {
                let mut rest = mono.clone();
                rest.bump(var, -1);
                let coeff = c.scale(&rat(e as i64));
                self.phi[var.comp as usize][var.order as usize].mul_term(&rest, &coeff, &mut acc);
            }
        }
        out += &JetPoly { m: p.m, terms: acc };
        out
    }
}

/// `phi[j][k] = D_x(phi[j][k-1]) - y_j^(k) D_x(xi)`.
pub fn prolong(ring: &DiffRing, v: &VectorField, n: usize) -> ProlongedVectorField {
    let m = v.dim();
    let dxi = v.xi.total_derivative(ring);
    let phi = (0..m)
        .map(|j| {
            let mut levels = vec![v.phi[j].clone()];
            for k in 1..=n {
                let prev = &levels[k - 1];
                let next = &prev.total_derivative(ring) - &(&JetPoly::var(m, j, k) * &dxi);
                levels.push(next);
            }
            levels
        })
        .collect();
    ProlongedVectorField { base: v.clone(), phi }
}

/// `[v, w]` as the commutator of first-order operators.
pub fn lie_bracket(ring: &DiffRing, v: &VectorField, w: &VectorField) -> Result<VectorField> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch(v.dim(), w.dim()));
    }
    if !v.is_point_field() {
        return Err(Error::NotPointField(v.label.clone()));
    }
    if !w.is_point_field() {
        return Err(Error::NotPointField(w.label.clone()));
    }
    let comp = |a: &JetPoly, b: &JetPoly| &v.apply(ring, b) - &w.apply(ring, a);
    Ok(VectorField {
        label: format!("[{}, {}]", v.label, w.label),
        xi: comp(&v.xi, &w.xi),
        phi: v.phi.iter().zip(&w.phi).map(|(a, b)| comp(a, b)).collect(),
    })
}

/// Outcome of the infinitesimal invariance test.
#[derive(Clone, Debug)]
pub struct SymmetryVerdict {
    pub verdict: bool,
    /// `v^(n)(Δ_ν)` restricted to the solution manifold, one per component.
    pub residuals: Vec<JetPoly>,
}

/// Applies `v^(n)` to every `Δ_ν` and restricts to `Δ = 0` by eliminating
/// the top derivatives `y_j^(n)`.
pub fn is_symmetry(ring: &DiffRing, v: &VectorField, sys: &LinearSystem) -> Result<SymmetryVerdict> {
    if !v.is_point_field() {
        return Err(Error::NotPointField(v.label.clone()));
    }
    if v.dim() != sys.m() {
        return Err(Error::DimensionMismatch(v.dim(), sys.m()));
    }
    let n = sys.n();
    let m = sys.m();
    let pr = prolong(ring, v, n);
    let tops: Vec<JetPoly> = (0..m).map(|j| sys.top_derivative_elimination(j)).collect();
    let residuals: Vec<JetPoly> = (0..m)
        .map(|nu| {
            let mut r = pr.apply(ring, &sys.operator(nu));
            for (j, top) in tops.iter().enumerate() {
                r = r.substitute(JetVar::new(j, n), top);
            }
            r
        })
        .collect();
    Ok(SymmetryVerdict { verdict: residuals.iter().all(JetPoly::is_zero), residuals })
}

/// The coordinates of a field over (component, jet monomial, ring monomial)
/// slots; canonical forms make this an injective linear map.
pub type Slot = (usize, JetMonomial, crate::diffring::Monomial);

pub fn field_coordinates(v: &VectorField) -> BTreeMap<Slot, Rational> {
    let mut out = BTreeMap::new();
    for (i, comp) in v.components().enumerate() {
        for (jm, c) in comp.terms() {
            for (cm, r) in c.terms() {
                if !r.is_zero() {
                    out.insert((i, jm.clone(), cm.clone()), r.clone());
                }
            }
        }
    }
    out
}

/// Coordinates of a list of jet polynomials (component index first).
pub fn jet_coordinates(polys: &[JetPoly]) -> BTreeMap<Slot, Rational> {
    let mut out = BTreeMap::new();
    for (i, p) in polys.iter().enumerate() {
        for (jm, c) in p.terms() {
            for (cm, r) in c.terms() {
                out.insert((i, jm.clone(), cm.clone()), r.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> DiffRing {
        DiffRing::abstract_q()
    }

    fn y(m: usize, j: usize, k: usize) -> JetPoly {
        JetPoly::var(m, j, k)
    }

    #[test]
    fn total_derivative_examples() {
        let r = ring();
        assert_eq!(y(1, 0, 0).total_derivative(&r), y(1, 0, 1));
        let p = y(1, 0, 0).scale(&CoeffPoly::u());
        let expected = &y(1, 0, 0).scale(&CoeffPoly::du()) + &y(1, 0, 1).scale(&CoeffPoly::u());
        assert_eq!(p.total_derivative(&r), expected);
        let p = &y(2, 0, 0) * &y(2, 1, 1);
        let expected = &(&y(2, 0, 1) * &y(2, 1, 1)) + &(&y(2, 0, 0) * &y(2, 1, 2));
        assert_eq!(p.total_derivative(&r), expected);
    }

    #[test]
    fn scaling_field_prolongation() {
        let r = ring();
        let v = VectorField::new("x d/dx", JetPoly::constant(1, CoeffPoly::x()), vec![JetPoly::zero(1)]).unwrap();
        let pr = prolong(&r, &v, 2);
        assert_eq!(pr.phi[0][1], -&y(1, 0, 1));
        assert_eq!(pr.phi[0][2], y(1, 0, 2).scale_rational(&rat(-2)));
    }

    #[test]
    fn linear_field_prolongation() {
        let r = ring();
        let v = VectorField::new("y d/dy", JetPoly::zero(1), vec![y(1, 0, 0)]).unwrap();
        let pr = prolong(&r, &v, 4);
        for k in 0..=4 {
            assert_eq!(pr.phi[0][k], y(1, 0, k));
        }
    }

    #[test]
    fn rejects_non_point_fields() {
        assert!(matches!(VectorField::new("bad", JetPoly::zero(1), vec![y(1, 0, 1)]), Err(Error::NotPointField(_))));
        let bad = VectorField::new_unchecked("bad", JetPoly::zero(1), vec![y(1, 0, 1)]);
        let good = VectorField::new("ok", JetPoly::zero(1), vec![y(1, 0, 0)]).unwrap();
        assert!(lie_bracket(&ring(), &bad, &good).is_err());
    }

    #[test]
    fn substitution_handles_powers() {
        let m = 1;
        let p = &y(m, 0, 2).pow(2) + &y(m, 0, 0);
        let rep = y(m, 0, 1).scale_rational(&rat(3));
        let s = p.substitute(JetVar::new(0, 2), &rep);
        let expected = &y(m, 0, 1).pow(2).scale_rational(&rat(9)) + &y(m, 0, 0);
        assert_eq!(s, expected);
    }

    #[test]
    fn jet_order_tracks_maximum() {
        let p = &y(2, 0, 3) + &y(2, 1, 1);
        assert_eq!(p.jet_order(), Some(3));
        assert_eq!(JetPoly::constant(2, CoeffPoly::u()).jet_order(), None);
        assert_eq!(p.to_string(), "(1)*y2' + (1)*y1^(3)");
    }
}
