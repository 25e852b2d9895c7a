//! Structure constants of generator sets and certificates for the
//! structural claims: the commutation table, `g_H ≅ gl_m`, the Levi
//! decomposition, second-order semisimplicity and the `sl_2` weights on
//! `g_S`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::diffring::{rat, rational_string, DiffRing, Rational};
use crate::error::{Error, Result};
use crate::generators::{Generator, GeneratorLabel};
use crate::jetfield::{field_coordinates, lie_bracket, Slot};
use crate::linalg::{self, sparse, Echelon};

/// A labelled basis with exact structure constants
/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraPresentation {
    pub basis: Vec<String>,
    pub c: Vec<Vec<Vec<Rational>>>,
}

fn unit(d: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); d];
    v[i] = Rational::one();
    v
}

fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn add_scaled(acc: &mut [Rational], a: &Rational, x: &[Rational]) {
    if a.is_zero() {
        return;
    }
    for (t, s) in acc.iter_mut().zip(x) {
        if !s.is_zero() {
            *t += a * s;
        }
    }
}

/// Computes all pairwise brackets and expresses them in the basis.
pub fn structure_constants(ring: &DiffRing, gens: &[Generator]) -> Result<LieAlgebraPresentation> {
    let d = gens.len();
    let mut echelon: Echelon<Slot> = Echelon::new();
    for g in gens {
        if echelon.insert(&field_coordinates(&g.field)).is_err() {
            return Err(Error::LinearDependence(g.label.to_string()));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    let brackets: Vec<((usize, usize), Vec<Rational>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let b = lie_bracket(ring, &gens[i].field, &gens[j].field)?;
            let coords = echelon
                .express(&field_coordinates(&b))
                .ok_or_else(|| Error::NonClosure(gens[i].label.to_string(), gens[j].label.to_string()))?;
            Ok(((i, j), coords))
        })
        .collect::<Result<_>>()?;
    let mut c = vec![vec![vec![Rational::zero(); d]; d]; d];
    for ((i, j), coords) in brackets {
        c[j][i] = coords.iter().map(|x| -x).collect();
        c[i][j] = coords;
    }
    Ok(LieAlgebraPresentation { basis: gens.iter().map(|g| g.label.to_string()).collect(), c })
}

impl LieAlgebraPresentation {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index(&self, label: &GeneratorLabel) -> Option<usize> {
        let s = label.to_string();
        self.basis.iter().position(|b| *b == s)
    }

    fn idx(&self, label: GeneratorLabel) -> usize {
        self.index(&label).unwrap_or_else(|| panic!("{label} not in basis"))
    }

    /// Coordinate vector of a basis label.
    pub fn vector(&self, label: GeneratorLabel) -> Vec<Rational> {
        unit(self.dim(), self.idx(label))
    }

    /// Coordinates of `H_0 = Σ H_ii`.
    pub fn h0(&self, m: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        for i in 1..=m {
            v[self.idx(GeneratorLabel::H(i, i))] = Rational::one();
        }
        v
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let d = self.dim();
        let mut out = vec![Rational::zero(); d];
        for (i, ai) in a.iter().enumerate().take(d) {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate().take(d) {
                if bj.is_zero() {
                    continue;
                }
                let f = ai * bj;
                add_scaled(&mut out, &f, &self.c[i][j]);
            }
        }
        out
    }

    /// `ad x` as a matrix acting on column coordinate vectors.
    pub fn ad(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        let d = self.dim();
        let cols: Vec<Vec<Rational>> = (0..d).map(|j| self.bracket(x, &unit(d, j))).collect();
        (0..d).map(|r| (0..d).map(|j| cols[j][r].clone()).collect()).collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.c[i][j].iter().zip(&self.c[j][i]).all(|(a, b)| (a + b).is_zero())))
    }

    /// First triple violating the Jacobi identity, if any.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (ei, ej, ek) = (unit(d, i), unit(d, j), unit(d, k));
                    let mut s = self.bracket(&self.bracket(&ei, &ej), &ek);
                    let t = self.bracket(&self.bracket(&ej, &ek), &ei);
                    let u = self.bracket(&self.bracket(&ek, &ei), &ej);
                    add_scaled(&mut s, &Rational::one(), &t);
                    add_scaled(&mut s, &Rational::one(), &u);
                    if !is_zero_vec(&s) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn killing_form(&self) -> KillingForm {
        let d = self.dim();
        let ads: Vec<Vec<Vec<Rational>>> = (0..d).map(|i| self.ad(&unit(d, i))).collect();
        let mut matrix = vec![vec![Rational::zero(); d]; d];
        for i in 0..d {
            for j in i..d {
                let t = trace_product(&ads[i], &ads[j]);
                matrix[j][i] = t.clone();
                matrix[i][j] = t;
            }
        }
        KillingForm::new(matrix)
    }

    /// Structure constants of the span of `vectors` in that basis, or the
    /// offending pair when the span is not closed.
    pub fn subalgebra(
        &self,
        labels: Vec<String>,
        vectors: &[Vec<Rational>],
    ) -> std::result::Result<LieAlgebraPresentation, (usize, usize)> {
        let mut e: Echelon<usize> = Echelon::new();
        for v in vectors {
            // dependent inputs would make coordinates ambiguous
            if e.insert(&sparse(v)).is_err() {
                return Err((usize::MAX, usize::MAX));
            }
        }
        let k = vectors.len();
        let mut c = vec![vec![vec![Rational::zero(); k]; k]; k];
        for i in 0..k {
            for j in 0..k {
                let b = self.bracket(&vectors[i], &vectors[j]);
                c[i][j] = e.express(&sparse(&b)).ok_or((i, j))?;
            }
        }
        Ok(LieAlgebraPresentation { basis: labels, c })
    }

    /// Overwrites one constant (and its antisymmetric partner); used for
    /// negative controls.
    pub fn with_constant(&self, i: usize, j: usize, k: usize, value: Rational) -> Self {
        let mut out = self.clone();
        out.c[j][i][k] = -value.clone();
        out.c[i][j][k] = value;
        out
    }

    /// Bracket terms of `[e_i, e_j]` keyed by label in basis order.
    pub fn bracket_terms(&self, i: usize, j: usize) -> Vec<(String, Rational)> {
        self.c[i][j]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.basis[k].clone(), c.clone()))
            .collect()
    }

    /// `{ "basis": [...], "brackets": [{"i", "j", "terms": {label: "p/q"}}] }`
    /// over all pairs `i < j` in basis order.
    pub fn to_json(&self) -> Value {
        let d = self.dim();
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let mut terms = Map::new();
                for (label, c) in self.bracket_terms(i, j) {
                    terms.insert(label, Value::String(rational_string(&c)));
                }
                brackets.push(json!({
                    "i": self.basis[i],
                    "j": self.basis[j],
                    "terms": terms,
                }));
            }
        }
        json!({ "basis": self.basis, "brackets": brackets })
    }

    /// Human-readable bracket table (nonzero brackets only).
    pub fn table_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let terms = self.bracket_terms(i, j);
                if terms.is_empty() {
                    continue;
                }
                let rhs: Vec<String> =
                    terms.iter().map(|(l, c)| if c.is_one() { l.clone() } else { format!("({c}) {l}") }).collect();
                out.push_str(&format!("[{}, {}] = {}\n", self.basis[i], self.basis[j], rhs.join(" + ")));
            }
        }
        out
    }
}

fn trace_product(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Rational {
    let d = a.len();
    let mut t = Rational::zero();
    for i in 0..d {
        for k in 0..d {
            if !a[i][k].is_zero() && !b[k][i].is_zero() {
                t += &a[i][k] * &b[k][i];
            }
        }
    }
    t
}

/// `κ(x, y) = tr(ad x ∘ ad y)` with its rank and determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillingForm {
    pub matrix: Vec<Vec<Rational>>,
    pub rank: usize,
    pub determinant: Rational,
}

impl KillingForm {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Self {
        let rank = linalg::rank(&matrix);
        let determinant = linalg::determinant(&matrix);
        KillingForm { matrix, rank, determinant }
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant.is_zero()
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.matrix.len();
        (0..d).all(|i| (0..d).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut t = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    t += xi * yj * &self.matrix[i][j];
                }
            }
        }
        t
    }

    /// Checks `κ([x,y],z) = κ(x,[y,z])` on all basis triples.
    pub fn is_invariant(&self, pres: &LieAlgebraPresentation) -> bool {
        let d = pres.dim();
        (0..d).all(|i| {
            (0..d).all(|j| {
                (0..d).all(|k| {
                    let (x, y, z) = (unit(d, i), unit(d, j), unit(d, k));
                    self.eval(&pres.bracket(&x, &y), &z) == self.eval(&x, &pres.bracket(&y, &z))
                })
            })
        })
    }
}

/// One verified claim in a certificate.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutationTableReport {
    pub pass: bool,
    pub entries_checked: usize,
    pub first_mismatch: Option<String>,
}

fn delta(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

/// The closed-form bracket of two H/S/F basis elements.
fn table_entry(x: GeneratorLabel, y: GeneratorLabel, n: usize, pres: &LieAlgebraPresentation) -> Option<Vec<Rational>> {
    use GeneratorLabel::*;
    let d = pres.dim();
    let mut out = vec![Rational::zero(); d];
    let mut put = |coef: i64, l: GeneratorLabel| {
        if coef != 0 {
            out[pres.idx(l)] += rat(coef);
        }
    };
    match (x, y) {
        (H(p, q), H(i, j)) => {
            put(delta(i, q), H(p, j));
            put(-delta(p, j), H(i, q));
        }
        (H(p, q), S(h, a)) => put(-delta(a, p), S(h, q)),
        (S(k, b), H(i, j)) => put(delta(b, i), S(k, j)),
        (S(..), S(..)) => {}
        (H(..), f) | (f, H(..)) if f.is_f() => {}
        (Fp, S(h, a)) => {
            if h + 1 < n {
                put(1 + h as i64 - n as i64, S(h + 1, a));
            }
        }
        // sign forced by [F_p, F_m] = F_z acting on S_h
        (Fm, S(h, a)) => {
            if h > 0 {
                put(-(h as i64), S(h - 1, a));
            }
        }
        (Fz, S(h, a)) => put(1 + 2 * h as i64 - n as i64, S(h, a)),
        (S(..), f) if f.is_f() => {
            let v = table_entry(f, x, n, pres)?;
            return Some(v.into_iter().map(|c| -c).collect());
        }
        (Fp, Fm) => put(1, Fz),
        (Fm, Fp) => put(-1, Fz),
        (Fp, Fz) => put(-2, Fp),
        (Fz, Fp) => put(2, Fp),
        (Fm, Fz) => put(2, Fm),
        (Fz, Fm) => put(-2, Fm),
        (a, b) if a == b && a.is_f() => {}
        _ => return None,
    }
    Some(out)
}

/// Compares every H/S/F entry of the presentation with the closed forms.
pub fn verify_commutation_table(pres: &LieAlgebraPresentation, n: usize, m: usize) -> CommutationTableReport {
    let labels: Vec<GeneratorLabel> = crate::generators::basis_labels(n, m)
        .unwrap_or_default()
        .into_iter()
        .filter(|l| !matches!(l, GeneratorLabel::C(..)))
        .collect();
    let mut checked = 0;
    for &x in &labels {
        for &y in &labels {
            let (Some(ix), Some(iy)) = (pres.index(&x), pres.index(&y)) else {
                return CommutationTableReport {
                    pass: false,
                    entries_checked: checked,
                    first_mismatch: Some(format!("basis lacks {x} or {y}")),
                };
            };
            let expected = table_entry(x, y, n, pres).expect("table covers H/S/F pairs");
            checked += 1;
            if pres.c[ix][iy] != expected {
                let got = LieAlgebraPresentation::describe(pres, &pres.c[ix][iy]);
                let want = LieAlgebraPresentation::describe(pres, &expected);
                return CommutationTableReport {
                    pass: false,
                    entries_checked: checked,
                    first_mismatch: Some(format!("[{x}, {y}]: computed {got}, table {want}")),
                };
            }
        }
    }
    CommutationTableReport { pass: true, entries_checked: checked, first_mismatch: None }
}

impl LieAlgebraPresentation {
    fn describe(&self, v: &[Rational]) -> String {
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c}) {}", self.basis[k]))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Matches the H-block against `[e_ij, e_pq]` computed from elementary
/// matrices under `H_ij -> e_ij`.
pub fn check_gl_isomorphism(pres: &LieAlgebraPresentation, m: usize) -> bool {
    let elem = |i: usize, j: usize| {
        let mut e = vec![vec![0i64; m]; m];
        e[i - 1][j - 1] = 1;
        e
    };
    let matmul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| {
        let mut c = vec![vec![0i64; m]; m];
        for i in 0..m {
            for k in 0..m {
                for j in 0..m {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        c
    };
    for i in 1..=m {
        for j in 1..=m {
            for p in 1..=m {
                for q in 1..=m {
                    let (a, b) = (elem(i, j), elem(p, q));
                    let (ab, ba) = (matmul(&a, &b), matmul(&b, &a));
                    let mut expected = vec![Rational::zero(); pres.dim()];
                    for r in 1..=m {
                        for s in 1..=m {
                            let c = ab[r - 1][s - 1] - ba[r - 1][s - 1];
                            if c != 0 {
                                expected[pres.idx(GeneratorLabel::H(r, s))] = rat(c);
                            }
                        }
                    }
                    let got = &pres.c[pres.idx(GeneratorLabel::H(i, j))][pres.idx(GeneratorLabel::H(p, q))];
                    if *got != expected {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Basis of `s_H ≅ sl_m`: `H_ij` (`i ≠ j`) and `H_ii - H_{i+1,i+1}`.
pub fn sl_part(pres: &LieAlgebraPresentation, m: usize) -> Vec<(String, Vec<Rational>)> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in 1..=m {
            if i != j {
                out.push((GeneratorLabel::H(i, j).to_string(), pres.vector(GeneratorLabel::H(i, j))));
            }
        }
    }
    for i in 1..m {
        let mut v = pres.vector(GeneratorLabel::H(i, i));
        add_scaled(&mut v, &-Rational::one(), &pres.vector(GeneratorLabel::H(i + 1, i + 1)));
        out.push((format!("H_{i}{i} - H_{}{}", i + 1, i + 1), v));
    }
    out
}

fn span(vectors: &[Vec<Rational>]) -> Echelon<usize> {
    let mut e = Echelon::new();
    for v in vectors {
        let _ = e.insert(&sparse(v));
    }
    e
}

/// Dimensions along the derived series `r, [r,r], ...` until it stabilizes.
pub fn derived_series(pres: &LieAlgebraPresentation, vectors: &[Vec<Rational>]) -> Vec<usize> {
    let mut current: Vec<Vec<Rational>> = basis_of(vectors);
    let mut dims = vec![current.len()];
    while !current.is_empty() {
        let mut brackets = Vec::new();
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                brackets.push(pres.bracket(&current[i], &current[j]));
            }
        }
        let next = basis_of(&brackets);
        if next.len() == current.len() {
            break;
        }
        dims.push(next.len());
        current = next;
    }
    dims
}

/// An independent subset spanning the same space.
fn basis_of(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut e = Echelon::new();
    vectors.iter().filter(|v| e.insert(&sparse(v)).is_ok()).cloned().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LeviReport {
    pub n: usize,
    pub m: usize,
    pub dim: usize,
    pub radical_dim: usize,
    pub levi_factor_dim: usize,
    pub g_f_dim: usize,
    pub s_h_dim: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Certifies `g = (g_F ⊕ s_H) ⋉ (g_S ⊕ K H_0)`.
pub fn certify_levi(pres: &LieAlgebraPresentation, n: usize, m: usize) -> LeviReport {
    let d = pres.dim();
    let mut radical: Vec<Vec<Rational>> = Vec::new();
    for k in 0..n {
        for j in 1..=m {
            radical.push(pres.vector(GeneratorLabel::S(k, j)));
        }
    }
    radical.push(pres.h0(m));
    let gf: Vec<(String, Vec<Rational>)> = [GeneratorLabel::Fp, GeneratorLabel::Fm, GeneratorLabel::Fz]
        .iter()
        .map(|l| (l.to_string(), pres.vector(*l)))
        .collect();
    let sh = sl_part(pres, m);
    let levi: Vec<(String, Vec<Rational>)> = gf.iter().chain(&sh).cloned().collect();
    let levi_vecs: Vec<Vec<Rational>> = levi.iter().map(|(_, v)| v.clone()).collect();

    let mut checks = Vec::new();

    // (i) ideal
    let rspan = span(&radical);
    let mut witness = None;
    'outer: for i in 0..d {
        for w in &radical {
            if !rspan.contains(&sparse(&pres.bracket(&unit(d, i), w))) {
                witness = Some(format!("[{}, radical element] leaves the radical", pres.basis[i]));
                break 'outer;
            }
        }
    }
    checks.push(Check::new(
        "radical is an ideal",
        witness.is_none(),
        witness.unwrap_or_else(|| format!("dim {}", rspan.rank())),
    ));

    // (ii) solvable
    let series = derived_series(pres, &radical);
    let solvable = series.last() == Some(&0);
    checks.push(Check::new("radical is solvable", solvable, format!("derived series dims {series:?}")));

    // (iii) Levi factor is a subalgebra with nondegenerate Killing form
    let labels: Vec<String> = levi.iter().map(|(l, _)| l.clone()).collect();
    match pres.subalgebra(labels, &levi_vecs) {
        Ok(sub) => {
            checks.push(Check::new("Levi factor is a subalgebra", true, format!("dim {}", sub.dim())));
            let kf = sub.killing_form();
            checks.push(Check::new(
                "Levi factor Killing form nondegenerate",
                kf.is_nondegenerate(),
                format!("rank {} of {}, det {}", kf.rank, sub.dim(), kf.determinant),
            ));
        }
        Err((i, j)) => {
            let detail = if i == usize::MAX {
                "Levi generators are dependent".to_string()
            } else {
                format!("[{}, {}] leaves the span", levi[i].0, levi[j].0)
            };
            checks.push(Check::new("Levi factor is a subalgebra", false, detail));
        }
    }

    // (iv) vector-space direct sum
    let all: Vec<Vec<Rational>> = levi_vecs.iter().chain(&radical).cloned().collect();
    let total_rank = span(&all).rank();
    let direct = total_rank == d && levi_vecs.len() + radical.len() == d;
    checks.push(Check::new(
        "g = Levi factor + radical (direct)",
        direct,
        format!(
            "{} + {} = {} (rank {total_rank}, dim {d})",
            levi_vecs.len(),
            radical.len(),
            levi_vecs.len() + radical.len()
        ),
    ));

    // (v) [g_F, s_H] = 0
    let commute = gf.iter().all(|(_, f)| sh.iter().all(|(_, h)| is_zero_vec(&pres.bracket(f, h))));
    checks.push(Check::new("[g_F, s_H] = 0", commute, ""));

    // (vi) dimension formula
    let expected = m * m + n * m + 3;
    checks.push(Check::new("dim g = m^2 + n m + 3", d == expected, format!("{d} vs {expected}")));

    let pass = checks.iter().all(|c| c.pass);
    LeviReport {
        n,
        m,
        dim: d,
        radical_dim: radical.len(),
        levi_factor_dim: levi_vecs.len(),
        g_f_dim: gf.len(),
        s_h_dim: sh.len(),
        checks,
        pass,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondOrderReport {
    pub m: usize,
    pub dim: usize,
    pub killing_rank: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub note: String,
}

/// Necessary conditions for `g ≅ sl_{m+2}` at order two: closure,
/// dimension `(m+2)^2 - 1` and semisimplicity; plus the abelian C-block.
pub fn certify_second_order(pres: &LieAlgebraPresentation, m: usize) -> SecondOrderReport {
    let d = pres.dim();
    let mut checks =
        vec![Check::new("closure", pres.is_antisymmetric(), "all brackets expressed exactly in the basis")];
    let expected = m * m + 4 * m + 3;
    checks.push(Check::new(
        "dim = m^2 + 4m + 3 = (m+2)^2 - 1",
        d == expected && expected == (m + 2) * (m + 2) - 1,
        format!("{d} vs {expected}"),
    ));
    let kf = pres.killing_form();
    checks.push(Check::new("Killing form nondegenerate", kf.is_nondegenerate(), format!("rank {} of {d}", kf.rank)));
    let cs: Vec<usize> =
        (1..=m).flat_map(|i| [1, 2].map(|k| GeneratorLabel::C(i, k))).filter_map(|l| pres.index(&l)).collect();
    let abelian = cs.len() == 2 * m && cs.iter().all(|&a| cs.iter().all(|&b| is_zero_vec(&pres.c[a][b])));
    checks.push(Check::new("non-Cartan block abelian", abelian, format!("{} generators", cs.len())));
    let pass = checks.iter().all(|c| c.pass);
    SecondOrderReport {
        m,
        dim: d,
        killing_rank: kf.rank,
        checks,
        pass,
        note: "necessary conditions for sl_{m+2} only; no explicit isomorphism is constructed".into(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightsReport {
    pub n: usize,
    /// Weights of `ad F_z` on `S_{k,j}`, `k = 0..n-1` (identical for every `j`).
    pub weights: Vec<String>,
    pub raising: Vec<String>,
    pub lowering: Vec<String>,
    pub distinct: bool,
    pub pass: bool,
    pub detail: Option<String>,
}

/// Reads off the `g_F` action on each `g_{Sj}` and compares it with
/// weights `1+2k-n`, raising `(1+k-n)` and lowering `-k`.
pub fn representation_weights(pres: &LieAlgebraPresentation, n: usize, m: usize) -> WeightsReport {
    let mut weights = Vec::new();
    let mut raising = Vec::new();
    let mut lowering = Vec::new();
    let mut detail = None;
    let fz = pres.vector(GeneratorLabel::Fz);
    let fp = pres.vector(GeneratorLabel::Fp);
    let fm = pres.vector(GeneratorLabel::Fm);
    // returns c when [f, S_kj] = c * target (target None means zero)
    let coefficient =
        |f: &[Rational], k: usize, j: usize, target: Option<GeneratorLabel>| -> std::result::Result<Rational, String> {
            let b = pres.bracket(f, &pres.vector(GeneratorLabel::S(k, j)));
            let c = match target {
                Some(t) => b[pres.idx(t)].clone(),
                None => Rational::zero(),
            };
            let mut rest = b;
            if let Some(t) = target {
                rest[pres.idx(t)] = Rational::zero();
            }
            if is_zero_vec(&rest) {
                Ok(c)
            } else {
                Err(format!("action on S_{k},{j} is not of the expected shape"))
            }
        };
    for j in 1..=m {
        for k in 0..n {
            let w = coefficient(&fz, k, j, Some(GeneratorLabel::S(k, j)));
            let r = coefficient(&fp, k, j, (k + 1 < n).then_some(GeneratorLabel::S(k + 1, j)));
            let l = coefficient(&fm, k, j, (k > 0).then(|| GeneratorLabel::S(k - 1, j)));
            match (w, r, l) {
                (Ok(w), Ok(r), Ok(l)) => {
                    let (ew, er, el) =
                        (rat(1 + 2 * k as i64 - n as i64), rat(1 + k as i64 - n as i64), rat(-(k as i64)));
                    let er = if k + 1 < n { er } else { Rational::zero() };
                    if (w.clone(), r.clone(), l.clone()) != (ew, er, el) && detail.is_none() {
                        detail = Some(format!("S_{k},{j}: weight {w}, raising {r}, lowering {l}"));
                    }
                    if j == 1 {
                        weights.push(w.to_string());
                        raising.push(r.to_string());
                        lowering.push(l.to_string());
                    }
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                    detail.get_or_insert(e);
                }
            }
        }
    }
    let mut sorted = weights.clone();
    sorted.sort();
    sorted.dedup();
    let distinct = sorted.len() == weights.len();
    WeightsReport { n, weights, raising, lowering, distinct, pass: detail.is_none() && distinct, detail }
}

/// Builds the presentation of `basis(n, m)` directly.
pub fn presentation(ring: &DiffRing, n: usize, m: usize) -> Result<LieAlgebraPresentation> {
    structure_constants(ring, &crate::generators::basis(n, m)?)
}

/// Label → coordinates map for arbitrary combinations in reports.
pub fn coordinates_by_label(pres: &LieAlgebraPresentation, v: &[Rational]) -> BTreeMap<String, Rational> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (pres.basis[k].clone(), c.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(n: usize, m: usize) -> LieAlgebraPresentation {
        presentation(&DiffRing::abstract_q(), n, m).unwrap()
    }

    #[test]
    fn f_triple_and_s_relations() {
        let p = pres(3, 1);
        let b = |x, y| p.bracket(&p.vector(x), &p.vector(y));
        use GeneratorLabel::*;
        assert_eq!(b(Fp, Fm), p.vector(Fz));
        let mut two_fp = p.vector(Fp);
        two_fp[p.idx(Fp)] = rat(2);
        assert_eq!(b(Fz, Fp), two_fp);
        // [F_p, S_0] = (1 + 0 - 3) S_1
        let mut e = vec![Rational::zero(); p.dim()];
        e[p.idx(S(1, 1))] = rat(-2);
        assert_eq!(b(Fp, S(0, 1)), e);
        // H_0 is central in g_H
        let h0 = p.h0(1);
        assert!(is_zero_vec(&p.bracket(&h0, &p.vector(H(1, 1)))));
    }

    #[test]
    fn commutation_table_small_and_negative_control() {
        let p = pres(3, 2);
        assert!(p.is_antisymmetric());
        assert!(p.jacobi_violation().is_none());
        let r = verify_commutation_table(&p, 3, 2);
        assert!(r.pass, "{:?}", r.first_mismatch);
        assert_eq!(r.entries_checked, 13 * 13);
        let i = p.idx(GeneratorLabel::Fz);
        let j = p.idx(GeneratorLabel::S(0, 1));
        let bad = p.with_constant(i, j, j, rat(7));
        let r = verify_commutation_table(&bad, 3, 2);
        assert!(!r.pass);
        assert!(r.first_mismatch.unwrap().contains("S_0,1"));
    }

    #[test]
    fn gl_and_levi() {
        for m in 1..=3 {
            assert!(check_gl_isomorphism(&pres(3, m), m));
        }
        let p = pres(3, 2);
        let rep = certify_levi(&p, 3, 2);
        assert!(rep.pass, "{:?}", rep.checks);
        assert_eq!((rep.dim, rep.radical_dim, rep.levi_factor_dim), (13, 7, 6));
        let rep = certify_levi(&pres(3, 1), 3, 1);
        assert!(rep.pass);
        assert_eq!((rep.dim, rep.s_h_dim, rep.levi_factor_dim), (7, 0, 3));
    }

    #[test]
    fn killing_form_properties() {
        let p = pres(3, 1);
        let kf = p.killing_form();
        assert!(kf.is_symmetric());
        assert!(kf.is_invariant(&p));
        // the full algebra has a nontrivial radical
        assert!(!kf.is_nondegenerate());
    }

    #[test]
    fn weights_n3() {
        let rep = representation_weights(&pres(3, 2), 3, 2);
        assert!(rep.pass, "{:?}", rep.detail);
        assert_eq!(rep.weights, vec!["-2", "0", "2"]);
    }

    #[test]
    fn json_layout() {
        let p = pres(3, 1);
        let v = p.to_json();
        assert_eq!(v["basis"].as_array().unwrap().len(), 7);
        assert_eq!(v["brackets"].as_array().unwrap().len(), 21);
        let first = &v["brackets"][0];
        assert_eq!(first["i"], "H_11");
        assert_eq!(first["j"], "S_0,1");
        assert_eq!(first["terms"]["S_0,1"], "-1/1");
    }
}
