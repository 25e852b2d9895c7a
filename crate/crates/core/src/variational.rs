//! Euler operator, the standard Lagrangian `L0 = ½ y·Δ`, the functionals
//! `S(v) = v^(n)(L) + L D_x ξ` and `D(v) = E(S(v))`, and the
//! classification of symmetry generators into variational, divergence and
//! neither.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::diffring::{ratio, DiffRing, Rational};
use crate::equations::{normal_form, LinearSystem};
use crate::error::Result;
use crate::generators::{self, GeneratorLabel};
use crate::jetfield::{jet_coordinates, prolong, JetPoly, JetVar, Slot, VectorField};
use crate::liealg::{self, Check, LieAlgebraPresentation};
use crate::linalg::{sparse, Echelon};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lagrangian {
    pub l: JetPoly,
    /// True when built as `½ Σ y_j Δ_j`.
    pub standard: bool,
}

impl Lagrangian {
    pub fn standard(sys: &LinearSystem) -> Self {
        let mut l = JetPoly::zero(sys.m());
        for j in 0..sys.m() {
            l += &(&JetPoly::var(sys.m(), j, 0) * &sys.operator(j));
        }
        Lagrangian { l: l.scale_rational(&ratio(1, 2)), standard: true }
    }

    pub fn custom(l: JetPoly) -> Self {
        Lagrangian { l, standard: false }
    }

    pub fn dim(&self) -> usize {
        self.l.dim()
    }
}

/// `E_j(P) = Σ_k (-1)^k D_x^k ∂P/∂y_j^(k)` (zero-based component).
pub fn euler(ring: &DiffRing, p: &JetPoly, j: usize) -> JetPoly {
    let mut out = JetPoly::zero(p.dim());
    let Some(order) = p.jet_order() else { return out };
    for k in 0..=order {
        let d = p.partial(JetVar::new(j, k));
        if d.is_zero() {
            continue;
        }
        let t = d.total_derivative_n(ring, k);
        if k % 2 == 0 {
            out += &t;
        } else {
            out -= &t;
        }
    }
    out
}

/// Outcome for orders without the standard Lagrangian structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotLagrangian {
    pub n: usize,
}

/// `E_j(L0) = Δ_j` for every component; odd orders are rejected.
pub fn check_self_adjoint(ring: &DiffRing, sys: &LinearSystem) -> std::result::Result<bool, NotLagrangian> {
    if sys.n() % 2 == 1 {
        return Err(NotLagrangian { n: sys.n() });
    }
    let l0 = Lagrangian::standard(sys);
    Ok((0..sys.m()).all(|j| euler(ring, &l0.l, j) == sys.operator(j)))
}

/// `S(v) = v^(n)(L) + L D_x ξ`.
pub fn s_functional(ring: &DiffRing, v: &VectorField, l: &Lagrangian, n: usize) -> JetPoly {
    let pr = prolong(ring, v, n);
    let mut out = pr.apply(ring, &l.l);
    out += &(&l.l * &v.xi.total_derivative(ring));
    out
}

/// `D(v) = (E_1(S(v)), ..., E_m(S(v)))`.
pub fn d_functional(ring: &DiffRing, v: &VectorField, l: &Lagrangian, n: usize) -> Vec<JetPoly> {
    let s = s_functional(ring, v, l, n);
    (0..l.dim()).map(|j| euler(ring, &s, j)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    Variational,
    Divergence,
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorClass {
    pub generator: String,
    #[serde(rename = "S_zero")]
    pub s_zero: bool,
    #[serde(rename = "D_zero")]
    pub d_zero: bool,
    pub class: SymmetryClass,
}

fn classify_field(
    ring: &DiffRing,
    v: &VectorField,
    l: &Lagrangian,
    n: usize,
) -> (GeneratorClass, JetPoly, Vec<JetPoly>) {
    let s = s_functional(ring, v, l, n);
    let d: Vec<JetPoly> = (0..l.dim()).map(|j| euler(ring, &s, j)).collect();
    let s_zero = s.is_zero();
    let d_zero = d.iter().all(JetPoly::is_zero);
    let class = if s_zero {
        SymmetryClass::Variational
    } else if d_zero {
        SymmetryClass::Divergence
    } else {
        SymmetryClass::None
    };
    (GeneratorClass { generator: v.label.clone(), s_zero, d_zero, class }, s, d)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub m: usize,
    pub generators: Vec<GeneratorClass>,
    pub dim_div: usize,
    pub dim_var: usize,
    pub expected_dim_div: usize,
    pub expected_dim_var: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Classification {
    Lagrangian(ClassificationReport),
    NotLagrangian(NotLagrangian),
}

/// `½(m² + m(2n-1) + 6)`.
pub fn expected_dim_div(n: usize, m: usize) -> usize {
    (m * m + m * (2 * n - 1) + 6) / 2
}

/// `½(m² - m + 6)`.
pub fn expected_dim_var(m: usize) -> usize {
    (m * m - m + 6) / 2
}

/// Kernel of the linear map `e_i -> images[i]`, one vector per dependency.
fn kernel(images: &[std::collections::BTreeMap<Slot, Rational>]) -> Vec<Vec<Rational>> {
    let d = images.len();
    let mut e: Echelon<Slot> = Echelon::new();
    let mut out = Vec::new();
    for (i, img) in images.iter().enumerate() {
        if let Err(coords) = e.insert(img) {
            let mut k = vec![Rational::zero(); d];
            k[i] = Rational::one();
            for (t, c) in coords.iter().enumerate() {
                k[t] -= c;
            }
            out.push(k);
        }
    }
    out
}

fn same_span(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let mut ea: Echelon<usize> = Echelon::new();
    for v in a {
        let _ = ea.insert(&sparse(v));
    }
    let mut eb: Echelon<usize> = Echelon::new();
    for v in b {
        let _ = eb.insert(&sparse(v));
    }
    ea.rank() == eb.rank() && b.iter().all(|v| ea.contains(&sparse(v)))
}

/// Classifies the point symmetry basis and the rotations `R_ij`, and
/// computes the dimensions of the divergence and variational algebras as
/// kernels of the linear maps `D` and `S` on the full symmetry algebra.
pub fn classify_algebra(ring: &DiffRing, n: usize, m: usize) -> Result<Classification> {
    if n % 2 == 1 {
        return Ok(Classification::NotLagrangian(NotLagrangian { n }));
    }
    let sys = normal_form(ring, n, m)?;
    let l0 = Lagrangian::standard(&sys);
    let basis = generators::basis(n, m)?;
    let rotations: Vec<(GeneratorLabel, VectorField)> = generators::rotation_labels(m)
        .into_iter()
        .map(|l| generators::make(l, n, m).map(|f| (l, f)))
        .collect::<Result<_>>()?;
    let fields: Vec<&VectorField> = basis.iter().map(|g| &g.field).chain(rotations.iter().map(|(_, f)| f)).collect();
    let results: Vec<(GeneratorClass, JetPoly, Vec<JetPoly>)> =
        fields.par_iter().map(|v| classify_field(ring, v, &l0, n)).collect();

    let d = basis.len();
    let pres = liealg::structure_constants(ring, &basis)?;
    let s_images: Vec<_> = results[..d].iter().map(|(_, s, _)| jet_coordinates(std::slice::from_ref(s))).collect();
    let d_images: Vec<_> = results[..d].iter().map(|(_, _, dd)| jet_coordinates(dd)).collect();
    let var_kernel = kernel(&s_images);
    let div_kernel = kernel(&d_images);

    let classes: Vec<GeneratorClass> = results.iter().map(|(c, _, _)| c.clone()).collect();
    let class_of = |label: &GeneratorLabel| {
        let name = label.to_string();
        classes.iter().find(|c| c.generator == name).map(|c| c.class)
    };

    let mut checks = Vec::new();
    let gf_ok = [GeneratorLabel::Fp, GeneratorLabel::Fm, GeneratorLabel::Fz]
        .iter()
        .all(|l| class_of(l) == Some(SymmetryClass::Variational));
    checks.push(Check::new("g_F variational", gf_ok, ""));
    let r_ok = rotations.iter().all(|(l, _)| class_of(l) == Some(SymmetryClass::Variational));
    checks.push(Check::new("rotations R_ij variational", r_ok, format!("{} rotations", rotations.len())));
    let s_ok = basis
        .iter()
        .filter(|g| matches!(g.label, GeneratorLabel::S(..)))
        .all(|g| class_of(&g.label) == Some(SymmetryClass::Divergence));
    checks.push(Check::new("S_kj divergence but not variational", s_ok, ""));
    let h_ok = basis
        .iter()
        .filter(|g| matches!(g.label, GeneratorLabel::H(..)))
        .all(|g| class_of(&g.label) == Some(SymmetryClass::None));
    let h0 = VectorField::linear_combination(
        "H_0",
        m,
        &basis
            .iter()
            .filter(|g| matches!(g.label, GeneratorLabel::H(i, j) if i == j))
            .map(|g| (Rational::one(), &g.field))
            .collect::<Vec<_>>(),
    );
    let (h0_class, _, _) = classify_field(ring, &h0, &l0, n);
    checks.push(Check::new("H_ij and H_0 neither", h_ok && h0_class.class == SymmetryClass::None, ""));
    let implication = classes.iter().all(|c| !c.s_zero || c.d_zero);
    checks.push(Check::new("variational implies divergence", implication, ""));

    // expected spans in basis coordinates
    let coords_of = |label: GeneratorLabel| pres.vector(label);
    let mut rot_coords = Vec::new();
    for (l, _) in &rotations {
        if let GeneratorLabel::R(i, j) = l {
            let mut v = coords_of(GeneratorLabel::H(*i, *j));
            let w = coords_of(GeneratorLabel::H(*j, *i));
            for (a, b) in v.iter_mut().zip(&w) {
                *a -= b;
            }
            rot_coords.push(v);
        }
    }
    let gf_coords: Vec<Vec<Rational>> =
        [GeneratorLabel::Fp, GeneratorLabel::Fm, GeneratorLabel::Fz].map(coords_of).to_vec();
    let s_coords: Vec<Vec<Rational>> =
        basis.iter().filter(|g| matches!(g.label, GeneratorLabel::S(..))).map(|g| coords_of(g.label)).collect();
    let var_expected: Vec<Vec<Rational>> = gf_coords.iter().chain(&rot_coords).cloned().collect();
    let div_expected: Vec<Vec<Rational>> = var_expected.iter().chain(&s_coords).cloned().collect();
    checks.push(Check::new(
        "divergence algebra = [g_F + so(m)] + g_S",
        same_span(&div_kernel, &div_expected),
        format!("kernel dim {}", div_kernel.len()),
    ));
    checks.push(Check::new(
        "variational algebra = g_F + so(m)",
        same_span(&var_kernel, &var_expected),
        format!("kernel dim {}", var_kernel.len()),
    ));
    let (edd, edv) = (expected_dim_div(n, m), expected_dim_var(m));
    checks.push(Check::new(
        "dim divergence formula",
        div_kernel.len() == edd,
        format!("{} vs {edd}", div_kernel.len()),
    ));
    checks.push(Check::new(
        "dim variational formula",
        var_kernel.len() == edv,
        format!("{} vs {edv}", var_kernel.len()),
    ));

    let closed = |vs: &[Vec<Rational>], name: &str| -> Check {
        let labels = (0..vs.len()).map(|i| format!("{name}{i}")).collect();
        Check::new(&format!("{name} closed under bracket"), pres.subalgebra(labels, vs).is_ok(), "")
    };
    checks.push(closed(&div_kernel, "divergence algebra"));
    checks.push(closed(&var_kernel, "variational algebra"));
    checks.push(so_block_check(&pres, &rot_coords, m));

    if n == 2 {
        let c_idx: Vec<usize> = basis
            .iter()
            .enumerate()
            .filter(|(_, g)| matches!(g.label, GeneratorLabel::C(..)))
            .map(|(i, _)| i)
            .collect();
        let free = div_kernel.iter().all(|k| c_idx.iter().all(|&i| k[i].is_zero()));
        checks.push(Check::new("no divergence symmetry involves a non-Cartan generator", free, ""));
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(Classification::Lagrangian(ClassificationReport {
        n,
        m,
        generators: classes,
        dim_div: div_kernel.len(),
        dim_var: var_kernel.len(),
        expected_dim_div: edd,
        expected_dim_var: edv,
        checks,
        pass,
    }))
}

fn so_block_check(pres: &LieAlgebraPresentation, rot: &[Vec<Rational>], m: usize) -> Check {
    let dim_ok = rot.len() == m * (m - 1) / 2;
    let labels: Vec<String> = (0..rot.len()).map(|i| format!("R{i}")).collect();
    match pres.subalgebra(labels, rot) {
        Ok(sub) => {
            let kf = sub.killing_form();
            let semisimple = m < 3 || kf.is_nondegenerate();
            Check::new("so(m) block", dim_ok && semisimple, format!("dim {}, Killing rank {}", sub.dim(), kf.rank))
        }
        Err(_) => Check::new("so(m) block", false, "rotations not closed"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NonCartanReport {
    pub m: usize,
    /// `(generator, D nonzero)` for each `C_ik`, then for sampled sums.
    pub cases: Vec<(String, bool)>,
    pub pass: bool,
    pub note: String,
}

/// At order two, `D(C_ik) ≠ 0` for every non-Cartan generator and for
/// `C_ik + w` over sampled `w` in the divergence algebra.
pub fn noncartan_exclusion(ring: &DiffRing, m: usize) -> Result<NonCartanReport> {
    let n = 2;
    let sys = normal_form(ring, n, m)?;
    let l0 = Lagrangian::standard(&sys);
    let mut samples: Vec<VectorField> = vec![
        generators::make(GeneratorLabel::S(0, 1), n, m)?,
        generators::make(GeneratorLabel::S(1, 1), n, m)?,
        generators::make(GeneratorLabel::Fz, n, m)?,
    ];
    if m >= 2 {
        samples.push(generators::make(GeneratorLabel::R(1, 2), n, m)?);
    }
    let mut fields = Vec::new();
    for i in 1..=m {
        for k in 1..=2 {
            let c = generators::make(GeneratorLabel::C(i, k), n, m)?;
            for (t, w) in samples.iter().enumerate() {
                let coef = Rational::from_integer((t as i64 + 2).into());
                let sum = VectorField::linear_combination(
                    &format!("{} + {coef}*{}", c.label, w.label),
                    m,
                    &[(Rational::one(), &c), (coef, w)],
                );
                fields.push(sum);
            }
            fields.push(c);
        }
    }
    let mut cases: Vec<(String, bool)> = fields
        .par_iter()
        .map(|v| {
            let d = d_functional(ring, v, &l0, n);
            (v.label.clone(), d.iter().any(|p| !p.is_zero()))
        })
        .collect();
    cases.sort_by_key(|(l, _)| (l.contains('+'), l.clone()));
    let pass = cases.iter().all(|(_, nz)| *nz);
    Ok(NonCartanReport {
        m,
        cases,
        pass,
        note: "D is linear and vanishes on the divergence algebra, so D(C + w) = D(C) for every w in it".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::CoeffPoly;

    fn ring() -> DiffRing {
        DiffRing::abstract_q()
    }

    #[test]
    fn euler_small_cases() {
        let r = ring();
        let y = JetPoly::var(1, 0, 0);
        let half = ratio(1, 2);
        assert_eq!(euler(&r, &y.pow(2).scale_rational(&half), 0), y);
        let y1 = JetPoly::var(1, 0, 1);
        let y2 = JetPoly::var(1, 0, 2);
        assert_eq!(euler(&r, &y1.pow(2).scale_rational(&half), 0), -&y2);
        assert_eq!(euler(&r, &(&y * &y2).scale_rational(&half), 0), y2);
    }

    #[test]
    fn self_adjointness() {
        let r = ring();
        let sys = normal_form(&r, 4, 1).unwrap();
        assert_eq!(check_self_adjoint(&r, &sys), Ok(true));
        assert_eq!(check_self_adjoint(&r, &normal_form(&r, 2, 2).unwrap()), Ok(true));
        let bad = sys.with_coefficient(3, sys.a(3) + &CoeffPoly::q(0));
        assert_eq!(check_self_adjoint(&r, &bad), Ok(false));
        assert_eq!(check_self_adjoint(&r, &normal_form(&r, 3, 1).unwrap()), Err(NotLagrangian { n: 3 }));
    }

    #[test]
    fn s_and_d_examples() {
        let r = ring();
        let (n, m) = (4, 2);
        let l0 = Lagrangian::standard(&normal_form(&r, n, m).unwrap());
        let fp = generators::make(GeneratorLabel::Fp, n, m).unwrap();
        assert!(s_functional(&r, &fp, &l0, n).is_zero());
        let r12 = generators::make(GeneratorLabel::R(1, 2), n, m).unwrap();
        assert!(s_functional(&r, &r12, &l0, n).is_zero());
        let s = generators::make(GeneratorLabel::S(1, 1), n, m).unwrap();
        let sv = s_functional(&r, &s, &l0, n);
        let top = crate::jetfield::JetMonomial::var(JetVar::new(0, n));
        let s1 = &crate::equations::solution_basis(n)[1];
        assert_eq!(sv.coefficient(&top), s1.scale(&ratio(1, 2)));
        assert!(d_functional(&r, &s, &l0, n).iter().all(JetPoly::is_zero));
        let h11 = generators::make(GeneratorLabel::H(1, 1), n, m).unwrap();
        let d = d_functional(&r, &h11, &l0, n);
        assert!(!d[0].is_zero());
        assert!(d[1].is_zero());
    }

    #[test]
    fn classification_n4_m2() {
        let Classification::Lagrangian(rep) = classify_algebra(&ring(), 4, 2).unwrap() else { panic!() };
        assert!(rep.pass, "{:?}", rep.checks);
        assert_eq!((rep.dim_div, rep.dim_var), (12, 4));
    }

    #[test]
    fn odd_order_is_not_lagrangian() {
        assert!(matches!(
            classify_algebra(&ring(), 3, 2).unwrap(),
            Classification::NotLagrangian(NotLagrangian { n: 3 })
        ));
    }

    #[test]
    fn non_cartan() {
        let rep = noncartan_exclusion(&ring(), 1).unwrap();
        assert!(rep.pass, "{:?}", rep.cases);
    }
}
