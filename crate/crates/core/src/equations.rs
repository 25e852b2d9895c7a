//! Isotropic normal-form systems built from the solution basis
//! `s_k = u^(n-1-k) v^k`, the third-order xi-equation and the determining
//! equations of the `g_F` generators.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::diffring::{ratio, CoeffPoly, DiffRing, Rational};
use crate::error::{Error, Result};
use crate::jetfield::JetPoly;

/// `y^(n) + A[2] y^(n-2) + ... + A[n] y = 0`, applied to each of the `m`
/// components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    n: usize,
    m: usize,
    /// `a[i]` holds `A[i + 2]`.
    a: Vec<CoeffPoly>,
}

impl LinearSystem {
    /// Builds a system from `A[2], ..., A[n]`.
    pub fn new(n: usize, m: usize, a: Vec<CoeffPoly>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidOrder(n, 2));
        }
        if m < 1 {
            return Err(Error::InvalidDimension(m));
        }
        assert_eq!(a.len(), n - 1, "expected A[2..={n}]");
        Ok(LinearSystem { n, m, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `A[j]` for `j` in `2..=n`.
    pub fn a(&self, j: usize) -> &CoeffPoly {
        &self.a[j - 2]
    }

    pub fn coefficients(&self) -> &[CoeffPoly] {
        &self.a
    }

    pub fn with_dimension(&self, m: usize) -> LinearSystem {
        LinearSystem { m, ..self.clone() }
    }

    /// Replaces `A[j]` (used for negative controls).
    pub fn with_coefficient(&self, j: usize, c: CoeffPoly) -> LinearSystem {
        let mut out = self.clone();
        out.a[j - 2] = c;
        out
    }

    /// `Δ_ν` as a jet polynomial (zero-based component).
    pub fn operator(&self, nu: usize) -> JetPoly {
        let mut p = JetPoly::var(self.m, nu, self.n);
        for j in 2..=self.n {
            p += &JetPoly::var(self.m, nu, self.n - j).scale(self.a(j));
        }
        p
    }

    /// `y_j^(n)` on the solution manifold: `-(A[2] y_j^(n-2) + ... + A[n] y_j)`.
    pub fn top_derivative_elimination(&self, comp: usize) -> JetPoly {
        let mut p = JetPoly::zero(self.m);
        for j in 2..=self.n {
            p -= &JetPoly::var(self.m, comp, self.n - j).scale(self.a(j));
        }
        p
    }

    pub fn scalar_operator(&self) -> ScalarOperator {
        let mut coeffs = vec![CoeffPoly::zero(); self.n + 1];
        coeffs[self.n] = CoeffPoly::one();
        for j in 2..=self.n {
            coeffs[self.n - j] = self.a(j).clone();
        }
        ScalarOperator { coeffs }
    }

    pub fn specialize(&self, ring: &DiffRing) -> LinearSystem {
        LinearSystem { a: self.a.iter().map(|c| ring.specialize(c)).collect(), ..self.clone() }
    }
}

/// A scalar linear differential operator `Σ coeffs[k] D^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarOperator {
    pub coeffs: Vec<CoeffPoly>,
}

impl ScalarOperator {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Applies the operator to a ring element.
    pub fn apply(&self, ring: &DiffRing, f: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        let mut d = f.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                d = ring.derive(&d);
            }
            if !c.is_zero() {
                out += &(c * &d);
            }
        }
        out
    }
}

/// `s_k = u^(n-1-k) v^k` for `k = 0..n-1`.
pub fn solution_basis(n: usize) -> Vec<CoeffPoly> {
    (0..n).map(|k| &CoeffPoly::u().pow((n - 1 - k) as u32) * &CoeffPoly::v().pow(k as u32)).collect()
}

/// Determinant by Laplace expansion along rows, memoized over column subsets.
pub fn determinant(rows: &[Vec<CoeffPoly>]) -> CoeffPoly {
    let n = rows.len();
    if n == 0 {
        return CoeffPoly::one();
    }
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    assert!(n < 24, "determinant too large for subset memoization");
    let mut minors: Vec<Option<CoeffPoly>> = vec![None; 1 << n];
    minors[0] = Some(CoeffPoly::one());
    let mut masks: Vec<usize> = (1..(1usize << n)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let r = mask.count_ones() as usize - 1;
        let mut acc = CoeffPoly::zero();
        let mut pos = 0;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let entry = &rows[r][c];
            if !entry.is_zero() {
                let minor = minors[mask & !(1 << c)].as_ref().unwrap();
                if !minor.is_zero() {
                    let t = entry * minor;
                    if (r + pos).is_multiple_of(2) {
                        acc += &t;
                    } else {
                        acc -= &t;
                    }
                }
            }
            pos += 1;
        }
        minors[mask] = Some(acc);
    }
    minors.pop().unwrap().unwrap()
}

/// Rows `D^r s_k` for `r = 0..=rows-1`.
fn derivative_rows(ring: &DiffRing, funcs: &[CoeffPoly], rows: usize) -> Vec<Vec<CoeffPoly>> {
    let mut out = vec![funcs.to_vec()];
    for _ in 1..rows {
        let next: Vec<CoeffPoly> = out.last().unwrap().par_iter().map(|f| ring.derive(f)).collect();
        out.push(next);
    }
    out
}

/// The Wronskian `w(s_0, ..., s_{n-1})` reduced in the ring.
pub fn wronskian(ring: &DiffRing, funcs: &[CoeffPoly]) -> CoeffPoly {
    determinant(&derivative_rows(ring, funcs, funcs.len()))
}

/// The scalar operator annihilating `funcs`, normalized to leading
/// coefficient one: the expansion of `w(y, f_1, ..., f_d) / w(f_1, ..., f_d)`
/// along the `y` column. Returns the coefficients of `y^(0..=d)`.
pub fn annihilator(ring: &DiffRing, funcs: &[CoeffPoly]) -> Result<Vec<CoeffPoly>> {
    let d = funcs.len();
    let rows = derivative_rows(ring, funcs, d + 1);
    let minors: Vec<CoeffPoly> = (0..=d)
        .into_par_iter()
        .map(|skip| {
            let sub: Vec<Vec<CoeffPoly>> =
                rows.iter().enumerate().filter(|(r, _)| *r != skip).map(|(_, row)| row.clone()).collect();
            determinant(&sub)
        })
        .collect();
    // det = Σ_r (-1)^r y^(r) M_r
    let signed = |r: usize| {
        if r.is_multiple_of(2) {
            minors[r].clone()
        } else {
            -&minors[r]
        }
    };
    let lead = signed(d);
    let lead_c = match lead.as_constant() {
        Some(c) if !c.is_zero() => c,
        _ => return Err(Error::DegenerateWronskian(lead.to_string())),
    };
    let inv = Rational::one() / lead_c;
    Ok((0..=d).map(|r| signed(r).scale(&inv)).collect())
}

/// The isotropic normal form of order `n` and dimension `m` whose scalar
/// operator annihilates the solution basis.
pub fn normal_form(ring: &DiffRing, n: usize, m: usize) -> Result<LinearSystem> {
    if n < 2 {
        return Err(Error::InvalidOrder(n, 2));
    }
    if m < 1 {
        return Err(Error::InvalidDimension(m));
    }
    let coeffs = annihilator(ring, &solution_basis(n))?;
    if !coeffs[n - 1].is_zero() {
        return Err(Error::DegenerateWronskian(format!("y^(n-1) coefficient {} does not vanish", coeffs[n - 1])));
    }
    let a: Vec<CoeffPoly> = (2..=n).map(|j| coeffs[n - j].clone()).collect();
    if let Some(bad) = a.iter().find(|c| c.involves_solutions()) {
        return Err(Error::DegenerateWronskian(format!("coefficient {bad} does not reduce to the q-subring")));
    }
    LinearSystem::new(n, m, a)
}

/// `y''' + 4 q y' + 2 q' y`.
pub fn xi_equation(ring: &DiffRing) -> ScalarOperator {
    ScalarOperator {
        coeffs: vec![
            &CoeffPoly::int(2) * &ring.q_derivative(1),
            &CoeffPoly::int(4) * &ring.q(),
            CoeffPoly::zero(),
            CoeffPoly::one(),
        ],
    }
}

/// True iff `phi' - (n-1)/2 xi'' = 0` and `xi` solves the xi-equation.
pub fn determining_check(ring: &DiffRing, xi: &CoeffPoly, phi: &CoeffPoly, n: usize) -> bool {
    let half = ratio(n as i64 - 1, 2);
    let first = &ring.derive(phi) - &ring.derive_n(xi, 2).scale(&half);
    first.is_zero() && xi_equation(ring).apply(ring, xi).is_zero()
}

/// The three `xi` functions spanning the `g_F` projection: `v^2, 2uv, -u^2`.
pub fn xi_basis() -> [CoeffPoly; 3] {
    [CoeffPoly::v().pow(2), &CoeffPoly::int(2) * &(&CoeffPoly::u() * &CoeffPoly::v()), -&CoeffPoly::u().pow(2)]
}
