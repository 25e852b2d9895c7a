//! The named symmetry generators `H_ij`, `S_kj`, `F_p`, `F_m`, `F_z`, the
//! derived `H_0`, `R_ij`, and the second-order non-Cartan fields `C_ik`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diffring::{ratio, CoeffPoly, DiffRing};
use crate::equations::{solution_basis, xi_equation};
use crate::error::{Error, Result};
use crate::jetfield::{JetPoly, VectorField};

/// Generator names; indices are one-based, `k` in `S(k, j)` is zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorLabel {
    H(usize, usize),
    S(usize, usize),
    Fp,
    Fm,
    Fz,
    H0,
    R(usize, usize),
    C(usize, usize),
}

impl GeneratorLabel {
    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        let ok = match *self {
            GeneratorLabel::H(i, j) => (1..=m).contains(&i) && (1..=m).contains(&j),
            GeneratorLabel::S(k, j) => k < n && (1..=m).contains(&j),
            GeneratorLabel::Fp | GeneratorLabel::Fm | GeneratorLabel::Fz | GeneratorLabel::H0 => true,
            GeneratorLabel::R(i, j) => i < j && j <= m && i >= 1,
            GeneratorLabel::C(i, k) => n == 2 && (1..=m).contains(&i) && (k == 1 || k == 2),
        };
        if n < 2 {
            return Err(Error::InvalidOrder(n, 2));
        }
        if m < 1 {
            return Err(Error::InvalidDimension(m));
        }
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLabel { label: self.to_string(), n, m })
        }
    }

    pub fn is_f(&self) -> bool {
        matches!(self, GeneratorLabel::Fp | GeneratorLabel::Fm | GeneratorLabel::Fz)
    }

    /// Parses the display form (`H_12`, `H_1,10`, `S_0,1`, `F_p`, `R_12`, `C_1,2`, `H_0`).
    pub fn parse(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("unknown generator label `{s}`"));
        let (kind, idx) = s.split_once('_').ok_or_else(err)?;
        let pair = |idx: &str| -> Result<(usize, usize)> {
            let parts: Vec<&str> = if idx.contains(',') {
                idx.split(',').collect()
            } else if idx.len() == 2 {
                vec![&idx[..1], &idx[1..]]
            } else {
                return Err(err());
            };
            match parts.as_slice() {
                [a, b] => Ok((a.parse().map_err(|_| err())?, b.parse().map_err(|_| err())?)),
                _ => Err(err()),
            }
        };
        match (kind, idx) {
            ("F", "p") => Ok(GeneratorLabel::Fp),
            ("F", "m") => Ok(GeneratorLabel::Fm),
            ("F", "z") => Ok(GeneratorLabel::Fz),
            ("H", "0") => Ok(GeneratorLabel::H0),
            ("H", i) => pair(i).map(|(a, b)| GeneratorLabel::H(a, b)),
            ("S", i) => pair(i).map(|(a, b)| GeneratorLabel::S(a, b)),
            ("R", i) => pair(i).map(|(a, b)| GeneratorLabel::R(a, b)),
            ("C", i) => pair(i).map(|(a, b)| GeneratorLabel::C(a, b)),
            _ => Err(err()),
        }
    }
}

fn pair_name(a: usize, b: usize) -> String {
    if a < 10 && b < 10 {
        format!("{a}{b}")
    } else {
        format!("{a},{b}")
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorLabel::H(i, j) => write!(f, "H_{}", pair_name(i, j)),
            GeneratorLabel::S(k, j) => write!(f, "S_{k},{j}"),
            GeneratorLabel::Fp => write!(f, "F_p"),
            GeneratorLabel::Fm => write!(f, "F_m"),
            GeneratorLabel::Fz => write!(f, "F_z"),
            GeneratorLabel::H0 => write!(f, "H_0"),
            GeneratorLabel::R(i, j) => write!(f, "R_{}", pair_name(i, j)),
            GeneratorLabel::C(i, k) => write!(f, "C_{i},{k}"),
        }
    }
}

/// A labelled generator.
#[derive(Clone, Debug)]
pub struct Generator {
    pub label: GeneratorLabel,
    pub field: VectorField,
}

fn y(m: usize, i: usize) -> JetPoly {
    JetPoly::var(m, i - 1, 0)
}

/// `c(x) Σ_i y_i ∂_i` components.
fn radial(m: usize, c: &CoeffPoly) -> Vec<JetPoly> {
    (1..=m).map(|i| y(m, i).scale(c)).collect()
}

fn f_field(label: GeneratorLabel, xi: CoeffPoly, phi: CoeffPoly, m: usize) -> VectorField {
    VectorField::new_unchecked(label.to_string(), JetPoly::constant(m, xi), radial(m, &phi))
}

/// Builds the vector field for `label` at order `n` and dimension `m`.
pub fn make(label: GeneratorLabel, n: usize, m: usize) -> Result<VectorField> {
    label.validate(n, m)?;
    let (u, v, du, dv) = (CoeffPoly::u(), CoeffPoly::v(), CoeffPoly::du(), CoeffPoly::dv());
    let nm1 = CoeffPoly::int(n as i64 - 1);
    let name = label.to_string();
    let field = match label {
        GeneratorLabel::H(i, j) => {
            let mut phi = vec![JetPoly::zero(m); m];
            phi[j - 1] = y(m, i);
            VectorField::new_unchecked(name, JetPoly::zero(m), phi)
        }
        GeneratorLabel::S(k, j) => {
            let mut phi = vec![JetPoly::zero(m); m];
            phi[j - 1] = JetPoly::constant(m, solution_basis(n).swap_remove(k));
            VectorField::new_unchecked(name, JetPoly::zero(m), phi)
        }
        GeneratorLabel::Fp => f_field(label, v.pow(2), &nm1 * &(&v * &dv), m),
        GeneratorLabel::Fm => f_field(label, -&u.pow(2), -&(&nm1 * &(&u * &du)), m),
        GeneratorLabel::Fz => f_field(label, &CoeffPoly::int(2) * &(&u * &v), &nm1 * &(&(&u * &dv) + &(&du * &v)), m),
        GeneratorLabel::H0 => VectorField::new_unchecked(name, JetPoly::zero(m), radial(m, &CoeffPoly::one())),
        GeneratorLabel::R(i, j) => {
            make(GeneratorLabel::H(i, j), n, m)?.sub(&make(GeneratorLabel::H(j, i), n, m)?).with_label(name)
        }
        GeneratorLabel::C(i, k) => {
            let (uk, duk) = if k == 1 { (u, du) } else { (v, dv) };
            let yi = y(m, i);
            let phi = (1..=m).map(|j| (&yi * &y(m, j)).scale(&duk)).collect();
            VectorField::new_unchecked(name, yi.scale(&uk), phi)
        }
    };
    Ok(field)
}

/// `xi ∂_x + ((n-1)/2) xi' Σ y_i ∂_i` with the integration constant dropped.
pub fn general_gf(ring: &DiffRing, xi: &CoeffPoly, n: usize, m: usize) -> Result<VectorField> {
    if !xi_equation(ring).apply(ring, xi).is_zero() {
        return Err(Error::NotXiSolution(xi.to_string()));
    }
    let phi = ring.derive(xi).scale(&ratio(n as i64 - 1, 2));
    Ok(VectorField::new_unchecked(format!("gF({xi})"), JetPoly::constant(m, xi.clone()), radial(m, &phi)))
}

/// The labels of the Lie point symmetry basis in canonical order:
/// `H` row-major, `S` by `(k, j)`, `F_p, F_m, F_z`, then `C` when `n = 2`.
pub fn basis_labels(n: usize, m: usize) -> Result<Vec<GeneratorLabel>> {
    if n < 2 {
        return Err(Error::InvalidOrder(n, 2));
    }
    if m < 1 {
        return Err(Error::InvalidDimension(m));
    }
    let mut out = Vec::with_capacity(m * m + n * m + 3 + 2 * m);
    for i in 1..=m {
        for j in 1..=m {
            out.push(GeneratorLabel::H(i, j));
        }
    }
    for k in 0..n {
        for j in 1..=m {
            out.push(GeneratorLabel::S(k, j));
        }
    }
    out.extend([GeneratorLabel::Fp, GeneratorLabel::Fm, GeneratorLabel::Fz]);
    if n == 2 {
        for i in 1..=m {
            for k in 1..=2 {
                out.push(GeneratorLabel::C(i, k));
            }
        }
    }
    Ok(out)
}

/// All basis generators for `(n, m)`.
pub fn basis(n: usize, m: usize) -> Result<Vec<Generator>> {
    basis_labels(n, m)?.into_iter().map(|label| Ok(Generator { label, field: make(label, n, m)? })).collect()
}

/// Expected dimension of the point symmetry algebra.
pub fn expected_dimension(n: usize, m: usize) -> usize {
    if n == 2 {
        m * m + 4 * m + 3
    } else {
        m * m + n * m + 3
    }
}

/// The rotations `R_ij`, `i < j`.
pub fn rotation_labels(m: usize) -> Vec<GeneratorLabel> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            out.push(GeneratorLabel::R(i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip_and_validate() {
        for l in basis_labels(3, 2).unwrap() {
            assert_eq!(GeneratorLabel::parse(&l.to_string()).unwrap(), l);
        }
        assert_eq!(GeneratorLabel::H(1, 2).to_string(), "H_12");
        assert_eq!(GeneratorLabel::S(0, 1).to_string(), "S_0,1");
        assert_eq!(GeneratorLabel::C(1, 1).to_string(), "C_1,1");
        assert!(GeneratorLabel::C(1, 1).validate(3, 1).is_err());
        assert!(GeneratorLabel::S(3, 1).validate(3, 1).is_err());
        assert!(GeneratorLabel::R(2, 1).validate(3, 2).is_err());
        assert!(GeneratorLabel::H(1, 3).validate(3, 2).is_err());
    }

    #[test]
    fn make_examples() {
        let h = make(GeneratorLabel::H(1, 2), 4, 2).unwrap();
        assert!(h.xi.is_zero() && h.phi[0].is_zero());
        assert_eq!(h.phi[1], JetPoly::var(2, 0, 0));
        let s = make(GeneratorLabel::S(1, 1), 3, 1).unwrap();
        assert_eq!(s.phi[0], JetPoly::constant(1, &CoeffPoly::u() * &CoeffPoly::v()));
        let fz = make(GeneratorLabel::Fz, 3, 1).unwrap();
        assert_eq!(fz.xi, JetPoly::constant(1, &CoeffPoly::int(2) * &(&CoeffPoly::u() * &CoeffPoly::v())));
        let phi = &(&CoeffPoly::u() * &CoeffPoly::dv()) + &(&CoeffPoly::du() * &CoeffPoly::v());
        assert_eq!(fz.phi[0], JetPoly::var(1, 0, 0).scale(&(&CoeffPoly::int(2) * &phi)));
    }

    #[test]
    fn general_gf_recovers_triple() {
        let r = DiffRing::abstract_q();
        let (n, m) = (4, 2);
        let v2 = CoeffPoly::v().pow(2);
        assert_eq!(general_gf(&r, &v2, n, m).unwrap().phi, make(GeneratorLabel::Fp, n, m).unwrap().phi);
        let mu2 = -&CoeffPoly::u().pow(2);
        let fm = make(GeneratorLabel::Fm, n, m).unwrap();
        let g = general_gf(&r, &mu2, n, m).unwrap();
        assert_eq!((g.xi, g.phi), (fm.xi, fm.phi));
        let uv = &CoeffPoly::u() * &CoeffPoly::v();
        let half_fz = make(GeneratorLabel::Fz, n, m).unwrap().scale(&crate::diffring::ratio(1, 2));
        let g = general_gf(&r, &uv, n, m).unwrap();
        assert_eq!((g.xi, g.phi), (half_fz.xi, half_fz.phi));
        assert!(matches!(general_gf(&r, &CoeffPoly::u(), n, m), Err(Error::NotXiSolution(_))));
    }

    #[test]
    fn basis_counts() {
        assert_eq!(basis(3, 2).unwrap().len(), 13);
        assert_eq!(basis(2, 2).unwrap().len(), 15);
        assert_eq!(basis(4, 1).unwrap().len(), 8);
        for (n, m) in [(2, 1), (2, 3), (5, 2), (4, 3)] {
            assert_eq!(basis(n, m).unwrap().len(), expected_dimension(n, m));
        }
    }
}
