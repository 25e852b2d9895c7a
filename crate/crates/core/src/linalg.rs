//! Exact linear algebra over the rationals: an incremental sparse echelon
//! basis (span membership with coordinates) and small dense routines.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::diffring::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

fn axpy<K: Ord + Clone>(target: &mut SparseVec<K>, a: &Rational, x: &SparseVec<K>) {
    for (k, v) in x {
        let entry = target.entry(k.clone()).or_insert_with(Rational::zero);
        *entry += a * v;
        if entry.is_zero() {
            target.remove(k);
        }
    }
}

#[derive(Clone, Debug)]
struct EchelonRow<K> {
    pivot: K,
    vec: SparseVec<K>,
    /// This row as a combination of the inserted inputs.
    combo: Vec<Rational>,
}

/// Incrementally built echelon form of a list of sparse vectors.
#[derive(Clone, Debug)]
pub struct Echelon<K> {
    rows: Vec<EchelonRow<K>>,
    inputs: usize,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), inputs: 0 }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Reduces `v`; returns the residual and the coefficients `a_i` (over the
    /// inputs) with `v = Σ a_i input_i + residual`.
    pub fn reduce(&self, v: &SparseVec<K>) -> (Vec<Rational>, SparseVec<K>) {
        let mut rem = v.clone();
        let mut coords = vec![Rational::zero(); self.inputs];
        for row in &self.rows {
            let Some(c) = rem.get(&row.pivot).cloned() else { continue };
            axpy(&mut rem, &-c.clone(), &row.vec);
            for (i, t) in row.combo.iter().enumerate() {
                if !t.is_zero() {
                    coords[i] += &c * t;
                }
            }
        }
        (coords, rem)
    }

    /// Adds `v` as the next input. On dependence returns the coefficients
    /// expressing `v` through the earlier inputs (the input is still counted).
    pub fn insert(&mut self, v: &SparseVec<K>) -> Result<(), Vec<Rational>> {
        let (coords, rem) = self.reduce(v);
        self.inputs += 1;
        for row in &mut self.rows {
            row.combo.push(Rational::zero());
        }
        let Some((pivot, pv)) = rem.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return Err(coords);
        };
        let inv = Rational::one() / pv;
        let vec: SparseVec<K> = rem.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        // row = (v - Σ coords_i input_i) * inv
        let mut combo: Vec<Rational> = coords.iter().map(|c| -c * &inv).collect();
        combo.push(inv);
        self.rows.push(EchelonRow { pivot, vec, combo });
        Ok(())
    }

    /// Coordinates of `v` over the inputs if `v` lies in their span.
    pub fn express(&self, v: &SparseVec<K>) -> Option<Vec<Rational>> {
        let (coords, rem) = self.reduce(v);
        rem.is_empty().then_some(coords)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).1.is_empty()
    }
}

/// Converts a dense vector to sparse form.
pub fn sparse(v: &[Rational]) -> SparseVec<usize> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// Reduced row echelon form; returns the matrix and pivot columns.
pub fn rref(m: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Rational::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    rref(m).1.len()
}

/// Determinant by fraction-based Gaussian elimination.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = Rational::one() / a[c][c].clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// A basis of `{x : M x = 0}`.
pub fn nullspace(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return (0..cols)
            .map(|i| (0..cols).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
    }
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -r[row][f].clone();
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::rat;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn echelon_detects_dependence_and_expresses() {
        let mut e: Echelon<usize> = Echelon::new();
        assert!(e.insert(&sparse(&v(&[1, 2, 0]))).is_ok());
        assert!(e.insert(&sparse(&v(&[0, 1, 1]))).is_ok());
        let dep = e.insert(&sparse(&v(&[2, 7, 3]))).unwrap_err();
        assert_eq!(dep, v(&[2, 3]));
        assert_eq!(e.express(&sparse(&v(&[1, 3, 1]))).unwrap(), v(&[1, 1, 0]));
        assert!(e.express(&sparse(&v(&[0, 0, 1]))).is_none());
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn dense_routines() {
        let m = vec![v(&[2, 1]), v(&[4, 3])];
        assert_eq!(determinant(&m), rat(2));
        assert_eq!(rank(&[v(&[1, 2, 3]), v(&[2, 4, 6])]), 1);
        let ns = nullspace(&[v(&[1, 2, 3]), v(&[2, 4, 6])], 3);
        assert_eq!(ns.len(), 2);
        for x in ns {
            assert!((0..3).map(|i| rat([1, 2, 3][i]) * &x[i]).sum::<Rational>().is_zero());
        }
        assert_eq!(determinant(&[v(&[0, 1]), v(&[1, 0])]), rat(-1));
    }
}
