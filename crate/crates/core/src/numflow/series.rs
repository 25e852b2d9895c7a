//! Truncated power series in one variable with `f64` coefficients.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    /// `c[k]` multiplies `ε^k`; length is `degree + 1`.
    pub c: Vec<f64>,
}

impl Series {
    pub fn zero(degree: usize) -> Self {
        Series { c: vec![0.0; degree + 1] }
    }

    pub fn constant(degree: usize, a: f64) -> Self {
        let mut s = Self::zero(degree);
        s.c[0] = a;
        s
    }

    /// `a + ε`.
    pub fn variable(degree: usize, a: f64) -> Self {
        let mut s = Self::constant(degree, a);
        if degree > 0 {
            s.c[1] = 1.0;
        }
        s
    }

    pub fn from_coeffs(degree: usize, coeffs: &[f64]) -> Self {
        let mut s = Self::zero(degree);
        for (t, c) in s.c.iter_mut().zip(coeffs) {
            *t = *c;
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn scale(&self, a: f64) -> Series {
        Series { c: self.c.iter().map(|x| x * a).collect() }
    }

    pub fn powi(&self, e: u32) -> Series {
        let mut out = Series::constant(self.degree(), 1.0);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `Σ a_r (self - self_0)^r` for Taylor coefficients `a` of a function
    /// about `self_0`.
    pub fn compose_taylor(&self, a: &[f64]) -> Series {
        let n = self.degree();
        let mut delta = self.clone();
        delta.c[0] = 0.0;
        let mut acc = Series::zero(n);
        for r in (0..a.len().min(n + 1)).rev() {
            acc = &acc * &delta;
            acc.c[0] += a[r];
        }
        acc
    }

    /// `self(b(δ))` where `b` has zero constant term.
    pub fn compose(&self, b: &Series) -> Series {
        debug_assert!(b.c[0] == 0.0);
        let mut acc = Series::zero(b.degree());
        for r in (0..=self.degree()).rev() {
            acc = &acc * b;
            acc.c[0] += self.c[r];
        }
        acc
    }

    /// The series `b` with `self(b(δ)) - self_0 = δ`. Requires `c[1] != 0`.
    pub fn revert(&self) -> Option<Series> {
        let n = self.degree();
        let a1 = *self.c.get(1)?;
        if a1 == 0.0 || !a1.is_finite() {
            return None;
        }
        let mut shifted = self.clone();
        shifted.c[0] = 0.0;
        let mut b = Series::zero(n);
        b.c[1] = 1.0 / a1;
        for k in 2..=n {
            let comp = shifted.compose(&b);
            b.c[k] -= comp.c[k] / a1;
        }
        Some(b)
    }

    /// `f^(k)(0)` for `k = 0..=degree`.
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.c
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as f64;
                }
                c * fact
            })
            .collect()
    }
}

impl<'a> Add<&'a Series> for &Series {
    type Output = Series;
    fn add(self, o: &'a Series) -> Series {
        Series { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Series> for &Series {
    type Output = Series;
    fn sub(self, o: &'a Series) -> Series {
        Series { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a Series> for &Series {
    type Output = Series;
    fn mul(self, o: &'a Series) -> Series {
        let n = self.degree().min(o.degree());
        let mut c = vec![0.0; n + 1];
        for (i, a) in self.c.iter().enumerate().take(n + 1) {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n + 1 - i) {
                c[i + j] += a * b;
            }
        }
        Series { c }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(-1.0)
    }
}
