//! Dense polynomials with complex coefficients.

use std::ops::{Add, Mul, Sub};

use crate::scalar::{cone, czero, Cx, Real};

/// Polynomial `c[0] + c[1] z + ... + c[n] z^n`, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial<T> {
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> ComplexPolynomial<T> {
    pub fn new(coeffs: Vec<Cx<T>>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `prod (z - r)` over the given roots.
    pub fn from_roots(roots: &[Cx<T>]) -> Self {
        roots.iter().fold(Self::constant(cone()), |acc, &r| &acc * &Self::new(vec![-r, cone()]))
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Cx<T>> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> Cx<T> {
        self.coeffs.get(k).copied().unwrap_or_else(czero)
    }

    /// Degree ignoring exact-zero leading coefficients; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.re != T::zero() || c.im != T::zero())
    }

    /// Degree ignoring leading coefficients with modulus at most `tol`.
    pub fn effective_degree(&self, tol: T) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.norm() > tol)
    }

    pub fn eval(&self, z: Cx<T>) -> Cx<T> {
        self.coeffs.iter().rev().fold(czero(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * T::count(k)).collect();
        Self { coeffs }
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Coefficients of the two-variable divided difference
    /// `(p(z) - p(t)) / (z - t) = sum_{i,j} d[i][j] z^i t^j`.
    ///
    /// Built by synthetic division of `p(z) - p(t)` by `z - t`; the result has
    /// total degree `deg p - 1` and `d[i][j] = c[i + j + 1]`.
    pub fn divided_difference(&self) -> Vec<Vec<Cx<T>>> {
        let n = match self.degree() {
            Some(n) if n > 0 => n,
            _ => return Vec::new(),
        };
        // Synthetic division in z with coefficients that are polynomials in t:
        // b_{n-1} = c_n, b_{k-1} = c_k + t b_k.
        let mut rows: Vec<Vec<Cx<T>>> = vec![Vec::new(); n];
        rows[n - 1] = vec![self.coeffs[n]];
        for k in (1..n).rev() {
            let mut next = vec![czero(); rows[k].len() + 1];
            next[0] = self.coeffs[k];
            for (j, &b) in rows[k].iter().enumerate() {
                next[j + 1] = next[j + 1] + b;
            }
            rows[k - 1] = next;
        }
        rows
    }
}

impl<T: Real> Add for &ComplexPolynomial<T> {
    type Output = ComplexPolynomial<T>;

    fn add(self, rhs: Self) -> ComplexPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Real> Sub for &ComplexPolynomial<T> {
    type Output = ComplexPolynomial<T>;

    fn sub(self, rhs: Self) -> ComplexPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Real> Mul for &ComplexPolynomial<T> {
    type Output = ComplexPolynomial<T>;

    fn mul(self, rhs: Self) -> ComplexPolynomial<T> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return ComplexPolynomial::zero();
        }
        let mut out = vec![czero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        ComplexPolynomial::new(out)
    }
}

/// Power series of `sqrt(p(u))` to `terms` coefficients, for a series `p` with `p[0] = 1`.
pub(crate) fn sqrt_series<T: Real>(p: &[Cx<T>], terms: usize) -> Vec<Cx<T>> {
    let half = T::lit(0.5);
    let mut s: Vec<Cx<T>> = Vec::with_capacity(terms);
    for n in 0..terms {
        if n == 0 {
            s.push(cone());
            continue;
        }
        let pn = p.get(n).copied().unwrap_or_else(czero);
        let cross = (1..n).fold(czero(), |acc, k| acc + s[k] * s[n - k]);
        s.push((pn - cross) * half);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    #[test]
    fn from_roots_expands_product() {
        let p = ComplexPolynomial::from_roots(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
        assert_eq!(p.coeffs(), &[C64::new(-1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn divided_difference_matches_definition() {
        let p = ComplexPolynomial::new(vec![
            C64::new(0.3, -1.0),
            C64::new(2.0, 0.5),
            C64::new(-1.0, 0.0),
            C64::new(0.5, 0.25),
        ]);
        let d = p.divided_difference();
        let (z, t) = (C64::new(0.7, 0.2), C64::new(-0.4, 1.1));
        let mut v = C64::new(0.0, 0.0);
        for (i, row) in d.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                v += c * z.powu(i as u32) * t.powu(j as u32);
            }
        }
        let direct = (p.eval(z) - p.eval(t)) / (z - t);
        assert!((v - direct).norm() < 1e-14);
    }

    #[test]
    fn monic_linear_divided_difference_is_one() {
        let p = ComplexPolynomial::new(vec![C64::new(-0.25, 0.1), C64::new(1.0, 0.0)]);
        let d = p.divided_difference();
        assert_eq!(d, vec![vec![C64::new(1.0, 0.0)]]);
    }

    #[test]
    fn sqrt_series_squares_back() {
        let p = [C64::new(1.0, 0.0), C64::new(-0.6, 0.2), C64::new(0.1, 0.0)];
        let s = sqrt_series(&p, 6);
        for n in 0..6 {
            let sq: C64 = (0..=n).map(|k| s[k] * s[n - k]).sum();
            let want = p.get(n).copied().unwrap_or_default();
            assert!((sq - want).norm() < 1e-15, "n={n}");
        }
    }
}
