//! Chebyshev series on first-kind Chebyshev points.
//!
//! The grid holds the `m` zeros of `T_m` in ascending order,
//! `tau_k = cos(theta_k)` with `theta_k = pi (2(m-k) - 1) / (2m)`.
//! Every `cos(n theta_k)` is an entry of a table of `cos(pi i / (2m))`, so
//! the discrete transforms below are exact up to rounding.

use crate::scalar::{czero, Cx, Real};

#[derive(Debug, Clone)]
pub(crate) struct ChebGrid<T> {
    m: usize,
    tau: Vec<T>,
    theta: Vec<T>,
    /// `cos(pi i / (2m))`, `i = 0..4m`.
    cos_table: Vec<T>,
}

impl<T: Real> ChebGrid<T> {
    pub fn new(m: usize) -> Self {
        assert!(m >= 2, "Chebyshev grid needs at least two points");
        let two_m = T::count(2 * m);
        let cos_table: Vec<T> = (0..4 * m).map(|i| (T::PI() * T::count(i) / two_m).cos()).collect();
        let theta: Vec<T> = (0..m).map(|k| T::PI() * T::count(2 * (m - k) - 1) / two_m).collect();
        let tau = (0..m).map(|k| cos_table[2 * (m - k) - 1]).collect();
        Self { m, tau, theta, cos_table }
    }

    pub fn tau(&self) -> &[T] {
        &self.tau
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    /// `cos(n theta_k)`.
    #[inline]
    pub fn cos_n_theta(&self, n: usize, k: usize) -> T {
        let j = 2 * (self.m - k) - 1;
        self.cos_table[(n * j) % (4 * self.m)]
    }

    /// Chebyshev coefficients `c_0..c_{m-1}` of the interpolant through `values`.
    pub fn coefficients(&self, values: &[Cx<T>]) -> Vec<Cx<T>> {
        debug_assert_eq!(values.len(), self.m);
        let scale = T::lit(2.0) / T::count(self.m);
        let mut c: Vec<Cx<T>> = (0..self.m)
            .map(|n| {
                let s = values.iter().enumerate().fold(czero(), |acc, (k, &v)| acc + v * self.cos_n_theta(n, k));
                s * scale
            })
            .collect();
        c[0] = c[0] * T::lit(0.5);
        c
    }

    /// Values of the series at the grid points.
    pub fn values_at_nodes(&self, coeffs: &[Cx<T>]) -> Vec<Cx<T>> {
        (0..self.m)
            .map(|k| coeffs.iter().enumerate().fold(czero(), |acc, (n, &c)| acc + c * self.cos_n_theta(n, k)))
            .collect()
    }

    /// Derivative `d/dtau` of the interpolant, sampled at the grid points.
    pub fn differentiate(&self, values: &[Cx<T>]) -> Vec<Cx<T>> {
        let c = self.coefficients(values);
        self.values_at_nodes(&derivative_coefficients(&c))
    }

    /// Fejer's first rule on this grid: `int_{-1}^{1} f dtau ~ sum w_k f(tau_k)`.
    pub fn fejer_weights(&self) -> Vec<T> {
        fejer_weights(self.m)
    }
}

/// Fejer weights for the `m` first-kind points in ascending order, by one FFT of length `2m`.
pub(crate) fn fejer_weights<T: Real>(m: usize) -> Vec<T> {
    use rustfft::FftPlanner;
    let two_m = 2 * m;
    let mf = T::count(m);
    let mut buf = vec![czero::<T>(); two_m];
    buf[0] = Cx::new(T::lit(2.0) / mf, T::zero());
    for j in 1..=m / 2 {
        let n = 2 * j;
        if n >= m {
            break;
        }
        let jj = T::count(j);
        let a = -T::lit(4.0) / (mf * (T::lit(4.0) * jj * jj - T::one()));
        buf[n] = crate::scalar::cis(T::PI() * T::count(n) / T::count(two_m)) * a;
    }
    FftPlanner::<T>::new().plan_fft_inverse(two_m).process(&mut buf);
    // buf[q] is the weight at theta = pi (2q + 1) / (2m); ascending tau reverses q.
    (0..m).map(|k| buf[m - 1 - k].re).collect()
}

/// Coefficients of the derivative series (same length, last entry zero).
pub(crate) fn derivative_coefficients<T: Real>(c: &[Cx<T>]) -> Vec<Cx<T>> {
    let n = c.len();
    let mut b = vec![czero::<T>(); n + 2];
    for k in (1..n).rev() {
        b[k - 1] = b[k + 1] + c[k] * T::count(2 * k);
    }
    let mut d: Vec<Cx<T>> = b[..n].to_vec();
    d[0] = d[0] * T::lit(0.5);
    d
}

/// Antiderivative coefficients, normalised to vanish at `tau = -1`.
pub(crate) fn integral_coefficients<T: Real>(c: &[Cx<T>]) -> Vec<Cx<T>> {
    let n = c.len();
    let at = |k: usize| c.get(k).copied().unwrap_or_else(czero);
    let mut out = vec![czero::<T>(); n + 1];
    out[1] = at(0) - at(2) * T::lit(0.5);
    for (k, o) in out.iter_mut().enumerate().skip(2) {
        *o = (at(k - 1) - at(k + 1)) / T::count(2 * k);
    }
    let mut at_minus_one = czero();
    for (k, &v) in out.iter().enumerate().skip(1) {
        at_minus_one = if k % 2 == 0 { at_minus_one + v } else { at_minus_one - v };
    }
    out[0] = -at_minus_one;
    out
}

/// Clenshaw evaluation of `sum c_n T_n(x)` at real `x`.
pub(crate) fn clenshaw<T: Real>(c: &[Cx<T>], x: T) -> Cx<T> {
    let two_x = x + x;
    let mut b1 = czero::<T>();
    let mut b2 = czero::<T>();
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + b1 * two_x - b2;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or_else(czero) + b1 * x - b2
}

/// Chebyshev polynomial of the second kind `U_n(x)` for real `x`.
pub fn chebyshev_u<T: Real>(n: usize, x: T) -> T {
    let (mut u0, mut u1) = (T::one(), x + x);
    if n == 0 {
        return u0;
    }
    for _ in 1..n {
        let u2 = (x + x) * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    u1
}

/// Chebyshev polynomial of the first kind `T_n(z)` for complex `z`.
pub fn chebyshev_t_complex<T: Real>(n: usize, z: Cx<T>) -> Cx<T> {
    let mut t0 = Cx::new(T::one(), T::zero());
    if n == 0 {
        return t0;
    }
    let mut t1 = z;
    for _ in 1..n {
        let t2 = z * t1 * T::lit(2.0) - t0;
        t0 = t1;
        t1 = t2;
    }
    t1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    #[test]
    fn nodes_ascend_and_match_cosines() {
        let g = ChebGrid::<f64>::new(7);
        for w in g.tau().windows(2) {
            assert!(w[0] < w[1]);
        }
        for k in 0..7 {
            assert!((g.tau()[k] - g.theta()[k].cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn coefficients_recover_chebyshev_polynomials() {
        let g = ChebGrid::<f64>::new(12);
        for n in 0..12 {
            let vals: Vec<C64> = g.tau().iter().map(|&t| C64::new((n as f64 * t.acos()).cos(), 0.0)).collect();
            let c = g.coefficients(&vals);
            for (j, cj) in c.iter().enumerate() {
                let want = if j == n { 1.0 } else { 0.0 };
                assert!((cj.re - want).abs() < 1e-13, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn spectral_derivative_of_polynomial_is_exact() {
        let g = ChebGrid::<f64>::new(16);
        let vals: Vec<C64> = g.tau().iter().map(|&t| C64::new(t.powi(5) - 2.0 * t, t * t)).collect();
        let d = g.differentiate(&vals);
        for (k, &t) in g.tau().iter().enumerate() {
            let want = C64::new(5.0 * t.powi(4) - 2.0, 2.0 * t);
            assert!((d[k] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn fejer_rule_integrates_smooth_functions() {
        let g = ChebGrid::<f64>::new(32);
        let w = g.fejer_weights();
        let s: f64 = g.tau().iter().zip(&w).map(|(&t, &wk)| wk * t.exp()).sum();
        assert!((s - (1f64.exp() - (-1f64).exp())).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn antiderivative_vanishes_at_left_end() {
        let c = vec![C64::new(1.0, 0.0), C64::new(0.5, 0.0), C64::new(0.25, 0.0)];
        let ic = integral_coefficients(&c);
        assert!(clenshaw(&ic, -1.0).norm() < 1e-15);
        // f = 1 + 0.5 x + 0.25 (2x^2 - 1); integral over [-1, 1] = 2 - 0.25*2/3... direct:
        let exact = 2.0 + 0.25 * (4.0 / 3.0 - 2.0);
        assert!((clenshaw(&ic, 1.0).re - exact).abs() < 1e-14);
    }

    #[test]
    fn second_kind_polynomial_values() {
        assert_eq!(chebyshev_u(0, 0.3), 1.0);
        assert!((chebyshev_u(1, 0.3f64) - 0.6).abs() < 1e-15);
        assert!((chebyshev_u(2, 0.3f64) - (4.0 * 0.09 - 1.0)).abs() < 1e-15);
    }
}
