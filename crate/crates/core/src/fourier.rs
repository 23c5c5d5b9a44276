//! Trigonometric interpolation of periodic samples on a uniform grid `u_k = 2 pi k / n`.

use rustfft::FftPlanner;

use crate::scalar::{ci, cis, czero, Cx, Real};

#[derive(Debug, Clone)]
pub(crate) struct TrigInterpolant<T> {
    /// FFT-ordered coefficients scaled by `1/n`.
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> TrigInterpolant<T> {
    pub fn new(values: &[Cx<T>]) -> Self {
        let n = values.len();
        let mut buf = values.to_vec();
        FftPlanner::<T>::new().plan_fft_forward(n).process(&mut buf);
        let inv = T::one() / T::count(n);
        for c in &mut buf {
            *c = *c * inv;
        }
        Self { coeffs: buf }
    }

    fn wavenumber(&self, k: usize) -> Option<i64> {
        let n = self.coeffs.len();
        if 2 * k < n {
            Some(k as i64)
        } else if 2 * k > n {
            Some(k as i64 - n as i64)
        } else {
            None
        }
    }

    /// Value of the interpolant at an arbitrary parameter `u`.
    pub fn eval(&self, u: T) -> Cx<T> {
        let n = self.coeffs.len();
        let step = cis(u);
        let step_conj = step.conj();
        let mut acc = self.coeffs[0];
        let (mut up, mut down) = (step, step_conj);
        for k in 1..n.div_ceil(2) {
            acc = acc + self.coeffs[k] * up + self.coeffs[n - k] * down;
            up = up * step;
            down = down * step_conj;
        }
        if n.is_multiple_of(2) && n > 0 {
            let half = n / 2;
            acc = acc + self.coeffs[half] * (T::count(half) * u).cos();
        }
        acc
    }

    /// Values of the interpolant on the grid refined by `factor`.
    pub fn upsample(&self, factor: usize) -> Vec<Cx<T>> {
        let n = self.coeffs.len();
        let big = n * factor;
        let mut buf = vec![czero(); big];
        for k in 0..n {
            match self.wavenumber(k) {
                Some(w) if w >= 0 => buf[w as usize] = self.coeffs[k],
                Some(w) => buf[(big as i64 + w) as usize] = self.coeffs[k],
                None => {
                    let half = self.coeffs[k] * T::lit(0.5);
                    buf[n / 2] = half;
                    buf[big - n / 2] = half;
                }
            }
        }
        if factor == 1 {
            buf = self.coeffs.clone();
        }
        FftPlanner::<T>::new().plan_fft_inverse(big).process(&mut buf);
        buf
    }

    /// `d/du` of the interpolant at the grid points.
    pub fn derivative_at_nodes(&self) -> Vec<Cx<T>> {
        let n = self.coeffs.len();
        let mut buf: Vec<Cx<T>> = (0..n)
            .map(|k| match self.wavenumber(k) {
                Some(w) => self.coeffs[k] * ci::<T>() * T::lit(w as f64),
                None => czero(),
            })
            .collect();
        FftPlanner::<T>::new().plan_fft_inverse(n).process(&mut buf);
        buf
    }

    /// `int_0^{u_k} f du` at every grid point.
    pub fn cumulative_integral_at_nodes(&self) -> Vec<Cx<T>> {
        let n = self.coeffs.len();
        let du = T::TAU() / T::count(n);
        (0..n)
            .map(|j| {
                let u = du * T::count(j);
                let mut acc = self.coeffs[0] * u;
                for k in 1..n {
                    if let Some(w) = self.wavenumber(k) {
                        let wf = T::lit(w as f64);
                        let e = cis(wf * u) - Cx::new(T::one(), T::zero());
                        acc = acc + self.coeffs[k] * e / (ci::<T>() * wf);
                    }
                }
                acc
            })
            .collect()
    }
}
