//! Chebyshev interpolants on an interval: fit at Lobatto nodes, Clenshaw
//! evaluation, coefficient-space antiderivative.

#[derive(Debug, Clone)]
pub struct Cheb {
    a: f64,
    b: f64,
    /// Coefficients of sum c_j T_j(t), t the affine image of x in [-1,1].
    coeffs: Vec<f64>,
}

impl Cheb {
    /// Interpolate f at the n+1 Chebyshev-Lobatto points of [a,b].
    pub fn fit<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> Self {
        assert!(n >= 2);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let vals: Vec<f64> = (0..=n)
            .map(|k| {
                let t = (std::f64::consts::PI * k as f64 / n as f64).cos();
                f(mid + half * t)
            })
            .collect();
        let mut coeffs = vec![0.0; n + 1];
        // Direct DCT-I; n stays small enough that O(n^2) is fine.
        for (j, c) in coeffs.iter_mut().enumerate() {
            let mut s = 0.5 * (vals[0] + if j % 2 == 0 { vals[n] } else { -vals[n] });
            for (k, v) in vals.iter().enumerate().take(n).skip(1) {
                s += v * (std::f64::consts::PI * (j * k) as f64 / n as f64).cos();
            }
            *c = 2.0 * s / n as f64;
        }
        coeffs[0] *= 0.5;
        coeffs[n] *= 0.5;
        Cheb { a, b, coeffs }
    }

    pub fn from_coeffs(a: f64, b: f64, coeffs: Vec<f64>) -> Self {
        Cheb { a, b, coeffs }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - (self.a + self.b)) / (self.b - self.a);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().rev() {
            let tmp = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = tmp;
        }
        b1 - t * b2
    }

    /// Antiderivative with F(a) = 0.
    pub fn integral(&self) -> Cheb {
        let n = self.coeffs.len();
        let half = 0.5 * (self.b - self.a);
        let c = &self.coeffs;
        let get = |j: usize| if j < n { c[j] } else { 0.0 };
        let mut ai = vec![0.0; n + 1];
        if n >= 1 {
            ai[1] = half * (c[0] - 0.5 * get(2));
        }
        for k in 2..=n {
            ai[k] = half * (get(k - 1) - get(k + 1)) / (2.0 * k as f64);
        }
        let mut out = Cheb {
            a: self.a,
            b: self.b,
            coeffs: ai,
        };
        let at_a = out.eval(self.a);
        out.coeffs[0] -= at_a;
        out
    }

    /// Infinity-norm estimate of the interpolation tail (last two coefficients).
    pub fn tail(&self) -> f64 {
        let n = self.coeffs.len();
        self.coeffs[n - 1].abs().max(self.coeffs[n - 2].abs())
    }

    pub fn shift(&mut self, v: f64) {
        self.coeffs[0] += v;
    }

    pub fn scale_values(&mut self, s: f64) {
        for c in &mut self.coeffs {
            *c *= s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_and_eval() {
        let c = Cheb::fit(|x: f64| (2.0 * x).sin() + x * x, -1.0, 3.0, 48);
        for i in 0..20 {
            let x = -1.0 + 4.0 * i as f64 / 19.0;
            let exact = (2.0 * x).sin() + x * x;
            assert!((c.eval(x) - exact).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn integral_matches() {
        let c = Cheb::fit(|x: f64| x.cos(), 0.0, 2.0, 40);
        let ci = c.integral();
        for i in 0..10 {
            let x = 2.0 * i as f64 / 9.0;
            assert!((ci.eval(x) - x.sin()).abs() < 1e-12);
        }
    }
}
