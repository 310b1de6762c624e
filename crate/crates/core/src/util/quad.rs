//! Quadrature kernels: adaptive Gauss-Kronrod, fixed Gauss-Legendre panels,
//! Gauss-Chebyshev rules and square-root endpoint substitutions.

use num_complex::Complex64;
use std::ops::{Add, Sub};

/// Scalar types that can be integrated (real or complex values).
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.norm()
    }
}

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One 15-point Kronrod panel. Returns (integral, error estimate).
pub fn qk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc.scale(WGK[7]);
    let mut gauss = fc.scale(WG[3]);
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let sum = f1 + f2;
        kron = kron + sum.scale(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + sum.scale(WG[j / 2]);
        }
    }
    let integral = kron.scale(half);
    let err = (kron - gauss).norm() * half.abs();
    (integral, err)
}

/// Adaptive Gauss-Kronrod integration with interval bisection.
pub fn adaptive<T: QuadValue, F: FnMut(f64) -> T>(
    f: &mut F,
    a: f64,
    b: f64,
    rtol: f64,
    atol: f64,
) -> T {
    // Stack of (a, b, depth); the accepted pieces accumulate into `total`.
    let mut total = T::zero();
    let scale0 = {
        let (v, _) = qk15(f, a, b);
        v.norm().max(atol)
    };
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = qk15(f, lo, hi);
        let local_tol = (rtol * scale0.max(total.norm())).max(atol) * ((hi - lo) / (b - a)).abs();
        if e <= local_tol || depth >= 48 {
            total = total + v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// Integrate f over [a,b] where f behaves like sqrt(b-x) (or is smooth) at the
/// upper endpoint: substitute x = b - (b-a) s^2.
pub fn adaptive_sqrt_upper<T: QuadValue, F: FnMut(f64) -> T>(
    f: &mut F,
    a: f64,
    b: f64,
    rtol: f64,
    atol: f64,
) -> T {
    let w = b - a;
    let mut g = |s: f64| f(b - w * s * s).scale(2.0 * w * s);
    adaptive(&mut g, 0.0, 1.0, rtol, atol)
}

/// Integrate f over [a,b] with sqrt behavior at the lower endpoint.
pub fn adaptive_sqrt_lower<T: QuadValue, F: FnMut(f64) -> T>(
    f: &mut F,
    a: f64,
    b: f64,
    rtol: f64,
    atol: f64,
) -> T {
    let w = b - a;
    let mut g = |s: f64| f(a + w * s * s).scale(2.0 * w * s);
    adaptive(&mut g, 0.0, 1.0, rtol, atol)
}

/// Integrate f over [a,b] with sqrt endpoint behavior at both ends:
/// x = mid - half cos(theta).
pub fn adaptive_sqrt_both<T: QuadValue, F: FnMut(f64) -> T>(
    f: &mut F,
    a: f64,
    b: f64,
    rtol: f64,
    atol: f64,
) -> T {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut g = |th: f64| f(mid - half * th.cos()).scale(half * th.sin());
    adaptive(&mut g, 0.0, std::f64::consts::PI, rtol, atol)
}

/// n-point Gauss-Chebyshev rule for ∫_a^b g(x)/sqrt((x-a)(b-x)) dx.
pub fn gauss_chebyshev<T: QuadValue, F: FnMut(f64) -> T>(g: &mut F, a: f64, b: f64, n: usize) -> T {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = T::zero();
    for k in 0..n {
        let th = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / (2.0 * n as f64);
        acc = acc + g(mid + half * th.cos());
    }
    acc.scale(std::f64::consts::PI / n as f64)
}

/// Gauss-Legendre nodes and weights on [-1,1], computed by Newton iteration
/// on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            pp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adaptive_smooth() {
        let mut f = |x: f64| x.sin();
        let v = adaptive(&mut f, 0.0, std::f64::consts::PI, 1e-12, 1e-14);
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn sqrt_endpoints() {
        // ∫_0^1 sqrt(1-x) dx = 2/3
        let mut f = |x: f64| (1.0 - x).sqrt();
        let v = adaptive_sqrt_upper(&mut f, 0.0, 1.0, 1e-12, 1e-14);
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        // ∫_0^1 dx/sqrt(x(1-x)) = π via the Chebyshev rule with g ≡ 1
        let mut g = |_x: f64| 1.0;
        let v = gauss_chebyshev(&mut g, 0.0, 1.0, 16);
        assert!((v - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn legendre_nodes() {
        let (x, w) = gauss_legendre(12);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-13);
        // ∫ x^10 over [-1,1] = 2/11, exact for n=12
        let v: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(10)).sum();
        assert!((v - 2.0 / 11.0).abs() < 1e-13);
    }
}
