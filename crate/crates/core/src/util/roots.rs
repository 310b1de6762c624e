//! Bracketing root finders: bisection with secant acceleration (Brent-style).

/// Find a root of f in [a,b] given f(a) and f(b) of opposite sign.
/// Bisection interleaved with secant steps; converges to `xtol` on the
/// bracket width or when |f| underflows.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> Option<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        // Secant candidate, clamped to the inner 90% of the bracket.
        let mut x = b - fb * (b - a) / (fb - fa);
        let lo = a + 0.05 * (b - a);
        let hi = b - 0.05 * (b - a);
        if !(x > lo.min(hi) && x < lo.max(hi)) || !x.is_finite() {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    Some(0.5 * (a + b))
}

/// Scan [a,b] on `n` subintervals and return one root per sign change.
pub fn scan_roots<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize, xtol: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut x0 = a;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = a + (b - a) * i as f64 / n as f64;
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0.signum() != f1.signum() {
            if let Some(r) = brent(&mut f, x0, x1, xtol) {
                roots.push(r);
            }
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        roots.push(x0);
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_root() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn scan_finds_all() {
        let roots = scan_roots(|x: f64| x.sin(), 0.1, 9.9, 50, 1e-13);
        assert_eq!(roots.len(), 3);
        for (r, expect) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - expect * std::f64::consts::PI).abs() < 1e-11);
        }
    }
}
