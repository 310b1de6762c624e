//! Truncated power-series helpers used by the hyperelliptic expansions
//! near the point at infinity.

/// Coefficients of prod_j (1 - r_j t)^(-1/2) through order `n`.
/// Uses (1 - rt)^(-1/2) = sum_k binom(2k,k) (r t / 4)^k and repeated products.
pub fn inv_sqrt_poly_series(roots: &[f64], n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n + 1];
    acc[0] = 1.0;
    for &r in roots {
        // central binomial / 4^k coefficients
        let mut single = vec![0.0; n + 1];
        let mut c = 1.0;
        for (k, s) in single.iter_mut().enumerate() {
            *s = c;
            // binom(2(k+1), k+1)/4^(k+1) = prev * (2k+1)/(2k+2)
            c *= r * (2.0 * k as f64 + 1.0) / (2.0 * k as f64 + 2.0);
        }
        acc = mul_trunc(&acc, &single, n);
    }
    acc
}

pub fn mul_trunc(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for (i, &ai) in a.iter().enumerate().take(n + 1) {
        for (j, &bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_expansion() {
        // (1-2t)^(-1/2)(1-3t)^(-1/2) via numeric differentiation proxy:
        // evaluate the series at small t against the closed form.
        let s = inv_sqrt_poly_series(&[2.0, 3.0], 8);
        let t = 1e-2f64;
        let series: f64 = s
            .iter()
            .enumerate()
            .map(|(k, c)| c * t.powi(k as i32))
            .sum();
        let exact = ((1.0 - 2.0 * t) * (1.0 - 3.0 * t)).powf(-0.5);
        assert!((series - exact).abs() < 1e-14);
    }
}
