//! Finite-gap periodic operators: band-edge data, the Bloch quasi-momentum
//! k(E) realized as a normalized hyperelliptic integral, and the inverse
//! dispersion relation.
//!
//! With edges E_1 < E_2 <= ... < E_{2g+1} the differential is
//! dk = P(E) dE / sqrt(R(E)), R(E) = prod_j (E - E_j), with P monic of degree
//! g whose lower coefficients are fixed by the g conditions that the gap
//! integrals of dk vanish. On that normalization k grows by pi across every
//! band, is real there, and has constant real part j*pi on gap j.

use crate::util::cheb::Cheb;
use crate::util::quad;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum BlochError {
    #[error("edges must be strictly increasing; entries {0} and {1} violate this (closed gap)")]
    NonMonotoneEdges(usize, usize),
    #[error("edge list must have odd length >= 3, got {0}")]
    EvenLength(usize),
    #[error("derivative requested at a branch point E = {0}")]
    BranchPointSingularity(f64),
    #[error("quasi-momentum {0} has no real preimage (maps into a gap interior)")]
    OutOfRange(f64),
}

/// Which square-root sheet a momentum value lives on. `Upper` carries
/// Im k >= 0 for energies in the closed upper half plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    Upper,
    Lower,
}

/// A Bloch quasi-momentum value together with its sheet and, for real band
/// energies, the 1-based band index.
#[derive(Debug, Clone, Copy)]
pub struct Momentum {
    pub value: Complex64,
    pub sheet: Sheet,
    pub band_index: Option<usize>,
}

/// Spectral data of a finite-gap periodic operator.
#[derive(Debug, Clone)]
pub struct PeriodicSpectrum {
    edges: Vec<f64>,
    g: usize,
    diff_coeffs: Vec<f64>,
    /// k on band j as a function of the unfolding angle phi in [0, pi],
    /// E = mid - half*cos(phi)  (phi = 0 at the lower edge).
    band_k: Vec<Cheb>,
    /// Im k on gap j in the same angular variable.
    gap_imk: Vec<Cheb>,
    gap_residuals: Vec<f64>,
}

const CHEB_N: usize = 160;

impl PeriodicSpectrum {
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn gap_count(&self) -> usize {
        self.g
    }

    pub fn diff_coeffs(&self) -> &[f64] {
        &self.diff_coeffs
    }

    /// Residual of the vanishing-gap-integral normalization, per gap.
    pub fn gap_residuals(&self) -> &[f64] {
        &self.gap_residuals
    }

    /// Band j (1-based) as [lower, upper].
    pub fn band(&self, j: usize) -> (f64, f64) {
        (self.edges[2 * j - 2], self.edges[2 * j - 1])
    }

    /// Gap j (1-based) as [E_{2j}, E_{2j+1}].
    pub fn gap(&self, j: usize) -> (f64, f64) {
        (self.edges[2 * j - 1], self.edges[2 * j])
    }

    pub fn band_of(&self, e: f64) -> Option<usize> {
        for j in 1..=(self.g + 1) {
            let (lo, hi) = self.band_bounds(j);
            if e >= lo && e <= hi {
                return Some(j);
            }
        }
        None
    }

    pub fn gap_of(&self, e: f64) -> Option<usize> {
        for j in 1..=self.g {
            let (lo, hi) = self.gap(j);
            if e > lo && e < hi {
                return Some(j);
            }
        }
        None
    }

    fn band_bounds(&self, j: usize) -> (f64, f64) {
        if j == self.g + 1 {
            (self.edges[2 * self.g], f64::INFINITY)
        } else {
            self.band(j)
        }
    }

    /// P(E) = E^g + c_{g-1} E^{g-1} + ... + c_0.
    pub fn numerator(&self, e: Complex64) -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for c in self.diff_coeffs.iter().rev() {
            p = p * e + c;
        }
        p
    }

    /// R(E) = prod (E - E_j).
    pub fn radicand(&self, e: Complex64) -> Complex64 {
        self.edges
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &ej| acc * (e - ej))
    }

    /// Principal-value branch of sqrt(R): the product of principal square
    /// roots of the factors. Analytic in the open upper half plane; on band j
    /// (limit from above) it is real with sign (-1)^(g - j + 1).
    pub fn sqrt_r_pv(&self, e: Complex64) -> Complex64 {
        self.edges
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &ej| acc * (e - ej).sqrt())
    }

    /// dk/dE on the upper sheet, principal branch.
    pub fn dk_de(&self, e: Complex64) -> Complex64 {
        self.numerator(e) / self.sqrt_r_pv(e)
    }
}

/// Build the spectrum: validates edges and solves the g normalization
/// conditions for the numerator coefficients.
pub fn build_spectrum(edges: &[f64]) -> Result<PeriodicSpectrum, BlochError> {
    let m = edges.len();
    if m < 3 || m % 2 == 0 {
        return Err(BlochError::EvenLength(m));
    }
    for i in 1..m {
        if edges[i] <= edges[i - 1] {
            return Err(BlochError::NonMonotoneEdges(i - 1, i));
        }
    }
    let g = (m - 1) / 2;

    // Gap moments I_{j,m} = int_gapj u^m / sqrt|R| du via Gauss-Chebyshev:
    // the two vanishing factors supply the Chebyshev weight.
    let moment = |j: usize, pw: u32| -> f64 {
        let (a, b) = (edges[2 * j - 1], edges[2 * j]);
        let mut f = |u: f64| {
            let mut q = 1.0;
            for (i, &ej) in edges.iter().enumerate() {
                if i != 2 * j - 1 && i != 2 * j {
                    q *= (u - ej).abs();
                }
            }
            u.powi(pw as i32) / q.sqrt()
        };
        quad::gauss_chebyshev(&mut f, a, b, 96)
    };

    // Solve sum_m c_m I_{j,m} = -I_{j,g} for each gap j.
    let mut a = vec![vec![0.0; g]; g];
    let mut rhs = vec![0.0; g];
    for j in 1..=g {
        for (mm, col) in a[j - 1].iter_mut().enumerate() {
            *col = moment(j, mm as u32);
        }
        rhs[j - 1] = -moment(j, g as u32);
    }
    let diff_coeffs = solve_dense(&mut a, &mut rhs);

    let mut spec = PeriodicSpectrum {
        edges: edges.to_vec(),
        g,
        diff_coeffs,
        band_k: Vec::new(),
        gap_imk: Vec::new(),
        gap_residuals: Vec::new(),
    };
    build_interpolants(&mut spec);
    Ok(spec)
}

fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        for row in (col + 1)..n {
            let f = a[row][col] / d;
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in (row + 1)..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}

/// On band/gap j, unfold the sqrt singularities with E = mid - half cos(phi);
/// the momentum density becomes smooth in phi and one Chebyshev fit plus a
/// coefficient-space antiderivative yields k on the whole interval.
fn build_interpolants(spec: &mut PeriodicSpectrum) {
    let g = spec.g;
    let mut band_k = Vec::with_capacity(g + 1);
    let mut gap_imk = Vec::with_capacity(g);
    let mut gap_residuals = Vec::with_capacity(g);

    // |dk/dphi| = |P(E)| * half / sqrt(prod_{other} |E - E_i|) / (half |sin|)
    // with the (E-a)(b-E) pair equal to half^2 sin^2 phi.
    let density = |spec: &PeriodicSpectrum, lo_idx: usize, hi_idx: usize, phi: f64| -> f64 {
        let a = spec.edges[lo_idx];
        let b = spec.edges[hi_idx];
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let u = mid - half * phi.cos();
        let mut q = 1.0;
        for (i, &ej) in spec.edges.iter().enumerate() {
            if i != lo_idx && i != hi_idx {
                q *= (u - ej).abs();
            }
        }
        let mut p = 1.0;
        for c in spec.diff_coeffs.iter().rev() {
            p = p * u + c;
        }
        p / q.sqrt()
    };

    // the top band is half-infinite and handled by direct integration
    for j in 1..=g {
        let lo = 2 * j - 2;
        let hi = 2 * j - 1;
        let dens = Cheb::fit(|phi| density(spec, lo, hi, phi), 0.0, PI, CHEB_N);
        let mut cum = dens.integral();
        // k(phi) = (j-1)pi + integral of the density; the density keeps one
        // sign on a band, flipped if needed so k increases.
        if cum.eval(PI) < 0.0 {
            cum.scale_values(-1.0);
        }
        cum.shift((j - 1) as f64 * PI);
        band_k.push(cum);
    }
    for j in 1..=g {
        let lo = 2 * j - 1;
        let hi = 2 * j;
        let dens = Cheb::fit(|phi| density(spec, lo, hi, phi), 0.0, PI, CHEB_N);
        let mut cum = dens.integral();
        let residual = cum.eval(PI);
        // Orient Im k >= 0 on the gap (upper sheet limit from above).
        if cum.eval(0.5 * PI) < 0.0 {
            cum.scale_values(-1.0);
        }
        gap_imk.push(cum);
        gap_residuals.push(residual.abs());
    }
    spec.band_k = band_k;
    spec.gap_imk = gap_imk;
    spec.gap_residuals = gap_residuals;
}

impl PeriodicSpectrum {
    fn phi_on(&self, j_lo: f64, j_hi: f64, e: f64) -> f64 {
        let mid = 0.5 * (j_lo + j_hi);
        let half = 0.5 * (j_hi - j_lo);
        (((mid - e) / half).clamp(-1.0, 1.0)).acos()
    }

    /// k(E) for real E on the closed upper sheet: real and increasing on
    /// bands, j*pi + i*(positive) on gap j, purely determined by continuity
    /// elsewhere. Values above the top band integrate the density directly.
    pub fn k_real(&self, e: f64) -> Complex64 {
        if e < self.edges[0] {
            // below the spectrum: k = 0 + i * int_{E}^{E_1} |P|/sqrt|R|
            let mut f = |u: f64| {
                let r = self.radicand(Complex64::new(u, 0.0)).re;
                self.numerator(Complex64::new(u, 0.0)).re / r.abs().sqrt()
            };
            let im = quad::adaptive_sqrt_upper(&mut f, e, self.edges[0], 1e-11, 1e-13).abs();
            return Complex64::new(0.0, im);
        }
        if let Some(j) = self.band_of(e) {
            if j <= self.g {
                let (lo, hi) = self.band(j);
                let phi = self.phi_on(lo, hi, e);
                return Complex64::new(self.band_k[j - 1].eval(phi), 0.0);
            }
            // top band: integrate from its lower edge
            let lo = self.edges[2 * self.g];
            let mut f = |u: f64| {
                let r = self.radicand(Complex64::new(u, 0.0)).re;
                self.numerator(Complex64::new(u, 0.0)).re / r.abs().sqrt()
            };
            let v = quad::adaptive_sqrt_lower(&mut f, lo, e, 1e-11, 1e-13).abs();
            return Complex64::new(self.g as f64 * PI + v, 0.0);
        }
        let j = self.gap_of(e).expect("not band, not gap, not exterior");
        let (lo, hi) = self.gap(j);
        let phi = self.phi_on(lo, hi, e);
        Complex64::new(j as f64 * PI, self.gap_imk[j - 1].eval(phi).max(0.0))
    }

    /// k(E) for complex E on the requested sheet. For Im E >= 0 the value is
    /// obtained by integrating dk from the nearest real anchor; the lower
    /// half plane uses the conjugation symmetry of the upper sheet, and the
    /// lower sheet is the negative.
    pub fn quasi_momentum(&self, e: Complex64, sheet: Sheet) -> Momentum {
        let v = if e.im >= 0.0 {
            self.k_upper_halfplane(e)
        } else {
            self.k_upper_halfplane(e.conj()).conj()
        };
        let value = match sheet {
            Sheet::Upper => v,
            Sheet::Lower => -v,
        };
        let band_index = if e.im == 0.0 { self.band_of(e.re) } else { None };
        Momentum {
            value,
            sheet,
            band_index,
        }
    }

    fn k_upper_halfplane(&self, e: Complex64) -> Complex64 {
        if e.im == 0.0 {
            return self.k_real(e.re);
        }
        // anchor on the real axis directly below, then integrate upward
        let anchor = Complex64::new(e.re, 0.0);
        let k0 = self.k_real(e.re);
        let mut f = |t: f64| {
            let z = anchor + (e - anchor) * t;
            self.dk_de(z) * (e - anchor)
        };
        // the pv branch is analytic in the open upper half plane, and the
        // vertical segment leaves the axis immediately
        k0 + quad::adaptive(&mut f, 0.0, 1.0, 1e-11, 1e-13)
    }

    /// dk/dE at real E (band interior gives a real value, gap interior an
    /// imaginary one). Errors out on branch points.
    pub fn k_derivative(&self, e: f64) -> Result<Complex64, BlochError> {
        for &ej in &self.edges {
            if (e - ej).abs() < 1e-12 * self.scale() {
                return Err(BlochError::BranchPointSingularity(ej));
            }
        }
        Ok(self.dk_de(Complex64::new(e, 0.0)))
    }

    pub fn scale(&self) -> f64 {
        self.edges[self.edges.len() - 1] - self.edges[0]
    }

    /// Dispersion relation: the real energy in band j with k(E) = k.
    /// At k = j*pi exactly, the top of band j is returned.
    pub fn dispersion(&self, k: f64) -> Result<f64, BlochError> {
        if !(k >= 0.0) {
            return Err(BlochError::OutOfRange(k));
        }
        if k == 0.0 {
            return Ok(self.edges[0]);
        }
        let j_exact = (k / PI).round() as usize;
        if j_exact >= 1 && j_exact <= self.g && (k - j_exact as f64 * PI).abs() == 0.0 {
            return Ok(self.edges[2 * j_exact - 1]);
        }
        let j = ((k / PI).ceil() as usize).clamp(1, self.g + 1);
        let (lo, hi) = self.band_bounds(j);
        let hi = if hi.is_finite() {
            hi
        } else {
            // bracket in the top band: k ~ sqrt(E) asymptotically
            let mut h = self.edges[2 * self.g] + self.scale();
            while self.k_real(h).re < k {
                h += self.scale().max(h);
            }
            h
        };
        let flo = self.k_real(lo).re - k;
        let fhi = self.k_real(hi).re - k;
        if flo > 1e-9 || fhi < -1e-9 {
            return Err(BlochError::OutOfRange(k));
        }
        let r = crate::util::roots::brent(|e| self.k_real(e).re - k, lo, hi, 1e-15 * self.scale())
            .ok_or(BlochError::OutOfRange(k))?;
        Ok(r)
    }
}
