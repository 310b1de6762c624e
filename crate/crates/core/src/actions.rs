//! Complex momentum kappa(zeta) = k(E - alpha cos zeta), its branch points,
//! and the phase/action integrals over the iso-energy curve.
//!
//! Phases come from loops around the real branches of the curve, vertical and
//! horizontal actions from loops connecting them. All loops are realized as
//! rectangles with the momentum continued along the contour; each loop also
//! has an equivalent reduced form on the real (or imaginary) line through the
//! enclosed segment, which serves as the fast path and as an independent
//! cross-check of the contour machinery.

use crate::bloch::PeriodicSpectrum;
use crate::util::quad;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum ActionsError {
    #[error("window condition fails at E = {e}, alpha = {alpha}: {reason}")]
    WindowViolation { e: f64, alpha: f64, reason: String },
    #[error("contour would collide with a branch point (clearance {0:.3e})")]
    ContourCollision(f64),
    #[error("contour closure defect {0:.3e}; branch tracking failed")]
    ClosureDefect(f64),
}

/// The adiabatic two-band interaction setup: a finite-gap spectrum, the
/// coupling alpha, the index n of the gap inside the spectral window, and the
/// adiabatic frequency epsilon.
#[derive(Debug, Clone)]
pub struct AdiabaticProblem {
    pub spectrum: PeriodicSpectrum,
    pub alpha: f64,
    pub n: usize,
    pub epsilon: f64,
}

impl AdiabaticProblem {
    pub fn new(
        spectrum: PeriodicSpectrum,
        alpha: f64,
        n: usize,
        epsilon: f64,
    ) -> Result<Self, ActionsError> {
        let fail = |reason: &str| ActionsError::WindowViolation {
            e: f64::NAN,
            alpha,
            reason: reason.into(),
        };
        if alpha <= 0.0 {
            return Err(fail("alpha must be positive"));
        }
        if n < 1 || n > spectrum.gap_count() {
            return Err(fail("window gap index out of range"));
        }
        if epsilon <= 0.0 {
            return Err(fail("epsilon must be positive"));
        }
        Ok(AdiabaticProblem {
            spectrum,
            alpha,
            n,
            epsilon,
        })
    }

    /// h = (2 pi / epsilon) mod 1.
    pub fn cocycle_shift(&self) -> f64 {
        (2.0 * PI / self.epsilon).rem_euclid(1.0)
    }
}

/// Branch points of the complex momentum in the half-strip
/// { Im zeta >= 0, 0 <= Re zeta <= pi }, solved from E - alpha cos zeta = E_j.
#[derive(Debug, Clone)]
pub struct BranchPointSet {
    /// (zeta_{2n}, zeta_{2n+1}), the pair on the real axis in (0, pi).
    pub real_pair: (f64, f64),
    /// Im zeta_{2n-1}, Im zeta_{2n-3}, ... on the imaginary axis, ascending.
    pub imaginary_below: Vec<f64>,
    /// Im zeta_{2n+2}, Im zeta_{2n+3}, ... on Re zeta = pi, ascending.
    pub imaginary_above: Vec<f64>,
}

impl BranchPointSet {
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = vec![
            Complex64::new(self.real_pair.0, 0.0),
            Complex64::new(self.real_pair.1, 0.0),
        ];
        out.extend(self.imaginary_below.iter().map(|&y| Complex64::new(0.0, y)));
        out.extend(self.imaginary_above.iter().map(|&y| Complex64::new(PI, y)));
        out
    }
}

/// Action profile at one energy: phases, vertical/horizontal actions, their
/// energy derivatives, and the tunneling coefficients t = exp(-S/epsilon).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ActionProfile {
    pub e: f64,
    pub phi0: f64,
    pub phipi: f64,
    pub sv0: f64,
    pub svpi: f64,
    pub sh0: f64,
    pub shpi: f64,
    pub sh: f64,
    pub tv0: f64,
    pub tvpi: f64,
    pub th0: f64,
    pub thpi: f64,
    pub th: f64,
    pub dphi0: f64,
    pub dphipi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    V0,
    VPi,
    H0,
    HPi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    Zero,
    Pi,
}

/// Evaluation route for the loop integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Reduced integral over the enclosed segment (exact reduction, fast).
    #[default]
    Line,
    /// Rectangle contour with the momentum continued along it.
    Contour,
}

pub fn check_window(prob: &AdiabaticProblem, e: f64) -> Result<(), ActionsError> {
    let ed = prob.spectrum.edges();
    let n = prob.n;
    let a = prob.alpha;
    let upper_ok = if 2 * n + 1 < ed.len() {
        e + a < ed[2 * n + 1]
    } else {
        true
    };
    if e - a < ed[2 * n - 1] && ed[2 * n] < e + a && ed[2 * n - 2] < e - a && upper_ok {
        Ok(())
    } else {
        Err(ActionsError::WindowViolation {
            e,
            alpha: a,
            reason: "spectral window does not isolate the two interacting bands".into(),
        })
    }
}

/// Solve E - alpha cos zeta = E_j for every edge; the pair straddling the
/// window gap is real, edges below the window sit on the imaginary axis,
/// edges above on Re zeta = pi.
pub fn branch_points(prob: &AdiabaticProblem, e: f64) -> Result<BranchPointSet, ActionsError> {
    let ed = prob.spectrum.edges();
    let n = prob.n;
    let a = prob.alpha;
    let c_lo = (e - ed[2 * n - 1]) / a;
    let c_hi = (e - ed[2 * n]) / a;
    if !(-1.0..=1.0).contains(&c_lo) || !(-1.0..=1.0).contains(&c_hi) {
        return Err(ActionsError::WindowViolation {
            e,
            alpha: a,
            reason: "required real branch-point pair does not exist".into(),
        });
    }
    let real_pair = (c_lo.acos(), c_hi.acos());
    let mut below = Vec::new();
    for j in (0..=(2 * n - 2)).rev() {
        let c = (e - ed[j]) / a;
        if c >= 1.0 {
            below.push(c.acosh());
        }
    }
    let mut above = Vec::new();
    for &edge in ed.iter().skip(2 * n + 1) {
        let c = (edge - e) / a;
        if c >= 1.0 {
            above.push(c.acosh());
        }
    }
    Ok(BranchPointSet {
        real_pair,
        imaginary_below: below,
        imaginary_above: above,
    })
}

// ---------------------------------------------------------------------------
// Reduced (line) forms. Each loop contracts onto the segment it encircles;
// the branch flip at the enclosed square-root points turns the loop integral
// into a single real integral of the band/gap momentum.
// ---------------------------------------------------------------------------

const RTOL: f64 = 1e-11;

fn line_phase(prob: &AdiabaticProblem, e: f64, which: PhaseKind) -> Result<f64, ActionsError> {
    check_window(prob, e)?;
    let bp = branch_points(prob, e)?;
    let n = prob.n as f64;
    let s = &prob.spectrum;
    match which {
        PhaseKind::Zero => {
            let z = bp.real_pair.0;
            let mut f = |t: f64| n * PI - s.k_real(e - prob.alpha * t.cos()).re;
            Ok(2.0 * quad::adaptive_sqrt_upper(&mut f, 0.0, z, RTOL, 1e-14))
        }
        PhaseKind::Pi => {
            let z = bp.real_pair.1;
            let mut f = |t: f64| s.k_real(e - prob.alpha * t.cos()).re - n * PI;
            Ok(2.0 * quad::adaptive_sqrt_lower(&mut f, z, PI, RTOL, 1e-14))
        }
    }
}

fn line_phase_derivative(
    prob: &AdiabaticProblem,
    e: f64,
    which: PhaseKind,
) -> Result<f64, ActionsError> {
    check_window(prob, e)?;
    let bp = branch_points(prob, e)?;
    let s = &prob.spectrum;
    // dk/dE blows up like an inverse square root at the enclosed branch
    // point; substitute t = z -/+ u^2 to regularize.
    match which {
        PhaseKind::Zero => {
            let z = bp.real_pair.0;
            let mut g = |u: f64| {
                let t = z - u * u;
                s.dk_de(Complex64::new(e - prob.alpha * t.cos(), 0.0)).re * 2.0 * u
            };
            Ok(-2.0 * quad::adaptive(&mut g, 0.0, z.sqrt(), RTOL, 1e-14))
        }
        PhaseKind::Pi => {
            let z = bp.real_pair.1;
            let mut g = |u: f64| {
                let t = z + u * u;
                s.dk_de(Complex64::new(e - prob.alpha * t.cos(), 0.0)).re * 2.0 * u
            };
            Ok(2.0 * quad::adaptive(&mut g, 0.0, (PI - z).sqrt(), RTOL, 1e-14))
        }
    }
}

fn line_action(prob: &AdiabaticProblem, e: f64, which: ActionKind) -> Result<f64, ActionsError> {
    check_window(prob, e)?;
    let bp = branch_points(prob, e)?;
    let s = &prob.spectrum;
    let n = prob.n;
    let no_vertical = |side: &str| ActionsError::WindowViolation {
        e,
        alpha: prob.alpha,
        reason: format!("no branch point {side} the window"),
    };
    match which {
        ActionKind::HPi | ActionKind::H0 => {
            let (z0, z1) = bp.real_pair;
            let mut f = |t: f64| s.k_real(e - prob.alpha * t.cos()).im;
            Ok(quad::adaptive_sqrt_both(&mut f, z0, z1, RTOL, 1e-14))
        }
        ActionKind::V0 => {
            let y = *bp.imaginary_below.first().ok_or_else(|| no_vertical("below"))?;
            let base = (n - 1) as f64 * PI;
            let mut f = |t: f64| s.k_real(e - prob.alpha * t.cosh()).re - base;
            Ok(2.0 * quad::adaptive_sqrt_upper(&mut f, 0.0, y, RTOL, 1e-14))
        }
        ActionKind::VPi => {
            let y = *bp.imaginary_above.first().ok_or_else(|| no_vertical("above"))?;
            let base = (n + 1) as f64 * PI;
            let mut f = |t: f64| base - s.k_real(e + prob.alpha * t.cosh()).re;
            Ok(2.0 * quad::adaptive_sqrt_upper(&mut f, 0.0, y, RTOL, 1e-14))
        }
    }
}

// ---------------------------------------------------------------------------
// Contour forms: rectangles around the enclosed segment, kappa continued by
// incremental integration of dk along the induced energy path.
// ---------------------------------------------------------------------------

struct KappaTracker<'a> {
    spec: &'a PeriodicSpectrum,
    e: f64,
    alpha: f64,
    kappa: Complex64,
    sqrt_r: Complex64,
    zeta: Complex64,
}

impl<'a> KappaTracker<'a> {
    fn seed_at(spec: &'a PeriodicSpectrum, e: f64, alpha: f64, zeta0: Complex64) -> Self {
        let u0 = Complex64::new(e, 0.0) - alpha * zeta0.cos();
        let kappa = spec.quasi_momentum(u0, crate::bloch::Sheet::Upper).value;
        let sqrt_r = spec.sqrt_r_pv(u0);
        KappaTracker {
            spec,
            e,
            alpha,
            kappa,
            sqrt_r,
            zeta: zeta0,
        }
    }

    fn u(&self, zeta: Complex64) -> Complex64 {
        Complex64::new(self.e, 0.0) - self.alpha * zeta.cos()
    }

    /// Integral of dkappa over the sub-span [t0, t1] of the segment
    /// self.zeta -> self.zeta + dz, advancing the sqrt branch by continuity.
    fn kappa_increment(
        &self,
        s_run: &mut Complex64,
        dz: Complex64,
        t0: f64,
        t1: f64,
    ) -> Complex64 {
        const SUB: [(f64, f64); 4] = [
            (-0.861136311594052, 0.347854845137454),
            (-0.339981043584856, 0.652145154862546),
            (0.339981043584856, 0.652145154862546),
            (0.861136311594052, 0.347854845137454),
        ];
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, w) in &SUB {
            let t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * x;
            let zeta_t = self.zeta + dz * t;
            let u = self.u(zeta_t);
            let mut s = self.spec.sqrt_r_pv(u);
            if (s + *s_run).norm() < (s - *s_run).norm() {
                s = -s;
            }
            *s_run = s;
            acc += (self.spec.numerator(u) / s * (self.alpha * zeta_t.sin())).scale(w);
        }
        acc * dz.scale(0.5 * (t1 - t0))
    }

    /// Advance to zeta1 along a straight segment; returns int kappa dzeta
    /// over the step and updates the continuation state.
    fn advance(&mut self, zeta1: Complex64, nodes: &[f64], weights: &[f64]) -> Complex64 {
        let dz = zeta1 - self.zeta;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut kap_run = self.kappa;
        let mut s_run = self.sqrt_r;
        let mut t_prev = 0.0;
        for (&x, &w) in nodes.iter().zip(weights) {
            let t = 0.5 * (x + 1.0);
            kap_run += self.kappa_increment(&mut s_run, dz, t_prev, t);
            acc += kap_run.scale(w);
            t_prev = t;
        }
        self.kappa = kap_run + self.kappa_increment(&mut s_run, dz, t_prev, 1.0);
        self.sqrt_r = s_run;
        self.zeta = zeta1;
        acc * dz.scale(0.5)
    }
}

/// Loop integral of kappa around a rectangle, counterclockwise from
/// corners[0]. Steps are sized to `h_target`.
fn contour_loop(
    prob: &AdiabaticProblem,
    e: f64,
    corners: [Complex64; 4],
    h_target: f64,
) -> Result<Complex64, ActionsError> {
    let (nodes, weights) = quad::gauss_legendre(10);
    let mut tracker = KappaTracker::seed_at(&prob.spectrum, e, prob.alpha, corners[0]);
    let kappa0 = tracker.kappa;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        let from = corners[i];
        let to = corners[(i + 1) % 4];
        let steps = ((to - from).norm() / h_target).ceil().max(8.0) as usize;
        for s in 0..steps {
            let z1 = from + (to - from) * ((s + 1) as f64 / steps as f64);
            total += tracker.advance(z1, &nodes, &weights);
        }
    }
    let defect = (tracker.kappa - kappa0).norm();
    if defect > 1e-8 * (1.0 + kappa0.norm()) {
        return Err(ActionsError::ClosureDefect(defect));
    }
    Ok(total)
}

/// Offset rule: min(0.1, quarter distance to the nearest branch point not
/// belonging to the loop), also capped by the enclosed extent.
fn rect_offset(enclosed_len: f64, foreign_clearance: f64) -> Result<f64, ActionsError> {
    let off = (0.25 * foreign_clearance)
        .min(0.1)
        .min(0.45 * enclosed_len.max(1e-3));
    if off < 1e-6 {
        return Err(ActionsError::ContourCollision(foreign_clearance));
    }
    Ok(off)
}

fn horizontal_rect(lo: f64, hi: f64, off: f64) -> [Complex64; 4] {
    [
        Complex64::new(lo - off, -off),
        Complex64::new(hi + off, -off),
        Complex64::new(hi + off, off),
        Complex64::new(lo - off, off),
    ]
}

fn contour_phase(prob: &AdiabaticProblem, e: f64, which: PhaseKind) -> Result<f64, ActionsError> {
    check_window(prob, e)?;
    let bp = branch_points(prob, e)?;
    let (z0, z1) = bp.real_pair;
    let first = |v: &Vec<f64>| v.first().copied().unwrap_or(f64::INFINITY);
    let (lo, hi, foreign) = match which {
        PhaseKind::Zero => (-z0, z0, (z1 - z0).min(first(&bp.imaginary_below))),
        PhaseKind::Pi => (
            z1,
            2.0 * PI - z1,
            (z1 - z0).min(first(&bp.imaginary_above)),
        ),
    };
    let off = rect_offset(hi - lo, foreign)?;
    let val = contour_loop(prob, e, horizontal_rect(lo, hi, off), off / 3.0)?;
    let half = val.scale(0.5);
    if half.im.abs() > 1e-7 * (1.0 + half.re.abs()) {
        return Err(ActionsError::ClosureDefect(half.im.abs()));
    }
    Ok(half.re.abs())
}

fn contour_action(
    prob: &AdiabaticProblem,
    e: f64,
    which: ActionKind,
) -> Result<f64, ActionsError> {
    check_window(prob, e)?;
    let bp = branch_points(prob, e)?;
    let (z0, z1) = bp.real_pair;
    let first = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(f64::INFINITY);
    let no_vertical = |side: &str| ActionsError::WindowViolation {
        e,
        alpha: prob.alpha,
        reason: format!("no branch point {side} the window"),
    };
    let (corners, off) = match which {
        ActionKind::HPi => {
            let foreign = z0.min(PI - z1).min(first(&bp.imaginary_above, 0));
            let off = rect_offset(z1 - z0, foreign)?;
            (horizontal_rect(z0, z1, off), off)
        }
        ActionKind::H0 => {
            let foreign = z0.min(PI - z1).min(first(&bp.imaginary_below, 0));
            let off = rect_offset(z1 - z0, foreign)?;
            (horizontal_rect(-z1, -z0, off), off)
        }
        ActionKind::V0 => {
            let y = *bp
                .imaginary_below
                .first()
                .ok_or_else(|| no_vertical("below"))?;
            let foreign = z0.min(first(&bp.imaginary_below, 1) - y);
            let off = rect_offset(2.0 * y, foreign)?;
            (
                [
                    Complex64::new(off, -y - off),
                    Complex64::new(off, y + off),
                    Complex64::new(-off, y + off),
                    Complex64::new(-off, -y - off),
                ],
                off,
            )
        }
        ActionKind::VPi => {
            let y = *bp
                .imaginary_above
                .first()
                .ok_or_else(|| no_vertical("above"))?;
            let foreign = (PI - z1).min(first(&bp.imaginary_above, 1) - y);
            let off = rect_offset(2.0 * y, foreign)?;
            (
                [
                    Complex64::new(PI - off, -y - off),
                    Complex64::new(PI + off, -y - off),
                    Complex64::new(PI + off, y + off),
                    Complex64::new(PI - off, y + off),
                ],
                off,
            )
        }
    };
    let val = contour_loop(prob, e, corners, off / 3.0)?;
    let s = Complex64::new(0.0, -0.5) * val;
    if s.im.abs() > 1e-7 * (1.0 + s.re.abs()) {
        return Err(ActionsError::ClosureDefect(s.im.abs()));
    }
    Ok(s.re.abs())
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Phase integral Phi_nu(E) > 0.
pub fn phase_integral(
    prob: &AdiabaticProblem,
    e: f64,
    which: PhaseKind,
    route: Route,
) -> Result<f64, ActionsError> {
    match route {
        Route::Line => line_phase(prob, e, which),
        Route::Contour => contour_phase(prob, e, which),
    }
}

/// dPhi_nu/dE; negative for nu = 0, positive for nu = pi.
pub fn phase_derivative(
    prob: &AdiabaticProblem,
    e: f64,
    which: PhaseKind,
) -> Result<f64, ActionsError> {
    line_phase_derivative(prob, e, which)
}

/// Action integral S > 0 for the requested loop.
pub fn action_integral(
    prob: &AdiabaticProblem,
    e: f64,
    which: ActionKind,
    route: Route,
) -> Result<f64, ActionsError> {
    match route {
        Route::Line => line_action(prob, e, which),
        Route::Contour => contour_action(prob, e, which),
    }
}

/// Assemble the full profile at E using the fast reduced forms.
pub fn tunneling_profile(prob: &AdiabaticProblem, e: f64) -> Result<ActionProfile, ActionsError> {
    let phi0 = line_phase(prob, e, PhaseKind::Zero)?;
    let phipi = line_phase(prob, e, PhaseKind::Pi)?;
    let dphi0 = line_phase_derivative(prob, e, PhaseKind::Zero)?;
    let dphipi = line_phase_derivative(prob, e, PhaseKind::Pi)?;
    let sv0 = line_action(prob, e, ActionKind::V0)?;
    let svpi = line_action(prob, e, ActionKind::VPi)?;
    let shpi = line_action(prob, e, ActionKind::HPi)?;
    let sh0 = shpi; // cosine parity
    let sh = sh0 + shpi;
    let eps = prob.epsilon;
    Ok(ActionProfile {
        e,
        phi0,
        phipi,
        sv0,
        svpi,
        sh0,
        shpi,
        sh,
        tv0: (-sv0 / eps).exp(),
        tvpi: (-svpi / eps).exp(),
        th0: (-sh0 / eps).exp(),
        thpi: (-shpi / eps).exp(),
        th: (-sh0 / eps).exp() * (-shpi / eps).exp(),
        dphi0,
        dphipi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::build_spectrum;
    use approx::assert_abs_diff_eq;

    fn prob() -> AdiabaticProblem {
        let s = build_spectrum(&[0.0, 3.8571, 6.8571, 12.1004, 100.7092]).unwrap();
        AdiabaticProblem::new(s, 2.0, 1, 0.05).unwrap()
    }

    #[test]
    fn branch_point_arccos() {
        let p = prob();
        let bp = branch_points(&p, 5.3571).unwrap();
        assert_abs_diff_eq!(bp.real_pair.0, 0.75f64.acos(), epsilon = 1e-12);
        assert!((bp.real_pair.0 - 0.72273).abs() < 1e-5);
        assert!(bp.real_pair.0 < bp.real_pair.1);
        assert!(bp.real_pair.1 < PI);
        assert!(bp.imaginary_above.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn branch_point_boundary() {
        // (E - E_j)/alpha = 1 -> zeta = 0 at the window edge equality
        let s = build_spectrum(&[0.0, 2.0, 3.0, 4.0, 20.0]).unwrap();
        let p = AdiabaticProblem::new(s, 2.5, 1, 0.1).unwrap();
        let bp = branch_points(&p, 2.0 + 2.5).unwrap();
        assert_abs_diff_eq!(bp.real_pair.0, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn branch_point_symmetry() {
        // -conj(zeta) solves the same defining equation
        let p = prob();
        let e = 5.3571;
        for z in branch_points(&p, e).unwrap().points() {
            let lhs = Complex64::new(e, 0.0) - p.alpha * z.cos();
            let lhs2 = Complex64::new(e, 0.0) - p.alpha * (-z.conj()).cos();
            assert!((lhs - lhs2).norm() < 1e-12);
        }
    }

    #[test]
    fn window_violation() {
        let p = prob();
        assert!(matches!(
            branch_points(&p, 20.0),
            Err(ActionsError::WindowViolation { .. })
        ));
    }

    #[test]
    fn phases_positive_and_monotone() {
        let p = prob();
        for &e in &[4.9, 5.3571, 5.8] {
            let f0 = phase_integral(&p, e, PhaseKind::Zero, Route::Line).unwrap();
            let fp = phase_integral(&p, e, PhaseKind::Pi, Route::Line).unwrap();
            assert!(f0 > 0.0 && fp > 0.0);
            let d0 = phase_derivative(&p, e, PhaseKind::Zero).unwrap();
            let dp = phase_derivative(&p, e, PhaseKind::Pi).unwrap();
            assert!(d0 < 0.0 && dp > 0.0, "dphi signs at {e}");
            // finite differences agree with the analytic derivative
            let h = 1e-5;
            let fd0 = (phase_integral(&p, e + h, PhaseKind::Zero, Route::Line).unwrap()
                - phase_integral(&p, e - h, PhaseKind::Zero, Route::Line).unwrap())
                / (2.0 * h);
            assert_abs_diff_eq!(fd0, d0, epsilon = 1e-5 * d0.abs().max(1.0));
        }
    }

    #[test]
    fn actions_positive_real() {
        let p = prob();
        for &e in &[5.0, 5.3571, 5.7] {
            for kind in [ActionKind::V0, ActionKind::VPi, ActionKind::HPi] {
                let s = action_integral(&p, e, kind, Route::Line).unwrap();
                assert!(s > 0.0, "{kind:?} at {e}");
            }
        }
    }

    #[test]
    fn contour_matches_line() {
        let p = prob();
        let e = 5.3571;
        for which in [PhaseKind::Zero, PhaseKind::Pi] {
            let a = phase_integral(&p, e, which, Route::Line).unwrap();
            let b = phase_integral(&p, e, which, Route::Contour).unwrap();
            assert!(
                (a - b).abs() <= 1e-9 * a.abs(),
                "{which:?}: line {a} vs contour {b}"
            );
        }
        for kind in [
            ActionKind::V0,
            ActionKind::VPi,
            ActionKind::HPi,
            ActionKind::H0,
        ] {
            let a = action_integral(&p, e, kind, Route::Line).unwrap();
            let b = action_integral(&p, e, kind, Route::Contour).unwrap();
            assert!(
                (a - b).abs() <= 1e-8 * a.abs(),
                "{kind:?}: line {a} vs contour {b}"
            );
        }
    }

    #[test]
    fn horizontal_parity_via_contours() {
        let p = prob();
        for &e in &[5.1, 5.3571, 5.6] {
            let sh0 = action_integral(&p, e, ActionKind::H0, Route::Contour).unwrap();
            let shpi = action_integral(&p, e, ActionKind::HPi, Route::Contour).unwrap();
            assert!(
                (sh0 - shpi).abs() / sh0 < 1e-9,
                "parity defect {} at {e}",
                (sh0 - shpi).abs() / sh0
            );
        }
    }

    #[test]
    fn dual_quadrature_for_horizontal_action() {
        let p = prob();
        let e = 5.3571;
        let bp = branch_points(&p, e).unwrap();
        let (z0, z1) = bp.real_pair;
        let adaptive = action_integral(&p, e, ActionKind::HPi, Route::Line).unwrap();
        // split off the sqrt weight and feed the smooth ratio to the
        // Chebyshev rule
        let mut g = |t: f64| {
            let im = p.spectrum.k_real(e - p.alpha * t.cos()).im;
            let w = ((t - z0).max(1e-300) * (z1 - t).max(1e-300)).sqrt();
            im / w
        };
        let cheb = quad::gauss_chebyshev(&mut g, z0, z1, 200);
        assert!(
            (cheb - adaptive).abs() <= 1e-9 * adaptive,
            "cheb {cheb} vs adaptive {adaptive}"
        );
    }

    #[test]
    fn contour_offset_invariance() {
        let p = prob();
        let e = 5.2;
        let bp = branch_points(&p, e).unwrap();
        let (z0, z1) = bp.real_pair;
        let foreign = z0.min(PI - z1).min(bp.imaginary_above[0]);
        let base = rect_offset(z1 - z0, foreign).unwrap();
        let mut vals = Vec::new();
        for off in [base, 0.5 * base] {
            let v = contour_loop(&p, e, horizontal_rect(z0, z1, off), off / 3.0).unwrap();
            vals.push((Complex64::new(0.0, -0.5) * v).re.abs());
        }
        assert!(
            (vals[0] - vals[1]).abs() <= 1e-9 * vals[0],
            "offset drift {vals:?}"
        );
    }

    #[test]
    fn tunneling_identities() {
        let p = prob();
        let pr = tunneling_profile(&p, 5.3571).unwrap();
        assert_eq!(pr.sh0, pr.shpi);
        assert!((pr.sh - (pr.sh0 + pr.shpi)).abs() < 1e-15 * pr.sh);
        // th = th0*thpi against exp(-(sh0+shpi)/eps): ulp scale plus the
        // argument-rounding amplification of exp
        let direct = (-(pr.sh0 + pr.shpi) / p.epsilon).exp();
        let tol = direct * (4.0 + (pr.sh0 + pr.shpi) / p.epsilon) * f64::EPSILON * 4.0;
        assert!((pr.th - direct).abs() <= tol);
        assert_eq!((0.0f64 / p.epsilon).exp(), 1.0);
        assert_abs_diff_eq!(
            (-p.epsilon / p.epsilon).exp(),
            (-1.0f64).exp(),
            epsilon = 1e-16
        );
    }
}
