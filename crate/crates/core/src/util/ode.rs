//! Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4)) for small
//! dense state vectors.

/// Right-hand side of an autonomous-in-form system y' = f(t, y).
pub trait Rhs {
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

impl<F: Fn(f64, &[f64], &mut [f64])> Rhs for F {
    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        self(t, y, dy)
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, thiserror::Error)]
pub enum OdeError {
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
}

/// Integrate from t0 to t1 (t1 may be < t0), calling `observe` after each
/// accepted step with (t, y). State is modified in place.
pub fn integrate<R: Rhs>(
    rhs: &R,
    y: &mut [f64],
    t0: f64,
    t1: f64,
    rtol: f64,
    atol: f64,
    mut observe: Option<&mut dyn FnMut(f64, &[f64])>,
) -> Result<(), OdeError> {
    let n = y.len();
    let dir = (t1 - t0).signum();
    if dir == 0.0 || t0 == t1 {
        return Ok(());
    }
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut h = dir * (span / 100.0).min(1e-2 * span).max(span * 1e-10);
    let mut k = vec![vec![0.0; n]; 7];
    let mut ytmp = vec![0.0; n];
    rhs.eval(t, y, &mut k[0]);
    let mut steps = 0u64;
    while (t1 - t) * dir > 0.0 {
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        // Stage evaluations.
        for s in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s - 1][j] * kj[i];
                }
                ytmp[i] = y[i] + h * acc;
            }
            let ts = t + C[s - 1] * h;
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            rhs.eval(ts, &ytmp, &mut tail[0]);
        }
        // 5th-order solution is in ytmp after stage 6 (FSAL layout).
        let mut err = 0.0f64;
        for i in 0..n {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let sc = atol + rtol * y[i].abs().max(ytmp[i].abs());
            err = err.max((e / sc).abs());
        }
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&ytmp);
            k.swap(0, 6); // FSAL: last stage is the next first stage
            if let Some(obs) = observe.as_deref_mut() {
                obs(t, y);
            }
        } else {
            rhs.eval(t, y, &mut k[0]);
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= fac;
        if h.abs() < span * 1e-14 {
            return Err(OdeError::StepUnderflow(t));
        }
        steps += 1;
        if steps > 50_000_000 {
            return Err(OdeError::StepUnderflow(t));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let mut y = [1.0, 0.0];
        integrate(&rhs, &mut y, 0.0, 10.0, 1e-11, 1e-12, None).unwrap();
        assert!((y[0] - 10.0f64.cos()).abs() < 1e-8);
        assert!((y[1] + 10.0f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn backward_integration() {
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[0];
        };
        let mut y = [1.0];
        integrate(&rhs, &mut y, 0.0, -1.0, 1e-12, 1e-13, None).unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-10);
    }
}
