//! Adaptive Dormand–Prince 5(4) stepping for small fixed-size systems.

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-10, atol: 1e-12, h_min: 1e-14 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepError {
    StepUnderflow { t: f64 },
    NonFinite { t: f64 },
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Stateful integrator that remembers its last accepted step size.
pub struct Stepper<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]> {
    rhs: F,
    tol: Tolerances,
    h: f64,
}

impl<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]> Stepper<N, F> {
    pub fn new(rhs: F, tol: Tolerances, h0: f64) -> Self {
        Stepper { rhs, tol, h: h0 }
    }

    fn attempt(&self, t: f64, y: &[f64; N], h: f64) -> ([f64; N], f64) {
        let mut k = [[0.0; N]; 7];
        k[0] = (self.rhs)(t, y);
        for s in 1..7 {
            let mut ys = *y;
            for (m, ysm) in ys.iter_mut().enumerate() {
                for q in 0..s {
                    *ysm += h * A[s][q] * k[q][m];
                }
            }
            k[s] = (self.rhs)(t + C[s] * h, &ys);
        }
        // A[6] holds the 5th-order weights (FSAL row)
        let mut y5 = *y;
        let mut err = 0.0f64;
        for m in 0..N {
            let mut inc = 0.0;
            let mut e = 0.0;
            for q in 0..7 {
                if q < 6 {
                    inc += A[6][q] * k[q][m];
                }
                e += E[q] * k[q][m];
            }
            y5[m] += h * inc;
            let sc = self.tol.atol + self.tol.rtol * y[m].abs().max(y5[m].abs());
            err = err.max((h * e / sc).abs());
        }
        (y5, err)
    }

    /// Advance from `t` to exactly `t_end`, updating `y` in place.
    pub fn advance(&mut self, t: &mut f64, y: &mut [f64; N], t_end: f64) -> Result<(), StepError> {
        while *t < t_end {
            let remaining = t_end - *t;
            let clipped = self.h > remaining;
            let mut h = self.h.min(remaining);
            let mut rejected = false;
            loop {
                if h < self.tol.h_min {
                    return Err(StepError::StepUnderflow { t: *t });
                }
                let (yn, err) = self.attempt(*t, y, h);
                if !yn.iter().all(|v| v.is_finite()) || !err.is_finite() {
                    h *= 0.25;
                    rejected = true;
                    if h < self.tol.h_min {
                        return Err(StepError::NonFinite { t: *t });
                    }
                    continue;
                }
                if err <= 1.0 {
                    *t = if h >= remaining { t_end } else { *t + h };
                    *y = yn;
                    let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    // a step clipped to land on t_end says nothing about the natural size
                    if !clipped || rejected {
                        self.h = h * grow;
                    }
                    break;
                }
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                rejected = true;
            }
        }
        Ok(())
    }
}
