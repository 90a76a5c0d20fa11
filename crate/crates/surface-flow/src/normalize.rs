use crate::{FlowError, FlowTrajectory};

/// The rescaling `r(t)` with `r(0) = 1`, `r ≤ min(√(K(t)/K(0)), √(V(0)/V(t)))`
/// at every sample and `r = √(V(0)/V(t))` near the end, interpolated by a
/// monotone cubic (Fritsch–Carlson).
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    slopes: Vec<f64>,
}

impl Normalization {
    /// `r(t)`, clamped to the sampled range.
    pub fn at(&self, t: f64) -> f64 {
        let ts = &self.times;
        let n = ts.len();
        if n == 1 || t <= ts[0] {
            return self.values[0];
        }
        if t >= ts[n - 1] {
            return self.values[n - 1];
        }
        let k = ts.partition_point(|&x| x <= t) - 1;
        let h = ts[k + 1] - ts[k];
        let s = (t - ts[k]) / h;
        let (y0, y1, m0, m1) = (self.values[k], self.values[k + 1], self.slopes[k], self.slopes[k + 1]);
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * h * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * h * m1
    }
}

fn pchip_slopes(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / (t[k + 1] - t[k])).collect();
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let (h0, h1) = (t[k] - t[k - 1], t[k + 1] - t[k]);
            let (w1, w2) = (2.0 * h1 + h0, h1 + 2.0 * h0);
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    m
}

/// Build `r(t)` from a trajectory. The final 10% of samples, and every
/// sample in the final 10% of the time range, take the volume branch.
pub fn normalization_factor(traj: &FlowTrajectory) -> Result<Normalization, FlowError> {
    let n = traj.len();
    if n == 0 {
        return Err(FlowError::InvalidParameter { name: "trajectory length", value: 0.0 });
    }
    if let Some(index) = traj.k_min.iter().position(|&k| !(k > 0.0)) {
        return Err(FlowError::NonPositiveCurvature { index, value: traj.k_min[index] });
    }
    let (k0, v0) = (traj.k_min[0], traj.area[0]);
    let (t0, t1) = (traj.times[0], traj.times[n - 1]);
    let tail_start = n - n.div_ceil(10);
    let values: Vec<f64> = (0..n)
        .map(|k| {
            let vol = (v0 / traj.area[k]).sqrt();
            let in_tail = k >= tail_start || traj.times[k] >= t0 + 0.9 * (t1 - t0);
            if k == 0 {
                1.0
            } else if in_tail {
                vol
            } else {
                vol.min((traj.k_min[k] / k0).sqrt())
            }
        })
        .collect();
    let slopes = pchip_slopes(&traj.times, &values);
    Ok(Normalization { times: traj.times.clone(), values, slopes })
}
