//! Finite-difference stencils on (possibly non-uniform) 1D grids.

/// Parity of a field under reflection through the axis `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Fornberg weights: coefficients `c[k]` with `Σ c[k] y(xs[k]) ≈ y⁽ᵐ⁾(x0)`.
pub fn weights(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] *= c4 / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

fn apply(w: &[f64], ys: &[f64]) -> f64 {
    w.iter().zip(ys).map(|(a, b)| a * b).sum()
}

/// First and second derivatives of `y` sampled on `x`.
///
/// Interior nodes use three-point centered stencils. With `axis = Some(p)`
/// the low end is treated as lying on or next to the reflection axis `x = 0`
/// and a ghost value `p·y` is mirrored in; otherwise the end uses one-sided
/// second-order stencils, as does the high end always.
pub fn derivatives(x: &[f64], y: &[f64], axis: Option<Parity>) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    assert!(n >= 4, "need at least 4 samples");
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for k in 1..n - 1 {
        let xs = [x[k - 1], x[k], x[k + 1]];
        let ys = [y[k - 1], y[k], y[k + 1]];
        d1[k] = apply(&weights(x[k], &xs, 1), &ys);
        d2[k] = apply(&weights(x[k], &xs, 2), &ys);
    }
    match axis {
        Some(p) => {
            let (gx, gy) = if x[0] == 0.0 { (-x[1], p.sign() * y[1]) } else { (-x[0], p.sign() * y[0]) };
            if x[0] == 0.0 && p == Parity::Odd {
                // odd field through the axis node: y(0) = 0, y'' = 0, and
                // y/x is even, so extrapolate it to the axis
                d1[0] = even_extrapolate(x[1], y[1] / x[1], x[2], y[2] / x[2]);
                d2[0] = 0.0;
            } else {
                let xs = [gx, x[0], x[1]];
                let ys = [gy, y[0], y[1]];
                d1[0] = apply(&weights(x[0], &xs, 1), &ys);
                d2[0] = apply(&weights(x[0], &xs, 2), &ys);
            }
        }
        None => {
            d1[0] = apply(&weights(x[0], &x[..3], 1), &y[..3]);
            d2[0] = apply(&weights(x[0], &x[..4], 2), &y[..4]);
        }
    }
    let t = n - 1;
    d1[t] = apply(&weights(x[t], &x[n - 3..], 1), &y[n - 3..]);
    d2[t] = apply(&weights(x[t], &x[n - 4..], 2), &y[n - 4..]);
    (d1, d2)
}

/// First derivative only, same stencil rules as [`derivatives`].
pub fn derivative(x: &[f64], y: &[f64], axis: Option<Parity>) -> Vec<f64> {
    derivatives(x, y, axis).0
}

/// Value at 0 of an even function known at `x1 < x2`, exact for `a + b x²`.
pub fn even_extrapolate(x1: f64, f1: f64, x2: f64, f2: f64) -> f64 {
    (x2 * x2 * f1 - x1 * x1 * f2) / (x2 * x2 - x1 * x1)
}

/// Value at 0 of an even function known at `x1 < x2 < x3`, exact for
/// `a + b x² + c x⁴`.
pub fn even_extrapolate3(x: [f64; 3], f: [f64; 3]) -> f64 {
    let s = x.map(|t| t * t);
    let mut acc = 0.0;
    for k in 0..3 {
        let mut w = 1.0;
        for m in 0..3 {
            if m != k {
                w *= s[m] / (s[m] - s[k]);
            }
        }
        acc += w * f[k];
    }
    acc
}

/// Composite trapezoid rule.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1])).sum()
}

/// Running trapezoid integral, starting at 0.
pub fn cumulative_trapezoid(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..x.len() {
        acc += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
        out.push(acc);
    }
    out
}

/// Composite Simpson rule on a uniform grid with an odd number of nodes;
/// falls back to a trailing trapezoid panel otherwise.
pub fn simpson_uniform(h: f64, y: &[f64]) -> f64 {
    let n = y.len();
    if n < 3 {
        return if n == 2 { 0.5 * h * (y[0] + y[1]) } else { 0.0 };
    }
    let m = if n % 2 == 1 { n } else { n - 1 };
    let mut s = y[0] + y[m - 1];
    for (k, yk) in y.iter().enumerate().take(m - 1).skip(1) {
        s += if k % 2 == 1 { 4.0 * yk } else { 2.0 * yk };
    }
    let mut total = s * h / 3.0;
    if m < n {
        total += 0.5 * h * (y[n - 2] + y[n - 1]);
    }
    total
}
