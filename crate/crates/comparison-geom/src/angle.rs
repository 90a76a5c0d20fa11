use crate::CompError;

/// Angle at `o` of the Euclidean triangle with side lengths `|op|`, `|oq|`,
/// `|pq|`, clamped to `[0, π]`.
///
/// Triangle-inequality violations up to `1e-9` of the perimeter are treated
/// as round-off.
pub fn comparison_angle(d_op: f64, d_oq: f64, d_pq: f64) -> Result<f64, CompError> {
    let ds = [d_op, d_oq, d_pq];
    if ds.iter().any(|d| !d.is_finite()) || d_op <= 0.0 || d_oq <= 0.0 || d_pq < 0.0 {
        return Err(CompError::NonPositiveDistance(d_op, d_oq, d_pq));
    }
    let tol = 1e-9 * (d_op + d_oq + d_pq);
    if d_pq > d_op + d_oq + tol || d_op > d_oq + d_pq + tol || d_oq > d_op + d_pq + tol {
        return Err(CompError::TriangleInequality(d_op, d_oq, d_pq));
    }
    let c = ((d_op * d_op + d_oq * d_oq - d_pq * d_pq) / (2.0 * d_op * d_oq)).clamp(-1.0, 1.0);
    let half = ((d_pq * d_pq - (d_op - d_oq).powi(2)) / (4.0 * d_op * d_oq)).clamp(0.0, 1.0);
    // sin²(θ/2) keeps precision for thin and nearly flat triangles where acos does not
    Ok(if c.abs() < 0.5 {
        c.acos()
    } else {
        2.0 * half.sqrt().asin()
    })
}
