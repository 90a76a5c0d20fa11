use crate::clairaut::{profile_distance, Distance, Warp};
use crate::CompError;

/// Closed-form and profile-defined model geometries.
#[derive(Debug, Clone, Copy)]
pub enum Model<'a> {
    /// Euclidean space in cylindrical coordinates `(u, r, θ)`.
    Flat,
    /// Round sphere; `r` is the distance from the north pole.
    Sphere { radius: f64 },
    /// `dr² + φ(r)² g_{S^{n−1}}`; `θ` is the angle between directions.
    Rotational(Warp<'a>),
    /// `du² + dr² + φ(r)² dθ²`, e.g. `ℝ × Cigar` with `Γ = {r = 0}`.
    LineTimes(Warp<'a>),
}

/// A point `(u, r, θ)`; `u` is used only by the product models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub u: f64,
    pub r: f64,
    pub theta: f64,
}

impl Point {
    pub fn polar(r: f64, theta: f64) -> Self {
        Point { u: 0.0, r, theta }
    }

    pub fn new(u: f64, r: f64, theta: f64) -> Self {
        Point { u, r, theta }
    }
}

/// Distance between two points of a model.
pub fn model_distance(model: &Model, a: Point, b: Point) -> Result<Distance, CompError> {
    if a.r < 0.0 || b.r < 0.0 {
        return Err(CompError::Unsupported("negative radial coordinate"));
    }
    let dtheta = b.theta - a.theta;
    match model {
        Model::Flat => {
            let planar = (a.r * a.r + b.r * b.r - 2.0 * a.r * b.r * dtheta.cos()).max(0.0);
            Ok(Distance::exact(((a.u - b.u).powi(2) + planar).sqrt()))
        }
        Model::Sphere { radius } => {
            if a.u != b.u {
                return Err(CompError::Unsupported(
                    "sphere points carry no line coordinate",
                ));
            }
            let (p, q) = (a.r / radius, b.r / radius);
            let c = (p.cos() * q.cos() + p.sin() * q.sin() * dtheta.cos()).clamp(-1.0, 1.0);
            Ok(Distance::exact(radius * c.acos()))
        }
        Model::Rotational(w) => {
            if a.u != b.u {
                return Err(CompError::Unsupported(
                    "rotational points carry no line coordinate",
                ));
            }
            profile_distance(w, a.r, b.r, dtheta)
        }
        Model::LineTimes(w) => {
            let du = (a.u - b.u).abs();
            let d = profile_distance(w, a.r, b.r, dtheta)?;
            let combine = |x: f64| (du * du + x * x).sqrt();
            Ok(Distance {
                value: combine(d.value),
                lower: combine(d.lower),
                upper: combine(d.upper),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn spec_examples() {
        let lc = Model::LineTimes(Warp::Cigar);
        let d = model_distance(&lc, Point::new(-3.0, 0.0, 0.0), Point::new(4.5, 0.0, 0.0)).unwrap();
        assert_eq!(d.value, 7.5);
        let c = Model::Rotational(Warp::Cigar);
        assert_eq!(
            model_distance(&c, Point::polar(0.0, 0.0), Point::polar(3.25, 1.0))
                .unwrap()
                .value,
            3.25
        );
        let s = Model::Sphere { radius: 1.0 };
        let d = model_distance(&s, Point::polar(0.0, 0.0), Point::polar(PI, 0.0)).unwrap();
        assert!((d.value - PI).abs() < 1e-15);
    }

    #[test]
    fn sphere_matches_profile_reduction() {
        let g: Vec<f64> = (0..=1500).map(|k| k as f64 * 1e-3).collect();
        let phi: Vec<f64> = g.iter().map(|r| r.sin()).collect();
        let p = geom_core::RadialProfile::from_samples(2, g, phi, vec![0.0; 1501]).unwrap();
        let rot = Model::Rotational(Warp::Sampled(&p));
        let sph = Model::Sphere { radius: 1.0 };
        let (a, b) = (Point::polar(0.7, 0.0), Point::polar(1.2, 1.1));
        let exact = model_distance(&sph, a, b).unwrap().value;
        let got = model_distance(&rot, a, b).unwrap();
        assert!((got.value - exact).abs() < 1e-6, "{got:?} {exact}");
    }

    #[test]
    fn product_distance_is_pythagorean() {
        let lc = Model::LineTimes(Warp::Cigar);
        let d = model_distance(&lc, Point::new(0.0, 1.0, 0.0), Point::new(2.0, 3.0, 0.0)).unwrap();
        assert!((d.value - 8f64.sqrt()).abs() < 1e-14);
    }
}
