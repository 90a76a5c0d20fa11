/// One extreme value and the flat sample index where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extreme {
    pub value: f64,
    pub index: usize,
}

/// A family of sectional curvatures sampled at every grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionalFamily {
    pub name: &'static str,
    /// Smallest sectional curvature of the family at each sample.
    pub min: Vec<f64>,
    /// Largest sectional curvature of the family at each sample.
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    /// Scalar curvature at every sample.
    pub scalar: Vec<f64>,
    /// Ricci eigenvalues per sample, ascending.
    pub ricci_eigs: Vec<Vec<f64>>,
    pub sectional: Vec<SectionalFamily>,
    pub sec_min: Extreme,
    pub sec_max: Extreme,
}

impl CurvatureReport {
    pub(crate) fn assemble(mut ricci_eigs: Vec<Vec<f64>>, sectional: Vec<SectionalFamily>) -> Self {
        for e in ricci_eigs.iter_mut() {
            e.sort_by(|a, b| a.total_cmp(b));
        }
        let scalar = ricci_eigs.iter().map(|e| e.iter().sum()).collect();
        let mut sec_min = Extreme { value: f64::INFINITY, index: 0 };
        let mut sec_max = Extreme { value: f64::NEG_INFINITY, index: 0 };
        for fam in &sectional {
            for (k, (&lo, &hi)) in fam.min.iter().zip(&fam.max).enumerate() {
                if lo < sec_min.value {
                    sec_min = Extreme { value: lo, index: k };
                }
                if hi > sec_max.value {
                    sec_max = Extreme { value: hi, index: k };
                }
            }
        }
        CurvatureReport { scalar, ricci_eigs, sectional, sec_min, sec_max }
    }

    /// Largest `|R − Σλ|` over the samples.
    pub fn trace_defect(&self) -> f64 {
        self.scalar
            .iter()
            .zip(&self.ricci_eigs)
            .map(|(r, e)| (r - e.iter().sum::<f64>()).abs())
            .fold(0.0, f64::max)
    }

    pub fn family(&self, name: &str) -> Option<&SectionalFamily> {
        self.sectional.iter().find(|f| f.name == name)
    }
}

/// Result of testing `∇²φ ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcavityReport {
    /// `max(0, largest eigenvalue of ∇²φ)` over the samples.
    pub max_violation: f64,
    /// Where the largest eigenvalue sits (even when it is not a violation).
    pub location: usize,
    /// Largest eigenvalue of `∇²φ`, signed.
    pub max_eigenvalue: f64,
}

impl ConcavityReport {
    pub(crate) fn from_eigs(eigs: impl Iterator<Item = f64>) -> Self {
        let mut best = Extreme { value: f64::NEG_INFINITY, index: 0 };
        for (k, e) in eigs.enumerate() {
            if e > best.value {
                best = Extreme { value: e, index: k };
            }
        }
        ConcavityReport { max_violation: best.value.max(0.0), location: best.index, max_eigenvalue: best.value }
    }

    pub fn is_concave(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}
