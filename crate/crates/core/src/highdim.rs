//! Admissible families in R^d whose sums grow linearly in d.
//!
//! Since the sum of an admissible set lies in its Π set, these families show
//! that radii of admissible-set Π sets in R^d can be of order d for both the
//! max norm and the Euclidean norm.

use std::fmt;

use serde::Serialize;

use crate::admissible::{is_admissible_capped, min_multi_term_norm};
use crate::error::{Error, Result};
use crate::norms::{NormSpec, Vector};

/// Largest family size (d - 1) verified by exhaustive 3^(d-1) enumeration.
pub const VERIFY_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyNorm {
    Max,
    Euclidean,
}

impl FamilyNorm {
    pub fn spec(self) -> NormSpec {
        match self {
            FamilyNorm::Max => NormSpec::Linf,
            FamilyNorm::Euclidean => NormSpec::Euclidean,
        }
    }

    /// Constant `c` with `sum_norm >= c (d - 1)`.
    pub fn linear_constant(self) -> f64 {
        match self {
            FamilyNorm::Max => 1.0,
            FamilyNorm::Euclidean => 0.2,
        }
    }
}

impl fmt::Display for FamilyNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyNorm::Max => "max",
            FamilyNorm::Euclidean => "euclidean",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HighDimFamily {
    pub dimension: usize,
    pub norm: FamilyNorm,
    pub vectors: Vec<Vector>,
    pub sum: Vector,
    pub sum_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdmissibilityCheck {
    Admissible,
    NotAdmissible,
    /// Family too large for exhaustive verification.
    Unverified,
}

impl HighDimFamily {
    fn from_vectors(dimension: usize, norm: FamilyNorm, vectors: Vec<Vector>) -> Self {
        let mut sum = vec![0.0; dimension];
        for v in &vectors {
            for (s, c) in sum.iter_mut().zip(v.coords()) {
                *s += c;
            }
        }
        let sum = Vector::new(sum).expect("finite sum");
        let sum_norm = norm.spec().norm_of(sum.coords());
        Self {
            dimension,
            norm,
            vectors,
            sum,
            sum_norm,
        }
    }

    /// Brute-force admissibility over all `3^(d-1)` coefficient patterns,
    /// skipped beyond [`VERIFY_CAP`].
    pub fn verify(&self, tol: f64) -> Result<AdmissibilityCheck> {
        if self.vectors.len() > VERIFY_CAP {
            return Ok(AdmissibilityCheck::Unverified);
        }
        let ok = is_admissible_capped(&self.vectors, &self.norm.spec(), tol, VERIFY_CAP)?;
        Ok(if ok {
            AdmissibilityCheck::Admissible
        } else {
            AdmissibilityCheck::NotAdmissible
        })
    }

    /// Smallest norm over combinations with two or more nonzero terms, or
    /// `None` when verification is out of reach or the family is a singleton.
    pub fn admissibility_margin(&self) -> Result<Option<f64>> {
        if self.vectors.len() > VERIFY_CAP {
            return Ok(None);
        }
        Ok(min_multi_term_norm(&self.vectors, &self.norm.spec(), VERIFY_CAP)?.map(|(n, _)| n))
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::DimensionTooSmall { min: 2, found: d })
    } else {
        Ok(())
    }
}

/// `v_i[i] = -1`, `v_i[j] = 1` otherwise, for `i = 1..d-1`.
pub fn maxnorm_family(d: usize) -> Result<HighDimFamily> {
    check_dimension(d)?;
    let vectors = (0..d - 1)
        .map(|i| {
            let mut c = vec![1.0; d];
            c[i] = -1.0;
            Vector::new(c).expect("finite")
        })
        .collect();
    Ok(HighDimFamily::from_vectors(d, FamilyNorm::Max, vectors))
}

/// `v_i[1] = 0.2`, `v_i[i+1] = 0.8`, zero elsewhere, for `i = 1..d-1`.
pub fn euclidean_family(d: usize) -> Result<HighDimFamily> {
    check_dimension(d)?;
    let vectors = (0..d - 1)
        .map(|i| {
            let mut c = vec![0.0; d];
            c[0] = 0.2;
            c[i + 1] = 0.8;
            Vector::new(c).expect("finite")
        })
        .collect();
    Ok(HighDimFamily::from_vectors(d, FamilyNorm::Euclidean, vectors))
}

/// The family's sum lies in its Π set, so its norm bounds the radius below.
pub fn family_radius_lower_bound(fam: &HighDimFamily) -> f64 {
    fam.sum_norm
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn maxnorm_d3() {
        let fam = maxnorm_family(3).unwrap();
        assert_eq!(
            fam.vectors,
            vec![Vector::from([-1.0, 1.0, 1.0]), Vector::from([1.0, -1.0, 1.0])]
        );
        assert_eq!(fam.sum, Vector::from([0.0, 0.0, 2.0]));
        assert_eq!(fam.sum_norm, 2.0);
        assert_eq!(fam.verify(TOL).unwrap(), AdmissibilityCheck::Admissible);
    }

    #[test]
    fn maxnorm_d2_is_a_singleton() {
        let fam = maxnorm_family(2).unwrap();
        assert_eq!(fam.vectors, vec![Vector::from([-1.0, 1.0])]);
        assert_eq!(fam.sum_norm, 1.0);
        assert_eq!(fam.verify(TOL).unwrap(), AdmissibilityCheck::Admissible);
        assert_eq!(fam.admissibility_margin().unwrap(), None);
    }

    #[test]
    fn euclidean_small_cases() {
        let fam = euclidean_family(3).unwrap();
        assert_eq!(
            fam.vectors,
            vec![Vector::from([0.2, 0.8, 0.0]), Vector::from([0.2, 0.0, 0.8])]
        );
        assert!(fam.sum.max_abs_diff(&Vector::from([0.4, 0.8, 0.8])) < 1e-15);
        assert!((fam.sum_norm - 1.2).abs() < 1e-12);
        assert!(fam.sum_norm > 0.4);

        let fam = euclidean_family(2).unwrap();
        assert!((fam.sum_norm - 0.68f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn radius_lower_bounds() {
        assert_eq!(family_radius_lower_bound(&maxnorm_family(6).unwrap()), 5.0);
        let r = family_radius_lower_bound(&euclidean_family(6).unwrap());
        assert!((r - 4.2f64.sqrt()).abs() < 1e-12);
        assert!(r > 1.0);
    }

    #[test]
    fn too_small_dimension() {
        assert!(matches!(maxnorm_family(1), Err(Error::DimensionTooSmall { .. })));
        assert!(matches!(euclidean_family(0), Err(Error::DimensionTooSmall { .. })));
    }

    #[test]
    fn beyond_cap_is_unverified() {
        let fam = euclidean_family(20).unwrap();
        assert_eq!(fam.vectors.len(), 19);
        assert_eq!(fam.verify(TOL).unwrap(), AdmissibilityCheck::Unverified);
    }
}
