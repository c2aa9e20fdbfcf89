//! Sequences in the Euclidean plane that defeat every signer.
//!
//! Starting from `v_1 = (0, 1)`, each new unit vector is placed so that the
//! current point `x_k = -(v_1 + ... + v_k)` satisfies `|x_k + v_{k+1}| = √3 - δ`.
//! A signer that switches to `+` for the first time at step `k + 1` therefore
//! lands at distance `√3 - δ`; a signer that keeps `-` moves outward by more
//! than `δ` per step. Once `|x|` reaches `√2`, a final unit vector orthogonal
//! to `x` pushes both continuations to at least `√3`.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::{rotate, NormSpec, Vector};
use crate::oracle::{all_patterns_exceed, ORACLE_CAP};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversaryConfig {
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdversarySequence {
    pub vectors: Vec<Vector>,
    pub delta: f64,
    /// `trajectory[k] = -(v_1 + ... + v_{k+1})`.
    pub trajectory: Vec<Vector>,
    /// False when `√3 - δ <= √2` and the two-vector sequence is used.
    pub circle_branch: bool,
}

impl AdversarySequence {
    /// Strict upper bound on the sequence length, `3 + (√2 - 1)/δ`.
    pub fn length_bound(&self) -> f64 {
        length_bound(self.delta)
    }

    pub fn threshold(&self) -> f64 {
        SQRT_3 - self.delta
    }

    /// Structural checks on the construction. Returns one message per
    /// violated property.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let n = self.vectors.len();
        if self.vectors.iter().any(|v| v.dim() != 2) {
            violations.push("vectors must be planar".into());
            return violations;
        }
        if n == 0 {
            violations.push("sequence is empty".into());
            return violations;
        }
        for (i, v) in self.vectors.iter().enumerate() {
            if v.euclidean_norm() > 1.0 + 1e-12 {
                violations.push(format!("vector {i} has norm {} > 1", v.euclidean_norm()));
            }
        }
        for (name, v) in [("first", &self.vectors[0]), ("last", &self.vectors[n - 1])] {
            if (v.euclidean_norm() - 1.0).abs() > 1e-12 {
                violations.push(format!("{name} vector is not unit length"));
            }
        }
        if (n as f64) >= self.length_bound() {
            violations.push(format!(
                "length {n} is not below 3 + (√2 - 1)/δ = {}",
                self.length_bound()
            ));
        }

        // Trajectory must match the vectors.
        let mut x = Vector::zeros(2);
        if self.trajectory.len() != n {
            violations.push("trajectory length differs from sequence length".into());
        } else {
            for (k, v) in self.vectors.iter().enumerate() {
                x = &x - v;
                if x.max_abs_diff(&self.trajectory[k]) > 1e-12 {
                    violations.push(format!("trajectory point {k} does not match"));
                }
            }
        }

        if self.circle_branch && self.trajectory.len() == n && n >= 2 {
            let target = self.threshold();
            // Growth phase: steps 2..n-1 (1-based) chosen on the circle.
            for k in 0..n - 2 {
                let x_k = &self.trajectory[k];
                let v_next = &self.vectors[k + 1];
                let x_next = &self.trajectory[k + 1];
                let r = x_k.euclidean_norm();
                let plus = (x_k + v_next).euclidean_norm();
                if plus < target - 1e-9 {
                    violations.push(format!("step {}: |x + v| = {plus} < √3 - δ", k + 2));
                }
                if x_next.euclidean_norm() <= r + self.delta - 1e-9 {
                    violations.push(format!("step {}: growth below δ", k + 2));
                }
                let minus_sq = x_next.dot(x_next);
                let floor = r * r + 2.0 * SQRT_2 * self.delta + self.delta * self.delta;
                if minus_sq <= floor - 1e-9 {
                    violations.push(format!(
                        "step {}: |x - v|² = {minus_sq} not above |x|² + 2√2δ + δ² = {floor}",
                        k + 2
                    ));
                }
            }
            let last = &self.vectors[n - 1];
            let x_before = &self.trajectory[n - 2];
            if x_before.euclidean_norm() < SQRT_2 - 1e-12 {
                violations.push("final vector appended before |x| reached √2".into());
            }
            if last.dot(x_before).abs() > 1e-9 {
                violations.push("final vector is not perpendicular to the trajectory".into());
            }
        }
        violations
    }
}

pub fn length_bound(delta: f64) -> f64 {
    3.0 + (SQRT_2 - 1.0) / delta
}

/// Unit vector `v` with `|x + v| = target`, obtained by rotating `x/|x|`
/// counterclockwise by `arccos((target² - |x|² - 1) / (2|x|))`.
pub fn choose_unit_vector(x: &Vector, target: f64) -> Result<Vector> {
    if x.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: x.dim(),
        });
    }
    let r = x.euclidean_norm();
    let unsolvable = || Error::UnsolvableGeometry {
        x_norm: r,
        target,
    };
    if !(r >= 1.0 - 1e-12) || !target.is_finite() {
        return Err(unsolvable());
    }
    let cos = (target * target - r * r - 1.0) / (2.0 * r);
    if cos.abs() > 1.0 + 1e-12 {
        return Err(unsolvable());
    }
    let theta = cos.clamp(-1.0, 1.0).acos();
    rotate(&x.scale(1.0 / r), theta)
}

pub fn build_lower_bound_sequence(config: AdversaryConfig) -> Result<AdversarySequence> {
    let delta = config.delta;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidDelta(delta));
    }
    let target = SQRT_3 - delta;

    let (vectors, circle_branch) = if target <= SQRT_2 {
        (vec![Vector::from([1.0, 0.0]), Vector::from([0.0, 1.0])], false)
    } else {
        let mut vectors = vec![Vector::from([0.0, 1.0])];
        let mut x = Vector::from([0.0, -1.0]);
        // Each step grows |x| by more than δ, so this terminates.
        while x.euclidean_norm() < SQRT_2 {
            let v = choose_unit_vector(&x, target)?;
            x = &x - &v;
            vectors.push(v);
        }
        let normal = rotate(&x.scale(1.0 / x.euclidean_norm()), FRAC_PI_2)?;
        vectors.push(normal);
        (vectors, true)
    };

    let mut x = Vector::zeros(2);
    let trajectory = vectors
        .iter()
        .map(|v| {
            x = &x - v;
            x.clone()
        })
        .collect();
    let seq = AdversarySequence {
        vectors,
        delta,
        trajectory,
        circle_branch,
    };
    let violations = seq.check_invariants();
    if !violations.is_empty() {
        return Err(Error::InvariantViolated(violations.join("; ")));
    }
    Ok(seq)
}

/// Re-checks the construction and confirms by exhaustive search that every
/// sign pattern reaches `√3 - δ` (less `1e-9`).
pub fn verify_adversary(seq: &AdversarySequence) -> Result<bool> {
    if !seq.check_invariants().is_empty() {
        return Ok(false);
    }
    all_patterns_exceed(
        &seq.vectors,
        &NormSpec::Euclidean,
        seq.threshold() - 1e-9,
        ORACLE_CAP,
    )
}
