//! Sign assignment with certified partial-sum bounds.
//!
//! [`sign_sequence`] feeds the inputs one at a time through
//! [`admissible::insert`](crate::admissible::insert), starting from the
//! empty set. After step `k` the current atoms `A_k` satisfy: every point of
//! `Π(A_k)` is a signed sum of `v_1..v_k` whose earlier prefixes lie in the
//! earlier `Π(A_j)`. Picking any point of the final `Π(A_n)` and following
//! provenance back yields signs whose every prefix lies in some `Π(A_j)`,
//! so every partial sum is bounded by the largest radius of those sets.
//!
//! The state is built online, but the signs are only known after the last
//! input has been consumed.
//!
//! In the plane an admissible set has at most two atoms, which gives the
//! bound `2` for any norm and `√3` for the Euclidean norm (by the
//! parallelogram identity, since the two atoms differ by more than 1).

use serde::Serialize;

use crate::admissible::{
    insert, pi_points, radius, AdmissibleSet, Degeneracy, InsertCase, Sign, SignPattern,
};
use crate::error::{Error, Result};
use crate::norms::{NormSpec, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Trapping,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignResult {
    pub signs: Vec<Sign>,
    /// Norm of each prefix sum `Σ_{i<=k} signs[i] v_i`.
    pub partial_norms: Vec<f64>,
    pub max_partial_norm: f64,
    /// Present for planar inputs signed by the trapping algorithm.
    pub certified_bound: Option<f64>,
    /// Largest norm in `Π` of the final admissible set (trapping only).
    pub final_radius: Option<f64>,
    pub algorithm: Algorithm,
    pub warnings: Vec<Degeneracy>,
}

/// State after one insertion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub index: usize,
    pub input: Vector,
    pub case: InsertCase,
    pub pattern: Option<SignPattern>,
    pub set: AdmissibleSet,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StepTrace {
    pub steps: Vec<TraceStep>,
}

impl StepTrace {
    /// Re-runs every insertion from the recorded snapshots and checks that
    /// each reproduces the next snapshot exactly.
    pub fn replays(&self, spec: &NormSpec, tol: f64) -> bool {
        let mut prev = AdmissibleSet::new();
        for step in &self.steps {
            match insert(&prev, &step.input, step.index, spec, tol) {
                Ok(ins)
                    if ins.set == step.set && ins.case == step.case && ins.pattern == step.pattern => {}
                _ => return false,
            }
            prev = step.set.clone();
        }
        true
    }
}

/// Theorem-backed bound for planar inputs: `√3 (1 + tol)` for the Euclidean
/// norm, `2 (1 + tol)` otherwise. A degenerate insertion widens the bound by
/// twice its overshoot and drops the Euclidean refinement.
pub fn planar_bound(spec: &NormSpec, tol: f64, warnings: &[Degeneracy]) -> f64 {
    if warnings.is_empty() {
        let base = if spec.is_euclidean() { 3f64.sqrt() } else { 2.0 };
        base * (1.0 + tol)
    } else {
        let excess: f64 = warnings.iter().map(|w| w.excess.max(0.0)).sum();
        2.0 * (1.0 + tol) + 2.0 * excess
    }
}

fn validate_inputs(vectors: &[Vector], spec: &NormSpec, tol: Option<f64>) -> Result<Option<usize>> {
    let Some(first) = vectors.first() else {
        return Ok(None);
    };
    let dim = first.dim();
    spec.check_dim(dim)?;
    for (index, v) in vectors.iter().enumerate() {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        if let Some(tol) = tol {
            let norm = spec.norm_of(v.coords());
            if norm > 1.0 + tol {
                return Err(Error::InputTooLong { index, norm, tol });
            }
        }
    }
    Ok(Some(dim))
}

fn prefix_norms(vectors: &[Vector], signs: &[Sign], spec: &NormSpec) -> Vec<f64> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let mut sum = vec![0.0; first.dim()];
    vectors
        .iter()
        .zip(signs)
        .map(|(v, s)| {
            for (acc, c) in sum.iter_mut().zip(v.coords()) {
                *acc += s.value() * c;
            }
            spec.norm_of(&sum)
        })
        .collect()
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

/// Signs the inputs with the trapping-family construction.
pub fn sign_sequence(vectors: &[Vector], spec: &NormSpec, tol: f64) -> Result<SignResult> {
    run_trapping(vectors, spec, tol, false).map(|(r, _)| r)
}

/// Like [`sign_sequence`], also returning every intermediate admissible set.
pub fn sign_sequence_traced(
    vectors: &[Vector],
    spec: &NormSpec,
    tol: f64,
) -> Result<(SignResult, StepTrace)> {
    run_trapping(vectors, spec, tol, true)
}

fn run_trapping(
    vectors: &[Vector],
    spec: &NormSpec,
    tol: f64,
    with_trace: bool,
) -> Result<(SignResult, StepTrace)> {
    let dim = validate_inputs(vectors, spec, Some(tol))?;
    let mut trace = StepTrace::default();
    let mut warnings = Vec::new();
    let mut set = AdmissibleSet::new();
    for (index, v) in vectors.iter().enumerate() {
        let ins = insert(&set, v, index, spec, tol)?;
        warnings.extend(ins.warning.clone());
        if with_trace {
            trace.steps.push(TraceStep {
                index,
                input: v.clone(),
                case: ins.case,
                pattern: ins.pattern.clone(),
                set: ins.set.clone(),
            });
        }
        set = ins.set;
    }

    let Some(dim) = dim else {
        let result = SignResult {
            signs: Vec::new(),
            partial_norms: Vec::new(),
            max_partial_norm: 0.0,
            certified_bound: None,
            final_radius: Some(0.0),
            algorithm: Algorithm::Trapping,
            warnings,
        };
        return Ok((result, trace));
    };

    // Final point of Π: the shortest one, first in (+1 before -1) order.
    let candidates = pi_points(&set.values(), dim)?;
    let (_, choice) = candidates
        .iter()
        .map(|(p, pattern)| (spec.norm_of(p.coords()), pattern))
        .fold(None::<(f64, &SignPattern)>, |best, (n, pattern)| match best {
            Some((b, _)) if b <= n => best,
            _ => Some((n, pattern)),
        })
        .expect("Π is never empty");

    let mut signs = vec![Sign::Plus; vectors.len()];
    for (atom, &c) in set.atoms().iter().zip(&choice.0) {
        let atom_sign = if c > 0 { Sign::Plus } else { Sign::Minus };
        for &(i, s) in &atom.provenance {
            signs[i] = s.times(atom_sign);
        }
    }

    let partial_norms = prefix_norms(vectors, &signs, spec);
    let certified_bound = (dim == 2).then(|| planar_bound(spec, tol, &warnings));
    let result = SignResult {
        max_partial_norm: max_of(&partial_norms),
        partial_norms,
        signs,
        certified_bound,
        final_radius: Some(radius(&set, spec)?),
        algorithm: Algorithm::Trapping,
        warnings,
    };
    Ok((result, trace))
}

/// Baseline: each sign minimizes the norm of the current prefix sum, with
/// ties going to `+1`. No bound is certified.
pub fn greedy_sign(vectors: &[Vector], spec: &NormSpec) -> Result<SignResult> {
    validate_inputs(vectors, spec, None)?;
    let mut signs = Vec::with_capacity(vectors.len());
    let mut partial_norms = Vec::with_capacity(vectors.len());
    if let Some(first) = vectors.first() {
        let mut sum = vec![0.0; first.dim()];
        let mut plus = sum.clone();
        let mut minus = sum.clone();
        for v in vectors {
            for ((p, m), (s, c)) in plus.iter_mut().zip(minus.iter_mut()).zip(sum.iter().zip(v.coords())) {
                *p = s + c;
                *m = s - c;
            }
            let (np, nm) = (spec.norm_of(&plus), spec.norm_of(&minus));
            if np <= nm {
                signs.push(Sign::Plus);
                partial_norms.push(np);
                sum.copy_from_slice(&plus);
            } else {
                signs.push(Sign::Minus);
                partial_norms.push(nm);
                sum.copy_from_slice(&minus);
            }
        }
    }
    Ok(SignResult {
        max_partial_norm: max_of(&partial_norms),
        partial_norms,
        signs,
        certified_bound: None,
        final_radius: None,
        algorithm: Algorithm::Greedy,
        warnings: Vec::new(),
    })
}

/// Outcome of [`verify_sign_result`]; passes when no violation was found.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Verification {
    pub violations: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Recomputes every partial sum from scratch and checks the result's
/// internal consistency and its certified bound.
pub fn verify_sign_result(vectors: &[Vector], result: &SignResult, spec: &NormSpec) -> Verification {
    let mut violations = Vec::new();
    if result.signs.len() != vectors.len() {
        violations.push(format!(
            "{} signs for {} vectors",
            result.signs.len(),
            vectors.len()
        ));
    }
    if result.partial_norms.len() != vectors.len() {
        violations.push(format!(
            "{} partial norms for {} vectors",
            result.partial_norms.len(),
            vectors.len()
        ));
    }
    if let Err(e) = validate_inputs(vectors, spec, None) {
        violations.push(e.to_string());
    }
    if !violations.is_empty() {
        return Verification { violations };
    }

    let recomputed = prefix_norms(vectors, &result.signs, spec);
    for (k, (&claimed, &actual)) in result.partial_norms.iter().zip(&recomputed).enumerate() {
        if !claimed.is_finite() || (claimed - actual).abs() > 1e-9 {
            violations.push(format!(
                "partial norm {k}: reported {claimed}, recomputed {actual}"
            ));
        }
    }
    let claimed_max = max_of(&result.partial_norms);
    if (claimed_max - result.max_partial_norm).abs() > 1e-12 {
        violations.push(format!(
            "max_partial_norm {} differs from the maximum of partial_norms {claimed_max}",
            result.max_partial_norm
        ));
    }
    if let Some(bound) = result.certified_bound {
        let actual_max = max_of(&recomputed);
        if actual_max > bound + 1e-9 || result.max_partial_norm > bound + 1e-9 {
            violations.push(format!(
                "maximum partial norm {actual_max} exceeds the certified bound {bound}"
            ));
        }
    }
    Verification { violations }
}
