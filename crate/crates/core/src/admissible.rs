//! Admissible sets and the insertion step that keeps them admissible.
//!
//! A set of unit-ball vectors is admissible when every `{-1, 0, 1}`
//! combination with at least two nonzero coefficients has norm above
//! `1 + tol`. The signed-sum sets `Π(A) = {±a_1 ± ... ± a_k}` of admissible
//! sets form a trapping family: inserting a new unit-ball vector `v` either
//! extends the set (when the extension is still admissible) or collapses
//! `v` with a maximal collapsible combination of existing atoms.
//!
//! Each atom remembers which input vectors it aggregates, and with which
//! signs, so signs can be recovered after the last insertion.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{NormSpec, Vector};

/// Largest set size accepted by ternary enumeration (3^k patterns).
pub const ADMISSIBLE_CAP: usize = 16;
/// Largest set size accepted by Π enumeration (2^k patterns).
pub const PI_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn from_coefficient(c: i8) -> Option<Sign> {
        match c {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(c: i8) -> std::result::Result<Sign, String> {
        Sign::from_coefficient(c).ok_or_else(|| format!("sign must be +1 or -1, got {c}"))
    }
}

/// Coefficients over the atoms of a set: `{-1, 0, 1}` for admissibility and
/// collapse patterns, `{-1, 1}` for Π elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignPattern(pub Vec<i8>);

impl SignPattern {
    pub fn nonzero(&self) -> usize {
        self.0.iter().filter(|&&c| c != 0).count()
    }
}

/// A member of an admissible set together with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atom {
    pub value: Vector,
    /// `(input index, sign)` pairs with strictly increasing indices; the
    /// value is the signed sum of those inputs.
    pub provenance: Vec<(usize, Sign)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InsertCase {
    /// The new vector joined the set as its own atom.
    Extended,
    /// The new vector was merged with a collapsible combination of atoms.
    Collapsed,
}

/// Record of an insertion where no combination fell inside the tolerance
/// even though one must exist in exact arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Degeneracy {
    pub index: usize,
    /// Norm of the forced collapse minus one.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Insertion {
    pub set: AdmissibleSet,
    pub case: InsertCase,
    /// Coefficients applied to the previous atoms; `None` when extended.
    pub pattern: Option<SignPattern>,
    pub warning: Option<Degeneracy>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AdmissibleSet {
    atoms: Vec<Atom>,
}

impl AdmissibleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn values(&self) -> Vec<Vector> {
        self.atoms.iter().map(|a| a.value.clone()).collect()
    }

    fn last_index(&self) -> Option<usize> {
        self.atoms
            .iter()
            .filter_map(|a| a.provenance.last().map(|&(i, _)| i))
            .max()
    }

    /// Checks every structural invariant against the original inputs after
    /// `originals[..consumed]` have been inserted with 0-based indices.
    /// Returns a description of each violation.
    pub fn check_invariants(
        &self,
        originals: &[Vector],
        consumed: usize,
        spec: &NormSpec,
        tol: f64,
    ) -> Vec<String> {
        let mut violations = Vec::new();
        let mut seen = vec![false; consumed];
        for (j, atom) in self.atoms.iter().enumerate() {
            let norm = spec.norm_of(atom.value.coords());
            if norm > 1.0 + tol {
                violations.push(format!("atom {j} has norm {norm} > 1 + tol"));
            }
            if atom.provenance.is_empty() {
                violations.push(format!("atom {j} has empty provenance"));
            }
            if atom.provenance.windows(2).any(|w| w[0].0 >= w[1].0) {
                violations.push(format!("atom {j} provenance is not strictly increasing"));
            }
            let mut sum = vec![0.0; atom.value.dim()];
            for &(i, s) in &atom.provenance {
                if i >= consumed {
                    violations.push(format!("atom {j} references unconsumed index {i}"));
                    continue;
                }
                if std::mem::replace(&mut seen[i], true) {
                    violations.push(format!("index {i} appears in more than one atom"));
                }
                for (acc, c) in sum.iter_mut().zip(originals[i].coords()) {
                    *acc += s.value() * c;
                }
            }
            let drift = sum
                .iter()
                .zip(atom.value.coords())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if drift > 1e-9 {
                violations.push(format!("atom {j} differs from its provenance sum by {drift}"));
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            violations.push(format!("index {i} is not covered by any atom"));
        }
        match is_admissible(&self.values(), spec, tol) {
            Ok(true) => {}
            Ok(false) => violations.push("atom set is not admissible".into()),
            Err(e) => violations.push(format!("admissibility check failed: {e}")),
        }
        violations
    }
}

fn common_dim<'a>(vectors: impl IntoIterator<Item = &'a Vector>) -> Result<Option<usize>> {
    let mut dim = None;
    for v in vectors {
        match dim {
            None => dim = Some(v.dim()),
            Some(d) if d != v.dim() => {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.dim(),
                })
            }
            _ => {}
        }
    }
    Ok(dim)
}

/// Depth-first walk over `base + Σ c_i atoms[i]` for every `c` drawn from
/// `choices^k`, in lexicographic order of `choices`.
fn walk_combinations<F>(
    base: &[f64],
    atoms: &[&[f64]],
    choices: &[i8],
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[i8], &[f64]) -> ControlFlow<()>,
{
    let d = base.len();
    let k = atoms.len();
    let mut sums = vec![0.0; (k + 1) * d];
    sums[..d].copy_from_slice(base);
    let mut pattern = vec![0i8; k];
    walk_level(0, atoms, choices, &mut sums, &mut pattern, d, visit)
}

fn walk_level<F>(
    depth: usize,
    atoms: &[&[f64]],
    choices: &[i8],
    sums: &mut [f64],
    pattern: &mut [i8],
    d: usize,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[i8], &[f64]) -> ControlFlow<()>,
{
    if depth == atoms.len() {
        return visit(pattern, &sums[depth * d..(depth + 1) * d]);
    }
    for &c in choices {
        pattern[depth] = c;
        let (head, tail) = sums.split_at_mut((depth + 1) * d);
        let prev = &head[depth * d..];
        let next = &mut tail[..d];
        let cf = c as f64;
        for ((n, p), a) in next.iter_mut().zip(prev).zip(atoms[depth]) {
            *n = p + cf * a;
        }
        walk_level(depth + 1, atoms, choices, sums, pattern, d, visit)?;
    }
    ControlFlow::Continue(())
}

const TERNARY: [i8; 3] = [-1, 0, 1];
const BINARY: [i8; 2] = [1, -1];

fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

/// Admissibility test with the default enumeration cap.
pub fn is_admissible(vectors: &[Vector], spec: &NormSpec, tol: f64) -> Result<bool> {
    is_admissible_capped(vectors, spec, tol, ADMISSIBLE_CAP)
}

pub fn is_admissible_capped(
    vectors: &[Vector],
    spec: &NormSpec,
    tol: f64,
    cap: usize,
) -> Result<bool> {
    check_cap("admissibility check", vectors.len(), cap)?;
    let Some(dim) = common_dim(vectors)? else {
        return Ok(true);
    };
    spec.check_dim(dim)?;
    if vectors.iter().any(|v| spec.norm_of(v.coords()) > 1.0 + tol) {
        return Ok(false);
    }
    if vectors.len() < 2 {
        return Ok(true);
    }
    let coords: Vec<&[f64]> = vectors.iter().map(|v| v.coords()).collect();
    let zero = vec![0.0; dim];
    let flow = walk_combinations(&zero, &coords, &TERNARY, &mut |pattern, sum| {
        let nonzero = pattern.iter().filter(|&&c| c != 0).count();
        if nonzero >= 2 && spec.norm_of(sum) <= 1.0 + tol {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(flow.is_continue())
}

/// Smallest norm over combinations with at least two nonzero coefficients,
/// with the lexicographically first pattern attaining it. `None` for fewer
/// than two vectors.
pub fn min_multi_term_norm(
    vectors: &[Vector],
    spec: &NormSpec,
    cap: usize,
) -> Result<Option<(f64, SignPattern)>> {
    check_cap("admissibility check", vectors.len(), cap)?;
    let Some(dim) = common_dim(vectors)? else {
        return Ok(None);
    };
    spec.check_dim(dim)?;
    if vectors.len() < 2 {
        return Ok(None);
    }
    let coords: Vec<&[f64]> = vectors.iter().map(|v| v.coords()).collect();
    let zero = vec![0.0; dim];
    let mut best: Option<(f64, Vec<i8>)> = None;
    let _ = walk_combinations(&zero, &coords, &TERNARY, &mut |pattern, sum| {
        if pattern.iter().filter(|&&c| c != 0).count() >= 2 {
            let n = spec.norm_of(sum);
            if best.as_ref().is_none_or(|(b, _)| n < *b) {
                best = Some((n, pattern.to_vec()));
            }
        }
        ControlFlow::Continue(())
    });
    Ok(best.map(|(n, p)| (n, SignPattern(p))))
}

/// All `2^k` signed sums of the given vectors, paired with their sign
/// patterns. Patterns are ordered lexicographically with `+1` before `-1`.
/// The empty list yields the single point `0` of dimension `dim_hint`.
pub fn pi_points(vectors: &[Vector], dim_hint: usize) -> Result<Vec<(Vector, SignPattern)>> {
    check_cap("signed-sum enumeration", vectors.len(), PI_CAP)?;
    let dim = common_dim(vectors)?.unwrap_or(dim_hint.max(1));
    let coords: Vec<&[f64]> = vectors.iter().map(|v| v.coords()).collect();
    let zero = vec![0.0; dim];
    let mut out = Vec::with_capacity(1 << vectors.len());
    let _ = walk_combinations(&zero, &coords, &BINARY, &mut |pattern, sum| {
        out.push((Vector::from_raw(sum.to_vec()), SignPattern(pattern.to_vec())));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Π of an admissible set.
pub fn pi_set(set: &AdmissibleSet, dim_hint: usize) -> Result<Vec<(Vector, SignPattern)>> {
    pi_points(&set.values(), dim_hint)
}

/// Largest norm over Π of the set; zero for the empty set.
pub fn radius(set: &AdmissibleSet, spec: &NormSpec) -> Result<f64> {
    check_cap("signed-sum enumeration", set.len(), PI_CAP)?;
    let values = set.values();
    let Some(dim) = common_dim(&values)? else {
        return Ok(0.0);
    };
    spec.check_dim(dim)?;
    let coords: Vec<&[f64]> = values.iter().map(|v| v.coords()).collect();
    let zero = vec![0.0; dim];
    let mut best = 0.0f64;
    let _ = walk_combinations(&zero, &coords, &BINARY, &mut |_, sum| {
        best = best.max(spec.norm_of(sum));
        ControlFlow::Continue(())
    });
    Ok(best)
}

/// Inserts `v` (input number `index`) into an admissible set.
///
/// If some combination `v + Σ ε_i a_i` with at least one nonzero `ε_i` has
/// norm `<= 1 + tol`, the combination with the most nonzero coefficients is
/// collapsed into a single atom (ties go to the lexicographically smallest
/// `ε` with `-1 < 0 < +1`). Otherwise `v` becomes a new atom.
///
/// In the plane a third atom is impossible. If rounding ever makes a
/// two-atom planar set look extendable, the minimum-norm combination is
/// collapsed anyway and the overshoot is reported as a [`Degeneracy`].
pub fn insert(
    set: &AdmissibleSet,
    v: &Vector,
    index: usize,
    spec: &NormSpec,
    tol: f64,
) -> Result<Insertion> {
    spec.check_dim(v.dim())?;
    if let Some(d) = set.atoms.first().map(|a| a.value.dim()) {
        if d != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.dim(),
            });
        }
    }
    let norm = spec.norm_of(v.coords());
    if norm > 1.0 + tol {
        return Err(Error::InputTooLong { index, norm, tol });
    }
    if let Some(last) = set.last_index() {
        if index <= last {
            return Err(Error::IndexOrder { index, last });
        }
    }
    check_cap("admissible set insertion", set.len(), ADMISSIBLE_CAP)?;

    let coords: Vec<&[f64]> = set.atoms.iter().map(|a| a.value.coords()).collect();
    // (nonzero count, pattern, norm, sum) of the selected collapse.
    let mut collapse: Option<(usize, Vec<i8>, Vec<f64>)> = None;
    // Minimum-norm nontrivial combination, for the degenerate fallback.
    let mut closest: Option<(f64, Vec<i8>, Vec<f64>)> = None;
    let _ = walk_combinations(v.coords(), &coords, &TERNARY, &mut |pattern, sum| {
        let nonzero = pattern.iter().filter(|&&c| c != 0).count();
        if nonzero == 0 {
            return ControlFlow::Continue(());
        }
        let n = spec.norm_of(sum);
        if n <= 1.0 + tol && collapse.as_ref().is_none_or(|(best, _, _)| nonzero > *best) {
            collapse = Some((nonzero, pattern.to_vec(), sum.to_vec()));
        }
        if closest.as_ref().is_none_or(|(best, _, _)| n < *best) {
            closest = Some((n, pattern.to_vec(), sum.to_vec()));
        }
        ControlFlow::Continue(())
    });

    if let Some((_, pattern, sum)) = collapse {
        return Ok(Insertion {
            set: collapsed(set, &pattern, sum, index),
            case: InsertCase::Collapsed,
            pattern: Some(SignPattern(pattern)),
            warning: None,
        });
    }

    if v.dim() == 2 && set.len() >= 2 {
        let (n, pattern, sum) = closest.expect("non-empty set has nontrivial patterns");
        return Ok(Insertion {
            set: collapsed(set, &pattern, sum, index),
            case: InsertCase::Collapsed,
            pattern: Some(SignPattern(pattern)),
            warning: Some(Degeneracy {
                index,
                excess: n - 1.0,
            }),
        });
    }

    let mut atoms = set.atoms.clone();
    atoms.push(Atom {
        value: v.clone(),
        provenance: vec![(index, Sign::Plus)],
    });
    Ok(Insertion {
        set: AdmissibleSet { atoms },
        case: InsertCase::Extended,
        pattern: None,
        warning: None,
    })
}

/// Replaces the atoms selected by `pattern` (and the new input) by one atom
/// with value `sum`. The merged atom takes the position of the first
/// selected atom; unselected atoms keep their order.
fn collapsed(set: &AdmissibleSet, pattern: &[i8], sum: Vec<f64>, index: usize) -> AdmissibleSet {
    let mut provenance = vec![(index, Sign::Plus)];
    for (atom, &c) in set.atoms.iter().zip(pattern) {
        if let Some(s) = Sign::from_coefficient(c) {
            provenance.extend(atom.provenance.iter().map(|&(i, p)| (i, p.times(s))));
        }
    }
    provenance.sort_by_key(|&(i, _)| i);
    let merged = Atom {
        value: Vector::from_raw(sum),
        provenance,
    };

    let mut atoms = Vec::with_capacity(set.atoms.len() + 1);
    let mut merged = Some(merged);
    for (atom, &c) in set.atoms.iter().zip(pattern) {
        if c == 0 {
            atoms.push(atom.clone());
        } else if let Some(m) = merged.take() {
            atoms.push(m);
        }
    }
    atoms.extend(merged);
    AdmissibleSet { atoms }
}
