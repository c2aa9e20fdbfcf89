//! Exhaustive search over sign patterns.
//!
//! The first sign is fixed to `+1`: negating every sign leaves every
//! partial-sum norm unchanged, so this halves the search without losing
//! optimal patterns.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::admissible::Sign;
use crate::error::{Error, Result};
use crate::norms::{NormSpec, Vector};

/// Default limit on sequence length for exhaustive search.
pub const ORACLE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Minimum over sign patterns of the largest partial-sum norm.
    pub value: f64,
    pub witness_signs: Vec<Sign>,
    pub nodes_explored: u64,
}

fn prepare<'a>(vectors: &'a [Vector], spec: &NormSpec, cap: usize) -> Result<Vec<&'a [f64]>> {
    if vectors.len() > cap {
        return Err(Error::CapExceeded {
            what: "exhaustive sign search",
            size: vectors.len(),
            cap,
        });
    }
    if let Some(first) = vectors.first() {
        spec.check_dim(first.dim())?;
        if let Some(bad) = vectors.iter().find(|v| v.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: bad.dim(),
            });
        }
    }
    Ok(vectors.iter().map(|v| v.coords()).collect())
}

/// Where the best value found so far lives.
trait Incumbent {
    fn get(&self) -> f64;
    /// Offers a complete pattern's value; true if it became the incumbent.
    fn offer(&mut self, value: f64) -> bool;
}

struct Local(f64);

impl Incumbent for Local {
    fn get(&self) -> f64 {
        self.0
    }
    fn offer(&mut self, value: f64) -> bool {
        if value < self.0 {
            self.0 = value;
            true
        } else {
            false
        }
    }
}

/// Nonnegative floats order like their bit patterns, so `fetch_min` on the
/// bits is a lock-free minimum.
struct Shared<'a>(&'a AtomicU64);

impl Incumbent for Shared<'_> {
    fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }
    fn offer(&mut self, value: f64) -> bool {
        let bits = value.to_bits();
        self.0.fetch_min(bits, Ordering::Relaxed) > bits
    }
}

struct Search<'a, I> {
    vectors: &'a [&'a [f64]],
    spec: &'a NormSpec,
    dim: usize,
    sums: Vec<f64>,
    pattern: Vec<Sign>,
    incumbent: I,
    best: Option<(f64, Vec<Sign>)>,
    nodes: u64,
}

impl<'a, I: Incumbent> Search<'a, I> {
    fn new(vectors: &'a [&'a [f64]], spec: &'a NormSpec, incumbent: I) -> Self {
        let dim = vectors.first().map_or(1, |v| v.len());
        Self {
            vectors,
            spec,
            dim,
            sums: vec![0.0; (vectors.len() + 1) * dim],
            pattern: vec![Sign::Plus; vectors.len()],
            incumbent,
            best: None,
            nodes: 0,
        }
    }

    /// Assigns `sign` at `depth` and returns the new prefix norm.
    fn step(&mut self, depth: usize, sign: Sign) -> f64 {
        let d = self.dim;
        self.pattern[depth] = sign;
        let (head, tail) = self.sums.split_at_mut((depth + 1) * d);
        let prev = &head[depth * d..];
        let next = &mut tail[..d];
        let s = sign.value();
        for ((n, p), c) in next.iter_mut().zip(prev).zip(self.vectors[depth]) {
            *n = p + s * c;
        }
        self.spec.norm_of(next)
    }

    fn descend(&mut self, depth: usize, running_max: f64) {
        self.nodes += 1;
        if running_max >= self.incumbent.get() {
            return;
        }
        if depth == self.vectors.len() {
            if self.incumbent.offer(running_max) {
                self.best = Some((running_max, self.pattern.clone()));
            }
            return;
        }
        for sign in [Sign::Plus, Sign::Minus] {
            let n = self.step(depth, sign);
            self.descend(depth + 1, running_max.max(n));
        }
    }

    /// Replays a fixed prefix of signs, returning its running maximum.
    fn seed(&mut self, prefix: &[Sign]) -> f64 {
        prefix
            .iter()
            .enumerate()
            .map(|(depth, &s)| self.step(depth, s))
            .fold(0.0, f64::max)
    }
}

/// Exact minimax value with branch-and-bound pruning: a branch is cut as
/// soon as its running maximum reaches the best complete pattern found.
pub fn brute_force_minmax(vectors: &[Vector], spec: &NormSpec, cap: usize) -> Result<OracleResult> {
    let coords = prepare(vectors, spec, cap)?;
    if coords.is_empty() {
        return Ok(OracleResult {
            value: 0.0,
            witness_signs: Vec::new(),
            nodes_explored: 1,
        });
    }
    let mut search = Search::new(&coords, spec, Local(f64::INFINITY));
    let first = search.step(0, Sign::Plus);
    search.descend(1, first);
    let (value, witness_signs) = search.best.expect("some leaf beats infinity");
    Ok(OracleResult {
        value,
        witness_signs,
        nodes_explored: search.nodes + 1,
    })
}

/// Same value as [`brute_force_minmax`], with the subtrees below the first
/// few signs searched on separate threads that share one incumbent. The
/// witness may differ from the sequential one when several patterns tie.
pub fn brute_force_minmax_parallel(
    vectors: &[Vector],
    spec: &NormSpec,
    cap: usize,
) -> Result<OracleResult> {
    let coords = prepare(vectors, spec, cap)?;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let split = (threads.next_power_of_two().trailing_zeros() as usize + 1).min(4);
    if coords.len() <= split + 1 {
        return brute_force_minmax(vectors, spec, cap);
    }

    let prefixes: Vec<Vec<Sign>> = (0..1usize << split)
        .map(|mask| {
            std::iter::once(Sign::Plus)
                .chain((0..split).map(|b| {
                    if mask >> (split - 1 - b) & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                }))
                .collect()
        })
        .collect();

    let incumbent = AtomicU64::new(f64::INFINITY.to_bits());
    let outcomes: Vec<(Option<(f64, Vec<Sign>)>, u64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = prefixes
            .iter()
            .map(|prefix| {
                let coords = &coords;
                let incumbent = &incumbent;
                scope.spawn(move || {
                    let mut search = Search::new(coords, spec, Shared(incumbent));
                    let running = search.seed(prefix);
                    search.descend(prefix.len(), running);
                    (search.best, search.nodes + prefix.len() as u64)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("oracle worker panicked"))
            .collect()
    });

    let nodes_explored = outcomes.iter().map(|(_, n)| n).sum();
    let (value, witness_signs) = outcomes
        .into_iter()
        .filter_map(|(best, _)| best)
        .fold(None::<(f64, Vec<Sign>)>, |acc, cand| match acc {
            Some(a) if a.0 <= cand.0 => Some(a),
            _ => Some(cand),
        })
        .expect("some worker reaches a leaf");
    Ok(OracleResult {
        value,
        witness_signs,
        nodes_explored,
    })
}

/// True iff every sign pattern has a partial sum of norm `>= threshold`.
/// Searches for an escaping pattern and stops at the first one found.
pub fn all_patterns_exceed(
    vectors: &[Vector],
    spec: &NormSpec,
    threshold: f64,
    cap: usize,
) -> Result<bool> {
    let coords = prepare(vectors, spec, cap)?;
    if coords.is_empty() {
        return Ok(false);
    }
    // An escaping branch never reaches the threshold, so pruning at the
    // threshold is exactly the incumbent rule with the incumbent pinned.
    let mut search = Search::new(&coords, spec, Local(threshold));
    let first = search.step(0, Sign::Plus);
    if first >= threshold {
        return Ok(true);
    }
    Ok(!escapes(&mut search, 1, threshold))
}

fn escapes<I: Incumbent>(search: &mut Search<'_, I>, depth: usize, threshold: f64) -> bool {
    if depth == search.vectors.len() {
        return true;
    }
    for sign in [Sign::Plus, Sign::Minus] {
        if search.step(depth, sign) < threshold && escapes(search, depth + 1, threshold) {
            return true;
        }
    }
    false
}
