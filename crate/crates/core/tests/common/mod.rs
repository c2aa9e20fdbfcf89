#![allow(dead_code)]

use rand::Rng;
use signseq::norms::{random_symmetric_polygon, random_unit_ball_vector};
use signseq::{NormSpec, Vector};

/// Plain 2^n enumeration of min over sign patterns of the max prefix norm.
/// Independent of the library's branch-and-bound search.
pub fn plain_minmax(vectors: &[Vector], spec: &NormSpec) -> f64 {
    let n = vectors.len();
    if n == 0 {
        return 0.0;
    }
    let dim = vectors[0].dim();
    let mut best = f64::INFINITY;
    for mask in 0u64..(1u64 << n) {
        let mut sum = vec![0.0; dim];
        let mut peak = 0.0f64;
        for (i, v) in vectors.iter().enumerate() {
            let s = if mask >> i & 1 == 0 { 1.0 } else { -1.0 };
            for (acc, c) in sum.iter_mut().zip(v.coords()) {
                *acc += s * c;
            }
            peak = peak.max(spec.norm(&Vector::new(sum.clone()).unwrap()).unwrap());
        }
        best = best.min(peak);
    }
    best
}

/// Every signed sum ±v_1 ± ... ± v_k, enumerated directly.
pub fn signed_sums(vectors: &[Vector], dim: usize) -> Vec<Vector> {
    let k = vectors.len();
    (0u64..(1u64 << k))
        .map(|mask| {
            let mut sum = vec![0.0; dim];
            for (i, v) in vectors.iter().enumerate() {
                let s = if mask >> i & 1 == 0 { 1.0 } else { -1.0 };
                for (acc, c) in sum.iter_mut().zip(v.coords()) {
                    *acc += s * c;
                }
            }
            Vector::new(sum).unwrap()
        })
        .collect()
}

pub fn contains(points: &[Vector], p: &Vector, tol: f64) -> bool {
    points.iter().any(|q| q.max_abs_diff(p) <= tol)
}

pub fn random_sequence<R: Rng>(spec: &NormSpec, n: usize, rng: &mut R) -> Vec<Vector> {
    (0..n)
        .map(|_| random_unit_ball_vector(spec, 2, rng).unwrap())
        .collect()
}

/// Euclidean, l1, l∞, and `polygons` random symmetric polygon gauges with
/// 6 to 16 vertices.
pub fn planar_norms<R: Rng>(polygons: usize, rng: &mut R) -> Vec<NormSpec> {
    let mut specs = vec![NormSpec::Euclidean, NormSpec::L1, NormSpec::Linf];
    specs.extend((0..polygons).map(|_| random_symmetric_polygon(rng, 3..=8).unwrap()));
    specs
}
