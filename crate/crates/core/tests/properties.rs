mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{contains, plain_minmax, planar_norms, random_sequence, signed_sums};
use signseq::admissible::{insert, is_admissible, AdmissibleSet};
use signseq::adversary::{build_lower_bound_sequence, verify_adversary, AdversaryConfig};
use signseq::highdim::{euclidean_family, maxnorm_family, AdmissibilityCheck};
use signseq::norms::{random_unit_ball_vector, rotate};
use signseq::oracle::{all_patterns_exceed, brute_force_minmax, brute_force_minmax_parallel, ORACLE_CAP};
use signseq::signer::{greedy_sign, sign_sequence, sign_sequence_traced, verify_sign_result};
use signseq::{NormSpec, Vector, DEFAULT_TOL};

const TOL: f64 = DEFAULT_TOL;

fn square() -> NormSpec {
    NormSpec::polygon_from_pairs(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]).unwrap()
}

fn diamond() -> NormSpec {
    NormSpec::polygon_from_pairs(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]).unwrap()
}

fn hexagon() -> NormSpec {
    let pts: Vec<[f64; 2]> = (0..6)
        .map(|k| {
            let a = k as f64 * std::f64::consts::PI / 3.0 + 0.2;
            [a.cos(), 0.7 * a.sin()]
        })
        .collect();
    // Exact symmetry.
    let sym: Vec<[f64; 2]> = pts[..3].iter().chain(pts[..3].iter()).enumerate()
        .map(|(i, p)| if i < 3 { *p } else { [-p[0], -p[1]] })
        .collect();
    NormSpec::polygon_from_pairs(&sym).unwrap()
}

fn all_kinds() -> Vec<NormSpec> {
    vec![NormSpec::Euclidean, NormSpec::L1, NormSpec::Linf, square(), hexagon()]
}

fn planar() -> impl Strategy<Value = Vector> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(x, y)| Vector::from([x, y]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn triangle_inequality(u in planar(), v in planar()) {
        for spec in all_kinds() {
            let lhs = spec.norm(&(&u + &v)).unwrap();
            let rhs = spec.norm(&u).unwrap() + spec.norm(&v).unwrap();
            prop_assert!(lhs <= rhs + 1e-9);
        }
    }

    #[test]
    fn homogeneity_and_symmetry(v in planar(), t in -10.0f64..10.0) {
        for spec in all_kinds() {
            let n = spec.norm(&v).unwrap();
            let scaled = spec.norm(&v.scale(t)).unwrap();
            prop_assert!((scaled - t.abs() * n).abs() <= 1e-12 * (1.0 + t.abs() * n));
            let neg = spec.norm(&-&v).unwrap();
            match spec {
                NormSpec::Polygon(_) => prop_assert!((neg - n).abs() <= 1e-12 * (1.0 + n)),
                _ => prop_assert_eq!(neg, n),
            }
            prop_assert!(n >= 0.0);
        }
    }

    #[test]
    fn polygon_gauges_match_l_norms(v in planar()) {
        let sq = square().norm(&v).unwrap();
        let inf = NormSpec::Linf.norm(&v).unwrap();
        prop_assert!((sq - inf).abs() <= 1e-12 * (1.0 + inf));
        let di = diamond().norm(&v).unwrap();
        let l1 = NormSpec::L1.norm(&v).unwrap();
        prop_assert!((di - l1).abs() <= 1e-12 * (1.0 + l1));
    }

    #[test]
    fn rotation_preserves_length(v in planar(), a in -10.0f64..10.0) {
        let r = rotate(&v, a).unwrap();
        prop_assert!((r.euclidean_norm() - v.euclidean_norm()).abs() <= 1e-12 * (1.0 + v.euclidean_norm()));
    }
}

#[test]
fn norm_is_zero_only_at_origin() {
    for spec in all_kinds() {
        assert_eq!(spec.norm(&Vector::zeros(2)).unwrap(), 0.0);
        assert!(spec.norm(&Vector::from([1e-9, 0.0])).unwrap() > 0.0);
    }
}

#[test]
fn insertion_keeps_every_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for spec in planar_norms(5, &mut rng) {
        for _ in 0..40 {
            let n = rng.gen_range(1..=12);
            let inputs = random_sequence(&spec, n, &mut rng);
            let mut set = AdmissibleSet::new();
            for (i, v) in inputs.iter().enumerate() {
                let ins = insert(&set, v, i, &spec, TOL).unwrap();
                assert!(ins.warning.is_none());
                let before = signed_sums(&set.values(), 2);
                let plus: Vec<Vector> = before.iter().map(|p| p + v).collect();
                let minus: Vec<Vector> = before.iter().map(|p| p - v).collect();
                for p in signed_sums(&ins.set.values(), 2) {
                    assert!(contains(&plus, &p, 1e-9) || contains(&minus, &p, 1e-9));
                }
                assert!(ins.set.len() <= 2);
                let violations = ins.set.check_invariants(&inputs, i + 1, &spec, TOL);
                assert!(violations.is_empty(), "{violations:?}");
                set = ins.set;
            }
        }
    }
}

#[test]
fn euclidean_two_atom_sets_satisfy_parallelogram_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let spec = NormSpec::Euclidean;
    let mut seen = 0;
    for _ in 0..200 {
        let inputs = random_sequence(&spec, 50, &mut rng);
        let mut set = AdmissibleSet::new();
        for (i, v) in inputs.iter().enumerate() {
            set = insert(&set, v, i, &spec, TOL).unwrap().set;
            if let [a, b] = set.atoms() {
                seen += 1;
                let (a, b) = (&a.value, &b.value);
                let s = (a + b).euclidean_norm();
                let d = (a - b).euclidean_norm();
                let rhs = 2.0 * a.dot(a) + 2.0 * b.dot(b) - d * d;
                assert!((s * s - rhs).abs() < 1e-9);
                assert!(s < 3f64.sqrt() * (1.0 + TOL));
            }
        }
    }
    assert!(seen > 100);
}

#[test]
fn sign_flip_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for spec in planar_norms(3, &mut rng) {
        for _ in 0..30 {
            let inputs = random_sequence(&spec, 60, &mut rng);
            let negated: Vec<Vector> = inputs.iter().map(|v| -v).collect();
            let a = sign_sequence(&inputs, &spec, TOL).unwrap();
            let b = sign_sequence(&negated, &spec, TOL).unwrap();
            for (x, y) in a.partial_norms.iter().zip(&b.partial_norms) {
                assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
            }
        }
    }
}

#[test]
fn results_always_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in planar_norms(3, &mut rng) {
        for _ in 0..20 {
            let inputs = random_sequence(&spec, 100, &mut rng);
            let r = sign_sequence(&inputs, &spec, TOL).unwrap();
            assert!(verify_sign_result(&inputs, &r, &spec).passed());
            let g = greedy_sign(&inputs, &spec).unwrap();
            assert!(verify_sign_result(&inputs, &g, &spec).passed());
        }
    }
}

#[test]
fn trace_replays_on_fuzzed_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    for spec in planar_norms(2, &mut rng) {
        let inputs = random_sequence(&spec, 40, &mut rng);
        let (_, trace) = sign_sequence_traced(&inputs, &spec, TOL).unwrap();
        assert!(trace.replays(&spec, TOL));
    }
}

#[test]
fn oracle_threshold_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for spec in planar_norms(2, &mut rng) {
        for _ in 0..20 {
            let n = rng.gen_range(1..=10);
            let inputs = random_sequence(&spec, n, &mut rng);
            let value = brute_force_minmax(&inputs, &spec, ORACLE_CAP).unwrap().value;
            for t in [0.5 * value, 0.999 * value, value, 1.001 * value, 1.5 * value + 0.01] {
                let exceed = all_patterns_exceed(&inputs, &spec, t, ORACLE_CAP).unwrap();
                assert_eq!(exceed, t <= value, "t = {t}, value = {value}");
            }
        }
    }
}

#[test]
fn oracle_witness_attains_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let spec = NormSpec::Euclidean;
    for _ in 0..30 {
        let inputs = random_sequence(&spec, 12, &mut rng);
        let r = brute_force_minmax(&inputs, &spec, ORACLE_CAP).unwrap();
        let mut sum = Vector::zeros(2);
        let mut peak = 0.0f64;
        for (v, s) in inputs.iter().zip(&r.witness_signs) {
            sum = &sum + &v.scale(s.value());
            peak = peak.max(sum.euclidean_norm());
        }
        assert!((peak - r.value).abs() <= 1e-12);
        let par = brute_force_minmax_parallel(&inputs, &spec, ORACLE_CAP).unwrap();
        assert_eq!(par.value, r.value);
    }
}

#[test]
fn oracle_value_is_monotone_in_prefix_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for spec in planar_norms(1, &mut rng) {
        let inputs = random_sequence(&spec, 11, &mut rng);
        let mut prev = 0.0;
        for n in 1..=inputs.len() {
            let value = brute_force_minmax(&inputs[..n], &spec, ORACLE_CAP).unwrap().value;
            assert!(value >= prev);
            assert_eq!(value, plain_minmax(&inputs[..n], &spec));
            prev = value;
        }
    }
}

#[test]
fn adversary_family() {
    for delta in [0.05, 0.1, 0.15, 0.2, 0.3] {
        let seq = build_lower_bound_sequence(AdversaryConfig { delta }).unwrap();
        assert!(seq.check_invariants().is_empty());
        assert!((seq.vectors.len() as f64) < 3.0 + (2f64.sqrt() - 1.0) / delta);
        assert!(seq.vectors.iter().all(|v| v.euclidean_norm() <= 1.0 + 1e-12));
        assert!(verify_adversary(&seq).unwrap());
    }
}

#[test]
fn adversary_defeats_greedy_and_trapping() {
    for delta in [0.05, 0.1, 0.2] {
        let seq = build_lower_bound_sequence(AdversaryConfig { delta }).unwrap();
        let threshold = 3f64.sqrt() - delta - 1e-9;
        let g = greedy_sign(&seq.vectors, &NormSpec::Euclidean).unwrap();
        assert!(g.max_partial_norm >= threshold);
        let t = sign_sequence(&seq.vectors, &NormSpec::Euclidean, TOL).unwrap();
        assert!(t.max_partial_norm >= threshold);
        assert!(t.max_partial_norm <= t.certified_bound.unwrap() + 1e-9);
    }
}

#[test]
fn highdim_families_cross_checks() {
    for d in 2..=10 {
        let fam = euclidean_family(d).unwrap();
        assert_eq!(fam.verify(TOL).unwrap(), AdmissibilityCheck::Admissible);
        if d >= 3 {
            // Two or more nonzero coefficients give squared norm at least 0.64 s.
            let margin = fam.admissibility_margin().unwrap().unwrap();
            assert!(margin * margin >= 0.64 * 2.0 - 1e-12);
            assert!(margin > 1.0 + TOL);
        }
        let fam = maxnorm_family(d).unwrap();
        assert_eq!(fam.verify(TOL).unwrap(), AdmissibilityCheck::Admissible);
        for v in &fam.vectors {
            assert!(NormSpec::Linf.norm(v).unwrap() <= 1.0);
        }
    }
}

#[test]
fn higher_dimensional_runs_report_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for d in [3, 5] {
        let inputs: Vec<Vector> = (0..60)
            .map(|_| random_unit_ball_vector(&NormSpec::Euclidean, d, &mut rng).unwrap())
            .collect();
        let r = sign_sequence(&inputs, &NormSpec::Euclidean, TOL).unwrap();
        assert!(r.certified_bound.is_none());
        let radius = r.final_radius.unwrap();
        let last = *r.partial_norms.last().unwrap();
        assert!(last <= radius + 1e-9);
        assert!(is_admissible(&[], &NormSpec::Euclidean, TOL).unwrap());
    }
}
