use guesswork::designs::design_for;
use guesswork::oracle::{
    brute_force_delta, brute_force_optimal_set, check_optimal_count_sweep, check_theorem2,
    random_distribution,
};
use guesswork::rational::{int, ratio};
use guesswork::scan::{ball_extrema, example_optimal, scan_simplex};
use guesswork::{
    bound_certificate, canonical_optimal, kendall_tau, mismatch_cost, optimal_set,
    parse_distribution, total_variation, verify_design, Distribution, Rational,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn d(text: &str) -> Distribution {
    parse_distribution(text).unwrap()
}

#[test]
fn optimal_counts_match_enumeration() {
    for n in 2..=4 {
        let r = check_optimal_count_sweep(n, 10).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
    }
}

#[test]
fn seeded_reports_are_reproducible() {
    let a = check_theorem2(6, 200, 42).unwrap();
    let b = check_theorem2(6, 200, 42).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn example_family_agrees_with_brute_force() {
    for n in 2..=7 {
        let eps = ratio(1, n as i64);
        for gamma in [ratio(1, 3), ratio(1, 2), ratio(9, 10)] {
            let e = example_optimal(n, &eps, &gamma).unwrap();
            assert_eq!(brute_force_delta(&e.p, &e.q).unwrap(), e.delta);
            assert_eq!(total_variation(&e.p, &e.q).unwrap(), eps);
            assert!(e.q.probs().windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn certificates_hold_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 2..=12 {
        for _ in 0..40 {
            let p = random_distribution(&mut rng, n, 100);
            let q = random_distribution(&mut rng, n, 100);
            let cert = bound_certificate(&p, &q).unwrap();
            cert.check().unwrap();
            assert!(cert.delta <= cert.bound);
            assert!(verify_design(&design_for(n).unwrap()).is_valid());
        }
    }
}

#[test]
fn certificate_on_worst_case_ordering_is_tight_per_group() {
    let e = example_optimal(6, &ratio(1, 6), &ratio(1, 2)).unwrap();
    let cert = bound_certificate(&e.p, &e.q).unwrap();
    cert.check().unwrap();
    assert!(cert.worst_case_ordering);
    assert_eq!(cert.delta, cert.total);
    assert!(cert.groups.iter().all(|g| g.sum <= cert.lemma_bound_each));
}

#[test]
fn scan_is_monotone_in_epsilon() {
    let small = scan_simplex(12, &ratio(1, 10), 60).unwrap();
    let large = scan_simplex(12, &ratio(1, 5), 60).unwrap();
    for (a, b) in small.cells.iter().zip(&large.cells) {
        assert_eq!(a.counts, b.counts);
        assert!(a.max_delta <= b.max_delta, "{:?}", a.counts);
        assert!(a.max_kendall <= b.max_kendall, "{:?}", a.counts);
    }
}

#[test]
fn scan_is_symmetric_under_relabeling() {
    let grid = scan_simplex(15, &ratio(1, 5), 60).unwrap();
    let find = |counts: [u64; 3]| grid.cells.iter().find(|c| c.counts == counts).unwrap();
    for cell in &grid.cells {
        let [a, b, c] = cell.counts;
        for perm in [[b, a, c], [c, b, a], [a, c, b], [b, c, a], [c, a, b]] {
            let other = find(perm);
            assert_eq!(cell.max_delta, other.max_delta, "{:?} vs {perm:?}", cell.counts);
            assert_eq!(cell.max_kendall, other.max_kendall, "{:?} vs {perm:?}", cell.counts);
        }
    }
}

#[test]
fn scan_respects_the_bound_and_plateau_caps() {
    let eps = ratio(1, 5);
    let grid = scan_simplex(20, &eps, 100).unwrap();
    for cell in &grid.cells {
        assert!(cell.max_delta <= int(4) * &eps);
        let cap = int(cell.max_kendall as i64 + 1) * &eps;
        if cell.max_kendall > 0 {
            assert!(cell.max_delta <= cap, "{:?}", cell.counts);
        }
    }
    let mut csv = Vec::new();
    grid.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 231);
    assert!(text.starts_with("p1,p2,p3,max_delta,max_kendall\n0,0,1,"));
}

#[test]
fn ball_maximizer_lies_in_the_ball() {
    let eps = ratio(1, 5);
    for p in ["[1,0,0]", "[0.5,0.3,0.2]", "[0.4,0.4,0.2]"] {
        let p = d(p);
        let e = ball_extrema(&p, &eps, 200).unwrap();
        assert!(total_variation(&p, &e.argmax_q).unwrap() <= eps);
        assert_eq!(mismatch_cost(&p, &e.argmax_q).unwrap(), e.max_delta);
    }
}

#[test]
fn point_mass_scan_value() {
    let e = ball_extrema(&d("[1,0,0]"), &ratio(1, 5), 400).unwrap();
    // q_1 >= 4/5 inside the ball, so symbol 1 is never overtaken
    assert_eq!(e.max_delta, int(0));
}

fn dist(n: usize) -> impl Strategy<Value = Distribution> {
    prop::collection::vec(0u64..20, n).prop_filter_map("all zero", |w| {
        let total: u64 = w.iter().sum();
        (total > 0).then(|| Distribution::from_counts(&w, total).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_enumeration(
        (p, q) in (2usize..=5).prop_flat_map(|n| (dist(n), dist(n)))
    ) {
        prop_assert_eq!(mismatch_cost(&p, &q).unwrap(), brute_force_delta(&p, &q).unwrap());
    }

    #[test]
    fn optimal_set_matches_enumeration(p in (1usize..=5).prop_flat_map(dist)) {
        let fast: std::collections::BTreeSet<_> = optimal_set(&p, 1000).unwrap().iter().collect();
        prop_assert_eq!(fast, brute_force_optimal_set(&p).unwrap());
    }

    #[test]
    fn bound_holds(
        (p, q) in (2usize..=9).prop_flat_map(|n| (dist(n), dist(n)))
    ) {
        let tv = total_variation(&p, &q).unwrap();
        let bound = Rational::from_integer((2 * (p.len() as i64 - 1)).into()) * tv;
        prop_assert!(mismatch_cost(&p, &q).unwrap() <= bound);
    }

    #[test]
    fn kendall_of_canonical_is_zero_on_self(p in (1usize..=8).prop_flat_map(dist)) {
        let g = canonical_optimal(&p);
        prop_assert_eq!(kendall_tau(&g, &g).unwrap(), 0);
    }
}
