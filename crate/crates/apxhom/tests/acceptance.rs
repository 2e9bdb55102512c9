//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured runtime and failing loudly otherwise.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::cmp::Ordering;
use std::time::Instant;

use num::{BigInt, BigRational, BigUint};

use apxhom::bounds;
use apxhom::fuzz::{self, Checker, FuzzConfig};
use apxhom::group::GroupSpec;
use apxhom::lemmas;
use apxhom::maps::{binary_embedding, carry_defect, centered_unwrap};
use apxhom::primes;
use apxhom::search;

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pass(criterion: u32, start: Instant, budget_secs: f64, what: &str) {
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < budget_secs,
        "criterion {criterion} exceeded its {budget_secs}s budget: {elapsed:.2}s"
    );
    println!("ACCEPTANCE {criterion:>2}: PASS ({elapsed:>7.2}s) — {what}");
}

#[test]
fn acceptance_01_binary_embedding_counts() {
    let start = Instant::now();
    for n in 1..=10u32 {
        let p = primes::next_prime(1u64 << n);
        let f = binary_embedding(n, p).unwrap();
        let rep = f.agreement_probability();
        assert_eq!(
            rep.good_pairs,
            BigUint::from(3u64.pow(n)),
            "good pairs at n = {n}, p = {p}"
        );
        assert_eq!(
            rep.probability,
            ratio(3u64.pow(n), 4u64.pow(n)),
            "probability at n = {n}"
        );
    }
    pass(
        1,
        start,
        10.0,
        "binary embedding has exactly 3^n good pairs for n = 1..10",
    );
}

#[test]
fn acceptance_02_carry_identity_exhaustive() {
    let start = Instant::now();
    for n in 1..=8u32 {
        let p = primes::next_prime(1u64 << n);
        let f = binary_embedding(n, p).unwrap();
        let dom = f.domain().clone();
        let cod = f.codomain().clone();
        for x in dom.elements().unwrap() {
            for y in dom.elements().unwrap() {
                let defect = carry_defect(&f, &x, &y).unwrap();
                // closed form: sum of 2^i x_i y_i (1-based i), reduced mod p
                let expected: i64 = x
                    .coords()
                    .iter()
                    .zip(y.coords())
                    .enumerate()
                    .map(|(i, (&xi, &yi))| (1i64 << (i + 1)) * xi * yi)
                    .sum();
                assert_eq!(defect, cod.element(vec![expected]).unwrap());
                let disjoint = x
                    .coords()
                    .iter()
                    .zip(y.coords())
                    .all(|(&xi, &yi)| xi * yi == 0);
                assert_eq!(defect == cod.identity(), disjoint);
            }
        }
    }
    pass(
        2,
        start,
        30.0,
        "carry defect equals sum(2^i x_i y_i) mod p and vanishes iff supports are disjoint, n = 1..8",
    );
}

#[test]
fn acceptance_03_centered_unwrapping_counts() {
    let start = Instant::now();
    // independent O(p^2) oracle on raw integers
    fn oracle_good_pairs(p: u64, q: u64) -> u64 {
        let k = ((p - 1) / 2) as i64;
        let lift = |x: i64| if x <= k { x } else { x - p as i64 };
        let mut good = 0;
        for x in 0..p as i64 {
            for y in 0..p as i64 {
                let fx = lift(x).rem_euclid(q as i64);
                let fy = lift(y).rem_euclid(q as i64);
                let fxy = lift((x + y) % p as i64).rem_euclid(q as i64);
                if (fx + fy) % q as i64 == fxy {
                    good += 1;
                }
            }
        }
        good
    }

    for p in primes::primes_up_to(101) {
        if p == 2 {
            continue;
        }
        let q = primes::next_prime(p);
        let k = (p - 1) / 2;
        let expected = 3 * k * k + 3 * k + 1;
        let rep = centered_unwrap(p, q).unwrap().agreement_probability();
        assert_eq!(rep.good_pairs, BigUint::from(expected), "p = {p}, q = {q}");
        assert_eq!(oracle_good_pairs(p, q), expected, "oracle at p = {p}");
        assert!(rep.probability > ratio(3, 4), "p = {p}");
    }
    pass(
        3,
        start,
        5.0,
        "centered unwrapping has exactly 3k^2+3k+1 good pairs for odd primes p = 2k+1 <= 101",
    );
}

#[test]
fn acceptance_04_counterexample_family() {
    let start = Instant::now();
    for d in 0..=6u32 {
        let stats = lemmas::counterexample_family(d).unwrap();
        let pow2 = 1u64 << d;
        let pow4 = pow2 * pow2;
        assert_eq!(stats.size_a, pow4 + pow2, "|A| at d = {d}");
        assert_eq!(stats.size_2a, 2 * pow2, "|2.A| at d = {d}");
        assert_eq!(stats.size_ab, 2 * pow4, "|A+B| at d = {d}");
        assert_eq!(stats.size_2a2b, pow4 + pow2, "|2.A+2.B| at d = {d}");
        assert!(stats.closed_forms_match);
        assert!(
            stats.ratio_first <= BigRational::from(BigInt::from(2)),
            "doubling ratio at d = {d}"
        );
        assert!(
            stats.ratio_second >= BigRational::new(BigInt::from(pow2), BigInt::from(2)),
            "dilated ratio at d = {d}"
        );
    }
    pass(
        4,
        start,
        30.0,
        "the (Z/4Z)^d x Z family matches its closed forms for d = 0..6, with ratio_1 <= 2 and ratio_2 >= 2^(d-1)",
    );
}

#[test]
fn acceptance_05_prime_constant_minimization() {
    let start = Instant::now();
    let (p, c) = bounds::minimize_c_over_primes(128).unwrap();
    assert_eq!(p, 17);
    assert_eq!(c.base(), 17);
    assert_eq!(*c.coeff(), BigRational::new(BigInt::from(1), BigInt::from(79)));

    // the comparison chain 2^(-1/11) < 17^(-1/79) < 2^(-1/20), by integer
    // cross-powering: x^(-1/a) < y^(-1/b) iff y^a < x^b
    let two = BigRational::from(BigInt::from(2));
    let seventeen = BigRational::from(BigInt::from(17));
    assert_eq!(
        bounds::cmp_rational_powers(&seventeen, 11, &two, 79),
        Ordering::Less,
        "17^11 < 2^79"
    );
    assert_eq!(
        bounds::cmp_rational_powers(&two, 79, &seventeen, 20),
        Ordering::Less,
        "2^79 < 17^20"
    );
    pass(
        5,
        start,
        1.0,
        "c is minimized over primes <= 128 at 17 with value log2(17)/79; comparison chain verified exactly",
    );
}

#[test]
fn acceptance_06_graph_growth_suite() {
    let start = Instant::now();
    let cfg = FuzzConfig::for_checker(Checker::GraphGrowth);
    assert_eq!(cfg.trials, 10_000);
    assert_eq!(cfg.max_group_order, 64);
    assert_eq!(cfg.max_codomain_order, 128);
    let records = fuzz::run_suite(&cfg);
    let violations = fuzz::violation_count(&records);
    assert_eq!(violations, 0, "graph-growth violations found");
    pass(
        6,
        start,
        120.0,
        "10^4 randomized graph-growth instances: growth bound and quadruple bound never violated",
    );
}

#[test]
fn acceptance_07_bukh_suite() {
    let start = Instant::now();
    let cfg = FuzzConfig::for_checker(Checker::Bukh);
    assert_eq!(cfg.trials, 10_000);
    let records = fuzz::run_suite(&cfg);
    let violations = fuzz::violation_count(&records);
    assert_eq!(violations, 0, "bukh violations found");
    pass(
        7,
        start,
        300.0,
        "10^4 randomized dilated-sumset instances with Y = A, r in 2..9: zero violations",
    );
}

#[test]
fn acceptance_08_bsg_certification() {
    let start = Instant::now();
    let cfg = FuzzConfig::for_checker(Checker::Bsg);
    assert_eq!(cfg.trials, 500);
    let records = fuzz::run_suite(&cfg);
    for r in &records {
        assert!(
            r.ok,
            "BSG certification failed on trial {}: {}",
            r.index, r.detail
        );
        // an internal-consistency abort would surface as an error detail
        assert!(r.detail.get("error").is_none(), "abort on trial {}", r.index);
    }
    pass(
        8,
        start,
        600.0,
        "500-set BSG corpus: all five exact certificates hold, zero internal-consistency aborts",
    );
}

#[test]
fn acceptance_09_petridis_conclusion() {
    let start = Instant::now();
    let cfg = FuzzConfig::for_checker(Checker::Petridis);
    assert_eq!(cfg.trials, 200);
    assert_eq!(cfg.max_set_size, 12);
    let records = fuzz::run_suite(&cfg);
    let violations = fuzz::violation_count(&records);
    assert_eq!(violations, 0, "petridis violations found");
    pass(
        9,
        start,
        300.0,
        "200 exhaustive Petridis minimizers, 100 random C each: the sumset conclusion never fails",
    );
}

#[test]
fn acceptance_10_search_ground_truth() {
    let start = Instant::now();
    let z2 = GroupSpec::cyclic(2).unwrap();
    let z3 = GroupSpec::cyclic(3).unwrap();
    let res = search::exhaustive_max_agreement(&z2, &z3).unwrap();
    assert_eq!(res.best_probability, ratio(3, 4));

    // independent oracle: all 120 injections (Z/2Z)^2 -> Z/5Z by raw
    // modular arithmetic (domain addition is XOR on ranks)
    let mut oracle_best = 0u32;
    let mut candidates = 0u32;
    let values: Vec<u32> = (0..5).collect();
    for &a in &values {
        for &b in &values {
            for &c in &values {
                for &d in &values {
                    let f = [a, b, c, d];
                    if f[0] == f[1] || f[0] == f[2] || f[0] == f[3] || f[1] == f[2]
                        || f[1] == f[3] || f[2] == f[3]
                    {
                        continue;
                    }
                    candidates += 1;
                    let mut good = 0u32;
                    for x in 0..4usize {
                        for y in 0..4usize {
                            if f[x ^ y] == (f[x] + f[y]) % 5 {
                                good += 1;
                            }
                        }
                    }
                    oracle_best = oracle_best.max(good);
                }
            }
        }
    }
    assert_eq!(candidates, 120);

    let klein = "[2,2]".parse::<GroupSpec>().unwrap();
    let z5 = GroupSpec::cyclic(5).unwrap();
    let res = search::exhaustive_max_agreement(&klein, &z5).unwrap();
    assert_eq!(res.best_good_pairs, oracle_best as u64);

    let embedding = binary_embedding(2, 5).unwrap().agreement_probability();
    assert_eq!(embedding.probability, ratio(9, 16));
    assert!(embedding.probability <= res.best_probability);
    pass(
        10,
        start,
        1.0,
        "exhaustive optima match ground truth: 3/4 on [2]->[3], oracle value on [2,2]->[5], embedding not above optimum",
    );
}

#[test]
fn acceptance_11_bound_rows_are_context_only() {
    let start = Instant::now();
    // The asymptotic statements carry unspecified constants and are not
    // desk-verifiable; the bound table therefore reports base^alpha next
    // to observations without asserting dominance.
    let g = "[2,2]".parse::<GroupSpec>().unwrap();
    let h = GroupSpec::cyclic(5).unwrap();
    let observed = search::exhaustive_max_agreement(&g, &h)
        .unwrap()
        .best_probability;
    let table =
        search::bound_comparison_table(&g, &h, &[1, 2, 3, 4], Some(observed.clone())).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert_eq!(table.observed_best.as_ref(), Some(&observed));
    assert!(!table.note.is_empty(), "caveat annotation must be present");
    let json = table.to_json();
    assert!(json["note"].as_str().unwrap().contains("constant"));
    pass(
        11,
        start,
        5.0,
        "asymptotic conclusions are reported as context rows with an explicit constant caveat, never asserted",
    );
}
