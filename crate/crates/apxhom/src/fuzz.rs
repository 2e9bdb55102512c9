//! Seeded randomized property suites over the lemma checkers.
//!
//! Trials shard deterministically: trial `i` draws from the ChaCha stream
//! `(seed, i)`, so suites are reproducible at any parallelism and any
//! single trial can be replayed by index. A violating trial's record
//! carries the fully serialized inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::group::GroupSpec;
use crate::lemmas;
use crate::maps::{binary_embedding, centered_unwrap, PointMap};
use crate::primes;
use crate::sets::ElementSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Checker {
    /// Graph sumset-growth lower bound plus the quadruple-count bound.
    GraphGrowth,
    /// Dilated-sumset growth under the difference-set hypothesis.
    Bukh,
    /// Ruzsa triangle inequality.
    Ruzsa,
    /// Exhaustive Petridis minimizer and its sumset conclusion.
    Petridis,
    /// Dilation-image vs kernel-coset counting identity.
    KernelQuotient,
    /// Symmetric BSG extraction certificates.
    Bsg,
}

impl Checker {
    pub fn as_str(self) -> &'static str {
        match self {
            Checker::GraphGrowth => "graph-growth",
            Checker::Bukh => "bukh",
            Checker::Ruzsa => "ruzsa",
            Checker::Petridis => "petridis",
            Checker::KernelQuotient => "kernel-quotient",
            Checker::Bsg => "bsg",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub checker: Checker,
    pub trials: u64,
    pub seed: u64,
    /// Cap on the (domain) group order used by the generators.
    pub max_group_order: u64,
    /// Cap on the codomain order (graph-growth trials only); must be at
    /// least `max_group_order` there so injections exist.
    pub max_codomain_order: u64,
    /// Cap on generated set sizes.
    pub max_set_size: usize,
}

impl FuzzConfig {
    /// Suite defaults per checker.
    pub fn for_checker(checker: Checker) -> FuzzConfig {
        let (trials, max_group_order, max_codomain_order, max_set_size) = match checker {
            Checker::GraphGrowth => (10_000, 64, 128, 64),
            Checker::Bukh => (10_000, 512, 512, 16),
            Checker::Ruzsa => (10_000, 512, 512, 8),
            Checker::Petridis => (200, 256, 256, 12),
            Checker::KernelQuotient => (2_000, 256, 256, 10),
            Checker::Bsg => (500, 64, 64, 24),
        };
        FuzzConfig {
            checker,
            trials,
            seed: 0,
            max_group_order,
            max_codomain_order,
            max_set_size,
        }
    }
}

/// One trial's outcome. `detail` holds summary statistics; when `ok` is
/// false it also holds every input serialized for replay.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub index: u64,
    pub ok: bool,
    pub detail: Value,
}

pub fn violation_count(records: &[TrialRecord]) -> u64 {
    records.iter().filter(|r| !r.ok).count() as u64
}

/// Runs the whole suite, trial-sharded across the rayon pool. The output
/// order and content are independent of the worker count.
pub fn run_suite(cfg: &FuzzConfig) -> Vec<TrialRecord> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect()
}

/// Runs a single trial of the configured checker.
pub fn run_trial(cfg: &FuzzConfig, index: u64) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    match cfg.checker {
        Checker::GraphGrowth => graph_growth_trial(cfg, index, &mut rng),
        Checker::Bukh => bukh_trial(cfg, index, &mut rng),
        Checker::Ruzsa => ruzsa_trial(cfg, index, &mut rng),
        Checker::Petridis => petridis_trial(cfg, index, &mut rng),
        Checker::KernelQuotient => kernel_quotient_trial(cfg, index, &mut rng),
        Checker::Bsg => bsg_trial(cfg, index, &mut rng),
    }
}

fn random_spec(rng: &mut ChaCha8Rng, max_order: u64) -> GroupSpec {
    debug_assert!(max_order >= 2);
    if rng.gen_bool(0.4) {
        return GroupSpec::cyclic(rng.gen_range(2..=max_order)).expect("valid modulus");
    }
    let pool = [2u64, 2, 3, 4, 5, 7, 8, 9, 16];
    let mut moduli = Vec::new();
    let mut order = 1u64;
    for _ in 0..3 {
        let d = pool[rng.gen_range(0..pool.len())];
        if order.saturating_mul(d) > max_order {
            break;
        }
        order *= d;
        moduli.push(d);
        if rng.gen_bool(0.35) {
            break;
        }
    }
    if moduli.is_empty() {
        moduli.push(2);
    }
    GroupSpec::new(moduli).expect("valid moduli")
}

fn random_set(
    rng: &mut ChaCha8Rng,
    spec: &GroupSpec,
    max_size: usize,
    nonempty: bool,
) -> ElementSet {
    let n = spec.small_order().expect("finite spec");
    let size = rng.gen_range(usize::from(nonempty)..=max_size.max(1).min(n as usize));
    let mut s = ElementSet::empty(spec.clone());
    for _ in 0..size {
        let k = rng.gen_range(0..n);
        s.insert(spec.unrank(k).expect("in range")).expect("same spec");
    }
    if nonempty && s.is_empty() {
        s.insert(spec.identity()).expect("same spec");
    }
    s
}

fn random_subset(rng: &mut ChaCha8Rng, of: &ElementSet, nonempty: bool) -> ElementSet {
    let mut s = ElementSet::empty(of.spec().clone());
    let members = of.elements();
    for el in &members {
        if rng.gen_bool(0.5) {
            s.insert(el.clone()).expect("same spec");
        }
    }
    if nonempty && s.is_empty() && !members.is_empty() {
        let pick = rng.gen_range(0..members.len());
        s.insert(members[pick].clone()).expect("same spec");
    }
    s
}

fn random_injection(rng: &mut ChaCha8Rng, g: &GroupSpec, h: &GroupSpec) -> PointMap {
    let n_g = g.small_order().expect("finite") as usize;
    let n_h = h.small_order().expect("finite") as usize;
    let mut pool: Vec<u64> = (0..n_h as u64).collect();
    for i in 0..n_g {
        let j = rng.gen_range(i..n_h);
        pool.swap(i, j);
    }
    let table = pool[..n_g]
        .iter()
        .map(|&v| h.unrank(v).expect("in range"))
        .collect();
    PointMap::from_table(g.clone(), h.clone(), table).expect("valid table")
}

fn graph_growth_trial(cfg: &FuzzConfig, index: u64, rng: &mut ChaCha8Rng) -> TrialRecord {
    let g = random_spec(rng, cfg.max_group_order);
    let n_g = g.small_order().expect("finite");
    let mut h = GroupSpec::cyclic(cfg.max_codomain_order).expect("valid modulus");
    for _ in 0..200 {
        let cand = random_spec(rng, cfg.max_codomain_order);
        if cand.small_order().expect("finite") >= n_g {
            h = cand;
            break;
        }
    }
    let f = random_injection(rng, &g, &h);
    let gamma = f.graph();
    let x = random_subset(rng, &gamma, true);
    let b = random_subset(rng, &gamma, true);
    let r = rng.gen_range(2..=5u64);
    match lemmas::graph_growth_check(&g, &h, &gamma, &x, &b, r) {
        Ok(rep) => {
            let ok = rep.all_hold();
            let mut detail = json!({
                "checker": cfg.checker.as_str(),
                "g": g.to_string(),
                "h": h.to_string(),
                "r": r,
                "x_size": rep.x_size,
                "b_size": rep.b_size,
                "sumset_size": rep.sumset_size,
                "lhs": rep.lhs.to_string(),
                "rhs": rep.rhs.to_string(),
                "quadruple_count": rep.quadruple_count.to_string(),
                "quadruple_bound": rep.quadruple_bound.to_string(),
            });
            if !ok {
                detail["inputs"] = json!({
                    "map": f.to_json(),
                    "gamma": gamma.to_json(),
                    "x": x.to_json(),
                    "b": b.to_json(),
                    "r": r,
                });
            }
            TrialRecord { index, ok, detail }
        }
        Err(e) => error_record(cfg, index, e, json!({"map": f.to_json()})),
    }
}

fn bukh_trial(cfg: &FuzzConfig, index: u64, rng: &mut ChaCha8Rng) -> TrialRecord {
    let spec = random_spec(rng, cfg.max_group_order);
    let a = random_set(rng, &spec, cfg.max_set_size, true);
    let x = random_set(rng, &spec, 8, true);
    let r = rng.gen_range(2..=9u64);
    match lemmas::bukh_check(&a, &x, &a, r) {
        Ok(rep) => {
            let ok = rep.all_hold();
            let mut detail = json!({
                "checker": cfg.checker.as_str(),
                "spec": spec.to_string(),
                "r": r,
                "k_ratio": rep.k_ratio.to_string(),
                "lhs_size": rep.lhs_size,
                "base_size": rep.base_size,
                "partial_chain_size": rep.partial_chain_size,
                "full_chain_size": rep.full_chain_size,
            });
            if !ok {
                detail["inputs"] = json!({"a": a.to_json(), "x": x.to_json(), "r": r});
            }
            TrialRecord { index, ok, detail }
        }
        Err(e) => error_record(cfg, index, e, json!({"a": a.to_json(), "x": x.to_json()})),
    }
}

fn ruzsa_trial(cfg: &FuzzConfig, index: u64, rng: &mut ChaCha8Rng) -> TrialRecord {
    let spec = random_spec(rng, cfg.max_group_order);
    let u = random_set(rng, &spec, cfg.max_set_size, false);
    let v = random_set(rng, &spec, cfg.max_set_size, true);
    let w = random_set(rng, &spec, cfg.max_set_size, false);
    match lemmas::ruzsa_triangle_check(&u, &v, &w) {
        Ok(rep) => {
            let ok = rep.holds;
            let mut detail = json!({
                "checker": cfg.checker.as_str(),
                "spec": spec.to_string(),
                "v_size": rep.v_size,
                "uw_size": rep.uw_size,
                "uv_size": rep.uv_size,
                "wv_size": rep.wv_size,
            });
            if !ok {
                detail["inputs"] =
                    json!({"u": u.to_json(), "v": v.to_json(), "w": w.to_json()});
            }
            TrialRecord { index, ok, detail }
        }
        Err(e) => error_record(cfg, index, e, json!({"u": u.to_json()})),
    }
}

fn petridis_trial(cfg: &FuzzConfig, index: u64, rng: &mut ChaCha8Rng) -> TrialRecord {
    let spec = random_spec(rng, cfg.max_group_order);
    let y = random_set(rng, &spec, cfg.max_set_size.min(12), true);
    let extra = random_set(rng, &spec, 8, false);
    let a = y.union(&extra).expect("same spec");
    match lemmas::petridis_minimizer(&y, &a) {
        Ok((z, ratio)) => {
            let mut ok = true;
            let mut first_failure = Value::Null;
            for _ in 0..100 {
                let c = random_set(rng, &spec, 6, true);
                match lemmas::petridis_conclusion_check(&z, &a, &c) {
                    Ok(rep) if rep.holds => {}
                    Ok(_) => {
                        ok = false;
                        first_failure = c.to_json();
                        break;
                    }
                    Err(e) => {
                        ok = false;
                        first_failure = json!({"error": e.to_string(), "c": c.to_json()});
                        break;
                    }
                }
            }
            let mut detail = json!({
                "checker": cfg.checker.as_str(),
                "spec": spec.to_string(),
                "y_size": y.len(),
                "a_size": a.len(),
                "z_size": z.len(),
                "ratio": ratio.to_string(),
            });
            if !ok {
                detail["inputs"] = json!({
                    "y": y.to_json(),
                    "a": a.to_json(),
                    "z": z.to_json(),
                    "failing_c": first_failure,
                });
            }
            TrialRecord { index, ok, detail }
        }
        Err(e) => error_record(cfg, index, e, json!({"y": y.to_json(), "a": a.to_json()})),
    }
}

fn kernel_quotient_trial(cfg: &FuzzConfig, index: u64, rng: &mut ChaCha8Rng) -> TrialRecord {
    let spec = random_spec(rng, cfg.max_group_order);
    let z = random_set(rng, &spec, cfg.max_set_size, true);
    let a = random_set(rng, &spec, cfg.max_set_size, true);
    let k = rng.gen_range(1..=4u32);
    match lemmas::kernel_quotient_identity_check(&z, &a, k) {
        Ok(rep) => {
            let ok = rep.holds;
            let mut detail = json!({
                "checker": cfg.checker.as_str(),
                "spec": spec.to_string(),
                "k": k,
                "dilated_size": rep.dilated_size,
                "coset_sum_size": rep.coset_sum_size,
                "kernel_size": rep.kernel_size,
            });
            if !ok {
                detail["inputs"] = json!({"z": z.to_json(), "a": a.to_json(), "k": k});
            }
            TrialRecord { index, ok, detail }
        }
        Err(e) => error_record(cfg, index, e, json!({"z": z.to_json(), "a": a.to_json()})),
    }
}

/// Draws one set from the BSG corpus: random sets, subgroups, unions of
/// cosets, and graphs of the two constructions, cycling by trial index.
pub fn bsg_corpus_set(rng: &mut ChaCha8Rng, index: u64, max_order: u64) -> ElementSet {
    match index % 4 {
        0 => {
            // random set, nudged to contain the identity so that eps > 0
            let spec = random_spec(rng, max_order);
            let mut s = random_set(rng, &spec, 24, true);
            if s.triple_correlation() == num::BigUint::from(0u32) {
                s.insert(spec.identity()).expect("same spec");
            }
            s
        }
        1 => {
            let spec = random_spec(rng, max_order);
            let r = rng.gen_range(1..=8i64);
            if rng.gen_bool(0.5) {
                spec.kernel_subgroup(r).expect("finite spec")
            } else {
                spec.dilate_image(r).expect("finite spec")
            }
        }
        2 => {
            let spec = random_spec(rng, max_order);
            let sub = spec.kernel_subgroup(rng.gen_range(2..=6i64)).expect("finite");
            let mut s = sub.clone();
            for _ in 0..rng.gen_range(1..=2) {
                let n = spec.small_order().expect("finite");
                let rep = spec.unrank(rng.gen_range(0..n)).expect("in range");
                let coset = sub
                    .sumset(&ElementSet::singleton(spec.clone(), rep).expect("same spec"))
                    .expect("same spec");
                s = s.union(&coset).expect("same spec");
            }
            s
        }
        _ => {
            if rng.gen_bool(0.5) {
                let n = rng.gen_range(2..=5u32);
                let p = primes::next_prime(1u64 << n);
                binary_embedding(n, p).expect("valid parameters").graph()
            } else {
                let odd_primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
                let p = odd_primes[rng.gen_range(0..odd_primes.len())];
                let q = primes::next_prime(p);
                centered_unwrap(p, q).expect("valid parameters").graph()
            }
        }
    }
}

fn bsg_trial(cfg: &FuzzConfig, index: u64, rng: &mut ChaCha8Rng) -> TrialRecord {
    let s = bsg_corpus_set(rng, index, cfg.max_group_order);
    match lemmas::bsg_symmetric(&s) {
        Ok((out, _trace)) => {
            let ok = out.certified.all_hold();
            let mut detail = json!({
                "checker": cfg.checker.as_str(),
                "spec": s.spec().to_string(),
                "s_size": out.s_size,
                "u_size": out.u_size,
                "r_size": out.r_size,
                "t_size": out.t.len(),
                "t_minus_t_size": out.t_minus_t_size,
                "epsilon": out.epsilon.to_string(),
            });
            if !ok {
                detail["inputs"] = json!({"s": s.to_json()});
            }
            TrialRecord { index, ok, detail }
        }
        Err(e) => error_record(cfg, index, e, json!({"s": s.to_json()})),
    }
}

fn error_record(
    cfg: &FuzzConfig,
    index: u64,
    e: crate::error::Error,
    inputs: Value,
) -> TrialRecord {
    TrialRecord {
        index,
        ok: false,
        detail: json!({
            "checker": cfg.checker.as_str(),
            "error": e.to_string(),
            "inputs": inputs,
        }),
    }
}
