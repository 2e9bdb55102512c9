//! Search for maximum-agreement injections between small finite groups:
//! exhaustive branch-and-bound where feasible, seeded hill climbing
//! otherwise, and bound-context tables for comparing observed maxima
//! against the bound expressions.

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bounds::{bound_report, BoundReport};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::maps::PointMap;
use crate::primes;

/// Hard cap on the candidate-injection count for exhaustive search.
const MAX_CANDIDATES: u64 = 100_000_000;

/// Rank-arithmetic tables for one (domain, codomain) pair. Group orders are
/// capped so the quadratic tables stay small.
struct Tables {
    n_g: usize,
    n_h: usize,
    dadd: Vec<u32>,
    dsub: Vec<u32>,
    hadd: Vec<u32>,
}

impl Tables {
    fn new(g: &GroupSpec, h: &GroupSpec) -> Result<Tables> {
        let n_g = g
            .small_order()
            .filter(|&n| n <= 2048)
            .ok_or_else(|| Error::TooLarge(format!("search domain {g} (max order 2048)")))?
            as usize;
        let n_h = h
            .small_order()
            .filter(|&n| n <= 2048)
            .ok_or_else(|| Error::TooLarge(format!("search codomain {h} (max order 2048)")))?
            as usize;
        let g_elems: Vec<_> = g.elements()?.collect();
        let h_elems: Vec<_> = h.elements()?.collect();
        let mut dadd = vec![0u32; n_g * n_g];
        let mut dsub = vec![0u32; n_g * n_g];
        for a in 0..n_g {
            for b in 0..n_g {
                let s = g.add(&g_elems[a], &g_elems[b])?;
                dadd[a * n_g + b] = g.rank(&s)? as u32;
                let d = g.sub(&g_elems[a], &g_elems[b])?;
                dsub[a * n_g + b] = g.rank(&d)? as u32;
            }
        }
        let mut hadd = vec![0u32; n_h * n_h];
        for a in 0..n_h {
            for b in 0..n_h {
                let s = h.add(&h_elems[a], &h_elems[b])?;
                hadd[a * n_h + b] = h.rank(&s)? as u32;
            }
        }
        Ok(Tables {
            n_g,
            n_h,
            dadd,
            dsub,
            hadd,
        })
    }

    #[inline]
    fn pair_good(&self, table: &[u32], a: usize, b: usize) -> bool {
        let fa = table[a] as usize;
        let fb = table[b] as usize;
        let fsum = self.hadd[fa * self.n_h + fb];
        fsum == table[self.dadd[a * self.n_g + b] as usize]
    }

    fn full_count(&self, table: &[u32]) -> u64 {
        let mut good = 0u64;
        for a in 0..self.n_g {
            for b in 0..self.n_g {
                if self.pair_good(table, a, b) {
                    good += 1;
                }
            }
        }
        good
    }

    /// Counts good pairs among the ordered pairs `(a, b)` with
    /// `a in P or b in P or a + b in P`, each such pair exactly once.
    fn affected_count(&self, table: &[u32], points: &[usize]) -> i64 {
        let in_p = |i: usize| points.contains(&i);
        let mut good = 0i64;
        for &p in points {
            for b in 0..self.n_g {
                if self.pair_good(table, p, b) {
                    good += 1;
                }
            }
        }
        for a in 0..self.n_g {
            if in_p(a) {
                continue;
            }
            for &p in points {
                if self.pair_good(table, a, p) {
                    good += 1;
                }
            }
        }
        for &t in points {
            for a in 0..self.n_g {
                if in_p(a) {
                    continue;
                }
                let b = self.dsub[t * self.n_g + a] as usize;
                if in_p(b) {
                    continue;
                }
                if self.pair_good(table, a, b) {
                    good += 1;
                }
            }
        }
        good
    }
}

/// A transversal of the orbits of `Aut(H)` acting on `H`, as ranks.
///
/// Automorphism orbits are generated only for single-cyclic and
/// elementary-Abelian specs; for anything else the transversal degrades to
/// all of `H` and the search is plain brute force.
fn aut_orbit_transversal(h: &GroupSpec) -> Result<Vec<u32>> {
    let n = h
        .small_order()
        .ok_or_else(|| Error::InfiniteGroup(h.to_string()))?;
    let m = h.moduli();
    if m.is_empty() {
        return Ok(vec![0]);
    }
    if m.len() == 1 {
        // orbits of the unit action on Z/dZ are the gcd classes, one per
        // divisor of d (the divisor d itself is the orbit {0})
        let d = m[0];
        let mut reps: Vec<u32> = vec![0];
        let mut i = 1u64;
        while i * i <= d {
            if d.is_multiple_of(i) {
                reps.push(i as u32);
                if i != 1 && d / i != d {
                    reps.push((d / i) as u32);
                }
            }
            i += 1;
        }
        reps.sort_unstable();
        reps.dedup();
        return Ok(reps);
    }
    let first = m[0];
    if m.iter().all(|&d| d == first) && primes::is_prime(first) {
        // GL_k(F_q) is transitive on nonzero vectors
        return Ok(vec![0, 1]);
    }
    Ok((0..n as u32).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Exhaustive,
    Local,
}

impl SearchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMethod::Exhaustive => "exhaustive",
            SearchMethod::Local => "local",
        }
    }
}

/// Outcome of a search run. For the exhaustive method the witness is a
/// global maximum; `visited` counts value placements (exhaustive) or move
/// evaluations (local).
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub method: SearchMethod,
    pub best_good_pairs: u64,
    pub total_pairs: u64,
    pub best_probability: BigRational,
    pub witness: PointMap,
    pub visited: u64,
    pub bound_context: Vec<BoundReport>,
}

impl SearchResult {
    fn new(
        method: SearchMethod,
        g: &GroupSpec,
        h: &GroupSpec,
        good: u64,
        table: &[u32],
        visited: u64,
    ) -> Result<SearchResult> {
        let n = table.len() as u64;
        let witness_table = table
            .iter()
            .map(|&v| h.unrank(v as u64))
            .collect::<Result<Vec<_>>>()?;
        let witness = PointMap::from_table(g.clone(), h.clone(), witness_table)?;
        let mut bound_context = Vec::new();
        for r in 1..=8 {
            bound_context.push(bound_report(g, h, r)?);
        }
        Ok(SearchResult {
            method,
            best_good_pairs: good,
            total_pairs: n * n,
            best_probability: BigRational::new(BigInt::from(good), BigInt::from(n * n)),
            witness,
            visited,
            bound_context,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "method": self.method.as_str(),
            "best_good_pairs": self.best_good_pairs,
            "total_pairs": self.total_pairs,
            "best_probability": format!("{}/{}", self.best_probability.numer(), self.best_probability.denom()),
            "best_probability_float": num::ToPrimitive::to_f64(&self.best_probability).unwrap_or(f64::NAN),
            "witness": self.witness.to_json(),
            "visited": self.visited,
            "bound_context": self.bound_context.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            "bound_note": BOUND_TABLE_NOTE,
        })
    }
}

struct Dfs<'a> {
    tables: &'a Tables,
    pairs_by_step: &'a [Vec<(u32, u32, u32)>],
    remaining_after: &'a [u64],
    table: Vec<u32>,
    used: Vec<bool>,
    best_good: u64,
    best_table: Option<Vec<u32>>,
    visited: u64,
}

impl Dfs<'_> {
    fn step_delta(&self, depth: usize) -> u64 {
        let n_h = self.tables.n_h;
        let mut good = 0u64;
        for &(a, b, c) in &self.pairs_by_step[depth] {
            let fa = self.table[a as usize] as usize;
            let fb = self.table[b as usize] as usize;
            if self.tables.hadd[fa * n_h + fb] == self.table[c as usize] {
                good += 1;
            }
        }
        good
    }

    fn run(&mut self, depth: usize, good: u64) {
        if depth == self.tables.n_g {
            if good > self.best_good || self.best_table.is_none() {
                self.best_good = good;
                self.best_table = Some(self.table.clone());
            }
            return;
        }
        for v in 0..self.tables.n_h as u32 {
            if self.used[v as usize] {
                continue;
            }
            self.table[depth] = v;
            self.used[v as usize] = true;
            self.visited += 1;
            let new_good = good + self.step_delta(depth);
            // admissible bound: every undecided pair could still be good
            if self.best_table.is_none()
                || new_good + self.remaining_after[depth] > self.best_good
            {
                self.run(depth + 1, new_good);
            }
            self.used[v as usize] = false;
        }
    }
}

/// Global maximum of the agreement probability over injections `G -> H`,
/// by branch-and-bound over rank-lexicographic assignment tables.
///
/// `f(0)` ranges over a transversal of the `Aut(H)`-orbits only: agreement
/// counts are invariant under post-composition with automorphisms of `H`
/// (and pre-composition with automorphisms of `G`), so every orbit needs
/// one representative. Roots are searched in parallel and merged by
/// (probability, lexicographically smallest witness), which keeps the
/// result and the visit count independent of scheduling.
pub fn exhaustive_max_agreement(g: &GroupSpec, h: &GroupSpec) -> Result<SearchResult> {
    let tables = Tables::new(g, h)?;
    if tables.n_g > tables.n_h {
        return Err(Error::InvalidParameter(format!(
            "no injections: |G| = {} > |H| = {}",
            tables.n_g, tables.n_h
        )));
    }
    let roots = aut_orbit_transversal(h)?;
    let mut candidates = roots.len() as u64;
    for i in 1..tables.n_g as u64 {
        candidates = candidates
            .saturating_mul(tables.n_h as u64 - i)
            .min(MAX_CANDIDATES + 1);
    }
    if candidates > MAX_CANDIDATES {
        return Err(Error::TooLarge(format!(
            "more than {MAX_CANDIDATES} candidate injections"
        )));
    }

    let n_g = tables.n_g;
    let mut pairs_by_step: Vec<Vec<(u32, u32, u32)>> = vec![Vec::new(); n_g];
    for a in 0..n_g {
        for b in 0..n_g {
            let c = tables.dadd[a * n_g + b];
            let step = a.max(b).max(c as usize);
            pairs_by_step[step].push((a as u32, b as u32, c));
        }
    }
    let mut remaining_after = vec![0u64; n_g];
    for m in (0..n_g.saturating_sub(1)).rev() {
        remaining_after[m] = remaining_after[m + 1] + pairs_by_step[m + 1].len() as u64;
    }

    type RootOutcome = (Option<(u64, Vec<u32>)>, u64);
    let per_root: Vec<RootOutcome> = roots
        .par_iter()
        .map(|&root| {
            let mut dfs = Dfs {
                tables: &tables,
                pairs_by_step: &pairs_by_step,
                remaining_after: &remaining_after,
                table: vec![0; n_g],
                used: vec![false; tables.n_h],
                best_good: 0,
                best_table: None,
                visited: 0,
            };
            dfs.table[0] = root;
            dfs.used[root as usize] = true;
            dfs.visited = 1;
            let good0 = dfs.step_delta(0);
            dfs.run(1, good0);
            (dfs.best_table.map(|t| (dfs.best_good, t)), dfs.visited)
        })
        .collect();

    let mut visited = 0u64;
    let mut best: Option<(u64, Vec<u32>)> = None;
    for (found, v) in per_root {
        visited += v;
        if let Some((good, table)) = found {
            best = match best {
                None => Some((good, table)),
                Some((bg, bt)) => {
                    if good > bg || (good == bg && table < bt) {
                        Some((good, table))
                    } else {
                        Some((bg, bt))
                    }
                }
            };
        }
    }
    let (good, table) = best.expect("at least one injection exists");
    SearchResult::new(SearchMethod::Exhaustive, g, h, good, &table, visited)
}

fn random_injection(rng: &mut ChaCha8Rng, n_g: usize, n_h: usize) -> Vec<u32> {
    let mut pool: Vec<u32> = (0..n_h as u32).collect();
    for i in 0..n_g {
        let j = rng.gen_range(i..n_h);
        pool.swap(i, j);
    }
    pool.truncate(n_g);
    pool
}

/// Hill climbing over injections with restarts, deterministic for a fixed
/// seed. Moves are value swaps and reassignments to unused codomain
/// values, scanned in a fixed order with first-improvement acceptance and
/// an incremental good-pair recount per candidate move. `iterations`
/// budgets the number of move evaluations. A warm start, when provided,
/// seeds the first climb, so the result never falls below it.
pub fn local_search_max_agreement(
    g: &GroupSpec,
    h: &GroupSpec,
    iterations: u64,
    seed: u64,
    warm: Option<&PointMap>,
) -> Result<SearchResult> {
    let tables = Tables::new(g, h)?;
    if tables.n_g > tables.n_h {
        return Err(Error::InvalidParameter(format!(
            "no injections: |G| = {} > |H| = {}",
            tables.n_g, tables.n_h
        )));
    }
    let (n_g, n_h) = (tables.n_g, tables.n_h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut current: Vec<u32> = match warm {
        Some(f) => {
            if f.domain() != g || f.codomain() != h {
                return Err(Error::SpecMismatch(
                    format!("{} -> {}", f.domain(), f.codomain()),
                    format!("{g} -> {h}"),
                ));
            }
            if !f.is_injective() {
                return Err(Error::NotInjective);
            }
            f.table()
                .iter()
                .map(|e| h.rank(e).map(|r| r as u32))
                .collect::<Result<Vec<_>>>()?
        }
        None => random_injection(&mut rng, n_g, n_h),
    };
    let mut used = vec![false; n_h];
    for &v in &current {
        used[v as usize] = true;
    }

    let mut good = tables.full_count(&current);
    let mut best_good = good;
    let mut best_table = current.clone();
    let mut evaluations = 0u64;

    'climbs: loop {
        let mut improved = true;
        while improved {
            improved = false;
            // swap moves
            'moves: for a in 0..n_g {
                for b in (a + 1)..n_g {
                    if evaluations >= iterations {
                        break 'climbs;
                    }
                    evaluations += 1;
                    let points = [a, b];
                    let before = tables.affected_count(&current, &points);
                    current.swap(a, b);
                    let after = tables.affected_count(&current, &points);
                    if after > before {
                        good = (good as i64 + after - before) as u64;
                        if good > best_good {
                            best_good = good;
                            best_table = current.clone();
                        }
                        improved = true;
                        break 'moves;
                    }
                    current.swap(a, b);
                }
            }
            if improved {
                continue;
            }
            // reassignment moves
            'reassign: for a in 0..n_g {
                for v in 0..n_h as u32 {
                    if used[v as usize] {
                        continue;
                    }
                    if evaluations >= iterations {
                        break 'climbs;
                    }
                    evaluations += 1;
                    let points = [a];
                    let old = current[a];
                    let before = tables.affected_count(&current, &points);
                    current[a] = v;
                    let after = tables.affected_count(&current, &points);
                    if after > before {
                        used[old as usize] = false;
                        used[v as usize] = true;
                        good = (good as i64 + after - before) as u64;
                        if good > best_good {
                            best_good = good;
                            best_table = current.clone();
                        }
                        improved = true;
                        break 'reassign;
                    }
                    current[a] = old;
                }
            }
        }
        // local optimum: restart from a fresh random injection
        if evaluations >= iterations {
            break;
        }
        current = random_injection(&mut rng, n_g, n_h);
        used.fill(false);
        for &v in &current {
            used[v as usize] = true;
        }
        good = tables.full_count(&current);
        if good > best_good {
            best_good = good;
            best_table = current.clone();
        }
    }

    SearchResult::new(SearchMethod::Local, g, h, best_good, &best_table, evaluations)
}

pub const BOUND_TABLE_NOTE: &str =
    "bound rows omit an absolute constant factor; they are context, not assertions";

/// Bound-context rows for a range of `r`, optionally annotated with an
/// observed best probability. The rows never assert dominance over the
/// observation: the bound expressions carry an unspecified constant.
#[derive(Debug, Clone)]
pub struct BoundComparison {
    pub rows: Vec<BoundReport>,
    pub observed_best: Option<BigRational>,
    pub note: &'static str,
}

impl BoundComparison {
    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            "observed_best": self.observed_best.as_ref()
                .map(|p| Value::from(format!("{}/{}", p.numer(), p.denom())))
                .unwrap_or(Value::Null),
            "note": self.note,
        })
    }
}

pub fn bound_comparison_table(
    g: &GroupSpec,
    h: &GroupSpec,
    rs: &[u64],
    observed_best: Option<BigRational>,
) -> Result<BoundComparison> {
    let rows = rs
        .iter()
        .map(|&r| bound_report(g, h, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundComparison {
        rows,
        observed_best,
        note: BOUND_TABLE_NOTE,
    })
}
