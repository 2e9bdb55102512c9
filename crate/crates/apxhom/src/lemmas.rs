//! Constructive checkers for the sumset estimates behind the agreement
//! bounds, plus the torsion counterexample family showing that dilation can
//! destroy doubling.
//!
//! Every checker computes both sides of its inequality exactly (integer or
//! rational arithmetic, never floats) and reports whether it holds; the
//! randomized suites in [`crate::fuzz`] hunt for violations.

use std::collections::{BTreeMap, HashMap};

use num::traits::Pow;
use num::{BigInt, BigRational, BigUint, One};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::sets::ElementSet;

fn ratio_of(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Report for the graph sumset-growth lower bound
/// `|X + r.B| / |X| >= |B| / (|K_{H,r}| |r.G|)`
/// for nonempty `X, B` inside a graph `Gamma` in `G x H` whose two
/// coordinate projections are injective on `Gamma`.
///
/// The intermediate energy bound `|Q| <= |X| |r.B| |r.G|` is re-derived on
/// the same inputs, where `Q` is the set of quadruples
/// `(x, y, z, w) in X x r.B x X x r.B` with `x + y = z + w`.
#[derive(Debug, Clone)]
pub struct GraphGrowthReport {
    pub x_size: usize,
    pub b_size: usize,
    pub dilated_b_size: usize,
    pub sumset_size: usize,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
    pub quadruple_count: BigUint,
    pub quadruple_bound: BigUint,
    pub quadruples_bounded: bool,
}

impl GraphGrowthReport {
    pub fn all_hold(&self) -> bool {
        self.holds && self.quadruples_bounded
    }
}

pub fn graph_growth_check(
    g: &GroupSpec,
    h: &GroupSpec,
    gamma: &ElementSet,
    x: &ElementSet,
    b: &ElementSet,
    r: u64,
) -> Result<GraphGrowthReport> {
    if r == 0 {
        return Err(Error::InvalidParameter("graph growth needs r >= 1".into()));
    }
    if !g.is_finite() || !h.is_finite() {
        return Err(Error::InfiniteGroup(format!("{g} x {h}")));
    }
    let product = g.direct_product(h);
    if *gamma.spec() != product {
        return Err(Error::SpecMismatch(
            gamma.spec().to_string(),
            product.to_string(),
        ));
    }
    if x.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter(
            "graph growth needs nonempty X and B".into(),
        ));
    }
    if !x.is_subset_of(gamma) || !b.is_subset_of(gamma) {
        return Err(Error::InvalidParameter(
            "X and B must be subsets of the graph".into(),
        ));
    }
    let split = g.moduli().len();
    let mut firsts = std::collections::BTreeSet::new();
    let mut seconds = std::collections::BTreeSet::new();
    for e in gamma.elements() {
        if !firsts.insert(e.coords()[..split].to_vec())
            || !seconds.insert(e.coords()[split..].to_vec())
        {
            return Err(Error::InvalidParameter(
                "a coordinate projection restricted to the graph is not injective".into(),
            ));
        }
    }

    let ri = i64::try_from(r)
        .map_err(|_| Error::InvalidParameter(format!("r = {r} out of range")))?;
    let rb = b.dilate(ri)?;
    let xrb = x.sumset(&rb)?;
    let lhs = ratio_of(xrb.len() as u64, x.len() as u64);
    let denom = h.kernel_size(ri)? * g.dilate_image_size(ri)?;
    let rhs = BigRational::new(BigInt::from(b.len() as u64), BigInt::from(denom));
    let quadruple_count = x.additive_energy(&rb)?;
    let quadruple_bound =
        BigUint::from(x.len() as u64) * BigUint::from(rb.len() as u64) * g.dilate_image_size(ri)?;
    Ok(GraphGrowthReport {
        x_size: x.len(),
        b_size: b.len(),
        dilated_b_size: rb.len(),
        sumset_size: xrb.len(),
        holds: lhs >= rhs,
        quadruples_bounded: quadruple_count <= quadruple_bound,
        lhs,
        rhs,
        quadruple_count,
        quadruple_bound,
    })
}

/// Report for the dilated-sumset growth bound (Bukh's inequality, in the
/// special case used here): with `K := |Y - A - 2.A| / |Y|` for some
/// nonempty `Y` contained in `A`,
/// `|X + r.A| <= K^floor(log2 r) |X + A|` for every finite `X`.
///
/// The binary-decomposition chain
/// `|X + r.A| <= |X + sum(eps_i 2^i . A)| <= |X + sum(2^i . A)|`
/// is verified alongside, as is the bound `K^k |X+A|` on the full chain.
#[derive(Debug, Clone)]
pub struct BukhReport {
    pub k_ratio: BigRational,
    pub log2_r_floor: u32,
    pub lhs_size: usize,
    pub base_size: usize,
    pub partial_chain_size: usize,
    pub full_chain_size: usize,
    pub conclusion_holds: bool,
    pub chain_holds: bool,
    pub full_chain_bounded: bool,
}

impl BukhReport {
    pub fn all_hold(&self) -> bool {
        self.conclusion_holds && self.chain_holds && self.full_chain_bounded
    }
}

pub fn bukh_check(a: &ElementSet, x: &ElementSet, y: &ElementSet, r: u64) -> Result<BukhReport> {
    if r == 0 {
        return Err(Error::InvalidParameter("bukh check needs r >= 1".into()));
    }
    if y.is_empty() || !y.is_subset_of(a) {
        return Err(Error::InvalidParameter(
            "Y must be a nonempty subset of A".into(),
        ));
    }
    let ri = i64::try_from(r)
        .map_err(|_| Error::InvalidParameter(format!("r = {r} out of range")))?;
    let hypothesis = y.difference(a)?.difference(&a.dilate(2)?)?;
    let k = r.ilog2();
    let lhs = x.sumset(&a.dilate(ri)?)?;
    let base = x.sumset(a)?;

    let mut partial = x.clone();
    let mut full = x.clone();
    for i in 0..=k {
        let term = a.dilate(1i64 << i)?;
        if (r >> i) & 1 == 1 {
            partial = partial.sumset(&term)?;
        }
        full = full.sumset(&term)?;
    }

    let y_pow = Pow::pow(&BigUint::from(y.len() as u64), k);
    let d_pow = Pow::pow(&BigUint::from(hypothesis.len() as u64), k);
    let conclusion_holds =
        BigUint::from(lhs.len() as u64) * &y_pow <= &d_pow * BigUint::from(base.len() as u64);
    let full_chain_bounded =
        BigUint::from(full.len() as u64) * &y_pow <= &d_pow * BigUint::from(base.len() as u64);
    Ok(BukhReport {
        k_ratio: ratio_of(hypothesis.len() as u64, y.len() as u64),
        log2_r_floor: k,
        lhs_size: lhs.len(),
        base_size: base.len(),
        partial_chain_size: partial.len(),
        full_chain_size: full.len(),
        conclusion_holds,
        chain_holds: lhs.len() <= partial.len() && partial.len() <= full.len(),
        full_chain_bounded,
    })
}

/// Exhaustively finds the nonempty `Z` inside `Y` minimizing
/// `|Z - A - 2.A| / |Z|`. Ties break toward smaller `|Z|`, then the
/// lexicographically smallest element list. `|Y| <= 14`.
pub fn petridis_minimizer(y: &ElementSet, a: &ElementSet) -> Result<(ElementSet, BigRational)> {
    if y.is_empty() {
        return Err(Error::InvalidParameter("Y must be nonempty".into()));
    }
    if y.len() > 14 {
        return Err(Error::TooLarge(format!(
            "petridis minimizer is exhaustive; |Y| = {} > 14",
            y.len()
        )));
    }
    if y.spec() != a.spec() {
        return Err(Error::SpecMismatch(
            y.spec().to_string(),
            a.spec().to_string(),
        ));
    }
    let spec = y.spec().clone();
    let shift = a.dilate(-1)?.sumset(&a.dilate(-2)?)?; // -A - 2.A
    let mut members = y.elements();
    members.sort();
    let m = members.len();

    // translate bitsets when the ambient group is rankable; otherwise fall
    // back to per-subset sumsets
    let fast = spec.small_order().filter(|&n| n <= 1 << 22);
    let mut best: Option<(BigRational, Vec<GroupElement>)> = None;
    let mut consider = |ratio: BigRational, subset: Vec<GroupElement>| {
        let better = match &best {
            None => true,
            Some((r, s)) => {
                ratio < *r
                    || (ratio == *r
                        && (subset.len() < s.len() || (subset.len() == s.len() && subset < *s)))
            }
        };
        if better {
            best = Some((ratio, subset));
        }
    };

    if let Some(n) = fast {
        let words = (n as usize).div_ceil(64);
        let translates: Vec<Vec<u64>> = members
            .iter()
            .map(|z| {
                let mut bits = vec![0u64; words];
                for d in shift.elements() {
                    let s = spec.add(z, &d).expect("same spec");
                    let r = spec.rank(&s).expect("rank") as usize;
                    bits[r / 64] |= 1 << (r % 64);
                }
                bits
            })
            .collect();
        for mask in 1u32..(1u32 << m) {
            let mut bits = vec![0u64; words];
            let mut subset = Vec::new();
            for (i, member) in members.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    for (w, t) in bits.iter_mut().zip(&translates[i]) {
                        *w |= t;
                    }
                    subset.push(member.clone());
                }
            }
            let size: u64 = bits.iter().map(|w| w.count_ones() as u64).sum();
            consider(ratio_of(size, subset.len() as u64), subset);
        }
    } else {
        for mask in 1u32..(1u32 << m) {
            let subset: Vec<GroupElement> = members
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .map(|(_, e)| e.clone())
                .collect();
            let z = ElementSet::from_elements(spec.clone(), subset.clone())?;
            let zd = z.sumset(&shift)?;
            consider(ratio_of(zd.len() as u64, subset.len() as u64), subset);
        }
    }

    let (ratio, subset) = best.expect("nonempty Y has nonempty subsets");
    Ok((ElementSet::from_elements(spec, subset)?, ratio))
}

/// Report for the Petridis conclusion at a minimizer `Z`:
/// `|Z - A - 2.A + C| <= (|Z - A - 2.A| / |Z|) |Z + C|`, checked in the
/// cleared form `|Z - A - 2.A + C| |Z| <= |Z - A - 2.A| |Z + C|`.
#[derive(Debug, Clone)]
pub struct PetridisConclusionReport {
    pub expanded_size: usize,
    pub z_plus_c_size: usize,
    pub shifted_size: usize,
    pub z_size: usize,
    pub holds: bool,
}

pub fn petridis_conclusion_check(
    z: &ElementSet,
    a: &ElementSet,
    c: &ElementSet,
) -> Result<PetridisConclusionReport> {
    if z.is_empty() {
        return Err(Error::InvalidParameter("Z must be nonempty".into()));
    }
    let shifted = z.difference(a)?.difference(&a.dilate(2)?)?;
    let expanded = shifted.sumset(c)?;
    let z_plus_c = z.sumset(c)?;
    let holds = (expanded.len() as u128) * (z.len() as u128)
        <= (shifted.len() as u128) * (z_plus_c.len() as u128);
    Ok(PetridisConclusionReport {
        expanded_size: expanded.len(),
        z_plus_c_size: z_plus_c.len(),
        shifted_size: shifted.len(),
        z_size: z.len(),
        holds,
    })
}

/// Report for the kernel-quotient identity: with `D := Z - A - 2.A` and
/// `r = 2^(k-1)`, `|r.D| = |D + K_{G,r}| / |K_{G,r}|`, asserted in the
/// multiplied-out form.
#[derive(Debug, Clone)]
pub struct KernelQuotientReport {
    pub dilated_size: usize,
    pub coset_sum_size: usize,
    pub kernel_size: usize,
    pub holds: bool,
}

pub fn kernel_quotient_identity_check(
    z: &ElementSet,
    a: &ElementSet,
    k: u32,
) -> Result<KernelQuotientReport> {
    if k == 0 || k > 40 {
        return Err(Error::InvalidParameter(format!(
            "kernel quotient check needs 1 <= k <= 40, got {k}"
        )));
    }
    let r = 1i64 << (k - 1);
    let d = z.difference(a)?.difference(&a.dilate(2)?)?;
    let dilated = d.dilate(r)?;
    let kernel = z.spec().kernel_subgroup(r)?;
    let coset_sum = d.sumset(&kernel)?;
    let holds = dilated.len() as u128 * kernel.len() as u128 == coset_sum.len() as u128;
    Ok(KernelQuotientReport {
        dilated_size: dilated.len(),
        coset_sum_size: coset_sum.len(),
        kernel_size: kernel.len(),
        holds,
    })
}

/// Report for the Ruzsa triangle inequality
/// `|V| |U + W| <= |U + V| |(-V) + W|`.
#[derive(Debug, Clone)]
pub struct RuzsaReport {
    pub v_size: usize,
    pub uw_size: usize,
    pub uv_size: usize,
    pub wv_size: usize,
    pub holds: bool,
}

pub fn ruzsa_triangle_check(u: &ElementSet, v: &ElementSet, w: &ElementSet) -> Result<RuzsaReport> {
    if v.is_empty() {
        return Err(Error::InvalidParameter("V must be nonempty".into()));
    }
    let uw = u.sumset(w)?;
    let uv = u.sumset(v)?;
    let wv = w.difference(v)?; // (-V) + W
    let holds = (v.len() as u128) * (uw.len() as u128) <= (uv.len() as u128) * (wv.len() as u128);
    Ok(RuzsaReport {
        v_size: v.len(),
        uw_size: uw.len(),
        uv_size: uv.len(),
        wv_size: wv.len(),
        holds,
    })
}

/// The five exact guarantees certified for every BSG extraction.
#[derive(Debug, Clone, Copy)]
pub struct BsgCertificates {
    /// `x0 - T = T`, checked elementwise.
    pub symmetric: bool,
    /// `3 |T| >= |U|`.
    pub t_large: bool,
    /// `2 |U|^2 |S|^2 >= t^2`, the cleared form of `|U| >= (eps/sqrt 2)|S|`
    /// where `t` is the triple-correlation count and `eps = t / |S|^2`.
    pub u_large: bool,
    /// `3 |R| >= 2 |U|`.
    pub r_large: bool,
    /// `|T - T| |U| t^4 <= 972 |S|^10`, the cleared form of
    /// `|T - T| (|U|/3) (c eps^2)^2 |S|^2 <= |S|^4` with `c = 1/18`.
    pub difference_bounded: bool,
}

impl BsgCertificates {
    pub fn all_hold(&self) -> bool {
        self.symmetric && self.t_large && self.u_large && self.r_large && self.difference_bounded
    }
}

/// Output of the symmetric BSG extraction: a subset `T` of `S` with
/// `x0 - T = T`, of size comparable to `eps |S|`, whose difference set is
/// polynomially controlled.
#[derive(Debug, Clone)]
pub struct BsgOutput {
    pub t: ElementSet,
    pub x0: GroupElement,
    pub s_size: usize,
    pub u_size: usize,
    pub r_size: usize,
    pub t_minus_t_size: usize,
    pub epsilon: BigRational,
    pub certified: BsgCertificates,
}

/// Trace of the extraction: the chosen `x`, the pair statistic
/// `p(y, z) = |(y + S) n S n (S + z)| / |S|` on `S x S` (materialized for
/// `|S| <= 256`, keyed by element ranks), the size of the filtered row set
/// `R`, and the fixed constant `c = 1/18`.
#[derive(Debug, Clone)]
pub struct BsgTrace {
    pub chosen_x: GroupElement,
    pub p_table: BTreeMap<(u64, u64), BigRational>,
    pub r_size: usize,
    pub c: BigRational,
}

/// Symmetric BSG extraction, following the probabilistic argument step by
/// step with every threshold comparison done on cleared-denominator
/// integers:
///
/// 1. `eps := t / |S|^2` where `t` counts pairs `(a, b) in S^2` with
///    `a + b in S`; requires `t > 0`.
/// 2. Scan `x in S` in rank order; put `U := S n (x - S)`. Take the first
///    `x` with `2 |U|^2 |S|^2 >= t^2` and
///    `9 #{(y, z) in U^2 : p(y, z) > c eps^2} >= 8 |U|^2`.
///    The averaging argument guarantees such an `x` exists; if the scan
///    finds none, that is an internal-consistency failure and the error
///    carries a diagnostic dump of the input.
/// 3. `R := {y in U : 3 #{z in U : p(y, z) > c eps^2} >= 2 |U|}`,
///    `T := R n (x0 - R)` with `x0 := x`.
pub fn bsg_symmetric(s: &ElementSet) -> Result<(BsgOutput, BsgTrace)> {
    let spec = s.spec().clone();
    if !spec.is_finite() {
        return Err(Error::InfiniteGroup(spec.to_string()));
    }
    if s.is_empty() {
        return Err(Error::InvalidParameter("S must be nonempty".into()));
    }
    if s.len() > 4096 {
        return Err(Error::TooLarge(format!(
            "BSG extraction is cubic in |S|; |S| = {}",
            s.len()
        )));
    }
    let mut elems = s.elements();
    let ranks: Result<Vec<u64>> = elems.iter().map(|e| spec.rank(e)).collect();
    let mut ranked: Vec<(u64, GroupElement)> = ranks?.into_iter().zip(elems.drain(..)).collect();
    ranked.sort_by_key(|(r, _)| *r);
    let (ranks, elems): (Vec<u64>, Vec<GroupElement>) = ranked.into_iter().unzip();
    let m = elems.len();
    let words = m.div_ceil(64);
    let index_of: HashMap<u64, usize> = ranks.iter().enumerate().map(|(i, &r)| (r, i)).collect();

    let t_count: u128 = s
        .triple_correlation()
        .try_into()
        .expect("triple count fits u128");
    if t_count == 0 {
        return Err(Error::InvalidParameter(
            "S has no additive triples: eps = 0".into(),
        ));
    }
    let epsilon = BigRational::new(
        BigInt::from(t_count),
        BigInt::from(m as u128 * m as u128),
    );

    // rows[i][u] set iff S[u] - S[i] in S, so that
    // m(i, j) = |(y_i + S) n S n (S + z_j)| = popcount(rows[i] & rows[j])
    let rows: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            let mut bits = vec![0u64; words];
            for (u, su) in elems.iter().enumerate() {
                let d = spec.sub(su, &elems[i]).expect("same spec");
                if s.contains(&d) {
                    bits[u / 64] |= 1 << (u % 64);
                }
            }
            bits
        })
        .collect();
    let pair_count = |i: usize, j: usize| -> u64 {
        rows[i]
            .iter()
            .zip(&rows[j])
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    };
    // p(y_i, z_j) > c eps^2  <=>  18 m(i,j) |S|^3 > t^2
    let t_sq = t_count * t_count;
    let s_cubed = (m as u128).pow(3);
    let good: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            let mut bits = vec![0u64; words];
            for j in 0..m {
                if 18 * pair_count(i, j) as u128 * s_cubed > t_sq {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect();

    let masked_count = |bits: &[u64], mask: &[u64]| -> u64 {
        bits.iter()
            .zip(mask)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    };
    let in_mask = |mask: &[u64], i: usize| mask[i / 64] & (1 << (i % 64)) != 0;

    let mut chosen: Option<(usize, Vec<u64>, u64)> = None;
    for xi in 0..m {
        let mut u_mask = vec![0u64; words];
        for (u, su) in elems.iter().enumerate() {
            let d = spec.sub(&elems[xi], su).expect("same spec");
            if s.contains(&d) {
                u_mask[u / 64] |= 1 << (u % 64);
            }
        }
        let u_size: u64 = u_mask.iter().map(|w| w.count_ones() as u64).sum();
        if u_size == 0 {
            continue;
        }
        let u_sq = u_size as u128 * u_size as u128;
        if 2 * u_sq * (m as u128 * m as u128) < t_sq {
            continue;
        }
        let mut good_pairs: u128 = 0;
        for (i, row) in good.iter().enumerate() {
            if in_mask(&u_mask, i) {
                good_pairs += masked_count(row, &u_mask) as u128;
            }
        }
        if 9 * good_pairs >= 8 * u_sq {
            chosen = Some((xi, u_mask, u_size));
            break;
        }
    }
    let Some((xi, u_mask, u_size)) = chosen else {
        return Err(Error::InternalConsistency(format!(
            "no qualifying x in the BSG scan; |S| = {m}, triples = {t_count}, set = {}",
            s.to_json()
        )));
    };
    let x0 = elems[xi].clone();

    let mut r_mask = vec![0u64; words];
    let mut r_size = 0u64;
    for i in 0..m {
        if in_mask(&u_mask, i) && 3 * masked_count(&good[i], &u_mask) >= 2 * u_size {
            r_mask[i / 64] |= 1 << (i % 64);
            r_size += 1;
        }
    }
    // x0 - R, as indices; x0 - U = U keeps the reflection inside S
    let mut xr_mask = vec![0u64; words];
    for (i, el) in elems.iter().enumerate() {
        if in_mask(&r_mask, i) {
            let refl = spec.sub(&x0, el).expect("same spec");
            if let Some(&j) = index_of.get(&spec.rank(&refl).expect("rank")) {
                xr_mask[j / 64] |= 1 << (j % 64);
            }
        }
    }
    let t_indices: Vec<usize> = (0..m)
        .filter(|&i| in_mask(&r_mask, i) && in_mask(&xr_mask, i))
        .collect();
    let t_set =
        ElementSet::from_elements(spec.clone(), t_indices.iter().map(|&i| elems[i].clone()))?;

    let symmetric = !t_set.is_empty()
        && t_indices.iter().all(|&i| {
            let refl = spec.sub(&x0, &elems[i]).expect("same spec");
            t_set.contains(&refl)
        });
    let t_size = t_set.len() as u64;
    let tt = t_set.difference(&t_set)?;
    let difference_bounded = BigUint::from(tt.len() as u64)
        * BigUint::from(u_size)
        * Pow::pow(&BigUint::from(t_count), 4u32)
        <= BigUint::from(972u32) * Pow::pow(&BigUint::from(m as u64), 10u32);

    let certified = BsgCertificates {
        symmetric,
        t_large: 3 * t_size >= u_size,
        u_large: 2 * (u_size as u128 * u_size as u128) * (m as u128 * m as u128) >= t_sq,
        r_large: 3 * r_size >= 2 * u_size,
        difference_bounded,
    };

    let mut p_table = BTreeMap::new();
    if m <= 256 {
        for i in 0..m {
            for j in 0..m {
                p_table.insert((ranks[i], ranks[j]), ratio_of(pair_count(i, j), m as u64));
            }
        }
    }

    Ok((
        BsgOutput {
            t: t_set,
            x0: x0.clone(),
            s_size: m,
            u_size: u_size as usize,
            r_size: r_size as usize,
            t_minus_t_size: tt.len(),
            epsilon,
            certified,
        },
        BsgTrace {
            chosen_x: x0,
            p_table,
            r_size: r_size as usize,
            c: BigRational::new(BigInt::one(), BigInt::from(18)),
        },
    ))
}

/// The family witnessing that bounded doubling does not survive dilation:
/// in `(Z/4Z)^d x Z`, with
/// `A = (Z/4Z)^d x {0}  u  {0}^d x {1, ..., 2^d}` and `B = {0,1}^d x {0}`,
/// the ratio `|A+B|/|A|` stays at most 2 while `|2.A + 2.B|/|2.A|` grows
/// like `2^(d-1)`.
#[derive(Debug, Clone)]
pub struct CounterexampleStats {
    pub d: u32,
    pub size_a: u64,
    pub size_2a: u64,
    pub size_ab: u64,
    pub size_2a2b: u64,
    pub ratio_first: BigRational,
    pub ratio_second: BigRational,
    pub closed_forms_match: bool,
    pub first_ratio_bounded: bool,
    pub second_ratio_large: bool,
}

impl CounterexampleStats {
    pub fn all_hold(&self) -> bool {
        self.closed_forms_match && self.first_ratio_bounded && self.second_ratio_large
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "size_a": self.size_a,
            "size_2a": self.size_2a,
            "size_a_plus_b": self.size_ab,
            "size_2a_plus_2b": self.size_2a2b,
            "ratio_first": format!("{}/{}", self.ratio_first.numer(), self.ratio_first.denom()),
            "ratio_second": format!("{}/{}", self.ratio_second.numer(), self.ratio_second.denom()),
            "closed_forms_match": self.closed_forms_match,
            "first_ratio_bounded": self.first_ratio_bounded,
            "second_ratio_large": self.second_ratio_large,
        })
    }
}

pub fn counterexample_family(d: u32) -> Result<CounterexampleStats> {
    if d > 8 {
        return Err(Error::TooLarge(format!(
            "counterexample family is enumerated; d = {d} > 8"
        )));
    }
    let mut moduli = vec![4u64; d as usize];
    moduli.push(0);
    let spec = GroupSpec::new(moduli)?;
    let torus = GroupSpec::repeated(4, d as usize)?;

    let mut a = ElementSet::empty_sparse(spec.clone());
    for v in torus.elements()? {
        let mut coords = v.into_coords();
        coords.push(0);
        a.insert(spec.element(coords)?)?;
    }
    for j in 1..=(1i64 << d) {
        let mut coords = vec![0i64; d as usize];
        coords.push(j);
        a.insert(spec.element(coords)?)?;
    }
    let mut b = ElementSet::empty_sparse(spec.clone());
    for bits in 0..(1u64 << d) {
        let mut coords: Vec<i64> = (0..d).map(|i| ((bits >> i) & 1) as i64).collect();
        coords.push(0);
        b.insert(spec.element(coords)?)?;
    }

    let ab = a.sumset(&b)?;
    let a2 = a.dilate(2)?;
    let b2 = b.dilate(2)?;
    let a2b2 = a2.sumset(&b2)?;

    let (size_a, size_2a) = (a.len() as u64, a2.len() as u64);
    let (size_ab, size_2a2b) = (ab.len() as u64, a2b2.len() as u64);
    let pow2 = 1u64 << d;
    let pow4 = pow2 * pow2;
    let closed_forms_match = size_a == pow4 + pow2
        && size_2a == 2 * pow2
        && size_ab == 2 * pow4
        && size_2a2b == pow4 + pow2;

    let ratio_first = ratio_of(size_ab, size_a);
    let ratio_second = ratio_of(size_2a2b, size_2a);
    let two = BigRational::from(BigInt::from(2));
    // 2^(d-1) as a rational; equals 1/2 at d = 0
    let growth_floor = BigRational::new(BigInt::from(1u64 << d), BigInt::from(2));
    Ok(CounterexampleStats {
        d,
        size_a,
        size_2a,
        size_ab,
        size_2a2b,
        first_ratio_bounded: ratio_first <= two,
        second_ratio_large: ratio_second >= growth_floor,
        ratio_first,
        ratio_second,
        closed_forms_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{binary_embedding, PointMap};
    use num::Zero;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn set(g: &GroupSpec, coords: &[&[i64]]) -> ElementSet {
        ElementSet::from_coords(g.clone(), coords.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn graph_growth_identity_graph() {
        let g = spec("[5]");
        let id = PointMap::identity(g.clone()).unwrap();
        let gamma = id.graph();
        let rep = graph_growth_check(&g, &g, &gamma, &gamma, &gamma, 2).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.lhs, BigRational::one()); // Gamma + 2.Gamma = Gamma
        assert_eq!(rep.rhs, BigRational::one()); // 5 / (1 * 5)
    }

    #[test]
    fn graph_growth_binary_embedding_graph() {
        let f = binary_embedding(2, 5).unwrap();
        let gamma = f.graph();
        let g = f.domain().clone();
        let h = f.codomain().clone();
        let rep = graph_growth_check(&g, &h, &gamma, &gamma, &gamma, 2).unwrap();
        assert!(rep.all_hold());
        // K_{H,2} and 2.G are both trivial here, so the floor is |B| = 4
        assert_eq!(rep.rhs, BigRational::from(BigInt::from(4)));
        assert_eq!(rep.sumset_size, 16);
        assert_eq!(rep.lhs, BigRational::from(BigInt::from(4)));

        // singleton B: the bound is at most 1 and growth is at least 1
        let single = set(gamma.spec(), &[&[0, 0, 0]]);
        let rep = graph_growth_check(&g, &h, &gamma, &gamma, &single, 3).unwrap();
        assert!(rep.all_hold());
        assert!(rep.rhs <= BigRational::one());
    }

    #[test]
    fn graph_growth_rejects_bad_inputs() {
        let f = binary_embedding(2, 5).unwrap();
        let gamma = f.graph();
        let g = f.domain().clone();
        let h = f.codomain().clone();
        let empty = ElementSet::empty(gamma.spec().clone());
        assert!(graph_growth_check(&g, &h, &gamma, &empty, &gamma, 2).is_err());

        // non-injective projection: a constant map's graph
        let z2 = spec("[2]");
        let constant =
            PointMap::from_table(z2.clone(), z2.clone(), vec![z2.identity(), z2.identity()])
                .unwrap();
        let cg = constant.graph();
        assert!(graph_growth_check(&z2, &z2, &cg, &cg, &cg, 2).is_err());
    }

    #[test]
    fn bukh_r1_is_trivial() {
        let g = spec("[12]");
        let a = set(&g, &[&[0], &[1], &[5]]);
        let x = set(&g, &[&[2]]);
        let rep = bukh_check(&a, &x, &a, 1).unwrap();
        assert_eq!(rep.log2_r_floor, 0);
        assert_eq!(rep.lhs_size, rep.base_size);
        assert!(rep.all_hold());
    }

    #[test]
    fn bukh_progression_example() {
        // A = {0..9} in Z/101Z, X = {0}, Y = A, r = 3:
        // Y - A - 2.A is the interval [-27, 9], so K = 37/10
        let g = spec("[101]");
        let a = ElementSet::from_coords(g.clone(), (0..10).map(|i| vec![i]).collect()).unwrap();
        let x = set(&g, &[&[0]]);
        let rep = bukh_check(&a, &x, &a, 3).unwrap();
        assert_eq!(rep.k_ratio, ratio_of(37, 10));
        assert_eq!(rep.log2_r_floor, 1);
        assert_eq!(rep.lhs_size, 10);
        assert!(rep.all_hold());
    }

    #[test]
    fn bukh_subgroup_fixed_by_dilation() {
        // A = {0,3,6,9} in Z/12Z is a subgroup with 5.A = A, so K = 1 and
        // the conclusion is an equality
        let g = spec("[12]");
        let a = g.dilate_image(3).unwrap();
        let x = set(&g, &[&[1], &[2]]);
        let rep = bukh_check(&a, &x, &a, 5).unwrap();
        assert_eq!(rep.k_ratio, BigRational::one());
        assert_eq!(rep.lhs_size, rep.base_size);
        assert!(rep.all_hold());
    }

    #[test]
    fn petridis_minimizer_examples() {
        let g = spec("[10]");
        let y = set(&g, &[&[0]]);
        let a = set(&g, &[&[0], &[1], &[2]]);
        let (z, _) = petridis_minimizer(&y, &a).unwrap();
        assert_eq!(z, y);

        let y = a.clone();
        let (z, ratio) = petridis_minimizer(&y, &a).unwrap();
        assert_eq!(z, a);
        assert_eq!(ratio, BigRational::from(BigInt::from(3)));

        // subgroup: ratio 1, achieved by the whole subgroup
        let g12 = spec("[12]");
        let sub = g12.dilate_image(4).unwrap(); // {0,4,8}
        let (z, ratio) = petridis_minimizer(&sub, &sub).unwrap();
        assert_eq!(ratio, BigRational::one());
        assert_eq!(z, sub);

        let too_big =
            ElementSet::from_coords(spec("[40]"), (0..15).map(|i| vec![i]).collect()).unwrap();
        assert!(petridis_minimizer(&too_big, &too_big).is_err());
    }

    #[test]
    fn petridis_sparse_path_matches_dense() {
        let g = spec("[10]");
        let a = set(&g, &[&[0], &[1], &[2], &[7]]);
        let y = set(&g, &[&[0], &[1], &[7]]);
        let (z_dense, r_dense) = petridis_minimizer(&y, &a).unwrap();
        let (z_sparse, r_sparse) = petridis_minimizer(&y.to_sparse(), &a.to_sparse()).unwrap();
        assert_eq!(r_dense, r_sparse);
        assert_eq!(z_dense, z_sparse);
    }

    #[test]
    fn petridis_conclusion_on_minimizer() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = spec("[10]");
        let a = set(&g, &[&[0], &[1], &[2]]);
        let (z, _) = petridis_minimizer(&a, &a).unwrap();
        for _ in 0..100 {
            let size = rng.gen_range(1..=4);
            let c = ElementSet::from_coords(
                g.clone(),
                (0..size).map(|_| vec![rng.gen_range(0..10)]).collect(),
            )
            .unwrap();
            let rep = petridis_conclusion_check(&z, &a, &c).unwrap();
            assert!(rep.holds);
        }
    }

    #[test]
    fn kernel_quotient_examples() {
        let g = spec("[8]");
        let z = set(&g, &[&[0], &[1]]);
        // k = 1: both sides are |D|
        let rep = kernel_quotient_identity_check(&z, &z, 1).unwrap();
        assert_eq!(rep.kernel_size, 1);
        assert_eq!(rep.dilated_size, rep.coset_sum_size);
        assert!(rep.holds);

        // k = 2 in Z/8Z with Z = A = {0,1}: both sides equal 4
        let rep = kernel_quotient_identity_check(&z, &z, 2).unwrap();
        assert_eq!(rep.dilated_size, 4);
        assert_eq!(rep.coset_sum_size, 8);
        assert_eq!(rep.kernel_size, 2);
        assert!(rep.holds);

        // A = whole group: both sides are the dilation image of G
        let full = ElementSet::full(g.clone()).unwrap();
        for k in 1..=4 {
            let rep = kernel_quotient_identity_check(&full, &full, k).unwrap();
            assert!(rep.holds);
            let expect: u64 = g
                .dilate_image_size(1i64 << (k - 1))
                .unwrap()
                .try_into()
                .unwrap();
            assert_eq!(rep.dilated_size as u64, expect);
        }
    }

    #[test]
    fn ruzsa_examples() {
        let g = spec("[20]");
        let u = set(&g, &[&[0], &[3], &[7]]);
        let w = set(&g, &[&[1], &[2]]);
        let v0 = set(&g, &[&[0]]);
        let rep = ruzsa_triangle_check(&u, &v0, &w).unwrap();
        assert!(rep.holds);
        assert!(rep.uw_size <= rep.uv_size * rep.wv_size);

        let g12 = spec("[12]");
        let sub = g12.dilate_image(4).unwrap();
        let rep = ruzsa_triangle_check(&sub, &sub, &sub).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.v_size * rep.uw_size, rep.uv_size * rep.wv_size);

        assert!(ruzsa_triangle_check(&u, &ElementSet::empty(g.clone()), &w).is_err());
    }

    #[test]
    fn ruzsa_random_suite() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let g = spec("[64,4]");
        let n = g.small_order().unwrap();
        for _ in 0..10_000 {
            let mut draw = || {
                let mut s = ElementSet::empty(g.clone());
                for _ in 0..8 {
                    s.insert(g.unrank(rng.gen_range(0..n)).unwrap()).unwrap();
                }
                s
            };
            let (u, v, w) = (draw(), draw(), draw());
            if v.is_empty() {
                continue;
            }
            assert!(ruzsa_triangle_check(&u, &v, &w).unwrap().holds);
        }
    }

    #[test]
    fn bsg_subgroup_case() {
        let g = spec("[12]");
        let s = g.dilate_image(3).unwrap(); // {0,3,6,9}
        let (out, trace) = bsg_symmetric(&s).unwrap();
        assert_eq!(out.epsilon, BigRational::one());
        assert_eq!(out.x0, g.identity());
        assert_eq!(out.u_size, s.len());
        assert_eq!(out.t, s);
        assert!(out.certified.all_hold());
        assert_eq!(trace.c, ratio_of(1, 18));
        // p is identically 1 on S x S for a subgroup
        for p in trace.p_table.values() {
            assert_eq!(*p, BigRational::one());
        }
    }

    #[test]
    fn bsg_interval_case() {
        let g = spec("[16]");
        let s = set(&g, &[&[0], &[1], &[2], &[3]]);
        let (out, trace) = bsg_symmetric(&s).unwrap();
        // brute-force triple count: 10 of 16 pairs land back in S
        assert_eq!(out.epsilon, ratio_of(10, 16));
        assert!(out.certified.all_hold());
        assert_eq!(trace.r_size, out.r_size);
        // trace invariant: p(y,z) matches its definition
        for ((ry, rz), p) in &trace.p_table {
            let y = g.unrank(*ry).unwrap();
            let z = g.unrank(*rz).unwrap();
            let mut count = 0u64;
            for e in s.elements() {
                if s.contains(&g.sub(&e, &y).unwrap()) && s.contains(&g.sub(&e, &z).unwrap()) {
                    count += 1;
                }
            }
            assert_eq!(*p, ratio_of(count, s.len() as u64));
        }
    }

    #[test]
    fn bsg_construction_graph_case() {
        let f = binary_embedding(2, 5).unwrap();
        let s = f.graph();
        let (out, _) = bsg_symmetric(&s).unwrap();
        assert_eq!(out.epsilon, ratio_of(9, 16));
        assert!(out.certified.all_hold());
        assert!(out.t.is_subset_of(&s));
    }

    #[test]
    fn bsg_rejects_triple_free_sets() {
        let g = spec("[16]");
        // 5+5=10, 5+12=1, 12+12=8: no pair of {5,12} sums into the set
        let s = set(&g, &[&[5], &[12]]);
        assert_eq!(s.triple_correlation(), BigUint::zero());
        assert!(bsg_symmetric(&s).is_err());
    }

    #[test]
    fn counterexample_small_cases() {
        let expected = [
            (0u32, 2u64, 2u64, 2u64, 2u64),
            (1, 6, 4, 8, 6),
            (2, 20, 8, 32, 20),
            (3, 72, 16, 128, 72),
        ];
        for (d, a, a2, ab, a2b2) in expected {
            let stats = counterexample_family(d).unwrap();
            assert_eq!(stats.size_a, a);
            assert_eq!(stats.size_2a, a2);
            assert_eq!(stats.size_ab, ab);
            assert_eq!(stats.size_2a2b, a2b2);
            assert!(stats.all_hold(), "d = {d}");
        }
        assert!(counterexample_family(9).is_err());
    }
}
