//! Maps between groups, their graphs, and exact agreement counting.
//!
//! For a map `f: G -> H` with `G` finite, the agreement probability is
//! `P(f(x+y) = f(x) + f(y))` over uniform independent `x, y in G`, counted
//! exactly over all `|G|^2` ordered pairs. It equals the normalized triple
//! correlation of the graph `{(x, f(x))}` inside `G x H`; the two counting
//! routes are kept separate so they can be tested against each other.
//!
//! Two explicit constructions with large agreement are provided: the binary
//! embedding `(Z/2Z)^n -> Z/pZ` and the centered unwrapping
//! `Z/pZ -> Z -> Z/qZ`.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, BigUint, One, ToPrimitive};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::primes;
use crate::sets::ElementSet;

/// Largest domain order for which a table-backed map is representable.
const MAX_TABLE: u64 = 1 << 24;

/// Provenance tag identifying which recipe produced a map; operations that
/// are only meaningful for one construction check it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    BinaryEmbedding { n: u32, p: u64 },
    CenteredUnwrap { p: u64, q: u64 },
}

/// A total map from a finite group to a codomain group, stored as a
/// rank-indexed table of codomain elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    domain: GroupSpec,
    codomain: GroupSpec,
    table: Vec<GroupElement>,
    injective: bool,
    construction: Option<Construction>,
}

/// Exact result of agreement counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub good_pairs: BigUint,
    pub total_pairs: BigUint,
    pub probability: BigRational,
}

impl AgreementReport {
    fn new(good: u64, domain_order: u64) -> Self {
        let good_pairs = BigUint::from(good);
        let total_pairs = BigUint::from(domain_order) * BigUint::from(domain_order);
        let probability = BigRational::new(
            BigInt::from(good_pairs.clone()),
            BigInt::from(total_pairs.clone()),
        );
        AgreementReport {
            good_pairs,
            total_pairs,
            probability,
        }
    }

    /// Decimal rendering of the exact probability (convenience only).
    pub fn as_float(&self) -> f64 {
        self.probability.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_homomorphism(&self) -> bool {
        self.probability == BigRational::one()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "good_pairs": self.good_pairs.to_string().parse::<u64>().map(Value::from)
                .unwrap_or_else(|_| Value::from(self.good_pairs.to_string())),
            "total_pairs": self.total_pairs.to_string().parse::<u64>().map(Value::from)
                .unwrap_or_else(|_| Value::from(self.total_pairs.to_string())),
            "probability": format!("{}/{}", self.probability.numer(), self.probability.denom()),
            "probability_float": self.as_float(),
        })
    }
}

impl PointMap {
    /// Builds a map from an explicit rank-indexed table.
    pub fn from_table(
        domain: GroupSpec,
        codomain: GroupSpec,
        table: Vec<GroupElement>,
    ) -> Result<PointMap> {
        let order = domain
            .small_order()
            .filter(|&n| n <= MAX_TABLE)
            .ok_or_else(|| Error::TooLarge(format!("domain {domain} not table-representable")))?;
        if table.len() as u64 != order {
            return Err(Error::InvalidParameter(format!(
                "table has {} entries, domain order is {order}",
                table.len()
            )));
        }
        let table = table
            .into_iter()
            .map(|e| codomain.element(e.into_coords()))
            .collect::<Result<Vec<_>>>()?;
        let mut seen = BTreeSet::new();
        let injective = table.iter().all(|e| seen.insert(e.clone()));
        Ok(PointMap {
            domain,
            codomain,
            table,
            injective,
            construction: None,
        })
    }

    /// The identity map on a finite group.
    pub fn identity(spec: GroupSpec) -> Result<PointMap> {
        let table: Vec<GroupElement> = spec.elements()?.collect();
        PointMap::from_table(spec.clone(), spec, table)
    }

    pub fn domain(&self) -> &GroupSpec {
        &self.domain
    }

    pub fn codomain(&self) -> &GroupSpec {
        &self.codomain
    }

    pub fn table(&self) -> &[GroupElement] {
        &self.table
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn construction(&self) -> Option<Construction> {
        self.construction
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        let r = self.domain.rank(x)? as usize;
        Ok(self.table[r].clone())
    }

    /// Exact count of ordered pairs `(a, b)` with `f(a+b) = f(a) + f(b)`.
    ///
    /// The double loop is sharded by the first coordinate's rank; the sum
    /// reduction makes the result independent of the shard schedule.
    pub fn agreement_probability(&self) -> AgreementReport {
        let n = self.table.len();
        let elems: Vec<GroupElement> = self
            .domain
            .elements()
            .expect("table-backed maps have small finite domains")
            .collect();
        let good: u64 = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut count = 0u64;
                for b in 0..n {
                    let s = self.domain.add(&elems[a], &elems[b]).expect("same spec");
                    let sr = self.domain.rank(&s).expect("canonical rank") as usize;
                    let fsum = self
                        .codomain
                        .add(&self.table[a], &self.table[b])
                        .expect("same spec");
                    if fsum == self.table[sr] {
                        count += 1;
                    }
                }
                count
            })
            .sum();
        AgreementReport::new(good, n as u64)
    }

    /// The graph `{(x, f(x)) : x in G}` as a set in `G x H`.
    pub fn graph(&self) -> ElementSet {
        let product = self.domain.direct_product(&self.codomain);
        let elems = self
            .domain
            .elements()
            .expect("table-backed maps have small finite domains");
        let mut graph = ElementSet::empty(product.clone());
        for (x, fx) in elems.zip(&self.table) {
            let mut coords = x.into_coords();
            coords.extend_from_slice(fx.coords());
            graph
                .insert(product.element(coords).expect("canonical coordinates"))
                .expect("same spec");
        }
        graph
    }

    /// The swapped graph `{(f(x), x)}` in `H x G`; requires injectivity.
    pub fn swap_graph(&self) -> Result<ElementSet> {
        if !self.injective {
            return Err(Error::NotInjective);
        }
        let product = self.codomain.direct_product(&self.domain);
        let elems = self
            .domain
            .elements()
            .expect("table-backed maps have small finite domains");
        let mut graph = ElementSet::empty(product.clone());
        for (x, fx) in elems.zip(&self.table) {
            let mut coords = fx.coords().to_vec();
            coords.extend_from_slice(x.coords());
            graph.insert(product.element(coords)?)?;
        }
        Ok(graph)
    }

    /// Table composition: applies `self` first, then `g`. Requires
    /// `self`'s codomain to equal `g`'s domain.
    pub fn compose(&self, g: &PointMap) -> Result<PointMap> {
        if self.codomain != g.domain {
            return Err(Error::SpecMismatch(
                self.codomain.to_string(),
                g.domain.to_string(),
            ));
        }
        let table = self
            .table
            .iter()
            .map(|e| g.apply(e))
            .collect::<Result<Vec<_>>>()?;
        PointMap::from_table(self.domain.clone(), g.codomain.clone(), table)
    }

    /// Rewrites every table value through `f` into a new codomain; the
    /// results are canonicalized there. Clears any construction tag.
    pub fn map_values<F>(&self, codomain: GroupSpec, f: F) -> Result<PointMap>
    where
        F: Fn(&GroupElement) -> Vec<i64>,
    {
        let table = self
            .table
            .iter()
            .map(|e| codomain.element(f(e)))
            .collect::<Result<Vec<_>>>()?;
        PointMap::from_table(self.domain.clone(), codomain, table)
    }

    pub fn to_json(&self) -> Value {
        let construction = match self.construction {
            Some(Construction::BinaryEmbedding { n, p }) => {
                json!({"kind": "binary", "n": n, "p": p})
            }
            Some(Construction::CenteredUnwrap { p, q }) => {
                json!({"kind": "unwrap", "p": p, "q": q})
            }
            None => Value::Null,
        };
        json!({
            "domain": self.domain.to_string(),
            "codomain": self.codomain.to_string(),
            "table": self.table.iter().map(|e| e.coords().to_vec()).collect::<Vec<_>>(),
            "injective": self.injective,
            "construction": construction,
        })
    }

    pub fn from_json(v: &Value) -> Result<PointMap> {
        let domain: GroupSpec = v
            .get("domain")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidParameter("map json needs a 'domain' string".into()))?
            .parse()?;
        let codomain: GroupSpec = v
            .get("codomain")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidParameter("map json needs a 'codomain' string".into()))?
            .parse()?;
        let arr = v
            .get("table")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidParameter("map json needs a 'table' array".into()))?;
        let mut table = Vec::with_capacity(arr.len());
        for row in arr {
            let coords = row
                .as_array()
                .ok_or_else(|| Error::InvalidParameter("table entry must be an array".into()))?
                .iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| Error::InvalidParameter("coordinate must be an i64".into()))
                })
                .collect::<Result<Vec<i64>>>()?;
            table.push(codomain.element(coords)?);
        }
        let mut map = PointMap::from_table(domain, codomain, table)?;
        // A construction tag is only restored after re-deriving the recipe
        // and checking it reproduces the stored table.
        if let Some(c) = v.get("construction").filter(|c| !c.is_null()) {
            let kind = c.get("kind").and_then(Value::as_str).unwrap_or("");
            let rebuilt = match kind {
                "binary" => {
                    let n = c.get("n").and_then(Value::as_u64).unwrap_or(0) as u32;
                    let p = c.get("p").and_then(Value::as_u64).unwrap_or(0);
                    binary_embedding(n, p)?
                }
                "unwrap" => {
                    let p = c.get("p").and_then(Value::as_u64).unwrap_or(0);
                    let q = c.get("q").and_then(Value::as_u64).unwrap_or(0);
                    centered_unwrap(p, q)?
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown construction kind '{other}'"
                    )))
                }
            };
            if rebuilt.table != map.table
                || rebuilt.domain != map.domain
                || rebuilt.codomain != map.codomain
            {
                return Err(Error::InvalidParameter(
                    "construction tag does not reproduce the stored table".into(),
                ));
            }
            map.construction = rebuilt.construction;
        }
        Ok(map)
    }
}

/// The binary embedding `(Z/2Z)^n -> Z/pZ`,
/// `(x_1, ..., x_n) -> x_1 + 2 x_2 + ... + 2^(n-1) x_n (mod p)`.
/// Injective whenever `p > 2^n`, which is required here.
pub fn binary_embedding(n: u32, p: u64) -> Result<PointMap> {
    if n == 0 || n > 22 {
        return Err(Error::InvalidParameter(format!(
            "binary embedding needs 1 <= n <= 22, got {n}"
        )));
    }
    if !primes::is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
    }
    if p <= 1u64 << n {
        return Err(Error::InvalidParameter(format!(
            "binary embedding needs p > 2^n, got p = {p}, n = {n}"
        )));
    }
    let domain = GroupSpec::repeated(2, n as usize)?;
    let codomain = GroupSpec::cyclic(p)?;
    let mut table = Vec::with_capacity(1usize << n);
    for x in domain.elements()? {
        let value: i64 = x
            .coords()
            .iter()
            .enumerate()
            .map(|(i, &bit)| bit << i)
            .sum();
        table.push(codomain.element(vec![value])?);
    }
    let mut map = PointMap::from_table(domain, codomain, table)?;
    map.construction = Some(Construction::BinaryEmbedding { n, p });
    Ok(map)
}

/// For a binary-embedding map, the defect `f(x) + f(y) - f(x+y)`.
///
/// It equals `2 x_1 y_1 + 4 x_2 y_2 + ... + 2^n x_n y_n (mod p)` and
/// vanishes exactly when the supports of `x` and `y` are disjoint, i.e.
/// when adding `f(x)` and `f(y)` in binary makes no carry.
pub fn carry_defect(f: &PointMap, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
    match f.construction {
        Some(Construction::BinaryEmbedding { .. }) => {}
        _ => return Err(Error::WrongConstruction),
    }
    let fx = f.apply(x)?;
    let fy = f.apply(y)?;
    let sum = f.domain.add(x, y)?;
    let fsum = f.apply(&sum)?;
    let total = f.codomain.add(&fx, &fy)?;
    f.codomain.sub(&total, &fsum)
}

/// The representative of `residue (mod p)` in the centered window
/// `(-p/2, p/2]`; `residue` must already be canonical in `[0, p)`.
pub fn centered_representative(p: u64, residue: i64) -> i64 {
    let half = ((p - 1) / 2) as i64;
    if residue <= half {
        residue
    } else {
        residue - p as i64
    }
}

/// The unwrapping `Z/pZ -> Z` through centered representatives; an
/// injective map into the infinite cyclic group.
pub fn centered_lift(p: u64) -> Result<PointMap> {
    if p < 3 || p.is_multiple_of(2) || !primes::is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "centered lift needs an odd prime, got {p}"
        )));
    }
    let domain = GroupSpec::cyclic(p)?;
    let codomain = GroupSpec::cyclic(0)?;
    let mut table = Vec::with_capacity(p as usize);
    for x in domain.elements()? {
        table.push(codomain.element(vec![centered_representative(p, x.coords()[0])])?);
    }
    PointMap::from_table(domain, codomain, table)
}

/// Centered unwrapping `Z/pZ -> Z/qZ` for primes `q > p`: the composition
/// of [`centered_lift`] with the natural projection `Z -> Z/qZ`.
pub fn centered_unwrap(p: u64, q: u64) -> Result<PointMap> {
    if !primes::is_prime(q) {
        return Err(Error::InvalidParameter(format!("q = {q} is not prime")));
    }
    let lift = centered_lift(p)?;
    if q <= p {
        return Err(Error::InvalidParameter(format!(
            "centered unwrapping needs q > p, got p = {p}, q = {q}"
        )));
    }
    let mut map = lift.map_values(GroupSpec::cyclic(q)?, |z| vec![z.coords()[0]])?;
    map.construction = Some(Construction::CenteredUnwrap { p, q });
    Ok(map)
}
