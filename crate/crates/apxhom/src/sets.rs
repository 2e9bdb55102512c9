//! Finite subsets of a group and the sumset calculus over them: sumsets,
//! difference sets, dilations, iterated sumsets, triple correlation and
//! additive energy. All counts are exact.
//!
//! A set is stored either densely (bit-indexed by rank, for finite groups
//! of order at most 2^24) or sparsely (ordered canonical coordinate
//! vectors, required when the ambient group has an infinite factor). The
//! two representations are interchangeable and compare equal.

use std::collections::{BTreeSet, HashMap};

use num::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

/// Groups up to this order get dense bit-indexed storage.
pub const DENSE_LIMIT: u64 = 1 << 24;

/// Histogram-based counting uses a flat array up to this order and exact
/// hash-bucket accumulation above it.
const HISTOGRAM_ARRAY_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone)]
enum Storage {
    Dense { bits: Vec<u64>, len: usize },
    Sparse(BTreeSet<GroupElement>),
}

/// A finite subset of a [`GroupSpec`].
#[derive(Debug, Clone)]
pub struct ElementSet {
    spec: GroupSpec,
    storage: Storage,
}

impl ElementSet {
    /// Empty set with automatically selected storage.
    pub fn empty(spec: GroupSpec) -> Self {
        let storage = match spec.small_order() {
            Some(n) if n <= DENSE_LIMIT => Storage::Dense {
                bits: vec![0u64; (n as usize).div_ceil(64)],
                len: 0,
            },
            _ => Storage::Sparse(BTreeSet::new()),
        };
        ElementSet { spec, storage }
    }

    /// Empty set forced to the sparse representation (useful as an oracle
    /// against the dense paths).
    pub fn empty_sparse(spec: GroupSpec) -> Self {
        ElementSet {
            spec,
            storage: Storage::Sparse(BTreeSet::new()),
        }
    }

    pub fn from_elements<I>(spec: GroupSpec, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        let mut set = ElementSet::empty(spec);
        for el in elements {
            set.insert(el)?;
        }
        Ok(set)
    }

    pub fn from_coords(spec: GroupSpec, coords: Vec<Vec<i64>>) -> Result<Self> {
        let elements = coords
            .into_iter()
            .map(|c| spec.element(c))
            .collect::<Result<Vec<_>>>()?;
        ElementSet::from_elements(spec, elements)
    }

    pub fn singleton(spec: GroupSpec, el: GroupElement) -> Result<Self> {
        ElementSet::from_elements(spec, [el])
    }

    /// The whole group as a set. Finite groups of order `<= 2^24` only.
    pub fn full(spec: GroupSpec) -> Result<Self> {
        let n = spec
            .small_order()
            .filter(|&n| n <= DENSE_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("cannot materialize all of {spec}")))?;
        let mut bits = vec![u64::MAX; (n as usize).div_ceil(64)];
        let extra = (bits.len() * 64) as u64 - n;
        if extra > 0 {
            let last = bits.len() - 1;
            bits[last] >>= extra;
        }
        Ok(ElementSet {
            spec,
            storage: Storage::Dense {
                bits,
                len: n as usize,
            },
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        match &self.storage {
            Storage::Dense { len, .. } => *len,
            Storage::Sparse(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense { .. })
    }

    /// Canonicalizes and inserts; returns whether the element was new.
    pub fn insert(&mut self, el: GroupElement) -> Result<bool> {
        let el = self.spec.element(el.into_coords())?;
        Ok(self.insert_canonical(el))
    }

    fn insert_canonical(&mut self, el: GroupElement) -> bool {
        match &mut self.storage {
            Storage::Dense { bits, len } => {
                let r = self.spec.rank(&el).expect("canonical element rank") as usize;
                let (w, b) = (r / 64, r % 64);
                let newly = bits[w] & (1 << b) == 0;
                bits[w] |= 1 << b;
                if newly {
                    *len += 1;
                }
                newly
            }
            Storage::Sparse(s) => s.insert(el),
        }
    }

    /// Membership of a canonical element.
    pub fn contains(&self, el: &GroupElement) -> bool {
        if el.coords().len() != self.spec.moduli().len() {
            return false;
        }
        match &self.storage {
            Storage::Dense { bits, .. } => {
                // an element canonical for a different same-length spec
                // would alias a rank; reject it instead
                if !el
                    .coords()
                    .iter()
                    .zip(self.spec.moduli())
                    .all(|(&c, &d)| c >= 0 && (c as u64) < d)
                {
                    return false;
                }
                let r = self.spec.rank(el).expect("canonical element rank") as usize;
                bits[r / 64] & (1 << (r % 64)) != 0
            }
            Storage::Sparse(s) => s.contains(el),
        }
    }

    /// All elements, in the storage's canonical order (rank order for
    /// dense, lexicographic for sparse).
    pub fn elements(&self) -> Vec<GroupElement> {
        match &self.storage {
            Storage::Dense { bits, .. } => {
                let mut out = Vec::with_capacity(self.len());
                for (w, &word) in bits.iter().enumerate() {
                    let mut word = word;
                    while word != 0 {
                        let b = word.trailing_zeros() as usize;
                        word &= word - 1;
                        let rank = (w * 64 + b) as u64;
                        out.push(self.spec.unrank(rank).expect("in-range rank"));
                    }
                }
                out
            }
            Storage::Sparse(s) => s.iter().cloned().collect(),
        }
    }

    pub fn to_sparse(&self) -> ElementSet {
        let mut out = ElementSet::empty_sparse(self.spec.clone());
        for el in self.elements() {
            out.insert_canonical(el);
        }
        out
    }

    pub fn to_dense(&self) -> Result<ElementSet> {
        let n = self
            .spec
            .small_order()
            .filter(|&n| n <= DENSE_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("{} has no dense form", self.spec)))?;
        let mut out = ElementSet {
            spec: self.spec.clone(),
            storage: Storage::Dense {
                bits: vec![0u64; (n as usize).div_ceil(64)],
                len: 0,
            },
        };
        for el in self.elements() {
            out.insert_canonical(el);
        }
        Ok(out)
    }

    fn check_same_spec(&self, other: &ElementSet) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(
                self.spec.to_string(),
                other.spec.to_string(),
            ));
        }
        Ok(())
    }

    fn result_shell(&self, other: &ElementSet) -> ElementSet {
        if self.is_dense() && other.is_dense() {
            ElementSet::empty(self.spec.clone())
        } else {
            ElementSet::empty_sparse(self.spec.clone())
        }
    }

    /// `A + B = {a + b}`.
    pub fn sumset(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check_same_spec(other)?;
        let mut out = self.result_shell(other);
        let bs = other.elements();
        for a in self.elements() {
            for b in &bs {
                out.insert_canonical(self.spec.add(&a, b).expect("same spec"));
            }
        }
        Ok(out)
    }

    /// `A - B = {a - b}` (elementwise differences, not set subtraction).
    pub fn difference(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check_same_spec(other)?;
        let mut out = self.result_shell(other);
        let bs = other.elements();
        for a in self.elements() {
            for b in &bs {
                out.insert_canonical(self.spec.sub(&a, b).expect("same spec"));
            }
        }
        Ok(out)
    }

    /// Dilation `r.A = {ra : a in A}`; distinct from the iterated sumset.
    pub fn dilate(&self, r: i64) -> Result<ElementSet> {
        let mut out = if self.is_dense() {
            ElementSet::empty(self.spec.clone())
        } else {
            ElementSet::empty_sparse(self.spec.clone())
        };
        for a in self.elements() {
            out.insert_canonical(self.spec.scalar_mul(r, &a)?);
        }
        Ok(out)
    }

    /// Iterated sumset `kB = B + ... + B` (`k` summands, `k >= 1`).
    pub fn iterated_sumset(&self, k: u64) -> Result<ElementSet> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "iterated sumset needs k >= 1".into(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.sumset(self)?;
        }
        Ok(acc)
    }

    /// Set intersection (same spec required).
    pub fn intersect(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check_same_spec(other)?;
        let mut out = self.result_shell(other);
        for a in self.elements() {
            if other.contains(&a) {
                out.insert_canonical(a);
            }
        }
        Ok(out)
    }

    /// Set union (same spec required).
    pub fn union(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check_same_spec(other)?;
        let mut out = self.result_shell(other);
        for a in self.elements() {
            out.insert_canonical(a);
        }
        for b in other.elements() {
            out.insert_canonical(b);
        }
        Ok(out)
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        self.spec == other.spec && self.elements().iter().all(|e| other.contains(e))
    }

    /// Number of ordered pairs `(a, b) in A^2` with `a + b in A`. Equals
    /// `|A|^2` when `A` is a subgroup.
    pub fn triple_correlation(&self) -> BigUint {
        let els = self.elements();
        let mut count: u128 = 0;
        for a in &els {
            for b in &els {
                let s = self.spec.add(a, b).expect("same spec");
                if self.contains(&s) {
                    count += 1;
                }
            }
        }
        BigUint::from(count)
    }

    /// Additive energy: the number of quadruples `(x, y, z, w)` in
    /// `X x B x X x B` with `x + y = z + w`. Computed as the sum of squared
    /// convolution counts; exact integers in every path.
    pub fn additive_energy(&self, other: &ElementSet) -> Result<BigUint> {
        self.check_same_spec(other)?;
        let xs = self.elements();
        let bs = other.elements();
        let mut total: u128 = 0;
        match self.spec.small_order() {
            Some(n) if n <= HISTOGRAM_ARRAY_LIMIT => {
                let mut hist = vec![0u64; n as usize];
                for x in &xs {
                    for b in &bs {
                        let s = self.spec.add(x, b).expect("same spec");
                        hist[self.spec.rank(&s).expect("rank") as usize] += 1;
                    }
                }
                for c in hist {
                    total += c as u128 * c as u128;
                }
            }
            Some(_) => {
                // rank-keyed buckets, accumulated row by row
                let mut hist: HashMap<u64, u64> = HashMap::new();
                for x in &xs {
                    for b in &bs {
                        let s = self.spec.add(x, b).expect("same spec");
                        *hist.entry(self.spec.rank(&s).expect("rank")).or_insert(0) += 1;
                    }
                }
                for c in hist.into_values() {
                    total += c as u128 * c as u128;
                }
            }
            None => {
                let mut hist: HashMap<GroupElement, u64> = HashMap::new();
                for x in &xs {
                    for b in &bs {
                        let s = self.spec.add(x, b).expect("same spec");
                        *hist.entry(s).or_insert(0) += 1;
                    }
                }
                for c in hist.into_values() {
                    total += c as u128 * c as u128;
                }
            }
        }
        Ok(BigUint::from(total))
    }

    /// JSON form: the owning spec string plus a lexicographically sorted
    /// array of coordinate arrays.
    pub fn to_json(&self) -> Value {
        let mut els = self.elements();
        els.sort();
        json!({
            "spec": self.spec.to_string(),
            "elements": els.iter().map(|e| e.coords().to_vec()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<ElementSet> {
        let spec: GroupSpec = v
            .get("spec")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidParameter("set json needs a 'spec' string".into()))?
            .parse()?;
        let arr = v
            .get("elements")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidParameter("set json needs an 'elements' array".into()))?;
        let mut coords = Vec::with_capacity(arr.len());
        for item in arr {
            let row = item
                .as_array()
                .ok_or_else(|| Error::InvalidParameter("set element must be an array".into()))?
                .iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| Error::InvalidParameter("coordinate must be an i64".into()))
                })
                .collect::<Result<Vec<i64>>>()?;
            coords.push(row);
        }
        ElementSet::from_coords(spec, coords)
    }
}

impl PartialEq for ElementSet {
    fn eq(&self, other: &Self) -> bool {
        if self.spec != other.spec || self.len() != other.len() {
            return false;
        }
        match (&self.storage, &other.storage) {
            (Storage::Dense { bits: a, .. }, Storage::Dense { bits: b, .. }) => a == b,
            _ => self.elements().iter().all(|e| other.contains(e)),
        }
    }
}

impl Eq for ElementSet {}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn set(g: &GroupSpec, coords: &[&[i64]]) -> ElementSet {
        ElementSet::from_coords(g.clone(), coords.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    /// The d = 1 member of the torsion counterexample family, used in a few
    /// frozen examples below: A = (Z/4Z)x{0} u {0}x{1,2}, B = {0,1}x{0}.
    fn d1_sets() -> (GroupSpec, ElementSet, ElementSet) {
        let g = spec("[4,0]");
        let a = set(
            &g,
            &[&[0, 0], &[1, 0], &[2, 0], &[3, 0], &[0, 1], &[0, 2]],
        );
        let b = set(&g, &[&[0, 0], &[1, 0]]);
        (g, a, b)
    }

    #[test]
    fn sumset_examples() {
        let z5 = spec("[5]");
        let b = set(&z5, &[&[1], &[3], &[4]]);
        let zero = set(&z5, &[&[0]]);
        assert_eq!(zero.sumset(&b).unwrap(), b);

        let (_, a, b) = d1_sets();
        assert_eq!(a.sumset(&b).unwrap().len(), 8); // 2 * 4^1

        let s = set(&z5, &[&[1], &[2]]);
        assert_eq!(s.sumset(&s).unwrap(), set(&z5, &[&[2], &[3], &[4]]));
    }

    #[test]
    fn dilate_and_difference_examples() {
        let (_, a, b) = d1_sets();
        assert_eq!(a.dilate(2).unwrap().len(), 4); // 2 * 2^1
        let bb = b.difference(&b).unwrap();
        assert_eq!(bb.len(), 3);
        let g = spec("[4,0]");
        assert_eq!(bb, set(&g, &[&[0, 0], &[1, 0], &[3, 0]]));

        let z5 = spec("[5]");
        let s = set(&z5, &[&[0], &[1]]);
        assert_eq!(
            s.iterated_sumset(2).unwrap(),
            set(&z5, &[&[0], &[1], &[2]])
        );
        // dilate(r, A) is contained in the r-fold iterated sumset
        for r in 1..=4u64 {
            let d = s.dilate(r as i64).unwrap();
            let it = s.iterated_sumset(r).unwrap();
            assert!(d.is_subset_of(&it));
        }
    }

    #[test]
    fn triple_correlation_examples() {
        let z12 = spec("[12]");
        let sub = z12.dilate_image(3).unwrap(); // {0,3,6,9}, a subgroup
        assert_eq!(
            sub.triple_correlation(),
            BigUint::from(sub.len() * sub.len())
        );

        let g = spec("[2,3]");
        let gamma = set(&g, &[&[0, 0], &[1, 1]]);
        assert_eq!(gamma.triple_correlation(), BigUint::from(3u32));

        let empty = ElementSet::empty(spec("[5]"));
        assert_eq!(empty.triple_correlation(), BigUint::zero());
    }

    #[test]
    fn energy_examples() {
        let z5 = spec("[5]");
        let s = set(&z5, &[&[0], &[1]]);
        assert_eq!(s.additive_energy(&s).unwrap(), BigUint::from(6u32));

        let x = set(&z5, &[&[2]]);
        let b = set(&z5, &[&[0], &[1], &[3]]);
        assert_eq!(
            x.additive_energy(&b).unwrap(),
            BigUint::from(b.len() as u64)
        );

        let z12 = spec("[12]");
        let sub = z12.dilate_image(4).unwrap(); // {0,4,8}
        assert_eq!(
            sub.additive_energy(&sub).unwrap(),
            BigUint::from(27u32) // |S|^3
        );
    }

    #[test]
    fn spec_mismatch_is_rejected() {
        let a = ElementSet::empty(spec("[5]"));
        let b = ElementSet::empty(spec("[7]"));
        assert!(a.sumset(&b).is_err());
        assert!(a.additive_energy(&b).is_err());
    }

    #[test]
    fn empty_inputs_are_legal() {
        let g = spec("[6]");
        let e = ElementSet::empty(g.clone());
        let s = set(&g, &[&[1], &[2]]);
        assert!(e.sumset(&s).unwrap().is_empty());
        assert!(s.difference(&e).unwrap().is_empty());
        assert_eq!(e.additive_energy(&s).unwrap(), BigUint::zero());
        assert!(e.dilate(3).unwrap().is_empty());
    }

    fn random_set(rng: &mut ChaCha8Rng, g: &GroupSpec, max_size: usize) -> ElementSet {
        let n = g.small_order().unwrap();
        let size = rng.gen_range(0..=max_size.min(n as usize));
        let mut s = ElementSet::empty(g.clone());
        for _ in 0..size {
            let k = rng.gen_range(0..n);
            s.insert(g.unrank(k).unwrap()).unwrap();
        }
        s
    }

    /// Quadruple-loop oracle for additive energy, independent of the
    /// histogram implementation.
    fn energy_oracle(x: &ElementSet, b: &ElementSet) -> BigUint {
        let xs = x.elements();
        let bs = b.elements();
        let g = x.spec();
        let mut count: u64 = 0;
        for x1 in &xs {
            for y in &bs {
                let s1 = g.add(x1, y).unwrap();
                for z in &xs {
                    for w in &bs {
                        if g.add(z, w).unwrap() == s1 {
                            count += 1;
                        }
                    }
                }
            }
        }
        BigUint::from(count)
    }

    #[test]
    fn dense_and_sparse_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let specs = ["[8]", "[2,2,2]", "[4,5]", "[3,3]", "[24]"];
        for trial in 0..10_000 {
            let g = spec(specs[trial % specs.len()]);
            let a = random_set(&mut rng, &g, 10);
            let b = random_set(&mut rng, &g, 10);
            let (sa, sb) = (a.to_sparse(), b.to_sparse());
            assert!(!sa.is_dense() && !sb.is_dense());
            let dense = a.sumset(&b).unwrap();
            let sparse = sa.sumset(&sb).unwrap();
            assert!(dense.is_dense() && !sparse.is_dense());
            assert_eq!(dense, sparse);
            assert_eq!(
                a.additive_energy(&b).unwrap(),
                sa.additive_energy(&sb).unwrap()
            );
            assert_eq!(a.triple_correlation(), sa.triple_correlation());
        }
    }

    #[test]
    fn energy_matches_quadruple_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for trial in 0..300 {
            let g = spec(["[7]", "[2,4]", "[3,3]"][trial % 3]);
            let x = random_set(&mut rng, &g, 6);
            let b = random_set(&mut rng, &g, 6);
            assert_eq!(x.additive_energy(&b).unwrap(), energy_oracle(&x, &b));
        }
    }

    #[test]
    fn sumset_laws_and_growth() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..500 {
            let g = spec(["[12]", "[2,2,3]", "[5,5]"][trial % 3]);
            let a = random_set(&mut rng, &g, 8);
            let b = random_set(&mut rng, &g, 8);
            let c = random_set(&mut rng, &g, 8);
            let ab = a.sumset(&b).unwrap();
            assert_eq!(ab, b.sumset(&a).unwrap());
            assert_eq!(
                ab.sumset(&c).unwrap(),
                a.sumset(&b.sumset(&c).unwrap()).unwrap()
            );
            if !a.is_empty() && !b.is_empty() {
                assert!(ab.len() >= a.len().max(b.len()));
            }
        }
    }

    #[test]
    fn cauchy_schwarz_energy_bound() {
        // energy(X, r.B) * |X + r.B| >= (|X| |r.B|)^2
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for trial in 0..2000 {
            let g = spec(["[16]", "[4,4]", "[2,3,5]"][trial % 3]);
            let x = random_set(&mut rng, &g, 8);
            let b = random_set(&mut rng, &g, 8);
            let r = rng.gen_range(1..=5i64);
            let rb = b.dilate(r).unwrap();
            if x.is_empty() || rb.is_empty() {
                continue;
            }
            let e = x.additive_energy(&rb).unwrap();
            let s = x.sumset(&rb).unwrap();
            let lhs = e * BigUint::from(s.len() as u64);
            let prod = BigUint::from((x.len() * rb.len()) as u64);
            assert!(lhs >= &prod * &prod);
        }
    }

    #[test]
    fn json_roundtrip() {
        let (_, a, _) = d1_sets();
        let v = a.to_json();
        let back = ElementSet::from_json(&v).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_json(), v);
    }
}
