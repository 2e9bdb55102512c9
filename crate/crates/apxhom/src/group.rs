//! Finitely generated Abelian groups presented as direct sums of cyclic
//! factors, together with canonical element arithmetic and mixed-radix
//! ranking.
//!
//! A group is described by an ordered list of moduli: an entry `d >= 2`
//! stands for the finite cyclic factor `Z/dZ`, an entry `0` for an infinite
//! cyclic factor `Z`. Elements are coordinate vectors stored in canonical
//! form: coordinate `i` lies in `[0, d_i)` when `d_i > 0` and is an
//! arbitrary integer when `d_i = 0`.
//!
//! The text format accepted by [`GroupSpec::from_str`] is a bracketed,
//! comma-separated list with `^` shorthand for repeated factors:
//! `[2^4]` is `(Z/2Z)^4`, `[4,0]` is `(Z/4Z) x Z`, `[]` is the trivial
//! group.

use std::fmt;
use std::str::FromStr;

use num::{BigUint, Integer, One};

use crate::error::{Error, Result};
use crate::primes;
use crate::sets::ElementSet;

/// Largest repeat count accepted by the `d^k` shorthand.
const MAX_REPEAT: u64 = 4096;

/// Largest set the whole-group materializers (kernel, dilation image) will
/// build eagerly.
const MAX_MATERIALIZE: u64 = 1 << 24;

/// An Abelian group given as an ordered direct sum of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    moduli: Vec<u64>,
}

/// An element of a [`GroupSpec`], stored as a canonical coordinate vector.
///
/// Elements do not carry a reference to their group; all arithmetic goes
/// through the owning spec. The derived `Ord` is lexicographic on
/// coordinates and is used as the canonical order for sparse sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl GroupSpec {
    /// Builds a spec from raw moduli. Entries must be `0` or in `[2, 2^63)`.
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        for &d in &moduli {
            if d == 1 || d > i64::MAX as u64 {
                return Err(Error::BadModulus(d));
            }
        }
        Ok(GroupSpec { moduli })
    }

    /// The trivial group `[]`.
    pub fn trivial() -> Self {
        GroupSpec { moduli: Vec::new() }
    }

    /// A single cyclic factor `Z/dZ` (or `Z` for `d = 0`).
    pub fn cyclic(d: u64) -> Result<Self> {
        Self::new(vec![d])
    }

    /// `n` copies of `Z/dZ`, e.g. `repeated(2, 4)` is `(Z/2Z)^4`.
    pub fn repeated(d: u64, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn is_finite(&self) -> bool {
        self.moduli.iter().all(|&d| d != 0)
    }

    /// Exact order; `None` when the group has an infinite factor.
    pub fn order(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        Some(self.moduli.iter().map(|&d| BigUint::from(d)).product())
    }

    /// Order as `u64` when finite and small enough; `None` otherwise.
    pub fn small_order(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for &d in &self.moduli {
            if d == 0 {
                return None;
            }
            acc = acc.checked_mul(d)?;
        }
        Some(acc)
    }

    /// Group exponent (lcm of the finite factor moduli); `None` when an
    /// infinite factor is present.
    pub fn exponent(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        let mut acc = BigUint::one();
        for &d in &self.moduli {
            acc = acc.lcm(&BigUint::from(d));
        }
        Some(acc)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.moduli.len()],
        }
    }

    /// Canonicalizes a coordinate vector into an element of this group.
    pub fn element(&self, coords: Vec<i64>) -> Result<GroupElement> {
        self.check_len(coords.len())?;
        let reduced = coords
            .into_iter()
            .zip(&self.moduli)
            .map(|(c, &d)| reduce_coord(d, c))
            .collect();
        Ok(GroupElement { coords: reduced })
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.moduli.len() {
            return Err(Error::LengthMismatch {
                got,
                want: self.moduli.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check_len(x.coords.len())?;
        self.check_len(y.coords.len())?;
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .zip(&self.moduli)
            .map(|((&a, &b), &d)| {
                if d == 0 {
                    a.checked_add(b).expect("Z-coordinate overflow in add")
                } else {
                    ((a as i128 + b as i128).rem_euclid(d as i128)) as i64
                }
            })
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement> {
        self.scalar_mul(-1, x)
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let ny = self.neg(y)?;
        self.add(x, &ny)
    }

    /// `r * x` with `r` reduced canonically per factor; negative `r` allowed.
    pub fn scalar_mul(&self, r: i64, x: &GroupElement) -> Result<GroupElement> {
        self.check_len(x.coords.len())?;
        let coords = x
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&a, &d)| {
                if d == 0 {
                    r.checked_mul(a).expect("Z-coordinate overflow in scalar_mul")
                } else {
                    let d = d as i128;
                    (((r as i128) % d) * (a as i128)).rem_euclid(d) as i64
                }
            })
            .collect();
        Ok(GroupElement { coords })
    }

    /// Mixed-radix rank of a canonical element; the first modulus varies
    /// fastest. Requires a finite group whose order fits in `u64`.
    pub fn rank(&self, x: &GroupElement) -> Result<u64> {
        self.check_len(x.coords.len())?;
        let _ = self.rankable_order()?;
        let mut acc: u64 = 0;
        let mut stride: u64 = 1;
        for (&c, &d) in x.coords.iter().zip(&self.moduli) {
            acc += c as u64 * stride;
            stride *= d;
        }
        Ok(acc)
    }

    /// Inverse of [`GroupSpec::rank`].
    pub fn unrank(&self, k: u64) -> Result<GroupElement> {
        let order = self.rankable_order()?;
        if k >= order {
            return Err(Error::RankOutOfRange(k, order));
        }
        let mut rest = k;
        let coords = self
            .moduli
            .iter()
            .map(|&d| {
                let c = (rest % d) as i64;
                rest /= d;
                c
            })
            .collect();
        Ok(GroupElement { coords })
    }

    fn rankable_order(&self) -> Result<u64> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup(self.to_string()));
        }
        self.small_order()
            .ok_or_else(|| Error::TooLarge(format!("order of {self} exceeds u64")))
    }

    /// Iterates the whole group in rank order. Finite small groups only.
    pub fn elements(&self) -> Result<ElementIter<'_>> {
        let order = self.rankable_order()?;
        Ok(ElementIter {
            spec: self,
            next: 0,
            order,
        })
    }

    /// Concatenation `self x other`, with `self`'s factors first.
    pub fn direct_product(&self, other: &GroupSpec) -> GroupSpec {
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&other.moduli);
        GroupSpec { moduli }
    }

    /// `|K_{G,r}|`, the size of the kernel of multiplication by `r`.
    pub fn kernel_size(&self, r: i64) -> Result<BigUint> {
        let mut acc = BigUint::one();
        for &d in &self.moduli {
            if d == 0 {
                if r == 0 {
                    return Err(Error::InvalidParameter(
                        "kernel of r = 0 on an infinite factor is infinite".into(),
                    ));
                }
                // kernel of x -> rx on Z is trivial for r != 0
            } else {
                acc *= BigUint::from(primes::gcd_u64(r.unsigned_abs(), d));
            }
        }
        Ok(acc)
    }

    /// Materializes the kernel subgroup `K_{G,r} = {x : rx = 0}`.
    pub fn kernel_subgroup(&self, r: i64) -> Result<ElementSet> {
        let factor_values: Vec<Vec<i64>> = self
            .moduli
            .iter()
            .map(|&d| -> Result<Vec<i64>> {
                if d == 0 {
                    if r == 0 {
                        return Err(Error::InvalidParameter(
                            "kernel of r = 0 on an infinite factor is infinite".into(),
                        ));
                    }
                    Ok(vec![0])
                } else {
                    let g = primes::gcd_u64(r.unsigned_abs(), d);
                    let step = (d / g) as i64;
                    Ok((0..g as i64).map(|k| k * step).collect())
                }
            })
            .collect::<Result<_>>()?;
        self.materialize_product(&factor_values)
    }

    /// `|r.G|`, the size of the image subgroup of multiplication by `r`.
    /// Finite groups only.
    pub fn dilate_image_size(&self, r: i64) -> Result<BigUint> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup(self.to_string()));
        }
        let mut acc = BigUint::one();
        for &d in &self.moduli {
            let g = primes::gcd_u64(r.unsigned_abs(), d);
            acc *= BigUint::from(d / g);
        }
        Ok(acc)
    }

    /// Materializes the image subgroup `r.G = {rx : x in G}`. Finite groups
    /// only.
    pub fn dilate_image(&self, r: i64) -> Result<ElementSet> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup(self.to_string()));
        }
        let factor_values: Vec<Vec<i64>> = self
            .moduli
            .iter()
            .map(|&d| {
                let g = primes::gcd_u64(r.unsigned_abs(), d) as i64;
                (0..(d as i64) / g).map(|k| k * g).collect()
            })
            .collect();
        self.materialize_product(&factor_values)
    }

    fn materialize_product(&self, factor_values: &[Vec<i64>]) -> Result<ElementSet> {
        let mut size: u64 = 1;
        for v in factor_values {
            size = size
                .checked_mul(v.len() as u64)
                .filter(|&s| s <= MAX_MATERIALIZE)
                .ok_or_else(|| {
                    Error::TooLarge(format!("subgroup of {self} too large to materialize"))
                })?;
        }
        let mut coords: Vec<Vec<i64>> = vec![Vec::new()];
        for values in factor_values {
            let mut next = Vec::with_capacity(coords.len() * values.len());
            for &v in values {
                for prefix in &coords {
                    let mut c = prefix.clone();
                    c.push(v);
                    next.push(c);
                }
            }
            coords = next;
        }
        let elements = coords
            .into_iter()
            .map(|c| self.element(c))
            .collect::<Result<Vec<_>>>()?;
        ElementSet::from_elements(self.clone(), elements)
    }

    /// Canonical isomorphic presentation: finite factors merged into a
    /// divisibility chain `d_1 | d_2 | ... | d_n`, followed by the infinite
    /// factors. Idempotent.
    pub fn invariant_factors(&self) -> Result<GroupSpec> {
        use std::collections::BTreeMap;
        let mut exps: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        let mut zeros = 0usize;
        for &d in &self.moduli {
            if d == 0 {
                zeros += 1;
                continue;
            }
            for (p, e) in primes::factorize(d) {
                exps.entry(p).or_default().push(e);
            }
        }
        for v in exps.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        let slots = exps.values().map(|v| v.len()).max().unwrap_or(0);
        let mut chain = Vec::with_capacity(slots + zeros);
        for slot in 0..slots {
            let mut entry: u64 = 1;
            for (&p, v) in &exps {
                if let Some(&e) = v.get(slot) {
                    entry = p
                        .checked_pow(e)
                        .and_then(|pe| entry.checked_mul(pe))
                        .ok_or_else(|| {
                            Error::TooLarge(format!(
                                "invariant factor of {self} does not fit in u64"
                            ))
                        })?;
                }
            }
            chain.push(entry);
        }
        chain.reverse();
        chain.extend(std::iter::repeat_n(0, zeros));
        GroupSpec::new(chain)
    }
}

/// Rank-order iterator over a finite group.
pub struct ElementIter<'a> {
    spec: &'a GroupSpec,
    next: u64,
    order: u64,
}

impl Iterator for ElementIter<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        if self.next >= self.order {
            return None;
        }
        let el = self.spec.unrank(self.next).expect("in-range rank");
        self.next += 1;
        Some(el)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.order - self.next) as usize;
        (left, Some(left))
    }
}

fn reduce_coord(d: u64, c: i64) -> i64 {
    if d == 0 {
        c
    } else {
        c.rem_euclid(d as i64)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let mut i = 0;
        let mut first = true;
        while i < self.moduli.len() {
            let d = self.moduli[i];
            let mut run = 1;
            while i + run < self.moduli.len() && self.moduli[i + run] == d {
                run += 1;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{d}^{run}")?;
            } else {
                write!(f, "{d}")?;
            }
            i += run;
        }
        write!(f, "]")
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupSpec> {
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let err = |pos: usize, msg: &str| Error::SpecParse {
            pos,
            msg: msg.to_string(),
        };
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let parse_uint = |pos: &mut usize| -> Result<u64> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == start {
                let token = s[start..].chars().next().map(String::from);
                return Err(err(
                    start,
                    &format!(
                        "expected a number, found {}",
                        token.as_deref().unwrap_or("end of input")
                    ),
                ));
            }
            s[start..*pos]
                .parse::<u64>()
                .map_err(|_| err(start, &format!("number '{}' out of range", &s[start..*pos])))
        };

        skip_ws(&mut pos);
        if pos >= bytes.len() || bytes[pos] != b'[' {
            return Err(err(pos, "expected '['"));
        }
        pos += 1;
        let mut moduli = Vec::new();
        skip_ws(&mut pos);
        if pos < bytes.len() && bytes[pos] == b']' {
            pos += 1;
        } else {
            loop {
                skip_ws(&mut pos);
                let entry_pos = pos;
                let d = parse_uint(&mut pos)?;
                if d == 1 {
                    return Err(err(entry_pos, "modulus 1 is not a valid cyclic factor"));
                }
                if d > i64::MAX as u64 {
                    return Err(err(entry_pos, &format!("modulus {d} too large")));
                }
                skip_ws(&mut pos);
                let mut repeat = 1u64;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let rep_pos = pos;
                    repeat = parse_uint(&mut pos)?;
                    if repeat == 0 || repeat > MAX_REPEAT {
                        return Err(err(rep_pos, &format!("repeat count {repeat} out of range")));
                    }
                    skip_ws(&mut pos);
                }
                moduli.extend(std::iter::repeat_n(d, repeat as usize));
                if pos < bytes.len() && bytes[pos] == b',' {
                    pos += 1;
                    continue;
                }
                if pos < bytes.len() && bytes[pos] == b']' {
                    pos += 1;
                    break;
                }
                let token = s[pos..].chars().next().map(String::from);
                return Err(err(
                    pos,
                    &format!(
                        "expected ',' or ']', found {}",
                        token.as_deref().unwrap_or("end of input")
                    ),
                ));
            }
        }
        skip_ws(&mut pos);
        if pos != bytes.len() {
            return Err(err(pos, &format!("trailing input '{}'", &s[pos..])));
        }
        GroupSpec::new(moduli)
    }
}
