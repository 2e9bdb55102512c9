//! Exact evaluation of the agreement-probability bound expressions.
//!
//! For an injection between finite Abelian groups the bound has the shape
//! `base^alpha` with
//!
//! ```text
//! base  = min{ |r.G| |K_{H,r}|, |r.H| |K_{G,r}| } / |G|
//! alpha = max{ 1/(5r+1), 1/(18 floor(log2 r) + 7) }
//! ```
//!
//! and the per-prime exponent constant is `c(r) = log2(r) * alpha(r)`.
//! Every comparison involving `log2` is carried out exactly by integer
//! cross-powering; floating point appears only in display helpers.

use std::cmp::Ordering;

use num::traits::Pow;
use num::{BigInt, BigRational, BigUint, One, Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::primes;

/// Which of the two products realized the minimum in the bound base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinSide {
    /// `|r.G| |K_{H,r}|` won (ties resolve here).
    DomainDilated,
    /// `|r.H| |K_{G,r}|` won.
    CodomainDilated,
}

impl MinSide {
    pub fn as_str(self) -> &'static str {
        match self {
            MinSide::DomainDilated => "domain_dilated",
            MinSide::CodomainDilated => "codomain_dilated",
        }
    }
}

/// `alpha(r) = max{1/(5r+1), 1/(18 floor(log2 r) + 7)}` for `r >= 1`.
pub fn theorem_alpha(r: u64) -> Result<BigRational> {
    if r == 0 {
        return Err(Error::InvalidParameter("alpha needs r >= 1".into()));
    }
    let linear = 5u128 * r as u128 + 1;
    let logarithmic = 18u128 * r.ilog2() as u128 + 7;
    let denom = linear.min(logarithmic);
    Ok(BigRational::new(
        BigInt::one(),
        BigInt::from(denom as i128),
    ))
}

/// `min{|r.G||K_{H,r}|, |r.H||K_{G,r}|} / |G|` for finite `G`, `H`.
pub fn theorem_base(g: &GroupSpec, h: &GroupSpec, r: u64) -> Result<(BigRational, MinSide)> {
    if r == 0 {
        return Err(Error::InvalidParameter("base needs r >= 1".into()));
    }
    if !g.is_finite() || !h.is_finite() {
        return Err(Error::InfiniteGroup(if g.is_finite() {
            h.to_string()
        } else {
            g.to_string()
        }));
    }
    let r_i = i64::try_from(r)
        .map_err(|_| Error::InvalidParameter(format!("r = {r} out of range")))?;
    let first = g.dilate_image_size(r_i)? * h.kernel_size(r_i)?;
    let second = h.dilate_image_size(r_i)? * g.kernel_size(r_i)?;
    let (min, side) = if first <= second {
        (first, MinSide::DomainDilated)
    } else {
        (second, MinSide::CodomainDilated)
    };
    let base = BigRational::new(
        BigInt::from(min),
        BigInt::from(g.order().expect("finite group")),
    );
    Ok((base, side))
}

/// A full bound evaluation for one `r`.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub r: u64,
    pub alpha: BigRational,
    pub base: BigRational,
    /// `base^alpha` rendered to 12 significant digits; display only, the
    /// exact `base` and `alpha` fields are authoritative.
    pub bound_value: String,
    pub side_used: MinSide,
}

impl BoundReport {
    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "alpha": format!("{}/{}", self.alpha.numer(), self.alpha.denom()),
            "base": format!("{}/{}", self.base.numer(), self.base.denom()),
            "bound_value": self.bound_value,
            "side_used": self.side_used.as_str(),
        })
    }
}

pub fn bound_report(g: &GroupSpec, h: &GroupSpec, r: u64) -> Result<BoundReport> {
    let alpha = theorem_alpha(r)?;
    let (base, side_used) = theorem_base(g, h, r)?;
    let bound_value = power_decimal(&base, &alpha, 12)?;
    Ok(BoundReport {
        r,
        alpha,
        base,
        bound_value,
        side_used,
    })
}

/// An exact quantity of the form `coeff * log2(base)` with `base >= 2` and
/// `coeff > 0`. Comparisons cross-multiply into integer powers and never
/// touch floating point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogScaled {
    base: u64,
    coeff: BigRational,
}

impl LogScaled {
    pub fn new(base: u64, coeff: BigRational) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidParameter(format!(
                "log argument must be >= 2, got {base}"
            )));
        }
        if !coeff.is_positive() {
            return Err(Error::InvalidParameter(
                "log coefficient must be positive".into(),
            ));
        }
        Ok(LogScaled { base, coeff })
    }

    /// Embeds an exact rational `v` as `v * log2(2)`.
    pub fn from_rational(v: BigRational) -> Result<Self> {
        LogScaled::new(2, v)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    /// Exact comparison: `(p/q) log2(x)` vs `(s/t) log2(y)` reduces to
    /// `x^(p t)` vs `y^(s q)` in the integers.
    pub fn exact_cmp(&self, other: &LogScaled) -> Ordering {
        let p = self.coeff.numer().to_u128().expect("small numerator");
        let q = self.coeff.denom().to_u128().expect("small denominator");
        let s = other.coeff.numer().to_u128().expect("small numerator");
        let t = other.coeff.denom().to_u128().expect("small denominator");
        let lhs = Pow::pow(&BigUint::from(self.base), p * t);
        let rhs = Pow::pow(&BigUint::from(other.base), s * q);
        lhs.cmp(&rhs)
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN) * (self.base as f64).log2()
    }
}

/// `c(r) = log2(r) * alpha(r)` for `r >= 2`, kept exact.
pub fn c_of_r(r: u64) -> Result<LogScaled> {
    if r < 2 {
        return Err(Error::InvalidParameter("c(r) needs r >= 2".into()));
    }
    LogScaled::new(r, theorem_alpha(r)?)
}

/// Argmin of `c` over primes `<= limit`, with exact comparisons and
/// deterministic tie-breaking toward the smaller prime.
pub fn minimize_c_over_primes(limit: u64) -> Result<(u64, LogScaled)> {
    if limit > 10_000_000 {
        return Err(Error::TooLarge(format!("prime scan limit {limit}")));
    }
    let primes = primes::primes_up_to(limit);
    let mut best: Option<(u64, LogScaled)> = None;
    for p in primes {
        let c = c_of_r(p)?;
        best = match best {
            None => Some((p, c)),
            Some((bp, bc)) => {
                if c.exact_cmp(&bc) == Ordering::Less {
                    Some((p, c))
                } else {
                    Some((bp, bc))
                }
            }
        };
    }
    best.ok_or_else(|| Error::InvalidParameter(format!("no primes <= {limit}")))
}

/// Exact comparison of `a^e1` vs `b^e2` for positive rationals.
pub fn cmp_rational_powers(a: &BigRational, e1: u64, b: &BigRational, e2: u64) -> Ordering {
    let (na, da) = (
        a.numer().magnitude().clone(),
        a.denom().magnitude().clone(),
    );
    let (nb, db) = (
        b.numer().magnitude().clone(),
        b.denom().magnitude().clone(),
    );
    let lhs = Pow::pow(&na, e1) * Pow::pow(&db, e2);
    let rhs = Pow::pow(&nb, e2) * Pow::pow(&da, e1);
    lhs.cmp(&rhs)
}

/// Exact comparison of `a^alpha_a` vs `b^alpha_b` for positive rational
/// bases and positive rational exponents.
pub fn cmp_bound_values(
    a: &BigRational,
    alpha_a: &BigRational,
    b: &BigRational,
    alpha_b: &BigRational,
) -> Ordering {
    let pa = alpha_a.numer().to_u64().expect("small exponent");
    let qa = alpha_a.denom().to_u64().expect("small exponent");
    let pb = alpha_b.numer().to_u64().expect("small exponent");
    let qb = alpha_b.denom().to_u64().expect("small exponent");
    // a^(pa/qa) vs b^(pb/qb)  <=>  a^(pa qb) vs b^(pb qa)
    let e1 = pa.checked_mul(qb).expect("exponent product fits u64");
    let e2 = pb.checked_mul(qa).expect("exponent product fits u64");
    cmp_rational_powers(a, e1, b, e2)
}

/// Renders `base^alpha` (positive rational base, positive rational
/// exponent) to `sig` significant digits, as `d.ddd...e<exp>`. The digits
/// are obtained from integer k-th roots, with round-half-up on the digit
/// after the last kept one.
pub fn power_decimal(base: &BigRational, alpha: &BigRational, sig: usize) -> Result<String> {
    if !base.is_positive() || !alpha.is_positive() {
        return Err(Error::InvalidParameter(
            "power_decimal needs positive base and exponent".into(),
        ));
    }
    let a = alpha.numer().to_u64().ok_or_else(|| {
        Error::TooLarge("exponent numerator".into())
    })?;
    let b = alpha
        .denom()
        .to_u32()
        .ok_or_else(|| Error::TooLarge("exponent denominator".into()))?;
    if a > 64 {
        return Err(Error::TooLarge(format!("exponent numerator {a}")));
    }
    let num = Pow::pow(base.numer().magnitude(), a);
    let den = Pow::pow(base.denom().magnitude(), a);

    // one guard digit for rounding
    let digits = sig + 1;
    // first estimate of the decimal exponent of (num/den)^(1/b)
    let log2_ratio = num.bits() as i64 - den.bits() as i64;
    let mut shift: i64 =
        digits as i64 - 1 - (log2_ratio as f64 * std::f64::consts::LOG10_2 / b as f64) as i64;
    let mut root;
    loop {
        let scaled = if shift >= 0 {
            &num * Pow::pow(&BigUint::from(10u32), (b as u64) * shift as u64) / &den
        } else {
            &num / (&den * Pow::pow(&BigUint::from(10u32), (b as u64) * (-shift) as u64))
        };
        root = scaled.nth_root(b);
        let have = root.to_string().len() as i64;
        if have == digits as i64 {
            break;
        }
        shift += digits as i64 - have;
    }
    // round the guard digit half-up
    let mut kept = (&root + BigUint::from(5u32)) / BigUint::from(10u32);
    let mut exp = (digits as i64 - 1) - shift;
    if kept.to_string().len() > sig {
        kept /= BigUint::from(10u32);
        exp += 1;
    }
    let s = kept.to_string();
    Ok(format!("{}.{}e{}", &s[..1], &s[1..], exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(theorem_alpha(2).unwrap(), ratio(1, 11));
        assert_eq!(theorem_alpha(17).unwrap(), ratio(1, 79));
        assert_eq!(theorem_alpha(1).unwrap(), ratio(1, 6));
        assert!(theorem_alpha(0).is_err());
    }

    #[test]
    fn base_examples() {
        for n in [1usize, 3, 6] {
            let g = GroupSpec::repeated(2, n).unwrap();
            let p = crate::primes::next_prime(1u64 << n);
            let h = GroupSpec::cyclic(p).unwrap();
            let (base, side) = theorem_base(&g, &h, 2).unwrap();
            assert_eq!(base, BigRational::new(BigInt::one(), BigInt::from(1i64 << n)));
            assert_eq!(side, MinSide::DomainDilated);

            // swapped direction: base 1/p
            let (base, side) = theorem_base(&h, &g, 2).unwrap();
            assert_eq!(base, BigRational::new(BigInt::one(), BigInt::from(p)));
            assert_eq!(side, MinSide::CodomainDilated);
        }

        let g = spec("[12]");
        let (base, _) = theorem_base(&g, &g, 1).unwrap();
        assert_eq!(base, BigRational::one());

        assert!(theorem_base(&spec("[4,0]"), &spec("[5]"), 2).is_err());
    }

    #[test]
    fn min_term_symmetry() {
        // Swapping the arguments can change which side wins, never the
        // minimum itself: base(G,H) * |G| == base(H,G) * |H|, and both are
        // positive integers.
        let pairs = [("[8]", "[15]"), ("[2,4]", "[9]"), ("[6,6]", "[5,25]")];
        for (gs, hs) in pairs {
            let g = spec(gs);
            let h = spec(hs);
            for r in 1..=6u64 {
                let (bgh, _) = theorem_base(&g, &h, r).unwrap();
                let (bhg, _) = theorem_base(&h, &g, r).unwrap();
                let min_gh = bgh * BigRational::from(BigInt::from(g.small_order().unwrap()));
                let min_hg = bhg * BigRational::from(BigInt::from(h.small_order().unwrap()));
                assert!(min_gh.is_integer() && min_gh > BigRational::from(BigInt::from(0)));
                assert_eq!(min_gh, min_hg);
            }
        }
    }

    #[test]
    fn c_examples() {
        let c2 = c_of_r(2).unwrap();
        assert_eq!(c2.base(), 2);
        assert_eq!(*c2.coeff(), ratio(1, 11));

        let c17 = c_of_r(17).unwrap();
        assert_eq!(c17.base(), 17);
        assert_eq!(*c17.coeff(), ratio(1, 79));

        let c128 = c_of_r(128).unwrap();
        let one_19 = LogScaled::from_rational(ratio(1, 19)).unwrap();
        assert_ne!(c128.exact_cmp(&one_19), Ordering::Less);

        assert!(c_of_r(1).is_err());
    }

    #[test]
    fn minimize_examples() {
        let (p, c) = minimize_c_over_primes(128).unwrap();
        assert_eq!(p, 17);
        assert_eq!(c.base(), 17);
        assert_eq!(*c.coeff(), ratio(1, 79));

        let (p, c) = minimize_c_over_primes(2).unwrap();
        assert_eq!(p, 2);
        assert_eq!(*c.coeff(), ratio(1, 11));

        // min over {2, 3, 5, 7}: exact comparison agrees with the float view
        let (p, c) = minimize_c_over_primes(7).unwrap();
        let mut best_float = f64::INFINITY;
        let mut best_p = 0;
        for q in [2u64, 3, 5, 7] {
            let v = c_of_r(q).unwrap().to_f64();
            if v < best_float {
                best_float = v;
                best_p = q;
            }
        }
        assert_eq!(p, best_p);
        assert_eq!(p, 7);
        assert!((c.to_f64() - best_float).abs() < 1e-12);
    }

    #[test]
    fn large_primes_lose_to_17() {
        // c(p) >= 1/19 > c(17) for every prime p in [128, 10^4]
        let one_19 = LogScaled::from_rational(ratio(1, 19)).unwrap();
        let c17 = c_of_r(17).unwrap();
        assert_eq!(one_19.exact_cmp(&c17), Ordering::Greater);
        for p in crate::primes::primes_up_to(10_000) {
            if p < 128 {
                continue;
            }
            let cp = c_of_r(p).unwrap();
            assert_ne!(cp.exact_cmp(&one_19), Ordering::Less, "p = {p}");
            assert_eq!(cp.exact_cmp(&c17), Ordering::Greater, "p = {p}");
        }
    }

    #[test]
    fn alpha_and_c_agree() {
        for r in 2..200u64 {
            let c = c_of_r(r).unwrap();
            assert_eq!(*c.coeff(), theorem_alpha(r).unwrap());
            assert_eq!(c.base(), r);
        }
    }

    #[test]
    fn comparison_chain() {
        // 2^(-1/11) < 17^(-1/79) < 2^(-1/20), via integer cross-powering:
        // x^(-1/a) < y^(-1/b)  <=>  y^a < x^b
        let two = BigRational::from(BigInt::from(2));
        let seventeen = BigRational::from(BigInt::from(17));
        assert_eq!(
            cmp_rational_powers(&seventeen, 11, &two, 79),
            Ordering::Less
        );
        assert_eq!(
            cmp_rational_powers(&two, 79, &seventeen, 20),
            Ordering::Less
        );
    }

    #[test]
    fn decimal_rendering() {
        // exact halves and ones
        assert_eq!(
            power_decimal(&ratio(9, 16), &BigRational::one(), 12).unwrap(),
            "5.62500000000e-1"
        );
        assert_eq!(
            power_decimal(&BigRational::one(), &ratio(1, 11), 12).unwrap(),
            "1.00000000000e0"
        );
        // sqrt(1/2) = 0.70710678118654752...
        assert_eq!(
            power_decimal(&ratio(1, 2), &ratio(1, 2), 12).unwrap(),
            "7.07106781187e-1"
        );
        // agreement with floating point to ~1e-9 relative on a spread of inputs
        for (n, d, a, b) in [
            (1i64, 16i64, 1i64, 11i64),
            (1, 5, 1, 11),
            (3, 4, 1, 2),
            (1, 1024, 1, 79),
            (19, 25, 2, 3),
        ] {
            let s = power_decimal(&ratio(n, d), &ratio(a, b), 12).unwrap();
            let shown: f64 = s.replace('e', "E").parse().unwrap();
            let expect = ((n as f64) / (d as f64)).powf(a as f64 / b as f64);
            assert!(
                (shown - expect).abs() <= 1e-9 * expect.abs(),
                "{n}/{d} ^ {a}/{b}: {shown} vs {expect}"
            );
        }
    }
}
