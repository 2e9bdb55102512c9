//! Small prime utilities: deterministic Miller-Rabin for `u64`, Pollard rho
//! factorization, next-prime search and a sieve.

use std::collections::BTreeMap;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set below is exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n.checked_add(1).expect("next_prime overflow");
    while !is_prime(k) {
        k += 1;
    }
    k
}

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

fn pollard_rho(n: u64) -> u64 {
    // n must be odd composite, not a prime power of a found factor yet
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num::integer::gcd(a, b)
}

/// Prime factorization of `n >= 1` as prime -> exponent.
pub fn factorize(n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m < 2 {
            continue;
        }
        if is_prime(m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let known = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
        for n in 0..32 {
            assert_eq!(is_prime(n), known.contains(&n), "n={n}");
        }
        assert!(is_prime(1031));
        assert!(!is_prime(1033 * 1039));
    }

    #[test]
    fn next_prime_after_powers_of_two() {
        let expected = [
            (2u64, 3u64),
            (4, 5),
            (8, 11),
            (16, 17),
            (32, 37),
            (64, 67),
            (128, 131),
            (256, 257),
            (512, 521),
            (1024, 1031),
        ];
        for (n, p) in expected {
            assert_eq!(next_prime(n), p);
        }
    }

    #[test]
    fn sieve_matches_miller_rabin() {
        let sieved = primes_up_to(10_000);
        assert_eq!(sieved.len(), 1229);
        for &p in &sieved {
            assert!(is_prime(p));
        }
    }

    #[test]
    fn factorize_roundtrip() {
        for n in [1u64, 2, 12, 360, 1024, 9999, 600851475143] {
            let f = factorize(n);
            let back: u64 = f.iter().map(|(&p, &e)| p.pow(e)).product();
            assert_eq!(back, n.max(1));
            for &p in f.keys() {
                assert!(is_prime(p));
            }
        }
    }
}
