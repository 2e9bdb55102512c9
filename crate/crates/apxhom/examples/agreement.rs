//! Exact agreement counting: how often does f(x+y) = f(x) + f(y)?
//!
//! ```bash
//! cargo run --release --example agreement
//! ```

use apxhom::maps::{binary_embedding, centered_unwrap, PointMap};
use apxhom::primes::next_prime;
use apxhom::GroupSpec;

fn main() {
    // A homomorphism agrees on every pair.
    let id = PointMap::identity("[12]".parse::<GroupSpec>().unwrap()).unwrap();
    let rep = id.agreement_probability();
    println!(
        "identity on [12]:        {}/{} = {}",
        rep.good_pairs,
        rep.total_pairs,
        rep.as_float()
    );

    // The binary embedding (Z/2Z)^n -> Z/pZ agrees on exactly 3^n of the
    // 4^n ordered pairs: a pair is good iff adding f(x) and f(y) in binary
    // needs no carry.
    println!("\nbinary embedding (Z/2Z)^n -> Z/pZ, p the next prime after 2^n:");
    for n in 1..=8 {
        let p = next_prime(1 << n);
        let f = binary_embedding(n, p).unwrap();
        let rep = f.agreement_probability();
        println!(
            "  n = {n:>2}, p = {p:>4}:  {:>6}/{:<8} = (3/4)^{n} = {:.6}",
            rep.good_pairs,
            rep.total_pairs,
            rep.as_float()
        );
    }

    // Centered unwrapping does better than any (3/4)^n: strictly above 3/4.
    println!("\ncentered unwrapping Z/pZ -> Z/qZ, q the next prime after p:");
    for p in [3u64, 5, 11, 31, 101] {
        let q = next_prime(p);
        let f = centered_unwrap(p, q).unwrap();
        let rep = f.agreement_probability();
        println!(
            "  p = {p:>3}, q = {q:>3}:  {:>6}/{:<6} = {:.6}",
            rep.good_pairs,
            rep.total_pairs,
            rep.as_float()
        );
    }

    // The pair count is the triple correlation of the graph of f inside
    // G x H: both routes count the same thing.
    let f = binary_embedding(3, 11).unwrap();
    let graph = f.graph();
    println!(
        "\ngraph identity: good pairs {} == graph triple correlation {}",
        f.agreement_probability().good_pairs,
        graph.triple_correlation()
    );
}
