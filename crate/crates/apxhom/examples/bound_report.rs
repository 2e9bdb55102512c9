//! The upper-bound expressions: base, exponent, and the per-prime
//! constant c(r), all with exact arithmetic.
//!
//! ```bash
//! cargo run --release --example bound_report
//! ```

use apxhom::bounds::{bound_report, c_of_r, minimize_c_over_primes};
use apxhom::GroupSpec;

fn main() {
    // For an injection f: G -> H the agreement probability is bounded by
    // base^alpha (up to an absolute constant) with
    //   base  = min{|r.G| |K_{H,r}|, |r.H| |K_{G,r}|} / |G|
    //   alpha = max{1/(5r+1), 1/(18 floor(log2 r) + 7)}
    println!("bound base and exponent at r = 2 for the headline shapes:");
    for n in [4usize, 8, 12] {
        let g = GroupSpec::repeated(2, n).unwrap();
        let h = GroupSpec::cyclic(apxhom::primes::next_prime(1 << n)).unwrap();
        let row = bound_report(&g, &h, 2).unwrap();
        let base = format!("{}/{}", row.base.numer(), row.base.denom());
        let alpha = format!("{}/{}", row.alpha.numer(), row.alpha.denom());
        println!(
            "  {:>8} -> {:>7}:  base = {base:>9}  alpha = {alpha}  base^alpha = {}",
            g.to_string(),
            h.to_string(),
            row.bound_value
        );
    }

    // the reverse direction and the mixed-torsion shape
    for (gs, hs) in [("[1031]", "[2^10]"), ("[2^8]", "[4^4]")] {
        let g: GroupSpec = gs.parse().unwrap();
        let h: GroupSpec = hs.parse().unwrap();
        let row = bound_report(&g, &h, 2).unwrap();
        let base = format!("{}/{}", row.base.numer(), row.base.denom());
        let alpha = format!("{}/{}", row.alpha.numer(), row.alpha.denom());
        println!(
            "  {gs:>8} -> {hs:>7}:  base = {base:>9}  alpha = {alpha}  base^alpha = {}",
            row.bound_value
        );
    }

    // c(r) = log2(r) * alpha(r) compares exactly by integer cross-powering
    println!("\nc(r) for small primes (exact order, decimal display):");
    for r in [2u64, 3, 5, 7, 13, 17, 19, 31, 127] {
        let c = c_of_r(r).unwrap();
        println!(
            "  c({r:>3}) = log2({:>3}) * {:>5}  ~ {:.6}",
            c.base(),
            format!("{}/{}", c.coeff().numer(), c.coeff().denom()),
            c.to_f64()
        );
    }
    let (p, c) = minimize_c_over_primes(128).unwrap();
    println!(
        "\nminimum over primes <= 128: c({p}) = log2({}) / {} ~ {:.6}",
        c.base(),
        c.coeff().denom(),
        c.to_f64()
    );
}
