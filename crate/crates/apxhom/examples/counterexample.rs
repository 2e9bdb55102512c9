//! Dilation can destroy doubling: the (Z/4Z)^d x Z family.
//!
//! Even when |A+B| <= 2|A|, the dilated sets can satisfy
//! |2.A + 2.B| >= 2^(d-1) |2.A|.
//!
//! ```bash
//! cargo run --release --example counterexample
//! ```

use apxhom::lemmas::counterexample_family;

fn main() {
    println!(
        "{:>2} {:>8} {:>8} {:>8} {:>12} {:>12} {:>12}",
        "d", "|A|", "|2.A|", "|A+B|", "|2.A+2.B|", "|A+B|/|A|", "ratio2"
    );
    for d in 0..=5 {
        let s = counterexample_family(d).unwrap();
        assert!(s.all_hold());
        println!(
            "{:>2} {:>8} {:>8} {:>8} {:>12} {:>12} {:>12}",
            s.d,
            s.size_a,
            s.size_2a,
            s.size_ab,
            s.size_2a2b,
            format!("{}/{}", s.ratio_first.numer(), s.ratio_first.denom()),
            format!("{}/{}", s.ratio_second.numer(), s.ratio_second.denom()),
        );
    }
    println!("\nall enumerated sizes match the closed forms 4^d+2^d, 2*2^d, 2*4^d, 4^d+2^d");
    println!("first ratio stays <= 2 while the second grows like 2^(d-1)");
}
