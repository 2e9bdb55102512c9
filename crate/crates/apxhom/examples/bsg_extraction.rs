//! Constructive symmetric Balog-Szemeredi-Gowers extraction.
//!
//! From a set S with many additive triples, extract T inside S with
//! x0 - T = T, |T| comparable to eps|S|, and |T-T| polynomially bounded;
//! every guarantee is certified by an exact integer inequality.
//!
//! ```bash
//! cargo run --release --example bsg_extraction
//! ```

use apxhom::lemmas::bsg_symmetric;
use apxhom::maps::binary_embedding;
use apxhom::{ElementSet, GroupSpec};

fn show(name: &str, s: &ElementSet) {
    let (out, trace) = bsg_symmetric(s).unwrap();
    println!("{name}");
    println!("  |S| = {}, eps = {}", out.s_size, out.epsilon);
    println!(
        "  x0 = {}, |U| = {}, |R| = {}, |T| = {}, |T-T| = {}",
        out.x0,
        out.u_size,
        out.r_size,
        out.t.len(),
        out.t_minus_t_size
    );
    let c = out.certified;
    println!(
        "  certificates: symmetric={} t_large={} u_large={} r_large={} diff_bounded={}",
        c.symmetric, c.t_large, c.u_large, c.r_large, c.difference_bounded
    );
    assert!(c.all_hold());
    assert_eq!(trace.chosen_x, out.x0);
    println!();
}

fn main() {
    // a subgroup: eps = 1 and the extraction returns S itself
    let z12: GroupSpec = "[12]".parse().unwrap();
    show("subgroup {0,3,6,9} of [12]", &z12.dilate_image(3).unwrap());

    // an interval: plenty of triples, nontrivial filtering
    let z16: GroupSpec = "[16]".parse().unwrap();
    let interval =
        ElementSet::from_coords(z16.clone(), (0..6).map(|i| vec![i]).collect()).unwrap();
    show("interval {0..5} in [16]", &interval);

    // the graph of a construction: eps = (3/4)^n
    let f = binary_embedding(3, 11).unwrap();
    show("graph of the binary embedding (Z/2Z)^3 -> Z/11Z", &f.graph());

    // a union of cosets
    let z24: GroupSpec = "[24]".parse().unwrap();
    let sub = z24.dilate_image(6).unwrap(); // {0,6,12,18}
    let shift = ElementSet::singleton(z24.clone(), z24.element(vec![1]).unwrap()).unwrap();
    let union = sub.union(&sub.sumset(&shift).unwrap()).unwrap();
    show("union of two cosets of {0,6,12,18} in [24]", &union);
}
