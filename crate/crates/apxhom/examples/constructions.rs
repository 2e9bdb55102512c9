//! The two explicit constructions, table by table, plus the carry defect
//! that explains the binary embedding's agreement count.
//!
//! ```bash
//! cargo run --release --example constructions
//! ```

use apxhom::maps::{binary_embedding, carry_defect, centered_lift, centered_unwrap};
use apxhom::GroupSpec;

fn main() {
    // binary embedding (Z/2Z)^2 -> Z/5Z
    let f = binary_embedding(2, 5).unwrap();
    println!("binary embedding (Z/2Z)^2 -> Z/5Z:");
    for x in f.domain().elements().unwrap() {
        println!("  {x} -> {}", f.apply(&x).unwrap());
    }

    // The defect f(x)+f(y)-f(x+y) is the carry term: it vanishes exactly
    // when the supports of x and y are disjoint.
    println!("\ncarry defect table (rows x, columns y):");
    let elems: Vec<_> = f.domain().elements().unwrap().collect();
    print!("{:>8}", "");
    for y in &elems {
        print!("{:>8}", y.to_string());
    }
    println!();
    for x in &elems {
        print!("{:>8}", x.to_string());
        for y in &elems {
            print!("{:>8}", carry_defect(&f, x, y).unwrap().to_string());
        }
        println!();
    }

    // centered unwrapping = centered lift into Z, then projection mod q
    let p = 11u64;
    let q = 13u64;
    let lift = centered_lift(p).unwrap();
    let unwrap = centered_unwrap(p, q).unwrap();
    println!("\ncentered unwrapping Z/{p}Z -> Z -> Z/{q}Z:");
    for x in lift.domain().elements().unwrap() {
        println!(
            "  {x} -> {:>4} -> {}",
            lift.apply(&x).unwrap().to_string(),
            unwrap.apply(&x).unwrap()
        );
    }

    // the composition route gives the same map as the direct construction
    let projected = lift
        .map_values(GroupSpec::cyclic(q).unwrap(), |z| vec![z.coords()[0]])
        .unwrap();
    assert_eq!(projected.table(), unwrap.table());
    println!("\nlift-then-project equals the direct construction: ok");
}
