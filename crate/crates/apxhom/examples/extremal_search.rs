//! Searching for maximum-agreement injections, with bound context.
//!
//! ```bash
//! cargo run --release --example extremal_search
//! ```

use apxhom::maps::binary_embedding;
use apxhom::search::{
    bound_comparison_table, exhaustive_max_agreement, local_search_max_agreement,
};
use apxhom::GroupSpec;

fn main() {
    // exhaustive: globally optimal for small instances
    let g: GroupSpec = "[2,2]".parse().unwrap();
    let h: GroupSpec = "[5]".parse().unwrap();
    let res = exhaustive_max_agreement(&g, &h).unwrap();
    println!(
        "exhaustive [2,2] -> [5]: best = {} over {} placements",
        res.best_probability, res.visited
    );
    println!("  witness: {:?}", res.witness.table().iter().map(|e| e.to_string()).collect::<Vec<_>>());
    let embedding = binary_embedding(2, 5).unwrap().agreement_probability();
    println!(
        "  binary embedding achieves {}, optimal: {}",
        embedding.probability,
        embedding.probability == res.best_probability
    );

    // local: seeded hill climbing with restarts, warm-startable
    let g: GroupSpec = "[2^3]".parse().unwrap();
    let h: GroupSpec = "[11]".parse().unwrap();
    let warm = binary_embedding(3, 11).unwrap();
    let res = local_search_max_agreement(&g, &h, 50_000, 0, Some(&warm)).unwrap();
    println!(
        "\nlocal [2^3] -> [11] (warm-started at 27/64): best = {} after {} evaluations",
        res.best_probability, res.visited
    );

    // bound context: base^alpha rows next to the observation; the rows
    // carry an unspecified absolute constant, so they are context only
    let table = bound_comparison_table(&g, &h, &[1, 2, 3, 4], Some(res.best_probability)).unwrap();
    println!("\n{:>3} {:>8} {:>10} {:>18}", "r", "alpha", "base", "base^alpha");
    for row in &table.rows {
        println!(
            "{:>3} {:>8} {:>10} {:>18}",
            row.r,
            format!("{}/{}", row.alpha.numer(), row.alpha.denom()),
            format!("{}/{}", row.base.numer(), row.base.denom()),
            row.bound_value
        );
    }
    println!("note: {}", table.note);
}
