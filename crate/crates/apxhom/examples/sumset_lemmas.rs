//! The sumset estimates, checked constructively on concrete instances:
//! graph growth, dilated-sumset growth, the Petridis minimizer, the
//! kernel-quotient identity, and the Ruzsa triangle inequality.
//!
//! ```bash
//! cargo run --release --example sumset_lemmas
//! ```

use apxhom::lemmas::{
    bukh_check, graph_growth_check, kernel_quotient_identity_check, petridis_minimizer,
    petridis_conclusion_check, ruzsa_triangle_check,
};
use apxhom::maps::binary_embedding;
use apxhom::{ElementSet, GroupSpec};

fn main() {
    // graph growth: subsets of an injective-projection graph must grow
    // under X + r.B at rate at least |B| / (|K_{H,r}| |r.G|)
    let f = binary_embedding(2, 5).unwrap();
    let gamma = f.graph();
    let rep = graph_growth_check(f.domain(), f.codomain(), &gamma, &gamma, &gamma, 2).unwrap();
    println!("graph growth on the (Z/2Z)^2 -> Z/5Z graph, r = 2:");
    println!("  |X + r.B| / |X| = {}  >=  {} = |B| / (|K| |r.G|)", rep.lhs, rep.rhs);
    println!(
        "  quadruple count {} <= bound {}",
        rep.quadruple_count, rep.quadruple_bound
    );
    assert!(rep.all_hold());

    // dilated-sumset growth: K = |Y-A-2.A|/|Y| controls |X + r.A|
    let g: GroupSpec = "[101]".parse().unwrap();
    let a = ElementSet::from_coords(g.clone(), (0..10).map(|i| vec![i]).collect()).unwrap();
    let x = ElementSet::from_coords(g.clone(), vec![vec![0]]).unwrap();
    let rep = bukh_check(&a, &x, &a, 6).unwrap();
    println!("\ndilated-sumset growth for the progression {{0..9}} in [101], r = 6:");
    println!(
        "  K = {}, |X + 6.A| = {} <= K^{} * |X + A| = K^{} * {}",
        rep.k_ratio, rep.lhs_size, rep.log2_r_floor, rep.log2_r_floor, rep.base_size
    );
    println!(
        "  chain |X+r.A| <= |partial| <= |full|: {} <= {} <= {}",
        rep.lhs_size, rep.partial_chain_size, rep.full_chain_size
    );
    assert!(rep.all_hold());

    // Petridis minimizer: the subset of Y with slowest relative growth
    let g10: GroupSpec = "[10]".parse().unwrap();
    let a = ElementSet::from_coords(g10.clone(), vec![vec![0], vec![1], vec![2]]).unwrap();
    let (z, ratio) = petridis_minimizer(&a, &a).unwrap();
    println!("\nPetridis minimizer for Y = A = {{0,1,2}} in [10]:");
    println!("  Z has {} elements, ratio |Z-A-2.A|/|Z| = {ratio}", z.len());
    let c = ElementSet::from_coords(g10.clone(), vec![vec![4], vec![9]]).unwrap();
    let rep = petridis_conclusion_check(&z, &a, &c).unwrap();
    println!(
        "  conclusion at C = {{4,9}}: {} * {} <= {} * {}  ({})",
        rep.expanded_size, rep.z_size, rep.shifted_size, rep.z_plus_c_size, rep.holds
    );
    assert!(rep.holds);

    // kernel-quotient identity: dilating by 2^(k-1) counts kernel cosets
    let g8: GroupSpec = "[8]".parse().unwrap();
    let z = ElementSet::from_coords(g8.clone(), vec![vec![0], vec![1]]).unwrap();
    let rep = kernel_quotient_identity_check(&z, &z, 2).unwrap();
    println!("\nkernel-quotient identity in [8] with Z = A = {{0,1}}, k = 2:");
    println!(
        "  |2.D| = {}  ==  |D + K| / |K| = {}/{}",
        rep.dilated_size, rep.coset_sum_size, rep.kernel_size
    );
    assert!(rep.holds);

    // Ruzsa triangle inequality
    let g20: GroupSpec = "[20]".parse().unwrap();
    let u = ElementSet::from_coords(g20.clone(), vec![vec![0], vec![3], vec![7]]).unwrap();
    let v = ElementSet::from_coords(g20.clone(), vec![vec![1], vec![5]]).unwrap();
    let w = ElementSet::from_coords(g20.clone(), vec![vec![2], vec![11]]).unwrap();
    let rep = ruzsa_triangle_check(&u, &v, &w).unwrap();
    println!("\nRuzsa triangle in [20]:");
    println!(
        "  |V| |U+W| = {} * {} <= |U+V| |(-V)+W| = {} * {}  ({})",
        rep.v_size, rep.uw_size, rep.uv_size, rep.wv_size, rep.holds
    );
    assert!(rep.holds);
}
