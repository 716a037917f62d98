//! Morita contexts and partial Galois theory.
//!
//! ```bash
//! cargo run -p galg --example morita_galois
//! ```

use galg::instances;
use galg::invariants::LiftedContext;
use galg::morita::{
    gamma_surjectivity, search_galois, skew_skew_context, strictness_report, verify_galois,
    GaloisCoordinates,
};

fn main() {
    // the skew–skew context: U = R·1_S and V = 1_S·R with multiplication
    // pairings, both onto
    let ctx = LiftedContext::new(instances::frob4().datum.clone()).unwrap();
    let mc = skew_skew_context(&ctx).unwrap();
    println!(
        "skew–skew context on the flagship: μ onto = {}, ν onto = {}",
        mc.mu_surjective, mc.nu_surjective
    );

    // Galois coordinates on the coordinate-swap instance
    let ctx = LiftedContext::new(instances::pair_swap().datum.clone()).unwrap();
    let r = ctx.ring();
    let e1 = r.parse("e1").unwrap();
    let e2 = r.parse("e2").unwrap();
    let coords = GaloisCoordinates {
        pairs: vec![(e1, e1), (e2, e2)],
    };
    println!(
        "\nswap instance: {{(e1,e1),(e2,e2)}} are Galois coordinates: {}",
        verify_galois(&ctx, &coords)
    );
    let found = search_galois(&ctx, 2, 1 << 20).unwrap();
    match found {
        Some(c) => {
            let names: Vec<String> = c
                .pairs
                .iter()
                .map(|&(a, b)| format!("({}, {})", r.name(a), r.name(b)))
                .collect();
            println!("search found: {}", names.join(", "));
        }
        None => println!("search found no generator-supported coordinates"),
    }

    // the four-way strictness equivalence across instances
    println!("\nstrictness (Galois + trace onto, groupoid and group level agree):");
    for inst in [
        instances::pair_swap(),
        instances::frob4(),
        instances::gamma_z2(),
        instances::char2_trivial(),
    ] {
        let ctx = LiftedContext::new(inst.datum.clone()).unwrap();
        let gs = gamma_surjectivity(&ctx).unwrap();
        let rep = strictness_report(&ctx, true).unwrap();
        println!(
            "  {:14} Γ: {:5}  Γ': {:5}  strict: {}",
            inst.name, gs.gamma, gs.gamma_prime, rep.strict
        );
    }
}
