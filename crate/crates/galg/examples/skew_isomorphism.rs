//! The partial skew groupoid ring and its iterated-ring decomposition.
//!
//! For a τ(x)-global unital action, `A ⋆_α G` is isomorphic to
//! `(A ⋆_{α*} G₀²) ⋆_θ G(x)`: the pair groupoid absorbs the object
//! spread and the isotropy group keeps the twisting. The isomorphism
//! `φ(a δ_g) = a δ_{(s(g),t(g))} δ_{g_x}` is verified generator by
//! generator.
//!
//! ```bash
//! cargo run -p galg --example skew_isomorphism
//! ```

use galg::instances;
use galg::skewring::{phi_iso, SkewRing};

fn main() {
    let inst = instances::frob4();
    let skew = SkewRing::new(inst.action.clone()).unwrap();
    println!(
        "skew ring over {} morphisms with {} additive generators",
        skew.groupoid().len(),
        skew.gens().len()
    );
    skew.verify_ring_laws().unwrap();
    println!("associativity and the identity law verified on all generator triples");

    let phi = phi_iso(&skew, &inst.tau).unwrap();
    println!(
        "\nφ verified: multiplicative on {} generator pairs, {} graded components:",
        phi.pairs_checked,
        phi.components.len()
    );
    let gd = inst.action.groupoid();
    for &(g, u, gx, gens) in &phi.components {
        println!(
            "  {}δ_{:2} ↦ δ_{:6} δ_{:2}   ({} coefficient generators)",
            "", // coefficients ride along unchanged
            gd.name(g),
            phi.theta.base.groupoid.name(u),
            gd.name(gx),
            gens
        );
    }

    // a couple of concrete products in the skew ring
    let r = &inst.ring;
    let g = gd.by_name("g").unwrap();
    let e1 = r.parse("e1").unwrap();
    let adg = skew.monomial(g, e1).unwrap();
    println!("\n(e1 δ_g)·(e1 δ_g) = {:?}   [g² = x]", adg.mul(&adg).unwrap());
    let l = gd.by_name("l").unwrap();
    let e3 = r.parse("e3").unwrap();
    let bdl = skew.monomial(l, e3).unwrap();
    println!("(e1 δ_g)·(e3 δ_l) = {:?}   [s(g) ≠ t(l)]", adg.mul(&bdl).unwrap());
}
