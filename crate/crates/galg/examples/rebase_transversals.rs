//! Base change between transversals: the datum categories over any two
//! (object, transversal) pairs are isomorphic, and matched pairs round
//! trip to the identity.
//!
//! ```bash
//! cargo run -p galg --example rebase_transversals
//! ```

use galg::action::Datum;
use galg::groupoid::{conjugation_iso, Transversal};
use galg::instances;
use std::collections::BTreeMap;

fn main() {
    let inst = instances::frob4();
    let datum = Datum::extract(&inst.action, &inst.tau).unwrap();
    let gd = inst.action.groupoid();
    let (x, y) = (gd.by_name("x").unwrap(), gd.by_name("y").unwrap());

    for (fwd, bwd) in [("l", "l'"), ("m", "m'")] {
        // matched pair: rebase to (y, {y, fwd⁻¹}) and back along fwd
        let lam = Transversal::new(gd, y, &BTreeMap::from([(x, gd.by_name(bwd).unwrap())]))
            .unwrap();
        let there = datum.rebase(&lam).unwrap();
        let tau_back =
            Transversal::new(gd, x, &BTreeMap::from([(y, gd.by_name(fwd).unwrap())])).unwrap();
        let back = there.rebase(&tau_back).unwrap();
        println!(
            "rebase (x,{{x,{fwd}}}) → (y,{{y,{bwd}}}) → back: identity = {}",
            back.eq_datum(&datum)
        );
    }

    // the group part transports along the isomorphism φ(l) = τ_z⁻¹·l·τ_z
    let phi = conjugation_iso(gd, &inst.tau, y);
    println!("\nisotropy transport G(y) → G(x):");
    for &l in gd.isotropy_group(y).unwrap().members() {
        println!("  {} ↦ {}", gd.name(l), gd.name(phi(l)));
    }

    // rebasing to the same base with a different transversal keeps the
    // datum pieces but revalidates them against the new projection
    let m = gd.by_name("m").unwrap();
    let lam_x = Transversal::new(gd, x, &BTreeMap::from([(y, m)])).unwrap();
    let moved = datum.rebase(&lam_x).unwrap();
    println!(
        "\nsame-base rebase to {{x, m}} validates: {}",
        moved.eq_datum(&datum)
    );
}
