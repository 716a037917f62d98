//! Build finite groupoids from composition tables and inspect them:
//! validation, connected components, isotropy groups, transversals, and
//! the projection onto an isotropy group.
//!
//! ```bash
//! cargo run -p galg --example groupoid_basics
//! ```

use galg::groupoid::{gamma_groupoid, pair_groupoid, FiniteGroup, FiniteGroupoid, Transversal};
use galg::instances;
use std::collections::BTreeMap;

fn main() {
    // the two-object groupoid with isotropy ℤ₂ on both sides:
    // loops g, h and parallel arrows l, m with l·g = m = h·l
    let gd = FiniteGroupoid::validate(&instances::two_object_groupoid_spec()).unwrap();
    println!(
        "two-object groupoid: {} morphisms ({} non-identity), connected: {}",
        gd.len(),
        gd.non_identity_count(),
        gd.is_connected()
    );

    let x = gd.by_name("x").unwrap();
    let y = gd.by_name("y").unwrap();
    let iso = gd.isotropy_group(x).unwrap();
    println!(
        "isotropy at x: {{{}}}",
        iso.members()
            .iter()
            .map(|&g| gd.name(g))
            .collect::<Vec<_>>()
            .join(", ")
    );

    // a transversal picks one arrow x → y per object; the projection
    // π(g) = τ_{t(g)}⁻¹ · g · τ_{s(g)} lands in the isotropy group
    let l = gd.by_name("l").unwrap();
    let tau = Transversal::new(&gd, x, &BTreeMap::from([(y, l)])).unwrap();
    println!("\nprojection along τ = {{τ_x = x, τ_y = l}}:");
    for g in gd.morphisms() {
        println!("  π({}) = {}", gd.name(g), gd.name(tau.project(&gd, g)));
    }

    // the pair groupoid: one morphism between any two objects
    let pairs = pair_groupoid(&["1".into(), "2".into(), "3".into()]).unwrap();
    println!(
        "\npair groupoid on 3 objects: {} morphisms, every hom-set a singleton",
        pairs.len()
    );

    // the groupoid of a cyclic group spread over several objects
    let z2 = FiniteGroup::cyclic(2);
    let gamma = gamma_groupoid(&z2, 2, 1).unwrap();
    println!(
        "cyclic-ℤ₂ groupoid on 2 objects: {} morphisms, components: {}",
        gamma.len(),
        gamma.connected_components().len()
    );
}
