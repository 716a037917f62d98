//! Lift a datum to a partial groupoid action and extract it back.
//!
//! A datum over a connected groupoid holds object ideals, transversal
//! isomorphisms and a partial action of the isotropy group; lifting
//! produces `β_g = γ_{τ_{t(g)}} ∘ γ_{g_x} ∘ γ_{τ_{s(g)}}⁻¹`. Extraction
//! is a left inverse of lifting, and `lift(extract(α)) ≤ α` with
//! equality exactly under the containment criterion.
//!
//! ```bash
//! cargo run -p galg --example lift_and_extract
//! ```

use galg::action::{lift_extract_equality_condition, Datum};
use galg::instances;

fn main() {
    // a datum on GF(9)³ whose transversal maps have proper domains
    let inst = instances::restrict3();
    let datum = &inst.datum;
    let gd = datum.groupoid();
    let r = datum.ring();

    let lifted = datum.lift().unwrap();
    println!("lifted action over a ring with {} elements:", r.len());
    for g in gd.morphisms() {
        let m = lifted.map(g);
        println!(
            "  β_{:2}: |dom| = {:3} → |ran| = {:3}{}",
            gd.name(g),
            m.domain().len(),
            m.codomain().len(),
            m.domain()
                .generator_idempotent()
                .map(|e| format!("   dom = A·({})", r.name(e)))
                .unwrap_or_default()
        );
    }
    println!("τ(x)-global: {}", lifted.is_tau_global(datum.tau()));

    // extraction undoes lifting exactly
    let back = Datum::extract(&lifted, datum.tau()).unwrap();
    println!("extract(lift(γ)) = γ: {}", back.eq_datum(datum));

    // the flagship four-component action: lift(extract(α)) = α because
    // it is τ(x)-global; under λ(x) = {x, m} only the inequality holds
    let flag = instances::frob4();
    let d1 = Datum::extract(&flag.action, &flag.tau).unwrap();
    let round = d1.lift().unwrap();
    println!(
        "\nflagship: lift(extract(α)) = α: {} (condition: {})",
        round.eq_action(&flag.action).unwrap(),
        lift_extract_equality_condition(&flag.action, &flag.tau),
    );
}
