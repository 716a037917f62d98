//! Invariant subrings and trace maps of lifted actions.
//!
//! ```bash
//! cargo run -p galg --example invariants_and_traces
//! ```

use galg::instances;
use galg::invariants::{
    invariant_subring, invariants_report, trace_surjectivity, LiftedContext,
};

fn main() {
    for inst in [
        instances::pair_swap(),
        instances::frob4(),
        instances::char2_trivial(),
        instances::swap_gf2sq(),
    ] {
        let ctx = LiftedContext::new(inst.datum.clone()).unwrap();
        let r = ctx.ring();
        let inv = invariant_subring(&ctx).unwrap();
        let surj = trace_surjectivity(&ctx).unwrap();
        println!(
            "{:14} |A| = {:4}  |A^β| = {:3} (rank {})  t_β onto: {:5}  group-part onto: {}",
            inst.name,
            r.len(),
            inv.members.len(),
            inv.rank(),
            surj.full,
            surj.group_part
        );
    }

    // the swap action on GF(3)²: the trace folds onto the diagonal
    let ctx = LiftedContext::new(instances::pair_swap().datum.clone()).unwrap();
    let r = ctx.ring();
    println!("\ntrace table for the coordinate-swap action on GF(3)²:");
    for a in r.elements() {
        println!("  t_β({}) = {}", r.name(a), r.name(ctx.trace_full(a)));
    }
    let report = invariants_report(&ctx).unwrap();
    println!("\nreport entry: {}", serde_json::to_string(&report).unwrap());
}
