//! Run the whole theorem registry over every bundled instance and print
//! the pass/fail/skip matrix.
//!
//! ```bash
//! cargo run -p galg --example verify_instances
//! ```

use galg::globalization::shift3_globalizable;
use galg::instances;
use galg::io::LoadedBundle;
use galg::verify::{run_registry, Status, VerifyOptions, REGISTRY};

fn main() {
    let bundles: Vec<LoadedBundle> = instances::all()
        .into_iter()
        .map(|inst| LoadedBundle {
            name: inst.name.to_string(),
            groupoid: inst.groupoid.clone(),
            ring: inst.ring.clone(),
            tau: inst.tau.clone(),
            datum: inst.datum.clone(),
            action: inst.action.clone(),
            gdatum: (inst.name == "shift3").then(shift3_globalizable),
            action_given: false,
        })
        .collect();

    let opts = VerifyOptions::default();
    let reports: Vec<_> = bundles.iter().map(|b| run_registry(b, &opts)).collect();

    // matrix: one row per check, one column per instance
    print!("{:40}", "");
    for b in &bundles {
        print!("{:>13}", b.name);
    }
    println!();
    for (i, &id) in REGISTRY.iter().enumerate() {
        print!("{id:40}");
        for rep in &reports {
            let cell = match rep.entries[i].status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "·",
            };
            print!("{cell:>13}");
        }
        println!();
    }
    let failed = reports.iter().any(|r| r.failed());
    let inconsistent = reports.iter().any(|r| r.inconsistent);
    println!("\nfailed: {failed}, inconsistent: {inconsistent}");
    std::process::exit(if inconsistent {
        3
    } else if failed {
        2
    } else {
        0
    });
}
