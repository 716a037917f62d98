//! Generate seeded random instances and sweep every applicable law over
//! them. Pass a count and a seed to reproduce a batch.
//!
//! ```bash
//! cargo run -p galg --example random_instances -- 25 7
//! ```

use galg::fuzz;

fn main() {
    let mut args = std::env::args().skip(1);
    let count: usize = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(25);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2024);

    println!("running {count} instances from seed {seed}…");
    for i in 0..count.min(5) {
        let params = fuzz::sample_params(seed.wrapping_add(i as u64));
        println!("  sample {i}: {params}");
    }
    if count > 5 {
        println!("  …");
    }
    let report = fuzz::run_tier(seed, count, 1024);
    println!(
        "\nall {} instances passed; {} satisfied the standing assumptions, {} were τ(x)-global, {} ran the Frobenius tensor check",
        report.instances, report.standing, report.tau_global, report.frobenius
    );
}
