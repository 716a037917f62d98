//! Write the bundled instances out as JSON files for the `galg` CLI.
//! This is the generator for the `instances/` directory in the repo.
//!
//! ```bash
//! cargo run -p galg --example export_instances -- [target-dir]
//! ```

use galg::globalization::shift3_globalizable;
use galg::instances::{self, Instance};
use galg::io::{self, BundleSpec, GdatumSpec};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("instances"));
    std::fs::create_dir_all(&dir).unwrap();

    for inst in instances::all() {
        export(&dir, inst);
    }

    // the globalizable datum rides on the shift3 bundle
    let gdat = shift3_globalizable();
    let gd = gdat.datum().groupoid();
    let ring = gdat.datum().ring();
    let x = gdat.datum().base();
    let spec = GdatumSpec {
        datum: "shift3.datum.json".into(),
        j_ideals: gd
            .objects()
            .iter()
            .map(|&y| {
                (
                    gd.name(y).to_string(),
                    io::IdealSpec::Idempotent {
                        idempotent: ring.name(ring.one().unwrap()).to_string(),
                    },
                )
            })
            .collect(),
        tau_extensions: gd
            .objects()
            .iter()
            .filter(|&&y| y != x)
            .map(|&y| {
                let m = gdat.tau_ext(y);
                (gd.name(y).to_string(), table_of(m))
            })
            .collect(),
        group_globalization: gdat
            .datum()
            .group_members()
            .into_iter()
            .filter(|&h| h != x)
            .map(|h| (gd.name(h).to_string(), table_of(gdat.group_ext(h))))
            .collect(),
    };
    io::write_json(&dir.join("shift3.gdatum.json"), &spec).unwrap();
    println!("wrote {}", dir.join("shift3.gdatum.json").display());
}

fn table_of(map: &galg::ideal::RingMap) -> BTreeMap<String, String> {
    let ring = map.domain().ring();
    map.domain()
        .members()
        .iter()
        .map(|&a| {
            (
                ring.name(a).to_string(),
                ring.name(map.apply2(a)).to_string(),
            )
        })
        .collect()
}

fn export(dir: &Path, inst: &Instance) {
    let gfile = format!("{}.groupoid.json", inst.name);
    let rfile = format!("{}.ring.json", inst.name);
    let dfile = format!("{}.datum.json", inst.name);
    let bfile = format!("{}.bundle.json", inst.name);
    io::write_json(&dir.join(&gfile), &inst.groupoid.to_spec()).unwrap();
    io::write_json(&dir.join(&rfile), &io::ring_spec(&inst.ring)).unwrap();
    io::write_json(&dir.join(&dfile), &io::datum_spec(&inst.datum, &gfile, &rfile)).unwrap();
    let bundle = BundleSpec {
        name: Some(inst.name.to_string()),
        groupoid: gfile,
        ring: rfile,
        datum: Some(dfile),
        action: None,
        globalizable: (inst.name == "shift3").then(|| "shift3.gdatum.json".to_string()),
        base: None,
        transversal: None,
        // the four-component flagship ring is over the default cap
        options: (inst.ring.len() > 4096).then(|| io::BundleOptions {
            cap: Some(inst.ring.len()),
        }),
    };
    io::write_json(&dir.join(&bfile), &bundle).unwrap();
    println!("wrote {}", dir.join(&bfile).display());
}
