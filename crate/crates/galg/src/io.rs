//! JSON instance files: schemas, loading, writing.
//!
//! A bundle ties together a groupoid file, a ring file, and either a
//! datum or an action (plus transversal); it may also reference a
//! globalizable-datum file. Ideals are written either as a central
//! idempotent expression or as explicit element lists; maps are tables
//! keyed on domain element names. All paths inside a file resolve
//! relative to the file's own directory.

use crate::action::{Datum, PartialAction};
use crate::globalization::GlobalizableDatum;
use crate::groupoid::{FiniteGroupoid, GroupoidSpec, Morph, Transversal};
use crate::ideal::{Ideal, RingMap};
use crate::ring::{El, FiniteRing, RingSpec, RingStructure};
use crate::skewring::SkewElem;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read `{path}`: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write `{path}`: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON in `{path}`: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("bundle is inconsistent: {0}")]
    Bad(String),
    #[error(transparent)]
    Groupoid(#[from] crate::groupoid::GroupoidError),
    #[error(transparent)]
    Ring(#[from] crate::ring::RingError),
    #[error(transparent)]
    Action(#[from] crate::action::ActionError),
    #[error(transparent)]
    Glob(#[from] crate::globalization::GlobError),
}

/// Size caps, override any of them with the `GALG_CAP` environment
/// variable or the `--cap` flag (which set the ring and tensor caps).
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub ring: usize,
    pub tensor: usize,
    pub groupoid: usize,
    pub galois_candidates: u128,
}

impl Default for Caps {
    fn default() -> Self {
        let mut caps = Caps {
            ring: crate::ring::DEFAULT_RING_CAP,
            tensor: crate::tensor::DEFAULT_TENSOR_CAP,
            groupoid: crate::groupoid::DEFAULT_GROUPOID_CAP,
            galois_candidates: 1 << 20,
        };
        if let Ok(v) = std::env::var("GALG_CAP") {
            if let Ok(n) = v.trim().parse::<usize>() {
                caps.ring = n;
                caps.tensor = n;
            }
        }
        caps
    }
}

impl Caps {
    pub fn with_cap(n: usize) -> Self {
        Caps {
            ring: n,
            tensor: n,
            ..Caps::default()
        }
    }
}

// ----- file schemas -------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealSpec {
    Idempotent { idempotent: String },
    Elements { elements: Vec<String> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TauMapSpec {
    pub domain: IdealSpec,
    pub table: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupPartSpec {
    pub ideal: IdealSpec,
    pub table: BTreeMap<String, String>,
}

/// A datum file; `groupoid` and `ring` make it self-contained.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatumSpec {
    pub groupoid: String,
    pub ring: String,
    pub base: String,
    pub transversal: BTreeMap<String, String>,
    pub ideals: BTreeMap<String, IdealSpec>,
    /// per object ≠ base; the base map is the identity
    pub tau_maps: BTreeMap<String, TauMapSpec>,
    /// per isotropy member ≠ base; the identity member is implied
    pub group_part: BTreeMap<String, GroupPartSpec>,
}

/// An action file: per-morphism ideals and map tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionSpec {
    pub ideals: BTreeMap<String, IdealSpec>,
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

/// A globalizable-datum file, referencing its base datum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GdatumSpec {
    pub datum: String,
    pub j_ideals: BTreeMap<String, IdealSpec>,
    pub tau_extensions: BTreeMap<String, BTreeMap<String, String>>,
    pub group_globalization: BTreeMap<String, BTreeMap<String, String>>,
}

/// The bundle file tying everything together.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub groupoid: String,
    pub ring: String,
    #[serde(default)]
    pub datum: Option<String>,
    #[serde(default)]
    pub action: Option<String>,
    #[serde(default)]
    pub globalizable: Option<String>,
    /// base object and transversal, required for action bundles
    #[serde(default)]
    pub base: Option<String>,
    #[serde(default)]
    pub transversal: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<BundleOptions>,
}

/// Per-bundle overrides; a bundle may raise the caps it needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleOptions {
    #[serde(default)]
    pub cap: Option<usize>,
}

/// Serialized skew-ring elements: `{"terms":[{"g":…,"coeff":…}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkewElemSpec {
    pub terms: Vec<SkewTermSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkewTermSpec {
    pub g: String,
    pub coeff: String,
}

pub fn skew_elem_spec(e: &SkewElem) -> SkewElemSpec {
    let gd = e.ring().groupoid().clone();
    let r = e.ring().action().ring().clone();
    SkewElemSpec {
        terms: e
            .terms()
            .map(|(g, a)| SkewTermSpec {
                g: gd.name(g).to_string(),
                coeff: r.name(a).to_string(),
            })
            .collect(),
    }
}

// ----- loading -------------------------------------------------------------------

/// A fully built bundle: the datum and the action are both present
/// (one may be derived from the other).
pub struct LoadedBundle {
    pub name: String,
    pub groupoid: Arc<FiniteGroupoid>,
    pub ring: Arc<FiniteRing>,
    pub tau: Transversal,
    pub datum: Datum,
    pub action: PartialAction,
    pub gdatum: Option<GlobalizableDatum>,
    /// true when the bundle supplied the action and the datum was
    /// extracted (rather than the action lifted from the datum)
    pub action_given: bool,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn sibling(base: &Path, rel: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(rel)
}

fn build_ideal(ring: &Arc<FiniteRing>, spec: &IdealSpec) -> Result<Ideal, IoError> {
    Ok(match spec {
        IdealSpec::Idempotent { idempotent } => {
            Ideal::unital(ring.clone(), ring.parse(idempotent)?)?
        }
        IdealSpec::Elements { elements } => {
            let members: Result<Vec<El>, _> = elements.iter().map(|e| ring.parse(e)).collect();
            Ideal::from_elements(ring.clone(), &members?)?.with_found_identity()
        }
    })
}

fn build_map(
    ring: &Arc<FiniteRing>,
    table: &BTreeMap<String, String>,
    domain: Ideal,
    codomain: Ideal,
) -> Result<RingMap, IoError> {
    let pairs: Result<Vec<(El, El)>, IoError> = table
        .iter()
        .map(|(k, v)| Ok((ring.parse(k)?, ring.parse(v)?)))
        .collect();
    Ok(RingMap::validate(&pairs?, domain, codomain, true)?)
}

fn morph(gd: &FiniteGroupoid, name: &str) -> Result<Morph, IoError> {
    gd.by_name(name)
        .ok_or_else(|| IoError::Bad(format!("unknown morphism `{name}`")))
}

/// Loads a self-contained datum file.
pub fn load_datum(path: &Path, caps: &Caps) -> Result<(Arc<FiniteGroupoid>, Arc<FiniteRing>, Datum), IoError> {
    let spec: DatumSpec = read_json(path)?;
    let gspec: GroupoidSpec = read_json(&sibling(path, &spec.groupoid))?;
    let gd = Arc::new(FiniteGroupoid::validate_capped(&gspec, caps.groupoid)?);
    let rspec: RingSpec = read_json(&sibling(path, &spec.ring))?;
    let ring = rspec.build(caps.ring)?;
    let datum = build_datum_from_spec(&gd, &ring, &spec)?;
    Ok((gd, ring, datum))
}

pub fn build_datum_from_spec(
    gd: &Arc<FiniteGroupoid>,
    ring: &Arc<FiniteRing>,
    spec: &DatumSpec,
) -> Result<Datum, IoError> {
    let base = morph(gd, &spec.base)?;
    let mut choices = BTreeMap::new();
    for (y, t) in &spec.transversal {
        choices.insert(morph(gd, y)?, morph(gd, t)?);
    }
    let tau = Transversal::new(gd, base, &choices)?;
    let mut ideals = BTreeMap::new();
    for (y, ispec) in &spec.ideals {
        ideals.insert(morph(gd, y)?, build_ideal(ring, ispec)?);
    }
    let ix = ideals
        .get(&base)
        .ok_or_else(|| IoError::Bad("missing base object ideal".into()))?
        .clone();
    let mut tau_maps = BTreeMap::new();
    tau_maps.insert(base, RingMap::identity_on(&ix));
    for (y, mspec) in &spec.tau_maps {
        let y = morph(gd, y)?;
        let dom = build_ideal(ring, &mspec.domain)?;
        // codomain = image of the table
        let ran_elems: Result<Vec<El>, IoError> = mspec
            .table
            .values()
            .map(|v| Ok(ring.parse(v)?))
            .collect();
        let ran = Ideal::subgroup_from_elements(ring.clone(), &ran_elems?)?
            .with_found_identity();
        tau_maps.insert(y, build_map(ring, &mspec.table, dom, ran)?);
    }
    // group part: ideals first, then maps with domain I_{h⁻¹}
    let mut group_ideals = BTreeMap::new();
    group_ideals.insert(base, ix.clone());
    let mut tables = BTreeMap::new();
    for (h, gspec) in &spec.group_part {
        let h = morph(gd, h)?;
        group_ideals.insert(h, build_ideal(ring, &gspec.ideal)?);
        tables.insert(h, &gspec.table);
    }
    let mut group_maps = BTreeMap::new();
    group_maps.insert(base, RingMap::identity_on(&ix));
    for (&h, table) in &tables {
        let dom = group_ideals
            .get(&gd.inv(h))
            .ok_or_else(|| IoError::Bad(format!("missing ideal for `{}`", gd.name(gd.inv(h)))))?
            .clone();
        let cod = group_ideals[&h].clone();
        group_maps.insert(h, build_map(ring, table, dom, cod)?);
    }
    Ok(Datum::new(
        gd.clone(),
        ring.clone(),
        tau,
        ideals,
        tau_maps,
        group_ideals,
        group_maps,
    )?)
}

pub fn build_action_from_spec(
    gd: &Arc<FiniteGroupoid>,
    ring: &Arc<FiniteRing>,
    spec: &ActionSpec,
) -> Result<PartialAction, IoError> {
    let mut ideals: Vec<Option<Ideal>> = vec![None; gd.len()];
    for (g, ispec) in &spec.ideals {
        let g = morph(gd, g)?;
        ideals[g.0 as usize] = Some(build_ideal(ring, ispec)?);
    }
    let ideals: Vec<Ideal> = ideals
        .into_iter()
        .enumerate()
        .map(|(i, o)| {
            o.ok_or_else(|| {
                IoError::Bad(format!(
                    "missing ideal for morphism `{}`",
                    gd.name(Morph(i as u16))
                ))
            })
        })
        .collect::<Result<_, _>>()?;
    let mut maps: Vec<Option<RingMap>> = vec![None; gd.len()];
    for (g, table) in &spec.maps {
        let g = morph(gd, g)?;
        let dom = ideals[gd.inv(g).0 as usize].clone();
        let cod = ideals[g.0 as usize].clone();
        maps[g.0 as usize] = Some(build_map(ring, table, dom, cod)?);
    }
    let maps: Vec<RingMap> = maps
        .into_iter()
        .enumerate()
        .map(|(i, o)| {
            o.ok_or_else(|| {
                IoError::Bad(format!(
                    "missing map for morphism `{}`",
                    gd.name(Morph(i as u16))
                ))
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(PartialAction::new(gd.clone(), ring.clone(), ideals, maps)?)
}

/// Loads a bundle and builds both the datum and the action. A bundle's
/// own `options.cap` may raise the ring cap it is loaded under.
pub fn load_bundle(path: &Path, caps: &Caps) -> Result<LoadedBundle, IoError> {
    let spec: BundleSpec = read_json(path)?;
    let ring_cap = spec
        .options
        .as_ref()
        .and_then(|o| o.cap)
        .map_or(caps.ring, |c| c.max(caps.ring));
    let gspec: GroupoidSpec = read_json(&sibling(path, &spec.groupoid))?;
    let gd = Arc::new(FiniteGroupoid::validate_capped(&gspec, caps.groupoid)?);
    let rspec: RingSpec = read_json(&sibling(path, &spec.ring))?;
    let ring = rspec.build(ring_cap)?;

    let (datum, action, tau, action_given) = match (&spec.datum, &spec.action) {
        (Some(dpath), None) => {
            let dspec: DatumSpec = read_json(&sibling(path, dpath))?;
            let datum = build_datum_from_spec(&gd, &ring, &dspec)?;
            let action = datum.lift()?;
            let tau = datum.tau().clone();
            (datum, action, tau, false)
        }
        (None, Some(apath)) => {
            let aspec: ActionSpec = read_json(&sibling(path, apath))?;
            let action = build_action_from_spec(&gd, &ring, &aspec)?;
            let base = morph(
                &gd,
                spec.base
                    .as_deref()
                    .ok_or_else(|| IoError::Bad("action bundles need a base object".into()))?,
            )?;
            let mut choices = BTreeMap::new();
            for (y, t) in spec.transversal.iter().flatten() {
                choices.insert(morph(&gd, y)?, morph(&gd, t)?);
            }
            let tau = Transversal::new(&gd, base, &choices)?;
            let datum = Datum::extract(&action, &tau)?;
            (datum, action, tau, true)
        }
        _ => {
            return Err(IoError::Bad(
                "a bundle needs exactly one of `datum` or `action`".into(),
            ))
        }
    };
    let gdatum = match &spec.globalizable {
        Some(gpath) => {
            let full = sibling(path, gpath);
            let gdspec: GdatumSpec = read_json(&full)?;
            Some(build_gdatum(&gd, &ring, &datum, &gdspec)?)
        }
        None => None,
    };
    let name = spec.name.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "bundle".into())
    });
    Ok(LoadedBundle {
        name,
        groupoid: gd,
        ring,
        tau,
        datum,
        action,
        gdatum,
        action_given,
    })
}

pub fn build_gdatum_public(
    gd: &Arc<FiniteGroupoid>,
    ring: &Arc<FiniteRing>,
    datum: &Datum,
    spec: &GdatumSpec,
) -> Result<GlobalizableDatum, IoError> {
    build_gdatum(gd, ring, datum, spec)
}

fn build_gdatum(
    gd: &Arc<FiniteGroupoid>,
    ring: &Arc<FiniteRing>,
    datum: &Datum,
    spec: &GdatumSpec,
) -> Result<GlobalizableDatum, IoError> {
    let mut j_ideals = BTreeMap::new();
    for (y, ispec) in &spec.j_ideals {
        j_ideals.insert(morph(gd, y)?, build_ideal(ring, ispec)?);
    }
    let jx = j_ideals
        .get(&datum.base())
        .ok_or_else(|| IoError::Bad("missing J ideal at the base object".into()))?
        .clone();
    let mut tau_exts = BTreeMap::new();
    tau_exts.insert(datum.base(), RingMap::identity_on(&jx));
    for (y, table) in &spec.tau_extensions {
        let y = morph(gd, y)?;
        let cod = j_ideals
            .get(&y)
            .ok_or_else(|| IoError::Bad(format!("missing J ideal at `{}`", gd.name(y))))?
            .clone();
        tau_exts.insert(y, build_map(ring, table, jx.clone(), cod)?);
    }
    let mut group_exts = BTreeMap::new();
    group_exts.insert(datum.base(), RingMap::identity_on(&jx));
    for (h, table) in &spec.group_globalization {
        let h = morph(gd, h)?;
        group_exts.insert(h, build_map(ring, table, jx.clone(), jx.clone())?);
    }
    Ok(GlobalizableDatum::new(
        datum.clone(),
        j_ideals,
        tau_exts,
        group_exts,
    )?)
}

// ----- writing -------------------------------------------------------------------

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    std::fs::write(path, text + "\n").map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn ideal_spec(ideal: &Ideal) -> IdealSpec {
    let ring = ideal.ring();
    match ideal.generator_idempotent() {
        Some(e) => IdealSpec::Idempotent {
            idempotent: ring.name(e).to_string(),
        },
        None => IdealSpec::Elements {
            elements: ideal
                .members()
                .iter()
                .map(|&a| ring.name(a).to_string())
                .collect(),
        },
    }
}

fn map_table(map: &RingMap) -> BTreeMap<String, String> {
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

/// Serializes a datum, referencing the given groupoid/ring file names.
pub fn datum_spec(datum: &Datum, groupoid_file: &str, ring_file: &str) -> DatumSpec {
    let gd = datum.groupoid();
    let base = datum.base();
    DatumSpec {
        groupoid: groupoid_file.to_string(),
        ring: ring_file.to_string(),
        base: gd.name(base).to_string(),
        transversal: datum
            .tau()
            .entries()
            .map(|(y, t)| (gd.name(y).to_string(), gd.name(t).to_string()))
            .collect(),
        ideals: gd
            .objects()
            .iter()
            .map(|&y| (gd.name(y).to_string(), ideal_spec(datum.object_ideal(y))))
            .collect(),
        tau_maps: gd
            .objects()
            .iter()
            .filter(|&&y| y != base)
            .map(|&y| {
                let m = datum.tau_map(y);
                (
                    gd.name(y).to_string(),
                    TauMapSpec {
                        domain: ideal_spec(m.domain()),
                        table: map_table(m),
                    },
                )
            })
            .collect(),
        group_part: datum
            .group_members()
            .into_iter()
            .filter(|&h| h != base)
            .map(|h| {
                (
                    gd.name(h).to_string(),
                    GroupPartSpec {
                        ideal: ideal_spec(datum.group_ideal(h)),
                        table: map_table(datum.group_map(h)),
                    },
                )
            })
            .collect(),
    }
}

pub fn action_spec(action: &PartialAction) -> ActionSpec {
    let gd = action.groupoid();
    ActionSpec {
        ideals: gd
            .morphisms()
            .map(|g| (gd.name(g).to_string(), ideal_spec(action.ideal(g))))
            .collect(),
        maps: gd
            .morphisms()
            .map(|g| (gd.name(g).to_string(), map_table(action.map(g))))
            .collect(),
    }
}

/// Reconstructs the declarative ring description.
pub fn ring_spec(ring: &Arc<FiniteRing>) -> RingSpec {
    match ring.structure() {
        RingStructure::Zmod(n) => RingSpec::Zmod { n: *n },
        RingStructure::Gf { p, k, .. } => RingSpec::Gf { p: *p, k: *k },
        RingStructure::Product(fs) => RingSpec::Product {
            factors: fs.iter().map(ring_spec).collect(),
        },
        RingStructure::Table => {
            let names: Vec<String> = ring
                .elements()
                .map(|e| ring.name(e).to_string())
                .collect();
            let table = |f: &dyn Fn(El, El) -> El| -> Vec<Vec<String>> {
                ring.elements()
                    .map(|a| {
                        ring.elements()
                            .map(|b| ring.name(f(a, b)).to_string())
                            .collect()
                    })
                    .collect()
            };
            RingSpec::Table {
                elements: names,
                add: table(&|a, b| ring.add(a, b)),
                mul: table(&|a, b| ring.mul(a, b)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn datum_round_trips_through_json() {
        let dir = std::env::temp_dir().join(format!("galg-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let inst = instances::pair_swap();
        write_json(&dir.join("g.json"), &inst.groupoid.to_spec()).unwrap();
        write_json(&dir.join("r.json"), &ring_spec(&inst.ring)).unwrap();
        write_json(
            &dir.join("d.json"),
            &datum_spec(&inst.datum, "g.json", "r.json"),
        )
        .unwrap();
        let caps = Caps::default();
        let (_, _, datum) = load_datum(&dir.join("d.json"), &caps).unwrap();
        assert!(datum.eq_datum(&inst.datum));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn bundle_with_action_extracts_a_datum() {
        let dir = std::env::temp_dir().join(format!("galg-io2-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let inst = instances::pair_swap();
        write_json(&dir.join("g.json"), &inst.groupoid.to_spec()).unwrap();
        write_json(&dir.join("r.json"), &ring_spec(&inst.ring)).unwrap();
        write_json(&dir.join("a.json"), &action_spec(&inst.action)).unwrap();
        let bundle = BundleSpec {
            name: Some("t".into()),
            groupoid: "g.json".into(),
            ring: "r.json".into(),
            datum: None,
            action: Some("a.json".into()),
            globalizable: None,
            base: Some("(1,1)".into()),
            transversal: None,
            options: None,
        };
        write_json(&dir.join("b.json"), &bundle).unwrap();
        let loaded = load_bundle(&dir.join("b.json"), &Caps::default()).unwrap();
        assert!(loaded.action_given);
        assert!(loaded.datum.eq_datum(&inst.datum));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn skew_elements_serialize_as_term_lists() {
        let inst = instances::pair_swap();
        let skew = crate::skewring::SkewRing::new(inst.action.clone()).unwrap();
        let one = skew.identity();
        let spec = skew_elem_spec(&one);
        let json = serde_json::to_value(&spec).unwrap();
        let terms = json["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 2);
        assert!(terms
            .iter()
            .any(|t| t["g"] == "(1,1)" && t["coeff"] == "e1"));
        assert!(terms
            .iter()
            .any(|t| t["g"] == "(2,2)" && t["coeff"] == "e2"));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        match load_bundle(Path::new("/nonexistent/b.json"), &Caps::default()) {
            Err(IoError::Read { .. }) => {}
            Err(other) => panic!("expected a read error, got {other}"),
            Ok(_) => panic!("expected a read error"),
        }
    }
}
