//! The theorem registry: named checks over a loaded bundle, producing a
//! machine-readable report.
//!
//! Every registered check appears in every report exactly once, as
//! `pass`, `fail`, or `skipped` with the gating reason. Checks that
//! depend on the standing assumptions (lifted, `τ(x)`-global,
//! `γ`-unital, `A = ⊕ B_y`) are skipped with the violated assumption
//! when it does not hold. A `fail` whose message records a broken
//! theorem-level equivalence marks the whole report inconsistent — that
//! signals an implementation bug, not a property of the instance.

use crate::action::Datum;
use crate::globalization;
use crate::groupoid::Transversal;
use crate::invariants::{self, InvariantsError, LiftedContext};
use crate::io::{Caps, LoadedBundle};
use crate::morita::{self, MoritaError};
use crate::skewring::{self, SkewRing};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

/// Stable identifiers for every registered check, in report order.
pub const REGISTRY: &[&str] = &[
    "groupoid-axioms",
    "projection-is-morphism",
    "datum-conditions",
    "action-axioms",
    "lift-restricts-to-group-part",
    "extract-lift-identity",
    "lift-extract-order",
    "rebase-independence",
    "tau-global-criterion",
    "globalizability-criterion",
    "globalization-axioms",
    "induced-pair-action",
    "theta-partial-action",
    "skew-ring-laws",
    "iterated-skew-isomorphism",
    "invariance-criterion",
    "trace-transport",
    "trace-sum",
    "trace-surjectivity-equivalence",
    "skew-morita-context",
    "pairing-surjectivity-equivalence",
    "galois-strictness-equivalence",
    "galois-coordinates-search",
    "separability-equivalence",
    "semisimplicity-corollary",
    "frobenius-witness",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremEntry {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub instance: String,
    pub entries: Vec<TheoremEntry>,
    /// true when some equivalence the theory guarantees evaluated
    /// inconsistently — an implementation bug signal
    pub inconsistent: bool,
    /// structured invariants/Morita summaries, present under the
    /// standing assumptions
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summaries: Option<Summaries>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

#[derive(Debug, Serialize)]
pub struct Summaries {
    pub invariants: invariants::InvariantsReport,
    pub morita: morita::MoritaReport,
}

impl VerificationReport {
    pub fn failed(&self) -> bool {
        self.entries.iter().any(|e| e.status == Status::Fail)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub theorems: Option<Vec<String>>,
    pub seed: u64,
    pub caps: Caps,
    pub jobs: usize,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            theorems: None,
            seed: 0,
            caps: Caps::default(),
            jobs: 1,
            timings: false,
        }
    }
}

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
    /// a theorem-level equivalence failed: implementation bug
    Inconsistent(String),
}

/// Shared state the checks run against.
struct Prepared {
    datum: Datum,
    action: crate::action::PartialAction,
    tau: Transversal,
    lifted: Option<LiftedContext>,
    standing_reason: Option<String>,
    skew: Option<Arc<SkewRing>>,
}

fn prepare(bundle: &LoadedBundle) -> Prepared {
    let (lifted, standing_reason) = match LiftedContext::new(bundle.datum.clone()) {
        Ok(ctx) => (Some(ctx), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let skew = SkewRing::new(bundle.action.clone()).ok();
    Prepared {
        datum: bundle.datum.clone(),
        action: bundle.action.clone(),
        tau: bundle.tau.clone(),
        lifted,
        standing_reason,
        skew,
    }
}

fn standing<'a>(p: &'a Prepared) -> Result<&'a LiftedContext, Outcome> {
    p.lifted.as_ref().ok_or_else(|| {
        Outcome::Skip(format!(
            "standing assumptions do not hold: {}",
            p.standing_reason.as_deref().unwrap_or("unknown")
        ))
    })
}

fn classify_invariants(e: InvariantsError) -> Outcome {
    match e {
        InvariantsError::InconsistentEquivalence(msg) => Outcome::Inconsistent(msg),
        other => Outcome::Fail(other.to_string()),
    }
}

fn classify_morita(e: MoritaError) -> Outcome {
    match e {
        MoritaError::InconsistentEquivalence(msg) => Outcome::Inconsistent(msg),
        MoritaError::Invariants(InvariantsError::InconsistentEquivalence(msg)) => {
            Outcome::Inconsistent(msg)
        }
        MoritaError::Tensor(crate::tensor::TensorError::CapExceeded { k, cap }) => {
            Outcome::Skip(format!("tensor cap exceeded: {k} > {cap}"))
        }
        other => Outcome::Fail(other.to_string()),
    }
}

fn run_check(id: &str, bundle: &LoadedBundle, p: &Prepared, opts: &VerifyOptions) -> Outcome {
    match id {
        "groupoid-axioms" => {
            let spec = bundle.groupoid.to_spec();
            match crate::groupoid::FiniteGroupoid::validate_capped(&spec, opts.caps.groupoid) {
                Ok(gd) => {
                    let total: usize = gd.connected_components().iter().map(|c| c.len()).sum();
                    if total == gd.len() {
                        Outcome::Pass(format!(
                            "{} morphisms, {} objects, {} component(s)",
                            gd.len(),
                            gd.objects().len(),
                            gd.connected_components().len()
                        ))
                    } else {
                        Outcome::Fail("components do not partition the groupoid".into())
                    }
                }
                Err(e) => Outcome::Fail(e.to_string()),
            }
        }
        "projection-is-morphism" => {
            let gd = &bundle.groupoid;
            let tau = &p.tau;
            for a in gd.morphisms() {
                for b in gd.morphisms() {
                    if let Some(ab) = gd.compose(a, b) {
                        if tau.project(gd, ab)
                            != gd.compose2(tau.project(gd, a), tau.project(gd, b))
                        {
                            return Outcome::Fail(format!(
                                "π not multiplicative at (`{}`, `{}`)",
                                gd.name(a),
                                gd.name(b)
                            ));
                        }
                    }
                }
            }
            let x = tau.base();
            for h in gd.isotropy_group(x).expect("base is an object").members() {
                if tau.project(gd, *h) != *h {
                    return Outcome::Fail(format!("π moves `{}`", gd.name(*h)));
                }
            }
            for (_, t) in tau.entries() {
                if tau.project(gd, t) != x {
                    return Outcome::Fail(format!("π(τ) ≠ x at `{}`", gd.name(t)));
                }
            }
            Outcome::Pass("π is a morphism fixing G(x) and collapsing τ(x)".into())
        }
        "datum-conditions" => match p.datum.revalidate() {
            Ok(()) => Outcome::Pass("conditions (a)–(f) hold".into()),
            Err(e) => Outcome::Fail(e.to_string()),
        },
        "action-axioms" => match p.action.revalidate() {
            Ok(()) => Outcome::Pass(format!(
                "identity, extension and compatibility laws hold{}",
                if p.action.is_global() { "; global" } else { "" }
            )),
            Err(e) => Outcome::Fail(e.to_string()),
        },
        "lift-restricts-to-group-part" => {
            let lifted = match p.datum.lift() {
                Ok(a) => a,
                Err(e) => return Outcome::Fail(e.to_string()),
            };
            for h in p.datum.group_members() {
                if !lifted.ideal(h).same_set(p.datum.group_ideal(h))
                    || lifted.map(h) != p.datum.group_map(h)
                {
                    return Outcome::Fail(format!(
                        "restriction differs at `{}`",
                        bundle.groupoid.name(h)
                    ));
                }
            }
            Outcome::Pass("lift validates and restricts to the group part".into())
        }
        "extract-lift-identity" => {
            let lifted = match p.datum.lift() {
                Ok(a) => a,
                Err(e) => return Outcome::Fail(e.to_string()),
            };
            match Datum::extract(&lifted, p.datum.tau()) {
                Ok(back) if back.eq_datum(&p.datum) => {
                    Outcome::Pass("extract ∘ lift is the identity on the datum".into())
                }
                Ok(_) => Outcome::Fail("extract ∘ lift changed the datum".into()),
                Err(e) => Outcome::Fail(e.to_string()),
            }
        }
        "lift-extract-order" => {
            let back = match Datum::extract(&p.action, &p.tau) {
                Ok(d) => d,
                Err(e) => return Outcome::Fail(e.to_string()),
            };
            let relift = match back.lift() {
                Ok(a) => a,
                Err(e) => return Outcome::Fail(e.to_string()),
            };
            if !relift.leq(&p.action).unwrap_or(false) {
                return Outcome::Fail("lift(extract(α)) is not ≤ α".into());
            }
            let eq = relift.eq_action(&p.action).unwrap_or(false);
            let cond = crate::action::lift_extract_equality_condition(&p.action, &p.tau);
            if eq != cond {
                return Outcome::Inconsistent(format!(
                    "equality = {eq} but the containment condition = {cond}"
                ));
            }
            Outcome::Pass(format!(
                "lift(extract(α)) ≤ α; equality = {eq}, matching the criterion"
            ))
        }
        "rebase-independence" => {
            let gd = &bundle.groupoid;
            let mut pairs = 0;
            for &z in gd.objects() {
                let lam = match Transversal::new(
                    gd,
                    z,
                    &BTreeMap::from([(p.datum.base(), gd.inv(p.datum.tau().tau(z)))]),
                ) {
                    Ok(t) => t,
                    Err(e) => return Outcome::Fail(e.to_string()),
                };
                let there = match p.datum.rebase(&lam) {
                    Ok(d) => d,
                    Err(e) => return Outcome::Fail(format!("rebase invalid: {e}")),
                };
                let back = match there.rebase(p.datum.tau()) {
                    Ok(d) => d,
                    Err(e) => return Outcome::Fail(format!("return rebase invalid: {e}")),
                };
                if !back.eq_datum(&p.datum) {
                    return Outcome::Fail(format!(
                        "round trip through `{}` is not the identity",
                        gd.name(z)
                    ));
                }
                pairs += 1;
            }
            Outcome::Pass(format!("{pairs} matched base-change round trip(s)"))
        }
        "tau-global-criterion" => {
            let datum_full = bundle.groupoid.objects().iter().all(|&y| {
                p.datum
                    .tau_map(y)
                    .domain()
                    .same_set(p.datum.object_ideal(p.datum.base()))
                    && p.datum.tau_map(y).codomain().same_set(p.datum.object_ideal(y))
            });
            let action_side = p.action.is_tau_global(&p.tau);
            if datum_full != action_side {
                Outcome::Inconsistent(format!(
                    "datum fullness = {datum_full}, action τ(x)-globality = {action_side}"
                ))
            } else {
                Outcome::Pass(format!("both criteria agree: τ(x)-global = {action_side}"))
            }
        }
        "globalizability-criterion" => match globalization::is_globalizable(&p.action) {
            Ok(rep) => {
                let datum_level = globalization::lifted_globalizable_check(&p.datum);
                if rep.is_globalizable() != datum_level {
                    Outcome::Inconsistent(format!(
                        "action-level = {}, datum-level = {datum_level}",
                        rep.is_globalizable()
                    ))
                } else {
                    Outcome::Pass(format!(
                        "globalizable = {}{}",
                        rep.is_globalizable(),
                        rep.witness
                            .map(|w| format!(
                                " (no identity at `{}`)",
                                bundle.groupoid.name(w)
                            ))
                            .unwrap_or_default()
                    ))
                }
            }
            Err(e) => Outcome::Skip(e.to_string()),
        },
        "globalization-axioms" => match &bundle.gdatum {
            Some(gdatum) => match gdatum.build_global_action() {
                Ok(glob) => {
                    let lifted = match p.datum.lift() {
                        Ok(a) => a,
                        Err(e) => return Outcome::Fail(e.to_string()),
                    };
                    match globalization::verify_globalization(&lifted, &glob) {
                        Ok(()) => Outcome::Pass("axioms (a)–(d) verified".into()),
                        Err(e) => Outcome::Fail(e.to_string()),
                    }
                }
                Err(e) => Outcome::Fail(e.to_string()),
            },
            None => Outcome::Skip("no globalizable datum in the bundle".into()),
        },
        "induced-pair-action" => match skewring::alpha_star(&p.action, &p.tau) {
            Ok((base, star)) => {
                for u in base.groupoid.morphisms() {
                    for v in base.groupoid.morphisms() {
                        if let Some(uv) = base.groupoid.compose(u, v) {
                            if &star.map(u).compose(star.map(v)) != star.map(uv) {
                                return Outcome::Fail(
                                    "pair-action composition law fails".into(),
                                );
                            }
                        }
                    }
                }
                Outcome::Pass("global pair-groupoid action with exact composition".into())
            }
            Err(e) => Outcome::Skip(e.to_string()),
        },
        "theta-partial-action" => match skewring::ThetaData::new(&p.action, &p.tau) {
            Ok(theta) => Outcome::Pass(format!(
                "θ verified on {} isotropy members",
                theta.members.len()
            )),
            Err(skewring::SkewError::NotTauGlobal) => {
                Outcome::Skip("action is not τ(x)-global".into())
            }
            Err(skewring::SkewError::NotUnitalAction) => {
                Outcome::Skip("action is not unital".into())
            }
            Err(e) => Outcome::Fail(e.to_string()),
        },
        "skew-ring-laws" => match &p.skew {
            Some(skew) => {
                match skew.verify_ring_laws_capped(opts.seed, 200_000) {
                    Ok(()) => Outcome::Pass(format!(
                        "identity and associativity over {} generators",
                        skew.gens().len()
                    )),
                    Err(e) => Outcome::Fail(e.to_string()),
                }
            }
            None => Outcome::Skip("action is not unital".into()),
        },
        "iterated-skew-isomorphism" => match &p.skew {
            Some(skew) => match skewring::phi_iso(skew, &p.tau) {
                Ok(phi) => Outcome::Pass(format!(
                    "φ additive, multiplicative on {} generator pairs, bijective on {} components",
                    phi.pairs_checked,
                    phi.components.len()
                )),
                Err(skewring::SkewError::NotTauGlobal) => {
                    Outcome::Skip("action is not τ(x)-global".into())
                }
                Err(e) => Outcome::Fail(e.to_string()),
            },
            None => Outcome::Skip("action is not unital".into()),
        },
        "invariance-criterion" => match standing(p) {
            Ok(ctx) => match invariants::check_invariance_criterion(ctx) {
                Ok(()) => Outcome::Pass("datum criterion matches the direct definition".into()),
                Err(e) => classify_invariants(e),
            },
            Err(o) => o,
        },
        "trace-transport" => match standing(p) {
            Ok(ctx) => match invariants::check_trace_transport(ctx) {
                Ok(()) => Outcome::Pass("t_β of transported elements factors as claimed".into()),
                Err(e) => classify_invariants(e),
            },
            Err(o) => o,
        },
        "trace-sum" => match standing(p) {
            Ok(ctx) => match invariants::check_trace_sum(ctx) {
                Ok(()) => Outcome::Pass("component-sum trace identity holds".into()),
                Err(e) => classify_invariants(e),
            },
            Err(o) => o,
        },
        "trace-surjectivity-equivalence" => match standing(p) {
            Ok(ctx) => match invariants::trace_surjectivity(ctx) {
                Ok(s) => Outcome::Pass(format!(
                    "t_β onto = {}, group-part onto = {}",
                    s.full, s.group_part
                )),
                Err(e) => classify_invariants(e),
            },
            Err(o) => o,
        },
        "skew-morita-context" => match standing(p) {
            Ok(ctx) => match morita::skew_skew_context(ctx) {
                Ok(mc) => Outcome::Pass(format!(
                    "spans verified; μ onto = {}, ν onto = {}",
                    mc.mu_surjective, mc.nu_surjective
                )),
                Err(e) => classify_morita(e),
            },
            Err(o) => o,
        },
        "pairing-surjectivity-equivalence" => match standing(p) {
            Ok(ctx) => match morita::gamma_surjectivity(ctx) {
                Ok(g) => Outcome::Pass(format!(
                    "Γ onto = {}, Γ' onto = {}; group level agrees",
                    g.gamma, g.gamma_prime
                )),
                Err(e) => classify_morita(e),
            },
            Err(o) => o,
        },
        "galois-strictness-equivalence" => match standing(p) {
            Ok(ctx) => match morita::strictness_report(ctx, true) {
                Ok(rep) => Outcome::Pass(format!(
                    "all four conditions = {}; strict = {}",
                    rep.strict, rep.strict
                )),
                Err(e) => classify_morita(e),
            },
            Err(o) => o,
        },
        "galois-coordinates-search" => match standing(p) {
            Ok(ctx) => {
                let strict = match morita::strictness_report(ctx, true) {
                    Ok(rep) => rep.galois,
                    Err(e) => return classify_morita(e),
                };
                match morita::search_galois(ctx, 2, opts.caps.galois_candidates) {
                    Ok(Some(coords)) => {
                        if !strict {
                            Outcome::Inconsistent(
                                "search found coordinates but Γ' is not onto".into(),
                            )
                        } else {
                            Outcome::Pass(format!(
                                "verified coordinates with {} pairs",
                                coords.pairs.len()
                            ))
                        }
                    }
                    Ok(None) => {
                        if strict {
                            Outcome::Pass(
                                "Galois, but no generator-supported coordinates of rank ≤ 2"
                                    .into(),
                            )
                        } else {
                            Outcome::Pass("not Galois; search agrees (no coordinates)".into())
                        }
                    }
                    Err(e) => classify_morita(e),
                }
            }
            Err(o) => o,
        },
        "separability-equivalence" => match standing(p) {
            Ok(ctx) => match morita::separability_element(ctx) {
                Ok(rep) => Outcome::Pass(format!(
                    "separable = {}{}",
                    rep.separable,
                    rep.witness
                        .as_deref()
                        .map(|w| format!("; witness {w}"))
                        .unwrap_or_default()
                )),
                Err(e) => classify_morita(e),
            },
            Err(o) => o,
        },
        "semisimplicity-corollary" => match standing(p) {
            Ok(ctx) => match morita::separability_element(ctx) {
                Ok(rep) if rep.separable => Outcome::Pass(
                    "separable, hence both extensions are semisimple".into(),
                ),
                Ok(_) => Outcome::Skip("extension is not separable; corollary not applicable".into()),
                Err(e) => classify_morita(e),
            },
            Err(o) => o,
        },
        "frobenius-witness" => match standing(p) {
            Ok(ctx) => match morita::frobenius_both(ctx, opts.caps.tensor) {
                Ok((full, group)) => Outcome::Pass(format!(
                    "central element and counit verified; tensor sizes {} and {}",
                    full.tensor_size, group.tensor_size
                )),
                Err(e) => classify_morita(e),
            },
            Err(o) => o,
        },
        other => Outcome::Skip(format!("unknown check `{other}`")),
    }
}

/// Runs the registry over a bundle.
pub fn run_registry(bundle: &LoadedBundle, opts: &VerifyOptions) -> VerificationReport {
    let prepared = prepare(bundle);
    let selected: Vec<&'static str> = REGISTRY.to_vec();
    let wanted = |id: &str| -> bool {
        opts.theorems
            .as_ref()
            .map(|list| list.iter().any(|t| t == id))
            .unwrap_or(true)
    };

    let mut results: Vec<(usize, Outcome, u128)> = Vec::with_capacity(selected.len());
    let run_one = |idx: usize, id: &'static str| -> (usize, Outcome, u128) {
        if !wanted(id) {
            return (idx, Outcome::Skip("not selected".into()), 0);
        }
        let start = Instant::now();
        let outcome = run_check(id, bundle, &prepared, opts);
        (idx, outcome, start.elapsed().as_millis())
    };
    if opts.jobs <= 1 {
        for (idx, id) in selected.iter().enumerate() {
            results.push(run_one(idx, id));
        }
    } else {
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for chunk in selected
                .iter()
                .enumerate()
                .collect::<Vec<_>>()
                .chunks(selected.len().div_ceil(opts.jobs))
            {
                let chunk: Vec<(usize, &'static str)> =
                    chunk.iter().map(|&(i, &id)| (i, id)).collect();
                let run_ref = &run_one;
                handles.push(scope.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|(i, id)| run_ref(i, id))
                        .collect::<Vec<_>>()
                }));
            }
            for h in handles {
                results.extend(h.join().expect("check thread"));
            }
        });
    }
    results.sort_by_key(|&(i, _, _)| i);

    let mut entries = Vec::with_capacity(selected.len());
    let mut inconsistent = false;
    let mut timings = BTreeMap::new();
    for ((idx, outcome, ms), id) in results.into_iter().zip(REGISTRY) {
        let _ = idx;
        let (status, detail) = match outcome {
            Outcome::Pass(d) => (Status::Pass, d),
            Outcome::Fail(d) => (Status::Fail, d),
            Outcome::Skip(d) => (Status::Skipped, d),
            Outcome::Inconsistent(d) => {
                inconsistent = true;
                (Status::Fail, format!("equivalence violated: {d}"))
            }
        };
        timings.insert(id.to_string(), ms);
        entries.push(TheoremEntry {
            id: id.to_string(),
            status,
            detail,
        });
    }
    let summaries = prepared.lifted.as_ref().and_then(|ctx| {
        let inv = invariants::invariants_report(ctx).ok()?;
        let mor = morita::morita_report(ctx, opts.caps.tensor).ok()?;
        Some(Summaries {
            invariants: inv,
            morita: mor,
        })
    });
    VerificationReport {
        instance: bundle.name.clone(),
        entries,
        inconsistent,
        summaries,
        timings_ms: opts.timings.then_some(timings),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn bundle_for(inst: &'static instances::Instance) -> LoadedBundle {
        LoadedBundle {
            name: inst.name.to_string(),
            groupoid: inst.groupoid.clone(),
            ring: inst.ring.clone(),
            tau: inst.tau.clone(),
            datum: inst.datum.clone(),
            action: inst.action.clone(),
            gdatum: None,
            action_given: false,
        }
    }

    #[test]
    fn registry_covers_every_id_once() {
        let report = run_registry(&bundle_for(instances::pair_swap()), &VerifyOptions::default());
        assert_eq!(report.entries.len(), REGISTRY.len());
        let mut ids: Vec<&str> = report.entries.iter().map(|e| e.id.as_str()).collect();
        ids.dedup();
        assert_eq!(ids.len(), REGISTRY.len());
        assert!(!report.failed(), "{report:#?}");
        assert!(!report.inconsistent);
    }

    #[test]
    fn galois_instance_passes_all_checks() {
        let report = run_registry(&bundle_for(instances::pair_swap()), &VerifyOptions::default());
        for e in &report.entries {
            if e.id == "globalization-axioms" {
                assert_eq!(e.status, Status::Skipped);
            } else {
                assert_eq!(e.status, Status::Pass, "{}: {}", e.id, e.detail);
            }
        }
    }

    #[test]
    fn non_standing_instance_skips_the_gated_checks() {
        let report = run_registry(&bundle_for(instances::restrict3()), &VerifyOptions::default());
        assert!(!report.failed(), "{report:#?}");
        let by_id = |id: &str| {
            report
                .entries
                .iter()
                .find(|e| e.id == id)
                .unwrap()
                .status
        };
        assert_eq!(by_id("datum-conditions"), Status::Pass);
        assert_eq!(by_id("extract-lift-identity"), Status::Pass);
        assert_eq!(by_id("theta-partial-action"), Status::Skipped);
        assert_eq!(by_id("invariance-criterion"), Status::Skipped);
        assert_eq!(by_id("frobenius-witness"), Status::Skipped);
    }

    #[test]
    fn globalization_check_runs_with_a_gdatum() {
        let mut bundle = bundle_for(instances::shift3());
        bundle.gdatum = Some(crate::globalization::shift3_globalizable());
        let report = run_registry(&bundle, &VerifyOptions::default());
        let glob = report
            .entries
            .iter()
            .find(|e| e.id == "globalization-axioms")
            .unwrap();
        assert_eq!(glob.status, Status::Pass, "{}", glob.detail);
        assert!(!report.failed(), "{report:#?}");
    }

    #[test]
    fn selector_skips_unselected_checks() {
        let opts = VerifyOptions {
            theorems: Some(vec!["groupoid-axioms".into()]),
            ..Default::default()
        };
        let report = run_registry(&bundle_for(instances::char2_trivial()), &opts);
        assert_eq!(report.entries.len(), REGISTRY.len());
        assert_eq!(report.entries[0].status, Status::Pass);
        assert!(report
            .entries
            .iter()
            .skip(1)
            .all(|e| e.status == Status::Skipped));
    }

    #[test]
    fn parallel_run_matches_sequential() {
        let seq = run_registry(&bundle_for(instances::char2_trivial()), &VerifyOptions::default());
        let par = run_registry(
            &bundle_for(instances::char2_trivial()),
            &VerifyOptions {
                jobs: 4,
                ..Default::default()
            },
        );
        let s: Vec<(String, Status)> = seq.entries.iter().map(|e| (e.id.clone(), e.status)).collect();
        let p: Vec<(String, Status)> = par.entries.iter().map(|e| (e.id.clone(), e.status)).collect();
        assert_eq!(s, p);
    }

    #[test]
    fn report_serializes_deterministically() {
        let a = run_registry(&bundle_for(instances::char2_trivial()), &VerifyOptions::default());
        let b = run_registry(&bundle_for(instances::char2_trivial()), &VerifyOptions::default());
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
