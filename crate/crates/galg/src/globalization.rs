//! Globalization of partial groupoid actions.
//!
//! A globalization of a partial action `α` on `A` is a global action
//! `α̃ = (Ã_g, α̃_g)` (here carried by the same finite ring, with the
//! ideals `Ã_g` cut out inside it) such that
//!
//! * (a) `A_y` is an ideal of `Ã_y` for every object `y`,
//! * (b) `A_g = A_{t(g)} ∩ α̃_g(A_{s(g)})`,
//! * (c) `α̃_g` extends `α_g`,
//! * (d) `Ã_g = Σ_{t(h) = t(g)} α̃_h(A_{s(h)})` as an additive span.
//!
//! A partial action with unital object ideals is globalizable exactly
//! when every `A_g` is a unital ring. For a lifted action this reduces
//! to unitality of the datum's ideals, and when the datum itself carries
//! a globalization — a global group action `(J_x, γ̃_(x))` extending the
//! group part plus extended transversal isomorphisms `γ̃_{τ_y} : J_x → J_y`
//! — the global action is produced explicitly as
//! `β̃_g = γ̃_{τ_{t(g)}} ∘ γ̃_{g_x} ∘ γ̃_{τ_{s(g)}}⁻¹ : J_{s(g)} → J_{t(g)}`.

use crate::action::{ActionError, Datum, PartialAction};
use crate::groupoid::Morph;
use crate::ideal::{Ideal, RingMap};
use crate::ring::{El, RingError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GlobError {
    #[error("object ideal at `{0}` is not unital")]
    ObjectIdealNotUnital(String),
    #[error("globalizable-datum condition ({condition}) fails: {witness}")]
    ConditionFails { condition: char, witness: String },
    #[error("globalization axiom ({axiom}) fails: {witness}")]
    AxiomFails { axiom: char, witness: String },
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Outcome of the unitality criterion on a partial action.
#[derive(Debug)]
pub struct Globalizability {
    /// identity of each `A_g`, indexed by morphism, when all exist
    pub units: Option<Vec<El>>,
    /// a morphism whose ideal has no identity, otherwise
    pub witness: Option<Morph>,
}

impl Globalizability {
    pub fn is_globalizable(&self) -> bool {
        self.units.is_some()
    }
}

/// Decides globalizability of a partial action whose object ideals are
/// unital: possible exactly when every `A_g` has an identity.
pub fn is_globalizable(action: &PartialAction) -> Result<Globalizability, GlobError> {
    let gd = action.groupoid();
    for &y in gd.objects() {
        if action.ideal(y).find_identity().is_none() {
            return Err(GlobError::ObjectIdealNotUnital(gd.name(y).to_string()));
        }
    }
    let mut units = Vec::new();
    for g in gd.morphisms() {
        match action.ideal(g).find_identity() {
            Some(e) => units.push(e),
            None => {
                return Ok(Globalizability {
                    units: None,
                    witness: Some(g),
                })
            }
        }
    }
    Ok(Globalizability {
        units: Some(units),
        witness: None,
    })
}

/// The datum-level criterion: the group part globalizes (every `I_h`
/// unital) and every `I_y`, `I_{τ_y⁻¹}` is unital.
pub fn lifted_globalizable_check(datum: &Datum) -> bool {
    let gd = datum.groupoid();
    datum
        .group_members()
        .iter()
        .all(|&h| datum.group_ideal(h).find_identity().is_some())
        && gd.objects().iter().all(|&y| {
            datum.object_ideal(y).find_identity().is_some()
                && datum.tau_map(y).domain().find_identity().is_some()
        })
}

/// A datum together with an explicit globalization of its group part and
/// extensions of its transversal isomorphisms, all inside one ambient
/// ring.
#[derive(Debug)]
pub struct GlobalizableDatum {
    datum: Datum,
    j_ideals: BTreeMap<Morph, Ideal>,
    tau_exts: BTreeMap<Morph, RingMap>,
    group_exts: BTreeMap<Morph, RingMap>,
}

impl GlobalizableDatum {
    /// Validates the three conditions:
    /// (a) `I_x` is unital and `(J_x, γ̃_(x))` globalizes the group part,
    /// (b) each `I_y` is an ideal of `J_y` and `γ̃_{τ_y}` extends `γ_{τ_y}`,
    /// (c) `I_{τ_y⁻¹} = I_x` and `I_{τ_y} = I_y`.
    pub fn new(
        datum: Datum,
        j_ideals: BTreeMap<Morph, Ideal>,
        tau_exts: BTreeMap<Morph, RingMap>,
        group_exts: BTreeMap<Morph, RingMap>,
    ) -> Result<Self, GlobError> {
        let gd = datum.groupoid().clone();
        let x = datum.base();
        for &y in gd.objects() {
            for (present, what) in [
                (j_ideals.contains_key(&y), "J ideal"),
                (tau_exts.contains_key(&y), "extended transversal map"),
            ] {
                if !present {
                    return Err(GlobError::ConditionFails {
                        condition: 'b',
                        witness: format!("missing {what} at `{}`", gd.name(y)),
                    });
                }
            }
        }
        let jx = &j_ideals[&x];

        // (c) the datum is full: I_{τ_y⁻¹} = I_x and I_{τ_y} = I_y
        for &y in gd.objects() {
            if !datum.tau_map(y).domain().same_set(datum.object_ideal(x)) {
                return Err(GlobError::ConditionFails {
                    condition: 'c',
                    witness: format!("I_τ⁻¹ at `{}` is a proper ideal of I_x", gd.name(y)),
                });
            }
            if !datum.tau_map(y).codomain().same_set(datum.object_ideal(y)) {
                return Err(GlobError::ConditionFails {
                    condition: 'c',
                    witness: format!("I_τ at `{}` is a proper ideal of I_y", gd.name(y)),
                });
            }
        }

        // (a) I_x unital and (J_x, γ̃) a globalization of the group part
        if datum.object_ideal(x).find_identity().is_none() {
            return Err(GlobError::ConditionFails {
                condition: 'a',
                witness: "I_x has no identity".into(),
            });
        }
        if !datum.object_ideal(x).is_ideal_in(jx) {
            return Err(GlobError::ConditionFails {
                condition: 'a',
                witness: "I_x is not an ideal of J_x".into(),
            });
        }
        let members = datum.group_members();
        for &h in &members {
            let ext = group_exts.get(&h).ok_or(GlobError::ConditionFails {
                condition: 'a',
                witness: format!("missing global group map at `{}`", gd.name(h)),
            })?;
            if !ext.domain().same_set(jx) || !ext.codomain().same_set(jx) || !ext.is_bijective() {
                return Err(GlobError::ConditionFails {
                    condition: 'a',
                    witness: format!("γ̃ at `{}` is not an automorphism of J_x", gd.name(h)),
                });
            }
            // γ̃_h extends γ_h
            if !datum.group_map(h).extended_by(ext) {
                return Err(GlobError::ConditionFails {
                    condition: 'a',
                    witness: format!("γ̃ at `{}` does not extend γ", gd.name(h)),
                });
            }
            // I_h = I_x ∩ γ̃_h(I_x)
            let cut = datum
                .object_ideal(x)
                .intersect(&ext.image_of(datum.object_ideal(x)));
            if !cut.same_set(datum.group_ideal(h)) {
                return Err(GlobError::ConditionFails {
                    condition: 'a',
                    witness: format!("I_x ∩ γ̃(I_x) differs from I_{}", gd.name(h)),
                });
            }
        }
        // identity of the global group action and the group law
        let x_ext = &group_exts[&x];
        if jx.members().iter().any(|&a| x_ext.apply2(a) != a) {
            return Err(GlobError::ConditionFails {
                condition: 'a',
                witness: "γ̃ at the identity is not id_{J_x}".into(),
            });
        }
        for &h in &members {
            for &l in &members {
                let hl = gd.compose2(h, l);
                let comp = group_exts[&h].compose(&group_exts[&l]);
                if comp != group_exts[&hl] {
                    return Err(GlobError::ConditionFails {
                        condition: 'a',
                        witness: format!(
                            "γ̃ fails the group law on (`{}`, `{}`)",
                            gd.name(h),
                            gd.name(l)
                        ),
                    });
                }
            }
        }
        // J_x = Σ_h γ̃_h(I_x)
        let mut span = Ideal::zero(datum.ring().clone());
        for &h in &members {
            span = span.sum(&group_exts[&h].image_of(datum.object_ideal(x)));
        }
        if !span.same_set(jx) {
            return Err(GlobError::ConditionFails {
                condition: 'a',
                witness: "J_x is not the span of the γ̃-translates of I_x".into(),
            });
        }

        // (b) J_y ideals of the ring, I_y ideal of J_y, γ̃_{τ_y} extends
        for &y in gd.objects() {
            let jy = &j_ideals[&y];
            if !jy.is_ideal_in_ring() {
                return Err(GlobError::ConditionFails {
                    condition: 'b',
                    witness: format!("J at `{}` is not an ideal of the ring", gd.name(y)),
                });
            }
            if !datum.object_ideal(y).is_ideal_in(jy) {
                return Err(GlobError::ConditionFails {
                    condition: 'b',
                    witness: format!("I_{} is not an ideal of J_{}", gd.name(y), gd.name(y)),
                });
            }
            let ext = &tau_exts[&y];
            if !ext.domain().same_set(jx) || !ext.codomain().same_set(jy) || !ext.is_bijective() {
                return Err(GlobError::ConditionFails {
                    condition: 'b',
                    witness: format!("γ̃_τ at `{}` is not an isomorphism J_x → J_y", gd.name(y)),
                });
            }
            if !datum.tau_map(y).extended_by(ext) {
                return Err(GlobError::ConditionFails {
                    condition: 'b',
                    witness: format!("γ̃_τ at `{}` does not extend γ_τ", gd.name(y)),
                });
            }
        }
        Ok(GlobalizableDatum {
            datum,
            j_ideals,
            tau_exts,
            group_exts,
        })
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    pub fn ambient_ideal(&self, y: Morph) -> &Ideal {
        &self.j_ideals[&y]
    }

    /// The extended transversal isomorphism `γ̃_{τ_y} : J_x → J_y`.
    pub fn tau_ext(&self, y: Morph) -> &RingMap {
        &self.tau_exts[&y]
    }

    /// The global group map `γ̃_h : J_x → J_x`.
    pub fn group_ext(&self, h: Morph) -> &RingMap {
        &self.group_exts[&h]
    }

    /// Builds the global action `β̃_g = γ̃_{τ_{t(g)}} ∘ γ̃_{g_x} ∘
    /// γ̃_{τ_{s(g)}}⁻¹ : J_{s(g)} → J_{t(g)}` with `Ã_g = J_{t(g)}`, and
    /// verifies it is a globalization of the lifted action.
    pub fn build_global_action(&self) -> Result<Globalization, GlobError> {
        let datum = &self.datum;
        let gd = datum.groupoid().clone();
        let tau = datum.tau();
        let mut ideals = vec![None; gd.len()];
        let mut maps = vec![None; gd.len()];
        for g in gd.morphisms() {
            let gx = tau.project(&gd, g);
            let m = self.tau_exts[&gd.tgt(g)]
                .compose(&self.group_exts[&gx])
                .compose(&self.tau_exts[&gd.src(g)].inverse());
            ideals[g.0 as usize] = Some(self.j_ideals[&gd.tgt(g)].clone());
            maps[g.0 as usize] = Some(m);
        }
        let action = PartialAction::new(
            gd,
            datum.ring().clone(),
            ideals.into_iter().map(Option::unwrap).collect(),
            maps.into_iter().map(Option::unwrap).collect(),
        )?;
        let glob = Globalization { action };
        let lifted = datum.lift()?;
        verify_globalization(&lifted, &glob)?;
        // interior identity: B_g = γ̃_{τ_{t(g)}}(I_{g_x})
        for g in datum.groupoid().morphisms() {
            if datum.groupoid().is_object(g) {
                continue;
            }
            let gx = tau.project(datum.groupoid(), g);
            let want = self.tau_exts[&datum.groupoid().tgt(g)].image_of(datum.group_ideal(gx));
            if !want.same_set(lifted.ideal(g)) {
                return Err(GlobError::AxiomFails {
                    axiom: 'b',
                    witness: format!(
                        "B at `{}` differs from the transported group ideal",
                        datum.groupoid().name(g)
                    ),
                });
            }
        }
        Ok(glob)
    }
}

/// A verified global action serving as the globalization of some partial
/// action on the same ring.
pub struct Globalization {
    pub action: PartialAction,
}

/// Checks the four globalization axioms of `glob` against `alpha`,
/// exhaustively.
pub fn verify_globalization(alpha: &PartialAction, glob: &Globalization) -> Result<(), GlobError> {
    let gd = alpha.groupoid();
    if gd != glob.action.groupoid() || alpha.ring() != glob.action.ring() {
        return Err(GlobError::Action(ActionError::Incompatible));
    }
    if !glob.action.is_global() {
        return Err(GlobError::AxiomFails {
            axiom: 'b',
            witness: "candidate is not a global action".into(),
        });
    }
    // (a) A_y ideal of Ã_y
    for &y in gd.objects() {
        if !alpha.ideal(y).is_ideal_in(glob.action.ideal(y)) {
            return Err(GlobError::AxiomFails {
                axiom: 'a',
                witness: format!("A_{} is not an ideal of its cover", gd.name(y)),
            });
        }
    }
    for g in gd.morphisms() {
        // (b) A_g = A_{t(g)} ∩ α̃_g(A_{s(g)})
        let moved = glob.action.map(g).image_of(alpha.ideal(gd.src(g)));
        let cut = alpha.ideal(gd.tgt(g)).intersect(&moved);
        if !cut.same_set(alpha.ideal(g)) {
            return Err(GlobError::AxiomFails {
                axiom: 'b',
                witness: format!("A_{} ≠ A_t ∩ α̃(A_s)", gd.name(g)),
            });
        }
        // (c) α̃_g extends α_g
        if !alpha.map(g).extended_by(glob.action.map(g)) {
            return Err(GlobError::AxiomFails {
                axiom: 'c',
                witness: format!("α̃ does not extend α at `{}`", gd.name(g)),
            });
        }
        // (d) Ã_g = Σ_{t(h)=t(g)} α̃_h(A_{s(h)})
        let mut span = Ideal::zero(alpha.ring().clone());
        for h in gd.with_tgt(gd.tgt(g)) {
            span = span.sum(&glob.action.map(h).image_of(alpha.ideal(gd.src(h))));
        }
        if !span.same_set(glob.action.ideal(g)) {
            return Err(GlobError::AxiomFails {
                axiom: 'd',
                witness: format!(
                    "the translate span at `{}` misses the cover ideal",
                    gd.name(g)
                ),
            });
        }
    }
    Ok(())
}

/// The bundled globalizable datum over GF(9)³: `J_x = J_y = A`, with the
/// full cyclic shift extending the transversal map and the full
/// involution extending the group part.
pub fn shift3_globalizable() -> GlobalizableDatum {
    use crate::instances::{self, shift3_gamma, shift3_sigma};
    let inst = instances::shift3();
    let r = inst.ring.clone();
    let gd = inst.groupoid.clone();
    let x = gd.by_name("x").unwrap();
    let y = gd.by_name("y").unwrap();
    let g = gd.by_name("g").unwrap();
    let whole = Ideal::full(r.clone());
    let gamma_full =
        RingMap::from_fn(whole.clone(), whole.clone(), |a| shift3_gamma(&r, a), true).unwrap();
    let sigma_full =
        RingMap::from_fn(whole.clone(), whole.clone(), |a| shift3_sigma(&r, a), true).unwrap();
    GlobalizableDatum::new(
        inst.datum.clone(),
        BTreeMap::from([(x, whole.clone()), (y, whole.clone())]),
        BTreeMap::from([(x, RingMap::identity_on(&whole)), (y, gamma_full)]),
        BTreeMap::from([(x, RingMap::identity_on(&whole)), (g, sigma_full)]),
    )
    .expect("bundled globalizable datum validates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{self, shift3_gamma, shift3_sigma};

    #[test]
    fn unitality_criterion() {
        // flagship: all ideals unital, globalizable with explicit units
        let rep = is_globalizable(&instances::frob4().action).unwrap();
        assert!(rep.is_globalizable());
        let units = rep.units.unwrap();
        let gd = instances::frob4().action.groupoid();
        let r = instances::frob4().action.ring();
        let g = gd.by_name("g").unwrap();
        assert_eq!(units[g.0 as usize], r.parse("e1").unwrap());

        // 2ℤ/4 has no identity: not globalizable, witness = the loop
        let bad = instances::z4_nonunital();
        let rep = is_globalizable(&bad.action).unwrap();
        assert!(!rep.is_globalizable());
        assert_eq!(
            rep.witness.map(|w| bad.groupoid.name(w).to_string()),
            Some("c".to_string())
        );

        // a global action is trivially globalizable
        assert!(is_globalizable(&instances::pair_swap().action)
            .unwrap()
            .is_globalizable());
    }

    #[test]
    fn datum_level_criterion_agrees_with_action_level() {
        for inst in instances::all() {
            let datum_level = lifted_globalizable_check(&inst.datum);
            let action_level = is_globalizable(&inst.action)
                .map(|r| r.is_globalizable())
                .unwrap_or(false);
            assert_eq!(datum_level, action_level, "{}", inst.name);
        }
    }

    #[test]
    fn bundled_globalizable_datum_builds_the_expected_table() {
        let gdat = shift3_globalizable();
        let glob = gdat.build_global_action().unwrap();
        let inst = instances::shift3();
        let r = &inst.ring;
        let gd = &inst.groupoid;
        let whole = Ideal::full(r.clone());
        let full = |f: &dyn Fn(El) -> El| {
            RingMap::from_fn(whole.clone(), whole.clone(), f, true).unwrap()
        };
        let sigma = full(&|a| shift3_sigma(r, a));
        let gamma = full(&|a| shift3_gamma(r, a));
        let gamma_inv = gamma.inverse();
        let expected: Vec<(&str, RingMap)> = vec![
            ("x", RingMap::identity_on(&whole)),
            ("y", RingMap::identity_on(&whole)),
            ("g", sigma.clone()),
            ("h", gamma.compose(&sigma).compose(&gamma_inv)),
            ("m", gamma.compose(&sigma)),
            ("m'", sigma.compose(&gamma_inv)),
            ("l", gamma.clone()),
            ("l'", gamma_inv.clone()),
        ];
        for (name, want) in expected {
            let g = gd.by_name(name).unwrap();
            assert_eq!(
                glob.action.map(g),
                &want,
                "global map at `{name}` differs from the closed form"
            );
            assert!(glob.action.ideal(g).same_set(&whole));
        }
        // and the four axioms hold against the lifted action
        let lifted = inst.datum.lift().unwrap();
        verify_globalization(&lifted, &glob).unwrap();
    }

    #[test]
    fn tampered_extension_is_rejected() {
        let inst = instances::shift3();
        let r = inst.ring.clone();
        let gd = inst.groupoid.clone();
        let x = gd.by_name("x").unwrap();
        let y = gd.by_name("y").unwrap();
        let g = gd.by_name("g").unwrap();
        let whole = Ideal::full(r.clone());
        // γ̃_{τ_y} := shift ∘ Frobenius no longer extends γ_{τ_y}
        let frob = instances::frobenius(&r);
        let tampered = RingMap::from_fn(
            whole.clone(),
            whole.clone(),
            |a| shift3_gamma(&r, frob(a)),
            true,
        )
        .unwrap();
        let sigma_full =
            RingMap::from_fn(whole.clone(), whole.clone(), |a| shift3_sigma(&r, a), true).unwrap();
        let err = GlobalizableDatum::new(
            inst.datum.clone(),
            BTreeMap::from([(x, whole.clone()), (y, whole.clone())]),
            BTreeMap::from([(x, RingMap::identity_on(&whole)), (y, tampered)]),
            BTreeMap::from([(x, RingMap::identity_on(&whole)), (g, sigma_full)]),
        )
        .unwrap_err();
        assert!(
            matches!(err, GlobError::ConditionFails { condition: 'b', .. }),
            "got {err:?}"
        );
    }

    #[test]
    fn trivial_datum_globalizes_itself() {
        // the swap instance is global; its datum globalizes in itself
        let inst = instances::swap_gf2sq();
        let gd = inst.groupoid.clone();
        let x = gd.by_name("x").unwrap();
        let c = gd.by_name("c").unwrap();
        let whole = Ideal::full(inst.ring.clone());
        let rr = inst.ring.clone();
        let swap = RingMap::from_fn(
            whole.clone(),
            whole.clone(),
            |a| {
                let comp = rr.components(a);
                rr.from_components(&[comp[1], comp[0]])
            },
            true,
        )
        .unwrap();
        let gdat = GlobalizableDatum::new(
            inst.datum.clone(),
            BTreeMap::from([(x, whole.clone())]),
            BTreeMap::from([(x, RingMap::identity_on(&whole))]),
            BTreeMap::from([(x, RingMap::identity_on(&whole)), (c, swap)]),
        )
        .unwrap();
        let glob = gdat.build_global_action().unwrap();
        // β̃ equals the original action
        assert!(glob.action.eq_action(&inst.action).unwrap());
    }

    #[test]
    fn oversized_cover_fails_axiom_d() {
        // pair groupoid, cover ideals = the whole ring, α̃ = parity swap:
        // a genuine global action, but the translate span A·e_z is smaller
        let inst = instances::pair_swap();
        let gd = inst.groupoid.clone();
        let r = inst.ring.clone();
        let whole = Ideal::full(r.clone());
        let rr = r.clone();
        let swap = move |a: El| {
            let c = rr.components(a);
            rr.from_components(&[c[1], c[0]])
        };
        let mut ideals = Vec::new();
        let mut maps = Vec::new();
        for g in gd.morphisms() {
            let is_diag = gd.is_object(g);
            ideals.push(whole.clone());
            maps.push(if is_diag {
                RingMap::identity_on(&whole)
            } else {
                RingMap::from_fn(whole.clone(), whole.clone(), &swap, true).unwrap()
            });
        }
        let cover = PartialAction::new(gd.clone(), r.clone(), ideals, maps).unwrap();
        assert!(cover.is_global());
        let err =
            verify_globalization(&inst.action, &Globalization { action: cover }).unwrap_err();
        assert!(
            matches!(err, GlobError::AxiomFails { axiom: 'd', .. }),
            "got {err:?}"
        );
    }

    #[test]
    fn global_action_is_its_own_globalization() {
        let inst = instances::pair_swap();
        verify_globalization(
            &inst.action,
            &Globalization {
                action: inst.action.clone(),
            },
        )
        .unwrap();
    }
}
