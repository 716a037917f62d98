//! Partial groupoid actions on finite rings, and the data they induce.
//!
//! A partial action assigns to every morphism `g` an ideal `A_g` of
//! `A_{t(g)}` (itself an ideal of the ring) and a ring isomorphism
//! `α_g : A_{g⁻¹} → A_g`, subject to `α_x = id` on identities and the
//! extension law `α_g∘α_h ≤ α_{gh}` on composable pairs. Validation also
//! re-derives the standard consequences as consistency checks:
//! `α_{g⁻¹} = α_g⁻¹` and `α_g(A_{g⁻¹} ∩ A_h) = A_g ∩ A_{gh}`.
//!
//! When the groupoid is connected, a choice of base object `x` and
//! transversal `τ(x)` turns an action into a datum — the family of
//! object ideals, the transversal isomorphisms, and the induced partial
//! action of the isotropy group `G(x)` on `I_x` — and conversely every
//! valid datum lifts back to a partial groupoid action through
//!
//! ```text
//! β_g = γ_{τ_{t(g)}} ∘ γ_{g_x} ∘ γ_{τ_{s(g)}}⁻¹,   g ∉ G₀,
//! ```
//!
//! with domains and ranges given by partial-bijection composition. Both
//! directions, the extension order between them, and base-change between
//! transversals live here.

use crate::groupoid::{conjugation_iso, FiniteGroupoid, GroupoidError, Morph, Transversal};
use crate::ideal::{Ideal, RingMap};
use crate::ring::{El, FiniteRing, RingError};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("identity axiom fails at object `{object}`: {detail}")]
    IdentityAxiomFails { object: String, detail: String },
    #[error("extension axiom fails on (`{g}`, `{h}`): {witness}")]
    ExtensionAxiomFails {
        g: String,
        h: String,
        witness: String,
    },
    #[error("ideal nesting fails at `{g}`: {detail}")]
    IdealNesting { g: String, detail: String },
    #[error("map attached to `{g}` mismatches its ideals: {detail}")]
    MapMismatch { g: String, detail: String },
    #[error("missing {what} for `{name}`")]
    Missing { what: &'static str, name: String },
    #[error("actions live over different rings or groupoids")]
    Incompatible,
    #[error("datum condition ({condition}) fails: {witness}")]
    DatumConditionFails { condition: char, witness: String },
    #[error("morphism-family condition fails: {witness}")]
    ConditionFails { witness: String },
    #[error("internal invariant broke: {0}")]
    Internal(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// A validated partial action of a finite groupoid on a finite ring.
#[derive(Clone)]
pub struct PartialAction {
    groupoid: Arc<FiniteGroupoid>,
    ring: Arc<FiniteRing>,
    ideals: Vec<Ideal>,
    maps: Vec<RingMap>,
    global: bool,
}

impl fmt::Debug for PartialAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PartialAction({} morphisms on |A| = {}{})",
            self.ideals.len(),
            self.ring.len(),
            if self.global { ", global" } else { "" }
        )
    }
}

impl PartialAction {
    /// Validates the full axiom set. `ideals[g]` is `A_g` and `maps[g]`
    /// is `α_g : A_{g⁻¹} → A_g`, indexed by morphism.
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        ring: Arc<FiniteRing>,
        ideals: Vec<Ideal>,
        maps: Vec<RingMap>,
    ) -> Result<Self, ActionError> {
        let n = groupoid.len();
        if ideals.len() != n || maps.len() != n {
            return Err(ActionError::Missing {
                what: "ideal or map",
                name: format!("({} of {} morphisms supplied)", ideals.len().min(maps.len()), n),
            });
        }
        for i in &ideals {
            if i.ring() != &ring {
                return Err(ActionError::Incompatible);
            }
        }

        let idx = |g: Morph| g.0 as usize;
        // object ideals are ideals of A; A_g is an ideal of A_{t(g)}
        for &y in groupoid.objects() {
            if !ideals[idx(y)].is_ideal_in_ring() {
                return Err(ActionError::IdealNesting {
                    g: groupoid.name(y).to_string(),
                    detail: "object ideal does not absorb the ring".into(),
                });
            }
        }
        for g in groupoid.morphisms() {
            let t = groupoid.tgt(g);
            if !ideals[idx(g)].is_ideal_in(&ideals[idx(t)]) {
                return Err(ActionError::IdealNesting {
                    g: groupoid.name(g).to_string(),
                    detail: format!("A_g is not an ideal of A_{}", groupoid.name(t)),
                });
            }
        }
        // maps are isomorphisms A_{g⁻¹} → A_g
        for g in groupoid.morphisms() {
            let m = &maps[idx(g)];
            if !m.domain().same_set(&ideals[idx(groupoid.inv(g))]) {
                return Err(ActionError::MapMismatch {
                    g: groupoid.name(g).to_string(),
                    detail: "domain is not A_{g⁻¹}".into(),
                });
            }
            if !m.codomain().same_set(&ideals[idx(g)]) {
                return Err(ActionError::MapMismatch {
                    g: groupoid.name(g).to_string(),
                    detail: "codomain is not A_g".into(),
                });
            }
            if !m.is_bijective() {
                return Err(ActionError::MapMismatch {
                    g: groupoid.name(g).to_string(),
                    detail: "map is not a certified bijection".into(),
                });
            }
        }
        // α_x = id on identities
        for &y in groupoid.objects() {
            let m = &maps[idx(y)];
            for &a in ideals[idx(y)].members() {
                if m.apply2(a) != a {
                    return Err(ActionError::IdentityAxiomFails {
                        object: groupoid.name(y).to_string(),
                        detail: format!("α moves `{}`", ring.name(a)),
                    });
                }
            }
        }
        // α_g∘α_h ≤ α_{gh}, domain inclusion included
        for g in groupoid.morphisms() {
            for h in groupoid.morphisms() {
                let Some(gh) = groupoid.compose(g, h) else {
                    continue;
                };
                let comp = maps[idx(g)].compose(&maps[idx(h)]);
                if !comp.extended_by(&maps[idx(gh)]) {
                    let witness = comp
                        .domain()
                        .members()
                        .iter()
                        .find(|&&a| {
                            maps[idx(gh)].apply(a) != comp.apply(a)
                        })
                        .map(|&a| format!("disagree at `{}`", ring.name(a)))
                        .unwrap_or_else(|| "domain escapes A_{(gh)⁻¹}".into());
                    return Err(ActionError::ExtensionAxiomFails {
                        g: groupoid.name(g).to_string(),
                        h: groupoid.name(h).to_string(),
                        witness,
                    });
                }
            }
        }
        // consistency: α_{g⁻¹} = α_g⁻¹
        for g in groupoid.morphisms() {
            if maps[idx(groupoid.inv(g))] != maps[idx(g)].inverse() {
                return Err(ActionError::ExtensionAxiomFails {
                    g: groupoid.name(g).to_string(),
                    h: groupoid.name(groupoid.inv(g)).to_string(),
                    witness: "α_{g⁻¹} differs from α_g⁻¹".into(),
                });
            }
        }
        // consistency: α_g(A_{g⁻¹} ∩ A_h) = A_g ∩ A_{gh}
        for g in groupoid.morphisms() {
            for h in groupoid.morphisms() {
                let Some(gh) = groupoid.compose(g, h) else {
                    continue;
                };
                let lhs = maps[idx(g)]
                    .image_of(&ideals[idx(groupoid.inv(g))].intersect(&ideals[idx(h)]));
                let rhs = ideals[idx(g)].intersect(&ideals[idx(gh)]);
                if !lhs.same_set(&rhs) {
                    return Err(ActionError::ExtensionAxiomFails {
                        g: groupoid.name(g).to_string(),
                        h: groupoid.name(h).to_string(),
                        witness: "α_g(A_{g⁻¹} ∩ A_h) differs from A_g ∩ A_{gh}".into(),
                    });
                }
            }
        }
        let global = groupoid
            .morphisms()
            .all(|g| ideals[idx(g)].same_set(&ideals[idx(groupoid.tgt(g))]));
        Ok(PartialAction {
            groupoid,
            ring,
            ideals,
            maps,
            global,
        })
    }

    /// Re-runs the whole validation on the stored data.
    pub fn revalidate(&self) -> Result<(), ActionError> {
        Self::new(
            self.groupoid.clone(),
            self.ring.clone(),
            self.ideals.clone(),
            self.maps.clone(),
        )
        .map(|_| ())
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn ideal(&self, g: Morph) -> &Ideal {
        &self.ideals[g.0 as usize]
    }

    pub fn map(&self, g: Morph) -> &RingMap {
        &self.maps[g.0 as usize]
    }

    /// Global means `A_g = A_{t(g)}` for every morphism.
    pub fn is_global(&self) -> bool {
        self.global
    }

    /// `A_{τ_y⁻¹} = A_x` and `A_{τ_y} = A_y` for every object.
    pub fn is_tau_global(&self, tau: &Transversal) -> bool {
        let x = tau.base();
        tau.entries().all(|(y, ty)| {
            self.ideal(self.groupoid.inv(ty)).same_set(self.ideal(x))
                && self.ideal(ty).same_set(self.ideal(y))
        })
    }

    /// The central idempotent units `1_g` with `A_g = A·1_g`, when every
    /// ideal has them.
    pub fn units(&self) -> Option<Vec<El>> {
        let mut units = Vec::with_capacity(self.ideals.len());
        for i in &self.ideals {
            let e = i.find_identity()?;
            // A·e must reproduce the ideal
            let mut span: Vec<El> = self.ring.elements().map(|a| self.ring.mul(a, e)).collect();
            span.sort();
            span.dedup();
            if span != i.members() {
                return None;
            }
            units.push(e);
        }
        Some(units)
    }

    pub fn is_unital(&self) -> bool {
        self.units().is_some()
    }

    /// Extension order: `self ≤ other` iff every `self`-map is extended
    /// by the corresponding `other`-map.
    pub fn leq(&self, other: &PartialAction) -> Result<bool, ActionError> {
        if self.groupoid != other.groupoid || self.ring != other.ring {
            return Err(ActionError::Incompatible);
        }
        Ok(self
            .groupoid
            .morphisms()
            .all(|g| self.map(g).extended_by(other.map(g))))
    }

    /// Extensional equality: same ideals as sets, same maps pointwise.
    pub fn eq_action(&self, other: &PartialAction) -> Result<bool, ActionError> {
        Ok(self.leq(other)? && other.leq(self)?)
    }

    /// Restriction to the isotropy group at `x`, as an action of the
    /// one-object groupoid on the same ring.
    pub fn restrict_to_isotropy(&self, x: Morph) -> Result<IsotropyRestriction, ActionError> {
        let iso = self.groupoid.isotropy_group(x)?;
        let sub = Arc::new(iso.as_groupoid(&self.groupoid));
        let to_parent: Vec<Morph> = sub
            .morphisms()
            .map(|g| self.groupoid.by_name(sub.name(g)).expect("shared names"))
            .collect();
        let ideals: Vec<Ideal> = to_parent.iter().map(|&g| self.ideal(g).clone()).collect();
        let maps: Vec<RingMap> = to_parent.iter().map(|&g| self.map(g).clone()).collect();
        let action = PartialAction::new(sub, self.ring.clone(), ideals, maps)?;
        Ok(IsotropyRestriction { action, to_parent })
    }

    /// Family `ψ = {ψ_y : A_y → A'_y}` of ring homomorphisms forming a
    /// morphism of partial actions: `ψ_{t(g)}(A_g) ⊆ A'_g` and
    /// `α'_g ∘ ψ_{s(g)} = ψ_{t(g)} ∘ α_g` on `A_{g⁻¹}`.
    pub fn validate_morphism(
        &self,
        other: &PartialAction,
        psi: &BTreeMap<Morph, RingMap>,
    ) -> Result<(), ActionError> {
        if self.groupoid != other.groupoid || self.ring != other.ring {
            return Err(ActionError::Incompatible);
        }
        let gd = &self.groupoid;
        for &y in gd.objects() {
            let p = psi.get(&y).ok_or(ActionError::Missing {
                what: "homomorphism",
                name: gd.name(y).to_string(),
            })?;
            if !p.domain().same_set(self.ideal(y)) || !other.ideal(y).contains_all(p.codomain()) {
                return Err(ActionError::ConditionFails {
                    witness: format!("ψ at `{}` has the wrong domain or codomain", gd.name(y)),
                });
            }
        }
        for g in gd.morphisms() {
            let pt = &psi[&gd.tgt(g)];
            let ps = &psi[&gd.src(g)];
            // (a) ψ_{t(g)}(A_g) ⊆ A'_g
            for &a in self.ideal(g).members() {
                if !other.ideal(g).contains(pt.apply2(a)) {
                    return Err(ActionError::ConditionFails {
                        witness: format!(
                            "ψ_t(`{}`) leaves A'_{} at `{}`",
                            self.ring.name(a),
                            gd.name(g),
                            gd.name(g)
                        ),
                    });
                }
            }
            // (b) α'_g ∘ ψ_{s(g)} = ψ_{t(g)} ∘ α_g on A_{g⁻¹}
            for &a in self.ideal(gd.inv(g)).members() {
                let lhs = other.map(g).apply(ps.apply2(a));
                let rhs = pt.apply2(self.map(g).apply2(a));
                if lhs != Some(rhs) {
                    return Err(ActionError::ConditionFails {
                        witness: format!(
                            "α'∘ψ and ψ∘α disagree at `{}` over `{}`",
                            self.ring.name(a),
                            gd.name(g)
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// An action of the one-object groupoid `G(x)` carved out of a parent
/// action, with the morphism correspondence back into the parent.
pub struct IsotropyRestriction {
    pub action: PartialAction,
    pub to_parent: Vec<Morph>,
}

/// A datum over a connected groupoid with base `x` and transversal
/// `τ(x)`: object ideals `I_y`, transversal isomorphisms
/// `γ_{τ_y} : I_{τ_y⁻¹} → I_{τ_y}`, and a partial action of `G(x)` on
/// `I_x`.
#[derive(Clone)]
pub struct Datum {
    groupoid: Arc<FiniteGroupoid>,
    ring: Arc<FiniteRing>,
    tau: Transversal,
    ideals: BTreeMap<Morph, Ideal>,
    tau_maps: BTreeMap<Morph, RingMap>,
    group_ideals: BTreeMap<Morph, Ideal>,
    group_maps: BTreeMap<Morph, RingMap>,
}

impl fmt::Debug for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Datum(base `{}`, {} objects, |G(x)| = {})",
            self.groupoid.name(self.tau.base()),
            self.ideals.len(),
            self.group_ideals.len()
        )
    }
}

impl Datum {
    /// Validates the datum conditions:
    /// (a–c) the three components are structurally sound, with the group
    ///       part a partial group action of `G(x)` on `I_x`;
    /// (d)   `γ_x = γ_{τ_x}` is the identity of `I_x = I_{τ_x}`;
    /// (e)   `I_{τ_y}` is an ideal of `I_y` and `I_{τ_y⁻¹}` one of `I_x`;
    /// (f)   `γ_{τ_{t(g)}}(I_{τ⁻¹_{t(g)}} ∩ γ_{g_x}(I_{τ⁻¹_{s(g)}} ∩
    ///       I_{g_x⁻¹}))` is an ideal of `I_{t(g)}`, for every `g`.
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        ring: Arc<FiniteRing>,
        tau: Transversal,
        ideals: BTreeMap<Morph, Ideal>,
        tau_maps: BTreeMap<Morph, RingMap>,
        group_ideals: BTreeMap<Morph, Ideal>,
        group_maps: BTreeMap<Morph, RingMap>,
    ) -> Result<Self, ActionError> {
        if !groupoid.is_connected() {
            return Err(ActionError::Groupoid(GroupoidError::NotConnected {
                from: "datum".into(),
                to: "requires a connected groupoid".into(),
            }));
        }
        let x = tau.base();
        for &y in groupoid.objects() {
            if !ideals.contains_key(&y) {
                return Err(ActionError::Missing {
                    what: "object ideal",
                    name: groupoid.name(y).to_string(),
                });
            }
            if !tau_maps.contains_key(&y) {
                return Err(ActionError::Missing {
                    what: "transversal map",
                    name: groupoid.name(y).to_string(),
                });
            }
        }
        // (a) object ideals are ideals of A
        for (&y, i) in &ideals {
            if i.ring() != &ring {
                return Err(ActionError::Incompatible);
            }
            if !i.is_ideal_in_ring() {
                return Err(ActionError::DatumConditionFails {
                    condition: 'a',
                    witness: format!("I_{} is not an ideal of A", groupoid.name(y)),
                });
            }
        }
        // (c) the group part is a partial group action of G(x) on I_x:
        // validate it as an action of the one-object groupoid
        let iso = groupoid.isotropy_group(x)?;
        let sub = Arc::new(iso.as_groupoid(&groupoid));
        let mut gi = Vec::new();
        let mut gm = Vec::new();
        for h in sub.morphisms() {
            let parent = groupoid.by_name(sub.name(h)).expect("shared names");
            gi.push(
                group_ideals
                    .get(&parent)
                    .ok_or(ActionError::Missing {
                        what: "group-part ideal",
                        name: sub.name(h).to_string(),
                    })?
                    .clone(),
            );
            gm.push(
                group_maps
                    .get(&parent)
                    .ok_or(ActionError::Missing {
                        what: "group-part map",
                        name: sub.name(h).to_string(),
                    })?
                    .clone(),
            );
        }
        let group_action =
            PartialAction::new(sub, ring.clone(), gi, gm).map_err(|e| match e {
                ActionError::Incompatible => ActionError::Incompatible,
                other => ActionError::DatumConditionFails {
                    condition: 'c',
                    witness: other.to_string(),
                },
            })?;
        // the group part acts on I_x
        if !group_action
            .ideal(group_action.groupoid().by_name(groupoid.name(x)).unwrap())
            .same_set(&ideals[&x])
        {
            return Err(ActionError::DatumConditionFails {
                condition: 'c',
                witness: "the group part does not act on I_x".into(),
            });
        }
        for (&h, i) in &group_ideals {
            if !i.is_ideal_in(&ideals[&x]) {
                return Err(ActionError::DatumConditionFails {
                    condition: 'c',
                    witness: format!("I_{} is not an ideal of I_x", groupoid.name(h)),
                });
            }
        }
        // (d) γ_{τ_x} = γ_x = id on I_x
        let idx_map = &tau_maps[&x];
        if !idx_map.domain().same_set(&ideals[&x])
            || ideals[&x].members().iter().any(|&a| idx_map.apply2(a) != a)
        {
            return Err(ActionError::DatumConditionFails {
                condition: 'd',
                witness: "γ at the base object is not the identity of I_x".into(),
            });
        }
        if group_ideals.get(&x).map(|i| !i.same_set(&ideals[&x])) != Some(false) {
            return Err(ActionError::DatumConditionFails {
                condition: 'd',
                witness: "group-part identity ideal differs from I_x".into(),
            });
        }
        // (e) I_{τ_y} ideal of I_y, I_{τ_y⁻¹} ideal of I_x; maps bijective
        for (&y, m) in &tau_maps {
            if !m.is_bijective() {
                return Err(ActionError::DatumConditionFails {
                    condition: 'b',
                    witness: format!("γ_τ at `{}` is not bijective", groupoid.name(y)),
                });
            }
            if !m.codomain().is_ideal_in(&ideals[&y]) {
                return Err(ActionError::DatumConditionFails {
                    condition: 'e',
                    witness: format!("I_τ_{} is not an ideal of I_{}", groupoid.name(y), groupoid.name(y)),
                });
            }
            if !m.domain().is_ideal_in(&ideals[&x]) {
                return Err(ActionError::DatumConditionFails {
                    condition: 'e',
                    witness: format!("I_τ⁻¹_{} is not an ideal of I_x", groupoid.name(y)),
                });
            }
        }
        let datum = Datum {
            groupoid,
            ring,
            tau,
            ideals,
            tau_maps,
            group_ideals,
            group_maps,
        };
        // (f) the lift-domain set is an ideal of I_{t(g)}, for every g
        for g in datum.groupoid.morphisms() {
            let set = datum.lift_range_set(g);
            if !set.is_ideal_in(&datum.ideals[&datum.groupoid.tgt(g)]) {
                return Err(ActionError::DatumConditionFails {
                    condition: 'f',
                    witness: format!(
                        "the induced set at `{}` is not an ideal of I_{}",
                        datum.groupoid.name(g),
                        datum.groupoid.name(datum.groupoid.tgt(g))
                    ),
                });
            }
        }
        Ok(datum)
    }

    /// Re-runs the whole datum validation on the stored data.
    pub fn revalidate(&self) -> Result<(), ActionError> {
        Self::new(
            self.groupoid.clone(),
            self.ring.clone(),
            self.tau.clone(),
            self.ideals.clone(),
            self.tau_maps.clone(),
            self.group_ideals.clone(),
            self.group_maps.clone(),
        )
        .map(|_| ())
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn tau(&self) -> &Transversal {
        &self.tau
    }

    pub fn base(&self) -> Morph {
        self.tau.base()
    }

    pub fn object_ideal(&self, y: Morph) -> &Ideal {
        &self.ideals[&y]
    }

    pub fn tau_map(&self, y: Morph) -> &RingMap {
        &self.tau_maps[&y]
    }

    pub fn group_ideal(&self, h: Morph) -> &Ideal {
        &self.group_ideals[&h]
    }

    pub fn group_map(&self, h: Morph) -> &RingMap {
        &self.group_maps[&h]
    }

    pub fn group_members(&self) -> Vec<Morph> {
        self.group_ideals.keys().copied().collect()
    }

    /// `γ`-unital: `I_x` and every group-part ideal `I_h` is unital with
    /// a central idempotent generator.
    pub fn is_gamma_unital(&self) -> bool {
        let x = self.base();
        let mut to_check: Vec<&Ideal> = vec![&self.ideals[&x]];
        to_check.extend(self.group_ideals.values());
        to_check.iter().all(|i| match i.find_identity() {
            Some(e) => {
                let ring = i.ring();
                let mut span: Vec<El> = ring.elements().map(|a| ring.mul(a, e)).collect();
                span.sort();
                span.dedup();
                span == i.members()
            }
            None => false,
        })
    }

    /// The range set of formula (range of `β_g`), computed directly:
    /// `γ_{τ_{t(g)}}(I_{τ⁻¹_{t(g)}} ∩ γ_{g_x}(I_{τ⁻¹_{s(g)}} ∩ I_{g_x⁻¹}))`.
    fn lift_range_set(&self, g: Morph) -> Ideal {
        let gd = &self.groupoid;
        if gd.is_object(g) {
            return self.ideals[&g].clone();
        }
        let gx = self.tau.project(gd, g);
        let gx_inv = gd.inv(gx);
        let tau_t = &self.tau_maps[&gd.tgt(g)];
        let tau_s = &self.tau_maps[&gd.src(g)];
        let inner = tau_s.domain().intersect(&self.group_ideals[&gx_inv]);
        let moved = self.group_maps[&gx].image_of(&inner);
        let mid = tau_t.domain().intersect(&moved);
        tau_t.image_of(&mid)
    }

    /// Lifts the datum to a partial groupoid action: the identity on
    /// `I_y` over identities, `γ_{τ_{t(g)}} ∘ γ_{g_x} ∘ γ_{τ_{s(g)}}⁻¹`
    /// elsewhere. The composed ranges are checked against the direct
    /// range formula, the result is re-validated as a partial action,
    /// and its restriction to `G(x)` must reproduce the group part.
    pub fn lift(&self) -> Result<PartialAction, ActionError> {
        let gd = &self.groupoid;
        let mut ideals = vec![None; gd.len()];
        let mut maps = vec![None; gd.len()];
        for g in gd.morphisms() {
            let (ideal, map) = if gd.is_object(g) {
                let i = self.ideals[&g].clone();
                (i.clone(), RingMap::identity_on(&i))
            } else {
                let gx = self.tau.project(gd, g);
                let tau_t = &self.tau_maps[&gd.tgt(g)];
                let tau_s = &self.tau_maps[&gd.src(g)];
                let m = tau_t
                    .compose(&self.group_maps[&gx])
                    .compose(&tau_s.inverse());
                let direct = self.lift_range_set(g);
                if !m.codomain().same_set(&direct) {
                    return Err(ActionError::Internal(format!(
                        "lift range at `{}` disagrees with the direct formula",
                        gd.name(g)
                    )));
                }
                (m.codomain().clone(), m)
            };
            ideals[g.0 as usize] = Some(ideal);
            maps[g.0 as usize] = Some(map);
        }
        let action = PartialAction::new(
            gd.clone(),
            self.ring.clone(),
            ideals.into_iter().map(Option::unwrap).collect(),
            maps.into_iter().map(Option::unwrap).collect(),
        )?;
        // restriction to G(x) reproduces the group part
        for h in self.group_ideals.keys() {
            if !action.ideal(*h).same_set(&self.group_ideals[h])
                || action.map(*h) != &self.group_maps[h]
            {
                return Err(ActionError::Internal(format!(
                    "lifted action does not restrict to the group part at `{}`",
                    gd.name(*h)
                )));
            }
        }
        Ok(action)
    }

    /// Extracts the datum of an action relative to a transversal:
    /// object ideals, the action's maps along `τ`, and the isotropy
    /// restriction.
    pub fn extract(action: &PartialAction, tau: &Transversal) -> Result<Datum, ActionError> {
        let gd = action.groupoid().clone();
        let x = tau.base();
        let mut ideals = BTreeMap::new();
        let mut tau_maps = BTreeMap::new();
        for &y in gd.objects() {
            ideals.insert(y, action.ideal(y).clone());
            tau_maps.insert(y, action.map(tau.tau(y)).clone());
        }
        let iso = gd.isotropy_group(x)?;
        let mut group_ideals = BTreeMap::new();
        let mut group_maps = BTreeMap::new();
        for &h in iso.members() {
            group_ideals.insert(h, action.ideal(h).clone());
            group_maps.insert(h, action.map(h).clone());
        }
        Datum::new(
            gd,
            action.ring().clone(),
            tau.clone(),
            ideals,
            tau_maps,
            group_ideals,
            group_maps,
        )
        .map_err(|e| ActionError::Internal(format!("extracted datum failed validation: {e}")))
    }

    /// Base change to `(z, λ(z))`: swap the roles of `I_x` and `I_z`,
    /// transport the transversal maps, and conjugate the group part
    /// along `φ : G(z) → G(x)`, `l ↦ τ_z⁻¹ l τ_z`.
    pub fn rebase(&self, lambda: &Transversal) -> Result<Datum, ActionError> {
        let gd = &self.groupoid;
        let x = self.base();
        let z = lambda.base();
        let mut ideals = self.ideals.clone();
        ideals.insert(z, self.ideals[&x].clone());
        ideals.insert(x, self.ideals[&z].clone());
        let mut tau_maps = BTreeMap::new();
        for &y in gd.objects() {
            let m = if y == z {
                RingMap::identity_on(&ideals[&z])
            } else if y == x {
                self.tau_maps[&z].clone()
            } else {
                self.tau_maps[&y].clone()
            };
            tau_maps.insert(y, m);
        }
        let phi = conjugation_iso(gd, &self.tau, z);
        let mut group_ideals = BTreeMap::new();
        let mut group_maps = BTreeMap::new();
        for &l in gd.isotropy_group(z)?.members() {
            let img = phi(l);
            group_ideals.insert(l, self.group_ideals[&img].clone());
            group_maps.insert(l, self.group_maps[&img].clone());
        }
        Datum::new(
            gd.clone(),
            self.ring.clone(),
            lambda.clone(),
            ideals,
            tau_maps,
            group_ideals,
            group_maps,
        )
    }

    /// Extensional equality of data.
    pub fn eq_datum(&self, other: &Datum) -> bool {
        if self.groupoid != other.groupoid
            || self.ring != other.ring
            || self.base() != other.base()
        {
            return false;
        }
        self.ideals
            .iter()
            .all(|(y, i)| other.ideals[y].same_set(i))
            && self.tau_maps.iter().all(|(y, m)| &other.tau_maps[y] == m)
            && self.group_ideals.len() == other.group_ideals.len()
            && self
                .group_ideals
                .iter()
                .all(|(h, i)| other.group_ideals.get(h).is_some_and(|j| j.same_set(i)))
            && self.group_maps.iter().all(|(h, m)| &other.group_maps[h] == m)
    }

    /// Family `f = {f_y}` forming a morphism of data.
    pub fn validate_morphism(
        &self,
        other: &Datum,
        f: &BTreeMap<Morph, RingMap>,
    ) -> Result<(), ActionError> {
        if self.groupoid != other.groupoid || self.ring != other.ring {
            return Err(ActionError::Incompatible);
        }
        let gd = &self.groupoid;
        let x = self.base();
        let fx = f.get(&x).ok_or(ActionError::Missing {
            what: "homomorphism",
            name: gd.name(x).to_string(),
        })?;
        for &y in gd.objects() {
            let fy = f.get(&y).ok_or(ActionError::Missing {
                what: "homomorphism",
                name: gd.name(y).to_string(),
            })?;
            // f_y(I_{τ_y}) ⊆ I'_{τ_y} and f_x(I_{τ_y⁻¹}) ⊆ I'_{τ_y⁻¹}
            for &a in self.tau_maps[&y].codomain().members() {
                if !other.tau_maps[&y].codomain().contains(fy.apply2(a)) {
                    return Err(ActionError::ConditionFails {
                        witness: format!("f_y(I_τ) escapes at `{}`", self.ring.name(a)),
                    });
                }
            }
            for &a in self.tau_maps[&y].domain().members() {
                if !other.tau_maps[&y].domain().contains(fx.apply2(a)) {
                    return Err(ActionError::ConditionFails {
                        witness: format!("f_x(I_τ⁻¹) escapes at `{}`", self.ring.name(a)),
                    });
                }
                // γ'_{τ_y} ∘ f_x = f_y ∘ γ_{τ_y}
                let lhs = other.tau_maps[&y].apply(fx.apply2(a));
                let rhs = fy.apply2(self.tau_maps[&y].apply2(a));
                if lhs != Some(rhs) {
                    return Err(ActionError::ConditionFails {
                        witness: format!(
                            "γ'∘f_x and f_y∘γ disagree at `{}` over `{}`",
                            self.ring.name(a),
                            gd.name(y)
                        ),
                    });
                }
            }
        }
        // f_x is a morphism of the partial group actions
        for (&h, ih) in &self.group_ideals {
            for &a in ih.members() {
                if !other.group_ideals[&h].contains(fx.apply2(a)) {
                    return Err(ActionError::ConditionFails {
                        witness: format!("f_x(I_h) escapes at `{}`", self.ring.name(a)),
                    });
                }
            }
            for &a in self.group_maps[&h].domain().members() {
                let lhs = other.group_maps[&h].apply(fx.apply2(a));
                let rhs = fx.apply2(self.group_maps[&h].apply2(a));
                if lhs != Some(rhs) {
                    return Err(ActionError::ConditionFails {
                        witness: format!(
                            "γ'_h∘f_x and f_x∘γ_h disagree at `{}` over `{}`",
                            self.ring.name(a),
                            gd.name(h)
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// `lift(extract(α)) = α` holds exactly when
/// `A_g ⊆ A_{τ_{t(g)}} ∩ A_{g·τ_{s(g)}}` for every non-identity `g`.
pub fn lift_extract_equality_condition(action: &PartialAction, tau: &Transversal) -> bool {
    let gd = action.groupoid();
    gd.morphisms().filter(|&g| !gd.is_object(g)).all(|g| {
        let t1 = action.ideal(tau.tau(gd.tgt(g)));
        let gtau = gd.compose2(g, tau.tau(gd.src(g)));
        let t2 = action.ideal(gtau);
        action
            .ideal(g)
            .members()
            .iter()
            .all(|&a| t1.contains(a) && t2.contains(a))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn flagship_action_validates_and_is_tau_global() {
        let inst = instances::frob4();
        assert!(!inst.action.is_global());
        assert!(inst.action.is_unital());
        assert!(inst.action.is_tau_global(&inst.tau));
        // with the other transversal choice (through m) it is not
        let gd = inst.action.groupoid();
        let y = gd.by_name("y").unwrap();
        let m = gd.by_name("m").unwrap();
        let lam = Transversal::new(gd, inst.tau.base(), &BTreeMap::from([(y, m)])).unwrap();
        assert!(!inst.action.is_tau_global(&lam));
    }

    #[test]
    fn flagship_corrupted_ideal_fails_extension_axiom() {
        // redefining A_m as the e2-component breaks the compatibility laws
        let err = instances::frob4_with_bad_m_ideal().unwrap_err();
        assert!(
            matches!(err, ActionError::ExtensionAxiomFails { .. }),
            "got {err:?}"
        );
    }

    #[test]
    fn extract_then_lift_is_identity_on_data() {
        let inst = instances::frob4();
        let datum = Datum::extract(&inst.action, &inst.tau).unwrap();
        let lifted = datum.lift().unwrap();
        let again = Datum::extract(&lifted, &inst.tau).unwrap();
        assert!(datum.eq_datum(&again));
        // τ(x)-global: the round trip reproduces the action exactly
        assert!(lifted.eq_action(&inst.action).unwrap());
        assert!(lift_extract_equality_condition(&inst.action, &inst.tau));
    }

    #[test]
    fn lift_is_dominated_by_the_action() {
        // the J/L-restricted datum lifts to something strictly below the
        // identity-style upper bounds; here we check β = lift(extract(β))
        let inst = instances::restrict3();
        let lifted = inst.datum.lift().unwrap();
        let back = Datum::extract(&lifted, &inst.datum.tau()).unwrap();
        assert!(back.eq_datum(&inst.datum));
        // lifted action restricted to G(x) equals the group part
        let x = inst.datum.base();
        for h in inst.datum.group_members() {
            assert!(lifted.ideal(h).same_set(inst.datum.group_ideal(h)));
            let _ = x;
        }
    }

    #[test]
    fn restricted_datum_lift_matches_formulas() {
        // I = A, J = A(e1+e2), L = A(e2+e3), γ = swap(1,2), σ = Frobenius.
        // β_m : σ(J∩L) → γ(J∩L) must be γ∘σ with those exact sets.
        let inst = instances::restrict3();
        let r = inst.datum.ring();
        let gd = inst.datum.groupoid();
        let lifted = inst.datum.lift().unwrap();
        let m = gd.by_name("m").unwrap();
        let e1 = r.parse("e1").unwrap();
        let e2 = r.parse("e2").unwrap();
        // J∩L = A·e2, σ fixes it, γ moves it to A·e1
        let dom = lifted.map(m).domain();
        let ran = lifted.map(m).codomain();
        assert_eq!(dom.generator_idempotent(), Some(e2));
        assert_eq!(ran.generator_idempotent(), Some(e1));
        // pointwise: β_m(b·e2) = γ(σ(b·e2)) = frobenius(b)·e1
        for &a in dom.members() {
            let frob = r.mul(r.mul(a, a), a);
            let want_comps = {
                let c = r.components(frob);
                r.from_components(&[c[1], c[0], c[2]])
            };
            assert_eq!(lifted.map(m).apply2(a), want_comps);
        }
        // not τ(x)-global: I_{τ_y⁻¹} = J ≠ I_x
        assert!(!lifted.is_tau_global(inst.datum.tau()));
    }

    #[test]
    fn discrete_groupoid_identity_action_is_global() {
        // objects only, A_y = A·e_y, identity maps: a valid global action
        use crate::groupoid::GroupoidSpec;
        let spec = GroupoidSpec {
            morphisms: vec!["x".into(), "y".into()],
            objects: vec!["x".into(), "y".into()],
            src: [("x", "x"), ("y", "y")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .into(),
            tgt: [("x", "x"), ("y", "y")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .into(),
            inv: [("x", "x"), ("y", "y")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .into(),
            compose: vec![
                ["x".into(), "x".into(), "x".into()],
                ["y".into(), "y".into(), "y".into()],
            ],
        };
        let gd = Arc::new(crate::groupoid::FiniteGroupoid::validate(&spec).unwrap());
        let f3 = crate::ring::FiniteRing::zmod(3).unwrap();
        let r = crate::ring::FiniteRing::product(vec![f3.clone(), f3]).unwrap();
        let i1 = Ideal::unital(r.clone(), r.parse("e1").unwrap()).unwrap();
        let i2 = Ideal::unital(r.clone(), r.parse("e2").unwrap()).unwrap();
        let action = PartialAction::new(
            gd,
            r,
            vec![i1.clone(), i2.clone()],
            vec![RingMap::identity_on(&i1), RingMap::identity_on(&i2)],
        )
        .unwrap();
        assert!(action.is_global());
        assert!(action.is_unital());
    }

    #[test]
    fn one_object_trivial_datum_lifts_to_the_identity() {
        // trivial isotropy group on a single ideal: β is the identity
        use crate::groupoid::GroupoidSpec;
        let spec = GroupoidSpec {
            morphisms: vec!["x".into()],
            objects: vec!["x".into()],
            src: [("x", "x")].map(|(a, b)| (a.to_string(), b.to_string())).into(),
            tgt: [("x", "x")].map(|(a, b)| (a.to_string(), b.to_string())).into(),
            inv: [("x", "x")].map(|(a, b)| (a.to_string(), b.to_string())).into(),
            compose: vec![["x".into(), "x".into(), "x".into()]],
        };
        let gd = Arc::new(crate::groupoid::FiniteGroupoid::validate(&spec).unwrap());
        let r = crate::ring::FiniteRing::zmod(5).unwrap();
        let whole = Ideal::full(r.clone());
        let x = gd.by_name("x").unwrap();
        let tau = Transversal::new(&gd, x, &BTreeMap::new()).unwrap();
        let datum = Datum::new(
            gd,
            r,
            tau,
            BTreeMap::from([(x, whole.clone())]),
            BTreeMap::from([(x, RingMap::identity_on(&whole))]),
            BTreeMap::from([(x, whole.clone())]),
            BTreeMap::from([(x, RingMap::identity_on(&whole))]),
        )
        .unwrap();
        let lifted = datum.lift().unwrap();
        assert!(lifted.is_global());
        for &a in whole.members() {
            assert_eq!(lifted.map(x).apply2(a), a);
        }
    }

    #[test]
    fn lift_extract_equality_iff_containment_condition() {
        // under τ = {x, l} the flagship action equals its round trip and
        // satisfies the containment condition; under λ = {x, m} the lift
        // is a strict restriction and the condition fails
        let inst = instances::frob4();
        let gd = inst.action.groupoid();
        let y = gd.by_name("y").unwrap();
        let m = gd.by_name("m").unwrap();
        let lam = Transversal::new(gd, inst.tau.base(), &BTreeMap::from([(y, m)])).unwrap();

        for tau in [&inst.tau, &lam] {
            let lifted = Datum::extract(&inst.action, tau).unwrap().lift().unwrap();
            assert!(lifted.leq(&inst.action).unwrap());
            let equal = lifted.eq_action(&inst.action).unwrap();
            assert_eq!(
                equal,
                lift_extract_equality_condition(&inst.action, tau),
                "equality must match the containment condition"
            );
        }
        assert!(!lift_extract_equality_condition(&inst.action, &lam));
        assert!(lift_extract_equality_condition(&inst.action, &inst.tau));
    }

    #[test]
    fn datum_with_moved_base_map_fails_condition_d() {
        assert!(matches!(
            instances::restrict3_with_nonidentity_base().unwrap_err(),
            ActionError::DatumConditionFails { condition: 'd', .. }
        ));
    }

    #[test]
    fn rebase_round_trips_on_matched_transversals() {
        // (x, {x, l}) ⇄ (y, {y, l⁻¹}) and (x, {x, m}) ⇄ (y, {y, m⁻¹})
        let inst = instances::frob4();
        let datum = Datum::extract(&inst.action, &inst.tau).unwrap();
        let gd = inst.action.groupoid();
        let (x, y) = (gd.by_name("x").unwrap(), gd.by_name("y").unwrap());
        for (fwd, bwd) in [("l", "l'"), ("m", "m'")] {
            let lam = Transversal::new(
                gd,
                y,
                &BTreeMap::from([(x, gd.by_name(bwd).unwrap())]),
            )
            .unwrap();
            let there = datum.rebase(&lam).unwrap();
            let tau_back = Transversal::new(
                gd,
                x,
                &BTreeMap::from([(y, gd.by_name(fwd).unwrap())]),
            )
            .unwrap();
            let back = there.rebase(&tau_back).unwrap();
            // matched pair: the round trip is the identity when the
            // original transversal is restored
            if fwd == "l" {
                assert!(back.eq_datum(&datum), "round trip through {fwd} failed");
            } else {
                // rebasing through m lands in D_{λ(x)} with λ = {x, m};
                // returning along m recovers the datum only after the
                // group part is conjugated back, which matched pairs do
                assert!(back.eq_datum(&datum), "round trip through {fwd} failed");
            }
        }
        // rebase to the same base and transversal is the identity
        let same = datum.rebase(&inst.tau).unwrap();
        assert!(same.eq_datum(&datum));
    }

    #[test]
    fn rebase_group_transport_is_an_isomorphism() {
        let inst = instances::frob4();
        let gd = inst.action.groupoid();
        let y = gd.by_name("y").unwrap();
        let phi = conjugation_iso(gd, &inst.tau, y);
        let iso_y = gd.isotropy_group(y).unwrap();
        let iso_x = gd.isotropy_group(inst.tau.base()).unwrap();
        let mut images: Vec<Morph> = iso_y.members().iter().map(|&l| phi(l)).collect();
        images.sort();
        let mut expect = iso_x.members().to_vec();
        expect.sort();
        assert_eq!(images, expect);
        // multiplicative
        for &a in iso_y.members() {
            for &b in iso_y.members() {
                assert_eq!(phi(gd.compose2(a, b)), gd.compose2(phi(a), phi(b)));
            }
        }
    }

    #[test]
    fn action_order_is_reflexive_and_detects_extension() {
        let inst = instances::frob4();
        assert!(inst.action.leq(&inst.action).unwrap());
        let datum = Datum::extract(&inst.action, &inst.tau).unwrap();
        let lifted = datum.lift().unwrap();
        assert!(lifted.leq(&inst.action).unwrap());
    }

    #[test]
    fn identity_morphism_family_is_accepted() {
        let inst = instances::frob4();
        let gd = inst.action.groupoid();
        let mut psi = BTreeMap::new();
        for &yy in gd.objects() {
            psi.insert(yy, RingMap::identity_on(inst.action.ideal(yy)));
        }
        inst.action.validate_morphism(&inst.action, &psi).unwrap();

        let datum = Datum::extract(&inst.action, &inst.tau).unwrap();
        let mut f = BTreeMap::new();
        for &yy in gd.objects() {
            f.insert(yy, RingMap::identity_on(datum.object_ideal(yy)));
        }
        datum.validate_morphism(&datum, &f).unwrap();
    }

    #[test]
    fn morphism_family_violating_image_condition_is_rejected() {
        // collapse everything to zero on one side only: ψ_y = 0 into the
        // original action breaks α'∘ψ = ψ∘α? no — zero maps commute; use
        // instead a family that misses the ideal-image condition by
        // mapping A_x identically but into a smaller target action
        let inst = instances::restrict3();
        let lifted = inst.datum.lift().unwrap();
        let gd = lifted.groupoid();
        // target: the same action; family: swap-based map that moves A_g
        // off itself
        let r = lifted.ring();
        let mut psi = BTreeMap::new();
        for &yy in gd.objects() {
            let ideal = lifted.ideal(yy);
            // x ↦ cyclic shift of components, a ring automorphism of A
            // restricted to A_y = A (the ideals here are the whole ring)
            let f = RingMap::from_fn(
                ideal.clone(),
                Ideal::full(r.clone()),
                |a| {
                    let c = r.components(a);
                    r.from_components(&[c[2], c[0], c[1]])
                },
                false,
            )
            .unwrap();
            psi.insert(yy, f);
        }
        assert!(lifted.validate_morphism(&lifted, &psi).is_err());
    }
}
