//! Partial skew groupoid rings and the iterated-ring isomorphism.
//!
//! For a unital partial action `α` of a finite groupoid on `A`, the skew
//! ring `A ⋆_α G = ⊕_g A_g δ_g` multiplies by
//!
//! ```text
//! (a δ_g)(b δ_h) = a·α_g(b·1_{g⁻¹}) δ_{gh}   when s(g) = t(h), else 0.
//! ```
//!
//! Elements are sparse formal sums; the full ring (of cardinality
//! `Π|A_g|`) is never enumerated, and ring-level laws are verified on
//! the additive generators `{basis of A_g} × {δ_g}`.
//!
//! When `α` is also `τ(x)`-global, the object set supports a global
//! action of the pair groupoid `G₀² = G₀ × G₀` via
//! `α*_u = α_{τ_{t(u)}} ∘ α_{τ_{s(u)}⁻¹}`, the isotropy group `G(x)`
//! acts partially on `C = A ⋆_{α*} G₀²` through the ideals
//! `C_{z,h} = α_{τ_z}(A_h)` and maps
//! `θ_h(α_{τ_{t(u)}}(a) δ_u) = α_{τ_{t(u)}}(α_h(a)) δ_u`, and
//!
//! ```text
//! φ : A ⋆_α G → (A ⋆_{α*} G₀²) ⋆_θ G(x),   a δ_g ↦ a δ_{(s(g),t(g))} δ_{g_x}
//! ```
//!
//! is a ring isomorphism. `φ` is verified here additively, on all pairs
//! of additive generators multiplicatively, and componentwise
//! bijectively through the grading bijection `g ↔ ((s(g),t(g)), g_x)`.

use crate::action::{ActionError, PartialAction};
use crate::groupoid::{pair_groupoid, FiniteGroupoid, Morph, Transversal};
use crate::ideal::{Ideal, RingMap};
use crate::ring::El;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SkewError {
    #[error("action is not unital: some A_g has no central idempotent unit")]
    NotUnitalAction,
    #[error("action is not τ(x)-global for the given transversal")]
    NotTauGlobal,
    #[error("operands belong to different skew rings")]
    MixedRings,
    #[error("coefficient `{coeff}` lies outside the ideal at `{g}`")]
    CoefficientOutsideIdeal { g: String, coeff: String },
    #[error("verification fails at {step}: {witness}")]
    VerificationFails { step: &'static str, witness: String },
    #[error("φ is not well defined at `{g}`: {witness}")]
    NotWellDefined { g: String, witness: String },
    #[error("φ is not multiplicative on ({a}, {b})")]
    NotMultiplicative { a: String, b: String },
    #[error("φ is not bijective on component {component}")]
    NotBijective { component: String },
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Groupoid(#[from] crate::groupoid::GroupoidError),
}

/// The skew ring `A ⋆_α G` of a unital partial action.
pub struct SkewRing {
    action: PartialAction,
    units: Vec<El>,
    gens: Vec<(Morph, El)>,
}

impl fmt::Debug for SkewRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SkewRing({} morphisms, {} additive generators)",
            self.action.groupoid().len(),
            self.gens.len()
        )
    }
}

impl SkewRing {
    pub fn new(action: PartialAction) -> Result<Arc<Self>, SkewError> {
        let units = action.units().ok_or(SkewError::NotUnitalAction)?;
        let mut gens = Vec::new();
        for g in action.groupoid().morphisms() {
            for &b in action.ideal(g).basis() {
                gens.push((g, b));
            }
        }
        Ok(Arc::new(SkewRing {
            action,
            units,
            gens,
        }))
    }

    pub fn action(&self) -> &PartialAction {
        &self.action
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        self.action.groupoid()
    }

    pub fn unit_of(&self, g: Morph) -> El {
        self.units[g.0 as usize]
    }

    /// Additive generators `(g, basis element of A_g)`.
    pub fn gens(&self) -> &[(Morph, El)] {
        &self.gens
    }

    pub fn zero_elem(self: &Arc<Self>) -> SkewElem {
        SkewElem {
            ctx: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// A single term `a δ_g`; the coefficient must lie in `A_g`.
    pub fn monomial(self: &Arc<Self>, g: Morph, a: El) -> Result<SkewElem, SkewError> {
        if !self.action.ideal(g).contains(a) {
            return Err(SkewError::CoefficientOutsideIdeal {
                g: self.groupoid().name(g).to_string(),
                coeff: self.action.ring().name(a).to_string(),
            });
        }
        let mut terms = BTreeMap::new();
        if !self.action.ring().is_zero(a) {
            terms.insert(g, a);
        }
        Ok(SkewElem {
            ctx: self.clone(),
            terms,
        })
    }

    /// The identity `Σ_y 1_y δ_y`.
    pub fn identity(self: &Arc<Self>) -> SkewElem {
        let mut acc = self.zero_elem();
        for &y in self.groupoid().objects() {
            let t = self.monomial(y, self.unit_of(y)).expect("unit in ideal");
            acc = acc.add(&t).expect("same ring");
        }
        acc
    }

    /// Verifies associativity of the star product on every triple of
    /// additive generators, and that `Σ 1_y δ_y` is a two-sided identity
    /// on every generator.
    pub fn verify_ring_laws(self: &Arc<Self>) -> Result<(), SkewError> {
        self.verify_ring_laws_capped(0, usize::MAX)
    }

    /// Laws with a triple budget: exhaustive when `gens³` fits the cap,
    /// otherwise a seeded sample of that many triples.
    pub fn verify_ring_laws_capped(
        self: &Arc<Self>,
        seed: u64,
        max_triples: usize,
    ) -> Result<(), SkewError> {
        let one = self.identity();
        for &(g, a) in &self.gens {
            let m = self.monomial(g, a).unwrap();
            if one.mul(&m)? != m || m.mul(&one)? != m {
                return Err(SkewError::VerificationFails {
                    step: "identity law",
                    witness: format!("δ-term at `{}`", self.groupoid().name(g)),
                });
            }
        }
        let n = self.gens.len();
        let total = (n as u128).pow(3);
        let check = |i: usize, j: usize, k: usize| -> Result<(), SkewError> {
            let (g, a) = self.gens[i];
            let (h, b) = self.gens[j];
            let (l, c) = self.gens[k];
            let ma = self.monomial(g, a).unwrap();
            let mb = self.monomial(h, b).unwrap();
            let mc = self.monomial(l, c).unwrap();
            let lhs = ma.mul(&mb)?.mul(&mc)?;
            let rhs = ma.mul(&mb.mul(&mc)?)?;
            if lhs != rhs {
                return Err(SkewError::VerificationFails {
                    step: "associativity",
                    witness: format!(
                        "generators at (`{}`, `{}`, `{}`)",
                        self.groupoid().name(g),
                        self.groupoid().name(h),
                        self.groupoid().name(l)
                    ),
                });
            }
            Ok(())
        };
        if total <= max_triples as u128 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        check(i, j, k)?;
                    }
                }
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..max_triples {
                check(
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                )?;
            }
        }
        Ok(())
    }
}

/// A finitely supported formal sum `Σ a_g δ_g` with `a_g ∈ A_g`.
#[derive(Clone)]
pub struct SkewElem {
    ctx: Arc<SkewRing>,
    terms: BTreeMap<Morph, El>,
}

impl PartialEq for SkewElem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}
impl Eq for SkewElem {}

impl fmt::Debug for SkewElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let gd = self.ctx.groupoid();
        let r = self.ctx.action.ring();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&g, &a)| format!("({})δ_{}", r.name(a), gd.name(g)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl SkewElem {
    pub fn ring(&self) -> &Arc<SkewRing> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (Morph, El)> + '_ {
        self.terms.iter().map(|(&g, &a)| (g, a))
    }

    pub fn coefficient(&self, g: Morph) -> El {
        self.terms
            .get(&g)
            .copied()
            .unwrap_or_else(|| self.ctx.action.ring().zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ring(&self, other: &SkewElem) -> Result<(), SkewError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(SkewError::MixedRings)
        }
    }

    pub fn add(&self, other: &SkewElem) -> Result<SkewElem, SkewError> {
        self.same_ring(other)?;
        let r = self.ctx.action.ring();
        let mut terms = self.terms.clone();
        for (&g, &b) in &other.terms {
            let s = r.add(terms.get(&g).copied().unwrap_or_else(|| r.zero()), b);
            if r.is_zero(s) {
                terms.remove(&g);
            } else {
                terms.insert(g, s);
            }
        }
        Ok(SkewElem {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> SkewElem {
        let r = self.ctx.action.ring();
        SkewElem {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(&g, &a)| (g, r.neg(a))).collect(),
        }
    }

    pub fn sub(&self, other: &SkewElem) -> Result<SkewElem, SkewError> {
        self.add(&other.neg())
    }

    /// The star product, extended bilinearly from
    /// `(a δ_g)(b δ_h) = a·α_g(b·1_{g⁻¹}) δ_{gh}`.
    pub fn mul(&self, other: &SkewElem) -> Result<SkewElem, SkewError> {
        self.same_ring(other)?;
        let gd = self.ctx.groupoid();
        let r = self.ctx.action.ring();
        let act = &self.ctx.action;
        let mut terms: BTreeMap<Morph, El> = BTreeMap::new();
        for (&g, &a) in &self.terms {
            for (&h, &b) in &other.terms {
                let Some(gh) = gd.compose(g, h) else {
                    continue;
                };
                let cut = r.mul(b, self.ctx.unit_of(gd.inv(g)));
                let moved = act.map(g).apply2(cut);
                let coeff = r.mul(a, moved);
                if r.is_zero(coeff) {
                    continue;
                }
                let s = r.add(terms.get(&gh).copied().unwrap_or_else(|| r.zero()), coeff);
                if r.is_zero(s) {
                    terms.remove(&gh);
                } else {
                    terms.insert(gh, s);
                }
            }
        }
        Ok(SkewElem {
            ctx: self.ctx.clone(),
            terms,
        })
    }
}

/// The pair groupoid over the objects of a groupoid, with the index
/// correspondence `(y, z) ↔ y·m + z` kept explicit.
pub struct PairBase {
    pub groupoid: Arc<FiniteGroupoid>,
    objs: Vec<Morph>,
}

impl PairBase {
    pub fn over(gd: &FiniteGroupoid) -> Self {
        let names: Vec<String> = gd
            .objects()
            .iter()
            .map(|&y| gd.name(y).to_string())
            .collect();
        let pg = pair_groupoid(&names).expect("objects are nonempty");
        PairBase {
            groupoid: Arc::new(pg),
            objs: gd.objects().to_vec(),
        }
    }

    pub fn count(&self) -> usize {
        self.objs.len()
    }

    /// Source object of a pair morphism, as an object of the base.
    pub fn src_obj(&self, u: Morph) -> Morph {
        self.objs[u.0 as usize / self.count()]
    }

    /// Target object of a pair morphism, as an object of the base.
    pub fn tgt_obj(&self, u: Morph) -> Morph {
        self.objs[u.0 as usize % self.count()]
    }

    /// The pair morphism `(y, z)`.
    pub fn pair(&self, y: Morph, z: Morph) -> Morph {
        let yi = self.objs.iter().position(|&o| o == y).expect("object");
        let zi = self.objs.iter().position(|&o| o == z).expect("object");
        Morph((yi * self.count() + zi) as u16)
    }
}

/// The induced global action `α*` of the pair groupoid on `A`:
/// `A*_u = A_{t(u)}` and `α*_u = α_{τ_{t(u)}} ∘ α_{τ_{s(u)}⁻¹}`.
pub fn alpha_star(
    action: &PartialAction,
    tau: &Transversal,
) -> Result<(PairBase, PartialAction), SkewError> {
    if !action.is_tau_global(tau) {
        return Err(SkewError::NotTauGlobal);
    }
    let base = PairBase::over(action.groupoid());
    let gd = action.groupoid();
    let mut ideals = vec![None; base.groupoid.len()];
    let mut maps = vec![None; base.groupoid.len()];
    for u in base.groupoid.morphisms() {
        let (s, t) = (base.src_obj(u), base.tgt_obj(u));
        let m = action
            .map(tau.tau(t))
            .compose(&action.map(gd.inv(tau.tau(s))));
        ideals[u.0 as usize] = Some(action.ideal(t).clone());
        maps[u.0 as usize] = Some(m);
    }
    let star = PartialAction::new(
        base.groupoid.clone(),
        action.ring().clone(),
        ideals.into_iter().map(Option::unwrap).collect(),
        maps.into_iter().map(Option::unwrap).collect(),
    )?;
    if !star.is_global() {
        return Err(SkewError::VerificationFails {
            step: "induced pair action",
            witness: "α* is not global".into(),
        });
    }
    Ok((base, star))
}

/// The partial action `θ` of `G(x)` on `C = A ⋆_{α*} G₀²`, with all the
/// structure it is built from.
pub struct ThetaData {
    pub base: PairBase,
    pub c_ring: Arc<SkewRing>,
    /// the groupoid the isotropy members index
    pub parent: Arc<FiniteGroupoid>,
    /// isotropy members, `x` first
    pub members: Vec<Morph>,
    /// `C_{z,h} = α_{τ_z}(A_h)` per (object, isotropy member)
    components: BTreeMap<(Morph, Morph), Ideal>,
    /// `1'_h = Σ_z α_{τ_z}(1_h) δ_{(z,z)}`
    units: BTreeMap<Morph, SkewElem>,
    /// `θ_{z,h} : C_{z,h⁻¹} → C_{z,h}` as maps of `A`
    theta_maps: BTreeMap<(Morph, Morph), RingMap>,
    x: Morph,
}

impl ThetaData {
    /// Builds and verifies the θ-structure: the component grid, the
    /// central idempotent units of the `C_h`, and the partial-action
    /// laws of `θ` (identity, multiplicativity, domain containment and
    /// composition).
    pub fn new(action: &PartialAction, tau: &Transversal) -> Result<Self, SkewError> {
        let (base, star) = alpha_star(action, tau)?;
        let c_ring = SkewRing::new(star)?;
        let gd = action.groupoid();
        let x = tau.base();
        let iso = gd.isotropy_group(x)?;
        let mut members = iso.members().to_vec();
        members.sort_by_key(|&h| (h != x, h));

        let mut components = BTreeMap::new();
        let mut theta_maps = BTreeMap::new();
        for &z in gd.objects() {
            let tz = tau.tau(z);
            for &h in &members {
                let comp = action.map(tz).image_of(action.ideal(h));
                components.insert((z, h), comp);
                let m = action
                    .map(tz)
                    .compose(action.map(h))
                    .compose(&action.map(tz).inverse());
                theta_maps.insert((z, h), m);
            }
        }
        // C_x = C: the x-column is the full coefficient grid
        for &z in gd.objects() {
            if !components[&(z, x)].same_set(action.ideal(z)) {
                return Err(SkewError::VerificationFails {
                    step: "C_x = C",
                    witness: format!("column at `{}` differs from A_z", gd.name(z)),
                });
            }
        }
        // θ maps have the component grid as domain and range
        for &z in gd.objects() {
            for &h in &members {
                let m = &theta_maps[&(z, h)];
                if !m.domain().same_set(&components[&(z, gd.inv(h))])
                    || !m.codomain().same_set(&components[&(z, h)])
                {
                    return Err(SkewError::VerificationFails {
                        step: "component domains",
                        witness: format!(
                            "θ at (`{}`, `{}`) is not C_{{z,h⁻¹}} → C_{{z,h}}",
                            gd.name(z),
                            gd.name(h)
                        ),
                    });
                }
            }
        }
        // units 1'_h: central idempotents with C_h = 1'_h·C
        let mut units = BTreeMap::new();
        let au = action.units().ok_or(SkewError::NotUnitalAction)?;
        for &h in &members {
            let mut u = c_ring.zero_elem();
            for &z in gd.objects() {
                let coeff = action.map(tau.tau(z)).apply2(au[h.0 as usize]);
                let t = c_ring.monomial(base.pair(z, z), coeff)?;
                u = u.add(&t)?;
            }
            units.insert(h, u);
        }
        let data = ThetaData {
            base,
            c_ring,
            parent: gd.clone(),
            members,
            components,
            units,
            theta_maps,
            x,
        };
        data.verify(action, tau)?;
        Ok(data)
    }

    pub fn component(&self, z: Morph, h: Morph) -> &Ideal {
        &self.components[&(z, h)]
    }

    pub fn unit(&self, h: Morph) -> &SkewElem {
        &self.units[&h]
    }

    /// Applies `θ_h` termwise; every coefficient must lie in the
    /// `h⁻¹`-component of its grading.
    pub fn theta(&self, h: Morph, c: &SkewElem) -> Result<SkewElem, SkewError> {
        let mut acc = self.c_ring.zero_elem();
        for (u, a) in c.terms() {
            let z = self.base.tgt_obj(u);
            let map = &self.theta_maps[&(z, h)];
            if !map.domain().contains(a) {
                let r = self.c_ring.action().ring();
                return Err(SkewError::CoefficientOutsideIdeal {
                    g: format!("θ_{} component at `{}`", h.0, self.parent.name(z)),
                    coeff: r.name(a).to_string(),
                });
            }
            let t = self.c_ring.monomial(u, map.apply2(a))?;
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Generators of `C_h`: basis elements of `C_{t(u),h}` times `δ_u`.
    pub fn component_gens(&self, h: Morph) -> Vec<SkewElem> {
        let mut out = Vec::new();
        for u in self.base.groupoid.morphisms() {
            let z = self.base.tgt_obj(u);
            for &b in self.components[&(z, h)].basis() {
                out.push(self.c_ring.monomial(u, b).expect("basis in component"));
            }
        }
        out
    }

    fn verify(&self, action: &PartialAction, _tau: &Transversal) -> Result<(), SkewError> {
        let gd = action.groupoid();
        let c_gens: Vec<SkewElem> = self
            .c_ring
            .gens()
            .iter()
            .map(|&(u, a)| self.c_ring.monomial(u, a).unwrap())
            .collect();
        // units are central idempotents with C_h = 1'_h·C
        for &h in &self.members {
            let u = &self.units[&h];
            if u.mul(u)? != *u {
                return Err(SkewError::VerificationFails {
                    step: "unit idempotency",
                    witness: gd.name(h).to_string(),
                });
            }
            for c in &c_gens {
                if u.mul(c)? != c.mul(u)? {
                    return Err(SkewError::VerificationFails {
                        step: "unit centrality",
                        witness: format!("1' at `{}` against {:?}", gd.name(h), c),
                    });
                }
            }
            for c in self.component_gens(h) {
                if u.mul(&c)? != c || c.mul(u)? != c {
                    return Err(SkewError::VerificationFails {
                        step: "unit identity on C_h",
                        witness: gd.name(h).to_string(),
                    });
                }
            }
            // C_h = 1'_h·C componentwise
            for &z in gd.objects() {
                let want = &self.components[&(z, h)];
                let coeff = self.units[&h].coefficient(self.base.pair(z, z));
                let r = action.ring();
                let mut got: Vec<El> =
                    action.ideal(z).members().iter().map(|&a| r.mul(a, coeff)).collect();
                got.sort();
                got.dedup();
                if got != want.members() {
                    return Err(SkewError::VerificationFails {
                        step: "C_h = 1'_h·C",
                        witness: format!("component (`{}`, `{}`)", gd.name(z), gd.name(h)),
                    });
                }
            }
        }
        // Step 1: θ_x is the identity of C = C_x
        for c in &c_gens {
            if self.theta(self.x, c)? != *c {
                return Err(SkewError::VerificationFails {
                    step: "θ identity",
                    witness: format!("{c:?}"),
                });
            }
        }
        // Step 2: θ_h multiplicative on C_{h⁻¹}
        for &h in &self.members {
            let hg = self.component_gens(gd.inv(h));
            for a in &hg {
                for b in &hg {
                    let prod = a.mul(b)?;
                    let lhs = self.theta(h, &prod)?;
                    let rhs = self.theta(h, a)?.mul(&self.theta(h, b)?)?;
                    if lhs != rhs {
                        return Err(SkewError::VerificationFails {
                            step: "θ multiplicativity",
                            witness: format!("θ at `{}` on {:?}, {:?}", gd.name(h), a, b),
                        });
                    }
                }
            }
        }
        // Steps 3 and 4: θ_{l⁻¹}(C_l ∩ C_{h⁻¹}) ⊆ C_{(hl)⁻¹} and
        // θ_h∘θ_l = θ_{hl} there, componentwise
        for &h in &self.members {
            for &l in &self.members {
                let hl = gd.compose2(h, l);
                for &z in gd.objects() {
                    let meet = self.components[&(z, l)].intersect(&self.components[&(z, gd.inv(h))]);
                    let back = self.theta_maps[&(z, gd.inv(l))].image_of(&meet);
                    for &a in back.members() {
                        if !self.components[&(z, gd.inv(hl))].contains(a) {
                            return Err(SkewError::VerificationFails {
                                step: "θ domain containment",
                                witness: format!(
                                    "θ_{{l⁻¹}}(C_l ∩ C_{{h⁻¹}}) escapes at (`{}`,`{}`,`{}`)",
                                    gd.name(h),
                                    gd.name(l),
                                    gd.name(z)
                                ),
                            });
                        }
                        let two = self.theta_maps[&(z, h)]
                            .apply(self.theta_maps[&(z, l)].apply2(a));
                        let one = self.theta_maps[&(z, hl)].apply(a);
                        if two != one || two.is_none() {
                            return Err(SkewError::VerificationFails {
                                step: "θ composition",
                                witness: format!(
                                    "θ_h∘θ_l ≠ θ_hl at (`{}`,`{}`,`{}`)",
                                    gd.name(h),
                                    gd.name(l),
                                    gd.name(z)
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// An element of the iterated ring `(A ⋆_{α*} G₀²) ⋆_θ G(x)`: a formal
/// sum over isotropy members with skew-ring coefficients in the `C_h`.
#[derive(Clone, PartialEq, Eq)]
pub struct IterElem {
    terms: BTreeMap<Morph, SkewElem>,
}

impl fmt::Debug for IterElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(h, c)| format!("[{c:?}]δ_{}", h.0))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl IterElem {
    pub fn zero() -> Self {
        IterElem {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(theta: &ThetaData, h: Morph, c: SkewElem) -> Result<Self, SkewError> {
        // every coefficient in the h-component of its grading
        for (u, a) in c.terms() {
            let z = theta.base.tgt_obj(u);
            if !theta.components[&(z, h)].contains(a) {
                return Err(SkewError::CoefficientOutsideIdeal {
                    g: format!("C component at isotropy index {}", h.0),
                    coeff: theta.c_ring.action().ring().name(a).to_string(),
                });
            }
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(h, c);
        }
        Ok(IterElem { terms })
    }

    pub fn coefficient(&self, theta: &ThetaData, h: Morph) -> SkewElem {
        self.terms
            .get(&h)
            .cloned()
            .unwrap_or_else(|| theta.c_ring.zero_elem())
    }

    pub fn add(&self, _theta: &ThetaData, other: &IterElem) -> Result<IterElem, SkewError> {
        let mut terms = self.terms.clone();
        for (&h, c) in &other.terms {
            let s = match terms.get(&h) {
                Some(existing) => existing.add(c)?,
                None => c.clone(),
            };
            if s.is_zero() {
                terms.remove(&h);
            } else {
                terms.insert(h, s);
            }
        }
        Ok(IterElem { terms })
    }

    /// `(c δ_h)(d δ_l) = c·θ_h(d·1'_{h⁻¹}) δ_{hl}`, extended bilinearly.
    pub fn mul(&self, theta: &ThetaData, other: &IterElem) -> Result<IterElem, SkewError> {
        let parent = &theta.parent;
        let mut out = IterElem::zero();
        for (&h, c) in &self.terms {
            for (&l, d) in &other.terms {
                let hl = parent.compose2(h, l);
                let cut = d.mul(theta.unit(parent.inv(h)))?;
                let moved = theta.theta(h, &cut)?;
                let coeff = c.mul(&moved)?;
                let t = IterElem::monomial(theta, hl, coeff)?;
                out = out.add(theta, &t)?;
            }
        }
        Ok(out)
    }
}

/// Verified isomorphism data for
/// `φ : A ⋆_α G → (A ⋆_{α*} G₀²) ⋆_θ G(x)`.
pub struct PhiIso {
    pub theta: ThetaData,
    /// per component `(g, u, g_x, generator count)`
    pub components: Vec<(Morph, Morph, Morph, usize)>,
    pub pairs_checked: usize,
}

impl PhiIso {
    /// `φ(a δ_g) = a δ_{(s(g),t(g))} δ_{g_x}`, extended additively.
    pub fn apply(&self, elem: &SkewElem, tau: &Transversal) -> Result<IterElem, SkewError> {
        let gd = elem.ring().groupoid().clone();
        let mut out = IterElem::zero();
        for (g, a) in elem.terms() {
            let u = self.theta.base.pair(gd.src(g), gd.tgt(g));
            let gx = tau.project(&gd, g);
            let inner = self.theta.c_ring.monomial(u, a)?;
            let t = IterElem::monomial(&self.theta, gx, inner)?;
            out = out.add(&self.theta, &t)?;
        }
        Ok(out)
    }
}

/// Builds θ and verifies that φ is a well-defined, multiplicative,
/// bijective correspondence, component by component.
pub fn phi_iso(
    skew: &Arc<SkewRing>,
    tau: &Transversal,
) -> Result<PhiIso, SkewError> {
    let action = skew.action();
    let theta = ThetaData::new(action, tau)?;
    let gd = action.groupoid();

    // Step 1 (well-defined): A_g ⊆ C_{t(g), g_x} coefficientwise
    for g in gd.morphisms() {
        let gx = tau.project(gd, g);
        let comp = theta.component(gd.tgt(g), gx);
        for &a in action.ideal(g).members() {
            if !comp.contains(a) {
                return Err(SkewError::NotWellDefined {
                    g: gd.name(g).to_string(),
                    witness: format!(
                        "coefficient `{}` of A_g misses C_{{t(g),g_x}}",
                        action.ring().name(a)
                    ),
                });
            }
        }
    }

    // Step 3 (injectivity of the grading): g ↦ ((s,t), g_x) is injective
    let mut seen: BTreeMap<(Morph, Morph), Morph> = BTreeMap::new();
    let mut components = Vec::new();
    for g in gd.morphisms() {
        let u = theta.base.pair(gd.src(g), gd.tgt(g));
        let gx = tau.project(gd, g);
        if let Some(prev) = seen.insert((u, gx), g) {
            return Err(SkewError::NotBijective {
                component: format!(
                    "`{}` and `{}` share the grading ((s,t), g_x)",
                    gd.name(prev),
                    gd.name(g)
                ),
            });
        }
        components.push((g, u, gx, action.ideal(g).basis().len()));
    }
    // Step 4 (surjectivity): every (u, h) is hit, with full coefficient
    // range A_g = C_{t(u),h}
    for u in theta.base.groupoid.morphisms() {
        let (s, t) = (theta.base.src_obj(u), theta.base.tgt_obj(u));
        for &h in &theta.members {
            let g = gd.compose2(gd.compose2(tau.tau(t), h), gd.inv(tau.tau(s)));
            let u2 = theta.base.pair(gd.src(g), gd.tgt(g));
            let gx = tau.project(gd, g);
            if u2 != u || gx != h {
                return Err(SkewError::NotBijective {
                    component: format!("preimage of ((`{}`...), isotropy) misgrades", gd.name(t)),
                });
            }
            if !action.ideal(g).same_set(theta.component(t, h)) {
                return Err(SkewError::NotBijective {
                    component: format!(
                        "A at `{}` differs from C component (`{}`, `{}`)",
                        gd.name(g),
                        gd.name(t),
                        gd.name(h)
                    ),
                });
            }
        }
    }

    let phi = PhiIso {
        theta,
        components,
        pairs_checked: 0,
    };

    // Step 2 (multiplicative): all pairs of additive generators
    let mut pairs = 0usize;
    for &(g, a) in skew.gens() {
        let ma = skew.monomial(g, a)?;
        let fa = phi.apply(&ma, tau)?;
        for &(h, b) in skew.gens() {
            let mb = skew.monomial(h, b)?;
            let fb = phi.apply(&mb, tau)?;
            let lhs = phi.apply(&ma.mul(&mb)?, tau)?;
            let rhs = fa.mul(&phi.theta, &fb)?;
            if lhs != rhs {
                return Err(SkewError::NotMultiplicative {
                    a: format!("({})δ_{}", action.ring().name(a), gd.name(g)),
                    b: format!("({})δ_{}", action.ring().name(b), gd.name(h)),
                });
            }
            pairs += 1;
        }
    }
    // additivity of φ on a generator sum (structural, but asserted)
    if let (Some(&(g1, a1)), Some(&(g2, a2))) = (skew.gens().first(), skew.gens().last()) {
        let s1 = skew.monomial(g1, a1)?;
        let s2 = skew.monomial(g2, a2)?;
        let sum = s1.add(&s2)?;
        let lhs = phi.apply(&sum, tau)?;
        let rhs = phi.apply(&s1, tau)?.add(&phi.theta, &phi.apply(&s2, tau)?)?;
        if lhs != rhs {
            return Err(SkewError::VerificationFails {
                step: "φ additivity",
                witness: "generator sum".into(),
            });
        }
    }

    Ok(PhiIso {
        pairs_checked: pairs,
        ..phi
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn star_product_basic_laws() {
        let inst = instances::frob4();
        let skew = SkewRing::new(inst.action.clone()).unwrap();
        let gd = skew.groupoid().clone();
        let r = inst.ring.clone();
        let x = gd.by_name("x").unwrap();
        let g = gd.by_name("g").unwrap();
        let l = gd.by_name("l").unwrap();
        let e1 = r.parse("e1").unwrap();

        // identity law on a compatible term: (1_x δ_x)(a δ_g) = a δ_g
        let unit_x = skew.monomial(x, skew.unit_of(x)).unwrap();
        let adg = skew.monomial(g, e1).unwrap();
        assert_eq!(unit_x.mul(&adg).unwrap(), adg);

        // (e1 δ_g)(e1 δ_g) = α_g(e1) δ_x = e1 δ_x since g² = x
        let sq = adg.mul(&adg).unwrap();
        assert_eq!(sq, skew.monomial(x, e1).unwrap());

        // orthogonality: s(g) = x ≠ y = t(l) makes (a δ_g)(b δ_l) = 0
        let e3 = r.parse("e3").unwrap();
        let bdl = skew.monomial(l, e3).unwrap();
        assert!(adg.mul(&bdl).unwrap().is_zero());

        // (a δ_g)(b δ_{g⁻¹}) = a·α_g(b·1_{g⁻¹}) δ_{t(g)} in general
        let m = gd.by_name("m").unwrap();
        let m_inv = gd.by_name("m'").unwrap();
        let a = r.parse("e3*a").unwrap(); // in A_m
        let b = r.parse("e1*(a+1)").unwrap(); // in A_{m'} = A_{m⁻¹}
        let lhs = skew
            .monomial(m, a)
            .unwrap()
            .mul(&skew.monomial(m_inv, b).unwrap())
            .unwrap();
        let y = gd.by_name("y").unwrap();
        let coeff = r.mul(
            a,
            inst.action
                .map(m)
                .apply2(r.mul(b, skew.unit_of(gd.inv(m)))),
        );
        assert_eq!(lhs, skew.monomial(y, coeff).unwrap());
    }

    #[test]
    fn ring_laws_hold_on_generators() {
        for inst in [instances::pair_swap(), instances::char2_trivial()] {
            let skew = SkewRing::new(inst.action.clone()).unwrap();
            skew.verify_ring_laws().unwrap();
        }
    }

    #[test]
    fn non_unital_action_is_rejected() {
        let inst = instances::z4_nonunital();
        assert!(matches!(
            SkewRing::new(inst.action.clone()),
            Err(SkewError::NotUnitalAction)
        ));
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let a = SkewRing::new(instances::pair_swap().action.clone()).unwrap();
        let b = SkewRing::new(instances::pair_swap().action.clone()).unwrap();
        let ea = a.identity();
        let eb = b.identity();
        assert!(matches!(ea.mul(&eb), Err(SkewError::MixedRings)));
    }

    #[test]
    fn induced_pair_action_is_global_with_the_right_maps() {
        let inst = instances::frob4();
        let (base, star) = alpha_star(&inst.action, &inst.tau).unwrap();
        assert!(star.is_global());
        let gd = inst.action.groupoid();
        let x = gd.by_name("x").unwrap();
        let y = gd.by_name("y").unwrap();
        // u = (y, y) acts as the identity on A_y
        let uyy = base.pair(y, y);
        for &a in inst.action.ideal(y).members() {
            assert_eq!(star.map(uyy).apply2(a), a);
        }
        // u = (x, y): α*_u = α_{τ_y} ∘ α_{τ_x⁻¹} = α_l
        let uxy = base.pair(x, y);
        let l = gd.by_name("l").unwrap();
        assert_eq!(star.map(uxy), inst.action.map(l));
        // exhaustive composition law on the pair groupoid
        for u in base.groupoid.morphisms() {
            for v in base.groupoid.morphisms() {
                if let Some(uv) = base.groupoid.compose(u, v) {
                    let comp = star.map(u).compose(star.map(v));
                    assert_eq!(&comp, star.map(uv));
                }
            }
        }
        // a non-τ(x)-global action is rejected
        let r3 = instances::restrict3();
        assert!(matches!(
            alpha_star(&r3.action, r3.datum.tau()),
            Err(SkewError::NotTauGlobal)
        ));
    }

    #[test]
    fn theta_structure_on_the_flagship() {
        let inst = instances::frob4();
        let theta = ThetaData::new(&inst.action, &inst.tau).unwrap();
        let gd = inst.action.groupoid();
        let r = &inst.ring;
        let x = gd.by_name("x").unwrap();
        let y = gd.by_name("y").unwrap();
        let g = gd.by_name("g").unwrap();
        // 1'_g = Σ_z α_{τ_z}(e1) δ_{(z,z)} = e1 δ_{(x,x)} + e3 δ_{(y,y)}
        let unit_g = theta.unit(g);
        assert_eq!(
            unit_g.coefficient(theta.base.pair(x, x)),
            r.parse("e1").unwrap()
        );
        assert_eq!(
            unit_g.coefficient(theta.base.pair(y, y)),
            r.parse("e3").unwrap()
        );
        // C_{y,g} = α_{τ_y}(A_g) = GF(9)e3
        assert_eq!(
            theta.component(y, g).generator_idempotent(),
            Some(r.parse("e3").unwrap())
        );
    }

    #[test]
    fn phi_is_an_isomorphism_on_the_flagship() {
        let inst = instances::frob4();
        let skew = SkewRing::new(inst.action.clone()).unwrap();
        let phi = phi_iso(&skew, &inst.tau).unwrap();
        assert_eq!(phi.components.len(), 8);
        assert_eq!(phi.pairs_checked, skew.gens().len() * skew.gens().len());

        let gd = inst.action.groupoid();
        let r = &inst.ring;
        // φ(1_y δ_y) = 1_y δ_{(y,y)} δ_x
        let y = gd.by_name("y").unwrap();
        let x = gd.by_name("x").unwrap();
        let img = phi
            .apply(&skew.monomial(y, skew.unit_of(y)).unwrap(), &inst.tau)
            .unwrap();
        let want_inner = phi
            .theta
            .c_ring
            .monomial(phi.theta.base.pair(y, y), skew.unit_of(y))
            .unwrap();
        assert_eq!(img.coefficient(&phi.theta, x), want_inner);

        // φ(a δ_m) = a δ_{(x,y)} δ_g since m_x = g
        let m = gd.by_name("m").unwrap();
        let g = gd.by_name("g").unwrap();
        let a = r.parse("e3*(a+2)").unwrap();
        let img = phi.apply(&skew.monomial(m, a).unwrap(), &inst.tau).unwrap();
        let want_inner = phi
            .theta
            .c_ring
            .monomial(phi.theta.base.pair(x, y), a)
            .unwrap();
        assert_eq!(img.coefficient(&phi.theta, g), want_inner);
    }

    #[test]
    fn phi_on_one_object_instances() {
        // G(x) = G and G₀² trivial: φ is essentially the identity
        for inst in [instances::char2_trivial(), instances::swap_gf2sq()] {
            let skew = SkewRing::new(inst.action.clone()).unwrap();
            phi_iso(&skew, &inst.tau).unwrap();
        }
    }

    #[test]
    fn iterated_ring_identity() {
        let inst = instances::gamma_z2();
        let skew = SkewRing::new(inst.action.clone()).unwrap();
        let phi = phi_iso(&skew, &inst.tau).unwrap();
        let theta = &phi.theta;
        // the identity of the iterated ring is 1'_x δ_x = (Σ 1_z δ_(z,z)) δ_x
        let x = inst.tau.base();
        let one = IterElem::monomial(theta, x, theta.c_ring.identity()).unwrap();
        for &(g, a) in skew.gens() {
            let img = phi
                .apply(&skew.monomial(g, a).unwrap(), &inst.tau)
                .unwrap();
            assert_eq!(one.mul(theta, &img).unwrap(), img);
            assert_eq!(img.mul(theta, &one).unwrap(), img);
        }
    }

    #[test]
    fn skew_associativity_on_flagship_generators() {
        let inst = instances::frob4();
        let skew = SkewRing::new(inst.action.clone()).unwrap();
        skew.verify_ring_laws().unwrap();
    }
}
