//! Morita contexts, partial Galois theory, separability and Frobenius
//! witnesses for lifted actions.
//!
//! Two contexts are built and verified on every instance:
//!
//! * the skew–skew context between `R = A ⋆_β G` and
//!   `S = B_x ⋆_{β(x)} G(x)`, with `U = R·1_S`, `V = 1_S·R` and
//!   multiplication as both pairings — the spans satisfy
//!   `U = Σ_{g∈S_x} B_g δ_g`, `V = Σ_{g∈T_x} B_g δ_g`, `1_S R 1_S = S`
//!   and `R 1_S R = R`;
//! * the trace context between `A ⋆_β G` and `A^β` with the pairings
//!   `Γ(a,b) = t_β(ab)` and `Γ'(a,b) = Σ_g a·β_g(b·1_{g⁻¹}) δ_g`,
//!   together with its group-part twin over `B_x`.
//!
//! `A` is a partial Galois extension of `A^β` when coordinates
//! `(a_i, b_i)` exist with `Σ_i a_i·β_g(b_i·1_{g⁻¹}) = δ_{g,G₀}·1_g`;
//! this is decided completely through surjectivity of `Γ'` (the
//! identity of the skew ring lies in the image span iff the image, a
//! two-sided ideal, is everything), and constructively through a
//! generator-supported search. Strictness of the trace contexts is
//! decided through the equivalence with “Galois and trace onto”, and
//! the groupoid-level and group-level answers are asserted equal.
//!
//! Separability of `A ⊂ A⋆_βG` is decided by solving `t_z(a) = 1_z`
//! over the center of `A` (equivalently `t_{β(x)}(b) = 1_x` over the
//! center of `B_x`), and the Frobenius property is witnessed by
//! `u = Σ_g 1_g δ_g ⊗ 1_{g⁻¹} δ_{g⁻¹}` with the counit
//! `ε(a_g δ_g) = δ_{g,G₀}·a_g`, checked inside the SNF-computed tensor
//! square.

use crate::abelian;
use crate::groupoid::Morph;
use crate::invariants::{self, InvariantsError, LiftedContext};
use crate::ring::El;
use crate::skewring::{SkewElem, SkewError, SkewRing};
use crate::tensor::{self, TensorError, TensorGroup, TensorInput};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MoritaError {
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("{part} verification fails: {witness}")]
    VerificationFails { part: &'static str, witness: String },
    #[error("theorem-level equivalence broke: {0}")]
    InconsistentEquivalence(String),
    #[error("Galois search space has {count} candidate tuples, over the cap {cap}")]
    SearchSpaceExceeded { count: u128, cap: u128 },
}

/// Additive presentation of a skew ring: concatenated ideal coordinates
/// per morphism, for span comparisons inside `⊕_g A_g`.
pub struct SkewPresentation {
    ring: Arc<SkewRing>,
    offsets: Vec<usize>,
    moduli: Vec<i128>,
}

impl SkewPresentation {
    pub fn new(ring: Arc<SkewRing>) -> Self {
        let gd = ring.groupoid().clone();
        let mut offsets = vec![0usize; gd.len() + 1];
        let mut moduli = Vec::new();
        for g in gd.morphisms() {
            offsets[g.0 as usize] = moduli.len();
            for &o in ring.action().ideal(g).basis_orders() {
                moduli.push(o as i128);
            }
        }
        offsets[gd.len()] = moduli.len();
        SkewPresentation {
            ring,
            offsets,
            moduli,
        }
    }

    pub fn moduli(&self) -> &[i128] {
        &self.moduli
    }

    pub fn coords(&self, e: &SkewElem) -> Vec<i128> {
        let mut v = vec![0i128; self.moduli.len()];
        for (g, a) in e.terms() {
            let ideal = self.ring.action().ideal(g);
            let cs = ideal.member_coords(a);
            let off = self.offsets[g.0 as usize];
            v[off..off + cs.len()].copy_from_slice(&cs);
        }
        v
    }

    pub fn span(&self, elems: &[SkewElem]) -> abelian::Subgroup {
        let vecs: Vec<Vec<i128>> = elems.iter().map(|e| self.coords(e)).collect();
        abelian::Subgroup::new(&self.moduli, &vecs)
    }

    pub fn full_span(&self) -> abelian::Subgroup {
        abelian::Subgroup::full(&self.moduli)
    }
}

/// Translates an element of the isotropy skew ring `S` into the ambient
/// skew ring `R` along the shared morphism names.
pub fn embed_isotropy(ctx: &LiftedContext, s: &SkewElem) -> Result<SkewElem, SkewError> {
    let mut out = ctx.skew.zero_elem();
    for (h, a) in s.terms() {
        let parent = ctx.iso.to_parent[h.0 as usize];
        out = out.add(&ctx.skew.monomial(parent, a)?)?;
    }
    Ok(out)
}

/// `1_S = 1_x δ_x`, viewed inside `R`.
pub fn one_s(ctx: &LiftedContext) -> SkewElem {
    ctx.skew
        .monomial(ctx.x, ctx.unit(ctx.x))
        .expect("unit of the base object")
}

/// The verified skew–skew Morita context.
pub struct SkewMoritaContext {
    pub u_gens: Vec<SkewElem>,
    pub v_gens: Vec<SkewElem>,
    pub mu_surjective: bool,
    pub nu_surjective: bool,
}

/// Builds `U = R·1_S`, `V = 1_S·R`, checks the closed forms and the
/// associativity conditions, and verifies that both pairings are onto.
pub fn skew_skew_context(ctx: &LiftedContext) -> Result<SkewMoritaContext, MoritaError> {
    let gd = ctx.groupoid().clone();
    let pres = SkewPresentation::new(ctx.skew.clone());
    let e = one_s(ctx);
    let r_gens: Vec<SkewElem> = ctx
        .skew
        .gens()
        .iter()
        .map(|&(g, a)| ctx.skew.monomial(g, a).expect("generator"))
        .collect();

    // U = R·1_S: image span of right multiplication by 1_S
    let u_gens: Vec<SkewElem> = r_gens
        .iter()
        .map(|r| r.mul(&e))
        .collect::<Result<_, _>>()?;
    let u_span = pres.span(&u_gens);
    let direct_u: Vec<SkewElem> = ctx
        .skew
        .gens()
        .iter()
        .filter(|&&(g, _)| gd.src(g) == ctx.x)
        .map(|&(g, a)| ctx.skew.monomial(g, a).expect("generator"))
        .collect();
    if !u_span.same_as(&pres.span(&direct_u)) {
        return Err(MoritaError::VerificationFails {
            part: "U = R·1_S",
            witness: "span differs from Σ_{g ∈ S_x} B_g δ_g".into(),
        });
    }
    // V = 1_S·R
    let v_gens: Vec<SkewElem> = r_gens
        .iter()
        .map(|r| e.mul(r))
        .collect::<Result<_, _>>()?;
    let v_span = pres.span(&v_gens);
    let direct_v: Vec<SkewElem> = ctx
        .skew
        .gens()
        .iter()
        .filter(|&&(g, _)| gd.tgt(g) == ctx.x)
        .map(|&(g, a)| ctx.skew.monomial(g, a).expect("generator"))
        .collect();
    if !v_span.same_as(&pres.span(&direct_v)) {
        return Err(MoritaError::VerificationFails {
            part: "V = 1_S·R",
            witness: "span differs from Σ_{g ∈ T_x} B_g δ_g".into(),
        });
    }

    // 1_S·R·1_S = S (embedded)
    let s_embedded: Vec<SkewElem> = ctx
        .group_skew
        .gens()
        .iter()
        .map(|&(h, a)| {
            let s = ctx.group_skew.monomial(h, a).expect("generator");
            embed_isotropy(ctx, &s).expect("embedding")
        })
        .collect();
    let srs: Vec<SkewElem> = r_gens
        .iter()
        .map(|r| e.mul(r).and_then(|t| t.mul(&e)))
        .collect::<Result<_, _>>()?;
    let nu_surjective = pres.span(&srs).same_as(&pres.span(&s_embedded));
    if !nu_surjective {
        return Err(MoritaError::VerificationFails {
            part: "1_S·R·1_S = S",
            witness: "span mismatch".into(),
        });
    }
    // R·1_S·R = R: products of U and V generators span everything
    let mut uv = Vec::new();
    for u in &u_gens {
        for v in &v_gens {
            uv.push(u.mul(v)?);
        }
    }
    let mu_surjective = pres.span(&uv).same_as(&pres.full_span());
    if !mu_surjective {
        return Err(MoritaError::VerificationFails {
            part: "R·1_S·R = R",
            witness: "span mismatch".into(),
        });
    }

    // associativity conditions on generator triples:
    // u·(v·u') = (u·v)·u' and v·(u·v') = (v·u)·v'
    for u in direct_u.iter() {
        for v in direct_v.iter() {
            for u2 in direct_u.iter() {
                let lhs = u.mul(&v.mul(u2)?)?;
                let rhs = u.mul(v)?.mul(u2)?;
                if lhs != rhs {
                    return Err(MoritaError::VerificationFails {
                        part: "pairing associativity",
                        witness: "u·ν(v⊗u') ≠ μ(u⊗v)·u'".into(),
                    });
                }
            }
            for v2 in direct_v.iter() {
                let lhs = v.mul(&u.mul(v2)?)?;
                let rhs = v.mul(u)?.mul(v2)?;
                if lhs != rhs {
                    return Err(MoritaError::VerificationFails {
                        part: "pairing associativity",
                        witness: "v·μ(u⊗v') ≠ ν(v⊗u)·v'".into(),
                    });
                }
            }
        }
    }

    Ok(SkewMoritaContext {
        u_gens: direct_u,
        v_gens: direct_v,
        mu_surjective,
        nu_surjective,
    })
}

// ----- the trace context and its pairings -------------------------------------

/// `Γ(a, b) = t_β(ab)`.
pub fn gamma_value(ctx: &LiftedContext, a: El, b: El) -> El {
    ctx.trace_full(ctx.ring().mul(a, b))
}

/// `Γ'(a, b) = Σ_g a·β_g(b·1_{g⁻¹}) δ_g`.
pub fn gamma_prime_value(ctx: &LiftedContext, a: El, b: El) -> Result<SkewElem, SkewError> {
    let r = ctx.ring();
    let mut out = ctx.skew.zero_elem();
    for g in ctx.groupoid().morphisms() {
        let coeff = r.mul(a, ctx.twist(g, b));
        out = out.add(&ctx.skew.monomial(g, coeff)?)?;
    }
    Ok(out)
}

/// Group-part `Γ_x(a, b) = t_{β(x)}(ab)` on `B_x`.
pub fn group_gamma_value(ctx: &LiftedContext, a: El, b: El) -> El {
    ctx.trace_group(ctx.ring().mul(a, b))
}

/// Group-part `Γ'_x(a, b) ∈ S`.
pub fn group_gamma_prime_value(
    ctx: &LiftedContext,
    a: El,
    b: El,
) -> Result<SkewElem, SkewError> {
    let r = ctx.ring();
    let mut out = ctx.group_skew.zero_elem();
    for h in ctx.group_skew.groupoid().morphisms() {
        let parent = ctx.iso.to_parent[h.0 as usize];
        let coeff = r.mul(a, ctx.twist(parent, b));
        out = out.add(&ctx.group_skew.monomial(h, coeff)?)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaSurjectivity {
    pub gamma: bool,
    pub gamma_prime: bool,
    pub group_gamma: bool,
    pub group_gamma_prime: bool,
}

/// Image spans of the four pairings, with balancedness spot-verified on
/// generators and the level equivalences asserted.
pub fn gamma_surjectivity(ctx: &LiftedContext) -> Result<GammaSurjectivity, MoritaError> {
    let r = ctx.ring();
    let inv = invariants::invariant_subring(ctx)?;
    let basis = r.basis();

    // balancedness of Γ over the skew ring: Γ(b·(aδ_g), c) = Γ(b, (aδ_g)·c)
    for &(g, a) in ctx.skew.gens() {
        for &b in &basis {
            for &c in &basis {
                let left = gamma_value(
                    ctx,
                    // right action: b·(aδ_g) = β_{g⁻¹}(b·a)
                    ctx.action
                        .map(ctx.groupoid().inv(g))
                        .apply2(r.mul(r.mul(b, a), ctx.unit(g))),
                    c,
                );
                let right = gamma_value(ctx, b, r.mul(a, ctx.twist(g, c)));
                if left != right {
                    return Err(MoritaError::VerificationFails {
                        part: "Γ balancedness",
                        witness: format!("({}, {}, δ_{})", r.name(b), r.name(c), g.0),
                    });
                }
            }
        }
    }
    // Γ lands in the invariants
    for &b in &basis {
        for &c in &basis {
            if !inv.subgroup.contains(&r.coords_i128(gamma_value(ctx, b, c))) {
                return Err(MoritaError::VerificationFails {
                    part: "Γ codomain",
                    witness: format!("Γ({}, {})", r.name(b), r.name(c)),
                });
            }
        }
    }
    // Γ' balanced over the invariants: Γ'(a·e, b) = Γ'(a, e·b)
    for &e in &inv.basis {
        for &b in &basis {
            for &c in &basis {
                let left = gamma_prime_value(ctx, r.mul(b, e), c)?;
                let right = gamma_prime_value(ctx, b, r.mul(e, c))?;
                if left != right {
                    return Err(MoritaError::VerificationFails {
                        part: "Γ' balancedness",
                        witness: format!("({}, {}, {})", r.name(b), r.name(c), r.name(e)),
                    });
                }
            }
        }
    }

    // image spans on generator pairs
    let mut gamma_imgs = Vec::new();
    let mut gp_imgs = Vec::new();
    for &b in &basis {
        for &c in &basis {
            gamma_imgs.push(gamma_value(ctx, b, c));
            gp_imgs.push(gamma_prime_value(ctx, b, c)?);
        }
    }
    let gamma = r.span(&gamma_imgs).same_as(&inv.subgroup);
    let pres = SkewPresentation::new(ctx.skew.clone());
    let gamma_prime = pres.span(&gp_imgs).same_as(&pres.full_span());

    let ginv_span = r.span(&invariants::group_invariants(ctx));
    let bx = ctx.base_ideal().basis().to_vec();
    let mut g_imgs = Vec::new();
    let mut gp2_imgs = Vec::new();
    for &b in &bx {
        for &c in &bx {
            g_imgs.push(group_gamma_value(ctx, b, c));
            gp2_imgs.push(group_gamma_prime_value(ctx, b, c)?);
        }
    }
    let group_gamma = r.span(&g_imgs).same_as(&ginv_span);
    let gpres = SkewPresentation::new(ctx.group_skew.clone());
    let group_gamma_prime = gpres.span(&gp2_imgs).same_as(&gpres.full_span());

    // level equivalences
    if gamma != group_gamma {
        return Err(MoritaError::InconsistentEquivalence(format!(
            "Γ onto = {gamma} but Γ_x onto = {group_gamma}"
        )));
    }
    if gamma_prime != group_gamma_prime {
        return Err(MoritaError::InconsistentEquivalence(format!(
            "Γ' onto = {gamma_prime} but Γ'_x onto = {group_gamma_prime}"
        )));
    }
    // Γ onto ⟺ trace onto, since A·A = A for unital A
    let surj = invariants::trace_surjectivity(ctx)?;
    if gamma != surj.full {
        return Err(MoritaError::InconsistentEquivalence(format!(
            "Γ onto = {gamma} but t_β onto = {}",
            surj.full
        )));
    }
    Ok(GammaSurjectivity {
        gamma,
        gamma_prime,
        group_gamma,
        group_gamma_prime,
    })
}

// ----- Galois theory -----------------------------------------------------------

/// Candidate Galois coordinates `(a_i, b_i)`.
#[derive(Debug, Clone)]
pub struct GaloisCoordinates {
    pub pairs: Vec<(El, El)>,
}

/// `Σ_i a_i·β_g(b_i·1_{g⁻¹}) = 1_g` on identities and `0` elsewhere.
pub fn verify_galois(ctx: &LiftedContext, coords: &GaloisCoordinates) -> bool {
    let r = ctx.ring();
    ctx.groupoid().morphisms().all(|g| {
        let sum = r.sum(
            coords
                .pairs
                .iter()
                .map(|&(a, b)| r.mul(a, ctx.twist(g, b))),
        );
        let want = if ctx.groupoid().is_object(g) {
            ctx.unit(g)
        } else {
            r.zero()
        };
        sum == want
    })
}

/// Group-level Galois identity over `B_x`.
pub fn verify_group_galois(ctx: &LiftedContext, coords: &GaloisCoordinates) -> bool {
    let r = ctx.ring();
    ctx.isotropy_members().into_iter().all(|h| {
        let sum = r.sum(
            coords
                .pairs
                .iter()
                .map(|&(a, b)| r.mul(a, ctx.twist(h, b))),
        );
        let want = if h == ctx.x { ctx.unit(ctx.x) } else { r.zero() };
        sum == want
    })
}

/// Searches for coordinates with the `b_i` drawn from multisets of
/// additive generators of `A` (sizes `1..=r_max`); for each candidate
/// the identity is linear in the `a_i` and solved exactly. A `None` means
/// no generator-supported solution of rank ≤ r_max exists.
pub fn search_galois(
    ctx: &LiftedContext,
    r_max: usize,
    candidate_cap: u128,
) -> Result<Option<GaloisCoordinates>, MoritaError> {
    let r = ctx.ring();
    let basis = r.basis();
    let k = basis.len();
    let morphs: Vec<Morph> = ctx.groupoid().morphisms().collect();
    // ambient: one copy of the ring presentation per morphism
    let mut ambient = Vec::new();
    for _ in &morphs {
        ambient.extend(r.moduli());
    }
    let target: Vec<i128> = {
        let mut v = Vec::with_capacity(ambient.len());
        for &g in &morphs {
            let want = if ctx.groupoid().is_object(g) {
                ctx.unit(g)
            } else {
                r.zero()
            };
            v.extend(r.coords_i128(want));
        }
        v
    };

    // count candidates first
    let mut count: u128 = 0;
    for size in 1..=r_max {
        count = count.saturating_add(multiset_count(k as u128, size as u128));
    }
    if count > candidate_cap {
        return Err(MoritaError::SearchSpaceExceeded {
            count,
            cap: candidate_cap,
        });
    }

    for size in 1..=r_max {
        let mut tuple = vec![0usize; size];
        loop {
            let bs: Vec<El> = tuple.iter().map(|&i| basis[i]).collect();
            // unknowns: per b_i, coordinates of a_i over the ring basis
            let mut gens = Vec::with_capacity(size * k);
            for &b in &bs {
                for &u in &basis {
                    let mut col = Vec::with_capacity(target.len());
                    for &g in &morphs {
                        col.extend(r.coords_i128(r.mul(u, ctx.twist(g, b))));
                    }
                    gens.push(col);
                }
            }
            if let Some(c) = abelian::solve_in_span(&ambient, &gens, &target) {
                let mut pairs = Vec::with_capacity(size);
                for (i, &b) in bs.iter().enumerate() {
                    let mut a = r.zero();
                    for (t, &u) in basis.iter().enumerate() {
                        a = r.add(a, r.int_mul(c[i * k + t], u));
                    }
                    pairs.push((a, b));
                }
                let coords = GaloisCoordinates { pairs };
                if verify_galois(ctx, &coords) {
                    return Ok(Some(coords));
                }
                return Err(MoritaError::InconsistentEquivalence(
                    "linear solution failed direct Galois verification".into(),
                ));
            }
            if !next_multiset(&mut tuple, k) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances a nondecreasing index tuple to the next multiset; false when
/// exhausted.
fn next_multiset(tuple: &mut [usize], k: usize) -> bool {
    let mut i = tuple.len();
    while i > 0 {
        i -= 1;
        if tuple[i] + 1 < k {
            tuple[i] += 1;
            let v = tuple[i];
            for t in tuple.iter_mut().skip(i + 1) {
                *t = v;
            }
            return true;
        }
    }
    false
}

fn multiset_count(k: u128, r: u128) -> u128 {
    // C(k + r - 1, r)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        num = num.saturating_mul(k + r - 1 - i);
        den = den.saturating_mul(i + 1);
    }
    num / den
}

// ----- strictness --------------------------------------------------------------

/// The four equivalent strictness conditions, evaluated independently
/// and asserted to agree.
#[derive(Debug, Clone, Serialize)]
pub struct StrictnessReport {
    pub galois: bool,
    pub trace_onto: bool,
    pub group_galois: bool,
    pub group_trace_onto: bool,
    pub strict: bool,
    /// the finitely-generated-projective hypothesis is recorded, not
    /// verified; on bundled instances it holds by construction
    pub fgp_assumed: bool,
    pub equivalences_consistent: bool,
}

pub fn strictness_report(
    ctx: &LiftedContext,
    fgp_assumed: bool,
) -> Result<StrictnessReport, MoritaError> {
    let gs = gamma_surjectivity(ctx)?;
    let ts = invariants::trace_surjectivity(ctx)?;
    // Galois ⟺ Γ' surjective (its image is a two-sided ideal, so it is
    // everything exactly when it reaches the identity)
    let galois = gs.gamma_prime;
    let group_galois = gs.group_gamma_prime;
    let conditions = [
        galois && ts.full,
        gs.gamma && gs.gamma_prime,
        gs.group_gamma && gs.group_gamma_prime,
        group_galois && ts.group_part,
    ];
    if conditions.iter().any(|&c| c != conditions[0]) {
        return Err(MoritaError::InconsistentEquivalence(format!(
            "strictness conditions diverge: {conditions:?}"
        )));
    }
    Ok(StrictnessReport {
        galois,
        trace_onto: ts.full,
        group_galois,
        group_trace_onto: ts.group_part,
        strict: conditions[0],
        fgp_assumed,
        equivalences_consistent: true,
    })
}

// ----- separability -------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SeparabilityReport {
    /// central element with `t_z(a) = 1_z` for every object, if any
    pub witness: Option<String>,
    pub group_witness: Option<String>,
    pub separable: bool,
}

/// Solves `t_z(a) = 1_z` over `C(A)` and `t_{β(x)}(b) = 1_x` over
/// `C(B_x)`, asserts the two existence answers agree, and cross-verifies
/// transported witnesses.
pub fn separability_element(ctx: &LiftedContext) -> Result<SeparabilityReport, MoritaError> {
    let r = ctx.ring();
    let gd = ctx.groupoid();
    let objs: Vec<Morph> = gd.objects().to_vec();

    // groupoid level: solve over the center of A
    let center: Vec<El> = r.center();
    let center_sub = crate::ideal::Ideal::subgroup_from_elements(r.clone(), &center)
        .expect("the center is an additive subgroup");
    let mut ambient = Vec::new();
    for _ in &objs {
        ambient.extend(r.moduli());
    }
    let target: Vec<i128> = {
        let mut v = Vec::new();
        for &z in &objs {
            v.extend(r.coords_i128(ctx.unit(z)));
        }
        v
    };
    let gens: Vec<Vec<i128>> = center_sub
        .basis()
        .iter()
        .map(|&c| {
            let mut col = Vec::new();
            for &z in &objs {
                col.extend(r.coords_i128(ctx.trace_to(z, c)));
            }
            col
        })
        .collect();
    let witness = abelian::solve_in_span(&ambient, &gens, &target).map(|c| {
        let mut a = r.zero();
        for (t, &g) in center_sub.basis().iter().enumerate() {
            a = r.add(a, r.int_mul(c[t], g));
        }
        a
    });
    if let Some(a) = witness {
        // direct substitution
        for &z in &objs {
            if ctx.trace_to(z, a) != ctx.unit(z) {
                return Err(MoritaError::VerificationFails {
                    part: "separability witness",
                    witness: format!("t at `{}` misses the unit", gd.name(z)),
                });
            }
        }
        if !r.is_central(a) {
            return Err(MoritaError::VerificationFails {
                part: "separability witness",
                witness: "witness is not central".into(),
            });
        }
    }

    // group level: solve over the center of B_x
    let bx = ctx.base_ideal();
    let bx_center: Vec<El> = bx
        .members()
        .iter()
        .copied()
        .filter(|&c| bx.basis().iter().all(|&b| r.mul(c, b) == r.mul(b, c)))
        .collect();
    let bx_center_sub = crate::ideal::Ideal::subgroup_from_elements(r.clone(), &bx_center)
        .expect("the center of B_x is an additive subgroup");
    let g_target = r.coords_i128(ctx.unit(ctx.x));
    let g_gens: Vec<Vec<i128>> = bx_center_sub
        .basis()
        .iter()
        .map(|&c| r.coords_i128(ctx.trace_group(c)))
        .collect();
    let group_witness = abelian::solve_in_span(&r.moduli(), &g_gens, &g_target).map(|c| {
        let mut b = r.zero();
        for (t, &g) in bx_center_sub.basis().iter().enumerate() {
            b = r.add(b, r.int_mul(c[t], g));
        }
        b
    });
    if let Some(b) = group_witness {
        if ctx.trace_group(b) != ctx.unit(ctx.x) {
            return Err(MoritaError::VerificationFails {
                part: "group separability witness",
                witness: "t_{β(x)} misses 1_x".into(),
            });
        }
    }

    // the two existence answers must agree
    if witness.is_some() != group_witness.is_some() {
        return Err(MoritaError::InconsistentEquivalence(format!(
            "separability split: groupoid = {}, group = {}",
            witness.is_some(),
            group_witness.is_some()
        )));
    }
    // witness transport both ways
    if let Some(a) = witness {
        // a'_z = γ_{τ_z}⁻¹(a·1_z); b = Σ_z a'_z solves the group system
        let b = r.sum(objs.iter().map(|&z| {
            ctx.datum
                .tau_map(z)
                .inverse()
                .apply2(r.mul(a, ctx.unit(z)))
        }));
        if ctx.trace_group(b) != ctx.unit(ctx.x) {
            return Err(MoritaError::InconsistentEquivalence(
                "transported groupoid witness fails the group system".into(),
            ));
        }
    }
    if let Some(b) = group_witness {
        // b itself solves the groupoid system
        for &z in &objs {
            if ctx.trace_to(z, b) != ctx.unit(z) {
                return Err(MoritaError::InconsistentEquivalence(
                    "group witness fails the groupoid system".into(),
                ));
            }
        }
    }

    Ok(SeparabilityReport {
        witness: witness.map(|a| r.name(a).to_string()),
        group_witness: group_witness.map(|b| r.name(b).to_string()),
        separable: witness.is_some(),
    })
}

// ----- Frobenius ---------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusReport {
    pub tensor_size: String,
    pub generators_checked: usize,
    pub verified: bool,
}

/// Verifies the Frobenius witness for a skew ring over its base:
/// `u = Σ_g 1_g δ_g ⊗ 1_{g⁻¹} δ_{g⁻¹}` is central in the tensor square
/// over the embedded base ring, and the counit `ε(a_g δ_g) = δ_{g,G₀} a_g`
/// splits it to the identity on both sides.
pub fn frobenius_witness(
    skew: &Arc<SkewRing>,
    base_gens: &[El],
    cap: usize,
) -> Result<FrobeniusReport, MoritaError> {
    let gd = skew.groupoid().clone();
    let r = skew.action().ring().clone();
    let pres = SkewPresentation::new(skew.clone());
    let embed = |a: El| -> Result<SkewElem, SkewError> {
        let mut out = skew.zero_elem();
        for &y in gd.objects() {
            let coeff = r.mul(a, skew.unit_of(y));
            out = out.add(&skew.monomial(y, coeff)?)?;
        }
        Ok(out)
    };
    // ε: sum of the object coefficients
    let eps = |s: &SkewElem| -> El {
        r.sum(
            s.terms()
                .filter(|&(g, _)| gd.is_object(g))
                .map(|(_, a)| a),
        )
    };

    // tensor square over the base
    let orders: Vec<u32> = pres.moduli().iter().map(|&m| m as u32).collect();
    let sgens: Vec<SkewElem> = skew
        .gens()
        .iter()
        .map(|&(g, a)| skew.monomial(g, a).expect("generator"))
        .collect();
    let mut m_act = Vec::with_capacity(sgens.len());
    let mut n_act = Vec::with_capacity(sgens.len());
    for s in &sgens {
        let mut row_m = Vec::with_capacity(base_gens.len());
        let mut row_n = Vec::with_capacity(base_gens.len());
        for &t in base_gens {
            let e = embed(t)?;
            row_m.push(pres.coords(&s.mul(&e)?));
            row_n.push(pres.coords(&e.mul(s)?));
        }
        m_act.push(row_m);
        n_act.push(row_n);
    }
    let tg: TensorGroup = tensor::tensor_over(
        &TensorInput {
            m_orders: orders.clone(),
            n_orders: orders,
            m_act,
            n_act,
        },
        cap,
    )?;

    // u = Σ_g 1_g δ_g ⊗ 1_{g⁻¹} δ_{g⁻¹} as raw tensor coefficients
    let raw_len = pres.moduli().len() * pres.moduli().len();
    let mut u_raw = vec![0i128; raw_len];
    let accumulate = |acc: &mut Vec<i128>, left: &SkewElem, right: &SkewElem| {
        let lc = pres.coords(left);
        let rc = pres.coords(right);
        for (i, &a) in lc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rc.iter().enumerate() {
                acc[i * rc.len() + j] += a * b;
            }
        }
    };
    let mut unit_terms = Vec::new();
    for g in gd.morphisms() {
        let left = skew.monomial(g, skew.unit_of(g))?;
        let right = skew.monomial(gd.inv(g), skew.unit_of(gd.inv(g)))?;
        accumulate(&mut u_raw, &left, &right);
        unit_terms.push((left, right));
    }
    let _u_class = tg.class(&u_raw);

    // centrality: s·u = u·s for every additive generator s
    let mut checked = 0usize;
    for s in &sgens {
        let mut left_raw = vec![0i128; raw_len];
        let mut right_raw = vec![0i128; raw_len];
        for (l, rr) in &unit_terms {
            accumulate(&mut left_raw, &s.mul(l)?, rr);
            accumulate(&mut right_raw, l, &rr.mul(s)?);
        }
        if tg.class(&left_raw) != tg.class(&right_raw) {
            return Err(MoritaError::VerificationFails {
                part: "Frobenius centrality",
                witness: format!("{s:?}"),
            });
        }
        checked += 1;
    }

    // counit identities: Σ ε(1_g δ_g)·1_{g⁻¹}δ_{g⁻¹} = 1 = Σ 1_gδ_g·ε(…)
    let one = skew.identity();
    let mut left_sum = skew.zero_elem();
    let mut right_sum = skew.zero_elem();
    for (l, rr) in &unit_terms {
        left_sum = left_sum.add(&embed(eps(l))?.mul(rr)?)?;
        right_sum = right_sum.add(&l.mul(&embed(eps(rr))?)?)?;
    }
    if left_sum != one || right_sum != one {
        return Err(MoritaError::VerificationFails {
            part: "Frobenius counit",
            witness: "ε does not split u to the identity".into(),
        });
    }
    // ε is a bimodule map over the base
    for &t in base_gens {
        let e = embed(t)?;
        for s in &sgens {
            if eps(&e.mul(s)?) != r.mul(t, eps(s)) {
                return Err(MoritaError::VerificationFails {
                    part: "ε left linearity",
                    witness: format!("{s:?}"),
                });
            }
            if eps(&s.mul(&e)?) != r.mul(eps(s), t) {
                return Err(MoritaError::VerificationFails {
                    part: "ε right linearity",
                    witness: format!("{s:?}"),
                });
            }
        }
    }

    Ok(FrobeniusReport {
        tensor_size: tg.size().to_string(),
        generators_checked: checked,
        verified: true,
    })
}

/// Frobenius verification for both extensions of a lifted context:
/// `A ⊂ A⋆_βG` and `B_x ⊂ B_x⋆_{β(x)}G(x)`.
pub fn frobenius_both(
    ctx: &LiftedContext,
    cap: usize,
) -> Result<(FrobeniusReport, FrobeniusReport), MoritaError> {
    let full = frobenius_witness(&ctx.skew, &ctx.ring().basis(), cap)?;
    let group = frobenius_witness(&ctx.group_skew, &ctx.base_ideal().basis().to_vec(), cap)?;
    Ok((full, group))
}

/// The machine-readable summary of this module's checks on an instance.
#[derive(Debug, Serialize)]
pub struct MoritaReport {
    pub galois: bool,
    pub trace_onto: bool,
    pub strict: bool,
    pub separable: bool,
    pub separability_witness: Option<String>,
    pub frobenius_verified: bool,
    pub equivalences_consistent: bool,
}

pub fn morita_report(ctx: &LiftedContext, tensor_cap: usize) -> Result<MoritaReport, MoritaError> {
    skew_skew_context(ctx)?;
    let strict = strictness_report(ctx, true)?;
    let sep = separability_element(ctx)?;
    let (frob, _group_frob) = frobenius_both(ctx, tensor_cap)?;
    Ok(MoritaReport {
        galois: strict.galois,
        trace_onto: strict.trace_onto,
        strict: strict.strict,
        separable: sep.separable,
        separability_witness: sep.witness,
        frobenius_verified: frob.verified,
        equivalences_consistent: true,
    })
}
