//! Seeded random instances and the invariant sweep over them.
//!
//! Instances are drawn from three families over the groupoid of a
//! cyclic group acting across `m` objects:
//!
//! * `Global` — the group part is a global cyclic action by a random
//!   ring automorphism whose order divides the group order, and the
//!   transversal maps are component transports twisted by random
//!   automorphisms;
//! * `RestrictedGroup` — the group part is the canonical restriction of
//!   a global action to the ideal cut out by a random central
//!   idempotent `v`: ideals `S·(v·ψᵏ(v))`, maps `ψᵏ` restricted;
//! * `RestrictedTau` — like `Global`, but the transversal maps are
//!   restricted to a random unital ideal of `I_x`, producing data that
//!   are not `τ(x)`-global.
//!
//! Every generated datum must validate, lift, and pass each applicable
//! law: the round trips, the base-change identity, the `τ(x)`-global
//! criterion, and — when the standing assumptions hold — the invariants,
//! trace, Morita, Galois, separability and Frobenius checks. On failure
//! the parameters are shrunk (fewer objects, smaller group, fewer ring
//! factors, simpler family) while the failure persists, and the minimal
//! witness is reported.

use crate::action::Datum;
use crate::groupoid::{gamma_groupoid, FiniteGroup, Morph, Transversal};
use crate::ideal::{Ideal, RingMap};
use crate::invariants::{self, LiftedContext, StandingError};
use crate::morita;
use crate::ring::{El, FiniteRing, RingStructure};
use crate::skewring::{self, SkewRing};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Global,
    RestrictedGroup,
    RestrictedTau,
}

/// Everything needed to rebuild an instance deterministically.
#[derive(Debug, Clone)]
pub struct FuzzParams {
    pub seed: u64,
    pub group_order: usize,
    pub objects: usize,
    pub factors: Vec<FactorKind>,
    pub family: Family,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Zmod(u64),
    Gf(u64, u32),
}

impl fmt::Display for FuzzParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seed={} cyclic-order={} objects={} factors={:?} family={:?}",
            self.seed, self.group_order, self.objects, self.factors, self.family
        )
    }
}

pub struct FuzzInstance {
    pub params: FuzzParams,
    pub datum: Datum,
}

/// Draws parameters for one instance.
pub fn sample_params(seed: u64) -> FuzzParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // |Γ| = group_order · objects² ≤ 12
    let shapes: &[(usize, usize)] = &[
        (1, 1),
        (1, 2),
        (1, 3),
        (2, 1),
        (2, 2),
        (3, 1),
        (3, 2),
        (4, 1),
        (6, 1),
    ];
    let &(group_order, objects) = shapes.choose(&mut rng).unwrap();
    let pool = [
        FactorKind::Zmod(2),
        FactorKind::Zmod(3),
        FactorKind::Zmod(4),
        FactorKind::Zmod(5),
        FactorKind::Gf(2, 2),
        FactorKind::Gf(3, 2),
    ];
    let mut factors = Vec::new();
    let mut size: u128 = 1;
    let want = rng.gen_range(1..=3);
    for _ in 0..want {
        let f = *pool.choose(&mut rng).unwrap();
        let fsize = match f {
            FactorKind::Zmod(n) => n as u128,
            FactorKind::Gf(p, k) => (p as u128).pow(k),
        };
        // the base ring is copied once per object; keep |A| ≤ 256
        if (size * fsize).pow(objects as u32) > 256 {
            continue;
        }
        size *= fsize;
        factors.push(f);
    }
    if factors.is_empty() {
        factors.push(FactorKind::Zmod(2));
    }
    let family = match rng.gen_range(0..3) {
        0 => Family::Global,
        1 => Family::RestrictedGroup,
        _ => Family::RestrictedTau,
    };
    FuzzParams {
        seed,
        group_order,
        objects,
        factors,
        family,
    }
}

fn build_factor(kind: FactorKind) -> Arc<FiniteRing> {
    match kind {
        FactorKind::Zmod(n) => FiniteRing::zmod(n).unwrap(),
        FactorKind::Gf(p, k) => FiniteRing::gf(p, k).unwrap(),
    }
}

/// A random automorphism of a product-of-leaf-rings: permute isomorphic
/// factors and apply Frobenius powers inside field factors. Retries
/// until the order divides `order_divides`, falling back to the
/// identity.
fn random_automorphism(
    ring: &Arc<FiniteRing>,
    order_divides: usize,
    rng: &mut ChaCha8Rng,
) -> RingMap {
    let whole = Ideal::full(ring.clone());
    let factors: Vec<Arc<FiniteRing>> = match ring.structure() {
        RingStructure::Product(fs) => fs.clone(),
        RingStructure::Gf { .. } => vec![ring.clone()],
        _ => return RingMap::identity_on(&whole),
    };
    let single = factors.len() == 1 && factors[0].len() == ring.len();
    let m = factors.len();
    let signature = |f: &Arc<FiniteRing>| -> usize { f.len() };
    let identity = RingMap::identity_on(&whole);
    for _try in 0..16 {
        let mut perm: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            let j = rng.gen_range(0..=i);
            if signature(&factors[perm[i]]) == signature(&factors[perm[j]]) {
                perm.swap(i, j);
            }
        }
        let frob: Vec<u32> = factors
            .iter()
            .map(|f| match f.structure() {
                RingStructure::Gf { k, .. } => rng.gen_range(0..*k),
                _ => 0,
            })
            .collect();
        let apply = |a: El| -> El {
            let comps = if single {
                vec![a]
            } else {
                ring.components(a)
            };
            let out: Vec<El> = (0..m)
                .map(|i| {
                    let src = perm[i];
                    let mut v = comps[src];
                    if frob[src] > 0 {
                        if let RingStructure::Gf { p, .. } = factors[src].structure() {
                            let e = (*p).pow(frob[src]);
                            v = factors[src].pow(v, e as u32).unwrap();
                        }
                    }
                    v
                })
                .collect();
            if single {
                out[0]
            } else {
                ring.from_components(&out)
            }
        };
        let Ok(map) = RingMap::from_fn(whole.clone(), whole.clone(), apply, true) else {
            continue;
        };
        // order must divide the group order
        let mut acc = map.clone();
        let mut ord = 1usize;
        while acc != identity {
            acc = map.compose(&acc);
            ord += 1;
            if ord > 64 {
                break;
            }
        }
        if ord <= 64 && order_divides % ord == 0 {
            return map;
        }
    }
    identity
}

/// Builds the datum for the drawn parameters. The ambient ring is
/// `C^m` where the carrier `C` is the base ring `S` (or `S·v` for the
/// restricted-group family), with `I_y` the component copies.
pub fn build(params: &FuzzParams) -> Result<FuzzInstance, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x9e37_79b9_7f4a_7c15);
    let group = FiniteGroup::cyclic(params.group_order);
    let gd = Arc::new(gamma_groupoid(&group, params.objects, 1).map_err(|e| e.to_string())?);
    let leafs: Vec<Arc<FiniteRing>> = params.factors.iter().map(|&k| build_factor(k)).collect();
    let s = if leafs.len() == 1 {
        match leafs[0].structure() {
            // wrap single non-product leaves so idempotent/automorphism
            // machinery sees a product shape uniformly
            RingStructure::Product(_) => leafs[0].clone(),
            _ => FiniteRing::product(leafs.clone()).map_err(|e| e.to_string())?,
        }
    } else {
        FiniteRing::product(leafs).map_err(|e| e.to_string())?
    };

    // automorphism of S of order dividing the group order
    let psi = random_automorphism(&s, params.group_order, &mut rng);

    // carrier ring: S, or S·v re-packaged as a ring
    let (carrier_ring, v_opt): (Arc<FiniteRing>, Option<El>) = match params.family {
        Family::RestrictedGroup => {
            let idems: Vec<El> = s
                .central_idempotents()
                .into_iter()
                .filter(|&e| !s.is_zero(e))
                .collect();
            let v = *idems.choose(&mut rng).unwrap();
            if Some(v) == s.one() {
                (s.clone(), Some(v))
            } else {
                let base = Ideal::unital(s.clone(), v).map_err(|e| e.to_string())?;
                (ideal_as_ring(&base), Some(v))
            }
        }
        _ => (s.clone(), None),
    };

    let objects = params.objects;
    let ring = if objects == 1 {
        carrier_ring.clone()
    } else {
        FiniteRing::product(vec![carrier_ring.clone(); objects]).map_err(|e| e.to_string())?
    };
    let comp_el = |y: usize, a: El| -> El { comp_embed(&ring, &carrier_ring, objects, y, a) };

    // object ideals: component copies
    let objs: Vec<Morph> = gd.objects().to_vec();
    let mut ideals: BTreeMap<Morph, Ideal> = BTreeMap::new();
    for (i, &y) in objs.iter().enumerate() {
        let elems: Vec<El> = carrier_ring.elements().map(|a| comp_el(i, a)).collect();
        ideals.insert(
            y,
            Ideal::from_elements(ring.clone(), &elems).map_err(|e| e.to_string())?,
        );
    }
    let x = objs[0];
    let tau = Transversal::new(&gd, x, &BTreeMap::new()).map_err(|e| e.to_string())?;

    // τ-maps: transport component 0 to component i, twisted; optionally
    // restricted to a unital subideal of I_x
    let mut tau_maps = BTreeMap::new();
    for (i, &y) in objs.iter().enumerate() {
        if y == x {
            tau_maps.insert(y, RingMap::identity_on(&ideals[&x]));
            continue;
        }
        let twist = random_automorphism(&carrier_ring, usize::MAX >> 1, &mut rng);
        let ring2 = ring.clone();
        let cr = carrier_ring.clone();
        let f = move |a: El| -> El {
            let c = comp_extract(&ring2, objects, 0, a);
            comp_embed(&ring2, &cr, objects, i, twist.apply2(c))
        };
        let map = if params.family == Family::RestrictedTau {
            let idems: Vec<El> = carrier_ring.central_idempotents();
            let w = *idems.choose(&mut rng).unwrap();
            let dom_members: Vec<El> = carrier_ring
                .elements()
                .map(|a| comp_el(0, carrier_ring.mul(a, w)))
                .collect();
            let dom = Ideal::subgroup_from_elements(ring.clone(), &dom_members)
                .map_err(|e| e.to_string())?
                .with_found_identity();
            let ran_members: Vec<El> = dom.members().iter().map(|&a| f(a)).collect();
            let ran = Ideal::subgroup_from_elements(ring.clone(), &ran_members)
                .map_err(|e| e.to_string())?
                .with_found_identity();
            RingMap::from_fn(dom, ran, f, true).map_err(|e| e.to_string())?
        } else {
            RingMap::from_fn(ideals[&x].clone(), ideals[&y].clone(), f, true)
                .map_err(|e| e.to_string())?
        };
        tau_maps.insert(y, map);
    }

    // group part on I_x: powers of ψ, possibly restricted along v
    let iso = gd.isotropy_group(x).map_err(|e| e.to_string())?;
    let mut group_ideals = BTreeMap::new();
    let mut group_maps = BTreeMap::new();
    for &h in iso.members() {
        let name = gd.name(h);
        let k: usize = name[1..]
            .split(',')
            .next()
            .and_then(|t| t.parse().ok())
            .expect("gamma groupoid names");
        let psi_k = |a: El, times: usize| -> El {
            let mut v = a;
            for _ in 0..times {
                v = psi.apply2(v);
            }
            v
        };
        match (params.family, v_opt) {
            (Family::RestrictedGroup, Some(v)) => {
                // in S: ideals S·(v·ψᵏ(v)), maps ψᵏ; transported into the
                // carrier by element name and into A by component embedding
                let k_inv = (params.group_order - k) % params.group_order;
                let e_ran = s.mul(v, psi_k(v, k));
                let e_dom = s.mul(v, psi_k(v, k_inv));
                let to_ring = |e: El| -> Vec<El> {
                    s.elements()
                        .map(|a| s.mul(s.mul(a, v), e))
                        .map(|a| {
                            let c = carrier_ring.by_name(s.name(a)).expect("carrier member");
                            comp_el(0, c)
                        })
                        .collect()
                };
                let dom = Ideal::subgroup_from_elements(ring.clone(), &to_ring(e_dom))
                    .map_err(|e| e.to_string())?
                    .with_found_identity();
                let ran = Ideal::subgroup_from_elements(ring.clone(), &to_ring(e_ran))
                    .map_err(|e| e.to_string())?
                    .with_found_identity();
                let ring2 = ring.clone();
                let cr = carrier_ring.clone();
                let sref = s.clone();
                let kk = k;
                let psi2 = psi.clone();
                let f = move |a: El| -> El {
                    let c = comp_extract(&ring2, objects, 0, a);
                    let mut vv = sref.by_name(cr.name(c)).expect("carrier name in S");
                    for _ in 0..kk {
                        vv = psi2.apply2(vv);
                    }
                    let back = cr.by_name(sref.name(vv)).expect("image stays in carrier");
                    comp_embed(&ring2, &cr, objects, 0, back)
                };
                group_ideals.insert(h, ran.clone());
                group_maps.insert(
                    h,
                    RingMap::from_fn(dom, ran, f, true).map_err(|e| e.to_string())?,
                );
            }
            _ => {
                let ring2 = ring.clone();
                let cr = carrier_ring.clone();
                let kk = k;
                let psi2 = psi.clone();
                let f = move |a: El| -> El {
                    let c = comp_extract(&ring2, objects, 0, a);
                    let mut vv = c;
                    for _ in 0..kk {
                        vv = psi2.apply2(vv);
                    }
                    comp_embed(&ring2, &cr, objects, 0, vv)
                };
                group_ideals.insert(h, ideals[&x].clone());
                group_maps.insert(
                    h,
                    RingMap::from_fn(ideals[&x].clone(), ideals[&x].clone(), f, true)
                        .map_err(|e| e.to_string())?,
                );
            }
        }
    }

    let datum = Datum::new(gd, ring, tau, ideals, tau_maps, group_ideals, group_maps)
        .map_err(|e| format!("generated datum failed validation: {e}"))?;
    Ok(FuzzInstance {
        params: params.clone(),
        datum,
    })
}

fn comp_embed(
    ring: &Arc<FiniteRing>,
    carrier: &Arc<FiniteRing>,
    objects: usize,
    y: usize,
    a: El,
) -> El {
    if objects == 1 {
        a
    } else {
        let mut comps: Vec<El> = vec![carrier.zero(); objects];
        comps[y] = a;
        ring.from_components(&comps)
    }
}

fn comp_extract(ring: &Arc<FiniteRing>, objects: usize, y: usize, a: El) -> El {
    if objects == 1 {
        a
    } else {
        ring.components(a)[y]
    }
}

/// Rebuilds a unital ideal as a standalone ring, element names inherited.
fn ideal_as_ring(ideal: &Ideal) -> Arc<FiniteRing> {
    let parent = ideal.ring();
    let names: Vec<String> = ideal
        .members()
        .iter()
        .map(|&a| parent.name(a).to_string())
        .collect();
    let table = |f: &dyn Fn(El, El) -> El| -> Vec<Vec<String>> {
        ideal
            .members()
            .iter()
            .map(|&a| {
                ideal
                    .members()
                    .iter()
                    .map(|&b| parent.name(f(a, b)).to_string())
                    .collect()
            })
            .collect()
    };
    let add = table(&|a, b| parent.add(a, b));
    let mul = table(&|a, b| parent.mul(a, b));
    FiniteRing::from_tables(names, &add, &mul, 4096).expect("unital ideal is a ring")
}

/// One failed law with its witness.
#[derive(Debug, Clone)]
pub struct FuzzFailure {
    pub law: &'static str,
    pub witness: String,
}

/// What was exercised for an instance.
#[derive(Debug, Default, Clone, Copy)]
pub struct Coverage {
    pub standing: bool,
    pub tau_global: bool,
    pub frobenius: bool,
}

/// Runs every applicable law on one instance.
pub fn check_instance(inst: &FuzzInstance, tensor_cap: usize) -> Result<Coverage, FuzzFailure> {
    let fail = |law: &'static str, witness: String| FuzzFailure { law, witness };
    let datum = &inst.datum;
    let action = datum
        .lift()
        .map_err(|e| fail("lift validates", e.to_string()))?;

    // extract(lift(γ)) = γ
    let back = Datum::extract(&action, datum.tau())
        .map_err(|e| fail("extract after lift", e.to_string()))?;
    if !back.eq_datum(datum) {
        return Err(fail("extract∘lift identity", inst.params.to_string()));
    }
    // lift(extract(α)) ≤ α with the equality criterion
    let relift = back.lift().map_err(|e| fail("relift", e.to_string()))?;
    if !relift.leq(&action).unwrap() {
        return Err(fail("lift ≤ original", inst.params.to_string()));
    }
    let eq = relift.eq_action(&action).unwrap();
    let cond = crate::action::lift_extract_equality_condition(&action, datum.tau());
    if eq != cond {
        return Err(fail(
            "lift equality ⟺ containment condition",
            inst.params.to_string(),
        ));
    }
    // base change round trip through a matched transversal
    let gd = datum.groupoid().clone();
    let objs = gd.objects().to_vec();
    if objs.len() > 1 {
        let z = objs[1];
        let lam = Transversal::new(
            &gd,
            z,
            &BTreeMap::from([(datum.base(), gd.inv(datum.tau().tau(z)))]),
        )
        .map_err(|e| fail("matched transversal", e.to_string()))?;
        let there = datum
            .rebase(&lam)
            .map_err(|e| fail("rebase validates", e.to_string()))?;
        let back2 = there
            .rebase(datum.tau())
            .map_err(|e| fail("rebase back validates", e.to_string()))?;
        if !back2.eq_datum(datum) {
            return Err(fail("rebase round trip", inst.params.to_string()));
        }
    }
    // τ(x)-global iff the transversal maps are full
    let datum_full = objs.iter().all(|&y| {
        datum
            .tau_map(y)
            .domain()
            .same_set(datum.object_ideal(datum.base()))
            && datum.tau_map(y).codomain().same_set(datum.object_ideal(y))
    });
    if datum_full != action.is_tau_global(datum.tau()) {
        return Err(fail("τ(x)-global criterion", inst.params.to_string()));
    }
    // globalizability criterion agreement
    if let Ok(rep) = crate::globalization::is_globalizable(&action) {
        if rep.is_globalizable() != crate::globalization::lifted_globalizable_check(datum) {
            return Err(fail(
                "globalizability criteria agree",
                inst.params.to_string(),
            ));
        }
    }

    let mut cov = Coverage {
        tau_global: datum_full,
        ..Default::default()
    };

    // the τ(x)-global unital path: skew ring laws, θ, φ
    if datum_full {
        if let Ok(skew) = SkewRing::new(action.clone()) {
            skew.verify_ring_laws()
                .map_err(|e| fail("skew ring laws", e.to_string()))?;
            skewring::phi_iso(&skew, datum.tau())
                .map_err(|e| fail("iterated-ring isomorphism", e.to_string()))?;
        }
    }

    // standing assumptions: the full theory
    match LiftedContext::new(datum.clone()) {
        Ok(ctx) => {
            cov.standing = true;
            invariants::check_invariance_criterion(&ctx)
                .map_err(|e| fail("invariance criterion", e.to_string()))?;
            invariants::check_trace_transport(&ctx)
                .map_err(|e| fail("trace transport", e.to_string()))?;
            invariants::check_trace_sum(&ctx)
                .map_err(|e| fail("trace sums", e.to_string()))?;
            invariants::trace_surjectivity(&ctx)
                .map_err(|e| fail("trace surjectivity equivalence", e.to_string()))?;
            morita::skew_skew_context(&ctx)
                .map_err(|e| fail("skew Morita context", e.to_string()))?;
            morita::strictness_report(&ctx, true)
                .map_err(|e| fail("strictness equivalences", e.to_string()))?;
            morita::separability_element(&ctx)
                .map_err(|e| fail("separability equivalence", e.to_string()))?;
            // Frobenius under the tensor cap
            let dim: usize = morita::SkewPresentation::new(ctx.skew.clone())
                .moduli()
                .len();
            if dim * dim <= tensor_cap {
                cov.frobenius = true;
                morita::frobenius_both(&ctx, tensor_cap)
                    .map_err(|e| fail("Frobenius witnesses", e.to_string()))?;
            }
        }
        Err(StandingError::Internal(e)) => {
            return Err(fail("standing bookkeeping", e));
        }
        Err(_) => {}
    }
    Ok(cov)
}

/// Shrinks failing parameters while the law keeps failing.
pub fn shrink(params: &FuzzParams, law: &'static str, tensor_cap: usize) -> FuzzParams {
    let still_fails = |p: &FuzzParams| -> bool {
        match build(p) {
            Ok(inst) => matches!(check_instance(&inst, tensor_cap), Err(f) if f.law == law),
            Err(_) => false,
        }
    };
    let mut current = params.clone();
    loop {
        let mut candidates = Vec::new();
        if current.objects > 1 {
            let mut c = current.clone();
            c.objects -= 1;
            candidates.push(c);
        }
        if current.group_order > 1 {
            let mut c = current.clone();
            c.group_order = if current.group_order % 2 == 0 {
                current.group_order / 2
            } else {
                1
            };
            candidates.push(c);
        }
        if current.factors.len() > 1 {
            let mut c = current.clone();
            c.factors.pop();
            candidates.push(c);
        }
        if current.family != Family::Global {
            let mut c = current.clone();
            c.family = Family::Global;
            candidates.push(c);
        }
        match candidates.into_iter().find(|c| still_fails(c)) {
            Some(smaller) => current = smaller,
            None => return current,
        }
    }
}

/// Summary of a tier run.
#[derive(Debug, Default)]
pub struct TierReport {
    pub instances: usize,
    pub standing: usize,
    pub tau_global: usize,
    pub frobenius: usize,
}

/// Runs `count` seeded instances; panics with a shrunk witness on the
/// first failure.
pub fn run_tier(base_seed: u64, count: usize, tensor_cap: usize) -> TierReport {
    let mut report = TierReport::default();
    for i in 0..count {
        let seed = base_seed.wrapping_add(i as u64);
        let params = sample_params(seed);
        let inst = match build(&params) {
            Ok(inst) => inst,
            Err(e) => panic!("instance {params} failed to build: {e}"),
        };
        match check_instance(&inst, tensor_cap) {
            Ok(cov) => {
                report.instances += 1;
                report.standing += usize::from(cov.standing);
                report.tau_global += usize::from(cov.tau_global);
                report.frobenius += usize::from(cov.frobenius);
            }
            Err(failure) => {
                let minimal = shrink(&params, failure.law, tensor_cap);
                panic!(
                    "law `{}` failed: {}\nminimal witness: {}",
                    failure.law, failure.witness, minimal
                );
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_sampled_instance_builds_and_checks() {
        let params = sample_params(7);
        let inst = build(&params).unwrap();
        check_instance(&inst, 1024).unwrap();
    }

    #[test]
    fn restricted_group_family_builds() {
        let params = FuzzParams {
            seed: 11,
            group_order: 2,
            objects: 2,
            factors: vec![FactorKind::Zmod(3), FactorKind::Zmod(3)],
            family: Family::RestrictedGroup,
        };
        let inst = build(&params).unwrap();
        check_instance(&inst, 1024).unwrap();
    }

    #[test]
    fn restricted_tau_family_exercises_partiality() {
        let params = FuzzParams {
            seed: 13,
            group_order: 2,
            objects: 2,
            factors: vec![FactorKind::Gf(3, 2)],
            family: Family::RestrictedTau,
        };
        let inst = build(&params).unwrap();
        check_instance(&inst, 1024).unwrap();
    }

    #[test]
    fn small_tier_passes() {
        let rep = run_tier(42, 10, 1024);
        assert_eq!(rep.instances, 10);
    }
}
