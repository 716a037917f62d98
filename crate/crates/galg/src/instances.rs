//! Bundled desk-scale instances.
//!
//! Complex scalars with conjugation are replaced throughout by GF(9)
//! with the Frobenius map x ↦ x³, the unique automorphism of order two
//! fixing the prime field; all arithmetic stays exact.
//!
//! Instances are built once per process and shared: the four-component
//! GF(9) ring has 6561 elements and two dense 6561² tables, which is
//! cheap to keep but not to rebuild per test.

use crate::action::{ActionError, Datum, PartialAction};
use crate::groupoid::{
    gamma_groupoid, pair_groupoid, FiniteGroup, FiniteGroupoid, GroupoidSpec, Transversal,
};
use crate::ideal::{Ideal, RingMap};
use crate::ring::{El, FiniteRing};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// A bundled instance: a datum, its lift, and the transversal they share.
pub struct Instance {
    pub name: &'static str,
    pub groupoid: Arc<FiniteGroupoid>,
    pub ring: Arc<FiniteRing>,
    pub tau: Transversal,
    pub datum: Datum,
    pub action: PartialAction,
}

/// The connected two-object groupoid with isotropy ℤ₂: loops `g` at `x`
/// and `h` at `y`, arrows `l, m : x → y` with `l·g = m = h·l`.
pub fn two_object_groupoid_spec() -> GroupoidSpec {
    let morphisms: Vec<String> = ["x", "y", "g", "h", "l", "m", "l'", "m'"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let src: BTreeMap<String, String> = [
        ("x", "x"),
        ("y", "y"),
        ("g", "x"),
        ("h", "y"),
        ("l", "x"),
        ("m", "x"),
        ("l'", "y"),
        ("m'", "y"),
    ]
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .into();
    let tgt: BTreeMap<String, String> = [
        ("x", "x"),
        ("y", "y"),
        ("g", "x"),
        ("h", "y"),
        ("l", "y"),
        ("m", "y"),
        ("l'", "x"),
        ("m'", "x"),
    ]
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .into();
    let inv: BTreeMap<String, String> = [
        ("x", "x"),
        ("y", "y"),
        ("g", "g"),
        ("h", "h"),
        ("l", "l'"),
        ("m", "m'"),
        ("l'", "l"),
        ("m'", "m"),
    ]
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .into();
    let compose: Vec<[String; 3]> = [
        // compositions landing at x
        ("x", "x", "x"),
        ("x", "g", "g"),
        ("g", "x", "g"),
        ("g", "g", "x"),
        ("x", "l'", "l'"),
        ("x", "m'", "m'"),
        ("g", "l'", "m'"),
        ("g", "m'", "l'"),
        // compositions landing at y
        ("y", "y", "y"),
        ("y", "h", "h"),
        ("h", "y", "h"),
        ("h", "h", "y"),
        ("y", "l", "l"),
        ("y", "m", "m"),
        ("h", "l", "m"),
        ("h", "m", "l"),
        // arrows out of x
        ("l", "x", "l"),
        ("l", "g", "m"),
        ("m", "x", "m"),
        ("m", "g", "l"),
        ("l", "l'", "y"),
        ("l", "m'", "h"),
        ("m", "l'", "h"),
        ("m", "m'", "y"),
        // arrows out of y
        ("l'", "y", "l'"),
        ("l'", "h", "m'"),
        ("m'", "y", "m'"),
        ("m'", "h", "l'"),
        ("l'", "l", "x"),
        ("l'", "m", "g"),
        ("m'", "l", "g"),
        ("m'", "m", "x"),
    ]
    .iter()
    .map(|(a, b, c)| [a.to_string(), b.to_string(), c.to_string()])
    .collect();
    GroupoidSpec {
        morphisms,
        objects: vec!["x".into(), "y".into()],
        src,
        tgt,
        inv,
        compose,
    }
}

/// Componentwise x ↦ x³; on products of GF(9) this is the Frobenius in
/// each coordinate.
pub fn frobenius(r: &Arc<FiniteRing>) -> impl Fn(El) -> El + '_ {
    move |a| r.mul(r.mul(a, a), a)
}

fn gf9() -> Arc<FiniteRing> {
    static R: OnceLock<Arc<FiniteRing>> = OnceLock::new();
    R.get_or_init(|| FiniteRing::gf(3, 2).expect("GF(9)")).clone()
}

fn gf9_power(n: usize) -> Arc<FiniteRing> {
    FiniteRing::product_capped(vec![gf9(); n], 8192).expect("GF(9)^n")
}

/// Moves component `from` to component `to` of a product-ring element,
/// zeroing everything else, with `twist` applied on the way.
fn move_component(
    r: &Arc<FiniteRing>,
    a: El,
    from: usize,
    to: usize,
    twist: impl Fn(&Arc<FiniteRing>, El) -> El,
) -> El {
    let comps = r.components(a);
    let factor_count = comps.len();
    let mut out: Vec<El> = (0..factor_count)
        .map(|i| {
            // factor zero element: components of the ring zero
            r.components(r.zero())[i]
        })
        .collect();
    out[to] = comps[from];
    let moved = r.from_components(&out);
    twist(r, moved)
}

fn unital(r: &Arc<FiniteRing>, e: &str) -> Ideal {
    Ideal::unital(r.clone(), r.parse(e).expect("idempotent expression")).expect("unital ideal")
}

// ----- frob4: the flagship τ(x)-global partial action ------------------------

fn frob4_pieces(
    bad_m: bool,
) -> Result<(Arc<FiniteGroupoid>, Arc<FiniteRing>, Vec<Ideal>, Vec<RingMap>), ActionError> {
    let gd = Arc::new(FiniteGroupoid::validate(&two_object_groupoid_spec()).unwrap());
    let r = gf9_power(4);
    let frob = |rr: &Arc<FiniteRing>, a: El| frobenius(rr)(a);
    let keep = |_: &Arc<FiniteRing>, a: El| a;

    let a_x = unital(&r, "e1+e2");
    let a_y = unital(&r, "e3+e4");
    let a_g = unital(&r, "e1");
    let a_h = unital(&r, "e3");
    let a_m = if bad_m {
        unital(&r, "e4")
    } else {
        unital(&r, "e3")
    };
    let a_m_inv = unital(&r, "e1");

    let mut ideals: Vec<Option<Ideal>> = vec![None; gd.len()];
    let mut maps: Vec<Option<RingMap>> = vec![None; gd.len()];
    let mut put = |name: &str, ideal: Ideal, map: RingMap| {
        let g = gd.by_name(name).unwrap();
        ideals[g.0 as usize] = Some(ideal);
        maps[g.0 as usize] = Some(map);
    };

    put("x", a_x.clone(), RingMap::identity_on(&a_x));
    put("y", a_y.clone(), RingMap::identity_on(&a_y));
    put(
        "g",
        a_g.clone(),
        RingMap::from_fn(a_g.clone(), a_g.clone(), |a| frob(&r, a), true)?,
    );
    put(
        "h",
        a_h.clone(),
        RingMap::from_fn(a_h.clone(), a_h.clone(), |a| frob(&r, a), true)?,
    );
    let m_to = if bad_m { 3 } else { 2 };
    put(
        "m",
        a_m.clone(),
        RingMap::from_fn(
            a_m_inv.clone(),
            a_m.clone(),
            |a| move_component(&r, a, 0, m_to, frob),
            true,
        )?,
    );
    put(
        "m'",
        a_m_inv.clone(),
        RingMap::from_fn(
            a_m.clone(),
            a_m_inv.clone(),
            |a| move_component(&r, a, m_to, 0, frob),
            true,
        )?,
    );
    // l moves the block e1⊕e2 to e3⊕e4 without conjugating
    let shift_block = |rr: &Arc<FiniteRing>, a: El, up: bool| {
        let c = rr.components(a);
        let z = rr.components(rr.zero());
        if up {
            rr.from_components(&[z[0], z[1], c[0], c[1]])
        } else {
            rr.from_components(&[c[2], c[3], z[2], z[3]])
        }
    };
    put(
        "l",
        a_y.clone(),
        RingMap::from_fn(a_x.clone(), a_y.clone(), |a| shift_block(&r, a, true), true)?,
    );
    put(
        "l'",
        a_x.clone(),
        RingMap::from_fn(a_y.clone(), a_x.clone(), |a| shift_block(&r, a, false), true)?,
    );
    let _ = keep;
    Ok((
        gd,
        r,
        ideals.into_iter().map(Option::unwrap).collect(),
        maps.into_iter().map(Option::unwrap).collect(),
    ))
}

/// Four-component GF(9) ring with the two-object groupoid acting through
/// component moves and Frobenius twists; τ(x)-global for τ = {x, l} but
/// not global, and γ-unital.
pub fn frob4() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| {
        let (gd, r, ideals, maps) = frob4_pieces(false).expect("flagship pieces");
        let action = PartialAction::new(gd.clone(), r.clone(), ideals, maps)
            .expect("flagship action validates");
        let y = gd.by_name("y").unwrap();
        let l = gd.by_name("l").unwrap();
        let x = gd.by_name("x").unwrap();
        let tau = Transversal::new(&gd, x, &BTreeMap::from([(y, l)])).unwrap();
        let datum = Datum::extract(&action, &tau).expect("flagship datum");
        Instance {
            name: "frob4",
            groupoid: gd,
            ring: r,
            tau,
            datum,
            action,
        }
    })
}

/// Same data with `A_m` redefined to the fourth component; the extension
/// law rejects it.
pub fn frob4_with_bad_m_ideal() -> Result<PartialAction, ActionError> {
    let (gd, r, ideals, maps) = frob4_pieces(true)?;
    PartialAction::new(gd, r, ideals, maps)
}

// ----- restrict3: a datum with proper transversal domains --------------------

fn restrict3_datum(identity_base: bool) -> Result<Datum, ActionError> {
    let gd = Arc::new(FiniteGroupoid::validate(&two_object_groupoid_spec()).unwrap());
    let r = gf9_power(3);
    let x = gd.by_name("x").unwrap();
    let y = gd.by_name("y").unwrap();
    let l = gd.by_name("l").unwrap();
    let g = gd.by_name("g").unwrap();
    let tau = Transversal::new(&gd, x, &BTreeMap::from([(y, l)])).unwrap();

    let whole = Ideal::full(r.clone());
    let j = unital(&r, "e1+e2");
    let el_l = unital(&r, "e2+e3");

    let swap12 = |a: El| {
        let c = r.components(a);
        r.from_components(&[c[1], c[0], c[2]])
    };
    let frob = frobenius(&r);

    let ideals = BTreeMap::from([(x, whole.clone()), (y, whole.clone())]);
    let base_map = if identity_base {
        RingMap::identity_on(&whole)
    } else {
        RingMap::from_fn(whole.clone(), whole.clone(), swap12, true)?
    };
    let tau_maps = BTreeMap::from([
        (x, base_map),
        (y, RingMap::from_fn(j.clone(), j.clone(), swap12, true)?),
    ]);
    let group_ideals = BTreeMap::from([(x, whole.clone()), (g, el_l.clone())]);
    let group_maps = BTreeMap::from([
        (x, RingMap::identity_on(&whole)),
        (g, RingMap::from_fn(el_l.clone(), el_l, frob, true)?),
    ]);
    Datum::new(gd, r, tau, ideals, tau_maps, group_ideals, group_maps)
}

/// Datum on GF(9)³ with `I_x = I_y = A`, transversal maps restricted to
/// `J = A(e1+e2)` via the swap of the first two components, and group
/// part `σ =` Frobenius on `L = A(e2+e3)`. Not τ(x)-global.
pub fn restrict3() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| {
        let datum = restrict3_datum(true).expect("restricted datum validates");
        let action = datum.lift().expect("restricted datum lifts");
        Instance {
            name: "restrict3",
            groupoid: datum.groupoid().clone(),
            ring: datum.ring().clone(),
            tau: datum.tau().clone(),
            datum,
            action,
        }
    })
}

/// The same datum with a non-identity map at the base object; rejected.
pub fn restrict3_with_nonidentity_base() -> Result<Datum, ActionError> {
    restrict3_datum(false)
}

// ----- shift3: the globalization showcase ------------------------------------

/// Datum on GF(9)³ from a central idempotent `e = e1+e2` and the pair
/// σ = swap(2,3)∘Frobenius (an involution), γ = cyclic shift:
/// `I_x = Ae`, `I_y = Aγ(e)`, group part σ on `A·e·σ(e) = Ae1`.
/// τ(x)-global, γ-unital, but the object ideals overlap in `Ae2`.
pub fn shift3() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| {
        let gd = Arc::new(FiniteGroupoid::validate(&two_object_groupoid_spec()).unwrap());
        let r = gf9_power(3);
        let x = gd.by_name("x").unwrap();
        let y = gd.by_name("y").unwrap();
        let l = gd.by_name("l").unwrap();
        let g = gd.by_name("g").unwrap();
        let tau = Transversal::new(&gd, x, &BTreeMap::from([(y, l)])).unwrap();

        let i_x = unital(&r, "e1+e2");
        let i_y = unital(&r, "e2+e3");
        let i_g = unital(&r, "e1");

        let datum = Datum::new(
            gd.clone(),
            r.clone(),
            tau.clone(),
            BTreeMap::from([(x, i_x.clone()), (y, i_y.clone())]),
            BTreeMap::from([
                (x, RingMap::identity_on(&i_x)),
                (
                    y,
                    RingMap::from_fn(i_x.clone(), i_y.clone(), |a| shift3_gamma(&r, a), true)
                        .expect("γ|I_x"),
                ),
            ]),
            BTreeMap::from([(x, i_x.clone()), (g, i_g.clone())]),
            BTreeMap::from([
                (x, RingMap::identity_on(&i_x)),
                (
                    g,
                    RingMap::from_fn(i_g.clone(), i_g.clone(), |a| shift3_sigma(&r, a), true)
                        .expect("σ|I_g"),
                ),
            ]),
        )
        .expect("shift3 datum validates");
        let action = datum.lift().expect("shift3 lifts");
        Instance {
            name: "shift3",
            groupoid: gd,
            ring: r,
            tau,
            datum,
            action,
        }
    })
}

/// The involution σ = swap(2,3) ∘ componentwise Frobenius on GF(9)³.
pub fn shift3_sigma(r: &Arc<FiniteRing>, a: El) -> El {
    let f = frobenius(r);
    let c = r.components(f(a));
    r.from_components(&[c[0], c[2], c[1]])
}

/// The cyclic shift γ(a₁,a₂,a₃) = (a₃,a₁,a₂) on GF(9)³.
pub fn shift3_gamma(r: &Arc<FiniteRing>, a: El) -> El {
    let c = r.components(a);
    r.from_components(&[c[2], c[0], c[1]])
}

// ----- gamma_z2: a lifted global action on Γ_{ℤ₂}² ----------------------------

/// The groupoid Γ over ℤ₂ with two objects (8 morphisms), acting on
/// GF(9)² through component transport and the Frobenius at the isotropy.
pub fn gamma_z2() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| {
        let z2 = FiniteGroup::cyclic(2);
        let gd = Arc::new(gamma_groupoid(&z2, 2, 1).unwrap());
        let r = gf9_power(2);
        let obj1 = gd.by_name("(0,1,1)").unwrap();
        let obj2 = gd.by_name("(0,2,2)").unwrap();
        let tau2 = gd.by_name("(0,2,1)").unwrap();
        let frob_g = gd.by_name("(1,1,1)").unwrap();
        let tau = Transversal::new(&gd, obj1, &BTreeMap::from([(obj2, tau2)])).unwrap();

        let i1 = unital(&r, "e1");
        let i2 = unital(&r, "e2");
        let frob = frobenius(&r);
        let datum = Datum::new(
            gd.clone(),
            r.clone(),
            tau.clone(),
            BTreeMap::from([(obj1, i1.clone()), (obj2, i2.clone())]),
            BTreeMap::from([
                (obj1, RingMap::identity_on(&i1)),
                (
                    obj2,
                    RingMap::from_fn(
                        i1.clone(),
                        i2.clone(),
                        |a| move_component(&r, a, 0, 1, |_, v| v),
                        true,
                    )
                    .expect("transport"),
                ),
            ]),
            BTreeMap::from([(obj1, i1.clone()), (frob_g, i1.clone())]),
            BTreeMap::from([
                (obj1, RingMap::identity_on(&i1)),
                (
                    frob_g,
                    RingMap::from_fn(i1.clone(), i1.clone(), frob, true).expect("Frobenius"),
                ),
            ]),
        )
        .expect("gamma_z2 datum validates");
        let action = datum.lift().expect("gamma_z2 lifts");
        Instance {
            name: "gamma_z2",
            groupoid: gd,
            ring: r,
            tau,
            datum,
            action,
        }
    })
}

// ----- pair_swap: the Galois showcase -----------------------------------------

/// The pair groupoid on {1, 2} acting on GF(3)² by moving coordinates;
/// a global action, Galois over its invariants.
pub fn pair_swap() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| {
        let gd = Arc::new(pair_groupoid(&["1".into(), "2".into()]).unwrap());
        let f3 = FiniteRing::zmod(3).unwrap();
        let r = FiniteRing::product(vec![f3.clone(), f3]).unwrap();
        let obj = |i: usize| gd.by_name(&format!("({i},{i})")).unwrap();
        let arrow = |i: usize, j: usize| gd.by_name(&format!("({i},{j})")).unwrap();

        let ideals_by_obj = [unital(&r, "e1"), unital(&r, "e2")];
        let mut ideals: Vec<Option<Ideal>> = vec![None; gd.len()];
        let mut maps: Vec<Option<RingMap>> = vec![None; gd.len()];
        for i in 1..=2usize {
            for j in 1..=2usize {
                let mo = arrow(i, j);
                let ideal = ideals_by_obj[j - 1].clone();
                let dom = ideals_by_obj[i - 1].clone();
                let map = RingMap::from_fn(
                    dom,
                    ideal.clone(),
                    |a| move_component(&r, a, i - 1, j - 1, |_, v| v),
                    true,
                )
                .expect("transport");
                ideals[mo.0 as usize] = Some(ideal);
                maps[mo.0 as usize] = Some(map);
            }
        }
        let action = PartialAction::new(
            gd.clone(),
            r.clone(),
            ideals.into_iter().map(Option::unwrap).collect(),
            maps.into_iter().map(Option::unwrap).collect(),
        )
        .expect("pair groupoid action validates");
        assert!(action.is_global());
        let tau = Transversal::new(&gd, obj(1), &BTreeMap::new()).unwrap();
        let datum = Datum::extract(&action, &tau).expect("pair_swap datum");
        Instance {
            name: "pair_swap",
            groupoid: gd,
            ring: r,
            tau,
            datum,
            action,
        }
    })
}

// ----- one-object instances ----------------------------------------------------

fn loop_groupoid_spec() -> GroupoidSpec {
    GroupoidSpec {
        morphisms: vec!["x".into(), "c".into()],
        objects: vec!["x".into()],
        src: [("x", "x"), ("c", "x")]
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .into(),
        tgt: [("x", "x"), ("c", "x")]
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .into(),
        inv: [("x", "x"), ("c", "c")]
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .into(),
        compose: [("x", "x", "x"), ("x", "c", "c"), ("c", "x", "c"), ("c", "c", "x")]
            .iter()
            .map(|(a, b, c)| [a.to_string(), b.to_string(), c.to_string()])
            .collect(),
    }
}

fn one_object_instance(
    name: &'static str,
    ring: Arc<FiniteRing>,
    loop_map: impl Fn(El) -> El,
) -> Instance {
    let gd = Arc::new(FiniteGroupoid::validate(&loop_groupoid_spec()).unwrap());
    let x = gd.by_name("x").unwrap();
    let c = gd.by_name("c").unwrap();
    let whole = Ideal::full(ring.clone());
    let tau = Transversal::new(&gd, x, &BTreeMap::new()).unwrap();
    let datum = Datum::new(
        gd.clone(),
        ring.clone(),
        tau.clone(),
        BTreeMap::from([(x, whole.clone())]),
        BTreeMap::from([(x, RingMap::identity_on(&whole))]),
        BTreeMap::from([(x, whole.clone()), (c, whole.clone())]),
        BTreeMap::from([
            (x, RingMap::identity_on(&whole)),
            (
                c,
                RingMap::from_fn(whole.clone(), whole.clone(), loop_map, true)
                    .expect("involution"),
            ),
        ]),
    )
    .expect("one-object datum validates");
    let action = datum.lift().expect("one-object datum lifts");
    Instance {
        name,
        groupoid: gd,
        ring,
        tau,
        datum,
        action,
    }
}

/// ℤ₂ acting trivially on GF(2): the characteristic-2 obstruction, where
/// the trace map is identically zero.
pub fn char2_trivial() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| one_object_instance("char2_trivial", FiniteRing::zmod(2).unwrap(), |a| a))
}

/// ℤ₂ swapping the two coordinates of GF(2)²: trace (a,b) ↦ (a+b, a+b).
pub fn swap_gf2sq() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| {
        let f2 = FiniteRing::zmod(2).unwrap();
        let r = FiniteRing::product(vec![f2.clone(), f2]).unwrap();
        let rr = r.clone();
        one_object_instance("swap_gf2sq", r, move |a| {
            let c = rr.components(a);
            rr.from_components(&[c[1], c[0]])
        })
    })
}

/// ℤ₂ fixing 2ℤ/4 pointwise: a datum whose group ideal has no identity,
/// hence not γ-unital and not globalizable.
pub fn z4_nonunital() -> &'static Instance {
    static I: OnceLock<Instance> = OnceLock::new();
    I.get_or_init(|| {
        let gd = Arc::new(FiniteGroupoid::validate(&loop_groupoid_spec()).unwrap());
        let r = FiniteRing::zmod(4).unwrap();
        let x = gd.by_name("x").unwrap();
        let c = gd.by_name("c").unwrap();
        let whole = Ideal::full(r.clone());
        let two = r.by_name("2").unwrap();
        let even = Ideal::from_elements(r.clone(), &[r.zero(), two]).unwrap();
        let tau = Transversal::new(&gd, x, &BTreeMap::new()).unwrap();
        let datum = Datum::new(
            gd.clone(),
            r.clone(),
            tau.clone(),
            BTreeMap::from([(x, whole.clone())]),
            BTreeMap::from([(x, RingMap::identity_on(&whole))]),
            BTreeMap::from([(x, whole.clone()), (c, even.clone())]),
            BTreeMap::from([
                (x, RingMap::identity_on(&whole)),
                (c, RingMap::identity_on(&even)),
            ]),
        )
        .expect("2ℤ/4 datum validates");
        let action = datum.lift().expect("2ℤ/4 datum lifts");
        Instance {
            name: "z4_nonunital",
            groupoid: gd,
            ring: r,
            tau,
            datum,
            action,
        }
    })
}

/// Every bundled instance, for sweeps.
pub fn all() -> Vec<&'static Instance> {
    vec![
        frob4(),
        gamma_z2(),
        pair_swap(),
        char2_trivial(),
        swap_gf2sq(),
        restrict3(),
        shift3(),
        z4_nonunital(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_instances_build() {
        for inst in all() {
            assert!(!inst.ring.is_empty(), "{}", inst.name);
            // every instance's action round-trips through its datum
            let lifted = inst.datum.lift().unwrap();
            assert!(
                lifted.leq(&inst.action).unwrap() && inst.action.leq(&lifted).unwrap(),
                "{}: stored action must equal the lifted datum",
                inst.name
            );
        }
    }

    #[test]
    fn gamma_unitality_flags() {
        assert!(frob4().datum.is_gamma_unital());
        assert!(pair_swap().datum.is_gamma_unital());
        assert!(char2_trivial().datum.is_gamma_unital());
        assert!(!z4_nonunital().datum.is_gamma_unital());
    }

    #[test]
    fn tau_globality_flags() {
        assert!(frob4().action.is_tau_global(&frob4().tau));
        assert!(gamma_z2().action.is_tau_global(&gamma_z2().tau));
        assert!(shift3().action.is_tau_global(&shift3().tau));
        assert!(!restrict3().action.is_tau_global(&restrict3().tau));
    }

    #[test]
    fn globality_flags() {
        assert!(pair_swap().action.is_global());
        assert!(gamma_z2().action.is_global());
        assert!(!frob4().action.is_global());
        assert!(char2_trivial().action.is_global());
    }
}
