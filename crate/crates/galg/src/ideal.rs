//! Ideals of a finite ring and additive/multiplicative maps between them.
//!
//! An [`Ideal`] is stored extensionally (a bitset of members plus an
//! additive basis of the subgroup); idempotent-generated ideals remember
//! their generator. A [`RingMap`] is a table-backed additive and
//! multiplicative map between two ideals, optionally certified bijective.
//! Partial-bijection composition uses the convention
//! `dom(u∘v) = v⁻¹(dom(u) ∩ ran(v))`, `ran(u∘v) = u(dom(u) ∩ ran(v))`.

use crate::abelian;
use crate::ring::{El, FiniteRing, RingError};
use std::fmt;
use std::sync::Arc;

/// An ideal (or, extensionally, any additive subgroup that the caller has
/// checked for the absorption it needs) of a finite ring.
#[derive(Clone)]
pub struct Ideal {
    ring: Arc<FiniteRing>,
    members: Vec<El>, // sorted
    bits: Vec<u64>,
    idempotent: Option<El>,
    basis: Vec<El>,
    basis_orders: Vec<u32>,
    /// coordinates of each member relative to the basis, member-indexed
    coords: Vec<Vec<u32>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal(|I| = {})", self.members.len())
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.members == other.members
    }
}
impl Eq for Ideal {}

impl Ideal {
    /// Builds from an explicit member list; validates that the set is an
    /// additive subgroup closed under multiplication by the ambient ring
    /// on both sides.
    pub fn from_elements(ring: Arc<FiniteRing>, elems: &[El]) -> Result<Self, RingError> {
        let ideal = Self::subgroup_from_elements(ring, elems)?;
        ideal.check_absorbs_ring()?;
        Ok(ideal)
    }

    /// Builds from a member list, checking only the additive subgroup
    /// condition. Used for ideals-of-ideals, where absorption is checked
    /// against the intermediate ideal instead of the whole ring.
    pub fn subgroup_from_elements(
        ring: Arc<FiniteRing>,
        elems: &[El],
    ) -> Result<Self, RingError> {
        let mut bits = vec![0u64; ring.len().div_ceil(64)];
        let mut members: Vec<El> = Vec::new();
        for &e in elems {
            if !get_bit(&bits, e) {
                set_bit(&mut bits, e);
                members.push(e);
            }
        }
        if !get_bit(&bits, ring.zero()) {
            return Err(RingError::NotSubgroup("missing 0".into()));
        }
        for &a in &members {
            if !get_bit(&bits, ring.neg(a)) {
                return Err(RingError::NotSubgroup(format!(
                    "missing -{}",
                    ring.name(a)
                )));
            }
            for &b in &members {
                if !get_bit(&bits, ring.add(a, b)) {
                    return Err(RingError::NotSubgroup(format!(
                        "missing {} + {}",
                        ring.name(a),
                        ring.name(b)
                    )));
                }
            }
        }
        members.sort();
        let (basis, basis_orders, coords) = subgroup_basis(&ring, &members);
        Ok(Ideal {
            ring,
            members,
            bits,
            idempotent: None,
            basis,
            basis_orders,
            coords,
        })
    }

    fn check_absorbs_ring(&self) -> Result<(), RingError> {
        for &m in &self.members {
            for g in self.ring.basis() {
                if !self.contains(self.ring.mul(g, m)) || !self.contains(self.ring.mul(m, g)) {
                    return Err(RingError::NotSubgroup(format!(
                        "`{}` does not absorb multiplication by `{}`",
                        self.ring.name(m),
                        self.ring.name(g)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The unital ideal A·e generated by a central idempotent.
    pub fn unital(ring: Arc<FiniteRing>, e: El) -> Result<Self, RingError> {
        if !ring.is_idempotent(e) {
            return Err(RingError::NotIdempotent(ring.name(e).to_string()));
        }
        if !ring.is_central(e) {
            return Err(RingError::NotCentral(ring.name(e).to_string()));
        }
        let elems: Vec<El> = ring.elements().map(|a| ring.mul(a, e)).collect();
        let mut ideal = Self::from_elements(ring, &elems)?;
        ideal.idempotent = Some(e);
        Ok(ideal)
    }

    pub fn zero(ring: Arc<FiniteRing>) -> Self {
        let z = ring.zero();
        let mut ideal = Self::from_elements(ring, &[z]).expect("zero ideal");
        ideal.idempotent = Some(z);
        ideal
    }

    pub fn full(ring: Arc<FiniteRing>) -> Self {
        let elems: Vec<El> = ring.elements().collect();
        let mut ideal = Self::from_elements(ring.clone(), &elems).expect("whole ring");
        ideal.idempotent = ring.one();
        ideal
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn members(&self) -> &[El] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, e: El) -> bool {
        get_bit(&self.bits, e)
    }

    pub fn contains_all(&self, other: &Ideal) -> bool {
        other.members.iter().all(|&m| self.contains(m))
    }

    pub fn same_set(&self, other: &Ideal) -> bool {
        self.members == other.members
    }

    /// Additive basis of the subgroup.
    pub fn basis(&self) -> &[El] {
        &self.basis
    }

    pub fn basis_orders(&self) -> &[u32] {
        &self.basis_orders
    }

    /// Coordinates of a member relative to the ideal's own basis.
    pub fn member_coords(&self, e: El) -> Vec<i128> {
        let i = self
            .members
            .binary_search(&e)
            .expect("element outside the subgroup");
        self.coords[i].iter().map(|&c| c as i128).collect()
    }

    /// Rebuilds a member from coordinates.
    pub fn member_from_coords(&self, cs: &[i128]) -> El {
        let mut acc = self.ring.zero();
        for ((&g, &o), &c) in self.basis.iter().zip(&self.basis_orders).zip(cs) {
            acc = self.ring.add(acc, self.ring.int_mul(c.rem_euclid(o as i128), g));
        }
        acc
    }

    /// The recorded generator, when the ideal was built from one.
    pub fn generator_idempotent(&self) -> Option<El> {
        self.idempotent
    }

    /// Identity element of the ideal viewed as a ring, by exhaustive
    /// search; also required to be central in the ambient ring. The zero
    /// ideal has identity 0.
    pub fn find_identity(&self) -> Option<El> {
        self.members
            .iter()
            .copied()
            .find(|&e| {
                self.members
                    .iter()
                    .all(|&a| self.ring.mul(e, a) == a && self.ring.mul(a, e) == a)
                    && self.ring.is_central(e)
            })
    }

    /// Attaches the identity as generator when `I = A·e` holds for it.
    pub fn with_found_identity(mut self) -> Self {
        if self.idempotent.is_none() {
            if let Some(e) = self.find_identity() {
                let mut gen_set: Vec<El> =
                    self.ring.elements().map(|a| self.ring.mul(a, e)).collect();
                gen_set.sort();
                gen_set.dedup();
                if gen_set == self.members {
                    self.idempotent = Some(e);
                }
            }
        }
        self
    }

    /// Is this an additive subgroup of `other` absorbing multiplication
    /// by `other` on both sides?
    pub fn is_ideal_in(&self, other: &Ideal) -> bool {
        other.contains_all(self)
            && self.members.iter().all(|&m| {
                other
                    .basis
                    .iter()
                    .all(|&b| self.contains(self.ring.mul(b, m)) && self.contains(self.ring.mul(m, b)))
            })
    }

    pub fn is_ideal_in_ring(&self) -> bool {
        self.check_absorbs_ring().is_ok()
    }

    pub fn intersect(&self, other: &Ideal) -> Ideal {
        let elems: Vec<El> = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains(m))
            .collect();
        Ideal::subgroup_from_elements(self.ring.clone(), &elems)
            .expect("intersection of subgroups")
            .with_found_identity()
    }

    /// Additive span of the union (the ideal sum I + J).
    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut elems: Vec<El> = Vec::new();
        for &a in &self.members {
            for &b in &other.members {
                elems.push(self.ring.add(a, b));
            }
        }
        Ideal::subgroup_from_elements(self.ring.clone(), &elems)
            .expect("sum of subgroups")
            .with_found_identity()
    }

    /// Coordinates of the members inside the ring presentation, as a
    /// subgroup object for the linear algebra layer.
    pub fn as_subgroup(&self) -> abelian::Subgroup {
        self.ring.span(&self.basis.clone())
    }
}

/// Additive basis of a subgroup given extensionally, with certified
/// coordinates for every member.
fn subgroup_basis(
    ring: &Arc<FiniteRing>,
    members: &[El],
) -> (Vec<El>, Vec<u32>, Vec<Vec<u32>>) {
    let n = members.len();
    let pos = |e: El| -> usize { members.binary_search(&e).expect("closed subgroup") };
    let zero_local = pos(ring.zero());
    let add_local = |a: usize, b: usize| pos(ring.add(members[a], members[b]));
    let basis = abelian::abelian_basis(n, zero_local, &add_local)
        .expect("member set is a validated subgroup");
    let coords = abelian::coordinates_for_basis(n, zero_local, &add_local, &basis)
        .expect("subgroup basis enumerates bijectively");
    (
        basis.iter().map(|&(i, _)| members[i]).collect(),
        basis.iter().map(|&(_, o)| o).collect(),
        coords,
    )
}

/// A validated additive and multiplicative map between two ideals.
#[derive(Clone)]
pub struct RingMap {
    domain: Ideal,
    codomain: Ideal,
    table: Vec<u16>, // full ring size; u16::MAX outside the domain
    bijective: bool,
}

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RingMap(|dom| = {}, |cod| = {})",
            self.domain.len(),
            self.codomain.len()
        )
    }
}

impl PartialEq for RingMap {
    fn eq(&self, other: &Self) -> bool {
        self.domain.same_set(&other.domain)
            && self.codomain.same_set(&other.codomain)
            && self
                .domain
                .members()
                .iter()
                .all(|&a| self.apply(a) == other.apply(a))
    }
}
impl Eq for RingMap {}

impl RingMap {
    /// Validates a raw table as a map `domain → codomain`: total,
    /// additive, multiplicative, and bijective when `iso` is set.
    pub fn validate(
        pairs: &[(El, El)],
        domain: Ideal,
        codomain: Ideal,
        iso: bool,
    ) -> Result<Self, RingError> {
        let ring = domain.ring().clone();
        let mut table = vec![u16::MAX; ring.len()];
        for &(a, b) in pairs {
            if !domain.contains(a) {
                return Err(RingError::NotTotal(format!(
                    "`{}` is outside the domain",
                    ring.name(a)
                )));
            }
            if !codomain.contains(b) {
                return Err(RingError::NotBijective(format!(
                    "image `{}` is outside the codomain",
                    ring.name(b)
                )));
            }
            table[a.0 as usize] = b.0;
        }
        for &a in domain.members() {
            if table[a.0 as usize] == u16::MAX {
                return Err(RingError::NotTotal(ring.name(a).to_string()));
            }
        }
        let map = RingMap {
            domain,
            codomain,
            table,
            bijective: false,
        };
        map.check_additive()?;
        map.check_multiplicative()?;
        if iso {
            map.check_bijective()?;
        }
        Ok(RingMap {
            bijective: iso,
            ..map
        })
    }

    /// Builds and validates from a closure.
    pub fn from_fn(
        domain: Ideal,
        codomain: Ideal,
        f: impl Fn(El) -> El,
        iso: bool,
    ) -> Result<Self, RingError> {
        let pairs: Vec<(El, El)> = domain.members().iter().map(|&a| (a, f(a))).collect();
        Self::validate(&pairs, domain, codomain, iso)
    }

    fn check_additive(&self) -> Result<(), RingError> {
        let ring = self.domain.ring();
        for &a in self.domain.members() {
            for &b in self.domain.members() {
                let lhs = self.apply2(ring.add(a, b));
                let rhs = ring.add(self.apply2(a), self.apply2(b));
                if lhs != rhs {
                    return Err(RingError::NotAdditive {
                        a: ring.name(a).to_string(),
                        b: ring.name(b).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_multiplicative(&self) -> Result<(), RingError> {
        let ring = self.domain.ring();
        for &a in self.domain.members() {
            for &b in self.domain.members() {
                let lhs = self.apply2(ring.mul(a, b));
                let rhs = ring.mul(self.apply2(a), self.apply2(b));
                if lhs != rhs {
                    return Err(RingError::NotMultiplicative {
                        a: ring.name(a).to_string(),
                        b: ring.name(b).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_bijective(&self) -> Result<(), RingError> {
        if self.domain.len() != self.codomain.len() {
            return Err(RingError::NotBijective(format!(
                "domain has {} elements, codomain {}",
                self.domain.len(),
                self.codomain.len()
            )));
        }
        let mut seen = vec![false; self.domain.ring().len()];
        for &a in self.domain.members() {
            let b = self.apply2(a);
            if seen[b.0 as usize] {
                return Err(RingError::NotBijective(format!(
                    "`{}` hit twice",
                    self.domain.ring().name(b)
                )));
            }
            seen[b.0 as usize] = true;
        }
        Ok(())
    }

    pub fn identity_on(ideal: &Ideal) -> Self {
        Self::from_fn(ideal.clone(), ideal.clone(), |a| a, true).expect("identity map")
    }

    pub fn domain(&self) -> &Ideal {
        &self.domain
    }

    pub fn codomain(&self) -> &Ideal {
        &self.codomain
    }

    pub fn is_bijective(&self) -> bool {
        self.bijective
    }

    pub fn apply(&self, a: El) -> Option<El> {
        let v = self.table[a.0 as usize];
        (v != u16::MAX).then_some(El(v))
    }

    /// Applies to an element known to be in the domain.
    pub fn apply2(&self, a: El) -> El {
        El(self.table[a.0 as usize])
    }

    /// The set image of a subgroup under this map.
    pub fn image_of(&self, sub: &Ideal) -> Ideal {
        let elems: Vec<El> = sub
            .members()
            .iter()
            .filter_map(|&a| self.apply(a))
            .collect();
        Ideal::subgroup_from_elements(self.domain.ring().clone(), &elems)
            .expect("image of a subgroup")
            .with_found_identity()
    }

    pub fn range(&self) -> Ideal {
        self.image_of(&self.domain)
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> RingMap {
        assert!(self.bijective, "inverse of a non-bijective map");
        let ring = self.domain.ring();
        let mut table = vec![u16::MAX; ring.len()];
        for &a in self.domain.members() {
            table[self.apply2(a).0 as usize] = a.0;
        }
        RingMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            table,
            bijective: true,
        }
    }

    /// Partial-bijection composition `self ∘ other`, with
    /// `dom = other⁻¹(dom(self) ∩ ran(other))` and the matching range.
    pub fn compose(&self, other: &RingMap) -> RingMap {
        let ring = self.domain.ring();
        let mut table = vec![u16::MAX; ring.len()];
        let mut dom_elems = Vec::new();
        let mut ran_elems = Vec::new();
        for &a in other.domain.members() {
            let mid = other.apply2(a);
            if let Some(out) = self.apply(mid) {
                table[a.0 as usize] = out.0;
                dom_elems.push(a);
                ran_elems.push(out);
            }
        }
        let domain = Ideal::subgroup_from_elements(ring.clone(), &dom_elems)
            .expect("composition domain")
            .with_found_identity();
        let codomain = Ideal::subgroup_from_elements(ring.clone(), &ran_elems)
            .expect("composition range")
            .with_found_identity();
        RingMap {
            domain,
            codomain,
            table,
            bijective: self.bijective && other.bijective,
        }
    }

    /// Restriction to a subgroup of the domain, with the image as the
    /// new codomain.
    pub fn restrict(&self, sub: &Ideal) -> RingMap {
        let ring = self.domain.ring();
        let mut table = vec![u16::MAX; ring.len()];
        let mut ran = Vec::new();
        for &a in sub.members() {
            let v = self.apply2(a);
            table[a.0 as usize] = v.0;
            ran.push(v);
        }
        let codomain = Ideal::subgroup_from_elements(ring.clone(), &ran)
            .expect("restricted range")
            .with_found_identity();
        RingMap {
            domain: sub.clone(),
            codomain,
            table,
            bijective: self.bijective,
        }
    }

    /// Extensional order on partial maps: does `other` extend `self`?
    pub fn extended_by(&self, other: &RingMap) -> bool {
        self.domain.members().iter().all(|&a| {
            other.domain.contains(a) && other.apply2(a) == self.apply2(a)
        })
    }
}

fn get_bit(bits: &[u64], e: El) -> bool {
    bits[e.0 as usize / 64] >> (e.0 as usize % 64) & 1 == 1
}

fn set_bit(bits: &mut [u64], e: El) {
    bits[e.0 as usize / 64] |= 1 << (e.0 as usize % 64);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    fn gf3sq() -> Arc<FiniteRing> {
        let f3 = FiniteRing::zmod(3).unwrap();
        FiniteRing::product(vec![f3.clone(), f3]).unwrap()
    }

    #[test]
    fn unital_ideal_from_idempotent() {
        let r = gf3sq();
        let e1 = r.parse("e1").unwrap();
        let i = Ideal::unital(r.clone(), e1).unwrap();
        assert_eq!(i.len(), 3);
        assert_eq!(i.generator_idempotent(), Some(e1));
        assert_eq!(i.find_identity(), Some(e1));
        assert!(i.is_ideal_in_ring());

        // whole ring from e = 1
        let one = r.one().unwrap();
        let whole = Ideal::unital(r.clone(), one).unwrap();
        assert_eq!(whole.len(), 9);

        // a non-idempotent generator is rejected
        let x = r.parse("e1*2+e2").unwrap();
        assert!(matches!(
            Ideal::unital(r.clone(), x),
            Err(RingError::NotIdempotent(_))
        ));
    }

    #[test]
    fn unital_ideal_matches_absorption_closure() {
        // A·e must equal the absorption-closed additive span of {a·e}
        let r = gf3sq();
        let e1 = r.parse("e1").unwrap();
        let i = Ideal::unital(r.clone(), e1).unwrap();
        // independent closure: start from {a·e}, close under + and ring·
        let mut set: Vec<El> = r.elements().map(|a| r.mul(a, e1)).collect();
        set.sort();
        set.dedup();
        loop {
            let mut grew = false;
            let snapshot = set.clone();
            for &a in &snapshot {
                for &b in &snapshot {
                    let s = r.add(a, b);
                    if set.binary_search(&s).is_err() {
                        set.push(s);
                        set.sort();
                        grew = true;
                    }
                }
                for g in r.elements() {
                    for prod in [r.mul(g, a), r.mul(a, g)] {
                        if set.binary_search(&prod).is_err() {
                            set.push(prod);
                            set.sort();
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        assert_eq!(set, i.members());
    }

    #[test]
    fn find_identity_cases() {
        let z4 = FiniteRing::zmod(4).unwrap();
        let two = z4.by_name("2").unwrap();
        // 2ℤ/4 = {0, 2} has no identity: 2·2 = 0
        let i = Ideal::from_elements(z4.clone(), &[z4.zero(), two]).unwrap();
        assert_eq!(i.find_identity(), None);
        // the zero ideal is unital with identity 0
        let z = Ideal::zero(z4);
        assert_eq!(z.find_identity(), Some(z.ring().zero()));
    }

    #[test]
    fn ring_map_validation() {
        let r = gf3sq();
        let e1 = r.parse("e1").unwrap();
        let e2 = r.parse("e2").unwrap();
        let i1 = Ideal::unital(r.clone(), e1).unwrap();
        let i2 = Ideal::unital(r.clone(), e2).unwrap();

        // identity on I
        let id = RingMap::identity_on(&i1);
        assert!(id.is_bijective());

        // swap a·e1 ↦ a·e2: additive + multiplicative + bijective
        let swap = RingMap::from_fn(
            i1.clone(),
            i2.clone(),
            |a| {
                let c = r.components(a);
                r.from_components(&[c[1], c[0]])
            },
            true,
        )
        .unwrap();
        assert_eq!(swap.apply2(e1), e2);

        // a map that is not additive gets rejected: send e1 ↦ e2, 2e1 ↦ 0
        let bad = RingMap::validate(
            &[
                (r.zero(), r.zero()),
                (e1, e2),
                (r.parse("e1*2").unwrap(), r.zero()),
            ],
            i1.clone(),
            i2.clone(),
            false,
        );
        assert!(matches!(bad, Err(RingError::NotAdditive { .. })));
    }

    #[test]
    fn frobenius_on_component_ideal() {
        let f9 = FiniteRing::gf(3, 2).unwrap();
        let r = FiniteRing::product(vec![f9.clone(), f9]).unwrap();
        let e1 = r.parse("e1").unwrap();
        let i1 = Ideal::unital(r.clone(), e1).unwrap();
        assert_eq!(i1.len(), 9);
        // x ↦ x³ on the 9-element ideal is a ring automorphism
        let frob = RingMap::from_fn(
            i1.clone(),
            i1.clone(),
            |x| r.mul(r.mul(x, x), x),
            true,
        )
        .unwrap();
        // order two
        let twice = frob.compose(&frob);
        assert_eq!(twice, RingMap::identity_on(&i1));
    }

    #[test]
    fn partial_bijection_composition_domain() {
        let r = gf3sq();
        let e1 = r.parse("e1").unwrap();
        let i1 = Ideal::unital(r.clone(), e1).unwrap();
        let whole = Ideal::full(r.clone());
        let id_whole = RingMap::identity_on(&whole);
        let id_i1 = RingMap::identity_on(&i1);
        // id_I ∘ id_A has domain I, not A
        let c = id_i1.compose(&id_whole);
        assert!(c.domain().same_set(&i1));
        assert!(c.codomain().same_set(&i1));
        // and id_A extends it
        assert!(c.extended_by(&id_whole));
        assert!(!id_whole.extended_by(&c));
    }

    #[test]
    fn ideal_intersection_and_sum() {
        let f3 = FiniteRing::zmod(3).unwrap();
        let r = FiniteRing::product(vec![f3.clone(), f3.clone(), f3]).unwrap();
        let i12 = Ideal::unital(r.clone(), r.parse("e1+e2").unwrap()).unwrap();
        let i23 = Ideal::unital(r.clone(), r.parse("e2+e3").unwrap()).unwrap();
        let meet = i12.intersect(&i23);
        assert_eq!(meet.len(), 3);
        assert_eq!(meet.generator_idempotent(), Some(r.parse("e2").unwrap()));
        let join = i12.sum(&i23);
        assert_eq!(join.len(), 27);
    }
}
