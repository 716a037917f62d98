//! Finite groupoids presented by explicit composition tables.
//!
//! A groupoid is a small category in which every morphism is invertible.
//! Everything here is finite and dense: a set of morphism names, a subset
//! of identity morphisms (the objects), source/target/inverse maps and a
//! composition table defined on exactly the composable pairs, i.e. the
//! pairs `(g, h)` with `s(g) = t(h)`.
//!
//! Validation checks every axiom exhaustively:
//!
//! * `s(x) = t(x) = x = x·x` for every object `x`
//! * `t(g)·g = g = g·s(g)`
//! * `s(g) = g⁻¹g = t(g⁻¹)`, `g·g⁻¹ = t(g)`, `(g⁻¹)⁻¹ = g`
//! * `s(gh) = s(h)` and `t(gh) = t(g)`
//! * `(gh)k = g(hk)` whenever both sides are defined
//!
//! Morphisms are identified by their position in the input list; this
//! order is the tie-breaking order used everywhere (transversal defaults,
//! component ordering), so results are reproducible.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

/// Sentinel in the dense composition table for non-composable pairs.
const NO_COMP: u16 = u16::MAX;

/// Default ceiling on the number of morphisms accepted by the validator.
/// The associativity check is cubic in the worst case.
pub const DEFAULT_GROUPOID_CAP: usize = 512;

/// A morphism, identified by its index in the defining list.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morph(pub u16);

impl fmt::Debug for Morph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum GroupoidError {
    #[error("duplicate morphism name `{0}`")]
    DuplicateName(String),
    #[error("unknown morphism `{0}` referenced by `{1}`")]
    UnknownMorphism(String, String),
    #[error("object set is empty")]
    EmptyObjectSet,
    #[error("source or target of `{morphism}` is `{value}`, which is not a declared object")]
    MissingIdentity { morphism: String, value: String },
    #[error("identity axiom fails at object `{object}`: {detail}")]
    BadIdentity { object: String, detail: String },
    #[error("source/target bookkeeping fails: {detail}")]
    BadSourceTarget { detail: String },
    #[error("missing or bad inverse for `{morphism}`: {detail}")]
    MissingInverse { morphism: String, detail: String },
    #[error("associativity fails on ({g}, {h}, {k}): ({g}{h}){k} = {lhs} but {g}({h}{k}) = {rhs}")]
    NonAssociative {
        g: String,
        h: String,
        k: String,
        lhs: String,
        rhs: String,
    },
    #[error("composition table: {detail}")]
    BadComposite { detail: String },
    #[error("groupoid has {size} morphisms, over the cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("groupoid is not connected: no morphism from `{from}` to `{to}`")]
    NotConnected { from: String, to: String },
    #[error("bad transversal choice for object `{object}`: {detail}")]
    BadChoice { object: String, detail: String },
    #[error("`{0}` is not an object of this groupoid")]
    UnknownObject(String),
    #[error("index {i0} is out of range 1..={m}")]
    BadIndex { i0: usize, m: usize },
}

/// Raw groupoid description, the JSON instance-file schema.
///
/// `compose` must list exactly the composable pairs: one entry
/// `[g, h, gh]` for every pair with `s(g) = t(h)`, and none for any
/// other pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupoidSpec {
    pub morphisms: Vec<String>,
    pub objects: Vec<String>,
    pub src: BTreeMap<String, String>,
    pub tgt: BTreeMap<String, String>,
    pub inv: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
}

/// A validated finite groupoid.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    names: Vec<String>,
    index: HashMap<String, u16>,
    is_object: Vec<bool>,
    objects: Vec<Morph>,
    src: Vec<u16>,
    tgt: Vec<u16>,
    inv: Vec<u16>,
    comp: Vec<u16>, // dense n×n, NO_COMP when undefined
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroupoid({} morphisms, {} objects)",
            self.names.len(),
            self.objects.len()
        )
    }
}

impl FiniteGroupoid {
    /// Validates a raw description against all groupoid axioms.
    pub fn validate(spec: &GroupoidSpec) -> Result<Self, GroupoidError> {
        Self::validate_capped(spec, DEFAULT_GROUPOID_CAP)
    }

    pub fn validate_capped(spec: &GroupoidSpec, cap: usize) -> Result<Self, GroupoidError> {
        let n = spec.morphisms.len();
        if n > cap || n >= NO_COMP as usize {
            return Err(GroupoidError::SizeCapExceeded {
                size: n,
                cap: cap.min(NO_COMP as usize - 1),
            });
        }
        if spec.objects.is_empty() {
            return Err(GroupoidError::EmptyObjectSet);
        }
        let mut index = HashMap::new();
        for (i, name) in spec.morphisms.iter().enumerate() {
            if index.insert(name.clone(), i as u16).is_some() {
                return Err(GroupoidError::DuplicateName(name.clone()));
            }
        }
        let look = |name: &str, ctx: &str| -> Result<u16, GroupoidError> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| GroupoidError::UnknownMorphism(name.to_string(), ctx.to_string()))
        };

        let mut is_object = vec![false; n];
        let mut objects = Vec::new();
        for name in &spec.objects {
            let i = look(name, "objects")?;
            if !is_object[i as usize] {
                is_object[i as usize] = true;
                objects.push(Morph(i));
            }
        }
        objects.sort();

        let mut src = vec![0u16; n];
        let mut tgt = vec![0u16; n];
        let mut inv = vec![0u16; n];
        for (i, name) in spec.morphisms.iter().enumerate() {
            let s = spec
                .src
                .get(name)
                .ok_or_else(|| GroupoidError::UnknownMorphism(name.clone(), "src".into()))?;
            let t = spec
                .tgt
                .get(name)
                .ok_or_else(|| GroupoidError::UnknownMorphism(name.clone(), "tgt".into()))?;
            let v = spec
                .inv
                .get(name)
                .ok_or_else(|| GroupoidError::UnknownMorphism(name.clone(), "inv".into()))?;
            src[i] = look(s, "src")?;
            tgt[i] = look(t, "tgt")?;
            inv[i] = look(v, "inv")?;
            for (val, raw) in [(src[i], s), (tgt[i], t)] {
                if !is_object[val as usize] {
                    return Err(GroupoidError::MissingIdentity {
                        morphism: name.clone(),
                        value: raw.clone(),
                    });
                }
            }
        }

        let mut comp = vec![NO_COMP; n * n];
        for [g, h, gh] in &spec.compose {
            let gi = look(g, "compose")?;
            let hi = look(h, "compose")?;
            let ri = look(gh, "compose")?;
            if src[gi as usize] != tgt[hi as usize] {
                return Err(GroupoidError::BadComposite {
                    detail: format!("pair (`{g}`, `{h}`) is not composable: s({g}) != t({h})"),
                });
            }
            if comp[gi as usize * n + hi as usize] != NO_COMP {
                return Err(GroupoidError::BadComposite {
                    detail: format!("pair (`{g}`, `{h}`) listed twice"),
                });
            }
            comp[gi as usize * n + hi as usize] = ri;
        }
        for g in 0..n {
            for h in 0..n {
                if src[g] == tgt[h] && comp[g * n + h] == NO_COMP {
                    return Err(GroupoidError::BadComposite {
                        detail: format!(
                            "composable pair (`{}`, `{}`) missing from the table",
                            spec.morphisms[g], spec.morphisms[h]
                        ),
                    });
                }
            }
        }

        let gd = FiniteGroupoid {
            names: spec.morphisms.clone(),
            index,
            is_object,
            objects,
            src,
            tgt,
            inv,
            comp,
        };
        gd.check_axioms()?;
        Ok(gd)
    }

    fn check_axioms(&self) -> Result<(), GroupoidError> {
        let n = self.names.len();
        // s(x) = t(x) = x = x·x for objects.
        for &x in &self.objects {
            let xi = x.0 as usize;
            if self.src[xi] != x.0 || self.tgt[xi] != x.0 {
                return Err(GroupoidError::BadIdentity {
                    object: self.names[xi].clone(),
                    detail: "s(x) or t(x) differs from x".into(),
                });
            }
            if self.comp[xi * n + xi] != x.0 {
                return Err(GroupoidError::BadIdentity {
                    object: self.names[xi].clone(),
                    detail: "x·x differs from x".into(),
                });
            }
        }
        for g in 0..n {
            let gn = || self.names[g].clone();
            let (s, t, v) = (self.src[g], self.tgt[g], self.inv[g] as usize);
            // t(g)·g = g = g·s(g)
            if self.comp[t as usize * n + g] != g as u16 {
                return Err(GroupoidError::BadSourceTarget {
                    detail: format!("t(g)·g != g for g = `{}`", gn()),
                });
            }
            if self.comp[g * n + s as usize] != g as u16 {
                return Err(GroupoidError::BadSourceTarget {
                    detail: format!("g·s(g) != g for g = `{}`", gn()),
                });
            }
            // inverse axioms
            if self.src[v] != t || self.tgt[v] != s {
                return Err(GroupoidError::MissingInverse {
                    morphism: gn(),
                    detail: "s(g⁻¹) != t(g) or t(g⁻¹) != s(g)".into(),
                });
            }
            if self.inv[v] != g as u16 {
                return Err(GroupoidError::MissingInverse {
                    morphism: gn(),
                    detail: "(g⁻¹)⁻¹ != g".into(),
                });
            }
            if self.comp[v * n + g] != s {
                return Err(GroupoidError::MissingInverse {
                    morphism: gn(),
                    detail: "g⁻¹·g != s(g)".into(),
                });
            }
            if self.comp[g * n + v] != t {
                return Err(GroupoidError::MissingInverse {
                    morphism: gn(),
                    detail: "g·g⁻¹ != t(g)".into(),
                });
            }
        }
        // s(gh) = s(h), t(gh) = t(g)
        for g in 0..n {
            for h in 0..n {
                let r = self.comp[g * n + h];
                if r == NO_COMP {
                    continue;
                }
                let r = r as usize;
                if self.src[r] != self.src[h] || self.tgt[r] != self.tgt[g] {
                    return Err(GroupoidError::BadSourceTarget {
                        detail: format!(
                            "s/t of `{}`·`{}` = `{}` disagree with s(h), t(g)",
                            self.names[g], self.names[h], self.names[r]
                        ),
                    });
                }
            }
        }
        // associativity on all doubly composable triples
        for g in 0..n {
            for h in 0..n {
                let gh = self.comp[g * n + h];
                if gh == NO_COMP {
                    continue;
                }
                for k in 0..n {
                    let hk = self.comp[h * n + k];
                    if hk == NO_COMP {
                        continue;
                    }
                    let lhs = self.comp[gh as usize * n + k];
                    let rhs = self.comp[g * n + hk as usize];
                    if lhs != rhs {
                        return Err(GroupoidError::NonAssociative {
                            g: self.names[g].clone(),
                            h: self.names[h].clone(),
                            k: self.names[k].clone(),
                            lhs: self.names[lhs as usize].clone(),
                            rhs: self.names[rhs as usize].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Morph> + '_ {
        (0..self.names.len() as u16).map(Morph)
    }

    pub fn objects(&self) -> &[Morph] {
        &self.objects
    }

    pub fn non_identity_count(&self) -> usize {
        self.len() - self.objects.len()
    }

    pub fn name(&self, g: Morph) -> &str {
        &self.names[g.0 as usize]
    }

    pub fn by_name(&self, name: &str) -> Option<Morph> {
        self.index.get(name).copied().map(Morph)
    }

    pub fn is_object(&self, g: Morph) -> bool {
        self.is_object[g.0 as usize]
    }

    pub fn src(&self, g: Morph) -> Morph {
        Morph(self.src[g.0 as usize])
    }

    pub fn tgt(&self, g: Morph) -> Morph {
        Morph(self.tgt[g.0 as usize])
    }

    pub fn inv(&self, g: Morph) -> Morph {
        Morph(self.inv[g.0 as usize])
    }

    /// `g·h`, defined exactly when `s(g) = t(h)`.
    pub fn compose(&self, g: Morph, h: Morph) -> Option<Morph> {
        let r = self.comp[g.0 as usize * self.names.len() + h.0 as usize];
        (r != NO_COMP).then_some(Morph(r))
    }

    /// `g·h` on a pair known to be composable.
    pub fn compose2(&self, g: Morph, h: Morph) -> Morph {
        self.compose(g, h)
            .unwrap_or_else(|| panic!("({}, {}) not composable", self.name(g), self.name(h)))
    }

    /// Hom-set G(x, y): morphisms with source x and target y.
    pub fn hom(&self, x: Morph, y: Morph) -> Vec<Morph> {
        self.morphisms()
            .filter(|&g| self.src(g) == x && self.tgt(g) == y)
            .collect()
    }

    /// Morphisms with source x.
    pub fn with_src(&self, x: Morph) -> Vec<Morph> {
        self.morphisms().filter(|&g| self.src(g) == x).collect()
    }

    /// Morphisms with target x.
    pub fn with_tgt(&self, x: Morph) -> Vec<Morph> {
        self.morphisms().filter(|&g| self.tgt(g) == x).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.objects
            .iter()
            .all(|&x| self.objects.iter().all(|&y| !self.hom(x, y).is_empty()))
    }

    /// The isotropy group G(x) of morphisms with source and target x.
    pub fn isotropy_group(&self, x: Morph) -> Result<IsotropyGroup, GroupoidError> {
        if !self.is_object(x) {
            return Err(GroupoidError::UnknownObject(self.name(x).to_string()));
        }
        let members = self.hom(x, x);
        Ok(IsotropyGroup {
            object: x,
            members,
        })
    }

    /// Decomposes into full connected subgroupoids, ordered by their
    /// smallest object index.
    pub fn connected_components(&self) -> Vec<FiniteGroupoid> {
        let mut seen: Vec<bool> = vec![false; self.objects.len()];
        let mut comps: Vec<Vec<Morph>> = Vec::new();
        for (i, &x) in self.objects.iter().enumerate() {
            if seen[i] {
                continue;
            }
            // objects reachable from x under x ~ y ⟺ G(x, y) ≠ ∅
            let mut cls = Vec::new();
            for (j, &y) in self.objects.iter().enumerate() {
                if !self.hom(x, y).is_empty() {
                    seen[j] = true;
                    cls.push(y);
                }
            }
            comps.push(cls);
        }
        comps.iter().map(|cls| self.full_subgroupoid(cls)).collect()
    }

    /// The full subgroupoid on a subset of objects.
    fn full_subgroupoid(&self, objs: &[Morph]) -> FiniteGroupoid {
        let keep: Vec<Morph> = self
            .morphisms()
            .filter(|&g| objs.contains(&self.src(g)) && objs.contains(&self.tgt(g)))
            .collect();
        self.restricted_to(&keep)
    }

    /// Rebuilds a groupoid on a subset of morphisms that is closed under
    /// composition, inverse, source and target.
    pub fn restricted_to(&self, keep: &[Morph]) -> FiniteGroupoid {
        let mut old_to_new = HashMap::new();
        let mut names = Vec::new();
        for (i, &g) in keep.iter().enumerate() {
            old_to_new.insert(g, i as u16);
            names.push(self.name(g).to_string());
        }
        let n = keep.len();
        let mut is_object = vec![false; n];
        let mut objects = Vec::new();
        let mut src = vec![0u16; n];
        let mut tgt = vec![0u16; n];
        let mut inv = vec![0u16; n];
        let mut comp = vec![NO_COMP; n * n];
        for (i, &g) in keep.iter().enumerate() {
            if self.is_object(g) {
                is_object[i] = true;
                objects.push(Morph(i as u16));
            }
            src[i] = old_to_new[&self.src(g)];
            tgt[i] = old_to_new[&self.tgt(g)];
            inv[i] = old_to_new[&self.inv(g)];
            for (j, &h) in keep.iter().enumerate() {
                if let Some(r) = self.compose(g, h) {
                    comp[i * n + j] = old_to_new[&r];
                }
            }
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u16))
            .collect();
        let out = FiniteGroupoid {
            names,
            index,
            is_object,
            objects,
            src,
            tgt,
            inv,
            comp,
        };
        debug_assert!(out.check_axioms().is_ok());
        out
    }

    /// Serializes back to the raw description form.
    pub fn to_spec(&self) -> GroupoidSpec {
        let n = self.names.len();
        let mut compose = Vec::new();
        for g in 0..n {
            for h in 0..n {
                let r = self.comp[g * n + h];
                if r != NO_COMP {
                    compose.push([
                        self.names[g].clone(),
                        self.names[h].clone(),
                        self.names[r as usize].clone(),
                    ]);
                }
            }
        }
        GroupoidSpec {
            morphisms: self.names.clone(),
            objects: self.objects.iter().map(|&x| self.name(x).to_string()).collect(),
            src: self
                .names
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), self.names[self.src[i] as usize].clone()))
                .collect(),
            tgt: self
                .names
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), self.names[self.tgt[i] as usize].clone()))
                .collect(),
            inv: self
                .names
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), self.names[self.inv[i] as usize].clone()))
                .collect(),
            compose,
        }
    }
}

/// The isotropy group G(x) = S_x ∩ T_x at an object.
#[derive(Debug, Clone)]
pub struct IsotropyGroup {
    object: Morph,
    members: Vec<Morph>,
}

impl IsotropyGroup {
    pub fn object(&self) -> Morph {
        self.object
    }

    pub fn members(&self) -> &[Morph] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always contains the identity
    }

    /// Checks closure under composition and inverse inside the parent.
    pub fn verify(&self, parent: &FiniteGroupoid) -> bool {
        self.members.contains(&self.object)
            && self.members.iter().all(|&g| {
                self.members.contains(&parent.inv(g))
                    && self
                        .members
                        .iter()
                        .all(|&h| self.members.contains(&parent.compose2(g, h)))
            })
    }

    /// Re-exposes the group as a one-object groupoid over the same
    /// morphism names.
    pub fn as_groupoid(&self, parent: &FiniteGroupoid) -> FiniteGroupoid {
        parent.restricted_to(&self.members)
    }
}

/// A transversal `τ(x)`: one morphism `τ_y : x → y` per object `y`,
/// with `τ_x = x`.
#[derive(Debug, Clone)]
pub struct Transversal {
    base: Morph,
    pick: BTreeMap<Morph, Morph>, // object ↦ τ_object
}

impl Transversal {
    /// Builds a transversal at `x`, using `choices` where supplied and
    /// the smallest morphism in `G(x, y)` (input order) elsewhere.
    pub fn new(
        gd: &FiniteGroupoid,
        x: Morph,
        choices: &BTreeMap<Morph, Morph>,
    ) -> Result<Self, GroupoidError> {
        if !gd.is_object(x) {
            return Err(GroupoidError::UnknownObject(gd.name(x).to_string()));
        }
        let mut pick = BTreeMap::new();
        for &y in gd.objects() {
            let hom = gd.hom(x, y);
            if hom.is_empty() {
                return Err(GroupoidError::NotConnected {
                    from: gd.name(x).to_string(),
                    to: gd.name(y).to_string(),
                });
            }
            let tau_y = match choices.get(&y) {
                Some(&c) => {
                    if !hom.contains(&c) {
                        return Err(GroupoidError::BadChoice {
                            object: gd.name(y).to_string(),
                            detail: format!("`{}` is not in G({}, {})", gd.name(c), gd.name(x), gd.name(y)),
                        });
                    }
                    c
                }
                None => {
                    if y == x {
                        x
                    } else {
                        hom[0]
                    }
                }
            };
            if y == x && tau_y != x {
                return Err(GroupoidError::BadChoice {
                    object: gd.name(x).to_string(),
                    detail: "τ at the base object must be the identity".into(),
                });
            }
            pick.insert(y, tau_y);
        }
        Ok(Transversal { base: x, pick })
    }

    pub fn base(&self) -> Morph {
        self.base
    }

    pub fn tau(&self, y: Morph) -> Morph {
        self.pick[&y]
    }

    pub fn entries(&self) -> impl Iterator<Item = (Morph, Morph)> + '_ {
        self.pick.iter().map(|(&y, &t)| (y, t))
    }

    /// The projection `π(g) = τ⁻¹_{t(g)} · g · τ_{s(g)}` into `G(x)`.
    pub fn project(&self, gd: &FiniteGroupoid, g: Morph) -> Morph {
        let right = gd.compose2(g, self.tau(gd.src(g)));
        gd.compose2(gd.inv(self.tau(gd.tgt(g))), right)
    }
}

/// A finite group given by its multiplication table; the seed for
/// [`gamma_groupoid`] and the fuzz generator.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub names: Vec<String>,
    pub mul: Vec<usize>, // n×n
    pub identity: usize,
}

impl FiniteGroup {
    /// The cyclic group of order n, elements "0".."n-1".
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n).map(|i| i.to_string()).collect();
        let mut mul = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = (i + j) % n;
            }
        }
        FiniteGroup {
            names,
            mul,
            identity: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn op(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.len() + j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.len())
            .find(|&j| self.op(i, j) == self.identity)
            .expect("group element without inverse")
    }

    /// Checks the group axioms exhaustively.
    pub fn verify(&self) -> bool {
        let n = self.len();
        if self.mul.len() != n * n || self.identity >= n {
            return false;
        }
        if self.mul.iter().any(|&v| v >= n) {
            return false;
        }
        for i in 0..n {
            if self.op(self.identity, i) != i || self.op(i, self.identity) != i {
                return false;
            }
            if !(0..n).any(|j| self.op(i, j) == self.identity && self.op(j, i) == self.identity) {
                return false;
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.op(self.op(i, j), k) != self.op(i, self.op(j, k)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The pair groupoid on a set: morphisms are ordered pairs `(y, z)`
/// with `s(y,z) = y`, `t(y,z) = z` and `(y,z)(r,y) = (r,z)`.
pub fn pair_groupoid(objects: &[String]) -> Result<FiniteGroupoid, GroupoidError> {
    if objects.is_empty() {
        return Err(GroupoidError::EmptyObjectSet);
    }
    let m = objects.len();
    let pname = |y: usize, z: usize| format!("({},{})", objects[y], objects[z]);
    let mut spec = GroupoidSpec {
        morphisms: Vec::new(),
        objects: (0..m).map(|y| pname(y, y)).collect(),
        src: BTreeMap::new(),
        tgt: BTreeMap::new(),
        inv: BTreeMap::new(),
        compose: Vec::new(),
    };
    for y in 0..m {
        for z in 0..m {
            let nm = pname(y, z);
            spec.src.insert(nm.clone(), pname(y, y));
            spec.tgt.insert(nm.clone(), pname(z, z));
            spec.inv.insert(nm.clone(), pname(z, y));
            spec.morphisms.push(nm);
        }
    }
    for y in 0..m {
        for z in 0..m {
            for r in 0..m {
                spec.compose.push([pname(y, z), pname(r, y), pname(r, z)]);
            }
        }
    }
    FiniteGroupoid::validate_capped(&spec, usize::MAX >> 1)
}

/// The connected groupoid with objects `1..=m` and morphisms `(g,i,j)`
/// over a finite group: `s(g,i,j) = j`, `t(g,i,j) = i`, and
/// `(g,i,j)(h,j,k) = (gh,i,k)`.
pub fn gamma_groupoid(
    group: &FiniteGroup,
    m: usize,
    i0: usize,
) -> Result<FiniteGroupoid, GroupoidError> {
    if i0 < 1 || i0 > m {
        return Err(GroupoidError::BadIndex { i0, m });
    }
    assert!(group.verify(), "input group table is not a group");
    let e = group.identity;
    let nm = |g: usize, i: usize, j: usize| format!("({},{},{})", group.names[g], i, j);
    let mut spec = GroupoidSpec {
        morphisms: Vec::new(),
        objects: (1..=m).map(|i| nm(e, i, i)).collect(),
        src: BTreeMap::new(),
        tgt: BTreeMap::new(),
        inv: BTreeMap::new(),
        compose: Vec::new(),
    };
    for g in 0..group.len() {
        for i in 1..=m {
            for j in 1..=m {
                let name = nm(g, i, j);
                spec.src.insert(name.clone(), nm(e, j, j));
                spec.tgt.insert(name.clone(), nm(e, i, i));
                spec.inv.insert(name.clone(), nm(group.inverse(g), j, i));
                spec.morphisms.push(name);
            }
        }
    }
    for g in 0..group.len() {
        for h in 0..group.len() {
            for i in 1..=m {
                for j in 1..=m {
                    for k in 1..=m {
                        spec.compose
                            .push([nm(g, i, j), nm(h, j, k), nm(group.op(g, h), i, k)]);
                    }
                }
            }
        }
    }
    FiniteGroupoid::validate_capped(&spec, usize::MAX >> 1)
}

/// Base-change data for a transversal `τ(x)`: the group isomorphism
/// `φ : G(z) → G(x)`, `l ↦ τ_z⁻¹ l τ_z`.
pub fn conjugation_iso<'a>(
    gd: &'a FiniteGroupoid,
    tau: &'a Transversal,
    z: Morph,
) -> impl Fn(Morph) -> Morph + 'a {
    let tz = tau.tau(z);
    let tz_inv = gd.inv(tz);
    move |l: Morph| gd.compose2(gd.compose2(tz_inv, l), tz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::two_object_groupoid_spec;

    fn hex() -> FiniteGroupoid {
        FiniteGroupoid::validate(&two_object_groupoid_spec()).unwrap()
    }

    #[test]
    fn two_object_groupoid_validates() {
        let gd = hex();
        assert_eq!(gd.objects().len(), 2);
        assert_eq!(gd.non_identity_count(), 6);
        assert!(gd.is_connected());
    }

    #[test]
    fn discrete_groupoid_validates() {
        // objects only, no non-identity morphisms
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
        let gd = FiniteGroupoid::validate(&spec).unwrap();
        assert_eq!(gd.len(), 2);
        assert!(!gd.is_connected());
        assert_eq!(gd.connected_components().len(), 2);
        let iso = gd.isotropy_group(gd.by_name("x").unwrap()).unwrap();
        assert_eq!(iso.len(), 1);
    }

    #[test]
    fn corrupted_composite_is_rejected() {
        // redefining l·g as h breaks the target bookkeeping
        let mut spec = two_object_groupoid_spec();
        for entry in &mut spec.compose {
            if entry[0] == "l" && entry[1] == "g" {
                entry[2] = "h".into();
            }
        }
        match FiniteGroupoid::validate(&spec) {
            Err(GroupoidError::BadSourceTarget { .. }) | Err(GroupoidError::NonAssociative { .. }) => {}
            other => panic!("expected a structural error, got {other:?}"),
        }
    }

    #[test]
    fn isotropy_group_of_two_object_groupoid() {
        let gd = hex();
        let x = gd.by_name("x").unwrap();
        let iso = gd.isotropy_group(x).unwrap();
        let names: Vec<&str> = iso.members().iter().map(|&g| gd.name(g)).collect();
        assert_eq!(names, vec!["x", "g"]);
        assert!(iso.verify(&gd));
        // ℤ₂: g·g = x
        let g = gd.by_name("g").unwrap();
        assert_eq!(gd.compose2(g, g), x);
    }

    #[test]
    fn transversal_and_projection() {
        let gd = hex();
        let x = gd.by_name("x").unwrap();
        let y = gd.by_name("y").unwrap();
        let l = gd.by_name("l").unwrap();
        let g = gd.by_name("g").unwrap();
        let tau = Transversal::new(&gd, x, &BTreeMap::from([(y, l)])).unwrap();
        assert_eq!(tau.tau(x), x);
        assert_eq!(tau.tau(y), l);

        // π values with τ(x) = {x, l}
        let pi = |name: &str| tau.project(&gd, gd.by_name(name).unwrap());
        assert_eq!(pi("g"), g);
        assert_eq!(pi("h"), g);
        assert_eq!(pi("m"), g);
        assert_eq!(pi("m'"), g);
        assert_eq!(pi("l"), x);
        assert_eq!(pi("l'"), x);
        assert_eq!(pi("x"), x);
        assert_eq!(pi("y"), x);

        // π is a groupoid morphism: π(gh) = π(g)π(h) on every composable pair
        for a in gd.morphisms() {
            for b in gd.morphisms() {
                if let Some(ab) = gd.compose(a, b) {
                    assert_eq!(
                        tau.project(&gd, ab),
                        gd.compose2(tau.project(&gd, a), tau.project(&gd, b))
                    );
                }
            }
        }
        // π fixes G(x) pointwise and collapses τ(x) to x
        for h in gd.isotropy_group(x).unwrap().members() {
            assert_eq!(tau.project(&gd, *h), *h);
        }
        for (_, t) in tau.entries() {
            assert_eq!(tau.project(&gd, t), x);
        }
    }

    #[test]
    fn alternative_transversal() {
        let gd = hex();
        let x = gd.by_name("x").unwrap();
        let y = gd.by_name("y").unwrap();
        let m = gd.by_name("m").unwrap();
        let lam = Transversal::new(&gd, x, &BTreeMap::from([(y, m)])).unwrap();
        assert_eq!(lam.tau(y), m);
        // bad choice: g is not in G(x, y)
        let g = gd.by_name("g").unwrap();
        assert!(matches!(
            Transversal::new(&gd, x, &BTreeMap::from([(y, g)])),
            Err(GroupoidError::BadChoice { .. })
        ));
    }

    #[test]
    fn pair_groupoid_axioms() {
        let gd = pair_groupoid(&["1".into()]).unwrap();
        assert_eq!(gd.len(), 1);

        let gd = pair_groupoid(&["1".into(), "2".into(), "3".into()]).unwrap();
        assert_eq!(gd.len(), 9);
        assert!(gd.is_connected());
        assert_eq!(gd.connected_components().len(), 1);
        // every hom-set is a singleton
        for x in gd.objects() {
            for y in gd.objects() {
                assert_eq!(gd.hom(*x, *y).len(), 1);
            }
        }
        assert!(matches!(
            pair_groupoid(&[]),
            Err(GroupoidError::EmptyObjectSet)
        ));
    }

    #[test]
    fn gamma_groupoid_shapes() {
        // one object: the group itself
        let z2 = FiniteGroup::cyclic(2);
        let gd = gamma_groupoid(&z2, 1, 1).unwrap();
        assert_eq!(gd.len(), 2);
        assert_eq!(gd.objects().len(), 1);

        // |G|·m² morphisms
        let gd = gamma_groupoid(&z2, 2, 1).unwrap();
        assert_eq!(gd.len(), 8);
        assert_eq!(gd.objects().len(), 2);
        assert!(gd.is_connected());
        let i0 = gd.by_name("(0,1,1)").unwrap();
        let iso = gd.isotropy_group(i0).unwrap();
        assert_eq!(iso.len(), 2);

        // trivial group: collapses to the pair groupoid composition rule
        let triv = FiniteGroup::cyclic(1);
        let gd = gamma_groupoid(&triv, 2, 1).unwrap();
        assert_eq!(gd.len(), 4);
        for x in gd.objects() {
            for y in gd.objects() {
                assert_eq!(gd.hom(*x, *y).len(), 1);
            }
        }

        assert!(matches!(
            gamma_groupoid(&z2, 2, 3),
            Err(GroupoidError::BadIndex { .. })
        ));
    }

    #[test]
    fn components_partition_a_disjoint_union() {
        // two-object connected groupoid ⊔ a one-object discrete groupoid
        let mut spec = two_object_groupoid_spec();
        spec.morphisms.push("w".into());
        spec.objects.push("w".into());
        spec.src.insert("w".into(), "w".into());
        spec.tgt.insert("w".into(), "w".into());
        spec.inv.insert("w".into(), "w".into());
        spec.compose.push(["w".into(), "w".into(), "w".into()]);
        let gd = FiniteGroupoid::validate(&spec).unwrap();
        let comps = gd.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].len(), 8);
        assert_eq!(comps[1].len(), 1);
        // the union of the component morphism sets is the whole groupoid
        let total: usize = comps.iter().map(|c| c.len()).sum();
        assert_eq!(total, gd.len());
        let mut all: Vec<String> = comps
            .iter()
            .flat_map(|c| c.morphisms().map(|g| c.name(g).to_string()).collect::<Vec<_>>())
            .collect();
        all.sort();
        let mut orig: Vec<String> = gd.morphisms().map(|g| gd.name(g).to_string()).collect();
        orig.sort();
        assert_eq!(all, orig);
    }
}
