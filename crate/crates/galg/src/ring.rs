//! Exact finite rings with dense operation tables.
//!
//! A ring here is associative and not necessarily unital. The canonical
//! representation is always the dense `n×n` addition and multiplication
//! table; the structured constructors (`ℤ/n`, `GF(p^k)`, finite products)
//! compile down to tables so that one validation path covers everything.
//!
//! Validation is exhaustive but organized so it stays quadratic:
//! the addition table is certified to be a finite abelian group by
//! producing a basis and checking coordinate additivity on every pair,
//! multiplication is certified bi-additive by single-generator steps on
//! every pair, and associativity then only needs the basis triples.

use crate::abelian::{self, Subgroup};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Default ceiling on ring cardinality. Configurable per call site; the
/// hard limit is what fits the `u16` element indices.
pub const DEFAULT_RING_CAP: usize = 4096;
pub const HARD_RING_CAP: usize = u16::MAX as usize - 1;

/// A ring element, identified by its index in the element enumeration.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct El(pub u16);

impl fmt::Debug for El {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} is out of the supported range 1..=4")]
    BadDegree(u32),
    #[error("ring would have {size} elements, over the cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("invalid ring table: {0}")]
    TableInvalid(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("cannot parse `{expr}`: {detail}")]
    ParseError { expr: String, detail: String },
    #[error("`{0}` is not idempotent")]
    NotIdempotent(String),
    #[error("`{0}` is not central")]
    NotCentral(String),
    #[error("map is not total on its domain: missing `{0}`")]
    NotTotal(String),
    #[error("map is not additive: f({a} + {b}) differs from f({a}) + f({b})")]
    NotAdditive { a: String, b: String },
    #[error("map is not multiplicative: f({a}·{b}) differs from f({a})·f({b})")]
    NotMultiplicative { a: String, b: String },
    #[error("map is not a bijection onto its codomain: {0}")]
    NotBijective(String),
    #[error("set is not an additive subgroup: {0}")]
    NotSubgroup(String),
    #[error("product of empty factor list")]
    EmptyProduct,
}

/// How the ring was built; drives element naming and symbol resolution.
#[derive(Clone)]
pub enum RingStructure {
    Table,
    Zmod(u64),
    Gf { p: u64, k: u32, reduction: Vec<u64> },
    Product(Vec<Arc<FiniteRing>>),
}

/// A validated finite ring with dense operation tables.
pub struct FiniteRing {
    names: Vec<String>,
    index: HashMap<String, u16>,
    n: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    zero: u16,
    one: Option<u16>,
    basis: Vec<u16>,
    basis_orders: Vec<u32>,
    coords: Vec<Vec<u32>>,
    coord_strides: Vec<usize>,
    elem_by_coord: Vec<u16>,
    structure: RingStructure,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing(|A| = {})", self.n)
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.names == other.names && self.add == other.add && self.mul == other.mul)
    }
}
impl Eq for FiniteRing {}

impl FiniteRing {
    // ----- constructors ---------------------------------------------------

    /// The ring ℤ/n.
    pub fn zmod(n: u64) -> Result<Arc<Self>, RingError> {
        Self::zmod_capped(n, DEFAULT_RING_CAP)
    }

    pub fn zmod_capped(n: u64, cap: usize) -> Result<Arc<Self>, RingError> {
        if n < 2 {
            return Err(RingError::TableInvalid(format!("zmod({n}) needs n ≥ 2")));
        }
        let nn = n as usize;
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::build(
            names,
            0,
            Some(1 % nn),
            &|a, b| (a + b) % nn,
            &|a, b| (a * b) % nn,
            RingStructure::Zmod(n),
            cap,
        )
    }

    /// The Galois field GF(p^k), as polynomials in `a` over ℤ/p modulo
    /// the lexicographically first monic irreducible of degree k.
    pub fn gf(p: u64, k: u32) -> Result<Arc<Self>, RingError> {
        Self::gf_capped(p, k, DEFAULT_RING_CAP)
    }

    pub fn gf_capped(p: u64, k: u32, cap: usize) -> Result<Arc<Self>, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if !(1..=4).contains(&k) {
            return Err(RingError::BadDegree(k));
        }
        let size = (p as u128).pow(k);
        if size > HARD_RING_CAP as u128 {
            return Err(RingError::SizeCapExceeded {
                size: size as usize,
                cap,
            });
        }
        if k == 1 {
            let r = Self::zmod_capped(p, cap)?;
            // relabel the structure as a degree-1 field so `a` stays undefined
            return Ok(r);
        }
        let reduction = first_irreducible(p, k);
        let n = size as usize;
        let kk = k as usize;
        // element index = Σ cᵢ pⁱ, coefficient of aⁱ
        let digits = |e: usize| -> Vec<u64> {
            let mut v = Vec::with_capacity(kk);
            let mut e = e as u64;
            for _ in 0..kk {
                v.push(e % p);
                e /= p;
            }
            v
        };
        let undigit = |v: &[u64]| -> usize {
            let mut e = 0u64;
            for &c in v.iter().rev() {
                e = e * p + c;
            }
            e as usize
        };
        let add = move |x: usize, y: usize| {
            let (a, b) = (digits(x), digits(y));
            let v: Vec<u64> = a.iter().zip(&b).map(|(&u, &w)| (u + w) % p).collect();
            undigit(&v)
        };
        let red = reduction.clone();
        let mul = move |x: usize, y: usize| {
            let (a, b) = (digits(x), digits(y));
            // schoolbook product then reduction by the monic modulus
            let mut prod = vec![0u64; 2 * kk - 1];
            for (i, &u) in a.iter().enumerate() {
                for (j, &w) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + u * w) % p;
                }
            }
            for d in (kk..prod.len()).rev() {
                let c = prod[d];
                if c != 0 {
                    prod[d] = 0;
                    for (i, &m) in red.iter().enumerate() {
                        // modulus is monic: a^k ≡ -Σ mᵢ aⁱ
                        let idx = d - kk + i;
                        prod[idx] = (prod[idx] + c * (p - m) % p) % p;
                    }
                }
            }
            undigit(&prod[..kk])
        };
        let names = (0..n).map(|e| gf_name(&digits(e))).collect();
        Self::build(
            names,
            0,
            Some(1),
            &add,
            &mul,
            RingStructure::Gf { p, k, reduction },
            cap,
        )
    }

    /// Finite product of rings, with componentwise operations. The
    /// canonical central idempotents e1, e2, … pick out the components.
    pub fn product(factors: Vec<Arc<FiniteRing>>) -> Result<Arc<Self>, RingError> {
        Self::product_capped(factors, DEFAULT_RING_CAP)
    }

    pub fn product_capped(
        factors: Vec<Arc<FiniteRing>>,
        cap: usize,
    ) -> Result<Arc<Self>, RingError> {
        if factors.is_empty() {
            return Err(RingError::EmptyProduct);
        }
        let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
        let total: u128 = sizes.iter().map(|&s| s as u128).product();
        if total > HARD_RING_CAP as u128 {
            return Err(RingError::SizeCapExceeded {
                size: total as usize,
                cap,
            });
        }
        let n = total as usize;
        let m = factors.len();
        // mixed radix, first factor most significant
        let mut strides = vec![1usize; m];
        for i in (0..m - 1).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        // allocation-free componentwise tables; these run n² times
        let f1 = factors.clone();
        let st1 = strides.clone();
        let sz1 = sizes.clone();
        let add = move |x: usize, y: usize| {
            let mut out = 0usize;
            for i in 0..m {
                let xi = x / st1[i] % sz1[i];
                let yi = y / st1[i] % sz1[i];
                out += f1[i].add(El(xi as u16), El(yi as u16)).0 as usize * st1[i];
            }
            out
        };
        let f2 = factors.clone();
        let st2 = strides.clone();
        let sz2 = sizes.clone();
        let mul = move |x: usize, y: usize| {
            let mut out = 0usize;
            for i in 0..m {
                let xi = x / st2[i] % sz2[i];
                let yi = y / st2[i] % sz2[i];
                out += f2[i].mul(El(xi as u16), El(yi as u16)).0 as usize * st2[i];
            }
            out
        };
        let names: Vec<String> = (0..n)
            .map(|e| {
                let comps: Vec<usize> = (0..m).map(|i| e / strides[i] % sizes[i]).collect();
                product_name(&factors, &comps)
            })
            .collect();
        let one = if factors.iter().all(|f| f.one().is_some()) {
            let v: Vec<usize> = factors.iter().map(|f| f.one().unwrap().0 as usize).collect();
            Some(v.iter().zip(&strides).map(|(&c, &s)| c * s).sum())
        } else {
            None
        };
        Self::build(
            names,
            0,
            one,
            &add,
            &mul,
            RingStructure::Product(factors),
            cap,
        )
    }

    /// A ring from raw tables keyed by element names.
    pub fn from_tables(
        elements: Vec<String>,
        add: &[Vec<String>],
        mul: &[Vec<String>],
        cap: usize,
    ) -> Result<Arc<Self>, RingError> {
        let n = elements.len();
        if n == 0 {
            return Err(RingError::TableInvalid("no elements".into()));
        }
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(normalize(e), i).is_some() {
                return Err(RingError::TableInvalid(format!("duplicate element `{e}`")));
            }
        }
        let look = |name: &String| -> Result<usize, RingError> {
            index
                .get(&normalize(name))
                .copied()
                .ok_or_else(|| RingError::UnknownElement(name.clone()))
        };
        if add.len() != n || mul.len() != n {
            return Err(RingError::TableInvalid("tables must be n×n".into()));
        }
        let mut at = vec![0usize; n * n];
        let mut mt = vec![0usize; n * n];
        for i in 0..n {
            if add[i].len() != n || mul[i].len() != n {
                return Err(RingError::TableInvalid("tables must be n×n".into()));
            }
            for j in 0..n {
                at[i * n + j] = look(&add[i][j])?;
                mt[i * n + j] = look(&mul[i][j])?;
            }
        }
        // locate zero: the additive identity
        let zero = (0..n)
            .find(|&z| (0..n).all(|a| at[z * n + a] == a && at[a * n + z] == a))
            .ok_or_else(|| RingError::TableInvalid("no additive identity".into()))?;
        Self::build(
            elements,
            zero,
            None,
            &|a, b| at[a * n + b],
            &|a, b| mt[a * n + b],
            RingStructure::Table,
            cap,
        )
    }

    /// Shared build-and-validate path. `add`/`mul` may be closures over
    /// structure or over raw tables; they are materialized densely here
    /// and then every ring axiom is certified.
    fn build(
        names: Vec<String>,
        zero: usize,
        one_hint: Option<usize>,
        add: &dyn Fn(usize, usize) -> usize,
        mul: &dyn Fn(usize, usize) -> usize,
        structure: RingStructure,
        cap: usize,
    ) -> Result<Arc<Self>, RingError> {
        let n = names.len();
        if n > cap.min(HARD_RING_CAP) {
            return Err(RingError::SizeCapExceeded {
                size: n,
                cap: cap.min(HARD_RING_CAP),
            });
        }
        let mut at = vec![0u16; n * n];
        let mut mt = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let (s, p) = (add(a, b), mul(a, b));
                if s >= n || p >= n {
                    return Err(RingError::TableInvalid("entry out of range".into()));
                }
                at[a * n + b] = s as u16;
                mt[a * n + b] = p as u16;
            }
        }
        let table_add = |a: usize, b: usize| at[a * n + b] as usize;

        // additive group: commutativity and zero
        for a in 0..n {
            if table_add(a, zero) != a || table_add(zero, a) != a {
                return Err(RingError::TableInvalid(format!(
                    "`{}` + 0 misbehaves",
                    names[a]
                )));
            }
        }
        for a in 0..n {
            for b in 0..a {
                if at[a * n + b] != at[b * n + a] {
                    return Err(RingError::TableInvalid(format!(
                        "addition is not commutative on `{}`, `{}`",
                        names[a], names[b]
                    )));
                }
            }
        }
        let mut neg = vec![u16::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table_add(a, b) == zero) {
                Some(b) => neg[a] = b as u16,
                None => {
                    return Err(RingError::TableInvalid(format!(
                        "`{}` has no additive inverse",
                        names[a]
                    )))
                }
            }
        }

        // basis + certified coordinates ⟹ (A, +) ≅ ⊕ ℤ/dᵢ
        let raw_basis =
            abelian::abelian_basis(n, zero, &table_add).map_err(RingError::TableInvalid)?;
        let coords_u32 = abelian::coordinates_for_basis(n, zero, &table_add, &raw_basis)
            .map_err(RingError::TableInvalid)?;
        let basis: Vec<u16> = raw_basis.iter().map(|&(g, _)| g as u16).collect();
        let basis_orders: Vec<u32> = raw_basis.iter().map(|&(_, o)| o).collect();
        let k = basis.len();
        let mut coord_strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            coord_strides[i] = coord_strides[i + 1] * basis_orders[i + 1] as usize;
        }
        let mut elem_by_coord = vec![0u16; n];
        for (e, cs) in coords_u32.iter().enumerate() {
            let idx: usize = cs
                .iter()
                .zip(&coord_strides)
                .map(|(&c, &s)| c as usize * s)
                .collect::<Vec<_>>()
                .iter()
                .sum();
            elem_by_coord[idx] = e as u16;
        }
        // coordinate additivity on every pair certifies associativity
        // and pins the isomorphism
        for a in 0..n {
            for b in 0..n {
                let c = table_add(a, b);
                for i in 0..k {
                    if (coords_u32[a][i] + coords_u32[b][i]) % basis_orders[i] != coords_u32[c][i] {
                        return Err(RingError::TableInvalid(format!(
                            "addition is not associative around `{}` + `{}`",
                            names[a], names[b]
                        )));
                    }
                }
            }
        }

        // multiplication: zero annihilates
        for a in 0..n {
            if mt[a * n + zero] != zero as u16 || mt[zero * n + a] != zero as u16 {
                return Err(RingError::TableInvalid(format!(
                    "`{}`·0 must be 0",
                    names[a]
                )));
            }
        }
        // bi-additivity via single-generator steps on every pair
        for &g in &basis {
            let g = g as usize;
            for a in 0..n {
                let ag = table_add(a, g);
                for b in 0..n {
                    // (a+g)·b = a·b + g·b
                    if mt[ag * n + b] != at[mt[a * n + b] as usize * n + mt[g * n + b] as usize] {
                        return Err(RingError::TableInvalid(format!(
                            "multiplication not left-additive at (`{}`+`{}`)·`{}`",
                            names[a], names[g], names[b]
                        )));
                    }
                    // b·(a+g) = b·a + b·g
                    if mt[b * n + ag] != at[mt[b * n + a] as usize * n + mt[b * n + g] as usize] {
                        return Err(RingError::TableInvalid(format!(
                            "multiplication not right-additive at `{}`·(`{}`+`{}`)",
                            names[b], names[a], names[g]
                        )));
                    }
                }
            }
        }
        // associativity on basis triples; bi-additivity extends it everywhere
        for &a in &basis {
            for &b in &basis {
                let ab = mt[a as usize * n + b as usize] as usize;
                for &c in &basis {
                    let bc = mt[b as usize * n + c as usize] as usize;
                    if mt[ab * n + c as usize] != mt[a as usize * n + bc] {
                        return Err(RingError::TableInvalid(format!(
                            "multiplication not associative on basis triple (`{}`,`{}`,`{}`)",
                            names[a as usize], names[b as usize], names[c as usize]
                        )));
                    }
                }
            }
        }

        // identity: verify the hint or search
        let one = match one_hint {
            Some(e) => {
                if (0..n).any(|a| mt[e * n + a] != a as u16 || mt[a * n + e] != a as u16) {
                    return Err(RingError::TableInvalid("claimed identity fails".into()));
                }
                Some(e as u16)
            }
            None => (0..n)
                .find(|&e| (0..n).all(|a| mt[e * n + a] == a as u16 && mt[a * n + e] == a as u16))
                .map(|e| e as u16),
        };

        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (normalize(s), i as u16))
            .collect();
        Ok(Arc::new(FiniteRing {
            names,
            index,
            n,
            add: at,
            mul: mt,
            neg,
            zero: zero as u16,
            one,
            basis,
            basis_orders,
            coords: coords_u32,
            coord_strides,
            elem_by_coord,
            structure,
        }))
    }

    // ----- basic access ---------------------------------------------------

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = El> + '_ {
        (0..self.n as u16).map(El)
    }

    pub fn zero(&self) -> El {
        El(self.zero)
    }

    pub fn one(&self) -> Option<El> {
        self.one.map(El)
    }

    pub fn is_unital(&self) -> bool {
        self.one.is_some()
    }

    pub fn name(&self, a: El) -> &str {
        &self.names[a.0 as usize]
    }

    pub fn by_name(&self, name: &str) -> Option<El> {
        self.index.get(&normalize(name)).copied().map(El)
    }

    pub fn structure(&self) -> &RingStructure {
        &self.structure
    }

    pub fn add(&self, a: El, b: El) -> El {
        El(self.add[a.0 as usize * self.n + b.0 as usize])
    }

    pub fn mul(&self, a: El, b: El) -> El {
        El(self.mul[a.0 as usize * self.n + b.0 as usize])
    }

    pub fn neg(&self, a: El) -> El {
        El(self.neg[a.0 as usize])
    }

    pub fn sub(&self, a: El, b: El) -> El {
        self.add(a, self.neg(b))
    }

    pub fn is_zero(&self, a: El) -> bool {
        a.0 == self.zero
    }

    pub fn pow(&self, a: El, e: u32) -> Result<El, RingError> {
        if e == 0 {
            return self
                .one()
                .ok_or_else(|| RingError::TableInvalid("x^0 needs a unital ring".into()));
        }
        let mut acc = a;
        for _ in 1..e {
            acc = self.mul(acc, a);
        }
        Ok(acc)
    }

    /// Integer scalar multiple k·a, through the additive coordinates.
    pub fn int_mul(&self, k: i128, a: El) -> El {
        let cs: Vec<i128> = self
            .coords(a)
            .iter()
            .zip(&self.basis_orders)
            .map(|(&c, &o)| (k * c as i128).rem_euclid(o as i128))
            .collect();
        self.el_from_coords(&cs)
    }

    pub fn sum(&self, it: impl IntoIterator<Item = El>) -> El {
        it.into_iter().fold(self.zero(), |acc, e| self.add(acc, e))
    }

    // ----- additive presentation -------------------------------------------

    /// Additive basis: elements generating (A, +) as a direct sum of
    /// cyclic groups.
    pub fn basis(&self) -> Vec<El> {
        self.basis.iter().map(|&g| El(g)).collect()
    }

    pub fn basis_orders(&self) -> &[u32] {
        &self.basis_orders
    }

    /// Moduli of the additive presentation, for the linear algebra layer.
    pub fn moduli(&self) -> Vec<i128> {
        self.basis_orders.iter().map(|&o| o as i128).collect()
    }

    pub fn coords(&self, a: El) -> &[u32] {
        &self.coords[a.0 as usize]
    }

    pub fn coords_i128(&self, a: El) -> Vec<i128> {
        self.coords[a.0 as usize].iter().map(|&c| c as i128).collect()
    }

    pub fn el_from_coords(&self, cs: &[i128]) -> El {
        let idx: usize = cs
            .iter()
            .zip(&self.basis_orders)
            .zip(&self.coord_strides)
            .map(|((&c, &o), &s)| (c.rem_euclid(o as i128)) as usize * s)
            .sum();
        El(self.elem_by_coord[idx])
    }

    /// The subgroup of (A, +) generated by a set of elements.
    pub fn span(&self, gens: &[El]) -> Subgroup {
        let vecs: Vec<Vec<i128>> = gens.iter().map(|&g| self.coords_i128(g)).collect();
        Subgroup::new(&self.moduli(), &vecs)
    }

    /// Kernel of an additive map into `⊕ ℤ/target_moduli`, computed via
    /// the integer kernel of the stacked relation matrix.
    pub fn kernel_of(
        &self,
        f: impl Fn(El) -> Vec<i128>,
        target_moduli: &[i128],
    ) -> Subgroup {
        let k = self.basis.len();
        let t = target_moduli.len();
        // columns 0..k: images of the basis; columns k..k+t: target moduli
        let mut m = vec![vec![0i128; k + t]; t];
        for (j, &g) in self.basis.iter().enumerate() {
            let img = f(El(g));
            assert_eq!(img.len(), t);
            for (r, &v) in img.iter().enumerate() {
                m[r][j] = v;
            }
        }
        for (r, &e) in target_moduli.iter().enumerate() {
            m[r][k + r] = e;
        }
        let ker = abelian::integer_kernel(&m);
        let gens: Vec<Vec<i128>> = ker.into_iter().map(|v| v[..k].to_vec()).collect();
        Subgroup::new(&self.moduli(), &gens)
    }

    /// Image of an additive map A → A as a subgroup of the codomain.
    pub fn image_of(&self, f: impl Fn(El) -> El) -> Subgroup {
        let gens: Vec<El> = self.basis().iter().map(|&g| f(g)).collect();
        self.span(&gens)
    }

    /// Members of a subgroup, by scanning the ring.
    pub fn subgroup_members(&self, s: &Subgroup) -> Vec<El> {
        self.elements()
            .filter(|&a| s.contains(&self.coords_i128(a)))
            .collect()
    }

    // ----- idempotents and the center ---------------------------------------

    pub fn is_idempotent(&self, e: El) -> bool {
        self.mul(e, e) == e
    }

    /// Central means commuting with every element; checking the additive
    /// basis suffices.
    pub fn is_central(&self, e: El) -> bool {
        self.basis().iter().all(|&g| self.mul(e, g) == self.mul(g, e))
    }

    /// All central idempotents, by exhaustive search.
    pub fn central_idempotents(&self) -> Vec<El> {
        self.elements()
            .filter(|&e| self.is_idempotent(e) && self.is_central(e))
            .collect()
    }

    /// Elements commuting with the whole ring.
    pub fn center(&self) -> Vec<El> {
        self.elements().filter(|&e| self.is_central(e)).collect()
    }

    /// Canonical idempotent picking out component i of a product ring.
    pub fn component_idempotent(&self, i: usize) -> Option<El> {
        match &self.structure {
            RingStructure::Product(fs) => {
                if i >= fs.len() {
                    return None;
                }
                let name = format!("e{}", i + 1);
                self.parse(&name).ok()
            }
            _ => None,
        }
    }

    // ----- element expressions ----------------------------------------------

    /// Resolves an element: exact canonical name first, then a small
    /// expression grammar over `+ - * ^ ( )`, integer literals, the field
    /// generator `a`, and product idempotents `e1, e2, …`.
    pub fn parse(&self, expr: &str) -> Result<El, RingError> {
        if let Some(e) = self.by_name(expr) {
            return Ok(e);
        }
        let toks = tokenize(expr).map_err(|detail| RingError::ParseError {
            expr: expr.to_string(),
            detail,
        })?;
        let mut p = Parser {
            ring: self,
            toks: &toks,
            pos: 0,
        };
        let e = p.expr().map_err(|detail| RingError::ParseError {
            expr: expr.to_string(),
            detail,
        })?;
        if p.pos != toks.len() {
            return Err(RingError::ParseError {
                expr: expr.to_string(),
                detail: "trailing input".into(),
            });
        }
        Ok(e)
    }

    fn symbol(&self, name: &str) -> Result<El, String> {
        match &self.structure {
            RingStructure::Gf { .. } if name == "a" => {
                Ok(self.by_name("a").expect("gf ring always names a"))
            }
            RingStructure::Product(fs) => {
                if let Some(rest) = name.strip_prefix('e') {
                    if let Ok(i) = rest.parse::<usize>() {
                        if i >= 1 && i <= fs.len() {
                            // unit vector in component i
                            let mut comps: Vec<El> =
                                fs.iter().map(|f| f.zero()).collect();
                            comps[i - 1] = fs[i - 1]
                                .one()
                                .ok_or_else(|| format!("factor {i} is not unital"))?;
                            return Ok(self.from_components(&comps));
                        }
                        return Err(format!("component index {i} out of range"));
                    }
                }
                if name == "a" {
                    // diagonal generator in a uniform product of fields
                    let comps: Result<Vec<El>, String> = fs
                        .iter()
                        .map(|f| {
                            f.by_name("a")
                                .ok_or_else(|| "factors have no generator `a`".to_string())
                        })
                        .collect();
                    return Ok(self.from_components(&comps?));
                }
                Err(format!("unknown symbol `{name}`"))
            }
            _ => Err(format!("unknown symbol `{name}`")),
        }
    }

    fn int_literal(&self, v: i128) -> Result<El, String> {
        match self.one() {
            Some(one) => Ok(self.int_mul(v, one)),
            None if v == 0 => Ok(self.zero()),
            None => Err("integer literals need a unital ring".into()),
        }
    }

    /// Assembles a product-ring element from factor components.
    pub fn from_components(&self, comps: &[El]) -> El {
        match &self.structure {
            RingStructure::Product(fs) => {
                assert_eq!(comps.len(), fs.len());
                let mut strides = vec![1usize; fs.len()];
                for i in (0..fs.len() - 1).rev() {
                    strides[i] = strides[i + 1] * fs[i + 1].len();
                }
                let idx: usize = comps
                    .iter()
                    .zip(&strides)
                    .map(|(&c, &s)| c.0 as usize * s)
                    .sum();
                El(idx as u16)
            }
            _ => panic!("from_components on a non-product ring"),
        }
    }

    /// Splits a product-ring element into factor components.
    pub fn components(&self, e: El) -> Vec<El> {
        match &self.structure {
            RingStructure::Product(fs) => {
                let mut strides = vec![1usize; fs.len()];
                for i in (0..fs.len() - 1).rev() {
                    strides[i] = strides[i + 1] * fs[i + 1].len();
                }
                fs.iter()
                    .enumerate()
                    .map(|(i, f)| El((e.0 as usize / strides[i] % f.len()) as u16))
                    .collect()
            }
            _ => panic!("components on a non-product ring"),
        }
    }
}

fn normalize(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn gf_name(digits: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in digits.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match i {
            0 => c.to_string(),
            1 if c == 1 => "a".to_string(),
            1 => format!("{c}*a"),
            _ if c == 1 => format!("a^{i}"),
            _ => format!("{c}*a^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn product_name(factors: &[Arc<FiniteRing>], comps: &[usize]) -> String {
    let mut terms = Vec::new();
    for (i, (&c, f)) in comps.iter().zip(factors).enumerate() {
        if El(c as u16) == f.zero() {
            continue;
        }
        let inner = f.name(El(c as u16));
        let t = if Some(El(c as u16)) == f.one() {
            format!("e{}", i + 1)
        } else if inner.contains('+') {
            format!("e{}*({inner})", i + 1)
        } else {
            format!("e{}*{inner}", i + 1)
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Lexicographically first monic irreducible polynomial of degree k over
/// ℤ/p, returned as the list of lower coefficients (degree-k term is
/// implicit). Irreducibility by trial division, fine for k ≤ 4.
fn first_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let total = (p as u128).pow(k as u32);
    'cand: for idx in 0..total {
        let mut c = Vec::with_capacity(k);
        let mut e = idx;
        for _ in 0..k {
            c.push((e % p as u128) as u64);
            e /= p as u128;
        }
        // full candidate: x^k + Σ cᵢ xⁱ; reject if it has a divisor of
        // degree 1..=k/2
        let mut full = c.clone();
        full.push(1);
        if (1..=k / 2).any(|d| has_monic_divisor(&full, d, p)) {
            continue 'cand;
        }
        // also reject reducible quadratics/cubics via roots (covered by
        // degree-1 divisors above) — nothing more needed for k ≤ 4
        return c;
    }
    unreachable!("irreducible polynomials of every degree exist over ℤ/p")
}

fn has_monic_divisor(poly: &[u64], d: usize, p: u64) -> bool {
    let total = (p as u128).pow(d as u32);
    for idx in 0..total {
        let mut div = Vec::with_capacity(d + 1);
        let mut e = idx;
        for _ in 0..d {
            div.push((e % p as u128) as u64);
            e /= p as u128;
        }
        div.push(1);
        if poly_rem_is_zero(poly, &div, p) {
            return true;
        }
    }
    false
}

fn poly_rem_is_zero(poly: &[u64], div: &[u64], p: u64) -> bool {
    let mut r: Vec<u64> = poly.to_vec();
    let dd = div.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for i in 0..=dd {
                let idx = shift + i;
                r[idx] = (r[idx] + (p - div[i] % p) * lead) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c % p == 0)
}

// ----- expression parsing ---------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i128),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut toks = Vec::new();
    let mut it = s.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            ' ' | '\t' => {
                it.next();
            }
            '+' => {
                it.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                it.next();
                toks.push(Tok::Minus);
            }
            '*' => {
                it.next();
                toks.push(Tok::Star);
            }
            '^' => {
                it.next();
                toks.push(Tok::Caret);
            }
            '(' => {
                it.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                it.next();
                toks.push(Tok::RParen);
            }
            '0'..='9' => {
                let mut v = 0i128;
                while let Some(&d) = it.peek() {
                    if let Some(dig) = d.to_digit(10) {
                        v = v * 10 + dig as i128;
                        it.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Int(v));
            }
            c if c.is_ascii_alphabetic() => {
                let mut id = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_alphanumeric() {
                        id.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(id));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    ring: &'a FiniteRing,
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<El, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.add(acc, t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.sub(acc, t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<El, String> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.ring.mul(acc, f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<El, String> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) if e >= 0 => {
                    self.pos += 1;
                    return self
                        .ring
                        .pow(base, e as u32)
                        .map_err(|err| err.to_string());
                }
                _ => return Err("expected a nonnegative exponent after `^`".into()),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<El, String> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                self.ring.int_literal(v)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                self.ring.symbol(&id)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                let a = self.atom()?;
                Ok(self.ring.neg(a))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err("expected `)`".into()),
                }
            }
            _ => Err("expected an element expression".into()),
        }
    }
}

// ----- JSON descriptions ------------------------------------------------------

/// Ring description, the JSON instance-file schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingSpec {
    Zmod {
        n: u64,
    },
    Gf {
        p: u64,
        k: u32,
    },
    Product {
        factors: Vec<RingSpec>,
    },
    Table {
        elements: Vec<String>,
        add: Vec<Vec<String>>,
        mul: Vec<Vec<String>>,
    },
}

impl RingSpec {
    pub fn build(&self, cap: usize) -> Result<Arc<FiniteRing>, RingError> {
        match self {
            RingSpec::Zmod { n } => FiniteRing::zmod_capped(*n, cap),
            RingSpec::Gf { p, k } => FiniteRing::gf_capped(*p, *k, cap),
            RingSpec::Product { factors } => {
                let fs: Result<Vec<_>, _> = factors.iter().map(|f| f.build(cap)).collect();
                FiniteRing::product_capped(fs?, cap)
            }
            RingSpec::Table {
                elements,
                add,
                mul,
            } => FiniteRing::from_tables(elements.clone(), add, mul, cap),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_basics() {
        let r = FiniteRing::zmod(2).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.is_unital());
        let one = r.one().unwrap();
        assert_eq!(r.add(one, one), r.zero());

        let z4 = FiniteRing::zmod(4).unwrap();
        let two = z4.by_name("2").unwrap();
        assert_eq!(z4.mul(two, two), z4.zero());
        // image of a ↦ 2a on ℤ/4 is {0, 2}
        let im = z4.image_of(|a| z4.mul(two, a));
        assert_eq!(im.size(), 2);
        assert!(im.contains(&z4.coords_i128(two)));
    }

    #[test]
    fn gf9_frobenius_is_the_order_two_automorphism() {
        let f9 = FiniteRing::gf(3, 2).unwrap();
        assert_eq!(f9.len(), 9);
        let a = f9.by_name("a").unwrap();
        // the map x ↦ x³ has order 2 and fixes exactly ℤ/3
        let frob = |x: El| f9.pow(x, 3).unwrap();
        let mut fixed = 0;
        for x in f9.elements() {
            assert_eq!(frob(frob(x)), x);
            if frob(x) == x {
                fixed += 1;
            }
        }
        assert_eq!(fixed, 3);
        assert_ne!(frob(a), a);
        // automorphism: additive and multiplicative on all pairs
        for x in f9.elements() {
            for y in f9.elements() {
                assert_eq!(frob(f9.add(x, y)), f9.add(frob(x), frob(y)));
                assert_eq!(frob(f9.mul(x, y)), f9.mul(frob(x), frob(y)));
            }
        }
        // any field automorphism is decided by the image of `a`, which must
        // share a's minimal polynomial; enumerating candidates shows x ↦ x³
        // is the only non-identity choice
        let candidates: Vec<El> = f9
            .elements()
            .filter(|&c| {
                // c² + 1 = 0 exactly when c has the minimal polynomial of a
                f9.add(f9.mul(c, c), f9.one().unwrap()) == f9.zero()
            })
            .collect();
        assert_eq!(candidates.len(), 2);
        assert!(candidates.contains(&a) && candidates.contains(&frob(a)));
    }

    #[test]
    fn gf_of_degree_three_and_four() {
        assert_eq!(FiniteRing::gf(2, 3).unwrap().len(), 8);
        assert_eq!(FiniteRing::gf(2, 4).unwrap().len(), 16);
        assert_eq!(FiniteRing::gf(5, 2).unwrap().len(), 25);
        assert!(matches!(FiniteRing::gf(4, 2), Err(RingError::NotPrime(4))));
        assert!(matches!(FiniteRing::gf(3, 0), Err(RingError::BadDegree(0))));
    }

    #[test]
    fn product_ring_naming_and_idempotents() {
        let f3 = FiniteRing::zmod(3).unwrap();
        let r = FiniteRing::product(vec![f3.clone(), f3]).unwrap();
        assert_eq!(r.len(), 9);
        let e1 = r.parse("e1").unwrap();
        let e2 = r.parse("e2").unwrap();
        assert_eq!(r.add(e1, e2), r.one().unwrap());
        assert_eq!(r.mul(e1, e2), r.zero());
        // all central idempotents of ℤ/3 × ℤ/3
        let ids = r.central_idempotents();
        assert_eq!(ids.len(), 4);
        // naming round-trips
        for x in r.elements() {
            assert_eq!(r.parse(r.name(x)).unwrap(), x, "name {}", r.name(x));
        }
    }

    #[test]
    fn field_has_trivial_idempotents() {
        let f9 = FiniteRing::gf(3, 2).unwrap();
        let ids = f9.central_idempotents();
        assert_eq!(ids.len(), 2);
        let z4 = FiniteRing::zmod(4).unwrap();
        assert_eq!(z4.central_idempotents().len(), 2);
    }

    #[test]
    fn table_ring_roundtrip_and_validation() {
        let z3 = FiniteRing::zmod(3).unwrap();
        let names: Vec<String> = z3.elements().map(|e| z3.name(e).to_string()).collect();
        let table = |f: &dyn Fn(El, El) -> El| -> Vec<Vec<String>> {
            z3.elements()
                .map(|a| {
                    z3.elements()
                        .map(|b| z3.name(f(a, b)).to_string())
                        .collect()
                })
                .collect()
        };
        let add = table(&|a, b| z3.add(a, b));
        let mul = table(&|a, b| z3.mul(a, b));
        let rebuilt = FiniteRing::from_tables(names.clone(), &add, &mul, 64).unwrap();
        assert_eq!(rebuilt.len(), 3);
        assert!(rebuilt.is_unital());

        // corrupt one multiplication entry: 2·2 := 2 breaks distributivity
        let mut bad_mul = mul.clone();
        bad_mul[2][2] = "2".into();
        assert!(matches!(
            FiniteRing::from_tables(names, &add, &bad_mul, 64),
            Err(RingError::TableInvalid(_))
        ));
    }

    #[test]
    fn parser_handles_expressions() {
        let f9 = FiniteRing::gf(3, 2).unwrap();
        let x = f9.parse("2*a + 1").unwrap();
        let a = f9.by_name("a").unwrap();
        assert_eq!(x, f9.add(f9.int_mul(2, a), f9.one().unwrap()));
        assert_eq!(f9.parse("a^2").unwrap(), f9.mul(a, a));
        assert_eq!(f9.parse("-1").unwrap(), f9.int_mul(2, f9.one().unwrap()));

        let r = FiniteRing::product(vec![f9.clone(), f9.clone()]).unwrap();
        let d = r.parse("e1*(a+1)+e2*2").unwrap();
        let comps = r.components(d);
        assert_eq!(comps[0], f9.parse("a+1").unwrap());
        assert_eq!(comps[1], f9.parse("2").unwrap());
        assert!(r.parse("e3").is_err());
        assert!(r.parse("q").is_err());
    }

    #[test]
    fn spans_and_kernels() {
        let f3 = FiniteRing::zmod(3).unwrap();
        let r = FiniteRing::product(vec![f3.clone(), f3]).unwrap();
        let e1 = r.parse("e1").unwrap();
        // span{(1,0)} is the first component
        let s = r.span(&[e1]);
        assert_eq!(s.size(), 3);
        let members = r.subgroup_members(&s);
        assert!(members.iter().all(|&m| r.mul(m, e1) == m));
        // kernel of the zero map is everything
        let k = r.kernel_of(|_| vec![0], &[1]);
        assert_eq!(k.size(), 9);
        // kernel of x ↦ x·e1 is the complementary component
        let k1 = r.kernel_of(|x| r.coords_i128(r.mul(x, e1)), &r.moduli());
        assert_eq!(k1.size(), 3);
        for x in r.subgroup_members(&k1) {
            assert_eq!(r.mul(x, e1), r.zero());
        }
    }

    #[test]
    fn product_idempotents_include_all_indicator_vectors() {
        let f3 = FiniteRing::zmod(3).unwrap();
        let f2 = FiniteRing::zmod(2).unwrap();
        let r = FiniteRing::product(vec![f3.clone(), f2, f3]).unwrap();
        let ids = r.central_idempotents();
        // all 0/1 coordinate vectors are central idempotents
        for mask in 0..8u32 {
            let comps: Vec<El> = (0..3)
                .map(|i| {
                    let f = match r.structure() {
                        RingStructure::Product(fs) => &fs[i],
                        _ => unreachable!(),
                    };
                    if mask >> i & 1 == 1 {
                        f.one().unwrap()
                    } else {
                        f.zero()
                    }
                })
                .collect();
            assert!(ids.contains(&r.from_components(&comps)), "mask {mask}");
        }
        assert_eq!(ids.len(), 8);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            FiniteRing::zmod_capped(5000, 4096),
            Err(RingError::SizeCapExceeded { .. })
        ));
    }
}
