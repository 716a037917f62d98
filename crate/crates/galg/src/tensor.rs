//! Tensor products of finite bimodules over a common ring, by Smith
//! normal form.
//!
//! `M ⊗_R N` is computed as the quotient of `M ⊗_ℤ N = ⊕_{ij}
//! ℤ/gcd(ord mᵢ, ord nⱼ)` by the balancing relations
//! `mᵢ·r_t ⊗ nⱼ − mᵢ ⊗ r_t·nⱼ`, where `mᵢ`, `nⱼ` run over additive
//! bases of the modules and `r_t` over additive generators of `R`
//! (balancing is additive in each slot, so generators suffice). The SNF
//! left transform turns the quotient into an explicit `⊕ ℤ/dᵢ` with a
//! computable class map, so equality of tensors is decidable.

use crate::abelian::{self, Mat};
use crate::ideal::Ideal;
use crate::ring::El;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("tensor generator count {k} exceeds the cap {cap}")]
    CapExceeded { k: usize, cap: usize },
    #[error("inconsistent tensor input: {0}")]
    BadInput(String),
}

pub const DEFAULT_TENSOR_CAP: usize = 4096;

/// Input presentation: module bases with orders and the action of the
/// base-ring generators on them, in module coordinates.
pub struct TensorInput {
    pub m_orders: Vec<u32>,
    pub n_orders: Vec<u32>,
    /// `m_act[i][t]` = coordinates of `mᵢ · r_t` in the M-basis
    pub m_act: Vec<Vec<Vec<i128>>>,
    /// `n_act[j][t]` = coordinates of `r_t · nⱼ` in the N-basis
    pub n_act: Vec<Vec<Vec<i128>>>,
}

/// The computed tensor group with its class map.
pub struct TensorGroup {
    k_m: usize,
    k_n: usize,
    /// moduli of the quotient presentation (entries may be 1)
    moduli: Vec<i128>,
    /// left SNF transform: class(z) = (proj · z) mod moduli
    proj: Mat,
}

impl TensorGroup {
    /// Cardinality of the tensor group, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        self.moduli
            .iter()
            .fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }

    /// Reduces a raw coefficient vector over the `mᵢ ⊗ nⱼ` symbols to
    /// its canonical class.
    pub fn class(&self, raw: &[i128]) -> Vec<i128> {
        assert_eq!(raw.len(), self.k_m * self.k_n);
        abelian::mat_vec(&self.proj, raw)
            .iter()
            .zip(&self.moduli)
            .map(|(&v, &d)| v.rem_euclid(d))
            .collect()
    }

    /// The class of the pure tensor `m ⊗ n` from module coordinates.
    pub fn pure(&self, m_coords: &[i128], n_coords: &[i128]) -> Vec<i128> {
        assert_eq!(m_coords.len(), self.k_m);
        assert_eq!(n_coords.len(), self.k_n);
        let mut raw = vec![0i128; self.k_m * self.k_n];
        for (i, &a) in m_coords.iter().enumerate() {
            for (j, &b) in n_coords.iter().enumerate() {
                raw[i * self.k_n + j] = a * b;
            }
        }
        self.class(&raw)
    }

    pub fn zero_class(&self) -> Vec<i128> {
        vec![0; self.moduli.len()]
    }

    pub fn is_zero(&self, class: &[i128]) -> bool {
        class.iter().all(|&v| v == 0)
    }

    pub fn add_raw(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        a.iter().zip(b).map(|(&x, &y)| x + y).collect()
    }
}

/// Computes `M ⊗_R N` from the presentation.
pub fn tensor_over(input: &TensorInput, cap: usize) -> Result<TensorGroup, TensorError> {
    let k_m = input.m_orders.len();
    let k_n = input.n_orders.len();
    let k = k_m * k_n;
    if k > cap {
        return Err(TensorError::CapExceeded { k, cap });
    }
    let r_count = input
        .m_act
        .first()
        .map(|row| row.len())
        .unwrap_or_else(|| input.n_act.first().map(|row| row.len()).unwrap_or(0));
    for (i, row) in input.m_act.iter().enumerate() {
        if row.len() != r_count || row.iter().any(|v| v.len() != k_m) {
            return Err(TensorError::BadInput(format!("m_act row {i} malformed")));
        }
    }
    for (j, row) in input.n_act.iter().enumerate() {
        if row.len() != r_count || row.iter().any(|v| v.len() != k_n) {
            return Err(TensorError::BadInput(format!("n_act row {j} malformed")));
        }
    }

    // symbol moduli: ord(mᵢ ⊗ nⱼ) divides gcd of the orders
    let sym_mod: Vec<i128> = (0..k)
        .map(|p| {
            let (i, j) = (p / k_n, p % k_n);
            abelian::ext_gcd(input.m_orders[i] as i128, input.n_orders[j] as i128).0
        })
        .collect();

    // relations as columns: gcd rows plus reduced balancing relations
    let mut cols: Vec<Vec<i128>> = Vec::new();
    for (p, &d) in sym_mod.iter().enumerate() {
        let mut v = vec![0i128; k];
        v[p] = d;
        cols.push(v);
    }
    let mut seen = std::collections::BTreeSet::new();
    for i in 0..k_m {
        for t in 0..r_count {
            let mi_rt = &input.m_act[i][t];
            for j in 0..k_n {
                let rt_nj = &input.n_act[j][t];
                let mut v = vec![0i128; k];
                for (s, &a) in mi_rt.iter().enumerate() {
                    v[s * k_n + j] += a;
                }
                for (u, &b) in rt_nj.iter().enumerate() {
                    v[i * k_n + u] -= b;
                }
                for (p, entry) in v.iter_mut().enumerate() {
                    *entry = entry.rem_euclid(sym_mod[p]);
                }
                if v.iter().any(|&e| e != 0) && seen.insert(v.clone()) {
                    cols.push(v);
                }
            }
        }
    }

    // Smith-style reduction of the K×cols relation matrix; the lattice
    // contains lcm(sym_mod)·ℤᴷ, so the bounded mod-exponent variant
    // applies and the intermediate coefficients cannot explode
    let rows = k;
    let ncols = cols.len();
    let mut rel = vec![vec![0i128; ncols]; rows];
    for (c, col) in cols.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            rel[r][c] = v;
        }
    }
    let exponent = sym_mod
        .iter()
        .fold(1i128, |acc, &d| acc / abelian::ext_gcd(acc, d).0 * d);
    let (moduli, proj) = abelian::smith_mod(&rel, exponent.max(1));
    debug_assert_eq!(moduli.len(), k);
    Ok(TensorGroup {
        k_m,
        k_n,
        moduli,
        proj,
    })
}

/// Adapter: ideals of one ring as bimodules over a subring presented by
/// additive generators, with the ring multiplication as both actions.
pub fn tensor_of_ideals(
    m: &Ideal,
    n: &Ideal,
    r_gens: &[El],
    cap: usize,
) -> Result<TensorGroup, TensorError> {
    let ring = m.ring();
    let m_orders = m.basis_orders().to_vec();
    let n_orders = n.basis_orders().to_vec();
    let m_act: Vec<Vec<Vec<i128>>> = m
        .basis()
        .iter()
        .map(|&mi| {
            r_gens
                .iter()
                .map(|&rt| m.member_coords(ring.mul(mi, rt)))
                .collect()
        })
        .collect();
    let n_act: Vec<Vec<Vec<i128>>> = n
        .basis()
        .iter()
        .map(|&nj| {
            r_gens
                .iter()
                .map(|&rt| n.member_coords(ring.mul(rt, nj)))
                .collect()
        })
        .collect();
    tensor_over(
        &TensorInput {
            m_orders,
            n_orders,
            m_act,
            n_act,
        },
        cap,
    )
}
