//! Exact integer linear algebra for finite abelian groups.
//!
//! Everything downstream (ideal spans, trace images, invariant kernels,
//! tensor products of bimodules) reduces to questions about subgroups of
//! a fixed ambient group `⊕ᵢ ℤ/eᵢ`, which we settle with integer
//! matrices: Hermite normal form for membership and span comparison,
//! Smith normal form for quotient presentations and kernels.
//!
//! Matrices are row-major `Vec<Vec<i128>>`; entries stay tiny at the
//! scales this crate verifies, so `i128` leaves a wide margin for the
//! intermediate growth of the eliminations.

pub type Mat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (r, k) = (a.len(), b.len());
    let c = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i128; c]; r];
    for i in 0..r {
        for t in 0..k {
            let av = a[i][t];
            if av == 0 {
                continue;
            }
            for j in 0..c {
                out[i][j] += av * b[t][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(&r, &x)| r * x).sum())
        .collect()
}

/// Smith normal form `left · a · right = diag`, with `diag[i] ≥ 0` and
/// `diag[i] | diag[i+1]` for consecutive nonzero entries.
pub struct SmithForm {
    pub diag: Vec<i128>,
    pub left: Mat,
    pub right: Mat,
    pub rank: usize,
}

pub fn smith(a: &Mat) -> SmithForm {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut b = a.clone();
    let mut left = identity(m);
    let mut right = identity(n);

    let mut t = 0;
    while t < m.min(n) {
        // locate the entry of smallest nonzero magnitude in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if b[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| b[i][j].abs() < b[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        b.swap(t, pi);
        left.swap(t, pi);
        swap_cols(&mut b, t, pj);
        swap_cols(&mut right, t, pj);

        loop {
            let mut dirty = false;
            // clear the pivot column
            for i in t + 1..m {
                if b[i][t] != 0 {
                    let q = div_round(b[i][t], b[t][t]);
                    row_sub(&mut b, i, t, q);
                    row_sub(&mut left, i, t, q);
                    if b[i][t] != 0 {
                        b.swap(t, i);
                        left.swap(t, i);
                        dirty = true;
                    }
                }
            }
            // clear the pivot row
            for j in t + 1..n {
                if b[t][j] != 0 {
                    let q = div_round(b[t][j], b[t][t]);
                    col_sub(&mut b, j, t, q);
                    col_sub(&mut right, j, t, q);
                    if b[t][j] != 0 {
                        swap_cols(&mut b, t, j);
                        swap_cols(&mut right, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        if b[t][t] < 0 {
            for v in b[t].iter_mut() {
                *v = -*v;
            }
            for v in left[t].iter_mut() {
                *v = -*v;
            }
        }
        t += 1;
    }
    let mut rank = 0;
    while rank < m.min(n) && b[rank][rank] != 0 {
        rank += 1;
    }

    // enforce the divisibility chain d_i | d_{i+1}
    let mut moved = true;
    while moved {
        moved = false;
        for i in 0..rank.saturating_sub(1) {
            let (di, dj) = (b[i][i], b[i + 1][i + 1]);
            if dj % di != 0 {
                // fold column i+1 into column i and re-diagonalize the 2×2 block
                col_add(&mut b, i, i + 1, 1);
                col_add(&mut right, i, i + 1, 1);
                let (g, u, v) = ext_gcd(b[i][i], b[i + 1][i]);
                // rows: new_row_i = u·row_i + v·row_{i+1}
                let (a0, a1) = (b[i][i] / g, b[i + 1][i] / g);
                combine_rows(&mut b, i, i + 1, u, v, a1, a0);
                combine_rows(&mut left, i, i + 1, u, v, a1, a0);
                // clear the off-diagonal remainder in the row
                let q = b[i][i + 1] / b[i][i];
                col_sub(&mut b, i + 1, i, q);
                col_sub(&mut right, i + 1, i, q);
                moved = true;
            }
        }
    }

    let diag = (0..m.min(n)).map(|i| b[i][i]).collect();
    SmithForm {
        diag,
        left,
        right,
        rank,
    }
}

/// Replaces rows (i, j) by (u·rᵢ + v·rⱼ, -a1·rᵢ + a0·rⱼ); the 2×2
/// transform has determinant u·a0 + v·a1 = 1, so it is unimodular.
fn combine_rows(b: &mut Mat, i: usize, j: usize, u: i128, v: i128, a1: i128, a0: i128) {
    let n = b[i].len();
    for c in 0..n {
        let (x, y) = (b[i][c], b[j][c]);
        b[i][c] = u * x + v * y;
        b[j][c] = -a1 * x + a0 * y;
    }
}

/// Smith-style diagonalization of a relation lattice that is known to
/// contain `exponent·ℤᴷ`, with every intermediate entry kept in the
/// balanced range `(-exponent/2, exponent/2]`.
///
/// Entrywise reduction is sound because it moves columns by elements of
/// `exponent·ℤᴷ`, which the tracked lattice `colspan + exponent·ℤᴷ`
/// absorbs; the left transform is likewise only needed modulo the
/// exponent, since the class of `z` in coordinate `i` is read modulo a
/// divisor of it. Returns the canonical invariant factors
/// `gcd(dᵢ, exponent)` and the reduced left transform — unlike
/// [`smith`], the exact identity `left·a·right = diag` is *not*
/// preserved, only the quotient presentation. The entry bound makes the
/// computation immune to the coefficient explosion of exact SNF.
pub fn smith_mod(a: &Mat, exponent: i128) -> (Vec<i128>, Mat) {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    assert!(exponent >= 1);
    let red = |v: i128| -> i128 {
        // balanced representative in (-exponent/2, exponent/2]
        let r = v.rem_euclid(exponent);
        if 2 * r > exponent {
            r - exponent
        } else {
            r
        }
    };
    let mut b: Mat = a
        .iter()
        .map(|row| row.iter().map(|&v| red(v)).collect())
        .collect();
    let mut left = identity(m);

    let mut t = 0;
    while t < m.min(n) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if b[i][j] != 0 && pivot.map_or(true, |(pi, pj)| b[i][j].abs() < b[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        b.swap(t, pi);
        left.swap(t, pi);
        swap_cols(&mut b, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if b[i][t] != 0 {
                    let q = div_round(b[i][t], b[t][t]);
                    row_sub(&mut b, i, t, q);
                    row_sub(&mut left, i, t, q);
                    for v in b[i].iter_mut() {
                        *v = red(*v);
                    }
                    for v in left[i].iter_mut() {
                        *v = red(*v);
                    }
                    if b[i][t] != 0 {
                        b.swap(t, i);
                        left.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if b[t][j] != 0 {
                    let q = div_round(b[t][j], b[t][t]);
                    col_sub(&mut b, j, t, q);
                    for row in b.iter_mut() {
                        row[j] = red(row[j]);
                    }
                    if b[t][j] != 0 {
                        swap_cols(&mut b, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        t += 1;
    }
    let rank = t;

    // divisibility chain on gcds with the exponent
    let mut diag: Vec<i128> = (0..m.min(n))
        .map(|i| ext_gcd(b[i][i], exponent).0.max(1))
        .collect();
    // entries beyond the rank are 0 in b: gcd(0, exponent) = exponent
    for d in diag.iter_mut().skip(rank) {
        *d = exponent;
    }
    // the chain fix for gcd-with-exponent diagonals: a 2×2 block with
    // entries (d_i, d_j) is equivalent over the quotient to
    // (gcd, lcm ∧ exponent); the left rows must be mixed accordingly
    let mut moved = true;
    while moved {
        moved = false;
        for i in 0..diag.len().saturating_sub(1) {
            let (di, dj) = (diag[i], diag[i + 1]);
            if dj % di != 0 {
                let (g, u, v) = ext_gcd(di, dj);
                let lcm_mod = ext_gcd(di / g * dj, exponent).0;
                // new row_i reads the class modulo g: it is
                // u·row_i + v·row_{i+1}; the complementary row reads
                // modulo lcm (cut by the exponent)
                let (a1, a0) = (dj / g, di / g);
                combine_rows(&mut left, i, i + 1, u, v, a1, a0);
                for v2 in left[i].iter_mut() {
                    *v2 = red(*v2);
                }
                for v2 in left[i + 1].iter_mut() {
                    *v2 = red(*v2);
                }
                diag[i] = g;
                diag[i + 1] = lcm_mod;
                moved = true;
            }
        }
    }
    (diag, left)
}

fn swap_cols(b: &mut Mat, i: usize, j: usize) {
    for row in b.iter_mut() {
        row.swap(i, j);
    }
}

fn row_sub(b: &mut Mat, i: usize, t: usize, q: i128) {
    if q == 0 {
        return;
    }
    let n = b[i].len();
    for c in 0..n {
        b[i][c] -= q * b[t][c];
    }
}

fn col_sub(b: &mut Mat, j: usize, t: usize, q: i128) {
    if q == 0 {
        return;
    }
    for row in b.iter_mut() {
        let v = row[t];
        row[j] -= q * v;
    }
}

fn col_add(b: &mut Mat, j: usize, t: usize, q: i128) {
    col_sub(b, j, t, -q)
}

/// Rounded division, so the remainder has magnitude ≤ |d|/2.
fn div_round(a: i128, d: i128) -> i128 {
    let q = a / d;
    let r = a - q * d;
    if 2 * r.abs() > d.abs() {
        q + r.signum() * d.signum()
    } else {
        q
    }
}

/// gcd(a, b) = u·a + v·b with g ≥ 0.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, u, v) = ext_gcd(b, a % b);
        (g, v, u - (a / b) * v)
    }
}

/// Basis of the integer kernel `{x ∈ ℤⁿ : a·x = 0}`.
pub fn integer_kernel(a: &Mat) -> Vec<Vec<i128>> {
    let n = if a.is_empty() { 0 } else { a[0].len() };
    if n == 0 {
        return Vec::new();
    }
    let s = smith(a);
    // a·x = 0 ⟺ diag·(right⁻¹ x) = 0, so the kernel is spanned by the
    // columns of `right` past the rank.
    (s.rank..n)
        .map(|j| (0..n).map(|i| s.right[i][j]).collect())
        .collect()
}

/// A subgroup of the finite ambient group `⊕ᵢ ℤ/moduli[i]`, presented by
/// generating vectors and stored as the Hermite normal form of the
/// integer lattice they span together with the moduli relations.
#[derive(Clone, Debug)]
pub struct Subgroup {
    moduli: Vec<i128>,
    /// lower-triangular N×N lattice basis, columns
    hnf: Mat,
    size: u128,
}

impl Subgroup {
    pub fn new(moduli: &[i128], gens: &[Vec<i128>]) -> Self {
        let n = moduli.len();
        assert!(moduli.iter().all(|&e| e >= 1));
        // columns: generators, then eᵢ·unit vectors
        let mut cols: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), n);
                g.iter().zip(moduli).map(|(&v, &e)| v.rem_euclid(e)).collect()
            })
            .collect();
        for (i, &e) in moduli.iter().enumerate() {
            let mut u = vec![0i128; n];
            u[i] = e;
            cols.push(u);
        }
        let hnf = column_hnf(n, &mut cols);
        let lattice_det: i128 = (0..n).map(|i| hnf[i][i]).product();
        let ambient: u128 = moduli.iter().map(|&e| e as u128).product();
        let size = ambient / lattice_det as u128;
        Subgroup {
            moduli: moduli.to_vec(),
            hnf,
            size,
        }
    }

    pub fn trivial(moduli: &[i128]) -> Self {
        Self::new(moduli, &[])
    }

    pub fn full(moduli: &[i128]) -> Self {
        let n = moduli.len();
        let gens: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect();
        Self::new(moduli, &gens)
    }

    pub fn moduli(&self) -> &[i128] {
        &self.moduli
    }

    /// Number of elements of the subgroup.
    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        let mut x: Vec<i128> = v
            .iter()
            .zip(&self.moduli)
            .map(|(&a, &e)| a.rem_euclid(e))
            .collect();
        for i in 0..x.len() {
            let d = self.hnf[i][i];
            if x[i] % d != 0 {
                return false;
            }
            let q = x[i] / d;
            if q != 0 {
                for r in i..x.len() {
                    x[r] -= q * self.hnf[r][i];
                }
            }
        }
        x.iter().all(|&a| a == 0)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        // the HNF columns generate the lattice, hence the subgroup
        (0..self.moduli.len()).all(|j| {
            let col: Vec<i128> = (0..self.moduli.len()).map(|i| self.hnf[i][j]).collect();
            other.contains(&col)
        })
    }

    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.size == other.size && self.is_subgroup_of(other)
    }
}

/// Column-style Hermite normal form of the lattice spanned by `cols`
/// inside ℤⁿ; the input must span a full-rank lattice. Returns a lower
/// triangular n×n basis with positive diagonal.
fn column_hnf(n: usize, cols: &mut Vec<Vec<i128>>) -> Mat {
    let k = cols.len();
    for row in 0..n {
        // gcd-fold all columns ≥ row into the pivot slot
        loop {
            let mut best: Option<usize> = None;
            for j in row..k {
                if cols[j][row] != 0
                    && best.map_or(true, |b| cols[j][row].abs() < cols[b][row].abs())
                {
                    best = Some(j);
                }
            }
            let b = best.expect("lattice not full rank");
            cols.swap(row, b);
            let mut any = false;
            for j in row + 1..k {
                if cols[j][row] != 0 {
                    let q = div_round(cols[j][row], cols[row][row]);
                    for r in 0..n {
                        let v = cols[row][r];
                        cols[j][r] -= q * v;
                    }
                    if cols[j][row] != 0 {
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
        }
        if cols[row][row] < 0 {
            for r in 0..n {
                cols[row][r] = -cols[row][r];
            }
        }
        // reduce earlier pivot columns against this one (keeps entries small)
        for j in 0..row {
            if cols[j][row] != 0 {
                let q = cols[j][row].div_euclid(cols[row][row]);
                for r in 0..n {
                    let v = cols[row][r];
                    cols[j][r] -= q * v;
                }
            }
        }
    }
    // assemble n×n row-major matrix from the first n columns
    let mut h = vec![vec![0i128; n]; n];
    for j in 0..n {
        for i in 0..n {
            h[i][j] = cols[j][i];
        }
    }
    h
}

/// Solves `Σⱼ cⱼ·gens[j] ≡ target (mod moduli)` and returns the
/// coefficients, or `None` when the target is outside the span.
pub fn solve_in_span(
    moduli: &[i128],
    gens: &[Vec<i128>],
    target: &[i128],
) -> Option<Vec<i128>> {
    let n = moduli.len();
    let mut cols: Vec<Vec<i128>> = gens.to_vec();
    for (i, &e) in moduli.iter().enumerate() {
        let mut u = vec![0i128; n];
        u[i] = e;
        cols.push(u);
    }
    let k = cols.len();
    // track the column transform so coefficients can be recovered
    let mut tr = identity(k);
    for row in 0..n {
        loop {
            let mut best: Option<usize> = None;
            for j in row..k {
                if cols[j][row] != 0
                    && best.map_or(true, |b| cols[j][row].abs() < cols[b][row].abs())
                {
                    best = Some(j);
                }
            }
            let b = best?;
            cols.swap(row, b);
            tr.swap(row, b); // tr rows correspond to original columns? see below
            let mut any = false;
            for j in row + 1..k {
                if cols[j][row] != 0 {
                    let q = div_round(cols[j][row], cols[row][row]);
                    for r in 0..n {
                        let v = cols[row][r];
                        cols[j][r] -= q * v;
                    }
                    for r in 0..k {
                        let v = tr[row][r];
                        tr[j][r] -= q * v;
                    }
                    if cols[j][row] != 0 {
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
        }
        if cols[row][row] < 0 {
            for r in 0..n {
                cols[row][r] = -cols[row][r];
            }
            for r in 0..k {
                tr[row][r] = -tr[row][r];
            }
        }
    }
    // back-substitute target through the triangular columns
    let mut x: Vec<i128> = target
        .iter()
        .zip(moduli)
        .map(|(&a, &e)| a.rem_euclid(e))
        .collect();
    let mut y = vec![0i128; k];
    for i in 0..n {
        let d = cols[i][i];
        if x[i] % d != 0 {
            return None;
        }
        let q = x[i] / d;
        y[i] = q;
        if q != 0 {
            for r in i..n {
                x[r] -= q * cols[i][r];
            }
        }
    }
    if x.iter().any(|&a| a != 0) {
        return None;
    }
    // original coefficient j = Σᵢ yᵢ·tr[i][j]
    let mut c = vec![0i128; gens.len()];
    for (i, &yi) in y.iter().enumerate() {
        if yi == 0 {
            continue;
        }
        for (j, cj) in c.iter_mut().enumerate() {
            *cj += yi * tr[i][j];
        }
    }
    // verify by substitution
    for r in 0..n {
        let mut acc = 0i128;
        for (j, g) in gens.iter().enumerate() {
            acc += c[j] * g[r];
        }
        if (acc - target[r]).rem_euclid(moduli[r]) != 0 {
            return None;
        }
    }
    Some(c)
}

/// Greedy basis of a finite abelian group given by its addition law:
/// returns pairs (element, order) whose cyclic subgroups decompose the
/// group as a direct sum. The construction works prime by prime and is
/// certified afterwards by [`coordinates_for_basis`], which fails if the
/// result is not a basis.
pub fn abelian_basis(
    n: usize,
    zero: usize,
    add: &dyn Fn(usize, usize) -> usize,
) -> Result<Vec<(usize, u32)>, String> {
    assert!(n >= 1);
    // additive orders
    let mut order = vec![0u32; n];
    for a in 0..n {
        let mut k = 1u32;
        let mut acc = a;
        while acc != zero {
            acc = add(acc, a);
            k += 1;
            if k as usize > n + 1 {
                return Err(format!("element {a} has no finite additive order"));
            }
        }
        order[a] = k;
    }
    let mut primes: Vec<u32> = Vec::new();
    for &o in &order {
        let mut m = o;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                if !primes.contains(&p) {
                    primes.push(p);
                }
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 && !primes.contains(&m) {
            primes.push(m);
        }
    }
    primes.sort_unstable();

    let mut basis: Vec<(usize, u32)> = Vec::new();
    for &p in &primes {
        // p-torsion part, scanned in decreasing order of element order
        let mut p_elems: Vec<usize> = (0..n)
            .filter(|&a| {
                let o = order[a];
                o > 1 && {
                    let mut m = o;
                    while m % p == 0 {
                        m /= p;
                    }
                    m == 1
                }
            })
            .collect();
        p_elems.sort_by(|&a, &b| order[b].cmp(&order[a]).then(a.cmp(&b)));

        let mut span = vec![false; n];
        span[zero] = true;
        let mut span_count = 1usize;
        for &cand in &p_elems {
            // ⟨cand⟩ must meet the current span only in 0
            let mut acc = cand;
            let mut independent = true;
            while acc != zero {
                if span[acc] {
                    independent = false;
                    break;
                }
                acc = add(acc, cand);
            }
            if !independent {
                continue;
            }
            basis.push((cand, order[cand]));
            // close the span under the new generator
            let old: Vec<usize> = (0..n).filter(|&a| span[a]).collect();
            for s in old {
                let mut acc = s;
                for _ in 1..order[cand] {
                    acc = add(acc, cand);
                    if !span[acc] {
                        span[acc] = true;
                        span_count += 1;
                    }
                }
            }
            let p_part: usize = p_elems.len() + 1;
            if span_count >= p_part {
                break;
            }
        }
    }
    Ok(basis)
}

/// Coordinates of every element with respect to a basis from
/// [`abelian_basis`]. Fails if the claimed basis does not enumerate the
/// group bijectively — that check is the correctness certificate.
pub fn coordinates_for_basis(
    n: usize,
    zero: usize,
    add: &dyn Fn(usize, usize) -> usize,
    basis: &[(usize, u32)],
) -> Result<Vec<Vec<u32>>, String> {
    let total: u128 = basis.iter().map(|&(_, o)| o as u128).product();
    if total != n as u128 {
        return Err("basis orders do not multiply to the group size".into());
    }
    let mut coords = vec![Vec::new(); n];
    let mut hit = vec![false; n];
    let k = basis.len();
    let mut tuple = vec![0u32; k];
    let mut elem = zero;
    // enumerate tuples in odometer order
    let mut powers: Vec<Vec<usize>> = Vec::new(); // powers[i][c] = c·gᵢ
    for &(g, o) in basis {
        let mut row = vec![zero; o as usize];
        for c in 1..o as usize {
            row[c] = add(row[c - 1], g);
        }
        powers.push(row);
    }
    loop {
        if hit[elem] {
            return Err("basis tuples collide; the sum is not direct".into());
        }
        hit[elem] = true;
        coords[elem] = tuple.clone();
        // odometer increment
        let mut i = 0;
        loop {
            if i == k {
                if let Some(e) = hit.iter().position(|h| !h) {
                    return Err(format!("element {e} is not reached by the basis"));
                }
                return Ok(coords);
            }
            tuple[i] += 1;
            if tuple[i] < basis[i].1 {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        // recompute the running sum from the tuple (cheap at these sizes)
        elem = zero;
        for (i, &c) in tuple.iter().enumerate() {
            elem = add(elem, powers[i][c as usize]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_small() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
        let s = smith(&a);
        assert_eq!(s.rank, 3);
        // U·A·V = diag
        let ua = mat_mul(&s.left, &a);
        let uav = mat_mul(&ua, &s.right);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.diag[i] } else { 0 };
                assert_eq!(uav[i][j], want);
            }
        }
        // oracle: d₁ = gcd of the entries, d₁d₂ = gcd of the 2×2 minors,
        // d₁d₂d₃ = |det|
        let gcd = |x: i128, y: i128| ext_gcd(x, y).0;
        let mut g1 = 0;
        for row in &a {
            for &v in row {
                g1 = gcd(g1, v);
            }
        }
        let mut g2 = 0;
        for r1 in 0..3 {
            for r2 in r1 + 1..3 {
                for c1 in 0..3 {
                    for c2 in c1 + 1..3 {
                        g2 = gcd(g2, a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1]);
                    }
                }
            }
        }
        let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        assert_eq!(s.diag[0], g1);
        assert_eq!(s.diag[0] * s.diag[1], g2);
        assert_eq!(s.diag[0] * s.diag[1] * s.diag[2], det.abs());
        assert_eq!(s.diag, vec![2, 2, 156]);
    }

    #[test]
    fn smith_divisibility_chain() {
        let a = vec![vec![6, 0], vec![0, 4]];
        let s = smith(&a);
        assert_eq!(s.diag, vec![2, 12]);
    }

    #[test]
    fn kernel_of_projection() {
        // map ℤ³ → ℤ, (x,y,z) ↦ x+2y+3z
        let a = vec![vec![1, 2, 3]];
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0] + 2 * v[1] + 3 * v[2], 0);
        }
    }

    #[test]
    fn smith_mod_matches_exact_smith_on_quotients() {
        // lattices containing M·ℤ³: compare invariant factors with the
        // exact route gcd-cut by the exponent
        let cases: Vec<(Mat, i128)> = vec![
            (vec![vec![2, 0, 0], vec![0, 4, 0], vec![0, 0, 8]], 8),
            (vec![vec![6, 2, 1], vec![0, 6, 3], vec![3, 0, 6]], 6),
            (vec![vec![4, 2], vec![2, 4]], 12),
        ];
        for (a, m) in cases {
            let k = a.len();
            // append the exponent columns so the exact lattice matches
            let mut full = a.clone();
            for (i, row) in full.iter_mut().enumerate() {
                for j in 0..k {
                    row.push(if i == j { m } else { 0 });
                }
            }
            let exact = smith(&full);
            let want: Vec<i128> = (0..k).map(|i| ext_gcd(exact.diag[i], m).0).collect();
            let (got, left) = smith_mod(&full, m);
            assert_eq!(got, want, "matrix {a:?}");
            // the class map annihilates every lattice generator
            for col in 0..full[0].len() {
                let v: Vec<i128> = (0..k).map(|r| full[r][col]).collect();
                let img = mat_vec(&left, &v);
                for (r, &d) in got.iter().enumerate() {
                    assert_eq!(img[r].rem_euclid(d), 0, "generator {col} row {r}");
                }
            }
        }
    }

    #[test]
    fn smith_mod_separates_classes() {
        // ℤ²/span{(2,0),(0,3)} with exponent 6: classes of unit vectors
        // stay distinct and of the right order
        let a = vec![vec![2, 0], vec![0, 3]];
        let (diag, left) = smith_mod(&a, 6);
        let class = |z: &[i128]| -> Vec<i128> {
            mat_vec(&left, z)
                .iter()
                .zip(&diag)
                .map(|(&v, &d)| v.rem_euclid(d))
                .collect()
        };
        let mut seen = std::collections::BTreeSet::new();
        for x in 0..2 {
            for y in 0..3 {
                assert!(seen.insert(class(&[x, y])), "collision at ({x},{y})");
            }
        }
        assert_eq!(seen.len(), 6);
        assert!(class(&[2, 0]).iter().all(|&v| v == 0));
        assert!(class(&[0, 3]).iter().all(|&v| v == 0));
    }

    #[test]
    fn subgroup_membership_and_size() {
        // diagonal of (ℤ/3)²
        let h = Subgroup::new(&[3, 3], &[vec![1, 1]]);
        assert_eq!(h.size(), 3);
        assert!(h.contains(&[2, 2]));
        assert!(!h.contains(&[1, 2]));
        assert!(h.contains(&[0, 0]));

        // image of a ↦ 2a in ℤ/4 is {0, 2}
        let im = Subgroup::new(&[4], &[vec![2]]);
        assert_eq!(im.size(), 2);
        assert!(im.contains(&[2]));
        assert!(!im.contains(&[1]));

        // kernel of the zero map on (ℤ/2)² is everything
        let full = Subgroup::full(&[2, 2]);
        assert_eq!(full.size(), 4);
        let again = Subgroup::new(&[2, 2], &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert!(full.same_as(&again));
    }

    #[test]
    fn subgroup_comparison() {
        let a = Subgroup::new(&[4, 2], &[vec![2, 0]]);
        let b = Subgroup::new(&[4, 2], &[vec![2, 0], vec![0, 1]]);
        assert!(a.is_subgroup_of(&b));
        assert!(!b.is_subgroup_of(&a));
        assert_eq!(b.size(), 4);
    }

    #[test]
    fn solve_recovers_coefficients() {
        let gens = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let target = vec![2, 0, 1];
        let c = solve_in_span(&[3, 3, 3], &gens, &target).unwrap();
        for r in 0..3 {
            let acc: i128 = c.iter().zip(&gens).map(|(&ci, g)| ci * g[r]).sum();
            assert_eq!((acc - target[r]).rem_euclid(3), 0);
        }
        assert!(solve_in_span(&[2, 2], &[vec![1, 1]], &[1, 0]).is_none());
    }

    #[test]
    fn basis_of_mixed_group() {
        // ℤ/12 presented by its addition: basis must split 4·3
        let add = |a: usize, b: usize| (a + b) % 12;
        let basis = abelian_basis(12, 0, &add).unwrap();
        let mut orders: Vec<u32> = basis.iter().map(|&(_, o)| o).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![3, 4]);
        let coords = coordinates_for_basis(12, 0, &add, &basis).unwrap();
        assert_eq!(coords.len(), 12);
        // coordinates are additive
        for a in 0..12 {
            for b in 0..12 {
                let c = add(a, b);
                for (i, &(_, o)) in basis.iter().enumerate() {
                    assert_eq!(
                        (coords[a][i] + coords[b][i]) % o,
                        coords[c][i],
                        "additivity fails at ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn basis_of_klein_style_group() {
        // (ℤ/2)³ via bit-xor
        let add = |a: usize, b: usize| a ^ b;
        let basis = abelian_basis(8, 0, &add).unwrap();
        assert_eq!(basis.len(), 3);
        assert!(basis.iter().all(|&(_, o)| o == 2));
        coordinates_for_basis(8, 0, &add, &basis).unwrap();
    }
}
