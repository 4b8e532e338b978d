//! Exact character tables (Dixon-Schneider), the epsilon twist, induction
//! and restriction patterns, and McKay quivers.

use crate::cyclo::{CycField, CycNum, Rational};
use crate::error::Error;
use crate::groups::{ConjClasses, FiniteMatrixGroup};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Exact character table. Rows are sorted by (degree, value vector), so the
/// table is deterministic for a fixed group element order.
pub struct CharacterTable {
    pub field: Arc<CycField>,
    pub degrees: Vec<u32>,
    /// values[row][class]
    pub values: Vec<Vec<CycNum>>,
    pub class_sizes: Vec<usize>,
    pub inverse_class: Vec<usize>,
}

impl CharacterTable {
    pub fn num_irreps(&self) -> usize {
        self.degrees.len()
    }

    /// Exact inner product <a, b> = (1/|G|) sum_c |C| a(c) b(c^-1).
    pub fn inner(&self, a: &[CycNum], b: &[CycNum]) -> CycNum {
        let order: usize = self.class_sizes.iter().sum();
        let mut acc = CycNum::zero(&self.field);
        for (c, &sz) in self.class_sizes.iter().enumerate() {
            let term = &a[c] * &b[self.inverse_class[c]];
            acc = &acc + &term.scale(&BigRational::from(BigInt::from(sz)));
        }
        acc.scale(&BigRational::new(BigInt::one(), BigInt::from(order)))
    }

    /// Decompose a class function into irreducible multiplicities.
    /// Errors if any multiplicity is not a non-negative integer.
    pub fn decompose(&self, values: &[CycNum]) -> Result<Vec<u32>, Error> {
        let mut mults = Vec::with_capacity(self.num_irreps());
        for row in &self.values {
            let m = self.inner(values, row);
            let r = m.as_rational().ok_or_else(|| {
                Error::CharacterTable("non-rational inner product".to_string())
            })?;
            if !r.denom().is_one() || r.is_negative() {
                return Err(Error::CharacterTable(format!(
                    "inner product {} is not a non-negative integer",
                    m.render()
                )));
            }
            let n: BigInt = r.to_integer();
            mults.push(u32::try_from(n).map_err(|_| {
                Error::CharacterTable("multiplicity out of range".to_string())
            })?);
        }
        Ok(mults)
    }

    /// Exact row-orthogonality check.
    pub fn verify_orthogonality(&self) -> bool {
        for a in 0..self.num_irreps() {
            for b in 0..self.num_irreps() {
                let ip = self.inner(&self.values[a], &self.values[b]);
                let want_one = a == b;
                if want_one && !ip.is_one() {
                    return false;
                }
                if !want_one && !ip.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn sum_degree_squares(&self) -> usize {
        self.degrees.iter().map(|&d| (d as usize) * (d as usize)).sum()
    }
}

// --- modular linear algebra -------------------------------------------------

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
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

/// Smallest generator of F_p^*.
fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    'outer: for g in 2..p {
        for &f in &factors {
            if pow_mod(g, (p - 1) / f, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("no primitive root found");
}

fn mat_vec(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0u64, |acc, (&a, &b)| (acc + a * b % p) % p))
        .collect()
}

fn det_mod(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut m: Vec<Vec<u64>> = m.to_vec();
    let mut det = 1u64;
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0);
        let piv = match piv {
            Some(r) => r,
            None => return 0,
        };
        if piv != col {
            m.swap(col, piv);
            det = p - det;
            if det == p {
                det = 0;
            }
        }
        det = det * m[col][col] % p;
        let pinv = inv_mod(m[col][col], p);
        for r in (col + 1)..n {
            if m[r][col] == 0 {
                continue;
            }
            let f = m[r][col] * pinv % p;
            for c in col..n {
                let sub = f * m[col][c] % p;
                m[r][c] = (m[r][c] + p - sub) % p;
            }
        }
    }
    det
}

/// Basis of the kernel of m (n x n) mod p, as column vectors.
fn kernel_mod(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if let Some(r) = (row..n).find(|&r| a[r][col] != 0) {
            a.swap(row, r);
            let pinv = inv_mod(a[row][col], p);
            for c in 0..n {
                a[row][c] = a[row][c] * pinv % p;
            }
            for r2 in 0..n {
                if r2 != row && a[r2][col] != 0 {
                    let f = a[r2][col];
                    for c in 0..n {
                        let sub = f * a[row][c] % p;
                        a[r2][c] = (a[r2][c] + p - sub) % p;
                    }
                }
            }
            pivot_col_of_row.push(col);
            row += 1;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = (p - a[r][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Echelonized subspace of F_p^n (columns of the ambient space).
#[derive(Clone)]
struct Subspace {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn from_vectors(vecs: &[Vec<u64>], p: u64) -> Subspace {
        let n = vecs.first().map_or(0, |v| v.len());
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for v in vecs {
            let mut v = v.clone();
            for (b, &piv) in basis.iter().zip(&pivots) {
                if v[piv] != 0 {
                    let f = v[piv];
                    for c in 0..n {
                        let sub = f * b[c] % p;
                        v[c] = (v[c] + p - sub) % p;
                    }
                }
            }
            if let Some(piv) = (0..n).find(|&c| v[c] != 0) {
                let inv = inv_mod(v[piv], p);
                for c in 0..n {
                    v[c] = v[c] * inv % p;
                }
                // clear the new pivot in earlier rows
                for i in 0..basis.len() {
                    if basis[i][piv] != 0 {
                        let f = basis[i][piv];
                        for c in 0..n {
                            let sub = f * v[c] % p;
                            basis[i][c] = (basis[i][c] + p - sub) % p;
                        }
                    }
                }
                basis.push(v);
                pivots.push(piv);
            }
        }
        Subspace { basis, pivots }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of v in this basis (assumes v is in the span).
    fn coords(&self, v: &[u64]) -> Vec<u64> {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    /// Matrix of the ambient operator m restricted to this subspace.
    fn restrict(&self, m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
        let d = self.dim();
        // column j = coords of m * basis[j]
        let mut r = vec![vec![0u64; d]; d];
        for j in 0..d {
            let img = mat_vec(m, &self.basis[j], p);
            let co = self.coords(&img);
            for (i, &c) in co.iter().enumerate() {
                r[i][j] = c;
            }
        }
        r
    }
}

// --- Dixon-Schneider --------------------------------------------------------

/// Compute the exact character table of a finite matrix group.
///
/// Class-sum matrices are diagonalized over F_p for a prime p = 1 mod
/// exponent(G); eigenvalue digit counts are recovered by a discrete Fourier
/// inversion and lifted to exact cyclotomic values in the session field.
/// The split order is deterministic for a fixed seed.
pub fn character_table(
    group: &FiniteMatrixGroup,
    classes: &ConjClasses,
    seed: u64,
) -> Result<CharacterTable, Error> {
    let field = group.field().clone();
    let k = classes.count();
    let order = group.order() as u64;
    let exponent = group.exponent() as u64;

    // prime with p = 1 mod exponent and p > 2|G| (ample for degree recovery)
    let mut p = (2 * order / exponent + 1) * exponent + 1;
    while !(is_prime(p) && p > 2 * order) {
        p += exponent;
    }
    let z = primitive_root(p);

    // class-sum structure constants: (m_i)[j][l] = #{x in C_i : x^-1 z_l in C_j}
    let class_sizes: Vec<usize> = classes.classes.iter().map(|c| c.len()).collect();
    let inverse_class: Vec<usize> = (0..k)
        .map(|c| classes.class_of[group.inverse(classes.reps[c])])
        .collect();
    let mut mats: Vec<Vec<Vec<u64>>> = vec![vec![vec![0u64; k]; k]; k];
    for i in 0..k {
        for l in 0..k {
            let zrep = classes.reps[l];
            for &x in &classes.classes[i] {
                let y = group.mul_idx(group.inverse(x), zrep);
                let j = classes.class_of[y];
                mats[i][j][l] += 1;
            }
        }
    }
    for m in &mut mats {
        for row in m {
            for v in row {
                *v %= p;
            }
        }
    }

    // split the common eigenspaces
    let full = Subspace::from_vectors(
        &(0..k)
            .map(|i| {
                let mut v = vec![0u64; k];
                v[i] = 1;
                v
            })
            .collect::<Vec<_>>(),
        p,
    );
    let mut spaces = vec![full];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0usize;
    loop {
        if spaces.iter().all(|s| s.dim() == 1) {
            break;
        }
        if attempts > k + 60 {
            return Err(Error::CharacterTable(
                "eigenspace splitting did not converge".to_string(),
            ));
        }
        // first the class sums themselves, then random combinations
        let m: Vec<Vec<u64>> = if attempts + 1 < k {
            mats[attempts + 1].clone()
        } else {
            let mut m = vec![vec![0u64; k]; k];
            for mi in &mats {
                let c = rng.gen_range(0..p);
                for r in 0..k {
                    for cidx in 0..k {
                        m[r][cidx] = (m[r][cidx] + c * mi[r][cidx]) % p;
                    }
                }
            }
            m
        };
        attempts += 1;
        let mut next = Vec::new();
        for s in &spaces {
            if s.dim() == 1 {
                next.push(s.clone());
                continue;
            }
            let r = s.restrict(&m, p);
            let d = s.dim();
            let mut found = Vec::new();
            for lam in 0..p {
                let mut shifted = r.clone();
                for idx in 0..d {
                    shifted[idx][idx] = (shifted[idx][idx] + p - lam) % p;
                }
                if det_mod(&shifted, p) == 0 {
                    let ker = kernel_mod(&shifted, p);
                    if !ker.is_empty() {
                        // map back to ambient coordinates
                        let vecs: Vec<Vec<u64>> = ker
                            .iter()
                            .map(|co| {
                                let mut v = vec![0u64; k];
                                for (j, &c) in co.iter().enumerate() {
                                    for idx in 0..k {
                                        v[idx] = (v[idx] + c * s.basis[j][idx]) % p;
                                    }
                                }
                                v
                            })
                            .collect();
                        found.push(Subspace::from_vectors(&vecs, p));
                    }
                }
            }
            let total: usize = found.iter().map(|f| f.dim()).sum();
            if total == d {
                next.extend(found);
            } else {
                // defective restriction (shouldn't happen for commuting
                // semisimple families): keep and try another combination
                next.push(s.clone());
            }
        }
        spaces = next;
    }

    // each 1-dim space is a central character omega; recover chi mod p
    let sqrt_bound = (1..=order).take_while(|d| d * d <= order).last().unwrap_or(1);
    let mut rows_mod_p: Vec<(u64, Vec<u64>)> = Vec::new(); // (degree, chi mod p per class)
    for s in &spaces {
        let mut omega = s.basis[0].clone();
        if omega[0] == 0 {
            return Err(Error::CharacterTable(
                "central character with zero identity coordinate".to_string(),
            ));
        }
        let norm = inv_mod(omega[0], p);
        for v in &mut omega {
            *v = *v * norm % p;
        }
        // 1/deg^2 = (1/|G|) sum_i omega_i omega_{i*} / n_i
        let mut s_acc = 0u64;
        for i in 0..k {
            let term = omega[i] * omega[inverse_class[i]] % p;
            s_acc = (s_acc + term * inv_mod(class_sizes[i] as u64 % p, p)) % p;
        }
        let deg_sq = order % p * inv_mod(s_acc, p) % p;
        let deg = (1..=sqrt_bound as u64)
            .find(|d| d * d % p == deg_sq)
            .ok_or_else(|| Error::CharacterTable("degree recovery failed".to_string()))?;
        let chi: Vec<u64> = (0..k)
            .map(|i| deg * omega[i] % p * inv_mod(class_sizes[i] as u64 % p, p) % p)
            .collect();
        rows_mod_p.push((deg, chi));
    }

    // lift each row to exact cyclotomic values
    let mut power_class: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut class_elt_order: Vec<usize> = Vec::with_capacity(k);
    for c in 0..k {
        let rep = classes.reps[c];
        let n = group.element_order(rep);
        let mut pows = Vec::with_capacity(n);
        let mut cur = 0usize; // identity
        for _ in 0..n {
            pows.push(classes.class_of[cur]);
            cur = group.mul_idx(cur, rep);
        }
        class_elt_order.push(n);
        power_class.push(pows);
    }

    let mut rows: Vec<(u32, Vec<CycNum>)> = Vec::new();
    for (deg, chi_p) in &rows_mod_p {
        let mut values = Vec::with_capacity(k);
        for c in 0..k {
            let n = class_elt_order[c] as u64;
            let theta = pow_mod(z, (p - 1) / n, p);
            let ninv = inv_mod(n % p, p);
            let mut digits: Vec<u64> = Vec::with_capacity(n as usize);
            for j in 0..n {
                let mut acc = 0u64;
                for (l, &cl) in power_class[c].iter().enumerate() {
                    let tw = pow_mod(theta, (j * (l as u64)) % (p - 1).max(1), p);
                    // theta^{-jl} = theta^{jl} inverted
                    acc = (acc + chi_p[cl] * inv_mod(tw, p)) % p;
                }
                let a = acc * ninv % p;
                if a > *deg {
                    return Err(Error::CharacterTable(format!(
                        "digit {} exceeds degree {}",
                        a, deg
                    )));
                }
                digits.push(a);
            }
            values.push(value_from_digits(&digits, n as u32, &field)?);
        }
        rows.push((*deg as u32, values));
    }

    rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let table = CharacterTable {
        field,
        degrees: rows.iter().map(|r| r.0).collect(),
        values: rows.into_iter().map(|r| r.1).collect(),
        class_sizes,
        inverse_class,
    };
    if table.sum_degree_squares() != group.order() {
        return Err(Error::CharacterTable(
            "degree squares do not sum to the group order".to_string(),
        ));
    }
    if !table.verify_orthogonality() {
        return Err(Error::CharacterTable(
            "row orthogonality failed".to_string(),
        ));
    }
    Ok(table)
}

/// Turn eigenvalue digit counts (multiplicity of zeta_n^j) into an element
/// of the session field. When n does not divide the conductor N the value
/// must lie in Q(zeta_gcd(n,N)); anything else is an error.
fn value_from_digits(digits: &[u64], n: u32, field: &Arc<CycField>) -> Result<CycNum, Error> {
    let ncond = field.conductor();
    if ncond % n == 0 {
        let step = (ncond / n) as i64;
        let mut acc = CycNum::zero(field);
        for (j, &a) in digits.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let term = CycNum::root_of_unity(field, step * j as i64)
                .scale(&BigRational::from(BigInt::from(a)));
            acc = &acc + &term;
        }
        return Ok(acc);
    }
    // transient mini-field Q(zeta_n)
    let mini = CycField::new(n);
    let mut v = CycNum::zero(&mini);
    for (j, &a) in digits.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let term =
            CycNum::root_of_unity(&mini, j as i64).scale(&BigRational::from(BigInt::from(a)));
        v = &v + &term;
    }
    let g = num_integer::gcd(n, ncond);
    // express v in powers of zeta_g = zeta_n^(n/g): solve a small rational system
    let gdeg = crate::cyclo::phi(g) as usize;
    let mdeg = mini.degree();
    let basis: Vec<CycNum> = (0..gdeg)
        .map(|j| CycNum::root_of_unity(&mini, (n / g) as i64 * j as i64))
        .collect();
    // least-squares-free exact solve: [basis coords | v]
    let mut a: Vec<Vec<Rational>> = (0..mdeg)
        .map(|r| (0..gdeg).map(|c| basis[c].coeffs()[r].clone()).collect())
        .collect();
    let mut rhs: Vec<Rational> = v.coeffs().to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0usize;
    for col in 0..gdeg {
        if let Some(r) = (row..mdeg).find(|&r| !a[r][col].is_zero()) {
            a.swap(row, r);
            rhs.swap(row, r);
            let pv = a[row][col].clone();
            for c in 0..gdeg {
                a[row][c] /= &pv;
            }
            rhs[row] /= &pv;
            for r2 in 0..mdeg {
                if r2 != row && !a[r2][col].is_zero() {
                    let f = a[r2][col].clone();
                    for c in 0..gdeg {
                        let t = &a[row][c] * &f;
                        a[r2][c] -= t;
                    }
                    let t = &rhs[row] * &f;
                    rhs[r2] -= t;
                }
            }
            pivots.push((row, col));
            row += 1;
        }
    }
    // consistency: residual rows must vanish
    for r in row..mdeg {
        if !rhs[r].is_zero() {
            return Err(Error::CharacterTable(format!(
                "character value in Q(zeta_{}) does not lie in session field Q(zeta_{})",
                n, ncond
            )));
        }
    }
    let mut coeffs = vec![BigRational::zero(); gdeg];
    for &(r, c) in &pivots {
        coeffs[c] = rhs[r].clone();
    }
    let mut acc = CycNum::zero(field);
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = CycNum::root_of_unity(field, (ncond / g) as i64 * j as i64).scale(c);
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Natural character: traces of class representatives.
pub fn natural_character(group: &FiniteMatrixGroup, classes: &ConjClasses) -> Vec<CycNum> {
    classes
        .reps
        .iter()
        .map(|&r| group.elements[r].trace())
        .collect()
}

// --- quivers -----------------------------------------------------------------

/// McKay quiver: adjacency[i][j] = multiplicity of irrep j in nat (x) irrep i.
pub struct Quiver {
    pub labels: Vec<String>,
    pub degrees: Vec<u32>,
    pub adjacency: Vec<Vec<u32>>,
}

pub fn mckay_quiver(
    group: &FiniteMatrixGroup,
    classes: &ConjClasses,
    table: &CharacterTable,
) -> Result<Quiver, Error> {
    let natural = natural_character(group, classes);
    let k = table.num_irreps();
    let mut adjacency = vec![vec![0u32; k]; k];
    for i in 0..k {
        let prod: Vec<CycNum> = (0..classes.count())
            .map(|c| &natural[c] * &table.values[i][c])
            .collect();
        let mults = table.decompose(&prod)?;
        adjacency[i] = mults;
    }
    let labels = (0..k).map(|i| format!("r{}", i)).collect();
    Ok(Quiver {
        labels,
        degrees: table.degrees.clone(),
        adjacency,
    })
}

impl Quiver {
    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.num_vertices();
        (0..k).all(|i| (0..k).all(|j| self.adjacency[i][j] == self.adjacency[j][i]))
    }

    /// sum_j A[i][j] deg_j = 2 deg_i for every i.
    pub fn null_vector_check(&self) -> bool {
        let k = self.num_vertices();
        (0..k).all(|i| {
            let s: u32 = (0..k)
                .map(|j| self.adjacency[i][j] * self.degrees[j])
                .sum();
            s == 2 * self.degrees[i]
        })
    }

    /// Degrees of the underlying simple graph (used in tests).
    pub fn graph_degree_sequence(&self) -> Vec<usize> {
        let k = self.num_vertices();
        let mut ds: Vec<usize> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| j != i && (self.adjacency[i][j] > 0 || self.adjacency[j][i] > 0))
                    .count()
            })
            .collect();
        ds.sort_unstable();
        ds
    }

    pub fn to_dot(&self, name: &str) -> String {
        let k = self.num_vertices();
        let mut s = String::new();
        let symmetric = self.is_symmetric();
        let kind = if symmetric { "graph" } else { "digraph" };
        s.push_str(&format!("{} \"{}\" {{\n", kind, name));
        for i in 0..k {
            s.push_str(&format!(
                "  n{} [label=\"{} (dim {})\"];\n",
                i, self.labels[i], self.degrees[i]
            ));
        }
        for i in 0..k {
            for j in 0..k {
                if i > j {
                    continue;
                }
                let fwd = self.adjacency[i][j];
                let bwd = self.adjacency[j][i];
                if i == j {
                    for _ in 0..fwd {
                        s.push_str(&format!(
                            "  n{} {} n{};\n",
                            i,
                            if symmetric { "--" } else { "->" },
                            i
                        ));
                    }
                    continue;
                }
                if fwd == bwd {
                    for _ in 0..fwd {
                        if symmetric {
                            s.push_str(&format!("  n{} -- n{};\n", i, j));
                        } else {
                            s.push_str(&format!("  n{} -> n{} [dir=none];\n", i, j));
                        }
                    }
                } else {
                    for _ in 0..fwd {
                        s.push_str(&format!("  n{} -> n{};\n", i, j));
                    }
                    for _ in 0..bwd {
                        s.push_str(&format!("  n{} -> n{};\n", j, i));
                    }
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.labels.iter().zip(&self.degrees)
                .map(|(l, d)| serde_json::json!({"name": l, "dim": d}))
                .collect::<Vec<_>>(),
            "adjacency": self.adjacency,
        })
    }
}

/// Affine Dynkin graph templates used to check H-quiver shapes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AffineTemplate {
    /// Affine A_{n-1}: a cycle with n vertices (n >= 3).
    A(usize),
    /// Affine D_n: n+1 vertices.
    D(usize),
    E6,
    E7,
    E8,
}

pub fn template_adjacency(t: AffineTemplate) -> Vec<Vec<u32>> {
    let edges: Vec<(usize, usize)>;
    let n;
    match t {
        AffineTemplate::A(len) => {
            n = len;
            edges = (0..len).map(|i| (i, (i + 1) % len)).collect();
        }
        AffineTemplate::D(dn) => {
            // internal chain of dn-3 vertices with two forks at each end
            assert!(dn >= 5, "affine D_n template needs n >= 5");
            n = dn + 1;
            let chain = dn - 3;
            let mut e = Vec::new();
            for i in 0..chain - 1 {
                e.push((i, i + 1));
            }
            e.push((0, chain));
            e.push((0, chain + 1));
            e.push((chain - 1, chain + 2));
            e.push((chain - 1, chain + 3));
            edges = e;
        }
        AffineTemplate::E6 => {
            n = 7;
            edges = vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)];
        }
        AffineTemplate::E7 => {
            n = 8;
            edges = vec![(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 6), (0, 7)];
        }
        AffineTemplate::E8 => {
            n = 9;
            edges = vec![
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (0, 6),
                (6, 7),
                (0, 8),
            ];
        }
    }
    let mut adj = vec![vec![0u32; n]; n];
    for (a, b) in edges {
        adj[a][b] = 1;
        adj[b][a] = 1;
    }
    adj
}

/// Undirected graph isomorphism between a quiver's underlying graph and a
/// template adjacency matrix.
pub fn quiver_matches_template(q: &Quiver, t: AffineTemplate) -> bool {
    let ta = template_adjacency(t);
    if q.num_vertices() != ta.len() {
        return false;
    }
    use petgraph::graph::UnGraph;
    let to_graph = |adj: &Vec<Vec<u32>>| {
        let n = adj.len();
        let mut g = UnGraph::<(), ()>::new_undirected();
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if adj[i][j] > 0 || adj[j][i] > 0 {
                    g.add_edge(nodes[i], nodes[j], ());
                }
            }
        }
        g
    };
    let g1 = to_graph(&q.adjacency);
    let g2 = to_graph(&ta);
    petgraph::algo::is_isomorphic(&g1, &g2)
}

// --- epsilon twist and induction ---------------------------------------------

/// The sign character of G with kernel H: +1 inside H, -1 outside.
pub fn epsilon_character(
    group: &FiniteMatrixGroup,
    classes: &ConjClasses,
    h: &FiniteMatrixGroup,
) -> Vec<CycNum> {
    let field = group.field();
    classes
        .reps
        .iter()
        .map(|&r| {
            if h.contains(&group.elements[r]) {
                CycNum::one(field)
            } else {
                CycNum::from_int(field, -1)
            }
        })
        .collect()
}

/// Locate a class function among the table rows.
pub fn find_row(table: &CharacterTable, values: &[CycNum]) -> Option<usize> {
    table.values.iter().position(|row| row.as_slice() == values)
}

/// Check the index-2 induction/restriction pattern between H and G:
/// a self-contragredient H-irrep induces to a sum of two distinct irreps
/// swapped by the epsilon twist, each restricting back to the original;
/// any other H-irrep induces irreducibly to an epsilon-fixed irrep, and the
/// restriction splits as the irrep plus its contragredient.
pub fn verify_induction_pattern(
    g_group: &FiniteMatrixGroup,
    g_classes: &ConjClasses,
    g_table: &CharacterTable,
    h_group: &FiniteMatrixGroup,
    h_classes: &ConjClasses,
    h_table: &CharacterTable,
) -> Result<Vec<String>, Error> {
    let field = g_group.field();
    let kg = g_classes.count();
    let kh = h_classes.count();
    let mut notes = Vec::new();

    // H-class index of a G element that lies in H
    let h_class_of_g_elt: Vec<Option<usize>> = (0..g_group.order())
        .map(|i| {
            h_group
                .index_of(&g_group.elements[i])
                .map(|hi| h_classes.class_of[hi])
        })
        .collect();

    let eps = epsilon_character(g_group, g_classes, h_group);
    if find_row(g_table, &eps).is_none() {
        return Err(Error::CharacterTable(
            "epsilon is not a row of the character table".to_string(),
        ));
    }

    // restriction of a G-row to H-classes
    let restrict = |row: &[CycNum]| -> Vec<CycNum> {
        (0..kh)
            .map(|hc| {
                let helt = h_classes.reps[hc];
                let gi = g_group
                    .index_of(&h_group.elements[helt])
                    .expect("H element not in G");
                row[g_classes.class_of[gi]].clone()
            })
            .collect()
    };

    let order_h = BigRational::from(BigInt::from(h_group.order()));
    for (hi, hrow) in h_table.values.iter().enumerate() {
        // induced character on G-classes
        let mut ind: Vec<CycNum> = Vec::with_capacity(kg);
        for gc in 0..kg {
            let rep = g_classes.reps[gc];
            let mut acc = CycNum::zero(field);
            for x in 0..g_group.order() {
                let y = g_group.mul_idx(g_group.mul_idx(x, rep), g_group.inverse(x));
                if let Some(hc) = h_class_of_g_elt[y] {
                    acc = &acc + &hrow[hc];
                }
            }
            ind.push(acc.scale(&(BigRational::one() / &order_h)));
        }
        let mults = g_table.decompose(&ind)?;
        let constituents: Vec<usize> = mults
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, _)| i)
            .collect();

        let self_contragredient = (0..kh).all(|c| hrow[c] == hrow[c].conj());
        if self_contragredient {
            if constituents.len() != 2
                || constituents.iter().any(|&c| mults[c] != 1)
            {
                return Err(Error::CharacterTable(format!(
                    "induction of self-contragredient H-irrep {} did not split into two distinct irreps",
                    hi
                )));
            }
            let (a, b) = (constituents[0], constituents[1]);
            // the two pieces are swapped by the epsilon twist
            let twisted: Vec<CycNum> = (0..kg)
                .map(|c| &g_table.values[a][c] * &eps[c])
                .collect();
            if twisted != g_table.values[b] {
                return Err(Error::CharacterTable(format!(
                    "epsilon twist does not exchange the two constituents over H-irrep {}",
                    hi
                )));
            }
            for &c in &constituents {
                if restrict(&g_table.values[c]) != *hrow {
                    return Err(Error::CharacterTable(format!(
                        "constituent of induced H-irrep {} does not restrict back",
                        hi
                    )));
                }
            }
            notes.push(format!("h-irrep {} (dim {}): splits", hi, h_table.degrees[hi]));
        } else {
            if constituents.len() != 1 || mults[constituents[0]] != 1 {
                return Err(Error::CharacterTable(format!(
                    "induction of non-self-contragredient H-irrep {} is not irreducible",
                    hi
                )));
            }
            let c = constituents[0];
            let twisted: Vec<CycNum> =
                (0..kg).map(|cc| &g_table.values[c][cc] * &eps[cc]).collect();
            if twisted != g_table.values[c] {
                return Err(Error::CharacterTable(format!(
                    "irreducible induction over H-irrep {} is not epsilon-fixed",
                    hi
                )));
            }
            // restriction = chi + contragredient(chi)
            let res = restrict(&g_table.values[c]);
            let conj_row: Vec<CycNum> = hrow.iter().map(|v| v.conj()).collect();
            let mut want: Vec<CycNum> = Vec::with_capacity(kh);
            for i in 0..kh {
                want.push(&hrow[i] + &conj_row[i]);
            }
            if res != want {
                return Err(Error::CharacterTable(format!(
                    "restriction of induced H-irrep {} is not chi + contragredient",
                    hi
                )));
            }
            notes.push(format!(
                "h-irrep {} (dim {}): induces irreducibly",
                hi, h_table.degrees[hi]
            ));
        }
    }
    Ok(notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycField;
    use crate::groups::closure;
    use crate::poly::Mat2;

    fn pm_group() -> FiniteMatrixGroup {
        let f = CycField::new(4);
        let minus = Mat2::new(
            CycNum::from_int(&f, -1),
            CycNum::zero(&f),
            CycNum::zero(&f),
            CycNum::from_int(&f, -1),
        );
        closure("pm", &[minus], 10).unwrap()
    }

    #[test]
    fn z2_table() {
        let g = pm_group();
        let classes = g.conjugacy_classes();
        let t = character_table(&g, &classes, 0).unwrap();
        assert_eq!(t.degrees, vec![1, 1]);
        let one = CycNum::one(&t.field);
        let m1 = CycNum::from_int(&t.field, -1);
        // rows sorted: (1,-1) < (1,1) by coefficient order on the second value
        assert!(t.values.contains(&vec![one.clone(), one.clone()]));
        assert!(t.values.contains(&vec![one, m1]));
        assert!(t.verify_orthogonality());
    }

    #[test]
    fn trivial_group_table() {
        let f = CycField::new(4);
        let g = closure("triv", &[Mat2::identity(&f)], 10).unwrap();
        let classes = g.conjugacy_classes();
        let t = character_table(&g, &classes, 0).unwrap();
        assert_eq!(t.degrees, vec![1]);
        assert!(t.values[0][0].is_one());
    }

    #[test]
    fn pm_quiver_doubled_edge() {
        // {I,-I} with its natural 2-dim rep: A[triv][sign] = 2, no loops
        let g = pm_group();
        let classes = g.conjugacy_classes();
        let t = character_table(&g, &classes, 0).unwrap();
        let q = mckay_quiver(&g, &classes, &t).unwrap();
        assert_eq!(q.adjacency[0][1], 2);
        assert_eq!(q.adjacency[1][0], 2);
        assert_eq!(q.adjacency[0][0], 0);
        assert_eq!(q.adjacency[1][1], 0);
        assert!(q.null_vector_check());
        assert!(q.is_symmetric());
    }

    #[test]
    fn digit_lift_collapses_to_smaller_field() {
        // zeta_3 + zeta_3^2 = -1 must lift into Q(zeta_20)
        let f = CycField::new(20);
        let v = value_from_digits(&[0, 1, 1], 3, &f).unwrap();
        assert!(v.is_int(-1));
        // zeta_3 itself must be rejected
        assert!(value_from_digits(&[0, 1, 0], 3, &f).is_err());
        // direct divisor case
        let w = value_from_digits(&[0, 1], 2, &f).unwrap();
        assert!(w.is_int(-1));
    }

    #[test]
    fn templates() {
        let e6 = template_adjacency(AffineTemplate::E6);
        assert_eq!(e6.len(), 7);
        let degs: Vec<usize> = (0..7)
            .map(|i| (0..7).filter(|&j| e6[i][j] > 0).count())
            .collect();
        assert_eq!(degs.iter().filter(|&&d| d == 3).count(), 1);
        assert_eq!(degs.iter().filter(|&&d| d == 1).count(), 3);
        let d5 = template_adjacency(AffineTemplate::D(5));
        assert_eq!(d5.len(), 6);
        // affine D_5: degree sequence 1,1,1,1,3,3
        let mut ds: Vec<usize> = (0..6)
            .map(|i| (0..6).filter(|&j| d5[i][j] > 0).count())
            .collect();
        ds.sort_unstable();
        assert_eq!(ds, vec![1, 1, 1, 1, 3, 3]);
    }
}
