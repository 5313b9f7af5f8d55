//! Finite abelian p-groups with an action of the Frobenius group
//! `F = <σ, τ | σ^p = τ^m = 1, τ⁻¹στ = σ^r>`.
//!
//! A module is `A = Z/n_1 ⊕ … ⊕ Z/n_k` with every `n_i` a power of `p`.
//! Endomorphisms are integer matrices acting on exponent column vectors:
//! column `j` holds the image of the `j`-th generator, row `i` is read
//! modulo `n_i`. The action is on the right, `a^(uv) = (a^u)^v`, so the word
//! `σ^i τ^k` acts by the matrix `T^k S^i` and the defining relation becomes
//! `T S T⁻¹ = S^r`.
//!
//! Scalars such as `r`, `s = r⁻¹` and `1/m` are given modulo `p` but act on
//! groups of exponent `p^e`. They are replaced by the unique root of unity
//! modulo `p^e` congruent to them (the Teichmüller lift); with any other lift
//! the `e_j` fail to be idempotent.
//!
//! Subgroups are lattices between `Z^k` and `diag(n) Z^k`, see
//! [`crate::lattice`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::abgroup::AbelianGroupStructure;
use crate::arith::{is_prime_u64, mod_inverse};
use crate::lattice::{
    identity, kernel_mod, mat_mul, smith_diagonal, smith_transform, solve_upper, transpose,
    Lattice, Matrix,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("p = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("m = {m} does not divide p - 1 = {}", p - 1)]
    BadM { p: u64, m: u64 },
    #[error("r = {r} does not have order {m} modulo {p}")]
    BadR { p: u64, m: u64, r: u64 },
    #[error("cyclic order {0} is not a positive power of p")]
    BadOrder(u64),
    #[error("{0} has the wrong shape")]
    BadShape(&'static str),
    #[error("{0} is not well defined on the cyclic factors")]
    NotWellDefined(&'static str),
    #[error("relation {0} fails")]
    Relation(&'static str),
    #[error("operation needs m = 2, module has m = {0}")]
    NotDihedral(u64),
    #[error("modules belong to different groups")]
    GroupMismatch,
    #[error("subgroup is not stable under {0}")]
    NotStable(&'static str),
    #[error("#A^G = {0}, expected p")]
    FixedOrder(u128),
    #[error("#A = {order} but p^n = {expected}")]
    GrasOrder { order: u128, expected: u128 },
    #[error("map {0} is not equivariant")]
    NotEquivariant(&'static str),
}

/// `F_mp` given by `p`, `m` and `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FrobeniusGroup {
    pub p: u64,
    pub m: u64,
    pub r: u64,
}

impl FrobeniusGroup {
    pub fn new(p: u64, m: u64, r: u64) -> Result<Self, ModuleError> {
        if p < 3 || !is_prime_u64(p) {
            return Err(ModuleError::BadPrime(p));
        }
        if m == 0 || (p - 1) % m != 0 {
            return Err(ModuleError::BadM { p, m });
        }
        let r = r % p;
        if multiplicative_order(r, p) != Some(m) {
            return Err(ModuleError::BadR { p, m, r });
        }
        Ok(FrobeniusGroup { p, m, r })
    }

    /// `D_p`: `m = 2`, `r = -1`.
    pub fn dihedral(p: u64) -> Result<Self, ModuleError> {
        Self::new(p, 2, p - 1)
    }

    /// `σ` alone (`m = 1`).
    pub fn cyclic(p: u64) -> Result<Self, ModuleError> {
        Self::new(p, 1, 1)
    }

    /// `s = r⁻¹ mod p`.
    pub fn s(&self) -> u64 {
        mod_inverse(self.r as i128, self.p as i128).expect("r is a unit") as u64
    }

    pub fn zero(&self) -> GroupRingElement {
        GroupRingElement { group: *self, terms: BTreeMap::new() }
    }

    /// The word `σ^i τ^k`.
    pub fn word(&self, i: u64, k: u64) -> GroupRingElement {
        let mut terms = BTreeMap::new();
        terms.insert((i % self.p, k % self.m), 1);
        GroupRingElement { group: *self, terms }
    }

    pub fn one(&self) -> GroupRingElement {
        self.word(0, 0)
    }

    pub fn sigma(&self) -> GroupRingElement {
        self.word(1, 0)
    }

    pub fn tau(&self) -> GroupRingElement {
        self.word(0, 1)
    }

    /// `ν = 1 + σ + … + σ^(p-1)`.
    pub fn nu(&self) -> GroupRingElement {
        (0..self.p).fold(self.zero(), |acc, i| acc + self.word(i, 0))
    }
}

fn multiplicative_order(r: u64, p: u64) -> Option<u64> {
    if r % p == 0 {
        return None;
    }
    let mut x = r % p;
    let mut k = 1;
    while x != 1 {
        x = x * r % p;
        k += 1;
    }
    Some(k)
}

/// Integer combination of words `σ^i τ^k`, kept in that normal form using
/// `τ σ = σ^s τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    group: FrobeniusGroup,
    terms: BTreeMap<(u64, u64), i64>,
}

impl GroupRingElement {
    pub fn group(&self) -> FrobeniusGroup {
        self.group
    }

    /// Nonzero terms as `((i, k), c)` for `c σ^i τ^k`.
    pub fn terms(&self) -> impl Iterator<Item = ((u64, u64), i64)> + '_ {
        self.terms.iter().map(|(&w, &c)| (w, c))
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = self.group.zero();
        for (&w, &x) in &self.terms {
            out.push(w, x * c);
        }
        out
    }

    fn push(&mut self, w: (u64, u64), c: i64) {
        let e = self.terms.entry(w).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&w);
        }
    }
}

impl Add for GroupRingElement {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.group, rhs.group);
        for (w, c) in rhs.terms {
            self.push(w, c);
        }
        self
    }
}

impl Neg for GroupRingElement {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1)
    }
}

impl Sub for GroupRingElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let g = self.group;
        assert_eq!(g, rhs.group);
        let s = g.s();
        let mut out = g.zero();
        for (&(a, k), &x) in &self.terms {
            // τ^k σ^b = σ^(b s^k) τ^k
            let sk = (0..k).fold(1, |acc, _| acc * s % g.p);
            for (&(b, l), &y) in &rhs.terms {
                out.push(((a + b * sk) % g.p, (k + l) % g.m), x * y);
            }
        }
        out
    }
}

impl Mul for GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, k), &c) in &self.terms {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            write!(f, "{sign}")?;
            let word = match (i, k) {
                (0, 0) => String::new(),
                (i, 0) => format!("s^{i}"),
                (0, k) => format!("t^{k}"),
                (i, k) => format!("s^{i}t^{k}"),
            };
            match (c.abs(), word.is_empty()) {
                (a, true) => write!(f, "{a}")?,
                (1, false) => write!(f, "{word}")?,
                (a, false) => write!(f, "{a}{word}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// A finite abelian p-group with an `F_mp` action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PGroupModule {
    group: FrobeniusGroup,
    orders: Vec<u64>,
    sigma: Matrix,
    tau: Matrix,
}

/// A subgroup of a [`PGroupModule`], stored as the lattice of exponent
/// vectors that land in it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    orders: Vec<u64>,
    lattice: Lattice,
}

fn reduce_rows(mut m: Matrix, orders: &[u64]) -> Matrix {
    for (row, &n) in m.iter_mut().zip(orders) {
        for x in row.iter_mut() {
            *x = x.rem_euclid(n as i128);
        }
    }
    m
}

fn well_defined(m: &Matrix, source: &[u64], target: &[u64]) -> bool {
    m.len() == target.len()
        && m.iter().all(|row| row.len() == source.len())
        && m.iter().zip(target).all(|(row, &nt)| {
            row.iter().zip(source).all(|(&x, &ns)| (x * ns as i128) % nt as i128 == 0)
        })
}

fn exponent_of(orders: &[u64]) -> i128 {
    orders.iter().copied().max().unwrap_or(1) as i128
}

fn unit_lift(x: i128, p: u64, modulus: i128) -> i128 {
    // x^(p^(e-1)) mod p^e is the root of unity congruent to x
    if modulus == 1 {
        return 0;
    }
    let mut q = modulus / p as i128;
    let mut y = x.rem_euclid(modulus);
    while q > 1 {
        let mut z = 1i128;
        for _ in 0..p {
            z = z * y % modulus;
        }
        y = z;
        q /= p as i128;
    }
    y
}

struct Presentation {
    orders: Vec<u64>,
    mats: Vec<Matrix>,
    keep: Vec<usize>,
    v: Matrix,
    v_inv: Matrix,
}

/// Cyclic decomposition of `Z^k / rowspace(rel)` together with the column
/// matrices of the row endomorphisms `x -> x P` it carries.
fn present(rel: &Matrix, row_endos: &[Matrix]) -> Presentation {
    let st = smith_transform(rel);
    let keep: Vec<usize> = (0..st.diag.len()).filter(|&i| st.diag[i] > 1).collect();
    let orders: Vec<u64> = keep.iter().map(|&i| st.diag[i] as u64).collect();
    let mats = row_endos
        .iter()
        .map(|p| {
            let q = mat_mul(&mat_mul(&st.v_inv, p), &st.v);
            let m: Matrix = keep
                .iter()
                .map(|&a| keep.iter().map(|&b| q[b][a]).collect())
                .collect();
            reduce_rows(m, &orders)
        })
        .collect();
    Presentation { orders, mats, keep, v: st.v, v_inv: st.v_inv }
}

impl PGroupModule {
    /// Validates orders, well-definedness and the group relations.
    pub fn new(
        group: FrobeniusGroup,
        orders: Vec<u64>,
        sigma: Matrix,
        tau: Matrix,
    ) -> Result<Self, ModuleError> {
        let p = group.p;
        for &n in &orders {
            let mut x = n;
            while x > 1 && x % p == 0 {
                x /= p;
            }
            if n < p || x != 1 {
                return Err(ModuleError::BadOrder(n));
            }
        }
        if !well_defined(&sigma, &orders, &orders) {
            return Err(if sigma.len() != orders.len() {
                ModuleError::BadShape("sigma")
            } else {
                ModuleError::NotWellDefined("sigma")
            });
        }
        if !well_defined(&tau, &orders, &orders) {
            return Err(if tau.len() != orders.len() {
                ModuleError::BadShape("tau")
            } else {
                ModuleError::NotWellDefined("tau")
            });
        }
        let module = PGroupModule {
            group,
            sigma: reduce_rows(sigma, &orders),
            tau: reduce_rows(tau, &orders),
            orders,
        };
        let id = module.identity();
        if module.mat_pow(&module.sigma, p) != id {
            return Err(ModuleError::Relation("sigma^p = 1"));
        }
        if module.mat_pow(&module.tau, group.m) != id {
            return Err(ModuleError::Relation("tau^m = 1"));
        }
        let ts = module.mul(&module.tau, &module.sigma);
        let srt = module.mul(&module.mat_pow(&module.sigma, group.r), &module.tau);
        if ts != srt {
            return Err(ModuleError::Relation("tau^-1 sigma tau = sigma^r"));
        }
        Ok(module)
    }

    /// Module with `m = 1` (`τ` trivial).
    pub fn with_sigma(p: u64, orders: Vec<u64>, sigma: Matrix) -> Result<Self, ModuleError> {
        let k = orders.len();
        Self::new(FrobeniusGroup::cyclic(p)?, orders, sigma, identity(k))
    }

    /// The zero module.
    pub fn trivial(group: FrobeniusGroup) -> Self {
        PGroupModule { group, orders: vec![], sigma: vec![], tau: vec![] }
    }

    /// `Z[x]/(x^p - 1, p^exp, J)` where `J` is the smallest `F`-stable ideal
    /// containing `gens`. Here `σ` is multiplication by `x` and `τ` is
    /// `twist` times `f(x) -> f(x^r)`. Polynomials are coefficient lists,
    /// constant term first.
    pub fn from_ideal(
        group: FrobeniusGroup,
        twist: i64,
        gens: &[Vec<i64>],
        exp: u32,
    ) -> Result<Self, ModuleError> {
        let p = group.p as usize;
        let r = group.r as usize;
        let modulus = (group.p as i128).pow(exp);
        let shift = |f: &[i128]| -> Vec<i128> { (0..p).map(|i| f[(i + p - 1) % p]).collect() };
        let frob = |f: &[i128]| -> Vec<i128> {
            let mut out = vec![0; p];
            for (i, &c) in f.iter().enumerate() {
                out[i * r % p] += c;
            }
            out
        };
        let mut rows = Vec::new();
        for g in gens {
            let mut f: Vec<i128> = vec![0; p];
            for (i, &c) in g.iter().enumerate() {
                f[i % p] += c as i128;
            }
            for _ in 0..group.m {
                let mut h = f.clone();
                for _ in 0..p {
                    rows.push(h.clone());
                    h = shift(&h);
                }
                f = frob(&f);
            }
        }
        let lat = Lattice::generated(p, modulus, &rows);
        let mut ps: Matrix = vec![vec![0; p]; p];
        let mut pt: Matrix = vec![vec![0; p]; p];
        for i in 0..p {
            ps[i][(i + 1) % p] = 1;
            pt[i][i * r % p] = twist as i128;
        }
        let pres = present(lat.rows(), &[ps, pt]);
        let mut mats = pres.mats.into_iter();
        Self::new(group, pres.orders, mats.next().unwrap(), mats.next().unwrap())
    }

    pub fn group(&self) -> FrobeniusGroup {
        self.group
    }

    pub fn p(&self) -> u64 {
        self.group.p
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    pub fn tau(&self) -> &Matrix {
        &self.tau
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u128 {
        self.orders.iter().map(|&n| n as u128).product()
    }

    /// Largest cyclic order, the exponent of the group.
    pub fn exponent(&self) -> i128 {
        exponent_of(&self.orders)
    }

    pub fn structure(&self) -> AbelianGroupStructure {
        AbelianGroupStructure::from_cyclic_orders(&self.orders)
    }

    pub fn identity(&self) -> Matrix {
        identity(self.rank())
    }

    /// Product of endomorphism matrices, reduced.
    pub fn mul(&self, x: &Matrix, y: &Matrix) -> Matrix {
        reduce_rows(mat_mul(x, y), &self.orders)
    }

    fn add(&self, x: &Matrix, y: &Matrix, c: i128) -> Matrix {
        let sum = x
            .iter()
            .zip(y)
            .map(|(a, b)| a.iter().zip(b).map(|(u, v)| u + c * v).collect())
            .collect();
        reduce_rows(sum, &self.orders)
    }

    fn mat_pow(&self, x: &Matrix, e: u64) -> Matrix {
        let mut out = self.identity();
        let mut base = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(&out, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        out
    }

    /// Image of an element given by its exponent vector.
    pub fn act(&self, m: &Matrix, x: &[i128]) -> Vec<i128> {
        m.iter()
            .zip(&self.orders)
            .map(|(row, &n)| row.iter().zip(x).map(|(a, b)| a * b).sum::<i128>().rem_euclid(n as i128))
            .collect()
    }

    /// Matrix of a group-ring element.
    pub fn eval(&self, w: &GroupRingElement) -> Matrix {
        assert_eq!(w.group, self.group, "element of a different group ring");
        let k = self.rank();
        let mut out = vec![vec![0; k]; k];
        for ((i, t), c) in w.terms() {
            let m = self.mul(&self.mat_pow(&self.tau, t), &self.mat_pow(&self.sigma, i));
            out = self.add(&out, &m, c as i128);
        }
        out
    }

    /// Whether two group-ring elements act identically.
    pub fn same_action(&self, x: &Matrix, y: &Matrix) -> bool {
        reduce_rows(x.clone(), &self.orders) == reduce_rows(y.clone(), &self.orders)
    }

    fn lattice_of(&self, gens: &[Vec<i128>]) -> Lattice {
        let k = self.rank();
        let mut all = gens.to_vec();
        for (i, &n) in self.orders.iter().enumerate() {
            let mut row = vec![0; k];
            row[i] = n as i128;
            all.push(row);
        }
        Lattice::generated(k, self.exponent(), &all)
    }

    pub fn subgroup(&self, gens: &[Vec<i128>]) -> Subgroup {
        Subgroup { orders: self.orders.clone(), lattice: self.lattice_of(gens) }
    }

    pub fn whole(&self) -> Subgroup {
        let k = self.rank();
        self.subgroup(&identity(k))
    }

    pub fn zero_subgroup(&self) -> Subgroup {
        self.subgroup(&[])
    }

    /// Image of a subgroup under an endomorphism matrix.
    pub fn map(&self, m: &Matrix, s: &Subgroup) -> Subgroup {
        let gens: Vec<Vec<i128>> = s.lattice.rows().iter().map(|row| self.act(m, row)).collect();
        self.subgroup(&gens)
    }

    /// `S^w`.
    pub fn apply(&self, w: &GroupRingElement, s: &Subgroup) -> Subgroup {
        self.map(&self.eval(w), s)
    }

    pub fn image(&self, w: &GroupRingElement) -> Subgroup {
        self.image_of(&self.eval(w))
    }

    pub fn image_of(&self, m: &Matrix) -> Subgroup {
        self.map(m, &self.whole())
    }

    pub fn kernel(&self, w: &GroupRingElement) -> Subgroup {
        self.kernel_of(&self.eval(w))
    }

    pub fn kernel_of(&self, m: &Matrix) -> Subgroup {
        let gens = kernel_rows(m, &self.orders, &self.orders);
        self.subgroup(&gens)
    }

    /// `A^G`, the kernel of `σ - 1`.
    pub fn fixed(&self) -> Subgroup {
        let g = self.group;
        self.kernel(&(g.sigma() - g.one()))
    }

    /// Matrix of `e_j = (1/m) Σ_k s^(jk) τ^k` with lifted scalars.
    pub fn idempotent(&self, j: u64) -> Matrix {
        let g = self.group;
        let e = self.exponent();
        let inv_m = mod_inverse(g.m as i128, e).unwrap_or(0);
        let s = unit_lift(g.s() as i128, g.p, e);
        let sj = (0..j).fold(1i128, |acc, _| acc * s % e.max(1));
        let k = self.rank();
        let mut out = vec![vec![0; k]; k];
        let mut coeff = inv_m;
        let mut tk = self.identity();
        for _ in 0..g.m {
            out = self.add(&out, &tk, coeff);
            coeff = coeff * sj % e.max(1);
            tk = self.mul(&self.tau, &tk);
        }
        out
    }

    /// `A(j) = e_j A`, on which `τ` acts as `r^j`.
    pub fn eigenspace(&self, j: u64) -> Subgroup {
        self.image_of(&self.idempotent(j % self.group.m))
    }

    /// `(A^+, A^-)` for dihedral modules.
    pub fn plus_minus(&self) -> Result<(Subgroup, Subgroup), ModuleError> {
        if self.group.m != 2 {
            return Err(ModuleError::NotDihedral(self.group.m));
        }
        Ok((self.eigenspace(0), self.eigenspace(1)))
    }

    /// Block sum of two modules over the same group.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, ModuleError> {
        if self.group != other.group {
            return Err(ModuleError::GroupMismatch);
        }
        let (k1, k2) = (self.rank(), other.rank());
        let block = |x: &Matrix, y: &Matrix| -> Matrix {
            let mut out = vec![vec![0; k1 + k2]; k1 + k2];
            for i in 0..k1 {
                out[i][..k1].copy_from_slice(&x[i]);
            }
            for i in 0..k2 {
                out[k1 + i][k1..].copy_from_slice(&y[i]);
            }
            out
        };
        let mut orders = self.orders.clone();
        orders.extend(&other.orders);
        Self::new(
            self.group,
            orders,
            block(&self.sigma, &other.sigma),
            block(&self.tau, &other.tau),
        )
    }

    /// Same group and `σ`, with `τ` replaced by `c τ`.
    pub fn scale_tau(&self, c: i128) -> Result<Self, ModuleError> {
        let tau = self.tau.iter().map(|row| row.iter().map(|x| c * x).collect()).collect();
        Self::new(self.group, self.orders.clone(), self.sigma.clone(), tau)
    }

    fn check_stable(&self, s: &Subgroup) -> Result<(), ModuleError> {
        if !self.map(&self.sigma, s).is_subgroup_of(s) {
            return Err(ModuleError::NotStable("sigma"));
        }
        if !self.map(&self.tau, s).is_subgroup_of(s) {
            return Err(ModuleError::NotStable("tau"));
        }
        Ok(())
    }

    /// A stable subgroup as a module, with its inclusion matrix.
    pub fn submodule(&self, s: &Subgroup) -> Result<(PGroupModule, Matrix), ModuleError> {
        self.check_stable(s)?;
        let k = self.rank();
        if k == 0 {
            return Ok((Self::trivial(self.group), vec![]));
        }
        let w = s.lattice.rows();
        let n_diag: Matrix = (0..k)
            .map(|i| (0..k).map(|j| if i == j { self.orders[i] as i128 } else { 0 }).collect())
            .collect();
        let rel = solve_upper(w, &n_diag).expect("subgroup lattice contains the relations");
        let induced = |m: &Matrix| solve_upper(w, &mat_mul(w, &transpose(m))).expect("stable");
        let pres = present(&rel, &[induced(&self.sigma), induced(&self.tau)]);
        let basis = mat_mul(&pres.v_inv, w);
        let iota: Matrix = (0..k)
            .map(|i| pres.keep.iter().map(|&a| basis[a][i]).collect())
            .collect();
        let iota = reduce_rows(iota, &self.orders);
        let mut mats = pres.mats.into_iter();
        let sub = Self::new(self.group, pres.orders, mats.next().unwrap(), mats.next().unwrap())?;
        Ok((sub, iota))
    }

    /// Quotient by a stable subgroup, with its projection matrix.
    pub fn quotient(&self, s: &Subgroup) -> Result<(PGroupModule, Matrix), ModuleError> {
        self.check_stable(s)?;
        if self.rank() == 0 {
            return Ok((Self::trivial(self.group), vec![]));
        }
        let pres = present(s.lattice.rows(), &[transpose(&self.sigma), transpose(&self.tau)]);
        let pi: Matrix = pres
            .keep
            .iter()
            .map(|&a| (0..self.rank()).map(|i| pres.v[i][a]).collect())
            .collect();
        let pi = reduce_rows(pi, &pres.orders);
        let mut mats = pres.mats.into_iter();
        let q = Self::new(self.group, pres.orders, mats.next().unwrap(), mats.next().unwrap())?;
        Ok((q, pi))
    }

    /// Smallest `n` with `(σ - 1)^n = 0`.
    pub fn sigma_nilpotency(&self) -> u32 {
        let g = self.group;
        let d = self.eval(&(g.sigma() - g.one()));
        let zero = vec![vec![0; self.rank()]; self.rank()];
        let mut power = self.identity();
        let mut n = 0;
        while power != zero {
            power = self.mul(&power, &d);
            n += 1;
        }
        n
    }

    /// `A^(1-σ) = A^(1+τ) A^(1+στ)`.
    pub fn verify_lst(&self) -> Result<bool, ModuleError> {
        Ok(self.lst_report()?.equal)
    }

    pub fn lst_report(&self) -> Result<LstReport, ModuleError> {
        let g = self.group;
        if g.m != 2 {
            return Err(ModuleError::NotDihedral(g.m));
        }
        let lhs = self.image(&(g.one() - g.sigma()));
        let rhs = self
            .image(&(g.one() + g.tau()))
            .join(&self.image(&(g.one() + g.sigma() * g.tau())));
        // τ acts on A / A^(1-σ) as -1 exactly when 1 + τ maps A into A^(1-σ)
        let tau_negates_coinvariants = self.image(&(g.one() + g.tau())).is_subgroup_of(&lhs);
        Ok(LstReport {
            inclusion: lhs.is_subgroup_of(&rhs),
            equal: lhs == rhs,
            tau_negates_coinvariants,
        })
    }

    /// Structure predicted for a module with `#A^G = p`.
    pub fn gras_structure(&self) -> Result<GrasPrediction, ModuleError> {
        let p = self.group.p;
        let fixed = self.fixed().order();
        if fixed != p as u128 {
            return Err(ModuleError::FixedOrder(fixed));
        }
        let n = self.sigma_nilpotency();
        let nu_trivial = self.image(&self.group.nu()).is_trivial();
        let expected = (p as u128).pow(n);
        if self.order() != expected {
            return Err(ModuleError::GrasOrder { order: self.order(), expected });
        }
        let predicted = gras_predicted(p, n, nu_trivial).ok_or(ModuleError::GrasOrder {
            order: self.order(),
            expected,
        })?;
        Ok(GrasPrediction {
            n,
            nu_trivial,
            alpha: n / (p as u32 - 1),
            beta: n % (p as u32 - 1),
            predicted,
        })
    }
}

impl fmt::Display for PGroupModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.group;
        write!(
            f,
            "p={} m={} r={} orders={:?} sigma={:?} tau={:?}",
            g.p, g.m, g.r, self.orders, self.sigma, self.tau
        )
    }
}

/// Exponent vectors `x` in the source with `m x = 0` in the target.
fn kernel_rows(m: &Matrix, source: &[u64], target: &[u64]) -> Vec<Vec<i128>> {
    let k = source.len();
    let e = exponent_of(source).max(exponent_of(target));
    let scaled: Matrix = m
        .iter()
        .zip(target)
        .map(|(row, &n)| row.iter().map(|x| x * (e / n as i128)).collect())
        .collect();
    let mut gens = kernel_mod(&scaled, k, e);
    if gens.is_empty() && scaled.is_empty() {
        gens = identity(k);
    }
    gens
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LstReport {
    /// `A^(1-σ) ⊆ A^(1+τ) A^(1+στ)`, true in every module.
    pub inclusion: bool,
    pub equal: bool,
    /// `τ = -1` on `A / A^(1-σ)`, equivalent to `equal`.
    pub tau_negates_coinvariants: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrasPrediction {
    pub n: u32,
    pub nu_trivial: bool,
    pub alpha: u32,
    pub beta: u32,
    pub predicted: AbelianGroupStructure,
}

/// Structure of a module with `#A^G = p` from `n` and whether `A^ν = 1`.
/// `None` for combinations that cannot occur (`A^ν ≠ 1` with `n < 2`).
pub fn gras_predicted(p: u64, n: u32, nu_trivial: bool) -> Option<AbelianGroupStructure> {
    let pu = p as u32;
    let generic = |n: u32| {
        let (alpha, beta) = (n / (pu - 1), n % (pu - 1));
        let mut exps = vec![alpha + 1; beta as usize];
        exps.extend(std::iter::repeat(alpha).take((pu - 1 - beta) as usize));
        AbelianGroupStructure::from_p_exponents(p, &exps)
    };
    if nu_trivial || n > pu {
        return Some(generic(n));
    }
    if n == pu {
        return Some(AbelianGroupStructure::from_p_exponents(p, &vec![1; pu as usize]));
    }
    if n < 2 {
        return None;
    }
    let mut exps = vec![2];
    exps.extend(std::iter::repeat(1).take(n as usize - 2));
    Some(AbelianGroupStructure::from_p_exponents(p, &exps))
}

impl Subgroup {
    pub fn order(&self) -> u128 {
        let total: u128 = self.orders.iter().map(|&n| n as u128).product();
        total / self.lattice.index()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn structure(&self) -> AbelianGroupStructure {
        let k = self.orders.len();
        if k == 0 {
            return AbelianGroupStructure::trivial();
        }
        let n_diag: Matrix = (0..k)
            .map(|i| (0..k).map(|j| if i == j { self.orders[i] as i128 } else { 0 }).collect())
            .collect();
        let rel = solve_upper(self.lattice.rows(), &n_diag).expect("relations lie in the lattice");
        let inv: Vec<u64> = smith_diagonal(&rel)
            .into_iter()
            .filter(|&d| d > 1)
            .map(|d| d as u64)
            .collect();
        AbelianGroupStructure::from_cyclic_orders(&inv)
    }

    pub fn contains(&self, x: &[i128]) -> bool {
        self.lattice.contains(x)
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        Subgroup { orders: self.orders.clone(), lattice: self.lattice.join(&other.lattice) }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.lattice.rows().iter().all(|r| other.lattice.contains(r))
    }

    /// Exponent vectors generating the subgroup.
    pub fn generators(&self) -> Vec<Vec<i128>> {
        let k = self.orders.len();
        self.lattice
            .rows()
            .iter()
            .filter(|r| (0..k).any(|i| r[i].rem_euclid(self.orders[i] as i128) != 0))
            .map(|r| r.iter().zip(&self.orders).map(|(x, &n)| x.rem_euclid(n as i128)).collect())
            .collect()
    }
}

/// Maps `ι: A -> B` and `π: B -> C` with `ι` equivariant and
/// `π(b^τ) = π(b)^(sτ)`.
#[derive(Debug, Clone, Serialize)]
pub struct TwistedSequence {
    pub a: PGroupModule,
    pub b: PGroupModule,
    pub c: PGroupModule,
    pub iota: Matrix,
    pub pi: Matrix,
}

impl TwistedSequence {
    /// `1 -> S -> B -> B/S -> 1` with `τ` on the quotient multiplied by `r`.
    pub fn from_submodule(b: &PGroupModule, s: &Subgroup) -> Result<Self, ModuleError> {
        let (a, iota) = b.submodule(s)?;
        let (c0, pi) = b.quotient(s)?;
        let r = unit_lift(b.group.r as i128, b.group.p, c0.exponent());
        let c = c0.scale_tau(r)?;
        Ok(TwistedSequence { a, b: b.clone(), c, iota, pi })
    }
}

/// Checks that `1 -> A(j) -> B(j) -> C(j+1) -> 1` is exact for every `j`.
/// Fails with an error when a map is not a homomorphism or not
/// (twisted-)equivariant; returns `false` when some sequence is not exact,
/// including the underlying sequence of groups.
pub fn verify_pes(seq: &TwistedSequence) -> Result<bool, ModuleError> {
    let TwistedSequence { a, b, c, iota, pi } = seq;
    let g = b.group;
    if a.group != g || c.group != g {
        return Err(ModuleError::GroupMismatch);
    }
    if !well_defined(iota, &a.orders, &b.orders) {
        return Err(ModuleError::NotWellDefined("iota"));
    }
    if !well_defined(pi, &b.orders, &c.orders) {
        return Err(ModuleError::NotWellDefined("pi"));
    }
    let iota_ta = reduce_rows(mat_mul(iota, &a.tau), &b.orders);
    let tb_iota = reduce_rows(mat_mul(&b.tau, iota), &b.orders);
    if iota_ta != tb_iota {
        return Err(ModuleError::NotEquivariant("iota"));
    }
    let s = unit_lift(g.s() as i128, g.p, c.exponent());
    let pi_tb = reduce_rows(mat_mul(pi, &b.tau), &c.orders);
    let s_tc_pi: Matrix = mat_mul(&c.tau, pi)
        .into_iter()
        .map(|row| row.into_iter().map(|x| s * x).collect())
        .collect();
    if pi_tb != reduce_rows(s_tc_pi, &c.orders) {
        return Err(ModuleError::NotEquivariant("pi"));
    }
    let push = |m: &Matrix, from: &Subgroup, to: &PGroupModule| -> Subgroup {
        let gens: Vec<Vec<i128>> = from.lattice.rows().iter().map(|x| to.act(m, x)).collect();
        to.subgroup(&gens)
    };
    let ker_pi = b.subgroup(&kernel_rows(pi, &b.orders, &c.orders));
    let im_iota = push(iota, &a.whole(), b);
    if im_iota.order() != a.order() || push(pi, &b.whole(), c) != c.whole() || im_iota != ker_pi {
        return Ok(false);
    }
    for j in 0..g.m {
        let aj = a.eigenspace(j);
        let bj = b.eigenspace(j);
        let ia = push(iota, &aj, b);
        let pb = push(pi, &bj, c);
        let exact = ia.order() == aj.order()
            && ia.is_subgroup_of(&bj)
            && pb == c.eigenspace(j + 1)
            && bj.order() == ia.order() * pb.order();
        if !exact {
            return Ok(false);
        }
    }
    Ok(true)
}

fn random_poly<R: Rng>(p: u64, modulus: i64, rng: &mut R) -> Vec<i64> {
    (0..p).map(|_| rng.gen_range(0..modulus)).collect()
}

fn poly_mul(f: &[i64], g: &[i64], p: usize, modulus: i64) -> Vec<i64> {
    let mut out = vec![0i64; p];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[(i + j) % p] = (out[(i + j) % p] + a * b).rem_euclid(modulus);
        }
    }
    out
}

fn x_minus_one_pow(p: usize, n: u32, modulus: i64) -> Vec<i64> {
    let mut base = vec![0i64; p];
    base[0] = modulus - 1;
    base[1 % p] += 1;
    let mut out = vec![0i64; p];
    out[0] = 1;
    for _ in 0..n {
        out = poly_mul(&out, &base, p, modulus);
    }
    out
}

/// A random module with `m = 1`, `#A^G = p` and `#A <= p^max_exp`.
///
/// These are exactly the cyclic `Z[C_p]`-modules with augmentation ideal of
/// index `p`, so they are drawn as `Z[C_p]/J` with `aug(J) = pZ`.
pub fn random_gras_module<R: Rng>(p: u64, max_exp: u32, rng: &mut R) -> PGroupModule {
    let group = FrobeniusGroup::cyclic(p).expect("odd prime");
    let pu = p as usize;
    loop {
        let exp = rng.gen_range(1..=max_exp);
        let modulus = (p as i64).pow(exp);
        let nu = vec![1i64; pu];
        // u ν + (x-1)^N w has augmentation p u
        let u = rng.gen_range(1..p as i64);
        let big_n = rng.gen_range(1..=max_exp + 1);
        let w = random_poly(p, modulus, rng);
        let tail = poly_mul(&x_minus_one_pow(pu, big_n, modulus), &w, pu, modulus);
        let g: Vec<i64> = (0..pu).map(|i| u * nu[i] + tail[i]).collect();
        let mut gens = vec![g];
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(1..=exp);
            let j = rng.gen_range(0..=pu as u32);
            let h = x_minus_one_pow(pu, j, modulus)
                .into_iter()
                .map(|c| c * (p as i64).pow(k) % modulus)
                .collect();
            gens.push(h);
        }
        let module = PGroupModule::from_ideal(group, 1, &gens, exp).expect("valid quotient");
        if module.order() <= (p as u128).pow(max_exp) && module.fixed().order() == p as u128 {
            return module;
        }
    }
}

/// A random dihedral module: a quotient of `Z[C_p]` with `τ = ±(f(x) -> f(x^-1))`,
/// or a direct sum of two such.
pub fn random_dihedral_module<R: Rng>(p: u64, max_exp: u32, rng: &mut R) -> PGroupModule {
    let group = FrobeniusGroup::dihedral(p).expect("odd prime");
    let one = |rng: &mut R, max_exp: u32| loop {
        let exp = rng.gen_range(1..=max_exp.max(1));
        let modulus = (p as i64).pow(exp);
        let ngens = rng.gen_range(1..=2);
        let gens: Vec<Vec<i64>> = (0..ngens)
            .map(|_| {
                let n = rng.gen_range(0..=p as u32);
                let w = random_poly(p, modulus, rng);
                let scale = (p as i64).pow(rng.gen_range(0..exp));
                poly_mul(&x_minus_one_pow(p as usize, n, modulus), &w, p as usize, modulus)
                    .into_iter()
                    .map(|c| c * scale % modulus)
                    .collect()
            })
            .collect();
        let twist = if rng.gen_bool(0.5) { 1 } else { -1 };
        let module = PGroupModule::from_ideal(group, twist, &gens, exp).expect("valid quotient");
        if module.order() <= (p as u128).pow(max_exp) {
            return module;
        }
    };
    let first = one(rng, max_exp);
    if rng.gen_bool(0.5) {
        return first;
    }
    let used = first.order().ilog(p as u128);
    if used >= max_exp {
        return first;
    }
    let second = one(rng, max_exp - used);
    first.direct_sum(&second).expect("same group")
}

/// Every quotient of `Z[C_p]` by an `F`-stable lattice of index at most
/// `p^max_exp`, with `τ = ±(f(x) -> f(x^r))`, together with all direct sums
/// of two of them within the same order bound.
pub fn module_family(group: FrobeniusGroup, max_exp: u32) -> Vec<PGroupModule> {
    let p = group.p as usize;
    let r = group.r as usize;
    let modulus = (group.p as i128).pow(max_exp);
    let mut lattices = Vec::new();
    let mut pivots = vec![0u32; p];
    enumerate_pivots(&mut pivots, 0, max_exp, &mut |exps| {
        let piv: Vec<i128> = exps.iter().map(|&e| (group.p as i128).pow(e)).collect();
        // free entries above each later pivot
        let mut slots = Vec::new();
        for i in 0..p {
            for j in i + 1..p {
                slots.push((i, j));
            }
        }
        let mut counters = vec![0i128; slots.len()];
        loop {
            let mut rows: Matrix = (0..p)
                .map(|i| (0..p).map(|j| if i == j { piv[i] } else { 0 }).collect())
                .collect();
            for (s, &(i, j)) in slots.iter().enumerate() {
                rows[i][j] = counters[s];
            }
            let lat = Lattice::generated(p, modulus, &rows);
            let stable = rows.iter().all(|row| {
                let shifted: Vec<i128> = (0..p).map(|i| row[(i + p - 1) % p]).collect();
                let mut frob = vec![0i128; p];
                for (i, &c) in row.iter().enumerate() {
                    frob[i * r % p] += c;
                }
                lat.contains(&shifted) && lat.contains(&frob)
            });
            if stable {
                lattices.push(lat);
            }
            let mut s = 0;
            loop {
                if s == slots.len() {
                    return;
                }
                counters[s] += 1;
                if counters[s] < piv[slots[s].1] {
                    break;
                }
                counters[s] = 0;
                s += 1;
            }
        }
    });
    let mut ps: Matrix = vec![vec![0; p]; p];
    let mut pt: Matrix = vec![vec![0; p]; p];
    for i in 0..p {
        ps[i][(i + 1) % p] = 1;
        pt[i][i * r % p] = 1;
    }
    let twists: Vec<i128> = if group.m % 2 == 0 { vec![1, -1] } else { vec![1] };
    let mut base = Vec::new();
    for lat in &lattices {
        for &c in &twists {
            let pt_c: Matrix = pt.iter().map(|row| row.iter().map(|x| c * x).collect()).collect();
            let pres = present(lat.rows(), &[ps.clone(), pt_c]);
            let mut mats = pres.mats.into_iter();
            let module = PGroupModule::new(group, pres.orders, mats.next().unwrap(), mats.next().unwrap())
                .expect("stable lattice gives a module");
            if !base.contains(&module) {
                base.push(module);
            }
        }
    }
    let bound = (group.p as u128).pow(max_exp);
    let mut out = base.clone();
    for i in 0..base.len() {
        for j in i..base.len() {
            if base[i].order() > 1 && base[j].order() > 1 && base[i].order() * base[j].order() <= bound {
                out.push(base[i].direct_sum(&base[j]).expect("same group"));
            }
        }
    }
    out
}

fn enumerate_pivots(exps: &mut [u32], i: usize, budget: u32, f: &mut impl FnMut(&[u32])) {
    if i == exps.len() {
        f(exps);
        return;
    }
    for e in 0..=budget {
        exps[i] = e;
        enumerate_pivots(exps, i + 1, budget - e, f);
    }
    exps[i] = 0;
}
