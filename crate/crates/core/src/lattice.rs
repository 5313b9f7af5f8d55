//! Integer lattices and Smith normal form.
//!
//! Subgroups of `A = Z^k / diag(n_1..n_k)` are handled as lattices
//! `L ⊇ E·Z^k` where `E` is a common multiple of the `n_i`. Every such
//! lattice has a unique row-style Hermite normal form with positive pivots
//! dividing `E`, so equality of subgroups is equality of HNFs and all entries
//! stay below `E`.

use crate::arith::ext_gcd;

pub type Matrix = Vec<Vec<i128>>;

/// Full-rank lattice containing `modulus * Z^k`, stored in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    modulus: i128,
    /// Row `i` has zeros before column `i`, a positive pivot at `i` dividing
    /// `modulus`, and entries in `[0, pivot_j)` above every later pivot `j`.
    rows: Matrix,
}

impl Lattice {
    /// The lattice `modulus * Z^k`.
    pub fn scaled_identity(k: usize, modulus: i128) -> Self {
        assert!(modulus > 0);
        let rows = (0..k)
            .map(|i| (0..k).map(|j| if i == j { modulus } else { 0 }).collect())
            .collect();
        Lattice { modulus, rows }
    }

    /// Lattice generated by `gens` together with `modulus * Z^k`.
    pub fn generated(k: usize, modulus: i128, gens: &[Vec<i128>]) -> Self {
        let mut lat = Self::scaled_identity(k, modulus);
        for g in gens {
            lat.insert(g);
        }
        lat.normalize();
        lat
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn modulus(&self) -> i128 {
        self.modulus
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    /// Index `[Z^k : L]`.
    pub fn index(&self) -> u128 {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| r[i] as u128)
            .product()
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        let mut v: Vec<i128> = v.iter().map(|x| x.rem_euclid(self.modulus)).collect();
        for i in 0..self.dim() {
            let piv = self.rows[i][i];
            if v[i] % piv != 0 {
                return false;
            }
            let q = v[i] / piv;
            if q != 0 {
                for j in i..self.dim() {
                    v[j] = (v[j] - q * self.rows[i][j]).rem_euclid(self.modulus);
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Sum of two lattices with the same modulus.
    pub fn join(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.modulus, other.modulus);
        let mut lat = self.clone();
        for r in &other.rows {
            lat.insert(r);
        }
        lat.normalize();
        lat
    }

    fn insert(&mut self, v: &[i128]) {
        let m = self.modulus;
        let k = self.dim();
        let mut v: Vec<i128> = v.iter().map(|x| x.rem_euclid(m)).collect();
        for i in 0..k {
            if v[i] == 0 {
                continue;
            }
            let a = self.rows[i][i];
            let b = v[i];
            let (g, x, y) = ext_gcd(a, b);
            let (ag, bg) = (a / g, b / g);
            let row = &self.rows[i];
            let new_row: Vec<i128> = (0..k)
                .map(|j| {
                    if j < i {
                        0
                    } else {
                        (x * row[j] + y * v[j]).rem_euclid(m)
                    }
                })
                .collect();
            let rest: Vec<i128> = (0..k)
                .map(|j| (ag * v[j] - bg * row[j]).rem_euclid(m))
                .collect();
            debug_assert_eq!(rest[i], 0);
            self.rows[i] = new_row;
            // pivot g divides m, so the reduced pivot is g itself
            self.rows[i][i] = g;
            v = rest;
        }
    }

    fn normalize(&mut self) {
        let k = self.dim();
        for r in 0..k {
            for j in r + 1..k {
                let piv = self.rows[j][j];
                let q = self.rows[r][j].div_euclid(piv);
                if q != 0 {
                    for l in j..k {
                        self.rows[r][l] -= q * self.rows[j][l];
                    }
                }
            }
        }
    }
}

/// Invariant factors (diagonal of the Smith normal form, zeros dropped,
/// units kept) of an integer matrix.
pub fn smith_diagonal(m: &Matrix) -> Vec<i128> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&a, t, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let piv = a[t][t];
            // gcd steps strictly shrink |pivot|, so this terminates
            if let Some(i) = (t + 1..rows).find(|&i| a[i][t] % piv != 0) {
                let (g, x, y) = ext_gcd(piv, a[i][t]);
                let (u, v) = (piv / g, a[i][t] / g);
                for j in t..cols {
                    let (p, q) = (a[t][j], a[i][j]);
                    a[t][j] = x * p + y * q;
                    a[i][j] = u * q - v * p;
                }
                continue;
            }
            if let Some(j) = (t + 1..cols).find(|&j| a[t][j] % piv != 0) {
                let (g, x, y) = ext_gcd(piv, a[t][j]);
                let (u, v) = (piv / g, a[t][j] / g);
                for row in a.iter_mut() {
                    let (p, q) = (row[t], row[j]);
                    row[t] = x * p + y * q;
                    row[j] = u * q - v * p;
                }
                continue;
            }
            for i in t + 1..rows {
                let q = a[i][t] / piv;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / piv;
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
            }
            match (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % piv != 0)) {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn smallest_entry(a: &Matrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, &x) in row.iter().enumerate().skip(c0) {
            if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

// (col_t, col_j) <- (x col_t + y col_j, u col_j - v col_t), applied to every row
fn col_op(a: &mut Matrix, r: &mut Matrix, t: usize, j: usize, coef: [i128; 4], md: i128) {
    let [x, y, u, v] = coef;
    for row in a.iter_mut().chain(r.iter_mut()) {
        let (p, q) = (row[t], row[j]);
        row[t] = (x * p + y * q).rem_euclid(md);
        row[j] = (u * q - v * p).rem_euclid(md);
    }
}

/// Generators (modulo `modulus`) of `{x in Z^k : m x ≡ 0 (mod modulus)}`.
///
/// Diagonalizes `m` over `Z/modulus` while accumulating the column
/// transform `R`: with `S = P m R` diagonal, the kernel is `R` applied to
/// `{y : s_i y_i ≡ 0}`.
pub fn kernel_mod(m: &Matrix, k: usize, modulus: i128) -> Vec<Vec<i128>> {
    let md = modulus;
    let mut a: Matrix = m
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(md)).collect())
        .collect();
    let rows = a.len();
    let mut r: Matrix = (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut diag = vec![0i128; k];
    let mut t = 0;
    while t < k && t < rows {
        let mut best: Option<(usize, usize, i128)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let g = gcd(x, md);
                    if best.is_none_or(|(_, _, bg)| g < bg) {
                        best = Some((i, j, g));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut().chain(r.iter_mut()) {
                row.swap(t, pj);
            }
        }
        loop {
            // scale column t by a unit so that the pivot divides md
            let g0 = gcd(a[t][t], md);
            if a[t][t] != g0 {
                let c = unit_multiplier(a[t][t], md);
                for row in a.iter_mut().chain(r.iter_mut()) {
                    row[t] = (row[t] * c).rem_euclid(md);
                }
            }
            let piv = a[t][t];
            if let Some(j) = (t + 1..k).find(|&j| a[t][j] % piv != 0) {
                let (g, x, y) = ext_gcd(piv, a[t][j]);
                let (u, v) = (piv / g, a[t][j] / g);
                col_op(&mut a, &mut r, t, j, [x, y, u, v], md);
                continue;
            }
            if let Some(i) = (t + 1..rows).find(|&i| a[i][t] % piv != 0) {
                let (g, x, y) = ext_gcd(piv, a[i][t]);
                let (u, v) = (piv / g, a[i][t] / g);
                for j in 0..k {
                    let (p, q) = (a[t][j], a[i][j]);
                    a[t][j] = (x * p + y * q).rem_euclid(md);
                    a[i][j] = (u * q - v * p).rem_euclid(md);
                }
                continue;
            }
            for j in t + 1..k {
                let q = a[t][j] / piv;
                if q != 0 {
                    col_op(&mut a, &mut r, t, j, [1, 0, 1, q], md);
                }
            }
            for i in t + 1..rows {
                let q = a[i][t] / piv;
                if q != 0 {
                    for j in 0..k {
                        a[i][j] = (a[i][j] - q * a[t][j]).rem_euclid(md);
                    }
                }
            }
            break;
        }
        diag[t] = a[t][t];
        t += 1;
    }
    (0..k)
        .map(|i| {
            let scale = md / gcd(diag[i], md);
            (0..k).map(|row| (r[row][i] * scale).rem_euclid(md)).collect()
        })
        .collect()
}

/// A unit `c` modulo `md` with `a * c ≡ gcd(a, md) (mod md)`.
fn unit_multiplier(a: i128, md: i128) -> i128 {
    let g = gcd(a, md);
    let (ap, mp) = (a / g, md / g);
    let mut c = crate::arith::mod_inverse(ap, mp).unwrap_or(1);
    while gcd(c, md) != 1 {
        c += mp;
    }
    c
}

/// Smith form `U m V = D` of a square non-singular integer matrix, keeping
/// the column transform `V` and its inverse. `diag` has the diagonal of `D`
/// (positive, each dividing the next).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithTransform {
    pub diag: Vec<i128>,
    pub v: Matrix,
    pub v_inv: Matrix,
}

pub fn smith_transform(m: &Matrix) -> SmithTransform {
    let k = m.len();
    let mut a = m.clone();
    let mut v: Matrix = identity(k);
    let mut v_inv: Matrix = identity(k);
    // column ops on `a` and `v`, the inverse row ops on `v_inv`
    fn swap_cols(a: &mut Matrix, v: &mut Matrix, v_inv: &mut Matrix, i: usize, j: usize) {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
        v_inv.swap(i, j);
    }
    // (c_t, c_j) <- (x c_t + y c_j, u c_j - v c_t) with x u + y v = 1
    fn combine(a: &mut Matrix, v: &mut Matrix, v_inv: &mut Matrix, t: usize, j: usize, c: [i128; 4]) {
        let [x, y, u, w] = c;
        for row in a.iter_mut().chain(v.iter_mut()) {
            let (p, q) = (row[t], row[j]);
            row[t] = x * p + y * q;
            row[j] = u * q - w * p;
        }
        let n = v_inv[0].len();
        for l in 0..n {
            let (p, q) = (v_inv[t][l], v_inv[j][l]);
            v_inv[t][l] = u * p + w * q;
            v_inv[j][l] = -y * p + x * q;
        }
    }
    for t in 0..k {
        let (pi, pj) = smallest_entry(&a, t, t).expect("singular matrix");
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);
        loop {
            let piv = a[t][t];
            if let Some(i) = (t + 1..k).find(|&i| a[i][t] % piv != 0) {
                let (g, x, y) = ext_gcd(piv, a[i][t]);
                let (u, w) = (piv / g, a[i][t] / g);
                for j in t..k {
                    let (p, q) = (a[t][j], a[i][j]);
                    a[t][j] = x * p + y * q;
                    a[i][j] = u * q - w * p;
                }
                continue;
            }
            if let Some(j) = (t + 1..k).find(|&j| a[t][j] % piv != 0) {
                let (g, x, y) = ext_gcd(piv, a[t][j]);
                let (u, w) = (piv / g, a[t][j] / g);
                combine(&mut a, &mut v, &mut v_inv, t, j, [x, y, u, w]);
                continue;
            }
            for i in t + 1..k {
                let q = a[i][t] / piv;
                if q != 0 {
                    for j in t..k {
                        a[i][j] -= q * a[t][j];
                    }
                }
            }
            for j in t + 1..k {
                let q = a[t][j] / piv;
                if q != 0 {
                    combine(&mut a, &mut v, &mut v_inv, t, j, [1, 0, 1, q]);
                }
            }
            match (t + 1..k).find(|&i| (t + 1..k).any(|j| a[i][j] % piv != 0)) {
                Some(i) => {
                    for j in t..k {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    SmithTransform {
        diag: (0..k).map(|i| a[i][i]).collect(),
        v,
        v_inv,
    }
}

pub fn identity(k: usize) -> Matrix {
    (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(x: &Matrix, y: &Matrix) -> Matrix {
    let cols = y.first().map_or(0, Vec::len);
    x.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(y).map(|(a, yr)| a * yr[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(x: &Matrix) -> Matrix {
    let cols = x.first().map_or(0, Vec::len);
    (0..cols).map(|j| x.iter().map(|r| r[j]).collect()).collect()
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Solve `X * upper = target` for integer `X` when `upper` is upper
/// triangular with non-zero diagonal; `None` if the solution is not integral.
pub fn solve_upper(upper: &Matrix, target: &Matrix) -> Option<Matrix> {
    let k = upper.len();
    let mut out = Vec::with_capacity(target.len());
    for t in target {
        let mut x = vec![0i128; k];
        let mut rem = t.clone();
        for j in 0..k {
            if rem[j] % upper[j][j] != 0 {
                return None;
            }
            x[j] = rem[j] / upper[j][j];
            for l in j..k {
                rem[l] -= x[j] * upper[j][l];
            }
        }
        out.push(x);
    }
    Some(out)
}
