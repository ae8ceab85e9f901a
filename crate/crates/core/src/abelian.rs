//! Finitely generated abelian groups, Smith normal form, bounded cochain
//! complexes and their cohomology.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Builds a `rows x columns.len()` matrix from column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    /// `1 x 1` matrix.
    pub fn scalar(x: impl Into<BigInt>) -> Self {
        Matrix { rows: 1, cols: 1, data: vec![x.into()] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hcat needs equal row counts");
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn top_rows(&self, n: usize) -> Matrix {
        Matrix { rows: n, cols: self.cols, data: self.data[..n * self.cols].to_vec() }
    }

    pub fn columns_from(&self, start: usize) -> Matrix {
        let cols: Vec<Vec<BigInt>> = (start..self.cols).map(|j| self.column(j)).collect();
        Matrix::from_columns(self.rows, &cols)
    }

    pub fn scale(&self, c: &BigInt) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let t = c * &self.data[src * self.cols + j];
            self.data[dst * self.cols + j] += t;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let t = c * &self.data[i * self.cols + src];
            self.data[i * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[r * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + c];
            *x = -std::mem::take(x);
        }
    }
}

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal with a
/// divisibility chain. `u_inv` is kept because column spaces are read off
/// from it.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub d: Matrix,
    /// Nonzero diagonal entries, all positive.
    pub diag: Vec<BigInt>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

pub fn smith_normal_form(m: &Matrix) -> Snf {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = Matrix::identity(r);
    let mut u_inv = Matrix::identity(r);
    let mut v = Matrix::identity(c);
    let mut diag = Vec::new();

    for t in 0..r.min(c) {
        loop {
            // least |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = d.get(i, j);
                    if !x.is_zero()
                        && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, u_inv, v, d, diag);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..r {
                let q = d.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    let nq = -&q;
                    d.add_row(i, t, &nq);
                    u.add_row(i, t, &nq);
                    u_inv.add_col(t, i, &q);
                }
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..c {
                let q = d.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    let nq = -&q;
                    d.add_col(j, t, &nq);
                    v.add_col(j, t, &nq);
                }
                dirty |= !d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            let mut fixed = false;
            'scan: for i in t + 1..r {
                for j in t + 1..c {
                    if !d.get(i, j).is_multiple_of(&pivot) {
                        let one = BigInt::one();
                        d.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                        u_inv.add_col(i, t, &-one);
                        fixed = true;
                        break 'scan;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        diag.push(d.get(t, t).clone());
    }
    finish(u, u_inv, v, d, diag)
}

fn finish(u: Matrix, u_inv: Matrix, v: Matrix, d: Matrix, diag: Vec<BigInt>) -> Snf {
    Snf { u, u_inv, v, d, diag }
}

/// Columns spanning the integer kernel of `a`.
pub fn kernel_basis(a: &Matrix) -> Matrix {
    let snf = smith_normal_form(a);
    snf.v.columns_from(snf.rank())
}

fn reduce_mod(v: &mut [BigInt], from: usize, modulus: &BigInt) {
    for x in v[from..].iter_mut() {
        *x = x.mod_floor(modulus);
    }
}

/// Lower-triangular basis of `span(gens) + D Z^n` with positive diagonal
/// entries dividing `D`.
pub fn hermite_basis_mod(gens: &Matrix, modulus: &BigInt) -> Matrix {
    let n = gens.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..gens.cols())
        .map(|j| {
            let mut c = gens.column(j);
            reduce_mod(&mut c, 0, modulus);
            c
        })
        .collect();
    let mut basis = Vec::with_capacity(n);
    for i in 0..n {
        let mut pivot = vec![BigInt::zero(); n];
        pivot[i] = modulus.clone();
        for c in cols.iter_mut() {
            if c[i].is_zero() {
                continue;
            }
            let (a, b) = (pivot[i].clone(), c[i].clone());
            let eg = a.extended_gcd(&b);
            let (ag, bg) = (&a / &eg.gcd, &b / &eg.gcd);
            let new_p: Vec<BigInt> = pivot.iter().zip(c.iter()).map(|(p, x)| &eg.x * p + &eg.y * x).collect();
            let new_c: Vec<BigInt> = pivot.iter().zip(c.iter()).map(|(p, x)| &ag * x - &bg * p).collect();
            pivot = new_p;
            *c = new_c;
            reduce_mod(&mut pivot, i + 1, modulus);
            reduce_mod(c, i + 1, modulus);
        }
        basis.push(pivot);
    }
    Matrix::from_columns(n, &basis)
}

/// Exact coordinates of `v` in a lower-triangular basis.
fn triangular_coordinates(basis: &Matrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = basis.rows();
    let mut v = v.to_vec();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (c, rem) = v[i].div_rem(basis.get(i, i));
        if !rem.is_zero() {
            return None;
        }
        for (r, x) in v.iter_mut().enumerate().skip(i) {
            *x -= &c * basis.get(r, i);
        }
        out.push(c);
    }
    Some(out)
}

/// `Z^n / (span(m) + D Z^n)` by elimination with entries kept mod `D`.
fn invariants_mod(m: &Matrix, modulus: &BigInt) -> FgAbelianGroup {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    for x in d.data.iter_mut() {
        *x = x.mod_floor(modulus);
    }
    let mut orders = Vec::with_capacity(r);
    for t in 0..r {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x < d.get(bi, bj)) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                orders.extend(std::iter::repeat(modulus.clone()).take(r - t));
                return FgAbelianGroup::from_orders(&orders);
            };
            d.swap_rows(t, pi);
            d.swap_cols(t, pj);
            let pivot = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..r {
                let q = d.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    d.add_row(i, t, &-q);
                    for j in t..c {
                        let x = d.get(i, j).mod_floor(modulus);
                        d.set(i, j, x);
                    }
                }
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..c {
                let q = d.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    d.add_col(j, t, &-q);
                    for i in t..r {
                        let x = d.get(i, j).mod_floor(modulus);
                        d.set(i, j, x);
                    }
                }
                dirty |= !d.get(t, j).is_zero();
            }
            if !dirty {
                break;
            }
        }
        orders.push(d.get(t, t).gcd(modulus));
    }
    FgAbelianGroup::from_orders(&orders)
}

/// Sublattice of `Z^n` spanned by the columns of a generator matrix.
#[derive(Clone, Debug)]
pub struct Lattice {
    n: usize,
    u: Matrix,
    diag: Vec<BigInt>,
    basis: Matrix,
}

impl Lattice {
    pub fn from_generators(gens: &Matrix) -> Self {
        let snf = smith_normal_form(gens);
        let cols: Vec<Vec<BigInt>> = snf
            .diag
            .iter()
            .enumerate()
            .map(|(j, dj)| snf.u_inv.column(j).iter().map(|x| x * dj).collect())
            .collect();
        Lattice {
            n: gens.rows(),
            basis: Matrix::from_columns(gens.rows(), &cols),
            u: snf.u,
            diag: snf.diag,
        }
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates of `v` in `basis()`, or `None` when `v` is outside.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.n);
        let w = self.u.mul_vec(v);
        let mut out = Vec::with_capacity(self.diag.len());
        for (j, wj) in w.iter().enumerate() {
            if j < self.diag.len() {
                let (q, rem) = wj.div_rem(&self.diag[j]);
                if !rem.is_zero() {
                    return None;
                }
                out.push(q);
            } else if !wj.is_zero() {
                return None;
            }
        }
        Some(out)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_columns(&self, m: &Matrix) -> bool {
        (0..m.cols()).all(|j| self.contains(&m.column(j)))
    }
}

/// Invariant-factor form `Z^rank + Z/d_1 + ... + Z/d_k` with `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        FgAbelianGroup { rank: 0, invariant_factors: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { rank, invariant_factors: vec![] }
    }

    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        PresentedAbelianGroup::cyclic(n).normal_form()
    }

    /// Normalizes an arbitrary list of cyclic orders (0 meaning `Z`).
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let rel = Matrix::from_columns(
            orders.len(),
            &orders
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    let mut col = vec![BigInt::zero(); orders.len()];
                    col[i] = o.clone();
                    col
                })
                .collect::<Vec<_>>(),
        );
        PresentedAbelianGroup::new(orders.len(), rel).normal_form()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> Option<BigInt> {
        (self.rank == 0).then(|| self.invariant_factors.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank + self.invariant_factors.len() <= 1
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders: Vec<BigInt> = vec![BigInt::zero(); self.rank + other.rank];
        orders.extend(self.invariant_factors.iter().cloned());
        orders.extend(other.invariant_factors.iter().cloned());
        Self::from_orders(&orders)
    }

    /// Presentation with one generator per summand.
    pub fn presentation(&self) -> PresentedAbelianGroup {
        let n = self.rank + self.invariant_factors.len();
        let mut rel = Matrix::zeros(n, self.invariant_factors.len());
        for (i, d) in self.invariant_factors.iter().enumerate() {
            rel.set(self.rank + i, i, d.clone());
        }
        PresentedAbelianGroup::new(n, rel)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(u64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct WireGroup {
    rank: usize,
    invariant_factors: Vec<WireInt>,
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = WireGroup {
            rank: self.rank,
            invariant_factors: self
                .invariant_factors
                .iter()
                .map(|d| match u64::try_from(d) {
                    Ok(x) => WireInt::Small(x),
                    Err(_) => WireInt::Big(d.to_string()),
                })
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgAbelianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = WireGroup::deserialize(d)?;
        let mut orders = vec![BigInt::zero(); wire.rank];
        for w in wire.invariant_factors {
            orders.push(match w {
                WireInt::Small(x) => BigInt::from(x),
                WireInt::Big(s) => s.parse().map_err(D::Error::custom)?,
            });
        }
        if orders[wire.rank..].iter().any(|d| d < &BigInt::from(2)) {
            return Err(D::Error::custom("invariant factors must be at least 2"));
        }
        if orders[wire.rank..].windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
            return Err(D::Error::custom("invariant factors do not form a divisibility chain"));
        }
        Ok(FgAbelianGroup::from_orders(&orders))
    }
}

/// Generators plus relation columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedAbelianGroup {
    n_generators: usize,
    relations: Matrix,
}

impl PresentedAbelianGroup {
    pub fn new(n_generators: usize, relations: Matrix) -> Self {
        assert_eq!(relations.rows(), n_generators, "relations need one row per generator");
        PresentedAbelianGroup { n_generators, relations }
    }

    pub fn zero() -> Self {
        Self::new(0, Matrix::zeros(0, 0))
    }

    pub fn free(n: usize) -> Self {
        Self::new(n, Matrix::zeros(n, 0))
    }

    /// `Z/n` on one generator; `n = 0` gives `Z`.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::new(1, Matrix::scalar(n))
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(
            self.n_generators + other.n_generators,
            self.relations.block_diag(&other.relations),
        )
    }

    pub fn normal_form(&self) -> FgAbelianGroup {
        let snf = smith_normal_form(&self.relations);
        FgAbelianGroup {
            rank: self.n_generators - snf.rank(),
            invariant_factors: snf.diag.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    /// Relation lattice, used for "is zero in the quotient" tests.
    pub fn relation_lattice(&self) -> Lattice {
        Lattice::from_generators(&self.relations)
    }
}

/// Cochain complex `terms[0] -> terms[1] -> ...` placed in degrees
/// `lo, lo+1, ...`; `differentials[i]` maps `terms[i]` to `terms[i+1]`.
#[derive(Clone, Debug)]
pub struct BoundedComplex {
    lo: i64,
    terms: Vec<PresentedAbelianGroup>,
    differentials: Vec<Matrix>,
}

impl BoundedComplex {
    pub fn new(
        lo: i64,
        terms: Vec<PresentedAbelianGroup>,
        differentials: Vec<Matrix>,
    ) -> Result<Self> {
        if differentials.len() + 1 != terms.len().max(1) {
            return Err(Error::MalformedComplex(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            let (src, dst) = (&terms[i], &terms[i + 1]);
            if d.cols() != src.n_generators || d.rows() != dst.n_generators {
                return Err(Error::MalformedComplex(format!(
                    "differential at degree {} has shape {}x{}, expected {}x{}",
                    lo + i as i64,
                    d.rows(),
                    d.cols(),
                    dst.n_generators,
                    src.n_generators
                )));
            }
            let target = dst.relation_lattice();
            if !target.contains_columns(&d.mul(&src.relations)) {
                return Err(Error::MalformedComplex(format!(
                    "differential at degree {} is not well defined",
                    lo + i as i64
                )));
            }
            if i + 1 < differentials.len() {
                let dd = differentials[i + 1].mul(d);
                if !terms[i + 2].relation_lattice().contains_columns(&dd) {
                    return Err(Error::MalformedComplex(format!(
                        "d∘d is nonzero starting at degree {}",
                        lo + i as i64
                    )));
                }
            }
        }
        Ok(BoundedComplex { lo, terms, differentials })
    }

    pub fn empty() -> Self {
        BoundedComplex { lo: 0, terms: vec![], differentials: vec![] }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn terms(&self) -> &[PresentedAbelianGroup] {
        &self.terms
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.differentials
    }

    pub fn term(&self, degree: i64) -> Option<&PresentedAbelianGroup> {
        let idx = degree - self.lo;
        (idx >= 0).then(|| self.terms.get(idx as usize)).flatten()
    }

    pub fn cohomology(&self, degree: i64) -> Result<FgAbelianGroup> {
        if self.terms.is_empty() || degree < self.lo || degree > self.hi() {
            return Err(Error::DegreeOutOfRange(degree, self.lo, self.hi()));
        }
        let idx = (degree - self.lo) as usize;
        let term = &self.terms[idx];
        let n = term.n_generators;

        let cycles = if idx + 1 < self.terms.len() {
            let aug = self.differentials[idx].hcat(&self.terms[idx + 1].relations);
            kernel_basis(&aug).top_rows(n)
        } else {
            Matrix::identity(n)
        };
        let boundaries = if idx > 0 {
            self.differentials[idx - 1].hcat(&term.relations)
        } else {
            term.relations.clone()
        };

        // finite term: D kills it, so everything can be reduced mod D
        if let Some(bound) = term.normal_form().order() {
            if n == 0 {
                return Ok(FgAbelianGroup::trivial());
            }
            let basis = hermite_basis_mod(&cycles, &bound);
            let coords: Vec<Vec<BigInt>> = (0..boundaries.cols())
                .map(|j| {
                    triangular_coordinates(&basis, &boundaries.column(j))
                        .expect("boundaries lie in the cycles of a valid complex")
                })
                .collect();
            return Ok(invariants_mod(&Matrix::from_columns(n, &coords), &bound));
        }

        let cycles = Lattice::from_generators(&cycles);
        let coords: Vec<Vec<BigInt>> = (0..boundaries.cols())
            .map(|j| {
                cycles
                    .coordinates(&boundaries.column(j))
                    .expect("boundaries lie in the cycles of a valid complex")
            })
            .collect();
        let k = cycles.rank();
        Ok(PresentedAbelianGroup::new(k, Matrix::from_columns(k, &coords)).normal_form())
    }

    /// The complex of cohomology groups with zero differentials.
    pub fn cohomology_complex(&self) -> Result<BoundedComplex> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for deg in self.lo..=self.hi() {
            terms.push(self.cohomology(deg)?.presentation());
        }
        let differentials = terms
            .windows(2)
            .map(|w| Matrix::zeros(w[1].n_generators, w[0].n_generators))
            .collect();
        BoundedComplex::new(self.lo, terms, differentials)
    }

    /// `prod_i #term_i^((-1)^i)`, with `i` the literal degree.
    pub fn euler_number(&self) -> Result<BigRational> {
        let mut acc = BigRational::one();
        for (idx, term) in self.terms.iter().enumerate() {
            let deg = self.lo + idx as i64;
            let order = term.normal_form().order().ok_or(Error::InfiniteTerm(deg))?;
            let order = BigRational::from_integer(order);
            if deg.rem_euclid(2) == 0 {
                acc *= order;
            } else {
                acc /= order;
            }
        }
        Ok(acc)
    }
}
