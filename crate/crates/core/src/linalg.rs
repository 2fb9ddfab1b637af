//! Exact sparse linear algebra: matrices, row reduction, kernels and subspaces.
//!
//! Matrices are stored row-major as sorted sparse rows. Row reduction runs a
//! dense scatter accumulator with a min-heap of live columns, so rows only
//! ever touch the pivots they actually meet. For prime fields the inner loop
//! runs on raw `u32` residues.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SVec(pub Vec<(usize, Scalar)>);

impl SVec {
    pub fn new() -> Self {
        SVec(Vec::new())
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SVec(
            v.iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(i, s)| (i, s.clone()))
                .collect(),
        )
    }

    /// Builds from unsorted pairs, summing duplicates and dropping zeros.
    pub fn from_pairs(mut pairs: Vec<(usize, Scalar)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(pairs.len());
        for (i, s) in pairs {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += &s,
                _ => out.push((i, s)),
            }
        }
        out.retain(|(_, s)| !s.is_zero());
        SVec(out)
    }

    pub fn to_dense(&self, len: usize, field: Field) -> Vec<Scalar> {
        let mut v = vec![field.zero(); len];
        for (i, s) in &self.0 {
            v[*i] = s.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.0
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.0[k].1)
    }

    pub fn leading(&self) -> Option<usize> {
        self.0.first().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Scalar) -> SVec {
        if c.is_zero() {
            return SVec::new();
        }
        SVec(self.0.iter().map(|(i, s)| (*i, s * c)).collect())
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &SVec) -> SVec {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            let take_a = y >= b.len() || (x < a.len() && a[x].0 < b[y].0);
            let take_b = x >= a.len() || (y < b.len() && b[y].0 < a[x].0);
            if take_a {
                out.push(a[x].clone());
                x += 1;
            } else if take_b {
                out.push((b[y].0, c * &b[y].1));
                y += 1;
            } else {
                let s = &a[x].1 + &(c * &b[y].1);
                if !s.is_zero() {
                    out.push((a[x].0, s));
                }
                x += 1;
                y += 1;
            }
        }
        SVec(out)
    }

    pub fn sub(&self, other: &SVec) -> SVec {
        match other.0.first() {
            None => self.clone(),
            Some((_, s)) => self.axpy(&-s.field().one(), other),
        }
    }

    pub fn add(&self, other: &SVec) -> SVec {
        match other.0.first() {
            None => self.clone(),
            Some((_, s)) => self.axpy(&s.field().one(), other),
        }
    }

    pub fn dot_dense(&self, v: &[Scalar], field: Field) -> Scalar {
        let mut acc = field.zero();
        for (i, s) in &self.0 {
            if !v[*i].is_zero() {
                acc += &(s * &v[*i]);
            }
        }
        acc
    }
}

/// A sparse matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<SVec>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![SVec::new(); rows],
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.data[i] = SVec(vec![(i, field.one())]);
        }
        m
    }

    pub fn from_rows(cols: usize, field: Field, data: Vec<SVec>) -> Result<Self> {
        for row in &data {
            if let Some((j, _)) = row.0.last() {
                if *j >= cols {
                    return Err(Error::Dimension(format!("column {j} out of range {cols}")));
                }
            }
            if let Some((_, s)) = row.0.iter().find(|(_, s)| s.field() != field) {
                return Err(Error::FieldMismatch(s.field(), field));
            }
        }
        Ok(Matrix {
            rows: data.len(),
            cols,
            field,
            data,
        })
    }

    pub fn from_dense(field: Field, rows: &[Vec<Scalar>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged dense matrix".into()));
        }
        Matrix::from_rows(cols, field, rows.iter().map(|r| SVec::from_dense(r)).collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.int(x)).collect())
            .collect();
        Matrix::from_dense(field, &dense).expect("rectangular integer matrix")
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        field: Field,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (i, j, s) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::Dimension(format!("entry ({i},{j}) outside {rows}x{cols}")));
            }
            if s.field() != field {
                return Err(Error::FieldMismatch(s.field(), field));
            }
            buckets[i].push((j, s));
        }
        Ok(Matrix {
            rows,
            cols,
            field,
            data: buckets.into_iter().map(SVec::from_pairs).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn row(&self, i: usize) -> &SVec {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[SVec] {
        &self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SVec::nnz).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(j).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SVec::is_zero)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.data
            .iter()
            .map(|r| r.to_dense(self.cols, self.field))
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, s) in &row.0 {
                buckets[*j].push((i, s.clone()));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data: buckets.into_iter().map(SVec).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.data.iter().map(|r| r.dot_dense(v, self.field)).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = SVec::new();
                for (k, s) in &row.0 {
                    acc = acc.axpy(s, &other.data[*k]);
                }
                acc
            })
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            field: self.field,
            data,
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.axpy(&self.field.one(), other)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.axpy(&self.field.int(-1), other)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix shapes differ".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.axpy(c, b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|r| r.scale(c)).collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            if let Some(s) = self.data[i].get(i) {
                acc += s;
            }
        }
        acc
    }

    /// Matrix with rows and columns permuted: `out[i][j] = self[rp[i]][cp[j]]`.
    pub fn permuted(&self, rp: &[usize], cp: &[usize]) -> Matrix {
        let mut inv = vec![0; cp.len()];
        for (j, &c) in cp.iter().enumerate() {
            inv[c] = j;
        }
        let data = rp
            .iter()
            .map(|&r| {
                SVec::from_pairs(
                    self.data[r]
                        .0
                        .iter()
                        .map(|(j, s)| (inv[*j], s.clone()))
                        .collect(),
                )
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data,
        }
    }

    /// Maps every entry into `target` (see [`Scalar::reduce_into`]).
    pub fn reduce_into(&self, target: Field) -> Result<Matrix> {
        let data = self
            .data
            .iter()
            .map(|r| {
                let pairs = r
                    .0
                    .iter()
                    .map(|(j, s)| Ok((*j, s.reduce_into(target)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SVec::from_pairs(pairs))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: target,
            data,
        })
    }
}

// ---------------------------------------------------------------------------
// Row reduction kernels.

trait Elim {
    type E: Clone;
    fn is_zero(x: &Self::E) -> bool;
    fn inv(&self, x: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `acc - f * x`
    fn sub_mul(&self, acc: &Self::E, f: &Self::E, x: &Self::E) -> Self::E;
    fn neg(&self, x: &Self::E) -> Self::E;
}

struct ModP(u64);

impl Elim for ModP {
    type E = u32;
    fn is_zero(x: &u32) -> bool {
        *x == 0
    }
    fn inv(&self, x: &u32) -> u32 {
        let p = self.0;
        let mut r = 1u64;
        let mut b = *x as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (*a as u64 * *b as u64 % self.0) as u32
    }
    fn sub_mul(&self, acc: &u32, f: &u32, x: &u32) -> u32 {
        let p = self.0;
        let fx = *f as u64 * *x as u64 % p;
        ((*acc as u64 + p - fx) % p) as u32
    }
    fn neg(&self, x: &u32) -> u32 {
        if *x == 0 {
            0
        } else {
            (self.0 - *x as u64) as u32
        }
    }
}

struct Rat;

impl Elim for Rat {
    type E = BigRational;
    fn is_zero(x: &BigRational) -> bool {
        x.is_zero()
    }
    fn inv(&self, x: &BigRational) -> BigRational {
        x.recip()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub_mul(&self, acc: &BigRational, f: &BigRational, x: &BigRational) -> BigRational {
        acc - f * x
    }
    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }
}

type Row<E> = Vec<(usize, E)>;

/// Dense scratch space reused across rows.
struct Scratch<E> {
    dense: Vec<Option<E>>,
    heap: BinaryHeap<Reverse<usize>>,
}

impl<E: Clone> Scratch<E> {
    fn new(cols: usize) -> Self {
        Scratch {
            dense: vec![None; cols],
            heap: BinaryHeap::new(),
        }
    }

    fn load(&mut self, row: &Row<E>) {
        for (j, x) in row {
            self.dense[*j] = Some(x.clone());
            self.heap.push(Reverse(*j));
        }
    }
}

/// Forward elimination to row-echelon form. Returns pivot rows (leading
/// coefficient 1) keyed by their leading columns, in increasing column order.
fn forward<K: Elim>(k: &K, cols: usize, mut rows: Vec<Row<K::E>>) -> Vec<(usize, Row<K::E>)> {
    // Sparsest rows first keeps fill low.
    rows.sort_by_key(|r| r.len());
    let mut pivot_of: Vec<Option<usize>> = vec![None; cols];
    let mut pivots: Vec<Row<K::E>> = Vec::new();
    let mut sc = Scratch::<K::E>::new(cols);
    for row in rows {
        if row.is_empty() {
            continue;
        }
        sc.load(&row);
        let mut out: Row<K::E> = Vec::new();
        let mut lead: Option<usize> = None;
        while let Some(Reverse(c)) = sc.heap.pop() {
            // Columns can be pushed more than once.
            while sc.heap.peek() == Some(&Reverse(c)) {
                sc.heap.pop();
            }
            let Some(x) = sc.dense[c].take() else { continue };
            if K::is_zero(&x) {
                continue;
            }
            if lead.is_none() {
                if let Some(pi) = pivot_of[c] {
                    let f = x;
                    for (j, y) in pivots[pi].iter().skip(1) {
                        let cur = sc.dense[*j].take();
                        let base = match cur {
                            Some(v) => v,
                            None => {
                                sc.heap.push(Reverse(*j));
                                sc.dense[*j] = Some(k.neg(&k.mul(&f, y)));
                                continue;
                            }
                        };
                        sc.dense[*j] = Some(k.sub_mul(&base, &f, y));
                    }
                    continue;
                }
                lead = Some(c);
            }
            out.push((c, x));
        }
        if let Some(c) = lead {
            let inv = k.inv(&out[0].1);
            for (_, x) in out.iter_mut() {
                *x = k.mul(x, &inv);
            }
            pivot_of[c] = Some(pivots.len());
            pivots.push(out);
        }
    }
    let mut keyed: Vec<(usize, Row<K::E>)> = pivots.into_iter().map(|r| (r[0].0, r)).collect();
    keyed.sort_by_key(|(c, _)| *c);
    keyed
}

/// Back substitution: clears every entry above each pivot.
fn backward<K: Elim>(k: &K, cols: usize, mut piv: Vec<(usize, Row<K::E>)>) -> Vec<(usize, Row<K::E>)> {
    let mut pivot_of: Vec<Option<usize>> = vec![None; cols];
    for (idx, (c, _)) in piv.iter().enumerate() {
        pivot_of[*c] = Some(idx);
    }
    let mut sc = Scratch::<K::E>::new(cols);
    // Rows below have already been fully reduced when row `idx` is processed.
    for idx in (0..piv.len()).rev() {
        let row = std::mem::take(&mut piv[idx].1);
        sc.load(&row);
        let mut out: Row<K::E> = Vec::with_capacity(row.len());
        while let Some(Reverse(c)) = sc.heap.pop() {
            while sc.heap.peek() == Some(&Reverse(c)) {
                sc.heap.pop();
            }
            let Some(x) = sc.dense[c].take() else { continue };
            if K::is_zero(&x) {
                continue;
            }
            match pivot_of[c] {
                Some(pi) if pi != idx => {
                    for (j, y) in piv[pi].1.iter().skip(1) {
                        let v = match sc.dense[*j].take() {
                            Some(v) => k.sub_mul(&v, &x, y),
                            None => {
                                sc.heap.push(Reverse(*j));
                                k.neg(&k.mul(&x, y))
                            }
                        };
                        sc.dense[*j] = Some(v);
                    }
                }
                _ => out.push((c, x)),
            }
        }
        piv[idx].1 = out;
    }
    piv
}

fn rows_modp(m: &Matrix) -> Vec<Row<u32>> {
    m.data
        .iter()
        .map(|r| {
            r.0.iter()
                .map(|(j, s)| match s {
                    Scalar::P { v, .. } => (*j, *v),
                    Scalar::Q(_) => unreachable!("field checked at construction"),
                })
                .collect()
        })
        .collect()
}

fn rows_rat(m: &Matrix) -> Vec<Row<BigRational>> {
    m.data
        .iter()
        .map(|r| {
            r.0.iter()
                .map(|(j, s)| match s {
                    Scalar::Q(q) => (*j, q.as_ref().clone()),
                    Scalar::P { .. } => unreachable!("field checked at construction"),
                })
                .collect()
        })
        .collect()
}

/// RREF of a matrix: pivot columns and the corresponding normalized rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    field: Field,
    pivots: Vec<usize>,
    rows: Vec<SVec>,
}

impl Echelon {
    pub fn compute(m: &Matrix) -> Echelon {
        Echelon::reduce(m, true)
    }

    fn reduce(m: &Matrix, full: bool) -> Echelon {
        let cols = m.cols;
        let field = m.field;
        let rows: Vec<(usize, SVec)> = match field {
            Field::Prime(p) => {
                let k = ModP(p as u64);
                let mut e = forward(&k, cols, rows_modp(m));
                if full {
                    e = backward(&k, cols, e);
                }
                e.into_iter()
                    .map(|(c, r)| {
                        (c, SVec(r.into_iter().map(|(j, v)| (j, Scalar::P { v, p })).collect()))
                    })
                    .collect()
            }
            Field::Rationals => {
                let mut e = forward(&Rat, cols, rows_rat(m));
                if full {
                    e = backward(&Rat, cols, e);
                }
                e.into_iter()
                    .map(|(c, r)| {
                        (c, SVec(r.into_iter().map(|(j, q)| (j, Scalar::Q(Box::new(q)))).collect()))
                    })
                    .collect()
            }
        };
        let (pivots, rows) = rows.into_iter().unzip();
        Echelon {
            cols,
            field,
            pivots,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[SVec] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Kernel basis: one vector per free column `f`, namely
    /// `e_f - sum_k R[k][f] e_{p_k}`.
    pub fn kernel_vectors(&self) -> Vec<SVec> {
        let free = self.free_columns();
        let mut pos = vec![usize::MAX; self.cols];
        for (i, &f) in free.iter().enumerate() {
            pos[f] = i;
        }
        let mut cols: Vec<Vec<(usize, Scalar)>> = free
            .iter()
            .map(|&f| vec![(f, self.field.one())])
            .collect();
        for (k, row) in self.rows.iter().enumerate() {
            for (j, s) in row.0.iter().skip(1) {
                cols[pos[*j]].push((self.pivots[k], -s));
            }
        }
        cols.into_iter().map(SVec::from_pairs).collect()
    }

    /// `R z`: coordinates of `M z` in the basis of pivot columns of `M`.
    pub fn pivot_coordinates(&self, z: &[Scalar]) -> Vec<Scalar> {
        self.rows.iter().map(|r| r.dot_dense(z, self.field)).collect()
    }

    pub fn pivot_coordinates_sparse(&self, z: &SVec) -> Vec<Scalar> {
        let dense = z.to_dense(self.cols, self.field);
        self.pivot_coordinates(&dense)
    }
}

/// Rank only, skipping back substitution.
pub fn rank(m: &Matrix) -> usize {
    Echelon::reduce(m, false).rank()
}

pub fn rank_and_kernel(m: &Matrix) -> (usize, Subspace) {
    let e = Echelon::compute(m);
    let kernel = Subspace::span(m.cols, m.field, e.kernel_vectors());
    (e.rank(), kernel)
}

/// Some `x` with `m x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows
        )));
    }
    let n = m.cols;
    let rows = m
        .data
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            if !bi.is_zero() {
                r.0.push((n, bi.clone()));
            }
            r
        })
        .collect();
    let aug = Matrix::from_rows(n + 1, m.field, rows)?;
    let e = Echelon::compute(&aug);
    if e.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![m.field.zero(); n];
    for (k, &p) in e.pivots.iter().enumerate() {
        if let Some(s) = e.rows[k].get(n) {
            x[p] = s.clone();
        }
    }
    Ok(Some(x))
}

fn check_form(f: &Matrix, n: usize) -> Result<()> {
    if f.rows != n || f.cols != n {
        return Err(Error::Dimension("form and map have different sizes".into()));
    }
    if rank(f) < n {
        return Err(Error::DegenerateForm);
    }
    Ok(())
}

/// `f(Mv, w) = f(v, Mw)` for all `v, w`, i.e. `fᵀM = Mᵀf`.
pub fn is_symmetric_map(m: &Matrix, f: &Matrix) -> Result<bool> {
    if m.rows != m.cols {
        return Err(Error::Dimension("map is not square".into()));
    }
    check_form(f, m.rows)?;
    Ok(f.transpose().mul(m)? == m.transpose().mul(f)?)
}

/// `f(Mv, w) = -f(v, Mw)` for all `v, w`.
pub fn is_skew_symmetric_map(m: &Matrix, f: &Matrix) -> Result<bool> {
    if m.rows != m.cols {
        return Err(Error::Dimension("map is not square".into()));
    }
    check_form(f, m.rows)?;
    Ok(f.transpose().mul(m)? == m.transpose().mul(f)?.scale(&m.field.int(-1)))
}

/// A subspace of `field^ambient`, stored as an RREF basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    field: Field,
    pivots: Vec<usize>,
    basis: Vec<SVec>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.pivots == other.pivots && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Subspace {
    pub fn zero(ambient: usize, field: Field) -> Self {
        Subspace {
            ambient,
            field,
            pivots: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize, field: Field) -> Self {
        Subspace::span(ambient, field, Matrix::identity(ambient, field).data)
    }

    /// Span of arbitrary vectors.
    pub fn span(ambient: usize, field: Field, vectors: Vec<SVec>) -> Self {
        let m = Matrix {
            rows: vectors.len(),
            cols: ambient,
            field,
            data: vectors,
        };
        let e = Echelon::compute(&m);
        Subspace {
            ambient,
            field,
            pivots: e.pivots,
            basis: e.rows,
        }
    }

    pub fn span_dense(ambient: usize, field: Field, vectors: &[Vec<Scalar>]) -> Self {
        Subspace::span(ambient, field, vectors.iter().map(|v| SVec::from_dense(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &[SVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension(format!(
                "ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Quotient representative of `v` modulo this subspace: linear,
    /// idempotent, with kernel exactly this subspace.
    pub fn reduce(&self, v: &SVec) -> SVec {
        let mut r = v.clone();
        for (k, &p) in self.pivots.iter().enumerate() {
            if let Some(c) = r.get(p).cloned() {
                r = r.axpy(&-&c, &self.basis[k]);
            }
        }
        r
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_dense(&self, v: &[Scalar]) -> bool {
        self.contains(&SVec::from_dense(v))
    }

    /// Coordinates in the RREF basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &SVec) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.pivots
                .iter()
                .map(|&p| v.get(p).cloned().unwrap_or_else(|| self.field.zero()))
                .collect(),
        )
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Ok(Subspace::span(self.ambient, self.field, vs))
    }

    /// Zassenhaus: reduce `[[a, a], [b, 0]]`; rows with a zero left half
    /// carry the intersection in their right half.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let n = self.ambient;
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for v in &self.basis {
            let mut r = v.0.clone();
            r.extend(v.0.iter().map(|(j, s)| (j + n, s.clone())));
            rows.push(SVec(r));
        }
        rows.extend(other.basis.iter().cloned());
        let m = Matrix {
            rows: rows.len(),
            cols: 2 * n,
            field: self.field,
            data: rows,
        };
        let e = Echelon::compute(&m);
        let vs = e
            .pivots
            .iter()
            .zip(&e.rows)
            .filter(|(&p, _)| p >= n)
            .map(|(_, r)| SVec(r.0.iter().map(|(j, s)| (j - n, s.clone())).collect()))
            .collect();
        Ok(Subspace::span(n, self.field, vs))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok(self.basis.iter().all(|v| other.contains(v)))
    }

    /// Matrix of the quotient-representative map (ambient × ambient).
    pub fn quotient_map(&self) -> Matrix {
        let cols: Vec<SVec> = (0..self.ambient)
            .map(|j| self.reduce(&SVec(vec![(j, self.field.one())])))
            .collect();
        Matrix {
            rows: self.ambient,
            cols: self.ambient,
            field: self.field,
            data: cols,
        }
        .transpose()
    }
}

/// `true` iff `m` is square and invertible.
pub fn is_invertible(m: &Matrix) -> bool {
    m.rows == m.cols && rank(m) == m.rows
}

/// Inverse of a square invertible matrix.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.rows;
    if m.cols != n {
        return Err(Error::Dimension("inverse of non-square matrix".into()));
    }
    let rows = m
        .data
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.0.push((n + i, m.field.one()));
            r
        })
        .collect();
    let aug = Matrix::from_rows(2 * n, m.field, rows)?;
    let e = Echelon::compute(&aug);
    if e.rank() < n || e.pivots[n - 1] >= n {
        return Err(Error::DegenerateForm);
    }
    let data = e
        .rows
        .iter()
        .map(|r| SVec(r.0.iter().filter(|(j, _)| *j >= n).map(|(j, s)| (j - n, s.clone())).collect()))
        .collect();
    Ok(Matrix {
        rows: n,
        cols: n,
        field: m.field,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn identity_has_full_rank() {
        let (r, k) = rank_and_kernel(&Matrix::identity(2, q()));
        assert_eq!((r, k.dim()), (2, 0));
    }

    #[test]
    fn all_ones_kernel() {
        let m = Matrix::from_ints(q(), &[&[1, 1], &[1, 1]]);
        let (r, k) = rank_and_kernel(&m);
        assert_eq!(r, 1);
        assert_eq!(k.dim(), 1);
        assert!(k.contains_dense(&[q().int(1), q().int(-1)]));

        let f3 = Field::prime(3).unwrap();
        let (r, k) = rank_and_kernel(&Matrix::from_ints(f3, &[&[1, 1], &[1, 1]]));
        assert_eq!(r, 1);
        assert!(k.contains_dense(&[f3.int(1), f3.int(2)]));
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(2, q());
        let b = vec![q().int(3), q().int(-4)];
        assert_eq!(solve(&id, &b).unwrap().unwrap(), b);

        let two = Matrix::from_ints(q(), &[&[2]]);
        let x = solve(&two, &[q().int(1)]).unwrap().unwrap();
        assert_eq!(x[0].to_string(), "1/2");

        let ones = Matrix::from_ints(q(), &[&[1, 1], &[1, 1]]);
        assert!(solve(&ones, &[q().int(1), q().int(0)]).unwrap().is_none());
        assert!(solve(&ones, &[q().int(1)]).is_err());
    }

    #[test]
    fn symmetric_and_skew_maps() {
        let id = Matrix::identity(2, q());
        assert!(is_symmetric_map(&id, &id).unwrap());
        let skew = Matrix::from_ints(q(), &[&[0, 1], &[-1, 0]]);
        assert!(is_skew_symmetric_map(&skew, &id).unwrap());
        assert!(!is_symmetric_map(&skew, &id).unwrap());
        let zero = Matrix::zeros(2, 2, q());
        assert!(matches!(is_symmetric_map(&id, &zero), Err(Error::DegenerateForm)));
    }

    #[test]
    fn subspace_lattice() {
        let a = Subspace::span_dense(2, q(), &[vec![q().int(1), q().int(0)]]);
        let b = Subspace::span_dense(2, q(), &[vec![q().int(1), q().int(1)]]);
        assert_eq!(a.intersection(&a).unwrap(), a);
        assert_eq!(a.intersection(&b).unwrap().dim(), 0);
        assert_eq!(a.sum(&b).unwrap().dim(), 2);

        let line = Subspace::span_dense(3, q(), &[vec![q().int(1), q().int(2), q().int(3)]]);
        let pmap = line.quotient_map();
        assert_eq!(rank(&pmap), 2);
        assert_eq!(pmap.mul(&pmap).unwrap(), pmap);
        let c = Subspace::zero(4, q());
        assert!(a.sum(&c).is_err());
    }

    #[test]
    fn intersection_of_planes() {
        let f = q();
        let p1 = Subspace::span_dense(3, f, &[vec![f.int(1), f.int(0), f.int(0)], vec![f.int(0), f.int(1), f.int(0)]]);
        let p2 = Subspace::span_dense(3, f, &[vec![f.int(0), f.int(1), f.int(0)], vec![f.int(0), f.int(0), f.int(1)]]);
        let i = p1.intersection(&p2).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains_dense(&[f.int(0), f.int(5), f.int(0)]));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_ints(q(), &[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2, q()));
        assert!(inverse(&Matrix::from_ints(q(), &[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn rref_pivot_coordinates() {
        let m = Matrix::from_ints(q(), &[&[1, 2, 3], &[2, 4, 7]]);
        let e = Echelon::compute(&m);
        assert_eq!(e.pivots(), &[0, 2]);
        // M z = C (R z) where C are the pivot columns of M.
        let z = vec![q().int(1), q().int(1), q().int(1)];
        let rz = e.pivot_coordinates(&z);
        let mz = m.mul_vec(&z).unwrap();
        let c0 = m.column(0);
        let c2 = m.column(2);
        for i in 0..2 {
            assert_eq!(mz[i], &(&c0[i] * &rz[0]) + &(&c2[i] * &rz[1]));
        }
    }
}
