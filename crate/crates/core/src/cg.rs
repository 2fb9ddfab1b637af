//! The algebra `A(g, κ)`: the star product on `S²g`, the map `S`, the
//! product `⋄` on `im S` and the form `τ`.
//!
//! Coordinates on `A` are taken in the basis `S(x_p)` where `x_p` runs over
//! the pivot columns of the `S` matrix (leftmost first in the `e_i e_j`,
//! `i ≥ j` order). This choice is deterministic but otherwise arbitrary.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::lie::LieAlgebra;
use crate::linalg::{self, Echelon, Matrix, SVec, Subspace};
use crate::report::{Check, SuiteReport};

/// Index of `e_i e_j` (`i ≥ j`) in the basis of `S²g`.
pub fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    i * (i + 1) / 2 + j
}

/// Inverse of [`pair_index`].
pub fn pair_of(p: usize) -> (usize, usize) {
    let mut i = ((((8 * p + 1) as f64).sqrt() as usize).saturating_sub(1)) / 2;
    while (i + 1) * (i + 2) / 2 <= p {
        i += 1;
    }
    while i * (i + 1) / 2 > p {
        i -= 1;
    }
    (i, p - i * (i + 1) / 2)
}

pub fn sym2_dim(d: usize) -> usize {
    d * (d + 1) / 2
}

/// An element of `S²g` in the basis `{e_i e_j : i ≥ j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sym2Element {
    dim: usize,
    field: Field,
    coeffs: SVec,
}

impl Sym2Element {
    pub fn zero(dim: usize, field: Field) -> Self {
        Sym2Element {
            dim,
            field,
            coeffs: SVec::new(),
        }
    }

    pub fn from_sparse(dim: usize, field: Field, coeffs: SVec) -> Self {
        Sym2Element { dim, field, coeffs }
    }

    /// `e_i e_j`.
    pub fn basis(dim: usize, field: Field, i: usize, j: usize) -> Self {
        Sym2Element::from_sparse(dim, field, SVec(vec![(pair_index(i, j), field.one())]))
    }

    /// The product `ab ∈ S²g` of two elements of `g`.
    pub fn product(dim: usize, field: Field, a: &SVec, b: &SVec) -> Self {
        let mut pairs = Vec::new();
        for (i, x) in &a.0 {
            for (j, y) in &b.0 {
                pairs.push((pair_index(*i, *j), x * y));
            }
        }
        Sym2Element::from_sparse(dim, field, SVec::from_pairs(pairs))
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: &Scalar) {
        let t = SVec(vec![(pair_index(i, j), c.clone())]);
        self.coeffs = self.coeffs.add(&t);
    }

    pub fn coeffs(&self) -> &SVec {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Coefficient of `e_i e_j`.
    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        self.coeffs
            .get(pair_index(i, j))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn add(&self, other: &Sym2Element) -> Sym2Element {
        Sym2Element::from_sparse(self.dim, self.field, self.coeffs.add(&other.coeffs))
    }

    pub fn sub(&self, other: &Sym2Element) -> Sym2Element {
        Sym2Element::from_sparse(self.dim, self.field, self.coeffs.sub(&other.coeffs))
    }

    pub fn scale(&self, c: &Scalar) -> Sym2Element {
        Sym2Element::from_sparse(self.dim, self.field, self.coeffs.scale(c))
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        self.coeffs.to_dense(sym2_dim(self.dim), self.field)
    }
}

/// `(ac) * (bd)` for basis elements, from the polarized closed form of
/// `aa * bb = a[b,[b,a]] + b[a,[a,b]] + [a,b][a,b] + 2⟨a,b⟩ab`.
fn star_basis(g: &LieAlgebra, a: usize, c: usize, b: usize, d: usize) -> SVec {
    let n = g.dim();
    let f = g.field();
    let quarter = f.ratio(1, 4).expect("char is not 2");
    let half = f.ratio(1, 2).expect("char is not 2");
    let br = |x: usize, y: usize| g.bracket_basis(x, y);
    let brl = |x: usize, v: &SVec| g.bracket_basis_left(x, v);
    let unit = |x: usize| SVec(vec![(x, f.one())]);
    let prod = |x: &SVec, y: &SVec| Sym2Element::product(n, f, x, y).coeffs;

    // [x,[y,z]] + [y,[x,z]] for basis x, y, z.
    let dd = |x: usize, y: usize, z: usize| brl(x, br(y, z)).add(&brl(y, br(x, z)));

    let p1 = prod(&unit(a), &dd(b, d, c)).add(&prod(&unit(c), &dd(b, d, a)));
    let p2 = prod(&unit(b), &dd(a, c, d)).add(&prod(&unit(d), &dd(a, c, b)));
    let p3 = prod(br(a, b), br(c, d)).add(&prod(br(a, d), br(c, b)));
    let mut p4 = SVec::new();
    for (k, x, y) in [
        (g.kappa(a, b), c, d),
        (g.kappa(a, d), c, b),
        (g.kappa(c, b), a, d),
        (g.kappa(c, d), a, b),
    ] {
        if !k.is_zero() {
            p4 = p4.axpy(k, &SVec(vec![(pair_index(x, y), f.one())]));
        }
    }
    p1.add(&p2).scale(&quarter).add(&p3.scale(&half)).add(&p4.scale(&half))
}

/// Square formula `aa * bb` for arbitrary `a, b ∈ g`.
pub fn star_squares(g: &LieAlgebra, a: &SVec, b: &SVec) -> Sym2Element {
    let n = g.dim();
    let f = g.field();
    let ab = g.bracket_sparse(a, b);
    let ba = ab.scale(&f.int(-1));
    let t1 = Sym2Element::product(n, f, a, &g.bracket_sparse(b, &ba));
    let t2 = Sym2Element::product(n, f, b, &g.bracket_sparse(a, &ab));
    let t3 = Sym2Element::product(n, f, &ab, &ab);
    let t4 = Sym2Element::product(n, f, a, b).scale(&(&f.int(2) * &g.pairing(a, b)));
    t1.add(&t2).add(&t3).add(&t4)
}

/// `x * y` on `S²g`, extended bilinearly from basis pairs.
pub fn star(g: &LieAlgebra, x: &Sym2Element, y: &Sym2Element) -> Result<Sym2Element> {
    if x.dim != g.dim() || y.dim != g.dim() || x.field != g.field() || y.field != g.field() {
        return Err(Error::Dimension("S²g elements from a different algebra".into()));
    }
    let mut acc = SVec::new();
    for (p, s) in &x.coeffs.0 {
        let (a, c) = pair_of(*p);
        for (q, t) in &y.coeffs.0 {
            let (b, d) = pair_of(*q);
            acc = acc.axpy(&(s * t), &star_basis(g, a, c, b, d));
        }
    }
    Ok(Sym2Element::from_sparse(g.dim(), g.field(), acc))
}

/// `x * y` computed by expanding both factors into squares,
/// `ab = ½((a+b)² − a² − b²)`. Independent of the polarized closed form.
pub fn star_via_squares(g: &LieAlgebra, x: &Sym2Element, y: &Sym2Element) -> Sym2Element {
    let n = g.dim();
    let f = g.field();
    let squares = |z: &Sym2Element| -> Vec<(Scalar, SVec)> {
        let half = f.ratio(1, 2).expect("char is not 2");
        let mut out = Vec::new();
        for (p, s) in &z.coeffs.0 {
            let (i, j) = pair_of(*p);
            let ei = SVec(vec![(i, f.one())]);
            if i == j {
                out.push((s.clone(), ei));
            } else {
                let ej = SVec(vec![(j, f.one())]);
                let hs = s * &half;
                out.push((hs.clone(), ei.add(&ej)));
                out.push((-&hs, ei));
                out.push((-&hs, ej));
            }
        }
        out
    };
    let mut acc = Sym2Element::zero(n, f);
    for (s, a) in squares(x) {
        for (t, b) in squares(y) {
            acc = acc.add(&star_squares(g, &a, &b).scale(&(&s * &t)));
        }
    }
    acc
}

/// `S(e_i e_j) = ½(ad_i ad_j + ad_j ad_i) + e_j (κ e_i)ᵀ + e_i (κ e_j)ᵀ`.
fn s_basis(g: &LieAlgebra, i: usize, j: usize) -> Matrix {
    let d = g.dim();
    let f = g.field();
    let half = f.ratio(1, 2).expect("char is not 2");
    let (ai, aj) = (g.ad_basis(i), g.ad_basis(j));
    let sym = ai.mul(aj).expect("square").add(&aj.mul(ai).expect("square")).expect("square");
    let mut trips = Vec::new();
    for r in 0..d {
        let k1 = g.kappa(i, r);
        if !k1.is_zero() {
            trips.push((j, r, k1.clone()));
        }
        let k2 = g.kappa(j, r);
        if !k2.is_zero() {
            trips.push((i, r, k2.clone()));
        }
    }
    let rank_one = Matrix::from_triplets(d, d, f, trips).expect("in range");
    sym.scale(&half).add(&rank_one).expect("square")
}

/// Row-major flattening of a `d × d` endomorphism: entry `(k, r)` at `k·d + r`.
pub fn flatten(m: &Matrix) -> SVec {
    let d = m.cols();
    let mut out = Vec::with_capacity(m.nnz());
    for k in 0..m.rows() {
        out.extend(m.row(k).0.iter().map(|(r, s)| (k * d + r, s.clone())));
    }
    SVec(out)
}

pub fn unflatten(v: &SVec, d: usize, field: Field) -> Matrix {
    Matrix::from_triplets(d, d, field, v.0.iter().map(|(idx, s)| (idx / d, idx % d, s.clone())))
        .expect("flattened endomorphism")
}

/// The endomorphism `S(x)`.
pub fn s_map(g: &LieAlgebra, x: &Sym2Element) -> Matrix {
    let mut acc = Matrix::zeros(g.dim(), g.dim(), g.field());
    for (p, s) in &x.coeffs.0 {
        let (i, j) = pair_of(*p);
        acc = acc.axpy(s, &s_basis(g, i, j)).expect("square");
    }
    acc
}

/// Matrix of `S : S²g → End(g)`: `d²` rows (flattened endomorphisms) by
/// `d(d+1)/2` columns.
pub fn s_matrix(g: &LieAlgebra) -> Matrix {
    let d = g.dim();
    let cols: Vec<Vec<(usize, usize, Scalar)>> = (0..sym2_dim(d))
        .into_par_iter()
        .map(|p| {
            let (i, j) = pair_of(p);
            flatten(&s_basis(g, i, j))
                .0
                .into_iter()
                .map(|(r, s)| (r, p, s))
                .collect()
        })
        .collect();
    Matrix::from_triplets(d * d, sym2_dim(d), g.field(), cols.into_iter().flatten()).expect("in range")
}

/// Dimensions of `S²g`, `im S` and `ker S` without building the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SRank {
    pub dim_s2: usize,
    pub dim_a: usize,
    pub dim_ker: usize,
}

pub fn s_rank(g: &LieAlgebra) -> SRank {
    let m = s_matrix(g);
    let r = linalg::rank(&m);
    SRank {
        dim_s2: m.cols(),
        dim_a: r,
        dim_ker: m.cols() - r,
    }
}

/// Whether `Id ∈ im S`, by comparing the rank of `S` with that of `[S | Id]`.
pub fn identity_in_image(g: &LieAlgebra) -> bool {
    let m = s_matrix(g);
    let d = g.dim();
    let mut trips = Vec::with_capacity(m.nnz() + d);
    for r in 0..m.rows() {
        trips.extend(m.row(r).0.iter().map(|(c, s)| (r, *c, s.clone())));
    }
    trips.extend((0..d).map(|k| (k * d + k, m.cols(), g.field().one())));
    let aug = Matrix::from_triplets(m.rows(), m.cols() + 1, g.field(), trips).expect("in range");
    linalg::rank(&aug) == linalg::rank(&m)
}

/// Largest `dim A` for which the `⋄` table is stored densely.
pub const DENSE_TABLE_LIMIT: usize = 4000;

/// Largest `dim g` for which `build` runs the exhaustive `*`-ideal check.
pub const WELL_DEFINEDNESS_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Store the `⋄` table when `dim A` is at most this.
    pub table_limit: usize,
    /// Check `S(v * y) = 0` for every kernel basis vector and basis `y`.
    pub check_well_defined: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            table_limit: DENSE_TABLE_LIMIT,
            check_well_defined: true,
        }
    }
}

#[derive(Debug)]
pub struct CGAlgebra {
    source: Arc<LieAlgebra>,
    s_matrix: Matrix,
    echelon: Echelon,
    ker_s: Subspace,
    /// `c(a, b, ·)` at `a * n + b`.
    table: Option<Vec<Vec<Scalar>>>,
    tau: Matrix,
}

impl CGAlgebra {
    pub fn build(g: Arc<LieAlgebra>) -> Result<Self> {
        CGAlgebra::build_with(g, BuildOptions::default())
    }

    pub fn build_with(g: Arc<LieAlgebra>, opts: BuildOptions) -> Result<Self> {
        let s_matrix = s_matrix(&g);
        let echelon = Echelon::compute(&s_matrix);
        let ker_s = Subspace::span(s_matrix.cols(), g.field(), echelon.kernel_vectors());
        let mut alg = CGAlgebra {
            source: g,
            s_matrix,
            echelon,
            ker_s,
            table: None,
            tau: Matrix::zeros(0, 0, Field::Rationals),
        };
        if opts.check_well_defined && alg.source.dim() <= WELL_DEFINEDNESS_LIMIT {
            if let Some(w) = alg.ideal_witness() {
                return Err(Error::WellDefinedness(w));
            }
        }
        let n = alg.dim();
        if n <= opts.table_limit {
            let rows: Vec<Vec<Vec<Scalar>>> = (0..n)
                .into_par_iter()
                .map(|a| (0..n).map(|b| alg.diamond_basis(a.min(b), a.max(b))).collect())
                .collect();
            alg.table = Some(rows.into_iter().flatten().collect());
        }
        alg.tau = alg.tau_matrix_compute();
        Ok(alg)
    }

    pub fn source(&self) -> &Arc<LieAlgebra> {
        &self.source
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    /// `dim A = rank S`.
    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn dim_s2(&self) -> usize {
        self.s_matrix.cols()
    }

    pub fn s_matrix(&self) -> &Matrix {
        &self.s_matrix
    }

    pub fn ker_s(&self) -> &Subspace {
        &self.ker_s
    }

    /// Pair indices `p` with `S(x_p)` forming the basis of `A`: the pivot
    /// columns of the reduced S matrix, in increasing order.
    pub fn im_basis(&self) -> &[usize] {
        self.echelon.pivots()
    }

    pub fn im_basis_elements(&self) -> Vec<Sym2Element> {
        let d = self.source.dim();
        self.im_basis()
            .iter()
            .map(|&p| {
                let (i, j) = pair_of(p);
                Sym2Element::basis(d, self.field(), i, j)
            })
            .collect()
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    /// Coordinates of `S(x)` in the basis of `A`.
    pub fn coordinates(&self, x: &Sym2Element) -> Vec<Scalar> {
        self.echelon.pivot_coordinates_sparse(&x.coeffs)
    }

    /// The preimage `Σ u_a x_{p_a}` of an element given in coordinates.
    pub fn lift(&self, u: &[Scalar]) -> Sym2Element {
        let pairs = self
            .im_basis()
            .iter()
            .zip(u)
            .filter(|(_, s)| !s.is_zero())
            .map(|(&p, s)| (p, s.clone()))
            .collect();
        Sym2Element::from_sparse(self.source.dim(), self.field(), SVec(pairs))
    }

    /// The endomorphism of `g` represented by coordinates `u`.
    pub fn endomorphism(&self, u: &[Scalar]) -> Matrix {
        s_map(&self.source, &self.lift(u))
    }

    fn diamond_basis(&self, a: usize, b: usize) -> Vec<Scalar> {
        let (i, j) = pair_of(self.im_basis()[a]);
        let (k, l) = pair_of(self.im_basis()[b]);
        let z = star_basis(&self.source, i, j, k, l);
        self.echelon.pivot_coordinates_sparse(&z)
    }

    /// Structure constants `c(a, b, ·)` of `⋄` in the basis of `A`.
    pub fn product_basis(&self, a: usize, b: usize) -> Vec<Scalar> {
        match &self.table {
            Some(t) => t[a * self.dim() + b].clone(),
            None => self.diamond_basis(a.min(b), a.max(b)),
        }
    }

    /// `u ⋄ v` in coordinates.
    pub fn diamond(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut acc = vec![self.field().zero(); n];
        for (a, x) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, y) in v.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, c) in self.product_basis(a, b).iter().enumerate() {
                    if !c.is_zero() {
                        acc[k] += &(&xy * c);
                    }
                }
            }
        }
        acc
    }

    /// `τ(S(x_k), S(x_l))` with `τ(f, S(bc)) = ½⟨f(b), c⟩`.
    fn tau_matrix_compute(&self) -> Matrix {
        let g = &self.source;
        let n = self.dim();
        let half = self.field().ratio(1, 2).expect("char is not 2");
        let endos: Vec<Matrix> = self
            .im_basis_elements()
            .iter()
            .map(|x| s_map(g, x))
            .collect();
        let mut trips = Vec::new();
        for (k, f) in endos.iter().enumerate() {
            for (l, &p) in self.im_basis().iter().enumerate() {
                let (b, c) = pair_of(p);
                // ⟨f(e_b), e_c⟩ = Σ_m f[m][b] κ(m, c)
                let mut acc = self.field().zero();
                for m in 0..g.dim() {
                    if let Some(s) = f.row(m).get(b) {
                        acc += &(s * g.kappa(m, c));
                    }
                }
                if !acc.is_zero() {
                    trips.push((k, l, &acc * &half));
                }
            }
        }
        Matrix::from_triplets(n, n, self.field(), trips).expect("in range")
    }

    pub fn tau_matrix(&self) -> &Matrix {
        &self.tau
    }

    /// `τ(u, v)` for coordinates `u, v`.
    pub fn tau(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let tv = self.tau.mul_vec(v).expect("coordinate length");
        let mut acc = self.field().zero();
        for (x, y) in u.iter().zip(&tv) {
            acc += &(x * y);
        }
        acc
    }

    /// First failure of `S(v * y) = 0` over kernel basis vectors `v` and
    /// basis elements `y`.
    fn ideal_witness(&self) -> Option<String> {
        let g = &self.source;
        let d = g.dim();
        let basis = self.ker_s.basis().to_vec();
        basis.par_iter().enumerate().find_map_first(|(vi, v)| {
            let v = Sym2Element::from_sparse(d, g.field(), v.clone());
            for q in 0..sym2_dim(d) {
                let (i, j) = pair_of(q);
                let y = Sym2Element::basis(d, g.field(), i, j);
                let z = star(g, &v, &y).expect("same algebra");
                if self.coordinates(&z).iter().any(|s| !s.is_zero()) {
                    return Some(format!(
                        "kernel vector {vi} times {}{} leaves ker S",
                        g.labels()[i],
                        g.labels()[j]
                    ));
                }
            }
            None
        })
    }

    /// Solves `S(x) = Id`; the unit of `A` in coordinates, if it exists.
    pub fn check_unital(&self) -> Result<Option<Vec<Scalar>>> {
        let d = self.source.dim();
        let id = flatten(&Matrix::identity(d, self.field()));
        let rhs = id.to_dense(d * d, self.field());
        let Some(x) = linalg::solve(&self.s_matrix, &rhs)? else {
            return Ok(None);
        };
        let u = self.echelon.pivot_coordinates(&x);
        for b in 0..self.dim() {
            let mut eb = vec![self.field().zero(); self.dim()];
            eb[b] = self.field().one();
            if self.diamond(&u, &eb) != eb {
                return Err(Error::WellDefinedness(format!(
                    "Id solves S(x) = Id but is not a unit on basis element {b}"
                )));
            }
        }
        Ok(Some(u))
    }

    /// JSON export of the `⋄` table (`i ≤ j`) and `τ`.
    pub fn export_tables(&self) -> serde_json::Value {
        let n = self.dim();
        let mut products = Vec::new();
        for i in 0..n {
            for j in i..n {
                let terms: Vec<serde_json::Value> = self
                    .product_basis(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| !s.is_zero())
                    .map(|(k, s)| serde_json::json!([k, s.to_string()]))
                    .collect();
                if !terms.is_empty() {
                    products.push(serde_json::json!([i, j, terms]));
                }
            }
        }
        let mut tau = Vec::new();
        for i in 0..n {
            for (j, s) in &self.tau.row(i).0 {
                if i <= *j {
                    tau.push(serde_json::json!([i, j, s.to_string()]));
                }
            }
        }
        serde_json::json!({ "dim": n, "products": products, "tau": tau })
    }
}

// -- identity suite -------------------------------------------------------------

/// Random element of `g` with small integer coordinates.
pub fn random_element(g: &LieAlgebra, rng: &mut ChaCha8Rng) -> SVec {
    let f = g.field();
    let v: Vec<Scalar> = (0..g.dim()).map(|_| f.int(rng.gen_range(-3..=3))).collect();
    SVec::from_dense(&v)
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).expect("square").sub(&b.mul(a).expect("square")).expect("square")
}

fn describe(g: &LieAlgebra, v: &SVec) -> String {
    let terms: Vec<String> = v
        .0
        .iter()
        .map(|(i, s)| format!("{s}*{}", g.labels()[*i]))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Exhaustive basis pairs when `dim g ≤ 10`, plus `samples` seeded random pairs.
fn test_pairs(g: &LieAlgebra, samples: usize, seed: u64) -> Vec<(SVec, SVec)> {
    let f = g.field();
    let d = g.dim();
    let mut out = Vec::new();
    if d <= 10 {
        for i in 0..d {
            for j in 0..d {
                out.push((SVec(vec![(i, f.one())]), SVec(vec![(j, f.one())])));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        out.push((random_element(g, &mut rng), random_element(g, &mut rng)));
    }
    out
}

/// The identities `[ad_b, S(aa)] = 2 S(a[b,a])`,
/// `f ⋄ S(bb) = ½[ad_b,[ad_b,f]] + S(f(b)b)`, τ-associativity, the
/// `*`-ideal property of `ker S`, and agreement of the two `*` evaluations.
pub fn cg_identity_suite(a: &CGAlgebra, samples: usize, seed: u64) -> SuiteReport {
    let g = a.source().as_ref();
    let f = g.field();
    let d = g.dim();
    let pairs = test_pairs(g, samples, seed);
    let two = f.int(2);
    let half = f.ratio(1, 2).expect("char is not 2");

    let equivariance: Vec<Option<String>> = pairs
        .par_iter()
        .map(|(x, y)| {
            let saa = s_map(g, &Sym2Element::product(d, f, x, x));
            let lhs = commutator(&g.ad_sparse(y).expect("in g"), &saa);
            let rhs = s_map(g, &Sym2Element::product(d, f, x, &g.bracket_sparse(y, x))).scale(&two);
            (lhs != rhs).then(|| format!("a = {}, b = {}", describe(g, x), describe(g, y)))
        })
        .collect();

    // f runs over S(x) for x = a·a, and over the basis of A.
    let mut f_cases: Vec<(Sym2Element, SVec)> = pairs
        .iter()
        .map(|(x, y)| (Sym2Element::product(d, f, x, x), y.clone()))
        .collect();
    for x in a.im_basis_elements() {
        for j in 0..d.min(10) {
            f_cases.push((x.clone(), SVec(vec![(j, f.one())])));
        }
    }
    let diamond_rule: Vec<Option<String>> = f_cases
        .par_iter()
        .map(|(x, b)| {
            let fm = s_map(g, x);
            let bb = Sym2Element::product(d, f, b, b);
            let lhs = s_map(g, &star(g, x, &bb).expect("same algebra"));
            let adb = g.ad_sparse(b).expect("in g");
            let inner = commutator(&adb, &commutator(&adb, &fm)).scale(&half);
            let fb = fm.mul_vec(&b.to_dense(d, f)).expect("length");
            let rhs = inner
                .add(&s_map(g, &Sym2Element::product(d, f, &SVec::from_dense(&fb), b)))
                .expect("square");
            (lhs != rhs).then(|| format!("f = S({:?}), b = {}", x.coeffs(), describe(g, b)))
        })
        .collect();

    let n = a.dim();
    let mut assoc_cases = 0u64;
    let mut assoc_fail = None;
    let unit = |k: usize| {
        let mut v = vec![f.zero(); n];
        v[k] = f.one();
        v
    };
    if d <= 10 {
        'outer: for x in 0..n {
            for y in 0..n {
                let xy = a.product_basis(x, y);
                for z in 0..n {
                    assoc_cases += 1;
                    let l = a.tau(&xy, &unit(z));
                    let r = a.tau(&unit(x), &a.product_basis(y, z));
                    if l != r {
                        assoc_fail = Some(format!("basis triple ({x}, {y}, {z})"));
                        break 'outer;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7461_7500);
    for _ in 0..samples {
        if assoc_fail.is_some() {
            break;
        }
        let r: Vec<Vec<Scalar>> = (0..3)
            .map(|_| (0..n).map(|_| f.int(rng.gen_range(-3..=3))).collect())
            .collect();
        assoc_cases += 1;
        if a.tau(&a.diamond(&r[0], &r[1]), &r[2]) != a.tau(&r[0], &a.diamond(&r[1], &r[2])) {
            assoc_fail = Some(format!("random triple {r:?}"));
        }
    }

    let ideal = a.ideal_witness();
    let ideal_cases = (a.ker_s().dim() * a.dim_s2()) as u64;

    let polar: Vec<Option<String>> = if d <= 10 {
        (0..sym2_dim(d))
            .into_par_iter()
            .flat_map_iter(|p| (p..sym2_dim(d)).map(move |q| (p, q)))
            .map(|(p, q)| {
                let (i, j) = pair_of(p);
                let (k, l) = pair_of(q);
                let x = Sym2Element::basis(d, f, i, j);
                let y = Sym2Element::basis(d, f, k, l);
                (star(g, &x, &y).expect("same algebra") != star_via_squares(g, &x, &y))
                    .then(|| format!("({}{})*({}{})", g.labels()[i], g.labels()[j], g.labels()[k], g.labels()[l]))
            })
            .collect()
    } else {
        Vec::new()
    };

    SuiteReport::new(
        "cg-identities",
        vec![
            Check::from_results("ad-equivariance", &equivariance),
            Check::from_results("diamond-rule", &diamond_rule),
            Check::single("tau-associativity", assoc_cases, assoc_fail),
            Check::single("ker-s-star-ideal", ideal_cases, ideal),
            Check::from_results("star-polarization", &polar),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::FormSpec;

    fn sl2() -> Arc<LieAlgebra> {
        Arc::new(LieAlgebra::builtin("sl2".parse().unwrap(), Field::Rationals, FormSpec::DualCoxeter).unwrap())
    }

    fn sq(g: &LieAlgebra, l: &str) -> Sym2Element {
        let i = g.label_index(l).unwrap();
        Sym2Element::basis(g.dim(), g.field(), i, i)
    }

    fn mixed(g: &LieAlgebra, a: &str, b: &str) -> Sym2Element {
        Sym2Element::basis(g.dim(), g.field(), g.label_index(a).unwrap(), g.label_index(b).unwrap())
    }

    #[test]
    fn pair_indexing() {
        for p in 0..500 {
            let (i, j) = pair_of(p);
            assert!(i >= j);
            assert_eq!(pair_index(i, j), p);
            assert_eq!(pair_index(j, i), p);
        }
    }

    #[test]
    fn star_examples() {
        let g = sl2();
        let q = Field::Rationals;
        let hh = sq(&g, "h");
        assert_eq!(star(&g, &hh, &hh).unwrap(), hh.scale(&q.int(4)));
        let ee = sq(&g, "e");
        let ff = sq(&g, "f");
        let expect = hh.sub(&mixed(&g, "e", "f").scale(&q.int(2)));
        assert_eq!(star(&g, &ee, &ff).unwrap(), expect);
        assert_eq!(star(&g, &hh, &ee).unwrap(), ee.scale(&q.int(8)));
    }

    #[test]
    fn s_map_examples() {
        let g = sl2();
        let q = Field::Rationals;
        let id = Matrix::identity(3, q);
        assert_eq!(s_map(&g, &sq(&g, "h")), id.scale(&q.int(4)));
        assert!(s_map(&g, &sq(&g, "e")).is_zero());
        assert_eq!(s_map(&g, &mixed(&g, "e", "f")), id.scale(&q.int(2)));
    }

    #[test]
    fn sl2_algebra() {
        let g = sl2();
        let a = CGAlgebra::build(g.clone()).unwrap();
        assert_eq!((a.dim_s2(), a.ker_s().dim(), a.dim()), (6, 5, 1));
        let q = Field::Rationals;
        // The single basis vector is S(x_p) for the leftmost pivot.
        let u = a.check_unital().unwrap().unwrap();
        assert_eq!(a.endomorphism(&u), Matrix::identity(3, q));
        assert_eq!(a.diamond(&u, &u), u);
        // τ(S(hh), S(hh)) = 4 and τ(Id, Id) = 1/4.
        let shh = a.coordinates(&sq(&g, "h"));
        assert_eq!(a.tau(&shh, &shh), q.int(4));
        assert_eq!(a.tau(&u, &u), q.ratio(1, 4).unwrap());
        let see = a.coordinates(&sq(&g, "e"));
        assert_eq!(a.tau(&see, &shh), q.int(0));
    }

    #[test]
    fn casimir_maps_to_multiple_of_identity() {
        let g = sl2();
        let omega = g.casimir_element().unwrap();
        assert_eq!(s_map(&g, &omega), Matrix::identity(3, Field::Rationals).scale(&Field::Rationals.int(6)));
    }

    #[test]
    fn sl2_suite_passes() {
        let a = CGAlgebra::build(sl2()).unwrap();
        let r = cg_identity_suite(&a, 20, 1);
        assert!(r.passed(), "{r:?}");
    }
}
