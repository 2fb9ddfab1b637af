//! Finite-dimensional Lie algebras given by structure constants, with an
//! attached symmetric bilinear form.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cg::Sym2Element;
use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Field, Scalar};
use crate::linalg::{self, Matrix, SVec, Subspace};

/// Coordinates of an element of the algebra in its fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GVector(pub Vec<Scalar>);

impl GVector {
    pub fn basis(dim: usize, i: usize, field: Field) -> Self {
        let mut v = vec![field.zero(); dim];
        v[i] = field.one();
        GVector(v)
    }

    pub fn zero(dim: usize, field: Field) -> Self {
        GVector(vec![field.zero(); dim])
    }

    pub fn to_sparse(&self) -> SVec {
        SVec::from_dense(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }
}

/// How the invariant form is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormSpec {
    /// The Killing form itself.
    Killing,
    /// A rational multiple of the Killing form.
    KillingScaled(BigRational),
    /// `K / (2 h∨)` with the dual Coxeter number of the named type.
    DualCoxeter,
    /// Explicit symmetric entries `(i, j, value)`.
    Matrix(Vec<(usize, usize, BigRational)>),
}

impl FormSpec {
    pub fn describe(&self) -> String {
        match self {
            FormSpec::Killing => "killing".into(),
            FormSpec::KillingScaled(q) => format!("killing-scaled:{}", format_rational(q)),
            FormSpec::DualCoxeter => "dual-coxeter".into(),
            FormSpec::Matrix(_) => "matrix".into(),
        }
    }
}

impl FromStr for FormSpec {
    type Err = Error;

    /// `killing`, `dual-coxeter` or `killing-scaled:p/q`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "killing" => Ok(FormSpec::Killing),
            "dual-coxeter" | "dual_coxeter" => Ok(FormSpec::DualCoxeter),
            other => match other
                .strip_prefix("killing-scaled:")
                .or_else(|| other.strip_prefix("killing_scaled:"))
            {
                Some(q) => Ok(FormSpec::KillingScaled(parse_rational(q)?)),
                None => Err(Error::Parse(format!(
                    "unknown form '{other}' (expected killing, dual-coxeter or killing-scaled:p/q)"
                ))),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Sl,
    So,
    Sp,
}

/// A named classical algebra: family plus matrix size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Builtin {
    pub family: Family,
    pub size: usize,
}

impl Builtin {
    pub fn dual_coxeter(self) -> u64 {
        match self.family {
            Family::Sl => self.size as u64,
            Family::So => self.size as u64 - 2,
            Family::Sp => self.size as u64 / 2 + 1,
        }
    }

    pub fn name(self) -> String {
        let f = match self.family {
            Family::Sl => "sl",
            Family::So => "so",
            Family::Sp => "sp",
        };
        format!("{f}{}", self.size)
    }
}

impl FromStr for Builtin {
    type Err = Error;

    /// `sl<n>` (n ≥ 2), `so<n>` (n ≥ 3), `sp<2n>` (n ≥ 1).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::Parse(format!("unknown builtin algebra '{s}' (expected sl<n>, so<n> or sp<2n>)"));
        if s.len() < 3 {
            return Err(bad());
        }
        let (fam, n) = s.split_at(2);
        let size: usize = n.parse().map_err(|_| bad())?;
        let family = match fam {
            "sl" if size >= 2 => Family::Sl,
            "so" if size >= 3 => Family::So,
            "sp" if size >= 2 && size.is_multiple_of(2) => Family::Sp,
            _ => return Err(bad()),
        };
        Ok(Builtin { family, size })
    }
}

/// Dual Coxeter number by type name, for file-loaded algebras.
pub fn dual_coxeter_by_name(name: &str) -> Option<u64> {
    let lower = name.trim().to_ascii_lowercase();
    if let Ok(b) = lower.parse::<Builtin>() {
        return Some(b.dual_coxeter());
    }
    match lower.as_str() {
        "g2" => Some(4),
        "f4" => Some(9),
        "e6" => Some(12),
        "e7" => Some(18),
        "e8" => Some(30),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub characteristic: u64,
    pub jacobi_ok: bool,
    /// First basis triple violating Jacobi.
    pub jacobi_witness: Option<[String; 3]>,
    pub symmetric_ok: bool,
    pub symmetric_witness: Option<[String; 2]>,
    pub invariance_ok: bool,
    /// First basis triple with ⟨[a,b],c⟩ ≠ ⟨a,[b,c]⟩.
    pub invariance_witness: Option<[String; 3]>,
    pub nondegenerate_ok: bool,
    pub form_rank: usize,
    pub center_dim: usize,
    /// All checks pass, the center is zero and the characteristic is not 2.
    pub admissible: bool,
}

impl ValidationReport {
    /// Axioms required for a usable algebra; a nonzero center is allowed.
    pub fn axioms_ok(&self) -> bool {
        self.jacobi_ok && self.symmetric_ok && self.invariance_ok && self.nondegenerate_ok
    }

    pub fn first_failure(&self) -> Option<String> {
        if let Some([a, b, c]) = &self.jacobi_witness {
            return Some(format!("Jacobi identity fails on ({a}, {b}, {c})"));
        }
        if let Some([a, b]) = &self.symmetric_witness {
            return Some(format!("form is not symmetric at ({a}, {b})"));
        }
        if let Some([a, b, c]) = &self.invariance_witness {
            return Some(format!("form is not invariant on ({a}, {b}, {c})"));
        }
        if !self.nondegenerate_ok {
            return Some(format!("form is degenerate (rank {})", self.form_rank));
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct CasimirReport {
    pub endomorphism: Matrix,
    /// `c` when the endomorphism equals `c·Id`, written `2h`.
    pub scalar: Option<Scalar>,
}

impl CasimirReport {
    /// `h` with the endomorphism equal to `2h·Id`.
    pub fn h(&self) -> Option<Scalar> {
        let two = self.endomorphism.field().int(2);
        self.scalar.as_ref().map(|c| c / &two)
    }
}

#[derive(Debug)]
pub struct LieAlgebra {
    name: String,
    field: Field,
    labels: Vec<String>,
    /// `[e_i, e_j]` for `i < j`, as given.
    structure: BTreeMap<(usize, usize), SVec>,
    /// Full table `[e_i, e_j]` at `i * dim + j`, synthesized from `structure`.
    table: Vec<SVec>,
    ad: Vec<Matrix>,
    form: Matrix,
    form_dense: Vec<Scalar>,
    form_spec: FormSpec,
}

impl LieAlgebra {
    /// Assembles an algebra without checking any axioms; see [`LieAlgebra::validate`].
    pub fn from_structure(
        name: impl Into<String>,
        field: Field,
        labels: Vec<String>,
        structure: BTreeMap<(usize, usize), SVec>,
        form_spec: FormSpec,
    ) -> Result<Self> {
        let name = name.into();
        let d = labels.len();
        for (&(i, j), v) in &structure {
            if i >= j || j >= d {
                return Err(Error::InvalidAlgebra(format!("bracket index ({i},{j}) out of range")));
            }
            if v.0.iter().any(|(k, s)| *k >= d || s.field() != field) {
                return Err(Error::InvalidAlgebra(format!("bad coefficients in [{i},{j}]")));
            }
        }
        let mut table = vec![SVec::new(); d * d];
        for (&(i, j), v) in &structure {
            table[i * d + j] = v.clone();
            table[j * d + i] = v.scale(&field.int(-1));
        }
        let ad = (0..d)
            .map(|i| {
                let trips = (0..d)
                    .flat_map(|j| table[i * d + j].0.iter().map(move |(k, s)| (*k, j, s.clone())))
                    .collect::<Vec<_>>();
                Matrix::from_triplets(d, d, field, trips).expect("indices checked")
            })
            .collect();
        let mut alg = LieAlgebra {
            name,
            field,
            labels,
            structure,
            table,
            ad,
            form: Matrix::zeros(d, d, field),
            form_dense: Vec::new(),
            form_spec: form_spec.clone(),
        };
        let form = alg.resolve_form(&form_spec)?;
        alg.form_dense = form.to_dense().into_iter().flatten().collect();
        alg.form = form;
        Ok(alg)
    }

    fn resolve_form(&self, spec: &FormSpec) -> Result<Matrix> {
        let d = self.dim();
        match spec {
            FormSpec::Killing => Ok(self.killing_form()),
            FormSpec::KillingScaled(q) => Ok(self.killing_form().scale(&self.field.rational(q)?)),
            FormSpec::DualCoxeter => {
                let h = dual_coxeter_by_name(&self.name).ok_or_else(|| {
                    Error::Unsupported(format!(
                        "no dual Coxeter number known for '{}'; supply the form explicitly",
                        self.name
                    ))
                })?;
                let scale = self.field.ratio(1, 2 * h as i64)?;
                Ok(self.killing_form().scale(&scale))
            }
            FormSpec::Matrix(entries) => {
                let mut dense: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
                for (i, j, q) in entries {
                    if *i >= d || *j >= d {
                        return Err(Error::InvalidAlgebra(format!("form entry ({i},{j}) out of range")));
                    }
                    for key in [(*i, *j), (*j, *i)] {
                        if let Some(old) = dense.get(&key) {
                            if old != q {
                                return Err(Error::InvalidAlgebra(format!(
                                    "form entries ({i},{j}) and ({j},{i}) disagree"
                                )));
                            }
                        }
                    }
                    dense.insert((*i, *j), q.clone());
                    dense.insert((*j, *i), q.clone());
                }
                let trips = dense
                    .into_iter()
                    .map(|((i, j), q)| Ok((i, j, self.field.rational(&q)?)))
                    .collect::<Result<Vec<_>>>()?;
                Matrix::from_triplets(d, d, self.field, trips)
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn form_spec(&self) -> &FormSpec {
        &self.form_spec
    }

    pub fn structure(&self) -> &BTreeMap<(usize, usize), SVec> {
        &self.structure
    }

    /// `κ(e_i, e_j)`.
    pub fn kappa(&self, i: usize, j: usize) -> &Scalar {
        &self.form_dense[i * self.dim() + j]
    }

    /// `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SVec {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket_sparse(&self, a: &SVec, b: &SVec) -> SVec {
        let mut pairs = Vec::new();
        for (i, x) in &a.0 {
            for (j, y) in &b.0 {
                let xy = x * y;
                for (k, c) in &self.table[i * self.dim() + j].0 {
                    pairs.push((*k, &xy * c));
                }
            }
        }
        SVec::from_pairs(pairs)
    }

    /// `[e_i, v]`.
    pub fn bracket_basis_left(&self, i: usize, b: &SVec) -> SVec {
        let mut pairs = Vec::new();
        for (j, y) in &b.0 {
            for (k, c) in &self.table[i * self.dim() + j].0 {
                pairs.push((*k, y * c));
            }
        }
        SVec::from_pairs(pairs)
    }

    fn check_len(&self, v: &GVector) -> Result<()> {
        if v.0.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "vector of length {} in a {}-dimensional algebra",
                v.0.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn bracket(&self, a: &GVector, b: &GVector) -> Result<GVector> {
        self.check_len(a)?;
        self.check_len(b)?;
        let c = self.bracket_sparse(&a.to_sparse(), &b.to_sparse());
        Ok(GVector(c.to_dense(self.dim(), self.field)))
    }

    /// `⟨a, b⟩`.
    pub fn pairing(&self, a: &SVec, b: &SVec) -> Scalar {
        let mut acc = self.field.zero();
        for (i, x) in &a.0 {
            for (j, y) in &b.0 {
                let k = self.kappa(*i, *j);
                if !k.is_zero() {
                    acc += &(&(x * y) * k);
                }
            }
        }
        acc
    }

    /// `ad_{e_i}`.
    pub fn ad_basis(&self, i: usize) -> &Matrix {
        &self.ad[i]
    }

    /// Matrix of `ad_a`; column `j` is `[a, e_j]`.
    pub fn ad_matrix(&self, a: &GVector) -> Result<Matrix> {
        self.check_len(a)?;
        self.ad_sparse(&a.to_sparse())
    }

    pub fn ad_sparse(&self, a: &SVec) -> Result<Matrix> {
        let mut m = Matrix::zeros(self.dim(), self.dim(), self.field);
        for (i, x) in &a.0 {
            m = m.axpy(x, &self.ad[*i])?;
        }
        Ok(m)
    }

    /// `K(e_i, e_j) = Tr(ad_i ad_j)`.
    pub fn killing_form(&self) -> Matrix {
        let d = self.dim();
        let rows: Vec<Vec<(usize, usize, Scalar)>> = (0..d)
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                for j in i..d {
                    let t = trace_of_product(&self.ad[i], &self.ad[j], self.field);
                    if !t.is_zero() {
                        out.push((i, j, t.clone()));
                        if i != j {
                            out.push((j, i, t));
                        }
                    }
                }
                out
            })
            .collect();
        Matrix::from_triplets(d, d, self.field, rows.into_iter().flatten()).expect("in range")
    }

    /// Center `{a : [a, g] = 0}` as a subspace of coordinate space.
    pub fn center(&self) -> Subspace {
        let d = self.dim();
        // Row (j, k), column i: coefficient of e_k in [e_i, e_j].
        let mut trips = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, s) in &self.table[i * d + j].0 {
                    trips.push((j * d + k, i, s.clone()));
                }
            }
        }
        let m = Matrix::from_triplets(d * d, d, self.field, trips).expect("in range");
        linalg::rank_and_kernel(&m).1
    }

    fn jacobi_witness(&self) -> Option<[usize; 3]> {
        let d = self.dim();
        (0..d).into_par_iter().find_map_first(|i| {
            for j in i + 1..d {
                for k in j + 1..d {
                    let t1 = self.bracket_basis_left(i, self.bracket_basis(j, k));
                    let t2 = self.bracket_basis_left(j, self.bracket_basis(k, i));
                    let t3 = self.bracket_basis_left(k, self.bracket_basis(i, j));
                    if !t1.add(&t2).add(&t3).is_zero() {
                        return Some([i, j, k]);
                    }
                }
            }
            None
        })
    }

    fn symmetric_witness(&self) -> Option<[usize; 2]> {
        let d = self.dim();
        for i in 0..d {
            for j in i + 1..d {
                if self.kappa(i, j) != self.kappa(j, i) {
                    return Some([i, j]);
                }
            }
        }
        None
    }

    fn invariance_witness(&self) -> Option<[usize; 3]> {
        // ⟨[a,b],c⟩ = ⟨a,[b,c]⟩ for all a, c is the statement that κ·ad_b is skew.
        let d = self.dim();
        (0..d).into_par_iter().find_map_first(|b| {
            let m = self.form.mul(&self.ad[b]).expect("square");
            let mt = m.transpose();
            let s = m.add(&mt).expect("square");
            (0..d).find_map(|a| s.row(a).leading().map(|c| [a, b, c]))
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let label3 = |t: [usize; 3]| t.map(|i| self.labels[i].clone());
        let jac = self.jacobi_witness();
        let sym = self.symmetric_witness();
        let inv = self.invariance_witness();
        let form_rank = linalg::rank(&self.form);
        let nondegenerate_ok = form_rank == self.dim();
        let center_dim = self.center().dim();
        let all = jac.is_none() && sym.is_none() && inv.is_none() && nondegenerate_ok;
        ValidationReport {
            characteristic: self.field.characteristic(),
            jacobi_ok: jac.is_none(),
            jacobi_witness: jac.map(label3),
            symmetric_ok: sym.is_none(),
            symmetric_witness: sym.map(|t| t.map(|i| self.labels[i].clone())),
            invariance_ok: inv.is_none(),
            invariance_witness: inv.map(label3),
            nondegenerate_ok,
            form_rank,
            center_dim,
            // Characteristic 2 cannot be constructed at all.
            admissible: all && center_dim == 0,
        }
    }

    /// Validates and rejects algebras failing any axiom.
    pub fn checked(self) -> Result<Self> {
        let report = self.validate();
        match report.first_failure() {
            Some(msg) => Err(Error::InvalidAlgebra(msg)),
            None => Ok(self),
        }
    }

    /// `κ⁻¹`, the Gram matrix of the dual basis.
    pub fn form_inverse(&self) -> Result<Matrix> {
        linalg::inverse(&self.form)
    }

    /// `Ω = Σ u_i u^i` over κ-dual bases, in the `e_i e_j` (i ≥ j) basis.
    pub fn casimir_element(&self) -> Result<Sym2Element> {
        let inv = self.form_inverse()?;
        let d = self.dim();
        let two = self.field.int(2);
        let mut x = Sym2Element::zero(d, self.field);
        for i in 0..d {
            for (j, s) in &inv.row(i).0 {
                if *j < i {
                    x.add_term(i, *j, &(s * &two));
                } else if *j == i {
                    x.add_term(i, i, s);
                }
            }
        }
        Ok(x)
    }

    /// `Σ_i ad_{u_i} ad_{u^i}`, and whether it is scalar.
    pub fn casimir_endomorphism(&self) -> Result<CasimirReport> {
        let inv = self.form_inverse()?;
        let d = self.dim();
        let mut acc = Matrix::zeros(d, d, self.field);
        for i in 0..d {
            let dual = self.ad_sparse(inv.row(i))?;
            acc = acc.add(&self.ad[i].mul(&dual)?)?;
        }
        let c = acc.get(0, 0);
        let scalar = (acc == Matrix::identity(d, self.field).scale(&c)).then_some(c);
        Ok(CasimirReport {
            endomorphism: acc,
            scalar,
        })
    }

    // -- builtins ----------------------------------------------------------

    /// A classical matrix algebra over `field`, validated.
    pub fn builtin(b: Builtin, field: Field, form: FormSpec) -> Result<Self> {
        LieAlgebra::builtin_unchecked(b, field, form)?.checked()
    }

    /// As [`LieAlgebra::builtin`] without validation, for inspecting bad
    /// characteristics.
    pub fn builtin_unchecked(b: Builtin, field: Field, form: FormSpec) -> Result<Self> {
        let (labels, basis, coords) = classical_basis(b);
        let d = basis.len();
        let mut structure = BTreeMap::new();
        for i in 0..d {
            for j in i + 1..d {
                let c = commutator(&basis[i], &basis[j]);
                let v = coords(&c);
                let pairs = v
                    .into_iter()
                    .enumerate()
                    .filter(|(_, q)| !num_traits::Zero::is_zero(q))
                    .map(|(k, q)| Ok((k, field.rational(&q)?)))
                    .collect::<Result<Vec<_>>>()?;
                let sv = SVec::from_pairs(pairs);
                if !sv.is_zero() {
                    structure.insert((i, j), sv);
                }
            }
        }
        let form = match form {
            FormSpec::DualCoxeter => {
                FormSpec::KillingScaled(BigRational::new(1.into(), (2 * b.dual_coxeter()).into()))
            }
            f => f,
        };
        let mut alg = LieAlgebra::from_structure(b.name(), field, labels, structure, form)?;
        alg.form_spec = match alg.form_spec {
            FormSpec::KillingScaled(ref q)
                if *q == BigRational::new(1.into(), (2 * b.dual_coxeter()).into()) =>
            {
                FormSpec::DualCoxeter
            }
            ref f => f.clone(),
        };
        Ok(alg)
    }

    /// The `n`-dimensional abelian algebra with form `diag(entries)`.
    pub fn abelian(n: usize, field: Field, diag: &[BigRational]) -> Result<Self> {
        let labels = (0..n).map(|i| format!("x{i}")).collect();
        let entries = diag.iter().enumerate().map(|(i, q)| (i, i, q.clone())).collect();
        LieAlgebra::from_structure(format!("abelian{n}"), field, labels, BTreeMap::new(), FormSpec::Matrix(entries))
    }

    // -- JSON --------------------------------------------------------------

    pub fn to_file_format(&self) -> Result<AlgebraFile> {
        let q = |s: &Scalar| -> Result<String> {
            match s.as_rational() {
                Some(r) => Ok(format_rational(r)),
                None => Err(Error::Unsupported(
                    "only algebras over the rationals can be serialized exactly".into(),
                )),
            }
        };
        let brackets = self
            .structure
            .iter()
            .map(|(&(i, j), v)| {
                Ok((i, j, v.0.iter().map(|(k, s)| Ok((*k, q(s)?))).collect::<Result<Vec<_>>>()?))
            })
            .collect::<Result<Vec<_>>>()?;
        let form = match &self.form_spec {
            FormSpec::Killing => FormJson::Killing,
            FormSpec::KillingScaled(r) => FormJson::KillingScaled {
                scale: format_rational(r),
            },
            FormSpec::DualCoxeter => FormJson::DualCoxeter,
            FormSpec::Matrix(entries) => FormJson::Matrix {
                entries: entries
                    .iter()
                    .filter(|(i, j, _)| i <= j)
                    .map(|(i, j, r)| (*i, *j, format_rational(r)))
                    .collect(),
            },
        };
        Ok(AlgebraFile {
            name: self.name.clone(),
            dim: self.dim(),
            basis: self.labels.clone(),
            brackets,
            form,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file_format()?)?)
    }

    /// Parses the JSON format without validating axioms.
    pub fn from_json_unchecked(text: &str, field: Field) -> Result<Self> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra file: {e}")))?;
        LieAlgebra::from_file_format(file, field)
    }

    /// Parses and validates; fails with the first violated axiom.
    pub fn from_json(text: &str, field: Field) -> Result<Self> {
        LieAlgebra::from_json_unchecked(text, field)?.checked()
    }

    pub fn load_from_file(path: impl AsRef<Path>, field: Field) -> Result<Self> {
        LieAlgebra::from_json(&std::fs::read_to_string(path)?, field)
    }

    pub fn from_file_format(file: AlgebraFile, field: Field) -> Result<Self> {
        let d = file.dim;
        if file.basis.len() != d {
            return Err(Error::Parse(format!(
                "dim is {d} but {} basis labels were given",
                file.basis.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &file.basis {
            if !seen.insert(l) {
                return Err(Error::Parse(format!("duplicate basis label '{l}'")));
            }
        }
        let mut structure: BTreeMap<(usize, usize), SVec> = BTreeMap::new();
        for (i, j, terms) in file.brackets {
            if i >= d || j >= d {
                return Err(Error::Parse(format!("bracket index ({i},{j}) out of range")));
            }
            let pairs = terms
                .iter()
                .map(|(k, s)| {
                    if *k >= d {
                        return Err(Error::Parse(format!("bracket [{i},{j}] refers to basis index {k}")));
                    }
                    Ok((*k, field.parse(s)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let v = SVec::from_pairs(pairs);
            if i == j {
                if !v.is_zero() {
                    return Err(Error::InvalidAlgebra(format!(
                        "[{0},{0}] must vanish by antisymmetry",
                        file.basis[i]
                    )));
                }
                continue;
            }
            let (key, v) = if i < j { ((i, j), v) } else { ((j, i), v.scale(&field.int(-1))) };
            if let Some(old) = structure.get(&key) {
                if *old != v {
                    return Err(Error::InvalidAlgebra(format!(
                        "[{a},{b}] and [{b},{a}] are inconsistent with antisymmetry",
                        a = file.basis[key.0],
                        b = file.basis[key.1]
                    )));
                }
            }
            structure.insert(key, v);
        }
        structure.retain(|_, v| !v.is_zero());
        let form = match file.form {
            FormJson::Killing => FormSpec::Killing,
            FormJson::KillingScaled { scale } => FormSpec::KillingScaled(parse_rational(&scale)?),
            FormJson::DualCoxeter => FormSpec::DualCoxeter,
            FormJson::Matrix { entries } => FormSpec::Matrix(
                entries
                    .into_iter()
                    .map(|(i, j, s)| Ok((i, j, parse_rational(&s)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        LieAlgebra::from_structure(file.name, field, file.basis, structure, form)
    }

    /// Same structure constants and form reduced into another field.
    pub fn reduce_into(&self, target: Field) -> Result<LieAlgebra> {
        let structure = self
            .structure
            .iter()
            .map(|(k, v)| {
                let pairs = v
                    .0
                    .iter()
                    .map(|(i, s)| Ok((*i, s.reduce_into(target)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((*k, SVec::from_pairs(pairs)))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        LieAlgebra::from_structure(self.name.clone(), target, self.labels.clone(), structure, self.form_spec.clone())
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}, over {})", self.name, self.dim(), self.field)
    }
}

fn trace_of_product(a: &Matrix, b: &Matrix, field: Field) -> Scalar {
    let mut acc = field.zero();
    for k in 0..a.rows() {
        for (l, x) in &a.row(k).0 {
            if let Some(y) = b.row(*l).get(k) {
                acc += &(x * y);
            }
        }
    }
    acc
}

/// `[i, j, [[k, c], ...]]`: `[e_i, e_j] = Σ c e_k`, coefficients as strings.
pub type BracketEntry = (usize, usize, Vec<(usize, String)>);

/// On-disk algebra description.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketEntry>,
    pub form: FormJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FormJson {
    Killing,
    KillingScaled { scale: String },
    DualCoxeter,
    Matrix { entries: Vec<(usize, usize, String)> },
}

// -- matrix realizations ------------------------------------------------------

type IMat = Vec<Vec<i64>>;
type Coords = Box<dyn Fn(&IMat) -> Vec<BigRational>>;

fn unit(n: usize, i: usize, j: usize) -> IMat {
    let mut m = vec![vec![0; n]; n];
    m[i][j] = 1;
    m
}

fn commutator(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let mut c = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0;
            for k in 0..n {
                s += a[i][k] * b[k][j] - b[i][k] * a[k][j];
            }
            c[i][j] = s;
        }
    }
    c
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn classical_basis(b: Builtin) -> (Vec<String>, Vec<IMat>, Coords) {
    match b.family {
        Family::Sl => sl_basis(b.size),
        Family::So | Family::Sp => form_preserving_basis(b),
    }
}

/// `E_ij (i<j)`, then `H_i = E_ii - E_{i+1,i+1}`, then `E_ij (i>j)`.
fn sl_basis(n: usize) -> (Vec<String>, Vec<IMat>, Coords) {
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    let name = |p: &str, i: usize, j: usize| {
        if n < 10 {
            format!("{p}{}{}", i + 1, j + 1)
        } else {
            format!("{p}{}_{}", i + 1, j + 1)
        }
    };
    let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let lower: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    for &(i, j) in &upper {
        labels.push(name("E", i, j));
        basis.push(unit(n, i, j));
    }
    for i in 0..n - 1 {
        labels.push(format!("H{}", i + 1));
        let mut h = unit(n, i, i);
        h[i + 1][i + 1] = -1;
        basis.push(h);
    }
    for &(i, j) in &lower {
        labels.push(name("E", i, j));
        basis.push(unit(n, i, j));
    }
    if n == 2 {
        labels = vec!["e".into(), "h".into(), "f".into()];
    }
    let coords: Coords = Box::new(move |m: &IMat| {
        let mut v = Vec::new();
        for &(i, j) in &upper {
            v.push(int(m[i][j]));
        }
        // Σ c_k H_k has diagonal (c_1, c_2 - c_1, ...), so c_k is a prefix sum.
        let mut acc = 0;
        for (k, row) in m.iter().enumerate().take(n - 1) {
            acc += row[k];
            v.push(int(acc));
        }
        for &(i, j) in &lower {
            v.push(int(m[i][j]));
        }
        v
    });
    (labels, basis, coords)
}

/// `{X : XᵀJ + JX = 0}` for an antidiagonal `J`, symmetric for `so` and
/// alternating for `sp`. The basis is the RREF basis of the solution space,
/// which pairs each entry with its mirror, so basis vectors are weight vectors
/// for the diagonal torus.
fn form_preserving_basis(b: Builtin) -> (Vec<String>, Vec<IMat>, Coords) {
    let n = b.size;
    let j_of = |i: usize| -> i64 {
        match b.family {
            Family::Sp if i >= n / 2 => -1,
            _ => 1,
        }
    };
    // J[i][n-1-i] = j_of(i).
    let q = Field::Rationals;
    let mut trips = Vec::new();
    for a in 0..n {
        for bb in 0..n {
            // (XᵀJ)_{a,bb} = X_{c,a} J_{c,bb} with c = n-1-bb.
            let c = n - 1 - bb;
            trips.push((a * n + bb, c * n + a, q.int(j_of(c))));
            // (JX)_{a,bb} = J_{a,n-1-a} X_{n-1-a,bb}.
            trips.push((a * n + bb, (n - 1 - a) * n + bb, q.int(j_of(a))));
        }
    }
    let m = Matrix::from_triplets(n * n, n * n, q, trips).expect("in range");
    let (_, kernel) = linalg::rank_and_kernel(&m);
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for (v, &p) in kernel.basis().iter().zip(kernel.pivots()) {
        let mut x = vec![vec![0i64; n]; n];
        for (idx, s) in &v.0 {
            let r = s.as_rational().expect("rational");
            assert!(r.is_integer(), "integral kernel basis");
            x[idx / n][idx % n] = i64::try_from(r.numer()).expect("small");
        }
        labels.push(format!("X{}_{}", p / n + 1, p % n + 1));
        basis.push(x);
    }
    let coords: Coords = Box::new(move |m: &IMat| {
        let flat: Vec<Scalar> = m.iter().flatten().map(|&x| q.int(x)).collect();
        let c = kernel
            .coordinates(&SVec::from_dense(&flat))
            .expect("commutator stays in the algebra");
        c.into_iter().map(|s| s.as_rational().expect("rational").clone()).collect()
    });
    (labels, basis, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn sl2() -> LieAlgebra {
        LieAlgebra::builtin("sl2".parse().unwrap(), Field::Rationals, FormSpec::DualCoxeter).unwrap()
    }

    fn e(alg: &LieAlgebra, l: &str) -> GVector {
        GVector::basis(alg.dim(), alg.label_index(l).unwrap(), alg.field())
    }

    #[test]
    fn sl2_brackets() {
        let g = sl2();
        let q = Field::Rationals;
        let two_e = GVector(vec![q.int(2), q.int(0), q.int(0)]);
        assert_eq!(g.bracket(&e(&g, "h"), &e(&g, "e")).unwrap(), two_e);
        assert!(g.bracket(&e(&g, "e"), &e(&g, "e")).unwrap().is_zero());
        assert_eq!(g.bracket(&e(&g, "e"), &e(&g, "f")).unwrap(), e(&g, "h"));
        assert!(g.bracket(&e(&g, "e"), &GVector(vec![q.zero()])).is_err());
    }

    #[test]
    fn sl2_ad_and_killing() {
        let g = sl2();
        let q = Field::Rationals;
        let adh = g.ad_matrix(&e(&g, "h")).unwrap();
        assert_eq!(adh, Matrix::from_ints(q, &[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]));
        assert!(g.ad_matrix(&GVector::zero(3, q)).unwrap().is_zero());
        let ade = g.ad_matrix(&e(&g, "e")).unwrap();
        assert_eq!(ade.column(2), e(&g, "h").0);
        let k = g.killing_form();
        assert_eq!(k.get(1, 1), q.int(8));
        assert_eq!(k.get(0, 2), q.int(4));
        assert!(k.get(0, 0).is_zero());
        // κ = K/4.
        assert_eq!(g.kappa(1, 1), &q.int(2));
        assert_eq!(g.kappa(0, 2), &q.int(1));
    }

    #[test]
    fn ad_h_is_skew_for_kappa() {
        let g = sl2();
        let adh = g.ad_matrix(&e(&g, "h")).unwrap();
        assert!(linalg::is_skew_symmetric_map(&adh, g.form()).unwrap());
    }

    #[test]
    fn validate_examples() {
        let r = sl2().validate();
        assert!(r.admissible && r.center_dim == 0, "{r:?}");

        let ab = LieAlgebra::abelian(1, Field::Rationals, &[BigRational::from_integer(1.into())]).unwrap();
        let r = ab.validate();
        assert!(r.invariance_ok && r.nondegenerate_ok);
        assert_eq!(r.center_dim, 1);
        assert!(!r.admissible);

        let zero = FormSpec::KillingScaled(BigRational::zero());
        let g = LieAlgebra::builtin_unchecked("sl2".parse().unwrap(), Field::Rationals, zero.clone()).unwrap();
        assert!(!g.validate().nondegenerate_ok);
        assert!(LieAlgebra::builtin("sl2".parse().unwrap(), Field::Rationals, zero).is_err());
    }

    #[test]
    fn builtins_validate() {
        for name in ["sl3", "so5", "sp4", "so4", "sl4"] {
            let g = LieAlgebra::builtin(name.parse().unwrap(), Field::Rationals, FormSpec::DualCoxeter).unwrap();
            assert!(g.validate().admissible, "{name}");
        }
        let g = LieAlgebra::builtin("sl3".parse().unwrap(), Field::Rationals, FormSpec::DualCoxeter).unwrap();
        assert_eq!(g.dim(), 8);
        assert_eq!(LieAlgebra::builtin("so5".parse().unwrap(), Field::Rationals, FormSpec::Killing).unwrap().dim(), 10);
        assert_eq!(LieAlgebra::builtin("sp4".parse().unwrap(), Field::Rationals, FormSpec::Killing).unwrap().dim(), 10);
    }

    #[test]
    fn sl2_mod_5() {
        let f5 = Field::prime(5).unwrap();
        let g = LieAlgebra::builtin("sl2".parse().unwrap(), f5, FormSpec::DualCoxeter).unwrap();
        assert_eq!(g.kappa(1, 1), &f5.int(2));
        assert!(g.validate().admissible);
    }

    #[test]
    fn sl3_mod_3_has_center() {
        let f3 = Field::prime(3).unwrap();
        assert!(LieAlgebra::builtin("sl3".parse().unwrap(), f3, FormSpec::DualCoxeter).is_err());
        let g = LieAlgebra::builtin_unchecked("sl3".parse().unwrap(), f3, FormSpec::Killing).unwrap();
        let r = g.validate();
        assert!(r.center_dim >= 1);
        assert!(!r.admissible);
    }

    #[test]
    fn casimir_sl2() {
        let g = sl2();
        let c = g.casimir_endomorphism().unwrap();
        assert_eq!(c.scalar, Some(Field::Rationals.int(4)));
        assert_eq!(c.h(), Some(Field::Rationals.int(2)));
        let ab = LieAlgebra::abelian(1, Field::Rationals, &[BigRational::from_integer(1.into())]).unwrap();
        assert_eq!(ab.casimir_endomorphism().unwrap().scalar, Some(Field::Rationals.int(0)));
    }

    #[test]
    fn json_round_trip() {
        let g = sl2();
        let text = g.to_json().unwrap();
        let back = LieAlgebra::from_json(&text, Field::Rationals).unwrap();
        assert_eq!(back.structure(), g.structure());
        assert_eq!(back.form(), g.form());
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn json_rejects_inconsistent_antisymmetry() {
        let text = r#"{"name":"bad","dim":3,"basis":["e","h","f"],
            "brackets":[[0,1,[[0,"-2"]]],[1,0,[[0,"-2"]]],[0,2,[[1,"1"]]],[1,2,[[2,"-2"]]]],
            "form":{"type":"killing"}}"#;
        assert!(matches!(LieAlgebra::from_json(text, Field::Rationals), Err(Error::InvalidAlgebra(_))));
        let jacobi_broken = r#"{"name":"bad","dim":3,"basis":["e","h","f"],
            "brackets":[[0,1,[[0,"-2"]]],[0,2,[[1,"1"]]],[1,2,[[2,"-3"]]]],
            "form":{"type":"killing"}}"#;
        let err = LieAlgebra::from_json(jacobi_broken, Field::Rationals).unwrap_err();
        assert!(err.to_string().contains("Jacobi"), "{err}");
    }
}
