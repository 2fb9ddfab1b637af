//! PBW monomials and finite linear combinations of them.

use std::collections::BTreeMap;

use crate::field::{Field, Scalar};

/// One creation mode `e_i(-m)`, `m ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub m: u32,
    pub i: u32,
}

/// `e_{i_1}(-m_1) ⋯ e_{i_r}(-m_r) 𝟙` with `(m_1, i_1) ≥ (m_2, i_2) ≥ ⋯`
/// lexicographically. The empty monomial is the vacuum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<Factor>);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(Vec::new())
    }

    /// Sorts the factors into normal order. Only valid where the factors are
    /// known to commute, e.g. when reading off PBW coordinates.
    pub fn from_factors(mut f: Vec<Factor>) -> Self {
        f.sort_by(|a, b| b.cmp(a));
        Monomial(f)
    }

    pub fn single(m: u32, i: u32) -> Self {
        Monomial(vec![Factor { m, i }])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|f| f.m).sum()
    }

    pub fn leading(&self) -> Option<Factor> {
        self.0.first().copied()
    }

    /// Everything after the leading factor.
    pub fn tail(&self) -> Monomial {
        Monomial(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    /// `f · self`, assuming `f` is at least the leading factor.
    pub(crate) fn prepend(&self, f: Factor) -> Monomial {
        debug_assert!(self.0.first().is_none_or(|g| f >= *g));
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(f);
        v.extend_from_slice(&self.0);
        Monomial(v)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1]) && self.0.iter().all(|f| f.m >= 1)
    }
}

/// A finite linear combination of PBW monomials with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct State {
    terms: BTreeMap<Monomial, Scalar>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum(field: Field) -> Self {
        State::monomial(Monomial::vacuum(), field.one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut s = State::zero();
        s.add_term(m, c);
        s
    }

    /// `e_i(-1)𝟙`.
    pub fn generator(i: usize, field: Field) -> Self {
        State::monomial(Monomial::single(1, i as u32), field.one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                *old += &c;
                if old.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &State, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn add(&self, other: &State) -> State {
        let mut s = self.clone();
        for (m, x) in &other.terms {
            s.add_term(m.clone(), x.clone());
        }
        s
    }

    pub fn sub(&self, other: &State) -> State {
        let mut s = self.clone();
        for (m, x) in &other.terms {
            s.add_term(m.clone(), -x);
        }
        s
    }

    pub fn scale(&self, c: &Scalar) -> State {
        let mut s = State::zero();
        s.add_scaled(self, c);
        s
    }

    /// The degree-`n` component.
    pub fn component(&self, n: u32) -> State {
        State {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The common degree of all terms; `None` for zero or mixed states.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Coefficient of the vacuum.
    pub fn vacuum_coeff(&self, field: Field) -> Scalar {
        self.terms
            .get(&Monomial::vacuum())
            .cloned()
            .unwrap_or_else(|| field.zero())
    }
}

impl FromIterator<(Monomial, Scalar)> for State {
    fn from_iter<T: IntoIterator<Item = (Monomial, Scalar)>>(iter: T) -> Self {
        let mut s = State::zero();
        for (m, c) in iter {
            s.add_term(m, c);
        }
        s
    }
}
