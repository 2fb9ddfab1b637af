//! Mode action and `n`-th products on the universal affine vertex algebra
//! `V(g, κ)` (level one), realised on PBW monomials.

use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{binomial, Field, Scalar};
use crate::lie::LieAlgebra;
use crate::linalg::SVec;

use super::state::{Factor, Monomial, State};

pub struct AffineVertexAlgebra {
    g: Arc<LieAlgebra>,
    modes: DashMap<(u32, i64, Monomial), State>,
    products: DashMap<(Monomial, i64, Monomial), State>,
}

impl AffineVertexAlgebra {
    pub fn new(g: Arc<LieAlgebra>) -> Self {
        AffineVertexAlgebra {
            g,
            modes: DashMap::new(),
            products: DashMap::new(),
        }
    }

    pub fn lie(&self) -> &Arc<LieAlgebra> {
        &self.g
    }

    pub fn field(&self) -> Field {
        self.g.field()
    }

    pub fn vacuum(&self) -> State {
        State::vacuum(self.field())
    }

    /// `e_i(-1)𝟙`.
    pub fn generator(&self, i: usize) -> State {
        State::generator(i, self.field())
    }

    /// `Σ v_i e_i(-1)𝟙`.
    pub fn from_lie(&self, v: &SVec) -> State {
        v.0.iter()
            .map(|(i, c)| (Monomial::single(1, *i as u32), c.clone()))
            .collect()
    }

    /// Reads a degree-one state back as an element of `g`.
    pub fn to_lie(&self, s: &State) -> Result<SVec> {
        let mut pairs = Vec::new();
        for (m, c) in s.terms() {
            match m.factors() {
                [Factor { m: 1, i }] => pairs.push((*i as usize, c.clone())),
                _ => {
                    return Err(Error::Dimension(
                        "state has components outside degree one".into(),
                    ))
                }
            }
        }
        Ok(SVec::from_pairs(pairs))
    }

    pub fn clear_caches(&self) {
        self.modes.clear();
        self.products.clear();
    }

    pub fn cache_sizes(&self) -> (usize, usize) {
        (self.modes.len(), self.products.len())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.g.dim() {
            return Err(Error::Dimension(format!(
                "basis index {i} in a {}-dimensional algebra",
                self.g.dim()
            )));
        }
        Ok(())
    }

    fn check_state(&self, v: &State) -> Result<()> {
        for m in v.terms().keys() {
            if !m.is_normal_ordered() {
                return Err(Error::Parse("monomial is not normal ordered".into()));
            }
            for f in m.factors() {
                self.check_index(f.i as usize)?;
            }
        }
        Ok(())
    }

    /// `e_i(n) v`.
    pub fn apply_basis_mode(&self, i: usize, n: i64, v: &State) -> Result<State> {
        self.check_index(i)?;
        self.check_state(v)?;
        Ok(self.mode_state(i as u32, n, v))
    }

    /// `a(n) v` for `a ∈ g`.
    pub fn apply_mode(&self, a: &SVec, n: i64, v: &State) -> Result<State> {
        for (i, _) in &a.0 {
            self.check_index(*i)?;
        }
        self.check_state(v)?;
        Ok(self.mode_lie(a, n, v))
    }

    pub(crate) fn mode_lie(&self, a: &SVec, n: i64, v: &State) -> State {
        let mut out = State::zero();
        for (i, c) in &a.0 {
            out.add_scaled(&self.mode_state(*i as u32, n, v), c);
        }
        out
    }

    pub(crate) fn mode_state(&self, i: u32, n: i64, v: &State) -> State {
        let mut out = State::zero();
        for (m, c) in v.terms() {
            out.add_scaled(&self.mode_mono(i, n, m), c);
        }
        out
    }

    fn mode_mono(&self, i: u32, n: i64, mono: &Monomial) -> State {
        let one = self.field().one();
        let Some(lead) = mono.leading() else {
            return if n >= 0 {
                State::zero()
            } else {
                State::monomial(Monomial::single((-n) as u32, i), one)
            };
        };
        if n < 0 {
            let f = Factor { m: (-n) as u32, i };
            if f >= lead {
                return State::monomial(mono.prepend(f), one);
            }
        }
        let key = (i, n, mono.clone());
        if let Some(hit) = self.modes.get(&key) {
            return hit.clone();
        }
        let rest = mono.tail();
        let m1 = lead.m as i64;
        // e_i(n) b(-m1) rest = b(-m1) e_i(n) rest + [e_i, b](n - m1) rest + n δ_{n,m1} κ(e_i, b) rest
        let inner = self.mode_mono(i, n, &rest);
        let mut out = self.mode_state(lead.i, -m1, &inner);
        for (k, c) in &self.g.bracket_basis(i as usize, lead.i as usize).0 {
            out.add_scaled(&self.mode_mono(*k as u32, n - m1, &rest), c);
        }
        if n == m1 {
            let k = self.g.kappa(i as usize, lead.i as usize);
            if !k.is_zero() {
                let c = &self.field().int(n) * k;
                out.add_term(rest, c);
            }
        }
        self.modes.insert(key, out.clone());
        out
    }

    /// `u_n v`.
    pub fn nth_product(&self, u: &State, n: i64, v: &State) -> Result<State> {
        self.check_state(u)?;
        self.check_state(v)?;
        Ok(self.product_states(u, n, v))
    }

    pub(crate) fn product_states(&self, u: &State, n: i64, v: &State) -> State {
        let mut out = State::zero();
        for (mu, cu) in u.terms() {
            for (mv, cv) in v.terms() {
                out.add_scaled(&self.product_mono(mu, n, mv), &(cu * cv));
            }
        }
        out
    }

    fn product_mono(&self, u: &Monomial, n: i64, v: &Monomial) -> State {
        let one = self.field().one();
        let Some(lead) = u.leading() else {
            return if n == -1 {
                State::monomial(v.clone(), one)
            } else {
                State::zero()
            };
        };
        let du = u.degree() as i64;
        let dv = v.degree() as i64;
        if n > du + dv - 1 {
            return State::zero();
        }
        if u.factors().len() == 1 && lead.m == 1 {
            return self.mode_mono(lead.i, n, v);
        }
        let key = (u.clone(), n, v.clone());
        if let Some(hit) = self.products.get(&key) {
            return hit.clone();
        }
        // u = a_{-m} w with a = e_j(-1)𝟙; iterate formula with (-1)^i C(-m, i) = C(m+i-1, i).
        let w = u.tail();
        let m = lead.m as i64;
        let j = lead.i;
        let dw = w.degree() as i64;
        let mut out = State::zero();
        let top = dw + dv - 1 - n;
        for i in 0..=top {
            let c = self.field().bigint(&binomial(m + i - 1, i as u32));
            let inner = self.product_mono(&w, n + i, v);
            if inner.is_zero() {
                continue;
            }
            out.add_scaled(&self.mode_state(j, -m - i, &inner), &c);
        }
        let ws = State::monomial(w, one);
        let sgn = if m % 2 == 0 { -1 } else { 1 };
        for i in 0..=dv {
            let av = self.mode_mono(j, i, v);
            if av.is_zero() {
                continue;
            }
            let c = self
                .field()
                .bigint(&(binomial(m + i - 1, i as u32) * BigInt::from(sgn)));
            out.add_scaled(&self.product_states(&ws, n - m - i, &av), &c);
        }
        self.products.insert(key, out.clone());
        out
    }

    /// `D^{(m)} v = v_{-m-1} 𝟙`.
    pub fn d_operator(&self, m: i64, v: &State) -> Result<State> {
        if m < 0 {
            return Err(Error::Dimension(format!(
                "divided power D^({m}) needs a nonnegative order"
            )));
        }
        self.nth_product(v, -m - 1, &self.vacuum())
    }

    /// `u ×₀ v = u_1 v - ½ D(u_2 v)`; only over the rationals.
    pub fn times0_product(&self, u: &State, v: &State) -> Result<State> {
        if self.field() != Field::Rationals {
            return Err(Error::Unsupported(
                "the ×₀ product is only implemented in characteristic zero".into(),
            ));
        }
        let half = self.field().ratio(1, 2)?;
        let first = self.nth_product(u, 1, v)?;
        let second = self.d_operator(1, &self.nth_product(u, 2, v)?)?;
        Ok(first.sub(&second.scale(&half)))
    }

    /// `½(u_1 v + v_1 u)`.
    pub fn jordan_product(&self, u: &State, v: &State) -> Result<State> {
        let half = self.field().ratio(1, 2)?;
        let s = self.nth_product(u, 1, v)?.add(&self.nth_product(v, 1, u)?);
        Ok(s.scale(&half))
    }

    /// Vacuum coefficient of `u_3 v`.
    pub fn form3(&self, u: &State, v: &State) -> Result<Scalar> {
        Ok(self.nth_product(u, 3, v)?.vacuum_coeff(self.field()))
    }
}

impl std::fmt::Debug for AffineVertexAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AffineVertexAlgebra")
            .field("lie", &self.g.name())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{Builtin, FormSpec};
    use crate::vertex::{format_state, parse_state};

    fn sl2() -> AffineVertexAlgebra {
        let b: Builtin = "sl2".parse().unwrap();
        let g = LieAlgebra::builtin(b, Field::Rationals, FormSpec::DualCoxeter).unwrap();
        AffineVertexAlgebra::new(Arc::new(g))
    }

    fn st(va: &AffineVertexAlgebra, s: &str) -> State {
        parse_state(va, s).unwrap()
    }

    #[test]
    fn mode_examples() {
        let va = sl2();
        let (e, h, f) = (0, 1, 2);
        let fm1 = va.generator(f);
        assert_eq!(va.apply_basis_mode(e, 1, &fm1).unwrap(), va.vacuum());
        let em1 = va.generator(e);
        let two = va.field().int(2);
        assert_eq!(va.apply_basis_mode(h, 0, &em1).unwrap(), em1.scale(&two));
        assert!(va.apply_basis_mode(e, 0, &va.vacuum()).unwrap().is_zero());
    }

    #[test]
    fn product_examples() {
        let va = sl2();
        let h2 = st(&va, "h(-2)|0>");
        let em1 = st(&va, "e(-1)|0>");
        let x = va.nth_product(&h2, 1, &em1).unwrap();
        assert_eq!(x, em1.scale(&va.field().int(-2)));
        let hh = st(&va, "h(-1) h(-1)|0>");
        let y = va.nth_product(&hh, 3, &hh).unwrap();
        assert_eq!(y, va.vacuum().scale(&va.field().int(8)));
    }

    #[test]
    fn translation_examples() {
        let va = sl2();
        let em1 = st(&va, "e(-1)|0>");
        assert_eq!(va.d_operator(1, &em1).unwrap(), st(&va, "e(-2)|0>"));
        assert!(va.d_operator(1, &va.vacuum()).unwrap().is_zero());
        assert!(va.d_operator(-1, &em1).is_err());
    }

    #[test]
    fn text_round_trip() {
        let va = sl2();
        let s = st(&va, "3/2 * e(-2) h(-1) |0> - f(-1) e(-1)|0> + 2 h(0) f(-3)|0>");
        let printed = format_state(&va, &s);
        assert_eq!(parse_state(&va, &printed).unwrap(), s);
        assert_eq!(format_state(&va, &State::zero()), "0");
        assert!(parse_state(&va, "e(-1)").is_err());
        assert!(parse_state(&va, "x(-1)|0>").is_err());
    }

    #[test]
    fn times0_is_char_zero_only() {
        let b: Builtin = "sl2".parse().unwrap();
        let g = LieAlgebra::builtin(b, Field::prime(7).unwrap(), FormSpec::DualCoxeter).unwrap();
        let va = AffineVertexAlgebra::new(Arc::new(g));
        let e = va.generator(0);
        assert!(matches!(va.times0_product(&e, &e), Err(Error::Unsupported(_))));
    }
}
