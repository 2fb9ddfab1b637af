//! Textual states: `c * a(-m) b(-n) ... |0>` terms joined by ` + `.
//!
//! The parser is more permissive than the printer: coefficients and `*` are
//! optional, terms may be separated by `-`, and modes may be arbitrary
//! integers. Modes are applied right to left.

use crate::error::{Error, Result};

use super::engine::AffineVertexAlgebra;
use super::state::{Monomial, State};

pub fn format_state(va: &AffineVertexAlgebra, s: &State) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let labels = va.lie().labels();
    let terms: Vec<String> = s
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut t = format!("{c} *");
            for f in m.factors() {
                t.push_str(&format!(" {}(-{})", labels[f.i as usize], f.m));
            }
            t.push_str(" |0>");
            t
        })
        .collect();
    terms.join(" + ")
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {}", self.pos))
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.pos < self.s.len() && f(self.s[self.pos]) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii slice")
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        self.skip_ws();
        let digits = self.take_while(|b| b.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.err("expected an integer"));
        }
        let v: i64 = digits.parse().map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }
}

/// Parses a state, resolving labels against the algebra's basis.
pub fn parse_state(va: &AffineVertexAlgebra, text: &str) -> Result<State> {
    let field = va.field();
    let g = va.lie();
    let mut lx = Lexer {
        s: text.as_bytes(),
        pos: 0,
    };
    if lx.peek() == Some(b'0') {
        let save = lx.pos;
        lx.pos += 1;
        if lx.peek().is_none() {
            return Ok(State::zero());
        }
        lx.pos = save;
    }
    let mut total = State::zero();
    let mut first = true;
    loop {
        lx.skip_ws();
        if lx.peek().is_none() {
            if first {
                return Err(lx.err("empty state"));
            }
            break;
        }
        let mut negative = false;
        if lx.eat(b'+') {
        } else if lx.eat(b'-') {
            negative = true;
        } else if !first {
            return Err(lx.err("expected '+' or '-' between terms"));
        }
        first = false;
        // Optional leading sign of the coefficient itself, as in `+ -2 * ...`.
        if lx.eat(b'-') {
            negative = !negative;
        }
        lx.skip_ws();
        let mut coeff = field.one();
        if lx.peek().is_some_and(|b| b.is_ascii_digit()) {
            let lit = lx.take_while(|b| b.is_ascii_digit() || b == b'/');
            coeff = field.parse(lit)?;
            lx.eat(b'*');
        }
        if negative {
            coeff = -coeff;
        }
        let mut modes = Vec::new();
        loop {
            match lx.peek() {
                Some(b'|') => break,
                Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                    let label = lx.take_while(|b| b.is_ascii_alphanumeric() || b == b'_');
                    let idx = g
                        .label_index(label)
                        .ok_or_else(|| Error::Parse(format!("unknown basis label '{label}'")))?;
                    if !lx.eat(b'(') {
                        return Err(lx.err("expected '(' after a label"));
                    }
                    let n = lx.integer()?;
                    if !lx.eat(b')') {
                        return Err(lx.err("expected ')'"));
                    }
                    modes.push((idx, n));
                }
                _ => return Err(lx.err("expected a mode or |0>")),
            }
        }
        lx.skip_ws();
        if !text[lx.pos..].starts_with("|0>") {
            return Err(lx.err("expected |0>"));
        }
        lx.pos += 3;
        let mut term = State::monomial(Monomial::vacuum(), coeff);
        for (i, n) in modes.into_iter().rev() {
            term = va.apply_basis_mode(i, n, &term)?;
        }
        total = total.add(&term);
    }
    Ok(total)
}
