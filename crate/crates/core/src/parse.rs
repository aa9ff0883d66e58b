//! Polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ('+' | '-') factor | atom ('^' natural)?
//! atom   := integer ('/' integer)? | variable | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant. Columns in errors are 1-based.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Polynomial;
use crate::ring::Ring;

/// Coefficient field named in a ring header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

/// A parsed ring header such as `QQ[x,y,z]` or `GF(32003)[x,y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub field: FieldSpec,
    pub vars: Vec<String>,
}

pub fn parse_ring_header(text: &str) -> Result<RingSpec> {
    let t = text.trim();
    let err = |column: usize, message: &str| Error::Parse { column, message: message.to_string() };
    let open = t.find('[').ok_or_else(|| err(t.len() + 1, "expected `[`"))?;
    if !t.ends_with(']') {
        return Err(err(t.len(), "expected `]` at the end"));
    }
    let field_text = t[..open].trim();
    let field = if field_text == "QQ" {
        FieldSpec::Rationals
    } else if let Some(inner) = field_text.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
        let p: u64 = inner.trim().parse().map_err(|_| err(4, "expected a prime modulus"))?;
        crate::field::PrimeField::new(p)?;
        FieldSpec::Prime(p)
    } else {
        return Err(err(1, "field must be QQ or GF(p)"));
    };
    let mut vars = Vec::new();
    let mut col = open + 2;
    for v in t[open + 1..t.len() - 1].split(',') {
        let name = v.trim();
        if !crate::ring::is_identifier(name) {
            return Err(err(col, &format!("`{name}` is not a variable name")));
        }
        vars.push(name.to_string());
        col += v.chars().count() + 1;
    }
    Ok(RingSpec { field, vars })
}

/// Parses `text` into canonical form in `ring`.
pub fn parse_polynomial<F: Field>(ring: &Arc<Ring<F>>, text: &str) -> Result<Polynomial<F>> {
    let mut p = Parser { ring, chars: text.chars().collect(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let value = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(value)
}

/// Splits a comma-separated list, respecting parentheses, and parses each
/// entry. Error columns are relative to the whole list.
pub fn parse_polynomial_list<F: Field>(ring: &Arc<Ring<F>>, text: &str) -> Result<Vec<Polynomial<F>>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let chars: Vec<char> = text.chars().collect();
    let mut pieces = Vec::new();
    for (i, c) in chars.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                pieces.push((start, i));
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push((start, chars.len()));
    for (a, b) in pieces {
        let piece: String = chars[a..b].iter().collect();
        let parsed = parse_polynomial(ring, &piece).map_err(|e| shift_column(e, a))?;
        out.push(parsed);
    }
    Ok(out)
}

fn shift_column(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { column, message } => Error::Parse { column: column + by, message },
        Error::DivisionNotAllowed(c) => Error::DivisionNotAllowed(c + by),
        other => other,
    }
}

struct Parser<'a, F: Field> {
    ring: &'a Arc<Ring<F>>,
    chars: Vec<char>,
    pos: usize,
}

impl<F: Field> Parser<'_, F> {
    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse { column: self.pos + 1, message: message.to_string() }
    }

    fn expr(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Some('-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.try_mul(&rhs)?;
                }
                Some('/') => return Err(Error::DivisionNotAllowed(self.pos + 1)),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial<F>> {
        self.skip_ws();
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                let inner = self.factor()?;
                Ok(-&inner)
            }
            Some('+') => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                self.skip_ws();
                if self.peek() == Some('^') {
                    self.pos += 1;
                    self.skip_ws();
                    let start = self.pos;
                    let digits = self.digits();
                    if digits.is_empty() {
                        return Err(self.error("expected a natural exponent after `^`"));
                    }
                    let e: u32 = digits.parse().map_err(|_| Error::Parse {
                        column: start + 1,
                        message: "exponent too large".into(),
                    })?;
                    base.pow(e)
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<Polynomial<F>> {
        self.skip_ws();
        let field = self.ring.field();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                let save = self.pos;
                self.skip_ws();
                if self.peek() == Some('/') {
                    let slash = self.pos;
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.digits();
                    if den.is_empty() {
                        return Err(Error::DivisionNotAllowed(slash + 1));
                    }
                    let den: BigInt = den.parse().expect("digits");
                    let c = field.from_fraction(&num, &den).map_err(|_| Error::Parse {
                        column: slash + 1,
                        message: "denominator vanishes in the coefficient field".into(),
                    })?;
                    Ok(Polynomial::constant(self.ring, c))
                } else {
                    self.pos = save;
                    Ok(Polynomial::constant(self.ring, field.from_bigint(&num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.ring.var_index(&name) {
                    Some(i) => Ok(Polynomial::var(self.ring, i)),
                    None => Err(Error::UnknownVariable(name)),
                }
            }
            Some(c) => Err(self.error(&format!("unexpected `{c}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::monomial::MonomialOrder;

    fn qq() -> Arc<Ring<Rationals>> {
        Ring::new(&["x", "y", "z"], Rationals, MonomialOrder::DegRevLex).unwrap()
    }

    #[test]
    fn ring_headers() {
        let r = parse_ring_header("QQ[x, y,z]").unwrap();
        assert_eq!(r.field, FieldSpec::Rationals);
        assert_eq!(r.vars, vec!["x", "y", "z"]);
        assert_eq!(parse_ring_header(" GF(32003)[a,b] ").unwrap().field, FieldSpec::Prime(32003));
        assert!(parse_ring_header("GF(32004)[a]").is_err());
        assert!(parse_ring_header("RR[x]").is_err());
        assert!(matches!(parse_ring_header("QQ[x,2y]"), Err(Error::Parse { column: 6, .. })));
    }

    #[test]
    fn commutativity_cancels() {
        assert!(parse_polynomial(&qq(), "x*y - y*x").unwrap().is_zero());
    }

    #[test]
    fn binomial_expansion() {
        let r = qq();
        assert_eq!(
            parse_polynomial(&r, "(x+y)^2").unwrap(),
            parse_polynomial(&r, "x^2 + 2*x*y + y^2").unwrap()
        );
    }

    #[test]
    fn prime_field_reduction() {
        let r = Ring::new(&["x", "y"], PrimeField::new(5).unwrap(), MonomialOrder::DegRevLex).unwrap();
        let p = parse_polynomial(&r, "(x-y)*(x+y)").unwrap();
        assert_eq!(p, parse_polynomial(&r, "x^2 + 4*y^2").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let r = qq();
        assert_eq!(parse_polynomial(&r, "x + w"), Err(Error::UnknownVariable("w".into())));
        assert!(matches!(parse_polynomial(&r, "x/y"), Err(Error::DivisionNotAllowed(2))));
        match parse_polynomial(&r, "x^2 - ") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_polynomial(&r, "x^"), Err(Error::Parse { .. })));
    }

    #[test]
    fn fractions_and_whitespace() {
        let r = qq();
        let p = parse_polynomial(&r, " 3 / 4 * x ^ 2 ").unwrap();
        assert_eq!(p.to_string(), "3/4*x^2");
    }

    #[test]
    fn list_columns_are_global() {
        let r = qq();
        let v = parse_polynomial_list(&r, "x^2-y^2, (x+y)*z, y*z").unwrap();
        assert_eq!(v.len(), 3);
        match parse_polynomial_list(&r, "x, y +") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("unexpected {other:?}"),
        }
    }
}
