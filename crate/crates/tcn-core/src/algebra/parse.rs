//! Text grammar for ring elements:
//!
//! ```text
//! element := ['-'] term (('+' | '-') term)* | '0'
//! term    := [integer '*'] factor ('*' factor)* | integer
//! factor  := name ['^' positive-integer]
//! name    := [A-Za-z][A-Za-z0-9_]* ['<' digits '>']
//! ```
//!
//! Whitespace is insignificant. The optional `<i>` suffix is how tagged
//! tensor-factor copies print; it is accepted whenever such a generator is
//! registered. A term's factors multiply in the written order, so Koszul
//! signs apply: `b*a` parses to `-a*b` when both generators are odd.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{normalize_word, AlgebraError, Ambient, Element, Presentation};

/// Validity test for generator names, matching the grammar's `name` rule.
pub fn is_valid_name(s: &str) -> bool {
    let bytes = s.as_bytes();
    let mut i = 0;
    if i >= bytes.len() || !bytes[i].is_ascii_alphabetic() {
        return false;
    }
    i += 1;
    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'<' {
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == start || i >= bytes.len() || bytes[i] != b'>' {
            return false;
        }
        i += 1;
    }
    i == bytes.len()
}

pub fn parse_element(text: &str, presentation: &Presentation) -> Result<Element, AlgebraError> {
    parse_element_in(text, presentation.ambient())
}

pub fn parse_element_in(text: &str, ambient: &Arc<Ambient>) -> Result<Element, AlgebraError> {
    Parser { src: text.as_bytes(), pos: 0, ambient }.parse()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ambient: &'a Arc<Ambient>,
}

impl<'a> Parser<'a> {
    fn parse(mut self) -> Result<Element, AlgebraError> {
        let mut terms: Vec<(BigInt, super::Monomial)> = Vec::new();
        self.skip_ws();
        let mut negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        loop {
            let (coeff, monomial) = self.term(negate)?;
            terms.push((coeff, monomial));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(c) => {
                    return Err(self.syntax(format!(
                        "expected '+', '-' or end of input, found {:?}",
                        c as char
                    )))
                }
            }
        }
        Ok(Element::from_terms(self.ambient, terms))
    }

    fn term(&mut self, negate: bool) -> Result<(BigInt, super::Monomial), AlgebraError> {
        self.skip_ws();
        let mut coeff = BigInt::one();
        let mut word: Vec<usize> = Vec::new();
        let mut has_factor = false;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff = self.integer()?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.factors(&mut word)?;
                    has_factor = true;
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.factors(&mut word)?;
                has_factor = true;
            }
            Some(c) => {
                return Err(self.syntax(format!(
                    "expected a term, found {:?}",
                    c as char
                )))
            }
            None => return Err(self.syntax("expected a term, found end of input".into())),
        }
        if negate {
            coeff = -coeff;
        }
        if !has_factor && coeff.is_zero() {
            // The literal `0`.
            return Ok((BigInt::zero(), super::Monomial::unit(self.ambient.generators().len())));
        }
        normalize_word(self.ambient, &word, coeff)
    }

    fn factors(&mut self, word: &mut Vec<usize>) -> Result<(), AlgebraError> {
        loop {
            self.skip_ws();
            let start = self.pos;
            let name = self.name()?;
            let idx = self
                .ambient
                .generator_index(&name)
                .ok_or(AlgebraError::UnknownGenerator(name.clone()))?;
            let mut exp = 1u32;
            self.skip_ws();
            if self.peek() == Some(b'^') {
                self.pos += 1;
                self.skip_ws();
                let e = self.integer()?;
                exp = u32::try_from(&e).map_err(|_| {
                    self.syntax_at(start, format!("exponent {e} out of range"))
                })?;
                if exp == 0 {
                    return Err(self.syntax_at(start, "exponent must be positive".into()));
                }
            }
            if exp > 1
                && !self.ambient.coefficients().char_two()
                && self.ambient.generators()[idx].is_odd()
            {
                return Err(AlgebraError::OddExponent { name, exp });
            }
            word.extend(std::iter::repeat(idx).take(exp as usize));
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok(());
            }
        }
    }

    fn name(&mut self) -> Result<String, AlgebraError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            _ => return Err(self.syntax("expected a generator name".into())),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.peek() == Some(b'<') {
            let mark = self.pos;
            self.pos += 1;
            let digits_start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos > digits_start && self.peek() == Some(b'>') {
                self.pos += 1;
            } else {
                // Not a tag; leave it for the caller to reject.
                self.pos = mark;
            }
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected an integer".into()));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse::<BigInt>().expect("digits parse as BigInt"))
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn syntax(&self, msg: String) -> AlgebraError {
        AlgebraError::Syntax { pos: self.pos, msg }
    }

    fn syntax_at(&self, pos: usize, msg: String) -> AlgebraError {
        AlgebraError::Syntax { pos, msg }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Coefficients, Generator};

    fn conf_ambient() -> Arc<Ambient> {
        // Degree-1 generators a12, a13, a23 over Z, exterior convention.
        Ambient::new(
            Coefficients::Integers,
            vec![
                Generator::new("a12", 1),
                Generator::new("a13", 1),
                Generator::new("a23", 1),
            ],
            2,
        )
        .unwrap()
    }

    #[test]
    fn parses_the_three_term_relation() {
        let amb = conf_ambient();
        let e = parse_element_in("a12*a23 - a12*a13 - a13*a23", &amb).unwrap();
        assert_eq!(e.terms().len(), 3);
        assert_eq!(e.to_string(), "-a13*a23 + a12*a23 - a12*a13");
        // Round trip.
        assert_eq!(parse_element_in(&e.to_string(), &amb).unwrap(), e);
    }

    #[test]
    fn parses_powers_in_characteristic_two() {
        let amb = Ambient::new(
            Coefficients::mod_prime(2).unwrap(),
            vec![Generator::new("g1", 1), Generator::new("g2", 1)],
            2,
        )
        .unwrap();
        let e = parse_element_in("g1^3", &amb).unwrap();
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.terms()[0].1.exponents(), &[3, 0]);
    }

    #[test]
    fn zero_literal() {
        let amb = conf_ambient();
        assert!(parse_element_in("0", &amb).unwrap().is_zero());
    }

    #[test]
    fn koszul_sign_applies_to_written_order() {
        let amb = conf_ambient();
        let e = parse_element_in("a13*a12", &amb).unwrap();
        assert_eq!(e.to_string(), "-a12*a13");
    }

    #[test]
    fn whitespace_is_insignificant() {
        let amb = conf_ambient();
        let a = parse_element_in("2*a12*a23-a13*a23", &amb).unwrap();
        let b = parse_element_in("  2 * a12 * a23  -  a13 * a23 ", &amb).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_generator_is_reported() {
        let amb = conf_ambient();
        assert!(matches!(
            parse_element_in("a12*zz", &amb),
            Err(AlgebraError::UnknownGenerator(name)) if name == "zz"
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let amb = conf_ambient();
        match parse_element_in("a12 + + a13", &amb) {
            Err(AlgebraError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn odd_exponent_outside_char_two_is_an_error() {
        let amb = conf_ambient();
        assert!(matches!(
            parse_element_in("a12^2", &amb),
            Err(AlgebraError::OddExponent { exp: 2, .. })
        ));
        // A repeated factor is the zero product, not an error.
        assert!(parse_element_in("a12*a12", &amb).unwrap().is_zero());
    }

    #[test]
    fn name_validity_matches_grammar() {
        assert!(is_valid_name("a12"));
        assert!(is_valid_name("alpha_3"));
        assert!(is_valid_name("a<2>"));
        assert!(!is_valid_name("2a"));
        assert!(!is_valid_name("a<>"));
        assert!(!is_valid_name("a<2"));
        assert!(!is_valid_name(""));
        assert!(!is_valid_name("a-b"));
    }
}
