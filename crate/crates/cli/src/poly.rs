//! Text syntax for `f(x, y)`: a signed sum of `c*x^i*y^j` terms, where any
//! factor may be omitted or repeated (`x*x` is `x^2`), plus the aliases
//! `koblitz` and `frobdisc`. ASCII whitespace between tokens is ignored.

use frobsf::bipoly::MAX_DEGREE;
use frobsf::BiPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    /// Byte offset into the original text.
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn describe(&mut self) -> String {
        match self.peek() {
            Some(c) if c.is_ascii_graphic() => format!("found `{}`", c as char),
            Some(_) => "found a non-ASCII byte".into(),
            None => "found end of input".into(),
        }
    }

    fn integer(&mut self) -> Result<u128, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            let found = self.describe();
            return self.error(start, format!("expected an integer, {found}"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .expect("ASCII digits")
            .parse()
            .or_else(|_| self.error(start, "integer is too large"))
    }

    /// One `*`-separated product; returns `(deg_x, deg_y, coefficient)`.
    fn term(&mut self, sign: i128) -> Result<(u32, u32, i128), ParseError> {
        let start = self.pos;
        let (mut dx, mut dy, mut coeff) = (0u32, 0u32, sign);
        loop {
            let factor_start = {
                self.skip_ws();
                self.pos
            };
            match self.peek() {
                Some(c @ (b'x' | b'y')) => {
                    self.pos += 1;
                    let mut exp = 1u128;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        exp = self.integer()?;
                    }
                    let slot = if c == b'x' { &mut dx } else { &mut dy };
                    *slot = u32::try_from(exp)
                        .ok()
                        .and_then(|e| slot.checked_add(e))
                        .filter(|&d| d <= MAX_DEGREE)
                        .ok_or(ParseError {
                            offset: factor_start,
                            message: format!("degree exceeds the cap {MAX_DEGREE}"),
                        })?;
                }
                Some(c) if c.is_ascii_digit() => {
                    let value = self.integer()?;
                    coeff = i128::try_from(value)
                        .ok()
                        .and_then(|v| coeff.checked_mul(v))
                        .ok_or(ParseError {
                            offset: factor_start,
                            message: "coefficient overflow".into(),
                        })?;
                }
                _ => {
                    let found = self.describe();
                    return self.error(
                        factor_start,
                        format!("expected a coefficient, `x` or `y`, {found}"),
                    );
                }
            }
            match self.peek() {
                Some(b'*') => self.pos += 1,
                Some(b'+' | b'-') | None => break,
                Some(_) => {
                    let found = self.describe();
                    return self.error(self.pos, format!("expected `*`, `+`, `-` or end, {found}"));
                }
            }
        }
        debug_assert!(self.pos > start);
        Ok((dx, dy, coeff))
    }

    fn poly(&mut self) -> Result<Vec<(u32, u32, i128)>, ParseError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                None if !first => return Ok(terms),
                _ if first => 1,
                _ => unreachable!("terms end at a sign or the end of input"),
            };
            terms.push(self.term(sign)?);
            first = false;
        }
    }
}

/// Parses `text` into canonical form. Squarefreeness of `f` in `Z[x, y]` is
/// assumed, not checked.
pub fn parse_poly(text: &str) -> Result<BiPoly, ParseError> {
    let trimmed = text.trim();
    if let Ok(f) = BiPoly::builtin(trimmed) {
        return Ok(f);
    }
    let mut parser = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let terms = parser.poly()?;
    let f = BiPoly::from_terms(terms).map_err(|e| ParseError {
        offset: 0,
        message: e.to_string(),
    })?;
    if f.is_zero() {
        return Err(ParseError {
            offset: 0,
            message: "polynomial is identically zero".into(),
        });
    }
    Ok(f)
}
