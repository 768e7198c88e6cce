//! Reader for the graph notation.
//!
//! ```text
//! factor := "(" int "," int ")" ["^" int] | "(" int ")" ["^" int] | "d" ["^" int]
//! graph  := factor+ | "1"
//! ```
//!
//! Whitespace is ignored everywhere; integers are base-10 and at least 1.

use super::GeneralizedGraph;
use crate::error::{Error, Result};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, want: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(Error::parse(
                self.pos,
                format!("expected '{}', found '{}'", want as char, c as char),
            )),
            None => Err(Error::parse(
                self.pos,
                format!("expected '{}', found end of input", want as char),
            )),
        }
    }

    /// Positive base-10 integer.
    fn positive(&mut self, what: &str) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, format!("expected {what}")));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        let value: u32 = text
            .parse()
            .map_err(|_| Error::parse(start, format!("{what} out of range")))?;
        if value == 0 {
            return Err(Error::parse(start, format!("{what} must be at least 1")));
        }
        Ok(value)
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.positive("exponent")
        } else {
            Ok(1)
        }
    }
}

/// Parses the text notation, e.g. `(1,2)^2(2,3)(1)`.
pub fn parse(text: &str) -> Result<GeneralizedGraph> {
    let mut cur = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    if cur.peek() == Some(b'1') {
        cur.pos += 1;
        return match cur.peek() {
            None => Ok(GeneralizedGraph::empty()),
            Some(_) => Err(Error::parse(cur.pos, "trailing input after '1'")),
        };
    }

    let mut edges = Vec::new();
    let mut legs = Vec::new();
    let mut diag = 0u32;
    let mut factors = 0usize;
    while let Some(c) = cur.peek() {
        match c {
            b'(' => {
                cur.pos += 1;
                let u = cur.positive("vertex label")?;
                let second = if cur.peek() == Some(b',') {
                    cur.pos += 1;
                    Some(cur.positive("vertex label")?)
                } else {
                    None
                };
                cur.expect(b')')?;
                let k = cur.exponent()?;
                match second {
                    Some(v) => {
                        let e = if u <= v { (u, v) } else { (v, u) };
                        edges.extend(std::iter::repeat_n(e, k as usize));
                    }
                    None => legs.extend(std::iter::repeat_n(u, k as usize)),
                }
            }
            b'd' => {
                cur.pos += 1;
                diag += cur.exponent()?;
            }
            other => {
                return Err(Error::parse(
                    cur.pos,
                    format!("unexpected character '{}'", other as char),
                ))
            }
        }
        factors += 1;
    }
    if factors == 0 {
        return Err(Error::parse(cur.pos, "empty input; write '1' for the empty product"));
    }
    edges.sort_unstable();
    legs.sort_unstable();
    Ok(GeneralizedGraph::from_sorted_unchecked(edges, legs, diag))
}
