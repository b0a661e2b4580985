//! Recursive-descent parser for the event grammar:
//!
//! ```text
//! expr   := term { "|" term }
//! term   := factor { "&" factor }
//! factor := "!" factor | "(" expr ")" | atom
//! atom   := "ord(" nat { "<" nat } ")"
//! ```
//!
//! `ord()` is also accepted and denotes the whole space.

use super::{EventExpr, FiniteOrder};
use crate::error::{Error, Result};

pub fn parse_event(text: &str) -> Result<EventExpr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<EventExpr> {
        let mut lhs = self.term()?;
        while self.eat(b'|') {
            lhs = EventExpr::or(lhs, self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<EventExpr> {
        let mut lhs = self.factor()?;
        while self.eat(b'&') {
            lhs = EventExpr::and(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<EventExpr> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(EventExpr::not(self.factor()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'o') => self.atom(),
            Some(_) => Err(self.error("expected `!`, `(` or `ord(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn atom(&mut self) -> Result<EventExpr> {
        self.skip_ws();
        if !self.src[self.pos..].starts_with(b"ord") {
            return Err(self.error("expected `ord(`"));
        }
        self.pos += 3;
        self.expect(b'(')?;
        let mut elements = Vec::new();
        if !self.eat(b')') {
            loop {
                let start = self.pos;
                let x = self.nat()?;
                if elements.contains(&x) {
                    self.pos = start;
                    return Err(Error::RepeatedElement { element: x });
                }
                elements.push(x);
                if self.eat(b'<') {
                    continue;
                }
                self.expect(b')')?;
                break;
            }
        }
        Ok(EventExpr::Atom(FiniteOrder::new(elements)?))
    }

    fn nat(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Syntax {
                position: start,
                message: "natural number out of range".to_string(),
            })
    }
}
