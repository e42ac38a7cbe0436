//! Text syntax for X-forms.
//!
//! ```text
//! xform := next
//! next  := or ( "->" or )*
//! or    := and ( "+" and )*
//! and   := unary ( "." unary )*
//! unary := "!" unary | atom
//! atom  := BITS | "(" xform ")"
//! BITS  := "#" [01]+
//! ```
//!
//! Precedence `!` > `.` > `+` > `->`; the binary operators associate left;
//! whitespace between tokens is insignificant. `#!` starts a comment running
//! to the end of the line (`#` alone introduces a bits literal, so comments
//! need the second character). All bits literals in one form must have equal
//! width; the width of the first literal fixes the dimension unless the
//! caller supplies one.

use std::fmt;

use crate::ast::{XForm, XFormNode};
use crate::error::Error;
use crate::pattern::{BasePattern, Dimension};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    SyntaxError,
    KindError,
    WidthError,
}

/// A parse failure: what went wrong and the byte offset where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub kind: DiagnosticKind,
    pub byte_offset: usize,
    pub message: String,
}

impl ParseDiagnostic {
    fn new(kind: DiagnosticKind, byte_offset: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            kind,
            byte_offset,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.kind {
            DiagnosticKind::SyntaxError => "syntax error",
            DiagnosticKind::KindError => "kind error",
            DiagnosticKind::WidthError => "width error",
        };
        write!(f, "{} at byte {}: {}", label, self.byte_offset, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Bits(BasePattern),
    Bang,
    Dot,
    Plus,
    Arrow,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, ParseDiagnostic> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        match bytes[i] {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'!' => {
                tokens.push((Token::Bang, start));
                i += 1;
            }
            b'.' => {
                tokens.push((Token::Dot, start));
                i += 1;
            }
            b'+' => {
                tokens.push((Token::Plus, start));
                i += 1;
            }
            b'(' => {
                tokens.push((Token::LParen, start));
                i += 1;
            }
            b')' => {
                tokens.push((Token::RParen, start));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    tokens.push((Token::Arrow, start));
                    i += 2;
                } else {
                    return Err(ParseDiagnostic::new(
                        DiagnosticKind::SyntaxError,
                        start,
                        "expected '->'",
                    ));
                }
            }
            b'#' => {
                if bytes.get(i + 1) == Some(&b'!') {
                    // comment to end of line
                    while i < bytes.len() && bytes[i] != b'\n' {
                        i += 1;
                    }
                    continue;
                }
                i += 1;
                let bits_start = i;
                while i < bytes.len() && (bytes[i] == b'0' || bytes[i] == b'1') {
                    i += 1;
                }
                if i == bits_start {
                    return Err(ParseDiagnostic::new(
                        DiagnosticKind::SyntaxError,
                        start,
                        "expected bits after '#'",
                    ));
                }
                let base: BasePattern = src[bits_start..i]
                    .parse()
                    .expect("scanned bits are 0/1 only");
                tokens.push((Token::Bits(base), start));
            }
            other => {
                return Err(ParseDiagnostic::new(
                    DiagnosticKind::SyntaxError,
                    start,
                    format!("unexpected character {:?}", other as char),
                ));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_offset: usize,
    dim: Option<Dimension>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(_, o)| o)
            .unwrap_or(self.end_offset)
    }

    fn advance(&mut self) -> Option<(Token, usize)> {
        let item = self.tokens.get(self.pos).cloned();
        if item.is_some() {
            self.pos += 1;
        }
        item
    }

    fn syntax(&self, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic::new(DiagnosticKind::SyntaxError, self.offset(), message)
    }

    // next := or ( "->" or )*
    fn next_level(&mut self) -> Result<XForm, ParseDiagnostic> {
        let mut form = self.or_level()?;
        while self.peek() == Some(&Token::Arrow) {
            let (_, op_offset) = self.advance().expect("peeked");
            let rhs = self.or_level()?;
            form = XForm::next(form, rhs).map_err(|e| lift(e, op_offset))?;
        }
        Ok(form)
    }

    // or := and ( "+" and )*
    fn or_level(&mut self) -> Result<XForm, ParseDiagnostic> {
        let mut form = self.and_level()?;
        while self.peek() == Some(&Token::Plus) {
            let (_, op_offset) = self.advance().expect("peeked");
            let rhs = self.and_level()?;
            form = XForm::or(form, rhs).map_err(|e| lift(e, op_offset))?;
        }
        Ok(form)
    }

    // and := unary ( "." unary )*
    fn and_level(&mut self) -> Result<XForm, ParseDiagnostic> {
        let mut form = self.unary()?;
        while self.peek() == Some(&Token::Dot) {
            let (_, op_offset) = self.advance().expect("peeked");
            let rhs = self.unary()?;
            form = XForm::and(form, rhs).map_err(|e| lift(e, op_offset))?;
        }
        Ok(form)
    }

    // unary := "!" unary | atom
    fn unary(&mut self) -> Result<XForm, ParseDiagnostic> {
        if self.peek() == Some(&Token::Bang) {
            let (_, op_offset) = self.advance().expect("peeked");
            let child = self.unary()?;
            return XForm::not(child).map_err(|e| lift(e, op_offset));
        }
        self.atom()
    }

    // atom := BITS | "(" xform ")"
    fn atom(&mut self) -> Result<XForm, ParseDiagnostic> {
        match self.peek() {
            Some(Token::Bits(_)) => {
                let (token, offset) = self.advance().expect("peeked");
                let base = match token {
                    Token::Bits(b) => b,
                    _ => unreachable!(),
                };
                match self.dim {
                    None => self.dim = Some(base.dim()),
                    Some(d) if d != base.dim() => {
                        return Err(ParseDiagnostic::new(
                            DiagnosticKind::WidthError,
                            offset,
                            format!(
                                "literal has width {}, expected {}",
                                base.dim(),
                                d
                            ),
                        ));
                    }
                    Some(_) => {}
                }
                Ok(XForm::leaf(base))
            }
            Some(Token::LParen) => {
                self.advance();
                let inner = self.next_level()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.advance();
                        Ok(inner)
                    }
                    _ => Err(self.syntax("expected ')'")),
                }
            }
            _ => Err(self.syntax("expected a bits literal or '('")),
        }
    }
}

fn lift(e: Error, offset: usize) -> ParseDiagnostic {
    let kind = match e {
        Error::Kind => DiagnosticKind::KindError,
        Error::DimensionMismatch { .. } => DiagnosticKind::WidthError,
        _ => DiagnosticKind::SyntaxError,
    };
    ParseDiagnostic::new(kind, offset, e.to_string())
}

/// Parse one X-form. With `expected_dim` given, every bits literal must have
/// that width; otherwise the first literal fixes the width.
pub fn parse(src: &str, expected_dim: Option<Dimension>) -> Result<XForm, ParseDiagnostic> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_offset: src.len(),
        dim: expected_dim,
    };
    let form = parser.next_level()?;
    if parser.peek().is_some() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(form)
}

// precedence levels used by the printer; higher binds tighter
fn precedence(e: &XForm) -> u8 {
    match e.node() {
        XFormNode::Next(_, _) => 1,
        XFormNode::Or(_, _) => 2,
        XFormNode::And(_, _) => 3,
        XFormNode::Not(_) => 4,
        XFormNode::Leaf(_) => 5,
    }
}

fn render(e: &XForm, min_prec: u8, out: &mut String) {
    let prec = precedence(e);
    if prec < min_prec {
        out.push('(');
        render(e, 0, out);
        out.push(')');
        return;
    }
    match e.node() {
        XFormNode::Leaf(b) => {
            out.push('#');
            out.push_str(&b.to_string());
        }
        XFormNode::Not(c) => {
            out.push('!');
            render(c, 4, out);
        }
        XFormNode::And(l, r) => {
            render(l, 3, out);
            out.push_str(" . ");
            render(r, 4, out);
        }
        XFormNode::Or(l, r) => {
            render(l, 2, out);
            out.push_str(" + ");
            render(r, 3, out);
        }
        XFormNode::Next(l, r) => {
            render(l, 1, out);
            out.push_str(" -> ");
            render(r, 2, out);
        }
    }
}

/// Render with minimal parenthesization; reparsing yields an equal tree.
pub fn print(e: &XForm) -> String {
    let mut out = String::new();
    render(e, 0, &mut out);
    out
}

impl fmt::Display for XForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}
