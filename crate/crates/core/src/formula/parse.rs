//! Lexer and precedence-climbing parser shared by both languages.
//!
//! Precedence, tightest first:
//!
//! | level | discursive | modal          | associativity |
//! |-------|------------|----------------|---------------|
//! | unary | `~`        | `~` `<>` `[]`  | prefix        |
//! | 4     | `^`        | `&`            | left          |
//! | 3     | `\|`       | `\|`           | left          |
//! | 2     | `=>`       | `->`           | right         |
//! | 1     |            | `<->`          | right         |
//!
//! Atoms are lowercase identifiers (`[a-z][a-z0-9_]*`). A single uppercase
//! letter is a metavariable and is only allowed in the discursive language.

use std::fmt;

use thiserror::Error;

use super::{DiscursiveFormula, ModalFormula};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Language {
    Discursive,
    Modal,
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::Discursive => "discursive",
            Language::Modal => "modal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: found {found}, expected {}", .expected.join(" or "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("`{token}` at offset {offset} is not part of the {language} language")]
    WrongLanguage {
        offset: usize,
        token: String,
        language: Language,
    },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::WrongLanguage { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Meta(char),
    Tilde,
    Dia,
    Box,
    Hat,
    Amp,
    Bar,
    FatArrow,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Atom(a) => a.clone(),
            Tok::Meta(c) => c.to_string(),
            Tok::Tilde => "~".into(),
            Tok::Dia => "<>".into(),
            Tok::Box => "[]".into(),
            Tok::Hat => "^".into(),
            Tok::Amp => "&".into(),
            Tok::Bar => "|".into(),
            Tok::FatArrow => "=>".into(),
            Tok::Arrow => "->".into(),
            Tok::DoubleArrow => "<->".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }

    fn allowed_in(&self, lang: Language) -> bool {
        match self {
            Tok::Meta(_) | Tok::Hat | Tok::FatArrow => lang == Language::Discursive,
            Tok::Dia | Tok::Box | Tok::Amp | Tok::Arrow | Tok::DoubleArrow => {
                lang == Language::Modal
            }
            _ => true,
        }
    }
}

fn lex(text: &str, lang: Language) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::DoubleArrow, 3)
        } else if rest.starts_with("<>") {
            (Tok::Dia, 2)
        } else if rest.starts_with("[]") {
            (Tok::Box, 2)
        } else if rest.starts_with("=>") {
            (Tok::FatArrow, 2)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else {
            match c {
                b'~' => (Tok::Tilde, 1),
                b'^' => (Tok::Hat, 1),
                b'&' => (Tok::Amp, 1),
                b'|' => (Tok::Bar, 1),
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b'a'..=b'z' => {
                    let mut j = i + 1;
                    while j < bytes.len()
                        && (bytes[j].is_ascii_lowercase()
                            || bytes[j].is_ascii_digit()
                            || bytes[j] == b'_')
                    {
                        j += 1;
                    }
                    (Tok::Atom(text[i..j].to_string()), j - i)
                }
                b'A'..=b'Z' => {
                    if i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                        let mut j = i + 1;
                        while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                            j += 1;
                        }
                        return Err(ParseError::Syntax {
                            offset: start,
                            found: format!("`{}`", &text[i..j]),
                            expected: vec!["atom (lowercase identifier)", "metavariable (single uppercase letter)"],
                        });
                    }
                    (Tok::Meta(c as char), 1)
                }
                _ => {
                    let ch = rest.chars().next().unwrap_or('?');
                    return Err(ParseError::Syntax {
                        offset: start,
                        found: format!("`{ch}`"),
                        expected: vec!["a formula token"],
                    });
                }
            }
        };
        if !tok.allowed_in(lang) {
            return Err(ParseError::WrongLanguage {
                offset: start,
                token: tok.text(),
                language: lang,
            });
        }
        out.push((start, tok));
        i += len;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Conj,
    Or,
    Imp,
    Iff,
}

impl BinOp {
    fn of(tok: &Tok) -> Option<BinOp> {
        match tok {
            Tok::Hat | Tok::Amp => Some(BinOp::Conj),
            Tok::Bar => Some(BinOp::Or),
            Tok::FatArrow | Tok::Arrow => Some(BinOp::Imp),
            Tok::DoubleArrow => Some(BinOp::Iff),
            _ => None,
        }
    }

    fn level(self) -> u8 {
        match self {
            BinOp::Iff => 1,
            BinOp::Imp => 2,
            BinOp::Or => 3,
            BinOp::Conj => 4,
        }
    }

    fn right_assoc(self) -> bool {
        matches!(self, BinOp::Imp | BinOp::Iff)
    }
}

#[derive(Debug, Clone, Copy)]
enum UnOp {
    Neg,
    Dia,
    Box,
}

/// Language-neutral syntax tree; lowered after parsing.
enum Syntax {
    Atom(String),
    Meta(char),
    Unary(UnOp, std::boxed::Box<Syntax>),
    Binary(BinOp, std::boxed::Box<Syntax>, std::boxed::Box<Syntax>),
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

const OPERAND: &[&str] = &["atom", "metavariable", "unary operator", "`(`"];

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn found(&self) -> String {
        self.peek()
            .map(|t| format!("`{}`", t.text()))
            .unwrap_or_else(|| "end of input".to_string())
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            found: self.found(),
            expected: expected.to_vec(),
        }
    }

    fn expr(&mut self, min_level: u8) -> Result<Syntax, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.peek().and_then(BinOp::of) {
            if op.level() < min_level {
                break;
            }
            self.pos += 1;
            let next_min = if op.right_assoc() { op.level() } else { op.level() + 1 };
            let rhs = self.expr(next_min)?;
            lhs = Syntax::Binary(op, lhs.into(), rhs.into());
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Syntax, ParseError> {
        let Some(tok) = self.peek() else {
            return Err(self.error(OPERAND));
        };
        let op = match tok {
            Tok::Tilde => Some(UnOp::Neg),
            Tok::Dia => Some(UnOp::Dia),
            Tok::Box => Some(UnOp::Box),
            _ => None,
        };
        if let Some(op) = op {
            self.pos += 1;
            return Ok(Syntax::Unary(op, self.unary()?.into()));
        }
        match tok {
            Tok::Atom(a) => {
                self.pos += 1;
                Ok(Syntax::Atom(a.clone()))
            }
            Tok::Meta(c) => {
                self.pos += 1;
                Ok(Syntax::Meta(*c))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr(1)?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error(&["binary operator", "`)`"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error(OPERAND)),
        }
    }
}

fn parse_syntax(text: &str, lang: Language) -> Result<Syntax, ParseError> {
    let toks = lex(text, lang)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
    };
    let tree = p.expr(1)?;
    if p.pos != toks.len() {
        return Err(p.error(&["binary operator", "end of input"]));
    }
    Ok(tree)
}

fn lower_discursive(s: Syntax) -> DiscursiveFormula {
    use DiscursiveFormula as F;
    match s {
        Syntax::Atom(a) => F::Atom(a),
        Syntax::Meta(c) => F::MetaVar(c),
        Syntax::Unary(UnOp::Neg, x) => F::neg(lower_discursive(*x)),
        Syntax::Binary(BinOp::Conj, l, r) => F::dconj(lower_discursive(*l), lower_discursive(*r)),
        Syntax::Binary(BinOp::Or, l, r) => F::or(lower_discursive(*l), lower_discursive(*r)),
        Syntax::Binary(BinOp::Imp, l, r) => F::dimp(lower_discursive(*l), lower_discursive(*r)),
        // the lexer rejects the remaining tokens in discursive mode
        Syntax::Unary(UnOp::Dia | UnOp::Box, _) | Syntax::Binary(BinOp::Iff, ..) => {
            unreachable!("modal syntax in discursive tree")
        }
    }
}

fn lower_modal(s: Syntax) -> ModalFormula {
    use ModalFormula as M;
    match s {
        Syntax::Atom(a) => M::Atom(a),
        Syntax::Meta(_) => unreachable!("metavariable in modal tree"),
        Syntax::Unary(UnOp::Neg, x) => M::neg(lower_modal(*x)),
        Syntax::Unary(UnOp::Dia, x) => M::dia(lower_modal(*x)),
        Syntax::Unary(UnOp::Box, x) => M::boxed(lower_modal(*x)),
        Syntax::Binary(BinOp::Conj, l, r) => M::and(lower_modal(*l), lower_modal(*r)),
        Syntax::Binary(BinOp::Or, l, r) => M::or(lower_modal(*l), lower_modal(*r)),
        Syntax::Binary(BinOp::Imp, l, r) => M::imp(lower_modal(*l), lower_modal(*r)),
        Syntax::Binary(BinOp::Iff, l, r) => M::iff(lower_modal(*l), lower_modal(*r)),
    }
}

/// Parses a formula of the discussive language (`~ | => ^`, atoms, metavariables).
pub fn parse_discursive(text: &str) -> Result<DiscursiveFormula, ParseError> {
    parse_syntax(text, Language::Discursive).map(lower_discursive)
}

/// Parses a modal formula (`~ | & -> <-> <> []`, atoms).
pub fn parse_modal(text: &str) -> Result<ModalFormula, ParseError> {
    parse_syntax(text, Language::Modal).map(lower_modal)
}

impl std::str::FromStr for DiscursiveFormula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_discursive(s)
    }
}

impl std::str::FromStr for ModalFormula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_modal(s)
    }
}
