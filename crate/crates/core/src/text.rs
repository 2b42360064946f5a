//! The plain-text program format.
//!
//! ```text
//! rule    := [ head ] ":-" [ body ] "." | head "."
//! head    := atom ( "|" atom )*
//! body    := literal ( "," literal )*
//! literal := atom | "not" atom
//! ```
//!
//! `%` starts a comment that runs to the end of the line. Whitespace,
//! including newlines, is insignificant. `not` is reserved.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use crate::atoms::{AtomId, AtomSet, SymbolTable};
use crate::program::{Program, Rule};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Non-fatal diagnostics collected while parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub column: usize,
    /// 1-based
    pub rule: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: warning: {} (rule {})", self.line, self.column, self.message, self.rule)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Not,
    If,
    Bar,
    Comma,
    Dot,
    Eof,
}

impl fmt::Display for Tok<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "atom `{s}`"),
            Tok::Not => f.write_str("`not`"),
            Tok::If => f.write_str("`:-`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, col: 1 }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, column, message: message.into() }
    }

    /// Next token with its starting line and column.
    fn next(&mut self) -> Result<(Tok<'a>, usize, usize), ParseError> {
        loop {
            match self.peek_char() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while !matches!(self.peek_char(), None | Some('\n')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let Some(c) = self.bump() else {
            return Ok((Tok::Eof, line, col));
        };
        let tok = match c {
            '|' => Tok::Bar,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            ':' => {
                if self.peek_char() == Some('-') {
                    self.bump();
                    Tok::If
                } else {
                    return Err(self.error(line, col, "expected `:-`"));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos - 1;
                while self
                    .peek_char()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.bump();
                }
                match &self.src[start..self.pos] {
                    "not" => Tok::Not,
                    s => Tok::Ident(s),
                }
            }
            other => return Err(self.error(line, col, alloc::format!("unexpected character `{other}`"))),
        };
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok<'a>,
    line: usize,
    col: usize,
    symbols: SymbolTable,
    warnings: Vec<ParseWarning>,
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<(), ParseError> {
        let (t, l, c) = self.lex.next()?;
        self.tok = t;
        self.line = l;
        self.col = c;
        Ok(())
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.lex.error(self.line, self.col, alloc::format!("expected {wanted}, found {}", self.tok))
    }

    fn atom(&mut self) -> Result<(AtomId, usize, usize), ParseError> {
        match self.tok {
            Tok::Ident(name) => {
                let at = (self.symbols.intern(name), self.line, self.col);
                self.advance()?;
                Ok(at)
            }
            _ => Err(self.unexpected("an atom")),
        }
    }

    fn push_unique(&mut self, part: &mut Vec<AtomId>, (a, line, column): (AtomId, usize, usize), what: &str, rule: usize) {
        if part.contains(&a) {
            self.warnings.push(ParseWarning {
                line,
                column,
                rule,
                message: alloc::format!("duplicate atom `{}` in {what}", self.symbols.name(a)),
            });
        } else {
            part.push(a);
        }
    }

    fn rule(&mut self, number: usize) -> Result<Rule, ParseError> {
        let mut head = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        if let Tok::Ident(_) = self.tok {
            let at = self.atom()?;
            self.push_unique(&mut head, at, "head", number);
            while self.tok == Tok::Bar {
                self.advance()?;
                let at = self.atom()?;
                self.push_unique(&mut head, at, "head", number);
            }
        }
        match self.tok {
            Tok::Dot if !head.is_empty() => {}
            Tok::If => {
                self.advance()?;
                if self.tok != Tok::Dot {
                    loop {
                        if self.tok == Tok::Not {
                            self.advance()?;
                            let at = self.atom()?;
                            self.push_unique(&mut neg, at, "negative body", number);
                        } else {
                            let at = self.atom()?;
                            self.push_unique(&mut pos, at, "positive body", number);
                        }
                        if self.tok != Tok::Comma {
                            break;
                        }
                        self.advance()?;
                    }
                }
            }
            _ if head.is_empty() => return Err(self.unexpected("an atom or `:-`")),
            _ => return Err(self.unexpected("`|`, `:-` or `.`")),
        }
        if self.tok != Tok::Dot {
            return Err(self.unexpected("`,` or `.`"));
        }
        self.advance()?;
        Ok(Rule::new(head, pos, neg))
    }
}

/// Parse a program, returning duplicate-atom warnings alongside it.
pub fn parse_program_with_warnings(text: &str) -> Result<(Program, Vec<ParseWarning>), ParseError> {
    let mut p = Parser {
        lex: Lexer::new(text),
        tok: Tok::Eof,
        line: 1,
        col: 1,
        symbols: SymbolTable::new(),
        warnings: Vec::new(),
    };
    p.advance()?;
    let mut rules = Vec::new();
    while p.tok != Tok::Eof {
        let r = p.rule(rules.len() + 1)?;
        rules.push(r);
    }
    Ok((Program::new(Arc::new(p.symbols), rules), p.warnings))
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_with_warnings(text).map(|(p, _)| p)
}

/// Display adapter for a rule; needs the symbol table for names.
pub struct RuleDisplay<'a> {
    rule: &'a Rule,
    symbols: &'a SymbolTable,
}

impl<'a> RuleDisplay<'a> {
    pub fn new(rule: &'a Rule, symbols: &'a SymbolTable) -> Self {
        RuleDisplay { rule, symbols }
    }
}

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |a: AtomId| self.symbols.name(a);
        for (i, &a) in self.rule.head().iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            f.write_str(name(a))?;
        }
        let body_len = self.rule.body_pos().len() + self.rule.body_neg().len();
        if body_len == 0 {
            return if self.rule.head().is_empty() { f.write_str(":-.") } else { f.write_str(".") };
        }
        f.write_str(if self.rule.head().is_empty() { ":- " } else { " :- " })?;
        let lits = self
            .rule
            .body_pos()
            .iter()
            .map(|&a| (false, a))
            .chain(self.rule.body_neg().iter().map(|&a| (true, a)));
        for (i, (negated, a)) in lits.enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if negated {
                f.write_str("not ")?;
            }
            f.write_str(name(a))?;
        }
        f.write_str(".")
    }
}

/// One rule per line, each terminated by `\n`.
pub fn render_program(p: &Program) -> String {
    let mut out = String::new();
    for r in p.rules() {
        let _ = writeln!(out, "{}", RuleDisplay::new(r, p.symbols()));
    }
    out
}

/// `{a, c}` with names sorted lexicographically.
pub fn format_atoms(symbols: &SymbolTable, atoms: &AtomSet) -> String {
    let mut names: Vec<&str> = atoms.iter().map(|a| symbols.name(a)).collect();
    names.sort_unstable();
    let mut out = String::from("{");
    for (i, n) in names.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(n);
    }
    out.push('}');
    out
}
