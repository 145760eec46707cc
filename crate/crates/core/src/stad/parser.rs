//! Recursive-descent parser for STAD documents.

use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::graph::{is_valid_blank_label, is_valid_lang_tag, Literal, Term, Triple, TrustGraph};
use crate::vocab::{
    is_forbidden_iri_char, Iri, PrefixTable, RDF_TYPE, XSD_BOOLEAN, XSD_DATE, XSD_DECIMAL,
    XSD_INTEGER,
};

/// Documents larger than this are rejected before parsing.
pub const MAX_DOCUMENT_BYTES: usize = 10 * 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParseErrorCode {
    /// unexpected character
    P001,
    /// unterminated string
    P002,
    /// malformed prefix directive
    P003,
    /// undeclared prefix
    P004,
    /// malformed literal
    P005,
    /// statement not terminated by '.'
    P006,
    /// malformed IRI
    P007,
    /// document exceeds [`MAX_DOCUMENT_BYTES`]
    P008,
}

impl ParseErrorCode {
    pub fn label(self) -> &'static str {
        match self {
            ParseErrorCode::P001 => "unexpected-char",
            ParseErrorCode::P002 => "unterminated-string",
            ParseErrorCode::P003 => "bad-prefix",
            ParseErrorCode::P004 => "unknown-prefix",
            ParseErrorCode::P005 => "bad-literal",
            ParseErrorCode::P006 => "missing-dot",
            ParseErrorCode::P007 => "bad-iri",
            ParseErrorCode::P008 => "too-large",
        }
    }
}

impl fmt::Display for ParseErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{line}:{column}: {code} {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub code: ParseErrorCode,
    pub message: String,
}

/// Parses a STAD document into a de-duplicated triple set.
pub fn parse_document(text: &str) -> Result<TrustGraph, ParseError> {
    if text.len() > MAX_DOCUMENT_BYTES {
        return Err(ParseError {
            line: 1,
            column: 1,
            code: ParseErrorCode::P008,
            message: format!(
                "document is {} bytes, limit is {MAX_DOCUMENT_BYTES}",
                text.len()
            ),
        });
    }
    Parser::new(text).run()
}

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

struct Parser {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    column: usize,
    graph: TrustGraph,
}

type PResult<T> = Result<T, ParseError>;

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

fn is_local_char(c: char) -> bool {
    is_name_char(c) || c == '.'
}

fn is_delimiter(c: Option<char>) -> bool {
    match c {
        None => true,
        Some(c) => c.is_whitespace() || matches!(c, '.' | ';' | ',' | '#' | '<' | '"'),
    }
}

impl Parser {
    fn new(text: &str) -> Self {
        Self {
            chars: text.chars().collect(),
            idx: 0,
            line: 1,
            column: 1,
            graph: TrustGraph::new(PrefixTable::new()),
        }
    }

    fn run(mut self) -> PResult<TrustGraph> {
        loop {
            self.skip_trivia();
            match self.peek() {
                None => break,
                Some('@') => self.directive()?,
                Some(_) => self.statement()?,
            }
        }
        Ok(self.graph)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.idx + offset).copied()
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, pos: Pos, code: ParseErrorCode, message: impl Into<String>) -> ParseError {
        ParseError {
            line: pos.line,
            column: pos.column,
            code,
            message: message.into(),
        }
    }

    fn unexpected(&self, code: ParseErrorCode, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        };
        self.error(self.pos(), code, format!("expected {expected}, found {found}"))
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    fn directive(&mut self) -> PResult<()> {
        let at = self.pos();
        self.bump();
        let keyword = self.take_while(|c| c.is_ascii_alphabetic());
        if keyword != "prefix" {
            return Err(self.error(
                at,
                ParseErrorCode::P001,
                format!("unsupported directive @{keyword}"),
            ));
        }
        if !self.peek().is_some_and(char::is_whitespace) {
            return Err(self.unexpected(ParseErrorCode::P003, "whitespace after @prefix"));
        }
        self.skip_trivia();
        let label_pos = self.pos();
        let label = self.take_while(is_name_char);
        if !crate::vocab::is_valid_prefix_label(&label) {
            return Err(self.error(
                label_pos,
                ParseErrorCode::P003,
                format!("invalid prefix label {label:?}"),
            ));
        }
        if self.peek() != Some(':') {
            return Err(self.unexpected(ParseErrorCode::P003, "':' after prefix label"));
        }
        self.bump();
        self.skip_trivia();
        if self.peek() != Some('<') {
            return Err(self.unexpected(ParseErrorCode::P003, "namespace IRI in <...>"));
        }
        let namespace = self.iriref()?;
        self.graph
            .prefixes_mut()
            .insert(label, namespace)
            .expect("label validated above");
        self.skip_trivia();
        self.expect_dot()
    }

    fn expect_dot(&mut self) -> PResult<()> {
        if self.peek() == Some('.') {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(ParseErrorCode::P006, "'.'"))
        }
    }

    fn statement(&mut self) -> PResult<()> {
        let subject = self.subject()?;
        loop {
            self.skip_trivia();
            let predicate = self.verb()?;
            loop {
                self.skip_trivia();
                let object = self.object()?;
                let triple = Triple::new(subject.clone(), predicate.clone(), object)
                    .expect("parser only produces well-positioned terms");
                self.graph.insert(triple);
                self.skip_trivia();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            if self.peek() == Some(';') {
                self.bump();
                self.skip_trivia();
                // repeated or trailing ';' before the terminating '.'
                while self.peek() == Some(';') {
                    self.bump();
                    self.skip_trivia();
                }
                if self.peek() == Some('.') {
                    break;
                }
            } else {
                break;
            }
        }
        self.expect_dot()
    }

    fn subject(&mut self) -> PResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank(),
            Some(c) if c.is_ascii_alphabetic() || c == ':' => self.prefixed_name(),
            _ => Err(self.unexpected(ParseErrorCode::P001, "subject IRI or blank node")),
        }
    }

    fn verb(&mut self) -> PResult<Term> {
        match self.peek() {
            Some('a') if is_delimiter(self.peek_at(1)) => {
                self.bump();
                Ok(Term::Iri(Iri::new(RDF_TYPE).unwrap()))
            }
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some(c) if c.is_ascii_alphabetic() || c == ':' => self.prefixed_name(),
            _ => Err(self.unexpected(ParseErrorCode::P001, "predicate IRI or 'a'")),
        }
    }

    fn object(&mut self) -> PResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank(),
            Some('"') => self.string_literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.number(),
            Some('.') if self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == ':' => {
                for keyword in ["true", "false"] {
                    if self.at_keyword(keyword) {
                        for _ in 0..keyword.len() {
                            self.bump();
                        }
                        return Ok(Term::literal(Literal::typed(
                            keyword,
                            Iri::new(XSD_BOOLEAN).unwrap(),
                        )));
                    }
                }
                self.prefixed_name()
            }
            _ => Err(self.unexpected(ParseErrorCode::P001, "object")),
        }
    }

    fn at_keyword(&self, keyword: &str) -> bool {
        keyword
            .chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i) == Some(c))
            && is_delimiter(self.peek_at(keyword.len()))
    }

    fn iriref(&mut self) -> PResult<Iri> {
        let start = self.pos();
        self.bump(); // '<'
        let mut value = String::new();
        loop {
            match self.peek() {
                Some('>') => {
                    self.bump();
                    break;
                }
                Some(c) if !is_forbidden_iri_char(c) => {
                    value.push(c);
                    self.bump();
                }
                Some(c) => {
                    return Err(self.error(
                        self.pos(),
                        ParseErrorCode::P007,
                        format!("character {c:?} not allowed in IRI"),
                    ))
                }
                None => {
                    return Err(self.error(self.pos(), ParseErrorCode::P007, "unterminated IRI"))
                }
            }
        }
        Iri::new(value.clone()).map_err(|_| {
            self.error(
                start,
                ParseErrorCode::P007,
                format!("{value:?} is not an absolute IRI"),
            )
        })
    }

    fn prefixed_name(&mut self) -> PResult<Term> {
        let start = self.pos();
        let label = self.take_while(is_name_char);
        if self.peek() != Some(':') {
            return Err(self.error(
                start,
                ParseErrorCode::P001,
                format!("unexpected token {label:?}"),
            ));
        }
        if !crate::vocab::is_valid_prefix_label(&label) {
            return Err(self.error(
                start,
                ParseErrorCode::P001,
                format!("invalid prefix label {label:?}"),
            ));
        }
        self.bump(); // ':'
        let mut local = String::new();
        if self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            local = self.take_while(is_local_char);
            // a trailing '.' terminates the statement, it is not part of the name
            while local.ends_with('.') {
                local.pop();
                self.idx -= 1;
                self.column -= 1;
            }
        }
        let Some(namespace) = self.graph.prefixes().lookup(&label) else {
            return Err(self.error(
                start,
                ParseErrorCode::P004,
                format!("prefix {label:?} is not declared"),
            ));
        };
        let full = format!("{namespace}{local}");
        Iri::new(full.clone())
            .map(Term::Iri)
            .map_err(|_| self.error(start, ParseErrorCode::P007, format!("invalid IRI {full:?}")))
    }

    fn blank(&mut self) -> PResult<Term> {
        let start = self.pos();
        self.bump();
        self.bump();
        let label = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if !is_valid_blank_label(&label) {
            return Err(self.error(
                start,
                ParseErrorCode::P001,
                format!("invalid blank node label {label:?}"),
            ));
        }
        Ok(Term::Blank(label))
    }

    fn string_literal(&mut self) -> PResult<Term> {
        let start = self.pos();
        self.bump(); // opening quote
        let mut lexical = String::new();
        loop {
            match self.peek() {
                None | Some('\n') | Some('\r') => {
                    return Err(self.error(start, ParseErrorCode::P002, "unterminated string"))
                }
                Some('"') => {
                    self.bump();
                    break;
                }
                Some('\\') => {
                    let escape_pos = self.pos();
                    self.bump();
                    let c = match self.peek() {
                        Some('"') => '"',
                        Some('\\') => '\\',
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        None => {
                            return Err(self.error(
                                start,
                                ParseErrorCode::P002,
                                "unterminated string",
                            ))
                        }
                        Some(other) => {
                            return Err(self.error(
                                escape_pos,
                                ParseErrorCode::P005,
                                format!("unsupported escape \\{other}"),
                            ))
                        }
                    };
                    self.bump();
                    lexical.push(c);
                }
                Some(c) => {
                    lexical.push(c);
                    self.bump();
                }
            }
        }
        match self.peek() {
            Some('@') => {
                let tag_pos = self.pos();
                self.bump();
                let tag = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                if !is_valid_lang_tag(&tag) {
                    return Err(self.error(
                        tag_pos,
                        ParseErrorCode::P005,
                        format!("invalid language tag {tag:?}"),
                    ));
                }
                Ok(Term::literal(Literal::lang(lexical, &tag).unwrap()))
            }
            Some('^') => {
                let caret = self.pos();
                self.bump();
                if self.peek() != Some('^') {
                    return Err(self.error(caret, ParseErrorCode::P005, "expected '^^'"));
                }
                self.bump();
                let datatype = match self.peek() {
                    Some('<') => self.iriref()?,
                    Some(c) if c.is_ascii_alphabetic() || c == ':' => {
                        match self.prefixed_name()? {
                            Term::Iri(iri) => iri,
                            _ => unreachable!(),
                        }
                    }
                    _ => return Err(self.unexpected(ParseErrorCode::P005, "datatype IRI")),
                };
                if !lexical_matches(datatype.as_str(), &lexical) {
                    return Err(self.error(
                        start,
                        ParseErrorCode::P005,
                        format!("{lexical:?} is not a valid <{datatype}> value"),
                    ));
                }
                Ok(Term::literal(Literal::typed(lexical, datatype)))
            }
            _ => Ok(Term::literal(Literal::plain(lexical))),
        }
    }

    fn number(&mut self) -> PResult<Term> {
        let start = self.pos();
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            text.push(sign);
            self.bump();
        }
        text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        let mut datatype = XSD_INTEGER;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            text.push('.');
            text.push_str(&self.take_while(|c| c.is_ascii_digit()));
            datatype = XSD_DECIMAL;
        }
        let well_formed = text.chars().any(|c| c.is_ascii_digit());
        if !well_formed || self.peek().is_some_and(|c| is_name_char(c) || c == ':') {
            return Err(self.error(
                start,
                ParseErrorCode::P005,
                format!("malformed number starting {text:?}"),
            ));
        }
        Ok(Term::literal(Literal::typed(
            text,
            Iri::new(datatype).unwrap(),
        )))
    }
}

pub(crate) fn is_integer_lexical(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}

pub(crate) fn is_decimal_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => {
            int.chars().all(|c| c.is_ascii_digit())
                && !frac.is_empty()
                && frac.chars().all(|c| c.is_ascii_digit())
        }
        None => false,
    }
}

pub(crate) fn is_date_lexical(s: &str) -> bool {
    s.len() == 10 && NaiveDate::parse_from_str(s, "%Y-%m-%d").is_ok()
}

/// Lexical validation for the natively supported datatypes; other datatypes
/// are carried opaquely.
fn lexical_matches(datatype: &str, lexical: &str) -> bool {
    match datatype {
        XSD_INTEGER => is_integer_lexical(lexical),
        XSD_DECIMAL => is_decimal_lexical(lexical) || is_integer_lexical(lexical),
        XSD_BOOLEAN => matches!(lexical, "true" | "false" | "1" | "0"),
        XSD_DATE => is_date_lexical(lexical),
        _ => true,
    }
}
