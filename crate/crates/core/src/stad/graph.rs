use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::vocab::{Iri, PrefixTable, VocabError, RDF_TYPE, XSD_STRING};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error(transparent)]
    Iri(#[from] VocabError),
    #[error("invalid blank node label {0:?}")]
    BlankLabel(String),
    #[error("invalid language tag {0:?}")]
    LanguageTag(String),
    #[error("triple subject must be an IRI or blank node")]
    LiteralSubject,
    #[error("triple predicate must be an IRI")]
    NonIriPredicate,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiteralKind {
    Plain,
    Lang(String),
    Typed(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    kind: LiteralKind,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Self {
            lexical: lexical.into(),
            kind: LiteralKind::Plain,
        }
    }

    pub fn lang(lexical: impl Into<String>, tag: &str) -> Result<Self, TermError> {
        if !is_valid_lang_tag(tag) {
            return Err(TermError::LanguageTag(tag.to_string()));
        }
        Ok(Self {
            lexical: lexical.into(),
            kind: LiteralKind::Lang(tag.to_string()),
        })
    }

    /// Typed literal. `xsd:string` literals are stored as plain literals.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        let kind = if datatype.as_str() == XSD_STRING {
            LiteralKind::Plain
        } else {
            LiteralKind::Typed(datatype)
        };
        Self {
            lexical: lexical.into(),
            kind,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn kind(&self) -> &LiteralKind {
        &self.kind
    }

    pub fn datatype(&self) -> Option<&str> {
        match &self.kind {
            LiteralKind::Typed(dt) => Some(dt.as_str()),
            _ => None,
        }
    }
}

/// `[A-Za-z][A-Za-z0-9_]*`
pub fn is_valid_blank_label(label: &str) -> bool {
    let mut chars = label.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `[a-zA-Z]{1,8}(-[a-zA-Z0-9]{1,8})*`
pub fn is_valid_lang_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    let first_ok =
        (1..=8).contains(&first.len()) && first.chars().all(|c| c.is_ascii_alphabetic());
    first_ok
        && parts.all(|p| (1..=8).contains(&p.len()) && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, TermError> {
        Ok(Term::Iri(Iri::new(value)?))
    }

    pub fn blank(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        if is_valid_blank_label(&label) {
            Ok(Term::Blank(label))
        } else {
            Err(TermError::BlankLabel(label))
        }
    }

    pub fn literal(literal: Literal) -> Self {
        Term::Literal(literal)
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri.as_str()),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_node(&self) -> bool {
        !matches!(self, Term::Literal(_))
    }
}

pub(crate) fn escape_string(value: &str, out: &mut String) {
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
}

/// N-Triples style rendering with full IRIs.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal(lit) => {
                let mut quoted = String::with_capacity(lit.lexical.len() + 2);
                quoted.push('"');
                escape_string(&lit.lexical, &mut quoted);
                quoted.push('"');
                match &lit.kind {
                    LiteralKind::Plain => f.write_str(&quoted),
                    LiteralKind::Lang(tag) => write!(f, "{quoted}@{tag}"),
                    LiteralKind::Typed(dt) => write!(f, "{quoted}^^<{dt}>"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, TermError> {
        if !subject.is_node() {
            return Err(TermError::LiteralSubject);
        }
        if !matches!(predicate, Term::Iri(_)) {
            return Err(TermError::NonIriPredicate);
        }
        Ok(Self {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Term {
        &self.predicate
    }

    pub fn predicate_iri(&self) -> &str {
        self.predicate.as_iri().expect("predicates are IRIs")
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn is_type(&self) -> bool {
        self.predicate_iri() == RDF_TYPE
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A set of triples plus the prefix table used to read or write them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrustGraph {
    triples: BTreeSet<Triple>,
    prefixes: PrefixTable,
}

impl TrustGraph {
    pub fn new(prefixes: PrefixTable) -> Self {
        Self {
            triples: BTreeSet::new(),
            prefixes,
        }
    }

    pub fn prefixes(&self) -> &PrefixTable {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixTable {
        &mut self.prefixes
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn retain(&mut self, keep: impl FnMut(&Triple) -> bool) {
        self.triples.retain(keep);
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    /// Triple-set equality, ignoring prefixes.
    pub fn same_triples(&self, other: &TrustGraph) -> bool {
        self.triples == other.triples
    }

    /// True when `node` is the subject of at least one triple.
    pub fn describes(&self, node: &Term) -> bool {
        self.triples.iter().any(|t| &t.subject == node)
    }
}

impl<'a> IntoIterator for &'a TrustGraph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;
    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}
