//! Canonical STAD output.
//!
//! Prefix directives come first, sorted by label. Each triple is written as
//! its own statement, sorted by (subject, predicate, object) on expanded
//! IRIs. Blank nodes are relabeled `_:b0`, `_:b1`, ... in order of first
//! appearance; relabeling and sorting repeat until the labeling is stable, so
//! serializing the parsed output reproduces it byte for byte.

use std::cmp::Ordering;
use std::collections::HashMap;

use sha2::{Digest, Sha256};

use super::graph::{escape_string, LiteralKind, Term, Triple, TrustGraph};
use super::parser::{is_decimal_lexical, is_integer_lexical};
use crate::vocab::{PrefixTable, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER};

fn kind_rank(term: &Term) -> u8 {
    match term {
        Term::Iri(_) => 0,
        Term::Blank(_) => 1,
        Term::Literal(_) => 2,
    }
}

/// Canonical term order. Blank labels compare by length first so that
/// `b2 < b10`.
fn cmp_term(a: &Term, b: &Term) -> Ordering {
    match (a, b) {
        (Term::Iri(x), Term::Iri(y)) => x.as_str().cmp(y.as_str()),
        (Term::Blank(x), Term::Blank(y)) => x.len().cmp(&y.len()).then_with(|| x.cmp(y)),
        (Term::Literal(x), Term::Literal(y)) => x
            .lexical()
            .cmp(y.lexical())
            .then_with(|| x.kind().cmp(y.kind())),
        _ => kind_rank(a).cmp(&kind_rank(b)),
    }
}

fn cmp_triple(a: &Triple, b: &Triple) -> Ordering {
    cmp_term(a.subject(), b.subject())
        .then_with(|| cmp_term(a.predicate(), b.predicate()))
        .then_with(|| cmp_term(a.object(), b.object()))
}

fn relabel(term: &Term, labels: &mut HashMap<String, String>) -> Term {
    match term {
        Term::Blank(label) => {
            let next = labels.len();
            let new = labels
                .entry(label.clone())
                .or_insert_with(|| format!("b{next}"));
            Term::Blank(new.clone())
        }
        other => other.clone(),
    }
}

/// Triples in canonical order with canonical blank labels.
pub fn canonical_triples(graph: &TrustGraph) -> Vec<Triple> {
    let mut triples: Vec<Triple> = graph.iter().cloned().collect();
    let blank_count = {
        let mut labels = std::collections::HashSet::new();
        for t in &triples {
            for term in [t.subject(), t.object()] {
                if let Term::Blank(label) = term {
                    labels.insert(label.clone());
                }
            }
        }
        labels.len()
    };
    // Each pass either leaves labels unchanged or settles at least the first
    // differing label; the bound is never hit in practice.
    for _ in 0..=blank_count + 1 {
        triples.sort_by(cmp_triple);
        let mut labels = HashMap::new();
        let relabeled: Vec<Triple> = triples
            .iter()
            .map(|t| {
                Triple::new(
                    relabel(t.subject(), &mut labels),
                    t.predicate().clone(),
                    relabel(t.object(), &mut labels),
                )
                .expect("relabeling keeps term positions")
            })
            .collect();
        let stable = labels.iter().all(|(old, new)| old == new);
        triples = relabeled;
        if stable {
            break;
        }
    }
    triples.sort_by(cmp_triple);
    triples
}

/// True when a local name can be written after `prefix:` and read back
/// unchanged.
fn is_writable_local(local: &str) -> bool {
    let mut chars = local.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    (first.is_ascii_alphanumeric() || first == '_')
        && local
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !local.ends_with('.')
}

struct Writer<'a> {
    prefixes: Vec<(&'a str, &'a str)>,
}

impl<'a> Writer<'a> {
    fn new(table: &'a PrefixTable) -> Self {
        let mut prefixes: Vec<(&str, &str)> =
            table.iter().map(|(l, iri)| (l, iri.as_str())).collect();
        // longest namespace wins; ties go to the smallest label
        prefixes.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(b.0)));
        Self { prefixes }
    }

    fn iri(&self, iri: &str, out: &mut String) {
        for (label, namespace) in &self.prefixes {
            if let Some(local) = iri.strip_prefix(namespace) {
                if is_writable_local(local) {
                    out.push_str(label);
                    out.push(':');
                    out.push_str(local);
                    return;
                }
            }
        }
        out.push('<');
        out.push_str(iri);
        out.push('>');
    }

    fn term(&self, term: &Term, out: &mut String) {
        match term {
            Term::Iri(iri) => self.iri(iri.as_str(), out),
            Term::Blank(label) => {
                out.push_str("_:");
                out.push_str(label);
            }
            Term::Literal(lit) => {
                let lexical = lit.lexical();
                match lit.kind() {
                    LiteralKind::Typed(dt) => {
                        let bare = match dt.as_str() {
                            XSD_INTEGER => is_integer_lexical(lexical),
                            XSD_DECIMAL => is_decimal_lexical(lexical),
                            XSD_BOOLEAN => matches!(lexical, "true" | "false"),
                            _ => false,
                        };
                        if bare {
                            out.push_str(lexical);
                        } else {
                            self.quoted(lexical, out);
                            out.push_str("^^");
                            self.iri(dt.as_str(), out);
                        }
                    }
                    LiteralKind::Lang(tag) => {
                        self.quoted(lexical, out);
                        out.push('@');
                        out.push_str(tag);
                    }
                    LiteralKind::Plain => self.quoted(lexical, out),
                }
            }
        }
    }

    fn quoted(&self, value: &str, out: &mut String) {
        out.push('"');
        escape_string(value, out);
        out.push('"');
    }
}

/// Deterministic canonical serialization of a graph.
pub fn serialize_graph(graph: &TrustGraph) -> String {
    let mut out = String::new();
    for (label, iri) in graph.prefixes().iter() {
        out.push_str(&format!("@prefix {label}: <{iri}> .\n"));
    }
    let triples = canonical_triples(graph);
    if !triples.is_empty() {
        out.push('\n');
    }
    let writer = Writer::new(graph.prefixes());
    for t in &triples {
        writer.term(t.subject(), &mut out);
        out.push(' ');
        if t.predicate_iri() == RDF_TYPE {
            out.push('a');
        } else {
            writer.term(t.predicate(), &mut out);
        }
        out.push(' ');
        writer.term(t.object(), &mut out);
        out.push_str(" .\n");
    }
    out
}

/// Content address of a graph: the first 16 hex characters of the SHA-256
/// digest of its canonical serialization.
pub fn content_id(graph: &TrustGraph) -> String {
    let digest = Sha256::digest(serialize_graph(graph).as_bytes());
    hex::encode(digest)[..16].to_string()
}

/// True when both graphs have the same triples once blank nodes are
/// canonically relabeled.
pub fn equal_up_to_blank_relabeling(a: &TrustGraph, b: &TrustGraph) -> bool {
    a.len() == b.len() && canonical_triples(a) == canonical_triples(b)
}
