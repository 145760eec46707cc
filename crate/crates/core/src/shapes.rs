//! Declarative shape checking for trust graphs.
//!
//! Errors are structural (a required value is missing or has the wrong type).
//! Warnings (W201) flag trust categories the experts rated "must" or "should"
//! that the document does not describe at all; they never make a document
//! invalid.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::stad::{Term, TrustGraph};
use crate::vocab::{
    category_of, known_classes, terms, ClassRole, Range, Requirement, TrustCategory, VocabTerm,
    Vocabulary, XSD_BOOLEAN, XSD_DATE, XSD_DECIMAL, XSD_INTEGER,
};
use crate::stad::LiteralKind;

/// Categories rated at or below this (in tenths) are "must"/"should" signals.
pub const ADVISORY_RATING_THRESHOLD_TENTHS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequiredProperty {
    pub property: VocabTerm,
    pub range: Range,
    pub min: u32,
    pub max: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptionalProperty {
    pub property: VocabTerm,
    pub range: Range,
    pub max: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub target_class: VocabTerm,
    pub required: Vec<RequiredProperty>,
    pub optional: Vec<OptionalProperty>,
    /// Groups of optional properties of which at least one must be present.
    pub one_of: Vec<Vec<VocabTerm>>,
}

impl Shape {
    pub fn required_property(&self, property: VocabTerm) -> Option<&RequiredProperty> {
        self.required.iter().find(|r| r.property == property)
    }

    pub fn optional_property(&self, property: VocabTerm) -> Option<&OptionalProperty> {
        self.optional.iter().find(|r| r.property == property)
    }
}

/// One shape per vocabulary class that declares properties.
pub fn shape_table() -> Vec<Shape> {
    known_classes()
        .iter()
        .filter(|c| !c.properties.is_empty())
        .map(|class| {
            let mut shape = Shape {
                target_class: class.name,
                required: vec![],
                optional: vec![],
                one_of: vec![],
            };
            for p in &class.properties {
                match p.requirement {
                    Requirement::StructuralRequired => shape.required.push(RequiredProperty {
                        property: p.name,
                        range: p.range,
                        min: p.cardinality.min,
                        max: p.cardinality.max,
                    }),
                    Requirement::Advisory => shape.optional.push(OptionalProperty {
                        property: p.name,
                        range: p.range,
                        max: p.cardinality.max,
                    }),
                }
            }
            if class.name == terms::LEGAL_DATA {
                shape
                    .one_of
                    .push(vec![terms::VAT, terms::CRN, terms::LEI, terms::DUNS]);
            }
            shape
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FindingCode {
    /// missing required property
    E101,
    /// value outside the property's range
    E102,
    /// cardinality violation
    E103,
    /// reference to a node the graph does not describe
    E104,
    /// expert-rated must/should category absent
    W201,
}

impl FindingCode {
    pub fn is_error(self) -> bool {
        !matches!(self, FindingCode::W201)
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Finding {
    pub code: FindingCode,
    /// Node IRI, `_:label` for blank nodes.
    pub node: String,
    /// Property curie, absent for whole-node findings.
    pub property: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl ValidationReport {
    fn from_findings(mut findings: Vec<Finding>) -> Self {
        findings.sort();
        findings.dedup();
        let (errors, warnings): (Vec<_>, Vec<_>) =
            findings.into_iter().partition(|f| f.code.is_error());
        Self {
            valid: errors.is_empty(),
            errors,
            warnings,
        }
    }

    pub fn count(&self, code: FindingCode) -> usize {
        self.errors
            .iter()
            .chain(&self.warnings)
            .filter(|f| f.code == code)
            .count()
    }
}

fn node_name(term: &Term) -> String {
    match term {
        Term::Iri(iri) => iri.to_string(),
        Term::Blank(label) => format!("_:{label}"),
        Term::Literal(lit) => lit.lexical().to_string(),
    }
}

fn in_range(object: &Term, range: Range) -> bool {
    let typed = |dt: &str| object.as_literal().and_then(|l| l.datatype()) == Some(dt);
    match range {
        Range::String => matches!(
            object.as_literal().map(|l| l.kind()),
            Some(LiteralKind::Plain | LiteralKind::Lang(_))
        ),
        Range::Integer => typed(XSD_INTEGER),
        Range::Decimal => typed(XSD_DECIMAL) || typed(XSD_INTEGER),
        Range::Date => typed(XSD_DATE),
        Range::Boolean => typed(XSD_BOOLEAN),
        Range::Resource => matches!(object, Term::Iri(_)),
        Range::Enum(values) => object.as_literal().is_some_and(|l| {
            matches!(l.kind(), LiteralKind::Plain) && values.contains(&l.lexical())
        }),
        Range::Class(_) => object.is_node(),
    }
}

/// Validates with the standard vocabulary.
pub fn validate_graph(graph: &TrustGraph) -> ValidationReport {
    validate_graph_with(Vocabulary::standard(), graph)
}

pub fn validate_graph_with(vocab: &Vocabulary, graph: &TrustGraph) -> ValidationReport {
    let shapes: BTreeMap<VocabTerm, Shape> = shape_table()
        .into_iter()
        .map(|s| (s.target_class, s))
        .collect();

    let mut described: HashSet<&Term> = HashSet::new();
    let mut by_subject: BTreeMap<&Term, BTreeMap<&str, Vec<&Term>>> = BTreeMap::new();
    let mut types: BTreeMap<&Term, BTreeSet<VocabTerm>> = BTreeMap::new();
    for t in graph {
        described.insert(t.subject());
        by_subject
            .entry(t.subject())
            .or_default()
            .entry(t.predicate_iri())
            .or_default()
            .push(t.object());
        if t.is_type() {
            if let Some(class) = t.object().as_iri().and_then(|i| vocab.term_for(i)) {
                types.entry(t.subject()).or_default().insert(class);
            }
        }
    }

    let mut findings = Vec::new();
    let no_values: BTreeMap<&str, Vec<&Term>> = BTreeMap::new();
    for (node, classes) in &types {
        let values = by_subject.get(node).unwrap_or(&no_values);
        for class in classes {
            let Some(shape) = shapes.get(class) else {
                continue;
            };
            let finding = |code, property: Option<VocabTerm>, message: String| Finding {
                code,
                node: node_name(node),
                property: property.map(|p| p.curie()),
                message,
            };
            let checks = shape
                .required
                .iter()
                .map(|r| (r.property, r.range, r.min, r.max))
                .chain(shape.optional.iter().map(|o| (o.property, o.range, 0, o.max)));
            for (property, range, min, max) in checks {
                let objects = values
                    .get(vocab.iri(property).as_str())
                    .map(Vec::as_slice)
                    .unwrap_or(&[]);
                for object in objects {
                    if !in_range(object, range) {
                        findings.push(finding(
                            FindingCode::E102,
                            Some(property),
                            format!("{class} {property} expects {range}, found {object}"),
                        ));
                    } else if matches!(range, Range::Class(_)) && !described.contains(object) {
                        findings.push(finding(
                            FindingCode::E104,
                            Some(property),
                            format!("{class} {property} points to {object}, which is not described"),
                        ));
                    }
                }
                let count = objects.len() as u32;
                if count == 0 && min > 0 {
                    findings.push(finding(
                        FindingCode::E101,
                        Some(property),
                        format!("{class} requires {property}"),
                    ));
                } else if count < min || max.is_some_and(|m| count > m) {
                    let bound = match max {
                        Some(m) => format!("{min}..{m}"),
                        None => format!("{min}..*"),
                    };
                    findings.push(finding(
                        FindingCode::E103,
                        Some(property),
                        format!("{class} {property} has {count} values, allowed {bound}"),
                    ));
                }
            }
            for group in &shape.one_of {
                let present = group
                    .iter()
                    .any(|p| values.contains_key(vocab.iri(*p).as_str()));
                if !present {
                    let names: Vec<String> = group.iter().map(|p| p.curie()).collect();
                    findings.push(finding(
                        FindingCode::E101,
                        None,
                        format!("{class} requires one of {}", names.join(", ")),
                    ));
                }
            }
        }
    }

    let provider_node = types
        .iter()
        .find(|(_, c)| c.contains(&terms::PROVIDER))
        .map(|(n, _)| node_name(n))
        .unwrap_or_default();
    let mut present: BTreeSet<TrustCategory> = BTreeSet::new();
    for classes in types.values() {
        for class in classes {
            if let Some(category) = category_of(&class.curie()) {
                present.insert(category);
            }
        }
    }
    for category in TrustCategory::ALL {
        if category.is_document_sourced()
            && category.expert_rating_tenths() <= ADVISORY_RATING_THRESHOLD_TENTHS
            && !present.contains(&category)
        {
            let rating = category.expert_rating_tenths();
            findings.push(Finding {
                code: FindingCode::W201,
                node: provider_node.clone(),
                property: None,
                message: format!(
                    "no {category} content; experts rated it {}.{} (must/should)",
                    rating / 10,
                    rating % 10
                ),
            });
        }
    }

    ValidationReport::from_findings(findings)
}

/// Classes whose instances count toward `category`.
pub fn classes_for(category: TrustCategory) -> Vec<VocabTerm> {
    known_classes()
        .iter()
        .filter(|c| c.role == ClassRole::Content(category))
        .map(|c| c.name)
        .collect()
}
