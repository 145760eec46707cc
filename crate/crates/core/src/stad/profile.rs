//! Typed projection of a trust graph onto the provider profile.
//!
//! Content nodes are found by their `rdf:type`; structural nodes (KPIs,
//! systems, transactions) are reached through the links of the node that
//! owns them. Nodes that lack a required value are skipped, and unknown
//! classes and properties are ignored.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::graph::{Term, Triple, TrustGraph};
use crate::vocab::{terms, VocabTerm, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("document describes no usdl:Provider node")]
    NoProvider,
    #[error("document describes {} usdl:Provider nodes: {}", .0.len(), .0.join(", "))]
    MultipleProviders(Vec<String>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LegalData {
    pub vat: Option<String>,
    pub crn: Option<String>,
    pub lei: Option<String>,
    pub duns: Option<String>,
    pub legal_form: Option<String>,
    pub licenses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kpi {
    pub name: String,
    pub value: f64,
    pub unit: Option<String>,
    pub year: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    Machine,
    Software,
    Quality,
    Organizational,
}

impl SystemKind {
    fn parse(value: &str) -> Option<Self> {
        Some(match value {
            "machine" => SystemKind::Machine,
            "software" => SystemKind::Software,
            "quality" => SystemKind::Quality,
            "organizational" => SystemKind::Organizational,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProviderSystem {
    pub name: String,
    pub kind: Option<SystemKind>,
    pub manufacturer: Option<String>,
    pub image: Option<String>,
    pub description: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Facility {
    pub address: String,
    pub image: Option<String>,
    pub kpis: Vec<Kpi>,
    pub organization: Option<String>,
    pub systems: Vec<ProviderSystem>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Employee {
    pub name: String,
    pub job_title: Option<String>,
    pub honorific_prefix: Option<String>,
    pub email: Option<String>,
    pub telephone: Option<String>,
    pub image: Option<String>,
    pub expertise: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransactionRef {
    pub id: String,
    pub date: NaiveDate,
    pub confidential: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CustomerReference {
    pub customer_name: Option<String>,
    pub customer_logo: Option<String>,
    pub product_image: Option<String>,
    pub product_description: Option<String>,
    pub transaction: Option<TransactionRef>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub standard: String,
    pub issuer: Option<String>,
    pub document: Option<String>,
    pub description: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Partner {
    pub name: String,
    pub logo: Option<String>,
    pub description: Option<String>,
    pub social_network: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PublicationKind {
    SuccessStory,
    CompanyEvent,
    ResearchPaper,
    Newsfeed,
}

impl PublicationKind {
    fn parse(value: &str) -> Option<Self> {
        Some(match value {
            "success-story" => PublicationKind::SuccessStory,
            "company-event" => PublicationKind::CompanyEvent,
            "research-paper" => PublicationKind::ResearchPaper,
            "newsfeed" => PublicationKind::Newsfeed,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PublicationSource {
    Professional,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Publication {
    pub title: String,
    pub kind: PublicationKind,
    pub source: Option<PublicationSource>,
    pub link: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermsKind {
    General,
    Delivery,
    Purchasing,
    Sales,
    Policy,
}

impl TermsKind {
    fn parse(value: &str) -> Option<Self> {
        Some(match value {
            "general" => TermsKind::General,
            "delivery" => TermsKind::Delivery,
            "purchasing" => TermsKind::Purchasing,
            "sales" => TermsKind::Sales,
            "policy" => TermsKind::Policy,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermsDocument {
    Link(String),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermsDoc {
    pub kind: Option<TermsKind>,
    pub document: Option<TermsDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderWebsite {
    pub url: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderProfile {
    /// The provider node: an IRI, or `_:label` for a blank node.
    pub provider_id: String,
    pub name: Option<String>,
    pub legal: Option<LegalData>,
    pub facilities: Vec<Facility>,
    pub employees: Vec<Employee>,
    pub references: Vec<CustomerReference>,
    pub certifications: Vec<Certification>,
    pub partners: Vec<Partner>,
    pub publications: Vec<Publication>,
    pub terms: Vec<TermsDoc>,
    pub website: Option<ProviderWebsite>,
}

impl ProviderProfile {
    /// A profile with no trust content at all.
    pub fn empty(provider_id: impl Into<String>) -> Self {
        Self {
            provider_id: provider_id.into(),
            name: None,
            legal: None,
            facilities: vec![],
            employees: vec![],
            references: vec![],
            certifications: vec![],
            partners: vec![],
            publications: vec![],
            terms: vec![],
            website: None,
        }
    }

    /// Every transaction linked from a reference.
    pub fn transactions(&self) -> Vec<TransactionRef> {
        self.references
            .iter()
            .filter_map(|r| r.transaction.clone())
            .collect()
    }
}

fn node_id(term: &Term) -> String {
    match term {
        Term::Iri(iri) => iri.to_string(),
        Term::Blank(label) => format!("_:{label}"),
        Term::Literal(lit) => lit.lexical().to_string(),
    }
}

struct Index<'g> {
    vocab: &'g Vocabulary,
    by_subject: BTreeMap<&'g Term, Vec<&'g Triple>>,
    types: BTreeMap<&'g Term, BTreeSet<VocabTerm>>,
}

impl<'g> Index<'g> {
    fn new(graph: &'g TrustGraph, vocab: &'g Vocabulary) -> Self {
        let mut by_subject: BTreeMap<&Term, Vec<&Triple>> = BTreeMap::new();
        let mut types: BTreeMap<&Term, BTreeSet<VocabTerm>> = BTreeMap::new();
        for triple in graph {
            by_subject.entry(triple.subject()).or_default().push(triple);
            if triple.is_type() {
                if let Some(class) = triple.object().as_iri().and_then(|i| vocab.term_for(i)) {
                    types.entry(triple.subject()).or_default().insert(class);
                }
            }
        }
        Self {
            vocab,
            by_subject,
            types,
        }
    }

    fn instances(&self, class: VocabTerm) -> Vec<&'g Term> {
        self.types
            .iter()
            .filter(|(_, classes)| classes.contains(&class))
            .map(|(node, _)| *node)
            .collect()
    }

    fn has_type(&self, node: &Term, class: VocabTerm) -> bool {
        self.types.get(node).is_some_and(|c| c.contains(&class))
    }

    fn objects(&self, node: &Term, property: VocabTerm) -> impl Iterator<Item = &'g Term> + '_ {
        let iri = self.vocab.iri(property);
        self.by_subject
            .get(node)
            .into_iter()
            .flatten()
            .filter(move |t| t.predicate_iri() == iri)
            .map(|t| t.object())
    }

    fn strings(&self, node: &Term, property: VocabTerm) -> Vec<String> {
        self.objects(node, property)
            .filter_map(|o| o.as_literal().map(|l| l.lexical().to_string()))
            .collect()
    }

    fn string(&self, node: &Term, property: VocabTerm) -> Option<String> {
        self.strings(node, property).into_iter().next()
    }

    fn iri(&self, node: &Term, property: VocabTerm) -> Option<String> {
        self.objects(node, property)
            .find_map(|o| o.as_iri().map(str::to_string))
    }

    fn links(&self, node: &Term, property: VocabTerm) -> Vec<&'g Term> {
        self.objects(node, property).filter(|o| o.is_node()).collect()
    }
}

/// Projects `graph` with the standard vocabulary.
pub fn extract_profile(graph: &TrustGraph) -> Result<ProviderProfile, ExtractError> {
    extract_profile_with(Vocabulary::standard(), graph)
}

pub fn extract_profile_with(
    vocab: &Vocabulary,
    graph: &TrustGraph,
) -> Result<ProviderProfile, ExtractError> {
    let ix = Index::new(graph, vocab);
    let providers = ix.instances(terms::PROVIDER);
    let provider = match providers.as_slice() {
        [] => return Err(ExtractError::NoProvider),
        [one] => *one,
        many => return Err(ExtractError::MultipleProviders(many.iter().map(|t| node_id(t)).collect())),
    };

    let confidential: HashSet<&Term> = ix
        .instances(terms::CONFIDENTIALITY_AGREEMENT)
        .into_iter()
        .flat_map(|agreement| ix.links(agreement, terms::APPLIES_TO_TRANSACTION))
        .collect();

    let legal = ix.instances(terms::LEGAL_DATA).first().map(|node| LegalData {
        vat: ix.string(node, terms::VAT),
        crn: ix.string(node, terms::CRN),
        lei: ix.string(node, terms::LEI),
        duns: ix.string(node, terms::DUNS),
        legal_form: ix.string(node, terms::LEGAL_FORM),
        licenses: ix.strings(node, terms::LICENSE),
    });

    let system = |node: &Term| -> Option<ProviderSystem> {
        Some(ProviderSystem {
            name: ix.string(node, terms::NAME)?,
            kind: ix
                .string(node, terms::SYSTEM_KIND)
                .and_then(|k| SystemKind::parse(&k)),
            manufacturer: ix.string(node, terms::MANUFACTURER),
            image: ix.iri(node, terms::IMAGE),
            description: ix.string(node, terms::DESCRIPTION),
        })
    };

    let kpi = |node: &Term| -> Option<Kpi> {
        Some(Kpi {
            name: ix.string(node, terms::NAME)?,
            value: ix.string(node, terms::VALUE)?.parse().ok()?,
            unit: ix.string(node, terms::UNIT_TEXT),
            year: ix
                .string(node, terms::REFERENCE_YEAR)
                .and_then(|y| y.parse().ok()),
        })
    };

    let facilities = ix
        .instances(terms::FACILITY)
        .into_iter()
        .filter_map(|node| {
            Some(Facility {
                address: ix.string(node, terms::ADDRESS)?,
                image: ix.iri(node, terms::HAS_IMAGE),
                kpis: ix
                    .links(node, terms::HAS_KPI)
                    .into_iter()
                    .filter(|k| ix.has_type(k, terms::KPI))
                    .filter_map(kpi)
                    .collect(),
                organization: ix.iri(node, terms::BELONGS_TO_ORGANIZATION),
                systems: ix
                    .links(node, terms::HAS_SYSTEM)
                    .into_iter()
                    .filter(|s| ix.has_type(s, terms::PROVIDER_SYSTEM))
                    .filter_map(system)
                    .collect(),
            })
        })
        .collect();

    let employees = ix
        .instances(terms::EMPLOYEE)
        .into_iter()
        .filter_map(|node| {
            Some(Employee {
                name: ix.string(node, terms::NAME)?,
                job_title: ix.string(node, terms::JOB_TITLE),
                honorific_prefix: ix.string(node, terms::HONORIFIC_PREFIX),
                email: ix.string(node, terms::EMAIL),
                telephone: ix.string(node, terms::TELEPHONE),
                image: ix.iri(node, terms::IMAGE),
                expertise: ix.string(node, terms::KNOWS_ABOUT),
            })
        })
        .collect();

    let references = ix
        .instances(terms::CUSTOMER_REFERENCE)
        .into_iter()
        .filter_map(|node| {
            let transaction = match ix.links(node, terms::HAS_TRANSACTION).first() {
                None => None,
                // a link that cannot be resolved to a dated transaction drops
                // the reference rather than risk publishing a covered one
                Some(tx) => {
                    let date = ix
                        .string(tx, terms::TRANSACTION_DATE)
                        .and_then(|d| NaiveDate::parse_from_str(&d, "%Y-%m-%d").ok())?;
                    Some(TransactionRef {
                        id: node_id(tx),
                        date,
                        confidential: confidential.contains(tx),
                    })
                }
            };
            Some(CustomerReference {
                customer_name: ix.string(node, terms::CUSTOMER_NAME),
                customer_logo: ix.iri(node, terms::LOGO),
                product_image: ix.iri(node, terms::PRODUCT_IMAGE),
                product_description: ix.string(node, terms::PRODUCT_DESCRIPTION),
                transaction,
            })
        })
        .collect();

    let certifications = ix
        .instances(terms::CERTIFICATION)
        .into_iter()
        .filter_map(|node| {
            Some(Certification {
                standard: ix.string(node, terms::STANDARD)?,
                issuer: ix.string(node, terms::ISSUER),
                document: ix.iri(node, terms::CERTIFICATE_DOCUMENT),
                description: ix.string(node, terms::DESCRIPTION),
            })
        })
        .collect();

    let partners = ix
        .instances(terms::PARTNER)
        .into_iter()
        .filter_map(|node| {
            Some(Partner {
                name: ix.string(node, terms::NAME)?,
                logo: ix.iri(node, terms::LOGO),
                description: ix.string(node, terms::DESCRIPTION),
                social_network: ix.iri(node, terms::SOCIAL_NETWORK),
            })
        })
        .collect();

    let publications = ix
        .instances(terms::PUBLICATION)
        .into_iter()
        .filter_map(|node| {
            Some(Publication {
                title: ix.string(node, terms::TITLE)?,
                kind: PublicationKind::parse(&ix.string(node, terms::PUBLICATION_KIND)?)?,
                source: ix
                    .string(node, terms::PUBLICATION_SOURCE)
                    .and_then(|s| match s.as_str() {
                        "professional" => Some(PublicationSource::Professional),
                        "internal" => Some(PublicationSource::Internal),
                        _ => None,
                    }),
                link: ix.iri(node, terms::URL),
            })
        })
        .collect();

    let terms_docs = ix
        .instances(terms::TERMS)
        .into_iter()
        .map(|node| TermsDoc {
            kind: ix
                .string(node, terms::TERMS_KIND)
                .and_then(|k| TermsKind::parse(&k)),
            document: ix
                .iri(node, terms::TERMS_DOCUMENT)
                .map(TermsDocument::Link)
                .or_else(|| ix.string(node, terms::TERMS_TEXT).map(TermsDocument::Text)),
        })
        .collect();

    let website = ix
        .instances(terms::PROVIDER_WEBSITE)
        .into_iter()
        .find_map(|node| ix.iri(node, terms::URL).map(|url| ProviderWebsite { url }));

    Ok(ProviderProfile {
        provider_id: node_id(provider),
        name: ix.string(provider, terms::NAME),
        legal,
        facilities,
        employees,
        references,
        certifications,
        partners,
        publications,
        terms: terms_docs,
        website,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stad::parse_document;

    const HEAD: &str = "@prefix usdl: <https://vocab.example.org/usdl#> .\n\
        @prefix usdl-trust: <https://vocab.example.org/usdl-trust#> .\n\
        @prefix schema: <https://schema.org/> .\n\
        @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\
        @prefix ex: <http://p.example/> .\n";

    fn profile(body: &str) -> Result<ProviderProfile, ExtractError> {
        extract_profile(&parse_document(&format!("{HEAD}{body}")).unwrap())
    }

    #[test]
    fn provider_without_content() {
        let p = profile("ex:p a usdl:Provider .").unwrap();
        assert_eq!(p, ProviderProfile::empty("http://p.example/p"));
    }

    #[test]
    fn provider_count_is_checked() {
        assert_eq!(profile("ex:x schema:name \"x\" ."), Err(ExtractError::NoProvider));
        assert!(matches!(
            profile("ex:p a usdl:Provider . ex:q a usdl:Provider ."),
            Err(ExtractError::MultipleProviders(ids)) if ids.len() == 2
        ));
    }

    #[test]
    fn confidential_flag_follows_agreement_link() {
        let p = profile(
            "ex:p a usdl:Provider .\n\
             ex:r1 a usdl-trust:CustomerReference ; usdl-trust:hasTransaction ex:t1 .\n\
             ex:r2 a usdl-trust:CustomerReference ; usdl-trust:hasTransaction ex:t2 .\n\
             ex:t1 a usdl-trust:Transaction ; usdl-trust:transactionDate \"2019-01-01\"^^xsd:date .\n\
             ex:t2 a usdl-trust:Transaction ; usdl-trust:transactionDate \"2019-02-01\"^^xsd:date .\n\
             ex:nda a usdl-trust:ConfidentialityAgreement ; usdl-trust:appliesToTransaction ex:t2 .\n",
        )
        .unwrap();
        let flags: Vec<_> = p
            .references
            .iter()
            .map(|r| r.transaction.as_ref().unwrap().confidential)
            .collect();
        assert_eq!(flags, vec![false, true]);
    }

    #[test]
    fn unknown_terms_are_ignored() {
        let p = profile(
            "ex:p a usdl:Provider ; ex:shoeSize 44 .\n\
             ex:thing a ex:Widget ; schema:name \"w\" .\n",
        )
        .unwrap();
        assert_eq!(p, ProviderProfile::empty("http://p.example/p"));
    }

    #[test]
    fn kpis_and_systems_are_reached_through_facility() {
        let p = profile(
            "ex:p a usdl:Provider .\n\
             ex:f a usdl-trust:Facility ; usdl-trust:address \"Main St 1\" ;\n\
                 usdl-trust:hasKPI _:k ; usdl-trust:hasSystem ex:s .\n\
             _:k a usdl-trust:KPI ; schema:name \"area\" ; schema:value 12.5 .\n\
             ex:s a usdl-trust:ProviderSystem ; schema:name \"Mill\" ; usdl-trust:systemKind \"machine\" .\n",
        )
        .unwrap();
        let f = &p.facilities[0];
        assert_eq!(f.kpis[0].value, 12.5);
        assert_eq!(f.systems[0].kind, Some(SystemKind::Machine));
    }
}
