//! The usdl-Trust vocabulary: namespaces, classes and properties.
//!
//! Everything downstream (parser prefixes, shape table, profile projection,
//! scoring categories) resolves its terms through this module.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Base under which the placeholder namespaces for the extended vocabularies live.
pub const PLACEHOLDER_BASE: &str = "https://vocab.example.org/";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("invalid IRI {0:?}")]
    InvalidIri(String),
    #[error("invalid prefix label {0:?}")]
    InvalidPrefix(String),
    #[error("namespace {iri} is bound to both {first:?} and {second:?}")]
    DuplicateNamespace {
        iri: String,
        first: String,
        second: String,
    },
    #[error("prefix table is missing required prefix {0:?}")]
    MissingPrefix(String),
}

/// An absolute IRI (`scheme://...`) or a well-formed URN.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, VocabError> {
        let value = value.into();
        if is_valid_iri(&value) {
            Ok(Self(value))
        } else {
            Err(VocabError::InvalidIri(value))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl TryFrom<String> for Iri {
    type Error = VocabError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> Self {
        iri.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Characters that may never appear inside an IRI reference.
pub(crate) fn is_forbidden_iri_char(c: char) -> bool {
    c.is_whitespace()
        || c.is_control()
        || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

fn is_valid_iri(value: &str) -> bool {
    if value.is_empty() || value.chars().any(is_forbidden_iri_char) {
        return false;
    }
    if let Some(rest) = value.strip_prefix("urn:") {
        let Some((nid, nss)) = rest.split_once(':') else {
            return false;
        };
        let nid_ok = !nid.is_empty()
            && nid.len() <= 32
            && nid.chars().next().is_some_and(|c| c.is_ascii_alphanumeric())
            && nid.chars().all(|c| c.is_ascii_alphanumeric() || c == '-');
        return nid_ok && !nss.is_empty();
    }
    match value.split_once("://") {
        Some((scheme, _)) => {
            let mut chars = scheme.chars();
            chars.next().is_some_and(|c| c.is_ascii_alphabetic())
                && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        }
        None => false,
    }
}

/// Prefix labels usable in STAD documents: empty, or `[A-Za-z][A-Za-z0-9_-]*`.
pub fn is_valid_prefix_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        None => true,
        Some(c) => {
            c.is_ascii_alphabetic()
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        }
    }
}

/// Prefix labels every vocabulary table must bind.
pub const REQUIRED_PREFIXES: [&str; 9] = [
    "usdl",
    "usdl-trust",
    "tao",
    "foaf",
    "schema",
    "gr",
    "dc",
    "xsd",
    "rdf",
];

pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const XSD_DATE: &str = "http://www.w3.org/2001/XMLSchema#date";

/// Map from prefix label to namespace IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixTable {
    entries: BTreeMap<String, Iri>,
}

impl PrefixTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `label` to `namespace`, replacing any earlier binding of the label.
    pub fn insert(&mut self, label: impl Into<String>, namespace: Iri) -> Result<(), VocabError> {
        let label = label.into();
        if !is_valid_prefix_label(&label) {
            return Err(VocabError::InvalidPrefix(label));
        }
        self.entries.insert(label, namespace);
        Ok(())
    }

    pub fn lookup(&self, label: &str) -> Option<&Iri> {
        self.entries.get(label)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in ascending label order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Returns a copy with `label` rebound to `namespace`.
    pub fn with_override(mut self, label: &str, namespace: Iri) -> Result<Self, VocabError> {
        self.insert(label, namespace)?;
        Ok(self)
    }

    /// Checks the vocabulary-table invariants: all required prefixes bound and
    /// no namespace bound twice.
    pub fn check_vocabulary(&self) -> Result<(), VocabError> {
        for required in REQUIRED_PREFIXES {
            if !self.entries.contains_key(required) {
                return Err(VocabError::MissingPrefix(required.to_string()));
            }
        }
        let mut seen: HashMap<&str, &str> = HashMap::new();
        for (label, iri) in &self.entries {
            if let Some(first) = seen.insert(iri.as_str(), label) {
                return Err(VocabError::DuplicateNamespace {
                    iri: iri.to_string(),
                    first: first.to_string(),
                    second: label.clone(),
                });
            }
        }
        Ok(())
    }
}

/// The nine-entry default table. `usdl`, `usdl-trust` and `tao` are
/// placeholders under [`PLACEHOLDER_BASE`]; override them with
/// [`PrefixTable::with_override`] and build a [`Vocabulary`] from the result.
pub fn default_namespace_table() -> PrefixTable {
    let entries = [
        ("usdl", format!("{PLACEHOLDER_BASE}usdl#")),
        ("usdl-trust", format!("{PLACEHOLDER_BASE}usdl-trust#")),
        ("tao", format!("{PLACEHOLDER_BASE}tao#")),
        ("foaf", "http://xmlns.com/foaf/0.1/".to_string()),
        ("schema", "https://schema.org/".to_string()),
        ("gr", "http://purl.org/goodrelations/v1#".to_string()),
        ("dc", "http://purl.org/dc/terms/".to_string()),
        ("xsd", XSD.to_string()),
        ("rdf", RDF.to_string()),
    ];
    let mut table = PrefixTable::new();
    for (label, iri) in entries {
        table
            .insert(label, Iri::new(iri).expect("default namespaces are valid"))
            .expect("default labels are valid");
    }
    table
}

/// Scoring categories. The first eight are the website trust-content
/// categories; `ProviderSystems` covers machines and other production
/// systems; `MarketplaceAnalytics` is sourced from catalog state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TrustCategory {
    CustomerReference,
    Certification,
    Facility,
    ProviderSystems,
    Employee,
    Partner,
    LegalData,
    Terms,
    Publication,
    MarketplaceAnalytics,
}

impl TrustCategory {
    pub const ALL: [TrustCategory; 10] = [
        TrustCategory::CustomerReference,
        TrustCategory::Certification,
        TrustCategory::Facility,
        TrustCategory::ProviderSystems,
        TrustCategory::Employee,
        TrustCategory::Partner,
        TrustCategory::LegalData,
        TrustCategory::Terms,
        TrustCategory::Publication,
        TrustCategory::MarketplaceAnalytics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TrustCategory::CustomerReference => "CustomerReference",
            TrustCategory::Certification => "Certification",
            TrustCategory::Facility => "Facility",
            TrustCategory::ProviderSystems => "ProviderSystems",
            TrustCategory::Employee => "Employee",
            TrustCategory::Partner => "Partner",
            TrustCategory::LegalData => "LegalData",
            TrustCategory::Terms => "Terms",
            TrustCategory::Publication => "Publication",
            TrustCategory::MarketplaceAnalytics => "MarketplaceAnalytics",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Average expert MoSCoW rating in tenths (12 = 1.2; 1 = must, 4 = won't).
    pub fn expert_rating_tenths(self) -> u32 {
        match self {
            TrustCategory::LegalData => 12,
            TrustCategory::Employee => 14,
            TrustCategory::CustomerReference => 16,
            TrustCategory::Certification => 18,
            TrustCategory::Facility => 18,
            TrustCategory::ProviderSystems => 20,
            TrustCategory::Partner => 20,
            TrustCategory::Publication => 24,
            TrustCategory::MarketplaceAnalytics => 25,
            TrustCategory::Terms => 28,
        }
    }

    /// True for the categories that are read from advertisement documents.
    pub fn is_document_sourced(self) -> bool {
        self != TrustCategory::MarketplaceAnalytics
    }
}

impl fmt::Display for TrustCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A vocabulary term as `prefix:local`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VocabTerm {
    pub prefix: &'static str,
    pub local: &'static str,
}

impl VocabTerm {
    pub const fn new(prefix: &'static str, local: &'static str) -> Self {
        Self { prefix, local }
    }

    /// `prefix:local` form.
    pub fn curie(&self) -> String {
        format!("{}:{}", self.prefix, self.local)
    }
}

impl fmt::Display for VocabTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.prefix, self.local)
    }
}

impl Serialize for VocabTerm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Class and property terms.
pub mod terms {
    use super::VocabTerm;

    const fn ut(local: &'static str) -> VocabTerm {
        VocabTerm::new("usdl-trust", local)
    }
    const fn usdl(local: &'static str) -> VocabTerm {
        VocabTerm::new("usdl", local)
    }
    const fn schema(local: &'static str) -> VocabTerm {
        VocabTerm::new("schema", local)
    }
    const fn tao(local: &'static str) -> VocabTerm {
        VocabTerm::new("tao", local)
    }

    // classes
    pub const TRUST_ASSERTION: VocabTerm = tao("TrustAssertion");
    pub const PROVIDER_WEBSITE: VocabTerm = ut("ProviderWebsite");
    pub const TRUST_CONTENT: VocabTerm = ut("TrustContent");
    pub const CUSTOMER_REFERENCE: VocabTerm = ut("CustomerReference");
    pub const TRANSACTION: VocabTerm = ut("Transaction");
    pub const CONFIDENTIALITY_AGREEMENT: VocabTerm = ut("ConfidentialityAgreement");
    pub const CERTIFICATION: VocabTerm = ut("Certification");
    pub const FACILITY: VocabTerm = ut("Facility");
    pub const KPI: VocabTerm = ut("KPI");
    pub const PROVIDER_SYSTEM: VocabTerm = ut("ProviderSystem");
    pub const EMPLOYEE: VocabTerm = ut("Employee");
    pub const PARTNER: VocabTerm = ut("Partner");
    pub const LEGAL_DATA: VocabTerm = ut("LegalData");
    pub const TERMS: VocabTerm = ut("Terms");
    pub const PUBLICATION: VocabTerm = ut("Publication");
    pub const CUSTOMER: VocabTerm = usdl("Customer");
    pub const PROVIDER: VocabTerm = usdl("Provider");
    pub const SERVICE_OFFERING: VocabTerm = usdl("ServiceOffering");
    pub const PRODUCT: VocabTerm = schema("Product");
    pub const ORGANIZATION: VocabTerm = schema("Organization");
    pub const CREATIVE_WORK: VocabTerm = schema("CreativeWork");
    pub const PERSON: VocabTerm = schema("Person");
    pub const LOCATION: VocabTerm = VocabTerm::new("gr", "Location");
    pub const AGENT: VocabTerm = VocabTerm::new("foaf", "Agent");

    // trust assertion
    pub const APPLIES_TO_SOURCE: VocabTerm = tao("appliesToSource");
    pub const APPLIES_TO_CONTENT: VocabTerm = tao("appliesToContent");
    pub const ASSERTED_BY: VocabTerm = tao("assertedBy");
    pub const TRUST_VALUE: VocabTerm = tao("trustValue");

    // provider links
    pub const HAS_LEGAL_DATA: VocabTerm = ut("hasLegalData");
    pub const HAS_WEBSITE: VocabTerm = ut("hasWebsite");
    pub const HAS_FACILITY: VocabTerm = ut("hasFacility");
    pub const HAS_EMPLOYEE: VocabTerm = ut("hasEmployee");
    pub const HAS_REFERENCE: VocabTerm = ut("hasReference");
    pub const HAS_CERTIFICATION: VocabTerm = ut("hasCertification");
    pub const HAS_PARTNER: VocabTerm = ut("hasPartner");
    pub const HAS_PUBLICATION: VocabTerm = ut("hasPublication");
    pub const HAS_TERMS: VocabTerm = ut("hasTerms");

    // shared schema.org properties
    pub const NAME: VocabTerm = schema("name");
    pub const DESCRIPTION: VocabTerm = schema("description");
    pub const IMAGE: VocabTerm = schema("image");
    pub const LOGO: VocabTerm = schema("logo");
    pub const URL: VocabTerm = schema("url");

    // website
    // (uses schema:url)

    // legal data
    pub const VAT: VocabTerm = ut("vat");
    pub const CRN: VocabTerm = ut("crn");
    pub const LEI: VocabTerm = ut("lei");
    pub const DUNS: VocabTerm = ut("duns");
    pub const LEGAL_FORM: VocabTerm = ut("legalForm");
    pub const LICENSE: VocabTerm = ut("license");

    // facility
    pub const ADDRESS: VocabTerm = ut("address");
    pub const HAS_IMAGE: VocabTerm = ut("hasImage");
    pub const HAS_KPI: VocabTerm = ut("hasKPI");
    pub const BELONGS_TO_ORGANIZATION: VocabTerm = ut("belongsToOrganization");
    pub const HAS_SYSTEM: VocabTerm = ut("hasSystem");

    // kpi
    pub const VALUE: VocabTerm = schema("value");
    pub const UNIT_TEXT: VocabTerm = schema("unitText");
    pub const REFERENCE_YEAR: VocabTerm = ut("referenceYear");

    // provider system
    pub const SYSTEM_KIND: VocabTerm = ut("systemKind");
    pub const MANUFACTURER: VocabTerm = schema("manufacturer");

    // employee
    pub const JOB_TITLE: VocabTerm = schema("jobTitle");
    pub const HONORIFIC_PREFIX: VocabTerm = schema("honorificPrefix");
    pub const EMAIL: VocabTerm = schema("email");
    pub const TELEPHONE: VocabTerm = schema("telephone");
    pub const KNOWS_ABOUT: VocabTerm = schema("knowsAbout");

    // customer reference
    pub const CUSTOMER_NAME: VocabTerm = ut("customerName");
    pub const PRODUCT_IMAGE: VocabTerm = ut("productImage");
    pub const PRODUCT_DESCRIPTION: VocabTerm = ut("productDescription");
    pub const HAS_TRANSACTION: VocabTerm = ut("hasTransaction");

    // transaction / agreement
    pub const TRANSACTION_DATE: VocabTerm = ut("transactionDate");
    pub const APPLIES_TO_TRANSACTION: VocabTerm = ut("appliesToTransaction");

    // certification
    pub const STANDARD: VocabTerm = ut("standard");
    pub const ISSUER: VocabTerm = ut("issuer");
    pub const CERTIFICATE_DOCUMENT: VocabTerm = ut("certificateDocument");

    // partner
    pub const SOCIAL_NETWORK: VocabTerm = ut("socialNetwork");

    // publication
    pub const TITLE: VocabTerm = VocabTerm::new("dc", "title");
    pub const PUBLICATION_KIND: VocabTerm = ut("publicationKind");
    pub const PUBLICATION_SOURCE: VocabTerm = ut("publicationSource");

    // terms
    pub const TERMS_KIND: VocabTerm = ut("termsKind");
    pub const TERMS_DOCUMENT: VocabTerm = ut("termsDocument");
    pub const TERMS_TEXT: VocabTerm = ut("termsText");
}

pub const SYSTEM_KINDS: &[&str] = &["machine", "software", "quality", "organizational"];
pub const PUBLICATION_KINDS: &[&str] =
    &["success-story", "company-event", "research-paper", "newsfeed"];
pub const PUBLICATION_SOURCES: &[&str] = &["professional", "internal"];
pub const TERMS_KINDS: &[&str] = &["general", "delivery", "purchasing", "sales", "policy"];

/// Value space a property's objects must fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Range {
    /// Plain, language-tagged or `xsd:string` literal.
    String,
    Integer,
    /// `xsd:decimal` or `xsd:integer` literal.
    Decimal,
    Date,
    Boolean,
    /// Any IRI (links to images, documents, external resources).
    Resource,
    /// String literal drawn from a closed set.
    Enum(&'static [&'static str]),
    /// Node reference that must be described in the same graph.
    Class(VocabTerm),
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::String => f.write_str("xsd:string"),
            Range::Integer => f.write_str("xsd:integer"),
            Range::Decimal => f.write_str("xsd:decimal"),
            Range::Date => f.write_str("xsd:date"),
            Range::Boolean => f.write_str("xsd:boolean"),
            Range::Resource => f.write_str("IRI"),
            Range::Enum(values) => write!(f, "one of {}", values.join(" | ")),
            Range::Class(class) => write!(f, "{class}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cardinality {
    pub min: u32,
    /// `None` is unbounded.
    pub max: Option<u32>,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            Some(max) => write!(f, "{}..{}", self.min, max),
            None => write!(f, "{}..*", self.min),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    StructuralRequired,
    Advisory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDescriptor {
    pub name: VocabTerm,
    pub range: Range,
    pub cardinality: Cardinality,
    pub requirement: Requirement,
}

/// What a class is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassRole {
    /// Scored trust content.
    Content(TrustCategory),
    /// Helper node of the model (transactions, KPIs, websites, ...).
    Structural,
    /// Abstract superclass, never instantiated on its own.
    Abstract,
    /// Class borrowed from a linked vocabulary.
    External,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDescriptor {
    pub name: VocabTerm,
    pub superclass: Option<VocabTerm>,
    pub role: ClassRole,
    pub properties: Vec<PropertyDescriptor>,
}

impl ClassDescriptor {
    pub fn property(&self, name: VocabTerm) -> Option<&PropertyDescriptor> {
        self.properties.iter().find(|p| p.name == name)
    }
}

fn required(name: VocabTerm, range: Range, max: Option<u32>) -> PropertyDescriptor {
    PropertyDescriptor {
        name,
        range,
        cardinality: Cardinality { min: 1, max },
        requirement: Requirement::StructuralRequired,
    }
}

fn optional(name: VocabTerm, range: Range, max: Option<u32>) -> PropertyDescriptor {
    PropertyDescriptor {
        name,
        range,
        cardinality: Cardinality { min: 0, max },
        requirement: Requirement::Advisory,
    }
}

const ONE: Option<u32> = Some(1);
const MANY: Option<u32> = None;

fn class(
    name: VocabTerm,
    superclass: Option<VocabTerm>,
    role: ClassRole,
    properties: Vec<PropertyDescriptor>,
) -> ClassDescriptor {
    ClassDescriptor {
        name,
        superclass,
        role,
        properties,
    }
}

static KNOWN_CLASSES: LazyLock<Vec<ClassDescriptor>> = LazyLock::new(build_classes);

fn build_classes() -> Vec<ClassDescriptor> {
    use terms::*;
    use ClassRole::*;
    use Range as R;
    let content = |c| Content(c);
    vec![
        class(
            TRUST_ASSERTION,
            None,
            Structural,
            vec![
                optional(APPLIES_TO_SOURCE, R::Class(PROVIDER_WEBSITE), MANY),
                optional(APPLIES_TO_CONTENT, R::Resource, MANY),
                optional(ASSERTED_BY, R::Resource, ONE),
                optional(TRUST_VALUE, R::Decimal, ONE),
            ],
        ),
        class(
            PROVIDER_WEBSITE,
            None,
            Structural,
            vec![required(URL, R::Resource, ONE)],
        ),
        class(TRUST_CONTENT, None, Abstract, vec![]),
        class(
            CUSTOMER_REFERENCE,
            Some(TRUST_CONTENT),
            content(TrustCategory::CustomerReference),
            vec![
                optional(CUSTOMER_NAME, R::String, ONE),
                optional(LOGO, R::Resource, ONE),
                optional(PRODUCT_IMAGE, R::Resource, ONE),
                optional(PRODUCT_DESCRIPTION, R::String, ONE),
                optional(HAS_TRANSACTION, R::Class(TRANSACTION), ONE),
            ],
        ),
        class(
            TRANSACTION,
            Some(SERVICE_OFFERING),
            Structural,
            vec![required(TRANSACTION_DATE, R::Date, ONE)],
        ),
        class(
            CONFIDENTIALITY_AGREEMENT,
            None,
            Structural,
            vec![required(APPLIES_TO_TRANSACTION, R::Class(TRANSACTION), ONE)],
        ),
        class(
            CERTIFICATION,
            Some(TRUST_CONTENT),
            content(TrustCategory::Certification),
            vec![
                required(STANDARD, R::String, ONE),
                optional(ISSUER, R::String, ONE),
                optional(CERTIFICATE_DOCUMENT, R::Resource, ONE),
                optional(DESCRIPTION, R::String, ONE),
            ],
        ),
        class(
            FACILITY,
            Some(LOCATION),
            content(TrustCategory::Facility),
            vec![
                required(ADDRESS, R::String, ONE),
                optional(HAS_IMAGE, R::Resource, ONE),
                optional(HAS_KPI, R::Class(KPI), MANY),
                optional(BELONGS_TO_ORGANIZATION, R::Resource, ONE),
                optional(HAS_SYSTEM, R::Class(PROVIDER_SYSTEM), MANY),
            ],
        ),
        class(
            KPI,
            None,
            Structural,
            vec![
                required(NAME, R::String, ONE),
                required(VALUE, R::Decimal, ONE),
                optional(UNIT_TEXT, R::String, ONE),
                optional(REFERENCE_YEAR, R::Integer, ONE),
            ],
        ),
        class(
            PROVIDER_SYSTEM,
            Some(TRUST_CONTENT),
            content(TrustCategory::ProviderSystems),
            vec![
                required(NAME, R::String, ONE),
                optional(SYSTEM_KIND, R::Enum(SYSTEM_KINDS), ONE),
                optional(MANUFACTURER, R::String, ONE),
                optional(IMAGE, R::Resource, ONE),
                optional(DESCRIPTION, R::String, ONE),
            ],
        ),
        class(
            EMPLOYEE,
            Some(PERSON),
            content(TrustCategory::Employee),
            vec![
                required(NAME, R::String, ONE),
                optional(JOB_TITLE, R::String, ONE),
                optional(HONORIFIC_PREFIX, R::String, ONE),
                optional(EMAIL, R::String, ONE),
                optional(TELEPHONE, R::String, ONE),
                optional(IMAGE, R::Resource, ONE),
                optional(KNOWS_ABOUT, R::String, ONE),
            ],
        ),
        class(
            PARTNER,
            Some(TRUST_CONTENT),
            content(TrustCategory::Partner),
            vec![
                required(NAME, R::String, ONE),
                optional(DESCRIPTION, R::String, ONE),
                optional(LOGO, R::Resource, ONE),
                optional(SOCIAL_NETWORK, R::Resource, ONE),
            ],
        ),
        class(
            LEGAL_DATA,
            Some(TRUST_CONTENT),
            content(TrustCategory::LegalData),
            vec![
                optional(VAT, R::String, ONE),
                optional(CRN, R::String, ONE),
                optional(LEI, R::String, ONE),
                optional(DUNS, R::String, ONE),
                optional(LEGAL_FORM, R::String, ONE),
                optional(LICENSE, R::String, MANY),
            ],
        ),
        class(
            TERMS,
            Some(TRUST_CONTENT),
            content(TrustCategory::Terms),
            vec![
                optional(TERMS_KIND, R::Enum(TERMS_KINDS), ONE),
                optional(TERMS_DOCUMENT, R::Resource, ONE),
                optional(TERMS_TEXT, R::String, ONE),
            ],
        ),
        class(
            PUBLICATION,
            Some(CREATIVE_WORK),
            content(TrustCategory::Publication),
            vec![
                required(TITLE, R::String, ONE),
                required(PUBLICATION_KIND, R::Enum(PUBLICATION_KINDS), ONE),
                optional(PUBLICATION_SOURCE, R::Enum(PUBLICATION_SOURCES), ONE),
                optional(URL, R::Resource, ONE),
            ],
        ),
        class(AGENT, None, External, vec![]),
        class(CUSTOMER, Some(AGENT), External, vec![]),
        class(
            PROVIDER,
            Some(AGENT),
            External,
            vec![
                optional(NAME, R::String, ONE),
                optional(HAS_LEGAL_DATA, R::Class(LEGAL_DATA), ONE),
                optional(HAS_WEBSITE, R::Class(PROVIDER_WEBSITE), ONE),
                optional(HAS_FACILITY, R::Class(FACILITY), MANY),
                optional(HAS_EMPLOYEE, R::Class(EMPLOYEE), MANY),
                optional(HAS_REFERENCE, R::Class(CUSTOMER_REFERENCE), MANY),
                optional(HAS_CERTIFICATION, R::Class(CERTIFICATION), MANY),
                optional(HAS_PARTNER, R::Class(PARTNER), MANY),
                optional(HAS_PUBLICATION, R::Class(PUBLICATION), MANY),
                optional(HAS_TERMS, R::Class(TERMS), MANY),
            ],
        ),
        class(SERVICE_OFFERING, None, External, vec![]),
        class(PRODUCT, None, External, vec![]),
        class(ORGANIZATION, Some(AGENT), External, vec![]),
        class(CREATIVE_WORK, None, External, vec![]),
        class(PERSON, Some(AGENT), External, vec![]),
        class(LOCATION, None, External, vec![]),
    ]
}

/// Every class the vocabulary knows, content and structural alike.
pub fn known_classes() -> &'static [ClassDescriptor] {
    &KNOWN_CLASSES
}

/// Finds a class by its local name (`"Transaction"`) or its curie
/// (`"usdl-trust:Transaction"`).
pub fn lookup_class(name: &str) -> Option<&'static ClassDescriptor> {
    KNOWN_CLASSES
        .iter()
        .find(|c| c.name.local == name || c.name.curie() == name)
}

/// Scoring category of a content class; `None` for structural, abstract,
/// external and unknown classes.
pub fn category_of(class_name: &str) -> Option<TrustCategory> {
    match lookup_class(class_name)?.role {
        ClassRole::Content(category) => Some(category),
        _ => None,
    }
}

/// The vocabulary bound to a concrete prefix table.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    prefixes: PrefixTable,
    by_iri: HashMap<String, VocabTerm>,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Self::new(default_namespace_table()).expect("default table is a valid vocabulary table")
    }
}

static DEFAULT_VOCABULARY: LazyLock<Vocabulary> = LazyLock::new(Vocabulary::default);

impl Vocabulary {
    pub fn new(prefixes: PrefixTable) -> Result<Self, VocabError> {
        prefixes.check_vocabulary()?;
        let mut by_iri = HashMap::new();
        for class in known_classes() {
            let mut insert = |term: VocabTerm| {
                let iri = format!("{}{}", prefixes.lookup(term.prefix).unwrap(), term.local);
                by_iri.insert(iri, term);
            };
            insert(class.name);
            for property in &class.properties {
                insert(property.name);
            }
        }
        Ok(Self { prefixes, by_iri })
    }

    /// Shared instance over [`default_namespace_table`].
    pub fn standard() -> &'static Vocabulary {
        &DEFAULT_VOCABULARY
    }

    pub fn prefixes(&self) -> &PrefixTable {
        &self.prefixes
    }

    pub fn iri(&self, term: VocabTerm) -> String {
        let namespace = self
            .prefixes
            .lookup(term.prefix)
            .expect("vocabulary terms only use required prefixes");
        format!("{namespace}{}", term.local)
    }

    /// Reverse lookup from a full IRI to the vocabulary term it names.
    pub fn term_for(&self, iri: &str) -> Option<VocabTerm> {
        self.by_iri.get(iri).copied()
    }
}

/// Markdown reference listing every class with its properties, ranges and
/// cardinalities.
pub fn reference_document() -> String {
    let table = default_namespace_table();
    let mut out = String::from("# usdl-Trust vocabulary reference\n\n## Namespaces\n\n");
    out.push_str("| prefix | namespace |\n|---|---|\n");
    for (label, iri) in table.iter() {
        out.push_str(&format!("| `{label}` | <{iri}> |\n"));
    }
    out.push_str("\n## Classes\n");
    for class in known_classes() {
        out.push_str(&format!("\n### `{}`\n\n", class.name));
        if let Some(sup) = class.superclass {
            out.push_str(&format!("Subclass of `{sup}`. "));
        }
        match class.role {
            ClassRole::Content(c) => out.push_str(&format!("Scored as `{c}`.\n")),
            ClassRole::Structural => out.push_str("Structural.\n"),
            ClassRole::Abstract => out.push_str("Abstract.\n"),
            ClassRole::External => out.push_str("External.\n"),
        }
        if class.properties.is_empty() {
            continue;
        }
        out.push_str("\n| property | range | cardinality | requirement |\n|---|---|---|---|\n");
        for p in &class.properties {
            let requirement = match p.requirement {
                Requirement::StructuralRequired => "required",
                Requirement::Advisory => "advisory",
            };
            out.push_str(&format!(
                "| `{}` | {} | {} | {} |\n",
                p.name, p.range, p.cardinality, requirement
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn default_table_has_nine_distinct_entries() {
        let table = default_namespace_table();
        assert_eq!(table.len(), 9);
        let labels: BTreeSet<_> = table.iter().map(|(l, _)| l).collect();
        assert_eq!(labels.len(), 9);
        assert!(table.lookup("usdl-trust").is_some());
        assert_eq!(table.lookup("xsd").unwrap().as_str(), XSD);
        table.check_vocabulary().unwrap();
        assert_eq!(table, default_namespace_table());
    }

    #[test]
    fn duplicate_namespace_is_rejected() {
        let table = default_namespace_table()
            .with_override("usdl", Iri::new(XSD).unwrap())
            .unwrap();
        assert!(matches!(
            table.check_vocabulary(),
            Err(VocabError::DuplicateNamespace { .. })
        ));
    }

    #[test]
    fn override_changes_resolution() {
        let table = default_namespace_table()
            .with_override("usdl-trust", Iri::new("http://trust.test/ns#").unwrap())
            .unwrap();
        let vocab = Vocabulary::new(table).unwrap();
        assert_eq!(vocab.iri(terms::FACILITY), "http://trust.test/ns#Facility");
        assert_eq!(
            vocab.term_for("http://trust.test/ns#Facility"),
            Some(terms::FACILITY)
        );
    }

    #[test]
    fn iri_validation() {
        assert!(Iri::new("http://e.x/").is_ok());
        assert!(Iri::new("urn:isbn:0451450523").is_ok());
        assert!(Iri::new("").is_err());
        assert!(Iri::new("relative/path").is_err());
        assert!(Iri::new("http://e.x/a b").is_err());
        assert!(Iri::new("urn:").is_err());
        assert!(Iri::new("1http://x").is_err());
    }

    #[test]
    fn class_lookup() {
        assert_eq!(
            lookup_class("Transaction").unwrap().superclass,
            Some(terms::SERVICE_OFFERING)
        );
        assert_eq!(
            lookup_class("Publication").unwrap().superclass.unwrap().local,
            "CreativeWork"
        );
        assert!(lookup_class("NoSuchClass").is_none());
        assert_eq!(
            lookup_class("usdl-trust:Facility").unwrap().name,
            terms::FACILITY
        );
    }

    #[test]
    fn categories() {
        assert_eq!(category_of("Certification"), Some(TrustCategory::Certification));
        assert_eq!(category_of("KPI"), None);
        assert_eq!(category_of("ProviderSystem"), Some(TrustCategory::ProviderSystems));
        for structural in ["Transaction", "ConfidentialityAgreement", "ProviderWebsite", "TrustContent"] {
            assert_eq!(category_of(structural), None, "{structural}");
        }
    }

    #[test]
    fn content_classes_cover_all_but_marketplace_analytics() {
        let covered: BTreeSet<_> = known_classes()
            .iter()
            .filter_map(|c| category_of(c.name.local))
            .collect();
        let expected: BTreeSet<_> = TrustCategory::ALL
            .into_iter()
            .filter(|c| *c != TrustCategory::MarketplaceAnalytics)
            .collect();
        assert_eq!(covered, expected);
    }

    #[test]
    fn descriptors_are_well_formed() {
        let mut names = BTreeSet::new();
        for class in known_classes() {
            assert!(names.insert(class.name), "duplicate class {}", class.name);
            let mut props = BTreeSet::new();
            for p in &class.properties {
                assert!(props.insert(p.name), "{} repeats {}", class.name, p.name);
                if let Some(max) = p.cardinality.max {
                    assert!(p.cardinality.min <= max);
                }
                if p.requirement == Requirement::StructuralRequired {
                    assert!(p.cardinality.min >= 1);
                }
                if let Range::Class(target) = p.range {
                    assert!(lookup_class(target.local).is_some());
                }
            }
            if let Some(sup) = class.superclass {
                assert!(lookup_class(sup.local).is_some(), "{sup}");
            }
        }
    }

    #[test]
    fn employee_has_the_seven_listed_properties() {
        let employee = lookup_class("Employee").unwrap();
        assert_eq!(employee.properties.len(), 7);
    }

    #[test]
    fn reference_document_lists_every_class() {
        let doc = reference_document();
        for class in known_classes() {
            assert!(doc.contains(&format!("### `{}`", class.name)));
        }
    }
}
