//! Service Trust Advertisement Documents: a strict Turtle subset.
//!
//! ```text
//! stad        := (directive | statement | comment)*
//! directive   := '@prefix' PNAME ':' IRIREF '.'
//! statement   := subject polist '.'
//! polist      := verb objlist (';' verb objlist)*
//! objlist     := object (',' object)*
//! verb        := 'a' | iri
//! subject     := iri | blank
//! object      := iri | blank | literal
//! iri         := IRIREF | PNAME ':' LOCAL
//! literal     := STRING ( '@' LANGTAG | '^^' iri )? | INTEGER | DECIMAL | 'true' | 'false'
//! ```
//!
//! Collections, `[]` property lists, `@base` and multi-line strings are not
//! part of the format.

mod graph;
mod parser;
mod profile;
mod serializer;

pub use graph::{
    is_valid_blank_label, is_valid_lang_tag, Literal, LiteralKind, Term, TermError, Triple,
    TrustGraph,
};
pub use parser::{parse_document, ParseError, ParseErrorCode, MAX_DOCUMENT_BYTES};
pub use profile::{
    extract_profile, extract_profile_with, Certification, CustomerReference, Employee,
    ExtractError, Facility, Kpi, LegalData, Partner, ProviderProfile, ProviderSystem,
    ProviderWebsite, Publication, PublicationKind, PublicationSource, SystemKind, TermsDoc,
    TermsDocument, TermsKind, TransactionRef,
};
pub use serializer::{canonical_triples, content_id, equal_up_to_blank_relabeling, serialize_graph};
