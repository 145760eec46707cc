//! Per-category scoring rubrics.
//!
//! Every rubric awards whole points out of 100 per evidence item, so a
//! category score is an exact fraction `points / (100 * slots)`.

use chrono::NaiveDate;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::stad::{
    Certification, CustomerReference, Employee, Facility, Partner, ProviderProfile,
    ProviderSystem, PublicationKind, PublicationSource, TermsKind, TransactionRef,
};
use crate::vocab::TrustCategory;

pub const TOP_REFERENCES: usize = 5;
pub const TOP_CERTIFICATIONS: usize = 3;
pub const TOP_SYSTEMS: usize = 3;
pub const TOP_EMPLOYEES: usize = 3;
pub const TOP_PARTNERS: usize = 3;
pub const PUBLICATION_CAP: u64 = 3;
pub const TENURE_CAP_YEARS: u64 = 3;
pub const VERIFIED_TRANSACTION_CAP: u64 = 10;

/// Issuing bodies whose standards count as recognized.
pub const STANDARD_BODIES: &[&str] = &["ISO", "IEC", "IATF", "EN", "DIN", "AS", "OHSAS", "VDA"];

/// Marketplace-held evidence about a provider.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyticsEvidence {
    pub registered_at: NaiveDate,
    /// Date the snapshot was taken; tenure is measured up to it.
    pub as_of: NaiveDate,
    pub profile_clicks: u64,
    pub verified_transactions: u64,
    pub verified_ratings: u64,
    pub identity_verified: bool,
}

impl AnalyticsEvidence {
    /// Completed years between registration and `as_of`.
    pub fn tenure_years(&self) -> u64 {
        self.as_of.years_since(self.registered_at).unwrap_or(0) as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryScore {
    pub category: TrustCategory,
    pub score: f64,
    pub evidence_count: usize,
    pub notes: Vec<String>,
    exact: Ratio<u64>,
}

impl CategoryScore {
    fn new(category: TrustCategory, points: u64, slots: u64, evidence_count: usize, notes: Vec<String>) -> Self {
        let exact = Ratio::new(points, 100 * slots.max(1));
        Self {
            category,
            score: *exact.numer() as f64 / *exact.denom() as f64,
            evidence_count,
            notes,
            exact,
        }
    }

    /// The score as an exact fraction.
    pub fn exact(&self) -> Ratio<u64> {
        self.exact
    }
}

fn present(field: &Option<String>) -> bool {
    field.as_deref().is_some_and(|s| !s.trim().is_empty())
}

fn award(points: u64, condition: bool) -> u64 {
    if condition {
        points
    } else {
        0
    }
}

/// True for designations such as `ISO 9001:2015`, `ISO/IEC 27001` or
/// `IATF 16949`.
pub fn is_recognized_standard(standard: &str) -> bool {
    let mut tokens = standard
        .split(|c: char| c.is_whitespace() || c == '/')
        .filter(|t| !t.is_empty());
    let mut bodies = 0;
    for token in tokens.by_ref() {
        if STANDARD_BODIES.contains(&token) {
            bodies += 1;
            continue;
        }
        return bodies > 0 && token.starts_with(|c: char| c.is_ascii_digit());
    }
    false
}

pub fn reference_points(r: &CustomerReference) -> u64 {
    award(30, present(&r.customer_name))
        + award(20, present(&r.customer_logo))
        + award(20, present(&r.product_image))
        + award(30, present(&r.product_description))
}

pub fn certification_points(c: &Certification) -> u64 {
    award(60, is_recognized_standard(&c.standard))
        + award(20, present(&c.issuer))
        + award(20, present(&c.document))
}

pub fn facility_points(f: &Facility) -> u64 {
    award(40, !f.address.trim().is_empty())
        + award(20, present(&f.image))
        + award(20, f.kpis.len() >= 2)
        + award(20, present(&f.organization))
}

pub fn system_points(s: &ProviderSystem) -> u64 {
    award(30, !s.name.trim().is_empty())
        + award(30, present(&s.manufacturer))
        + award(20, present(&s.image))
        + award(20, present(&s.description))
}

pub fn employee_points(e: &Employee) -> u64 {
    award(20, !e.name.trim().is_empty())
        + award(20, present(&e.job_title))
        + award(30, present(&e.email) || present(&e.telephone))
        + award(15, present(&e.image))
        + award(15, present(&e.expertise))
}

pub fn partner_points(p: &Partner) -> u64 {
    award(50, !p.name.trim().is_empty())
        + award(30, present(&p.description))
        + award(20, present(&p.logo))
}

fn top_k(mut points: Vec<u64>, k: usize) -> u64 {
    points.sort_unstable_by(|a, b| b.cmp(a));
    points.into_iter().take(k).sum()
}

fn top_k_score<T>(
    category: TrustCategory,
    items: &[T],
    k: usize,
    points: impl Fn(&T) -> u64,
) -> CategoryScore {
    let per_item: Vec<u64> = items.iter().map(points).collect();
    let notes = vec![format!("{} item(s), best {k} of {per_item:?} (points of 100)", items.len())];
    CategoryScore::new(category, top_k(per_item, k), k as u64, items.len(), notes)
}

/// Profile references whose transaction is not covered by a confidentiality
/// agreement, in their original order.
///
/// A reference is dropped when its own transaction is confidential or when
/// any entry of `transactions` with the same id is.
pub fn publishable_references(
    profile: &ProviderProfile,
    transactions: &[TransactionRef],
) -> Vec<CustomerReference> {
    filter_references(&profile.references, transactions)
}

pub fn filter_references(
    references: &[CustomerReference],
    transactions: &[TransactionRef],
) -> Vec<CustomerReference> {
    references
        .iter()
        .filter(|r| match &r.transaction {
            None => true,
            Some(tx) => {
                !tx.confidential
                    && !transactions
                        .iter()
                        .any(|t| t.id == tx.id && t.confidential)
            }
        })
        .cloned()
        .collect()
}

/// Applies the category rubric. `published_refs` is the evidence base for
/// customer references and must already be filtered.
pub fn score_category(
    profile: &ProviderProfile,
    category: TrustCategory,
    analytics: Option<&AnalyticsEvidence>,
    published_refs: &[CustomerReference],
) -> CategoryScore {
    use TrustCategory as C;
    match category {
        C::CustomerReference => {
            top_k_score(category, published_refs, TOP_REFERENCES, reference_points)
        }
        C::Certification => top_k_score(
            category,
            &profile.certifications,
            TOP_CERTIFICATIONS,
            certification_points,
        ),
        C::ProviderSystems => {
            let systems: Vec<ProviderSystem> = profile
                .facilities
                .iter()
                .flat_map(|f| f.systems.iter().cloned())
                .collect();
            top_k_score(category, &systems, TOP_SYSTEMS, system_points)
        }
        C::Employee => top_k_score(category, &profile.employees, TOP_EMPLOYEES, employee_points),
        C::Partner => top_k_score(category, &profile.partners, TOP_PARTNERS, partner_points),
        C::Facility => {
            let best = profile.facilities.iter().map(facility_points).max().unwrap_or(0);
            let notes = vec![format!("{} facility(ies), best {best}", profile.facilities.len())];
            CategoryScore::new(category, best, 1, profile.facilities.len(), notes)
        }
        C::LegalData => match &profile.legal {
            None => CategoryScore::new(category, 0, 1, 0, vec!["no legal data".into()]),
            Some(l) => {
                let points = award(35, present(&l.vat))
                    + award(25, present(&l.crn))
                    + award(20, present(&l.lei) || present(&l.duns))
                    + award(20, present(&l.legal_form));
                CategoryScore::new(category, points, 1, 1, vec![])
            }
        },
        C::Terms => {
            let documented = |d: &&crate::stad::TermsDoc| d.document.is_some();
            let policy = profile
                .terms
                .iter()
                .filter(documented)
                .any(|d| d.kind == Some(TermsKind::Policy));
            let terms = profile
                .terms
                .iter()
                .filter(documented)
                .any(|d| d.kind != Some(TermsKind::Policy));
            let points = award(60, terms) + award(40, policy);
            CategoryScore::new(category, points, 1, profile.terms.len(), vec![])
        }
        C::Publication => {
            let professional = profile
                .publications
                .iter()
                .filter(|p| {
                    p.source == Some(PublicationSource::Professional)
                        && p.kind != PublicationKind::Newsfeed
                })
                .count() as u64;
            let counted = professional.min(PUBLICATION_CAP);
            let notes = vec![format!(
                "{professional} professional of {} publication(s)",
                profile.publications.len()
            )];
            CategoryScore::new(
                category,
                counted * 100,
                PUBLICATION_CAP,
                profile.publications.len(),
                notes,
            )
        }
        C::MarketplaceAnalytics => match analytics {
            None => CategoryScore::new(category, 0, 1, 0, vec!["no marketplace data".into()]),
            Some(a) => {
                // tenure 30 + identity 40 + verified transactions 30, in
                // hundredths of the category
                let tenure = a.tenure_years().min(TENURE_CAP_YEARS) * 10;
                let identity = award(40, a.identity_verified);
                let tx = a.verified_transactions.min(VERIFIED_TRANSACTION_CAP) * 3;
                let notes = vec![format!(
                    "tenure {}y, identity {}, {} verified transaction(s)",
                    a.tenure_years(),
                    a.identity_verified,
                    a.verified_transactions
                )];
                // evidence counts the components that are present, so an
                // idle marketplace record matches having no record at all
                let evidence = [tenure > 0, identity > 0, tx > 0].iter().filter(|b| **b).count();
                CategoryScore::new(category, tenure + identity + tx, 1, evidence, notes)
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stad::{LegalData, Publication};

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    #[test]
    fn recognized_standards() {
        for s in ["ISO 9001:2015", "ISO/IEC 27001", "IATF 16949", "DIN EN ISO 14001", "EN 9100"] {
            assert!(is_recognized_standard(s), "{s}");
        }
        for s in ["Quality certified", "ISO", "9001", "Best Supplier 2020", ""] {
            assert!(!is_recognized_standard(s), "{s}");
        }
    }

    #[test]
    fn legal_data_full_marks() {
        let mut p = ProviderProfile::empty("http://p");
        p.legal = Some(LegalData {
            vat: Some("ATU1".into()),
            crn: Some("FN1".into()),
            duns: Some("1".into()),
            legal_form: Some("GmbH".into()),
            ..LegalData::default()
        });
        let s = score_category(&p, TrustCategory::LegalData, None, &[]);
        assert_eq!(s.exact(), Ratio::from_integer(1));
        assert_eq!(s.evidence_count, 1);
    }

    #[test]
    fn newsfeeds_score_nothing() {
        let mut p = ProviderProfile::empty("http://p");
        for _ in 0..2 {
            p.publications.push(Publication {
                title: "news".into(),
                kind: PublicationKind::Newsfeed,
                source: Some(PublicationSource::Internal),
                link: None,
            });
        }
        let s = score_category(&p, TrustCategory::Publication, None, &[]);
        assert_eq!(s.score, 0.0);
        assert_eq!(s.evidence_count, 2);
    }

    #[test]
    fn one_full_employee_is_a_third() {
        let mut p = ProviderProfile::empty("http://p");
        p.employees.push(Employee {
            name: "A".into(),
            job_title: Some("CEO".into()),
            email: Some("a@x".into()),
            image: Some("http://img".into()),
            expertise: Some("welding".into()),
            ..Employee::default()
        });
        let s = score_category(&p, TrustCategory::Employee, None, &[]);
        assert_eq!(s.exact(), Ratio::new(1, 3));
    }

    #[test]
    fn analytics_terms() {
        let p = ProviderProfile::empty("http://p");
        let mut a = AnalyticsEvidence {
            registered_at: date("2020-03-01"),
            as_of: date("2023-02-28"),
            profile_clicks: 50,
            verified_transactions: 0,
            verified_ratings: 0,
            identity_verified: false,
        };
        assert_eq!(a.tenure_years(), 2);
        let s = score_category(&p, TrustCategory::MarketplaceAnalytics, Some(&a), &[]);
        assert_eq!(s.exact(), Ratio::new(1, 5));
        a.as_of = date("2030-01-01");
        a.identity_verified = true;
        a.verified_transactions = 40;
        let s = score_category(&p, TrustCategory::MarketplaceAnalytics, Some(&a), &[]);
        assert_eq!(s.exact(), Ratio::from_integer(1));
        assert_eq!(
            score_category(&p, TrustCategory::MarketplaceAnalytics, None, &[]).score,
            0.0
        );
    }

    #[test]
    fn filter_drops_confidential() {
        let tx = |id: &str, confidential| TransactionRef {
            id: id.into(),
            date: date("2020-01-01"),
            confidential,
        };
        let reference = |t: Option<TransactionRef>| CustomerReference {
            customer_name: Some("c".into()),
            transaction: t,
            ..CustomerReference::default()
        };
        let mut p = ProviderProfile::empty("http://p");
        p.references = vec![
            reference(Some(tx("a", false))),
            reference(Some(tx("b", true))),
            reference(None),
            reference(Some(tx("c", false))),
        ];
        let out = publishable_references(&p, &[tx("c", true)]);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0], p.references[0]);
        assert_eq!(out[1], p.references[2]);
        assert!(publishable_references(&ProviderProfile::empty("x"), &[]).is_empty());
    }
}
