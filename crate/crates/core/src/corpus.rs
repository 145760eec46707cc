//! Deterministic synthetic advertisement corpus.
//!
//! Each signal is switched on per document by an independent Bernoulli draw
//! with its prevalence. Document `i` draws from its own ChaCha8 stream
//! (`seed`, stream `i`), so output does not depend on generation order.
//!
//! Customer logos and names are properties of references, so they are drawn
//! only for documents that show references, with probability
//! `p(signal) / p(customer-info)` (capped at 1). Their marginal frequency is
//! then the configured prevalence.
//!
//! Counts within an included signal are uniform:
//!
//! | signal         | count |
//! |----------------|-------|
//! | customer-info  | 1-5 references |
//! | certifications | 1-3   |
//! | personnel      | 1-4 employees |
//! | publications   | 1-3   |
//! | systems        | 1-3, attached to the first facility |
//! | facilities     | 1-2, each with 0-3 KPIs |
//! | partners       | 1-3   |
//! | terms          | 1-2 documents |

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vocab::{default_namespace_table, PUBLICATION_KINDS, SYSTEM_KINDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Signal {
    CustomerInfo,
    Certifications,
    Personnel,
    Publications,
    Systems,
    CustomerLogos,
    CustomerNames,
    Facilities,
    LegalData,
    Partners,
    Terms,
}

impl Signal {
    pub const ALL: [Signal; 11] = [
        Signal::CustomerInfo,
        Signal::Certifications,
        Signal::Personnel,
        Signal::Publications,
        Signal::Systems,
        Signal::CustomerLogos,
        Signal::CustomerNames,
        Signal::Facilities,
        Signal::LegalData,
        Signal::Partners,
        Signal::Terms,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Signal::CustomerInfo => "customer-info",
            Signal::Certifications => "certifications",
            Signal::Personnel => "personnel",
            Signal::Publications => "publications",
            Signal::Systems => "systems",
            Signal::CustomerLogos => "customer-logos",
            Signal::CustomerNames => "customer-names",
            Signal::Facilities => "facilities",
            Signal::LegalData => "legal-data",
            Signal::Partners => "partners",
            Signal::Terms => "terms",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.key() == key)
    }

    /// Share of provider websites showing the signal in the website study.
    /// Facilities, legal data, partners and terms were not reported and use
    /// fixed defaults.
    pub fn default_prevalence(self) -> f64 {
        match self {
            Signal::CustomerInfo => 0.76,
            Signal::Certifications => 0.90,
            Signal::Personnel => 0.85,
            Signal::Publications => 0.70,
            Signal::Systems => 0.33,
            Signal::CustomerLogos => 0.50,
            Signal::CustomerNames => 0.50,
            Signal::Facilities => 1.0,
            Signal::LegalData => 0.80,
            Signal::Partners => 0.40,
            Signal::Terms => 0.60,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("unknown signal {0}")]
    UnknownSignal(String),
    #[error("prevalence of {0} is {1}, expected a probability in [0, 1]")]
    BadProbability(String, f64),
    #[error("invalid prevalence file: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusParams {
    pub n: usize,
    pub seed: u64,
    pub prevalence: BTreeMap<Signal, f64>,
}

impl CorpusParams {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            prevalence: Signal::ALL
                .into_iter()
                .map(|s| (s, s.default_prevalence()))
                .collect(),
        }
    }

    pub fn set(&mut self, signal: Signal, p: f64) -> Result<(), CorpusError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(CorpusError::BadProbability(signal.key().into(), p));
        }
        self.prevalence.insert(signal, p);
        Ok(())
    }

    /// Overrides prevalences from a JSON object such as
    /// `{"systems": 0.5}`; signals not mentioned keep their defaults.
    pub fn apply_overrides(&mut self, json: &str) -> Result<(), CorpusError> {
        let map: BTreeMap<String, f64> =
            serde_json::from_str(json).map_err(|e| CorpusError::Json(e.to_string()))?;
        for (key, p) in map {
            let signal = Signal::from_key(&key).ok_or(CorpusError::UnknownSignal(key))?;
            self.set(signal, p)?;
        }
        Ok(())
    }

    pub fn p(&self, signal: Signal) -> f64 {
        self.prevalence
            .get(&signal)
            .copied()
            .unwrap_or_else(|| signal.default_prevalence())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedDocument {
    pub index: usize,
    pub file_name: String,
    pub text: String,
}

pub fn generate_corpus(params: &CorpusParams) -> Vec<GeneratedDocument> {
    (0..params.n)
        .map(|index| GeneratedDocument {
            index,
            file_name: format!("provider-{index:05}.stad"),
            text: generate_document(params, index),
        })
        .collect()
}

const SYLLABLES: &[&str] = &[
    "al", "ber", "cor", "dan", "el", "fer", "gal", "hor", "in", "kar", "lin", "mer", "nor",
    "os", "pra", "quin", "ros", "sta", "tek", "ul", "vor", "wen", "zel",
];
const FORMS: &[&str] = &["GmbH", "AG", "KG", "s.r.o.", "Ltd", "SE"];
const TITLES: &[&str] = &[
    "Managing Director", "Head of Sales", "Quality Manager", "Key Account Manager",
    "Production Lead", "Design Engineer",
];
const STANDARDS: &[&str] = &[
    "ISO 9001:2015", "ISO 14001:2015", "IATF 16949", "ISO/IEC 27001", "EN 9100",
    "ISO 45001", "Supplier Quality Award", "Best Employer 2022",
];
const MANUFACTURERS: &[&str] = &["DMG MORI", "Trumpf", "Mazak", "Zeiss", "Engel", "Kuka"];
const TERMS: &[&str] = &["general", "delivery", "purchasing", "sales", "policy"];

struct Gen {
    rng: ChaCha8Rng,
    out: String,
    base: String,
}

impl Gen {
    fn word(&mut self) -> String {
        let parts = self.rng.gen_range(2..=3);
        let mut w = String::new();
        for _ in 0..parts {
            w.push_str(SYLLABLES[self.rng.gen_range(0..SYLLABLES.len())]);
        }
        let mut chars = w.chars();
        let first = chars.next().unwrap().to_ascii_uppercase();
        std::iter::once(first).chain(chars).collect()
    }

    fn pick<'a>(&mut self, items: &[&'a str]) -> &'a str {
        items[self.rng.gen_range(0..items.len())]
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p.clamp(0.0, 1.0))
    }

    fn digits(&mut self, n: usize) -> String {
        (0..n).map(|_| char::from(b'0' + self.rng.gen_range(0..10u8))).collect()
    }

    fn node(&self, local: &str) -> String {
        format!("<{}{local}>", self.base)
    }

    fn link(&self, path: &str) -> String {
        format!("<{}{path}>", self.base.replace("/id/", "/"))
    }

    fn stmt(&mut self, subject: &str, pairs: &[(&str, String)]) {
        let _ = write!(self.out, "{subject}");
        for (i, (p, o)) in pairs.iter().enumerate() {
            let sep = if i == 0 { " " } else { " ;\n    " };
            let _ = write!(self.out, "{sep}{p} {o}");
        }
        self.out.push_str(" .\n");
    }
}

fn lit(s: &str) -> String {
    format!("\"{s}\"")
}

/// Text of document `index`.
pub fn generate_document(params: &CorpusParams, index: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index as u64);
    let mut g = Gen {
        rng,
        out: String::new(),
        base: format!("https://supplier-{index:05}.example.net/id/"),
    };
    for (label, iri) in default_namespace_table().iter() {
        let _ = writeln!(g.out, "@prefix {label}: <{iri}> .");
    }
    g.out.push('\n');

    let on = |g: &mut Gen, s: Signal| g.chance(params.p(s));
    let customer_info = on(&mut g, Signal::CustomerInfo);
    let p_refs = params.p(Signal::CustomerInfo);
    let conditional = |p: f64| if p_refs > 0.0 { (p / p_refs).min(1.0) } else { 0.0 };
    let logos = customer_info && g.chance(conditional(params.p(Signal::CustomerLogos)));
    let names = customer_info && g.chance(conditional(params.p(Signal::CustomerNames)));
    let certifications = on(&mut g, Signal::Certifications);
    let personnel = on(&mut g, Signal::Personnel);
    let publications = on(&mut g, Signal::Publications);
    let systems = on(&mut g, Signal::Systems);
    let facilities = on(&mut g, Signal::Facilities) || systems;
    let legal = on(&mut g, Signal::LegalData);
    let partners = on(&mut g, Signal::Partners);
    let terms = on(&mut g, Signal::Terms);

    let provider = g.node("provider");
    let company = format!("{} {}", g.word(), g.pick(FORMS));
    g.stmt(
        &provider,
        &[("a", "usdl:Provider".into()), ("schema:name", lit(&company))],
    );
    let site = g.node("website");
    let url = g.link("");
    g.stmt(
        &site,
        &[("a", "usdl-trust:ProviderWebsite".into()), ("schema:url", url)],
    );
    g.stmt(&provider, &[("usdl-trust:hasWebsite", site)]);

    if legal {
        let node = g.node("legal");
        let mut pairs = vec![("a", "usdl-trust:LegalData".to_string())];
        let vat = format!("ATU{}", g.digits(8));
        pairs.push(("usdl-trust:vat", lit(&vat)));
        if g.chance(0.7) {
            let crn = format!("FN {}a", g.digits(6));
            pairs.push(("usdl-trust:crn", lit(&crn)));
        }
        if g.chance(0.4) {
            let duns = g.digits(9);
            pairs.push(("usdl-trust:duns", lit(&duns)));
        }
        if g.chance(0.8) {
            let form = g.pick(FORMS);
            pairs.push(("usdl-trust:legalForm", lit(form)));
        }
        g.stmt(&node, &pairs);
        g.stmt(&provider, &[("usdl-trust:hasLegalData", node)]);
    }

    if customer_info {
        let count = g.rng.gen_range(1..=5);
        for i in 0..count {
            let node = g.node(&format!("ref-{i}"));
            let mut pairs = vec![("a", "usdl-trust:CustomerReference".to_string())];
            if names {
                let customer = format!("{} {}", g.word(), g.pick(FORMS));
                pairs.push(("usdl-trust:customerName", lit(&customer)));
            }
            if logos {
                pairs.push(("schema:logo", g.link(&format!("img/customer-{i}.png"))));
            }
            if g.chance(0.5) {
                pairs.push(("usdl-trust:productImage", g.link(&format!("img/product-{i}.jpg"))));
            }
            if g.chance(0.6) {
                let text = format!("Series supply of {} parts.", g.word().to_lowercase());
                pairs.push(("usdl-trust:productDescription", lit(&text)));
            }
            if g.chance(0.5) {
                let tx = g.node(&format!("tx-{i}"));
                let date = format!(
                    "{}-{:02}-{:02}",
                    g.rng.gen_range(2005..=2024),
                    g.rng.gen_range(1..=12),
                    g.rng.gen_range(1..=28)
                );
                g.stmt(
                    &tx,
                    &[
                        ("a", "usdl-trust:Transaction".into()),
                        ("usdl-trust:transactionDate", format!("\"{date}\"^^xsd:date")),
                    ],
                );
                if g.chance(0.2) {
                    let nda = g.node(&format!("nda-{i}"));
                    g.stmt(
                        &nda,
                        &[
                            ("a", "usdl-trust:ConfidentialityAgreement".into()),
                            ("usdl-trust:appliesToTransaction", tx.clone()),
                        ],
                    );
                }
                pairs.push(("usdl-trust:hasTransaction", tx));
            }
            g.stmt(&node, &pairs);
            g.stmt(&provider, &[("usdl-trust:hasReference", node)]);
        }
    }

    if certifications {
        let count = g.rng.gen_range(1..=3);
        for i in 0..count {
            let node = g.node(&format!("cert-{i}"));
            let standard = g.pick(STANDARDS);
            let mut pairs = vec![
                ("a", "usdl-trust:Certification".to_string()),
                ("usdl-trust:standard", lit(standard)),
            ];
            if g.chance(0.6) {
                let issuer = format!("{} Cert", g.word());
                pairs.push(("usdl-trust:issuer", lit(&issuer)));
            }
            if g.chance(0.5) {
                pairs.push(("usdl-trust:certificateDocument", g.link(&format!("docs/cert-{i}.pdf"))));
            }
            g.stmt(&node, &pairs);
            g.stmt(&provider, &[("usdl-trust:hasCertification", node)]);
        }
    }

    if facilities {
        let count = g.rng.gen_range(1..=2);
        for i in 0..count {
            let node = g.node(&format!("site-{i}"));
            let address = format!("{}straße {}, {} {}", g.word(), g.rng.gen_range(1..=99), g.digits(4), g.word());
            let mut pairs = vec![
                ("a", "usdl-trust:Facility".to_string()),
                ("usdl-trust:address", lit(&address)),
            ];
            if g.chance(0.6) {
                pairs.push(("usdl-trust:hasImage", g.link(&format!("img/site-{i}.jpg"))));
            }
            if g.chance(0.5) {
                pairs.push(("usdl-trust:belongsToOrganization", g.link("")));
            }
            let kpis = g.rng.gen_range(0..=3);
            for k in 0..kpis {
                let kpi = g.node(&format!("site-{i}-kpi-{k}"));
                let value = g.rng.gen_range(1..=9999);
                g.stmt(
                    &kpi,
                    &[
                        ("a", "usdl-trust:KPI".into()),
                        ("schema:name", lit(&format!("indicator {k}"))),
                        ("schema:value", value.to_string()),
                    ],
                );
                pairs.push(("usdl-trust:hasKPI", kpi));
            }
            if systems && i == 0 {
                let n = g.rng.gen_range(1..=3);
                for s in 0..n {
                    let sys = g.node(&format!("system-{s}"));
                    let kind = g.pick(SYSTEM_KINDS);
                    let name = format!("{} {}", g.word(), g.rng.gen_range(100..=999));
                    let mut sp = vec![
                        ("a", "usdl-trust:ProviderSystem".to_string()),
                        ("schema:name", lit(&name)),
                        ("usdl-trust:systemKind", lit(kind)),
                    ];
                    if g.chance(0.6) {
                        let m = g.pick(MANUFACTURERS);
                        sp.push(("schema:manufacturer", lit(m)));
                    }
                    if g.chance(0.5) {
                        sp.push(("schema:image", g.link(&format!("img/system-{s}.jpg"))));
                    }
                    if g.chance(0.4) {
                        sp.push(("schema:description", lit("Production system in daily use.")));
                    }
                    g.stmt(&sys, &sp);
                    pairs.push(("usdl-trust:hasSystem", sys));
                }
            }
            g.stmt(&node, &pairs);
            g.stmt(&provider, &[("usdl-trust:hasFacility", node)]);
        }
    }

    if personnel {
        let count = g.rng.gen_range(1..=4);
        for i in 0..count {
            let node = g.node(&format!("person-{i}"));
            let name = format!("{} {}", g.word(), g.word());
            let mut pairs = vec![
                ("a", "usdl-trust:Employee".to_string()),
                ("schema:name", lit(&name)),
            ];
            if g.chance(0.7) {
                let title = g.pick(TITLES);
                pairs.push(("schema:jobTitle", lit(title)));
            }
            if g.chance(0.5) {
                pairs.push(("schema:email", lit(&format!("person{i}@supplier-{index:05}.example.net"))));
            }
            if g.chance(0.4) {
                let phone = format!("+43 {}", g.digits(8));
                pairs.push(("schema:telephone", lit(&phone)));
            }
            if g.chance(0.5) {
                pairs.push(("schema:image", g.link(&format!("img/person-{i}.jpg"))));
            }
            if g.chance(0.3) {
                pairs.push(("schema:knowsAbout", lit("process engineering")));
            }
            g.stmt(&node, &pairs);
            g.stmt(&provider, &[("usdl-trust:hasEmployee", node)]);
        }
    }

    if partners {
        let count = g.rng.gen_range(1..=3);
        for i in 0..count {
            let node = g.node(&format!("partner-{i}"));
            let name = format!("{} {}", g.word(), g.pick(FORMS));
            let mut pairs = vec![
                ("a", "usdl-trust:Partner".to_string()),
                ("schema:name", lit(&name)),
            ];
            if g.chance(0.5) {
                pairs.push(("schema:description", lit("Long-standing supply partner.")));
            }
            if g.chance(0.5) {
                pairs.push(("schema:logo", g.link(&format!("img/partner-{i}.png"))));
            }
            if g.chance(0.3) {
                pairs.push(("usdl-trust:socialNetwork", format!("<https://social.example.com/p{index}-{i}>")));
            }
            g.stmt(&node, &pairs);
            g.stmt(&provider, &[("usdl-trust:hasPartner", node)]);
        }
    }

    if publications {
        let count = g.rng.gen_range(1..=3);
        for i in 0..count {
            let node = g.node(&format!("pub-{i}"));
            let kind = g.pick(PUBLICATION_KINDS);
            let source = if g.chance(0.5) { "professional" } else { "internal" };
            let title = format!("{} {} report", g.word(), g.rng.gen_range(2010..=2024));
            g.stmt(
                &node,
                &[
                    ("a", "usdl-trust:Publication".into()),
                    ("dc:title", lit(&title)),
                    ("usdl-trust:publicationKind", lit(kind)),
                    ("usdl-trust:publicationSource", lit(source)),
                ],
            );
            g.stmt(&provider, &[("usdl-trust:hasPublication", node)]);
        }
    }

    if terms {
        let count = g.rng.gen_range(1..=2);
        for i in 0..count {
            let node = g.node(&format!("terms-{i}"));
            let kind = g.pick(TERMS);
            let document = if g.chance(0.7) {
                ("usdl-trust:termsDocument", g.link(&format!("docs/terms-{i}.pdf")))
            } else {
                ("usdl-trust:termsText", lit("Orders are governed by these terms."))
            };
            g.stmt(
                &node,
                &[
                    ("a", "usdl-trust:Terms".into()),
                    ("usdl-trust:termsKind", lit(kind)),
                    document,
                ],
            );
            g.stmt(&provider, &[("usdl-trust:hasTerms", node)]);
        }
    }

    g.out
}
