//! On-disk provider store.
//!
//! ```text
//! <root>/providers/<id>/document.stad   advertisement as submitted
//! <root>/providers/<id>/meta.json       id, provider IRI, registration date
//! <root>/providers/<id>/events.jsonl    append-only activity log
//! ```
//!
//! Every state change is appended to `events.jsonl` and synced before the
//! call returns; loading a store replays the logs. A provider directory is
//! built under a temporary name and renamed into place, so a crash during
//! registration leaves either nothing or a complete directory.

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{DateTime, NaiveDate, Utc};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use usdl_trust_core::engine::AnalyticsEvidence;
use usdl_trust_core::shapes::{validate_graph, ValidationReport};
use usdl_trust_core::stad::{
    content_id, extract_profile, parse_document, ExtractError, ParseError, ProviderProfile,
    TransactionRef,
};

use crate::clock::Clock;
use crate::vat::{VatCheckResult, VatVerifier};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("document does not parse: {0:?}")]
    Parse(ParseError),
    #[error("document has shape errors")]
    Invalid(ValidationReport),
    #[error("document does not describe exactly one provider: {0}")]
    Profile(ExtractError),
    #[error("unknown provider {0}")]
    UnknownProvider(String),
    #[error("unknown transaction {0}")]
    UnknownTransaction(String),
    #[error("rating {0} outside 1..=5")]
    BadRating(u8),
    #[error("{rater_id} already rated {tx_id}")]
    DuplicateRating { tx_id: String, rater_id: String },
    #[error("provider {0} has no VAT number")]
    NoVat(String),
    #[error("store I/O: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt store file {path}: {message}")]
    Corrupt { path: PathBuf, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderMeta {
    pub id: String,
    pub provider_iri: String,
    pub registered_at: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransactionRecord {
    pub tx_id: String,
    pub provider_id: String,
    pub customer_id: String,
    pub date: NaiveDate,
    pub confidential: bool,
    pub verified: bool,
    /// Transaction node in the advertisement this record stands for, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub document_tx: Option<String>,
}

impl TransactionRecord {
    pub fn as_ref(&self) -> TransactionRef {
        TransactionRef {
            id: self.document_tx.clone().unwrap_or_else(|| self.tx_id.clone()),
            date: self.date,
            confidential: self.confidential,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingRecord {
    pub tx_id: String,
    pub value: u8,
    pub rater_id: String,
    pub rater_verified: bool,
}

/// One line of `events.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Click,
    Transaction {
        tx_id: String,
        customer_id: String,
        date: NaiveDate,
        confidential: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        document_tx: Option<String>,
    },
    Verify {
        tx_id: String,
    },
    Rating {
        tx_id: String,
        value: u8,
        rater_id: String,
        rater_verified: bool,
    },
    VatCheck {
        vat: String,
        format_valid: bool,
        checked_at: DateTime<Utc>,
    },
}

/// Analytics snapshot as served by the API: the scoring evidence plus raw
/// totals that do not enter scoring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyticsSnapshot {
    pub provider_id: String,
    #[serde(flatten)]
    pub evidence: AnalyticsEvidence,
    pub total_transactions: u64,
    pub total_ratings: u64,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
struct State {
    clicks: u64,
    identity_verified: bool,
    transactions: BTreeMap<String, TransactionRecord>,
    ratings: Vec<RatingRecord>,
    next_tx: u64,
}

impl State {
    fn apply(&mut self, provider_id: &str, event: &Event) {
        match event {
            Event::Click => self.clicks += 1,
            Event::Transaction {
                tx_id,
                customer_id,
                date,
                confidential,
                document_tx,
            } => {
                self.next_tx += 1;
                self.transactions.insert(
                    tx_id.clone(),
                    TransactionRecord {
                        tx_id: tx_id.clone(),
                        provider_id: provider_id.to_string(),
                        customer_id: customer_id.clone(),
                        date: *date,
                        confidential: *confidential,
                        verified: false,
                        document_tx: document_tx.clone(),
                    },
                );
            }
            Event::Verify { tx_id } => {
                if let Some(tx) = self.transactions.get_mut(tx_id) {
                    tx.verified = true;
                }
            }
            Event::Rating {
                tx_id,
                value,
                rater_id,
                rater_verified,
            } => self.ratings.push(RatingRecord {
                tx_id: tx_id.clone(),
                value: *value,
                rater_id: rater_id.clone(),
                rater_verified: *rater_verified,
            }),
            Event::VatCheck { format_valid, .. } => {
                if *format_valid {
                    self.identity_verified = true;
                }
            }
        }
    }
}

struct Entry {
    meta: ProviderMeta,
    document: String,
    profile: ProviderProfile,
    state: Mutex<(State, File)>,
}

/// Provider as returned by a document fetch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredProvider {
    pub id: String,
    pub provider_iri: String,
    pub document: String,
    pub registered_at: NaiveDate,
    pub profile_clicks: u64,
    pub identity_verified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Registration {
    pub id: String,
    pub created: bool,
    pub report: ValidationReport,
}

/// Everything scoring needs about one provider.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringInputs {
    pub id: String,
    pub profile: ProviderProfile,
    pub analytics: AnalyticsEvidence,
    pub transactions: Vec<TransactionRef>,
}

pub struct Store {
    root: PathBuf,
    clock: Arc<dyn Clock>,
    verifier: Arc<dyn VatVerifier>,
    providers: RwLock<BTreeMap<String, Arc<Entry>>>,
    tx_owner: RwLock<HashMap<String, String>>,
}

fn append(file: &mut File, event: &Event) -> io::Result<()> {
    let mut line = serde_json::to_string(event).map_err(io::Error::other)?;
    line.push('\n');
    file.write_all(line.as_bytes())?;
    file.sync_data()
}

fn open_log(path: &Path) -> io::Result<File> {
    OpenOptions::new().create(true).append(true).open(path)
}

/// Reads an event log. A final line without its newline is a write that
/// never completed and is dropped; any other unreadable line is corruption.
pub fn read_events(path: &Path) -> Result<Vec<Event>, StoreError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(vec![]),
        Err(e) => return Err(e.into()),
    };
    let mut events = Vec::new();
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        if !line.ends_with('\n') {
            break;
        }
        let event = serde_json::from_str(line.trim_end()).map_err(|e| StoreError::Corrupt {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        events.push(event);
    }
    Ok(events)
}

fn fsync_dir(path: &Path) {
    if let Ok(dir) = File::open(path) {
        let _ = dir.sync_all();
    }
}

impl Store {
    /// Opens (or creates) a store and replays every provider's log.
    pub fn open(
        root: impl Into<PathBuf>,
        clock: Arc<dyn Clock>,
        verifier: Arc<dyn VatVerifier>,
    ) -> Result<Self, StoreError> {
        let root = root.into();
        let dir = root.join("providers");
        fs::create_dir_all(&dir)?;
        let store = Self {
            root,
            clock,
            verifier,
            providers: RwLock::new(BTreeMap::new()),
            tx_owner: RwLock::new(HashMap::new()),
        };
        let mut names: Vec<PathBuf> = fs::read_dir(&dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_dir() && p.extension().is_none())
            .collect();
        names.sort();
        for path in names {
            store.load_entry(&path)?;
        }
        Ok(store)
    }

    fn corrupt(path: &Path, message: impl ToString) -> StoreError {
        StoreError::Corrupt {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }

    fn load_entry(&self, dir: &Path) -> Result<(), StoreError> {
        let meta_path = dir.join("meta.json");
        let meta: ProviderMeta = serde_json::from_str(&fs::read_to_string(&meta_path)?)
            .map_err(|e| Self::corrupt(&meta_path, e))?;
        let doc_path = dir.join("document.stad");
        let document = fs::read_to_string(&doc_path)?;
        let graph = parse_document(&document).map_err(|e| Self::corrupt(&doc_path, format!("{e:?}")))?;
        let profile = extract_profile(&graph).map_err(|e| Self::corrupt(&doc_path, e))?;
        let log = dir.join("events.jsonl");
        let events = read_events(&log)?;
        let mut state = State::default();
        for event in &events {
            state.apply(&meta.id, event);
        }
        // rewrite a log whose last line was torn so appends start clean
        let on_disk = fs::read_to_string(&log).unwrap_or_default();
        if !on_disk.is_empty() && !on_disk.ends_with('\n') {
            let keep = on_disk.rfind('\n').map(|i| i + 1).unwrap_or(0);
            fs::write(&log, &on_disk[..keep])?;
        }
        let mut owners = self.tx_owner.write();
        for tx in state.transactions.keys() {
            owners.insert(tx.clone(), meta.id.clone());
        }
        let file = open_log(&log)?;
        self.providers.write().insert(
            meta.id.clone(),
            Arc::new(Entry {
                meta,
                document,
                profile,
                state: Mutex::new((state, file)),
            }),
        );
        Ok(())
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn provider_dir(&self, id: &str) -> PathBuf {
        self.root.join("providers").join(id)
    }

    fn entry(&self, id: &str) -> Result<Arc<Entry>, StoreError> {
        self.providers
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| StoreError::UnknownProvider(id.to_string()))
    }

    fn owner_of(&self, tx_id: &str) -> Result<Arc<Entry>, StoreError> {
        let owner = self
            .tx_owner
            .read()
            .get(tx_id)
            .cloned()
            .ok_or_else(|| StoreError::UnknownTransaction(tx_id.to_string()))?;
        self.entry(&owner)
    }

    /// Parses, validates and stores a document. Re-registering a document
    /// with the same canonical form returns the existing id.
    pub fn register(&self, document: &str) -> Result<Registration, StoreError> {
        let graph = parse_document(document).map_err(StoreError::Parse)?;
        let report = validate_graph(&graph);
        if !report.valid {
            return Err(StoreError::Invalid(report));
        }
        let profile = extract_profile(&graph).map_err(StoreError::Profile)?;
        let id = content_id(&graph);

        let mut providers = self.providers.write();
        if providers.contains_key(&id) {
            return Ok(Registration {
                id,
                created: false,
                report,
            });
        }
        let meta = ProviderMeta {
            id: id.clone(),
            provider_iri: profile.provider_id.clone(),
            registered_at: self.clock.today(),
        };
        let final_dir = self.provider_dir(&id);
        let tmp_dir = self.root.join("providers").join(format!("{id}.tmp"));
        let _ = fs::remove_dir_all(&tmp_dir);
        fs::create_dir_all(&tmp_dir)?;
        for (name, contents) in [
            ("document.stad", document.to_string()),
            (
                "meta.json",
                serde_json::to_string_pretty(&meta).map_err(io::Error::other)?,
            ),
            ("events.jsonl", String::new()),
        ] {
            let mut f = File::create(tmp_dir.join(name))?;
            f.write_all(contents.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp_dir, &final_dir)?;
        fsync_dir(&self.root.join("providers"));
        let file = open_log(&final_dir.join("events.jsonl"))?;
        providers.insert(
            id.clone(),
            Arc::new(Entry {
                meta,
                document: document.to_string(),
                profile,
                state: Mutex::new((State::default(), file)),
            }),
        );
        Ok(Registration {
            id,
            created: true,
            report,
        })
    }

    pub fn ids(&self) -> Vec<String> {
        self.providers.read().keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.providers.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Returns the document and counts the fetch as a profile click.
    pub fn fetch(&self, id: &str) -> Result<StoredProvider, StoreError> {
        let entry = self.entry(id)?;
        let mut guard = entry.state.lock();
        let (state, file) = &mut *guard;
        append(file, &Event::Click)?;
        state.apply(id, &Event::Click);
        Ok(StoredProvider {
            id: entry.meta.id.clone(),
            provider_iri: entry.meta.provider_iri.clone(),
            document: entry.document.clone(),
            registered_at: entry.meta.registered_at,
            profile_clicks: state.clicks,
            identity_verified: state.identity_verified,
        })
    }

    pub fn meta(&self, id: &str) -> Result<ProviderMeta, StoreError> {
        Ok(self.entry(id)?.meta.clone())
    }

    pub fn profile(&self, id: &str) -> Result<ProviderProfile, StoreError> {
        Ok(self.entry(id)?.profile.clone())
    }

    pub fn record_transaction(
        &self,
        provider_id: &str,
        customer_id: &str,
        date: NaiveDate,
        confidential: bool,
        document_tx: Option<String>,
    ) -> Result<TransactionRecord, StoreError> {
        let entry = self.entry(provider_id)?;
        let mut guard = entry.state.lock();
        let (state, file) = &mut *guard;
        let tx_id = format!("{provider_id}-t{:04}", state.next_tx + 1);
        let event = Event::Transaction {
            tx_id: tx_id.clone(),
            customer_id: customer_id.to_string(),
            date,
            confidential,
            document_tx,
        };
        append(file, &event)?;
        state.apply(provider_id, &event);
        self.tx_owner.write().insert(tx_id.clone(), provider_id.to_string());
        Ok(state.transactions[&tx_id].clone())
    }

    pub fn verify_transaction(&self, tx_id: &str) -> Result<TransactionRecord, StoreError> {
        let entry = self.owner_of(tx_id)?;
        let mut guard = entry.state.lock();
        let (state, file) = &mut *guard;
        if !state.transactions[tx_id].verified {
            let event = Event::Verify {
                tx_id: tx_id.to_string(),
            };
            append(file, &event)?;
            state.apply(&entry.meta.id, &event);
        }
        Ok(state.transactions[tx_id].clone())
    }

    pub fn record_rating(
        &self,
        tx_id: &str,
        value: u8,
        rater_id: &str,
        rater_verified: bool,
    ) -> Result<RatingRecord, StoreError> {
        let entry = self.owner_of(tx_id)?;
        if !(1..=5).contains(&value) {
            return Err(StoreError::BadRating(value));
        }
        let mut guard = entry.state.lock();
        let (state, file) = &mut *guard;
        if state
            .ratings
            .iter()
            .any(|r| r.tx_id == tx_id && r.rater_id == rater_id)
        {
            return Err(StoreError::DuplicateRating {
                tx_id: tx_id.to_string(),
                rater_id: rater_id.to_string(),
            });
        }
        let event = Event::Rating {
            tx_id: tx_id.to_string(),
            value,
            rater_id: rater_id.to_string(),
            rater_verified,
        };
        append(file, &event)?;
        state.apply(&entry.meta.id, &event);
        Ok(state.ratings.last().cloned().expect("rating just recorded"))
    }

    pub fn transactions(&self, provider_id: &str) -> Result<Vec<TransactionRecord>, StoreError> {
        let entry = self.entry(provider_id)?;
        let guard = entry.state.lock();
        Ok(guard.0.transactions.values().cloned().collect())
    }

    pub fn ratings(&self, provider_id: &str) -> Result<Vec<RatingRecord>, StoreError> {
        let entry = self.entry(provider_id)?;
        let guard = entry.state.lock();
        Ok(guard.0.ratings.clone())
    }

    pub fn analytics(&self, provider_id: &str) -> Result<AnalyticsSnapshot, StoreError> {
        let entry = self.entry(provider_id)?;
        let guard = entry.state.lock();
        Ok(snapshot(&entry.meta, &guard.0, self.clock.today()))
    }

    pub fn verify_vat(&self, provider_id: &str) -> Result<VatCheckResult, StoreError> {
        let entry = self.entry(provider_id)?;
        let vat = entry
            .profile
            .legal
            .as_ref()
            .and_then(|l| l.vat.clone())
            .ok_or_else(|| StoreError::NoVat(provider_id.to_string()))?;
        let result = VatCheckResult {
            format_valid: self.verifier.check(&vat),
            vat,
            checked_at: self.clock.now(),
        };
        let event = Event::VatCheck {
            vat: result.vat.clone(),
            format_valid: result.format_valid,
            checked_at: result.checked_at,
        };
        let mut guard = entry.state.lock();
        let (state, file) = &mut *guard;
        append(file, &event)?;
        state.apply(provider_id, &event);
        Ok(result)
    }

    pub fn scoring_inputs(&self, provider_id: &str) -> Result<ScoringInputs, StoreError> {
        let entry = self.entry(provider_id)?;
        let guard = entry.state.lock();
        Ok(ScoringInputs {
            id: entry.meta.id.clone(),
            profile: entry.profile.clone(),
            analytics: snapshot(&entry.meta, &guard.0, self.clock.today()).evidence,
            transactions: guard.0.transactions.values().map(TransactionRecord::as_ref).collect(),
        })
    }
}

/// Builds an analytics snapshot from the events of one provider, in order.
/// Shared by the live store and by log replay.
pub fn replay_analytics(meta: &ProviderMeta, events: &[Event], as_of: NaiveDate) -> AnalyticsSnapshot {
    let mut state = State::default();
    for event in events {
        state.apply(&meta.id, event);
    }
    snapshot(meta, &state, as_of)
}

fn snapshot(meta: &ProviderMeta, state: &State, as_of: NaiveDate) -> AnalyticsSnapshot {
    let verified: Vec<&String> = state
        .transactions
        .values()
        .filter(|t| t.verified)
        .map(|t| &t.tx_id)
        .collect();
    let verified_ratings = state
        .ratings
        .iter()
        .filter(|r| r.rater_verified && verified.contains(&&r.tx_id))
        .count() as u64;
    AnalyticsSnapshot {
        provider_id: meta.id.clone(),
        evidence: AnalyticsEvidence {
            registered_at: meta.registered_at,
            as_of,
            profile_clicks: state.clicks,
            verified_transactions: verified.len() as u64,
            verified_ratings,
            identity_verified: state.identity_verified,
        },
        total_transactions: state.transactions.len() as u64,
        total_ratings: state.ratings.len() as u64,
    }
}
