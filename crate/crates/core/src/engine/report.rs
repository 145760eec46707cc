//! Aggregation, ranking and comparison.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde_json::value::RawValue;
use thiserror::Error;

use super::rubric::{publishable_references, score_category, AnalyticsEvidence, CategoryScore};
use super::weights::{ratio_to_f64, WeightProfile};
use crate::stad::{ProviderProfile, TransactionRef};
use crate::vocab::TrustCategory;

/// Fixed four-decimal rendering used in all external output.
pub fn four_dp(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(four_dp(x)).expect("fixed-point decimals are valid JSON")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BreakdownEntry {
    pub score: CategoryScore,
    pub weight: f64,
    pub contribution: f64,
}

impl Serialize for BreakdownEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BreakdownEntry", 5)?;
        s.serialize_field("category", &self.score.category)?;
        s.serialize_field("score", &raw(self.score.score))?;
        s.serialize_field("weight", &raw(self.weight))?;
        s.serialize_field("contribution", &raw(self.contribution))?;
        s.serialize_field("evidence_count", &self.score.evidence_count)?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrustScoreReport {
    pub provider_id: String,
    pub weight_profile: String,
    pub aggregate: f64,
    pub breakdown: Vec<BreakdownEntry>,
    aggregate_exact: BigRational,
}

impl TrustScoreReport {
    pub fn aggregate_exact(&self) -> &BigRational {
        &self.aggregate_exact
    }

    pub fn category(&self, category: TrustCategory) -> &CategoryScore {
        &self
            .breakdown
            .iter()
            .find(|e| e.score.category == category)
            .expect("reports cover every category")
            .score
    }

    /// Compact JSON with four-decimal numbers.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl Serialize for TrustScoreReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TrustScoreReport", 4)?;
        s.serialize_field("provider_id", &self.provider_id)?;
        s.serialize_field("aggregate", &raw(self.aggregate))?;
        s.serialize_field("breakdown", &self.breakdown)?;
        s.serialize_field("weight_profile", &self.weight_profile)?;
        s.end()
    }
}

fn ratio_of(score: &CategoryScore) -> BigRational {
    let exact = score.exact();
    BigRational::new(BigInt::from(*exact.numer()), BigInt::from(*exact.denom()))
}

/// Scores all ten categories and combines them as `Σ w·s / Σ w`.
pub fn aggregate_trust(
    profile: &ProviderProfile,
    weights: &WeightProfile,
    analytics: Option<&AnalyticsEvidence>,
    transactions: &[TransactionRef],
) -> TrustScoreReport {
    let published = publishable_references(profile, transactions);
    let total = weights.total();
    let mut numerator = BigRational::zero();
    let mut breakdown = Vec::with_capacity(TrustCategory::ALL.len());
    for category in TrustCategory::ALL {
        let score = score_category(profile, category, analytics, &published);
        let weighted = weights.exact(category) * ratio_of(&score);
        let contribution = &weighted / &total;
        numerator += weighted;
        breakdown.push(BreakdownEntry {
            weight: weights.weight(category),
            contribution: ratio_to_f64(&contribution),
            score,
        });
    }
    let aggregate_exact = numerator / total;
    TrustScoreReport {
        provider_id: profile.provider_id.clone(),
        weight_profile: weights.name().to_string(),
        aggregate: ratio_to_f64(&aggregate_exact),
        breakdown,
        aggregate_exact,
    }
}

/// Provider ids by descending aggregate, ties by ascending id.
pub fn rank(reports: &[TrustScoreReport]) -> Vec<String> {
    rank_order(reports)
        .into_iter()
        .map(|i| reports[i].provider_id.clone())
        .collect()
}

/// Indices of `reports` in rank order. Reports with equal aggregate and
/// provider id keep their input order.
pub fn rank_order(reports: &[TrustScoreReport]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..reports.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&reports[a], &reports[b]);
        y.aggregate_exact()
            .cmp(x.aggregate_exact())
            .then_with(|| x.provider_id.cmp(&y.provider_id))
    });
    order
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompareError {
    #[error("reports use different weight profiles: {0} vs {1}")]
    ProfileMismatch(String, String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryDelta {
    pub category: TrustCategory,
    pub delta: f64,
}

/// Differences `a - b`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaReport {
    pub a: String,
    pub b: String,
    pub weight_profile: String,
    pub aggregate_delta: f64,
    pub categories: Vec<CategoryDelta>,
}

impl Serialize for CategoryDelta {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CategoryDelta", 2)?;
        s.serialize_field("category", &self.category)?;
        s.serialize_field("delta", &raw(self.delta))?;
        s.end()
    }
}

impl Serialize for DeltaReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DeltaReport", 5)?;
        s.serialize_field("a", &self.a)?;
        s.serialize_field("b", &self.b)?;
        s.serialize_field("weight_profile", &self.weight_profile)?;
        s.serialize_field("aggregate_delta", &raw(self.aggregate_delta))?;
        s.serialize_field("categories", &self.categories)?;
        s.end()
    }
}

pub fn compare(a: &TrustScoreReport, b: &TrustScoreReport) -> Result<DeltaReport, CompareError> {
    if a.weight_profile != b.weight_profile {
        return Err(CompareError::ProfileMismatch(
            a.weight_profile.clone(),
            b.weight_profile.clone(),
        ));
    }
    let categories = TrustCategory::ALL
        .into_iter()
        .map(|c| CategoryDelta {
            category: c,
            delta: ratio_to_f64(&(ratio_of(a.category(c)) - ratio_of(b.category(c)))),
        })
        .collect();
    Ok(DeltaReport {
        a: a.provider_id.clone(),
        b: b.provider_id.clone(),
        weight_profile: a.weight_profile.clone(),
        aggregate_delta: ratio_to_f64(&(a.aggregate_exact() - b.aggregate_exact())),
        categories,
    })
}
