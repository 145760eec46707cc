//! MoSCoW ratings and category weight profiles.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vocab::TrustCategory;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("MoSCoW rating {0} outside [1, 4]")]
    RatingOutOfRange(String),
    #[error("weight for {category} is {value}, expected a number in [0, 1]")]
    WeightOutOfRange { category: String, value: String },
    #[error("weight profile has no positive weight")]
    AllZero,
    #[error("weight profile is missing {0}")]
    MissingCategory(String),
    #[error("weight profile has unknown key {0}")]
    UnknownCategory(String),
    #[error("scale factor {0} must be positive and finite")]
    BadScale(String),
    #[error("invalid weight profile JSON: {0}")]
    Json(String),
}

/// Exact rational value of the shortest decimal that round-trips `x`.
///
/// `0.1` becomes 1/10 rather than the binary fraction nearest to it.
pub fn decimal_ratio(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let text = format!("{x}");
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let numer: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Nearest `f64` to an exact rational.
///
/// Expands 40 significant decimal digits plus a sticky digit and lets the
/// standard float parser round, which is correct far beyond `f64` precision.
pub fn ratio_to_f64(value: &BigRational) -> f64 {
    const DIGITS: usize = 40;
    let negative = value.is_negative();
    let numer = value.numer().abs();
    let denom = value.denom().clone();
    let int_part = &numer / &denom;
    let mut rem = &numer % &denom;
    let mut text = String::new();
    if negative {
        text.push('-');
    }
    text.push_str(&int_part.to_string());
    text.push('.');
    let mut significant = if int_part.is_zero() { 0 } else { int_part.to_string().len() };
    let ten = BigInt::from(10);
    let mut emitted = 0;
    while !rem.is_zero() && significant < DIGITS && emitted < 1200 {
        rem *= &ten;
        let digit = &rem / &denom;
        rem %= &denom;
        if significant > 0 || !digit.is_zero() {
            significant += 1;
        }
        text.push_str(&digit.to_string());
        emitted += 1;
    }
    if !rem.is_zero() {
        text.push('1');
    }
    text.parse().unwrap_or(f64::NAN)
}

/// Average expert rating on the MoSCoW scale: 1 must, 2 should, 3 could,
/// 4 won't.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MoscowRating(BigRational);

impl MoscowRating {
    pub fn new(value: f64) -> Result<Self, WeightError> {
        let exact = decimal_ratio(value).ok_or_else(|| WeightError::RatingOutOfRange(value.to_string()))?;
        Self::from_ratio(exact)
    }

    /// Rating given in tenths, so `from_tenths(12)` is 1.2.
    pub fn from_tenths(tenths: u32) -> Result<Self, WeightError> {
        Self::from_ratio(BigRational::new(tenths.into(), 10.into()))
    }

    fn from_ratio(value: BigRational) -> Result<Self, WeightError> {
        if value < BigRational::one() || value > BigRational::from_integer(4.into()) {
            return Err(WeightError::RatingOutOfRange(format!("{}", ratio_to_f64(&value))));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        ratio_to_f64(&self.0)
    }

    pub fn exact(&self) -> &BigRational {
        &self.0
    }

    /// (4 - r) / 3, exactly.
    pub fn weight(&self) -> BigRational {
        (BigRational::from_integer(4.into()) - &self.0) / BigRational::from_integer(3.into())
    }
}

impl fmt::Display for MoscowRating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

pub fn moscow_to_weight(rating: &MoscowRating) -> f64 {
    ratio_to_f64(&rating.weight())
}

/// Rational weight per category plus a profile name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    name: String,
    weights: BTreeMap<TrustCategory, BigRational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightFile {
    name: String,
    weights: BTreeMap<String, f64>,
}

impl WeightProfile {
    pub fn from_exact(
        name: impl Into<String>,
        weights: BTreeMap<TrustCategory, BigRational>,
    ) -> Result<Self, WeightError> {
        for category in TrustCategory::ALL {
            let value = weights
                .get(&category)
                .ok_or_else(|| WeightError::MissingCategory(category.name().into()))?;
            if value.is_negative() || *value > BigRational::one() {
                return Err(WeightError::WeightOutOfRange {
                    category: category.name().into(),
                    value: ratio_to_f64(value).to_string(),
                });
            }
        }
        if weights.values().all(Zero::is_zero) {
            return Err(WeightError::AllZero);
        }
        Ok(Self {
            name: name.into(),
            weights,
        })
    }

    /// Builds a profile from decimal weights; every category must be given.
    pub fn new(
        name: impl Into<String>,
        weights: &BTreeMap<TrustCategory, f64>,
    ) -> Result<Self, WeightError> {
        let mut exact = BTreeMap::new();
        for (&category, &value) in weights {
            let ratio = decimal_ratio(value).ok_or_else(|| WeightError::WeightOutOfRange {
                category: category.name().into(),
                value: value.to_string(),
            })?;
            exact.insert(category, ratio);
        }
        Self::from_exact(name, exact)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weight(&self, category: TrustCategory) -> f64 {
        ratio_to_f64(&self.weights[&category])
    }

    pub fn exact(&self, category: TrustCategory) -> &BigRational {
        &self.weights[&category]
    }

    pub fn total(&self) -> BigRational {
        self.weights.values().fold(BigRational::zero(), |acc, w| acc + w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (TrustCategory, &BigRational)> {
        self.weights.iter().map(|(c, w)| (*c, w))
    }

    /// Every weight multiplied by `k`; fails if a result leaves [0, 1].
    pub fn scaled(&self, k: f64) -> Result<Self, WeightError> {
        let factor = decimal_ratio(k)
            .filter(|f| f.is_positive())
            .ok_or_else(|| WeightError::BadScale(k.to_string()))?;
        let weights = self
            .weights
            .iter()
            .map(|(c, w)| (*c, w * &factor))
            .collect();
        Self::from_exact(self.name.clone(), weights)
    }

    /// Parses `{"name": ..., "weights": {"LegalData": 0.93, ...}}` with
    /// exactly the ten category keys.
    pub fn from_json(text: &str) -> Result<Self, WeightError> {
        let file: WeightFile =
            serde_json::from_str(text).map_err(|e| WeightError::Json(e.to_string()))?;
        let mut weights = BTreeMap::new();
        for (key, value) in file.weights {
            let category =
                TrustCategory::from_name(&key).ok_or(WeightError::UnknownCategory(key))?;
            weights.insert(category, value);
        }
        Self::new(file.name, &weights)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::Map::new();
        for category in TrustCategory::ALL {
            out.insert(category.name().into(), self.weight(category).into());
        }
        serde_json::json!({ "name": self.name, "weights": out }).to_string()
    }
}

/// Weights from the averaged expert ratings.
pub fn default_weight_profile() -> WeightProfile {
    let weights = TrustCategory::ALL
        .into_iter()
        .map(|c| {
            let rating = MoscowRating::from_tenths(c.expert_rating_tenths())
                .expect("expert ratings lie on the scale");
            (c, rating.weight())
        })
        .collect();
    WeightProfile::from_exact("default", weights).expect("default weights are valid")
}
