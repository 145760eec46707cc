//! VAT number checks.

use chrono::{DateTime, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VatCheckResult {
    pub vat: String,
    pub format_valid: bool,
    pub checked_at: DateTime<Utc>,
}

/// Decides whether a VAT number is acceptable. Implementations may call an
/// external registry.
pub trait VatVerifier: Send + Sync {
    fn check(&self, vat: &str) -> bool;
}

/// Offline format check: two uppercase letters, then 2 to 12 letters or
/// digits.
#[derive(Debug, Clone)]
pub struct MockVatVerifier {
    pattern: Regex,
}

pub const EU_VAT_PATTERN: &str = "^[A-Z]{2}[A-Za-z0-9]{2,12}$";

impl Default for MockVatVerifier {
    fn default() -> Self {
        Self {
            pattern: Regex::new(EU_VAT_PATTERN).expect("pattern compiles"),
        }
    }
}

impl VatVerifier for MockVatVerifier {
    fn check(&self, vat: &str) -> bool {
        self.pattern.is_match(vat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mock_pattern() {
        let v = MockVatVerifier::default();
        assert!(v.check("ATU12345678"));
        assert!(v.check("DE12"));
        assert!(!v.check("12345"));
        assert!(!v.check("DE"));
        assert!(!v.check("DE1"));
        assert!(!v.check("de123456"));
        assert!(!v.check("ATU1234567890123"));
        assert!(!v.check("AT U123"));
    }
}
