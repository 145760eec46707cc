//! Trust scoring: expert weights, category rubrics, aggregation and ranking.

mod report;
mod rubric;
mod weights;

pub use report::{
    aggregate_trust, compare, four_dp, rank, rank_order, BreakdownEntry, CategoryDelta,
    CompareError, DeltaReport, TrustScoreReport,
};
pub use rubric::{
    certification_points, employee_points, facility_points, filter_references,
    is_recognized_standard, partner_points, publishable_references, reference_points,
    score_category, system_points, AnalyticsEvidence, CategoryScore, PUBLICATION_CAP,
    STANDARD_BODIES, TENURE_CAP_YEARS, TOP_CERTIFICATIONS, TOP_EMPLOYEES, TOP_PARTNERS,
    TOP_REFERENCES, TOP_SYSTEMS, VERIFIED_TRANSACTION_CAP,
};
pub use weights::{
    decimal_ratio, default_weight_profile, moscow_to_weight, ratio_to_f64, MoscowRating,
    WeightError, WeightProfile,
};
