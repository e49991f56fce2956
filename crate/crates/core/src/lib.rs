//! Gradual semantics for abstract argumentation frameworks, Shapley-based
//! attack intensities, argument impact measures and an empirical audit of
//! impact-measure principles.

pub mod af;
pub mod attribution;
pub mod fixtures;
pub mod impact;
pub mod principles;
pub mod semantics;
pub mod verdict;

pub use af::{ArgumentSet, ArgumentationFramework, Attack, AfError};
pub use attribution::{shapley_all, shapley_attack, ShapleyConfig, ShapleyMeasure, ShapleyMode};
pub use impact::{imp_dv, imp_dv_original, imp_si, ImpactValue, Measure, Polarity, SeriesConfig};
pub use principles::{audit, check_principle, AuditConfig, AuditReport, PrincipleId, PrincipleVerdict};
pub use semantics::{degrees, SemanticsKind, SemanticsSpec, Weighting};
pub use verdict::Verdict;
