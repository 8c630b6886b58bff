mod case;
mod counterexample;
mod maximal;
mod presets;
mod ratio;
mod search;

pub use case::{suggested_s2, theta_rule, validate_case, EmbeddingCase, Failure, RawCase, ThetaRule, Verdict, BALANCE_TOL};
pub use counterexample::{
    counterexample_field, counterexample_field_trimmed, counterexample_row, necessity_slope, CounterexampleFields, NecessityReport,
    NecessityRow,
};
pub use maximal::{maximal_function, maximal_function_at, maximal_probe, probe_radii, MaximalReport};
pub use presets::{corollary_presets, Preset};
pub use ratio::{embedding_ratio, norm_ratio};
pub use search::{worst_ratio_search, SearchConfig, SearchResult, MAX_SUPPORT};
