//! Search-space and code-size guards.
//!
//! The cardinality functions grow as towers of exponentials, so every
//! operation that enumerates relations or materializes codes checks against
//! these limits first. The limits are configuration, not semantics.

/// Guards applied by enumeration, counting, and the order reducer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum tuple-space size for quantifier expansion and fixed-point
    /// stages (number of tuples of the relevant type).
    pub max_enum: u64,
    /// Maximum bit length of any computed count or code.
    pub max_code_bits: u64,
    /// Maximum universe size produced by the order reducer.
    pub max_target_universe: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_enum: 1 << 24,
            max_code_bits: 1 << 20,
            max_target_universe: 1 << 16,
        }
    }
}

impl Limits {
    /// Reads overrides from `HOQ_MAX_ENUM`, `HOQ_MAX_CODE_BITS`, and
    /// `HOQ_MAX_TARGET_UNIVERSE`. Unset or unparsable variables keep the
    /// defaults.
    pub fn from_env() -> Self {
        fn var(name: &str) -> Option<u64> {
            std::env::var(name).ok()?.parse().ok()
        }
        let mut limits = Limits::default();
        if let Some(v) = var("HOQ_MAX_ENUM") {
            limits.max_enum = v;
        }
        if let Some(v) = var("HOQ_MAX_CODE_BITS") {
            limits.max_code_bits = v;
        }
        if let Some(v) = var("HOQ_MAX_TARGET_UNIVERSE") {
            limits.max_target_universe = v;
        }
        limits
    }
}
