//! Enumeration and table bounds shared by every module.

/// Name of the environment variable that caps enumeration output size.
pub const MAX_ENUM_ENV: &str = "OSCTAB_MAX_ENUM";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of objects a single enumeration may produce.
    pub max_enum: usize,
    /// Largest |λ| accepted by [`crate::partition::enumerate_syt`].
    pub max_syt_size: usize,
    /// Largest l accepted by [`crate::diffposet::power_ud_coefficient`].
    pub max_power_length: usize,
    /// Largest l_max accepted by [`crate::diffposet::q_table`].
    pub max_q_length: usize,
    /// Largest n accepted by [`crate::matching::enumerate_matchings`].
    pub max_matching_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_enum: 10_000_000,
            max_syt_size: 12,
            max_power_length: 14,
            max_q_length: 16,
            max_matching_n: 8,
        }
    }
}

impl Limits {
    /// Defaults, with `max_enum` overridden by `OSCTAB_MAX_ENUM` when it parses.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(MAX_ENUM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            limits.max_enum = cap;
        }
        limits
    }
}
