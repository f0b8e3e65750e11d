/// Bounds on the exhaustive enumerations performed by the analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for which all 2^n configurations may be scanned.
    pub max_configuration_bits: usize,
    /// Largest dimension for the 3^n sub-hypercube oracle.
    pub max_oracle_dimension: usize,
    /// Largest dimension for building a full asynchronous transition graph.
    pub max_stg_dimension: usize,
    /// Largest number of free components of a partial source configuration.
    pub max_source_completion_bits: usize,
    /// Largest number of networks an implicit domain may materialize.
    pub max_domain_size: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_configuration_bits: 24,
            max_oracle_dimension: 12,
            max_stg_dimension: 16,
            max_source_completion_bits: 12,
            max_domain_size: 100_000,
        }
    }
}
