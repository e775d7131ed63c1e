pub mod boolean_ring;
pub mod cancel;
pub mod cfg_ring;
pub mod cli;
pub mod contractive_maps;
pub mod error;
pub mod metric_space;
pub mod oracle;
pub mod polynomials;
pub mod serial;
pub mod span;
