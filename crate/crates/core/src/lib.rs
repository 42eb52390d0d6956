//! Shifts of finite type, sliding block codes and their automorphisms,
//! coding ranges, the dimension representation, entropy estimates and
//! spectral realization checks.

pub mod error;
pub mod builtins;
pub mod code;
pub mod coding_range;
pub mod dimension;
pub mod entropy;
pub mod eventual;
pub mod matrix;
pub mod perron;
pub mod poly;
pub mod rational;
pub mod report;
pub mod shift;
pub mod spectra;
pub mod suite;
pub mod system;
pub mod words;

pub use error::{Error, Result};
pub use eventual::{dimension_data, DimensionData};
pub use matrix::NonnegIntMatrix;
pub use perron::{perron_data, PerronData};
pub use shift::{kronecker_product, transpose_shift, Edge, EdgeId, EdgeShift, State};
