//! Survey weighting, strategic-voter classification, representation
//! metrics, threshold and truncation sweeps, and the noise model.

mod metrics;
mod noise;
mod stats;
mod strategic;
mod survey;

pub use metrics::*;
pub use noise::*;
pub use stats::*;
pub use strategic::*;
pub use survey::*;
