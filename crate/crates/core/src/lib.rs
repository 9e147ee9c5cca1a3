pub mod bounds;
pub mod cme;
pub mod dm;
pub mod error;
pub mod gap;
pub mod gaussian;
pub mod geometry;
pub mod info;

pub use bounds::{BoundSet, TwoRoundBounds};
pub use cme::EncoderConferencing;
pub use dm::{DmChannel, DmInputDistribution, DmTestChannels};
pub use error::{Error, Result};
pub use gap::{BroadcastInstance, GapReport};
pub use gaussian::{GaussianCmChannel, PowerSplit, QuantizationNoise, Scheme};
pub use geometry::{GridSpec, Halfspace, R0Mode, RateRegion, RegionMeta};
