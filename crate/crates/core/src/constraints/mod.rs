//! Supporting constraints used by the application models.

mod alldiff;
mod bin_packing;
mod chi2;
mod element;
mod gcc;
mod linear;

pub use alldiff::{AllDifferent, PairwiseDifferent};
pub(crate) use alldiff::strongly_connected;
pub use bin_packing::BinPacking;
pub use chi2::{scaled_threshold, ScaledChi2};
pub use element::Element;
pub use gcc::GlobalCardinality;
pub use linear::{Linear, Relation};
