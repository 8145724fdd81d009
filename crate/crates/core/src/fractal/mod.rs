//! Dimension estimators and the closed-form spectrum formulas.

mod boxdim;
mod index;
mod local;
mod spectrum;

pub use boxdim::{box_dimension, image_dim_bounds, BoxCounter, BoxDimEstimate, ImageDimReport};
pub use index::{index_range, IndexSet, Mode, Segment, Window, DEFAULT_GAP_RESOLUTION};
pub use local::{
    geometric_radii, local_dim, stream_subordinator_balls, typical_behavior_report,
    LocalDimEstimate, LocalDimWindow, TypicalBehavior, TypicalSample, MIN_BALL_ATOMS,
};
pub use spectrum::{
    exceptional_sets, exceptional_value, g_spectrum, general_spectrum_value, lower_spectrum,
    spectrum_envelope, upsilon_profile, DimValue, ExceptionalBranch, ExceptionalCase,
    ExceptionalJump, ExceptionalOutcome, SpectrumCase, SpectrumValue, Variant,
};
