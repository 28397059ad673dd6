//! Digit-frequency classes of s-adic expansions, the `f_p` embedding of
//! normal numbers into particularly non-normal ones, and the dimension of
//! their image sets.

pub mod digits;
pub mod dimension;
pub mod error;
pub mod frequency;
pub mod measure;
pub mod report;
pub mod serde_rational;
pub mod source;
pub mod stream;
pub mod transform;

pub use digits::{evaluate_prefix, expand, Base, Digit, StochasticVector};
pub use error::{Error, Result};
pub use frequency::{classify, ClassTag, ClassificationConfig, NumberClass, Verdict};
pub use report::{DimensionReport, Provenance};
pub use source::DigitSource;
pub use stream::{DigitStream, StreamKind};
pub use transform::{f, f_inverse, PositionClass, TransformParams};
