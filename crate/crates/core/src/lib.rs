//! Entropy-ordered shaping codes.
//!
//! Every sequence of length `N` over an alphabet of `h` symbols is mapped, one to one,
//! onto one of the `h^N` sequences of length `N+K` with the lowest zero-order empirical
//! entropy. Received sequences outside that shaped set are flagged as corrupted, which
//! gives error detection without appended check symbols.
//!
//! The mapping is computed by enumerative coding over type classes, so no codebook of
//! size `h^N` is ever stored:
//!
//! ```
//! use setshape::{Alphabet, Sequence, ShapingContext, ShapingParams};
//!
//! let ctx = ShapingContext::new(ShapingParams::new(2, 2, 1)?)?;
//! let x = Sequence::parse("10", Alphabet::new(2)?)?;
//! let y = ctx.shape(&x)?;
//! assert_eq!(y.to_string(), "010");
//! assert_eq!(ctx.unshape(&y)?, x);
//!
//! let corrupted = Sequence::parse("100", Alphabet::new(2)?)?;
//! assert!(!ctx.is_member(&corrupted)?);
//! # Ok::<(), setshape::Error>(())
//! ```

pub mod codec;
pub mod entropy;
pub mod error;
pub mod experiments;
pub mod shaping;
pub mod typeclass;

pub use codec::{global_rank, global_unrank, rank_in_class, unrank_in_class};
pub use entropy::{composition_of, h0, sequence_information, Alphabet, Composition, Sequence};
pub use error::{Error, Result};
pub use num_bigint::BigUint;
pub use shaping::{shaped_set_stats, DeltaReport, ShapingContext, ShapingParams};
pub use typeclass::{
    enumerate_compositions, multinomial, ClassRecord, ClassTable, Cutoff, DEFAULT_CLASS_BUDGET,
};
