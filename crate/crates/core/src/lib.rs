#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod grid;
pub mod integrate;
pub mod kernel;
pub mod math;
pub mod mechanics;
pub mod processes;
pub mod special;

pub use error::Error;
pub use grid::GridSpec;
pub use kernel::{AlphaFunction, HConvention, KernelSpec, SingularityMode, SingularityPolicy};
