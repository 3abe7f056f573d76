#![no_std]

extern crate alloc;

pub mod chsh;
pub mod error;
pub mod hilbert;
pub mod hvt;
pub mod quantum;
pub mod requirements;
pub mod sampler;
pub mod setting;
pub mod shift;

pub use error::{Error, Result};
pub use quantum::CglmpContext;
pub use setting::{Setting, SettingPair, Side};
pub use shift::{ArithmeticMode, ShiftVector};
