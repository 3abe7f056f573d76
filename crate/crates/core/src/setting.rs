use core::fmt;

use crate::error::{Error, Result};

/// Which subsystem an observable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

/// Measurement setting index on one side (observable 1 or 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    One,
    Two,
}

impl Setting {
    pub fn from_index(index: u8) -> Result<Self> {
        match index {
            1 => Ok(Setting::One),
            2 => Ok(Setting::Two),
            other => Err(Error::InvalidSetting(other)),
        }
    }

    /// 1 or 2.
    pub fn index(self) -> u8 {
        match self {
            Setting::One => 1,
            Setting::Two => 2,
        }
    }

    /// 0 or 1, for array lookups.
    pub fn offset(self) -> usize {
        usize::from(self.index() - 1)
    }
}

/// One observable on each side: `(Ω_Aa, Ω_Bb)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SettingPair {
    pub a: Setting,
    pub b: Setting,
}

impl SettingPair {
    pub const A1B1: Self = Self::of(Setting::One, Setting::One);
    pub const A1B2: Self = Self::of(Setting::One, Setting::Two);
    pub const A2B1: Self = Self::of(Setting::Two, Setting::One);
    pub const A2B2: Self = Self::of(Setting::Two, Setting::Two);

    /// All four pairs in `(a, b)` lexicographic order.
    pub const ALL: [Self; 4] = [Self::A1B1, Self::A1B2, Self::A2B1, Self::A2B2];

    pub const fn of(a: Setting, b: Setting) -> Self {
        Self { a, b }
    }

    pub fn new(a: u8, b: u8) -> Result<Self> {
        Ok(Self::of(Setting::from_index(a)?, Setting::from_index(b)?))
    }

    /// Position in [`SettingPair::ALL`].
    pub fn lex_index(self) -> usize {
        2 * self.a.offset() + self.b.offset()
    }
}

impl fmt::Display for SettingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}B{}", self.a.index(), self.b.index())
    }
}
