//! Outcome shifts `(Δ11, Δ12, Δ22, Δ21)` and the four coincidence events of S.
//!
//! S is the sum of four probabilities, one per setting pair, in this order:
//!
//! | term | pair     | event (A outcome `x`, B outcome `y`) |
//! |------|----------|--------------------------------------|
//! | 0    | (A1, B1) | `x = y + Δ11`                        |
//! | 1    | (A2, B1) | `y = x + Δ12`                        |
//! | 2    | (A2, B2) | `x = y + Δ22`                        |
//! | 3    | (A1, B2) | `y = x + Δ21`                        |
//!
//! In a deterministic assignment `(j, k, l, m)` = (A1, A2, B1, B2) outcomes,
//! these are the conditions C1 `j = l + Δ11`, C2 `l = k + Δ12`,
//! C3 `k = m + Δ22` and C4 `m = j + Δ21`.

use core::fmt;
use core::str::FromStr;

use crate::setting::SettingPair;

/// How `+Δ` is interpreted when comparing outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ArithmeticMode {
    /// Outcome labels compared modulo d.
    #[default]
    ModD,
    /// Plain integer equality with outcomes in `[0, d)`.
    PlainInteger,
}

impl ArithmeticMode {
    pub fn name(self) -> &'static str {
        match self {
            ArithmeticMode::ModD => "mod-d",
            ArithmeticMode::PlainInteger => "integer",
        }
    }
}

/// Which side carries the shift in a coincidence event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `A outcome = B outcome + Δ`.
    AIsShiftedB,
    /// `B outcome = A outcome + Δ`.
    BIsShiftedA,
}

/// One of the four terms of S.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub pair: SettingPair,
    pub orientation: Orientation,
}

/// The four terms of S in shift-vector order.
pub const TERMS: [Term; 4] = [
    Term {
        pair: SettingPair::A1B1,
        orientation: Orientation::AIsShiftedB,
    },
    Term {
        pair: SettingPair::A2B1,
        orientation: Orientation::BIsShiftedA,
    },
    Term {
        pair: SettingPair::A2B2,
        orientation: Orientation::AIsShiftedB,
    },
    Term {
        pair: SettingPair::A1B2,
        orientation: Orientation::BIsShiftedA,
    },
];

/// `lhs == rhs + shift` under the given arithmetic.
pub fn congruent(lhs: i64, rhs: i64, shift: i64, d: usize, mode: ArithmeticMode) -> bool {
    match mode {
        ArithmeticMode::ModD => {
            let d = d as i128;
            (i128::from(lhs) - i128::from(rhs) - i128::from(shift)).rem_euclid(d) == 0
        }
        ArithmeticMode::PlainInteger => i128::from(lhs) == i128::from(rhs) + i128::from(shift),
    }
}

/// The outcome shifts in tuple order `(Δ11, Δ12, Δ22, Δ21)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShiftVector {
    pub d11: i64,
    pub d12: i64,
    pub d22: i64,
    pub d21: i64,
    pub mode: ArithmeticMode,
}

impl ShiftVector {
    pub const ZERO: Self = Self::new(0, 0, 0, 0);

    /// Shifts in mod-d mode.
    pub const fn new(d11: i64, d12: i64, d22: i64, d21: i64) -> Self {
        Self {
            d11,
            d12,
            d22,
            d21,
            mode: ArithmeticMode::ModD,
        }
    }

    pub const fn from_array(values: [i64; 4]) -> Self {
        Self::new(values[0], values[1], values[2], values[3])
    }

    pub const fn with_mode(mut self, mode: ArithmeticMode) -> Self {
        self.mode = mode;
        self
    }

    /// `(Δ11, Δ12, Δ22, Δ21)`.
    pub const fn as_array(&self) -> [i64; 4] {
        [self.d11, self.d12, self.d22, self.d21]
    }

    /// Canonical residues in `[0, d)`.
    pub fn residues(&self, d: usize) -> [i64; 4] {
        self.as_array().map(|x| x.rem_euclid(d as i64))
    }

    /// Shifts reduced to canonical residues; keeps the mode.
    pub fn reduced(&self, d: usize) -> Self {
        Self::from_array(self.residues(d)).with_mode(self.mode)
    }

    /// Every shift multiplied by `factor` (e.g. `Δ = d × Δ*`).
    pub fn scaled(&self, factor: i64) -> Self {
        Self::from_array(self.as_array().map(|x| x * factor)).with_mode(self.mode)
    }

    pub fn total(&self) -> i64 {
        self.as_array().iter().sum()
    }

    pub fn shift(&self, term: usize) -> i64 {
        self.as_array()[term]
    }

    /// Whether the coincidence event of `term` holds for A outcome `a` and
    /// B outcome `b`.
    pub fn event(&self, term: usize, a: usize, b: usize, d: usize) -> bool {
        let (a, b) = (a as i64, b as i64);
        let shift = self.shift(term);
        match TERMS[term].orientation {
            Orientation::AIsShiftedB => congruent(a, b, shift, d, self.mode),
            Orientation::BIsShiftedA => congruent(b, a, shift, d, self.mode),
        }
    }
}

impl fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.d11, self.d12, self.d22, self.d21)
    }
}

/// Error parsing a comma-separated shift list.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected four comma-separated integers (Δ11,Δ12,Δ22,Δ21)")]
pub struct ParseShiftError;

impl FromStr for ShiftVector {
    type Err = ParseShiftError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut values = [0i64; 4];
        let mut parts = s.split(',');
        for slot in &mut values {
            *slot = parts
                .next()
                .ok_or(ParseShiftError)?
                .trim()
                .parse()
                .map_err(|_| ParseShiftError)?;
        }
        if parts.next().is_some() {
            return Err(ParseShiftError);
        }
        Ok(Self::from_array(values))
    }
}
