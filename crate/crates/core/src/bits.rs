//! Fixed-width bit vectors, written most-significant bit first.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitWordError {
    #[error("invalid bit character {0:?} (expected '0' or '1')")]
    BadChar(char),
    #[error("empty bit string")]
    Empty,
    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u64, width: usize },
    #[error("width {0} exceeds the 64-bit packing limit")]
    TooWide(usize),
}

/// An ordered list of bits. Index 0 is the most significant bit.
///
/// The width is the number of bits and never changes once the word exists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitWord {
    bits: Vec<bool>,
}

impl BitWord {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(width: usize) -> Self {
        Self {
            bits: vec![false; width],
        }
    }

    /// Unpacks the low `width` bits of `value`, MSB first.
    pub fn from_u64(value: u64, width: usize) -> Result<Self, BitWordError> {
        if width > 64 {
            return Err(BitWordError::TooWide(width));
        }
        if width < 64 && value >> width != 0 {
            return Err(BitWordError::Overflow { value, width });
        }
        Ok(Self::from_u64_truncating(value, width))
    }

    pub(crate) fn from_u64_truncating(value: u64, width: usize) -> Self {
        let bits = (0..width)
            .map(|i| (value >> (width - 1 - i)) & 1 == 1)
            .collect();
        Self { bits }
    }

    /// Packs the word into an integer, MSB first.
    pub fn to_u64(&self) -> Result<u64, BitWordError> {
        if self.bits.len() > 64 {
            return Err(BitWordError::TooWide(self.bits.len()));
        }
        Ok(pack(&self.bits))
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    pub fn concat(&self, other: &BitWord) -> BitWord {
        let mut bits = Vec::with_capacity(self.width() + other.width());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitWord { bits }
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }
}

pub(crate) fn pack(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

impl From<Vec<bool>> for BitWord {
    fn from(bits: Vec<bool>) -> Self {
        Self::new(bits)
    }
}

impl FromStr for BitWord {
    type Err = BitWordError;

    /// Parses a string such as `"1011"`. Underscores are ignored as separators.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .filter(|&c| c != '_')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitWordError::BadChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if bits.is_empty() {
            return Err(BitWordError::Empty);
        }
        Ok(Self { bits })
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}
