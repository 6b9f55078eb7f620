//! Eventually-constant infinite binary words and the shift map.
//!
//! A word is an infinite sequence over `{0, 1}` that equals a fixed symbol
//! from some index on. It is stored as a finite prefix plus the repeated
//! tail symbol. The canonical form (prefix never ends with the tail symbol)
//! makes structural equality coincide with equality of the sequences.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An eventually-constant infinite binary word.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    prefix: Vec<u8>,
    tail: u8,
}

impl Word {
    /// Builds a word from a prefix and a tail symbol, canonicalizing the
    /// prefix. Symbols must be 0 or 1.
    pub fn new(mut prefix: Vec<u8>, tail: u8) -> Self {
        debug_assert!(tail <= 1 && prefix.iter().all(|&s| s <= 1));
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        Word { prefix, tail }
    }

    /// The constant word `s^inf`.
    pub fn constant(sym: u8) -> Self {
        Word::new(Vec::new(), sym)
    }

    /// True when the word is `0^inf` or `1^inf`, the fixed points of the shift.
    pub fn is_constant(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn tail(&self) -> u8 {
        self.tail
    }

    /// Symbol at 0-based position `i`.
    pub fn sym(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.tail
        }
    }

    /// The shift map: drops the first symbol.
    pub fn shift(&self) -> Word {
        if self.prefix.is_empty() {
            self.clone()
        } else {
            // Canonical suffix of a canonical prefix stays canonical.
            Word {
                prefix: self.prefix[1..].to_vec(),
                tail: self.tail,
            }
        }
    }

    /// `shift` applied `k` times.
    pub fn shift_n(&self, k: usize) -> Word {
        let drop = k.min(self.prefix.len());
        Word {
            prefix: self.prefix[drop..].to_vec(),
            tail: self.tail,
        }
    }

    /// Distance `2^-i` where `i` is the first 0-based position at which the
    /// two words differ, and 0 when they are equal.
    pub fn dist(&self, other: &Word) -> f64 {
        if self == other {
            return 0.0;
        }
        let horizon = self.prefix.len().max(other.prefix.len());
        for i in 0..=horizon {
            if self.sym(i) != other.sym(i) {
                return 2f64.powi(-(i as i32));
            }
        }
        // Equal on the whole horizon and beyond both prefixes, hence equal.
        unreachable!("non-equal canonical words must differ within the horizon")
    }

    /// Maximal runs of equal symbols: `(symbol, Some(len))` for the finite
    /// runs of the prefix in order, then `(tail, None)` for the infinite
    /// tail run.
    pub fn runs(&self) -> Vec<(u8, Option<usize>)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.prefix.len() {
            let s = self.prefix[i];
            let mut j = i;
            while j < self.prefix.len() && self.prefix[j] == s {
                j += 1;
            }
            if j == self.prefix.len() && s == self.tail {
                // Cannot happen on canonical prefixes.
                break;
            }
            out.push((s, Some(j - i)));
            i = j;
        }
        out.push((self.tail, None));
        out
    }

    /// Parses the textual form produced by `Display`: binary digits followed
    /// by `inf`, e.g. `1110001inf` for `1^3 0^3 1^inf` and `0inf` for `0^inf`.
    pub fn parse(s: &str) -> Result<Word, Error> {
        let body = s
            .strip_suffix("inf")
            .ok_or_else(|| Error::argument(format!("word `{s}` must end in `0inf` or `1inf`")))?;
        let mut digits = Vec::with_capacity(body.len());
        for c in body.chars() {
            match c {
                '0' => digits.push(0),
                '1' => digits.push(1),
                _ => {
                    return Err(Error::argument(format!(
                        "word `{s}` has non-binary digit `{c}`"
                    )))
                }
            }
        }
        let tail = digits
            .pop()
            .ok_or_else(|| Error::argument(format!("word `{s}` is missing its tail symbol")))?;
        Ok(Word::new(digits, tail))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.prefix {
            write!(f, "{s}")?;
        }
        write!(f, "{}inf", self.tail)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}
