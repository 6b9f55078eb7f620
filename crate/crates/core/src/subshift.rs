//! Two subshifts of eventually-constant binary words, each defined by a
//! countable family of forbidden block patterns.
//!
//! Forbidden families, parameterized by the least interior run length `j0`:
//!
//! * `0 1^j 0` for `j >= j0` — an interior run of ones flanked by zeros;
//! * `1^j 0^h` for `j > h >= 1` — a maximal run of ones longer than the
//!   zero run that follows it.
//!
//! The first subshift uses `j0 = 1`, the second `j0 = 2`. Patterns are
//! matched against maximal runs: `1^j 0^h` refers to a full block of ones
//! followed by a full block of zeros, not to an arbitrary factor (a factor
//! reading would reject the generator words themselves).

use serde::{Deserialize, Serialize};

use crate::word::Word;

/// Which of the two builtin subshifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubshiftId {
    Sigma1,
    Sigma2,
}

/// A subshift together with the truncation bound for its enumerated universe.
#[derive(Clone, Debug)]
pub struct Subshift {
    id: SubshiftId,
    /// Least forbidden interior ones-run length.
    interior_min: usize,
    /// Truncation: generators `w_k` are enumerated for `1 <= k <= truncation`.
    truncation: usize,
}

impl Subshift {
    pub fn new(id: SubshiftId, truncation: usize) -> Self {
        let interior_min = match id {
            SubshiftId::Sigma1 => 1,
            SubshiftId::Sigma2 => 2,
        };
        Subshift {
            id,
            interior_min,
            truncation,
        }
    }

    pub fn id(&self) -> SubshiftId {
        self.id
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// The k-th generator word: `1^k 0^k 1^inf` for Sigma1 and
    /// `1^k 0^k 1 0^inf` for Sigma2.
    pub fn generator(&self, k: usize) -> Word {
        let mut p: Vec<u8> = vec![1; k];
        p.extend(std::iter::repeat_n(0, k));
        match self.id {
            SubshiftId::Sigma1 => Word::new(p, 1),
            SubshiftId::Sigma2 => {
                p.push(1);
                Word::new(p, 0)
            }
        }
    }

    /// Exact membership of a finite binary string in the forbidden family.
    pub fn is_forbidden_word(&self, s: &[u8]) -> bool {
        // 0 1^j 0 with j >= interior_min
        if s.len() >= self.interior_min + 2
            && s[0] == 0
            && *s.last().unwrap() == 0
            && s[1..s.len() - 1].iter().all(|&c| c == 1)
        {
            return true;
        }
        // 1^j 0^h with j > h >= 1
        if let Some(split) = s.iter().position(|&c| c == 0) {
            if split >= 1 && s[split..].iter().all(|&c| c == 0) {
                let j = split;
                let h = s.len() - split;
                if j > h {
                    return true;
                }
            }
        }
        false
    }

    /// True when the word contains no forbidden block pattern. Decidable on
    /// the run decomposition: all runs except the infinite tail are maximal
    /// finite blocks.
    pub fn admissible(&self, w: &Word) -> bool {
        let runs = w.runs();
        let t = runs.len();
        for (i, &(sym, len)) in runs.iter().enumerate() {
            if sym != 1 {
                continue;
            }
            let Some(j) = len else { continue }; // infinite ones tail ends the word
            let flanked_left = i > 0; // previous run is zeros by alternation
            let followed_by_zeros = i + 1 < t;
            if flanked_left && followed_by_zeros {
                // interior ones-run between zeros; the following zeros-run may
                // be finite or the infinite tail, either way it flanks
                if j >= self.interior_min {
                    return false;
                }
            }
            if followed_by_zeros {
                if let (_, Some(h)) = runs[i + 1] {
                    if j > h {
                        return false;
                    }
                }
                // infinite zeros tail: h is unbounded, never violated
            }
        }
        true
    }

    /// The truncated universe: all distinct shifts of the generators
    /// `w_1 .. w_K` in generator-major order, excluding the shift fixed
    /// points, which are appended last (the fixed point the orbits reach
    /// first, then the other constant word).
    pub fn universe(&self) -> Vec<Word> {
        let mut out: Vec<Word> = Vec::new();
        for k in 1..=self.truncation {
            let mut w = self.generator(k);
            while !w.is_constant() {
                if !out.contains(&w) {
                    out.push(w.clone());
                }
                w = w.shift();
            }
        }
        let fixed = match self.id {
            SubshiftId::Sigma1 => [Word::constant(1), Word::constant(0)],
            SubshiftId::Sigma2 => [Word::constant(0), Word::constant(1)],
        };
        out.extend(fixed);
        out
    }
}
