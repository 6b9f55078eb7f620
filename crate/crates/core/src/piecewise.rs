//! Piecewise-polynomial self-maps of a closed interval, with exact piece
//! selection at breakpoints. Pieces are single points or intervals with
//! explicit open/closed endpoints and must partition the domain exactly.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// One part of the domain partition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Part {
    Point(f64),
    Interval {
        lo: f64,
        hi: f64,
        lo_closed: bool,
        hi_closed: bool,
    },
}

impl Part {
    fn start(&self) -> f64 {
        match *self {
            Part::Point(p) => p,
            Part::Interval { lo, .. } => lo,
        }
    }

    fn contains(&self, x: f64) -> bool {
        match *self {
            Part::Point(p) => x == p,
            Part::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => {
                (if lo_closed { x >= lo } else { x > lo })
                    && (if hi_closed { x <= hi } else { x < hi })
            }
        }
    }
}

/// Dense polynomial; `coeffs[i]` multiplies `x^i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// Upper bound for |p'| on `[x - err, x + err]`.
    pub fn derivative_bound(&self, x: f64, err: f64) -> f64 {
        let m = x.abs() + err;
        let mut bound = 0.0;
        let mut pow = 1.0; // m^(i-1)
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            bound += (i as f64) * c.abs() * pow;
            pow *= m;
        }
        bound
    }

    /// Exact range on a closed interval for degree <= 2; for higher degrees
    /// a dense sample is used instead.
    fn range_on(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut min = self.eval(lo).min(self.eval(hi));
        let mut max = self.eval(lo).max(self.eval(hi));
        if self.degree() <= 2 {
            if self.coeffs.len() >= 3 && self.coeffs[2] != 0.0 {
                let v = -self.coeffs[1] / (2.0 * self.coeffs[2]);
                if v > lo && v < hi {
                    let fv = self.eval(v);
                    min = min.min(fv);
                    max = max.max(fv);
                }
            }
            return (min, max);
        }
        let steps = 1024;
        for i in 1..steps {
            let x = lo + (hi - lo) * (i as f64) / (steps as f64);
            let fx = self.eval(x);
            min = min.min(fx);
            max = max.max(fx);
        }
        (min, max)
    }
}

/// Piecewise-polynomial map whose pieces partition `[lo, hi]` exactly.
#[derive(Clone, Debug)]
pub struct PiecewiseMap {
    domain: (f64, f64),
    pieces: Vec<(Part, Polynomial)>,
    /// Interior coordinates at which the active piece changes.
    breakpoints: Vec<f64>,
}

impl PiecewiseMap {
    pub fn new(domain: (f64, f64), pieces: Vec<(Part, Polynomial)>) -> Result<Self, Error> {
        let (lo, hi) = domain;
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::argument(format!("empty domain [{lo}, {hi}]")));
        }
        if pieces.is_empty() {
            return Err(Error::argument("a piecewise map needs at least one piece"));
        }
        // The pieces must tile the domain exactly: walk a cursor through
        // them, tracking whether the cursor coordinate itself is covered.
        let mut pos = lo;
        let mut covered = false;
        for (part, _) in &pieces {
            match *part {
                Part::Point(p) => {
                    if p != pos || covered {
                        return Err(Error::argument(format!(
                            "piece at point {p} does not continue the partition at {pos}"
                        )));
                    }
                    covered = true;
                }
                Part::Interval {
                    lo: a,
                    hi: b,
                    lo_closed,
                    hi_closed,
                } => {
                    if a != pos || lo_closed == covered || b.is_nan() || a >= b {
                        return Err(Error::argument(format!(
                            "interval piece [{a}, {b}] does not continue the partition at {pos}"
                        )));
                    }
                    pos = b;
                    covered = hi_closed;
                }
            }
        }
        if pos != hi || !covered {
            return Err(Error::argument(format!(
                "pieces stop at {pos} (covered: {covered}) before the domain end {hi}"
            )));
        }
        // Every piece must map into the domain; for open endpoints the
        // closure is checked, which is conservative.
        for (part, poly) in &pieces {
            let (rmin, rmax) = match *part {
                Part::Point(p) => (poly.eval(p), poly.eval(p)),
                Part::Interval { lo: a, hi: b, .. } => poly.range_on(a, b),
            };
            if rmin < lo || rmax > hi {
                return Err(Error::argument(format!(
                    "piece starting at {} maps onto [{rmin}, {rmax}], outside [{lo}, {hi}]",
                    part.start()
                )));
            }
        }
        let mut breakpoints: Vec<f64> = Vec::new();
        for w in pieces.windows(2) {
            let junction = w[1].0.start();
            if breakpoints.last() != Some(&junction) {
                breakpoints.push(junction);
            }
        }
        Ok(PiecewiseMap {
            domain,
            pieces,
            breakpoints,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Interior coordinates at which the piece changes. An orbit value whose
    /// uncertainty interval straddles one of these cannot be evaluated
    /// reliably.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, x: f64) -> Result<f64, Error> {
        if x < self.domain.0 || x > self.domain.1 || x.is_nan() {
            return Err(Error::domain(format!(
                "{x} outside [{}, {}]",
                self.domain.0, self.domain.1
            )));
        }
        for (part, poly) in &self.pieces {
            if part.contains(x) {
                return Ok(poly.eval(x));
            }
        }
        unreachable!("pieces partition the domain")
    }

    /// Derivative bound of the piece active at `x`, over `[x - err, x + err]`.
    pub fn derivative_bound(&self, x: f64, err: f64) -> f64 {
        for (part, poly) in &self.pieces {
            if part.contains(x) {
                return poly.derivative_bound(x, err);
            }
        }
        0.0
    }
}

/// The four-piece discontinuous counterexample map on `[0, 1]`:
/// `0 -> 3/4`, `x(x + 1/2)` on `(0, 1/2)`, `1/2 -> 1/4`, `x/2 + 1/4` on `(1/2, 1]`.
pub fn akin_map() -> PiecewiseMap {
    PiecewiseMap::new(
        (0.0, 1.0),
        vec![
            (Part::Point(0.0), Polynomial::constant(0.75)),
            (
                Part::Interval {
                    lo: 0.0,
                    hi: 0.5,
                    lo_closed: false,
                    hi_closed: false,
                },
                Polynomial::new(vec![0.0, 0.5, 1.0]),
            ),
            (Part::Point(0.5), Polynomial::constant(0.25)),
            (
                Part::Interval {
                    lo: 0.5,
                    hi: 1.0,
                    lo_closed: false,
                    hi_closed: true,
                },
                Polynomial::new(vec![0.25, 0.5]),
            ),
        ],
    )
    .expect("builtin map is a valid partition")
}

/// Single-piece map on `[0, 1]`.
pub fn single_piece(poly: Polynomial) -> PiecewiseMap {
    PiecewiseMap::new(
        (0.0, 1.0),
        vec![(
            Part::Interval {
                lo: 0.0,
                hi: 1.0,
                lo_closed: true,
                hi_closed: true,
            },
            poly,
        )],
    )
    .expect("builtin map is a valid partition")
}
