//! Evaluable dynamical systems: a state space, an exactly evaluable map, a
//! metric, and a finite ordered sample sequence (the discretization).
//!
//! Builtin systems: four interval maps (`akin`, `square`, `logistic4`,
//! `identity`), the rotation on `n` equispaced circle points (`cycle`), and
//! the two subshifts of eventually-constant words (`sigma1`, `sigma2`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::piecewise::{akin_map, single_piece, PiecewiseMap, Polynomial};
use crate::subshift::{Subshift, SubshiftId};
use crate::word::Word;

/// A state of one of the supported state spaces. Real states compare by
/// exact bit equality.
#[derive(Clone, PartialEq)]
pub enum State {
    Real(f64),
    Word(Word),
}

impl State {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            State::Real(x) => Some(*x),
            State::Word(_) => None,
        }
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            State::Real(_) => None,
            State::Word(w) => Some(w),
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Real(x) => write!(f, "{x}"),
            State::Word(w) => write!(f, "{w}"),
        }
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State({self})")
    }
}

#[derive(Clone, Debug)]
enum Dynamics {
    Interval(PiecewiseMap),
    /// `i -> (i + 1) mod n` on states `0 .. n-1`.
    Rotation {
        n: usize,
    },
    Shift,
}

#[derive(Clone, Debug)]
enum Metric {
    AbsDiff,
    /// Shortest arc between `i` and `j` on `n` equispaced points of a circle
    /// of circumference 1.
    CircleArc {
        n: usize,
    },
    WordUltra,
}

/// A dynamical system with exact map evaluation on its sample states.
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct EvaluableSystem {
    name: String,
    dynamics: Dynamics,
    metric: Metric,
    samples: Vec<State>,
}

impl EvaluableSystem {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn samples(&self) -> &[State] {
        &self.samples
    }

    pub fn sample_index(&self, s: &State) -> Option<usize> {
        self.samples.iter().position(|t| t == s)
    }

    /// One application of the map.
    pub fn eval(&self, s: &State) -> Result<State, Error> {
        match (&self.dynamics, s) {
            (Dynamics::Interval(f), State::Real(x)) => Ok(State::Real(f.eval(*x)?)),
            (Dynamics::Rotation { n }, State::Real(x)) => {
                let i = *x as usize;
                if x.fract() != 0.0 || i >= *n {
                    return Err(Error::domain(format!("{x} is not a cycle state")));
                }
                Ok(State::Real(((i + 1) % n) as f64))
            }
            (Dynamics::Shift, State::Word(w)) => Ok(State::Word(w.shift())),
            _ => Err(Error::domain("state does not belong to the system")),
        }
    }

    /// The metric. Total on pairs of states of the right kind.
    pub fn dist(&self, a: &State, b: &State) -> f64 {
        match (&self.metric, a, b) {
            (Metric::AbsDiff, State::Real(x), State::Real(y)) => (x - y).abs(),
            (Metric::CircleArc { n }, State::Real(x), State::Real(y)) => {
                let d = (x - y).abs();
                let nf = *n as f64;
                d.min(nf - d) / nf
            }
            (Metric::WordUltra, State::Word(u), State::Word(v)) => u.dist(v),
            _ => f64::NAN,
        }
    }

    /// Interior discontinuity coordinates of interval systems, used by the
    /// orbit iterator; empty for exact (cycle, shift) and single-piece maps.
    fn ambiguity_points(&self) -> &[f64] {
        match &self.dynamics {
            Dynamics::Interval(f) => f.breakpoints(),
            _ => &[],
        }
    }

    /// Forward orbit `f(x), f^2(x), ...` of a state, capped at `k_max`
    /// applications. Interval orbits carry a running rounding-error bound and
    /// stop as soon as the uncertainty interval straddles a discontinuity:
    /// past that point the evaluated piece, and hence the whole float orbit,
    /// may differ from the orbit of the exact start value.
    pub fn orbit(&self, start: &State, k_max: usize) -> OrbitIter<'_> {
        OrbitIter {
            sys: self,
            cur: start.clone(),
            err: 0.0,
            k: 0,
            k_max,
            end: None,
        }
    }
}

/// Why an orbit iterator stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitEnd {
    /// `k_max` applications were produced.
    Budget,
    /// A fixed point was reached; all further iterates are equal to it.
    FixedPoint,
    /// The rounding-error interval straddles a discontinuity of the map;
    /// further float iterates are unreliable.
    Ambiguous,
    /// Evaluation failed (state left the domain).
    EvalError,
}

pub struct OrbitIter<'s> {
    sys: &'s EvaluableSystem,
    cur: State,
    err: f64,
    k: usize,
    k_max: usize,
    end: Option<OrbitEnd>,
}

impl OrbitIter<'_> {
    /// Why the iterator stopped; `None` while it can still advance.
    pub fn end(&self) -> Option<OrbitEnd> {
        self.end
    }

    /// Number of applications produced so far.
    pub fn steps(&self) -> usize {
        self.k
    }
}

impl Iterator for OrbitIter<'_> {
    /// `(k, f^k(start))` for k = 1, 2, ...
    type Item = (usize, State);

    fn next(&mut self) -> Option<(usize, State)> {
        if self.end.is_some() {
            return None;
        }
        if self.k >= self.k_max {
            self.end = Some(OrbitEnd::Budget);
            return None;
        }
        if let (Dynamics::Interval(f), State::Real(x)) = (&self.sys.dynamics, &self.cur) {
            if self.err > 0.0 {
                let ambiguous = self
                    .sys
                    .ambiguity_points()
                    .iter()
                    .any(|b| (x - b).abs() <= self.err);
                if ambiguous {
                    self.end = Some(OrbitEnd::Ambiguous);
                    return None;
                }
            }
            let slope = f.derivative_bound(*x, self.err);
            let next = match f.eval(*x) {
                Ok(v) => v,
                Err(_) => {
                    self.end = Some(OrbitEnd::EvalError);
                    return None;
                }
            };
            // Propagated input error plus a few ulps for the evaluation
            // itself; constants evaluate exactly.
            let rounding = if slope == 0.0 {
                0.0
            } else {
                4.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE)
            };
            self.err = slope * self.err + rounding;
            // Bitwise fixed point: every later float iterate is identical,
            // so one more yield carries all the information.
            let fixed = next == *x;
            self.cur = State::Real(next);
            self.k += 1;
            let item = (self.k, self.cur.clone());
            if fixed {
                self.end = Some(OrbitEnd::FixedPoint);
            }
            return Some(item);
        }
        // Exact dynamics: rotation and shift.
        let next = match self.sys.eval(&self.cur) {
            Ok(v) => v,
            Err(_) => {
                self.end = Some(OrbitEnd::EvalError);
                return None;
            }
        };
        let fixed = next == self.cur;
        self.cur = next;
        self.k += 1;
        let item = (self.k, self.cur.clone());
        if fixed {
            self.end = Some(OrbitEnd::FixedPoint);
        }
        Some(item)
    }
}

/// Uniform `n`-point grid on `[lo, hi]` unioned with `required`, sorted and
/// deduplicated. Always contains both endpoints.
pub fn grid_sample(lo: f64, hi: f64, n: usize, required: &[f64]) -> Result<Vec<f64>, Error> {
    if n < 2 {
        return Err(Error::argument(format!("grid needs n >= 2, got {n}")));
    }
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::argument(format!("empty interval [{lo}, {hi}]")));
    }
    let mut pts = Vec::with_capacity(n + required.len());
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        pts.push(lo + t * (hi - lo));
    }
    pts[0] = lo;
    pts[n - 1] = hi;
    for &r in required {
        if r < lo || r > hi || r.is_nan() {
            return Err(Error::argument(format!(
                "required point {r} outside [{lo}, {hi}]"
            )));
        }
        pts.push(r);
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    Ok(pts)
}

/// Parameters for `builtin_system`.
#[derive(Clone, Debug, Default)]
pub struct BuiltinParams {
    pub grid_n: Option<usize>,
    pub required_points: Vec<f64>,
    pub cycle_n: Option<usize>,
    pub truncation_k: Option<usize>,
}

/// Constructs a named builtin system.
///
/// Interval systems sample a uniform grid (plus any required points; the
/// map's own breakpoints are always included) and use `|x - y|`. The cycle
/// uses the shortest-arc metric on `n` equispaced points with exact
/// rotation. Subshifts sample their truncated universe under the
/// first-difference metric.
pub fn builtin_system(name: &str, params: &BuiltinParams) -> Result<EvaluableSystem, Error> {
    match name {
        "akin" | "square" | "logistic4" | "identity" => {
            let n = params
                .grid_n
                .ok_or_else(|| Error::argument(format!("system `{name}` needs grid_n")))?;
            let map = match name {
                "akin" => akin_map(),
                "square" => single_piece(Polynomial::new(vec![0.0, 0.0, 1.0])),
                "logistic4" => single_piece(Polynomial::new(vec![0.0, 4.0, -4.0])),
                _ => single_piece(Polynomial::new(vec![0.0, 1.0])),
            };
            let mut required = params.required_points.clone();
            required.extend_from_slice(map.breakpoints());
            let (lo, hi) = map.domain();
            let grid = grid_sample(lo, hi, n, &required)?;
            Ok(EvaluableSystem {
                name: name.to_string(),
                dynamics: Dynamics::Interval(map),
                metric: Metric::AbsDiff,
                samples: grid.into_iter().map(State::Real).collect(),
            })
        }
        "cycle" => {
            let n = params
                .cycle_n
                .ok_or_else(|| Error::argument("system `cycle` needs cycle_n"))?;
            if n < 2 {
                return Err(Error::argument(format!("cycle needs n >= 2, got {n}")));
            }
            Ok(EvaluableSystem {
                name: format!("cycle{n}"),
                dynamics: Dynamics::Rotation { n },
                metric: Metric::CircleArc { n },
                samples: (0..n).map(|i| State::Real(i as f64)).collect(),
            })
        }
        "sigma1" | "sigma2" => {
            let k = params
                .truncation_k
                .ok_or_else(|| Error::argument(format!("system `{name}` needs truncation_k")))?;
            if k < 1 {
                return Err(Error::argument("truncation_k must be >= 1"));
            }
            let id = if name == "sigma1" {
                SubshiftId::Sigma1
            } else {
                SubshiftId::Sigma2
            };
            let sub = Subshift::new(id, k);
            Ok(EvaluableSystem {
                name: name.to_string(),
                dynamics: Dynamics::Shift,
                metric: Metric::WordUltra,
                samples: sub.universe().into_iter().map(State::Word).collect(),
            })
        }
        other => Err(Error::argument(format!("unknown system `{other}`"))),
    }
}

/// JSON-loadable system description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemConfig {
    pub system: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub required_points: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_k: Option<usize>,
}

impl SystemConfig {
    pub fn build(&self) -> Result<EvaluableSystem, Error> {
        builtin_system(
            &self.system,
            &BuiltinParams {
                grid_n: self.grid_n,
                required_points: self.required_points.clone(),
                cycle_n: self.cycle_n,
                truncation_k: self.truncation_k,
            },
        )
    }
}
