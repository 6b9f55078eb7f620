//! The gap matrix `gap[a][b] = d(f(a), b)` over the sample sequence — the
//! single substrate for all chain computations. Thresholding it at `eps`
//! yields the directed graph of admissible chain jumps.

use rayon::prelude::*;

use crate::error::Error;
use crate::strong::MetricTransform;
use crate::system::{EvaluableSystem, State};

#[derive(Clone, Debug)]
pub struct GapMatrix {
    n: usize,
    gap: Vec<f64>,
    labels: Vec<State>,
}

impl GapMatrix {
    /// Builds the matrix from a system with at least two samples.
    pub fn build(sys: &EvaluableSystem) -> Result<Self, Error> {
        Self::build_with_metric(sys, &MetricTransform::Identity)
    }

    /// Same, with the metric post-composed with a transform.
    pub fn build_with_metric(
        sys: &EvaluableSystem,
        transform: &MetricTransform,
    ) -> Result<Self, Error> {
        let samples = sys.samples();
        let n = samples.len();
        if n < 2 {
            return Err(Error::argument(format!(
                "gap matrix needs >= 2 samples, got {n}"
            )));
        }
        let images: Vec<State> = samples
            .iter()
            .map(|s| sys.eval(s))
            .collect::<Result<_, _>>()?;
        let mut gap = vec![0.0; n * n];
        gap.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = transform.apply(sys.dist(&images[a], &samples[b]));
            }
        });
        Ok(GapMatrix {
            n,
            gap,
            labels: samples.to_vec(),
        })
    }

    /// Builds directly from a dense row-major matrix; labels default to the
    /// row index. Used for synthetic graphs.
    pub fn from_raw(n: usize, gap: Vec<f64>) -> Self {
        assert_eq!(gap.len(), n * n);
        assert!(gap.iter().all(|&g| g >= 0.0));
        GapMatrix {
            n,
            gap,
            labels: (0..n).map(|i| State::Real(i as f64)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn gap(&self, a: usize, b: usize) -> f64 {
        self.gap[a * self.n + b]
    }

    pub fn labels(&self) -> &[State] {
        &self.labels
    }

    /// Minimal outgoing gap of a vertex (self-edges count).
    pub fn min_out_gap(&self, a: usize) -> f64 {
        let row = &self.gap[a * self.n..(a + 1) * self.n];
        row.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Projection resolution: the largest minimal outgoing gap. Every vertex
    /// has an outgoing edge at any `eps > rho`.
    pub fn rho(&self) -> f64 {
        (0..self.n).map(|a| self.min_out_gap(a)).fold(0.0, f64::max)
    }

    /// The directed graph with edges `{(a, b) : gap[a][b] < eps}`.
    pub fn eps_graph(&self, eps: f64) -> EpsGraph {
        let mut adj = vec![Vec::new(); self.n];
        for (a, row) in adj.iter_mut().enumerate() {
            for b in 0..self.n {
                if self.gap(a, b) < eps {
                    row.push(b);
                }
            }
        }
        let mut radj = vec![Vec::new(); self.n];
        for (a, row) in adj.iter().enumerate() {
            for &b in row {
                radj[b].push(a);
            }
        }
        EpsGraph {
            n: self.n,
            adj,
            radj,
        }
    }
}

/// Adjacency (and reverse adjacency) of an eps-threshold graph. Neighbor
/// lists are in increasing index order.
#[derive(Clone, Debug)]
pub struct EpsGraph {
    pub n: usize,
    pub adj: Vec<Vec<usize>>,
    pub radj: Vec<Vec<usize>>,
}

impl EpsGraph {
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }
}
