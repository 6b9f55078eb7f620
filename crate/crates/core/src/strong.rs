//! Strong-chain values: the minimal total jump cost over walks with at
//! least one edge, the recurrent set it induces at a threshold, and
//! finite-family approximations of the metric-independent recurrent set.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::gap::GapMatrix;
use crate::system::EvaluableSystem;

/// Dense matrix of minimal walk costs `value[x][y]` (at least one edge).
#[derive(Clone, Debug)]
pub struct StrongChainValues {
    n: usize,
    value: Vec<f64>,
}

impl StrongChainValues {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn value(&self, x: usize, y: usize) -> f64 {
        self.value[x * self.n + y]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|x| self.value[x * self.n..(x + 1) * self.n].to_vec())
            .collect()
    }
}

/// Exact minimal walk costs via nonnegative shortest paths: one forced
/// first jump from `x`, then a zero-based shortest-path distance.
pub fn strong_chain_values(g: &GapMatrix) -> StrongChainValues {
    let n = g.n();
    // d[i][j]: cheapest walk cost with >= 0 edges (0 on the diagonal).
    let mut d = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = if i == j { 0.0 } else { g.gap(i, j) };
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let cand = dik + d[k * n + j];
                if cand < d[i * n + j] {
                    d[i * n + j] = cand;
                }
            }
        }
    }
    let mut value = vec![f64::INFINITY; n * n];
    for x in 0..n {
        for z in 0..n {
            let first = g.gap(x, z);
            for y in 0..n {
                let cand = first + d[z * n + y];
                if cand < value[x * n + y] {
                    value[x * n + y] = cand;
                }
            }
        }
    }
    StrongChainValues { n, value }
}

/// Indices whose minimal loop cost is below `eps`.
pub fn strong_chain_recurrent_set(v: &StrongChainValues, eps: f64) -> Vec<usize> {
    (0..v.n()).filter(|&x| v.value(x, x) < eps).collect()
}

/// A metric transform compatible with the topology. Applied pointwise to
/// the base metric when the gap matrix is rebuilt.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricTransform {
    Identity,
    /// `d -> sqrt(d)`; concave with sqrt(0) = 0, hence again a metric.
    Sqrt,
    /// `d -> min(d, c)` for `c > 0`.
    Cap(f64),
}

impl MetricTransform {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "d" | "identity" => Ok(MetricTransform::Identity),
            "sqrt" => Ok(MetricTransform::Sqrt),
            _ => {
                if let Some(arg) = s.strip_prefix("cap:") {
                    let c: f64 = arg
                        .parse()
                        .map_err(|_| Error::MetricTransform(format!("bad cap value `{arg}`")))?;
                    if c.is_nan() || c <= 0.0 {
                        return Err(Error::MetricTransform(format!(
                            "cap needs c > 0, got {c}: min(d, {c}) would not separate points"
                        )));
                    }
                    Ok(MetricTransform::Cap(c))
                } else {
                    Err(Error::MetricTransform(format!("unknown transform `{s}`")))
                }
            }
        }
    }

    pub fn apply(&self, d: f64) -> f64 {
        match self {
            MetricTransform::Identity => d,
            MetricTransform::Sqrt => d.sqrt(),
            MetricTransform::Cap(c) => d.min(*c),
        }
    }

    pub fn name(&self) -> String {
        match self {
            MetricTransform::Identity => "d".into(),
            MetricTransform::Sqrt => "sqrt".into(),
            MetricTransform::Cap(c) => format!("cap:{c}"),
        }
    }
}

/// Intersection of the strong-chain-recurrent sets over a finite family of
/// metrics. An over-approximation of the recurrent set one would obtain by
/// intersecting over all compatible metrics.
pub fn scr_family_intersection(
    sys: &EvaluableSystem,
    transforms: &[MetricTransform],
    eps: f64,
) -> Result<Vec<usize>, Error> {
    if transforms.is_empty() {
        return Err(Error::argument("metric family must be nonempty"));
    }
    let mut acc: Option<BTreeSet<usize>> = None;
    for t in transforms {
        let g = GapMatrix::build_with_metric(sys, t)?;
        let v = strong_chain_values(&g);
        let set: BTreeSet<usize> = strong_chain_recurrent_set(&v, eps).into_iter().collect();
        acc = Some(match acc {
            None => set,
            Some(prev) => prev.intersection(&set).copied().collect(),
        });
    }
    Ok(acc.unwrap().into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{builtin_system, BuiltinParams, State};

    fn sys(name: &str, grid: usize) -> EvaluableSystem {
        builtin_system(
            name,
            &BuiltinParams {
                grid_n: Some(grid),
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn identity_values_equal_distances() {
        let s = sys("identity", 5);
        let g = GapMatrix::build(&s).unwrap();
        let v = strong_chain_values(&g);
        for x in 0..g.n() {
            for y in 0..g.n() {
                let d = s.dist(&s.samples()[x], &s.samples()[y]);
                assert!((v.value(x, y) - d).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn cycle_loops_cost_nothing() {
        let c = builtin_system(
            "cycle",
            &BuiltinParams {
                cycle_n: Some(3),
                ..Default::default()
            },
        )
        .unwrap();
        let v = strong_chain_values(&GapMatrix::build(&c).unwrap());
        for x in 0..3 {
            assert_eq!(v.value(x, x), 0.0);
        }
        assert_eq!(strong_chain_recurrent_set(&v, 1e-12), vec![0, 1, 2]);
    }

    #[test]
    fn square_minimal_cost_route() {
        // 1 -> 0.75 -> 0.5 -> 0.25 -> 0 costs 0.25 + 0.0625 + 0 + 0.0625
        let g = GapMatrix::build(&sys("square", 5)).unwrap();
        let v = strong_chain_values(&g);
        assert!((v.value(4, 0) - 0.375).abs() < 1e-12);
        // loop costs at eps = 0.05: only the two exact fixed points close
        // cheaply
        assert_eq!(strong_chain_recurrent_set(&v, 0.05), vec![0, 4]);
    }

    #[test]
    fn akin_zero_has_a_cheap_loop_on_a_fine_grid() {
        let s = builtin_system(
            "akin",
            &BuiltinParams {
                grid_n: Some(101),
                ..Default::default()
            },
        )
        .unwrap();
        let g = GapMatrix::build(&s).unwrap();
        let v = strong_chain_values(&g);
        let zero = s.sample_index(&State::Real(0.0)).unwrap();
        let loop_cost = v.value(zero, zero);
        assert!(
            loop_cost < 0.05,
            "four-phase loop should be cheap, got {loop_cost}"
        );
        assert!(strong_chain_recurrent_set(&v, 0.05).contains(&zero));
    }

    #[test]
    fn transform_parsing_and_rejection() {
        assert_eq!(
            MetricTransform::parse("d").unwrap(),
            MetricTransform::Identity
        );
        assert_eq!(
            MetricTransform::parse("sqrt").unwrap(),
            MetricTransform::Sqrt
        );
        assert_eq!(
            MetricTransform::parse("cap:0.2").unwrap(),
            MetricTransform::Cap(0.2)
        );
        assert!(MetricTransform::parse("cap:0").is_err());
        assert!(MetricTransform::parse("cap:-1").is_err());
        assert!(MetricTransform::parse("cube").is_err());
    }

    #[test]
    fn family_intersection_examples() {
        let id = sys("identity", 5);
        let fam = [MetricTransform::Identity, MetricTransform::Sqrt];
        assert_eq!(
            scr_family_intersection(&id, &fam, 0.1).unwrap(),
            vec![0, 1, 2, 3, 4]
        );

        let c = builtin_system(
            "cycle",
            &BuiltinParams {
                cycle_n: Some(3),
                ..Default::default()
            },
        )
        .unwrap();
        let fam = [
            MetricTransform::Identity,
            MetricTransform::Sqrt,
            MetricTransform::Cap(0.2),
        ];
        assert_eq!(
            scr_family_intersection(&c, &fam, 0.05).unwrap(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn akin_family_intersection_keeps_zero() {
        let s = builtin_system(
            "akin",
            &BuiltinParams {
                grid_n: Some(101),
                ..Default::default()
            },
        )
        .unwrap();
        let zero = s.sample_index(&State::Real(0.0)).unwrap();
        let fam = [MetricTransform::Identity, MetricTransform::Sqrt];
        let loop_costs: Vec<f64> = fam
            .iter()
            .map(|t| {
                let g = GapMatrix::build_with_metric(&s, t).unwrap();
                strong_chain_values(&g).value(zero, zero)
            })
            .collect();
        // sqrt inflates the small projection hops, so its loop is the
        // costlier one
        assert!(loop_costs[0] < 0.05);
        assert!(loop_costs[1] > loop_costs[0]);
        // just above both loop costs the intersection keeps 0, just below
        // the cheaper one it cannot
        let hi = loop_costs[0].max(loop_costs[1]) + 1e-9;
        assert!(scr_family_intersection(&s, &fam, hi)
            .unwrap()
            .contains(&zero));
        let lo = loop_costs[0].min(loop_costs[1]) * 0.5;
        assert!(!scr_family_intersection(&s, &fam, lo)
            .unwrap()
            .contains(&zero));
        // the intersection refines each single-metric set
        let inter: BTreeSet<usize> = scr_family_intersection(&s, &fam, hi)
            .unwrap()
            .into_iter()
            .collect();
        for t in &fam {
            let g = GapMatrix::build_with_metric(&s, t).unwrap();
            let single: BTreeSet<usize> = strong_chain_recurrent_set(&strong_chain_values(&g), hi)
                .into_iter()
                .collect();
            assert!(inter.is_subset(&single));
        }
    }
}
