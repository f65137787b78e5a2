//! Serializable report records.

use serde::Serialize;

use crate::arith::render;
use crate::cover::CoverDatum;
use crate::higgs::{flat_rank_lower_bounds_from, FlatRankBounds};
use crate::hodge::{eigen_fiber_degree, galois_orbits, hodge_table};
use crate::screen::Verdict;

/// One row of a batch screen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub datum: CoverDatum,
    pub genus: i64,
    pub hodge: Vec<i64>,
    pub flat_bounds: FlatRankBounds,
    pub verdict: Verdict,
}

impl ReportRow {
    pub fn new(d: &CoverDatum, verdict: Verdict) -> Self {
        let table = hodge_table(d);
        let flat_bounds = flat_rank_lower_bounds_from(&table);
        ReportRow {
            datum: d.clone(),
            genus: table.genus(),
            hodge: table.h,
            flat_bounds,
            verdict,
        }
    }
}

/// Full invariant summary of a single datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub datum: CoverDatum,
    pub genus: i64,
    pub totally_ramified: bool,
    pub unit_branch: bool,
    pub points_over_branch: Vec<i64>,
    pub hodge: Vec<i64>,
    /// Fiber degrees of `L^(i)` for `i = 0..n-1`, as `a/b` strings.
    pub fiber_degrees: Vec<String>,
    pub flat_bounds: FlatRankBounds,
    pub orbits: Vec<Vec<i64>>,
}

impl Analysis {
    pub fn new(d: &CoverDatum) -> Self {
        let table = hodge_table(d);
        let flat_bounds = flat_rank_lower_bounds_from(&table);
        let fiber_degrees = (0..d.n())
            .map(|i| render(&eigen_fiber_degree(d, i).expect("character in range")))
            .collect();
        let points_over_branch = (1..=d.r())
            .map(|k| d.points_over_branch(k).expect("branch index in range"))
            .collect();
        Analysis {
            datum: d.clone(),
            genus: table.genus(),
            totally_ramified: d.is_totally_ramified(),
            unit_branch: d.is_unit_branch(),
            points_over_branch,
            hodge: table.h,
            fiber_degrees,
            flat_bounds,
            orbits: galois_orbits(d.n()).expect("degree >= 2").orbits,
        }
    }
}
