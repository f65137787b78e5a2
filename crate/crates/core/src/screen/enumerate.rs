//! Enumeration of canonical branch data and the batch screening driver.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::{screen, ScreenConfig};
use crate::arith::prime_factors;
use crate::cover::{validate, CoverDatum};
use crate::report::ReportRow;

/// Bounds on the data to enumerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationRange {
    pub n: RangeInclusive<i64>,
    pub s: i64,
    pub r: RangeInclusive<usize>,
    pub g_max: i64,
}

/// Non-decreasing tuples over `[1, n-1]` of length `r`, in lexicographic order.
struct SortedTuples {
    n: i64,
    next: Option<Vec<i64>>,
}

impl SortedTuples {
    fn new(n: i64, r: usize) -> Self {
        let next = (r == 0 || n >= 2).then(|| vec![1; r]);
        SortedTuples { n, next }
    }
}

impl Iterator for SortedTuples {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if let Some(k) = succ.iter().rposition(|&x| x < self.n - 1) {
            let v = succ[k] + 1;
            succ[k..].iter_mut().for_each(|x| *x = v);
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Smallest genus any datum of shape `(n, s, r)` can have: each branch point
/// contributes at least `n - n/q` for the smallest prime factor `q` of `n`.
fn min_genus(n: i64, s: i64, r: usize) -> i64 {
    let q = prime_factors(n)[0];
    n * (s - 1) + 1 + (r as i64) * (n - n / q) / 2
}

/// One canonical representative per class of valid data within `range` and
/// with genus at most `g_max`, ordered by `(n, r, u)`.
pub fn enumerate_data(range: &EnumerationRange) -> impl Iterator<Item = CoverDatum> + '_ {
    let s = range.s;
    let g_max = range.g_max;
    range
        .n
        .clone()
        .filter(move |&n| n >= 2 && s >= 0)
        .flat_map(move |n| {
            range
                .r
                .clone()
                .filter(move |&r| min_genus(n, s, r) <= g_max)
                .flat_map(move |r| SortedTuples::new(n, r))
                .filter_map(move |u| validate(n, s, &u).ok())
                .filter(move |d| d.fiber_genus() <= g_max && d.is_canonical())
        })
}

fn thread_pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("failed to build the batch thread pool")
}

/// Screens every enumerated datum; rows come back in enumeration order
/// regardless of `threads`.
pub fn batch_screen(range: &EnumerationRange, cfg: &ScreenConfig, threads: usize) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    batch_screen_chunked(range, cfg, threads, 4096, |chunk| rows.extend(chunk));
    rows
}

/// Streaming form of [`batch_screen`]: data are screened in parallel chunks of
/// `chunk_size` and handed to `sink` in enumeration order.
pub fn batch_screen_chunked<F>(
    range: &EnumerationRange,
    cfg: &ScreenConfig,
    threads: usize,
    chunk_size: usize,
    mut sink: F,
) where
    F: FnMut(Vec<ReportRow>),
{
    let pool = thread_pool(threads);
    let mut data = enumerate_data(range);
    loop {
        let chunk: Vec<CoverDatum> = data.by_ref().take(chunk_size.max(1)).collect();
        if chunk.is_empty() {
            break;
        }
        let rows: Vec<ReportRow> =
            pool.install(|| chunk.par_iter().map(|d| ReportRow::new(d, screen(d, cfg))).collect());
        sink(rows);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::screen::Status;

    fn range(n: RangeInclusive<i64>, s: i64, r: RangeInclusive<usize>, g_max: i64) -> EnumerationRange {
        EnumerationRange { n, s, r, g_max }
    }

    #[test]
    fn sorted_tuples_are_lexicographic_multisets() {
        let all: Vec<Vec<i64>> = SortedTuples::new(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 2], vec![2, 3], vec![3, 3]]
        );
        assert_eq!(SortedTuples::new(5, 0).count(), 1);
    }

    #[test]
    fn enumeration_examples() {
        let got: Vec<_> = enumerate_data(&range(3..=3, 1, 3..=3, 10)).collect();
        assert_eq!(got, vec![validate(3, 1, &[1, 1, 1]).unwrap()]);
        let got: Vec<_> = enumerate_data(&range(2..=2, 1, 2..=2, 10)).collect();
        assert_eq!(got, vec![validate(2, 1, &[1, 1]).unwrap()]);
        assert_eq!(enumerate_data(&range(RangeInclusive::new(5, 4), 1, 0..=3, 10)).count(), 0);
    }

    #[test]
    fn enumeration_respects_genus_cap() {
        for d in enumerate_data(&range(2..=9, 1, 0..=5, 6)) {
            assert!(d.fiber_genus() <= 6, "{d}");
        }
    }

    #[test]
    fn batch_example_primes() {
        let cfg = ScreenConfig::default();
        let rows = batch_screen(&range(5..=7, 1, 2..=3, 12), &cfg, 2);
        assert!(!rows.is_empty());
        for row in &rows {
            match row.datum.n() {
                7 if row.genus >= 8 => assert_eq!(row.verdict.status, Status::ExcludedNonCompact),
                5 => assert_eq!(row.verdict.status, Status::NotCovered),
                _ => {}
            }
        }
        assert!(batch_screen(&range(RangeInclusive::new(5, 4), 1, 2..=3, 12), &cfg, 2).is_empty());
    }

    #[test]
    fn batch_composite_contains_known_exclusion() {
        let rows = batch_screen(&range(14..=14, 1, 4..=4, 40), &ScreenConfig::default(), 3);
        let target = validate(14, 1, &[1, 1, 1, 11]).unwrap().canonicalize();
        let row = rows.iter().find(|r| r.datum == target).expect("datum enumerated");
        assert_eq!(row.verdict.status, Status::ExcludedNonCompact);
    }
}
