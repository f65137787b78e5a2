//! Numerical shadows of the Higgs bundle splitting `E = A + F` for a family
//! representing a Shimura curve.
//!
//! Only lower bounds on the flat ranks are available from branch data: the
//! ample part has equal rank in characters `i` and `n - i`, so
//! `rank F_i - rank F_{n-i} = h_i - h_{n-i}` while both ranks stay non-negative.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::{is_prime, Rational};
use crate::cover::CoverDatum;
use crate::error::{Error, Result};
use crate::hodge::{eigen_fiber_degree, hodge_table, HodgeTable};

fn check_character(d: &CoverDatum, i: i64) -> Result<()> {
    if i < 1 || i > d.n() - 1 {
        return Err(Error::CharacterOutOfRange {
            i,
            min: 1,
            max: d.n() - 1,
        });
    }
    Ok(())
}

fn require_prime(d: &CoverDatum, min: i64) -> Result<()> {
    if !is_prime(d.n()) {
        return Err(Error::NotPrime { n: d.n() });
    }
    if d.n() < min {
        return Err(Error::PrimeTooSmall { p: d.n(), min });
    }
    Ok(())
}

/// `h_{n-i} - h_i`, which equals `rank F_{n-i} - rank F_i`.
pub fn eigen_rank_difference(d: &CoverDatum, i: i64) -> Result<i64> {
    check_character(d, i)?;
    let table = hodge_table(d);
    Ok(table.get(d.n() - i) - table.get(i))
}

/// Lower bounds on the ranks of the flat Higgs summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatRankBounds {
    #[serde(skip)]
    pub datum: CoverDatum,
    /// Entry `i - 1` bounds `rank F_i` for `i = 1..n-1`.
    pub per_char: Vec<i64>,
    pub total: i64,
    #[serde(rename = "prime_refinement")]
    pub prime_refinement_applied: bool,
}

impl FlatRankBounds {
    pub fn get(&self, i: i64) -> i64 {
        self.per_char[(i - 1) as usize]
    }
}

/// Per-character bounds `max(0, h_i - h_{n-i})`, refined for prime degree by
/// `h_i - min_j h_j` (the ample rank is constant across the single Galois orbit
/// and bounded by every `h_j`), plus the total bound
/// `sum_{1 <= i < n/2} |h_i - h_{n-i}|`.
pub fn flat_rank_lower_bounds(d: &CoverDatum) -> FlatRankBounds {
    flat_rank_lower_bounds_from(&hodge_table(d))
}

pub fn flat_rank_lower_bounds_from(table: &HodgeTable) -> FlatRankBounds {
    let d = &table.datum;
    let n = d.n();
    let mut per_char: Vec<i64> = (1..n)
        .map(|i| (table.get(i) - table.get(n - i)).max(0))
        .collect();
    let prime = is_prime(n);
    if prime {
        let min_h = (1..n).map(|j| table.get(j)).min().unwrap_or(0);
        for i in 1..n {
            let slot = &mut per_char[(i - 1) as usize];
            *slot = (*slot).max(table.get(i) - min_h);
        }
    }
    let total = (1..n)
        .take_while(|&i| 2 * i < n)
        .map(|i| (table.get(i) - table.get(n - i)).abs())
        .sum();
    FlatRankBounds {
        datum: d.clone(),
        per_char,
        total,
        prime_refinement_applied: prime,
    }
}

/// Characters whose flat summand is guaranteed nonzero, for prime degree `p >= 5`.
pub fn rank_positive_characters(d: &CoverDatum) -> Result<BTreeSet<i64>> {
    require_prime(d, 5)?;
    let bounds = flat_rank_lower_bounds(d);
    Ok((1..d.n()).filter(|&i| bounds.get(i) > 0).collect())
}

/// Intersection of a general fiber of the second projection with
/// `omega(R) - L^(i1) - L^(i2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Negativity {
    pub value: Rational,
    pub negative: bool,
}

/// Evaluates `(2s - 2 + r) - deg L^(i1) - deg L^(i2)` on a general fiber.
pub fn fibration_negativity(d: &CoverDatum, i1: i64, i2: i64) -> Result<Negativity> {
    check_character(d, i1)?;
    check_character(d, i2)?;
    let canonical = Rational::from_integer(2 * d.s() - 2 + d.r() as i64);
    let value = canonical - eigen_fiber_degree(d, i1)? - eigen_fiber_degree(d, i2)?;
    Ok(Negativity {
        value,
        negative: value < Rational::from_integer(0),
    })
}

/// Least pair `(i0, i)` with `i > n/2` such that both flat summands are
/// guaranteed nonzero and both `(i, i0)` and `(n - i, i0)` are negative.
///
/// The conjugate pair `{i, n - i}` enters symmetrically through the negativity
/// conditions, so `i` is taken as its upper member.
pub fn second_fibration_witness(d: &CoverDatum) -> Result<Option<(i64, i64)>> {
    require_prime(d, 5)?;
    let n = d.n();
    let bounds = flat_rank_lower_bounds(d);
    for i0 in 1..n {
        if bounds.get(i0) == 0 {
            continue;
        }
        for i in (n / 2 + 1)..n {
            if bounds.get(i) == 0 {
                continue;
            }
            if fibration_negativity(d, i, i0)?.negative
                && fibration_negativity(d, n - i, i0)?.negative
            {
                return Ok(Some((i0, i)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::validate;

    fn d(n: i64, s: i64, u: &[i64]) -> CoverDatum {
        validate(n, s, u).unwrap()
    }

    #[test]
    fn rank_difference_examples() {
        assert_eq!(eigen_rank_difference(&d(7, 1, &[1; 7]), 5), Ok(3));
        assert_eq!(eigen_rank_difference(&d(7, 1, &[1, 2, 4]), 4), Ok(-1));
        assert_eq!(eigen_rank_difference(&d(6, 1, &[1, 2, 3]), 3), Ok(0));
        assert_eq!(eigen_rank_difference(&d(8, 2, &[1, 7]), 4), Ok(0));
        assert!(eigen_rank_difference(&d(8, 2, &[1, 7]), 8).is_err());
    }

    #[test]
    fn flat_bound_examples() {
        let b = flat_rank_lower_bounds(&d(7, 1, &[1; 7]));
        assert_eq!(b.total, 9);
        assert!(b.get(4) >= 2);
        assert!(b.prime_refinement_applied);
        assert_eq!(flat_rank_lower_bounds(&d(6, 1, &[1; 6])).total, 6);
        assert!(!flat_rank_lower_bounds(&d(6, 1, &[1; 6])).prime_refinement_applied);
        assert_eq!(flat_rank_lower_bounds(&d(2, 1, &[1, 1])).total, 0);
    }

    #[test]
    fn rank_positive_examples() {
        let set = rank_positive_characters(&d(7, 1, &[1; 7])).unwrap();
        assert!(set.contains(&4) && set.contains(&5));
        assert!(rank_positive_characters(&d(5, 1, &[1; 5])).unwrap().contains(&3));
        let set = rank_positive_characters(&d(7, 1, &[1, 2, 4])).unwrap();
        assert!(set.contains(&4));
        assert!(!set.contains(&5));
        assert_eq!(
            rank_positive_characters(&d(6, 1, &[1; 6])),
            Err(Error::NotPrime { n: 6 })
        );
        assert_eq!(
            rank_positive_characters(&d(3, 1, &[1; 3])),
            Err(Error::PrimeTooSmall { p: 3, min: 5 })
        );
    }

    #[test]
    fn negativity_examples() {
        let a = fibration_negativity(&d(7, 1, &[1, 2, 4]), 3, 5).unwrap();
        assert_eq!(a.value, Rational::from_integer(-1));
        assert!(a.negative);
        let b = fibration_negativity(&d(7, 1, &[1; 7]), 3, 4).unwrap();
        assert_eq!(b.value, Rational::from_integer(0));
        assert!(!b.negative);
        let c = fibration_negativity(&d(7, 2, &[1, 2, 4]), 3, 5).unwrap();
        assert_eq!(c.value, Rational::from_integer(1));
        assert!(!c.negative);
        let e = fibration_negativity(&d(4, 1, &[1, 1, 2]), 1, 2).unwrap();
        assert_eq!(e.value, Rational::from_integer(1));
    }

    #[test]
    fn witness_examples() {
        assert_eq!(second_fibration_witness(&d(7, 1, &[1; 7])), Ok(Some((5, 4))));
        assert_eq!(second_fibration_witness(&d(5, 1, &[1; 5])), Ok(None));
        assert_eq!(second_fibration_witness(&d(7, 3, &[1, 2, 4])), Ok(None));
        assert!(matches!(
            second_fibration_witness(&d(9, 1, &[1; 9])),
            Err(Error::NotPrime { .. })
        ));
    }
}
