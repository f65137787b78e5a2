//! Branch data of cyclic covers `C -> C'` and their ramification combinatorics.
//!
//! A family of `Z/n`-covers is recorded up to numerical equivalence by the
//! degree `n`, the base genus `s`, and the local monodromy multiplicities
//! `u_1..u_r` at the branch points. Branch points are unlabeled, so the
//! multiplicities are kept sorted.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd, residue};
use crate::error::{Error, Result, MAX_DEGREE};

/// A validated branch datum `(n, s, u)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoverDatum {
    n: i64,
    s: i64,
    u: Vec<i64>,
}

/// Unvalidated datum as it appears in JSON input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDatum {
    pub n: i64,
    pub s: i64,
    pub u: Vec<i64>,
}

impl TryFrom<RawDatum> for CoverDatum {
    type Error = Error;

    fn try_from(raw: RawDatum) -> Result<Self> {
        validate(raw.n, raw.s, &raw.u)
    }
}

impl std::fmt::Display for CoverDatum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let u: Vec<String> = self.u.iter().map(i64::to_string).collect();
        write!(f, "({}, {}, [{}])", self.n, self.s, u.join(","))
    }
}

/// Validates raw branch data and returns the datum with `u` sorted ascending.
///
/// Over a rational base (`s = 0`) the cover is connected only when the
/// multiplicities generate `Z/n`, so data with `gcd(n, u_1, .., u_r) > 1` are
/// rejected there.
pub fn validate(n: i64, s: i64, u: &[i64]) -> Result<CoverDatum> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { n });
    }
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { n });
    }
    if s < 0 {
        return Err(Error::NegativeGenus { s });
    }
    if let Some((index, &value)) = u.iter().enumerate().find(|(_, &x)| x < 1 || x >= n) {
        return Err(Error::MultiplicityOutOfRange {
            index: index + 1,
            value,
            max: n - 1,
        });
    }
    let sum: i128 = u.iter().map(|&x| x as i128).sum();
    if sum % n as i128 != 0 {
        return Err(Error::SumNotDivisible { sum, n });
    }
    if s == 0 {
        let g = u.iter().fold(n, |acc, &x| gcd(acc, x));
        if g != 1 {
            return Err(Error::Disconnected { n, gcd: g });
        }
    }
    let mut u = u.to_vec();
    u.sort_unstable();
    Ok(CoverDatum { n, s, u })
}

impl CoverDatum {
    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn u(&self) -> &[i64] {
        &self.u
    }

    /// Number of branch points.
    pub fn r(&self) -> usize {
        self.u.len()
    }

    /// Genus of the covering curve by Riemann-Hurwitz:
    /// `g = n(s - 1) + 1 + 1/2 * sum_k (n - gcd(n, u_k))`.
    pub fn fiber_genus(&self) -> i64 {
        let ramification = self
            .u
            .iter()
            .fold(0i64, |acc, &x| arith::add(acc, self.n - gcd(self.n, x)));
        assert!(
            ramification % 2 == 0,
            "ramification sum {ramification} of {self} is odd"
        );
        let g = arith::add(
            arith::add(arith::mul(self.n, self.s - 1), 1),
            ramification / 2,
        );
        assert!(g >= 0, "negative genus {g} for {self}");
        g
    }

    /// Number of points of `C` over the `k`-th branch point (1-based).
    pub fn points_over_branch(&self, k: usize) -> Result<i64> {
        if k == 0 || k > self.r() {
            return Err(Error::IndexOutOfRange {
                index: k,
                r: self.r(),
            });
        }
        Ok(gcd(self.n, self.u[k - 1]))
    }

    /// Exactly one point over every branch point, i.e. `gcd(n, u_k) = 1` for all `k`.
    pub fn is_totally_ramified(&self) -> bool {
        self.u.iter().all(|&x| gcd(self.n, x) == 1)
    }

    pub fn is_unit_branch(&self) -> bool {
        self.u.iter().all(|&x| x == 1)
    }

    /// Lexicographically least sorted multiplicity vector over all unit
    /// rescalings `u_k -> m u_k mod n`.
    pub fn canonicalize(&self) -> CoverDatum {
        let u = arith::units(self.n)
            .into_iter()
            .map(|m| self.scaled_multiplicities(m))
            .min()
            .expect("the unit group is never empty");
        CoverDatum {
            n: self.n,
            s: self.s,
            u,
        }
    }

    pub fn is_canonical(&self) -> bool {
        arith::units(self.n)
            .into_iter()
            .all(|m| self.scaled_multiplicities(m) >= self.u)
    }

    /// Sorted multiplicities after multiplying by `m`, a unit mod `n`.
    pub fn scaled_multiplicities(&self, m: i64) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .u
            .iter()
            .map(|&x| residue(arith::mul(m, x), self.n))
            .collect();
        v.sort_unstable();
        v
    }

    /// Datum obtained by rescaling all multiplicities by a unit `m`.
    pub fn rescaled(&self, m: i64) -> CoverDatum {
        assert_eq!(gcd(m, self.n), 1, "{m} is not a unit mod {}", self.n);
        CoverDatum {
            n: self.n,
            s: self.s,
            u: self.scaled_multiplicities(m),
        }
    }

    /// The quotient of the cover by the subgroup of `Z/n` of order `n/m`,
    /// which is a cyclic cover of degree `m` of the same base curve.
    pub fn quotient_datum(&self, m: i64) -> Result<QuotientResult> {
        if m < 2 {
            return Err(Error::DegreeTooSmall { n: m });
        }
        if self.n % m != 0 {
            return Err(Error::NotADivisor { m, n: self.n });
        }
        let mut dropped = BTreeSet::new();
        let mut retained_multiplicities = BTreeMap::new();
        for (idx, &x) in self.u.iter().enumerate() {
            let reduced = x % m;
            if reduced == 0 {
                dropped.insert(idx + 1);
            } else {
                retained_multiplicities.insert(idx + 1, reduced);
            }
        }
        let retained: Vec<i64> = retained_multiplicities.values().copied().collect();
        assert!(
            retained.iter().sum::<i64>() % m == 0,
            "quotient multiplicities of {self} by {m} do not sum to a multiple of {m}"
        );
        let datum = validate(m, self.s, &retained)
            .unwrap_or_else(|e| panic!("quotient of {self} by degree {m} is invalid: {e}"));
        Ok(QuotientResult {
            datum,
            dropped,
            retained_multiplicities,
        })
    }
}

/// Counts the orbits of translation by `u` on `Z/n` by walking them explicitly.
pub fn monodromy_orbit_count(n: i64, u: i64) -> Result<i64> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { n });
    }
    if u < 1 || u >= n {
        return Err(Error::MultiplicityOutOfRange {
            index: 1,
            value: u,
            max: n - 1,
        });
    }
    let mut seen = vec![false; n as usize];
    let mut orbits = 0;
    for start in 0..n as usize {
        if seen[start] {
            continue;
        }
        orbits += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = (x + u as usize) % n as usize;
        }
    }
    Ok(orbits)
}

/// Result of passing to a quotient cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientResult {
    pub datum: CoverDatum,
    /// 1-based indices of branch points that become unramified in the quotient.
    pub dropped: BTreeSet<usize>,
    /// `k -> u_k mod m` for the branch points that survive.
    pub retained_multiplicities: BTreeMap<usize, i64>,
}
