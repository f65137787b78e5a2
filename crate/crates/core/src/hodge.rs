//! Eigenspace decomposition of holomorphic 1-forms on the covering curve.
//!
//! The deck group `Z/n` acts on `H^0(C, K_C)`; `h_i` is the dimension of the
//! eigenspace for the character indexed by `i`. With the convention fixed here
//! `h_i = s - 1 + sum_k <-i u_k / n>` for `i >= 1` and `h_0 = s`, and the
//! eigen line bundle `L^(i)` pairs with eigenspace `n - i`.

use serde::Serialize;

use crate::arith::{frac, gcd, Rational};
use crate::cover::CoverDatum;
use crate::error::{Error, Result};

fn check_character(d: &CoverDatum, i: i64, min: i64) -> Result<()> {
    if i < min || i > d.n() - 1 {
        return Err(Error::CharacterOutOfRange {
            i,
            min,
            max: d.n() - 1,
        });
    }
    Ok(())
}

fn to_integer(q: Rational, what: &str, d: &CoverDatum) -> i64 {
    assert!(q.is_integer(), "{what} = {q} is not integral for {d}");
    q.to_integer()
}

/// Dimension of the `i`-th eigenspace of holomorphic 1-forms.
pub fn cw_dimension(d: &CoverDatum, i: i64) -> Result<i64> {
    check_character(d, i, 0)?;
    if i == 0 {
        return Ok(d.s());
    }
    let sum: Rational = d.u().iter().map(|&u| frac(-i * u, d.n())).sum();
    let h = to_integer(Rational::from_integer(d.s() - 1) + sum, "h_i", d);
    assert!(h >= 0, "h_{i} = {h} is negative for {d}");
    Ok(h)
}

/// `s - 1 + r (1 - i/n)`, valid only for data with every `u_k = 1`.
pub fn cw_unit_branch_closed_form(d: &CoverDatum, i: i64) -> Result<i64> {
    if !d.is_unit_branch() {
        return Err(Error::NotUnitBranch);
    }
    check_character(d, i, 1)?;
    let r = d.r() as i64;
    let value = Rational::from_integer(d.s() - 1)
        + Rational::from_integer(r) * (Rational::from_integer(1) - Rational::new(i, d.n()));
    Ok(to_integer(value, "closed-form h_i", d))
}

/// Degree of `L^(i)` restricted to a fiber: `sum_k <i u_k / n>`.
pub fn eigen_fiber_degree(d: &CoverDatum, i: i64) -> Result<Rational> {
    check_character(d, i, 0)?;
    Ok(d.u().iter().map(|&u| frac(i * u, d.n())).sum())
}

/// Riemann-Roch value `s - 1 + deg L^(i)`, which is `h^0(K_{C'} + L^(i))`
/// whenever `deg L^(i) > 0`.
pub fn rr_oracle_dimension(d: &CoverDatum, i: i64) -> Result<i64> {
    check_character(d, i, 1)?;
    let degree = eigen_fiber_degree(d, i)?;
    if degree <= Rational::from_integer(0) {
        return Err(Error::DegreeNotPositive {
            i,
            degree: crate::arith::render(&degree),
        });
    }
    Ok(to_integer(
        Rational::from_integer(d.s() - 1) + degree,
        "Riemann-Roch dimension",
        d,
    ))
}

/// `h_i + h_{n-i}`, the rank of the `i`-th eigen local system.
pub fn rank_local_system(d: &CoverDatum, i: i64) -> Result<i64> {
    check_character(d, i, 1)?;
    Ok(cw_dimension(d, i)? + cw_dimension(d, d.n() - i)?)
}

/// Number of branch points where the character `i` has nontrivial monodromy.
pub fn nontrivial_branch_count(d: &CoverDatum, i: i64) -> i64 {
    d.u().iter().filter(|&&u| (i * u) % d.n() != 0).count() as i64
}

/// The full table `h_0..h_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeTable {
    #[serde(skip)]
    pub datum: CoverDatum,
    pub h: Vec<i64>,
}

impl HodgeTable {
    pub fn new(d: &CoverDatum) -> Self {
        let n = d.n();
        let h: Vec<i64> = (0..n)
            .map(|i| cw_dimension(d, i).expect("character in range"))
            .collect();
        assert_eq!(h[0], d.s(), "h_0 differs from the base genus for {d}");
        assert_eq!(
            h.iter().sum::<i64>(),
            d.fiber_genus(),
            "eigenspace dimensions do not sum to the genus for {d}"
        );
        for i in 1..n {
            assert_eq!(
                h[i as usize] + h[(n - i) as usize],
                2 * d.s() - 2 + nontrivial_branch_count(d, i),
                "conjugate pair ({i}, {}) violates the local-system rank identity for {d}",
                n - i
            );
        }
        HodgeTable {
            datum: d.clone(),
            h,
        }
    }

    pub fn get(&self, i: i64) -> i64 {
        self.h[i as usize]
    }

    pub fn genus(&self) -> i64 {
        self.h.iter().sum()
    }
}

pub fn hodge_table(d: &CoverDatum) -> HodgeTable {
    HodgeTable::new(d)
}

/// Partition of the nontrivial characters `1..n-1` into orbits of the unit
/// group of `Z/n` acting by multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct OrbitPartition {
    #[serde(skip)]
    pub n: i64,
    pub orbits: Vec<Vec<i64>>,
}

impl OrbitPartition {
    /// Index of the orbit containing `i`.
    pub fn orbit_of(&self, i: i64) -> Option<usize> {
        self.orbits.iter().position(|o| o.binary_search(&i).is_ok())
    }
}

impl std::fmt::Display for OrbitPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .orbits
            .iter()
            .map(|o| {
                let members: Vec<String> = o.iter().map(i64::to_string).collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Galois orbits of characters. Two characters lie in the same orbit exactly
/// when they have the same gcd with `n`, so the orbits are the gcd classes.
pub fn galois_orbits(n: i64) -> Result<OrbitPartition> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { n });
    }
    let mut by_gcd: std::collections::BTreeMap<i64, Vec<i64>> = Default::default();
    for i in 1..n {
        by_gcd.entry(gcd(i, n)).or_default().push(i);
    }
    let mut orbits: Vec<Vec<i64>> = by_gcd.into_values().collect();
    orbits.sort_by_key(|o| o[0]);
    Ok(OrbitPartition { n, orbits })
}
