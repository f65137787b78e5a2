//! Screening of branch data against the non-existence theorems for
//! non-compact Shimura curves in the Torelli locus.
//!
//! Each screener records every hypothesis it checks, in a fixed order, so a
//! verdict can be replayed and audited. `NotCovered` only means that no
//! exclusion theorem applies.

mod enumerate;

pub use enumerate::{batch_screen, batch_screen_chunked, enumerate_data, EnumerationRange};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{is_prime, largest_prime_factor};
use crate::cover::CoverDatum;
use crate::error::{Error, Result};
use crate::higgs::{flat_rank_lower_bounds, second_fibration_witness};

pub const DISCLAIMER: &str =
    "NotCovered is not a claim that a Shimura curve exists; it only means no exclusion theorem applies to this datum.";

pub const THM_PRIME_ELLIPTIC: &str = "Thm:non-comp";
pub const THM_COMPOSITE_ELLIPTIC: &str = "Thm:composite-n";
pub const THM_PRIME_GENERAL: &str = "Thm:non-comp-p-gen";
pub const THM_COMPOSITE_GENERAL: &str = "Thm:non-comp-n-gen";
pub const THM_NONE: &str = "none";

/// Smallest prime for which the elliptic-base theorems apply.
pub const ELLIPTIC_MIN_PRIME: i64 = 7;
pub const DEFAULT_GENUS_THRESHOLD: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    ExcludedNonCompact,
    NotCovered,
    ConditionallyExcluded,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::ExcludedNonCompact => "ExcludedNonCompact",
            Status::NotCovered => "NotCovered",
            Status::ConditionallyExcluded => "ConditionallyExcluded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub hypothesis: String,
    pub value: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub theorem: String,
    pub trace: Vec<TraceEntry>,
    pub parameters: BTreeMap<String, String>,
}

impl Verdict {
    pub fn all_pass(&self) -> bool {
        self.trace.iter().all(|e| e.pass)
    }

    pub fn entry(&self, hypothesis_prefix: &str) -> Option<&TraceEntry> {
        self.trace
            .iter()
            .find(|e| e.hypothesis.starts_with(hypothesis_prefix))
    }
}

/// User configuration for the screeners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScreenConfig {
    general_base_bound: BTreeMap<i64, i64>,
    genus_threshold: i64,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        ScreenConfig {
            general_base_bound: BTreeMap::new(),
            genus_threshold: DEFAULT_GENUS_THRESHOLD,
        }
    }
}

impl ScreenConfig {
    pub fn new(general_base_bound: BTreeMap<i64, i64>, genus_threshold: i64) -> Result<Self> {
        if genus_threshold < 1 {
            return Err(Error::InvalidConfig(format!(
                "genus threshold {genus_threshold} must be at least 1"
            )));
        }
        if let Some((s, b)) = general_base_bound.iter().find(|(_, &b)| b < 2) {
            return Err(Error::InvalidConfig(format!(
                "bound b({s}) = {b} must be at least 2"
            )));
        }
        if let Some(s) = general_base_bound.keys().find(|&&s| s < 2) {
            return Err(Error::InvalidConfig(format!(
                "bounds apply to base genus s >= 2, got s = {s}"
            )));
        }
        Ok(ScreenConfig {
            general_base_bound,
            genus_threshold,
        })
    }

    pub fn genus_threshold(&self) -> i64 {
        self.genus_threshold
    }

    pub fn bound_for(&self, s: i64) -> Option<i64> {
        self.general_base_bound.get(&s).copied()
    }
}

#[derive(Default)]
struct TraceBuilder {
    trace: Vec<TraceEntry>,
    parameters: BTreeMap<String, String>,
}

impl TraceBuilder {
    fn check(&mut self, hypothesis: impl Into<String>, value: impl ToString, pass: bool) -> bool {
        self.trace.push(TraceEntry {
            hypothesis: hypothesis.into(),
            value: value.to_string(),
            pass,
        });
        pass
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    fn all_pass(&self) -> bool {
        self.trace.iter().all(|e| e.pass)
    }

    fn finish(mut self, status: Status, theorem: &str) -> Verdict {
        assert!(!self.trace.is_empty(), "verdict trace is empty");
        if status == Status::NotCovered {
            self.param("disclaimer", DISCLAIMER);
        }
        Verdict {
            status,
            theorem: theorem.to_string(),
            trace: self.trace,
            parameters: self.parameters,
        }
    }
}

/// How the lower bound on the prime factor is supplied.
#[derive(Debug, Clone, Copy)]
enum PrimeBound {
    Fixed(i64),
    Configured { s: i64, bound: i64 },
    Unspecified { s: i64 },
}

impl PrimeBound {
    fn check(self, tb: &mut TraceBuilder, p: i64, what: &str) -> bool {
        match self {
            PrimeBound::Fixed(min) => tb.check(format!("{what} p >= {min}"), p, p >= min),
            PrimeBound::Configured { s, bound } => tb.check(
                format!("{what} p >= b({s}) = {bound} (user-asserted bound)"),
                p,
                p >= bound,
            ),
            PrimeBound::Unspecified { s } => tb.check(
                format!("{what} p >= b({s}) (bound b({s}) configured)"),
                format!("b({s}) unspecified"),
                false,
            ),
        }
    }
}

fn common_parameters(tb: &mut TraceBuilder, d: &CoverDatum, cfg: &ScreenConfig) {
    tb.param("n", d.n());
    tb.param("s", d.s());
    tb.param("r", d.r());
    tb.param("g", d.fiber_genus());
    tb.param("genus_threshold", cfg.genus_threshold());
    tb.param("flat_rank_total_bound", flat_rank_lower_bounds(d).total);
}

/// Hypotheses for prime degree. Returns `true` iff every structural check passes.
fn prime_checks(tb: &mut TraceBuilder, d: &CoverDatum, cfg: &ScreenConfig, bound: PrimeBound) -> bool {
    let p = d.n();
    let g = d.fiber_genus();
    tb.param("p", p);
    if p >= 5 {
        let witness = second_fibration_witness(d).expect("prime degree >= 5");
        tb.param(
            "second_fibration_witness",
            witness.map_or("none".to_string(), |(i0, i)| format!("({i0},{i})")),
        );
    }
    bound.check(tb, p, "prime degree");
    let genus_ok = tb.check(
        format!("fiber genus g >= {}", cfg.genus_threshold()),
        g,
        g >= cfg.genus_threshold(),
    );
    let branch_ok = tb.check(
        "r >= 1 (branch divisor contains a section)",
        d.r(),
        d.r() >= 1,
    );
    genus_ok && branch_ok
}

/// Hypotheses for composite degree, reducing through the `Z/p` quotient for the
/// largest prime factor `p`.
fn composite_checks(
    tb: &mut TraceBuilder,
    d: &CoverDatum,
    cfg: &ScreenConfig,
    bound: PrimeBound,
) -> bool {
    let n = d.n();
    let p = largest_prime_factor(n).expect("composite degree has a prime factor");
    let g = d.fiber_genus();
    let thr = cfg.genus_threshold();
    tb.param("p", p);
    tb.param("n_prime", n / p);

    bound.check(tb, p, "largest prime factor");

    let gcds: Vec<String> = d
        .u()
        .iter()
        .map(|&u| num_integer::gcd(n, u).to_string())
        .collect();
    let totally_ramified = tb.check(
        "totally ramified (gcd(n, u_k) = 1 for all k)",
        format!("gcd(n, u_k) = [{}]", gcds.join(",")),
        d.is_totally_ramified(),
    );
    let r_ok = tb.check("r >= 3 branch points", d.r(), d.r() >= 3);
    let genus_ok = tb.check(format!("fiber genus g >= {thr}"), g, g >= thr);

    let quotient = d.quotient_datum(p).expect("p divides n");
    let survive_ok = tb.check(
        format!("all branch points survive in the Z/{p} quotient"),
        format!("{} of {} retained", quotient.datum.r(), d.r()),
        quotient.dropped.is_empty(),
    );
    let g_quot = quotient.datum.fiber_genus();
    if totally_ramified {
        let expected = p * (d.s() - 1) + 1 + (d.r() as i64) * (p - 1) / 2;
        assert_eq!(
            g_quot, expected,
            "quotient genus of {d} by {p} disagrees with 1 + r(p-1)/2 shifted by the base genus"
        );
    }
    tb.param("quotient_datum", &quotient.datum);
    tb.param("quotient_genus", g_quot);
    let quotient_ok = tb.check(
        format!("quotient genus g' >= {thr}"),
        g_quot,
        g_quot >= thr,
    );

    totally_ramified && r_ok && genus_ok && survive_ok && quotient_ok
}

fn require_shape(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::WrongShape(msg()))
    }
}

/// Prime-degree covers of elliptic curves.
pub fn screen_prime_elliptic(d: &CoverDatum, cfg: &ScreenConfig) -> Result<Verdict> {
    require_shape(d.s() == 1 && is_prime(d.n()), || {
        format!("{d} is not a prime-degree cover of an elliptic curve")
    })?;
    let mut tb = TraceBuilder::default();
    common_parameters(&mut tb, d, cfg);
    prime_checks(&mut tb, d, cfg, PrimeBound::Fixed(ELLIPTIC_MIN_PRIME));
    let status = if tb.all_pass() {
        Status::ExcludedNonCompact
    } else {
        Status::NotCovered
    };
    Ok(tb.finish(status, THM_PRIME_ELLIPTIC))
}

/// Composite-degree covers of elliptic curves, screened through the prime quotient.
pub fn screen_composite_elliptic(d: &CoverDatum, cfg: &ScreenConfig) -> Result<Verdict> {
    require_shape(d.s() == 1 && !is_prime(d.n()), || {
        format!("{d} is not a composite-degree cover of an elliptic curve")
    })?;
    let mut tb = TraceBuilder::default();
    common_parameters(&mut tb, d, cfg);
    composite_checks(&mut tb, d, cfg, PrimeBound::Fixed(ELLIPTIC_MIN_PRIME));
    let status = if tb.all_pass() {
        Status::ExcludedNonCompact
    } else {
        Status::NotCovered
    };
    Ok(tb.finish(status, THM_COMPOSITE_ELLIPTIC))
}

/// Covers of curves of genus `s >= 2`. The prime bounds `b(s)`, `c(s)` are
/// only known to exist, so the strongest outcome is `ConditionallyExcluded`.
pub fn screen_general_base(d: &CoverDatum, cfg: &ScreenConfig) -> Result<Verdict> {
    require_shape(d.s() >= 2, || format!("{d} has base genus below 2"))?;
    let bound = match cfg.bound_for(d.s()) {
        Some(bound) => PrimeBound::Configured { s: d.s(), bound },
        None => PrimeBound::Unspecified { s: d.s() },
    };
    let mut tb = TraceBuilder::default();
    common_parameters(&mut tb, d, cfg);
    let (theorem, structural_ok) = if is_prime(d.n()) {
        (THM_PRIME_GENERAL, prime_checks(&mut tb, d, cfg, bound))
    } else {
        (THM_COMPOSITE_GENERAL, composite_checks(&mut tb, d, cfg, bound))
    };
    match bound {
        PrimeBound::Configured { s, bound } => tb.param(
            "conditional_on",
            format!("user assertion that b({s}) = {bound} dominates the bound of the theorem"),
        ),
        _ => tb.param(
            "conditional_on",
            format!("existence of an unspecified bound b({}) not exceeding p", d.s()),
        ),
    }
    tb.param(
        "genus_threshold_note",
        "dependence of the genus threshold on the base genus is not determined; threshold as configured",
    );
    let status = match bound {
        PrimeBound::Unspecified { .. } if structural_ok => Status::ConditionallyExcluded,
        _ if tb.all_pass() => Status::ConditionallyExcluded,
        _ => Status::NotCovered,
    };
    Ok(tb.finish(status, theorem))
}

/// Dispatches a datum to the applicable screener.
pub fn screen(d: &CoverDatum, cfg: &ScreenConfig) -> Verdict {
    if d.s() == 0 || d.r() == 0 || d.n() <= 3 {
        let mut tb = TraceBuilder::default();
        common_parameters(&mut tb, d, cfg);
        tb.check("base genus s >= 1", d.s(), d.s() >= 1);
        tb.check(
            "r >= 1 (branch divisor contains a section)",
            d.r(),
            d.r() >= 1,
        );
        tb.check("degree n >= 4", d.n(), d.n() >= 4);
        return tb.finish(Status::NotCovered, THM_NONE);
    }
    let verdict = match (d.s(), is_prime(d.n())) {
        (1, true) => screen_prime_elliptic(d, cfg),
        (1, false) => screen_composite_elliptic(d, cfg),
        _ => screen_general_base(d, cfg),
    };
    verdict.expect("dispatch matches the screener shape")
}
