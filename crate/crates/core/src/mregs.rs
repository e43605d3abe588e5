//! Rate equations for candidate reversible generating sets of tri-partite
//! pure states, with EPR pairs on all three pairs.
//!
//! Both analyses assume the symmetric attachment `n_AB = n_AC = n_BC = n`,
//! which follows from the permutation symmetry of W and GHZ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{binary_entropy, BoundInterval, MeasureProfile};

/// Slack for comparing the interval endpoints in [`necessary_conditions`];
/// the antisymmetric upper bound comes out of a 729-dim eigensolve.
pub const CONDITION_TOL: f64 = 1e-6;
/// A rate endpoint must be below `−RATE_SLACK` to count as negative, so
/// round-off at a degenerate point never produces a certificate.
pub const RATE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// The contradictory inequality, e.g. `n ≤ −n_W/9 < 0`.
    pub inequality: String,
    /// `k` in `n ≤ k·n_W`.
    pub coefficient: f64,
    pub derivation: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RateResult {
    Infeasible(Certificate),
    Feasible {
        n_over_nw: BoundInterval,
        nghz_over_nw: BoundInterval,
    },
    Undetermined {
        reason: String,
    },
}

impl RateResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, RateResult::Feasible { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, RateResult::Infeasible(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            RateResult::Infeasible(c) => Some(c),
            _ => None,
        }
    }
}

/// `1/e` when it is (numerically) a whole number, for printing `n_W/9`.
fn reciprocal_integer(e: f64) -> Option<u64> {
    let r = 1.0 / e;
    let k = r.round();
    ((r - k).abs() < 1e-9 && k >= 1.0).then_some(k as u64)
}

fn format_bound(e: f64) -> String {
    match reciprocal_integer(e) {
        Some(1) => "n ≤ −n_W".to_string(),
        Some(k) => format!("n ≤ −n_W/{k}"),
        None => format!("n ≤ −{e:.9}·n_W"),
    }
}

/// W + EPR → GHZ. Cut entropies give `n_W H(1/3) + 2n = n_GHZ`; the
/// pair-reduction bound with `E₂^∞(Tr_A W) ≥ e2_lower` gives
/// `n_W (e2_lower + H(1/3)) + 3n ≤ n_GHZ`. Eliminating `n_GHZ`
/// leaves `n ≤ −n_W·e2_lower`.
pub fn infeasibility_wepr_ghz(e2_lower: f64) -> Result<RateResult> {
    if e2_lower.is_nan() || e2_lower < 0.0 || !e2_lower.is_finite() {
        return Err(Error::Usage(format!(
            "bipartite lower bound must be finite and ≥ 0, got {e2_lower}"
        )));
    }
    if e2_lower == 0.0 {
        return Ok(RateResult::Undetermined {
            reason: "elimination gives n ≤ 0, which contradicts nothing".into(),
        });
    }
    let h = binary_entropy(1.0 / 3.0);
    let inequality = format!("{} < 0", format_bound(e2_lower));
    Ok(RateResult::Infeasible(Certificate {
        inequality,
        coefficient: -e2_lower,
        derivation: vec![
            format!("cut entropies: n_W·{h:.10} + 2n = n_GHZ"),
            format!("pair-reduction bound: n_W·({e2_lower:.10} + {h:.10}) + 3n ≤ n_GHZ"),
            "assumes E2^∞(ρ⊗σ) = E2^∞(ρ) + E2^∞(σ) for pure or separable σ".into(),
            format!("eliminating n_GHZ: {}", format_bound(e2_lower)),
        ],
    }))
}

/// GHZ + EPR → W. With additivity on the GHZ+EPR side,
/// `n_GHZ + 3n = n_W E` and `n_GHZ + 2n = n_W H(1/3)`, so
/// `n/n_W = E − H(1/3)` and `n_GHZ/n_W = 3H(1/3) − 2E`.
pub fn rates_ghz_epr_w(e_abc_w: &BoundInterval) -> RateResult {
    let h = binary_entropy(1.0 / 3.0);
    let n_over_nw = e_abc_w.affine(1.0, -h);
    let nghz_over_nw = e_abc_w.affine(-2.0, 3.0 * h);
    let negative = |iv: &BoundInterval| iv.hi < -RATE_SLACK;
    if negative(&n_over_nw) || negative(&nghz_over_nw) {
        let (name, iv) = if negative(&n_over_nw) {
            ("n/n_W", &n_over_nw)
        } else {
            ("n_GHZ/n_W", &nghz_over_nw)
        };
        return RateResult::Infeasible(Certificate {
            inequality: format!("{name} ≤ {:.9} < 0", iv.hi),
            coefficient: iv.hi,
            derivation: vec![
                format!("n/n_W = E − H(1/3) ∈ {n_over_nw}"),
                format!("n_GHZ/n_W = 3H(1/3) − 2E ∈ {nghz_over_nw}"),
            ],
        });
    }
    if n_over_nw.lo > 0.0 && nghz_over_nw.lo > 0.0 {
        return RateResult::Feasible {
            n_over_nw,
            nghz_over_nw,
        };
    }
    RateResult::Undetermined {
        reason: format!(
            "rates not strictly positive over the whole interval: n/n_W ∈ {n_over_nw}, \
             n_GHZ/n_W ∈ {nghz_over_nw}"
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Check {
    Satisfied,
    Violated,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    /// `max cut ≤ E^∞_ABC`.
    pub lower_ok: Check,
    /// `E^∞_ABC ≤ (sum of cuts)/2`.
    pub upper_ok: Check,
    pub verdict: Check,
}

/// Checks `bound ≤ x` for every `x` in `iv`.
fn below_interval(bound: f64, iv: &BoundInterval) -> Check {
    if bound <= iv.lo + CONDITION_TOL {
        Check::Satisfied
    } else if bound > iv.hi + CONDITION_TOL {
        Check::Violated
    } else {
        Check::Undetermined
    }
}

/// Checks `x ≤ bound` for every `x` in `iv`.
fn above_interval(bound: f64, iv: &BoundInterval) -> Check {
    if iv.hi <= bound + CONDITION_TOL {
        Check::Satisfied
    } else if iv.lo > bound + CONDITION_TOL {
        Check::Violated
    } else {
        Check::Undetermined
    }
}

/// Necessary conditions for generating the state reversibly from GHZ + EPRs.
pub fn necessary_conditions(profile: &MeasureProfile) -> Conditions {
    let lower_ok = below_interval(profile.max_cut(), &profile.e_abc);
    let upper_ok = above_interval(profile.cut_sum() / 2.0, &profile.e_abc);
    let verdict = match (lower_ok, upper_ok) {
        (Check::Violated, _) | (_, Check::Violated) => Check::Violated,
        (Check::Satisfied, Check::Satisfied) => Check::Satisfied,
        _ => Check::Undetermined,
    };
    Conditions {
        lower_ok,
        upper_ok,
        verdict,
    }
}
