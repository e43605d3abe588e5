//! Entanglement measures: cut entropies, relative-entropy lower bounds and
//! candidate upper bounds, with asymptotic values carried as intervals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distill;
use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;
use crate::states::{candidate_closest, StateKind};
use crate::tensor::{relative_entropy, Cut, MultiState, PureVector, PPT_TOL};
use crate::twirl::{lemma_subadditivity, TwirlCache};

/// Closed interval `[lo, hi]` in bits, each endpoint labelled with the bound
/// that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_source: String,
    pub hi_source: String,
}

impl BoundInterval {
    pub fn new(lo: f64, hi: f64, lo_source: impl Into<String>, hi_source: impl Into<String>) -> Result<Self> {
        if !lo.is_finite() || hi.is_nan() || hi == f64::NEG_INFINITY || lo > hi + 1e-12 {
            return Err(Error::Usage(format!("invalid bound interval [{lo}, {hi}]")));
        }
        Ok(Self {
            lo,
            hi,
            lo_source: lo_source.into(),
            hi_source: hi_source.into(),
        })
    }

    pub fn point(value: f64, source: impl Into<String>) -> Result<Self> {
        let source = source.into();
        Self::new(value, value, source.clone(), source)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Image of the interval under `x ↦ scale·x + offset`.
    pub fn affine(&self, scale: f64, offset: f64) -> BoundInterval {
        let (a, b) = (scale * self.lo + offset, scale * self.hi + offset);
        let (lo, hi, lo_source, hi_source) = if scale >= 0.0 {
            (a, b, &self.lo_source, &self.hi_source)
        } else {
            (b, a, &self.hi_source, &self.lo_source)
        };
        BoundInterval {
            lo,
            hi,
            lo_source: lo_source.clone(),
            hi_source: hi_source.clone(),
        }
    }
}

impl fmt::Display for BoundInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.10}, {:.10}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureProfile {
    /// `A|BC`, `B|AC`, `C|AB`.
    pub cut_entropies: [f64; 3],
    /// Regularized tri-PPT relative entropy of entanglement.
    pub e_abc: BoundInterval,
    /// Single-copy tri-PPT relative entropy, where known.
    pub e_abc_single_copy: Option<f64>,
}

impl MeasureProfile {
    pub fn max_cut(&self) -> f64 {
        self.cut_entropies.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn cut_sum(&self) -> f64 {
        self.cut_entropies.iter().sum()
    }
}

/// Entropy of the reduced state on the cut's left block.
pub fn cut_entropy(psi: &PureVector, cut: &Cut) -> Result<f64> {
    if cut.parties() != psi.parties() {
        return Err(Error::InvalidCut(format!(
            "cut {cut} on a {}-party vector",
            psi.parties()
        )));
    }
    Ok(psi.reduced(cut.left())?.entropy())
}

pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// `max{S(σ_A), S(σ_B)} − S(σ_AB)`, clipped at 0.
pub fn bipartite_ree_lower(sigma_ab: &MultiState) -> Result<f64> {
    if sigma_ab.parties() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "bipartite bound on a {}-party state",
            sigma_ab.parties()
        )));
    }
    let sa = sigma_ab.partial_trace(&[0])?.entropy();
    let sb = sigma_ab.partial_trace(&[1])?.entropy();
    Ok((sa.max(sb) - sigma_ab.entropy()).max(0.0))
}

/// Reduced pair states of a tri-partite state: `AB`, `AC`, `BC`.
pub fn pair_reductions(sigma: &MultiState) -> Result<[MultiState; 3]> {
    if sigma.parties() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "expected a tri-partite state, got {} parties",
            sigma.parties()
        )));
    }
    Ok([
        sigma.partial_trace(&[0, 1])?,
        sigma.partial_trace(&[0, 2])?,
        sigma.partial_trace(&[1, 2])?,
    ])
}

/// `max_i { e2_lower(σ_i) + S(σ_i) }` over the three pair reductions.
/// `e2_lower` must lower-bound the regularized bipartite PPT relative entropy.
pub fn tripartite_lower_bound<F>(sigma: &MultiState, e2_lower: F) -> Result<f64>
where
    F: Fn(&MultiState) -> Result<f64>,
{
    let mut best = f64::NEG_INFINITY;
    for r in pair_reductions(sigma)? {
        best = best.max(e2_lower(&r)? + r.entropy());
    }
    Ok(best.max(0.0))
}

pub fn zero_oracle(_: &MultiState) -> Result<f64> {
    Ok(0.0)
}

/// 0 for PPT reductions; the filtering-protocol yield for the W pair
/// reduction; otherwise the entropic bipartite bound.
pub fn ppt_or_distill_oracle(sigma_ab: &MultiState) -> Result<f64> {
    let cut = Cut::isolate(0, 2)?;
    if sigma_ab.is_ppt(&cut, PPT_TOL)? {
        return Ok(0.0);
    }
    let entropic = bipartite_ree_lower(sigma_ab)?;
    let w = distill::reduced_w();
    if sigma_ab.dims() == w.dims() && max_abs_diff(sigma_ab.matrix(), w.matrix()) < 1e-9 {
        return Ok(distill::protocol_yield()?.max(entropic));
    }
    Ok(entropic)
}

/// A state checked PPT on every bipartition of its parties.
#[derive(Debug, Clone)]
pub struct PptCertified<'a> {
    state: &'a MultiState,
    min_eigenvalues: Vec<(Cut, f64)>,
}

impl<'a> PptCertified<'a> {
    pub fn certify(state: &'a MultiState, tol: f64) -> Result<Self> {
        let mut min_eigenvalues = Vec::new();
        for cut in Cut::all(state.parties()) {
            let eigenvalue = state.min_pt_eigenvalue(&cut)?;
            if eigenvalue < -tol {
                return Err(Error::NotPpt { cut, eigenvalue });
            }
            min_eigenvalues.push((cut, eigenvalue));
        }
        Ok(Self {
            state,
            min_eigenvalues,
        })
    }

    pub fn min_eigenvalues(&self) -> &[(Cut, f64)] {
        &self.min_eigenvalues
    }

    pub fn state(&self) -> &MultiState {
        self.state
    }

    pub fn upper_bound(&self, sigma: &MultiState) -> Result<f64> {
        relative_entropy(sigma, self.state)
    }
}

/// `S(σ‖candidate)` after checking the candidate is PPT on every cut.
pub fn candidate_upper_bound(sigma: &MultiState, candidate: &MultiState) -> Result<f64> {
    PptCertified::certify(candidate, PPT_TOL)?.upper_bound(sigma)
}

/// Cut entropies of a tri-partite pure state in `A|BC, B|AC, C|AB` order.
pub fn tripartite_cut_entropies(psi: &PureVector) -> Result<[f64; 3]> {
    let [a, b, c] = Cut::tripartite();
    Ok([
        cut_entropy(psi, &a)?,
        cut_entropy(psi, &b)?,
        cut_entropy(psi, &c)?,
    ])
}

pub fn measure_profile(kind: StateKind, cache: &TwirlCache) -> Result<MeasureProfile> {
    let psi = kind.vector()?;
    let cut_entropies = tripartite_cut_entropies(&psi)?;
    let sigma = psi.density();
    let (e_abc, single) = match kind {
        StateKind::Ghz => {
            let lo = tripartite_lower_bound(&sigma, ppt_or_distill_oracle)?;
            let hi = candidate_upper_bound(&sigma, &candidate_closest(kind)?)?;
            let iv = BoundInterval::new(
                lo,
                hi,
                "pair-reduction bound, PPT reductions",
                "relative entropy to diagonal GHZ dephasing",
            )?;
            (iv, Some(hi))
        }
        StateKind::W => {
            let lo = tripartite_lower_bound(&sigma, ppt_or_distill_oracle)?;
            let hi = candidate_upper_bound(&sigma, &candidate_closest(kind)?)?;
            let iv = BoundInterval::new(
                lo,
                hi,
                "pair-reduction bound with 1/9 filtering yield",
                "relative entropy to binomial Dicke mixture",
            )?;
            (iv, Some(hi))
        }
        StateKind::Antisym => {
            let lemma = lemma_subadditivity(cache)?;
            let iv = BoundInterval::new(
                5f64.log2(),
                lemma.bound_two_copies / 2.0,
                "tri-PPT lower bound log2 5",
                "half of two-copy twirled-state bound",
            )?;
            (iv, Some(lemma.single_copy))
        }
        other => return Err(Error::UnsupportedKind(other.to_string())),
    };
    Ok(MeasureProfile {
        cut_entropies,
        e_abc,
        e_abc_single_copy: single,
    })
}

/// Maximal single-copy PPT success probability GHZ → W,
/// `(−2 + (18−6√3)^{1/3} + (18+6√3)^{1/3}) / 4`.
pub fn ghz_to_w_probability() -> f64 {
    let r = 6.0 * 3f64.sqrt();
    (-2.0 + (18.0 - r).cbrt() + (18.0 + r).cbrt()) / 4.0
}
