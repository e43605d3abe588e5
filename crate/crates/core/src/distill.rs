//! Two-copy local excitation-number filtering on `Tr_A |W⟩⟨W|`.
//!
//! Parties B and C each hold two qubits (one from each copy) and measure how
//! many of them are `|1⟩`. Only the branch `n_B = n_C = 1` is kept; on the W
//! reduction it leaves `(|01,10⟩ + |10,01⟩)/√2`, one ebit, with probability 2/9.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::measures::cut_entropy;
use crate::states::make_w;
use crate::tensor::{tensor_product, Cut, MultiState, PureVector};

const PURE_TOL: f64 = 1e-12;
/// Branches below this probability are not reported.
const NEGLIGIBLE: f64 = 1e-15;

/// The branch the protocol keeps: one excitation on each side.
pub const KEPT_BRANCH: (usize, usize) = (1, 1);

#[derive(Debug, Clone)]
pub struct ProtocolOutcome {
    /// Measured excitation numbers `(n_B, n_C)`.
    pub branch: (usize, usize),
    pub probability: f64,
    /// Normalized post-measurement state, dims `[4, 4]`.
    pub post_state: MultiState,
    pub ebits_certified: f64,
}

/// `(1/3)|00⟩⟨00| + (2/3)|Ψ⁺⟩⟨Ψ⁺|`
pub fn reduced_w() -> MultiState {
    make_w()
        .reduced(&[1, 2])
        .expect("W has three parties")
}

fn weight_projector(weight: usize) -> Matrix {
    // two qubits, basis |q1 q2⟩ with q1 most significant
    let diag = Vector::from_iterator(
        4,
        (0u32..4).map(|i| {
            if i.count_ones() as usize == weight {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    );
    Matrix::from_diagonal(&diag)
}

/// `(|01⟩_B|10⟩_C + |10⟩_B|01⟩_C)/√2` in the `[4, 4]` layout.
pub fn kept_target() -> PureVector {
    let mut amps = Vector::zeros(16);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    amps[4 + 2] = Complex64::new(h, 0.0);
    amps[2 * 4 + 1] = Complex64::new(h, 0.0);
    PureVector::new(amps, vec![4, 4]).expect("unit norm")
}

/// Lower bound on the ebits extractable from a kept post-state: its
/// entanglement entropy when pure, otherwise the hashing bound `S(C) − S(BC)`.
fn certify_ebits(post: &MultiState) -> Result<f64> {
    if (post.purity() - 1.0).abs() <= PURE_TOL {
        let eig = crate::linalg::eigh(post.matrix());
        let top = eig.vectors.column(eig.values.len() - 1).into_owned();
        let psi = PureVector::normalized(top, post.dims().to_vec())?;
        return cut_entropy(&psi, &Cut::isolate(0, 2)?);
    }
    let coherent = post.partial_trace(&[1])?.entropy() - post.entropy();
    Ok(coherent.max(0.0))
}

/// Runs the filter on two copies of an arbitrary two-qubit state.
pub fn hamming_filter(state: &MultiState) -> Result<Vec<ProtocolOutcome>> {
    if state.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "filter expects a two-qubit state, got dims {:?}",
            state.dims()
        )));
    }
    // B1 C1 B2 C2 → B1 B2 C1 C2, then each party as one 4-dim system
    let two = tensor_product(state, state)
        .permute_parties(&[0, 2, 1, 3])?
        .with_dims(vec![4, 4])?;
    let mut outcomes = Vec::new();
    for nb in 0..=2 {
        for nc in 0..=2 {
            let k = weight_projector(nb).kronecker(&weight_projector(nc));
            let unnorm = &k * two.matrix() * &k;
            let p = crate::linalg::trace(&unnorm).re;
            if p <= NEGLIGIBLE {
                continue;
            }
            let post = MultiState::new(unnorm.unscale(p), vec![4, 4])?;
            let ebits_certified = if (nb, nc) == KEPT_BRANCH {
                certify_ebits(&post)?
            } else {
                0.0
            };
            outcomes.push(ProtocolOutcome {
                branch: (nb, nc),
                probability: p,
                post_state: post,
                ebits_certified,
            });
        }
    }
    Ok(outcomes)
}

/// The protocol on `reduced_w()`. Only two-copy blocks are supported.
pub fn hamming_filter_protocol(copies: usize) -> Result<Vec<ProtocolOutcome>> {
    if copies != 2 {
        return Err(Error::Usage(format!(
            "the filtering protocol works on 2-copy blocks, got {copies}"
        )));
    }
    hamming_filter(&reduced_w())
}

pub fn yield_of(outcomes: &[ProtocolOutcome], copies: usize) -> f64 {
    outcomes
        .iter()
        .map(|o| o.probability * o.ebits_certified)
        .sum::<f64>()
        / copies as f64
}

pub fn kept(outcomes: &[ProtocolOutcome]) -> Option<&ProtocolOutcome> {
    outcomes.iter().find(|o| o.branch == KEPT_BRANCH)
}

/// Certified ebits per input copy of `Tr_A ρ_W`; 1/9.
pub fn protocol_yield() -> Result<f64> {
    let outcomes = hamming_filter_protocol(2)?;
    let kept = kept(&outcomes).ok_or_else(|| Error::Distill("kept branch never occurs".into()))?;
    let entropy = cut_entropy(&kept_target(), &Cut::isolate(0, 2)?)?;
    if (kept.ebits_certified - entropy).abs() > PURE_TOL {
        return Err(Error::Distill(format!(
            "kept branch certifies {} ebits, target carries {entropy}",
            kept.ebits_certified
        )));
    }
    Ok(yield_of(&outcomes, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::PPT_TOL;

    #[test]
    fn reduced_w_is_rank_two_with_h_one_third_entropy() {
        let r = reduced_w();
        assert!((r.trace() - 1.0).abs() < 1e-14);
        let vals = crate::linalg::eigvalsh(r.matrix());
        assert_eq!(vals.iter().filter(|&&v| v > 1e-12).count(), 2);
        assert!((r.entropy() - (3f64.log2() - 2.0 / 3.0)).abs() < 1e-12);
        let cut = Cut::isolate(0, 2).unwrap();
        assert!(!r.is_ppt(&cut, PPT_TOL).unwrap());
    }

    #[test]
    fn copies_other_than_two_rejected() {
        assert!(hamming_filter_protocol(1).is_err());
        assert!(hamming_filter_protocol(3).is_err());
    }

    #[test]
    fn filter_rejects_non_qubit_pairs() {
        let s = MultiState::maximally_mixed(vec![3, 3]);
        assert!(hamming_filter(&s).is_err());
    }

    #[test]
    fn every_post_state_is_normalized() {
        for o in hamming_filter_protocol(2).unwrap() {
            assert!((o.post_state.trace() - 1.0).abs() < 1e-12);
            assert!(o.probability > 0.0);
        }
    }

    #[test]
    fn separable_input_certifies_nothing() {
        let s = MultiState::diagonal(&[0.25; 4], vec![2, 2]).unwrap();
        let out = hamming_filter(&s).unwrap();
        assert!(yield_of(&out, 2).abs() < 1e-12);
    }
}
