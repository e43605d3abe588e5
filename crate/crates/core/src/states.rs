//! Named states and the PPT reference states used as upper-bound witnesses.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::tensor::{MultiState, PureVector};

/// Which two parties an EPR pair connects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    AB,
    AC,
    BC,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::AB, Pair::AC, Pair::BC];

    pub fn parties(self) -> (usize, usize) {
        match self {
            Pair::AB => (0, 1),
            Pair::AC => (0, 2),
            Pair::BC => (1, 2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    Ghz,
    W,
    Epr(Pair),
    Antisym,
    MProduct,
    /// Three-qubit Dicke state with `k ∈ 0..=3` excitations.
    Dicke(u8),
}

impl StateKind {
    pub fn vector(self) -> Result<PureVector> {
        Ok(match self {
            StateKind::Ghz => make_ghz(),
            StateKind::W => make_w(),
            StateKind::Epr(p) => make_epr(p),
            StateKind::Antisym => make_antisym(),
            StateKind::MProduct => make_m_product(),
            StateKind::Dicke(k) => make_dicke(k)?,
        })
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateKind::Ghz => write!(f, "ghz"),
            StateKind::W => write!(f, "w"),
            StateKind::Epr(Pair::AB) => write!(f, "epr-ab"),
            StateKind::Epr(Pair::AC) => write!(f, "epr-ac"),
            StateKind::Epr(Pair::BC) => write!(f, "epr-bc"),
            StateKind::Antisym => write!(f, "antisym"),
            StateKind::MProduct => write!(f, "m-product"),
            StateKind::Dicke(k) => write!(f, "dicke-{k}"),
        }
    }
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.to_ascii_lowercase().as_str() {
            "ghz" => StateKind::Ghz,
            "w" => StateKind::W,
            "epr-ab" => StateKind::Epr(Pair::AB),
            "epr-ac" => StateKind::Epr(Pair::AC),
            "epr-bc" => StateKind::Epr(Pair::BC),
            "antisym" => StateKind::Antisym,
            "m-product" => StateKind::MProduct,
            other => match other.strip_prefix("dicke-").map(str::parse::<u8>) {
                Some(Ok(k)) if k <= 3 => StateKind::Dicke(k),
                _ => {
                    return Err(Error::Usage(format!(
                        "unknown state `{s}`; expected one of ghz, w, epr-ab, epr-ac, epr-bc, \
                         antisym, m-product, dicke-0..dicke-3"
                    )))
                }
            },
        };
        Ok(kind)
    }
}

fn real_vector(entries: &[(usize, f64)], dims: Vec<usize>) -> PureVector {
    let total: usize = dims.iter().product();
    let mut amps = Vector::zeros(total);
    for &(i, a) in entries {
        amps[i] += Complex64::new(a, 0.0);
    }
    PureVector::normalized(amps, dims).expect("named state is nonzero")
}

/// `(|000⟩ + |111⟩)/√2`
pub fn make_ghz() -> PureVector {
    real_vector(&[(0b000, 1.0), (0b111, 1.0)], vec![2, 2, 2])
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`
pub fn make_w() -> PureVector {
    real_vector(&[(0b001, 1.0), (0b010, 1.0), (0b100, 1.0)], vec![2, 2, 2])
}

/// `(|01⟩ − |10⟩)/√2` on `pair`, embedded tri-partite with the third party of
/// dimension 1.
pub fn make_epr(pair: Pair) -> PureVector {
    let (a, b) = pair.parties();
    let mut dims = vec![1, 1, 1];
    dims[a] = 2;
    dims[b] = 2;
    // the uninvolved party contributes digit 0 so flat indices are just the pair's
    real_vector(&[(0b01, 1.0), (0b10, -1.0)], dims)
}

/// Three-qutrit totally antisymmetric state `Σ ε_ijk |ijk⟩ / √6`.
pub fn make_antisym() -> PureVector {
    let entries: Vec<(usize, f64)> = permutations_of_three()
        .into_iter()
        .map(|([i, j, k], sign)| (9 * i + 3 * j + k, sign))
        .collect();
    real_vector(&entries, vec![3, 3, 3])
}

fn permutations_of_three() -> [([usize; 3], f64); 6] {
    [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
        ([2, 1, 0], -1.0),
        ([1, 0, 2], -1.0),
    ]
}

/// `(|00⟩ + |11⟩ + |22⟩)/√3` on a pair of qutrits, as one 9-dim party.
pub fn max_correlated_qutrits() -> PureVector {
    real_vector(&[(0, 1.0), (4, 1.0), (8, 1.0)], vec![9])
}

/// `|m_A⟩|m_B⟩|m_C⟩`: each party holds (copy-1 qutrit, copy-2 qutrit).
pub fn make_m_product() -> PureVector {
    let m = max_correlated_qutrits();
    m.tensor(&m).tensor(&m)
}

pub fn make_dicke(k: u8) -> Result<PureVector> {
    if k > 3 {
        return Err(Error::Usage(format!("Dicke excitation number {k} > 3")));
    }
    let entries: Vec<(usize, f64)> = (0usize..8)
        .filter(|i| i.count_ones() == u32::from(k))
        .map(|i| (i, 1.0))
        .collect();
    Ok(real_vector(&entries, vec![2, 2, 2]))
}

/// `psi^{⊗n}`. With `regroup`, factors are reordered from copy-major to
/// party-major and each party's `n` factors merged, so a `[3,3,3]` state
/// squared becomes `[9,9,9]`.
pub fn tensor_power(psi: &PureVector, n: usize, regroup: bool) -> Result<PureVector> {
    if n == 0 {
        return Err(Error::Usage("tensor power needs n ≥ 1".into()));
    }
    let mut out = psi.clone();
    for _ in 1..n {
        out = out.tensor(psi);
    }
    if !regroup || n == 1 {
        return Ok(out);
    }
    let k = psi.parties();
    // factor (copy c, party p) sits at c*k + p; party-major wants p*n + c
    let order: Vec<usize> = (0..k)
        .flat_map(|p| (0..n).map(move |c| c * k + p))
        .collect();
    let grouped = out.permute_parties(&order)?;
    let dims = psi.dims().iter().map(|d| d.pow(n as u32)).collect();
    grouped.with_dims(dims)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Reference PPT states whose relative-entropy distance reproduces the known
/// single-copy values.
pub fn candidate_closest(kind: StateKind) -> Result<MultiState> {
    match kind {
        StateKind::Ghz => MultiState::diagonal(
            &[0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5],
            vec![2, 2, 2],
        ),
        StateKind::W => {
            let dicke: Vec<PureVector> = (0..=3).map(make_dicke).collect::<Result<_>>()?;
            let terms: Vec<(f64, &PureVector)> = dicke
                .iter()
                .enumerate()
                .map(|(k, d)| {
                    let k = k as i32;
                    let w = binomial(3, k as u32) * (1.0f64 / 3.0).powi(k) * (2.0f64 / 3.0).powi(3 - k);
                    (w, d)
                })
                .collect();
            MultiState::mixture(&terms)
        }
        StateKind::Antisym => {
            let mut probs = vec![0.0; 27];
            for ([i, j, k], _) in permutations_of_three() {
                probs[9 * i + 3 * j + k] = 1.0 / 6.0;
            }
            MultiState::diagonal(&probs, vec![3, 3, 3])
        }
        other => Err(Error::UnsupportedKind(other.to_string())),
    }
}
