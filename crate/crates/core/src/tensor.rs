//! States on tensor-factored spaces and the operations on them.
//!
//! Index convention: party 0 is the most significant tensor factor, so the
//! flat index of `|i₀ i₁ … i_{k−1}⟩` is `((i₀·d₁ + i₁)·d₂ + …)`. This is the
//! same ordering nalgebra's `kronecker` produces.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};

/// Eigenvalues below this fraction of the largest are treated as zero.
pub const KERNEL_CUTOFF: f64 = 1e-12;
/// Weight of σ on ker ρ above which `S(σ‖ρ)` is reported as +∞.
pub const SUPPORT_TOL: f64 = 1e-9;
/// Default PPT acceptance: min partial-transpose eigenvalue ≥ −PPT_TOL.
pub const PPT_TOL: f64 = 1e-9;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

fn party_label(p: usize) -> char {
    (b'A' + (p % 26) as u8) as char
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for p in (0..dims.len().saturating_sub(1)).rev() {
        s[p] = s[p + 1] * dims[p + 1];
    }
    s
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for p in (0..dims.len()).rev() {
        out[p] = index % dims[p];
        index /= dims[p];
    }
    out
}

fn check_party_set(parties: &[usize], n: usize, what: &str) -> Result<Vec<usize>> {
    if parties.is_empty() {
        return Err(Error::Usage(format!("{what}: party set is empty")));
    }
    let mut sorted = parties.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != parties.len() {
        return Err(Error::Usage(format!("{what}: repeated party in {parties:?}")));
    }
    if let Some(&bad) = sorted.iter().find(|&&p| p >= n) {
        return Err(Error::Usage(format!(
            "{what}: party {bad} out of range for {n} parties"
        )));
    }
    Ok(sorted)
}

/// `table[k * traced_dim + t]` is the flat index whose kept digits encode `k`
/// and whose traced digits encode `t`.
struct Split {
    kept_dims: Vec<usize>,
    kept_dim: usize,
    traced_dim: usize,
    table: Vec<usize>,
}

fn split(dims: &[usize], keep: &[usize]) -> Split {
    let kept_dims: Vec<usize> = keep.iter().map(|&p| dims[p]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|p| !keep.contains(p)).collect();
    let kept_dim: usize = kept_dims.iter().product();
    let traced_dim: usize = traced.iter().map(|&p| dims[p]).product();
    let total = kept_dim * traced_dim;
    let mut table = vec![0; total];
    for full in 0..total {
        let d = digits(full, dims);
        let k = keep.iter().fold(0, |acc, &p| acc * dims[p] + d[p]);
        let t = traced.iter().fold(0, |acc, &p| acc * dims[p] + d[p]);
        table[k * traced_dim + t] = full;
    }
    Split {
        kept_dims,
        kept_dim,
        traced_dim,
        table,
    }
}

/// Maps old flat indices to flat indices after reordering parties so that new
/// party `k` is old party `order[k]`.
fn permutation_map(dims: &[usize], order: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = dims.len();
    let sorted = check_party_set(order, n, "party permutation")?;
    if sorted.len() != n {
        return Err(Error::Usage(format!(
            "party permutation {order:?} must mention all {n} parties"
        )));
    }
    let new_dims: Vec<usize> = order.iter().map(|&p| dims[p]).collect();
    let new_strides = strides(&new_dims);
    let total: usize = dims.iter().product();
    let map = (0..total)
        .map(|i| {
            let d = digits(i, dims);
            order
                .iter()
                .zip(&new_strides)
                .map(|(&old, &s)| d[old] * s)
                .sum()
        })
        .collect();
    Ok((map, new_dims))
}

fn check_regroup(old: &[usize], new: &[usize]) -> Result<()> {
    let a: usize = old.iter().product();
    let b: usize = new.iter().product();
    if a != b || new.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "cannot regroup dims {old:?} as {new:?}"
        )));
    }
    Ok(())
}

/// A bipartition of the party set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Cut {
    pub fn new(left: &[usize], parties: usize) -> Result<Self> {
        let left = check_party_set(left, parties, "cut").map_err(|e| Error::InvalidCut(e.to_string()))?;
        let right: Vec<usize> = (0..parties).filter(|p| !left.contains(p)).collect();
        if right.is_empty() {
            return Err(Error::InvalidCut(format!(
                "left block {left:?} covers all {parties} parties"
            )));
        }
        Ok(Self { left, right })
    }

    /// `{party} | rest`.
    pub fn isolate(party: usize, parties: usize) -> Result<Self> {
        Self::new(&[party], parties)
    }

    /// The three single-party cuts `A|BC`, `B|AC`, `C|AB`.
    pub fn tripartite() -> [Cut; 3] {
        [0, 1, 2].map(|p| Cut::isolate(p, 3).expect("valid tripartite cut"))
    }

    /// Every bipartition of `parties`, each listed once (with the smaller
    /// block on the left, ties broken by which side holds party 0).
    pub fn all(parties: usize) -> Vec<Cut> {
        let mut cuts: Vec<Cut> = (1u64..(1 << parties) - 1)
            .filter_map(|mask| {
                let size = mask.count_ones() as usize;
                let keep = 2 * size < parties || (2 * size == parties && mask & 1 == 1);
                keep.then(|| {
                    let left: Vec<usize> = (0..parties).filter(|p| mask >> p & 1 == 1).collect();
                    Cut::new(&left, parties).expect("nonempty proper subset")
                })
            })
            .collect();
        cuts.sort_by(|a, b| a.left.len().cmp(&b.left.len()).then(a.left.cmp(&b.left)));
        cuts
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn parties(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn swapped(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &p in &self.left {
            write!(f, "{}", party_label(p))?;
        }
        write!(f, "|")?;
        for &p in &self.right {
            write!(f, "{}", party_label(p))?;
        }
        Ok(())
    }
}

/// A normalized state vector with explicit party dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureVector {
    amps: Vector,
    dims: Vec<usize>,
}

impl PureVector {
    pub fn new(amps: Vector, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total != amps.len() {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} do not match {} amplitudes",
                amps.len()
            )));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("vector norm {norm} is not 1")));
        }
        Ok(Self { amps, dims })
    }

    /// Normalizes `amps` first; fails only on a zero vector or bad dims.
    pub fn normalized(amps: Vector, dims: Vec<usize>) -> Result<Self> {
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(amps.unscale(norm), dims)
    }

    /// Product basis state `|i₀ i₁ …⟩`.
    pub fn basis(digits: &[usize], dims: Vec<usize>) -> Result<Self> {
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(d, n)| d >= n) {
            return Err(Error::DimensionMismatch(format!(
                "basis label {digits:?} does not fit dims {dims:?}"
            )));
        }
        let total: usize = dims.iter().product();
        let index = digits.iter().zip(&dims).fold(0, |acc, (d, n)| acc * n + d);
        let mut amps = Vector::zeros(total);
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps, dims)
    }

    pub fn amplitudes(&self) -> &Vector {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn density(&self) -> MultiState {
        MultiState::from_trusted(linalg::outer(&self.amps), self.dims.clone())
    }

    pub fn tensor(&self, other: &PureVector) -> PureVector {
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        PureVector {
            amps: self.amps.kronecker(&other.amps),
            dims,
        }
    }

    /// Reorders parties: new party `k` is old party `order[k]`.
    pub fn permute_parties(&self, order: &[usize]) -> Result<PureVector> {
        let (map, dims) = permutation_map(&self.dims, order)?;
        let mut amps = Vector::zeros(self.dim());
        for (old, &new) in map.iter().enumerate() {
            amps[new] = self.amps[old];
        }
        Ok(PureVector { amps, dims })
    }

    /// Relabels the party structure without touching amplitudes (e.g. merging
    /// adjacent factors `[3,3,3,3,3,3] → [9,9,9]`).
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<PureVector> {
        check_regroup(&self.dims, &dims)?;
        Ok(PureVector {
            amps: self.amps.clone(),
            dims,
        })
    }

    /// Reduced density operator on `keep` (kept parties stay in their
    /// original order).
    pub fn reduced(&self, keep: &[usize]) -> Result<MultiState> {
        let keep = check_party_set(keep, self.parties(), "reduced state")?;
        let s = split(&self.dims, &keep);
        let m = Matrix::from_fn(s.kept_dim, s.kept_dim, |a, b| {
            (0..s.traced_dim)
                .map(|t| {
                    self.amps[s.table[a * s.traced_dim + t]]
                        * self.amps[s.table[b * s.traced_dim + t]].conj()
                })
                .sum()
        });
        Ok(MultiState::from_trusted(m, s.kept_dims))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "inner product of {}-dim and {}-dim vectors",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.amps.dotc(&other.amps))
    }
}

/// A density operator with explicit party dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiState {
    matrix: Matrix,
    dims: Vec<usize>,
}

impl MultiState {
    /// Validates squareness, dims, Hermiticity, unit trace and positivity.
    pub fn new(matrix: Matrix, dims: Vec<usize>) -> Result<Self> {
        check_shape(&matrix, &dims)?;
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.3e})")));
        }
        let tr = linalg::trace(&matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = linalg::eigvalsh(&matrix)[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix, dims })
    }

    /// For results of operations that provably preserve validity.
    pub(crate) fn from_trusted(matrix: Matrix, dims: Vec<usize>) -> Self {
        debug_assert!(check_shape(&matrix, &dims).is_ok());
        Self { matrix, dims }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self::from_trusted(Matrix::identity(d, d).unscale(d as f64), dims)
    }

    /// Diagonal state with the given probabilities in the computational basis.
    pub fn diagonal(probs: &[f64], dims: Vec<usize>) -> Result<Self> {
        let d = Vector::from_iterator(probs.len(), probs.iter().map(|&p| Complex64::new(p, 0.0)));
        Self::new(Matrix::from_diagonal(&d), dims)
    }

    /// `Σ w_i |ψ_i⟩⟨ψ_i|`.
    pub fn mixture(terms: &[(f64, &PureVector)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let dims = first.1.dims.clone();
        let d = first.1.dim();
        let mut m = Matrix::zeros(d, d);
        for (w, psi) in terms {
            if psi.dims != dims {
                return Err(Error::DimensionMismatch(format!(
                    "mixture of dims {:?} and {:?}",
                    dims, psi.dims
                )));
            }
            m += linalg::outer(&psi.amps).scale(*w);
        }
        Self::new(m, dims)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &PureVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}-dim vector against {}-dim state",
                psi.dim(),
                self.dim()
            )));
        }
        Ok(psi.amps.dotc(&(&self.matrix * &psi.amps)).re)
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<MultiState> {
        let keep = check_party_set(keep, self.parties(), "partial trace")?;
        let s = split(&self.dims, &keep);
        let m = Matrix::from_fn(s.kept_dim, s.kept_dim, |a, b| {
            (0..s.traced_dim)
                .map(|t| {
                    self.matrix[(
                        s.table[a * s.traced_dim + t],
                        s.table[b * s.traced_dim + t],
                    )]
                })
                .sum()
        });
        Ok(MultiState::from_trusted(m, s.kept_dims))
    }

    /// Transposes the factors on the cut's right block.
    pub fn partial_transpose(&self, cut: &Cut) -> Result<Matrix> {
        partial_transpose_matrix(&self.matrix, &self.dims, cut)
    }

    pub fn min_pt_eigenvalue(&self, cut: &Cut) -> Result<f64> {
        Ok(linalg::eigvalsh(&self.partial_transpose(cut)?)[0])
    }

    /// True iff the partial transpose across `cut` has no eigenvalue below `−tol`.
    pub fn is_ppt(&self, cut: &Cut, tol: f64) -> Result<bool> {
        Ok(self.min_pt_eigenvalue(cut)? >= -tol)
    }

    pub fn entropy(&self) -> f64 {
        entropy_of_spectrum(&linalg::eigvalsh(&self.matrix))
    }

    pub fn permute_parties(&self, order: &[usize]) -> Result<MultiState> {
        let (map, dims) = permutation_map(&self.dims, order)?;
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, &ni) in map.iter().enumerate() {
            for (j, &nj) in map.iter().enumerate() {
                m[(ni, nj)] = self.matrix[(i, j)];
            }
        }
        Ok(MultiState::from_trusted(m, dims))
    }

    pub fn with_dims(&self, dims: Vec<usize>) -> Result<MultiState> {
        check_regroup(&self.dims, &dims)?;
        Ok(MultiState::from_trusted(self.matrix.clone(), dims))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_matrix(&self.matrix, self.dims.clone())
    }
}

fn check_shape(matrix: &Matrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if !matrix.is_square() || dims.is_empty() || matrix.nrows() != total {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix with dims {dims:?}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    Ok(())
}

/// `−Σ λ log₂ λ` over eigenvalues above the kernel cutoff.
/// Partial transpose of any square operator on `dims`, e.g. one that is no
/// longer positive.
pub fn partial_transpose_matrix(m: &Matrix, dims: &[usize], cut: &Cut) -> Result<Matrix> {
    let n: usize = dims.iter().product();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on dims {dims:?}",
            m.nrows(),
            m.ncols()
        )));
    }
    if cut.parties() != dims.len() {
        return Err(Error::InvalidCut(format!(
            "cut {cut} has {} parties, state has {}",
            cut.parties(),
            dims.len()
        )));
    }
    let st = strides(dims);
    let right_part: Vec<usize> = (0..n)
        .map(|i| {
            let d = digits(i, dims);
            cut.right().iter().map(|&p| d[p] * st[p]).sum()
        })
        .collect();
    Ok(Matrix::from_fn(n, n, |i, j| {
        let (ri, rj) = (right_part[i], right_part[j]);
        m[(i - ri + rj, j - rj + ri)]
    }))
}

pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(0.0, f64::max);
    let cutoff = KERNEL_CUTOFF * max;
    let s: f64 = values
        .iter()
        .filter(|&&l| l > cutoff)
        .map(|&l| -l * l.log2())
        .sum();
    s.max(0.0)
}

pub fn tensor_product(a: &MultiState, b: &MultiState) -> MultiState {
    let dims = a.dims.iter().chain(&b.dims).copied().collect();
    MultiState::from_trusted(a.matrix.kronecker(&b.matrix), dims)
}

pub fn von_neumann_entropy(s: &MultiState) -> f64 {
    s.entropy()
}

/// `Tr σ(log₂σ − log₂ρ)`, or `+∞` when σ has weight on ker ρ.
pub fn relative_entropy(sigma: &MultiState, rho: &MultiState) -> Result<f64> {
    if sigma.dims != rho.dims {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between dims {:?} and {:?}",
            sigma.dims, rho.dims
        )));
    }
    let sigma_spec = linalg::eigvalsh(&sigma.matrix);
    let rho_eig = linalg::eigh(&rho.matrix);
    let cutoff = KERNEL_CUTOFF * rho_eig.max_value();

    // ⟨v_k|σ|v_k⟩ for each eigenvector of ρ
    let sv = &sigma.matrix * &rho_eig.vectors;
    let mut cross = 0.0;
    let mut kernel_weight = 0.0;
    for (k, &lambda) in rho_eig.values.iter().enumerate() {
        let w = rho_eig.vectors.column(k).dotc(&sv.column(k)).re;
        if lambda > cutoff {
            cross += w * lambda.log2();
        } else {
            kernel_weight += w;
        }
    }
    if kernel_weight > SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    let neg_entropy = -entropy_of_spectrum(&sigma_spec);
    Ok((neg_entropy - cross).max(0.0))
}

/// `|⟨ψ|φ⟩|²`.
pub fn overlap(psi: &PureVector, phi: &PureVector) -> Result<f64> {
    Ok(psi.inner(phi)?.norm_sqr())
}

/// Row-major JSON form `{dims, re, im}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix, dims: Vec<usize>) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            dims,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        let n = self.re.len();
        let total: usize = self.dims.iter().product();
        let ragged = self.im.len() != n
            || self.re.iter().chain(&self.im).any(|row| row.len() != n);
        if ragged || total != n {
            return Err(Error::DimensionMismatch(format!(
                "malformed matrix JSON for dims {:?}",
                self.dims
            )));
        }
        Ok(Matrix::from_fn(n, n, |r, c| {
            Complex64::new(self.re[r][c], self.im[r][c])
        }))
    }
}
