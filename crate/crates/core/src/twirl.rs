//! Twirling over `U^{⊗n} · U^{†⊗n}`, optionally with independent unitaries
//! on disjoint blocks of factors.
//!
//! The exact twirl is the Hilbert–Schmidt projection onto the span of the
//! factor-permutation operators `V_π` (restricted to block-preserving π). With `G[π,τ] = Tr(V_π† V_τ) =
//! d^{cycles(π⁻¹τ)}` and `b[π] = Tr(V_π† X)`, the coefficients solve
//! `G c = b`; G is singular once `d < n`, hence the pseudoinverse.
//! [`mc_twirl`] averages over Haar samples instead and serves as an oracle.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::measures::{candidate_upper_bound, PptCertified};
use crate::states::{candidate_closest, make_antisym, make_m_product, tensor_power, StateKind};
use crate::tensor::{MatrixJson, MultiState, PPT_TOL};

/// Largest operator dimension `d^n` accepted.
pub const MAX_DIM: usize = 1000;
/// Largest commutant basis accepted (the Gram system is this size squared).
pub const MAX_PERMUTATIONS: usize = 5040;
/// Relative singular-value cutoff for the Gram pseudoinverse.
pub const GRAM_CUTOFF: f64 = 1e-10;

const LEMMA_RESIDUAL_TOL: f64 = 1e-9;
const LEMMA_FIDELITY_TOL: f64 = 1e-10;

/// A permutation of `0..n`, stored as images: `j ↦ images[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Usage(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// An `n`-cycle `j ↦ j+1 mod n`.
    pub fn cycle(n: usize) -> Self {
        Self((0..n).map(|j| (j + 1) % n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `(self ∘ other)(j) = self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (j, &i) in self.0.iter().enumerate() {
            inv[i] = j;
        }
        Permutation(inv)
    }

    pub fn cycles(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.0[j];
            }
        }
        count
    }

    /// All `n!` permutations in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![Permutation(cur.clone())];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Permutation(cur.clone()));
        }
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            images.swap(i, rng.random_range(0..=i));
        }
        Permutation(images)
    }

    /// `V_π e_i = e_{map[i]}` on `(C^d)^{⊗n}`: the factor at position `j`
    /// moves to position `π(j)`.
    pub fn basis_map(&self, d: usize) -> Vec<usize> {
        let n = self.len();
        let total = d.pow(n as u32);
        let mut place = vec![0; n];
        for (j, &target) in self.0.iter().enumerate() {
            place[j] = d.pow((n - 1 - target) as u32);
        }
        (0..total)
            .map(|mut i| {
                let mut out = 0;
                for j in (0..n).rev() {
                    out += (i % d) * place[j];
                    i /= d;
                }
                out
            })
            .collect()
    }
}

/// Dense `V_π` with `V_π|i₁…i_n⟩ = |i_{π⁻¹(1)}…i_{π⁻¹(n)}⟩`.
pub fn permutation_operator(pi: &Permutation, d: usize) -> Matrix {
    let map = pi.basis_map(d);
    let mut v = Matrix::zeros(map.len(), map.len());
    for (i, &j) in map.iter().enumerate() {
        v[(j, i)] = Complex64::new(1.0, 0.0);
    }
    v
}

/// Which unitary group the twirl averages over: factors in the same block
/// share one `U`, distinct blocks get independent unitaries. The commutant
/// is spanned by the permutations that map every block to itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwirlSpec {
    pub local_dim: usize,
    pub n_factors: usize,
    blocks: Vec<Vec<usize>>,
}

fn factorial(n: usize) -> usize {
    (1..=n).try_fold(1usize, |a, k| a.checked_mul(k)).unwrap_or(usize::MAX)
}

impl TwirlSpec {
    /// A single `U^{⊗n}` on all factors.
    pub fn new(local_dim: usize, n_factors: usize) -> Result<Self> {
        Self::with_blocks(local_dim, n_factors, vec![(0..n_factors).collect()])
    }

    /// Independent unitaries per block; `blocks` must partition `0..n_factors`.
    pub fn with_blocks(local_dim: usize, n_factors: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if local_dim < 2 || n_factors < 1 {
            return Err(Error::Usage(format!(
                "twirl needs d ≥ 2 and n ≥ 1, got d={local_dim}, n={n_factors}"
            )));
        }
        let mut seen = vec![false; n_factors];
        for &f in blocks.iter().flatten() {
            if f >= n_factors || std::mem::replace(&mut seen[f], true) {
                return Err(Error::Usage(format!(
                    "blocks {blocks:?} do not partition {n_factors} factors"
                )));
            }
        }
        if seen.iter().any(|s| !s) || blocks.iter().any(Vec::is_empty) {
            return Err(Error::Usage(format!(
                "blocks {blocks:?} do not partition {n_factors} factors"
            )));
        }
        let dim = (local_dim as u128).checked_pow(n_factors as u32).unwrap_or(u128::MAX);
        let perms = blocks
            .iter()
            .try_fold(1usize, |a, b| a.checked_mul(factorial(b.len())))
            .unwrap_or(usize::MAX);
        if dim > MAX_DIM as u128 || perms > MAX_PERMUTATIONS {
            return Err(Error::TwirlTooLarge {
                local_dim,
                factors: n_factors,
                dim: usize::try_from(dim).unwrap_or(usize::MAX),
                perms,
            });
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            b.sort_unstable();
        }
        Ok(Self {
            local_dim,
            n_factors,
            blocks,
        })
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.n_factors as u32)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block-preserving permutations, in a fixed order.
    pub fn permutations(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.n_factors)];
        for block in &self.blocks {
            let local = Permutation::all(block.len());
            out = out
                .iter()
                .flat_map(|base| {
                    local.iter().map(move |sigma| {
                        let mut images = base.0.clone();
                        for (i, &f) in block.iter().enumerate() {
                            images[f] = block[sigma.0[i]];
                        }
                        Permutation(images)
                    })
                })
                .collect();
        }
        out
    }

    fn block_of(&self) -> Vec<usize> {
        let mut owner = vec![0; self.n_factors];
        for (b, block) in self.blocks.iter().enumerate() {
            for &f in block {
                owner[f] = b;
            }
        }
        owner
    }
}

fn check_operator(x: &Matrix, spec: &TwirlSpec) -> Result<()> {
    if !x.is_square() || x.nrows() != spec.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator for a {}^{} twirl",
            x.nrows(),
            x.ncols(),
            spec.local_dim,
            spec.n_factors
        )));
    }
    Ok(())
}

/// Coefficients `c_π` of the projection, in `TwirlSpec::permutations` order.
pub fn commutant_coefficients(x: &Matrix, spec: &TwirlSpec) -> Result<(Vec<Permutation>, Vec<Complex64>)> {
    check_operator(x, spec)?;
    let d = spec.local_dim;
    let perms = spec.permutations();
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let k = perms.len();

    let gram = DMatrix::<f64>::from_fn(k, k, |a, b| {
        (d as f64).powi(inverses[a].compose(&perms[b]).cycles() as i32)
    });
    // Tr(V_π† X) = Σ_i X[map(i), i]
    let rhs: Vec<Complex64> = perms
        .iter()
        .map(|p| {
            p.basis_map(d)
                .iter()
                .enumerate()
                .map(|(i, &j)| x[(j, i)])
                .sum()
        })
        .collect();

    let eig = gram.symmetric_eigen();
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
    for (m, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= GRAM_CUTOFF * top {
            continue;
        }
        let u = eig.eigenvectors.column(m);
        let proj: Complex64 = u.iter().zip(&rhs).map(|(&ui, &bi)| bi * ui).sum::<Complex64>() / lambda;
        for (c, &ui) in coeffs.iter_mut().zip(u.iter()) {
            *c += proj * ui;
        }
    }
    Ok((perms, coeffs))
}

/// Exact twirl of `x` over the unitary group described by `spec`.
pub fn schur_weyl_twirl(x: &Matrix, spec: &TwirlSpec) -> Result<Matrix> {
    let (perms, coeffs) = commutant_coefficients(x, spec)?;
    let dim = spec.dim();
    let mut out = Matrix::zeros(dim, dim);
    for (p, c) in perms.iter().zip(coeffs) {
        for (i, j) in p.basis_map(spec.local_dim).into_iter().enumerate() {
            out[(j, i)] += c;
        }
    }
    Ok(out)
}

/// Haar-random `d×d` unitary: QR of a complex Ginibre matrix with the phases
/// of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng>(d: usize, rng: &mut R) -> Matrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = Matrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DVector::from_iterator(
        d,
        (0..d).map(|i| {
            let rii = r[(i, i)];
            if rii.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                rii / rii.norm()
            }
        }),
    );
    q * Matrix::from_diagonal(&phases)
}

pub fn operator_power(u: &Matrix, n: usize) -> Matrix {
    let mut out = u.clone();
    for _ in 1..n {
        out = out.kronecker(u);
    }
    out
}

/// `(1/N) Σ W_i X W_i†` with `W_i` the tensor product of Haar samples (one
/// per block), reproducible from `seed`.
pub fn mc_twirl(x: &Matrix, spec: &TwirlSpec, samples: usize, seed: u64) -> Result<Matrix> {
    check_operator(x, spec)?;
    if samples < 1 {
        return Err(Error::Usage("Monte-Carlo twirl needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = spec.dim();
    let mut acc = Matrix::zeros(dim, dim);
    let owner = spec.block_of();
    for _ in 0..samples {
        let us: Vec<Matrix> = (0..spec.blocks.len())
            .map(|_| haar_unitary(spec.local_dim, &mut rng))
            .collect();
        let w = owner[1..]
            .iter()
            .fold(us[owner[0]].clone(), |acc, &b| acc.kronecker(&us[b]));
        acc += &w * x * w.adjoint();
    }
    Ok(acc.unscale(samples as f64))
}

/// Disk (optional) and in-process cache for the twirl pipeline.
#[derive(Debug, Default)]
pub struct TwirlCache {
    dir: Option<PathBuf>,
    lemma: Mutex<Option<LemmaReport>>,
}

impl TwirlCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
            lemma: Mutex::new(None),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn cache_key(x: &Matrix, spec: &TwirlSpec) -> String {
        let mut h = Sha256::new();
        h.update((spec.local_dim as u64).to_le_bytes());
        h.update((spec.n_factors as u64).to_le_bytes());
        for block in &spec.blocks {
            h.update((block.len() as u64).to_le_bytes());
            for &f in block {
                h.update((f as u64).to_le_bytes());
            }
        }
        for z in x.iter() {
            h.update(z.re.to_le_bytes());
            h.update(z.im.to_le_bytes());
        }
        let digest = h.finalize();
        let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        format!("twirl-d{}-n{}-{hex}", spec.local_dim, spec.n_factors)
    }

    pub fn path_for(&self, x: &Matrix, spec: &TwirlSpec) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}.json", Self::cache_key(x, spec))))
    }

    /// `schur_weyl_twirl` backed by the cache directory, if any. Unreadable
    /// or mismatched cache files are recomputed and overwritten.
    pub fn twirl(&self, x: &Matrix, spec: &TwirlSpec) -> Result<Matrix> {
        let Some(path) = self.path_for(x, spec) else {
            return schur_weyl_twirl(x, spec);
        };
        if let Some(m) = load_cached(&path, spec) {
            return Ok(m);
        }
        let m = schur_weyl_twirl(x, spec)?;
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let json = MatrixJson::from_matrix(&m, vec![spec.local_dim; spec.n_factors]);
        fs::write(&path, serde_json::to_vec(&json)?)?;
        Ok(m)
    }
}

fn load_cached(path: &Path, spec: &TwirlSpec) -> Option<Matrix> {
    let bytes = fs::read(path).ok()?;
    let json: MatrixJson = serde_json::from_slice(&bytes).ok()?;
    if json.dims != vec![spec.local_dim; spec.n_factors] {
        return None;
    }
    json.to_matrix().ok()
}

/// Twirled `|m⟩⟨m|` with its overlap on `(|A⟩⟨A|)^{⊗2}`.
#[derive(Debug, Clone)]
pub struct TwirlResult {
    /// Party dims `[9, 9, 9]`.
    pub rho: MultiState,
    pub fidelity_f: f64,
    /// `‖ρv − F v‖₂` for `v = |A⟩^{⊗2}`.
    pub eigen_residual: f64,
}

/// Two copies of three qutrits, party-major (`A1 A2 B1 B2 C1 C2`), with an
/// independent unitary per copy: `U^{⊗3}` on copy 1 and `V^{⊗3}` on copy 2.
/// Both copies of `|A⟩` are invariant, so the commutant is `S₃ × S₃`.
pub fn two_copy_spec() -> TwirlSpec {
    TwirlSpec::with_blocks(3, 6, vec![vec![0, 2, 4], vec![1, 3, 5]]).expect("valid blocks")
}

pub fn twirl_m_product(cache: &TwirlCache) -> Result<TwirlResult> {
    twirl_m_product_with(cache, &two_copy_spec())
}

pub fn twirl_m_product_with(cache: &TwirlCache, spec: &TwirlSpec) -> Result<TwirlResult> {
    let spec = spec.clone();
    let m = make_m_product();
    let x = linalg::outer(m.amplitudes());
    let rho = MultiState::from_trusted(cache.twirl(&x, &spec)?, vec![9, 9, 9]);
    let a2 = tensor_power(&make_antisym(), 2, true)?;
    let fidelity_f = rho.expectation(&a2)?;
    let v = a2.amplitudes();
    let eigen_residual = (rho.matrix() * v - v.scale(fidelity_f)).norm();
    Ok(TwirlResult {
        rho,
        fidelity_f,
        eigen_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub fidelity_f: f64,
    pub eigen_residual: f64,
    pub rho_min_eigenvalue: f64,
    pub rho_trace: f64,
    /// `(cut label, min partial-transpose eigenvalue)` for `A|BC, B|AC, C|AB`.
    pub min_pt_eigenvalues: Vec<(String, f64)>,
    pub bound_two_copies: f64,
    pub single_copy: f64,
    pub strict_gap: f64,
}

fn lemma_check(ok: bool, check: &'static str, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::LemmaCheck {
            check,
            detail: detail(),
        })
    }
}

fn run_lemma(cache: &TwirlCache) -> Result<LemmaReport> {
    let tw = twirl_m_product(cache)?;
    let rho_min_eigenvalue = linalg::eigvalsh(tw.rho.matrix())[0];
    let rho_trace = tw.rho.trace();
    lemma_check(
        rho_min_eigenvalue >= -1e-10 && (rho_trace - 1.0).abs() < 1e-10,
        "density",
        || format!("trace {rho_trace}, min eigenvalue {rho_min_eigenvalue:.3e}"),
    )?;

    let certified = PptCertified::certify(&tw.rho, PPT_TOL).map_err(|e| Error::LemmaCheck {
        check: "ppt",
        detail: e.to_string(),
    })?;
    let min_pt_eigenvalues = certified
        .min_eigenvalues()
        .iter()
        .map(|(c, v)| (c.to_string(), *v))
        .collect();

    lemma_check(
        (tw.fidelity_f - 1.0 / 27.0).abs() < LEMMA_FIDELITY_TOL,
        "fidelity",
        || format!("F = {}", tw.fidelity_f),
    )?;
    lemma_check(tw.eigen_residual < LEMMA_RESIDUAL_TOL, "eigenvector", || {
        format!("residual {:.3e}", tw.eigen_residual)
    })?;

    let a = make_antisym();
    let a2 = tensor_power(&a, 2, true)?.density();
    let bound_two_copies = certified.upper_bound(&a2)?;
    lemma_check(bound_two_copies.is_finite(), "relative entropy", || {
        "support of (|A⟩⟨A|)^⊗2 not inside support of ρ".into()
    })?;

    let single_copy = candidate_upper_bound(&a.density(), &candidate_closest(StateKind::Antisym)?)?;
    let strict_gap = 2.0 * single_copy - bound_two_copies;
    lemma_check(strict_gap > 0.0, "strict gap", || format!("gap {strict_gap}"))?;

    Ok(LemmaReport {
        fidelity_f: tw.fidelity_f,
        eigen_residual: tw.eigen_residual,
        rho_min_eigenvalue,
        rho_trace,
        min_pt_eigenvalues,
        bound_two_copies,
        single_copy,
        strict_gap,
    })
}

/// Two-copy bound for the antisymmetric state via the twirled `|m⟩⟨m|`,
/// compared against twice the single-copy value. Memoized in `cache`.
pub fn lemma_subadditivity(cache: &TwirlCache) -> Result<LemmaReport> {
    let mut memo = cache.lemma.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(r) = memo.as_ref() {
        return Ok(r.clone());
    }
    let report = run_lemma(cache)?;
    *memo = Some(report.clone());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn random_operator(dim: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    #[test]
    fn all_permutations_count_and_uniqueness() {
        let perms = Permutation::all(4);
        assert_eq!(perms.len(), 24);
        let set: std::collections::HashSet<_> = perms.iter().cloned().collect();
        assert_eq!(set.len(), 24);
        assert_eq!(Permutation::all(1).len(), 1);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![1, 2]).is_err());
        assert!(Permutation::new(vec![1, 0]).is_ok());
    }

    #[test]
    fn identity_operator_has_full_trace() {
        let v = permutation_operator(&Permutation::identity(3), 2);
        assert_eq!(v, Matrix::identity(8, 8));
    }

    #[test]
    fn trace_counts_cycles() {
        let v = permutation_operator(&Permutation::cycle(6), 3);
        assert!((linalg::trace(&v).re - 3.0).abs() < 1e-12);
        let swap = Permutation::new(vec![1, 0, 2]).unwrap();
        let v = permutation_operator(&swap, 3);
        assert!((linalg::trace(&v).re - 9.0).abs() < 1e-12);
    }

    #[test]
    fn operators_represent_the_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let p = Permutation::random(4, &mut rng);
            let t = Permutation::random(4, &mut rng);
            let lhs = permutation_operator(&p, 2) * permutation_operator(&t, 2);
            let rhs = permutation_operator(&p.compose(&t), 2);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn operator_moves_factor_to_image_position() {
        // π = (0→1, 1→2, 2→0): |a b c⟩ ↦ |c a b⟩
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        let map = p.basis_map(3);
        let idx = |a: usize, b: usize, c: usize| 9 * a + 3 * b + c;
        assert_eq!(map[idx(0, 1, 2)], idx(2, 0, 1));
    }

    #[test]
    fn spec_guard() {
        assert!(TwirlSpec::new(1, 3).is_err());
        assert!(TwirlSpec::new(2, 0).is_err());
        assert!(matches!(TwirlSpec::new(11, 3), Err(Error::TwirlTooLarge { dim: 1331, .. })));
        assert!(matches!(TwirlSpec::new(2, 9), Err(Error::TwirlTooLarge { .. })));
        assert!(TwirlSpec::new(3, 6).is_ok());
    }

    #[test]
    fn block_specs() {
        let spec = two_copy_spec();
        let perms = spec.permutations();
        assert_eq!(perms.len(), 36);
        assert!(perms.iter().all(|p| p.images().iter().enumerate().all(|(f, &t)| f % 2 == t % 2)));
        assert_eq!(TwirlSpec::new(3, 6).unwrap().permutations().len(), 720);
        assert!(TwirlSpec::with_blocks(2, 3, vec![vec![0, 1]]).is_err());
        assert!(TwirlSpec::with_blocks(2, 3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(TwirlSpec::with_blocks(2, 3, vec![vec![0, 2], vec![1], vec![]]).is_err());
    }

    #[test]
    fn two_copy_antisym_projector_is_fixed() {
        let a2 = tensor_power(&make_antisym(), 2, true).unwrap();
        let x = linalg::outer(a2.amplitudes());
        let y = schur_weyl_twirl(&x, &two_copy_spec()).unwrap();
        assert!(max_abs_diff(&x, &y) < 1e-12);
    }

    #[test]
    fn block_mc_twirl_matches_exact() {
        let spec = TwirlSpec::with_blocks(2, 3, vec![vec![0, 2], vec![1]]).unwrap();
        let x = random_operator(8, 21);
        let exact = schur_weyl_twirl(&x, &spec).unwrap();
        let mc = mc_twirl(&x, &spec, 4000, 3).unwrap();
        assert!(max_abs_diff(&exact, &mc) < 0.15);
    }

    #[test]
    fn twirl_of_identity_is_identity() {
        let spec = TwirlSpec::new(2, 3).unwrap();
        let id = Matrix::identity(8, 8);
        assert!(max_abs_diff(&schur_weyl_twirl(&id, &spec).unwrap(), &id) < 1e-12);
        let mc = mc_twirl(&id, &spec, 3, 1).unwrap();
        assert!(max_abs_diff(&mc, &id) < 1e-12);
    }

    #[test]
    fn antisym_projector_is_fixed() {
        let spec = TwirlSpec::new(3, 3).unwrap();
        let a = linalg::outer(make_antisym().amplitudes());
        assert!(max_abs_diff(&schur_weyl_twirl(&a, &spec).unwrap(), &a) < 1e-12);
    }

    #[test]
    fn twirl_is_idempotent_and_trace_preserving() {
        let spec = TwirlSpec::new(2, 4).unwrap();
        let x = random_operator(16, 11);
        let once = schur_weyl_twirl(&x, &spec).unwrap();
        let twice = schur_weyl_twirl(&once, &spec).unwrap();
        assert!(max_abs_diff(&once, &twice) < 1e-9);
        assert!((linalg::trace(&once) - linalg::trace(&x)).norm() < 1e-10);
    }

    #[test]
    fn mc_twirl_rejects_zero_samples_and_is_reproducible() {
        let spec = TwirlSpec::new(2, 2).unwrap();
        let x = random_operator(4, 3);
        assert!(mc_twirl(&x, &spec, 0, 1).is_err());
        assert_eq!(mc_twirl(&x, &spec, 20, 9).unwrap(), mc_twirl(&x, &spec, 20, 9).unwrap());
        let mc = mc_twirl(&x, &spec, 5, 2).unwrap();
        assert!((linalg::trace(&mc) - linalg::trace(&x)).norm() < 1e-12);
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = haar_unitary(3, &mut rng);
        assert!(max_abs_diff(&(&u * u.adjoint()), &Matrix::identity(3, 3)) < 1e-12);
    }

    #[test]
    fn wrong_operator_size_rejected() {
        let spec = TwirlSpec::new(2, 3).unwrap();
        assert!(schur_weyl_twirl(&Matrix::identity(4, 4), &spec).is_err());
    }

    #[test]
    fn cache_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TwirlCache::at(dir.path());
        let spec = TwirlSpec::new(2, 3).unwrap();
        let x = random_operator(8, 4);
        let first = cache.twirl(&x, &spec).unwrap();
        let path = cache.path_for(&x, &spec).unwrap();
        assert!(path.exists());
        let second = cache.twirl(&x, &spec).unwrap();
        assert_eq!(first, second);
        fs::write(&path, b"not json").unwrap();
        assert_eq!(cache.twirl(&x, &spec).unwrap(), first);
    }
}
