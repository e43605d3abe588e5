//! Dense Hermitian kernels shared by every module.
//!
//! Everything routes through [`eigh`] / [`eigvalsh`], which symmetrize the
//! input as `(M + M†) / 2` before handing it to faer's Hermitian solver.
//! nalgebra's complex solver returns NaN on sparse inputs such as
//! `(|A⟩⟨A|)^{⊗2}`. Eigenvalues always come back in ascending order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Matrix = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

/// Spectral decomposition `M = V diag(values) V†`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl HermitianEigen {
    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Max-entry residual `‖M − VΛV†‖_max`.
    pub fn reconstruction_residual(&self, m: &Matrix) -> f64 {
        let lambda = Matrix::from_diagonal(&Vector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        let rebuilt = &self.vectors * lambda * self.vectors.adjoint();
        max_abs_diff(m, &rebuilt)
    }
}

pub fn hermitian_part(m: &Matrix) -> Matrix {
    (m + m.adjoint()).scale(0.5)
}

fn to_faer(m: &Matrix) -> faer::Mat<Complex64> {
    let h = hermitian_part(m);
    faer::Mat::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)])
}

/// Fixed Haar unitary used to break up structure the solver cannot handle.
fn scrambler(n: usize) -> faer::Mat<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let q = crate::twirl::haar_unitary(n, &mut rng);
    faer::Mat::from_fn(n, n, |i, j| q[(i, j)])
}

fn check_square(m: &Matrix) {
    assert_eq!(m.nrows(), m.ncols(), "Hermitian eigensolve of a non-square matrix");
}

fn sorted(raw: Vec<f64>) -> (Vec<usize>, Vec<f64>) {
    assert!(raw.iter().all(|v| v.is_finite()), "non-finite eigenvalue");
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
    let values = order.iter().map(|&i| raw[i]).collect();
    (order, values)
}

pub fn eigh(m: &Matrix) -> HermitianEigen {
    check_square(m);
    let n = m.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        };
    }
    let h = to_faer(m);
    // highly degenerate structured inputs can stall the solver; a unitary
    // similarity leaves the spectrum alone and removes the structure
    let (raw, u) = match h.self_adjoint_eigen(faer::Side::Lower) {
        Ok(e) => ((0..n).map(|i| e.S()[i].re).collect::<Vec<_>>(), e.U().to_owned()),
        Err(_) => {
            let q = scrambler(n);
            let e = (&q * &h * q.adjoint())
                .self_adjoint_eigen(faer::Side::Lower)
                .expect("Hermitian eigensolver did not converge");
            ((0..n).map(|i| e.S()[i].re).collect(), q.adjoint() * e.U())
        }
    };
    let (order, values) = sorted(raw);
    let vectors = Matrix::from_fn(n, n, |r, c| u[(r, order[c])]);
    HermitianEigen { values, vectors }
}

pub fn eigvalsh(m: &Matrix) -> Vec<f64> {
    check_square(m);
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let h = to_faer(m);
    let raw = h.self_adjoint_eigenvalues(faer::Side::Lower).or_else(|_| {
        let q = scrambler(n);
        (&q * &h * q.adjoint()).self_adjoint_eigenvalues(faer::Side::Lower)
    });
    sorted(raw.expect("Hermitian eigensolver did not converge")).1
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |M − M†|` over entries.
pub fn hermiticity_defect(m: &Matrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn trace(m: &Matrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Projector `|v⟩⟨v|`.
pub fn outer(v: &Vector) -> Matrix {
    v * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_sorted_and_reconstruct() {
        let m = Matrix::from_fn(5, 5, |i, j| {
            Complex64::new((i * 3 + j) as f64 % 4.0, i as f64 - j as f64)
        });
        let h = hermitian_part(&m);
        let eig = eigh(&h);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(eig.reconstruction_residual(&h) < 1e-12);
        let vals = eigvalsh(&h);
        for (a, b) in vals.iter().zip(&eig.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn defect_of_non_hermitian() {
        let mut m = Matrix::identity(2, 2);
        m[(0, 1)] = Complex64::new(0.5, 0.0);
        assert!((hermiticity_defect(&m) - 0.5).abs() < 1e-15);
    }
}
