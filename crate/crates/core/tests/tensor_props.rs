use entcert_core::linalg::{eigh, hermiticity_defect, max_abs_diff, Matrix};
use entcert_core::tensor::{partial_transpose_matrix, relative_entropy, tensor_product, von_neumann_entropy};
use entcert_core::{Cut, MultiState, PureVector};
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;

fn amplitudes(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
}

fn pure(dims: Vec<usize>, amps: &[(f64, f64)]) -> Option<PureVector> {
    let v = DVector::from_iterator(amps.len(), amps.iter().map(|&(re, im)| Complex64::new(re, im)));
    if v.norm() < 1e-3 {
        return None;
    }
    PureVector::normalized(v, dims).ok()
}

/// `G G† / Tr` for a square `G` built from `amps`; full rank almost surely.
fn mixed(dims: Vec<usize>, amps: &[(f64, f64)]) -> Option<MultiState> {
    let n: usize = dims.iter().product();
    let g = Matrix::from_fn(n, n, |i, j| {
        let (re, im) = amps[i * n + j];
        Complex64::new(re, im)
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    if tr < 1e-3 {
        return None;
    }
    MultiState::new(m.unscale(tr), dims).ok()
}

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 1..=2)
}

fn mixed_strategy() -> impl Strategy<Value = MultiState> {
    dims_strategy()
        .prop_flat_map(|dims| {
            let n: usize = dims.iter().product();
            (Just(dims), amplitudes(n * n))
        })
        .prop_filter_map("degenerate sample", |(dims, a)| mixed(dims, &a))
}

fn same_dims_pair() -> impl Strategy<Value = (MultiState, MultiState)> {
    dims_strategy()
        .prop_flat_map(|dims| {
            let n: usize = dims.iter().product();
            (Just(dims), amplitudes(n * n), amplitudes(n * n))
        })
        .prop_filter_map("degenerate sample", |(dims, a, b)| {
            Some((mixed(dims.clone(), &a)?, mixed(dims, &b)?))
        })
}

fn tripartite_strategy() -> impl Strategy<Value = PureVector> {
    prop::collection::vec(1usize..=3, 3)
        .prop_flat_map(|dims| {
            let n: usize = dims.iter().product();
            (Just(dims), amplitudes(n))
        })
        .prop_filter_map("degenerate sample", |(dims, a)| pure(dims, &a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_is_additive(a in mixed_strategy(), b in mixed_strategy()) {
        let ab = tensor_product(&a, &b);
        let lhs = von_neumann_entropy(&ab);
        prop_assert!((lhs - a.entropy() - b.entropy()).abs() < 1e-9);
    }

    #[test]
    fn schmidt_symmetry(psi in tripartite_strategy()) {
        for cut in Cut::all(3) {
            let l = psi.reduced(cut.left()).unwrap().entropy();
            let r = psi.reduced(cut.right()).unwrap().entropy();
            prop_assert!((l - r).abs() < 1e-9, "cut {cut}: {l} vs {r}");
        }
    }

    #[test]
    fn partial_transpose_invariants(rho in mixed_strategy()) {
        let parties = rho.parties();
        for cut in Cut::all(parties) {
            let pt = rho.partial_transpose(&cut).unwrap();
            prop_assert!((pt.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(pt.trace().im.abs() < 1e-12);
            prop_assert!(hermiticity_defect(&pt) < 1e-12);
            let twice = partial_transpose_matrix(&pt, rho.dims(), &cut).unwrap();
            prop_assert!(max_abs_diff(&twice, rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn relative_entropy_nonnegative((a, b) in same_dims_pair()) {
        let s = relative_entropy(&a, &b).unwrap();
        prop_assert!(s >= 0.0);
        if max_abs_diff(a.matrix(), b.matrix()) >= 1e-9 {
            prop_assert!(s > 0.0);
        }
        prop_assert!(relative_entropy(&a, &a).unwrap() < 1e-9);
    }

    #[test]
    fn eigendecomposition_reconstructs(rho in mixed_strategy()) {
        let e = eigh(rho.matrix());
        prop_assert!(e.reconstruction_residual(rho.matrix()) < 1e-9);
    }
}
