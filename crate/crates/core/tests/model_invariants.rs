use entcert_core::distill::{hamming_filter_protocol, kept, reduced_w, KEPT_BRANCH};
use entcert_core::linalg::{eigh, eigvalsh};
use entcert_core::measures::{
    binary_entropy, candidate_upper_bound, cut_entropy, measure_profile, ppt_or_distill_oracle,
    tripartite_lower_bound,
};
use entcert_core::mregs::{infeasibility_wepr_ghz, rates_ghz_epr_w, RateResult};
use entcert_core::states::{candidate_closest, make_antisym, make_dicke, tensor_power};
use entcert_core::twirl::{haar_unitary, operator_power, TwirlCache};
use entcert_core::{BoundInterval, Cut, MultiState, StateKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const WITH_CANDIDATES: [StateKind; 3] = [StateKind::Ghz, StateKind::W, StateKind::Antisym];

#[test]
fn constructors_and_names_round_trip() {
    for name in ["ghz", "w", "epr-ab", "epr-ac", "epr-bc", "antisym", "m-product", "dicke-0", "dicke-3"] {
        let kind: StateKind = name.parse().unwrap();
        assert_eq!(kind.to_string(), name);
        let psi = kind.vector().unwrap();
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
    }
    assert!("dicke-4".parse::<StateKind>().is_err());
    assert!(make_dicke(4).is_err());
}

#[test]
fn candidates_are_ppt_density_operators() {
    for kind in WITH_CANDIDATES {
        let c = candidate_closest(kind).unwrap();
        assert!((c.trace() - 1.0).abs() < 1e-12);
        assert!(eigvalsh(c.matrix())[0] >= -1e-12);
        for cut in Cut::tripartite() {
            assert!(c.min_pt_eigenvalue(&cut).unwrap() >= -1e-9, "{kind} {cut}");
        }
    }
}

#[test]
fn antisym_invariant_under_collective_unitaries() {
    let a = make_antisym();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let w = operator_power(&haar_unitary(3, &mut rng), 3);
        let moved = &w * a.amplitudes();
        let amp = a.amplitudes().dotc(&moved);
        assert!((amp.norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn two_copy_antisym_projector_is_rank_one() {
    let a2 = tensor_power(&make_antisym(), 2, true).unwrap();
    assert_eq!(a2.dims(), &[9, 9, 9]);
    let rho = a2.density();
    let e = eigh(rho.matrix());
    assert!(e.reconstruction_residual(rho.matrix()) < 1e-9);
    let (top, rest) = e.values.split_last().unwrap();
    assert!((top - 1.0).abs() < 1e-12);
    let worst = rest.iter().fold(0f64, |m, v| m.max(v.abs()));
    assert!(worst < 1e-12, "{worst:e}");
}

#[test]
fn regrouped_power_preserves_norm_and_overlap() {
    let w = StateKind::W.vector().unwrap();
    let g = StateKind::Ghz.vector().unwrap();
    let (w2, g2) = (tensor_power(&w, 2, true).unwrap(), tensor_power(&g, 2, true).unwrap());
    assert!((w2.amplitudes().norm() - 1.0).abs() < 1e-12);
    let single = w.inner(&g).unwrap().norm_sqr();
    assert!((w2.inner(&g2).unwrap().norm_sqr() - single * single).abs() < 1e-12);
    // each regrouped party carries both copies: cut entropy doubles
    let s = cut_entropy(&w, &Cut::tripartite()[0]).unwrap();
    assert!((cut_entropy(&w2, &Cut::tripartite()[0]).unwrap() - 2.0 * s).abs() < 1e-9);
}

#[test]
fn cut_entropy_symmetric_under_side_swap() {
    for kind in [StateKind::Ghz, StateKind::W, StateKind::Antisym, StateKind::Dicke(2)] {
        let psi = kind.vector().unwrap();
        for cut in Cut::tripartite() {
            let (a, b) = (cut_entropy(&psi, &cut).unwrap(), cut_entropy(&psi, &cut.swapped()).unwrap());
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn binary_entropy_matches_spectrum() {
    for i in 1..=9 {
        let x = i as f64 / 10.0;
        let s = MultiState::diagonal(&[x, 1.0 - x], vec![2]).unwrap().entropy();
        assert!((binary_entropy(x) - s).abs() < 1e-12);
    }
}

#[test]
fn sandwich_consistency() {
    for kind in [StateKind::Ghz, StateKind::W] {
        let sigma = kind.vector().unwrap().density();
        let lo = tripartite_lower_bound(&sigma, ppt_or_distill_oracle).unwrap();
        let hi = candidate_upper_bound(&sigma, &candidate_closest(kind).unwrap()).unwrap();
        assert!(hi >= lo - 1e-9, "{kind}: {lo} > {hi}");
    }
    let w = measure_profile(StateKind::W, &TwirlCache::in_memory()).unwrap();
    assert!(w.e_abc.lo > 1.0);
}

#[test]
fn reconstruction_on_claim_matrices() {
    let mut mats: Vec<MultiState> = WITH_CANDIDATES.iter().map(|&k| candidate_closest(k).unwrap()).collect();
    mats.push(reduced_w());
    mats.push(StateKind::W.vector().unwrap().density());
    for m in &mats {
        assert!(eigh(m.matrix()).reconstruction_residual(m.matrix()) < 1e-9);
        for cut in Cut::all(m.parties()) {
            let pt = m.partial_transpose(&cut).unwrap();
            assert!(eigh(&pt).reconstruction_residual(&pt) < 1e-9);
        }
    }
}

#[test]
fn filter_protocol_invariants() {
    let outcomes = hamming_filter_protocol(2).unwrap();
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    assert!((total - 1.0).abs() < 1e-12);
    for o in &outcomes {
        let s = &o.post_state;
        assert!((s.trace() - 1.0).abs() < 1e-12);
        assert!(eigvalsh(s.matrix())[0] >= -1e-12);
    }
    let k = kept(&outcomes).unwrap();
    assert_eq!(k.branch, KEPT_BRANCH);
    let cut = Cut::isolate(0, 2).unwrap();
    let s = k.post_state.partial_trace(cut.left()).unwrap().entropy();
    assert!((s - 1.0).abs() < 1e-12);
    assert!((k.ebits_certified - 1.0).abs() < 1e-12);
    assert!(hamming_filter_protocol(3).is_err());
}

#[test]
fn rates_monotone_under_enlargement() {
    let base = BoundInterval::new(1.03, 1.16, "a", "b").unwrap();
    let (n0, g0) = match rates_ghz_epr_w(&base) {
        RateResult::Feasible { n_over_nw, nghz_over_nw } => (n_over_nw, nghz_over_nw),
        other => panic!("{other:?}"),
    };
    for (dl, dh) in [(0.001, 0.0), (0.0, 0.005), (0.01, 0.01)] {
        let wide = BoundInterval::new(base.lo - dl, base.hi + dh, "a", "b").unwrap();
        let (n_w, g_w) = (wide.affine(1.0, -binary_entropy(1.0 / 3.0)), wide.affine(-2.0, 3.0 * binary_entropy(1.0 / 3.0)));
        assert!(n_w.lo <= n0.lo && n_w.hi >= n0.hi);
        assert!(g_w.lo <= g0.lo && g_w.hi >= g0.hi);
        if let RateResult::Feasible { n_over_nw, nghz_over_nw } = rates_ghz_epr_w(&wide) {
            assert!(n_over_nw.lo <= n0.lo && n_over_nw.hi >= n0.hi);
            assert!(nghz_over_nw.lo <= g0.lo && nghz_over_nw.hi >= g0.hi);
        }
    }
}

#[test]
fn infeasible_for_every_positive_bound() {
    for i in 1..=100 {
        let e = i as f64 / 100.0;
        let r = infeasibility_wepr_ghz(e).unwrap();
        assert!(r.certificate().unwrap().coefficient < 0.0, "e = {e}");
    }
}

#[test]
fn lower_condition_holds_for_built_profiles() {
    let cache = TwirlCache::in_memory();
    for kind in WITH_CANDIDATES {
        let p = measure_profile(kind, &cache).unwrap();
        assert!(p.max_cut() <= p.e_abc.lo + 1e-9, "{kind}");
    }
}
