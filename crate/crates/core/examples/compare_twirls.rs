use entcert_core::states::{make_antisym, tensor_power};
use entcert_core::tensor::relative_entropy;
use entcert_core::twirl::{twirl_m_product_with, two_copy_spec, TwirlCache, TwirlSpec};

fn main() {
    let cache = TwirlCache::in_memory();
    let a2 = tensor_power(&make_antisym(), 2, true).unwrap().density();
    for (name, spec) in [("joint U^6", TwirlSpec::new(3, 6).unwrap()), ("U^3 x V^3", two_copy_spec())] {
        let t = twirl_m_product_with(&cache, &spec).unwrap();
        let s = relative_entropy(&a2, &t.rho).unwrap();
        println!("{name}: F={} resid={} S={} log27={}", t.fidelity_f, t.eigen_residual, s, 27f64.log2());
    }
}
