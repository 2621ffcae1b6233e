//! Closed-form level-1 expectation against the statevector simulator for
//! every registered code, the zero received word and every single flip.

use qaoa_decoding::analytic::derive_level1;
use qaoa_decoding::code::registry;
use qaoa_decoding::cost::CostHamiltonian;
use qaoa_decoding::experiments::{full_domain_axes, max_sweep_discrepancy, sweep};
use qaoa_decoding::gf2::BitVector;
use qaoa_decoding::qaoa::{grid_sweep_with, optimize_angles, OptimizerConfig};

#[test]
fn all_codes_all_single_flips() {
    let (gammas, betas) = full_domain_axes(33, 33);
    for name in registry::names() {
        let code = registry::by_name(name).unwrap();
        let n = code.n();
        let mut words = vec![BitVector::zeros(n)];
        words.extend((0..n).map(|i| BitVector::from_mask(1 << i, n)));
        for y in words {
            let points = sweep(&code, &y, &gammas, &betas).unwrap();
            let worst = max_sweep_discrepancy(&points);
            assert!(worst < 1e-9, "{name} y={y}: {worst:e}");
        }
    }
}

#[test]
fn landscape_symmetry() {
    // F(gamma, beta) = F(2pi - gamma, pi - beta) on a grid that contains
    // both points
    let (gammas, betas) = full_domain_axes(17, 17);
    for v in registry::HAMMING_VARIANTS.iter() {
        let code = v.code();
        let h = CostHamiltonian::build(&code, &BitVector::zeros(7)).unwrap();
        let s = grid_sweep_with(&h, &gammas, &betas).unwrap();
        for i in 0..17 {
            for j in 0..17 {
                assert!((s.values[i][j] - s.values[16 - i][16 - j]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn optimiser_agrees_with_closed_form_maximum() {
    let config = OptimizerConfig::default();
    for v in registry::HAMMING_VARIANTS.iter() {
        let code = v.code();
        let y = BitVector::zeros(7);
        let analytic =
            qaoa_decoding::analytic::maximize(&derive_level1(&code, &y).unwrap().polynomial);
        let numeric = optimize_angles(&code, &y, 1, &config).unwrap();
        assert!(
            (analytic.f_star - numeric.f_star).abs() < 1e-6,
            "{}: {} vs {}",
            v.name,
            analytic.f_star,
            numeric.f_star
        );
    }
}
