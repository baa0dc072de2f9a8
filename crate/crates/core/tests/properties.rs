use proptest::prelude::*;

use redswap::measures::{concurrence, dense_coding_capacity_pure};
use redswap::random::Sampler;
use redswap::swap::{chain_swap_simultaneous, swap_once, MeasurementBasis};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outcome_probabilities_sum_to_one(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = Sampler::new(seed);
        let a = rng.state::<f64>(d, d);
        let b = rng.state::<f64>(d, d);
        let basis = if d == 2 {
            let (n, m) = rng.basis_params();
            MeasurementBasis::general(n, m).unwrap()
        } else {
            MeasurementBasis::bell(d).unwrap()
        };
        let total: f64 = swap_once(&a, &b, &basis).unwrap().iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concurrence_and_capacity_stay_in_range(seed in any::<u64>(), d in 2usize..6) {
        let mut rng = Sampler::new(seed);
        let s = rng.state::<f64>(d, d);
        let c = concurrence(&s);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c));
        let cap = dense_coding_capacity_pure(&s).unwrap();
        let log_d = (d as f64).log2();
        prop_assert!(cap >= log_d - 1e-12 && cap <= 2.0 * log_d + 1e-12);
    }

    #[test]
    fn local_unitaries_leave_swap_statistics_unchanged(seed in any::<u64>()) {
        let mut rng = Sampler::new(seed);
        let a = rng.state::<f64>(2, 2);
        let b = rng.state::<f64>(2, 2);
        let (u, v) = (rng.unitary(2), rng.unitary(2));
        let basis = MeasurementBasis::bell(2).unwrap();
        let before = swap_once(&a, &b, &basis).unwrap();
        // unitaries on the outer nodes only
        let a2 = a.apply_local(&u, &redswap::linalg::CMatrix::identity(2)).unwrap();
        let b2 = b.apply_local(&redswap::linalg::CMatrix::identity(2), &v).unwrap();
        let after = swap_once(&a2, &b2, &basis).unwrap();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x.probability - y.probability).abs() < 1e-12);
            if let (Some(s), Some(t)) = (&x.state, &y.state) {
                prop_assert!((concurrence(s) - concurrence(t)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn single_precision_tracks_double(seed in any::<u64>()) {
        let mut wide = Sampler::new(seed);
        let mut narrow = Sampler::new(seed);
        let states64 = [wide.state::<f64>(2, 2), wide.state::<f64>(2, 2), wide.state::<f64>(2, 2)];
        let states32 = [narrow.state::<f32>(2, 2), narrow.state::<f32>(2, 2), narrow.state::<f32>(2, 2)];
        let p64 = [(0.5, 0.8), (1.0, 0.3)];
        let p32 = [(0.5f32, 0.8f32), (1.0, 0.3)];
        let o64 = chain_swap_simultaneous(&states64, &p64).unwrap();
        let o32 = chain_swap_simultaneous(&states32, &p32).unwrap();
        let total: f32 = o32.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-5);
        for (x, y) in o64.iter().zip(&o32) {
            prop_assert!((x.probability - f64::from(y.probability)).abs() < 1e-4);
        }
    }
}
