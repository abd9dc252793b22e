use proptest::prelude::*;
use tensnorm_core::nuclear::{nuclear_upper, AltOptions};
use tensnorm_core::random::{random_state, stream_rng};
use tensnorm_core::spectral::{spectral_lower, SpectralOptions};
use tensnorm_core::sym::{project_symmetric, sym_from_dense};
use tensnorm_core::{Field, Shape, Tensor, C64};

fn field_of(complex: bool) -> Field {
    if complex {
        Field::Complex
    } else {
        Field::Real
    }
}

fn tensor_strategy(max_order: usize, max_dim: usize) -> impl Strategy<Value = Tensor> {
    (prop::collection::vec(1..=max_dim, 1..=max_order), any::<bool>(), any::<u64>()).prop_map(|(dims, complex, seed)| {
        let shape = Shape::new(dims).unwrap();
        random_state(&shape, field_of(complex), &mut stream_rng(seed, 0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn realify_is_an_isometry(a in tensor_strategy(4, 3), seed in any::<u64>()) {
        let b = random_state(a.shape(), a.field(), &mut stream_rng(seed, 1));
        let (ra, rb) = (a.realify().unwrap(), b.realify().unwrap());
        prop_assert!((ra.hs_norm() - a.hs_norm()).abs() < 1e-14);
        let re = a.inner(&b).unwrap().re;
        prop_assert!((ra.inner(&rb).unwrap().re - re).abs() < 1e-14);
    }

    #[test]
    fn unfold_then_fold_is_identity(a in tensor_strategy(4, 3), k in 0usize..4) {
        let mode = k % a.order();
        let m = a.unfold(mode).unwrap();
        prop_assert_eq!(m.nrows(), a.dims()[mode]);
        let back = Tensor::fold(&m, mode, a.shape().clone(), a.field()).unwrap();
        prop_assert_eq!(&back, &a);
    }

    #[test]
    fn permutation_round_trip(a in tensor_strategy(4, 3), seed in any::<u64>()) {
        let d = a.order();
        let mut perm: Vec<usize> = (0..d).collect();
        perm.rotate_left((seed as usize) % d);
        let mut inv = vec![0; d];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }
        let back = a.permute(&perm).unwrap().permute(&inv).unwrap();
        prop_assert_eq!(&back, &a);
    }

    #[test]
    fn symmetric_round_trip(complex in any::<bool>(), seed in any::<u64>(), d in 2usize..5) {
        let shape = Shape::new(vec![2; d]).unwrap();
        let t = random_state(&shape, field_of(complex), &mut stream_rng(seed, 0));
        let s = project_symmetric(&t).unwrap();
        let dense = s.densify();
        let again = sym_from_dense(&dense).unwrap();
        prop_assert!(again.densify().max_abs_diff(&dense).unwrap() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // residual, monotone history and weak duality on small random tensors
    #[test]
    fn nuclear_runs_are_sound(a in tensor_strategy(3, 3), seed in any::<u64>()) {
        let field = a.field();
        let opts = AltOptions { restarts: 2, seed, ..AltOptions::default() };
        let n = nuclear_upper(&a, field, &opts).unwrap();
        let res = n.decomposition.residual(&a).unwrap();
        prop_assert!(res <= 1e-7, "residual {}", res);
        prop_assert!((n.decomposition.bound() - n.value).abs() <= 1e-12 * n.value.max(1.0));
        for w in n.history.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12), "history rose: {:?}", w);
        }
        let s = spectral_lower(&a, field, &SpectralOptions { restarts: 5, seed, ..SpectralOptions::default() }).unwrap();
        let hs2 = a.hs_norm().powi(2);
        prop_assert!(n.value * s.value >= hs2 * (1.0 - 1e-9));
        prop_assert!(s.value <= a.hs_norm() * (1.0 + 1e-12));
        prop_assert!(n.value >= a.hs_norm() * (1.0 - 1e-12));
    }
}

#[test]
fn random_states_are_centered() {
    let shape = Shape::new(vec![2, 2]).unwrap();
    let samples = 10_000;
    let mut sum = C64::new(0.0, 0.0);
    let mut sq = 0.0;
    for i in 0..samples {
        let t = random_state(&shape, Field::Complex, &mut stream_rng(77, i));
        let z = t.entries()[0];
        sum += z;
        sq += z.norm_sqr();
    }
    let mean = sum / samples as f64;
    // each part has variance about sq/(2·samples)
    let sigma = (sq / samples as f64 / 2.0 / samples as f64).sqrt();
    assert!(mean.re.abs() < 5.0 * sigma && mean.im.abs() < 5.0 * sigma, "{mean} sigma {sigma}");
    assert!((sq / samples as f64 - 0.25).abs() < 0.02);
}
