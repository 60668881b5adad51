//! Randomized invariants over the norm, counting, and matrix layers.

use proptest::prelude::*;

use weylab::counting::CountingFunction;
use weylab::matrix::{jacobi_eigen, rng_from_seed, SymmetricMatrix};
use weylab::rv::{karamata_integral, RegVarFunction};
use weylab::spectra::{
    check_fan, check_weyl_modulus, lorentz_norm_g_big, quasi_norm_g, read_csv, write_csv,
    SpectralPart, SpectralSequence,
};

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

fn singular_strategy(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1e3, 4..max_len).prop_map(sorted_desc)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_are_absolutely_homogeneous(vals in singular_strategy(200), c in 0.0f64..50.0) {
        let g = RegVarFunction::power_log(-1.0, 1.0);
        let gi = karamata_integral(&g);
        let s = SpectralSequence::singular(vals.clone()).unwrap();
        let scaled = SpectralSequence::singular(vals.iter().map(|v| c * v).collect()).unwrap();
        let q0 = quasi_norm_g(&s, &g).unwrap();
        let q1 = quasi_norm_g(&scaled, &g).unwrap();
        prop_assert!((q1 - c * q0).abs() <= 1e-9 * (1.0 + c * q0).abs());
        let l0 = lorentz_norm_g_big(&s, &gi).unwrap();
        let l1 = lorentz_norm_g_big(&scaled, &gi).unwrap();
        prop_assert!((l1 - c * l0).abs() <= 1e-9 * (1.0 + c * l0).abs());
    }

    #[test]
    fn lorentz_norm_is_dominated(vals in singular_strategy(200)) {
        // continuous inclusion with C = sup_N G(N)^-1 sum_{j<=N} g(j)
        let g = RegVarFunction::power_log(-1.0, 0.0);
        let gi = karamata_integral(&g);
        let s = SpectralSequence::singular(vals.clone()).unwrap();
        let mut c_const: f64 = 0.0;
        let mut acc = g.eval(0.0);
        for n in 1..=vals.len() {
            acc += g.eval(n as f64);
            c_const = c_const.max(acc / gi.eval(n as f64).unwrap());
        }
        let lhs = lorentz_norm_g_big(&s, &gi).unwrap();
        let rhs = c_const * quasi_norm_g(&s, &g).unwrap();
        prop_assert!(lhs <= rhs + 1e-9 * (1.0 + rhs));
    }

    #[test]
    fn quasi_norm_reverse_inclusion(vals in singular_strategy(200)) {
        // for -1 < rho < 0: ||.||_g <= C' ||.||_G with C' = sup G(N)/(N g(N))
        let g = RegVarFunction::power_log(-0.5, 0.0);
        let gi = karamata_integral(&g);
        let s = SpectralSequence::singular(vals.clone()).unwrap();
        let mut c_prime: f64 = 0.0;
        for n in 1..=vals.len() {
            c_prime = c_prime.max(gi.eval(n as f64).unwrap() / (n as f64 * g.eval(n as f64)));
        }
        let lhs = quasi_norm_g(&s, &g).unwrap();
        let rhs = c_prime * lorentz_norm_g_big(&s, &gi).unwrap();
        prop_assert!(lhs <= rhs + 1e-9 * (1.0 + rhs));
    }

    #[test]
    fn singular_csv_round_trip_is_bit_exact(vals in singular_strategy(100)) {
        let s = SpectralSequence::singular(vals.clone()).unwrap();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let back = read_csv(&buf[..]).unwrap();
        prop_assert_eq!(back.singular_values().unwrap(), &vals[..]);
    }

    #[test]
    fn signed_csv_round_trip_is_bit_exact(
        p in prop::collection::vec(0.0f64..1e6, 1..60).prop_map(sorted_desc),
        m in prop::collection::vec(0.0f64..1e6, 0..60).prop_map(sorted_desc),
    ) {
        let s = SpectralSequence::eigen_signed(p.clone(), m.clone()).unwrap();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let back = read_csv(&buf[..]).unwrap();
        let (bp, bm) = back.signed_parts().unwrap();
        prop_assert_eq!(bp, &p[..]);
        prop_assert_eq!(bm, &m[..]);
    }

    #[test]
    fn merged_stream_is_modulus_sorted(
        p in prop::collection::vec(0.0f64..1e3, 1..50).prop_map(sorted_desc),
        m in prop::collection::vec(0.0f64..1e3, 1..50).prop_map(sorted_desc),
    ) {
        let s = SpectralSequence::eigen_signed(p.clone(), m.clone()).unwrap();
        let merged = s.merged_signed();
        prop_assert_eq!(merged.len(), p.len() + m.len());
        for w in merged.windows(2) {
            prop_assert!(w[1].abs() <= w[0].abs() + 1e-12);
        }
        // the full merged sum telescopes to sum(plus) - sum(minus)
        let direct: f64 = p.iter().sum::<f64>() - m.iter().sum::<f64>();
        let total = s.partial_sum(merged.len()).unwrap().re;
        prop_assert!((total - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn counting_round_trip_and_monotonicity(vals in singular_strategy(150)) {
        // strictly positive, strictly decreasing prefixes round-trip exactly
        let mut strict: Vec<f64> = Vec::new();
        for (i, &v) in vals.iter().enumerate() {
            let v = v + (vals.len() - i) as f64 * 1e-6 + 1e-6;
            if strict.last().map(|&p| v < p).unwrap_or(true) {
                strict.push(v);
            }
        }
        prop_assume!(strict.len() >= 2);
        let s = SpectralSequence::singular(strict.clone()).unwrap();
        let n = CountingFunction::from_sequence(&s, SpectralPart::Singular).unwrap();
        let back = weylab::counting::sequence_from_counting(&n, strict.len()).unwrap();
        prop_assert_eq!(back.singular_values().unwrap(), &strict[..]);

        let mut prev = -1.0;
        let mut lambda = strict[0];
        while lambda >= strict[strict.len() - 1] {
            let v = n.eval(lambda).unwrap();
            prop_assert!(v >= prev);
            prev = v;
            lambda *= 0.8;
        }
    }

    #[test]
    fn matrix_binary_round_trip(seed in any::<u64>(), n in 2usize..12) {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let a = SymmetricMatrix::from_fn(n, |_, _| rng.gen_range(-5.0..5.0)).unwrap();
        let mut buf = Vec::new();
        a.write_binary(&mut buf).unwrap();
        let b = SymmetricMatrix::read_binary(&mut &buf[..]).unwrap();
        prop_assert_eq!(a.data(), b.data());
    }

    #[test]
    fn fan_and_weyl_inequalities_on_random_matrices(seed in any::<u64>(), n in 2usize..10) {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let a = SymmetricMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0)).unwrap();
        let b = SymmetricMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0)).unwrap();
        let sum = a.add(&b).unwrap();
        let da = jacobi_eigen(&a).unwrap();
        let db = jacobi_eigen(&b).unwrap();
        let ds = jacobi_eigen(&sum).unwrap();
        let slack = 1e-10 * (a.frobenius_norm() + b.frobenius_norm());
        let fan = check_fan(&da.singular, &db.singular, &ds.singular, slack).unwrap();
        prop_assert!(fan.ok(), "{:?}", fan);
        let weyl = check_weyl_modulus(&ds.signed, &ds.singular, slack).unwrap();
        prop_assert!(weyl.ok(), "{:?}", weyl);
    }

    #[test]
    fn jacobi_reconstructs_its_input(seed in any::<u64>(), n in 2usize..16) {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let a = SymmetricMatrix::from_fn(n, |_, _| rng.gen_range(-3.0..3.0)).unwrap();
        let d = jacobi_eigen(&a).unwrap();
        let resid = weylab::matrix::reconstruction_residual(&a, &d);
        prop_assert!(resid <= 1e-9 * a.frobenius_norm().max(1e-300));
        // eigenvalue sum equals the trace
        let sum: f64 = d.eigenvalues.iter().sum();
        prop_assert!((sum - a.trace()).abs() <= 1e-9 * (1.0 + a.trace().abs()));
    }
}
