use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qthermo::models::{random_density, random_hermitian, random_model, random_unitary};
use qthermo::otm::{
    build_guessed_ensemble, exp_average_delta_e, heat_identity_residual, max_guessed_work_gap,
    theorem1_residual, theorem2_residual,
};
use qthermo::qcore::{
    apply_channel, eig_hermitian, partial_trace_bath, propagator, tensor, Operator,
};
use qthermo::thermo::{gibbs, relative_entropy, von_neumann_entropy};
use qthermo::tpm::{
    build_tpm_distribution, deviation_inequalities, exact_work_expectation,
    standard_jarzynski_average,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_is_adjoint_to_tensoring(seed in any::<u64>(), ds in 1usize..4, db in 1usize..4) {
        let mut r = rng(seed);
        let a = random_hermitian::<f64>(&mut r, &[ds], 1.0);
        let o = random_hermitian::<f64>(&mut r, &[ds, db], 1.0);
        let lhs = tensor(&a, &Operator::identity(&[db])).matmul(&o).unwrap().trace();
        let rhs = a.matmul(&partial_trace_bath(&o, 1).unwrap()).unwrap().trace();
        prop_assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn protocols_are_unitary(seed in any::<u64>(), segs in 1usize..4) {
        let m = random_model::<f64>(seed, 3, 2, segs, true).unwrap();
        let u = propagator(m.protocol()).unwrap();
        let uu = u.adjoint().matmul(&u).unwrap();
        prop_assert!(uu.max_abs_diff(&Operator::identity(&[3, 2])) <= 1e-9);
    }

    #[test]
    fn channels_preserve_trace(seed in any::<u64>(), ds in 1usize..4, db in 1usize..4) {
        let mut r = rng(seed);
        let u = random_unitary::<f64>(&mut r, &[ds, db]);
        let bath = random_density::<f64>(&mut r, &[db]);
        let rho = random_density::<f64>(&mut r, &[ds]);
        let out = apply_channel(&u, &bath, &rho).unwrap();
        prop_assert!((out.as_operator().trace().re - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn eigensolver_is_bit_stable(seed in any::<u64>(), d in 1usize..6) {
        let h = random_hermitian::<f64>(&mut rng(seed), &[d], 2.0);
        let a = eig_hermitian(&h).unwrap();
        let b = eig_hermitian(&h).unwrap();
        prop_assert_eq!(a.eigenvalues(), b.eigenvalues());
        prop_assert_eq!(a.eigenvectors(), b.eigenvectors());
    }

    #[test]
    fn klein_inequality(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let rho = random_density::<f64>(&mut r, &[d]);
        let sigma = random_density::<f64>(&mut r, &[d]);
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-12);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn relative_entropy_decreases_under_partial_trace(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_density::<f64>(&mut r, &[2, 3]);
        let s1 = random_density::<f64>(&mut r, &[2]);
        let s2 = random_density::<f64>(&mut r, &[3]);
        let full = relative_entropy(&rho, &s1.tensor(&s2)).unwrap();
        let reduced = relative_entropy(&rho.partial_trace_bath(1).unwrap(), &s1).unwrap();
        prop_assert!(full >= reduced - 1e-9);
    }

    #[test]
    fn gibbs_state_thermodynamics(seed in any::<u64>(), beta in 0.05f64..20.0, d in 1usize..6) {
        let h = random_hermitian::<f64>(&mut rng(seed), &[d], 3.0);
        let g = gibbs(&h, beta).unwrap();
        let f = g.mean_energy() - g.entropy() / beta;
        prop_assert!((f - g.free_energy).abs() <= 1e-9 * g.free_energy.abs().max(1.0));
        let s = von_neumann_entropy(&g.state).unwrap();
        prop_assert!((s - g.entropy()).abs() <= 1e-9);
    }

    #[test]
    fn partition_function_is_multiplicative(seed in any::<u64>(), beta in 0.1f64..5.0) {
        let mut r = rng(seed);
        let hs = random_hermitian::<f64>(&mut r, &[2], 1.0);
        let hb = random_hermitian::<f64>(&mut r, &[3], 1.0);
        let h = &tensor(&hs, &Operator::identity(&[3])) + &tensor(&Operator::identity(&[2]), &hb);
        let z = gibbs(&h, beta).unwrap().ln_partition_function;
        let zs = gibbs(&hs, beta).unwrap().ln_partition_function;
        let zb = gibbs(&hb, beta).unwrap().ln_partition_function;
        prop_assert!((z - zs - zb).exp_m1().abs() <= 1e-10);
    }

    #[test]
    fn guessed_identities_hold(seed in any::<u64>(), ds in 2usize..4, db in 2usize..5, segs in 1usize..4) {
        let m = random_model::<f64>(seed, ds, db, segs, true).unwrap();
        let g = build_guessed_ensemble(&m).unwrap();
        prop_assert!(theorem1_residual(&g).unwrap().residual <= 1e-8);
        prop_assert!(heat_identity_residual(&g) <= 1e-8);
        let gap = max_guessed_work_gap(&g).unwrap();
        prop_assert!(gap.gap_full >= -1e-9 && gap.gap_reduced >= -1e-9);
        prop_assert!(g.relative_entropy_full >= g.relative_entropy_reduced - 1e-9);
        let z = exp_average_delta_e(&g.outcomes, g.beta_s) * g.ln_z_initial.exp();
        prop_assert!((z / g.z_tilde - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn two_temperature_identity(seed in any::<u64>(), bs in 0.2f64..4.0, bb in 0.2f64..4.0) {
        let m = random_model::<f64>(seed, 2, 3, 2, true).unwrap().with_betas(bs, bb).unwrap();
        let r = theorem2_residual(&build_guessed_ensemble(&m).unwrap());
        prop_assert!(r.residual <= 1e-8);
        prop_assert!(r.work_bound_gap >= -1e-9);
    }

    #[test]
    fn tpm_consistency(seed in any::<u64>(), ds in 2usize..4, db in 2usize..4) {
        let m = random_model::<f64>(seed, ds, db, 2, true).unwrap();
        let g = build_guessed_ensemble(&m).unwrap();
        let d = build_tpm_distribution(&m).unwrap();
        prop_assert!((d.total_probability() - 1.0).abs() <= 1e-9);
        let jar = standard_jarzynski_average(&d, m.beta_s());
        prop_assert!((jar / (-m.beta_s() * g.delta_f).exp() - 1.0).abs() <= 1e-8);
        prop_assert!((d.mean_work() - exact_work_expectation(&m).unwrap()).abs() <= 1e-9);
        prop_assert!(deviation_inequalities(&m, &g).unwrap().product >= 1.0 - 1e-9);
    }

    #[test]
    fn random_models_are_deterministic(seed in any::<u64>()) {
        let a = random_model::<f64>(seed, 2, 3, 3, true).unwrap();
        let b = random_model::<f64>(seed, 2, 3, 3, true).unwrap();
        for (x, y) in a.protocol().segments().iter().zip(b.protocol().segments()) {
            prop_assert_eq!(x.duration.to_bits(), y.duration.to_bits());
            prop_assert_eq!(x.generator.matrix(), y.generator.matrix());
        }
        prop_assert_eq!(a.h_b().matrix(), b.h_b().matrix());
    }
}
