use oabp::abp::{check_oblivious, evaluate, expand, restrict, stats};
use oabp::corpus::{random_oabp, RandomShape};
use oabp::generator::{build_f, eval_f, seed_len};
use oabp::normalize::{derivative_abp, obliviate};
use oabp::pit::{algorithm1, compose_test, random_probe, HitsetOptions};
use oabp::{Abp, Elem, Exec, Field, Permutation, DEFAULT_TERM_BUDGET as B};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn program(seed: u64, n: usize, r: usize) -> (Abp, Permutation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (1..=n).collect();
    use rand::seq::SliceRandom;
    order.shuffle(&mut rng);
    let pi = Permutation::from_order(&order).unwrap();
    let a = random_oabp(&Field::rational(), &pi, r, RandomShape::default(), &mut rng).unwrap();
    (a, pi)
}

fn point(f: &Field, xs: &[i64]) -> Vec<Elem> {
    xs.iter().map(|&x| f.from_i64(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluate_matches_expansion(seed in any::<u64>(), n in 1usize..6, r in 1usize..3,
                                  xs in prop::collection::vec(-5i64..6, 6)) {
        let (a, _) = program(seed, n, r);
        let f = a.field().clone();
        let x = point(&f, &xs[..n]);
        prop_assert_eq!(evaluate(&a, &x), expand(&a, B).unwrap().eval(&x));
    }

    #[test]
    fn obliviate_preserves_polynomial_and_reads(seed in any::<u64>(), n in 1usize..6, r in 1usize..3) {
        let (a, pi) = program(seed, n, r);
        let b = obliviate(&a, &pi).unwrap();
        prop_assert!(check_oblivious(&b).is_ok());
        prop_assert_eq!(expand(&b, B).unwrap(), expand(&a, B).unwrap());
        prop_assert_eq!(stats(&b).reads, stats(&a).reads);
    }

    #[test]
    fn derivative_program_matches(seed in any::<u64>(), n in 1usize..6, r in 1usize..3) {
        let (a, pi) = program(seed, n, r);
        let b = obliviate(&a, &pi).unwrap();
        let p = expand(&a, B).unwrap();
        for i in 1..=n {
            let d = derivative_abp(&b, i).unwrap();
            prop_assert_eq!(expand(&d, B).unwrap(), p.derivative(i - 1));
        }
    }

    #[test]
    fn restrict_commutes_with_expand(seed in any::<u64>(), n in 1usize..6, var in 1usize..6, c in -3i64..4) {
        let (a, _) = program(seed, n, 2);
        let var = 1 + (var - 1) % n;
        let f = a.field().clone();
        let assignment = [(var, f.from_i64(c))];
        let lhs = expand(&restrict(&a, &assignment), B).unwrap();
        let rhs = expand(&a, B).unwrap().substitute(&[(var - 1, f.from_i64(c))]);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn generator_point_evaluation_matches_symbolic(k in 0usize..3, r in 1usize..3,
                                                   xs in prop::collection::vec(-4i64..5, 16)) {
        let f = Field::rational();
        let map = build_f(&f, k, r, B).unwrap();
        let seed = point(&f, &xs[..seed_len(k, r)]);
        prop_assert_eq!(eval_f(&f, k, r, &seed).unwrap(), map.eval(&seed));
    }

    #[test]
    fn grid_and_compose_agree_at_k1(seed in any::<u64>()) {
        let (a, pi) = program(seed, 2, 1);
        let reference = compose_test(&a, 1, B).unwrap();
        let seq = algorithm1(&a, 1, &pi, &HitsetOptions { exec: Exec::Sequential, ..Default::default() }).unwrap();
        let par = algorithm1(&a, 1, &pi, &HitsetOptions { exec: Exec::Parallel, ..Default::default() }).unwrap();
        prop_assert_eq!(seq.verdict, reference.verdict);
        prop_assert_eq!(seq, par);
        if !reference.is_zero() {
            prop_assert!(!random_probe(&a, 50, 1000, seed).is_zero());
        }
    }
}
