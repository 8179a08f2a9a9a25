use nalgebra::Matrix2;
use proptest::prelude::*;

use jsrforge::fricke::{eval_product_spectrum, eval_trace, fricke_polynomial, WEIGHTS_A, WEIGHTS_B};
use jsrforge::mat2::*;
use jsrforge::words::*;

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::bool::ANY, 1..=max_len).prop_map(|bits| {
        Word::new(bits.into_iter().map(|b| if b { Letter::B } else { Letter::A }).collect()).unwrap()
    })
}

fn mat_strategy(r: f64) -> impl Strategy<Value = Mat2> {
    prop::array::uniform4(-r..r).prop_map(|e| Mat2::new(e[0], e[1], e[2], e[3]))
}

fn na(m: &Mat2) -> Matrix2<f64> {
    Matrix2::new(m.0[0][0], m.0[0][1], m.0[1][0], m.0[1][1])
}

fn mobius(n: usize) -> i64 {
    let (mut n, mut result, mut p) = (n, 1i64, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

#[test]
fn lyndon_counts_match_necklace_formula() {
    let words = lyndon_words(16).unwrap();
    for n in 1..=16usize {
        let expected: i64 = (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| mobius(d) * (1i64 << (n / d)))
            .sum::<i64>()
            / n as i64;
        let got = words.iter().filter(|w| w.len() == n).count() as i64;
        assert_eq!(got, expected, "length {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn fricke_matches_matrix_trace(word in word_strategy(12), a in mat_strategy(1.5), b in mat_strategy(1.5)) {
        let t = invariants_of_pair(&a, &b);
        let direct = evaluate_word(&word, &a, &b).trace();
        let scale = (a.spectral_norm() * b.spectral_norm()).max(1.0).powi(word.len() as i32).max(1.0);
        prop_assert!((eval_trace(&word, &t) - direct).abs() <= 1e-9 * scale);
        // spectral radius from the trace and determinant against nalgebra
        let (rho, _) = eval_product_spectrum(&word, &t);
        let p = na(&evaluate_word(&word, &a, &b));
        let oracle = p.complex_eigenvalues().iter().map(|c| c.norm()).fold(0.0, f64::max);
        prop_assert!((rho - oracle).abs() <= 1e-6 * scale.sqrt().max(1.0), "{} vs {}", rho, oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mirror_and_rotation_invariants(word in word_strategy(16), k in 0usize..32) {
        prop_assert_eq!(mirror(&mirror(&word)), word.clone());
        let r = word.rotate(k);
        prop_assert!(r.is_rotation_of(&word));
        prop_assert_eq!(r.canonical(), word.canonical());
        prop_assert_eq!(is_chiral(&r), is_chiral(&word));
        prop_assert_eq!(is_chiral(&mirror(&word)), is_chiral(&word));
        prop_assert_eq!(is_primitive(&r), is_primitive(&word));
    }

    #[test]
    fn chiral_words_are_primitive(word in word_strategy(16)) {
        if is_chiral(&word) {
            prop_assert!(is_primitive(&word));
            prop_assert!(word.len() >= 6);
        }
    }

    #[test]
    fn fricke_is_weighted_homogeneous(word in word_strategy(12)) {
        let p = fricke_polynomial(&word);
        let (na_, nb) = word.letter_counts();
        prop_assert_eq!(p.homogeneous_weight(WEIGHTS_A), Some(na_ as u32));
        prop_assert_eq!(p.homogeneous_weight(WEIGHTS_B), Some(nb as u32));
    }

    #[test]
    fn mirror_isospectral_numerically(word in word_strategy(14), a in mat_strategy(1.5), b in mat_strategy(1.5)) {
        let t1 = evaluate_word(&word, &a, &b).trace();
        let t2 = evaluate_word(&mirror(&word), &a, &b).trace();
        let scale = (a.spectral_norm() * b.spectral_norm()).max(1.0).powi(word.len() as i32);
        prop_assert!((t1 - t2).abs() <= 1e-9 * scale);
    }

    #[test]
    fn substitution_composes(word in word_strategy(6), ia in word_strategy(3), ib in word_strategy(3),
                             a in mat_strategy(1.2), b in mat_strategy(1.2)) {
        // w(ia(A,B), ib(A,B)) = (w ∘ (ia, ib))(A, B)
        let sub = substitute(&word, &ia, &ib);
        let (a2, b2) = (evaluate_word(&ia, &a, &b), evaluate_word(&ib, &a, &b));
        let direct = evaluate_word(&word, &a2, &b2).trace();
        let t = invariants_of_pair(&a, &b);
        let scale = (a.spectral_norm() * b.spectral_norm()).max(1.0).powi(sub.len() as i32);
        prop_assert!((eval_trace(&sub, &t) - direct).abs() <= 1e-9 * scale);
        // chirality is preserved by the substitution a -> b, b -> a
        prop_assert_eq!(is_chiral(&substitute(&word, &w("b"), &w("a"))), is_chiral(&word));
    }

    #[test]
    fn realize_round_trips(x in -10.0..10.0f64, y in -10.0..10.0f64, z in -100.0..100.0f64,
                           u in -10.0..10.0f64, v in -10.0..10.0f64) {
        let t = Tuple5::new(x, y, z, u, v);
        match realize(&t) {
            Ok((a, b)) => {
                prop_assert!(realizable(&t));
                prop_assert!(invariants_of_pair(&a, &b).matches(&t));
            }
            Err(_) => prop_assert!(!realizable(&t)),
        }
    }

    #[test]
    fn invariants_of_real_pairs_are_realizable(a in mat_strategy(3.0), b in mat_strategy(3.0)) {
        let t = invariants_of_pair(&a, &b);
        // the Gram matrix of a real pair is never positive definite
        prop_assert!(t.minor2().min(t.minor3()) <= 1e-9 * t.magnitude().powi(3).max(1.0));
    }

    #[test]
    fn cyclic_products_share_spectral_radius(p in word_strategy(8), q in word_strategy(8),
                                             a in mat_strategy(1.5), b in mat_strategy(1.5)) {
        let (pm, qm) = (evaluate_word(&p, &a, &b), evaluate_word(&q, &a, &b));
        let (r1, r2) = (spectral_radius(&(pm * qm)), spectral_radius(&(qm * pm)));
        prop_assert!((r1 - r2).abs() <= 1e-8 * r1.max(r2).max(1.0));
    }

    #[test]
    fn squeeze_bounds_are_ordered(a in mat_strategy(1.5), b in mat_strategy(1.5), k in 1usize..10) {
        let bk = jsr_bounds(&a, &b, k).unwrap();
        prop_assert!(bk.lower <= bk.upper * (1.0 + 1e-12));
        let b2 = jsr_bounds(&a, &b, 2 * k).unwrap();
        // lower bounds grow with k, and every lower bound sits below every upper bound
        prop_assert!(b2.lower >= bk.lower * (1.0 - 1e-12));
        prop_assert!(b2.lower <= bk.upper * (1.0 + 1e-12));
        prop_assert!(bk.lower <= b2.upper * (1.0 + 1e-12));
    }
}
