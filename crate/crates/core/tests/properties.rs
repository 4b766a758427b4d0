use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::sample::subsequence;

use specpair::analytics::{build_gram, finite_dual};
use specpair::constructor::{combine_frame, combine_orthogonal, combine_riesz, ContinuousPair};
use specpair::domains::{enumerate_spectrum, minkowski_translate, shift_spectrum, BoxDomain, Spectrum};
use specpair::finite::{build_evaluation_matrix, classify_finite_pair, symbol_of_set, transpose_pair, FiniteSet};
use specpair::rational::{int, rat, to_f64, Rational};
use specpair::sampling::alias_coefficients;
use specpair::{PairKind, Tolerances};

fn line(n: u64, v: &[i64]) -> FiniteSet {
    FiniteSet::line(n, v).unwrap()
}

/// `(N, A, J)` with `A`, `J` subsets of `Z_N` of the given sizes.
fn finite_pair(max_n: u64, square: bool) -> impl Strategy<Value = (u64, Vec<i64>, Vec<i64>)> {
    (2..=max_n).prop_flat_map(move |n| {
        let all: Vec<i64> = (0..n as i64).collect();
        let max_k = (n as usize).min(4);
        (1..=max_k).prop_flat_map(move |k| {
            let all = all.clone();
            let j_size = if square { k..=k } else { k..=max_k.max(k) };
            (Just(n), subsequence(all.clone(), k), j_size.prop_flat_map(move |m| subsequence(all.clone(), m)))
        })
    })
}

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn singular_values_ignore_ordering((n, a, j) in finite_pair(10, false), seed in any::<u64>()) {
        let c1 = classify_finite_pair(&line(n, &a), &line(n, &j), &tol()).unwrap();
        let mut a2 = a.clone();
        let mut j2 = j.clone();
        a2.rotate_left((seed % a.len() as u64) as usize);
        j2.reverse();
        let c2 = classify_finite_pair(&line(n, &a2), &line(n, &j2), &tol()).unwrap();
        prop_assert_eq!(c1.kind, c2.kind);
        for (x, y) in c1.singular_values.iter().zip(&c2.singular_values) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn transpose_preserves_basis_kind((n, a, j) in finite_pair(10, true)) {
        let (fa, fj) = (line(n, &a), line(n, &j));
        let c = classify_finite_pair(&fa, &fj, &tol()).unwrap();
        match transpose_pair(&fa, &fj) {
            Ok((ta, tj)) => {
                prop_assert!(c.kind.is_basis());
                prop_assert_eq!(classify_finite_pair(&ta, &tj, &tol()).unwrap().kind, c.kind);
            }
            Err(_) => prop_assert!(!c.kind.is_basis()),
        }
    }

    #[test]
    fn symbol_matches_direct_sum((n, _a, j) in finite_pair(12, false), k in -30i64..30) {
        let direct: Complex64 = j
            .iter()
            .map(|&x| {
                let angle = -2.0 * PI * (x * k) as f64 / n as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .sum();
        prop_assert!((symbol_of_set(&line(n, &j), &[k]) - direct).norm() < 1e-9);
    }

    #[test]
    fn symbol_at_zero_is_cardinality((n, a, j) in finite_pair(12, false)) {
        let c = alias_coefficients(&line(n, &a), &line(n, &j), 0..=0).unwrap();
        prop_assert_eq!(c[0].symbol, [j.len() as f64, 0.0]);
    }

    #[test]
    fn orthogonal_pairs_cancel_aliases((n, a, j) in finite_pair(12, true)) {
        let (fa, fj) = (line(n, &a), line(n, &j));
        prop_assume!(classify_finite_pair(&fa, &fj, &tol()).unwrap().kind == PairKind::OrthogonalBasis);
        for c in alias_coefficients(&fa, &fj, -(n as i64)..=n as i64).unwrap() {
            if c.in_difference_set && c.k != 0 {
                prop_assert!(Complex64::new(c.symbol[0], c.symbol[1]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn kind_is_translation_invariant((n, a, j) in finite_pair(10, false), t in 0i64..10, u in 0i64..10) {
        let (fa, fj) = (line(n, &a), line(n, &j));
        let base = classify_finite_pair(&fa, &fj, &tol()).unwrap().kind;
        let shifted = classify_finite_pair(&fa.translate(&[t]).unwrap(), &fj.translate(&[u]).unwrap(), &tol()).unwrap().kind;
        prop_assert_eq!(base, shifted);
    }

    #[test]
    fn dual_inverts_evaluation_matrix((n, a, j) in finite_pair(10, true)) {
        let (fa, fj) = (line(n, &a), line(n, &j));
        prop_assume!(classify_finite_pair(&fa, &fj, &tol()).unwrap().kind >= PairKind::RieszBasis);
        let g = finite_dual(&fa, &fj).unwrap();
        let f = build_evaluation_matrix(&fa, &fj).unwrap().entries;
        let product = &g * &f;
        let k = a.len() as f64;
        for r in 0..a.len() {
            for s in 0..a.len() {
                let target = if r == s { k } else { 0.0 };
                prop_assert!((product[(r, s)] - target).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn combination_kinds_are_monotone((n, a, j) in finite_pair(9, false)) {
        let base = ContinuousPair::unit_cube(1);
        let (fa, fj) = (line(n, &a), line(n, &j));
        let o = combine_orthogonal(&base, &fa, &fj).succeeded();
        let r = combine_riesz(&base, &fa, &fj).succeeded();
        let f = combine_frame(&base, &fa, &fj).succeeded();
        prop_assert!(!o || r);
        prop_assert!(!r || f);
    }

    #[test]
    fn enumeration_is_sorted_distinct_and_nested(num in 1i64..5, den in 1i64..5, shift in 0i64..7, r1 in 0.5f64..4.0, extra in 0.0f64..3.0) {
        let scale = rat(num, den);
        let base = Spectrum::scaled_lattice(1, scale);
        let spec = Spectrum::new(base.basis().clone(), vec![vec![int(0)], vec![rat(shift, 7) * scale]]);
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        let small = enumerate_spectrum(&spec, r1);
        let large = enumerate_spectrum(&spec, r1 + extra);
        prop_assert!(small.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(large.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(small.iter().all(|p| large.contains(p)));
        prop_assert!(small.iter().all(|p| to_f64(&p[0]).abs() <= r1));
    }

    #[test]
    fn minkowski_measure_counts_translates(a in subsequence((0i64..12).collect::<Vec<_>>(), 1..6), width in 1i64..4) {
        // [0, width) translated by multiples of `width` never overlaps
        let pts: Vec<i64> = a.iter().map(|x| x * width).collect();
        let n = 12 * width as u64;
        let base = BoxDomain::interval(int(0), int(width)).unwrap();
        let dom = minkowski_translate(&base, &line(n, &pts)).unwrap();
        prop_assert_eq!(dom.measure(), int(width) * Rational::from_integer(a.len() as i64));
    }

    #[test]
    fn gram_hermitian_with_measure_diagonal((n, a, j) in finite_pair(6, false), radius in 1.0f64..3.0) {
        let (fa, fj) = (line(n, &a), line(n, &j));
        let dom = minkowski_translate(&BoxDomain::unit_cube(1), &fa).unwrap();
        let spec = shift_spectrum(&Spectrum::integer_lattice(1), &fj, n).unwrap();
        let g = build_gram(&dom, &spec, radius).unwrap();
        prop_assert_eq!(g.entries.adjoint(), g.entries.clone());
        let m = a.len() as f64;
        for i in 0..g.len() {
            prop_assert!((g.entries[(i, i)].re - m).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_combinations_have_diagonal_gram((n, a, j) in finite_pair(8, true), radius in 1.0f64..4.0) {
        let (fa, fj) = (line(n, &a), line(n, &j));
        let r = combine_orthogonal(&ContinuousPair::unit_cube(1), &fa, &fj);
        prop_assume!(r.succeeded());
        let pair = r.pair.unwrap();
        let g = build_gram(&pair.domain, &pair.spectrum, radius).unwrap();
        prop_assert!(g.max_off_diagonal() < 1e-10);
    }

    #[test]
    fn synthesis_never_exceeds_coarse_bessel_bound((n, a, j) in finite_pair(8, false)) {
        // the largest Gram eigenvalue bounds every synthesis ratio
        let (fa, fj) = (line(n, &a), line(n, &j));
        let dom = minkowski_translate(&BoxDomain::unit_cube(1), &fa).unwrap();
        let spec = shift_spectrum(&Spectrum::integer_lattice(1), &fj, n).unwrap();
        let g = build_gram(&dom, &spec, 3.0).unwrap();
        let top = *g.eigenvalues().last().unwrap();
        let bound = specpair::constructor::bessel_constant(&ContinuousPair::unit_cube(1), &fa, &fj);
        prop_assert!(top <= bound.coarse + 1e-9);
    }

    #[test]
    fn finite_set_json_round_trip((n, a, _j) in finite_pair(12, false)) {
        let s = line(n, &a);
        let text = serde_json::to_string(&s).unwrap();
        let back: FiniteSet = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn spectrum_json_is_byte_stable(num in 1i64..9, den in 1i64..9, s in 0i64..9) {
        let scale = rat(num, den);
        let spec = Spectrum::new(vec![vec![scale]], vec![vec![rat(s, 9)]]).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: Spectrum = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        prop_assert_eq!(back, spec);
    }
}
