use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::reference::permanent_reference;
use super::*;
use crate::error::PermanentError;

/// Definition-level oracle: recursive sum over injective row->column maps.
/// Shares nothing with the kernels.
fn brute_i128(a: &Matrix<i64>) -> i128 {
    fn go(a: &Matrix<i64>, row: usize, used: &mut Vec<bool>) -> i128 {
        if row == a.rows() {
            return 1;
        }
        let mut s = 0i128;
        for j in 0..a.cols() {
            if !used[j] {
                used[j] = true;
                s += a.get(row, j) as i128 * go(a, row + 1, used);
                used[j] = false;
            }
        }
        s
    }
    let a = a.normalized();
    go(&a, 0, &mut vec![false; a.cols()])
}

fn brute_f64(a: &Matrix<f64>) -> f64 {
    fn go(a: &Matrix<f64>, row: usize, used: &mut Vec<bool>) -> f64 {
        if row == a.rows() {
            return 1.0;
        }
        let mut s = 0.0;
        for j in 0..a.cols() {
            if !used[j] {
                used[j] = true;
                s += a.get(row, j) * go(a, row + 1, used);
                used[j] = false;
            }
        }
        s
    }
    let a = a.normalized();
    go(&a, 0, &mut vec![false; a.cols()])
}

fn rand_int(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix<i64> {
    Matrix::from_fn(m, n, |_, _| rng.gen_range(0..=9)).unwrap()
}

fn rand_float(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix<f64> {
    Matrix::from_fn(m, n, |_, _| rng.gen_range(-1.0..=1.0)).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

const EXAMPLE: [[i64; 3]; 3] = [[1, 2, 3], [4, 5, 6], [7, 8, 9]];

#[test]
fn three_by_three_example_all_algorithms() {
    let a = Matrix::from_rows(&EXAMPLE).unwrap();
    for alg in AlgorithmId::ALL {
        let p = compute(&a, alg, Variant::Auto).unwrap();
        assert_eq!(p.value, 450, "{alg}");
        assert!(!p.overflowed);
    }
    assert_eq!(ryser_square(&a).unwrap().value, 450);
    assert_eq!(glynn_square(&a).unwrap().value, 450);
    let f = a.map(|&x| x as f64);
    assert_eq!(glynn(&f).unwrap().value, 450.0);
}

#[test]
fn combinatoric_examples() {
    let a = Matrix::from_rows(&[[1i64, 2], [3, 4]]).unwrap();
    assert_eq!(combinatoric(&a).unwrap().value, 10);
    let row = Matrix::from_rows(&[[2.5f64, -1.0, 4.0]]).unwrap();
    assert_eq!(combinatoric(&row).unwrap().value, 5.5);
    let id = Matrix::from_fn(3, 3, |i, j| i64::from(i == j)).unwrap();
    assert_eq!(combinatoric(&id).unwrap().value, 1);
}

#[test]
fn ryser_examples() {
    let ones = Matrix::new(2, 2, vec![1i64; 4]).unwrap();
    assert_eq!(ryser_square(&ones).unwrap().value, 2);
    let ones24 = Matrix::new(2, 4, vec![1i64; 8]).unwrap();
    assert_eq!(ryser_rectangular(&ones24).unwrap().value, 12);
    let padded = Matrix::from_rows(&[[0i64, 1, 0], [1, 0, 0]]).unwrap();
    assert_eq!(ryser_rectangular(&padded).unwrap().value, 1);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = rand_int(&mut rng, 5, 5);
    assert_eq!(ryser_square(&a).unwrap().value as i128, brute_i128(&a));
    let f = rand_float(&mut rng, 3, 6);
    let want = combinatoric(&f).unwrap().value;
    assert!(close(ryser_rectangular(&f).unwrap().value, want, 1e-12));
}

#[test]
fn glynn_examples() {
    let id = Matrix::from_fn(4, 4, |i, j| i64::from(i == j)).unwrap();
    assert_eq!(glynn_square(&id).unwrap().value, 1);
    let ones24 = Matrix::new(2, 4, vec![1i64; 8]).unwrap();
    assert_eq!(glynn_rectangular(&ones24).unwrap().value, 12);
    let row = Matrix::from_rows(&[[3i64, 4]]).unwrap();
    assert_eq!(glynn_rectangular(&row).unwrap().value, 7);

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = rand_float(&mut rng, 6, 6);
    let want = ryser_square(&a).unwrap().value;
    assert!(close(glynn_square(&a).unwrap().value, want, 1e-12));
    assert!(close(brute_f64(&a), want, 1e-12));
    let b = rand_float(&mut rng, 3, 5);
    let want = ryser_rectangular(&b).unwrap().value;
    assert!(close(glynn_rectangular(&b).unwrap().value, want, 1e-12));
}

#[test]
fn reference_examples() {
    let a = Matrix::from_rows(&[[1i64, 2], [3, 4]]).unwrap();
    assert_eq!(permanent_reference(&a, AlgorithmId::Ryser).unwrap().value, 10);
    let id = Matrix::from_fn(3, 3, |i, j| i64::from(i == j)).unwrap();
    assert_eq!(permanent_reference(&id, AlgorithmId::Glynn).unwrap().value, 1);
    let ones = Matrix::new(2, 3, vec![1i64; 6]).unwrap();
    assert_eq!(permanent_reference(&ones, AlgorithmId::Ryser).unwrap().value, 6);
    assert_eq!(permanent_reference(&ones, AlgorithmId::Glynn).unwrap().value, 6);
    assert_eq!(permanent_reference(&ones, AlgorithmId::Combinatoric).unwrap().value, 6);

    let big = Matrix::new(2, 21, vec![1i64; 42]).unwrap();
    assert!(matches!(
        permanent_reference(&big, AlgorithmId::Ryser),
        Err(PermanentError::SizeGuard { cols: 21, .. })
    ));
}

#[test]
fn single_row_and_column_are_sums() {
    let r = Matrix::from_rows(&[[1i64, 5, -2, 7]]).unwrap();
    let c = r.transpose();
    for alg in AlgorithmId::ALL {
        assert_eq!(compute(&r, alg, Variant::Auto).unwrap().value, 11);
        assert_eq!(compute(&c, alg, Variant::Auto).unwrap().value, 11);
    }
    let one = Matrix::new(1, 1, vec![-3.5f64]).unwrap();
    for alg in AlgorithmId::ALL {
        assert_eq!(compute(&one, alg, Variant::Auto).unwrap().value, -3.5);
    }
}

#[test]
fn all_algorithms_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=8 {
        for m in 1..=n {
            for _ in 0..10 {
                let a = rand_int(&mut rng, m, n);
                let want = brute_i128(&a);
                for alg in AlgorithmId::ALL {
                    let p = compute(&a, alg, Variant::Auto).unwrap();
                    assert!(!p.overflowed);
                    assert_eq!(p.value as i128, want, "{alg} {m}x{n}");
                    let r = permanent_reference(&a, alg).unwrap();
                    assert_eq!(r.value as i128, want, "reference {alg} {m}x{n}");
                }
                let f = rand_float(&mut rng, m, n);
                let want = brute_f64(&f);
                for alg in AlgorithmId::ALL {
                    let got = compute(&f, alg, Variant::Auto).unwrap().value;
                    assert!(close(got, want, 1e-10), "{alg} {m}x{n}: {got} vs {want}");
                }
            }
        }
    }
}

#[test]
fn tall_inputs_use_the_transpose() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (m, n) in [(4, 2), (5, 3), (7, 1), (6, 5)] {
        let a = rand_int(&mut rng, m, n);
        let t = a.transpose();
        for alg in AlgorithmId::ALL {
            assert_eq!(
                compute(&a, alg, Variant::Auto).unwrap(),
                compute(&t, alg, Variant::Auto).unwrap()
            );
        }
        let f = rand_float(&mut rng, m, n);
        for alg in AlgorithmId::ALL {
            let x = compute(&f, alg, Variant::Auto).unwrap().value;
            let y = compute(&f.transpose(), alg, Variant::Auto).unwrap().value;
            assert!(close(x, y, 1e-12));
        }
    }
}

#[test]
fn variants_check_shape() {
    let rect = Matrix::new(2, 3, vec![1i64; 6]).unwrap();
    assert!(matches!(ryser_square(&rect), Err(PermanentError::WrongShape { .. })));
    assert!(matches!(glynn_square(&rect), Err(PermanentError::WrongShape { .. })));
    assert!(matches!(combinatoric_square(&rect), Err(PermanentError::WrongShape { .. })));
    let sq = Matrix::new(3, 3, vec![1i64; 9]).unwrap();
    assert!(matches!(glynn_rectangular(&sq), Err(PermanentError::WrongShape { .. })));
    assert_eq!(ryser_rectangular(&sq).unwrap().value, 6);
    assert_eq!(combinatoric_rectangular(&rect).unwrap().value, 6);
    assert_eq!(glynn_rectangular(&rect.transpose()).unwrap().value, 6);
}

#[test]
fn combinatoric_budget_refuses_huge_inputs() {
    let a = Matrix::new(15, 15, vec![1.0f64; 225]).unwrap();
    assert!(matches!(combinatoric(&a), Err(PermanentError::BudgetExceeded { .. })));
    let small = Matrix::new(5, 5, vec![1.0f64; 25]).unwrap();
    assert!(matches!(
        combinatoric_with_budget(&small, 100.0),
        Err(PermanentError::BudgetExceeded { .. })
    ));
    assert_eq!(combinatoric_with_budget(&small, 120.0).unwrap().value, 120.0);
}

#[test]
fn integer_overflow_is_flagged() {
    // per(21x21 ones) = 21! > i64::MAX
    let a = Matrix::new(21, 21, vec![1i64; 441]).unwrap();
    let p = ryser(&a).unwrap();
    assert!(p.overflowed);
    let p = glynn(&a).unwrap();
    assert!(p.overflowed);
    // 20x20 ones fits in the result but Glynn's scaled sum 2^19 * 20! does not
    let a = Matrix::new(20, 20, vec![1i64; 400]).unwrap();
    assert!(glynn(&a).unwrap().overflowed);
    let p = ryser(&a).unwrap();
    assert!(p.overflowed || p.value == 2_432_902_008_176_640_000);
}

#[test]
fn zero_row_gives_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (m, n) in [(3, 3), (3, 5), (5, 5)] {
        let mut a = rand_float(&mut rng, m, n).into_vec();
        for j in 0..n {
            a[n + j] = 0.0;
        }
        let a = Matrix::new(m, n, a).unwrap();
        for alg in AlgorithmId::ALL {
            // Glynn sums signed terms that cancel only up to roundoff
            let v = compute(&a, alg, Variant::Auto).unwrap().value;
            assert!(v.abs() <= 1e-12, "{alg} {m}x{n}: {v}");
        }
    }
}

#[test]
fn complex_conjugation_commutes() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = Matrix::from_fn(5, 5, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).unwrap();
    let conj = a.map(|z| z.conj());
    for alg in AlgorithmId::ALL {
        let p = compute(&a, alg, Variant::Auto).unwrap().value;
        let q = compute(&conj, alg, Variant::Auto).unwrap().value;
        assert!((p.conj() - q).norm() <= 1e-12 * p.norm());
    }
    let r = permanent_reference(&a, AlgorithmId::Combinatoric).unwrap().value;
    let g = glynn(&a).unwrap().value;
    assert!((r - g).norm() <= 1e-12 * r.norm());
}

#[test]
fn method_names_parse() {
    assert_eq!("opt".parse::<Method>().unwrap(), Method::OPT);
    let m: Method = "glynn_square".parse().unwrap();
    assert_eq!(m.algorithm, Some(AlgorithmId::Glynn));
    assert_eq!(m.variant, Variant::Square);
    let m: Method = "ryser_rectangular".parse().unwrap();
    assert_eq!(m.to_string(), "ryser_rectangular");
    assert!("gauss".parse::<Method>().is_err());
    assert!("_square".parse::<Method>().is_err());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn matrix_strategy(max: usize) -> impl Strategy<Value = Matrix<f64>> {
        (1..=max, 1..=max).prop_flat_map(|(m, n)| {
            proptest::collection::vec(-1.0f64..1.0, m * n).prop_map(move |d| Matrix::new(m, n, d).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn permuting_rows_and_columns_is_invariant(a in matrix_strategy(6), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows: Vec<usize> = (0..a.rows()).collect();
            let mut cols: Vec<usize> = (0..a.cols()).collect();
            use rand::seq::SliceRandom;
            rows.shuffle(&mut rng);
            cols.shuffle(&mut rng);
            let b = Matrix::from_fn(a.rows(), a.cols(), |i, j| a.get(rows[i], cols[j])).unwrap();
            let scale = compute(&a.map(|x| x.abs()), AlgorithmId::Ryser, Variant::Auto).unwrap().value;
            for alg in AlgorithmId::ALL {
                let x = compute(&a, alg, Variant::Auto).unwrap().value;
                let y = compute(&b, alg, Variant::Auto).unwrap().value;
                prop_assert!((x - y).abs() <= 1e-12 * scale.max(1e-12), "{} {} vs {}", alg, x, y);
            }
        }

        #[test]
        fn scaling_a_row_scales_the_permanent(a in matrix_strategy(6), c in -3.0f64..3.0, pick in any::<usize>()) {
            let a = a.normalized().into_owned();
            let r = pick % a.rows();
            let b = Matrix::from_fn(a.rows(), a.cols(), |i, j| if i == r { c * a.get(i, j) } else { a.get(i, j) }).unwrap();
            // rounding error is bounded relative to per(|A|), not per(A)
            let scale = compute(&a.map(|x| x.abs()), AlgorithmId::Ryser, Variant::Auto).unwrap().value;
            for alg in AlgorithmId::ALL {
                let x = compute(&a, alg, Variant::Auto).unwrap().value;
                let y = compute(&b, alg, Variant::Auto).unwrap().value;
                prop_assert!((c * x - y).abs() <= 1e-12 * (c.abs() * scale).max(1e-12));
            }
        }
    }
}
