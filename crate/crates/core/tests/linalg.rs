use num_complex::Complex64;
use proptest::prelude::*;
use rmt_edge::linalg::*;

fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<f64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn hermitian_from(n: usize, vals: &[f64]) -> DenseMatrix<Complex64> {
    let mut m = DenseMatrix::zeros(n);
    let mut it = vals.iter().cycle();
    for i in 0..n {
        m[(i, i)] = Complex64::new(*it.next().unwrap(), 0.0);
        for j in 0..i {
            let z = Complex64::new(*it.next().unwrap(), *it.next().unwrap());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

#[test]
fn determinant_examples() {
    assert_eq!(det_lu(&DenseMatrix::<f64>::identity(7)).unwrap(), 1.0);
    let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
    assert!((det_lu(&m).unwrap() + 2.0).abs() < 1e-15);
    let mut bad = DenseMatrix::<f64>::identity(3);
    bad[(1, 2)] = f64::NAN;
    assert!(det_lu(&bad).is_err());
}

#[test]
fn triangular_determinant_is_diagonal_product() {
    let m = DenseMatrix::from_fn(9, |i, j| if j >= i { 1.0 + (i * 7 + j * 3) as f64 % 5.0 * 0.3 } else { 0.0 });
    let want: f64 = (0..9).map(|i| m[(i, i)]).product();
    let got = det_lu(&m).unwrap();
    assert!((got - want).abs() <= 1e-13 * want.abs());
}

#[test]
fn lu_solve_recovers_solution() {
    let m = DenseMatrix::from_fn(12, |i, j| if i == j { 4.0 } else { 1.0 / (1.0 + i as f64 + 2.0 * j as f64) });
    let x: Vec<f64> = (0..12).map(|i| (i as f64).sin()).collect();
    let b = m.mul_vec(&x);
    let got = lu_factor(&m).unwrap().solve(&b).unwrap();
    for (g, w) in got.iter().zip(&x) {
        assert!((g - w).abs() < 1e-14);
    }
}

#[test]
fn eigenvalue_examples() {
    let d = DenseMatrix::from_fn(4, |i, j| if i == j { [3.0, -1.0, 2.0, 0.5][i] } else { 0.0 });
    assert_eq!(symmetric_eigenvalues(&d).unwrap(), vec![-1.0, 0.5, 2.0, 3.0]);
    let s = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let e = symmetric_eigenvalues(&s).unwrap();
    assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
    let mut nh = DenseMatrix::<Complex64>::identity(3);
    nh[(0, 1)] = Complex64::new(1.0, 0.0);
    assert!(hermitian_eigenvalues(&nh).is_err());
}

#[test]
fn hermitian_eigenvalues_bracketed_by_sturm_counts() {
    let vals: Vec<f64> = (0..200).map(|k| ((k * 37 % 101) as f64 / 50.0) - 1.0).collect();
    let m = hermitian_from(8, &vals);
    let eig = hermitian_eigenvalues(&m).unwrap();
    let tr = m.trace().re;
    assert!((eig.iter().sum::<f64>() - tr).abs() < 1e-10);
    let (d, e) = hermitian_tridiagonalize(&m).unwrap();
    let e2: Vec<f64> = e.iter().map(|v| v * v).collect();
    for (k, &lam) in eig.iter().enumerate() {
        assert!(sturm_count(&d, &e2, lam - 1e-9) <= k);
        assert!(sturm_count(&d, &e2, lam + 1e-9) >= k + 1);
    }
}

#[test]
fn top_eigenvalues_by_bisection_match_ql() {
    let d: Vec<f64> = (0..300).map(|i| ((i * 13 % 17) as f64).sin()).collect();
    let e: Vec<f64> = (0..299).map(|i| 0.5 + ((i * 7 % 11) as f64).cos().abs()).collect();
    let all = tridiagonal_eigenvalues(&d, &e).unwrap();
    let top = tridiagonal_top_eigenvalues(&d, &e, 3).unwrap();
    for j in 0..3 {
        assert!((top[j] - all[all.len() - 1 - j]).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn det_matches_cofactor_expansion(entries in prop::collection::vec(-1.0f64..1.0, 36)) {
        let rows: Vec<Vec<f64>> = entries.chunks(6).map(|c| c.to_vec()).collect();
        let want = cofactor_det(&rows);
        let got = det_lu(&DenseMatrix::from_rows(&rows).unwrap()).unwrap();
        prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1e-3));
    }

    #[test]
    fn complex_det_of_real_matrix(entries in prop::collection::vec(-1.0f64..1.0, 25)) {
        let rows: Vec<Vec<f64>> = entries.chunks(5).map(|c| c.to_vec()).collect();
        let real = det_lu(&DenseMatrix::from_rows(&rows).unwrap()).unwrap();
        let crows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect()).collect();
        let complex = det_lu(&DenseMatrix::from_rows(&crows).unwrap()).unwrap();
        prop_assert!((complex.re - real).abs() <= 1e-13 * real.abs().max(1e-3));
        prop_assert!(complex.im.abs() <= 1e-15);
    }

    #[test]
    fn hermitian_trace_and_frobenius(n in 2usize..40, vals in prop::collection::vec(-2.0f64..2.0, 64)) {
        let m = hermitian_from(n, &vals);
        let eig = hermitian_eigenvalues(&m).unwrap();
        prop_assert_eq!(eig.len(), n);
        prop_assert!(eig.windows(2).all(|w| w[0] <= w[1]));
        let tr = m.trace().re;
        let fro: f64 = m.as_slice().iter().map(|z| z.norm_sqr()).sum();
        let s1: f64 = eig.iter().sum();
        let s2: f64 = eig.iter().map(|l| l * l).sum();
        prop_assert!((s1 - tr).abs() <= 1e-9 * fro.sqrt().max(1.0));
        prop_assert!((s2 - fro).abs() <= 1e-9 * fro);
    }
}
