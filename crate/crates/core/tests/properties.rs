use palm_nmf_core::harness::score_recovery;
use palm_nmf_core::{frobenius_norm, matmul, nonneg_project, soft_threshold_nonneg, Matrix};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, lo: f64, hi: f64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(lo..hi, rows * cols).prop_map(move |data| Matrix::from_vec(rows, cols, data).unwrap())
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..6, 1usize..6)
}

fn pair(rows: usize, cols: usize) -> impl Strategy<Value = (Matrix, Matrix)> {
    (matrix(rows, cols, -5.0, 5.0), matrix(rows, cols, -5.0, 5.0))
}

proptest! {
    #[test]
    fn matmul_is_associative(
        (a, b, c) in (1usize..6, 1usize..6, 1usize..6, 1usize..6)
            .prop_flat_map(|(p, q, r, s)| (matrix(p, q, -3.0, 3.0), matrix(q, r, -3.0, 3.0), matrix(r, s, -3.0, 3.0)))
    ) {
        let left = matmul(&matmul(&a, &b).unwrap(), &c).unwrap();
        let right = matmul(&a, &matmul(&b, &c).unwrap()).unwrap();
        let scale = 1.0 + frobenius_norm(&left);
        prop_assert!(frobenius_norm(&left.sub(&right).unwrap()) <= 1e-9 * scale);
    }

    #[test]
    fn frobenius_distance_zero_iff_equal((a, b) in dims().prop_flat_map(|(r, c)| pair(r, c))) {
        prop_assert_eq!(frobenius_norm(&a.sub(&a).unwrap()), 0.0);
        let d = frobenius_norm(&a.sub(&b).unwrap());
        prop_assert_eq!(d == 0.0, a == b);
    }

    #[test]
    fn projection_is_idempotent(a in dims().prop_flat_map(|(r, c)| matrix(r, c, -5.0, 5.0))) {
        let once = nonneg_project(&a);
        prop_assert_eq!(nonneg_project(&once), once);
    }

    #[test]
    fn proxes_are_monotone_and_nonexpansive(
        (a, b) in dims().prop_flat_map(|(r, c)| pair(r, c)),
        tau in 0.0..3.0f64,
    ) {
        // Entrywise max/min give an ordered pair lo <= hi.
        let lo = Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)].min(b[(i, j)])).unwrap();
        let hi = Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)].max(b[(i, j)])).unwrap();
        let ops: [&dyn Fn(&Matrix) -> Matrix; 2] = [
            &|m| nonneg_project(m),
            &|m| soft_threshold_nonneg(m, tau).unwrap(),
        ];
        for op in ops {
            let (pl, ph) = (op(&lo), op(&hi));
            let (pa, pb) = (op(&a), op(&b));
            for idx in 0..a.as_slice().len() {
                prop_assert!(pl.as_slice()[idx] <= ph.as_slice()[idx]);
                let out = (pa.as_slice()[idx] - pb.as_slice()[idx]).abs();
                prop_assert!(out <= (a.as_slice()[idx] - b.as_slice()[idx]).abs() + 1e-12);
            }
        }
    }

    #[test]
    fn score_ignores_learned_order_and_scale(
        (w, h, wt, ht) in (2usize..7, 1usize..5, 2usize..7).prop_flat_map(|(d, k, n)| (
            matrix(d, k, 0.01, 1.0), matrix(k, n, 0.01, 1.0), matrix(d, k, 0.01, 1.0), matrix(k, n, 0.01, 1.0)
        )),
        shift in 0usize..5,
        scales in prop::collection::vec(0.01..100.0f64, 5),
    ) {
        let k = w.cols();
        let base = score_recovery(&w, &h, &wt, &ht).unwrap();
        // Rotate the learned components and rescale them arbitrarily.
        let src = |c: usize| (c + shift) % k;
        let w2 = Matrix::from_fn(w.rows(), k, |i, c| w[(i, src(c))] * scales[c]).unwrap();
        let h2 = Matrix::from_fn(k, h.cols(), |r, j| h[(src(r), j)] / scales[r]).unwrap();
        let moved = score_recovery(&w2, &h2, &wt, &ht).unwrap();
        prop_assert!((moved.dist_w - base.dist_w).abs() <= 1e-12);
        prop_assert!((moved.dist_h - base.dist_h).abs() <= 1e-12);
        for j in 0..k {
            prop_assert_eq!(src(moved.permutation[j]), base.permutation[j]);
        }
    }
}
