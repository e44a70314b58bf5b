use admix_core::bincount::{count_binary_matrices, gale_ryser_feasible};
use admix_core::enumerate::{
    brute_force_count, count_a1, count_a12, count_a2, count_a2_via_feasible, Family,
    DEFAULT_FEASIBLE_CAP,
};
use admix_core::{BigCount, MarginSpec};

/// Counts every 0/1 matrix of the given shape with the requested margins.
fn sweep_matrices(rows: &[usize], cols: &[usize]) -> u64 {
    let (r, c) = (rows.len(), cols.len());
    let mut hits = 0;
    for mask in 0u32..(1u32 << (r * c)) {
        let bit = |i: usize, j: usize| ((mask >> (i * c + j)) & 1) as usize;
        let rows_ok = (0..r).all(|i| (0..c).map(|j| bit(i, j)).sum::<usize>() == rows[i]);
        let cols_ok = (0..c).all(|j| (0..r).map(|i| bit(i, j)).sum::<usize>() == cols[j]);
        hits += (rows_ok && cols_ok) as u64;
    }
    hits
}

fn margins(len: usize, max: usize, mut seed: u64) -> impl Iterator<Item = Vec<usize>> {
    core::iter::from_fn(move || {
        let v = (0..len)
            .map(|_| {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((seed >> 33) as usize) % (max + 1)
            })
            .collect();
        Some(v)
    })
}

#[test]
fn matrix_counts_match_full_sweep() {
    for r in 1..=4 {
        for c in 1..=4 {
            let row_gen = margins(r, c, (r * 10 + c) as u64);
            let col_gen = margins(c, r, (r * 100 + c) as u64);
            for (rows, cols) in row_gen.zip(col_gen).take(12) {
                let want = sweep_matrices(&rows, &cols);
                assert_eq!(
                    count_binary_matrices(&rows, &cols),
                    BigCount::from(want),
                    "rows {rows:?} cols {cols:?}"
                );
                assert_eq!(gale_ryser_feasible(&rows, &cols), want > 0, "rows {rows:?} cols {cols:?}");
            }
        }
    }
}

#[test]
fn matrix_counts_with_matching_totals() {
    // Force equal totals so the sweep exercises nonzero answers.
    for (rows, cols) in [
        (vec![2, 1, 1], vec![1, 1, 1, 1]),
        (vec![3, 2, 2, 1], vec![2, 2, 2, 2]),
        (vec![4, 0, 2, 2], vec![3, 3, 1, 1]),
        (vec![1, 1, 1, 1], vec![2, 0, 1, 1]),
        (vec![2, 2, 2, 2], vec![2, 2, 2, 2]),
    ] {
        let want = sweep_matrices(&rows, &cols);
        assert_eq!(count_binary_matrices(&rows, &cols), BigCount::from(want));
    }
    // 4x4 with all margins 2 has 90 matrices.
    assert_eq!(count_binary_matrices(&[2; 4], &[2; 4]), BigCount::from(90));
}

fn all_specs(n: usize, p: usize) -> Vec<MarginSpec> {
    let mut out = Vec::new();
    let two_n = 2 * n;
    let rows: Vec<Vec<usize>> = (0..(2 * p + 1).pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = code % (2 * p + 1);
                    code /= 2 * p + 1;
                    v
                })
                .collect()
        })
        .collect();
    let locus: Vec<(usize, usize)> = (0..=two_n)
        .flat_map(|f0| (0..=two_n - f0).map(move |f1| (f0, f1)))
        .collect();
    let mut loci: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for _ in 0..p {
        loci = loci
            .into_iter()
            .flat_map(|prefix| {
                locus.iter().map(move |&pair| {
                    let mut v = prefix.clone();
                    v.push(pair);
                    v
                })
            })
            .collect();
    }
    for a in &rows {
        for l in &loci {
            let phi0 = l.iter().map(|x| x.0).collect();
            let phi1 = l.iter().map(|x| x.1).collect();
            out.push(MarginSpec::new(n, p, a.clone(), phi0, phi1).unwrap());
        }
    }
    out
}

#[test]
fn families_match_brute_force_on_tiny_shapes() {
    // N = P = 1 exhaustively, every admissible margin.
    for spec in all_specs(1, 1) {
        assert_eq!(count_a1(&spec), brute_force_count(&spec, Family::A1).unwrap());
        assert_eq!(count_a2(&spec), brute_force_count(&spec, Family::A2).unwrap());
        assert_eq!(count_a12(&spec), brute_force_count(&spec, Family::A12).unwrap());
    }
}

#[test]
fn families_sum_to_all_arrays() {
    // Summing |A12| over every admissible margin recovers 2^(4NP).
    for (n, p) in [(1, 1), (1, 2), (2, 1)] {
        let total: BigCount = all_specs(n, p).iter().map(count_a12).sum();
        assert_eq!(total, BigCount::pow2((4 * n * p) as u64), "N={n} P={p}");
    }
}

#[test]
fn a2_sum_forms_agree() {
    for spec in all_specs(2, 1).into_iter().step_by(7) {
        assert_eq!(count_a2(&spec), count_a2_via_feasible(&spec, DEFAULT_FEASIBLE_CAP).unwrap());
    }
}

#[test]
fn semiregular_half_values() {
    let exact = |n| count_a12(&MarginSpec::semiregular_half(n, n).unwrap()).log2();
    assert!((exact(2) - 4.16993).abs() <= 5e-6);
    assert!((exact(3) - 10.20945).abs() <= 5e-6);
    assert!((exact(4) - 19.65300).abs() <= 5e-6);
}
