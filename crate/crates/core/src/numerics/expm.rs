//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Degree selection and the θ thresholds follow Higham's 2005 variant
//! (degrees 3, 5, 7, 9, 13 on the 1-norm).

use super::matrix::{ComplexMatrix, ZERO};

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Matrix exponential of a square matrix.
///
/// # Panics
/// If `a` is not square.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.check_square("expm").expect("expm of a non-square matrix");
    let norm = a.norm_one();
    let id = ComplexMatrix::identity(n);
    if norm == 0.0 {
        return id;
    }

    for &(m, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            return pade_low(a, coeffs);
        }
    }

    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a.scale_real(0.5f64.powi(s));
    let mut r = pade13(&scaled);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Solves `(V − U) X = (V + U)` for the odd/even split `U`, `V` of the Padé numerator.
fn pade_ratio(u: &ComplexMatrix, v: &ComplexMatrix) -> ComplexMatrix {
    let p = v + u;
    let q = v - u;
    lu_solve(&q, &p)
}

fn pade_low(a: &ComplexMatrix, b: &[f64]) -> ComplexMatrix {
    let n = a.rows();
    let a2 = a * a;
    // powers of A² up to the needed degree
    let half = (b.len() - 1) / 2;
    let mut pows = vec![ComplexMatrix::identity(n), a2];
    while pows.len() <= half {
        let next = pows.last().unwrap() * &pows[1];
        pows.push(next);
    }
    let mut u_inner = ComplexMatrix::zeros(n, n);
    let mut v = ComplexMatrix::zeros(n, n);
    for k in 0..=half {
        u_inner += &pows[k].scale_real(b[2 * k + 1]);
        v += &pows[k].scale_real(b[2 * k]);
    }
    let u = a * &u_inner;
    pade_ratio(&u, &v)
}

fn pade13(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let b = &B13;
    let id = ComplexMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let lin = |c: [f64; 4], m: [&ComplexMatrix; 4]| {
        let mut out = m[0].scale_real(c[0]);
        for k in 1..4 {
            out += &m[k].scale_real(c[k]);
        }
        out
    };

    let u_hi = lin([b[13], b[11], b[9], 0.0], [&a6, &a4, &a2, &id]);
    let u_lo = lin([b[7], b[5], b[3], b[1]], [&a6, &a4, &a2, &id]);
    let u = a * &(&(&a6 * &u_hi) + &u_lo);

    let v_hi = lin([b[12], b[10], b[8], 0.0], [&a6, &a4, &a2, &id]);
    let v_lo = lin([b[6], b[4], b[2], b[0]], [&a6, &a4, &a2, &id]);
    let v = &(&a6 * &v_hi) + &v_lo;

    pade_ratio(&u, &v)
}

/// Solves `Q X = P` by LU with partial pivoting.
fn lu_solve(q: &ComplexMatrix, p: &ComplexMatrix) -> ComplexMatrix {
    let n = q.rows();
    let m = p.cols();
    let mut lu = q.clone();
    let mut x = p.clone();

    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap();
        if piv != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
            }
            for j in 0..m {
                let t = x[(k, j)];
                x[(k, j)] = x[(piv, j)];
                x[(piv, j)] = t;
            }
        }
        let d = lu[(k, k)];
        if d == ZERO {
            continue;
        }
        for i in k + 1..n {
            let f = lu[(i, k)] / d;
            if f == ZERO {
                continue;
            }
            lu[(i, k)] = f;
            for j in k + 1..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
            for j in 0..m {
                let t = x[(k, j)];
                x[(i, j)] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let d = lu[(k, k)];
        for j in 0..m {
            let mut s = x[(k, j)];
            for l in k + 1..n {
                s -= lu[(k, l)] * x[(l, j)];
            }
            x[(k, j)] = s / d;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eig::herm_eig;
    use crate::numerics::kron::{kron, kron_sum, l2_distance};
    use crate::numerics::matrix::I;
    use crate::numerics::random::{random_hermitian, random_matrix};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// exp(-i t H) through the spectral route, an independent oracle for normal matrices.
    fn expm_via_eig(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let sd = herm_eig(h).unwrap();
        let v = &sd.eigenvectors;
        let phases: Vec<Complex64> = sd.eigenvalues.iter().map(|&l| (-I * l * t).exp()).collect();
        &(v * &ComplexMatrix::from_diag(&phases)) * &v.adjoint()
    }

    /// Plain Taylor series with many terms; only trusted for small norms.
    fn expm_taylor(a: &ComplexMatrix) -> ComplexMatrix {
        let mut term = ComplexMatrix::identity(a.rows());
        let mut sum = term.clone();
        for k in 1..60 {
            term = (&term * a).scale_real(1.0 / k as f64);
            sum += &term;
        }
        sum
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(
            expm(&ComplexMatrix::zeros(3, 3)),
            ComplexMatrix::identity(3)
        );
    }

    #[test]
    fn exp_of_diagonal() {
        let a = ComplexMatrix::from_diag(&[I * std::f64::consts::PI, ZERO]);
        let e = expm(&a);
        assert!(e.approx_eq(&ComplexMatrix::from_real_diag(&[-1.0, 1.0]), 1e-12));
    }

    #[test]
    fn rotation_closed_form() {
        let theta = 0.3;
        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = expm(&x.scale(-I * theta));
        let (c, s) = (theta.cos(), theta.sin());
        let expected = ComplexMatrix::from_rows(&[
            vec![Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
            vec![Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
        ])
        .unwrap();
        assert!(e.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn matches_spectral_oracle_up_to_norm_50() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for d in [2usize, 3, 4, 8] {
            for target in [0.01, 0.2, 0.9, 2.0, 5.0, 20.0, 50.0] {
                let h = random_hermitian(&mut rng, d);
                let h = h.scale_real(target / h.norm_one());
                let e = expm(&h.scale(-I));
                let oracle = expm_via_eig(&h, 1.0);
                let rel = l2_distance(&e, &oracle).unwrap() / oracle.frobenius_norm();
                assert!(rel < 1e-10, "d={d} norm={target}: rel err {rel:e}");
            }
        }
    }

    #[test]
    fn matches_taylor_for_non_normal() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for target in [0.005, 0.1, 0.5, 1.5, 3.0] {
            let a = random_matrix(&mut rng, 4, 4);
            let a = a.scale_real(target / a.norm_one());
            let rel = l2_distance(&expm(&a), &expm_taylor(&a)).unwrap()
                / expm_taylor(&a).frobenius_norm();
            assert!(rel < 1e-13, "norm={target}: {rel:e}");
        }
    }

    #[test]
    fn kronecker_sum_exponential_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let d = rng.gen_range(1..=4);
            let a = random_matrix(&mut rng, d, d);
            let b = random_matrix(&mut rng, d, d);
            let lhs = expm(&kron_sum(&a, &b).unwrap());
            let rhs = kron(&expm(&a), &expm(&b));
            assert!(l2_distance(&lhs, &rhs).unwrap() < 1e-10 * rhs.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn semigroup_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 3, 3);
            let (s, t) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
            let lhs = expm(&a.scale_real(s + t));
            let rhs = &expm(&a.scale_real(s)) * &expm(&a.scale_real(t));
            assert!(l2_distance(&lhs, &rhs).unwrap() < 1e-10 * lhs.frobenius_norm().max(1.0));
        }
    }
}
