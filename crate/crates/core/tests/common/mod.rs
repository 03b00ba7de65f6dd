//! Reference implementations used only by tests. Nothing here calls into the
//! simulator's gate kernels: states are built from dense Kronecker-product
//! operators and costs are enumerated from the adjacency directly.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

/// Minimum of the depth-one triangle landscape on a 201 x 201 grid over
/// beta in [0, pi/2] and gamma in [0, 2pi], computed offline with an
/// independent numpy/scipy script (matrix exponentials of H_C and sum X).
pub const K3_DENSE_GRID_MIN: f64 = -1.9997777675124895;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matvec(a: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// `single` acting on qubit `q` of `n` (qubit 0 leftmost in the Kronecker product).
pub fn embed(single: &Matrix, q: usize, n: usize) -> Matrix {
    (0..n).fold(identity(1), |acc, k| {
        if k == q {
            kron(&acc, single)
        } else {
            kron(&acc, &identity(2))
        }
    })
}

/// `exp(-i beta X) = cos(beta) I - i sin(beta) X`.
pub fn mixer_factor(beta: f64) -> Matrix {
    let (co, si) = (beta.cos(), beta.sin());
    vec![vec![c(co, 0.0), c(0.0, -si)], vec![c(0.0, -si), c(co, 0.0)]]
}

/// Diagonal of `H_C = -1/2 sum_{i<j} A_ij (I - Z_i Z_j)` from Pauli-Z eigenvalues.
pub fn cost_hamiltonian_diagonal(adjacency: &[Vec<f64>]) -> Vec<f64> {
    let n = adjacency.len();
    let z = |k: usize, q: usize| if (k >> (n - 1 - q)) & 1 == 0 { 1.0 } else { -1.0 };
    (0..1usize << n)
        .map(|k| {
            let mut h = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    h += -0.5 * adjacency[i][j] * (1.0 - z(k, i) * z(k, j));
                }
            }
            h
        })
        .collect()
}

/// Cost of bit string `bits` by direct edge enumeration, `-sum A_ij (x_i + x_j - 2 x_i x_j)`.
pub fn enumerated_cost(adjacency: &[Vec<f64>], bits: &[u8]) -> f64 {
    let n = adjacency.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let (xi, xj) = (bits[i] as f64, bits[j] as f64);
            total += adjacency[i][j] * (xi + xj - 2.0 * xi * xj);
        }
    }
    -total
}

pub fn bits_of(k: usize, n: usize) -> Vec<u8> {
    (0..n).map(|q| ((k >> (n - 1 - q)) & 1) as u8).collect()
}

/// `U_B(beta_p) U_C(gamma_p) ... U_B(beta_1) U_C(gamma_1) |+...+>` with
/// `U_C = exp(-i gamma H_C)` and `U_B = prod_q exp(-i beta X_q)` as dense operators.
pub fn ansatz_state(adjacency: &[Vec<f64>], betas: &[f64], gammas: &[f64]) -> Vec<Complex64> {
    let n = adjacency.len();
    let dim = 1usize << n;
    let hc = cost_hamiltonian_diagonal(adjacency);
    let mut psi = vec![c(1.0 / (dim as f64).sqrt(), 0.0); dim];
    for (&beta, &gamma) in betas.iter().zip(gammas) {
        for (a, h) in psi.iter_mut().zip(&hc) {
            *a *= Complex64::from_polar(1.0, -gamma * h);
        }
        for q in 0..n {
            psi = matvec(&embed(&mixer_factor(beta), q, n), &psi);
        }
    }
    psi
}

pub fn populations(psi: &[Complex64]) -> Vec<f64> {
    psi.iter().map(|a| a.norm_sqr()).collect()
}

/// `sum_x C(x) p(x)` with enumerated costs.
pub fn expected_cost(adjacency: &[Vec<f64>], pops: &[f64]) -> f64 {
    let n = adjacency.len();
    pops.iter()
        .enumerate()
        .map(|(k, p)| enumerated_cost(adjacency, &bits_of(k, n)) * p)
        .sum()
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Flip-pattern readout matrix `M[x][s] = I_{s xor x}`.
pub fn readout_matrix(intensities: &[f64]) -> Vec<Vec<f64>> {
    let dim = intensities.len();
    (0..dim)
        .map(|x| (0..dim).map(|s| intensities[s ^ x]).collect())
        .collect()
}

/// Brute-force minimum of the depth-one landscape on a `points x points`
/// grid spanning beta in [0, pi/2] and gamma in [0, 2pi].
pub fn dense_grid_min(adjacency: &[Vec<f64>], points: usize) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points {
        let beta = std::f64::consts::FRAC_PI_2 * i as f64 / (points - 1) as f64;
        for j in 0..points {
            let gamma = 2.0 * std::f64::consts::PI * j as f64 / (points - 1) as f64;
            let pops = populations(&ansatz_state(adjacency, &[beta], &[gamma]));
            best = best.min(expected_cost(adjacency, &pops));
        }
    }
    best
}
