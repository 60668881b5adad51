//! Dense real-symmetric matrices with an in-repo Jacobi eigensolver, used to
//! exercise the genuinely non-commutative claims on actual operator sums.

use std::io::{Read, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rv::RegVarFunction;
use crate::spectra::SpectralSequence;

/// Hard cap on matrix order; the solver is O(n^3) per sweep.
pub const DEFAULT_ORDER_CAP: usize = 512;

const MAX_SWEEPS: usize = 64;

/// Counter-based generator seeded from a single 64-bit value; every harness
/// run is reproducible from its seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Validates exact symmetry; prefer [`SymmetricMatrix::from_fn`] when
    /// generating entries.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || n > DEFAULT_ORDER_CAP {
            return Err(Error::domain(format!(
                "order {n} outside 1..={DEFAULT_ORDER_CAP}"
            )));
        }
        if data.len() != n * n {
            return Err(Error::domain(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::domain(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(SymmetricMatrix { n, data })
    }

    /// Builds from the upper triangle of `f`, mirroring it exactly.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if n == 0 || n > DEFAULT_ORDER_CAP {
            return Err(Error::domain(format!(
                "order {n} outside 1..={DEFAULT_ORDER_CAP}"
            )));
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(SymmetricMatrix { n, data })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::domain("order mismatch"));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SymmetricMatrix { n: self.n, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::domain("order mismatch"));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(SymmetricMatrix { n: self.n, data })
    }

    pub fn scale(&self, c: f64) -> Self {
        SymmetricMatrix {
            n: self.n,
            data: self.data.iter().map(|a| c * a).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Q A Q^T for a dense square Q in row-major layout; the result is
    /// symmetrized to kill round-off drift.
    pub fn conjugate(&self, q: &[f64]) -> Result<Self> {
        let n = self.n;
        if q.len() != n * n {
            return Err(Error::domain("Q order mismatch"));
        }
        // B = Q A
        let mut b = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let qik = q[i * n + k];
                if qik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    b[i * n + j] += qik * self.data[k * n + j];
                }
            }
        }
        // C = B Q^T
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += b[i * n + k] * q[j * n + k];
                }
                c[i * n + j] = acc;
            }
        }
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (c[i * n + j] + c[j * n + i]);
                c[i * n + j] = v;
                c[j * n + i] = v;
            }
        }
        Ok(SymmetricMatrix { n, data: c })
    }

    /// Binary dump: order as little-endian u64, then n^2 little-endian f64.
    pub fn write_binary(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for x in &self.data {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary(r: &mut impl Read) -> Result<Self> {
        let mut buf8 = [0u8; 8];
        r.read_exact(&mut buf8)?;
        let n = u64::from_le_bytes(buf8) as usize;
        if n == 0 || n > DEFAULT_ORDER_CAP {
            return Err(Error::domain(format!("bad stored order {n}")));
        }
        let mut data = vec![0.0; n * n];
        for x in &mut data {
            r.read_exact(&mut buf8)?;
            *x = f64::from_le_bytes(buf8);
        }
        SymmetricMatrix::new(n, data)
    }
}

/// Output of one eigensolve: eigenvalues split by sign and the matching
/// singular values, plus the accumulated rotation matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    /// all eigenvalues, descending by modulus (ties positive first)
    pub eigenvalues: Vec<f64>,
    pub signed: SpectralSequence,
    pub singular: SpectralSequence,
    /// row-major orthogonal V with A = V diag(raw) V^T
    pub vectors: Vec<f64>,
    /// eigenvalues in the column order of `vectors`
    pub raw: Vec<f64>,
}

/// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
/// 1e-12 of the total.
pub fn jacobi_eigen(a: &SymmetricMatrix) -> Result<EigenDecomp> {
    let n = a.order();
    let norm = a.frobenius_norm();
    let mut m = a.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    if norm > 0.0 {
        let tol = 1e-12 * norm;
        // entries this small cannot push the off mass back above tol even if
        // every pair carried one
        let skip = tol / (10.0 * n as f64);
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            if off_norm(&m, n) <= tol {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = m[p * n + q];
                    if apq.abs() <= skip {
                        continue;
                    }
                    let app = m[p * n + p];
                    let aqq = m[q * n + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    rotate(&mut m, &mut v, n, p, q, c, s);
                }
            }
        }
        if !converged && off_norm(&m, n) > tol {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let raw: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut eigenvalues = raw.clone();
    eigenvalues.sort_by(|x, y| {
        y.abs()
            .partial_cmp(&x.abs())
            .expect("finite eigenvalues")
            .then_with(|| y.partial_cmp(x).expect("finite eigenvalues"))
    });

    let mut plus: Vec<f64> = eigenvalues.iter().filter(|&&x| x > 0.0).cloned().collect();
    let mut minus: Vec<f64> = eigenvalues
        .iter()
        .filter(|&&x| x < 0.0)
        .map(|x| -x)
        .collect();
    plus.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    minus.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    // zero eigenvalues pad the plus channel so the total length matches n
    let zeros = n - plus.len() - minus.len();
    plus.extend(std::iter::repeat(0.0).take(zeros));

    let singular: Vec<f64> = eigenvalues.iter().map(|x| x.abs()).collect();

    Ok(EigenDecomp {
        signed: SpectralSequence::eigen_signed(plus, minus)?,
        singular: SpectralSequence::singular(singular)?,
        eigenvalues,
        vectors: v,
        raw,
    })
}

fn off_norm(m: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[i * n + j] * m[i * n + j];
            }
        }
    }
    acc.sqrt()
}

fn rotate(m: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        let mkp = m[k * n + p];
        let mkq = m[k * n + q];
        m[k * n + p] = c * mkp - s * mkq;
        m[k * n + q] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[p * n + k];
        let mqk = m[q * n + k];
        m[p * n + k] = c * mpk - s * mqk;
        m[q * n + k] = s * mpk + c * mqk;
    }
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

/// Reconstruction residual ||A - V diag(raw) V^T||_F; the solver contract is
/// residual <= 1e-9 ||A||_F.
pub fn reconstruction_residual(a: &SymmetricMatrix, d: &EigenDecomp) -> f64 {
    let n = a.order();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut rec = 0.0;
            for k in 0..n {
                rec += d.vectors[i * n + k] * d.raw[k] * d.vectors[j * n + k];
            }
            let diff = a.get(i, j) - rec;
            acc += diff * diff;
        }
    }
    acc.sqrt()
}

/// Random orthogonal matrix (row-major) from Householder QR of a seeded
/// Gaussian matrix, with the R diagonal forced positive.
pub fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut a = vec![0.0f64; n * n];
    for x in a.iter_mut() {
        *x = rng.sample(StandardNormal);
    }
    // Householder QR, accumulating Q explicitly
    let mut q = vec![0.0f64; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let mut v = vec![0.0f64; n];
    for col in 0..n {
        let mut norm = 0.0;
        for row in col..n {
            norm += a[row * n + col] * a[row * n + col];
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[col * n + col] > 0.0 { -norm } else { norm };
        let mut vnorm2 = 0.0;
        for row in col..n {
            v[row] = a[row * n + col] - if row == col { alpha } else { 0.0 };
            vnorm2 += v[row] * v[row];
        }
        if vnorm2 == 0.0 {
            continue;
        }
        // A <- (I - 2 v v^T / |v|^2) A
        for j in col..n {
            let mut dot = 0.0;
            for row in col..n {
                dot += v[row] * a[row * n + j];
            }
            let f = 2.0 * dot / vnorm2;
            for row in col..n {
                a[row * n + j] -= f * v[row];
            }
        }
        // Q <- Q (I - 2 v v^T / |v|^2)
        for i in 0..n {
            let mut dot = 0.0;
            for row in col..n {
                dot += q[i * n + row] * v[row];
            }
            let f = 2.0 * dot / vnorm2;
            for row in col..n {
                q[i * n + row] -= f * v[row];
            }
        }
    }
    // force diag(R) > 0 so Q is unique given the input
    for col in 0..n {
        if a[col * n + col] < 0.0 {
            for i in 0..n {
                q[i * n + col] = -q[i * n + col];
            }
        }
    }
    q
}

/// Planted-profile matrix Q D Q^T.  With both channels active the diagonal
/// interleaves +c_plus g(j) and -c_minus g(j); with one channel it carries
/// the plain profile of that sign.
pub fn plant_profile(
    g: &RegVarFunction,
    n: usize,
    c_plus: f64,
    c_minus: f64,
    seed: u64,
) -> Result<SymmetricMatrix> {
    if n < 2 {
        return Err(Error::domain("need n >= 2"));
    }
    let mut d = vec![0.0f64; n];
    if c_minus == 0.0 {
        for (j, x) in d.iter_mut().enumerate() {
            *x = c_plus * g.eval(j as f64);
        }
    } else if c_plus == 0.0 {
        for (j, x) in d.iter_mut().enumerate() {
            *x = -c_minus * g.eval(j as f64);
        }
    } else {
        for (slot, x) in d.iter_mut().enumerate() {
            let j = (slot / 2) as f64;
            *x = if slot % 2 == 0 {
                c_plus * g.eval(j)
            } else {
                -c_minus * g.eval(j)
            };
        }
    }
    let mut rng = rng_from_seed(seed);
    let q = random_orthogonal(n, &mut rng);
    SymmetricMatrix::diagonal(&d)?.conjugate(&q)
}

/// Eigen data of Q T Q^T - T for a seeded random orthogonal Q; the partial
/// sums of this spectrum are the commutator diagnostic's input.
pub fn commutator_test(t: &SymmetricMatrix, seed: u64) -> Result<SpectralSequence> {
    Ok(jacobi_eigen(&commutator_matrix(t, seed)?)?.signed)
}

pub fn commutator_matrix(t: &SymmetricMatrix, seed: u64) -> Result<SymmetricMatrix> {
    let mut rng = rng_from_seed(seed);
    let q = random_orthogonal(t.order(), &mut rng);
    t.conjugate(&q)?.sub(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_eigensolve() {
        let a = SymmetricMatrix::identity(3).unwrap();
        let d = jacobi_eigen(&a).unwrap();
        let (plus, minus) = d.signed.signed_parts().unwrap();
        assert_eq!(plus, &[1.0, 1.0, 1.0]);
        assert!(minus.is_empty());
    }

    #[test]
    fn small_diagonal_example() {
        let a = SymmetricMatrix::diagonal(&[3.0, -2.0]).unwrap();
        let d = jacobi_eigen(&a).unwrap();
        let (plus, minus) = d.signed.signed_parts().unwrap();
        assert_eq!(plus, &[3.0]);
        assert_eq!(minus, &[2.0]);
        assert_eq!(d.singular.singular_values().unwrap(), &[3.0, 2.0]);
    }

    #[test]
    fn rejects_asymmetric_and_oversized() {
        assert!(SymmetricMatrix::new(2, vec![1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(SymmetricMatrix::identity(DEFAULT_ORDER_CAP + 1).is_err());
    }

    /// Independent oracle: shifted inverse iteration with a dense LU solve.
    fn inverse_iteration(a: &SymmetricMatrix, shift: f64, seed: u64) -> f64 {
        let n = a.order();
        let mut m: Vec<f64> = a.data().to_vec();
        for i in 0..n {
            m[i * n + i] -= shift;
        }
        // LU with partial pivoting
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| m[i * n + col].abs().partial_cmp(&m[j * n + col].abs()).unwrap())
                .unwrap();
            if piv != col {
                for j in 0..n {
                    m.swap(col * n + j, piv * n + j);
                }
                perm.swap(col, piv);
            }
            let d = m[col * n + col];
            for row in col + 1..n {
                let f = m[row * n + col] / d;
                m[row * n + col] = f;
                for j in col + 1..n {
                    m[row * n + j] -= f * m[col * n + j];
                }
            }
        }
        let solve = |b: &[f64]| -> Vec<f64> {
            let mut y = vec![0.0; n];
            for i in 0..n {
                let mut acc = b[perm[i]];
                for j in 0..i {
                    acc -= m[i * n + j] * y[j];
                }
                y[i] = acc;
            }
            for i in (0..n).rev() {
                for j in i + 1..n {
                    let yj = y[j];
                    y[i] -= m[i * n + j] * yj;
                }
                y[i] /= m[i * n + i];
            }
            y
        };
        let mut rng = rng_from_seed(seed);
        let mut x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..60 {
            let y = solve(&x);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            x = y.iter().map(|v| v / norm).collect();
        }
        // Rayleigh quotient
        let mut ax = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                ax[i] += a.get(i, j) * x[j];
            }
        }
        x.iter().zip(&ax).map(|(u, v)| u * v).sum()
    }

    #[test]
    fn random_matrix_against_inverse_iteration() {
        let mut rng = rng_from_seed(2024);
        let a = SymmetricMatrix::from_fn(64, |_, _| rng.sample(StandardNormal)).unwrap();
        let d = jacobi_eigen(&a).unwrap();
        assert!(reconstruction_residual(&a, &d) <= 1e-9 * a.frobenius_norm());
        // spot check 5 well-separated eigenvalues
        for idx in [0usize, 5, 17, 33, 60] {
            let lam = d.eigenvalues[idx];
            let refined = inverse_iteration(&a, lam + 1e-4, 7 + idx as u64);
            assert!(
                (refined - lam).abs() <= 1e-8 * a.frobenius_norm(),
                "idx {idx}: {refined} vs {lam}"
            );
        }
    }

    #[test]
    fn orthogonal_matrices_are_orthogonal() {
        let n = 48;
        let mut rng = rng_from_seed(99);
        let q = random_orthogonal(n, &mut rng);
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| q[i * n + k] * q[j * n + k]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12, "({i},{j}) dot {dot}");
            }
        }
    }

    #[test]
    fn plant_profile_examples() {
        let g = RegVarFunction::power_log(-1.0, 0.0);
        // single-channel plant keeps the plain profile
        let a = plant_profile(&g, 4, 1.0, 0.0, 3).unwrap();
        let d = jacobi_eigen(&a).unwrap();
        let (plus, minus) = d.signed.signed_parts().unwrap();
        assert!(minus.iter().all(|&x| x < 1e-10));
        for (j, &l) in plus.iter().take(4 - minus.len()).enumerate() {
            assert!((l - g.eval(j as f64)).abs() < 1e-10, "j={j}");
        }

        // determinism: same seed, bitwise-identical matrices
        let b = plant_profile(&g, 16, 1.0, 0.5, 42).unwrap();
        let c = plant_profile(&g, 16, 1.0, 0.5, 42).unwrap();
        assert_eq!(b.data(), c.data());
        let e = plant_profile(&g, 16, 1.0, 0.5, 43).unwrap();
        assert_ne!(b.data(), e.data());
    }

    #[test]
    fn planted_channels_recover_their_constants() {
        let g = RegVarFunction::power_log(-1.0, 0.0);
        let (cp, cm) = (2.0, 0.75);
        let a = plant_profile(&g, 64, cp, cm, 11).unwrap();
        let d = jacobi_eigen(&a).unwrap();
        let (plus, minus) = d.signed.signed_parts().unwrap();
        // eigenvalues are exactly the planted diagonal up to solver tolerance
        for (j, &l) in plus.iter().take(16).enumerate() {
            assert!((l - cp * g.eval(j as f64)).abs() < 1e-9, "plus j={j}");
        }
        for (j, &l) in minus.iter().take(16).enumerate() {
            assert!((l - cm * g.eval(j as f64)).abs() < 1e-9, "minus j={j}");
        }
    }

    #[test]
    fn commutator_of_identity_rotation_is_zero() {
        let g = RegVarFunction::power_log(-1.0, 0.0);
        let t = plant_profile(&g, 8, 1.0, 0.0, 5).unwrap();
        let c = t.conjugate(&SymmetricMatrix::identity(8).unwrap().data().to_vec())
            .unwrap()
            .sub(&t)
            .unwrap();
        assert!(c.frobenius_norm() < 1e-14);
    }

    #[test]
    fn permuted_diagonal_partial_sums_telescope() {
        let g = RegVarFunction::power_log(-1.0, 0.0);
        let n = 16;
        let t = SymmetricMatrix::diagonal(
            &(0..n).map(|j| g.eval(j as f64)).collect::<Vec<_>>(),
        )
        .unwrap();
        // cyclic permutation as an orthogonal matrix
        let mut p = vec![0.0; n * n];
        for i in 0..n {
            p[i * n + (i + 1) % n] = 1.0;
        }
        let c = t.conjugate(&p).unwrap().sub(&t).unwrap();
        let d = jacobi_eigen(&c).unwrap();
        let merged = d.signed.merged_signed();
        let mut acc: f64 = 0.0;
        let mut worst: f64 = 0.0;
        for &x in &merged {
            acc += x;
            worst = worst.max(acc.abs());
        }
        // differences of a permuted diagonal telescope to O(g(0))
        assert!(worst <= 2.0 * g.eval(0.0) + 1e-9, "worst {worst}");
    }

    #[test]
    fn binary_round_trip() {
        let mut rng = rng_from_seed(1);
        let a = SymmetricMatrix::from_fn(9, |_, _| rng.sample(StandardNormal)).unwrap();
        let mut buf = Vec::new();
        a.write_binary(&mut buf).unwrap();
        let b = SymmetricMatrix::read_binary(&mut &buf[..]).unwrap();
        assert_eq!(a.data(), b.data());
    }
}
