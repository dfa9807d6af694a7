use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use crate::config::OnConfig;
use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliWord};

/// Largest register for the full spectrum. Registers above
/// [`MAX_DIRECT_QUBITS`] are only handled when `H` conserves Hamming weight,
/// which splits the matrix into sector blocks.
pub const MAX_DENSE_QUBITS: usize = 14;
const MAX_DIRECT_QUBITS: usize = 11;
/// Largest subspace dimension accepted by [`subspace_diag`].
const MAX_SUBSPACE_DIM: usize = 1 << MAX_DIRECT_QUBITS;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Eigenvectors matching `values`, in the basis the spectrum was computed in.
    pub vectors: Vec<Vec<Complex64>>,
}

impl Spectrum {
    pub fn ground_energy(&self) -> f64 {
        self.values[0]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn hermitian_eigen(m: DMatrix<Complex64>) -> Result<Spectrum> {
    let dev = (&m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if dev > 1e-9 {
        return Err(Error::NotSymmetric(dev));
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    Ok(Spectrum {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect(),
    })
}

/// Dense matrix of `H` in the computational basis.
pub fn hamiltonian_matrix(h: &PauliSum) -> Result<DMatrix<Complex64>> {
    let n = h.n_qubits();
    if n > MAX_DIRECT_QUBITS {
        return Err(Error::DimensionOverflow(n, MAX_DIRECT_QUBITS));
    }
    let dim = 1usize << n;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for (w, c) in h.terms() {
        for j in 0..dim {
            let (ph, i) = w.apply_basis(j as u64);
            m[(i as usize, j)] += ph * c;
        }
    }
    Ok(m)
}

/// Pauli expansion `Σ_P Tr(P M)/2^n · P` of a Hermitian matrix.
pub fn pauli_decompose(m: &DMatrix<Complex64>) -> Result<PauliSum> {
    let dim = m.nrows();
    if dim != m.ncols() || !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!(
            "{}x{} is not a register operator",
            dim,
            m.ncols()
        )));
    }
    let n = dim.trailing_zeros() as usize;
    if n > 8 {
        return Err(Error::DimensionOverflow(n, 8));
    }
    let mut h = PauliSum::new(n);
    for x in 0..dim as u64 {
        for z in 0..dim as u64 {
            let w = PauliWord::from_masks(n, x, z)?;
            let tr: Complex64 = (0..dim as u64)
                .map(|i| {
                    let (ph, j) = w.apply_basis(i);
                    ph * m[(i as usize, j as usize)]
                })
                .sum();
            let c = tr / dim as f64;
            if c.im.abs() > 1e-10 {
                return Err(Error::NotSymmetric(c.im.abs()));
            }
            h.add_term(c.re, w)?;
        }
    }
    h.simplify();
    Ok(h)
}

/// All configurations of `n` qubits with Hamming weight `w`, ascending.
pub fn sector_configs(n: usize, w: usize) -> Vec<OnConfig> {
    (0u64..(1u64 << n))
        .filter(|i| i.count_ones() as usize == w)
        .map(|i| OnConfig::from_bits(i, n).expect("in range"))
        .collect()
}

fn conserves_weight(h: &PauliSum) -> bool {
    // Terms sharing an X mask combine into one operator; it preserves weight
    // iff every surviving matrix element connects equal-weight states.
    let mut by_x: BTreeMap<u64, Vec<(crate::pauli::PauliWord, f64)>> = BTreeMap::new();
    for (w, c) in h.terms() {
        by_x.entry(w.x_mask()).or_default().push((*w, c));
    }
    let n = h.n_qubits();
    for (x, group) in by_x {
        if x == 0 {
            continue;
        }
        for j in 0u64..(1u64 << n) {
            let i = j ^ x;
            if i.count_ones() == j.count_ones() {
                continue;
            }
            let amp: Complex64 = group.iter().map(|(w, c)| w.apply_basis(j).0 * *c).sum();
            if amp.norm() > 1e-12 {
                return false;
            }
        }
    }
    true
}

/// Full ascending spectrum of `H` with eigenvectors in the computational basis.
pub fn exact_spectrum(h: &PauliSum) -> Result<Spectrum> {
    let n = h.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::DimensionOverflow(n, MAX_DENSE_QUBITS));
    }
    if n <= MAX_DIRECT_QUBITS.min(8) || (n <= MAX_DIRECT_QUBITS && !conserves_weight(h)) {
        return hermitian_eigen(hamiltonian_matrix(h)?);
    }
    if !conserves_weight(h) {
        return Err(Error::DimensionOverflow(n, MAX_DIRECT_QUBITS));
    }
    let dim = 1usize << n;
    let mut pairs: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(dim);
    for w in 0..=n {
        let configs = sector_configs(n, w);
        let block = subspace_diag(h, &configs)?;
        for (e, v) in block.values.into_iter().zip(block.vectors) {
            let mut full = vec![ZERO; dim];
            for (x, a) in configs.iter().zip(v) {
                full[x.index()] = a;
            }
            pairs.push((e, full));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(Spectrum { values, vectors })
}

/// Spectrum of `H` restricted to the span of `configs`; eigenvectors are
/// coordinates in that basis.
pub fn subspace_diag(h: &PauliSum, configs: &[OnConfig]) -> Result<Spectrum> {
    if configs.is_empty() {
        return Err(Error::InvalidState("empty configuration subspace".into()));
    }
    if configs.len() > MAX_SUBSPACE_DIM {
        return Err(Error::DimensionOverflow(configs.len(), MAX_SUBSPACE_DIM));
    }
    for x in configs {
        if x.len() != h.n_qubits() {
            return Err(Error::LengthMismatch(h.n_qubits(), x.len()));
        }
    }
    let d = configs.len();
    let mut m = DMatrix::from_element(d, d, ZERO);
    for a in 0..d {
        for b in 0..d {
            m[(a, b)] = h.matrix_element(configs[a].bits(), configs[b].bits());
        }
    }
    hermitian_eigen(m)
}

/// `(E_min, E_max)` of `H`, exact for registers up to the dense limit and from
/// a fully reorthogonalized Lanczos iteration beyond it.
pub fn spectral_range(h: &PauliSum) -> Result<(f64, f64)> {
    let n = h.n_qubits();
    if n <= 8 {
        let s = exact_spectrum(h)?;
        return Ok((s.values[0], *s.values.last().unwrap()));
    }
    if n > super::MAX_SIM_QUBITS {
        return Err(Error::DimensionOverflow(n, super::MAX_SIM_QUBITS));
    }
    let dim = 1usize << n;
    let steps = dim.min(160);
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = |v: &[Complex64]| v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let nv = norm(&v);
    v.iter_mut().for_each(|a| *a /= nv);
    let mut basis = vec![v];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for k in 0..steps {
        let mut w = vec![ZERO; dim];
        h.apply_into(&basis[k], &mut w);
        let a: Complex64 = basis[k].iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
        alpha.push(a.re);
        for b in &basis {
            let p: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
            w.iter_mut().zip(b).for_each(|(y, x)| *y -= p * x);
        }
        let bn = norm(&w);
        if bn < 1e-10 || k + 1 == steps {
            break;
        }
        beta.push(bn);
        w.iter_mut().for_each(|a| *a /= bn);
        basis.push(w);
    }
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let e = SymmetricEigen::new(t).eigenvalues;
    let lo = e.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}
