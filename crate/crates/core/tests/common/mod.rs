#![allow(dead_code)]

use mcprep::config::OnConfig;
use mcprep::StateSpec;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn cfg(s: &str) -> OnConfig {
    s.parse().unwrap()
}

pub fn spec(entries: &[(f64, &str)]) -> StateSpec {
    let n = entries[0].1.len();
    StateSpec::normalized(n, entries.iter().map(|(c, s)| (*c, cfg(s))).collect()).unwrap()
}

/// Random valid spec: `n` in `n_range`, up to `d_max` distinct configurations of
/// one Hamming weight, coefficients of magnitude at least 0.05 with random signs.
pub fn random_spec(
    rng: &mut impl Rng,
    n_range: std::ops::RangeInclusive<usize>,
    d_max: usize,
) -> StateSpec {
    let n = rng.gen_range(n_range);
    let w = rng.gen_range(0..=n);
    let mut pool: Vec<u64> = (0u64..1 << n)
        .filter(|i| i.count_ones() as usize == w)
        .collect();
    pool.shuffle(rng);
    let d = rng.gen_range(1..=d_max.min(pool.len()));
    let entries: Vec<(f64, OnConfig)> = pool[..d]
        .iter()
        .map(|&b| {
            let mag = rng.gen_range(0.05..1.0);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            (sign * mag, OnConfig::from_bits(b, n).unwrap())
        })
        .collect();
    StateSpec::normalized(n, entries).unwrap()
}

/// The four printed 90° coefficients of the 4-qubit example.
#[allow(clippy::approx_constant)]
pub fn four_qubit_90() -> StateSpec {
    spec(&[
        (-0.00009, "1100"),
        (0.70710, "1001"),
        (0.70712, "0110"),
        (0.00007, "0011"),
    ])
}

/// The six printed 8-qubit rows with their GR and SSP ZZMax counts.
pub fn table_rows() -> Vec<(StateSpec, usize, usize)> {
    let closed = |c: [f64; 4]| {
        spec(&[
            (c[0], "11110000"),
            (c[1], "11001100"),
            (c[2], "10011001"),
            (c[3], "01100110"),
        ])
    };
    vec![
        (closed([0.9690, -0.2345, 0.0546, 0.0547]), 128, 17),
        (closed([0.9683, -0.2380, 0.0533, 0.0534]), 128, 17),
        (closed([0.9617, -0.2648, 0.0503, 0.0503]), 128, 17),
        (closed([0.9354, -0.3481, 0.0441, 0.0441]), 128, 17),
        (
            spec(&[
                (0.8281, "11110000"),
                (-0.5522, "11001100"),
                (-0.0681, "10011100"),
                (0.0681, "01101100"),
            ]),
            40,
            13,
        ),
        (
            spec(&[
                (0.7044, "11100100"),
                (0.7044, "11011000"),
                (0.0615, "10110100"),
                (0.0615, "01111000"),
            ]),
            32,
            11,
        ),
    ]
}

pub fn within(value: usize, target: usize, rel: f64) -> bool {
    (value as f64 - target as f64).abs() <= rel * target as f64
}

use mcprep::{PauliSum, PauliWord, StateVector};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type Dense = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn kron_all(factors: &[Dense]) -> Dense {
    factors
        .iter()
        .fold(Dense::identity(1, 1), |acc, f| acc.kronecker(f))
}

pub fn letter_matrix(l: char) -> Dense {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match l {
        'I' => Dense::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => Dense::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => Dense::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => Dense::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("bad letter {l}"),
    }
}

/// Kronecker product with qubit 0 as the leftmost factor.
pub fn dense_word(w: &PauliWord) -> Dense {
    let letters: Vec<Dense> = w.to_string().chars().map(letter_matrix).collect();
    kron_all(&letters)
}

pub fn dense_sum(h: &PauliSum) -> Dense {
    let d = 1 << h.n_qubits();
    h.terms().fold(Dense::zeros(d, d), |acc, (w, k)| {
        acc + dense_word(w) * c(k, 0.0)
    })
}

pub fn random_word(rng: &mut impl Rng, n: usize) -> PauliWord {
    let s: String = (0..n)
        .map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)])
        .collect();
    s.parse().unwrap()
}

pub fn random_hamiltonian(rng: &mut impl Rng, n: usize, terms: usize) -> PauliSum {
    let t = (0..terms).map(|_| (rng.gen_range(-1.0..1.0), random_word(rng, n)));
    PauliSum::from_terms(n, t).unwrap()
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
    let amps = (0..1 << n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(n, amps).unwrap()
}

pub fn column(psi: &StateVector) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_column_slice(psi.amplitudes())
}

/// Expectation of a dense operator in a state.
pub fn dense_expectation(m: &Dense, psi: &StateVector) -> Complex64 {
    let v = column(psi);
    (v.adjoint() * m * &v)[(0, 0)]
}

/// Real symmetric Hamiltonian with random couplings inside each block of
/// configurations and random diagonal entries on all other basis states, so
/// every block spans an invariant subspace.
pub fn block_hamiltonian(rng: &mut impl Rng, n: usize, blocks: &[Vec<OnConfig>]) -> PauliSum {
    let d = 1 << n;
    let mut m = Dense::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = c(rng.gen_range(-2.0..2.0), 0.0);
    }
    for block in blocks {
        for (a, x) in block.iter().enumerate() {
            for y in &block[a + 1..] {
                let v = c(rng.gen_range(-1.0..1.0), 0.0);
                m[(x.index(), y.index())] = v;
                m[(y.index(), x.index())] = v;
            }
        }
    }
    mcprep::sim::pauli_decompose(&m).unwrap()
}

/// Random real symmetric Hamiltonian that conserves Hamming weight.
pub fn particle_conserving_hamiltonian(rng: &mut impl Rng, n: usize) -> PauliSum {
    let sectors: Vec<Vec<OnConfig>> = (0..=n).map(|w| mcprep::sim::sector_configs(n, w)).collect();
    block_hamiltonian(rng, n, &sectors)
}

pub fn cfgs(list: &[&str]) -> Vec<OnConfig> {
    list.iter().map(|s| cfg(s)).collect()
}
