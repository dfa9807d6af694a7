mod common;

use std::collections::BTreeSet;

use common::{c, dense_expectation, dense_sum, dense_word, kron_all, letter_matrix, Dense};
use mcprep::config::{
    cisd_excitations, generate_cisd_configs, hamming, hartree_fock, ExcitationOp,
};
use mcprep::pauli::{sum_power, word_multiply};
use mcprep::sim::{
    evolve, exact_spectrum, expectation, hamiltonian_matrix, moments, pauli_decompose,
};
use mcprep::{OnConfig, PauliSum, StateVector};
use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn max_dev(a: &Dense, b: &Dense) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Jordan-Wigner annihilator on mode `p`: `Z` on modes below `p`, `|0><1|` on `p`.
fn annihilator(n: usize, p: usize) -> Dense {
    let lower = Dense::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let factors: Vec<Dense> = (0..n)
        .map(|q| match q.cmp(&p) {
            std::cmp::Ordering::Less => letter_matrix('Z'),
            std::cmp::Ordering::Equal => lower.clone(),
            std::cmp::Ordering::Greater => letter_matrix('I'),
        })
        .collect();
    kron_all(&factors)
}

fn random_excitation(rng: &mut impl Rng, n: usize) -> ExcitationOp {
    let rank = rng.gen_range(1..=2.min(n / 2));
    let mut modes: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(modes.as_mut_slice(), rng);
    let mut ann = modes[..rank].to_vec();
    let mut cre = modes[rank..2 * rank].to_vec();
    ann.sort_unstable();
    cre.sort_unstable();
    ExcitationOp::new(ann, cre).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn excitation_signs_match_dense_ladder_operators(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(2..=6);
        let op = random_excitation(&mut rng, n);
        let mut m = Dense::identity(1 << n, 1 << n);
        for &a in op.annihilate() {
            m = annihilator(n, a) * m;
        }
        for &cr in op.create() {
            m = annihilator(n, cr).adjoint() * m;
        }
        for b in 0..1u64 << n {
            let x = OnConfig::from_bits(b, n).unwrap();
            let col = m.column(x.index());
            match op.apply(&x).unwrap() {
                None => prop_assert!(col.iter().all(|z| z.norm() == 0.0)),
                Some((y, s)) => {
                    for (i, z) in col.iter().enumerate() {
                        let want = if i == y.index() { f64::from(s) } else { 0.0 };
                        prop_assert_eq!(*z, c(want, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn word_products_match_dense_products(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(1..=5);
        let (a, b) = (common::random_word(&mut rng, n), common::random_word(&mut rng, n));
        let (phase, w) = word_multiply(&a, &b).unwrap();
        prop_assert!(max_dev(&(dense_word(&a) * dense_word(&b)), &(dense_word(&w) * phase)) < 1e-15);
    }

    #[test]
    fn sums_and_powers_match_dense(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4);
        let h = common::random_hamiltonian(&mut rng, n, 6);
        let g = common::random_hamiltonian(&mut rng, n, 4);
        let hd = dense_sum(&h);
        prop_assert!(max_dev(&hamiltonian_matrix(&h).unwrap(), &hd) < 1e-14);
        prop_assert!(max_dev(&dense_sum(&h.multiply(&h).unwrap()), &(&hd * &hd)) < 1e-12);
        prop_assert!(h.multiply(&g).is_err() || max_dev(&dense_sum(&h.multiply(&g).unwrap()), &(&hd * dense_sum(&g))) < 1e-12);
        prop_assert!(max_dev(&dense_sum(&h.add(&g).unwrap()), &(&hd + dense_sum(&g))) < 1e-14);
        let h3 = sum_power(&h, 3).unwrap();
        prop_assert!(max_dev(&dense_sum(&h3), &(&hd * &hd * &hd)) < 1e-11);
    }

    #[test]
    fn pauli_decomposition_inverts_the_dense_matrix(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4);
        let h = common::random_hamiltonian(&mut rng, n, 8);
        let back = pauli_decompose(&dense_sum(&h)).unwrap();
        prop_assert!(max_dev(&dense_sum(&back), &dense_sum(&h)) < 1e-13);
    }

    #[test]
    fn moments_match_dense_powers(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(1..=6);
        let h = common::random_hamiltonian(&mut rng, n, 10);
        let psi = common::random_state(&mut rng, n);
        let m = moments(&psi, &h, 4).unwrap();
        let hd = dense_sum(&h);
        let mut p = Dense::identity(1 << n, 1 << n);
        for mk in &m {
            p = &p * &hd;
            let want = dense_expectation(&p, &psi);
            prop_assert!(want.im.abs() < 1e-10);
            prop_assert!((mk - want.re).abs() < 1e-9 * (1.0 + want.re.abs()));
        }
        prop_assert!((expectation(&psi, &h).unwrap() - m[0]).abs() < 1e-12);
    }

    #[test]
    fn evolution_matches_dense_exponential(seed in any::<u64>(), t in -3.0f64..3.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(1..=5);
        let h = common::random_hamiltonian(&mut rng, n, 8);
        let psi = common::random_state(&mut rng, n);
        let eig = SymmetricEigen::new(dense_sum(&h));
        let phases = eig.eigenvalues.map(|e| c(0.0, -e * t).exp());
        let u = &eig.eigenvectors * Dense::from_diagonal(&phases) * eig.eigenvectors.adjoint();
        let want = u * common::column(&psi);
        let got = evolve(&psi, &h, t).unwrap();
        let dev = got.amplitudes().iter().zip(want.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-9, "deviation {}", dev);
    }
}

#[test]
fn spectrum_matches_dense_eigenvalues() {
    let mut rng = StdRng::seed_from_u64(5);
    for n in 1..=5 {
        let h = common::random_hamiltonian(&mut rng, n, 12);
        let mut want: Vec<f64> = SymmetricEigen::new(dense_sum(&h))
            .eigenvalues
            .iter()
            .copied()
            .collect();
        want.sort_by(f64::total_cmp);
        let got = exact_spectrum(&h).unwrap().values;
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn cisd_space_matches_brute_force() {
    for n_orb in 1..=5 {
        for n_elec in (0..=2 * n_orb).step_by(2) {
            let n = 2 * n_orb;
            let hf = hartree_fock(n_orb, n_elec).unwrap();
            let alpha = |x: &OnConfig| (0..n).step_by(2).filter(|&q| x.get(q)).count();
            let brute: BTreeSet<OnConfig> = (0..1u64 << n)
                .map(|b| OnConfig::from_bits(b, n).unwrap())
                .filter(|x| {
                    x.weight() == n_elec && alpha(x) == alpha(&hf) && hamming(x, &hf).unwrap() <= 4
                })
                .collect();
            let got = generate_cisd_configs(n_orb, n_elec).unwrap();
            assert_eq!(got[0], hf);
            let set: BTreeSet<OnConfig> = got.iter().copied().collect();
            assert_eq!(set.len(), got.len(), "duplicates for {n_orb} orbitals");
            assert_eq!(set, brute, "{n_orb} orbitals, {n_elec} electrons");
            let images: Vec<OnConfig> = cisd_excitations(n_orb, n_elec)
                .unwrap()
                .iter()
                .map(|op| op.apply(&hf).unwrap().expect("excites the reference").0)
                .collect();
            assert_eq!(images.len(), brute.len() - 1);
            assert!(images.iter().all(|x| brute.contains(x) && *x != hf));
        }
    }
}

#[test]
fn number_operator_counts_particles() {
    let n = 4;
    let mut number = Dense::zeros(16, 16);
    for p in 0..n {
        let a = annihilator(n, p);
        number += a.adjoint() * a;
    }
    let h = PauliSum::from_terms(
        n,
        (0..n).flat_map(|q| {
            let mut z = vec!['I'; n];
            z[q] = 'Z';
            let w: String = z.into_iter().collect();
            [(0.5, "IIII".parse().unwrap()), (-0.5, w.parse().unwrap())]
        }),
    )
    .unwrap();
    assert!(max_dev(&number, &dense_sum(&h)) < 1e-15);
    let psi = StateVector::basis(&"1011".parse().unwrap()).unwrap();
    assert!((expectation(&psi, &h).unwrap() - 3.0).abs() < 1e-15);
}
