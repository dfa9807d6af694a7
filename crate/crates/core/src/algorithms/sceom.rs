use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::circuit::{compile, count_resources, Circuit, Gate, GateSet, ResourceCount};
use crate::config::{hamming, ExcitationOp, OnConfig, StateSpec};
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::prep::PrepMethod;
use crate::sim::{expectation, prepare};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SceomOptions {
    /// Method preparing the two-configuration states of off-diagonal elements.
    pub method: PrepMethod,
    /// Gate set the per-element circuits are compiled to for resource counts.
    pub gate_set: GateSet,
}

impl Default for SceomOptions {
    fn default() -> Self {
        Self {
            method: PrepMethod::Ssp,
            gate_set: GateSet::ZzNative,
        }
    }
}

/// Resources of the circuit behind one M-matrix element.
#[derive(Clone, Debug, Serialize)]
pub struct ElementReport {
    pub i: usize,
    pub j: usize,
    /// Hamming distance between the two excited configurations (0 on the diagonal).
    pub hamming: usize,
    /// Compiled preparation circuit alone.
    pub prep: ResourceCount,
    /// Compiled preparation followed by the ansatz.
    pub total: ResourceCount,
}

#[derive(Clone, Debug, Serialize)]
pub struct MMatrix {
    /// `<HF| U† H U |HF>`.
    pub e_gr: f64,
    pub m: Vec<Vec<f64>>,
    /// Excited configurations `x_I` and their fermionic signs.
    pub configs: Vec<OnConfig>,
    pub signs: Vec<i8>,
    pub elements: Vec<ElementReport>,
}

impl MMatrix {
    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// Largest `|M_IJ - M_JI|`.
    pub fn asymmetry(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| (self.m[i][j] - self.m[j][i]).abs())
            .fold(0.0, f64::max)
    }
}

struct Evaluator<'a> {
    h: &'a PauliSum,
    u: &'a Circuit,
    gate_set: GateSet,
}

impl Evaluator<'_> {
    /// `<φ| U† H U |φ>` for `|φ> = prep|0…0>`, with compiled resource counts.
    fn energy(&self, prep: &Circuit) -> Result<(f64, ResourceCount, ResourceCount)> {
        let mut full = prep.clone();
        full.append(self.u)?;
        let e = expectation(&prepare(&full)?, self.h)?;
        let p = count_resources(&compile(prep, self.gate_set)?);
        let t = count_resources(&compile(&full, self.gate_set)?);
        Ok((e, p, t))
    }
}

fn basis_prep(x: &OnConfig) -> Result<Circuit> {
    Circuit::from_gates(x.len(), x.occupied().into_iter().map(Gate::x).collect())
}

/// Assembles `M_IJ = <ψ_I| U† H U |ψ_J> - δ_IJ E_gr` over excitations of `hf`.
///
/// Diagonal elements use single-configuration states. Off-diagonal elements
/// come from the two-configuration state `(s_I|x_I> + s_J|x_J>)/√2` through
/// `Re M_IJ = M_{I+J} - M_II/2 - M_JJ/2`, where `M_{I+J}` also has `E_gr`
/// subtracted. Only the upper triangle is evaluated.
pub fn sceom_m_matrix(
    h: &PauliSum,
    hf: &OnConfig,
    excitations: &[ExcitationOp],
    u: &Circuit,
    opts: &SceomOptions,
) -> Result<MMatrix> {
    let n = hf.len();
    if h.n_qubits() != n || u.n_qubits() != n {
        return Err(Error::LengthMismatch(n, h.n_qubits().max(u.n_qubits())));
    }
    if let Some(p) = u.parameters().into_iter().next() {
        return Err(Error::UnboundParameter(p));
    }
    let mut configs = Vec::with_capacity(excitations.len());
    let mut signs = Vec::with_capacity(excitations.len());
    for op in excitations {
        let Some((x, s)) = op.apply(hf)? else {
            return Err(Error::BadExcitation(format!("{op:?} annihilates {hf}")));
        };
        if let Some(k) = configs.iter().position(|y| *y == x) {
            return Err(Error::BadExcitation(format!(
                "excitations {k} and {} both reach {x}",
                configs.len()
            )));
        }
        configs.push(x);
        signs.push(s);
    }
    let ev = Evaluator {
        h,
        u,
        gate_set: opts.gate_set,
    };
    let (e_gr, _, _) = ev.energy(&basis_prep(hf)?)?;
    let d = configs.len();
    let mut m = vec![vec![0.0; d]; d];
    let mut elements = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        let (e, prep, total) = ev.energy(&basis_prep(&configs[i])?)?;
        m[i][i] = e - e_gr;
        elements.push(ElementReport {
            i,
            j: i,
            hamming: 0,
            prep,
            total,
        });
    }
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in i + 1..d {
            let spec = StateSpec::normalized(
                n,
                vec![
                    (amp * f64::from(signs[i]), configs[i]),
                    (amp * f64::from(signs[j]), configs[j]),
                ],
            )?;
            let (e, prep, total) = ev.energy(&opts.method.synthesize(&spec)?)?;
            let v = (e - e_gr) - m[i][i] / 2.0 - m[j][j] / 2.0;
            m[i][j] = v;
            m[j][i] = v;
            elements.push(ElementReport {
                i,
                j,
                hamming: hamming(&configs[i], &configs[j])?,
                prep,
                total,
            });
        }
    }
    Ok(MMatrix {
        e_gr,
        m,
        configs,
        signs,
        elements,
    })
}

/// Ascending eigenvalues of `M`: the excitation energies.
pub fn sceom_energies(m: &MMatrix) -> Result<Vec<f64>> {
    let asym = m.asymmetry();
    if asym > 1e-6 {
        return Err(Error::NotSymmetric(asym));
    }
    let d = m.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let mat = DMatrix::from_fn(d, d, |i, j| (m.m[i][j] + m.m[j][i]) / 2.0);
    let mut e: Vec<f64> = SymmetricEigen::new(mat)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    e.sort_by(f64::total_cmp);
    Ok(e)
}
