//! Pauli-string Hamiltonians and their exact expectation values.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::loss::{Loss, LossModel};
use crate::testbed::ansatz::{AnsatzSpec, PreparedAnsatz};
use crate::testbed::statevector::Statevector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of single-qubit Paulis; character `k` of the string
/// form acts on qubit `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn parse(s: &str) -> Result<Self> {
        let ops = s
            .trim()
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::usage(format!("invalid Pauli character '{c}' in \"{s}\"")))
            })
            .collect::<Result<Vec<_>>>()?;
        if ops.is_empty() {
            return Err(Error::usage("empty Pauli string"));
        }
        Ok(Self(ops))
    }

    pub fn n_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    /// `⟨ψ|P|ψ⟩`, real for Hermitian `P`.
    pub fn expectation(&self, state: &Statevector) -> f64 {
        let mut flip = 0usize;
        let mut z_mask = 0usize;
        let mut n_y = 0u32;
        for (q, p) in self.0.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    z_mask |= 1 << q;
                    n_y += 1;
                }
                Pauli::Z => z_mask |= 1 << q,
            }
        }
        // Y = i X Z, so P|x⟩ = i^{n_y} (-1)^{popcount(x & z_mask)} |x ^ flip⟩
        let global = Complex64::i().powu(n_y);
        let amps = state.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, a) in amps.iter().enumerate() {
            let sign = if (x & z_mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            acc += amps[x ^ flip].conj() * a * sign;
        }
        (acc * global).re
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

/// `Σ_k c_k P_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    terms: Vec<(f64, PauliString)>,
    n_qubits: usize,
}

impl PauliSum {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::usage("Pauli sum has no terms"));
        };
        let n = first.1.n_qubits();
        for (c, p) in &terms {
            if !c.is_finite() {
                return Err(Error::usage(format!("non-finite coefficient for {p}")));
            }
            if p.n_qubits() != n {
                return Err(Error::usage(format!(
                    "Pauli string {p} has {} qubits, expected {n}",
                    p.n_qubits()
                )));
            }
        }
        Ok(Self { terms, n_qubits: n })
    }

    /// Parses `"0.5*ZZ + 0.3*XI - YY"`; a missing coefficient means 1.
    pub fn parse(s: &str) -> Result<Self> {
        let normalized = s.replace('-', "+-");
        let mut terms = Vec::new();
        for raw in normalized.split('+') {
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let (coef, ops) = match raw.split_once('*') {
                Some((c, o)) => (c.trim(), o.trim()),
                None => match raw.rsplit_once(char::is_whitespace) {
                    Some((c, o)) => (c.trim(), o.trim()),
                    None if raw.starts_with('-') => ("-1", raw[1..].trim()),
                    None => ("1", raw),
                },
            };
            let coef: String = coef.chars().filter(|c| !c.is_whitespace()).collect();
            let coef: f64 = match coef.as_str() {
                "-" => -1.0,
                c => c
                    .parse()
                    .map_err(|_| Error::usage(format!("bad coefficient '{c}' in Pauli sum")))?,
            };
            terms.push((coef, PauliString::parse(ops)?));
        }
        Self::new(terms)
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn expectation(&self, state: &Statevector) -> f64 {
        self.terms
            .iter()
            .map(|(c, p)| c * p.expectation(state))
            .sum()
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{p}")?;
        }
        Ok(())
    }
}

/// Exact energy `Σ c_k ⟨ψ(θ)|P_k|ψ(θ)⟩` of an ansatz state.
#[derive(Debug, Clone)]
pub struct PauliExpectation {
    ansatz: PreparedAnsatz,
    hamiltonian: PauliSum,
}

impl PauliExpectation {
    pub fn new(ansatz: &AnsatzSpec, hamiltonian: PauliSum) -> Result<Self> {
        if hamiltonian.n_qubits() != ansatz.n_qubits() {
            return Err(Error::usage(format!(
                "Hamiltonian acts on {} qubits, ansatz has {}",
                hamiltonian.n_qubits(),
                ansatz.n_qubits()
            )));
        }
        Ok(Self {
            ansatz: ansatz.prepare()?,
            hamiltonian,
        })
    }

    pub fn ansatz(&self) -> &PreparedAnsatz {
        &self.ansatz
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    pub fn into_model(self) -> LossModel {
        LossModel::new(self)
    }
}

impl Loss for PauliExpectation {
    fn dimension(&self) -> usize {
        self.ansatz.spec().parameter_count()
    }

    fn value(&self, theta: &[f64], _call: u64) -> f64 {
        match self.ansatz.state(theta) {
            Ok(s) => self.hamiltonian.expectation(&s),
            Err(_) => f64::NAN,
        }
    }

    fn period(&self) -> Option<f64> {
        self.ansatz.spec().period()
    }

    fn label(&self) -> String {
        format!("pauli/{}", self.ansatz.spec().label())
    }
}

pub fn pauli_expectation_loss(ansatz: &AnsatzSpec, hamiltonian: PauliSum) -> Result<LossModel> {
    Ok(PauliExpectation::new(ansatz, hamiltonian)?.into_model())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    type C = Complex64;

    fn single(p: Pauli) -> DMatrix<C> {
        let z = C::new(0.0, 0.0);
        let o = C::new(1.0, 0.0);
        let i = C::new(0.0, 1.0);
        match p {
            Pauli::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
            Pauli::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            Pauli::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            Pauli::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }

    /// Dense matrix with qubit 0 as the least significant factor.
    fn dense(p: &PauliString) -> DMatrix<C> {
        let mut m = DMatrix::from_element(1, 1, C::new(1.0, 0.0));
        for op in p.ops() {
            m = single(*op).kronecker(&m);
        }
        m
    }

    #[test]
    fn simple_expectations() {
        let z0 = PauliString::parse("Z").unwrap();
        assert_eq!(z0.expectation(&Statevector::zero(1).unwrap()), 1.0);
        let x = PauliString::parse("X").unwrap();
        assert!((x.expectation(&Statevector::plus(1).unwrap()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matches_dense_oracle() {
        let mut s = Statevector::zero(3).unwrap();
        for (q, a) in [(0, 0.3), (1, 1.2), (2, -0.7)] {
            s.rx(q, a).unwrap();
            s.rz(q, a * 1.7).unwrap();
        }
        s.cnot(0, 2).unwrap();
        s.cz(1, 2).unwrap();
        let psi = nalgebra::DVector::from_column_slice(s.amplitudes());
        for text in ["ZZI", "XIY", "YYZ", "IXX", "ZYX", "III"] {
            let p = PauliString::parse(text).unwrap();
            let want = (psi.adjoint() * dense(&p) * &psi)[(0, 0)].re;
            assert!((p.expectation(&s) - want).abs() < 1e-12, "{text}");
        }
    }

    #[test]
    fn loss_matches_dense_oracle() {
        let spec = AnsatzSpec::hardware_efficient(2, 1).unwrap();
        let h = PauliSum::parse("0.5*ZZ + 0.3*XI").unwrap();
        let theta = [0.3, -1.1, 0.7, 2.0, -0.4, 0.9, 1.6, -2.2];
        let s = spec.prepare().unwrap().state(&theta).unwrap();
        let psi = nalgebra::DVector::from_column_slice(s.amplitudes());
        let mut dense_h = DMatrix::from_element(4, 4, C::new(0.0, 0.0));
        for (c, p) in h.terms() {
            dense_h += dense(p) * C::new(*c, 0.0);
        }
        let want = (psi.adjoint() * dense_h * &psi)[(0, 0)].re;
        let model = pauli_expectation_loss(&spec, h).unwrap();
        assert!((model.evaluate_slice(&theta).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn parse_sums() {
        let h = PauliSum::parse("0.5*ZZ + 0.3*XI - YY").unwrap();
        assert_eq!(h.terms().len(), 3);
        assert_eq!(h.terms()[2].0, -1.0);
        assert_eq!(h.n_qubits(), 2);
        let h = PauliSum::parse("-0.25 ZI + XX").unwrap();
        assert_eq!(h.terms()[0].0, -0.25);
        assert!(PauliSum::parse("0.5*ZQ").unwrap_err().is_usage());
        assert!(PauliSum::parse("0.5*ZZ + XIX").is_err());
        assert!(PauliSum::parse("").is_err());
    }
}
