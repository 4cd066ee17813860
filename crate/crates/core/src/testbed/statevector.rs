//! Dense statevector simulation.
//!
//! Qubit `q` corresponds to bit `q` of the basis-state index (little-endian):
//! index 1 is qubit 0 in `|1⟩`, all others `|0⟩`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register the simulator builds unless explicitly overridden.
pub const DEFAULT_MAX_QUBITS: usize = 16;
/// Hard ceiling even with the override.
pub const ABSOLUTE_MAX_QUBITS: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Rx { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Cnot { control: usize, target: usize },
    Cz { a: usize, b: usize },
    /// `|x⟩ -> exp(-i · angle · diagonal[x]) |x⟩`.
    DiagonalPhase { diagonal: Vec<f64>, angle: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    amplitudes: Vec<Complex64>,
    n_qubits: usize,
}

fn check_size(n_qubits: usize, max_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::usage("statevector needs at least one qubit"));
    }
    if n_qubits > max_qubits.min(ABSOLUTE_MAX_QUBITS) {
        return Err(Error::usage(format!(
            "{n_qubits} qubits exceeds the simulator limit of {max_qubits}"
        )));
    }
    Ok(())
}

impl Statevector {
    /// `|0…0⟩`, limited to [`DEFAULT_MAX_QUBITS`].
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::zero_with_limit(n_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_limit(n_qubits: usize, max_qubits: usize) -> Result<Self> {
        check_size(n_qubits, max_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes, n_qubits })
    }

    /// `|+⟩^⊗n`.
    pub fn plus(n_qubits: usize) -> Result<Self> {
        Self::plus_with_limit(n_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn plus_with_limit(n_qubits: usize, max_qubits: usize) -> Result<Self> {
        check_size(n_qubits, max_qubits)?;
        let dim = 1usize << n_qubits;
        let a = 1.0 / (dim as f64).sqrt();
        Ok(Self {
            amplitudes: vec![Complex64::new(a, 0.0); dim],
            n_qubits,
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::usage(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::usage(format!("amplitudes have norm {norm}, expected 1")));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Born probabilities `|⟨x|ψ⟩|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::usage(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::usage(format!("two-qubit gate on repeated qubit {a}")));
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::Rx { qubit, angle } => self.rx(qubit, angle),
            Gate::Rz { qubit, angle } => self.rz(qubit, angle),
            Gate::Cnot { control, target } => self.cnot(control, target),
            Gate::Cz { a, b } => self.cz(a, b),
            Gate::DiagonalPhase { ref diagonal, angle } => self.diagonal_phase(diagonal, angle),
        }
    }

    /// `exp(-i θ X / 2)` on `qubit`.
    pub fn rx(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        let c = (angle / 2.0).cos();
        let s = (angle / 2.0).sin();
        let mis = Complex64::new(0.0, -s);
        let bit = 1usize << qubit;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | bit];
                self.amplitudes[i] = a0 * c + a1 * mis;
                self.amplitudes[i | bit] = a0 * mis + a1 * c;
            }
        }
        Ok(())
    }

    /// `exp(-i θ Z / 2)` on `qubit`.
    pub fn rz(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        let p0 = Complex64::from_polar(1.0, -angle / 2.0);
        let p1 = Complex64::from_polar(1.0, angle / 2.0);
        let bit = 1usize << qubit;
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if i & bit == 0 { p0 } else { p1 };
        }
        Ok(())
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_pair(control, target)?;
        let c = 1usize << control;
        let t = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & c != 0 && i & t == 0 {
                self.amplitudes.swap(i, i | t);
            }
        }
        Ok(())
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_pair(a, b)?;
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    pub fn diagonal_phase(&mut self, diagonal: &[f64], angle: f64) -> Result<()> {
        if diagonal.len() != self.amplitudes.len() {
            return Err(Error::usage(format!(
                "diagonal has {} entries for {} amplitudes",
                diagonal.len(),
                self.amplitudes.len()
            )));
        }
        for (a, d) in self.amplitudes.iter_mut().zip(diagonal) {
            *a *= Complex64::from_polar(1.0, -angle * d);
        }
        Ok(())
    }

    /// `⟨ψ|D|ψ⟩` for a diagonal observable.
    pub fn diagonal_expectation(&self, diagonal: &[f64]) -> f64 {
        self.amplitudes
            .iter()
            .zip(diagonal)
            .map(|(a, d)| a.norm_sqr() * d)
            .sum()
    }
}

/// Functional form of [`Statevector::apply`].
pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn basis(n: usize, index: usize) -> Statevector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Statevector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn rx_zero_is_identity() {
        let mut s = Statevector::plus(3).unwrap();
        s.rz(1, 0.7).unwrap();
        let out = apply_gate(&s, &Gate::Rx { qubit: 2, angle: 0.0 }).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn cnot_truth_table() {
        // control qubit 0 set, target qubit 1 clear -> both set
        let out = apply_gate(&basis(2, 0b01), &Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert_eq!(out, basis(2, 0b11));
        let out = apply_gate(&basis(2, 0b10), &Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert_eq!(out, basis(2, 0b10));
    }

    #[test]
    fn rx_pi_flips_with_minus_i() {
        let out = apply_gate(&Statevector::zero(1).unwrap(), &Gate::Rx { qubit: 0, angle: PI }).unwrap();
        let a = out.amplitudes();
        assert!(a[0].norm() < 1e-15);
        assert!((a[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((out.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cz_phases_only_11() {
        let mut s = Statevector::plus(2).unwrap();
        s.cz(0, 1).unwrap();
        let a = s.amplitudes();
        assert!(a[3].re < 0.0 && a[0].re > 0.0 && a[1].re > 0.0 && a[2].re > 0.0);
    }

    #[test]
    fn bad_targets_rejected() {
        let mut s = Statevector::zero(2).unwrap();
        assert!(s.rx(2, 0.1).unwrap_err().is_usage());
        assert!(s.cnot(1, 1).unwrap_err().is_usage());
        assert!(s.diagonal_phase(&[0.0; 3], 1.0).is_err());
        assert!(Statevector::zero(17).is_err());
        assert!(Statevector::zero_with_limit(17, 20).is_ok());
    }

    #[test]
    fn gates_preserve_norm() {
        let mut s = Statevector::zero(4).unwrap();
        let diag: Vec<f64> = (0..16).map(|x| x as f64 * 0.37).collect();
        for k in 0..20 {
            let q = k % 4;
            s.rx(q, 0.3 * k as f64 + 0.1).unwrap();
            s.rz((q + 1) % 4, 1.1 * k as f64).unwrap();
            s.cnot(q, (q + 2) % 4).unwrap();
            s.cz(q, (q + 3) % 4).unwrap();
            s.diagonal_phase(&diag, 0.2).unwrap();
        }
        assert!((s.norm() - 1.0).abs() < 1e-10);
    }
}
