//! Dense state-vector ground truth for small lattices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Coord, Lattice, SiteIndexMap};
use crate::pauli::{Pauli, PauliOp};
use crate::synthesis::Encoder;

pub const MAX_QUBITS: usize = 18;
pub const TOLERANCE: f64 = 1e-10;

/// Amplitudes over 2^n basis states; qubit q is bit q of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooLarge(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooLarge(n));
        }
        if amps.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for {n} qubits",
                amps.len()
            )));
        }
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }

    pub fn apply_h(&mut self, q: usize) {
        let bit = 1 << q;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                let (a0, a1) = (self.amps[b], self.amps[b | bit]);
                self.amps[b] = (a0 + a1) * s;
                self.amps[b | bit] = (a0 - a1) * s;
            }
        }
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        let (cb, tb) = (1 << control, 1 << target);
        for b in 0..self.amps.len() {
            if b & cb != 0 && b & tb == 0 {
                self.amps.swap(b, b | tb);
            }
        }
    }

    /// Masks and phase of `op` written as phase * X^x Z^z.
    fn pauli_parts(op: &PauliOp, map: &SiteIndexMap) -> Result<(usize, usize, Complex64)> {
        let (mut xm, mut zm, mut ny) = (0usize, 0usize, 0u32);
        for (c, p) in op.terms() {
            let q = map.index(c).ok_or(Error::UnindexedSite(c))?;
            let (x, z) = p.bits();
            if x {
                xm |= 1 << q;
            }
            if z {
                zm |= 1 << q;
            }
            if p == Pauli::Y {
                ny += 1;
            }
        }
        let phase = Complex64::new(op.sign() as f64, 0.0) * Complex64::i().powu(ny);
        Ok((xm, zm, phase))
    }

    pub fn apply_pauli(&mut self, op: &PauliOp, map: &SiteIndexMap) -> Result<()> {
        let (xm, zm, phase) = Self::pauli_parts(op, map)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let s = if (b & zm).count_ones() % 2 == 1 {
                -phase
            } else {
                phase
            };
            out[b ^ xm] = s * a;
        }
        self.amps = out;
        Ok(())
    }

    pub fn expectation(&self, op: &PauliOp, map: &SiteIndexMap) -> Result<f64> {
        let (xm, zm, phase) = Self::pauli_parts(op, map)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, a) in self.amps.iter().enumerate() {
            let s = if (b & zm).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            acc += self.amps[b ^ xm].conj() * a * s;
        }
        Ok((acc * phase).re)
    }

    /// <self|other>
    pub fn overlap(&self, other: &DenseState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies the encoder: Hadamards first, then the CX layers in order.
    pub fn apply_encoder(&mut self, enc: &Encoder, map: &SiteIndexMap) -> Result<()> {
        for &s in &enc.h_sites {
            self.apply_h(map.index(s).ok_or(Error::UnindexedSite(s))?);
        }
        for g in enc.gates() {
            let c = map
                .index(g.control)
                .ok_or(Error::UnindexedSite(g.control))?;
            let t = map.index(g.target).ok_or(Error::UnindexedSite(g.target))?;
            self.apply_cx(c, t);
        }
        Ok(())
    }
}

pub fn apply_circuit(state: &DenseState, enc: &Encoder, map: &SiteIndexMap) -> Result<DenseState> {
    let mut out = state.clone();
    out.apply_encoder(enc, map)?;
    Ok(out)
}

/// Encodes a two-qubit input a|00> + b|01> + c|10> + d|11>. The first
/// label bit sits on (0,0), the second on (2L-1,2L-1); all other qubits
/// start in |0>.
pub fn encode_logical(lat: &Lattice, enc: &Encoder, input: [Complex64; 4]) -> Result<DenseState> {
    let n = lat.num_qubits();
    if n > MAX_QUBITS {
        return Err(Error::TooLarge(n));
    }
    let map = lat.index_map();
    let [t0, t1] = lat.trivial_sites();
    let (b0, b1) = (map.index(t0).unwrap(), map.index(t1).unwrap());
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (label, a) in input.into_iter().enumerate() {
        let idx = ((label >> 1) & 1) << b0 | (label & 1) << b1;
        amps[idx] = a;
    }
    let mut s = DenseState::from_amplitudes(n, amps)?;
    s.apply_encoder(enc, &map)?;
    Ok(s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InputReport {
    pub label: &'static str,
    pub min_stabilizer: f64,
    pub max_stabilizer: f64,
    pub zl1: f64,
    pub zl2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub inputs: Vec<InputReport>,
    /// Largest |<a|b>| over distinct encoded basis states.
    pub max_overlap: f64,
    pub failures: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// Encodes the four computational logical inputs and checks stabilizer
/// expectations, logical Z values, orthogonality and the logical X action.
pub fn check_logical_encoding(lat: &Lattice, enc: &Encoder) -> Result<OracleReport> {
    let map = lat.index_map();
    let (stars, plaquettes) = lat.all_stabilizers();
    let stabs: Vec<PauliOp> = stars.into_iter().chain(plaquettes).collect();
    let lg = lat.logical_representatives();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);

    let mut states = Vec::new();
    for k in 0..4 {
        let mut input = [zero; 4];
        input[k] = one;
        states.push(encode_logical(lat, enc, input)?);
    }

    let mut failures = Vec::new();
    let mut inputs = Vec::new();
    for (k, s) in states.iter().enumerate() {
        let label = LABELS[k];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for g in &stabs {
            let e = s.expectation(g, &map)?;
            lo = lo.min(e);
            hi = hi.max(e);
            if (e - 1.0).abs() > TOLERANCE {
                failures.push(format!("input {label}: <{g}> = {e}"));
            }
        }
        let zl1 = s.expectation(&lg.zl1, &map)?;
        let zl2 = s.expectation(&lg.zl2, &map)?;
        let want1 = if k & 1 == 1 { -1.0 } else { 1.0 };
        let want2 = if k & 2 == 2 { -1.0 } else { 1.0 };
        if (zl1 - want1).abs() > TOLERANCE {
            failures.push(format!("input {label}: <ZL1> = {zl1}, expected {want1}"));
        }
        if (zl2 - want2).abs() > TOLERANCE {
            failures.push(format!("input {label}: <ZL2> = {zl2}, expected {want2}"));
        }
        inputs.push(InputReport {
            label,
            min_stabilizer: lo,
            max_stabilizer: hi,
            zl1,
            zl2,
        });
    }

    let mut max_overlap: f64 = 0.0;
    for a in 0..4 {
        for b in a + 1..4 {
            let o = states[a].overlap(&states[b]).norm();
            max_overlap = max_overlap.max(o);
            if o > TOLERANCE {
                failures.push(format!(
                    "inputs {} and {} overlap by {o}",
                    LABELS[a], LABELS[b]
                ));
            }
        }
    }

    for (name, op, flip) in [("XL1", &lg.xl1, 1usize), ("XL2", &lg.xl2, 2)] {
        for (k, s) in states.iter().enumerate() {
            let mut t = s.clone();
            t.apply_pauli(op, &map)?;
            let o = states[k ^ flip].overlap(&t);
            if (o - one).norm() > TOLERANCE {
                failures.push(format!(
                    "{name} on input {} gives overlap {o} with input {}",
                    LABELS[k],
                    LABELS[k ^ flip]
                ));
            }
        }
    }

    Ok(OracleReport {
        inputs,
        max_overlap,
        failures,
    })
}

/// Register sites in index order, for labelling amplitudes.
pub fn register(lat: &Lattice) -> Vec<Coord> {
    let map = lat.index_map();
    (0..map.len()).filter_map(|i| map.coord(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{CxGate, Layer};

    fn c(x: usize, y: usize) -> Coord {
        Coord::new(x, y)
    }

    #[test]
    fn single_gates() {
        let lat = Lattice::new(2).unwrap();
        let map = lat.index_map();
        let (a, b) = (c(0, 0), c(0, 2));
        let (ia, ib) = (map.index(a).unwrap(), map.index(b).unwrap());
        let empty = Encoder {
            l: 2,
            h_sites: vec![],
            cx_layers: vec![],
        };
        let s0 = DenseState::zero(8).unwrap();
        assert_eq!(apply_circuit(&s0, &empty, &map).unwrap(), s0);

        let s = DenseState::basis(8, 1 << ia).unwrap();
        let cx = Encoder {
            l: 2,
            h_sites: vec![],
            cx_layers: vec![Layer::new(vec![CxGate::new(a, b)])],
        };
        let out = apply_circuit(&s, &cx, &map).unwrap();
        assert_eq!(out, DenseState::basis(8, 1 << ia | 1 << ib).unwrap());

        let h = Encoder {
            l: 2,
            h_sites: vec![a],
            cx_layers: vec![],
        };
        let out = apply_circuit(&s0, &h, &map).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitudes()[0].re - r).abs() < TOLERANCE);
        assert!((out.amplitudes()[1 << ia].re - r).abs() < TOLERANCE);
        assert!((out.norm() - 1.0).abs() < TOLERANCE);
    }

    #[test]
    fn expectations() {
        let lat = Lattice::new(2).unwrap();
        let map = lat.index_map();
        let a = c(0, 0);
        let s0 = DenseState::zero(8).unwrap();
        assert!(
            (s0.expectation(&PauliOp::single(Pauli::Z, a), &map).unwrap() - 1.0).abs() < TOLERANCE
        );
        assert!(
            s0.expectation(&PauliOp::single(Pauli::X, a), &map)
                .unwrap()
                .abs()
                < TOLERANCE
        );
        let mut plus = s0.clone();
        plus.apply_h(0);
        assert!(
            (plus
                .expectation(&PauliOp::single(Pauli::X, a), &map)
                .unwrap()
                - 1.0)
                .abs()
                < TOLERANCE
        );
        assert!(
            plus.expectation(&PauliOp::single(Pauli::Y, a), &map)
                .unwrap()
                .abs()
                < TOLERANCE
        );
    }

    #[test]
    fn size_cap() {
        assert_eq!(DenseState::zero(19), Err(Error::TooLarge(19)));
        let lat = Lattice::new(4).unwrap();
        let enc = crate::synthesis::encoder_circuit(&lat);
        assert!(matches!(
            check_logical_encoding(&lat, &enc),
            Err(Error::TooLarge(32))
        ));
    }

    #[test]
    fn l2_logical_encoding() {
        let lat = Lattice::new(2).unwrap();
        let enc = crate::synthesis::encoder_circuit(&lat);
        let rep = check_logical_encoding(&lat, &enc).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.inputs.len(), 4);
    }
}
