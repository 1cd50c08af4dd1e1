//! Signed sparse Pauli operators and their conjugation by CX and H.
//!
//! Operators are Hermitian Pauli strings with a +1/-1 sign. Y is stored as
//! Y itself (not iXZ), and sign updates follow the Aaronson-Gottesman rules.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{Coord, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Option<Self> {
        match (x, z) {
            (false, false) => None,
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Exponent of i picked up by the single-site product P1 * P2.
pub(crate) fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1, x2, z2) {
        (true, false, true, true) | (true, true, false, true) | (false, true, true, false) => 1,
        (true, false, false, true) | (true, true, true, false) | (false, true, true, true) => -1,
        _ => 0,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PauliOp {
    negative: bool,
    support: BTreeMap<Coord, Pauli>,
}

impl PauliOp {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(p: Pauli, c: Coord) -> Self {
        Self::uniform(p, [c])
    }

    pub fn uniform(p: Pauli, sites: impl IntoIterator<Item = Coord>) -> Self {
        Self {
            negative: false,
            support: sites.into_iter().map(|c| (c, p)).collect(),
        }
    }

    pub fn from_terms(negative: bool, terms: impl IntoIterator<Item = (Coord, Pauli)>) -> Self {
        Self {
            negative,
            support: terms.into_iter().collect(),
        }
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn negated(&self) -> Self {
        Self {
            negative: !self.negative,
            support: self.support.clone(),
        }
    }

    pub fn get(&self, c: Coord) -> Option<Pauli> {
        self.support.get(&c).copied()
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty()
    }

    pub fn sites(&self) -> impl Iterator<Item = Coord> + '_ {
        self.support.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Coord, Pauli)> + '_ {
        self.support.iter().map(|(&c, &p)| (c, p))
    }

    /// True when every non-identity factor equals `p`.
    pub fn is_pure(&self, p: Pauli) -> bool {
        self.support.values().all(|&q| q == p)
    }

    pub fn bits(&self, c: Coord) -> (bool, bool) {
        self.get(c).map_or((false, false), Pauli::bits)
    }

    fn set_bits(&mut self, c: Coord, x: bool, z: bool) {
        match Pauli::from_bits(x, z) {
            Some(p) => {
                self.support.insert(c, p);
            }
            None => {
                self.support.remove(&c);
            }
        }
    }

    pub fn apply_cx(&mut self, g: CxGate) {
        let (xc, zc) = self.bits(g.control);
        let (xt, zt) = self.bits(g.target);
        if !(xc || zt) {
            return;
        }
        if xc && zt && !(xt ^ zc) {
            self.negative = !self.negative;
        }
        self.set_bits(g.control, xc, zc ^ zt);
        self.set_bits(g.target, xt ^ xc, zt);
    }

    pub fn apply_h(&mut self, site: Coord) {
        if let Entry::Occupied(mut e) = self.support.entry(site) {
            let p = e.get_mut();
            *p = match *p {
                Pauli::X => Pauli::Z,
                Pauli::Z => Pauli::X,
                Pauli::Y => {
                    self.negative = !self.negative;
                    Pauli::Y
                }
            };
        }
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        if self.support.is_empty() {
            return f.write_str("I");
        }
        for (c, p) in &self.support {
            write!(f, "{}{}", p.symbol(), c)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CxGate {
    pub control: Coord,
    pub target: Coord,
}

impl CxGate {
    pub const fn new(control: Coord, target: Coord) -> Self {
        Self { control, target }
    }

    /// Two CX gates fail to commute exactly when one's control is the
    /// other's target.
    pub fn commutes_with(&self, other: &CxGate) -> bool {
        self.control != other.target && self.target != other.control
    }
}

impl fmt::Display for CxGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CX {}->{}", self.control, self.target)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Layer {
    pub gates: Vec<CxGate>,
}

impl Layer {
    pub fn new(gates: Vec<CxGate>) -> Self {
        Self { gates }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CxGate> {
        self.gates.iter()
    }
}

/// CX layers in disentangling order followed by a Hadamard layer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub l: usize,
    pub cx_layers: Vec<Layer>,
    pub h_sites: Vec<Coord>,
}

impl Circuit {
    pub fn empty(l: usize) -> Self {
        Self {
            l,
            cx_layers: Vec::new(),
            h_sites: Vec::new(),
        }
    }

    pub fn gate_count(&self) -> usize {
        self.cx_layers.iter().map(Layer::len).sum()
    }

    pub fn gates(&self) -> impl Iterator<Item = CxGate> + '_ {
        self.cx_layers.iter().flat_map(|l| l.gates.iter().copied())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

pub fn conjugate_by_cx(op: &PauliOp, g: CxGate) -> PauliOp {
    let mut out = op.clone();
    out.apply_cx(g);
    out
}

pub fn conjugate_by_h(op: &PauliOp, site: Coord) -> PauliOp {
    let mut out = op.clone();
    out.apply_h(site);
    out
}

pub fn conjugate_by_layer(op: &PauliOp, layer: &Layer) -> PauliOp {
    let mut out = op.clone();
    for &g in &layer.gates {
        out.apply_cx(g);
    }
    out
}

/// Forward: CX layers first to last, then H. Inverse: H, then CX layers
/// last to first.
pub fn conjugate_by_circuit(op: &PauliOp, c: &Circuit, direction: Direction) -> PauliOp {
    let mut out = op.clone();
    match direction {
        Direction::Forward => {
            for layer in &c.cx_layers {
                for &g in &layer.gates {
                    out.apply_cx(g);
                }
            }
            for &s in &c.h_sites {
                out.apply_h(s);
            }
        }
        Direction::Inverse => {
            for &s in &c.h_sites {
                out.apply_h(s);
            }
            for layer in c.cx_layers.iter().rev() {
                for &g in &layer.gates {
                    out.apply_cx(g);
                }
            }
        }
    }
    out
}

pub fn commutes(a: &PauliOp, b: &PauliOp) -> bool {
    let (small, large) = if a.weight() <= b.weight() {
        (a, b)
    } else {
        (b, a)
    };
    small
        .terms()
        .filter(|&(c, p)| large.get(c).is_some_and(|q| q != p))
        .count()
        % 2
        == 0
}

/// Site-wise product a * b; fails when the overall phase is imaginary.
pub fn multiply(a: &PauliOp, b: &PauliOp) -> Result<PauliOp> {
    let mut exponent = 2 * (a.negative as i32 + b.negative as i32);
    let mut support = a.support.clone();
    for (&c, &q) in &b.support {
        let (x2, z2) = q.bits();
        let (x1, z1) = a.bits(c);
        exponent += phase_exponent(x1, z1, x2, z2);
        match Pauli::from_bits(x1 ^ x2, z1 ^ z2) {
            Some(p) => {
                support.insert(c, p);
            }
            None => {
                support.remove(&c);
            }
        }
    }
    match exponent.rem_euclid(4) {
        0 => Ok(PauliOp {
            negative: false,
            support,
        }),
        2 => Ok(PauliOp {
            negative: true,
            support,
        }),
        _ => Err(Error::ImaginaryPhase),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotQubit {
        gate: CxGate,
    },
    Degenerate {
        gate: CxGate,
    },
    NonLocal {
        gate: CxGate,
        doubled_distance: usize,
    },
    SupportOverlap {
        first: CxGate,
        second: CxGate,
        site: Coord,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotQubit { gate } => write!(f, "off-lattice site: {gate}"),
            Violation::Degenerate { gate } => write!(f, "control equals target: {gate}"),
            Violation::NonLocal {
                gate,
                doubled_distance,
            } => write!(
                f,
                "non-local gate: {gate} at doubled distance {doubled_distance}"
            ),
            Violation::SupportOverlap {
                first,
                second,
                site,
            } => {
                write!(f, "support overlap: {first} and {second} share {site}")
            }
        }
    }
}

/// Empty iff every gate is local and the gate supports are disjoint.
pub fn validate_layer(lat: &Lattice, layer: &Layer) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut owner: HashMap<Coord, CxGate> = HashMap::new();
    for &gate in &layer.gates {
        if !lat.is_qubit(gate.control) || !lat.is_qubit(gate.target) {
            out.push(Violation::NotQubit { gate });
            continue;
        }
        if gate.control == gate.target {
            out.push(Violation::Degenerate { gate });
            continue;
        }
        let d = lat.doubled_distance(gate.control, gate.target);
        if d > 2 {
            out.push(Violation::NonLocal {
                gate,
                doubled_distance: d,
            });
        }
        for site in [gate.control, gate.target] {
            if let Some(&first) = owner.get(&site) {
                out.push(Violation::SupportOverlap {
                    first,
                    second: gate,
                    site,
                });
            } else {
                owner.insert(site, gate);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: usize, y: usize) -> Coord {
        Coord::new(x, y)
    }

    #[test]
    fn cx_rules() {
        let g = CxGate::new(c(0, 0), c(1, 1));
        let xc = PauliOp::single(Pauli::X, c(0, 0));
        assert_eq!(
            conjugate_by_cx(&xc, g),
            PauliOp::uniform(Pauli::X, [c(0, 0), c(1, 1)])
        );
        let zt = PauliOp::single(Pauli::Z, c(1, 1));
        assert_eq!(
            conjugate_by_cx(&zt, g),
            PauliOp::uniform(Pauli::Z, [c(0, 0), c(1, 1)])
        );
        let xt = PauliOp::single(Pauli::X, c(1, 1));
        assert_eq!(conjugate_by_cx(&xt, g), xt);
        let zc = PauliOp::single(Pauli::Z, c(0, 0));
        assert_eq!(conjugate_by_cx(&zc, g), zc);
        let far = PauliOp::uniform(Pauli::Y, [c(2, 2), c(3, 3)]);
        assert_eq!(conjugate_by_cx(&far, g), far);
    }

    #[test]
    fn cx_sign_on_y() {
        // CX (Y x Y) CX = -(X x Z)
        let g = CxGate::new(c(0, 0), c(1, 1));
        let yy = PauliOp::uniform(Pauli::Y, [c(0, 0), c(1, 1)]);
        let want = PauliOp::from_terms(true, [(c(0, 0), Pauli::X), (c(1, 1), Pauli::Z)]);
        assert_eq!(conjugate_by_cx(&yy, g), want);
        // CX (X x Z) CX = -(Y x Y)
        assert_eq!(conjugate_by_cx(&want.negated(), g), yy.negated());
    }

    #[test]
    fn hadamard_rules() {
        let s = c(1, 1);
        assert_eq!(
            conjugate_by_h(&PauliOp::single(Pauli::X, s), s),
            PauliOp::single(Pauli::Z, s)
        );
        let other = PauliOp::single(Pauli::Z, c(0, 0));
        assert_eq!(conjugate_by_h(&other, s), other);
        let y = PauliOp::single(Pauli::Y, s);
        assert_eq!(conjugate_by_h(&y, s), y.negated());
    }

    #[test]
    fn commutation_examples() {
        let x0 = PauliOp::single(Pauli::X, c(0, 0));
        assert!(!commutes(&x0, &PauliOp::single(Pauli::Z, c(0, 0))));
        assert!(commutes(&x0, &PauliOp::single(Pauli::Z, c(1, 1))));
        let lat = Lattice::new(2).unwrap();
        let s = lat.star_operator(c(1, 0)).unwrap();
        let p = lat.plaquette_operator(c(0, 1)).unwrap();
        assert!(commutes(&s, &p));
    }

    #[test]
    fn multiply_examples() {
        let a = PauliOp::from_terms(false, [(c(0, 0), Pauli::Y), (c(1, 1), Pauli::X)]);
        assert_eq!(multiply(&a, &a).unwrap(), PauliOp::identity());
        let x0 = PauliOp::single(Pauli::X, c(0, 0));
        let x2 = PauliOp::single(Pauli::X, c(2, 0));
        assert_eq!(
            multiply(&x0, &x2).unwrap(),
            PauliOp::uniform(Pauli::X, [c(0, 0), c(2, 0)])
        );
        let z0 = PauliOp::single(Pauli::Z, c(0, 0));
        assert_eq!(multiply(&x0, &z0), Err(Error::ImaginaryPhase));
        // (X x X)(Z x Z) = -(Y x Y)
        let xx = PauliOp::uniform(Pauli::X, [c(0, 0), c(1, 1)]);
        let zz = PauliOp::uniform(Pauli::Z, [c(0, 0), c(1, 1)]);
        assert_eq!(
            multiply(&xx, &zz).unwrap(),
            PauliOp::uniform(Pauli::Y, [c(0, 0), c(1, 1)]).negated()
        );
    }

    #[test]
    fn star_product_is_identity() {
        for l in 2..5 {
            let lat = Lattice::new(l).unwrap();
            let (stars, plaquettes) = lat.all_stabilizers();
            for group in [stars, plaquettes] {
                let prod = group
                    .iter()
                    .try_fold(PauliOp::identity(), |acc, s| multiply(&acc, s))
                    .unwrap();
                assert_eq!(prod, PauliOp::identity());
            }
        }
    }

    #[test]
    fn circuit_direction_round_trip() {
        let g1 = CxGate::new(c(0, 0), c(1, 1));
        let g2 = CxGate::new(c(1, 1), c(2, 0));
        let circ = Circuit {
            l: 2,
            cx_layers: vec![Layer::new(vec![g1]), Layer::new(vec![g2])],
            h_sites: vec![c(1, 1)],
        };
        let op = PauliOp::from_terms(false, [(c(0, 0), Pauli::Y), (c(2, 0), Pauli::Z)]);
        let fwd = conjugate_by_circuit(&op, &circ, Direction::Forward);
        assert_ne!(fwd, op);
        assert_eq!(conjugate_by_circuit(&fwd, &circ, Direction::Inverse), op);
        assert_eq!(
            conjugate_by_circuit(&op, &Circuit::empty(2), Direction::Forward),
            op
        );
    }

    #[test]
    fn layer_violations() {
        let lat = Lattice::new(4).unwrap();
        let shared = Layer::new(vec![
            CxGate::new(c(0, 0), c(1, 1)),
            CxGate::new(c(0, 0), c(0, 2)),
        ]);
        let v = validate_layer(&lat, &shared);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().starts_with("support overlap"));

        let far = Layer::new(vec![CxGate::new(c(0, 0), c(4, 0))]);
        let v = validate_layer(&lat, &far);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().starts_with("non-local gate"));

        let wrap = Layer::new(vec![
            CxGate::new(c(0, 0), c(7, 7)),
            CxGate::new(c(2, 2), c(3, 3)),
        ]);
        assert!(validate_layer(&lat, &wrap).is_empty());
    }
}
