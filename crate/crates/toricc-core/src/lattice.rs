//! Coordinates on the 2L x 2L periodic lattice.
//!
//! Qubits sit on parity-0 sites. Plaquette (Z) centers are (even, odd) and
//! star (X) centers are (odd, even); every check acts on the four
//! lattice-adjacent qubits of its center.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub x: usize,
    pub y: usize,
}

impl Coord {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    pub fn parity(self) -> usize {
        (self.x + self.y) % 2
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(usize, usize)> for Coord {
    fn from((x, y): (usize, usize)) -> Self {
        Self { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    l: usize,
}

/// The four logical representatives: qubit 1 lives at (2L-1, 2L-1) after
/// disentangling, qubit 2 at (0, 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Logicals {
    pub xl1: PauliOp,
    pub zl1: PauliOp,
    pub xl2: PauliOp,
    pub zl2: PauliOp,
}

impl Logicals {
    pub fn named(&self) -> [(&'static str, &PauliOp); 4] {
        [
            ("XL1", &self.xl1),
            ("ZL1", &self.zl1),
            ("XL2", &self.xl2),
            ("ZL2", &self.zl2),
        ]
    }
}

impl Lattice {
    pub fn new(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidParameter(format!(
                "L must be at least 2, got {l}"
            )));
        }
        Ok(Self { l })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Side length 2L of the coordinate grid.
    pub fn side(&self) -> usize {
        2 * self.l
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn wrap(&self, x: i64, y: i64) -> Coord {
        let n = self.side() as i64;
        Coord::new(x.rem_euclid(n) as usize, y.rem_euclid(n) as usize)
    }

    pub fn shift(&self, c: Coord, dx: i64, dy: i64) -> Coord {
        self.wrap(c.x as i64 + dx, c.y as i64 + dy)
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x < self.side() && c.y < self.side()
    }

    pub fn is_qubit(&self, c: Coord) -> bool {
        self.contains(c) && c.parity() == 0
    }

    pub fn is_plaquette_center(&self, c: Coord) -> bool {
        self.contains(c) && c.x.is_multiple_of(2) && c.y % 2 == 1
    }

    pub fn is_star_center(&self, c: Coord) -> bool {
        self.contains(c) && c.x % 2 == 1 && c.y.is_multiple_of(2)
    }

    /// All 2L^2 qubit sites sorted by (x, y).
    pub fn qubit_sites(&self) -> Vec<Coord> {
        let n = self.side();
        (0..n)
            .flat_map(|x| (x % 2..n).step_by(2).map(move |y| Coord::new(x, y)))
            .collect()
    }

    pub fn plaquette_centers(&self) -> Vec<Coord> {
        let n = self.side();
        (0..n)
            .step_by(2)
            .flat_map(|x| (1..n).step_by(2).map(move |y| Coord::new(x, y)))
            .collect()
    }

    pub fn star_centers(&self) -> Vec<Coord> {
        let n = self.side();
        (1..n)
            .step_by(2)
            .flat_map(|x| (0..n).step_by(2).map(move |y| Coord::new(x, y)))
            .collect()
    }

    /// Twice the torus distance: min(|dx|, 2L-|dx|) + min(|dy|, 2L-|dy|).
    pub fn doubled_distance(&self, a: Coord, b: Coord) -> usize {
        let n = self.side();
        let dx = a.x.abs_diff(b.x) % n;
        let dy = a.y.abs_diff(b.y) % n;
        dx.min(n - dx) + dy.min(n - dy)
    }

    /// Shortest signed displacement from `a` to `b` on the torus.
    pub fn displacement(&self, a: Coord, b: Coord) -> (i64, i64) {
        let n = self.side() as i64;
        let short = |d: i64| {
            let d = d.rem_euclid(n);
            if d > n / 2 {
                d - n
            } else {
                d
            }
        };
        (
            short(b.x as i64 - a.x as i64),
            short(b.y as i64 - a.y as i64),
        )
    }

    /// Distinct qubit sites at doubled distance 2.
    pub fn neighbors(&self, c: Coord) -> Result<BTreeSet<Coord>> {
        if !self.is_qubit(c) {
            return Err(Error::InvalidArgument(format!("{c} is not a qubit site")));
        }
        const STEPS: [(i64, i64); 8] = [
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
            (2, 0),
            (-2, 0),
            (0, 2),
            (0, -2),
        ];
        Ok(STEPS
            .iter()
            .map(|&(dx, dy)| self.shift(c, dx, dy))
            .filter(|&n| n != c)
            .collect())
    }

    /// The four lattice-adjacent sites of `c`.
    pub fn adjacent(&self, c: Coord) -> [Coord; 4] {
        [
            self.shift(c, -1, 0),
            self.shift(c, 1, 0),
            self.shift(c, 0, -1),
            self.shift(c, 0, 1),
        ]
    }

    pub fn plaquette_operator(&self, center: Coord) -> Result<PauliOp> {
        if !self.is_plaquette_center(center) {
            return Err(Error::InvalidArgument(format!(
                "{center} is not a plaquette center"
            )));
        }
        Ok(PauliOp::uniform(Pauli::Z, self.adjacent(center)))
    }

    pub fn star_operator(&self, center: Coord) -> Result<PauliOp> {
        if !self.is_star_center(center) {
            return Err(Error::InvalidArgument(format!(
                "{center} is not a star center"
            )));
        }
        Ok(PauliOp::uniform(Pauli::X, self.adjacent(center)))
    }

    /// Stars and plaquettes, each sorted by center.
    pub fn all_stabilizers(&self) -> (Vec<PauliOp>, Vec<PauliOp>) {
        let stars = self
            .star_centers()
            .into_iter()
            .map(|c| PauliOp::uniform(Pauli::X, self.adjacent(c)))
            .collect();
        let plaquettes = self
            .plaquette_centers()
            .into_iter()
            .map(|c| PauliOp::uniform(Pauli::Z, self.adjacent(c)))
            .collect();
        (stars, plaquettes)
    }

    pub fn logical_representatives(&self) -> Logicals {
        let last = self.side() - 1;
        let sites = self.qubit_sites();
        let line = |p: Pauli, keep: &dyn Fn(&Coord) -> bool| {
            PauliOp::uniform(p, sites.iter().copied().filter(|c| keep(c)))
        };
        Logicals {
            xl1: line(Pauli::X, &|c| c.y == last),
            zl1: line(Pauli::Z, &|c| c.x == last),
            xl2: line(Pauli::X, &|c| c.x == 0),
            zl2: line(Pauli::Z, &|c| c.y == 0),
        }
    }

    /// Sites that carry the logical state: (0,0) and (2L-1,2L-1).
    pub fn trivial_sites(&self) -> [Coord; 2] {
        let last = self.side() - 1;
        [Coord::new(0, 0), Coord::new(last, last)]
    }

    pub fn index_map(&self) -> SiteIndexMap {
        SiteIndexMap { l: self.l }
    }
}

/// Flat qubit index idx(x, y) = x*L + floor(y/2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SiteIndexMap {
    l: usize,
}

impl SiteIndexMap {
    pub fn new(l: usize) -> Self {
        Self { l }
    }

    pub fn len(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn is_empty(&self) -> bool {
        self.l == 0
    }

    pub fn index(&self, c: Coord) -> Option<usize> {
        let n = 2 * self.l;
        (c.x < n && c.y < n && c.parity() == 0).then(|| c.x * self.l + c.y / 2)
    }

    pub fn coord(&self, idx: usize) -> Option<Coord> {
        (idx < self.len()).then(|| {
            let x = idx / self.l;
            Coord::new(x, 2 * (idx % self.l) + x % 2)
        })
    }
}
