//! Bit-packed symplectic tableaus.
//!
//! `Tableau` stores generators row-major as an X block followed by a Z block,
//! with a phase exponent (power of i) per row. `PauliBatch` stores a set of
//! operators column-major, so a gate costs O(ops / 64) word operations.

use crate::error::{Error, Result};
use crate::lattice::{Coord, Lattice, SiteIndexMap};
use crate::pauli::{CxGate, Layer, Pauli, PauliOp};
use crate::synthesis::Encoder;

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[inline]
fn get_bit(v: &[u64], i: usize) -> bool {
    v[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
fn set_bit(v: &mut [u64], i: usize) {
    v[i / WORD] |= 1 << (i % WORD);
}

/// Signed sum of i-exponents for the product a * b over packed words.
fn product_exponent(ax: &[u64], az: &[u64], bx: &[u64], bz: &[u64]) -> i64 {
    let mut e = 0i64;
    for k in 0..ax.len() {
        let (x1, z1, x2, z2) = (ax[k], az[k], bx[k], bz[k]);
        let plus = (x1 & !z1 & x2 & z2) | (x1 & z1 & !x2 & z2) | (!x1 & z1 & x2 & !z2);
        let minus = (x1 & !z1 & !x2 & z2) | (x1 & z1 & x2 & !z2) | (!x1 & z1 & x2 & z2);
        e += plus.count_ones() as i64 - minus.count_ones() as i64;
    }
    e
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Row {
    bits: Vec<u64>,
    phase: u8,
}

impl Row {
    fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    fn leading(&self) -> Option<usize> {
        self.bits
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * WORD + w.trailing_zeros() as usize)
    }

    /// self <- self * other
    fn mul_assign(&mut self, other: &Row, words: usize) {
        let (ax, az) = self.bits.split_at(words);
        let (bx, bz) = other.bits.split_at(words);
        let e = product_exponent(ax, az, bx, bz);
        self.phase = ((self.phase as i64 + other.phase as i64 + e).rem_euclid(4)) as u8;
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }
}

/// Result of testing an operator against a row-reduced tableau.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// The operator's negation is in the group.
    NegatedMember,
    NotMember,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    rows: Vec<Row>,
}

impl Tableau {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            words: words_for(n),
            rows: Vec::new(),
        }
    }

    pub fn from_paulis(n: usize, ops: &[PauliOp], map: &SiteIndexMap) -> Result<Self> {
        let mut t = Self::new(n);
        for op in ops {
            t.push(op, map)?;
        }
        Ok(t)
    }

    fn encode(&self, op: &PauliOp, map: &SiteIndexMap) -> Result<Row> {
        let mut bits = vec![0u64; 2 * self.words];
        for (c, p) in op.terms() {
            let i = map
                .index(c)
                .filter(|&i| i < self.n)
                .ok_or(Error::UnindexedSite(c))?;
            let (x, z) = p.bits();
            if x {
                set_bit(&mut bits, i);
            }
            if z {
                set_bit(&mut bits[self.words..], i);
            }
        }
        Ok(Row {
            bits,
            phase: if op.is_negative() { 2 } else { 0 },
        })
    }

    pub fn push(&mut self, op: &PauliOp, map: &SiteIndexMap) -> Result<()> {
        let row = self.encode(op, map)?;
        self.rows.push(row);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn decode(&self, row: &Row, map: &SiteIndexMap) -> Result<PauliOp> {
        let negative = match row.phase {
            0 => false,
            2 => true,
            _ => return Err(Error::ImaginaryPhase),
        };
        let (xs, zs) = row.bits.split_at(self.words);
        let mut terms = Vec::new();
        for i in 0..self.n {
            if let Some(p) = Pauli::from_bits(get_bit(xs, i), get_bit(zs, i)) {
                let c = map
                    .coord(i)
                    .ok_or_else(|| Error::InvalidArgument(format!("column {i} has no site")))?;
                terms.push((c, p));
            }
        }
        Ok(PauliOp::from_terms(negative, terms))
    }

    pub fn to_paulis(&self, map: &SiteIndexMap) -> Result<Vec<PauliOp>> {
        self.rows.iter().map(|r| self.decode(r, map)).collect()
    }

    /// Reduced row echelon form over the 2n columns (X block first) with
    /// phase propagation, and the rank. Zero rows are dropped, except that
    /// one zero row with a nonzero phase is kept to mark an inconsistent set.
    pub fn row_reduce(&self) -> (Tableau, usize) {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..2 * self.n {
            let bit = if col < self.n {
                col
            } else {
                self.words * WORD + col - self.n
            };
            let Some(p) = (rank..rows.len()).find(|&r| get_bit(&rows[r].bits, bit)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && get_bit(&row.bits, bit) {
                    row.mul_assign(&pivot, self.words);
                }
            }
            rank += 1;
        }
        let mut out: Vec<Row> = rows.drain(..rank).collect();
        if let Some(bad) = rows.into_iter().find(|r| r.is_zero() && r.phase != 0) {
            out.push(bad);
        }
        (
            Tableau {
                n: self.n,
                words: self.words,
                rows: out,
            },
            rank,
        )
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().1
    }

    /// Tests `op` against this tableau, which must already be row-reduced.
    pub fn membership(&self, op: &PauliOp, map: &SiteIndexMap) -> Result<Membership> {
        let mut row = self.encode(op, map)?;
        for r in &self.rows {
            if let Some(lead) = r.leading() {
                if get_bit(&row.bits, lead) {
                    row.mul_assign(r, self.words);
                }
            }
        }
        Ok(if !row.is_zero() {
            Membership::NotMember
        } else if row.phase == 0 {
            Membership::Member
        } else {
            Membership::NegatedMember
        })
    }

    /// One line per row: a sign (`+`, `-`, `+i`, `-i`) followed by one
    /// character from {I, X, Y, Z} per qubit in index order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(["+", "+i", "-", "-i"][row.phase as usize]);
            let (xs, zs) = row.bits.split_at(self.words);
            for i in 0..self.n {
                out.push(match Pauli::from_bits(get_bit(xs, i), get_bit(zs, i)) {
                    None => 'I',
                    Some(p) => p.symbol(),
                });
            }
            out.push('\n');
        }
        out
    }
}

/// True iff both tableaus generate the same signed group.
pub fn groups_equal(a: &Tableau, b: &Tableau) -> bool {
    a.n == b.n && a.row_reduce().0 == b.row_reduce().0
}

/// Column-major set of Hermitian Pauli operators with +1/-1 signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliBatch {
    n_qubits: usize,
    n_ops: usize,
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<u64>,
}

impl PauliBatch {
    pub fn from_paulis(n_qubits: usize, ops: &[PauliOp], map: &SiteIndexMap) -> Result<Self> {
        let words = words_for(ops.len()).max(1);
        let mut b = Self {
            n_qubits,
            n_ops: ops.len(),
            words,
            x: vec![0; n_qubits * words],
            z: vec![0; n_qubits * words],
            r: vec![0; words],
        };
        for (k, op) in ops.iter().enumerate() {
            if op.is_negative() {
                set_bit(&mut b.r, k);
            }
            for (c, p) in op.terms() {
                let q = map
                    .index(c)
                    .filter(|&q| q < n_qubits)
                    .ok_or(Error::UnindexedSite(c))?;
                let (x, z) = p.bits();
                if x {
                    set_bit(&mut b.x[q * words..], k);
                }
                if z {
                    set_bit(&mut b.z[q * words..], k);
                }
            }
        }
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.n_ops
    }

    pub fn is_empty(&self) -> bool {
        self.n_ops == 0
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        let w = self.words;
        let (c, t) = (control * w, target * w);
        for k in 0..w {
            let (xc, zc, xt, zt) = (self.x[c + k], self.z[c + k], self.x[t + k], self.z[t + k]);
            self.r[k] ^= xc & zt & !(xt ^ zc);
            self.x[t + k] = xt ^ xc;
            self.z[c + k] = zc ^ zt;
        }
    }

    pub fn apply_h(&mut self, q: usize) {
        let w = self.words;
        for k in q * w..(q + 1) * w {
            self.r[k - q * w] ^= self.x[k] & self.z[k];
            std::mem::swap(&mut self.x[k], &mut self.z[k]);
        }
    }

    pub fn apply_layer(&mut self, layer: &Layer, map: &SiteIndexMap) -> Result<()> {
        for &g in &layer.gates {
            let (c, t) = gate_indices(g, map)?;
            self.apply_cx(c, t);
        }
        Ok(())
    }

    pub fn x_column(&self, q: usize) -> &[u64] {
        &self.x[q * self.words..(q + 1) * self.words]
    }

    pub fn z_column(&self, q: usize) -> &[u64] {
        &self.z[q * self.words..(q + 1) * self.words]
    }

    pub fn signs(&self) -> &[u64] {
        &self.r
    }

    pub fn op(&self, k: usize, map: &SiteIndexMap) -> PauliOp {
        let terms = (0..self.n_qubits).filter_map(|q| {
            let p = Pauli::from_bits(get_bit(self.x_column(q), k), get_bit(self.z_column(q), k))?;
            Some((map.coord(q)?, p))
        });
        PauliOp::from_terms(get_bit(&self.r, k), terms.collect::<Vec<_>>())
    }

    pub fn to_paulis(&self, map: &SiteIndexMap) -> Vec<PauliOp> {
        (0..self.n_ops).map(|k| self.op(k, map)).collect()
    }
}

pub(crate) fn gate_indices(g: CxGate, map: &SiteIndexMap) -> Result<(usize, usize)> {
    let c = map
        .index(g.control)
        .ok_or(Error::UnindexedSite(g.control))?;
    let t = map.index(g.target).ok_or(Error::UnindexedSite(g.target))?;
    Ok((c, t))
}

/// A CX+H encoder for a CSS code on an explicit register, built by Gaussian
/// elimination with no locality or depth guarantee.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssEncoding {
    pub h_sites: Vec<Coord>,
    /// Gates in application order; all controls are disjoint from all
    /// targets within each of the two stages, so they commute.
    pub gates: Vec<CxGate>,
    /// Sites left free for the logical input.
    pub logical_sites: Vec<Coord>,
}

fn rref(rows: &mut Vec<Vec<u64>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let r0 = pivots.len();
        let Some(p) = (r0..rows.len()).find(|&r| get_bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(r0, p);
        let pivot = rows[r0].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != r0 && get_bit(row, col) {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        pivots.push(col);
    }
    rows.truncate(pivots.len());
    pivots
}

/// Encoder for the CSS code with the given X and Z generators on `sites`.
/// Starting from |0> on every non-logical site, H on the X pivots and the
/// returned gates prepare a state stabilized by both generator lists.
pub fn css_encoder(sites: &[Coord], x_gens: &[PauliOp], z_gens: &[PauliOp]) -> Result<CssEncoding> {
    let n = sites.len();
    let pos = |c: Coord| {
        sites
            .iter()
            .position(|&s| s == c)
            .ok_or(Error::UnindexedSite(c))
    };
    let pack = |ops: &[PauliOp], want: Pauli| -> Result<Vec<Vec<u64>>> {
        ops.iter()
            .map(|op| {
                if !op.is_pure(want) || op.is_negative() {
                    return Err(Error::InvalidArgument(format!(
                        "{op} is not a +{want:?} generator"
                    )));
                }
                let mut row = vec![0u64; words_for(n)];
                for c in op.sites() {
                    set_bit(&mut row, pos(c)?);
                }
                Ok(row)
            })
            .collect()
    };
    let mut hx = pack(x_gens, Pauli::X)?;
    let hz = pack(z_gens, Pauli::Z)?;
    let x_pivots = rref(&mut hx, n);

    for (k, z) in hz.iter().enumerate() {
        if let Some(r) = hx.iter().position(|x| {
            x.iter()
                .zip(z)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2
                == 1
        }) {
            return Err(Error::Elimination {
                pivot: x_pivots[r],
                reason: format!("Z generator {k} anticommutes with an X generator"),
            });
        }
    }

    let free: Vec<usize> = (0..n).filter(|c| !x_pivots.contains(c)).collect();
    let mut hz_free: Vec<Vec<u64>> = hz
        .iter()
        .map(|z| {
            let mut row = vec![0u64; words_for(free.len()).max(1)];
            for (k, &c) in free.iter().enumerate() {
                if get_bit(z, c) {
                    set_bit(&mut row, k);
                }
            }
            row
        })
        .collect();
    let z_pivots = rref(&mut hz_free, free.len());
    let logical: Vec<usize> = (0..free.len()).filter(|k| !z_pivots.contains(k)).collect();

    let mut gates = Vec::new();
    for (row, &q) in hz_free.iter().zip(&z_pivots) {
        for &t in &logical {
            if get_bit(row, t) {
                gates.push(CxGate::new(sites[free[t]], sites[free[q]]));
            }
        }
    }
    for (row, &p) in hx.iter().zip(&x_pivots) {
        for j in 0..n {
            if j != p && get_bit(row, j) {
                gates.push(CxGate::new(sites[p], sites[j]));
            }
        }
    }
    Ok(CssEncoding {
        h_sites: x_pivots.iter().map(|&p| sites[p]).collect(),
        gates,
        logical_sites: logical.iter().map(|&k| sites[free[k]]).collect(),
    })
}

/// The generic elimination encoder for the toric code, with one gate per
/// layer, and the two sites that carry the logical input.
pub fn gaussian_elimination_encoder(lat: &Lattice) -> Result<(Encoder, [Coord; 2])> {
    let (stars, plaquettes) = lat.all_stabilizers();
    let enc = css_encoder(&lat.qubit_sites(), &stars, &plaquettes)?;
    let logical: [Coord; 2] =
        enc.logical_sites
            .as_slice()
            .try_into()
            .map_err(|_| Error::Elimination {
                pivot: 0,
                reason: format!(
                    "expected 2 logical sites, found {}",
                    enc.logical_sites.len()
                ),
            })?;
    let mut h_sites = enc.h_sites;
    h_sites.sort();
    Ok((
        Encoder {
            l: lat.l(),
            h_sites,
            cx_layers: enc.gates.into_iter().map(|g| Layer::new(vec![g])).collect(),
        },
        logical,
    ))
}
