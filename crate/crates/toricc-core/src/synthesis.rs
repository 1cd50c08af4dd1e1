//! The 2L-layer local disentangling circuit, its transport checks, the
//! final-form classifier and the derived encoder.
//!
//! The circuit comes from reducing the L x L square cellulation of the torus.
//! Plaquette centers are its vertices, star centers its faces and qubits its
//! edges. Contracting an edge e fans CX gates from the other edges at one
//! endpoint into e, which turns the plaquette at that endpoint into a Z term
//! on e. Deleting an edge fans CX gates out of e into the other edges of one
//! adjacent face, which does the same for the star on that face. Contracted
//! edges become Z-type qubits, deleted edges X-type qubits, and the two edges
//! that survive are the trivial sites.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Coord, Lattice, Logicals};
use crate::pauli::{commutes, Circuit, CxGate, Layer, Pauli, PauliOp};
use crate::tableau::{gate_indices, Membership, PauliBatch, Tableau};

/// Ops per column-major transport block.
const BLOCK: usize = 256;

struct Plan {
    l: usize,
    alive: Vec<bool>,
    vpar: Vec<usize>,
    fpar: Vec<usize>,
    vinc: Vec<Vec<usize>>,
    finc: Vec<Vec<usize>>,
    gates: Vec<(usize, usize)>,
    deleted: Vec<usize>,
}

fn find(par: &mut [usize], mut x: usize) -> usize {
    while par[x] != x {
        par[x] = par[par[x]];
        x = par[x];
    }
    x
}

impl Plan {
    fn new(l: usize) -> Self {
        let n = l * l;
        let mut plan = Self {
            l,
            alive: vec![true; 2 * n],
            vpar: (0..n).collect(),
            fpar: (0..n).collect(),
            vinc: vec![Vec::new(); n],
            finc: vec![Vec::new(); n],
            gates: Vec::new(),
            deleted: Vec::new(),
        };
        for e in 0..2 * n {
            let (a, b) = plan.vertex_ends(e);
            plan.vinc[a].push(e);
            plan.vinc[b].push(e);
            let (f, g) = plan.face_ends(e);
            plan.finc[f].push(e);
            plan.finc[g].push(e);
        }
        plan
    }

    fn cell(&self, i: usize, j: i64) -> usize {
        (i % self.l) * self.l + j.rem_euclid(self.l as i64) as usize
    }

    fn h(&self, i: usize, j: usize) -> usize {
        2 * self.cell(i, j as i64)
    }

    fn v(&self, i: usize, j: usize) -> usize {
        2 * self.cell(i, j as i64) + 1
    }

    fn coords(&self, e: usize) -> (usize, usize, bool) {
        let c = e / 2;
        (c / self.l, c % self.l, e % 2 == 1)
    }

    /// h(i,j) joins V(i,j) and V(i+1,j); v(i,j) joins V(i,j) and V(i,j+1).
    fn vertex_ends(&self, e: usize) -> (usize, usize) {
        let (i, j, vert) = self.coords(e);
        if vert {
            (self.cell(i, j as i64), self.cell(i, j as i64 + 1))
        } else {
            (self.cell(i, j as i64), self.cell(i + 1, j as i64))
        }
    }

    /// h(i,j) borders F(i,j) and F(i,j-1); v(i,j) borders F(i,j) and F(i-1,j).
    fn face_ends(&self, e: usize) -> (usize, usize) {
        let (i, j, vert) = self.coords(e);
        if vert {
            (self.cell(i, j as i64), self.cell(i + self.l - 1, j as i64))
        } else {
            (self.cell(i, j as i64), self.cell(i, j as i64 - 1))
        }
    }

    fn site(&self, e: usize) -> Coord {
        let (i, j, vert) = self.coords(e);
        let n = 2 * self.l;
        if vert {
            Coord::new(2 * i, 2 * j)
        } else {
            Coord::new(2 * i + 1, (2 * j + n - 1) % n)
        }
    }

    /// Alive non-loop edges at the vertex blob rooted at `r`, ascending.
    fn vertex_edges(&mut self, r: usize) -> Vec<usize> {
        let mut list = std::mem::take(&mut self.vinc[r]);
        list.retain(|&e| {
            let (a, b) = self.vertex_ends(e);
            self.alive[e] && find(&mut self.vpar, a) != find(&mut self.vpar, b)
        });
        list.sort_unstable();
        list.dedup();
        self.vinc[r] = list.clone();
        list
    }

    fn face_edges(&mut self, r: usize) -> Vec<usize> {
        let mut list = std::mem::take(&mut self.finc[r]);
        list.retain(|&e| {
            let (a, b) = self.face_ends(e);
            self.alive[e] && find(&mut self.fpar, a) != find(&mut self.fpar, b)
        });
        list.sort_unstable();
        list.dedup();
        self.finc[r] = list.clone();
        list
    }

    /// Contracts `e`, fanning the blob of vertex `side` into it. Returns the
    /// root of the surviving blob.
    fn contract(&mut self, e: usize, side: usize) -> usize {
        let b = find(&mut self.vpar, side);
        let (a0, a1) = self.vertex_ends(e);
        let r0 = find(&mut self.vpar, a0);
        let o = if r0 == b {
            find(&mut self.vpar, a1)
        } else {
            r0
        };
        assert_ne!(b, o, "contracting a loop");
        for x in self.vertex_edges(b) {
            if x != e {
                self.gates.push((x, e));
            }
        }
        self.alive[e] = false;
        self.vpar[b] = o;
        let moved = std::mem::take(&mut self.vinc[b]);
        self.vinc[o].extend(moved);
        o
    }

    /// Deletes `e`, fanning it out into the other edges of the face blob of
    /// `side`.
    fn delete(&mut self, e: usize, side: usize) -> [usize; 2] {
        let b = find(&mut self.fpar, side);
        let (f0, f1) = self.face_ends(e);
        let r0 = find(&mut self.fpar, f0);
        let o = if r0 == b {
            find(&mut self.fpar, f1)
        } else {
            r0
        };
        assert_ne!(b, o, "deleting a bridge");
        for x in self.face_edges(b) {
            if x != e {
                self.gates.push((e, x));
            }
        }
        self.alive[e] = false;
        self.deleted.push(e);
        self.fpar[b] = o;
        let moved = std::mem::take(&mut self.finc[b]);
        self.finc[o].extend(moved);
        let (a0, a1) = self.vertex_ends(e);
        [a0, a1]
    }

    /// Chain edges v(i,j) with 1 <= j <= i are contracted, free of gates,
    /// as soon as V(i,j) is left with no other edge.
    fn chain_vertex(&self, e: usize) -> Option<usize> {
        let (i, j, vert) = self.coords(e);
        (vert && j >= 1 && j <= i).then(|| self.cell(i, j as i64))
    }

    fn absorb_pendants(&mut self, mut work: Vec<usize>) {
        while let Some(v) = work.pop() {
            let r = find(&mut self.vpar, v);
            let live = self.vertex_edges(r);
            if let [e] = live[..] {
                if let Some(cv) = self.chain_vertex(e) {
                    if find(&mut self.vpar, cv) == r {
                        let o = self.contract(e, cv);
                        work.push(o);
                    }
                }
            }
        }
    }

    fn run(l: usize) -> Self {
        let mut p = Self::new(l);
        let mut moves: Vec<(bool, usize, usize)> = Vec::new();
        for i in 0..l - 1 {
            moves.push((true, p.h(i, 0), p.cell(i + 1, 0)));
        }
        moves.push((true, p.v(0, l - 1), p.cell(0, l as i64 - 1)));
        for j in (1..l - 1).rev() {
            moves.push((true, p.v(0, j), p.cell(0, j as i64)));
        }
        for j in 2..l {
            for i in 0..j - 1 {
                moves.push((true, p.h(i, j), p.cell(i + 1, j as i64)));
            }
        }
        for i in 1..l {
            for j in i + 1..l {
                moves.push((false, p.v(i, j), p.cell(i - 1, j as i64)));
            }
        }
        for i in (1..l).rev() {
            moves.push((false, p.v(i, 0), p.cell(i - 1, 0)));
        }
        for i in 0..l {
            for j in 1..l {
                if i + 2 > j {
                    moves.push((false, p.h(i, j), p.cell(i, j as i64)));
                }
            }
        }
        for (contract, e, side) in moves {
            let touched = if contract {
                vec![p.contract(e, side)]
            } else {
                p.delete(e, side).to_vec()
            };
            p.absorb_pendants(touched);
        }
        let left: Vec<usize> = (0..2 * l * l).filter(|&e| p.alive[e]).collect();
        let mut kept = vec![p.v(0, 0), p.h(l - 1, 0)];
        kept.sort_unstable();
        assert_eq!(left, kept, "reduction left unexpected edges");
        p
    }
}

/// Gates of the disentangling circuit in plan order, before layering.
pub fn disentangling_gates(l: usize) -> Vec<CxGate> {
    let p = Plan::run(l);
    p.gates
        .iter()
        .map(|&(c, t)| CxGate::new(p.site(c), p.site(t)))
        .collect()
}

/// Critical-path list scheduling. Each gate is placed after every earlier
/// gate it fails to commute with; among ready gates the longest remaining
/// dependency chain goes first, and a layer never reuses a site.
pub fn schedule_layers(gates: &[CxGate]) -> Vec<Layer> {
    let m = gates.len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut as_control: HashMap<Coord, Vec<usize>> = HashMap::new();
    let mut as_target: HashMap<Coord, Vec<usize>> = HashMap::new();
    for (b, g) in gates.iter().enumerate() {
        let mut p: Vec<usize> = as_control
            .get(&g.target)
            .into_iter()
            .chain(as_target.get(&g.control))
            .flatten()
            .copied()
            .collect();
        p.sort_unstable();
        p.dedup();
        for &a in &p {
            succs[a].push(b);
        }
        preds[b] = p;
        as_control.entry(g.control).or_default().push(b);
        as_target.entry(g.target).or_default().push(b);
    }
    let mut tail = vec![0usize; m];
    for a in (0..m).rev() {
        tail[a] = 1 + succs[a].iter().map(|&b| tail[b]).max().unwrap_or(0);
    }

    let mut layer_of = vec![usize::MAX; m];
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let now = layers.len();
        let mut ready: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&g| preds[g].iter().all(|&a| layer_of[a] < now))
            .collect();
        ready.sort_by_key(|&g| (std::cmp::Reverse(tail[g]), g));
        let mut used: HashSet<Coord> = HashSet::new();
        let mut placed = Vec::new();
        for g in ready {
            let CxGate { control, target } = gates[g];
            if used.contains(&control) || used.contains(&target) {
                continue;
            }
            used.insert(control);
            used.insert(target);
            layer_of[g] = now;
            placed.push(g);
        }
        placed.sort_unstable();
        remaining.retain(|&g| layer_of[g] == usize::MAX);
        layers.push(Layer::new(placed.into_iter().map(|g| gates[g]).collect()));
    }
    layers
}

/// X-type sites of the reduction: the sites of deleted edges.
pub fn x_type_sites(l: usize) -> Vec<Coord> {
    let p = Plan::run(l);
    let mut sites: Vec<Coord> = p.deleted.iter().map(|&e| p.site(e)).collect();
    sites.sort();
    sites
}

/// The 2L-layer disentangling circuit with its Hadamard layer on the
/// X-type sites.
pub fn disentangling_circuit(lat: &Lattice) -> Circuit {
    let p = Plan::run(lat.l());
    let gates: Vec<CxGate> = p
        .gates
        .iter()
        .map(|&(c, t)| CxGate::new(p.site(c), p.site(t)))
        .collect();
    let mut h_sites: Vec<Coord> = p.deleted.iter().map(|&e| p.site(e)).collect();
    h_sites.sort();
    Circuit {
        l: lat.l(),
        cx_layers: schedule_layers(&gates),
        h_sites,
    }
}

/// Encoder: the Hadamard layer first, then the CX layers in application
/// order (the disentangling layers reversed).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Encoder {
    pub l: usize,
    pub h_sites: Vec<Coord>,
    pub cx_layers: Vec<Layer>,
}

impl Encoder {
    pub fn from_disentangler(c: &Circuit) -> Self {
        Self {
            l: c.l,
            h_sites: c.h_sites.clone(),
            cx_layers: c.cx_layers.iter().rev().cloned().collect(),
        }
    }

    pub fn to_disentangler(&self) -> Circuit {
        Circuit {
            l: self.l,
            cx_layers: self.cx_layers.iter().rev().cloned().collect(),
            h_sites: self.h_sites.clone(),
        }
    }

    pub fn gate_count(&self) -> usize {
        self.cx_layers.iter().map(Layer::len).sum()
    }

    pub fn depth(&self) -> usize {
        self.cx_layers.len() + usize::from(!self.h_sites.is_empty())
    }

    pub fn gates(&self) -> impl Iterator<Item = CxGate> + '_ {
        self.cx_layers.iter().flat_map(|l| l.gates.iter().copied())
    }

    /// Schrodinger-picture image U P U^dagger of `op`.
    pub fn apply_to(&self, op: &PauliOp) -> PauliOp {
        let mut out = op.clone();
        for &s in &self.h_sites {
            out.apply_h(s);
        }
        for g in self.gates() {
            out.apply_cx(g);
        }
        out
    }
}

pub fn encoder_circuit(lat: &Lattice) -> Encoder {
    Encoder::from_disentangler(&disentangling_circuit(lat))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateStats {
    pub cx_count: usize,
    pub cx_layer_count: usize,
    pub total_depth: usize,
    pub max_doubled_gate_distance: usize,
}

pub fn gate_stats(c: &Circuit) -> GateStats {
    let lat = Lattice::new(c.l).ok();
    let max_doubled_gate_distance = c
        .gates()
        .map(|g| match &lat {
            Some(lat) => lat.doubled_distance(g.control, g.target),
            None => g.control.x.abs_diff(g.target.x) + g.control.y.abs_diff(g.target.y),
        })
        .max()
        .unwrap_or(0);
    GateStats {
        cx_count: c.gate_count(),
        cx_layer_count: c.cx_layers.len(),
        total_depth: c.cx_layers.len() + usize::from(!c.h_sites.is_empty()),
        max_doubled_gate_distance,
    }
}

/// Stabilizers and logicals after the CX layers of a disentangling circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportReport {
    pub stars: Vec<(Coord, PauliOp)>,
    pub plaquettes: Vec<(Coord, PauliOp)>,
    pub logicals: Logicals,
}

fn first_set(words: impl Iterator<Item = u64>) -> Option<usize> {
    words
        .enumerate()
        .find(|&(_, w)| w != 0)
        .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

/// Transports one block of pure operators through CX layers, checking after
/// every layer that X-only operators stay X-only, Z-only stay Z-only, and no
/// sign appears.
fn transport_block(
    lat: &Lattice,
    layers: &[Layer],
    ops: &[PauliOp],
    kinds: &[Pauli],
) -> std::result::Result<Vec<PauliOp>, (usize, usize, String)> {
    let map = lat.index_map();
    let n = lat.num_qubits();
    let mut batch = PauliBatch::from_paulis(n, ops, &map).map_err(|e| (0, 0, e.to_string()))?;
    let words = ops.len().div_ceil(64).max(1);
    let mut xmask = vec![0u64; words];
    let mut zmask = vec![0u64; words];
    for (k, p) in kinds.iter().enumerate() {
        let m = if *p == Pauli::X {
            &mut xmask
        } else {
            &mut zmask
        };
        m[k / 64] |= 1 << (k % 64);
    }
    for (li, layer) in layers.iter().enumerate() {
        let mut touched = Vec::with_capacity(2 * layer.len());
        for &g in &layer.gates {
            let (c, t) = gate_indices(g, &map).map_err(|e| (0, li, e.to_string()))?;
            batch.apply_cx(c, t);
            touched.push(c);
            touched.push(t);
        }
        for &q in &touched {
            let xs = batch.x_column(q);
            let zs = batch.z_column(q);
            let bad = (0..words).map(|k| (xs[k] & zmask[k]) | (zs[k] & xmask[k]));
            if let Some(k) = first_set(bad) {
                return Err((k, li, "mixed Pauli type".into()));
            }
        }
        if let Some(k) = first_set(batch.signs().iter().copied()) {
            return Err((k, li, "negative sign".into()));
        }
    }
    Ok(batch.to_paulis(&map))
}

/// Conjugates every star, plaquette and logical forward through the CX
/// layers of `c` (the Hadamard layer is skipped).
pub fn transport_all(lat: &Lattice, c: &Circuit) -> Result<TransportReport> {
    let star_centers = lat.star_centers();
    let plaquette_centers = lat.plaquette_centers();
    let (stars, plaquettes) = lat.all_stabilizers();
    let lg = lat.logical_representatives();
    let mut names: Vec<String> = star_centers.iter().map(|c| format!("star {c}")).collect();
    names.extend(plaquette_centers.iter().map(|c| format!("plaquette {c}")));
    names.extend(lg.named().iter().map(|(n, _)| n.to_string()));
    let mut ops: Vec<PauliOp> = stars.into_iter().chain(plaquettes).collect();
    ops.extend(lg.named().iter().map(|(_, op)| (*op).clone()));
    let mut kinds = vec![Pauli::X; star_centers.len()];
    kinds.extend(vec![Pauli::Z; plaquette_centers.len()]);
    kinds.extend([Pauli::X, Pauli::Z, Pauli::X, Pauli::Z]);

    let blocks: Vec<_> = ops
        .par_chunks(BLOCK)
        .zip(kinds.par_chunks(BLOCK))
        .map(|(o, k)| transport_block(lat, &c.cx_layers, o, k))
        .collect();
    let mut out = Vec::with_capacity(ops.len());
    for (b, res) in blocks.into_iter().enumerate() {
        match res {
            Ok(v) => out.extend(v),
            Err((k, layer, why)) => {
                return Err(Error::Transport(format!(
                    "{} at layer {layer}: {why}",
                    names[b * BLOCK + k]
                )))
            }
        }
    }
    let nl = out.split_off(star_centers.len() + plaquette_centers.len());
    let pl = out.split_off(star_centers.len());
    let [xl1, zl1, xl2, zl2]: [PauliOp; 4] = nl.try_into().expect("four logicals");
    Ok(TransportReport {
        stars: star_centers.into_iter().zip(out).collect(),
        plaquettes: plaquette_centers.into_iter().zip(pl).collect(),
        logicals: Logicals { xl1, zl1, xl2, zl2 },
    })
}

/// An Ising chain: `sites[0]` carries the field, consecutive sites are
/// coupled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsingChain {
    pub sites: Vec<Coord>,
}

impl IsingChain {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn field(&self) -> Coord {
        self.sites[0]
    }

    pub fn couplings(&self) -> Vec<(Coord, Coord)> {
        self.sites.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

/// Final form of one Pauli type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeForm {
    pub pauli: Pauli,
    /// Center of the dependent generator left out.
    pub dropped: Coord,
    pub sites: BTreeSet<Coord>,
    pub chains: Vec<IsingChain>,
    /// Sites reduced to a single-site term directly by a three-gate fan on
    /// a rotated square.
    pub singles: Vec<Coord>,
    /// The L^2-1 independent transported generators.
    pub generators: Vec<PauliOp>,
}

impl TypeForm {
    pub fn chain_lengths(&self) -> Vec<usize> {
        self.chains.iter().map(IsingChain::len).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinalFormSummary {
    pub l: usize,
    pub trivial_sites: [Coord; 2],
    pub x: TypeForm,
    pub z: TypeForm,
}

impl FinalFormSummary {
    pub fn generator_count(&self) -> usize {
        self.x.generators.len() + self.z.generators.len()
    }
}

fn is_check_support(lat: &Lattice, site: Coord, others: &[Coord]) -> bool {
    let mut set: Vec<Coord> = others.to_vec();
    set.push(site);
    set.sort();
    set.dedup();
    set.len() == 4
        && lat.adjacent(site).iter().any(|&center| {
            let mut sup = lat.adjacent(center).to_vec();
            sup.sort();
            sup == set
        })
}

fn classify_type(
    lat: &Lattice,
    pauli: Pauli,
    transported: &[(Coord, PauliOp)],
    touching: Coord,
    partners: &HashMap<Coord, Vec<Coord>>,
) -> Result<TypeForm> {
    let kind = if pauli == Pauli::X {
        "star"
    } else {
        "plaquette"
    };
    let dropped = transported
        .iter()
        .filter(|(c, _)| lat.adjacent(*c).contains(&touching))
        .min_by_key(|(c, op)| (std::cmp::Reverse(op.weight()), *c))
        .map(|(c, _)| *c)
        .ok_or_else(|| Error::Classification(format!("no {kind} touches {touching}")))?;

    let trivial = lat.trivial_sites();
    let mut generators = Vec::new();
    let mut sites = BTreeSet::new();
    let mut adj: BTreeMap<Coord, Vec<Coord>> = BTreeMap::new();
    let mut fields = BTreeSet::new();
    for (center, op) in transported.iter().filter(|(c, _)| *c != dropped) {
        let name = format!("{kind} {center}");
        if op.is_negative() || !op.is_pure(pauli) {
            return Err(Error::Classification(format!("{name} became {op}")));
        }
        let s: Vec<Coord> = op.sites().collect();
        if s.iter().any(|c| trivial.contains(c)) {
            return Err(Error::Classification(format!(
                "{name} acts on a trivial site: {op}"
            )));
        }
        match s[..] {
            [a] => {
                if !fields.insert(a) {
                    return Err(Error::Classification(format!(
                        "{name} repeats a field on {a}"
                    )));
                }
            }
            [a, b] => {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
            _ => {
                return Err(Error::Classification(format!(
                    "{name} has weight {}: {op}",
                    s.len()
                )))
            }
        }
        sites.extend(s);
        generators.push(op.clone());
    }
    let want = lat.l() * lat.l() - 1;
    if sites.len() != want {
        return Err(Error::Classification(format!(
            "{kind}s cover {} sites, expected {want}",
            sites.len()
        )));
    }

    let mut seen = BTreeSet::new();
    let mut chains = Vec::new();
    let mut singles = Vec::new();
    for &start in &sites {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            if comp.insert(u) {
                stack.extend(adj.get(&u).into_iter().flatten().copied());
            }
        }
        seen.extend(comp.iter().copied());
        let deg = |u: &Coord| adj.get(u).map_or(0, Vec::len);
        let edges: usize = comp.iter().map(deg).sum::<usize>() / 2;
        let comp_fields: Vec<Coord> = comp
            .iter()
            .copied()
            .filter(|u| fields.contains(u))
            .collect();
        if comp_fields.len() != 1 || edges + 1 != comp.len() || comp.iter().any(|u| deg(u) > 2) {
            return Err(Error::Classification(format!(
                "{kind} terms around {start} do not form a chain with one field"
            )));
        }
        let field = comp_fields[0];
        if deg(&field) > 1 {
            return Err(Error::Classification(format!(
                "field on {field} is not at a chain end"
            )));
        }
        let mut path = vec![field];
        while path.len() < comp.len() {
            let last = *path.last().unwrap();
            let prev = path.len().checked_sub(2).map(|i| path[i]);
            let next = adj[&last]
                .iter()
                .copied()
                .find(|&n| Some(n) != prev)
                .unwrap();
            path.push(next);
        }
        if path.len() == 1 {
            let p = partners.get(&field).map_or(&[][..], Vec::as_slice);
            if p.len() == 3 && is_check_support(lat, field, p) {
                singles.push(field);
                continue;
            }
        }
        chains.push(IsingChain { sites: path });
    }
    chains.sort_by_key(|c| (c.len(), c.sites[0]));
    let lengths: Vec<usize> = chains.iter().map(IsingChain::len).collect();
    if lengths != (1..lat.l()).collect::<Vec<_>>() {
        return Err(Error::Classification(format!(
            "{kind} chain lengths {lengths:?}, expected 1..{}",
            lat.l() - 1
        )));
    }
    Ok(TypeForm {
        pauli,
        dropped,
        sites,
        chains,
        singles,
        generators,
    })
}

/// Checks the disentangled form: logicals on the trivial sites, and the
/// remaining stars and plaquettes forming one Ising chain of each length
/// 1..L-1 per type plus directly reduced single-site terms.
pub fn classify_final_form(
    lat: &Lattice,
    report: &TransportReport,
    c: &Circuit,
) -> Result<FinalFormSummary> {
    let [t0, t1] = lat.trivial_sites();
    let lg = &report.logicals;
    let expect = [
        ("XL1", &lg.xl1, PauliOp::single(Pauli::X, t1)),
        ("ZL1", &lg.zl1, PauliOp::single(Pauli::Z, t1)),
        ("XL2", &lg.xl2, PauliOp::single(Pauli::X, t0)),
        ("ZL2", &lg.zl2, PauliOp::single(Pauli::Z, t0)),
    ];
    for (name, got, want) in expect {
        if *got != want {
            return Err(Error::Classification(format!(
                "{name} maps to {got}, expected {want}"
            )));
        }
    }

    let mut into: HashMap<Coord, Vec<Coord>> = HashMap::new();
    let mut out_of: HashMap<Coord, Vec<Coord>> = HashMap::new();
    for g in c.gates() {
        into.entry(g.target).or_default().push(g.control);
        out_of.entry(g.control).or_default().push(g.target);
    }
    let x = classify_type(lat, Pauli::X, &report.stars, t0, &out_of)?;
    let z = classify_type(lat, Pauli::Z, &report.plaquettes, t1, &into)?;
    if let Some(s) = x.sites.intersection(&z.sites).next() {
        return Err(Error::Classification(format!(
            "{s} is both X-type and Z-type"
        )));
    }
    Ok(FinalFormSummary {
        l: lat.l(),
        trivial_sites: [t0, t1],
        x,
        z,
    })
}

/// Outcome of checking an encoder against the toric code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub code_rank: usize,
    pub encoded_rank: usize,
    pub failures: Vec<String>,
    /// A generator in one group but not the other, when the groups differ.
    pub separating: Option<PauliOp>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn apply_encoder_batch(lat: &Lattice, enc: &Encoder, ops: &[PauliOp]) -> Result<Vec<PauliOp>> {
    let map = lat.index_map();
    let n = lat.num_qubits();
    let blocks: Vec<Result<Vec<PauliOp>>> = ops
        .par_chunks(BLOCK)
        .map(|chunk| {
            let mut b = PauliBatch::from_paulis(n, chunk, &map)?;
            for &s in &enc.h_sites {
                b.apply_h(map.index(s).ok_or(Error::UnindexedSite(s))?);
            }
            for layer in &enc.cx_layers {
                b.apply_layer(layer, &map)?;
            }
            Ok(b.to_paulis(&map))
        })
        .collect();
    let mut out = Vec::with_capacity(ops.len());
    for b in blocks {
        out.extend(b?);
    }
    Ok(out)
}

/// Maps the product-state stabilizers (Z on every site except the two
/// `trivial` ones) through the encoder and compares the resulting group
/// with the toric stabilizer group. Also checks that single-site X and Z on
/// the trivial sites become valid, correctly paired logical operators.
pub fn verify_encoder(lat: &Lattice, enc: &Encoder, trivial: [Coord; 2]) -> Verdict {
    let map = lat.index_map();
    let n = lat.num_qubits();
    let mut verdict = Verdict {
        code_rank: 0,
        encoded_rank: 0,
        failures: Vec::new(),
        separating: None,
    };
    let fail = |v: &mut Verdict, msg: String| v.failures.push(msg);

    let (stars, plaquettes) = lat.all_stabilizers();
    let code: Vec<PauliOp> = stars.into_iter().chain(plaquettes).collect();
    let product: Vec<PauliOp> = lat
        .qubit_sites()
        .into_iter()
        .filter(|s| !trivial.contains(s))
        .map(|s| PauliOp::single(Pauli::Z, s))
        .collect();
    let logical_in: Vec<PauliOp> = trivial
        .iter()
        .flat_map(|&t| [PauliOp::single(Pauli::X, t), PauliOp::single(Pauli::Z, t)])
        .collect();

    let mut all_in = product.clone();
    all_in.extend(logical_in);
    let mut mapped = match apply_encoder_batch(lat, enc, &all_in) {
        Ok(m) => m,
        Err(e) => {
            fail(&mut verdict, format!("encoder is not applicable: {e}"));
            return verdict;
        }
    };
    let logicals = mapped.split_off(product.len());

    let tab = |ops: &[PauliOp]| Tableau::from_paulis(n, ops, &map).map(|t| t.row_reduce());
    let (Ok((code_red, code_rank)), Ok((enc_red, enc_rank))) = (tab(&code), tab(&mapped)) else {
        fail(&mut verdict, "operators left the register".into());
        return verdict;
    };
    verdict.code_rank = code_rank;
    verdict.encoded_rank = enc_rank;
    if code_rank != n - 2 {
        fail(
            &mut verdict,
            format!("code rank {code_rank}, expected {}", n - 2),
        );
    }
    if enc_red != code_red {
        let missing = code
            .iter()
            .find(|g| enc_red.membership(g, &map) != Ok(Membership::Member));
        let extra = mapped
            .iter()
            .zip(&product)
            .find(|(g, _)| code_red.membership(g, &map) != Ok(Membership::Member));
        if let Some(g) = missing {
            fail(
                &mut verdict,
                format!("stabilizer {g} is not generated by the encoded state"),
            );
            verdict.separating = Some(g.clone());
        } else if let Some((g, src)) = extra {
            fail(
                &mut verdict,
                format!("encoded generator {g} (from {src}) is not a stabilizer"),
            );
            verdict.separating = Some(g.clone());
        } else {
            fail(
                &mut verdict,
                format!("rank mismatch: {enc_rank} vs {code_rank}"),
            );
        }
    }

    let names = ["X1", "Z1", "X2", "Z2"];
    for (name, op) in names.iter().zip(&logicals) {
        if let Some(g) = code.iter().find(|g| !commutes(op, g)) {
            fail(
                &mut verdict,
                format!("logical {name} = {op} anticommutes with {g}"),
            );
        }
        if code_red.membership(op, &map) != Ok(Membership::NotMember) {
            fail(
                &mut verdict,
                format!("logical {name} = {op} is a stabilizer"),
            );
        }
    }
    for a in 0..4 {
        for b in a + 1..4 {
            let paired = a / 2 == b / 2;
            if commutes(&logicals[a], &logicals[b]) == paired {
                fail(
                    &mut verdict,
                    format!(
                        "logicals {} and {} have the wrong commutation",
                        names[a], names[b]
                    ),
                );
            }
        }
    }
    verdict
}
