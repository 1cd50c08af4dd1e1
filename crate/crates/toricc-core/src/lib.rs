//! Local Clifford encoder synthesis for the L x L toric code.
//!
//! The disentangling circuit maps every star and plaquette of the toric code
//! to a set of disjoint Ising chains with an end field, using 2L layers of
//! nearest-neighbour CX gates. Reversing it, with a Hadamard layer on the
//! X-type qubits, gives a depth 2L+1 encoder.

pub mod error;
pub mod lattice;
pub mod oracle;
pub mod pauli;
pub mod synthesis;
pub mod tableau;

pub use error::{Error, Result};
pub use lattice::{Coord, Lattice, Logicals, SiteIndexMap};
pub use oracle::{check_logical_encoding, DenseState, OracleReport};
pub use pauli::{
    commutes, conjugate_by_circuit, conjugate_by_cx, conjugate_by_h, conjugate_by_layer, multiply,
    validate_layer, Circuit, CxGate, Direction, Layer, Pauli, PauliOp, Violation,
};
pub use synthesis::{
    classify_final_form, disentangling_circuit, encoder_circuit, gate_stats, transport_all,
    verify_encoder, Encoder, FinalFormSummary, GateStats, IsingChain, TransportReport, TypeForm,
    Verdict,
};
pub use tableau::{gaussian_elimination_encoder, groups_equal, PauliBatch, Tableau};
