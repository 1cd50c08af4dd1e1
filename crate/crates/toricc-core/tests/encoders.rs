use std::collections::BTreeSet;

use num_complex::Complex64;
use toricc_core::oracle::encode_logical;
use toricc_core::tableau::css_encoder;
use toricc_core::{
    check_logical_encoding, encoder_circuit, gaussian_elimination_encoder, multiply,
    verify_encoder, Coord, Lattice, Layer, Pauli, PauliOp,
};

fn closure(gens: &[PauliOp]) -> BTreeSet<String> {
    let mut group = vec![PauliOp::identity()];
    for g in gens {
        let more: Vec<PauliOp> = group.iter().map(|h| multiply(h, g).unwrap()).collect();
        for m in more {
            if !group.contains(&m) {
                group.push(m);
            }
        }
    }
    group.iter().map(|g| g.to_string()).collect()
}

#[test]
fn bell_pair_regenerates_its_group() {
    let (a, b) = (Coord::new(0, 0), Coord::new(2, 0));
    let xx = PauliOp::uniform(Pauli::X, [a, b]);
    let zz = PauliOp::uniform(Pauli::Z, [a, b]);
    let enc = css_encoder(
        &[a, b],
        std::slice::from_ref(&xx),
        std::slice::from_ref(&zz),
    )
    .unwrap();
    let mapped: Vec<PauliOp> = [a, b]
        .iter()
        .map(|&s| {
            let mut op = PauliOp::single(Pauli::Z, s);
            for &h in &enc.h_sites {
                op.apply_h(h);
            }
            for &g in &enc.gates {
                op.apply_cx(g);
            }
            op
        })
        .collect();
    assert_eq!(closure(&mapped), closure(&[xx, zz]));
}

#[test]
fn main_encoder_passes_group_check() {
    for l in 2..=10 {
        let lat = Lattice::new(l).unwrap();
        let v = verify_encoder(&lat, &encoder_circuit(&lat), lat.trivial_sites());
        assert!(v.passed(), "L={l}: {:?}", v.failures);
        assert_eq!(
            (v.code_rank, v.encoded_rank),
            (2 * l * l - 2, 2 * l * l - 2)
        );
    }
}

#[test]
fn baseline_encoder_passes_group_check() {
    for l in 2..=6 {
        let lat = Lattice::new(l).unwrap();
        let (enc, trivial) = gaussian_elimination_encoder(&lat).unwrap();
        let v = verify_encoder(&lat, &enc, trivial);
        assert!(v.passed(), "L={l}: {:?}", v.failures);
    }
}

#[test]
fn baseline_is_not_local() {
    let lat = Lattice::new(4).unwrap();
    let (enc, _) = gaussian_elimination_encoder(&lat).unwrap();
    assert!(enc
        .gates()
        .any(|g| lat.doubled_distance(g.control, g.target) > 2));
}

#[test]
fn wrong_trivial_sites_fail() {
    let lat = Lattice::new(3).unwrap();
    let v = verify_encoder(
        &lat,
        &encoder_circuit(&lat),
        [Coord::new(0, 0), Coord::new(1, 1)],
    );
    assert!(!v.passed());
}

#[test]
fn deleted_gate_names_a_separating_generator() {
    let lat = Lattice::new(4).unwrap();
    let mut enc = encoder_circuit(&lat);
    let mut gates = enc.cx_layers[3].gates.clone();
    gates.remove(0);
    enc.cx_layers[3] = Layer::new(gates);
    let v = verify_encoder(&lat, &enc, lat.trivial_sites());
    assert!(!v.passed());
    assert!(v.separating.is_some());
}

#[test]
fn oracle_l2_and_l3() {
    for l in [2, 3] {
        let lat = Lattice::new(l).unwrap();
        let rep = check_logical_encoding(&lat, &encoder_circuit(&lat)).unwrap();
        assert!(rep.passed(), "L={l}: {:?}", rep.failures);
        assert!(rep.max_overlap < 1e-10);
        for r in &rep.inputs {
            assert!((r.min_stabilizer - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn oracle_agrees_with_group_check() {
    for l in [2, 3] {
        let lat = Lattice::new(l).unwrap();
        let enc = encoder_circuit(&lat);
        assert!(verify_encoder(&lat, &enc, lat.trivial_sites()).passed());
        assert!(check_logical_encoding(&lat, &enc).unwrap().passed());
    }
}

#[test]
fn superposition_inputs_encode_linearly() {
    let lat = Lattice::new(2).unwrap();
    let enc = encoder_circuit(&lat);
    let map = lat.index_map();
    let (a, b) = (0.6, 0.8);
    let zero = Complex64::new(0.0, 0.0);
    let s = encode_logical(
        &lat,
        &enc,
        [Complex64::new(a, 0.0), zero, zero, Complex64::new(0.0, b)],
    )
    .unwrap();
    assert!((s.norm() - 1.0).abs() < 1e-10);
    let (stars, plaquettes) = lat.all_stabilizers();
    for g in stars.iter().chain(&plaquettes) {
        assert!((s.expectation(g, &map).unwrap() - 1.0).abs() < 1e-10);
    }
    let lg = lat.logical_representatives();
    let zz = multiply(&lg.zl1, &lg.zl2).unwrap();
    assert!((s.expectation(&zz, &map).unwrap() - 1.0).abs() < 1e-10);
    let z1 = s.expectation(&lg.zl1, &map).unwrap();
    assert!((z1 - (a * a - b * b)).abs() < 1e-10);
}
