//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toricc_core::synthesis::disentangling_gates;
use toricc_core::{
    check_logical_encoding, classify_final_form, commutes, conjugate_by_circuit,
    disentangling_circuit, encoder_circuit, gate_stats, gaussian_elimination_encoder,
    transport_all, validate_layer, verify_encoder, Circuit, Coord, Direction, Encoder, Lattice,
    Layer, Pauli, PauliOp,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn lattice(l: usize) -> Lattice {
    Lattice::new(l).expect("L >= 2")
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed > limit {
        Err(format!("{what} took {elapsed:.1?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn depth() -> Outcome {
    let start = Instant::now();
    for l in 2..=64 {
        let s = gate_stats(&disentangling_circuit(&lattice(l)));
        if s.cx_layer_count != 2 * l || s.total_depth != 2 * l + 1 {
            return Err(format!(
                "L={l}: {} CX layers, depth {}",
                s.cx_layer_count, s.total_depth
            ));
        }
    }
    within(start.elapsed(), Duration::from_secs(60), "sweep")?;
    Ok(format!(
        "L=2..64 have 2L CX layers and depth 2L+1 ({:.1?})",
        start.elapsed()
    ))
}

fn budget() -> Outcome {
    for l in 2..=64 {
        let got = disentangling_gates(l).len();
        if got != 3 * l * l + 2 * l - 5 {
            return Err(format!("L={l}: {got} gates"));
        }
    }
    let at8 = disentangling_circuit(&lattice(8)).gate_count();
    if at8 != 203 {
        return Err(format!("L=8: {at8} gates"));
    }
    Ok("L=2..64 use 3L^2+2L-5 CX gates; L=8 uses 203".into())
}

fn locality() -> Outcome {
    let mut layers = 0;
    for l in 2..=64 {
        let lat = lattice(l);
        let c = disentangling_circuit(&lat);
        for (i, layer) in c.cx_layers.iter().enumerate() {
            if let Some(v) = validate_layer(&lat, layer).first() {
                return Err(format!("L={l} layer {i}: {v}"));
            }
        }
        layers += c.cx_layers.len();
    }
    Ok(format!("{layers} layers over L=2..64, zero violations"))
}

fn final_form() -> Outcome {
    for l in 2..=32 {
        let lat = lattice(l);
        let c = disentangling_circuit(&lat);
        let rep = transport_all(&lat, &c).map_err(|e| format!("L={l}: {e}"))?;
        let ff = classify_final_form(&lat, &rep, &c).map_err(|e| format!("L={l}: {e}"))?;
        let last = 2 * l - 1;
        if ff.trivial_sites != [Coord::new(0, 0), Coord::new(last, last)] {
            return Err(format!("L={l}: trivial sites {:?}", ff.trivial_sites));
        }
        let want: Vec<usize> = (1..l).collect();
        for t in [&ff.x, &ff.z] {
            if t.chain_lengths() != want {
                return Err(format!("L={l}: chain lengths {:?}", t.chain_lengths()));
            }
            if !t
                .generators
                .iter()
                .all(|g| g.is_pure(t.pauli) && !g.is_negative())
            {
                return Err(format!("L={l}: impure generator"));
            }
        }
        if ff.x.sites.iter().copied().collect::<Vec<_>>() != c.h_sites {
            return Err(format!("L={l}: Hadamard sites differ from X-type sites"));
        }
    }
    Ok("L=2..32 classify with chains 1..L-1 per type, pure +1 generators".into())
}

fn logicals() -> Outcome {
    for l in 2..=32 {
        let lat = lattice(l);
        let rep = transport_all(&lat, &disentangling_circuit(&lat)).map_err(|e| e.to_string())?;
        let [t0, t1] = lat.trivial_sites();
        let lg = &rep.logicals;
        let want = [
            (&lg.xl1, PauliOp::single(Pauli::X, t1)),
            (&lg.zl1, PauliOp::single(Pauli::Z, t1)),
            (&lg.xl2, PauliOp::single(Pauli::X, t0)),
            (&lg.zl2, PauliOp::single(Pauli::Z, t0)),
        ];
        for (got, w) in want {
            if *got != w {
                return Err(format!("L={l}: {got} instead of {w}"));
            }
        }
    }
    Ok("L=2..32: XL1,ZL1 -> (2L-1,2L-1); XL2,ZL2 -> (0,0); sign +1".into())
}

fn group_correctness() -> Outcome {
    let start = Instant::now();
    for l in 2..=16 {
        let lat = lattice(l);
        let v = verify_encoder(&lat, &encoder_circuit(&lat), lat.trivial_sites());
        if !v.passed() || v.code_rank != 2 * l * l - 2 {
            return Err(format!("main L={l}: {:?}", v.failures));
        }
    }
    for l in 2..=8 {
        let lat = lattice(l);
        let (enc, trivial) = gaussian_elimination_encoder(&lat).map_err(|e| e.to_string())?;
        let v = verify_encoder(&lat, &enc, trivial);
        if !v.passed() {
            return Err(format!("baseline L={l}: {:?}", v.failures));
        }
    }
    within(start.elapsed(), Duration::from_secs(120), "group checks")?;
    Ok(format!(
        "main encoder L=2..16 and baseline L=2..8 match the toric group ({:.1?})",
        start.elapsed()
    ))
}

fn state_vector() -> Outcome {
    let mut notes = Vec::new();
    for (l, limit) in [(2, 10), (3, 120)] {
        let start = Instant::now();
        let lat = lattice(l);
        let rep =
            check_logical_encoding(&lat, &encoder_circuit(&lat)).map_err(|e| e.to_string())?;
        if !rep.passed() {
            return Err(format!("L={l}: {:?}", rep.failures));
        }
        within(
            start.elapsed(),
            Duration::from_secs(limit),
            &format!("L={l}"),
        )?;
        notes.push(format!("L={l} in {:.1?}", start.elapsed()));
    }
    Ok(format!(
        "four logical inputs encode correctly: {}",
        notes.join(", ")
    ))
}

fn random_op(rng: &mut impl Rng, sites: &[Coord]) -> PauliOp {
    let negative = rng.random();
    let terms: Vec<_> = sites
        .iter()
        .filter_map(|&c| match rng.random_range(0..4) {
            0 => None,
            1 => Some((c, Pauli::X)),
            2 => Some((c, Pauli::Y)),
            _ => Some((c, Pauli::Z)),
        })
        .collect();
    PauliOp::from_terms(negative, terms)
}

fn properties() -> Outcome {
    let lat = lattice(4);
    let c = disentangling_circuit(&lat);
    let sites = lat.qubit_sites();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7031c);
    for k in 0..10_000 {
        let a = random_op(&mut rng, &sites);
        let b = random_op(&mut rng, &sites);
        let fa = conjugate_by_circuit(&a, &c, Direction::Forward);
        let fb = conjugate_by_circuit(&b, &c, Direction::Forward);
        if commutes(&a, &b) != commutes(&fa, &fb) {
            return Err(format!("pair {k}: commutation changed"));
        }
    }
    for k in 0..200 {
        let a = random_op(&mut rng, &sites);
        let f = conjugate_by_circuit(&a, &c, Direction::Forward);
        if conjugate_by_circuit(&f, &c, Direction::Inverse) != a {
            return Err(format!("op {k}: inverse does not undo forward"));
        }
    }
    let cx_only = Circuit {
        h_sites: Vec::new(),
        ..c.clone()
    };
    for k in 0..200 {
        let p = if k % 2 == 0 { Pauli::X } else { Pauli::Z };
        let subset: Vec<Coord> = sites
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.5))
            .collect();
        let mut op = PauliOp::uniform(p, subset);
        for layer in &cx_only.cx_layers {
            op = toricc_core::conjugate_by_layer(&op, layer);
            if !op.is_pure(p) || op.is_negative() {
                return Err(format!("random {p:?} operator {k} lost purity"));
            }
        }
    }
    for l in 2..=32 {
        let lat = lattice(l);
        transport_all(&lat, &disentangling_circuit(&lat)).map_err(|e| format!("L={l}: {e}"))?;
    }
    Ok("10^4 commutation pairs, 200 round trips, purity and sign in every layer".into())
}

fn mutation() -> Outcome {
    let lat = lattice(4);
    let c = disentangling_circuit(&lat);
    let total = c.gate_count();
    let mut caught = 0;
    let mut by = [0usize; 3];
    for (li, layer) in c.cx_layers.iter().enumerate() {
        for gi in 0..layer.len() {
            let mut m = c.clone();
            let mut gates = layer.gates.clone();
            gates.remove(gi);
            m.cx_layers[li] = Layer::new(gates);
            let form_fails = transport_all(&lat, &m)
                .and_then(|r| classify_final_form(&lat, &r, &m))
                .is_err();
            let enc = Encoder::from_disentangler(&m);
            let verify_fails = !verify_encoder(&lat, &enc, lat.trivial_sites()).passed();
            if form_fails || verify_fails {
                caught += 1;
                by[0] += form_fails as usize;
                by[1] += verify_fails as usize;
            } else {
                return Err(format!("deleting gate {gi} of layer {li} went unnoticed"));
            }
        }
    }
    let small = lattice(2);
    let c2 = disentangling_circuit(&small);
    for (li, layer) in c2.cx_layers.iter().enumerate() {
        for gi in 0..layer.len() {
            let mut m = c2.clone();
            m.cx_layers[li].gates.remove(gi);
            let rep = check_logical_encoding(&small, &Encoder::from_disentangler(&m))
                .map_err(|e| e.to_string())?;
            if rep.passed() {
                return Err(format!(
                    "oracle missed deletion of gate {gi} in layer {li} at L=2"
                ));
            }
            by[2] += 1;
        }
    }
    Ok(format!(
        "all {caught}/{total} single-gate deletions at L=4 fail (final form {}, verify {}); oracle catches all {} at L=2",
        by[0], by[1], by[2]
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("depth", depth),
        ("gate budget", budget),
        ("locality", locality),
        ("final form", final_form),
        ("logical transport", logicals),
        ("group correctness", group_correctness),
        ("state vector", state_vector),
        ("property suites", properties),
        ("mutation sensitivity", mutation),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(msg) => println!("PASS {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
