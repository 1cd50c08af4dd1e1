use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use toricc_core::oracle::LABELS;
use toricc_core::{
    check_logical_encoding, classify_final_form, disentangling_circuit, encoder_circuit,
    gate_stats, gaussian_elimination_encoder, transport_all, validate_layer, verify_encoder,
    Circuit, Encoder, Lattice, PauliOp, Tableau,
};

use crate::error::{CliError, CliResult};
use crate::export::{circuit_to_json, encoder_to_stim};
use crate::render::{render_final_form_svg, render_layers_svg};

const INDEX_NOTE: &str = "Qubit (x,y) has export index x*L + y/2.";

#[derive(Parser)]
#[command(name = "toricc", version, about = "Local-Clifford encoder compiler for the L x L toric code", after_help = INDEX_NOTE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    StimText,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Build the circuit and export it.
    #[command(after_help = INDEX_NOTE)]
    Synth {
        #[arg(long = "L", value_parser = clap::value_parser!(u32).range(2..))]
        l: u32,
        /// Emit layers in encoder order (json and svg; stim-text always is).
        #[arg(long)]
        encoder: bool,
        #[arg(long, value_enum)]
        format: Format,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check depth, gate count, locality, final form and the stabilizer group.
    Verify {
        #[arg(long = "L", value_parser = clap::value_parser!(u32).range(2..))]
        l: u32,
        /// Check the Gaussian-elimination encoder instead.
        #[arg(long)]
        baseline: bool,
        #[arg(long, env = "TORICC_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
        threads: Option<u32>,
    },
    /// Encode logical basis states on a dense state vector.
    Oracle {
        #[arg(long = "L", value_parser = clap::value_parser!(u32).range(2..=3))]
        l: u32,
        #[arg(long, value_parser = LABELS)]
        state: Option<String>,
    },
    /// Render the disentangled final form.
    FinalForm {
        #[arg(long = "L", value_parser = clap::value_parser!(u32).range(2..))]
        l: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the row-reduced toric stabilizer tableau as text.
    #[command(after_help = INDEX_NOTE)]
    DumpStabilizers {
        #[arg(long = "L", value_parser = clap::value_parser!(u32).range(2..))]
        l: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Outcome {
    Pass,
    Fail,
}

/// Parses `argv` (program name first) and runs it. Returns the exit code:
/// 0 on success, 1 on verification failure or runtime error, 2 on usage error.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

fn lattice(l: u32) -> CliResult<Lattice> {
    Ok(Lattice::new(l as usize)?)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, body: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write) -> CliResult<Outcome> {
    match cmd {
        Command::Synth {
            l,
            encoder,
            format,
            out: path,
        } => {
            let lat = lattice(l)?;
            let dis = disentangling_circuit(&lat);
            let enc = Encoder::from_disentangler(&dis);
            let ordered = if encoder {
                encoder_as_circuit(&enc)
            } else {
                dis
            };
            let body = match format {
                Format::Json => circuit_to_json(&ordered),
                Format::StimText => encoder_to_stim(&enc),
                Format::Svg => render_layers_svg(&lat, &ordered.cx_layers, &ordered.h_sites),
            };
            emit(out, path.as_deref(), &body)?;
            Ok(Outcome::Pass)
        }
        Command::Verify {
            l,
            baseline,
            threads,
        } => {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(k) = threads {
                builder = builder.num_threads(k as usize);
            }
            let pool = builder
                .build()
                .map_err(|e| CliError::Format(format!("thread pool: {e}")))?;
            let lat = lattice(l)?;
            let (buf, outcome) = pool.install(|| {
                let mut buf = Vec::new();
                let outcome = if baseline {
                    verify_baseline(&lat, &mut buf)
                } else {
                    verify_main(&lat, &mut buf)
                };
                (buf, outcome)
            });
            out.write_all(&buf)?;
            outcome
        }
        Command::Oracle { l, state } => {
            let lat = lattice(l)?;
            let rep = check_logical_encoding(&lat, &encoder_circuit(&lat))?;
            writeln!(out, "L={l} qubits={}", lat.num_qubits())?;
            for r in rep
                .inputs
                .iter()
                .filter(|r| state.as_deref().is_none_or(|s| s == r.label))
            {
                writeln!(
                    out,
                    "|{}>: stabilizers in [{:.12}, {:.12}], ZL1={:+.12}, ZL2={:+.12}",
                    r.label, r.min_stabilizer, r.max_stabilizer, r.zl1, r.zl2
                )?;
            }
            writeln!(out, "max overlap between inputs: {:.3e}", rep.max_overlap)?;
            for f in &rep.failures {
                writeln!(out, "failure: {f}")?;
            }
            report(out, rep.passed())
        }
        Command::FinalForm { l, out: path } => {
            let lat = lattice(l)?;
            let c = disentangling_circuit(&lat);
            let ff = classify_final_form(&lat, &transport_all(&lat, &c)?, &c)?;
            std::fs::write(&path, render_final_form_svg(&lat, &ff))?;
            writeln!(
                out,
                "L={l}: {} generators, chains {:?} per type, trivial sites {} {}",
                ff.generator_count(),
                ff.x.chain_lengths(),
                ff.trivial_sites[0],
                ff.trivial_sites[1]
            )?;
            Ok(Outcome::Pass)
        }
        Command::DumpStabilizers { l, out: path } => {
            let lat = lattice(l)?;
            let (s, p) = lat.all_stabilizers();
            let all: Vec<PauliOp> = s.into_iter().chain(p).collect();
            let t = Tableau::from_paulis(lat.num_qubits(), &all, &lat.index_map())?;
            emit(out, path.as_deref(), &t.row_reduce().0.dump())?;
            Ok(Outcome::Pass)
        }
    }
}

fn report(out: &mut dyn Write, passed: bool) -> CliResult<Outcome> {
    if passed {
        writeln!(out, "result: PASS")?;
        Ok(Outcome::Pass)
    } else {
        writeln!(out, "result: FAIL")?;
        Ok(Outcome::Fail)
    }
}

fn verify_main(lat: &Lattice, out: &mut dyn Write) -> CliResult<Outcome> {
    let l = lat.l();
    let c = disentangling_circuit(lat);
    let s = gate_stats(&c);
    writeln!(out, "L={l} qubits={}", lat.num_qubits())?;
    writeln!(
        out,
        "cx layers: {}, depth: {}, cx gates: {}, max doubled gate distance: {}",
        s.cx_layer_count, s.total_depth, s.cx_count, s.max_doubled_gate_distance
    )?;
    let mut ok = s.cx_layer_count == 2 * l
        && s.total_depth == 2 * l + 1
        && s.cx_count == 3 * l * l + 2 * l - 5;
    let violations: usize = c
        .cx_layers
        .iter()
        .map(|x| validate_layer(lat, x).len())
        .sum();
    writeln!(out, "locality violations: {violations}")?;
    ok &= violations == 0;
    match transport_all(lat, &c).and_then(|r| classify_final_form(lat, &r, &c).map(|f| (r, f))) {
        Ok((rep, ff)) => {
            writeln!(
                out,
                "final form: {} generators, chains {:?} per type, {} direct singles per type",
                ff.generator_count(),
                ff.x.chain_lengths(),
                ff.x.singles.len()
            )?;
            for (name, op) in rep.logicals.named() {
                writeln!(out, "{name} -> {op}")?;
            }
        }
        Err(e) => {
            writeln!(out, "final form: {e}")?;
            ok = false;
        }
    }
    let v = verify_encoder(lat, &Encoder::from_disentangler(&c), lat.trivial_sites());
    writeln!(
        out,
        "group check: code rank {}, encoded rank {}, {}",
        v.code_rank,
        v.encoded_rank,
        if v.passed() { "equal" } else { "different" }
    )?;
    for f in &v.failures {
        writeln!(out, "failure: {f}")?;
    }
    report(out, ok && v.passed())
}

fn verify_baseline(lat: &Lattice, out: &mut dyn Write) -> CliResult<Outcome> {
    let (enc, trivial) = gaussian_elimination_encoder(lat)?;
    let nonlocal = enc
        .gates()
        .filter(|g| lat.doubled_distance(g.control, g.target) > 2)
        .count();
    writeln!(out, "L={} qubits={} (baseline)", lat.l(), lat.num_qubits())?;
    writeln!(
        out,
        "cx layers: {}, depth: {}, cx gates: {}, non-local gates: {nonlocal}",
        enc.cx_layers.len(),
        enc.depth(),
        enc.gate_count()
    )?;
    writeln!(out, "logical sites: {} {}", trivial[0], trivial[1])?;
    let v = verify_encoder(lat, &enc, trivial);
    writeln!(
        out,
        "group check: code rank {}, encoded rank {}, {}",
        v.code_rank,
        v.encoded_rank,
        if v.passed() { "equal" } else { "different" }
    )?;
    for f in &v.failures {
        writeln!(out, "failure: {f}")?;
    }
    report(out, v.passed())
}

/// The encoder as a `Circuit` value whose layers are in application order.
fn encoder_as_circuit(enc: &Encoder) -> Circuit {
    Circuit {
        l: enc.l,
        cx_layers: enc.cx_layers.clone(),
        h_sites: enc.h_sites.clone(),
    }
}
