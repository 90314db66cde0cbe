//! `qstab`: canonicalize stabilizer states, split composite dimensions and
//! analyze code channels from the command line.
//!
//! Exit status is 0 on success, 1 on a domain error (the error name is the
//! first word on stderr) and 2 on a usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qstab::canonicalize::{NormalForm, Partition};
use qstab::channel::{analyze_channel, code_to_choi_state, same_span, span_rank, ChannelAnalysis, CodeSpec};
use qstab::random::{random_code_parts, random_state};
use qstab::text::parse_index_list;
use qstab::{canonicalize, crt, oracle, Error, PauliProduct, StabilizerGroup};

#[derive(Parser)]
#[command(name = "qstab", version, about = "Exact qudit stabilizer states, normal forms and code channels")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Normal form of a state for a bipartition (`1,2/3`) or tripartition (`1/2/3`).
    Canonicalize {
        #[arg(long)]
        state: PathBuf,
        /// Parts as 1-based qudit lists separated by `/`.
        #[arg(long)]
        parts: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also re-check the result against the dense oracle.
        #[arg(long)]
        verify: bool,
    },
    /// Split a state at squarefree composite D into one state per prime.
    CrtDecompose {
        #[arg(long)]
        state: PathBuf,
        /// Writes `<prefix>.p<prime>.stab` per factor; stdout otherwise.
        #[arg(long)]
        out_prefix: Option<PathBuf>,
    },
    /// Decompose the channels of a code to the output sets B and C.
    Channel {
        #[arg(long)]
        code: PathBuf,
        #[arg(long = "B", value_name = "LIST")]
        b: String,
        #[arg(long = "C", value_name = "LIST")]
        c: String,
        #[arg(long)]
        emit_choi: Option<PathBuf>,
        /// Report capacities as lower bounds for an enclosing code.
        #[arg(long)]
        subcode: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a normal-form or channel-analysis report by dense computation.
    OracleVerify { report: PathBuf },
    /// A seeded random stabilizer state.
    RandomState {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A seeded random graph code with Z-type coding generators.
    RandomCode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Domain(Error),
    Io(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Run = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Run {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn canonicalize_verb(state: &Path, parts: &str, out: Option<&Path>, verify: bool) -> Run {
    let s = StabilizerGroup::parse(&read(state)?)?;
    let partition = Partition::parse(parts, s.n())?;
    let nf = canonicalize::normal_form(&s, &partition)?;
    if verify {
        verify_normal_form(&nf)?;
    }
    emit(&nf.to_text(), out)
}

fn crt_verb(state: &Path, prefix: Option<&Path>) -> Run {
    let s = StabilizerGroup::parse(&read(state)?)?;
    let factors = crt::decompose_state(&s)?;
    match prefix {
        Some(p) => {
            for f in &factors {
                let path = PathBuf::from(format!("{}.p{}.stab", p.display(), f.d()));
                emit(&f.to_text(), Some(&path))?;
                println!("{}", path.display());
            }
            Ok(())
        }
        None => {
            for f in &factors {
                print!("{}", f.to_text());
            }
            Ok(())
        }
    }
}

fn channel_verb(code: &Path, b: &str, c: &str, choi: Option<&Path>, subcode: bool, out: Option<&Path>) -> Run {
    let code = CodeSpec::parse(&read(code)?)?;
    let (b, c) = (parse_index_list(b)?, parse_index_list(c)?);
    if let Some(p) = choi {
        emit(&code_to_choi_state(&code)?.to_text(), Some(p))?;
    }
    let a = analyze_channel(&code, &b, &c)?;
    emit(&a.report(subcode), out)
}

fn verify_normal_form(nf: &NormalForm) -> Run {
    if !nf.verify()? {
        return Err(Failure::Mismatch("recorded gates do not carry the state onto its normal form".into()));
    }
    let (n, d) = (nf.state.n(), nf.state.d());
    let psi = oracle::state_from_group(&nf.state)?;
    let parts = nf.partition.parts();
    let sides: Vec<Vec<usize>> = if parts.len() == 3 {
        vec![vec![0], vec![1], vec![2]]
    } else {
        vec![vec![0]]
    };
    for side in sides {
        let qs: Vec<usize> = side.iter().flat_map(|&p| parts[p].clone()).collect();
        let dense = oracle::schmidt_rank(&psi, n, d, &qs)? as u128;
        let want = nf.predicted_rank(&side);
        if dense != want {
            return Err(Failure::Mismatch(format!("cut {side:?}: dense Schmidt rank {dense}, counts predict {want}")));
        }
    }
    // the recorded circuits, replayed on amplitudes
    let inputs = if nf.components.len() == 1 { vec![nf.state.clone()] } else { crt::decompose_state(&nf.state)? };
    for (s, comp) in inputs.iter().zip(&nf.components) {
        let moved = oracle::apply_gates(&comp.gates, n, comp.d, &oracle::state_from_group(s)?)?;
        let target = oracle::state_from_group(&comp.normal_form_group(n))?;
        let f = oracle::fidelity(&moved, &target);
        if f < 1.0 - 1e-9 {
            return Err(Failure::Mismatch(format!("prime {}: circuit fidelity {f}", comp.d)));
        }
    }
    Ok(())
}

fn verify_channel(a: &ChannelAnalysis) -> Run {
    let (n, k, d) = (a.code.n(), a.k(), a.d());
    let v = oracle::code_isometry(a.code.graph(), a.code.coding())?;
    for (name, keep, group) in [("G_B", &a.b, &a.g_b), ("G_C", &a.c, &a.g_c)] {
        let seen: Vec<PauliProduct> = oracle::transmitted_paulis(&v, n, k, d, keep)?
            .iter()
            .map(|e| {
                let x: Vec<i128> = e[..k].iter().map(|&v| v as i128).collect();
                let z: Vec<i128> = e[k..].iter().map(|&v| v as i128).collect();
                PauliProduct::new(d, 0, &x, &z)
            })
            .collect::<qstab::Result<_>>()?;
        let size = (d as u128).pow(span_rank(group, k, d) as u32);
        if !same_span(&seen, group, k, d) || seen.len() as u128 != size {
            return Err(Failure::Mismatch(format!("{name} differs from the Paulis the channel transmits")));
        }
    }
    if !qstab::channel::verify_duality(a) {
        return Err(Failure::Mismatch("information groups are not mutual centralizers".into()));
    }
    Ok(())
}

fn oracle_verb(report: &Path) -> Run {
    let text = read(report)?;
    let kind = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().nth(1))
        .unwrap_or("");
    match kind {
        "normal-form" => verify_normal_form(&NormalForm::parse(&text)?)?,
        "channel-analysis" => verify_channel(&ChannelAnalysis::parse(&text)?)?,
        other => {
            return Err(Failure::Domain(Error::Parse {
                line: 1,
                msg: format!("cannot verify a `{other}` file"),
            }))
        }
    }
    println!("verified");
    Ok(())
}

fn run(cli: Cli) -> Run {
    match cli.verb {
        Verb::Canonicalize { state, parts, out, verify } => canonicalize_verb(&state, &parts, out.as_deref(), verify),
        Verb::CrtDecompose { state, out_prefix } => crt_verb(&state, out_prefix.as_deref()),
        Verb::Channel { code, b, c, emit_choi, subcode, out } => {
            channel_verb(&code, &b, &c, emit_choi.as_deref(), subcode, out.as_deref())
        }
        Verb::OracleVerify { report } => oracle_verb(&report),
        Verb::RandomState { n, d, seed, out } => emit(&random_state(n, d, seed)?.to_text(), out.as_deref()),
        Verb::RandomCode { n, k, d, seed, out } => {
            let (g, fs) = random_code_parts(n, k, d, seed)?;
            emit(&CodeSpec::new(g, fs)?.to_text(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("Io: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("OracleMismatch: {msg}");
            ExitCode::from(1)
        }
    }
}
