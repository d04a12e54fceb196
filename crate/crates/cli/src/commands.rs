use std::fs;
use std::path::Path;

use lfsr_crt::attack::time_domain_recover;
use lfsr_crt::bench::bench;
use lfsr_crt::crt::{compatible_target, predict_combiner_spectrum, ResidueSystem};
use lfsr_crt::formats::{parse_generator_with_limit, parse_residue, render_spectrum, SequenceFile};
use lfsr_crt::galois::Field;
use lfsr_crt::repro::{reproduce, TARGETS};
use lfsr_crt::sequences::{bits_to_string, min_poly_bm, parse_bits, PeriodicSequence};
use lfsr_crt::spectra::{default_base, dft, Spectrum};
use lfsr_crt::Error;

use crate::{Cli, Command};

pub enum Outcome {
    Ok,
    Mismatch,
}

type CmdResult = Result<Outcome, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn in_file(path: &Path) -> impl Fn(Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

pub fn run(cli: Cli) -> CmdResult {
    let limit = cli.period_limit;
    match cli.command {
        Command::Gen { spec, count, output } => gen(&spec, count, output.as_deref(), limit),
        Command::Analyze { sequence, spectrum } => analyze(&sequence, spectrum.as_deref()),
        Command::Dft { sequence, modulus } => dft_cmd(&sequence, modulus.as_deref()),
        Command::Crt { residues } => crt(&residues),
        Command::Predict { spec, modulus } => predict(&spec, modulus.as_deref(), limit),
        Command::Attack { spec, bits, sequence, all } => attack(&spec, bits, sequence.as_deref(), all, limit),
        Command::Reproduce { id } => repro(&id),
        Command::Bench { degrees, trials } => bench_cmd(&degrees, trials, limit),
    }
}

fn gen(spec: &Path, count: usize, output: Option<&Path>, limit: u64) -> CmdResult {
    let g = parse_generator_with_limit(&read(spec)?, limit).map_err(in_file(spec))?;
    let file = SequenceFile { period: g.period(), bits: g.generate(count) };
    match output {
        Some(path) => fs::write(path, file.render()).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{}", file.render()),
    }
    Ok(Outcome::Ok)
}

/// One period of a sequence file, checking that any further bits repeat it.
fn load_period(path: &Path) -> Result<PeriodicSequence, String> {
    let file = SequenceFile::parse(&read(path)?).map_err(in_file(path))?;
    let n = file.period as usize;
    if n == 0 {
        return Err(format!("{}: period must be positive", path.display()));
    }
    if file.bits.len() < n {
        let e = Error::InsufficientBits { got: file.bits.len(), needed: n };
        return Err(format!("{}: {e}; the minimal polynomial needs a full period", path.display()));
    }
    if let Some(t) = (n..file.bits.len()).find(|&t| file.bits[t] != file.bits[t - n]) {
        return Err(format!("{}: bit {t} breaks period {n}", path.display()));
    }
    PeriodicSequence::new(file.bits[..n].to_vec()).map_err(in_file(path))
}

fn analyze(path: &Path, spectrum_out: Option<&Path>) -> CmdResult {
    let s = load_period(path)?;
    let n = s.period();
    let two = [s.bits(), s.bits()].concat();
    let mp = min_poly_bm(&two).map_err(in_file(path))?;
    println!("period={n}");
    println!("least_period={}", s.least_period());
    println!("linear_complexity={}", mp.linear_complexity);
    println!("minimal_polynomial={}", mp.poly);
    println!("minimal_polynomial_hex={}", mp.poly.to_hex());
    if n % 2 == 0 {
        println!("spectrum=unavailable (even period)");
        return Ok(Outcome::Ok);
    }
    let base = default_base(n, Some(&mp.poly)).map_err(in_file(path))?;
    let spec = dft(&s, &base).map_err(in_file(path))?;
    let support = spec.support();
    println!("field_modulus={}", base.field().modulus().to_hex());
    println!("support_size={}", support.len());
    println!("support={}", support.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    let consistent = support.len() == mp.linear_complexity;
    println!("support_matches_complexity={consistent}");
    if let Some(out) = spectrum_out {
        let csv = render_spectrum(&spec).map_err(in_file(path))?;
        fs::write(out, csv).map_err(|e| format!("{}: {e}", out.display()))?;
    }
    if consistent {
        Ok(Outcome::Ok)
    } else {
        Err("support size differs from linear complexity".into())
    }
}

fn field_from_hex(hex: &str) -> Result<Field, String> {
    let poly = hex.parse().map_err(|e: Error| format!("modulus: {e}"))?;
    Field::new(poly).map_err(|e| format!("modulus: {e}"))
}

fn dft_cmd(path: &Path, modulus: Option<&str>) -> CmdResult {
    let s = load_period(path)?;
    let base = match modulus {
        Some(m) => field_from_hex(m)?.order_n_element(s.period() as u64).map_err(|e| e.to_string())?,
        None => {
            let mp = min_poly_bm(&[s.bits(), s.bits()].concat()).map_err(in_file(path))?;
            default_base(s.period(), Some(&mp.poly)).map_err(in_file(path))?
        }
    };
    let spec = dft(&s, &base).map_err(in_file(path))?;
    print!("{}", render_spectrum(&spec).map_err(|e| e.to_string())?);
    Ok(Outcome::Ok)
}

fn crt(tokens: &[String]) -> CmdResult {
    let pairs = tokens.iter().map(|t| parse_residue(t)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let sys = ResidueSystem::new(pairs.iter().map(|p| p.1).collect()).map_err(|e| e.to_string())?;
    let residues: Vec<i64> = pairs.iter().map(|p| p.0).collect();
    let x = sys.solve(&residues).map_err(|e| e.to_string())?;
    println!("{x} mod {}", sys.product());
    Ok(Outcome::Ok)
}

fn predict(path: &Path, modulus: Option<&str>, limit: u64) -> CmdResult {
    let g = parse_generator_with_limit(&read(path)?, limit).map_err(in_file(path))?;
    let parts: Vec<Spectrum> = g
        .constituent_periods()
        .iter()
        .zip(g.lfsrs())
        .map(|(seq, l)| dft(seq, &default_base(seq.period(), Some(l.feedback()))?))
        .collect::<Result<_, _>>()
        .map_err(in_file(path))?;
    let field = modulus.map(field_from_hex).transpose()?;
    let target = compatible_target(&parts, field.as_ref()).map_err(|e| e.to_string())?;
    let spec = predict_combiner_spectrum(&parts, g.function(), &target).map_err(|e| e.to_string())?;
    print!("{}", render_spectrum(&spec).map_err(|e| e.to_string())?);
    Ok(Outcome::Ok)
}

fn attack(spec: &Path, bits: Option<String>, sequence: Option<&Path>, all: bool, limit: u64) -> CmdResult {
    let g = parse_generator_with_limit(&read(spec)?, limit).map_err(in_file(spec))?;
    let window = match (bits, sequence) {
        (Some(b), _) => parse_bits(&b).map_err(|e| format!("--bits: {e}"))?,
        (None, Some(path)) => SequenceFile::parse(&read(path)?).map_err(in_file(path))?.bits,
        (None, None) => return Err("no keystream window given".into()),
    };
    let report = time_domain_recover(&g, &window, limit).map_err(|e| e.to_string())?;
    println!("{report}");
    if all {
        for c in &report.candidates {
            let states: Vec<String> = c.states.iter().map(|s| bits_to_string(s)).collect();
            println!("candidate tau={} states={} verified={}", c.tau, states.join(","), c.verified);
        }
    }
    Ok(Outcome::Ok)
}

fn repro(id: &str) -> CmdResult {
    let ids: Vec<&str> = if id == "all" { TARGETS.to_vec() } else { vec![id] };
    let mut outcome = Outcome::Ok;
    for id in ids {
        let report = reproduce(id).map_err(|e| e.to_string())?;
        println!("{report}");
        if !report.passed() {
            outcome = Outcome::Mismatch;
        }
    }
    Ok(outcome)
}

fn bench_cmd(degrees: &[usize], trials: usize, limit: u64) -> CmdResult {
    let report = bench(degrees, trials, limit).map_err(|e| e.to_string())?;
    println!("{report}");
    Ok(Outcome::Ok)
}
