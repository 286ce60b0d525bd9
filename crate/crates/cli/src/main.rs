use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phecke::classify::classify;
use phecke::ffield::field;
use phecke::heckemod::HModule;
use phecke::parind::induce_to;
use phecke::rootdata::load_preset;
use phecke::verify::verify_all;
use phecke::{affweyl::Levi, Error, Result};

#[derive(Parser)]
#[command(name = "phecke", about = "Pro-p Iwahori Hecke algebra modules in characteristic p")]
struct Cli {
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Root datum, Weyl groups and generators of a preset
    Info {
        #[arg(long)]
        preset: String,
    },
    /// Induce a module file to a larger Levi (all of the root system by default)
    Induce {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        levi: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify simple modules up to a dimension bound
    Classify {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value = "2^1")]
        field: String,
        #[arg(long, default_value_t = 4)]
        dim_bound: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every verification suite on a preset
    VerifyAll {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_field(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::Parse(format!("field must look like p^k, got {s:?}"));
    match s.split_once('^') {
        Some((p, k)) => Ok((p.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?)),
        None => Ok((s.trim().parse().map_err(|_| bad())?, 1)),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn info(preset: &str) -> Result<String> {
    let rd = load_preset(preset)?;
    let lv = Levi::full(&rd)?;
    let mut s = String::new();
    s += &format!("preset {} (p = {})\n", rd.name, rd.p);
    s += &format!("rank {}  simple roots {}\n", rd.rank, rd.labels.join(","));
    s += &format!("positive roots {}\n", rd.npos);
    s += &format!("|W_0| = {}\n", rd.weyl.order());
    for j in rd.delta().subsets() {
        s += &format!("  |W_0,{}| = {}\n", rd.format_subset(j), rd.weyl_subgroup(j).len());
    }
    s += &format!("generators {}\n", lv.generator_names().join(" "));
    s += &format!("length-zero rank {}\n", lv.n_omega());
    for (i, name) in lv.omega_names.iter().enumerate() {
        let img: Vec<&str> = lv.omega_perm[i].iter().map(|&g| lv.gen_names[g].as_str()).collect();
        s += &format!("  {name} = {}  permutes reflections to [{}]\n", rd.format_elt(&lv.omega[i]), img.join(","));
    }
    Ok(s)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Info { preset } => {
            print!("{}", info(&preset)?);
            Ok(true)
        }
        Cmd::Induce { preset, module, levi, out } => {
            let text = std::fs::read_to_string(&module)?;
            let v = HModule::from_text(&text)?;
            if v.rd().name != preset {
                return Err(Error::Context(format!("module is over {}, not {preset}", v.rd().name)));
            }
            let k = match levi {
                Some(l) => v.rd().parse_subset(&l)?,
                None => v.rd().delta(),
            };
            let ind = induce_to(&v, k)?;
            emit(&ind.carrier.to_text(), &out)?;
            eprintln!("relations: ok ({} cosets, dim {})", ind.cosets.len(), ind.carrier.dim);
            Ok(true)
        }
        Cmd::Classify { preset, field: fs, dim_bound, out } => {
            let rd = load_preset(&preset)?;
            let (p, k) = parse_field(&fs)?;
            if p != rd.p {
                return Err(Error::Field(format!("preset has p = {}, field has p = {p}", rd.p)));
            }
            let rep = classify(&rd, &field(p, k)?, dim_bound)?;
            emit(&rep.to_text(), &out)?;
            Ok(rep.is_ok())
        }
        Cmd::VerifyAll { preset, out } => {
            let rd = load_preset(&preset)?;
            let results = verify_all(&rd, cli.seed)?;
            let mut s = String::new();
            for r in &results {
                s += &format!("{} {}: {}\n", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            emit(&s, &out)?;
            Ok(results.iter().all(|r| r.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
