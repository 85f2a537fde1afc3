use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use plectic_lab::extension::{
    two_cocycle_from_lift, CocycleMap, GammaModule, M0Choice, TwistedExtension,
};
use plectic_lab::group::{CosetSection, LeftCosets};
use plectic_lab::half_transfer::HalfTransfer;
use plectic_lab::instance::{
    catalog_names, catalog_spec, cyclotomic_instance, CyclotomicSpec, InstanceFile,
};
use plectic_lab::plectic::{PlecticElement, WreathDatum};
use plectic_lab::suite::{run_suite, Options, SuiteName, SuiteReport, TaniyamaPart};

#[derive(Parser)]
#[command(
    name = "plectic-lab",
    version,
    about = "Finite models of plectic groups, half-transfers and Taniyama elements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Instance file, or the name of a catalog instance
    #[arg(long, global = true)]
    instance: Option<String>,
    /// Print a machine-readable report
    #[arg(long, global = true)]
    json: bool,
    /// Print properties, notes and wall times
    #[arg(long, global = true)]
    verbose: bool,
    /// Check a sample of N elements instead of all of them
    #[arg(long, global = true, value_name = "N", requires = "seed")]
    sample: Option<usize>,
    /// Seed for --sample
    #[arg(long, global = true, value_name = "S", requires = "sample")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites; without --instance, runs every catalog instance
    Verify {
        #[arg(long, default_value = "all")]
        suite: SuiteName,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the plectic half-transfer, or run its checks
    Halftransfer {
        /// CM type as 1-based coset ids, e.g. "1 2" or "1,2"; defaults to the instance's
        #[arg(long)]
        cmtype: Option<String>,
        /// Element of G in cycle notation, or wreath coordinates "pi: ...; h: ..."
        #[arg(long)]
        element: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the Taniyama element checks
    Taniyama {
        #[arg(long, default_value = "all")]
        suite: TaniyamaPart,
        /// File with a [nested] block replacing the instance's
        #[arg(long)]
        nested: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the character lattice checks
    Lattice {
        #[command(flatten)]
        common: Common,
    },
    /// Run the extension checks, optionally writing the multiplication table
    Extension {
        #[arg(long, default_value = "trivial")]
        m0: M0Choice,
        #[arg(long, value_name = "PATH")]
        emit_table: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Write an instance file for a catalog entry or a subfield of Q(ζ_n)
    GenInstance {
        /// Catalog name; see --list
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long, conflicts_with = "name")]
        modulus: Option<u64>,
        /// Residues generating H (the subgroup fixing K)
        #[arg(long, value_delimiter = ',')]
        h_residues: Vec<u64>,
        #[arg(long)]
        c_residue: Option<u64>,
        /// One residue from each conjugate pair
        #[arg(long, value_delimiter = ',')]
        cm_type: Vec<u64>,
        /// Residues generating a nested H' ≤ H
        #[arg(long, value_delimiter = ',')]
        nested: Option<Vec<u64>>,
        /// Add a Galois-realized [weil] block
        #[arg(long)]
        galois: bool,
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Check(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn options(common: &Common) -> Options {
    Options {
        sample: common.sample,
        seed: common.seed.unwrap_or(0),
        timing: common.verbose,
        ..Options::default()
    }
}

fn load(common: &Common) -> Result<(InstanceFile, String), Failure> {
    let name = common
        .instance
        .clone()
        .ok_or_else(|| Failure::Usage("--instance is required".into()))?;
    let inst = InstanceFile::load_named(&name).map_err(usage)?;
    Ok((inst, name))
}

fn emit(reports: &[SuiteReport], common: &Common) -> Result<(), Failure> {
    if common.json {
        let json = if reports.len() == 1 {
            reports[0].to_json()
        } else {
            serde_json::to_string_pretty(reports).expect("reports serialize")
        };
        println!("{json}");
    } else {
        for r in reports {
            print!("{}", r.to_text(common.verbose));
        }
    }
    match reports.iter().filter(|r| !r.passed()).count() {
        0 => Ok(()),
        n => Err(Failure::Check(format!("{n} report(s) with failing checks"))),
    }
}

fn run_one(common: &Common, suite: SuiteName, opts: Options) -> Result<(), Failure> {
    let (inst, name) = load(common)?;
    emit(&[run_suite(&inst, &name, suite, &opts)], common)
}

fn halftransfer(
    cmtype: Option<String>,
    element: Option<String>,
    common: &Common,
) -> Result<(), Failure> {
    let Some(text) = element else {
        return run_one(common, SuiteName::HalfTransfer, options(common));
    };
    let (inst, _) = load(common)?;
    let k = inst
        .cm
        .as_ref()
        .ok_or_else(|| usage("instance has no [cm] block"))?;
    let phi = match cmtype {
        Some(ids) => {
            let ids: Vec<usize> = ids
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| usage(format!("bad coset id `{t}`"))))
                .collect::<Result<_, _>>()?;
            k.cm_type_from_ids(&ids).map_err(usage)?
        }
        None => inst
            .cm_type
            .clone()
            .ok_or_else(|| usage("instance has no CM type; pass --cmtype"))?,
    };
    let alpha = if text.trim_start().starts_with("pi:") {
        let cosets = LeftCosets::of(&k.f);
        let w = WreathDatum::parse(&text, &cosets).map_err(usage)?;
        w.validate(&k.f, &cosets).map_err(usage)?;
        PlecticElement::from_wreath(&k.f, &cosets, &CosetSection::canonical(&cosets), &w)
            .map_err(usage)?
    } else {
        let g = k.group.parse_element(&text).map_err(usage)?;
        PlecticElement::left_translate(&k.f, g)
    };
    let ht = HalfTransfer::new(k);
    let w = k.canonical_section();
    let value = ht
        .plectic(&phi, &alpha, &w)
        .map_err(|e| Failure::Check(e.to_string()))?;
    if common.json {
        let factors: Vec<serde_json::Value> = ht
            .factors(&phi, &alpha, &w)
            .map_err(|e| Failure::Check(e.to_string()))?
            .iter()
            .map(|f| {
                serde_json::json!({
                    "coset": k.sigma_k.id(f.phi) + 1,
                    "factor": k.group.format(f.element),
                })
            })
            .collect();
        let out = serde_json::json!({
            "cmtype": k.cm_type_ids(&phi),
            "value": ht.format(value),
            "factors": factors,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("value serializes")
        );
    } else {
        if common.verbose {
            for f in ht
                .factors(&phi, &alpha, &w)
                .map_err(|e| Failure::Check(e.to_string()))?
            {
                println!(
                    "h[{}] = {}",
                    k.sigma_k.id(f.phi) + 1,
                    k.group.format(f.element)
                );
            }
        }
        println!("{}", ht.format(value));
    }
    Ok(())
}

fn extension(m0: M0Choice, table: Option<PathBuf>, common: &Common) -> Result<(), Failure> {
    let (inst, name) = load(common)?;
    let opts = Options {
        m0,
        ..options(common)
    };
    let report = run_suite(&inst, &name, SuiteName::Extension, &opts);
    let checked = emit(std::slice::from_ref(&report), common);
    if let Some(path) = table {
        let (datum, _) = inst
            .weil_datum()
            .map_err(usage)?
            .ok_or_else(|| usage("instance has no [weil] block"))?;
        let module = GammaModule::new(&datum, m0).map_err(|e| Failure::Check(e.to_string()))?;
        let b = CocycleMap::taniyama(&module, &datum.canonical_section())
            .map_err(|e| Failure::Check(e.to_string()))?;
        let d = two_cocycle_from_lift(&module, &b).map_err(|e| Failure::Check(e.to_string()))?;
        let ext = TwistedExtension::build(&module, d);
        let file = File::create(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let mut out = BufWriter::new(file);
        ext.write_table(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    checked
}

#[allow(clippy::too_many_arguments)]
fn gen_instance(
    name: Option<String>,
    list: bool,
    modulus: Option<u64>,
    h_residues: Vec<u64>,
    c_residue: Option<u64>,
    cm_type: Vec<u64>,
    nested: Option<Vec<u64>>,
    galois: bool,
    output: Option<PathBuf>,
) -> Result<(), Failure> {
    if list {
        for n in catalog_names() {
            println!("{n}");
        }
        return Ok(());
    }
    let text = match (name, modulus) {
        (Some(n), _) => match catalog_spec(&n) {
            Some(spec) => cyclotomic_instance(&spec).map_err(usage)?,
            None => plectic_lab::instance::catalog_text(&n)
                .ok_or_else(|| usage(format!("unknown catalog instance `{n}`")))?
                .to_string(),
        },
        (None, Some(modulus)) => {
            let spec = CyclotomicSpec {
                modulus,
                h_residues,
                c_residue: c_residue.unwrap_or(modulus - 1),
                cm_type_residues: cm_type,
                nested_h_residues: nested,
                galois_weil: galois,
                ..CyclotomicSpec::default()
            };
            cyclotomic_instance(&spec).map_err(usage)?
        }
        (None, None) => return Err(usage("give a catalog name or --modulus")),
    };
    match output {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify { suite, common } => {
            if common.instance.is_some() {
                return run_one(&common, suite, options(&common));
            }
            let opts = options(&common);
            let reports: Vec<SuiteReport> = catalog_names()
                .into_iter()
                .map(|n| {
                    let inst = plectic_lab::instance::load_catalog(n).map_err(usage)?;
                    Ok(run_suite(&inst, n, suite, &opts))
                })
                .collect::<Result<_, Failure>>()?;
            emit(&reports, &common)
        }
        Command::Halftransfer {
            cmtype,
            element,
            common,
        } => halftransfer(cmtype, element, &common),
        Command::Taniyama {
            suite,
            nested,
            common,
        } => {
            let (inst, name) = load(&common)?;
            let mut opts = Options {
                taniyama: suite,
                ..options(&common)
            };
            if let Some(path) = nested {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                opts.nested = Some(inst.parse_nested(&text).map_err(usage)?);
            }
            emit(
                &[run_suite(&inst, &name, SuiteName::Taniyama, &opts)],
                &common,
            )
        }
        Command::Lattice { common } => run_one(&common, SuiteName::Lattice, options(&common)),
        Command::Extension {
            m0,
            emit_table,
            common,
        } => extension(m0, emit_table, &common),
        Command::GenInstance {
            name,
            list,
            modulus,
            h_residues,
            c_residue,
            cm_type,
            nested,
            galois,
            output,
            common: _,
        } => gen_instance(
            name, list, modulus, h_residues, c_residue, cm_type, nested, galois, output,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Check(m) | Failure::Usage(m) => eprintln!("plectic-lab: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
