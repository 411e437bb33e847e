//! Batch front end: parse a ring/ideal description, dispatch to the library,
//! print canonical text or JSON.
//!
//! Exit codes: 0 success, 1 input error, 2 assumption failure (no test
//! element), 3 resource cap, 4 internal verification failure.

mod input;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use charp::error::{Error, Result};
use charp::fsing::{
    self, global_pti_cm_seeded, hsl_all_degrees_capped, hsl_chain_capped, pti_sandwich_seeded,
    Provenance,
};
use charp::frobenius::{fe_root, star_closure_capped};
use charp::groebner::{
    buchberger, membership, module_equal, normal_form, Caps, GroebnerBasis,
    SubmodulePresentation,
};
use charp::homology::{ext_presentation, induced_frobenius_matrix, non_cm_locus, verify_well_defined};
use charp::oracle::{dense_fe_root, verify_star_minimality};
use charp::ring::{PolyMatrix, Polynomial, RingCtx};

use input::InputSpec;

#[derive(Parser)]
#[command(
    name = "charp",
    about = "Characteristic-p invariants of quotients of polynomial rings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input description file (stdin when omitted)
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for the random-minor-combination fallback of test elements
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Run oracle cross-checks on the result
    #[arg(long, global = true)]
    verify: bool,

    /// Star-closure iteration cap
    #[arg(long = "cap-iterations", global = true)]
    cap_iterations: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Groebner basis of the input ideal
    Gb,
    /// Frobenius root I_e of the input ideal
    Froot {
        #[arg(short = 'e', default_value_t = 1)]
        e: u32,
    },
    /// Star-closure of the input ideal with respect to U = [c]
    Star {
        #[arg(short = 'e', default_value_t = 1)]
        e: u32,
    },
    /// Presentation matrix of Ext^i(R/I, R)
    Ext {
        #[arg(short = 'i')]
        i: usize,
    },
    /// Global parameter test ideal (exact on the Cohen-Macaulay locus)
    Tau,
    /// Two-sided bound J^d Z <= tau <= Z for possibly non-CM quotients
    Sandwich,
    /// HSL chain for Ext degree j, or all degrees when -j is omitted
    Hsl {
        #[arg(short = 'j')]
        j: Option<usize>,
        #[arg(long, default_value_t = 16)]
        emax: usize,
    },
    /// Non-Cohen-Macaulay locus ideal
    Noncm,
    /// F-injectivity locus ideal
    Finjective,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NoTestElement => 2,
        Error::ResourceCap(_)
        | Error::IterationCap { .. }
        | Error::StabilizationCapExceeded { .. }
        | Error::ExponentOverflow { .. } => 3,
        Error::InvariantViolation(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn read_input(cli: &Cli) -> Result<String> {
    match &cli.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Parse {
            line: 0,
            col: 0,
            msg: format!("cannot read {}: {e}", path.display()),
        }),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Parse {
                    line: 0,
                    col: 0,
                    msg: format!("cannot read stdin: {e}"),
                })?;
            Ok(buf)
        }
    }
}

fn caps_for(cli: &Cli) -> Caps {
    let mut caps = Caps::default();
    if let Some(n) = cli.cap_iterations {
        caps.max_star_iterations = n;
    }
    caps
}

fn ideal_strings(w: &SubmodulePresentation) -> Result<Vec<String>> {
    Ok(w.gb()?
        .elements()
        .iter()
        .map(|v| v.component(0).to_string())
        .collect())
}

fn module_strings(w: &SubmodulePresentation) -> Result<Vec<String>> {
    let gb = w.gb()?;
    Ok(gb
        .elements()
        .iter()
        .map(|v| {
            if w.ambient_rank() == 1 {
                v.component(0).to_string()
            } else {
                v.to_string()
            }
        })
        .collect())
}

fn ring_text(ctx: &Arc<RingCtx>) -> String {
    format!(
        "char {}, vars {}, order {}",
        ctx.p(),
        ctx.vars().join(" "),
        ctx.order().monomial
    )
}

fn ring_json(ctx: &Arc<RingCtx>) -> Value {
    json!({
        "char": ctx.p(),
        "vars": ctx.vars(),
        "order": ctx.order().monomial.to_string(),
    })
}

struct Report {
    command: &'static str,
    ctx: Arc<RingCtx>,
    text: String,
    result: Value,
    verify_notes: Vec<String>,
}

impl Report {
    fn new(command: &'static str, ctx: &Arc<RingCtx>) -> Report {
        Report {
            command,
            ctx: Arc::clone(ctx),
            text: String::new(),
            result: json!({}),
            verify_notes: Vec::new(),
        }
    }

    fn line(&mut self, label: &str, value: impl std::fmt::Display) {
        self.text.push_str(&format!("{label}: {value}\n"));
    }

    fn block(&mut self, label: &str, items: &[String]) {
        self.text.push_str(&format!("{label}:\n"));
        for item in items {
            self.text.push_str(&format!("  {item}\n"));
        }
    }

    fn set(&mut self, key: &str, value: Value) {
        self.result[key] = value;
    }

    fn render(mut self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = format!(
                    "command: {}\nring: {}\n{}",
                    self.command,
                    ring_text(&self.ctx),
                    self.text
                );
                for note in &self.verify_notes {
                    out.push_str(&format!("verify: {note}\n"));
                }
                out.trim_end().to_string()
            }
            Format::Json => {
                if !self.verify_notes.is_empty() {
                    self.result["verify"] = json!(self.verify_notes);
                }
                json!({
                    "schema": 1,
                    "command": self.command,
                    "ring": ring_json(&self.ctx),
                    "result": self.result,
                })
                .to_string()
            }
        }
    }
}

/// Re-checks the Buchberger criterion on a computed basis: every same-position
/// S-vector must reduce to zero.
fn check_buchberger_criterion(gb: &GroebnerBasis) -> Result<()> {
    let ctx = gb.ctx().clone();
    let module = gb.order().module;
    let elems = gb.elements();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            let (pi, ti) = elems[i].leading(&ctx, module).expect("nonzero");
            let (pj, tj) = elems[j].leading(&ctx, module).expect("nonzero");
            if pi != pj {
                continue;
            }
            let lcm = ti.mono.lcm(&tj.mono);
            let s = elems[i]
                .mul_term(ctx.f_inv(ti.coeff), &ti.mono.quotient_into(&lcm))
                .sub(&elems[j].mul_term(ctx.f_inv(tj.coeff), &tj.mono.quotient_into(&lcm)));
            if !normal_form(&s, gb)?.is_zero() {
                return Err(Error::InvariantViolation(format!(
                    "S-vector of basis elements {i} and {j} does not reduce to zero"
                )));
            }
        }
    }
    Ok(())
}

fn reversed_ideal(spec: &InputSpec) -> SubmodulePresentation {
    let mut gens: Vec<Polynomial> = spec
        .ideal
        .generator_vectors()
        .iter()
        .map(|v| v.component(0).clone())
        .collect();
    gens.reverse();
    SubmodulePresentation::ideal(&spec.ctx, gens)
}

fn run(cli: &Cli) -> Result<String> {
    let text = read_input(cli)?;
    let spec = input::parse_input(&text)?;
    let caps = caps_for(cli);
    let seed = cli.seed.unwrap_or(fsing::DEFAULT_TEST_ELEMENT_SEED);
    let ctx = spec.ctx.clone();

    let report = match &cli.command {
        Command::Gb => {
            let gb = buchberger(&spec.ideal)?;
            let mut r = Report::new("gb", &ctx);
            let gens = ideal_strings(&SubmodulePresentation::from_gb(gb.clone()))?;
            r.block("generators", &gens);
            r.set("generators", json!(gens));
            if cli.verify {
                check_buchberger_criterion(&gb)?;
                r.verify_notes.push("buchberger criterion ok".into());
            }
            r
        }
        Command::Froot { e } => {
            let root = fe_root(&spec.ideal, *e)?;
            let mut r = Report::new("froot", &ctx);
            r.line("e", e);
            let gens = ideal_strings(&root)?;
            r.block("generators", &gens);
            r.set("e", json!(e));
            r.set("generators", json!(gens));
            if cli.verify {
                let dense = dense_fe_root(&spec.ideal, *e)?;
                if !module_equal(&root, &dense)? {
                    return Err(Error::InvariantViolation(
                        "dense Frobenius root disagrees with the sparse computation".into(),
                    ));
                }
                r.verify_notes.push("dense root agreement ok".into());
            }
            r
        }
        Command::Star { e } => {
            let c = spec.c.clone().ok_or_else(|| {
                Error::InvalidInput("the star command needs a `c:` line for U = [c]".into())
            })?;
            let mut u = PolyMatrix::zero(&ctx, 1, 1);
            *u.entry_mut(0, 0) = c;
            let (star, iterations) = star_closure_capped(&spec.ideal, &u, *e, &caps)?;
            let mut r = Report::new("star", &ctx);
            r.line("e", e);
            r.line("iterations", iterations);
            let gens = ideal_strings(&star)?;
            r.block("generators", &gens);
            r.set("e", json!(e));
            r.set("iterations", json!(iterations));
            r.set("generators", json!(gens));
            if cli.verify {
                if *e != 1 {
                    r.verify_notes.push("minimality check only runs at e=1".into());
                } else if !verify_star_minimality(&spec.ideal, &u, &star)? {
                    return Err(Error::InvariantViolation(
                        "star-closure candidate failed the minimality oracle".into(),
                    ));
                } else {
                    r.verify_notes.push("star minimality ok".into());
                }
            }
            r
        }
        Command::Ext { i } => {
            let a = ext_presentation(&spec.ideal, *i)?;
            let mut r = Report::new("ext", &ctx);
            r.line("i", i);
            r.line("rank", a.rows());
            let cols: Vec<String> = a.columns().iter().map(|c| c.to_string()).collect();
            r.block("presentation columns", &cols);
            let json_cols: Vec<Vec<String>> = a
                .columns()
                .iter()
                .map(|c| c.components().iter().map(|f| f.to_string()).collect())
                .collect();
            r.set("i", json!(i));
            r.set("rank", json!(a.rows()));
            r.set("columns", json!(json_cols));
            if cli.verify {
                let efd = induced_frobenius_matrix(&spec.ideal, *i, 1)?;
                verify_well_defined(&efd)?;
                r.verify_notes.push("frobenius action well defined".into());
            }
            r
        }
        Command::Tau => {
            let pti = global_pti_cm_seeded(&spec.ideal, spec.c.as_ref(), seed, &caps)?;
            let mut r = Report::new("tau", &ctx);
            r.line("h", pti.h);
            r.line("c", &pti.c.c);
            r.line("provenance", provenance_text(&pti.c.provenance));
            r.line("iterations", pti.iterations);
            let gens = ideal_strings(&pti.z)?;
            r.block("generators", &gens);
            r.set("h", json!(pti.h));
            r.set("c", json!(pti.c.c.to_string()));
            r.set("provenance", json!(provenance_text(&pti.c.provenance)));
            r.set("iterations", json!(pti.iterations));
            r.set("generators", json!(gens));
            if cli.verify {
                let redone =
                    global_pti_cm_seeded(&reversed_ideal(&spec), spec.c.as_ref(), seed, &caps)?;
                if !module_equal(&redone.z, &pti.z)? {
                    return Err(Error::InvariantViolation(
                        "tau changed under permuting the input generators".into(),
                    ));
                }
                r.verify_notes.push("presentation independence ok".into());
            }
            r
        }
        Command::Sandwich => {
            let s = pti_sandwich_seeded(&spec.ideal, spec.c.as_ref(), seed, &caps)?;
            let cm = s.j_ideal.contains_unit()?;
            let mut r = Report::new("sandwich", &ctx);
            r.line("d", s.d);
            r.line("cm", cm);
            let lower = ideal_strings(&s.lower)?;
            let upper = ideal_strings(&s.upper)?;
            let killer = ideal_strings(&s.j_ideal)?;
            r.block("colon-killer generators", &killer);
            r.block("upper generators", &upper);
            r.block("lower generators", &lower);
            r.set("d", json!(s.d));
            r.set("cm", json!(cm));
            r.set("colon_killer", json!(killer));
            r.set("upper", json!(upper));
            r.set("lower", json!(lower));
            if cli.verify {
                for g in s.lower.generator_vectors() {
                    if !membership(&g, &s.upper)? {
                        return Err(Error::InvariantViolation(
                            "sandwich lower bound is not contained in the upper bound".into(),
                        ));
                    }
                }
                if cm && !module_equal(&s.lower, &s.upper)? {
                    return Err(Error::InvariantViolation(
                        "CM input but sandwich bounds differ".into(),
                    ));
                }
                r.verify_notes.push("containment ok".into());
            }
            r
        }
        Command::Hsl { j, emax } => {
            let mut r = Report::new("hsl", &ctx);
            r.line("emax", emax);
            r.set("emax", json!(emax));
            match j {
                Some(j) => {
                    let report = hsl_chain_capped(&spec.ideal, *j, *emax, &caps)?;
                    let eta = report.eta.expect("stabilized chains carry eta");
                    r.line("j", j);
                    r.line("eta", eta);
                    let chain: Vec<String> = report
                        .chain
                        .iter()
                        .enumerate()
                        .map(|(e, b)| Ok(format!("B_{e}: {}", module_strings(b)?.join(", "))))
                        .collect::<Result<Vec<_>>>()?;
                    r.block("chain", &chain);
                    let loci: Vec<String> = report
                        .loci
                        .iter()
                        .enumerate()
                        .map(|(e, l)| Ok(format!("e={}: {}", e + 1, ideal_strings(l)?.join(", "))))
                        .collect::<Result<Vec<_>>>()?;
                    r.block("loci", &loci);
                    let json_chain: Vec<Vec<String>> = report
                        .chain
                        .iter()
                        .map(module_strings)
                        .collect::<Result<Vec<_>>>()?;
                    let json_loci: Vec<Vec<String>> = report
                        .loci
                        .iter()
                        .map(ideal_strings)
                        .collect::<Result<Vec<_>>>()?;
                    r.set("j", json!(j));
                    r.set("eta", json!(eta));
                    r.set("chain", json!(json_chain));
                    r.set("loci", json!(json_loci));
                    if cli.verify {
                        for w in report.chain.windows(2) {
                            for g in w[1].generator_vectors() {
                                if !membership(&g, &w[0])? {
                                    return Err(Error::InvariantViolation(
                                        "HSL chain is not descending".into(),
                                    ));
                                }
                            }
                        }
                        r.verify_notes.push("descending chain ok".into());
                    }
                }
                None => {
                    let reports = hsl_all_degrees_capped(&spec.ideal, *emax, &caps)?;
                    let etas: Vec<String> = reports
                        .iter()
                        .map(|rep| {
                            format!("j={}: {}", rep.j, rep.eta.expect("stabilized"))
                        })
                        .collect();
                    r.block("eta by degree", &etas);
                    let bound = reports
                        .iter()
                        .map(|rep| rep.eta.expect("stabilized"))
                        .max()
                        .unwrap_or(0);
                    r.line("global bound", bound);
                    let json_etas: Vec<Value> = reports
                        .iter()
                        .map(|rep| json!({"j": rep.j, "eta": rep.eta}))
                        .collect();
                    r.set("etas", json!(json_etas));
                    r.set("bound", json!(bound));
                }
            }
            r
        }
        Command::Noncm => {
            let locus = non_cm_locus(&spec.ideal)?;
            let mut r = Report::new("noncm", &ctx);
            let gens = ideal_strings(&locus)?;
            r.block("generators", &gens);
            r.set("generators", json!(gens));
            if cli.verify {
                let redone = non_cm_locus(&reversed_ideal(&spec))?;
                if !module_equal(&redone, &locus)? {
                    return Err(Error::InvariantViolation(
                        "non-CM locus changed under permuting the input generators".into(),
                    ));
                }
                r.verify_notes.push("presentation independence ok".into());
            }
            r
        }
        Command::Finjective => {
            let locus = fsing::f_injective_locus(&spec.ideal)?;
            let mut r = Report::new("finjective", &ctx);
            let gens = ideal_strings(&locus)?;
            r.block("generators", &gens);
            r.set("generators", json!(gens));
            if cli.verify {
                let redone = fsing::f_injective_locus(&reversed_ideal(&spec))?;
                if !module_equal(&redone, &locus)? {
                    return Err(Error::InvariantViolation(
                        "F-injective locus changed under permuting the input generators".into(),
                    ));
                }
                r.verify_notes.push("presentation independence ok".into());
            }
            r
        }
    };
    Ok(report.render(cli.format))
}

fn provenance_text(p: &Provenance) -> String {
    match p {
        Provenance::JacobianMinor { index } => format!("jacobian minor {index}"),
        Provenance::RandomCombination { seed, attempt } => {
            format!("random combination (seed {seed}, attempt {attempt})")
        }
        Provenance::UserSupplied => "user supplied".into(),
    }
}
