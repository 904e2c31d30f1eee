//! Command-line surface: loads `.dgq` / `.ainf` files and runs the library
//! operations, writing deterministic line-oriented reports to stdout.
//!
//! Exit codes: 0 on success, 1 on a mathematical failure (with a witness on
//! stderr), 2 on malformed input or arguments.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::Zero;

use dgcalc::ainfty::AInfinityStructure;
use dgcalc::barcobar::{bar, cobar};
use dgcalc::dgcore::{path_algebra, DGCategory};
use dgcalc::dgq::{AinfFile, DgqError, DgqFile};
use dgcalc::mutation::{BraidWord, Collection};
use dgcalc::surfaces::{chi, euler_pairing, DivisorClass};
use dgcalc::transfer::{massey3_on, minimal_model};
use dgcalc::uext::tilting_collection;
use dgcalc::Rat;

/// Line output that exits quietly when the reader has gone away (e.g. when
/// piping into `head`).
macro_rules! outln {
    ($($a:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout(), $($a)*).is_err() {
            std::process::exit(0);
        }
    }};
}

macro_rules! out {
    ($($a:tt)*) => {{
        use std::io::Write as _;
        if write!(std::io::stdout(), $($a)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(name = "dgcalc", version, about = "Exact computations on DG quivers")]
struct Cli {
    /// Path-length bound when realizing a quiver as a DG category.
    #[arg(long, global = true, default_value_t = 8)]
    max_len: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a file: quiver invariants, DG axioms, lattice cross-checks.
    Check { file: PathBuf },
    /// Cohomology dimensions of every hom complex.
    Cohomology { file: PathBuf },
    /// Decide whether the collection is exceptional.
    Exceptional { file: PathBuf },
    /// Apply a braid word of mutations (e.g. "L2 R3") and report the result.
    Mutate {
        #[arg(long)]
        word: String,
        file: PathBuf,
    },
    /// Compute the A∞ minimal model; writes a .ainf document to stdout.
    MinimalModel {
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        file: PathBuf,
    },
    /// Triple Massey products over a 4-chain of objects (e.g. --chain 0,1,2,3).
    Massey {
        #[arg(long)]
        chain: String,
        file: PathBuf,
    },
    /// The cobar-of-bar DG quiver of the minimal model; writes .dgq to stdout.
    UniversalDg {
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        file: PathBuf,
    },
    /// Run the universal-extension tilting pipeline and report the result.
    Uext { file: PathBuf },
    /// Specialize the formal parameter t; writes .dgq to stdout.
    Deform {
        #[arg(long)]
        t: String,
        file: PathBuf,
    },
    /// Riemann–Roch Euler characteristic of a divisor in the file's lattice.
    Chi {
        #[arg(long)]
        divisor: String,
        file: PathBuf,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }

    fn math(msg: impl Into<String>) -> Self {
        Failure {
            code: 1,
            msg: msg.into(),
        }
    }
}

impl From<DgqError> for Failure {
    fn from(e: DgqError) -> Self {
        Failure::input(e.to_string())
    }
}

fn main() {
    if let Some(t) = std::env::var_os("DGCALC_THREADS") {
        // accepted as a hint; all computations here are single-threaded
        if t.to_str().and_then(|s| s.parse::<usize>().ok()).is_none() {
            eprintln!("DGCALC_THREADS must be a positive integer");
            std::process::exit(2);
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(f) => {
            eprintln!("{}", f.msg);
            std::process::exit(f.code);
        }
    }
}

fn load(path: &Path) -> Result<DgqFile, Failure> {
    DgqFile::load(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Loads a constant (parameter-free) file and realizes it.
fn load_category(path: &Path, max_len: usize) -> Result<(DgqFile, DGCategory), Failure> {
    let f = load(path)?;
    if f.has_parameters() {
        return Err(Failure::input(format!(
            "{}: file declares parameters; specialize with `deform --t` first",
            path.display()
        )));
    }
    let q = f.to_quiver()?;
    let cat = path_algebra(&q, max_len).map_err(|e| Failure::math(e.to_string()))?;
    Ok((f, cat))
}

fn parse_rat(s: &str) -> Result<Rat, Failure> {
    s.parse::<Rat>()
        .map_err(|_| Failure::input(format!("not a rational number: {s:?}")))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Check { file } => check(file, cli.max_len),
        Cmd::Cohomology { file } => {
            let (f, cat) = load_category(file, cli.max_len)?;
            print_table(&f.vertices, &cat.hom_cohomology());
            Ok(())
        }
        Cmd::Exceptional { file } => exceptional(file, cli.max_len),
        Cmd::Mutate { word, file } => mutate(word, file, cli.max_len),
        Cmd::MinimalModel { max_arity, file } => {
            let (_, cat) = load_category(file, cli.max_len)?;
            let mm = minimal_model(&cat, *max_arity).map_err(|e| Failure::math(e.to_string()))?;
            out!("{}", AinfFile::from_structure(&mm.structure).canonical());
            Ok(())
        }
        Cmd::Massey { chain, file } => massey(chain, file, cli.max_len),
        Cmd::UniversalDg { max_arity, file } => {
            let (_, cat) = load_category(file, cli.max_len)?;
            let mm = minimal_model(&cat, *max_arity).map_err(|e| Failure::math(e.to_string()))?;
            let b = bar(&mm.structure).map_err(|e| Failure::math(e.to_string()))?;
            out!("{}", DgqFile::from_quiver(&cobar(&b), None, None).canonical());
            Ok(())
        }
        Cmd::Uext { file } => uext(file, cli.max_len),
        Cmd::Deform { t, file } => {
            let t = parse_rat(t)?;
            let f = load(file)?;
            out!("{}", f.specialize(&t)?.canonical());
            Ok(())
        }
        Cmd::Chi { divisor, file } => chi_cmd(divisor, file),
    }
}

fn check(file: &Path, max_len: usize) -> Result<(), Failure> {
    let f = load(file)?;
    let members: Vec<(String, DgqFile)> = if f.has_parameters() {
        // a family is checked at representative parameter values
        [0i64, 1]
            .iter()
            .map(|&t| {
                Ok((
                    format!(" [t = {t}]"),
                    f.specialize(&Rat::from_integer(t.into()))?,
                ))
            })
            .collect::<Result<_, DgqError>>()?
    } else {
        vec![(String::new(), f.clone())]
    };
    for (tag, member) in members {
        let q = member.to_quiver()?;
        let cat = path_algebra(&q, max_len)
            .map_err(|e| Failure::math(format!("invariant failure{tag}: {e}")))?;
        let report = cat.check_dg_axioms();
        if !report.is_empty() {
            return Err(Failure::math(format!(
                "dg axioms fail{tag}: {}",
                report.join("; ")
            )));
        }
        outln!(
            "ok{tag}: {} vertices, {} arrows, {} relations",
            q.vertices.len(),
            q.arrows.len(),
            q.relations.len()
        );
        if let Some((lat, divs)) = member.picard()? {
            for i in 0..divs.len() {
                for j in 0..divs.len() {
                    let rr = chi(&lat, &(&divs[j] - &divs[i]))
                        .map_err(|e| Failure::math(e.to_string()))?;
                    let ep = euler_pairing(&cat, i, j);
                    if rr != ep {
                        return Err(Failure::math(format!(
                            "lattice mismatch{tag}: chi({} - {}) = {rr} but the Euler pairing is {ep}",
                            member.vertices[j], member.vertices[i]
                        )));
                    }
                }
            }
            outln!("ok{tag}: Euler pairings match Riemann-Roch on the lattice");
        }
    }
    Ok(())
}

fn print_table(names: &[String], table: &BTreeMap<(usize, usize, i64), usize>) {
    for (&(i, j, d), dim) in table {
        outln!("hom({}, {}) H^{d} = {dim}", names[i], names[j]);
    }
}

fn exceptional(file: &Path, max_len: usize) -> Result<(), Failure> {
    let (f, cat) = load_category(file, max_len)?;
    let table = cat.hom_cohomology();
    for i in 0..f.vertices.len() {
        let endo: BTreeMap<i64, usize> = table
            .iter()
            .filter(|((a, b, _), _)| *a == i && *b == i)
            .map(|((_, _, d), n)| (*d, *n))
            .collect();
        if endo.len() != 1 || endo.get(&0) != Some(&1) {
            return Err(Failure::math(format!(
                "not exceptional: end({}) is not the unit line",
                f.vertices[i]
            )));
        }
        for j in 0..i {
            if let Some(((_, _, d), n)) =
                table.iter().find(|((a, b, _), n)| *a == i && *b == j && **n > 0)
            {
                return Err(Failure::math(format!(
                    "not exceptional: hom({}, {}) has H^{d} = {n} against the order",
                    f.vertices[i], f.vertices[j]
                )));
            }
        }
    }
    outln!("exceptional: {} objects", f.vertices.len());
    Ok(())
}

fn mutate(word: &str, file: &Path, max_len: usize) -> Result<(), Failure> {
    let w = BraidWord::parse(word).map_err(|e| Failure::input(e.to_string()))?;
    let (_, cat) = load_category(file, max_len)?;
    let col = Collection::from_category(&cat);
    let out = col.apply_braid(&w).map_err(|e| Failure::math(e.to_string()))?;
    let names: Vec<String> = (0..out.len()).map(|i| format!("slot{i}")).collect();
    print_table(&names, &out.table());
    outln!(
        "exceptional: {}",
        if out.is_exceptional() { "yes" } else { "no" }
    );
    Ok(())
}

fn massey(chain: &str, file: &Path, max_len: usize) -> Result<(), Failure> {
    let chain: Vec<usize> = chain
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::input(format!("bad chain {chain:?}; expected i,j,k,l")))?;
    let [c0, c1, c2, c3] = chain[..] else {
        return Err(Failure::input("a Massey chain has exactly four objects"));
    };
    let chain = [c0, c1, c2, c3];
    let (names, a): (Vec<String>, AInfinityStructure) =
        if file.extension().is_some_and(|e| e == "ainf") {
            let f = AinfFile::load(file)
                .map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
            let a = f.to_structure()?;
            (a.objects.clone(), a)
        } else {
            let (_, cat) = load_category(file, max_len)?;
            let mm = minimal_model(&cat, 3).map_err(|e| Failure::math(e.to_string()))?;
            (cat.objects.clone(), mm.structure)
        };
    if chain.iter().any(|&i| i >= names.len()) {
        return Err(Failure::input(format!(
            "chain index out of range; the file has {} objects",
            names.len()
        )));
    }
    let mut any = false;
    let degree_sets: Vec<Vec<i64>> = (0..3)
        .map(|k| {
            let (i, j) = (chain[k], chain[k + 1]);
            (-4..=4).filter(|&d| a.dim(i, j, d) > 0).collect()
        })
        .collect();
    for &dz in &degree_sets[0] {
        for &dy in &degree_sets[1] {
            for &dx in &degree_sets[2] {
                let dims = [
                    a.dim(chain[0], chain[1], dz),
                    a.dim(chain[1], chain[2], dy),
                    a.dim(chain[2], chain[3], dx),
                ];
                for bz in 0..dims[0] {
                    for by in 0..dims[1] {
                        for bx in 0..dims[2] {
                            let unit = |dim: usize, k: usize| {
                                let mut v = vec![Rat::zero(); dim];
                                v[k] = Rat::from_integer(1.into());
                                v
                            };
                            let (x, y, z) =
                                (unit(dims[2], bx), unit(dims[1], by), unit(dims[0], bz));
                            let label = format!(
                                "< e{bx}^{dx}, e{by}^{dy}, e{bz}^{dz} >",
                            );
                            match massey3_on(&a, &chain, &[dz, dy, dx], &x, &y, &z) {
                                Ok(c) => {
                                    any = true;
                                    let value: Vec<String> =
                                        c.value.iter().map(|v| v.to_string()).collect();
                                    outln!(
                                        "{label} = [{}], indeterminacy rank {}, zero: {}",
                                        value.join(", "),
                                        c.indeterminacy.len(),
                                        if c.contains_zero() { "yes" } else { "no" }
                                    );
                                }
                                Err(_) => {
                                    outln!("{label} undefined (products do not vanish)");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if !any {
        outln!("no defined Massey products on this chain");
    }
    Ok(())
}

fn uext(file: &Path, max_len: usize) -> Result<(), Failure> {
    let (f, cat) = load_category(file, max_len)?;
    let td = tilting_collection(&cat).map_err(|e| Failure::math(e.to_string()))?;
    for (i, steps) in td.extensions.iter().enumerate() {
        if steps.is_empty() {
            outln!("object {}: unchanged", f.vertices[i]);
        } else {
            for &(j, m) in steps {
                outln!(
                    "object {}: universal extension by {} ({} classes)",
                    f.vertices[i], f.vertices[j], m
                );
            }
        }
    }
    outln!("tilting: Ext^!=0 vanishes on the extended collection");
    print_table(&td.h0.objects, &td.h0.hom_cohomology());
    for a in &td.quiver.arrows {
        outln!(
            "arrow {}: {} -> {} degree {}",
            a.name, td.quiver.vertices[a.src], td.quiver.vertices[a.tgt], a.degree
        );
    }
    Ok(())
}

fn chi_cmd(divisor: &str, file: &Path) -> Result<(), Failure> {
    let f = load(file)?;
    let Some((lat, _)) = f.picard()? else {
        return Err(Failure::input(format!(
            "{}: file has no lattice data",
            file.display()
        )));
    };
    let d = parse_divisor(divisor, &lat.names)?;
    let v = chi(&lat, &d).map_err(|e| Failure::math(e.to_string()))?;
    outln!("chi({divisor}) = {v}");
    Ok(())
}

/// Accepts coordinates `1,-1,0` or generator combinations `H-E2`, `2H+E1`.
fn parse_divisor(s: &str, generators: &[String]) -> Result<DivisorClass, Failure> {
    let bad = || Failure::input(format!("cannot parse divisor {s:?}"));
    if s.split(',').count() == generators.len()
        && s.split(',').all(|p| p.trim().parse::<i64>().is_ok())
    {
        return Ok(DivisorClass(
            s.split(',').map(|p| p.trim().parse().unwrap()).collect(),
        ));
    }
    let mut coords = vec![0i64; generators.len()];
    let text = s.replace(' ', "");
    let mut rest = text.as_str();
    while !rest.is_empty() {
        let neg = match rest.as_bytes()[0] {
            b'-' => {
                rest = &rest[1..];
                true
            }
            b'+' => {
                rest = &rest[1..];
                false
            }
            _ => false,
        };
        let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
        let mult: i64 = if digits == 0 {
            1
        } else {
            rest[..digits].parse().map_err(|_| bad())?
        };
        rest = &rest[digits..];
        // longest generator-name match
        let (idx, name_len) = generators
            .iter()
            .enumerate()
            .filter(|(_, g)| rest.starts_with(g.as_str()))
            .max_by_key(|(_, g)| g.len())
            .map(|(i, g)| (i, g.len()))
            .ok_or_else(bad)?;
        coords[idx] += if neg { -mult } else { mult };
        rest = &rest[name_len..];
    }
    Ok(DivisorClass(coords))
}
