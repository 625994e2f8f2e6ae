//! Command line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::autgroup::{order_value, PosetAutGroup};
use crate::catalog::{builtin, parse_config, Analysis, AnalysisOptions, MoleculeSpec, BUILTINS};
use crate::charsep::SeparationContext;
use crate::error::{Error, Result};
use crate::orbitposet::{Projection, StratifiedPoset};
use crate::tabloid::{parse_partition_list, partitions_of, Partition};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "isoposet",
    version,
    about = "Orbit posets of isomers: automorphisms, chirality and character separation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Built-in molecule (ethene, benzene, cyclopropane)
    #[arg(long, global = true, conflicts_with = "spec")]
    pub molecule: Option<String>,
    /// Molecule spec file
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Shapes to include, e.g. "4,2;3,3"
    #[arg(long = "D", global = true, value_name = "SHAPES")]
    pub domain: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to a file instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also list each orbit's representative tabloid
    #[arg(long, global = true)]
    pub legend: bool,
    /// Lift the size limits on searches
    #[arg(long, global = true)]
    pub limit_override: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Strata, orbits and Hasse edges
    Poset,
    /// Stratified automorphisms, plain and commuting with the chiral involution
    Aut,
    /// Automorphisms induced by the normalizer
    Hidden,
    /// Chiral pairs and the chiral involution
    Chiral,
    /// One-dimensional characters and the membership matrix of a stratum
    Characters {
        #[arg(long)]
        stratum: String,
    },
    /// Indistinguishability verdicts for a stratum or a pair of orbits
    Distinguish {
        #[arg(long, conflicts_with = "orbits")]
        stratum: Option<String>,
        /// Two orbit ids such as "(4,2)#1"
        #[arg(num_args = 2, value_names = ["A", "B"])]
        orbits: Vec<String>,
    },
    /// Everything at once
    Report,
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok(doc) => {
            let written = match &cli.common.output {
                Some(path) => std::fs::write(path, doc.as_bytes()),
                None => out.write_all(doc.as_bytes()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write output: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_limit() {
                EXIT_LIMIT
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn load_spec(common: &Common) -> Result<MoleculeSpec> {
    match (&common.molecule, &common.spec) {
        (Some(name), None) => builtin(name),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
        }
        _ => Err(Error::Invalid(format!(
            "exactly one of --molecule ({}) or --spec is required",
            BUILTINS.join(", ")
        ))),
    }
}

/// The rendered document for a parsed invocation.
pub fn execute(cli: &Cli) -> Result<String> {
    let c = &cli.common;
    if c.format == Format::Dot && !matches!(cli.command, Command::Poset) {
        return Err(Error::Invalid(
            "--format dot is only available for poset".into(),
        ));
    }
    let spec = load_spec(c)?;
    let domain = c.domain.as_deref().map(parse_partition_list).transpose()?;
    let analysis = Analysis::new(
        spec,
        domain.as_deref(),
        AnalysisOptions::with_override(c.limit_override),
    )?;
    let p = analysis.poset();
    let (text, value) = match &cli.command {
        Command::Poset => {
            if c.format == Format::Dot {
                return Ok(p.to_dot(&analysis.spec.name));
            }
            (poset_text(p), p.to_json())
        }
        Command::Aut => aut(&analysis)?,
        Command::Hidden => hidden(&analysis)?,
        Command::Chiral => chiral(&analysis)?,
        Command::Characters { stratum } => characters(&analysis, &stratum.parse()?)?,
        Command::Distinguish { stratum, orbits } => match (stratum, orbits.as_slice()) {
            (Some(s), []) => distinguish_stratum(&analysis, &s.parse()?)?,
            (None, [a, b]) => distinguish_pair(&analysis, a, b)?,
            _ => {
                return Err(Error::Invalid(
                    "distinguish needs --stratum or two orbit ids".into(),
                ))
            }
        },
        Command::Report => {
            let r = analysis.report()?;
            (report_text(&r), r.to_json()?)
        }
    };
    Ok(match c.format {
        Format::Json => {
            let value = if c.legend {
                let mut v = value;
                if let Value::Object(m) = &mut v {
                    m.insert("legend".into(), legend_json(p));
                }
                v
            } else {
                value
            };
            let mut s =
                serde_json::to_string_pretty(&value).map_err(|e| Error::Invalid(e.to_string()))?;
            s.push('\n');
            s
        }
        _ => {
            let mut s = text;
            if c.legend {
                s.push_str(&legend_text(p));
            }
            s
        }
    })
}

fn legend_text(p: &StratifiedPoset) -> String {
    let mut s = String::from("legend:\n");
    for o in p.orbits() {
        let _ = writeln!(s, "  {}  {}", o.id, o.representative);
    }
    s
}

fn legend_json(p: &StratifiedPoset) -> Value {
    let m: serde_json::Map<String, Value> = p
        .orbits()
        .iter()
        .map(|o| {
            (
                o.id.to_string(),
                Value::String(o.representative.to_string()),
            )
        })
        .collect();
    Value::Object(m)
}

fn ids(p: &StratifiedPoset, v: &[usize]) -> String {
    let names: Vec<String> = v.iter().map(|&i| p.id(i).to_string()).collect();
    format!("{{{}}}", names.join(", "))
}

fn poset_text(p: &StratifiedPoset) -> String {
    let mut s = format!(
        "degree {}, group order {}, {} orbits\n",
        p.degree(),
        p.group().order(),
        p.len()
    );
    for (lambda, range) in p.domain().iter().zip(p.strata()) {
        let _ = writeln!(s, "stratum ({lambda}): {} orbits", range.len());
        for i in range.clone() {
            let _ = writeln!(s, "  {}", p.id(i));
        }
    }
    s.push_str("hasse edges:\n");
    for e in p.hasse_edges() {
        let _ = writeln!(s, "  {} > {}", p.id(e.upper), p.id(e.lower));
    }
    s
}

fn group_text(s: &mut String, label: &str, g: &PosetAutGroup, p: &StratifiedPoset) -> Result<()> {
    let st = g.structure(p)?;
    let _ = writeln!(s, "{label}: order {}", g.order());
    if let Some(inv) = &st.abelian_invariants {
        let _ = writeln!(s, "  abelian invariants: {inv:?}");
    }
    for a in &st.strata {
        let _ = writeln!(s, "  on ({}): action order {}", a.shape, a.order);
    }
    s.push_str("  generators:\n");
    for gen in g.generators() {
        let _ = writeln!(s, "    {}", gen.cycle_string(p));
    }
    Ok(())
}

fn aut(a: &Analysis) -> Result<(String, Value)> {
    let p = a.poset();
    let g = a.aut0()?;
    let gp = a.aut0_prime()?;
    let mut s = String::new();
    group_text(&mut s, "Aut0", g, p)?;
    group_text(&mut s, "Aut0 commuting with the chiral involution", gp, p)?;
    Ok((
        s,
        json!({ "aut0": g.to_json(p)?, "aut0_prime": gp.to_json(p)? }),
    ))
}

fn hidden(a: &Analysis) -> Result<(String, Value)> {
    let p = a.poset();
    let h = a.hidden()?;
    let mut s = format!("hidden subgroup: order {}\n", h.group.order());
    for (nu, hat) in &h.table {
        let _ = writeln!(s, "  {nu} -> {}", hat.cycle_string(p));
    }
    Ok((s, h.to_json(p)?))
}

/// Shapes carrying chiral pairs once `D` is all partitions of the degree.
fn full_chiral_shapes(a: &Analysis) -> Result<Vec<Partition>> {
    let d = a.spec.degree;
    let full = partitions_of(d)?;
    let proj = crate::orbitposet::project(a.spec.g.clone(), a.spec.gp.clone(), &full)?;
    proj.chiral_support_ideal()
}

fn chiral(a: &Analysis) -> Result<(String, Value)> {
    let p = a.poset();
    let proj: &Projection = a.chiral();
    let pairs = proj.chiral_pairs();
    let d_e = full_chiral_shapes(a)?;
    let t = a.chiral_involution();
    let mut s = format!("chiral pairs: {}\n", pairs.len());
    for &(x, y) in &pairs {
        let _ = writeln!(s, "  {} <-> {}", p.id(x), p.id(y));
    }
    let _ = writeln!(s, "chiral involution: {}", t.cycle_string(p));
    let shapes: Vec<String> = d_e.iter().map(|l| format!("({l})")).collect();
    let _ = writeln!(s, "shapes with chiral pairs: {}", shapes.join(" "));
    let mut v = proj.to_json();
    if let Value::Object(m) = &mut v {
        m.insert("chiral_involution".into(), Value::String(t.cycle_string(p)));
        m.insert("involution_order".into(), order_value(t.order() as u128));
        m.insert(
            "chiral_shapes".into(),
            Value::Array(d_e.iter().map(|l| Value::String(l.to_string())).collect()),
        );
    }
    Ok((s, v))
}

fn characters(a: &Analysis, lambda: &Partition) -> Result<(String, Value)> {
    let p = a.poset();
    let ctx = SeparationContext::new(a.structural(), a.normalizer_prime()?, lambda)?;
    let t = ctx.table();
    let mut s = format!(
        "stratum ({lambda}): {} characters of G, {} of the Young subgroup\n",
        t.chi.len(),
        t.theta.len()
    );
    for (label, list) in [("chi", &t.chi), ("theta", &t.theta)] {
        for (i, c) in list.iter().enumerate() {
            let vals: Vec<String> = c
                .group()
                .generators()
                .iter()
                .map(|g| format!("{g}:{}", c.value(g).expect("generator")))
                .collect();
            let _ = writeln!(
                s,
                "  {label}{i}: {}",
                if vals.is_empty() {
                    "trivial group".into()
                } else {
                    vals.join(" ")
                }
            );
        }
    }
    let cols: Vec<(usize, usize)> = (0..t.chi.len())
        .flat_map(|i| (0..t.theta.len()).map(move |j| (i, j)))
        .collect();
    let width = t
        .orbits
        .iter()
        .map(|&o| p.id(o).to_string().len())
        .max()
        .unwrap_or(0);
    let _ = write!(s, "{:width$}", "");
    for (i, j) in &cols {
        let _ = write!(s, " {:>5}", format!("{i},{j}"));
    }
    s.push('\n');
    for &o in &t.orbits {
        let _ = write!(s, "{:width$}", p.id(o).to_string());
        for &(i, j) in &cols {
            let _ = write!(s, " {:>5}", if t.contains(i, j, o)? { "in" } else { "out" });
        }
        s.push('\n');
    }
    Ok((s, t.to_json(p)))
}

fn yes(b: bool) -> &'static str {
    if b {
        "indistinguishable"
    } else {
        "distinguishable"
    }
}

fn distinguish_stratum(a: &Analysis, lambda: &Partition) -> Result<(String, Value)> {
    let p = a.poset();
    let classes = a.substitution_classes(lambda)?;
    let verdicts = a.stratum_verdicts(lambda)?;
    let mut s = format!("stratum ({lambda}) substitution classes:");
    for c in &classes {
        let _ = write!(s, " {}", ids(p, c));
    }
    s.push('\n');
    for v in &verdicts {
        let _ = writeln!(
            s,
            "  {} / {}: substitution {}, pairs of characters {}, characters {}",
            v.a,
            v.b,
            yes(v.substitution),
            yes(v.pairs_of_characters),
            yes(v.characters)
        );
    }
    let classes_json: Vec<Vec<String>> = classes
        .iter()
        .map(|c| c.iter().map(|&i| p.id(i).to_string()).collect())
        .collect();
    let v = json!({
        "shape": lambda.to_string(),
        "substitution_classes": classes_json,
        "verdicts": serde_json::to_value(&verdicts).map_err(|e| Error::Invalid(e.to_string()))?,
    });
    Ok((s, v))
}

fn distinguish_pair(a: &Analysis, x: &str, y: &str) -> Result<(String, Value)> {
    let p = a.poset();
    let (i, j) = (a.orbit(x)?, a.orbit(y)?);
    let sub = a.substitution_verdict(i, j)?;
    let lambda = p.orbit(i).shape().clone();
    let ctx = SeparationContext::new(a.structural(), a.normalizer_prime()?, &lambda)?;
    let pairs = ctx.record(i, j, true)?;
    let chars = ctx.record(i, j, false)?;
    let witness = sub.witness.as_ref().map(|w| w.cycle_string(p));
    let mut s = format!("{} / {}\n", p.id(i), p.id(j));
    let _ = writeln!(s, "  same structural orbit: {}", sub.same_structural_orbit);
    let _ = writeln!(s, "  substitution: {}", yes(sub.indistinguishable));
    if let Some(w) = &witness {
        let _ = writeln!(s, "    witness {w}");
    }
    let _ = writeln!(s, "  pairs of characters: {}", yes(pairs.indistinguishable));
    let _ = writeln!(s, "  characters: {}", yes(chars.indistinguishable));
    let v = json!({
        "orbit_a": p.id(i).to_string(),
        "orbit_b": p.id(j).to_string(),
        "substitution": {
            "indistinguishable": sub.indistinguishable,
            "same_structural_orbit": sub.same_structural_orbit,
            "witness": witness,
        },
        "pairs_of_characters": pairs.to_json(),
        "characters": chars.to_json(),
    });
    Ok((s, v))
}

fn report_text(r: &crate::catalog::AnalysisReport) -> String {
    let mut s = format!(
        "{} (degree {}): |G| = {}, |G'| = {}, |G''| = {}\n",
        r.molecule, r.degree, r.group_orders[0], r.group_orders[1], r.group_orders[2]
    );
    let _ = writeln!(
        s,
        "strata: {}",
        r.domain
            .iter()
            .zip(&r.stratum_sizes)
            .map(|(d, n)| format!("({d}):{n}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(s, "hasse edges: {}", r.hasse_edge_count);
    let _ = writeln!(
        s,
        "Aut0 order {}, commuting subgroup order {}",
        r.aut0.order, r.aut0_prime.order
    );
    let _ = writeln!(
        s,
        "hidden subgroup order {} (|N':G| = {})",
        r.hidden_order, r.normalizer_quotient_order
    );
    let _ = writeln!(
        s,
        "chiral pairs: {}",
        r.chiral_pairs
            .iter()
            .map(|[a, b]| format!("{a}/{b}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(s, "chiral involution: {}", r.chiral_involution);
    for st in &r.strata {
        let fmt = |v: &[Vec<String>]| {
            v.iter()
                .map(|c| format!("{{{}}}", c.join(", ")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(s, "stratum ({}):", st.shape);
        let _ = writeln!(s, "  structural fusion: {}", fmt(&st.structural_fusion));
        let _ = writeln!(
            s,
            "  substitution classes: {}",
            fmt(&st.substitution_classes)
        );
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}
