use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fgroup::automorphisms::Convention;
use fgroup::oracle::run_oracle;
use fgroup::relations::{case_ids, default_model, model_for_rank, verify_case, CaseReport, ClaimSource, Verdict};
use fgroup::stallings::{conjugacy_intersection, IntersectionResult, SubgroupGraph};
use fgroup::surfaces::{whitehead_no_cut_vertex, SurfaceKind, SurfaceModel};
use fgroup::words::{Alphabet, Word};

#[derive(Parser)]
#[command(name = "fgroup", version, about = "Free-group subgroup graphs and Nielsen-move relation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the folded core graph of a subgroup.
    Fold {
        /// Generators, one quoted word each.
        #[arg(required = true)]
        gens: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[command(flatten)]
        letters: Letters,
    },
    /// Test whether a word lies in a subgroup.
    Member {
        #[arg(required = true)]
        gens: Vec<String>,
        /// The word, after `--`.
        #[arg(last = true, required = true)]
        word: Vec<String>,
        #[command(flatten)]
        letters: Letters,
    },
    /// Intersect two subgroups up to conjugacy.
    Intersect {
        #[arg(required = true)]
        a: Vec<String>,
        /// Generators of the second subgroup, after `--`.
        #[arg(last = true, required = true)]
        b: Vec<String>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        letters: Letters,
    },
    /// Whitehead cut-vertex test for a cyclic word.
    Whitehead {
        #[arg(required = true)]
        word: Vec<String>,
        #[command(flatten)]
        letters: Letters,
    },
    /// Print the boundary word of a surface.
    Boundary {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        genus: usize,
    },
    /// Check one case: composition and every step.
    Verify {
        #[arg(long = "case")]
        case: String,
        /// Ambient rank; defaults to the case's own instantiation.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value_t = Order::RightmostFirst)]
        convention: Order,
    },
    /// Check every case.
    VerifyAll {
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value_t = Order::RightmostFirst)]
        convention: Order,
    },
    /// Compare intersections with brute-force enumeration on random pairs.
    Oracle {
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Letters {
    /// Alphabet genus; by default the largest index used.
    #[arg(long)]
    genus: Option<usize>,
    /// Include the one-sided letter `n`.
    #[arg(long)]
    one_sided: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Orientable,
    Nonorientable,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    RightmostFirst,
    LeftmostFirst,
}

impl From<Order> for Convention {
    fn from(o: Order) -> Self {
        match o {
            Order::RightmostFirst => Convention::RightmostFirst,
            Order::LeftmostFirst => Convention::LeftmostFirst,
        }
    }
}

enum Failure {
    Input(String),
    Mismatch,
}

impl From<fgroup::Error> for Failure {
    fn from(e: fgroup::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn alphabet(letters: &Letters, texts: &[&[String]]) -> Alphabet {
    let all: Vec<&str> = texts.iter().flat_map(|t| t.iter().map(String::as_str)).collect();
    let inferred = Alphabet::infer(&all.join(" "));
    let one_sided = letters.one_sided || inferred.index("n").is_some();
    let genus = (inferred.rank() - one_sided as usize) / 2;
    Alphabet::surface(letters.genus.unwrap_or(genus).max(genus), one_sided)
}

fn parse_gens(alpha: &Alphabet, gens: &[String], what: &str) -> Result<Vec<Word>, Failure> {
    gens.iter()
        .enumerate()
        .map(|(i, g)| {
            alpha
                .parse_word(g)
                .map_err(|e| Failure::Input(format!("{what} {}: {e}", i + 1)))
        })
        .collect()
}

fn graph(alpha: &Alphabet, gens: &[Word]) -> Result<SubgroupGraph, Failure> {
    Ok(SubgroupGraph::from_generators(alpha.rank(), gens)?)
}

fn describe(alpha: &Alphabet, r: &IntersectionResult) -> String {
    if r.is_trivial() {
        return "trivial (0 components)\n".into();
    }
    let mut out = format!("{} component(s)\n", r.components.len());
    for c in &r.components {
        let gens: Vec<String> = c.generators.iter().map(|w| alpha.format_word(w)).collect();
        out.push_str(&format!("  rank {}: <{}>\n", c.rank, gens.join(", ")));
    }
    out
}

fn intersection_json(alpha: &Alphabet, r: &IntersectionResult) -> serde_json::Value {
    let comps: Vec<serde_json::Value> = r
        .components
        .iter()
        .map(|c| {
            serde_json::json!({
                "rank": c.rank,
                "generators": c.generators.iter().map(|w| alpha.format_word(w)).collect::<Vec<_>>(),
                "graph": c.graph.to_json(alpha),
            })
        })
        .collect();
    serde_json::json!({ "trivial": r.is_trivial(), "components": comps })
}

fn stated_mismatches(r: &CaseReport) -> usize {
    r.steps
        .iter()
        .filter(|s| s.verdict == Verdict::Mismatch && s.source != ClaimSource::Inferred)
        .count()
}

/// A stated claim the computation contradicts, or a product that is not the target.
fn has_mismatch(r: &CaseReport) -> bool {
    !r.composition_ok || stated_mismatches(r) > 0
}

fn print_case(r: &CaseReport, json: bool) {
    if json {
        println!("{}", r.to_json());
        return;
    }
    print!("{}", r.summary_table());
    println!("  stated claims contradicted: {}", stated_mismatches(r));
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Fold { gens, format, letters } => {
            let alpha = alphabet(&letters, &[&gens]);
            let g = graph(&alpha, &parse_gens(&alpha, &gens, "generator")?)?.core();
            match format {
                Format::Dot => print!("{}", g.to_dot(&alpha)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&g.to_json(&alpha)).unwrap()),
            }
        }
        Command::Member { gens, word, letters } => {
            let word = vec![word.join(" ")];
            let alpha = alphabet(&letters, &[&gens, &word]);
            let g = graph(&alpha, &parse_gens(&alpha, &gens, "generator")?)?;
            let w = parse_gens(&alpha, &word, "word")?.remove(0);
            println!("member: {}", g.accepts(&w));
        }
        Command::Intersect { a, b, json, letters } => {
            let alpha = alphabet(&letters, &[&a, &b]);
            let ga = graph(&alpha, &parse_gens(&alpha, &a, "first subgroup, generator")?)?;
            let gb = graph(&alpha, &parse_gens(&alpha, &b, "second subgroup, generator")?)?;
            let r = conjugacy_intersection(&ga, &gb);
            if json {
                println!("{}", serde_json::to_string_pretty(&intersection_json(&alpha, &r)).unwrap());
            } else {
                print!("{}", describe(&alpha, &r));
            }
        }
        Command::Whitehead { word, letters } => {
            let word = vec![word.join(" ")];
            let alpha = alphabet(&letters, &[&word]);
            let w = parse_gens(&alpha, &word, "word")?.remove(0);
            println!("no cut vertex: {}", whitehead_no_cut_vertex(&w, alpha.rank())?);
        }
        Command::Boundary { kind, genus } => {
            let kind = match kind {
                Kind::Orientable => SurfaceKind::Orientable,
                Kind::Nonorientable => SurfaceKind::Nonorientable,
            };
            let m = SurfaceModel::new(kind, genus)?;
            println!("{}", m.alphabet().format_word(m.boundary()));
        }
        Command::Verify { case, rank, json, convention } => {
            let model = match rank {
                Some(r) => model_for_rank(&case, r)?,
                None => default_model(&case)?,
            };
            let r = verify_case(&case, &model, convention.into())?;
            print_case(&r, json);
            if has_mismatch(&r) {
                return Err(Failure::Mismatch);
            }
        }
        Command::VerifyAll { json, convention } => {
            let mut reports = Vec::new();
            for id in case_ids() {
                reports.push(verify_case(id, &default_model(id)?, convention.into())?);
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&reports).unwrap());
            } else {
                for r in &reports {
                    print_case(r, false);
                }
            }
            if reports.iter().any(has_mismatch) {
                return Err(Failure::Mismatch);
            }
        }
        Command::Oracle { max_len, samples, seed, json } => {
            let s = run_oracle(samples, max_len, seed)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&s).unwrap());
            } else {
                println!(
                    "oracle: {}/{} pairs agree ({} nontrivial, {} words up to length {}, seed {})",
                    s.agreeing, s.samples, s.nontrivial, s.words_checked, s.max_len, s.seed
                );
            }
            if !s.all_agree() {
                return Err(Failure::Mismatch);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
