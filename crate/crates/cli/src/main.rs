use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use symgame_core::classify::classify_with;
use symgame_core::document::{game_from_json, game_to_json, game_to_value, generators_from_json};
use symgame_core::label_dep::{
    anonymity, invariant_group, label_dep_fully_symmetric, FullSymmetryCondition,
};
use symgame_core::matching::{count_matchings, enumerate_matchings, equal_payoff_matchings};
use symgame_core::morphism::{automorphism_group, isomorphisms_between};
use symgame_core::param::{hasse, CellPartition, GeneratorSet, ParamAssignment};
use symgame_core::{fixtures, Error, Game};

/// Symmetry analysis of finite normal-form games.
#[derive(Parser)]
#[command(name = "symgame", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a game by its automorphism group.
    Classify { game: PathBuf },
    /// List the automorphisms of a game.
    Aut { game: PathBuf },
    /// Decide whether two games are isomorphic (exit 1 if not).
    Iso { first: PathBuf, second: PathBuf },
    /// List the pure strategy Nash equilibria.
    Nash { game: PathBuf },
    /// Count matchings and list those whose rows have equal payoffs.
    Matchings {
        game: PathBuf,
        /// List every matching, not only the equal-payoff ones.
        #[arg(long)]
        all: bool,
    },
    /// Build the parameterised game of a generator set, optionally instantiated.
    Paramgame {
        /// Generator-set file or bundled example name.
        source: String,
        /// Parameter values, e.g. `α=1,beta=2,γ=1/2`.
        #[arg(long)]
        params: Option<String>,
    },
    /// Hasse diagram (DOT) of a family or a directory of generator-set files.
    Hasse { source: String },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Malformed { .. } | Error::Parse(_) => 2,
            Error::Invalid { .. } => 3,
            _ => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn load_game(path: &Path) -> Result<Game, Failure> {
    game_from_json(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn print_json(value: &Value) {
    println!("{value}");
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SYMGAME_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| Failure {
        code: 4,
        message: format!("SYMGAME_THREADS must be a positive integer, got `{raw}`"),
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure {
            code: 4,
            message: format!("cannot configure thread pool: {e}"),
        })
}

fn classify_cmd(path: &Path, json: bool) -> Outcome {
    let game = load_game(path)?;
    let aut = automorphism_group(&game);
    let report = classify_with(&game, &aut);
    let shared = game.shape().shares_labels() && game.shape().uniform_strategy_count().is_some();
    if json {
        let mut value = report.to_json();
        if shared {
            value["label_dependent"] = label_dependent_json(&game)?;
        }
        print_json(&value);
    } else {
        print!("{}", report.to_text());
        if shared {
            print!("{}", label_dependent_text(&game)?);
        }
    }
    Ok(0)
}

fn label_dependent_json(game: &Game) -> Result<Value, Failure> {
    let group = invariant_group(game)?;
    let anon = anonymity(game)?;
    Ok(json!({
        "invariants": group.elements().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "standard": group.is_transitive(),
        "fully": label_dep_fully_symmetric(game, FullSymmetryCondition::AllInvariant)?,
        "weakly_anonymous": anon.weakly_anonymous(),
        "anonymous": anon.anonymous(),
        "fully_anonymous": anon.fully_anonymous(),
    }))
}

fn label_dependent_text(game: &Game) -> Result<String, Failure> {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let group = invariant_group(game)?;
    let anon = anonymity(game)?;
    let fully = label_dep_fully_symmetric(game, FullSymmetryCondition::AllInvariant)?;
    let gens: Vec<String> = group.generators().iter().map(ToString::to_string).collect();
    Ok(format!(
        "shared labels: invariants <{}> of order {}\n  standard: {}, fully: {}, weakly anonymous: {}, anonymous: {}, fully anonymous: {}\n",
        gens.join(", "),
        group.order(),
        yn(group.is_transitive()),
        yn(fully),
        yn(anon.weakly_anonymous()),
        yn(anon.anonymous()),
        yn(anon.fully_anonymous()),
    ))
}

fn aut_cmd(path: &Path, json: bool) -> Outcome {
    let game = load_game(path)?;
    let aut = automorphism_group(&game);
    let elements: Vec<String> = aut.elements().iter().map(ToString::to_string).collect();
    if json {
        print_json(&json!({
            "order": aut.order(),
            "player_image_order": aut.player_image().order(),
            "stabiliser_order": aut.stabiliser_n().order(),
            "elements": elements,
        }));
    } else {
        println!("automorphisms: {}", aut.order());
        for e in elements {
            println!("{e}");
        }
    }
    Ok(0)
}

fn iso_cmd(first: &Path, second: &Path, json: bool) -> Outcome {
    let a = load_game(first)?;
    let b = load_game(second)?;
    let found = isomorphisms_between(&a, &b);
    if json {
        print_json(&json!({
            "isomorphic": !found.is_empty(),
            "count": found.len(),
            "witness": found.first().map(ToString::to_string),
        }));
    } else if let Some(g) = found.first() {
        println!("isomorphic: yes");
        println!("isomorphisms: {}", found.len());
        println!("{g}");
    } else {
        println!("isomorphic: no");
    }
    Ok(if found.is_empty() { 1 } else { 0 })
}

fn nash_cmd(path: &Path, json: bool) -> Outcome {
    let game = load_game(path)?;
    let eqs: Vec<String> = game
        .pure_nash_equilibria()
        .iter()
        .map(|p| game.shape().format_profile(p))
        .collect();
    if json {
        print_json(&json!({ "equilibria": eqs }));
    } else {
        println!("pure equilibria: {}", eqs.len());
        for e in eqs {
            println!("{e}");
        }
    }
    Ok(0)
}

fn matchings_cmd(path: &Path, all: bool, json: bool) -> Outcome {
    let game = load_game(path)?;
    let shape = game.shape_arc().clone();
    let m = shape
        .uniform_strategy_count()
        .ok_or_else(|| Error::NotMStrategy(shape.strategy_counts()))?;
    let total = count_matchings(shape.players(), m);
    let equal: Vec<String> = equal_payoff_matchings(&game)?
        .iter()
        .map(ToString::to_string)
        .collect();
    let listed: Option<Vec<String>> = if all {
        Some(enumerate_matchings(shape)?.map(|m| m.to_string()).collect())
    } else {
        None
    };
    if json {
        let mut value = json!({ "count": total.to_string(), "equal_payoff": equal });
        if let Some(listed) = listed {
            value["all"] = json!(listed);
        }
        print_json(&value);
    } else {
        println!("matchings: {total}");
        if let Some(listed) = listed {
            for m in listed {
                println!("{m}");
            }
        }
        println!("equal-payoff matchings: {}", equal.len());
        for m in equal {
            println!("{m}");
        }
    }
    Ok(0)
}

/// A file path if one exists, otherwise a bundled example or `family/member`.
fn load_generators(source: &str) -> Result<GeneratorSet, Failure> {
    let path = Path::new(source);
    if path.is_file() {
        return generators_from_json(&read(path)?).map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("{source}: {}", f.message);
            f
        });
    }
    Ok(fixtures::generator_set(source)?)
}

fn partition_json(p: &CellPartition) -> Value {
    let shape = p.shape();
    let n = shape.players();
    let cells: Vec<Vec<String>> = (0..shape.profile_count())
        .map(|k| (0..n).map(|i| p.name_of(k, i)).collect())
        .collect();
    json!({
        "parameters": p.parameter_names(),
        "payoffs": cells,
        "players": n,
        "strategies": shape.labels(),
    })
}

fn paramgame_cmd(source: &str, params: Option<&str>, json: bool) -> Outcome {
    let set = load_generators(source)?;
    let partition = set.partition();
    match params {
        Some(text) => {
            let game = partition.instantiate(&ParamAssignment::parse(text)?)?;
            if json {
                print_json(&game_to_value(&game));
            } else {
                println!("{}", game_to_json(&game));
            }
        }
        None if json => print_json(&partition_json(&partition)),
        None => {
            println!("parameters: {}", partition.parameter_names().join(" "));
            print!("{}", partition.to_table());
        }
    }
    Ok(0)
}

/// A directory of generator-set files named by stem, or a bundled family.
fn load_family(source: &str) -> Result<Vec<(String, CellPartition)>, Failure> {
    let path = Path::new(source);
    if !path.is_dir() {
        return Ok(fixtures::family(source)?
            .into_iter()
            .map(|(n, s)| (n, s.partition()))
            .collect());
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| Failure {
            code: 2,
            message: format!("cannot read {source}: {e}"),
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .iter()
        .map(|f| {
            let name = f
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            let set = load_generators(&f.to_string_lossy())?;
            Ok((name, set.partition()))
        })
        .collect()
}

fn hasse_cmd(source: &str) -> Outcome {
    let entries = load_family(source)?;
    let diagram = hasse(&entries)?;
    print!("{}", diagram.to_dot());
    eprintln!(
        "nodes: {}, edges: {}",
        diagram.nodes.len(),
        diagram.edges.len()
    );
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    let json = cli.json;
    match cli.command {
        Command::Classify { game } => classify_cmd(&game, json),
        Command::Aut { game } => aut_cmd(&game, json),
        Command::Iso { first, second } => iso_cmd(&first, &second, json),
        Command::Nash { game } => nash_cmd(&game, json),
        Command::Matchings { game, all } => matchings_cmd(&game, all, json),
        Command::Paramgame { source, params } => paramgame_cmd(&source, params.as_deref(), json),
        Command::Hasse { source } => hasse_cmd(&source),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
