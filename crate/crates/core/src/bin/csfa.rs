//! `csfa` command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 input error, 3 monoid budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use csfa::format::{read_automaton, to_text, write_automaton};
use csfa::{
    basic_idempotents, enumerate_two_bpi_binary, generate_monoid, group_part, orbits, verify_paper,
    Automaton, BpiClass, Error, FamilySpec, FamilyTag, TwoBpiProfile, VerificationReport,
    DEFAULT_BUDGET,
};

// Like `std::println!`, but a closed stdout (e.g. piping into `head`) ends the
// process quietly instead of panicking.
macro_rules! println {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "csfa",
    version,
    about = "Analyze circular semi-flower automata and their transition monoids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an automaton (trim, SFA, circular, bpis, minimality)
    Analyze {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate the transition monoid with shortlex witnesses
    Monoid {
        path: PathBuf,
        /// Show the partition into orbits of the circular letter's group
        #[arg(long)]
        orbits: bool,
        /// Show κ, τ and the basic idempotents (two-bpi binary CSFA)
        #[arg(long)]
        idempotents: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run every applicable structural check
    Verify {
        path: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Sweep all two-bpi binary CSFA with n states
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Write the first maximizing automaton to this file
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Write one of the named automata
    Witness {
        #[command(flatten)]
        family: FamilyArgs,
        /// Output file; standard output when absent
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// unary | one-bpi | aprime | figure1 | figure2
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Alphabet size for the one-bpi family (default 2)
    #[arg(long)]
    alphabet_size: Option<usize>,
}

impl FamilyArgs {
    fn spec(&self) -> Result<Option<FamilySpec>, Error> {
        let Some(name) = &self.family else {
            if self.n.is_some() || self.alphabet_size.is_some() {
                return Err(Error::InvalidFamily("--n given without --family".into()));
            }
            return Ok(None);
        };
        let tag: FamilyTag = name.parse()?;
        FamilySpec::from_parts(tag, self.n, self.alphabet_size).map(Some)
    }
}

enum Failure {
    Checks(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze { path, json } => analyze(&path, json),
        Command::Monoid {
            path,
            orbits,
            idempotents,
            budget,
            json,
        } => monoid(&path, orbits, idempotents, budget, json),
        Command::Verify {
            path,
            family,
            budget,
            json,
        } => verify(path.as_deref(), &family, budget, json),
        Command::Enumerate { n, dump, json } => enumerate(n, dump.as_deref(), json),
        Command::Witness { family, output } => witness(&family, output.as_deref()),
    }
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json value")
    );
}

fn analyze(path: &Path, json: bool) -> Result<(), Failure> {
    let aut = read_automaton(path)?;
    let report = aut.classify();
    if json {
        let mut value = serde_json::to_value(&report).expect("report serializes");
        value["summary"] = json!(report.summary());
        print_json(&value);
        return Ok(());
    }
    println!("{}", report.summary());
    println!("states:           {}", report.states);
    println!("alphabet:         {}", report.alphabet.join(" "));
    println!("trim:             {}", report.is_trim);
    println!("sfa:              {}", report.is_sfa);
    if let Some(v) = &report.sfa_violation {
        println!("sfa violation:    {v}");
    }
    println!(
        "bpi set:          {{{}}}",
        report
            .bpi_set
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    println!("bpi class:        {}", report.bpi_class);
    println!("circular letters: {}", report.circular_letters.join(" "));
    println!("csfa:             {}", report.is_csfa);
    println!("minimal:          {}", report.is_minimal);
    Ok(())
}

fn monoid(
    path: &Path,
    want_orbits: bool,
    want_idempotents: bool,
    budget: usize,
    json: bool,
) -> Result<(), Failure> {
    let aut = read_automaton(path)?;
    let mon = generate_monoid(&aut, budget)?;
    let alphabet = aut.alphabet();

    let elements: Vec<Value> = mon
        .iter()
        .enumerate()
        .map(|(k, e)| {
            json!({
                "index": k,
                "image": e.transform.image(),
                "witness": e.witness.render(alphabet),
                "rank": e.transform.rank(),
                "idempotent": e.transform.is_idempotent(),
            })
        })
        .collect();
    let mut out = json!({ "n": aut.state_count(), "size": mon.len(), "elements": elements });
    let mut text = vec![format!("|M| = {}", mon.len())];
    text.push(format!(
        "{:>5}  {:<24} {:>4}  witness",
        "#", "image", "rank"
    ));
    for (k, e) in mon.iter().enumerate() {
        text.push(format!(
            "{k:>5}  {:<24} {:>4}  {}",
            e.transform.to_string(),
            e.transform.rank(),
            e.witness.render(alphabet)
        ));
    }

    if want_orbits {
        match group_part(&mon) {
            Ok(g) => {
                let partition = orbits(&mon, &g);
                let sizes = partition.sizes();
                text.push(String::new());
                text.push(format!(
                    "{} orbits under G (|G| = {}), sizes {:?}",
                    partition.len(),
                    g.order(),
                    sizes
                ));
                let members: Vec<Vec<String>> = partition
                    .orbits
                    .iter()
                    .map(|o| {
                        o.iter()
                            .map(|&k| mon.element(k).witness.render(alphabet))
                            .collect()
                    })
                    .collect();
                for (i, m) in members.iter().enumerate() {
                    text.push(format!("  orbit {i}: {}", m.join(", ")));
                }
                out["orbits"] = json!({
                    "count": partition.len(),
                    "group_order": g.order(),
                    "sizes": sizes,
                    "members": members,
                });
            }
            Err(e) => {
                text.push(format!("orbits unavailable: {e}"));
                out["orbits"] = json!({ "error": e.to_string() });
            }
        }
    }

    if want_idempotents {
        match idempotent_section(&aut, budget) {
            Ok((lines, value)) => {
                text.push(String::new());
                text.extend(lines);
                out["idempotents"] = value;
            }
            Err(e) => {
                text.push(format!("idempotents unavailable: {e}"));
                out["idempotents"] = json!({ "error": e.to_string() });
            }
        }
    }

    if json {
        print_json(&out);
    } else {
        println!("{}", text.join("\n"));
    }
    Ok(())
}

fn idempotent_section(aut: &Automaton, budget: usize) -> Result<(Vec<String>, Value), Error> {
    let report = aut.classify();
    if !(report.is_csfa && report.bpi_class == BpiClass::TwoBpi && aut.alphabet().len() == 2) {
        return Err(Error::Precondition(
            "requires a two-bpi CSFA over a binary alphabet".into(),
        ));
    }
    let norm = aut.normalize_csfa()?;
    let profile = TwoBpiProfile::new(&norm)?;
    let mon = generate_monoid(&norm, budget)?;
    let basics = basic_idempotents(&norm, &profile, &mon)?;
    let alphabet = norm.alphabet();
    let tau = profile
        .tau
        .map_or_else(|| "none".to_string(), |t| t.to_string());
    let mut lines = vec![
        "basic idempotents (states relabeled so that a: i -> i+1, initial 0)".to_string(),
        format!(
            "m = {}, t = {}, κ = {}, τ = {tau}",
            profile.m, profile.t, profile.kappa
        ),
        format!(
            "|B| = {} (list of {} entries)",
            basics.len(),
            basics.all().count()
        ),
    ];
    let list: Vec<Value> = basics
        .distinct
        .iter()
        .map(|e| {
            lines.push(format!(
                "  {:<20} {:<24} {}",
                e.kind.to_string(),
                e.transform.to_string(),
                e.word.render(alphabet)
            ));
            json!({
                "kind": e.kind.to_string(),
                "image": e.transform.image(),
                "word": e.word.render(alphabet),
            })
        })
        .collect();
    Ok((
        lines,
        json!({
            "m": profile.m,
            "t": profile.t,
            "kappa": profile.kappa,
            "tau": profile.tau,
            "basic_idempotent_count": basics.len(),
            "nu_present": basics.nu.is_some(),
            "basic_idempotents": list,
        }),
    ))
}

fn print_report(report: &VerificationReport) {
    println!("class: {}", report.class);
    println!("n: {}", report.n);
    if let Some(c) = report.complexity {
        println!("complexity: {c}");
    }
    if !report.orbit_sizes.is_empty() {
        println!(
            "orbits: {} of sizes {:?}",
            report.orbit_sizes.len(),
            report.orbit_sizes
        );
    }
    if let Some(k) = report.kappa {
        println!("kappa: {k}");
    }
    if let Some(t) = report.tau {
        println!("tau: {t}");
    }
    if let Some(b) = report.basic_idempotent_count {
        println!("basic idempotents: {b}");
    }
    for c in &report.checks {
        let mark = if c.pass { "PASS" } else { "FAIL" };
        println!("[{mark}] {:<32} {}", c.name, c.detail);
    }
}

fn verify(
    path: Option<&Path>,
    family: &FamilyArgs,
    budget: usize,
    json: bool,
) -> Result<(), Failure> {
    let aut = match (path, family.spec()?) {
        (Some(p), None) => read_automaton(p)?,
        (None, Some(spec)) => spec.build()?,
        (Some(_), Some(_)) => {
            return Err(
                Error::InvalidFamily("give either a file or --family, not both".into()).into(),
            )
        }
        (None, None) => return Err(Error::InvalidFamily("give a file or --family".into()).into()),
    };
    let report = verify_paper(&aut, budget)?;
    if json {
        print_json(&serde_json::to_value(&report).expect("report serializes"));
    } else {
        print_report(&report);
    }
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(Failure::Checks(format!(
            "check failed: {}: {}",
            c.name, c.detail
        ))),
    }
}

fn enumerate(n: usize, dump: Option<&Path>, json: bool) -> Result<(), Failure> {
    let result = enumerate_two_bpi_binary(n)?;
    let verdict = if result.matches_bound() {
        "MATCH"
    } else {
        "MISMATCH"
    };
    let failures = result.failures().count();
    let exceeding = result.exceeding_bound();
    let nu_absent = result
        .records
        .iter()
        .filter(|r| r.nu_present == Some(false))
        .count();
    if let (Some(path), Some(aut)) = (dump, result.argmax_witness()) {
        write_automaton(path, aut)?;
    }
    if json {
        let mut value = serde_json::to_value(&result).expect("result serializes");
        value["verdict"] = json!(verdict);
        value["failed_instances"] = json!(failures);
        value["exceeding_bound"] = json!(exceeding);
        value["nu_absent"] = json!(nu_absent);
        value["argmax_count"] = json!(result.argmax.len());
        value["argmax_witness"] = json!(result.argmax_witness().map(to_text));
        print_json(&value);
    } else {
        println!("n = {n}: {} instances", result.instance_count);
        println!(
            "max {} {} 2n(n+1) = {}: {verdict}",
            result.max_complexity,
            if result.matches_bound() { "=" } else { "!=" },
            result.bound
        );
        println!("instances exceeding 2n(n+1): {exceeding}");
        println!("instances failing a check: {failures}");
        println!("instances without a constant map: {nu_absent}");
        println!("maximizers: {}", result.argmax.len());
        if let Some(aut) = result.argmax_witness() {
            println!("first maximizer:\n{}", to_text(aut).trim_end());
        }
    }
    if failures > 0 || !result.matches_bound() || exceeding > 0 {
        return Err(Failure::Checks(format!(
            "enumeration n = {n}: {verdict}, {failures} failing instance(s)"
        )));
    }
    Ok(())
}

fn witness(family: &FamilyArgs, output: Option<&Path>) -> Result<(), Failure> {
    let spec = family
        .spec()?
        .ok_or_else(|| Error::InvalidFamily("--family is required".into()))?;
    let aut = spec.build()?;
    match output {
        Some(path) => write_automaton(path, &aut)?,
        None => print!("{}", to_text(&aut)),
    }
    Ok(())
}
