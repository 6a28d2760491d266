use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use ruling_lab::dga::{ce_dga, check_equivalence, find_augmentation, DgaRing, DEFAULT_SEARCH_CAP};
use ruling_lab::front::shuffle_moves;
use ruling_lab::kauffman::{check_ruling_coefficient, kauffman_normalized, kauffman_unnormalized};
use ruling_lab::maslov::solve_maslov;
use ruling_lab::pd::{ng_resolution, total_tb};
use ruling_lab::resolve::full_resolutions;
use ruling_lab::ruling::{
    closed_polynomial, enumerate_graph_rulings, per_resolution, ruling_polynomial, transfer_matrix,
};
use ruling_lab::{Error, FrontDiagram, MaslovPotential, Matching, Ring};

#[derive(Parser)]
#[command(name = "ruling-lab", version, about = "Rulings, Kauffman-Vogel checks and DGAs of Legendrian graph fronts")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Graded {
    /// Grading period.
    #[arg(long, default_value_t = 1)]
    rho: u64,
    /// Ring of the Maslov potential, Z or Z<m>. Defaults to the ring in
    /// which ρ-gradings are compared.
    #[arg(long)]
    ring: Option<Ring>,
}

impl Graded {
    fn ring(&self) -> Ring {
        self.ring.unwrap_or(Ring::Z.graded(self.rho))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a diagram file and list violations.
    Validate { file: PathBuf },
    /// Ruling polynomial, per resolution, or the rulings themselves.
    Rulings {
        file: PathBuf,
        #[command(flatten)]
        g: Graded,
        /// Left border matching such as 1-2,3-4.
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
        /// List individual rulings.
        #[arg(long)]
        list: bool,
    },
    /// Transfer matrix over all graded border matchings.
    RulingMatrix {
        file: PathBuf,
        #[command(flatten)]
        g: Graded,
    },
    /// Full vertex resolutions.
    Resolve {
        file: PathBuf,
        #[command(flatten)]
        g: Graded,
    },
    /// Close the borders with one vertex on each side.
    Close { file: PathBuf },
    /// Kauffman-Vogel polynomial of the resolved front.
    Kauffman {
        file: PathBuf,
        #[arg(long)]
        unnormalized: bool,
    },
    /// Compare the ungraded ruling polynomial with the Kauffman coefficient.
    CheckKv { file: PathBuf },
    /// Total Thurston-Bennequin number and component writhes.
    Tb { file: PathBuf },
    /// Differential graded algebra of a vertex-free closed front.
    Dga {
        file: PathBuf,
        /// gf2 or z
        #[arg(long, default_value = "gf2")]
        coeffs: DgaRing,
        #[arg(long)]
        ring: Option<Ring>,
    },
    /// Search for a Z/2 augmentation.
    Aug {
        file: PathBuf,
        #[command(flatten)]
        g: Graded,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: usize,
    },
    /// Ruling existence against augmentation existence.
    CheckEquiv {
        file: PathBuf,
        #[command(flatten)]
        g: Graded,
    },
    /// Apply random equivalence moves.
    Moves {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        shuffle: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest diagram length reachable by growth moves.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Check every stored corpus expectation.
    CorpusVerify {
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
    },
}

enum Fail {
    Input(String),
    Disagree,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Input(e.to_string())
    }
}

type Out = Result<(), Fail>;

fn load(path: &Path) -> Result<FrontDiagram, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {}", path.display(), e)))?;
    let d = FrontDiagram::parse(&text).map_err(|e| Fail::Input(format!("{}: {}", path.display(), e)))?;
    d.check().map_err(|e| Fail::Input(format!("{}: {}", path.display(), e)))?;
    Ok(d)
}

/// Z if possible, else Z/2, else Z/1.
fn potential(d: &FrontDiagram, ring: Option<Ring>) -> Result<MaslovPotential, Fail> {
    match ring {
        Some(r) => Ok(solve_maslov(d, r, &[])?),
        None => [Ring::Z, Ring::Mod(2), Ring::Mod(1)]
            .iter()
            .find_map(|r| solve_maslov(d, *r, &[]).ok())
            .ok_or_else(|| Fail::Input("no Maslov potential".into())),
    }
}

fn emit(json: bool, v: Value, text: String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        print!("{}", text);
        if !text.ends_with('\n') {
            println!();
        }
    }
}

fn default_border(d: &FrontDiagram, m: &Option<String>, n: usize) -> Result<Matching, Fail> {
    match m {
        Some(s) => Ok(Matching::parse(s)?),
        None if n == 0 => Ok(Matching::empty()),
        None => Err(Fail::Input(format!("diagram of type ({}, {}) needs --left and --right", d.left, d.right))),
    }
}

fn run(cli: Cli) -> Out {
    let json = cli.json;
    match cli.cmd {
        Cmd::Validate { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Fail::Input(format!("{}: {}", file.display(), e)))?;
            let d = FrontDiagram::parse(&text)?;
            match d.validate() {
                Ok(()) => emit(json, json!({"valid": true, "violations": []}), "ok".into()),
                Err(vs) => {
                    let list: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                    emit(json, json!({"valid": false, "violations": list}), list.join("\n"));
                    return Err(Fail::Input(format!("{} violation(s)", vs.len())));
                }
            }
        }
        Cmd::Rulings { file, g, left, right, list } => {
            let d = load(&file)?;
            let mu = solve_maslov(&d, g.ring(), &[])?;
            let phi = default_border(&d, &left, d.left)?;
            let psi = default_border(&d, &right, d.right)?;
            if list {
                let rs = enumerate_graph_rulings(&d, &mu, g.rho, &phi, &psi)?;
                let text: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
                emit(json, serde_json::to_value(&rs).expect("json"), format!("{}\n{} ruling(s)", text.join("\n"), rs.len()));
            } else {
                let total = ruling_polynomial(&d, &mu, g.rho, &phi, &psi)?;
                let mut text = format!("R = {}\n", total);
                let mut parts = Vec::new();
                if d.has_vertices() {
                    for (choice, p) in per_resolution(&d, &mu, g.rho, &phi, &psi)? {
                        let c: Vec<String> = choice.iter().map(|m| m.to_string()).collect();
                        text.push_str(&format!("  [{}] {}\n", c.join("; "), p));
                        parts.push(json!({"resolution": c, "polynomial": p.to_json()}));
                    }
                }
                emit(json, json!({"rho": g.rho, "ring": mu.ring.to_string(), "polynomial": total.to_json(), "per_resolution": parts}), text);
            }
        }
        Cmd::RulingMatrix { file, g } => {
            let d = load(&file)?;
            let mu = solve_maslov(&d, g.ring(), &[])?;
            let t = transfer_matrix(&d, &mu, g.rho)?;
            emit(json, t.to_json(), t.render());
        }
        Cmd::Resolve { file, g } => {
            let d = load(&file)?;
            let mu = solve_maslov(&d, g.ring(), &[])?;
            let res = full_resolutions(&d, &mu, g.rho)?;
            let mut text = String::new();
            let mut out = Vec::new();
            for r in &res {
                let c: Vec<String> = r.choice.iter().map(|m| m.to_string()).collect();
                text.push_str(&format!("# resolution [{}]\n{}\n", c.join("; "), r.diagram.to_text()));
                out.push(json!({"resolution": c, "diagram": r.diagram.to_json()}));
            }
            emit(json, Value::Array(out), text);
        }
        Cmd::Close { file } => {
            let c = load(&file)?.close();
            emit(json, c.to_json(), c.to_text());
        }
        Cmd::Kauffman { file, unnormalized } => {
            let d = load(&file)?;
            let f = if unnormalized { kauffman_unnormalized(&d)? } else { kauffman_normalized(&d)? };
            emit(json, json!({"normalized": !unnormalized, "value": f.to_string()}), f.to_string());
        }
        Cmd::CheckKv { file } => {
            let r = check_ruling_coefficient(&load(&file)?)?;
            emit(json, serde_json::to_value(&r).expect("json"), format!(
                "tb = {}\nruling = {}\ncoefficient = {}\n{}",
                r.tb,
                r.lhs,
                r.rhs,
                if r.equal { "equal" } else { "DIFFERENT" }
            ));
            if !r.equal {
                return Err(Fail::Disagree);
            }
        }
        Cmd::Tb { file } => {
            let d = load(&file)?;
            let tb = total_tb(&d)?;
            let w = ng_resolution(&d)?.component_writhes();
            let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            emit(json, json!({"tb": tb, "writhes": w}), format!("tb = {}\nwrithes = {}", tb, ws.join(" ")));
        }
        Cmd::Dga { file, coeffs, ring } => {
            let d = load(&file)?;
            let mu = potential(&d, ring)?;
            let p = ce_dga(&d, &mu, coeffs)?;
            emit(json, p.to_json(), p.to_string());
        }
        Cmd::Aug { file, g, cap } => {
            let d = load(&file)?;
            let mu = solve_maslov(&d, g.ring(), &[])?;
            let p = ce_dga(&d, &mu, DgaRing::Gf2)?;
            let a = find_augmentation(&p, g.rho, cap)?;
            match a {
                Some(a) => emit(json, json!({"exists": true, "values": a.values}), a.to_string()),
                None => emit(json, json!({"exists": false}), "none".into()),
            }
        }
        Cmd::CheckEquiv { file, g } => {
            let r = check_equivalence(&load(&file)?, g.ring(), g.rho)?;
            emit(json, serde_json::to_value(&r).expect("json"), format!(
                "rho = {}\nruling = {}\naugmentation = {}\n{}",
                r.rho,
                r.ruling_exists,
                r.augmentation_exists,
                if r.agree { "agree" } else { "DISAGREE" }
            ));
            if !r.agree {
                return Err(Fail::Disagree);
            }
        }
        Cmd::Moves { file, shuffle, seed, max_len } => {
            let d = load(&file)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = shuffle_moves(&d, shuffle, max_len.unwrap_or(d.len() + 8), &mut rng);
            emit(json, e.to_json(), e.to_text());
        }
        Cmd::CorpusVerify { dir } => return corpus_verify(&dir, json),
    }
    Ok(())
}

/// One stored expectation. `origin` maps each expected field to where the
/// value came from: "reference" (published) or "derived" (hand or oracle).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusEntry {
    name: String,
    file: String,
    #[serde(default)]
    invalid: bool,
    /// ρ to rendered polynomial.
    #[serde(default)]
    ruling: BTreeMap<u64, String>,
    /// Sorted ρ = 1 values of the resolutions.
    per_resolution: Option<Vec<String>>,
    tb: Option<i64>,
    writhes: Option<Vec<i64>>,
    kauffman: Option<String>,
    kv_equal: Option<bool>,
    equivalent_to: Option<String>,
    #[serde(default)]
    origin: BTreeMap<String, String>,
}

fn check_entry(dir: &Path, e: &CorpusEntry, all: &[CorpusEntry]) -> Result<Vec<String>, Fail> {
    let mut bad = Vec::new();
    let mut expect = |what: &str, got: String, want: String| {
        if got != want {
            bad.push(format!("{}: got {}, expected {}", what, got, want));
        }
    };
    let path = dir.join(&e.file);
    if e.invalid {
        let text = std::fs::read_to_string(&path).map_err(|err| Fail::Input(err.to_string()))?;
        let ok = FrontDiagram::parse(&text).map(|d| d.validate().is_ok()).unwrap_or(false);
        expect("valid", ok.to_string(), "false".into());
        return Ok(bad);
    }
    let d = load(&path)?;
    for (&rho, want) in &e.ruling {
        expect(&format!("R_{}", rho), closed_polynomial(&d, Ring::Z.graded(rho), rho)?.to_string(), want.clone());
    }
    if let Some(want) = &e.per_resolution {
        let mu = solve_maslov(&d, Ring::Mod(1), &[])?;
        let m = Matching::empty();
        let mut got: Vec<String> = per_resolution(&d, &mu, 1, &m, &m)?.into_iter().map(|(_, p)| p.to_string()).collect();
        got.sort();
        expect("per-resolution", got.join(", "), want.join(", "));
    }
    if let Some(want) = e.tb {
        expect("tb", total_tb(&d)?.to_string(), want.to_string());
    }
    if let Some(want) = &e.writhes {
        expect("writhes", format!("{:?}", ng_resolution(&d)?.component_writhes()), format!("{:?}", want));
    }
    if let Some(want) = &e.kauffman {
        expect("kauffman", kauffman_normalized(&d)?.to_string(), want.clone());
    }
    if let Some(want) = e.kv_equal {
        expect("check-kv", check_ruling_coefficient(&d)?.equal.to_string(), want.to_string());
    }
    if let Some(p) = &e.equivalent_to {
        let other = all
            .iter()
            .find(|x| &x.name == p)
            .ok_or_else(|| Fail::Input(format!("{}: unknown partner {}", e.name, p)))?;
        let o = load(&dir.join(&other.file))?;
        for rho in [0, 1, 2] {
            let r = Ring::Z.graded(rho);
            let (a, b) = (closed_polynomial(&d, r, rho).ok(), closed_polynomial(&o, r, rho).ok());
            expect(&format!("R_{} against {}", rho, p), format!("{:?}", a), format!("{:?}", b));
        }
    }
    if !d.has_vertices() {
        let mu = potential(&d, None)?;
        let p = ce_dga(&d, &mu, DgaRing::Gf2)?;
        expect("d^2 failures", format!("{:?}", p.d_squared_failures()), "[]".into());
        expect("grading failures", format!("{:?}", p.grading_failures()), "[]".into());
        for rho in [1, 2] {
            let r = check_equivalence(&d, Ring::Mod(rho), rho)?;
            expect(&format!("equivalence at rho {}", rho), r.agree.to_string(), "true".into());
        }
    }
    Ok(bad)
}

fn corpus_verify(dir: &Path, json: bool) -> Out {
    let path = dir.join("expectations.json");
    let text = std::fs::read_to_string(&path).map_err(|e| Fail::Input(format!("{}: {}", path.display(), e)))?;
    let entries: Vec<CorpusEntry> =
        serde_json::from_str(&text).map_err(|e| Fail::Input(format!("{}: {}", path.display(), e)))?;
    let mut lines = Vec::new();
    let mut report = Vec::new();
    let mut failed = 0;
    for e in &entries {
        let bad = check_entry(dir, e, &entries)?;
        if bad.is_empty() {
            lines.push(format!("ok   {}", e.name));
        } else {
            failed += 1;
            lines.push(format!("FAIL {}: {}", e.name, bad.join("; ")));
        }
        report.push(json!({"name": e.name, "ok": bad.is_empty(), "problems": bad, "origin": e.origin}));
    }
    lines.push(format!("{} of {} entries match", entries.len() - failed, entries.len()));
    emit(json, Value::Array(report), lines.join("\n"));
    if failed > 0 {
        Err(Fail::Disagree)
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match ruling_lab::pool().install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Disagree) => ExitCode::from(1),
        Err(Fail::Input(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
