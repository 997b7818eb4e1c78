//! Command-line interface: loads scenario files, runs the structural and
//! differential-geometric checks, and prints Čech cochains.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cechweil::algebra::{Rational, Var};
use cechweil::cech::{check_cocycle, chern_representative, fibre_integrate, CechCochain};
use cechweil::connections::{barycentric, check_admissible, check_simplicial};
use cechweil::finite_model::{
    admissibility_witness_search, apply_e, class_invariant, is_weak_equivalence, EndoPair, FMat,
    Fp, PairMorphism,
};
use cechweil::twisting::mc_check;
use cechweil::CheckReport;

use cechweil_cli::scenario::{load_file, Scenario};

#[derive(Parser)]
#[command(
    name = "cechweil",
    about = "Exact Čech–de Rham representatives of characteristic classes on a cover",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a scenario and run all structural validation
    Validate { scenario: PathBuf },
    /// Verify the Green splitting/cocycle structure of the complex
    GreenCheck { scenario: PathBuf },
    /// Verify the Maurer–Cartan equation of the twisting cochain
    McCheck { scenario: PathBuf },
    /// Verify that the barycentric connections are simplicial
    SimplicialCheck { scenario: PathBuf },
    /// Verify admissibility of the barycentric connections
    AdmissibleCheck { scenario: PathBuf },
    /// Print the curvature of the barycentric connections
    Curvature { scenario: PathBuf },
    /// Compute the degree-2k curvature-trace representative
    Chern {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Fibre-integrate the scenario's family section into a Čech cochain
    Integrate { scenario: PathBuf },
    /// Operations in the finite endomorphism-pair model
    FiniteModel {
        #[command(subcommand)]
        op: FiniteOp,
    },
}

#[derive(Subcommand)]
enum FiniteOp {
    /// Quotient by the kernel: prints the induced endomorphism
    ApplyE {
        /// matrix in grid syntax, e.g. "1 0; 0 0"
        phi: String,
    },
    /// Does f become an isomorphism after applying E?
    Weq { f: String, phi: String, psi: String },
    /// Brute-force admissibility witness search over F5
    Witness { f: String, phi: String, psi: String },
    /// Rational canonical form data of the image class
    Invariant { phi: String },
}

fn main() -> ExitCode {
    // die quietly when the consumer of our stdout goes away (e.g. `| head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn verbose() -> bool {
    std::env::var("CECHWEIL_VERBOSE")
        .map(|v| v == "1")
        .unwrap_or(false)
}

fn print_report(label: &str, report: &CheckReport) -> ExitCode {
    if report.pass() {
        println!("{label}: pass");
        for note in &report.notes {
            println!("  note: {note}");
        }
        ExitCode::SUCCESS
    } else {
        println!("{label}: FAIL");
        if verbose() {
            for v in &report.violations {
                println!("  {v}");
            }
        } else if let Some(v) = report.first_violation() {
            println!("  {v}");
        }
        for note in &report.notes {
            println!("  note: {note}");
        }
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Validate { scenario } => {
            let sc = load_file(&scenario).map_err(|e| e.to_string())?;
            let mut parts = vec![format!("{} opens", sc.cover.opens.len())];
            if sc.complex.is_some() {
                parts.push("complex".into());
            }
            if sc.green.is_some() {
                parts.push("green structure".into());
            }
            if sc.twisting.is_some() {
                parts.push("twisting".into());
            }
            if sc.family.is_some() {
                parts.push("family".into());
            }
            println!(
                "ok: {} (depth {}, {})",
                sc.name,
                sc.cover.depth,
                parts.join(", ")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::GreenCheck { scenario } => {
            let sc = load_file(&scenario).map_err(|e| e.to_string())?;
            let cx = sc.complex.as_ref().ok_or("no [complex] section")?;
            let gs = sc.green.as_ref().ok_or("no [green] section")?;
            let report =
                cechweil::bundles::check_green(cx, gs, &sc.cover).map_err(|e| e.to_string())?;
            Ok(print_report("green-check", &report))
        }
        Command::McCheck { scenario } => {
            let sc = load_file(&scenario).map_err(|e| e.to_string())?;
            let tw = sc.twisting.as_ref().ok_or("no [twisting] section")?;
            let report = mc_check(tw, &sc.cover).map_err(|e| e.to_string())?;
            Ok(print_report("mc-check", &report))
        }
        Command::SimplicialCheck { scenario } => {
            let sc = load_file(&scenario).map_err(|e| e.to_string())?;
            let conns = barycentric_of(&sc)?;
            let cx = sc.complex.as_ref().expect("checked in barycentric_of");
            let mut all = CheckReport::new();
            for conn in &conns {
                let rep = check_simplicial(conn, cx, &sc.cover).map_err(|e| e.to_string())?;
                for v in rep.violations {
                    all.violation(format!("level {}: {v}", conn.star));
                }
            }
            Ok(print_report("simplicial-check", &all))
        }
        Command::AdmissibleCheck { scenario } => {
            let sc = load_file(&scenario).map_err(|e| e.to_string())?;
            let conns = barycentric_of(&sc)?;
            let cx = sc.complex.as_ref().expect("checked in barycentric_of");
            let mut all = CheckReport::new();
            for conn in &conns {
                let wit = sc.witnesses_for(conn.star).map_err(|e| e.to_string())?;
                let rep =
                    check_admissible(conn, &wit, cx, &sc.cover).map_err(|e| e.to_string())?;
                for v in rep.violations {
                    all.violation(format!("level {}: {v}", conn.star));
                }
                for n in rep.notes {
                    all.note(format!("level {}: {n}", conn.star));
                }
            }
            Ok(print_report("admissible-check", &all))
        }
        Command::Curvature { scenario } => {
            let sc = load_file(&scenario).map_err(|e| e.to_string())?;
            let conns = barycentric_of(&sc)?;
            for conn in &conns {
                let curv = conn.curvature().map_err(|e| e.to_string())?;
                for (t, m) in &curv {
                    let chart = sc.cover.chart_of(t).map_err(|e| e.to_string())?;
                    let rendered =
                        cechweil::algebra::render_matrix(m, |f| f.render(&namer(chart)));
                    println!(
                        "kappa[{}] {} = {}",
                        conn.star,
                        sc.cover.render_tuple(t),
                        rendered
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Chern { scenario, k } => {
            let sc = load_file(&scenario).map_err(|e| e.to_string())?;
            if k == 0 {
                return Err("k must be at least 1".into());
            }
            let conns = barycentric_of(&sc)?;
            let cx = sc.complex.as_ref().expect("checked in barycentric_of");
            let rep =
                chern_representative(cx, &conns, k, &sc.cover).map_err(|e| e.to_string())?;
            print_cochain(&sc, &rep);
            let closed = check_cocycle(&rep, &sc.cover).map_err(|e| e.to_string())?;
            if closed.pass() {
                println!("cocycle: pass");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("cocycle: FAIL");
                Ok(ExitCode::from(1))
            }
        }
        Command::Integrate { scenario } => {
            let sc = load_file(&scenario).map_err(|e| e.to_string())?;
            let fam = sc.family.as_ref().ok_or("no [family] section")?;
            let cochain = fibre_integrate(fam, &sc.cover).map_err(|e| e.to_string())?;
            print_cochain(&sc, &cochain);
            Ok(ExitCode::SUCCESS)
        }
        Command::FiniteModel { op } => run_finite(op),
    }
}

fn namer(chart: &cechweil::algebra::ChartRef) -> impl Fn(Var) -> String + '_ {
    move |v: Var| match v {
        Var::Coord(i) => chart.var_name(i).to_string(),
        Var::T(i) => format!("t{i}"),
    }
}

fn barycentric_of(
    sc: &Scenario,
) -> Result<Vec<cechweil::connections::SimplicialConnection>, String> {
    let cx = sc.complex.as_ref().ok_or("no [complex] section")?;
    let gs = sc.green.as_ref().ok_or("no [green] section")?;
    let locals = sc.locals.as_ref().ok_or("no [connections] section")?;
    barycentric(cx, gs, &sc.cover, locals).map_err(|e| e.to_string())
}

fn print_cochain(sc: &Scenario, c: &CechCochain) {
    println!("total degree {}", c.degree);
    for p in 0..=c.degree {
        for t in sc.cover.tuples(p) {
            let f = c.component(p, &t);
            let rendered = match sc.cover.chart_of(&t) {
                Ok(chart) => f.render(&namer(chart)),
                Err(_) => "0".to_string(),
            };
            println!("p={p} {}: {rendered}", sc.cover.render_tuple(&t));
        }
    }
}

fn parse_grid_q(s: &str) -> Result<FMat<Rational>, String> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for row in s.split(';') {
        let mut entries = Vec::new();
        for cell in row.split_whitespace() {
            entries.push(parse_rational(cell)?);
        }
        if !entries.is_empty() {
            rows.push(entries);
        }
    }
    FMat::from_rows(rows).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| format!("bad rational '{s}'"))?;
        let d: i64 = d.trim().parse().map_err(|_| format!("bad rational '{s}'"))?;
        if d == 0 {
            return Err("zero denominator".into());
        }
        Ok(Rational::new(n, d))
    } else {
        let n: i64 = s.trim().parse().map_err(|_| format!("bad integer '{s}'"))?;
        Ok(Rational::from_int(n))
    }
}

fn parse_grid_f5(s: &str) -> Result<FMat<Fp<5>>, String> {
    let mut rows: Vec<Vec<Fp<5>>> = Vec::new();
    for row in s.split(';') {
        let mut entries = Vec::new();
        for cell in row.split_whitespace() {
            let v: i64 = cell
                .trim()
                .parse()
                .map_err(|_| format!("bad entry '{cell}'"))?;
            entries.push(Fp(v.rem_euclid(5) as u64));
        }
        if !entries.is_empty() {
            rows.push(entries);
        }
    }
    FMat::from_rows(rows).map_err(|e| e.to_string())
}

fn render_grid_q(m: &FMat<Rational>) -> String {
    let mut rows = Vec::new();
    for r in 0..m.rows {
        let mut row = Vec::new();
        for c in 0..m.cols {
            row.push(m.at(r, c).render());
        }
        rows.push(row.join(" "));
    }
    rows.join("; ")
}

fn run_finite(op: FiniteOp) -> Result<ExitCode, String> {
    match op {
        FiniteOp::ApplyE { phi } => {
            let phi = parse_grid_q(&phi)?;
            let x = EndoPair::new(phi).map_err(|e| e.to_string())?;
            let e = apply_e(&x);
            println!("dimension {}", e.dim());
            println!("[{}]", render_grid_q(&e.phi));
            Ok(ExitCode::SUCCESS)
        }
        FiniteOp::Weq { f, phi, psi } => {
            let phi = EndoPair::new(parse_grid_q(&phi)?).map_err(|e| e.to_string())?;
            let psi = EndoPair::new(parse_grid_q(&psi)?).map_err(|e| e.to_string())?;
            let m = PairMorphism::new(phi, psi, parse_grid_q(&f)?).map_err(|e| e.to_string())?;
            if is_weak_equivalence(&m) {
                println!("weak equivalence: yes");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("weak equivalence: no");
                Ok(ExitCode::from(1))
            }
        }
        FiniteOp::Witness { f, phi, psi } => {
            let phi = EndoPair::new(parse_grid_f5(&phi)?).map_err(|e| e.to_string())?;
            let psi = EndoPair::new(parse_grid_f5(&psi)?).map_err(|e| e.to_string())?;
            let m = PairMorphism::new(phi, psi, parse_grid_f5(&f)?).map_err(|e| e.to_string())?;
            match admissibility_witness_search(&m).map_err(|e| e.to_string())? {
                Some(w) => {
                    println!(
                        "witness: found (dim V1 = {}, dim W1 = {})",
                        w.v1.cols, w.w1.cols
                    );
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("witness: none");
                    Ok(ExitCode::from(1))
                }
            }
        }
        FiniteOp::Invariant { phi } => {
            let x = EndoPair::new(parse_grid_q(&phi)?).map_err(|e| e.to_string())?;
            let inv = class_invariant(&x);
            if inv.is_empty() {
                println!("class of zero");
            } else {
                for f in inv {
                    println!("{}", f.render("x"));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
