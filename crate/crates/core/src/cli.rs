//! Command-line front end. Output is TSV with `#`-prefixed headers on stdout; diagnostics
//! go to stderr.
//!
//! Exit codes: 0 success, 1 model, file or usage error, 2 numerical failure,
//! 3 failed verification or fit.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::arith::Arith;
use crate::asymptotics::{
    arch_asymptotic, classify, excursion_asymptotic, final_altitude_asymptotic, meander_ratio_asymptotic,
};
use crate::enumerate::{
    arch_masses, mean_returns_series, meander_distribution, meander_series, path_label, returns_distribution_by_arches,
    returns_to_zero_distribution, table2, walk_series, BoundaryRule,
};
use crate::error::{Error, Result};
use crate::kernel::{
    excursion_gf_bf, excursion_gf_vandermonde, perturbation_identity_residual, solve_boundary_gfs, structural_constants,
};
use crate::lawcheck::{final_altitude_law, fit, plot_data, returns_law, Statistic};
use crate::model::{parse_model, WalkModel};
use crate::presets;
use crate::verify::{verify_model, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "latpath", version, about = "Exact and asymptotic enumeration of lattice walks with a boundary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a model file and report its kind, period and violations.
    Validate { model: String },
    /// Print criticality, drift sign and model kind.
    Classify { model: String },
    /// Print the structural constants as `name<TAB>value`.
    Constants { model: String },
    /// Print `n<TAB>value` for every length up to `--n`.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        what: CountWhat,
        /// Exact rationals instead of floats.
        #[arg(long)]
        exact: bool,
        model: String,
    },
    /// Evaluate the boundary generating functions at a real point.
    GfEval {
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        model: String,
    },
    /// Compare an asymptotic estimate with the exact value.
    Asym {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        what: AsymWhat,
        model: String,
    },
    /// Print the full distribution of a statistic at length `--n`.
    Dist {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        what: StatWhat,
        #[arg(long)]
        exact: bool,
        model: String,
    },
    /// Kolmogorov distance to the predicted limit law.
    Fit {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        what: StatWhat,
        /// Print plot data (normalized value, CDFs, densities) instead of the report.
        #[arg(long)]
        plot: bool,
        model: String,
    },
    /// Conditional probabilities of every bridge under the four boundary rules.
    Table2 {
        #[arg(long, default_value_t = 4)]
        n: usize,
        model: String,
    },
    /// Run the invariant suite.
    Verify { model: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CountWhat {
    Excursions,
    Meanders,
    Arches,
    Bridges,
    Returns,
    FinalAlt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AsymWhat {
    Excursions,
    Arches,
    Meanders,
    FinalAlt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StatWhat {
    Returns,
    FinalAlt,
}

impl StatWhat {
    fn statistic(self) -> Statistic {
        match self {
            StatWhat::Returns => Statistic::ReturnsToZero,
            StatWhat::FinalAlt => Statistic::FinalAltitude,
        }
    }
}

/// Floats with 12 significant digits, trailing zeros removed; scientific notation outside
/// `[1e-4, 1e12)`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
        trim_zeros(&s).to_string()
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, exponent) = s.split_once('e').unwrap();
        format!("{}e{exponent}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    fn cell(&self) -> String {
        format_float(*self)
    }
}

impl Cell for BigRational {
    fn cell(&self) -> String {
        self.to_string()
    }
}

impl<T: Cell> Cell for Option<T> {
    fn cell(&self) -> String {
        self.as_ref().map_or_else(|| "NA".to_string(), Cell::cell)
    }
}

/// Either a file path or `preset:<name>`.
pub fn load_model(spec: &str) -> Result<WalkModel> {
    if let Some(name) = spec.strip_prefix("preset:") {
        let names: Vec<&str> = presets::named().iter().map(|(n, _)| *n).collect();
        return presets::by_name(name)
            .ok_or_else(|| Error::Io(format!("unknown preset {name:?}; available: {}", names.join(", "))));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Io(format!("{spec}: {e}")))?;
    parse_model(&text)
}

fn load_valid(spec: &str) -> Result<WalkModel> {
    let model = load_model(spec)?;
    model.require_valid()?;
    Ok(model)
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    // a closed stdout (e.g. `| head`) is not an error worth reporting
    let mut buf = Vec::new();
    let result = dispatch(cli.command, &mut buf);
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { model } => validate(&model, out),
        Command::Classify { model } => {
            let c = classify(&load_valid(&model)?)?;
            writeln!(out, "# criticality\tdrift\tkind").map_err(io)?;
            writeln!(out, "{}\t{}\t{}", c.criticality, c.drift, c.kind).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Constants { model } => {
            let sc = structural_constants(&load_valid(&model)?)?;
            writeln!(out, "# name\tvalue\ncriticality\t{}", sc.criticality).map_err(io)?;
            for (name, v) in sc.entries() {
                writeln!(out, "{name}\t{}", format_float(v)).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Count { n, what, exact, model } => {
            let model = load_valid(&model)?;
            let rows =
                if exact { count_rows::<BigRational>(&model, n, what) } else { count_rows::<f64>(&model, n, what) };
            writeln!(out, "# n\t{}", what.to_possible_value().unwrap().get_name()).map_err(io)?;
            for (k, v) in rows.iter().enumerate() {
                writeln!(out, "{k}\t{v}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::GfEval { z, model } => gf_eval(&load_valid(&model)?, z, out),
        Command::Asym { n, what, model } => asym(&load_valid(&model)?, n, what, out),
        Command::Dist { n, what, exact, model } => dist(&load_valid(&model)?, n, what, exact, out),
        Command::Fit { n, what, plot, model } => fit_command(&load_valid(&model)?, n, what, plot, out),
        Command::Table2 { n, model } => {
            let t = table2(&load_valid(&model)?, n)?;
            let header: Vec<String> = BoundaryRule::ALL.iter().map(|r| r.to_string()).collect();
            writeln!(out, "# path\t{}", header.join("\t")).map_err(io)?;
            for row in &t.rows {
                let cells: Vec<String> = BoundaryRule::ALL.iter().map(|r| row.get(*r).to_string()).collect();
                writeln!(out, "{}\t{}", path_label(&row.path), cells.join("\t")).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { model } => {
            let checks = verify_model(&load_valid(&model)?)?;
            writeln!(out, "# check\tstatus\tdetail").map_err(io)?;
            for c in &checks {
                writeln!(out, "{}\t{}\t{}", c.name, c.status, c.detail).map_err(io)?;
            }
            Ok(if checks.iter().any(|c| c.status == Status::Fail) {
                EXIT_VERIFY
            } else if checks.iter().any(|c| c.status == Status::Error) {
                EXIT_NUMERICAL
            } else {
                EXIT_OK
            })
        }
    }
}

fn validate(spec: &str, out: &mut dyn Write) -> Result<i32> {
    let model = load_model(spec)?;
    let report = model.validate();
    writeln!(out, "# field\tvalue").map_err(io)?;
    writeln!(out, "valid\t{}", report.ok()).map_err(io)?;
    writeln!(out, "kind\t{}", report.kind).map_err(io)?;
    writeln!(out, "c\t{}\nd\t{}", model.c(), model.d()).map_err(io)?;
    writeln!(out, "lukasiewicz\t{}", report.lukasiewicz).map_err(io)?;
    writeln!(out, "period\t{}", report.periodicity.period).map_err(io)?;
    for v in &report.violations {
        writeln!(out, "violation\t{v}").map_err(io)?;
    }
    Ok(if report.ok() { EXIT_OK } else { EXIT_INPUT })
}

fn count_rows<T: Arith + Cell>(model: &WalkModel, n: usize, what: CountWhat) -> Vec<String> {
    let cells = |v: Vec<T>| v.iter().map(Cell::cell).collect();
    match what {
        CountWhat::Excursions => cells(meander_series::<T>(model, n).excursions),
        CountWhat::Meanders => cells(meander_series::<T>(model, n).meanders),
        CountWhat::Arches => cells(arch_masses::<T>(model, n)),
        CountWhat::Bridges => cells(walk_series::<T>(model, n).1),
        CountWhat::Returns => mean_returns_series::<T>(model, n).iter().map(Cell::cell).collect(),
        CountWhat::FinalAlt => {
            let s = meander_series::<T>(model, n);
            s.altitude_sums
                .iter()
                .zip(&s.meanders)
                .map(|(a, m)| (!crate::arith::Semiring::is_zero(m)).then(|| a.div(m)).cell())
                .collect()
        }
    }
}

fn gf_eval(model: &WalkModel, z: f64, out: &mut dyn Write) -> Result<i32> {
    let f = solve_boundary_gfs(model, z)?;
    writeln!(out, "# quantity\tvalue").map_err(io)?;
    for (k, v) in f.iter().enumerate() {
        writeln!(out, "F{k}\t{}", format_float(*v)).map_err(io)?;
    }
    writeln!(out, "E_vandermonde\t{}", format_float(excursion_gf_vandermonde(model, z)?)).map_err(io)?;
    writeln!(out, "E_free\t{}", format_float(excursion_gf_bf(model, z)?)).map_err(io)?;
    writeln!(out, "perturbation_residual\t{}", format_float(perturbation_identity_residual(model, z)?)).map_err(io)?;
    Ok(EXIT_OK)
}

fn asym(model: &WalkModel, n: usize, what: AsymWhat, out: &mut dyn Write) -> Result<i32> {
    let est = match what {
        AsymWhat::Excursions => excursion_asymptotic(model, n)?,
        AsymWhat::Arches => arch_asymptotic(model, n)?,
        AsymWhat::Meanders => meander_ratio_asymptotic(model, n)?,
        AsymWhat::FinalAlt => final_altitude_asymptotic(model, n)?,
    };
    let exact = match what {
        AsymWhat::Arches => arch_masses::<f64>(model, n)[n],
        _ => {
            let s = meander_series::<f64>(model, n);
            match what {
                AsymWhat::Excursions => s.excursions[n],
                AsymWhat::Meanders => s.meanders[n],
                _ => s.altitude_sums[n] / s.meanders[n],
            }
        }
    };
    writeln!(out, "# n\tformula\testimate\texact\tratio").map_err(io)?;
    writeln!(
        out,
        "{n}\t{}\t{}\t{}\t{}",
        est.formula_id,
        format_float(est.value),
        format_float(exact),
        format_float(exact / est.value)
    )
    .map_err(io)?;
    Ok(EXIT_OK)
}

fn dist(model: &WalkModel, n: usize, what: StatWhat, exact: bool, out: &mut dyn Write) -> Result<i32> {
    let header = match what {
        StatWhat::Returns => "# returns\tprobability",
        StatWhat::FinalAlt => "# altitude\tprobability",
    };
    let rows: Vec<(usize, String)> = match (what, exact) {
        (StatWhat::Returns, true) => {
            let d = returns_to_zero_distribution::<BigRational>(model, n)?;
            d.iter().map(|(k, p)| (k, p.cell())).collect()
        }
        (StatWhat::Returns, false) => {
            let d = returns_distribution_by_arches::<f64>(model, n)?;
            d.iter().map(|(k, p)| (k, p.cell())).collect()
        }
        (StatWhat::FinalAlt, true) => {
            let d = meander_distribution::<BigRational>(model, n);
            let total = d.total();
            if num_traits::Zero::is_zero(&total) {
                return Err(Error::NoSurvivors { n });
            }
            d.iter().filter(|(_, m)| !num_traits::Zero::is_zero(*m)).map(|(k, m)| (k, (m / &total).cell())).collect()
        }
        (StatWhat::FinalAlt, false) => crate::lawcheck::exact_distribution(model, Statistic::FinalAltitude, n)?
            .into_iter()
            .map(|(k, p)| (k, p.cell()))
            .collect(),
    };
    writeln!(out, "{header}").map_err(io)?;
    for (k, p) in rows {
        writeln!(out, "{k}\t{p}").map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn fit_command(model: &WalkModel, n: usize, what: StatWhat, plot: bool, out: &mut dyn Write) -> Result<i32> {
    let stat = what.statistic();
    let spec = match stat {
        Statistic::ReturnsToZero => returns_law(model)?,
        Statistic::FinalAltitude => final_altitude_law(model)?,
    };
    if plot {
        writeln!(out, "# x\tempirical_cdf\tlaw_cdf\tempirical_density\tlaw_density").map_err(io)?;
        for r in plot_data(model, stat, n, &spec)? {
            let cells = [r.x, r.empirical_cdf, r.law_cdf, r.empirical_density, r.law_density].map(format_float);
            writeln!(out, "{}", cells.join("\t")).map_err(io)?;
        }
        return Ok(EXIT_OK);
    }
    let report = fit(model, stat, n, &spec)?;
    writeln!(out, "# field\tvalue").map_err(io)?;
    writeln!(out, "statistic\t{stat}\ncase\t{}\nlaw\t{}\nnormalization\t{}", spec.case, spec.law, spec.normalization)
        .map_err(io)?;
    writeln!(out, "n\t{n}\nsup_distance\t{}\nat\t{}", format_float(report.sup_distance), format_float(report.at))
        .map_err(io)?;
    writeln!(out, "tolerance\t{}\npassed\t{}", format_float(report.tolerance), report.passed).map_err(io)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
}
