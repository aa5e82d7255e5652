//! Command-line front end. Every number in a report comes from a library call; output is
//! sorted `key=value` text or JSON with sorted keys.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::builders::{self, Family};
use crate::cyclic::{self, CycleRep};
use crate::error::{Error, Result};
use crate::hom::{self, Verdict};
use crate::linalg::{self, Tolerances};
use crate::opmodels::{self, commutant, pairs::Fixture, subspace, SequenceSpec};
use crate::quiver::Quiver;
use crate::reflection::{self, Direction};
use crate::rep::Rep;
use crate::textio;
use crate::verify::{self, sci, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "quiverlab", version, about = "Endomorphism algebras, reflections and operator models for quiver representations")]
pub struct Cli {
    /// Relative tolerance for invertibility, nonzero tests and inclusions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dir {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairKind {
    ShiftRankOne,
    Bilateral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Reflection,
    Cyclic,
    Operator,
    Builders,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// End dimension, transitivity and indecomposability of a representation file.
    Analyze { file: PathBuf },
    /// Apply a reflection functor at a vertex.
    Reflect {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long, value_enum)]
        dir: Dir,
        /// Check that End is carried isomorphically onto End of the result.
        #[arg(long)]
        verify_end_iso: bool,
    },
    /// Build an extended Dynkin representation from an operator parameter.
    Build {
        /// d4tilde (or dNtilde), e6tilde, e7tilde, e8tilde, antilde.
        #[arg(long)]
        family: String,
        /// jordan:k[:lambda], file:<path>, or a matrix fixture (diag:..., mat:...).
        #[arg(long)]
        op: String,
    },
    /// Cyclic-quiver criterion against the direct End computation.
    Cycle { file: PathBuf },
    /// Truncated operator pairs and their derived objects.
    Opmodel {
        #[arg(long, value_enum)]
        pair: PairKind,
        /// Sequence literal; for `bilateral` this is the diagonal `a`.
        #[arg(long)]
        lambda: String,
        /// Sequence literal; for `bilateral` this is the shifted diagonal `b`.
        #[arg(long)]
        w: String,
        /// Truncation size; for `bilateral` the window is `[-N, N]`.
        #[arg(long)]
        n: usize,
        /// Decide density of the range quotient (shift-rank-one only)
        #[arg(long)]
        density: bool,
        /// End of the four-subspace system, cross-checked against its inclusion representation
        #[arg(long)]
        four_subspace: bool,
        /// The map from End of the Kronecker representation to End of the subspace system
        #[arg(long)]
        phi: bool,
    },
    /// Run a seeded verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

/// Sorted report entries.
#[derive(Debug, Default, Clone)]
pub struct Report {
    pub entries: BTreeMap<String, Value>,
}

impl Report {
    pub fn set(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.entries.insert(key.into(), value.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let map: serde_json::Map<String, Value> = self.entries.clone().into_iter().collect();
                let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                for (k, v) in &self.entries {
                    let text = match v {
                        Value::String(x) => x.clone(),
                        other => other.to_string(),
                    };
                    if text.contains('\n') {
                        s.push_str(k);
                        s.push_str("=\n");
                        for line in text.lines() {
                            s.push_str("  ");
                            s.push_str(line);
                            s.push('\n');
                        }
                    } else {
                        s.push_str(&format!("{k}={text}\n"));
                    }
                }
                s
            }
        }
    }
}

/// Outcome of a command: exit code and the text to print on standard output or error.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidSequence(_)
        | Error::UnknownFixture(_)
        | Error::DuplicateVertex(_)
        | Error::DuplicateArrow(_)
        | Error::DanglingEndpoint { .. }
        | Error::EmptyQuiver
        | Error::UnknownVertex(_)
        | Error::UnknownArrow(_)
        | Error::ShapeMismatch { .. }
        | Error::NonFinite(_)
        | Error::DimsMismatch(_) => EXIT_PARSE,
        _ => EXIT_PRECONDITION,
    }
}

/// Parse arguments and run; never exits the process.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Outcome {
            code: EXIT_PARSE,
            stdout: String::new(),
            stderr: "error: --tol must be a positive number\n".into(),
        };
    }
    match execute(&cli) {
        Ok((report, ok)) => Outcome {
            code: if ok { EXIT_OK } else { EXIT_VERIFY_FAILED },
            stdout: report.render(cli.format),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn tolerances(cli: &Cli) -> Tolerances {
    Tolerances::with_rel(cli.tol)
}

fn read_rep(path: &PathBuf) -> Result<Rep> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read `{}`: {e}", path.display())))?;
    let doc = textio::parse_document(&text)?;
    Ok(doc.rep.unwrap_or_else(|| Rep::zero(doc.quiver)))
}

fn dims_text(r: &Rep) -> String {
    r.quiver()
        .vertices()
        .iter()
        .zip(r.dims())
        .map(|(v, d)| format!("{v}:{d}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn graph_tag(q: &Quiver) -> String {
    q.graph_family().map(|f| f.tag.to_string()).unwrap_or_else(|_| "other".into())
}

/// End dimension, transitivity and indecomposability entries under `prefix`.
fn analyze_into(report: &mut Report, prefix: &str, r: &Rep, seed: u64, tol: &Tolerances) -> Result<()> {
    let p = |k: &str| format!("{prefix}{k}");
    if r.is_zero() {
        report.set(p("end_dim"), 0);
        report.set(p("transitive"), false);
        report.set(p("indecomposable"), "zero");
        return Ok(());
    }
    let end = hom::end_basis_with(r, tol)?;
    let v = hom::indecomposability_from_end(&end, seed, hom::DEFAULT_TRIALS, tol);
    report.set(p("end_dim"), end.dim);
    report.set(p("end_residual"), sci(end.max_residual));
    report.set(p("transitive"), end.dim == 1);
    report.set(p("indecomposable"), v.is_indecomposable());
    report.set(p("indecomposability"), v.label());
    report.set(p("idempotent_trials"), v.trials_used);
    if let Verdict::Decomposable(e) = &v.verdict {
        report.set(p("witness.idempotent"), textio::hom_to_text(r.quiver(), e));
        report.set(p("witness.residual"), sci(e.residual));
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<(Report, bool)> {
    let tol = tolerances(cli);
    let mut report = Report::default();
    report.set("tol", sci(cli.tol));
    report.set("seed", cli.seed);
    let mut ok = true;
    match &cli.command {
        Command::Analyze { file } => {
            report.set("command", "analyze");
            report.set("input", file.display().to_string());
            let r = read_rep(file)?;
            report.set("quiver", r.quiver().name());
            report.set("graph", graph_tag(r.quiver()));
            report.set("dims", dims_text(&r));
            analyze_into(&mut report, "", &r, cli.seed, &tol)?;
        }
        Command::Reflect {
            file,
            vertex,
            dir,
            verify_end_iso,
        } => {
            report.set("command", "reflect");
            report.set("input", file.display().to_string());
            let r = read_rep(file)?;
            let direction = match dir {
                Dir::Plus => Direction::Plus,
                Dir::Minus => Direction::Minus,
            };
            let full = reflection::is_full_at(&r, vertex, direction, &tol)?;
            let res = reflection::reflect(&r, vertex, direction, &tol)?;
            report.set("vertex", vertex.as_str());
            report.set("direction", direction.label());
            report.set("dims_before", dims_text(&r));
            report.set("dims_after", dims_text(&res.rep));
            let hyp = match direction {
                Direction::Plus => "full",
                Direction::Minus => "cofull",
            };
            report.set(hyp, full);
            report.set("result", textio::rep_to_text(&res.rep));
            if *verify_end_iso {
                let e = reflection::verify_end_isomorphism(&r, vertex, direction, &tol)?;
                report.set("end_iso.status", e.status(&tol));
                report.set("end_iso.end_dim_before", e.end_dim_before);
                report.set("end_iso.end_dim_after", e.end_dim_after);
                report.set("end_iso.transported_rank", e.transported_rank);
                report.set("end_iso.membership_residual", sci(e.membership_residual));
                report.set("end_iso.multiplicativity_residual", sci(e.multiplicativity_residual));
                report.set("end_iso.unit_residual", sci(e.unit_residual));
                ok = e.status(&tol) != "failed";
            }
        }
        Command::Build { family, op } => {
            report.set("command", "build");
            report.set("family", family.as_str());
            report.set("op", op.as_str());
            let s = parse_op(op)?;
            if !s.is_square() || s.nrows() == 0 {
                return Err(Error::InvalidArgument(format!(
                    "operator parameter must be square and nonempty, got {:?}",
                    s.shape()
                )));
            }
            let r = if family.trim().eq_ignore_ascii_case("antilde") {
                let b = builders::build_an_tilde_noncyclic(&Quiver::kronecker(), &linalg::eye(s.nrows()), &s)?;
                report.set("forward_arrow", b.forward_arrow.as_str());
                report.set("backward_arrow", b.backward_arrow.as_str());
                b.rep
            } else {
                builders::build_extended_dynkin(Family::parse(family)?, &s)?
            };
            let comm = commutant::commutant_basis(&s, &tol)?.len();
            report.set("k", s.nrows());
            report.set("graph", graph_tag(r.quiver()));
            report.set("dims", dims_text(&r));
            report.set("commutant_dim", comm);
            analyze_into(&mut report, "", &r, cli.seed, &tol)?;
            let end_dim = report.entries.get("end_dim").and_then(Value::as_u64).unwrap_or(0) as usize;
            report.set("end_dim_matches_commutant", end_dim == comm);
            report.set("rep", textio::rep_to_text(&r));
        }
        Command::Cycle { file } => {
            report.set("command", "cycle");
            report.set("input", file.display().to_string());
            let r = CycleRep::from_rep(read_rep(file)?)?;
            report.set("dims", dims_text(r.rep()));
            let criterion = cyclic::cn_transitive_criterion(&r, &tol);
            let direct = if r.rep().is_zero() {
                report.set("end_dim", 0);
                false
            } else {
                let (t, d) = hom::is_transitive_with(r.rep(), &tol)?;
                report.set("end_dim", d);
                t
            };
            match cyclic::hf_components(&r, &tol) {
                Ok(c) => {
                    let comps: Vec<String> = c.iter().map(|x| format!("{{{}}}", x.join(","))).collect();
                    report.set("components", comps.join(" "));
                }
                Err(Error::DimTooLarge { vertex, dim }) => {
                    report.set("components", format!("undefined (vertex {vertex} has dimension {dim})"));
                }
                Err(e) => return Err(e),
            }
            report.set("criterion", criterion);
            report.set("transitive", direct);
            report.set("agree", criterion == direct);
            ok = criterion == direct;
        }
        Command::Opmodel {
            pair,
            lambda,
            w,
            n,
            density,
            four_subspace,
            phi,
        } => {
            report.set("command", "opmodel");
            report.set("note", "construction fixture; no infinite-dimensional claim");
            let l = SequenceSpec::parse(lambda)?;
            let ws = SequenceSpec::parse(w)?;
            let p = match pair {
                PairKind::ShiftRankOne => opmodels::kron_pair_shift_rank_one(&l, &ws, *n)?,
                PairKind::Bilateral => opmodels::kron_pair_bilateral(&l, &ws, *n)?,
            };
            report.set("pair", p.tag.as_str());
            report.set("size", p.size());
            let (ka, ra) = opmodels::pairs::kernel_info(&p.a, tol.nullspace_factor);
            let (kb, rb) = opmodels::pairs::kernel_info(&p.b, tol.nullspace_factor);
            report.set("ker_a_dim", ka);
            report.set("ker_b_dim", kb);
            report.set("sigma_ratio_a", sci(ra));
            report.set("sigma_ratio_b", sci(rb));
            if *density {
                if *pair != PairKind::ShiftRankOne {
                    return Err(Error::InvalidArgument("--density applies to the shift-rank-one pair".into()));
                }
                let d = opmodels::density_criterion(&l, &ws)?;
                report.set("density", d.label());
                if let Some(k) = d.lambda_zero_at {
                    report.set("density.lambda_zero_at", k);
                }
                if let Some(x) = d.ratio_in_l2 {
                    report.set("density.ratio_in_l2", x);
                }
            }
            if *four_subspace {
                let s = opmodels::four_subspace_from_pair(&p);
                let cc = subspace::cross_check_end(&s, &tol)?;
                report.set("four_subspace.dims", s.dims().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","));
                report.set("four_subspace.end_dim", cc.projection_dim);
                report.set("four_subspace.rep_end_dim", cc.rep_dim);
                report.set("four_subspace.residual", sci(cc.projection_residual.max(cc.rep_residual)));
                report.set("four_subspace.agree", cc.agrees(&tol));
            }
            if *phi {
                let r = opmodels::phi_map(&p, &tol)?;
                report.set("phi.end_rep_dim", r.end_rep_dim);
                report.set("phi.end_system_dim", r.end_system_dim);
                report.set("phi.image_dim", r.image_dim);
                report.set("phi.ker_dim", r.ker_dim);
                report.set("phi.expected_ker_dim", r.expected_ker_dim);
                report.set("phi.injective", r.injective);
                report.set("phi.surjective", r.surjective);
                report.set("phi.membership_residual", sci(r.membership_residual));
            }
        }
        Command::Verify { suite, trials } => {
            let suite = match suite {
                SuiteArg::Reflection => Suite::Reflection,
                SuiteArg::Cyclic => Suite::Cyclic,
                SuiteArg::Operator => Suite::Operator,
                SuiteArg::Builders => Suite::Builders,
                SuiteArg::All => Suite::All,
            };
            report.set("command", "verify");
            report.set("suite", suite.to_string());
            report.set("trials", *trials);
            let checks = verify::run(suite, *trials, cli.seed, &tol)?;
            let passed = checks.iter().filter(|c| c.passed).count();
            for c in &checks {
                let key = format!("check.{}", c.key());
                report.set(format!("{key}.status"), if c.passed { "pass" } else { "fail" });
                for (k, v) in &c.details {
                    report.set(format!("{key}.{k}"), v.as_str());
                }
            }
            report.set("summary.passed", passed);
            report.set("summary.failed", checks.len() - passed);
            ok = passed == checks.len();
        }
    }
    Ok((report, ok))
}

/// `file:<path>` reads a matrix literal; anything else is a fixture.
fn parse_op(op: &str) -> Result<linalg::CMat> {
    if let Some(path) = op.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read `{path}`: {e}")))?;
        let body: String = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .collect::<Vec<_>>()
            .join(" ");
        return textio::parse_matrix(body.trim());
    }
    Fixture::parse(op)?.matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("quiverlab").chain(args.iter().copied()))
    }

    #[test]
    fn opmodel_density() {
        let o = run_args(&[
            "opmodel", "--pair", "shift-rank-one", "--lambda", "seq:reciprocal", "--w", "seq:reciprocal", "--n", "16", "--density",
        ]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("density=dense\n"));
    }

    #[test]
    fn build_and_errors() {
        let o = run_args(&["build", "--family", "d4tilde", "--op", "jordan:2"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("end_dim=2\n") && o.stdout.contains("indecomposable=true\n"));
        let o = run_args(&["build", "--family", "x", "--op", "jordan:2"]);
        assert_eq!(o.code, EXIT_PARSE);
        let o = run_args(&["verify", "--suite", "nope"]);
        assert_eq!(o.code, EXIT_PARSE);
        let o = run_args(&[
            "opmodel", "--pair", "shift-rank-one", "--lambda", "seq:const:1", "--w", "seq:reciprocal", "--n", "4",
        ]);
        assert_eq!(o.code, EXIT_PRECONDITION);
    }

    #[test]
    fn json_is_sorted() {
        let o = run_args(&["--format", "json", "build", "--family", "antilde", "--op", "jordan:2"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["end_dim"], 2);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
