//! Command driver behind the `qsolv` binary. `run_command` does all the work
//! and returns the exit status with the text it would print, so tests can
//! call it directly.
//!
//! Report files written with `--out` hold one `key: value` pair per line,
//! keys sorted bytewise. Keys are dotted paths such as `stratum.003.vanish`.

use std::collections::BTreeMap;
use std::fs;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use qsolv_core::{
    ad_eigencomponents, admissible_compositions, builtin_presentation, classify_specialization, describe_center,
    parse_element, parse_presentation, root_of_unity_structure, specialize_presentation, stratify_affine,
    stratify_rank2, validate_presentation, weight_components, Error, Family, LocElement, ParamRing, Presentation,
    SpecTarget, TorusPresentation,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_OTHER: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qsolv", version, about = "Exact computation with quantum solvable algebras")]
struct Cli {
    /// Also write a sorted key: value report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check well-formedness and conditions Q1-Q3.
    Validate { file: String },
    /// Split an element into H-weight components.
    Weights { file: String, elem: String },
    /// Diagonalize Ad_x on an element, localizing at x.
    Adjoint {
        file: String,
        xgen: String,
        elem: String,
        #[arg(long, default_value_t = 16)]
        degree_cap: usize,
    },
    /// Center lattice of a presentation without tails.
    Center {
        file: String,
        #[arg(long, value_name = "N")]
        root_of_unity: Option<u32>,
    },
    /// Strata for quantum affine spaces, tori and the rank2 family.
    Stratify { file: String },
    /// Substitute parameter values and revalidate.
    Specialize {
        file: String,
        /// NAME=VALUE; with --root-of-unity, VALUE is the exponent of ζ_N.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[arg(long, value_name = "N")]
        root_of_unity: Option<u32>,
    },
    /// List the admissible compositions of N.
    Compositions { n: usize },
}

/// What a run produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: BTreeMap<String, String>,
}

impl Outcome {
    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }

    fn key(&mut self, k: impl Into<String>, v: impl Into<String>) {
        self.report.insert(k.into(), v.into());
    }

    fn fail(&mut self, code: i32, msg: impl AsRef<str>) {
        self.code = code;
        self.stderr.push_str(msg.as_ref());
        self.stderr.push('\n');
    }
}

pub fn format_report(report: &BTreeMap<String, String>) -> String {
    report.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

/// A failure with the exit status it maps to.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unsupported(_) => EXIT_UNSUPPORTED,
            _ => EXIT_OTHER,
        };
        Failure(code, format!("error: {e}"))
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Loaded {
    pres: Presentation<ParamRing>,
    family: Option<Family>,
}

/// `builtin:TAG` or a path to a presentation file.
fn load(file: &str) -> Run<Loaded> {
    if let Some(tag) = file.strip_prefix("builtin:") {
        let family = Family::parse(tag).map_err(|e| Failure(EXIT_PARSE, format!("{file}:1:9: {e}")))?;
        let pres = builtin_presentation(&family)
            .map_err(|e| Failure(EXIT_PARSE, format!("{file}:1:9: {e}")))?;
        return Ok(Loaded { pres, family: Some(family) });
    }
    let text = fs::read_to_string(file).map_err(|e| Failure(EXIT_OTHER, format!("error: cannot read {file}: {e}")))?;
    let pres = parse_presentation(&text).map_err(|e| Failure(EXIT_PARSE, format!("{file}:{e}")))?;
    Ok(Loaded { pres, family: None })
}

fn parse_arg_element(p: &Presentation<ParamRing>, src: &str) -> Run<qsolv_core::NfElement<ParamRing>> {
    parse_element(p, src).map_err(|e| Failure(EXIT_PARSE, format!("<element>:{e}")))
}

pub fn run_command<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut out = Outcome::default();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                out.fail(EXIT_PARSE, format!("<argv>:1:1: {}", rendered.trim_end()));
            } else {
                out.line(rendered.trim_end());
            }
            return out;
        }
    };
    if let Err(Failure(code, msg)) = dispatch(&cli.command, &mut out) {
        // errors about the algebra as a whole are anchored at its header
        let msg = match msg.strip_prefix("error: ") {
            Some(rest) => format!("{}:1:1: error: {rest}", source_of(&cli.command)),
            None => msg,
        };
        out.fail(code, msg);
    }
    out.key("exit", out.code.to_string());
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, format_report(&out.report)) {
            out.fail(EXIT_OTHER, format!("{path}:1:1: error: cannot write: {e}"));
        }
    }
    out
}

fn source_of(cmd: &Command) -> String {
    match cmd {
        Command::Validate { file }
        | Command::Weights { file, .. }
        | Command::Adjoint { file, .. }
        | Command::Center { file, .. }
        | Command::Stratify { file }
        | Command::Specialize { file, .. } => file.clone(),
        Command::Compositions { .. } => "<N>".into(),
    }
}

fn dispatch(cmd: &Command, out: &mut Outcome) -> Run<()> {
    match cmd {
        Command::Validate { file } => validate(file, out),
        Command::Weights { file, elem } => weights(file, elem, out),
        Command::Adjoint { file, xgen, elem, degree_cap } => adjoint(file, xgen, elem, *degree_cap, out),
        Command::Center { file, root_of_unity } => center(file, *root_of_unity, out),
        Command::Stratify { file } => stratify(file, out),
        Command::Specialize { file, params, root_of_unity } => specialize(file, params, *root_of_unity, out),
        Command::Compositions { n } => compositions(*n, out),
    }
}

fn validate(file: &str, out: &mut Outcome) -> Run<()> {
    out.key("command", "validate");
    let l = load(file)?;
    let report = validate_presentation(&l.pres);
    out.key("algebra", l.pres.name());
    for s in report.summary() {
        out.line(&s);
        let (c, v) = s.split_once(' ').unwrap_or((&s, ""));
        out.key(format!("condition.{c}"), v);
    }
    for (i, f) in report.findings.iter().enumerate() {
        let sev = format!("{:?}", f.severity).to_lowercase();
        out.line(format!("  {sev} {} at {}: {}", f.condition, f.location, f.message));
        out.key(format!("finding.{i:03}"), format!("{sev} {} at {}: {}", f.condition, f.location, f.message));
    }
    out.key("passed", report.passed.to_string());
    if !report.passed {
        out.code = EXIT_INVALID;
    }
    Ok(())
}

fn weights(file: &str, elem: &str, out: &mut Outcome) -> Run<()> {
    out.key("command", "weights");
    let l = load(file)?;
    let p = &l.pres;
    let a = parse_arg_element(p, elem)?;
    let comps = weight_components(p, &a);
    out.key("components", comps.len().to_string());
    for (i, (w, c)) in comps.iter().enumerate() {
        let ws = w.format(p.ring());
        let cs = p.format_elem(c);
        out.line(format!("weight {ws}: {cs}"));
        out.key(format!("component.{i:03}.weight"), ws);
        out.key(format!("component.{i:03}.element"), cs);
    }
    Ok(())
}

fn adjoint(file: &str, xgen: &str, elem: &str, cap: usize, out: &mut Outcome) -> Run<()> {
    out.key("command", "adjoint");
    let l = load(file)?;
    let p = &l.pres;
    let x = p
        .gen_index(xgen)
        .ok_or_else(|| Failure(EXIT_PARSE, format!("<xgen>:1:1: unknown generator `{xgen}`")))?;
    let a = parse_arg_element(p, elem)?;
    let spec = ad_eigencomponents(p, x, &LocElement::from_element(a), cap)?;
    let names = p.ring().names();
    let mp = spec.format_minpoly(p.ring());
    out.line(format!("minimal polynomial: {mp}"));
    out.key("minpoly", mp);
    out.key("components", spec.components.len().to_string());
    for (i, c) in spec.components.iter().enumerate() {
        let g = c.gamma.display_with(names);
        let n = c.numer.format(p, x);
        let d = c.denom.display_with(names);
        out.line(format!("eigenvalue {g}: {n} / ({d})"));
        out.key(format!("component.{i:03}.eigenvalue"), g);
        out.key(format!("component.{i:03}.numerator"), n);
        out.key(format!("component.{i:03}.denominator"), d);
    }
    Ok(())
}

fn fmt_columns(cols: &[Vec<i64>]) -> String {
    let parts: Vec<String> = cols
        .iter()
        .map(|c| format!("({})", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    parts.join(" ")
}

fn center(file: &str, root: Option<u32>, out: &mut Outcome) -> Run<()> {
    out.key("command", "center");
    let l = load(file)?;
    let t = TorusPresentation::from_presentation(&l.pres)?;
    let d = describe_center(&t)?;
    let g = &d.lattice;
    out.key("rank", g.rank().to_string());
    if g.is_trivial() {
        out.line("G = {0}; center = C");
        out.key("center", "C");
    } else {
        let basis = fmt_columns(&g.basis().columns_i64());
        let w = fmt_columns(&d.change_of_basis.columns_i64());
        let central: Vec<String> = d.central_positions().map(|i| format!("Z{}^(+-1)", i + 1)).collect();
        out.line(format!("G rank {}; basis {basis}", g.rank()));
        out.line(format!("compatible basis {w}"));
        out.line(format!("center = C[{}]", central.join(", ")));
        out.key("basis", basis);
        out.key("compatible_basis", w);
        out.key("center", format!("C[{}]", central.join(", ")));
    }
    if let Some(n) = root {
        let (k, index) = root_of_unity_structure(&t, n)?;
        let basis = fmt_columns(&k.basis().columns_i64());
        out.line(format!("at zeta_{n}: central lattice {basis}; rank over center {index}"));
        out.key("root_of_unity.order", n.to_string());
        out.key("root_of_unity.lattice", basis);
        out.key("root_of_unity.rank_over_center", index.to_string());
    }
    Ok(())
}

fn stratify(file: &str, out: &mut Outcome) -> Run<()> {
    out.key("command", "stratify");
    let l = load(file)?;
    if let Some(Family::Rank2(f)) = &l.family {
        let s = stratify_rank2(f)?;
        let p = &s.presentation;
        let names = p.ring().names();
        let ex: Vec<String> = s.exceptional.iter().map(|r| r.to_string()).collect();
        out.line(format!("u = {}", p.format_elem(&s.u)));
        for st in &s.strata {
            out.line(format!("{}: {}", st.label, st.condition));
            out.key(format!("stratum.{}", st.label), st.condition);
        }
        out.line(format!("exceptional = {{{}}}", ex.join(", ")));
        out.line(format!("residual factor = {}", s.residual.display_with(names)));
        if s.degenerate {
            out.line("f = 0: quantum plane");
        }
        out.key("u", p.format_elem(&s.u));
        out.key("exceptional", ex.join(", "));
        out.key("residual", s.residual.display_with(names));
        out.key("degenerate", s.degenerate.to_string());
        out.key("weyl_fiber_at_one", s.weyl_fiber_at_one.to_string());
        return Ok(());
    }
    let p = &l.pres;
    let strata = stratify_affine(p)?;
    out.line(format!("{} strata", strata.len()));
    out.key("strata", strata.len().to_string());
    let mut sorted: Vec<_> = strata.iter().collect();
    sorted.sort_by(|a, b| a.composition.cmp(&b.composition));
    for (i, s) in sorted.iter().enumerate() {
        let comp = s.composition.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        let names = |v: &[usize]| v.iter().map(|&g| p.gen_name(g)).collect::<Vec<_>>().join(",");
        out.line(format!("({comp}) {} center rank {}", s.label(p), s.center.rank()));
        out.key(format!("stratum.{i:03}.composition"), comp);
        out.key(format!("stratum.{i:03}.vanish"), names(&s.vanishing));
        out.key(format!("stratum.{i:03}.invert"), names(&s.inverted));
        out.key(format!("stratum.{i:03}.center_rank"), s.center.rank().to_string());
    }
    Ok(())
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn spec_target(p: &Presentation<ParamRing>, params: &[String], root: Option<u32>) -> Run<SpecTarget> {
    let names = p.ring().names();
    let mut given: BTreeMap<usize, String> = BTreeMap::new();
    for (i, a) in params.iter().enumerate() {
        let (n, v) = a
            .split_once('=')
            .ok_or_else(|| Failure(EXIT_PARSE, format!("--param[{}]:1:1: expected NAME=VALUE", i + 1)))?;
        let k = p.ring().index_of(n.trim()).ok_or_else(|| {
            Failure(EXIT_PARSE, format!("--param[{}]:1:1: unknown parameter `{}`", i + 1, n.trim()))
        })?;
        given.insert(k, v.to_string());
    }
    let bad = |k: usize, what: &str| {
        Failure(EXIT_PARSE, format!("--param {}:1:{}: {what}", names[k], names[k].len() + 2))
    };
    if let Some(n) = root {
        let mut exps = vec![1i64; names.len()];
        for (&k, v) in &given {
            exps[k] = v.trim().parse().map_err(|_| bad(k, "expected an integer exponent"))?;
        }
        return Ok(SpecTarget::cyclotomic(n, exps)?);
    }
    if given.is_empty() {
        return Ok(SpecTarget::Transcendental);
    }
    let mut vals = Vec::new();
    for k in 0..names.len() {
        let v = given
            .get(&k)
            .ok_or_else(|| Failure(EXIT_OTHER, format!("error: no value for parameter `{}`", names[k])))?;
        vals.push(parse_rational(v).ok_or_else(|| bad(k, "expected a rational number"))?);
    }
    Ok(SpecTarget::Rational(vals))
}

fn specialize(file: &str, params: &[String], root: Option<u32>, out: &mut Outcome) -> Run<()> {
    out.key("command", "specialize");
    let l = load(file)?;
    let p = &l.pres;
    let t = spec_target(p, params, root)?;
    out.key("target", t.describe(p.ring()));
    let s = specialize_presentation(p, &t)?;
    out.line(format!("target: {}", t.describe(p.ring())));
    for line in s.summary() {
        out.line(format!("  {line}"));
    }
    let report = s.validate();
    for line in report.summary() {
        out.line(&line);
        let (c, v) = line.split_once(' ').unwrap_or((&line, ""));
        out.key(format!("condition.{c}"), v);
    }
    for (i, f) in report.failures().enumerate() {
        out.line(format!("  {} at {}: {}", f.condition, f.location, f.message));
        out.key(format!("finding.{i:03}"), format!("{} at {}: {}", f.condition, f.location, f.message));
    }
    if let Some(Family::Rank2(f)) = &l.family {
        if let Ok(good) = classify_specialization(f, &t) {
            out.line(format!("in O_st: {good}"));
            out.key("in_o_st", good.to_string());
        }
    }
    // failures at roots of unity are expected findings, not an error
    Ok(())
}

fn compositions(n: usize, out: &mut Outcome) -> Run<()> {
    out.key("command", "compositions");
    if n > 20 {
        return Err(Failure(EXIT_OTHER, format!("error: {n} is too large to enumerate (limit 20)")));
    }
    let all = admissible_compositions(n);
    out.key("count", all.len().to_string());
    for (i, c) in all.iter().enumerate() {
        let s = c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        out.line(format!("({s})"));
        out.key(format!("composition.{i:05}"), s);
    }
    Ok(())
}
