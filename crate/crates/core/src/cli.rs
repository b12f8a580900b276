//! The `iterroot` command line.
//!
//! [`run`] takes the argument vector and returns the exit code and both
//! output streams, so the binary is a thin shell around it. Output never
//! depends on timing or thread scheduling.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::criteria::{Certificate, Conclusion, Measurements, RootClass, Rule};
use crate::fixedpoint::{fixed_point_profile, non_isolated_exclusion, rice_exclusion};
use crate::instances::{self, CyclicVariant, Instance, InstanceName, InstanceSpec};
use crate::io;
use crate::paths::count_paths;
use crate::poly::{self, ComplexPolynomial, PolyAdvice};
use crate::pullback::{is_pullback, pullback_of};
use crate::search::{find_multi_root, find_single_root, DegreeBound, Outcome, RootConstraint, SearchConfig};
use crate::{Error, Execution, GroundSet, Multifunction, PointSet, SingleMap};

pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(code: i32, stdout: String) -> Self {
        Output { code, stdout, stderr: String::new() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "iterroot", version, about = "Iterative roots of multifunctions on finite sets")]
struct Cli {
    /// Run without the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test the nonexistence certificates.
    Check {
        file: String,
        /// Witness point; all points when omitted.
        #[arg(long)]
        x0: Option<String>,
        /// Degree bound of the root class.
        #[arg(long = "M", default_value_t = 2)]
        m: u64,
        /// One-step bound; the smallest valid value per point when omitted.
        #[arg(long = "N")]
        n: Option<u64>,
        /// forward-paths, forward-points, inverse-paths, inverse-points or scan.
        #[arg(long, default_value = "scan")]
        rule: String,
        #[arg(long)]
        json: bool,
    },
    /// Search exhaustively for a root.
    Search {
        file: String,
        #[arg(long)]
        order: u64,
        #[arg(long, conflicts_with = "max_in")]
        max_out: Option<u64>,
        #[arg(long)]
        max_in: Option<u64>,
        /// Require every point to have a nonempty image.
        #[arg(long)]
        total: bool,
        /// Search multifunction roots even when the input is a map.
        #[arg(long)]
        multi: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Raise the ground-size cap.
        #[arg(long)]
        cap: Option<usize>,
        /// Disable the commutation filter.
        #[arg(long)]
        no_commutation: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the n-th iterate.
    Iterate {
        file: String,
        #[arg(long)]
        order: u64,
    },
    /// Print the inverse multifunction.
    Invert { file: String },
    /// Map to pullback, or multifunction to the map it is the pullback of.
    Pullback { file: String },
    /// Count walks of a given length.
    Paths {
        file: String,
        /// Comma-separated labels; all points when omitted.
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        #[arg(long)]
        length: u64,
    },
    /// Fixed-point profile and order exclusions of a map.
    Fixedpoints {
        file: String,
        /// List excluded orders up to this bound.
        #[arg(long, default_value_t = 30)]
        up_to: u64,
    },
    /// Advice for a complex polynomial, coefficients lowest degree first.
    Poly {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        json: bool,
    },
    /// Degrees satisfying the Solar criterion.
    Solar {
        #[arg(long)]
        count: usize,
    },
    /// Emit a named instance in .mfn format.
    Instance(InstanceArgs),
}

#[derive(Debug, Args)]
struct InstanceArgs {
    name: String,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    modulus: Option<usize>,
    #[arg(long)]
    exponent: Option<usize>,
    /// mul or add.
    #[arg(long, default_value = "mul")]
    variant: String,
    #[arg(long)]
    max_out: Option<usize>,
    #[arg(long)]
    density: Option<f64>,
}

/// Runs one command. `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: String::new(), stderr: text }
            } else {
                Output::ok(0, text)
            };
        }
    };
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match dispatch(cli.command, exec) {
        Ok(out) => out,
        Err(e) => Output { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read(file: &str) -> crate::Result<Instance> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::InvalidInstance(format!("cannot read {file}: {e}")))?;
    io::parse(&text)
}

fn read_multi(file: &str) -> crate::Result<Multifunction> {
    Ok(match read(file)? {
        Instance::Multi(f) => f,
        Instance::Map(f) => f.to_multifunction(),
    })
}

fn read_map(file: &str) -> crate::Result<SingleMap> {
    match read(file)? {
        Instance::Map(f) => Ok(f),
        Instance::Multi(f) => SingleMap::try_from_multifunction(&f),
    }
}

fn labels_of(ground: &GroundSet, spec: Option<&str>) -> crate::Result<PointSet> {
    match spec {
        None => Ok(ground.all()),
        Some(s) => s
            .split(',')
            .map(|l| ground.index_of(l.trim()).ok_or_else(|| Error::UnknownLabel(l.trim().to_string())))
            .collect(),
    }
}

fn set_labels(ground: &GroundSet, s: &PointSet) -> Vec<String> {
    s.iter().map(|x| ground.label(x).to_string()).collect()
}

fn dispatch(command: Command, exec: Execution) -> crate::Result<Output> {
    match command {
        Command::Check { file, x0, m, n, rule, json } => check(&file, x0.as_deref(), m, n, &rule, json, exec),
        Command::Search { file, order, max_out, max_in, total, multi, budget, cap, no_commutation, json } => {
            let bound = match (max_out, max_in) {
                (Some(m), _) => DegreeBound::MaxOutDegree(m),
                (_, Some(m)) => DegreeBound::MaxInDegree(m),
                _ => DegreeBound::Unconstrained,
            };
            let constraint = RootConstraint { bound, require_total_domain: total };
            let mut config = SearchConfig { commutation_filter: !no_commutation, execution: exec, ..SearchConfig::default() };
            if let Some(cap) = cap {
                config.unconstrained_cap = cap;
                config.low_degree_cap = cap;
                config.single_exhaustive_cap = cap;
                config.single_backtracking_cap = cap;
            }
            let force_multi = multi || bound != DegreeBound::Unconstrained || total;
            search(&file, order, constraint, force_multi, budget, &config, json)
        }
        Command::Iterate { file, order } => {
            if order == 0 {
                return Err(Error::ZeroCount("order"));
            }
            let out = match read(&file)? {
                Instance::Multi(f) => io::serialize_multifunction(&f.iterate(order)),
                Instance::Map(f) => io::serialize_map(&f.iterate(order)),
            };
            Ok(Output::ok(0, out + "\n"))
        }
        Command::Invert { file } => Ok(Output::ok(0, io::serialize_multifunction(&read_multi(&file)?.invert()) + "\n")),
        Command::Pullback { file } => match read(&file)? {
            Instance::Map(f) => Ok(Output::ok(0, io::serialize_multifunction(&pullback_of(&f)) + "\n")),
            Instance::Multi(f) => {
                let w = is_pullback(&f);
                match w.witness_map {
                    Some(map) => Ok(Output::ok(0, io::serialize_map(&map) + "\n")),
                    None => {
                        let failed: Vec<String> = w.failed_conditions.iter().map(|c| c.to_string()).collect();
                        Ok(Output::ok(1, format!("not a pullback: fails {}\n", failed.join(", "))))
                    }
                }
            }
        },
        Command::Paths { file, from, to, length } => {
            let f = read_multi(&file)?;
            let a = labels_of(f.ground(), from.as_deref())?;
            let b = labels_of(f.ground(), to.as_deref())?;
            Ok(Output::ok(0, format!("{}\n", count_paths(&f, &a, &b, length)?)))
        }
        Command::Fixedpoints { file, up_to } => fixedpoints(&file, up_to),
        Command::Poly { coeffs, order, json } => {
            let p: ComplexPolynomial = coeffs.parse()?;
            let advice = poly::advise(&p, order)?;
            let code = if advice.excludes_order() { 0 } else { 1 };
            let out = if json { json_text(&poly_json(&p, &advice)) } else { poly_text(&p, &advice) };
            Ok(Output::ok(code, out))
        }
        Command::Solar { count } => {
            if count == 0 {
                return Err(Error::ZeroCount("count"));
            }
            let list: Vec<String> = poly::first_solar(count).iter().map(u64::to_string).collect();
            Ok(Output::ok(0, list.join(" ") + "\n"))
        }
        Command::Instance(args) => {
            let mut spec = InstanceSpec::new(args.name.parse::<InstanceName>()?);
            spec.depth = args.depth;
            spec.size = args.size;
            spec.seed = args.seed;
            spec.modulus = args.modulus;
            spec.exponent = args.exponent;
            spec.variant = args.variant.parse::<CyclicVariant>()?;
            spec.max_out_degree = args.max_out;
            spec.density = args.density;
            Ok(Output::ok(0, io::serialize(&instances::build(&spec)?) + "\n"))
        }
    }
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn class_text(c: &RootClass) -> String {
    match c {
        RootClass::MaxOutDegree(m) => format!("max-out-degree <= {m}"),
        RootClass::MaxInDegree(m) => format!("max-in-degree <= {m}"),
    }
}

fn conclusion_text(c: &Conclusion) -> String {
    match c {
        Conclusion::NoRootsInClass(class) => format!("no roots of any order n >= 2 with {}", class_text(class)),
        Conclusion::NoRootsAtAll => "no roots of any order n >= 2".to_string(),
        Conclusion::NotApplicable(failed) => {
            let f: Vec<&str> = failed.iter().map(|h| h.id()).collect();
            format!("not applicable (fails {})", f.join(", "))
        }
    }
}

fn certificate_json(g: &GroundSet, c: &Certificate) -> Value {
    let (kind, class) = match &c.conclusion {
        Conclusion::NoRootsInClass(RootClass::MaxOutDegree(m)) => ("no_roots_in_class", json!({"max_out_degree": m.to_string()})),
        Conclusion::NoRootsInClass(RootClass::MaxInDegree(m)) => ("no_roots_in_class", json!({"max_in_degree": m.to_string()})),
        Conclusion::NoRootsAtAll => ("no_roots_at_all", Value::Null),
        Conclusion::NotApplicable(_) => ("not_applicable", Value::Null),
    };
    let checklist: Vec<Value> = c.checklist.iter().map(|(h, ok)| json!({"hypothesis": h.id(), "holds": ok})).collect();
    json!({
        "rule": c.rule.id(),
        "citation": c.rule.citation(),
        "x0": g.label(c.x0),
        "M": c.m.to_string(),
        "N": c.n.to_string(),
        "Q": c.measured_q.to_string(),
        "MN3": c.mn3().to_string(),
        "N_max": c.measured_n_max.to_string(),
        "checklist": checklist,
        "conclusion": kind,
        "root_class": class,
    })
}

fn check(file: &str, x0: Option<&str>, m: u64, n: Option<u64>, rule: &str, json: bool, exec: Execution) -> crate::Result<Output> {
    let f = read_multi(file)?;
    let g = f.ground().clone();
    let rules: Vec<Rule> = if rule == "scan" {
        Rule::ALL.to_vec()
    } else {
        vec![Rule::from_id(rule).ok_or_else(|| Error::InvalidInstance(format!("unknown rule `{rule}`")))?]
    };
    let points: Vec<usize> = match x0 {
        Some(l) => vec![g.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string()))?],
        None => (0..g.size()).collect(),
    };
    if m == 0 {
        return Err(Error::ZeroCount("M"));
    }
    if n == Some(0) {
        return Err(Error::ZeroCount("N"));
    }
    let single = rules.len() == 1 && points.len() == 1;
    let meas = Measurements::of(&f);
    let pairs: Vec<(Rule, usize)> = rules.iter().flat_map(|&r| points.iter().map(move |&x| (r, x))).collect();
    let certs: Vec<Certificate> = exec
        .map(&pairs, |&(r, x)| meas.certificate(r, x, m, n.unwrap_or_else(|| meas.minimal_n(r, x))))
        .into_iter()
        .filter(|c| single || c.fires())
        .collect();
    let fired = certs.iter().filter(|c| c.fires()).count();
    let code = if fired > 0 { 0 } else { 1 };
    if json {
        let list: Vec<Value> = certs.iter().map(|c| certificate_json(&g, c)).collect();
        return Ok(Output::ok(code, json_text(&json!({"fired": fired, "certificates": list}))));
    }
    let mut out = String::new();
    for c in &certs {
        let _ = writeln!(
            out,
            "{} x0={} M={} N={} Q={} MN^3={} N_max={}: {}",
            c.rule,
            g.label(c.x0),
            c.m,
            c.n,
            c.measured_q,
            c.mn3(),
            c.measured_n_max,
            conclusion_text(&c.conclusion)
        );
        if single {
            for (h, ok) in &c.checklist {
                let _ = writeln!(out, "  {}: {}", h, if *ok { "holds" } else { "fails" });
            }
        }
    }
    if fired == 0 && !single {
        out.push_str("no certificate fires\n");
    }
    Ok(Output::ok(code, out))
}

fn constraint_text(c: &RootConstraint) -> String {
    let mut s = match c.bound {
        DegreeBound::Unconstrained => "unconstrained".to_string(),
        DegreeBound::MaxOutDegree(m) => format!("max-out-degree <= {m}"),
        DegreeBound::MaxInDegree(m) => format!("max-in-degree <= {m}"),
    };
    if c.require_total_domain {
        s.push_str(", total");
    }
    s
}

fn constraint_json(c: &RootConstraint) -> Value {
    let (kind, m) = match c.bound {
        DegreeBound::Unconstrained => ("unconstrained", Value::Null),
        DegreeBound::MaxOutDegree(m) => ("max_out_degree", Value::String(m.to_string())),
        DegreeBound::MaxInDegree(m) => ("max_in_degree", Value::String(m.to_string())),
    };
    json!({"kind": kind, "M": m, "require_total_domain": c.require_total_domain})
}

fn search(
    file: &str,
    order: u64,
    constraint: RootConstraint,
    force_multi: bool,
    budget: u64,
    config: &SearchConfig,
    json: bool,
) -> crate::Result<Output> {
    let doc = read(file)?;
    let (outcome, constraint, ground): (Outcome<Instance>, RootConstraint, _) = match doc {
        Instance::Map(f) if !force_multi => {
            let r = find_single_root(&f, order, budget, config)?;
            (map_outcome(r.outcome, Instance::Map), r.constraint, f.ground().clone())
        }
        other => {
            let f = match other {
                Instance::Multi(f) => f,
                Instance::Map(f) => f.to_multifunction(),
            };
            let r = find_multi_root(&f, order, constraint, budget, config)?;
            (map_outcome(r.outcome, Instance::Multi), r.constraint, f.ground().clone())
        }
    };
    let code = match outcome {
        Outcome::Witness(_) => 0,
        Outcome::ExhaustedNone { .. } => 1,
        Outcome::BudgetExceeded { .. } => 3,
    };
    if json {
        let mut v = json!({"order": order.to_string(), "constraint": constraint_json(&constraint)});
        match &outcome {
            Outcome::Witness(w) => {
                v["outcome"] = json!("witness");
                v["witness"] = instance_json(&ground, w);
            }
            Outcome::ExhaustedNone { nodes_explored } => {
                v["outcome"] = json!("exhausted_none");
                v["nodes_explored"] = json!(nodes_explored.to_string());
            }
            Outcome::BudgetExceeded { budget } => {
                v["outcome"] = json!("budget_exceeded");
                v["budget"] = json!(budget.to_string());
            }
        }
        return Ok(Output::ok(code, json_text(&v)));
    }
    let text = match &outcome {
        Outcome::Witness(w) => format!("# root of order {order} ({})\n{}\n", constraint_text(&constraint), io::serialize(w)),
        Outcome::ExhaustedNone { nodes_explored } => format!(
            "no root of order {order} ({}); search exhausted after {nodes_explored} nodes\n",
            constraint_text(&constraint)
        ),
        Outcome::BudgetExceeded { budget } => format!("budget of {budget} nodes exceeded; undecided\n"),
    };
    Ok(Output::ok(code, text))
}

fn map_outcome<W>(o: Outcome<W>, wrap: impl Fn(W) -> Instance) -> Outcome<Instance> {
    match o {
        Outcome::Witness(w) => Outcome::Witness(wrap(w)),
        Outcome::ExhaustedNone { nodes_explored } => Outcome::ExhaustedNone { nodes_explored },
        Outcome::BudgetExceeded { budget } => Outcome::BudgetExceeded { budget },
    }
}

fn instance_json(g: &GroundSet, doc: &Instance) -> Value {
    let images: Vec<Value> = match doc {
        Instance::Multi(f) => f.images().iter().map(|s| json!(set_labels(g, s))).collect(),
        Instance::Map(f) => f.as_slice().iter().map(|&y| json!([g.label(y)])).collect(),
    };
    json!({
        "kind": if matches!(doc, Instance::Map(_)) { "single" } else { "multi" },
        "points": g.labels(),
        "images": images,
        "mfn": io::serialize(doc),
    })
}

fn fixedpoints(file: &str, up_to: u64) -> crate::Result<Output> {
    let f = read_map(file)?;
    let g = f.ground();
    let profile = fixed_point_profile(&f);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "fixed points: {} ({} non-isolated)",
        profile.fixed_points.len(),
        profile.non_isolated().count()
    );
    for p in &profile.fixed_points {
        let tail: Vec<&str> = p.tail.iter().map(|&y| g.label(y)).collect();
        let with_pre = p.tail_preimage_nonempty.iter().filter(|&&b| b).count();
        let _ = writeln!(
            out,
            "  {}: tail {{{}}}, {} of {} tail points have preimages",
            g.label(p.point),
            tail.join(" "),
            with_pre,
            p.tail.len()
        );
    }
    let _ = writeln!(out, "union of tails: L = {}", profile.union_tail_size);
    for (name, e) in [("rice", rice_exclusion(&f)), ("non-isolated", non_isolated_exclusion(&f))] {
        match e {
            Some(e) => {
                let list: Vec<String> = e.excluded_up_to(up_to).iter().map(u64::to_string).collect();
                let _ = writeln!(out, "{name}: excludes {e}; up to {up_to}: [{}]", list.join(", "));
            }
            None => {
                let _ = writeln!(out, "{name}: not applicable");
            }
        }
    }
    Ok(Output::ok(0, out))
}

fn poly_text(p: &ComplexPolynomial, a: &PolyAdvice) -> String {
    let mut out = format!("polynomial {p} (degree {}), order {}\n", a.degree, a.order);
    for f in &a.findings {
        let status = if f.applicable {
            "FIRES"
        } else if f.hypotheses_hold {
            "order not excluded"
        } else {
            "hypotheses fail"
        };
        let _ = write!(out, "{}: {status}; excludes {}", f.rule.id(), f.excluded);
        if let Some(t) = f.tolerance {
            let _ = write!(out, "; tolerance {t:e}");
        }
        if let Some(n) = &f.note {
            let _ = write!(out, "; {n}");
        }
        out.push('\n');
    }
    if !a.excludes_order() {
        out.push_str("no rule excludes this order\n");
    }
    out
}

fn poly_json(p: &ComplexPolynomial, a: &PolyAdvice) -> Value {
    let findings: Vec<Value> = a
        .findings
        .iter()
        .map(|f| {
            json!({
                "rule": f.rule.id(),
                "citation": f.citation,
                "hypotheses_hold": f.hypotheses_hold,
                "applicable": f.applicable,
                "excluded_orders": f.excluded.to_string(),
                "tolerance": f.tolerance,
                "note": f.note,
            })
        })
        .collect();
    json!({
        "polynomial": p.to_string(),
        "degree": a.degree.to_string(),
        "order": a.order.to_string(),
        "fired": a.fired().map(|f| f.rule.id()).collect::<Vec<_>>(),
        "findings": findings,
    })
}
