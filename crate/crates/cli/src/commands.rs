use clap::ValueEnum;
use serde_json::{json, Value};

use prym_core::cache::{CachedCounter, CountCache};
use prym_core::prym::{sequences_of_weight, verify_identities_with, VerifyReport};
use prym_core::tableaux::{count_sst_formula, enumerate_sst};
use prym_core::{
    beta, class_b_closed, class_b_pfaffian, degree_b, general_nonempty, n_a_formula, n_a_with,
    prym_tyurin_exponent, BigRational, BruteForce, PrymClass, PrymError, ShapeCounter,
    StrictPartition, TableauError, VanishingSequence,
};

use crate::config::CliConfig;
use crate::output::{aligned, Rendered};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input or unmet precondition; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Identity or agreement failure; exit code 1. Carries the report.
    #[error("{message}")]
    Failure { message: String, rendered: Box<Rendered> },
}

impl From<PrymError> for CliError {
    fn from(e: PrymError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<TableauError> for CliError {
    fn from(e: TableauError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CmdResult = Result<Rendered, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassMethod {
    Closed,
    Pfaffian,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    Bruteforce,
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableauAction {
    Count,
    Enumerate,
    Render,
}

pub const TABLE_COLUMNS: [&str; 9] = ["g", "a", "beta", "ell", "weight", "coeff", "degree", "n_a", "agree"];

fn counter(cfg: &CliConfig) -> CachedCounter {
    let cache = match &cfg.cache_path {
        Some(p) => CountCache::open(p),
        None => CountCache::disabled(),
    };
    CachedCounter::new(
        BruteForce {
            bound: cfg.enumeration_bound,
        },
        cache,
        cfg.trust_cache,
    )
}

fn seq_json(a: &VanishingSequence) -> Value {
    json!(a.values())
}

fn class_json(c: &PrymClass) -> Value {
    serde_json::to_value(c).expect("class serializes")
}

pub fn cmd_beta(g: usize, a: &VanishingSequence) -> CmdResult {
    let b = beta(g, a);
    let nonempty = general_nonempty(g, a);
    let verdict = if nonempty { "nonempty" } else { "empty" };
    let text = format!("beta = {b}\ngeneral triple: {verdict}");
    let js = json!({ "g": g, "a": seq_json(a), "beta": b, "general_nonempty": nonempty });
    Ok(Rendered::new(text, js).table(
        ["g", "a", "beta", "general_nonempty"],
        vec![vec![g.to_string(), a.key(), b.to_string(), nonempty.to_string()]],
    ))
}

pub fn cmd_class(g: usize, a: &VanishingSequence, method: ClassMethod) -> CmdResult {
    let closed = matches!(method, ClassMethod::Closed | ClassMethod::Both)
        .then(|| class_b_closed(g, a))
        .transpose()?;
    let pf = matches!(method, ClassMethod::Pfaffian | ClassMethod::Both)
        .then(|| class_b_pfaffian(g, a))
        .transpose()?;
    let header = ["g", "a", "method", "codim", "coeff", "agree"];
    let row = |m: &str, c: &PrymClass, agree: &str| {
        vec![g.to_string(), a.key(), m.to_string(), c.codim().to_string(), c.coeff().to_string(), agree.to_string()]
    };
    let note = (a.weight() >= g).then(|| format!("zero class: codim {} exceeds g-1 = {}", a.weight(), g - 1));
    let with_note = |s: String| match &note {
        Some(n) => format!("{s}\n{n}"),
        None => s,
    };
    match (closed, pf) {
        (Some(c), Some(p)) => {
            let agree = c == p;
            let verdict = if agree { "AGREE" } else { "DISAGREE" };
            let text = with_note(format!("closed:   {c}\npfaffian: {p}\n{verdict}"));
            let js = json!({ "closed": class_json(&c), "pfaffian": class_json(&p), "agree": agree });
            let rows = vec![row("closed", &c, &agree.to_string()), row("pfaffian", &p, &agree.to_string())];
            let rendered = Rendered::new(text, js).table(header, rows);
            if agree {
                Ok(rendered)
            } else {
                Err(CliError::Failure {
                    message: format!("closed and Pfaffian classes disagree for g={g}, a={a}: {c} vs {p}"),
                    rendered: Box::new(rendered),
                })
            }
        }
        (Some(c), None) | (None, Some(c)) => {
            let m = if method == ClassMethod::Closed { "closed" } else { "pfaffian" };
            let text = with_note(c.to_string());
            Ok(Rendered::new(text, class_json(&c)).table(header, vec![row(m, &c, "")]))
        }
        (None, None) => unreachable!("method selects at least one route"),
    }
}

pub fn cmd_degree(g: usize, a: &VanishingSequence) -> CmdResult {
    let d = degree_b(g, a)?;
    let b = beta(g, a);
    let note = if b == 0 {
        "beta=0: finite point count".to_string()
    } else {
        format!("beta={b}: not a point count")
    };
    let text = format!("degree = {d}\n{note}");
    let js = json!({ "g": g, "a": seq_json(a), "beta": b, "degree": d.to_string(), "point_count": b == 0 });
    Ok(Rendered::new(text, js).table(
        ["g", "a", "beta", "degree", "point_count"],
        vec![vec![g.to_string(), a.key(), b.to_string(), d.to_string(), (b == 0).to_string()]],
    ))
}

pub fn cmd_exponent(g: usize, a: &VanishingSequence) -> CmdResult {
    let e = prym_tyurin_exponent(g, a)?;
    let text = format!("exponent = {e}");
    let js = json!({ "g": g, "a": seq_json(a), "exponent": e.to_string() });
    Ok(Rendered::new(text, js).table(["g", "a", "exponent"], vec![vec![g.to_string(), a.key(), e.to_string()]]))
}

pub fn cmd_na(cfg: &CliConfig, a: &VanishingSequence, method: CountMethod) -> CmdResult {
    let (n, m) = match method {
        CountMethod::Bruteforce => (n_a_with(a, &counter(cfg))?, "bruteforce"),
        CountMethod::Formula => (n_a_formula(a), "formula"),
    };
    let text = format!("n_a = {n}");
    let js = json!({ "a": seq_json(a), "n_a": n.to_string(), "method": m });
    Ok(Rendered::new(text, js).table(["a", "n_a", "method"], vec![vec![a.key(), n.to_string(), m.to_string()]]))
}

fn rows_compact(rows: &[Vec<usize>]) -> String {
    rows.iter()
        .map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join("/")
}

pub fn cmd_tableaux(cfg: &CliConfig, shape: &StrictPartition, action: TableauAction) -> CmdResult {
    match action {
        TableauAction::Count => {
            let formula = count_sst_formula(shape);
            let brute = counter(cfg).count(shape)?;
            let agree = formula == brute.into();
            let text = format!("formula: {formula}\nbrute force: {brute}");
            let js = json!({ "shape": shape.parts(), "formula": formula.to_string(), "bruteforce": brute, "agree": agree });
            let rendered = Rendered::new(text, js).table(
                ["shape", "formula", "bruteforce", "agree"],
                vec![vec![shape.key(), formula.to_string(), brute.to_string(), agree.to_string()]],
            );
            if agree {
                Ok(rendered)
            } else {
                Err(CliError::Failure {
                    message: format!("tableau counts disagree for {shape}: formula {formula}, brute force {brute}"),
                    rendered: Box::new(rendered),
                })
            }
        }
        TableauAction::Enumerate | TableauAction::Render => {
            let all: Vec<_> = enumerate_sst(shape, cfg.enumeration_bound)?.collect();
            let render = action == TableauAction::Render;
            let text = if render {
                all.iter().map(|t| t.render()).collect::<Vec<_>>().join("\n\n")
            } else {
                all.iter().map(|t| rows_compact(t.rows())).collect::<Vec<_>>().join("\n")
            };
            let js = if render {
                json!(all.iter().map(|t| t.render()).collect::<Vec<_>>())
            } else {
                serde_json::to_value(&all).expect("tableaux serialize")
            };
            let rows = all
                .iter()
                .enumerate()
                .map(|(i, t)| vec![(i + 1).to_string(), if render { t.render() } else { rows_compact(t.rows()) }])
                .collect();
            Ok(Rendered::new(text, js).table(["index", if render { "render" } else { "rows" }], rows))
        }
    }
}

pub fn cmd_verify(cfg: &CliConfig, max_weight: usize, inject_fault: bool) -> CmdResult {
    let c = counter(cfg);
    let broken = |g: usize, a: &VanishingSequence| {
        let cl = class_b_closed(g, a)?;
        Ok(PrymClass::new(g, cl.codim(), cl.coeff() * BigRational::new(3.into(), 2.into())))
    };
    let report = if inject_fault {
        verify_identities_with(max_weight, &c, &broken)?
    } else {
        verify_identities_with(max_weight, &c, &class_b_closed)?
    };
    let rendered = render_report(&report);
    if report.passed() {
        Ok(rendered)
    } else {
        let first = &report.failures[0];
        Err(CliError::Failure {
            message: format!(
                "{} failure(s); first: a=({}) {}: expected {}, got {}",
                report.failures.len(),
                first.a,
                first.check,
                first.expected,
                first.actual
            ),
            rendered: Box::new(rendered),
        })
    }
}

fn render_report(report: &VerifyReport) -> Rendered {
    let mut text = format!(
        "checked {} sequences with |a| <= {}: {}",
        report.checked,
        report.max_weight,
        if report.passed() { "PASS" } else { "FAIL" }
    );
    for f in &report.failures {
        text.push_str(&format!("\nFAIL a=({}) {}: expected {}, got {}", f.a, f.check, f.expected, f.actual));
    }
    let js = serde_json::to_value(report).expect("report serializes");
    let rows = report
        .records
        .iter()
        .map(|r| {
            vec![
                r.a.clone(),
                r.g.to_string(),
                r.weight.to_string(),
                r.degree.clone(),
                r.n_a.clone(),
                r.sst_formula.clone(),
                r.sst_bruteforce.to_string(),
                r.closed.clone(),
                r.pfaffian.clone(),
                r.pass.to_string(),
            ]
        })
        .collect();
    Rendered::new(text, js).table(
        ["a", "g", "weight", "degree", "n_a", "sst_formula", "sst_bruteforce", "closed", "pfaffian", "pass"],
        rows,
    )
}

/// Inclusive range `lo..hi` (or a single value). `lo > hi` is empty.
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("invalid range {s:?}: expected LO..HI or N");
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

/// Selected table columns, in output order.
#[derive(Debug, Clone)]
pub struct Columns(pub Vec<String>);

pub fn parse_columns(s: &str) -> Result<Columns, String> {
    let cols: Vec<String> = s.split(',').map(|c| c.trim().to_string()).collect();
    for c in &cols {
        if !TABLE_COLUMNS.contains(&c.as_str()) {
            return Err(format!("unknown column {c:?}; available: {}", TABLE_COLUMNS.join(",")));
        }
    }
    Ok(Columns(cols))
}

pub fn cmd_table(cfg: &CliConfig, g_range: (usize, usize), weight_range: (usize, usize), columns: &[String]) -> CmdResult {
    if g_range.0 < 2 && g_range.0 <= g_range.1 {
        return Err(CliError::Usage(format!("genus must be at least 2, got {}", g_range.0)));
    }
    let c = counter(cfg);
    let mut rows = Vec::new();
    let mut objects = Vec::new();
    let mut disagreements = Vec::new();
    for g in g_range.0..=g_range.1 {
        for w in weight_range.0..=weight_range.1 {
            for a in sequences_of_weight(w) {
                let closed = class_b_closed(g, &a)?;
                let pf = class_b_pfaffian(g, &a)?;
                let degree = degree_b(g, &a)?;
                let n_a = n_a_with(&a, &c)?;
                if closed != pf {
                    disagreements.push(format!("g={g} a={a}"));
                }
                let full: Vec<(&str, Value, String)> = vec![
                    ("g", json!(g), g.to_string()),
                    ("a", seq_json(&a), a.key()),
                    ("beta", json!(beta(g, &a)), beta(g, &a).to_string()),
                    ("ell", json!(a.ell()), a.ell().to_string()),
                    ("weight", json!(w), w.to_string()),
                    ("coeff", json!(closed.coeff().to_string()), closed.coeff().to_string()),
                    ("degree", json!(degree.to_string()), degree.to_string()),
                    ("n_a", json!(n_a.to_string()), n_a.to_string()),
                    ("agree", json!(closed == pf), (closed == pf).to_string()),
                ];
                let pick = |name: &str| full.iter().find(|(k, _, _)| *k == name).expect("known column");
                rows.push(columns.iter().map(|k| pick(k).2.clone()).collect::<Vec<_>>());
                let obj: serde_json::Map<String, Value> =
                    columns.iter().map(|k| (k.clone(), pick(k).1.clone())).collect();
                objects.push(Value::Object(obj));
            }
        }
    }
    let text = aligned(columns, &rows);
    let rendered = Rendered::new(text, Value::Array(objects)).table(columns.iter().cloned(), rows);
    match disagreements.first() {
        None => Ok(rendered),
        Some(first) => Err(CliError::Failure {
            message: format!("closed and Pfaffian classes disagree at {} row(s); first: {first}", disagreements.len()),
            rendered: Box::new(rendered),
        }),
    }
}
