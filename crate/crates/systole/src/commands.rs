//! One function per subcommand, each returning a [`RunRecord`].

use std::fmt;
use std::path::Path;

use serde_json::{json, Map, Value};
use systole_core::arith::{self, Rat};
use systole_core::quadform::{
    build_diagonal, classify_indefinite_unimodular, even_k, five_fourths_holds, furuta_holds, invariants, FormClass,
    GramMatrix, Parity,
};
use systole_core::search::{confsys, katz_gap_report, perp_lattice, perp_search, verify_universal_bound, CsEstimate, SearchConfig, Source};
use systole_core::signrev::{orientation_normalize, sign_reverse, PeriodLine, PosDefGram};
use systole_core::svp::shortest_vector;

use crate::json;
use crate::parallel::search_parallel;
use crate::spec::{FormSpec, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommandError {
    Parse(String),
    Precondition(String),
    Invariant(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Precondition(_) => 1,
            CommandError::Parse(_) => 2,
            CommandError::Invariant(_) => 3,
        }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Parse(m) => write!(f, "parse error: {m}"),
            CommandError::Precondition(m) => write!(f, "{m}"),
            CommandError::Invariant(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CommandError {}

impl From<ParseError> for CommandError {
    fn from(e: ParseError) -> Self {
        CommandError::Parse(e.to_string())
    }
}

impl From<systole_core::Error> for CommandError {
    fn from(e: systole_core::Error) -> Self {
        match e {
            systole_core::Error::Invariant(_) | systole_core::Error::BoundViolation { .. } => {
                CommandError::Invariant(e.to_string())
            }
            _ => CommandError::Precondition(e.to_string()),
        }
    }
}

type CmdResult<T> = Result<T, CommandError>;

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub command: &'static str,
    /// Canonical spelling of the form spec, if any.
    pub spec: Option<String>,
    pub config: Value,
    pub seed: Option<u64>,
    pub result: Value,
    pub wall_time: Option<f64>,
}

impl RunRecord {
    fn new(command: &'static str, spec: Option<&FormSpec>, config: Value, seed: Option<u64>, result: Value) -> Self {
        RunRecord { command, spec: spec.map(FormSpec::to_string), config, seed, result, wall_time: None }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("spec".into(), json!(self.spec));
        m.insert("config".into(), self.config.clone());
        m.insert("seed".into(), json!(self.seed));
        m.insert("result".into(), self.result.clone());
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        if let Some(t) = self.wall_time {
            m.insert("wall_time_s_approx".into(), json::approx(t));
        }
        Value::Object(m)
    }

    pub fn render(&self) -> String {
        json::render(&self.to_json())
    }
}

pub fn parse_form(src: &str) -> CmdResult<(FormSpec, GramMatrix)> {
    let spec = FormSpec::parse(src)?;
    let q = spec.build()?;
    Ok((spec, q))
}

/// Comma-separated integers or fractions `p/q`.
pub fn parse_rationals(src: &str) -> CmdResult<Vec<Rat>> {
    src.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<Rat>().map_err(|_| CommandError::Parse(format!("'{t}' is not an integer or fraction p/q")))
        })
        .collect()
}

pub fn parse_integers(src: &str) -> CmdResult<Vec<num_bigint::BigInt>> {
    src.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse().map_err(|_| CommandError::Parse(format!("'{t}' is not an integer")))
        })
        .collect()
}

/// Floats in config echoes are exact decimal strings.
fn float_str(x: f64) -> Value {
    Value::String(format!("{x}"))
}

pub fn cmd_form(src: &str) -> CmdResult<RunRecord> {
    let (spec, q) = parse_form(src)?;
    let inv = invariants(&q);
    let (classification, classification_error) = match classify_indefinite_unimodular(&q) {
        Ok(FormClass::OddIndefinite { p, q }) => (json!({ "kind": "odd", "p": p, "q": q }), Value::Null),
        Ok(FormClass::EvenIndefinite { p_h, k_e8 }) => (json!({ "kind": "even", "h": p_h, "k_e8": k_e8 }), Value::Null),
        Err(e) => (Value::Null, json!(e.to_string())),
    };
    let k = match even_k(&q) {
        Ok(k) => json!(k),
        Err(_) => Value::Null,
    };
    let result = json!({
        "rank": inv.rank,
        "b_plus": inv.b_plus,
        "b_minus": inv.b_minus,
        "signature": inv.signature,
        "parity": if inv.parity == Parity::Even { "even" } else { "odd" },
        "determinant": json::int(&inv.determinant),
        "unimodular": inv.unimodular,
        "classification": classification,
        "classification_error": classification_error,
        "even_k": k,
        "five_fourths": five_fourths_holds(&q),
        "furuta": furuta_holds(&q),
    });
    Ok(RunRecord::new("form", Some(&spec), json!({}), None, result))
}

pub fn cmd_confsys(src: &str, line: Option<&str>, emit_gram: bool) -> CmdResult<RunRecord> {
    let (spec, q) = parse_form(src)?;
    let line = match line {
        Some(l) => Some(PeriodLine::from_rational(&parse_rationals(l)?)?),
        None => None,
    };
    let c = confsys(&q, line.as_ref())?;
    let (qbar, flipped) = orientation_normalize(&q)?;
    let used = match &line {
        Some(l) if q.rank() > 1 => l.clone(),
        _ => PeriodLine::from_i64(&[1])?,
    };
    let mut result = json!({
        "line": json::line(&used),
        "line_ignored": c.line_ignored,
        "flipped": flipped,
        "confsys_sq": json::rat(&c.value_sq),
        "confsys_approx": json::approx(c.value),
    });
    if emit_gram {
        result["sign_reversed_gram"] = json::rational_gram(&sign_reverse(&qbar, &used)?);
    }
    let config = json!({ "emit_gram": emit_gram });
    Ok(RunRecord::new("confsys", Some(&spec), config, None, result))
}

fn source_str(s: Source) -> String {
    match s {
        Source::Sweep => "sweep".into(),
        Source::Restart(i) => format!("restart {i}"),
    }
}

pub fn search_config_json(cfg: &SearchConfig) -> Value {
    json!({
        "height": cfg.height_bound,
        "restarts": cfg.restarts,
        "iters": cfg.max_iters,
        "step_scale": float_str(cfg.step_scale),
        "tol": float_str(cfg.tol),
        "sweep_limit": cfg.sweep_limit,
    })
}

/// Record for a finished search; re-verifies the certificate exactly.
pub fn search_record(spec: &FormSpec, q: &GramMatrix, cfg: &SearchConfig, est: &CsEstimate) -> CmdResult<RunRecord> {
    let check = confsys(q, Some(&est.best_line))?;
    if check.value_sq != est.best_value_sq {
        return Err(CommandError::Invariant(format!(
            "certificate recomputes to {}, reported {}",
            check.value_sq, est.best_value_sq
        )));
    }
    let katz = katz_gap_report(q, est);
    let history: Vec<Value> = est
        .history
        .iter()
        .map(|c| json!({ "line": json::line(&c.line), "confsys_sq": json::rat(&c.value_sq), "source": source_str(c.source) }))
        .collect();
    let result = json!({
        "best_line": json::line(&est.best_line),
        "best_confsys_sq": json::rat(&est.best_value_sq),
        "best_confsys_approx": json::approx(est.best_value),
        "certificate_verified": true,
        "flipped": est.flipped,
        "evaluations": est.evaluations,
        "sweep_lines": est.strategy.sweep_lines,
        "sweep_truncated": est.strategy.sweep_truncated,
        "history": history,
        "gap": {
            "n": katz.n,
            "b2": katz.b2,
            "ceiling": json::rat(&katz.ceiling),
            "best_sq": json::rat(&katz.best_sq),
            "proxy_approx": json::approx(katz.proxy),
            "ratio_to_ceiling_approx": json::approx(katz.ratio_to_ceiling),
            "ratio_to_proxy_approx": json::approx(katz.ratio_to_proxy),
        },
    });
    Ok(RunRecord::new("search", Some(spec), search_config_json(cfg), Some(cfg.seed), result))
}

pub fn cmd_search(src: &str, cfg: &SearchConfig, threads: Option<usize>) -> CmdResult<(RunRecord, CsEstimate)> {
    let (spec, q) = parse_form(src)?;
    let est = search_parallel(&q, cfg, threads)?;
    Ok((search_record(&spec, &q, cfg, &est)?, est))
}

/// Improvement history as CSV: `step,source,confsys_sq,confsys_approx,line`.
pub fn write_history(path: &Path, est: &CsEstimate) -> CmdResult<()> {
    let io = |e: csv::Error| CommandError::Precondition(format!("writing {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["step", "source", "confsys_sq", "confsys_approx", "line"]).map_err(io)?;
    for (i, c) in est.history.iter().enumerate() {
        let line: Vec<String> = c.line.coords().iter().map(ToString::to_string).collect();
        let approx = arith::rat_to_f64(&c.value_sq).sqrt();
        w.write_record([
            i.to_string(),
            source_str(c.source),
            format!("{}/{}", c.value_sq.numer(), c.value_sq.denom()),
            approx.to_string(),
            line.join(" "),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| CommandError::Precondition(format!("writing {}: {e}", path.display())))
}

pub fn cmd_verify_bound(src: &str, samples: u64, seed: u64) -> CmdResult<RunRecord> {
    let (spec, q) = parse_form(src)?;
    let r = verify_universal_bound(&q, samples, seed)?;
    let result = json!({
        "rank": r.rank,
        "samples": r.samples,
        "ceiling": json::rat(&r.ceiling),
        "max_confsys_sq": json::rat(&r.max_value_sq),
        "max_ratio_approx": json::approx(r.max_ratio),
        "argmax_line": json::line(&r.argmax),
        "resampled": r.resampled,
        "holds": true,
    });
    Ok(RunRecord::new("verify-bound", Some(&spec), json!({ "samples": samples }), Some(seed), result))
}

pub fn cmd_perp(src: &str, vector: &str) -> CmdResult<RunRecord> {
    let (spec, q) = parse_form(src)?;
    let n = q.rank().saturating_sub(1);
    if n == 0 || q != build_diagonal(n, 1)? {
        return Err(CommandError::Precondition(format!("perp expects a form I(n,1), got {spec}")));
    }
    let v = parse_integers(vector)?;
    if v.len() != q.rank() {
        return Err(systole_core::Error::DimensionMismatch { expected: q.rank(), found: v.len() }.into());
    }
    let square = q.pair(&v, &v);
    if square >= num_bigint::BigInt::from(0) {
        return Err(systole_core::Error::NonNegativeLine { square: square.to_string() }.into());
    }
    let perp = perp_lattice(&q, &v)?;
    let inv = invariants(&perp);
    let svp = shortest_vector(&PosDefGram::from_gram(&perp)?)?;
    let result = json!({
        "vector": json::ints(&v),
        "square": json::int(&square),
        "perp_gram": json::gram(&perp),
        "perp_rank": inv.rank,
        "perp_determinant": json::int(&inv.determinant),
        "perp_unimodular": inv.unimodular,
        "perp_parity": if inv.parity == Parity::Even { "even" } else { "odd" },
        "perp_min_sq": json::rat(&svp.min_norm_sq),
        "perp_minimizer_pairs": svp.minimizers.len(),
    });
    Ok(RunRecord::new("perp", Some(&spec), json!({}), None, result))
}

pub fn cmd_perp_search(n: usize, height: u32) -> CmdResult<RunRecord> {
    let cfg = SearchConfig { height_bound: height, ..SearchConfig::default() };
    let r = perp_search(n, &cfg)?;
    let result = json!({
        "vector": json::ints(&r.v),
        "perp_gram": json::gram(&r.perp),
        "perp_min_sq": json::rat(&r.perp_min),
        "candidates": r.candidates,
    });
    Ok(RunRecord::new("perp-search", None, json!({ "n": n, "height": height }), None, result))
}
