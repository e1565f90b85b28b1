//! Batch front end for the belief-fusion rules: problem files, result
//! tables, JSON export and the golden verification suite.

pub mod golden;
pub mod problem;
pub mod table;

use belief_fusion::classic::SourceCombinationExpr;
use belief_fusion::rule::{self, Params, Rule};
use belief_fusion::special;
use belief_fusion::uft::{self, DynamicState, ScenarioConfig};
use belief_fusion::{Frame, FusionError};
use thiserror::Error;

pub use problem::{ParseError, Problem};
pub use table::ResultTable;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Rule(#[from] FusionError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Rule(FusionError::MissingParameter(_)) => 2,
            CliError::Rule(_) => 3,
            CliError::Parse(_) => 4,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub fn unknown_rule(selector: &str) -> String {
    format!(
        "unknown rule `{selector}`; valid selectors: {}",
        Rule::selectors().join(", ")
    )
}

pub fn parse_rule(selector: &str) -> Result<Rule, CliError> {
    selector.parse().map_err(|_| CliError::Usage(unknown_rule(selector)))
}

/// Splits a `key=value` command-line parameter.
pub fn parse_override(text: &str) -> Result<(String, String), CliError> {
    match text.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(CliError::Usage(format!("expected --param key=value, got `{text}`"))),
    }
}

fn number(key: &str, value: &str) -> Result<f64, String> {
    value.parse().map_err(|_| format!("parameter `{key}` needs a number, got `{value}`"))
}

/// Applies one `key=value` parameter.
fn set_param(params: &mut Params, frame: &Frame, names: &[&str], key: &str, value: &str) -> Result<(), String> {
    let element = |text: &str| problem::resolve(frame, text).map_err(|e| format!("parameter `{key}`: {e}"));
    match key {
        "p" => params.p = Some(number(key, value)?),
        "gamma" => params.gamma = Some(number(key, value)?),
        "weights" => {
            params.weights = Some(value.split(',').map(|v| number(key, v.trim())).collect::<Result<_, _>>()?)
        }
        "wo" => {
            let mut out = Vec::new();
            for part in value.split(',') {
                let (e, w) = part
                    .rsplit_once(':')
                    .ok_or_else(|| format!("parameter `wo` takes `<expr>:<weight>` pairs, got `{part}`"))?;
                out.push((element(e)?, number(key, w.trim())?));
            }
            params.wo_weights = Some(out);
        }
        "expr" => {
            params.expr =
                Some(SourceCombinationExpr::parse(value, names).map_err(|e| format!("parameter `expr`: {e}"))?)
        }
        "hypothesis" => params.hypothesis = Some(element(value)?),
        "focus" => params.focus = Some(element(value)?),
        "given" => params.given = Some(value.parse().map_err(|_| unknown_rule(value))?),
        _ => {
            return Err(format!(
                "unknown parameter `{key}`; known: p, gamma, weights, wo, expr, hypothesis, focus, given"
            ))
        }
    }
    Ok(())
}

fn params_for(problem: &Problem, frame: &Frame, overrides: &[(String, String)]) -> Result<Params, CliError> {
    let names = problem.source_names();
    let mut params = Params::default();
    for (k, v) in &problem.params {
        set_param(&mut params, frame, &names, k, v).map_err(CliError::Parse)?;
    }
    for (k, v) in overrides {
        set_param(&mut params, frame, &names, k, v).map_err(CliError::Usage)?;
    }
    if let Some(s) = &problem.scenario {
        let resolve = |t: &String| problem::resolve(frame, t);
        let recipients = s.recipients.iter().map(resolve).collect::<Result<_, _>>()?;
        let right = s.right.as_ref().map(resolve).transpose()?;
        params.scenario = Some(ScenarioConfig::case(&s.case, recipients, right)?);
    }
    Ok(params)
}

/// Runs `selector` on the problem. Events empty their elements before the
/// combination.
pub fn run(problem: &Problem, selector: &str, overrides: &[(String, String)]) -> Result<ResultTable, CliError> {
    let rule = parse_rule(selector)?;
    if problem.intervals {
        if rule != Rule::XAverage {
            return Err(CliError::Usage(format!(
                "interval frames only support `{}`",
                Rule::XAverage.name()
            )));
        }
        let sources = problem.interval_sources()?;
        let mut acc = sources[0].clone();
        for m in &sources[1..] {
            acc = special::convolutive_x_average(&acc, m);
        }
        return Ok(ResultTable::from_intervals(rule.name(), &acc));
    }
    let frame = problem.frame()?;
    let params = params_for(problem, &frame, overrides)?;
    let sources = problem.sources()?;
    let events = problem.events(&frame)?;
    let result = match events.split_first() {
        None => rule::apply(rule, &sources, &params)?,
        Some((first, rest)) => {
            let mut constraint = first.clone();
            for e in rest {
                constraint = frame.union(&constraint, e)?;
            }
            uft::dynamic_update(&DynamicState::Sources(sources), &constraint, rule, &params)?
        }
    };
    Ok(ResultTable::from_result(rule.name(), &result))
}

/// Every element of the problem's super-power set, one per line.
pub fn enumerate(problem: &Problem) -> Result<Vec<String>, CliError> {
    if problem.intervals {
        return Err(CliError::Usage("interval frames have no set algebra to enumerate".into()));
    }
    let frame = problem.frame()?;
    Ok(frame.enumerate()?.iter().map(|e| frame.display(e)).collect())
}
