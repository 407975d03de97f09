use std::collections::HashMap;

use super::{ScoreError, SigningScore};
use crate::decimal::Decimal;
use crate::expr::{Expression, NativeValue, Path};
use crate::registry::{DurationExpr, LabelPart, ParamType, Registry, ScoreTemplate, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("native value at `{path}` where a score is expected")]
    NotAScore { path: Path },
    #[error("{source} (in `{path}`)")]
    Score { path: Path, source: ScoreError },
}

impl EvalError {
    pub fn path(&self) -> &Path {
        match self {
            EvalError::Type(e) => e.path(),
            EvalError::NotAScore { path } | EvalError::Score { path, .. } => path,
        }
    }
}

enum Value<'a> {
    Score(SigningScore),
    Scores(Vec<SigningScore>),
    Native(&'a NativeValue),
}

type Env<'a> = HashMap<&'a str, Value<'a>>;

/// Evaluates `expr` bottom-up into a signing score. The expression is
/// type-checked first.
pub fn evaluate(reg: &Registry, expr: &Expression) -> Result<SigningScore, EvalError> {
    if reg.type_check(expr)? != ParamType::Score {
        return Err(EvalError::NotAScore { path: Path::root() });
    }
    eval_node(reg, expr, &mut Vec::new())
}

fn eval_node(reg: &Registry, expr: &Expression, path: &mut Vec<usize>) -> Result<SigningScore, EvalError> {
    let Expression::Rule { name, children } = expr else {
        return Err(EvalError::NotAScore {
            path: Path(path.clone()),
        });
    };
    let def = &reg.rules[name];
    let mut env: Env = HashMap::new();
    let mut rest = Vec::new();
    for (i, child) in children.iter().enumerate() {
        let value = match child {
            Expression::Native(v) => Value::Native(v),
            Expression::Rule { .. } => {
                path.push(i);
                let s = eval_node(reg, child, path)?;
                path.pop();
                Value::Score(s)
            }
        };
        match def.params.get(i) {
            Some(p) => {
                env.insert(p.name.as_str(), value);
            }
            None => rest.push(value),
        }
    }
    if let Some(v) = &def.variadic {
        let scores = rest
            .into_iter()
            .filter_map(|v| match v {
                Value::Score(s) => Some(s),
                _ => None,
            })
            .collect();
        env.insert(v.name.as_str(), Value::Scores(scores));
    }
    instantiate(&def.body, &env).map_err(|source| EvalError::Score {
        path: Path(path.clone()),
        source,
    })
}

fn score_param<'e>(env: &'e Env, name: &str) -> &'e SigningScore {
    match env.get(name) {
        Some(Value::Score(s)) => s,
        _ => unreachable!("registry validation guarantees score parameter `{name}`"),
    }
}

fn duration(d: &DurationExpr, env: &Env) -> Decimal {
    match d {
        DurationExpr::Literal(v) => *v,
        DurationExpr::Dur(p) => score_param(env, p).duration(),
        DurationExpr::Param(p) => match env.get(p.as_str()) {
            Some(Value::Native(NativeValue::Number(n))) => *n,
            _ => unreachable!("registry validation guarantees number parameter `{p}`"),
        },
        DurationExpr::Add(a, b) => duration(a, env) + duration(b, env),
        DurationExpr::Sub(a, b) => duration(a, env) - duration(b, env),
    }
}

fn instantiate(t: &ScoreTemplate, env: &Env) -> Result<SigningScore, ScoreError> {
    match t {
        ScoreTemplate::Block { tracks, label, duration: d } => {
            let text: String = label
                .0
                .iter()
                .map(|part| match part {
                    LabelPart::Text(s) => s.clone(),
                    LabelPart::Param(p) => match env.get(p.as_str()) {
                        Some(Value::Native(v)) => v.display_text(),
                        _ => unreachable!("registry validation guarantees label parameter `{p}`"),
                    },
                })
                .collect();
            SigningScore::block(tracks, &text, duration(d, env))
        }
        ScoreTemplate::Seq(items) => {
            let mut acc = SigningScore::empty();
            for item in items {
                match item {
                    ScoreTemplate::Param(p) if matches!(env.get(p.as_str()), Some(Value::Scores(_))) => {
                        let Some(Value::Scores(list)) = env.get(p.as_str()) else {
                            unreachable!()
                        };
                        for s in list {
                            acc = acc.seq(s);
                        }
                    }
                    other => acc = acc.seq(&instantiate(other, env)?),
                }
            }
            Ok(acc)
        }
        ScoreTemplate::Sync { base, overlay, offset } => {
            let base = instantiate(base, env)?;
            let overlay = instantiate(overlay, env)?;
            base.sync(&overlay, duration(offset, env))
        }
        ScoreTemplate::Hold(d) => SigningScore::hold(duration(d, env)),
        ScoreTemplate::Param(p) => Ok(score_param(env, p).clone()),
    }
}
