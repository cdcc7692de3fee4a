//! The versioned JSON game file.
//!
//! ```json
//! {
//!   "version": 1,
//!   "players": ["row", "col"],
//!   "strategies": {"row": ["a", "b"], "col": ["x", "y"]},
//!   "payoffs": [[["1", "0"], ["0", "0"]], [["0", "0"], ["1/2", "5.5"]]],
//!   "partitions": {"row": [{"point": "0"}, {"lo": "0", "lo_closed": false, "hi": "2", "hi_closed": true}]},
//!   "coverage": {"row": "strict"},
//!   "preprocessing": {"row": "emp", "col": "emp"},
//!   "roles": {"row": {"cooperate": "a", "defect": "b"}}
//! }
//! ```
//!
//! `payoffs` nests one array level per player (first player outermost) and
//! ends in one payoff tuple per cell. Rationals are strings (`"p/q"`,
//! integers or finite decimals); bare JSON integers are accepted on input.
//! `partitions`, `coverage`, `preprocessing` and `roles` are optional and
//! default to the finest partition, implicit-finest coverage and EMP.

use serde_json::{Map, Value};
use thiserror::Error;

use crate::coarse::{Coverage, Endpoint, Grain, Partition};
use crate::game::{CoarseGame, Game, GameError, Preprocessing};
use crate::rational::{parse_rational, to_literal, Rational};

pub const VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid game at {path}: {message}")]
    Invalid { path: String, message: String },
}

impl DocumentError {
    pub fn path(&self) -> &str {
        match self {
            DocumentError::Parse { path, .. } | DocumentError::Invalid { path, .. } => path,
        }
    }
}

fn parse_err(path: &str, message: impl Into<String>) -> DocumentError {
    DocumentError::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn invalid(path: &str, message: impl ToString) -> DocumentError {
    DocumentError::Invalid {
        path: path.to_string(),
        message: message.to_string(),
    }
}

/// A parsed game file: the coarse game plus optional role labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameDocument {
    pub game: CoarseGame,
    /// Per player `(cooperate, defect)`, present only when every player has
    /// roles in the file.
    pub roles: Option<Vec<(String, String)>>,
}

pub fn parse_game(text: &str) -> Result<CoarseGame, DocumentError> {
    parse_document(text).map(|d| d.game)
}

pub fn parse_document(text: &str) -> Result<GameDocument, DocumentError> {
    let root: Value = serde_json::from_str(text).map_err(|e| parse_err("$", e.to_string()))?;
    let obj = as_object(&root, "$")?;
    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "version" | "players" | "strategies" | "payoffs" | "partitions" | "coverage" | "preprocessing" | "roles"
        ) {
            return Err(parse_err(key, "unknown field"));
        }
    }

    let version = obj
        .get("version")
        .ok_or_else(|| parse_err("version", "missing"))?
        .as_u64()
        .ok_or_else(|| parse_err("version", "expected a non-negative integer"))?;
    if version != VERSION {
        return Err(parse_err("version", format!("unsupported version {version}, expected {VERSION}")));
    }

    let players: Vec<String> = as_array(required(obj, "players")?, "players")?
        .iter()
        .enumerate()
        .map(|(i, v)| as_str(v, &format!("players[{i}]")).map(str::to_string))
        .collect::<Result<_, _>>()?;

    let strat_obj = as_object(required(obj, "strategies")?, "strategies")?;
    check_keys(strat_obj, &players, "strategies", true)?;
    let strategies: Vec<Vec<String>> = players
        .iter()
        .map(|p| {
            let path = format!("strategies.{p}");
            as_array(&strat_obj[p], &path)?
                .iter()
                .enumerate()
                .map(|(i, v)| as_str(v, &format!("{path}[{i}]")).map(str::to_string))
                .collect()
        })
        .collect::<Result<_, _>>()?;

    let shape: Vec<usize> = strategies.iter().map(Vec::len).collect();
    let mut cells = Vec::new();
    read_payoffs(required(obj, "payoffs")?, &shape, players.len(), "payoffs", &mut cells)?;
    let base = Game::new(players.clone(), strategies, cells).map_err(|e| invalid(game_error_path(&e), e))?;

    let coverage = match obj.get("coverage") {
        None => vec![Coverage::ImplicitFinest; players.len()],
        Some(v) => {
            let m = as_object(v, "coverage")?;
            check_keys(m, &players, "coverage", false)?;
            players
                .iter()
                .map(|p| match m.get(p) {
                    None => Ok(Coverage::ImplicitFinest),
                    Some(v) => match as_str(v, &format!("coverage.{p}"))? {
                        "implicit-finest" => Ok(Coverage::ImplicitFinest),
                        "strict" => Ok(Coverage::Strict),
                        other => Err(parse_err(
                            &format!("coverage.{p}"),
                            format!("expected \"implicit-finest\" or \"strict\", got {other:?}"),
                        )),
                    },
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };

    let partitions = match obj.get("partitions") {
        None => coverage
            .iter()
            .map(|&c| Partition::new(vec![], c).expect("empty partition is valid"))
            .collect(),
        Some(v) => {
            let m = as_object(v, "partitions")?;
            check_keys(m, &players, "partitions", false)?;
            players
                .iter()
                .zip(&coverage)
                .map(|(p, &c)| {
                    let path = format!("partitions.{p}");
                    let records = match m.get(p) {
                        None => vec![],
                        Some(v) => as_array(v, &path)?
                            .iter()
                            .enumerate()
                            .map(|(i, r)| read_grain(r, &format!("{path}[{i}]")))
                            .collect::<Result<Vec<_>, _>>()?,
                    };
                    Partition::new(records, c).map_err(|e| invalid(&partition_error_path(&path, &e), e))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };

    let preprocessing = match obj.get("preprocessing") {
        None => vec![Preprocessing::Emp; players.len()],
        Some(v) => {
            let m = as_object(v, "preprocessing")?;
            check_keys(m, &players, "preprocessing", false)?;
            players
                .iter()
                .map(|p| match m.get(p) {
                    None => Ok(Preprocessing::Emp),
                    Some(v) => match as_str(v, &format!("preprocessing.{p}"))? {
                        "emp" => Ok(Preprocessing::Emp),
                        "ignore" => Ok(Preprocessing::Ignore),
                        other => Err(parse_err(
                            &format!("preprocessing.{p}"),
                            format!("expected \"emp\" or \"ignore\", got {other:?}"),
                        )),
                    },
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };

    let roles = match obj.get("roles") {
        None => None,
        Some(v) => {
            let m = as_object(v, "roles")?;
            check_keys(m, &players, "roles", true)?;
            let list = players
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let path = format!("roles.{p}");
                    let r = as_object(&m[p], &path)?;
                    let label = |key: &str| -> Result<String, DocumentError> {
                        let path = format!("{path}.{key}");
                        let s = as_str(r.get(key).ok_or_else(|| parse_err(&path, "missing"))?, &path)?;
                        base.strategy_index(k, s).map_err(|e| invalid(&path, e))?;
                        Ok(s.to_string())
                    };
                    Ok((label("cooperate")?, label("defect")?))
                })
                .collect::<Result<Vec<_>, DocumentError>>()?;
            Some(list)
        }
    };

    let game = CoarseGame::new(base, partitions, preprocessing).map_err(|e| invalid("$", e))?;
    Ok(GameDocument { game, roles })
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, DocumentError> {
    obj.get(key).ok_or_else(|| parse_err(key, "missing"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, DocumentError> {
    v.as_object().ok_or_else(|| parse_err(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, DocumentError> {
    v.as_array().ok_or_else(|| parse_err(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, DocumentError> {
    v.as_str().ok_or_else(|| parse_err(path, "expected a string"))
}

fn as_bool(v: &Value, path: &str) -> Result<bool, DocumentError> {
    v.as_bool().ok_or_else(|| parse_err(path, "expected a boolean"))
}

/// Every key must name a player; with `all`, every player must appear.
fn check_keys(m: &Map<String, Value>, players: &[String], path: &str, all: bool) -> Result<(), DocumentError> {
    if let Some(k) = m.keys().find(|k| !players.contains(k)) {
        return Err(parse_err(&format!("{path}.{k}"), "not a player"));
    }
    if all {
        if let Some(p) = players.iter().find(|p| !m.contains_key(*p)) {
            return Err(parse_err(&format!("{path}.{p}"), "missing"));
        }
    }
    Ok(())
}

fn read_rational(v: &Value, path: &str) -> Result<Rational, DocumentError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(parse_err(path, "expected a rational literal string")),
    };
    parse_rational(&text).map_err(|e| parse_err(path, e.to_string()))
}

fn read_payoffs(
    v: &Value,
    shape: &[usize],
    n: usize,
    path: &str,
    out: &mut Vec<Vec<Rational>>,
) -> Result<(), DocumentError> {
    let items = as_array(v, path)?;
    let (expected, leaf) = match shape.first() {
        Some(&count) => (count, false),
        None => (n, true),
    };
    if items.len() != expected {
        let what = if leaf { "payoff tuple entries" } else { "strategies" };
        return Err(invalid(path, format!("expected {expected} {what}, found {}", items.len())));
    }
    if leaf {
        out.push(
            items
                .iter()
                .enumerate()
                .map(|(i, x)| read_rational(x, &format!("{path}[{i}]")))
                .collect::<Result<_, _>>()?,
        );
    } else {
        for (i, item) in items.iter().enumerate() {
            read_payoffs(item, &shape[1..], n, &format!("{path}[{i}]"), out)?;
        }
    }
    Ok(())
}

fn read_endpoint(obj: &Map<String, Value>, key: &str, closed_key: &str, infinite: &str, path: &str) -> Result<Endpoint, DocumentError> {
    let vpath = format!("{path}.{key}");
    let cpath = format!("{path}.{closed_key}");
    let value = obj.get(key).ok_or_else(|| parse_err(&vpath, "missing"))?;
    let closed = as_bool(obj.get(closed_key).ok_or_else(|| parse_err(&cpath, "missing"))?, &cpath)?;
    if value.as_str() == Some(infinite) {
        if closed {
            return Err(invalid(&cpath, "an infinite endpoint must be open"));
        }
        return Ok(Endpoint::Unbounded);
    }
    let x = read_rational(value, &vpath)?;
    Ok(if closed { Endpoint::Closed(x) } else { Endpoint::Open(x) })
}

fn read_grain(v: &Value, path: &str) -> Result<Grain, DocumentError> {
    let obj = as_object(v, path)?;
    if let Some(p) = obj.get("point") {
        if obj.len() != 1 {
            return Err(parse_err(path, "a point record has only the \"point\" field"));
        }
        return Ok(Grain::point(read_rational(p, &format!("{path}.point"))?));
    }
    if let Some(k) = obj
        .keys()
        .find(|k| !matches!(k.as_str(), "lo" | "lo_closed" | "hi" | "hi_closed"))
    {
        return Err(parse_err(&format!("{path}.{k}"), "unknown grain field"));
    }
    let lo = read_endpoint(obj, "lo", "lo_closed", "-inf", path)?;
    let hi = read_endpoint(obj, "hi", "hi_closed", "+inf", path)?;
    Grain::interval(lo, hi).map_err(|e| invalid(path, e))
}

fn game_error_path(e: &GameError) -> &'static str {
    match e {
        GameError::TooFewPlayers(_) | GameError::DuplicatePlayer(_) => "players",
        GameError::NoStrategies(_) | GameError::DuplicateStrategy { .. } => "strategies",
        _ => "payoffs",
    }
}

fn partition_error_path(path: &str, e: &crate::coarse::CoarseError) -> String {
    use crate::coarse::CoarseError;
    match e {
        CoarseError::OverlappingGrains { second, .. } => format!("{path}[{second}]"),
        CoarseError::EmptyInterval { index, .. } => format!("{path}[{index}]"),
        _ => path.to_string(),
    }
}

// ---- serialization ---------------------------------------------------------

fn lit(x: &Rational) -> Value {
    Value::String(to_literal(x))
}

pub fn grain_record(g: &Grain) -> Value {
    let mut m = Map::new();
    match g {
        Grain::Singleton(x) => {
            m.insert("point".into(), lit(x));
        }
        Grain::Interval { lo, hi } => {
            let end = |e: &Endpoint, inf: &str| match e.value() {
                Some(x) => lit(x),
                None => Value::String(inf.into()),
            };
            m.insert("lo".into(), end(lo, "-inf"));
            m.insert("lo_closed".into(), Value::Bool(lo.is_closed()));
            m.insert("hi".into(), end(hi, "+inf"));
            m.insert("hi_closed".into(), Value::Bool(hi.is_closed()));
        }
    }
    Value::Object(m)
}

fn payoff_tree(g: &Game, depth: usize, offset: usize, stride: usize) -> Value {
    if depth == g.num_players() {
        return Value::Array(g.cells()[offset].iter().map(lit).collect());
    }
    let count = g.shape()[depth];
    let inner = stride / count;
    Value::Array(
        (0..count)
            .map(|s| payoff_tree(g, depth + 1, offset + s * inner, inner))
            .collect(),
    )
}

/// The document as a JSON value, with every optional section written out.
pub fn to_value(cg: &CoarseGame, roles: Option<&[(String, String)]>) -> Value {
    let g = cg.base();
    let players = g.players();
    let per_player = |f: &dyn Fn(usize) -> Value| -> Value {
        Value::Object(players.iter().enumerate().map(|(k, p)| (p.clone(), f(k))).collect())
    };
    let mut m = Map::new();
    m.insert("version".into(), Value::from(VERSION));
    m.insert("players".into(), Value::Array(players.iter().cloned().map(Value::String).collect()));
    m.insert(
        "strategies".into(),
        per_player(&|k| Value::Array(g.strategies(k).iter().cloned().map(Value::String).collect())),
    );
    m.insert("payoffs".into(), payoff_tree(g, 0, 0, g.num_cells()));
    m.insert(
        "partitions".into(),
        per_player(&|k| Value::Array(cg.partition(k).grains().iter().map(grain_record).collect())),
    );
    if cg.partitions().iter().any(|p| p.coverage() == Coverage::Strict) {
        m.insert(
            "coverage".into(),
            per_player(&|k| {
                Value::String(
                    match cg.partition(k).coverage() {
                        Coverage::ImplicitFinest => "implicit-finest",
                        Coverage::Strict => "strict",
                    }
                    .into(),
                )
            }),
        );
    }
    m.insert(
        "preprocessing".into(),
        per_player(&|k| {
            Value::String(
                match cg.preprocessing(k) {
                    Preprocessing::Emp => "emp",
                    Preprocessing::Ignore => "ignore",
                }
                .into(),
            )
        }),
    );
    if let Some(roles) = roles {
        m.insert(
            "roles".into(),
            per_player(&|k| {
                let mut r = Map::new();
                r.insert("cooperate".into(), Value::String(roles[k].0.clone()));
                r.insert("defect".into(), Value::String(roles[k].1.clone()));
                Value::Object(r)
            }),
        );
    }
    Value::Object(m)
}

/// Canonical text: pretty-printed JSON with a trailing newline.
pub fn serialize_game(cg: &CoarseGame, roles: Option<&[(String, String)]>) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(cg, roles)).expect("JSON values always serialize");
    s.push('\n');
    s
}
