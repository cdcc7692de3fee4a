//! Command reports in two renderings: canonical JSON for machines and
//! aligned text tables for people.
//!
//! Machine output writes every rational as an exact literal string and keeps
//! key order fixed, so identical inputs give byte-identical output.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::coarse::Coverage;
use crate::document::{grain_record, GameDocument};
use crate::equilibrium::{self, EquilibriumError};
use crate::game::{CoarseGame, Game, GameError, Perspective};
use crate::perception::{DifferentialReport, Differential};
use crate::profile::{MixedProfile, PureProfile};
use crate::rational::{to_literal, Human, Rational};
use crate::repeated::{misalignment, DiscountAnalysis, RepeatedError, ThresholdOutcome};
use crate::scenarios::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Human,
    Machine,
}

/// A finished report in both renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub machine: Value,
    pub human: String,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Machine => {
                let mut s = serde_json::to_string_pretty(&self.machine).expect("JSON values always serialize");
                s.push('\n');
                s
            }
            OutputFormat::Human => self.human.clone(),
        }
    }
}

/// Text styling for human output. Only headings are affected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Style {
    pub color: bool,
}

impl Style {
    fn heading(&self, out: &mut String, text: &str) {
        if !out.is_empty() {
            out.push('\n');
        }
        if self.color {
            let _ = writeln!(out, "\x1b[1m{text}\x1b[0m");
        } else {
            let _ = writeln!(out, "{text}");
        }
    }
}

/// Left-aligned text table.
struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<String>) -> Table {
        Table { rows: vec![header] }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn write(&self, out: &mut String) {
        let cols = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|c| {
                self.rows
                    .iter()
                    .filter_map(|r| r.get(c))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for (i, r) in self.rows.iter().enumerate() {
            let line: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
                .collect();
            let _ = writeln!(out, "  {}", line.join("  ").trim_end());
            if i == 0 {
                let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
                let _ = writeln!(out, "  {}", rule.join("  "));
            }
        }
    }
}

fn lit(x: &Rational) -> Value {
    Value::String(to_literal(x))
}

fn human(x: &Rational) -> String {
    Human(x).to_string()
}

fn tuple_human(xs: &[Rational]) -> String {
    format!("({})", xs.iter().map(human).collect::<Vec<_>>().join(", "))
}

fn pure_json(g: &Game, p: &PureProfile) -> Value {
    Value::Array(p.names(g).into_iter().map(|s| Value::String(s.into())).collect())
}

fn pure_human(g: &Game, p: &PureProfile) -> String {
    format!("({})", p.names(g).join(", "))
}

fn mixed_json(p: &MixedProfile) -> Value {
    Value::Array(
        p.vectors()
            .iter()
            .map(|v| Value::Array(v.iter().map(lit).collect()))
            .collect(),
    )
}

fn mixed_human(g: &Game, p: &MixedProfile) -> String {
    if let Some(pure) = p.as_pure() {
        return pure_human(g, &pure);
    }
    let parts: Vec<String> = p
        .vectors()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let entries: Vec<String> = v
                .iter()
                .zip(g.strategies(k))
                .filter(|(x, _)| !x.is_zero())
                .map(|(x, s)| format!("{s} {}", to_literal(x)))
                .collect();
            format!("{}: {}", g.players()[k], entries.join(", "))
        })
        .collect();
    parts.join("; ")
}

fn perspective_json(cg: &CoarseGame, p: Perspective) -> Value {
    match p {
        Perspective::Base => Value::String("base".into()),
        Perspective::Perceived(k) => Value::String(cg.base().players()[k].clone()),
    }
}

fn perspective_human(cg: &CoarseGame, p: Perspective) -> String {
    match p {
        Perspective::Base => "base".into(),
        Perspective::Perceived(k) => format!("{}'s view", cg.base().players()[k]),
    }
}

/// Writes a numeric matrix (two players as a grid, otherwise one line per
/// cell).
fn matrix_human(out: &mut String, g: &Game, cell: &dyn Fn(&[usize]) -> String) {
    if g.num_players() == 2 {
        let mut header = vec![String::new()];
        header.extend(g.strategies(1).iter().cloned());
        let mut t = Table::new(header);
        for (i, row) in g.strategies(0).iter().enumerate() {
            let mut cells = vec![row.clone()];
            cells.extend((0..g.shape()[1]).map(|j| cell(&[i, j])));
            t.row(cells);
        }
        t.write(out);
    } else {
        let mut header: Vec<String> = g.players().to_vec();
        header.push("payoffs".into());
        let mut t = Table::new(header);
        for p in g.profiles() {
            let mut cells: Vec<String> = p
                .iter()
                .enumerate()
                .map(|(k, &s)| g.strategies(k)[s].clone())
                .collect();
            cells.push(cell(&p));
            t.row(cells);
        }
        t.write(out);
    }
}

fn payoff_rows(g: &Game) -> Value {
    Value::Array(
        g.profiles()
            .zip(g.cells())
            .map(|(p, c)| {
                json!({
                    "profile": pure_json(g, &PureProfile::new(g, p).expect("enumerated profile")),
                    "payoffs": Value::Array(c.iter().map(lit).collect()),
                })
            })
            .collect(),
    )
}

pub fn validate_report(doc: &GameDocument, style: Style) -> Report {
    let cg = &doc.game;
    let g = cg.base();
    let players: Vec<Value> = (0..g.num_players())
        .map(|k| {
            json!({
                "name": g.players()[k],
                "strategies": g.strategies(k),
                "grains": cg.partition(k).grains().len(),
                "coverage": match cg.partition(k).coverage() {
                    Coverage::ImplicitFinest => "implicit-finest",
                    Coverage::Strict => "strict",
                },
                "preprocessing": match cg.preprocessing(k) {
                    crate::game::Preprocessing::Emp => "emp",
                    crate::game::Preprocessing::Ignore => "ignore",
                },
            })
        })
        .collect();
    let machine = json!({
        "command": "validate",
        "valid": true,
        "players": players,
        "cells": g.num_cells(),
        "roles": doc.roles.is_some(),
    });
    let mut out = String::new();
    style.heading(&mut out, "valid game");
    let mut t = Table::new(vec!["player".into(), "strategies".into(), "grains".into(), "coverage".into(), "preprocessing".into()]);
    for p in machine["players"].as_array().expect("array") {
        t.row(vec![
            p["name"].as_str().unwrap_or_default().into(),
            p["strategies"]
                .as_array()
                .map(|a| a.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(", "))
                .unwrap_or_default(),
            p["grains"].to_string(),
            p["coverage"].as_str().unwrap_or_default().into(),
            p["preprocessing"].as_str().unwrap_or_default().into(),
        ]);
    }
    t.write(&mut out);
    Report { machine, human: out }
}

pub fn transform_report(cg: &CoarseGame, perceiver: usize, style: Style) -> Result<Report, GameError> {
    let g = cg.base();
    g.check_player(perceiver)?;
    let view = cg.coarse_view(perceiver)?;
    let perceived = cg.perceived_game(perceiver)?.game;
    let grains: Vec<Value> = g
        .profiles()
        .map(|p| {
            json!({
                "profile": pure_json(g, &PureProfile::new(g, p.clone()).expect("enumerated profile")),
                "grains": Value::Array(view.cell(&p).iter().map(grain_record).collect()),
            })
        })
        .collect();
    let machine = json!({
        "command": "transform",
        "perceiver": g.players()[perceiver],
        "coarse": grains,
        "perceived": payoff_rows(&perceived),
    });
    let mut out = String::new();
    style.heading(&mut out, &format!("coarse view of {}", g.players()[perceiver]));
    matrix_human(&mut out, g, &|p| {
        format!(
            "({})",
            view.cell(p).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        )
    });
    style.heading(&mut out, &format!("perceived matrix of {}", g.players()[perceiver]));
    matrix_human(&mut out, &perceived, &|p| tuple_human(perceived.cell(p)));
    Ok(Report { machine, human: out })
}

/// Which equilibrium searches `solve_report` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveMode {
    pub pure: bool,
    pub mixed: bool,
}

impl Default for SolveMode {
    fn default() -> Self {
        SolveMode { pure: true, mixed: true }
    }
}

pub fn solve_report(
    cg: &CoarseGame,
    perspective: Perspective,
    mode: SolveMode,
    style: Style,
) -> Result<Report, EquilibriumError> {
    let g = cg.game_for(perspective)?;
    let g = g.as_ref();
    let set = equilibrium::solve(g);
    let mixed_available = g.num_players() == 2;
    if mode.mixed && !mode.pure && !mixed_available {
        return Err(EquilibriumError::NotTwoPlayer(g.num_players()));
    }
    let diag = &set.diagnostics;
    let mut machine = Map::new();
    machine.insert("command".into(), json!("solve"));
    machine.insert("perspective".into(), perspective_json(cg, perspective));
    if mode.pure {
        machine.insert(
            "pure".into(),
            Value::Array(
                set.pure
                    .iter()
                    .map(|p| json!({"profile": pure_json(g, p), "payoffs": g.cell(p.indices()).iter().map(lit).collect::<Vec<_>>()}))
                    .collect(),
            ),
        );
    }
    if mode.mixed && mixed_available {
        machine.insert(
            "mixed".into(),
            Value::Array(
                set.mixed
                    .iter()
                    .map(|p| {
                        let payoffs: Vec<Value> = (0..g.num_players())
                            .map(|k| lit(&crate::game::expected_payoff(g, p, k).expect("shape checked")))
                            .collect();
                        json!({"profile": mixed_json(p), "payoffs": payoffs})
                    })
                    .collect(),
            ),
        );
        machine.insert(
            "degenerate".into(),
            Value::Array(
                set.degenerate
                    .iter()
                    .map(|d| {
                        json!({
                            "supports": d.supports.iter().enumerate().map(|(k, s)| s.iter().map(|&i| g.strategies(k)[i].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                            "free_players": d.free_players.iter().map(|&k| g.players()[k].clone()).collect::<Vec<_>>(),
                            "witness": mixed_json(&d.witness),
                        })
                    })
                    .collect(),
            ),
        );
    }
    machine.insert(
        "diagnostics".into(),
        json!({
            "multiple_pure": diag.multiple_pure,
            "uniform_for": diag.uniform_for.iter().map(|&k| g.players()[k].clone()).collect::<Vec<_>>(),
            "non_competitive": diag.non_competitive,
        }),
    );

    let mut out = String::new();
    style.heading(&mut out, &format!("equilibria ({})", perspective_human(cg, perspective)));
    if mode.pure {
        style.heading(&mut out, &format!("pure: {}", set.pure.len()));
        let mut t = Table::new(vec!["profile".into(), "payoffs".into()]);
        for p in &set.pure {
            t.row(vec![pure_human(g, p), tuple_human(g.cell(p.indices()))]);
        }
        t.write(&mut out);
    }
    if mode.mixed {
        if mixed_available {
            style.heading(&mut out, &format!("mixed (isolated): {}", set.mixed.len()));
            let mut t = Table::new(vec!["profile".into(), "expected payoffs".into()]);
            for p in &set.mixed {
                let pay: Vec<Rational> = (0..g.num_players())
                    .map(|k| crate::game::expected_payoff(g, p, k).expect("shape checked"))
                    .collect();
                t.row(vec![mixed_human(g, p), tuple_human(&pay)]);
            }
            t.write(&mut out);
            if !set.degenerate.is_empty() {
                style.heading(&mut out, &format!("continua of equilibria: {}", set.degenerate.len()));
                let mut t = Table::new(vec!["free players".into(), "witness".into()]);
                for d in &set.degenerate {
                    let free: Vec<&str> = d.free_players.iter().map(|&k| g.players()[k].as_str()).collect();
                    t.row(vec![free.join(", "), mixed_human(g, &d.witness)]);
                }
                t.write(&mut out);
            }
        } else {
            let _ = writeln!(out, "\nmixed search skipped: it needs exactly two players");
        }
    }
    let mut notes = Vec::new();
    if diag.multiple_pure {
        notes.push("several pure equilibria: selection needed".to_string());
    }
    if !diag.uniform_for.is_empty() {
        let names: Vec<&str> = diag.uniform_for.iter().map(|&k| g.players()[k].as_str()).collect();
        notes.push(format!("constant payoffs for: {}", names.join(", ")));
    }
    if diag.non_competitive {
        notes.push("no player's choice matters: the game is non-competitive".into());
    }
    if !notes.is_empty() {
        style.heading(&mut out, "diagnostics");
        for n in notes {
            let _ = writeln!(out, "  {n}");
        }
    }
    Ok(Report {
        machine: Value::Object(machine),
        human: out,
    })
}

pub fn diagnose_report(cg: &CoarseGame, perceiver: usize, style: Style) -> Result<Report, GameError> {
    let g = cg.base();
    let c = equilibrium::diagnose_competitiveness(cg, perceiver)?;
    let uniform: Map<String, Value> = g
        .players()
        .iter()
        .zip(&c.uniform_for)
        .map(|(p, &u)| (p.clone(), Value::Bool(u)))
        .collect();
    let machine = json!({
        "command": "diagnose",
        "perceiver": g.players()[perceiver],
        "uniform": uniform,
        "non_competitive": c.non_competitive,
    });
    let mut out = String::new();
    style.heading(&mut out, &format!("perception diagnostics for {}", g.players()[perceiver]));
    let mut t = Table::new(vec!["subject".into(), "payoffs in one grain".into()]);
    for (p, &u) in g.players().iter().zip(&c.uniform_for) {
        t.row(vec![p.clone(), if u { "yes" } else { "no" }.into()]);
    }
    t.write(&mut out);
    let _ = writeln!(
        out,
        "\n  {}",
        if c.non_competitive {
            "non-competitive: every player's payoffs collapse to a constant"
        } else {
            "competitive"
        }
    );
    Ok(Report { machine, human: out })
}

fn differential_json(d: &Differential) -> Value {
    json!({"expected": lit(&d.expected), "actual": lit(&d.actual), "value": lit(&d.value())})
}

pub fn differentials_report(cg: &CoarseGame, report: &DifferentialReport, style: Style) -> Report {
    let g = cg.base();
    let players = g.players();
    let expectations: Map<String, Value> = players
        .iter()
        .zip(&report.realized.expectations)
        .map(|(p, e)| (p.clone(), mixed_json(e)))
        .collect();
    let subjects: Vec<Value> = report
        .subjects
        .iter()
        .map(|s| {
            let by_lens: Map<String, Value> = players
                .iter()
                .zip(&s.by_lens)
                .map(|(p, d)| (p.clone(), differential_json(d)))
                .collect();
            json!({
                "subject": players[s.subject],
                "incidental": lit(&s.incidental().value()),
                "by_lens": by_lens,
                "unrecognized": differential_json(&s.unrecognized),
            })
        })
        .collect();
    let overridden: Vec<&str> = report
        .realized
        .overridden
        .iter()
        .enumerate()
        .filter(|(_, &o)| o)
        .map(|(k, _)| players[k].as_str())
        .collect();
    let machine = json!({
        "command": "differentials",
        "realized": mixed_json(&report.realized.profile),
        "overridden": overridden,
        "expectations": expectations,
        "base_expectation": mixed_json(&report.base_expectation),
        "subjects": subjects,
    });

    let mut out = String::new();
    style.heading(&mut out, "realized outcome");
    let _ = writeln!(out, "  {}", mixed_human(g, &report.realized.profile));
    if !overridden.is_empty() {
        let _ = writeln!(out, "  overridden by hand: {}", overridden.join(", "));
    }
    style.heading(&mut out, "expectations");
    let mut t = Table::new(vec!["matrix".into(), "expected profile".into()]);
    for (p, e) in players.iter().zip(&report.realized.expectations) {
        t.row(vec![format!("{p}'s view"), mixed_human(g, e)]);
    }
    t.row(vec!["base".into(), mixed_human(g, &report.base_expectation)]);
    t.write(&mut out);
    style.heading(&mut out, "gain-loss differentials (actual - expected)");
    let mut header = vec!["subject".to_string()];
    header.extend(players.iter().map(|p| format!("{p}'s view")));
    header.push("base".into());
    let mut t = Table::new(header);
    for s in &report.subjects {
        let mut row = vec![players[s.subject].clone()];
        row.extend(s.by_lens.iter().chain([&s.unrecognized]).map(|d| {
            format!("{} = {} - {}", signed(&d.value()), human(&d.actual), human(&d.expected))
        }));
        t.row(row);
    }
    t.write(&mut out);
    Report { machine, human: out }
}

fn signed(x: &Rational) -> String {
    if x.is_positive() {
        format!("+{}", human(x))
    } else {
        human(x)
    }
}

pub fn repeated_report(
    cg: &CoarseGame,
    analysis: &DiscountAnalysis,
    delta: Option<&Rational>,
    style: Style,
) -> Result<Report, RepeatedError> {
    let g = cg.base();
    let players = g.players();
    let perspectives = analysis.perspectives();
    let thresholds: Vec<Value> = analysis
        .entries
        .iter()
        .map(|e| {
            let mut m = Map::new();
            m.insert("perspective".into(), perspective_json(cg, e.perspective));
            m.insert("player".into(), json!(players[e.player]));
            m.insert(
                "stage".into(),
                json!({
                    "mutual_cooperation": lit(&e.roles.mutual_cooperation),
                    "temptation": lit(&e.roles.temptation),
                    "punishment": lit(&e.roles.punishment),
                }),
            );
            match &e.outcome {
                ThresholdOutcome::Threshold(t) => {
                    m.insert("threshold".into(), lit(&t.value));
                    m.insert("class".into(), json!(t.class.to_string()));
                }
                ThresholdOutcome::Degenerate => {
                    m.insert("threshold".into(), Value::Null);
                    m.insert("class".into(), json!("degenerate"));
                }
            }
            Value::Object(m)
        })
        .collect();
    let mut gaps = Vec::new();
    for &a in &perspectives {
        for &b in &perspectives {
            for k in 0..2 {
                if let Some(i) = misalignment(analysis, a, b, k) {
                    gaps.push((a, b, k, i));
                }
            }
        }
    }
    let gaps_json: Vec<Value> = gaps
        .iter()
        .map(|(a, b, k, i)| {
            json!({
                "cooperates_in": perspective_json(cg, *a),
                "defects_in": perspective_json(cg, *b),
                "player": players[*k],
                "interval": {"lo": lit(&i.lo), "lo_closed": true, "hi": lit(&i.hi), "hi_closed": false},
            })
        })
        .collect();
    let mut machine = Map::new();
    machine.insert("command".into(), json!("repeated"));
    machine.insert(
        "roles".into(),
        Value::Object(
            players
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    (
                        p.clone(),
                        json!({
                            "cooperate": g.strategies(k)[analysis.roles.cooperate[k]],
                            "defect": g.strategies(k)[analysis.roles.defect[k]],
                        }),
                    )
                })
                .collect(),
        ),
    );
    machine.insert("thresholds".into(), Value::Array(thresholds));
    machine.insert("misalignments".into(), Value::Array(gaps_json));

    let mut out = String::new();
    style.heading(&mut out, "critical discount factors (grim trigger)");
    let mut t = Table::new(vec![
        "matrix".into(),
        "player".into(),
        "cooperate".into(),
        "temptation".into(),
        "punishment".into(),
        "threshold".into(),
    ]);
    for e in &analysis.entries {
        t.row(vec![
            perspective_human(cg, e.perspective),
            players[e.player].clone(),
            human(&e.roles.mutual_cooperation),
            human(&e.roles.temptation),
            human(&e.roles.punishment),
            match &e.outcome {
                ThresholdOutcome::Threshold(t) => match t.class {
                    crate::repeated::ThresholdClass::Interior => to_literal(&t.value),
                    class => format!("{} ({class})", to_literal(&t.value)),
                },
                ThresholdOutcome::Degenerate => "degenerate".into(),
            },
        ]);
    }
    t.write(&mut out);
    style.heading(&mut out, "misaligned discount factors");
    if gaps.is_empty() {
        let _ = writeln!(out, "  none");
    } else {
        let mut t = Table::new(vec!["player".into(), "cooperates in".into(), "defects in".into(), "discount factors".into()]);
        for (a, b, k, i) in &gaps {
            t.row(vec![
                players[*k].clone(),
                perspective_human(cg, *a),
                perspective_human(cg, *b),
                i.to_string(),
            ]);
        }
        t.write(&mut out);
    }

    if let Some(delta) = delta {
        let mut verdicts = Map::new();
        style.heading(&mut out, &format!("verdicts at discount factor {}", to_literal(delta)));
        let mut t = Table::new(vec!["matrix".into(), "verdict".into()]);
        for &p in &perspectives {
            let v = analysis.perspective_verdict(p, delta)?;
            let key = match p {
                Perspective::Base => "base".to_string(),
                Perspective::Perceived(k) => players[k].clone(),
            };
            let word = match v {
                Some(true) => "cooperate",
                Some(false) => "defect",
                None => "undetermined",
            };
            verdicts.insert(key, json!(word));
            t.row(vec![perspective_human(cg, p), word.into()]);
        }
        t.write(&mut out);
        machine.insert("delta".into(), lit(delta));
        machine.insert("verdicts".into(), Value::Object(verdicts));
    }
    Ok(Report {
        machine: Value::Object(machine),
        human: out,
    })
}

pub fn scenario_report(s: &Scenario, style: Style) -> Report {
    let checks = s.verify();
    let machine = json!({
        "command": "scenario",
        "name": s.name,
        "summary": s.summary,
        "verified": checks.iter().all(|c| c.ok),
        "facts": checks.iter().map(|c| {
            let mut m = Map::new();
            m.insert("fact".into(), json!(c.note));
            m.insert("ok".into(), json!(c.ok));
            if !c.ok {
                m.insert("detail".into(), json!(c.detail));
            }
            Value::Object(m)
        }).collect::<Vec<_>>(),
    });
    let mut out = String::new();
    style.heading(&mut out, &format!("{}: {}", s.name, s.summary));
    for c in &checks {
        let mark = if c.ok { "ok  " } else { "FAIL" };
        let _ = writeln!(out, "  {mark} {}", c.note);
        if !c.ok {
            let _ = writeln!(out, "       {}", c.detail);
        }
    }
    Report { machine, human: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perception::{differential_report, realize, Selection, SolutionKind};
    use crate::repeated::{perspective_thresholds, Roles};
    use crate::scenarios;

    #[test]
    fn solve_lists_three_equilibria_for_player_two() {
        let s = scenarios::coarse_pd();
        let r = solve_report(&s.game, Perspective::Perceived(1), SolveMode { pure: true, mixed: false }, Style::default()).unwrap();
        assert_eq!(r.machine["pure"].as_array().unwrap().len(), 3);
        assert_eq!(r.machine["diagnostics"]["multiple_pure"], json!(true));
        assert!(r.human.contains("(Confess, Silent)"));
        assert!(r.machine.get("mixed").is_none());
    }

    #[test]
    fn machine_output_is_exact_and_stable() {
        let s = scenarios::mixed_shift();
        let a = solve_report(&s.game, Perspective::Perceived(0), SolveMode::default(), Style::default()).unwrap();
        let b = solve_report(&s.game, Perspective::Perceived(0), SolveMode::default(), Style::default()).unwrap();
        assert_eq!(a.render(OutputFormat::Machine), b.render(OutputFormat::Machine));
        assert_eq!(a.machine["mixed"][0]["profile"], json!([["1/2", "1/2"], ["1/3", "2/3"]]));
    }

    #[test]
    fn differential_table() {
        let s = scenarios::coarse_pd();
        let realized = realize(&s.game, &[Selection::Auto, Selection::Index(1)], SolutionKind::Pure).unwrap();
        let d = differential_report(&s.game, realized, &Selection::Auto, SolutionKind::Pure).unwrap();
        let r = differentials_report(&s.game, &d, Style::default());
        assert_eq!(r.machine["subjects"][0]["incidental"], json!("3"));
        assert_eq!(r.machine["subjects"][1]["by_lens"]["player1"]["value"], json!("-2"));
        assert_eq!(r.machine["subjects"][1]["unrecognized"]["actual"], json!("-5"));
        assert!(r.human.contains("+3 = 0 - -3"));
    }

    #[test]
    fn repeated_verdicts() {
        let s = scenarios::discount_misalignment();
        let roles = Roles::from_labels(s.game.base(), s.roles.as_ref().unwrap()).unwrap();
        let a = perspective_thresholds(&s.game, &roles).unwrap();
        let r = repeated_report(&s.game, &a, Some(&crate::rational::ratio(1, 4)), Style::default()).unwrap();
        assert_eq!(r.machine["verdicts"]["player1"], json!("cooperate"));
        assert_eq!(r.machine["verdicts"]["player2"], json!("defect"));
        assert!(r.human.contains("[1/5,1/3)"));
    }

    #[test]
    fn colored_headings() {
        let s = scenarios::coarse_pd();
        let r = scenario_report(&s, Style { color: true });
        assert!(r.human.starts_with("\x1b[1m"));
        assert!(!scenario_report(&s, Style::default()).human.contains('\x1b'));
    }
}
