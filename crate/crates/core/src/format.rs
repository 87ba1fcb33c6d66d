//! Automaton file formats.
//!
//! Text form, one field per line, letter rows in alphabet order:
//!
//! ```text
//! states: 4
//! alphabet: a b
//! initial: 0
//! final: 0
//! a: 1 2 3 0
//! b: 2 2 0 0
//! ```
//!
//! The JSON form carries the same fields:
//! `{"states": 4, "alphabet": ["a", "b"], "initial": 0, "final": [0],
//!   "transitions": {"a": [1, 2, 3, 0], "b": [2, 2, 0, 0]}}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::automaton::{validate, Automaton, RawAutomaton};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_indices(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(line, format!("not a state index: `{tok}`")))
        })
        .collect()
}

/// Parses the text format without validating table contents.
pub fn parse_text_raw(text: &str) -> Result<RawAutomaton> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let mut header = |key: &str| -> Result<(usize, String)> {
        let (no, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("missing `{key}:` line")))?;
        let (k, v) = line
            .split_once(':')
            .ok_or_else(|| parse_err(no, format!("expected `{key}: ...`")))?;
        if k.trim() != key {
            return Err(parse_err(
                no,
                format!("expected `{key}:`, found `{}:`", k.trim()),
            ));
        }
        Ok((no, v.trim().to_string()))
    };

    let (no, states) = header("states")?;
    let states = states
        .parse::<usize>()
        .map_err(|_| parse_err(no, format!("invalid state count `{states}`")))?;
    let (no, alphabet) = header("alphabet")?;
    let alphabet: Vec<String> = alphabet.split_whitespace().map(String::from).collect();
    if alphabet.is_empty() {
        return Err(parse_err(no, "alphabet is empty"));
    }
    let (no, initial) = header("initial")?;
    let initial = initial
        .parse::<usize>()
        .map_err(|_| parse_err(no, format!("invalid initial state `{initial}`")))?;
    let (no, finals) = header("final")?;
    let finals = parse_indices(no, &finals)?;

    let mut rows = Vec::new();
    for (no, line) in lines {
        let (name, row) = line
            .split_once(':')
            .ok_or_else(|| parse_err(no, "expected `<letter>: <row>`"))?;
        let name = name.trim();
        let expected = alphabet.get(rows.len());
        if expected.map(String::as_str) != Some(name) && alphabet.iter().any(|l| l == name) {
            return Err(parse_err(no, format!("row `{name}` out of alphabet order")));
        }
        rows.push((name.to_string(), parse_indices(no, row)?));
    }
    Ok(RawAutomaton {
        states,
        alphabet,
        initial,
        finals,
        rows,
    })
}

pub fn parse_text(text: &str) -> Result<Automaton> {
    validate(parse_text_raw(text)?)
}

pub fn to_text(aut: &Automaton) -> String {
    let join = |v: &[usize]| {
        v.iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let finals: Vec<usize> = aut.finals().iter().copied().collect();
    let mut out = format!(
        "states: {}\nalphabet: {}\ninitial: {}\nfinal: {}\n",
        aut.state_count(),
        aut.alphabet().join(" "),
        aut.initial(),
        join(&finals)
    );
    for (l, name) in aut.alphabet().iter().enumerate() {
        out.push_str(&format!("{name}: {}\n", join(aut.letter(l).image())));
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonAutomaton {
    states: usize,
    alphabet: Vec<String>,
    initial: usize,
    #[serde(rename = "final")]
    finals: Vec<usize>,
    transitions: BTreeMap<String, Vec<usize>>,
}

pub fn parse_json(text: &str) -> Result<Automaton> {
    let json: JsonAutomaton = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    validate(RawAutomaton {
        states: json.states,
        alphabet: json.alphabet,
        initial: json.initial,
        finals: json.finals,
        rows: json.transitions.into_iter().collect(),
    })
}

pub fn to_json(aut: &Automaton) -> String {
    let json = JsonAutomaton {
        states: aut.state_count(),
        alphabet: aut.alphabet().to_vec(),
        initial: aut.initial(),
        finals: aut.finals().iter().copied().collect(),
        transitions: aut
            .alphabet()
            .iter()
            .enumerate()
            .map(|(l, name)| (name.clone(), aut.letter(l).image().to_vec()))
            .collect(),
    };
    serde_json::to_string_pretty(&json).expect("automaton serializes")
}

fn is_json_path(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads an automaton, choosing the JSON form for `.json` files.
pub fn read_automaton(path: &Path) -> Result<Automaton> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if is_json_path(path) {
        parse_json(&text)
    } else {
        parse_text(&text)
    }
}

pub fn write_automaton(path: &Path, aut: &Automaton) -> Result<()> {
    let text = if is_json_path(path) {
        to_json(aut)
    } else {
        to_text(aut)
    };
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
