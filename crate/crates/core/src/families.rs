//! Named CSFA constructions and the exhaustive two-bpi binary sweep.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::monoid::{syntactic_complexity, DEFAULT_BUDGET};
use crate::verify::{two_bpi_bound, verify_paper};

fn letter_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("l{i}")
            }
        })
        .collect()
}

fn cycle_row(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn csfa(alphabet: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Automaton> {
    Automaton::new(alphabet, rows, 0, [0])
}

/// One letter inducing `i ↦ i + 1 mod n`.
pub fn unary_cycle(n: usize) -> Result<Automaton> {
    if n == 0 {
        return Err(Error::InvalidFamily("unary cycle needs n >= 1".into()));
    }
    csfa(letter_names(1), vec![cycle_row(n)])
}

/// The standard cycle on `a`, every other letter constant onto state 0.
pub fn one_bpi_csfa(n: usize, alphabet_size: usize) -> Result<Automaton> {
    if n < 2 || alphabet_size < 2 {
        return Err(Error::InvalidFamily(format!(
            "one-bpi family needs n >= 2 and alphabet size >= 2, got n = {n}, size {alphabet_size}"
        )));
    }
    let mut rows = vec![cycle_row(n)];
    rows.extend((1..alphabet_size).map(|_| vec![0; n]));
    csfa(letter_names(alphabet_size), rows)
}

/// The family attaining `2n(n+1)`: `b` sends 0 to 1 and everything else to 0.
pub fn witness_aprime(n: usize) -> Result<Automaton> {
    if n < 3 {
        return Err(Error::InvalidFamily(format!(
            "witness family needs n >= 3, got {n}"
        )));
    }
    let b = (0..n).map(|q| usize::from(q == 0)).collect();
    csfa(letter_names(2), vec![cycle_row(n), b])
}

/// Four states, bpis {0, 2}.
pub fn figure_1() -> Automaton {
    csfa(letter_names(2), vec![vec![1, 2, 3, 0], vec![2, 2, 0, 0]])
        .expect("figure 1 table is valid")
}

/// Five states over {a, b, c}, bpis {0, 3}, syntactic complexity 110.
/// The table is checked against both values before it is returned.
pub fn figure_2_ternary() -> Result<Automaton> {
    let aut = csfa(
        letter_names(3),
        vec![
            vec![1, 2, 3, 4, 0],
            vec![3, 3, 3, 0, 0],
            vec![3, 0, 3, 0, 0],
        ],
    )?;
    let bpis = aut.bpi_set();
    if bpis != BTreeSet::from([0, 3]) {
        return Err(Error::SanityGate(format!(
            "bpi set {bpis:?}, expected {{0, 3}}"
        )));
    }
    let complexity = syntactic_complexity(&aut, DEFAULT_BUDGET)?;
    if complexity != 110 {
        return Err(Error::SanityGate(format!(
            "syntactic complexity {complexity}, expected 110"
        )));
    }
    Ok(aut)
}

/// A named construction request.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    UnaryCycle { n: usize },
    OneBpi { n: usize, alphabet_size: usize },
    WitnessAprime { n: usize },
    Figure1,
    Figure2Ternary,
}

/// Family names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyTag {
    Unary,
    OneBpi,
    Aprime,
    Figure1,
    Figure2,
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unary" | "unary-cycle" => Ok(FamilyTag::Unary),
            "one-bpi" => Ok(FamilyTag::OneBpi),
            "aprime" | "witness-aprime" => Ok(FamilyTag::Aprime),
            "figure1" | "figure-1" => Ok(FamilyTag::Figure1),
            "figure2" | "figure-2-ternary" => Ok(FamilyTag::Figure2),
            other => Err(Error::InvalidFamily(format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::Unary => "unary",
            FamilyTag::OneBpi => "one-bpi",
            FamilyTag::Aprime => "aprime",
            FamilyTag::Figure1 => "figure1",
            FamilyTag::Figure2 => "figure2",
        })
    }
}

impl FamilySpec {
    /// Combines a tag with optional size parameters, rejecting sizes that
    /// do not apply to the family.
    pub fn from_parts(
        tag: FamilyTag,
        n: Option<usize>,
        alphabet_size: Option<usize>,
    ) -> Result<Self> {
        let need_n = || n.ok_or_else(|| Error::InvalidFamily(format!("family `{tag}` needs --n")));
        if alphabet_size.is_some() && tag != FamilyTag::OneBpi {
            return Err(Error::InvalidFamily(format!(
                "family `{tag}` takes no alphabet size"
            )));
        }
        match tag {
            FamilyTag::Unary => Ok(FamilySpec::UnaryCycle { n: need_n()? }),
            FamilyTag::OneBpi => Ok(FamilySpec::OneBpi {
                n: need_n()?,
                alphabet_size: alphabet_size.unwrap_or(2),
            }),
            FamilyTag::Aprime => Ok(FamilySpec::WitnessAprime { n: need_n()? }),
            FamilyTag::Figure1 | FamilyTag::Figure2 if n.is_some() => Err(Error::InvalidFamily(
                format!("family `{tag}` has a fixed size"),
            )),
            FamilyTag::Figure1 => Ok(FamilySpec::Figure1),
            FamilyTag::Figure2 => Ok(FamilySpec::Figure2Ternary),
        }
    }

    pub fn build(&self) -> Result<Automaton> {
        match *self {
            FamilySpec::UnaryCycle { n } => unary_cycle(n),
            FamilySpec::OneBpi { n, alphabet_size } => one_bpi_csfa(n, alphabet_size),
            FamilySpec::WitnessAprime { n } => witness_aprime(n),
            FamilySpec::Figure1 => Ok(figure_1()),
            FamilySpec::Figure2Ternary => figure_2_ternary(),
        }
    }
}

/// Outcome for one enumerated automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub m: usize,
    pub b_row: Vec<usize>,
    pub complexity: usize,
    pub checks_passed: bool,
    pub failed_checks: Vec<String>,
    /// Whether the monoid contains a constant map.
    pub nu_present: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationResult {
    pub n: usize,
    pub class: String,
    pub instance_count: usize,
    pub max_complexity: usize,
    pub bound: usize,
    /// Every instance attaining the maximum, in enumeration order.
    #[serde(skip)]
    pub argmax: Vec<Automaton>,
    pub records: Vec<InstanceRecord>,
}

impl EnumerationResult {
    pub fn argmax_witness(&self) -> Option<&Automaton> {
        self.argmax.first()
    }

    pub fn failures(&self) -> impl Iterator<Item = &InstanceRecord> {
        self.records.iter().filter(|r| !r.checks_passed)
    }

    pub fn exceeding_bound(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.complexity > self.bound)
            .count()
    }

    pub fn matches_bound(&self) -> bool {
        self.max_complexity == self.bound
    }
}

pub const ENUMERATION_RANGE: std::ops::RangeInclusive<usize> = 3..=10;

/// Candidate `b` rows with image exactly `{0, m}`, in lexicographic order.
fn b_rows(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..(1u32 << n) - 1).map(move |mask| {
        (0..n)
            .map(|q| if mask >> (n - 1 - q) & 1 == 1 { m } else { 0 })
            .collect()
    })
}

/// Sweeps every binary CSFA with `a` the standard cycle, initial-final
/// state 0 and bpis `{0, m}`, and verifies each one.
pub fn enumerate_two_bpi_binary(n: usize) -> Result<EnumerationResult> {
    if !ENUMERATION_RANGE.contains(&n) {
        return Err(Error::InvalidFamily(format!(
            "enumeration supports 3 <= n <= 10, got {n}"
        )));
    }
    let candidates: Vec<(usize, Vec<usize>)> = (1..n)
        .flat_map(|m| b_rows(n, m).map(move |row| (m, row)))
        .collect();
    let instances: Vec<(Automaton, InstanceRecord)> = candidates
        .into_par_iter()
        .map(
            |(m, b_row)| -> Result<Option<(Automaton, InstanceRecord)>> {
                let aut = csfa(letter_names(2), vec![cycle_row(n), b_row.clone()])?;
                if !aut.is_csfa() || aut.bpi_set() != BTreeSet::from([0, m]) {
                    return Ok(None);
                }
                let report = verify_paper(&aut, DEFAULT_BUDGET)?;
                let record = InstanceRecord {
                    m,
                    b_row,
                    complexity: report.complexity.unwrap_or(0),
                    checks_passed: report.all_pass(),
                    failed_checks: report
                        .checks
                        .iter()
                        .filter(|c| !c.pass)
                        .map(|c| c.name.clone())
                        .collect(),
                    nu_present: report.nu_present,
                };
                Ok(Some((aut, record)))
            },
        )
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let max_complexity = instances
        .iter()
        .map(|(_, r)| r.complexity)
        .max()
        .unwrap_or(0);
    let argmax = instances
        .iter()
        .filter(|(_, r)| r.complexity == max_complexity)
        .map(|(a, _)| a.clone())
        .collect();
    let records: Vec<InstanceRecord> = instances.into_iter().map(|(_, r)| r).collect();
    Ok(EnumerationResult {
        n,
        class: "two-bpi binary CSFA".into(),
        instance_count: records.len(),
        max_complexity,
        bound: two_bpi_bound(n),
        argmax,
        records,
    })
}
