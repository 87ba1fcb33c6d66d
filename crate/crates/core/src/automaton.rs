//! Complete deterministic automata and their structural predicates.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::transform::{Transformation, Word};

/// Unvalidated automaton data, as read from a file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawAutomaton {
    pub states: usize,
    pub alphabet: Vec<String>,
    pub initial: usize,
    pub finals: Vec<usize>,
    /// `(letter, row)` pairs; `row[q]` is the successor of `q`.
    pub rows: Vec<(String, Vec<usize>)>,
}

/// A complete deterministic automaton on states `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Automaton {
    alphabet: Vec<String>,
    letters: Vec<Transformation>,
    initial: usize,
    finals: BTreeSet<usize>,
}

fn valid_letter_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(|c: char| c.is_whitespace() || c == ':')
}

/// Checks a raw table against the automaton invariants.
pub fn validate(raw: RawAutomaton) -> Result<Automaton> {
    let n = raw.states;
    if n == 0 {
        return Err(Error::NoStates);
    }
    if raw.alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    for (k, name) in raw.alphabet.iter().enumerate() {
        if !valid_letter_name(name) {
            return Err(Error::InvalidLetter(name.clone()));
        }
        if raw.alphabet[..k].contains(name) {
            return Err(Error::DuplicateLetter(name.clone()));
        }
    }
    let out_of_range = |value: usize, context: String| Error::StateOutOfRange { value, n, context };
    if raw.initial >= n {
        return Err(out_of_range(raw.initial, "initial state".into()));
    }
    if let Some(&q) = raw.finals.iter().find(|&&q| q >= n) {
        return Err(out_of_range(q, "final states".into()));
    }

    let mut by_letter: HashMap<&str, &Vec<usize>> = HashMap::new();
    for (name, row) in &raw.rows {
        if !raw.alphabet.contains(name) {
            return Err(Error::UnknownLetter(name.clone()));
        }
        if by_letter.insert(name.as_str(), row).is_some() {
            return Err(Error::DuplicateLetter(name.clone()));
        }
    }
    let mut letters = Vec::with_capacity(raw.alphabet.len());
    for name in &raw.alphabet {
        let row = by_letter
            .get(name.as_str())
            .ok_or_else(|| Error::MissingRow(name.clone()))?;
        if row.len() != n {
            return Err(Error::RowLength {
                letter: name.clone(),
                found: row.len(),
                expected: n,
            });
        }
        if let Some(&q) = row.iter().find(|&&q| q >= n) {
            return Err(out_of_range(q, format!("row `{name}`")));
        }
        letters.push(Transformation::from_image_unchecked(row.to_vec()));
    }
    Ok(Automaton {
        alphabet: raw.alphabet,
        letters,
        initial: raw.initial,
        finals: raw.finals.into_iter().collect(),
    })
}

/// Why an automaton fails to be a semi-flower automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SfaViolation {
    NotTrim,
    InitialNotUniqueFinal,
    /// A cycle that avoids the initial state, given as its states.
    CycleAvoidingInitial(Vec<usize>),
}

impl fmt::Display for SfaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SfaViolation::NotTrim => write!(f, "not trim"),
            SfaViolation::InitialNotUniqueFinal => {
                write!(f, "initial state is not the unique final state")
            }
            SfaViolation::CycleAvoidingInitial(cycle) => {
                let states: Vec<String> = cycle.iter().map(|q| q.to_string()).collect();
                write!(
                    f,
                    "cycle avoiding q0 through states {{{}}}",
                    states.join(",")
                )
            }
        }
    }
}

/// Classification by number of branch points going in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BpiClass {
    NoBpi,
    OneBpi,
    TwoBpi,
    KBpi(usize),
}

impl BpiClass {
    pub fn from_count(k: usize) -> Self {
        match k {
            0 => BpiClass::NoBpi,
            1 => BpiClass::OneBpi,
            2 => BpiClass::TwoBpi,
            k => BpiClass::KBpi(k),
        }
    }

    pub fn count(self) -> usize {
        match self {
            BpiClass::NoBpi => 0,
            BpiClass::OneBpi => 1,
            BpiClass::TwoBpi => 2,
            BpiClass::KBpi(k) => k,
        }
    }
}

impl fmt::Display for BpiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BpiClass::NoBpi => write!(f, "no-bpi"),
            BpiClass::OneBpi => write!(f, "one-bpi"),
            BpiClass::TwoBpi => write!(f, "two-bpi"),
            BpiClass::KBpi(k) => write!(f, "k-bpi({k})"),
        }
    }
}

impl Serialize for BpiClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Structural classification of an automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub states: usize,
    pub alphabet: Vec<String>,
    pub is_trim: bool,
    pub is_sfa: bool,
    /// Present when `is_sfa` is false.
    pub sfa_violation: Option<String>,
    pub bpi_set: BTreeSet<usize>,
    pub circular_letters: Vec<String>,
    pub is_csfa: bool,
    pub is_minimal: bool,
    pub bpi_class: BpiClass,
}

impl AnalysisReport {
    /// One-line summary such as `CSFA, two bpis {0,2}, minimal`.
    pub fn summary(&self) -> String {
        let bpis = {
            let list: Vec<String> = self.bpi_set.iter().map(|q| q.to_string()).collect();
            format!("{{{}}}", list.join(","))
        };
        let bpi_text = match self.bpi_class {
            BpiClass::NoBpi => "no bpis".to_string(),
            BpiClass::OneBpi => format!("one bpi {bpis}"),
            BpiClass::TwoBpi => format!("two bpis {bpis}"),
            BpiClass::KBpi(k) => format!("{k} bpis {bpis}"),
        };
        let minimal = if self.is_minimal {
            "minimal"
        } else {
            "not minimal"
        };
        if self.is_csfa {
            format!("CSFA, {bpi_text}, {minimal}")
        } else if self.is_sfa {
            format!("SFA (not circular), {bpi_text}, {minimal}")
        } else {
            let reason = self.sfa_violation.as_deref().unwrap_or("unknown");
            format!("not an SFA: {reason}; {bpi_text}, {minimal}")
        }
    }
}

impl Automaton {
    /// Builds and validates an automaton from rows given in alphabet order.
    pub fn new(
        alphabet: Vec<String>,
        rows: Vec<Vec<usize>>,
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let states = rows.first().map(Vec::len).unwrap_or(0);
        let rows = alphabet.iter().cloned().zip(rows).collect();
        validate(RawAutomaton {
            states,
            alphabet,
            initial,
            finals: finals.into_iter().collect(),
            rows,
        })
    }

    pub fn state_count(&self) -> usize {
        self.letters[0].degree()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    /// The transformation induced by letter `letter`.
    pub fn letter(&self, letter: usize) -> &Transformation {
        &self.letters[letter]
    }

    pub fn letter_transformations(&self) -> &[Transformation] {
        &self.letters
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l == name)
    }

    pub fn step(&self, q: usize, letter: usize) -> usize {
        self.letters[letter].apply(q)
    }

    pub fn to_raw(&self) -> RawAutomaton {
        RawAutomaton {
            states: self.state_count(),
            alphabet: self.alphabet.clone(),
            initial: self.initial,
            finals: self.finals.iter().copied().collect(),
            rows: self
                .alphabet
                .iter()
                .cloned()
                .zip(self.letters.iter().map(|t| t.image().to_vec()))
                .collect(),
        }
    }

    /// Checks that every letter of `w` belongs to the alphabet.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|&&l| l >= self.alphabet.len()) {
            Some(&index) => Err(Error::LetterOutOfRange {
                index,
                size: self.alphabet.len(),
            }),
            None => Ok(()),
        }
    }

    /// The transformation induced by `w`, letters applied left to right.
    pub fn induced(&self, w: &Word) -> Result<Transformation> {
        self.check_word(w)?;
        Ok(w.letters()
            .iter()
            .fold(Transformation::identity(self.state_count()), |acc, &l| {
                acc.then(&self.letters[l])
            }))
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        self.check_word(w)?;
        let end = w
            .letters()
            .iter()
            .fold(self.initial, |q, &l| self.letters[l].apply(q));
        Ok(self.finals.contains(&end))
    }

    fn successors(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.letters.iter().map(move |t| t.apply(q))
    }

    /// Reachable states in breadth-first order, letters in alphabet order.
    pub fn accessible_states(&self) -> Vec<usize> {
        let n = self.state_count();
        let mut seen = vec![false; n];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for p in self.successors(q) {
                if !seen[p] {
                    seen[p] = true;
                    order.push(p);
                }
            }
        }
        order
    }

    fn coaccessible(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut preds = vec![Vec::new(); n];
        for q in 0..n {
            for p in self.successors(q) {
                preds[p].push(q);
            }
        }
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = self.finals.iter().copied().collect();
        for &f in &self.finals {
            seen[f] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    pub fn is_accessible(&self) -> bool {
        self.accessible_states().len() == self.state_count()
    }

    /// Every state is reachable from the initial state and reaches a final state.
    pub fn is_trim(&self) -> bool {
        self.is_accessible() && self.coaccessible().into_iter().all(|c| c)
    }

    /// Indegree of each state, counting every `(p, letter, q)` arc once.
    pub fn indegrees(&self) -> Vec<usize> {
        let mut indeg = vec![0; self.state_count()];
        for t in &self.letters {
            for &q in t.image() {
                indeg[q] += 1;
            }
        }
        indeg
    }

    /// States with indegree at least two.
    pub fn bpi_set(&self) -> BTreeSet<usize> {
        self.indegrees()
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d >= 2)
            .map(|(q, _)| q)
            .collect()
    }

    /// Finds a cycle in the transition digraph restricted to states other
    /// than the initial one.
    fn cycle_avoiding_initial(&self) -> Option<Vec<usize>> {
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let n = self.state_count();
        let mut colour = vec![WHITE; n];
        colour[self.initial] = BLACK;
        for root in 0..n {
            if colour[root] != WHITE {
                continue;
            }
            // (state, next letter to explore)
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            colour[root] = GREY;
            while let Some(&mut (q, ref mut next)) = stack.last_mut() {
                if *next == self.letters.len() {
                    colour[q] = BLACK;
                    stack.pop();
                    continue;
                }
                let p = self.letters[*next].apply(q);
                *next += 1;
                match colour[p] {
                    WHITE => {
                        colour[p] = GREY;
                        stack.push((p, 0));
                    }
                    GREY => {
                        let start = stack.iter().position(|&(s, _)| s == p).unwrap();
                        return Some(stack[start..].iter().map(|&(s, _)| s).collect());
                    }
                    _ => {}
                }
            }
        }
        None
    }

    /// The first reason, if any, that this automaton is not an SFA.
    pub fn sfa_violation(&self) -> Option<SfaViolation> {
        if !self.is_trim() {
            return Some(SfaViolation::NotTrim);
        }
        if self.finals.len() != 1 || !self.finals.contains(&self.initial) {
            return Some(SfaViolation::InitialNotUniqueFinal);
        }
        self.cycle_avoiding_initial()
            .map(SfaViolation::CycleAvoidingInitial)
    }

    /// Trim, initial state equal to the unique final state, and every cycle
    /// visits it.
    pub fn is_sfa(&self) -> bool {
        self.sfa_violation().is_none()
    }

    /// Indices of letters inducing a single `n`-cycle, in alphabet order.
    pub fn circular_letter_indices(&self) -> Vec<usize> {
        (0..self.letters.len())
            .filter(|&l| self.letters[l].is_circular_permutation())
            .collect()
    }

    pub fn circular_letters(&self) -> Vec<String> {
        self.circular_letter_indices()
            .into_iter()
            .map(|l| self.alphabet[l].clone())
            .collect()
    }

    pub fn is_circular(&self) -> bool {
        !self.circular_letter_indices().is_empty()
    }

    pub fn is_csfa(&self) -> bool {
        self.is_circular() && self.is_sfa()
    }

    /// Moore refinement on the given states, starting from the
    /// final/non-final split. Returns the class of each listed state,
    /// numbered by first appearance in `states`.
    fn moore_classes(&self, states: &[usize]) -> HashMap<usize, usize> {
        let mut class: HashMap<usize, usize> = states
            .iter()
            .map(|&q| (q, usize::from(self.finals.contains(&q))))
            .collect();
        let mut count = 0;
        loop {
            let mut signatures: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = HashMap::with_capacity(states.len());
            for &q in states {
                let mut sig = Vec::with_capacity(self.letters.len() + 1);
                sig.push(class[&q]);
                sig.extend(self.successors(q).map(|p| class[&p]));
                let fresh = signatures.len();
                let id = *signatures.entry(sig).or_insert(fresh);
                next.insert(q, id);
            }
            class = next;
            if signatures.len() == count {
                return class;
            }
            count = signatures.len();
        }
    }

    /// Accessible, and no two distinct states are language-equivalent.
    pub fn is_minimal(&self) -> bool {
        let states = self.accessible_states();
        if states.len() != self.state_count() {
            return false;
        }
        let classes = self.moore_classes(&states);
        let distinct: BTreeSet<usize> = classes.values().copied().collect();
        distinct.len() == states.len()
    }

    /// The minimal automaton of the accepted language. States are numbered
    /// by breadth-first discovery from the initial state, which becomes 0.
    pub fn minimize(&self) -> Automaton {
        let states = self.accessible_states();
        let classes = self.moore_classes(&states);
        // Renumber classes by BFS order of the quotient.
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut representatives = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        renumber.insert(classes[&self.initial], 0);
        representatives.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for p in self.successors(q) {
                let c = classes[&p];
                if let std::collections::hash_map::Entry::Vacant(e) = renumber.entry(c) {
                    e.insert(representatives.len());
                    representatives.push(p);
                    queue.push_back(p);
                }
            }
        }
        let letters = self
            .letters
            .iter()
            .map(|t| {
                Transformation::from_image_unchecked(
                    representatives
                        .iter()
                        .map(|&q| renumber[&classes[&t.apply(q)]])
                        .collect(),
                )
            })
            .collect();
        let finals = representatives
            .iter()
            .enumerate()
            .filter(|&(_, q)| self.finals.contains(q))
            .map(|(k, _)| k)
            .collect();
        Automaton {
            alphabet: self.alphabet.clone(),
            letters,
            initial: 0,
            finals,
        }
    }

    pub fn classify(&self) -> AnalysisReport {
        let violation = self.sfa_violation();
        let bpi_set = self.bpi_set();
        let circular_letters = self.circular_letters();
        let is_sfa = violation.is_none();
        AnalysisReport {
            states: self.state_count(),
            alphabet: self.alphabet.clone(),
            is_trim: self.is_trim(),
            is_sfa,
            sfa_violation: violation.map(|v| v.to_string()),
            bpi_class: BpiClass::from_count(bpi_set.len()),
            bpi_set,
            is_csfa: is_sfa && !circular_letters.is_empty(),
            circular_letters,
            is_minimal: self.is_minimal(),
        }
    }

    /// Relabels the states of a CSFA so that the initial-final state is 0
    /// and the first circular letter maps `i ↦ i + 1 mod n`.
    pub fn normalize_csfa(&self) -> Result<Automaton> {
        if let Some(v) = self.sfa_violation() {
            return Err(Error::NotCsfa(v.to_string()));
        }
        let Some(&a) = self.circular_letter_indices().first() else {
            return Err(Error::NotCsfa("no circular letter".into()));
        };
        let n = self.state_count();
        let mut label = vec![0; n];
        let mut q = self.initial;
        for k in 0..n {
            label[q] = k;
            q = self.letters[a].apply(q);
        }
        let mut order = vec![0; n];
        for (old, &new) in label.iter().enumerate() {
            order[new] = old;
        }
        let letters = self
            .letters
            .iter()
            .map(|t| {
                Transformation::from_image_unchecked(
                    order.iter().map(|&old| label[t.apply(old)]).collect(),
                )
            })
            .collect();
        Ok(Automaton {
            alphabet: self.alphabet.clone(),
            letters,
            initial: 0,
            finals: self.finals.iter().map(|&f| label[f]).collect(),
        })
    }

    /// True when this is a CSFA already in normal form with respect to its
    /// first circular letter.
    pub fn is_normalized_csfa(&self) -> bool {
        self.is_csfa()
            && self.initial == 0
            && self.letters[self.circular_letter_indices()[0]]
                == Transformation::standard_cycle(self.state_count())
    }

    /// Applies a state relabeling `q ↦ perm[q]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Automaton> {
        let n = self.state_count();
        let p = Transformation::new(perm.to_vec())?;
        if p.degree() != n {
            return Err(Error::DimensionMismatch(n, p.degree()));
        }
        if !p.is_permutation() {
            return Err(Error::Precondition("relabeling must be a bijection".into()));
        }
        let mut inverse = vec![0; n];
        for (q, &r) in perm.iter().enumerate() {
            inverse[r] = q;
        }
        let letters = self
            .letters
            .iter()
            .map(|t| {
                Transformation::from_image_unchecked(
                    inverse.iter().map(|&old| perm[t.apply(old)]).collect(),
                )
            })
            .collect();
        Ok(Automaton {
            alphabet: self.alphabet.clone(),
            letters,
            initial: perm[self.initial],
            finals: self.finals.iter().map(|&f| perm[f]).collect(),
        })
    }
}
