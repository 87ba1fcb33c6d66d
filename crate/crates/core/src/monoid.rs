//! Transition monoids, the cyclic group of a circular letter, and its orbits.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::transform::{Transformation, Word};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// An element of a transition monoid with the shortlex-least word inducing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidElement {
    pub transform: Transformation,
    pub witness: Word,
}

/// The transition monoid of an automaton, elements in breadth-first order.
#[derive(Clone, Debug)]
pub struct TransitionMonoid {
    n: usize,
    generators: Vec<Transformation>,
    elements: Vec<MonoidElement>,
    index: HashMap<Transformation, usize>,
}

impl TransitionMonoid {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn elements(&self) -> &[MonoidElement] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &MonoidElement {
        &self.elements[k]
    }

    /// The identity, always element 0 with witness `ε`.
    pub fn identity(&self) -> &MonoidElement {
        &self.elements[0]
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.index.contains_key(t)
    }

    pub fn get(&self, t: &Transformation) -> Option<&MonoidElement> {
        self.index_of(t).map(|k| &self.elements[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = &MonoidElement> {
        self.elements.iter()
    }

    /// Right multiplication by every generator stays inside the set.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|x| {
            self.generators
                .iter()
                .all(|g| self.contains(&x.transform.then(g)))
        })
    }
}

/// Breadth-first closure from the identity under right multiplication by
/// the letter transformations. Fails once more than `budget` elements exist.
pub fn generate_monoid(aut: &Automaton, budget: usize) -> Result<TransitionMonoid> {
    let n = aut.state_count();
    let generators = aut.letter_transformations().to_vec();
    let identity = Transformation::identity(n);
    let mut elements = vec![MonoidElement {
        transform: identity.clone(),
        witness: Word::empty(),
    }];
    let mut index = HashMap::from([(identity, 0)]);
    let mut head = 0;
    while head < elements.len() {
        for (letter, g) in generators.iter().enumerate() {
            let next = elements[head].transform.then(g);
            if index.contains_key(&next) {
                continue;
            }
            if elements.len() >= budget {
                return Err(Error::BudgetExceeded(budget));
            }
            let mut witness = elements[head].witness.clone();
            witness.push(letter);
            index.insert(next.clone(), elements.len());
            elements.push(MonoidElement {
                transform: next,
                witness,
            });
        }
        head += 1;
    }
    Ok(TransitionMonoid {
        n,
        generators,
        elements,
        index,
    })
}

/// Size of the transition monoid of the minimal automaton.
pub fn syntactic_complexity(aut: &Automaton, budget: usize) -> Result<usize> {
    Ok(generate_monoid(&aut.minimize(), budget)?.len())
}

/// The cyclic group generated by a circular letter, alongside every
/// permutation found in the monoid.
#[derive(Clone, Debug)]
pub struct GroupPart {
    letter: usize,
    /// `powers[i]` is `ā^i` for `0 <= i < n`.
    powers: Vec<Transformation>,
    /// Monoid indices of all permutation elements.
    permutations: Vec<usize>,
}

impl GroupPart {
    pub fn generator_letter(&self) -> usize {
        self.letter
    }

    pub fn order(&self) -> usize {
        self.powers.len()
    }

    /// `ā^k`, with `k` taken mod the order.
    pub fn power(&self, k: usize) -> &Transformation {
        &self.powers[k % self.powers.len()]
    }

    pub fn powers(&self) -> &[Transformation] {
        &self.powers
    }

    pub fn permutations(&self) -> &[usize] {
        &self.permutations
    }

    /// The powers of ā are pairwise distinct and the permutations of the
    /// monoid are exactly those powers.
    pub fn is_cyclic_group_of_all_permutations(&self, mon: &TransitionMonoid) -> bool {
        let powers: HashSet<&Transformation> = self.powers.iter().collect();
        let perms: HashSet<&Transformation> = self
            .permutations
            .iter()
            .map(|&k| &mon.element(k).transform)
            .collect();
        powers.len() == mon.degree() && powers == perms
    }

    /// For every pair of states some element of G carries one to the other.
    pub fn is_transitive(&self) -> bool {
        let n = self.powers[0].degree();
        (0..n).all(|p| {
            let reached: HashSet<usize> = self.powers.iter().map(|g| g.apply(p)).collect();
            reached.len() == n
        })
    }

    /// Exponents `i` with `x·ā^i = x`.
    pub fn stabilizer(&self, x: &Transformation) -> Vec<usize> {
        (0..self.order())
            .filter(|&i| &x.then(&self.powers[i]) == x)
            .collect()
    }
}

/// Extracts G from the monoid, using the first circular generator.
pub fn group_part(mon: &TransitionMonoid) -> Result<GroupPart> {
    let letter = mon
        .generators()
        .iter()
        .position(Transformation::is_circular_permutation)
        .ok_or(Error::NoCircularLetter)?;
    let a = &mon.generators()[letter];
    let mut powers = vec![Transformation::identity(mon.degree())];
    for _ in 1..mon.degree() {
        let next = powers.last().unwrap().then(a);
        powers.push(next);
    }
    let permutations = mon
        .iter()
        .enumerate()
        .filter(|(_, x)| x.transform.is_permutation())
        .map(|(k, _)| k)
        .collect();
    Ok(GroupPart {
        letter,
        powers,
        permutations,
    })
}

/// Partition of a monoid into G-orbits under right multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    /// Monoid indices; the first entry of each orbit is its representative,
    /// the earliest element in breadth-first order.
    pub orbits: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }

    /// Orbit number of each monoid element.
    pub fn orbit_of(&self, len: usize) -> Vec<usize> {
        let mut of = vec![usize::MAX; len];
        for (o, members) in self.orbits.iter().enumerate() {
            for &k in members {
                of[k] = o;
            }
        }
        of
    }
}

pub fn orbits(mon: &TransitionMonoid, g: &GroupPart) -> OrbitPartition {
    let mut assigned = vec![false; mon.len()];
    let mut orbits = Vec::new();
    for k in 0..mon.len() {
        if assigned[k] {
            continue;
        }
        let x = &mon.element(k).transform;
        let mut orbit = Vec::new();
        for h in g.powers() {
            let y = mon.index_of(&x.then(h)).expect("monoid is closed under G");
            if !assigned[y] {
                assigned[y] = true;
                orbit.push(y);
            }
        }
        orbits.push(orbit);
    }
    OrbitPartition { orbits }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aut(rows: &[&[usize]]) -> Automaton {
        let names = ["a", "b", "c"];
        Automaton::new(
            names[..rows.len()].iter().map(|s| s.to_string()).collect(),
            rows.iter().map(|r| r.to_vec()).collect(),
            0,
            [0],
        )
        .unwrap()
    }

    #[test]
    fn unary_cycle_monoid_is_cyclic() {
        let mon = generate_monoid(&aut(&[&[1, 2, 3, 0]]), DEFAULT_BUDGET).unwrap();
        assert_eq!(mon.len(), 4);
        let alphabet = vec!["a".to_string()];
        let words: Vec<String> = mon.iter().map(|e| e.witness.render(&alphabet)).collect();
        assert_eq!(words, ["ε", "a", "aa", "aaa"]);
        let g = group_part(&mon).unwrap();
        assert_eq!(g.permutations().len(), 4);
        assert_eq!(orbits(&mon, &g).len(), 1);
    }

    #[test]
    fn one_bpi_monoid() {
        let mon = generate_monoid(&aut(&[&[1, 2, 0], &[0, 0, 0]]), DEFAULT_BUDGET).unwrap();
        assert_eq!(mon.len(), 6);
        assert!(mon.is_closed());
        let g = group_part(&mon).unwrap();
        assert!(g.is_cyclic_group_of_all_permutations(&mon));
        let perms: Vec<String> = g
            .permutations()
            .iter()
            .map(|&k| mon.element(k).transform.to_string())
            .collect();
        assert_eq!(perms, ["[0 1 2]", "[1 2 0]", "[2 0 1]"]);
        let orb = orbits(&mon, &g);
        assert_eq!(orb.sizes(), vec![3, 3]);
    }

    #[test]
    fn witnesses_reinduce_their_elements() {
        let a = aut(&[&[1, 2, 3, 0], &[2, 2, 0, 0]]);
        let mon = generate_monoid(&a, DEFAULT_BUDGET).unwrap();
        for e in mon.iter() {
            assert_eq!(a.induced(&e.witness).unwrap(), e.transform);
        }
        assert_eq!(mon.len(), 12);
    }

    #[test]
    fn budget_is_enforced() {
        let a = aut(&[&[1, 2, 3, 0], &[2, 2, 0, 0]]);
        assert_eq!(
            generate_monoid(&a, 5).unwrap_err(),
            Error::BudgetExceeded(5)
        );
        assert_eq!(generate_monoid(&a, 12).unwrap().len(), 12);
    }

    #[test]
    fn group_part_requires_circular_letter() {
        let mon = generate_monoid(&aut(&[&[1, 0, 3, 2]]), DEFAULT_BUDGET).unwrap();
        assert_eq!(group_part(&mon).unwrap_err(), Error::NoCircularLetter);
    }

    #[test]
    fn stabilizers_are_trivial_on_a_csfa() {
        let a = aut(&[&[1, 2, 3, 0], &[2, 2, 0, 0]]);
        let mon = generate_monoid(&a, DEFAULT_BUDGET).unwrap();
        let g = group_part(&mon).unwrap();
        assert!(g.is_transitive());
        for e in mon.iter() {
            assert_eq!(g.stabilizer(&e.transform), vec![0]);
        }
    }
}
