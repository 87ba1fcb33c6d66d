//! Structure of the monoid of a binary CSFA with two branch points going in:
//! the exponents κ and τ, the basic idempotents, the rank-two normal forms
//! `a^i b a^j`, `a^i b² a^j`, `a^i b a^τ b a^j`, and the factorization of
//! every element as a basic idempotent followed by a power of `a`.
//!
//! Everything here assumes a normalized automaton: state 0 is initial and
//! final, and the circular letter maps `i ↦ i + 1 mod n`. Exponents of `a`
//! are written with representatives in `1..=n`, so `a^n` is the identity.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::monoid::{GroupPart, TransitionMonoid};
use crate::transform::{Transformation, Word};

/// Exponents attached to a two-bpi binary CSFA with bpis `{0, m}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoBpiProfile {
    pub n: usize,
    /// Letter index of the circular letter `a`.
    pub a: usize,
    /// Letter index of the other letter `b`.
    pub b: usize,
    /// The bpi other than 0.
    pub m: usize,
    /// Least state `t` with `t·b = m`.
    pub t: usize,
    pub kappa: usize,
    /// Present iff `0·b = 0`.
    pub tau: Option<usize>,
    pub q0_fixed_by_b: bool,
}

/// `powers[i] = ā^i` for `0 <= i <= n`.
fn a_powers(a: &Transformation) -> Vec<Transformation> {
    let n = a.degree();
    let mut powers = vec![Transformation::identity(n)];
    for _ in 0..n {
        let next = powers.last().unwrap().then(a);
        powers.push(next);
    }
    powers
}

/// Rank two with image `{0, m}` and both 0 and m fixed.
fn fixes_bpis(x: &Transformation, m: usize) -> bool {
    x.image_set() == BTreeSet::from([0, m]) && x.apply(0) == 0 && x.apply(m) == m
}

impl TwoBpiProfile {
    /// Computes m, t, κ and τ. The κ search walks `r = t, t + (n-m), ...`
    /// and stops at the first `r >= 1` with `0·a^r b = 0`.
    pub fn new(aut: &Automaton) -> Result<Self> {
        let pre = |msg: &str| Error::Precondition(msg.to_string());
        if aut.alphabet().len() != 2 {
            return Err(pre("alphabet must have exactly two letters"));
        }
        if !aut.is_normalized_csfa() {
            return Err(pre("automaton must be a normalized CSFA"));
        }
        let n = aut.state_count();
        if n <= 2 {
            return Err(pre("state count must exceed 2"));
        }
        let bpis: Vec<usize> = aut.bpi_set().into_iter().collect();
        if bpis.len() != 2 || bpis[0] != 0 {
            return Err(pre("bpi set must be {0, m}"));
        }
        let m = bpis[1];
        let a = aut.circular_letter_indices()[0];
        let b = 1 - a;
        let a_bar = aut.letter(a);
        let b_bar = aut.letter(b);

        let t = (0..m).find(|&q| b_bar.apply(q) == m).ok_or_else(|| {
            Error::Falsified(format!("no state below {m} maps to bpi {m} under b"))
        })?;

        let q0_after = |r: usize| b_bar.apply(a_bar.pow(r).apply(0));
        let mut r = t;
        let kappa = loop {
            if r >= n {
                return Err(Error::Falsified(format!(
                    "κ iteration from t = {t} passed n = {n} without fixing 0"
                )));
            }
            if r >= 1 && q0_after(r) == 0 {
                break r;
            }
            r += n - m;
        };
        let akb = a_bar.pow(kappa).then(b_bar);
        if !(fixes_bpis(&akb, m) && akb.is_idempotent()) {
            return Err(Error::Falsified(format!(
                "a^{kappa} b = {akb} is not a rank-two idempotent"
            )));
        }

        let q0_fixed_by_b = b_bar.apply(0) == 0;
        let tau = if q0_fixed_by_b {
            let tau = (1..m)
                .find(|&q| b_bar.apply(q) == m)
                .ok_or_else(|| Error::Falsified("no τ in 1..m".into()))?;
            let atb = a_bar.pow(tau).then(b_bar);
            let sq = atb.then(&atb);
            if !(fixes_bpis(&sq, m) && sq.is_idempotent()) {
                return Err(Error::Falsified(format!(
                    "(a^{tau} b)^2 = {sq} is not a rank-two idempotent"
                )));
            }
            Some(tau)
        } else {
            None
        };

        Ok(TwoBpiProfile {
            n,
            a,
            b,
            m,
            t,
            kappa,
            tau,
            q0_fixed_by_b,
        })
    }

    fn word(&self) -> WordBuilder<'_> {
        WordBuilder {
            profile: self,
            word: Word::empty(),
        }
    }
}

struct WordBuilder<'p> {
    profile: &'p TwoBpiProfile,
    word: Word,
}

impl WordBuilder<'_> {
    fn a(mut self, k: usize) -> Self {
        self.word.push_power(self.profile.a, k);
        self
    }

    fn b(mut self) -> Self {
        self.word.push(self.profile.b);
        self
    }

    fn build(self) -> Word {
        self.word
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BasicKind {
    Identity,
    /// The constant map onto state 0.
    Nu,
    /// `a^i (a^κ b) a^(n-i)`.
    Kappa(usize),
    /// `a^i b² a^(n-i)` or `a^i (a^τ b)² a^(n-i)`.
    Square(usize),
}

impl fmt::Display for BasicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicKind::Identity => write!(f, "ε"),
            BasicKind::Nu => write!(f, "ν"),
            BasicKind::Kappa(i) => write!(f, "κ-family i={i}"),
            BasicKind::Square(i) => write!(f, "square-family i={i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasicIdempotent {
    pub kind: BasicKind,
    pub word: Word,
    pub transform: Transformation,
}

/// The list of basic idempotents and its deduplicated set.
#[derive(Clone, Debug, Serialize)]
pub struct BasicIdempotents {
    pub epsilon: BasicIdempotent,
    pub nu: Option<BasicIdempotent>,
    pub family_kappa: Vec<BasicIdempotent>,
    pub family_square: Vec<BasicIdempotent>,
    /// Distinct transformations, first occurrence kept, in the order
    /// ε, ν, κ-family, square-family.
    pub distinct: Vec<BasicIdempotent>,
}

impl BasicIdempotents {
    pub fn len(&self) -> usize {
        self.distinct.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distinct.is_empty()
    }

    /// Every entry of the full list, duplicates included.
    pub fn all(&self) -> impl Iterator<Item = &BasicIdempotent> {
        std::iter::once(&self.epsilon)
            .chain(self.nu.iter())
            .chain(self.family_kappa.iter())
            .chain(self.family_square.iter())
    }
}

/// Builds ε, ν (when the monoid has a rank-one element), and the two
/// families of conjugated rank-two idempotents.
pub fn basic_idempotents(
    aut: &Automaton,
    profile: &TwoBpiProfile,
    mon: &TransitionMonoid,
) -> Result<BasicIdempotents> {
    let n = profile.n;
    let a_bar = aut.letter(profile.a);
    let powers = a_powers(a_bar);
    let make = |kind: BasicKind, word: Word| -> Result<BasicIdempotent> {
        let transform = aut.induced(&word)?;
        Ok(BasicIdempotent {
            kind,
            word,
            transform,
        })
    };

    let epsilon = make(BasicKind::Identity, Word::empty())?;

    let nu = match mon.iter().find(|x| x.transform.rank() == 1) {
        Some(x) => {
            let c = x.transform.apply(0);
            let shift = (n - c) % n;
            let mut word = x.witness.clone();
            word.push_power(profile.a, shift);
            let nu = make(BasicKind::Nu, word)?;
            debug_assert_eq!(nu.transform, x.transform.then(&powers[shift]));
            Some(nu)
        }
        None => None,
    };

    let family_kappa = (1..=n)
        .map(|i| {
            let word = profile.word().a(i).a(profile.kappa).b().a(n - i).build();
            make(BasicKind::Kappa(i), word)
        })
        .collect::<Result<Vec<_>>>()?;

    let family_square = (1..=n)
        .map(|i| {
            let word = match profile.tau {
                None => profile.word().a(i).b().b().a(n - i).build(),
                Some(tau) => profile.word().a(i).a(tau).b().a(tau).b().a(n - i).build(),
            };
            make(BasicKind::Square(i), word)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut seen = BTreeSet::new();
    let distinct: Vec<BasicIdempotent> = std::iter::once(&epsilon)
        .chain(nu.iter())
        .chain(family_kappa.iter())
        .chain(family_square.iter())
        .filter(|e| seen.insert(e.transform.clone()))
        .cloned()
        .collect();

    Ok(BasicIdempotents {
        epsilon,
        nu,
        family_kappa,
        family_square,
        distinct,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rank2Tag {
    /// `a^i b a^j`
    Beta,
    /// `a^i b² a^j`
    Gamma,
    /// `a^i b a^τ b a^j`
    Delta,
}

impl fmt::Display for Rank2Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rank2Tag::Beta => "β",
            Rank2Tag::Gamma => "γ",
            Rank2Tag::Delta => "δ",
        })
    }
}

/// A rank-two element written as `a^i · core · a^j` with `i, j ∈ 1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rank2Form {
    pub tag: Rank2Tag,
    pub i: usize,
    pub j: usize,
}

impl Rank2Form {
    pub fn word(&self, profile: &TwoBpiProfile) -> Word {
        let w = profile.word().a(self.i);
        let w = match self.tag {
            Rank2Tag::Beta => w.b(),
            Rank2Tag::Gamma => w.b().b(),
            Rank2Tag::Delta => w.b().a(profile.tau.unwrap_or(0)).b(),
        };
        w.a(self.j).build()
    }
}

/// Classifies rank-two elements into their normal forms.
pub struct Rank2Classifier {
    powers: Vec<Transformation>,
    cores: Vec<(Rank2Tag, Transformation)>,
}

impl Rank2Classifier {
    pub fn new(aut: &Automaton, profile: &TwoBpiProfile) -> Self {
        let a_bar = aut.letter(profile.a);
        let b_bar = aut.letter(profile.b);
        let mut cores = vec![(Rank2Tag::Beta, b_bar.clone())];
        match profile.tau {
            None => cores.push((Rank2Tag::Gamma, b_bar.then(b_bar))),
            Some(tau) => cores.push((Rank2Tag::Delta, b_bar.then(&a_bar.pow(tau)).then(b_bar))),
        }
        Rank2Classifier {
            powers: a_powers(a_bar),
            cores,
        }
    }

    /// Searches β, then γ or δ, with the lexicographically least `(i, j)`.
    pub fn classify(&self, x: &Transformation) -> Result<Rank2Form> {
        let rank = x.rank();
        if rank != 2 {
            return Err(Error::Precondition(format!(
                "rank-two form requested for an element of rank {rank}"
            )));
        }
        let n = self.powers.len() - 1;
        for (tag, core) in &self.cores {
            for i in 1..=n {
                let left = self.powers[i].then(core);
                for j in 1..=n {
                    if &left.then(&self.powers[j]) == x {
                        return Ok(Rank2Form { tag: *tag, i, j });
                    }
                }
            }
        }
        Err(Error::Falsified(format!(
            "rank-two element {x} matches none of the β/γ/δ forms"
        )))
    }
}

pub fn rank2_form(
    aut: &Automaton,
    profile: &TwoBpiProfile,
    x: &Transformation,
) -> Result<Rank2Form> {
    Rank2Classifier::new(aut, profile).classify(x)
}

/// One element written as `distinct[basic] · ā^power`, `power ∈ 1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub basic: usize,
    pub power: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalFormCheck {
    /// `certificate[k]` factors monoid element `k`.
    Holds { certificate: Vec<Factorization> },
    /// A product `e·g` lying outside the monoid.
    ProductOutsideMonoid { product: Transformation },
    /// A monoid element not of the form `e·g`.
    Uncovered { element: Transformation },
}

impl CanonicalFormCheck {
    pub fn holds(&self) -> bool {
        matches!(self, CanonicalFormCheck::Holds { .. })
    }
}

/// Compares the monoid with the set of products `e·g`, `e` basic, `g ∈ G`.
pub fn verify_canonical_form(
    mon: &TransitionMonoid,
    basics: &BasicIdempotents,
    g: &GroupPart,
) -> CanonicalFormCheck {
    let n = g.order();
    let mut certificate: Vec<Option<Factorization>> = vec![None; mon.len()];
    for (basic, e) in basics.distinct.iter().enumerate() {
        for power in 1..=n {
            let product = e.transform.then(g.power(power));
            match mon.index_of(&product) {
                Some(k) => {
                    certificate[k].get_or_insert(Factorization { basic, power });
                }
                None => return CanonicalFormCheck::ProductOutsideMonoid { product },
            }
        }
    }
    let mut complete = Vec::with_capacity(mon.len());
    for (k, f) in certificate.into_iter().enumerate() {
        match f {
            Some(f) => complete.push(f),
            None => {
                return CanonicalFormCheck::Uncovered {
                    element: mon.element(k).transform.clone(),
                }
            }
        }
    }
    CanonicalFormCheck::Holds {
        certificate: complete,
    }
}

/// Number of distinct G-orbits met by the basic idempotents.
pub fn basic_orbit_count(basics: &BasicIdempotents, g: &GroupPart) -> usize {
    let mut orbit_keys = HashSet::new();
    for e in &basics.distinct {
        // canonical orbit representative: least transformation in the orbit
        let key = g
            .powers()
            .iter()
            .map(|h| e.transform.then(h))
            .min()
            .unwrap();
        orbit_keys.insert(key);
    }
    orbit_keys.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{generate_monoid, group_part, DEFAULT_BUDGET};

    fn binary(a: &[usize], b: &[usize]) -> Automaton {
        Automaton::new(
            vec!["a".into(), "b".into()],
            vec![a.to_vec(), b.to_vec()],
            0,
            [0],
        )
        .unwrap()
    }

    fn figure_1() -> Automaton {
        binary(&[1, 2, 3, 0], &[2, 2, 0, 0])
    }

    fn tau_case() -> Automaton {
        binary(&[1, 2, 3, 0], &[0, 2, 0, 0])
    }

    fn aprime(n: usize) -> Automaton {
        let a: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let b: Vec<usize> = (0..n).map(|i| usize::from(i == 0)).collect();
        binary(&a, &b)
    }

    #[test]
    fn figure_1_kappa() {
        let aut = figure_1();
        let p = TwoBpiProfile::new(&aut).unwrap();
        assert_eq!((p.m, p.t, p.kappa, p.tau), (2, 0, 2, None));
        let b = aut.letter(1);
        let a2b = aut.induced(&Word::new(vec![0, 0, 1])).unwrap();
        assert_eq!(b.then(b), a2b);
    }

    #[test]
    fn tau_case_profile() {
        let aut = tau_case();
        let p = TwoBpiProfile::new(&aut).unwrap();
        assert_eq!((p.m, p.kappa, p.tau), (2, 3, Some(1)));
        assert!(p.q0_fixed_by_b);
        let a3b = aut.induced(&Word::new(vec![0, 0, 0, 1])).unwrap();
        assert_eq!(a3b.image(), &[0, 0, 2, 0]);
        assert!(a3b.is_idempotent());
    }

    #[test]
    fn aprime_kappa_is_n_minus_one() {
        for n in 3..=8 {
            let p = TwoBpiProfile::new(&aprime(n)).unwrap();
            assert_eq!(p.kappa, n - 1);
            assert_eq!(p.m, 1);
        }
    }

    #[test]
    fn profile_preconditions() {
        let unary = Automaton::new(vec!["a".into()], vec![vec![1, 2, 0]], 0, [0]).unwrap();
        assert!(matches!(
            TwoBpiProfile::new(&unary),
            Err(Error::Precondition(_))
        ));
        let shifted = figure_1().relabel(&[1, 2, 3, 0]).unwrap();
        assert!(matches!(
            TwoBpiProfile::new(&shifted),
            Err(Error::Precondition(_))
        ));
        let one_bpi = binary(&[1, 2, 0], &[0, 0, 0]);
        assert!(matches!(
            TwoBpiProfile::new(&one_bpi),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn basic_idempotents_of_aprime_are_all_distinct() {
        let aut = aprime(5);
        let p = TwoBpiProfile::new(&aut).unwrap();
        let mon = generate_monoid(&aut, DEFAULT_BUDGET).unwrap();
        let basics = basic_idempotents(&aut, &p, &mon).unwrap();
        assert_eq!(basics.len(), 12);
        assert!(basics.all().all(|e| e.transform.is_idempotent()));
        assert_eq!(
            basics.nu.as_ref().unwrap().transform,
            Transformation::constant(5, 0)
        );
    }

    #[test]
    fn basic_idempotents_collapse_on_figure_1() {
        let aut = figure_1();
        let p = TwoBpiProfile::new(&aut).unwrap();
        let mon = generate_monoid(&aut, DEFAULT_BUDGET).unwrap();
        let basics = basic_idempotents(&aut, &p, &mon).unwrap();
        assert!(basics.len() < 10);
        assert!(basics.all().all(|e| e.transform.is_idempotent()));
    }

    #[test]
    fn rank2_forms_of_aprime() {
        let aut = aprime(4);
        let p = TwoBpiProfile::new(&aut).unwrap();
        let ab = aut.induced(&Word::new(vec![0, 1])).unwrap();
        let form = rank2_form(&aut, &p, &ab).unwrap();
        assert_eq!(
            form,
            Rank2Form {
                tag: Rank2Tag::Beta,
                i: 1,
                j: 4
            }
        );
        let abb = aut.induced(&Word::new(vec![0, 1, 1])).unwrap();
        let form = rank2_form(&aut, &p, &abb).unwrap();
        assert_eq!(form.tag, Rank2Tag::Gamma);
        assert_eq!(aut.induced(&form.word(&p)).unwrap(), abb);
        assert!(matches!(
            rank2_form(&aut, &p, &Transformation::identity(4)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn tau_case_forms_reinduce() {
        let aut = tau_case();
        let p = TwoBpiProfile::new(&aut).unwrap();
        let classifier = Rank2Classifier::new(&aut, &p);
        let mon = generate_monoid(&aut, DEFAULT_BUDGET).unwrap();
        for x in mon.iter().filter(|x| x.transform.rank() == 2) {
            let form = classifier.classify(&x.transform).unwrap();
            assert_ne!(form.tag, Rank2Tag::Gamma);
            assert_eq!(aut.induced(&form.word(&p)).unwrap(), x.transform);
        }
        let b = aut.letter(1);
        let bab = aut.induced(&Word::new(vec![1, 0, 1])).unwrap();
        assert_eq!(b.complement().unwrap(), bab);
        assert_eq!(bab.image(), &[2, 0, 2, 2]);
    }

    #[test]
    fn canonical_form_holds_with_identity_certificate() {
        for aut in [figure_1(), tau_case(), aprime(5)] {
            let p = TwoBpiProfile::new(&aut).unwrap();
            let mon = generate_monoid(&aut, DEFAULT_BUDGET).unwrap();
            let g = group_part(&mon).unwrap();
            let basics = basic_idempotents(&aut, &p, &mon).unwrap();
            let CanonicalFormCheck::Holds { certificate } =
                verify_canonical_form(&mon, &basics, &g)
            else {
                panic!("canonical form fails");
            };
            assert_eq!(
                certificate[0],
                Factorization {
                    basic: 0,
                    power: p.n
                }
            );
            for (k, f) in certificate.iter().enumerate() {
                let e = &basics.distinct[f.basic].transform;
                assert_eq!(e.then(g.power(f.power)), mon.element(k).transform);
            }
            assert_eq!(basic_orbit_count(&basics, &g) * p.n, mon.len());
        }
    }
}
