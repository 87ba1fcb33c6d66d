//! Runs every structural check that applies to the class of an automaton
//! and collects the outcomes into a single report.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::automaton::{Automaton, BpiClass};
use crate::error::Result;
use crate::monoid::{generate_monoid, group_part, orbits, syntactic_complexity, TransitionMonoid};
use crate::transform::Word;
use crate::two_bpi::{
    basic_idempotents, basic_orbit_count, verify_canonical_form, CanonicalFormCheck,
    Rank2Classifier, TwoBpiProfile,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub class: String,
    pub n: usize,
    pub complexity: Option<usize>,
    pub orbit_sizes: Vec<usize>,
    pub kappa: Option<usize>,
    pub tau: Option<usize>,
    pub basic_idempotent_count: Option<usize>,
    pub checks: Vec<Check>,
    /// Whether a constant map lies in the monoid (two-bpi binary case).
    #[serde(skip)]
    pub nu_present: Option<bool>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }
}

/// `2n(n+1)`.
pub fn two_bpi_bound(n: usize) -> usize {
    2 * n * (n + 1)
}

/// Dispatches the checks applicable to `aut`. Only a monoid larger than
/// `budget` is reported as an error; failed checks are report entries.
pub fn verify_paper(aut: &Automaton, budget: usize) -> Result<VerificationReport> {
    let n = aut.state_count();
    let mut report = VerificationReport {
        class: String::new(),
        n,
        complexity: None,
        orbit_sizes: Vec::new(),
        kappa: None,
        tau: None,
        basic_idempotent_count: None,
        checks: Vec::new(),
        nu_present: None,
    };

    if let Some(violation) = aut.sfa_violation() {
        report.class = "not-sfa".into();
        report.push("sfa", false, format!("not an SFA: {violation}"));
        return Ok(report);
    }
    report.push(
        "sfa",
        true,
        "trim; every cycle visits the initial-final state",
    );

    let letters = aut.letter_transformations();
    let perms: Vec<usize> = (0..letters.len())
        .filter(|&l| letters[l].is_permutation())
        .collect();
    report.push(
        "permutation-letters-circular",
        perms.iter().all(|&l| letters[l].is_circular_permutation()),
        format!("{} permutation letter(s)", perms.len()),
    );
    report.push(
        "permutation-letters-equal",
        perms.windows(2).all(|w| letters[w[0]] == letters[w[1]]),
        "all permutation letters induce one function",
    );
    let bpis = aut.bpi_set();
    let k = bpis.len();
    report.push(
        "bpi-empty-iff-unary",
        (k == 0) == (aut.alphabet().len() == 1),
        format!("|BPI| = {k}, |A| = {}", aut.alphabet().len()),
    );

    if !aut.is_circular() {
        report.class = "sfa".into();
        report.complexity = Some(syntactic_complexity(aut, budget)?);
        return Ok(report);
    }

    let aut = aut.normalize_csfa()?;
    let bpis = aut.bpi_set();
    let class = BpiClass::from_count(k);
    report.class = format!("csfa:{class}");

    let minimal = aut.is_minimal();
    let minimized = aut.minimize().state_count();
    report.push(
        "minimal",
        minimal && minimized == n,
        format!("minimal automaton has {minimized} states"),
    );

    let mon = generate_monoid(&aut, budget)?;
    let complexity = syntactic_complexity(&aut, budget)?;
    report.complexity = Some(complexity);
    report.push(
        "monoid-of-minimal",
        mon.len() == complexity,
        format!("|M| = {}, syntactic complexity {complexity}", mon.len()),
    );
    report.push(
        "monoid-closed",
        mon.is_closed(),
        "closed under every generator",
    );

    let g = group_part(&mon)?;
    report.push(
        "group-cyclic-order-n",
        g.is_cyclic_group_of_all_permutations(&mon),
        format!(
            "{} permutations in M, |G| = {}",
            g.permutations().len(),
            g.order()
        ),
    );
    report.push(
        "group-transitive",
        g.is_transitive(),
        "G is transitive on states",
    );

    let partition = orbits(&mon, &g);
    report.orbit_sizes = partition.sizes();
    report.push(
        "orbit-size-n",
        partition.sizes().iter().all(|&s| s == n),
        format!("{} orbits", partition.len()),
    );
    let nontrivial = mon
        .iter()
        .filter(|x| g.stabilizer(&x.transform) != [0])
        .count();
    report.push(
        "stabilizers-trivial",
        nontrivial == 0,
        format!("{nontrivial} element(s) with a nontrivial stabilizer"),
    );

    if k >= 1 {
        report.push(
            "q0-in-bpi",
            bpis.contains(&0),
            "initial-final state is a bpi",
        );
        let worst = mon
            .iter()
            .filter(|x| !x.transform.is_permutation())
            .map(|x| x.transform.rank())
            .max()
            .unwrap_or(0);
        report.push(
            "non-permutation-rank-at-most-k",
            worst <= k,
            format!("max non-permutation rank {worst}, k = {k}"),
        );
    }

    let binary = aut.alphabet().len() == 2;
    let permutation_sfa = letters.iter().all(|t| t.is_permutation());
    let bound = two_bpi_bound(n);
    match class {
        _ if permutation_sfa || n == 1 => report.push(
            "complexity-formula",
            complexity == n,
            format!("permutation SFA: {complexity} = n = {n}"),
        ),
        BpiClass::NoBpi => report.push(
            "complexity-formula",
            complexity == n,
            format!("{complexity} = n = {n}"),
        ),
        BpiClass::OneBpi => {
            report.push(
                "complexity-formula",
                complexity == 2 * n,
                format!("{complexity} = 2n = {}", 2 * n),
            );
            report.push(
                "two-orbits",
                partition.len() == 2,
                format!("{} orbits", partition.len()),
            );
        }
        BpiClass::TwoBpi if binary => report.push(
            "complexity-formula",
            complexity <= bound,
            format!("{complexity} <= 2n(n+1) = {bound}"),
        ),
        BpiClass::TwoBpi => {
            let relation = if complexity > bound {
                "exceeds"
            } else {
                "within"
            };
            report.push(
                "complexity-formula",
                true,
                format!(
                    "alphabet size {}: no binary bound applies; {complexity} {relation} 2n(n+1) = {bound} (expected exception)",
                    aut.alphabet().len()
                ),
            )
        }
        BpiClass::KBpi(_) => report.push(
            "complexity-formula",
            true,
            format!("no formula for {k} bpis; complexity {complexity}"),
        ),
    }

    if class == BpiClass::TwoBpi && binary && n > 2 && !permutation_sfa {
        two_bpi_checks(&aut, &mon, &mut report);
    }
    Ok(report)
}

fn two_bpi_checks(aut: &Automaton, mon: &TransitionMonoid, report: &mut VerificationReport) {
    let n = aut.state_count();
    let profile = match TwoBpiProfile::new(aut) {
        Ok(p) => p,
        Err(e) => {
            report.push("kappa", false, e.to_string());
            return;
        }
    };
    report.kappa = Some(profile.kappa);
    report.tau = profile.tau;
    let b_bar = aut.letter(profile.b);

    report.push(
        "image-of-b-is-bpi-set",
        b_bar.image_set() == aut.bpi_set(),
        format!("Q·b = {:?}", b_bar.image_set()),
    );
    let (m, t, kappa) = (profile.m, profile.t, profile.kappa);
    let step = n - m;
    // least r = t + k(n-m) with r >= m; the search may stop earlier
    let latest = t + (m - t).div_ceil(step) * step;
    report.push(
        "kappa",
        kappa > t && kappa < n && (kappa - t) % step == 0 && kappa <= latest,
        format!("m = {m}, t = {t}, κ = {kappa}, latest admissible {latest}"),
    );
    if let Some(tau) = profile.tau {
        report.push(
            "tau",
            (1..profile.m).contains(&tau),
            format!("τ = {tau}, m = {}", profile.m),
        );
    }

    let ranks: BTreeSet<usize> = mon.iter().map(|x| x.transform.rank()).collect();
    report.push(
        "rank-spectrum",
        ranks.iter().all(|r| [1, 2, n].contains(r)),
        format!("ranks {ranks:?}"),
    );
    let rank_one_idempotent = mon
        .iter()
        .filter(|x| x.transform.rank() == 1)
        .all(|x| x.transform.is_idempotent());
    let full_rank_idempotents = mon
        .iter()
        .filter(|x| x.transform.rank() == n && x.transform.is_idempotent())
        .count();
    report.push(
        "idempotents-rank-1-and-n",
        rank_one_idempotent && full_rank_idempotents == 1,
        format!("{full_rank_idempotents} idempotent(s) of rank n"),
    );

    let complement = b_bar.complement();
    let expected = match profile.tau {
        None => Ok(b_bar.then(b_bar)),
        Some(tau) => {
            let mut w = Word::new(vec![profile.b]);
            w.push_power(profile.a, tau);
            w.push(profile.b);
            aut.induced(&w)
        }
    };
    let (pass, detail) = match (&complement, &expected) {
        (Ok(c), Ok(e)) => (c == e, format!("b# = {c}, expected {e}")),
        _ => (false, "complement undefined".to_string()),
    };
    report.push("complement-lemma", pass, detail);

    let basics = match basic_idempotents(aut, &profile, mon) {
        Ok(b) => b,
        Err(e) => {
            report.push("basic-idempotents", false, e.to_string());
            return;
        }
    };
    report.basic_idempotent_count = Some(basics.len());
    let has_rank_one = mon.iter().any(|x| x.transform.rank() == 1);
    report.nu_present = Some(has_rank_one);
    let nu_ok = match &basics.nu {
        Some(nu) => has_rank_one && nu.transform.image_set() == BTreeSet::from([0]),
        None => !has_rank_one,
    };
    report.push(
        "basic-idempotents",
        basics
            .all()
            .all(|e| e.transform.is_idempotent() && mon.contains(&e.transform))
            && basics.len() <= 2 * (n + 1)
            && nu_ok,
        format!(
            "|B| = {} <= {}, ν {}",
            basics.len(),
            2 * (n + 1),
            if basics.nu.is_some() {
                "present"
            } else {
                "absent"
            }
        ),
    );

    let classifier = Rank2Classifier::new(aut, &profile);
    let mut rank_two = 0;
    let mut failure = None;
    for x in mon.iter().filter(|x| x.transform.rank() == 2) {
        rank_two += 1;
        let ok = classifier.classify(&x.transform).and_then(|form| {
            let back = aut.induced(&form.word(&profile))?;
            Ok(back == x.transform)
        });
        if !matches!(ok, Ok(true)) {
            failure = Some(x.transform.to_string());
            break;
        }
    }
    report.push(
        "rank2-forms",
        failure.is_none(),
        match failure {
            Some(x) => format!("unclassified rank-two element {x}"),
            None => format!("{rank_two} rank-two element(s) classified"),
        },
    );

    let g = match group_part(mon) {
        Ok(g) => g,
        Err(e) => {
            report.push("canonical-form", false, e.to_string());
            return;
        }
    };
    let check = verify_canonical_form(mon, &basics, &g);
    let detail = match &check {
        CanonicalFormCheck::Holds { .. } => format!("M = BG, {} elements certified", mon.len()),
        CanonicalFormCheck::ProductOutsideMonoid { product } => {
            format!("product {product} lies outside M")
        }
        CanonicalFormCheck::Uncovered { element } => format!("element {element} not in BG"),
    };
    report.push("canonical-form", check.holds(), detail);

    let basic_orbits = basic_orbit_count(&basics, &g);
    report.push(
        "size-from-basic-orbits",
        basic_orbits * n == mon.len(),
        format!("{basic_orbits} basic orbits × {n} = {}", basic_orbits * n),
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::DEFAULT_BUDGET;

    fn aut(alphabet: &[&str], rows: &[&[usize]]) -> Automaton {
        Automaton::new(
            alphabet.iter().map(|s| s.to_string()).collect(),
            rows.iter().map(|r| r.to_vec()).collect(),
            0,
            [0],
        )
        .unwrap()
    }

    #[test]
    fn non_sfa_fails_first_check() {
        let r = verify_paper(&aut(&["a", "b"], &[&[1, 2, 0], &[0, 2, 1]]), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.class, "not-sfa");
        let first = r.first_failure().unwrap();
        assert!(first.detail.starts_with("not an SFA: cycle avoiding q0"));
    }

    #[test]
    fn unary_cycle_passes() {
        let r = verify_paper(
            &aut(&["a"], &[&[1, 2, 3, 4, 5, 6, 7, 8, 0]]),
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(r.all_pass(), "{:?}", r.first_failure());
        assert_eq!(r.complexity, Some(9));
        assert_eq!(r.class, "csfa:no-bpi");
    }

    #[test]
    fn figure_1_passes_every_check() {
        let r = verify_paper(
            &aut(&["a", "b"], &[&[1, 2, 3, 0], &[2, 2, 0, 0]]),
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(r.all_pass(), "{:?}", r.first_failure());
        assert_eq!(r.kappa, Some(2));
        assert!(r.check("canonical-form").unwrap().pass);
        assert!(r.basic_idempotent_count.unwrap() < 10);
    }

    #[test]
    fn unnormalized_input_is_normalized_first() {
        let a = aut(&["a", "b"], &[&[1, 2, 3, 0], &[2, 2, 0, 0]])
            .relabel(&[3, 1, 0, 2])
            .unwrap();
        let r = verify_paper(&a, DEFAULT_BUDGET).unwrap();
        assert!(r.all_pass(), "{:?}", r.first_failure());
        assert_eq!(r.complexity, Some(12));
    }
}
