//! Runs every check over a set of instances.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::cli::format::Instance;
use crate::dynamics::{
    check_action_axioms, check_lemma_e_unitary, check_lemma_one_direction, check_naive_recurrence,
    check_semigroup_axioms, check_set_recurrence, PartialAction, PointSet,
};
use crate::expand::{
    check_expansion_action, check_expansion_structure, check_fusirat, check_potrivire, check_potrivire_classes,
    expansion_action, oracle_gate, Expansion, EXPANSION_CAP,
};
use crate::gact::{
    bis_action, check_bisections, check_onegsion, check_oneon, check_tilde_recurrence, check_unit_map_isomorphism,
    check_vertij, Bisections, GroupoidAction,
};
use crate::germ::{
    check_aha, check_bucuros, check_cuci, check_enoeno, check_gamma_global, check_germ_groupoid, check_ohanesian,
    GermGroupoid,
};
use crate::isg::{symmetric_inverse, Congruence, InverseSemigroup, SYMMETRIC_INVERSE_CAP};
use crate::quot::{check_gramada, check_hazard, check_induced_action, induced_action};
use crate::report::CheckReport;
use crate::sets::battery;

/// Bases up to this size also run the word-oracle comparison.
pub const ORACLE_GATE_LIMIT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Axioms,
    Recurrence,
    Expansion,
    Quotient,
    Germ,
    Gaction,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Axioms, Suite::Recurrence, Suite::Expansion, Suite::Quotient, Suite::Germ, Suite::Gaction];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "axioms" => Suite::Axioms,
            "recurrence" => Suite::Recurrence,
            "expansion" => Suite::Expansion,
            "quotient" => Suite::Quotient,
            "germ" => Suite::Germ,
            "gaction" => Suite::Gaction,
            "all" => Suite::All,
            other => return Err(format!("unknown suite `{other}`")),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Axioms => "axioms",
            Suite::Recurrence => "recurrence",
            Suite::Expansion => "expansion",
            Suite::Quotient => "quotient",
            Suite::Germ => "germ",
            Suite::Gaction => "gaction",
            Suite::All => "all",
        };
        f.write_str(name)
    }
}

fn error_report(check: &str, e: impl fmt::Display) -> CheckReport {
    let mut r = CheckReport::new(check, "");
    r.fail(e.to_string());
    r
}

fn pairs(n: usize, seed: u64) -> Vec<(PointSet, PointSet)> {
    let b = battery(n, seed);
    b.iter().flat_map(|m| b.iter().map(move |nn| (m.clone(), nn.clone()))).collect()
}

fn axioms(inst: &Instance, out: &mut Vec<CheckReport>) {
    if let Some(s) = &inst.semigroup {
        out.push(check_semigroup_axioms(s));
    }
    if let Some(a) = &inst.action {
        out.push(check_action_axioms(a));
    }
    if let Some(ga) = &inst.gaction {
        match Bisections::new(ga.groupoid()) {
            Ok(bis) => {
                out.push(check_bisections(&bis));
                let mut r = CheckReport::new("gaction.bis_action", "");
                match bis_action(ga, &bis) {
                    Ok(theta) => {
                        r.require(theta.is_genuine(), || "bisection action is not genuine".into());
                        r.size("bisections", bis.len());
                    }
                    Err(e) => r.fail(e.to_string()),
                }
                out.push(r);
            }
            Err(e) => out.push(error_report("gaction.bisections", e)),
        }
    }
}

fn recurrence(a: &PartialAction, seed: u64, out: &mut Vec<CheckReport>) {
    let s = a.semigroup();
    let min_group = Congruence::min_group(s);
    for (m, n) in pairs(a.space().len(), seed) {
        out.push(check_naive_recurrence(a, &m, &n));
        match &min_group {
            Ok(c) => out.push(check_set_recurrence(a, c, &m, &n)),
            Err(e) => out.push(error_report("recurrence.set", e)),
        }
    }
    if s.is_e_unitary() {
        out.push(check_lemma_e_unitary(a).unwrap_or_else(|e| error_report("recurrence.lemma_e_unitary", e)));
    }
    out.push(check_lemma_one_direction(a));
}

fn expansion_checks(inst: &Instance, seed: u64, out: &mut Vec<CheckReport>) {
    let Some(s) = &inst.semigroup else { return };
    if s.len() > EXPANSION_CAP {
        return;
    }
    let exp = match Expansion::new(s) {
        Ok(exp) => exp,
        Err(e) => return out.push(error_report("expansion.structure", e)),
    };
    if inst.action.is_none() {
        out.push(check_expansion_structure(&exp));
        if s.len() <= ORACLE_GATE_LIMIT {
            out.push(oracle_gate(&exp).map(|g| g.report).unwrap_or_else(|e| error_report("expansion.oracle_gate", e)));
        }
    }
    let Some(a) = &inst.action else { return };
    let lifted = match expansion_action(&exp, a) {
        Ok(l) => l,
        Err(e) => return out.push(error_report("expansion.action", e)),
    };
    out.push(check_expansion_action(&exp, a, &lifted, seed));
    let b = battery(a.space().len(), seed);
    for m in &b {
        for n in &b {
            out.push(check_fusirat(&exp, a, &lifted, m, n));
        }
    }
    for sigma in a.space().points() {
        for n in &b {
            out.push(check_potrivire(&exp, a, &lifted, sigma, n));
            out.push(check_potrivire_classes(&exp, a, &lifted, sigma, n));
        }
    }
}

fn quotient_checks(inst: &Instance, seed: u64, out: &mut Vec<CheckReport>) {
    let Some(a) = &inst.action else { return };
    let s = a.semigroup();
    let mut congruences = vec![("equality", Congruence::equality(s))];
    if s.is_e_unitary() {
        match Congruence::min_group(s) {
            Ok(c) => congruences.push(("min-group", c)),
            Err(e) => out.push(error_report("quotient.induced_action", e)),
        }
    }
    if let Some(c) = &inst.congruence {
        congruences.push(("given", c.clone()));
    }
    let b = battery(a.space().len(), seed);
    for (name, c) in congruences {
        let ind = match induced_action(a, &c) {
            Ok(ind) => ind,
            Err(e) => {
                let mut r = error_report("quotient.induced_action", e);
                r.params = format!("congruence={name}");
                out.push(r);
                continue;
            }
        };
        let tag = |mut r: CheckReport| {
            r.params = format!("congruence={name} {}", r.params).trim_end().to_string();
            r
        };
        out.push(tag(check_induced_action(&ind)));
        for sigma in a.space().points() {
            for n in &b {
                out.push(tag(check_gramada(&ind, sigma, n, seed)));
            }
        }
    }
    if s.is_e_unitary() {
        out.push(check_hazard(a, seed).unwrap_or_else(|e| error_report("quotient.e_unitary_bijection", e)));
    }
}

fn germ_checks(a: &PartialAction, seed: u64, out: &mut Vec<CheckReport>) {
    let gg = match GermGroupoid::new(a) {
        Ok(gg) => gg,
        Err(e) => return out.push(error_report("germ.groupoid", e)),
    };
    out.push(check_germ_groupoid(&gg));
    out.push(check_enoeno(&gg, seed));
    match Congruence::min_group(a.semigroup()) {
        Ok(c) => out.push(check_gamma_global(&gg, &c)),
        Err(e) => out.push(error_report("germ.gamma_global", e)),
    }
    for (m, n) in pairs(a.space().len(), seed) {
        out.push(check_aha(&gg, &m, &n));
        out.push(check_ohanesian(&gg, &m, &n));
    }
    let b = battery(a.space().len(), seed);
    for sigma in a.space().points() {
        for n in &b {
            out.push(check_bucuros(&gg, sigma, n));
        }
        out.push(check_cuci(&gg, sigma, seed));
    }
}

/// Target semigroup for the unit-map isomorphism when every ordered pair of
/// units carries exactly one arrow.
fn pair_target(ga: &GroupoidAction) -> Option<(InverseSemigroup, Vec<crate::isg::PartialBijection>)> {
    let g = ga.groupoid();
    let k = g.units().len();
    if g.len() != k * k || k > SYMMETRIC_INVERSE_CAP {
        return None;
    }
    let one_each =
        g.units().iter().all(|&u| g.units().iter().all(|&v| g.restriction(&[u].into(), &[v].into()).len() == 1));
    one_each.then(|| symmetric_inverse(k).expect("within cap"))
}

fn gaction_checks(ga: &GroupoidAction, seed: u64, out: &mut Vec<CheckReport>) {
    let bis = match Bisections::new(ga.groupoid()) {
        Ok(b) => b,
        Err(e) => return out.push(error_report("gaction.bisections", e)),
    };
    if let Some((target, maps)) = pair_target(ga) {
        out.push(check_unit_map_isomorphism(&bis, &target, &maps));
    }
    let theta = match bis_action(ga, &bis) {
        Ok(t) => t,
        Err(e) => return out.push(error_report("gaction.bis_action", e)),
    };
    out.push(check_oneon(ga, &theta, seed));
    let k = ga.space().len();
    for (m, n) in pairs(k, seed) {
        out.push(check_tilde_recurrence(ga, &m, &n));
    }
    let b = battery(k, seed);
    for sigma in ga.space().points() {
        for n in &b {
            out.push(check_vertij(ga, &bis, &theta, sigma, n));
            for m in &b {
                out.push(check_onegsion(ga, &bis, &theta, sigma, m, n, seed));
            }
        }
    }
}

/// One report per (check, instance, parameters), sorted.
pub fn run_suite(instances: &[Instance], suite: Suite, seed: u64) -> Vec<CheckReport> {
    let mut all = Vec::new();
    for inst in instances {
        let mut out = Vec::new();
        if suite.includes(Suite::Axioms) {
            axioms(inst, &mut out);
        }
        if suite.includes(Suite::Recurrence) {
            if let Some(a) = &inst.action {
                recurrence(a, seed, &mut out);
            }
            if let Some(ga) = &inst.gaction {
                for (m, n) in pairs(ga.space().len(), seed) {
                    out.push(check_tilde_recurrence(ga, &m, &n));
                }
            }
        }
        if suite.includes(Suite::Expansion) {
            expansion_checks(inst, seed, &mut out);
        }
        if suite.includes(Suite::Quotient) {
            quotient_checks(inst, seed, &mut out);
        }
        if suite.includes(Suite::Germ) {
            if let Some(a) = &inst.action {
                germ_checks(a, seed, &mut out);
            }
        }
        if suite.includes(Suite::Gaction) {
            if let Some(ga) = &inst.gaction {
                gaction_checks(ga, seed, &mut out);
            }
        }
        all.extend(out.into_iter().map(|r| r.with_instance(&inst.name)));
    }
    all.sort_by(|a, b| (&a.check, &a.instance, &a.params).cmp(&(&b.check, &b.instance, &b.params)));
    all.dedup_by(|a, b| a == b);
    all
}

/// Pass and fail counts per check id.
pub fn summarize(reports: &[CheckReport]) -> BTreeMap<String, (usize, usize)> {
    let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in reports {
        let e = out.entry(r.check.clone()).or_default();
        if r.passed() {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;

    #[test]
    fn empty_input_gives_no_reports() {
        assert!(run_suite(&[], Suite::All, 7).is_empty());
    }

    #[test]
    fn germ_suite_on_k() {
        let reports = run_suite(&[Instance::named("K").with_action(fixtures::k())], Suite::Germ, 7);
        let checks: std::collections::BTreeSet<&str> = reports.iter().map(|r| r.check.as_str()).collect();
        for c in
            ["germ.groupoid_recurrence", "germ.pointwise_bijection", "germ.gamma_inclusion", "germ.gamma_set_function"]
        {
            assert!(checks.contains(c), "{c}");
        }
        assert!(reports.iter().all(|r| r.passed()));
        assert!(reports.iter().all(|r| r.instance == "K"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL.into_iter().chain([Suite::All]) {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
