//! Partial actions pushed through idempotent pure congruences.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::dynamics::{ActionError, PartialAction, Point, PointSet};
use crate::isg::{Congruence, Element, ElementSet, InverseSemigroup, IsgError, PartialBijection};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotError {
    #[error("congruence is not idempotent pure")]
    NotIdempotentPure,
    #[error("{s} and {t} are congruent but disagree at point {point}")]
    WellDefinednessFailure { s: Element, t: Element, point: Point },
    #[error("{s} and {t} are congruent but send points {p} and {q} to the same point")]
    NotInjective { s: Element, t: Element, p: Point, q: Point },
    #[error("the acting semigroup is not E-unitary")]
    PreconditionNotEUnitary,
    #[error(transparent)]
    Semigroup(#[from] IsgError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// The action `ϑ` of `R = S/≈` with `ϑ_{p(s)}(σ) = θ_s(σ)`.
#[derive(Debug, Clone)]
pub struct InducedAction {
    base: PartialAction,
    congruence: Congruence,
    projection: Vec<Element>,
    action: PartialAction,
}

impl InducedAction {
    pub fn base(&self) -> &PartialAction {
        &self.base
    }

    pub fn congruence(&self) -> &Congruence {
        &self.congruence
    }

    pub fn quotient(&self) -> &InverseSemigroup {
        self.action.semigroup()
    }

    /// `p: S → R`.
    pub fn p(&self, s: Element) -> Element {
        self.projection[s]
    }

    pub fn action(&self) -> &PartialAction {
        &self.action
    }
}

pub fn induced_action(theta: &PartialAction, c: &Congruence) -> Result<InducedAction, QuotError> {
    let s = theta.semigroup();
    if !c.is_idempotent_pure(s) {
        return Err(QuotError::NotIdempotentPure);
    }
    let (r, projection) = c.quotient(s)?;
    let maps = union_maps(theta, c.classes())?;
    let action = PartialAction::validate(r, theta.space().clone(), maps)?;
    Ok(InducedAction { base: theta.clone(), congruence: c.clone(), projection, action })
}

/// One partial map per class: the union of the graphs of its members.
fn union_maps(theta: &PartialAction, classes: &[Vec<Element>]) -> Result<Vec<PartialBijection>, QuotError> {
    let m = theta.space().len();
    let mut maps = Vec::with_capacity(classes.len());
    for class in classes {
        let mut map: Vec<Option<Point>> = vec![None; m];
        let mut owner: Vec<Option<Element>> = vec![None; m];
        let mut source: Vec<Option<(Element, Point)>> = vec![None; m];
        for &x in class {
            for (p, q) in theta.map(x).pairs() {
                match map[p] {
                    Some(old) if old != q => {
                        return Err(QuotError::WellDefinednessFailure { s: owner[p].unwrap(), t: x, point: p });
                    }
                    Some(_) => {}
                    None => {
                        if let Some((y, p0)) = source[q] {
                            return Err(QuotError::NotInjective { s: y, t: x, p: p0, q: p });
                        }
                        map[p] = Some(q);
                        owner[p] = Some(x);
                        source[q] = Some((x, p));
                    }
                }
            }
        }
        maps.push(PartialBijection::from_map(map).expect("injectivity checked"));
    }
    Ok(maps)
}

/// The defining properties of `ϑ`, read literally.
pub fn check_induced_action(ind: &InducedAction) -> CheckReport {
    let s = ind.base().semigroup();
    let r_sg = ind.quotient();
    let mut r = CheckReport::new("quotient.induced_action", "");
    for x in s.elements() {
        let px = ind.p(x);
        r.require(ind.base().map(x).is_restriction_of(ind.action().map(px)), || {
            format!("theta_{} is not a restriction of vartheta_{}", s.label(x), r_sg.label(px))
        });
        r.require(r_sg.inv(px) == ind.p(s.inv(x)), || format!("p({0})# != p({0}#)", s.label(x)));
    }
    for a in r_sg.elements() {
        let union: PointSet = ind.congruence().class(a).iter().flat_map(|&x| ind.base().map(x).domain()).collect();
        r.require(union == ind.action().map(a).domain(), || {
            format!("dom vartheta_{} is not the union of the class domains", r_sg.label(a))
        });
    }
    r.size("quotient", r_sg.len());
    r
}

/// Same orbits and invariant sets, `p` maps applicable and recurrence sets
/// onto their counterparts, and `P_σ` is a well-defined surjection between
/// germ classes that carries `𝒮(θ)_σ^N` onto `𝒮_R(ϑ)_σ^N`.
pub fn check_gramada(ind: &InducedAction, sigma: Point, n: &PointSet, seed: u64) -> CheckReport {
    let theta = ind.base();
    let vartheta = ind.action();
    let sp = theta.space();
    let mut r = CheckReport::new("quotient.same_dynamics", format!("at={} N={}", sp.label(sigma), sp.fmt_set(n)));
    r.require(theta.orbits() == vartheta.orbits(), || "orbit partitions differ".into());
    for m in crate::sets::battery(sp.len(), seed) {
        r.require(theta.is_invariant(&m) == vartheta.is_invariant(&m), || {
            format!("invariance of {} differs", sp.fmt_set(&m))
        });
    }
    let project = |set: &ElementSet| -> ElementSet { set.iter().map(|&x| ind.p(x)).collect() };
    let app = project(&theta.applicable(sigma));
    let app_r = vartheta.applicable(sigma);
    r.size("applicable_image", app.len());
    r.size("applicable_quotient", app_r.len());
    r.require(app == app_r, || "p(S{theta,sigma}) != R{vartheta,sigma}".into());
    let single = PointSet::from([sigma]);
    let naive = project(&theta.naive_recurrence(&single, n));
    let naive_r = vartheta.naive_recurrence(&single, n);
    r.size("naive_image", naive.len());
    r.size("naive_quotient", naive_r.len());
    r.require(naive == naive_r, || {
        format!("p(S(theta)) = {} but R(vartheta) = {}", vartheta.fmt_elements(&naive), vartheta.fmt_elements(&naive_r))
    });
    let up = theta.germ_classes(sigma);
    let down = vartheta.germ_classes(sigma);
    let mut big_p = Vec::with_capacity(up.len());
    for (i, class) in up.classes().iter().enumerate() {
        let images: BTreeSet<Option<usize>> = class.iter().map(|&x| down.class_of(ind.p(x))).collect();
        r.require(images.len() == 1 && !images.contains(&None), || format!("P is not well defined on class {i}"));
        big_p.push(down.class_of(ind.p(class[0])).unwrap_or(usize::MAX));
    }
    let onto: BTreeSet<usize> = big_p.iter().copied().collect();
    r.require(onto.len() == down.len() && !onto.contains(&usize::MAX), || {
        "P is not onto the quotient germ classes".into()
    });
    let rec: BTreeSet<usize> = up.recurrence(theta, n).iter().map(|&c| big_p[c]).collect();
    let rec_r = down.recurrence(vartheta, n);
    r.size("recurrence_image", rec.len());
    r.size("recurrence_quotient", rec_r.len());
    r.require(rec == rec_r, || "P[recurrence] differs from the quotient recurrence set".into());
    r.seed = Some(seed);
    r
}

/// For E-unitary `S` and the minimum group congruence, `R` is a group,
/// `↔_σ` on `R{ϑ,σ}` is equality, and `P_σ` is a bijection giving equal
/// recurrence counts for every target in the battery.
pub fn check_hazard(theta: &PartialAction, seed: u64) -> Result<CheckReport, QuotError> {
    let s = theta.semigroup();
    if !s.is_e_unitary() {
        return Err(QuotError::PreconditionNotEUnitary);
    }
    let c = Congruence::min_group(s)?;
    let ind = induced_action(theta, &c)?;
    let vartheta = ind.action();
    let sp = theta.space();
    let mut r = CheckReport::new("quotient.e_unitary_bijection", "");
    r.seed = Some(seed);
    r.require(ind.quotient().is_group(), || "maximum group image is not a group".into());
    let battery = crate::sets::battery(sp.len(), seed);
    r.size("targets", battery.len());
    for sigma in sp.points() {
        let up = theta.germ_classes(sigma);
        let down = vartheta.germ_classes(sigma);
        r.require(down.len() == vartheta.applicable(sigma).len(), || {
            format!("germ equivalence on the group is not equality at {}", sp.label(sigma))
        });
        let big_p: Vec<Option<usize>> = up.classes().iter().map(|cl| down.class_of(ind.p(cl[0]))).collect();
        let distinct: BTreeSet<Option<usize>> = big_p.iter().copied().collect();
        r.require(distinct.len() == up.len(), || format!("P is not injective at {}", sp.label(sigma)));
        for n in &battery {
            let a = up.recurrence(theta, n).len();
            let b = down.recurrence(vartheta, n).len();
            r.require(a == b, || {
                format!("at {} N={}: {a} classes upstairs, {b} downstairs", sp.label(sigma), sp.fmt_set(n))
            });
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;

    fn pts(a: &PartialAction, names: &[&str]) -> PointSet {
        names.iter().map(|n| a.space().index_of(n).unwrap()).collect()
    }

    #[test]
    fn a4_through_min_group() {
        let a4 = fixtures::a4();
        let c = Congruence::min_group(a4.semigroup()).unwrap();
        let ind = induced_action(&a4, &c).unwrap();
        let v = ind.action();
        assert_eq!(v.semigroup().len(), 2);
        assert!(v.semigroup().is_group());
        let e = ind.p(a4.semigroup().index_of("(1,e)").unwrap());
        let g = ind.p(a4.semigroup().index_of("(1,g)").unwrap());
        assert_eq!(v.map(e), &PartialBijection::identity(3));
        assert_eq!(v.map(g), &PartialBijection::from_pairs(3, &[(0, 1), (1, 0)]).unwrap());
        assert!(!v.is_genuine());
        assert!(check_induced_action(&ind).passed());
    }

    #[test]
    fn equality_congruence_gives_back_the_action() {
        for a in [fixtures::a4(), fixtures::pz2(), fixtures::k()] {
            let ind = induced_action(&a, &Congruence::equality(a.semigroup())).unwrap();
            assert_eq!(ind.action().maps(), a.maps());
        }
    }

    #[test]
    fn impure_congruence_is_rejected() {
        let k = fixtures::k();
        let c = Congruence::min_group(k.semigroup()).unwrap();
        assert_eq!(induced_action(&k, &c).unwrap_err(), QuotError::NotIdempotentPure);
    }

    #[test]
    fn disagreeing_classes_are_reported() {
        // the one-class congruence on Z₂ is not idempotent pure, so
        // induced_action refuses it up front; the union step catches it too
        let wp = fixtures::wp_z2();
        let err = union_maps(&wp, &[vec![0, 1]]).unwrap_err();
        assert_eq!(err, QuotError::WellDefinednessFailure { s: 0, t: 1, point: 0 });
    }

    #[test]
    fn gramada_examples() {
        let a4 = fixtures::a4();
        let c = Congruence::min_group(a4.semigroup()).unwrap();
        let ind = induced_action(&a4, &c).unwrap();
        let rep = check_gramada(&ind, 0, &pts(&a4, &["y"]), 1);
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.sizes["naive_quotient"], 1);
        let rep = check_gramada(&ind, 2, &pts(&a4, &["z"]), 1);
        assert!(rep.passed(), "{rep}");
        let eq = induced_action(&a4, &Congruence::equality(a4.semigroup())).unwrap();
        assert!(check_gramada(&eq, 1, &a4.space().all(), 1).passed());
    }

    #[test]
    fn hazard_examples() {
        let rep = check_hazard(&fixtures::a4(), 3).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(check_hazard(&fixtures::pz2(), 3).unwrap().passed());
        assert!(check_hazard(&fixtures::wp_e2z2(), 3).unwrap().passed());
        assert_eq!(check_hazard(&fixtures::k(), 3).unwrap_err(), QuotError::PreconditionNotEUnitary);
        let a4 = fixtures::a4();
        assert_eq!(a4.germ_classes(0).len(), 2);
    }
}
