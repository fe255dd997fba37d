//! Groupoid actions on finite spaces and the induced action of bisections.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::dynamics::{partition_from_equivalence, ActionError, FiniteSpace, PartialAction, Point, PointSet};
use crate::germ::{Arrow, ArrowSet, FiniteGroupoid};
use crate::isg::{Element, ElementSet, InverseSemigroup, IsgError, PartialBijection};
use crate::report::CheckReport;
use crate::sets::{subsets_or_sample, BATTERY_EXHAUSTIVE_LIMIT, EXHAUSTIVE_LIMIT};

/// Largest groupoid whose bisections are enumerated by default.
pub const BISECTION_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GactError {
    #[error("anchor has {got} entries for {expected} points")]
    WrongAnchorLength { expected: usize, got: usize },
    #[error("anchor of point {0} is not a unit")]
    AnchorNotUnit(Point),
    #[error("anchor misses the unit {0}")]
    AnchorNotSurjective(Arrow),
    #[error("action entry ({0}, {1}) out of range")]
    OutOfRange(Arrow, Point),
    #[error("action of arrow {0} on point {1} given twice")]
    DuplicateAct(Arrow, Point),
    #[error("action of arrow {0} on point {1} is given but d(ξ) ≠ ρ(σ)")]
    UnexpectedAct(Arrow, Point),
    #[error("action of arrow {0} on point {1} is missing")]
    MissingAct(Arrow, Point),
    #[error("axiom {axiom} fails: {witness}")]
    AxiomViolation { axiom: &'static str, witness: String },
    #[error("groupoid has {size} arrows, cap is {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error(transparent)]
    Semigroup(#[from] IsgError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// `(Ξ, ρ, •, Σ)`: `ξ • σ` is defined exactly when `d(ξ) = ρ(σ)`.
#[derive(Debug, Clone)]
pub struct GroupoidAction {
    groupoid: FiniteGroupoid,
    space: FiniteSpace,
    anchor: Vec<Arrow>,
    act: Vec<Option<Point>>,
}

impl GroupoidAction {
    pub fn validate(
        groupoid: FiniteGroupoid,
        space: FiniteSpace,
        anchor: Vec<Arrow>,
        act: &[(Arrow, Point, Point)],
    ) -> Result<Self, GactError> {
        let k = space.len();
        if anchor.len() != k {
            return Err(GactError::WrongAnchorLength { expected: k, got: anchor.len() });
        }
        if let Some(p) = anchor.iter().position(|&u| u >= groupoid.len() || !groupoid.is_unit(u)) {
            return Err(GactError::AnchorNotUnit(p));
        }
        if let Some(&u) = groupoid.units().iter().find(|u| !anchor.contains(u)) {
            return Err(GactError::AnchorNotSurjective(u));
        }
        let mut table = vec![None; groupoid.len() * k];
        for &(x, p, q) in act {
            if x >= groupoid.len() || p >= k || q >= k {
                return Err(GactError::OutOfRange(x, p));
            }
            if groupoid.d(x) != anchor[p] {
                return Err(GactError::UnexpectedAct(x, p));
            }
            if table[x * k + p].replace(q).is_some() {
                return Err(GactError::DuplicateAct(x, p));
            }
        }
        for x in groupoid.arrows() {
            for p in 0..k {
                if groupoid.d(x) == anchor[p] && table[x * k + p].is_none() {
                    return Err(GactError::MissingAct(x, p));
                }
            }
        }
        let ga = GroupoidAction { groupoid, space, anchor, act: table };
        let g = &ga.groupoid;
        for p in 0..k {
            if ga.apply(ga.anchor[p], p) != Some(p) {
                return Err(GactError::AxiomViolation {
                    axiom: "unit",
                    witness: format!("ρ({0}) • {0} ≠ {0}", ga.space.label(p)),
                });
            }
        }
        for (x, y, xy) in g.products() {
            for p in (0..k).filter(|&p| g.d(y) == ga.anchor[p]) {
                let yp = ga.apply(y, p).unwrap();
                let lhs = ga.apply(xy, p);
                let rhs = ga.apply(x, yp);
                if rhs.is_none() || lhs != rhs {
                    return Err(GactError::AxiomViolation {
                        axiom: "composition",
                        witness: format!("({}·{}) • {}", g.label(x), g.label(y), ga.space.label(p)),
                    });
                }
            }
        }
        // consequence of the two axioms, checked as a guard
        for x in g.arrows() {
            for p in 0..k {
                if let Some(q) = ga.apply(x, p) {
                    assert_eq!(ga.anchor[q], g.r(x), "anchor of ξ•σ is not r(ξ)");
                }
            }
        }
        Ok(ga)
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn anchor(&self, p: Point) -> Arrow {
        self.anchor[p]
    }

    pub fn anchor_is_injective(&self) -> bool {
        self.anchor.iter().collect::<BTreeSet<_>>().len() == self.anchor.len()
    }

    /// `ξ • σ`.
    pub fn apply(&self, x: Arrow, p: Point) -> Option<Point> {
        self.act[x * self.space.len() + p]
    }

    /// `ξ • M`.
    pub fn image(&self, x: Arrow, m: &PointSet) -> PointSet {
        m.iter().filter_map(|&p| self.apply(x, p)).collect()
    }

    /// `Ξ̃_M^N = {ξ : (ξ • M) ∩ N ≠ ∅}`.
    pub fn tilde_recurrence(&self, m: &PointSet, n: &PointSet) -> ArrowSet {
        self.groupoid.arrows().filter(|&x| self.image(x, m).iter().any(|q| n.contains(q))).collect()
    }

    pub fn orbit_relation(&self) -> Vec<Vec<bool>> {
        let k = self.space.len();
        let mut rel = vec![vec![false; k]; k];
        for x in self.groupoid.arrows() {
            for (p, row) in rel.iter_mut().enumerate() {
                if let Some(q) = self.apply(x, p) {
                    row[q] = true;
                }
            }
        }
        rel
    }

    pub fn orbits(&self) -> Vec<PointSet> {
        partition_from_equivalence(&self.orbit_relation())
    }

    pub fn is_invariant(&self, m: &PointSet) -> bool {
        self.groupoid.arrows().all(|x| self.image(x, m).is_subset(m))
    }
}

/// Action of a groupoid on its units: `ξ` sends `d(ξ)` to `r(ξ)`.
pub fn canonical_action(g: &FiniteGroupoid) -> Result<GroupoidAction, GactError> {
    let units = g.units().to_vec();
    let point = |u: Arrow| units.iter().position(|&v| v == u).unwrap();
    let space = FiniteSpace::new(units.iter().map(|&u| g.label(u).to_string()).collect())?;
    let act: Vec<_> = g.arrows().map(|x| (x, point(g.d(x)), point(g.r(x)))).collect();
    GroupoidAction::validate(g.clone(), space, units.clone(), &act)
}

/// Action of a groupoid on itself by left multiplication, anchored by `r`.
pub fn self_action(g: &FiniteGroupoid) -> Result<GroupoidAction, GactError> {
    let space = FiniteSpace::new(g.labels().to_vec())?;
    let anchor = g.arrows().map(|x| g.r(x)).collect();
    GroupoidAction::validate(g.clone(), space, anchor, &g.products())
}

/// `Bis(Ξ)` with each element's arrow set. Elements are ordered by size,
/// then by arrow indices.
#[derive(Debug, Clone)]
pub struct Bisections {
    groupoid: FiniteGroupoid,
    sets: Vec<ArrowSet>,
    semigroup: InverseSemigroup,
}

fn enumerate(g: &FiniteGroupoid, next: Arrow, chosen: &mut Vec<Arrow>, out: &mut Vec<ArrowSet>) {
    if next == g.len() {
        out.push(chosen.iter().copied().collect());
        return;
    }
    enumerate(g, next + 1, chosen, out);
    if chosen.iter().all(|&x| g.d(x) != g.d(next) && g.r(x) != g.r(next)) {
        chosen.push(next);
        enumerate(g, next + 1, chosen, out);
        chosen.pop();
    }
}

/// `AB = {ξη : ξ ∈ A, η ∈ B, d(ξ) = r(η)}`.
pub fn set_product(g: &FiniteGroupoid, a: &ArrowSet, b: &ArrowSet) -> ArrowSet {
    a.iter().flat_map(|&x| b.iter().filter_map(move |&y| g.compose(x, y))).collect()
}

pub fn is_bisection(g: &FiniteGroupoid, a: &ArrowSet) -> bool {
    let ds: BTreeSet<Arrow> = a.iter().map(|&x| g.d(x)).collect();
    let rs: BTreeSet<Arrow> = a.iter().map(|&x| g.r(x)).collect();
    ds.len() == a.len() && rs.len() == a.len()
}

impl Bisections {
    pub fn new(g: &FiniteGroupoid) -> Result<Self, GactError> {
        Self::with_cap(g, BISECTION_CAP)
    }

    pub fn with_cap(g: &FiniteGroupoid, cap: usize) -> Result<Self, GactError> {
        if g.len() > cap {
            return Err(GactError::CapExceeded { size: g.len(), cap });
        }
        let mut sets = Vec::new();
        enumerate(g, 0, &mut Vec::new(), &mut sets);
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = |s: &ArrowSet| sets.binary_search_by(|t| t.len().cmp(&s.len()).then_with(|| t.cmp(s)));
        let mut table = Vec::with_capacity(sets.len());
        for a in &sets {
            let row = sets
                .iter()
                .map(|b| {
                    index(&set_product(g, a, b))
                        .map_err(|_| IsgError::BadParameter("product of bisections is not a bisection".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.push(row);
        }
        let labels = sets.iter().map(|s| g.fmt_set(s)).collect();
        let semigroup = InverseSemigroup::from_table(table, Some(labels))?;
        Ok(Bisections { groupoid: g.clone(), sets, semigroup })
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.semigroup
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, a: Element) -> &ArrowSet {
        &self.sets[a]
    }

    pub fn index_of(&self, set: &ArrowSet) -> Option<Element> {
        self.sets.iter().position(|s| s == set)
    }

    /// `ξ^A_x`, the arrow of `A` with source `x`.
    pub fn arrow_from(&self, a: Element, unit: Arrow) -> Option<Arrow> {
        self.sets[a].iter().copied().find(|&x| self.groupoid.d(x) == unit)
    }

    /// The partial bijection `d(ξ) ↦ r(ξ)` on unit positions.
    pub fn unit_map(&self, a: Element) -> PartialBijection {
        let g = &self.groupoid;
        let pos = |u: Arrow| g.units().iter().position(|&v| v == u).unwrap();
        let pairs: Vec<_> = self.sets[a].iter().map(|&x| (pos(g.d(x)), pos(g.r(x)))).collect();
        PartialBijection::from_pairs(g.units().len(), &pairs).expect("bisections are injective on units")
    }

    /// `Δ(E) = {A : A ∩ E ≠ ∅}`.
    pub fn delta(&self, e: &ArrowSet) -> ElementSet {
        self.semigroup.elements().filter(|&a| !self.sets[a].is_disjoint(e)).collect()
    }
}

/// `A⁻¹A = d(A)`, `AA⁻¹ = r(A)`, and the idempotents are exactly the sets
/// of units.
pub fn check_bisections(bis: &Bisections) -> CheckReport {
    let g = bis.groupoid();
    let s = bis.semigroup();
    let mut r = CheckReport::new("gaction.bisections", "");
    r.size("bisections", bis.len());
    for a in s.elements() {
        let set = bis.set(a);
        r.require(is_bisection(g, set), || format!("{} is not a bisection", s.label(a)));
        let inv: ArrowSet = set.iter().map(|&x| g.inv(x)).collect();
        r.require(bis.set(s.inv(a)) == &inv, || format!("inverse of {} is not A⁻¹", s.label(a)));
        let d: ArrowSet = set.iter().map(|&x| g.d(x)).collect();
        let rr: ArrowSet = set.iter().map(|&x| g.r(x)).collect();
        r.require(bis.set(s.mul(s.inv(a), a)) == &d, || format!("A⁻¹A ≠ d(A) for {}", s.label(a)));
        r.require(bis.set(s.mul(a, s.inv(a))) == &rr, || format!("AA⁻¹ ≠ r(A) for {}", s.label(a)));
        let unit_set = set.iter().all(|&x| g.is_unit(x));
        r.require(s.is_idempotent(a) == unit_set, || format!("{} idempotent mismatch", s.label(a)));
    }
    let idempotents = s.idempotents().len();
    r.size("idempotents", idempotents);
    r.require(idempotents == 1 << g.units().len(), || format!("{idempotents} idempotents"));
    r
}

/// `A ↦ (d(ξ) ↦ r(ξ))` is an isomorphism onto the given concrete semigroup
/// of partial bijections (for pair groupoids, `I_n`).
pub fn check_unit_map_isomorphism(
    bis: &Bisections,
    target: &InverseSemigroup,
    maps: &[PartialBijection],
) -> CheckReport {
    let s = bis.semigroup();
    let mut r = CheckReport::new("gaction.bisection_isomorphism", "");
    let phi: Vec<Option<Element>> = s.elements().map(|a| maps.iter().position(|m| *m == bis.unit_map(a))).collect();
    r.size("bisections", s.len());
    r.size("target", target.len());
    if let Some(a) = phi.iter().position(Option::is_none) {
        r.fail(format!("{} has no image", s.label(a)));
        return r;
    }
    let phi: Vec<Element> = phi.into_iter().map(Option::unwrap).collect();
    let image: ElementSet = phi.iter().copied().collect();
    r.require(image.len() == s.len() && s.len() == target.len(), || "map is not a bijection".into());
    for a in s.elements() {
        for b in s.elements() {
            r.require(phi[s.mul(a, b)] == target.mul(phi[a], phi[b]), || {
                format!("not multiplicative at {}, {}", s.label(a), s.label(b))
            });
        }
    }
    r
}

/// `Bis(Ξ)` acting on `Σ`: `θ_A(σ) = ξ^A_{ρ(σ)} • σ` on `ρ⁻¹[d(A)]`.
pub fn bis_action(ga: &GroupoidAction, bis: &Bisections) -> Result<PartialAction, GactError> {
    let k = ga.space().len();
    let theta = bis
        .semigroup()
        .elements()
        .map(|a| {
            let map = (0..k).map(|p| bis.arrow_from(a, ga.anchor(p)).and_then(|x| ga.apply(x, p))).collect();
            PartialBijection::from_map(map).expect("bisections act injectively")
        })
        .collect();
    Ok(PartialAction::validate(bis.semigroup().clone(), ga.space().clone(), theta)?)
}

/// `Ξ̃_M^N ⊆ Ξ_{ρ(M)}^{ρ(N)}`, with equality for injective anchors.
pub fn check_tilde_recurrence(ga: &GroupoidAction, m: &PointSet, n: &PointSet) -> CheckReport {
    let sp = ga.space();
    let g = ga.groupoid();
    let mut r = CheckReport::new("gaction.recurrence", format!("M={} N={}", sp.fmt_set(m), sp.fmt_set(n)));
    let tilde = ga.tilde_recurrence(m, n);
    let rm: ArrowSet = m.iter().map(|&p| ga.anchor(p)).collect();
    let rn: ArrowSet = n.iter().map(|&p| ga.anchor(p)).collect();
    let restricted = g.restriction(&rm, &rn);
    r.size("tilde", tilde.len());
    r.size("restriction", restricted.len());
    r.require(tilde.is_subset(&restricted), || format!("{} not inside {}", g.fmt_set(&tilde), g.fmt_set(&restricted)));
    if ga.anchor_is_injective() {
        r.require(tilde == restricted, || "anchor is injective but the sets differ".into());
    }
    r
}

/// Orbits and invariant sets of the groupoid action equal those of the
/// bisection action.
pub fn check_oneon(ga: &GroupoidAction, theta: &PartialAction, seed: u64) -> CheckReport {
    let mut r = CheckReport::new("gaction.same_orbits", "");
    let orbits = ga.orbits();
    r.size("orbits", orbits.len());
    r.size("bisection_orbits", theta.orbits().len());
    r.require(ga.orbit_relation() == theta.orbit_relation(), || "orbit relations differ".into());
    let points: Vec<Point> = ga.space().points().collect();
    let (subsets, sampled) = subsets_or_sample(&points, BATTERY_EXHAUSTIVE_LIMIT, seed);
    for m in &subsets {
        r.require(ga.is_invariant(m) == theta.is_invariant(m), || {
            format!("invariance of {} differs", ga.space().fmt_set(m))
        });
    }
    r.size("subsets", subsets.len());
    if sampled {
        r.seed = Some(seed);
    }
    r
}

/// `δ_σ(A) = ξ^A_{ρ(σ)}` on applicable bisections.
pub fn delta_sigma(
    ga: &GroupoidAction,
    bis: &Bisections,
    theta: &PartialAction,
    sigma: Point,
) -> Vec<(Element, Arrow)> {
    theta.applicable(sigma).into_iter().map(|a| (a, bis.arrow_from(a, ga.anchor(sigma)).expect("applicable"))).collect()
}

/// `δ_σ` identifies exactly the germ-equivalent bisections, induces a
/// bijection onto `Ξ_{ρ(σ)}` and carries recurrence classes onto `Ξ̃_σ^N`.
pub fn check_vertij(
    ga: &GroupoidAction,
    bis: &Bisections,
    theta: &PartialAction,
    sigma: Point,
    n: &PointSet,
) -> CheckReport {
    let sp = ga.space();
    let g = ga.groupoid();
    let mut r = CheckReport::new("gaction.germ_bijection", format!("at={} N={}", sp.label(sigma), sp.fmt_set(n)));
    let delta = delta_sigma(ga, bis, theta, sigma);
    for &(a, x) in &delta {
        for &(b, y) in &delta {
            let equiv = theta.point_equiv(sigma, a, b).expect("applicable");
            r.require((x == y) == equiv, || {
                format!(
                    "{} and {}: same arrow {} but germ equivalent {}",
                    bis.semigroup().label(a),
                    bis.semigroup().label(b),
                    x == y,
                    equiv
                )
            });
        }
    }
    let table = theta.germ_classes(sigma);
    let mut class_image: Vec<Option<Arrow>> = vec![None; table.len()];
    for &(a, x) in &delta {
        let c = table.class_of(a).unwrap();
        match class_image[c] {
            None => class_image[c] = Some(x),
            Some(y) => {
                r.require(x == y, || format!("class of {} is sent to two arrows", bis.semigroup().label(a)));
            }
        }
    }
    let image: ArrowSet = class_image.iter().flatten().copied().collect();
    let fibre = g.restriction(&ArrowSet::from([ga.anchor(sigma)]), &g.units().iter().copied().collect());
    r.size("applicable", delta.len());
    r.size("classes", table.len());
    r.size("fibre", fibre.len());
    r.require(image.len() == table.len() && image == fibre, || {
        format!("class map onto {} is not a bijection (image {})", g.fmt_set(&fibre), g.fmt_set(&image))
    });
    let rec = table.recurrence(theta, n);
    let mapped: ArrowSet = rec.iter().filter_map(|&c| class_image[c]).collect();
    let tilde = ga.tilde_recurrence(&PointSet::from([sigma]), n);
    r.size("recurrence_classes", rec.len());
    r.size("tilde", tilde.len());
    r.require(mapped == tilde && rec.len() == tilde.len(), || {
        format!("recurrence classes map to {} not {}", g.fmt_set(&mapped), g.fmt_set(&tilde))
    });
    r
}

/// `B(θ)_M^N = Δ(Ξ̃_M^N)`, and `Δ_σ(E) = δ_σ⁻¹(E)` for every `E ⊆ Ξ_{ρ(σ)}`.
pub fn check_onegsion(
    ga: &GroupoidAction,
    bis: &Bisections,
    theta: &PartialAction,
    sigma: Point,
    m: &PointSet,
    n: &PointSet,
    seed: u64,
) -> CheckReport {
    let sp = ga.space();
    let s = bis.semigroup();
    let g = ga.groupoid();
    let mut r =
        CheckReport::new("gaction.delta", format!("at={} M={} N={}", sp.label(sigma), sp.fmt_set(m), sp.fmt_set(n)));
    let naive = theta.naive_recurrence(m, n);
    let via_delta = bis.delta(&ga.tilde_recurrence(m, n));
    r.size("naive", naive.len());
    r.size("delta", via_delta.len());
    r.require(naive == via_delta, || format!("{} vs {}", s.fmt_set(&naive), s.fmt_set(&via_delta)));

    let applicable = theta.applicable(sigma);
    let fibre: Vec<Arrow> =
        g.restriction(&ArrowSet::from([ga.anchor(sigma)]), &g.units().iter().copied().collect()).into_iter().collect();
    r.require(bis.delta(&fibre.iter().copied().collect()) == applicable, || {
        "Δ of the fibre is not the applicable set".into()
    });
    let delta = delta_sigma(ga, bis, theta, sigma);
    let (subsets, sampled) = subsets_or_sample(&fibre, EXHAUSTIVE_LIMIT, seed);
    for e in &subsets {
        let lhs = bis.delta(e);
        let rhs: ElementSet = delta.iter().filter(|(_, x)| e.contains(x)).map(|&(a, _)| a).collect();
        r.require(lhs == rhs, || format!("E={}: Δ_σ(E) ≠ δ_σ⁻¹(E)", g.fmt_set(e)));
    }
    r.size("subsets", subsets.len());
    if sampled {
        r.seed = Some(seed);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isg::symmetric_inverse;

    fn p2() -> FiniteGroupoid {
        FiniteGroupoid::pair(2).unwrap()
    }

    fn arrows(g: &FiniteGroupoid, labels: &[&str]) -> ArrowSet {
        labels.iter().map(|l| g.index_of(l).unwrap()).collect()
    }

    #[test]
    fn canonical_and_self_actions_validate() {
        let g = p2();
        let can = canonical_action(&g).unwrap();
        assert_eq!(can.space().len(), 2);
        assert_eq!(can.orbits().len(), 1);
        let slf = self_action(&g).unwrap();
        assert_eq!(slf.space().len(), 4);
        // left translation preserves the source
        assert_eq!(slf.orbits().len(), 2);
        assert!(slf.is_invariant(&slf.space().all()));
        let triv = FiniteGroupoid::from_group(&crate::isg::cyclic_group(1).unwrap()).unwrap();
        assert!(canonical_action(&triv).is_ok());
    }

    #[test]
    fn validation_errors() {
        let g = p2();
        let sp = FiniteSpace::from_names(&["a", "b"]).unwrap();
        let u11 = g.index_of("(1,1)").unwrap();
        let u22 = g.index_of("(2,2)").unwrap();
        assert_eq!(
            GroupoidAction::validate(g.clone(), sp.clone(), vec![u11, u11], &[]).unwrap_err(),
            GactError::AnchorNotSurjective(u22)
        );
        assert_eq!(
            GroupoidAction::validate(g.clone(), sp.clone(), vec![u11, 1], &[]).unwrap_err(),
            GactError::AnchorNotUnit(1)
        );
        // unit (1,1) moves a
        let mut act: Vec<_> = g.arrows().map(|x| (x, g.d(x) / 3, g.r(x) / 3)).collect();
        act[0] = (u11, 0, 1);
        let err = GroupoidAction::validate(g.clone(), sp.clone(), vec![u11, u22], &act).unwrap_err();
        assert!(matches!(err, GactError::AxiomViolation { axiom: "unit", .. }), "{err:?}");
        let act: Vec<_> = g.arrows().map(|x| (x, g.d(x) / 3, g.r(x) / 3)).collect();
        assert_eq!(
            GroupoidAction::validate(g.clone(), sp, vec![u11, u22], &act[1..]).unwrap_err(),
            GactError::MissingAct(0, 0)
        );
    }

    #[test]
    fn tilde_recurrence_examples() {
        let g = p2();
        let can = canonical_action(&g).unwrap();
        let one = PointSet::from([0]);
        let two = PointSet::from([1]);
        assert_eq!(can.tilde_recurrence(&one, &two), arrows(&g, &["(2,1)"]));
        assert!(can.tilde_recurrence(&one, &PointSet::new()).is_empty());
        let slf = self_action(&g).unwrap();
        let p = |l: &str| slf.space().index_of(l).unwrap();
        assert_eq!(
            slf.tilde_recurrence(&PointSet::from([p("(1,1)")]), &PointSet::from([p("(2,1)")])),
            arrows(&g, &["(2,1)"])
        );
        for ga in [&can, &slf] {
            for m in crate::sets::all_subsets(&ga.space().points().collect::<Vec<_>>()) {
                for n in crate::sets::all_subsets(&ga.space().points().collect::<Vec<_>>()) {
                    assert!(check_tilde_recurrence(ga, &m, &n).passed());
                }
            }
        }
    }

    #[test]
    fn bisections_of_small_groupoids() {
        let g = p2();
        let bis = Bisections::new(&g).unwrap();
        assert_eq!(bis.len(), 7);
        let labels: Vec<&str> = bis.semigroup().labels().iter().map(String::as_str).collect();
        assert!(labels.contains(&"{(1,2),(2,1)}"));
        assert!(labels.contains(&"{(1,1),(2,2)}"));
        assert!(check_bisections(&bis).passed());
        let (i2, maps) = symmetric_inverse(2).unwrap();
        assert!(check_unit_map_isomorphism(&bis, &i2, &maps).passed());

        let z3 = FiniteGroupoid::from_group(&crate::isg::cyclic_group(3).unwrap()).unwrap();
        assert_eq!(Bisections::new(&z3).unwrap().len(), 4);
        let unit = FiniteGroupoid::from_group(&crate::isg::cyclic_group(1).unwrap()).unwrap();
        assert_eq!(Bisections::new(&unit).unwrap().len(), 2);

        let p3 = FiniteGroupoid::pair(3).unwrap();
        let bis3 = Bisections::new(&p3).unwrap();
        assert_eq!(bis3.len(), 34);
        let (i3, maps3) = symmetric_inverse(3).unwrap();
        assert!(check_unit_map_isomorphism(&bis3, &i3, &maps3).passed());
        assert!(matches!(Bisections::with_cap(&p3, 8), Err(GactError::CapExceeded { size: 9, cap: 8 })));
    }

    #[test]
    fn bis_action_examples() {
        let g = p2();
        let can = canonical_action(&g).unwrap();
        let bis = Bisections::new(&g).unwrap();
        let theta = bis_action(&can, &bis).unwrap();
        assert!(theta.is_genuine());
        let a = bis.index_of(&arrows(&g, &["(2,1)"])).unwrap();
        assert_eq!(theta.map(a).pairs().collect::<Vec<_>>(), [(0, 1)]);
        assert!(theta.map(bis.index_of(&ArrowSet::new()).unwrap()).is_empty());
        let id = bis.index_of(&arrows(&g, &["(1,1)", "(2,2)"])).unwrap();
        assert_eq!(*theta.map(id), PartialBijection::identity(2));
        let slf = self_action(&g).unwrap();
        assert!(bis_action(&slf, &bis).unwrap().is_genuine());
    }

    #[test]
    fn theorem_checks_on_pair_groupoids() {
        for n in [2, 3] {
            let g = FiniteGroupoid::pair(n).unwrap();
            let bis = Bisections::new(&g).unwrap();
            for ga in [canonical_action(&g).unwrap(), self_action(&g).unwrap()] {
                let theta = bis_action(&ga, &bis).unwrap();
                assert!(check_oneon(&ga, &theta, 3).passed());
                let pts: Vec<Point> = ga.space().points().collect();
                for sigma in ga.space().points() {
                    for nn in crate::sets::battery(pts.len(), 5) {
                        assert!(check_vertij(&ga, &bis, &theta, sigma, &nn).passed());
                        let m = PointSet::from([sigma]);
                        assert!(check_onegsion(&ga, &bis, &theta, sigma, &m, &nn, 5).passed());
                    }
                }
            }
        }
    }

    #[test]
    fn vertij_and_onegsion_examples() {
        let g = p2();
        let can = canonical_action(&g).unwrap();
        let bis = Bisections::new(&g).unwrap();
        let theta = bis_action(&can, &bis).unwrap();
        let rep = check_vertij(&can, &bis, &theta, 0, &PointSet::from([1]));
        assert!(rep.passed());
        assert_eq!((rep.sizes["applicable"], rep.sizes["classes"], rep.sizes["fibre"]), (4, 2, 2));
        assert_eq!((rep.sizes["recurrence_classes"], rep.sizes["tilde"]), (1, 1));
        let rep = check_vertij(&can, &bis, &theta, 0, &can.space().all());
        assert_eq!((rep.sizes["recurrence_classes"], rep.sizes["tilde"]), (2, 2));
        let rep = check_vertij(&can, &bis, &theta, 0, &PointSet::new());
        assert!(rep.passed());
        assert_eq!(rep.sizes["tilde"], 0);

        let rep = check_onegsion(&can, &bis, &theta, 0, &PointSet::from([0]), &PointSet::from([1]), 1);
        assert!(rep.passed());
        let expected: ElementSet = [arrows(&g, &["(2,1)"]), arrows(&g, &["(1,2)", "(2,1)"])]
            .iter()
            .map(|s| bis.index_of(s).unwrap())
            .collect();
        assert_eq!(theta.naive_recurrence(&PointSet::from([0]), &PointSet::from([1])), expected);
        assert_eq!(bis.delta(&arrows(&g, &["(2,1)"])), expected);
        assert!(bis.delta(&ArrowSet::new()).is_empty());
        assert_eq!(rep.sizes["subsets"], 4);
    }
}
