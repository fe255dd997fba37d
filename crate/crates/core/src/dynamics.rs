//! Partial actions of finite inverse semigroups on finite discrete spaces,
//! their orbits, germ classes and recurrence sets.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::isg::{Congruence, Element, ElementSet, InverseSemigroup, PartialBijection};
use crate::report::CheckReport;

pub type Point = usize;
pub type PointSet = BTreeSet<Point>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `θ_{s♯} = θ_s⁻¹`
    Inverse,
    /// `θ_s ∘ θ_t ⊆ θ_{st}`
    Composition,
    /// `s ≤ t ⇒ θ_s ⊆ θ_t`
    Order,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Inverse => "(i) inverse",
            Axiom::Composition => "(ii) composition",
            Axiom::Order => "(iii) order",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("space has no points")]
    EmptySpace,
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("expected one partial map per element ({expected}), got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("map of element {element} acts on {got} points, the space has {expected}")]
    WrongDegree { element: Element, expected: usize, got: usize },
    #[error("axiom {axiom} fails for s={s}, t={t} at point {point:?}")]
    AxiomViolation { axiom: Axiom, s: Element, t: Element, point: Option<Point> },
    #[error("point {0} lies in no idempotent domain (non-degeneracy)")]
    NotNondegenerate(Point),
    #[error("element {element} cannot be applied to point {point}")]
    NotApplicable { element: Element, point: Point },
    #[error("the acting semigroup is not E-unitary")]
    PreconditionNotEUnitary,
}

/// A finite set of labelled points with the discrete topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
}

impl FiniteSpace {
    pub fn new(labels: Vec<String>) -> Result<Self, ActionError> {
        if labels.is_empty() {
            return Err(ActionError::EmptySpace);
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(ActionError::DuplicateLabel(l.clone()));
            }
        }
        Ok(FiniteSpace { labels })
    }

    pub fn from_names(names: &[&str]) -> Result<Self, ActionError> {
        Self::new(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<Point> {
        0..self.labels.len()
    }

    pub fn all(&self) -> PointSet {
        self.points().collect()
    }

    pub fn label(&self, p: Point) -> &str {
        &self.labels[p]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<Point> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn fmt_set<'a>(&self, set: impl IntoIterator<Item = &'a Point>) -> String {
        let items: Vec<&str> = set.into_iter().map(|&p| self.label(p)).collect();
        format!("{{{}}}", items.join(","))
    }
}

/// A validated partial action `θ` of `S` on a finite space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAction {
    semigroup: InverseSemigroup,
    space: FiniteSpace,
    theta: Vec<PartialBijection>,
    genuine: bool,
}

impl PartialAction {
    /// Checks axioms (i)–(iv) and derives the genuine flag.
    pub fn validate(
        semigroup: InverseSemigroup,
        space: FiniteSpace,
        theta: Vec<PartialBijection>,
    ) -> Result<Self, ActionError> {
        let s = &semigroup;
        if theta.len() != s.len() {
            return Err(ActionError::WrongArity { expected: s.len(), got: theta.len() });
        }
        for (element, m) in theta.iter().enumerate() {
            if m.degree() != space.len() {
                return Err(ActionError::WrongDegree { element, expected: space.len(), got: m.degree() });
            }
        }
        for a in s.elements() {
            if theta[s.inv(a)] != theta[a].inverse() {
                let point = theta[a]
                    .pairs()
                    .find(|&(x, y)| theta[s.inv(a)].apply(y) != Some(x))
                    .map(|(x, _)| x)
                    .or_else(|| theta[s.inv(a)].pairs().next().map(|(x, _)| x));
                return Err(ActionError::AxiomViolation { axiom: Axiom::Inverse, s: a, t: s.inv(a), point });
            }
        }
        let mut genuine = true;
        for a in s.elements() {
            for b in s.elements() {
                let composite = theta[a].compose(&theta[b]);
                let target = &theta[s.mul(a, b)];
                if let Some((x, _)) = composite.pairs().find(|&(x, y)| target.apply(x) != Some(y)) {
                    return Err(ActionError::AxiomViolation { axiom: Axiom::Composition, s: a, t: b, point: Some(x) });
                }
                if composite != *target {
                    genuine = false;
                }
            }
        }
        for a in s.elements() {
            for b in s.elements() {
                if a != b && s.leq(a, b) {
                    if let Some((x, _)) = theta[a].pairs().find(|&(x, y)| theta[b].apply(x) != Some(y)) {
                        return Err(ActionError::AxiomViolation { axiom: Axiom::Order, s: a, t: b, point: Some(x) });
                    }
                }
            }
        }
        let mut covered = vec![false; space.len()];
        for e in s.idempotents() {
            for y in theta[e].image() {
                covered[y] = true;
            }
        }
        if let Some(p) = covered.iter().position(|c| !c) {
            return Err(ActionError::NotNondegenerate(p));
        }
        Ok(PartialAction { semigroup, space, theta, genuine })
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.semigroup
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn map(&self, s: Element) -> &PartialBijection {
        &self.theta[s]
    }

    pub fn maps(&self) -> &[PartialBijection] {
        &self.theta
    }

    pub fn is_genuine(&self) -> bool {
        self.genuine
    }

    #[inline]
    pub fn apply(&self, s: Element, p: Point) -> Option<Point> {
        self.theta[s].apply(p)
    }

    /// `θ_s(M)`.
    pub fn image_of(&self, s: Element, m: &PointSet) -> PointSet {
        m.iter().filter_map(|&p| self.apply(s, p)).collect()
    }

    /// `S{θ,σ}`: the elements whose map is defined at `σ`.
    pub fn applicable(&self, sigma: Point) -> ElementSet {
        self.semigroup.elements().filter(|&s| self.theta[s].in_domain(sigma)).collect()
    }

    /// `R[σ][τ]` iff some element sends `σ` to `τ`.
    pub fn orbit_relation(&self) -> Vec<Vec<bool>> {
        let m = self.space.len();
        let mut rel = vec![vec![false; m]; m];
        for map in &self.theta {
            for (x, y) in map.pairs() {
                rel[x][y] = true;
            }
        }
        rel
    }

    /// The orbit partition, sorted by least point. The orbit relation is
    /// checked to be an equivalence first.
    pub fn orbits(&self) -> Vec<PointSet> {
        let rel = self.orbit_relation();
        assert!(relation_is_equivalence(&rel), "orbit relation of a partial action is not an equivalence");
        partition_from_equivalence(&rel)
    }

    pub fn orbit(&self, sigma: Point) -> PointSet {
        self.theta.iter().filter_map(|m| m.apply(sigma)).collect()
    }

    /// On a discrete space the orbit closure is the orbit.
    pub fn orbit_closure(&self, sigma: Point) -> PointSet {
        self.orbit(sigma)
    }

    pub fn is_invariant(&self, m: &PointSet) -> bool {
        self.theta.iter().all(|map| m.iter().filter_map(|&p| map.apply(p)).all(|q| m.contains(&q)))
    }

    /// `s ↔_σ t`: a common lower bound of `s` and `t` is applicable at `σ`.
    pub fn point_equiv(&self, sigma: Point, s: Element, t: Element) -> Result<bool, ActionError> {
        for x in [s, t] {
            if !self.theta[x].in_domain(sigma) {
                return Err(ActionError::NotApplicable { element: x, point: sigma });
            }
        }
        let g = &self.semigroup;
        let related = g.elements().any(|r| self.theta[r].in_domain(sigma) && g.leq(r, s) && g.leq(r, t));
        if related {
            assert_eq!(self.apply(s, sigma), self.apply(t, sigma), "germ-equivalent elements disagree at the point");
        }
        Ok(related)
    }

    /// Partition of `S{θ,σ}` into `↔_σ` classes.
    pub fn germ_classes(&self, sigma: Point) -> GermClassTable {
        let g = &self.semigroup;
        let app: Vec<Element> = self.applicable(sigma).into_iter().collect();
        let below: Vec<ElementSet> =
            app.iter().map(|&s| app.iter().copied().filter(|&r| g.leq(r, s)).collect()).collect();
        let k = app.len();
        let rel: Vec<Vec<bool>> = (0..k).map(|i| (0..k).map(|j| !below[i].is_disjoint(&below[j])).collect()).collect();
        assert!(relation_is_equivalence(&rel), "point equivalence is not an equivalence");
        let mut class_of = vec![None; g.len()];
        let mut classes: Vec<Vec<Element>> = Vec::new();
        for i in 0..k {
            if class_of[app[i]].is_some() {
                continue;
            }
            let c = classes.len();
            let members: Vec<Element> = (0..k).filter(|&j| rel[i][j]).map(|j| app[j]).collect();
            for &x in &members {
                class_of[x] = Some(c);
            }
            classes.push(members);
        }
        GermClassTable { point: sigma, class_of, classes }
    }

    /// `S(θ)_M^N = {s : θ_s(M) ∩ N ≠ ∅}`.
    pub fn naive_recurrence(&self, m: &PointSet, n: &PointSet) -> ElementSet {
        self.semigroup
            .elements()
            .filter(|&s| m.iter().any(|&p| self.apply(s, p).is_some_and(|q| n.contains(&q))))
            .collect()
    }

    /// Germ classes at `σ` of the naïve set `S(θ)_σ^N`, as class ids of
    /// [`PartialAction::germ_classes`].
    pub fn recurrence(&self, sigma: Point, n: &PointSet) -> BTreeSet<usize> {
        self.germ_classes(sigma).recurrence(self, n)
    }

    /// Classes of the naïve set `S(θ)_M^N` under the minimum group congruence.
    pub fn set_recurrence(&self, m: &PointSet, n: &PointSet) -> Result<BTreeSet<usize>, crate::isg::IsgError> {
        let c = Congruence::min_group(&self.semigroup)?;
        Ok(self.set_recurrence_with(&c, m, n))
    }

    pub fn set_recurrence_with(&self, c: &Congruence, m: &PointSet, n: &PointSet) -> BTreeSet<usize> {
        self.naive_recurrence(m, n).into_iter().map(|s| c.class_of(s)).collect()
    }

    pub fn fmt_elements<'a>(&self, set: impl IntoIterator<Item = &'a Element>) -> String {
        self.semigroup.fmt_set(set)
    }

    pub fn fmt_points<'a>(&self, set: impl IntoIterator<Item = &'a Point>) -> String {
        self.space.fmt_set(set)
    }
}

/// The classes of `↔_σ` on `S{θ,σ}`, numbered by least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermClassTable {
    point: Point,
    class_of: Vec<Option<usize>>,
    classes: Vec<Vec<Element>>,
}

impl GermClassTable {
    pub fn point(&self) -> Point {
        self.point
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `π_σ(s)`; `None` when `s` is not applicable at the point.
    pub fn class_of(&self, s: Element) -> Option<usize> {
        self.class_of[s]
    }

    pub fn classes(&self) -> &[Vec<Element>] {
        &self.classes
    }

    pub fn class(&self, c: usize) -> &[Element] {
        &self.classes[c]
    }

    pub fn representative(&self, c: usize) -> Element {
        self.classes[c][0]
    }

    /// `π_σ[R]` for `R ⊆ S{θ,σ}`; inapplicable elements are skipped.
    pub fn project<'a>(&self, set: impl IntoIterator<Item = &'a Element>) -> BTreeSet<usize> {
        set.into_iter().filter_map(|&s| self.class_of(s)).collect()
    }

    pub fn recurrence(&self, action: &PartialAction, n: &PointSet) -> BTreeSet<usize> {
        let m = PointSet::from([self.point]);
        self.project(&action.naive_recurrence(&m, n))
    }
}

pub(crate) fn relation_is_equivalence(rel: &[Vec<bool>]) -> bool {
    let k = rel.len();
    (0..k).all(|i| rel[i][i])
        && (0..k).all(|i| (0..k).all(|j| rel[i][j] == rel[j][i]))
        && (0..k).all(|i| (0..k).all(|j| !rel[i][j] || (0..k).all(|l| !rel[j][l] || rel[i][l])))
}

pub(crate) fn partition_from_equivalence(rel: &[Vec<bool>]) -> Vec<PointSet> {
    let k = rel.len();
    let mut seen = vec![false; k];
    let mut parts = Vec::new();
    for i in 0..k {
        if seen[i] {
            continue;
        }
        let part: PointSet = (0..k).filter(|&j| rel[i][j]).collect();
        for &j in &part {
            seen[j] = true;
        }
        parts.push(part);
    }
    parts
}

/// Consequences of the partial action axioms, checked on the instance.
pub fn check_action_axioms(action: &PartialAction) -> CheckReport {
    let s = action.semigroup();
    let mut r = CheckReport::new("axioms.partial_action", "");
    for e in s.idempotents() {
        let m = action.map(e);
        r.require(m.pairs().all(|(x, y)| x == y), || format!("theta_{} is not the identity on its domain", s.label(e)));
    }
    for a in s.elements() {
        let ai = s.inv(a);
        r.require(action.map(a).domain() == action.map(ai).image(), || {
            format!("dom theta_{} != im theta_{}", s.label(a), s.label(ai))
        });
        r.require(action.map(a).domain().is_subset(&action.map(s.mul(ai, a)).domain()), || {
            format!("dom theta_{0} not inside dom theta_{0}#{0}", s.label(a))
        });
        r.require(action.map(a).image().is_subset(&action.map(s.mul(a, ai)).image()), || {
            format!("im theta_{0} not inside im theta_{0}{0}#", s.label(a))
        });
        for b in s.elements() {
            // Σ_t ∩ θ_t(Σ_s) ⊆ Σ_{ts} with t = a, s = b
            let moved = action.image_of(a, &action.map(b).image());
            let target = action.map(s.mul(a, b)).image();
            r.require(moved.is_subset(&target), || {
                format!("theta_{}(Sigma_{}) not inside Sigma_{}", s.label(a), s.label(b), s.label(s.mul(a, b)))
            });
        }
    }
    for p in action.space().points() {
        let app = action.applicable(p);
        for &t in &app {
            let q = action.apply(t, p).unwrap();
            for u in action.applicable(q) {
                r.require(app.contains(&s.mul(u, t)), || {
                    format!("{}·{} not applicable at {}", s.label(u), s.label(t), action.space().label(p))
                });
            }
        }
    }
    r.require(relation_is_equivalence(&action.orbit_relation()), || "orbit relation is not an equivalence".into());
    let genuine =
        s.elements().all(|a| s.elements().all(|b| action.map(a).compose(action.map(b)) == *action.map(s.mul(a, b))));
    r.require(genuine == action.is_genuine(), || "genuine flag disagrees with recomputation".into());
    r.size("elements", s.len());
    r.size("points", action.space().len());
    r.note(if action.is_genuine() { "genuine" } else { "partial" });
    r
}

/// Properties of the naïve recurrence set for one pair `(M, N)`.
pub fn check_naive_recurrence(action: &PartialAction, m: &PointSet, n: &PointSet) -> CheckReport {
    let s = action.semigroup();
    let sp = action.space();
    let mut r = CheckReport::new("recurrence.naive", format!("M={} N={}", sp.fmt_set(m), sp.fmt_set(n)));
    let naive = action.naive_recurrence(m, n);
    r.size("naive", naive.len());
    for &a in &naive {
        for b in s.elements() {
            if s.leq(a, b) {
                r.require(naive.contains(&b), || format!("{} in set, {} above it is not", s.label(a), s.label(b)));
            }
        }
    }
    let union: ElementSet = m.iter().flat_map(|&p| action.naive_recurrence(&PointSet::from([p]), n)).collect();
    r.require(union == naive, || "set is not the union of its singleton pieces".into());
    for &p in m {
        let from_p = action.naive_recurrence(&PointSet::from([p]), &sp.all());
        r.require(from_p == action.applicable(p), || {
            format!("S(theta)_{}^Sigma != S{{theta,{}}}", sp.label(p), sp.label(p))
        });
        for &q in n {
            let single = action.naive_recurrence(&PointSet::from([p]), &PointSet::from([q]));
            let same_orbit = action.orbit(p).contains(&q);
            r.require(single.is_empty() != same_orbit, || {
                format!("S(theta)_{}^{} emptiness disagrees with orbits", sp.label(p), sp.label(q))
            });
            let back = action.naive_recurrence(&PointSet::from([q]), &PointSet::from([p]));
            for &x in &single {
                r.require(back.contains(&s.inv(x)), || format!("{}# missing from the reverse set", s.label(x)));
                for &y in &single {
                    for &z in &single {
                        let w = s.mul(s.mul(x, s.inv(y)), z);
                        r.require(single.contains(&w), || {
                            format!("{}·{}#·{} missing", s.label(x), s.label(y), s.label(z))
                        });
                    }
                }
            }
            if p == q {
                let closed = single
                    .iter()
                    .all(|&x| single.contains(&s.inv(x)) && single.iter().all(|&y| single.contains(&s.mul(x, y))));
                r.require(closed, || format!("S(theta)_{0}^{0} is not an inverse subsemigroup", sp.label(p)));
            }
        }
    }
    r
}

/// The set-valued recurrence set through the minimum group congruence, and
/// its relation to the pointwise recurrence sets.
pub fn check_set_recurrence(action: &PartialAction, min_group: &Congruence, m: &PointSet, n: &PointSet) -> CheckReport {
    let s = action.semigroup();
    let sp = action.space();
    let mut r = CheckReport::new("recurrence.set", format!("M={} N={}", sp.fmt_set(m), sp.fmt_set(n)));
    let global = action.set_recurrence_with(min_group, m, n);
    let mut via_points = BTreeSet::new();
    let e_unitary = s.is_e_unitary();
    let mut pointwise_total = 0;
    for &p in m {
        let table = action.germ_classes(p);
        let classes = table.recurrence(action, n);
        pointwise_total += classes.len();
        let images: BTreeSet<usize> = classes.iter().map(|&c| min_group.class_of(table.representative(c))).collect();
        if e_unitary {
            r.require(images.len() == classes.len(), || {
                format!("germ classes at {} collapse under the global congruence", sp.label(p))
            });
        }
        via_points.extend(images);
    }
    r.size("set_classes", global.len());
    r.size("pointwise_classes", pointwise_total);
    r.size("union_of_images", via_points.len());
    r.require(global == via_points, || "classes of S(theta)_M^N differ from the union of pointwise images".into());
    if !e_unitary {
        r.note("semigroup is not E-unitary; pointwise classes may merge globally");
    }
    r
}

/// For E-unitary semigroups, `↔` and `↔_σ` agree on `S{θ,σ}`; on every
/// action `↔_σ` implies `↔` (see [`check_lemma_one_direction`]).
pub fn check_lemma_e_unitary(action: &PartialAction) -> Result<CheckReport, ActionError> {
    let s = action.semigroup();
    if !s.is_e_unitary() {
        return Err(ActionError::PreconditionNotEUnitary);
    }
    let mut r = CheckReport::new("lemma.e_unitary", "");
    let mut pairs = 0;
    for p in action.space().points() {
        let app = action.applicable(p);
        for &a in &app {
            for &b in &app {
                pairs += 1;
                let global = s.share_lower_bound(a, b);
                let local = action.point_equiv(p, a, b)?;
                r.require(global == local, || {
                    format!(
                        "at {}: {} and {} global={global} local={local}",
                        action.space().label(p),
                        s.label(a),
                        s.label(b)
                    )
                });
                if global {
                    let meet = s.compatible_meet(a, b);
                    r.require(meet.is_some_and(|m| action.map(m).in_domain(p)), || {
                        format!(
                            "meet of {} and {} not applicable at {}",
                            s.label(a),
                            s.label(b),
                            action.space().label(p)
                        )
                    });
                }
            }
        }
    }
    r.size("pairs", pairs);
    Ok(r)
}

pub fn check_lemma_one_direction(action: &PartialAction) -> CheckReport {
    let s = action.semigroup();
    let mut r = CheckReport::new("lemma.one_direction", "");
    let mut pairs = 0;
    for p in action.space().points() {
        let app = action.applicable(p);
        for &a in &app {
            for &b in &app {
                pairs += 1;
                if action.point_equiv(p, a, b).expect("applicable") {
                    r.require(s.share_lower_bound(a, b), || {
                        format!(
                            "{} <->_{} {} but not globally related",
                            s.label(a),
                            action.space().label(p),
                            s.label(b)
                        )
                    });
                }
            }
        }
    }
    r.size("pairs", pairs);
    r
}

/// Axioms of the acting semigroup and their standard consequences.
pub fn check_semigroup_axioms(s: &InverseSemigroup) -> CheckReport {
    let mut r = CheckReport::new("axioms.inverse_semigroup", "");
    for a in s.elements() {
        r.require(s.inv(s.inv(a)) == a, || format!("{0}## != {0}", s.label(a)));
        for b in s.elements() {
            let ab = s.mul(a, b);
            r.require(s.inv(ab) == s.mul(s.inv(b), s.inv(a)), || {
                format!("({}{})# != {}#{}#", s.label(a), s.label(b), s.label(b), s.label(a))
            });
            let l = s.leq(a, b);
            r.require(l == s.leq_by_left_idempotent(a, b) && l == s.leq_by_right_idempotent(a, b), || {
                format!("order reformulations disagree on ({}, {})", s.label(a), s.label(b))
            });
            if s.is_idempotent(a) && s.is_idempotent(b) {
                r.require(s.mul(a, b) == s.mul(b, a), || {
                    format!("idempotents {} and {} do not commute", s.label(a), s.label(b))
                });
                r.require(s.is_idempotent(ab), || "idempotents are not closed".into());
                r.require(l == (a == s.mul(b, a)), || {
                    format!("order on idempotents wrong at ({}, {})", s.label(a), s.label(b))
                });
            }
        }
    }
    if s.len() <= crate::isg::CONGRUENCE_CAP {
        match Congruence::min_group(s) {
            Ok(c) => {
                match c.quotient(s) {
                    Ok((q, _)) => {
                        r.require(q.is_group(), || "maximum group image is not a group".into());
                        r.size("max_group_image", q.len());
                    }
                    Err(e) => r.fail(format!("min group quotient: {e}")),
                }
                if s.is_e_unitary() {
                    r.require(c.is_idempotent_pure(s), || {
                        "E-unitary but min group congruence not idempotent pure".into()
                    });
                }
            }
            Err(e) => r.fail(format!("min group congruence: {e}")),
        }
    }
    r.size("elements", s.len());
    r.size("idempotents", s.idempotents().len());
    r.note(if s.is_e_unitary() { "E-unitary" } else { "not E-unitary" });
    r
}
