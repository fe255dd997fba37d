//! Finite groupoids and the groupoid of germs of a partial action.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::dynamics::{GermClassTable, PartialAction, Point, PointSet};
use crate::isg::{Congruence, Element, ElementSet, InverseSemigroup};
use crate::report::CheckReport;

pub type Arrow = usize;
pub type ArrowSet = BTreeSet<Arrow>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("groupoid has no arrows")]
    Empty,
    #[error("duplicate arrow label {0:?}")]
    DuplicateLabel(String),
    #[error("arrow index {0} out of range")]
    OutOfRange(usize),
    #[error("bad unit structure: {0}")]
    BadUnit(String),
    #[error("product of {0} and {1} is given twice")]
    DuplicateProduct(Arrow, Arrow),
    #[error("missing product of composable arrows {0} and {1}")]
    MissingProduct(Arrow, Arrow),
    #[error("product given for non-composable arrows {0} and {1}")]
    NotComposable(Arrow, Arrow),
    #[error("composition is not associative at ({0}, {1}, {2})")]
    NotAssociative(Arrow, Arrow, Arrow),
    #[error("arrow {0} has no inverse")]
    BadInverse(Arrow),
    #[error("germ product depends on representatives at {0}")]
    NotWellDefined(String),
}

/// A finite groupoid. Units are arrows with `d(u) = r(u) = u`; `d` and `r`
/// return unit arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    labels: Vec<String>,
    d: Vec<Arrow>,
    r: Vec<Arrow>,
    inverse: Vec<Arrow>,
    compose: Vec<Option<Arrow>>,
    units: Vec<Arrow>,
}

impl FiniteGroupoid {
    /// Validates source and range maps and a product list `(ξ, η, ξη)` that
    /// must cover exactly the pairs with `d(ξ) = r(η)`.
    pub fn validate(
        labels: Vec<String>,
        d: Vec<Arrow>,
        r: Vec<Arrow>,
        products: &[(Arrow, Arrow, Arrow)],
    ) -> Result<Self, GroupoidError> {
        let n = labels.len();
        if n == 0 {
            return Err(GroupoidError::Empty);
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GroupoidError::DuplicateLabel(l.clone()));
            }
        }
        if d.len() != n || r.len() != n {
            return Err(GroupoidError::BadUnit("source and range must be given for every arrow".into()));
        }
        if let Some(&bad) = d.iter().chain(&r).find(|&&x| x >= n) {
            return Err(GroupoidError::OutOfRange(bad));
        }
        for x in 0..n {
            for u in [d[x], r[x]] {
                if d[u] != u || r[u] != u {
                    return Err(GroupoidError::BadUnit(format!("{} is used as a unit but is not one", labels[u])));
                }
            }
        }
        let mut compose = vec![None; n * n];
        for &(x, y, z) in products {
            if let Some(&bad) = [x, y, z].iter().find(|&&a| a >= n) {
                return Err(GroupoidError::OutOfRange(bad));
            }
            if d[x] != r[y] {
                return Err(GroupoidError::NotComposable(x, y));
            }
            if compose[x * n + y].replace(z).is_some() {
                return Err(GroupoidError::DuplicateProduct(x, y));
            }
        }
        let g = FiniteGroupoid { labels, d, r, inverse: Vec::new(), compose, units: Vec::new() };
        for x in 0..n {
            for y in 0..n {
                if g.d[x] != g.r[y] {
                    continue;
                }
                let xy = g.compose[x * n + y].ok_or(GroupoidError::MissingProduct(x, y))?;
                if g.d[xy] != g.d[y] || g.r[xy] != g.r[x] {
                    return Err(GroupoidError::BadUnit(format!(
                        "d/r of {}·{} are not d({}) and r({})",
                        g.labels[x], g.labels[y], g.labels[y], g.labels[x]
                    )));
                }
            }
        }
        for x in 0..n {
            if g.compose[x * n + g.d[x]] != Some(x) || g.compose[g.r[x] * n + x] != Some(x) {
                return Err(GroupoidError::BadUnit(format!("units do not act as identities on {}", g.labels[x])));
            }
        }
        for x in 0..n {
            for y in (0..n).filter(|&y| g.d[x] == g.r[y]) {
                let xy = g.compose[x * n + y].unwrap();
                for z in (0..n).filter(|&z| g.d[y] == g.r[z]) {
                    let yz = g.compose[y * n + z].unwrap();
                    if g.compose[xy * n + z] != g.compose[x * n + yz] {
                        return Err(GroupoidError::NotAssociative(x, y, z));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| {
                    g.d[y] == g.r[x]
                        && g.r[y] == g.d[x]
                        && g.compose[y * n + x] == Some(g.d[x])
                        && g.compose[x * n + y] == Some(g.r[x])
                })
                .ok_or(GroupoidError::BadInverse(x))?;
            inverse.push(inv);
        }
        let units = (0..n).filter(|&x| g.d[x] == x).collect();
        Ok(FiniteGroupoid { inverse, units, ..g })
    }

    /// A group as a groupoid with one unit.
    pub fn from_group(g: &InverseSemigroup) -> Result<Self, GroupoidError> {
        if !g.is_group() {
            return Err(GroupoidError::BadUnit("not a group".into()));
        }
        let e = g.idempotents().into_iter().next().expect("groups have an identity");
        let n = g.len();
        let products: Vec<_> =
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| (x, y, g.mul(x, y))).collect();
        Self::validate(g.labels().to_vec(), vec![e; n], vec![e; n], &products)
    }

    /// Pair groupoid on `1..=n`: arrow `(i,j)` goes from `j` to `i`, and
    /// `(i,j)(j,k) = (i,k)`. Arrow `(i,j)` has index `(i-1)·n + (j-1)`.
    pub fn pair(n: usize) -> Result<Self, GroupoidError> {
        let labels = (0..n * n).map(|x| format!("({},{})", x / n + 1, x % n + 1)).collect();
        let d = (0..n * n).map(|x| (x % n) * n + x % n).collect();
        let r = (0..n * n).map(|x| (x / n) * n + x / n).collect();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    products.push((i * n + j, j * n + k, i * n + k));
                }
            }
        }
        Self::validate(labels, d, r, &products)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn arrows(&self) -> std::ops::Range<Arrow> {
        0..self.labels.len()
    }

    pub fn label(&self, x: Arrow) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<Arrow> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn d(&self, x: Arrow) -> Arrow {
        self.d[x]
    }

    pub fn r(&self, x: Arrow) -> Arrow {
        self.r[x]
    }

    pub fn inv(&self, x: Arrow) -> Arrow {
        self.inverse[x]
    }

    pub fn units(&self) -> &[Arrow] {
        &self.units
    }

    pub fn is_unit(&self, x: Arrow) -> bool {
        self.d[x] == x
    }

    /// `ξη`, defined when `d(ξ) = r(η)`.
    pub fn compose(&self, x: Arrow, y: Arrow) -> Option<Arrow> {
        self.compose[x * self.len() + y]
    }

    /// All `(ξ, η, ξη)`, in index order.
    pub fn products(&self) -> Vec<(Arrow, Arrow, Arrow)> {
        let n = self.len();
        (0..n).flat_map(|x| (0..n).filter_map(move |y| self.compose(x, y).map(|z| (x, y, z)))).collect()
    }

    /// `Ξ_M^N = d⁻¹(M) ∩ r⁻¹(N)` for unit sets `M`, `N`.
    pub fn restriction(&self, m: &ArrowSet, n: &ArrowSet) -> ArrowSet {
        self.arrows().filter(|&x| m.contains(&self.d[x]) && n.contains(&self.r[x])).collect()
    }

    pub fn fmt_set<'a>(&self, set: impl IntoIterator<Item = &'a Arrow>) -> String {
        let items: Vec<&str> = set.into_iter().map(|&x| self.label(x)).collect();
        format!("{{{}}}", items.join(","))
    }

    /// Graphviz rendering: one node per unit, one edge `d(ξ) → r(ξ)` per
    /// non-unit arrow.
    pub fn to_dot(&self, name: &str) -> String {
        let node = |u: Arrow| self.units.iter().position(|&v| v == u).expect("unit");
        let mut out = format!("digraph \"{name}\" {{\n");
        for (i, &u) in self.units.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", self.label(u));
        }
        for x in self.arrows().filter(|&x| !self.is_unit(x)) {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", node(self.d[x]), node(self.r[x]), self.label(x));
        }
        out.push_str("}\n");
        out
    }
}

/// The groupoid `S ▷_θ Σ` of germs `⟨s,σ⟩`, with unit space identified with
/// the points of `Σ`. Germs are ordered by point, then by least element.
#[derive(Debug, Clone)]
pub struct GermGroupoid {
    action: PartialAction,
    tables: Vec<GermClassTable>,
    offsets: Vec<Arrow>,
    germs: Vec<(Element, Point)>,
    unit_of_point: Vec<Arrow>,
    groupoid: FiniteGroupoid,
    products_checked: usize,
}

impl GermGroupoid {
    pub fn new(action: &PartialAction) -> Result<Self, GroupoidError> {
        let s = action.semigroup();
        let sp = action.space();
        let tables: Vec<GermClassTable> = sp.points().map(|p| action.germ_classes(p)).collect();
        let mut offsets = Vec::with_capacity(sp.len() + 1);
        let mut germs = Vec::new();
        for (p, t) in tables.iter().enumerate() {
            offsets.push(germs.len());
            germs.extend((0..t.len()).map(|c| (t.representative(c), p)));
        }
        offsets.push(germs.len());
        let germ_of = |x: Element, p: Point| tables[p].class_of(x).map(|c| offsets[p] + c);
        let mut unit_of_point = Vec::with_capacity(sp.len());
        for p in sp.points() {
            let units: BTreeSet<Arrow> = s.idempotents().into_iter().filter_map(|e| germ_of(e, p)).collect();
            if units.len() != 1 {
                return Err(GroupoidError::BadUnit(format!(
                    "{} distinct idempotent germs at {}",
                    units.len(),
                    sp.label(p)
                )));
            }
            unit_of_point.push(*units.first().unwrap());
        }
        let labels: Vec<String> = germs.iter().map(|&(x, p)| format!("<{}|{}>", s.label(x), sp.label(p))).collect();
        let d: Vec<Arrow> = germs.iter().map(|&(_, p)| unit_of_point[p]).collect();
        let r: Vec<Arrow> =
            germs.iter().map(|&(x, p)| unit_of_point[action.apply(x, p).expect("applicable")]).collect();
        let mut products = Vec::new();
        let mut products_checked = 0;
        for (eta, &(x, p)) in germs.iter().enumerate() {
            let q = action.apply(x, p).unwrap();
            let eta_class = tables[p].class(tables[p].class_of(x).unwrap());
            for (c, xi_class) in tables[q].classes().iter().enumerate() {
                let xi = offsets[q] + c;
                let mut results = BTreeSet::new();
                for &t in xi_class {
                    for &u in eta_class {
                        products_checked += 1;
                        let tu = s.mul(t, u);
                        match germ_of(tu, p) {
                            Some(g) => {
                                results.insert(g);
                            }
                            None => {
                                return Err(GroupoidError::NotWellDefined(format!(
                                    "{}·{} not applicable at {}",
                                    s.label(t),
                                    s.label(u),
                                    sp.label(p)
                                )))
                            }
                        }
                    }
                }
                if results.len() != 1 {
                    return Err(GroupoidError::NotWellDefined(format!("{} · {}", labels[xi], labels[eta])));
                }
                products.push((xi, eta, *results.first().unwrap()));
            }
        }
        let groupoid = FiniteGroupoid::validate(labels, d, r, &products)?;
        for (xi, &(x, p)) in germs.iter().enumerate() {
            let q = action.apply(x, p).unwrap();
            let star = germ_of(s.inv(x), q);
            if star != Some(groupoid.inv(xi)) {
                return Err(GroupoidError::BadInverse(xi));
            }
        }
        Ok(GermGroupoid { action: action.clone(), tables, offsets, germs, unit_of_point, groupoid, products_checked })
    }

    pub fn action(&self) -> &PartialAction {
        &self.action
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn len(&self) -> usize {
        self.germs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.germs.is_empty()
    }

    /// Number of `(t, s)` representative pairs compared while building the
    /// product table.
    pub fn products_checked(&self) -> usize {
        self.products_checked
    }

    pub fn table(&self, p: Point) -> &GermClassTable {
        &self.tables[p]
    }

    /// `⟨s,σ⟩`, or `None` when `s` does not apply at `σ`.
    pub fn germ(&self, s: Element, p: Point) -> Option<Arrow> {
        self.tables[p].class_of(s).map(|c| self.offsets[p] + c)
    }

    /// Least `(s, σ)` in the germ.
    pub fn representative(&self, xi: Arrow) -> (Element, Point) {
        self.germs[xi]
    }

    pub fn unit(&self, p: Point) -> Arrow {
        self.unit_of_point[p]
    }

    pub fn source(&self, xi: Arrow) -> Point {
        self.germs[xi].1
    }

    pub fn target(&self, xi: Arrow) -> Point {
        let (s, p) = self.germs[xi];
        self.action.apply(s, p).unwrap()
    }

    pub fn units_of(&self, m: &PointSet) -> ArrowSet {
        m.iter().map(|&p| self.unit(p)).collect()
    }

    /// `(S ▷ Σ)_M^N`.
    pub fn restriction(&self, m: &PointSet, n: &PointSet) -> ArrowSet {
        self.groupoid.restriction(&self.units_of(m), &self.units_of(n))
    }

    /// `Θ(s,σ) = (θ_s(σ), σ)`.
    pub fn theta(&self, s: Element, p: Point) -> Option<(Point, Point)> {
        self.action.apply(s, p).map(|q| (q, p))
    }

    /// `Θ̂⟨s,σ⟩`, checked to agree on every member of the germ.
    pub fn theta_hat(&self, xi: Arrow) -> (Point, Point) {
        let (s, p) = self.germs[xi];
        let t = &self.tables[p];
        let pair = self.theta(s, p).unwrap();
        for &x in t.class(t.class_of(s).unwrap()) {
            assert_eq!(self.theta(x, p), Some(pair), "theta_hat depends on the representative");
        }
        pair
    }

    /// `γ_σ⟨s,σ⟩ = ⟨s⟩_σ` on germs with source `σ`.
    pub fn gamma_sigma(&self, p: Point) -> Vec<(Arrow, usize)> {
        (self.offsets[p]..self.offsets[p + 1]).map(|xi| (xi, xi - self.offsets[p])).collect()
    }

    /// `Γ(R) = {⟨s,σ⟩ : s ∈ R, σ ∈ dom θ_s}`.
    pub fn big_gamma(&self, r: &ElementSet) -> ArrowSet {
        r.iter()
            .flat_map(|&s| self.action.map(s).domain().into_iter().map(move |p| (s, p)))
            .filter_map(|(s, p)| self.germ(s, p))
            .collect()
    }

    /// `Γ` with sources restricted to `M`.
    pub fn big_gamma_from(&self, r: &ElementSet, m: &PointSet) -> ArrowSet {
        self.big_gamma(r).into_iter().filter(|&xi| m.contains(&self.source(xi))).collect()
    }

    /// Points as nodes, one edge `σ → θ_s(σ)` per germ labelled by its
    /// least element.
    pub fn to_dot(&self, name: &str) -> String {
        let sp = self.action.space();
        let s = self.action.semigroup();
        let mut out = format!("digraph \"{name}\" {{\n");
        for p in sp.points() {
            let _ = writeln!(out, "  n{p} [label=\"{}\"];", sp.label(p));
        }
        for (xi, &(x, p)) in self.germs.iter().enumerate() {
            let _ = writeln!(out, "  n{p} -> n{} [label=\"{}\"];", self.target(xi), s.label(x));
        }
        out.push_str("}\n");
        out
    }
}

/// Construction invariants: unit germs, the canonical action identity, the
/// group case and the E-unitary case of germ equivalence.
pub fn check_germ_groupoid(gg: &GermGroupoid) -> CheckReport {
    let a = gg.action();
    let s = a.semigroup();
    let g = gg.groupoid();
    let mut r = CheckReport::new("germ.groupoid", "");
    r.size("germs", gg.len());
    r.size("representative_pairs", gg.products_checked());
    for p in a.space().points() {
        for e in s.idempotents() {
            if let Some(u) = gg.germ(e, p) {
                r.require(u == gg.unit(p), || format!("<{}|{}> is not the unit", s.label(e), a.space().label(p)));
            }
        }
    }
    for xi in g.arrows() {
        let (x, p) = gg.representative(xi);
        // ⟨s,σ⟩⟨s♯s,σ⟩⟨s,σ⟩⁻¹ is the unit at θ_s(σ)
        let support = gg.germ(s.mul(s.inv(x), x), p).expect("s♯s applies where s does");
        let conj = g.compose(xi, support).and_then(|y| g.compose(y, g.inv(xi)));
        r.require(conj == Some(gg.unit(gg.target(xi))), || {
            format!("canonical action identity fails at {}", g.label(xi))
        });
        r.require(g.d(xi) == gg.unit(p) && g.r(xi) == gg.unit(gg.target(xi)), || {
            format!("d/r of {} wrong", g.label(xi))
        });
        let _ = gg.theta_hat(xi);
    }
    if s.is_group() {
        for p in a.space().points() {
            r.require(gg.table(p).len() == a.applicable(p).len(), || {
                format!("germ equivalence is not equality at {}", a.space().label(p))
            });
        }
    }
    if s.is_e_unitary() {
        for p in a.space().points() {
            let app = a.applicable(p);
            for &x in &app {
                for &y in &app {
                    let same = gg.germ(x, p) == gg.germ(y, p);
                    r.require(same == s.share_lower_bound(x, y), || {
                        format!("germ equivalence depends on the action for {} and {}", s.label(x), s.label(y))
                    });
                }
            }
        }
    }
    r
}

/// `(S ▷ Σ)_M^N = Θ̂⁻¹(N × M)` and `S(θ)_M^N = 𝔭₁[Θ⁻¹(N × M)]`, plus the
/// section remark `J[(S ▷ Σ)_M^N] ⊆ S(θ)_M^N`.
pub fn check_aha(gg: &GermGroupoid, m: &PointSet, n: &PointSet) -> CheckReport {
    let a = gg.action();
    let sp = a.space();
    let mut r = CheckReport::new("germ.groupoid_recurrence", format!("M={} N={}", sp.fmt_set(m), sp.fmt_set(n)));
    let germ_side = gg.restriction(m, n);
    let preimage: ArrowSet = gg
        .groupoid()
        .arrows()
        .filter(|&xi| {
            let (q, p) = gg.theta_hat(xi);
            n.contains(&q) && m.contains(&p)
        })
        .collect();
    r.size("restriction", germ_side.len());
    r.size("theta_hat_preimage", preimage.len());
    r.require(germ_side == preimage, || "restriction differs from the preimage under theta_hat".into());
    let naive = a.naive_recurrence(m, n);
    let projected: ElementSet = a
        .semigroup()
        .elements()
        .filter(|&x| sp.points().any(|p| gg.theta(x, p).is_some_and(|(q, p)| n.contains(&q) && m.contains(&p))))
        .collect();
    r.size("naive", naive.len());
    r.size("projected_preimage", projected.len());
    r.require(naive == projected, || "naive set differs from the projected preimage under theta".into());
    let j_image: ElementSet = germ_side.iter().map(|&xi| gg.representative(xi).0).collect();
    r.size("section_image", j_image.len());
    r.require(j_image.is_subset(&naive), || "section image is not inside the naive set".into());
    if j_image.len() < naive.len() {
        r.note("section image is a strict subset");
    }
    r
}

/// Orbits and invariant sets of the canonical action of the germ groupoid
/// agree with those of `θ`.
pub fn check_enoeno(gg: &GermGroupoid, seed: u64) -> CheckReport {
    let a = gg.action();
    let sp = a.space();
    let mut r = CheckReport::new("germ.same_orbits", "");
    let k = sp.len();
    let mut rel = vec![vec![false; k]; k];
    for xi in gg.groupoid().arrows() {
        rel[gg.source(xi)][gg.target(xi)] = true;
    }
    r.require(rel == a.orbit_relation(), || "groupoid orbit relation differs".into());
    let groupoid_invariant =
        |m: &PointSet| gg.groupoid().arrows().all(|xi| !m.contains(&gg.source(xi)) || m.contains(&gg.target(xi)));
    let points: Vec<Point> = sp.points().collect();
    let (subsets, sampled) = crate::sets::subsets_or_sample(&points, crate::sets::BATTERY_EXHAUSTIVE_LIMIT, seed);
    for m in &subsets {
        r.require(groupoid_invariant(m) == a.is_invariant(m), || format!("invariance of {} differs", sp.fmt_set(m)));
    }
    r.size("subsets", subsets.len());
    if sampled {
        r.seed = Some(seed);
    }
    r
}

/// `γ_σ` is a bijection `(S ▷ Σ)_σ → 𝒮{θ,σ}` carrying `(S ▷ Σ)_σ^N` onto
/// `𝒮(θ)_σ^N`.
pub fn check_bucuros(gg: &GermGroupoid, sigma: Point, n: &PointSet) -> CheckReport {
    let a = gg.action();
    let sp = a.space();
    let mut r = CheckReport::new("germ.pointwise_bijection", format!("at={} N={}", sp.label(sigma), sp.fmt_set(n)));
    let gamma = gg.gamma_sigma(sigma);
    let table = gg.table(sigma);
    let sources: ArrowSet = gg.groupoid().arrows().filter(|&xi| gg.source(xi) == sigma).collect();
    let domain: ArrowSet = gamma.iter().map(|&(xi, _)| xi).collect();
    let image: BTreeSet<usize> = gamma.iter().map(|&(_, c)| c).collect();
    r.require(domain == sources, || "gamma_sigma is not defined on exactly the germs at sigma".into());
    r.require(image.len() == gamma.len(), || "gamma_sigma is not injective".into());
    r.require(image.len() == table.len(), || "gamma_sigma is not onto the germ classes".into());
    for &(xi, c) in &gamma {
        let (x, _) = gg.representative(xi);
        r.require(table.class_of(x) == Some(c), || {
            format!("gamma_sigma({}) is the wrong class", gg.groupoid().label(xi))
        });
    }
    let restricted = gg.restriction(&PointSet::from([sigma]), n);
    let mapped: BTreeSet<usize> = gamma.iter().filter(|(xi, _)| restricted.contains(xi)).map(|&(_, c)| c).collect();
    let rec = table.recurrence(a, n);
    r.size("germs", restricted.len());
    r.size("classes", rec.len());
    r.require(mapped == rec && restricted.len() == rec.len(), || {
        "gamma_sigma does not match the recurrence set".into()
    });
    r
}

/// `(S ▷ Σ)_M^N ⊆ Γ[S(θ)_M^N]`, and with sources restricted to `M` the
/// inclusion becomes an equality for singleton `M`.
pub fn check_ohanesian(gg: &GermGroupoid, m: &PointSet, n: &PointSet) -> CheckReport {
    let a = gg.action();
    let sp = a.space();
    let g = gg.groupoid();
    let mut r = CheckReport::new("germ.gamma_inclusion", format!("M={} N={}", sp.fmt_set(m), sp.fmt_set(n)));
    let germ_side = gg.restriction(m, n);
    let naive = a.naive_recurrence(m, n);
    let gamma = gg.big_gamma(&naive);
    let gamma_m = gg.big_gamma_from(&naive, m);
    r.size("restriction", germ_side.len());
    r.size("gamma", gamma.len());
    r.size("gamma_from_m", gamma_m.len());
    r.require(germ_side.is_subset(&gamma), || "restriction is not inside Gamma".into());
    r.require(germ_side.is_subset(&gamma_m), || "restriction is not inside Gamma from M".into());
    if m.len() == 1 {
        r.require(germ_side == gamma_m, || {
            format!("singleton M: restriction {} vs Gamma from M {}", g.fmt_set(&germ_side), g.fmt_set(&gamma_m))
        });
        if germ_side != gamma {
            r.note(format!(
                "unrestricted Gamma adds germs at other points: {}",
                g.fmt_set(gamma.difference(&germ_side))
            ));
        }
    }
    if let Some(&w) = gamma_m.difference(&germ_side).next() {
        r.note(format!("strict: {} lies in Gamma from M but not in the restriction", g.label(w)));
    }
    r
}

/// `Γ_σ(R) = γ_σ⁻¹[π_σ(R)]` for every `R ⊆ S{θ,σ}`.
pub fn check_cuci(gg: &GermGroupoid, sigma: Point, seed: u64) -> CheckReport {
    let a = gg.action();
    let sp = a.space();
    let mut r = CheckReport::new("germ.gamma_set_function", format!("at={}", sp.label(sigma)));
    let app: Vec<Element> = a.applicable(sigma).into_iter().collect();
    let table = gg.table(sigma);
    let gamma = gg.gamma_sigma(sigma);
    let at = PointSet::from([sigma]);
    let (subsets, sampled) = crate::sets::subsets_or_sample(&app, crate::sets::EXHAUSTIVE_LIMIT, seed);
    let mut by_classes: BTreeMap<BTreeSet<usize>, ArrowSet> = BTreeMap::new();
    for set in &subsets {
        let lhs = gg.big_gamma_from(set, &at);
        let classes = table.project(set);
        let rhs: ArrowSet = gamma.iter().filter(|(_, c)| classes.contains(c)).map(|&(xi, _)| xi).collect();
        r.require(lhs == rhs, || format!("R={}: Gamma_sigma != gamma_sigma preimage", a.fmt_elements(set)));
        if let Some(prev) = by_classes.insert(classes, lhs.clone()) {
            r.require(prev == lhs, || "Gamma_sigma is not constant on class sets".into());
        }
    }
    let images: BTreeSet<&ArrowSet> = by_classes.values().collect();
    r.require(images.len() == by_classes.len(), || "induced map on class sets is not injective".into());
    r.size("subsets", subsets.len());
    r.size("class_sets", by_classes.len());
    if sampled {
        r.seed = Some(seed);
    }
    r
}

/// `γ⟨s,σ⟩ = ⟨s⟩` into the maximum group image, as class ids of `c`.
pub fn gamma_global(gg: &GermGroupoid, c: &Congruence) -> Vec<usize> {
    gg.groupoid().arrows().map(|xi| c.class_of(gg.representative(xi).0)).collect()
}

/// `γ` is well defined. Whether it is onto `S/↔` is recorded in the notes
/// and in `sizes`, not asserted.
pub fn check_gamma_global(gg: &GermGroupoid, c: &Congruence) -> CheckReport {
    let a = gg.action();
    let s = a.semigroup();
    let mut r = CheckReport::new("germ.gamma_global", "");
    let map = gamma_global(gg, c);
    for (xi, &cls) in map.iter().enumerate() {
        let (_, p) = gg.representative(xi);
        let t = gg.table(p);
        let members = t.class(t.class_of(gg.representative(xi).0).unwrap());
        r.require(members.iter().all(|&x| c.class_of(x) == cls), || {
            format!("germ {} meets two classes of S/<->", gg.groupoid().label(xi))
        });
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    r.size("image", image.len());
    r.size("classes", c.num_classes());
    if image.len() == c.num_classes() {
        r.note("onto");
    } else {
        let missing: Vec<&str> =
            (0..c.num_classes()).filter(|k| !image.contains(k)).map(|k| s.label(c.representative(k))).collect();
        r.note(format!("not onto: no germ in the class of {}", missing.join(",")));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;

    fn pts(a: &PartialAction, names: &[&str]) -> PointSet {
        names.iter().map(|n| a.space().index_of(n).unwrap()).collect()
    }

    #[test]
    fn pair_groupoid() {
        let p2 = FiniteGroupoid::pair(2).unwrap();
        assert_eq!(p2.len(), 4);
        assert_eq!(p2.units().len(), 2);
        let u1 = ArrowSet::from([p2.index_of("(1,1)").unwrap()]);
        let u2 = ArrowSet::from([p2.index_of("(2,2)").unwrap()]);
        assert_eq!(p2.restriction(&u1, &u2), ArrowSet::from([p2.index_of("(2,1)").unwrap()]));
        assert_eq!(p2.restriction(&u1, &u1), u1);
        let all: ArrowSet = p2.units().iter().copied().collect();
        assert_eq!(p2.restriction(&all, &all).len(), 4);
    }

    #[test]
    fn group_as_groupoid() {
        let g = FiniteGroupoid::from_group(&crate::isg::cyclic_group(3).unwrap()).unwrap();
        assert_eq!(g.units().len(), 1);
        assert!(FiniteGroupoid::from_group(&fixtures::i2()).is_err());
    }

    #[test]
    fn bad_range_is_rejected() {
        // units a, b and an arrow x: a → b whose product with a claims r = a
        let labels = vec!["a".to_string(), "b".to_string(), "x".to_string()];
        let d = vec![0, 1, 0];
        let r = vec![0, 1, 1];
        let products = [(0, 0, 0), (1, 1, 1), (2, 0, 0), (1, 2, 2)];
        let err = FiniteGroupoid::validate(labels, d, r, &products).unwrap_err();
        assert!(matches!(err, GroupoidError::BadUnit(_)), "{err:?}");
    }

    #[test]
    fn missing_inverse_and_products() {
        let labels = vec!["a".to_string(), "b".to_string(), "x".to_string()];
        let d = vec![0, 1, 0];
        let r = vec![0, 1, 1];
        let products = [(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 2, 2)];
        assert_eq!(
            FiniteGroupoid::validate(labels.clone(), d.clone(), r.clone(), &products).unwrap_err(),
            GroupoidError::BadInverse(2)
        );
        assert_eq!(
            FiniteGroupoid::validate(labels, d, r, &products[..3]).unwrap_err(),
            GroupoidError::MissingProduct(1, 2)
        );
    }

    #[test]
    fn germ_groupoid_sizes() {
        let k = GermGroupoid::new(&fixtures::k()).unwrap();
        assert_eq!(k.len(), 4);
        assert_eq!(k.groupoid().units().len(), 2);
        let pz2 = GermGroupoid::new(&fixtures::pz2()).unwrap();
        assert_eq!(pz2.len(), 3);
        let labels: Vec<&str> = pz2.groupoid().labels().iter().map(String::as_str).collect();
        assert_eq!(labels, ["<e|x>", "<g|x>", "<e|y>"]);
        assert_eq!(GermGroupoid::new(&fixtures::triv()).unwrap().len(), 1);
        for a in [fixtures::k(), fixtures::pz2(), fixtures::a4(), fixtures::wp_i2()] {
            let gg = GermGroupoid::new(&a).unwrap();
            assert!(check_germ_groupoid(&gg).passed());
        }
    }

    #[test]
    fn theta_examples() {
        let k = fixtures::k();
        let gg = GermGroupoid::new(&k).unwrap();
        let s = k.semigroup();
        let one_to_two = s.index_of("2-").unwrap();
        let swap = s.index_of("21").unwrap();
        assert_eq!(gg.theta(one_to_two, 0), Some((1, 0)));
        assert_eq!(gg.theta(s.index_of("12").unwrap(), 1), Some((1, 1)));
        assert_eq!(gg.germ(swap, 0), gg.germ(one_to_two, 0));
        assert_eq!(gg.theta_hat(gg.germ(swap, 0).unwrap()), (1, 0));
    }

    #[test]
    fn aha_examples() {
        let k = fixtures::k();
        let gg = GermGroupoid::new(&k).unwrap();
        let rep = check_aha(&gg, &pts(&k, &["1"]), &pts(&k, &["2"]));
        assert!(rep.passed());
        assert_eq!(rep.sizes["restriction"], 1);
        assert_eq!(rep.sizes["naive"], 2);
        assert_eq!(rep.sizes["section_image"], 1);
        assert!(check_aha(&gg, &k.space().all(), &k.space().all()).passed());
        let rep = check_aha(&gg, &k.space().all(), &PointSet::new());
        assert!(rep.passed());
        assert_eq!(rep.sizes["naive"], 0);
    }

    #[test]
    fn enoeno_examples() {
        for a in [fixtures::k(), fixtures::a4(), fixtures::pz2()] {
            assert!(check_enoeno(&GermGroupoid::new(&a).unwrap(), 1).passed());
        }
    }

    #[test]
    fn bucuros_examples() {
        let k = fixtures::k();
        let gg = GermGroupoid::new(&k).unwrap();
        let rep = check_bucuros(&gg, 0, &pts(&k, &["2"]));
        assert!(rep.passed());
        assert_eq!((rep.sizes["germs"], rep.sizes["classes"]), (1, 1));
        let rep = check_bucuros(&gg, 0, &k.space().all());
        assert_eq!((rep.sizes["germs"], rep.sizes["classes"]), (2, 2));
        let rep = check_bucuros(&gg, 0, &PointSet::new());
        assert!(rep.passed());
        assert_eq!(rep.sizes["germs"], 0);
    }

    #[test]
    fn ohanesian_examples() {
        let k = fixtures::k();
        let gg = GermGroupoid::new(&k).unwrap();
        let rep = check_ohanesian(&gg, &pts(&k, &["1"]), &pts(&k, &["2"]));
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.sizes["restriction"], 1);
        let rep = check_ohanesian(&gg, &k.space().all(), &pts(&k, &["1"]));
        assert!(rep.passed());
        assert!(rep.notes.iter().any(|n| n.starts_with("strict: <2-|1>")), "{:?}", rep.notes);
        let rep = check_ohanesian(&gg, &PointSet::new(), &k.space().all());
        assert!(rep.passed());
        assert_eq!(rep.sizes["gamma"], 0);
    }

    #[test]
    fn cuci_examples() {
        let k = fixtures::k();
        let rep = check_cuci(&GermGroupoid::new(&k).unwrap(), 0, 1);
        assert!(rep.passed());
        assert_eq!(rep.sizes["subsets"], 16);
        let pz2 = fixtures::pz2();
        let rep = check_cuci(&GermGroupoid::new(&pz2).unwrap(), 0, 1);
        assert!(rep.passed());
        assert_eq!(rep.sizes["subsets"], 4);
    }

    #[test]
    fn gamma_global_examples() {
        for (a, onto) in [
            (fixtures::k(), true),
            (fixtures::a4(), true),
            (fixtures::pz2(), true),
            (fixtures::z2_empty_generator(), false),
        ] {
            let c = Congruence::min_group(a.semigroup()).unwrap();
            let rep = check_gamma_global(&GermGroupoid::new(&a).unwrap(), &c);
            assert!(rep.passed());
            assert_eq!(rep.notes.iter().any(|n| n == "onto"), onto, "{:?}", rep.notes);
        }
    }

    #[test]
    fn dot_is_deterministic() {
        let gg = GermGroupoid::new(&fixtures::k()).unwrap();
        let dot = gg.to_dot("K");
        assert_eq!(dot, gg.to_dot("K"));
        assert_eq!(dot.matches("->").count(), 4);
        assert!(FiniteGroupoid::pair(2).unwrap().to_dot("P2").contains("n0 -> n1 [label=\"(2,1)\"]"));
    }
}
