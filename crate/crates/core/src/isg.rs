//! Finite inverse semigroups given by full multiplication tables.
//!
//! Elements are dense indices `0..n`. The generalized inverse, idempotents and
//! the natural partial order are derived from the table; nothing about them is
//! taken on trust from the input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::dynamics::{FiniteSpace, PartialAction};

pub type Element = usize;
pub type ElementSet = BTreeSet<Element>;

/// Largest semigroup on which congruences are built or checked.
pub const CONGRUENCE_CAP: usize = 64;
/// Largest `n` accepted by [`symmetric_inverse`].
pub const SYMMETRIC_INVERSE_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsgError {
    #[error("empty multiplication table")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(Element, Element, Element),
    #[error("element {0} has no generalized inverse")]
    NoInverse(Element),
    #[error("element {0} has two generalized inverses {1} and {2}")]
    NonUniqueInverse(Element, Element, Element),
    #[error("{got} labels given for {expected} elements")]
    LabelCount { got: usize, expected: usize },
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{what} of size {requested} exceeds the cap {cap}")]
    CapExceeded { what: String, requested: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("classes do not partition the semigroup: {0}")]
    NotPartition(String),
    #[error("not a congruence: {s} ~ {t} but {left} and {right} are not related")]
    NotCompatible { s: Element, t: Element, left: Element, right: Element },
    #[error("minimum group relation is not transitive at ({0}, {1}, {2})")]
    NotTransitiveBug(Element, Element, Element),
    #[error("quotient is not an inverse semigroup: {0}")]
    QuotientNotInverse(Box<IsgError>),
}

/// A validated finite inverse semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSemigroup {
    n: usize,
    mul: Vec<Element>,
    inv: Vec<Element>,
    labels: Vec<String>,
}

impl InverseSemigroup {
    /// Validates a multiplication table. Labels default to the element indices.
    pub fn from_table(table: Vec<Vec<Element>>, labels: Option<Vec<String>>) -> Result<Self, IsgError> {
        let n = table.len();
        if n == 0 {
            return Err(IsgError::Empty);
        }
        let mut mul = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(IsgError::Ragged { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(IsgError::OutOfRange { row, col, value });
                }
                mul.push(value);
            }
        }
        let labels = match labels {
            Some(labels) => {
                if labels.len() != n {
                    return Err(IsgError::LabelCount { got: labels.len(), expected: n });
                }
                let mut seen = BTreeSet::new();
                for l in &labels {
                    if !seen.insert(l.as_str()) {
                        return Err(IsgError::DuplicateLabel(l.clone()));
                    }
                }
                labels
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let at = |a: usize, b: usize| mul[a * n + b];
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(IsgError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n);
        for s in 0..n {
            let mut found: Option<Element> = None;
            for x in 0..n {
                if at(at(x, s), x) == x && at(at(s, x), s) == s {
                    if let Some(first) = found {
                        return Err(IsgError::NonUniqueInverse(s, first, x));
                    }
                    found = Some(x);
                }
            }
            inv.push(found.ok_or(IsgError::NoInverse(s))?);
        }
        let s = InverseSemigroup { n, mul, inv, labels };
        assert!(s.idempotents_commute(), "unique inverses but non-commuting idempotents");
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.n
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mul[a * self.n + b]
    }

    /// Product of a nonempty sequence, left to right.
    pub fn product(&self, word: &[Element]) -> Option<Element> {
        let (&first, rest) = word.split_first()?;
        Some(rest.iter().fold(first, |acc, &x| self.mul(acc, x)))
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inv[a]
    }

    pub fn label(&self, a: Element) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<Element> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn table(&self) -> Vec<Vec<Element>> {
        self.mul.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn fmt_set<'a>(&self, set: impl IntoIterator<Item = &'a Element>) -> String {
        let items: Vec<&str> = set.into_iter().map(|&e| self.label(e)).collect();
        format!("{{{}}}", items.join(","))
    }

    pub fn is_idempotent(&self, a: Element) -> bool {
        self.mul(a, a) == a
    }

    pub fn idempotents(&self) -> ElementSet {
        self.elements().filter(|&a| self.is_idempotent(a)).collect()
    }

    pub fn idempotents_commute(&self) -> bool {
        let e = self.idempotents();
        e.iter().all(|&a| e.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `s ≤ t` iff `s = t s♯ s`.
    pub fn leq(&self, s: Element, t: Element) -> bool {
        s == self.mul(self.mul(t, self.inv(s)), s)
    }

    /// `∃ e ∈ E(S): s = e t`.
    pub fn leq_by_left_idempotent(&self, s: Element, t: Element) -> bool {
        self.elements().any(|e| self.is_idempotent(e) && self.mul(e, t) == s)
    }

    /// `∃ f ∈ E(S): s = t f`.
    pub fn leq_by_right_idempotent(&self, s: Element, t: Element) -> bool {
        self.elements().any(|f| self.is_idempotent(f) && self.mul(t, f) == s)
    }

    /// Lower bounds of `s` in the natural order.
    pub fn down_set(&self, s: Element) -> ElementSet {
        self.elements().filter(|&r| self.leq(r, s)).collect()
    }

    /// Meet of two compatible elements: `s t♯ t = t s♯ s`, or `None` when
    /// `s♯t` or `st♯` is not idempotent.
    pub fn compatible_meet(&self, s: Element, t: Element) -> Option<Element> {
        if !self.is_idempotent(self.mul(self.inv(s), t)) || !self.is_idempotent(self.mul(s, self.inv(t))) {
            return None;
        }
        let m = self.mul(self.mul(s, self.inv(t)), t);
        assert_eq!(m, self.mul(self.mul(t, self.inv(s)), s), "compatible meet is not symmetric");
        assert!(self.leq(m, s) && self.leq(m, t), "compatible meet is not a lower bound");
        Some(m)
    }

    /// `∃ r: r ≤ s, t`.
    pub fn share_lower_bound(&self, s: Element, t: Element) -> bool {
        self.elements().any(|r| self.leq(r, s) && self.leq(r, t))
    }

    /// Every element above an idempotent is an idempotent.
    pub fn is_e_unitary(&self) -> bool {
        self.elements()
            .filter(|&e| self.is_idempotent(e))
            .all(|e| self.elements().all(|s| !self.leq(e, s) || self.is_idempotent(s)))
    }

    pub fn is_group(&self) -> bool {
        self.idempotents().len() == 1
    }

    /// Generates the inverse subsemigroup closed under product and inverse.
    pub fn generated_by(&self, gens: &[Element]) -> ElementSet {
        let mut set: ElementSet = gens.iter().flat_map(|&g| [g, self.inv(g)]).collect();
        loop {
            let mut added = Vec::new();
            for &a in &set {
                for &b in &set {
                    let ab = self.mul(a, b);
                    if !set.contains(&ab) {
                        added.push(ab);
                    }
                }
            }
            if added.is_empty() {
                return set;
            }
            set.extend(added);
        }
    }
}

impl fmt::Display for InverseSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.labels.iter().map(|l| l.len()).max().unwrap_or(1);
        write!(f, "{:>w$} |", "*", w = w)?;
        for l in &self.labels {
            write!(f, " {:>w$}", l, w = w)?;
        }
        writeln!(f)?;
        for a in self.elements() {
            write!(f, "{:>w$} |", self.label(a), w = w)?;
            for b in self.elements() {
                write!(f, " {:>w$}", self.label(self.mul(a, b)), w = w)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A partial injective self-map of `{0, .., degree-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    map: Vec<Option<usize>>,
}

impl PartialBijection {
    pub fn empty(degree: usize) -> Self {
        PartialBijection { map: vec![None; degree] }
    }

    pub fn identity(degree: usize) -> Self {
        PartialBijection { map: (0..degree).map(Some).collect() }
    }

    pub fn identity_on(degree: usize, set: &BTreeSet<usize>) -> Self {
        PartialBijection { map: (0..degree).map(|x| set.contains(&x).then_some(x)).collect() }
    }

    /// `None` if the assignment is not injective or leaves the point range.
    pub fn from_map(map: Vec<Option<usize>>) -> Option<Self> {
        let mut seen = vec![false; map.len()];
        for y in map.iter().flatten() {
            if *y >= map.len() || std::mem::replace(&mut seen[*y], true) {
                return None;
            }
        }
        Some(PartialBijection { map })
    }

    pub fn from_pairs(degree: usize, pairs: &[(usize, usize)]) -> Option<Self> {
        let mut map = vec![None; degree];
        for &(x, y) in pairs {
            if x >= degree || map[x].is_some() {
                return None;
            }
            map[x] = Some(y);
        }
        Self::from_map(map)
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map.get(x).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.map
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x, y)))
    }

    pub fn domain(&self) -> BTreeSet<usize> {
        self.pairs().map(|(x, _)| x).collect()
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.pairs().map(|(_, y)| y).collect()
    }

    pub fn in_domain(&self, x: usize) -> bool {
        self.apply(x).is_some()
    }

    pub fn rank(&self) -> usize {
        self.map.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.rank() == 0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PartialBijection) -> PartialBijection {
        PartialBijection { map: other.map.iter().map(|y| y.and_then(|y| self.apply(y))).collect() }
    }

    pub fn inverse(&self) -> PartialBijection {
        let mut map = vec![None; self.degree()];
        for (x, y) in self.pairs() {
            map[y] = Some(x);
        }
        PartialBijection { map }
    }

    /// Graph inclusion.
    pub fn is_restriction_of(&self, other: &PartialBijection) -> bool {
        self.pairs().all(|(x, y)| other.apply(x) == Some(y))
    }

    pub fn restrict(&self, set: &BTreeSet<usize>) -> PartialBijection {
        PartialBijection {
            map: self.map.iter().enumerate().map(|(x, y)| if set.contains(&x) { *y } else { None }).collect(),
        }
    }

    /// One character per point: the 1-based image or `-`.
    pub fn image_word(&self) -> String {
        self.map
            .iter()
            .map(|y| match y {
                Some(y) => std::char::from_digit(*y as u32 + 1, 36).unwrap_or('?'),
                None => '-',
            })
            .collect()
    }
}

fn partial_injections(n: usize) -> Vec<PartialBijection> {
    fn extend(x: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<Option<usize>>, out: &mut Vec<PartialBijection>) {
        if x == n {
            out.push(PartialBijection { map: cur.clone() });
            return;
        }
        cur.push(None);
        extend(x + 1, n, used, cur, out);
        cur.pop();
        for y in 0..n {
            if !used[y] {
                used[y] = true;
                cur.push(Some(y));
                extend(x + 1, n, used, cur, out);
                cur.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(0, n, &mut vec![false; n], &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.image_word().cmp(&b.image_word())));
    out
}

/// Builds the inverse semigroup generated by a set of partial bijections
/// (closed under composition and inversion), ordered by rank then image word.
pub fn from_partial_bijections(
    generators: &[PartialBijection],
) -> Result<(InverseSemigroup, Vec<PartialBijection>), IsgError> {
    let degree = generators.first().map(|g| g.degree()).ok_or(IsgError::Empty)?;
    if generators.iter().any(|g| g.degree() != degree) {
        return Err(IsgError::BadParameter("generators act on different point sets".into()));
    }
    let mut set: BTreeSet<PartialBijection> = generators.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    loop {
        let mut added = Vec::new();
        for a in &set {
            for b in &set {
                let ab = a.compose(b);
                if !set.contains(&ab) {
                    added.push(ab);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        set.extend(added);
    }
    let mut elems: Vec<PartialBijection> = set.into_iter().collect();
    elems.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.image_word().cmp(&b.image_word())));
    let s = concrete_semigroup(&elems)?;
    Ok((s, elems))
}

fn concrete_semigroup(elems: &[PartialBijection]) -> Result<InverseSemigroup, IsgError> {
    let index: BTreeMap<&PartialBijection, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let table = elems
        .iter()
        .map(|a| {
            elems
                .iter()
                .map(|b| {
                    index
                        .get(&a.compose(b))
                        .copied()
                        .ok_or_else(|| IsgError::BadParameter("set of partial bijections is not closed".into()))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    InverseSemigroup::from_table(table, Some(elems.iter().map(|p| p.image_word()).collect()))
}

/// All partial bijections of an `n`-point set under composition, `st = s ∘ t`.
/// Returns the semigroup together with the concrete partial bijections.
pub fn symmetric_inverse(n: usize) -> Result<(InverseSemigroup, Vec<PartialBijection>), IsgError> {
    if n == 0 {
        return Err(IsgError::BadParameter("symmetric_inverse needs n >= 1".into()));
    }
    if n > SYMMETRIC_INVERSE_CAP {
        return Err(IsgError::CapExceeded {
            what: "symmetric_inverse".into(),
            requested: n,
            cap: SYMMETRIC_INVERSE_CAP,
        });
    }
    let elems = partial_injections(n);
    let s = concrete_semigroup(&elems)?;
    Ok((s, elems))
}

pub fn cyclic_group(n: usize) -> Result<InverseSemigroup, IsgError> {
    if n == 0 {
        return Err(IsgError::BadParameter("cyclic_group needs n >= 1".into()));
    }
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let labels = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "g".to_string(),
            k => format!("g{k}"),
        })
        .collect();
    InverseSemigroup::from_table(table, Some(labels))
}

/// The chain `0 < 1 < .. < n-1` under `min`.
pub fn semilattice_chain(n: usize) -> Result<InverseSemigroup, IsgError> {
    if n == 0 {
        return Err(IsgError::BadParameter("semilattice_chain needs n >= 1".into()));
    }
    let table = (0..n).map(|i| (0..n).map(|j| i.min(j)).collect()).collect();
    InverseSemigroup::from_table(table, Some((0..n).map(|i| i.to_string()).collect()))
}

/// Componentwise product; element `(a, b)` has index `a * |T| + b`.
pub fn direct_product(s: &InverseSemigroup, t: &InverseSemigroup) -> Result<InverseSemigroup, IsgError> {
    let m = t.len();
    let n = s.len() * m;
    let table = (0..n).map(|x| (0..n).map(|y| s.mul(x / m, y / m) * m + t.mul(x % m, y % m)).collect()).collect();
    let labels = (0..n).map(|x| format!("({},{})", s.label(x / m), t.label(x % m))).collect();
    InverseSemigroup::from_table(table, Some(labels))
}

/// Built-in family by name with one size parameter.
pub fn builtin(family: &str, n: usize) -> Result<InverseSemigroup, IsgError> {
    match family {
        "symmetric_inverse" => symmetric_inverse(n).map(|(s, _)| s),
        "cyclic_group" => cyclic_group(n),
        "semilattice_chain" => semilattice_chain(n),
        other => Err(IsgError::UnknownFamily(other.to_string())),
    }
}

/// Left translations `x ↦ sx` on the domains `{x : s♯s x = x}`.
pub fn wagner_preston_action(s: &InverseSemigroup) -> PartialAction {
    let n = s.len();
    let theta = s
        .elements()
        .map(|a| {
            let support = s.mul(s.inv(a), a);
            let map = s.elements().map(|x| (s.mul(support, x) == x).then(|| s.mul(a, x))).collect();
            PartialBijection::from_map(map).expect("left translation is injective on its domain")
        })
        .collect();
    let space = FiniteSpace::new(s.labels().to_vec()).expect("semigroup labels are unique");
    debug_assert_eq!(space.len(), n);
    PartialAction::validate(s.clone(), space, theta).expect("Wagner-Preston representation is a partial action")
}

/// A partition of the elements of a semigroup that is compatible with
/// multiplication. Classes are sorted and numbered by their least element,
/// which is also the class representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    class_of: Vec<usize>,
    classes: Vec<Vec<Element>>,
}

impl Congruence {
    pub fn from_classes(s: &InverseSemigroup, classes: Vec<Vec<Element>>) -> Result<Self, IsgError> {
        let n = s.len();
        if n > CONGRUENCE_CAP {
            return Err(IsgError::CapExceeded { what: "congruence".into(), requested: n, cap: CONGRUENCE_CAP });
        }
        let mut owner = vec![None; n];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(IsgError::NotPartition(format!("class {c} is empty")));
            }
            for &x in class {
                if x >= n {
                    return Err(IsgError::NotPartition(format!("element {x} out of range")));
                }
                if owner[x].replace(c).is_some() {
                    return Err(IsgError::NotPartition(format!("element {} listed twice", s.label(x))));
                }
            }
        }
        if let Some(x) = owner.iter().position(|o| o.is_none()) {
            return Err(IsgError::NotPartition(format!("element {} is in no class", s.label(x))));
        }
        let keys: Vec<usize> = owner.into_iter().map(|o| o.unwrap()).collect();
        let c = Self::from_keys(&keys);
        c.check_compatible(s)?;
        Ok(c)
    }

    /// Normalizes an arbitrary key-per-element labelling.
    fn from_keys(keys: &[usize]) -> Self {
        let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
        let mut class_of = Vec::with_capacity(keys.len());
        let mut classes: Vec<Vec<Element>> = Vec::new();
        for (x, k) in keys.iter().enumerate() {
            let next = renumber.len();
            let c = *renumber.entry(*k).or_insert(next);
            if c == classes.len() {
                classes.push(Vec::new());
            }
            classes[c].push(x);
            class_of.push(c);
        }
        Congruence { class_of, classes }
    }

    fn check_compatible(&self, s: &InverseSemigroup) -> Result<(), IsgError> {
        for class in &self.classes {
            let a = class[0];
            for &b in &class[1..] {
                for u in s.elements() {
                    if !self.related(s.mul(a, u), s.mul(b, u)) {
                        return Err(IsgError::NotCompatible { s: a, t: b, left: s.mul(a, u), right: s.mul(b, u) });
                    }
                    if !self.related(s.mul(u, a), s.mul(u, b)) {
                        return Err(IsgError::NotCompatible { s: a, t: b, left: s.mul(u, a), right: s.mul(u, b) });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn equality(s: &InverseSemigroup) -> Self {
        Self::from_keys(&s.elements().collect::<Vec<_>>())
    }

    /// `s ↔ t` iff `s` and `t` have a common lower bound.
    pub fn min_group(s: &InverseSemigroup) -> Result<Self, IsgError> {
        let n = s.len();
        if n > CONGRUENCE_CAP {
            return Err(IsgError::CapExceeded { what: "congruence".into(), requested: n, cap: CONGRUENCE_CAP });
        }
        let down: Vec<ElementSet> = s.elements().map(|x| s.down_set(x)).collect();
        let rel = |a: usize, b: usize| !down[a].is_disjoint(&down[b]);
        for a in 0..n {
            for b in 0..n {
                if !rel(a, b) {
                    continue;
                }
                for c in 0..n {
                    if rel(b, c) && !rel(a, c) {
                        return Err(IsgError::NotTransitiveBug(a, b, c));
                    }
                }
            }
        }
        let keys: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| rel(a, b)).unwrap()).collect();
        let c = Self::from_keys(&keys);
        c.check_compatible(s)?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, x: Element) -> usize {
        self.class_of[x]
    }

    pub fn class(&self, c: usize) -> &[Element] {
        &self.classes[c]
    }

    pub fn classes(&self) -> &[Vec<Element>] {
        &self.classes
    }

    pub fn representative(&self, c: usize) -> Element {
        self.classes[c][0]
    }

    pub fn related(&self, a: Element, b: Element) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        self.classes.iter().all(|cl| cl.iter().all(|&x| other.related(cl[0], x)))
    }

    /// No non-idempotent is related to an idempotent.
    pub fn is_idempotent_pure(&self, s: &InverseSemigroup) -> bool {
        self.classes.iter().all(|cl| !cl.iter().any(|&x| s.is_idempotent(x)) || cl.iter().all(|&x| s.is_idempotent(x)))
    }

    /// The quotient semigroup and the projection `p`.
    pub fn quotient(&self, s: &InverseSemigroup) -> Result<(InverseSemigroup, Vec<usize>), IsgError> {
        let k = self.num_classes();
        let table = (0..k)
            .map(|i| (0..k).map(|j| self.class_of(s.mul(self.representative(i), self.representative(j)))).collect())
            .collect();
        let labels = (0..k).map(|i| format!("p({})", s.label(self.representative(i)))).collect();
        let r =
            InverseSemigroup::from_table(table, Some(labels)).map_err(|e| IsgError::QuotientNotInverse(Box::new(e)))?;
        for x in s.elements() {
            assert_eq!(r.inv(self.class_of(x)), self.class_of(s.inv(x)), "p(s)† != p(s♯)");
        }
        Ok((r, self.class_of.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i2() -> (InverseSemigroup, Vec<PartialBijection>) {
        symmetric_inverse(2).unwrap()
    }

    fn idx(s: &InverseSemigroup, l: &str) -> Element {
        s.index_of(l).unwrap_or_else(|| panic!("no element {l}"))
    }

    #[test]
    fn i2_inverse_of_one_to_two() {
        let (s, _) = i2();
        assert_eq!(s.len(), 7);
        // {1↦2} is written "2-", its inverse {2↦1} is "-1"
        assert_eq!(s.inv(idx(&s, "2-")), idx(&s, "-1"));
        assert_eq!(s.inv(idx(&s, "21")), idx(&s, "21"));
    }

    #[test]
    fn trivial_group_is_valid() {
        let s = InverseSemigroup::from_table(vec![vec![0]], None).unwrap();
        assert_eq!(s.inv(0), 0);
    }

    #[test]
    fn left_zero_has_two_inverses() {
        let err = InverseSemigroup::from_table(vec![vec![0, 0], vec![1, 1]], None).unwrap_err();
        assert!(matches!(err, IsgError::NonUniqueInverse(0, 0, 1)), "{err:?}");
    }

    #[test]
    fn rejects_non_associative() {
        // a 2-element table that is not associative
        let err = InverseSemigroup::from_table(vec![vec![1, 0], vec![0, 0]], None).unwrap_err();
        assert!(matches!(err, IsgError::NotAssociative(..)), "{err:?}");
    }

    #[test]
    fn rejects_ragged_and_out_of_range() {
        assert!(matches!(
            InverseSemigroup::from_table(vec![vec![0, 1], vec![1]], None),
            Err(IsgError::Ragged { row: 1, .. })
        ));
        assert!(matches!(
            InverseSemigroup::from_table(vec![vec![0, 2], vec![1, 0]], None),
            Err(IsgError::OutOfRange { value: 2, .. })
        ));
    }

    #[test]
    fn idempotent_counts() {
        let (s, _) = i2();
        let e: Vec<&str> = s.idempotents().iter().map(|&x| s.label(x)).collect();
        assert_eq!(e, vec!["--", "-2", "1-", "12"]);
        assert_eq!(cyclic_group(5).unwrap().idempotents().len(), 1);
        let p = direct_product(&semilattice_chain(2).unwrap(), &cyclic_group(2).unwrap()).unwrap();
        let e: Vec<&str> = p.idempotents().iter().map(|&x| p.label(x)).collect();
        assert_eq!(e, vec!["(0,e)", "(1,e)"]);
    }

    #[test]
    fn natural_order_examples() {
        let (s, _) = i2();
        let zero = idx(&s, "--");
        assert!(s.elements().all(|x| s.leq(zero, x)));
        assert!(s.elements().all(|x| s.leq(x, x)));
        assert!(s.leq(idx(&s, "2-"), idx(&s, "21")));
        assert!(!s.leq(idx(&s, "21"), idx(&s, "2-")));
    }

    #[test]
    fn order_reformulations_agree() {
        let (s, _) = symmetric_inverse(3).unwrap();
        for a in s.elements() {
            for b in s.elements() {
                let l = s.leq(a, b);
                assert_eq!(l, s.leq_by_left_idempotent(a, b));
                assert_eq!(l, s.leq_by_right_idempotent(a, b));
            }
        }
    }

    #[test]
    fn compatible_meet_examples() {
        let (s, _) = i2();
        let m = s.compatible_meet(idx(&s, "2-"), idx(&s, "21"));
        assert_eq!(m, Some(idx(&s, "2-")));
        for x in s.elements() {
            assert_eq!(s.compatible_meet(x, x), Some(x));
        }
        // {1↦1} and {1↦2} share the lower bound ∅ but are not compatible:
        // {1↦1}·{1↦2}♯ = {2↦1} is not idempotent
        assert_eq!(s.compatible_meet(idx(&s, "1-"), idx(&s, "2-")), None);
        assert!(s.share_lower_bound(idx(&s, "1-"), idx(&s, "2-")));
        assert_eq!(s.compatible_meet(idx(&s, "1-"), idx(&s, "-2")), Some(idx(&s, "--")));
        // id and swap are not compatible: id♯·swap = swap is not idempotent
        assert_eq!(s.compatible_meet(idx(&s, "12"), idx(&s, "21")), None);
    }

    #[test]
    fn min_group_congruence_examples() {
        let (s, _) = i2();
        let c = Congruence::min_group(&s).unwrap();
        assert_eq!(c.num_classes(), 1);
        let (q, _) = c.quotient(&s).unwrap();
        assert_eq!(q.len(), 1);

        let z3 = cyclic_group(3).unwrap();
        let c = Congruence::min_group(&z3).unwrap();
        assert_eq!(c.num_classes(), 3);
        assert_eq!(c, Congruence::equality(&z3));

        let p = direct_product(&semilattice_chain(2).unwrap(), &cyclic_group(2).unwrap()).unwrap();
        let c = Congruence::min_group(&p).unwrap();
        let classes: Vec<Vec<&str>> = c.classes().iter().map(|cl| cl.iter().map(|&x| p.label(x)).collect()).collect();
        assert_eq!(classes, vec![vec!["(0,e)", "(1,e)"], vec!["(0,g)", "(1,g)"]]);
        let (q, proj) = c.quotient(&p).unwrap();
        assert!(q.is_group());
        assert_eq!(q.len(), 2);
        assert_eq!(proj.len(), 4);
    }

    #[test]
    fn e_unitary_examples() {
        let (s, _) = i2();
        assert!(!s.is_e_unitary());
        assert!(cyclic_group(4).unwrap().is_e_unitary());
        assert!(semilattice_chain(3).unwrap().is_e_unitary());
        let p = direct_product(&semilattice_chain(2).unwrap(), &cyclic_group(2).unwrap()).unwrap();
        assert!(p.is_e_unitary());
    }

    #[test]
    fn idempotent_pure_examples() {
        let (s, _) = i2();
        assert!(Congruence::equality(&s).is_idempotent_pure(&s));
        assert!(!Congruence::min_group(&s).unwrap().is_idempotent_pure(&s));
        let p = direct_product(&semilattice_chain(2).unwrap(), &cyclic_group(2).unwrap()).unwrap();
        assert!(Congruence::min_group(&p).unwrap().is_idempotent_pure(&p));
    }

    #[test]
    fn quotient_by_equality_is_isomorphic() {
        let (s, _) = i2();
        let (q, p) = Congruence::equality(&s).quotient(&s).unwrap();
        assert_eq!(q.table(), s.table());
        assert_eq!(p, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn congruence_validation_errors() {
        let (s, _) = i2();
        assert!(matches!(Congruence::from_classes(&s, vec![vec![0, 1], vec![2]]), Err(IsgError::NotPartition(_))));
        // identify the zero with {2↦1}: not compatible
        let mut classes: Vec<Vec<usize>> = (0..7).map(|x| vec![x]).collect();
        classes[0].push(1);
        classes.remove(1);
        assert!(matches!(Congruence::from_classes(&s, classes), Err(IsgError::NotCompatible { .. })));
    }

    #[test]
    fn family_sizes() {
        assert_eq!(symmetric_inverse(2).unwrap().0.len(), 7);
        assert_eq!(symmetric_inverse(3).unwrap().0.len(), 34);
        assert_eq!(symmetric_inverse(4).unwrap().0.len(), 209);
        assert_eq!(cyclic_group(1).unwrap().len(), 1);
        assert!(matches!(symmetric_inverse(5), Err(IsgError::CapExceeded { .. })));
        assert!(matches!(builtin("free_monoid", 2), Err(IsgError::UnknownFamily(_))));
    }

    #[test]
    fn wagner_preston_examples() {
        let z3 = cyclic_group(3).unwrap();
        let wp = wagner_preston_action(&z3);
        assert!(wp.is_genuine());
        assert!(z3.elements().all(|g| wp.map(g).rank() == 3));

        let (s, _) = i2();
        let wp = wagner_preston_action(&s);
        assert!(wp.is_genuine());
        let zero = idx(&s, "--");
        assert_eq!(wp.map(zero).domain(), [zero].into_iter().collect());
    }

    #[test]
    fn generated_subsemigroup() {
        let (s, _) = symmetric_inverse(3).unwrap();
        let swap12 = idx(&s, "213");
        let sub = s.generated_by(&[swap12]);
        assert_eq!(sub.len(), 2);
    }
}
