//! Prefix expansion `S_A` of a finite inverse semigroup `A`.
//!
//! Elements are normal forms `ε_{c₁}…ε_{cₙ}[a]`, stored as the pair `(C, a)`
//! with `C = {c₁,…,cₙ}`. Every `c ∈ C` has `cc♯ = aa♯`, and `C` always holds
//! both `a` and `aa♯`.
//!
//! The product of two normal forms is
//! `(C, a)(D, b) = (f·(C ∪ aD) ∪ {ab, f}, ab)` with `f = (ab)(ab)♯`.
//! The table built from it is compared against [`oracle_congruence`], a
//! brute-force closure of the defining relations on bounded words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::dynamics::{ActionError, PartialAction, Point, PointSet};
use crate::isg::{Element, ElementSet, InverseSemigroup, IsgError, PartialBijection};
use crate::report::CheckReport;

/// Largest base semigroup accepted by [`Expansion::new`].
pub const EXPANSION_CAP: usize = 6;
/// Largest number of words the oracle will enumerate.
pub const ORACLE_WORD_CAP: usize = 1_500_000;
/// Longest words the oracle gate will try before giving up on stabilization.
pub const ORACLE_MAX_LEN: usize = 12;
/// Words up to this length are normalized one by one in the oracle gate.
pub const SOUNDNESS_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("{what}: requested {requested}, cap is {cap}")]
    CapExceeded { what: String, requested: usize, cap: usize },
    #[error("cannot normalize the empty word")]
    EmptyWord,
    #[error("letter {0} is not an element of the base semigroup")]
    UnknownLetter(Element),
    #[error("oracle word length must be at least 4, got {0}")]
    OracleTooShort(usize),
    #[error("action is not over the base semigroup of this expansion")]
    BaseMismatch,
    #[error(transparent)]
    Semigroup(#[from] IsgError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// `ε_{c₁}…ε_{cₙ}[a]` as the pair `(C, a)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalForm {
    pub a: Element,
    pub c: ElementSet,
}

impl NormalForm {
    /// The word `[c₁][c₁♯]…[cₙ][cₙ♯][a]` representing this form.
    pub fn word(&self, base: &InverseSemigroup) -> Vec<Element> {
        let mut w: Vec<Element> = self.c.iter().flat_map(|&c| [c, base.inv(c)]).collect();
        w.push(self.a);
        w
    }

    pub fn is_valid(&self, base: &InverseSemigroup) -> bool {
        let range = base.mul(self.a, base.inv(self.a));
        self.c.contains(&self.a) && self.c.contains(&range) && self.c.iter().all(|&c| base.mul(c, base.inv(c)) == range)
    }

    pub fn label(&self, base: &InverseSemigroup) -> String {
        format!("{}[{}]", base.fmt_set(&self.c), base.label(self.a))
    }
}

/// `ι(a)`.
pub fn iota_form(base: &InverseSemigroup, a: Element) -> NormalForm {
    NormalForm { a, c: ElementSet::from([a, base.mul(a, base.inv(a))]) }
}

/// Product of two normal forms.
pub fn multiply_forms(base: &InverseSemigroup, x: &NormalForm, y: &NormalForm) -> NormalForm {
    let ab = base.mul(x.a, y.a);
    let f = base.mul(ab, base.inv(ab));
    let mut c: ElementSet = x.c.iter().map(|&u| base.mul(f, u)).collect();
    c.extend(y.c.iter().map(|&d| base.mul(f, base.mul(x.a, d))));
    c.insert(ab);
    c.insert(f);
    NormalForm { a: ab, c }
}

/// The normal form of the word `[w₁][w₂]…[w_k]`.
pub fn normalize(base: &InverseSemigroup, word: &[Element]) -> Result<NormalForm, ExpandError> {
    let (&first, rest) = word.split_first().ok_or(ExpandError::EmptyWord)?;
    if let Some(&bad) = word.iter().find(|&&x| x >= base.len()) {
        return Err(ExpandError::UnknownLetter(bad));
    }
    Ok(rest.iter().fold(iota_form(base, first), |acc, &x| multiply_forms(base, &acc, &iota_form(base, x))))
}

/// The prefix expansion with its multiplication table and the maps `ι`, `q`.
#[derive(Debug, Clone)]
pub struct Expansion {
    base: InverseSemigroup,
    forms: Vec<NormalForm>,
    index: BTreeMap<NormalForm, Element>,
    semigroup: InverseSemigroup,
    iota: Vec<Element>,
}

impl Expansion {
    pub fn new(base: &InverseSemigroup) -> Result<Self, ExpandError> {
        Self::with_cap(base, EXPANSION_CAP)
    }

    pub fn with_cap(base: &InverseSemigroup, cap: usize) -> Result<Self, ExpandError> {
        if base.len() > cap {
            return Err(ExpandError::CapExceeded { what: "expansion base".into(), requested: base.len(), cap });
        }
        let mut forms = Vec::new();
        for a in base.elements() {
            let range = base.mul(a, base.inv(a));
            let free: Vec<Element> =
                base.elements().filter(|&c| c != a && c != range && base.mul(c, base.inv(c)) == range).collect();
            for extra in crate::sets::all_subsets(&free) {
                let mut c = extra;
                c.insert(a);
                c.insert(range);
                forms.push(NormalForm { a, c });
            }
        }
        forms.sort();
        let index: BTreeMap<NormalForm, Element> = forms.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let table = forms.iter().map(|x| forms.iter().map(|y| index[&multiply_forms(base, x, y)]).collect()).collect();
        let labels = forms.iter().map(|f| f.label(base)).collect();
        let semigroup = InverseSemigroup::from_table(table, Some(labels))?;
        let iota = base.elements().map(|a| index[&iota_form(base, a)]).collect();
        Ok(Expansion { base: base.clone(), forms, index, semigroup, iota })
    }

    pub fn base(&self) -> &InverseSemigroup {
        &self.base
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.semigroup
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[NormalForm] {
        &self.forms
    }

    pub fn form(&self, s: Element) -> &NormalForm {
        &self.forms[s]
    }

    pub fn index_of(&self, form: &NormalForm) -> Option<Element> {
        self.index.get(form).copied()
    }

    pub fn iota(&self, a: Element) -> Element {
        self.iota[a]
    }

    pub fn q(&self, s: Element) -> Element {
        self.forms[s].a
    }

    /// `ε_c = [c][c♯]`.
    pub fn epsilon(&self, c: Element) -> Element {
        self.semigroup.mul(self.iota(c), self.iota(self.base.inv(c)))
    }

    pub fn normalize(&self, word: &[Element]) -> Result<Element, ExpandError> {
        let f = normalize(&self.base, word)?;
        Ok(self.index[&f])
    }

    pub fn iota_image(&self) -> ElementSet {
        self.iota.iter().copied().collect()
    }

    /// The multiplication table with rows and columns indexed by normal forms.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for s in self.semigroup.elements() {
            let row: Vec<&str> =
                self.semigroup.elements().map(|t| self.semigroup.label(self.semigroup.mul(s, t))).collect();
            let _ = writeln!(out, "{} : {}", self.semigroup.label(s), row.join(" "));
        }
        out
    }
}

/// Number of normal forms predicted for a group of order `n`.
pub fn group_expansion_size(n: usize) -> usize {
    match n {
        0 => 0,
        1 => 1,
        n => (1 << (n - 1)) + (n - 1) * (1 << (n - 2)),
    }
}

/// Whether `ψ: A → T` satisfies the three defining relations of `S_A`.
pub fn satisfies_prefix_relations(a: &InverseSemigroup, t: &InverseSemigroup, psi: &[Element]) -> bool {
    psi.len() == a.len()
        && psi.iter().all(|&x| x < t.len())
        && a.elements().all(|x| {
            let xi = a.inv(x);
            t.product(&[psi[x], psi[xi], psi[x]]) == Some(psi[x])
                && a.elements().all(|y| {
                    let yi = a.inv(y);
                    let xy = a.mul(x, y);
                    t.product(&[psi[xi], psi[x], psi[y]]) == t.product(&[psi[xi], psi[xy]])
                        && t.product(&[psi[x], psi[y], psi[yi]]) == t.product(&[psi[xy], psi[yi]])
                })
        })
}

/// Structural properties of the expansion: inverse semigroup axioms hold by
/// construction, `ι` respects inverses and the relations, `q∘ι = id`,
/// `ι(A)` generates, normal forms are fixed by [`normalize`], and
/// E-unitarity matches the base.
pub fn check_expansion_structure(exp: &Expansion) -> CheckReport {
    let a = exp.base();
    let s = exp.semigroup();
    let mut r = CheckReport::new("expansion.structure", "");
    r.size("base", a.len());
    r.size("expansion", exp.len());
    for x in a.elements() {
        r.require(s.inv(exp.iota(x)) == exp.iota(a.inv(x)), || {
            format!("iota({})# != iota({}#)", a.label(x), a.label(x))
        });
        r.require(exp.q(exp.iota(x)) == x, || format!("q(iota({})) != {}", a.label(x), a.label(x)));
    }
    let iota: Vec<Element> = a.elements().map(|x| exp.iota(x)).collect();
    r.require(satisfies_prefix_relations(a, s, &iota), || "iota violates the defining relations".into());
    r.require(s.generated_by(&iota).len() == s.len(), || "iota(A) does not generate".into());
    for x in s.elements() {
        let f = exp.form(x);
        r.require(f.is_valid(a), || format!("{} violates the normal form conditions", s.label(x)));
        r.require(normalize(a, &f.word(a)).as_ref() == Ok(f), || format!("normalize moves {}", s.label(x)));
        for y in s.elements() {
            r.require(exp.q(s.mul(x, y)) == a.mul(exp.q(x), exp.q(y)), || {
                format!("q is not multiplicative at ({}, {})", s.label(x), s.label(y))
            });
        }
    }
    r.require(s.is_e_unitary() == a.is_e_unitary(), || {
        format!("E-unitary: base {} expansion {}", a.is_e_unitary(), s.is_e_unitary())
    });
    if a.is_group() {
        r.size("group_formula", group_expansion_size(a.len()));
        r.require(exp.len() == group_expansion_size(a.len()), || "count differs from the group formula".into());
    }
    r
}

/// Classes of the bounded words over `A` under the relations.
#[derive(Debug, Clone)]
pub struct OracleClasses {
    alphabet: usize,
    max_len: usize,
    offsets: Vec<usize>,
    class_of: Vec<usize>,
    reps: Vec<Vec<Element>>,
    settled: usize,
}

impl OracleClasses {
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Words up to this length are compared; longer words only serve as
    /// intermediate steps.
    pub fn settled_len(&self) -> usize {
        self.max_len / 2
    }

    /// Number of classes meeting a word of length at most [`Self::settled_len`].
    pub fn num_classes(&self) -> usize {
        self.settled
    }

    /// Number of classes among all words up to `max_len`, including those
    /// that are only separated because the bound cuts their derivations off.
    pub fn num_raw_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn num_words(&self) -> usize {
        self.class_of.len()
    }

    /// Shortlex-least word of each settled class; classes are numbered in
    /// this order.
    pub fn representatives(&self) -> &[Vec<Element>] {
        &self.reps[..self.settled]
    }

    pub fn class_of_word(&self, word: &[Element]) -> Option<usize> {
        if word.is_empty() || word.len() > self.max_len || word.iter().any(|&x| x >= self.alphabet) {
            return None;
        }
        Some(self.class_of[word_index(&self.offsets, self.alphabet, word)])
    }
}

fn word_index(offsets: &[usize], n: usize, word: &[Element]) -> usize {
    offsets[word.len()] + word.iter().fold(0, |acc, &x| acc * n + x)
}

fn decode_word(offsets: &[usize], n: usize, idx: usize) -> Vec<Element> {
    let len = (1..offsets.len() - 1).find(|&l| idx < offsets[l + 1]).expect("index in range");
    let mut w = vec![0; len];
    let mut v = idx - offsets[len];
    for slot in w.iter_mut().rev() {
        *slot = v % n;
        v /= n;
    }
    w
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], x: usize, y: usize) {
    let (rx, ry) = (find(parent, x), find(parent, y));
    if rx != ry {
        // keep the smaller index as root so roots are shortlex-least
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        parent[hi] = lo;
    }
}

/// Smallest equivalence on nonempty words of length at most `max_len` that
/// contains every elementary rewrite `u·l·v ~ u·r·v` for the relations
/// `[a♯][a][b] = [a♯][ab]`, `[a][b][b♯] = [ab][b♯]` and `[a][a♯][a] = [a]`.
///
/// Every elementary rewrite shortens a word, so two words are merged only if
/// some derivation between them stays under the bound. Words close to the
/// bound stay apart from their true class (in `Z₂` the alternating words
/// `[e][g][e][g]…` admit no shortening rewrite at all), so classes are only
/// counted when they meet a word of at most half the bound. Products of two
/// such representatives still fit under the bound.
pub fn oracle_congruence(a: &InverseSemigroup, max_len: usize) -> Result<OracleClasses, ExpandError> {
    if max_len < 4 {
        return Err(ExpandError::OracleTooShort(max_len));
    }
    let n = a.len();
    let mut offsets = vec![0usize; max_len + 2];
    let mut power = 1usize;
    for len in 1..=max_len {
        power = power.saturating_mul(n);
        offsets[len + 1] = offsets[len].saturating_add(power);
    }
    let total = offsets[max_len + 1];
    if total > ORACLE_WORD_CAP {
        return Err(ExpandError::CapExceeded { what: "oracle words".into(), requested: total, cap: ORACLE_WORD_CAP });
    }
    let mut parent: Vec<usize> = (0..total).collect();
    let mut scratch = Vec::with_capacity(max_len);
    let mut word = vec![0; 3];
    for idx in offsets[3]..total {
        if idx == offsets[word.len() + 1] {
            word = vec![0; word.len() + 1];
        }
        let len = word.len();
        for i in 0..len - 2 {
            let (x, y, z) = (word[i], word[i + 1], word[i + 2]);
            let mut rewrite = |middle: &[Element]| {
                scratch.clear();
                scratch.extend_from_slice(&word[..i]);
                scratch.extend_from_slice(middle);
                scratch.extend_from_slice(&word[i + 3..]);
                let j = word_index(&offsets, n, &scratch);
                union(&mut parent, idx, j);
            };
            if x == a.inv(y) {
                rewrite(&[x, a.mul(y, z)]);
            }
            if z == a.inv(y) {
                rewrite(&[a.mul(x, y), z]);
            }
            if y == a.inv(x) && z == x {
                rewrite(&[x]);
            }
        }
        // odometer step to the next word of the same length
        for slot in word.iter_mut().rev() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
    let mut reps = Vec::new();
    let mut root_class = BTreeMap::new();
    let class_of: Vec<usize> = (0..total)
        .map(|idx| {
            let root = find(&mut parent, idx);
            *root_class.entry(root).or_insert_with(|| {
                reps.push(decode_word(&offsets, n, idx));
                reps.len() - 1
            })
        })
        .collect();
    let settled = reps.iter().take_while(|w| w.len() <= max_len / 2).count();
    Ok(OracleClasses { alphabet: n, max_len, offsets, class_of, reps, settled })
}

/// Outcome of comparing the expansion with the oracle.
#[derive(Debug, Clone)]
pub struct OracleGate {
    pub report: CheckReport,
    pub counts: Vec<(usize, usize)>,
    pub oracle_table: String,
    pub expansion_table: String,
}

/// Runs the oracle at increasing word lengths until the number of settled
/// classes agrees for two settled lengths in a row, then compares both
/// multiplication tables as text and checks every bounded word.
pub fn oracle_gate(exp: &Expansion) -> Result<OracleGate, ExpandError> {
    let a = exp.base();
    let mut r = CheckReport::new("expansion.oracle_gate", "");
    let mut counts: Vec<(usize, usize)> = Vec::new();
    let mut chosen = None;
    for len in 4..=ORACLE_MAX_LEN {
        let oracle = match oracle_congruence(a, len) {
            Ok(o) => o,
            Err(ExpandError::CapExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        counts.push((len, oracle.num_classes()));
        let two_back = counts.iter().rev().nth(2).map(|&(_, c)| c);
        if two_back == Some(oracle.num_classes()) {
            chosen = Some(oracle);
            break;
        }
    }
    r.note(format!(
        "class counts by word length: {}",
        counts.iter().map(|(l, c)| format!("{l}:{c}")).collect::<Vec<_>>().join(" ")
    ));
    let Some(oracle) = chosen else {
        r.fail("oracle class count did not stabilize within the word cap");
        return Ok(OracleGate { report: r, counts, oracle_table: String::new(), expansion_table: String::new() });
    };
    r.size("oracle_len", oracle.max_len());
    r.size("oracle_classes", oracle.num_classes());
    r.size("expansion", exp.len());
    let k = oracle.num_classes();
    let reps = oracle.representatives();
    let mut oracle_table = String::new();
    for u in reps {
        let row: Vec<String> = reps
            .iter()
            .map(|v| {
                let uv: Vec<Element> = u.iter().chain(v).copied().collect();
                oracle.class_of_word(&uv).expect("product fits under the bound").to_string()
            })
            .collect();
        let _ = writeln!(oracle_table, "{}", row.join(" "));
    }
    let forms: Vec<Element> = reps.iter().map(|w| exp.normalize(w).expect("nonempty word")).collect();
    let distinct: BTreeSet<Element> = forms.iter().copied().collect();
    r.require(distinct.len() == k, || "two oracle classes share a normal form".into());
    r.require(k == exp.len(), || format!("oracle has {k} classes, expansion has {} elements", exp.len()));
    let class_of_form: BTreeMap<Element, usize> = forms.iter().enumerate().map(|(c, &f)| (f, c)).collect();
    let s = exp.semigroup();
    let mut expansion_table = String::new();
    for &x in &forms {
        let row: Vec<String> =
            forms.iter().map(|&y| class_of_form.get(&s.mul(x, y)).map_or("?".to_string(), |c| c.to_string())).collect();
        let _ = writeln!(expansion_table, "{}", row.join(" "));
    }
    if oracle_table != expansion_table {
        let line = oracle_table.lines().zip(expansion_table.lines()).position(|(p, q)| p != q).unwrap_or(0);
        r.fail(format!("tables differ first at row {line}"));
    }
    // merges made by the oracle are sound, so every bounded word must
    // normalize to the form of its class
    let mut mismatches = 0usize;
    let checked = oracle.offsets[oracle.max_len.min(SOUNDNESS_LEN) + 1];
    r.size("words_checked", checked);
    for idx in 0..checked {
        let w = decode_word(&oracle.offsets, a.len(), idx);
        // words in unsettled classes may be cut off from their true class
        let Some(&expected) = forms.get(oracle.class_of[idx]) else { continue };
        if exp.normalize(&w).expect("nonempty word") != expected {
            mismatches += 1;
            if mismatches <= 4 {
                let labels: Vec<&str> = w.iter().map(|&x| a.label(x)).collect();
                r.fail(format!("word {} normalizes outside its oracle class", labels.join(".")));
            }
        }
    }
    r.size("word_mismatches", mismatches);
    Ok(OracleGate { report: r, counts, oracle_table, expansion_table })
}

/// The genuine action of `S_A` attached to a partial action `ϑ` of `A`:
/// `θ_{(C,a)}` is `ϑ_a` restricted to the points sent into `im ϑ_c` for
/// every `c ∈ C`.
pub fn expansion_action(exp: &Expansion, action: &PartialAction) -> Result<PartialAction, ExpandError> {
    if action.semigroup() != exp.base() {
        return Err(ExpandError::BaseMismatch);
    }
    let space = action.space();
    let theta = exp
        .forms()
        .iter()
        .map(|f| {
            let va = action.map(f.a);
            let map = space
                .points()
                .map(|p| va.apply(p).filter(|&q| f.c.iter().all(|&c| action.map(c).image().contains(&q))))
                .collect();
            PartialBijection::from_map(map).expect("restriction of an injective map")
        })
        .collect();
    Ok(PartialAction::validate(exp.semigroup().clone(), space.clone(), theta)?)
}

/// The expansion action is genuine, `θ∘ι` gives back `ϑ`, and both actions
/// have the same orbits and invariant sets.
pub fn check_expansion_action(exp: &Expansion, base: &PartialAction, lifted: &PartialAction, seed: u64) -> CheckReport {
    let a = exp.base();
    let mut r = CheckReport::new("expansion.action", "");
    r.require(lifted.is_genuine(), || "expansion action is not genuine".into());
    for x in a.elements() {
        r.require(lifted.map(exp.iota(x)) == base.map(x), || {
            format!("theta_iota({}) != vartheta_{}", a.label(x), a.label(x))
        });
    }
    for f in exp.semigroup().elements() {
        let restricted = lifted.map(f).is_restriction_of(base.map(exp.q(f)));
        r.require(restricted, || format!("theta_{} is not a restriction of vartheta_q", exp.semigroup().label(f)));
    }
    r.require(lifted.orbits() == base.orbits(), || "orbit partitions differ".into());
    let subsets = crate::sets::battery(base.space().len(), seed);
    for m in &subsets {
        r.require(lifted.is_invariant(m) == base.is_invariant(m), || {
            format!("invariance of {} differs", base.fmt_points(m))
        });
    }
    r.size("subsets", subsets.len());
    r
}

/// `ι[A(ϑ)_M^N] = S_A(θ)_M^N ∩ ι(A)` and `q(S_A(θ)_M^N) = A(ϑ)_M^N`.
pub fn check_fusirat(
    exp: &Expansion,
    base: &PartialAction,
    lifted: &PartialAction,
    m: &PointSet,
    n: &PointSet,
) -> CheckReport {
    let sp = base.space();
    let mut r = CheckReport::new("expansion.recurrence_sets", format!("M={} N={}", sp.fmt_set(m), sp.fmt_set(n)));
    let naive_a = base.naive_recurrence(m, n);
    let naive_s = lifted.naive_recurrence(m, n);
    let iota_side: ElementSet = naive_a.iter().map(|&x| exp.iota(x)).collect();
    let meet: ElementSet = naive_s.intersection(&exp.iota_image()).copied().collect();
    r.size("iota_lhs", iota_side.len());
    r.size("iota_rhs", meet.len());
    r.require(iota_side == meet, || {
        format!("iota side {} vs {}", lifted.fmt_elements(&iota_side), lifted.fmt_elements(&meet))
    });
    let q_side: ElementSet = naive_s.iter().map(|&s| exp.q(s)).collect();
    r.size("q_lhs", q_side.len());
    r.size("q_rhs", naive_a.len());
    r.require(q_side == naive_a, || {
        format!("q side {} vs {}", base.fmt_elements(&q_side), base.fmt_elements(&naive_a))
    });
    r
}

/// `q` maps `S_A{θ,σ}` onto `A{ϑ,σ}`, `q(s) = q(t)` exactly when `s ↔_σ t`,
/// and the induced `Q_σ` is a bijection carrying `𝒮_A(θ)_σ^N` onto `A(ϑ)_σ^N`.
pub fn check_potrivire(
    exp: &Expansion,
    base: &PartialAction,
    lifted: &PartialAction,
    sigma: Point,
    n: &PointSet,
) -> CheckReport {
    let sp = base.space();
    let mut r = CheckReport::new("expansion.germ_bijection", format!("at={} N={}", sp.label(sigma), sp.fmt_set(n)));
    let app_s = lifted.applicable(sigma);
    let app_a = base.applicable(sigma);
    let q_image: ElementSet = app_s.iter().map(|&s| exp.q(s)).collect();
    r.size("applicable_expansion", app_s.len());
    r.size("applicable_base", app_a.len());
    r.require(q_image == app_a, || {
        format!(
            "q(S_A{{theta,sigma}}) = {} but A{{vartheta,sigma}} = {}",
            base.fmt_elements(&q_image),
            base.fmt_elements(&app_a)
        )
    });
    let s = lifted.semigroup();
    for &x in &app_s {
        for &y in &app_s {
            let same_q = exp.q(x) == exp.q(y);
            let equiv = lifted.point_equiv(sigma, x, y).expect("applicable");
            r.require(same_q == equiv, || {
                format!("q-equal={same_q} but germ-equivalent={equiv} for {} and {}", s.label(x), s.label(y))
            });
        }
    }
    let table = lifted.germ_classes(sigma);
    let big_q: Vec<Element> = table.classes().iter().map(|c| exp.q(c[0])).collect();
    for (i, c) in table.classes().iter().enumerate() {
        r.require(c.iter().all(|&x| exp.q(x) == big_q[i]), || format!("Q is not well defined on class {i}"));
    }
    let distinct: ElementSet = big_q.iter().copied().collect();
    r.size("classes", table.len());
    r.require(distinct.len() == table.len(), || "Q is not injective".into());
    r.require(distinct == app_a, || "Q is not onto A{vartheta,sigma}".into());
    let rec = table.recurrence(lifted, n);
    let mapped: ElementSet = rec.iter().map(|&c| big_q[c]).collect();
    let target = base.naive_recurrence(&PointSet::from([sigma]), n);
    r.size("recurrence_classes", rec.len());
    r.size("base_recurrence", target.len());
    r.require(mapped == target && rec.len() == target.len(), || {
        format!("Q[recurrence] = {} but A(vartheta) = {}", base.fmt_elements(&mapped), base.fmt_elements(&target))
    });
    r
}

/// `π_σ(s) ↦ ⟨q(s)⟩_σ` is a well-defined bijection from the germ classes of
/// the lifted action onto those of the base action, carrying recurrence
/// classes onto recurrence classes. When the base is a group this is the
/// map of [`check_potrivire`].
pub fn check_potrivire_classes(
    exp: &Expansion,
    base: &PartialAction,
    lifted: &PartialAction,
    sigma: Point,
    n: &PointSet,
) -> CheckReport {
    let sp = base.space();
    let mut r =
        CheckReport::new("expansion.germ_class_bijection", format!("at={} N={}", sp.label(sigma), sp.fmt_set(n)));
    let lifted_table = lifted.germ_classes(sigma);
    let base_table = base.germ_classes(sigma);
    let mut image = Vec::with_capacity(lifted_table.len());
    for (i, class) in lifted_table.classes().iter().enumerate() {
        let targets: BTreeSet<Option<usize>> = class.iter().map(|&s| base_table.class_of(exp.q(s))).collect();
        r.require(targets.len() == 1 && !targets.contains(&None), || {
            format!("class {i} meets {} base classes", targets.len())
        });
        image.push(targets.into_iter().next().flatten());
    }
    let distinct: BTreeSet<usize> = image.iter().flatten().copied().collect();
    r.size("classes", lifted_table.len());
    r.size("base_classes", base_table.len());
    r.require(distinct.len() == lifted_table.len() && distinct.len() == base_table.len(), || {
        "class map is not a bijection".into()
    });
    let rec = lifted_table.recurrence(lifted, n);
    let mapped: BTreeSet<usize> = rec.iter().filter_map(|&c| image[c]).collect();
    let target = base_table.recurrence(base, n);
    r.size("recurrence_classes", rec.len());
    r.size("base_recurrence_classes", target.len());
    r.require(mapped == target && rec.len() == target.len(), || "recurrence classes do not correspond".into());
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;
    use crate::isg::{cyclic_group, direct_product, semilattice_chain};

    fn z2() -> InverseSemigroup {
        cyclic_group(2).unwrap()
    }

    fn form(base: &InverseSemigroup, c: &[&str], a: &str) -> NormalForm {
        NormalForm { a: base.index_of(a).unwrap(), c: c.iter().map(|l| base.index_of(l).unwrap()).collect() }
    }

    #[test]
    fn expansion_sizes() {
        let exp = Expansion::new(&z2()).unwrap();
        let expected = vec![form(&z2(), &["e"], "e"), form(&z2(), &["e", "g"], "e"), form(&z2(), &["e", "g"], "g")];
        assert_eq!(exp.forms(), expected.as_slice());
        assert_eq!(Expansion::new(&cyclic_group(3).unwrap()).unwrap().len(), 8);
        assert_eq!(Expansion::new(&cyclic_group(1).unwrap()).unwrap().len(), 1);
        for n in 1..=5 {
            assert_eq!(Expansion::new(&cyclic_group(n).unwrap()).unwrap().len(), group_expansion_size(n));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let (i3, _) = crate::isg::symmetric_inverse(3).unwrap();
        assert!(matches!(Expansion::new(&i3), Err(ExpandError::CapExceeded { .. })));
    }

    #[test]
    fn iota_and_q() {
        let g = z2();
        let exp = Expansion::new(&g).unwrap();
        assert_eq!(exp.form(exp.iota(1)), &form(&g, &["e", "g"], "g"));
        assert_eq!(exp.q(exp.index_of(&form(&g, &["e", "g"], "e")).unwrap()), 0);
        let (i2, _) = crate::isg::symmetric_inverse(2).unwrap();
        for a in i2.elements() {
            assert_eq!(iota_form(&i2, a).a, a);
        }
    }

    #[test]
    fn normalize_examples() {
        let g = z2();
        assert_eq!(normalize(&g, &[1, 1]).unwrap(), form(&g, &["e", "g"], "e"));
        assert_eq!(normalize(&g, &[1]).unwrap(), iota_form(&g, 1));
        assert_eq!(normalize(&g, &[]), Err(ExpandError::EmptyWord));
        let (i2, _) = crate::isg::symmetric_inverse(2).unwrap();
        for a in i2.elements() {
            assert_eq!(normalize(&i2, &[a, i2.inv(a), a]).unwrap(), iota_form(&i2, a));
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_congruence(&z2(), 6).unwrap().num_classes(), 3);
        assert_eq!(oracle_congruence(&cyclic_group(1).unwrap(), 4).unwrap().num_classes(), 1);
        assert_eq!(oracle_congruence(&cyclic_group(3).unwrap(), 8).unwrap().num_classes(), 8);
        assert!(matches!(oracle_congruence(&z2(), 3), Err(ExpandError::OracleTooShort(3))));
    }

    #[test]
    fn oracle_gate_on_small_bases() {
        let bases = vec![
            cyclic_group(1).unwrap(),
            z2(),
            cyclic_group(3).unwrap(),
            semilattice_chain(2).unwrap(),
            direct_product(&semilattice_chain(2).unwrap(), &z2()).unwrap(),
        ];
        for b in bases {
            let exp = Expansion::new(&b).unwrap();
            let gate = oracle_gate(&exp).unwrap();
            assert!(gate.report.passed(), "{}\n{:?}", gate.report, gate.report.notes);
            assert_eq!(gate.oracle_table, gate.expansion_table);
        }
    }

    #[test]
    fn structure_checks_pass() {
        for b in [z2(), cyclic_group(3).unwrap(), direct_product(&semilattice_chain(2).unwrap(), &z2()).unwrap()] {
            let exp = Expansion::new(&b).unwrap();
            let rep = check_expansion_structure(&exp);
            assert!(rep.passed(), "{rep}");
        }
        let (i2, _) = crate::isg::symmetric_inverse(2).unwrap();
        let exp = Expansion::new(&i2).unwrap_err();
        assert!(matches!(exp, ExpandError::CapExceeded { .. }));
    }

    #[test]
    fn prefix_relations_predicate() {
        let g = z2();
        let exp = Expansion::new(&g).unwrap();
        let iota: Vec<Element> = g.elements().map(|a| exp.iota(a)).collect();
        assert!(satisfies_prefix_relations(&g, exp.semigroup(), &iota));
        assert!(satisfies_prefix_relations(&g, &g, &[0, 1]));
        // g ↦ e, e ↦ g breaks [a][a♯][a] = [a]
        assert!(!satisfies_prefix_relations(&g, &g, &[1, 0]));
    }

    #[test]
    fn pz2_expansion_action() {
        let pz2 = fixtures::pz2();
        let exp = Expansion::new(pz2.semigroup()).unwrap();
        let theta = expansion_action(&exp, &pz2).unwrap();
        assert!(theta.is_genuine());
        let x = BTreeSet::from([0]);
        assert_eq!(theta.map(exp.iota(0)), &PartialBijection::identity(2));
        assert_eq!(theta.map(exp.iota(1)), &PartialBijection::identity_on(2, &x));
        assert_eq!(theta.map(exp.epsilon(1)), &PartialBijection::identity_on(2, &x));
        assert!(check_expansion_action(&exp, &pz2, &theta, 1).passed());
    }

    #[test]
    fn pz2_recurrence_checks() {
        let pz2 = fixtures::pz2();
        let exp = Expansion::new(pz2.semigroup()).unwrap();
        let theta = expansion_action(&exp, &pz2).unwrap();
        let (x, y) = (PointSet::from([0]), PointSet::from([1]));
        assert!(check_fusirat(&exp, &pz2, &theta, &x, &x).passed());
        assert_eq!(pz2.naive_recurrence(&x, &x).len(), 2);
        assert!(check_fusirat(&exp, &pz2, &theta, &y, &x).passed());
        assert!(pz2.naive_recurrence(&y, &x).is_empty());
        assert!(check_fusirat(&exp, &pz2, &theta, &x, &PointSet::new()).passed());
        let px = check_potrivire(&exp, &pz2, &theta, 0, &x);
        assert!(px.passed(), "{px}");
        assert_eq!(px.sizes["classes"], 2);
        let py = check_potrivire(&exp, &pz2, &theta, 1, &y);
        assert!(py.passed());
        assert_eq!(py.sizes["classes"], 1);
    }

    #[test]
    fn global_group_action_lifts_to_total_maps() {
        let g = cyclic_group(3).unwrap();
        let act = crate::isg::wagner_preston_action(&g);
        let exp = Expansion::new(&g).unwrap();
        let theta = expansion_action(&exp, &act).unwrap();
        for a in g.elements() {
            assert_eq!(theta.map(exp.iota(a)).rank(), 3);
        }
        let all = act.space().all();
        for p in act.space().points() {
            let rep = check_potrivire(&exp, &act, &theta, p, &all);
            assert!(rep.passed());
            assert_eq!(rep.sizes["classes"], 3);
        }
    }

    #[test]
    fn ordered_base_breaks_the_element_bijection() {
        let a4 = fixtures::a4();
        let exp = Expansion::new(a4.semigroup()).unwrap();
        let theta = expansion_action(&exp, &a4).unwrap();
        let z = a4.space().index_of("z").unwrap();
        let all = a4.space().all();
        let s = a4.semigroup();
        // [(0,e)] ≤ [(1,e)], both apply at z, yet q separates them
        let lo = exp.iota(s.index_of("(0,e)").unwrap());
        let hi = exp.iota(s.index_of("(1,e)").unwrap());
        assert!(exp.semigroup().leq(lo, hi));
        assert!(theta.point_equiv(z, lo, hi).unwrap());
        let rep = check_potrivire(&exp, &a4, &theta, z, &all);
        assert!(!rep.passed());
        assert_eq!((rep.sizes["classes"], rep.sizes["applicable_base"]), (1, 2));
        for p in a4.space().points() {
            for n in crate::sets::all_subsets(&a4.space().points().collect::<Vec<_>>()) {
                assert!(check_potrivire_classes(&exp, &a4, &theta, p, &n).passed());
            }
        }
    }
}
