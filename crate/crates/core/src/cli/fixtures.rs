//! Built-in instances.

use crate::cli::format::Instance;
use crate::dynamics::{FiniteSpace, PartialAction};
use crate::gact::{canonical_action, self_action, GroupoidAction};
use crate::germ::FiniteGroupoid;
use crate::isg::{
    cyclic_group, direct_product, semilattice_chain, symmetric_inverse, wagner_preston_action, InverseSemigroup,
    PartialBijection,
};

fn space(names: &[&str]) -> FiniteSpace {
    FiniteSpace::from_names(names).expect("fixture space")
}

fn pb(n: usize, pairs: &[(usize, usize)]) -> PartialBijection {
    PartialBijection::from_pairs(n, pairs).expect("fixture map")
}

pub fn i2() -> InverseSemigroup {
    symmetric_inverse(2).expect("I2").0
}

pub fn i3() -> InverseSemigroup {
    symmetric_inverse(3).expect("I3").0
}

pub fn z2() -> InverseSemigroup {
    cyclic_group(2).expect("Z2")
}

pub fn z3() -> InverseSemigroup {
    cyclic_group(3).expect("Z3")
}

pub fn trivial_group() -> InverseSemigroup {
    cyclic_group(1).expect("trivial group")
}

/// `E₂ × Z₂`; element `(a, b)` has index `2a + b`.
pub fn e2z2() -> InverseSemigroup {
    direct_product(&semilattice_chain(2).expect("E2"), &z2()).expect("E2xZ2")
}

/// The two-element left-zero semigroup `xy = x`, which is not inverse.
pub fn left_zero_table() -> Vec<Vec<usize>> {
    vec![vec![0, 0], vec![1, 1]]
}

/// `I₂` acting on `{1, 2}` by its own partial bijections.
pub fn k() -> PartialAction {
    let (s, elems) = symmetric_inverse(2).expect("I2");
    PartialAction::validate(s, space(&["1", "2"]), elems).expect("K")
}

/// `Z₂` on `{x, y}` with `θ_g` the identity of `{x}`.
pub fn pz2() -> PartialAction {
    let theta = vec![PartialBijection::identity(2), pb(2, &[(0, 0)])];
    PartialAction::validate(z2(), space(&["x", "y"]), theta).expect("PZ2")
}

/// `E₂ × Z₂` on `{x, y, z}`: `(1,g)` swaps `x` and `y`, `(0,e)` fixes `z`,
/// `(0,g)` is empty.
pub fn a4() -> PartialAction {
    let theta =
        vec![pb(3, &[(2, 2)]), PartialBijection::empty(3), PartialBijection::identity(3), pb(3, &[(0, 1), (1, 0)])];
    PartialAction::validate(e2z2(), space(&["x", "y", "z"]), theta).expect("A4")
}

/// Trivial group on one point.
pub fn triv() -> PartialAction {
    PartialAction::validate(trivial_group(), space(&["p"]), vec![PartialBijection::identity(1)]).expect("TRIV")
}

/// `Z₂` fixing a single point: `θ_e(x) = θ_g(x)` although `e` and `g` have
/// no common lower bound.
pub fn z2_trivial_point() -> PartialAction {
    let theta = vec![PartialBijection::identity(1), PartialBijection::identity(1)];
    PartialAction::validate(z2(), space(&["x"]), theta).expect("CONV")
}

/// `Z₂` on one point with `θ_g` empty: no germ lands in the class of `g`.
pub fn z2_empty_generator() -> PartialAction {
    let theta = vec![PartialBijection::identity(1), PartialBijection::empty(1)];
    PartialAction::validate(z2(), space(&["x"]), theta).expect("NS")
}

pub fn wp_z2() -> PartialAction {
    wagner_preston_action(&z2())
}

pub fn wp_e2z2() -> PartialAction {
    wagner_preston_action(&e2z2())
}

pub fn wp_i2() -> PartialAction {
    wagner_preston_action(&i2())
}

/// Named semigroup fixtures.
pub fn semigroups() -> Vec<(&'static str, InverseSemigroup)> {
    vec![("I2", i2()), ("I3", i3()), ("Z2", z2()), ("Z3", z3()), ("E2xZ2", e2z2()), ("TRIVIAL", trivial_group())]
}

/// Named partial action fixtures.
pub fn actions() -> Vec<(&'static str, PartialAction)> {
    vec![
        ("K", k()),
        ("PZ2", pz2()),
        ("A4", a4()),
        ("TRIV", triv()),
        ("CONV", z2_trivial_point()),
        ("NS", z2_empty_generator()),
        ("WP_Z2", wp_z2()),
        ("WP_E2xZ2", wp_e2z2()),
        ("WP_I2", wp_i2()),
    ]
}

pub fn p2() -> FiniteGroupoid {
    FiniteGroupoid::pair(2).expect("P2")
}

pub fn p3() -> FiniteGroupoid {
    FiniteGroupoid::pair(3).expect("P3")
}

/// The trivial group as a one-arrow groupoid.
pub fn unit_groupoid() -> FiniteGroupoid {
    FiniteGroupoid::from_group(&trivial_group()).expect("unit groupoid")
}

pub fn z3_groupoid() -> FiniteGroupoid {
    FiniteGroupoid::from_group(&z3()).expect("Z3 groupoid")
}

/// Named groupoid action fixtures.
pub fn gactions() -> Vec<(&'static str, GroupoidAction)> {
    vec![
        ("P2_CANONICAL", canonical_action(&p2()).expect("canonical P2")),
        ("P2_SELF", self_action(&p2()).expect("self P2")),
        ("P3_CANONICAL", canonical_action(&p3()).expect("canonical P3")),
        ("P3_SELF", self_action(&p3()).expect("self P3")),
        ("UNIT", canonical_action(&unit_groupoid()).expect("unit")),
        ("Z3_SELF", self_action(&z3_groupoid()).expect("self Z3")),
    ]
}

/// Every fixture as an instance: semigroups, actions and groupoid actions.
pub fn catalog() -> Vec<Instance> {
    let mut out: Vec<Instance> = semigroups().into_iter().map(|(n, s)| Instance::named(n).with_semigroup(s)).collect();
    out.extend(actions().into_iter().map(|(n, a)| Instance::named(n).with_action(a)));
    out.extend(gactions().into_iter().map(|(n, ga)| Instance::named(n).with_gaction(ga)));
    out
}
