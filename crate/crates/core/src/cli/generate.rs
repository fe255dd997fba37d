//! Seeded generators of partial actions by restricting larger ones.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::cli::format::Instance;
use crate::dynamics::{ActionError, FiniteSpace, PartialAction, PointSet};
use crate::gact::{canonical_action, GactError};
use crate::germ::{FiniteGroupoid, GroupoidError};
use crate::isg::{
    builtin, cyclic_group, direct_product, semilattice_chain, wagner_preston_action, IsgError, PartialBijection,
};
use crate::sets::rng;

pub const GENERATION_RETRIES: usize = 64;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("no valid candidate after {0} attempts")]
    GenerationExhausted(usize),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Semigroup(#[from] IsgError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    GroupoidAction(#[from] GactError),
}

/// `θ` restricted to `U`: `θ'_s = θ_s ∩ (U × U)`. Always a partial action;
/// panics on an empty `U`.
pub fn restrict_to(action: &PartialAction, u: &PointSet) -> PartialAction {
    assert!(!u.is_empty(), "restriction to the empty set");
    let kept: Vec<usize> = u.iter().copied().collect();
    let pos = |p: usize| kept.iter().position(|&q| q == p);
    let space = FiniteSpace::new(kept.iter().map(|&p| action.space().label(p).to_string()).collect())
        .expect("labels stay distinct");
    let theta = action
        .maps()
        .iter()
        .map(|m| {
            let map = kept.iter().map(|&p| m.apply(p).and_then(pos)).collect();
            PartialBijection::from_map(map).expect("restriction stays injective")
        })
        .collect();
    PartialAction::validate(action.semigroup().clone(), space, theta).expect("restriction of a partial action")
}

/// Two disjoint copies of an action; the second copy's labels get a `'`.
pub fn doubled(action: &PartialAction) -> PartialAction {
    let k = action.space().len();
    let mut labels = action.space().labels().to_vec();
    labels.extend(action.space().labels().iter().map(|l| format!("{l}'")));
    let theta = action
        .maps()
        .iter()
        .map(|m| {
            let mut map: Vec<Option<usize>> = m.as_slice().to_vec();
            map.extend(m.as_slice().iter().map(|q| q.map(|q| q + k)));
            PartialBijection::from_map(map).expect("disjoint union")
        })
        .collect();
    PartialAction::validate(action.semigroup().clone(), FiniteSpace::new(labels).expect("labels"), theta)
        .expect("disjoint union of partial actions")
}

/// Restricts `global` to a random nonempty subset and, on odd attempts,
/// also deletes one random arrow of a non-idempotent map and its inverse.
/// Candidates are kept only if they validate.
pub fn generate_restricted_action(global: &PartialAction, seed: u64) -> Result<PartialAction, GenError> {
    let mut r = rng(seed);
    let s = global.semigroup();
    let points: Vec<usize> = global.space().points().collect();
    for attempt in 0..GENERATION_RETRIES {
        let mut u: PointSet = points.iter().copied().filter(|_| r.gen_bool(0.75)).collect();
        if u.is_empty() {
            u.insert(*points.choose(&mut r).expect("nonempty space"));
        }
        let restricted = restrict_to(global, &u);
        if attempt % 2 == 0 {
            return Ok(restricted);
        }
        let candidates: Vec<usize> =
            s.elements().filter(|&x| !s.is_idempotent(x) && !restricted.map(x).is_empty()).collect();
        let Some(&x) = candidates.choose(&mut r) else { return Ok(restricted) };
        let pairs: Vec<(usize, usize)> = restricted.map(x).pairs().collect();
        let &(p, q) = pairs.choose(&mut r).unwrap();
        let mut theta = restricted.maps().to_vec();
        let drop = |m: &PartialBijection, a: usize| {
            let mut map = m.as_slice().to_vec();
            map[a] = None;
            PartialBijection::from_map(map).unwrap()
        };
        theta[x] = drop(&theta[x], p);
        let xi = s.inv(x);
        theta[xi] = drop(&theta[xi], q);
        if let Ok(a) = PartialAction::validate(s.clone(), restricted.space().clone(), theta) {
            return Ok(a);
        }
    }
    Err(GenError::GenerationExhausted(GENERATION_RETRIES))
}

/// Global actions used as generator seeds: two copies of the regular
/// action of `Z_n` or of `E₂ × Z_n`.
pub fn regular_action(family: &str, n: usize) -> Result<PartialAction, GenError> {
    let s = match family {
        "cyclic" => cyclic_group(n)?,
        "e2_cyclic" => direct_product(&semilattice_chain(2)?, &cyclic_group(n)?)?,
        other => return Err(GenError::UnknownFamily(other.to_string())),
    };
    Ok(doubled(&wagner_preston_action(&s)))
}

pub const FAMILIES: &[&str] = &[
    "symmetric_inverse",
    "cyclic_group",
    "semilattice_chain",
    "restricted_cyclic",
    "restricted_e2_cyclic",
    "pair_groupoid",
];

/// One instance of a named family, as used by `gen`.
pub fn family_instance(family: &str, n: usize, seed: u64) -> Result<Instance, GenError> {
    let name = format!("{family}_{n}");
    Ok(match family {
        "symmetric_inverse" | "cyclic_group" | "semilattice_chain" => {
            Instance::named(&name).with_semigroup(builtin(family, n)?)
        }
        "restricted_cyclic" => Instance::named(&format!("{name}_s{seed}"))
            .with_action(generate_restricted_action(&regular_action("cyclic", n)?, seed)?),
        "restricted_e2_cyclic" => Instance::named(&format!("{name}_s{seed}"))
            .with_action(generate_restricted_action(&regular_action("e2_cyclic", n)?, seed)?),
        "pair_groupoid" => Instance::named(&name).with_gaction(canonical_action(&FiniteGroupoid::pair(n)?)?),
        other => return Err(GenError::UnknownFamily(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;

    #[test]
    fn full_restriction_is_identity() {
        let k = fixtures::k();
        let same = restrict_to(&k, &k.space().all());
        assert_eq!(same.maps(), k.maps());
    }

    #[test]
    fn restricting_swap_to_a_fixed_point() {
        let swap = wagner_preston_action(&fixtures::z2());
        let a = restrict_to(&swap, &PointSet::from([0]));
        assert_eq!(a.space().len(), 1);
        assert!(a.map(1).is_empty());
        assert!(!a.is_genuine());
    }

    #[test]
    fn generated_actions_validate_and_are_deterministic() {
        for family in ["cyclic", "e2_cyclic"] {
            let global = regular_action(family, 2).unwrap();
            for seed in 0..20 {
                let a = generate_restricted_action(&global, seed).unwrap();
                let b = generate_restricted_action(&global, seed).unwrap();
                assert_eq!(a.maps(), b.maps());
                assert_eq!(a.space().labels(), b.space().labels());
            }
        }
        let wp = wagner_preston_action(&fixtures::i2());
        assert!(generate_restricted_action(&wp, 1).is_ok());
    }

    #[test]
    fn families() {
        for f in FAMILIES {
            assert!(family_instance(f, 2, 3).is_ok(), "{f}");
        }
        assert!(family_instance("nope", 2, 0).is_err());
    }
}
