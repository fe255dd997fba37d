//! Brute force over all partitions: the minimum group congruence is the
//! finest congruence whose quotient is a group.

use partact::cli::fixtures;
use partact::isg::{cyclic_group, direct_product, from_partial_bijections, semilattice_chain};
use partact::{Congruence, InverseSemigroup, PartialBijection};

const MAX_ELEMENTS: usize = 8;

/// Every set partition of `0..n` as a vector of block ids.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn go(i: usize, blocks: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=blocks {
            cur[i] = b;
            go(i + 1, blocks.max(b + 1), cur, out);
        }
    }
    if n > 0 {
        go(1, 1, &mut cur, &mut out);
    }
    out
}

fn is_congruence(s: &InverseSemigroup, block: &[usize]) -> bool {
    s.elements().all(|a| {
        s.elements().filter(|&b| block[a] == block[b]).all(|b| {
            s.elements().all(|c| block[s.mul(a, c)] == block[s.mul(b, c)] && block[s.mul(c, a)] == block[s.mul(c, b)])
        })
    })
}

/// Quotient is a group iff all idempotents share one block.
fn quotient_is_group(s: &InverseSemigroup, block: &[usize]) -> bool {
    let e = s.idempotents();
    e.iter().all(|&x| block[x] == block[*e.first().unwrap()])
}

fn check(name: &str, s: &InverseSemigroup) {
    assert!(s.len() <= MAX_ELEMENTS, "{name} too large for brute force");
    let mg = Congruence::min_group(s).unwrap();
    let group_congruences: Vec<Vec<usize>> =
        partitions(s.len()).into_iter().filter(|b| is_congruence(s, b) && quotient_is_group(s, b)).collect();
    let mg_block: Vec<usize> = s.elements().map(|x| mg.class_of(x)).collect();
    assert!(
        group_congruences
            .iter()
            .any(|b| s.elements().all(|x| s.elements().all(|y| (b[x] == b[y]) == (mg_block[x] == mg_block[y])))),
        "{name}: min_group is not a group congruence"
    );
    for b in &group_congruences {
        for x in s.elements() {
            for y in s.elements() {
                if mg.related(x, y) {
                    assert_eq!(b[x], b[y], "{name}: a group congruence does not contain min_group");
                }
            }
        }
    }
    assert!(mg.quotient(s).unwrap().0.is_group(), "{name}");
}

#[test]
fn partition_counts_are_bell_numbers() {
    let bell: Vec<usize> = (1..=6).map(|n| partitions(n).len()).collect();
    assert_eq!(bell, [1, 2, 5, 15, 52, 203]);
}

#[test]
fn min_group_is_the_finest_group_congruence() {
    let e = |n| semilattice_chain(n).unwrap();
    let z = |n| cyclic_group(n).unwrap();
    let mut cases: Vec<(String, InverseSemigroup)> = vec![
        ("I2".into(), fixtures::i2()),
        ("Z4".into(), z(4)),
        ("E4".into(), e(4)),
        ("E2xZ2".into(), fixtures::e2z2()),
        ("E2xE2".into(), direct_product(&e(2), &e(2)).unwrap()),
        ("E2xZ3".into(), direct_product(&e(2), &z(3)).unwrap()),
    ];
    for (name, a) in fixtures::actions() {
        if a.semigroup().len() <= MAX_ELEMENTS {
            cases.push((name.into(), a.semigroup().clone()));
        }
    }
    // Inverse subsemigroups of I3 generated by pairs of rank-2 maps.
    let rank_two: Vec<PartialBijection> =
        [[Some(1), Some(0), None], [None, Some(2), Some(1)], [Some(0), None, Some(2)], [Some(1), Some(2), None]]
            .iter()
            .map(|m| PartialBijection::from_map(m.to_vec()).unwrap())
            .collect();
    for (i, a) in rank_two.iter().enumerate() {
        for b in &rank_two[i..] {
            let (s, _) = from_partial_bijections(&[a.clone(), b.clone()]).unwrap();
            if s.len() <= MAX_ELEMENTS {
                cases.push((format!("<{} {}>", a.image_word(), b.image_word()), s));
            }
        }
    }
    assert!(cases.len() > 10);
    for (name, s) in &cases {
        check(name, s);
    }
}
