use ijobstruct::obstruction::MetacyclicGroup;
use ijobstruct::rh::{
    exists_action, find_action, find_generating_vector, has_generating_vector,
    signatures_for_genus_range, GroupTable, Signature,
};
use proptest::prelude::*;

fn meta(p: u64, q: u64, r: i64) -> GroupTable {
    GroupTable::metacyclic(&MetacyclicGroup::new(p, q, r).unwrap())
}

#[test]
fn golden_z15_genus7() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_ijobstruct"))
        .args(["rh-oracle", "--cyclic", "15", "--genus", "7", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let golden = include_str!("golden/z15_genus7.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
    let w = find_action(&GroupTable::cyclic(15), 7).unwrap();
    assert_eq!(w.signature, Signature::new(0, vec![15, 15, 15]));
}

#[test]
fn order_305_has_no_signature_up_to_genus_30() {
    let g = meta(61, 5, -3);
    assert!(signatures_for_genus_range(&g, 30).is_empty());
    for genus in 2..=30 {
        assert!(!exists_action(&g, genus));
    }
    // the first admissible signature
    let first = signatures_for_genus_range(&g, 62);
    assert_eq!(first, vec![(62, Signature::new(0, vec![5, 5, 5]))]);
}

#[test]
fn odd_cyclic_groups_beyond_wiman_never_act() {
    for genus in 2..=30u64 {
        let bound = 4 * genus + 2;
        for m in (bound + 1..=bound + 24).filter(|m| m % 2 == 1) {
            assert!(
                !exists_action(&GroupTable::cyclic(m as usize), genus),
                "Z/{m} on genus {genus}"
            );
        }
    }
}

#[test]
fn wiman_bound_is_attained() {
    assert!(exists_action(&GroupTable::cyclic(10), 2));
    assert!(exists_action(&GroupTable::cyclic(14), 3));
    // odd orders reach 2g + 1
    assert!(exists_action(&GroupTable::cyclic(5), 2));
    assert!(exists_action(&GroupTable::cyclic(7), 3));
}

#[test]
fn odd_metacyclic_groups_obey_the_nine_bound() {
    let groups = [
        (7, 3, 2),
        (13, 3, 3),
        (19, 3, 7),
        (11, 5, 3),
        (31, 3, 5),
        (31, 5, 2),
        (37, 3, 10),
        (43, 3, 6),
        (61, 3, 13),
        (41, 5, 10),
        (61, 5, -3),
    ];
    let mut checked = 0;
    for (p, q, r) in groups {
        let g = meta(p, q, r);
        let order = p * q;
        for genus in 4..=30u64 {
            if order > 9 * (genus - 1) {
                assert!(!exists_action(&g, genus), "{} on genus {genus}", g.label());
                checked += 1;
            }
        }
    }
    assert!(checked > 40);
    // genus 3 is outside the bound's range: the order-21 group acts on the Klein quartic
    assert!(exists_action(&meta(7, 3, 2), 3));
}

#[test]
fn explicit_vectors() {
    let z7 = GroupTable::cyclic(7);
    let sig = Signature::new(0, vec![7, 7, 7]);
    assert!(find_generating_vector(&z7, &sig)
        .unwrap()
        .is_valid_for(&z7, &sig));
    assert!(has_generating_vector(
        &GroupTable::cyclic(5),
        &Signature::new(0, vec![5, 5, 5])
    ));
    assert!(has_generating_vector(&z7, &Signature::new(1, vec![])));
    let g21 = meta(7, 3, 2);
    let sig = Signature::new(0, vec![3, 3, 7]);
    assert!(find_generating_vector(&g21, &sig)
        .unwrap()
        .is_valid_for(&g21, &sig));
}

fn small_group() -> impl Strategy<Value = GroupTable> {
    prop_oneof![
        (2usize..=16).prop_map(GroupTable::cyclic),
        Just(meta(7, 3, 2)),
        Just(meta(5, 2, -1)),
        Just(meta(13, 3, 3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn period_order_is_irrelevant(g in small_group(), seed in any::<u64>(), h in 0u32..=1) {
        let orders = g.nontrivial_orders();
        let k = (seed % 3 + 1) as usize + usize::from(h == 0);
        let periods: Vec<u32> = (0..k).map(|i| orders[(seed as usize >> (4 * i)) % orders.len()]).collect();
        let mut reversed = periods.clone();
        reversed.reverse();
        let mut rotated = periods.clone();
        rotated.rotate_left(1);
        let base = has_generating_vector(&g, &Signature::new(h, periods));
        prop_assert_eq!(base, has_generating_vector(&g, &Signature::new(h, reversed)));
        prop_assert_eq!(base, has_generating_vector(&g, &Signature::new(h, rotated)));
    }

    #[test]
    fn signatures_satisfy_riemann_hurwitz(g in small_group(), gmax in 2u64..=12) {
        let sigs = signatures_for_genus_range(&g, gmax);
        let mut sorted = sigs.clone();
        sorted.sort();
        prop_assert_eq!(&sorted, &sigs);
        for (genus, s) in sigs {
            prop_assert!((2..=gmax).contains(&genus));
            prop_assert_eq!(s.cover_genus(g.order() as u64), Some(genus as i64));
            prop_assert!(s.periods.iter().all(|m| g.nontrivial_orders().contains(m)));
        }
    }
}
