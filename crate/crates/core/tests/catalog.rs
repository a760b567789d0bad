mod common;

use std::sync::Arc;

use biplane_core::aut::{automorphism_group, block_action, canonical_form, flag_orbit_count};
use biplane_core::catalog::{build, example_base_block, example_group, list_known};
use biplane_core::design::{dual, verify_symmetric_design};
use biplane_core::diffset::{develop, search_difference_sets, DifferenceSet, GroupTable};
use biplane_core::par::Exec;
use biplane_core::{are_isomorphic, Error};

#[test]
fn expected_metadata_holds() {
    for e in list_known().into_iter().filter(|e| e.constructible) {
        let d = build(e.name).unwrap();
        assert_eq!(d.params(), e.params, "{}", e.name);
        let a = automorphism_group(&d).unwrap();
        if let Some(order) = e.aut_order {
            assert_eq!(a.order, order, "{}", e.name);
        }
        if let Some(t) = e.transitive {
            assert_eq!(a.group.is_transitive(), t, "{}", e.name);
        }
        if let Some(f) = e.flag_transitive {
            assert_eq!(flag_orbit_count(&d, &a.group).unwrap() == 1, f, "{}", e.name);
        }
        if let Some(p) = e.primitive {
            assert_eq!(common::is_primitive(d.v(), a.group.generators()), p, "{}", e.name);
        }
    }
}

#[test]
fn metadata_rows_cannot_be_built() {
    for name in ["biplane56", "biplane79", "biplane121"] {
        assert!(matches!(build(name), Err(Error::Unavailable(_))), "{name}");
    }
}

#[test]
fn every_catalog_biplane_is_self_dual() {
    for e in list_known().into_iter().filter(|e| e.constructible) {
        let d = build(e.name).unwrap();
        let t = dual(&d).unwrap();
        assert!(verify_symmetric_design(&t).ok);
        assert!(are_isomorphic(&d, &t).unwrap().is_some(), "{}", e.name);
    }
}

#[test]
fn quadratic_residue_development_is_the_hadamard_design() {
    let g = Arc::new(GroupTable::cyclic(11).unwrap());
    let d = develop(&DifferenceSet::new(g, &[1, 3, 4, 5, 9], 2).unwrap()).unwrap();
    assert!(are_isomorphic(&d, &build("hadamard11").unwrap()).unwrap().is_some());
}

#[test]
fn block_stabilizers() {
    // full groups are block-transitive, so the stabiliser has order |Aut|/v
    for (name, stab) in [
        ("fano_complement", 24u128),
        ("hadamard11", 60),
        ("biplane16_primitive", 720),
        ("biplane16_c2c8", 48),
        ("biplane16_q8c2", 24),
        ("biplane37_qr", 9),
    ] {
        let d = build(name).unwrap();
        let a = automorphism_group(&d).unwrap();
        let on_blocks = block_action(&d, &a.group).unwrap();
        assert!(on_blocks.is_transitive(), "{name}");
        assert_eq!(on_blocks.stabilizer(0).order(), stab, "{name}");
    }
    // the five generators: block-transitive on 16 blocks, so the block
    // stabiliser has order 1152 / 16
    let d = build("biplane16_primitive").unwrap();
    let g = block_action(&d, &example_group()).unwrap();
    assert!(g.is_transitive());
    assert_eq!(g.stabilizer(0).order(), 72);
}

#[test]
fn example_base_block_generates_the_primitive_biplane() {
    let d = build("biplane16_primitive").unwrap();
    assert!(d.block_index(&example_base_block()).is_some());
    assert_eq!(d.flag_count(), 96);
}

#[test]
fn order_sixteen_difference_sets() {
    let primitive = canonical_form(&build("biplane16_primitive").unwrap()).unwrap();
    let expect = [("c16", 0usize, 0usize), ("e16", 1, 1), ("c4xc4", 3, 1), ("c2xc8", 2, 2), ("q8xc2", 2, 2)];
    for (tag, classes, designs) in expect {
        let g = Arc::new(GroupTable::from_tag(tag).unwrap());
        let aut = g.automorphism_generators();
        let found = search_difference_sets(&g, 6, 2, Some(&aut), Exec::default()).unwrap();
        assert_eq!(found.len(), classes, "{tag}");
        let mut certs: Vec<_> = found.iter().map(|ds| canonical_form(&develop(ds).unwrap()).unwrap()).collect();
        if tag == "e16" || tag == "c4xc4" {
            assert!(certs.iter().all(|c| *c == primitive), "{tag}");
        }
        certs.sort_by(|a, b| a.hash.cmp(&b.hash));
        certs.dedup();
        assert_eq!(certs.len(), designs, "{tag}");
    }
}

#[test]
fn parallel_search_matches_sequential() {
    for tag in ["c2xc8", "q8xc2", "c11"] {
        let g = Arc::new(GroupTable::from_tag(tag).unwrap());
        let k = if g.order() == 11 { 5 } else { 6 };
        let run = |exec| {
            search_difference_sets(&g, k, 2, None, exec).unwrap().into_iter().map(|d| d.elements).collect::<Vec<_>>()
        };
        assert_eq!(run(Exec::Sequential), run(Exec::Parallel), "{tag}");
    }
}

#[test]
fn right_translations_act_regularly_on_developments() {
    for (tag, set) in [("c11", vec![1, 3, 4, 5, 9]), ("c37", vec![1, 7, 9, 10, 12, 16, 26, 33, 34])] {
        let g = Arc::new(GroupTable::from_tag(tag).unwrap());
        let d = develop(&DifferenceSet::new(g.clone(), &set, 2).unwrap()).unwrap();
        for x in 0..g.order() {
            let r = g.right_regular(x);
            assert!(d.is_automorphism(&r));
            assert_eq!(r.fixed_points().is_empty(), x != 0);
        }
    }
}
