//! The known small biplanes.
//!
//! Constructible entries are built from first principles: the Fano plane
//! complement from the nonzero vectors of `F_2^3`, the Hadamard design and
//! the transitive (37,9,2) biplane as developments of multiplicative
//! subgroups, the primitive (16,6,2) biplane as a block orbit under five
//! explicit generators, and the two imprimitive (16,6,2) biplanes by
//! exhaustive difference-set search.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::pow_mod;
use crate::aut::canonical_form;
use crate::cartdecomp::CartesianDecomposition;
use crate::design::{verify_symmetric_design, Design, DesignParams};
use crate::diffset::{develop, search_difference_sets, DifferenceSet, GroupTable};
use crate::io::decomposition_from_one_based;
use crate::par::Exec;
use crate::perm::PermGroup;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: DesignParams,
    pub recipe: &'static str,
    /// Number of biplanes with these parameters up to isomorphism.
    pub examples: &'static str,
    pub aut_order: Option<u128>,
    pub transitive: Option<bool>,
    pub flag_transitive: Option<bool>,
    pub primitive: Option<bool>,
    pub constructible: bool,
}

fn params(v: u64, k: u64) -> DesignParams {
    DesignParams::new(v, k, 2).expect("valid biplane parameters")
}

pub fn list_known() -> Vec<CatalogEntry> {
    let e =
        |name, v, k, recipe, examples, aut_order, transitive, flag_transitive, primitive, constructible| CatalogEntry {
            name,
            params: params(v, k),
            recipe,
            examples,
            aut_order,
            transitive,
            flag_transitive,
            primitive,
            constructible,
        };
    vec![
        e(
            "fano_complement",
            7,
            4,
            "complements of the lines of PG(2,2)",
            "1",
            Some(168),
            Some(true),
            Some(true),
            Some(true),
            true,
        ),
        e(
            "hadamard11",
            11,
            5,
            "development of the squares in C11",
            "1",
            Some(660),
            Some(true),
            Some(true),
            Some(true),
            true,
        ),
        e(
            "biplane16_primitive",
            16,
            6,
            "block orbit under five generators of S4 wr S2",
            "3",
            Some(11520),
            Some(true),
            Some(true),
            Some(true),
            true,
        ),
        e(
            "biplane16_c2c8",
            16,
            6,
            "difference set in C2 x C8",
            "3",
            Some(768),
            Some(true),
            Some(true),
            Some(false),
            true,
        ),
        e(
            "biplane16_q8c2",
            16,
            6,
            "difference set in Q8 x C2",
            "3",
            Some(384),
            Some(true),
            Some(false),
            Some(false),
            true,
        ),
        e(
            "biplane37_qr",
            37,
            9,
            "development of the fourth powers in C37",
            "4",
            Some(333),
            Some(true),
            Some(true),
            Some(true),
            true,
        ),
        e("biplane56", 56, 11, "no construction available", "5", None, None, None, None, false),
        e("biplane79", 79, 13, "no construction available", "≥2", None, None, None, None, false),
        e("biplane121", 121, 16, "no construction available", "Unknown", None, None, None, None, false),
    ]
}

/// Builds a constructible entry; the result always verifies.
pub fn build(name: &str) -> Result<Design> {
    let d = match name {
        "fano_complement" => fano_complement(),
        "hadamard11" => hadamard11()?,
        "biplane16_primitive" => biplane16_primitive()?,
        "biplane16_c2c8" => imprimitive16("c2xc8")?,
        "biplane16_q8c2" => imprimitive16("q8xc2")?,
        "biplane37_qr" => biplane37()?,
        _ => {
            return match list_known().into_iter().find(|e| e.name == name) {
                Some(e) => {
                    Err(Error::Unavailable(format!("{name} {}: no construction in the literature used here", e.params)))
                }
                None => Err(Error::input(format!("unknown catalog entry '{name}'"))),
            }
        }
    };
    let report = verify_symmetric_design(&d);
    if !report.ok {
        return Err(Error::pre(format!("{name} failed verification: {:?}", report.violations.first())));
    }
    Ok(d)
}

/// Points are the nonzero vectors of `F_2^3` (point `i` is the vector with
/// binary value `i + 1`); lines are the triples `{a, b, a + b}`.
fn fano_complement() -> Design {
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for a in 1..8usize {
        for b in a + 1..8 {
            let mut l = vec![a, b, a ^ b];
            l.sort_unstable();
            if !lines.contains(&l) {
                lines.push(l);
            }
        }
    }
    let blocks = lines.iter().map(|l| (1..8).filter(|p| !l.contains(p)).map(|p| p - 1).collect()).collect();
    Design::new(params(7, 4), blocks).expect("distinct complements")
}

/// The subgroup of index `index` in the multiplicative group mod a prime
/// `p`, as a subset of the additive group `C_p`.
fn power_residues(p: u64, index: u64) -> Vec<usize> {
    let mut s: Vec<usize> = (1..p).map(|x| pow_mod(x, index, p) as usize).collect();
    s.sort_unstable();
    s.dedup();
    s
}

fn hadamard11() -> Result<Design> {
    let g = Arc::new(GroupTable::cyclic(11)?);
    develop(&DifferenceSet::new(g, &power_residues(11, 2), 2)?)
}

/// The nine fourth powers mod 37, i.e. the subgroup of order 9.
fn biplane37() -> Result<Design> {
    let g = Arc::new(GroupTable::cyclic(37)?);
    let d = power_residues(37, 4);
    debug_assert_eq!(d.len(), 9);
    develop(&DifferenceSet::new(g, &d, 2)?)
}

const EXAMPLE_GENERATORS: [&str; 5] = [
    "(2,4,3)(5,13,9)(6,16,11)(7,14,12)(8,15,10)",
    "(2,6,5)(3,11,9)(4,16,13)(7,12,14)(8,15,10)",
    "(2,6)(3,11)(4,16)(7,15)(8,12)(10,14)",
    "(3,5)(4,6)(11,13)(12,14)",
    "(1,2)(3,4)(5,6)(7,8)(9,10)(11,12)(13,14)(15,16)",
];

/// The group `<alpha_1, ..., alpha_5>` on 16 points.
pub fn example_group() -> PermGroup {
    PermGroup::from_cycle_strings(16, &EXAMPLE_GENERATORS).expect("valid generators")
}

/// The homogeneous cartesian decomposition preserved by [`example_group`].
pub fn example_decomposition() -> CartesianDecomposition {
    CartesianDecomposition::new(
        decomposition_from_one_based(vec![
            vec![vec![1, 8, 10, 15], vec![2, 7, 9, 16], vec![3, 6, 12, 13], vec![4, 5, 11, 14]],
            vec![vec![1, 7, 12, 14], vec![2, 8, 11, 13], vec![3, 5, 10, 16], vec![4, 6, 9, 15]],
        ])
        .expect("1-based data"),
    )
}

/// The orbit of `base`, abandoned once it exceeds `cap` sets.
fn block_orbit(g: &PermGroup, base: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut blocks = vec![base.to_vec()];
    let mut i = 0;
    while i < blocks.len() && blocks.len() <= cap {
        for x in g.generators() {
            let mut img: Vec<usize> = blocks[i].iter().map(|&p| x.apply(p)).collect();
            img.sort_unstable();
            if !blocks.contains(&img) {
                blocks.push(img);
            }
        }
        i += 1;
    }
    blocks
}

/// The base block of the primitive example: the lexicographically least
/// 6-set through point 1 whose orbit under [`example_group`] is a (16,6,2)
/// design. (The 6-set {1,2,3,5,9,16} has an orbit of 144 sets, so it cannot
/// serve; the group leaves exactly one biplane invariant.)
pub fn example_base_block() -> Vec<usize> {
    let g = example_group();
    let mut rest = [1usize, 2, 3, 4, 5];
    loop {
        let base: Vec<usize> = std::iter::once(0).chain(rest.iter().copied()).collect();
        let orbit = block_orbit(&g, &base, 16);
        if orbit.len() == 16 {
            if let Ok(d) = Design::new(params(16, 6), orbit) {
                if verify_symmetric_design(&d).ok {
                    return base;
                }
            }
        }
        // next 5-subset of 1..16 in lexicographic order
        let mut i = 4;
        while rest[i] == 11 + i {
            i -= 1;
        }
        rest[i] += 1;
        for j in i + 1..5 {
            rest[j] = rest[j - 1] + 1;
        }
    }
}

fn biplane16_primitive() -> Result<Design> {
    Design::new(params(16, 6), block_orbit(&example_group(), &example_base_block(), 16))
}

/// The difference sets of the given group of order 16, up to translation
/// and group automorphisms, whose developments are not isomorphic to the
/// primitive biplane. Exactly one such class is expected.
fn imprimitive16(tag: &str) -> Result<Design> {
    let g = Arc::new(GroupTable::from_tag(tag)?);
    let aut = g.automorphism_generators();
    let primitive = canonical_form(&biplane16_primitive()?)?;
    let mut found = Vec::new();
    for ds in search_difference_sets(&g, 6, 2, Some(&aut), Exec::default())? {
        let d = develop(&ds)?;
        if canonical_form(&d)? != primitive {
            found.push(d);
        }
    }
    let mut it = found.into_iter();
    match (it.next(), it.next()) {
        (Some(d), None) => Ok(d),
        (None, _) => Err(Error::pre(format!("no difference set in {tag} beyond the primitive biplane"))),
        (Some(_), Some(_)) => Err(Error::pre(format!("several non-primitive developments in {tag}"))),
    }
}
