//! Cartesian decompositions of a point set, their preservation by groups,
//! the coordinate-pair count on blocks, and the Pell/PSp4 arithmetic that
//! rules out almost-simple groups preserving a decomposition.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, isqrt, prime_power};
use crate::design::{params_from_k, Design};
use crate::perm::PermGroup;
use crate::{Error, Result};

/// A list of partitions of `0..v`; part indices are positions in the lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartesianDecomposition {
    pub partitions: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartesianReport {
    pub ok: bool,
    pub homogeneous: bool,
    pub d: usize,
    pub part_counts: Vec<usize>,
    pub reason: Option<String>,
}

impl CartesianDecomposition {
    pub fn new(partitions: Vec<Vec<Vec<usize>>>) -> Self {
        CartesianDecomposition { partitions }
    }

    pub fn d(&self) -> usize {
        self.partitions.len()
    }

    /// `part_of[i][p]`: index of the part of partition `i` containing `p`.
    fn part_of(&self, v: usize) -> Result<Vec<Vec<usize>>> {
        if self.partitions.is_empty() {
            return Err(Error::input("a decomposition needs at least one partition"));
        }
        self.partitions
            .iter()
            .enumerate()
            .map(|(i, gamma)| {
                let mut of = vec![usize::MAX; v];
                for (j, part) in gamma.iter().enumerate() {
                    if part.is_empty() {
                        return Err(Error::input(format!("partition {} has an empty part", i + 1)));
                    }
                    for &p in part {
                        if p >= v {
                            return Err(Error::input(format!("point {} outside 1..={v}", p + 1)));
                        }
                        if of[p] != usize::MAX {
                            return Err(Error::input(format!("point {} repeated in partition {}", p + 1, i + 1)));
                        }
                        of[p] = j;
                    }
                }
                if let Some(p) = of.iter().position(|&j| j == usize::MAX) {
                    return Err(Error::input(format!("partition {} misses point {}", i + 1, p + 1)));
                }
                Ok(of)
            })
            .collect()
    }
}

/// Checks that every choice of one part per partition meets in exactly one
/// point, i.e. that the coordinate map is a bijection onto the product.
pub fn verify_cartesian(cd: &CartesianDecomposition, v: usize) -> Result<CartesianReport> {
    let part_of = cd.part_of(v)?;
    let part_counts: Vec<usize> = cd.partitions.iter().map(Vec::len).collect();
    let homogeneous = part_counts.windows(2).all(|w| w[0] == w[1]);
    let report = |ok: bool, reason: Option<String>| CartesianReport {
        ok,
        homogeneous,
        d: cd.d(),
        part_counts: part_counts.clone(),
        reason,
    };
    if let Some(i) = part_counts.iter().position(|&c| c < 2) {
        return Ok(report(false, Some(format!("partition {} has fewer than two parts", i + 1))));
    }
    let product = part_counts.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c));
    if product != Some(v) {
        return Ok(report(false, Some(format!("product of part counts {part_counts:?} is not {v}"))));
    }
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::with_capacity(v);
    for p in 0..v {
        let t: Vec<usize> = part_of.iter().map(|of| of[p]).collect();
        if let Some(q) = seen.insert(t, p) {
            return Ok(report(false, Some(format!("points {} and {} share every part", q + 1, p + 1))));
        }
    }
    Ok(report(true, None))
}

/// Point to coordinate-tuple bijection of a verified decomposition.
#[derive(Clone, Debug)]
pub struct Coordinates {
    pub tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Coordinates {
    pub fn point(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }
}

pub fn coordinatize(cd: &CartesianDecomposition, v: usize) -> Result<Coordinates> {
    let report = verify_cartesian(cd, v)?;
    if !report.ok {
        return Err(Error::pre(format!("not a cartesian decomposition: {}", report.reason.unwrap_or_default())));
    }
    let part_of = cd.part_of(v)?;
    let tuples: Vec<Vec<usize>> = (0..v).map(|p| part_of.iter().map(|of| of[p]).collect()).collect();
    let index = tuples.iter().cloned().enumerate().map(|(p, t)| (t, p)).collect();
    Ok(Coordinates { tuples, index })
}

/// Whether every generator maps each partition onto a partition of the
/// decomposition. With `strict` each partition must be mapped to itself.
pub fn preserved_by(cd: &CartesianDecomposition, g: &PermGroup, strict: bool) -> Result<bool> {
    let mut where_is: HashMap<Vec<usize>, usize> = HashMap::new();
    for (i, gamma) in cd.partitions.iter().enumerate() {
        for part in gamma {
            let mut s = part.clone();
            s.sort_unstable();
            where_is.insert(s, i);
        }
    }
    if cd.partitions.iter().flatten().flatten().any(|&p| p >= g.degree()) {
        return Err(Error::input("decomposition and group degree differ"));
    }
    for x in g.generators() {
        for (i, gamma) in cd.partitions.iter().enumerate() {
            let mut target = None;
            for part in gamma {
                let mut img: Vec<usize> = part.iter().map(|&p| x.apply(p)).collect();
                img.sort_unstable();
                match where_is.get(&img) {
                    None => return Ok(false),
                    Some(&j) if strict && j != i => return Ok(false),
                    Some(&j) => {
                        if *target.get_or_insert(j) != j {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPairReport {
    pub c: usize,
    /// Per block: unordered pairs of its points sharing a coordinate.
    pub counts: Vec<usize>,
    /// `2(c-1)`.
    pub expected: usize,
    pub total: usize,
    /// `2c^2(c-1)`.
    pub expected_total: usize,
    /// Blocks whose count exceeds `2(c-1)` (0-based).
    pub exceeding: Vec<usize>,
}

impl BlockPairReport {
    pub fn all_expected(&self) -> bool {
        self.counts.iter().all(|&n| n == self.expected)
    }
}

/// For a homogeneous two-partition decomposition of `c^2` points, counts
/// the pairs of points in each block sharing their first or second
/// coordinate.
pub fn block_coordinate_pairs(d: &Design, cd: &CartesianDecomposition) -> Result<BlockPairReport> {
    if cd.d() != 2 {
        return Err(Error::input(format!("need exactly 2 partitions, got {}", cd.d())));
    }
    let coords = coordinatize(cd, d.v())?;
    let c = cd.partitions[0].len();
    if cd.partitions[1].len() != c || c * c != d.v() {
        return Err(Error::pre("decomposition is not homogeneous on c^2 points"));
    }
    let counts: Vec<usize> = d
        .blocks()
        .iter()
        .map(|b| {
            let mut n = 0;
            for (i, &p) in b.iter().enumerate() {
                for &q in &b[i + 1..] {
                    let (tp, tq) = (&coords.tuples[p], &coords.tuples[q]);
                    if tp[0] == tq[0] || tp[1] == tq[1] {
                        n += 1;
                    }
                }
            }
            n
        })
        .collect();
    let expected = 2 * (c - 1);
    Ok(BlockPairReport {
        c,
        total: counts.iter().sum(),
        expected_total: 2 * c * c * (c - 1),
        exceeding: counts.iter().enumerate().filter(|(_, &n)| n > expected).map(|(i, _)| i).collect(),
        counts,
        expected,
    })
}

/// A positive solution of `8x^2 - y^2 = 7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellSolution {
    pub n: u32,
    pub family: u8,
    pub x: BigInt,
    pub y: BigInt,
    pub u: BigInt,
    pub v: BigInt,
}

impl PellSolution {
    pub fn satisfies(&self) -> bool {
        BigInt::from(8) * &self.x * &self.x - &self.y * &self.y == BigInt::from(7)
    }
}

/// The pairs `(u_n, v_n)` for `n = 0..=n_max` from `(1, 0)` via
/// `u' = 3u + 8v`, `v' = u + 3v`.
pub fn pell_units(n_max: u32) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let (mut u, mut v) = (BigInt::one(), BigInt::zero());
    for _ in 0..=n_max {
        out.push((u.clone(), v.clone()));
        let nu = BigInt::from(3) * &u + BigInt::from(8) * &v;
        let nv = &u + BigInt::from(3) * &v;
        (u, v) = (nu, nv);
    }
    out
}

/// Both solution families for `n <= n_max`: `(u+v, u+8v)` and
/// `(u-v, -u+8v)`. Only positive pairs are kept, duplicates removed, and
/// the result is sorted by `x`.
pub fn pell_solutions(n_max: u32) -> Vec<PellSolution> {
    let mut out: Vec<PellSolution> = Vec::new();
    for (n, (u, v)) in pell_units(n_max).into_iter().enumerate() {
        let fams = [(1u8, &u + &v, &u + BigInt::from(8) * &v), (2u8, &u - &v, -&u + BigInt::from(8) * &v)];
        for (family, x, y) in fams {
            if x.is_positive() && y.is_positive() && !out.iter().any(|s| s.x == x && s.y == y) {
                out.push(PellSolution { n: n as u32, family, x, y, u: u.clone(), v: v.clone() });
            }
        }
    }
    out.sort_by(|a, b| a.x.cmp(&b.x));
    out
}

/// All solutions with `x <= x_max`.
pub fn pell_solutions_up_to(x_max: u64) -> Vec<PellSolution> {
    let bound = BigInt::from(x_max);
    let mut n = 1;
    // x at least doubles from one index to the next, so this terminates
    while pell_solutions(n).iter().all(|s| s.x <= bound) {
        n += 1;
    }
    pell_solutions(n).into_iter().filter(|s| s.x <= bound).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Psp4Report {
    pub q: u64,
    pub c: u128,
    pub eight_c2_minus_7: u128,
    pub is_square: bool,
    pub c_mod_3: u8,
    /// Every Pell `x` up to `c` is `+-1 mod 3`, so none equals `c`.
    pub pell_residues_nonzero: bool,
    pub excluded: bool,
}

/// The degree `c^2` with `c = q^2(q^2-1)/2` cannot carry a biplane: `8c^2-7`
/// is not a square, and independently `3 | c` whereas Pell `x` values are
/// `+-1 mod 3`.
pub fn psp4_degree_excluded(q: u64) -> Result<Psp4Report> {
    match prime_power(q) {
        Some((2, e)) if e >= 2 => {}
        _ => return Err(Error::input(format!("q must be a power of 2 with q >= 4, got {q}"))),
    }
    let overflow = || Error::Overflow(format!("c^2 for q = {q}"));
    let q2 = (q as u128).checked_mul(q as u128).ok_or_else(overflow)?;
    let c = q2.checked_mul(q2 - 1).ok_or_else(overflow)? / 2;
    let e = c.checked_mul(c).and_then(|x| x.checked_mul(8)).ok_or_else(overflow)? - 7;
    let is_square = exact_sqrt(e).is_some();
    let c_mod_3 = (c % 3) as u8;
    let pell_residues_nonzero = c <= u64::MAX as u128
        && pell_solutions_up_to(c as u64).iter().all(|s| {
            let r = (&s.x % BigInt::from(3)).to_string();
            r == "1" || r == "2"
        });
    Ok(Psp4Report {
        q,
        c,
        eight_c2_minus_7: e,
        is_square,
        c_mod_3,
        pell_residues_nonzero,
        excluded: !is_square && c_mod_3 == 0 && pell_residues_nonzero,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SporadicBranch {
    pub socle: String,
    pub c: u64,
    /// `ceil(sqrt(2) c)`.
    pub k: u64,
    /// `(k^2 - k + 2)/2`.
    pub v_from_k: u64,
    /// `c^2`.
    pub v_required: u64,
    pub excluded: bool,
}

/// The A6 (`c = 6`) and M12 (`c = 12`) branches: the block size forced by
/// `c` gives a point count different from `c^2`.
pub fn sporadic_branches() -> Vec<SporadicBranch> {
    [("A6", 6u64), ("M12", 12)]
        .into_iter()
        .map(|(socle, c)| {
            let two_c2 = 2 * (c as u128) * (c as u128);
            let k = (isqrt(two_c2 - 1) + 1) as u64;
            let v_from_k = params_from_k(k).expect("k >= 3").v;
            SporadicBranch { socle: socle.into(), c, k, v_from_k, v_required: c * c, excluded: v_from_k != c * c }
        })
        .collect()
}
