//! Incidence structures and symmetric-design parameter arithmetic.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, is_square, isqrt, ternary_form_solvable};
use crate::par::{self, Exec};
use crate::perm::Perm;
use crate::{Error, Result};

/// Parameters `(v, k, lambda)` of a 2-design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DesignParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

impl DesignParams {
    pub fn new(v: u64, k: u64, lambda: u64) -> Result<Self> {
        if !(2 <= k && k < v) {
            return Err(Error::input(format!("parameters require 2 <= k < v, got v={v} k={k}")));
        }
        if lambda == 0 {
            return Err(Error::input("lambda must be positive"));
        }
        Ok(DesignParams { v, k, lambda })
    }

    /// `k(k-1) = lambda(v-1)`, the counting identity of a symmetric design.
    pub fn is_symmetric_feasible(&self) -> bool {
        (self.k as u128) * (self.k as u128 - 1) == (self.lambda as u128) * (self.v as u128 - 1)
    }

    pub fn order(&self) -> u64 {
        self.k - self.lambda
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.v, self.k, self.lambda)
    }
}

/// Biplane parameters with block size `k`: `v = (k^2 - k + 2) / 2`.
pub fn params_from_k(k: u64) -> Result<DesignParams> {
    if k < 3 {
        return Err(Error::input(format!("biplanes need k >= 3, got {k}")));
    }
    let kk = k.checked_mul(k - 1).ok_or_else(|| Error::Overflow(format!("k(k-1) for k={k}")))?;
    let v = kk / 2 + 1;
    DesignParams::new(v, k, 2)
}

/// The block size of a biplane on `c^d` points, if one is arithmetically
/// possible: `k = ceil(sqrt(2 c^d))` and `k(k-1) = 2(c^d - 1)` must hold.
pub fn k_for_point_power(c: u64, d: u32) -> Result<Option<u64>> {
    if c < 2 || d < 2 {
        return Err(Error::input(format!("need c >= 2 and d >= 2, got c={c} d={d}")));
    }
    let v = (c as u128).checked_pow(d).ok_or_else(|| Error::Overflow(format!("{c}^{d}")))?;
    let two_v = v.checked_mul(2).filter(|x| *x < u128::MAX / 4).ok_or_else(|| Error::Overflow(format!("2*{c}^{d}")))?;
    // ceil(sqrt(2v)) without floating point
    let k = isqrt(two_v - 1) + 1;
    Ok((k * (k - 1) == two_v - 2).then_some(k as u64))
}

fn check_brc_input(p: &DesignParams) -> Result<()> {
    if !p.is_symmetric_feasible() {
        return Err(Error::pre(format!("{p} is not symmetric-feasible")));
    }
    Ok(())
}

/// Bruck–Ryser–Chowla test via exact Hilbert symbols.
pub fn brc_feasible(p: &DesignParams) -> Result<bool> {
    check_brc_input(p)?;
    let n = p.order() as i128;
    if p.v.is_multiple_of(2) {
        return Ok(is_square(n));
    }
    let sign: i128 = if ((p.v - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    Ok(ternary_form_solvable(n, sign * p.lambda as i128))
}

/// The default search radius `4 (k - lambda) lambda v` for
/// [`brc_feasible_by_search`].
pub fn brc_search_bound(p: &DesignParams) -> u64 {
    4 * p.order() * p.lambda * p.v
}

/// Bruck–Ryser–Chowla by bounded search: for odd `v`, looks for
/// `z^2 = (k-lambda) x^2 + (-1)^((v-1)/2) lambda y^2` with `(x, y) != 0` and
/// `|x|, |y| <= bound`; for even `v`, looks for `m <= bound` with
/// `m^2 = k - lambda`.
pub fn brc_feasible_by_search(p: &DesignParams, bound: u64, exec: Exec) -> Result<bool> {
    check_brc_input(p)?;
    let n = p.order() as i128;
    if p.v.is_multiple_of(2) {
        return Ok((0..=bound as i128).any(|m| m * m == n));
    }
    let b: i128 = if ((p.v - 1) / 2).is_multiple_of(2) { p.lambda as i128 } else { -(p.lambda as i128) };
    let found = !par::all_range(exec, bound as usize + 1, |x| {
        let x = x as i128;
        let ax2 = n * x * x;
        let y_start = if x == 0 { 1 } else { 0 };
        !(y_start..=bound as i128).any(|y| {
            let r = ax2 + b * y * y;
            r >= 0 && exact_sqrt(r as u128).is_some()
        })
    });
    Ok(found)
}

/// One reason a structure fails to be a symmetric design. Ids are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    BlockSize { block: usize, observed: usize, expected: usize },
    BlockCount { observed: usize, expected: usize },
    PairCount { pair: (usize, usize), observed: usize, expected: usize },
    BlockIntersection { blocks: (usize, usize), observed: usize, expected: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// A finite incidence structure on points `0..v` with blocks stored as
/// sorted point lists.
#[derive(Clone, Debug)]
pub struct Design {
    params: DesignParams,
    blocks: Vec<Vec<usize>>,
    incidence: Vec<bool>,
    index: HashMap<Vec<usize>, usize>,
}

impl PartialEq for Design {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.blocks == other.blocks
    }
}

impl Eq for Design {}

impl Design {
    /// Builds a design from 0-based blocks. Rejects out-of-range points,
    /// repeated points within a block and repeated blocks; block sizes and
    /// counts are checked later by [`verify_symmetric_design`].
    pub fn new(params: DesignParams, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let v = params.v as usize;
        let mut sorted = Vec::with_capacity(blocks.len());
        for (i, mut b) in blocks.into_iter().enumerate() {
            b.sort_unstable();
            if let Some(&p) = b.iter().find(|&&p| p >= v) {
                return Err(Error::input(format!("block {} contains point {} outside 1..={v}", i + 1, p + 1)));
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("block {} repeats a point", i + 1)));
            }
            sorted.push(b);
        }
        let mut index = HashMap::with_capacity(sorted.len());
        for (i, b) in sorted.iter().enumerate() {
            if let Some(j) = index.insert(b.clone(), i) {
                return Err(Error::input(format!("blocks {} and {} coincide", j + 1, i + 1)));
            }
        }
        let mut incidence = vec![false; sorted.len() * v];
        for (i, b) in sorted.iter().enumerate() {
            for &p in b {
                incidence[i * v + p] = true;
            }
        }
        Ok(Design { params, blocks: sorted, incidence, index })
    }

    pub fn params(&self) -> DesignParams {
        self.params
    }

    pub fn v(&self) -> usize {
        self.params.v as usize
    }

    pub fn k(&self) -> usize {
        self.params.k as usize
    }

    pub fn lambda(&self) -> usize {
        self.params.lambda as usize
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    #[inline]
    pub fn incident(&self, point: usize, block: usize) -> bool {
        self.incidence[block * self.v() + point]
    }

    /// Index of the block with exactly these (sorted) points.
    pub fn block_index(&self, points: &[usize]) -> Option<usize> {
        self.index.get(points).copied()
    }

    /// Blocks through `point`, ascending.
    pub fn blocks_on(&self, point: usize) -> Vec<usize> {
        (0..self.num_blocks()).filter(|&b| self.incident(point, b)).collect()
    }

    /// The permutation of blocks induced by a point permutation, or the
    /// index of a block whose image is not a block.
    pub fn induced_block_perm(&self, x: &Perm) -> std::result::Result<Perm, usize> {
        let mut images = Vec::with_capacity(self.num_blocks());
        for (i, b) in self.blocks.iter().enumerate() {
            let mut img: Vec<usize> = b.iter().map(|&p| x.apply(p)).collect();
            img.sort_unstable();
            images.push(self.block_index(&img).ok_or(i)?);
        }
        Ok(Perm::from_images(images).expect("distinct blocks map to distinct blocks"))
    }

    pub fn is_automorphism(&self, x: &Perm) -> bool {
        x.degree() == self.v() && self.induced_block_perm(x).is_ok()
    }

    /// The image design `x(D)`: block `i` becomes `x(B_i)`.
    pub fn relabel(&self, x: &Perm) -> Design {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&p| x.apply(p)).collect()).collect();
        Design::new(self.params, blocks).expect("relabelling preserves validity")
    }

    /// Blocks in lexicographic order, the serialisation order.
    pub fn sorted_blocks(&self) -> Vec<Vec<usize>> {
        let mut b = self.blocks.clone();
        b.sort();
        b
    }

    pub fn flag_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// Checks block sizes, block count, pair multiplicities and pairwise block
/// intersections.
pub fn verify_symmetric_design(d: &Design) -> VerifyReport {
    let v = d.v();
    let k = d.k();
    let lambda = d.lambda();
    let mut violations = Vec::new();
    if d.num_blocks() != v {
        violations.push(Violation::BlockCount { observed: d.num_blocks(), expected: v });
    }
    for (i, b) in d.blocks().iter().enumerate() {
        if b.len() != k {
            violations.push(Violation::BlockSize { block: i + 1, observed: b.len(), expected: k });
        }
    }
    let mut pairs = vec![0usize; v * v];
    for b in d.blocks() {
        for (i, &p) in b.iter().enumerate() {
            for &q in &b[i + 1..] {
                pairs[p * v + q] += 1;
            }
        }
    }
    for p in 0..v {
        for q in p + 1..v {
            let c = pairs[p * v + q];
            if c != lambda {
                violations.push(Violation::PairCount { pair: (p + 1, q + 1), observed: c, expected: lambda });
            }
        }
    }
    let nb = d.num_blocks();
    for i in 0..nb {
        for j in i + 1..nb {
            let c = d.block(i).iter().filter(|&&p| d.incident(p, j)).count();
            if c != lambda {
                violations.push(Violation::BlockIntersection { blocks: (i + 1, j + 1), observed: c, expected: lambda });
            }
        }
    }
    VerifyReport { ok: violations.is_empty(), violations }
}

/// Point `i` of the dual is block `i`; block `a` of the dual is the set of
/// blocks through point `a`.
pub fn dual(d: &Design) -> Result<Design> {
    if !verify_symmetric_design(d).ok {
        return Err(Error::pre("dual requires a verified symmetric design"));
    }
    let blocks = (0..d.v()).map(|a| d.blocks_on(a)).collect();
    Design::new(d.params(), blocks)
}

/// Result of restricting a design to a point set and a block subset.
///
/// The restricted blocks may repeat (two blocks can meet the point set in
/// the same points), so they are kept as a plain list rather than a
/// [`Design`].
#[derive(Clone, Debug)]
pub struct Subdesign {
    pub params: DesignParams,
    /// Restricted blocks on `0..|points|`, points relabelled in ascending
    /// order of `points`.
    pub blocks: Vec<Vec<usize>>,
    pub points: Vec<usize>,
    pub block_ids: Vec<usize>,
    pub k_prime: usize,
    pub proper: bool,
    /// For proper subdesigns: whether `(k'-1)^2 = k - lambda` or
    /// `k'(k'-1) <= k - lambda`.
    pub size_constraint: Option<bool>,
}

impl Subdesign {
    /// The restriction as a [`Design`]; fails when blocks repeat.
    pub fn to_design(&self) -> Result<Design> {
        Design::new(self.params, self.blocks.clone())
    }
}

/// Restricts `d` to `points` and the blocks `block_ids`; `None` unless every
/// chosen block meets `points` in the same number of points and every pair
/// of chosen points lies in exactly `lambda` chosen blocks.
pub fn restrict_subdesign(d: &Design, points: &[usize], block_ids: &[usize]) -> Result<Option<Subdesign>> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    let mut bids = block_ids.to_vec();
    bids.sort_unstable();
    bids.dedup();
    if let Some(&p) = pts.iter().find(|&&p| p >= d.v()) {
        return Err(Error::input(format!("point {} out of range", p + 1)));
    }
    if let Some(&b) = bids.iter().find(|&&b| b >= d.num_blocks()) {
        return Err(Error::input(format!("block {} out of range", b + 1)));
    }
    let mut relabel = vec![usize::MAX; d.v()];
    for (i, &p) in pts.iter().enumerate() {
        relabel[p] = i;
    }
    let restricted: Vec<Vec<usize>> = bids
        .iter()
        .map(|&b| d.block(b).iter().filter(|&&p| relabel[p] != usize::MAX).map(|&p| relabel[p]).collect())
        .collect();
    let k_prime = match restricted.first() {
        Some(b) => b.len(),
        None => return Ok(None),
    };
    if restricted.iter().any(|b| b.len() != k_prime) {
        return Ok(None);
    }
    let n = pts.len();
    let mut pair = vec![0usize; n * n];
    for b in &restricted {
        for (i, &p) in b.iter().enumerate() {
            for &q in &b[i + 1..] {
                pair[p * n + q] += 1;
            }
        }
    }
    let lambda = d.lambda();
    if (0..n).any(|p| (p + 1..n).any(|q| pair[p * n + q] != lambda)) {
        return Ok(None);
    }
    let params = DesignParams { v: n as u64, k: k_prime as u64, lambda: d.params().lambda };
    let proper = n != d.v();
    let size_constraint = proper.then(|| {
        let kp = k_prime as i128;
        let order = (d.k() - lambda) as i128;
        (kp - 1) * (kp - 1) == order || kp * (kp - 1) <= order
    });
    Ok(Some(Subdesign { params, blocks: restricted, points: pts, block_ids: bids, k_prime, proper, size_constraint }))
}
