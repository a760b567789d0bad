//! Group tables, difference sets and their developments.
//!
//! Group elements are `0..n` with `0` the identity. A `k`-subset `D` is a
//! `(n, k, lambda)` difference set when the quotients `x^-1 y` (`x != y` in
//! `D`) cover every non-identity element exactly `lambda` times; its
//! development has the right translates `Dx` as blocks.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::arith::{binomial, divisors, factorize, mult_order, pow_mod, squarefree_part};
use crate::design::{verify_symmetric_design, Design, DesignParams};
use crate::par::{self, Exec};
use crate::perm::{Perm, PermGroup};
use crate::{Error, Result};

/// Largest group order accepted for an explicit table.
pub const MAX_GROUP_ORDER: usize = 121;

/// Largest `C(n, k)` the exhaustive search will attempt.
pub const SEARCH_CAP: u128 = 100_000_000;

/// Multiplication table of a finite group.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    name: String,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupTable({}, n={})", self.name, self.n)
    }
}

impl GroupTable {
    /// Validates a row-major table: `0` is the identity, rows and columns
    /// are permutations and the product is associative (checked exhaustively).
    pub fn from_table(name: impl Into<String>, n: usize, mul: Vec<u32>) -> Result<Self> {
        let name = name.into();
        if n == 0 || n > MAX_GROUP_ORDER {
            return Err(Error::input(format!("group order {n} outside 1..={MAX_GROUP_ORDER}")));
        }
        if mul.len() != n * n || mul.iter().any(|&x| x as usize >= n) {
            return Err(Error::input(format!("{name}: malformed table")));
        }
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        if (0..n).any(|a| at(0, a) != a || at(a, 0) != a) {
            return Err(Error::input(format!("{name}: 0 is not the identity")));
        }
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[at(a, b)] = true;
                col[at(b, a)] = true;
            }
            if row.contains(&false) || col.contains(&false) {
                return Err(Error::input(format!("{name}: not a latin square")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::input(format!("{name}: not associative")));
                    }
                }
            }
        }
        let inv = (0..n).map(|a| (0..n).find(|&b| at(a, b) == 0).unwrap() as u32).collect();
        Ok(GroupTable { n, mul, inv, name })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        let mul = (0..n * n).map(|i| ((i / n + i % n) % n.max(1)) as u32).collect();
        Self::from_table(format!("c{n}"), n, mul)
    }

    /// Direct product; `(x, y)` is stored as `x * |b| + y`.
    pub fn product(a: &GroupTable, b: &GroupTable) -> Result<Self> {
        let n = a.n * b.n;
        if n > MAX_GROUP_ORDER {
            return Err(Error::input(format!("group order {n} exceeds {MAX_GROUP_ORDER}")));
        }
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let (x1, x2) = (x / b.n, x % b.n);
                let (y1, y2) = (y / b.n, y % b.n);
                mul[x * n + y] = (a.mul(x1, y1) * b.n + b.mul(x2, y2)) as u32;
            }
        }
        Self::from_table(format!("{}x{}", a.name, b.name), n, mul)
    }

    /// The quaternion group `{1, -1, i, -i, j, -j, k, -k}` in that order.
    pub fn quaternion8() -> Self {
        // unit products: (unit, sign) for 1, i, j, k
        const UNIT: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let mut mul = vec![0u32; 64];
        for x in 0..8 {
            for y in 0..8 {
                let (u, neg) = UNIT[x / 2][y / 2];
                let neg = neg ^ (x % 2 == 1) ^ (y % 2 == 1);
                mul[x * 8 + y] = (2 * u + neg as usize) as u32;
            }
        }
        Self::from_table("q8", 8, mul).expect("quaternion table is a group")
    }

    /// Elementary abelian group of order `2^rank` under XOR.
    pub fn elementary2(rank: u32) -> Result<Self> {
        let n = 1usize << rank;
        let mul = (0..n * n).map(|i| ((i / n) ^ (i % n)) as u32).collect();
        Self::from_table(format!("e{n}"), n, mul)
    }

    /// Parses a group tag: `cN`, `q8`, `eN` (N a power of 2), products joined
    /// by `x` such as `c2xc8` or `q8xc2`, and the alias `c121ab` for `c11xc11`.
    pub fn from_tag(tag: &str) -> Result<Self> {
        let tag = tag.trim().to_ascii_lowercase();
        if tag == "c121ab" {
            let c11 = Self::cyclic(11)?;
            let mut g = Self::product(&c11, &c11)?;
            g.name = tag;
            return Ok(g);
        }
        let mut out: Option<GroupTable> = None;
        for factor in tag.split('x') {
            let g = parse_factor(factor).ok_or_else(|| Error::input(format!("unknown group tag '{tag}'")))??;
            out = Some(match out {
                None => g,
                Some(acc) => Self::product(&acc, &g)?,
            });
        }
        let mut g = out.ok_or_else(|| Error::input("empty group tag"))?;
        g.name = tag;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Right multiplication `p -> p g` as a permutation of the elements.
    pub fn right_regular(&self, g: usize) -> Perm {
        Perm::from_images((0..self.n).map(|p| self.mul(p, g)).collect()).expect("rows of a group table")
    }

    /// A generating set chosen greedily in element order.
    fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = vec![false; self.n];
        sub[0] = true;
        for a in 1..self.n {
            if sub[a] {
                continue;
            }
            gens.push(a);
            // close under right multiplication by the generators
            let mut stack: Vec<usize> = (0..self.n).filter(|&x| sub[x]).collect();
            while let Some(x) = stack.pop() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !sub[y] {
                        sub[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        gens
    }

    /// A generating set for the automorphism group, found by exhaustive
    /// search over images of a generating set and thinned with a stabiliser
    /// chain, as permutations of the elements.
    pub fn automorphism_generators(&self) -> Vec<Perm> {
        let gens = self.generating_set();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let candidates: Vec<Vec<usize>> =
            orders.iter().map(|&o| (1..self.n).filter(|&a| self.element_order(a) == o).collect()).collect();
        let mut kept: Vec<Perm> = Vec::new();
        let mut group = PermGroup::trivial(self.n);
        let mut choice = vec![0usize; gens.len()];
        'outer: loop {
            let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cs)| cs[c]).collect();
            if let Some(map) = self.extend_hom(&gens, &images) {
                let p = Perm::from_images(map).expect("bijection");
                if !group.contains(&p) {
                    kept.push(p);
                    group = PermGroup::new(self.n, kept.clone()).expect("same degree");
                }
            }
            for i in (0..choice.len()).rev() {
                choice[i] += 1;
                if choice[i] < candidates[i].len() {
                    continue 'outer;
                }
                choice[i] = 0;
            }
            break;
        }
        kept
    }

    /// The automorphism sending `gens[i]` to `images[i]`, if one exists.
    fn extend_hom(&self, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.n];
        map[0] = 0;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = self.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    stack.push(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let mut hit = vec![false; self.n];
        for &m in &map {
            if m == usize::MAX || std::mem::replace(&mut hit[m], true) {
                return None;
            }
        }
        Some(map)
    }
}

fn parse_factor(f: &str) -> Option<Result<GroupTable>> {
    if f == "q8" {
        return Some(Ok(GroupTable::quaternion8()));
    }
    let (kind, num) = f.split_at(1.min(f.len()));
    let n: usize = num.parse().ok()?;
    match kind {
        "c" if n >= 1 => Some(GroupTable::cyclic(n)),
        "e" if n >= 2 && n.is_power_of_two() => Some(GroupTable::elementary2(n.trailing_zeros())),
        _ => None,
    }
}

/// A difference set together with its group.
#[derive(Clone, Debug)]
pub struct DifferenceSet {
    pub group: Arc<GroupTable>,
    /// Sorted elements.
    pub elements: Vec<usize>,
    pub params: DesignParams,
}

fn validate_subset(g: &GroupTable, d: &[usize]) -> Result<Vec<usize>> {
    let mut s = d.to_vec();
    s.sort_unstable();
    if let Some(&x) = s.iter().find(|&&x| x >= g.order()) {
        return Err(Error::input(format!("element {x} not in {}", g.name())));
    }
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::input("repeated element"));
    }
    if s.len() < 2 {
        return Err(Error::input("a difference set needs at least two elements"));
    }
    Ok(s)
}

/// Exact count of each quotient `x^-1 y` over distinct `x, y` in `d`.
pub fn difference_counts(g: &GroupTable, d: &[usize]) -> Vec<usize> {
    let mut counts = vec![0usize; g.order()];
    for &x in d {
        for &y in d {
            if x != y {
                counts[g.mul(g.inv(x), y)] += 1;
            }
        }
    }
    counts
}

pub fn is_difference_set(g: &GroupTable, d: &[usize], lambda: usize) -> Result<bool> {
    let d = validate_subset(g, d)?;
    Ok(difference_counts(g, &d)[1..].iter().all(|&c| c == lambda))
}

impl DifferenceSet {
    /// Wraps a verified difference set.
    pub fn new(group: Arc<GroupTable>, elements: &[usize], lambda: usize) -> Result<Self> {
        let elements = validate_subset(&group, elements)?;
        if !is_difference_set(&group, &elements, lambda)? {
            return Err(Error::pre(format!("not a difference set with lambda={lambda} in {}", group.name())));
        }
        let params = DesignParams::new(group.order() as u64, elements.len() as u64, lambda as u64)?;
        Ok(DifferenceSet { group, elements, params })
    }

    pub fn translate(&self, x: usize) -> Vec<usize> {
        let mut t: Vec<usize> = self.elements.iter().map(|&d| self.group.mul(d, x)).collect();
        t.sort_unstable();
        t
    }
}

/// The development: blocks `Dx` for every group element `x`. The right
/// regular action is checked to preserve the block set.
pub fn develop(ds: &DifferenceSet) -> Result<Design> {
    let g = &ds.group;
    let blocks = (0..g.order()).map(|x| ds.translate(x)).collect();
    let d = Design::new(ds.params, blocks)?;
    let report = verify_symmetric_design(&d);
    if !report.ok {
        return Err(Error::pre("development does not verify"));
    }
    for x in 0..g.order() {
        if !d.is_automorphism(&g.right_regular(x)) {
            return Err(Error::pre(format!("right multiplication by {x} is not an automorphism")));
        }
    }
    Ok(d)
}

/// All difference sets with the given parameters, one per class under
/// translation and, when `aut` is supplied, group automorphisms. Each class
/// is represented by its lexicographically least member; the output is
/// sorted.
pub fn search_difference_sets(
    g: &Arc<GroupTable>,
    k: usize,
    lambda: usize,
    aut: Option<&[Perm]>,
    exec: Exec,
) -> Result<Vec<DifferenceSet>> {
    let n = g.order();
    if k < 2 || k >= n || lambda == 0 {
        return Err(Error::input(format!("need 2 <= k < {n} and lambda > 0")));
    }
    let cap = binomial(n as u64, k as u64).unwrap_or(u128::MAX);
    if cap > SEARCH_CAP {
        return Err(Error::ScaleCap(format!("C({n},{k}) = {cap} exceeds {SEARCH_CAP}")));
    }
    if let Some(a) = aut {
        if a.iter().any(|p| p.degree() != n) {
            return Err(Error::input("automorphism degree does not match the group order"));
        }
    }
    if k * (k - 1) != lambda * (n - 1) {
        return Ok(Vec::new());
    }
    // every difference set has a translate containing the identity, so fix
    // 0 in D and split the search on the second element
    let seconds: Vec<usize> = (1..n).collect();
    let found: Vec<Vec<Vec<usize>>> = par::map_collect(exec, &seconds, |&s| {
        let mut counts = vec![0usize; n];
        let mut set = vec![0usize];
        let mut out = Vec::new();
        if push(g, &mut set, &mut counts, s, lambda) {
            extend(g, &mut set, &mut counts, s + 1, k, lambda, &mut out);
        }
        out
    });
    let mut all: Vec<Vec<usize>> = found.into_iter().flatten().collect();
    all.sort();

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut reps: BTreeSet<Vec<usize>> = BTreeSet::new();
    for d in all {
        if seen.contains(&d) {
            continue;
        }
        let orbit = class_of(g, &d, aut.unwrap_or(&[]));
        reps.insert(orbit.iter().min().unwrap().clone());
        seen.extend(orbit);
    }
    reps.into_iter().map(|d| DifferenceSet::new(Arc::clone(g), &d, lambda)).collect()
}

/// Adds `x` to `set`, updating quotient counts; undoes and returns false if
/// some count would exceed `lambda`.
fn push(g: &GroupTable, set: &mut Vec<usize>, counts: &mut [usize], x: usize, lambda: usize) -> bool {
    let mut ok = true;
    let mut touched = Vec::with_capacity(2 * set.len());
    for &y in set.iter() {
        for q in [g.mul(g.inv(x), y), g.mul(g.inv(y), x)] {
            counts[q] += 1;
            touched.push(q);
            ok &= counts[q] <= lambda;
        }
    }
    if ok {
        set.push(x);
    } else {
        for q in touched {
            counts[q] -= 1;
        }
    }
    ok
}

fn pop(g: &GroupTable, set: &mut Vec<usize>, counts: &mut [usize]) {
    let x = set.pop().unwrap();
    for &y in set.iter() {
        counts[g.mul(g.inv(x), y)] -= 1;
        counts[g.mul(g.inv(y), x)] -= 1;
    }
}

fn extend(
    g: &GroupTable,
    set: &mut Vec<usize>,
    counts: &mut [usize],
    from: usize,
    k: usize,
    lambda: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if set.len() == k {
        if counts[1..].iter().all(|&c| c == lambda) {
            out.push(set.clone());
        }
        return;
    }
    let need = k - set.len();
    for x in from..=(g.order() - need) {
        if push(g, set, counts, x, lambda) {
            extend(g, set, counts, x + 1, k, lambda, out);
            pop(g, set, counts);
        }
    }
}

/// The orbit of `d` under right translations and the given automorphisms.
fn class_of(g: &GroupTable, d: &[usize], aut: &[Perm]) -> Vec<Vec<usize>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut stack = vec![d.to_vec()];
    seen.insert(d.to_vec());
    while let Some(s) = stack.pop() {
        let translates = (0..g.order()).map(|x| s.iter().map(|&e| g.mul(e, x)).collect::<Vec<_>>());
        let images = aut.iter().map(|a| s.iter().map(|&e| a.apply(e)).collect::<Vec<_>>());
        for mut t in translates.chain(images) {
            t.sort_unstable();
            if seen.insert(t.clone()) {
                stack.push(t);
            }
        }
    }
    seen.into_iter().collect()
}

/// Witness `(pdiv, q, j)` that no difference set with parameters `p` exists:
/// `pdiv > 1` divides `v`, `q` is a prime dividing the square-free part of
/// `k - lambda`, and `q^j = -1 (mod pdiv)` with `j` minimal. Divisors and
/// primes are scanned in ascending order.
pub fn lander_excluded(p: &DesignParams) -> Result<Option<(u64, u64, u64)>> {
    if !p.is_symmetric_feasible() {
        return Err(Error::pre(format!("{p} is not symmetric-feasible")));
    }
    let sf = squarefree_part(p.order());
    let primes: Vec<u64> = factorize(sf).into_iter().map(|(q, _)| q).collect();
    for pdiv in divisors(p.v).into_iter().filter(|&d| d > 1) {
        for &q in &primes {
            let Some(ord) = mult_order(q, pdiv) else { continue };
            if let Some(j) = (1..=ord).find(|&j| pow_mod(q, j, pdiv) == pdiv - 1) {
                return Ok(Some((pdiv, q, j)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_from_tags() {
        for (tag, n, abelian) in [
            ("c11", 11, true),
            ("c2xc8", 16, true),
            ("q8xc2", 16, false),
            ("e16", 16, true),
            ("c37", 37, true),
            ("c121ab", 121, true),
        ] {
            let g = GroupTable::from_tag(tag).unwrap();
            assert_eq!(g.order(), n, "{tag}");
            assert_eq!(g.is_abelian(), abelian, "{tag}");
        }
        assert!(GroupTable::from_tag("d8").is_err());
        assert!(GroupTable::from_tag("e12").is_err());
        assert!(GroupTable::from_tag("c16xc16").is_err());
    }

    #[test]
    fn quaternion_relations() {
        let q = GroupTable::quaternion8();
        // i^2 = j^2 = k^2 = ijk = -1
        let (minus1, i, j, k) = (1, 2, 4, 6);
        assert_eq!(q.mul(i, i), minus1);
        assert_eq!(q.mul(j, j), minus1);
        assert_eq!(q.mul(k, k), minus1);
        assert_eq!(q.mul(q.mul(i, j), k), minus1);
        assert_eq!((0..8).filter(|&x| q.element_order(x) == 4).count(), 6);
    }

    #[test]
    fn automorphism_group_orders() {
        let order = |tag: &str| {
            let g = GroupTable::from_tag(tag).unwrap();
            PermGroup::new(g.order(), g.automorphism_generators()).unwrap().order()
        };
        assert_eq!(order("c11"), 10);
        assert_eq!(order("q8"), 24);
        assert_eq!(order("e16"), 20160);
        assert_eq!(order("c2xc8"), 16);
    }

    #[test]
    fn hadamard_difference_set() {
        let g = Arc::new(GroupTable::cyclic(11).unwrap());
        assert!(is_difference_set(&g, &[1, 3, 4, 5, 9], 2).unwrap());
        assert!(!is_difference_set(&g, &[1, 2, 3, 4, 5], 2).unwrap());
        let ds = DifferenceSet::new(Arc::clone(&g), &[1, 3, 4, 5, 9], 2).unwrap();
        let d = develop(&ds).unwrap();
        assert!(verify_symmetric_design(&d).ok);
        assert!(DifferenceSet::new(g, &[1, 2, 3, 4, 5], 2).is_err());
    }

    #[test]
    fn search_finds_translates_of_quadratic_residues() {
        let g = Arc::new(GroupTable::cyclic(11).unwrap());
        let plain = search_difference_sets(&g, 5, 2, None, Exec::Sequential).unwrap();
        // residues and non-residues are the two translation classes
        assert_eq!(plain.len(), 2);
        let aut = g.automorphism_generators();
        let merged = search_difference_sets(&g, 5, 2, Some(&aut), Exec::Sequential).unwrap();
        assert_eq!(merged.len(), 1);
        let par = search_difference_sets(&g, 5, 2, Some(&aut), Exec::Parallel).unwrap();
        assert_eq!(par[0].elements, merged[0].elements);
    }

    #[test]
    fn search_respects_scale_cap() {
        let g = Arc::new(GroupTable::from_tag("c121ab").unwrap());
        assert!(matches!(search_difference_sets(&g, 16, 2, None, Exec::Sequential), Err(Error::ScaleCap(_))));
    }

    #[test]
    fn lander_witnesses() {
        assert_eq!(lander_excluded(&DesignParams::new(121, 16, 2).unwrap()).unwrap(), Some((11, 2, 5)));
        assert_eq!(lander_excluded(&DesignParams::new(16, 6, 2).unwrap()).unwrap(), None);
        assert_eq!(lander_excluded(&DesignParams::new(11, 5, 2).unwrap()).unwrap(), None);
        assert!(lander_excluded(&DesignParams::new(12, 5, 2).unwrap()).is_err());
    }

    // independent oracle: all k-subsets by bitmask
    #[test]
    fn c16_search_matches_bitmask_enumeration() {
        let g = Arc::new(GroupTable::cyclic(16).unwrap());
        let brute = (0u32..1 << 16)
            .filter(|m| m.count_ones() == 6 && m & 1 == 1)
            .filter(|m| {
                let d: Vec<usize> = (0..16).filter(|i| m >> i & 1 == 1).collect();
                is_difference_set(&g, &d, 2).unwrap()
            })
            .count();
        let found = search_difference_sets(&g, 6, 2, None, Exec::Sequential).unwrap();
        assert_eq!(brute == 0, found.is_empty());
    }
}
