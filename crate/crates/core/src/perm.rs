//! Permutations, cycle types and permutation groups.
//!
//! Groups carry a lazily built stabilizer chain computed by deterministic
//! Schreier–Sims. The base always starts with any requested prefix and is
//! then extended by the smallest point moved by the new strong generator, so
//! for a plain group the base order is 1, 2, 3, ... as far as it is needed.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Elements beyond which explicit enumeration refuses to run.
pub const ENUMERATION_CAP: u128 = 10_000_000;

/// A permutation of `{0, .., n-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n as u32).collect() }
    }

    /// Builds a permutation from 0-based images, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::input(format!("image list is not a bijection on {n} points")));
            }
            seen[i] = true;
        }
        Ok(Perm { images: images.into_iter().map(|i| i as u32).collect() })
    }

    /// Parses disjoint-cycle notation with 1-based points, e.g.
    /// `"(2,4,3)(5,13,9)"`. Fixed points are implicit; `""`, `"()"` and
    /// `"id"` denote the identity.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() || t == "()" || t == "id" {
            return Ok(Perm::identity(n));
        }
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.find(')').map(|end| (&r[..end], &r[end + 1..])))
                .ok_or_else(|| Error::input(format!("malformed cycle notation: {s:?}")))?;
            let (cycle, tail) = body;
            rest = tail;
            if cycle.is_empty() {
                continue;
            }
            let pts = cycle
                .split(',')
                .map(|p| {
                    let v: usize = p.parse().map_err(|_| Error::input(format!("bad point {p:?} in {s:?}")))?;
                    if v == 0 || v > n {
                        return Err(Error::input(format!("point {v} out of range 1..={n}")));
                    }
                    Ok(v - 1)
                })
                .collect::<Result<Vec<_>>>()?;
            for &p in &pts {
                if used[p] {
                    return Err(Error::input(format!("point {} repeated in {s:?}", p + 1)));
                }
                used[p] = true;
            }
            for (i, &p) in pts.iter().enumerate() {
                images[p] = pts[(i + 1) % pts.len()];
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&i| i as usize)
    }

    /// `self` followed by `other`: `i -> other(self(i))`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `g^-1 * self * g` in the "apply left first" convention, i.e. the
    /// permutation mapping `g(i)` to `g(self(i))`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.inverse().then(self).then(g)
    }

    pub fn pow(&self, e: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn fixes(&self, i: usize) -> bool {
        self.apply(i) == i
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.fixes(i)).collect()
    }

    pub fn smallest_moved(&self) -> Option<usize> {
        (0..self.degree()).find(|&i| !self.fixes(i))
    }

    /// Cycles including fixed points, each starting at its least element,
    /// ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.apply(start);
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.apply(j);
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_lengths(self.cycles().iter().map(Vec::len))
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Disjoint cycle notation with 1-based points; `"()"` for the identity.
    pub fn to_cycle_string(&self) -> String {
        let s: String = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
                format!("({})", inner.join(","))
            })
            .collect();
        if s.is_empty() {
            "()".to_string()
        } else {
            s
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}", self.to_cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / crate::arith::gcd(a, b) * b
}

/// Multiset of cycle lengths, `length -> multiplicity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType {
    pub counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn from_lengths(lengths: impl IntoIterator<Item = usize>) -> Self {
        let mut counts = BTreeMap::new();
        for l in lengths {
            *counts.entry(l).or_insert(0) += 1;
        }
        CycleType { counts }
    }

    /// From `(length, multiplicity)` pairs; zero multiplicities are dropped.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        let mut counts = BTreeMap::new();
        for &(l, m) in pairs {
            if m > 0 {
                *counts.entry(l).or_insert(0) += m;
            }
        }
        CycleType { counts }
    }

    /// Number of points moved or fixed, `sum length * multiplicity`.
    pub fn degree(&self) -> usize {
        self.counts.iter().map(|(l, m)| l * m).sum()
    }

    pub fn count(&self, length: usize) -> usize {
        self.counts.get(&length).copied().unwrap_or(0)
    }

    pub fn fixed(&self) -> usize {
        self.count(1)
    }

    /// Element order, the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.counts.keys().fold(1u64, |acc, &l| lcm(acc, l as u64))
    }

    /// Cycle type of `x^e` given the cycle type of `x`.
    pub fn power(&self, e: u64) -> CycleType {
        let mut counts = BTreeMap::new();
        for (&l, &m) in &self.counts {
            let g = crate::arith::gcd(l as u64, e) as usize;
            *counts.entry(l / g).or_insert(0) += m * g;
        }
        CycleType { counts }
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|(l, m)| format!("{l}^{m}")).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<usize>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn compute(n: usize, base: &[usize], l: usize, strong: &[Perm]) -> Level {
        let gens: Vec<usize> = (0..strong.len()).filter(|&s| base[..l].iter().all(|&b| strong[s].fixes(b))).collect();
        let b = base[l];
        let mut transversal: Vec<Option<Perm>> = vec![None; n];
        transversal[b] = Some(Perm::identity(n));
        let mut orbit = vec![b];
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            for &s in &gens {
                let q = strong[s].apply(p);
                if transversal[q].is_none() {
                    let u = transversal[p].as_ref().unwrap().then(&strong[s]);
                    transversal[q] = Some(u);
                    orbit.push(q);
                }
            }
        }
        Level { base: b, gens, orbit, transversal }
    }
}

/// Base and strong generating set with orbit transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabChain {
    /// Deterministic Schreier–Sims; `prefix` fixes the first base points.
    pub fn build(degree: usize, gens: &[Perm], prefix: &[usize]) -> StabChain {
        let mut base: Vec<usize> = prefix.to_vec();
        let mut strong: Vec<Perm> = Vec::new();
        for g in gens {
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        for g in &strong {
            if base.iter().all(|&b| g.fixes(b)) {
                base.push(g.smallest_moved().unwrap());
            }
        }
        let mut levels: Vec<Level> = (0..base.len()).map(|l| Level::compute(degree, &base, l, &strong)).collect();
        let mut i = base.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            match Self::first_residue(&levels, lvl, &strong) {
                Some((r, j)) => {
                    if j == base.len() {
                        base.push(r.smallest_moved().unwrap());
                        levels.push(Level::compute(degree, &base, j, &[]));
                    }
                    strong.push(r);
                    for (l, level) in levels.iter_mut().enumerate().take(j + 1).skip(lvl + 1) {
                        *level = Level::compute(degree, &base, l, &strong);
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
        StabChain { degree, strong, levels }
    }

    fn first_residue(levels: &[Level], i: usize, strong: &[Perm]) -> Option<(Perm, usize)> {
        let lv = &levels[i];
        for &b in &lv.orbit {
            let ub = lv.transversal[b].as_ref().unwrap();
            for &s in &lv.gens {
                let c = strong[s].apply(b);
                let uc = lv.transversal[c].as_ref().unwrap();
                let h = ub.then(&strong[s]).then(&uc.inverse());
                if h.is_identity() {
                    continue;
                }
                let (r, j) = sift(levels, i + 1, h);
                if !r.is_identity() {
                    return Some((r, j));
                }
            }
        }
        None
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }

    /// Strong generators fixing the first `l` base points.
    pub fn level_generators(&self, l: usize) -> Vec<Perm> {
        let base = self.base();
        let l = l.min(base.len());
        self.strong.iter().filter(|s| base[..l].iter().all(|&b| s.fixes(b))).cloned().collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && sift(&self.levels, 0, g.clone()).0.is_identity()
    }

    /// Visits every element exactly once, in a fixed order.
    pub fn for_each_element(&self, mut f: impl FnMut(&Perm)) {
        fn rec(levels: &[Level], l: usize, acc: &Perm, f: &mut dyn FnMut(&Perm)) {
            if l == 0 {
                f(acc);
                return;
            }
            let lv = &levels[l - 1];
            for &b in &lv.orbit {
                let next = acc.then(lv.transversal[b].as_ref().unwrap());
                rec(levels, l - 1, &next, f);
            }
        }
        rec(&self.levels, self.levels.len(), &Perm::identity(self.degree), &mut f);
    }
}

fn sift(levels: &[Level], from: usize, mut h: Perm) -> (Perm, usize) {
    for (l, lv) in levels.iter().enumerate().skip(from) {
        let beta = h.apply(lv.base);
        match &lv.transversal[beta] {
            Some(u) => h = h.then(&u.inverse()),
            None => return (h, l),
        }
    }
    (h, levels.len())
}

/// A permutation group given by generators, with a lazily built chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: OnceLock<StabChain>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::input(format!(
                "generator {g} has degree {} but the group has degree {degree}",
                g.degree()
            )));
        }
        Ok(PermGroup { degree, generators, chain: OnceLock::new() })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), chain: OnceLock::new() }
    }

    /// Parses generators written in cycle notation.
    pub fn from_cycle_strings<S: AsRef<str>>(degree: usize, gens: &[S]) -> Result<Self> {
        let gens = gens.iter().map(|s| Perm::parse_cycles(s.as_ref(), degree)).collect::<Result<Vec<_>>>()?;
        PermGroup::new(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::build(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain().contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Perm::is_identity)
    }

    /// All elements, refusing groups above [`ENUMERATION_CAP`].
    pub fn elements(&self) -> Result<Vec<Perm>> {
        self.check_cap()?;
        let mut out = Vec::with_capacity(self.order() as usize);
        self.chain().for_each_element(|g| out.push(g.clone()));
        Ok(out)
    }

    fn check_cap(&self) -> Result<()> {
        let order = self.order();
        if order > ENUMERATION_CAP {
            return Err(Error::ScaleCap(format!(
                "group of order {order} exceeds the enumeration cap {ENUMERATION_CAP}"
            )));
        }
        Ok(())
    }

    /// The orbit of `alpha`, sorted.
    pub fn orbit(&self, alpha: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[alpha] = true;
        let mut queue = VecDeque::from([alpha]);
        let mut out = vec![alpha];
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    out.push(q);
                    queue.push_back(q);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Orbits meeting `domain`, each sorted, ordered by least element.
    pub fn orbits_on(&self, domain: &[usize]) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.degree];
        let mut pts: Vec<usize> = domain.to_vec();
        pts.sort_unstable();
        let mut out = Vec::new();
        for p in pts {
            if done[p] {
                continue;
            }
            let orb = self.orbit(p);
            for &q in &orb {
                done[q] = true;
            }
            out.push(orb);
        }
        out.sort_by_key(|o| o[0]);
        out
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.orbits_on(&(0..self.degree).collect::<Vec<_>>())
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// Generators of the point stabiliser `G_alpha`.
    pub fn stabilizer(&self, alpha: usize) -> PermGroup {
        self.pointwise_stabilizer(&[alpha])
    }

    /// Generators of the pointwise stabiliser of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let chain = StabChain::build(self.degree, &self.generators, points);
        let gens = chain.level_generators(points.len());
        PermGroup { degree: self.degree, generators: gens, chain: OnceLock::new() }
    }

    /// Whether every point stabiliser in the action on `domain` is trivial.
    /// `domain` must be invariant.
    pub fn is_semiregular(&self, domain: &[usize]) -> Result<bool> {
        let mut inside = vec![false; self.degree];
        for &p in domain {
            if p >= self.degree {
                return Err(Error::input(format!("point {} out of range", p + 1)));
            }
            inside[p] = true;
        }
        for g in &self.generators {
            if domain.iter().any(|&p| !inside[g.apply(p)]) {
                return Err(Error::input("domain is not invariant under the group"));
            }
        }
        for orb in self.orbits_on(domain) {
            let stab = self.stabilizer(orb[0]);
            if stab.generators.iter().any(|g| domain.iter().any(|&p| !g.fixes(p))) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(u, u1)`: the number of `G`-conjugates of `x`, and how many of them
    /// lie in the stabiliser of `alpha`.
    pub fn conjugacy_counts(&self, x: &Perm, alpha: usize) -> Result<(u64, u64)> {
        if !self.contains(x) {
            return Err(Error::input(format!("{x} is not an element of the group")));
        }
        if alpha >= self.degree {
            return Err(Error::input(format!("point {} out of range", alpha + 1)));
        }
        self.check_cap()?;
        let mut conj: HashSet<Perm> = HashSet::new();
        self.chain().for_each_element(|g| {
            conj.insert(x.conjugate_by(g));
        });
        let u1 = conj.iter().filter(|c| c.fixes(alpha)).count();
        Ok((conj.len() as u64, u1 as u64))
    }
}
