//! Automorphism groups, canonical forms and isomorphism testing.
//!
//! Designs are searched as coloured bipartite graphs: points `0..v` and
//! blocks `v..v+b` start in two different cells, so dualities never appear.
//! Each node of the search tree holds an equitable ordered partition; a child
//! individualises one point of the first smallest non-singleton point cell.
//!
//! * `automorphism_group` walks the first path, then for each level searches
//!   the sibling subtrees not already covered by the orbit of the found
//!   automorphisms. The generators found form a strong generating set along
//!   the first path, so the order is exact.
//! * `canonical_form` visits one child per orbit of the pointwise stabiliser
//!   of the individualised points and keeps the lexicographically least
//!   relabelled block list over all leaves reached.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::design::{verify_symmetric_design, Design};
use crate::par::{self, Exec};
use crate::perm::{Perm, PermGroup};
use crate::{Error, Result};

type Cells = Vec<Vec<usize>>;

struct Graph {
    v: usize,
    nbrs: Vec<Vec<usize>>,
}

impl Graph {
    fn new(d: &Design) -> Graph {
        let v = d.v();
        let b = d.num_blocks();
        let mut nbrs = vec![Vec::new(); v + b];
        for (i, blk) in d.blocks().iter().enumerate() {
            for &p in blk {
                nbrs[p].push(v + i);
                nbrs[v + i].push(p);
            }
        }
        Graph { v, nbrs }
    }

    fn n(&self) -> usize {
        self.nbrs.len()
    }

    fn initial(&self) -> Cells {
        let mut cells: Cells = vec![(0..self.v).collect()];
        if self.n() > self.v {
            cells.push((self.v..self.n()).collect());
        }
        self.refine(&mut cells);
        cells
    }

    /// Refines `cells` in place to the coarsest equitable refinement.
    /// Split fragments stay in the parent's position, ordered by ascending
    /// neighbour count, so the result is label-independent.
    fn refine(&self, cells: &mut Cells) {
        let n = self.n();
        let mut counts = vec![0u32; n];
        let mut cell_of = vec![0usize; n];
        loop {
            let mut split_any = false;
            let mut s = 0;
            while s < cells.len() {
                for (ci, c) in cells.iter().enumerate() {
                    for &u in c {
                        cell_of[u] = ci;
                    }
                }
                let mut touched: Vec<usize> = Vec::new();
                for &u in &cells[s] {
                    for &w in &self.nbrs[u] {
                        if counts[w] == 0 {
                            touched.push(w);
                        }
                        counts[w] += 1;
                    }
                }
                let mut check: Vec<usize> = touched.iter().map(|&w| cell_of[w]).collect();
                check.sort_unstable();
                check.dedup();
                let mut replaced: Vec<(usize, Cells)> = Vec::new();
                for ci in check {
                    let cell = &cells[ci];
                    if cell.len() == 1 {
                        continue;
                    }
                    let c0 = counts[cell[0]];
                    if cell.iter().all(|&u| counts[u] == c0) {
                        continue;
                    }
                    let mut keyed: Vec<(u32, usize)> = cell.iter().map(|&u| (counts[u], u)).collect();
                    keyed.sort_unstable();
                    let frags: Cells =
                        keyed.chunk_by(|a, b| a.0 == b.0).map(|g| g.iter().map(|x| x.1).collect()).collect();
                    replaced.push((ci, frags));
                }
                for &w in &touched {
                    counts[w] = 0;
                }
                if !replaced.is_empty() {
                    split_any = true;
                    let mut next: Cells = Vec::with_capacity(cells.len() + replaced.len());
                    let mut it = replaced.into_iter().peekable();
                    for (ci, c) in cells.drain(..).enumerate() {
                        if it.peek().is_some_and(|(rc, _)| *rc == ci) {
                            next.extend(it.next().unwrap().1);
                        } else {
                            next.push(c);
                        }
                    }
                    *cells = next;
                }
                s += 1;
            }
            if !split_any {
                break;
            }
        }
    }

    /// Cell sizes followed by the quotient matrix of an equitable partition.
    fn invariant(&self, cells: &Cells) -> Vec<u32> {
        let mut cell_of = vec![0usize; self.n()];
        for (ci, c) in cells.iter().enumerate() {
            for &u in c {
                cell_of[u] = ci;
            }
        }
        let m = cells.len();
        let mut out: Vec<u32> = cells.iter().map(|c| c.len() as u32).collect();
        let mut row = vec![0u32; m];
        for c in cells {
            row.iter_mut().for_each(|x| *x = 0);
            for &w in &self.nbrs[c[0]] {
                row[cell_of[w]] += 1;
            }
            out.extend_from_slice(&row);
        }
        out
    }

    /// Index of the first smallest non-singleton point cell.
    fn target(&self, cells: &Cells) -> Option<usize> {
        cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1 && c[0] < self.v)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
    }

    fn individualize(&self, cells: &Cells, target: usize, w: usize) -> Cells {
        let mut out: Cells = Vec::with_capacity(cells.len() + 1);
        for (i, c) in cells.iter().enumerate() {
            if i == target {
                out.push(vec![w]);
                out.push(c.iter().copied().filter(|&u| u != w).collect());
            } else {
                out.push(c.clone());
            }
        }
        self.refine(&mut out);
        out
    }

    /// Points in leaf order: position `j` holds the point labelled `j`.
    fn leaf_points(&self, cells: &Cells) -> Vec<usize> {
        cells.iter().filter(|c| c[0] < self.v).map(|c| c[0]).collect()
    }
}

/// Automorphism group of a design, acting on points.
#[derive(Clone, Debug)]
pub struct AutResult {
    pub group: PermGroup,
    pub order: u128,
}

impl AutResult {
    /// Generators in sorted order as 1-based cycle strings.
    pub fn generator_strings(&self) -> Vec<String> {
        self.group.generators().iter().map(Perm::to_cycle_string).collect()
    }
}

/// Full automorphism group (point action) of a verified design.
pub fn automorphism_group(d: &Design) -> Result<AutResult> {
    if !verify_symmetric_design(d).ok {
        return Err(Error::pre("automorphism search requires a verified design"));
    }
    Ok(automorphism_group_unchecked(d))
}

pub(crate) fn automorphism_group_unchecked(d: &Design) -> AutResult {
    let g = Graph::new(d);
    let v = d.v();
    // first path
    let mut nodes: Vec<Cells> = vec![g.initial()];
    let mut invariants: Vec<Vec<u32>> = vec![g.invariant(&nodes[0])];
    let mut path: Vec<usize> = Vec::new();
    let mut targets: Vec<usize> = Vec::new();
    while let Some(t) = g.target(nodes.last().unwrap()) {
        let cur = nodes.last().unwrap();
        let w = *cur[t].iter().min().unwrap();
        let child = g.individualize(cur, t, w);
        invariants.push(g.invariant(&child));
        path.push(w);
        targets.push(t);
        nodes.push(child);
    }
    let first_leaf = g.leaf_points(nodes.last().unwrap());

    let mut gens: Vec<Perm> = Vec::new();
    for level in (0..path.len()).rev() {
        let node = &nodes[level];
        let t = targets[level];
        let mut cell: Vec<usize> = node[t].clone();
        cell.sort_unstable();
        let mut orbit = orbit_under(&gens, path[level], v);
        for &w in &cell {
            if orbit[w] {
                continue;
            }
            let child = g.individualize(node, t, w);
            if let Some(auto) = find_equivalent_leaf(&g, d, &child, level + 1, &invariants, &first_leaf) {
                gens.push(auto);
                orbit = orbit_under(&gens, path[level], v);
            }
        }
    }
    gens.sort();
    gens.dedup();
    let group = PermGroup::new(v, gens).expect("generators share the design's degree");
    let order = group.order();
    AutResult { group, order }
}

fn orbit_under(gens: &[Perm], start: usize, n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(p) = stack.pop() {
        for g in gens {
            let q = g.apply(p);
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    seen
}

fn find_equivalent_leaf(
    g: &Graph,
    d: &Design,
    cells: &Cells,
    depth: usize,
    invariants: &[Vec<u32>],
    first_leaf: &[usize],
) -> Option<Perm> {
    if depth >= invariants.len() || g.invariant(cells) != invariants[depth] {
        return None;
    }
    match g.target(cells) {
        None => {
            let leaf = g.leaf_points(cells);
            let mut images = vec![0usize; g.v];
            for (a, b) in first_leaf.iter().zip(&leaf) {
                images[*a] = *b;
            }
            let p = Perm::from_images(images).ok()?;
            d.is_automorphism(&p).then_some(p)
        }
        Some(t) => {
            let mut cell = cells[t].clone();
            cell.sort_unstable();
            cell.into_iter().find_map(|w| {
                let child = g.individualize(cells, t, w);
                find_equivalent_leaf(g, d, &child, depth + 1, invariants, first_leaf)
            })
        }
    }
}

/// Relabelling-invariant description of a design.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalCertificate {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    /// Sorted list of sorted blocks (0-based) under the canonical labelling.
    pub blocks: Vec<Vec<usize>>,
    /// SHA-256 of the 1-based block list rendered as JSON.
    pub hash: String,
}

struct Canon {
    blocks: Vec<Vec<usize>>,
    /// `labels[p]` is the canonical label of point `p`.
    labels: Vec<usize>,
}

fn relabelled_blocks(d: &Design, labels: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = d
        .blocks()
        .iter()
        .map(|b| {
            let mut nb: Vec<usize> = b.iter().map(|&p| labels[p]).collect();
            nb.sort_unstable();
            nb
        })
        .collect();
    out.sort();
    out
}

fn canon_search(g: &Graph, d: &Design, aut: &PermGroup, cells: &Cells, seq: &mut Vec<usize>, best: &mut Option<Canon>) {
    match g.target(cells) {
        None => {
            let order = g.leaf_points(cells);
            let mut labels = vec![0usize; g.v];
            for (j, &p) in order.iter().enumerate() {
                labels[p] = j;
            }
            let blocks = relabelled_blocks(d, &labels);
            if best.as_ref().is_none_or(|b| blocks < b.blocks) {
                *best = Some(Canon { blocks, labels });
            }
        }
        Some(t) => {
            for w in orbit_representatives(aut, seq, &cells[t]) {
                let child = g.individualize(cells, t, w);
                seq.push(w);
                canon_search(g, d, aut, &child, seq, best);
                seq.pop();
            }
        }
    }
}

/// Least point of each orbit of the pointwise stabiliser of `seq` on `cell`.
fn orbit_representatives(aut: &PermGroup, seq: &[usize], cell: &[usize]) -> Vec<usize> {
    let mut sorted = cell.to_vec();
    sorted.sort_unstable();
    if aut.is_trivial() {
        return sorted;
    }
    let stab = aut.pointwise_stabilizer(seq);
    let n = aut.degree();
    let mut covered = vec![false; n];
    let mut reps = Vec::new();
    for &w in &sorted {
        if covered[w] {
            continue;
        }
        reps.push(w);
        for (q, hit) in orbit_under(stab.generators(), w, n).into_iter().enumerate() {
            covered[q] |= hit;
        }
    }
    reps
}

fn canonical_labelling(d: &Design, exec: Exec) -> Canon {
    let g = Graph::new(d);
    let aut = automorphism_group_unchecked(d).group;
    let root = g.initial();
    let Some(t) = g.target(&root) else {
        let mut best = None;
        canon_search(&g, d, &aut, &root, &mut Vec::new(), &mut best);
        return best.expect("a discrete root is a leaf");
    };
    let reps = orbit_representatives(&aut, &[], &root[t]);
    // sibling subtrees are independent; the minimum over them does not
    // depend on evaluation order, and ties keep the earliest child
    let results = par::map_collect(exec, &reps, |&w| {
        let child = g.individualize(&root, t, w);
        let mut best = None;
        canon_search(&g, d, &aut, &child, &mut vec![w], &mut best);
        best.expect("every subtree has a leaf")
    });
    results.into_iter().reduce(|a, b| if b.blocks < a.blocks { b } else { a }).expect("non-empty target cell")
}

fn certificate_from(d: &Design, blocks: Vec<Vec<usize>>) -> CanonicalCertificate {
    let one_based: Vec<Vec<usize>> = blocks.iter().map(|b| b.iter().map(|p| p + 1).collect()).collect();
    let text = serde_json::to_string(&(d.v(), d.k(), d.lambda(), &one_based)).expect("serialisable");
    let hash = hex::encode(Sha256::digest(text.as_bytes()));
    CanonicalCertificate { v: d.v(), k: d.k(), lambda: d.lambda(), blocks, hash }
}

/// Canonical certificate of a verified design.
pub fn canonical_form(d: &Design) -> Result<CanonicalCertificate> {
    canonical_form_with(d, Exec::default())
}

pub fn canonical_form_with(d: &Design, exec: Exec) -> Result<CanonicalCertificate> {
    if !verify_symmetric_design(d).ok {
        return Err(Error::pre("canonical form requires a verified design"));
    }
    let c = canonical_labelling(d, exec);
    Ok(certificate_from(d, c.blocks))
}

/// A point bijection carrying the blocks of `a` onto the blocks of `b`.
pub fn are_isomorphic(a: &Design, b: &Design) -> Result<Option<Perm>> {
    if a.params() != b.params() {
        return Err(Error::input(format!("parameter mismatch {} vs {}", a.params(), b.params())));
    }
    for d in [a, b] {
        if !verify_symmetric_design(d).ok {
            return Err(Error::pre("isomorphism testing requires verified designs"));
        }
    }
    let ca = canonical_labelling(a, Exec::default());
    let cb = canonical_labelling(b, Exec::default());
    if ca.blocks != cb.blocks {
        return Ok(None);
    }
    let mut from_label = vec![0usize; b.v()];
    for (p, &l) in cb.labels.iter().enumerate() {
        from_label[l] = p;
    }
    let images: Vec<usize> = ca.labels.iter().map(|&l| from_label[l]).collect();
    let iso = Perm::from_images(images).expect("composition of bijections");
    debug_assert_eq!(a.relabel(&iso).sorted_blocks(), b.sorted_blocks());
    Ok(Some(iso))
}

/// The action of a point group on blocks.
pub fn block_action(d: &Design, group: &PermGroup) -> Result<PermGroup> {
    let gens = group
        .generators()
        .iter()
        .map(|x| {
            d.induced_block_perm(x).map_err(|b| Error::input(format!("{x} does not map block {} to a block", b + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(d.num_blocks(), gens)
}

/// Number of orbits of `group` on incident point-block pairs.
pub fn flag_orbit_count(d: &Design, group: &PermGroup) -> Result<usize> {
    let blocks = block_action(d, group)?;
    let v = d.v();
    let flags: Vec<(usize, usize)> =
        (0..d.num_blocks()).flat_map(|b| d.block(b).iter().map(move |&p| (p, b))).collect();
    let id = |p: usize, b: usize| b * v + p;
    let mut seen = vec![false; v * d.num_blocks()];
    let mut orbits = 0;
    for &(p, b) in &flags {
        if seen[id(p, b)] {
            continue;
        }
        orbits += 1;
        seen[id(p, b)] = true;
        let mut stack = vec![(p, b)];
        while let Some((q, c)) = stack.pop() {
            for (x, y) in group.generators().iter().zip(blocks.generators()) {
                let (q2, c2) = (x.apply(q), y.apply(c));
                if !seen[id(q2, c2)] {
                    seen[id(q2, c2)] = true;
                    stack.push((q2, c2));
                }
            }
        }
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::DesignParams;

    fn fano_complement() -> Design {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        let blocks = lines.iter().map(|l| (0..7).filter(|p| !l.contains(p)).collect()).collect();
        Design::new(DesignParams::new(7, 4, 2).unwrap(), blocks).unwrap()
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn fano_complement_group_matches_brute_force() {
        let d = fano_complement();
        let brute =
            all_perms(7).into_iter().filter(|p| d.is_automorphism(&Perm::from_images(p.clone()).unwrap())).count();
        assert_eq!(brute, 168);
        let aut = automorphism_group(&d).unwrap();
        assert_eq!(aut.order, 168);
        assert!(aut.group.generators().iter().all(|g| d.is_automorphism(g)));
    }

    #[test]
    fn relabelling_invariance() {
        let d = fano_complement();
        let sigma = Perm::parse_cycles("(1,5,2)(3,7)", 7).unwrap();
        let e = d.relabel(&sigma);
        assert_eq!(canonical_form(&d).unwrap(), canonical_form(&e).unwrap());
        let iso = are_isomorphic(&d, &e).unwrap().unwrap();
        assert_eq!(d.relabel(&iso).sorted_blocks(), e.sorted_blocks());
    }

    #[test]
    fn unverified_designs_are_rejected() {
        let d = fano_complement();
        let mut blocks = d.blocks().to_vec();
        blocks[0].pop();
        let broken = Design::new(d.params(), blocks).unwrap();
        assert!(automorphism_group(&broken).is_err());
        assert!(canonical_form(&broken).is_err());
    }

    #[test]
    fn flag_transitivity_of_fano_complement() {
        let d = fano_complement();
        let aut = automorphism_group(&d).unwrap();
        assert_eq!(flag_orbit_count(&d, &aut.group).unwrap(), 1);
        assert_eq!(flag_orbit_count(&d, &PermGroup::trivial(7)).unwrap(), 28);
    }
}
