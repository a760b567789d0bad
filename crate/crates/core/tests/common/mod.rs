//! Oracles shared by the integration tests. Nothing here calls into the
//! group-theoretic machinery of the library; they are deliberately naive.

#![allow(dead_code)]

use biplane_core::Design;

/// Number of point permutations mapping the block set onto itself, by
/// backtracking over point images and pruning on the number of blocks
/// through each triple of already-placed points.
pub fn naive_aut_count(d: &Design) -> u64 {
    let v = d.v();
    let mut triple = vec![0u8; v * v * v];
    for b in d.blocks() {
        for &x in b {
            for &y in b {
                for &z in b {
                    triple[(x * v + y) * v + z] += 1;
                }
            }
        }
    }
    let blocks: std::collections::HashSet<Vec<usize>> = d.sorted_blocks().into_iter().collect();
    let mut img = Vec::with_capacity(v);
    let mut used = vec![false; v];
    let mut count = 0;
    extend(v, &triple, &blocks, &mut img, &mut used, &mut count);
    count
}

fn extend(
    v: usize,
    triple: &[u8],
    blocks: &std::collections::HashSet<Vec<usize>>,
    img: &mut Vec<usize>,
    used: &mut [bool],
    count: &mut u64,
) {
    let i = img.len();
    if i == v {
        let ok = blocks.iter().all(|b| {
            let mut m: Vec<usize> = b.iter().map(|&p| img[p]).collect();
            m.sort_unstable();
            blocks.contains(&m)
        });
        *count += ok as u64;
        return;
    }
    let t = |a: usize, b: usize, c: usize| triple[(a * v + b) * v + c];
    for p in 0..v {
        if used[p] {
            continue;
        }
        let consistent = (0..i).all(|j| (j..i).all(|l| t(j, l, i) == t(img[j], img[l], p)));
        if consistent && t(i, i, i) == t(p, p, p) {
            used[p] = true;
            img.push(p);
            extend(v, triple, blocks, img, used, count);
            img.pop();
            used[p] = false;
        }
    }
}

/// Floor square root by Newton iteration on `u128`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = n;
    let mut y = x.div_ceil(2);
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && isqrt(n as u128).pow(2) == n as u128
}

/// Whether `z^2 = a x^2 + b y^2` has a solution with `(x, y) != (0, 0)` and
/// `|x|, |y| <= bound`.
pub fn ternary_solvable_brute(a: i128, b: i128, bound: i128) -> bool {
    (0..=bound).any(|x| (0..=bound).any(|y| (x, y) != (0, 0) && is_square(a * x * x + b * y * y)))
}

/// The lines of the Fano plane on points `0..7`.
pub const FANO_LINES: [[usize; 3]; 7] = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];

/// Whether the group generated by `gens` on `0..n` is primitive, by growing
/// the finest block system containing `{0, b}` for every `b`.
pub fn is_primitive(n: usize, gens: &[biplane_core::Perm]) -> bool {
    fn find(uf: &mut [usize], mut a: usize) -> usize {
        while uf[a] != a {
            uf[a] = uf[uf[a]];
            a = uf[a];
        }
        a
    }
    (1..n).all(|b| {
        let mut uf: Vec<usize> = (0..n).collect();
        uf[b] = 0;
        let mut queue = vec![(0, b)];
        while let Some((p, q)) = queue.pop() {
            for x in gens {
                let (xp, xq) = (x.apply(p), x.apply(q));
                let (rp, rq) = (find(&mut uf, xp), find(&mut uf, xq));
                if rp != rq {
                    uf[rp] = rq;
                    queue.push((xp, xq));
                }
            }
        }
        (0..n).all(|p| find(&mut uf, p) == find(&mut uf, 0))
    })
}
