//! Fixed-point bookkeeping for automorphisms of biplanes, certification of
//! the fixed-point lemmas on concrete automorphisms, and the cycle-type and
//! Sylow tables for a hypothetical (121,16,2) biplane.
//!
//! All square-root comparisons are done in exact integer arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, is_prime, isqrt, prime_power};
use crate::aut::automorphism_group;
use crate::design::{restrict_subdesign, verify_symmetric_design, Design, Subdesign};
use crate::perm::{CycleType, Perm, PermGroup};
use crate::{Error, Result};

/// Fixed-point data of one automorphism. Ids are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixReport {
    pub f_points: usize,
    pub f_blocks: usize,
    pub fixed_points: Vec<usize>,
    pub fixed_blocks: Vec<usize>,
    /// `(B, s_B, r_B)`: fixed points on `B` and 2-cycles inside `B`.
    pub block_data: Vec<(usize, usize, usize)>,
    /// `(alpha, s_alpha, r_alpha)`: fixed blocks through `alpha` and 2-cycles
    /// of blocks through `alpha`.
    pub point_data: Vec<(usize, usize, usize)>,
    pub point_cycle_type: CycleType,
    pub block_cycle_type: CycleType,
    pub order: u64,
}

/// Fixed-point report for an automorphism `x` of the verified design `d`.
pub fn fix_report(d: &Design, x: &Perm) -> Result<FixReport> {
    if !verify_symmetric_design(d).ok {
        return Err(Error::pre("fixed-point data needs a verified design"));
    }
    fix_report_unchecked(d, x)
}

fn fix_report_unchecked(d: &Design, x: &Perm) -> Result<FixReport> {
    if x.degree() != d.v() {
        return Err(Error::input(format!("permutation degree {} differs from v = {}", x.degree(), d.v())));
    }
    let y = d
        .induced_block_perm(x)
        .map_err(|b| Error::input(format!("not an automorphism: block {} is not mapped to a block", b + 1)))?;
    let fixed_points = x.fixed_points();
    let fixed_blocks = y.fixed_points();
    let block_data = fixed_blocks
        .iter()
        .map(|&b| {
            let blk = d.block(b);
            let s = blk.iter().filter(|&&p| x.fixes(p)).count();
            let r = blk.iter().filter(|&&p| x.apply(p) != p && x.apply(x.apply(p)) == p).count() / 2;
            (b, s, r)
        })
        .collect();
    let point_data = fixed_points
        .iter()
        .map(|&a| {
            let on = d.blocks_on(a);
            let s = on.iter().filter(|&&b| y.fixes(b)).count();
            let r = on.iter().filter(|&&b| y.apply(b) != b && y.apply(y.apply(b)) == b).count() / 2;
            (a, s, r)
        })
        .collect();
    Ok(FixReport {
        f_points: fixed_points.len(),
        f_blocks: fixed_blocks.len(),
        fixed_points,
        fixed_blocks,
        block_data,
        point_data,
        point_cycle_type: x.cycle_type(),
        block_cycle_type: y.cycle_type(),
        order: x.order(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::NotApplicable => "n/a",
        })
    }
}

/// One named check with both sides of the tested relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub statement: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertResult {
    pub checks: Vec<Check>,
}

impl CertResult {
    fn push(&mut self, name: &str, statement: &str, status: Status, lhs: impl ToString, rhs: impl ToString) {
        self.checks.push(Check {
            name: name.into(),
            statement: statement.into(),
            status,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }

    fn check(&mut self, name: &str, statement: &str, ok: bool, lhs: impl ToString, rhs: impl ToString) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(name, statement, status, lhs, rhs);
    }

    fn na(&mut self, name: &str, statement: &str, why: &str) {
        self.push(name, statement, Status::NotApplicable, why, "");
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }
}

const EQUAL_FIX: &str = "fixes an equal number of points and blocks";
const EQUAL_CYCLES: &str = "the same cycle structure in its actions on points and on blocks";
const FLAG_2CYCLES: &str = "if alpha in B then r_alpha = r_B";
const BLOCK_FIX: &str = "|fix_B(x)| = s_B(s_B-1)/2 + r_B + 1";
const POINT_FIX: &str = "|fix_P(x)| = s_alpha(s_alpha-1)/2 + r_alpha + 1";
const FIXED_SUBDESIGN: &str = "if s_B > 0 and r_B = 0: subdesign, s_B constant, (s_B-1)^2 = k-2 or s_B(s_B-1) <= k-2";
const NO_2CYCLES: &str = "no 2-cycles: v >= |fix_B(x)|(k-s+1)";
const INV_POINT_FIX: &str = "involution: |fix_P(x)| = (k+1+(s_alpha-1)^2)/2";
const INV_SB: &str = "involution: s_B constant or s_B in {0,2}";
const INV_SALPHA: &str = "involution: (s_alpha-2)^2 = k-2 or (s_alpha-1)^2 <= k-5";
const INV_F_BOUND: &str = "involution: f <= k-2, or k-2 square and f = k+sqrt(k-2) = k+s_alpha-2";
const ODD_F_BOUND: &str = "odd order: f = s_B(s_B-1)/2+1; f <= k/2, or k-2 square and f = (k+sqrt(k-2))/2";
const F_BOUND: &str = "f <= k + sqrt(k-2)";
const F_4K3: &str = "k >= 6: f <= 4k/3";
const P2_FIXFREE: &str = "v = p^2, o(x) = p: fix_P(x) is empty";

/// Certifies every fixed-point lemma whose hypotheses hold for the
/// automorphism `x` of the verified biplane `d`. Checks whose hypotheses
/// fail are reported as not applicable.
pub fn certify_fix_lemmas(d: &Design, x: &Perm) -> Result<CertResult> {
    let r = fix_report(d, x)?;
    Ok(certify_report(d, &r))
}

/// The same certification when `d` is already known to verify.
pub fn certify_fix_lemmas_unchecked(d: &Design, x: &Perm) -> Result<CertResult> {
    let r = fix_report_unchecked(d, x)?;
    Ok(certify_report(d, &r))
}

fn all_equal(xs: impl IntoIterator<Item = usize>) -> bool {
    let mut it = xs.into_iter();
    match it.next() {
        None => true,
        Some(a) => it.all(|b| b == a),
    }
}

fn certify_report(d: &Design, r: &FixReport) -> CertResult {
    let mut c = CertResult::default();
    let (v, k) = (d.v(), d.k());
    let f = r.f_points;

    c.check("equal-fix", EQUAL_FIX, r.f_points == r.f_blocks, r.f_points, r.f_blocks);
    c.check("equal-cycles", EQUAL_CYCLES, r.point_cycle_type == r.block_cycle_type, &r.point_cycle_type, &r.block_cycle_type);

    let biplane = d.lambda() == 2 && k >= 4;
    let gated: [(&str, &str); 13] = [
        ("flag-2cycles", FLAG_2CYCLES),
        ("block-fix", BLOCK_FIX),
        ("point-fix", POINT_FIX),
        ("fixed-subdesign", FIXED_SUBDESIGN),
        ("no-2cycles", NO_2CYCLES),
        ("inv-point-fix", INV_POINT_FIX),
        ("inv-sB", INV_SB),
        ("inv-salpha", INV_SALPHA),
        ("inv-f-bound", INV_F_BOUND),
        ("odd-f-bound", ODD_F_BOUND),
        ("f-bound", F_BOUND),
        ("f-4k/3", F_4K3),
        ("p2-fixfree", P2_FIXFREE),
    ];
    if !biplane {
        for (name, st) in gated {
            c.na(name, st, "not a biplane with k >= 4");
        }
        return c;
    }

    // (a) and (c) over fixed flags
    let incident_fixed: Vec<(usize, usize, usize, usize)> = r
        .point_data
        .iter()
        .flat_map(|&(a, _, ra)| {
            r.block_data.iter().filter(move |&&(b, _, _)| d.incident(a, b)).map(move |&(b, _, rb)| (a, b, ra, rb))
        })
        .collect();
    if incident_fixed.is_empty() {
        c.na("flag-2cycles", FLAG_2CYCLES, "no fixed flag");
    } else {
        let bad = incident_fixed.iter().find(|t| t.2 != t.3);
        let (_, _, ra, rb) = *bad.unwrap_or(&incident_fixed[0]);
        c.check("flag-2cycles", FLAG_2CYCLES, bad.is_none(), format!("r_alpha={ra}"), format!("r_B={rb}"));
    }

    if r.block_data.is_empty() {
        c.na("block-fix", BLOCK_FIX, "no fixed block");
    } else {
        let bad = r.block_data.iter().find(|&&(_, s, rb)| r.f_blocks != s * (s.saturating_sub(1)) / 2 + rb + 1);
        let (_, s, rb) = *bad.unwrap_or(&r.block_data[0]);
        c.check("block-fix", BLOCK_FIX, bad.is_none(), r.f_blocks, s * s.saturating_sub(1) / 2 + rb + 1);
    }

    let flag_points: Vec<&(usize, usize, usize)> =
        r.point_data.iter().filter(|(a, _, _)| incident_fixed.iter().any(|t| t.0 == *a)).collect();
    if flag_points.is_empty() {
        c.na("point-fix", POINT_FIX, "no fixed point on a fixed block");
    } else {
        let bad = flag_points.iter().find(|&&&(_, s, ra)| f != s * s.saturating_sub(1) / 2 + ra + 1);
        let &&(_, s, ra) = bad.unwrap_or(&flag_points[0]);
        c.check("point-fix", POINT_FIX, bad.is_none(), f, s * s.saturating_sub(1) / 2 + ra + 1);
    }

    match r.block_data.iter().find(|&&(_, s, rb)| s > 0 && rb == 0) {
        None => c.na("fixed-subdesign", FIXED_SUBDESIGN, "no fixed block with s_B > 0 and r_B = 0"),
        Some(_) => {
            let sub = restrict_subdesign(d, &r.fixed_points, &r.fixed_blocks).ok().flatten();
            let constant = all_equal(r.block_data.iter().map(|t| t.1));
            let s = r.block_data[0].1;
            let proper = f < v;
            let size_ok = !proper || {
                let t = (s as i128 - 1).pow(2);
                let kk = k as i128 - 2;
                t == kk || (s * (s - 1)) as i128 <= kk
            };
            c.check(
                "fixed-subdesign",
                FIXED_SUBDESIGN,
                sub.is_some() && constant && size_ok,
                format!("subdesign={} s_B constant={constant} s_B={s}", sub.is_some()),
                format!("k-2={}", k - 2),
            );
        }
    }

    let two_cycles = r.point_cycle_type.count(2);
    if two_cycles > 0 || r.f_blocks == 0 {
        c.na("no-2cycles", NO_2CYCLES, "x has 2-cycles or fixes no block");
    } else {
        let constant = all_equal(r.block_data.iter().map(|t| t.1));
        let s = r.block_data[0].1;
        let mut seen = vec![false; v];
        let mut disjoint = true;
        for &(b, _, _) in &r.block_data {
            for &p in d.block(b) {
                if !x_fixes(r, p) {
                    disjoint &= !std::mem::replace(&mut seen[p], true);
                }
            }
        }
        let rhs = r.f_blocks * (k - s + 1);
        c.check(
            "no-2cycles",
            NO_2CYCLES,
            constant && disjoint && v >= rhs,
            format!("v={v} (s constant={constant}, disjoint={disjoint})"),
            rhs,
        );
    }

    let involution = r.order == 2;
    if !involution || f == 0 {
        for (name, st) in [("inv-point-fix", INV_POINT_FIX), ("inv-sB", INV_SB), ("inv-salpha", INV_SALPHA), ("inv-f-bound", INV_F_BOUND)] {
            c.na(name, st, "not an involution with a fixed point");
        }
    } else {
        let sa: Vec<usize> = r.point_data.iter().map(|t| t.1).collect();
        let form = |s: usize| (k + 1 + (s as i128 - 1).pow(2) as usize) / 2;
        let parity = |s: usize| (k + 1 + (s as i128 - 1).pow(2) as usize).is_multiple_of(2);
        let bad = sa.iter().find(|&&s| !parity(s) || form(s) != f);
        let shape = all_equal(sa.iter().copied()) || sa.iter().all(|&s| s == 0 || s == 2);
        let s0 = *bad.unwrap_or(&sa[0]);
        c.check("inv-point-fix", INV_POINT_FIX, bad.is_none() && shape, f, format!("(k+1+(s_alpha-1)^2)/2 with s_alpha={s0}"));

        let sb: Vec<usize> = r.block_data.iter().map(|t| t.1).collect();
        let ok_b = all_equal(sb.iter().copied()) || sb.iter().all(|&s| s == 0 || s == 2);
        c.check("inv-sB", INV_SB, ok_b, format!("{sb:?}"), "constant or in {0,2}");

        if k < 5 {
            // the cited bound is stated for k >= 5 only
            c.na("inv-salpha", INV_SALPHA, "k < 5");
            c.na("inv-f-bound", INV_F_BOUND, "k < 5");
        } else {
            let kk = k as i128 - 2;
            let bad = sa.iter().find(|&&s| {
                let s = s as i128;
                !((s - 2).pow(2) == kk || (s - 1).pow(2) <= k as i128 - 5)
            });
            let s0 = *bad.unwrap_or(&sa[0]);
            c.check("inv-salpha", INV_SALPHA, bad.is_none(), format!("s_alpha={s0}"), format!("k-2={kk}"));

            let ok = f <= k - 2
                || exact_sqrt((k - 2) as u128)
                    .is_some_and(|t| f == k + t as usize && sa.iter().all(|&s| f + 2 == k + s));
            c.check("inv-f-bound", INV_F_BOUND, ok, f, format!("k-2={}", k - 2));
        }
    }

    if r.order % 2 == 1 && r.f_blocks > 0 && r.order > 1 {
        let kk = (k - 2) as u128;
        let bad = r.block_data.iter().find(|&&(_, s, _)| {
            let formula = f == s * s.saturating_sub(1) / 2 + 1;
            let bound = 2 * f <= k || exact_sqrt(kk).is_some_and(|t| 2 * f == k + t as usize && t as usize + 1 == s);
            !(formula && bound)
        });
        let s = bad.unwrap_or(&r.block_data[0]).1;
        c.check("odd-f-bound", ODD_F_BOUND, bad.is_none(), f, format!("s_B={s} k={k}"));
    } else {
        c.na("odd-f-bound", ODD_F_BOUND, "not of odd order > 1 with a fixed block");
    }

    if r.order == 1 {
        c.na("f-bound", F_BOUND, "identity");
        c.na("f-4k/3", F_4K3, "identity");
    } else {
        let bound = k + isqrt((k - 2) as u128) as usize;
        c.check("f-bound", F_BOUND, f <= bound, f, bound);
        if k >= 6 {
            c.check("f-4k/3", F_4K3, 3 * f <= 4 * k, 3 * f, 4 * k);
        } else {
            c.na("f-4k/3", F_4K3, "k < 6");
        }
    }

    match exact_sqrt(v as u128) {
        Some(p) if is_prime(p as u64) && r.order == p as u64 => c.check("p2-fixfree", P2_FIXFREE, f == 0, f, 0),
        _ => c.na("p2-fixfree", P2_FIXFREE, "v is not p^2 or o(x) != p"),
    }
    c
}

fn x_fixes(r: &FixReport, p: usize) -> bool {
    r.fixed_points.binary_search(&p).is_ok()
}

/// The subdesign on the fixed points and fixed blocks of `x`, or the reason
/// the hypotheses `s_B > 0`, `r_B = 0` fail.
pub fn fixed_subdesign(d: &Design, x: &Perm) -> Result<std::result::Result<Subdesign, String>> {
    let r = fix_report(d, x)?;
    if r.block_data.is_empty() {
        return Ok(Err("no fixed block".into()));
    }
    if r.block_data.iter().any(|t| t.2 != 0) {
        return Ok(Err("r_B≠0".into()));
    }
    if r.block_data.iter().any(|t| t.1 == 0) {
        return Ok(Err("s_B=0".into()));
    }
    if !all_equal(r.block_data.iter().map(|t| t.1)) {
        return Ok(Err("s_B not constant".into()));
    }
    match restrict_subdesign(d, &r.fixed_points, &r.fixed_blocks)? {
        Some(s) => Ok(Ok(s)),
        None => Ok(Err("fixed structure is not a subdesign".into())),
    }
}

const CONJ_RATIO: &str = "|Omega|/f = u/u_1";
const CONJ_K: &str = "k < (sqrt(2)+4)u/2 + 1";
const CONJ_3U: &str = "k < 3u + 1";

/// `a < sqrt(2) * b` for `b > 0`, exactly.
fn lt_sqrt2_times(a: i128, b: i128) -> bool {
    a < 0 || a * a < 2 * b * b
}

/// Checks the conjugacy-count identity and the resulting upper bound on `k`
/// for an element `x` of a point-transitive automorphism group `g`.
pub fn certify_conjugacy_bound(d: &Design, g: &PermGroup, x: &Perm) -> Result<CertResult> {
    if !verify_symmetric_design(d).ok {
        return Err(Error::pre("conjugacy bound needs a verified design"));
    }
    if g.degree() != d.v() || !g.generators().iter().all(|h| d.is_automorphism(h)) {
        return Err(Error::pre("group does not act by automorphisms"));
    }
    if !g.is_transitive() {
        return Err(Error::pre("group is not point-transitive"));
    }
    let mut c = CertResult::default();
    let f = x.fixed_points().len();
    if x.is_identity() || f == 0 {
        for (n, s) in [("conj-ratio", CONJ_RATIO), ("conj-k", CONJ_K), ("conj-3u", CONJ_3U)] {
            c.na(n, s, "x is the identity or fixes no point");
        }
        return Ok(c);
    }
    let (u, u1) = g.conjugacy_counts(x, 0)?;
    let v = d.v() as u128;
    c.check("conj-ratio", CONJ_RATIO, v * u1 as u128 == f as u128 * u as u128, format!("{v}/{f}"), format!("{u}/{u1}"));
    // 2(k-1) < (sqrt 2 + 4) u  <=>  2(k-1) - 4u < sqrt 2 * u
    let k = d.k() as i128;
    let u = u as i128;
    c.check("conj-k", CONJ_K, lt_sqrt2_times(2 * (k - 1) - 4 * u, u), k, format!("(sqrt(2)+4)*{u}/2+1"));
    c.check("conj-3u", CONJ_3U, k < 3 * u + 1, k, 3 * u + 1);
    Ok(c)
}

/// Cycle types an element of the given prime-power order can have in the
/// automorphism group of a (121,16,2) biplane.
pub fn admissible_cycle_types_121(order: u64) -> Result<Vec<CycleType>> {
    let (p, e) = prime_power(order).ok_or_else(|| Error::input(format!("{order} is not a prime power > 1")))?;
    let t = |pairs: &[(usize, usize)]| CycleType::from_pairs(pairs);
    Ok(match (p, e) {
        (2, 1) => vec![t(&[(1, 13), (2, 54)]), t(&[(1, 9), (2, 56)])],
        (2, 2) => vec![t(&[(1, 3), (2, 5), (4, 27)]), t(&[(1, 7), (2, 3), (4, 27)]), t(&[(1, 1), (2, 4), (4, 28)])],
        (2, 3) => vec![t(&[(1, 1), (4, 2), (8, 14)])],
        (3, 1) => vec![t(&[(1, 1), (3, 40)]), t(&[(1, 7), (3, 38)])],
        (5, 1) => vec![t(&[(1, 1), (5, 24)])],
        (7, 1) => vec![t(&[(1, 2), (7, 17)])],
        (11, 1) => vec![t(&[(11, 11)])],
        (13, 1) => vec![t(&[(1, 4), (13, 9)])],
        _ => Vec::new(),
    })
}

/// Upper bound on the order of a Sylow `p`-subgroup, with its structure.
pub fn sylow_bound_121(p: u64) -> (u64, &'static str) {
    match p {
        2 => (128, "any"),
        3 => (9, "elementary abelian"),
        5 | 7 | 11 | 13 => (p, "cyclic"),
        _ => (1, "trivial"),
    }
}

pub fn sylow_bounds_121() -> BTreeMap<u64, (u64, &'static str)> {
    [2, 3, 5, 7, 11, 13].into_iter().map(|p| (p, sylow_bound_121(p))).collect()
}

/// Outcome of checking a (79,13,2) biplane against the classification of
/// its automorphism groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification79 {
    pub order: u128,
    pub generators: Vec<String>,
    pub cert: CertResult,
}

const ORDER_79: &str = "|Aut(D)| in {1, 3, 110}";
const THREE_79: &str = "3-group: every nontrivial element fixes exactly one point and one block, incident";

pub fn certify_79(d: &Design) -> Result<Classification79> {
    let p = d.params();
    if (p.v, p.k, p.lambda) != (79, 13, 2) {
        return Err(Error::input(format!("expected parameters (79,13,2), got {p}")));
    }
    let aut = automorphism_group(d)?;
    classification_checks_79(d, &aut.group)
}

/// The checks of [`certify_79`] applied to a given group of automorphisms
/// of `d`, without the parameter and verification gates.
pub fn classification_checks_79(d: &Design, group: &PermGroup) -> Result<Classification79> {
    if let Some(x) = group.generators().iter().find(|x| !d.is_automorphism(x)) {
        return Err(Error::input(format!("{x} is not an automorphism")));
    }
    let order = group.order();
    let mut cert = CertResult::default();
    cert.check("order-79", ORDER_79, matches!(order, 1 | 3 | 110), order, "1, 3 or 110");
    if order == 3 {
        let mut ok = true;
        let mut detail = String::new();
        for x in group.elements()?.iter().filter(|x| !x.is_identity()) {
            let r = fix_report_unchecked(d, x)?;
            let flag = r.f_points == 1 && r.f_blocks == 1 && d.incident(r.fixed_points[0], r.fixed_blocks[0]);
            if !flag {
                ok = false;
                detail = format!("{x}: f_points={} f_blocks={}", r.f_points, r.f_blocks);
            }
        }
        cert.check("three-79", THREE_79, ok, detail, "one fixed flag");
    } else {
        cert.na("three-79", THREE_79, "group is not a 3-group");
    }
    let generators = group.generators().iter().map(Perm::to_cycle_string).collect();
    Ok(Classification79 { order, generators, cert })
}
