use std::path::Path;
use std::sync::Arc;

use biplane_core::arith::{is_prime, prime_power};
use biplane_core::aut::{automorphism_group, canonical_form, flag_orbit_count};
use biplane_core::cartdecomp::{
    block_coordinate_pairs, pell_solutions, pell_solutions_up_to, preserved_by, psp4_degree_excluded, verify_cartesian,
    CartesianDecomposition, CartesianReport, PellSolution,
};
use biplane_core::catalog::{build, list_known};
use biplane_core::design::{
    brc_feasible, brc_feasible_by_search, brc_search_bound, dual, params_from_k, verify_symmetric_design, Violation,
};
use biplane_core::diffset::{develop, lander_excluded, search_difference_sets, DifferenceSet, GroupTable};
use biplane_core::fixcert::{
    admissible_cycle_types_121, certify_79, certify_conjugacy_bound, certify_fix_lemmas, certify_fix_lemmas_unchecked,
    fix_report, fixed_subdesign, sylow_bounds_121, Check, Status,
};
use biplane_core::io::{read_decomposition, read_design, read_group, write_design, AutFile, DesignFile};
use biplane_core::par::{map_collect, Exec};
use biplane_core::{are_isomorphic, Design, DesignParams, Error, Perm, Result};
use serde::Serialize;

use crate::cli::{CartCmd, CatalogCmd, Cli, Command, DsCmd, FeasibleCmd, FixArgs};
use crate::report::{fields, json, opt_yes_no, table, yes_no};
use crate::Outcome;

type Out = Result<(String, Outcome)>;

/// Malformed input is a usage problem (2); everything else means the
/// requested object failed a requirement (1).
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Io(_) | Error::Json(_) => 2,
        _ => 1,
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let j = cli.json;
    let (text, outcome) = match cli.command {
        Command::Catalog { action: CatalogCmd::List } => catalog_list(j),
        Command::Catalog { action: CatalogCmd::Build { name, output } } => catalog_build(&name, output.as_deref(), j),
        Command::Verify { design } => verify(&design, j),
        Command::Dual { design, output } => dual_cmd(&design, output.as_deref(), j),
        Command::Aut { design } => aut(&design, j),
        Command::Iso { first, second } => iso(&first, &second, j),
        Command::Ds { action } => match action {
            DsCmd::Search { group, k, lambda, translations_only } => ds_search(&group, k, lambda, translations_only, j),
            DsCmd::Develop { group, set, lambda, output } => ds_develop(&group, &set, lambda, output.as_deref(), j),
            DsCmd::Lander { v, k, lambda } => ds_lander(v, k, lambda, j),
        },
        Command::Fix(args) => fix(&args, j),
        Command::Cert121 { order } => cert121(order, j),
        Command::Cert79 { design } => cert79(&design, j),
        Command::Cart { action: CartCmd::Verify { design, cd, group } } => {
            cart_verify(&design, &cd, group.as_deref(), j)
        }
        Command::Pell { n, x_max } => pell(n, x_max, j),
        Command::Psp4 { q } => psp4(q, j),
        Command::Feasible { action } => match action {
            FeasibleCmd::Params { k } => feasible_params(k, j),
            FeasibleCmd::Brc { v, k, lambda, bound } => feasible_brc(v, k, lambda, bound, j),
        },
    }?;
    print!("{text}");
    Ok(outcome)
}

fn ok(text: String) -> Out {
    Ok((text, Outcome::Ok))
}

fn pass_if(text: String, pass: bool) -> Out {
    Ok((text, if pass { Outcome::Ok } else { Outcome::Failed }))
}

/// Writes `d` to `output`, or returns its JSON when no file is given.
fn emit_design(d: &Design, output: Option<&Path>, what: &str, j: bool) -> Result<String> {
    let Some(path) = output else {
        return Ok(json(&DesignFile::from_design(d)));
    };
    write_design(path, d)?;
    #[derive(Serialize)]
    struct Written<'a> {
        design: &'a str,
        params: DesignParams,
        output: String,
    }
    let w = Written { design: what, params: d.params(), output: path.display().to_string() };
    Ok(if j { json(&w) } else { format!("wrote {what} {} to {}\n", w.params, w.output) })
}

fn catalog_list(j: bool) -> Out {
    let all = list_known();
    if j {
        return ok(json(&all));
    }
    let rows: Vec<Vec<String>> = all
        .iter()
        .map(|e| {
            vec![
                e.name.to_string(),
                e.params.to_string(),
                e.examples.to_string(),
                e.aut_order.map_or("-".into(), |o| o.to_string()),
                opt_yes_no(e.transitive),
                opt_yes_no(e.flag_transitive),
                opt_yes_no(e.primitive),
                yes_no(e.constructible),
                e.recipe.to_string(),
            ]
        })
        .collect();
    ok(table(
        &["name", "params", "examples", "aut", "transitive", "flag-transitive", "primitive", "built", "recipe"],
        &rows,
    ))
}

fn catalog_build(name: &str, output: Option<&Path>, j: bool) -> Out {
    let d = build(name)?;
    ok(emit_design(&d, output, name, j)?)
}

fn violation_text(v: &Violation) -> String {
    match v {
        Violation::BlockSize { block, observed, expected } => {
            format!("block {block} has {observed} points, expected {expected}")
        }
        Violation::BlockCount { observed, expected } => format!("{observed} blocks, expected {expected}"),
        Violation::PairCount { pair, observed, expected } => {
            format!("points {} and {} lie on {observed} blocks, expected {expected}", pair.0, pair.1)
        }
        Violation::BlockIntersection { blocks, observed, expected } => {
            format!("blocks {} and {} meet in {observed} points, expected {expected}", blocks.0, blocks.1)
        }
    }
}

fn verify(path: &Path, j: bool) -> Out {
    let d = read_design(path)?;
    let r = verify_symmetric_design(&d);
    if j {
        #[derive(Serialize)]
        struct V<'a> {
            params: DesignParams,
            ok: bool,
            violations: &'a [Violation],
        }
        return pass_if(json(&V { params: d.params(), ok: r.ok, violations: &r.violations }), r.ok);
    }
    let mut s = if r.ok {
        format!("ok: symmetric {} design\n", d.params())
    } else {
        format!("FAIL: not a symmetric {} design ({} violations)\n", d.params(), r.violations.len())
    };
    for v in r.violations.iter().take(20) {
        s += &format!("  {}\n", violation_text(v));
    }
    if r.violations.len() > 20 {
        s += &format!("  ... {} more\n", r.violations.len() - 20);
    }
    pass_if(s, r.ok)
}

fn dual_cmd(path: &Path, output: Option<&Path>, j: bool) -> Out {
    let d = dual(&read_design(path)?)?;
    ok(emit_design(&d, output, "dual", j)?)
}

fn aut(path: &Path, j: bool) -> Out {
    let d = read_design(path)?;
    let a = automorphism_group(&d)?;
    if j {
        return ok(json(&AutFile::from(&a)));
    }
    let gens = a.generator_strings();
    let mut s = fields(&[
        ("order", a.order.to_string()),
        ("transitive", yes_no(a.group.is_transitive())),
        ("flag orbits", flag_orbit_count(&d, &a.group)?.to_string()),
        ("generators", gens.len().to_string()),
    ]);
    for g in gens {
        s += &format!("  {g}\n");
    }
    ok(s)
}

fn iso(first: &Path, second: &Path, j: bool) -> Out {
    let (a, b) = (read_design(first)?, read_design(second)?);
    let map = are_isomorphic(&a, &b)?;
    let certificates = [canonical_form(&a)?.hash, canonical_form(&b)?.hash];
    #[derive(Serialize)]
    struct I {
        isomorphic: bool,
        map: Option<String>,
        certificates: [String; 2],
    }
    let r = I { isomorphic: map.is_some(), map: map.map(|m| m.to_cycle_string()), certificates };
    if j {
        return ok(json(&r));
    }
    let mut pairs = vec![("isomorphic", yes_no(r.isomorphic))];
    if let Some(m) = &r.map {
        pairs.push(("map", m.clone()));
    }
    pairs.push(("certificate 1", r.certificates[0].clone()));
    pairs.push(("certificate 2", r.certificates[1].clone()));
    ok(fields(&pairs))
}

fn ds_search(tag: &str, k: usize, lambda: usize, translations_only: bool, j: bool) -> Out {
    let g = Arc::new(GroupTable::from_tag(tag)?);
    let aut = (!translations_only).then(|| g.automorphism_generators());
    let sets = search_difference_sets(&g, k, lambda, aut.as_deref(), Exec::default())?;
    #[derive(Serialize)]
    struct Class {
        set: Vec<usize>,
        aut_order: u128,
        certificate: String,
    }
    let classes = sets
        .iter()
        .map(|ds| {
            let d = develop(ds)?;
            Ok(Class {
                set: ds.elements.clone(),
                aut_order: automorphism_group(&d)?.order,
                certificate: canonical_form(&d)?.hash,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut certs: Vec<&str> = classes.iter().map(|c| c.certificate.as_str()).collect();
    certs.sort_unstable();
    certs.dedup();
    let distinct = certs.len();
    #[derive(Serialize)]
    struct S<'a> {
        group: &'a str,
        order: usize,
        k: usize,
        lambda: usize,
        equivalence: &'a str,
        classes: &'a [Class],
        distinct_designs: usize,
    }
    let equivalence = if translations_only { "translation" } else { "translation and automorphism" };
    if j {
        return ok(json(&S {
            group: g.name(),
            order: g.order(),
            k,
            lambda,
            equivalence,
            classes: &classes,
            distinct_designs: distinct,
        }));
    }
    let mut s = format!(
        "{} difference set classes in {} (order {}) with k={k}, lambda={lambda}, up to {equivalence}\n",
        classes.len(),
        g.name(),
        g.order()
    );
    if !classes.is_empty() {
        let rows: Vec<Vec<String>> = classes
            .iter()
            .map(|c| {
                let set: Vec<String> = c.set.iter().map(|x| x.to_string()).collect();
                vec![set.join(","), c.aut_order.to_string(), c.certificate[..16].to_string()]
            })
            .collect();
        s += &table(&["set", "aut", "certificate"], &rows);
    }
    s += &format!("distinct developments up to isomorphism: {distinct}\n");
    ok(s)
}

fn ds_develop(tag: &str, set: &[usize], lambda: Option<usize>, output: Option<&Path>, j: bool) -> Out {
    let g = Arc::new(GroupTable::from_tag(tag)?);
    let (v, k) = (g.order(), set.len());
    let lambda = match lambda {
        Some(l) => l,
        None if v > 1 && k * k.saturating_sub(1) % (v - 1) == 0 => k * (k - 1) / (v - 1),
        None => {
            return Err(Error::Input(format!(
                "k(k-1) = {} is not a multiple of v-1 = {}",
                k * k.saturating_sub(1),
                v - 1
            )))
        }
    };
    let ds = DifferenceSet::new(g, set, lambda)?;
    let d = develop(&ds)?;
    ok(emit_design(&d, output, "development", j)?)
}

fn ds_lander(v: u64, k: u64, lambda: u64, j: bool) -> Out {
    let p = DesignParams::new(v, k, lambda)?;
    let w = lander_excluded(&p)?;
    #[derive(Serialize)]
    struct Witness {
        pdiv: u64,
        q: u64,
        j: u64,
    }
    #[derive(Serialize)]
    struct L {
        params: DesignParams,
        excluded: bool,
        witness: Option<Witness>,
    }
    let r = L { params: p, excluded: w.is_some(), witness: w.map(|(pdiv, q, j)| Witness { pdiv, q, j }) };
    if j {
        return ok(json(&r));
    }
    ok(match w {
        Some((pdiv, q, jj)) => format!(
            "{p}: no difference set in any group of order {v}\nwitness ({pdiv},{q},{jj}): {q}^{jj} = -1 mod {pdiv}, {q} divides the square-free part of k-lambda = {}\n",
            p.order()
        ),
        None => format!("{p}: no Lander witness\n"),
    })
}

fn checks_table(checks: &[Check]) -> String {
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| vec![c.name.clone(), c.status.to_string(), c.lhs.clone(), c.rhs.clone(), c.statement.clone()])
        .collect();
    table(&["check", "status", "lhs", "rhs", "statement"], &rows)
}

fn one_based(ids: &[usize]) -> Vec<usize> {
    ids.iter().map(|i| i + 1).collect()
}

fn fix(args: &FixArgs, j: bool) -> Out {
    let d = read_design(&args.design)?;
    let Some(perm) = &args.perm else { return fix_sweep(&d, j) };
    let x = Perm::parse_cycles(perm, d.v())?;
    let r = fix_report(&d, &x)?;
    let mut checks = certify_fix_lemmas(&d, &x)?.checks;
    if let Some(gpath) = &args.group {
        let g = read_group(gpath)?;
        if !g.contains(&x) {
            return Err(Error::Input(format!("{} is not in the supplied group", x.to_cycle_string())));
        }
        checks.extend(certify_conjugacy_bound(&d, &g, &x)?.checks);
    }
    let subdesign = match fixed_subdesign(&d, &x)? {
        Ok(s) => format!("{} on {} points", s.params, s.points.len()),
        Err(why) => format!("none ({why})"),
    };
    let pass = checks.iter().all(|c| c.status != Status::Fail);
    #[derive(Serialize)]
    struct F<'a> {
        element: String,
        order: u64,
        point_cycle_type: String,
        block_cycle_type: String,
        fixed_points: Vec<usize>,
        fixed_blocks: Vec<usize>,
        subdesign: &'a str,
        ok: bool,
        checks: &'a [Check],
    }
    let f = F {
        element: x.to_cycle_string(),
        order: r.order,
        point_cycle_type: r.point_cycle_type.to_string(),
        block_cycle_type: r.block_cycle_type.to_string(),
        fixed_points: one_based(&r.fixed_points),
        fixed_blocks: one_based(&r.fixed_blocks),
        subdesign: &subdesign,
        ok: pass,
        checks: &checks,
    };
    if j {
        return pass_if(json(&f), pass);
    }
    let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
    let mut s = fields(&[
        ("element", f.element.clone()),
        ("order", f.order.to_string()),
        ("cycle type", format!("points {} / blocks {}", f.point_cycle_type, f.block_cycle_type)),
        ("fixed points", list(&f.fixed_points)),
        ("fixed blocks", list(&f.fixed_blocks)),
        ("subdesign", subdesign.clone()),
    ]);
    s += &checks_table(&checks);
    s += if pass { "all applicable checks pass\n" } else { "FAIL\n" };
    pass_if(s, pass)
}

fn fix_sweep(d: &Design, j: bool) -> Out {
    let a = automorphism_group(d)?;
    let elements: Vec<Perm> = a.group.elements()?.into_iter().filter(|x| !x.is_identity()).collect();
    let results = map_collect(Exec::default(), &elements, |x| certify_fix_lemmas_unchecked(d, x))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let count = |s: Status| results.iter().map(|c| c.count(s)).sum::<usize>();
    #[derive(Serialize)]
    struct Failure<'a> {
        element: String,
        check: &'a Check,
    }
    let failures: Vec<Failure> = elements
        .iter()
        .zip(&results)
        .flat_map(|(x, c)| c.failures().map(move |check| Failure { element: x.to_cycle_string(), check }))
        .collect();
    #[derive(Serialize)]
    struct Sweep<'a> {
        aut_order: u128,
        elements: usize,
        pass: usize,
        fail: usize,
        not_applicable: usize,
        failures: &'a [Failure<'a>],
    }
    let r = Sweep {
        aut_order: a.order,
        elements: elements.len(),
        pass: count(Status::Pass),
        fail: count(Status::Fail),
        not_applicable: count(Status::NotApplicable),
        failures: &failures,
    };
    let pass = failures.is_empty();
    if j {
        return pass_if(json(&r), pass);
    }
    let mut s = fields(&[
        ("aut order", r.aut_order.to_string()),
        ("elements", r.elements.to_string()),
        ("checks passed", r.pass.to_string()),
        ("checks failed", r.fail.to_string()),
        ("not applicable", r.not_applicable.to_string()),
    ]);
    for f in failures.iter().take(20) {
        s += &format!(
            "FAIL {} {}: {} vs {} ({})\n",
            f.element, f.check.name, f.check.lhs, f.check.rhs, f.check.statement
        );
    }
    pass_if(s, pass)
}

fn cert121(order: Option<u64>, j: bool) -> Out {
    let types =
        |o| -> Result<Vec<String>> { Ok(admissible_cycle_types_121(o)?.iter().map(|t| t.to_string()).collect()) };
    if let Some(o) = order {
        let t = types(o)?;
        #[derive(Serialize)]
        struct One {
            order: u64,
            cycle_types: Vec<String>,
        }
        if j {
            return ok(json(&One { order: o, cycle_types: t }));
        }
        if t.is_empty() {
            return ok(format!("order {o}: no admissible cycle types\n"));
        }
        return ok(t.iter().map(|t| format!("order {o}: {t}\n")).collect());
    }
    #[derive(Serialize)]
    struct Sylow {
        p: u64,
        bound: u64,
        structure: &'static str,
    }
    #[derive(Serialize)]
    struct Types {
        order: u64,
        cycle_types: Vec<String>,
    }
    #[derive(Serialize)]
    struct Full {
        lander_witness: Option<(u64, u64, u64)>,
        sylow: Vec<Sylow>,
        sylow_product: u64,
        cycle_types: Vec<Types>,
    }
    let sylow: Vec<Sylow> =
        sylow_bounds_121().into_iter().map(|(p, (bound, structure))| Sylow { p, bound, structure }).collect();
    let cycle_types = (2..=169u64)
        .filter(|&o| prime_power(o).is_some())
        .map(|o| Ok(Types { order: o, cycle_types: types(o)? }))
        .collect::<Result<Vec<_>>>()?;
    let full = Full {
        lander_witness: lander_excluded(&DesignParams::new(121, 16, 2)?)?,
        sylow_product: sylow.iter().map(|s| s.bound).product(),
        sylow,
        cycle_types,
    };
    if j {
        return ok(json(&full));
    }
    let mut s = match full.lander_witness {
        Some((p, q, jj)) => format!("not a development: Lander witness ({p},{q},{jj})\n"),
        None => "no Lander witness\n".into(),
    };
    let rows: Vec<Vec<String>> =
        full.sylow.iter().map(|y| vec![y.p.to_string(), y.bound.to_string(), y.structure.to_string()]).collect();
    s += &table(&["p", "sylow bound", "structure"], &rows);
    s += &format!("product {}\n", full.sylow_product);
    let rows: Vec<Vec<String>> = full
        .cycle_types
        .iter()
        .filter(|t| !t.cycle_types.is_empty() || !is_prime(t.order) || t.order <= 13)
        .map(|t| {
            let ts = if t.cycle_types.is_empty() { "none".into() } else { t.cycle_types.join("; ") };
            vec![t.order.to_string(), ts]
        })
        .collect();
    s += &table(&["order", "admissible cycle types"], &rows);
    s += "larger primes: none\n";
    ok(s)
}

fn cert79(path: &Path, j: bool) -> Out {
    let d = read_design(path)?;
    let c = certify_79(&d)?;
    let pass = c.cert.ok();
    if j {
        return pass_if(json(&c), pass);
    }
    let mut s = fields(&[("aut order", c.order.to_string()), ("generators", c.generators.join(" "))]);
    s += &checks_table(&c.cert.checks);
    pass_if(s, pass)
}

fn cart_verify(design: &Path, cd_path: &Path, group: Option<&Path>, j: bool) -> Out {
    let d = read_design(design)?;
    let cd = CartesianDecomposition::new(read_decomposition(cd_path)?);
    let report = verify_cartesian(&cd, d.v())?;
    #[derive(Serialize)]
    struct Pairs {
        c: usize,
        per_block: usize,
        all_blocks: bool,
        total: usize,
        expected_total: usize,
        exceeding: Vec<usize>,
    }
    #[derive(Serialize)]
    struct GroupInfo {
        order: u128,
        acts_on_design: bool,
        flag_orbits: Option<usize>,
        preserves: bool,
    }
    #[derive(Serialize)]
    struct C {
        decomposition: CartesianReport,
        block_pairs: Option<Pairs>,
        group: Option<GroupInfo>,
        aut_order: Option<u128>,
        preserved_by_aut: Option<bool>,
    }
    let mut out =
        C { decomposition: report.clone(), block_pairs: None, group: None, aut_order: None, preserved_by_aut: None };
    if report.ok {
        if cd.d() == 2 && report.homogeneous {
            let p = block_coordinate_pairs(&d, &cd)?;
            out.block_pairs = Some(Pairs {
                c: p.c,
                per_block: p.expected,
                all_blocks: p.all_expected(),
                total: p.total,
                expected_total: p.expected_total,
                exceeding: one_based(&p.exceeding),
            });
        }
        if let Some(gp) = group {
            let g = read_group(gp)?;
            if g.degree() != d.v() {
                return Err(Error::Input(format!("group degree {} differs from v = {}", g.degree(), d.v())));
            }
            let acts = g.generators().iter().all(|x| d.is_automorphism(x));
            out.group = Some(GroupInfo {
                order: g.order(),
                acts_on_design: acts,
                flag_orbits: if acts { Some(flag_orbit_count(&d, &g)?) } else { None },
                preserves: preserved_by(&cd, &g, false)?,
            });
        }
        if verify_symmetric_design(&d).ok {
            let a = automorphism_group(&d)?;
            out.aut_order = Some(a.order);
            out.preserved_by_aut = Some(preserved_by(&cd, &a.group, false)?);
        }
    }
    let pass = report.ok && out.group.as_ref().is_none_or(|g| g.preserves);
    if j {
        return pass_if(json(&out), pass);
    }
    let mut pairs = vec![
        ("cartesian", yes_no(report.ok)),
        ("partitions", report.d.to_string()),
        ("part counts", report.part_counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")),
        ("homogeneous", yes_no(report.homogeneous)),
    ];
    if let Some(reason) = &report.reason {
        pairs.push(("reason", reason.clone()));
    }
    if let Some(p) = &out.block_pairs {
        pairs.push((
            "coordinate pairs",
            format!(
                "{} per block: {}; total {} (2c^2(c-1) = {})",
                p.per_block,
                if p.all_blocks { "every block" } else { "not every block" },
                p.total,
                p.expected_total
            ),
        ));
    }
    if let Some(g) = &out.group {
        pairs.push(("group order", g.order.to_string()));
        pairs.push(("group acts on design", yes_no(g.acts_on_design)));
        if let Some(f) = g.flag_orbits {
            pairs.push(("group flag orbits", f.to_string()));
        }
        pairs.push(("preserved by group", yes_no(g.preserves)));
    }
    if let (Some(o), Some(p)) = (out.aut_order, out.preserved_by_aut) {
        pairs.push(("aut order", o.to_string()));
        pairs.push(("preserved by aut", yes_no(p)));
    }
    pass_if(fields(&pairs), pass)
}

fn pell(n: Option<u32>, x_max: Option<u64>, j: bool) -> Out {
    let sols: Vec<PellSolution> = match (n, x_max) {
        (Some(n), _) => pell_solutions(n),
        (None, Some(x)) => pell_solutions_up_to(x),
        (None, None) => return Err(Error::Input("give --n or --x-max".into())),
    };
    #[derive(Serialize)]
    struct Row {
        n: u32,
        family: u8,
        x: String,
        y: String,
        x_mod_3: u8,
    }
    let rows: Vec<Row> = sols
        .iter()
        .map(|s| {
            let r = (&s.x % 3u32).to_string().parse().expect("small residue");
            Row { n: s.n, family: s.family, x: s.x.to_string(), y: s.y.to_string(), x_mod_3: r }
        })
        .collect();
    let pass = sols.iter().all(PellSolution::satisfies);
    if j {
        return pass_if(json(&rows), pass);
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.n.to_string(), r.family.to_string(), r.x.clone(), r.y.clone(), r.x_mod_3.to_string()])
        .collect();
    pass_if(table(&["n", "family", "x", "y", "x mod 3"], &cells), pass)
}

fn psp4(q: u64, j: bool) -> Out {
    let r = psp4_degree_excluded(q)?;
    if j {
        return pass_if(json(&r), r.excluded);
    }
    let s = fields(&[
        ("q", r.q.to_string()),
        ("c = q^2(q^2-1)/2", r.c.to_string()),
        ("8c^2 - 7", r.eight_c2_minus_7.to_string()),
        ("8c^2 - 7 square", yes_no(r.is_square)),
        ("c mod 3", r.c_mod_3.to_string()),
        ("Pell x = +-1 mod 3", yes_no(r.pell_residues_nonzero)),
        ("excluded", yes_no(r.excluded)),
    ]);
    pass_if(s, r.excluded)
}

fn feasible_params(k: u64, j: bool) -> Out {
    let p = params_from_k(k)?;
    let brc = brc_feasible(&p)?;
    let lander = lander_excluded(&p)?;
    #[derive(Serialize)]
    struct F {
        params: DesignParams,
        order: u64,
        brc: bool,
        lander_witness: Option<(u64, u64, u64)>,
    }
    let f = F { params: p, order: p.order(), brc, lander_witness: lander };
    if j {
        return ok(json(&f));
    }
    ok(fields(&[
        ("params", p.to_string()),
        ("k - lambda", p.order().to_string()),
        ("BRC", if brc { "passes" } else { "fails" }.to_string()),
        ("Lander witness", lander.map_or("none".into(), |(a, b, c)| format!("({a},{b},{c})"))),
    ]))
}

fn feasible_brc(v: u64, k: u64, lambda: u64, bound: Option<u64>, j: bool) -> Out {
    let p = DesignParams::new(v, k, lambda)?;
    let hilbert = brc_feasible(&p)?;
    let bound = bound.unwrap_or_else(|| brc_search_bound(&p));
    let search = brc_feasible_by_search(&p, bound, Exec::default())?;
    #[derive(Serialize)]
    struct B {
        params: DesignParams,
        feasible: bool,
        by_search: bool,
        search_bound: u64,
        agree: bool,
    }
    let b = B { params: p, feasible: hilbert, by_search: search, search_bound: bound, agree: hilbert == search };
    if j {
        return pass_if(json(&b), b.agree);
    }
    let s = fields(&[
        ("params", p.to_string()),
        ("BRC (Hilbert symbols)", if hilbert { "feasible" } else { "infeasible" }.to_string()),
        ("BRC (search)", format!("{} (bound {bound})", if search { "feasible" } else { "no solution" })),
        ("routes agree", yes_no(b.agree)),
    ]);
    pass_if(s, b.agree)
}
