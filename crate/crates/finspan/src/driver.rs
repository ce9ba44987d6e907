//! Batch command dispatch: resolve inputs (builtin or file), run the
//! requested verification, and assemble a deterministic report.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use serde_json::json;

use crate::catalog;
use crate::catfun::{check_biadjointable, CatFunctor};
use crate::classes::{self, MorphismFamily};
use crate::extend;
use crate::fincat::FinCat;
use crate::limits::PullbackMemo;
use crate::report::{check_from_verdict, Check, CheckVerdict, Report};
use crate::span2::{self, SpanTwoCtx};
use crate::spancat;
use crate::Guards;

#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] crate::textfmt::ParseError),
    #[error("category invalid: {0:?}")]
    Invalid(Vec<crate::fincat::CatViolation>),
    #[error("{0}")]
    Other(String),
}

#[derive(Clone, Debug)]
pub enum InputRef {
    Builtin(String),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: String,
    pub input: InputRef,
    /// family letters (E, I, P, B, F) to family specs
    pub families: BTreeMap<String, String>,
    pub indexing: Option<String>,
    pub guards: Guards,
    pub seed: u64,
    pub segal_n: Option<usize>,
    pub morphism: Option<String>,
    pub free_object: Option<String>,
    pub witness: Option<serde_json::Value>,
}

impl RunConfig {
    pub fn new(command: &str, input: InputRef) -> RunConfig {
        RunConfig {
            command: command.to_string(),
            input,
            families: BTreeMap::new(),
            indexing: None,
            guards: Guards::default(),
            seed: 0,
            segal_n: None,
            morphism: None,
            free_object: None,
            witness: None,
        }
    }
}

pub struct ResolvedInput {
    pub cat: Arc<FinCat>,
    pub spec: Option<crate::textfmt::CategorySpec>,
    pub base_dir: PathBuf,
    pub label: String,
}

pub fn resolve_input(input: &InputRef) -> Result<ResolvedInput, DriverError> {
    match input {
        InputRef::Builtin(name) => {
            let cat = match name.as_str() {
                "finset1" => catalog::gen_finset(1),
                "finset2" => catalog::gen_finset(2),
                "finset3" => catalog::gen_finset(3),
                "finset4" => catalog::gen_finset(4),
                "divlat6" => catalog::gen_divisor_lattice(6),
                "divlat12" => catalog::gen_divisor_lattice(12),
                "c2sets2" => catalog::gen_gset_c2(),
                other => return Err(DriverError::Usage(format!("unknown builtin `{other}`"))),
            };
            Ok(ResolvedInput {
                cat,
                spec: None,
                base_dir: PathBuf::from("."),
                label: format!("builtin:{name}"),
            })
        }
        InputRef::File(path) => {
            let spec = crate::textfmt::load_category_file(path)?;
            let cat = FinCat::validate(&spec.raw).map_err(DriverError::Invalid)?;
            Ok(ResolvedInput {
                cat,
                spec: Some(spec),
                base_dir: path.parent().unwrap_or(std::path::Path::new(".")).to_path_buf(),
                label: path.display().to_string(),
            })
        }
    }
}

fn is_epi(cat: &FinCat, f: Mor) -> bool {
    let t = cat.tgt(f);
    for w in cat.objects() {
        for &g in cat.hom(t, w) {
            for &h in cat.hom(t, w) {
                if g != h && cat.comp(g, f) == cat.comp(h, f) {
                    return false;
                }
            }
        }
    }
    true
}

use crate::fincat::Mor;

pub fn resolve_family(
    resolved: &ResolvedInput,
    spec_str: &str,
) -> Result<MorphismFamily, DriverError> {
    let cat = &resolved.cat;
    match spec_str {
        "all" => Ok(MorphismFamily::all(cat, "all")),
        "iso" => Ok(MorphismFamily::isos(cat, "iso")),
        "id" | "ids" => Ok(MorphismFamily::identities(cat, "ids")),
        "inj" | "mono" => Ok(MorphismFamily::from_predicate(cat, "inj", classes::is_mono)),
        "surj" | "epi" => Ok(MorphismFamily::from_predicate(cat, "surj", is_epi)),
        name => {
            let spec = resolved
                .spec
                .as_ref()
                .ok_or_else(|| DriverError::Usage(format!("family `{name}` needs a file input")))?;
            let (_, wide, members) = spec
                .families
                .iter()
                .find(|(n, _, _)| n == name)
                .ok_or_else(|| DriverError::Usage(format!("unknown family `{name}`")))?;
            let mut mors: Vec<Mor> = Vec::new();
            for m in members {
                mors.push(
                    cat.mor_by_name(m)
                        .ok_or_else(|| DriverError::Usage(format!("unknown morphism `{m}`")))?,
                );
            }
            let fam = MorphismFamily::from_members(cat, name, mors);
            Ok(if *wide { fam.with_identities() } else { fam })
        }
    }
}

fn family_or(
    resolved: &ResolvedInput,
    cfg: &RunConfig,
    letter: &str,
    default: &str,
) -> Result<MorphismFamily, DriverError> {
    let spec = cfg.families.get(letter).map(|s| s.as_str()).unwrap_or(default);
    resolve_family(resolved, spec)
}

pub fn resolve_indexing(
    resolved: &ResolvedInput,
    cfg: &RunConfig,
    ctx: &SpanTwoCtx,
) -> Result<CatFunctor, DriverError> {
    let spec_str = cfg
        .indexing
        .as_deref()
        .ok_or_else(|| DriverError::Usage("--indexing required".into()))?;
    if let Some(rest) = spec_str.strip_prefix("builtin:") {
        if rest == "subsets" {
            return Ok(catalog::subset_poset_indexing(&resolved.cat));
        }
        if rest == "downsets" {
            return Ok(catalog::downset_indexing(&resolved.cat));
        }
        if let Some(obj) = rest.strip_prefix("free:") {
            let a = resolved
                .cat
                .object_by_name(obj)
                .ok_or_else(|| DriverError::Usage(format!("unknown object `{obj}`")))?;
            let free = extend::free_biadjointable(ctx, a, &cfg.guards)
                .map_err(|e| DriverError::Other(e.to_string()))?;
            return Ok(free.functor);
        }
        return Err(DriverError::Usage(format!("unknown builtin indexing `{rest}`")));
    }
    let spec = resolved
        .spec
        .as_ref()
        .ok_or_else(|| DriverError::Usage("file indexing needs a file input".into()))?;
    let f = crate::textfmt::load_indexing(spec, spec_str, &resolved.cat, &resolved.base_dir)?;
    f.check_strict().map_err(|e| DriverError::Other(e.to_string()))?;
    Ok(f)
}

/// Seed-rotated copy of an index range; exploration order only, verdicts and
/// report ordering never depend on it.
fn rotated(n: usize, seed: u64) -> Vec<usize> {
    if n == 0 {
        return vec![];
    }
    let k = (seed % n as u64) as usize;
    (0..n).map(|i| (i + k) % n).collect()
}

pub fn run(cfg: &RunConfig) -> Result<Report, DriverError> {
    match cfg.command.as_str() {
        "check-decomposition" => cmd_check_decomposition(cfg),
        "build-span" => cmd_build_span(cfg),
        "build-span2" => cmd_build_span2(cfg),
        "check-biadjointable" => cmd_check_biadjointable(cfg),
        "extend" => cmd_extend(cfg, false),
        "verify-extension" => cmd_extend(cfg, true),
        "factorization-category" => cmd_factorization_category(cfg),
        "segal-compare" => cmd_segal_compare(cfg),
        "check-projection" => cmd_check_projection(cfg),
        "recheck" => cmd_recheck(cfg),
        other => Err(DriverError::Usage(format!("unknown command `{other}`"))),
    }
}

fn base_report(cfg: &RunConfig, resolved: &ResolvedInput) -> Report {
    let mut r = Report::new(&cfg.command);
    r.input("input", &resolved.label);
    for (k, v) in &cfg.families {
        r.input(&format!("family_{k}"), v);
    }
    if let Some(ix) = &cfg.indexing {
        r.input("indexing", ix);
    }
    r.input("guard_objects", &cfg.guards.max_objects.to_string());
    r.input("guard_enum", &cfg.guards.max_enum.to_string());
    r
}

fn cmd_check_decomposition(cfg: &RunConfig) -> Result<Report, DriverError> {
    let resolved = resolve_input(&cfg.input)?;
    let e = family_or(&resolved, cfg, "E", "all")?;
    let i = family_or(&resolved, cfg, "I", "all")?;
    let p = family_or(&resolved, cfg, "P", "all")?;
    let mut report = base_report(cfg, &resolved);
    let dec = classes::check_suitable_decomposition(&e, &i, &p);
    for (name, v) in dec.all_verdicts() {
        let mut check = check_from_verdict(name, v);
        if let CheckVerdict::Fail = check.verdict {
            // tag the witness with family context for recheck
            if let serde_json::Value::Object(map) = &mut check.witness {
                let fam = if name.starts_with("i_") {
                    "I"
                } else if name.starts_with("p_") {
                    "P"
                } else {
                    "E"
                };
                map.insert("family".to_string(), json!(fam));
                let kind = if name.ends_with("wide") {
                    "wide"
                } else if name.ends_with("left_cancellable") {
                    "left_cancellable"
                } else if name.ends_with("comp_closed") {
                    "composition_closed"
                } else if name.ends_with("base_change") {
                    "base_change"
                } else if name.ends_with("factors") {
                    "no_factorization"
                } else {
                    "other"
                };
                map.insert("kind".to_string(), json!(kind));
            }
        }
        report.checks.push(check);
    }
    report.checks.push(Check {
        name: "truncation_note".into(),
        verdict: CheckVerdict::Pass,
        witness: json!({ "note": dec.truncation_note, "monos": dec.i_cap_p_monos }),
        instances: dec.i_cap_p_monos.len() as u64,
        untestable: 0,
    });
    // factorization contractibility per designated morphism
    if dec.passed() {
        let c = &resolved.cat;
        let members: Vec<Mor> = e.members().collect();
        let order = rotated(members.len(), cfg.seed);
        let mut all_ok = true;
        let mut first_fail = serde_json::Value::Null;
        let mut count = 0;
        for &ix in &order {
            let m = members[ix];
            match classes::factorization_category(c, m, &i, &p) {
                Err(err) => {
                    all_ok = false;
                    first_fail = json!({ "kind": "no_factorization", "e": err.0 });
                    break;
                }
                Ok(fc) => {
                    count += 1;
                    if !classes::is_cofiltered(&fc.cat).passed()
                        || !classes::is_connected(&fc.cat).passed()
                    {
                        all_ok = false;
                        first_fail = json!({
                            "kind": "not_contractible",
                            "e": c.mor_name(m),
                        });
                        break;
                    }
                }
            }
        }
        report.checks.push(if all_ok {
            Check::pass("factorization_contractibility", count, 0)
        } else {
            Check::fail("factorization_contractibility", first_fail)
        });
    }
    Ok(report)
}

fn cmd_build_span(cfg: &RunConfig) -> Result<Report, DriverError> {
    let resolved = resolve_input(&cfg.input)?;
    let b = family_or(&resolved, cfg, "B", "all")?;
    let f = family_or(&resolved, cfg, "F", "all")?;
    let mut report = base_report(cfg, &resolved);
    match spancat::check_adequate(&resolved.cat, &b, &f) {
        Err(w) => {
            report.checks.push(Check::fail("adequate", serde_json::to_value(&w).unwrap()));
        }
        Ok(triple) => {
            report.checks.push(Check::pass("adequate", triple.checked_cospans, 0));
            match spancat::build_span_category(&triple, &cfg.guards) {
                Err(e) => report.checks.push(Check::untestable("span_category", &e.to_string())),
                Ok(span) => {
                    report.checks.push(Check::pass(
                        "span_category",
                        span.cat.n_morphisms() as u64,
                        if span.assoc_checked { 0 } else { 1 },
                    ));
                    if !span.assoc_checked {
                        report
                            .checks
                            .push(Check::untestable("span_associativity", "guard exceeded"));
                    } else {
                        report.checks.push(Check::pass(
                            "span_associativity",
                            span.cat.n_morphisms() as u64,
                            0,
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn cmd_build_span2(cfg: &RunConfig) -> Result<Report, DriverError> {
    let resolved = resolve_input(&cfg.input)?;
    let e = family_or(&resolved, cfg, "E", "all")?;
    let i = family_or(&resolved, cfg, "I", "all")?;
    let p = family_or(&resolved, cfg, "P", "all")?;
    let mut report = base_report(cfg, &resolved);
    let ctx = SpanTwoCtx::new(&resolved.cat, &e, &i, &p);
    let s2 = span2::build_span2(ctx, &cfg.guards).map_err(|e| DriverError::Other(e.to_string()))?;
    let built = s2.homs.iter().filter(|h| h.is_some()).count();
    report.checks.push(Check {
        name: "hom_categories".into(),
        verdict: CheckVerdict::Pass,
        witness: json!({ "untestable_pairs": s2.untestable }),
        instances: built as u64,
        untestable: s2.untestable.len() as u64,
    });
    match span2::underlying_one_category(&s2, &cfg.guards) {
        Err(err) => report.checks.push(Check::untestable("underlying_category", &err.to_string())),
        Ok(cmp) => report.checks.push(if cmp.is_isomorphism {
            Check::pass("underlying_category", cmp.underlying.cat.n_morphisms() as u64, 0)
        } else {
            Check::fail("underlying_category", json!({ "kind": "not_isomorphic" }))
        }),
    }
    // adjoint witnesses for every designated morphism
    let mut memo = PullbackMemo::new();
    let c = &s2.ctx.cat;
    let mut left_ok = 0;
    let mut fail = serde_json::Value::Null;
    for m in s2.ctx.i.members() {
        match span2::unit_counit_witnesses(&s2.ctx, &mut memo, m) {
            Ok(w) if w.triangles_pass() => left_ok += 1,
            _ => {
                fail = json!({ "kind": "triangle", "i": c.mor_name(m) });
                break;
            }
        }
    }
    report.checks.push(if fail.is_null() {
        Check::pass("left_adjoint_witnesses", left_ok, 0)
    } else {
        Check::fail("left_adjoint_witnesses", fail)
    });
    let mut right_ok = 0;
    let mut fail = serde_json::Value::Null;
    for m in s2.ctx.p.members() {
        match span2::unit_counit_witnesses_dual(&s2.ctx, &mut memo, m) {
            Ok(w) if w.triangles_pass() => right_ok += 1,
            _ => {
                fail = json!({ "kind": "triangle_dual", "p": c.mor_name(m) });
                break;
            }
        }
    }
    report.checks.push(if fail.is_null() {
        Check::pass("right_adjoint_witnesses", right_ok, 0)
    } else {
        Check::fail("right_adjoint_witnesses", fail)
    });
    Ok(report)
}

fn cmd_check_biadjointable(cfg: &RunConfig) -> Result<Report, DriverError> {
    let resolved = resolve_input(&cfg.input)?;
    let e = family_or(&resolved, cfg, "E", "all")?;
    let i = family_or(&resolved, cfg, "I", "all")?;
    let p = family_or(&resolved, cfg, "P", "all")?;
    let ctx = SpanTwoCtx::new(&resolved.cat, &e, &i, &p);
    let f = resolve_indexing(&resolved, cfg, &ctx)?;
    let mut report = base_report(cfg, &resolved);
    f.check_strict().map_err(|err| DriverError::Other(err.to_string()))?;
    report.checks.push(Check::pass("strictness", resolved.cat.n_morphisms() as u64, 0));
    let rep = check_biadjointable(&f, &i, &p);
    for (name, sweep) in
        [("left_i_adjointable", &rep.left), ("right_p_adjointable", &rep.right), ("mixed_double", &rep.mixed)]
    {
        report.checks.push(if sweep.failures.is_empty() {
            Check::pass(name, sweep.checked, sweep.untestable)
        } else {
            let w = &sweep.failures[0];
            Check {
                name: name.to_string(),
                verdict: CheckVerdict::Fail,
                witness: json!({
                    "kind": "bc_double",
                    "bottom": w.bottom,
                    "right": w.right,
                    "stage": w.stage,
                    "component": w.component,
                }),
                instances: sweep.checked,
                untestable: sweep.untestable,
            }
        });
    }
    Ok(report)
}

fn cmd_extend(cfg: &RunConfig, full: bool) -> Result<Report, DriverError> {
    let resolved = resolve_input(&cfg.input)?;
    let e = family_or(&resolved, cfg, "E", "all")?;
    let i = family_or(&resolved, cfg, "I", "all")?;
    let p = family_or(&resolved, cfg, "P", "all")?;
    let ctx = SpanTwoCtx::new(&resolved.cat, &e, &i, &p);
    let f = resolve_indexing(&resolved, cfg, &ctx)?;
    let mut report = base_report(cfg, &resolved);
    let ctx2 = SpanTwoCtx::new(&resolved.cat, &e, &i, &p);
    let mut formalism = match extend::build_formalism(ctx2, f) {
        Err(err) => {
            report.checks.push(Check::fail(
                "prerequisites",
                json!({ "kind": "prerequisite", "detail": err.to_string() }),
            ));
            return Ok(report);
        }
        Ok(d) => {
            report.checks.push(Check::pass("prerequisites", 1, 0));
            d
        }
    };
    let c = resolved.cat.clone();
    // factorization independence for all designated morphisms and pairs
    let mut pairs = 0;
    let mut fail = serde_json::Value::Null;
    'outer: for m in e.members() {
        let facs = classes::factorizations(&c, m, &i, &p)
            .map_err(|err| DriverError::Other(err.to_string()))?;
        for &f1 in &facs {
            for &f2 in &facs {
                match formalism.factorization_independence(m, f1, f2) {
                    Ok(w) if w.iso.is_invertible() => pairs += 1,
                    _ => {
                        fail = json!({ "kind": "independence", "e": c.mor_name(m) });
                        break 'outer;
                    }
                }
            }
        }
    }
    report.checks.push(if fail.is_null() {
        Check::pass("factorization_independence", pairs, 0)
    } else {
        Check::fail("factorization_independence", fail)
    });
    if !full {
        return Ok(report);
    }
    // functoriality over composable span pairs
    let all = MorphismFamily::all(&c, "all");
    let triple = spancat::check_adequate(&c, &all, &e)
        .map_err(|err| DriverError::Other(format!("{err:?}")))?;
    match spancat::build_span_category(&triple, &cfg.guards) {
        Err(err) => report.checks.push(Check::untestable("one_functoriality", &err.to_string())),
        Ok(spans) => {
            let mut checked = 0;
            let mut fail = serde_json::Value::Null;
            'fun: for m1 in spans.cat.morphisms() {
                for m2 in spans.cat.morphisms() {
                    if spans.cat.tgt(m1) != spans.cat.src(m2) {
                        continue;
                    }
                    match formalism.one_functoriality(spans.rep(m1), spans.rep(m2)) {
                        Ok(w) if w.ok => checked += 1,
                        _ => {
                            fail = json!({
                                "kind": "functoriality",
                                "s": spans.cat.mor_name(m1),
                                "t": spans.cat.mor_name(m2),
                            });
                            break 'fun;
                        }
                    }
                }
            }
            report.checks.push(if fail.is_null() {
                Check::pass("one_functoriality", checked, 0)
            } else {
                Check::fail("one_functoriality", fail)
            });
        }
    }
    // ambidexterity of designated morphisms lying in both families
    let mut amb = 0;
    let mut fail = serde_json::Value::Null;
    for m in e.members() {
        if !(i.contains(m) && p.contains(m)) {
            continue;
        }
        let left_fac = (m, c.identity(c.tgt(m)));
        let right_fac = (c.identity(c.src(m)), m);
        match formalism.factorization_independence(m, left_fac, right_fac) {
            Ok(w) if w.iso.is_invertible() => amb += 1,
            _ => {
                fail = json!({ "kind": "ambidexterity", "e": c.mor_name(m) });
                break;
            }
        }
    }
    report.checks.push(if fail.is_null() {
        Check::pass("ambidexterity", amb, 0)
    } else {
        Check::fail("ambidexterity", fail)
    });
    Ok(report)
}

fn cmd_factorization_category(cfg: &RunConfig) -> Result<Report, DriverError> {
    let resolved = resolve_input(&cfg.input)?;
    let i = family_or(&resolved, cfg, "I", "all")?;
    let p = family_or(&resolved, cfg, "P", "all")?;
    let mname = cfg
        .morphism
        .as_deref()
        .ok_or_else(|| DriverError::Usage("--morphism required".into()))?;
    let m = resolved
        .cat
        .mor_by_name(mname)
        .ok_or_else(|| DriverError::Usage(format!("unknown morphism `{mname}`")))?;
    let mut report = base_report(cfg, &resolved);
    report.input("morphism", mname);
    match classes::factorization_category(&resolved.cat, m, &i, &p) {
        Err(err) => report.checks.push(Check::fail(
            "factorizations",
            json!({ "kind": "no_factorization", "e": err.0 }),
        )),
        Ok(fc) => {
            report.checks.push(Check::pass("factorizations", fc.cat.n_objects() as u64, 0));
            report.checks.push(check_from_verdict("cofiltered", &classes::is_cofiltered(&fc.cat)));
            report.checks.push(check_from_verdict("connected", &classes::is_connected(&fc.cat)));
        }
    }
    Ok(report)
}

fn cmd_segal_compare(cfg: &RunConfig) -> Result<Report, DriverError> {
    let resolved = resolve_input(&cfg.input)?;
    let b = family_or(&resolved, cfg, "B", "all")?;
    let f = family_or(&resolved, cfg, "F", "all")?;
    let mut report = base_report(cfg, &resolved);
    let triple = match spancat::check_adequate(&resolved.cat, &b, &f) {
        Err(w) => {
            report.checks.push(Check::fail("adequate", serde_json::to_value(&w).unwrap()));
            return Ok(report);
        }
        Ok(t) => t,
    };
    let span = match spancat::build_span_category(&triple, &cfg.guards) {
        Err(e) => {
            report.checks.push(Check::untestable("span_category", &e.to_string()));
            return Ok(report);
        }
        Ok(s) => s,
    };
    let ns: Vec<usize> = match cfg.segal_n {
        Some(n) => vec![n],
        None => vec![0, 1, 2, 3],
    };
    for n in ns {
        let name = format!("segal_n{n}");
        match spancat::segal_compare(n, &triple, &span, &cfg.guards) {
            Err(spancat::SpanError::Guard(g)) => {
                report.checks.push(Check::untestable(&name, &g.to_string()))
            }
            Err(e) => report.checks.push(Check::fail(&name, json!({ "error": e.to_string() }))),
            Ok(rep) => report.checks.push(if rep.equal {
                Check::pass(&name, rep.count_functors, 0)
            } else {
                Check::fail(
                    &name,
                    json!({
                        "kind": "segal",
                        "count_functors": rep.count_functors,
                        "count_adtrip_maps": rep.count_adtrip_maps,
                    }),
                )
            }),
        }
    }
    Ok(report)
}

fn cmd_check_projection(cfg: &RunConfig) -> Result<Report, DriverError> {
    let resolved = resolve_input(&cfg.input)?;
    let e = family_or(&resolved, cfg, "E", "all")?;
    let i = family_or(&resolved, cfg, "I", "all")?;
    let p = family_or(&resolved, cfg, "P", "all")?;
    let ctx = SpanTwoCtx::new(&resolved.cat, &e, &i, &p);
    let f = resolve_indexing(&resolved, cfg, &ctx)?;
    let mut report = base_report(cfg, &resolved);
    let tensors = crate::monoidal::fiber_tensors(&f)
        .map_err(|err| DriverError::Other(err.to_string()))?;
    let rep = crate::monoidal::check_projection_formulas(&f, &i, &p, &tensors);
    let frob_fail = rep.frobenius.iter().find(|(_, ok, _)| !ok);
    report.checks.push(match frob_fail {
        None => Check::pass("projection_formula", rep.frobenius.len() as u64, rep.untestable),
        Some((name, _, w)) => Check::fail(
            "projection_formula",
            json!({ "kind": "frobenius", "i": name, "pair": w }),
        ),
    });
    let dual_fail = rep.dual.iter().find(|(_, ok, _)| !ok);
    report.checks.push(match dual_fail {
        None => Check::pass("dual_projection_formula", rep.dual.len() as u64, rep.untestable),
        Some((name, _, w)) => Check::fail(
            "dual_projection_formula",
            json!({ "kind": "dual_frobenius", "p": name, "pair": w }),
        ),
    });
    Ok(report)
}

fn cmd_recheck(cfg: &RunConfig) -> Result<Report, DriverError> {
    let resolved = resolve_input(&cfg.input)?;
    let witness = cfg
        .witness
        .clone()
        .ok_or_else(|| DriverError::Usage("--witness-file required".into()))?;
    let mut fams: BTreeMap<String, MorphismFamily> = BTreeMap::new();
    for letter in ["E", "I", "P", "B", "F"] {
        if let Some(spec) = cfg.families.get(letter) {
            fams.insert(letter.to_string(), resolve_family(&resolved, spec)?);
        }
    }
    let mut report = base_report(cfg, &resolved);
    match crate::report::recheck(&resolved.cat, &fams, &witness) {
        Err(e) => report.checks.push(Check::fail("recheck", json!({ "error": e }))),
        Ok(reproduced) => report.checks.push(if reproduced {
            Check::pass("recheck", 1, 0)
        } else {
            Check::fail("recheck", json!({ "kind": "not_reproduced" }))
        }),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtin(cmd: &str, name: &str) -> RunConfig {
        RunConfig::new(cmd, InputRef::Builtin(name.to_string()))
    }

    #[test]
    fn decomposition_pass_and_fail() {
        let mut cfg = builtin("check-decomposition", "divlat12");
        let rep = run(&cfg).unwrap();
        assert!(rep.all_passed());

        cfg = builtin("check-decomposition", "finset2");
        cfg.families.insert("E".into(), "all".into());
        cfg.families.insert("I".into(), "inj".into());
        cfg.families.insert("P".into(), "surj".into());
        let rep = run(&cfg).unwrap();
        assert!(!rep.all_passed());
        let failing: Vec<_> = rep
            .checks
            .iter()
            .filter(|c| c.verdict == CheckVerdict::Fail)
            .map(|c| c.name.clone())
            .collect();
        assert!(failing.contains(&"p_left_cancellable".to_string()));
    }

    #[test]
    fn seed_does_not_change_reports() {
        let mut cfg = builtin("check-decomposition", "finset2");
        cfg.families.insert("E".into(), "inj".into());
        cfg.families.insert("I".into(), "inj".into());
        cfg.families.insert("P".into(), "inj".into());
        let r1 = run(&cfg).unwrap().machine_json();
        cfg.seed = 12345;
        let r2 = run(&cfg).unwrap().machine_json();
        assert_eq!(r1, r2);
    }

    #[test]
    fn segal_command_on_divlat6() {
        let mut cfg = builtin("segal-compare", "divlat6");
        cfg.families.insert("B".into(), "all".into());
        cfg.families.insert("F".into(), "all".into());
        cfg.guards = Guards::wide();
        let rep = run(&cfg).unwrap();
        assert!(rep.all_passed(), "{}", rep.machine_json());
    }

    #[test]
    fn verify_extension_on_divlat6_free() {
        let mut cfg = builtin("verify-extension", "divlat6");
        cfg.indexing = Some("builtin:free:d06".into());
        cfg.guards = Guards::wide();
        let rep = run(&cfg).unwrap();
        assert!(rep.all_passed(), "{}", rep.machine_json());
    }
}
