use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use modcat::centerdata::{
    self, check_cp_criteria, double_modular_data, gauss_charge, pointed_modular_data, verlinde_fusion, ModularData,
};
use modcat::cyclotomic::CycloNumber;
use modcat::extlab::{
    self, central_extension, honest_extension_witness, induced_local_system, obstruction_omega, ClassTwoData,
    LocalSystemDatum, OuterActionData,
};
use modcat::finab::{AbHom, FinAbGroup};
use modcat::fingrp::{FiniteGroup, GroupMap};
use modcat::frobalg::FakeHeisenberg;
use modcat::groupcoh::{
    self, coboundary, cocycle_tests, cohomology_group, extension_from_cocycle, induced_ses, shapiro_lift, Cochain,
    SESData, Section,
};
use modcat::metric::{classify_cp_witt, tuple_key, witt_reduce, MetricGroup, Sign, WittWitness};
use modcat::Error;

use crate::io::{self, field, parse, CliError, CliResult};

/// Result of a command: the JSON document and a one-line human summary.
pub struct Output {
    pub doc: Value,
    pub summary: String,
}

/// Enforces a size cap: `user` may lower the ceiling but never raise it.
pub fn cap(what: &str, size: u64, ceiling: u64, user: Option<u64>) -> CliResult<()> {
    if let Some(u) = user {
        if u > ceiling {
            return Err(Error::CapExceeded { what: format!("--max-order for {what}"), size: u, cap: ceiling }.into());
        }
    }
    let limit = user.unwrap_or(ceiling);
    if size > limit {
        return Err(Error::CapExceeded { what: what.into(), size, cap: limit }.into());
    }
    Ok(())
}

/// Rationals as "a/b" strings, anything else as a cyclotomic object.
fn cyclo_json(x: &CycloNumber) -> Value {
    if x.conductor() == 1 {
        let c = x.coeffs();
        return Value::String(c.first().map(|r| r.to_string()).unwrap_or_else(|| "0".into()));
    }
    serde_json::to_value(x).expect("serializable")
}

fn witness_json(w: &WittWitness) -> Value {
    json!({
        "chain": w.chain.iter().map(|s| s.gens.iter().map(|g| tuple_key(g)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "residue": w.residue,
    })
}

fn load_form(path: &Path, max: Option<u64>, ceiling: u64) -> CliResult<MetricGroup> {
    let v = io::load(path, io::FORM)?;
    let m = io::in_file(path, io::form(&v))?;
    cap("metric group", m.order(), ceiling, max)?;
    Ok(m)
}

pub fn gauss(form: &Path, sign: Sign, max: Option<u64>) -> CliResult<Output> {
    let m = load_form(form, max, 1 << 16)?;
    let tau = m.gauss_sum(sign);
    let doc = json!({"tau": cyclo_json(&tau)});
    Ok(Output { summary: format!("tau = {}", doc["tau"]), doc })
}

pub fn witt(form: &Path, module: Option<&Path>, max: Option<u64>) -> CliResult<Output> {
    let m = load_form(form, max, modcat::finab::SUBGROUP_CAP)?;
    let action = match module {
        Some(p) => {
            let v = io::load(p, io::MODULE)?;
            let a = io::in_file(p, io::module(&v))?;
            if a.module() != m.group() {
                return Err(CliError::malformed("the module is not the group of the form", json!({"file": p.display().to_string()})));
            }
            Some(a)
        }
        None => None,
    };
    let doc = if let Some(a) = action {
        let w = witt_reduce(&m, Some(&a))?;
        json!({"witness": witness_json(&w), "anisotropic_order": w.residue.order()})
    } else {
        let v = classify_cp_witt(&m)?;
        json!({
            "class": v.class,
            "witness": witness_json(&v.witness),
            "iso": v.iso.map(|h| h.matrix),
        })
    };
    let summary = match doc.get("class") {
        Some(c) => format!("Witt class: {c}"),
        None => format!("anisotropic residue of order {}", doc["anisotropic_order"]),
    };
    Ok(Output { doc, summary })
}

fn modular_data_json(d: &ModularData) -> Value {
    let mut v = serde_json::to_value(d).expect("serializable");
    v.as_object_mut().expect("object").insert("schema".into(), json!(io::MODULAR_DATA));
    v
}

pub fn pointed(form: &Path, max: Option<u64>) -> CliResult<Output> {
    let m = load_form(form, max, 1024)?;
    let d = pointed_modular_data(&m);
    Ok(Output { summary: format!("pointed modular data of rank {}", d.rank()), doc: modular_data_json(&d) })
}

pub fn double(group: &Path, omega: Option<&Path>, fusion: bool, max: Option<u64>) -> CliResult<Output> {
    let v = io::load(group, io::GROUP)?;
    let g = Arc::new(io::in_file(group, io::finite_group(&v))?);
    cap("group for the twisted double", g.order() as u64, centerdata::DOUBLE_CAP as u64, max)?;
    let w = match omega {
        Some(p) => {
            let v = io::load(p, io::COCHAIN)?;
            io::in_file(p, io::trivial_cochain(&g, &v))?
        }
        None => Cochain::from_qz(&g, 3, |_| modcat::cyclotomic::RootExponent::zero())?,
    };
    let mut d = double_modular_data(&g, &w)?;
    if fusion {
        d.fusion = Some(verlinde_fusion(&d)?);
    }
    Ok(Output { summary: format!("twisted double of rank {}", d.rank()), doc: modular_data_json(&d) })
}

pub fn classify(data: Option<&Path>, form: Option<&Path>, p: Option<u64>, max: Option<u64>) -> CliResult<Output> {
    let (d, witt_class, p) = match (data, form) {
        (Some(path), None) => {
            let v = io::load(path, io::MODULAR_DATA)?;
            let d = io::in_file(path, ModularData::from_json(&v).map_err(CliError::from))?;
            cap("modular data rank", d.rank() as u64, 4096, max)?;
            let p = p.ok_or_else(|| CliError::malformed("-p is required with --data", json!({})))?;
            (d, None, p)
        }
        (None, Some(path)) => {
            let m = load_form(path, max, 1024)?;
            let p = match (p, m.prime()) {
                (Some(p), _) => p,
                (None, Some(q)) => q,
                (None, None) => return Err(CliError::malformed("-p is required for the trivial group", json!({}))),
            };
            let w = classify_cp_witt(&m)?;
            (pointed_modular_data(&m), Some(w.class), p)
        }
        _ => return Err(CliError::malformed("give exactly one of --data and --form", json!({}))),
    };
    if !modcat::is_prime(p) {
        return Err(Error::NotPrime(p).into());
    }
    let verdict = check_cp_criteria(&d, p);
    let gc = gauss_charge(&d);
    let mut doc = json!({
        "verdict": verdict.as_str(),
        "p": p,
        "fpdim": gc.fpdim,
        "tau_plus": cyclo_json(&gc.tau_plus),
        "tau_minus": cyclo_json(&gc.tau_minus),
        "charge": gc.charge,
    });
    if let Some(c) = witt_class {
        doc["witt_class"] = json!(c);
    }
    Ok(Output { summary: format!("verdict: {}", verdict.as_str()), doc })
}

fn load_gamma(path: &Path, max: Option<u64>, ceiling: usize) -> CliResult<(Value, Arc<FiniteGroup>)> {
    let v = io::load(path, io::GROUP)?;
    let g = Arc::new(io::in_file(path, io::finite_group(&v))?);
    cap("Γ", g.order() as u64, ceiling as u64, max)?;
    Ok((v, g))
}

fn group_json(g: &FiniteGroup) -> Value {
    json!({"schema": io::GROUP, "table": g.table()})
}

pub fn lift(gamma: &Path, p: u64, n: u32, omega: &Path, max: Option<u64>) -> CliResult<Output> {
    let (_, g) = load_gamma(gamma, max, groupcoh::CAP_DEG3)?;
    let v = io::load(omega, io::COCHAIN)?;
    let w = io::in_file(omega, io::trivial_cochain(&g, &v))?;
    let sl = shapiro_lift(&g, p, n, &w)?;
    debug_assert_eq!(coboundary(&sl.f), Cochain::zero(sl.f.action(), 3));
    let doc = json!({
        "schema": io::LIFT,
        "gamma": group_json(&g),
        "p": p,
        "n": n,
        "omega": io::cochain_json(&w),
        "f": io::cochain_json(&sl.f),
    });
    Ok(Output { summary: format!("lifted ω to a 2-cocycle in a module of order {}", sl.f.module().order()), doc })
}

/// Γ, p, n, ω and the lifted f from a lift document.
struct LiftDoc {
    gamma: Arc<FiniteGroup>,
    p: u64,
    n: u32,
    omega: Cochain,
    ses: SESData,
    f: Cochain,
}

fn read_lift(v: &Value, max: Option<u64>) -> CliResult<LiftDoc> {
    let gamma = Arc::new(io::finite_group(field(v, "gamma")?)?);
    cap("Γ", gamma.order() as u64, groupcoh::CAP_DEG3 as u64, max)?;
    let p: u64 = parse(field(v, "p")?, "p")?;
    let n: u32 = parse(field(v, "n")?, "n")?;
    let omega = io::trivial_cochain(&gamma, field(v, "omega")?)?;
    let ses = induced_ses(&gamma, p, n)?;
    let f = Cochain::from_json(&ses.quo, 2, field(field(v, "f")?, "values")?)?;
    Ok(LiftDoc { gamma, p, n, omega, ses, f })
}

pub fn extend(lift: &Path, max: Option<u64>) -> CliResult<Output> {
    let v = io::load(lift, io::LIFT)?;
    let l = io::in_file(lift, read_lift(&v, max))?;
    let ext = extension_from_cocycle(&l.f)?;
    let h = l.ses.quo.module();
    let order = h.order() * l.gamma.order() as u64;
    let mut doc = json!({
        "schema": io::EXTENSION,
        "gamma": group_json(&l.gamma),
        "p": l.p,
        "n": l.n,
        "omega": io::cochain_json(&l.omega),
        "f": io::cochain_json(&l.f),
        "order": order,
    });
    if order <= groupcoh::TABLE_CAP as u64 {
        let g = ext.to_finite_group()?;
        doc["table"] = json!(g.table());
        doc["exponent"] = json!(g.exponent());
        doc["module_embedding"] = json!(h.elements().map(|m| ext.embed(&m)).collect::<Vec<_>>());
        doc["section"] = json!(ext.section());
    }
    Ok(Output { summary: format!("extension of order {order}"), doc })
}

pub fn associator(extension: &Path, omega: Option<&Path>, max: Option<u64>) -> CliResult<Output> {
    let v = io::load(extension, io::EXTENSION)?;
    let l = io::in_file(extension, read_lift(&v, max))?;
    let local = induced_local_system(&l.gamma, l.p, l.n)?;
    let assoc = match v.get("table") {
        Some(t) => {
            let table: Vec<Vec<usize>> = io::in_file(extension, parse(t, "table"))?;
            let g = FiniteGroup::from_table(table)?;
            let embed = io::in_file(extension, io::usize_list(field(&v, "module_embedding")?, "module_embedding"))?;
            let section = io::in_file(extension, io::usize_list(field(&v, "section")?, "section"))?;
            extlab::associator_from_table(&g, &local, &embed, &section)?
        }
        None => {
            let ext = extension_from_cocycle(&l.f)?;
            extlab::associator_from_extension(
                &ext,
                &local,
                &|m| ext.embed(m),
                &|u| {
                    let (m, g) = ext.split(u);
                    (g == 0).then_some(m)
                },
                &ext.section(),
            )?
        }
    };
    let target = match omega {
        Some(p) => {
            let w = io::load(p, io::COCHAIN)?;
            io::in_file(p, io::trivial_cochain(&l.gamma, &w))?
        }
        None => l.omega.clone(),
    };
    if target.module() != assoc.omega.module() {
        return Err(Error::Invalid(format!(
            "ω is valued in {} but the associator is valued in {}",
            target.module(),
            assoc.omega.module()
        ))
        .into());
    }
    let target = target.with_action(assoc.omega.action());
    let t = cocycle_tests(&assoc.omega, &target)?;
    let doc = json!({
        "omega_prime": io::cochain_json(&assoc.omega),
        "omega": io::cochain_json(&target),
        "cohomologous": t.cohomologous,
        "witness": t.witness.as_ref().map(io::cochain_json),
    });
    let summary = if t.cohomologous { "ω′ is cohomologous to ω" } else { "ω′ is NOT cohomologous to ω" };
    Ok(Output { summary: summary.into(), doc })
}

pub fn cohomology(module: &Path, n: usize, max: Option<u64>) -> CliResult<Output> {
    let v = io::load(module, io::MODULE)?;
    let a = io::in_file(module, io::module(&v))?;
    let ceiling = if n >= 4 { groupcoh::CAP_DEG4 } else { groupcoh::CAP_DEG3 };
    cap("Γ", a.group().order() as u64, ceiling as u64, max)?;
    let c = cohomology_group(&a, n)?;
    let doc = json!({
        "degree": n,
        "order": c.order(),
        "invariant_factors": c.invariant_factors,
        "representatives": c.representatives.iter().map(io::cochain_json).collect::<Vec<_>>(),
    });
    Ok(Output { summary: format!("H^{n} has order {} with invariant factors {:?}", c.order(), c.invariant_factors), doc })
}

pub fn heisenberg(p: u64, m: u32, table: bool, max: Option<u64>) -> CliResult<Output> {
    if let Some(q) = p.checked_pow(2 * m) {
        cap("fake Heisenberg group", q, modcat::frobalg::HEISENBERG_CAP, max)?;
    } else {
        return Err(Error::CapExceeded {
            what: "fake Heisenberg group".into(),
            size: u64::MAX,
            cap: modcat::frobalg::HEISENBERG_CAP,
        }
        .into());
    }
    let h = FakeHeisenberg::new(p, m)?;
    let k = &h.field;
    let elem = |g: usize| {
        let (x, a) = h.coords(g);
        json!([k.digits(x), k.digits(a)])
    };
    let mut doc = json!({
        "p": p,
        "m": m,
        "order": h.group.order(),
        "field_modulus": k.modulus(),
        "center": h.center.iter().map(|&g| elem(g)).collect::<Vec<_>>(),
        "radical": h.radical.iter().map(|&l| k.digits(l)).collect::<Vec<_>>(),
        "attached": h.attached,
    });
    if table {
        doc["elements"] = json!((0..h.group.order()).map(elem).collect::<Vec<_>>());
        doc["table"] = json!(h.group.table());
    }
    Ok(Output {
        summary: format!("order {}, center of order {}, radical of order {}", h.group.order(), h.center.len(), h.radical.len()),
        doc,
    })
}

/// N inside H: an element list (coordinates computed) or {"group", "embedding"}.
fn read_n(h: &Arc<FiniteGroup>, v: Option<&Value>) -> CliResult<ClassTwoData> {
    match v {
        None => Ok(ClassTwoData::with_center(h.clone())?),
        Some(Value::Array(_)) => {
            let elems = io::usize_list(v.unwrap(), "N")?;
            if elems.iter().any(|&x| x >= h.order()) {
                return Err(CliError::malformed("N lists an element outside H", json!({})));
            }
            let (n, embed) = extlab::abelian_coords(h.as_ref(), &elems)?;
            Ok(ClassTwoData::new(h.clone(), n, embed)?)
        }
        Some(obj) => {
            let n = io::ab_group(field(obj, "group")?)?;
            let embed = io::usize_list(field(obj, "embedding")?, "N embedding")?;
            Ok(ClassTwoData::new(h.clone(), n, embed)?)
        }
    }
}

fn matrix(v: &Value, what: &str) -> CliResult<Vec<Vec<i64>>> {
    parse(v, what)
}

fn read_local(v: &Value, gamma: &Arc<FiniteGroup>, n: &FinAbGroup, n_action: Option<&Value>) -> CliResult<LocalSystemDatum> {
    let kind: String = parse(field(v, "kind")?, "local system kind")?;
    match kind.as_str() {
        "character" => {
            let act = io::action(gamma, n, n_action)?;
            let chi = io::root_exponents(field(v, "chi")?)?;
            let p: u64 = parse(field(v, "p")?, "p")?;
            let depth: u32 = parse(v.get("depth").unwrap_or(&json!(1)), "depth")?;
            Ok(LocalSystemDatum::from_character(&act, &chi, p, depth)?)
        }
        "induced" => {
            if n_action.is_some() {
                return Err(CliError::malformed("an induced local system fixes the action on N; drop n_action", json!({})));
            }
            let p: u64 = parse(field(v, "p")?, "p")?;
            let depth: u32 = parse(field(v, "n")?, "n")?;
            Ok(induced_local_system(gamma, p, depth)?)
        }
        "extension" => {
            let quo = io::action(gamma, n, n_action)?;
            let c = io::ab_group(field(v, "sub")?)?;
            let mid = io::ab_group(field(v, "mid")?)?;
            let sub = Arc::new(modcat::finab::AbAction::trivial(gamma.clone(), c.clone()));
            let mid_act = io::action(gamma, &mid, v.get("mid_action"))?;
            let inclusion = AbHom::new(c, mid.clone(), matrix(field(v, "inclusion")?, "inclusion")?)?;
            let projection = AbHom::new(mid, n.clone(), matrix(field(v, "projection")?, "projection")?)?;
            let section = Section::Table(parse(field(v, "section")?, "section table")?);
            let ses = SESData::new(sub, mid_act, quo, inclusion, projection, section)?;
            Ok(LocalSystemDatum::new(ses, io::root_exponents(field(v, "chi")?)?)?)
        }
        other => Err(CliError::malformed(format!("unknown local system kind {other:?}"), json!({}))),
    }
}

fn verdict_json(name: &str, c: &Cochain, witness: Option<&Cochain>, qz: bool) -> Value {
    let show = |x: &Cochain| if qz { io::qz_json(x) } else { io::cochain_json(x) };
    json!({
        "cochain": show(c),
        "trivial": witness.is_some(),
        "witness": witness.map(show),
        "name": name,
    })
}

pub fn obstruct(path: &Path, max: Option<u64>) -> CliResult<Output> {
    let v = io::load(path, io::OUTER_ACTION)?;
    io::in_file(path, obstruct_doc(&v, max))
}

fn obstruct_doc(v: &Value, max: Option<u64>) -> CliResult<Output> {
    let h = Arc::new(io::finite_group(field(v, "H")?)?);
    cap("H", h.order() as u64, modcat::fingrp::AUT_CAP as u64, max)?;
    let gamma = Arc::new(io::finite_group(field(v, "gamma")?)?);
    cap("Γ", gamma.order() as u64, groupcoh::CAP_DEG4 as u64, None)?;
    let base = read_n(&h, v.get("N"))?;
    let local = read_local(field(v, "local_system")?, &gamma, &base.n, v.get("n_action"))?;
    let honest = match v.get("extension") {
        Some(e) => {
            let g = io::finite_group(field(e, "G")?)?;
            let h_embed = io::usize_list(field(e, "h_embedding")?, "h_embedding")?;
            let section = io::usize_list(field(e, "section")?, "section")?;
            Some((g, h_embed, section))
        }
        None => None,
    };
    let data = match (v.get("automorphisms"), &honest) {
        (Some(a), _) => {
            let maps: Vec<Vec<usize>> = parse(a, "automorphisms")?;
            let reps = maps.into_iter().map(|images| GroupMap { images }).collect();
            OuterActionData::new(base, local, gamma.clone(), reps)?
        }
        (None, Some((g, e, s))) => OuterActionData::from_extension(base, local, gamma.clone(), g, e, s)?,
        (None, None) => return Err(CliError::malformed("give \"automorphisms\" or \"extension\"", json!({}))),
    };
    let ce = central_extension(&data)?;
    let lift = match v.get("lift") {
        Some(l) => io::usize_list(l, "lift")?,
        None => ce.default_lift(&data),
    };
    let omega = obstruction_omega(&data, &ce, &lift)?;
    let omega_w = groupcoh::solve_coboundary(&omega)?;
    let b = extlab::beta(&data, &omega)?;
    let beta_w = groupcoh::solve_coboundary(&b)?;
    let kn_auts: Vec<Vec<usize>> = ce.kn_embed.iter().map(|&a| ce.auts.maps[a].images.clone()).collect();
    let mut doc = json!({
        "N": {"group": data.base.n, "embedding": data.base.embed},
        "K": ce.k,
        "K_mod_N": {"group": ce.kn, "automorphisms": kn_auts},
        "lifts": ce.lifts.iter().map(|&a| ce.auts.maps[a].images.clone()).collect::<Vec<_>>(),
        "extension_order": ce.group.order(),
        "f": io::cochain_json(&ce.f),
        "lift": lift,
        "omega": verdict_json("omega", &omega, omega_w.as_ref(), false),
        "beta": verdict_json("beta", &b, beta_w.as_ref(), true),
    });
    if let Some((g, e, s)) = &honest {
        let w = honest_extension_witness(&data, &ce, &lift, g, e, s)?;
        doc["honest_extension"] = json!({
            "compatible_lift": w.compatible_lift,
            "eta": io::cochain_json(&w.eta),
            "beta_witness": io::qz_json(&w.beta_witness),
        });
    }
    let summary = format!(
        "|K/N| = {}, ω {}, β {}",
        ce.kn.order(),
        if omega_w.is_some() { "trivial" } else { "nontrivial" },
        if beta_w.is_some() { "trivial" } else { "nontrivial" }
    );
    Ok(Output { doc, summary })
}
