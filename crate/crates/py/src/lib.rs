//! Python bindings: metric groups, twisted doubles, cohomology and the lift round trip.
//!
//! Exact values cross the boundary as "a/b" strings; cyclotomic numbers as `Cyclotomic`.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use modcat::centerdata;
use modcat::cyclotomic::{CycloNumber, RootExponent};
use modcat::extlab;
use modcat::finab::{AbAction, AbHom, FinAbGroup};
use modcat::fingrp::{self, FiniteGroup};
use modcat::groupcoh;
use modcat::metric;

create_exception!(modcat_py, ModcatError, PyValueError, "Domain error; args are (code, message).");

fn err(e: modcat::Error) -> PyErr {
    ModcatError::new_err((e.code(), e.to_string()))
}

fn bad(msg: impl Into<String>) -> PyErr {
    PyValueError::new_err(msg.into())
}

fn parse_q(s: &str) -> PyResult<RootExponent> {
    s.parse::<RootExponent>().map_err(|e| bad(format!("bad value {s:?}: {e}")))
}

/// Element of a cyclotomic field, stored at its minimal conductor.
#[pyclass(module = "modcat_py", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
pub struct Cyclotomic(CycloNumber);

#[pymethods]
impl Cyclotomic {
    #[staticmethod]
    fn from_int(k: i64) -> Self {
        Cyclotomic(CycloNumber::from_int(k))
    }

    /// e(q) = exp(2πi q) for q given as "a/b".
    #[staticmethod]
    fn root_of_unity(q: &str) -> PyResult<Self> {
        Ok(Cyclotomic(CycloNumber::root_of_unity(parse_q(q)?)))
    }

    #[getter]
    fn conductor(&self) -> u64 {
        self.0.conductor()
    }

    /// Coordinates in the power basis 1, ζ, ζ², ... as "a/b" strings.
    #[getter]
    fn coeffs(&self) -> Vec<String> {
        self.0.coeffs().iter().map(|c| c.to_string()).collect()
    }

    /// "a/b" when the number is rational, else None.
    fn rational(&self) -> Option<String> {
        (self.0.conductor() == 1).then(|| self.0.coeffs().first().map(|c| c.to_string()).unwrap_or_else(|| "0".into()))
    }

    fn conj(&self) -> Self {
        Cyclotomic(self.0.conj())
    }

    fn __add__(&self, o: &Cyclotomic) -> Self {
        Cyclotomic(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Cyclotomic) -> Self {
        Cyclotomic(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Cyclotomic) -> Self {
        Cyclotomic(&self.0 * &o.0)
    }

    fn __repr__(&self) -> String {
        match self.rational() {
            Some(r) => format!("Cyclotomic({r})"),
            None => format!("Cyclotomic(conductor={}, coeffs={:?})", self.conductor(), self.coeffs()),
        }
    }
}

/// Finite group given by its multiplication table; element 0 is the identity.
#[pyclass(module = "modcat_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Group(Arc<FiniteGroup>);

#[pymethods]
impl Group {
    #[new]
    fn new(table: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(Group(Arc::new(FiniteGroup::from_table(table).map_err(err)?)))
    }

    #[staticmethod]
    fn cyclic(n: usize) -> Self {
        Group(Arc::new(FiniteGroup::cyclic(n)))
    }

    /// Product of cyclic groups of the given orders.
    #[staticmethod]
    fn abelian(orders: Vec<usize>) -> Self {
        Group(Arc::new(FiniteGroup::abelian(&orders)))
    }

    /// Dihedral group of order 2n.
    #[staticmethod]
    fn dihedral(n: usize) -> Self {
        Group(Arc::new(FiniteGroup::dihedral(n)))
    }

    #[staticmethod]
    fn from_permutations(gens: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(Group(Arc::new(FiniteGroup::from_permutations(&gens, fingrp::GROUP_CAP).map_err(err)?)))
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul(a, b)
    }

    fn table(&self) -> Vec<Vec<usize>> {
        self.0.table()
    }

    fn center(&self) -> Vec<usize> {
        self.0.center().to_vec()
    }

    fn is_abelian(&self) -> bool {
        self.0.is_abelian()
    }

    fn __repr__(&self) -> String {
        format!("Group(order={})", self.0.order())
    }
}

/// Finite abelian group with a nondegenerate quadratic form.
#[pyclass(module = "modcat_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct MetricGroup(metric::MetricGroup);

#[pymethods]
impl MetricGroup {
    /// `q` maps element tuples to "a/b" values and must cover every element.
    #[new]
    fn new(orders: Vec<u64>, q: std::collections::HashMap<Vec<u64>, String>) -> PyResult<Self> {
        let map: serde_json::Map<String, serde_json::Value> =
            q.into_iter().map(|(k, v)| (metric::tuple_key(&k), serde_json::Value::String(v))).collect();
        let v = serde_json::json!({"group": {"cyclic": orders}, "q": map});
        Ok(MetricGroup(metric::MetricGroup::from_json(&v).map_err(err)?))
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
        Ok(MetricGroup(metric::MetricGroup::from_json(&v).map_err(err)?))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serializable")
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    #[getter]
    fn orders(&self) -> Vec<u64> {
        self.0.group().orders().to_vec()
    }

    fn q(&self, x: Vec<u64>) -> PyResult<String> {
        if !self.0.group().contains(&x) {
            return Err(bad(format!("{x:?} is not an element")));
        }
        Ok(self.0.q_elem(&x).to_string())
    }

    #[pyo3(signature = (sign = "plus"))]
    fn gauss_sum(&self, sign: &str) -> PyResult<Cyclotomic> {
        let s = match sign {
            "plus" => metric::Sign::Plus,
            "minus" => metric::Sign::Minus,
            _ => return Err(bad("sign must be \"plus\" or \"minus\"")),
        };
        Ok(Cyclotomic(self.0.gauss_sum(s)))
    }

    /// "CpPlusCompatible", "CpMinusCompatible" or "Neither".
    fn witt_class(&self) -> PyResult<String> {
        let v = metric::classify_cp_witt(&self.0).map_err(err)?;
        Ok(serde_json::to_value(v.class).expect("serializable").as_str().unwrap_or_default().to_string())
    }

    /// The anisotropic residue of a Witt reduction.
    fn witt_residue(&self) -> PyResult<MetricGroup> {
        Ok(MetricGroup(metric::witt_reduce(&self.0, None).map_err(err)?.residue))
    }

    fn is_isomorphic(&self, other: &MetricGroup) -> bool {
        metric::is_isomorphic(&self.0, &other.0).is_some()
    }

    fn __add__(&self, other: &MetricGroup) -> Self {
        MetricGroup(metric::orthogonal_sum(&self.0, &other.0))
    }

    fn __repr__(&self) -> String {
        format!("MetricGroup(orders={:?})", self.orders())
    }
}

/// Norm form on F_{p²} scaled into (1/p)Z/Z.
#[pyfunction]
fn norm_form(p: u64) -> PyResult<MetricGroup> {
    Ok(MetricGroup(modcat::frobalg::norm_form(p).map_err(err)?))
}

/// A ⊕ Â with the evaluation form.
#[pyfunction]
fn hyperbolic(orders: Vec<u64>) -> PyResult<MetricGroup> {
    Ok(MetricGroup(metric::hyperbolic(&FinAbGroup::new(orders).map_err(err)?)))
}

/// Cochain Γⁿ → M for a Γ-module M.
#[pyclass(module = "modcat_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Cochain(groupcoh::Cochain);

fn all_args(n: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..degree {
        out = out.into_iter().flat_map(|a| (0..n).map(move |g| [a.clone(), vec![g]].concat())).collect();
    }
    out
}

#[pymethods]
impl Cochain {
    /// Q/Z-valued cochain from a callable returning "a/b" (trivial action on a cyclic module).
    #[staticmethod]
    fn from_qz(group: &Group, degree: usize, f: &Bound<'_, PyAny>) -> PyResult<Self> {
        let n = group.0.order();
        let mut vals = Vec::with_capacity(n.pow(degree as u32));
        for args in all_args(n, degree) {
            let s: String = f.call1(pyo3::types::PyTuple::new(f.py(), &args)?)?.extract()?;
            vals.push(parse_q(&s)?);
        }
        let index = |args: &[usize]| args.iter().fold(0, |acc, &g| acc * n + g);
        Ok(Cochain(groupcoh::Cochain::from_qz(&group.0, degree, |a| vals[index(a)]).map_err(err)?))
    }

    /// Cochain with trivial action from a callable returning module element tuples.
    #[staticmethod]
    fn from_fn(group: &Group, orders: Vec<u64>, degree: usize, f: &Bound<'_, PyAny>) -> PyResult<Self> {
        let m = FinAbGroup::new(orders).map_err(err)?;
        let act = Arc::new(AbAction::trivial(group.0.clone(), m.clone()));
        let n = group.0.order();
        let mut vals = Vec::new();
        for args in all_args(n, degree) {
            let v: Vec<u64> = f.call1(pyo3::types::PyTuple::new(f.py(), &args)?)?.extract()?;
            if v.len() != m.rank() {
                return Err(bad(format!("value at {args:?} has the wrong length")));
            }
            vals.push(m.reduce(&v.iter().map(|&x| x as i64).collect::<Vec<_>>()));
        }
        let index = |args: &[usize]| args.iter().fold(0, |acc, &g| acc * n + g);
        Ok(Cochain(groupcoh::Cochain::from_fn(&act, degree, |a| vals[index(a)].clone()).map_err(err)?))
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn module_orders(&self) -> Vec<u64> {
        self.0.module().orders().to_vec()
    }

    fn value(&self, args: Vec<usize>) -> PyResult<Vec<u64>> {
        if args.len() != self.0.degree() || args.iter().any(|&g| g >= self.0.group().order()) {
            return Err(bad("wrong arguments"));
        }
        Ok(self.0.value(&args).to_vec())
    }

    /// Value as "a/b" for a cyclic module Z/m ⊂ Q/Z.
    fn value_qz(&self, args: Vec<usize>) -> PyResult<String> {
        if self.0.module().rank() > 1 {
            return Err(bad("module is not cyclic"));
        }
        self.value(args.clone())?;
        Ok(self.0.value_qz(&args).to_string())
    }

    fn coboundary(&self) -> Self {
        Cochain(groupcoh::coboundary(&self.0))
    }

    fn is_cocycle(&self) -> bool {
        groupcoh::coboundary(&self.0).is_zero()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Nested arrays indexed by group elements with module tuples at the leaves.
    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Cochain(degree={}, module={:?})", self.0.degree(), self.module_orders())
    }
}

/// Whether two cocycles are cohomologous, with a witness β (dβ = a − b) when they are.
#[pyfunction]
fn cohomologous(a: &Cochain, b: &Cochain) -> PyResult<(bool, Option<Cochain>)> {
    if a.0.module() != b.0.module() {
        return Err(bad("cochains have different modules"));
    }
    let b2 = b.0.with_action(a.0.action());
    let t = groupcoh::cocycle_tests(&a.0, &b2).map_err(err)?;
    Ok((t.cohomologous, t.witness.map(Cochain)))
}

/// Hⁿ(Γ, M): invariant factors and one representative cocycle per factor.
/// `action` lists (element, matrix) pairs for generators; omitted means trivial.
#[pyfunction]
#[pyo3(signature = (group, orders, n, action = None))]
fn cohomology(
    group: &Group,
    orders: Vec<u64>,
    n: usize,
    action: Option<Vec<(usize, Vec<Vec<i64>>)>>,
) -> PyResult<(Vec<u64>, Vec<Cochain>)> {
    let m = FinAbGroup::new(orders).map_err(err)?;
    let act = match action {
        None => AbAction::trivial(group.0.clone(), m),
        Some(gens) => {
            let gens = gens
                .into_iter()
                .map(|(g, mat)| Ok((g, AbHom::new(m.clone(), m.clone(), mat)?)))
                .collect::<modcat::Result<Vec<_>>>()
                .map_err(err)?;
            AbAction::from_generators(group.0.clone(), m, &gens).map_err(err)?
        }
    };
    let c = groupcoh::cohomology_group(&Arc::new(act), n).map_err(err)?;
    Ok((c.invariant_factors, c.representatives.into_iter().map(Cochain).collect()))
}

/// The 2-cocycle f with δf = ω in the quotient of the induced module (Z/pⁿ)[Γ].
#[pyfunction]
fn shapiro_lift(group: &Group, p: u64, n: u32, omega: &Cochain) -> PyResult<Cochain> {
    Ok(Cochain(groupcoh::shapiro_lift(&group.0, p, n, &omega.0).map_err(err)?.f))
}

/// ω′ recovered from the extension of Γ defined by a lifted cocycle f.
#[pyfunction]
fn associator_of_lift(group: &Group, p: u64, n: u32, f: &Cochain) -> PyResult<Cochain> {
    let local = extlab::induced_local_system(&group.0, p, n).map_err(err)?;
    if f.0.module() != local.n().module() || f.0.degree() != 2 {
        return Err(bad("f must be a 2-cocycle in the quotient of the induced module"));
    }
    let f2 = f.0.with_action(local.n());
    let ext = groupcoh::extension_from_cocycle(&f2).map_err(err)?;
    let a = extlab::associator_from_extension(
        &ext,
        &local,
        &|m| ext.embed(m),
        &|u| {
            let (m, g) = ext.split(u);
            (g == 0).then_some(m)
        },
        &ext.section(),
    )
    .map_err(err)?;
    Ok(Cochain(a.omega))
}

/// Modular data: labels, dimensions, twists and the unnormalized S-matrix.
#[pyclass(module = "modcat_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct ModularData(centerdata::ModularData);

#[pymethods]
impl ModularData {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
        Ok(ModularData(centerdata::ModularData::from_json(&v).map_err(err)?))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serializable")
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels.clone()
    }

    #[getter]
    fn dims(&self) -> Vec<u64> {
        self.0.dims.clone()
    }

    #[getter]
    fn twists(&self) -> Vec<String> {
        self.0.twists.iter().map(|t| t.to_string()).collect()
    }

    #[getter]
    fn s(&self) -> Vec<Vec<Cyclotomic>> {
        self.0.s.iter().map(|row| row.iter().cloned().map(Cyclotomic).collect()).collect()
    }

    #[getter]
    fn global_dim(&self) -> u64 {
        self.0.global_dim()
    }

    /// {"tau_plus", "tau_minus", "charge", "fpdim"}.
    fn gauss_charge<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let g = centerdata::gauss_charge(&self.0);
        let d = PyDict::new(py);
        d.set_item("tau_plus", Cyclotomic(g.tau_plus))?;
        d.set_item("tau_minus", Cyclotomic(g.tau_minus))?;
        d.set_item("charge", serde_json::to_value(g.charge).expect("serializable").as_str().unwrap_or_default())?;
        d.set_item("fpdim", g.fpdim)?;
        Ok(d)
    }

    /// "CpPlus", "CpMinus" or "FailsCriterion(k)".
    fn cp_verdict(&self, p: u64) -> String {
        centerdata::check_cp_criteria(&self.0, p).as_str()
    }

    fn check_unitarity(&self) -> PyResult<()> {
        self.0.check_unitarity().map_err(err)
    }

    /// Nonzero fusion coefficients (i, j, k, N) from the Verlinde formula.
    fn fusion(&self) -> PyResult<Vec<(usize, usize, usize, u64)>> {
        let f = centerdata::verlinde_fusion(&self.0).map_err(err)?;
        let mut out = Vec::new();
        for i in 0..f.rank() {
            for j in 0..f.rank() {
                for &(k, n) in f.product(i, j) {
                    out.push((i, j, k, n));
                }
            }
        }
        Ok(out)
    }

    fn __mul__(&self, other: &ModularData) -> Self {
        ModularData(centerdata::deligne_product(&self.0, &other.0))
    }

    fn __repr__(&self) -> String {
        format!("ModularData(rank={})", self.0.rank())
    }
}

#[pyfunction]
fn pointed(form: &MetricGroup) -> ModularData {
    ModularData(centerdata::pointed_modular_data(&form.0))
}

/// Modular data of the double of Γ twisted by a Q/Z-valued 3-cocycle ω (untwisted if omitted).
#[pyfunction]
#[pyo3(signature = (group, omega = None))]
fn double(group: &Group, omega: Option<&Cochain>) -> PyResult<ModularData> {
    let d = match omega {
        Some(w) => centerdata::double_modular_data(&group.0, &w.0),
        None => centerdata::double_untwisted(&group.0),
    };
    Ok(ModularData(d.map_err(err)?))
}

/// Named groups of order p^k up to `max_order` (p = 2 up to 16, p = 3 up to 9).
#[pyfunction]
fn p_groups(p: u64, max_order: usize) -> PyResult<Vec<(String, Group)>> {
    let gs = fingrp::catalog::small_p_groups(p, max_order).map_err(err)?;
    Ok(gs.into_iter().map(|(name, g)| (name, Group(Arc::new(g)))).collect())
}

/// The fake Heisenberg model over F_{p^m}: order, center, radical and attached form.
#[pyfunction]
fn heisenberg<'py>(py: Python<'py>, p: u64, m: u32) -> PyResult<Bound<'py, PyDict>> {
    let h = modcat::frobalg::FakeHeisenberg::new(p, m).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("group", Group(h.group.clone()))?;
    d.set_item("center", h.center.clone())?;
    d.set_item("radical", h.radical.iter().map(|&l| h.field.digits(l)).collect::<Vec<_>>())?;
    d.set_item("attached", MetricGroup(h.attached.clone()))?;
    Ok(d)
}

#[pymodule]
pub fn modcat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ModcatError", m.py().get_type::<ModcatError>())?;
    m.add_class::<Cyclotomic>()?;
    m.add_class::<Group>()?;
    m.add_class::<MetricGroup>()?;
    m.add_class::<Cochain>()?;
    m.add_class::<ModularData>()?;
    m.add_function(wrap_pyfunction!(norm_form, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbolic, m)?)?;
    m.add_function(wrap_pyfunction!(cohomologous, m)?)?;
    m.add_function(wrap_pyfunction!(cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(shapiro_lift, m)?)?;
    m.add_function(wrap_pyfunction!(associator_of_lift, m)?)?;
    m.add_function(wrap_pyfunction!(pointed, m)?)?;
    m.add_function(wrap_pyfunction!(double, m)?)?;
    m.add_function(wrap_pyfunction!(p_groups, m)?)?;
    m.add_function(wrap_pyfunction!(heisenberg, m)?)?;
    Ok(())
}
