"""Smoke test for the modcat_py extension.

Build and install first:  pip install -e crates/py --no-build-isolation
Then run:                 python python/smoke_test.py   (or pytest python/)
"""

import modcat_py as mc


def test_gauss_sums():
    norm = mc.norm_form(2)
    assert norm.gauss_sum("plus").rational() == "-2"
    assert norm.witt_class() == "CpMinusCompatible"
    toric = mc.hyperbolic([2])
    assert toric.gauss_sum().rational() == "2"
    assert toric.witt_class() == "CpPlusCompatible"
    z3 = mc.MetricGroup([3], {(0,): "0", (1,): "1/3", (2,): "1/3"})
    tau = z3.gauss_sum()
    assert tau.rational() is None
    # τ τ̄ = |A|
    assert (tau * tau.conj()).rational() == "3"


def test_pointed_and_double():
    d = mc.pointed(mc.norm_form(3))
    assert d.cp_verdict(3) == "CpMinus"
    dz2 = mc.double(mc.Group.cyclic(2))
    assert dz2.cp_verdict(2) == "CpPlus"
    assert dz2.gauss_charge()["charge"] == "1"
    assert len(dz2.fusion()) == 16
    g = mc.Group.cyclic(2)
    omega = mc.Cochain.from_qz(g, 3, lambda a, b, c: "1/2" if (a, b, c) == (1, 1, 1) else "0")
    tw = mc.double(g, omega)
    assert sorted(tw.twists) == ["0/1", "0/1", "1/4", "3/4"]
    d8 = mc.double(mc.Group.dihedral(4))
    assert d8.rank == 22
    assert d8.gauss_charge()["tau_plus"].rational() == "8"
    assert mc.ModularData.from_json(d8.to_json()).labels == d8.labels


def test_lift_round_trip():
    g = mc.Group.cyclic(4)
    factors, reps = mc.cohomology(g, [2], 3)
    assert factors == [2]
    omega = reps[0]
    f = mc.shapiro_lift(g, 2, 1, omega)
    assert f.degree == 2 and f.is_cocycle()
    back = mc.associator_of_lift(g, 2, 1, f)
    same, witness = mc.cohomologous(back, omega)
    assert same and witness is not None


def test_catalog_and_heisenberg():
    names = [n for n, g in mc.p_groups(2, 16) if g.order == 16]
    assert len(names) == 14
    h = mc.heisenberg(3, 2)
    assert h["group"].order == 81
    assert len(h["radical"]) == 9
    assert h["attached"].is_isomorphic(mc.norm_form(3))


def test_errors():
    try:
        mc.heisenberg(2, 1)
    except mc.ModcatError as e:
        assert e.args[0] == "DegenerateModel"
    else:
        raise AssertionError("expected ModcatError")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print("ok", name)
