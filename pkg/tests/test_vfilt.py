import pytest

from dfan.oracle import ideal_membership_bf, min_order_bf
from dfan.orders import VForm
from dfan.vfilt import (
    WeightVector,
    cone_filtration_witness,
    controlled_reduce,
    in_ideal,
    kappa2_global,
    kappa_global,
    kappa_of_basis,
    kappa_sigma,
    normalize_over_fan,
    order_profile,
    reduce_step,
    sigma_vw_membership,
    vw_membership,
)
from dfan.weyl import l_order

from conftest import op

V1, V2, DIAG = VForm((1, 0)), VForm((0, 1)), VForm((1, 1))


def D12(text):
    return op(text, 1, 2, in_d=True)


def D11(text):
    return op(text, 1, 1, in_d=True)


def test_weight_vector():
    w = WeightVector((-1, 2))
    assert w.value(VForm((3, 2))) == 1
    assert str(w) == "-1,2"
    with pytest.raises(ValueError):
        WeightVector((0.5, 1))


def test_vw_membership():
    assert vw_membership(D12("t1"), (-1, 0))
    assert not vw_membership(D12("dt1"), (0, 0))
    assert vw_membership(D12("1"), (0, 0))
    with pytest.raises(ValueError):
        vw_membership(op("z", 1, 2), (0, 0))


def test_cone_membership(nc):
    (cell,) = nc.fan.maximal_cells()
    P = lambda t: op(t, 2, 2, in_d=True)
    assert sigma_vw_membership(P("1"), cell, (0, 0))
    assert sigma_vw_membership(P("dt1*t1"), cell, (0, 0))
    assert not sigma_vw_membership(P("dt1"), cell, (0, 0))


def test_membership_in_the_ideal(line):
    assert in_ideal(D11("x1*dt1 - t1*dt1 - 1"), line)
    # the right multiple is not in the left ideal
    assert not in_ideal(D11("x1*dt1 - t1*dt1"), line)
    assert line.same_class(D11("x1*dt1"), D11("t1*dt1 + 1"))


def test_single_step_on_the_line(line):
    cell = line.fan.cells[0]
    P, cert = D11("x1*dt1"), D11("t1*dt1 + 1")
    Pn, step = reduce_step(P, [VForm((1,))], 0, line, cell, cert)
    assert l_order(Pn, VForm((1,))) == 0
    assert step.before == (1,) and step.after == (0,)
    assert line.contains(step.subtracted)
    assert ideal_membership_bf(step.subtracted, line.generators, 4).yes


def test_step_requires_an_improving_certificate(line):
    cell = line.fan.cells[0]
    P = D11("x1*dt1")
    with pytest.raises(ValueError):
        reduce_step(P, [VForm((1,))], 0, line, cell, D11("x1*dt1 + t1"))
    with pytest.raises(ValueError):
        reduce_step(P, [VForm((1,))], 0, line, cell, D11("t1*dt1"))


def test_step_when_the_symbol_is_in_the_ideal(diag):
    cell = diag.fan.cells[0]
    Q = D12("dt1 + dt2 + dx1")
    P = D12("dt1*t1") * Q
    Pn, step = reduce_step(P, cell.generators(), 0, diag, cell, D12("0"))
    assert order_profile(Pn, cell.generators()) < order_profile(P, cell.generators())
    assert diag.contains(P - Pn)


def test_cone_witness_on_the_line(line):
    cell = line.fan.cells[0]
    T, trace = cone_filtration_witness([(D11("t1*dt1 + 1"), VForm((1,)))], cell, (0,), line, start=D11("x1*dt1"))
    assert l_order(T, VForm((1,))) <= 0
    assert line.same_class(T, D11("x1*dt1"))
    assert len(trace.steps) == 1


def test_cone_witness_leaves_members_alone(nc):
    (cell,) = nc.fan.maximal_cells()
    P = op("t1*dt2", 2, 2, in_d=True)
    T, trace = cone_filtration_witness([(P, V1), (P, V2)], cell, (-1, 1), nc)
    assert T == P and trace.steps == []


def test_cone_witness_rejects_bad_certificates(nc):
    (cell,) = nc.fan.maximal_cells()
    P = op("t1*dt2", 2, 2, in_d=True)
    with pytest.raises(ValueError):
        cone_filtration_witness([(P, V1), (op("t2*dt2", 2, 2, in_d=True), V2)], cell, (-1, 1), nc)
    with pytest.raises(ValueError):
        cone_filtration_witness([(P, V1)], cell, (-1, 1), nc)
    with pytest.raises(ValueError):
        cone_filtration_witness([(P, V1), (P, V2)], cell, (-2, 1), nc)


def test_kappa_of_a_synthetic_basis():
    Q = op("dt1*z^2 + dt2*z^2", 1, 2)
    assert kappa_of_basis([Q], VForm((1, 2))) == 1
    assert kappa_of_basis([op("dt1*t1 + dt2*t2", 1, 2)], VForm((1, 2))) == 0


def test_kappa_values(nc, diag, line, cusp):
    assert kappa_global(nc.fan) == 0
    assert [kappa_sigma(c) for c in diag.fan.maximal_cells()] == [0, 1]
    assert kappa_global(diag.fan) == 1
    assert kappa2_global(diag.fan) == 1
    assert kappa_global(line.fan) == 0 and kappa_global(cusp.fan) == 0
    with pytest.raises(ValueError):
        kappa_sigma(diag.fan.cells[1])


def _certs(pres, P, forms, D=6):
    return {L: min_order_bf(P, L, pres.generators, D)[1] for L in forms}


def test_controlled_reduce_across_the_diagonal(diag):
    P = D12("x1*dt1")
    certs = _certs(diag, P, diag.fan.skeleton)
    first, _, last = diag.fan.cells
    T, trace = controlled_reduce(certs[V1], certs[DIAG], first, (0, 0), diag)
    assert trace.steps == []
    T2, trace2 = controlled_reduce(T, certs[V2], last, (0, 0), diag)
    assert l_order(T2, DIAG) <= 0 and l_order(T2, V2) <= 0
    assert l_order(T2, V1) <= 0 + kappa_sigma(last)
    assert diag.same_class(T2, P)
    for step in trace2.steps:
        assert step.claims["c_left"] <= step.claims["c_right"]
        assert diag.contains(step.subtracted)


def test_controlled_reduce_without_work(diag):
    first = diag.fan.cells[0]
    P = D12("t1*dt1")
    T, trace = controlled_reduce(P, P, first, (0, 0), diag)
    assert T == P and trace.steps == []


def test_normalize_unit(nc, diag):
    for pres in (nc, diag):
        one = D12("1") if pres is diag else op("1", 2, 2, in_d=True)
        T, _ = normalize_over_fan({L: one for L in pres.fan.skeleton}, (0, 0), pres)
        assert T == one


def test_normalize_normal_crossing(nc):
    P = op("t1*dt2", 2, 2, in_d=True)
    T, _ = normalize_over_fan({V1: P, V2: P}, (-1, 1), nc)
    assert l_order(T, V1) <= -1 and l_order(T, V2) <= 1
    assert ideal_membership_bf(T - P, nc.generators, 4).yes


def test_normalize_diagonal(diag):
    P = D12("x1*dt1")
    T, traces = normalize_over_fan(_certs(diag, P, diag.fan.skeleton), (0, 0), diag)
    assert l_order(T, V1) <= 0 + kappa_global(diag.fan)
    assert l_order(T, V2) <= 0
    assert diag.same_class(T, P)


def test_normalize_requires_every_skeleton_form(diag):
    P = D12("x1*dt1")
    certs = _certs(diag, P, [V1, V2])
    with pytest.raises(ValueError):
        normalize_over_fan(certs, (0, 0), diag)


def test_normalize_needs_a_two_parameter_fan(line):
    with pytest.raises(ValueError):
        normalize_over_fan({VForm((1,)): D11("1")}, (0,), line)
