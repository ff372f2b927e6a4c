import random
from fractions import Fraction

import pytest

from dfan.errors import InvariantViolation
from dfan.orders import ConeLimitOrder, HomFormOrder, VForm, leading_exponent
from dfan.oracle import leading_exponents_bf
from dfan.parse import parse_operator
from dfan.stdbasis import MarkedBasis, keeps_marks
from dfan.vfan import (
    INF,
    FanCell,
    SlopeInterval,
    VGroebnerFan,
    basis_at_slope,
    cone_of_basis,
    limit_order_agrees,
    skeleton,
    traverse_fan,
    within_cell_stable,
)
from dfan.vfilt import IdealPresentation
from dfan.weyl import RingSignature

S12 = RingSignature(1, 2)
S22 = RingSignature(2, 2)


def marked(texts, sig, order):
    ops = [parse_operator(t, sig) for t in texts]
    return MarkedBasis(tuple((Q, leading_exponent(Q, order)) for Q in ops), order)


def test_interval_algebra():
    a = SlopeInterval(Fraction(0), True, Fraction(1), False)
    b = SlopeInterval(Fraction(1, 2), True, INF, True)
    c = a.intersect(b)
    assert str(c) == "[1/2, 1)"
    assert c.contains(Fraction(1, 2)) and not c.contains(1)
    assert SlopeInterval(Fraction(1), True, Fraction(1), True).is_point()
    assert SlopeInterval(Fraction(1), False, Fraction(1), True).is_empty()
    assert SlopeInterval(Fraction(1), False, INF, True).witness() == 2
    assert SlopeInterval.full().to_json() == {"lo": "0", "lo_closed": True, "hi": "inf", "hi_closed": True}


def test_normal_crossing_basis_has_no_wall():
    B = marked(["t1 - x1", "t2 - x2", "dx1 + dt1", "dx2 + dt2"], S22, HomFormOrder(VForm((1, 1))))
    iv = cone_of_basis(B)
    assert (iv.lo, iv.hi) == (0, INF)


def test_difference_of_t_marked_at_t2_bounds_the_slope():
    sig = S12
    Q = parse_operator("t1 - t2", sig)
    e = leading_exponent(parse_operator("t2", sig), HomFormOrder(VForm((1, 1))))
    iv = cone_of_basis(MarkedBasis(((Q, e),), HomFormOrder(VForm((2, 1)))))
    assert iv.hi == 1 and iv.lo == 0
    assert iv.contains(Fraction(1, 2)) and not iv.contains(2)


def test_monomial_basis_is_unconstrained():
    B = marked(["x1*dt1"], S12, HomFormOrder(VForm((1, 1))))
    assert cone_of_basis(B) == SlopeInterval.full()


def test_inconsistent_marks_are_rejected():
    Q = parse_operator("t1 + dt1*z", S12)
    with pytest.raises(InvariantViolation):
        cone_of_basis(MarkedBasis(((Q, leading_exponent(parse_operator("t1", S12), HomFormOrder(VForm((1, 1))))),), HomFormOrder(VForm((1, 1)))))
    with pytest.raises(ValueError):
        cone_of_basis(marked(["x1"], RingSignature(1, 1), HomFormOrder(VForm((1,)))))


def test_normal_crossing_fan(nc):
    fan = nc.fan
    assert len(fan.maximal_cells()) == 1
    (cell,) = fan.maximal_cells()
    assert (cell.interval.lo, cell.interval.hi) == (0, INF)
    assert fan.skeleton == [VForm((1, 0)), VForm((0, 1))]


def test_diagonal_fan_has_a_wall_at_one(diag):
    fan = diag.fan
    ivs = [str(c.interval) for c in fan.cells]
    assert ivs == ["[0, 1)", "[1, 1]", "(1, inf]"]
    assert fan.skeleton == [VForm((1, 0)), VForm((1, 1)), VForm((0, 1))]
    gens = diag.saturated.operators()
    # brute-force leading terms change across the wall and agree inside each sector
    lo = leading_exponents_bf(HomFormOrder(VForm((2, 1))), gens, 4)
    lo2 = leading_exponents_bf(HomFormOrder(VForm((3, 1))), gens, 4)
    mid = leading_exponents_bf(HomFormOrder(VForm((1, 1))), gens, 4)
    hi = leading_exponents_bf(HomFormOrder(VForm((1, 2))), gens, 4)
    assert lo == lo2
    assert lo != hi and mid != hi and mid != lo


def test_unit_ideal_gives_one_cell():
    sig = S12
    pres = IdealPresentation.from_generators([parse_operator("1", sig)])
    assert len(pres.fan.cells) == 1
    assert [str(Q) for Q in pres.fan.cells[0].basis.operators()] == ["1"]


def test_p1_fan_is_a_single_ray(line):
    assert len(line.fan.cells) == 1
    assert line.fan.skeleton == [VForm((1,))]


def test_skeleton_of_a_rational_wall():
    B = marked(["x1"], S12, HomFormOrder(VForm((1, 1))))
    cells = [
        FanCell(SlopeInterval(Fraction(0), True, Fraction(2, 3), False), B, VForm((3, 1))),
        FanCell(SlopeInterval(Fraction(2, 3), True, INF, True), B, VForm((1, 1))),
    ]
    assert VForm((3, 2)) in skeleton(VGroebnerFan(cells))


@pytest.mark.parametrize("name", ["normal_crossing", "diagonal", "cusp"])
def test_cells_are_stable_and_limit_orders_agree(name, request):
    pres = request.getfixturevalue({"normal_crossing": "nc", "diagonal": "diag", "cusp": "cusp"}[name])
    gens = pres.saturated.operators()
    for cell in pres.fan.cells:
        assert within_cell_stable(cell, gens)
        for L in cell.generators() + [cell.witness]:
            assert limit_order_agrees(cell, L)


def test_limit_order_rejects_forms_outside_the_closure(diag):
    cell = diag.fan.cells[0]
    with pytest.raises(ValueError):
        limit_order_agrees(cell, VForm((1, 3)))


def test_marks_kept_inside_cells_and_lost_across_walls(diag):
    rng = random.Random(7)
    first, _, last = diag.fan.cells
    for _ in range(5):
        lam = Fraction(rng.randint(1, 99), 100)
        assert keeps_marks(first.basis, HomFormOrder(VForm((lam.denominator, lam.numerator))))
    assert not keeps_marks(first.basis, HomFormOrder(VForm((1, 2))))
    assert not keeps_marks(last.basis, HomFormOrder(VForm((2, 1))))


def test_next_sector_basis_comes_from_the_limit_order(diag):
    gens = diag.saturated.operators()
    beyond = basis_at_slope(gens, Fraction(3, 2))
    from dfan.stdbasis import standard_basis

    limit = standard_basis(gens, ConeLimitOrder(VForm((1, 1)), VForm((0, 1))))
    assert limit.same_basis(beyond)
    assert limit.same_basis(diag.fan.cells[2].basis)


def test_traversal_is_deterministic(diag):
    again = traverse_fan(diag.saturated.operators())
    assert [str(c.interval) for c in again.cells] == [str(c.interval) for c in diag.fan.cells]
    assert all(a.basis.same_basis(b.basis) for a, b in zip(again.cells, diag.fan.cells))
