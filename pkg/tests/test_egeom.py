import numpy as np
import pytest

from egeom import (
    ECurve,
    PluckerLine,
    ProjPoint,
    QuadricForm,
    coordinate_bridge,
    coordinate_bridge_inverse,
    dual_line,
    group_law_audit,
    pencil_audit,
    plucker_audit,
    secant_transport,
    tau_prime_audit,
)


def test_curve_points(curve7):
    points = curve7.curve_points()
    assert points and all(curve7.on_curve(p) for p in points)
    # E[4] acts freely by translation
    assert len(points) % 16 == 0
    assert len(curve7.two_torsion_candidates()) == 4
    assert curve7.on_curve(curve7.tau_prime)


def test_group_law_basics(curve7, rng):
    o = curve7.origin
    p, q = curve7.sample_points(2, rng)
    assert curve7.add(p, o) == p
    assert curve7.add(p, q) == curve7.add(q, p)
    assert curve7.add(p, curve7.negate(p)) == o
    assert curve7.multiple(2, p) == curve7.add(p, p)
    assert curve7.multiple(-1, p) == curve7.negate(p)


def test_translations_and_torsion(curve7, rng):
    for p in curve7.sample_points(4, rng):
        for j in (1, 2, 3):
            assert curve7.add(p, curve7.eps_point(j)) == curve7.eps_translate(j, p)
            assert curve7.gamma_translate(j, p) == curve7.add(p, curve7.xi(j))
    with pytest.raises(ValueError):
        curve7.eps_translate(4, curve7.origin)


def test_origin_is_required(F49):
    bare = ECurve(F49)
    p = bare.tau_prime
    with pytest.raises(RuntimeError, match="pin_origin"):
        bare.add(p, p)
    with pytest.raises(ValueError, match="origin"):
        ECurve(F49, ProjPoint.of(F49, [1, 0, 0, 0]))


def test_singular_members_have_coordinate_vertices(curve7):
    members = curve7.singular_members()
    assert [m.label for m in members] == [0, 1, 2, 3]
    assert all(m.quadric.rank() == 3 for m in members)


def test_audits_pass_over_f49(curve7):
    assert tau_prime_audit(curve7).passed
    assert group_law_audit(curve7, np.random.default_rng(4), samples=5).passed
    assert pencil_audit(curve7, np.random.default_rng(5)).passed
    assert plucker_audit(curve7, np.random.default_rng(6), samples=5).passed


def test_symbolic_curve(tower):
    curve = ECurve(tower)
    assert tau_prime_audit(curve).passed
    assert pencil_audit(curve, np.random.default_rng(0)).passed
    with pytest.raises(ValueError, match="finite field"):
        curve.curve_points()


def test_plucker_lines(F49):
    p, q = [1, 0, 0, 0], [0, 1, 0, 0]
    L = PluckerLine.from_points(F49, p, q)
    assert F49.is_zero(L.relation())
    assert L.contains(p) and L.contains([1, 1, 0, 0]) and not L.contains([0, 0, 1, 0])
    assert dual_line(dual_line(L)) == L
    M = PluckerLine.from_forms(F49, [0, 0, 1, 0], [0, 0, 0, 1])
    assert M == L
    with pytest.raises(ValueError, match="distinct"):
        PluckerLine.from_points(F49, p, [2, 0, 0, 0])
    with pytest.raises(ValueError):
        PluckerLine(F49, [1, 0, 0])


def test_quadric_forms(F49):
    Q = QuadricForm.diagonal(F49, [1, 1, 0, 0])
    assert Q.rank() == 2 and Q.vertex() is None
    cone = QuadricForm.diagonal(F49, [1, 1, 1, 0])
    assert cone.vertex() == ProjPoint.of(F49, [0, 0, 0, 1])
    assert Q.contains_line([0, 0, 1, 0], [0, 0, 0, 1])


def test_coordinate_bridge_round_trip(F49):
    p = ProjPoint.of(F49, [1, 2, 3, 4])
    assert coordinate_bridge_inverse(F49, coordinate_bridge(F49, p)) == p


def test_secant_transport(F49):
    p = ProjPoint.of(F49, [1, 2, 3, 4])
    assert secant_transport(F49, p, 1) == coordinate_bridge(F49, p)
    assert secant_transport(F49, p, 2) == coordinate_bridge(F49, p)
    y = secant_transport(F49, p, 3)
    squares = [F49.div(F49.mul(c, c), F49.mul(x, x)) for c, x in zip(y, p)]
    assert [F49.div(s, squares[0]) for s in squares] == [F49.one, F49.neg(F49.one), F49.one, F49.neg(F49.one)]
    with pytest.raises(ValueError, match="2-torsion"):
        secant_transport(F49, p, 0)


def test_halves(curve7, rng):
    p = curve7.sample_points(1, rng)[0]
    halves = curve7.halves(curve7.add(p, p))
    assert p in halves and len(halves) == 4
    assert all(curve7.add(h, curve7.xi(1)) in halves for h in halves)
