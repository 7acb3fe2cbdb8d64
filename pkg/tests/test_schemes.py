import numpy as np
import pytest

import numerical as la
from egeom import PluckerLine
from factories import create_specialization
from schemes import (
    COMPONENTS,
    commuting_conic_audit,
    commuting_forms,
    component_certificates,
    component_membership,
    component_points,
    component_tags,
    conic_transport_audit,
    elliptic_component_audit,
    expected_line_count,
    intersection_points,
    is_line_of_scheme,
    line_scheme_audit,
    line_scheme_enumerate,
    linearization,
    point_family_points,
    point_scheme,
    point_scheme_audit,
    quartic_audit,
    quartics_in_plucker,
    ruled_quadric_audit,
    secant_line,
    tau_sign_certificate,
    z_coords,
)
from suites import scheme_data


def _sign(report):
    for check in report.checks:
        if isinstance(check.witness, dict) and "sign" in check.witness:
            return check.witness["sign"]
    return None


def test_tabulated_points_are_in_the_point_scheme(A7):
    F = A7.F
    for fam, points in point_family_points(F).items():
        assert len(set(points)) == 4, fam
        for p in points:
            assert la.rank(F, linearization(A7, p)) == 3


def test_commuting_line_is_a_line_of_the_scheme(A7):
    F = A7.F
    f, g = commuting_forms(F, F.from_int(2))
    ok, rank = is_line_of_scheme(A7, f, g)
    assert ok and rank == 7
    assert component_membership(PluckerLine.from_forms(F, f, g)).startswith("C0")
    with pytest.raises(ValueError, match="independent"):
        is_line_of_scheme(A7, f, f)


def test_generic_plane_pair_is_not_a_line(A7):
    F = A7.F
    ok, rank = is_line_of_scheme(A7, [1, 0, 0, 0], [0, 1, 0, 0])
    assert not ok and rank == 8


def test_intersection_points_lie_on_both_components(F49):
    for (c, e), points in intersection_points(F49).items():
        assert len(set(points)) == 2
        for z in points:
            assert COMPONENTS[c].contains(F49, z)
            assert COMPONENTS[e].contains(F49, z)


def test_conic_component_has_q_plus_one_points(F49):
    lines = component_points(F49, "C0")
    assert len(lines) == F49.q + 1
    assert all(component_membership(L).startswith("C0") for L in lines)
    assert all(F49.is_zero(PluckerLine(F49, z_coords(L)).relation()) for L in lines[:10])


def test_expected_line_count():
    assert expected_line_count(49, 64) == 3 * 64 + 4 * 50 - 24


def test_commuting_conic_and_transport(S7, A7, F49):
    assert commuting_conic_audit(S7, A7).passed
    assert conic_transport_audit(F49, np.random.default_rng(1)).passed
    assert ruled_quadric_audit(F49).passed


def test_component_certificates(F49):
    report = component_certificates(F49, np.random.default_rng(2))
    assert report.passed, [c.name for c in report.failures]


def test_tau_sign_certificate_in_both_modes(S7, curve7, symbolic_ctx):
    finite = tau_sign_certificate(S7, curve7, np.random.default_rng(3))
    assert finite.passed
    symbolic = tau_sign_certificate(symbolic_ctx.S, symbolic_ctx.curve)
    assert symbolic.passed
    assert _sign(finite) == _sign(symbolic)


def test_enumeration_needs_a_finite_field(symbolic_ctx):
    with pytest.raises(ValueError, match="finite field"):
        point_scheme(symbolic_ctx.A)
    with pytest.raises(ValueError, match="finite field"):
        line_scheme_enumerate(symbolic_ctx.A)


@pytest.fixture(scope="module")
def lines7(ctx7):
    return scheme_data(ctx7)[2]


@pytest.mark.slow
def test_point_scheme_of_twist(A7):
    result = point_scheme(A7)
    assert len(result.points) == 20
    assert not result.degenerate and not result.unmatched
    assert point_scheme_audit(A7, result).passed


@pytest.mark.slow
def test_point_scheme_of_sklyanin_agrees_with_sign_certificate(S7, curve7):
    result = point_scheme(S7)
    assert len(result.points) == len(curve7.curve_points()) + 4
    report = point_scheme_audit(S7, result, curve7)
    assert report.passed
    assert _sign(report) == _sign(tau_sign_certificate(S7, curve7, np.random.default_rng(4)))


@pytest.mark.slow
def test_line_scheme_over_f49(lines7, curve7):
    n = len(curve7.curve_points())
    assert len(lines7.lines) == expected_line_count(49, n)
    assert lines7.counts["C0"] == 50 and lines7.counts["E1"] == n
    assert len(lines7.overlaps) == 24
    assert line_scheme_audit(lines7, curve7).passed


@pytest.mark.slow
def test_elliptic_components_and_quartics(lines7, curve7, A7):
    assert elliptic_component_audit(curve7, A7).passed
    fit = quartics_in_plucker(A7, np.random.default_rng(5))
    assert len(fit.polys) == 45 and fit.kernel_dim == 21
    assert quartic_audit(fit, lines7).passed


@pytest.mark.parametrize("prime", [7, 11])
def test_secants_are_lines_of_their_own_family(prime):
    ctx = create_specialization(prime, seed=0, cutoff=3)
    for p in ctx.curve.curve_points()[:6]:
        for j in (1, 2, 3):
            L = secant_line(ctx.curve, p, j)
            assert is_line_of_scheme(ctx.A, *L.forms())[0]
            assert f"E{j}" in component_tags(L)
