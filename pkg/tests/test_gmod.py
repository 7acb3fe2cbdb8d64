import numpy as np
import pytest

from egeom import ProjPoint
from gmod import (
    PLUS_SIGN_ANNIHILATORS,
    SPECIAL_OFF_AXIS,
    SPECIAL_ON_AXIS,
    KernelLineResult,
    annihilator_element,
    conic_kernel_candidates,
    cyclic_quotient,
    cyclic_quotient_audit,
    fat_point_audit,
    fat_point_module,
    hom0,
    point_annihilator_audit,
    point_module,
    predicted_kernel_family,
    quotient_dims_by_products,
    sequence_audit,
    simple2_audit,
    simple2_module,
    simple2_table,
    special_index,
    special_kernel_candidates,
    special_kernel_rule,
    successor,
)
from qalg import theta
from schemes import commuting_forms, component_tags, point_family_points
from suites import scheme_data


def test_point_module_of_a_special_point(A7):
    F = A7.F
    M = point_module(A7, [F.one, F.zero, F.zero, F.zero], cutoff=3)
    assert M.dims == [1, 1, 1, 1]
    assert not M.relation_defects(A7)
    assert [g for g in range(4) if F.is_zero(M.actions[0][g][0][0])] == [1, 2, 3]


def test_successor_outside_the_point_scheme(A7):
    with pytest.raises(ValueError, match="not in the point scheme"):
        successor(A7, [1, 2, 0, 0])


def test_cyclic_quotients(A7):
    F = A7.F
    free = cyclic_quotient(A7, [], cutoff=3)
    assert free.dims == [1, 4, 10, 20] and free.provenance == "free"
    u, v = commuting_forms(F, F.one)
    line = cyclic_quotient(A7, [u, v], cutoff=4)
    assert line.dims == [1, 2, 3, 4, 5] and line.provenance == "line"
    assert not line.relation_defects(A7)
    W = [[1, 0, 0, 0], [0, 1, 0, 0]]
    assert cyclic_quotient(A7, W, cutoff=3).dims == quotient_dims_by_products(A7, W, 3)


def test_cyclic_quotient_rejects_bad_subspaces(A7):
    with pytest.raises(ValueError, match="proper subspace"):
        cyclic_quotient(A7, [[1, 0, 0, 0], [2, 0, 0, 0]])
    with pytest.raises(ValueError, match="proper subspace"):
        cyclic_quotient(A7, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_hom0(A7, S7, curve7):
    F = A7.F
    u, v = commuting_forms(F, F.one)
    line = cyclic_quotient(A7, [u, v], cutoff=3)
    e0 = point_module(A7, [F.one, F.zero, F.zero, F.zero], cutoff=3)
    assert hom0(line, e0)[0] == 0
    fat = fat_point_module(S7, curve7.tau_prime, cutoff=3)
    assert hom0(line, fat.module)[0] == 1
    with pytest.raises(ValueError, match="cyclic source"):
        hom0(fat.module, e0)


def test_fat_point_is_an_A_module(A7, S7, curve7):
    fat = fat_point_module(S7, curve7.tau_prime, cutoff=3)
    assert fat.module.dims == [2, 2, 2, 2]
    assert not fat.module.relation_defects(A7)
    assert fat.module.annihilates(theta(A7))
    assert fat.orbit[0] == curve7.tau_prime


def test_simple_modules(S7, curve7):
    V = simple2_module(S7.F, 1)
    assert not V.homogenized(S7.F).relation_defects(S7)
    with pytest.raises(ValueError):
        simple2_module(S7.F, 4)
    assert simple2_audit(S7).passed
    assert simple2_audit(S7, curve7, np.random.default_rng(1), samples=3).passed


def test_simple_table():
    df = simple2_table()
    assert list(df["module"]) == ["V0", "V1", "V2", "V3"]
    assert list(df.columns) == ["module", "x0", "x1", "x2", "x3", "annihilator"]


def test_point_annihilators(A7):
    assert point_annihilator_audit(A7, point_family_points(A7.F), cutoff=3).passed


def test_plus_sign_variants_do_not_annihilate(A7):
    points = point_family_points(A7.F)
    for fam, spec in PLUS_SIGN_ANNIHILATORS.items():
        z = annihilator_element(A7, spec)
        assert not all(point_module(A7, p, 3).annihilates(z) for p in points[fam])


def test_cyclic_quotient_audit(A7, S7, curve7):
    report, modules = cyclic_quotient_audit(A7, S7, curve7, cutoff=4)
    assert report.passed, [c.name for c in report.failures]
    assert modules[0].dims == [1] * 5
    assert modules[1].dims == [1, 2, 3, 4, 5]


def test_fat_point_audit(A7, S7, curve7):
    report = fat_point_audit(S7, A7, curve7, np.random.default_rng(2), samples=2, cutoff=3)
    assert report.passed, [c.name for c in report.failures]


def test_symbolic_modules(symbolic_ctx):
    ctx = symbolic_ctx
    report, _ = cyclic_quotient_audit(ctx.A, ctx.S, ctx.curve, cutoff=3)
    assert report.passed
    assert fat_point_audit(ctx.S, ctx.A, ctx.curve, samples=0, cutoff=3).passed


@pytest.mark.parametrize("source, target, expected", [
    ("E1", "P2", "C3"),
    ("C1", "P2", "E3"),
    ("C1", "P1", None),
    ("E2", "Pinf", "E2"),
    ("C0", "Pinf", None),
    ("C0&E1", "P1", None),
])
def test_predicted_kernel_family(source, target, expected):
    assert predicted_kernel_family(source, target) == expected


@pytest.mark.slow
def test_sequence_audit(ctx7):
    points, _, lines = scheme_data(ctx7)
    report, results = sequence_audit(ctx7.A, ctx7.S, lines, points, ctx7.curve, np.random.default_rng(3), cutoff=4)
    assert report.passed, [c.name for c in report.failures][:5]
    assert all(r.matched for r in results)
    assert any(r.target == "fat" for r in results)
    for case in (SPECIAL_ON_AXIS, SPECIAL_OFF_AXIS):
        special = [r for r in results if r.case == case]
        assert len(special) >= 12 and all(r.base_matched for r in special)


def test_special_kernel_rule_and_index(F49):
    assert special_kernel_rule(1, 0) == special_kernel_rule(1, 1) == "x+xi'-tau"
    assert special_kernel_rule(1, 2) == special_kernel_rule(1, 3) == "x-tau"
    assert special_index(F49, ProjPoint.of(F49, [0, 0, 3, 0])) == 2
    with pytest.raises(ValueError):
        special_index(F49, ProjPoint.of(F49, [1, 0, 1, 0]))


def test_base_point_candidates_are_secants(curve7):
    x = curve7.curve_points()[5]
    special = special_kernel_candidates(curve7, x, 2)
    assert len(special) == 4 and all("E2" in component_tags(L) for L in special.values())
    conic = conic_kernel_candidates(curve7, 1, 3)
    assert len(conic) in (0, 2, 4) and all("E3" in component_tags(L) for L in conic.values())


def test_base_rule_gates_the_match():
    result = KernelLineResult("E1", "Pinf", [1, 1, 1], [0, 1, 2], [0, 1, 2], kernel_tag="E1", predicted="E1",
                              annihilator_dim=2, generated_dims=[1, 2], base_rule="x-tau")
    result.base_predictions = {"x-tau (+tau)": False, "x-tau (-tau)": True, "x+xi'-tau (+tau)": False}
    assert result.base_matched and result.matched
    result.base_predictions = {"x-tau (+tau)": False, "x+xi'-tau (+tau)": True}
    assert result.base_matched is False and not result.matched
    assert KernelLineResult("C1", "P2", [1], [0], [0]).base_matched is None
