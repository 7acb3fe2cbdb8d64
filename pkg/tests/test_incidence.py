import numpy as np
import pytest

from cpoly import Poly
from incidence import (
    ELLIPTIC_FAMILIES,
    MIN_FAT_SAMPLES,
    binary_root_count,
    component_intersection,
    expected_point_counts,
    fat_family_count,
    fat_point_sample,
    incidence_report,
    intersection_table_audit,
)
from schemes import intersection_points
from suites import scheme_data
from utils import LINE_FAMILIES


def test_expected_point_counts():
    assert expected_point_counts("Pinf") == {"C0": 0, "C1": 0, "C2": 0, "C3": 0, "E1": 2, "E2": 2, "E3": 2}
    counts = expected_point_counts("P2")
    assert counts["C2"] == 0 and counts["C0"] == counts["C1"] == counts["C3"] == 1
    assert all(sum(expected_point_counts(f).values()) == 6 for f in ("Pinf", "P0", "P1", "P2", "P3"))


def test_binary_root_count_over_the_closure(F49):
    s, t = Poly.variable(F49, 2, 0), Poly.variable(F49, 2, 1)
    assert binary_root_count(F49, [s * t]) == 2
    assert binary_root_count(F49, [s * s]) == 1
    assert binary_root_count(F49, [s * s + t * t]) == 2
    assert binary_root_count(F49, [s * t, s * s]) == 1
    assert binary_root_count(F49, [Poly(F49, 2)]) is None


def test_component_intersections(F49):
    table = intersection_points(F49)
    for pair in (("C0", "E1"), ("C3", "E3")):
        assert set(component_intersection(F49, *pair)) == set(table[pair])
    report, rows = intersection_table_audit(F49)
    assert report.passed
    assert len(rows) == 12 and all(r["matched"] for r in rows)


def test_fat_point_sample(curve7):
    sample = fat_point_sample(curve7, np.random.default_rng(0))
    assert [kind for kind, _ in sample[:4]] == ["C0", "C1", "C2", "C3"]
    assert len(sample) >= MIN_FAT_SAMPLES
    assert all(all(x != 0 for x in p) for kind, p in sample if kind == "generic")


def test_fat_point_pencils(curve7):
    F = curve7.F
    sample = fat_point_sample(curve7, np.random.default_rng(1))
    tp = sample[0][1]
    assert fat_family_count(F, tp, "C0") is None
    _, generic = sample[-1]
    assert all(fat_family_count(F, generic, tag) == 2 for tag in ELLIPTIC_FAMILIES)
    assert all(fat_family_count(F, generic, tag) == 0 for tag in ("C0", "C1", "C2", "C3"))


@pytest.mark.slow
def test_incidence_report(ctx7):
    points, _, lines = scheme_data(ctx7)
    report = incidence_report(ctx7.S, ctx7.A, ctx7.curve, lines, points.families, np.random.default_rng(2),
                              metadata=ctx7.metadata)
    assert report.passed, [c.name for r in report.reports for c in r.failures][:5]
    frame = report.point_counts
    assert len(frame) == 20
    assert (frame[list(LINE_FAMILIES)].sum(axis=1) == 6).all()
    assert set(report.tables()) >= {"point incidence", "fat point incidence", "intersections", "ruled quadrics"}
    assert report.to_dict()["passed"]
