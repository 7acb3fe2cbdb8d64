import numpy as np
import pytest

import numerical as la
from qalg import (
    GeneratorMap,
    associativity_check,
    automorphism_audit,
    central_pencil_audit,
    gamma_fixed_audit,
    gamma_map,
    h4_group_audit,
    hilbert_audit,
    is_central_deg2,
    is_graded_automorphism,
    omega,
    presentation_A,
    presentation_text,
    psi_map,
    theta,
    twist_center_audit,
)
from utils import CutoffExceeded


def test_components_have_polynomial_growth(S7, A7):
    assert S7.dims(4) == [1, 4, 10, 20, 35]
    assert A7.dims(4) == [1, 4, 10, 20, 35]
    assert S7.relation_rank() == A7.relation_rank() == 6


def test_cutoff_is_enforced(S7):
    with pytest.raises(CutoffExceeded):
        S7.component(S7.cutoff + 1)
    with pytest.raises(ValueError):
        S7.component(-1)


def test_defining_relation_vanishes(S7):
    F = S7.F
    al = F.param("alpha")
    rel = S7.element({(0, 1): F.one, (1, 0): F.neg(F.one), (2, 3): F.neg(al), (3, 2): F.neg(al)})
    assert rel.is_zero()
    x0, x1 = S7.generator(0), S7.generator(1)
    assert not S7.commutator(x0, x1).is_zero()


def test_element_rejects_mixed_degrees(S7):
    with pytest.raises(ValueError, match="one degree"):
        S7.element({(0,): 1, (0, 1): 1})
    with pytest.raises(ValueError):
        S7.generator(0) + S7.element({(0, 0): 1})


def test_multiplication_is_associative(S7, A7, rng):
    x = [S7.generator(g) for g in range(4)]
    assert (x[0] * x[1]) * x[2] == x[0] * (x[1] * x[2])
    assert associativity_check(A7, rng, samples=15).passed


def test_hilbert_audits(S7, A7):
    assert hilbert_audit(S7, up_to=4).passed
    assert hilbert_audit(A7, up_to=4).passed


def test_centers(S7, A7):
    assert is_central_deg2(S7, omega(S7))
    assert all(is_central_deg2(S7, omega(S7, j)) for j in range(4))
    assert is_central_deg2(A7, theta(A7))
    assert not is_central_deg2(A7, A7.element({(0, 0): A7.F.one}))
    assert central_pencil_audit(S7).passed
    assert twist_center_audit(A7).passed


def test_heisenberg_and_automorphisms(F49, S7, A7):
    assert h4_group_audit(F49).passed
    assert automorphism_audit(S7, A7).passed
    assert is_graded_automorphism(A7, gamma_map(F49, 2))
    assert not is_graded_automorphism(A7, psi_map(F49, 1))


def test_singular_map_is_rejected(S7):
    F = S7.F
    with pytest.raises(ValueError, match="not invertible"):
        is_graded_automorphism(S7, GeneratorMap("zero", la.zeros(F, 4, 4)))
    with pytest.raises(ValueError):
        GeneratorMap("short", [[F.one]])


def test_gamma_fixed_part_is_the_twist(S7, A7):
    report = gamma_fixed_audit(S7, A7, up_to=2)
    assert report.passed
    assert any(c.name == "relations of A map to zero" for c in report.checks)


def test_presentation_text_lists_six_relations(A7):
    lines = presentation_text(A7).splitlines()
    assert len(lines) == 6
    assert lines[0].startswith("y0*y1")


def test_symbolic_tower(tower, symbolic_ctx):
    assert h4_group_audit(tower).passed
    assert symbolic_ctx.S.dims(2) == [1, 4, 10]
    A = presentation_A(tower, cutoff=3)
    assert is_central_deg2(A, theta(A, 1))
    assert associativity_check(A, np.random.default_rng(2), samples=2).passed


def test_linear_relation_needs_omega_itself(S7):
    F = S7.F
    al, be, ga = F.param("alpha"), F.param("beta"), F.param("gamma")
    two_abg = F.prod([F.from_int(2), al, be, ga])
    rest = omega(S7, 1).scale(al) + omega(S7, 2).scale(be) + omega(S7, 3).scale(ga)
    assert (omega(S7).scale(two_abg) + rest).is_zero()
    assert not (omega(S7, 0).scale(two_abg) + rest).is_zero()
