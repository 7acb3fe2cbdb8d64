import pytest

from factories import (
    create_config,
    create_field,
    create_module,
    create_presentation,
    create_specialization,
)
from gmod import FatPointModule, GradedModule, Simple2Module


def test_create_field():
    assert not create_field({"mode": "symbolic"}).is_finite
    F = create_field({"mode": "specialized", "prime": 7, "seed": 2})
    assert F.q == 49 and F.seed == 2
    with pytest.raises(ValueError, match="prime is required"):
        create_field({"mode": "specialized"})
    with pytest.raises(ValueError, match="Unknown mode"):
        create_field({"mode": "padic"})


def test_create_presentation(F49):
    assert create_presentation({"algebra": " S "}, F49).label == "S"
    assert create_presentation({"algebra": "twist", "cutoff": 3}, F49).cutoff == 3
    with pytest.raises(ValueError, match="Unknown algebra"):
        create_presentation({"algebra": "weyl"}, F49)


def test_create_module(S7, A7):
    point = create_module({"kind": "point", "point": [1, 0, 0, 0], "cutoff": 2}, A7)
    assert isinstance(point, GradedModule) and point.dims == [1, 1, 1]
    line = create_module({"kind": "line", "cutoff": 3,
                          "forms": [["1", "i*b*c", "0", "0"], ["0", "0", "-i*a*c", "-a*b"]]}, A7)
    assert line.dims == [1, 2, 3, 4]
    fat = create_module({"kind": "fat", "point": ["a*b*c", "a", "b", "c"], "cutoff": 2}, S7)
    assert isinstance(fat, FatPointModule) and fat.module.dims == [2, 2, 2]
    simple = create_module({"kind": "simple", "index": 2}, S7)
    assert isinstance(simple, Simple2Module) and simple.index == 2


@pytest.mark.parametrize("data, message", [
    ({"kind": "point"}, "point is required"),
    ({"kind": "line", "forms": [[1, 0, 0, 0]]}, "2 forms"),
    ({"kind": "torsion"}, "Unknown module kind"),
])
def test_create_module_rejects(A7, data, message):
    with pytest.raises(ValueError, match=message):
        create_module(data, A7)


def test_fat_points_come_from_S(A7):
    with pytest.raises(ValueError, match="built from S"):
        create_module({"kind": "fat", "point": [1, 0, 0, 0]}, A7)


def test_create_config():
    config = create_config({"suite": " Identities ", "primes": "7, 11", "seed": "3"})
    assert config.suite == "identities" and config.primes == (7, 11) and config.seed == 3
    with pytest.raises(ValueError):
        create_config({"mode": "symbolic", "suite": "incidence"})


def test_specialization_context(ctx7):
    assert ctx7.is_finite and ctx7.label == ctx7.F.name
    meta = ctx7.metadata
    assert meta["prime"] == 7 and meta["seed"] == ctx7.seed
    assert set(meta["params"]) >= {"alpha", "beta", "gamma", "i"}
    assert ctx7.curve.origin is not None
    assert not ctx7.curve.tau_is_degenerate()
    assert ctx7.rng("a").integers(1000) == ctx7.rng("a").integers(1000)


def test_specialization_rejects_bad_primes():
    with pytest.raises(ValueError):
        create_specialization(31)
