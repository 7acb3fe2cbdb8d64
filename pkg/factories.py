from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from egeom import ECurve, ProjPoint, pin_origin
from gmod import FatPointModule, GradedModule, Simple2Module, cyclic_quotient, fat_point_module, point_module, simple2_module
from models import RunConfig
from qalg import QuadraticPresentation, presentation_A, presentation_S
from scalar import FieldContract, specialize_params, tower_field
from utils import (
    DEFAULT_SEED,
    MAX_RESAMPLE,
    DegenerateConfiguration,
    DegenerateSpecialization,
    ExhaustedSearch,
    parse_primes,
    validate_prime,
)


def create_field(data: dict) -> FieldContract:
    mode = data.get("mode", "specialized").lower().strip()

    if mode == "symbolic":
        return tower_field()
    elif mode == "specialized":
        prime = data.get("prime")
        if not prime:
            raise ValueError("prime is required in specialized mode")
        return specialize_params(validate_prime(int(prime)), int(data.get("seed", DEFAULT_SEED)))
    else:
        raise ValueError(f"Unknown mode: {mode!r}")


def create_presentation(data: dict, F: FieldContract) -> QuadraticPresentation:
    algebra = data.get("algebra", "").lower().strip()
    cutoff = data.get("cutoff")
    cutoff = int(cutoff) if cutoff is not None else None

    if algebra in ("s", "sklyanin"):
        return presentation_S(F, cutoff)
    elif algebra in ("a", "twist"):
        return presentation_A(F, cutoff)
    else:
        raise ValueError(f"Unknown algebra: {algebra!r}")


def create_module(data: dict, pres: QuadraticPresentation) -> GradedModule | FatPointModule | Simple2Module:
    """
    Build a module from a dict such as {"kind": "line", "forms": [[...], [...]]}.
    Vectors may be given as field elements or as parameter expressions.
    """
    F = pres.F
    kind = data.get("kind", "").lower().strip()
    cutoff = data.get("cutoff")
    cutoff = int(cutoff) if cutoff is not None else None

    def vector(values) -> list:
        return [F.value(v) if isinstance(v, str) else v for v in values]

    if kind == "point":
        if "point" not in data:
            raise ValueError("point is required for a point module")
        return point_module(pres, ProjPoint.of(F, vector(data["point"])), cutoff)
    elif kind in ("line", "cyclic"):
        forms = [vector(w) for w in data.get("forms", [])]
        if kind == "line" and len(forms) != 2:
            raise ValueError(f"a line module needs 2 forms, got {len(forms)}")
        return cyclic_quotient(pres, forms, cutoff)
    elif kind == "fat":
        if pres.label != "S":
            raise ValueError(f"fat point modules are built from S point modules, got {pres.label!r}")
        return fat_point_module(pres, ProjPoint.of(F, vector(data["point"])), cutoff)
    elif kind == "simple":
        return simple2_module(F, int(data.get("index", 0)), cutoff if cutoff is not None else 3)
    else:
        raise ValueError(f"Unknown module kind: {kind!r}")


def create_config(data: dict) -> RunConfig:
    primes = data.get("primes", ())
    if isinstance(primes, str):
        primes = parse_primes(primes)
    out = data.get("out")
    config = RunConfig(
        suite=str(data.get("suite", "all")).lower().strip(),
        mode=str(data.get("mode", "specialized")).lower().strip(),
        primes=tuple(int(p) for p in primes),
        seed=int(data.get("seed", DEFAULT_SEED)),
        cutoff=int(data["cutoff"]) if data.get("cutoff") is not None else None,
        jobs=int(data.get("jobs", 1)),
        out=Path(out) if out else None,
        verbosity=int(data.get("verbosity", 1)),
        dump_modules=bool(data.get("dump_modules", False)),
    )
    return config.validate()

# ---------------------------------------------------------------------------
# Field contexts
# ---------------------------------------------------------------------------

@dataclass
class FieldContext:
    """Everything the suites share on one field."""
    F: FieldContract
    S: QuadraticPresentation
    A: QuadraticPresentation
    curve: ECurve
    seed: int
    label: str
    metadata: dict = field(default_factory=dict)
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def is_finite(self) -> bool:
        return self.F.is_finite

    def rng(self, stream: str) -> np.random.Generator:
        """A generator per named stream, so suites do not disturb each other."""
        return np.random.default_rng([self.seed, sum(stream.encode())])


def create_symbolic_context(cutoff: int | None = None, seed: int = DEFAULT_SEED) -> FieldContext:
    F = tower_field()
    return FieldContext(F, presentation_S(F, cutoff), presentation_A(F, cutoff), ECurve(F), seed, "tower",
                        metadata={"field": "tower", "seed": seed})


def create_specialization(prime: int, seed: int = DEFAULT_SEED, cutoff: int | None = None) -> FieldContext:
    """
    Parameters over F_{p^2} with E smooth, four singular pencil members,
    a pinned origin and tau outside E[4]. A rejected draw moves to the
    next seed, up to MAX_RESAMPLE times.
    """
    validate_prime(prime)
    rejected = []
    for attempt in range(MAX_RESAMPLE):
        s = seed + attempt
        F = specialize_params(prime, s)
        try:
            curve = ECurve(F)
            curve.singular_members()
            curve, origin = pin_origin(curve, np.random.default_rng(s))
            if curve.tau_is_degenerate():
                raise DegenerateSpecialization(f"tau = {curve.tau.to_str(F)} lies in E[4]")
        except (DegenerateSpecialization, DegenerateConfiguration) as exc:
            rejected.append({"seed": s, "reason": str(exc)})
            continue
        metadata = {
            "field": F.name,
            "prime": prime,
            "seed": s,
            "params": {k: F.to_str(v) for k, v in sorted(F.params.items())},
            "origin": origin,
            "rejected": rejected,
        }
        return FieldContext(F, presentation_S(F, cutoff), presentation_A(F, cutoff), curve, s, F.name, metadata)
    raise ExhaustedSearch(f"no usable specialization over F_{prime * prime} after {MAX_RESAMPLE} seeds")
