"""Numerical tolerances shared by the whole pipeline."""

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    """Tolerance knobs with their default values.

    ``clearance`` and ``point_eq`` are relative to the branch-point scale
    (the largest modulus of a branch point); the rest are absolute.
    """

    clearance: float = 1e-6
    quad: float = 1e-11
    lattice: float = 1e-6
    point_eq: float = 1e-9
    cond_max: float = 1e12
    sigma_real: float = 1e-9
    max_depth: int = 40

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"tolerance {f.name} must be positive")

    def with_overrides(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


DEFAULT = Tolerances()
